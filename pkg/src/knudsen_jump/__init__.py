"""stub during bootstrap"""
