"""
Cogwheel Lab Package
"""
