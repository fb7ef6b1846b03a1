"""
Utility functions package
"""
