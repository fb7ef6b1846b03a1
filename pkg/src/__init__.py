"""
alpha Trace Norm Toolkit - Source Package
"""
