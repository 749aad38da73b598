"""
Generated from the VERSION file at release time, keep the two in sync.
"""
VERSION = '0.1.0'
