"""
Test suite for qord.
"""
