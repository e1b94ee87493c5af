"""
Reference values and helpers for testing.
"""
