"""
Tests for the fedql package.
"""
