"""
Tests package for the domain-wall partition function engine.
"""
