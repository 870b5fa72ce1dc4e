"""
Engines package - the independent routes to the domain-wall partition function.
"""
