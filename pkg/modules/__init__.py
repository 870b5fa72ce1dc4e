"""
Domain-wall partition function engine - Modules package.
"""
