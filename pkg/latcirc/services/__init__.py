"""
Oracle, simulation, mapping, estimation and verification services.
"""
