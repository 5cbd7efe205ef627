"""Exact verification of a crepant resolution of A^4/A_4 in characteristic 2."""
__version__ = "0.1.0"
