"""
embednum - bounds on embedding numbers of 3-manifolds in #n S2xS2
"""

__version__ = "1.0.0"
