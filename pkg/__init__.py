"""
GS-MODAC - graph-based dynamic configuration of multi-objective evolutionary search
"""

__version__ = "0.1.0"
