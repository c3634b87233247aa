"""
Group MD - group-logarithm mirror descent and simplex QP benchmark
"""
__version__ = "0.1.0"
