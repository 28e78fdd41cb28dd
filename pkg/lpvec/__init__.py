"""
lpvec - least models of definite logic programs in vector spaces
"""

__version__ = "0.1.0"
