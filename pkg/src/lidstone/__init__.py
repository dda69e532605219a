"""Multi-point Lidstone, Whittaker and Abel-Gontcharoff interpolation of entire functions."""
__version__ = "0.1.0"
