"""Motivic Poincaré series of affine toric varieties, computed exactly."""

__version__ = "0.1.0"
