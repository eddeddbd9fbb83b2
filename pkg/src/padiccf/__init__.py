"""P-adic continued fractions with extraneous denominators over number fields."""

__version__ = "0.1.0"
