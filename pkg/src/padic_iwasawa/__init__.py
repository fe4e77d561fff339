"""p-adic logarithms of cyclotomic units and their Iwasawa-theoretic structure."""

__version__ = "0.1.0"
