"""U(1) gauge theory on G2-manifolds: exact algebra and verification tools."""

__version__ = "0.1.0"
