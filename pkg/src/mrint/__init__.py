"""Order-2 integrability conditions for homogeneous potentials of degree -1."""

__version__ = "0.1.0"
