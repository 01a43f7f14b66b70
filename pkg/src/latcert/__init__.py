"""latcert: exact-arithmetic lattice forms, pullbacks, and realization certificates."""

__version__ = "0.1.0"
