"""tusv - representation sieves for ternary sums of polygonal-type numbers."""

__version__ = "0.1.0"
