"""Moatwalk - prime-lattice walks, lattice prime classification and moat searches."""

__version__ = "0.1.0"
