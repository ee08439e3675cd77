"""Cuspidal divisor class groups of non-split Cartan modular curves X+ns(p)."""

__version__ = "0.1.0"
