"""Exact Tor and syzygy computations over fiber products of finite local algebras."""

__version__ = "0.1.0"
