"""Bounded simplicity of automorphism groups of colored trees, mechanized."""

__version__ = "0.1.0"
