"""Bidirectional soliton laboratory: closed-form tau functions, determinant oracles and PDE checks."""

__version__ = "0.1.0"
