"""Desk-scale numerical laboratory for the degenerate Monge-Ampere equation
det D2u = |x1|^alpha in the plane and its partial-Legendre companion operator."""

__version__ = "0.1.0"
