"""Numerical services: dynamics, control, safety, QP and references."""

from app.services import control, dynamics, qp, reference, safety

__all__ = [
    "control",
    "dynamics",
    "qp",
    "reference",
    "safety",
]
