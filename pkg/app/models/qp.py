"""Half-space constraints and safety-filter QP models."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.enums import QpStatus

Vector = tuple[float, ...]


class HalfspaceConstraint(BaseModel):
    """Affine inequality a^T u <= b over the filtered input."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    normal: Vector
    offset: float
    active_hint: bool = False

    @property
    def is_vacuous(self) -> bool:
        """Zero normal with a nonnegative offset constrains nothing."""
        return not any(self.normal) and self.offset >= 0.0

    def violation(self, u: np.ndarray) -> float:
        return float(np.dot(self.normal, u) - self.offset)

    def satisfied_by(self, u: np.ndarray, tol: float = 1e-9) -> bool:
        return self.violation(u) <= tol


class QpProblem(BaseModel):
    """min 1/2 ||u - u_nom||^2 subject to half-spaces and an optional box."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    u_nom: Vector
    constraints: list[HalfspaceConstraint] = Field(default_factory=list)
    bounds: list[tuple[float, float]] | None = None

    @model_validator(mode="after")
    def _check_dimensions(self) -> "QpProblem":
        m = len(self.u_nom)
        for i, c in enumerate(self.constraints):
            if len(c.normal) != m:
                raise ValueError(f"constraint {i} has dimension {len(c.normal)}, expected {m}")
        if self.bounds is not None:
            if len(self.bounds) != m:
                raise ValueError(f"bounds have dimension {len(self.bounds)}, expected {m}")
            for i, (lo, hi) in enumerate(self.bounds):
                if lo > hi:
                    raise ValueError(f"bound {i} has lo > hi")
        return self

    @property
    def dimension(self) -> int:
        return len(self.u_nom)

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        """
        All inequality rows as (A, b) with A u <= b.

        Rows ``0..k-1`` are the half-space constraints; when bounds are present
        component ``i`` contributes row ``k + 2i`` (upper) and ``k + 2i + 1`` (lower).
        """
        m = self.dimension
        rows = [np.asarray(c.normal, dtype=float) for c in self.constraints]
        rhs = [c.offset for c in self.constraints]
        if self.bounds is not None:
            for i, (lo, hi) in enumerate(self.bounds):
                e = np.zeros(m)
                e[i] = 1.0
                rows.append(e)
                rhs.append(hi)
                rows.append(-e)
                rhs.append(-lo)
        if not rows:
            return np.zeros((0, m)), np.zeros(0)
        return np.vstack(rows), np.asarray(rhs, dtype=float)


class QpSolution(BaseModel):
    """Solver output with its optimality certificate."""

    model_config = ConfigDict(frozen=True)

    u_star: Vector
    active_set: list[int] = Field(default_factory=list)
    multipliers: Vector = ()
    kkt_residual: float = 0.0
    status: QpStatus = QpStatus.OPTIMAL
    iterations: int = 0
    infeasibility_witness: Vector | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status is QpStatus.OPTIMAL
