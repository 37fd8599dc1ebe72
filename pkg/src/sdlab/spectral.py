"""Generalized s-numbers at matrix scale.

For an ``n x n`` matrix with normalized trace, ``t -> mu_t(x)`` is the step
function equal to the j-th largest singular value on ``[(j-1)/n, j/n)`` and
zero from ``t = 1`` on.  Every integral below is an exact piecewise-linear sum
over those steps; there is no quadrature anywhere.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from sdlab.errors import DomainError, NotInvertible
from sdlab.linalg import INVERTIBLE_RATIO, adjoint, as_matrix, hermitian_eigen, singular_values

#: snap t to the grid j/n when within this distance (in units of 1/n)
GRID_SNAP = 1e-12


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Non-increasing, non-negative step function on ``[0, 1)`` with ``n`` equal cells."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("StepFunction needs a non-empty 1-d value list")
        if np.any(~np.isfinite(v)) or np.any(v < 0):
            raise ValueError("StepFunction values must be finite and >= 0")
        if np.any(np.diff(v) > 0):
            raise ValueError("StepFunction values must be non-increasing")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return bool(np.array_equal(self.values, other.values))

    __hash__ = None

    @property
    def n(self) -> int:
        return self.values.size

    def __call__(self, t: float) -> float:
        """Right-continuous evaluation; zero for ``t >= 1``."""
        if t < 0:
            raise DomainError("t must be >= 0")
        if t >= 1:
            return 0.0
        j = _cell(t, self.n)
        return float(self.values[j]) if j < self.n else 0.0

    def integral(self, t: float) -> float:
        return integrate_steps(self.values, t)

    def profile(self) -> np.ndarray:
        """Integrals at the breakpoints ``j/n`` for ``j = 1..n``."""
        return np.cumsum(self.values) / self.n

    def to_json(self) -> str:
        return json.dumps([float(v) for v in self.values])

    @classmethod
    def from_json(cls, text: str) -> "StepFunction":
        return cls(json.loads(text))


def _cell(t: float, n: int) -> int:
    """Index of the cell containing ``t`` with grid snapping."""
    tn = t * n
    r = round(tn)
    if abs(tn - r) <= GRID_SNAP * max(1, n):
        return int(r)
    return int(math.floor(tn))


def integrate_steps(values, t: float) -> float:
    """``int_0^t`` of the step function with the given per-cell values."""
    if not 0 <= t <= 1:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    v = np.asarray(values, dtype=float)
    n = v.size
    tn = t * n
    r = round(tn)
    if abs(tn - r) <= GRID_SNAP * max(1, n):
        return float(np.sum(v[: int(r)]) / n)
    k = int(math.floor(tn))
    return float((np.sum(v[:k]) + (tn - k) * v[k]) / n)


def mu(x) -> StepFunction:
    """s-number step function of ``x``."""
    return StepFunction(singular_values(x).values)


def mu_power(x, p: float) -> StepFunction:
    """s-numbers of ``|x|**p``, which are the s-numbers of ``x`` raised to ``p``."""
    return StepFunction(singular_values(x).values ** p)


def sigma(x, t: float) -> float:
    """``Sigma_t(x) = int_0^t mu_s(x) ds``."""
    return integrate_steps(singular_values(x).values, t)


def sigma_profile(x) -> np.ndarray:
    """``Sigma_{j/n}(x)`` for ``j = 1..n``."""
    return mu(x).profile()


def _log_svals(x, min_sv_ratio: float) -> np.ndarray:
    s = singular_values(x).values
    if not (s[0] > 0 and s[-1] > min_sv_ratio * s[0]):
        raise NotInvertible(
            f"s_min/s_max = {s[-1] / s[0] if s[0] > 0 else 0.0:.3e} not above {min_sv_ratio:.1e}"
        )
    return np.log(s)


def log_sigma(x, t: float, min_sv_ratio: float = INVERTIBLE_RATIO) -> float:
    """``int_0^t log mu_s(x) ds``; refuses (NotInvertible) instead of returning -inf."""
    return integrate_steps(_log_svals(x, min_sv_ratio), t)


def log_sigma_profile(x, min_sv_ratio: float = INVERTIBLE_RATIO) -> np.ndarray:
    ls = _log_svals(x, min_sv_ratio)
    return np.cumsum(ls) / ls.size


def trace_f(x, f: Callable) -> float:
    """``tau(f(|x|)) = (1/n) sum_j f(s_j(x))``."""
    s = singular_values(x).values
    return float(np.mean(f(s)))


def fk_det(x) -> float:
    """Fuglede-Kadison determinant ``(prod_j s_j)^(1/n) = |det x|^(1/n)``."""
    s = singular_values(x).values
    if s[-1] == 0:
        return 0.0
    return float(np.exp(np.mean(np.log(s))))


def variational_sigma(x, j: int) -> float:
    """Brute-force ``sup tau(x p)`` over rank-``j`` projections diagonal in an eigenbasis of ``x``.

    ``x`` must be Hermitian.  Enumerates all ``C(n, j)`` coordinate projections in
    the eigenbasis and evaluates ``tau(x p)`` by explicit matrix products, so it
    shares nothing with the sorted-sum path of :func:`sigma` beyond the
    eigenvectors.  Intended for ``n <= 10``.
    """
    x = as_matrix(x)
    n = x.shape[0]
    if j == 0:
        return 0.0
    v = hermitian_eigen(x).vectors
    best = -np.inf
    for cols in itertools.combinations(range(n), j):
        w = v[:, cols]
        p = w @ adjoint(w)
        best = max(best, float(np.real(np.trace(x @ p))) / n)
    return best
