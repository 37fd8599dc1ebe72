"""Constructive factorizations inside the block upper-triangular algebra."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from sdlab.algebra import BlockStructure, in_subdiagonal
from sdlab.errors import NoConvergence, NotInvertible
from sdlab.linalg import (
    CHOLESKY_TOL,
    INVERTIBLE_RATIO,
    adjoint,
    as_matrix,
    cholesky_upper,
    qr,
    singular_values,
)

NEWTON_TOL = 1e-11
NEWTON_MAX_ITER = 100


class ArvesonFactors(NamedTuple):
    u: np.ndarray
    a_tilde: np.ndarray
    #: True when ``u`` itself is block upper triangular
    certified: bool


def arveson_factor(a, b: BlockStructure) -> ArvesonFactors:
    """Write an invertible ``a`` as ``u @ a_tilde``, ``u`` unitary, ``a_tilde`` invertible upper triangular.

    ``a_tilde`` has positive diagonal, so it and its inverse are upper
    triangular and lie in the algebra for every block structure.  When ``a``
    itself is in the algebra of ``b``, ``u`` is expected to be as well;
    ``certified`` reports whether it is.
    """
    a = as_matrix(a)
    s = singular_values(a).values
    if not (s[0] > 0 and s[-1] > INVERTIBLE_RATIO * s[0]):
        raise NotInvertible("arveson_factor needs an invertible matrix")
    u, a_tilde = qr(a)
    certified = in_subdiagonal(a, b) and in_subdiagonal(u, b)
    return ArvesonFactors(u, a_tilde, certified)


def positive_factor(x, b: BlockStructure = None, tol: float = CHOLESKY_TOL) -> np.ndarray:
    """``z`` upper triangular with positive diagonal and ``z* z = x``.

    ``b`` is accepted for symmetry with :func:`arveson_factor`; ``z`` lies in
    the algebra (and has its inverse there) for every block structure.
    """
    return cholesky_upper(x, tol)


class NewtonResult(NamedTuple):
    result: np.ndarray
    #: full trajectory, ``iterates[0] is x``
    iterates: list


def _hermitian(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + adjoint(m))


def _pd_inverse(m: np.ndarray) -> np.ndarray:
    try:
        factor = scipy.linalg.cho_factor(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - iterates stay PD
        raise NoConvergence(f"iterate lost definiteness: {exc}") from exc
    return _hermitian(scipy.linalg.cho_solve(factor, np.eye(m.shape[0], dtype=m.dtype)))


def newton_sqrt(x, max_iter: int = NEWTON_MAX_ITER, tol: float = NEWTON_TOL) -> NewtonResult:
    """Square root of a positive definite ``x`` by ``x_{m+1} = (x_m + x x_m^{-1}) / 2``, ``x_1 = x``.

    Stops once ``||x_m^2 - x|| <= tol * ||x||``.  The recurrence is run in its
    coupled (Denman-Beavers) form ``y <- (y + z^{-1})/2``, ``z <- (z + y^{-1})/2``
    from ``y = x``, ``z = I``: in exact arithmetic ``y`` runs through the same
    ``x_m`` and ``z^{-1} = x x_m^{-1}``, but the uncoupled form amplifies
    rounding errors once ``cond(x)`` exceeds about 9.  Inverses come from
    Cholesky solves.  From the second iterate on the sequence decreases in
    the PSD order; the first step increases on the part of the spectrum
    below 1.
    """
    x = as_matrix(x)
    cholesky_upper(x)  # raises NotPositiveDefinite
    x = _hermitian(x)
    xnorm = float(np.linalg.norm(x, 2))
    y, z = x.copy(), np.eye(x.shape[0], dtype=x.dtype)
    iterates = [y]
    for _ in range(max_iter + 1):
        if np.linalg.norm(y @ y - x, 2) <= tol * xnorm:
            return NewtonResult(y, iterates)
        if len(iterates) > max_iter:
            break
        y, z = _hermitian(0.5 * (y + _pd_inverse(z))), _hermitian(0.5 * (z + _pd_inverse(y)))
        iterates.append(y)
    raise NoConvergence(f"newton_sqrt: no convergence in {max_iter} iterations")
