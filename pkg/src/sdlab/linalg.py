"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; :func:`as_matrix`
validates and converts.  LAPACK (through ``numpy.linalg``) does the heavy
lifting; :func:`jacobi_eigvalsh` is a from-scratch cyclic Jacobi solver kept
as an independent cross-check for the Hermitian eigenvalue path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from sdlab.errors import (
    DomainError,
    NoConvergence,
    NotHermitian,
    NotPositiveDefinite,
    SdlabError,
)

#: relative Hermitian-symmetry tolerance for eigen/matrix-function inputs
HERMITIAN_TOL = 1e-10
#: invertibility gate: s_min > INVERTIBLE_RATIO * s_max
INVERTIBLE_RATIO = 1e-8
#: positive-definiteness gate for Cholesky: lambda_min > CHOLESKY_TOL * lambda_max
CHOLESKY_TOL = 1e-14


def as_matrix(x) -> np.ndarray:
    """Return ``x`` as a square, finite ``complex128`` array (a copy only if needed)."""
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise SdlabError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise SdlabError("matrix has non-finite entries")
    return a


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def adjoint(x: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(x))


@dataclass(frozen=True)
class Spectrum:
    """Descending real spectrum, optionally with the matching unitary of vectors."""

    values: np.ndarray
    vectors: Optional[np.ndarray] = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if np.any(np.diff(v) > 0):
            raise ValueError("spectrum values must be non-increasing")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return len(self.values)


def op_norm(x) -> float:
    """Operator (spectral) norm, i.e. the largest singular value."""
    x = as_matrix(x)
    return float(np.linalg.svd(x, compute_uv=False)[0])


def _check_hermitian(x: np.ndarray, tol: float) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(x))))
    if np.max(np.abs(x - adjoint(x))) > tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    return 0.5 * (x + adjoint(x))


def hermitian_eigen(x, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Eigendecomposition ``x = V diag(values) V*`` with values descending."""
    x = _check_hermitian(as_matrix(x), tol)
    try:
        w, v = np.linalg.eigh(x)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    return Spectrum(w[::-1].copy(), v[:, ::-1].copy())


def eigvalsh(x, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Descending eigenvalues of a Hermitian matrix (no vectors)."""
    x = _check_hermitian(as_matrix(x), tol)
    try:
        return np.linalg.eigvalsh(x)[::-1].copy()
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergence(str(exc)) from exc


def singular_values(x, tol: Optional[float] = None, vectors: bool = False) -> Spectrum:
    """Descending singular values of ``x``.

    With ``vectors=True`` the returned unitary holds the right singular vectors,
    i.e. the eigenvectors of ``|x|``.  ``tol`` is accepted for interface symmetry;
    LAPACK's SVD has its own convergence criterion.
    """
    x = as_matrix(x)
    try:
        if vectors:
            _, s, vh = np.linalg.svd(x)
            return Spectrum(s, adjoint(vh))
        return Spectrum(np.linalg.svd(x, compute_uv=False))
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergence(str(exc)) from exc


def is_invertible(x, ratio: float = INVERTIBLE_RATIO) -> bool:
    s = singular_values(x).values
    return bool(s[-1] > ratio * s[0]) if s[0] > 0 else False


def modulus(x) -> np.ndarray:
    """``|x| = (x* x)^(1/2)`` computed from the SVD."""
    x = as_matrix(x)
    _, s, vh = np.linalg.svd(x)
    v = adjoint(vh)
    return (v * s) @ vh


def qr(x) -> tuple[np.ndarray, np.ndarray]:
    """QR factorization with the diagonal of ``r`` real and non-negative.

    Entries of ``r`` below the diagonal are exact zeros.
    """
    x = as_matrix(x)
    q, r = np.linalg.qr(x)
    d = np.diag(r)
    mag = np.abs(d)
    phase = np.ones_like(d)
    nz = mag > 0
    phase[nz] = d[nz] / mag[nz]
    q = q * phase
    r = np.conj(phase)[:, None] * r
    r = np.triu(r)
    r[np.diag_indices_from(r)] = np.abs(np.diag(r))
    return q, r


def cholesky_upper(x, tol: float = CHOLESKY_TOL) -> np.ndarray:
    """Upper-triangular ``z`` with positive diagonal and ``z* z = x``."""
    x = as_matrix(x)
    try:
        x = _check_hermitian(x, HERMITIAN_TOL)
    except NotHermitian as exc:
        raise NotPositiveDefinite("matrix is not Hermitian") from exc
    w = np.linalg.eigvalsh(x)
    if not (w[-1] > 0 and w[0] > tol * w[-1]):
        raise NotPositiveDefinite(
            f"min eigenvalue {w[0]:.3e} not above {tol:.1e} * max eigenvalue {w[-1]:.3e}"
        )
    try:
        low = np.linalg.cholesky(x)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    return np.triu(adjoint(low))


def matrix_function(x, f: Callable, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Apply ``f`` to a Hermitian PSD matrix through its eigendecomposition.

    Eigenvalues within ``tol * ||x||`` below zero are clipped to zero; anything
    more negative raises :class:`DomainError`.
    """
    spec = hermitian_eigen(x, tol)
    lam = spec.values
    scale = max(1.0, abs(lam[0]), abs(lam[-1]))
    if lam[-1] < -tol * scale:
        raise DomainError(f"matrix is not PSD (min eigenvalue {lam[-1]:.3e})")
    lam = np.clip(lam, 0.0, None)
    fl = np.asarray(f(lam), dtype=float)
    v = spec.vectors
    return (v * fl) @ adjoint(v)


def psd_min_eig(x) -> float:
    """Smallest eigenvalue of the Hermitian part of ``x``."""
    x = as_matrix(x)
    return float(np.linalg.eigvalsh(0.5 * (x + adjoint(x)))[0])


def jacobi_eigvalsh(x, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by the cyclic Jacobi method.

    The complex ``n x n`` problem is embedded as the real symmetric ``2n x 2n``
    matrix ``[[Re, -Im], [Im, Re]]``, whose spectrum is that of ``x`` with every
    eigenvalue doubled.  Returns the ``n`` values descending.
    """
    x = _check_hermitian(as_matrix(x), HERMITIAN_TOL)
    n = x.shape[0]
    a = np.block([[x.real, -x.imag], [x.imag, x.real]])
    m = 2 * n
    norm = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * norm:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                small = 1e-18 * (abs(a[p, p]) + abs(a[q, q]) + norm)
                if abs(apq) <= small:
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
    else:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.sort(np.diag(a))[::-1]
    return w[::2].copy()
