"""Independent reference computations used to check the library.

None of these call into ``sdlab`` routines that share code with the thing
under test: determinants go through hand-written Gaussian elimination,
singular values through a Jacobi sweep on ``x* x``.
"""

from __future__ import annotations

import numpy as np

from sdlab.linalg import jacobi_eigvalsh

GOLDEN = (1 + np.sqrt(5)) / 2


def ginibre(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def unitary(rng, n):
    q, r = np.linalg.qr(ginibre(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def psd(rng, n, rank=None):
    g = ginibre(rng, n)[:, : rank or n]
    return g @ g.conj().T / n


def gauss_det(x) -> complex:
    """Determinant by partial-pivot Gaussian elimination."""
    a = np.array(x, dtype=complex)
    n = a.shape[0]
    det = 1.0 + 0j
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if a[piv, k] == 0:
            return 0j
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            det = -det
        det *= a[k, k]
        for i in range(k + 1, n):
            a[i, k:] -= a[i, k] / a[k, k] * a[k, k:]
    return det


def svals_jacobi(x) -> np.ndarray:
    """Singular values as square roots of Jacobi eigenvalues of ``x* x``, descending."""
    x = np.asarray(x, dtype=complex)
    ev = jacobi_eigvalsh(x.conj().T @ x)
    return np.sqrt(np.clip(np.sort(ev)[::-1], 0, None))


def top_sum_profile(ev) -> np.ndarray:
    """``(1/n) * sum of the top j values`` for j = 1..n."""
    ev = np.sort(np.asarray(ev, dtype=float))[::-1]
    return np.cumsum(ev) / len(ev)


def psd_sqrt(x) -> np.ndarray:
    w, v = np.linalg.eigh(x)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def pd_with_condition(rng, n, cond, lam_min=None):
    """Random PD matrix with condition number ``cond``; smallest eigenvalue ``lam_min`` if given."""
    u = unitary(rng, n)
    ev = np.exp(rng.uniform(0, np.log(cond), n))
    ev[0], ev[-1] = 1.0, cond
    scale = lam_min if lam_min is not None else np.exp(rng.uniform(-3, 3))
    x = (u * (scale * ev)) @ u.conj().T
    return 0.5 * (x + x.conj().T)
