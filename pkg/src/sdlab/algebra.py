"""Block upper-triangular subalgebras of ``M_n(C)``.

A :class:`BlockStructure` ``(n_1, ..., n_k)`` fixes the block-diagonal algebra
(the range of :func:`phi`) and the block upper-triangular algebra.  The trace
is always the normalized one, ``trace(identity) == 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from sdlab.errors import DimensionMismatch, SdlabError
from sdlab.linalg import INVERTIBLE_RATIO, as_matrix, op_norm, singular_values

#: membership tolerance is MEMBERSHIP_TOL * max(1, ||x||) unless given explicitly
MEMBERSHIP_TOL = 1e-10


@dataclass(frozen=True)
class BlockStructure:
    sizes: tuple
    _labels: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise SdlabError(f"block sizes must be positive integers, got {self.sizes!r}")
        object.__setattr__(self, "sizes", sizes)
        labels = np.repeat(np.arange(len(sizes)), sizes)
        labels.setflags(write=False)
        object.__setattr__(self, "_labels", labels)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def boundaries(self) -> tuple:
        return (0,) + tuple(int(b) for b in np.cumsum(self.sizes))

    @property
    def diag_mask(self) -> np.ndarray:
        """True on entries inside the diagonal blocks."""
        return self._labels[:, None] == self._labels[None, :]

    @property
    def lower_mask(self) -> np.ndarray:
        """True on entries strictly below the block diagonal."""
        return self._labels[:, None] > self._labels[None, :]

    @property
    def upper_mask(self) -> np.ndarray:
        """True on the block upper-triangular pattern (diagonal blocks included)."""
        return ~self.lower_mask

    def blocks(self):
        """Yield ``slice`` objects of the diagonal blocks."""
        b = self.boundaries
        for i in range(self.k):
            yield slice(b[i], b[i + 1])

    # construction helpers

    @classmethod
    def parse(cls, text: str) -> "BlockStructure":
        try:
            return cls(tuple(int(s) for s in text.strip().split(",")))
        except ValueError as exc:
            raise SdlabError(f"bad block structure {text!r}: expected e.g. '2,3,1'") from exc

    @classmethod
    def ones(cls, n: int) -> "BlockStructure":
        return cls((1,) * n)

    @classmethod
    def whole(cls, n: int) -> "BlockStructure":
        return cls((n,))

    @classmethod
    def halves(cls, n: int) -> "BlockStructure":
        if n == 1:
            return cls((1,))
        return cls((n // 2, n - n // 2))

    @classmethod
    def head1(cls, n: int) -> "BlockStructure":
        if n == 1:
            return cls((1,))
        return cls((1, n - 1))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BlockStructure":
        """Uniform random composition of ``n``."""
        cuts = np.flatnonzero(rng.random(n - 1) < 0.5) + 1
        edges = np.concatenate(([0], cuts, [n]))
        return cls(tuple(int(s) for s in np.diff(edges)))

    def __str__(self):
        return ",".join(str(s) for s in self.sizes)


def _check_dim(x: np.ndarray, b: BlockStructure):
    if x.shape[0] != b.n:
        raise DimensionMismatch(f"matrix is {x.shape[0]}x{x.shape[0]}, blocks {b} sum to {b.n}")


def _tol(x, tol: Optional[float]) -> float:
    if tol is not None:
        return tol
    return MEMBERSHIP_TOL * max(1.0, op_norm(x))


def trace(x) -> complex:
    """Normalized trace ``(1/n) sum_i x_ii``."""
    x = as_matrix(x)
    return complex(np.trace(x) / x.shape[0])


def phi(x, b: BlockStructure) -> np.ndarray:
    """Conditional expectation: keep the diagonal blocks, zero everything else."""
    x = as_matrix(x)
    _check_dim(x, b)
    return np.where(b.diag_mask, x, 0)


def in_subdiagonal(x, b: BlockStructure, tol: Optional[float] = None) -> bool:
    """Is ``x`` block upper triangular (entries below the block diagonal within ``tol``)?"""
    x = as_matrix(x)
    _check_dim(x, b)
    t = _tol(x, tol)
    low = np.abs(x[b.lower_mask])
    return bool(low.size == 0 or low.max() <= t)


def in_diagonal(x, b: BlockStructure, tol: Optional[float] = None) -> bool:
    """Is ``x`` block diagonal within ``tol``?"""
    x = as_matrix(x)
    _check_dim(x, b)
    t = _tol(x, tol)
    off = np.abs(x[~b.diag_mask])
    return bool(off.size == 0 or off.max() <= t)


def in_a_cap_a_inv(x, b: BlockStructure, tol: Optional[float] = None) -> bool:
    """Invertible, block upper triangular, with block upper-triangular inverse."""
    x = as_matrix(x)
    _check_dim(x, b)
    if not in_subdiagonal(x, b, tol):
        return False
    s = singular_values(x).values
    if not (s[0] > 0 and s[-1] > INVERTIBLE_RATIO * s[0]):
        return False
    return in_subdiagonal(np.linalg.inv(x), b, tol if tol is None else tol / s[-1])


def split_upper_lower(x, b: BlockStructure) -> tuple[np.ndarray, np.ndarray]:
    """Write ``x = a + c*`` with ``a, c`` block upper triangular.

    ``a`` is the block upper part (diagonal blocks included), ``c`` the adjoint
    of the part strictly below the block diagonal.
    """
    x = as_matrix(x)
    _check_dim(x, b)
    a = np.where(b.upper_mask, x, 0)
    c = np.conj(np.where(b.lower_mask, x, 0)).T
    return a, c


def block_determinants(x, b: BlockStructure) -> Sequence[complex]:
    x = as_matrix(x)
    _check_dim(x, b)
    return [complex(np.linalg.det(x[s, s])) for s in b.blocks()]
