"""Symbolic scalar functions ``f`` on ``[0, inf)`` that are increasing with ``f o exp`` convex.

Functions are small frozen dataclasses, so they hash, compare, print back to
their text form and carry the convexity metadata that the equality diagnosis
needs.  Text grammar (whitespace-free)::

    spec     := "sum:" weighted ("+" weighted)* | atom
    weighted := number "*" atom
    atom     := "pow:" number | "log1p_pow:" number | "log" | "sqrt"
              | "affine:" number ":" number
              | "compose(" spec "," spec ")"        outer first
              | "atpow(" spec "," number ")"        t -> f(t**p)
              | "(" spec ")"
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from sdlab.errors import DomainError, SdlabError


def _num(x: float) -> str:
    return repr(float(x))


class FunctionSpec:
    """Base class.  Subclasses implement ``_eval`` on a float array."""

    #: f o exp strictly convex (drives the equality diagnosis)
    strictly_convex_after_exp: bool = False
    #: f strictly increasing (injective)
    strictly_increasing: bool = True
    #: f convex in the ordinary sense on [0, inf)
    convex: bool = False
    strictly_convex: bool = False
    #: f increasing, continuous, f o exp convex -- by construction
    in_class: bool = True
    #: f needs t > 0 (log-type)
    needs_positive: bool = False

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0) or np.any(np.isnan(arr)):
            raise DomainError(f"{self} is defined on [0, inf) only")
        if self.needs_positive and np.any(arr <= 0):
            raise DomainError(f"{self} needs strictly positive arguments")
        with np.errstate(divide="ignore", over="ignore"):
            out = self._eval(arr)
        return out if out.ndim else float(out)

    def _eval(self, t: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError


def evaluate(f: FunctionSpec, t):
    """Pointwise value of ``f``; accepts scalars or arrays."""
    return f(t)


@dataclass(frozen=True)
class Pow(FunctionSpec):
    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError("Pow needs p > 0")
        object.__setattr__(self, "p", float(self.p))

    strictly_convex_after_exp = True

    @property
    def convex(self):
        return self.p >= 1

    @property
    def strictly_convex(self):
        return self.p > 1

    def _eval(self, t):
        return np.power(t, self.p)

    def __str__(self):
        return f"pow:{_num(self.p)}"


@dataclass(frozen=True)
class Sqrt(FunctionSpec):
    strictly_convex_after_exp = True

    def _eval(self, t):
        return np.sqrt(t)

    def __str__(self):
        return "sqrt"


@dataclass(frozen=True)
class Log1pPow(FunctionSpec):
    """``t -> log(1 + t**p)``."""

    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError("Log1pPow needs p > 0")
        object.__setattr__(self, "p", float(self.p))

    strictly_convex_after_exp = True

    def _eval(self, t):
        return np.log1p(np.power(t, self.p))

    def __str__(self):
        return f"log1p_pow:{_num(self.p)}"


@dataclass(frozen=True)
class Log(FunctionSpec):
    # log o exp is the identity: convex but not strictly
    needs_positive = True

    def _eval(self, t):
        return np.log(t)

    def __str__(self):
        return "log"


@dataclass(frozen=True)
class Affine(FunctionSpec):
    """``t -> slope * t + intercept``.  Any slope is representable; only slope >= 0 is in the class."""

    slope: float
    intercept: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "slope", float(self.slope))
        object.__setattr__(self, "intercept", float(self.intercept))

    convex = True

    @property
    def strictly_increasing(self):
        return self.slope > 0

    @property
    def strictly_convex_after_exp(self):
        return self.slope > 0

    @property
    def in_class(self):
        return self.slope >= 0

    def _eval(self, t):
        return self.slope * t + self.intercept

    def __str__(self):
        return f"affine:{_num(self.slope)}:{_num(self.intercept)}"


@dataclass(frozen=True)
class AffineCombo(FunctionSpec):
    """Non-negative combination ``sum_i c_i f_i``."""

    coeffs: tuple
    parts: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        parts = tuple(self.parts)
        if len(coeffs) != len(parts) or not parts:
            raise ValueError("AffineCombo needs matching, non-empty coeffs and parts")
        if any(c < 0 for c in coeffs) or not any(c > 0 for c in coeffs):
            raise ValueError("AffineCombo coefficients must be >= 0 with one > 0")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "parts", parts)

    def _active(self):
        return [f for c, f in zip(self.coeffs, self.parts) if c > 0]

    @property
    def strictly_convex_after_exp(self):
        return any(f.strictly_convex_after_exp for f in self._active())

    @property
    def strictly_increasing(self):
        return any(f.strictly_increasing for f in self._active())

    @property
    def convex(self):
        return all(f.convex for f in self._active())

    @property
    def strictly_convex(self):
        return self.convex and any(f.strictly_convex for f in self._active())

    @property
    def in_class(self):
        return all(f.in_class for f in self.parts)

    @property
    def needs_positive(self):
        return any(f.needs_positive for f in self.parts)

    def _eval(self, t):
        return sum(c * f._eval(t) for c, f in zip(self.coeffs, self.parts))

    def __str__(self):
        def part(f):
            # a nested sum is grouped, otherwise "+" would be ambiguous
            return f"({f})" if isinstance(f, AffineCombo) else str(f)

        return "sum:" + "+".join(f"{_num(c)}*{part(f)}" for c, f in zip(self.coeffs, self.parts))


OUTER_KINDS = (Pow, Affine)


@dataclass(frozen=True)
class Compose(FunctionSpec):
    """``outer(inner(t))`` with ``outer`` an increasing convex primitive (Pow(q >= 1) or Affine(slope >= 0))."""

    outer: FunctionSpec
    inner: FunctionSpec

    def __post_init__(self):
        o = self.outer
        if not isinstance(o, OUTER_KINDS) or not (o.convex and o.in_class):
            raise ValueError(f"outer must be Pow(q>=1) or Affine(slope>=0), got {o}")

    @property
    def strictly_convex_after_exp(self):
        o, i = self.outer, self.inner
        return (i.strictly_convex_after_exp and o.strictly_increasing) or (
            o.strictly_convex and i.strictly_increasing
        )

    @property
    def strictly_increasing(self):
        return self.outer.strictly_increasing and self.inner.strictly_increasing

    @property
    def convex(self):
        return self.inner.convex

    @property
    def strictly_convex(self):
        o, i = self.outer, self.inner
        return (i.strictly_convex and o.strictly_increasing) or (
            o.strictly_convex and i.convex and i.strictly_increasing
        )

    @property
    def in_class(self):
        return self.inner.in_class

    @property
    def needs_positive(self):
        return self.inner.needs_positive

    def _eval(self, t):
        inner = self.inner._eval(t)
        if isinstance(self.outer, Pow) and np.any(inner < 0):
            raise DomainError(f"{self}: inner value negative under a power")
        return self.outer._eval(inner)

    def __str__(self):
        return f"compose({self.outer},{self.inner})"


@dataclass(frozen=True)
class AtPower(FunctionSpec):
    """``t -> inner(t**p)``."""

    inner: FunctionSpec
    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError("AtPower needs p > 0")
        object.__setattr__(self, "p", float(self.p))

    @property
    def strictly_convex_after_exp(self):
        return self.inner.strictly_convex_after_exp

    @property
    def strictly_increasing(self):
        return self.inner.strictly_increasing

    @property
    def convex(self):
        return self.inner.convex and self.p >= 1

    @property
    def strictly_convex(self):
        i = self.inner
        return self.p >= 1 and (i.strictly_convex or (self.p > 1 and i.convex and i.strictly_increasing))

    @property
    def in_class(self):
        return self.inner.in_class

    @property
    def needs_positive(self):
        return self.inner.needs_positive

    def _eval(self, t):
        return self.inner._eval(np.power(t, self.p))

    def __str__(self):
        return f"atpow({self.inner},{_num(self.p)})"


# ---------------------------------------------------------------- membership

DEFAULT_GRID = tuple(2.0 ** np.linspace(-10, 10, 81))
CONVEXITY_SLACK = 1e-7


class Membership(NamedTuple):
    ok: bool
    witness: Optional[str] = None

    def __bool__(self):
        return self.ok


def check_membership(f, grid=None, slack: float = CONVEXITY_SLACK) -> Membership:
    """Grid falsifier for "increasing, and convex after exp".

    Not a proof: returns ``Membership(False, witness)`` on the first detected
    violation of monotonicity or of midpoint convexity of ``f o exp``.
    """
    g = np.asarray(DEFAULT_GRID if grid is None else grid, dtype=float)
    if g.ndim != 1 or np.any(g <= 0) or np.any(np.diff(g) <= 0):
        raise ValueError("grid must be strictly ascending and positive")
    try:
        vals = np.asarray(f(g), dtype=float)
    except DomainError as exc:
        return Membership(False, f"domain error on grid: {exc}")
    if not np.all(np.isfinite(vals)):
        return Membership(False, "non-finite value on grid")
    scale = np.maximum(1.0, np.abs(vals))
    drops = vals[1:] - vals[:-1] < -slack * np.maximum(scale[1:], scale[:-1])
    if np.any(drops):
        k = int(np.argmax(drops))
        return Membership(False, f"decreasing: f({g[k]:.6g})={vals[k]:.6g} > f({g[k+1]:.6g})={vals[k+1]:.6g}")

    u = np.log(g)
    i, j = np.triu_indices(len(g), k=2)
    mid = np.exp(0.5 * (u[i] + u[j]))
    try:
        fmid = np.asarray(f(mid), dtype=float)
    except DomainError as exc:
        return Membership(False, f"domain error at midpoints: {exc}")
    chord = 0.5 * (vals[i] + vals[j])
    bad = fmid > chord + slack * np.maximum(1.0, np.abs(chord))
    if np.any(bad):
        k = int(np.argmax(bad))
        return Membership(
            False,
            f"f o exp not midpoint-convex between log t={u[i[k]]:.6g} and {u[j[k]]:.6g}",
        )
    return Membership(True)


@functools.lru_cache(maxsize=256)
def default_membership(f: FunctionSpec) -> Membership:
    """Cached :func:`check_membership` on the default grid."""
    return check_membership(f)


# -------------------------------------------------------------------- parsing


class FuncSpecSyntaxError(SdlabError):
    def __init__(self, msg: str, offset: int):
        super().__init__(f"{msg} at byte {offset}")
        self.offset = offset


_NUMBER = re.compile(rb"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


class _Parser:
    def __init__(self, text: str):
        self.src = text.encode("utf-8")
        self.pos = 0

    def error(self, msg):
        raise FuncSpecSyntaxError(msg, self.pos)

    def peek(self, lit: bytes) -> bool:
        return self.src.startswith(lit, self.pos)

    def take(self, lit: bytes) -> bool:
        if self.peek(lit):
            self.pos += len(lit)
            return True
        return False

    def expect(self, lit: bytes):
        if not self.take(lit):
            self.error(f"expected {lit.decode()!r}")

    def number(self) -> float:
        m = _NUMBER.match(self.src, self.pos)
        if not m:
            self.error("expected a number")
        self.pos = m.end()
        return float(m.group())

    def spec(self) -> FunctionSpec:
        if self.take(b"sum:"):
            start = self.pos
            coeffs, parts = [], []
            while True:
                coeffs.append(self.number())
                self.expect(b"*")
                parts.append(self.atom())
                if not self.take(b"+"):
                    break
            try:
                return AffineCombo(tuple(coeffs), tuple(parts))
            except ValueError as exc:
                raise FuncSpecSyntaxError(str(exc), start) from None
        return self.atom()

    def atom(self) -> FunctionSpec:
        start = self.pos
        try:
            if self.take(b"("):
                inner = self.spec()
                self.expect(b")")
                return inner
            if self.take(b"pow:"):
                return Pow(self.number())
            if self.take(b"log1p_pow:"):
                return Log1pPow(self.number())
            if self.take(b"affine:"):
                slope = self.number()
                self.expect(b":")
                return Affine(slope, self.number())
            if self.take(b"compose("):
                outer = self.spec()
                self.expect(b",")
                inner = self.spec()
                self.expect(b")")
                return Compose(outer, inner)
            if self.take(b"atpow("):
                inner = self.spec()
                self.expect(b",")
                p = self.number()
                self.expect(b")")
                return AtPower(inner, p)
            if self.take(b"log"):
                return Log()
            if self.take(b"sqrt"):
                return Sqrt()
        except ValueError as exc:
            if isinstance(exc, FuncSpecSyntaxError):
                raise
            raise FuncSpecSyntaxError(str(exc), start) from None
        self.error("unknown function")


def parse(text: str) -> FunctionSpec:
    """Parse the text form, e.g. ``"sum:0.5*pow:1+0.5*log1p_pow:2"``."""
    p = _Parser(text.strip())
    f = p.spec()
    if p.pos != len(p.src):
        p.error("trailing characters")
    return f
