"""Checkers for the trace, majorization and determinant inequalities.

Each checker returns a :class:`CheckReport`.  ``margin`` is always
``rhs - lhs`` so that an input satisfying the inequality has ``margin >= 0``; the
status is decided against ``eq_tol * max(1, |lhs|, |rhs|)``.

Profile checkers (inequalities between integrals of s-numbers) compare both
sides at every breakpoint ``t = j/n``, ``j = 1..n``.  Both sides are
piecewise linear with the same breakpoints, so this covers all of ``[0, 1]``.
The reported ``lhs/rhs/margin`` is the most negative breakpoint when one is
violated and the largest margin otherwise; ``t_profile`` holds all of them.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from sdlab.algebra import BlockStructure, in_a_cap_a_inv, in_subdiagonal, phi
from sdlab.errors import DomainError, NotInAlgebra, NotInvertible, NotPSD, SdlabError
from sdlab.factorization import positive_factor
from sdlab.funcspec import FunctionSpec, Log1pPow, Pow, default_membership
from sdlab.linalg import (
    INVERTIBLE_RATIO,
    adjoint,
    as_matrix,
    eigvalsh,
    identity,
    modulus,
    psd_min_eig,
    singular_values,
)
from sdlab.spectral import StepFunction, trace_f

HOLDS = "Holds"
EQUALITY = "EqualityWithinTol"
VIOLATED = "VIOLATED"
SKIPPED = "Skipped"

EQ_TOL = 1e-8
#: ||phi(a) - a|| <= PHI_FIXED_TOL * max(1, ||a||) counts as phi-fixed in diagnoses
PHI_FIXED_TOL = 1e-7
DEFAULT_EPS = (1.0, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10)
DYADIC_DEPTH = 6


@dataclass
class CheckReport:
    name: str
    lhs: Optional[float]
    rhs: Optional[float]
    margin: Optional[float]
    status: str
    reason: Optional[str] = None
    equality_diagnosis: Optional[dict] = None
    t_profile: Optional[list] = None
    #: smallest margin / scale over everything the checker compared
    worst_rel_margin: Optional[float] = None
    details: dict = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        return self.status == VIOLATED

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        return cls(**d)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj) if np.isfinite(obj) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _scale(lhs, rhs):
    return max(1.0, abs(lhs), abs(rhs))


def _classify(margin: float, scale: float, tol: float) -> str:
    if margin < -tol * scale:
        return VIOLATED
    if abs(margin) <= tol * scale:
        return EQUALITY
    return HOLDS


def skipped(name: str, reason: str, **details) -> CheckReport:
    return CheckReport(name, None, None, None, SKIPPED, reason=reason, details=details)


def scalar_report(name: str, lhs: float, rhs: float, tol: float = EQ_TOL, **details) -> CheckReport:
    lhs, rhs = float(lhs), float(rhs)
    margin = rhs - lhs
    scale = _scale(lhs, rhs)
    return CheckReport(
        name, lhs, rhs, margin, _classify(margin, scale, tol),
        worst_rel_margin=margin / scale, details=details,
    )


def profile_report(name: str, lhs: Sequence[float], rhs: Sequence[float], tol: float = EQ_TOL, **details) -> CheckReport:
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    margins = rhs - lhs
    scales = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    rel = margins / scales
    if np.any(rel < -tol):
        k = int(np.argmin(rel))
        status = VIOLATED
    elif np.all(np.abs(rel) <= tol):
        k = int(np.argmax(np.abs(rel)))
        status = EQUALITY
    else:
        k = int(np.argmax(rel))
        status = HOLDS
    details.setdefault("breakpoint", (k + 1) / len(margins))
    return CheckReport(
        name, float(lhs[k]), float(rhs[k]), float(margins[k]), status,
        t_profile=[float(m) for m in margins],
        worst_rel_margin=float(np.min(rel)),
        details=details,
    )


def _worse(report: CheckReport, rel: float, reason: str, tol: float) -> CheckReport:
    """Downgrade ``report`` to VIOLATED if an auxiliary relative margin fails."""
    rel = float(rel)
    report.worst_rel_margin = min(report.worst_rel_margin, rel)
    if rel < -tol:
        report.status = VIOLATED
        report.reason = reason if report.reason is None else f"{report.reason}; {reason}"
    return report


def _require_algebra(a: np.ndarray, b: BlockStructure, name: str):
    if not in_subdiagonal(a, b):
        raise NotInAlgebra(f"{name}: input is not block upper triangular for blocks {b}")


def _invertible(s: np.ndarray) -> bool:
    return bool(s[0] > 0 and s[-1] > INVERTIBLE_RATIO * s[0])


def _phi_diagnosis(a: np.ndarray, pa: np.ndarray, status: str, assert_fixed: bool) -> dict:
    """Compare "equality reported" against "phi(a) == a".

    ``consistent`` is False when phi(a) == a exactly but equality was not
    reported, or (only if ``assert_fixed``) when equality was reported while
    ``||phi(a) - a||`` exceeds ``PHI_FIXED_TOL * max(1, ||a||)``.
    """
    diff = a - pa
    dist = float(np.linalg.norm(diff, 2)) if np.any(diff) else 0.0
    predicted = status == EQUALITY
    consistent = True
    if dist == 0.0 and not predicted:
        consistent = False
    if assert_fixed and predicted:
        anorm = float(np.linalg.norm(a, 2))
        consistent = consistent and dist <= PHI_FIXED_TOL * max(1.0, anorm)
    return {
        "predicted_phi_fixed": predicted,
        "actual_phi_distance": dist,
        "asserted": assert_fixed,
        "consistent": consistent,
    }


# ------------------------------------------------------------------ checkers


def check_schwarz(x, b: BlockStructure, eq_tol: float = EQ_TOL) -> CheckReport:
    """``|phi(x)|^2 <= phi(|x|^2)``, with equality iff ``phi(x) = x``.

    The operator inequality is checked through the smallest eigenvalue of the
    gap; the scalar sides are the traces, so the margin is ``tau`` of the
    (PSD) gap and vanishes exactly when the gap does.
    """
    x = as_matrix(x)
    px = phi(x, b)
    big = phi(adjoint(x) @ x, b)
    small = adjoint(px) @ px
    gap_min = psd_min_eig(big - small)
    n = x.shape[0]
    lhs = float(np.real(np.trace(small))) / n
    rhs = float(np.real(np.trace(big))) / n
    rep = scalar_report("schwarz", lhs, rhs, eq_tol, gap_min_eig=gap_min)
    op_scale = max(1.0, float(np.linalg.norm(x, 2)) ** 2)
    _worse(rep, gap_min / op_scale, "phi(|x|^2) - |phi(x)|^2 not PSD", eq_tol)
    rep.equality_diagnosis = _phi_diagnosis(x, px, rep.status, assert_fixed=False)
    # equality here is quadratic in the off-block part: ||x - phi(x)||_F^2 / n
    off = float(np.linalg.norm(x - px))
    rep.equality_diagnosis["consistent"] = rep.equality_diagnosis["consistent"] and (
        rep.status != EQUALITY or off <= np.sqrt(2 * n * eq_tol * _scale(lhs, rhs))
    )
    return rep


def check_sigma_phi(x, b: BlockStructure, eq_tol: float = EQ_TOL) -> CheckReport:
    """``Sigma_t(phi(x)) <= Sigma_t(x)`` for PSD ``x``."""
    x = as_matrix(x)
    try:
        w = eigvalsh(x)
    except SdlabError as exc:
        raise NotPSD(f"sigma_phi: {exc}") from exc
    if w[-1] < -1e-10 * max(1.0, abs(w[0])):
        raise NotPSD(f"sigma_phi: min eigenvalue {w[-1]:.3e} < 0")
    lhs = StepFunction(singular_values(phi(x, b)).values).profile()
    rhs = np.cumsum(np.clip(w, 0, None)) / len(w)
    return profile_report("sigma_phi", lhs, rhs, eq_tol)


def check_jensen_seed(a, b: BlockStructure, eq_tol: float = EQ_TOL) -> CheckReport:
    """``Sigma_t(|phi(a)|^2) <= Sigma_t(|a|^2)`` for ``a`` in the algebra."""
    a = as_matrix(a)
    _require_algebra(a, b, "jensen_seed")
    sp = singular_values(phi(a, b)).values
    sa = singular_values(a).values
    n = len(sa)
    return profile_report("jensen_seed", np.cumsum(sp**2) / n, np.cumsum(sa**2) / n, eq_tol)


def check_dyadic_powers(a, b: BlockStructure, depth: int = DYADIC_DEPTH, eq_tol: float = EQ_TOL) -> CheckReport:
    """``Sigma_t(|phi(a)|^(1/2^k)) <= Sigma_t(|a|^(1/2^k))`` for ``k = 1..depth``."""
    a = as_matrix(a)
    _require_algebra(a, b, "dyadic_powers")
    sa = singular_values(a).values
    if not _invertible(sa):
        raise NotInvertible("dyadic_powers needs an invertible matrix")
    sp = singular_values(phi(a, b)).values
    n = len(sa)
    powers = 0.5 ** np.arange(1, depth + 1)
    # depth-major: rows k = 1..depth, columns j = 1..n
    lhs = np.cumsum(sp[None, :] ** powers[:, None], axis=1) / n
    rhs = np.cumsum(sa[None, :] ** powers[:, None], axis=1) / n
    rep = profile_report("dyadic_powers", lhs.ravel(), rhs.ravel(), eq_tol, depth=depth)
    k = int(round(rep.details.pop("breakpoint") * depth * n)) - 1
    rep.details["at_power"] = float(powers[k // n])
    rep.details["breakpoint"] = (k % n + 1) / n
    rel = (rhs - lhs) / np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    rep.details["per_depth_worst_rel_margin"] = rel.min(axis=1).tolist()
    return rep


def check_log_majorization(a, b: BlockStructure, eq_tol: float = EQ_TOL) -> CheckReport:
    """``int_0^t log mu_s(phi(a)) ds <= int_0^t log mu_s(a) ds`` with equality at ``t = 1``.

    The ``t = 1`` equality is required whenever ``a`` is invertible with
    block upper-triangular inverse, and is cross-checked against
    ``|det phi(a)| = |det a|`` from LU determinants.
    """
    a = as_matrix(a)
    _require_algebra(a, b, "log_majorization")
    pa = phi(a, b)
    sa = singular_values(a).values
    sp = singular_values(pa).values
    if not _invertible(sa):
        return skipped("log_majorization", "a is singular at the invertibility gate")
    if not _invertible(sp):
        return skipped("log_majorization", "phi(a) is singular at the invertibility gate")
    n = len(sa)
    lhs = np.cumsum(np.log(sp)) / n
    rhs = np.cumsum(np.log(sa)) / n
    _, logdet_a = np.linalg.slogdet(a)
    _, logdet_p = np.linalg.slogdet(pa)
    rep = profile_report(
        "log_majorization", lhs, rhs, eq_tol,
        log_fk_det_a=logdet_a / n, log_fk_det_phi=logdet_p / n,
    )
    if in_a_cap_a_inv(a, b):
        end = rhs[-1] - lhs[-1]
        scale = _scale(lhs[-1], rhs[-1])
        _worse(rep, -abs(end) / scale, "t=1 equality fails", eq_tol)
        det_gap = (logdet_a - logdet_p) / n
        _worse(rep, -abs(det_gap) / scale, "|det phi(a)| != |det a|", eq_tol)
        rep.details["t1_equality_margin"] = float(end)
        rep.details["det_identity_gap"] = float(det_gap)
    return rep


def check_hlp_transfer(
    phi_sf, psi_sf, f: FunctionSpec, log_scale: bool = False, eq_tol: float = EQ_TOL
) -> CheckReport:
    """Transfer of majorization through a convex function.

    If the decreasing step functions satisfy ``int_0^t phi <= int_0^t psi`` for
    all ``t`` with equal totals, then ``int g(phi) <= int g(psi)`` for convex
    ``g``.  ``g = f`` (which must be convex), or ``g = f o exp`` when
    ``log_scale`` is set and the step values are logarithms.
    """
    name = "hlp_transfer"
    u = np.asarray(phi_sf.values if isinstance(phi_sf, StepFunction) else phi_sf, dtype=float)
    v = np.asarray(psi_sf.values if isinstance(psi_sf, StepFunction) else psi_sf, dtype=float)
    if u.shape != v.shape or u.ndim != 1:
        return skipped(name, "step functions live on different grids")
    if np.any(np.diff(u) > 0) or np.any(np.diff(v) > 0):
        return skipped(name, "step functions must be non-increasing")
    n = len(u)
    cu, cv = np.cumsum(u) / n, np.cumsum(v) / n
    sc = np.maximum(1.0, np.maximum(np.abs(cu), np.abs(cv)))
    if np.any(cu[:-1] - cv[:-1] > eq_tol * sc[:-1]):
        return skipped(name, "prefix integrals of phi exceed those of psi")
    if abs(cu[-1] - cv[-1]) > eq_tol * sc[-1]:
        return skipped(name, "total integrals differ")
    if log_scale:
        g = lambda t: f(np.exp(t))  # noqa: E731
        strict = f.strictly_convex_after_exp
        if not f.in_class:
            return skipped(name, f"{f} o exp is not convex")
    else:
        g = f
        strict = f.strictly_convex
        if not f.convex:
            return skipped(name, f"{f} is not convex")
    lhs = float(np.mean(g(u)))
    rhs = float(np.mean(g(v)))
    rep = scalar_report(name, lhs, rhs, eq_tol)
    dist = float(np.max(np.abs(u - v)))
    predicted = rep.status == EQUALITY
    rep.equality_diagnosis = {
        "predicted_phi_fixed": predicted,
        "actual_phi_distance": dist,
        "asserted": strict,
        "consistent": (not strict) or (not predicted) or dist <= PHI_FIXED_TOL * max(1.0, float(np.max(np.abs(v)))),
    }
    return rep


def _require_class(f: FunctionSpec):
    if not f.in_class:
        raise DomainError(f"{f} is not increasing with f o exp convex")
    mem = default_membership(f)
    if not mem:
        raise DomainError(f"{f} fails the membership check: {mem.witness}")


def check_jensen_main(a, b: BlockStructure, f: FunctionSpec, eq_tol: float = EQ_TOL) -> CheckReport:
    """``tau(f(|phi(a)|)) <= tau(f(|a|))``.

    Equality with ``a`` invertible and ``f o exp`` strictly convex forces
    ``phi(a) = a``; the diagnosis checks that, and also that ``phi(a) = a``
    exactly always yields a reported equality.
    """
    a = as_matrix(a)
    _require_algebra(a, b, "jensen_main")
    _require_class(f)
    pa = phi(a, b)
    sa = singular_values(a).values
    lhs = trace_f(pa, f)
    rhs = float(np.mean(f(sa)))
    rep = scalar_report("jensen_main", lhs, rhs, eq_tol, f=str(f))
    strict = f.strictly_convex_after_exp and _invertible(sa)
    rep.equality_diagnosis = _phi_diagnosis(a, pa, rep.status, assert_fixed=strict)
    return rep


def check_cor_app(a, b: BlockStructure, p: float, eq_tol: float = EQ_TOL) -> CheckReport:
    """Power-trace and ``Delta(1 + |.|^p)`` forms of the main inequality.

    Main fields hold the determinant form ``Delta(1 + |phi(a)|^p) <= Delta(1 + |a|^p)``,
    computed as ``exp`` of the ``log1p_pow`` trace; ``details["trace_power"]``
    holds ``tau(|phi(a)|^p) <= tau(|a|^p)``.
    """
    a = as_matrix(a)
    _require_algebra(a, b, "cor_app")
    if not p > 0:
        raise DomainError("cor_app needs p > 0")
    pa = phi(a, b)
    sa = singular_values(a).values
    sp = singular_values(pa).values
    pw = Pow(p)
    lp = Log1pPow(p)
    tr = scalar_report("cor_app.trace_power", np.mean(pw(sp)), np.mean(pw(sa)), eq_tol)
    log_l, log_r = float(np.mean(lp(sp))), float(np.mean(lp(sa)))
    rep = scalar_report(
        "cor_app", np.exp(log_l), np.exp(log_r), eq_tol,
        p=float(p), log_lhs=log_l, log_rhs=log_r,
        trace_power={"lhs": tr.lhs, "rhs": tr.rhs, "margin": tr.margin, "status": tr.status},
    )
    _worse(rep, tr.worst_rel_margin, "power-trace form violated", eq_tol)
    rep.equality_diagnosis = _phi_diagnosis(a, pa, rep.status, assert_fixed=_invertible(sa))
    return rep


def check_lin(T, r, p: float, eq_tol: float = EQ_TOL) -> CheckReport:
    """``det(I + |T|^p) >= prod_i det(I + |T_ii|^p)``, equality iff ``T`` is block diagonal.

    ``r`` is either the size of the leading block (two-block form) or a full
    :class:`BlockStructure`.  Accumulated in log space and exponentiated once.
    """
    T = as_matrix(T)
    n = T.shape[0]
    if isinstance(r, BlockStructure):
        b = r
    else:
        r = int(r)
        if not 0 < r <= n:
            raise DomainError(f"lin: leading block size {r} out of range 1..{n}")
        b = BlockStructure((r, n - r)) if r < n else BlockStructure((n,))
    _require_algebra(T, b, "lin")
    if not p > 0:
        raise DomainError("lin needs p > 0")
    st = singular_values(T).values
    log_rhs = float(np.sum(np.log1p(st**p)))
    log_lhs = 0.0
    for blk in b.blocks():
        sb = singular_values(T[blk, blk]).values
        log_lhs += float(np.sum(np.log1p(sb**p)))
    rep = scalar_report(
        "lin", np.exp(log_lhs), np.exp(log_rhs), eq_tol,
        blocks=str(b), p=float(p), log_lhs=log_lhs, log_rhs=log_rhs,
    )
    rep.equality_diagnosis = _phi_diagnosis(T, phi(T, b), rep.status, assert_fixed=True)
    return rep


def check_drury(X, eq_tol: float = EQ_TOL) -> CheckReport:
    """``det(I + X* X) >= prod_i (1 + |x_ii|^2)`` for upper-triangular ``X``, equality iff diagonal.

    The left determinant comes from an LU ``slogdet``, independent of the
    singular-value route used by :func:`check_lin`.
    """
    X = as_matrix(X)
    n = X.shape[0]
    b = BlockStructure.ones(n)
    _require_algebra(X, b, "drury")
    log_lhs = float(np.sum(np.log1p(np.abs(np.diag(X)) ** 2)))
    sign, log_rhs = np.linalg.slogdet(identity(n) + adjoint(X) @ X)
    rep = scalar_report(
        "drury", np.exp(log_lhs), np.exp(float(log_rhs)), eq_tol,
        log_lhs=log_lhs, log_rhs=float(log_rhs),
    )
    rep.equality_diagnosis = _phi_diagnosis(X, phi(X, b), rep.status, assert_fixed=True)
    return rep


def check_epsilon_path(
    a, b: BlockStructure, f: FunctionSpec, eps_list: Sequence[float] = DEFAULT_EPS, eq_tol: float = EQ_TOL
) -> CheckReport:
    """Regularization route for possibly singular ``a``.

    For each ``eps``: ``z`` upper triangular with ``z* z = eps I + a* a``; checks
    ``|phi(z)|^2 >= eps I + |phi(a)|^2``, ``|phi(a)| <= |phi(z)|``,
    ``tau(f(|phi(a)|)) <= tau(f(|phi(z)|)) <= tau(f(|z|))`` and
    ``tau(f(|z|)) = mean f(sqrt(eps + s_j(a)^2))``.  The right-hand sides must
    decrease with ``eps`` and stay above ``tau(f(|a|))``.  Reported
    ``rhs`` is the value at the smallest ``eps``.
    """
    a = as_matrix(a)
    _require_algebra(a, b, "epsilon_path")
    _require_class(f)
    eps = [float(e) for e in eps_list]
    if not eps or any(e <= 0 for e in eps) or any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
        raise ValueError("eps_list must be positive and strictly decreasing")
    n = a.shape[0]
    pa = phi(a, b)
    sa = singular_values(a).values
    lhs = trace_f(pa, f)
    target = float(np.mean(f(sa)))
    ata = adjoint(a) @ a
    mod_pa = modulus(pa)
    ata_norm = float(np.linalg.norm(ata, 2))
    worst = np.inf
    failures = []
    rows = []
    prev = None
    for e in eps:
        z = positive_factor(e * identity(n) + ata)
        pz = phi(z, b)
        sc_op = max(1.0, ata_norm + e)
        gap = psd_min_eig(adjoint(pz) @ pz - e * identity(n) - adjoint(pa) @ pa) / sc_op
        mono = psd_min_eig(modulus(pz) - mod_pa) / max(1.0, np.sqrt(sc_op))
        t_pz = trace_f(pz, f)
        t_z = trace_f(z, f)
        t_direct = float(np.mean(f(np.sqrt(e + sa**2))))
        links = {
            "gap": gap,
            "modulus_order": mono,
            "phi_a_le_phi_z": (t_pz - lhs) / _scale(lhs, t_pz),
            "phi_z_le_z": (t_z - t_pz) / _scale(t_pz, t_z),
            "z_identity": -abs(t_z - t_direct) / _scale(t_z, t_direct),
            "above_limit": (t_z - target) / _scale(t_z, target),
        }
        if prev is not None:
            links["decreasing"] = (prev - t_z) / _scale(prev, t_z)
        prev = t_z
        for k, v in links.items():
            worst = min(worst, v)
            if v < -eq_tol:
                failures.append(f"{k} at eps={e:g}")
        rows.append({"eps": e, "tau_f_phi_z": t_pz, "tau_f_z": t_z, "tau_f_direct": t_direct,
                     "strict_first_link": bool(t_pz > lhs)})
    rep = scalar_report("epsilon_path", lhs, prev, eq_tol, f=str(f), path=rows, limit_target=target,
                        limit_gap=prev - target)
    rep.worst_rel_margin = min(rep.worst_rel_margin, worst)
    if failures:
        rep.status = VIOLATED
        rep.reason = "; ".join(failures)
    # rhs only approximates tau(f(|a|)), so equality is reported but never asserted
    diag = _phi_diagnosis(a, pa, rep.status, assert_fixed=False)
    diag["consistent"] = None
    rep.equality_diagnosis = diag
    return rep


# ------------------------------------------------------------------- registry

CHECKERS = (
    "schwarz",
    "sigma_phi",
    "jensen_seed",
    "dyadic_powers",
    "log_majorization",
    "hlp_transfer",
    "jensen_main",
    "cor_app",
    "lin",
    "drury",
    "epsilon_path",
)


def run_check(
    name: str,
    x,
    b: BlockStructure,
    f: Optional[FunctionSpec] = None,
    p: float = 1.0,
    depth: int = DYADIC_DEPTH,
    eps_list: Sequence[float] = DEFAULT_EPS,
    eq_tol: float = EQ_TOL,
) -> CheckReport:
    """Dispatch a checker by name on a single matrix.

    ``hlp_transfer`` is fed the log s-numbers of ``phi(x)`` and ``x`` with
    ``f o exp`` as the convex function.
    """
    f = f if f is not None else Pow(1.0)
    if name == "schwarz":
        return check_schwarz(x, b, eq_tol)
    if name == "sigma_phi":
        return check_sigma_phi(x, b, eq_tol)
    if name == "jensen_seed":
        return check_jensen_seed(x, b, eq_tol)
    if name == "dyadic_powers":
        return check_dyadic_powers(x, b, depth, eq_tol)
    if name == "log_majorization":
        return check_log_majorization(x, b, eq_tol)
    if name == "hlp_transfer":
        x = as_matrix(x)
        _require_algebra(x, b, "hlp_transfer")
        sp = singular_values(phi(x, b)).values
        sa = singular_values(x).values
        if not (_invertible(sa) and _invertible(sp)):
            return skipped("hlp_transfer", "log s-numbers need an invertible matrix")
        return check_hlp_transfer(np.log(sp), np.log(sa), f, log_scale=True, eq_tol=eq_tol)
    if name == "jensen_main":
        return check_jensen_main(x, b, f, eq_tol)
    if name == "cor_app":
        return check_cor_app(x, b, p, eq_tol)
    if name == "lin":
        return check_lin(x, b, p, eq_tol)
    if name == "drury":
        return check_drury(x, eq_tol)
    if name == "epsilon_path":
        return check_epsilon_path(x, b, f, eps_list, eq_tol)
    raise SdlabError(f"unknown checker {name!r}; known: {', '.join(CHECKERS)}")
