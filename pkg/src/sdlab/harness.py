"""Seeded ensembles and the randomized campaign runner.

Every trial draws its matrix from a Philox stream keyed by
``(master seed, crc32(cell key), trial index)``, so a trial's outcome depends
on nothing else and trials can run in any order or in parallel.
"""

from __future__ import annotations

import json
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from sdlab import __version__
from sdlab.algebra import BlockStructure
from sdlab.errors import SdlabError, UnknownEnsemble
from sdlab.funcspec import parse as parse_f
from sdlab.inequalities import (
    DEFAULT_EPS,
    DYADIC_DEPTH,
    EQ_TOL,
    EQUALITY,
    HOLDS,
    SKIPPED,
    VIOLATED,
    CheckReport,
    run_check,
)
from sdlab.matio import matrix_from_obj, matrix_to_obj

ENSEMBLES = ("ginibre", "upper_ginibre", "a_cap_ainv", "psd", "block_diag", "singular_upper")

DEFAULT_ENSEMBLE = {
    "schwarz": "ginibre",
    "sigma_phi": "psd",
    "jensen_seed": "upper_ginibre",
    "dyadic_powers": "upper_ginibre",
    "log_majorization": "a_cap_ainv",
    "hlp_transfer": "a_cap_ainv",
    "jensen_main": "upper_ginibre",
    "cor_app": "upper_ginibre",
    "lin": "upper_ginibre",
    "drury": "upper_ginibre",
    "epsilon_path": "singular_upper",
}

DEFAULT_F_SPECS = ("pow:0.5", "pow:1", "pow:2", "pow:3", "log1p_pow:1", "log1p_pow:2")
DEFAULT_P_VALUES = (0.5, 1.0, 2.0, 3.0)
DEFAULT_SIZES = (2, 4, 8, 16)
DEFAULT_BLOCKS = ("ones", "halves", "head1", "random")
LIN_P = 1.5
TIMING_FIELDS = ("wall_time_s",)


def rng_for(seed) -> np.random.Generator:
    """Counter-based generator for an int or a tuple of ints."""
    key = [int(s) for s in seed] if isinstance(seed, (tuple, list)) else int(seed)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def _ginibre(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n, 2))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


def generate(ensemble: str, n: int, b: Optional[BlockStructure], seed) -> np.ndarray:
    """Deterministic random matrix for ``(ensemble, n, b, seed)``.

    ``upper_ginibre`` and ``singular_upper`` are block upper triangular for
    ``b`` with exact zeros below the block diagonal; ``a_cap_ainv`` is upper
    triangular with diagonal moduli in ``[0.5, 2]``; ``psd`` is a Wishart
    matrix ``g g* / n``; ``block_diag`` lies in the range of ``phi``.
    """
    b = b if b is not None else BlockStructure.ones(n)
    if b.n != n:
        raise SdlabError(f"blocks {b} do not sum to n={n}")
    rng = rng_for(seed)
    if ensemble == "ginibre":
        return _ginibre(rng, n)
    if ensemble == "upper_ginibre":
        return np.where(b.upper_mask, _ginibre(rng, n), 0)
    if ensemble == "singular_upper":
        a = np.where(b.upper_mask, _ginibre(rng, n), 0)
        a[:, rng.integers(n)] = 0
        return a
    if ensemble == "a_cap_ainv":
        a = np.triu(_ginibre(rng, n))
        mod = rng.uniform(0.5, 2.0, n)
        ang = rng.uniform(0.0, 2 * np.pi, n)
        a[np.diag_indices(n)] = mod * np.exp(1j * ang)
        return a
    if ensemble == "psd":
        g = _ginibre(rng, n)
        x = g @ np.conj(g.T) / n
        return 0.5 * (x + np.conj(x.T))
    if ensemble == "block_diag":
        return np.where(b.diag_mask, _ginibre(rng, n), 0)
    raise UnknownEnsemble(f"unknown ensemble {ensemble!r}; known: {', '.join(ENSEMBLES)}")


def block_structure(name: str, n: int, rng: Optional[np.random.Generator] = None) -> BlockStructure:
    if name == "ones":
        return BlockStructure.ones(n)
    if name == "halves":
        return BlockStructure.halves(n)
    if name == "head1":
        return BlockStructure.head1(n)
    if name == "whole":
        return BlockStructure.whole(n)
    if name == "random":
        if rng is None:
            raise SdlabError("random block structure needs a generator")
        return BlockStructure.random(n, rng)
    return BlockStructure.parse(name)


# ------------------------------------------------------------------ config


@dataclass(frozen=True)
class CheckerSpec:
    name: str
    f: Optional[str] = None
    p: Optional[float] = None
    depth: Optional[int] = None
    ensemble: Optional[str] = None

    @property
    def label(self) -> str:
        extra = [f"{k}={v}" for k, v in (("f", self.f), ("p", self.p), ("depth", self.depth)) if v is not None]
        return self.name + (f"[{','.join(extra)}]" if extra else "")


@dataclass
class CampaignConfig:
    checkers: list = field(default_factory=list)
    sizes: tuple = DEFAULT_SIZES
    block_structures: tuple = DEFAULT_BLOCKS
    trials: int = 1000
    seed: int = 42
    eq_tol: float = EQ_TOL
    eps_list: tuple = DEFAULT_EPS
    f_specs: tuple = DEFAULT_F_SPECS
    p_values: tuple = DEFAULT_P_VALUES
    workers: int = 1

    def __post_init__(self):
        self.checkers = [c if isinstance(c, CheckerSpec) else _spec_from(c) for c in self.checkers]
        self.sizes = tuple(int(n) for n in self.sizes)
        self.block_structures = tuple(self.block_structures)
        self.eps_list = tuple(float(e) for e in self.eps_list)
        self.f_specs = tuple(self.f_specs)
        self.p_values = tuple(float(p) for p in self.p_values)

    def expanded(self) -> list:
        """Checker specs with f / p / depth / ensemble filled in."""
        out = []
        for c in self.checkers:
            if c.name not in DEFAULT_ENSEMBLE:
                raise SdlabError(f"unknown checker {c.name!r}")
            ens = c.ensemble or DEFAULT_ENSEMBLE[c.name]
            if c.name == "jensen_main" and c.f is None:
                out += [replace(c, f=f, ensemble=ens) for f in self.f_specs]
            elif c.name == "cor_app" and c.p is None:
                out += [replace(c, p=p, ensemble=ens) for p in self.p_values]
            elif c.name == "lin" and c.p is None:
                out.append(replace(c, p=LIN_P, ensemble=ens))
            elif c.name == "dyadic_powers" and c.depth is None:
                out.append(replace(c, depth=DYADIC_DEPTH, ensemble=ens))
            elif c.name in ("epsilon_path", "hlp_transfer") and c.f is None:
                out.append(replace(c, f="pow:1", ensemble=ens))
            else:
                out.append(replace(c, ensemble=ens))
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["checkers"] = [{k: v for k, v in asdict(c).items() if v is not None} for c in self.checkers]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise SdlabError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "CampaignConfig":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except (json.JSONDecodeError, TypeError) as exc:
            raise SdlabError(f"bad campaign config {path}: {exc}") from exc


def _spec_from(c) -> CheckerSpec:
    if isinstance(c, str):
        return CheckerSpec(c)
    if isinstance(c, dict):
        return CheckerSpec(**c)
    raise SdlabError(f"bad checker entry {c!r}")


def default_checkers() -> list:
    return [CheckerSpec(name) for name in (
        "schwarz", "sigma_phi", "jensen_seed", "dyadic_powers", "log_majorization",
        "jensen_main", "cor_app", "lin", "drury", "epsilon_path",
    )]


def default_config(**overrides) -> CampaignConfig:
    return CampaignConfig(checkers=default_checkers(), **overrides)


# ------------------------------------------------------------------ running


def cell_key(spec: CheckerSpec, n: int, blocks: str) -> str:
    return f"{spec.label}|n={n}|b={blocks}"


def trial_seed(master: int, key: str, trial: int) -> tuple:
    return (int(master), zlib.crc32(key.encode()), int(trial))


def trial_inputs(spec: CheckerSpec, n: int, blocks: str, master: int, trial: int):
    """Matrix and block structure of one trial."""
    seed = trial_seed(master, cell_key(spec, n, blocks), trial)
    b = block_structure(blocks, n, rng_for(seed + (1,)) if blocks == "random" else None)
    gen_b = BlockStructure.ones(n) if spec.name == "drury" else b
    return generate(spec.ensemble, n, gen_b, seed), b, seed


def run_one(spec: CheckerSpec, x, b: BlockStructure, cfg_eq_tol: float = EQ_TOL, eps_list=DEFAULT_EPS) -> CheckReport:
    """One checker evaluation; precondition errors become Skipped reports."""
    f = parse_f(spec.f) if spec.f else None
    try:
        return run_check(
            spec.name, x, b, f=f,
            p=spec.p if spec.p is not None else 1.0,
            depth=spec.depth if spec.depth is not None else DYADIC_DEPTH,
            eps_list=eps_list, eq_tol=cfg_eq_tol,
        )
    except SdlabError as exc:
        return CheckReport(spec.name, None, None, None, SKIPPED, reason=f"{type(exc).__name__}: {exc}")


def _run_cell(args):
    spec, n, blocks, cfg = args
    key = cell_key(spec, n, blocks)
    counts = {HOLDS: 0, EQUALITY: 0, VIOLATED: 0, SKIPPED: 0}
    worst = None
    worst_trial = None
    mismatches = []
    violations = []
    skip_reasons = {}
    for t in range(cfg.trials):
        x, b, seed = trial_inputs(spec, n, blocks, cfg.seed, t)
        rep = run_one(spec, x, b, cfg.eq_tol, cfg.eps_list)
        counts[rep.status] += 1
        if rep.status == SKIPPED:
            skip_reasons[rep.reason] = skip_reasons.get(rep.reason, 0) + 1
            continue
        if worst is None or rep.worst_rel_margin < worst:
            worst, worst_trial = rep.worst_rel_margin, t
        diag = rep.equality_diagnosis
        if diag is not None and diag.get("consistent") is False:
            mismatches.append(t)
        if rep.status == VIOLATED:
            violations.append(counterexample(spec, x, b, seed, t, rep))
    return {
        "cell": key,
        "checker": spec.label,
        "ensemble": spec.ensemble,
        "n": n,
        "blocks": blocks,
        "trials": cfg.trials,
        "counts": counts,
        "worst_rel_margin": worst,
        "worst_trial": worst_trial,
        "diagnosis_mismatches": mismatches,
        "skip_reasons": skip_reasons,
        "violations": violations,
    }


def counterexample(spec: CheckerSpec, x, b: BlockStructure, seed, trial: int, rep: CheckReport) -> dict:
    """Self-contained reproduction record for one trial."""
    return {
        "checker": asdict(spec),
        "blocks": str(b),
        "seed": list(seed),
        "trial": trial,
        "matrix": matrix_to_obj(x),
        "report": rep.to_dict(),
    }


def recheck(record: dict, eq_tol: float = EQ_TOL, eps_list=DEFAULT_EPS) -> CheckReport:
    """Re-run the checker stored in a :func:`counterexample` record."""
    spec = CheckerSpec(**record["checker"])
    x = matrix_from_obj(record["matrix"])
    return run_one(spec, x, BlockStructure.parse(record["blocks"]), eq_tol, eps_list)


def run_campaign(config: CampaignConfig) -> dict:
    """Run every (checker x size x block structure) cell; return the JSON-ready report."""
    t0 = time.perf_counter()
    specs = config.expanded()
    jobs = [(s, n, bl, config) for s in specs for n in config.sizes for bl in config.block_structures]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            cells = list(pool.map(_run_cell, jobs))
    else:
        cells = [_run_cell(j) for j in jobs]

    per_checker = {}
    for c in cells:
        agg = per_checker.setdefault(c["checker"], {
            "trials": 0, "holds": 0, "equality": 0, "violated": 0, "skipped": 0,
            "worst_rel_margin": None, "worst_cell": None, "diagnosis_mismatches": 0,
        })
        agg["trials"] += c["trials"]
        agg["holds"] += c["counts"][HOLDS]
        agg["equality"] += c["counts"][EQUALITY]
        agg["violated"] += c["counts"][VIOLATED]
        agg["skipped"] += c["counts"][SKIPPED]
        agg["diagnosis_mismatches"] += len(c["diagnosis_mismatches"])
        w = c["worst_rel_margin"]
        if w is not None and (agg["worst_rel_margin"] is None or w < agg["worst_rel_margin"]):
            agg["worst_rel_margin"], agg["worst_cell"] = w, c["cell"]
    return {
        "version": __version__,
        "seed": config.seed,
        # worker count does not affect results
        "config": {k: v for k, v in config.to_dict().items() if k != "workers"},
        "checkers": per_checker,
        "cells": cells,
        "total_trials": sum(c["trials"] for c in cells),
        "total_violations": sum(c["counts"][VIOLATED] for c in cells),
        "wall_time_s": time.perf_counter() - t0,
    }


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k not in TIMING_FIELDS}


def report_json(report: dict, strip: bool = False) -> str:
    return json.dumps(strip_timing(report) if strip else report, sort_keys=True, indent=1)


def write_counterexamples(report: dict, directory) -> list:
    """Write one JSON artifact per violation; return the paths."""
    paths = []
    vs = [v for c in report["cells"] for v in c["violations"]]
    if not vs:
        return paths
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for i, v in enumerate(vs):
        stem = f"counterexample_{i:04d}_{v['checker']['name']}"
        p = d / f"{stem}.json"
        p.write_text(json.dumps(v, sort_keys=True, indent=1) + "\n")
        # bare matrix file, loadable by `sdlab check --matrix`
        (d / f"{stem}.matrix.json").write_text(json.dumps(v["matrix"]) + "\n")
        paths.append(str(p))
    return paths
