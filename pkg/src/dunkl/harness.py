"""Corpus construction, sweep execution and report emission.

A sweep is described by one JSON document (:class:`ExperimentConfig`).  For
every weight parameter the corpus is built on the configured grid, every
theorem cell and equivalence study is evaluated on every applicable profile,
and the rows are assembled by sort key, so the output does not depend on
execution order.  With ``refine`` on, the sweep is repeated with doubled
quadrature nodes, a doubled ``t``-grid and doubled ``J``, and the relative
change of each summary bracket is reported.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import smoothness
from .besov import (BesovMethod, BesovParams, besov_norm, square_function_norm)
from .errors import ConfigurationError, DunklError, ExperimentError, InvalidParameterError
from .inequalities import (CSV_FIELDS, RatioSample, TheoremId, conjugate_exponent, eval_theorem,
                           extremal_family, extremal_study, make_sample)
from .measure import (DEFAULT_GRID, RadialGrid, RadialProfile, SpectralProfile, WeightParams, make_grid)
from .smoothness import direct_difference_norm, k_functional_realization, modulus, norm
from .transform import inverse_dunkl_transform_radial, set_kernel_cache_size

THREADS_ENV = "DUNKL_THREADS"
DRIFT_LIMIT = 0.10
STUDIES = ("OMEGA_DIFFERENCE", "OMEGA_REALIZATION", "BESOV_EQUIVALENCE", "BESOV_R_INDEPENDENCE",
           "LITTLEWOOD_PALEY")
# groups whose lower bracket end is tracked under refinement (two-sided equivalences)
EQUIVALENCES = set(STUDIES) | {"TITCHMARSH_P2"}
# theorems that only use the forward transform and spatial norms of f itself
FORWARD_ONLY = {"HAUSDORFF_YOUNG", "HARDY_LITTLEWOOD", "PITT_1", "PITT_2", "KELLOGG_1", "KELLOGG_2",
                "K1_SHARPNESS"}


# ---------------------------------------------------------------- corpus

def _bump01(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    m = np.abs(x) < 1
    out[m] = np.exp(-1.0 / (1.0 - x[m] ** 2))
    return out


def bandlimited_grids(base: RadialGrid, sigma: float) -> Tuple[RadialGrid, RadialGrid]:
    """Spatial and spectral grids for a profile of type ``sigma``.

    The spectral grid ends at ``1.25 sigma``; the spatial radius is the largest
    the spectral grid resolves.  All types share one kernel per weight.
    """
    S = 1.25 * sigma
    sg = base.scaled(S)
    rg = base.scaled(0.8 * base.size / S)
    return rg, sg


def bandlimited_bump(params: WeightParams, sigma: float, base: RadialGrid, label: str) -> RadialProfile:
    """``F^{-1}`` of a smooth bump supported in ``[sigma/2, sigma]``."""
    rg, sg = bandlimited_grids(base, sigma)
    vals = _bump01((sg.nodes - 0.75 * sigma) / (0.25 * sigma))
    f = inverse_dunkl_transform_radial(SpectralProfile(sg, vals, params, rg, band_limit=sigma))
    return RadialProfile(rg, f.samples, params, sg, vals, float(sigma), label, derived=True)


def _mixture(seed: int):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.25, 2.0, 3)
    b = rng.uniform(0.0, 1.0, 3)
    c = rng.uniform(0.5, 1.5, 3)

    def func(r):
        return sum(ci * (1 + bi * r * r) * np.exp(-ai * r * r) for ai, bi, ci in zip(a, b, c))
    return func


GENERATORS = {
    "gaussian": ("a",),
    "gaussian_mixture": ("seed",),
    "super_gaussian": (),
    "stretched": (),
    "bandlimited_bump": ("sigma",),
    "extremal": ("N", "eps"),
}


@dataclass(frozen=True)
class CorpusEntry:
    generator: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ConfigurationError(f"unknown generator {self.generator!r}")
        if set(self.params) != set(GENERATORS[self.generator]):
            raise ConfigurationError(f"{self.generator} takes parameters {GENERATORS[self.generator]}")

    @property
    def name(self) -> str:
        args = ",".join(f"{k}={self.params[k]}" for k in GENERATORS[self.generator])
        return f"{self.generator}({args})"

    @property
    def tags(self) -> set:
        if self.generator in ("bandlimited_bump", "extremal"):
            return {"bandlimited"} | ({"spectral_only"} if self.generator == "extremal" else set())
        if self.generator == "stretched":
            return {"forward_only"}
        return set()

    def to_dict(self) -> dict:
        return {"generator": self.generator, "params": dict(self.params)}


def corpus_id(entry: CorpusEntry, lam: float) -> str:
    return f"{entry.name}@lam={lam:g}"


def build_profile(entry: CorpusEntry, params: WeightParams, grid: RadialGrid) -> RadialProfile:
    label = corpus_id(entry, params.lambda_k)
    g, p = entry.generator, entry.params
    if g == "gaussian":
        a = float(p["a"])
        return RadialProfile.from_function(lambda r: np.exp(-a * r * r), params, grid, label)
    if g == "gaussian_mixture":
        return RadialProfile.from_function(_mixture(int(p["seed"])), params, grid, label)
    if g == "super_gaussian":
        return RadialProfile.from_function(lambda r: np.exp(-r ** 4), params, grid, label)
    if g == "stretched":
        return RadialProfile.from_function(lambda r: np.exp(-r), params, grid, label)
    if g == "bandlimited_bump":
        return bandlimited_bump(params, float(p["sigma"]), grid, label)
    f = extremal_family(int(p["N"]), float(p["eps"]), params)
    return replace(f, label=label)


def build_corpus(spec: Sequence, params: WeightParams, grid: Optional[RadialGrid] = None) -> List[RadialProfile]:
    """Profiles for the corpus entries (``CorpusEntry`` or ``{"generator", "params"}`` dicts)."""
    grid = grid or make_grid(*DEFAULT_GRID)
    out = []
    for e in spec:
        entry = e if isinstance(e, CorpusEntry) else CorpusEntry(e["generator"], dict(e.get("params", {})))
        out.append(build_profile(entry, params, grid))
    return out


# ---------------------------------------------------------------- config

def default_corpus() -> List[dict]:
    return [
        {"generator": "gaussian", "params": {"a": 0.5}},
        {"generator": "gaussian", "params": {"a": 2.0}},
        {"generator": "gaussian", "params": {"a": 0.125}},
        {"generator": "gaussian_mixture", "params": {"seed": 7}},
        {"generator": "super_gaussian", "params": {}},
        {"generator": "stretched", "params": {}},
        {"generator": "bandlimited_bump", "params": {"sigma": 1.0}},
        {"generator": "bandlimited_bump", "params": {"sigma": 4.0}},
    ]


def default_theorems() -> List[dict]:
    sharp = {"p": [1.5, 2.0, 3.0], "r": [0.5, 1.0, 2.0], "n": [2, 4, 8, 16, 32]}
    marchaud = dict(sharp, m=["r+1"])
    deltas = [1.0, 0.25, 0.0625]
    return [
        {"id": "JACKSON_11", "grid": sharp},
        {"id": "INVERSE_12", "grid": sharp},
        {"id": "SHARP_JACKSON_14", "grid": sharp},
        {"id": "SHARP_INVERSE_16", "grid": sharp},
        {"id": "REVERSE_MARCHAUD_15", "grid": marchaud},
        {"id": "SHARP_MARCHAUD_17", "grid": marchaud},
        {"id": "APPROXIMANT_SMOOTH_18", "grid": dict(sharp, side=["lower", "upper"],
                                                     method=["near-best", "vallee-poussin"])},
        {"id": "MODULUS_PITT_T5", "grid": {"p": [1.5, 2.0, 3.0], "q": ["auto"], "r": [0.5, 1.0, 2.0],
                                           "delta": deltas}},
        {"id": "MODULUS_KELLOGG_T5", "grid": {"p": [1.5, 2.0, 3.0], "r": [0.5, 1.0, 2.0], "delta": deltas}},
        {"id": "PITT_1", "grid": {"p": [1.25, 1.5, 2.0], "q": ["auto"]}},
        {"id": "PITT_2", "grid": {"p": [2.0, 3.0, 4.0], "q": ["auto"]}},
        {"id": "KELLOGG_1", "grid": {"p": [1.25, 1.5, 2.0]}},
        {"id": "KELLOGG_2", "grid": {"p": [2.0, 3.0, 4.0]}},
        {"id": "HAUSDORFF_YOUNG", "grid": {"p": [1.25, 1.5, 2.0]}},
        {"id": "HARDY_LITTLEWOOD", "grid": {"p": [1.25, 1.5, 2.0]}},
        {"id": "BERNSTEIN", "grid": {"p": [1.5, 2.0, 3.0], "r": [0.5, 1.0, 2.0]}},
        {"id": "LEBESGUE_L1", "grid": {"r": [1.0, 2.0], "delta": deltas}},
        {"id": "TITCHMARSH_P2", "grid": {"s": [0.5, 1.0]}},
        {"id": "K1_SHARPNESS", "grid": {"p": [1.25, 1.5, 3.0, 4.0], "q": ["auto"]}},
    ]


def default_studies() -> List[dict]:
    return [
        {"id": "OMEGA_DIFFERENCE", "grid": {"p": [1.5, 2.0, 3.0], "r": [0.5, 1.0, 2.0],
                                            "delta": [1.0, 0.25, 0.0625]}},
        {"id": "OMEGA_REALIZATION", "grid": {"p": [1.5, 2.0, 3.0], "r": [0.5, 1.0, 2.0],
                                             "delta": [1.0, 0.25, 0.0625]}},
        {"id": "BESOV_EQUIVALENCE", "grid": {"p": [1.5, 2.0, 3.0], "s": [0.5, 1.0], "theta": [1.0, 2.0, "inf"]}},
        {"id": "BESOV_R_INDEPENDENCE", "grid": {"p": [1.5, 2.0, 3.0], "s": [0.5, 1.0], "theta": [1.0, 2.0]}},
        {"id": "LITTLEWOOD_PALEY", "grid": {"p": [1.5, 2.0, 3.0]}},
    ]


@dataclass
class ExperimentConfig:
    """One sweep: weights, corpus, theorem/study grids, quadrature grid, ``J`` and outputs."""

    lambdas: List[float] = field(default_factory=lambda: [0.2, 0.7, 1.5, 3.0])
    corpus: List[dict] = field(default_factory=default_corpus)
    theorems: List[dict] = field(default_factory=default_theorems)
    studies: List[dict] = field(default_factory=default_studies)
    grid: List[float] = field(default_factory=lambda: list(DEFAULT_GRID))
    J: int = 10
    out_dir: str = "dunkl-report"
    refine: bool = False
    seed: int = 0
    extremal: Optional[dict] = field(default_factory=lambda: {"N": [4, 8, 16, 32, 64], "eps": 0.1, "p": 1.5})

    def __post_init__(self):
        self.validate()

    def validate(self):
        for lam in self.lambdas:
            if not float(lam) > -0.5:
                raise ConfigurationError(f"lambda_k must be > -1/2, got {lam}")
        for e in self.corpus:
            CorpusEntry(e["generator"], dict(e.get("params", {})))
        for t in self.theorems:
            try:
                TheoremId(t["id"])
            except ValueError as e:
                raise ConfigurationError(f"unknown theorem id {t['id']!r}") from e
        for s in self.studies:
            if s["id"] not in STUDIES:
                raise ConfigurationError(f"unknown study {s['id']!r}")
        if len(self.grid) != 3:
            raise ConfigurationError("grid must be [R, panels, nodes]")
        if int(self.J) < 1:
            raise ConfigurationError("J must be >= 1")
        if self.extremal is not None and set(self.extremal) != {"N", "eps", "p"}:
            raise ConfigurationError("extremal needs exactly N, eps, p")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ConfigurationError(f"unknown config fields {sorted(extra)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"cannot read config {path}: {e}") from e

    def make_grid(self, refined: bool = False) -> RadialGrid:
        R, panels, nodes = self.grid
        g = make_grid(float(R), int(panels), int(nodes))
        return g.refined() if refined else g


# ---------------------------------------------------------------- cells

def _num(v):
    if v == "inf":
        return math.inf
    return v


def q_values(p: float, lo: float, hi: float) -> List[float]:
    """``{p, (p+p')/2, 2, p'}`` restricted to ``[lo, hi]``."""
    pp = conjugate_exponent(p)
    cand = sorted({p, 0.5 * (p + pp), 2.0, pp})
    return [q for q in cand if lo - 1e-12 <= q <= hi + 1e-12]


def _q_range(tid: str, p: float) -> Tuple[float, float]:
    pp = conjugate_exponent(p)
    if tid == "K1_SHARPNESS":
        return (2.0, pp) if p <= 2 else (pp, 2.0)
    return (p, pp) if p <= 2 else (pp, p)


def expand_cells(tid: str, grid: dict) -> List[dict]:
    """Cartesian product of the grid; ``q: "auto"`` and ``m: "r+1"`` are resolved per cell."""
    keys = sorted(grid)
    cells = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        base = {k: _num(v) for k, v in zip(keys, combo)}
        if base.get("m") == "r+1":
            base["m"] = base["r"] + 1.0
        if base.get("q") == "auto":
            lo, hi = _q_range(tid, float(base["p"]))
            for q in q_values(float(base["p"]), lo, hi):
                cells.append(dict(base, q=q))
        else:
            cells.append(base)
    return cells


def applicable(tid: str, entry: CorpusEntry) -> bool:
    tags = entry.tags
    if tid == "BERNSTEIN":
        return "bandlimited" in tags and "spectral_only" not in tags
    if "spectral_only" in tags:
        return tid in ("K1_SHARPNESS",)
    if "forward_only" in tags:
        return tid in FORWARD_ONLY
    return True


# ---------------------------------------------------------------- studies

def _sample(study: str, cid: str, cell: dict, lhs: float, rhs: float, variant: str, scale: float) -> RatioSample:
    c = {k: cell.get(k) for k in ("p", "q", "r", "m", "s")}
    if "delta" in cell:
        c["delta"] = cell["delta"]
    return make_sample(study, cid, c, lhs, rhs, False, variant, scale)


def eval_study(f: RadialProfile, study: str, cell: dict, J: int, t_steps: Tuple[int, int]) -> List[RatioSample]:
    """Equivalence-study rows; each row is one ratio of two equivalent quantities."""
    cid = f.label
    scale = max(norm(f, 2.0), 1e-300)
    steps, div = t_steps
    if study == "OMEGA_DIFFERENCE":
        p, r, d = cell["p"], cell["r"], cell["delta"]
        om = modulus(f, r, d, p, steps, div)
        return [_sample(study, cid, cell, om, direct_difference_norm(f, r, d, p), "", scale)]
    if study == "OMEGA_REALIZATION":
        p, r, d = cell["p"], cell["r"], cell["delta"]
        om = modulus(f, r, d, p, steps, div)
        return [_sample(study, cid, cell, om, k_functional_realization(f, d, r, p), "", scale)]
    if study == "BESOV_EQUIVALENCE":
        p, s, th = cell["p"], cell["s"], cell["theta"]
        bp = BesovParams(s, p, th, s + 1.0, J)
        ref = besov_norm(f, bp, BesovMethod.DEFINITION)
        rows = []
        for m in BesovMethod:
            if m == BesovMethod.DEFINITION:
                continue
            variants = ["vallee-poussin", "near-best"] if m == BesovMethod.LAPLACIAN_APPROX else [None]
            for v in variants:
                val = besov_norm(f, bp, m, v or "vallee-poussin")
                name = f"{m.value}" + (f"/{v}" if v else "") + f"/theta={th:g}"
                rows.append(_sample(study, cid, {"p": p, "s": s, "r": s + 1.0}, val, ref, name, scale))
        return rows
    if study == "BESOV_R_INDEPENDENCE":
        p, s, th = cell["p"], cell["s"], cell["theta"]
        a = besov_norm(f, BesovParams(s, p, th, s + 1.0, J), BesovMethod.DEFINITION)
        b = besov_norm(f, BesovParams(s, p, th, s + 2.0, J), BesovMethod.DEFINITION)
        return [_sample(study, cid, {"p": p, "s": s, "r": s + 1.0}, a, b, f"theta={th:g}", scale)]
    if study == "LITTLEWOOD_PALEY":
        p = cell["p"]
        return [_sample(study, cid, cell, square_function_norm(f, p, J), norm(f, p), "", scale)]
    raise ConfigurationError(f"unknown study {study!r}")  # pragma: no cover


def study_applicable(study: str, entry: CorpusEntry) -> bool:
    return not ({"forward_only", "spectral_only"} & entry.tags)


# ---------------------------------------------------------------- running

@dataclass
class Report:
    """Config echo, sorted rows, per-group summary, refinement deltas and failures."""

    config: dict
    rows: List[RatioSample] = field(default_factory=list)
    summary: Dict[str, dict] = field(default_factory=dict)
    refinement: Dict[str, dict] = field(default_factory=dict)
    failures: List[dict] = field(default_factory=list)
    extremal: List[dict] = field(default_factory=list)
    header: dict = field(default_factory=dict)

    @property
    def unstable(self) -> List[str]:
        return sorted(k for k, v in self.refinement.items() if v.get("flagged"))

    def to_dict(self) -> dict:
        return {"header": self.header, "config": self.config, "summary": self.summary,
                "refinement": self.refinement, "failures": self.failures, "extremal": self.extremal,
                "rows": [r.to_row() for r in self.rows]}

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(d["config"], [RatioSample.from_row(r) for r in d["rows"]], d["summary"], d["refinement"],
                   d["failures"], d.get("extremal", []), d.get("header", {}))


def group_key(s: RatioSample) -> str:
    return s.theorem + (f"[{s.variant}]" if s.variant and s.theorem not in TheoremId.__members__ else "")


def summarize(rows: Sequence[RatioSample]) -> Dict[str, dict]:
    """Per group: max and min ratio over non-degenerate rows, counts."""
    groups: Dict[str, list] = {}
    for r in rows:
        groups.setdefault(group_key(r), []).append(r)
    out = {}
    for k in sorted(groups):
        rs = groups[k]
        vals = [r.ratio for r in rs if not r.degenerate]
        out[k] = {"max_ratio": max(vals) if vals else 0.0, "min_ratio": min(vals) if vals else 0.0,
                  "rows": len(rs), "degenerate": sum(r.degenerate for r in rs),
                  "surrogate": sum(r.surrogate for r in rs)}
    return out


def refinement_deltas(base: Dict[str, dict], fine: Dict[str, dict]) -> Dict[str, dict]:
    """Relative change of the bracket ends; the lower end is tracked only for two-sided equivalences."""
    out = {}
    for k in sorted(base):
        if k not in fine:
            continue
        a, b = base[k], fine[k]
        d_max = abs(b["max_ratio"] - a["max_ratio"]) / max(abs(a["max_ratio"]), 1e-300)
        row = {"max_ratio": a["max_ratio"], "max_ratio_refined": b["max_ratio"], "max_delta": d_max}
        worst = d_max
        if k.split("[")[0] in EQUIVALENCES:
            d_min = abs(b["min_ratio"] - a["min_ratio"]) / max(abs(a["min_ratio"]), 1e-300)
            row.update(min_ratio=a["min_ratio"], min_ratio_refined=b["min_ratio"], min_delta=d_min)
            worst = max(worst, d_min)
        row["flagged"] = bool(worst >= DRIFT_LIMIT)
        out[k] = row
    return out


def _run_lambda(args) -> Tuple[List[RatioSample], List[dict]]:
    cfg_dict, lam, refined = args
    cfg = ExperimentConfig.from_dict(cfg_dict)
    if refined:
        set_kernel_cache_size(2)
    grid = cfg.make_grid(refined)
    J = 2 * cfg.J if refined else cfg.J
    t_steps = (2 * smoothness.T_GRID_STEPS, 2 * smoothness.T_GRID_DIVISIONS) if refined else \
        (smoothness.T_GRID_STEPS, smoothness.T_GRID_DIVISIONS)
    params = WeightParams(float(lam))
    rows: List[RatioSample] = []
    failures: List[dict] = []
    entries = [CorpusEntry(e["generator"], dict(e.get("params", {}))) for e in cfg.corpus]
    profiles = []
    for e in entries:
        try:
            profiles.append((e, build_profile(e, params, grid)))
        except DunklError as err:
            failures.append({"theorem": "", "corpus_id": corpus_id(e, lam), "cell": {}, "error": repr(err)})
    old = (smoothness.T_GRID_STEPS, smoothness.T_GRID_DIVISIONS)
    smoothness.T_GRID_STEPS, smoothness.T_GRID_DIVISIONS = t_steps
    try:
        for e, f in profiles:
            for t in cfg.theorems:
                tid = t["id"]
                if not applicable(tid, e):
                    continue
                for cell in expand_cells(tid, t.get("grid", {})):
                    try:
                        rows.append(eval_theorem(f, tid, cell, f.label, J=J))
                    except DunklError as err:
                        failures.append({"theorem": tid, "corpus_id": f.label, "cell": cell, "error": repr(err)})
            for st in cfg.studies:
                if not study_applicable(st["id"], e):
                    continue
                for cell in expand_cells(st["id"], st.get("grid", {})):
                    try:
                        rows.extend(eval_study(f, st["id"], cell, J, t_steps))
                    except DunklError as err:
                        failures.append({"theorem": st["id"], "corpus_id": f.label, "cell": cell,
                                         "error": repr(err)})
            f.__dict__.pop("_smoothness_memo", None)
    finally:
        smoothness.T_GRID_STEPS, smoothness.T_GRID_DIVISIONS = old
    return rows, failures


def worker_count(n_tasks: int) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError as e:
            raise ConfigurationError(f"{THREADS_ENV} must be an integer") from e
        return max(1, min(n, n_tasks))
    return max(1, min(os.cpu_count() or 1, n_tasks))


def _sweep(cfg: ExperimentConfig, refined: bool) -> Tuple[List[RatioSample], List[dict]]:
    tasks = [(cfg.to_dict(), lam, refined) for lam in cfg.lambdas]
    workers = worker_count(len(tasks))
    if workers == 1 or not tasks:
        results = [_run_lambda(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_lambda, tasks))
    rows = sorted((r for rs, _ in results for r in rs), key=RatioSample.key)
    failures = [f for _, fs in results for f in fs]
    return rows, failures


def run_experiment(config: ExperimentConfig, raise_on_error: bool = True) -> Report:
    """Run the sweep; raises :class:`ExperimentError` (with ``.report``) if any cell failed."""
    started = time.time()
    rows, failures = _sweep(config, False)
    report = Report(config.to_dict(), rows, summarize(rows), failures=failures)
    if config.extremal is not None:
        ex = config.extremal
        report.extremal = extremal_rows(config.lambdas, ex["N"], float(ex["eps"]), float(ex["p"]))
    base_seconds = time.time() - started
    if config.refine:
        fine_rows, fine_fail = _sweep(config, True)
        report.refinement = refinement_deltas(report.summary, summarize(fine_rows))
        report.failures.extend(dict(f, refined=True) for f in fine_fail)
    report.header = {"created": time.strftime("%Y-%m-%dT%H:%M:%S"), "base_seconds": round(base_seconds, 1),
                     "seconds": round(time.time() - started, 1)}
    if report.failures and raise_on_error:
        err = ExperimentError([(f"{x['theorem']}/{x['corpus_id']}/{x['cell']}", x["error"])
                               for x in report.failures])
        err.report = report
        raise err
    return report


def extremal_rows(lambdas: Sequence[float], Ns=(4, 8, 16, 32, 64), eps: float = 0.1, p: float = 1.5) -> List[dict]:
    """Growth of the Kellogg sum of the extremal family, per weight."""
    out = []
    for lam in lambdas:
        pp = conjugate_exponent(p)
        qs = [2.0, 0.5 * (2.0 + pp)]
        for row in extremal_study(Ns, eps, WeightParams(float(lam)), p, qs):
            out.append(dict(row, lambda_k=float(lam), p=p, eps=eps))
    return out


# ---------------------------------------------------------------- output

def constant_one_violations(report: Report, tol: float = 1e-6) -> List[RatioSample]:
    """Rows of constant-1 inequalities whose ratio exceeds ``1 + tol``."""
    return [r for r in report.rows if r.theorem == "HAUSDORFF_YOUNG" and r.ratio > 1.0 + tol]


def rows_to_csv(rows: Sequence[RatioSample]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(CSV_FIELDS), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.to_row())
    return buf.getvalue()


def rows_from_csv(text: str) -> List[RatioSample]:
    return [RatioSample.from_row(r) for r in csv.DictReader(io.StringIO(text))]


def _svg_charts(report: Report, out: Path) -> List[Path]:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    matplotlib.rcParams["svg.hashsalt"] = "dunkl"
    paths = []
    groups: Dict[str, List[RatioSample]] = {}
    for r in report.rows:
        groups.setdefault(r.theorem, []).append(r)
    for tid in sorted(groups):
        rs = groups[tid]
        xkey = next((k for k in ("n_or_delta", "q", "p", "s", "r")
                     if len({getattr(r, k) for r in rs}) > 1 and all(getattr(r, k) is not None for r in rs)), None)
        lines: Dict[tuple, list] = {}
        for r in rs:
            rest = tuple((k, getattr(r, k)) for k in ("corpus_id", "variant", "p", "q", "r", "m", "s", "n_or_delta")
                         if k != xkey)
            lines.setdefault(rest, []).append((getattr(r, xkey) if xkey else 0.0, r.ratio))
        fig, ax = plt.subplots(figsize=(6, 4))
        for pts in lines.values():
            pts.sort()
            xs, ys = zip(*pts)
            ax.plot(xs, ys, lw=0.6, marker="." if len(xs) == 1 else None)
        if xkey == "n_or_delta":
            ax.set_xscale("log")
        ax.set_xlabel(xkey or "")
        ax.set_ylabel("lhs / rhs")
        ax.set_title(tid)
        path = out / f"{tid}.svg"
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths


def emit_report(report: Report, fmt: str, out_dir) -> List[Path]:
    """Write ``report.csv``, ``report.json`` or one ``<theorem>.svg`` per theorem into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path = out / "report.csv"
        path.write_text(rows_to_csv(report.rows))
        return [path]
    if fmt == "json":
        path = out / "report.json"
        path.write_text(json.dumps(report.to_dict(), indent=1, sort_keys=True))
        return [path]
    if fmt == "svg-lines":
        return _svg_charts(report, out)
    raise InvalidParameterError(f"unknown report format {fmt!r}")


def load_report(path) -> Report:
    return Report.from_dict(json.loads(Path(path).read_text()))
