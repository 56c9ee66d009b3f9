"""Acceptance criteria, one test per criterion.

Each test records a ``CRITERION n PASS|FAIL: detail`` line (printed in the
terminal summary) and then asserts.  Criteria 4 and 6 to 10 read one shared
``verify --all --refine`` run, which takes roughly half an hour on one core.
Run alone with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""
import math
import sys
import time

import numpy as np
import pytest

import conftest
from dunkl.cli import main
from dunkl.harness import CorpusEntry, bandlimited_bump, build_profile, default_corpus, load_report
from dunkl.measure import RadialProfile, WeightParams, default_grid, measure_weights, weighted_lp_norm
from dunkl.multipliers import binomial_difference, convolve, fractional_difference, fractional_laplacian, translation
from dunkl.specfun import dunkl_kernel_rank1, normalized_bessel
from dunkl.transform import clear_kernel_cache, dunkl_transform_radial, inverse_dunkl_transform_radial

LAMBDAS = (0.2, 0.7, 1.5, 3.0)
DRIFT = 0.10


def record(n: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {n} {'PASS' if ok else 'FAIL'}: {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)


def corpus(lam):
    params = WeightParams(lam)
    grid = default_grid()
    for e in default_corpus():
        entry = CorpusEntry(e["generator"], e["params"])
        yield entry, build_profile(entry, params, grid)


def rel_l2(a, b, f):
    mw = measure_weights(f.grid, f.params.lambda_k)
    return math.sqrt(np.dot(np.abs(a - b) ** 2, mw)) / math.sqrt(np.dot(np.abs(b) ** 2, mw))


@pytest.fixture(scope="module")
def full_run(tmp_path_factory):
    """One ``verify --all --refine`` run through the CLI."""
    out = tmp_path_factory.mktemp("verify-all")
    code = main(["verify", "--all", "--refine", "--out", str(out)])
    report = load_report(out / "report.json")
    return code, report


def bracket_check(report, keys, track_min):
    """``(ok, worst drift, lines)`` for the bracket ends of the given summary groups."""
    bad, worst = [], 0.0
    for k in keys:
        summ, ref = report.summary[k], report.refinement.get(k)
        if ref is None or not math.isfinite(summ["max_ratio"]) or summ["max_ratio"] <= 0:
            bad.append(f"{k}: missing or non-finite")
            continue
        drift = ref["max_delta"]
        if track_min:
            drift = max(drift, ref["min_delta"])
            if summ["min_ratio"] <= 0:
                bad.append(f"{k}: min ratio {summ['min_ratio']}")
        worst = max(worst, drift)
        if drift >= DRIFT:
            bad.append(f"{k}: drift {drift:.3f}")
    return not bad, worst, bad


def test_criterion_1_gaussian_fixed_point():
    worst_err, worst_time = 0.0, 0.0
    for lam in LAMBDAS:
        clear_kernel_cache()
        f = conftest.gaussian(lam)
        start = time.perf_counter()
        G = dunkl_transform_radial(f)
        worst_time = max(worst_time, time.perf_counter() - start)
        worst_err = max(worst_err, float(np.max(np.abs(G.samples - np.exp(-G.s ** 2 / 2)))))
    ok = worst_err < 1e-8 and worst_time < 5.0
    record(1, ok, f"max sup error {worst_err:.2e} (< 1e-8), slowest lambda {worst_time:.2f} s (< 5 s)")
    assert ok


def test_criterion_2_round_trip():
    errors = {}
    for lam in LAMBDAS:
        for entry, f in corpus(lam):
            # transform the samples themselves, not a stored exact spectrum
            raw = RadialProfile(f.grid, f.samples, f.params, f.dual_grid, label=f.label)
            back = inverse_dunkl_transform_radial(dunkl_transform_radial(raw, strict=False), strict=False)
            errors[f.label] = rel_l2(back.samples, f.samples, f)
    bad = {k: v for k, v in errors.items() if not v < 1e-6}
    ok = not bad
    worst = max(errors, key=errors.get)
    detail = f"{len(errors)} profiles, worst {worst} at {errors[worst]:.2e} (< 1e-6)"
    if bad:
        detail += "; failing: " + ", ".join(f"{k} {v:.1e}" for k, v in sorted(bad.items()))
    record(2, ok, detail)
    assert ok, detail


def test_criterion_3_constant_one(full_run):
    _, report = full_run
    tol = 1e-6
    hy = [r.ratio for r in report.rows if r.theorem == "HAUSDORFF_YOUNG"]
    hy_ps = {r.p for r in report.rows if r.theorem == "HAUSDORFF_YOUNG"}
    worst = {"hausdorff-young": max(hy), "translation": 0.0, "young": 0.0, "j_lam": 0.0, "e_k": 0.0}
    for lam in LAMBDAS:
        for entry, f in corpus(lam):
            norms = {p: weighted_lp_norm(f, p, strict=False) for p in (1.0, 1.5, 2.0, 3.0)}
            for t in (0.1, 1.0, 10.0):
                g = translation(f, t)
                for p, n in norms.items():
                    worst["translation"] = max(worst["translation"], weighted_lp_norm(g, p, strict=False) / n)
            for a in (0.5, 2.0):
                g = RadialProfile.from_function(lambda r: np.exp(-a * r * r), f.params, f.grid, dual_grid=f.dual_grid)
                h = convolve(f, g)
                g1 = weighted_lp_norm(g, 1.0, strict=False)
                for p, n in norms.items():
                    worst["young"] = max(worst["young"], weighted_lp_norm(h, p, strict=False) / (n * g1))
        t = np.linspace(0.0, 200.0, 200001)
        worst["j_lam"] = max(worst["j_lam"], float(np.max(np.abs(normalized_bessel(lam, t)))))
        x = np.linspace(-30.0, 30.0, 1201)
        worst["e_k"] = max(worst["e_k"], float(np.max(np.abs(dunkl_kernel_rank1(lam + 0.5, x[:, None], x[None, :])))))
    ok = all(v <= 1 + tol for v in worst.values()) and hy_ps == {1.25, 1.5, 2.0}
    record(3, ok, ", ".join(f"{k} max {v:.9f}" for k, v in worst.items()) + " (<= 1 + 1e-6)")
    assert ok


def test_criterion_4_laplacian_and_bernstein(full_run):
    _, report = full_run
    worst = 0.0
    for lam in LAMBDAS:
        f = conftest.gaussian(lam)
        x = f.grid.nodes
        out = fractional_laplacian(f, 2.0)
        worst = max(worst, float(np.max(np.abs(out.samples - (2 * lam + 2 - x ** 2) * np.exp(-x ** 2 / 2)))))
    rows = [r for r in report.rows if r.theorem == "BERNSTEIN"]
    rs = {r.r for r in rows}
    ok_b, drift, bad = bracket_check(report, ["BERNSTEIN"], track_min=False)
    ok = worst < 1e-6 and ok_b and rs == {0.5, 1.0, 2.0}
    s = report.summary["BERNSTEIN"]
    record(4, ok, f"laplacian sup error {worst:.2e} (< 1e-6); Bernstein max ratio {s['max_ratio']:.4f} over "
                  f"{s['rows']} rows, refinement drift {drift:.2%} (< 10%)" + (f"; {bad}" if bad else ""))
    assert ok


def test_criterion_5_fractional_difference():
    worst = {2.0: 0.0, 4.0: 0.0, 1.0: 0.0, 3.0: 0.0}
    bound_ok = True
    for lam in LAMBDAS:
        params = WeightParams(lam)
        # annular band-limited members: |j_lam(t s)| stays below 1 on the support, so the series converges
        for t, sigma in ((1.0, 4.0), (0.25, 16.0)):
            f = bandlimited_bump(params, sigma, default_grid(), f"bump{sigma}")
            scale = weighted_lp_norm(f, 2.0, strict=False)
            for m in worst:
                direct = fractional_difference(f, t, m)
                series, bound = binomial_difference(f, t, m)
                mw = measure_weights(f.grid, lam)
                err = math.sqrt(np.dot((series.samples - direct.samples) ** 2, mw)) / scale
                worst[m] = max(worst[m], err)
                bound_ok &= err <= bound / scale + 1e-10
    ok = max(worst[2.0], worst[4.0]) < 1e-8 and max(worst[1.0], worst[3.0]) < 1e-6 and bound_ok
    record(5, ok, ", ".join(f"m={m:g} rel L2 {v:.1e}" for m, v in worst.items())
           + f" (1e-8 even, 1e-6 odd); errors within remainder bound: {bound_ok}")
    assert ok


def test_criterion_6_equivalence_brackets(full_run):
    _, report = full_run
    prefixes = ("OMEGA_DIFFERENCE", "OMEGA_REALIZATION", "BESOV_EQUIVALENCE", "BESOV_R_INDEPENDENCE",
                "LITTLEWOOD_PALEY")
    keys = [k for k in report.summary if k.split("[")[0] in prefixes]
    methods = {k.split("[")[1].split("/")[0] for k in keys if k.startswith("BESOV_EQUIVALENCE[")}
    ok, drift, bad = bracket_check(report, keys, track_min=True)
    ok = ok and len(methods) == 6 and all(any(k.startswith(p) for k in keys) for p in prefixes)
    lo = min(report.summary[k]["min_ratio"] for k in keys)
    hi = max(report.summary[k]["max_ratio"] for k in keys)
    record(6, ok, f"{len(keys)} brackets, {len(methods)} Besov characterizations, ratios in [{lo:.4f}, {hi:.4f}], "
                  f"worst drift {drift:.2%} (< 10%)" + (f"; {bad}" if bad else ""))
    assert ok


def test_criterion_7_sharp_inequalities(full_run):
    _, report = full_run
    tids = ("JACKSON_11", "INVERSE_12", "SHARP_JACKSON_14", "SHARP_INVERSE_16", "REVERSE_MARCHAUD_15",
            "SHARP_MARCHAUD_17", "APPROXIMANT_SMOOTH_18")
    ok, drift, bad = bracket_check(report, tids, track_min=False)
    e_based = ("JACKSON_11", "INVERSE_12", "SHARP_JACKSON_14", "SHARP_INVERSE_16")
    rows = [r for r in report.rows if r.theorem in e_based]
    flags_ok = all(r.surrogate == (r.p != 2.0) for r in rows)
    sweep = [r for r in report.rows if r.theorem == "SHARP_MARCHAUD_17"]
    cover_ok = ({r.n_or_delta for r in sweep} == {2.0, 4.0, 8.0, 16.0, 32.0} and {r.r for r in sweep} == {0.5, 1.0, 2.0}
                and all(r.m == r.r + 1 for r in sweep) and {r.p for r in sweep} == {1.5, 2.0, 3.0})
    ok = ok and flags_ok and cover_ok
    consts = ", ".join(f"{t} {report.summary[t]['max_ratio']:.3f}" for t in tids)
    record(7, ok, f"C recorded: {consts}; worst drift {drift:.2%} (< 10%); surrogate flags exactly on p != 2: "
                  f"{flags_ok}; sweep coverage: {cover_ok}" + (f"; {bad}" if bad else ""))
    assert ok


def test_criterion_8_pitt_kellogg(full_run):
    _, report = full_run
    tids = ("PITT_1", "PITT_2", "KELLOGG_1", "KELLOGG_2", "HARDY_LITTLEWOOD", "MODULUS_PITT_T5",
            "MODULUS_KELLOGG_T5", "K1_SHARPNESS")
    ok, drift, bad = bracket_check(report, tids, track_min=False)
    k1 = [r for r in report.rows if r.theorem == "K1_SHARPNESS" and r.variant == "K-1"]
    k1_ok = bool(k1) and all(2.0 - 1e-12 <= r.q <= r.p / (r.p - 1) + 1e-12 and math.isfinite(r.ratio) for r in k1)
    growth = {}
    for row in report.extremal:
        growth.setdefault(row["lambda_k"], []).append(row["growth_ratio"])
    Ns = sorted({row["N"] for row in report.extremal})
    widths = {lam: max(v) / min(v) for lam, v in growth.items()}
    growth_ok = Ns == [4, 8, 16, 32, 64] and set(widths) == set(LAMBDAS) and max(widths.values()) < 2.0
    ok = ok and k1_ok and growth_ok
    maxima = ", ".join(f"{t} {report.summary[t]['max_ratio']:.3f}" for t in tids)
    record(8, ok, f"one-sided maxima {maxima}; "
                  f"worst drift {drift:.2%}; {len(k1)} Kellogg-vs-Pitt samples with 2 <= q <= p', max "
                  f"{max(r.ratio for r in k1):.3f}; extremal growth bracket width {max(widths.values()):.6f} (< 2)"
           + (f"; {bad}" if bad else ""))
    assert ok


def test_criterion_9_titchmarsh(full_run):
    _, report = full_run
    ok, drift, bad = bracket_check(report, ["TITCHMARSH_P2"], track_min=True)
    ss = {r.s for r in report.rows if r.theorem == "TITCHMARSH_P2"}
    ok = ok and ss == {0.5, 1.0}
    s = report.summary["TITCHMARSH_P2"]
    record(9, ok, f"bracket [{s['min_ratio']:.4f}, {s['max_ratio']:.4f}] over {s['rows']} rows, "
                  f"drift {drift:.2%} (< 10%)" + (f"; {bad}" if bad else ""))
    assert ok


def test_criterion_10_full_run(full_run):
    code, report = full_run
    base_failures = [f for f in report.failures if not f.get("refined")]
    violations = [r for r in report.rows if r.theorem == "HAUSDORFF_YOUNG" and r.ratio > 1 + 1e-6]
    base_seconds = report.header["base_seconds"]
    ok = code == 0 and not base_failures and not violations and base_seconds < 900
    record(10, ok, f"verify --all: {base_seconds:.0f} s (< 900 s), {len(report.rows)} rows, "
                   f"{len(base_failures)} failures, exit code with refinement {code}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
