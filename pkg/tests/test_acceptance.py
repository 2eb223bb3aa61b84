"""End-to-end acceptance checks.

One test per criterion; each appends a single PASS/FAIL line that the
conftest terminal-summary hook prints after the run, with the measured
margin so regressions are visible at a glance.  The final check is
data-dependent and skips when no suitable dataset is supplied.
"""

import os
import time

import numpy as np
import pytest

import support
from rsbekk import (
    MeanParams,
    bond_total_return,
    fit,
    log_likelihood,
    rs_log_likelihood,
    simulate_rs,
    simulate_single,
    summary_stats,
)
from rsbekk.bekk import cov_step
from rsbekk.estimation import OptimizerConfig
from rsbekk.regime import ex_ante_step, filter_step, recombine
from rsbekk.types import BekkParams, Cov2, RsModelParams

_LINES: list[str] = []


def _record(n: int, label: str, ok: bool, detail: str) -> None:
    line = f"criterion {n} ({label}): {'PASS' if ok else 'FAIL'} - {detail}"
    _LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_regime_collapse(rng_seed=110):
    rng = np.random.default_rng(rng_seed)
    t0 = time.monotonic()
    worst = 0.0
    for _ in range(100):
        shared = support.stable_bekk_draw(rng)
        p, q = rng.uniform(0.05, 0.95, size=2)
        params = RsModelParams(regime1=shared, regime2=shared, p=p, q=q)
        sim = simulate_single(shared, 150, shared.intercept_cov(),
                              seed=int(rng.integers(2**31)))
        single = log_likelihood((sim.rm, sim.rb), shared).loglik
        rs, _ = rs_log_likelihood((sim.rm, sim.rb), params, with_smoothed=False)
        worst = max(worst, abs(rs - single))
    elapsed = time.monotonic() - t0
    _record(1, "regime collapse", worst < 1e-9 and elapsed < 10.0,
            f"max |loglik gap| = {worst:.2e} over 100 draws in {elapsed:.1f}s")


def _static_instances(n, seed=111):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        params = RsModelParams(
            regime1=support.static_regime_draw(rng),
            regime2=support.static_regime_draw(rng),
            p=float(rng.uniform(0.1, 0.9)),
            q=float(rng.uniform(0.1, 0.9)),
        )
        T = int(rng.integers(2, 9))
        rm = rng.normal(scale=1.5, size=T)
        rb = rng.normal(scale=1.5, size=T)
        out.append((params, rm, rb))
    return out


def test_criterion_2_likelihood_vs_path_enumeration():
    t0 = time.monotonic()
    worst = 0.0
    for params, rm, rb in _static_instances(50):
        ref_ll, _ = support.enum_rs_reference(rm, rb, params)
        ll, _ = rs_log_likelihood((rm, rb), params, h0=Cov2(1.0, 1.0, 0.0),
                                  with_smoothed=False)
        worst = max(worst, abs(ll - ref_ll))
    elapsed = time.monotonic() - t0
    _record(2, "likelihood vs path enumeration", worst < 1e-10 and elapsed < 10.0,
            f"max |loglik gap| = {worst:.2e} over 50 instances in {elapsed:.1f}s")


def test_criterion_3_smoother_vs_exact_posterior():
    worst = 0.0
    for params, rm, rb in _static_instances(50):
        _, posterior = support.enum_rs_reference(rm, rb, params)
        _, filt = rs_log_likelihood((rm, rb), params, h0=Cov2(1.0, 1.0, 0.0))
        worst = max(worst, float(np.max(np.abs(filt.smoothed - posterior))))
    _record(3, "smoother vs exact posterior", worst < 1e-12,
            f"max |posterior gap| = {worst:.2e} over 50 instances")


def test_criterion_4_psd_and_simplex_invariants():
    rng = np.random.default_rng(112)
    n_each = 250_000
    violations = 0

    def psd_ok(cov: Cov2) -> bool:
        det = cov.smm * cov.sbb - cov.smb * cov.smb
        return (cov.smm >= 0.0 and cov.sbb >= 0.0
                and det >= -1e-12 * max(cov.smm * cov.sbb, 1e-300))

    def simplex_ok(w) -> bool:
        return (abs(float(w[0]) + float(w[1]) - 1.0) <= 1e-12
                and w[0] >= -1e-12 and w[1] >= -1e-12)

    c = rng.normal(scale=0.02, size=(n_each, 3))
    ab = rng.uniform(0.05, 0.65, size=(n_each, 4))
    L = rng.normal(scale=0.03, size=(n_each, 3))
    eps = rng.normal(scale=0.03, size=(n_each, 2))
    for i in range(n_each):
        h = Cov2(smm=L[i, 0] ** 2 + 1e-12, sbb=L[i, 1] ** 2 + L[i, 2] ** 2 + 1e-12,
                 smb=L[i, 0] * L[i, 1])
        params = BekkParams(mean=MeanParams(), c11=c[i, 0], c12=c[i, 1], c22=c[i, 2],
                            a11=ab[i, 0], a22=ab[i, 1], b11=ab[i, 2], b22=ab[i, 3])
        if not psd_ok(cov_step(h, eps[i], params)):
            violations += 1

    w = rng.random((n_each, 2)) + 1e-3
    w /= w.sum(axis=1, keepdims=True)
    pq = rng.uniform(0.01, 0.99, size=(n_each, 2))
    dens = rng.lognormal(mean=2.0, sigma=3.0, size=(n_each, 2))
    for i in range(n_each):
        g = ex_ante_step(w[i], pq[i, 0], pq[i, 1])
        f = filter_step(g, dens[i, 0], dens[i, 1])
        if not (simplex_ok(g) and simplex_ok(f)):
            violations += 1

    n_rec = 250_000
    g = rng.random((n_rec, 2)) + 1e-3
    g /= g.sum(axis=1, keepdims=True)
    means = rng.normal(scale=0.05, size=(n_rec, 4))
    La = rng.normal(scale=0.03, size=(n_rec, 3))
    Lb = rng.normal(scale=0.08, size=(n_rec, 3))
    obs = rng.normal(scale=0.05, size=(n_rec, 2))
    for i in range(n_rec):
        h1 = Cov2(smm=La[i, 0] ** 2 + 1e-12, sbb=La[i, 1] ** 2 + La[i, 2] ** 2 + 1e-12,
                  smb=La[i, 0] * La[i, 1])
        h2 = Cov2(smm=Lb[i, 0] ** 2 + 1e-12, sbb=Lb[i, 1] ** 2 + Lb[i, 2] ** 2 + 1e-12,
                  smb=Lb[i, 0] * Lb[i, 1])
        _, agg = recombine(g[i], means[i, :2], means[i, 2:], h1, h2, obs[i])
        if not psd_ok(agg):
            violations += 1

    total = n_each + 2 * n_each + n_rec  # cov + (ex-ante, filter) pairs + recombine
    _record(4, "PSD and simplex invariants", violations == 0,
            f"{violations} violations over {total:,} randomized steps")


def test_criterion_5_single_model_recovery():
    truth = BekkParams(
        mean=MeanParams(l10=0.003, l11=2.0, l12=-1.0, l20=0.001, l21=0.2, l22=0.5),
        c11=0.012, c12=0.0003, c22=0.0008,
        a11=0.25, a22=0.46, b11=0.92, b22=0.90,
    )
    t0 = time.monotonic()
    hits = 0
    worst = 0.0
    for seed in range(10):
        sim = simulate_single(truth, 5000, truth.intercept_cov(), seed=1000 + seed)
        res = fit((sim.rm, sim.rb), config=OptimizerConfig(n_restarts=1, seed=seed),
                  compute_std_errors=False)
        p = res.params
        err = max(abs(p.a11 - truth.a11), abs(p.a22 - truth.a22),
                  abs(p.b11 - truth.b11), abs(p.b22 - truth.b22))
        worst = max(worst, err)
        hits += err <= 0.1
    elapsed = time.monotonic() - t0
    _record(5, "single-model dynamics recovery",
            hits >= 8 and elapsed < 300.0,
            f"{hits}/10 seeds within 0.1 (worst max-error {worst:.3f}) in {elapsed:.0f}s")


def test_criterion_6_switching_model_recovery():
    calm = BekkParams(mean=MeanParams(l10=0.003, l11=1.5, l12=-1.0),
                      c11=0.010, c12=0.0004, c22=0.004,
                      a11=0.20, a22=0.25, b11=0.60, b22=0.55)
    wild = BekkParams(mean=MeanParams(l10=-0.004, l11=0.5, l12=0.5),
                      c11=0.050, c12=0.002, c22=0.015,
                      a11=0.30, a22=0.30, b11=0.55, b22=0.50)
    truth = RsModelParams(regime1=calm, regime2=wild, p=0.85, q=0.75)

    def uncond_smm(bp: BekkParams) -> float:
        den = 1.0 - bp.a11 ** 2 - bp.b11 ** 2
        return bp.intercept_cov().smm / max(den, 1e-12)

    t0 = time.monotonic()
    hits = 0
    details = []
    for seed in range(10):
        sim = simulate_rs(truth, 5000, calm.intercept_cov(), seed=2000 + seed)
        res = fit((sim.rm, sim.rb), n_regimes=2,
                  config=OptimizerConfig(n_restarts=1, seed=seed),
                  compute_std_errors=False)
        pr = res.params
        pq_ok = abs(pr.p - truth.p) <= 0.1 and abs(pr.q - truth.q) <= 0.1
        calm_first = uncond_smm(pr.regime1) < uncond_smm(pr.regime2)
        # the first label must track the truly calm months, not merely be
        # the smaller-variance one of an arbitrary split
        _, filt = rs_log_likelihood((sim.rm, sim.rb), pr)
        occ = float((filt.smoothed[:, 0] > 0.5).mean())
        true_occ = float((sim.states == 1).mean())
        labels_ok = calm_first and abs(occ - true_occ) <= 0.1
        hits += pq_ok and labels_ok
        details.append(f"{pr.p:.2f}/{pr.q:.2f}")
    elapsed = time.monotonic() - t0
    _record(6, "switching-model recovery",
            hits >= 8 and elapsed < 900.0,
            f"{hits}/10 seeds ok (fitted p/q: {', '.join(details)}) in {elapsed:.0f}s")


def test_criterion_7_diagnostics_oracle_and_size():
    def lb_literal(x, lags):
        T = x.size
        xc = x - x.mean()
        denom = float(xc @ xc)
        stat = 0.0
        for k in range(1, lags + 1):
            rho = float(xc[k:] @ xc[:-k]) / denom
            stat += rho * rho / (T - k)
        return T * (T + 2.0) * stat

    def jb_literal(x):
        T = x.size
        xc = x - x.mean()
        m2 = np.mean(xc ** 2)
        skew = np.mean(xc ** 3) / m2 ** 1.5
        kurt = np.mean(xc ** 4) / m2 ** 2
        return T / 6.0 * (skew ** 2 + (kurt - 3.0) ** 2 / 4.0)

    rng = np.random.default_rng(113)
    worst = 0.0
    for _ in range(100):
        x = rng.standard_t(df=6, size=int(rng.integers(50, 400)))
        s = summary_stats(x, lags=6)
        worst = max(worst,
                    abs(s.jarque_bera - jb_literal(x)),
                    abs(s.ljung_box_levels - lb_literal(x, 6)),
                    abs(s.ljung_box_squares - lb_literal(x * x, 6)))
    oracle_ok = worst < 1e-9

    rng = np.random.default_rng(777)
    n_trials = 1000
    rej = np.zeros(3)
    for _ in range(n_trials):
        x = rng.standard_normal(100_000)
        s = summary_stats(x, lags=6)
        rej += [s.jarque_bera_pvalue < 0.05,
                s.ljung_box_levels_pvalue < 0.05,
                s.ljung_box_squares_pvalue < 0.05]
    rates = rej / n_trials
    size_ok = bool(np.all((rates >= 0.035) & (rates <= 0.065)))
    _record(7, "diagnostics oracle and test size", oracle_ok and size_ok,
            f"max formula gap {worst:.2e}; 5% rejection rates "
            f"JB={rates[0]:.3f} LB={rates[1]:.3f} LBsq={rates[2]:.3f}")


def test_criterion_8_bond_return_identities():
    worst_flat = 0.0
    for y in np.linspace(0.005, 0.15, 30):
        r = bond_total_return(np.full(13, y), maturity_years=20)
        worst_flat = max(worst_flat, float(np.max(np.abs(r - y / 12.0))))
    price = sum(0.04 / 1.03 ** k for k in range(1, 6)) + 1.03 ** -5
    oracle = 0.04 / 12.0 + (price - 1.0)
    got = bond_total_return(np.array([0.04, 0.03]), maturity_years=5)[0]
    dcf_gap = abs(got - oracle)
    _record(8, "bond return identities",
            worst_flat < 1e-14 and dcf_gap < 1e-12,
            f"flat-yield gap {worst_flat:.2e}; five-year DCF gap {dcf_gap:.2e}")


def test_criterion_9_market_data_ranges():
    path = os.environ.get("RSBEKK_DATA_CSV", os.path.join("data", "crsp_like.csv"))
    if not os.path.exists(path):
        line = ("criterion 9 (market-data premium ranges): SKIP - no dataset "
                "supplied (set RSBEKK_DATA_CSV to a date,rm,rb monthly CSV)")
        _LINES.append(line)
        pytest.skip(line)
    from rsbekk import annualized_median_premium, linear_premium, rs_premium
    from rsbekk.dataio import load_csv

    table = load_csv(path)
    series = (np.asarray(table.columns["rm"]), np.asarray(table.columns["rb"]))
    single = fit(series, config=OptimizerConfig(seed=0), compute_std_errors=False)
    sp = log_likelihood(series, single.params)
    ann_single = annualized_median_premium(
        linear_premium(single.params.mean, sp.h_path).total)
    switching = fit(series, n_regimes=2, config=OptimizerConfig(seed=0),
                    compute_std_errors=False)
    _, filt = rs_log_likelihood(series, switching.params)
    ann_rs = annualized_median_premium(
        rs_premium(switching.params, filt).total)
    occupancy = float((filt.smoothed[:, 0] > 0.5).mean())
    ok = (0.03 <= ann_single <= 0.05 and 0.03 <= ann_rs <= 0.05
          and 0.65 <= occupancy <= 0.82)
    _record(9, "market-data premium ranges", ok,
            f"annualized premium single={ann_single:.4f} switching={ann_rs:.4f}; "
            f"low-vol occupancy {occupancy:.3f}")
