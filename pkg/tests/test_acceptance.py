"""Acceptance criteria 1-12, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v`` (a PASS/FAIL summary line per
criterion is printed at the end of the session) or directly with
``python3 tests/test_acceptance.py``.
"""
import itertools
import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from risdssm.analysis import (Method, UpepInputs, abep_union_bound, crossover_lhs_correct,
                              crossover_lhs_wrong, crossover_min_L, diversity_order,
                              product_channel_cdf, snr_at_target, snr_for_abep, upep_correct,
                              upep_wrong)
from risdssm.analysis.upep import upep_correct_partial, upep_wrong_partial
from risdssm.channel import complex_normal
from risdssm.config import make_config
from risdssm.detectors import complexity_counts, detect_optimal, detect_suboptimal
from risdssm.montecarlo import LOW_CONFIDENCE_ERRORS, run_abep, run_detector_comparison
from risdssm.channel import draw_realization, noiseless_branch_outputs
from risdssm.modem import TxTriple, build_constellation
from oracles import upep_correct_primitive, upep_wrong_primitive

RESULTS: dict[int, tuple[bool, str]] = {}

GRID_DB = (-10, 0, 10, 20, 30)
GRID_L = (16, 64, 100)
GRID_P = (2.0, 4.0)


def _grid():
    return itertools.product(GRID_DB, GRID_L, GRID_P)


def _record(n, ok, detail):
    RESULTS[n] = (bool(ok), detail)
    return ok


def criterion_1():
    worst, skipped = 0.0, 0
    for db, L, p in _grid():
        rho = 10 ** (db / 10)
        for fn, inp in ((upep_correct, UpepInputs(rho, L, eta_bar=p)),
                        (upep_wrong, UpepInputs(rho, L, sym_energy=p))):
            s = fn(inp, Method.SERIES)
            if not s.converged:
                skipped += 1
                continue
            i = fn(inp, Method.INTEGRAL).value
            worst = max(worst, abs(i - s.value) / i)
    return _record(1, worst < 1e-6, f"max |int-series|/int = {worst:.2e} (< 1e-6), "
                                    f"{skipped} guard-skipped of 60")


def criterion_2():
    worst = 0.0
    for db, L, p in _grid():
        rho = 10 ** (db / 10)
        i = upep_correct(UpepInputs(rho, L, eta_bar=p)).value
        worst = max(worst, abs(i - upep_correct_primitive(rho * L * L * p)) / i)
        w = upep_wrong(UpepInputs(rho, L, sym_energy=p)).value
        worst = max(worst, abs(w - upep_wrong_primitive(rho * L * L * p)) / w)
    return _record(2, worst < 1e-6, f"max rel. deviation from primitive quadrature = {worst:.2e}")


def criterion_3():
    rng = np.random.default_rng(20240601)
    n = 1_000_000
    x = np.sort(np.abs(complex_normal(rng, n) * complex_normal(rng, n)) ** 2)
    F = product_channel_cdf(x)
    i = np.arange(1, n + 1)
    d = max(np.max(i / n - F), np.max(F - (i - 1) / n))
    return _record(3, d < 0.005, f"KS sup-distance = {d:.2e} (< 5e-3) from 1e6 samples")


def criterion_4():
    cfg = make_config(N=2, M=2, K=2, L=64, snr_grid_db=np.arange(-30, 12, 2),
                      trials=1_000_000, seed=4)
    curve = run_abep(cfg, "suboptimal")
    checked, bad = 0, []
    for p in curve.points:
        if p.errors < LOW_CONFIDENCE_ERRORS or p.abep > 1e-2:
            continue
        checked += 1
        ub = abep_union_bound(cfg, 10 ** (p.snr_db / 10))
        if not (p.abep < ub <= 3 * p.abep):
            bad.append(f"{p.snr_db:g} dB: sim {p.abep:.3e} bound {ub:.3e}")
    ok = checked > 0 and not bad
    return _record(4, ok, f"{checked} points checked, bound/sim within (1, 3]"
                   + ("" if not bad else "; violations: " + "; ".join(bad)))


def _crossing(curve, target):
    keep = curve.errors >= LOW_CONFIDENCE_ERRORS
    return snr_at_target(curve.snr_db[keep], curve.abep[keep], target)


def criterion_5():
    cfg = make_config(N=2, M=2, K=2, L=100, snr_grid_db=np.arange(-30, 22, 2),
                      trials=1_000_000, seed=5)
    sub, opt = run_detector_comparison(cfg)
    gap = _crossing(sub, 1e-3) - _crossing(opt, 1e-3)
    return _record(5, 3 <= gap <= 9, f"suboptimal - optimal SNR at ABEP 1e-3 = {gap:.2f} dB "
                                     "(in [3, 9])")


def criterion_6():
    snrs = np.arange(10.0, 30.5, 0.5)
    cfg = lambda K, kind: make_config(N=2, M=2, K=K, L=100, kind=kind)
    psk_better = all(
        abep_union_bound(cfg(K, "PSK"), 10 ** (s / 10)) < abep_union_bound(cfg(K, "QAM"), 10 ** (s / 10))
        for K in (16, 64) for s in snrs)
    equal = all(abep_union_bound(cfg(4, "PSK"), 10 ** (s / 10))
                == abep_union_bound(cfg(4, "QAM"), 10 ** (s / 10)) for s in snrs)
    return _record(6, psk_better and equal,
                   f"16PSK<16QAM and 64PSK<64QAM on 10-30 dB: {psk_better}; 4QAM == QPSK: {equal}")


def criterion_7():
    at = lambda K, kind: snr_for_abep(make_config(N=2, M=2, K=K, L=100, kind=kind), 1e-4)
    b = at(2, "PSK")
    gq = at(4, "PSK") - b
    g16 = at(16, "QAM") - b
    ok = abs(gq - 3) <= 1.5 and abs(g16 - 9) <= 2
    return _record(7, ok, f"gap vs BPSK at bound 1e-4: QPSK {gq:.2f} dB (3+-1.5), "
                          f"16QAM {g16:.2f} dB (9+-2)")


def criterion_8():
    slopes = []
    for L, p in itertools.product(GRID_L, GRID_P):
        slopes.append(diversity_order(
            lambda r: upep_correct(UpepInputs(r, L, eta_bar=p), Method.ASYMPTOTIC).value, 40, 60))
        slopes.append(diversity_order(
            lambda r: upep_wrong(UpepInputs(r, L, sym_energy=p), Method.ASYMPTOTIC).value, 40, 60))
    lo, hi = min(slopes), max(slopes)
    return _record(8, 0.85 <= lo and hi <= 1.15, f"fitted slopes in [{lo:.3f}, {hi:.3f}]")


def criterion_9():
    worst = 0.0
    for c in np.logspace(2, 10, 33):
        inp_c, inp_w = UpepInputs(c, 1, eta_bar=1.0), UpepInputs(c, 1, sym_energy=1.0)
        full_c = upep_correct(inp_c, Method.SERIES)
        full_w = upep_wrong(inp_w, Method.SERIES)
        assert full_c.converged and full_w.converged
        worst = max(worst, abs(upep_correct_partial(inp_c, 2) - full_c.value) / full_c.value,
                    abs(upep_wrong_partial(inp_w, 2) - full_w.value) / full_w.value)
    return _record(9, worst < 0.05, f"max rel. error of v<=2 partial sums = {worst:.2e} (< 5%)")


def criterion_10():
    lines, ok = [], True
    for L, ssm_wins in ((1, True), (16, False), (64, False)):
        cfg = make_config(N=2, M=2, K=2, L=L, snr_grid_db=np.arange(0, 32, 2),
                          trials=500_000, seed=10)
        ris = run_abep(cfg, system="ris-dssm")
        ssm = run_abep(cfg, system="ssm")
        n, wrong = 0, []
        for a, b in zip(ris.points, ssm.points):
            if min(a.errors, b.errors) < LOW_CONFIDENCE_ERRORS:
                continue
            n += 1
            if (b.abep < a.abep) != ssm_wins:
                wrong.append(f"{a.snr_db:g}")
        ok &= n > 0 and not wrong
        lines.append(f"L={L}: {n} pts, {'SSM' if ssm_wins else 'RIS-DSSM'} better"
                     + (f" except at {','.join(wrong)} dB" if wrong else ""))
    for db in (10, 20, 30):
        rho = 10 ** (db / 10)
        lc, lw = crossover_min_L(rho, 2.0, 1.0)
        if lc is not None:
            ok &= crossover_lhs_correct(lc, rho, 2.0) <= 0
        if lw is not None:
            ok &= crossover_lhs_wrong(lw, rho, 1.0) <= 0
    lines.append("crossover re-substitution LHS <= 0")
    return _record(10, ok, "; ".join(lines))


def criterion_11():
    rng = np.random.default_rng(11)
    mismatches = []
    for M, N, K in itertools.product((2, 4), repeat=3):
        c = build_constellation("PSK", K)
        cr = draw_realization(rng, N, M)
        y = noiseless_branch_outputs(cr, TxTriple(0, M - 1, 1), c.points[1], 8) + 0.1
        for det, kind in ((detect_suboptimal, "suboptimal"), (detect_optimal, "optimal")):
            r = det(y, cr, c, 8)
            if (r.real_mults, r.real_adds) != complexity_counts(M, N, K, kind):
                mismatches.append((M, N, K, kind))
    return _record(11, not mismatches, f"instrumented == closed form on 8 shapes x 2 detectors"
                   + (f"; mismatches {mismatches}" if mismatches else ""))


def criterion_12():
    worst = math.inf
    for db, L, p in _grid():
        inp = UpepInputs(10 ** (db / 10), L, eta_bar=p)
        worst = min(worst, upep_correct(inp, Method.UPPER_BOUND).value / upep_correct(inp).value)
    return _record(12, worst >= 1.0, f"min bound/integral ratio = {worst:.4f} (>= 1)")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


@pytest.mark.parametrize("fn", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 13)])
def test_criterion(fn):
    ok = fn()
    n = CRITERIA.index(fn) + 1
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {RESULTS[n][1]}")
    assert ok, RESULTS[n][1]


if __name__ == "__main__":
    failed = 0
    for i, fn in enumerate(CRITERIA, 1):
        ok = fn()
        failed += not ok
        print(f"criterion {i}: {'PASS' if ok else 'FAIL'} - {RESULTS[i][1]}", flush=True)
    sys.exit(1 if failed else 0)
