"""Acceptance suite: one PASS/FAIL line per criterion.

Each test prints its verdict line even under output capture, then asserts
the same condition.  Run ``pytest tests/test_acceptance.py -v`` to see them.
"""

import itertools
import json
import math
import time

import numpy as np
import pytest

from qbottleneck import witnesses
from qbottleneck.cli import main
from qbottleneck.free_particle import (
    beam_splitter_entropy,
    dicke_occupancy_report,
    protocol_sweep,
)
from qbottleneck.graphs import star, vertex_barbell
from qbottleneck.pauli import nested_commutator, sample_bottleneck_hamiltonian, single
from qbottleneck.qubit_dynamics import capacity_experiment, ghz_fast_entangling
from qbottleneck.swap_router import routing_comparison
from qbottleneck.trotter import TrotterParams, loglog_slope, trotter_error

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail

    return emit


def test_criterion_1_protocol_optimality(report):
    ns = [1, 2, 4, 8, 16, 32]
    t0 = time.perf_counter()
    rows = protocol_sweep(ns)
    elapsed = time.perf_counter() - t0
    leak = max(r["max_column_leak"] for r in rows)
    routed = all(r["routed"] for r in rows)
    times_ok = all(
        math.isclose(r["protocol_time"], 1.5 * math.pi * math.sqrt(r["N"]), rel_tol=1e-12) for r in rows
    )
    slope = loglog_slope(ns, [r["protocol_time"] for r in rows])
    ok = routed and leak <= 1e-8 and times_ok and abs(slope - 0.5) <= 0.02 and elapsed < 10
    report(1, ok, f"routed={routed} max leak={leak:.2e} time=(3pi/2)sqrt(N):{times_ok} slope={slope:.4f} {elapsed:.2f}s")


def test_criterion_2_gate_separation(report):
    ns = [1, 2, 4, 8, 16, 32]
    t0 = time.perf_counter()
    rows = routing_comparison(ns)
    elapsed = time.perf_counter() - t0
    slope = loglog_slope(ns, [r["swap_depth"] for r in rows])
    ratio_slope = loglog_slope(ns, [r["depth_over_time"] for r in rows])
    table = " ".join(f"N={r['N']}:{r['swap_depth']}/{r['free_time']:.2f}" for r in rows)
    ok = abs(slope - 1.0) <= 0.1 and ratio_slope > 0.4 and elapsed < 5
    report(2, ok, f"depth slope={slope:.3f} depth/time slope={ratio_slope:.3f} [{table}] {elapsed:.2f}s")


def _dense_comm(a, b):
    return a @ b - b @ a


def test_criterion_3_base_case_bound(report):
    graphs = [(f"star({k})", star(k)) for k in range(2, 9)] + [("barbell(3)", vertex_barbell(3))]
    t0 = time.perf_counter()
    violations = {}
    worst = 0.0
    for name, g in graphs:
        recs = witnesses.commutator_suite(g, 200, seed=0, bound="printed")
        violations[name] = sum(not r["passed"] for r in recs)
        worst = max(worst, max(r["ratio"] for r in recs))
    nested_err = 0.0
    for g in (star(4), star(8), vertex_barbell(3)):
        h_lc, h_r = sample_bottleneck_hamiltonian(g, np.random.default_rng(1))
        d = {"LC": h_lc.to_matrix(), "R": h_r.to_matrix()}
        dim = d["LC"].shape[0]
        for length in (2, 3, 4):
            for seq in itertools.product(("LC", "R"), repeat=length):
                acc = d[seq[0]]
                for s in seq[1:]:
                    acc = _dense_comm(d[s], acc)
                dense = np.linalg.norm(acc) / math.sqrt(dim)
                sym = nested_commutator(seq, h_lc, h_r).frobenius_norm()
                nested_err = max(nested_err, abs(dense - sym))
    elapsed = time.perf_counter() - t0
    total = sum(violations.values())
    ok = total == 0 and nested_err <= 1e-8 and elapsed < 60
    bad = {k: v for k, v in violations.items() if v}
    report(
        3,
        ok,
        f"printed-bound violations={total} {bad} max ratio={worst:.3f}; "
        f"nested-commutator max |sym-dense|={nested_err:.1e} {elapsed:.2f}s",
    )


def _commuting_split(g):
    h_lc = sum((single(g.n, {q: "Z"}, 0.3 + 0.1 * q) for q in list(g.left) + list(g.center)[1:]),
               single(g.n, {g.center[0]: "Z"}, 0.7))
    h_r = sum((single(g.n, {g.center[0]: "Z", r: "Z"}, 0.5) for r in g.right), single(g.n, {g.right[0]: "Z"}, 0.2))
    return h_lc, h_r


def test_criterion_4_trotter_scaling(report):
    t0 = time.perf_counter()
    Ms = [4, 8, 16, 32]
    parts = []
    ok = True
    for leaves in (4, 6):
        g = star(leaves)
        scale = witnesses.hamiltonian_scale(g, seed=0)
        h_lc, h_r = sample_bottleneck_hamiltonian(g, np.random.default_rng(0))
        for k in (1, 2):
            _, m_slope = witnesses.trotter_suite(g, k, 0.5, Ms, seed=0)
            ts = np.geomspace(0.05, 0.4, 6) / scale
            errs = [trotter_error(h_lc, h_r, TrotterParams(k, 1, float(t)), g)[0] for t in ts]
            t_slope = loglog_slope(ts, errs)
            good = abs(m_slope + 2 * k) <= 0.2 and abs(t_slope - (2 * k + 1)) <= 0.3
            ok &= good
            parts.append(f"star({leaves}) k={k}: M-slope={m_slope:.2f} t-slope={t_slope:.2f}")
    comm_err = 0.0
    for leaves in (4, 6):
        g = star(leaves)
        h_lc, h_r = _commuting_split(g)
        for k, M, t in ((1, 1, 2.0), (2, 3, 1.0)):
            comm_err = max(comm_err, trotter_error(h_lc, h_r, TrotterParams(k, M, t), g)[0])
    elapsed = time.perf_counter() - t0
    ok = ok and comm_err <= 1e-12 and elapsed < 120
    report(4, ok, "; ".join(parts) + f"; commuting error={comm_err:.1e} {elapsed:.2f}s")


def test_criterion_5_witnesses(report):
    t0 = time.perf_counter()
    n = 500
    suites = {
        "ste": witnesses.ste_suite(star(6), n, seed=0),
        "sie": witnesses.sie_suite(star(6), n, seed=0),
        "fannes": witnesses.fannes_suite(n, seed=0),
        "circuit-distance": witnesses.circuit_distance_suite(star(6), n, seed=0),
        "rho_z": witnesses.rho_z_suite(star(4), n, seed=0),
    }
    elapsed = time.perf_counter() - t0
    counts = {k: (len(v), sum(not r["passed"] for r in v)) for k, v in suites.items()}
    ok = all(c >= 500 and bad == 0 for c, bad in counts.values()) and elapsed < 120
    detail = " ".join(f"{k}:{bad}/{c}" for k, (c, bad) in counts.items())
    report(5, ok, f"violations {detail} {elapsed:.2f}s")


def test_criterion_6_ghz(report):
    t0 = time.perf_counter()
    results = {N: ghz_fast_entangling(N) for N in range(2, 9)}
    elapsed = time.perf_counter() - t0
    fid = min(r.fidelity for r in results.values())
    times_ok = all(math.isclose(r.time, math.pi / N) for N, r in results.items())
    rates_ok = all(math.isclose(r.average_rate, N / math.pi, rel_tol=1e-8) for N, r in results.items())
    rates = " ".join(f"{N}:{r.average_rate:.3f}" for N, r in results.items())
    ok = 1 - fid <= 1e-9 and times_ok and rates_ok and elapsed < 5
    report(6, ok, f"min fidelity=1-{1 - fid:.1e} rates(N/pi) {rates} {elapsed:.2f}s")


def test_criterion_7_capacity(report):
    gammas = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0]
    t0 = time.perf_counter()
    parts = []
    ok = True
    for leaves in (6, 8):
        res = capacity_experiment(star(leaves), trials=200, time=1.0, seed=0)
        tails = res.tail_fractions(gammas, 1.0)
        mono = all(a >= b for a, b in zip(tails, tails[1:]))
        ok &= mono and len(res.values) == 200 and bool(np.all(np.isfinite(res.values)))
        parts.append(
            f"star({leaves}) mean|dS_L|={res.mean_delta_s_l:.4f} ref={res.reference:.3f} tail non-increasing={mono}"
        )
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 300
    report(7, ok, "; ".join(parts) + f" {elapsed:.2f}s")


def test_criterion_8_oracles(report):
    t0 = time.perf_counter()
    rows = [dicke_occupancy_report(n) for n in range(2, 13, 2)]
    occ = [r["brute_force"] for r in rows]
    monotone = all(a < b for a, b in zip(occ, occ[1:]))
    n4 = next(r for r in rows if r["n"] == 4)
    above = n4["brute_force"] >= n4["printed"] - 1e-12
    ratios = {n: beam_splitter_entropy(n) / math.log2(n) for n in (64, 128, 256, 512, 1024, 2048, 4096)}
    in_band = all(0.4 <= v <= 0.7 for v in ratios.values())
    elapsed = time.perf_counter() - t0
    ok = monotone and above and in_band and elapsed < 10
    report(
        8,
        ok,
        f"dicke monotone={monotone} n=4 brute={n4['brute_force']:.4f} printed={n4['printed']:.4f} "
        f"(n+2)/4={n4['closed_form']:.4f}; beam-splitter ratio {min(ratios.values()):.3f}..{max(ratios.values()):.3f} "
        f"{elapsed:.2f}s",
    )


COMMANDS = [
    ["route-free", "--graph", "star:8"],
    ["route-free", "--sweep", "1,2,4,8"],
    ["route-swap", "--graph", "star:8"],
    ["route-swap", "--sweep", "1,2,4,8"],
    ["verify", "ste", "--trials", "30"],
    ["verify", "sie", "--trials", "30"],
    ["verify", "fannes", "--trials", "30"],
    ["verify", "circuit-distance", "--trials", "30"],
    ["verify", "commutator", "--samples", "30"],
    ["verify", "trotter", "--k", "1"],
    ["capacity", "--graph", "star:4", "--trials", "30"],
    ["ghz"],
    ["bounds", "--graph", "star:128"],
    ["dicke"],
    ["beamsplitter"],
]


def test_criterion_9_determinism(report, capsys):
    mismatched = []
    for argv in COMMANDS:
        outs = []
        for _ in range(2):
            main(argv + ["--seed", "11", "--format", "json"])
            outs.append(capsys.readouterr().out)
        json.loads(outs[0])
        if outs[0] != outs[1]:
            mismatched.append(" ".join(argv))
    report(9, not mismatched, f"{len(COMMANDS)} commands rerun with seed 11, mismatches={mismatched}")
