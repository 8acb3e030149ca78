"""Acceptance criteria, one test each, with a one-line PASS/FAIL summary."""

import time

import numpy as np
import pytest

from meanlab import cli
from meanlab import inequality_lab as lab
from meanlab import kernel_posdef as kp
from meanlab.matrix_core import random_matrix, random_psd
from meanlab.matrix_means import explicit_map, hadamard_mean
from meanlab.scalar_means import L


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[acceptance {number:2d}] {'PASS' if ok else 'FAIL'}  {title}  {detail}")
        assert ok, f"criterion {number}: {title} {detail}"

    return emit


def best_time(fn, repeat=5):
    """Smallest wall time over a few calls, after one warm-up call."""
    out = fn()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return out, min(times)


def test_01_phi_two_thirds_triple(report):
    f = kp.phi(2 / 3)
    rep, elapsed = best_time(lambda: kp.gram(f, [1.0, 2.0, 3.0]))
    eig_err = np.max(np.abs(rep.eigenvalues - [2.88404, 0.142344, -0.026381]))
    entry_err = max(abs(rep.gram[0, 1] - 0.983295), abs(rep.gram[0, 2] - 0.857656))
    ok = eig_err <= 1e-4 and entry_err <= 1e-6 and elapsed < 1e-3
    report(1, "phi_2/3 spectrum on (1,2,3)", ok,
           f"eig err {eig_err:.1e}, entry err {entry_err:.1e}, {elapsed * 1e3:.3f} ms")


def test_02_psi_xi_triples(report):
    errs = {}
    for spec, triple in [("psi:s=1/4", (2.96626, 0.0436155, -0.00987773)),
                         ("xi:s=3/4", (2.98432, 0.0182053, -0.00252532))]:
        rep = kp.gram(kp.parse_kernel(spec), [1.0, 2.0, 3.0])
        errs[spec] = float(np.max(np.abs(rep.eigenvalues - triple)))
    report(2, "psi_1/4 and xi_3/4 spectra", max(errs.values()) <= 1e-4,
           ", ".join(f"{k} err {v:.1e}" for k, v in errs.items()))


def test_03_integer_grid_witnesses(report):
    results = {}
    for spec, n in [("phi:r=0.9", 5), ("eta:p=3/7", 7)]:
        f = kp.parse_kernel(spec)
        w, elapsed = best_time(lambda: kp.search_counterexample(f, n, "integer"))
        again = kp.search_counterexample(f, n, "integer")
        deterministic = w is not None and again is not None and w.points == again.points \
            and w.min_eigenvalue == again.min_eigenvalue
        results[spec] = (w is not None and w.min_eigenvalue < 0 and deterministic and elapsed < 1e-2,
                         w.min_eigenvalue if w else None, elapsed)
    ok = all(r[0] for r in results.values())
    report(3, "integer-grid witnesses", ok,
           ", ".join(f"{k} min eig {r[1]:.4g} in {r[2] * 1e3:.2f} ms" for k, r in results.items()))


def test_04_sharp_constant_scans(report):
    (t_scan, s_scan), elapsed = best_time(lambda: lab.scan_sharp_constants(lab.GridSpec()), repeat=2)
    ok = (2 / 3 - 1e-4 <= t_scan.extremum <= 2 / 3) and (2 / 3 <= s_scan.extremum <= 2 / 3 + 1e-4) \
        and elapsed < 1.0 and len(t_scan.grid) >= 100_000
    report(4, "sharp constants", ok,
           f"sup {t_scan.extremum:.15f}, inf {s_scan.extremum:.15f}, {len(t_scan.grid)} points, {elapsed:.3f} s")


def test_05_scalar_chain_fuzz(report):
    start = time.perf_counter()
    outcomes = {}
    for suite in ("chain", "refined", "rho"):
        res = cli.run_suite(suite, cli.RunConfig(seed=0, trials=100_000, m_max=5, scalar_tol=1e-12))
        outcomes[suite] = (res["n_trials"], len(res["violations"]))
    elapsed = time.perf_counter() - start
    ok = all(n == 100_000 and v == 0 for n, v in outcomes.values()) and elapsed < 10
    report(5, "scalar chain fuzz", ok,
           ", ".join(f"{k}: {v} violations / {n}" for k, (n, v) in outcomes.items()) + f", {elapsed:.2f} s")


def test_06_operator_suite(report):
    start = time.perf_counter()
    res = cli.run_suite("operator", cli.RunConfig(seed=0, trials=200, n_max=8, extra_params=10, matrix_tol=1e-9))
    elapsed = time.perf_counter() - start
    ok = res["n_trials"] == 200 and res["n_checks"] == 200 * 11 and not res["violations"] \
        and res["worst_gap"] >= -1e-9 and elapsed < 30
    report(6, "operator chain", ok,
           f"{res['n_checks']} checks, {len(res['violations'])} violations, "
           f"worst lambda_min {res['worst_gap']:.2e}, {elapsed:.2f} s")


def test_07_norm_suites(report):
    start = time.perf_counter()
    cfg = cli.RunConfig(seed=0, trials=200, n_max=6, r_values=[0.0, 1 / 3, 2 / 3, 1.0])
    hs = cli.run_suite("hsnorm", cfg)
    ui = cli.run_suite("uinorm", cfg)
    elapsed = time.perf_counter() - start
    ok = not hs["violations"] and not ui["violations"] and hs["n_trials"] == ui["n_trials"] == 200 and elapsed < 30
    report(7, "Hilbert-Schmidt chain and Ky Fan bounds", ok,
           f"hs {len(hs['violations'])} / ui {len(ui['violations'])} violations, {elapsed:.2f} s")


def test_08_quadrature_vs_hadamard(report):
    worst = 0.0
    for i in range(50):
        rng = np.random.default_rng([8, i])
        n = 1 + i % 6
        s, t, x = random_psd(n, rng), random_psd(n, rng), random_matrix(n, rng)
        gap = np.linalg.norm(explicit_map(L, s, t, x, nodes=64) - hadamard_mean(L, s, t, x))
        worst = max(worst, float(gap))
    report(8, "logarithmic map cross-check", worst <= 1e-8, f"max Frobenius gap {worst:.2e}")


def test_09_known_positive_definite_catalog(report):
    rng = np.random.default_rng(9)
    families = [kp.sech_pow(c) for c in (0.1, 0.5, 1, 2)]
    for _ in range(4):
        a, b = np.sort(rng.uniform(0, 3, size=2))
        families.append(kp.cosh_ratio(a, b))
    betas = np.append(rng.uniform(-0.99, 1.0, size=4), [-0.99, 1.0])
    families += [kp.shifted_sech(b) for b in betas] + [kp.sinh_sech(b) for b in betas]
    verdicts = [kp.known_family_check(f, n_points=10, trials=20, seed=k) for k, f in enumerate(families)]
    failed = [v.family for v in verdicts if not v.all_psd]
    witness = kp.search_counterexample(kp.shifted_sech(2.0), 8, "auto", budget=2000, seed=0)
    ok = not failed and witness is not None
    found = f"{witness.min_eigenvalue:.3g}" if witness else "none"
    report(9, "known positive definite families", ok,
           f"{len(verdicts) - len(failed)}/{len(verdicts)} families PSD, shiftedsech(2) witness {found}")


def test_10_necessity_witnesses(report):
    table = {f.family: f for f in kp.necessity_witnesses(budget=2000, seed=0)}
    wanted = ["ratio:L/heron:s=0.6", "ratio:L/heron:s=0.7", "ratio:heron:s=0.9/heron:s=0.8",
              "ratio:binomial:p=0.3333333333333333/heron:s=0.6666666666666666"]
    status = {k: table[k].status for k in wanted}
    required = [wanted[0], wanted[2], wanted[3]]
    ok = all(s in ("witness", "inconclusive") for s in status.values()) \
        and all(status[k] == "witness" for k in required)
    report(10, "necessity witness table", ok,
           ", ".join(f"{k.removeprefix('ratio:')}: {v}" for k, v in status.items()))
