"""Acceptance criteria 1-10, each with its runtime budget."""

import math
import time

import numpy as np
from scipy.integrate import quad

from orlicz_lab.bessel import calderon_inversion, modulus_slope, potential, radial_kernel, synthesize_kernel
from orlicz_lab.family import make_family
from orlicz_lab.field import Field, Grid, integrate, spectral_multiply, unit_ball_volume
from orlicz_lab.lpatoms import build_filter_bank, lowpass_profile, lp_pieces
from orlicz_lab.orlicz import luxemburg_norm
from orlicz_lab.report import strip_timestamp
from orlicz_lab.suites import MODULUS_GRID, SuiteConfig, run_suite
from orlicz_lab.young import YoungFunction, conjugate, delta2_indices, young_inequality_violation


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def suite_ok(rep):
    return rep.passed, [name for name, ok in rep.checks.items() if not ok]


def test_criterion_01_young_algebra(record):
    with Clock() as clk:
        t = np.geomspace(1e-3, 1e3, 2001)
        conj_err = 0.0
        viol = -math.inf
        for p in (1.5, 2.0, 3.0):
            A = YoungFunction.power(p)
            Ah = conjugate(A)
            q = p / (p - 1)
            oracle = (p - 1) * p ** (-q) * t**q
            conj_err = max(conj_err, float(np.max(np.abs(Ah(t) / oracle - 1))))
            grid = np.geomspace(1e-3, 1e3, 200)
            viol = max(viol, young_inequality_violation(A, Ah, grid, grid))
        idx = delta2_indices(YoungFunction.zygmund(2, 1, 1))
        zyg = (round(idx.p_minus, 6), round(idx.p_plus, 6))
    ok = conj_err < 1e-4 and viol <= 1e-9 and zyg == (2.0, 3.0) and clk.elapsed < 10
    record(1, ok, f"conjugate err {conj_err:.2e}, Young violation {viol:.2e}, Zygmund indices {zyg}, {clk.elapsed:.1f}s")
    assert ok


def test_criterion_02_luxemburg(record):
    with Clock() as clk:
        g = Grid(1, 4096, 16.0)
        u = Field.from_function(g, lambda x: np.exp(-(x**2)))
        closed = max(
            abs(luxemburg_norm(YoungFunction.power(p), u).value - (math.pi / p) ** (1 / (2 * p))) for p in (1.5, 2.0, 3.0)
        )
        rep = run_suite(SuiteConfig("orlicz-norms", family_size=100))
        passed, failed = suite_ok(rep)
    ok = closed <= 1e-7 and passed and rep.constants["homogeneity"] <= 1e-7 and rep.constants["triangle"] <= 1e-7
    ok = ok and clk.elapsed < 30
    record(
        2,
        ok,
        f"closed-form err {closed:.2e}, homogeneity {rep.constants['homogeneity']:.1e}, "
        f"triangle {rep.constants['triangle']:.1e} over 100 fields {failed or ''}, {clk.elapsed:.1f}s",
    )
    assert ok


def continuum_mass(s, n):
    area = n * unit_ball_volume(n)

    def f(r):
        return float(radial_kernel(np.array([r]), s, n)[0]) * r ** (n - 1) * area

    pieces = ((0, 1e-6), (1e-6, 1e-2), (1e-2, 1), (1, 10), (10, 80))
    return sum(quad(f, a, b, limit=400, epsabs=1e-13, epsrel=1e-12)[0] for a, b in pieces)


def test_criterion_03_bessel_kernel(record):
    with Clock() as clk:
        mass_err = 0.0
        checks_failed = []
        for n, N, L in ((1, 4096, 32.0), (2, 256, 16.0)):
            for s in (0.3, 0.5, 1.0, 2.0):
                # discrete mass (origin refill) and the continuum kernel mass by quadrature
                k = synthesize_kernel(s, Grid(n, N, L))
                mass_err = max(mass_err, abs(integrate(k.samples) - 1), abs(continuum_mass(s, n) - 1))
                rep = run_suite(SuiteConfig("bessel-kernel", n=n, N=N, L=L, s=s))
                checks_failed += [f"n={n},s={s}:{c}" for c, ok in rep.checks.items() if not ok]
        g = Grid(1, 4096, 32.0)
        arr = synthesize_kernel(2.0, g).samples.samples
        off = g.axis != 0
        closed = float(np.max(np.abs(arr[off] - 0.5 * np.exp(-np.abs(g.axis[off])))))
        N_mod, L_mod = MODULUS_GRID
        slopes = {s: modulus_slope(synthesize_kernel(s, Grid(1, N_mod, L_mod))) for s in (0.3, 0.5, 0.7)}
        slope_err = max(abs(v - s) for s, v in slopes.items())
    ok = mass_err <= 5e-6 and closed <= 1e-6 and slope_err <= 0.05 and not checks_failed and clk.elapsed < 60
    record(
        3,
        ok,
        f"mass err {mass_err:.1e}, s=2 closed form {closed:.1e}, "
        f"slopes {', '.join(f'{v:.3f}' for v in slopes.values())} {checks_failed or ''}, {clk.elapsed:.1f}s",
    )
    assert ok


def test_criterion_04_calderon(record):
    with Clock() as clk:
        g = Grid(1, 4096, 16.0)
        worst = 0.0
        for f in make_family("gaussians", 10, 0, g):
            u = potential(1.0, f)
            rec = calderon_inversion(u)
            worst = max(worst, float(np.linalg.norm((rec - f).samples) / np.linalg.norm(f.samples)))
        ratios = {}
        failed = []
        for young in ("power:p=2", "zygmund:p=2,q=1,r=1"):
            rep = run_suite(SuiteConfig("calderon-s1", young=young))
            ratios[young] = (rep.constants["H_over_W"], rep.constants["W_over_H"])
            failed += [f"{young}:{c}" for c, ok in rep.checks.items() if not ok]
            finite = all(math.isfinite(v) for v in ratios[young])
            failed += [] if finite else [f"{young}: non-finite ratio"]
    ok = worst < 1e-2 and not failed and clk.elapsed < 120
    record(4, ok, f"inversion rel L2 err {worst:.1e}, ratios {ratios} {failed or ''}, {clk.elapsed:.1f}s")
    assert ok


def test_criterion_05_embeddings(record):
    with Clock() as clk:
        out = []
        failed = []
        for s, s2 in ((0.3, 0.6), (0.5, 0.8)):
            rep = run_suite(SuiteConfig("embedding-s1", s=s, s2=s2, family_size=10))
            violations = sum(v for k, v in rep.constants.items() if k.startswith("violations"))
            failed += [f"s1({s},{s2}):{c}" for c, ok in rep.checks.items() if not ok]
            rev = run_suite(SuiteConfig("embedding-s2", s=s, s2=s2, family_size=10))
            failed += [f"s2({s},{s2}):{c}" for c, ok in rev.checks.items() if not ok]
            out.append(f"({s},{s2}) violations {violations} c_hat {rep.constants['c_hat']:.3f} reverse C {rev.constants['C']:.3f}")
            if violations or not math.isfinite(rev.constants["C"]):
                failed.append(f"({s},{s2})")
    ok = not failed and clk.elapsed < 180
    record(5, ok, f"{'; '.join(out)} {failed or ''}, {clk.elapsed:.1f}s")
    assert ok


def test_criterion_06_increment_kernel(record):
    with Clock() as clk:
        rep = run_suite(SuiteConfig("increment-kernel", family_size=20, alpha=0.9, gamma=0.5))
    est = rep.stability["operator_norm"]
    ok = est["resolutions"] == [32, 64, 128] and rep.passed and clk.elapsed < 180
    record(6, ok, f"estimates {[round(e, 4) for e in est['estimates']]} growth {est['growth']:.3f}, {clk.elapsed:.1f}s")
    assert ok


def test_criterion_07_littlewood_paley(record):
    with Clock() as clk:
        g = Grid(1, 512, 8.0)
        bank = build_filter_bank(6, g)
        defect = bank.partition_defect()
        rng = np.random.default_rng(0)
        raw = Field(g, rng.normal(size=g.shape))
        v = spectral_multiply(raw, lowpass_profile(np.sqrt(g.xi2) / 2.0 ** (bank.K - 1)))
        rec = float(np.max(np.abs(sum(p.samples for p in lp_pieces(bank, v)) - v.samples)))
        spreads = {}
        failed = []
        for young in ("power:p=2", "power:p=3"):
            for s in (0.5, 1.0):
                rep = run_suite(SuiteConfig("lp-equivalence", young=young, s=s, family_size=20))
                spreads[(young, s)] = round(rep.constants["r_max_over_r_min"], 3)
                failed += [f"{young},s={s}:{c}" for c, ok in rep.checks.items() if not ok]
    ok = defect <= 1e-12 and rec <= 1e-10 and not failed and clk.elapsed < 120
    record(7, ok, f"partition defect {defect:.1e}, reconstruction {rec:.1e}, r_max/r_min {spreads} {failed or ''}, {clk.elapsed:.1f}s")
    assert ok


def test_criterion_08_atoms(record):
    with Clock() as clk:
        rep = run_suite(SuiteConfig("atoms", I_max=6, m=2))
    c = rep.constants
    ok = (
        rep.passed
        and c["worst_atom_ratio"] <= 1 + 1e-6
        and c["reconstruction_error"] < 1e-3
        and clk.elapsed < 120
    )
    record(
        8,
        ok,
        f"worst atom ratio {c['worst_atom_ratio']:.10f}, reconstruction {c['reconstruction_error']:.1e}, "
        f"coefficient C {c['coefficient_constant']:.2f}, domination C {c['domination_constant']:.2f} "
        f"{[k for k, v in rep.checks.items() if not v] or ''}, {clk.elapsed:.1f}s",
    )
    assert ok


def test_criterion_09_strauss(record):
    with Clock() as clk:
        out = []
        failed = []
        for n in (2, 3):
            rep = run_suite(SuiteConfig("strauss", n=n, young="power:p=2", s=0.8, family_size=10))
            failed += [f"n={n}:{c}" for c, ok in rep.checks.items() if not ok]
            drift = rep.stability["strauss_sup"]["drift"]
            out.append(f"n={n} sup {rep.constants['strauss_sup']:.3f} drift {drift:.3f} slope {rep.constants['power_law_slope']:.1e}")
    ok = not failed and clk.elapsed < 180
    record(9, ok, f"{'; '.join(out)} {failed or ''}, {clk.elapsed:.1f}s")
    assert ok


def test_criterion_10_determinism(record, tmp_path):
    with Clock() as clk:
        same = True
        for cfg in (
            SuiteConfig("young-axioms", young="zygmund:p=2,q=1,r=1"),
            SuiteConfig("orlicz-norms", N=1024, family_size=10, seed=5),
            SuiteConfig("embedding-s2", N=512, family_size=4, seed=3),
            SuiteConfig("lp-equivalence", family_size=5, seed=9, threads=2),
            SuiteConfig("strauss", family_size=3, seed=2),
        ):
            a = run_suite(SuiteConfig(**{**cfg.__dict__, "out": str(tmp_path / "a")}))
            b = run_suite(SuiteConfig(**{**cfg.__dict__, "out": str(tmp_path / "b")}))
            same &= strip_timestamp(a.to_dict()) == strip_timestamp(b.to_dict())
            name = cfg.suite
            same &= (tmp_path / "a" / f"{name}.csv").read_bytes() == (tmp_path / "b" / f"{name}.csv").read_bytes()
    record(10, same, f"identical reports and CSV bytes across re-runs, {clk.elapsed:.1f}s")
    assert same
