"""Acceptance criteria, one test each, at the stated tolerances and time budgets.

Every test prints a single PASS/FAIL line; the lines are repeated in the
terminal summary. Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from stripembed.domain import StripDomain, embedding_norm, lambda_closed_form
from stripembed.eigensolve import (
    GridFunction,
    discrete_rayleigh,
    discrete_rayleigh_gradient,
    eigenfunction_error,
    first_eigenpair,
)
from stripembed.extremal import (
    BumpFactor,
    SeparableFunction,
    rayleigh,
    strip_gap,
    strip_trial,
    verify_ul_norms,
)
from stripembed.noncompact import build_translates, certify_isomorphism_bound, random_net, refute_net
from stripembed.ptrig import pi_p_closed_form, pi_p_quadrature, sin_cos_p, sin_p
from stripembed.quad import Rectangle

PI = math.pi
STRIP = StripDomain(1, ((0.0, PI),))
UNIT = Rectangle(((0.0, 1.0),))

# per-case eigenfunction bounds; the p=1.5 one is frozen from a measured 9.7e-5
EIGENFUNCTION_BOUNDS = {
    "p=2 (0,1) 255": 1e-3,
    "p=2 (0,1)^2 63x63": 5e-3,
    "p=1.5 (0,2) 255": 5e-4,
}


def _report(number, title, ok, detail, elapsed, budget):
    ok = bool(ok) and elapsed < budget
    line = (f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}  {title}: {detail} "
            f"[{elapsed:.2f}s / budget {budget:g}s]")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_pi_p_identity():
    t0 = time.perf_counter()
    diffs = {p: abs(pi_p_quadrature(p) - 2 * PI / (p * math.sin(PI / p)))
             for p in (1.1, 1.5, 2.0, 3.0, 10.0, 100.0)}
    worst = max(diffs.values())
    _report(1, "pi_p quadrature vs closed form", worst <= 1e-10,
            f"max diff {worst:.2e} (tol 1e-10)", time.perf_counter() - t0, 1.0)


def test_criterion_02_ptrig_identities():
    t0 = time.perf_counter()
    worst = 0.0
    for p in (1.1, 1.5, 2.0, 3.0, 10.0):
        P = pi_p_closed_form(p)
        x = np.linspace(-2 * P, 2 * P, 1000)
        s, c = sin_cos_p(p, x)
        worst = max(
            worst,
            np.max(np.abs(sin_p(p, x + 2 * P) - s)),
            np.max(np.abs(sin_p(p, -x) + s)),
            np.max(np.abs(sin_p(p, P - x) - s)),
            np.max(np.abs(np.abs(s) ** p + np.abs(c) ** p - 1.0)),
        )
    _report(2, "periodicity/oddness/reflection/Pythagorean", worst <= 1e-9,
            f"max defect {worst:.2e} over 5 exponents x 1000 points (tol 1e-9)",
            time.perf_counter() - t0, 5.0)


def test_criterion_03_headline_constant():
    t0 = time.perf_counter()
    norm = embedding_norm(2, STRIP).norm
    diff = abs(norm - 1 / math.sqrt(2))
    _report(3, "embedding norm p=2, k=1, (0,pi)", diff <= 1e-14,
            f"norm {norm:.17g}, |norm - 1/sqrt2| = {diff:.1e} (tol 1e-14)",
            time.perf_counter() - t0, 1.0)


def test_criterion_04_ul_norms():
    t0 = time.perf_counter()
    worst = 0.0
    for p in (1.5, 2.0, 3.0):
        for l in (PI, 4 * PI):
            rep = verify_ul_norms(p, STRIP, l)
            worst = max(worst, rep.func_diff / rep.closed_func, rep.grad_diff / rep.closed_grad)
    _report(4, "quadrature vs closed-form u_l norms", worst <= 1e-7,
            f"max relative diff {worst:.2e} (tol 1e-7)", time.perf_counter() - t0, 10.0)


def test_criterion_05_gap_law():
    t0 = time.perf_counter()
    worst_rel, worst_ratio = 0.0, 0.0
    for p in (1.5, 2.0, 3.0):
        lam = lambda_closed_form(p, STRIP)
        for l in (PI, 4 * PI):
            g1 = rayleigh(strip_trial(p, STRIP, l), STRIP.truncated(l), p).quotient - lam
            g2 = rayleigh(strip_trial(p, STRIP, 2 * l), STRIP.truncated(2 * l), p).quotient - lam
            worst_rel = max(worst_rel, abs(g1 / strip_gap(p, STRIP, l) - 1))
            worst_ratio = max(worst_ratio, abs((g2 / g1) / 2 ** -p - 1))
    _report(5, "Rayleigh gap law", worst_rel <= 1e-6 and worst_ratio <= 0.05,
            f"max relative gap error {worst_rel:.2e} (tol 1e-6); doubling ratio off 2^-p by "
            f"{100 * worst_ratio:.3f}% (tol 5%)", time.perf_counter() - t0, 10.0)


def test_criterion_06_eigensolver():
    t0 = time.perf_counter()
    cases = []

    def check(label, ok, text):
        cases.append((ok, f"{label}: {text} {'ok' if ok else 'MISS'}"))

    r = first_eigenpair(2, UNIT, [255], tol=1e-10)
    err = abs(r.lambda_h - PI ** 2)
    check("p=2 (0,1) 255", err <= 2e-4, f"|err| {err:.3e} (tol 2e-4)")
    ef = eigenfunction_error(r, 2)
    check("  eigenfunction", ef <= EIGENFUNCTION_BOUNDS["p=2 (0,1) 255"], f"{ef:.1e}")

    r = first_eigenpair(2, Rectangle(((0, 1), (0, 1))), [63, 63], tol=1e-10)
    err = abs(r.lambda_h - 2 * PI ** 2)
    check("p=2 (0,1)^2 63x63", err <= 3e-3, f"|err| {err:.3e} (tol 3e-3, rel {err / (2 * PI ** 2):.1e})")
    ef = eigenfunction_error(r, 2)
    check("  eigenfunction", ef <= EIGENFUNCTION_BOUNDS["p=2 (0,1)^2 63x63"], f"{ef:.1e}")

    for p in (1.5, 3.0):
        r = first_eigenpair(p, UNIT, [511], tol=1e-10)
        lam = lambda_closed_form(p, StripDomain(0, UNIT.intervals))
        rel = abs(r.lambda_h - lam) / lam
        check(f"p={p:g} (0,1) 511", rel <= 0.01, f"rel {rel:.1e} (tol 1e-2)")

    r = first_eigenpair(1.5, Rectangle(((0, 2),)), [255], tol=1e-10)
    ef = eigenfunction_error(r, 1.5)
    check("p=1.5 (0,2) 255 eigenfunction", ef <= EIGENFUNCTION_BOUNDS["p=1.5 (0,2) 255"], f"{ef:.1e}")

    detail = "; ".join(text for _, text in cases)
    _report(6, "eigensolver vs closed-form lambda", all(ok for ok, _ in cases), detail,
            time.perf_counter() - t0, 120.0)


def test_criterion_07_gradient():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for p in (1.5, 2.0, 3.0):
        u = GridFunction(Rectangle(((0, 1), (0, 1))), (15, 15), rng.uniform(0.1, 1.0, 225))
        _, grad = discrete_rayleigh_gradient(u, p)
        flat = u.values.ravel()
        for idx in rng.choice(225, size=20, replace=False):
            # 1e-6 leaves ~1e-8 cancellation noise, too much for gradients near 1e-3
            h = 1e-5 * max(1.0, abs(flat[idx]))
            e = np.zeros(225)
            e[idx] = h
            fd = (discrete_rayleigh(u.with_values(flat + e), p)
                  - discrete_rayleigh(u.with_values(flat - e), p)) / (2 * h)
            worst = max(worst, abs(fd - grad.ravel()[idx]) / max(abs(fd), 1e-300))
    _report(7, "analytic vs finite-difference gradient", worst <= 1e-6,
            f"max relative diff {worst:.2e} at 60 random nodes (tol 1e-6)",
            time.perf_counter() - t0, 5.0)


def test_criterion_08_operator_certificate():
    t0 = time.perf_counter()
    devs, bounds = [], []
    for m in (2, 4, 8):
        cert = certify_isomorphism_bound(build_translates(2, STRIP, 16 * PI, m), trials=100, tol=1e-6)
        devs.append(max(cert.b_isometry_dev, cert.a_bound_dev, cert.aib_identity_dev))
        bounds.append(cert.lower_bound)
    doubled = certify_isomorphism_bound(build_translates(2, STRIP, 32 * PI, 2), trials=100, tol=1e-6)
    norm = embedding_norm(2, STRIP).norm
    shrink = (norm - min(bounds)) / (norm - doubled.lower_bound)
    ok = max(devs) <= 1e-6 and min(bounds) >= 0.70 and shrink >= 3.5
    _report(8, "AIB = id certificate (m = 2, 4, 8; l = 16 pi)", ok,
            f"max deviation {max(devs):.1e} (tol 1e-6); lower bound {min(bounds):.6f} (>= 0.70, "
            f"norm {norm:.6f}); gap shrink x{shrink:.3f} on doubling l (>= 3.5)",
            time.perf_counter() - t0, 30.0)


def test_criterion_09_net_refutation():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    min_margin, min_verified, refuted, centres = math.inf, math.inf, 0, 0
    for _ in range(20):
        net = random_net(STRIP, rng, int(rng.integers(1, 9)), 200.0, 0.6)
        ref = refute_net(2, STRIP, 16 * PI, net, 0.65, verify=True)
        min_margin = min(min_margin, *ref.margins)
        min_verified = min(min_verified, *ref.verified_margins)
        refuted += 1
        centres += len(net.centers)
    ok = refuted == 20 and min_margin > 0.6 and min_verified > 0.6
    _report(9, "net refutation (20 random nets, r = 0.6, r~ = 0.65)", ok,
            f"{refuted}/20 refuted, {centres} centres; min margin {min_margin:.4f}, "
            f"re-verified at 2x resolution {min_verified:.4f} (> 0.6)",
            time.perf_counter() - t0, 60.0)


def _random_trial(rng):
    terms = []
    for _ in range(int(rng.integers(1, 4))):
        x0 = rng.uniform(-5, 4)
        y0 = rng.uniform(0, PI - 0.3)
        pw = rng.uniform(1, 4)
        terms.append((rng.uniform(0.2, 3.0), [BumpFactor(x0, x0 + rng.uniform(0.2, 5), pw),
                                              BumpFactor(y0, rng.uniform(y0 + 0.3, PI), pw)]))
    return SeparableFunction(terms)


def test_criterion_10_property_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    violations = {"scale": 0, "additivity": 0, "scaling": 0, "monotone": 0, "lower_bound": 0}
    for _ in range(20):
        p = rng.choice([1.5, 2.0, 3.0])
        c = rng.uniform(0.01, 10)
        u = strip_trial(p, STRIP, rng.uniform(1, 5))
        box = u.support_box
        if abs(rayleigh(u.scaled(c), box, p, 16).quotient / rayleigh(u, box, p, 16).quotient - 1) > 1e-12:
            violations["scale"] += 1
    for _ in range(50):
        p = rng.uniform(1.1, 6)
        w1, w2 = rng.uniform(0.1, 10, 2)
        lam = lambda *ws: lambda_closed_form(p, StripDomain(1, tuple((0.0, w) for w in ws)))  # noqa: E731
        if abs(lam(w1, w2) - lam(w1) - lam(w2)) > 1e-14 * lam(w1, w2):
            violations["additivity"] += 1
        c = rng.uniform(0.1, 10)
        if abs(lam(c * w1, c * w2) - c ** -p * lam(w1, w2)) > 1e-12 * lam(c * w1, c * w2):
            violations["scaling"] += 1
        d_small = StripDomain(1, ((0, w1), (0, w2)))
        d_large = StripDomain(1, ((0, w1 + rng.uniform(0.01, 2)), (0, w2)))
        if not embedding_norm(p, d_large).norm > embedding_norm(p, d_small).norm:
            violations["monotone"] += 1
    for _ in range(50):
        p = rng.choice([1.5, 2.0, 3.0])
        u = _random_trial(rng)
        if rayleigh(u, u.bounding_box, p, 16).quotient < lambda_closed_form(p, STRIP) - 1e-6:
            violations["lower_bound"] += 1
    total = sum(violations.values())
    _report(10, "property suite", total == 0,
            ", ".join(f"{k} {v}" for k, v in violations.items()) + " violations",
            time.perf_counter() - t0, 60.0)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
