"""End-to-end acceptance criteria.

Each test covers one numbered criterion, enforces its stated tolerance and
wall-clock budget, and prints a single PASS/FAIL line (visible with -s or in
captured output on failure).
"""

import json
import math
import random
import time
import warnings
from fractions import Fraction

import pytest
from click.testing import CliRunner

from ellzero import elliptic
from ellzero.elliptic import DegenerateParameterWarning
from ellzero.cli import main as cli_main
from ellzero.picard_fuchs import (
    pf_residual,
    wronskian,
    wronskian_fd,
    wronskian_limit_zero,
)
from ellzero.polyalg import Poly
from ellzero.reduction import (
    MU_RATIONAL_SPECIAL,
    ReductionCase,
    ReductionInput,
    identity_residual,
    interpolate_zeros,
    psi_bound,
    psi_bound_rational,
    reduce,
)
from ellzero.triangle import (
    PerturbationSpec,
    generator_values_closed,
    generator_values_quadrature,
    ij_quadrature,
    level_params,
    melnikov_decompose,
    melnikov_eval,
    melnikov_eval_quadrature,
    melnikov_zero_report,
)
from ellzero.zero_count import count_zeros


def _report(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} — {detail}"
    print(line)
    assert ok, line


def _elapsed_ok(start: float, budget: float) -> tuple[float, bool]:
    dt = time.monotonic() - start
    return dt, dt < budget


def test_criterion_01_elliptic_identities():
    start = time.monotonic()
    worst = 0.0
    grid = [s * t / 10 for t in range(1, 10) for s in (1, -1)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateParameterWarning)
        for k in grid:
            K = elliptic.complete_k(k)
            E = elliptic.complete_e(k)
            kp = math.sqrt(1 - k * k)
            Kp = elliptic.complete_k(kp)
            Ep = elliptic.complete_e(kp)
            legendre = E * Kp + Ep * K - K * Kp - math.pi / 2
            carlson_k = K - elliptic.carlson_rf(0.0, 1 - k * k, 1.0)
            carlson_e = E - (
                K - (k * k / 3.0) * elliptic.carlson_rd(0.0, 1 - k * k, 1.0)
            )
            pi_at_zero = elliptic.complete_pi(0.0, k) - K
            pi_degenerate = elliptic.complete_pi(k * k, k) - E / (1 - k * k)
            worst = max(
                worst,
                abs(legendre),
                abs(carlson_k),
                abs(carlson_e),
                abs(pi_at_zero),
                abs(pi_degenerate),
            )
    dt, in_time = _elapsed_ok(start, 1.0)
    _report(1, worst <= 1e-11 and in_time, f"max identity residual {worst:.2e} in {dt:.2f}s")


PF_PROFILES = [
    (MU_RATIONAL_SPECIAL, [-0.8, -0.5, -0.2, 0.2, 0.5, 0.8]),
    (Poly([Fraction(1, 4), Fraction(1, 4)]), [-0.8, -0.5, -0.2, 0.2, 0.5, 0.8]),
    # The constant profile satisfies mu = k^2 at k = +-0.5, a singular point
    # of the ODE systems, so its 6-point grid uses +-0.45 instead.
    (Fraction(1, 4), [-0.8, -0.45, -0.2, 0.2, 0.45, 0.8]),
]


def test_criterion_02_ode_residuals():
    start = time.monotonic()
    worst1 = worst2 = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateParameterWarning)
        for mu, grid in PF_PROFILES:
            for k in grid:
                r1, _ = pf_residual(mu, k, step=1e-4)
                _, r2 = pf_residual(mu, k, step=1e-3)
                worst1, worst2 = max(worst1, r1), max(worst2, r2)
    dt, in_time = _elapsed_ok(start, 5.0)
    _report(
        2,
        worst1 <= 1e-6 and worst2 <= 1e-3 and in_time,
        f"first-order {worst1:.2e}, second-order {worst2:.2e} in {dt:.2f}s",
    )


def test_criterion_03_wronskian():
    start = time.monotonic()
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateParameterWarning)
        for mu, grid in PF_PROFILES:
            for k in grid:
                w = wronskian(mu, k)
                w_fd = wronskian_fd(mu, k)
                worst = max(worst, abs(w - w_fd) / max(1.0, abs(w)))
        mu = Poly([Fraction(1, 4), Fraction(1, 4)])
        limit = wronskian_limit_zero(mu)
        near = wronskian(mu, 0.01)
        limit_err = abs(near - limit) / abs(limit)
    dt, in_time = _elapsed_ok(start, 5.0)
    _report(
        3,
        worst <= 1e-4 and limit_err <= 0.01 and in_time,
        f"max FD mismatch {worst:.2e}, small-k limit error {limit_err:.2e} in {dt:.2f}s",
    )


def _random_poly(rng, deg):
    coeffs = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(deg + 1)]
    if all(c == 0 for c in coeffs):
        coeffs[-1] = Fraction(1)
    return Poly(coeffs)


def test_criterion_04_reduction_identity():
    start = time.monotonic()
    rng = random.Random(2024)
    # Points avoid the mu = k^2 crossings of all three profiles below.
    points = [-0.35, -0.15, 0.15, 0.35, 0.75]
    cases = [
        (ReductionCase.POLY_S_GE_2, Poly([Fraction(1, 4), 0, Fraction(1, 8)])),
        (ReductionCase.CONSTANT_MU, Fraction(1, 4)),
        (ReductionCase.RATIONAL_SPECIAL, MU_RATIONAL_SPECIAL),
    ]
    worst = 0.0
    checked = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateParameterWarning)
        for case, mu in cases:
            for _ in range(10):
                inp = ReductionInput(
                    p=_random_poly(rng, rng.randint(0, 3)),
                    q=_random_poly(rng, rng.randint(0, 3)),
                    r=_random_poly(rng, rng.randint(0, 3)),
                    mu=mu,
                    case=case,
                )
                form = reduce(inp)  # raises VerificationError on a cap breach
                assert form.M1.degree() <= form.degree_cap_m
                for k in points:
                    if abs(float(inp.r.eval(k))) < 1e-6:
                        continue
                    worst = max(worst, identity_residual(inp, k))
                    checked += 1
    dt, in_time = _elapsed_ok(start, 30.0)
    _report(
        4,
        worst <= 1e-5 and in_time,
        f"max identity residual {worst:.2e} over {checked} points in {dt:.2f}s",
    )


def test_criterion_05_bound_tables():
    start = time.monotonic()
    mismatches = 0
    for m in range(7):
        for n in range(7):
            mx = max(m, n)
            for l in range(7):
                for s in range(7):
                    if s >= 2:
                        want = (
                            2 * mx + 3 * l + 6 * s + 7
                            if l <= mx + s
                            else 5 * l + 4 * s + 7
                        )
                    elif s == 1:
                        want = 2 * mx + 3 * l + 15 if l <= mx + 1 else 5 * l + 13
                    else:
                        want = 2 * mx + 3 * l + 11 if l <= mx + 2 else mx + 4 * l + 9
                    if psi_bound(m, n, l, s) != want:
                        mismatches += 1
                want_rat = 2 * mx + 3 * l + 11 if l <= mx + 2 else 5 * l + 7
                if psi_bound_rational(m, n, l) != want_rat:
                    mismatches += 1
    spot_ok = psi_bound(2, 2, 2, 2) == 29 and psi_bound_rational(2, 2, 2) == 21
    dt, _ = _elapsed_ok(start, 10.0)
    _report(5, mismatches == 0 and spot_ok, f"{mismatches} table mismatches in {dt:.2f}s")


def test_criterion_06_zero_counts_special_mu():
    start = time.monotonic()
    rng = random.Random(99)
    violations = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateParameterWarning)
        for _ in range(100):
            p = _random_poly(rng, rng.randint(0, 3))
            q = _random_poly(rng, rng.randint(0, 3))
            r = _random_poly(rng, rng.randint(0, 3))
            report = count_zeros(p, q, r, MU_RATIONAL_SPECIAL)
            bound = psi_bound_rational(p.degree(), q.degree(), max(r.degree(), 0))
            if report.count > bound:
                violations += 1
        # Interpolated combinations vanish at m + n + l + 2 prescribed moduli.
        interp_ok = True
        for m, n, l in [(0, 0, 0), (1, 0, 0), (0, 1, 1)]:
            npts = m + n + l + 2
            points = [0.08 + 0.82 * (i + 0.7) / npts for i in range(npts)]
            p, q, r = interpolate_zeros(points, m, n, l, MU_RATIONAL_SPECIAL)
            report = count_zeros(p, q, r, MU_RATIONAL_SPECIAL, interval=(0.0, 0.95))
            total = report.count + len(report.touch_points)
            if total < npts:
                interp_ok = False
    dt, in_time = _elapsed_ok(start, 120.0)
    _report(
        6,
        violations == 0 and interp_ok and in_time,
        f"{violations} bound violations; interpolation zeros recovered; {dt:.1f}s",
    )


def test_criterion_07_generators():
    start = time.monotonic()
    worst = 0.0
    worst_diff = 0.0
    for h in (0.002, 0.005, 0.01, 0.014):
        curve = level_params(h)
        closed = generator_values_closed(curve)
        quads = generator_values_quadrature(curve)
        for name in ("I00", "I20", "I30", "J00", "J20", "J30"):
            a, b = getattr(closed, name), getattr(quads, name)
            worst = max(worst, abs(a - b) / max(1.0, abs(b)))
        worst_diff = max(worst_diff, abs(closed.I00 - closed.J00 - curve.u / 2))
    dt, in_time = _elapsed_ok(start, 10.0)
    _report(
        7,
        worst <= 1e-8 and worst_diff <= 1e-12 and in_time,
        f"closed-vs-quadrature {worst:.2e}, I00-J00 offset {worst_diff:.2e} in {dt:.2f}s",
    )


def _random_spec(rng, n):
    def side():
        entries = {
            (i, j): Fraction(rng.randint(-3, 3), rng.randint(1, 4))
            for i in range(n + 1)
            for j in range(n + 1 - i)
            if rng.random() < 0.5
        }
        return entries

    return PerturbationSpec(
        n=n, a_plus=side(), a_minus=side(), b_plus=side(), b_minus=side()
    )


def test_criterion_08_melnikov_eval():
    start = time.monotonic()
    rng = random.Random(7)
    h_values = [0.0015, 0.004, 0.007, 0.011, 0.0145]
    worst = 0.0
    for n in (2, 3, 4):
        for _ in range(10):
            spec = _random_spec(rng, n)
            if spec.is_zero():
                continue
            dec = melnikov_decompose(spec)
            for h in h_values:
                fast = melnikov_eval(dec, h)
                slow = melnikov_eval_quadrature(spec, h)
                err = abs(fast - slow)
                if err > 1e-9:
                    worst = max(worst, err / max(1e-30, abs(slow)))
    # Independent consistency check of the three-index contiguity recursion
    # h (i+1) I_{i,j} = (i+3) I_{i+2,j+1} - (i+4) I_{i+3,j+1} - (i+3) I_{i+2,j+2}.
    h = 0.005
    curve = level_params(h)
    rec_worst = 0.0
    for i, j in [(0, 0), (1, 0), (0, 1)]:
        lhs = h * (i + 1) * ij_quadrature(curve, i, j, 1)
        rhs = (
            (i + 3) * ij_quadrature(curve, i + 2, j + 1, 1)
            - (i + 4) * ij_quadrature(curve, i + 3, j + 1, 1)
            - (i + 3) * ij_quadrature(curve, i + 2, j + 2, 1)
        )
        rec_worst = max(rec_worst, abs(lhs - rhs))
    dt, in_time = _elapsed_ok(start, 180.0)
    _report(
        8,
        worst <= 1e-6 and rec_worst <= 1e-8 and in_time,
        f"eval mismatch {worst:.2e}, recursion residual {rec_worst:.2e} in {dt:.1f}s",
    )


def test_criterion_09_melnikov_zero_bounds():
    start = time.monotonic()
    rng = random.Random(31)
    violations = 0
    reports = 0
    while reports < 50:
        spec = _random_spec(rng, rng.randint(0, 4))
        if spec.is_zero():
            continue
        report = melnikov_zero_report(spec)
        reports += 1
        if report.count > report.bound:
            violations += 1
    dt, in_time = _elapsed_ok(start, 180.0)
    _report(9, violations == 0 and in_time, f"{violations}/{reports} violations in {dt:.1f}s")


def test_criterion_10_cli_determinism(tmp_path):
    runner = CliRunner()
    outputs = []
    for _ in range(2):
        chunks = []
        for args in (
            ["bound", "--psi", "2", "2", "2", "2"],
            ["elliptic-eval", "--k", "0", "--kind", "K"],
            ["melnikov-zeros", "--random-n", "3", "--seed", "42"],
            ["melnikov-zeros", "--random-n", "2", "--seed", "0"],
        ):
            result = runner.invoke(cli_main, args)
            assert result.exit_code == 0, (args, result.output)
            chunks.append(result.stdout_bytes)
        outputs.append(b"".join(chunks))
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"n": 2, "a_plus": [[1, 0, "1"], [0, 1, "-1/2"]]}))
    evals = [
        runner.invoke(
            cli_main, ["melnikov-eval", "--spec", str(spec), "--grid", "5"]
        ).stdout_bytes
        for _ in range(2)
    ]
    ok = outputs[0] == outputs[1] and evals[0] == evals[1]
    exact = (
        runner.invoke(cli_main, ["bound", "--psi", "2", "2", "2", "2"]).stdout.splitlines()[0]
        == '{"psi": 29}'
    )
    _report(10, ok and exact, "byte-identical reruns with fixed seeds")
