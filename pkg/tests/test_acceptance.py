"""Exit criteria: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary lines are
printed at the end of the session (see ``conftest.py``).
"""

import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction as Q

import pytest

from hkmatrix import bialgebra as ba
from hkmatrix import matrix_ops as mo
from hkmatrix.calculus import BoundInput, bound_rhs_ko3, bound_rhs_ko4, eval_power_sum, eval_word, required_order
from hkmatrix.matrix_ops import WeightSeq
from hkmatrix.pipeline import omega_matrix, prepare, prepare_from_F
from hkmatrix.series import (
    ModelSpec,
    TruncatedSeries,
    catalog,
    derivatives_at_zero,
    f_from_phi,
    phi_from_f,
)

RESULTS: list[str] = []

BINOMIAL_ALPHAS = [Q(1), Q(-1), Q(1, 2), Q(3)]
MODELS = [("catalan", None), ("bell", None), ("expsin", None)] + [("binomial", a) for a in BINOMIAL_ALPHAS]


class criterion:
    """Time a block, assert its time limit, record a PASS/FAIL line."""

    def __init__(self, label: str, limit: float):
        self.label, self.limit = label, limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        ok = exc_type is None and elapsed <= self.limit
        status = "PASS" if ok else "FAIL"
        RESULTS.append(f"{status}  {self.label}  ({elapsed:.2f} s, limit {self.limit:g} s)")
        print(RESULTS[-1])
        if exc_type is None:
            assert elapsed <= self.limit, f"{self.label}: {elapsed:.2f} s > {self.limit} s"
        return False


def label(name, alpha):
    return name if alpha is None else f"{name}(alpha={alpha})"


def test_ac1_generating_function_identity():
    with criterion("AC1 base-model omega_n, matrix expansion = n! [x^n] Phi, n = 0..9", 60):
        mo.clear_cache()
        _, f = catalog("base", order=10)
        phi = phi_from_f(f, 10)
        base = WeightSeq.base()
        matrix = [mo.omega_n(n, base) for n in range(10)]
        series = [derivatives_at_zero(phi, n) for n in range(10)]
        assert matrix == series
        assert matrix[:5] == [1, 0, Q(1, 2), Q(2, 3), Q(3, 2)]


def _expected_f(name, alpha, k):
    """Closed forms of the f column, independent of the series code."""
    if name == "catalan":
        return Q(math.factorial(2 * k + 1), math.factorial(k) ** 2)
    if name == "bell":
        return Q(k + 1, math.factorial(k))
    if name == "binomial":
        return alpha * (-1) ** k * (k + 1)
    if name == "expsin":
        if k % 2:
            return Q(0)
        m = k // 2
        return Q((-1) ** m * (2 * m + 1), math.factorial(2 * m))
    raise KeyError(name)


def test_ac2_inverse_direction():
    with criterion("AC2 inverse map reproduces the f column to order 12", 1):
        for name, alpha in MODELS:
            F, _ = catalog(name, alpha, order=14)
            f = f_from_phi(F)
            assert f.order == 12
            expected = [_expected_f(name, alpha, k) for k in range(13)]
            assert list(f.coeffs) == expected, label(name, alpha)


def _forward_models():
    for name, alpha in MODELS:
        F, _ = catalog(name, alpha, order=12)
        yield label(name, alpha), F, "normalize"
    # non-unit constant terms, one per preprocessing mode
    bell, _ = catalog("bell", order=12)
    yield "2*bell", 2 * bell, "normalize"
    cat, _ = catalog("catalan", order=12)
    yield "catalan+4", cat + 4, "shift"


def test_ac3_forward_direction():
    with criterion("AC3 matrix omega_n with weights from f = n! [x^n] F, n <= 8", 120):
        seen = {}
        for name, F, mode in _forward_models():
            model = prepare_from_F(F, mode)
            got = omega_matrix(model, 8)
            assert got == [derivatives_at_zero(F, n) for n in range(9)], name
            seen[name] = got
        assert seen["bell"] == [1, 1, 2, 5, 15, 52, 203, 877, 4140]
        assert seen["catalan"] == [math.factorial(n) * math.comb(2 * n, n) // (n + 1) for n in range(9)]


def _random_letter(rng):
    r = rng.random()
    if r < 0.4:
        return "A"
    if r < 0.8:
        return "B"
    return ("S", rng.randint(0, 3), rng.randint(1, 4))


def test_ac4_tensor_correspondence():
    with criterion("AC4 T(V) operators commute with the matrix correspondence (200 words)", 30):
        rng = random.Random(2024)
        for _ in range(200):
            m = tuple((rng.randint(0, 3), rng.randint(1, 5)) for _ in range(rng.randint(0, 4)))
            word = [_random_letter(rng) for _ in range(rng.randint(0, 6))]
            via_tensor = ba.tensor_to_weighted_sum(ba.apply_tensor_word(word, ba.from_matrix(m)))
            via_matrix = mo.expand_word(word, {m: 1})
            assert via_tensor == via_matrix, (m, mo.format_word(word))


def test_ac5_operator_calculus():
    with criterion("AC5 calculus route = matrix route per word (200 words/model); 2^n sum = omega_n, n <= 6", 60):
        rng = random.Random(99)
        specs = [ModelSpec("base")] + [ModelSpec("named", name=n, alpha=a) for n, a in MODELS]
        for spec in specs:
            model = prepare(spec, required_order(6))
            w = model.weights
            for _ in range(200):
                word = [rng.choice("AB") for _ in range(rng.randint(0, 6))]
                assert eval_word(word, model.phi) == mo.upsilon_sum(mo.expand_word(word), w), (spec, word)
            omega = omega_matrix(model, 6)
            for n in range(7):
                assert eval_power_sum(n, model.phi) == omega[n]


def test_ac6_axiom_suite():
    with criterion("AC6 bialgebra/seminorm laws, 500 trials each; kernel law on constructed elements", 10):
        report = ba.axiom_suite(500, seed=7)
        assert ba.report_ok(report), {k: v for k, v in report.items() if v["failures"]}
        assert all(v["trials"] == 500 for v in report.values())
        w = WeightSeq([Q(0), Q(2), Q(0), Q(-1)])
        kernel = {((0, 1),): Q(3), ((1, 2), (2, 5)): Q(-1), ((3, 1), (1, ba.INF)): Q(1, 2)}
        assert ba.seminorm_T(kernel, w) == 0
        for key, c in [(((1, 2),), Q(1)), (((3, 3), (1, 1)), Q(-2)), ((), Q(5))]:
            v = dict(kernel)
            v[key] = c
            assert not ba.in_kernel(key, w)
            assert ba.seminorm_T(v, w) > 0


def test_ac7_shift_correction():
    with criterion("AC7 F = 3 + x^2 with shift: omega_0 = 3, omega_n = n! [x^n] F", 5):
        F = TruncatedSeries([3, 0, 1], 12)
        model = prepare_from_F(F, "shift")
        got = omega_matrix(model, 8)
        assert got[0] == 3
        assert got == [derivatives_at_zero(F, n) for n in range(9)] == [3, 0, 2, 0, 0, 0, 0, 0, 0]


# omega_0..omega_10 of the base model, from an independent sympy expansion
BASE_OMEGA = [Q(1), Q(0), Q(1, 2), Q(2, 3), Q(3, 2), Q(62, 15), Q(115, 9), Q(1549, 35), Q(15323, 90),
              Q(677704, 945), Q(1145239, 350)]


def test_ac8_bound_calculators():
    with criterion("AC8 bound right-hand sides and the (n-1)!/(2n-1)! ratio, n <= 5", 5):
        model = prepare(ModelSpec("base"), 11)
        computed = [derivatives_at_zero(model.phi, j) for j in range(11)]
        assert computed == BASE_OMEGA
        for n in range(1, 6):
            for d, C in [(1, Q(1)), (2, Q(1)), (3, Q(1, 2)), (5, Q(7, 3))]:
                inp = BoundInput(d, C, n)
                hand3 = d**n * C ** (2 * n) * BASE_OMEGA[2 * n]
                assert bound_rhs_ko3(inp, computed) == hand3
                hand4 = hand3 * math.factorial(n - 1) / Q(math.factorial(2 * n - 1))
                assert bound_rhs_ko4(inp, computed) == hand4
                assert bound_rhs_ko4(inp, computed) / bound_rhs_ko3(inp, computed) == Q(
                    math.factorial(n - 1), math.factorial(2 * n - 1)
                )


def test_ac9_determinism():
    with criterion("AC9 repeated 'omega --method all' runs byte-identical; parallel = serial", 60):
        outputs = []
        for model in ("base", "bell"):
            cmd = [sys.executable, "-m", "hkmatrix", "omega", "--model", model, "--n", "7", "--method", "all"]
            runs = [subprocess.run(cmd, capture_output=True) for _ in range(2)]
            assert all(r.returncode == 0 for r in runs)
            assert runs[0].stdout == runs[1].stdout
            outputs.append(runs[0].stdout)
        par = [subprocess.run(cmd + ["--workers", "3"], capture_output=True)]
        assert par[0].returncode == 0 and par[0].stdout == outputs[-1]
        serial = [dict(x) for x in mo.power_levels(8)]
        parallel = [dict(x) for x in mo.power_levels(8, workers=4)]
        assert serial == parallel
        w = WeightSeq.base()
        assert [mo.upsilon_sum(x, w) for x in serial] == [mo.upsilon_sum(x, w) for x in parallel]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
