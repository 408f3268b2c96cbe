from fractions import Fraction

import pytest

from hkmatrix.series import TruncatedSeries


def S(*coeffs):
    """Shorthand: series whose order is len(coeffs) - 1."""
    return TruncatedSeries([Fraction(c) for c in coeffs])


@pytest.fixture
def sympy_coeffs():
    """Independent oracle: Taylor coefficients of a sympy expression in x."""
    sp = pytest.importorskip("sympy")
    x = sp.Symbol("x")

    def coeffs(build, order):
        expr = build(sp, x)
        ser = sp.series(expr, x, 0, order + 1).removeO()
        return [Fraction(str(sp.nsimplify(ser.coeff(x, k)))) for k in range(order + 1)]

    return coeffs


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
