"""Truncated formal power series over exact rationals.

A :class:`TruncatedSeries` stores ``c_0 .. c_N`` together with the truncation
order ``N``.  Every operation states its output order; binary operations insist
on equal orders unless the caller truncates first.

The generating-function maps live here as well:

* :func:`phi_from_f` builds ``Phi = exp(int_0^x dt/t int_0^t f(s) ds)``,
* :func:`f_from_phi` recovers ``f`` from ``Phi`` (two independent formulas,
  cross-checked on every call),
* :func:`normalize_F` / :func:`shift_F` bring an arbitrary generating function
  into the ``Phi(0) = 1`` form,
* :func:`catalog` returns the named example models.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .rational import as_rational, format_rational, parse_rational

__all__ = [
    "SeriesError",
    "TruncatedSeries",
    "series_add",
    "series_sub",
    "series_mul",
    "series_scale",
    "series_derive",
    "series_integrate",
    "series_divide_by_x",
    "series_multiply_by_x",
    "series_inverse",
    "series_exp",
    "series_log",
    "series_pow_alpha",
    "series_sqrt",
    "series_sin",
    "series_cos",
    "series_exp_x",
    "phi_from_f",
    "f_from_phi",
    "normalize_F",
    "shift_F",
    "derivatives_at_zero",
    "egf_to_series",
    "series_to_egf",
    "CATALOG",
    "catalog",
    "ModelSpec",
    "read_series_file",
    "write_series_file",
]


class SeriesError(ValueError):
    """Precondition violation in series arithmetic."""


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = tuple(as_rational(c) for c in coeffs)
        if order is None:
            if not cs:
                raise SeriesError("empty coefficient list needs an explicit order")
            order = len(cs) - 1
        if order < 0:
            raise SeriesError(f"negative order {order}")
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        else:
            cs = cs + (Fraction(0),) * (order + 1 - len(cs))
        object.__setattr__(self, "coeffs", cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((), order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls((1,), order)

    @classmethod
    def x(cls, order: int) -> "TruncatedSeries":
        return cls((0, 1), order)

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise SeriesError(f"cannot truncate order {self.order} up to {order}")
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_add(self, other)
        return series_add(self, TruncatedSeries((other,), self.order))

    __radd__ = __add__

    def __neg__(self):
        return series_scale(self, -1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return series_scale(self, other)

    __rmul__ = __mul__

    def __str__(self) -> str:
        terms = []
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if n == 0 else ("x" if n == 1 else f"x^{n}")
            if n == 0:
                terms.append(format_rational(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"({format_rational(c)})*{mono}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(x^{self.order + 1})"


def _check_same_order(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.order != b.order:
        raise SeriesError(f"order mismatch: {a.order} vs {b.order}")


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_same_order(a, b)
    return TruncatedSeries((x + y for x, y in zip(a.coeffs, b.coeffs)), a.order)


def series_sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_same_order(a, b)
    return TruncatedSeries((x - y for x, y in zip(a.coeffs, b.coeffs)), a.order)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product, same order as the inputs."""
    _check_same_order(a, b)
    N = a.order
    ac, bc = a.coeffs, b.coeffs
    out = []
    for n in range(N + 1):
        out.append(sum((ac[i] * bc[n - i] for i in range(n + 1)), Fraction(0)))
    return TruncatedSeries(out, N)


def series_scale(a: TruncatedSeries, c) -> TruncatedSeries:
    c = as_rational(c)
    return TruncatedSeries((c * x for x in a.coeffs), a.order)


def series_derive(a: TruncatedSeries) -> TruncatedSeries:
    """Termwise derivative; output order ``N - 1``."""
    if a.order == 0:
        raise SeriesError("derivative of an order-0 series has no known coefficients")
    return TruncatedSeries((n * a.coeffs[n] for n in range(1, a.order + 1)), a.order - 1)


def series_integrate(a: TruncatedSeries) -> TruncatedSeries:
    """Antiderivative vanishing at 0; output order ``N + 1``."""
    return TruncatedSeries(
        [Fraction(0)] + [c / (n + 1) for n, c in enumerate(a.coeffs)], a.order + 1
    )


def series_divide_by_x(a: TruncatedSeries) -> TruncatedSeries:
    """Exact division by ``x``; needs ``c_0 = 0``.  Output order ``N - 1``."""
    if a.coeffs[0] != 0:
        raise SeriesError("divide_by_x requires a zero constant term")
    if a.order == 0:
        raise SeriesError("divide_by_x of an order-0 series has no known coefficients")
    return TruncatedSeries(a.coeffs[1:], a.order - 1)


def series_multiply_by_x(a: TruncatedSeries) -> TruncatedSeries:
    """Shift up by one power; output order ``N + 1``."""
    return TruncatedSeries((Fraction(0),) + a.coeffs, a.order + 1)


def series_inverse(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse; needs ``c_0 != 0``."""
    c0 = a.coeffs[0]
    if c0 == 0:
        raise SeriesError("inverse requires a nonzero constant term")
    ac = a.coeffs
    out = [1 / c0]
    for n in range(1, a.order + 1):
        s = sum((ac[i] * out[n - i] for i in range(1, n + 1)), Fraction(0))
        out.append(-s / c0)
    return TruncatedSeries(out, a.order)


def series_exp(a: TruncatedSeries) -> TruncatedSeries:
    """exp of a series with zero constant term, via ``E' = a' E``."""
    if a.coeffs[0] != 0:
        raise SeriesError("exp requires a zero constant term")
    ac = a.coeffs
    out = [Fraction(1)]
    for n in range(1, a.order + 1):
        s = sum((k * ac[k] * out[n - k] for k in range(1, n + 1)), Fraction(0))
        out.append(s / n)
    return TruncatedSeries(out, a.order)


def series_log(a: TruncatedSeries) -> TruncatedSeries:
    """log of a series with constant term 1, via ``L' = a' / a``."""
    if a.coeffs[0] != 1:
        raise SeriesError("log requires constant term 1")
    ac = a.coeffs
    out = [Fraction(0)]
    for n in range(1, a.order + 1):
        s = sum((k * out[k] * ac[n - k] for k in range(1, n)), Fraction(0))
        out.append(ac[n] - s / n)
    return TruncatedSeries(out, a.order)


def series_pow_alpha(a: TruncatedSeries, alpha) -> TruncatedSeries:
    if a.coeffs[0] != 1:
        raise SeriesError("pow_alpha requires constant term 1")
    return series_exp(series_scale(series_log(a), alpha))


def series_sqrt(a: TruncatedSeries) -> TruncatedSeries:
    return series_pow_alpha(a, Fraction(1, 2))


def _alternating(order: int, parity: int) -> TruncatedSeries:
    out = []
    for n in range(order + 1):
        if n % 2 != parity:
            out.append(0)
        else:
            sign = -1 if (n // 2) % 2 else 1
            out.append(Fraction(sign, math.factorial(n)))
    return TruncatedSeries(out, order)


def series_sin(order: int) -> TruncatedSeries:
    return _alternating(order, 1)


def series_cos(order: int) -> TruncatedSeries:
    return _alternating(order, 0)


def series_exp_x(order: int) -> TruncatedSeries:
    return TruncatedSeries((Fraction(1, math.factorial(n)) for n in range(order + 1)), order)


# generating-function maps


def phi_from_f(f: TruncatedSeries, N: int) -> TruncatedSeries:
    """``Phi = exp(int_0^x dt/t int_0^t f(s) ds)`` to order ``N``.

    ``f`` must be known to order ``N - 1`` at least; extra terms are dropped.
    """
    if N < 0:
        raise SeriesError(f"negative order {N}")
    if N == 0:
        return TruncatedSeries.one(0)
    if f.order < N - 1:
        raise SeriesError(f"phi_from_f to order {N} needs f to order {N - 1}, got {f.order}")
    inner = series_integrate(f.truncate(N - 1))  # order N
    log_phi = series_integrate(series_divide_by_x(inner))  # order N
    return series_exp(log_phi)


def f_from_phi(phi: TruncatedSeries) -> TruncatedSeries:
    """Recover ``f`` from ``Phi`` (``Phi(0) = 1``); output order ``N - 2``.

    Computes both ``[Phi Phi' + x (Phi Phi'' - Phi'^2)] / Phi^2`` and
    ``d/dx (x (ln Phi)')`` and raises if they disagree.
    """
    if phi.coeffs[0] != 1:
        raise SeriesError("f_from_phi requires Phi(0) = 1")
    N = phi.order
    if N < 2:
        raise SeriesError("f_from_phi needs Phi to order >= 2")
    M = N - 2
    p = phi.truncate(M)
    d1 = series_derive(phi)
    d2 = series_derive(d1)
    d1m = d1.truncate(M)
    numer = p * d1m + series_multiply_by_x(p * d2 - d1m * d1m).truncate(M)
    quotient = numer * series_inverse(p * p)

    connection = series_derive(series_log(phi))  # order N - 1
    alt = series_derive(series_multiply_by_x(connection)).truncate(M)

    if quotient != alt:
        raise ArithmeticError("the two inversion formulas disagree")
    return quotient


def normalize_F(F: TruncatedSeries) -> tuple[TruncatedSeries, Fraction]:
    """``(F / F(0), F(0))``; the scalar is the new initial datum."""
    c0 = F.coeffs[0]
    if c0 == 0:
        raise SeriesError("normalize_F requires F(0) != 0; use shift_F instead")
    return series_scale(F, 1 / c0), c0


def shift_F(F: TruncatedSeries) -> tuple[TruncatedSeries, Fraction]:
    """``(F - F(0) + 1, F(0))``.  Callers add ``(F(0) - 1)`` to the n = 0 value."""
    c0 = F.coeffs[0]
    return TruncatedSeries((Fraction(1),) + F.coeffs[1:], F.order), c0


def derivatives_at_zero(phi: TruncatedSeries, n: int) -> Fraction:
    """n-th derivative at 0, i.e. ``n! c_n``."""
    if n < 0 or n > phi.order:
        raise SeriesError(f"n = {n} outside 0..{phi.order}")
    return math.factorial(n) * phi.coeffs[n]


def egf_to_series(b: Sequence, order: int | None = None) -> TruncatedSeries:
    """``f = sum b_k x^k / k!`` as an ordinary coefficient series."""
    bs = [as_rational(v) for v in b]
    if order is None:
        order = len(bs) - 1
    return TruncatedSeries((v / math.factorial(k) for k, v in enumerate(bs)), order)


def series_to_egf(s: TruncatedSeries) -> list[Fraction]:
    return [math.factorial(k) * c for k, c in enumerate(s.coeffs)]


# named models


def _base_f(order: int) -> TruncatedSeries:
    return series_multiply_by_x(series_exp_x(order)).truncate(order)


def _catalan(order: int, alpha):
    one_minus_4x = TruncatedSeries((1, -4), order + 1)
    numer = TruncatedSeries.one(order + 1) - series_sqrt(one_minus_4x)
    F = series_scale(series_divide_by_x(numer), Fraction(1, 2))
    f = series_pow_alpha(one_minus_4x.truncate(order), Fraction(-3, 2))
    return F, f


def _bell(order: int, alpha):
    e = series_exp_x(order)
    F = series_exp(e - 1)
    f = e * TruncatedSeries((1, 1), order)
    return F, f


def _binomial(order: int, alpha):
    if alpha is None:
        raise SeriesError("binomial model needs alpha")
    one_plus_x = TruncatedSeries((1, 1), order)
    F = series_pow_alpha(one_plus_x, alpha)
    f = series_scale(series_pow_alpha(one_plus_x, -2), alpha)
    return F, f


def _expsin(order: int, alpha):
    F = series_exp(series_sin(order))
    f = series_cos(order) - series_mul(TruncatedSeries.x(order), series_sin(order))
    return F, f


def _base(order: int, alpha):
    f = _base_f(order)
    return phi_from_f(f, order), f


CATALOG = {
    "base": _base,
    "catalan": _catalan,
    "bell": _bell,
    "binomial": _binomial,
    "expsin": _expsin,
}


def catalog(name: str, alpha=None, order: int = 12) -> tuple[TruncatedSeries, TruncatedSeries]:
    """``(F, f_expected)`` for a named model, both at ``order``."""
    try:
        build = CATALOG[name]
    except KeyError:
        raise SeriesError(f"unknown model {name!r}; choose from {sorted(CATALOG)}") from None
    if alpha is not None:
        alpha = as_rational(alpha)
    return build(order, alpha)


@dataclass(frozen=True)
class ModelSpec:
    """Where the model data comes from.

    kind is one of ``base``, ``from_f``, ``from_F_normalize``, ``from_F_shift``,
    ``named``.  ``coeffs`` holds EGF weights ``b_k`` for ``from_f`` and raw
    coefficients of ``F`` for the ``from_F_*`` kinds.
    """

    kind: str
    coeffs: tuple[Fraction, ...] = ()
    name: str | None = None
    alpha: Fraction | None = None

    KINDS = ("base", "from_f", "from_F_normalize", "from_F_shift", "named")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise SeriesError(f"unknown model kind {self.kind!r}")
        if self.kind == "named":
            if self.name not in CATALOG:
                raise SeriesError(f"unknown model {self.name!r}")
            if self.name == "binomial" and self.alpha is None:
                raise SeriesError("binomial model needs alpha")
        if self.kind == "from_F_normalize" and self.coeffs and self.coeffs[0] == 0:
            raise SeriesError("from_F_normalize requires F(0) != 0")


# file format


def read_series_file(path) -> tuple[str, list[Fraction]]:
    """Read ``{"kind": "egf-b" | "series-c", "coeffs": [...]}``."""
    data = json.loads(Path(path).read_text())
    return parse_series_json(data)


def parse_series_json(data) -> tuple[str, list[Fraction]]:
    if not isinstance(data, dict):
        raise ValueError("series file must hold a JSON object")
    extra = set(data) - {"kind", "coeffs"}
    if extra:
        raise ValueError(f"unknown keys in series file: {sorted(extra)}")
    kind = data.get("kind")
    if kind not in ("egf-b", "series-c"):
        raise ValueError(f"kind must be 'egf-b' or 'series-c', got {kind!r}")
    coeffs = data.get("coeffs")
    if not isinstance(coeffs, list) or not coeffs:
        raise ValueError("coeffs must be a non-empty list")
    return kind, [parse_rational(c) for c in coeffs]


def series_json(kind: str, coeffs: Iterable) -> dict:
    return {"kind": kind, "coeffs": [format_rational(c) for c in coeffs]}


def write_series_file(path, kind: str, coeffs: Iterable) -> None:
    Path(path).write_text(json.dumps(series_json(kind, coeffs)) + "\n")
