"""Model preparation and the three routes to the omega numbers.

A prepared model carries the normalized generating function ``Phi`` (with
``Phi(0) = 1``), the field data ``f`` and the bookkeeping needed to map
results back to the original sequence: a multiplicative ``scale`` and an
additive correction ``delta0`` applied at ``n = 0`` only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import calculus, matrix_ops
from .matrix_ops import WeightSeq
from .series import (
    ModelSpec,
    SeriesError,
    TruncatedSeries,
    catalog,
    derivatives_at_zero,
    egf_to_series,
    f_from_phi,
    normalize_F,
    phi_from_f,
    shift_F,
)

METHODS = ("matrix", "series", "calculus")


@dataclass(frozen=True)
class PreparedModel:
    phi: TruncatedSeries
    f: TruncatedSeries
    scale: Fraction = Fraction(1)
    delta0: Fraction = Fraction(0)

    @property
    def weights(self) -> WeightSeq:
        return WeightSeq.from_series(self.f)


def prepare_from_f(f: TruncatedSeries, order: int) -> PreparedModel:
    return PreparedModel(phi=phi_from_f(f, order), f=f.truncate(order - 1) if order >= 1 else f)


def prepare_from_F(F: TruncatedSeries, mode: str = "normalize") -> PreparedModel:
    """Bring ``F`` to ``Phi(0) = 1`` form by scaling or by shifting."""
    if mode == "normalize":
        phi, c0 = normalize_F(F)
        return PreparedModel(phi=phi, f=f_from_phi(phi), scale=c0)
    if mode == "shift":
        phi, c0 = shift_F(F)
        return PreparedModel(phi=phi, f=f_from_phi(phi), delta0=c0 - 1)
    raise SeriesError(f"unknown mode {mode!r}")


def prepare(spec: ModelSpec, order: int, mode: str = "normalize") -> PreparedModel:
    """Prepared model with ``Phi`` known to ``order`` or more.

    ``order`` should be at least ``n + 1`` for omega up to ``n``; F-based
    models lose two orders in the inversion, so they are built two higher.
    """
    if spec.kind == "base":
        _, f = catalog("base", order=order)
        return prepare_from_f(f, order)
    if spec.kind == "from_f":
        f = egf_to_series(spec.coeffs)
        if f.order < order - 1:
            raise SeriesError(f"need b_0..b_{order - 1}, file has {f.order + 1} weights")
        return prepare_from_f(f.truncate(order - 1), order)
    if spec.kind in ("from_F_normalize", "from_F_shift"):
        F = TruncatedSeries(spec.coeffs)
        if F.order < order + 2:
            raise SeriesError(f"need F to order {order + 2}, file has order {F.order}")
        return prepare_from_F(F.truncate(order + 2), "normalize" if spec.kind.endswith("normalize") else "shift")
    if spec.kind == "named":
        if spec.name == "base":
            return prepare(ModelSpec("base"), order)
        F, _ = catalog(spec.name, spec.alpha, order=order + 2)
        return prepare_from_F(F, mode)
    raise SeriesError(f"unknown model kind {spec.kind!r}")


def omega_series(model: PreparedModel, n: int) -> list[Fraction]:
    out = [model.scale * derivatives_at_zero(model.phi, j) for j in range(n + 1)]
    out[0] += model.delta0
    return out


def omega_matrix(model: PreparedModel, n: int, budget: int = matrix_ops.DEFAULT_BUDGET, workers: int = 1) -> list[Fraction]:
    out = matrix_ops.omega_sequence(n, model.weights, scale=model.scale, budget=budget, workers=workers)
    out[0] += model.delta0
    return out


def omega_calculus(model: PreparedModel, n: int) -> list[Fraction]:
    need = calculus.required_order(n)
    phi = model.phi
    if phi.order < need:
        raise SeriesError(f"calculus route needs Phi to order {need}, model has {phi.order}")
    out = [model.scale * calculus.eval_power_sum(j, phi) for j in range(n + 1)]
    out[0] += model.delta0
    return out


def omega(model: PreparedModel, n: int, method: str, **kw) -> list[Fraction]:
    if method == "series":
        return omega_series(model, n)
    if method == "matrix":
        return omega_matrix(model, n, **kw)
    if method == "calculus":
        return omega_calculus(model, n)
    raise ValueError(f"unknown method {method!r}")


def order_for(n: int, methods) -> int:
    """Working order of ``Phi`` needed to get omega up to ``n`` by ``methods``."""
    order = n + 1
    if "calculus" in methods:
        order = max(order, calculus.required_order(n))
    return order
