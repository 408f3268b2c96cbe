"""Monoid bialgebras, seminorms and the tensor algebra T(V).

Monoid elements are plain ints:

* ``G1``: nonnegative integers under ``+`` with unit ``0``.
* ``G2``: unit fractions ``1/q`` and infinity under ``p * q = (1/p + 1/q)^-1``.
  An element is stored by its denominator, with ``0`` standing for infinity, so
  the star product is integer addition and infinity is the unit.
* ``V``: pairs ``(g1, g2)`` with the componentwise product.

A free-vector element is a ``dict`` from basis keys to ``Fraction``; an element
of a tensor power is a ``dict`` keyed by tuples of basis keys.  A
:class:`TensorElem` of T(V) is a ``dict`` from tuples of ``(g1, g2)`` pairs to
coefficients, where the empty tuple carries the scalar (rank 0) part.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .matrix_ops import MatrixState, WeightSeq, make_state
from .rational import as_rational, format_rational

INF = 0


def star(p: int, q: int) -> int:
    """Harmonic product on G2 in denominator form: denominators add."""
    if p < 0 or q < 0:
        raise ValueError("G2 denominators are nonnegative (0 encodes infinity)")
    return p + q


def g2_str(q: int) -> str:
    return "inf" if q == INF else f"1/{q}"


def g2_value(q: int) -> Fraction | None:
    """The number ``1/q``; ``None`` for infinity."""
    return None if q == INF else Fraction(1, q)


@dataclass(frozen=True)
class Monoid:
    name: str
    op: Callable
    unit: object
    sample: Callable[[random.Random], object]


def _pair_op(a, b):
    return (a[0] + b[0], star(a[1], b[1]))


G1 = Monoid("G1", lambda a, b: a + b, 0, lambda rng: rng.randint(0, 6))
G2 = Monoid(
    "G2", star, INF, lambda rng: INF if rng.random() < 0.2 else rng.randint(1, 6)
)
GV = Monoid("V", _pair_op, (0, INF), lambda rng: (G1.sample(rng), G2.sample(rng)))


def _clean(d: Mapping) -> dict:
    return {k: Fraction(v) for k, v in d.items() if v != 0}


def vec(*pairs) -> dict:
    """``vec((key, coeff), ...)`` with repeated keys summed."""
    out: dict = defaultdict(Fraction)
    for key, c in pairs:
        out[key] += as_rational(c)
    return _clean(out)


def basis(key) -> dict:
    return {key: Fraction(1)}


def add(a: Mapping, b: Mapping) -> dict:
    out = defaultdict(Fraction, a)
    for k, v in b.items():
        out[k] += v
    return _clean(out)


def scale(a: Mapping, c) -> dict:
    c = as_rational(c)
    return _clean({k: c * v for k, v in a.items()})


def tensor(*factors: Mapping) -> dict:
    """Tensor product of free-vector elements; keys become tuples."""
    out = {(): Fraction(1)}
    for f in factors:
        nxt = {}
        for k1, v1 in out.items():
            for k2, v2 in f.items():
                nxt[k1 + (k2,)] = v1 * v2
        out = nxt
    return _clean(out)


def tensor_cat(a: Mapping, b: Mapping) -> dict:
    """Tensor product of two tensor-power elements (tuple keys concatenate)."""
    out: dict = defaultdict(Fraction)
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            out[k1 + k2] += v1 * v2
    return _clean(out)


def apply_slots(t: Mapping, maps: Iterable[Callable[[object], Mapping] | None]) -> dict:
    """Apply one linear map per tensor slot (``None`` = identity).

    Each map sends a basis key to an element keyed by tuples, so a slot may
    grow (comultiplication) or vanish (counit, returning ``{(): c}``).
    """
    maps = list(maps)
    out: dict = defaultdict(Fraction)
    for key, coeff in t.items():
        if len(key) != len(maps):
            raise ValueError(f"rank mismatch: key {key!r} vs {len(maps)} maps")
        partial = {(): coeff}
        for slot, fn in zip(key, maps):
            image = {(slot,): Fraction(1)} if fn is None else fn(slot)
            partial = tensor_cat(partial, image)
        for k, v in partial.items():
            out[k] += v
    return _clean(out)


def swap(t: Mapping) -> dict:
    return _clean({(k[1], k[0]): v for k, v in t.items()})


# bialgebra structure maps on the monoid algebra of M


def mu(M: Monoid, t: Mapping) -> dict:
    """Multiplication ``e_p (x) e_q -> e_{p o q}`` on a rank-2 element."""
    out: dict = defaultdict(Fraction)
    for (p, q), v in t.items():
        out[M.op(p, q)] += v
    return _clean(out)


def eta(M: Monoid, c=1) -> dict:
    return vec((M.unit, c))


def delta(M: Monoid, v: Mapping) -> dict:
    """Group-like coproduct ``e_q -> e_q (x) e_q``."""
    return _clean({(k, k): c for k, c in v.items()})


def eps(M: Monoid, v: Mapping) -> Fraction:
    return sum(v.values(), Fraction(0))


def mu1(t):
    return mu(G1, t)


def mu2(t):
    return mu(G2, t)


def eta1(c=1):
    return eta(G1, c)


def eta2(c=1):
    return eta(G2, c)


def delta1(v):
    return delta(G1, v)


def delta2(v):
    return delta(G2, v)


def eps1(v):
    return eps(G1, v)


def eps2(v):
    return eps(G2, v)


# seminorms


def seminorm1(v: Mapping, w: WeightSeq | None = None) -> Fraction:
    """``sum |a_g| b_g``; with negative weights this is no longer a seminorm."""
    w = w or WeightSeq.base()
    return sum((abs(c) * as_rational(w[g]) for g, c in v.items()), Fraction(0))


def seminorm2(v: Mapping) -> Fraction:
    """``sum |b_q| / q`` over finite elements; infinity contributes nothing."""
    return sum((abs(c) * g2_value(q) for q, c in v.items() if q != INF), Fraction(0))


def _pure_weight(key, w: WeightSeq, absolute: bool) -> Fraction:
    out = Fraction(1)
    for g1, g2 in key:
        if g2 == INF:
            return Fraction(0)
        b = as_rational(w[g1])
        out *= (abs(b) if absolute else b) * Fraction(1, g2)
        if out == 0:
            return out
    return out


def seminorm_V(v: Mapping, w: WeightSeq | None = None) -> Fraction:
    """Seminorm on V: ``sum |a| |b_g1| / q`` (rank-1 keys are plain pairs)."""
    w = w or WeightSeq.base()
    return sum((abs(c) * _pure_weight((key,), w, True) for key, c in v.items()), Fraction(0))


def seminorm_T(v: Mapping, w: WeightSeq | None = None) -> Fraction:
    """Seminorm on T(V): multiplicative over factors, additive over terms."""
    w = w or WeightSeq.base()
    return sum((abs(c) * _pure_weight(key, w, True) for key, c in v.items()), Fraction(0))


def weight_functional(v: Mapping, w: WeightSeq | None = None) -> Fraction:
    """Linear counterpart of :func:`seminorm_T` (signed coefficients and weights)."""
    w = w or WeightSeq.base()
    return sum((c * _pure_weight(key, w, False) for key, c in v.items()), Fraction(0))


def in_kernel(key, w: WeightSeq) -> bool:
    """A pure tensor has zero seminorm iff some factor has ``b_g1 = 0`` or ``g2 = inf``."""
    return any(g2 == INF or w[g1] == 0 for g1, g2 in key)


# operators on T(V)

TensorElem = dict

ONE: TensorElem = {(): Fraction(1)}


def theta1(c=1) -> dict:
    return vec((1, c))


def theta2(c=1) -> dict:
    return vec((1, c))


def _mu_V(a, b):
    return _pair_op(a, b)


def block_bump(x):
    """``mu o (eta1, theta2) (x) id``: ``(g1, g2) -> (g1, g2 * 1)``."""
    g1, g2 = x
    return _mu_V((0, 1), (g1, g2))


def block_insert(x):
    """``(mu (x) id) o (eta1 (x) eta1 (x) id, theta2 (x) Delta2)``: insert a fresh column."""
    g1, g2 = x
    # first slot (e_0, e_1), second and third (e_0, e_g2) and (e_g1, e_g2) from Delta2
    first, second, third = (0, 1), (0, g2), (g1, g2)
    return (_mu_V(first, second), third)


def block_raise(x):
    """``mu o (theta1 (x) id, theta2 (x) id)``: ``(g1, g2) -> (g1 + 1, g2 * 1)``."""
    g1, g2 = x
    return _mu_V((1, 1), (g1, g2))


def _linear(fn: Callable[[tuple], Iterable[tuple]]) -> Callable[[Mapping], TensorElem]:
    def op(v: Mapping) -> TensorElem:
        out: dict = defaultdict(Fraction)
        for key, c in v.items():
            for new in fn(key):
                out[new] += c
        return _clean(out)

    return op


def _calA_pure(key: tuple) -> list[tuple]:
    k = len(key)
    left = tuple(block_bump(x) for x in key)
    out = [left[:j] + block_insert(key[j]) + key[j + 1 :] for j in range(k)]
    out.append(left + ((0, 1),))
    return out


def _calB_pure(key: tuple) -> list[tuple]:
    left = tuple(block_bump(x) for x in key)
    return [left[:j] + (block_raise(key[j]),) + key[j + 1 :] for j in range(len(key))]


def _calS_pure(kk: int, l: int):
    def run(key: tuple) -> list[tuple]:
        head = GV.unit  # (eta1, eta2) 1
        for _ in range(kk):
            head = _mu_V((1, INF), head)  # (theta1, eta2)
        for _ in range(l):
            head = _mu_V((0, 1), head)  # (eta1, theta2)
        return [(head,) + key]

    return run


calA = _linear(_calA_pure)
calB = _linear(_calB_pure)


def calS(kk: int, l: int, v: Mapping) -> TensorElem:
    if kk < 0 or l < 1:
        raise ValueError(f"S needs kk >= 0 and l >= 1, got ({kk}, {l})")
    return _linear(_calS_pure(kk, l))(v)


def apply_tensor_word(word, v: Mapping) -> TensorElem:
    """Apply a word over ``"A"``, ``"B"``, ``("S", k, l)``; rightmost acts first."""
    for letter in reversed(list(word)):
        if letter == "A":
            v = calA(v)
        elif letter == "B":
            v = calB(v)
        elif isinstance(letter, tuple) and letter[0] == "S":
            v = calS(letter[1], letter[2], v)
        else:
            raise ValueError(f"unknown letter {letter!r}")
    return v


# correspondence with matrix states


def from_matrix(m: MatrixState) -> TensorElem:
    return {tuple((s, k) for s, k in make_state(m)): Fraction(1)}


def to_matrix(key: tuple) -> MatrixState:
    """Pure-tensor key -> matrix state; infinity has no matrix counterpart."""
    for g1, g2 in key:
        if g2 == INF:
            raise ValueError("factor with g2 = infinity has no matrix column")
    return make_state(key)


def tensor_to_weighted_sum(v: Mapping) -> dict:
    return {to_matrix(key): c for key, c in v.items()}


def weighted_sum_to_tensor(ws: Mapping) -> TensorElem:
    return _clean({tuple(st): Fraction(c) for st, c in ws.items()})


# axiom suite


def _rand_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 5))


def random_vec(M: Monoid, rng: random.Random, size: int = 3) -> dict:
    return vec(*((M.sample(rng), _rand_rational(rng)) for _ in range(rng.randint(1, size))))


def random_tensor_elem(rng: random.Random, max_rank: int = 3, terms: int = 3) -> TensorElem:
    out: dict = defaultdict(Fraction)
    for _ in range(rng.randint(1, terms)):
        rank = rng.randint(0, max_rank)
        key = tuple(GV.sample(rng) for _ in range(rank))
        out[key] += _rand_rational(rng)
    return _clean(out)


def _laws_for(M: Monoid):
    """(name, check) pairs for the monoid algebra of ``M``."""

    def delta_map(x):
        return {(x, x): Fraction(1)}

    def eps_map(x):
        return {(): Fraction(1)}

    def assoc(rng):
        a, b, c = (random_vec(M, rng) for _ in range(3))
        left = mu(M, tensor(mu(M, tensor(a, b)), c))
        right = mu(M, tensor(a, mu(M, tensor(b, c))))
        return left == right, (a, b, c)

    def comm(rng):
        a, b = random_vec(M, rng), random_vec(M, rng)
        return mu(M, tensor(a, b)) == mu(M, tensor(b, a)), (a, b)

    def unit(rng):
        a = random_vec(M, rng)
        e = eta(M)
        return mu(M, tensor(e, a)) == a and mu(M, tensor(a, e)) == a, (a,)

    def coassoc(rng):
        a = random_vec(M, rng)
        d = delta(M, a)
        left = apply_slots(d, [delta_map, None])
        right = apply_slots(d, [None, delta_map])
        return left == right, (a,)

    def cocomm(rng):
        a = random_vec(M, rng)
        d = delta(M, a)
        return swap(d) == d, (a,)

    def counit(rng):
        a = random_vec(M, rng)
        d = delta(M, a)
        left = {k[0]: v for k, v in apply_slots(d, [eps_map, None]).items()}
        right = {k[0]: v for k, v in apply_slots(d, [None, eps_map]).items()}
        return _clean(left) == a and _clean(right) == a, (a,)

    def delta_mult(rng):
        a, b = random_vec(M, rng), random_vec(M, rng)
        left = delta(M, mu(M, tensor(a, b)))
        # (mu (x) mu) o (id (x) tau (x) id) o (Delta (x) Delta)
        dd = tensor_cat(delta(M, a), delta(M, b))
        out: dict = defaultdict(Fraction)
        for (a1, a2, b1, b2), v in dd.items():
            out[(M.op(a1, b1), M.op(a2, b2))] += v
        return left == _clean(out), (a, b)

    def eps_mult(rng):
        a, b = random_vec(M, rng), random_vec(M, rng)
        return eps(M, mu(M, tensor(a, b))) == eps(M, a) * eps(M, b), (a, b)

    def unit_coalg(rng):
        c = _rand_rational(rng)
        e = eta(M, c)
        ok = delta(M, e) == scale({(M.unit, M.unit): Fraction(1)}, c) and eps(M, e) == c
        return ok, (c,)

    def monoid_laws(rng):
        p, q, r = M.sample(rng), M.sample(rng), M.sample(rng)
        ok = (
            M.op(M.op(p, q), r) == M.op(p, M.op(q, r))
            and M.op(M.unit, p) == p
            and M.op(p, M.unit) == p
            and M.op(p, q) == M.op(q, p)
        )
        return ok, (p, q, r)

    prefix = M.name
    return [
        (f"{prefix}.monoid", monoid_laws),
        (f"{prefix}.associativity", assoc),
        (f"{prefix}.commutativity", comm),
        (f"{prefix}.unit", unit),
        (f"{prefix}.coassociativity", coassoc),
        (f"{prefix}.cocommutativity", cocomm),
        (f"{prefix}.counit", counit),
        (f"{prefix}.delta_is_algebra_map", delta_mult),
        (f"{prefix}.eps_is_algebra_map", eps_mult),
        (f"{prefix}.unit_compatibility", unit_coalg),
    ]


def _seminorm_laws(w: WeightSeq):
    nonneg = w.is_nonnegative(7)

    def pick(rng):
        which = rng.randrange(4)
        if which == 0:
            return "seminorm1", random_vec(G1, rng), lambda v: seminorm1(v, w)
        if which == 1:
            return "seminorm2", random_vec(G2, rng), seminorm2
        if which == 2:
            return "seminorm_V", random_vec(GV, rng), lambda v: seminorm_V(v, w)
        return "seminorm_T", random_tensor_elem(rng), lambda v: seminorm_T(v, w)

    def homogeneity(rng):
        name, v, norm = pick(rng)
        c = _rand_rational(rng)
        return norm(scale(v, c)) == abs(c) * norm(v), (name, v, c)

    def triangle(rng):
        which = rng.randrange(4)
        if which == 0:
            a, b = random_vec(G1, rng), random_vec(G1, rng)
            norm = lambda v: seminorm1(v, w)  # noqa: E731
        elif which == 1:
            a, b = random_vec(G2, rng), random_vec(G2, rng)
            norm = seminorm2
        elif which == 2:
            a, b = random_vec(GV, rng), random_vec(GV, rng)
            norm = lambda v: seminorm_V(v, w)  # noqa: E731
        else:
            a, b = random_tensor_elem(rng), random_tensor_elem(rng)
            norm = lambda v: seminorm_T(v, w)  # noqa: E731
        ok = norm(add(a, b)) <= norm(a) + norm(b) and norm(a) >= 0
        return ok, (a, b)

    def kernel(rng):
        # norm zero exactly on sums of kernel pure tensors
        v = random_tensor_elem(rng)
        expected = all(in_kernel(key, w) for key in v) if v else True
        return (seminorm_T(v, w) == 0) == expected, (v,)

    laws = [("seminorm.homogeneity", homogeneity), ("seminorm.kernel", kernel)]
    laws.append(("seminorm.triangle", None if not nonneg else triangle))
    return laws


def _describe(x) -> str:
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k!r}: {format_rational(v)}" for k, v in sorted(x.items(), key=repr)) + "}"
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, tuple):
        return "(" + ", ".join(_describe(y) for y in x) + ")"
    return repr(x)


def axiom_suite(trials: int = 500, seed: int = 0, weights: WeightSeq | None = None) -> dict:
    """Randomized check of the monoid, bialgebra and seminorm laws.

    Returns ``{law: {"trials", "failures", "first_counterexample"?}}``.  Laws
    that do not apply (triangle inequality under negative weights) are reported
    with ``"skipped"`` set.  Each law uses its own RNG seeded from ``(seed, law)``
    so results do not depend on the evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    w = weights or WeightSeq.base()
    laws = []
    for M in (G1, G2, GV):
        laws.extend(_laws_for(M))
    laws.extend(_seminorm_laws(w))

    report: dict = {}
    for name, check in laws:
        if check is None:
            report[name] = {
                "trials": 0,
                "failures": 0,
                "skipped": "negative weights: not a seminorm",
            }
            continue
        rng = random.Random(f"{seed}:{name}")
        failures = 0
        first = None
        for _ in range(trials):
            ok, inputs = check(rng)
            if not ok:
                failures += 1
                if first is None:
                    first = _describe(inputs)
        entry = {"trials": trials, "failures": failures}
        if first is not None:
            entry["first_counterexample"] = first
        report[name] = entry
    return report


def report_ok(report: Mapping) -> bool:
    return all(v["failures"] == 0 for v in report.values())


def report_json(report: Mapping) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
