"""Two-row matrix states and the operators A, B, S and Upsilon.

A state is a tuple of columns ``(s, k)`` with ``s >= 0`` (top row) and
``k >= 1`` (bottom row); the empty tuple is the unit state.  A weighted sum is
a plain ``dict`` mapping states to exact rational multiplicities with no zero
entries.  Integer multiplicities are kept as ``int`` (a rational with
denominator 1), which keeps the expansion loop free of ``Fraction`` overhead.
"""

from __future__ import annotations

import json
import math
import re
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

from .rational import as_rational, format_rational, parse_rational

Column = tuple[int, int]
MatrixState = tuple[Column, ...]
WeightedSum = dict

UNIT: MatrixState = ()

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    """Too many distinct states during an expansion."""

    def __init__(self, step: int, states: int, budget: int):
        super().__init__(f"expansion budget {budget} exceeded at step {step} ({states} states)")
        self.step = step
        self.states = states
        self.budget = budget


class WeightError(LookupError):
    pass


def make_state(cols: Iterable[Sequence[int]]) -> MatrixState:
    state = tuple((int(s), int(k)) for s, k in cols)
    for s, k in state:
        if s < 0 or k < 1:
            raise ValueError(f"invalid column ({s}, {k}): need s >= 0 and k >= 1")
    return state


class WeightSeq:
    """Weights ``b_g`` for the top-row values of a column.

    Either an explicit finite list, a rule ``g -> b_g``, or both (the rule
    covers indices past the end of the list).
    """

    def __init__(self, values: Sequence = (), rule: Callable[[int], object] | None = None):
        self.values = tuple(as_rational(v) for v in values)
        self.rule = rule
        if not self.values and rule is None:
            raise ValueError("WeightSeq needs values or a rule")

    @classmethod
    def base(cls) -> "WeightSeq":
        """``b_g = g``: the model with ``f = x e^x``."""
        return cls(rule=lambda g: g)

    @classmethod
    def from_series(cls, f) -> "WeightSeq":
        """Weights read off ``f = sum b_k x^k / k!``."""
        return cls([math.factorial(k) * c for k, c in enumerate(f.coeffs)])

    def __getitem__(self, g: int):
        if g < len(self.values):
            return self.values[g]
        if self.rule is not None:
            return self.rule(g)
        raise WeightError(f"weight b_{g} not available (only {len(self.values)} known)")

    def prefix(self, n: int) -> list:
        return [self[g] for g in range(n)]

    def is_nonnegative(self, n: int) -> bool:
        return all(self[g] >= 0 for g in range(n))

    def __repr__(self) -> str:
        vals = ", ".join(format_rational(v) for v in self.values[:6])
        return f"WeightSeq([{vals}{', ...' if len(self.values) > 6 else ''}], rule={self.rule is not None})"


# single-state operators


def apply_A_raw(m: MatrixState) -> list[MatrixState]:
    """The ``n + 1`` terms of ``A m`` before aggregation."""
    n = len(m)
    bumped = tuple((s, k + 1) for s, k in m)
    out = []
    for j in range(n):
        out.append(bumped[:j] + ((0, m[j][1] + 1),) + m[j:])
    out.append(bumped + ((0, 1),))
    return out


def apply_B_raw(m: MatrixState) -> list[MatrixState]:
    """The ``n`` terms of ``B m`` before aggregation."""
    bumped = tuple((s, k + 1) for s, k in m)
    return [bumped[:j] + ((s + 1, k + 1),) + m[j + 1 :] for j, (s, k) in enumerate(m)]


def _collect(states: Iterable[MatrixState], mult=1) -> WeightedSum:
    out: dict = defaultdict(int)
    for st in states:
        out[st] += mult
    return {st: c for st, c in out.items() if c != 0}


def apply_A(m: MatrixState) -> WeightedSum:
    return _collect(apply_A_raw(m))


def apply_B(m: MatrixState) -> WeightedSum:
    return _collect(apply_B_raw(m))


def apply_S(kk: int, l: int, m: MatrixState) -> MatrixState:
    """Prepend the column ``(kk, l)``."""
    if kk < 0 or l < 1:
        raise ValueError(f"S needs kk >= 0 and l >= 1, got ({kk}, {l})")
    return ((kk, l),) + m


def upsilon(m: MatrixState, w: WeightSeq) -> Fraction:
    """``prod b_{s_i} / k_i``; 1 on the unit state."""
    num = Fraction(1)
    den = 1
    for s, k in m:
        num *= w[s]
        den *= k
    return num / den


def upsilon_sum(ws: Mapping[MatrixState, object], w: WeightSeq) -> Fraction:
    """Linear extension of :func:`upsilon`.

    Weights are brought to a common denominator ``L`` so the inner loop only
    multiplies integers; contributions are grouped by their denominator.
    """
    if not ws:
        return Fraction(0)
    smax = max((s for st in ws for s, _ in st), default=-1)
    ws_b = [as_rational(w[g]) for g in range(smax + 1)]
    L = math.lcm(*(b.denominator for b in ws_b)) if ws_b else 1
    ib = [int(b * L) for b in ws_b]
    groups: dict = defaultdict(int)
    for st, mult in ws.items():
        num = 1
        den = 1
        for s, k in st:
            num *= ib[s]
            den *= k
            if num == 0:
                break
        if num == 0:
            continue
        mult = as_rational(mult) if not isinstance(mult, int) else mult
        if isinstance(mult, int):
            groups[(den, len(st), 1)] += mult * num
        else:
            groups[(den, len(st), mult.denominator)] += mult.numerator * num
    total = Fraction(0)
    for (den, length, mden), num in groups.items():
        total += Fraction(num, den * L**length * mden)
    return total


# words

_WORD_TOKEN = re.compile(r"\s*(?:(A)|(B)|S\(\s*(\d+)\s*,\s*(\d+)\s*\))")


def parse_word(text: str) -> list:
    """Parse e.g. ``"BA"`` or ``"S(0,3)AB"`` into letters (leftmost first)."""
    letters = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _WORD_TOKEN.match(text, pos)
        if m is None:
            raise ValueError(f"cannot parse word at {text[pos:]!r}")
        if m.group(1):
            letters.append("A")
        elif m.group(2):
            letters.append("B")
        else:
            kk, l = int(m.group(3)), int(m.group(4))
            if l < 1:
                raise ValueError("S(k,l) needs l >= 1")
            letters.append(("S", kk, l))
        pos = m.end()
    return letters


def format_word(letters: Sequence) -> str:
    return "".join(x if isinstance(x, str) else f"S({x[1]},{x[2]})" for x in letters)


def _apply_letter_to_state(letter, st: MatrixState) -> list[MatrixState]:
    if letter == "A":
        return apply_A_raw(st)
    if letter == "B":
        return apply_B_raw(st)
    if isinstance(letter, tuple) and letter[0] == "S":
        return [apply_S(letter[1], letter[2], st)]
    raise ValueError(f"unknown letter {letter!r}")


def _apply_chunk(args) -> dict:
    letters, items = args
    out: dict = defaultdict(int)
    for st, mult in items:
        for letter in letters:
            for new in _apply_letter_to_state(letter, st):
                out[new] += mult
    return dict(out)


def apply_letters(letters: Sequence, ws: Mapping, workers: int = 1) -> WeightedSum:
    """Apply the sum of ``letters`` (e.g. ``("A", "B")`` for A+B) to ``ws``.

    With ``workers > 1`` the state map is split into contiguous chunks of the
    sorted states, processed in separate processes and merged in chunk order.
    """
    items = list(ws.items())
    if workers > 1 and len(items) >= 2 * workers:
        items.sort()
        size = -(-len(items) // workers)
        chunks = [(tuple(letters), items[i : i + size]) for i in range(0, len(items), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_apply_chunk, chunks))
        out: dict = defaultdict(int)
        for part in parts:
            for st, c in part.items():
                out[st] += c
    else:
        out = _apply_chunk((tuple(letters), items))
    return {st: c for st, c in out.items() if c != 0}


def expand_word(
    word: Sequence, init: Mapping | None = None, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> WeightedSum:
    """Apply ``word`` to ``init`` (default: the unit state), rightmost letter first."""
    if isinstance(word, str):
        word = parse_word(word)
    ws = dict(init) if init is not None else {UNIT: 1}
    for step, letter in enumerate(reversed(list(word)), start=1):
        ws = apply_letters((letter,), ws, workers=workers)
        if len(ws) > budget:
            raise BudgetExceeded(step, len(ws), budget)
    return ws


_POWER_LEVELS: list = [MappingProxyType({UNIT: 1})]


def power_levels(n: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> list[Mapping]:
    """``[(A+B)^j 1 for j = 0..n]`` as read-only maps.

    The states do not depend on the weights, so levels are cached and shared
    between models.  Parallel runs bypass the cache.
    """
    if workers > 1:
        levels = [MappingProxyType({UNIT: 1})]
        for step in range(1, n + 1):
            nxt = apply_letters(("A", "B"), levels[-1], workers=workers)
            if len(nxt) > budget:
                raise BudgetExceeded(step, len(nxt), budget)
            levels.append(MappingProxyType(nxt))
        return levels
    while len(_POWER_LEVELS) <= n:
        step = len(_POWER_LEVELS)
        nxt = apply_letters(("A", "B"), _POWER_LEVELS[-1])
        if len(nxt) > budget:
            raise BudgetExceeded(step, len(nxt), budget)
        _POWER_LEVELS.append(MappingProxyType(nxt))
    for step in range(n + 1):
        if len(_POWER_LEVELS[step]) > budget:
            raise BudgetExceeded(step, len(_POWER_LEVELS[step]), budget)
    return _POWER_LEVELS[: n + 1]


def clear_cache() -> None:
    del _POWER_LEVELS[1:]


def omega_n(n: int, w: WeightSeq, scale=1, budget: int = DEFAULT_BUDGET, workers: int = 1) -> Fraction:
    """``scale * Upsilon (A+B)^n 1``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    level = power_levels(n, budget=budget, workers=workers)[n]
    return as_rational(scale) * upsilon_sum(level, w)


def omega_sequence(n: int, w: WeightSeq, scale=1, budget: int = DEFAULT_BUDGET, workers: int = 1) -> list[Fraction]:
    scale = as_rational(scale)
    return [scale * upsilon_sum(level, w) for level in power_levels(n, budget=budget, workers=workers)]


# dumps


def dump_weighted_sum(ws: Mapping) -> str:
    """JSON list of ``{"cols": [[s, k], ...], "mult": "p/q"}`` sorted by columns."""
    rows = [
        {"cols": [[s, k] for s, k in st], "mult": format_rational(ws[st])}
        for st in sorted(ws)
    ]
    return json.dumps(rows)


def load_weighted_sum(text: str) -> WeightedSum:
    out: dict = defaultdict(int)
    for row in json.loads(text):
        if set(row) != {"cols", "mult"}:
            raise ValueError(f"bad weighted-sum row: {row!r}")
        out[make_state(row["cols"])] += parse_rational(row["mult"])
    return {st: c for st, c in out.items() if c != 0}
