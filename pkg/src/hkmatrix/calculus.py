"""Closed-form evaluation of operator words on a generating function.

With ``g = (ln Phi)'``, the insertion operator acts as multiplication by ``g``
and the increment operator as the covariant derivative ``h -> h' - g h``.
Applying a word to ``Phi`` and reading off the constant term gives the same
number as expanding the word on matrix states and applying Upsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from .rational import as_rational
from .series import (
    SeriesError,
    TruncatedSeries,
    series_derive,
    series_log,
    series_mul,
)


def required_order(length: int) -> int:
    return 2 * length + 8


@dataclass(frozen=True)
class OperatorWord:
    """Run-length encoded word over ``A`` and ``B``; leftmost letter acts last."""

    runs: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        for letter, exp in self.runs:
            if letter not in ("A", "B"):
                raise ValueError(f"operator words use A and B only, got {letter!r}")
            if exp < 0:
                raise ValueError("exponents must be nonnegative")

    @classmethod
    def parse(cls, text: str) -> "OperatorWord":
        """``"BA"``, ``"A^3B"`` or ``""``."""
        runs = []
        i = 0
        text = text.replace(" ", "")
        while i < len(text):
            letter = text[i]
            if letter not in "AB":
                raise ValueError(f"unexpected {letter!r} in word {text!r}")
            i += 1
            exp = 1
            if i < len(text) and text[i] == "^":
                j = i + 1
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise ValueError(f"missing exponent in {text!r}")
                exp = int(text[i + 1 : j])
                i = j
            runs.append((letter, exp))
        return cls(tuple(runs))

    @classmethod
    def from_letters(cls, letters: Iterable[str]) -> "OperatorWord":
        return cls(tuple((x, 1) for x in letters))

    def letters(self) -> list[str]:
        return [x for x, e in self.runs for _ in range(e)]

    def __len__(self) -> int:
        return sum(e for _, e in self.runs)

    def __str__(self) -> str:
        return "".join(x if e == 1 else f"{x}^{e}" for x, e in self.runs)


def _as_letters(word) -> list[str]:
    if isinstance(word, OperatorWord):
        return word.letters()
    if isinstance(word, str):
        return OperatorWord.parse(word).letters()
    return list(word)


def _check_phi(phi: TruncatedSeries, length: int) -> None:
    if phi.coeffs[0] != 1:
        raise SeriesError("eval_word requires Phi(0) = 1")
    need = required_order(length)
    if phi.order < need:
        raise SeriesError(f"eval_word on a length-{length} word needs Phi to order {need}, got {phi.order}")


def _connection(phi: TruncatedSeries) -> TruncatedSeries:
    return series_derive(series_log(phi))


def _step(letter: str, h: TruncatedSeries, g: TruncatedSeries, remaining: int) -> TruncatedSeries:
    """Apply one letter; keep only what the constant term after ``remaining`` more letters needs."""
    if letter == "A":
        return series_mul(g.truncate(remaining), h.truncate(remaining))
    if letter == "B":
        dh = series_derive(h).truncate(remaining)
        return dh - series_mul(g.truncate(remaining), h.truncate(remaining))
    raise ValueError(f"unknown letter {letter!r}")


def eval_word(word, phi: TruncatedSeries) -> Fraction:
    """Constant term of ``word(g, d/dx - g) Phi`` with ``g = (ln Phi)'``."""
    letters = _as_letters(word)
    _check_phi(phi, len(letters))
    g = _connection(phi)
    h = phi.truncate(len(letters))
    for i, letter in enumerate(reversed(letters)):
        h = _step(letter, h, g, len(letters) - i - 1)
    return h.coeffs[0]


def all_words(n: int) -> Iterable[tuple[str, ...]]:
    return product("AB", repeat=n)


def eval_power_sum(n: int, phi: TruncatedSeries) -> Fraction:
    """Sum of :func:`eval_word` over all ``2^n`` words of length ``n``.

    Words sharing a suffix share its evaluation.
    """
    _check_phi(phi, n)
    g = _connection(phi)

    def walk(h: TruncatedSeries, remaining: int) -> Fraction:
        if remaining == 0:
            return h.coeffs[0]
        return sum((walk(_step(x, h, g, remaining - 1), remaining - 1) for x in "AB"), Fraction(0))

    return walk(phi.truncate(n), n)


@dataclass(frozen=True)
class BoundInput:
    d: int
    C: Fraction
    n: int

    def __post_init__(self):
        object.__setattr__(self, "C", as_rational(self.C))
        if self.d < 1:
            raise ValueError("dimension d must be >= 1")
        if self.C <= 0:
            raise ValueError("constant C must be > 0")
        if self.n < 1:
            raise ValueError("n must be >= 1")


OmegaSource = Callable[[int], Fraction]


def bound_rhs_ko3(inp: BoundInput, omega: OmegaSource | Sequence) -> Fraction:
    """``d^n C^(2n) omega_(2n)``."""
    w2n = omega(2 * inp.n) if callable(omega) else omega[2 * inp.n]
    return inp.d**inp.n * inp.C ** (2 * inp.n) * as_rational(w2n)


def bound_rhs_ko4(inp: BoundInput, omega: OmegaSource | Sequence) -> Fraction:
    """``d^n C^(2n) omega_(2n) (n-1)! / (2n-1)!``."""
    ratio = Fraction(math.factorial(inp.n - 1), math.factorial(2 * inp.n - 1))
    return bound_rhs_ko3(inp, omega) * ratio
