"""Exact exponent-pair calculus over the A- and B-processes.

Pairs are exact rationals (kappa, lambda) in the classical admissibility
region 0 <= kappa <= 1/2 <= lambda <= 1, with a boolean marker recording
that a pair is only known up to an arbitrarily small epsilon shift.  Words
over {A, B} act on a pair right-to-left, operator style, so in "ABA3B" the
rightmost B is applied first.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import InadmissiblePairError, ParameterRangeError

Rational = Fraction

_HALF = Fraction(1, 2)
_WORD_TOKEN = re.compile(r"([AB])(?:\^?(\d+))?")


@dataclass(frozen=True)
class ExponentPair:
    """An exponent pair (kappa, lambda); eps_slack marks '(kappa+eps, lambda+eps)'."""

    kappa: Fraction
    lam: Fraction
    eps_slack: bool = False

    def __post_init__(self) -> None:
        kappa, lam = Fraction(self.kappa), Fraction(self.lam)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "lam", lam)
        if not (0 <= kappa <= _HALF <= lam <= 1):
            raise InadmissiblePairError(
                f"({kappa}, {lam}) violates 0 <= kappa <= 1/2 <= lambda <= 1")

    def __str__(self) -> str:
        eps = " (+eps)" if self.eps_slack else ""
        return f"({self.kappa}, {self.lam}){eps}"


TRIVIAL_PAIR = ExponentPair(Fraction(0), Fraction(1))
#: Two-dimensional pair accepted as an axiom of the calculus; it is not
#: reachable from the trivial pair by A/B words, hence the eps marker.
HUXLEY_PAIR = ExponentPair(Fraction(89, 570), Fraction(374, 570), eps_slack=True)


def a_process(p: ExponentPair) -> ExponentPair:
    """A-process: (kappa, lambda) -> (kappa/(2kappa+2), (kappa+lambda+1)/(2kappa+2))."""
    denom = 2 * p.kappa + 2
    return ExponentPair(p.kappa / denom, (p.kappa + p.lam + 1) / denom, p.eps_slack)


def b_process(p: ExponentPair) -> ExponentPair:
    """B-process: (kappa, lambda) -> (lambda - 1/2, kappa + 1/2).

    The swap maps the admissibility square into itself, so on valid input
    the result is always admissible; the constructor still enforces it.
    """
    return ExponentPair(p.lam - _HALF, p.kappa + _HALF, p.eps_slack)


_PROCESSES: dict[str, Callable[[ExponentPair], ExponentPair]] = {
    "A": a_process,
    "B": b_process,
}


def expand_word(word: str | Sequence[str]) -> str:
    """Normalize a word like 'ABA3B' or 'BA^4B' to explicit letters 'ABAAAB'."""
    if not isinstance(word, str):
        word = "".join(word)
    word = word.replace(" ", "")
    out = []
    pos = 0
    for match in _WORD_TOKEN.finditer(word):
        if match.start() != pos:
            break
        letter, count = match.group(1), match.group(2)
        out.append(letter * (int(count) if count else 1))
        pos = match.end()
    if pos != len(word):
        raise ParameterRangeError(f"cannot parse word {word!r} at position {pos}")
    return "".join(out)


def eval_word(word: str | Sequence[str], seed: ExponentPair = TRIVIAL_PAIR) -> ExponentPair:
    """Apply a word over {A, B} to a seed pair, rightmost letter first."""
    pair = seed
    for letter in reversed(expand_word(word)):
        pair = _PROCESSES[letter](pair)
    return pair


def vdc_bound(p: ExponentPair, lambda1: float, a: float) -> float:
    """The exponential-sum bound lambda1^kappa * a^lambda + 1/lambda1."""
    if lambda1 <= 0:
        raise ParameterRangeError(f"lambda1 must be positive, got {lambda1}")
    if a < 1:
        raise ParameterRangeError(f"a must be at least 1, got {a}")
    return lambda1 ** float(p.kappa) * a ** float(p.lam) + 1.0 / lambda1


def enumerate_pairs(max_len: int, seed: ExponentPair = TRIVIAL_PAIR
                    ) -> dict[ExponentPair, str]:
    """All pairs reachable from the seed by words of length <= max_len.

    Returns pair -> first word reaching it, where 'first' orders words by
    length then lexicographically.
    """
    found: dict[ExponentPair, str] = {}
    for length in range(max_len + 1):
        for letters in itertools.product("AB", repeat=length):
            word = "".join(letters)
            pair = eval_word(word, seed)
            if pair not in found:
                found[pair] = word
    return found


def optimize_word(objective: Callable[[ExponentPair], float], max_len: int,
                  seed: ExponentPair = TRIVIAL_PAIR) -> tuple[str, ExponentPair]:
    """Exhaustive search for the word of length <= max_len minimizing objective.

    Ties are broken by shorter word, then lexicographically smaller word.
    """
    if max_len < 0:
        raise ParameterRangeError(f"max_len must be nonnegative, got {max_len}")
    best: tuple[float, int, str, ExponentPair] | None = None
    for pair, word in enumerate_pairs(max_len, seed).items():
        key = (float(objective(pair)), len(word), word)
        if best is None or key < best[:3]:
            best = (*key, pair)
    assert best is not None  # length 0 always contributes the seed
    return best[2], best[3]
