"""Heisenberg oscillator algebra with derivation, Fock modules and their graded duals.

Generators are tuples: ``("a", m)`` for the mode ``a_m`` (m != 0), ``("c",)``
for the central element and ``("d",)`` for the derivation.  Relations:
``[a_m, a_n] = m δ_{m,-n} c``, ``[d, a_m] = m a_m``, ``c`` central.

A word is a tuple of generators; sums of words are FreeVectors over words.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .dual_comodules import QuasiNormalWitness, locally_finite_closure
from .exact import FreeVector, as_rational, linear_combination
from .verdict import Verdict

__all__ = [
    "C",
    "D",
    "mode",
    "parse_word",
    "format_word",
    "is_normal",
    "straighten_word",
    "oscillator_product",
    "partitions",
    "partition_count",
    "TruncationOverflow",
    "FockModule",
    "GradedDualElement",
    "fock_apply",
    "dual_fock_apply",
    "check_level",
    "RestrictionReport",
    "restriction_energy_check",
    "dual_closure",
    "oscillator_quasi_normal_witness",
]

C = ("c",)
D = ("d",)


def mode(m: int) -> tuple:
    if not isinstance(m, int) or isinstance(m, bool):
        raise TypeError("mode index must be an integer")
    if m == 0:
        raise ValueError("a_0 is not a generator of the oscillator algebra")
    return ("a", m)


_TOKEN = re.compile(r"a_?\{?(-?\d+)\}?(?:\^(\d+))?|([cd])(?:\^(\d+))?")


def parse_word(text: str) -> tuple:
    """Parse ``"a_{-2} a_1 c d^2"`` (or ``"a-2 a1"``) into a word; ``"1"`` is the empty word."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    word = []
    for token in text.replace("*", " ").split():
        match = _TOKEN.fullmatch(token)
        if not match:
            raise ValueError(f"cannot parse generator {token!r}")
        if match.group(1) is not None:
            g, power = mode(int(match.group(1))), match.group(2)
        else:
            g, power = (match.group(3),), match.group(4)
        word += [g] * int(power or 1)
    return tuple(word)


def format_word(word: Sequence) -> str:
    if not word:
        return "1"
    return " ".join(f"a_{g[1]}" if g[0] == "a" else g[0] for g in word)


# --- straightening ------------------------------------------------------------------

_ORDERS = {
    # lowering modes, then c, then d, then raising modes
    "normal": lambda g: (0, -g[1]) if g[0] == "a" and g[1] < 0 else
                        (3, g[1]) if g[0] == "a" else (1, 0) if g == C else (2, 0),
    # the U_≥ part first: c, d, raising modes, then lowering modes
    "raising_first": lambda g: (3, -g[1]) if g[0] == "a" and g[1] < 0 else
                               (2, g[1]) if g[0] == "a" else (0, 0) if g == C else (1, 0),
}


def _check_generator(g) -> None:
    if g == C or g == D:
        return
    if not (isinstance(g, tuple) and len(g) == 2 and g[0] == "a" and isinstance(g[1], int) and g[1]):
        raise ValueError(f"not an oscillator generator: {g!r}")


def _commutator(x, y) -> list[tuple[tuple, Fraction]]:
    """``[x, y]`` as a list of (word, coefficient)."""
    if x[0] == "a" and y[0] == "a":
        return [((C,), Fraction(x[1]))] if x[1] + y[1] == 0 else []
    if x == D and y[0] == "a":
        return [((y,), Fraction(y[1]))]
    if x[0] == "a" and y == D:
        return [((x,), Fraction(-x[1]))]
    return []


def is_normal(word: Sequence, order: str = "normal") -> bool:
    rank = _ORDERS[order]
    return all(rank(word[i]) <= rank(word[i + 1]) for i in range(len(word) - 1))


def straighten_word(w, order: str = "normal", strategy: str | random.Random = "leftmost") -> FreeVector:
    """PBW normal form of a word or a sum of words.

    ``strategy`` picks which out-of-order adjacent pair to rewrite first:
    ``"leftmost"``, ``"rightmost"``, or a ``random.Random`` instance.
    The result does not depend on the strategy.
    """
    if order not in _ORDERS:
        raise ValueError(f"unknown order {order!r}")
    rank = _ORDERS[order]
    if isinstance(w, tuple):
        w = FreeVector.basis(w)
    stack = list(w.items())
    for word, _ in stack:
        for g in word:
            _check_generator(g)
    result: dict = {}
    while stack:
        word, coeff = stack.pop()
        inversions = [i for i in range(len(word) - 1) if rank(word[i]) > rank(word[i + 1])]
        if not inversions:
            result[word] = result.get(word, 0) + coeff
            continue
        if strategy == "leftmost":
            i = inversions[0]
        elif strategy == "rightmost":
            i = inversions[-1]
        elif isinstance(strategy, random.Random):
            i = strategy.choice(inversions)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        x, y = word[i], word[i + 1]
        stack.append((word[:i] + (y, x) + word[i + 2:], coeff))
        for middle, c in _commutator(x, y):
            stack.append((word[:i] + middle + word[i + 2:], coeff * c))
    return FreeVector(result)


def oscillator_product(u: FreeVector, v: FreeVector, order: str = "normal") -> FreeVector:
    """Product of two sums of words, straightened."""
    return straighten_word(FreeVector((a + b, x * y) for a, x in u.items() for b, y in v.items()), order)


def _lowering_degree(word) -> int:
    return sum(-g[1] for g in word if g[0] == "a" and g[1] < 0)


# --- partitions ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def partitions(n: int, largest: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Partitions of ``n`` as weakly decreasing tuples, in reverse-lexicographic order."""
    if n == 0:
        return ((),)
    largest = n if largest is None else min(largest, n)
    return tuple((first,) + rest for first in range(largest, 0, -1) for rest in partitions(n - first, first))


def partition_count(n: int) -> int:
    return len(partitions(n))


def _add_part(lam: tuple, n: int) -> tuple:
    return tuple(sorted(lam + (n,), reverse=True))


def _remove_part(lam: tuple, n: int) -> tuple:
    parts = list(lam)
    parts.remove(n)
    return tuple(parts)


# --- Fock module ----------------------------------------------------------------------

class TruncationOverflow(ArithmeticError):
    """An operation left the energy range of a truncated Fock module."""


class FockModule:
    """Level-``k`` Fock module truncated at energy ``N``.

    Basis: partitions λ (monomials y_λ applied to the vacuum ``()``).
    ``a_{-n}`` multiplies by y_n, ``a_n`` acts as ``n k ∂/∂y_n``, ``a_0`` as 0,
    ``c`` as ``k`` and ``d`` as minus the energy.
    """

    def __init__(self, k, N: int):
        self.k = as_rational(k)
        if N < 0:
            raise ValueError("truncation must be nonnegative")
        self.N = N

    def __repr__(self) -> str:
        return f"FockModule(k={self.k}, N={self.N})"

    def basis(self, n: int) -> tuple[tuple[int, ...], ...]:
        if not 0 <= n <= self.N:
            raise TruncationOverflow(f"energy {n} outside 0..{self.N}")
        return partitions(n)

    def graded_dimensions(self, n_max: int | None = None) -> list[int]:
        return [len(self.basis(n)) for n in range(self.N + 1 if n_max is None else n_max + 1)]

    @property
    def vacuum(self) -> FreeVector:
        return FreeVector.basis(())

    def state(self, *parts: int) -> FreeVector:
        """``y_λ · vacuum`` for the given parts."""
        lam = tuple(sorted(parts, reverse=True))
        if any(p <= 0 for p in lam):
            raise ValueError("parts must be positive")
        if sum(lam) > self.N:
            raise TruncationOverflow(f"energy {sum(lam)} exceeds truncation {self.N}")
        return FreeVector.basis(lam)

    def act(self, g, lam: tuple) -> FreeVector:
        """A single generator (``("a", 0)`` allowed) on a basis state."""
        if g == C:
            return FreeVector({lam: self.k})
        if g == D:
            return FreeVector({lam: -sum(lam)})
        if not (isinstance(g, tuple) and len(g) == 2 and g[0] == "a"):
            raise ValueError(f"not an oscillator generator: {g!r}")
        m = g[1]
        if m == 0:
            return FreeVector()
        if m < 0:
            if sum(lam) - m > self.N:
                raise TruncationOverflow(f"a_{m} leaves energy range 0..{self.N}")
            return FreeVector.basis(_add_part(lam, -m))
        mult = lam.count(m)
        if not mult:
            return FreeVector()
        return FreeVector({_remove_part(lam, m): m * self.k * mult})


def _as_word(g) -> tuple:
    if isinstance(g, str):
        return parse_word(g)
    if g == C or g == D or (isinstance(g, tuple) and len(g) == 2 and g[0] == "a"):
        return (g,)
    return tuple(g)


def fock_apply(F: FockModule, g, state: FreeVector) -> FreeVector:
    """Apply a generator, a word (rightmost letter first) or a sum of words to a state."""
    if isinstance(g, FreeVector):
        return linear_combination((c, fock_apply(F, w, state)) for w, c in g.items())
    for letter in reversed(_as_word(g)):
        state = linear_combination((c, F.act(letter, lam)) for lam, c in state.items())
    return state


# --- graded dual ----------------------------------------------------------------------

@dataclass(frozen=True)
class GradedDualElement:
    """A functional supported on the energy-``energy`` piece, in dual-basis coordinates."""

    energy: int
    row: FreeVector

    def __post_init__(self):
        for lam in self.row:
            if sum(lam) != self.energy:
                raise ValueError(f"partition {lam} does not have energy {self.energy}")

    def __call__(self, state: FreeVector) -> Fraction:
        return self.row.dot(state)

    @classmethod
    def dual_basis(cls, *parts: int) -> "GradedDualElement":
        lam = tuple(sorted(parts, reverse=True))
        return cls(sum(lam), FreeVector.basis(lam))


def _antipode(g) -> tuple[Fraction, tuple]:
    """``s(a_m) = -a_{-m}``, ``s(c) = c``, ``s(d) = -d`` as (sign, generator)."""
    if g == C:
        return Fraction(1), C
    if g == D:
        return Fraction(-1), D
    return Fraction(-1), ("a", -g[1])


def _dual_letter(F: FockModule, g, mu: FreeVector) -> FreeVector:
    # (g•μ)(v) = μ(s(g) v), evaluated on basis states of the matching energy
    sign, sg = _antipode(g)
    out: dict = {}
    if g == C or g == D:
        for lam, c in mu.items():
            value = sign * F.act(sg, lam)[lam]
            out[lam] = out.get(lam, 0) + c * value
        return FreeVector(out)
    for lam, c in mu.items():
        source = sum(lam) - g[1]
        if source < 0:
            continue
        for nu in F.basis(source):
            value = sign * F.act(sg, nu)[lam] if g[1] else Fraction(0)
            if value:
                out[nu] = out.get(nu, 0) + c * value
    return FreeVector(out)


def dual_fock_apply(F: FockModule, g, mu: FreeVector | GradedDualElement) -> FreeVector:
    """The s-twisted dual action ``(g•μ)(v) = μ(s(g) v)``; a word acts rightmost letter first."""
    if isinstance(mu, GradedDualElement):
        mu = mu.row
    for letter in reversed(_as_word(g)):
        if letter[0] == "a":
            # the target energy must lie inside the truncation
            for lam in mu:
                if sum(lam) - letter[1] > F.N:
                    raise TruncationOverflow(f"a_{letter[1]}• leaves energy range 0..{F.N}")
        mu = _dual_letter(F, letter, mu)
    return mu


def check_level(F: FockModule, m: int, n: int) -> Verdict:
    """``[a_m•, a_n•] = m δ_{m,-n} k`` on duals of energy up to ``N - |m| - |n|``."""
    if abs(m) > F.N or abs(n) > F.N:
        raise ValueError("mode indices exceed the truncation")
    expected = Fraction(m) * F.k if m + n == 0 else Fraction(0)
    top = F.N - abs(m) - abs(n)
    for e in range(top + 1):
        for lam in F.basis(e):
            mu = FreeVector.basis(lam)
            lhs = (dual_fock_apply(F, [("a", m), ("a", n)], mu)
                   - dual_fock_apply(F, [("a", n), ("a", m)], mu))
            if lhs != expected * mu:
                return Verdict.fail("level", m=m, n=n, dual=lam, got=lhs, expected=expected * mu)
    return Verdict.ok("level", m=m, n=n, k=F.k, value=expected, max_energy=top)


def _raising_monomials(degree: int) -> list[tuple]:
    """Normal-ordered words in a_j (j > 0) of total degree ``degree``."""
    return [tuple(("a", p) for p in reversed(lam)) for lam in partitions(degree)]


@dataclass
class RestrictionReport:
    annihilation: dict = field(default_factory=dict)
    sharp: dict = field(default_factory=dict)
    dual_spectrum: list = field(default_factory=list)
    dual_direction: str = ""
    fock_spectrum: list = field(default_factory=list)
    fock_direction: str = ""
    graded_dimensions: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.annihilation.values()) and all(self.sharp.values()) and bool(self.dual_direction)

    def as_dict(self) -> dict:
        return {
            "annihilation": {n: bool(v) for n, v in self.annihilation.items()},
            "sharp": dict(self.sharp),
            "dual_spectrum": list(self.dual_spectrum),
            "dual_direction": self.dual_direction,
            "fock_spectrum": list(self.fock_spectrum),
            "fock_direction": self.fock_direction,
            "graded_dimensions": list(self.graded_dimensions),
        }


def _direction(values: list) -> str:
    # values listed by increasing energy
    if all(a < b for a, b in zip(values, values[1:])):
        return "bounded below"
    if all(a > b for a, b in zip(values, values[1:])):
        return "bounded above"
    return ""


def restriction_energy_check(F: FockModule, n_max: int) -> RestrictionReport:
    """Energy bookkeeping for the positive-energy restriction of the graded dual.

    For each energy ``n``: raising words of degree ``n+1 .. n_max+1`` kill every
    energy-``n`` dual functional, while ``a_1^n`` does not kill the dual of ``y_1^n``.
    Also records the d-spectra of the dual and of the module and the graded dimensions.
    """
    if not 0 <= n_max <= F.N:
        raise ValueError("n_max must lie in 0..N")
    report = RestrictionReport()
    for n in range(n_max + 1):
        verdict = Verdict.ok("annihilation", energy=n)
        for degree in range(n + 1, n_max + 2):
            for word in _raising_monomials(degree):
                for lam in F.basis(n):
                    image = dual_fock_apply(F, word, FreeVector.basis(lam))
                    if image:
                        verdict = Verdict.fail("annihilation", energy=n, word=format_word(word), dual=lam)
                        break
                if not verdict:
                    break
            if not verdict:
                break
        report.annihilation[n] = verdict
        ones = (1,) * n
        report.sharp[n] = bool(dual_fock_apply(F, (("a", 1),) * n, FreeVector.basis(ones)))
    spectrum = []
    for n in range(n_max + 1):
        values = set()
        for lam in F.basis(n):
            mu = FreeVector.basis(lam)
            image = dual_fock_apply(F, D, mu)
            values.add(image[lam] if image == image[lam] * mu else None)
        if len(values) != 1 or None in values:
            raise RuntimeError(f"d does not act diagonally on energy {n}")
        spectrum.append(values.pop())
    report.dual_spectrum = spectrum
    report.dual_direction = _direction(spectrum)
    report.fock_spectrum = [F.act(D, partitions(n)[0])[partitions(n)[0]] for n in range(n_max + 1)]
    report.fock_direction = _direction(report.fock_spectrum)
    report.graded_dimensions = F.graded_dimensions(n_max)
    return report


def dual_closure(F: FockModule, mu: FreeVector | GradedDualElement, cap: int = 50):
    """Locally finite closure of a dual functional under the U_≥ generators a_1..a_N, c, d."""
    if isinstance(mu, GradedDualElement):
        mu = mu.row
    gens = [("a", j) for j in range(1, F.N + 1)] + [C, D]
    return locally_finite_closure([lambda v, g=g: dual_fock_apply(F, g, v) for g in gens], mu, cap)


# --- quasi-normality witness --------------------------------------------------------

def oscillator_quasi_normal_witness(word, degree: int | None = None) -> QuasiNormalWitness:
    """PBW basis of ``(U_<)_{(n)}`` for the lowering degree ``n`` of a normal-ordered word.

    Certifies ``(U_<)_{(n)} U_≥ = U_≥ (U_<)_{(n)}`` by straightening the products of
    each witness monomial with the U_≥ generators ``c, d, a_1 .. a_{n+1}`` in both
    normal orders; modes above ``n`` commute with every witness monomial.
    """
    word = _as_word(word)
    if not is_normal(word):
        raise ValueError(f"{format_word(word)} is not normal ordered")
    n = _lowering_degree(word)
    if degree is None:
        degree = n
    if degree < n:
        raise ValueError(f"degree bound {degree} exceeded by the lowering degree {n}")
    witness = [tuple(("a", -p) for p in reversed(lam)) for e in range(degree + 1) for lam in partitions(e)]
    generators = [C, D] + [("a", j) for j in range(1, degree + 2)]
    left_into_right = right_into_left = True
    for w in witness:
        for g in generators:
            # U_≥ (U_<)_(n) ⊆ (U_<)_(n) U_≥
            for term in straighten_word(FreeVector.basis((g,) + w), "normal"):
                left_into_right &= _lowering_degree(term) <= degree
            # (U_<)_(n) U_≥ ⊆ U_≥ (U_<)_(n)
            for term in straighten_word(FreeVector.basis(w + (g,)), "raising_first"):
                right_into_left &= _lowering_degree(term) <= degree
    lowering = tuple(g for g in word if g[0] == "a" and g[1] < 0)
    certificate = {
        "degree": degree,
        "witness_size": len(witness),
        "contains_lowering_part": lowering in witness,
        "generators_checked": [format_word((g,)) for g in generators],
        "U>=U<_in_U<U>=": left_into_right,
        "U<U>=_in_U>=U<": right_into_left,
    }
    return QuasiNormalWitness([format_word(w) for w in witness], certificate,
                              left_into_right and right_into_left and lowering in witness)
