"""Finite-basis coalgebras and comodules.

Comultiplications are stored as ordered ``(left, right, coefficient)``
triples.  Functionals on a coalgebra always pair with the LEFT tensor
factor; the measuring checks apply the left factor to the first
multiplicand, so the two conventions agree everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .exact import FreeVector, Span, as_rational, kernel, linear_combination
from .verdict import Verdict

__all__ = [
    "Coalgebra",
    "Comodule",
    "check_coalgebra_axioms",
    "check_comodule_axioms",
    "dual_action",
    "convolution",
    "fd_closure",
    "is_subcomodule",
    "restrict_comodule",
]


def _terms(entries) -> tuple[tuple[Hashable, Hashable, Fraction], ...]:
    merged: dict = {}
    for l, r, c in entries:
        merged[(l, r)] = merged.get((l, r), 0) + as_rational(c)
    return tuple((l, r, c) for (l, r), c in merged.items() if c)


class Coalgebra:
    """Coalgebra on an ordered finite basis.

    ``delta[c]`` lists ``(left, right, coeff)``; ``epsilon[c]`` is the counit.
    Labels missing from either table have zero comultiplication/counit.
    """

    def __init__(self, basis: Sequence[Hashable],
                 delta: Mapping[Hashable, Iterable],
                 epsilon: Mapping[Hashable, object],
                 name: str | None = None):
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("duplicate basis labels")
        known = set(self.basis)
        self.delta = {}
        for c in self.basis:
            ts = _terms(delta.get(c, ()))
            for l, r, _ in ts:
                if l not in known or r not in known:
                    raise ValueError(f"comultiplication of {c!r} leaves the basis")
            self.delta[c] = ts
        unknown = set(delta) - known
        if unknown:
            raise ValueError(f"comultiplication given for unknown labels {sorted(map(str, unknown))}")
        self.epsilon = {c: as_rational(epsilon.get(c, 0)) for c in self.basis}
        self.name = name

    def __repr__(self) -> str:
        return f"Coalgebra({self.name or ''}, dim={len(self.basis)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coalgebra):
            return NotImplemented
        return (self.basis == other.basis and self.epsilon == other.epsilon
                and all(set(self.delta[c]) == set(other.delta[c]) for c in self.basis))

    __hash__ = None

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def comultiply(self, v: FreeVector | Hashable) -> FreeVector:
        """Δv as a vector over ``(left, right)`` labels."""
        if not isinstance(v, FreeVector):
            v = FreeVector.basis(v)
        return FreeVector(((l, r), a * c) for x, a in v.items() for l, r, c in self.delta[x])

    def counit(self, v: FreeVector | Hashable) -> Fraction:
        if not isinstance(v, FreeVector):
            return self.epsilon[v]
        return sum((a * self.epsilon[x] for x, a in v.items()), Fraction(0))

    def as_comodule(self) -> "Comodule":
        """The coalgebra as a (left) comodule over itself."""
        return Comodule(self, self.basis, {c: self.delta[c] for c in self.basis})

    def subcoalgebra_check(self, vectors: Iterable[FreeVector]) -> Verdict:
        """Whether the span of ``vectors`` satisfies Δ(F) ⊆ F⊗F."""
        vectors = list(vectors)
        F = Span(vectors)
        for v in vectors:
            dv = self.comultiply(v)
            # Δv ∈ F⊗F iff every left/right slice lies in F
            for x in self.basis:
                left_slice = FreeVector((r, c) for (l, r), c in dv.items() if l == x)
                right_slice = FreeVector((l, c) for (l, r), c in dv.items() if r == x)
                if left_slice not in F or right_slice not in F:
                    return Verdict.fail("subcoalgebra", element=v, slice_label=x)
        return Verdict.ok("subcoalgebra", dimension=F.dimension)


class Comodule:
    """Left comodule ``D -> C ⊗ D`` on an ordered finite basis."""

    def __init__(self, coalgebra: Coalgebra, basis: Sequence[Hashable],
                 delta: Mapping[Hashable, Iterable], name: str | None = None):
        self.coalgebra = coalgebra
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("duplicate basis labels")
        known = set(self.basis)
        cknown = set(coalgebra.basis)
        self.delta = {}
        for d in self.basis:
            ts = _terms(delta.get(d, ()))
            for c, e, _ in ts:
                if c not in cknown or e not in known:
                    raise ValueError(f"coaction of {d!r} leaves the bases")
            self.delta[d] = ts
        self.name = name

    def __repr__(self) -> str:
        return f"Comodule({self.name or ''}, dim={len(self.basis)}, over {self.coalgebra!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Comodule):
            return NotImplemented
        return (self.coalgebra == other.coalgebra and self.basis == other.basis
                and all(set(self.delta[d]) == set(other.delta[d]) for d in self.basis))

    __hash__ = None

    def coact(self, v: FreeVector | Hashable) -> FreeVector:
        if not isinstance(v, FreeVector):
            v = FreeVector.basis(v)
        return FreeVector(((c, e), a * k) for x, a in v.items() for c, e, k in self.delta[x])


def _expand_left(C: Coalgebra, t: FreeVector) -> FreeVector:
    # (Δ⊗1) on a two-tensor
    return FreeVector(((l, r, y), a * c) for (x, y), a in t.items() for l, r, c in C.delta[x])


def _expand_right(C: Coalgebra, t: FreeVector) -> FreeVector:
    return FreeVector(((x, l, r), a * c) for (x, y), a in t.items() for l, r, c in C.delta[y])


def check_coalgebra_axioms(C: Coalgebra) -> Verdict:
    """Coassociativity and both counit laws, basis label by basis label."""
    for c in C.basis:
        dc = C.comultiply(c)
        lhs = _expand_left(C, dc)
        rhs = _expand_right(C, dc)
        if lhs != rhs:
            return Verdict.fail("coassociativity", label=c, left=lhs, right=rhs)
        unit = FreeVector.basis(c)
        left_counit = FreeVector((r, a * C.epsilon[l]) for (l, r), a in dc.items())
        if left_counit != unit:
            return Verdict.fail("left counit", label=c, left=left_counit, right=unit)
        right_counit = FreeVector((l, a * C.epsilon[r]) for (l, r), a in dc.items())
        if right_counit != unit:
            return Verdict.fail("right counit", label=c, left=right_counit, right=unit)
    return Verdict.ok("coalgebra", dimension=C.dimension)


def check_comodule_axioms(D: Comodule) -> Verdict:
    C = D.coalgebra
    for d in D.basis:
        dd = D.coact(d)
        unit = FreeVector.basis(d)
        counit = FreeVector((e, a * C.epsilon[c]) for (c, e), a in dd.items())
        if counit != unit:
            return Verdict.fail("counit", label=d, left=counit, right=unit)
        lhs = _expand_left(C, dd)
        rhs = FreeVector(((c, l, r), a * k) for (c, e), a in dd.items() for l, r, k in D.delta[e])
        if lhs != rhs:
            return Verdict.fail("coassociativity", label=d, left=lhs, right=rhs)
    return Verdict.ok("comodule", dimension=len(D.basis))


def dual_action(f: Mapping, d: FreeVector | Hashable, D: Comodule | Coalgebra) -> FreeVector:
    """``f • d = Σ f(d_left) d_right`` for a functional ``f`` on the coalgebra.

    ``f`` maps coalgebra labels to scalars (dual-basis coordinates).
    """
    if isinstance(D, Coalgebra):
        D = D.as_comodule()
    if not isinstance(d, FreeVector):
        d = FreeVector.basis(d)
    return FreeVector((e, a * f.get(c, 0)) for (c, e), a in D.coact(d).items() if f.get(c, 0))


def convolution(C: Coalgebra, f: Mapping, g: Mapping) -> FreeVector:
    """The functional ``h`` with ``h • d = f • (g • d)`` for every comodule.

    ``h(c) = Σ g(c_left) f(c_right)``.
    """
    return FreeVector((c, sum((k * g.get(l, 0) * f.get(r, 0) for l, r, k in C.delta[c]), Fraction(0)))
                      for c in C.basis)


def _dual_basis(C: Coalgebra):
    return [{c: Fraction(1)} for c in C.basis]


def fd_closure(D: Comodule, d: FreeVector | Hashable) -> list[FreeVector]:
    """Basis of the smallest subcomodule containing ``d``.

    Span iteration under the action of the dual-basis functionals.
    """
    if not isinstance(d, FreeVector):
        d = FreeVector.basis(d)
    span = Span()
    queue = []
    if span.add(d):
        queue.append(d)
    functionals = _dual_basis(D.coalgebra)
    while queue:
        v = queue.pop()
        for f in functionals:
            u = dual_action(f, v, D)
            if span.add(u):
                queue.append(u)
    return span.basis()


def is_subcomodule(D: Comodule, vectors: Iterable[FreeVector]) -> bool:
    """Δ(S) ⊆ C⊗S, checked slice by slice on the coalgebra factor."""
    vectors = list(vectors)
    S = Span(vectors)
    for v in vectors:
        dv = D.coact(v)
        for c in D.coalgebra.basis:
            piece = FreeVector((e, a) for (x, e), a in dv.items() if x == c)
            if piece not in S:
                return False
    return True


def restrict_comodule(F: Iterable[FreeVector], D: Comodule) -> list[FreeVector]:
    """Basis of ``{d : Δd ∈ F⊗D}`` for a subcoalgebra ``F`` of D's coalgebra.

    Raises ValueError when ``F`` is not a subcoalgebra.
    """
    F = [v for v in F]
    C = D.coalgebra
    verdict = C.subcoalgebra_check(F)
    if not verdict:
        raise ValueError(f"not a subcoalgebra: {verdict.witness}")
    # functionals vanishing on F; Δd ∈ F⊗D iff q • d = 0 for all such q
    annihilator = kernel(C.basis, lambda c: FreeVector((i, v[c]) for i, v in enumerate(F)))
    return kernel(D.basis, lambda e: linear_combination(
        (Fraction(1), dual_action(dict(q.items()), e, D).map_labels(lambda x, j=j: (j, x)))
        for j, q in enumerate(annihilator)))

