"""Finite duals, finite-group quasi-normality, twisted dual actions and restriction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import networkx as nx

from .coalgebra import Coalgebra, Comodule, restrict_comodule
from .exact import FreeVector, LinMap, Span, as_rational
from .verdict import Verdict

__all__ = [
    "NonMonicModulus",
    "FiniteDualElement",
    "DualTensor",
    "fd_from_recurrence",
    "fd_evaluate",
    "fd_delta",
    "FiniteGroup",
    "GModule",
    "symmetric_group",
    "regular_representation",
    "Transversal",
    "double_coset_common_transversal",
    "QuasiNormalWitness",
    "quasi_normal_witness",
    "dual_module_action",
    "contragredient",
    "function_coalgebra",
    "dual_coalgebra",
    "dual_regular_comodule",
    "trivial_character",
    "cycle_notation",
    "dual_basis",
    "restrict_comodule",
    "NotLocallyFinite",
    "locally_finite_closure",
]


# --- finite dual of Q[x] ----------------------------------------------------------

class NonMonicModulus(ValueError):
    pass


@dataclass(frozen=True)
class FiniteDualElement:
    """Functional on Q[x] vanishing on the ideal (p).

    ``modulus`` holds the coefficients of the monic ``p`` low degree first;
    ``initial`` the values on ``1, x, ..., x^(deg p - 1)``.
    """

    modulus: tuple[Fraction, ...]
    initial: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    def __call__(self, n: int) -> Fraction:
        return fd_evaluate(self, n)

    def sequence(self, length: int) -> list[Fraction]:
        d = self.degree
        seq = list(self.initial[:length])
        tail = self.modulus[:-1]
        while len(seq) < length:
            seq.append(-sum((c * seq[len(seq) - d + i] for i, c in enumerate(tail)), Fraction(0)))
        return seq

    def vanishes_on_ideal(self, shifts: int = 10) -> bool:
        """``α(x^s p) = 0`` for ``s < shifts``."""
        seq = self.sequence(shifts + self.degree)
        return all(sum((c * seq[s + i] for i, c in enumerate(self.modulus)), Fraction(0)) == 0
                   for s in range(shifts))

    def is_multiplicative(self, bound: int | None = None) -> bool:
        """``α(1) = 1`` and ``α(x^(a+b)) = α(x^a) α(x^b)`` for ``a, b <= bound``."""
        bound = 2 * self.degree + 2 if bound is None else bound
        seq = self.sequence(2 * bound + 1)
        return seq[0] == 1 and all(seq[a + b] == seq[a] * seq[b]
                                   for a in range(bound + 1) for b in range(bound + 1))

    def reduce(self, n: int) -> list[Fraction]:
        """Coordinates of ``x^n`` modulo p in the basis ``1, ..., x^(d-1)``."""
        return [e(n) for e in dual_basis(self.modulus)]


def fd_from_recurrence(modulus: Sequence, initial: Sequence) -> FiniteDualElement:
    """Functional with ``α(x^n)`` the sequence with characteristic polynomial ``modulus``.

    ``modulus`` is given low degree first, e.g. ``[-1, -1, 1]`` for x^2 - x - 1.
    """
    p = [as_rational(c) for c in modulus]
    while p and not p[-1]:
        p.pop()
    if not p or p[-1] != 1:
        raise NonMonicModulus(f"modulus {list(modulus)} is not monic")
    init = tuple(as_rational(c) for c in initial)
    if len(init) != len(p) - 1:
        raise ValueError(f"need {len(p) - 1} initial values, got {len(init)}")
    return FiniteDualElement(tuple(p), init)


def fd_evaluate(alpha: FiniteDualElement, n: int) -> Fraction:
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n < alpha.degree:
        return alpha.initial[n]
    return alpha.sequence(n + 1)[n]


def dual_basis(modulus: Sequence[Fraction]) -> list[FiniteDualElement]:
    d = len(modulus) - 1
    return [FiniteDualElement(tuple(modulus), tuple(Fraction(int(i == j)) for j in range(d)))
            for i in range(d)]


@dataclass(frozen=True)
class DualTensor:
    """``Σ_ij matrix[i][j] e_i ⊗ e_j`` over the dual basis of Q[x]/(p)."""

    basis: tuple[FiniteDualElement, ...]
    matrix: tuple[tuple[Fraction, ...], ...]

    def pairing(self, a: int, b: int) -> Fraction:
        ea = [e(a) for e in self.basis]
        eb = [e(b) for e in self.basis]
        return sum((self.matrix[i][j] * ea[i] * eb[j]
                    for i in range(len(ea)) for j in range(len(eb))), Fraction(0))

    def terms(self) -> list[tuple[Fraction, FiniteDualElement, FiniteDualElement]]:
        return [(c, self.basis[i], self.basis[j])
                for i, row in enumerate(self.matrix) for j, c in enumerate(row) if c]


def fd_delta(alpha: FiniteDualElement) -> DualTensor:
    """Comultiplication dual to multiplication in Q[x]/(p)."""
    d = alpha.degree
    seq = alpha.sequence(2 * d)
    return DualTensor(tuple(dual_basis(alpha.modulus)),
                      tuple(tuple(seq[i + j] for j in range(d)) for i in range(d)))


# --- finite groups ------------------------------------------------------------------

class FiniteGroup:
    """Finite group from a multiplication table ``{(a, b): ab}``."""

    def __init__(self, elements: Sequence[Hashable], table: Mapping, name: str | None = None):
        self.elements = tuple(elements)
        self.table = dict(table)
        self.name = name
        verdict = self.check_axioms()
        if not verdict:
            raise ValueError(f"not a group: {verdict.check} {verdict.witness}")

    def mul(self, a, b):
        return self.table[(a, b)]

    @cached_property
    def identity(self):
        for e in self.elements:
            if all(self.table[(e, x)] == x and self.table[(x, e)] == x for x in self.elements):
                return e
        raise ValueError("no identity element")

    @cached_property
    def _inverses(self) -> dict:
        e = self.identity
        return {a: next(b for b in self.elements if self.table[(a, b)] == e) for a in self.elements}

    def inverse(self, a):
        return self._inverses[a]

    def order(self) -> int:
        return len(self.elements)

    def check_axioms(self) -> Verdict:
        els = set(self.elements)
        for a in self.elements:
            for b in self.elements:
                if self.table.get((a, b)) not in els:
                    return Verdict.fail("closure", a=a, b=b)
        for a, b, c in itertools.product(self.elements, repeat=3):
            if self.table[(self.table[(a, b)], c)] != self.table[(a, self.table[(b, c)])]:
                return Verdict.fail("associativity", a=a, b=b, c=c)
        try:
            e = self.identity
        except ValueError:
            return Verdict.fail("identity")
        for a in self.elements:
            if not any(self.table[(a, b)] == e for b in self.elements):
                return Verdict.fail("inverse", a=a)
        return Verdict.ok("group", order=len(self.elements))

    def generated(self, gens: Iterable) -> frozenset:
        """Subgroup generated by ``gens``."""
        sub = {self.identity}
        frontier = list(gens)
        for g in frontier:
            if g not in self.table and g not in set(self.elements):
                raise KeyError(f"unknown element {g!r}")
        while frontier:
            g = frontier.pop()
            if g in sub:
                continue
            sub.add(g)
            for h in list(sub):
                for x in (self.mul(g, h), self.mul(h, g)):
                    if x not in sub:
                        frontier.append(x)
        return frozenset(sub)

    def is_subgroup(self, K: Iterable) -> bool:
        K = set(K)
        return (self.identity in K and all(self.mul(a, b) in K for a in K for b in K)
                and all(self.inverse(a) in K for a in K))

    def subgroups(self) -> list[frozenset]:
        """All subgroups generated by at most two elements (all subgroups for S3, S4)."""
        found = {self.generated([])}
        for a in self.elements:
            for b in self.elements:
                found.add(self.generated([a, b]))
        return sorted(found, key=lambda s: (len(s), sorted(map(str, s))))

    def sorted_elements(self, subset: Iterable) -> list:
        order = {e: i for i, e in enumerate(self.elements)}
        return sorted(subset, key=order.__getitem__)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or ''}, order={len(self.elements)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.elements == other.elements and self.table == other.table

    __hash__ = None


def cycle_notation(perm: Sequence[int]) -> str:
    """Label a permutation of ``0..n-1`` by its cycles on ``1..n`` (``e`` for identity)."""
    seen = set()
    parts = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        j = perm[start]
        while j != start:
            cycle.append(j)
            seen.add(j)
            j = perm[j]
        parts.append("(" + "".join(str(i + 1) for i in cycle) + ")")
    return "".join(parts) or "e"


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on cycle-notation labels, ``(gh)(i) = g(h(i))``."""
    perms = sorted(itertools.permutations(range(n)), key=lambda p: (cycle_notation(p) != "e", p))
    labels = {p: cycle_notation(p) for p in perms}
    table = {}
    for g in perms:
        for h in perms:
            table[(labels[g], labels[h])] = labels[tuple(g[h[i]] for i in range(n))]
    return FiniteGroup([labels[p] for p in perms], table, f"S{n}")


class GModule:
    """Representation ``rho[g]`` of a finite group on a finite basis."""

    def __init__(self, group: FiniteGroup, basis: Sequence[Hashable], rho: Mapping[Hashable, LinMap],
                 name: str | None = None):
        self.group = group
        self.basis = tuple(basis)
        self.rho = dict(rho)
        self.name = name

    def check_axioms(self) -> Verdict:
        G = self.group
        if self.rho[G.identity] != LinMap.identity(self.basis):
            return Verdict.fail("identity")
        for g in G.elements:
            for h in G.elements:
                if self.rho[G.mul(g, h)] != self.rho[g] @ self.rho[h]:
                    return Verdict.fail("multiplicativity", g=g, h=h)
        return Verdict.ok("gmodule", dimension=len(self.basis))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GModule):
            return NotImplemented
        return self.group == other.group and self.basis == other.basis and self.rho == other.rho

    __hash__ = None

    def restrict(self, K: Iterable) -> "GModule":
        """The same space as a module over the subgroup ``K`` (same group object, fewer elements)."""
        return GModule(self.group, self.basis, {k: self.rho[k] for k in K}, f"{self.name}|K")


def regular_representation(G: FiniteGroup) -> GModule:
    rho = {g: LinMap(G.elements, G.elements, {h: {G.mul(g, h): 1} for h in G.elements})
           for g in G.elements}
    return GModule(G, G.elements, rho, f"regular({G.name})")


@dataclass(frozen=True)
class Transversal:
    representatives: tuple
    double_coset: frozenset
    left_cosets: tuple[frozenset, ...]
    right_cosets: tuple[frozenset, ...]


def _check_subgroup(G: FiniteGroup, K: Iterable) -> frozenset:
    K = frozenset(K)
    if not K or not G.is_subgroup(K):
        raise ValueError("K is not a subgroup")
    return K


def double_coset_common_transversal(G: FiniteGroup, K: Iterable, g) -> Transversal:
    """Representatives ``g_i`` with ``KgK = ⊔ g_i K = ⊔ K g_i``.

    A perfect matching between the left and right cosets inside ``KgK``
    (adjacent when they intersect) picks one element from each matched pair.
    """
    K = _check_subgroup(G, K)
    kgk = frozenset(G.mul(G.mul(a, g), b) for a in K for b in K)
    left = sorted({frozenset(G.mul(x, k) for k in K) for x in kgk}, key=lambda s: sorted(map(str, s)))
    right = sorted({frozenset(G.mul(k, x) for k in K) for x in kgk}, key=lambda s: sorted(map(str, s)))
    graph = nx.Graph()
    lnodes = [("L", i) for i in range(len(left))]
    graph.add_nodes_from(lnodes, bipartite=0)
    graph.add_nodes_from((("R", j) for j in range(len(right))), bipartite=1)
    for i, L in enumerate(left):
        for j, R in enumerate(right):
            if L & R:
                graph.add_edge(("L", i), ("R", j))
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=lnodes)
    if len(left) != len(right) or any(node not in matching for node in lnodes):
        raise RuntimeError("no perfect matching between left and right cosets")
    reps = []
    for i, L in enumerate(left):
        j = matching[("L", i)][1]
        reps.append(G.sorted_elements(L & right[j])[0])
    reps = tuple(G.sorted_elements(reps))
    _verify_tiling(G, K, kgk, reps)
    return Transversal(reps, kgk, tuple(left), tuple(right))


def _verify_tiling(G, K, kgk, reps):
    lefts = [frozenset(G.mul(r, k) for k in K) for r in reps]
    rights = [frozenset(G.mul(k, r) for k in K) for r in reps]
    for cosets in (lefts, rights):
        if sum(len(c) for c in cosets) != len(kgk) or frozenset().union(*cosets) != kgk:
            raise RuntimeError("representatives do not tile the double coset")


@dataclass
class QuasiNormalWitness:
    witness: list
    certificate: dict = field(default_factory=dict)
    verified: bool = True


def quasi_normal_witness(context: str, *args, **kwargs) -> QuasiNormalWitness:
    """``context`` is ``"group"`` (args G, K, g) or ``"oscillator"`` (args word, degree)."""
    if context == "group":
        return _group_quasi_normal(*args, **kwargs)
    if context == "oscillator":
        from .positive_energy import oscillator_quasi_normal_witness
        return oscillator_quasi_normal_witness(*args, **kwargs)
    raise ValueError(f"unknown quasi-normality context {context!r}")


def _group_quasi_normal(G: FiniteGroup, K: Iterable, g) -> QuasiNormalWitness:
    K = _check_subgroup(G, K)
    t = double_coset_common_transversal(G, K, g)
    # spans inside the group algebra QG
    both = Span(FreeVector.basis(G.mul(G.mul(a, g), b)) for a in K for b in K)
    left = Span(FreeVector.basis(G.mul(k, r)) for r in t.representatives for k in K)
    right = Span(FreeVector.basis(G.mul(r, k)) for r in t.representatives for k in K)
    ok = both == left and both == right
    cert = {"dim_BaB": both.dimension, "dim_sum_Ba_i": left.dimension,
            "dim_sum_a_iB": right.dimension, "group_algebra_dim": G.order(),
            "double_coset_size": len(t.double_coset)}
    return QuasiNormalWitness(list(t.representatives), cert, ok)


# --- dual actions and restriction ----------------------------------------------------

def dual_module_action(M: GModule, g, mu: FreeVector) -> FreeVector:
    """``(g•μ)(m) = μ(g^-1 m)`` with μ in dual-basis coordinates."""
    inv = M.rho[M.group.inverse(g)]
    return FreeVector((b, mu.dot(inv.column(b))) for b in M.basis)


def contragredient(M: GModule, g) -> LinMap:
    """Matrix of the contragredient action: transpose of ``rho(g^-1)``."""
    return M.rho[M.group.inverse(g)].transpose()


def function_coalgebra(G: FiniteGroup, K: Iterable | None = None) -> Coalgebra:
    """Dual of the group algebra QK: ``Δδ_k = Σ_{ab=k} δ_a ⊗ δ_b``."""
    K = G.sorted_elements(G.elements if K is None else K)
    basis = [("delta", k) for k in K]
    delta = {("delta", k): [] for k in K}
    for a in K:
        for b in K:
            delta[("delta", G.mul(a, b))].append((("delta", a), ("delta", b), 1))
    return Coalgebra(basis, delta, {("delta", G.identity): 1}, f"(QK)* in {G.name}")


def dual_coalgebra(A) -> Coalgebra:
    """Full dual of a finite-dimensional algebra: ``Δf_c = Σ_{ab ∋ c} f_a ⊗ f_b``, ``ε(f_c) = 1_c``."""
    delta: dict = {("dual", c): [] for c in A.basis}
    for (a, b), v in A.mult.items():
        for c, k in v.items():
            delta[("dual", c)].append((("dual", a), ("dual", b), k))
    return Coalgebra([("dual", c) for c in A.basis], delta,
                     {("dual", c): k for c, k in A.unit.items()}, f"{A.name}*")


def dual_regular_comodule(G: FiniteGroup, K: Iterable) -> Comodule:
    """Dual of the regular representation of G as a comodule over (QK)*.

    ``Δμ = Σ_k δ_k ⊗ (k^-1 • μ)``, i.e. δ_k acts by ``μ -> μ(k ·)``.
    """
    K = G.sorted_elements(K)
    C = function_coalgebra(G, K)
    M = regular_representation(G)
    basis = [("mu", h) for h in G.elements]
    delta = {}
    for h in G.elements:
        terms = []
        for k in K:
            image = dual_module_action(M, G.inverse(k), FreeVector.basis(h))
            terms += [(("delta", k), ("mu", x), c) for x, c in image.items()]
        delta[("mu", h)] = terms
    return Comodule(C, basis, delta, f"regular({G.name})* over (QK)*")


def trivial_character(G: FiniteGroup, K: Iterable) -> FreeVector:
    return FreeVector((("delta", k), 1) for k in K)


@dataclass(frozen=True)
class NotLocallyFinite:
    """Closure exceeded ``cap`` dimensions."""

    cap: int

    def __bool__(self) -> bool:
        return False


def locally_finite_closure(action: Iterable[Callable[[FreeVector], FreeVector]], v: FreeVector,
                           cap: int) -> list[FreeVector] | NotLocallyFinite:
    """Smallest subspace containing ``v`` stable under every operator in ``action``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    ops = list(action)
    span = Span()
    queue = [v] if span.add(v) else []
    while queue:
        u = queue.pop(0)
        for op in ops:
            w = op(u)
            if span.add(w):
                if span.dimension > cap:
                    return NotLocallyFinite(cap)
                queue.append(w)
    return span.basis()
