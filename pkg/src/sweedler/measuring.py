"""Measuring coalgebras and measuring comodules.

Operators are anything callable on a :class:`FreeVector` (``LinMap`` for
finite algebras, ``BandOperator`` for span{x^n}).  Measuring is checked on
caller-supplied generator pairs only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .band import BandOperator, Poly
from .coalgebra import Coalgebra, Comodule
from .exact import FreeVector, LinMap, Span, linear_combination
from .verdict import Verdict

__all__ = [
    "Algebra",
    "PolynomialAlgebra",
    "Module",
    "MeasuringCoalgebra",
    "MeasuringComodule",
    "check_measures_coalgebra",
    "check_measures_comodule",
    "check_transpose_intertwines",
    "build_standard_coalgebra",
    "build_inner_comodule",
    "difference_measuring",
    "cyclic_shift",
    "standard_measuring",
    "STANDARD_MEASURINGS",
    "operator_product",
    "DEFAULT_PROBE_DEGREE",
]

DEFAULT_PROBE_DEGREE = 12


def _vec(x) -> FreeVector:
    return x if isinstance(x, FreeVector) else FreeVector.basis(x)


class Algebra:
    """Finite-dimensional associative unital algebra from structure constants."""

    def __init__(self, basis: Sequence[Hashable], mult: Mapping, unit, name: str | None = None):
        self.basis = tuple(basis)
        known = set(self.basis)
        self.mult = {}
        for (a, b), v in mult.items():
            v = v if isinstance(v, FreeVector) else FreeVector(v)
            if a not in known or b not in known or any(k not in known for k in v):
                raise ValueError(f"product {a!r}*{b!r} leaves the basis")
            if v:
                self.mult[(a, b)] = v
        self.unit = _vec(unit)
        self.name = name

    def __repr__(self) -> str:
        return f"Algebra({self.name or ''}, dim={len(self.basis)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.basis == other.basis and self.mult == other.mult and self.unit == other.unit

    __hash__ = None

    def mul(self, u, v) -> FreeVector:
        u, v = _vec(u), _vec(v)
        return linear_combination((a * b, self.mult.get((x, y), FreeVector()))
                                  for x, a in u.items() for y, b in v.items())

    def generators(self) -> list[FreeVector]:
        return [FreeVector.basis(b) for b in self.basis]

    def left_multiplication(self, a) -> LinMap:
        return LinMap.from_function(self.basis, self.basis, lambda b: self.mul(a, b))

    def right_multiplication(self, a) -> LinMap:
        return LinMap.from_function(self.basis, self.basis, lambda b: self.mul(b, a))

    def check_axioms(self) -> Verdict:
        for a in self.basis:
            for b in self.basis:
                ab = self.mul(a, b)
                for c in self.basis:
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)):
                        return Verdict.fail("associativity", a=a, b=b, c=c)
            ea = FreeVector.basis(a)
            if self.mul(self.unit, a) != ea or self.mul(a, self.unit) != ea:
                return Verdict.fail("unit", a=a)
        return Verdict.ok("algebra", dimension=len(self.basis))

    def is_commutative(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a) for a in self.basis for b in self.basis)

    # -- built-in algebras --------------------------------------------------

    @classmethod
    def matrix_units(cls, n: int, keep=None, name=None) -> "Algebra":
        """Span of the matrix units ``e_ij`` selected by ``keep(i, j)``."""
        keep = keep or (lambda i, j: True)
        basis = [f"e{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1) if keep(i, j)]
        mult = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    a, b, c = f"e{i}{j}", f"e{j}{k}", f"e{i}{k}"
                    if a in basis and b in basis:
                        mult[(a, b)] = {c: 1}
        unit = FreeVector({f"e{i}{i}": 1 for i in range(1, n + 1)})
        return cls(basis, mult, unit, name or f"M{n}")

    @classmethod
    def upper_triangular(cls, n: int = 2) -> "Algebra":
        return cls.matrix_units(n, lambda i, j: i <= j, f"upper{n}")

    @classmethod
    def diagonal(cls, n: int = 2) -> "Algebra":
        return cls.matrix_units(n, lambda i, j: i == j, f"diag{n}")

    @classmethod
    def group_algebra(cls, group) -> "Algebra":
        mult = {(a, b): {group.mul(a, b): 1} for a in group.elements for b in group.elements}
        return cls(group.elements, mult, group.identity, f"QG({group.name or ''})")

    @classmethod
    def cyclic_group_algebra(cls, n: int) -> "Algebra":
        basis = [f"g{i}" for i in range(n)]
        mult = {(f"g{i}", f"g{j}"): {f"g{(i + j) % n}": 1} for i in range(n) for j in range(n)}
        return cls(basis, mult, "g0", f"Q[Z/{n}]")

    @classmethod
    def functions_on_points(cls, n: int) -> "Algebra":
        """Pointwise algebra Q^n on idempotents ``p0..p{n-1}``."""
        basis = [f"p{i}" for i in range(n)]
        mult = {(b, b): {b: 1} for b in basis}
        return cls(basis, mult, FreeVector({b: 1 for b in basis}), f"Q^{n}")


class PolynomialAlgebra:
    """The graded algebra span{x^n}; elements are vectors over integer degrees."""

    name = "Q[x]"
    unit = FreeVector({0: 1})

    def __init__(self, probe_degree: int = DEFAULT_PROBE_DEGREE):
        self.probe_degree = probe_degree

    def mul(self, u, v) -> FreeVector:
        u, v = _vec(u), _vec(v)
        return FreeVector((a + b, x * y) for a, x in u.items() for b, y in v.items())

    def generators(self) -> list[FreeVector]:
        return [FreeVector.basis(1)]

    def probes(self, degree: int | None = None) -> list[FreeVector]:
        d = self.probe_degree if degree is None else degree
        return [FreeVector.basis(n) for n in range(d + 1)]

    def __repr__(self) -> str:
        return f"PolynomialAlgebra(probe_degree={self.probe_degree})"


class Module:
    """Left module over ``algebra`` given by an action ``act(a, m)``."""

    def __init__(self, algebra, act: Callable[[FreeVector, FreeVector], FreeVector],
                 basis: Sequence[Hashable] | None = None, name: str | None = None):
        self.algebra = algebra
        self._act = act
        self.basis = None if basis is None else tuple(basis)
        self.name = name

    def act(self, a, m) -> FreeVector:
        return self._act(_vec(a), _vec(m))

    @classmethod
    def regular(cls, algebra) -> "Module":
        basis = getattr(algebra, "basis", None)
        return cls(algebra, algebra.mul, basis, f"{getattr(algebra, 'name', '')} (regular)")

    def pullback(self, hom: Callable[[FreeVector], FreeVector], source) -> "Module":
        """Module over ``source`` acting through the algebra map ``hom``."""
        return Module(source, lambda a, m: self.act(hom(a), m), self.basis, f"pullback of {self.name}")

    def probes(self) -> list[FreeVector]:
        if self.basis is not None:
            return [FreeVector.basis(b) for b in self.basis]
        return self.algebra.probes()


@dataclass
class MeasuringCoalgebra:
    """Coalgebra ``C`` with a measuring map ``phi`` into Hom(source, target)."""

    coalgebra: Coalgebra
    source: object
    target: object
    phi: Mapping[Hashable, Callable[[FreeVector], FreeVector]]

    def apply(self, c: Hashable, a) -> FreeVector:
        return self.phi[c](_vec(a))


@dataclass
class MeasuringComodule:
    """Comodule ``D`` over a measuring coalgebra with ``psi: D -> Hom(M, N)``."""

    comodule: Comodule
    measuring: MeasuringCoalgebra
    source_module: Module
    target_module: Module
    psi: Mapping[Hashable, Callable[[FreeVector], FreeVector]]

    def apply(self, d: Hashable, m) -> FreeVector:
        return self.psi[d](_vec(m))


def check_measures_coalgebra(MC: MeasuringCoalgebra,
                             generators: Iterable | None = None) -> Verdict:
    """``φc(aa') = Σ φ(c_left)(a) φ(c_right)(a')`` on generator pairs, and the unit law."""
    A, B, C = MC.source, MC.target, MC.coalgebra
    gens = [_vec(a) for a in (A.generators() if generators is None else generators)]
    for c in C.basis:
        for a in gens:
            left_images = {l: MC.apply(l, a) for l, _, _ in C.delta[c]}
            for a2 in gens:
                lhs = MC.apply(c, A.mul(a, a2))
                rhs = linear_combination((k, B.mul(left_images[l], MC.apply(r, a2)))
                                         for l, r, k in C.delta[c])
                if lhs != rhs:
                    return Verdict.fail("measuring", c=c, a=a, a2=a2, lhs=lhs, rhs=rhs)
        if MC.apply(c, A.unit) != B.unit * C.epsilon[c]:
            return Verdict.fail("unit", c=c, lhs=MC.apply(c, A.unit), rhs=B.unit * C.epsilon[c])
    return Verdict.ok("measuring coalgebra", pairs=len(gens) ** 2 * len(C.basis))


def check_measures_comodule(MD: MeasuringComodule, generators: Iterable | None = None,
                            probes: Iterable | None = None) -> Verdict:
    """``ψd(a·m) = Σ φ(d_coalg)(a) · ψ(d_comod)(m)`` on generators × probes."""
    MC = MD.measuring
    M, N = MD.source_module, MD.target_module
    gens = [_vec(a) for a in (MC.source.generators() if generators is None else generators)]
    probes = [_vec(m) for m in (M.probes() if probes is None else probes)]
    D = MD.comodule
    for d in D.basis:
        for a in gens:
            coalg_images = {c: MC.apply(c, a) for c, _, _ in D.delta[d]}
            for m in probes:
                lhs = MD.apply(d, M.act(a, m))
                rhs = linear_combination((k, N.act(coalg_images[c], MD.apply(e, m)))
                                         for c, e, k in D.delta[d])
                if lhs != rhs:
                    return Verdict.fail("measuring comodule", d=d, a=a, m=m, lhs=lhs, rhs=rhs)
    return Verdict.ok("measuring comodule", triples=len(D.basis) * len(gens) * len(probes))


def check_transpose_intertwines(MD: MeasuringComodule, generators: Iterable | None = None,
                                probes: Iterable | None = None) -> Verdict:
    """The transpose ``m -> (d -> ψd(m))`` is an A-module map into Hom(D, N).

    A acts on ``β ∈ Hom(D, N)`` by ``(a•β)(d) = Σ φ(d_coalg)(a) · β(d_comod)``.
    """
    MC = MD.measuring
    M, N = MD.source_module, MD.target_module
    D = MD.comodule
    gens = [_vec(a) for a in (MC.source.generators() if generators is None else generators)]
    probes = [_vec(m) for m in (M.probes() if probes is None else probes)]

    def transpose(m):
        return {d: MD.apply(d, m) for d in D.basis}

    for a in gens:
        for m in probes:
            beta = transpose(m)
            acted = {d: linear_combination((k, N.act(MC.apply(c, a), beta[e])) for c, e, k in D.delta[d])
                     for d in D.basis}
            direct = transpose(M.act(a, m))
            if acted != direct:
                return Verdict.fail("transpose", a=a, m=m)
    return Verdict.ok("transpose")


# --- standard constructions ------------------------------------------------

def build_standard_coalgebra(kind, lie=None) -> Coalgebra:
    """Coalgebras C0, C1, L ⊕ C0 (``"primitive"`` with ``lie``) and the difference coalgebra."""
    if kind == "C0":
        return Coalgebra(["g"], {"g": [("g", "g", 1)]}, {"g": 1}, "C0")
    if kind == "C1":
        return Coalgebra(["g", "gamma"],
                         {"g": [("g", "g", 1)], "gamma": [("g", "gamma", 1), ("gamma", "g", 1)]},
                         {"g": 1, "gamma": 0}, "C1")
    if kind == "primitive":
        if lie is None:
            raise ValueError("primitive coalgebra needs a Lie algebra")
        basis = ["g"] + list(lie.basis)
        delta = {"g": [("g", "g", 1)]}
        for x in lie.basis:
            delta[x] = [(x, "g", 1), ("g", x, 1)]
        return Coalgebra(basis, delta, {"g": 1}, f"{lie.name or 'L'}+C0")
    if kind == "difference":
        return Coalgebra(["K", "Kinv", "E"],
                         {"K": [("K", "K", 1)], "Kinv": [("Kinv", "Kinv", 1)],
                          "E": [("E", "K", 1), ("Kinv", "E", 1)]},
                         {"K": 1, "Kinv": 1, "E": 0}, "difference")
    raise ValueError(f"unknown standard coalgebra {kind!r}")


def difference_measuring(algebra: Algebra, automorphism: LinMap) -> MeasuringCoalgebra:
    """Difference coalgebra with ``φ(E) = φ(K) − φ(K^-1)`` for an automorphism ``φ(K)``."""
    inverse = _invert(automorphism)
    C = build_standard_coalgebra("difference")
    return MeasuringCoalgebra(C, algebra, algebra,
                              {"K": automorphism, "Kinv": inverse, "E": automorphism - inverse})


def cyclic_shift(n: int) -> LinMap:
    """Automorphism ``p_i -> p_{i+1 mod n}`` of the pointwise algebra Q^n."""
    basis = [f"p{i}" for i in range(n)]
    return LinMap(basis, basis, {f"p{i}": {f"p{(i + 1) % n}": 1} for i in range(n)})


STANDARD_MEASURINGS = ("C0", "C1", "C1-broken", "difference")


def standard_measuring(name: str) -> MeasuringCoalgebra:
    """Named worked examples.

    ``C0``: identity of the upper-triangular 2x2 matrices.
    ``C1``: ``g -> id``, ``gamma -> d/dx`` on span{x^n}.
    ``C1-broken``: ``gamma -> multiplication by x`` (not a derivation).
    ``difference``: cyclic shift of Q^3 and ``E -> K - K^-1``.
    """
    if name == "C0":
        A = Algebra.upper_triangular(2)
        return MeasuringCoalgebra(build_standard_coalgebra("C0"), A, A, {"g": LinMap.identity(A.basis)})
    if name in ("C1", "C1-broken"):
        A = PolynomialAlgebra()
        gamma = BandOperator({1: 1}, 0) if name == "C1-broken" else BandOperator({-1: Poly.n()}, 1)
        return MeasuringCoalgebra(build_standard_coalgebra("C1"), A, A,
                                  {"g": BandOperator({0: 1}, 0), "gamma": gamma})
    if name == "difference":
        return difference_measuring(Algebra.functions_on_points(3), cyclic_shift(3))
    raise ValueError(f"unknown standard measuring {name!r}")


def _invert(L: LinMap) -> LinMap:
    span = Span()
    for b in L.domain:
        span.add(L.column(b).map_labels(lambda k: (1, k)) + FreeVector({(0, b): 1}))
    cols = {}
    for target in L.codomain:
        # remainder = e_target - Σ x_b (L e_b ⊕ e_b); its image part vanishes iff L x = e_target
        remainder = span.reduce(FreeVector({(1, target): 1}))
        if any(k[0] == 1 for k in remainder):
            raise ValueError("operator is not invertible")
        cols[target] = FreeVector((k[1], -c) for k, c in remainder.items())
    return LinMap(L.codomain, L.domain, cols)


def build_inner_comodule(A: Algebra, module: Module | None = None) -> MeasuringComodule:
    """A as a comodule over I_A ⊕ C0 via ``Δa = g⊗a + ι_a⊗1``; ψ(a) = left multiplication."""
    M = module or Module.regular(A)
    ads = {a: LinMap.from_function(A.basis, A.basis,
                                   lambda b, a=a: A.mul(a, b) - A.mul(b, a)) for a in A.basis}
    # basis of I_A: independent inner derivations, coordinates via flattened matrices
    flat = {a: FreeVector(((b, k), c) for b, col in ads[a].columns.items() for k, c in col.items())
            for a in A.basis}
    span = Span()
    chosen = []
    for a in A.basis:
        if span.add(flat[a]):
            chosen.append(a)
    iota_labels = [f"iota_{a}" for a in chosen]
    coords = _coordinates(flat, chosen)
    C = Coalgebra(["g"] + iota_labels,
                  {"g": [("g", "g", 1)], **{i: [(i, "g", 1), ("g", i, 1)] for i in iota_labels}},
                  {"g": 1}, f"I({A.name})+C0")
    phi = {"g": LinMap.identity(A.basis)}
    for a, i in zip(chosen, iota_labels):
        phi[i] = ads[a]
    unit = A.unit
    delta = {}
    for a in A.basis:
        terms = [("g", a, 1)]
        for a0, c in coords[a].items():
            for u, cu in unit.items():
                terms.append((f"iota_{a0}", u, c * cu))
        delta[a] = terms
    D = Comodule(C, A.basis, delta, f"inner({A.name})")
    MC = MeasuringCoalgebra(C, A, A, phi)
    psi = {a: LinMap.from_function(M.basis, M.basis, lambda m, a=a: M.act(a, m)) for a in A.basis}
    return MeasuringComodule(D, MC, M, M, psi)


def _coordinates(flat: Mapping, chosen: list) -> dict:
    """Coordinates of every ``flat[a]`` in the basis ``flat[chosen]``."""
    out = {}
    for a, v in flat.items():
        span = Span()
        for j, b in enumerate(chosen):
            span.add(flat[b].map_labels(lambda k: (1, k)) + FreeVector({(0, j): 1}))
        r = span.reduce(v.map_labels(lambda k: (1, k)))
        if any(k[0] == 1 for k in r):
            raise ValueError("vector outside the chosen span")
        out[a] = {chosen[k[1]]: -c for k, c in r.items()}
    return out


def operator_product(first, second):
    """``first ∘ second`` for two operators of the same kind."""
    if isinstance(first, BandOperator) and isinstance(second, BandOperator):
        return first @ second
    if isinstance(first, LinMap) and isinstance(second, LinMap):
        return first @ second
    raise TypeError(f"cannot compose {type(first).__name__} with {type(second).__name__}")
