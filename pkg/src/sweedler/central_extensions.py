"""Central-extension cocycles as regularized traces of curvature.

Sections send Lie algebra labels to :class:`BandOperator` s acting on
span{x^n}.  The curvature ``μ(v)μ(w) − μ(w)μ(v) − μ([v,w])`` has a finitely
supported diagonal, and its trace is the cocycle value.

Sign conventions: the curvature order above is fixed.  Under it the
Virasoro family gives ``+(m^3 - m)/6`` while the Heisenberg and loop
families give ``−k`` and ``−m κ(ξ,ψ)``; raw values are reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from .band import BandOperator, Poly, tau_trace
from .coalgebra import Coalgebra
from .exact import FreeVector, LinMap, as_rational, linear_combination
from .measuring import MeasuringCoalgebra, PolynomialAlgebra, check_measures_coalgebra
from .verdict import Verdict

__all__ = [
    "shift_operator",
    "witt_operator",
    "beta_functional",
    "beta_coalgebra",
    "alpha_coalgebra",
    "alpha_measuring",
    "check_alpha_measuring",
    "LieAlgebraFD",
    "sl2",
    "sl2_standard_representation",
    "killing_form",
    "ExtensionScheme",
    "heisenberg_scheme",
    "virasoro_scheme",
    "loop_scheme",
    "curvature_operator",
    "cocycle",
    "SIGN_NOTE",
]

SIGN_NOTE = ("curvature order mu(v)mu(w) - mu(w)mu(v) - mu([v,w]); heisenberg and loop "
             "values carry sign -1 relative to k*delta and m*delta*kappa, virasoro matches "
             "(m^3-m)/6 with bracket [T_a,T_b] = (b-a)T_{a+b}")


def shift_operator(i: int) -> BandOperator:
    """``x^n -> x^(n+i)``, zero when ``n + i < 0``."""
    return BandOperator({i: 1}, max(0, -i))


def witt_operator(i: int) -> BandOperator:
    """``x^n -> n x^(n+i)``, zero when ``n + i < 0`` (the field ``x^(i+1) d/dx``)."""
    return BandOperator({i: Poly.n()}, max(0, -i))


def beta_functional(k: int) -> BandOperator:
    """Taylor coefficient at 0: ``x^n -> δ_{n,k} x^0``."""
    return BandOperator.finite({k: {-k: 1}})


def beta_coalgebra(j_max: int) -> Coalgebra:
    """Span of β_0..β_jmax with ``Δβ_j = Σ_k β_k ⊗ β_{j-k}``, ``ε(β_j) = δ_{j,0}``."""
    basis = [f"beta{j}" for j in range(j_max + 1)]
    delta = {f"beta{j}": [(f"beta{k}", f"beta{j - k}", 1) for k in range(j + 1)]
             for j in range(j_max + 1)}
    return Coalgebra(basis, delta, {"beta0": 1}, f"beta<={j_max}")


def _alpha(i: int) -> str:
    return "alpha0" if i == 0 else f"alpha{i}"


def alpha_coalgebra(i_max: int, broken: bool = False) -> Coalgebra:
    """Span of α^0, α^-1..α^-imax and β_0..β_(imax-1).

    ``Δα^-i = α^-i ⊗ 1 + Σ_{k<i} β_k ⊗ α^(-i+k)``; ``broken`` drops the β-sum.
    """
    basis = [_alpha(-i) for i in range(i_max + 1)] + [f"beta{k}" for k in range(max(i_max, 1))]
    delta = {"alpha0": [("alpha0", "alpha0", 1)]}
    for i in range(1, i_max + 1):
        terms = [(_alpha(-i), "alpha0", 1)]
        if not broken:
            terms += [(f"beta{k}", _alpha(-i + k), 1) for k in range(i)]
        delta[_alpha(-i)] = terms
    for j in range(max(i_max, 1)):
        delta[f"beta{j}"] = [(f"beta{k}", f"beta{j - k}", 1) for k in range(j + 1)]
    return Coalgebra(basis, delta, {"alpha0": 1, "beta0": 1}, f"alpha<={i_max}")


def alpha_measuring(i_max: int, broken: bool = False, probe_degree: int = 12) -> MeasuringCoalgebra:
    C = alpha_coalgebra(i_max, broken)
    phi = {}
    for c in C.basis:
        if c.startswith("alpha"):
            phi[c] = shift_operator(int(c[len("alpha"):]))
        else:
            phi[c] = beta_functional(int(c[len("beta"):]))
    A = PolynomialAlgebra(probe_degree)
    return MeasuringCoalgebra(C, A, A, phi)


def check_alpha_measuring(i_max: int, deg_max: int, broken: bool = False) -> Verdict:
    """Measuring identity for every α^-i, i <= i_max, on all pairs x^a, x^b with a, b <= deg_max."""
    MC = alpha_measuring(i_max, broken, deg_max)
    C = MC.coalgebra
    A = MC.source
    for i in range(i_max + 1):
        c = _alpha(-i)
        for a in range(deg_max + 1):
            for b in range(deg_max + 1):
                lhs = MC.apply(c, A.mul(a, b))
                rhs = linear_combination((k, A.mul(MC.apply(l, a), MC.apply(r, b)))
                                         for l, r, k in C.delta[c])
                if lhs != rhs:
                    return Verdict.fail("alpha measuring", i=i, a=a, b=b, lhs=lhs, rhs=rhs)
    unit = check_measures_coalgebra(MC, generators=[])
    if not unit:
        return unit
    return Verdict.ok("alpha measuring", i_max=i_max, deg_max=deg_max)


# --- finite-dimensional Lie algebras ----------------------------------------

class LieAlgebraFD:
    """Lie algebra from structure constants ``bracket[(a, b)] = FreeVector``."""

    def __init__(self, basis: Sequence[Hashable], bracket: Mapping, name: str | None = None):
        self.basis = tuple(basis)
        known = set(self.basis)
        br = {}
        for (a, b), v in bracket.items():
            v = v if isinstance(v, FreeVector) else FreeVector(v)
            if a not in known or b not in known or any(k not in known for k in v):
                raise ValueError(f"bracket [{a!r},{b!r}] leaves the basis")
            br[(a, b)] = v
        # fill antisymmetric partners
        for (a, b), v in list(br.items()):
            if (b, a) not in br:
                br[(b, a)] = -v
        self._bracket = {k: v for k, v in br.items() if v}
        self.name = name

    def __repr__(self) -> str:
        return f"LieAlgebraFD({self.name or ''}, dim={len(self.basis)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebraFD):
            return NotImplemented
        return self.basis == other.basis and self._bracket == other._bracket

    __hash__ = None

    def bracket(self, u, v) -> FreeVector:
        u = u if isinstance(u, FreeVector) else FreeVector.basis(u)
        v = v if isinstance(v, FreeVector) else FreeVector.basis(v)
        return linear_combination((a * b, self._bracket.get((x, y), FreeVector()))
                                  for x, a in u.items() for y, b in v.items())

    def structure_constants(self) -> dict:
        return dict(self._bracket)

    def check_axioms(self) -> Verdict:
        for a in self.basis:
            for b in self.basis:
                if self.bracket(a, b) != -self.bracket(b, a):
                    return Verdict.fail("antisymmetry", a=a, b=b)
                for c in self.basis:
                    j = (self.bracket(a, self.bracket(b, c)) + self.bracket(b, self.bracket(c, a))
                         + self.bracket(c, self.bracket(a, b)))
                    if j:
                        return Verdict.fail("jacobi", a=a, b=b, c=c)
        return Verdict.ok("lie algebra", dimension=len(self.basis))

    def ad(self, x) -> LinMap:
        return LinMap.from_function(self.basis, self.basis, lambda b: self.bracket(x, b))


def sl2() -> LieAlgebraFD:
    return LieAlgebraFD(["e", "h", "f"],
                        {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}},
                        "sl2")


def sl2_standard_representation() -> dict:
    """2×2 matrices of e, h, f."""
    F = Fraction
    return {"e": ((F(0), F(1)), (F(0), F(0))),
            "h": ((F(1), F(0)), (F(0), F(-1))),
            "f": ((F(0), F(0)), (F(1), F(0)))}


def killing_form(L: LieAlgebraFD, xi, psi) -> Fraction:
    """``trace(ad ξ ∘ ad ψ)``."""
    return (L.ad(xi) @ L.ad(psi)).trace()


# --- extension schemes --------------------------------------------------------

@dataclass
class ExtensionScheme:
    """Section ``mu`` into band operators plus the bracket on labels."""

    name: str
    mu: Callable[[Hashable], BandOperator]
    bracket: Callable[[Hashable, Hashable], Mapping]
    overrides: dict = field(default_factory=dict)

    def section(self, label) -> BandOperator:
        if label in self.overrides:
            return self.overrides[label]
        return self.mu(label)

    def section_of(self, combo: Mapping) -> BandOperator | None:
        total = None
        for label, c in combo.items():
            term = self.section(label) * as_rational(c)
            total = term if total is None else total + term
        return total

    def with_sections(self, overrides: Mapping) -> "ExtensionScheme":
        """Same scheme with ``mu`` replaced on the given labels."""
        return ExtensionScheme(self.name, self.mu, self.bracket, {**self.overrides, **overrides})

    def curvature(self, v, w) -> BandOperator:
        return curvature_operator(self, v, w)

    def cocycle(self, v, w) -> Fraction:
        return tau_trace(self.curvature(v, w))


def heisenberg_scheme() -> ExtensionScheme:
    """Labels are integers k (for α^k); the bracket is zero."""
    return ExtensionScheme("heisenberg", shift_operator, lambda v, w: {})


def virasoro_scheme() -> ExtensionScheme:
    """Labels are integers m (for T_m); ``[T_a, T_b] = (b − a) T_{a+b}``."""
    def bracket(a, b):
        return {a + b: b - a} if b != a else {}
    return ExtensionScheme("virasoro", witt_operator, bracket)


def loop_scheme(L: LieAlgebraFD, rep: Mapping) -> ExtensionScheme:
    """Labels ``(m, ξ)`` for ``x^m ξ``; ``μ(x^m ξ) = shift(m) ⊗ ρ(ξ)``."""
    def mu(label):
        m, xi = label
        return shift_operator(m).tensor(rep[xi])

    def bracket(u, v):
        (m, xi), (n, psi) = u, v
        return {(m + n, z): c for z, c in L.bracket(xi, psi).items()}

    return ExtensionScheme(f"loop({L.name})", mu, bracket)


def curvature_operator(scheme: ExtensionScheme, v, w) -> BandOperator:
    """``μ(v)μ(w) − μ(w)μ(v) − μ([v, w])``."""
    a, b = scheme.section(v), scheme.section(w)
    omega = (a @ b) - (b @ a)
    br = scheme.section_of(scheme.bracket(v, w))
    if br is not None:
        omega = omega - br
    return omega


_HEISENBERG = heisenberg_scheme()
_VIRASORO = virasoro_scheme()


def cocycle(family: str, v, w, lie: LieAlgebraFD | None = None, rep: Mapping | None = None) -> Fraction:
    """Cocycle value for ``heisenberg`` / ``virasoro`` (integer labels) or ``loop``.

    For ``loop``, ``v = (m, ξ)`` and ``w = (n, ψ)``.  Without ``rep`` the value is
    ``τ(Ω(shift m, shift n)) · κ(ξ, ψ)``; with ``rep`` it is the full trace of the
    matrix-coefficient curvature (trace form of ``rep`` in place of κ).
    """
    if family == "heisenberg":
        return _HEISENBERG.cocycle(int(v), int(w))
    if family == "virasoro":
        return _VIRASORO.cocycle(int(v), int(w))
    if family in ("loop", "loop-sl2"):
        L = lie or sl2()
        (m, xi), (n, psi) = v, w
        if rep is not None:
            return loop_scheme(L, rep).cocycle((m, xi), (n, psi))
        return _HEISENBERG.cocycle(m, n) * killing_form(L, xi, psi)
    raise ValueError(f"unknown cocycle family {family!r}")

