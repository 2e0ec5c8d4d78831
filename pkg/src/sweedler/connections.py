"""Koszul connections on free modules A^r over a polynomial algebra A = Q[u, v, ...].

Operators on A^r are linear differential operators with polynomial matrix
coefficients (:class:`DiffOperator`), so composition and curvature are
exact and symbolic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Sequence

from .coalgebra import Coalgebra, Comodule
from .exact import as_rational
from .verdict import Verdict

__all__ = [
    "MultiPoly",
    "DiffOperator",
    "KoszulData",
    "LooseConnection",
    "make_koszul_connection",
    "check_loose_connection",
    "curvature",
    "check_module_map",
    "curvature_formula",
    "monomials",
]


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables: exponent tuple -> Fraction."""

    __slots__ = ("nvars", "terms")

    def __init__(self, terms: Mapping | Iterable = (), nvars: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        data: dict = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            c = as_rational(c)
            if c:
                t = data.get(e, 0) + c
                if t:
                    data[e] = t
                else:
                    data.pop(e, None)
        if nvars is None:
            if not data:
                raise ValueError("nvars required for the zero polynomial")
            nvars = len(next(iter(data)))
        if any(len(e) != nvars for e in data):
            raise ValueError("exponent length mismatch")
        self.nvars = nvars
        self.terms = data

    @classmethod
    def const(cls, c, nvars: int) -> "MultiPoly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls({}, nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "MultiPoly":
        return cls({tuple(exps): c}, len(exps))

    @classmethod
    def var(cls, i: int, nvars: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls.monomial(e)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(out, self.nvars)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            s = as_rational(other)
            return MultiPoly({e: c * s for e, c in self.terms.items()}, self.nvars)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(out, self.nvars)

    __rmul__ = __mul__

    def derivative(self, i: int, times: int = 1) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i] >= times:
                f = 1
                for t in range(times):
                    f *= e[i] - t
                e2 = list(e)
                e2[i] -= times
                out[tuple(e2)] = c * f
        return MultiPoly(out, self.nvars)

    def partial(self, alpha: Sequence[int]) -> "MultiPoly":
        p = self
        for i, k in enumerate(alpha):
            if k:
                p = p.derivative(i, k)
        return p

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = "uvwxyz" if self.nvars <= 6 else [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0]))):
            mono = "*".join(names[i] + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def monomials(nvars: int, max_degree: int) -> list[MultiPoly]:
    """All monic monomials of total degree <= max_degree, by degree then lex."""
    out = []
    for d in range(max_degree + 1):
        exps = [e for e in itertools.product(range(d + 1), repeat=nvars) if sum(e) == d]
        for e in sorted(exps, reverse=True):
            out.append(MultiPoly.monomial(e))
    return out


# --- matrices of polynomials and module elements ---------------------------

def _mat_zero(r, nvars):
    return tuple(tuple(MultiPoly.zero(nvars) for _ in range(r)) for _ in range(r))


def _mat_identity(r, nvars):
    return tuple(tuple(MultiPoly.const(1 if i == j else 0, nvars) for j in range(r)) for i in range(r))


def _mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_mul(a, b):
    r = len(a)
    nv = a[0][0].nvars
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = MultiPoly.zero(nv)
            for t in range(r):
                if a[i][t] and b[t][j]:
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _mat_scale(a, s):
    return tuple(tuple(x * s for x in row) for row in a)


def _mat_is_zero(a) -> bool:
    return not any(any(bool(x) for x in row) for row in a)


def _mat_partial(a, alpha):
    return tuple(tuple(x.partial(alpha) for x in row) for row in a)


def _coerce_matrix(m, r, nvars):
    rows = tuple(tuple(x if isinstance(x, MultiPoly) else MultiPoly.const(x, nvars) for x in row)
                 for row in m)
    if len(rows) != r or any(len(row) != r for row in rows):
        raise ValueError(f"expected an {r}x{r} matrix")
    return rows


def basis_element(i: int, rank: int, nvars: int) -> tuple[MultiPoly, ...]:
    return tuple(MultiPoly.const(1 if j == i else 0, nvars) for j in range(rank))


def scale_element(a: MultiPoly, m: Sequence[MultiPoly]) -> tuple[MultiPoly, ...]:
    return tuple(a * x for x in m)


def add_elements(m1, m2) -> tuple[MultiPoly, ...]:
    return tuple(x + y for x, y in zip(m1, m2))


class DiffOperator:
    """``Σ_α C_α ∂^α`` on A^r with ``C_α`` an r×r matrix over A."""

    def __init__(self, terms: Mapping, rank: int, nvars: int):
        self.rank = rank
        self.nvars = nvars
        clean = {}
        for alpha, m in terms.items():
            alpha = tuple(alpha)
            if len(alpha) != nvars:
                raise ValueError("multi-index length mismatch")
            m = _coerce_matrix(m, rank, nvars)
            if not _mat_is_zero(m):
                clean[alpha] = m
        self.terms = clean

    @classmethod
    def multiplication(cls, matrix, nvars: int) -> "DiffOperator":
        r = len(matrix)
        return cls({(0,) * nvars: matrix}, r, nvars)

    @classmethod
    def scalar_multiplication(cls, a: MultiPoly, rank: int) -> "DiffOperator":
        nv = a.nvars
        m = tuple(tuple(a if i == j else MultiPoly.zero(nv) for j in range(rank)) for i in range(rank))
        return cls({(0,) * nv: m}, rank, nv)

    @classmethod
    def partial_derivative(cls, i: int, rank: int, nvars: int, times: int = 1) -> "DiffOperator":
        alpha = [0] * nvars
        alpha[i] = times
        return cls({tuple(alpha): _mat_identity(rank, nvars)}, rank, nvars)

    @property
    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=-1)

    def __call__(self, m: Sequence[MultiPoly]) -> tuple[MultiPoly, ...]:
        out = [MultiPoly.zero(self.nvars) for _ in range(self.rank)]
        for alpha, C in self.terms.items():
            dm = [x.partial(alpha) for x in m]
            for i in range(self.rank):
                for j in range(self.rank):
                    if C[i][j] and dm[j]:
                        out[i] = out[i] + C[i][j] * dm[j]
        return tuple(out)

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        terms = dict(self.terms)
        for a, m in other.terms.items():
            terms[a] = _mat_add(terms[a], m) if a in terms else m
        return DiffOperator(terms, self.rank, self.nvars)

    def __neg__(self) -> "DiffOperator":
        return DiffOperator({a: _mat_scale(m, -1) for a, m in self.terms.items()}, self.rank, self.nvars)

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return self + (-other)

    def left_multiply(self, a: MultiPoly) -> "DiffOperator":
        """The operator ``m -> a · self(m)``."""
        return DiffOperator({al: _mat_scale(m, a) for al, m in self.terms.items()}, self.rank, self.nvars)

    def __matmul__(self, other: "DiffOperator") -> "DiffOperator":
        # (A ∂^α)(B ∂^β) = Σ_{γ≤α} binom(α,γ) A (∂^γ B) ∂^{α-γ+β}
        terms: dict = {}
        for alpha, A in self.terms.items():
            for beta, B in other.terms.items():
                for gamma in itertools.product(*(range(a + 1) for a in alpha)):
                    coeff = 1
                    for a, g in zip(alpha, gamma):
                        coeff *= comb(a, g)
                    prod = _mat_scale(_mat_mul(A, _mat_partial(B, gamma)), coeff)
                    key = tuple(a - g + b for a, g, b in zip(alpha, gamma, beta))
                    terms[key] = _mat_add(terms[key], prod) if key in terms else prod
        return DiffOperator(terms, self.rank, self.nvars)

    def as_matrix(self):
        """The coefficient matrix of a zeroth-order operator."""
        if self.order > 0:
            raise ValueError("operator is not a multiplication operator")
        return self.terms.get((0,) * self.nvars, _mat_zero(self.rank, self.nvars))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"DiffOperator(rank={self.rank}, terms={self.terms})"


@dataclass
class KoszulData:
    """Connection matrices ``gamma[var]`` (r×r over Q[vars])."""

    variables: tuple[str, ...]
    rank: int
    gamma: dict = field(default_factory=dict)

    def __post_init__(self):
        self.variables = tuple(self.variables)
        nv = len(self.variables)
        g = {}
        for var in self.variables:
            m = self.gamma.get(var)
            g[var] = _mat_zero(self.rank, nv) if m is None else _coerce_matrix(m, self.rank, nv)
        extra = set(self.gamma) - set(self.variables)
        if extra:
            raise ValueError(f"connection matrices for unknown variables {sorted(extra)}")
        self.gamma = g

    @property
    def nvars(self) -> int:
        return len(self.variables)


class LooseConnection:
    """``∇_{∂v} = ops[v]`` on A^r, extended A-linearly to vector fields.

    The comodule D = V ⊕ A is recorded with basis ``nabla_<var>`` and the unit
    ``1``: ``Δ nabla_v = g⊗nabla_v + d_v⊗1`` and ``Δ1 = g⊗1`` over the
    coalgebra with grouplike ``g`` (acting as identity) and primitives ``d_v``
    (acting as ∂_v).
    """

    def __init__(self, variables: Sequence[str], rank: int, ops: Mapping[str, DiffOperator]):
        self.variables = tuple(variables)
        self.rank = rank
        self.ops = dict(ops)
        nv = len(self.variables)
        C = Coalgebra(["g"] + [f"d_{v}" for v in self.variables],
                      {"g": [("g", "g", 1)],
                       **{f"d_{v}": [("d_" + v, "g", 1), ("g", "d_" + v, 1)] for v in self.variables}},
                      {"g": 1}, "vector fields + C0")
        self.coalgebra = C
        self.comodule = Comodule(C, [f"nabla_{v}" for v in self.variables] + ["1"],
                                 {"1": [("g", "1", 1)],
                                  **{f"nabla_{v}": [("g", f"nabla_{v}", 1), (f"d_{v}", "1", 1)]
                                     for v in self.variables}},
                                 "V + A")
        self._nvars = nv

    @property
    def nvars(self) -> int:
        return self._nvars

    def index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r}") from None

    def nabla(self, field: Mapping[str, MultiPoly]) -> DiffOperator:
        """``∇_ξ`` for ``ξ = Σ field[v] ∂_v``."""
        total = DiffOperator({}, self.rank, self.nvars)
        for v, a in field.items():
            total = total + self.ops[v].left_multiply(a)
        return total

    def phi(self, label: str, a: MultiPoly) -> MultiPoly:
        """Measuring map on the coalgebra: g -> identity, d_v -> ∂_v."""
        if label == "g":
            return a
        return a.derivative(self.index(label[2:]))

    def psi(self, label: str) -> DiffOperator:
        if label == "1":
            return DiffOperator.scalar_multiplication(MultiPoly.const(1, self.nvars), self.rank)
        return self.ops[label[len("nabla_"):]]


def make_koszul_connection(data: KoszulData, variables: Sequence[str] | None = None) -> LooseConnection:
    """``∇_{∂v} = ∂_v + Γ_v``."""
    variables = tuple(variables or data.variables)
    if variables != data.variables:
        raise ValueError("variable list does not match the connection data")
    nv = data.nvars
    ops = {}
    for i, v in enumerate(variables):
        ops[v] = (DiffOperator.partial_derivative(i, data.rank, nv)
                  + DiffOperator.multiplication(data.gamma[v], nv))
    return LooseConnection(variables, data.rank, ops)


def check_loose_connection(conn: LooseConnection, probe_degree: int = 3) -> Verdict:
    """Leibniz rule through the comodule coaction, then A-linearity in the field slot."""
    nv, r = conn.nvars, conn.rank
    probes_a = monomials(nv, probe_degree)
    basis_m = [basis_element(i, r, nv) for i in range(r)]
    D = conn.comodule
    for label in D.basis:
        for a in probes_a:
            for i, m in enumerate(basis_m):
                lhs = conn.psi(label)(scale_element(a, m))
                rhs = tuple(MultiPoly.zero(nv) for _ in range(r))
                for c, e, k in D.delta[label]:
                    term = scale_element(conn.phi(c, a), conn.psi(e)(m))
                    rhs = add_elements(rhs, tuple(x * k for x in term))
                if lhs != rhs:
                    return Verdict.fail("leibniz", xi=label, a=a, m=f"e{i + 1}", lhs=lhs, rhs=rhs)
    for v in conn.variables:
        for b in probes_a:
            for i, m in enumerate(basis_m):
                scaled = conn.nabla({v: b})(m)
                expected = scale_element(b, conn.nabla({v: MultiPoly.const(1, nv)})(m))
                if scaled != expected:
                    return Verdict.fail("A-linearity", xi=v, a=b, m=f"e{i + 1}")
    return Verdict.ok("loose connection", probe_degree=probe_degree)


def curvature(conn: LooseConnection, xi: str, psi: str) -> DiffOperator:
    """``∇_ξ∇_ψ − ∇_ψ∇_ξ`` (coordinate fields commute, so no bracket term)."""
    a, b = conn.ops[_known(conn, xi)], conn.ops[_known(conn, psi)]
    return (a @ b) - (b @ a)


def _known(conn: LooseConnection, var: str) -> str:
    conn.index(var)
    return var


def curvature_formula(data: KoszulData, xi: str, psi: str):
    """``∂_ξ Γ_ψ − ∂_ψ Γ_ξ + [Γ_ξ, Γ_ψ]`` as a polynomial matrix."""
    i, j = data.variables.index(xi), data.variables.index(psi)
    gx, gp = data.gamma[xi], data.gamma[psi]
    dx = tuple(tuple(p.derivative(i) for p in row) for row in gp)
    dp = tuple(tuple(p.derivative(j) for p in row) for row in gx)
    comm = _mat_add(_mat_mul(gx, gp), _mat_scale(_mat_mul(gp, gx), -1))
    return _mat_add(_mat_add(dx, _mat_scale(dp, -1)), comm)


def check_module_map(op: DiffOperator, probe_degree: int = 3) -> Verdict:
    """``op(a·m) = a·op(m)`` for monomials ``a`` and basis elements ``m``."""
    nv, r = op.nvars, op.rank
    for a in monomials(nv, probe_degree):
        for i in range(r):
            m = basis_element(i, r, nv)
            lhs = op(scale_element(a, m))
            rhs = scale_element(a, op(m))
            if lhs != rhs:
                return Verdict.fail("module map", a=a, m=f"e{i + 1}", lhs=lhs, rhs=rhs)
    return Verdict.ok("module map", probe_degree=probe_degree)
