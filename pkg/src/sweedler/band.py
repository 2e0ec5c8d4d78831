"""Exact band operators on span{x^n : n >= 0}.

A :class:`BandOperator` sends ``x^n`` to ``sum_k p_k(n) x^(n+k)`` once ``n``
reaches a generic threshold, and is given by a finite exception table
below it.  Coefficients are ``w x w`` rational matrices whose entries are
polynomials in ``n``; ``w = 1`` is the scalar case.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .exact import FreeVector, as_rational

__all__ = [
    "Poly",
    "BandOperator",
    "DivergentTrace",
    "band_apply",
    "band_compose",
    "tau_trace",
]


class DivergentTrace(ArithmeticError):
    """The diagonal of the operator is not finitely supported."""


class Poly:
    """Univariate polynomial in ``n`` with Fraction coefficients, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def n(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __call__(self, n) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            s = as_rational(other)
            return Poly([c * s for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "Poly":
        """The polynomial ``n -> p(n + k)``."""
        if not k or len(self.coeffs) <= 1:
            return self
        out = [Fraction(0)] * len(self.coeffs)
        for d, c in enumerate(self.coeffs):
            if c:
                for j in range(d + 1):
                    out[j] += c * comb(d, j) * Fraction(k) ** (d - j)
        return Poly(out)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"


# --- small dense matrices of scalars / polynomials ------------------------

def _mat_zero(w, zero):
    return tuple(tuple(zero for _ in range(w)) for _ in range(w))


def _mat_is_zero(m) -> bool:
    return not any(any(bool(x) for x in row) for row in m)


def _mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_scale(a, s):
    return tuple(tuple(x * s for x in row) for row in a)


def _mat_mul(a, b, zero):
    w = len(a)
    out = []
    for i in range(w):
        row = []
        for j in range(w):
            acc = zero
            for t in range(w):
                x = a[i][t]
                if x:
                    y = b[t][j]
                    if y:
                        acc = acc + x * y
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _mat_trace(a):
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def _coerce_scalar_mat(value, w):
    if isinstance(value, (tuple, list)):
        m = tuple(tuple(as_rational(x) for x in row) for row in value)
        if len(m) != w or any(len(r) != w for r in m):
            raise ValueError(f"expected a {w}x{w} coefficient")
        return m
    if w != 1:
        raise ValueError("scalar coefficient given for a matrix band operator")
    return ((as_rational(value),),)


def _coerce_poly_mat(value, w):
    if isinstance(value, Poly):
        if w != 1:
            raise ValueError("scalar polynomial given for a matrix band operator")
        return ((value,),)
    if isinstance(value, (tuple, list)) and value and isinstance(value[0], (tuple, list)):
        m = tuple(tuple(x if isinstance(x, Poly) else Poly.const(x) for x in row) for row in value)
        if len(m) != w or any(len(r) != w for r in m):
            raise ValueError(f"expected a {w}x{w} coefficient")
        return m
    if w != 1:
        raise ValueError("scalar coefficient given for a matrix band operator")
    return ((Poly.const(value),),)


def _eval_poly_mat(pm, n):
    return tuple(tuple(p(n) for p in row) for row in pm)


class BandOperator:
    """Linear operator on span{x^n} (tensored with Q^w) in band form.

    ``generic`` maps an offset ``k`` to a ``w x w`` matrix of :class:`Poly`;
    ``exceptions`` maps ``n < n_gen`` to ``{offset: w x w rational matrix}``.
    Images with negative exponent never occur: ``n_gen`` is raised until
    ``n + k >= 0`` for all generic offsets, and exception entries must land
    in degree >= 0.
    """

    __slots__ = ("w", "generic", "n_gen", "exceptions")

    def __init__(self, generic: Mapping | None = None, n_gen: int = 0,
                 exceptions: Mapping | None = None, w: int = 1):
        if w < 1:
            raise ValueError("coefficient ring size must be >= 1")
        self.w = w
        gen = {}
        for k, pm in (generic or {}).items():
            pm = _coerce_poly_mat(pm, w)
            if not _mat_is_zero(pm):
                gen[int(k)] = pm
        floor = max([0] + [-k for k in gen])
        if n_gen < floor:
            raise ValueError(f"generic threshold {n_gen} below {floor}")
        exc = {}
        for n, row in (exceptions or {}).items():
            n = int(n)
            if not 0 <= n < n_gen:
                raise ValueError(f"exception at n={n} outside [0, {n_gen})")
            clean = {}
            for k, m in row.items():
                m = _coerce_scalar_mat(m, w)
                if _mat_is_zero(m):
                    continue
                if n + k < 0:
                    raise ValueError(f"exception ({n}, {k}) lands below degree 0")
                clean[int(k)] = m
            if clean:
                exc[n] = clean
        self.generic = gen
        self.n_gen = int(n_gen)
        self.exceptions = exc

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, w: int = 1) -> "BandOperator":
        return cls(w=w)

    @classmethod
    def from_function(cls, f, n_gen: int, generic=None, w: int = 1) -> "BandOperator":
        """Band with the given generic part; exceptions read off ``f(n)`` for n < n_gen.

        ``f(n)`` returns ``{offset: coefficient}``.
        """
        return cls(generic, n_gen, {n: f(n) for n in range(n_gen)}, w)

    @classmethod
    def finite(cls, table: Mapping, w: int = 1) -> "BandOperator":
        """Finitely supported operator from ``{n: {offset: coeff}}``."""
        n_gen = max(table, default=-1) + 1
        return cls({}, n_gen, table, w)

    def tensor(self, mat) -> "BandOperator":
        """``self (x) mat`` for a scalar band operator and a ``w x w`` matrix."""
        if self.w != 1:
            raise ValueError("tensor expects a scalar band operator")
        m = _coerce_scalar_mat(mat, len(mat))
        w = len(m)
        gen = {k: tuple(tuple(pm[0][0] * x for x in row) for row in m)
               for k, pm in self.generic.items()}
        exc = {n: {k: _mat_scale(m, c[0][0]) for k, c in row.items()}
               for n, row in self.exceptions.items()}
        return BandOperator(gen, self.n_gen, exc, w)

    # -- evaluation --------------------------------------------------------

    @property
    def offsets(self) -> set[int]:
        ks = set(self.generic)
        for row in self.exceptions.values():
            ks.update(row)
        return ks

    def is_finitely_supported(self) -> bool:
        return not self.generic

    def block(self, n: int) -> dict:
        """``{offset: w x w matrix}`` describing the image of ``x^n``."""
        if n < 0:
            raise ValueError("degree must be nonnegative")
        if n < self.n_gen:
            return dict(self.exceptions.get(n, {}))
        out = {}
        for k, pm in self.generic.items():
            m = _eval_poly_mat(pm, n)
            if not _mat_is_zero(m):
                out[k] = m
        return out

    def apply(self, n: int, col: int | None = None) -> FreeVector:
        return band_apply(self, n, col)

    def __call__(self, v: FreeVector) -> FreeVector:
        """Apply to a vector over labels ``m`` (w == 1) or ``(m, i)``."""
        acc = FreeVector()
        for label, c in v.items():
            if self.w == 1:
                acc = acc + band_apply(self, label) * c
            else:
                m, i = label
                acc = acc + band_apply(self, m, i) * c
        return acc

    # -- algebra -----------------------------------------------------------

    def _check_w(self, other: "BandOperator"):
        if not isinstance(other, BandOperator):
            raise TypeError("expected a BandOperator")
        if other.w != self.w:
            raise ValueError(f"coefficient ring size mismatch: {self.w} vs {other.w}")

    def __add__(self, other: "BandOperator") -> "BandOperator":
        self._check_w(other)
        n_gen = max(self.n_gen, other.n_gen)
        gen = dict(self.generic)
        for k, pm in other.generic.items():
            gen[k] = _mat_add(gen[k], pm) if k in gen else pm
        exc = {}
        for n in range(n_gen):
            row = self.block(n)
            for k, m in other.block(n).items():
                row[k] = _mat_add(row[k], m) if k in row else m
            exc[n] = row
        return BandOperator(gen, n_gen, exc, self.w)

    def __mul__(self, s) -> "BandOperator":
        s = as_rational(s)
        gen = {k: _mat_scale(pm, s) for k, pm in self.generic.items()}
        exc = {n: {k: _mat_scale(m, s) for k, m in row.items()}
               for n, row in self.exceptions.items()}
        return BandOperator(gen, self.n_gen, exc, self.w)

    __rmul__ = __mul__

    def __neg__(self) -> "BandOperator":
        return self * -1

    def __sub__(self, other: "BandOperator") -> "BandOperator":
        return self + (-other)

    def __matmul__(self, other: "BandOperator") -> "BandOperator":
        return band_compose(self, other)

    def commutator(self, other: "BandOperator") -> "BandOperator":
        return band_compose(self, other) - band_compose(other, self)

    def normalized(self, n_gen: int) -> "BandOperator":
        """Same operator with the generic threshold raised to ``n_gen``."""
        if n_gen < self.n_gen:
            raise ValueError("threshold can only be raised")
        return BandOperator(self.generic, n_gen,
                            {n: self.block(n) for n in range(n_gen)}, self.w)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BandOperator):
            return NotImplemented
        if self.w != other.w or self.generic != other.generic:
            return False
        n_gen = max(self.n_gen, other.n_gen)
        return all(self.block(n) == other.block(n) for n in range(n_gen))

    def __hash__(self):
        return hash((self.w, frozenset(self.generic)))

    def is_zero(self) -> bool:
        return self == BandOperator.zero(self.w)

    def __repr__(self) -> str:
        def fmt(pm):
            if self.w == 1:
                return repr(pm[0][0])
            return repr(pm)
        gen = {k: fmt(pm) for k, pm in sorted(self.generic.items())}
        return f"BandOperator(w={self.w}, n_gen={self.n_gen}, generic={gen}, exceptions={self.exceptions})"

    def dense(self, degree: int, col_degree: int | None = None) -> list[list[Fraction]]:
        """Dense matrix of the operator on degrees ``0..col_degree`` -> ``0..degree``.

        Row/column index ``n*w + i``.  Entries mapping above ``degree`` are dropped.
        """
        cd = degree if col_degree is None else col_degree
        w = self.w
        mat = [[Fraction(0)] * ((cd + 1) * w) for _ in range((degree + 1) * w)]
        for n in range(cd + 1):
            for k, m in self.block(n).items():
                if n + k <= degree:
                    for i in range(w):
                        for j in range(w):
                            mat[(n + k) * w + i][n * w + j] += m[i][j]
        return mat


def band_apply(op: BandOperator, n: int, col: int | None = None) -> FreeVector:
    """Image of ``x^n`` (of ``x^n (x) e_col`` when ``w > 1``)."""
    blk = op.block(n)
    if op.w == 1:
        return FreeVector((n + k, m[0][0]) for k, m in blk.items())
    if col is None:
        raise ValueError("column index required for a matrix band operator")
    return FreeVector(((n + k, i), m[i][col]) for k, m in blk.items() for i in range(op.w))


def band_compose(f: BandOperator, g: BandOperator) -> BandOperator:
    """``f o g`` as an exact band operator."""
    f._check_w(g)
    w = f.w
    zero_p = Poly()
    n_gen = g.n_gen
    if g.generic:
        n_gen = max(n_gen, f.n_gen - min(g.generic))
    gen: dict = {}
    for k, qm in g.generic.items():
        for l, pm in f.generic.items():
            shifted = tuple(tuple(p.shift(k) for p in row) for row in pm)
            prod = _mat_mul(shifted, qm, zero_p)
            key = k + l
            gen[key] = _mat_add(gen[key], prod) if key in gen else prod
    exc = {}
    zero_f = Fraction(0)
    for n in range(n_gen):
        row: dict = {}
        for k, qm in g.block(n).items():
            for l, pm in f.block(n + k).items():
                prod = _mat_mul(pm, qm, zero_f)
                key = k + l
                row[key] = _mat_add(row[key], prod) if key in row else prod
        exc[n] = row
    return BandOperator(gen, n_gen, exc, w)


def tau_trace(op: BandOperator) -> Fraction:
    """Sum of the diagonal (matrix traces summed when ``w > 1``).

    Raises :class:`DivergentTrace` unless the generic offset-0 coefficient
    has identically vanishing trace.
    """
    p0 = op.generic.get(0)
    if p0 is not None and _mat_trace(p0):
        raise DivergentTrace("generic diagonal band is not identically zero")
    total = Fraction(0)
    for n in range(op.n_gen):
        m = op.exceptions.get(n, {}).get(0)
        if m is not None:
            total += _mat_trace(m)
    return total
