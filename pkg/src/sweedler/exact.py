"""Exact scalars, sparse vectors, linear maps and row reduction over Q.

Scalars are :class:`fractions.Fraction`.  Vectors are finite sparse maps
from hashable, mutually comparable labels to nonzero rationals.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Callable, Hashable, Iterable, Iterator, Mapping

Rational = Fraction

__all__ = [
    "Rational",
    "as_rational",
    "FreeVector",
    "LinMap",
    "Span",
    "label_key",
    "rank",
    "kernel",
    "linear_combination",
]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to Fraction; reject floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def label_key(label):
    # total order across heterogeneous label types, stable between runs
    if isinstance(label, tuple):
        return (2, tuple(label_key(x) for x in label))
    if isinstance(label, bool):
        return (0, int(label))
    if isinstance(label, (int, Fraction)):
        return (0, label)
    return (1, str(label))


class FreeVector(Mapping):
    """Immutable sparse vector ``label -> Fraction`` with no stored zeros."""

    __slots__ = ("_data", "_hash")

    def __init__(self, entries=None):
        data = {}
        if entries is not None:
            items = entries.items() if isinstance(entries, Mapping) else entries
            for label, c in items:
                c = as_rational(c)
                if c:
                    total = data.get(label, 0) + c
                    if total:
                        data[label] = total
                    else:
                        data.pop(label, None)
        self._data = data
        self._hash = None

    @classmethod
    def basis(cls, label) -> "FreeVector":
        return cls({label: 1})

    @classmethod
    def _raw(cls, data: dict) -> "FreeVector":
        v = cls.__new__(cls)
        v._data = data
        v._hash = None
        return v

    def __getitem__(self, label) -> Fraction:
        return self._data.get(label, Fraction(0))

    def __contains__(self, label) -> bool:
        return label in self._data

    def __iter__(self) -> Iterator:
        return iter(sorted(self._data, key=label_key))

    def __len__(self) -> int:
        return len(self._data)

    def __bool__(self) -> bool:
        return bool(self._data)

    def items(self):
        return [(k, self._data[k]) for k in self]

    def support(self) -> list:
        return list(self)

    def __add__(self, other: "FreeVector") -> "FreeVector":
        if not isinstance(other, FreeVector):
            return NotImplemented
        data = dict(self._data)
        for k, c in other._data.items():
            s = data.get(k, 0) + c
            if s:
                data[k] = s
            else:
                data.pop(k, None)
        return FreeVector._raw(data)

    def __neg__(self) -> "FreeVector":
        return FreeVector._raw({k: -c for k, c in self._data.items()})

    def __sub__(self, other: "FreeVector") -> "FreeVector":
        if not isinstance(other, FreeVector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar) -> "FreeVector":
        s = as_rational(scalar)
        if not s:
            return FreeVector()
        return FreeVector._raw({k: c * s for k, c in self._data.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, FreeVector):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self == FreeVector(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._data:
            return "FreeVector(0)"
        body = ", ".join(f"{k!r}: {c}" for k, c in self.items())
        return f"FreeVector({{{body}}})"

    def map_labels(self, f: Callable) -> "FreeVector":
        return FreeVector((f(k), c) for k, c in self._data.items())

    def dot(self, other: Mapping) -> Fraction:
        small, big = (self, other) if len(self) <= len(other) else (other, self)
        return sum((c * big[k] for k, c in small.items() if k in big), Fraction(0))

    def leading(self):
        """Largest label in the support and its coefficient."""
        k = max(self._data, key=label_key)
        return k, self._data[k]


def linear_combination(terms: Iterable[tuple[Fraction, FreeVector]]) -> FreeVector:
    data: dict = {}
    for s, v in terms:
        if not s:
            continue
        for k, c in v._data.items():
            t = data.get(k, 0) + s * c
            if t:
                data[k] = t
            else:
                data.pop(k, None)
    return FreeVector._raw(data)


class LinMap:
    """Linear map given by its columns on a finite basis of the domain."""

    def __init__(self, domain: Iterable[Hashable], codomain: Iterable[Hashable],
                 columns: Mapping[Hashable, FreeVector | Mapping] | None = None):
        self.domain = tuple(domain)
        self.codomain = tuple(codomain)
        cod = set(self.codomain)
        cols = {}
        for label, col in (columns or {}).items():
            if label not in self.domain:
                raise ValueError(f"column {label!r} is not a domain label")
            col = col if isinstance(col, FreeVector) else FreeVector(col)
            bad = [k for k in col if k not in cod]
            if bad:
                raise ValueError(f"column {label!r} leaves the codomain at {bad[0]!r}")
            if col:
                cols[label] = col
        self.columns = cols

    @classmethod
    def identity(cls, basis) -> "LinMap":
        basis = tuple(basis)
        return cls(basis, basis, {b: FreeVector.basis(b) for b in basis})

    @classmethod
    def from_function(cls, domain, codomain, f: Callable[[Hashable], FreeVector]) -> "LinMap":
        return cls(domain, codomain, {b: f(b) for b in domain})

    def column(self, label) -> FreeVector:
        return self.columns.get(label, FreeVector())

    def __call__(self, v: FreeVector) -> FreeVector:
        return linear_combination((c, self.column(k)) for k, c in v.items())

    apply = __call__

    def __matmul__(self, other: "LinMap") -> "LinMap":
        if set(other.codomain) - set(self.domain):
            raise ValueError("codomain of the right factor is not the domain of the left")
        return LinMap(other.domain, self.codomain,
                      {b: self(other.column(b)) for b in other.domain})

    def __add__(self, other: "LinMap") -> "LinMap":
        return LinMap(self.domain, self.codomain,
                      {b: self.column(b) + other.column(b) for b in self.domain})

    def __sub__(self, other: "LinMap") -> "LinMap":
        return self + other * -1

    def __mul__(self, s) -> "LinMap":
        return LinMap(self.domain, self.codomain, {b: c * s for b, c in self.columns.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinMap):
            return NotImplemented
        return (set(self.domain) == set(other.domain)
                and all(self.column(b) == other.column(b) for b in self.domain))

    def __hash__(self):
        return hash(frozenset(self.columns.items()))

    def __repr__(self) -> str:
        return f"LinMap({len(self.domain)}->{len(self.codomain)}, {self.columns!r})"

    def trace(self) -> Fraction:
        return sum((self.column(b)[b] for b in self.domain), Fraction(0))

    def transpose(self) -> "LinMap":
        cols: dict = {}
        for b, col in self.columns.items():
            for k, c in col.items():
                cols.setdefault(k, {})[b] = c
        return LinMap(self.codomain, self.domain, cols)


class Span:
    """Incrementally row-reduced span of sparse vectors.

    Pivots are the largest labels (under :func:`label_key`) of the stored
    rows; every stored row has a zero coefficient at every other pivot.
    """

    def __init__(self, vectors: Iterable[FreeVector] = ()):
        self._rows: dict = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def dimension(self) -> int:
        return len(self._rows)

    def reduce(self, v: FreeVector) -> FreeVector:
        """Remainder of ``v`` modulo the span (zero iff ``v`` lies in it)."""
        data = dict(v._data)
        for p, row in self._rows.items():
            c = data.get(p)
            if c:
                for k, rc in row._data.items():
                    t = data.get(k, 0) - c * rc
                    if t:
                        data[k] = t
                    else:
                        data.pop(k, None)
        return FreeVector._raw(data)

    def __contains__(self, v: FreeVector) -> bool:
        return not self.reduce(v)

    def add(self, v: FreeVector) -> bool:
        """Insert ``v``; returns True when it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        p, c = r.leading()
        r = r * (1 / c)
        for q, row in list(self._rows.items()):
            cq = row[p]
            if cq:
                self._rows[q] = row - r * cq
        self._rows[p] = r
        return True

    def basis(self) -> list[FreeVector]:
        return [self._rows[p] for p in sorted(self._rows, key=label_key)]

    def pivots(self) -> list:
        return sorted(self._rows, key=label_key)

    def coordinates(self, v: FreeVector) -> dict | None:
        """Coefficients of ``v`` in :meth:`basis` order keyed by pivot, or None."""
        if v not in self:
            return None
        return {p: v[p] for p in self.pivots() if v[p]}

    def issubset(self, other: "Span") -> bool:
        return all(r in other for r in self._rows.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Span):
            return NotImplemented
        return len(self) == len(other) and self.issubset(other)

    __hash__ = None


def rank(vectors: Iterable[FreeVector]) -> int:
    return Span(vectors).dimension


def kernel(domain: Iterable[Hashable], image: Callable[[Hashable], FreeVector]) -> list[FreeVector]:
    """Basis of the kernel of the linear map with ``b -> image(b)`` on ``domain``."""
    # image labels are tagged 1 so they are eliminated as pivots before domain labels
    span = Span()
    for b in domain:
        aug = image(b).map_labels(lambda k: (1, k)) + FreeVector({(0, b): 1})
        span.add(aug)
    out = []
    for row in span.basis():
        p, _ = row.leading()
        if p[0] == 0:
            out.append(row.map_labels(lambda k: k[1]))
    return out
