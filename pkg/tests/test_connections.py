import random

import pytest
import sympy
from hypothesis import given, strategies as st

from sweedler.connections import (DiffOperator, KoszulData, LooseConnection, MultiPoly, basis_element,
                                  check_loose_connection, check_module_map, curvature, curvature_formula,
                                  make_koszul_connection, monomials, scale_element)

U, V = sympy.symbols("u v")


def to_sympy(p: MultiPoly):
    return sum((sympy.Rational(c.numerator, c.denominator) * U ** e[0] * V ** e[1]
                for e, c in p.terms.items()), sympy.Integer(0))


def random_poly(rng, degree=2):
    return MultiPoly({m: rng.randint(-3, 3) for m in [(i, j) for i in range(degree + 1)
                                                       for j in range(degree + 1 - i)]}, 2)


def random_koszul(rng, rank=2):
    return KoszulData(("u", "v"), rank, {var: [[random_poly(rng) for _ in range(rank)] for _ in range(rank)]
                                         for var in ("u", "v")})


def sympy_gamma(data, var):
    return sympy.Matrix([[to_sympy(p) for p in row] for row in data.gamma[var]])


def sympy_curvature(data):
    """∂uΓ_v − ∂vΓ_u + [Γ_u, Γ_v], expanded directly in sympy."""
    Gu, Gv = sympy_gamma(data, "u"), sympy_gamma(data, "v")
    return (Gv.diff(U) - Gu.diff(V) + Gu * Gv - Gv * Gu).expand()


def sympy_nabla(data, var, m):
    G = sympy_gamma(data, var)
    sym = U if var == "u" else V
    return (m.diff(sym) + G * m).expand()


@pytest.mark.parametrize("seed", range(10))
def test_random_curvature_matches_oracle(seed):
    rng = random.Random(seed)
    data = random_koszul(rng)
    conn = make_koszul_connection(data)
    assert check_loose_connection(conn)
    omega = curvature(conn, "u", "v")
    assert omega.order <= 0
    expected = sympy_curvature(data)
    got = sympy.Matrix([[to_sympy(p) for p in row] for row in omega.as_matrix()])
    assert (got - expected).expand() == sympy.zeros(2, 2)
    got_formula = sympy.Matrix([[to_sympy(p) for p in row] for row in curvature_formula(data, "u", "v")])
    assert (got_formula - expected).expand() == sympy.zeros(2, 2)
    # also compare as operators on a random polynomial section
    m = tuple(random_poly(rng, 3) for _ in range(2))
    ms = sympy.Matrix([to_sympy(p) for p in m])
    direct = sympy_nabla(data, "u", sympy_nabla(data, "v", ms)) - sympy_nabla(data, "v", sympy_nabla(data, "u", ms))
    assert (sympy.Matrix([to_sympy(p) for p in omega(m)]) - direct).expand() == sympy.zeros(2, 1)
    assert check_module_map(omega)
    assert curvature(conn, "v", "u") == -omega


def test_zero_connection():
    conn = make_koszul_connection(KoszulData(("u", "v"), 2, {}))
    assert conn.ops["u"] == DiffOperator.partial_derivative(0, 2, 2)
    assert check_loose_connection(conn)
    assert curvature(conn, "u", "v").order == -1


def test_constant_nilpotent_connection():
    data = KoszulData(("u", "v"), 2, {"u": [[0, 1], [0, 0]]})
    conn = make_koszul_connection(data)
    v = MultiPoly.var(1, 2)
    zero = MultiPoly.zero(2)
    assert conn.ops["u"]((zero, v)) == (v, zero)


def test_constant_connections_give_commutator():
    data = KoszulData(("u", "v"), 2, {"u": [[0, 1], [0, 0]], "v": [[0, 0], [1, 0]]})
    omega = curvature(make_koszul_connection(data), "u", "v")
    one, zero = MultiPoly.const(1, 2), MultiPoly.zero(2)
    assert omega.as_matrix() == ((one, zero), (zero, -one))


def test_multiplication_by_a_is_module_action():
    conn = make_koszul_connection(KoszulData(("u", "v"), 2, {}))
    a = MultiPoly({(2, 0): 1}, 2)
    m = (MultiPoly.var(1, 2), MultiPoly.const(3, 2))
    op = DiffOperator.scalar_multiplication(a, 2)
    assert op(m) == scale_element(a, m)
    assert conn.psi("1")(m) == m


def test_second_derivative_fails_leibniz():
    conn = make_koszul_connection(KoszulData(("u", "v"), 2, {}))
    bad = LooseConnection(conn.variables, 2,
                          {"u": DiffOperator.partial_derivative(0, 2, 2, times=2), "v": conn.ops["v"]})
    verdict = check_loose_connection(bad)
    assert not verdict
    assert verdict.check == "leibniz"
    assert verdict.witness["xi"] == "nabla_u"
    assert verdict.witness["a"] == MultiPoly.var(0, 2)
    assert verdict.witness["m"] == "e1"


def test_check_module_map_examples():
    verdict = check_module_map(DiffOperator.partial_derivative(0, 2, 2))
    assert not verdict
    assert verdict.witness["a"] == MultiPoly.var(0, 2) and verdict.witness["m"] == "e1"
    rng = random.Random(7)
    mat = [[random_poly(rng) for _ in range(2)] for _ in range(2)]
    assert check_module_map(DiffOperator.multiplication(mat, 2))


def test_unknown_variable():
    conn = make_koszul_connection(KoszulData(("u", "v"), 1, {}))
    with pytest.raises(KeyError):
        curvature(conn, "u", "w")
    with pytest.raises(ValueError):
        KoszulData(("u",), 1, {"w": [[1]]})


def test_monomial_count():
    assert len(monomials(2, 3)) == 10
    assert basis_element(1, 3, 2)[1] == MultiPoly.const(1, 2)


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 3))
def test_curvature_is_antisymmetric_module_map(seed, rank):
    rng = random.Random(seed)
    data = random_koszul(rng, rank)
    conn = make_koszul_connection(data)
    omega = curvature(conn, "u", "v")
    assert omega == -curvature(conn, "v", "u")
    assert omega.order <= 0
    assert check_module_map(omega, probe_degree=2)
    assert check_loose_connection(conn, probe_degree=2)


def test_multipoly_repr():
    p = MultiPoly({(2, 1): 3, (0, 2): -1, (1, 0): -1, (0, 0): 2}, 2)
    assert repr(p) == "3*u^2*v - v^2 - u + 2"
