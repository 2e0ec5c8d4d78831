import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sweedler.central_extensions import beta_coalgebra, sl2
from sweedler.coalgebra import (Coalgebra, Comodule, check_coalgebra_axioms, check_comodule_axioms,
                                convolution, dual_action, fd_closure, is_subcomodule, restrict_comodule)
from sweedler.exact import FreeVector
from sweedler.measuring import Algebra, build_inner_comodule, build_standard_coalgebra

from tests.oracles import same_span

C1 = build_standard_coalgebra("C1")
C0 = build_standard_coalgebra("C0")


def builtin_coalgebras():
    return [C0, C1, build_standard_coalgebra("difference"), build_standard_coalgebra("primitive", sl2()),
            beta_coalgebra(8), build_inner_comodule(Algebra.upper_triangular(2)).comodule.coalgebra]


def test_standard_coalgebras_pass():
    for C in builtin_coalgebras():
        assert check_coalgebra_axioms(C), C


def test_c1_shape():
    assert C1.dimension == 2
    assert C1.counit("g") == 1 and C1.counit("gamma") == 0
    assert build_standard_coalgebra("primitive", sl2()).dimension == 4


def test_corrupted_c1_fails_right_counit():
    broken = Coalgebra(["g", "gamma"], {"g": [("g", "g", 1)], "gamma": [("g", "gamma", 1)]},
                       {"g": 1}, "broken")
    verdict = check_coalgebra_axioms(broken)
    assert not verdict
    assert verdict.check == "right counit"
    assert verdict.witness["label"] == "gamma"


def test_comodule_examples():
    D = Comodule(C0, ["d"], {"d": [("g", "d", 1)]})
    assert check_comodule_axioms(D)
    assert check_comodule_axioms(build_inner_comodule(Algebra.upper_triangular(2)).comodule)
    bad = Comodule(C1, ["d"], {"d": [("gamma", "d", 1)]})
    verdict = check_comodule_axioms(bad)
    assert not verdict and verdict.check == "counit"


def test_dual_action_examples():
    assert dual_action({"gamma": 1}, "gamma", C1) == FreeVector.basis("g")
    assert dual_action({"g": 1}, "gamma", C1) == FreeVector.basis("gamma")
    for C in builtin_coalgebras():
        for c in C.basis:
            assert dual_action(C.epsilon, c, C) == FreeVector.basis(c)


def test_convolution_is_associative_action():
    for C in builtin_coalgebras():
        D = C.as_comodule()
        for f in C.basis:
            for g in C.basis:
                h = convolution(C, {f: 1}, {g: 1})
                for d in C.basis:
                    assert dual_action(dict(h.items()), d, D) == \
                        dual_action({f: 1}, dual_action({g: 1}, d, D), D)


def test_fd_closure_examples():
    D = Comodule(C0, ["d"], {"d": [("g", "d", 1)]})
    assert fd_closure(D, "d") == [FreeVector.basis("d")]
    D2 = Comodule(C1, ["d", "d'"], {"d": [("g", "d", 1), ("gamma", "d'", 1)], "d'": [("g", "d'", 1)]})
    assert same_span(fd_closure(D2, "d"), [FreeVector.basis("d"), FreeVector.basis("d'")], ["d", "d'"])
    assert fd_closure(D2, "d'") == [FreeVector.basis("d'")]


def random_comodule(rng: random.Random, dim=6):
    """Comodule over the β coalgebra from a nilpotent N: Δv = Σ_k β_k ⊗ N^k v.

    N is strictly upper triangular, conjugated by a random unipotent matrix
    so the coaction is dense.
    """
    N = [[Fraction(rng.randint(-2, 2)) if j > i and rng.random() < 0.6 else Fraction(0)
          for j in range(dim)] for i in range(dim)]
    P = [[Fraction(1) if i == j else Fraction(rng.randint(-1, 1)) if j > i else Fraction(0)
          for j in range(dim)] for i in range(dim)]
    Pinv = _unipotent_inverse(P)
    M = _mul(_mul(P, N), Pinv)
    C = beta_coalgebra(dim)
    labels = [f"v{i}" for i in range(dim)]
    delta = {}
    for j, lab in enumerate(labels):
        col = [Fraction(int(i == j)) for i in range(dim)]
        terms = []
        for k in range(dim + 1):
            terms += [(f"beta{k}", labels[i], c) for i, c in enumerate(col) if c]
            col = [sum((M[i][t] * col[t] for t in range(dim)), Fraction(0)) for i in range(dim)]
        delta[lab] = terms
    return Comodule(C, labels, delta), labels


def _mul(A, B):
    n = len(A)
    return [[sum((A[i][t] * B[t][j] for t in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]


def _unipotent_inverse(P):
    n = len(P)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n - 1, -1, -1):
        for j in range(n):
            inv[i][j] = Fraction(int(i == j)) - sum((P[i][t] * inv[t][j] for t in range(i + 1, n)), Fraction(0))
    return inv


def brute_force_closure(D, d):
    """All right-hand components (f ⊗ 1)Δd over every dual-basis functional f, in one shot."""
    dd = D.coact(d)
    pieces = []
    for c in D.coalgebra.basis:
        piece = FreeVector((e, a) for (x, e), a in dd.items() if x == c)
        if piece:
            pieces.append(piece)
    return pieces


@pytest.mark.parametrize("seed", range(25))
def test_fd_closure_matches_brute_force(seed):
    rng = random.Random(seed)
    D, labels = random_comodule(rng)
    assert check_comodule_axioms(D)
    d = FreeVector((lab, rng.randint(-2, 2)) for lab in labels)
    closure = fd_closure(D, d)
    assert same_span(closure, brute_force_closure(D, d), labels)
    assert is_subcomodule(D, closure)
    for v in closure:
        assert same_span(fd_closure(D, v) + closure, closure, labels)


def test_restrict_comodule_extremes():
    D = build_inner_comodule(Algebra.upper_triangular(2)).comodule
    C = D.coalgebra
    everything = restrict_comodule([FreeVector.basis(c) for c in C.basis], D)
    assert len(everything) == len(D.basis)
    assert restrict_comodule([], D) == []
    assert len(restrict_comodule([FreeVector.basis("g")], D)) == 1
    with pytest.raises(ValueError):
        restrict_comodule([FreeVector.basis("iota_e11")], D)


@given(st.integers(0, 2 ** 32 - 1))
def test_closure_property_random(seed):
    rng = random.Random(seed)
    D, labels = random_comodule(rng, dim=4)
    d = FreeVector((lab, rng.randint(-1, 1)) for lab in labels)
    assert is_subcomodule(D, fd_closure(D, d))
