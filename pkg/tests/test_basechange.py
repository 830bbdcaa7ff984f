import random

import pytest
from hypothesis import given, strategies as st

from scalext.basechange import (
    BaseChangeCategory,
    CocycleFailure,
    ModuleStructure,
    NotGalois,
    adjunction_check,
    build_base_change_category,
    canonical_equivariance,
    descend,
    galois_act,
    hom_subcomplex,
    make_structure,
    orbit_equivariance,
    orbit_sum,
    p_lower,
    p_star,
    p_star_morphism,
    phi_morphism,
    projection_formula_check,
    star_condition_check,
    structure_shift,
    structure_sum,
    tensor_with_one_L,
    validate_module_structure,
)
from scalext.catalog import dual_numbers, matrix_algebra, path_algebra_An, point
from scalext.dg import Morphism, validate_dg_category
from scalext.fields import GF, QQ, automorphism_group, make_extension, trivial_extension
from scalext.pretr import PretriangulatedHull
from scalext.randgen import random_equivariant_object, random_morphism, random_twisted

QS2 = make_extension(QQ, [-2, 0, 1])
F4 = make_extension(GF(2), [1, 1, 1])
CUBIC = make_extension(QQ, [-2, 0, 0, 1])
EXTENSIONS = [QS2, F4]
seeds = st.integers(0, 10**6)


def setup(A, L):
    H = PretriangulatedHull(A)
    return H, BaseChangeCategory(H, L)


# module structures


def test_companion_structure_valid():
    H, _ = setup(point(QQ), QS2)
    P = H.psi("pt")
    X = H.direct_sum(P, P)
    assert validate_module_structure(H, ModuleStructure(X, tuple(QQ(v) for v in (0, 2, 1, 0)), QS2)).passed
    rep = validate_module_structure(H, ModuleStructure(X, H.identity(X).vector, QS2))
    assert rep.first_failure().name == "minimal_polynomial"
    with pytest.raises(ValueError):
        make_structure(H, X, H.identity(X), QS2)


def test_companion_structure_over_dual_numbers():
    H, _ = setup(dual_numbers(QQ), QS2)
    P = H.psi("pt")
    X = H.direct_sum(P, P)
    # blocks (0,0),(0,1),(1,0),(1,1), each as (1, e) coordinates
    phi = [0, 0, 2, 0, 1, 0, 0, 0]
    s = make_structure(H, X, phi, QS2)
    assert s == p_star(H, QS2, P)


def test_p_star_of_point():
    H, _ = setup(point(QQ), QS2)
    s = p_star(H, QS2, H.psi("pt"))
    assert s.obj == H.direct_sum(H.psi("pt"), H.psi("pt"))
    assert s.phi == (0, 2, 1, 0)
    assert p_lower(s) == s.obj


def test_p_star_trivial_extension():
    K = trivial_extension(QQ)
    H, BL = setup(path_algebra_An(QQ, 2), K)
    X = H.psi("1")
    s = p_star(H, K, X)
    assert s.obj == X and s.phi == H.identity(X).vector
    # with L = K the equivariant hom equals the full hom
    t = p_star(H, K, H.psi("2"))
    assert BL.hom(s, t).space == H.hom(X, H.psi("2")).space


# hom subcomplexes and the base change category


@pytest.mark.parametrize("L", EXTENSIONS, ids=str)
def test_end_of_p_star_point(L):
    # oracle: commutant of the companion matrix has dimension 2
    H, BL = setup(point(L.base), L)
    s = p_star(H, L, H.psi("pt"))
    assert BL.hom(s, s).dim(0) == 2
    assert BL.l_dimension(s, s, 0) == 1
    assert hom_subcomplex(H, s, s).complex.dim(0) == 2


def test_intertwiners_phi_and_minus_phi():
    H, BL = setup(point(QQ), QS2)
    s = p_star(H, QS2, H.psi("pt"))
    t = ModuleStructure(s.obj, tuple(-x for x in s.phi), QS2)
    assert validate_module_structure(H, t).passed
    assert BL.hom(s, t).dim(0) == 2


def test_dual_numbers_over_f4():
    # oracle: commutant (x) dual numbers has F2-dimension 4
    H, BL = setup(dual_numbers(GF(2)), F4)
    s = p_star(H, F4, H.psi("pt"))
    BL = build_base_change_category(H, F4, [s])
    assert BL.hom(s, s).dim(0) == 4


@pytest.mark.parametrize("L", EXTENSIONS, ids=str)
def test_base_change_category_axioms(L):
    H, BL = setup(dual_numbers(L.base), L)
    P = H.psi("pt")
    s = p_star(H, L, P)
    t = p_star(H, L, H.shift(P, 1))
    for a in (s, t):
        for b in (s, t):
            C = BL.hom(a, b)
            for n in C.degrees:
                assert (C.differential(n + 1) @ C.differential(n)).is_zero()
    assert BL.compose(BL.identity(s), BL.identity(s)) == BL.identity(s)


def test_scalar_action_is_l_linear():
    H, BL = setup(point(QQ), QS2)
    s = p_star(H, QS2, H.psi("pt"))
    f = BL.basis(s, s, 0)[0]
    a, b = QS2.element([1, 2]), QS2.element([0, -1])
    assert BL.scalar_action(a * b, f) == BL.scalar_action(a, BL.scalar_action(b, f))


def test_tensor_with_one_l_is_a_dg_category():
    A = tensor_with_one_L(dual_numbers(QQ), QS2)
    assert validate_dg_category(A).passed
    assert A.hom("pt", "pt").dim(0) == 2


# adjunction


@pytest.mark.parametrize("L", EXTENSIONS, ids=str)
def test_adjunction_point(L):
    H, BL = setup(point(L.base), L)
    P = H.psi("pt")
    rep = adjunction_check(BL, P, p_star(H, L, P))
    assert rep.passed
    assert rep.payload["dimensions"]["0"] == [2, 2]


@pytest.mark.parametrize("L", EXTENSIONS, ids=str)
@given(seed=seeds)
def test_adjunction_natural_on_random_pairs(L, seed):
    rng = random.Random(seed)
    A = path_algebra_An(L.base, 2)
    H, BL = setup(A, L)
    C = random_twisted(H, A.objects, rng, max_entries=2, shift_range=(-1, 1))
    Cp = random_twisted(H, A.objects, rng, max_entries=2, shift_range=(-1, 1))
    T = random_twisted(H, A.objects, rng, max_entries=2, shift_range=(-1, 1))
    t = p_star(H, L, T)
    tp = p_star(H, L, random_twisted(H, A.objects, rng, max_entries=2, shift_range=(-1, 1)))
    s = p_star(H, L, C)
    n = rng.randint(-1, 1)
    u = random_morphism(H, Cp, C, 0, rng)
    v = random_morphism(BL, t, tp, 0, rng)
    beta = random_morphism(BL, s, t, n, rng)
    assert adjunction_check(BL, C, t, naturality=[(u, v, beta)]).passed


# Galois action


def test_galois_act_negates_phi():
    H, _ = setup(point(QQ), QS2)
    s = p_star(H, QS2, H.psi("pt"))
    G = automorphism_group(QS2)
    sigma = next(g for g in G if not g.is_identity)
    assert galois_act(H, sigma, s).phi == tuple(-x for x in s.phi)


def test_frobenius_twice_is_identity():
    H, _ = setup(point(GF(2)), F4)
    s = p_star(H, F4, H.psi("pt"))
    G = automorphism_group(F4)
    frob = next(g for g in G if not g.is_identity)
    once = galois_act(H, frob, s)
    assert once != s
    assert galois_act(H, frob, once) == s


@pytest.mark.parametrize("L", EXTENSIONS, ids=str)
def test_galois_act_is_action(L):
    H, _ = setup(dual_numbers(L.base), L)
    s = p_star(H, L, H.psi("pt"))
    G = automorphism_group(L)
    for a in G:
        for b in G:
            # (sigma tau)^* = tau^* sigma^*
            assert galois_act(H, a.compose(b), s) == galois_act(H, b, galois_act(H, a, s))


# projection formula


@pytest.mark.parametrize("L", EXTENSIONS, ids=str)
def test_projection_formula(L):
    H, BL = setup(point(L.base), L)
    P = H.psi("pt")
    s = p_star(H, L, P)
    for E in (s, structure_sum(H, [s, structure_shift(H, s, 1)])):
        rep = projection_formula_check(BL, E)
        assert rep.passed, rep.failures()
        assert rep.payload["inverse"] is not None


def test_projection_formula_needs_galois():
    H, BL = setup(point(QQ), CUBIC)
    s = p_star(H, CUBIC, H.psi("pt"))
    G = automorphism_group(CUBIC, table=[CUBIC.gen])
    with pytest.raises(NotGalois):
        projection_formula_check(BL, s, G)


# condition (*)


@pytest.mark.parametrize("L", EXTENSIONS, ids=str)
def test_star_fails_for_p_star_point(L):
    H, _ = setup(point(L.base), L)
    s = p_star(H, L, H.psi("pt"))
    rep = star_condition_check(H, s, s)
    assert not rep.passed
    assert rep.payload["dimensions"]["0"] == {"premise": 4, "conclusion": 2}


def test_star_holds_for_trivial_extension_and_zero_hom():
    K = trivial_extension(QQ)
    A = path_algebra_An(QQ, 2)
    H, _ = setup(A, K)
    s, t = p_star(H, K, H.psi("1")), p_star(H, K, H.psi("2"))
    assert star_condition_check(H, s, t).passed
    assert star_condition_check(H, s, s).passed
    # Hom(2, 1) = 0: vacuous
    H2, _ = setup(A, QS2)
    a, b = p_star(H2, QS2, H2.psi("2")), p_star(H2, QS2, H2.psi("1"))
    assert star_condition_check(H2, a, b).passed


@pytest.mark.parametrize("L", EXTENSIONS, ids=str)
def test_star_symmetric_in_failure(L):
    for A in (point(L.base), dual_numbers(L.base), path_algebra_An(L.base, 2)):
        H, _ = setup(A, L)
        objs = [p_star(H, L, H.psi(X)) for X in A.objects]
        G = automorphism_group(L)
        objs += [galois_act(H, g, s) for g in G for s in objs]
        for s in objs:
            for t in objs:
                if not (H.hom(s.obj, t.obj).space.total_dim and H.hom(t.obj, s.obj).space.total_dim):
                    continue  # one direction holds vacuously
                assert star_condition_check(H, s, t).passed == star_condition_check(H, t, s).passed


# descent


@pytest.mark.parametrize("L", EXTENSIONS, ids=str)
def test_descent_of_p_star_point(L):
    H, BL = setup(point(L.base), L)
    G = automorphism_group(L)
    P = H.psi("pt")
    s = p_star(H, L, P)
    res = descend(BL, s, canonical_equivariance(BL, G, P), G)
    assert res.descended == P
    assert res.report.passed


@pytest.mark.parametrize("L", EXTENSIONS, ids=str)
def test_descent_of_orbit_sum(L):
    H, BL = setup(matrix_algebra(L.base, 2), L)
    G = automorphism_group(L)
    P = H.psi("M")
    s = p_star(H, L, H.direct_sum(P, H.shift(P, 1)))
    res = descend(BL, orbit_sum(H, G, s), orbit_equivariance(BL, G, s), G)
    N = res.descended
    assert len(N) == 2 * L.degree
    # p^* of the result is strictly isomorphic to the orbit sum
    assert BL.compose(res.inverse, res.iso) == BL.identity(p_star(H, L, N))


def test_descent_rejects_broken_cocycle():
    H, BL = setup(point(QQ), QS2)
    G = automorphism_group(QS2)
    P = H.psi("pt")
    s = p_star(H, QS2, P)
    lambdas = canonical_equivariance(BL, G, P)
    sigma = next(g for g in G if not g.is_identity)
    lambdas[sigma] = lambdas[sigma].scale(QQ(2))
    with pytest.raises(CocycleFailure):
        descend(BL, s, lambdas, G)


@given(seed=seeds)
def test_descent_of_random_equivariant_objects(seed):
    rng = random.Random(seed)
    H, BL = setup(matrix_algebra(GF(2), 2), F4)
    G = automorphism_group(F4)
    N = random_twisted(H, ["M"], rng, max_entries=2, shift_range=(-1, 1))
    N = type(N)(N.entries, ())
    s, lambdas = random_equivariant_object(BL, G, N, rng)
    res = descend(BL, s, lambdas, G)
    assert res.iso.target == s
    assert BL.compose(res.iso, res.inverse) == BL.identity(s)
