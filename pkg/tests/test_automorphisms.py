from fractions import Fraction

import pytest

from cycloper.automorphisms import DiagramAut, make_automorphism, theta_fixed_nilpotent
from cycloper.chevalley import build_algebra
from cycloper.errors import OrderMismatch, ValidationError
from cycloper.tower import ScalarTower
from cycloper.weyl import Coweight


def test_diagram_aut_validation():
    g = build_algebra("A3")
    DiagramAut.from_cycles(3, [[1, 3]]).validate(g.cartan)
    with pytest.raises(ValidationError):
        DiagramAut.from_cycles(3, [[1, 2]]).validate(g.cartan)


def test_identity_automorphism():
    g = build_algebra("A2")
    aut = make_automorphism(g, DiagramAut.identity(2), "diagram", order_divides=1)
    v = g.vec_E(g.simple_root(0))
    assert aut.apply_vec(v) == v
    assert aut.verify_bracket_preservation()


def test_varsigma_action():
    g = build_algebra("A2")
    nu = DiagramAut.from_cycles(2, [[1, 2]])
    tw = ScalarTower.get(2)
    vs = make_automorphism(g, nu, "varsigma", tower=tw)
    K = tw.scalars
    # varsigma(E_i) = omega^-1 E_nu(i)
    v = g.vec_E(g.simple_root(0), K)
    img = vs.apply_vec(v, K)
    iE2 = g.index_E[g.simple_root(1)]
    assert img[iE2] == K.one / tw.zeta and sum(1 for x in img if x) == 1
    # varsigma(p_pm1) = omega^{mp 1} p_pm1; varsigma(rho) = rho
    pm = [K.coerce(c) for c in g.p_minus1]
    assert vs.apply_vec(pm, K) == [tw.zeta * c for c in pm]
    p1 = [K.coerce(c) for c in g.p1]
    assert vs.apply_vec(p1, K) == [c / tw.zeta for c in p1]
    rho = [K.coerce(c) for c in g.rho]
    assert vs.apply_vec(rho, K) == rho
    assert vs.verify_bracket_preservation()
    assert vs.order() == 2


def test_varsigma_preserves_grading_and_centralizer():
    g = build_algebra("A3")
    nu = DiagramAut.from_cycles(3, [[1, 3]])
    tw = ScalarTower.get(4)
    vs = make_automorphism(g, nu, "varsigma", tower=tw)
    for i in range(g.dim):
        assert g.height_of[vs.image[i]] == g.height_of[i]
    # each graded centralizer piece is stable
    K = tw.scalars
    for k, w in g.centralizer_basis:
        img = vs.apply_vec([K.coerce(c) for c in w], K)
        # must stay inside span of grade-k centralizer vectors
        idxs = g.blocks[k]
        others = [v for kk, v in g.centralizer_basis if kk == k]
        from cycloper.linalg import solve_linear

        A = [[K.coerce(v[j]) for v in others] for j in idxs]
        assert solve_linear(K, A, [img[j] for j in idxs]) is not None


def test_nu_fixes_principal_sl2():
    g = build_algebra("A3")
    nu = DiagramAut.from_cycles(3, [[1, 3]])
    aut = make_automorphism(g, nu, "diagram", order_divides=2)
    assert aut.apply_vec(g.p_minus1) == g.p_minus1
    assert aut.apply_vec(g.p1) == g.p1
    assert aut.apply_vec(g.rho) == g.rho


def test_order_mismatch():
    g = build_algebra("A2")
    nu = DiagramAut.from_cycles(2, [[1, 2]])
    with pytest.raises(OrderMismatch):
        make_automorphism(g, nu, "varsigma", tower=ScalarTower.get(3))


def test_vartheta_on_generators():
    """theta(E_1 + E_2) = omega^-(eta+1) (E_2 + E_1) for A2 with
    lam0 = eta(w1 + w2)."""
    g = build_algebra("A2")
    nu = DiagramAut.from_cycles(2, [[1, 2]])
    tw = ScalarTower.get(4)
    K = tw.scalars
    for eta in (0, 1, 2):
        th = make_automorphism(g, nu, "vartheta", tower=tw, lam0=Coweight((Fraction(eta), Fraction(eta))))
        v = [a + b for a, b in zip(g.vec_E(g.simple_root(0), K), g.vec_E(g.simple_root(1), K))]
        img = th.apply_vec(v, K)
        factor = (K.one / tw.zeta) ** (eta + 1)
        assert img == [factor * x for x in v]


THETA_DIMS = [
    # (T, eta, dim n^theta): omega^mu = +-1 -> orbit part; omega^{2mu} = -1 ->
    # bracket part; trivial otherwise (Example dims)
    (2, 0, 1),
    (2, 1, 1),
    (4, 0, 1),
    (4, 1, 1),
    (6, 2, 1),
    (8, 0, 0),
    (8, 1, 1),
]


@pytest.mark.parametrize("T,eta,dim", THETA_DIMS)
def test_theta_fixed_nilpotent_dims(T, eta, dim):
    g = build_algebra("A2")
    nu = DiagramAut.from_cycles(2, [[1, 2]])
    tw = ScalarTower.get(T)
    th = make_automorphism(g, nu, "vartheta", tower=tw, lam0=Coweight((Fraction(eta), Fraction(eta))))
    basis, report = theta_fixed_nilpotent(g, th)
    assert len(basis) == dim
    assert report[0]["orbit"] == (1, 2)
    # nontrivial iff omega^{4(eta+1)} = 1 (the flag example criterion)
    K = tw.scalars
    nontrivial = tw.zeta ** (4 * (eta + 1)) == K.one
    assert (len(basis) > 0) == nontrivial


def test_theta_identity_full_n():
    g = build_algebra("A2")
    tw = ScalarTower.get(1)
    th = make_automorphism(g, DiagramAut.identity(2), "vartheta", tower=tw, lam0=Coweight.zero(2))
    basis, _ = theta_fixed_nilpotent(g, th)
    assert len(basis) == len(g.pos_roots)


def test_nu_stabilizes_graded_centralizer():
    """nu maps each graded transversal piece into itself."""
    from cycloper.linalg import QQ, solve_linear

    g = build_algebra("A3")
    nu = DiagramAut.from_cycles(3, [[1, 3]])
    aut = make_automorphism(g, nu, "diagram", order_divides=2)
    for k, w in g.centralizer_basis:
        img = aut.apply_vec(w, QQ)
        others = [v for kk, v in g.centralizer_basis if kk == k]
        idxs = g.blocks[k]
        A = [[v[j] for v in others] for j in idxs]
        assert solve_linear(QQ, A, [img[j] for j in idxs]) is not None
