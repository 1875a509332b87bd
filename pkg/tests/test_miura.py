import random
from fractions import Fraction

import pytest

from conftest import fSl3_seed, sl3_miura, sl4_miura, sl4_miura_at
from cycloper.connection import GroupElement, gauge_transform, is_equivariant
from cycloper.context import OperContext
from cycloper.errors import (
    CyclotomyObstruction,
    FixedPointViolation,
    NoRationalSolution,
    OrbitCollision,
    RiccatiViolated,
    SeedNotSolution,
    ValidationError,
)
from cycloper.miura import (
    MiuraOper,
    a2_system_residuals,
    build_miura,
    reproduce_generic,
    reproduce_orbit_A1,
    reproduce_orbit_A2,
    reproduce_simple,
    riccati_residual,
    riccati_solve,
)
from cycloper.ratfunc import INFINITY
from cycloper.tower import ScalarTower
from cycloper.weyl import Coweight, coweight_to_h, rho_coweight


# ---------------------------------------------------------------- build_miura

def test_build_sl3():
    ctx, m = sl3_miura(2, 2)
    F = ctx.functions
    t = F.gen
    # u = -lam0/t: pairings are -eta/t
    assert m.pairing(0) == -F.coerce(2) / t
    assert m.pairing(1) == -F.coerce(2) / t
    assert m.is_cyclotomic()


def test_build_sl4_displayed_coefficients():
    for S, eta, kappa in [(1, 0, 1), (2, 1, 1), (2, 2, 0)]:
        ctx, m = sl4_miura(S, eta, kappa)
        F = ctx.functions
        t = F.gen
        z = F.coerce(ctx.tower.param("z"))
        assert m.pairing(0) == -F.coerce(eta) / t - (S * t ** (S - 1)) / (t ** S - z ** S)
        assert m.pairing(1) == -F.coerce(kappa) / t
        assert m.pairing(2) == -F.coerce(eta) / t - (S * t ** (S - 1)) / (t ** S + z ** S)
        assert m.residue_coweight(0) == Coweight((Fraction(-eta), Fraction(-kappa), Fraction(-eta)))
        assert m.residue_coweight(INFINITY) == Coweight(
            (Fraction(eta + S), Fraction(kappa), Fraction(eta + S))
        )
        assert m.is_cyclotomic()


def test_build_empty():
    ctx = OperContext("A2", ScalarTower.get(1))
    m = build_miura(ctx, Coweight.zero(2))
    assert all(not c for c in m.u_coroot)


def test_orbit_collision():
    ctx = OperContext("A1", ScalarTower.get(2))
    with pytest.raises(OrbitCollision):
        build_miura(
            ctx,
            Coweight((Fraction(1),)),
            sites=[(1, Coweight((Fraction(1),))), (-1, Coweight((Fraction(1),)))],
        )


def test_non_invariant_lam0_rejected():
    ctx, _ = sl3_miura(2, 0)
    with pytest.raises(ValidationError):
        build_miura(ctx, Coweight((Fraction(1), Fraction(0))))


# ---------------------------------------------------------------- riccati

def test_riccati_paper_closed_form_grid():
    """f1 = (eta+1)(S+eta+1) t^eta (t^S - z^S) / ((eta+1)t^{S+eta+1}
    - (S+eta+1) z^S t^{eta+1} + A) over the acceptance grid."""
    for S in (1, 2):
        for eta in (0, 1, 2):
            ctx, m = sl4_miura(S, eta, 1)
            F = ctx.functions
            t = F.gen
            z = F.coerce(ctx.tower.param("z"))
            q1 = m.pairing(0)
            for A in (Fraction(0), Fraction(1)):
                f1 = riccati_solve(q1, "general", constant=A / ((S + eta + 1) * (eta + 1)))
                denom = (
                    F.coerce(eta + 1) * t ** (S + eta + 1)
                    - F.coerce(S + eta + 1) * z ** S * t ** (eta + 1)
                    + F.coerce(A)
                )
                expect = F.coerce((eta + 1) * (S + eta + 1)) * t ** eta * (t ** S - z ** S) / denom
                assert f1 == expect
                assert not riccati_residual(m, 0, f1)


def test_riccati_instantiated_z_grid():
    for S, eta, zval, A in [(1, 0, 1, 1), (2, 1, 2, 0), (2, 2, 1, 1), (1, 2, 2, 0)]:
        T = 2 * S
        ctx = OperContext("A3", ScalarTower.get(T), __import__("cycloper.automorphisms", fromlist=["DiagramAut"]).DiagramAut.from_cycles(3, [[1, 3]]))
        m = build_miura(
            ctx,
            Coweight((Fraction(eta), Fraction(1), Fraction(eta))),
            sites=[(zval, Coweight((Fraction(1), Fraction(0), Fraction(0))))],
        )
        F = ctx.functions
        t = F.gen
        q1 = m.pairing(0)
        f1 = riccati_solve(q1, "general", constant=Fraction(A, (S + eta + 1) * (eta + 1)))
        denom = (
            F.coerce(eta + 1) * t ** (S + eta + 1)
            - F.coerce((S + eta + 1) * zval ** S) * t ** (eta + 1)
            + F.coerce(A)
        )
        assert f1 == F.coerce((eta + 1) * (S + eta + 1)) * t ** eta * (t ** S - zval ** S) / denom


def test_riccati_singular_mode():
    ctx, m = sl4_miura(2, 1, 1)
    q1 = m.pairing(0)
    f = riccati_solve(q1, "singular_at_0")
    pp = f.principal_part_at(ctx.scalars.zero)
    assert len(pp) == 1 and pp[0] == 2  # (eta+1)/t with eta = 1
    assert f == riccati_solve(q1, "general", constant=0)


def test_riccati_rejects_bad_q():
    tw = ScalarTower.get(1)
    t = tw.t
    with pytest.raises(NoRationalSolution):
        riccati_solve(t)  # polynomial part
    with pytest.raises(NoRationalSolution):
        riccati_solve(1 / t ** 2)  # double pole
    with pytest.raises(NoRationalSolution):
        riccati_solve(tw.functions.coerce(Fraction(1, 2)) / t)  # non-integer residue


# ---------------------------------------------------------------- simple

def test_reproduce_simple():
    ctx = OperContext("A1", ScalarTower.get(1))
    m = build_miura(ctx, Coweight((Fraction(1),)))
    f = riccati_solve(m.pairing(0), "general", constant=Fraction(1))
    res = reproduce_simple(m, 0, f)
    assert res.new.u_coroot[0] == m.u_coroot[0] + f
    # res_inf rule: <alpha, res_inf + rho> >= 0 and f != 0 => s_k . res_inf
    rb, ra = res.ledger[INFINITY]
    s = ctx.weyl.simple(0)
    assert ra == s.dot(rb)
    with pytest.raises(RiccatiViolated):
        reproduce_simple(m, 0, ctx.functions.gen)


def test_reproduce_simple_zero():
    ctx = OperContext("A1", ScalarTower.get(1))
    m = build_miura(ctx, Coweight((Fraction(1),)))
    res = reproduce_simple(m, 0, ctx.functions.zero)
    assert res.new.u_coroot == m.u_coroot


def test_reproduce_simple_finite_pole_rule():
    """-res -> -s_k.(-res) at a finite pole of f dt."""
    ctx = OperContext("A1", ScalarTower.get(1))
    W = ctx.weyl
    m = build_miura(ctx, Coweight((Fraction(0),)), sites=[(1, Coweight((Fraction(2),)))])
    q = m.pairing(0)
    # with C = -1/3 the solution collapses to f = 3/(t-1): a single pole at
    # the site itself
    f = riccati_solve(q, "general", constant=Fraction(-1, 3))
    t = ctx.functions.gen
    assert f == 3 / (t - 1)
    res = reproduce_simple(m, 0, f)
    s = W.simple(0)
    p = ctx.scalars.one
    before = m.residue_coweight(p)
    after = res.new.residue_coweight(p)
    neg = Coweight([-c for c in before.coords])
    assert Coweight([-c for c in after.coords]) == s.dot(neg)


# ---------------------------------------------------------------- A1 orbits

def test_a1_orbit_acceptance_grid():
    """Regular branch accepted iff eta + 1 = 0 mod T/2 = S; singular always
    (site location instantiated per the acceptance grid)."""
    for S in (1, 2):
        for eta in (0, 1, 2):
            ctx, m = sl4_miura_at(S, eta, 1, 1)
            q1 = m.pairing(0)
            f_reg = riccati_solve(q1, "general", constant=Fraction(1))
            ok = (eta + 1) % S == 0
            if ok:
                res = reproduce_orbit_A1(m, (0, 2), 0, f_reg, "regular")
                assert res.cyclotomic
                rb, ra = res.ledger[ctx.scalars.zero]
                assert rb == ra
            else:
                with pytest.raises(CyclotomyObstruction):
                    reproduce_orbit_A1(m, (0, 2), 0, f_reg, "regular")
            f_sing = riccati_solve(q1, "singular_at_0")
            res = reproduce_orbit_A1(m, (0, 2), 0, f_sing, "singular")
            assert res.cyclotomic
            snu = ctx.folded.simple_reflections[ctx.folded.orbit_index(0)]
            rb, ra = res.ledger[ctx.scalars.zero]
            assert Coweight([-c for c in ra.coords]) == snu.dot(Coweight([-c for c in rb.coords]))
            rb, ra = res.ledger[INFINITY]
            assert ra == snu.dot(rb)


def test_a1_orbit_equivariance_is_the_functional_relation():
    """The closing relation on f_k holds iff the assembled g is equivariant
    (tested for T in {2,4}, eta in {0,1,2})."""
    for S in (1, 2):
        for eta in (0, 1, 2):
            ctx, m = sl4_miura_at(S, eta, 0, 2)
            q1 = m.pairing(0)
            for const in (Fraction(0), Fraction(1)):
                f1 = riccati_solve(q1, "general", constant=const)
                K = ctx.scalars
                w = ctx.omega
                wS = w ** 2
                closes = f1.subs_scale(K.one / wS) * (K.one / wS) == f1
                # assemble g by the recursion and compare
                f3 = f1.subs_scale(K.one / w) * (K.one / w)
                F = ctx.functions
                alg = ctx.alg
                v1 = [f1 * c for c in alg.vec_E(alg.simple_root(0), F)]
                v3 = [f3 * c for c in alg.vec_E(alg.simple_root(2), F)]
                g = GroupElement.exp(ctx, v1) @ GroupElement.exp(ctx, v3)
                assert is_equivariant(g, ctx.varsigma) == closes


def test_a1_orbit_gauge_reassembly():
    # symbolic z kept here: one full symbolic-site reproduction
    ctx, m = sl4_miura(2, 1, 1)
    f = riccati_solve(m.pairing(0), "general", constant=Fraction(1))
    res = reproduce_orbit_A1(m, (0, 2), 0, f, "regular")
    out = gauge_transform(m.connection(), res.gauge)
    assert all(a == b for a, b in zip(out.coeffs, res.new.connection().coeffs))
    assert is_equivariant(res.gauge, ctx.varsigma)


# ---------------------------------------------------------------- A2 orbits

def test_a2_seed_verification_grid():
    ctx, m = sl3_miura(4, 1)
    for abc in [(1, 2, 3), (Fraction(1, 2), -1, 2), (-2, 3, Fraction(5, 2)), (0, 1, -1)]:
        seed = fSl3_seed(ctx, 2, *abc)
        assert not any(a2_system_residuals(m, 0, 1, *seed))
    bad = list(fSl3_seed(ctx, 2, 1, 1, 0))
    bad[0] = bad[0] + 1
    with pytest.raises(SeedNotSolution):
        reproduce_orbit_A2(m, (0, 1), 0, seed=tuple(bad))


def test_a2_three_cyclotomy_cases():
    # omega^mu = 1: T=2, eta=1, a=b, c=0
    ctx, m = sl3_miura(2, 1)
    r = reproduce_orbit_A2(m, (0, 1), 0, seed=fSl3_seed(ctx, 2, 3, 3, 0), branch="regular")
    assert r.cyclotomic
    rb, ra = r.ledger[ctx.scalars.zero]
    assert rb == ra
    # omega^mu = -1: T=2, eta=0, a=-b, c=0
    ctx, m = sl3_miura(2, 0)
    r = reproduce_orbit_A2(m, (0, 1), 0, seed=fSl3_seed(ctx, 1, 2, -2, 0), branch="regular")
    assert r.cyclotomic
    # omega^{2mu} = -1: T=4, eta=0, a=b=0 (the displayed third-case functions)
    ctx, m = sl3_miura(4, 0)
    seed = fSl3_seed(ctx, 1, 0, 0, 1)
    F = ctx.functions
    t = F.gen
    c = F.one
    D = c * t ** 4 - F.coerce(4)
    assert seed[0] == 2 * t ** 3 / D
    assert seed[1] == -4 * t / D
    assert seed[2] == -4 * c / D
    r = reproduce_orbit_A2(m, (0, 1), 0, seed=seed, branch="regular")
    assert r.cyclotomic


def test_a2_rejects_other_cases():
    ctx, m = sl3_miura(8, 0)
    for abc in [(1, 1, 0), (1, -1, 0), (0, 0, 1)]:
        with pytest.raises(CyclotomyObstruction):
            reproduce_orbit_A2(m, (0, 1), 0, seed=fSl3_seed(ctx, 1, *abc), branch="regular")


def test_a2_singular_always_cyclotomic():
    for T, eta in [(2, 0), (4, 0), (8, 0), (2, 1), (4, 1), (8, 2)]:
        ctx, m = sl3_miura(T, eta)
        F = ctx.functions
        mu = eta + 1
        seed = (F.coerce(2 * mu) / F.gen, F.zero, F.zero)
        r = reproduce_orbit_A2(m, (0, 1), 0, seed=seed, branch="singular")
        assert r.cyclotomic and r.branch == "singular-at-0"
        snu = ctx.folded.simple_reflections[0]
        rb, ra = r.ledger[ctx.scalars.zero]
        assert Coweight([-c for c in ra.coords]) == snu.dot(Coweight([-c for c in rb.coords]))


def test_a2_singular_is_parameter_limit():
    """The singular solution is the a -> infinity limit of case 1; directly:
    its seed solves the system and exp(2mu/t (E1+E2)) is always equivariant."""
    ctx, m = sl3_miura(4, 1)
    F = ctx.functions
    mu = 2
    seed = (F.coerce(2 * mu) / F.gen, F.zero, F.zero)
    assert not any(a2_system_residuals(m, 0, 1, *seed))
    alg = ctx.alg
    v = [seed[0] * (a + b) for a, b in zip(alg.vec_E(alg.simple_root(0), F), alg.vec_E(alg.simple_root(1), F))]
    assert is_equivariant(GroupElement.exp(ctx, v), ctx.varsigma)


# ---------------------------------------------------------------- generic

def test_generic_reproduction_round_trip():
    ctx, m = sl3_miura(2, 1)
    F = ctx.functions
    alg = ctx.alg
    E1 = alg.vec_E(alg.simple_root(0), F)
    E2 = alg.vec_E(alg.simple_root(1), F)
    for aval in (Fraction(1), Fraction(-2), Fraction(1, 3)):
        g0 = [aval * (x + y) for x, y in zip(E1, E2)]
        res = reproduce_generic(m, g0)
        assert res.cyclotomic
        rb, ra = res.ledger[ctx.scalars.zero]
        assert rb == ra
        # matches the A2-orbit closed form with a = b = aval, c = 0
        seed = fSl3_seed(ctx, 2, aval, aval, 0)
        direct = reproduce_orbit_A2(m, (0, 1), 0, seed=seed, branch="regular")
        assert res.new.u_coroot == direct.new.u_coroot


def test_generic_rejects_nonfixed_g0():
    ctx, m = sl3_miura(2, 1)
    F = ctx.functions
    alg = ctx.alg
    with pytest.raises(FixedPointViolation):
        reproduce_generic(m, alg.vec_E(alg.simple_root(0), F))


def test_generic_injectivity_on_grid():
    """Distinct g0 on the fixed locus give distinct Miura opers."""
    ctx, m = sl3_miura(2, 1)
    F = ctx.functions
    alg = ctx.alg
    E1 = alg.vec_E(alg.simple_root(0), F)
    E2 = alg.vec_E(alg.simple_root(1), F)
    seen = []
    for aval in (Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2)):
        res = reproduce_generic(m, [aval * (x + y) for x, y in zip(E1, E2)])
        key = tuple(res.new.u_coroot)
        assert key not in seen
        seen.append(key)


def test_generic_half_integral_cover():
    """lam0 with pairing 1/2: the q = 2 cover route descends to rational
    data (the omega^{2mu} = -1 window)."""
    ctx = OperContext(
        "A2", ScalarTower.get(2),
        __import__("cycloper.automorphisms", fromlist=["DiagramAut"]).DiagramAut.from_cycles(2, [[1, 2]]),
    )
    F = ctx.functions
    alg = ctx.alg
    t = F.gen
    hv = coweight_to_h(alg, Coweight((Fraction(1, 2), Fraction(1, 2))), F)
    m = MiuraOper(ctx, [-hv[alg.index_H[j]] / t for j in range(alg.rank)])
    assert m.is_cyclotomic()
    E1 = alg.vec_E(alg.simple_root(0), F)
    E2 = alg.vec_E(alg.simple_root(1), F)
    E12 = alg.bracket_vec(E1, E2, F)
    res = reproduce_generic(m, [Fraction(1) * x for x in E12])
    assert res.cover_power == 2 and res.cyclotomic
    rb, ra = res.ledger[ctx.scalars.zero]
    assert rb == ra
    # closed form of the third window with mu = 3/2, c = 1: only t^{2mu}
    # appears, so the result is rational in t
    mu = Fraction(3, 2)
    D = t ** 6 - F.coerce(4 * mu ** 4)
    f1 = 2 * mu * t ** 5 / D
    f2 = -F.coerce(4 * mu ** 3) * t ** 2 / D
    assert res.new.u_coroot[0] == m.u_coroot[0] + f1 + f2
    assert res.new.u_coroot[1] == m.u_coroot[1] + f1 - f2


def test_generic_reproduction_with_sites():
    """The factorisation route on a two-pole instance: the fundamental
    solution picks up a torus factor from the site residues."""
    ctx = OperContext("A1", ScalarTower.get(2))
    K = ctx.scalars
    m = build_miura(
        ctx,
        Coweight((Fraction(1),)),
        sites=[(3, Coweight((Fraction(2),)))],
    )
    assert m.is_cyclotomic()
    F = ctx.functions
    alg = ctx.alg
    E = alg.vec_E(alg.simple_root(0), F)
    for c in (Fraction(1), Fraction(-3)):
        res = reproduce_generic(m, [c * x for x in E])
        assert res.cyclotomic
        rb, ra = res.ledger[K.zero]
        assert rb == ra
        out = gauge_transform(m.connection(), res.gauge)
        assert all(a == b for a, b in zip(out.coeffs, res.new.connection().coeffs))
        # residues at the site orbit move inside the shifted W-orbit of lam_1
        from cycloper.weyl import linkage_equal

        site_res = Coweight([-x for x in res.new.residue_coweight(ctx.scalars.coerce(3)).coords])
        assert linkage_equal(ctx.weyl, Coweight((Fraction(2),)), site_res)
