#!/usr/bin/env python3
"""Walk through the worked examples end to end and print every exact result:
the sl3 Miura oper and its canonical form, the sl4 two-site oper with its
commuting-orbit reproduction, the non-commuting sl3 reproductions with their
flag positions, and a small Gaudin spectrum cross-check."""

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cycloper import (
    BetheSystemData,
    Coweight,
    DiagramAut,
    OperContext,
    ScalarTower,
    build_miura,
    canonical_representative,
    energy_oper_identity,
    fixed_flag_cells,
    flag_position,
    reproduce_generic,
    reproduce_orbit_A1,
    reproduce_orbit_A2,
    riccati_solve,
)
from cycloper.miura import theta_for
from cycloper.ratfunc import INFINITY


def header(text):
    print("\n" + "=" * 72)
    print(text)
    print("=" * 72)


def sl3_canonical():
    header("sl3, T = 2: Miura oper with coweight eta(w1 + w2) at the origin")
    ctx = OperContext("A2", ScalarTower.get(2), DiagramAut.from_cycles(2, [[1, 2]]))
    for eta in (1, 2, 3):
        m = build_miura(ctx, Coweight((Fraction(eta), Fraction(eta))))
        can = canonical_representative(m.connection(), cyclotomic=True)
        print(f"eta = {eta}:  u_1 = {can.u[0]}   u_2 = {can.u[1]}")
    print("(u_1 = eta(eta+2)/4 / t^2 with the grade-1 transversal vector p_1 = 2(E1+E2))")


def sl4_commuting_orbit():
    header("sl4, T = 4: site at z, reproduction along the commuting orbit {1,3}")
    S, eta, kappa = 2, 1, 1
    ctx = OperContext("A3", ScalarTower.get(2 * S, ("z",)), DiagramAut.from_cycles(3, [[1, 3]]))
    z = ctx.scalars.coerce(ctx.tower.param("z"))
    m = build_miura(
        ctx,
        Coweight((Fraction(eta), Fraction(kappa), Fraction(eta))),
        sites=[(z, Coweight((Fraction(1), Fraction(0), Fraction(0))))],
    )
    print("pairing <alpha_1, u> =", m.pairing(0))
    f1 = riccati_solve(m.pairing(0), "general", constant=Fraction(1))
    print("general Riccati solution f_1 =", f1)
    res = reproduce_orbit_A1(m, (0, 2), 0, f1, "regular")
    print("regular branch cyclotomic:", res.cyclotomic)
    r0 = res.ledger[ctx.scalars.zero]
    ri = res.ledger[INFINITY]
    print("res_0:", [str(c) for c in r0[0].coords], "->", [str(c) for c in r0[1].coords])
    print("res_inf:", [str(c) for c in ri[0].coords], "->", [str(c) for c in ri[1].coords])
    f1s = riccati_solve(m.pairing(0), "singular_at_0")
    res2 = reproduce_orbit_A1(m, (0, 2), 0, f1s, "singular")
    r0 = res2.ledger[ctx.scalars.zero]
    print("singular branch res_0:", [str(c) for c in r0[0].coords], "->", [str(c) for c in r0[1].coords])


def sl3_noncommuting_orbit():
    header("sl3: non-commuting orbit {1,2} -- generic and singular reproductions")
    ctx = OperContext("A2", ScalarTower.get(2), DiagramAut.from_cycles(2, [[1, 2]]))
    m = build_miura(ctx, Coweight((Fraction(1), Fraction(1))))
    alg, F = ctx.alg, ctx.functions
    cells = fixed_flag_cells(ctx, theta_for(m))
    for c in cells:
        print(f"fixed flag cell w = {c.w}: dimension {c.dimension}")
    E1 = alg.vec_E(alg.simple_root(0), F)
    E2 = alg.vec_E(alg.simple_root(1), F)
    g0 = [Fraction(2) * (x + y) for x, y in zip(E1, E2)]
    res = reproduce_generic(m, g0)
    print("generic reproduction (g0 = 2(E1+E2)) new u:", res.new)
    fp = flag_position(m, res.gauge)
    print("flag position:", fp)
    seed = (F.coerce(4) / F.gen, F.zero, F.zero)
    res2 = reproduce_orbit_A2(m, (0, 1), 0, seed=seed, branch="singular")
    fp2 = flag_position(m, res2.gauge)
    print("singular reproduction flag position:", fp2)


def gaudin_crosscheck():
    header("Gaudin spectrum cross-check: A2, T = 3")
    ctx = OperContext("A2", ScalarTower.get(3))
    data = BetheSystemData(
        ctx,
        ctx.varsigma,
        [(1, Coweight((Fraction(2), Fraction(1)))), (2, Coweight((Fraction(0), Fraction(1))))],
        [0],
        [Fraction(5)],
    )
    for i, row in enumerate(energy_oper_identity(data)):
        print(
            f"E_{i+1} = {row['energy']}   res(lambda-route) = {row['residue_lambda_squared']}"
            f"   res(oper-route) = {row['residue_2rr_u1']}   equal: {row['equal']}"
        )


if __name__ == "__main__":
    sl3_canonical()
    sl4_commuting_orbit()
    sl3_noncommuting_orbit()
    gaudin_crosscheck()
    print("\nall examples reproduced exactly")
