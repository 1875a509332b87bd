"""Miura opers and the reproduction procedures: simple-root, commuting
(A1-type) orbits, non-commuting (A2-type) orbits, and the generic
factorisation route through the fundamental solution."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .automorphisms import AlgebraAut
from .connection import (
    Connection,
    GroupElement,
    gauge_transform,
    is_equivariant,
    lift_to_cover,
    regularize,
)
from .context import OperContext
from .errors import (
    CyclotomyObstruction,
    FixedPointViolation,
    MonodromyObstruction,
    NoRationalSolution,
    NotInOpenCell,
    OrbitCollision,
    RiccatiViolated,
    SeedNotSolution,
    ValidationError,
)
from .ratfunc import INFINITY, partial_fractions, rational_antiderivative, as_rational
from .solve import gauss_factorize, solve_fundamental
from .weyl import Coweight, coweight_to_h, h_to_coweight, rho_coweight


@dataclass
class MiuraOper:
    """d + p_-1 dt + u dt with u stored in coroot coordinates."""

    ctx: OperContext
    u_coroot: list  # one RatFunc per simple index: u = sum_j u_j coroot_j

    def __post_init__(self):
        F = self.ctx.functions
        self.u_coroot = [F.coerce(c) for c in self.u_coroot]

    def connection(self) -> Connection:
        ctx = self.ctx
        F = ctx.functions
        alg = ctx.alg
        coeffs = [F.coerce(c) for c in alg.p_minus1]
        for j, m in enumerate(self.u_coroot):
            if m:
                coeffs[alg.index_H[j]] = coeffs[alg.index_H[j]] + m
        return Connection(ctx, coeffs, "oper")

    def pairing(self, k):
        """<alpha_k, u(t)> (0-based k)."""
        A = self.ctx.alg.cartan.matrix
        F = self.ctx.functions
        out = F.zero
        for j, m in enumerate(self.u_coroot):
            if m and A[j][k]:
                out = out + m * A[j][k]
        return out

    def residue_coweight(self, p) -> Coweight:
        K = self.ctx.scalars
        res = [K.coerce(c.residue_at(p)) for c in self.u_coroot]
        A = self.ctx.alg.cartan.matrix
        coords = []
        for i in range(self.ctx.alg.rank):
            acc = K.zero
            for j, m in enumerate(res):
                if m and A[j][i]:
                    acc = acc + m * A[j][i]
            coords.append(acc)
        return Coweight(coords)

    def is_cyclotomic(self) -> bool:
        return is_equivariant(self.connection(), self.ctx.varsigma)

    def add(self, k, f) -> "MiuraOper":
        new = list(self.u_coroot)
        new[k] = new[k] + f
        return MiuraOper(self.ctx, new)

    def __repr__(self):
        body = "; ".join(f"coroot_{j+1}: {c}" for j, c in enumerate(self.u_coroot) if c)
        return f"MiuraOper(d + p_-1 dt + [{body}] dt)"


@dataclass
class ReproductionResult:
    old: MiuraOper
    new: MiuraOper
    gauge: GroupElement
    branch: str                    # 'regular-at-0' | 'singular-at-0'
    ledger: dict                   # point -> (res before, res after) as Coweights
    cyclotomic: bool


def _gamma_orbits_disjoint(ctx, points, allow_origin=False):
    K = ctx.scalars
    T = ctx.tower.order
    w = ctx.omega
    seen = []
    for p in points:
        p = K.coerce(p)
        if not p and not (allow_origin and T == 1):
            raise OrbitCollision("site at the origin is not allowed")
        orb = [p * w ** r for r in range(T)]
        for q in seen:
            if any(q == o for o in orb):
                raise OrbitCollision(f"Gamma-orbits collide at {q}")
        seen.extend(orb)


def build_miura(ctx: OperContext, lam0: Coweight, sites=(), extra=(), w0=None) -> MiuraOper:
    """u(t) = -w0.lam0/t - sum_r sum_i nu^r(w_i.lam_i)/(t - w^r z_i)
                      - sum_r sum_j nu^r(y_j.0)/(t - w^r x_j)."""
    alg = ctx.alg
    K = ctx.scalars
    F = ctx.functions
    nu = ctx.nu
    if not lam0.is_nu_invariant(nu):
        raise ValidationError("lam0 must be nu-invariant")
    pts = [z for z, *_ in sites] + [x for x, _ in extra]
    _gamma_orbits_disjoint(ctx, pts)
    T = ctx.tower.order
    w = ctx.omega
    t = F.gen
    u = [F.zero] * alg.rank

    def add_pole(cw: Coweight, at):
        hv = coweight_to_h(alg, cw, K)
        lin = t - F.coerce(at)
        for j in range(alg.rank):
            c = hv[alg.index_H[j]]
            if c:
                u[j] = u[j] - F.coerce(c) / lin

    top = w0.dot(lam0) if w0 is not None else lam0
    add_pole(top, K.zero)
    register = [K.zero]
    for entry in sites:
        z, lam = entry[0], entry[1]
        wi = entry[2] if len(entry) > 2 and entry[2] is not None else None
        val = wi.dot(lam) if wi is not None else lam
        for r in range(T):
            cw = val
            for _ in range(r):
                cw = nu.apply_coweight(cw)
            pt = K.coerce(z) * w ** r
            add_pole(cw, pt)
            register.append(pt)
    zero = Coweight.zero(alg.rank)
    for x, yj in extra:
        val = yj.dot(zero) if yj is not None else zero
        for r in range(T):
            cw = val
            for _ in range(r):
                cw = nu.apply_coweight(cw)
            pt = K.coerce(x) * w ** r
            add_pole(cw, pt)
            register.append(pt)
    ctx.tower.register_points(register)
    out = MiuraOper(ctx, u)
    if not out.is_cyclotomic():
        raise ValidationError("constructed Miura oper is not cyclotomic (bad inputs?)")
    return out


# ---------------------------------------------------------------------------
# Riccati machinery
# ---------------------------------------------------------------------------

def riccati_solve(q, mode="general", constant=0):
    """Solutions of f' + f^2 + f q = 0 with rational data.

    q must have only simple finite poles with integer residues and zero
    polynomial part.  general mode: f = Q/(int Q + C) with Q = exp(-int q);
    singular mode: the unique solution with leading term (eta+1)/t where
    eta = -res_0 q."""
    F = q.field
    K = F.coeff
    if not q:
        Q = F.one
    else:
        pf = partial_fractions(q)
        if any(pf.polynomial_part):
            raise NoRationalSolution("q has a nonzero polynomial part", pf.polynomial_part)
        Q = F.one
        for p, cs in pf.pole_parts:
            if len(cs) > 1 and any(cs[1:]):
                raise NoRationalSolution(f"q has a higher-order pole at {p}", cs)
            r = as_rational(cs[0])
            if r is None or r.denominator != 1:
                raise NoRationalSolution(f"residue of q at {p} is not an integer", cs[0])
            lin = F.gen - F.coerce(p)
            Q = Q * lin ** (-int(r))
    R = rational_antiderivative(Q)
    if isinstance(R, MonodromyObstruction):
        raise NoRationalSolution("exp(-int q) has no rational antiderivative", R)
    if mode == "general":
        den = R + F.coerce(constant)
        if not den:
            raise NoRationalSolution("degenerate constant: denominator vanishes identically")
        f = Q / den
    elif mode == "singular_at_0":
        den = R - F.coerce(R.eval_at(K.zero))
        f = Q / den
    else:
        raise ValidationError(f"unknown riccati mode {mode!r}")
    return f


def riccati_residual(miura: MiuraOper, k, f):
    """f' + f^2 + f <alpha_k, u>, exactly."""
    return f.derivative() + f * f + f * miura.pairing(k)


def _ledger(ctx, old: MiuraOper, new: MiuraOper, points):
    out = {}
    for p in points:
        out[p] = (old.residue_coweight(p), new.residue_coweight(p))
    return out


def reproduce_simple(miura: MiuraOper, k, f, expect_rule_check=True) -> ReproductionResult:
    """Gauge by e^{f E_k}: new Miura is u + f coroot_k, provided f solves the
    Riccati equation in direction alpha_k."""
    ctx = miura.ctx
    alg = ctx.alg
    F = ctx.functions
    f = F.coerce(f)
    if riccati_residual(miura, k, f):
        raise RiccatiViolated(f"f does not satisfy the Riccati equation in direction {k+1}")
    g = GroupElement.exp(ctx, [f * c for c in alg.vec_E(alg.simple_root(k), F)])
    new = miura.add(k, f)
    check = gauge_transform(miura.connection(), g)
    assert all(a == b for a, b in zip(check.coeffs, new.connection().coeffs)), "reassembly failed"
    branch = "singular-at-0" if (f and not f.is_regular_at(0)) else "regular-at-0"
    led = _ledger(ctx, miura, new, [ctx.scalars.zero, INFINITY])
    if expect_rule_check:
        _check_simple_rules(ctx, miura, new, k, f)
    return ReproductionResult(miura, new, g, branch, led, is_equivariant(g, ctx.varsigma))


def _check_simple_rules(ctx, old, new, k, f):
    """Residue bookkeeping of the single-direction reproduction."""
    W = ctx.weyl
    sk = W.simple(k)
    before = old.residue_coweight(INFINITY)
    after = new.residue_coweight(INFINITY)
    # the DIFFERENTIAL f dt has a pole at infinity iff val_inf(f) <= 1
    has_pole = bool(f) and f.valuation_at_infinity() <= 1
    if has_pole:
        assert after == sk.dot(before), "res_inf rule violated"
    else:
        assert after == before


def reproduce_orbit_A1(miura: MiuraOper, orbit, k, f_k, branch) -> ReproductionResult:
    """Reproduction along an orbit of type A_1^x|I|: f_i defined recursively
    by f_i(t) = w^-1 f_{nu^-1(i)}(w^-1 t); the regular branch is cyclotomic
    iff <alpha_k, lam0 + rho> = 0 mod T/|I|, the singular branch always."""
    ctx = miura.ctx
    alg = ctx.alg
    F = ctx.functions
    K = ctx.scalars
    nu = ctx.nu
    folded = ctx.folded
    oi = folded.orbit_index(k)
    if tuple(sorted(folded.orbits[oi])) != tuple(sorted(orbit)):
        raise ValidationError("k does not belong to the given orbit")
    if folded.ell[oi] != 1:
        raise ValidationError("orbit is not of commuting type (ell != 1)")
    f_k = F.coerce(f_k)
    if riccati_residual(miura, k, f_k):
        raise RiccatiViolated("f_k does not satisfy (R^k)")
    size = len(orbit)
    T = ctx.tower.order
    w = ctx.omega
    winv = K.one / w
    fs = {k: f_k}
    cur_i, cur_f = k, f_k
    for _ in range(size - 1):
        nxt = nu.perm[cur_i]
        cur_f = cur_f.subs_scale(winv) * winv
        fs[nxt] = cur_f
        cur_i = nxt
        if riccati_residual(miura, cur_i, cur_f):
            raise RiccatiViolated(f"recursion produced a non-solution in direction {cur_i+1}")
    # detected branch
    singular = bool(f_k) and not f_k.is_regular_at(0)
    want_singular = branch == "singular"
    if want_singular != singular:
        raise ValidationError(f"f_k is {'singular' if singular else 'regular'} at 0, not {branch}")
    # cyclotomy: the closing functional relation on f_k alone
    wS = w ** size
    closes = f_k.subs_scale(K.one / wS) * (K.one / wS) == f_k
    lam0 = Coweight([-c for c in miura.residue_coweight(0).coords])
    pairing_val = as_rational((lam0 + rho_coweight(alg.rank)).coords[k])
    if singular:
        assert closes, "singular solutions must close up automatically"
    elif not closes:
        cond = f"<alpha_{k+1}, lam0 + rho> = {pairing_val} != 0 mod {T // size}"
        raise CyclotomyObstruction(f"reproduction is not cyclotomic: {cond}", condition=cond)
    g = GroupElement.identity(ctx)
    for i, fi in fs.items():
        vec = [fi * c for c in alg.vec_E(alg.simple_root(i), F)]
        g = g @ GroupElement.exp(ctx, vec)
    new = miura
    for i, fi in fs.items():
        new = new.add(i, fi)
    check = gauge_transform(miura.connection(), g)
    assert all(a == b for a, b in zip(check.coeffs, new.connection().coeffs)), "reassembly failed"
    cyc = is_equivariant(g, ctx.varsigma)
    assert cyc, "closing relation held but g is not equivariant"
    led = _ledger(ctx, miura, new, [K.zero, INFINITY])
    snu = folded.simple_reflections[oi]
    r0_old, r0_new = led[K.zero]
    if singular:
        neg = Coweight([-c for c in r0_old.coords])
        assert Coweight([-c for c in r0_new.coords]) == snu.dot(neg), "res_0 rule violated"
    else:
        assert r0_new == r0_old, "regular branch must not move res_0"
    ri_old, ri_new = led[INFINITY]
    pair_inf = as_rational((ri_old + rho_coweight(alg.rank)).coords[k])
    if pair_inf is not None and pair_inf >= 0 and f_k:
        assert ri_new == snu.dot(ri_old), "res_inf rule violated"
    return ReproductionResult(
        miura, new, g, "singular-at-0" if singular else "regular-at-0", led, cyc
    )


def a2_system_residuals(miura: MiuraOper, i, ibar, f1, f2, f3):
    """The three coupled Riccati residuals for the non-commuting orbit."""
    q = miura.pairing(i)
    qb = miura.pairing(ibar)
    r1 = 2 * f1.derivative() + f1 * f1 + 3 * f2 * f2 + (q + qb) * f1 + (q - qb) * f2
    r2 = 2 * f2.derivative() + 4 * f1 * f2 - 2 * f3 + (q + qb) * f2 + (q - qb) * f1
    r3 = 2 * f3.derivative() + 2 * f1 * f3 + f2 * (f1 * f1 - f2 * f2) + 2 * (q + qb) * f3
    return r1, r2, r3


def reproduce_orbit_A2(miura: MiuraOper, orbit, k, seed=None, g0=None, branch=None):
    """Reproduction along an orbit of type A_2^x(|I|/2).

    Either a seed (f1, f2, f3) for the reference point solves the coupled
    system, or g0 in the orbit subgroup cap N^theta is given and the generic
    route is taken."""
    ctx = miura.ctx
    folded = ctx.folded
    oi = folded.orbit_index(k)
    if folded.ell[oi] != 2:
        raise ValidationError("orbit is not of non-commuting type (ell != 2)")
    if seed is None:
        if g0 is None:
            raise ValidationError("need a seed or a g0")
        return reproduce_generic(miura, g0)
    alg = ctx.alg
    F = ctx.functions
    K = ctx.scalars
    nu = ctx.nu
    orbit = tuple(folded.orbits[oi])
    size = len(orbit)
    half = size // 2
    ibar = k
    for _ in range(half):
        ibar = nu.perm[ibar]
    f1, f2, f3 = (F.coerce(x) for x in seed)
    res = a2_system_residuals(miura, k, ibar, f1, f2, f3)
    if any(res):
        raise SeedNotSolution(f"seed does not solve the coupled system: {[str(r) for r in res]}")
    w = ctx.omega
    winv = K.one / w
    triples = {k: (f1, f2, f3)}
    cur = k
    for _ in range(half - 1):
        nxt = nu.perm[cur]
        a, b, c = triples[cur]
        triples[nxt] = (
            a.subs_scale(winv) * winv,
            b.subs_scale(winv) * winv,
            c.subs_scale(winv) * winv * winv,
        )
        cur = nxt
    g = GroupElement.identity(ctx)
    new = miura
    for i, (a, b, c) in triples.items():
        ib = i
        for _ in range(half):
            ib = nu.perm[ib]
        Ei = alg.vec_E(alg.simple_root(i), F)
        Eib = alg.vec_E(alg.simple_root(ib), F)
        Eibr = alg.bracket_vec(Ei, Eib, F)
        vec = [a * (x + y) + b * (x - y) + c * z for x, y, z in zip(Ei, Eib, Eibr)]
        g = g @ GroupElement.exp(ctx, vec)
        new = new.add(i, a + b).add(ib, a - b)
    out_conn = gauge_transform(miura.connection(), g)
    assert all(a == b for a, b in zip(out_conn.coeffs, new.connection().coeffs)), "reassembly failed"
    singular = any(not f.is_regular_at(0) for f in (f1, f2, f3) if f)
    if branch is not None:
        want_singular = branch == "singular"
        if want_singular != singular:
            raise ValidationError(f"seed is {'singular' if singular else 'regular'} at 0, not {branch}")
    cyc = is_equivariant(g, ctx.varsigma)
    if not cyc:
        mu = (Coweight([-c for c in miura.residue_coweight(0).coords]) + rho_coweight(alg.rank)).coords
        cond = (
            f"<alpha_k + alpha_kbar, lam0 + rho> = {as_rational(mu[k]) + as_rational(mu[ibar])}"
            f" != 0 mod {ctx.tower.order // size}"
        )
        raise CyclotomyObstruction(f"reproduction is not cyclotomic: {cond}", condition=cond)
    if singular:
        # only case (ii)(a) closes up: f1 ~ 2(eta+1)/t, f2 regular, f3 at
        # most a simple pole with zero residue
        pp1 = f1.principal_part_at(K.zero) if not f1.is_regular_at(0) else ()
        eta = as_rational(Coweight([-c for c in miura.residue_coweight(0).coords]).coords[k])
        assert pp1 and len(pp1) == 1 and as_rational(pp1[0]) == 2 * (eta + 1), "singular class is not (ii)(a)"
    led = _ledger(ctx, miura, new, [K.zero, INFINITY])
    snu = folded.simple_reflections[oi]
    r0_old, r0_new = led[K.zero]
    if singular:
        neg = Coweight([-c for c in r0_old.coords])
        assert Coweight([-c for c in r0_new.coords]) == snu.dot(neg), "res_0 rule violated"
    else:
        assert r0_new == r0_old
    return ReproductionResult(
        miura, new, g, "singular-at-0" if singular else "regular-at-0", led, cyc
    )


def theta_for(miura: MiuraOper, q=1):
    """The twist vartheta = Ad_{w^-lam0} o varsigma for this Miura oper,
    built over the q-sheeted cover when lam0 is not integral."""
    ctx = miura.ctx
    lam0 = Coweight([-c for c in miura.residue_coweight(0).coords])
    ctx2 = ctx.cover(q) if q > 1 else ctx
    K2 = ctx2.scalars
    wt = ctx2.tower.zeta  # primitive (qT)-th root
    taus = []
    for i in range(ctx.alg.rank):
        e = as_rational(lam0.coords[i])
        qe = e * q
        if qe.denominator != 1:
            raise ValidationError("q lam0 must be integral")
        taus.append((K2.one / wt) ** (q + int(qe)))
    return AlgebraAut(ctx.alg, ctx.nu, taus, K2, order_divides=ctx2.tower.order, kind="vartheta")


def reproduce_generic(miura: MiuraOper, g0) -> ReproductionResult:
    """Thm-style generic reproduction: solve the regularised connection,
    factor Y g0^-1 = n^-1 Y~, and conjugate n back by the torus.

    g0: an algebra vector spanning n^theta coordinates (exp is taken), or a
    GroupElement."""
    ctx = miura.ctx
    alg = ctx.alg
    K = ctx.scalars
    lam0 = Coweight([-c for c in miura.residue_coweight(0).coords])
    if not lam0.is_rational():
        raise ValidationError("lam0 must be rational")
    if not lam0.is_dominant():
        raise ValidationError("lam0 must be dominant")
    q = 1
    for c in lam0.coords:
        q = q * as_rational(c).denominator // _gcd(q, as_rational(c).denominator)
    conn = miura.connection()
    if q > 1:
        conn2, ctx2 = lift_to_cover(conn, q)
        lam_reg = lam0.scale(Fraction(q))
    else:
        conn2, ctx2 = conn, ctx
        lam_reg = lam0
    theta = theta_for(miura, q)
    F2 = ctx2.functions
    if isinstance(g0, GroupElement):
        g0vec = g0.log_vec()
    else:
        g0vec = [F2.coerce(c) for c in g0]
    if any(g0vec[i] for i in range(alg.dim) if alg.height_of[i] <= 0):
        raise FixedPointViolation("g0 must be unipotent (supported on n)")
    moved = theta.apply_vec(g0vec, F2)
    if not all(a == b for a, b in zip(moved, [F2.coerce(c) for c in g0vec])):
        raise FixedPointViolation("g0 is not vartheta-fixed")
    g0el = GroupElement.exp(ctx2, [F2.coerce(c) for c in g0vec], tag="N")
    reg = regularize(conn2, lam_reg).with_shape("b-")
    Y = solve_fundamental(reg, 0)
    if isinstance(Y, MonodromyObstruction):
        raise Y
    n, Ytil = gauss_factorize(Y @ g0el.inverse())
    gtil = n.conjugate_by_torus(Coweight([-c for c in lam_reg.coords]))
    if q > 1:
        base_F = ctx.functions
        mat = gtil.mat.map_entries(lambda f: f.descend_power(q, base_F))
        inv = gtil.inv.map_entries(lambda f: f.descend_power(q, base_F))
        mat.K = base_F
        inv.K = base_F
        g = GroupElement(ctx, mat, inv, tag="N")
    else:
        g = gtil
    out = gauge_transform(miura.connection(), g)
    # must be a Miura oper again
    for i, c in enumerate(out.coeffs):
        if alg.height_of[i] > 0 and c:
            raise NotInOpenCell(None, "generic reproduction left positive components")
    new_u = [out.coeffs[alg.index_H[j]] for j in range(alg.rank)]
    new = MiuraOper(ctx, new_u)
    cyc = new.is_cyclotomic()
    assert cyc, "generic reproduction must be cyclotomic for theta-fixed g0"
    led = _ledger(ctx, miura, new, [K.zero, INFINITY])
    r0_old, r0_new = led[K.zero]
    assert r0_new == r0_old, "generic reproduction must preserve res_0"
    # initial-value certificate: the regularised gauge parameter at 0 is g0
    assert n.eval_at(0, ctx2.scalars) == g0el.eval_at(0, ctx2.scalars), "g_r(0) != g0"
    res = ReproductionResult(miura, new, g, "regular-at-0", led, cyc)
    res.fundamental = Y
    res.factor_n = n
    res.factor_b = Ytil
    res.cover_power = q
    return res


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
