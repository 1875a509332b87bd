"""g-valued rational connections d + A(t) dt on the projective line, group
elements in the adjoint representation, gauge transformations, equivariance
tests, residues, regularisation and the cover lift."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .automorphisms import AlgebraAut, as_int
from .context import OperContext
from .errors import (
    MalformedOper,
    NonIntegralAfterCover,
    NonIntegralCoweight,
    ValidationError,
)
from .linalg import SparseMat, mat_inverse
from .ratfunc import INFINITY, RatFunc
from .weyl import Coweight, coweight_to_h, h_to_coweight

SHAPES = ("general", "b", "b-", "h", "oper")


@dataclass
class Connection:
    """d + A(t) dt with A stored as a coefficient vector over the Chevalley
    basis, entries rational functions of the global coordinate."""

    ctx: OperContext
    coeffs: list
    shape: str = "general"

    def __post_init__(self):
        F = self.ctx.functions
        self.coeffs = [F.coerce(c) for c in self.coeffs]
        if self.shape not in SHAPES:
            raise ValidationError(f"unknown shape {self.shape!r}")
        self.validate_shape()

    # ---- shape ---------------------------------------------------------------
    def validate_shape(self):
        alg = self.ctx.alg
        if self.shape == "general":
            return
        for idx, c in enumerate(self.coeffs):
            h = alg.height_of[idx]
            if self.shape == "b" and h < 0 and c:
                raise MalformedOper("claimed b-valued but has negative components")
            if self.shape == "b-" and h > 0 and c:
                raise MalformedOper("claimed b_- valued but has positive components")
            if self.shape == "h" and h != 0 and c:
                raise MalformedOper("claimed h-valued but has off-Cartan components")
            if self.shape == "oper":
                if h < 0:
                    kind, r = alg.basis[idx]
                    want = self.ctx.functions.one if sum(r) == 1 else self.ctx.functions.zero
                    if c != want:
                        raise MalformedOper("claimed oper form but F-part is not p_-1")
        return True

    def with_shape(self, shape):
        return Connection(self.ctx, list(self.coeffs), shape)

    # ---- algebra -------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Connection):
            return Connection(
                self.ctx, [a + b for a, b in zip(self.coeffs, other.coeffs)], "general"
            )
        return NotImplemented

    def add_vec(self, vec, shape=None):
        return Connection(
            self.ctx, [a + b for a, b in zip(self.coeffs, vec)], shape or "general"
        )

    def b_part(self):
        alg = self.ctx.alg
        return [
            c if alg.height_of[i] >= 0 else self.ctx.functions.zero
            for i, c in enumerate(self.coeffs)
        ]

    def h_part(self):
        alg = self.ctx.alg
        return [
            c if alg.height_of[i] == 0 else self.ctx.functions.zero
            for i, c in enumerate(self.coeffs)
        ]

    def height_component(self, h):
        alg = self.ctx.alg
        out = [self.ctx.functions.zero] * alg.dim
        for i in alg.blocks.get(h, []):
            out[i] = self.coeffs[i]
        return out

    def h_coweight(self):
        """The h-part as a Coweight of rational functions."""
        return h_to_coweight(self.ctx.alg, self.h_part())

    def is_zero(self):
        return not any(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Connection):
            return NotImplemented
        return self.ctx.alg is other.ctx.alg and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    # ---- analysis ---------------------------------------------------------------
    def residue_at(self, p):
        """Entrywise residue: an algebra vector over the scalar field."""
        K = self.ctx.scalars
        return [K.coerce(c.residue_at(p)) for c in self.coeffs]

    def residue_coweight(self, p) -> Coweight:
        """Residue of the h-part as a Coweight (exact scalars)."""
        alg = self.ctx.alg
        res = self.residue_at(p)
        return h_to_coweight(alg, res)

    def is_regular_at(self, p):
        return all(c.is_regular_at(p) for c in self.coeffs)

    def poles(self, extra_points=()):
        from .ratfunc import poles_of

        seen = []
        for c in self.coeffs:
            if c:
                for p, m in poles_of(c, extra_points):
                    if all(p != q for q, _ in seen):
                        seen.append((p, m))
        return seen

    # ---- transforms -----------------------------------------------------------
    def subs_scale(self, c):
        return Connection(self.ctx, [f.subs_scale(c) for f in self.coeffs], "general")

    def __repr__(self):
        alg = self.ctx.alg
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                kind, r = alg.basis[i]
                lbl = f"{kind}{r}" if kind != "H" else f"H{r+1}"
                parts.append(f"{lbl}: {c}")
        return "Connection(d + [" + "; ".join(parts) + "] dt)"


@dataclass
class GroupElement:
    """Invertible adjoint-representation matrix over the function field,
    with its inverse carried along."""

    ctx: OperContext
    mat: SparseMat
    inv: SparseMat
    tag: str = None

    @classmethod
    def identity(cls, ctx):
        n = ctx.alg.dim
        F = ctx.functions
        return cls(ctx, SparseMat.identity(F, n), SparseMat.identity(F, n), tag="H")

    @classmethod
    def exp(cls, ctx, vec, tag=None):
        """exp(ad_X) for a nilpotent algebra vector X over the functions."""
        F = ctx.functions
        vec = [F.coerce(v) for v in vec]
        mat = _exp_ad(ctx, vec)
        inv = _exp_ad(ctx, [-v for v in vec])
        if tag is None:
            tag = "N" if all(
                not v or ctx.alg.height_of[i] > 0 for i, v in enumerate(vec)
            ) else None
        return cls(ctx, mat, inv, tag=tag)

    @classmethod
    def torus(cls, ctx, lam: Coweight, base=None, tag="H"):
        """base^lam as a diagonal matrix: base^(<beta, lam>) on each root
        space, identity on h.  base defaults to the coordinate t."""
        F = ctx.functions
        base = F.gen if base is None else F.coerce(base)
        alg = ctx.alg
        mat = SparseMat(F, alg.dim, alg.dim)
        inv = SparseMat(F, alg.dim, alg.dim)
        for idx, (kind, r) in enumerate(alg.basis):
            if kind == "H":
                mat.rows[idx][idx] = F.one
                inv.rows[idx][idx] = F.one
            else:
                root = r if kind == "E" else tuple(-x for x in r)
                e = _integer_pairing(lam, root)
                mat.rows[idx][idx] = base ** e
                inv.rows[idx][idx] = base ** (-e)
        return cls(ctx, mat, inv, tag=tag)

    @classmethod
    def from_constant(cls, ctx, dense, inv_dense=None, tag=None):
        F = ctx.functions
        m = SparseMat.from_dense(F, [[F.coerce(x) for x in row] for row in dense])
        if inv_dense is None:
            inv_dense = mat_inverse(ctx.scalars, [[ctx.scalars.coerce(x) for x in row] for row in dense])
            if inv_dense is None:
                raise ValidationError("constant matrix is not invertible")
        mi = SparseMat.from_dense(F, [[F.coerce(x) for x in row] for row in inv_dense])
        return cls(ctx, m, mi, tag=tag)

    @classmethod
    def weyl_representative(cls, ctx, w):
        """dot-w = prod over the word of exp(E_i) exp(-F_i) exp(E_i)."""
        g = cls.identity(ctx)
        F = ctx.functions
        alg = ctx.alg
        for i in w.word:
            r = alg.simple_root(i)
            e = cls.exp(ctx, alg.vec_E(r, F))
            f = cls.exp(ctx, [-x for x in alg.vec_F(r, F)])
            g = g @ (e @ f @ e)
        return replace(g, tag="W-rep")

    def __matmul__(self, other):
        if isinstance(other, GroupElement):
            return GroupElement(
                self.ctx, self.mat @ other.mat, other.inv @ self.inv, tag=None
            )
        return NotImplemented

    def inverse(self):
        return GroupElement(self.ctx, self.inv, self.mat, tag=self.tag)

    def ad_apply(self, vec):
        """Ad_g X for an algebra vector X."""
        return self.mat.apply([self.ctx.functions.coerce(v) for v in vec])

    def derivative_matrix(self):
        return self.mat.map_entries(lambda f: f.derivative())

    def dlog(self):
        """dg g^-1 as an algebra vector."""
        M = self.derivative_matrix() @ self.inv
        return self.ctx.matrix_to_vec(M)

    def eval_at(self, p, K=None):
        """Dense scalar matrix g(p)."""
        K = K or self.ctx.scalars
        n = self.mat.nrows
        out = [[K.zero] * n for _ in range(n)]
        for i, row in enumerate(self.mat.rows):
            for j, f in row.items():
                out[i][j] = f.eval_at(p) if p != INFINITY else f.eval_at_infinity()
        return out

    def is_regular_at(self, p):
        return all(f.is_regular_at(p) for row in self.mat.rows for f in row.values())

    def log_vec(self):
        """X with exp(ad_X) = self (requires unipotent)."""
        F = self.ctx.functions
        n = self.mat.nrows
        N = self.mat.add(SparseMat.identity(F, n).scale(-F.one))
        term = N
        total = N
        k = 2
        while any(term.rows[i] for i in range(n)):
            term = term @ N
            if not any(term.rows[i] for i in range(n)):
                break
            total = total.add(term.scale(F.coerce(Fraction((-1) ** (k + 1), k))))
            k += 1
            if k > 2 * n:
                raise ValidationError("log series did not terminate; not unipotent")
        return self.ctx.matrix_to_vec(total)

    def conjugate_by_torus(self, lam: Coweight, base=None):
        """t^-lam g t^lam (the regularised gauge parameter)."""
        T = GroupElement.torus(self.ctx, lam, base)
        return GroupElement(self.ctx, (T.inv @ self.mat) @ T.mat, (T.inv @ self.inv) @ T.mat, tag=self.tag)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.mat == other.mat

    def __repr__(self):
        return f"GroupElement(tag={self.tag}, {self.mat!r})"


def _integer_pairing(lam: Coweight, root):
    acc = None
    for c, q in zip(lam.coords, root):
        if q:
            term = c * q
            acc = term if acc is None else acc + term
    if acc is None:
        return 0
    return as_int(acc)


def _exp_ad(ctx, vec):
    F = ctx.functions
    n = ctx.alg.dim
    A = ctx.alg.ad_of_vec(vec, F)
    out = SparseMat.identity(F, n)
    term = SparseMat.identity(F, n)
    k = 1
    while True:
        term = A @ term
        if not any(term.rows[i] for i in range(n)):
            break
        out = out.add(term.scale(F.coerce(Fraction(1, _fact(k)))))
        # use incremental scaling instead: term holds A^k, scale by 1/k!
        k += 1
        if k > 2 * ctx.alg.height_max + 4:
            raise MalformedOper("exp did not terminate; element not nilpotent")
    return out


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def gauge_transform(conn: Connection, g: GroupElement) -> Connection:
    """g . (d + A dt) = d - dg g^-1 + Ad_g A."""
    new = g.ad_apply(conn.coeffs)
    dlog = g.dlog()
    coeffs = [a - b for a, b in zip(new, dlog)]
    shape = "general"
    out = Connection(conn.ctx, coeffs, shape)
    return out


def as_oper(conn: Connection) -> Connection:
    return conn.with_shape("oper")


def is_equivariant(obj, aut: AlgebraAut, omega=None) -> bool:
    """Gamma-equivariance: for differentials A dt the condition is
    omega^-1 aut(A(omega^-1 t)) = A(t); for group elements
    aut(g(omega^-1 t)) = g(t) as matrices."""
    if isinstance(obj, Connection):
        ctx = obj.ctx
        w = omega if omega is not None else ctx.omega
        winv = ctx.scalars.one / w
        shifted = [c.subs_scale(winv) for c in obj.coeffs]
        moved = aut.apply_vec(shifted, ctx.functions)
        moved = [winv * c for c in moved]
        return all(a == b for a, b in zip(moved, obj.coeffs))
    if isinstance(obj, GroupElement):
        ctx = obj.ctx
        w = omega if omega is not None else ctx.omega
        winv = ctx.scalars.one / w
        F = ctx.functions
        n = ctx.alg.dim
        shifted = obj.mat.map_entries(lambda f: f.subs_scale(winv))
        U = SparseMat(F, n, n)
        Ui = SparseMat(F, n, n)
        for i in range(n):
            img, fac = aut.image[i], aut.factor[i]
            U.rows[img][i] = F.coerce(fac)
            Ui.rows[i][img] = F.one / F.coerce(fac)
        moved = (U @ shifted) @ Ui
        return moved == obj.mat
    # plain algebra vector of functions
    ctx, vec = obj
    w = omega if omega is not None else ctx.omega
    winv = ctx.scalars.one / w
    shifted = [ctx.functions.coerce(c).subs_scale(winv) for c in vec]
    moved = aut.apply_vec(shifted, ctx.functions)
    return all(a == b for a, b in zip(moved, [ctx.functions.coerce(c) for c in vec]))


def connection_residue(conn: Connection, x):
    return conn.residue_at(x)


def regularize(conn: Connection, lam0: Coweight, base=None) -> Connection:
    """t^-lam0 (d + A) t^lam0; needs lam0 integral."""
    if not lam0.is_integral():
        raise NonIntegralCoweight(f"regularisation needs an integral coweight: {lam0}")
    g = GroupElement.torus(conn.ctx, Coweight([-c for c in lam0.coords]), base)
    return gauge_transform(conn, g)


def lift_to_cover(conn: Connection, q: int):
    """Pullback along t = u^q, including the q u^(q-1) du Jacobian.
    Returns (cover_connection, cover_context)."""
    if q < 1:
        raise ValidationError("q must be >= 1")
    if q == 1:
        return conn, conn.ctx
    ctx2 = conn.ctx.cover(q)
    F2 = ctx2.functions
    u = F2.gen
    jac = q * u ** (q - 1)
    coeffs = [jac * c.subs_power(q, F2) for c in conn.coeffs]
    return Connection(ctx2, coeffs, conn.shape if conn.shape != "oper" else "general"), ctx2


def cover_varsigma(ctx_cover: OperContext, q: int):
    """The equivariance automorphism of lifted connections: rotation by the
    (qT)-th root pairs with the BASE automorphism varsigma, whose taus are
    omega^-1 = (zeta_{qT})^-q."""
    from .automorphisms import make_automorphism

    K = ctx_cover.scalars
    wt = ctx_cover.tower.zeta
    taus = [(K.one / wt) ** q] * ctx_cover.alg.rank
    return make_automorphism(
        ctx_cover.alg, ctx_cover.nu, "sigma", tower=ctx_cover.tower, taus=taus
    )


def monodromy_at_origin(ctx: OperContext, lam0: Coweight, q: int) -> GroupElement:
    """e^{2 pi i lam0} = zeta_q^{q lam0} as an exact diagonal matrix over
    Q(zeta_{qT}); needs q lam0 integral."""
    qlam = lam0.scale(Fraction(q))
    if not qlam.is_integral():
        raise NonIntegralAfterCover(f"{q} * {lam0} is not integral")
    ctx2 = ctx.cover(q) if q > 1 else ctx
    K = ctx2.scalars
    zq = ctx2.tower.zeta_power(ctx.tower.order) if q > 1 else K.one  # zeta_q = zeta_{qT}^T
    alg = ctx.alg
    F2 = ctx2.functions
    mat = SparseMat(F2, alg.dim, alg.dim)
    inv = SparseMat(F2, alg.dim, alg.dim)
    for idx, (kind, r) in enumerate(alg.basis):
        if kind == "H":
            mat.rows[idx][idx] = F2.one
            inv.rows[idx][idx] = F2.one
        else:
            root = r if kind == "E" else tuple(-x for x in r)
            e = _integer_pairing(qlam, root)
            mat.rows[idx][idx] = F2.coerce(zq ** e)
            inv.rows[idx][idx] = F2.coerce(zq ** (-e))
    return GroupElement(ctx2, mat, inv, tag="H")
