import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cycloper.automorphisms import DiagramAut
from cycloper.context import OperContext
from cycloper.miura import build_miura
from cycloper.tower import ScalarTower
from cycloper.weyl import Coweight

FIXTURES = Path(__file__).resolve().parent / "fixtures"


def sl3_context(T):
    return OperContext("A2", ScalarTower.get(T), DiagramAut.from_cycles(2, [[1, 2]]))


def sl3_miura(T, eta):
    ctx = sl3_context(T)
    return ctx, build_miura(ctx, Coweight((Fraction(eta), Fraction(eta))))


def sl4_context(T, params=("z",)):
    return OperContext("A3", ScalarTower.get(T, params), DiagramAut.from_cycles(3, [[1, 3]]))


def sl4_miura(S, eta, kappa):
    """The two-site example: coweight eta(w1+w3)+kappa w2 at 0, omega_1 at z."""
    ctx = sl4_context(2 * S)
    z = ctx.scalars.coerce(ctx.tower.param("z"))
    lam0 = Coweight((Fraction(eta), Fraction(kappa), Fraction(eta)))
    w1 = Coweight((Fraction(1), Fraction(0), Fraction(0)))
    return ctx, build_miura(ctx, lam0, sites=[(z, w1)])


def sl4_miura_at(S, eta, kappa, zval):
    """Same example with the site location instantiated to a rational."""
    ctx = sl4_context(2 * S, params=())
    lam0 = Coweight((Fraction(eta), Fraction(kappa), Fraction(eta)))
    w1 = Coweight((Fraction(1), Fraction(0), Fraction(0)))
    return ctx, build_miura(ctx, lam0, sites=[(Fraction(zval), w1)])


def fSl3_seed(ctx, mu, a, b, c):
    """Closed-form solutions of the coupled sl3 system, in the eigenbasis
    (E1+E2, E1-E2, [E1,E2])."""
    F = ctx.functions
    t = F.gen
    a, b, c = F.coerce(a), F.coerce(b), F.coerce(c)
    mu = int(mu)
    d1 = (a * b + 2 * c) * t ** (2 * mu) + 4 * mu * a * t ** mu + F.coerce(4 * mu * mu)
    d2 = (a * b - 2 * c) * t ** (2 * mu) + 4 * mu * b * t ** mu + F.coerce(4 * mu * mu)
    ft1 = 2 * mu * t ** (mu - 1) * ((a * b + 2 * c) * t ** mu + 2 * mu * a) / d1
    ft2 = 2 * mu * t ** (mu - 1) * ((a * b - 2 * c) * t ** mu + 2 * mu * b) / d2
    ft3 = (
        4 * mu ** 3
        * t ** (2 * mu - 2)
        * (((a * b + 2 * c) * b - (a * b - 2 * c) * a) * t ** mu + 4 * mu * c)
        / (d1 * d2)
    )
    half = F.coerce(Fraction(1, 2))
    return ((ft1 + ft2) * half, (ft1 - ft2) * half, ft3)
