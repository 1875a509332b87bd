"""Problem files: JSON descriptions of a cyclotomic oper/Gaudin setup with
every scalar written exactly (rationals, zeta, named parameters)."""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .automorphisms import DiagramAut, make_automorphism
from .bethe import BetheSystemData
from .cartan import CartanDatum
from .chevalley import build_algebra
from .context import OperContext
from .errors import ParseError, ValidationError
from .tower import ScalarTower
from .weyl import Coweight


def parse_scalar(text, tower: ScalarTower, env=None, allow_t=False):
    """Exact scalar expressions: integer literals, 'zeta', parameter names,
    + - * / ** and parentheses; with allow_t also the coordinate."""
    env = env or {}
    try:
        # rendered output writes powers with a caret; accept both spellings
        node = ast.parse(str(text).replace("^", "**"), mode="eval").body
    except SyntaxError as e:
        raise ParseError(f"bad scalar expression {text!r}: {e}")

    field_ = tower.functions if allow_t else tower.scalars

    def ev(n):
        if isinstance(n, ast.BinOp):
            a, b = ev(n.left), ev(n.right)
            if isinstance(n.op, ast.Add):
                return a + b
            if isinstance(n.op, ast.Sub):
                return a - b
            if isinstance(n.op, ast.Mult):
                return a * b
            if isinstance(n.op, ast.Div):
                return a / b
            if isinstance(n.op, ast.Pow):
                if isinstance(b, Fraction) and b.denominator == 1:
                    b = int(b)
                if not isinstance(b, int):
                    raise ParseError(f"exponent must be an integer literal in {text!r}")
                return a ** b
            raise ParseError(f"unsupported operator in {text!r}")
        if isinstance(n, ast.UnaryOp):
            v = ev(n.operand)
            if isinstance(n.op, ast.USub):
                return -v
            if isinstance(n.op, ast.UAdd):
                return v
            raise ParseError(f"unsupported unary operator in {text!r}")
        if isinstance(n, ast.Constant):
            if isinstance(n.value, int):
                return Fraction(n.value)
            raise ParseError(f"only integer literals allowed, got {n.value!r}")
        if isinstance(n, ast.Name):
            name = n.id
            if name in env:
                return env[name]
            if name == "zeta":
                return field_.coerce(tower.zeta)
            if allow_t and name == tower.var:
                return tower.functions.gen
            try:
                return field_.coerce(tower.param(name))
            except KeyError:
                raise ParseError(f"unknown name {name!r} in {text!r}")
        raise ParseError(f"unsupported syntax in {text!r}")

    return field_.coerce(ev(node))


def parse_instantiate(spec: str):
    """'a=1/2,z=3' -> {'a': '1/2', 'z': '3'} (values parsed later against the
    tower)."""
    out = {}
    if not spec:
        return out
    for part in spec.split(","):
        if "=" not in part:
            raise ParseError(f"bad --instantiate entry {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


@dataclass
class ProblemFile:
    ctx: OperContext
    lam0: Coweight
    w0: object
    sites: list          # (z, Coweight, WeylElement|None)
    extra: list          # (x, WeylElement)
    bethe: BetheSystemData
    options: dict
    raw: dict


def _require(d, key, where):
    if key not in d:
        raise ParseError(f"missing key {key!r} in {where}")
    return d[key]


def parse_problem(path_or_dict, instantiate=None) -> ProblemFile:
    instantiate = instantiate or {}
    if isinstance(path_or_dict, dict):
        raw = path_or_dict
    else:
        try:
            with open(path_or_dict) as fh:
                raw = json.load(fh)
        except OSError as e:
            raise ParseError(f"cannot read problem file: {e}")
        except json.JSONDecodeError as e:
            raise ParseError(f"problem file is not valid JSON: line {e.lineno}: {e.msg}")

    alg_spec = _require(raw, "algebra", "problem")
    form_scales = None
    if "form_scales" in raw:
        form_scales = [Fraction(s) for s in raw["form_scales"]]
    if isinstance(alg_spec, str):
        alg = build_algebra(CartanDatum.from_label(alg_spec), form_scales)
    elif isinstance(alg_spec, dict) and "cartan" in alg_spec:
        alg = build_algebra(CartanDatum.from_rows(alg_spec["cartan"]), form_scales)
    else:
        raise ParseError("algebra must be a type label or {'cartan': rows}")

    T = int(raw.get("T", 1))
    declared = list(raw.get("parameters", []))
    params = tuple(p for p in declared if p not in instantiate)
    tower = ScalarTower.get(T, params)
    env = {}
    for name, val in instantiate.items():
        if name not in declared:
            raise ParseError(f"--instantiate names unknown parameter {name!r}")
        env[name] = parse_scalar(val, tower)

    rank = alg.rank
    nu = (
        DiagramAut.from_cycles(rank, raw["nu"]) if raw.get("nu") else DiagramAut.identity(rank)
    )
    ctx = OperContext(alg, tower, nu)
    W = ctx.weyl

    def coweight(coords, where):
        if len(coords) != rank:
            raise ValidationError(f"{where}: expected {rank} coordinates")
        return Coweight(tuple(parse_scalar(c, tower, env) for c in coords))

    def word(entry):
        if entry is None:
            return None
        for i in entry:
            if not 1 <= int(i) <= rank:
                raise ValidationError(f"Weyl word letter {i} out of range")
        return W.from_word([int(i) - 1 for i in entry])

    lam0 = coweight(raw.get("lambda0", ["0"] * rank), "lambda0")
    w0 = word(raw.get("w0"))
    sites = []
    for s in raw.get("sites", []):
        z = parse_scalar(_require(s, "z", "site"), tower, env)
        cw = coweight(_require(s, "coweight", "site"), "site coweight")
        sites.append((z, cw, word(s.get("w"))))
    extra = []
    for s in raw.get("extra_poles", []):
        x = parse_scalar(_require(s, "x", "extra pole"), tower, env)
        y = word(_require(s, "y", "extra pole"))
        extra.append((x, y))

    bethe = None
    if "bethe" in raw:
        b = raw["bethe"]
        if b.get("sigma_taus"):
            taus = [parse_scalar(x, tower, env) for x in b["sigma_taus"]]
            sigma = make_automorphism(alg, nu, "sigma", tower=tower, taus=taus)
        else:
            sigma = ctx.varsigma
        bsites = []
        for s in b.get("sites", []):
            z = parse_scalar(_require(s, "z", "bethe site"), tower, env)
            wcoords = coweight(_require(s, "weight", "bethe site"), "bethe weight")
            bsites.append((z, wcoords))
        colours = [int(c) - 1 for c in b.get("colours", [])]
        for c in colours:
            if not 0 <= c < rank:
                raise ValidationError(f"colour {c+1} out of range")
        roots = [parse_scalar(x, tower, env) for x in b.get("roots", [])]
        bethe = BetheSystemData(ctx, sigma, bsites, colours, roots)

    return ProblemFile(
        ctx=ctx,
        lam0=lam0,
        w0=w0,
        sites=sites,
        extra=extra,
        bethe=bethe,
        options=raw.get("options", {}),
        raw=raw,
    )
