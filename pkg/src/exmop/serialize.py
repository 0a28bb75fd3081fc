"""JSON encoding of the exact objects.

Rationals are written as ``"p/q"`` strings so nothing passes through floats.
Every encoder has a matching decoder and ``dumps`` is deterministic (sorted
keys, fixed indentation), so encode -> decode -> encode is byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import Poly, RatFunc, RatMat
from .darboux import TransformResult
from .diffops import DiffOp
from .kernels import Kernel
from .weights import ExactMatrix, PointMass, WeightSpec

SCHEMA = "exmop/1"


def enc_q(x) -> str:
    return str(Fraction(x))


def dec_q(s) -> Fraction:
    return Fraction(s)


def enc_poly(p: Poly) -> list:
    return [enc_q(c) for c in p.c]


def dec_poly(v) -> Poly:
    return Poly([dec_q(c) for c in v])


def enc_ratfunc(f: RatFunc):
    if f.is_poly():
        return {"num": enc_poly(f.num)}
    return {"num": enc_poly(f.num), "den": enc_poly(f.den)}


def dec_ratfunc(v) -> RatFunc:
    den = dec_poly(v["den"]) if "den" in v else None
    return RatFunc(dec_poly(v["num"]), den)


def enc_ratmat(m: RatMat) -> list:
    return [[enc_ratfunc(x) for x in row] for row in m.rows]


def dec_ratmat(v) -> RatMat:
    return RatMat([[dec_ratfunc(x) for x in row] for row in v])


def enc_kernel(k: Kernel) -> dict:
    return {"exp_arg": enc_poly(k.exp_arg), "powers": [[enc_q(c), enc_q(g)] for c, g in k.powers]}


def dec_kernel(v) -> Kernel:
    return Kernel(dec_poly(v["exp_arg"]), tuple((dec_q(c), dec_q(g)) for c, g in v["powers"]))


def enc_weight(w: WeightSpec) -> dict:
    lo, hi = w.support
    return {
        "type": "weight",
        "support": [None if lo is None else enc_q(lo), None if hi is None else enc_q(hi)],
        "kernel": enc_kernel(w.kernel),
        "density": enc_ratmat(w.density),
        "point_masses": [
            {"t0": enc_q(pm.t0), "zeta": enc_q(pm.zeta), "matrix": enc_ratmat(pm.matrix)} for pm in w.point_masses
        ],
        "unit_normalized": w.unit_normalized,
    }


def dec_weight(v) -> WeightSpec:
    lo, hi = v["support"]
    pms = tuple(PointMass(dec_q(p["t0"]), dec_q(p["zeta"]), dec_ratmat(p["matrix"])) for p in v["point_masses"])
    return WeightSpec(
        (None if lo is None else dec_q(lo), None if hi is None else dec_q(hi)),
        dec_kernel(v["kernel"]),
        dec_ratmat(v["density"]),
        pms,
        bool(v["unit_normalized"]),
    )


def enc_diffop(D: DiffOp) -> dict:
    return {"type": "diffop", "coeffs": [enc_ratmat(c) for c in D.coeffs]}


def dec_diffop(v) -> DiffOp:
    return DiffOp([dec_ratmat(c) for c in v["coeffs"]])


def enc_exact_matrix(m: ExactMatrix) -> dict:
    return {"entries": [[enc_q(x) for x in row] for row in m.entries], "unit": m.unit}


def dec_exact_matrix(v) -> ExactMatrix:
    return ExactMatrix(tuple(tuple(dec_q(x) for x in row) for row in v["entries"]), v["unit"])


def enc_transform(r: TransformResult) -> dict:
    return {
        "type": "transform",
        "Dhat": enc_diffop(r.Dhat),
        "polys": {str(n): enc_ratmat(P) for n, P in sorted(r.polys.items())},
        "gaps": sorted(r.gaps),
        "eigenvalues": {str(n): enc_ratmat(G) for n, G in sorted(r.eigenvalues.items())},
    }


def dec_transform(v) -> TransformResult:
    return TransformResult(
        dec_diffop(v["Dhat"]),
        {int(n): dec_ratmat(P) for n, P in v["polys"].items()},
        frozenset(v["gaps"]),
        {int(n): dec_ratmat(G) for n, G in v["eigenvalues"].items()},
    )


def enc_polys(polys: dict) -> dict:
    return {str(n): enc_ratmat(P) for n, P in sorted(polys.items())}


def dec_polys(v) -> dict:
    return {int(n): dec_ratmat(P) for n, P in v.items()}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def loads(s: str):
    return json.loads(s)


__all__ = [
    "SCHEMA",
    "dec_diffop",
    "dec_exact_matrix",
    "dec_kernel",
    "dec_poly",
    "dec_polys",
    "dec_q",
    "dec_ratfunc",
    "dec_ratmat",
    "dec_transform",
    "dec_weight",
    "dumps",
    "enc_diffop",
    "enc_exact_matrix",
    "enc_kernel",
    "enc_poly",
    "enc_polys",
    "enc_q",
    "enc_ratfunc",
    "enc_ratmat",
    "enc_transform",
    "enc_weight",
    "loads",
]
