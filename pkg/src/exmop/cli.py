"""Command line entry point: build families, run examples, re-verify and export artifacts.

Every command that verifies something writes a JSON report (even when it
fails) and exits nonzero when any check fails.  Output paths default to the
directory named by ``EXMOP_OUT_DIR`` (or the working directory).
"""

from __future__ import annotations

import argparse
import csv
import inspect
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import serialize as S
from .algebra import Poly
from .darboux import DarbouxError
from .diffops import eigencheck, symmetry_check
from .families.classical import gegenbauer_family, hermite_family, laguerre_family
from .families.examples import PIPELINES, ExampleResult
from .verify.conjugation import conjugation_check
from .verify.quadrature import PoleOnSupport, absorb_endpoint_factors, numeric_gram
from .verify.recurrence import fit_recurrence
from .verify.report import Report, exact, numeric
from .weights import UnsupportedWeight, WeightSpec

log = logging.getLogger("exmop")

OUT_DIR_ENV = "EXMOP_OUT_DIR"
MANIFEST = "manifest.json"
FAMILIES = {
    "hermite": (hermite_family, ("a", "xi")),
    "laguerre": (laguerre_family, ("a", "alpha")),
    "gegenbauer": (gegenbauer_family, ("a", "r")),
}


class UsageError(ValueError):
    pass


def out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def _resolve(path: str | None, default: str) -> Path:
    if path:
        return Path(path)
    return out_dir() / default


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.info("wrote %s", path)


def parse_params(text: str | None) -> dict:
    """``"a=2,xi=-3"`` -> ``{"a": Fraction(2), "xi": Fraction(-3)}``."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"bad parameter {item!r}; expected key=value")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = Fraction(v.strip())
        except ValueError as exc:
            raise UsageError(f"parameter {k!r} is not rational: {v!r}") from exc
    return out


def parse_grid(text: str) -> list:
    """``"lo:hi:step"`` -> exact grid points from lo to hi inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"bad grid {text!r}; expected lo:hi:step")
    lo, hi, step = (Fraction(p) for p in parts)
    if step <= 0 or hi < lo:
        raise UsageError("grid needs step > 0 and hi >= lo")
    n = int((hi - lo) / step)
    return [lo + k * step for k in range(n + 1)]


def _load(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if data.get("schema") != S.SCHEMA:
        raise UsageError(f"{path}: not an exmop data file")
    return data


# ---------------------------------------------------------------------------
# data files


def family_data(kind: str, params: dict, max_n: int) -> dict:
    ctor, names = FAMILIES[kind]
    missing = [k for k in names if k not in params]
    if missing:
        raise UsageError(f"{kind} family needs parameters {missing}")
    extra = sorted(set(params) - set(names))
    if extra:
        raise UsageError(f"unknown parameters for {kind}: {extra}")
    fam = ctor(*(params[k] for k in names))
    return {
        "schema": S.SCHEMA,
        "type": "family",
        "kind": kind,
        "params": {k: S.enc_q(v) for k, v in params.items()},
        "weight": S.enc_weight(fam.weight),
        "polys": S.enc_polys(fam.polys(max_n)),
        "operators": {name: S.enc_diffop(op) for name, op in sorted(fam.operators.items())},
    }


def example_data(res: ExampleResult) -> dict:
    data = {
        "schema": S.SCHEMA,
        "type": "example",
        "id": res.id,
        "params": {k: S.enc_q(v) for k, v in res.params.items()},
        "transform": S.enc_transform(res.transform),
        "weight": S.enc_weight(res.weight),
    }
    if res.id == 1:
        data["qprime"] = S.enc_poly(res.data["family"].poly(1).det().as_poly())
        data["alt_polys"] = S.enc_polys(res.data["alt_polys"])
    elif res.id == 2:
        data["qprime"] = S.enc_poly(res.data["first_step"][2].det().as_poly())
        if res.data.get("alt_polys"):
            data["alt_polys"] = S.enc_polys(res.data["alt_polys"])
    return data


def _update_manifest(entry: dict) -> None:
    path = out_dir() / MANIFEST
    try:
        manifest = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        manifest = {"schema": "exmop.manifest/1", "examples": []}
    rows = [e for e in manifest["examples"] if e.get("id") != entry["id"]]
    rows.append(entry)
    manifest["examples"] = sorted(rows, key=lambda e: e["id"])
    _write(path, json.dumps(manifest, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_family_build(args) -> int:
    params = parse_params(args.params)
    data = family_data(args.kind, params, args.max_n)
    _write(_resolve(args.out, f"family-{args.kind}.json"), S.dumps(data))
    return 0


def _example_kwargs(args) -> dict:
    fn = PIPELINES[args.id]
    accepted = set(inspect.signature(fn).parameters)
    params = parse_params(args.params)
    for key in ("a", "xi", "alpha", "r", "zeta"):
        v = getattr(args, key)
        if v is not None:
            params[key] = Fraction(v)
    bad = sorted(set(params) - accepted)
    if bad:
        raise UsageError(f"example {args.id} does not take {bad}")
    if args.max_n is not None:
        params["max_n"] = args.max_n
    if "numeric_checks" in accepted:
        params["numeric_checks"] = not args.no_numeric
    for key in ("npoints", "dps"):
        v = getattr(args, key)
        if v is not None and key in accepted:
            params[key] = v if v > 0 else None
    return params


def cmd_example_run(args) -> int:
    report_path = _resolve(args.report, f"report-example{args.id}.json")
    kwargs = _example_kwargs(args)
    try:
        res = PIPELINES[args.id](**kwargs)
    except (DarbouxError, ValueError, ArithmeticError) as exc:
        rep = Report(args.id, kwargs)
        rep.add(exact("construction", False, exc))
        _write(report_path, rep.dumps())
        print(f"example {args.id}: construction failed: {exc}", file=sys.stderr)
        return 1
    rep = res.report
    _write(report_path, rep.dumps())
    data_path = _resolve(args.out, f"example{args.id}.json")
    _write(data_path, S.dumps(example_data(res)))
    _update_manifest(
        {
            "id": res.id,
            "params": {k: S.enc_q(v) for k, v in res.params.items()},
            "gaps": sorted(res.transform.gaps),
            "artifacts": {"data": str(data_path), "report": str(report_path)},
            "ok": rep.ok,
        }
    )
    for line in rep.summary_lines():
        print(line)
    return 0 if rep.ok else 1


def _polys_and_ops(data: dict):
    if data["type"] == "family":
        return S.dec_polys(data["polys"]), {k: S.dec_diffop(v) for k, v in data["operators"].items()}
    tr = S.dec_transform(data["transform"])
    return tr.polys, {"Dhat": tr.Dhat}


def _verify_symmetry(data, args, rep: Report) -> None:
    w = S.dec_weight(data["weight"])
    _, ops = _polys_and_ops(data)
    for name, op in sorted(ops.items()):
        if op.order > 2:
            continue
        s = symmetry_check(op, w)
        rep.add(exact(f"symmetry[{name}]", s.symmetric, s.failed))


def _verify_eigen(data, args, rep: Report) -> None:
    polys, ops = _polys_and_ops(data)
    stored = S.dec_transform(data["transform"]).eigenvalues if data["type"] == "example" else {}
    for name, op in sorted(ops.items()):
        bad = []
        for n, P in sorted(polys.items()):
            ev = eigencheck(op, P)
            if not ev.ok or (n in stored and ev.gamma != stored[n]):
                bad.append(n)
        rep.add(exact(f"eigen[{name}]", not bad, f"indices {bad}" if bad else None))


def _verify_orthogonality(data, args, rep: Report) -> None:
    polys, _ = _polys_and_ops(data)
    w = absorb_endpoint_factors(S.dec_weight(data["weight"]))
    dps = args.dps if args.dps and args.dps > 0 else None
    g = numeric_gram(polys, w, args.npoints, dps)
    off = max((float(np.abs(v).max()) for (n, m), v in g.items() if n != m), default=0.0)
    rep.add(numeric("orthogonality-numeric", off, args.tol))


def _verify_recurrence(data, args, rep: Report) -> None:
    polys, _ = _polys_and_ops(data)
    if args.qprime:
        qprime = Poly([Fraction(c) for c in args.qprime.split(",")])
    elif "qprime" in data:
        qprime = S.dec_poly(data["qprime"])
    else:
        raise UsageError("no q' stored in the input; pass --qprime c0,c1,...")
    fit = fit_recurrence(polys, qprime, args.band)
    failed = fit.failed()
    witness = None
    if failed:
        n = failed[0]
        witness = f"n={n}: residual of degree {fit.residuals[n].degree}"
    rep.add(exact(f"recurrence[band={args.band}]", fit.exact and bool(fit.residuals), witness, detail=f"fitted n={sorted(fit.residuals)}"))


def _verify_conjugation(data, args, rep: Report) -> None:
    polys, _ = _polys_and_ops(data)
    if args.against:
        other, _ = _polys_and_ops(_load(args.against))
    elif "alt_polys" in data:
        other = S.dec_polys(data["alt_polys"])
    else:
        raise UsageError("nothing to compare against; pass --against FILE")
    idx = sorted(set(polys) & set(other))
    if args.min_n is not None:
        idx = [n for n in idx if n >= args.min_n]
    res = conjugation_check(polys, other, indices=idx)
    rep.add(exact("conjugation", res.ok, res.failure, detail=f"n={idx}"))


VERIFIERS = {
    "symmetry": _verify_symmetry,
    "eigen": _verify_eigen,
    "orthogonality": _verify_orthogonality,
    "recurrence": _verify_recurrence,
    "conjugation": _verify_conjugation,
}


def cmd_verify(args) -> int:
    rep = Report(None, {"input": args.input, "check": args.check})
    report_path = _resolve(args.report, f"report-verify-{args.check}.json")
    try:
        data = _load(args.input)
        rep.example = data.get("id")
        with rep.timed(args.check):
            VERIFIERS[args.check](data, args, rep)
    except (UsageError, PoleOnSupport, UnsupportedWeight, ValueError) as exc:
        rep.add(exact(args.check, False, exc))
    _write(report_path, rep.dumps())
    for line in rep.summary_lines():
        print(line)
    for c in rep.failures():
        if c.witness:
            print(f"  {c.name}: {c.witness}")
    return 0 if rep.ok else 1


def weight_rows(w: WeightSpec, grid) -> list:
    """``(t, W11, W12, W21, W22)`` floats with the kernel included; point masses omitted."""
    rows = []
    for x in grid:
        dens = w.density(x)
        k = w.kernel.eval_float(float(x))
        vals = [float(dens[i, j].const_value()) * k for i in range(w.n) for j in range(w.n)]
        rows.append([float(x)] + vals)
    return rows


def cmd_export_weight(args) -> int:
    data = _load(args.input)
    w = S.dec_weight(data["weight"])
    grid = parse_grid(args.grid)
    header = ["t"] + [f"entry_{i + 1}{j + 1}" for i in range(w.n) for j in range(w.n)]
    path = _resolve(args.out, "weight.csv")
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in weight_rows(w, grid):
            writer.writerow([repr(v) for v in row])
    log.info("wrote %s", path)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="exmop", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log written files")
    sub = p.add_subparsers(dest="command", required=True)

    fam = sub.add_parser("family", help="classical families").add_subparsers(dest="action", required=True)
    fb = fam.add_parser("build", help="write a classical family to JSON")
    fb.add_argument("--kind", choices=sorted(FAMILIES), required=True)
    fb.add_argument("--params", help="comma separated key=value rationals, e.g. a=2,xi=1")
    fb.add_argument("--max-n", type=int, default=6)
    fb.add_argument("--out")
    fb.set_defaults(func=cmd_family_build)

    ex = sub.add_parser("example", help="example pipelines").add_subparsers(dest="action", required=True)
    er = ex.add_parser("run", help="run one example pipeline and write its report")
    er.add_argument("--id", type=int, choices=sorted(PIPELINES), required=True)
    er.add_argument("--params", help="comma separated key=value rationals")
    for key in ("a", "xi", "alpha", "r", "zeta"):
        er.add_argument(f"--{key}", help=f"shorthand for --params {key}=...")
    er.add_argument("--max-n", type=int)
    er.add_argument("--no-numeric", action="store_true", help="skip quadrature checks")
    er.add_argument("--npoints", type=int)
    er.add_argument("--dps", type=int, help="working precision in digits; 0 for double")
    er.add_argument("--report")
    er.add_argument("--out", help="data file (transform, weight) for later verification")
    er.set_defaults(func=cmd_example_run)

    ve = sub.add_parser("verify", help="re-verify a data file")
    ve.add_argument("check", choices=sorted(VERIFIERS))
    ve.add_argument("--in", dest="input", required=True)
    ve.add_argument("--report")
    ve.add_argument("--band", type=int, default=3, help="recurrence half-width")
    ve.add_argument("--qprime", help="override q' as ascending coefficients")
    ve.add_argument("--against", help="second family for conjugation")
    ve.add_argument("--min-n", type=int, help="smallest index compared by conjugation")
    ve.add_argument("--npoints", type=int, default=200)
    ve.add_argument("--dps", type=int, default=30, help="working precision in digits; 0 for double")
    ve.add_argument("--tol", type=float, default=1e-9)
    ve.set_defaults(func=cmd_verify)

    xp = sub.add_parser("export", help="export data for plotting").add_subparsers(dest="action", required=True)
    xw = xp.add_parser("weight", help="weight matrix entries on a grid, as CSV")
    xw.add_argument("--in", dest="input", required=True)
    xw.add_argument("--grid", required=True, help="lo:hi:step")
    xw.add_argument("--out")
    xw.set_defaults(func=cmd_export_weight)
    return p


def _attach_negative_values(argv: list) -> list:
    # argparse reads "--grid -3:3:0.5" as two options; glue value to flag
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--grid":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--grid={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_negative_values(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"exmop: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
