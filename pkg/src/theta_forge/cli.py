"""Command-line front end.

Subcommands expand series (theta, the completed combination, Eisenstein),
verify the root identity exactly, and run numeric law campaigns over the
built-in lattice catalog or Gram matrices loaded from JSON files.  Exit
codes: 0 success / all checks pass, 1 at least one check failed, 2 usage
or configuration error.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import GaussianRational
from .jacobi_like import completed_theta, verify_root_identity
from .lattice import (
    CATALOG,
    EnumerationBudgetError,
    InsertionVector,
    InvalidFormError,
    QuadraticForm,
    catalog_form,
    first_root,
    load_form,
)
from .modforms import ThetaSpec, eisenstein_e2, eisenstein_e2k, theta_expand
from .verify import LAW_IDS, run_campaign


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    lattice: str = "A2"
    v_spec: Optional[str] = None
    k: int = 0
    prec: int = 20
    x_prec: int = 4
    tol: float = 1e-8
    seed: int = 0
    fmt: str = "text"
    laws: str = "all"
    count: int = 10
    weight: int = 2
    extra: dict = field(default_factory=dict)


def _resolve_form(name: str) -> QuadraticForm:
    if name in CATALOG:
        return catalog_form(name)
    cat_dir = os.environ.get("THETA_FORGE_CATALOG")
    candidates = []
    if cat_dir:
        candidates.append(os.path.join(cat_dir, name + ".json"))
        candidates.append(os.path.join(cat_dir, name))
    candidates.append(name)
    for path in candidates:
        if os.path.isfile(path):
            try:
                return load_form(path)
            except (InvalidFormError, KeyError, ValueError, json.JSONDecodeError) as exc:
                raise UsageError(f"bad lattice file {path}: {exc}") from exc
    raise UsageError(
        f"unknown lattice {name!r}; built-in: {', '.join(sorted(CATALOG))}"
    )


_FRACTION = r"[+-]?\d+(?:/\d+)?"


def _parse_gaussian(text: str) -> GaussianRational:
    t = text.strip().replace(" ", "")
    if not t:
        raise UsageError("empty vector component")
    try:
        if not t.endswith("i"):
            return GaussianRational(Fraction(t))
        body = t[:-1]
        cut = None
        for idx in range(len(body) - 1, 0, -1):
            if body[idx] in "+-" and body[idx - 1] not in "+-/":
                cut = idx
                break
        if cut is None:
            imtxt = body if body not in ("", "+", "-") else body + "1"
            return GaussianRational(0, Fraction(imtxt))
        imtxt = body[cut:]
        if imtxt in ("+", "-"):
            imtxt += "1"
        return GaussianRational(Fraction(body[:cut]), Fraction(imtxt))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad Gaussian rational {text!r}") from exc


def _parse_v(spec: str, form: QuadraticForm) -> InsertionVector:
    """`"1,0 / s=1/2"` gives w = (1, 0) and s = 1/2; s defaults to 1."""
    parts = re.split(r"/\s*s\s*=", spec, maxsplit=1)
    wtxt = parts[0].strip()
    s = Fraction(1)
    if len(parts) == 2:
        try:
            s = Fraction(parts[1].strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad scale in --v: {parts[1].strip()!r}") from exc
        if s <= 0:
            raise UsageError("--v scale s must be positive")
    w = tuple(_parse_gaussian(c) for c in wtxt.split(","))
    if len(w) != form.rank:
        raise UsageError(
            f"--v has {len(w)} components; the lattice has rank {form.rank}"
        )
    return InsertionVector(w, s)


def _default_v(form: QuadraticForm) -> InsertionVector:
    root = first_root(form)
    if root is None:
        raise UsageError(
            "lattice has no vector of norm one; pass --v explicitly "
            '(for example "--v 1,0 / s=1/4" style, scaled to <v,v> = 1)'
        )
    return InsertionVector.from_root(root)


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _series_text(series) -> str:
    if series.exp_denom == 1 and all(
        c.is_real and c.re.denominator == 1 for _, c in sorted(series.coeffs.items())
    ):
        vals = [series.coefficient(Fraction(n)) for n in range(series.prec)]
        return "[" + ", ".join(str(v.re) for v in vals) + "]"
    lines = []
    for e in sorted(series.coeffs):
        q = Fraction(e, series.exp_denom)
        lines.append(f"q^{q}: {series.coeffs[e]!r}")
    return "\n".join(lines) if lines else "0"


def _cmd_expand_theta(cfg: RunConfig) -> int:
    form = _resolve_form(cfg.lattice)
    v = None
    if cfg.k > 0:
        v = _parse_v(cfg.v_spec, form) if cfg.v_spec else _default_v(form)
    elif cfg.v_spec:
        v = _parse_v(cfg.v_spec, form)
    series = theta_expand(ThetaSpec(form, v, cfg.k), cfg.prec)
    if cfg.fmt == "json":
        print(_dump_json(series.to_json_dict()))
    else:
        print(_series_text(series))
    return 0


def _cmd_expand_psi(cfg: RunConfig) -> int:
    form = _resolve_form(cfg.lattice)
    if cfg.k < 0 or cfg.k % 2:
        raise UsageError("the completed series needs an even k >= 0")
    v = _parse_v(cfg.v_spec, form) if cfg.v_spec else _default_v(form)
    series = completed_theta(form, v, cfg.k, cfg.prec)
    if cfg.fmt == "json":
        print(_dump_json(series.to_json_dict()))
    else:
        print(_series_text(series))
    return 0


def _cmd_expand_eisenstein(cfg: RunConfig) -> int:
    wt = cfg.weight
    if wt == 2:
        series = eisenstein_e2(cfg.prec)
    elif wt >= 4 and wt % 2 == 0:
        series = eisenstein_e2k(wt // 2, cfg.prec)
    else:
        raise UsageError("--weight must be 2 or an even integer >= 4")
    if cfg.fmt == "json":
        print(_dump_json(series.to_json_dict()))
    else:
        print(_series_text(series))
    return 0


def _cmd_verify_identity(cfg: RunConfig) -> int:
    form = _resolve_form(cfg.lattice)
    # prec is inclusive here: coefficients through q^prec are certified
    ok, residual = verify_root_identity(form, cfg.prec + 1)
    if cfg.fmt == "json":
        print(
            _dump_json(
                {
                    "identity": "root",
                    "lattice": cfg.lattice,
                    "prec": cfg.prec,
                    "residual_zero": ok,
                }
            )
        )
    else:
        if ok:
            print(f"root identity residual: 0 through q^{cfg.prec}")
        else:
            first = residual.order()
            print(f"root identity FAILED: first nonzero coefficient at q^{first}")
    return 0 if ok else 1


def _cmd_verify_laws(cfg: RunConfig) -> int:
    form = _resolve_form(cfg.lattice)
    laws = list(LAW_IDS) if cfg.laws == "all" else [s.strip() for s in cfg.laws.split(",")]
    bad = [law for law in laws if law not in LAW_IDS]
    if bad:
        raise UsageError(
            f"unknown laws: {', '.join(bad)}; known: all, {', '.join(LAW_IDS)}"
        )
    v = _parse_v(cfg.v_spec, form) if cfg.v_spec else _default_v(form)
    if cfg.tol <= 0:
        raise UsageError("--tol must be positive")
    reports, notes = run_campaign(
        form,
        laws,
        cfg.count,
        cfg.seed,
        cfg.tol,
        v=v,
        k=cfg.k,
        x_prec=cfg.x_prec,
    )
    for note in notes:
        print(note, file=sys.stderr)
    if cfg.fmt == "json":
        print(_dump_json({"reports": [r.to_json_dict() for r in reports]}))
    else:
        for r in reports:
            mark = "PASS" if r.passed else "FAIL"
            print(f"{mark} {r.law} residual={r.residual:.3e} tol={r.tol:.1e}")
    return 0 if all(r.passed for r in reports) else 1


def _cmd_catalog(cfg: RunConfig) -> int:
    rows = []
    for name in sorted(CATALOG):
        form = catalog_form(name)
        rows.append(
            {"name": name, "rank": form.rank, "det": form.det, "level": form.level}
        )
    cat_dir = os.environ.get("THETA_FORGE_CATALOG")
    if cat_dir and os.path.isdir(cat_dir):
        for fn in sorted(os.listdir(cat_dir)):
            if fn.endswith(".json"):
                rows.append({"name": fn[:-5], "source": cat_dir})
    if cfg.fmt == "json":
        print(_dump_json({"lattices": rows}))
    else:
        for row in rows:
            if "source" in row:
                print(f"{row['name']} (from {row['source']})")
            else:
                print(f"{row['name']} rank={row['rank']} det={row['det']} level={row['level']}")
    return 0


_COMMANDS = {
    "expand-theta": _cmd_expand_theta,
    "expand-psi": _cmd_expand_psi,
    "expand-eisenstein": _cmd_expand_eisenstein,
    "verify-identity": _cmd_verify_identity,
    "verify-laws": _cmd_verify_laws,
    "catalog": _cmd_catalog,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="theta-forge",
        description="Exact and numeric workbench for theta series of even positive-definite lattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, prec_default=20):
        p.add_argument("--lattice", default="A2", help="catalog name or Gram JSON path")
        p.add_argument("--format", choices=("text", "json"), default="text", dest="fmt")
        p.add_argument("--prec", type=int, default=prec_default)

    p = sub.add_parser("expand-theta", help="q-expansion of a theta series")
    common(p)
    p.add_argument("--k", type=int, default=0, help="insertion power")
    p.add_argument("--v", dest="v_spec", default=None, help='insertion vector, e.g. "1,0 / s=1/2"')

    p = sub.add_parser("expand-psi", help="q-expansion of the completed combination")
    common(p)
    p.add_argument("--k", type=int, default=4, help="even insertion index")
    p.add_argument("--v", dest="v_spec", default=None)

    p = sub.add_parser("expand-eisenstein", help="q-expansion of an Eisenstein series")
    common(p)
    p.add_argument("--weight", type=int, default=2)

    p = sub.add_parser("verify-identity", help="exact root-lattice identity check")
    common(p)

    p = sub.add_parser("verify-laws", help="numeric transformation-law campaign")
    common(p, prec_default=20)
    p.add_argument("--laws", default="all", help=f"comma list from: {', '.join(LAW_IDS)}; or all")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--k", type=int, default=2, help="insertion index for the cusp law")
    p.add_argument("--x-prec", type=int, default=4, dest="x_prec")
    p.add_argument("--v", dest="v_spec", default=None)

    p = sub.add_parser("catalog", help="list available lattices")
    p.add_argument("--format", choices=("text", "json"), default="text", dest="fmt")

    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("lattice", "v_spec", "k", "prec", "x_prec", "tol", "seed", "fmt", "laws", "count", "weight"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = _config_from_args(args)
    if cfg.prec < 1:
        print("error: --prec must be at least 1", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidFormError as exc:
        print(f"error: invalid Gram matrix ({exc.code}): {exc}", file=sys.stderr)
        return 2
    except EnumerationBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
