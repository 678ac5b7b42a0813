"""Command-line front end.

Subcommands: sieve, family, gauss, lvalue, mollify, moment, constants, check.
Exit codes: 0 success, 1 failed check, 2 usage error, 3 capacity error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .eisenstein import EisensteinInt, as_primary
from .errors import CapacityError
from .family import FamilyElement, enumerate_family, family_count, family_size_constants, is_member, write_family_cache
from .gauss import gauss_direct, gauss_fast, read_gauss_cache, write_gauss_cache
from .lfunction import DEFAULT_TOL, central_value
from .mollifier import MollifierConfig, mollifier_M
from .moments import (
    C0_PREFACTOR,
    CharacterRecord,
    euler_constant_c0,
    first_mollified_moment,
    moment_from_records,
    nonvanishing_report,
    reproduce_paper_constants,
)
from .primes import PrimeTable, cache_dir, pi_K, prime_table, write_prime_cache

CSV_COLUMNS = ["c1_a", "c1_b", "c2_a", "c2_b", "conductor_norm", "L_re", "L_im", "M_re", "M_im", "err_bound"]


@dataclass
class RunManifest:
    command: str
    parameters: dict
    cache_files: list[str] = field(default_factory=list)
    wall_time: float = 0.0
    artifact_version: str = __version__
    content_hash: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def content_hash(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def _element(text: str) -> EisensteinInt:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    return EisensteinInt(a, b)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _load_config(path: Optional[str], X: int) -> MollifierConfig:
    if path is None:
        return MollifierConfig.desk_mode(X)
    data = json.loads(Path(path).read_text())
    data["X"] = X
    return MollifierConfig(**data)


# Subcommands ---------------------------------------------------------------------

def cmd_sieve(args) -> dict:
    table = prime_table(args.limit)
    count = table.count_upto(args.limit)
    if args.table:
        write_prime_cache(PrimeTable(args.limit, table.upto(args.limit)), Path(args.table))
    return {"limit": args.limit, "prime_ideals": count, "pi_K": pi_K(args.limit)}


def cmd_family(args) -> dict:
    out = {"X": args.X, "family_size": family_count(args.X)}
    d = cache_dir()
    if d is not None:
        d.mkdir(parents=True, exist_ok=True)
        path = d / f"family-{args.X}.jsonl"
        if not path.exists():
            write_family_cache(args.X, path)
    C1, _ = family_size_constants()
    if args.X > 1:
        out["C1"] = C1
        out["ratio_C1_XlogX"] = out["family_size"] / (C1 * args.X * math.log(args.X))
    if args.list:
        out["members"] = [
            {"c1": [c.c1.a, c.c1.b], "c2": [c.c2.a, c.c2.b], "conductor_norm": c.conductor_norm}
            for c in enumerate_family(args.X)
        ]
    return out


def cmd_gauss(args) -> dict:
    n = as_primary(args.n)
    out = {"n": [n.a, n.b], "r": [args.r.a, args.r.b]}
    if args.cache_limit:
        d = cache_dir() or Path(".")
        d.mkdir(parents=True, exist_ok=True)
        out["cache_entries"] = write_gauss_cache(args.cache_limit, d / f"gauss-{args.cache_limit}.jsonl")
    for name, fn in (("fast", gauss_fast), ("direct", gauss_direct)):
        if args.method in (name, "both"):
            g = fn(args.r, n).value
            out[name] = [g.real, g.imag]
    return out


def cmd_lvalue(args) -> dict:
    if not is_member(args.c1, args.c2):
        raise ValueError(f"({args.c1}, {args.c2}) does not define a member of the family")
    c = FamilyElement.from_pair(args.c1, args.c2)
    rec = central_value(c, Y=args.Y, tol=args.tol)
    return {
        "c1": [c.c1.a, c.c1.b], "c2": [c.c2.a, c.c2.b], "conductor_norm": c.conductor_norm,
        "L_re": rec.value.real, "L_im": rec.value.imag, "err_bound": rec.truncation_error_bound,
        "root_number": [rec.root_number.real, rec.root_number.imag],
        "principal_terms": rec.principal_terms, "dual_terms": rec.dual_terms,
    }


def cmd_mollify(args) -> dict:
    cfg = _load_config(args.config, args.X)
    out = {
        "config": json.loads(cfg.to_json()),
        "k0": cfg.k0, "J": cfg.J, "theta": cfg.thetas, "ell": cfg.ells,
        "intervals": [list(iv) for iv in cfg.intervals],
        "validation": cfg.validate(),
    }
    if args.c1 is not None and args.c2 is not None:
        c = FamilyElement.from_pair(args.c1, args.c2)
        M = mollifier_M(c, cfg)
        out["M"] = [M.real, M.imag]
    return out


def _lvalue_cache_path(X: int, tol: float) -> Optional[Path]:
    d = cache_dir()
    return None if d is None else d / f"lvalues-{X}-{tol:g}.jsonl"


def cmd_moment(args, manifest: RunManifest) -> dict:
    cfg = _load_config(args.config, args.X)
    path = _lvalue_cache_path(args.X, args.tol)
    if path is not None and path.exists():
        # L-values come from the cache; M depends on the config and is recomputed
        recs = [CharacterRecord(c, L, mollifier_M(c, cfg), err) for c, L, err in _read_lvalue_cache(path)]
        rep = moment_from_records(args.X, cfg, args.tol, recs)
    else:
        rep = first_mollified_moment(args.X, cfg, args.tol, jobs=args.jobs)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        if not path.exists():
            with open(path, "w") as fh:
                fh.write(json.dumps({"format": "cubic-lvalues", "version": 1, "X": args.X, "tol": args.tol}) + "\n")
                for r in rep.records:
                    fh.write(json.dumps(_record_row(r), sort_keys=True) + "\n")
        if str(path) not in manifest.cache_files:
            manifest.cache_files.append(str(path))
    nv = nonvanishing_report(args.X, args.tol, records=rep.records)
    out = rep.to_dict()
    out["config"] = json.loads(cfg.to_json())
    out["nonvanishing"] = {"count_nonzero": nv.count_nonzero, "count_below_threshold": nv.count_below_threshold,
                           "cauchy_schwarz_proportion": nv.proportion}
    out["printed_constants"] = asdict(reproduce_paper_constants())
    if args.csv:
        Path(args.csv).write_text(_records_csv(rep.records))
    return out


def _read_lvalue_cache(path: Path):
    with open(path) as fh:
        header = json.loads(fh.readline())
        if header.get("format") != "cubic-lvalues" or header.get("version") != 1:
            raise ValueError(f"{path}: unrecognized cache header {header}")
        for row in map(json.loads, fh):
            c = FamilyElement.from_pair(EisensteinInt(row["c1_a"], row["c1_b"]), EisensteinInt(row["c2_a"], row["c2_b"]))
            yield c, complex(row["L_re"], row["L_im"]), row["err_bound"]


def _record_row(r: CharacterRecord) -> dict:
    c = r.c
    return {"c1_a": c.c1.a, "c1_b": c.c1.b, "c2_a": c.c2.a, "c2_b": c.c2.b, "conductor_norm": c.conductor_norm,
            "L_re": r.L.real, "L_im": r.L.imag, "M_re": r.M.real, "M_im": r.M.imag, "err_bound": r.err_bound}


def _records_csv(records: list[CharacterRecord]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in _record_row(r).items()})
    return buf.getvalue()


def cmd_constants(args) -> dict:
    pc = reproduce_paper_constants()
    return {
        "c0_prefactor": C0_PREFACTOR,
        "c0": euler_constant_c0(),
        "R1": pc.R1, "R1_theta_rounding_interval": list(pc.R1_interval),
        "R2": pc.R2, "S_2": pc.S_k, "D": pc.D,
        "loglog_bound": pc.loglog_bound,
        "proportion_prefactor": pc.proportion_prefactor,
        "proportion_loglog_reciprocal": pc.proportion_loglog_reciprocal,
    }


def cmd_check(args) -> dict:
    from .checks import run_checks

    results = run_checks(fast=args.fast)
    return {"passed": all(ok for _, ok, _ in results),
            "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results]}


# Parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubic-lmoment", description="Cubic Hecke L-values over Q(w) and mollified moments.")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON result here instead of stdout")
    common.add_argument("--manifest", help="write the run manifest here (default: <out>.manifest.json when --out is set)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", parents=[common], help="prime ideals of norm <= limit")
    s.add_argument("--limit", type=int, required=True)
    s.add_argument("--table", help="write the prime table as JSONL")

    s = sub.add_parser("family", parents=[common], help="size of F(X)")
    s.add_argument("--X", type=int, required=True)
    s.add_argument("--list", action="store_true", help="include the members")

    s = sub.add_parser("gauss", parents=[common], help="cubic Gauss sum g(r, n)")
    s.add_argument("--n", type=_element, required=True, metavar="a,b")
    s.add_argument("--r", type=_element, default=EisensteinInt(1, 0), metavar="a,b")
    s.add_argument("--method", choices=["fast", "direct", "both"], default="fast")
    s.add_argument("--cache-limit", type=int, help="also write prime-level sums g(1, pi) for N(pi) <= this limit")

    s = sub.add_parser("lvalue", parents=[common], help="L(1/2, chi_c) for c = c2 c1^2")
    s.add_argument("--c1", type=_element, required=True, metavar="a,b")
    s.add_argument("--c2", type=_element, required=True, metavar="a,b")
    s.add_argument("--Y", type=float, default=1.0)
    s.add_argument("--tol", type=float, default=DEFAULT_TOL)

    s = sub.add_parser("mollify", parents=[common], help="interval scheme, validation flags and optionally M(c)")
    s.add_argument("--config", help="JSON file with MollifierConfig fields (default: desk-mode preset)")
    s.add_argument("--X", type=int, required=True)
    s.add_argument("--c1", type=_element, metavar="a,b")
    s.add_argument("--c2", type=_element, metavar="a,b")

    s = sub.add_parser("moment", parents=[common], help="first mollified moment over F(X)")
    s.add_argument("--X", type=int, required=True)
    s.add_argument("--config")
    s.add_argument("--tol", type=float, default=DEFAULT_TOL)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--csv", help="per-character table")

    sub.add_parser("constants", parents=[common], help="printed constants of the non-vanishing argument")

    s = sub.add_parser("check", parents=[common], help="invariant suite")
    s.add_argument("--fast", action="store_true")
    return p


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    handlers: dict[str, Callable] = {
        "sieve": cmd_sieve, "family": cmd_family, "gauss": cmd_gauss, "lvalue": cmd_lvalue,
        "mollify": cmd_mollify, "constants": cmd_constants, "check": cmd_check,
    }
    params = {k: (str(v) if isinstance(v, EisensteinInt) else v) for k, v in vars(args).items()
              if k not in ("out", "manifest", "command")}
    manifest = RunManifest(args.command, params)
    d = cache_dir()
    if d is not None and d.exists():
        manifest.cache_files.extend(sorted(str(p) for p in d.glob("*.jsonl")))
        for p in sorted(d.glob("gauss-*.jsonl")):
            read_gauss_cache(p)
    t0 = time.perf_counter()
    try:
        if args.command == "moment":
            result = cmd_moment(args, manifest)
        else:
            result = handlers[args.command](args)
    except CapacityError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    text = _dumps(result) + "\n"
    manifest.wall_time = time.perf_counter() - t0
    manifest.content_hash = content_hash(text.encode())
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    mpath = args.manifest or (args.out + ".manifest.json" if args.out else None)
    if mpath:
        Path(mpath).write_text(manifest.to_json() + "\n")
    print(f"content_hash: {manifest.content_hash}", file=sys.stderr)
    if args.command == "check" and not result["passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
