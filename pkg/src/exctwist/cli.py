"""Command-line front end: ``exctwist <subcommand> [options]``.

Exit codes: 0 success, 1 a check or verification failed, 2 usage error or
malformed input.  ``--json`` switches every subcommand to machine output;
the default is aligned plain-text tables.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

from .catalog import (EXCEPTIONAL_SPLITS, PATTERNS, catalog, degree_grid, instantiate,
                      pattern_config, split_supports)
from .cohom import atom_from_json, hom_dims
from .config import CurveConfig, build_config, config_from_json, validate
from .errors import ExcTwistError, PreconditionError, ShapeError
from .factorization import absorb, factorization_from_json, perfectness_report, swap
from .lattice import DivisorClass, check_shape, chi, is_numerically_exceptional, pair
from .reducer import (Report, TwistCertificate, certificate_for, certificate_from_json, reduce_class,
                      verify_certificate)
from .rigidity import chain_support, classify_case, enumerate_exceptional_classes, f_value

OK, VIOLATION, USAGE = 0, 1, 2


@dataclass
class CommandResult:
    code: int
    output: str


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# input helpers

def _load(text: str) -> Any:
    """Inline JSON, or a path to a JSON file."""
    text = text.strip()
    try:
        if text[:1] in "{[":
            return json.loads(text)
        return json.loads(Path(text).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {text!r}: {exc}") from exc


def _config(args) -> CurveConfig:
    if not args.config:
        raise UsageError("--config is required")
    doc = _load(args.config)
    if not isinstance(doc, dict):
        raise UsageError("config must be a JSON object")
    return config_from_json(doc)


def _class(cfg: CurveConfig, text: Optional[str], flag: str = "--class") -> DivisorClass:
    if not text:
        raise UsageError(f"{flag} is required")
    return check_shape(cfg, DivisorClass.from_json(_load(text)))


def _table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _dump(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True)


def _supports(cfg: CurveConfig, branch) -> list[list[str]]:
    return [[cfg.name(c) for c in supp] for supp in branch]


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args, out) -> int:
    cfg = _config(args)
    violations = validate(cfg)
    if args.json:
        out.write(_dump({"valid": not violations,
                         "violations": [{"rule": v.rule, "message": v.message} for v in violations]}) + "\n")
    elif violations:
        out.write(_table(["rule", "message"], [(v.rule, v.message) for v in violations]) + "\n")
    else:
        out.write("valid\n")
    return VIOLATION if violations else OK


def cmd_chi(args, out) -> int:
    cfg = _config(args)
    a, b = _class(cfg, args.a, "--a"), _class(cfg, args.b, "--b")
    doc = {"pair": pair(cfg, a, b), "chi": chi(cfg, a, b)}
    if args.json:
        out.write(_dump(doc) + "\n")
    else:
        out.write(_table(["a", "b", "a.b", "chi(a,b)"],
                         [(a.describe(cfg), b.describe(cfg), doc["pair"], doc["chi"])]) + "\n")
    return OK


def cmd_hom(args, out) -> int:
    cfg = _config(args)
    a, b = atom_from_json(cfg, _load(args.a)), atom_from_json(cfg, _load(args.b))
    dims = hom_dims(cfg, a, b, use_oracle=args.oracle)
    if args.json:
        out.write(_dump(dims.to_json()) + "\n")
    else:
        out.write(_table(["A", "B", "h0", "h1", "h2", "chi", "determinate"],
                         [(a.describe(cfg), b.describe(cfg), dims.h0, dims.h1, dims.h2,
                           dims.chi, dims.determinate)]) + "\n")
    return OK


def cmd_classify(args, out) -> int:
    cfg = _config(args)
    e = _class(cfg, args.cls)
    rows, code = [], OK
    for j, r in enumerate(e.chains, start=1):
        span = chain_support(r)
        if span is None:
            continue
        lo, hi = span
        k = cfg.attach_of(j)
        row: dict = {"chain": j}
        if k is None or not lo <= k <= hi:
            row.update(f=None, case=None, reversed=None, note="support not attached to D")
            code = VIOLATION
        else:
            core, kk = r[lo - 1:hi], k - lo + 1
            row["f"] = f_value(core, kk)
            if row["f"] == 0:
                tag = classify_case(core, kk)
                row.update(case=tag.case, reversed=tag.reversed)
            else:
                row.update(case=None, reversed=None)
                code = VIOLATION
        rows.append(row)
    exceptional = e.d == 1 and is_numerically_exceptional(cfg, e)
    if not exceptional:
        code = VIOLATION
    if args.json:
        out.write(_dump({"exceptional": exceptional, "chains": rows}) + "\n")
    else:
        out.write(f"{e.describe(cfg)}: e^2 = {pair(cfg, e, e)}\n")
        out.write(_table(["chain", "f", "case", "reversed"],
                         [(r["chain"], r["f"], r["case"], r["reversed"]) for r in rows]) + "\n")
    return code


def cmd_enumerate(args, out) -> int:
    cfg = _config(args)
    for e in enumerate_exceptional_classes(cfg):
        out.write((_dump(e.to_json()) if args.json else e.describe(cfg)) + "\n")
    return OK


def cmd_catalog(args, out) -> int:
    try:
        shapes = catalog(args.pattern)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    supports = [[f"C{i}" for i in s] for s in split_supports(args.pattern)]
    results = []
    code = OK
    cfg = pattern_config(args.pattern)
    for shape in shapes:
        entry: dict = {"label": shape.label, "shape": shape.render(), "params": list(shape.params)}
        if args.check:
            bad = []
            for params in degree_grid(args.pattern, shape, args.width, args.base):
                problems = perfectness_report(cfg, instantiate(cfg, shape, params))
                if problems:
                    bad.append({"params": params, "problems": problems})
            entry["perfect"] = not bad
            if bad:
                entry["failures"] = bad
                code = VIOLATION
        results.append(entry)
    doc = {"pattern": args.pattern, "shapes": results, "split_supports": supports}
    if args.pattern in EXCEPTIONAL_SPLITS:
        doc["exceptional_split"] = EXCEPTIONAL_SPLITS[args.pattern]
    if args.json:
        out.write(_dump(doc) + "\n")
        return code
    if results:
        headers = ["label", "shape"] + (["perfect"] if args.check else [])
        out.write(_table(headers, [[r["label"], r["shape"]] + ([r["perfect"]] if args.check else [])
                                   for r in results]) + "\n")
    out.write("final factor supports: " + ", ".join("{" + ",".join(s) + "}" for s in supports) + "\n")
    return code


def cmd_rewrite(args, out) -> int:
    cfg = _config(args)
    docs = _load(args.factorization)
    if not isinstance(docs, list):
        raise UsageError("factorization must be a JSON array of atom documents")
    F = factorization_from_json(cfg, docs)
    if args.rule == "swap":
        G = swap(cfg, F, args.position)
    else:
        if args.direction is None:
            raise UsageError("absorb needs --direction 1 or 2")
        G = absorb(cfg, F, args.position, args.direction)
    if args.json:
        out.write(_dump({"rule": args.rule, "position": args.position,
                         "before": F.to_json(cfg), "after": G.to_json(cfg)}) + "\n")
    else:
        out.write(f"  {F.describe(cfg)}\n-> {G.describe(cfg)}   [{args.rule} @ {args.position}]\n")
    return OK


def cmd_reduce(args, out) -> int:
    cfg = _config(args)
    e = _class(cfg, args.cls)
    if args.all_branches:
        tree = reduce_class(cfg, e, "all")
        branches = [_supports(cfg, b) for b in tree.branches()]
        if args.json:
            out.write(_dump({"class": e.to_json(), "branches": branches}) + "\n")
        else:
            out.write(f"{e.describe(cfg)}: {len(branches)} branch(es)\n")
            for n, b in enumerate(branches, start=1):
                out.write(f"{n:>4}  " + " , ".join("{" + ",".join(s) + "}" for s in b) + "\n")
        return OK
    cert = reduce_class(cfg, e, "first")
    if args.json:
        out.write(_dump(cert.to_json(cfg)) + "\n")
    else:
        out.write(f"{e.describe(cfg)} = " + " o ".join(f"T[{t.describe(cfg)}]" for t in cert.twists)
                  + (" o " if cert.twists else "") + "O_D(d)\n")
    return OK


def _apply_degrees(cfg: CurveConfig, cert: TwistCertificate, doc: Any) -> TwistCertificate:
    """``{"seed": -2, "twists": [{"C2": 0}, {"C1": -1, "C2": 2, "C3": -1}]}``"""
    from .cohom import make_atom
    try:
        degs = doc["twists"]
        if len(degs) != len(cert.twists):
            raise UsageError("degree list length differs from the certificate")
        twists = tuple(make_atom(cfg, t.support, {cfg.parse(n): int(v) for n, v in d.items()}, t.thick)
                       for t, d in zip(cert.twists, degs))
        return TwistCertificate(twists, int(doc["seed"]))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, ExcTwistError):
            raise
        raise UsageError(f"malformed degrees document: {exc}") from exc


def _report_out(rep, out, as_json: bool):
    if as_json:
        out.write(_dump(rep.to_json()) + "\n")
        return
    rows = [(c.step, c.name, c.to_json()["status"], c.detail) for c in rep.checks]
    out.write(_table(["step", "check", "status", "detail"], rows) + "\n")
    out.write(("PASS" if rep.ok else "FAIL") + "\n")


def cmd_verify(args, out) -> int:
    cfg = _config(args)
    e = _class(cfg, args.cls)
    if not args.certificate:
        raise UsageError("--certificate is required")
    doc = _load(args.certificate)
    if not isinstance(doc, dict) or not isinstance(doc.get("twists"), list):
        raise UsageError("certificate must be an object with a 'twists' array")
    try:
        cert = certificate_from_json(cfg, doc)
    except ShapeError as exc:
        # verification is total: an unbuildable twist is a failed check, not a usage error
        rep = Report()
        rep.add("certificate", "spherical", False, str(exc))
        _report_out(rep, out, args.json)
        return VIOLATION
    if args.degrees:
        cert = _apply_degrees(cfg, cert, _load(args.degrees))
    rep = verify_certificate(cfg, e, cert)
    _report_out(rep, out, args.json)
    return OK if rep.ok else VIOLATION


# ---------------------------------------------------------------------------
# embedded fixtures

EXAMPLES = {
    "A1": {
        "config": {"mode": "strict", "chains": [{"length": 1, "attach": [1]}, {"length": 1, "attach": [1]}]},
        "class": {"d": 1, "chains": [[1], [1]]},
    },
    "non-reduced": {
        "config": {"mode": "strict", "chains": [{"length": 3, "attach": [2]}]},
        "class": {"d": 1, "chains": [[1, 2, 1]]},
        "branch": [["C2"], ["C1", "C2", "C3"]],
        "certificate": {"seed": {"degree": -2},
                        "twists": [{"support": ["C2"], "deg": {"C2": 0}},
                                   {"support": ["C1", "C2", "C3"], "deg": {"C1": -1, "C2": 2, "C3": -1}}]},
    },
    "loop": {
        "config": {"mode": "relaxed", "chains": [{"length": 3, "attach": [1, 3]}]},
        "class": {"d": 1, "chains": [[1, 2, 1]]},
        "certificate": {"seed": {"degree": -1},
                        "twists": [{"support": ["C2", "C3"], "deg": {"C2": 0, "C3": 0}},
                                   {"support": ["C1", "C2"], "deg": {"C1": 0, "C2": 0}}]},
    },
}


def replay_examples() -> list[tuple[str, bool, str]]:
    """Re-run the three embedded fixtures; one (name, ok, detail) per fixture."""
    results = []

    cfg = config_from_json(EXAMPLES["A1"]["config"])
    e = DivisorClass.from_json(EXAMPLES["A1"]["class"])
    classes = enumerate_exceptional_classes(cfg)
    tree = reduce_class(cfg, e, "all")
    reports = [verify_certificate(cfg, e, certificate_for(cfg, b), generated=True) for b in tree.branches()]
    ok = (not validate(cfg) and e in classes and len(classes) == 4
          and all(len(b) == 2 for b in tree.branches()) and all(r.ok for r in reports))
    results.append(("A1", ok, f"{len(classes)} classes, {tree.count()} branches for {e.describe(cfg)}"))

    fx = EXAMPLES["non-reduced"]
    cfg = config_from_json(fx["config"])
    e = DivisorClass.from_json(fx["class"])
    branches = [_supports(cfg, b) for b in reduce_class(cfg, e, "all").branches()]
    rep = verify_certificate(cfg, e, certificate_from_json(cfg, fx["certificate"]))
    ok = fx["branch"] in branches and rep.ok and not any(c.ok is None for c in rep.checks)
    results.append(("non-reduced", ok, f"branch present: {fx['branch'] in branches}, certificate ok: {rep.ok}"))

    fx = EXAMPLES["loop"]
    cfg = config_from_json(fx["config"])
    e = DivisorClass.from_json(fx["class"])
    rep = verify_certificate(cfg, e, certificate_from_json(cfg, fx["certificate"]))
    strict = build_config(cfg.chain_lengths, cfg.attachments)
    rejected = any(v.rule == "attachment<=1-per-chain" for v in validate(strict))
    results.append(("loop", rep.ok and rejected,
                    f"certificate ok: {rep.ok}, strict validator rejects: {rejected}"))
    return results


def cmd_examples(args, out) -> int:
    results = replay_examples()
    if args.json:
        out.write(_dump([{"example": n, "ok": ok, "detail": d} for n, ok, d in results]) + "\n")
    else:
        out.write(_table(["example", "status", "detail"],
                         [(n, "PASS" if ok else "FAIL", d) for n, ok, d in results]) + "\n")
    return OK if all(ok for _, ok, _ in results) else VIOLATION


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="exctwist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_, config=True):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if config:
            p.add_argument("--config", help="config JSON (inline or path)")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "check a configuration against the strict rules")
    p = add("chi", cmd_chi, "pairing and Euler form of two classes")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p = add("hom", cmd_hom, "Ext dimensions between two atoms")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--oracle", action="store_true", help="use the linear-algebra oracle")
    p = add("classify", cmd_classify, "f-polynomial and case per chain")
    p.add_argument("--class", dest="cls", required=True)
    add("enumerate", cmd_enumerate, "list numerically exceptional classes")
    p = add("catalog", cmd_catalog, "factorization shapes for a multiplicity pattern", config=False)
    p.add_argument("pattern", help=", ".join(PATTERNS))
    p.add_argument("--check", action="store_true", help="check perfectness on a degree grid")
    p.add_argument("--width", type=int, default=3)
    p.add_argument("--base", type=int, default=0)
    p = add("rewrite", cmd_rewrite, "apply swap or absorb to a factorization")
    p.add_argument("--factorization", required=True)
    p.add_argument("--rule", choices=("swap", "absorb"), required=True)
    p.add_argument("--position", type=int, required=True)
    p.add_argument("--direction", type=int, choices=(1, 2))
    p = add("reduce", cmd_reduce, "twist certificate(s) reducing a class to D")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--all-branches", action="store_true")
    p = add("verify", cmd_verify, "verify a twist certificate")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--certificate", required=True)
    p.add_argument("--degrees", help="concrete degrees for the seed and every twist")
    add("examples", cmd_examples, "replay the embedded fixtures", config=False)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> CommandResult:
    out = io.StringIO()
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "fn", None):
            raise UsageError("a subcommand is required")
        code = args.fn(args, out)
    except UsageError as exc:
        return CommandResult(USAGE, f"usage error: {exc}\n")
    except PreconditionError as exc:
        return CommandResult(VIOLATION, f"precondition failed: {exc}\n")
    except ExcTwistError as exc:
        return CommandResult(USAGE, f"error: {exc}\n")
    except SystemExit as exc:  # --help
        return CommandResult(int(exc.code or 0), out.getvalue())
    return CommandResult(code, out.getvalue())


def main(argv: Optional[Sequence[str]] = None) -> int:
    res = run(argv)
    stream = sys.stdout if res.code != USAGE else sys.stderr
    stream.write(res.output)
    return res.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
