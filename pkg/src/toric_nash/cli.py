"""Command-line front-end: JSON in, canonical JSON (or a short text summary) out.

Exit codes: 0 success or a "consistent" verdict, 2 invalid input, 3 an
"inconsistent" verdict, 4 an enumeration cap was hit, 5 an "inconclusive"
verdict.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import __version__
from .cone import Cone
from .errors import CapExceeded, ToricNashError, ValidationError
from .fan import resolve
from .lattice_points import hilbert_basis
from .nash import arc_poset, essential_divisors, local_nash_components
from .qo import QOBranch, branches_from_json, lattice_from_exponents, multi_branch
from .serialize import SCHEMA_VERSION, canonical_json, cone_from_dict, cone_to_dict, write_atomic
from .verify import CONSISTENT, INCONCLUSIVE, INCONSISTENT, cross_validate

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCONSISTENT = 3
EXIT_CAP = 4
EXIT_INCONCLUSIVE = 5

_VERDICT_EXIT = {CONSISTENT: EXIT_OK, INCONSISTENT: EXIT_INCONSISTENT, INCONCLUSIVE: EXIT_INCONCLUSIVE}


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load_cone(args: argparse.Namespace) -> Cone:
    path = args.cone or args.input
    if path is None:
        raise ValidationError("no cone given: pass --cone FILE")
    return cone_from_dict(_load_json(path))


def _int_list(text: str, what: str) -> list[int]:
    text = text.strip()
    try:
        val = json.loads(text) if text.startswith("[") else [int(x) for x in text.split(",") if x.strip()]
    except (ValueError, json.JSONDecodeError):
        raise ValidationError(f"{what} must be a comma-separated list of integers, got {text!r}") from None
    if not isinstance(val, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in val):
        raise ValidationError(f"{what} must be a list of integers, got {text!r}")
    return val


def _face(args: argparse.Namespace) -> list[int] | None:
    return None if args.face is None else _int_list(args.face, "--face")


def _seed(text: str) -> int | str:
    if text == "canonical":
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'seed must be an integer or "canonical", got {text!r}') from None


def _cmd_essential(args: argparse.Namespace) -> tuple[dict, int, str]:
    c = _load_cone(args)
    es = essential_divisors(c, _face(args))
    lines = [f"{len(es)} essential divisor(s)"] + [f"  D_{list(v)}" for v in es.divisors]
    lines += [f"  note: {x}" for x in (es.marker, es.case2_note) if x]
    return es.to_dict(), EXIT_OK, "\n".join(lines)


def _cmd_local_nash(args: argparse.Namespace) -> tuple[dict, int, str]:
    c = _load_cone(args)
    nc = local_nash_components(c, _face(args))
    lines = [f"{len(nc)} local Nash component(s)"]
    lines += [f"  closure of T({list(a.v)}), base face rays {[list(r) for r in a.base_face.rays]}" for a in nc.components]
    return nc.to_dict(), EXIT_OK, "\n".join(lines)


def _cmd_hilbert(args: argparse.Namespace) -> tuple[dict, int, str]:
    c = _load_cone(args)
    hb = hilbert_basis(c)
    out = {"cone": cone_to_dict(c), "hilbert_basis": [list(p) for p in hb]}
    return out, EXIT_OK, f"{len(hb)} Hilbert basis element(s): {[list(p) for p in hb]}"


def _cmd_resolve(args: argparse.Namespace) -> tuple[dict, int, str]:
    c = _load_cone(args)
    seed = "canonical" if args.seed is None else args.seed
    f = resolve(c, seed)
    out = {"cone": cone_to_dict(c), "seed": seed, "fan": f.to_dict()}
    text = f"smooth fan with {len(f.rays)} rays and {len(f.maximal_cones)} maximal cones (seed {seed})"
    return out, EXIT_OK, text


def _cmd_verify(args: argparse.Namespace) -> tuple[dict, int, str]:
    c = _load_cone(args)
    seed = 0 if args.seed is None else args.seed
    if not isinstance(seed, int):
        raise ValidationError("verify needs an integer --seed")
    rep = cross_validate(c, _face(args), trials=args.trials, seed=seed,
                         bound_multiplier=args.bound_multiplier, budget=args.budget)
    lines = [f"verdict: {rep.verdict}", f"minimal set: {[list(v) for v in rep.minimal_set.minimal_points]}"]
    lines += [f"  probe {p['v']}: witness {'found' if p['witness_found'] else 'not found'}" for p in rep.nonminimal_probes]
    lines += [f"  note: {x}" for x in rep.notes]
    return rep.to_dict(), _VERDICT_EXIT[rep.verdict], "\n".join(lines)


def _cmd_qo(args: argparse.Namespace) -> tuple[dict, int, str]:
    if args.input is None:
        raise ValidationError("no branch file given: pass --input FILE")
    data = _load_json(args.input)
    branches = branches_from_json(data, checked=not args.unchecked)
    if args.unchecked:
        pairs = []
        for i, b in enumerate(branches):
            entry: dict[str, Any] = {"branch": i}
            if isinstance(b, QOBranch):
                entry.update(b.to_dict())
                entry["lattice"] = lattice_from_exponents(b).to_dict()
            else:
                entry["error"] = str(b)
            pairs.append(entry)
        bad = [p for p in pairs if "error" in p]
        text = "\n".join(f"branch {p['branch']}: " + (p["error"] if "error" in p else f"index {p['lattice']['index']}")
                         for p in pairs)
        return {"branches": pairs}, EXIT_INVALID if bad else EXIT_OK, text
    rep = multi_branch(branches)
    lines = []
    for i, (r, e) in enumerate(zip(rep.results, rep.errors)):
        if r is None:
            lines.append(f"branch {i}: error: {e}")
        else:
            lines.append(f"branch {i}: index {r.lattice.index}, {len(r)} essential divisor(s) {[list(v) for v in r.essential.divisors]}")
    lines.append(f"total: {rep.total}")
    return rep.to_dict(), EXIT_OK if rep.ok else EXIT_INVALID, "\n".join(lines)


def _cmd_arc_poset(args: argparse.Namespace) -> tuple[dict, int, str]:
    c = _load_cone(args)
    if args.points is None:
        raise ValidationError("arc-poset needs --points (a JSON list of lattice points or a file holding one)")
    raw = args.points.strip()
    pts = json.loads(raw) if raw.startswith("[") else _load_json(raw)
    if not isinstance(pts, list) or not all(isinstance(p, list) for p in pts):
        raise ValidationError("--points must be a JSON list of integer lists")
    poset = arc_poset(c, pts)
    out = {"cone": cone_to_dict(c), **poset.to_dict()}
    nodes = [list(n.v) for n in poset.nodes]
    text = "\n".join(f"{nodes[i]} < {nodes[j]}" for i, j in poset.covers) or "no relations"
    return out, EXIT_OK, text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toric-nash", description="Essential divisors and Nash components of toric germs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def add(name: str, func: Any, help_text: str, face: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--cone", help="cone JSON file: {\"lattice_rank\": n, \"rays\": [[...], ...]}")
        sp.add_argument("--input", help="input file (alias of --cone; the branch file for qo)")
        if face:
            sp.add_argument("--face", help="face as ray indices into the canonical ray order, e.g. 0,2")
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        return sp

    add("essential-divisors", _cmd_essential, "minimal interior elements over a face orbit")
    add("local-nash", _cmd_local_nash, "local Nash components as arc-family closures")
    add("hilbert-basis", _cmd_hilbert, "Hilbert basis of the cone monoid", face=False)
    sp = add("resolve", _cmd_resolve, "smooth fan refining the cone", face=False)
    sp.add_argument("--seed", type=_seed, default=None, help='integer or "canonical" (default canonical)')
    sp = add("verify", _cmd_verify, "cross-validate against brute force and resolutions")
    sp.add_argument("--trials", type=int, default=10, help="resolutions to test (default 10)")
    sp.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    sp.add_argument("--bound-multiplier", type=int, default=1, help="oracle box multiplier (default 1)")
    sp.add_argument("--budget", type=int, default=20, help="witness search attempts per probe (default 20)")
    sp = add("qo", _cmd_qo, "essential divisors of quasi-ordinary branches", face=False)
    sp.add_argument("--unchecked", action="store_true", help="skip exponent validation and only build the lattice pair")
    sp = add("arc-poset", _cmd_arc_poset, "order the arc families of given points", face=False)
    sp.add_argument("--points", help="JSON list of points, or a file holding one")
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code, text = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CapExceeded as exc:
        print(f"error: {exc} (raise TORIC_NASH_CAP to allow more)", file=sys.stderr)
        return EXIT_CAP
    except ToricNashError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    body = canonical_json({"schema": SCHEMA_VERSION, "command": args.command, "report": report}) \
        if args.format == "json" else text + "\n"
    if args.output:
        write_atomic(args.output, body)
    else:
        sys.stdout.write(body)
    return code


def main() -> None:
    sys.exit(run())
