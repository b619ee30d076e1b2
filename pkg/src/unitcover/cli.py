"""Command-line front end: every subcommand writes one JSON artifact and a
short summary to stdout.

Exit codes: 0 success, 1 input error, 2 verification failure (an invariant
that must hold by construction did not), 3 budget or search exhaustion.
Artifacts embed the semantic configuration and the tool version; execution
knobs (--workers, --out) do not influence results and are not embedded, so
reruns with different worker counts are byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import artifacts as art
from .covers import min_cover, verify_cover
from .degeneracy import (
    check_nonproportional,
    classify_tuple,
    cover_family,
    find_direction,
    lambda_kernel,
    specialize_at_minus_one,
    verify_sign_identities,
)
from .equations import (
    degenerate_subsum_hyperplanes,
    enumerate_solutions,
)
from .errors import (
    BudgetExceeded,
    InputError,
    LimitExceeded,
    NotFound,
    TooFewRows,
    UnitCoverError,
    VerificationError,
)
from .exact import format_rational, parse_rational
from .groups import FinRankGroup, canonical_rep, factorize, gamma_equivalent
from .lowerbound import (
    explicit_n_cover,
    generate_instance,
    max_points_per_subspace,
    sample_inequivalent_sums,
    verify_pattern_witnesses,
)

ENV_PREFIX = "UNITCOVER_"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFICATION = 2
EXIT_BUDGET = 3


def _env_default(name: str, fallback, cast):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise InputError(f"environment override {ENV_PREFIX}{name.upper()}={raw!r} is invalid")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unitcover",
        description="exact unit-equation enumeration, classification and subspace covers",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, box_default=None):
        p.add_argument("--box", type=int, default=_env_default("box", box_default, int))
        p.add_argument("--budget", type=int, default=_env_default("budget", None, int))
        p.add_argument("--seed", type=int, default=_env_default("seed", 0, int))
        p.add_argument("--workers", type=int, default=_env_default("workers", 1, int))
        p.add_argument("--out", default=_env_default("out", None, str))
        p.add_argument("--mode", default=_env_default("mode", None, str))

    p = sub.add_parser("factor", help="factor a rational over a group's prime basis")
    p.add_argument("value")
    p.add_argument("--group", required=True)
    add_common(p)

    p = sub.add_parser("member", help="decide membership in a group, with witness")
    p.add_argument("--group", required=True)
    p.add_argument("--x", required=True, help="comma-separated exact rationals")
    add_common(p)

    p = sub.add_parser("equiv", help="decide equivalence of two coefficient tuples")
    p.add_argument("--group", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    add_common(p)

    p = sub.add_parser("enumerate", help="enumerate solutions over an exponent box")
    p.add_argument("instance")
    add_common(p)

    p = sub.add_parser("classify", help="classify a normalized instance against its solutions")
    p.add_argument("instance", nargs="?")
    p.add_argument("--solutions")
    p.add_argument("--direction-box", type=int, default=1)
    add_common(p)

    p = sub.add_parser("cover", help="exact minimal subspace cover of a point set")
    p.add_argument("points")
    p.add_argument("--limit", type=int, default=None)
    add_common(p)

    p = sub.add_parser("direction", help="search for a degenerate direction")
    p.add_argument("--solutions", required=True)
    add_common(p, box_default=1)

    p = sub.add_parser("family", help="run the degenerate-direction pipeline end to end")
    p.add_argument("--solutions", required=True)
    add_common(p, box_default=1)

    p = sub.add_parser("lemma41", help="verify pattern witnesses for permutation subsets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=10 ** 5)
    p.add_argument("--allow-large", action="store_true")
    add_common(p)

    p = sub.add_parser("example4", help="generate an instance needing n subspaces")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma1", required=True, help="comma-separated generators of the base group")
    p.add_argument("--torsion", action="store_true")
    add_common(p, box_default=3)

    p = sub.add_parser("bset", help="sample pairwise inequivalent coordinate sums")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma1", required=True)
    p.add_argument("--torsion", action="store_true")
    p.add_argument("--count", type=int, default=5)
    add_common(p, box_default=3)

    p = sub.add_parser("report", help="merge artifacts into one summary")
    p.add_argument("paths", nargs="*")
    add_common(p)

    return parser


def _config(args, keys) -> dict:
    out = {"command": args.command}
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    return out


def _out_path(args, suffix=".json") -> Path:
    if args.out:
        return Path(args.out)
    return Path(f"{args.command}{suffix}")


def _load_group(path) -> FinRankGroup:
    return art.group_from_json(art.load_json(path))


def _split_rationals(text: str) -> tuple:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise InputError("expected a comma-separated list of exact rationals")
    return tuple(parse_rational(p) for p in parts)


def _emit(args, payload: dict, config: dict, suffix=".json") -> Path:
    path = _out_path(args, suffix)
    art.write_artifact(path, art.stamp(payload, config))
    return path


# -- command handlers ---------------------------------------------------------


def cmd_factor(args) -> int:
    group = _load_group(args.group)
    value = parse_rational(args.value)
    elem = factorize(value, group.basis)
    payload = {
        "schema": art.FACTOR_SCHEMA,
        "value": format_rational(value),
        "sign": elem.sign,
        "exponents": list(elem.exponents),
        "primes": list(group.basis.primes),
    }
    path = _emit(args, payload, _config(args, ["value"]))
    print(f"factor: {args.value} = sign {elem.sign}, exponents {list(elem.exponents)} over primes {list(group.basis.primes)}")
    print(f"artifact: {path}")
    return EXIT_OK


def cmd_member(args) -> int:
    group = _load_group(args.group)
    x = _split_rationals(args.x)
    witness = group.witness(x)
    payload = {
        "schema": art.MEMBER_SCHEMA,
        "x": art.rational_list(x),
        "member": witness is not None,
        "witness": list(witness) if witness is not None else None,
    }
    path = _emit(args, payload, _config(args, ["x"]))
    print(f"member: {witness is not None}" + (f" witness {list(witness)}" if witness is not None else ""))
    print(f"artifact: {path}")
    return EXIT_OK


def cmd_equiv(args) -> int:
    group = _load_group(args.group)
    a = _split_rationals(args.a)
    b = _split_rationals(args.b)
    equivalent = gamma_equivalent(group, a, b)
    payload = {
        "schema": art.EQUIV_SCHEMA,
        "a": art.rational_list(a),
        "b": art.rational_list(b),
        "equivalent": equivalent,
        "canonical_a": art.rational_list(canonical_rep(group, a)),
        "canonical_b": art.rational_list(canonical_rep(group, b)),
    }
    path = _emit(args, payload, _config(args, ["a", "b"]))
    print(f"equivalent: {equivalent}")
    print(f"artifact: {path}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    eq, default_box = art.load_equation(args.instance)
    box = args.box if args.box is not None else default_box
    if box is None:
        raise InputError("no box given (flag --box or instance field 'box')")
    kwargs = {"workers": args.workers}
    if args.budget is not None:
        kwargs["budget"] = args.budget
    ss = enumerate_solutions(eq, box, **kwargs)
    config = _config(args, ["box", "budget", "seed"])
    config["box"] = box
    path = _out_path(args, ".jsonl")
    art.write_solutions(path, ss, config)
    degenerate = sum(1 for s in ss if s.degenerate)
    print(f"solutions: {len(ss)} ({degenerate} degenerate) in box {box}")
    for s in ss:
        print("  " + ", ".join(format_rational(v) for v in s.x) + ("  [degenerate]" if s.degenerate else ""))
    print(f"artifact: {path}")
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.solutions:
        ss = art.read_solutions(args.solutions)
    else:
        if not args.instance:
            raise InputError("classify needs an instance file or --solutions")
        eq, default_box = art.load_equation(args.instance)
        box = args.box if args.box is not None else default_box
        if box is None:
            raise InputError("no box given (flag --box or instance field 'box')")
        kwargs = {"workers": args.workers}
        if args.budget is not None:
            kwargs["budget"] = args.budget
        ss = enumerate_solutions(eq, box, **kwargs)
    ss = ss.anchored_nondegenerate()
    label = classify_tuple(
        ss.equation.a, ss, box=args.direction_box, workers=args.workers
    )
    payload = art.class_label_to_json(label)
    payload["solutions_used"] = len(ss)
    config = _config(args, ["box", "direction_box", "budget"])
    path = _emit(args, payload, config)
    print(f"class: {label.kind} (box {label.box}, rank {label.rank})")
    print(f"artifact: {path}")
    return EXIT_OK


def cmd_cover(args) -> int:
    points = art.load_points(args.points)
    kwargs = {}
    if args.budget is not None:
        kwargs["node_budget"] = args.budget
    cover = min_cover(points, limit=args.limit, **kwargs)
    ok, missed = verify_cover(points, cover.hyperplanes)
    if not ok:
        raise VerificationError(f"computed cover misses point {missed}")
    n = len(points[0])
    payload = art.cover_to_json(cover, n)
    config = _config(args, ["limit", "budget"])
    path = _emit(args, payload, config)
    print(f"cover: m = {cover.size} over {len(points)} points in dimension {n}, proven_minimal = {cover.proven_minimal}")
    bound = 2 ** n
    if cover.size > bound:
        print(f"WARNING: cover size {cover.size} exceeds 2^n = {bound}")
    print(f"artifact: {path}")
    return EXIT_OK


def cmd_direction(args) -> int:
    ss = art.read_solutions(args.solutions).anchored_nondegenerate()
    kwargs = {"workers": args.workers}
    if args.budget is not None:
        kwargs["budget"] = args.budget
    c = find_direction(ss, box=args.box, **kwargs)
    payload = {
        "schema": art.DIRECTION_SCHEMA,
        "found": c is not None,
        "direction": art.direction_to_json(c) if c is not None else None,
        "box": args.box,
    }
    config = _config(args, ["box", "budget"])
    path = _emit(args, payload, config)
    print(f"direction: {'found ' + str(art.direction_to_json(c)) if c else 'none in box'}")
    print(f"artifact: {path}")
    return EXIT_OK


def cmd_family(args) -> int:
    ss_all = art.read_solutions(args.solutions)
    ss = ss_all.anchored_nondegenerate()
    kwargs = {"workers": args.workers}
    if args.budget is not None:
        kwargs["budget"] = args.budget
    c = find_direction(ss, box=args.box, **kwargs)
    config = _config(args, ["box", "budget"])
    if c is None:
        payload = {"schema": art.FAMILY_SCHEMA, "found": False, "box": args.box}
        path = _emit(args, payload, config)
        print("family: no degenerate direction in box")
        print(f"artifact: {path}")
        return EXIT_OK
    blam = lambda_kernel(ss, c)
    bv, eps = specialize_at_minus_one(blam, c)
    if not verify_sign_identities(ss, bv, eps):
        raise VerificationError("specialized identities failed on a solution row")
    if not check_nonproportional(ss.equation.a, bv):
        raise VerificationError("sign family is proportional to the coefficients")
    normals = cover_family(ss.equation.a, bv)
    coverage = []
    for sol in ss.system_rows():
        hit = next(
            (k for k, h in enumerate(normals) if h.contains_point(sol.x)), None
        )
        coverage.append(
            {"x": art.rational_list(sol.x), "hyperplane": hit}
        )
        if hit is None:
            raise VerificationError(
                f"solution {tuple(map(str, sol.x))} not covered by the sign family"
            )
    payload = art.family_to_json(c, blam, bv, eps, normals, coverage)
    payload["found"] = True
    payload["bound"] = 2 ** ss.equation.n
    path = _emit(args, payload, config)
    print(
        f"family: direction {art.direction_to_json(c)}, {len(normals)} hyperplanes "
        f"(bound {2 ** ss.equation.n}), all {len(coverage)} solutions covered"
    )
    print(f"artifact: {path}")
    return EXIT_OK


def cmd_lemma41(args) -> int:
    mode = args.mode or "exhaustive"
    kwargs = {"count": args.count, "seed": args.seed, "allow_large": args.allow_large}
    if args.budget is not None:
        kwargs["budget"] = args.budget
    report = verify_pattern_witnesses(args.n, mode=mode, **kwargs)
    payload = art.witness_report_to_json(report)
    config = _config(args, ["n", "budget", "seed", "count"])
    config["mode"] = mode
    path = _emit(args, payload, config)
    print(
        f"lemma41: n={report.n} mode={report.mode} subsets={report.subsets_checked} "
        f"failures={len(report.failures)}"
    )
    for note in report.notes:
        print(f"  note: {note}")
    print(f"artifact: {path}")
    if mode != "explore" and report.failures:
        print("VERIFICATION FAILURE: witness-free subset found")
        return EXIT_VERIFICATION
    return EXIT_OK


def _gamma1_from_args(args) -> FinRankGroup:
    gens = [(g,) for g in _split_rationals(args.gamma1)]
    return FinRankGroup(1, gens, args.torsion)


def cmd_example4(args) -> int:
    gamma1 = _gamma1_from_args(args)
    inst = generate_instance(gamma1, args.n, args.box)
    explicit = explicit_n_cover(inst)
    points = [s.x for s in inst.solutions]
    ok, missed = verify_cover(points, explicit)
    if not ok:
        raise VerificationError(f"explicit cover misses {missed}")
    per_flat = max_points_per_subspace(inst)
    payload = art.instance_to_json(inst)
    payload["explicit_cover_normals"] = [list(h.normal) for h in explicit]
    payload["max_points_per_flat"] = per_flat
    config = _config(args, ["n", "box", "gamma1", "torsion"])
    path = _emit(args, payload, config)
    print(
        f"instance: n={inst.n} u=({', '.join(format_rational(v) for v in inst.u)}) "
        f"b={format_rational(inst.b)} solutions={len(inst.solutions)}"
    )
    print(f"explicit cover: {len(explicit)} hyperplanes; max points per flat: {per_flat}")
    print(f"artifact: {path}")
    return EXIT_OK


def cmd_bset(args) -> int:
    gamma1 = _gamma1_from_args(args)
    sample = sample_inequivalent_sums(gamma1, args.n, args.count, args.box)
    payload = art.sum_sample_to_json(sample)
    config = _config(args, ["n", "box", "count", "gamma1", "torsion"])
    path = _emit(args, payload, config)
    values = ", ".join(format_rational(v) for v in sample.values)
    print(f"bset: {len(sample.values)} pairwise inequivalent sums: {values}")
    print(f"artifact: {path}")
    if not sample.complete:
        print(f"NOTE: only {len(sample.values)} of {args.count} found; enlarge the box")
        return EXIT_BUDGET
    return EXIT_OK


def cmd_report(args) -> int:
    sections = []
    violations = []
    for raw_path in args.paths:
        path = Path(raw_path)
        if not path.exists():
            raise InputError(f"{path}: no such artifact")
        text = path.read_text(encoding="utf-8")
        import json as _json

        try:
            obj = _json.loads(text)
        except _json.JSONDecodeError:
            obj = _json.loads(text.splitlines()[0])
        schema = art.require(obj, "schema")
        section = {"path": str(path), "schema": schema}
        if schema == art.COVER_SCHEMA:
            n = art.require(obj, "n")
            size = art.require(obj, "size")
            bound = 2 ** n
            section.update({"n": n, "size": size, "bound": bound,
                            "proven_minimal": art.require(obj, "proven_minimal")})
            if size > bound:
                violations.append(f"{path}: cover of size {size} exceeds 2^n = {bound}")
        elif schema == art.CLASSIFY_SCHEMA:
            section.update({"label": art.require(obj, "label"), "box": art.require(obj, "box")})
        elif schema == art.LEMMA41_SCHEMA:
            failures = art.require(obj, "failures")
            section.update({"n": art.require(obj, "n"), "mode": art.require(obj, "mode"),
                            "subsets_checked": art.require(obj, "subsets_checked"),
                            "failures": len(failures)})
            if failures and art.require(obj, "mode") != "explore":
                violations.append(f"{path}: {len(failures)} witness-free subsets")
        elif schema == art.INSTANCE4_SCHEMA:
            n = art.require(obj, "n")
            section.update({"n": n, "points": len(art.require(obj, "solutions")),
                            "lower_bound": n, "upper_bound": 2 ** n})
        elif schema == art.FAMILY_SCHEMA:
            if obj.get("found"):
                normals = art.require(obj, "normals")
                section.update({"found": True, "hyperplanes": len(normals)})
            else:
                section.update({"found": False})
        elif schema == art.BSET_SCHEMA:
            section.update({"count": art.require(obj, "count"),
                            "complete": art.require(obj, "complete")})
        elif schema == art.SOLUTIONS_SCHEMA:
            section.update({"count": art.require(obj, "count"), "box": art.require(obj, "box")})
        else:
            section.update({"note": "unrecognized schema, listed only"})
        sections.append(section)
    payload = {
        "schema": art.REPORT_SCHEMA,
        "sections": sections,
        "violations": violations,
    }
    path = _emit(args, payload, _config(args, []))
    print(f"report: {len(sections)} artifacts")
    for section in sections:
        line = ", ".join(f"{k}={v}" for k, v in section.items() if k != "path")
        print(f"  {section['path']}: {line}")
    for v in violations:
        print(f"VIOLATION: {v}")
    print(f"artifact: {path}")
    return EXIT_VERIFICATION if violations else EXIT_OK


HANDLERS = {
    "factor": cmd_factor,
    "member": cmd_member,
    "equiv": cmd_equiv,
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "cover": cmd_cover,
    "direction": cmd_direction,
    "family": cmd_family,
    "lemma41": cmd_lemma41,
    "example4": cmd_example4,
    "bset": cmd_bset,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return HANDLERS[args.command](args)
    except (BudgetExceeded, NotFound, LimitExceeded) as exc:
        _print_error(exc)
        return EXIT_BUDGET
    except (VerificationError,) as exc:
        _print_error(exc)
        return EXIT_VERIFICATION
    except (InputError, TooFewRows) as exc:
        _print_error(exc)
        return EXIT_INPUT
    except (OSError, ValueError) as exc:
        _print_error(exc)
        return EXIT_INPUT
    except UnitCoverError as exc:
        _print_error(exc)
        return EXIT_INPUT


def _print_error(exc: Exception) -> None:
    name = type(exc).__name__
    print(f"error: {name}: {exc}", file=sys.stderr)
    payload = {"error": name, "message": str(exc)}
    for attr in ("prime", "needed", "budget", "lower_bound", "limit"):
        if hasattr(exc, attr):
            payload[attr] = getattr(exc, attr)
    print(art.dump_json_line(payload), end="")


if __name__ == "__main__":
    sys.exit(main())
