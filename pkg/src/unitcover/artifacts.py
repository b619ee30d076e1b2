"""JSON interchange: group and equation descriptions, solution streams,
covers, direction and family reports.

All rationals travel as exact strings ("-8/9"); floats are rejected on
input. Every artifact carries a versioned schema tag, the semantic config
that produced it and the tool version. Serialization is canonical (sorted
keys) so identical runs produce identical bytes regardless of worker
count.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .covers import Cover, Hyperplane
from .degeneracy import BVector, ClassLabel, DirectionMatrix, EpsilonMatrix
from .equations import Equation, Solution, SolutionSet
from .errors import InputError
from .exact import UniPoly, format_rational, parse_rational
from .groups import FinRankGroup
from .lowerbound import LowerBoundInstance, SumSample, WitnessReport

TOOL_VERSION = "0.1.0"

GROUP_SCHEMA = "group/1"
EQUATION_SCHEMA = "equation/1"
SOLUTIONS_SCHEMA = "solutions/1"
POINTS_SCHEMA = "points/1"
COVER_SCHEMA = "cover/1"
FACTOR_SCHEMA = "factor/1"
MEMBER_SCHEMA = "member/1"
EQUIV_SCHEMA = "equiv/1"
CLASSIFY_SCHEMA = "classify/1"
DIRECTION_SCHEMA = "direction/1"
FAMILY_SCHEMA = "family/1"
LEMMA41_SCHEMA = "lemma41/1"
INSTANCE4_SCHEMA = "instance4/1"
BSET_SCHEMA = "bset/1"
REPORT_SCHEMA = "report/1"


def require(obj: dict, field: str):
    if not isinstance(obj, dict) or field not in obj:
        raise InputError(f"missing field '{field}'")
    return obj[field]


def dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def dump_json_line(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def write_artifact(path, payload: dict) -> None:
    Path(path).write_text(dump_json(payload), encoding="utf-8")


def load_json(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from exc


def stamp(payload: dict, config: Optional[dict] = None) -> dict:
    payload = dict(payload)
    payload["version"] = TOOL_VERSION
    payload["config"] = config or {}
    return payload


# -- rationals --------------------------------------------------------------


def rational_list(values: Sequence) -> list:
    return [format_rational(Fraction(v)) for v in values]


def parse_rational_list(values, what: str = "value") -> tuple:
    if not isinstance(values, list):
        raise InputError(f"{what} must be a JSON array of exact rational strings")
    return tuple(parse_rational(v) for v in values)


# -- groups and equations ----------------------------------------------------


def group_to_json(group: FinRankGroup) -> dict:
    return {
        "schema": GROUP_SCHEMA,
        "n": group.n,
        "generators": [rational_list(g) for g in group._gen_values],
        "sign_torsion": group.sign_torsion,
    }


def group_from_json(obj: dict) -> FinRankGroup:
    n = require(obj, "n")
    generators = require(obj, "generators")
    sign_torsion = require(obj, "sign_torsion")
    if not isinstance(n, int) or isinstance(n, bool):
        raise InputError("field 'n' must be an integer")
    if not isinstance(sign_torsion, bool):
        raise InputError("field 'sign_torsion' must be a boolean")
    gens = [parse_rational_list(g, "generator") for g in generators]
    return FinRankGroup(n, gens, sign_torsion)


def equation_to_json(eq: Equation) -> dict:
    return {
        "schema": EQUATION_SCHEMA,
        "a": rational_list(eq.a),
        "group": group_to_json(eq.group),
    }


def equation_from_json(obj: dict) -> Equation:
    a = parse_rational_list(require(obj, "a"), "coefficients")
    group = group_from_json(require(obj, "group"))
    return Equation(a, group)


def load_equation(path) -> tuple:
    """(equation, default_box) from an instance file."""
    obj = load_json(path)
    eq = equation_from_json(obj)
    box = obj.get("box")
    if box is not None and (not isinstance(box, int) or isinstance(box, bool) or box < 0):
        raise InputError("field 'box' must be a nonnegative integer")
    return eq, box


# -- solutions ---------------------------------------------------------------


def solution_to_json(sol: Solution) -> dict:
    return {
        "x": rational_list(sol.x),
        "witness": {"exponents": list(sol.exponents), "signs": list(sol.signs)},
        "degenerate": sol.degenerate,
        "vanishing_subsets": [list(s) for s in sol.vanishing],
    }


def write_solutions(path, ss: SolutionSet, config: Optional[dict] = None) -> None:
    header = stamp(
        {
            "schema": SOLUTIONS_SCHEMA,
            "equation": equation_to_json(ss.equation),
            "box": ss.box,
            "count": len(ss),
        },
        config,
    )
    lines = [dump_json_line(header)]
    for sol in ss:
        lines.append(dump_json_line(solution_to_json(sol)))
    Path(path).write_text("".join(lines), encoding="utf-8")


def read_solutions(path) -> SolutionSet:
    """Rebuild a solution set from a JSONL stream, re-verifying every line
    (sum, membership, classification)."""
    from .equations import make_solution  # local import to avoid a cycle

    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text:
        raise InputError(f"{path}: empty solutions file")
    header = json.loads(text[0])
    if require(header, "schema") != SOLUTIONS_SCHEMA:
        raise InputError(f"{path}: expected schema {SOLUTIONS_SCHEMA}")
    eq = equation_from_json(require(header, "equation"))
    box = require(header, "box")
    solutions = []
    for line in text[1:]:
        if not line.strip():
            continue
        obj = json.loads(line)
        x = parse_rational_list(require(obj, "x"), "solution")
        witness = require(obj, "witness")
        sol = make_solution(
            eq,
            x,
            exponents=tuple(require(witness, "exponents")),
            signs=tuple(require(witness, "signs")),
        )
        stated = [tuple(s) for s in require(obj, "vanishing_subsets")]
        if list(sol.vanishing) != stated:
            raise InputError(f"{path}: stated vanishing subsets disagree with recomputation")
        solutions.append(sol)
    solutions.sort(key=Solution.sort_key)
    return SolutionSet(eq, box, tuple(solutions))


# -- points and covers ---------------------------------------------------------


def load_points(path) -> list:
    """Points from a points file (bare array or wrapped), an instance
    artifact with embedded solutions, or a solutions JSONL stream."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        # Not a single JSON document: treat it as a solutions JSONL stream.
        ss = read_solutions(path)
        return [list(sol.x) for sol in ss]
    if isinstance(obj, list):
        return [parse_rational_list(p, "point") for p in obj]
    if isinstance(obj, dict):
        if obj.get("schema") == SOLUTIONS_SCHEMA:
            ss = read_solutions(path)
            return [list(sol.x) for sol in ss]
        if "solutions" in obj:
            return [
                parse_rational_list(require(s, "x"), "solution point")
                for s in obj["solutions"]
            ]
        if "points" in obj:
            return [parse_rational_list(p, "point") for p in obj["points"]]
    raise InputError(f"{path}: cannot find points in this file")


def cover_to_json(cover: Cover, n: int) -> dict:
    return {
        "schema": COVER_SCHEMA,
        "n": n,
        "normals": [list(h.normal) for h in cover.hyperplanes],
        "assignment": list(cover.assignment),
        "size": cover.size,
        "proven_minimal": cover.proven_minimal,
    }


# -- degeneracy reports --------------------------------------------------------


def poly_to_json(p: UniPoly) -> list:
    return rational_list(p.coeffs)


def direction_to_json(c: DirectionMatrix) -> list:
    return [list(row) for row in c.c]


def family_to_json(
    c: DirectionMatrix,
    blam: Sequence[UniPoly],
    bv: BVector,
    eps: EpsilonMatrix,
    normals: Sequence[Hyperplane],
    coverage: list,
) -> dict:
    return {
        "schema": FAMILY_SCHEMA,
        "direction": direction_to_json(c),
        "kernel_polynomials": [poly_to_json(p) for p in blam],
        "b": rational_list(bv.b),
        "b0": format_rational(bv.b0),
        "epsilon": [list(row) for row in eps.eps],
        "normals": [list(h.normal) for h in normals],
        "coverage": coverage,
    }


def class_label_to_json(label: ClassLabel) -> dict:
    out = {
        "schema": CLASSIFY_SCHEMA,
        "label": label.kind,
        "box": label.box,
        "relative": label.kind == "I",
    }
    if label.rank is not None:
        out["rank"] = label.rank
    if label.direction is not None:
        out["direction"] = direction_to_json(label.direction)
    return out


# -- lower-bound artifacts -----------------------------------------------------


def witness_report_to_json(report: WitnessReport) -> dict:
    out = {
        "schema": LEMMA41_SCHEMA,
        "n": report.n,
        "mode": report.mode,
        "subset_size": report.subset_size,
        "subsets_checked": report.subsets_checked,
        "failures": [
            [list(p) for p in subset] for subset in report.failures
        ],
        "witness_histogram": {str(k): v for k, v in report.witness_histogram.items()},
    }
    if report.seed is not None:
        out["seed"] = report.seed
    if report.notes:
        out["notes"] = list(report.notes)
    return out


def instance_to_json(inst: LowerBoundInstance) -> dict:
    return {
        "schema": INSTANCE4_SCHEMA,
        "n": inst.n,
        "gamma1": group_to_json(inst.gamma1),
        "u": rational_list(inst.u),
        "b": format_rational(inst.b),
        "equation": equation_to_json(inst.equation),
        "solutions": [solution_to_json(s) for s in inst.solutions],
    }


def sum_sample_to_json(sample: SumSample) -> dict:
    return {
        "schema": BSET_SCHEMA,
        "values": rational_list(sample.values),
        "count": len(sample.values),
        "complete": sample.complete,
    }
