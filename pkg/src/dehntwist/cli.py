"""Command-line front end: validate, build, check, les, hochschild.

Exit codes are a stable contract: 0 all checks passed, 1 a mathematical
check failed, 2 the input could not be read or parsed.  Structured output
is a single versioned JSON document with fully sorted keys, so identical
invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .bimodule import (
    BimoduleError,
    bimodule_relation_failures,
    component_degree_violations,
    cone,
    diagonal,
    graph_bimodule,
    structure_tables_equal,
)
from .category import (
    AInftyCategory,
    CategoryError,
    ParseError,
    check_ainfty,
    default_max_order,
    identity_functor,
    load_category,
)
from .homcomplex import CappedHomComplex, identity_class_is_nonzero
from .sequences import SequenceError, build_D, open_sequence
from .twistcomplex import TwistTower, check_evaluation_closedness, structure_census

SCHEMA = "dehntwist-report/1"

PASS, FAIL, INPUT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    path: str
    spheres: list[str] = field(default_factory=list)
    pair: tuple[str, str] | None = None
    at: tuple[str, str] | None = None
    bound: int = 4
    cap: int = 6
    max_order: int | None = None
    out: str | None = None
    format: str = "text"

    @property
    def n(self) -> int:
        return len(self.spheres)


def _ranks_list(ranks: dict[int, int]) -> list[list[int]]:
    return [[int(t), int(r)] for t, r in sorted(ranks.items()) if r]


def _flags_list(flags: dict[int, bool]) -> list[list]:
    return [[int(t), bool(v)] for t, v in sorted(flags.items())]


def _emit(report: dict, config: RunConfig) -> None:
    if config.format == "structured":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        lines = []
        _render_text(report, lines, prefix="")
        text = "\n".join(lines) + "\n"
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)


def _render_text(node, lines: list[str], prefix: str) -> None:
    if isinstance(node, dict):
        for key in node:
            value = node[key]
            if isinstance(value, (dict, list)) and value and not _is_flat(value):
                lines.append(f"{prefix}{key}:")
                _render_text(value, lines, prefix + "  ")
            else:
                lines.append(f"{prefix}{key}: {_flat(value)}")
    elif isinstance(node, list):
        for value in node:
            if isinstance(value, (dict, list)) and value and not _is_flat(value):
                lines.append(f"{prefix}-")
                _render_text(value, lines, prefix + "  ")
            else:
                lines.append(f"{prefix}- {_flat(value)}")
    else:
        lines.append(f"{prefix}{_flat(node)}")


def _is_flat(value) -> bool:
    if isinstance(value, list):
        return all(not isinstance(v, (dict, list)) or _is_flat(v) for v in value) and (
            sum(1 for _ in value) <= 12
            and all(not isinstance(v, dict) for v in value)
        )
    return not isinstance(value, dict)


def _flat(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return "[" + ", ".join(_flat(v) for v in value) + "]"
    return str(value)


def _load(config: RunConfig) -> AInftyCategory:
    path = Path(config.path)
    if not path.exists():
        raise ParseError(0, f"no such file: {path}")
    return load_category(path)


def _validate_spheres(cat: AInftyCategory, config: RunConfig) -> None:
    if not config.spheres:
        raise CategoryError("this command needs a nonempty --spheres list")
    for s in config.spheres:
        if s not in cat.objects:
            raise CategoryError(f"unknown object {s!r} in --spheres")
        if not cat.is_sphere(s):
            raise CategoryError(f"object {s} is not declared as a sphere")


# -- commands -------------------------------------------------------------------


def cmd_validate(config: RunConfig) -> int:
    cat = _load(config)
    order = config.max_order or default_max_order(cat)
    rep = check_ainfty(cat, order)
    report = {
        "schema": SCHEMA,
        "command": "validate",
        "category": cat.name,
        "max_order": order,
        "chains_checked": rep.chains_checked,
        "violations": [
            {"order": v.order, "chain": list(v.chain), "residual": sorted(v.residual)}
            for v in rep.violations[:10]
        ],
        "status": "pass" if rep.ok else "fail",
    }
    _emit(report, config)
    return PASS if rep.ok else FAIL


def cmd_build(config: RunConfig) -> int:
    cat = _load(config)
    _validate_spheres(cat, config)
    tower = TwistTower(cat, config.spheres, check_bound=config.bound)
    e_n, g_n = tower.E(), tower.G(tower.n)
    pairs = [config.at] if config.at else [(a, b) for a in cat.objects for b in cat.objects]
    stages = {}
    for name, stage in (("twist_complex", e_n), ("cone_model", g_n)):
        per_pair = {}
        for a, b in pairs:
            summands = tower.summands(stage, a, b)
            space = stage.space(a, b)
            degree_table = {}
            for d in space.degrees:
                degree_table[d] = degree_table.get(d, 0) + 1
            per_pair[f"{a},{b}"] = {
                "dim": space.dim,
                "degrees": _ranks_list(degree_table),
                "summands": [
                    {
                        "tuple": list(s.index_tuple),
                        "factor_dims": list(s.factor_dims),
                        "shift": s.shift,
                        "dim": s.dim,
                    }
                    for s in summands
                ],
            }
        stages[name] = per_pair
    report = {
        "schema": SCHEMA,
        "command": "build",
        "category": cat.name,
        "spheres": list(config.spheres),
        "n": tower.n,
        "stages": stages,
        "census": {
            "twist_complex": structure_census(tower, e_n, bound=2),
            "cone_model": structure_census(tower, g_n, bound=2),
        },
        "status": "pass",
    }
    _emit(report, config)
    return PASS


def cmd_check(config: RunConfig) -> int:
    cat = _load(config)
    _validate_spheres(cat, config)
    bound = config.bound
    results: dict = {}
    ok = True

    ainfty = check_ainfty(cat, config.max_order or default_max_order(cat))
    results["category_relations"] = {
        "status": "pass" if ainfty.ok else "fail",
        "violations": [
            {"order": v.order, "chain": list(v.chain)} for v in ainfty.violations[:5]
        ],
    }
    ok &= ainfty.ok

    try:
        tower = TwistTower(cat, config.spheres, check_bound=bound, check_cones=False)
        stages = {"diagonal": tower.diagonal}
        for i in range(1, tower.n + 1):
            stages[f"stage_{i}"] = tower.L(i)
        stages["cone_model"] = tower.G(tower.n)
        stages["twist_complex"] = tower.E()
        stages["cone_of_collapse"] = cone(tower.tilde_ev(), check_bound=None)
        relations = {}
        for name, stage in stages.items():
            failures = bimodule_relation_failures(stage, bound, max_failures=3)
            relations[name] = {
                "status": "pass" if not failures else "fail",
                "witnesses": [repr(w[:5]) for w in failures],
            }
            ok &= not failures
        results["bimodule_relations"] = relations

        key = check_evaluation_closedness(tower, bound)
        results["closedness_cases"] = {
            "status": "pass" if key.ok else "fail",
            "inputs_checked": key.inputs_checked,
            "cases": {
                f"ev{i}": {
                    case: {"blocks": t.blocks, "mismatches": len(t.mismatches)}
                    for case, t in sorted(cases.items())
                }
                for i, cases in key.per_ev.items()
            },
            "witness": repr(key.first_witness()) if not key.ok else None,
        }
        ok &= key.ok

        degree_bad = []
        for i in range(tower.n):
            degree_bad += component_degree_violations(tower.ev(i), bound)
        degree_bad += component_degree_violations(tower.tilde_ev(), bound)
        results["component_degrees"] = {
            "status": "pass" if not degree_bad else "fail",
            "violations": [repr(v) for v in degree_bad[:3]],
        }
        ok &= not degree_bad

        results["cone_rearrangement"] = {
            "status": "pass" if all(c["tables_equal"] for c in tower.rearrangement_checks) else "fail",
            "stages": [
                {"stage": c["stage"], "tables_equal": c["tables_equal"], "bound": c["bound"]}
                for c in tower.rearrangement_checks
            ],
        }
        ok &= all(c["tables_equal"] for c in tower.rearrangement_checks)

        graph_eq, graph_witness = structure_tables_equal(
            graph_bimodule(cat, identity_functor(cat)), diagonal(cat), bound
        )
        results["graph_of_identity"] = {
            "status": "pass" if graph_eq else "fail",
            "witness": repr(graph_witness) if graph_witness else None,
        }
        ok &= graph_eq
    except (BimoduleError, SequenceError) as exc:
        results["construction"] = {"status": "fail", "error": str(exc)}
        ok = False

    report = {
        "schema": SCHEMA,
        "command": "check",
        "category": cat.name,
        "spheres": list(config.spheres),
        "bound": bound,
        "results": results,
        "status": "pass" if ok else "fail",
    }
    _emit(report, config)
    return PASS if ok else FAIL


def cmd_les(config: RunConfig) -> int:
    cat = _load(config)
    _validate_spheres(cat, config)
    if config.pair is None:
        raise CategoryError("les needs --pair N,N'")
    n_obj, n_prime = config.pair
    try:
        rep = open_sequence(cat, config.spheres, n_obj, n_prime, check_bound=config.bound)
        oracle_ok = True
        error = None
    except SequenceError as exc:
        oracle_ok = False
        error = str(exc)
        rep = None
    report = {
        "schema": SCHEMA,
        "command": "les",
        "category": cat.name,
        "spheres": list(config.spheres),
        "pair": [n_obj, n_prime],
    }
    if rep is not None:
        report.update(
            {
                "legs": {name: _ranks_list(ranks) for name, ranks in rep.legs.items()},
                "leg_totals": rep.total_ranks(),
                "induced_maps": {name: _ranks_list(r) for name, r in rep.maps.items()},
                "exact": rep.exact,
                "euler_additive": rep.euler_additive,
                "oracle_ranks": _ranks_list(rep.oracle_ranks or {}),
                "oracle_agrees": rep.oracle_agrees,
                "status": "pass" if (rep.exact and rep.oracle_agrees) else "fail",
            }
        )
    else:
        report.update({"error": error, "status": "fail"})
    _emit(report, config)
    return PASS if report["status"] == "pass" else FAIL


def cmd_hochschild(config: RunConfig) -> int:
    cat = _load(config)
    diag = diagonal(cat)
    endo = CappedHomComplex(diag, diag, config.cap)
    endo_low = CappedHomComplex(diag, diag, max(config.cap - 2, 0))
    endo_ranks = endo.homology_ranks()
    endo_stable = {
        t: endo.betti(t) == endo_low.betti(t) for t in sorted(set(endo.degrees()))
    }
    id_ok = identity_class_is_nonzero(endo)
    report = {
        "schema": SCHEMA,
        "command": "hochschild",
        "category": cat.name,
        "cap": config.cap,
        "endomorphisms_of_diagonal": {
            "ranks": _ranks_list(endo_ranks),
            "stable": _flags_list(endo_stable),
            "identity_class_nonzero": id_ok,
        },
    }
    ok = id_ok
    if config.spheres:
        _validate_spheres(cat, config)
        tower = TwistTower(cat, config.spheres, check_bound=config.bound)
        _, summary = build_D(cat, config.spheres, config.cap, tower=tower)
        report["twist_to_diagonal"] = {
            "spheres": list(config.spheres),
            "ranks": _ranks_list(summary.ranks),
            "stable": _flags_list(summary.stable),
            "induced_from_endomorphisms": _ranks_list(summary.induced_from_endomorphisms),
        }
    report["status"] = "pass" if ok else "fail"
    _emit(report, config)
    return PASS if ok else FAIL


# -- argument plumbing ------------------------------------------------------------


def _parse_pair(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError("expected two comma-separated objects")
    return parts[0], parts[1]


def _parse_spheres(text: str) -> list[str]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("expected a comma-separated object list")
    return parts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dehntwist",
        description="Exact checks and homology for twist complexes of sphere objects over GF(2).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spheres=False, pair=False, at=False, cap=False, max_order=False):
        p.add_argument("path", help="category file")
        if spheres:
            p.add_argument("--spheres", type=_parse_spheres, default=[], metavar="L1,L2,...")
        if pair:
            p.add_argument("--pair", type=_parse_pair, default=None, metavar="N,N'")
        if at:
            p.add_argument("--at", type=_parse_pair, default=None, metavar="A,B")
        p.add_argument("--bound", type=int, default=4, help="side-input length bound for checks")
        if cap:
            p.add_argument("--cap", type=int, default=6, help="component cap for hom complexes")
        if max_order:
            p.add_argument("--max-order", type=int, default=None, dest="max_order")
        p.add_argument("--out", default=None, help="write the report to this path")
        p.add_argument("--format", choices=("text", "structured"), default="text")

    common(sub.add_parser("validate", help="parse and verify the defining relations"), max_order=True)
    common(sub.add_parser("build", help="assemble the twist complex and report sizes"), spheres=True, at=True)
    common(sub.add_parser("check", help="run every mechanical identity check"), spheres=True, max_order=True)
    common(sub.add_parser("les", help="long exact sequence at a pair, oracle-checked"), spheres=True, pair=True)
    common(sub.add_parser("hochschild", help="capped endomorphism and twist-to-diagonal ranks"), spheres=True, cap=True)
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "build": cmd_build,
    "check": cmd_check,
    "les": cmd_les,
    "hochschild": cmd_hochschild,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        command=args.command,
        path=args.path,
        spheres=getattr(args, "spheres", []) or [],
        pair=getattr(args, "pair", None),
        at=getattr(args, "at", None),
        bound=args.bound,
        cap=getattr(args, "cap", 6),
        max_order=getattr(args, "max_order", None),
        out=args.out,
        format=args.format,
    )
    try:
        return COMMANDS[config.command](config)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return INPUT_ERROR
    except (CategoryError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
