"""Command-line entry point: ``multiport-gpt <command> [options]``.

Exit status is 0 on success, 1 when a verification, induction or feasibility
check fails, and 2 for usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional

from . import constraints, serialize
from .bunching import complete_family, feasibility_check, maximize_bunching
from .fock import enumerate_states, label
from .linprog import Status
from .multiport import (ParticleKind, RationalizationError, UnitaryMultiport, build_transition_matrix,
                        builtin_unitary, state_space_for, transition_array)
from .reduction import deletion_chain

log = logging.getLogger("multiport_gpt")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_state(text: str):
    try:
        return tuple(int(t) for t in text.replace("{", "").replace("}", "").split(","))
    except ValueError:
        raise UsageError(f"cannot parse state {text!r}; use e.g. 1,1,1") from None


def load_unitary(spec: str) -> UnitaryMultiport:
    if spec.startswith("file:"):
        path = spec[5:]
        obj = serialize.load_json(path)
        rows = obj["amplitudes"] if isinstance(obj, dict) else obj
        try:
            amps = [[complex(*v) if isinstance(v, list) else complex(v) for v in row]
                    for row in rows]
        except (TypeError, ValueError) as exc:
            raise serialize.FormatError(f"{path}: amplitudes must be [re, im] pairs") from exc
        return UnitaryMultiport(amps, name=path)
    return builtin_unitary(spec)


def _emit(args, obj, kind: str = "matrix") -> None:
    if args.format == "csv":
        if kind == "matrix":
            text = serialize.matrix_to_csv(obj)
        elif kind == "states":
            text = serialize.states_to_csv(obj)
        else:
            raise UsageError(f"CSV output is not available for {args.command}")
    else:
        text = serialize.dump_text(obj)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_states(args) -> int:
    space = enumerate_states(args.particles, args.modes, 1 if args.exclusive else None)
    _emit(args, serialize.states_to_dict(space), "states")
    return EXIT_OK


def cmd_deletion(args) -> int:
    to = args.particles - 1 if args.to is None else args.to
    d = deletion_chain(args.particles, to, args.modes)
    _emit(args, serialize.matrix_to_dict(d, args.encoding))
    return EXIT_OK


def cmd_quantum(args) -> int:
    u = load_unitary(args.unitary)
    kind = ParticleKind(args.kind)
    try:
        m = build_transition_matrix(u, args.particles, kind)
        obj = serialize.matrix_to_dict(m, args.encoding)
    except RationalizationError:
        if args.encoding != serialize.FLOAT64:
            raise
        space, values = transition_array(u, args.particles, kind)
        obj = serialize.float_matrix_to_dict(space, values)
    _emit(args, obj)
    return EXIT_OK


def cmd_verify(args) -> int:
    obj = serialize.load_json(args.family)
    if isinstance(obj, dict) and "matrix" in obj:
        # a lone matrix: its lower levels are whatever consistency forces
        top = serialize.matrix_from_dict(obj, check=False)
        try:
            family = complete_family(top)
        except constraints.InfeasibleReduction as exc:
            _emit(args, {"passed": False, "consistent": False, "notes": [str(exc)]}, "report")
            return EXIT_FAILED
    else:
        family = serialize.family_from_dict(obj)
    report = constraints.verify(family, composite=args.composite)
    _emit(args, report.as_dict(), "report")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_induce(args) -> int:
    m = serialize.matrix_from_dict(serialize.load_json(args.matrix), check=False)
    try:
        lower = constraints.induce_lower(m, args.to)
    except constraints.InfeasibleReduction as exc:
        _emit(args, {"status": "infeasible", "detail": str(exc)}, "report")
        return EXIT_FAILED
    if args.format == "csv":
        _emit(args, serialize.matrix_to_dict(lower, args.encoding))
    else:
        obj = serialize.matrix_to_dict(lower, args.encoding)
        obj["doubly_stochastic"] = constraints.is_doubly_stochastic(lower)
        _emit(args, obj)
    return EXIT_OK


def cmd_entropy(args) -> int:
    obj = serialize.load_json(args.distribution)
    dist = serialize.distribution_from_dict(obj)
    out = {"entropy_bits": constraints.shannon_entropy(dist)}
    if dist.space.particle_count >= 1:
        reduced = constraints.reduce_distribution(dist, 1)
        out["single_particle_entropy_bits"] = constraints.shannon_entropy(reduced)
    if dist.space.particle_count == 2:
        out["composite"] = constraints.is_composite(dist)
    _emit(args, out, "report")
    return EXIT_OK


def cmd_bunching(args) -> int:
    m = serialize.matrix_from_dict(serialize.load_json(args.matrix))
    if args.input:
        inputs = [_parse_state(args.input)]
    else:
        inputs = list(m.input_space.states)
    rows = {label(s): serialize.format_rational(constraints.bunching_probability(m, s))
            for s in inputs}
    out = {"particle_count": m.particle_count, "mode_count": m.mode_count, "bunching": rows}
    if m.particle_count == 2:
        out["pair_bunching_bound"] = serialize.format_rational(constraints.pair_bunching_bound(m))
    _emit(args, out, "report")
    return EXIT_OK


def _solution_dict(sol, k: int, n: int, encoding: str) -> dict:
    out = {"particle_count": n, "mode_count": k, "status": sol.status.value,
           "engine": sol.engine}
    if sol.optimal:
        out["objective_value"] = serialize.format_rational(sol.optimal_value)
        if sol.engine == "exact":
            out["family"] = [serialize.matrix_to_dict(m, encoding) for m in sol.witness]
        else:
            out["objective_value_float"] = sol.value_float
            out["family"] = [{"particle_count": i + 1, "encoding": serialize.FLOAT64,
                              "matrix": [[float(v) for v in row] for row in w]}
                             for i, w in enumerate(sol.witness)]
    return out


def cmd_maximize(args) -> int:
    target = _parse_state(args.input) if args.input else None
    sol = maximize_bunching(args.modes, args.particles, composite=args.composite,
                            engine=args.engine, free_single_particle=args.free_single_particle,
                            objective_input=target)
    out = _solution_dict(sol, args.modes, args.particles, args.encoding)
    if sol.engine == "exact":
        report = constraints.verify(sol.witness, composite=args.composite)
        out["witness_verified"] = report.passed
    _emit(args, out, "report")
    return EXIT_OK


def cmd_feasibility(args) -> int:
    m = serialize.matrix_from_dict(serialize.load_json(args.matrix))
    sol = feasibility_check(m, engine=args.engine)
    out = {"particle_count": m.particle_count, "mode_count": m.mode_count,
           "feasible": sol.optimal, "status": sol.status.value, "engine": sol.engine,
           "doubly_stochastic": constraints.is_doubly_stochastic(m)}
    if sol.optimal and sol.engine == "exact":
        out["family"] = [serialize.matrix_to_dict(w, args.encoding) for w in sol.witness]
    _emit(args, out, "report")
    return EXIT_OK if sol.optimal else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--encoding", choices=[serialize.RATIONAL, serialize.FLOAT64],
                        default=serialize.RATIONAL)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="multiport-gpt",
        description="Operational models of noninteracting identical particles on multiports.")
    sub = parser.add_subparsers(dest="command", required=True)

    def nk(p, need_k=True):
        p.add_argument("-n", "--particles", type=int, required=True)
        if need_k:
            p.add_argument("-k", "--modes", type=int, required=True)

    p = sub.add_parser("states", parents=[common], help="list occupation states")
    nk(p)
    p.add_argument("--exclusive", action="store_true", help="at most one particle per mode")
    p.set_defaults(func=cmd_states)

    p = sub.add_parser("deletion", parents=[common], help="particle-deletion matrix")
    nk(p)
    p.add_argument("--to", type=int, help="target particle number (default N-1)")
    p.set_defaults(func=cmd_deletion)

    p = sub.add_parser("quantum", parents=[common], help="quantum transition matrix")
    nk(p, need_k=False)
    p.add_argument("--unitary", required=True,
                   help="bs:T, tritter, fourier:N, grover:N or file:PATH")
    p.add_argument("--kind", choices=[k.value for k in ParticleKind], default="boson")
    p.set_defaults(func=cmd_quantum)

    p = sub.add_parser("verify", parents=[common], help="check the axioms on a family")
    p.add_argument("--family", required=True, metavar="PATH",
                   help="family JSON, or a single matrix whose lower levels are induced")
    p.add_argument("--composite", action="store_true", help="also check product evolution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("induce", parents=[common], help="lower-level matrix implied by consistency")
    p.add_argument("matrix", metavar="PATH")
    p.add_argument("--to", type=int, required=True)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("entropy", parents=[common], help="entropy and compositeness")
    p.add_argument("distribution", metavar="PATH")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("bunching", parents=[common], help="bunching probabilities of a matrix")
    p.add_argument("matrix", metavar="PATH")
    p.add_argument("--input", help="input state such as 1,1,1 (default: every input)")
    p.set_defaults(func=cmd_bunching)

    p = sub.add_parser("maximize-bunching", parents=[common], help="LP over admissible families")
    nk(p)
    p.add_argument("--composite", action="store_true")
    p.add_argument("--engine", choices=["exact", "float"], default="exact")
    p.add_argument("--free-single-particle", action="store_true",
                   help="treat S^(1) as unknown instead of the uniform 1/K matrix")
    p.add_argument("--input", help="objective input state (default: first singly occupied)")
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("feasibility", parents=[common],
                       help="can lower levels complete this matrix to an admissible family?")
    p.add_argument("matrix", metavar="PATH")
    p.add_argument("--engine", choices=["exact", "float"], default="exact")
    p.set_defaults(func=cmd_feasibility)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, serialize.FormatError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
