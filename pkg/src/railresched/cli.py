"""Command-line entry point.

Exit status: 0 success, 1 violations found, 2 usage or input errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .constraints.checks import validate_schedule
from .exceptions import RailReschedError
from .io.formats import (
    find_scenario,
    parse_network_file,
    parse_petri_file,
    parse_scenario_file,
    parse_timetable_file,
    resolve,
)
from .io.report import DELIMITED, TABLE, emit_report
from .network import enumerate_routes, validate_timetable
from .petri import check_state_equation, fire_sequence, incidence_matrix, reachability_analysis
from .presets import PRESETS, build_preset

OK, VIOLATIONS, ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="railresched", description="Disaster-aware railway rescheduling.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="run a scenario and print the delay report")
    s.add_argument("scenario", help="scenario file or bundled scenario name")
    s.add_argument("--format", choices=(TABLE, DELIMITED), default=TABLE)
    s.add_argument("--log", help="write the message log to this file")
    s.add_argument("--out", help="write the report to this file instead of stdout")

    v = sub.add_parser("validate", help="check a timetable against a network")
    v.add_argument("network")
    v.add_argument("timetable")

    n = sub.add_parser("petri", help="inspect a railway Petri net")
    n.add_argument("net", help=f"one of {', '.join(PRESETS)} or a net file")
    n.add_argument("--analyze", action="store_true", help="reachability, bound and dead transitions")
    n.add_argument("--sequence", action="append", default=[],
                   help="comma-separated firing sequence to check against the state equation")
    n.add_argument("--max-nodes", type=int, default=10_000)

    r = sub.add_parser("routes", help="list shortest alternative routes")
    r.add_argument("network")
    r.add_argument("origin")
    r.add_argument("dest")
    r.add_argument("-k", type=int, default=3)
    return p


def _cmd_simulate(args, out) -> int:
    from .runner import run_scenario

    spec = parse_scenario_file(find_scenario(args.scenario))
    outcome = run_scenario(spec)
    text = emit_report(outcome.report, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    if args.log:
        Path(args.log).write_text("\n".join(outcome.distributed.log_lines()) + "\n", encoding="utf-8")
    return OK


def _cmd_validate(args, out) -> int:
    net = parse_network_file(resolve(args.network))
    tt = parse_timetable_file(resolve(args.timetable), net)
    found = validate_timetable(net, tt) + validate_schedule(net, tt)
    for v in found:
        where = f" at {v.location}" if v.location is not None else ""
        other = f" with {v.other}" if v.other else ""
        out.write(f"{v.rule}\ttrain {v.train}{other}{where}\t{v.detail}\n")
    out.write(f"{len(found)} violation(s)\n")
    return VIOLATIONS if found else OK


def _cmd_petri(args, out) -> int:
    if args.net.upper() in PRESETS:
        net, m0 = build_preset(args.net)
    else:
        net, m0 = parse_petri_file(args.net)
    a = incidence_matrix(net)
    out.write(f"net {net.name or args.net}: {len(net.places)} places, {len(net.transitions)} transitions\n")
    out.write("incidence matrix (rows = places, columns = transitions)\n")
    out.write("\t" + "\t".join(net.transition_ids) + "\n")
    for pid, row in zip(net.place_ids, a):
        out.write(pid + "\t" + "\t".join(str(int(x)) for x in row) + "\n")
    out.write(f"M0 = {list(m0.counts)}\n")
    status = OK
    for seq in args.sequence:
        sigma = [t.strip() for t in seq.split(",") if t.strip()]
        m, x = fire_sequence(net, m0, sigma)
        ok = check_state_equation(net, m0, sigma, m.counts)
        out.write(f"sigma {','.join(sigma)}: X={list(map(int, x))} M={list(m.counts)} "
                  f"state equation {'holds' if ok else 'FAILS'}\n")
        if not ok:
            status = VIOLATIONS
    if args.analyze:
        res = reachability_analysis(net, m0, args.max_nodes)
        dead = ", ".join(sorted(res.dead_transitions)) or "none"
        out.write(f"reachability nodes={len(res.tree.nodes)}\n")
        out.write(f"bound={res.bound}\n")
        out.write(f"dead={dead}\n")
    return status


def _cmd_routes(args, out) -> int:
    if args.k < 1:
        raise _UsageError("-k must be at least 1")
    net = parse_network_file(resolve(args.network))
    for i, r in enumerate(enumerate_routes(net, args.origin, args.dest, args.k), start=1):
        out.write(f"{i}\t{r.total_journey}\t{'-'.join(r.stations)}\t{','.join(map(str, r.tracks))}\n")
    return OK


COMMANDS = {"simulate": _cmd_simulate, "validate": _cmd_validate, "petri": _cmd_petri,
            "routes": _cmd_routes}


def run_cli(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except _UsageError as exc:
        err.write(f"error: {exc}\n")
        return ERROR
    except (RailReschedError, OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return ERROR


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
