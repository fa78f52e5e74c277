"""Command-line front end.

Every subcommand takes exactly one graph source, ``--family <spec>`` or
``--graph <path>``.  Family specs are ``cycle:5``, ``complete:4``,
``path:3``, ``petersen`` or ``cone:<base>`` where ``<base>`` is a base-graph
JSON file or another family spec (the apex becomes the sink).

Exit codes: 0 on success, 2 on domain errors, 1 on I/O and parse errors.
Errors are written to stderr as a one-line JSON object.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import dynamics, group, models
from .duality import certify_identity_relaxation, verify_cone_identity
from .errors import BadSpec, CrossCheckMismatch, SandpileError
from .graph import base_family, cone, family, load_base, load_graph
from .linalg import smith_normal_form

SUBCOMMANDS = ("stabilize", "identity", "recurrent", "order", "group", "generators",
               "superstable", "energy", "verify-dual", "cone-identity", "table1")
NEEDS_CONFIG = ("stabilize", "recurrent", "order", "superstable", "energy")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise BadSpec(message)


def _split_spec(spec):
    name, sep, size = spec.partition(":")
    if not name or (sep and not size):
        raise BadSpec(f"malformed family spec {spec!r}")
    if not sep:
        return name, None
    try:
        return name, int(size)
    except ValueError:
        raise BadSpec(f"family size must be an integer in {spec!r}") from None


def parse_base(spec):
    """Undirected base graph from ``<name>:<n>``, ``petersen`` or a JSON path."""
    if spec.startswith("cone:"):
        spec = spec[len("cone:"):]
    if spec.endswith(".json") or os.path.sep in spec:
        return load_base(spec)
    name, n = _split_spec(spec)
    if name not in ("cycle", "complete", "path", "petersen"):
        raise BadSpec(f"unknown graph family {name!r}")
    return base_family(name, n)


def parse_family(spec):
    """Sinked graph from a family spec; see the module docstring."""
    if spec.startswith("cone:"):
        return cone(parse_base(spec))
    name, n = _split_spec(spec)
    if name not in ("cycle", "complete", "path", "petersen"):
        raise BadSpec(f"unknown graph family {name!r}")
    return family(name, n)


def parse_config(text):
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise BadSpec(f"--config must be comma-separated integers, got {text!r}") from None


def build_parser():
    p = _Parser(prog="sandpile-ilp", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", help="family spec, e.g. cycle:5 or cone:petersen")
    src.add_argument("--graph", help="graph JSON file")
    p.add_argument("--config", help="comma-separated integers in non-sink vertex order")
    p.add_argument("--sense", choices=("min", "max"),
                   help="stabilize only: also solve the stabilization program in this sense")
    p.add_argument("--policy", choices=dynamics.POLICIES, default=dynamics.DEFAULT_POLICY,
                   help="stabilize only: toppling order")
    p.add_argument("--convention", choices=("column", "row"), default="column",
                   help="energy only: treat c as a column (default) or row vector")
    p.add_argument("--trace", action="store_true", help="stabilize only: list topplings")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--dump-lp", metavar="PATH",
                   help="write the integer program solved (if any) to PATH")
    return p


def _t(v):
    return [int(x) for x in v]


def _dump(args, lp):
    if args.dump_lp:
        with open(args.dump_lp, "w", encoding="utf-8") as fh:
            fh.write(lp.dump())


def _table1_rows(g):
    rows = []
    for i in range(-1, g.n):
        c = tuple(int(i == j) for j in range(g.n))
        x, rec, _ = models.solve_recurrent(g, c)
        d, _, _ = models.solve_order(g, c)
        if d != group.order(g, c):
            raise CrossCheckMismatch(f"order of {c}: ILP {d}, lcm {group.order(g, c)}")
        if rec != dynamics.recurrent_rep_dynamics(g, c):
            raise CrossCheckMismatch(f"recurrent rep of {c} disagrees with dynamics")
        rows.append({"c": _t(c), "x": _t(x), "recurrent": _t(rec), "order": d})
    return rows


def compute(args, g):
    """Run a subcommand and return its result as an ordered dict."""
    cmd = args.subcommand
    out = {"command": cmd, "vertices": list(g.nonsink), "sink": g.sink}
    c = None
    if cmd in NEEDS_CONFIG:
        if args.config is None:
            raise BadSpec(f"{cmd} needs --config")
        c = parse_config(args.config)
        out["config"] = list(c)

    if cmd == "stabilize":
        res = dynamics.stabilize(g, c, policy=args.policy, trace=args.trace)
        out.update(stable=_t(res.stable), odometer=_t(res.odometer),
                   avalanche_size=res.avalanche_size, policy=args.policy)
        if args.trace:
            out["trace"] = res.trace
        if args.sense:
            lp = models.build_stabilization_model(g, c, args.sense)
            _dump(args, lp)
            x, result, _ = models.solve_stabilization(g, c, args.sense)
            out["ilp"] = {"sense": args.sense, "x": _t(x), "result": _t(result)}
    elif cmd == "identity":
        _dump(args, models.build_identity_model(g))
        x, _, _ = models.solve_identity(g)
        out.update(identity=_t(group.identity(g)), x=_t(x))
    elif cmd == "recurrent":
        _dump(args, models.build_recurrent_model(g, c))
        x, _, _ = models.solve_recurrent(g, c)
        out.update(x=_t(x), recurrent=_t(group.recurrent_representative(g, c)))
    elif cmd == "order":
        _dump(args, models.build_order_model(g, c))
        d = group.order_ilp(g, c)
        if d != group.order(g, c):
            raise CrossCheckMismatch(f"order of {c}: ILP {d}, lcm {group.order(g, c)}")
        out["order"] = d
    elif cmd == "group":
        st = group.group_structure(g)
        snf = smith_normal_form(g.reduced_laplacian())
        out.update(invariant_factors=list(st.invariant_factors),
                   group_order=st.group_order, snf_diagonal=list(snf.diagonal))
    elif cmd == "generators":
        out["generators"] = [{"vertex": v, "recurrent": _t(e.recurrent), "order": e.order}
                             for v, e in zip(g.nonsink, group.generators(g))]
    elif cmd == "superstable":
        out["superstable"] = _t(group.superstable_representative(g, c))
    elif cmd == "energy":
        out.update(energy=str(group.energy(g, c, args.convention)), convention=args.convention,
                   convention_dependent=not g.undirected)
    elif cmd == "verify-dual":
        cert = certify_identity_relaxation(g)
        out.update(cert.to_dict())
    elif cmd == "table1":
        out["rows"] = _table1_rows(g)
    return out


def _cone_identity(args):
    base = parse_base(args.family) if args.family else load_base(args.graph)
    rep = verify_cone_identity(base)
    if not rep.agree:
        raise CrossCheckMismatch(f"cone identity routes disagree: {rep.to_dict()}")
    out = {"command": "cone-identity", "sink": rep.graph.sink}
    out.update(rep.to_dict())
    return out


def _fmt_tuple(v):
    return "(" + ",".join(str(x) for x in v) + ")"


def render_text(out):
    if out["command"] == "table1":
        lines = ["c\tx*\trecurrent\torder"]
        for r in out["rows"]:
            lines.append("\t".join([_fmt_tuple(r["c"]), _fmt_tuple(r["x"]),
                                    _fmt_tuple(r["recurrent"]), str(r["order"])]))
        return "\n".join(lines) + "\n"
    lines = []
    for k, v in out.items():
        if k == "trace":
            lines.extend(v)
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for item in v:
                lines.append(f"{k}: " + " ".join(f"{a}={_text_value(b)}" for a, b in item.items()))
        elif isinstance(v, dict):
            lines.append(f"{k}: " + " ".join(f"{a}={_text_value(b)}" for a, b in v.items()))
        else:
            lines.append(f"{k}: {_text_value(v)}")
    return "\n".join(lines) + "\n"


def _text_value(v):
    if isinstance(v, (list, tuple)):
        return _fmt_tuple(v)
    if isinstance(v, dict):
        return json.dumps(v)
    return str(v)


def run(argv=None, stdout=None, stderr=None):
    """Parse ``argv``, run the command and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.subcommand == "cone-identity":
            out = _cone_identity(args)
        else:
            g = parse_family(args.family) if args.family else load_graph(args.graph)
            out = compute(args, g)
    except SandpileError as exc:
        _error(stderr, exc, 2)
        return 2
    except (BadSpec, OSError, ValueError, KeyError, TypeError) as exc:
        _error(stderr, exc, 1)
        return 1
    if args.format == "json":
        stdout.write(json.dumps(out, indent=2, default=_json_default) + "\n")
    else:
        stdout.write(render_text(out))
    return 0


def _json_default(v):
    if isinstance(v, Fraction):
        return str(v)
    raise TypeError(f"not serializable: {type(v).__name__}")


def _error(stream, exc, code):
    stream.write(json.dumps({"error": type(exc).__name__, "message": str(exc),
                             "exit_code": code}) + "\n")


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
