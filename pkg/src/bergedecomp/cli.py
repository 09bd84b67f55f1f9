"""Command-line entry point: ``bergedecomp <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .admissibility import (admissibility_conditions, packing_conditions,
                            path_packing_feasible)
from .assembly import BRANCHES
from .berge_lift import HyperDecomposition, RunTrace, decompose, round_robin_coloring
from .errors import DecompositionError, InfeasibleInput, InstanceTooLarge
from .graph_decomp import (SolverConfig, brute_force_packing_exists, cycle_decomposition,
                           cycle_host, cycle_packing, path_packing)
from .multigraph import complete_multigraph
from .verify import verify_berge_decomposition

EXIT_OK, EXIT_VERIFY, EXIT_INFEASIBLE, EXIT_CONSTRUCTION = 0, 1, 2, 3
CASES = ("case1", "case2", "case3")


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def parse_lengths(text: str | None) -> list[int]:
    """Comma list of positive integers; ``LxC`` stands for C copies of L."""
    out: list[int] = []
    for tok in (text or "").replace(" ", "").split(","):
        if not tok:
            continue
        if "x" in tok:
            length, count = tok.split("x", 1)
            out += [int(length)] * int(count)
        else:
            out.append(int(tok))
    if any(m < 1 for m in out):
        raise argparse.ArgumentTypeError(f"lengths must be positive: {text}")
    return out


@dataclass
class RunReport:
    input: dict
    case: str = ""
    branches: list[str] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)
    seed: int = 0
    output: str | None = None
    status: str = "ok"
    error: str | None = None

    def __post_init__(self) -> None:
        if self.case and self.case not in CASES:
            raise ValueError(f"unknown case label {self.case}")
        bad = [b for b in self.branches if b not in BRANCHES]
        if bad:
            raise ValueError(f"unknown branch labels {bad}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def _config(args) -> SolverConfig:
    return SolverConfig.from_env(seed=args.seed)


# ---------------------------------------------------------------------------
# subcommands


def cmd_decompose(args) -> int:
    cycles, paths = parse_lengths(args.cycles), parse_lengths(args.paths)
    report = RunReport(input={"n": args.n, "k": args.k, "mu": args.mu,
                              "cycles": cycles, "paths": paths},
                       seed=args.seed, output=args.out)
    trace = RunTrace()
    code = EXIT_OK
    cert = None
    try:
        d = decompose(args.n, args.k, args.mu, cycles, paths, _config(args), trace)
        cert = d.to_json()
        # independent re-check on the serialised form
        if verify_berge_decomposition(args.n, args.k, args.mu, cycles, paths,
                                      json.loads(dumps(cert))):
            code, report.status = EXIT_VERIFY, "verification-failed"
    except InfeasibleInput as exc:
        code, report.status, report.error = EXIT_INFEASIBLE, "infeasible", str(exc)
    except (DecompositionError, AssertionError) as exc:
        code, report.status, report.error = EXIT_CONSTRUCTION, "construction-failed", str(exc)
    report.case, report.branches, report.timings_ms = trace.case, trace.branches, trace.timings_ms

    if args.dump_stages:
        stage_dir = Path(args.dump_stages)
        stage_dir.mkdir(parents=True, exist_ok=True)
        for name in ("H_P", "H_C"):
            if name in trace.stages:
                (stage_dir / f"{name}.json").write_text(
                    dumps(trace.stages[name].to_json()) + "\n", encoding="utf-8")
        if "levels" in trace.stages:
            (stage_dir / "levels.json").write_text(dumps(trace.stages["levels"]) + "\n",
                                                   encoding="utf-8")

    if code == EXIT_OK:
        _emit(dumps(cert), args.out)
    stream = sys.stdout if args.out else sys.stderr
    stream.write(dumps(asdict(report)) + "\n")
    return code


def cmd_check(args) -> int:
    lengths = parse_lengths(args.lengths)
    if args.mode == "admissible":
        cond = admissibility_conditions(args.lam, args.n, lengths)
        ok = all(cond.values())
        print(dumps({"admissible": ok, "conditions": cond}))
    elif args.mode == "pack":
        cond = packing_conditions(args.lam, args.n, lengths)
        ok = all(v for key, v in cond.items() if key != "r")
        print(dumps({"feasible": ok, "r": cond["r"], "conditions": cond}))
    else:
        ok = path_packing_feasible(args.lam, args.n, lengths)
        print(dumps({"feasible": ok, "conditions": {
            "parts_in_range": all(1 <= m <= args.n - 1 for m in lengths),
            "fits": sum(lengths) <= args.lam * args.n * (args.n - 1) // 2}}))
    return EXIT_OK if ok else 1


def cmd_oracle(args) -> int:
    lengths = parse_lengths(args.lengths)
    host = cycle_host(args.lam, args.n) if args.kind == "cycle" else complete_multigraph(args.lam, args.n)
    try:
        ok = brute_force_packing_exists(host, lengths, args.kind)
    except InstanceTooLarge as exc:
        print(dumps({"error": str(exc)}))
        return EXIT_INFEASIBLE
    print(dumps(ok))
    return EXIT_OK if ok else 1


def cmd_verify(args) -> int:
    cert = json.loads(Path(args.input).read_text(encoding="utf-8"))
    n = args.n if args.n is not None else cert.get("n")
    k = args.k if args.k is not None else cert.get("k")
    mu = args.mu if args.mu is not None else cert.get("mu")
    problems = verify_berge_decomposition(n, k, mu, parse_lengths(args.cycles),
                                          parse_lengths(args.paths), cert)
    print(dumps({"valid": not problems, "violations": [p.to_json() for p in problems]}))
    return EXIT_OK if not problems else EXIT_VERIFY


def cmd_graph_decompose(args) -> int:
    lengths = parse_lengths(args.lengths)
    cfg = _config(args)
    try:
        if args.kind == "path":
            if args.mode == "decompose" and sum(lengths) != args.lam * args.n * (args.n - 1) // 2:
                raise InfeasibleInput("path lengths do not sum to the edge count")
            d = path_packing(args.lam, args.n, lengths, cfg)
        elif args.mode == "decompose":
            d = cycle_decomposition(args.lam, args.n, lengths, cfg)
        else:
            d = cycle_packing(args.lam, args.n, lengths, cfg)
    except InfeasibleInput as exc:
        sys.stderr.write(dumps({"error": str(exc)}) + "\n")
        return EXIT_INFEASIBLE
    except DecompositionError as exc:
        sys.stderr.write(dumps({"error": str(exc)}) + "\n")
        return EXIT_CONSTRUCTION
    _emit(dumps(d.to_json()), args.out)
    return EXIT_OK


def cmd_factorize(args) -> int:
    classes = round_robin_coloring(args.mu, args.n)
    _emit(dumps({"n": args.n, "mu": args.mu,
                 "classes": [[list(e) for e in c] for c in classes]}), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bergedecomp",
                                description="Berge cycle/path decompositions of complete uniform hypergraphs")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, lengths=False, lam=False, seed=False, out=False):
        sp.add_argument("--n", type=int, required=True)
        if lam:
            sp.add_argument("--lambda", dest="lam", type=int, required=True)
        if lengths:
            sp.add_argument("--lengths", default="")
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        if out:
            sp.add_argument("--out")

    sp = sub.add_parser("decompose", help="build and verify a hypergraph decomposition")
    common(sp, seed=True, out=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--mu", type=int, default=1)
    sp.add_argument("--cycles", default="")
    sp.add_argument("--paths", default="")
    sp.add_argument("--dump-stages", metavar="DIR")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("check", help="evaluate the arithmetic feasibility conditions")
    common(sp, lengths=True, lam=True)
    sp.add_argument("--mode", choices=("admissible", "pack", "path"), default="admissible")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("oracle", help="exhaustive packing search on small hosts")
    common(sp, lengths=True, lam=True)
    sp.add_argument("--kind", choices=("cycle", "path"), default="cycle")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("verify", help="check a certificate file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--mu", type=int)
    sp.add_argument("--cycles", default="")
    sp.add_argument("--paths", default="")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("graph-decompose", help="cycle or path decomposition of lambda*K_n")
    common(sp, lengths=True, lam=True, seed=True, out=True)
    sp.add_argument("--kind", choices=("cycle", "path"), default="cycle")
    sp.add_argument("--mode", choices=("decompose", "pack"), default="decompose")
    sp.set_defaults(func=cmd_graph_decompose)

    sp = sub.add_parser("factorize", help="dump the round-robin edge colouring of mu*K_n")
    common(sp, out=True)
    sp.add_argument("--mu", type=int, default=1)
    sp.set_defaults(func=cmd_factorize)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        sys.stderr.write(dumps({"error": str(exc)}) + "\n")
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
