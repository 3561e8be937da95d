"""Command-line driver.

Exit codes: 0 success, 1 input error, 2 size guard exceeded, 3 the selector
path did not produce an answer set, 4 a splitting-theorem check failed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .asp import GuardError
from .incremental import (
    ADVANCING_SELECTORS,
    DEFAULT_MAX_BRANCHES,
    STATIONARY_SELECTORS,
    advancing_selector,
    enumerate_all,
    run,
    stationary_selector,
)
from .model import interpretation_key
from .oracle import DEFAULT_MAX_FACTS, DEFAULT_MAX_POSITIONS, brute_force_answer_sets, reachable_universe
from .registry import ContractError, RegistryError
from .semantics import IterationLimitError
from .splitting import (
    SplittingError,
    prefix_sequence,
    theorem1_decompose,
    theorem1_solutions,
    theorem2_decompose,
    theorem2_solutions,
)
from .syntax import SyntaxErrors, parse_init, parse_program, serialize_interpretation, serialize_trace

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_NOT_ANSWER_SET, EXIT_THEOREM = 0, 1, 2, 3, 4

MODES = ("solve", "enumerate", "check-splitting", "verify", "trace")


@dataclass
class RunConfig:
    mode: str
    program: str
    init: str
    horizon: int
    f: str = "select_all"
    d: str = "first"
    seed: Optional[int] = None
    keep_prob: Fraction = Fraction(1, 2)
    trace: bool = False
    out: Optional[str] = None
    max_facts: int = DEFAULT_MAX_FACTS
    max_branches: int = DEFAULT_MAX_BRANCHES
    max_positions: int = DEFAULT_MAX_POSITIONS
    corrupt_bottom: bool = False

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")
        if "seeded_random" in (self.f, self.d) and self.seed is None:
            raise ValueError("--seed is required with seeded_random selectors")
        if not 0 <= self.keep_prob <= 1:
            raise ValueError("keep probability must lie in [0, 1]")


def _read(path: str) -> str:
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def _load(cfg: RunConfig):
    P = parse_program(_read(cfg.program), cfg.program)
    J = parse_init(_read(cfg.init), cfg.init)
    J.check_discrete()
    return P, J


def _answer_set_block(i: int, M) -> list[str]:
    body = serialize_interpretation(M).splitlines()
    return [f"answer set {i}"] + (body or ["(empty)"])


def cmd_solve(cfg: RunConfig, out: list[str]) -> int:
    P, J = _load(cfg)
    F = advancing_selector(cfg.f, cfg.seed, cfg.keep_prob)
    D = stationary_selector(cfg.d, cfg.seed)
    result = run(P, J, F, D, cfg.horizon)
    out.extend(serialize_interpretation(result.interpretation).splitlines())
    if cfg.trace:
        out.extend(serialize_trace(result.layers).splitlines())
    else:
        for tr in result.layers:
            note = ", no answer set at some position" if tr.failed else ""
            out.append(f"layer {tr.k}: {len(tr.positions)} position(s), {len(tr.facts)} fact(s){note}")
    out.append(f"valid: {'true' if result.valid else 'false'}")
    return EXIT_OK if result.valid else EXIT_NOT_ANSWER_SET


def cmd_enumerate(cfg: RunConfig, out: list[str]) -> int:
    P, J = _load(cfg)
    found = enumerate_all(P, J, cfg.horizon, cfg.max_branches)
    for i, M in enumerate(found, 1):
        out.extend(_answer_set_block(i, M))
    out.append(f"answer sets: {len(found)}")
    return EXIT_OK


def _same(a, b) -> bool:
    return set(a) == set(b)


def cmd_check_splitting(cfg: RunConfig, out: list[str]) -> int:
    P, J = _load(cfg)
    universe = reachable_universe(P, J, cfg.horizon, cfg.max_positions)
    oracle = brute_force_answer_sets(P, J, universe=universe, max_facts=cfg.max_facts)
    seq = prefix_sequence(universe, cfg.horizon)
    ok = True

    def report(label, passed):
        nonlocal ok
        ok &= passed
        out.append(f"{label}: {'PASS' if passed else 'FAIL'}")

    for m, U in enumerate(seq):
        fwd = all(
            theorem1_decompose(P, U, J, universe, M, corrupt_bottom=cfg.corrupt_bottom).verdicts == (True, True)
            for M in oracle
        )
        report(f"theorem1 U_{m} decompose", fwd)
        assembled = theorem1_solutions(P, U, J, universe, corrupt_bottom=cfg.corrupt_bottom, max_facts=cfg.max_facts)
        report(f"theorem1 U_{m} assemble", _same(assembled, oracle))
    fwd = all(all(v.ok for v in theorem2_decompose(P, seq, J, universe, M)) for M in oracle)
    report("theorem2 decompose", fwd)
    report("theorem2 assemble", _same(theorem2_solutions(P, seq, J, universe, max_facts=cfg.max_facts), oracle))
    out.append(f"oracle answer sets: {len(oracle)}")
    return EXIT_OK if ok else EXIT_THEOREM


def cmd_verify(cfg: RunConfig, out: list[str]) -> int:
    P, J = _load(cfg)
    universe = reachable_universe(P, J, cfg.horizon, cfg.max_positions)
    oracle = brute_force_answer_sets(P, J, universe=universe, max_facts=cfg.max_facts)
    incremental = enumerate_all(P, J, cfg.horizon, cfg.max_branches)
    diff = sorted(set(oracle) ^ set(incremental), key=interpretation_key)
    out.append(f"incremental: {len(incremental)}, oracle: {len(oracle)}, diff: {len(diff)}")
    for M in diff:
        side = "oracle only" if M in oracle else "incremental only"
        out.append(f"{side}:")
        out.extend("  " + line for line in (serialize_interpretation(M).splitlines() or ["(empty)"]))
    return EXIT_OK if not diff else EXIT_THEOREM


def cmd_trace(cfg: RunConfig, out: list[str]) -> int:
    cfg.trace = True
    return cmd_solve(cfg, out)


COMMANDS = {
    "solve": cmd_solve,
    "enumerate": cmd_enumerate,
    "check-splitting": cmd_check_splitting,
    "verify": cmd_verify,
    "trace": cmd_trace,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hybridasp", description="Hybrid ASP solver for discrete-time programs")
    ap.add_argument("mode", choices=MODES)
    ap.add_argument("--program", required=True, help=".hasp program file")
    ap.add_argument("--init", required=True, help=".init initial condition file")
    ap.add_argument("--horizon", type=int, required=True)
    ap.add_argument("--f", default="select_all", choices=ADVANCING_SELECTORS, help="advancing selector")
    ap.add_argument("--d", default="first", choices=STATIONARY_SELECTORS, help="stationary selector")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--p", "--keep-prob", dest="keep_prob", type=Fraction, default=Fraction(1, 2))
    ap.add_argument("--trace", action="store_true")
    ap.add_argument("--out", help="write results here instead of standard output")
    ap.add_argument("--max-facts", type=int, default=DEFAULT_MAX_FACTS)
    ap.add_argument("--max-branches", type=int, default=DEFAULT_MAX_BRANCHES)
    ap.add_argument("--max-positions", type=int, default=DEFAULT_MAX_POSITIONS)
    ap.add_argument("--corrupt-bottom", action="store_true", help=argparse.SUPPRESS)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        cfg = RunConfig(**{k: v for k, v in vars(ns).items()})
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    out: list[str] = []
    try:
        code = COMMANDS[cfg.mode](cfg, out)
    except GuardError as e:
        print(f"guard: {e}", file=sys.stderr)
        return EXIT_GUARD
    except SyntaxErrors as e:
        for err in e.errors:
            print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError, RegistryError, ContractError, SplittingError, IterationLimitError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    text = "".join(line + "\n" for line in out)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
