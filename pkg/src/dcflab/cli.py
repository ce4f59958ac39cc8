"""Command-line surface.

Exit codes: 0 on success, 1 for a negative-but-valid outcome (verification
failed, refutation not found), 2 for usage or input errors.  `--json`
switches the report payload to JSON on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import corpus
from .dpda import InvalidMachineError, complete_dpda, load_dpda, member, validate_dpda
from .mealy import (
    LanguageOracle,
    compose,
    evaluate,
    load_mealy,
    mealy_to_document,
    oracle_from_dpda,
    refute_simplicity_LR,
)
from .witness import (
    SearchBudgets,
    SearchExhaustedError,
    WitnessTuple,
    build_lsharp_reducer,
    find_witness,
    reduce_lsharp,
    verify_witness,
)


@dataclass(frozen=True)
class CommandOutcome:
    exit_code: int
    report: str
    payload: Optional[dict] = None


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); raise instead
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="dcflab", description=__doc__)
    top = parser.add_subparsers(dest="command", required=True)

    pda = top.add_parser("pda", help="DPDA operations").add_subparsers(
        dest="subcommand", required=True
    )
    p = pda.add_parser("validate", help="validate a DPDA document")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p = pda.add_parser("member", help="membership of WORD after completion")
    p.add_argument("file")
    p.add_argument("word")
    p.add_argument("--json", action="store_true")

    mealy = top.add_parser("mealy", help="oracle Mealy machine operations").add_subparsers(
        dest="subcommand", required=True
    )
    p = mealy.add_parser("eval", help="evaluate a machine on WORD against an oracle")
    p.add_argument("machine_file")
    p.add_argument("word")
    p.add_argument("--oracle", required=True, help="corpus name or DPDA JSON file")
    p.add_argument("--json", action="store_true")
    p = mealy.add_parser("compose", help="compose two machines (front feeds back)")
    p.add_argument("a_file")
    p.add_argument("b_file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", action="store_true")

    witness = top.add_parser("witness", help="witness tuples").add_subparsers(
        dest="subcommand", required=True
    )
    p = witness.add_parser("verify", help="check the grid property of a tuple")
    p.add_argument("tuple_file")
    p.add_argument("--oracle", required=True, help="corpus name")
    p.add_argument("--m-bound", type=int, default=25)
    p.add_argument("--n-bound", type=int, default=25)
    p.add_argument("--json", action="store_true")
    p = witness.add_parser("find", help="extract a tuple from a corpus language")
    p.add_argument("--lang", required=True)
    p.add_argument("--word-length", type=int, default=24)
    p.add_argument("--suffix-budget", type=int, default=64)
    p.add_argument("--pump-limit", type=int, default=32)
    p.add_argument("--z-length", type=int, default=6)
    p.add_argument("--max-l", type=int, default=200)
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")

    reduce_ = top.add_parser("reduce", help="build and certify reducers").add_subparsers(
        dest="subcommand", required=True
    )
    p = reduce_.add_parser("lsharp", help="reduce 0^n1^n to a corpus language")
    p.add_argument("--lang", required=True)
    p.add_argument("--check-len", type=int, default=16)
    p.add_argument("--json", action="store_true")

    corpus_ = top.add_parser("corpus", help="built-in languages").add_subparsers(
        dest="subcommand", required=True
    )
    p = corpus_.add_parser("list", help="list corpus entries")
    p.add_argument("--json", action="store_true")

    refute = top.add_parser("refute", help="refutation searches").add_subparsers(
        dest="subcommand", required=True
    )
    p = refute.add_parser("lr", help="misclassified marked palindrome for a machine")
    p.add_argument("machine_file")
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--json", action="store_true")

    return parser


def _oracle_from_ref(ref: str) -> LanguageOracle:
    if ref in corpus.names():
        return corpus.oracle_of(corpus.get_entry(ref))
    return oracle_from_dpda(load_dpda(ref))


def _budgets(args) -> SearchBudgets:
    return SearchBudgets(
        word_length=args.word_length,
        suffix_budget=args.suffix_budget,
        pump_limit=args.pump_limit,
        z_length=args.z_length,
        max_l=args.max_l,
    )


def _load_tuple(path: str) -> WitnessTuple:
    with open(path, "r", encoding="utf-8") as fh:
        return WitnessTuple.from_json_dict(json.load(fh))


def _dispatch(args) -> CommandOutcome:
    cmd = (args.command, args.subcommand)

    if cmd == ("pda", "validate"):
        machine = load_dpda(args.file)
        payload = {"valid": True, "states": len(machine.states), "rules": len(machine.rules)}
        return CommandOutcome(0, f"valid: {len(machine.states)} states, {len(machine.rules)} rules", payload)

    if cmd == ("pda", "member"):
        machine = complete_dpda(load_dpda(args.file))
        verdict = member(machine, args.word)
        payload = {"word": args.word, "member": verdict}
        return CommandOutcome(0 if verdict else 1, "accepted" if verdict else "rejected", payload)

    if cmd == ("mealy", "eval"):
        machine = load_mealy(args.machine_file)
        oracle = _oracle_from_ref(args.oracle)
        verdict = evaluate(machine, oracle, args.word)
        payload = {"word": args.word, "accepted": verdict}
        return CommandOutcome(0 if verdict else 1, "accepted" if verdict else "rejected", payload)

    if cmd == ("mealy", "compose"):
        front = load_mealy(args.a_file)
        back = load_mealy(args.b_file)
        composed = compose(front, back)
        doc = mealy_to_document(composed)
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, ensure_ascii=False)
        payload = {"states": len(composed.states), "output": args.output}
        return CommandOutcome(0, f"wrote {args.output} ({len(composed.states)} states)", payload)

    if cmd == ("witness", "verify"):
        oracle = _oracle_from_ref(args.oracle)
        t = _load_tuple(args.tuple_file)
        report = verify_witness(oracle, t, args.m_bound, args.n_bound)
        lines = ["passed" if report.passed else "failed"]
        for m, n, left, right in report.counterexamples[:20]:
            lines.append(f"  m={m} n={n} left={left} right={right}")
        payload = {
            "passed": report.passed,
            "m_bound": report.m_bound,
            "n_bound": report.n_bound,
            "counterexamples": [
                {"m": m, "n": n, "left": left, "right": right}
                for m, n, left, right in report.counterexamples
            ],
        }
        return CommandOutcome(0 if report.passed else 1, "\n".join(lines), payload)

    if cmd == ("witness", "find"):
        entry = corpus.get_entry(args.lang)
        t = find_witness(entry.machine, _budgets(args))
        doc = t.to_json_dict()
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, indent=2, ensure_ascii=False)
        text = " ".join(f"{k}={v!r}" for k, v in doc.items())
        return CommandOutcome(0, text, doc)

    if cmd == ("reduce", "lsharp"):
        entry = corpus.get_entry(args.lang)
        t, reducer, report = reduce_lsharp(entry.machine, check_len=args.check_len)
        payload = {
            "tuple": t.to_json_dict(),
            "reducer": mealy_to_document(reducer),
            "agreement": {
                "max_len": report.max_len,
                "words_checked": report.words_checked,
                "passed": report.passed,
            },
        }
        text = (
            f"agreement on all {report.words_checked} binary words of length <= {report.max_len}"
        )
        return CommandOutcome(0, text, payload)

    if cmd == ("corpus", "list"):
        rows = []
        for name in corpus.names():
            entry = corpus.get_entry(name)
            rows.append(
                {
                    "name": name,
                    "alphabet": sorted(entry.machine.input_alphabet),
                    "notes": entry.notes,
                }
            )
        text = "\n".join(f"{r['name']:16s} {{{','.join(r['alphabet'])}}}  {r['notes']}" for r in rows)
        return CommandOutcome(0, text, {"entries": rows})

    if cmd == ("refute", "lr"):
        machine = load_mealy(args.machine_file)
        word = refute_simplicity_LR(machine, args.k_max)
        if word is None:
            return CommandOutcome(1, f"not refuted within k <= {args.k_max}", {"refuted": False})
        return CommandOutcome(0, f"misclassified: {word}", {"refuted": True, "word": word})

    raise UsageError(f"unknown command {cmd}")


def run_cli(argv: Sequence[str]) -> CommandOutcome:
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
        return _dispatch(args)
    except UsageError as exc:
        return CommandOutcome(2, str(exc))
    except InvalidMachineError as exc:
        lines = ["invalid machine:"] + [f"  {v}" for v in exc.violations]
        return CommandOutcome(2, "\n".join(lines), {"violations": [str(v) for v in exc.violations]})
    except SearchExhaustedError as exc:
        return CommandOutcome(1, str(exc), {"stage": exc.stage})
    except corpus.UnknownNameError as exc:
        return CommandOutcome(2, f"unknown corpus entry: {exc.args[0]}")
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        return CommandOutcome(2, f"error: {exc}")


def main() -> None:
    argv = sys.argv[1:]
    outcome = run_cli(argv)
    if "--json" in argv and outcome.payload is not None:
        print(json.dumps(outcome.payload, ensure_ascii=False))
    else:
        print(outcome.report)
    sys.exit(outcome.exit_code)
