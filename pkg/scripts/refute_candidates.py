#!/usr/bin/env python3
"""Demonstrate that naive transducers cannot reduce marked palindromes
(w c w^R) to the 0^n1^n language: for each candidate the collision search
produces a concrete misclassified word.

Usage: python scripts/refute_candidates.py [--k-max K]
"""

import argparse
import sys

from dcflab.mealy import (
    OracleMealyMachine,
    TruthTable,
    constant_table,
    refute_simplicity_LR,
)


def copier():
    symbols = "abc"
    return OracleMealyMachine(
        states=frozenset({"q"}),
        input_alphabet=frozenset(symbols),
        oracle_alphabet=frozenset(symbols),
        delta={("q", s): "q" for s in symbols},
        outputs={("q", s): s for s in symbols},
        start_state="q",
        per_state={"q": (("",), TruthTable(1, (False, True)))},
    )


def silent():
    symbols = "abc"
    return OracleMealyMachine(
        states=frozenset({"q"}),
        input_alphabet=frozenset(symbols),
        oracle_alphabet=frozenset("01"),
        delta={("q", s): "q" for s in symbols},
        outputs={("q", s): "" for s in symbols},
        start_state="q",
        per_state={"q": (("01",), TruthTable(1, (False, True)))},
    )


def length_counter():
    return OracleMealyMachine(
        states=frozenset({"s0", "s1"}),
        input_alphabet=frozenset("abc"),
        oracle_alphabet=frozenset("01"),
        delta={
            ("s0", "a"): "s0",
            ("s0", "b"): "s0",
            ("s0", "c"): "s1",
            ("s1", "a"): "s1",
            ("s1", "b"): "s1",
        },
        outputs={
            ("s0", "a"): "0",
            ("s0", "b"): "0",
            ("s0", "c"): "",
            ("s1", "a"): "1",
            ("s1", "b"): "1",
        },
        start_state="s0",
        per_state={
            "s0": ((), constant_table(False)),
            "s1": (("",), TruthTable(1, (False, True))),
        },
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k-max", type=int, default=6)
    args = parser.parse_args()

    failures = 0
    for build in (copier, silent, length_counter):
        word = refute_simplicity_LR(build(), args.k_max)
        if word is None:
            print(f"{build.__name__:16s} not refuted within k <= {args.k_max}")
            failures += 1
        else:
            print(f"{build.__name__:16s} misclassifies {word!r}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
