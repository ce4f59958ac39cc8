"""Witness tuples (v, x, w, y, z) and the reduction they power.

A witness tuple for a language L' (either the source language or its
complement) satisfies, for all m >= 0 and n >= 1:

    (v x^m w y^(n-1) z not in L'  and  v x^m w y^n z in L')   iff   m = n

which lets a three-state transducer with two oracle queries decide the
0^n 1^n language against the oracle L.  `verify_witness` checks the grid
exhaustively up to bounds; `find_witness` extracts a verified tuple from a
machine by bounded structural search; `build_lsharp_reducer` realizes the
reduction; `reduce_lsharp` chains the three and certifies the result
against the 0^n 1^n predicate on every binary word up to a length bound.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product
from typing import Optional

from .analysis import (
    ExhaustedError,
    NoLevelsError,
    NoPumpError,
    NoPeriodFoundError,
    find_divergent_word,
    find_pump,
    periodicity,
    pop_summaries,
    pop_witnesses,
)
from .dpda import Configuration, Dpda, Word, complete_dpda, config_member
from .mealy import (
    LanguageOracle,
    OracleMealyMachine,
    TruthTable,
    constant_table,
    evaluate,
    oracle_from_dpda,
)

DIRECT = "direct"
COMPLEMENT = "complement"

# Stabilization of z against growing gamma powers must be observed at least
# this far from the sampling boundary before a candidate is trusted.
STABLE_TAIL = 10


@dataclass(frozen=True)
class WitnessTuple:
    v: Word
    x: Word
    w: Word
    y: Word
    z: Word
    polarity: str

    def __post_init__(self):
        if not self.x or not self.y:
            raise ValueError("x and y must be nonempty")
        if self.polarity not in (DIRECT, COMPLEMENT):
            raise ValueError(f"polarity must be {DIRECT!r} or {COMPLEMENT!r}")

    def to_json_dict(self) -> dict:
        return {
            "v": self.v,
            "x": self.x,
            "w": self.w,
            "y": self.y,
            "z": self.z,
            "polarity": self.polarity,
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "WitnessTuple":
        expected = {"v", "x", "w", "y", "z", "polarity"}
        if set(doc) != expected:
            raise ValueError(f"witness tuple document must have fields {sorted(expected)}")
        return WitnessTuple(**doc)


@dataclass(frozen=True)
class VerificationReport:
    m_bound: int
    n_bound: int
    passed: bool
    counterexamples: tuple[tuple[int, int, bool, bool], ...]


@dataclass(frozen=True)
class SearchBudgets:
    word_length: int = 24
    suffix_budget: int = 64
    pump_limit: int = 32
    z_length: int = 6
    max_l: int = 200


@dataclass(frozen=True)
class AgreementReport:
    max_len: int
    words_checked: int
    passed: bool


class SearchExhaustedError(Exception):
    """The extraction pipeline ran out of candidates; reports the deepest
    stage that was reached."""

    def __init__(self, stage: str, budgets: SearchBudgets):
        self.stage = stage
        self.budgets = budgets
        super().__init__(f"witness search exhausted at stage {stage!r} under {budgets}")


class AgreementFailureError(AssertionError):
    """The built reducer disagreed with the 0^n 1^n predicate; unreachable
    unless the implementation is broken, since the tuple was verified."""

    def __init__(self, word: Word):
        self.word = word
        super().__init__(f"reducer disagrees on {word!r}")


def verify_witness(
    oracle: LanguageOracle, t: WitnessTuple, m_bound: int, n_bound: int
) -> VerificationReport:
    """Exhaustively check the witness grid up to the given bounds.

    For every m in [0, m_bound] and n in [1, n_bound] the pair of membership
    answers for v x^m w y^(n-1) z and v x^m w y^n z (with the tuple's
    polarity applied) must spell out m = n.
    """
    flip = t.polarity == COMPLEMENT
    counterexamples: list[tuple[int, int, bool, bool]] = []
    prefix = t.v
    for m in range(m_bound + 1):
        body = prefix + t.w
        for n in range(1, n_bound + 1):
            left = oracle.membership(body + t.y * (n - 1) + t.z) ^ flip
            right = oracle.membership(body + t.y * n + t.z) ^ flip
            if ((not left) and right) != (m == n):
                counterexamples.append((m, n, left, right))
        prefix += t.x
    return VerificationReport(
        m_bound=m_bound,
        n_bound=n_bound,
        passed=not counterexamples,
        counterexamples=tuple(counterexamples),
    )


def repair_nonempty(t: WitnessTuple) -> WitnessTuple:
    """Make every component nonempty while preserving the grid property.

    An empty w is wrapped as x·w·y and an empty v or z is replaced by the
    pair (v·x, y·z); both rewrites shift the verification grid diagonally
    by one, which keeps the m = n characterization intact.
    """
    v, x, w, y, z = t.v, t.x, t.w, t.y, t.z
    if not w:
        w = x + w + y
    if not v or not z:
        v, z = v + x, y + z
    return replace(t, v=v, w=w, z=z)


def _loop_candidates(summary, pump):
    """States q with nonempty pX ->w q and q gamma ->y q witnesses."""
    pops_here = summary.entries.get((pump.p, pump.X), {})
    for q in sorted(pops_here):
        w_word = pops_here[q]
        if not w_word:
            continue
        y_word = pop_witnesses(summary, q, pump.gamma).get(q)
        if y_word:
            yield q, w_word, y_word


def _z_candidates(alphabet, z_length):
    symbols = sorted(alphabet)
    for n in range(1, z_length + 1):
        for tup in product(symbols, repeat=n):
            yield "".join(tup)


def find_witness(m: Dpda, budgets: SearchBudgets = SearchBudgets()) -> WitnessTuple:
    """Extract a verified witness tuple from a machine with a non-regular
    language (the caller asserts non-regularity).

    Pipeline: complete the machine; grow a divergent word; stair-factorize
    it and collect verified pumps; for each pump find a state q reachable
    by popping X and again by popping gamma (nonempty witnesses w and y);
    probe words z on which L(q gamma delta) and L(q delta) differ; shift
    the base by gamma^l0 so that the difference stabilizes; sample the
    periodicity of y-iterates from the shifted base and raise x, y to a
    multiple of the period above the threshold; fix the polarity by whether
    z lies in the shifted base language; repair empty components and accept
    the first tuple that passes verification at bounds (25, 25) against the
    machine's own language.
    """
    mc = m if m.completed else complete_dpda(m)
    oracle = oracle_from_dpda(mc)

    try:
        u = find_divergent_word(mc, budgets.word_length, budgets.suffix_budget)
    except ExhaustedError as exc:
        raise SearchExhaustedError("divergent_word", budgets) from exc
    try:
        pumps = find_pump(mc, u)[: budgets.pump_limit]
    except NoLevelsError as exc:
        raise SearchExhaustedError("stair", budgets) from exc
    except NoPumpError as exc:
        raise SearchExhaustedError("pump", budgets) from exc

    summary = pop_summaries(mc)
    deepest = "pop_witness"
    for pump in pumps:
        for q, w_word, y_word in _loop_candidates(summary, pump):
            deepest = _deeper(deepest, "z_probe")
            failures = 0
            for z in _z_candidates(mc.input_alphabet, budgets.z_length):
                with_gamma = config_member(mc, Configuration(q, pump.gamma + pump.delta), z)
                without = config_member(mc, Configuration(q, pump.delta), z)
                if with_gamma == without:
                    continue
                deepest = _deeper(deepest, "stabilize")
                seq = [
                    config_member(mc, Configuration(q, pump.gamma * l + pump.delta), z)
                    for l in range(budgets.max_l + 1)
                ]
                changes = [l for l in range(budgets.max_l) if seq[l] != seq[l + 1]]
                l0 = changes[-1]
                if l0 > budgets.max_l - STABLE_TAIL:
                    continue
                delta_shifted = pump.gamma * l0 + pump.delta
                v_shifted = pump.v + pump.x * l0
                deepest = _deeper(deepest, "periodicity")
                try:
                    report = periodicity(
                        mc, Configuration(q, delta_shifted), y_word, z, budgets.max_l
                    )
                except NoPeriodFoundError:
                    continue
                k0 = report.period * (report.k // report.period + 1)
                polarity = DIRECT if seq[l0] else COMPLEMENT
                candidate = WitnessTuple(
                    v=v_shifted,
                    x=pump.x * k0,
                    w=w_word,
                    y=y_word * k0,
                    z=z,
                    polarity=polarity,
                )
                candidate = repair_nonempty(candidate)
                deepest = _deeper(deepest, "verify")
                if verify_witness(oracle, candidate, 25, 25).passed:
                    return candidate
                failures += 1
                if failures >= 3:
                    break  # this (pump, q) pair looks structurally wrong; move on
    raise SearchExhaustedError(deepest, budgets)


_STAGES = (
    "divergent_word",
    "stair",
    "pump",
    "pop_witness",
    "z_probe",
    "stabilize",
    "periodicity",
    "verify",
)


def _deeper(a: str, b: str) -> str:
    return b if _STAGES.index(b) > _STAGES.index(a) else a


def build_lsharp_reducer(t: WitnessTuple, delta_alphabet) -> OracleMealyMachine:
    """The three-state transducer reducing 0^n 1^n to the witness's language.

    On input 0^m 1^n the oracle tape holds v x^m w y^(n-1) and the two
    queries append z and y·z; the final table accepts exactly when the two
    answers differ, oriented by the tuple's polarity.  Inputs outside
    0^+ 1^+ are rejected by undefined transitions.
    """
    alpha = frozenset(delta_alphabet)
    for word in (t.v, t.x, t.w, t.y, t.z):
        for ch in word:
            if ch not in alpha:
                raise ValueError(f"tuple symbol {ch!r} outside the oracle alphabet")
    accept_01 = t.polarity == DIRECT
    final_table = TruthTable(2, (False, accept_01, not accept_01, False))
    return OracleMealyMachine(
        states=frozenset({"q0", "q1", "q2"}),
        input_alphabet=frozenset({"0", "1"}),
        oracle_alphabet=alpha,
        delta={
            ("q0", "0"): "q1",
            ("q1", "0"): "q1",
            ("q1", "1"): "q2",
            ("q2", "1"): "q2",
        },
        outputs={
            ("q0", "0"): t.v + t.x,
            ("q1", "0"): t.x,
            ("q1", "1"): t.w,
            ("q2", "1"): t.y,
        },
        start_state="q0",
        per_state={
            "q0": ((), constant_table(False)),
            "q1": ((), constant_table(False)),
            "q2": ((t.z, t.y + t.z), final_table),
        },
    )


def is_lsharp_word(w: Word) -> bool:
    n = len(w) // 2
    return n >= 1 and w == "0" * n + "1" * n


def _check_reducer_agreement(
    reducer: OracleMealyMachine, oracle: LanguageOracle, max_len: int
) -> int:
    """Walk the binary prefix tree up to max_len comparing the reducer's
    verdict with the 0^n 1^n predicate; raises on the first mismatch.

    The walk advances the transducer incrementally, which agrees with
    `evaluate` by the transduction morphism."""
    membership = oracle.membership
    checked = 0
    # (word, state or None, oracle-tape content)
    stack: list[tuple[str, Optional[str], str]] = [("", reducer.start_state, "")]
    delta = reducer.delta
    outputs = reducer.outputs
    per_state = reducer.per_state
    while stack:
        word, state, out = stack.pop()
        if state is None:
            verdict = False
        else:
            suffixes, table = per_state[state]
            verdict = table.value([membership(out + s) for s in suffixes])
        if verdict != is_lsharp_word(word):
            raise AgreementFailureError(word)
        checked += 1
        if len(word) == max_len:
            continue
        for ch in ("0", "1"):
            if state is None:
                stack.append((word + ch, None, ""))
            else:
                nxt = delta.get((state, ch))
                if nxt is None:
                    stack.append((word + ch, None, ""))
                else:
                    stack.append((word + ch, nxt, out + outputs[(state, ch)]))
    return checked


def reduce_lsharp(
    m: Dpda, budgets: SearchBudgets = SearchBudgets(), check_len: int = 16
) -> tuple[WitnessTuple, OracleMealyMachine, AgreementReport]:
    """Extract a witness, build the reducer, and certify it.

    The reducer runs against the machine's own language as the oracle and
    must agree with the 0^n 1^n predicate on every binary word of length up
    to check_len.  Disagreement raises AgreementFailureError (unreachable
    for a verified tuple).
    """
    t = find_witness(m, budgets)
    reducer = build_lsharp_reducer(t, sorted(m.input_alphabet))
    oracle = oracle_from_dpda(m)
    checked = _check_reducer_agreement(reducer, oracle, check_len)
    return t, reducer, AgreementReport(max_len=check_len, words_checked=checked, passed=True)
