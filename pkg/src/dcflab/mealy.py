"""Oracle Mealy machines with truth-table acceptance.

A machine transduces its input to a query prefix on a write-only oracle
tape; the state reached at the end contributes a tuple of query suffixes
and a truth table that aggregates the oracle's answers into the verdict.
Rejection by an undefined transition beats every table.  Machines are
immutable after validation and evaluation is pure given a deterministic
oracle.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Mapping, Optional, Sequence

from .dpda import Dpda, InvalidMachineError, Violation, complete_dpda, member

_MEALY_FIELDS = frozenset(
    {
        "states",
        "input_alphabet",
        "oracle_alphabet",
        "delta",
        "lambda",
        "start_state",
        "queries",
    }
)


@dataclass(frozen=True)
class TruthTable:
    """Boolean aggregation of oracle answers.

    Row index reads the answer tuple as a binary number with the first
    query as the most significant bit.
    """

    arity: int
    rows: tuple[bool, ...]

    def __post_init__(self):
        if len(self.rows) != 2**self.arity:
            raise ValueError(f"table of arity {self.arity} needs {2 ** self.arity} rows")

    def value(self, answers: Sequence[bool]) -> bool:
        if len(answers) != self.arity:
            raise ValueError("answer tuple does not match table arity")
        idx = 0
        for b in answers:
            idx = (idx << 1) | (1 if b else 0)
        return self.rows[idx]


def constant_table(value: bool) -> TruthTable:
    return TruthTable(0, (value,))


IDENTITY_TABLE = TruthTable(1, (False, True))

QuerySpec = tuple[tuple[str, ...], TruthTable]


@dataclass(frozen=True)
class OracleMealyMachine:
    states: frozenset[str]
    input_alphabet: frozenset[str]
    oracle_alphabet: frozenset[str]
    delta: Mapping[tuple[str, str], str]
    outputs: Mapping[tuple[str, str], str]
    start_state: str
    per_state: Mapping[str, QuerySpec]


@dataclass(frozen=True)
class LanguageOracle:
    """A total, deterministic membership predicate over a fixed alphabet."""

    alphabet: frozenset[str]
    membership: Callable[[str], bool]
    name: str = ""


@dataclass(frozen=True)
class Dfa:
    """A total deterministic finite automaton."""

    states: frozenset[str]
    alphabet: frozenset[str]
    transitions: Mapping[tuple[str, str], str]
    start: str
    accepting: frozenset[str]

    def __post_init__(self):
        problems = []
        for q in sorted(self.states):
            for a in sorted(self.alphabet):
                target = self.transitions.get((q, a))
                if target is None:
                    problems.append(Violation("MissingTransition", f"({q}, {a})"))
                elif target not in self.states:
                    problems.append(Violation("UndeclaredSymbol", f"target of ({q}, {a})"))
        if self.start not in self.states:
            problems.append(Violation("UndeclaredSymbol", "start"))
        if not self.accepting <= self.states:
            problems.append(Violation("UndeclaredSymbol", "accepting"))
        if problems:
            raise InvalidMachineError(problems)

    def accepts(self, word: str) -> bool:
        q = self.start
        for a in word:
            q = self.transitions[(q, a)]
        return q in self.accepting


def validate_mealy(candidate: Mapping) -> OracleMealyMachine:
    """Check a raw transducer description and return the validated machine.

    Document shape: `states`, `input_alphabet`, `oracle_alphabet`, `delta`
    (list of `{from, on, to}`; a missing pair means the transition is
    undefined), `lambda` (list of `{from, on, out}`, defined exactly where
    delta is), `start_state`, `queries` (one `{state, suffixes, table}`
    entry per state, table rows as 0/1 with the first suffix as the most
    significant bit).
    """
    violations: list[Violation] = []
    unknown = set(candidate) - _MEALY_FIELDS
    for f in sorted(unknown):
        violations.append(Violation("UnknownField", f))
    missing = _MEALY_FIELDS - set(candidate)
    for f in sorted(missing):
        violations.append(Violation("MissingField", f))
    if missing:
        raise InvalidMachineError(violations)

    states = frozenset(candidate["states"])
    input_alphabet = frozenset(candidate["input_alphabet"])
    oracle_alphabet = frozenset(candidate["oracle_alphabet"])
    for name, alpha in (("input_alphabet", input_alphabet), ("oracle_alphabet", oracle_alphabet)):
        if not alpha:
            violations.append(Violation("BadType", f"{name} must be nonempty"))
        for a in sorted(alpha):
            if len(a) != 1:
                violations.append(
                    Violation("BadSymbol", f"{name} symbol {a!r} is not a single character")
                )
    if candidate["start_state"] not in states:
        violations.append(Violation("UndeclaredSymbol", "start_state"))

    delta: dict[tuple[str, str], str] = {}
    for i, raw in enumerate(candidate["delta"]):
        where = f"delta[{i}]"
        if set(raw) != {"from", "on", "to"}:
            violations.append(Violation("BadType", f"{where} must have from/on/to"))
            continue
        key = (raw["from"], raw["on"])
        if key in delta:
            violations.append(Violation("DuplicateTransition", f"({key[0]}, {key[1]})"))
        if raw["from"] not in states or raw["to"] not in states:
            violations.append(Violation("UndeclaredSymbol", where))
        if raw["on"] not in input_alphabet:
            violations.append(Violation("UndeclaredSymbol", f"{where}.on"))
        delta[key] = raw["to"]

    outputs: dict[tuple[str, str], str] = {}
    for i, raw in enumerate(candidate["lambda"]):
        where = f"lambda[{i}]"
        if set(raw) != {"from", "on", "out"}:
            violations.append(Violation("BadType", f"{where} must have from/on/out"))
            continue
        key = (raw["from"], raw["on"])
        if key not in delta:
            violations.append(Violation("LambdaDomainMismatch", f"({key[0]}, {key[1]})"))
        for ch in raw["out"]:
            if ch not in oracle_alphabet:
                violations.append(Violation("UndeclaredSymbol", f"{where}.out {ch!r}"))
        outputs[key] = raw["out"]
    for key in sorted(delta):
        if key not in outputs:
            violations.append(Violation("LambdaDomainMismatch", f"({key[0]}, {key[1]})"))

    per_state: dict[str, QuerySpec] = {}
    for i, raw in enumerate(candidate["queries"]):
        where = f"queries[{i}]"
        if set(raw) != {"state", "suffixes", "table"}:
            violations.append(Violation("BadType", f"{where} must have state/suffixes/table"))
            continue
        q = raw["state"]
        if q not in states:
            violations.append(Violation("UndeclaredSymbol", f"{where}.state"))
            continue
        if q in per_state:
            violations.append(Violation("DuplicateQueries", q))
            continue
        suffixes = tuple(raw["suffixes"])
        for s in suffixes:
            for ch in s:
                if ch not in oracle_alphabet:
                    violations.append(Violation("UndeclaredSymbol", f"{where} suffix {ch!r}"))
        rows = raw["table"]
        if len(rows) != 2 ** len(suffixes) or not all(r in (0, 1) for r in rows):
            violations.append(Violation("ArityMismatch", q))
            continue
        per_state[q] = (suffixes, TruthTable(len(suffixes), tuple(bool(r) for r in rows)))
    for q in sorted(states - set(per_state)):
        violations.append(Violation("MissingQueries", q))

    if violations:
        raise InvalidMachineError(violations)
    return OracleMealyMachine(
        states=states,
        input_alphabet=input_alphabet,
        oracle_alphabet=oracle_alphabet,
        delta=delta,
        outputs=outputs,
        start_state=candidate["start_state"],
        per_state=per_state,
    )


def mealy_to_document(a: OracleMealyMachine) -> dict:
    return {
        "states": sorted(a.states),
        "input_alphabet": sorted(a.input_alphabet),
        "oracle_alphabet": sorted(a.oracle_alphabet),
        "delta": [
            {"from": q, "on": ch, "to": a.delta[(q, ch)]} for q, ch in sorted(a.delta)
        ],
        "lambda": [
            {"from": q, "on": ch, "out": a.outputs[(q, ch)]} for q, ch in sorted(a.outputs)
        ],
        "start_state": a.start_state,
        "queries": [
            {
                "state": q,
                "suffixes": list(a.per_state[q][0]),
                "table": [1 if r else 0 for r in a.per_state[q][1].rows],
            }
            for q in sorted(a.states)
        ],
    }


def load_mealy(path: str) -> OracleMealyMachine:
    with open(path, "r", encoding="utf-8") as fh:
        return validate_mealy(json.load(fh))


def _run_transducer(a: OracleMealyMachine, state: str, word: str) -> Optional[tuple[str, str]]:
    out: list[str] = []
    for ch in word:
        nxt = a.delta.get((state, ch))
        if nxt is None:
            return None
        out.append(a.outputs[(state, ch)])
        state = nxt
    return state, "".join(out)


def transduce(a: OracleMealyMachine, word: str) -> Optional[tuple[str, str]]:
    """Fold δ and λ over `word`; None the moment δ is undefined."""
    return _run_transducer(a, a.start_state, word)


def evaluate(a: OracleMealyMachine, oracle: LanguageOracle, word: str) -> bool:
    """Acceptance of `word` by the machine running against `oracle`.

    The transduced output extended by each suffix of the final state forms
    the oracle queries; the state's truth table aggregates the answers.  An
    undefined transition rejects outright.
    """
    res = transduce(a, word)
    if res is None:
        return False
    state, out = res
    suffixes, table = a.per_state[state]
    return table.value([oracle.membership(out + s) for s in suffixes])


def oracle_from_dpda(m: Dpda) -> LanguageOracle:
    """Wrap a machine's accepted language as a (memoized) oracle."""
    mc = m if m.completed else complete_dpda(m)

    @lru_cache(maxsize=1 << 20)
    def membership(word: str) -> bool:
        return member(mc, word)

    return LanguageOracle(alphabet=mc.input_alphabet, membership=membership, name="dpda")


def oracle_from_machine(
    a: OracleMealyMachine, oracle: LanguageOracle, name: str = ""
) -> LanguageOracle:
    """The language of a^oracle, itself wrapped as an oracle."""
    return LanguageOracle(
        alphabet=a.input_alphabet,
        membership=lambda w: evaluate(a, oracle, w),
        name=name or f"eval({oracle.name})",
    )


def identity_machine(alphabet: Sequence[str]) -> OracleMealyMachine:
    """One state copying input to the oracle tape; suffix ε, identity table."""
    if not alphabet:
        raise ValueError("alphabet must be nonempty")
    alpha = frozenset(alphabet)
    return OracleMealyMachine(
        states=frozenset({"q"}),
        input_alphabet=alpha,
        oracle_alphabet=alpha,
        delta={("q", a): "q" for a in alpha},
        outputs={("q", a): a for a in alpha},
        start_state="q",
        per_state={"q": (("",), IDENTITY_TABLE)},
    )


def _fresh(base: str, taken: frozenset[str]) -> str:
    if base not in taken:
        return base
    i = 2
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def compose(a1: OracleMealyMachine, a2: OracleMealyMachine) -> OracleMealyMachine:
    """Chain two reductions: the result queries a2's oracle directly.

    Product of the state graphs where a2 consumes a1's output on the fly.
    Per product state (p1, p2), each a1-suffix is pushed through a2 from p2
    and paired with the suffixes of the a2-state it reaches; the table
    plugs a2's tables into a1's.  When a2 dies while consuming a1-output
    the second component collapses to a sink whose verdict is a1's table on
    all-negative answers (a rejecting back end answers every query
    negatively); a2 dying inside one suffix pins that single slot to a
    negative answer the same way.
    """
    if a1.oracle_alphabet != a2.input_alphabet:
        raise ValueError("oracle alphabet of the front machine must feed the back machine")

    def name(q1: str, q2: Optional[str]) -> str:
        return f"({q1},{q2 if q2 is not None else '#'})"

    start = (a1.start_state, a2.start_state)
    seen: set[tuple[str, Optional[str]]] = {start}
    todo: list[tuple[str, Optional[str]]] = [start]
    delta: dict[tuple[str, str], str] = {}
    outputs: dict[tuple[str, str], str] = {}
    per_state: dict[str, QuerySpec] = {}

    while todo:
        q1, q2 = todo.pop()
        here = name(q1, q2)
        for ch in sorted(a1.input_alphabet):
            t1 = a1.delta.get((q1, ch))
            if t1 is None:
                continue
            t2: Optional[str]
            if q2 is None:
                t2, out = None, ""
            else:
                mid = _run_transducer(a2, q2, a1.outputs[(q1, ch)])
                if mid is None:
                    t2, out = None, ""
                else:
                    t2, out = mid
            delta[(here, ch)] = name(t1, t2)
            outputs[(here, ch)] = out
            if (t1, t2) not in seen:
                seen.add((t1, t2))
                todo.append((t1, t2))

        suffixes1, table1 = a1.per_state[q1]
        if q2 is None:
            verdict = table1.value([False] * table1.arity)
            per_state[here] = ((), constant_table(verdict))
            continue
        slots: list[Optional[QuerySpec]] = []
        suffixes: list[str] = []
        for s in suffixes1:
            mid = _run_transducer(a2, q2, s)
            if mid is None:
                slots.append(None)
            else:
                p2i, out_i = mid
                sfx2, tbl2 = a2.per_state[p2i]
                slots.append((sfx2, tbl2))
                suffixes.extend(out_i + s2 for s2 in sfx2)
        total = sum(len(slot[0]) for slot in slots if slot is not None)
        rows = []
        for idx in range(2**total):
            bits = [bool((idx >> (total - 1 - k)) & 1) for k in range(total)]
            answers: list[bool] = []
            pos = 0
            for slot in slots:
                if slot is None:
                    answers.append(False)
                else:
                    sfx2, tbl2 = slot
                    answers.append(tbl2.value(bits[pos : pos + len(sfx2)]))
                    pos += len(sfx2)
            rows.append(table1.value(answers))
        per_state[here] = (tuple(suffixes), TruthTable(total, tuple(rows)))

    return OracleMealyMachine(
        states=frozenset(per_state),
        input_alphabet=a1.input_alphabet,
        oracle_alphabet=a2.oracle_alphabet,
        delta=delta,
        outputs=outputs,
        start_state=name(*start),
        per_state=per_state,
    )


def complement_machine(a: OracleMealyMachine) -> OracleMealyMachine:
    """Accept exactly the words the given machine rejects.

    δ is first totalized with a fresh sink (so that undefined-transition
    rejection becomes a table verdict), then every table row is negated,
    the sink's included.
    """
    sink = _fresh("sink", a.states)
    states = frozenset(a.states | {sink})
    delta = dict(a.delta)
    outputs = dict(a.outputs)
    for q in sorted(states):
        for ch in sorted(a.input_alphabet):
            if (q, ch) not in delta:
                delta[(q, ch)] = sink
                outputs[(q, ch)] = ""
    per_state: dict[str, QuerySpec] = {}
    for q, (sfx, tbl) in a.per_state.items():
        per_state[q] = (sfx, TruthTable(tbl.arity, tuple(not r for r in tbl.rows)))
    per_state[sink] = ((), constant_table(True))
    return OracleMealyMachine(
        states=states,
        input_alphabet=a.input_alphabet,
        oracle_alphabet=a.oracle_alphabet,
        delta=delta,
        outputs=outputs,
        start_state=a.start_state,
        per_state=per_state,
    )


def restrict_regular(a: OracleMealyMachine, d: Dfa) -> OracleMealyMachine:
    """Conjunction with a regular language: simulate d in parallel and
    force constant-0 tables wherever d rejects."""
    if d.alphabet != a.input_alphabet:
        raise ValueError("DFA alphabet must match the machine's input alphabet")

    def name(q: str, s: str) -> str:
        return f"({q},{s})"

    start = (a.start_state, d.start)
    seen = {start}
    todo = [start]
    delta: dict[tuple[str, str], str] = {}
    outputs: dict[tuple[str, str], str] = {}
    per_state: dict[str, QuerySpec] = {}
    while todo:
        q, s = todo.pop()
        here = name(q, s)
        for ch in sorted(a.input_alphabet):
            t1 = a.delta.get((q, ch))
            if t1 is None:
                continue
            t2 = d.transitions[(s, ch)]
            delta[(here, ch)] = name(t1, t2)
            outputs[(here, ch)] = a.outputs[(q, ch)]
            if (t1, t2) not in seen:
                seen.add((t1, t2))
                todo.append((t1, t2))
        if s in d.accepting:
            per_state[here] = a.per_state[q]
        else:
            per_state[here] = ((), constant_table(False))
    return OracleMealyMachine(
        states=frozenset(per_state),
        input_alphabet=a.input_alphabet,
        oracle_alphabet=a.oracle_alphabet,
        delta=delta,
        outputs=outputs,
        start_state=name(*start),
        per_state=per_state,
    )


def lift_dfa(d: Dfa, oracle_alphabet: Sequence[str]) -> OracleMealyMachine:
    """Embed a DFA as an oracle machine that never queries.

    Constant tables produce 1 exactly at accepting states, so the verdict
    is oracle-independent.
    """
    alpha = frozenset(oracle_alphabet)
    if not alpha:
        raise ValueError("oracle alphabet must be nonempty")
    return OracleMealyMachine(
        states=d.states,
        input_alphabet=d.alphabet,
        oracle_alphabet=alpha,
        delta=dict(d.transitions),
        outputs={key: "" for key in d.transitions},
        start_state=d.start,
        per_state={q: ((), constant_table(q in d.accepting)) for q in d.states},
    )


_ZERO_ONE_BLOCK = re.compile(r"0*1*")


def _in_lsharp(w: str) -> bool:
    n = len(w) // 2
    return n >= 1 and w == "0" * n + "1" * n


def _in_lr(w: str) -> bool:
    i = w.find("c")
    if i < 0 or w.find("c", i + 1) >= 0:
        return False
    left, right = w[:i], w[i + 1 :]
    return left == right[::-1] and set(left) <= {"a", "b"}


_OUTSIDE = object()


def refute_simplicity_LR(a: OracleMealyMachine, k_max: int) -> Optional[str]:
    """Search for a word w1·c·w2^R that the machine misclassifies against
    the marked-palindrome language, running the machine over the 0^n1^n
    oracle.

    Two prefixes with the same state and the same oracle-tape content are
    indistinguishable to the machine forever; when the tape content has
    left 0^*1^* every query is answered negatively from then on, so only
    the state matters.  Any collision therefore pins a misclassification
    on one of four candidate words; each candidate is confirmed against
    the direct predicate before being returned.  None means the bound was
    exhausted without a collision that confirms (the machine may still be
    incorrect elsewhere).
    """
    oracle = LanguageOracle(
        alphabet=a.oracle_alphabet, membership=_in_lsharp, name="lsharp"
    )
    for k in range(1, k_max + 1):
        buckets: dict[tuple, str] = {}
        for chars in product("ab", repeat=k):
            w = "".join(chars)
            res = transduce(a, w)
            if res is None:
                continue
            state, out = res
            key = (state, out if _ZERO_ONE_BLOCK.fullmatch(out) else _OUTSIDE)
            w1 = buckets.setdefault(key, w)
            if w1 == w:
                continue
            w2 = w
            candidates = (
                w1 + "c" + w2[::-1],
                w2 + "c" + w1[::-1],
                w1 + "c" + w1[::-1],
                w2 + "c" + w2[::-1],
            )
            for cand in candidates:
                if evaluate(a, oracle, cand) != _in_lr(cand):
                    return cand
    return None
