"""Deterministic pushdown automata: validation, completion, and runs.

Machines are immutable values once validated; every operation here is a
pure function, so machines and configurations can be shared freely between
workers.  Input words are plain strings (one character per input symbol);
stack words are tuples of stack-symbol strings with the topmost symbol
first, matching the pXα convention where X is the top of the stack.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional

Word = str
StackWord = tuple[str, ...]

EPSILON = ""

_DPDA_FIELDS = frozenset(
    {
        "states",
        "input_alphabet",
        "stack_alphabet",
        "rules",
        "start_state",
        "start_symbol",
        "accepting",
    }
)
_RULE_FIELDS = frozenset({"from", "top", "label", "to", "push"})


@dataclass(frozen=True)
class Violation:
    """One structural defect found while validating a machine description."""

    kind: str
    where: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.where}"


class InvalidMachineError(ValueError):
    """Raised when a machine description violates its invariants."""

    def __init__(self, violations: Iterable[Violation]):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class StuckError(RuntimeError):
    """A run could not consume the next input symbol.

    Only possible on machines that have not been completed.
    """

    def __init__(self, position: int):
        self.position = position
        super().__init__(f"run stuck at input position {position}")


@dataclass(frozen=True)
class Rule:
    """Transition pX -a-> qγ; label "" is an ε-step, push is topmost first."""

    from_state: str
    top: str
    label: str
    to_state: str
    push: StackWord


@dataclass(frozen=True)
class Configuration:
    """A control state plus a stack word (topmost symbol first)."""

    state: str
    stack: StackWord


@dataclass(frozen=True)
class RunResult:
    final: Configuration
    visited_accepting_after_consume: bool
    trace: tuple[tuple[str, Configuration], ...]


@dataclass(frozen=True)
class Dpda:
    states: frozenset[str]
    input_alphabet: frozenset[str]
    stack_alphabet: frozenset[str]
    rules: tuple[Rule, ...]
    start_state: str
    start_symbol: str
    accepting: frozenset[str]
    # Set by complete_dpda; completion guarantees every run reads its whole
    # input, which `run` and `member` rely on.
    completed: bool = False

    @cached_property
    def visible(self) -> dict[tuple[str, str, str], tuple[str, StackWord]]:
        """(state, top, symbol) -> (next state, pushed word)."""
        table = {}
        for r in self.rules:
            if r.label != EPSILON:
                table[(r.from_state, r.top, r.label)] = (r.to_state, r.push)
        return table

    @cached_property
    def eps(self) -> dict[tuple[str, str], str]:
        """(state, top) -> next state for the (popping) ε-rules."""
        return {
            (r.from_state, r.top): r.to_state for r in self.rules if r.label == EPSILON
        }

    def start_configuration(self) -> Configuration:
        return Configuration(self.start_state, (self.start_symbol,))


def _check_symbol_sets(doc: Mapping, violations: list[Violation]) -> bool:
    """Schema-level checks; returns False when the shape is unusable."""
    unknown = set(doc) - _DPDA_FIELDS
    for f in sorted(unknown):
        violations.append(Violation("UnknownField", f))
    missing = _DPDA_FIELDS - set(doc)
    for f in sorted(missing):
        violations.append(Violation("MissingField", f))
    if missing:
        return False
    for f in ("states", "input_alphabet", "stack_alphabet", "accepting"):
        if not isinstance(doc[f], (list, tuple)) or not all(
            isinstance(s, str) for s in doc[f]
        ):
            violations.append(Violation("BadType", f"{f} must be a list of strings"))
            return False
    if not isinstance(doc["rules"], (list, tuple)):
        violations.append(Violation("BadType", "rules must be a list"))
        return False
    for f in ("start_state", "start_symbol"):
        if not isinstance(doc[f], str):
            violations.append(Violation("BadType", f"{f} must be a string"))
            return False
    return True


def validate_dpda(candidate: Mapping) -> Dpda:
    """Check a raw machine description and return the validated machine.

    The description uses the documented JSON shape: `states`,
    `input_alphabet`, `stack_alphabet`, `rules` (objects with `from`, `top`,
    `label`, `to`, `push`; label "" means ε; push is topmost first),
    `start_state`, `start_symbol`, `accepting`.  Unknown fields are
    rejected.  All violations are collected and raised together as an
    InvalidMachineError.
    """
    violations: list[Violation] = []
    if not _check_symbol_sets(candidate, violations):
        raise InvalidMachineError(violations)

    states = frozenset(candidate["states"])
    input_alphabet = frozenset(candidate["input_alphabet"])
    stack_alphabet = frozenset(candidate["stack_alphabet"])
    accepting = frozenset(candidate["accepting"])

    if not input_alphabet:
        violations.append(Violation("BadType", "input_alphabet must be nonempty"))
    if not stack_alphabet:
        violations.append(Violation("BadType", "stack_alphabet must be nonempty"))
    for a in sorted(input_alphabet):
        if len(a) != 1:
            violations.append(
                Violation("BadSymbol", f"input symbol {a!r} is not a single character")
            )
    for x in sorted(stack_alphabet):
        if not x:
            violations.append(Violation("BadSymbol", "empty stack symbol"))

    if candidate["start_state"] not in states:
        violations.append(Violation("UndeclaredSymbol", "start_state"))
    if candidate["start_symbol"] not in stack_alphabet:
        violations.append(Violation("UndeclaredSymbol", "start_symbol"))
    for q in sorted(accepting - states):
        violations.append(Violation("UndeclaredSymbol", f"accepting state {q}"))

    rules = []
    for i, raw in enumerate(candidate["rules"]):
        where = f"rules[{i}]"
        if not isinstance(raw, Mapping) or set(raw) != _RULE_FIELDS:
            violations.append(
                Violation("BadType", f"{where} must have fields from/top/label/to/push")
            )
            continue
        push = raw["push"]
        if not isinstance(push, (list, tuple)) or not all(
            isinstance(s, str) for s in push
        ):
            violations.append(Violation("BadType", f"{where}.push"))
            continue
        rule = Rule(raw["from"], raw["top"], raw["label"], raw["to"], tuple(push))
        if rule.from_state not in states:
            violations.append(Violation("UndeclaredSymbol", f"{where}.from"))
        if rule.to_state not in states:
            violations.append(Violation("UndeclaredSymbol", f"{where}.to"))
        if rule.top not in stack_alphabet:
            violations.append(Violation("UndeclaredSymbol", f"{where}.top"))
        for s in rule.push:
            if s not in stack_alphabet:
                violations.append(Violation("UndeclaredSymbol", f"{where}.push {s!r}"))
        if rule.label != EPSILON and rule.label not in input_alphabet:
            violations.append(Violation("UndeclaredSymbol", f"{where}.label"))
        if rule.label == EPSILON and rule.push:
            violations.append(
                Violation(
                    "NonPoppingEpsilon",
                    f"{rule.from_state} {rule.top} -ε-> {rule.to_state} pushes",
                )
            )
        rules.append(rule)

    # Determinism: at most one rule per (p, X, a); ε excludes visible rules.
    seen: dict[tuple[str, str, str], int] = {}
    eps_at: set[tuple[str, str]] = set()
    visible_at: set[tuple[str, str]] = set()
    for rule in rules:
        key = (rule.from_state, rule.top, rule.label)
        seen[key] = seen.get(key, 0) + 1
        if rule.label == EPSILON:
            eps_at.add((rule.from_state, rule.top))
        else:
            visible_at.add((rule.from_state, rule.top))
    for (p, x, a), count in sorted(seen.items()):
        if count > 1:
            label = a if a != EPSILON else "ε"
            violations.append(Violation("DuplicateRule", f"({p}, {x}, {label})"))
    for p, x in sorted(eps_at & visible_at):
        violations.append(Violation("EpsilonVisibleConflict", f"({p}, {x})"))

    if violations:
        raise InvalidMachineError(violations)
    return Dpda(
        states=states,
        input_alphabet=input_alphabet,
        stack_alphabet=stack_alphabet,
        rules=tuple(rules),
        start_state=candidate["start_state"],
        start_symbol=candidate["start_symbol"],
        accepting=accepting,
    )


def dpda_to_document(m: Dpda) -> dict:
    """Export a machine in the documented JSON shape (sorted, reproducible)."""
    return {
        "states": sorted(m.states),
        "input_alphabet": sorted(m.input_alphabet),
        "stack_alphabet": sorted(m.stack_alphabet),
        "rules": [
            {
                "from": r.from_state,
                "top": r.top,
                "label": r.label,
                "to": r.to_state,
                "push": list(r.push),
            }
            for r in m.rules
        ],
        "start_state": m.start_state,
        "start_symbol": m.start_symbol,
        "accepting": sorted(m.accepting),
    }


def load_dpda(path: str) -> Dpda:
    with open(path, "r", encoding="utf-8") as fh:
        return validate_dpda(json.load(fh))


def _fresh(base: str, taken: frozenset[str]) -> str:
    if base not in taken:
        return base
    i = 2
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def step_closure(m: Dpda, c: Configuration) -> tuple[Configuration, bool]:
    """Follow the maximal ε-chain from c.

    Returns the stable endpoint together with the flag telling whether any
    state on the chain (including c's own state) is accepting.  The chain is
    finite because every ε-step pops exactly one symbol.
    """
    eps = m.eps
    state = c.state
    stack = list(reversed(c.stack))
    acc = state in m.accepting
    while stack:
        nxt = eps.get((state, stack[-1]))
        if nxt is None:
            break
        state = nxt
        stack.pop()
        acc = acc or state in m.accepting
    return Configuration(state, tuple(reversed(stack))), acc


def complete_dpda(m: Dpda) -> Dpda:
    """Return a machine that reads every input word in full.

    A fresh bottom symbol is kept below the original start symbol and a
    fresh non-accepting fail state absorbs every configuration that would
    otherwise be stuck.  The accepted language is unchanged (stuck runs of
    the original machine reject).  Because ε-rules may not push, the new
    start configuration carries only the bottom symbol and the first visible
    step jumps directly to the simulated configuration.
    """
    bot = _fresh("⊥", m.stack_alphabet)
    fail = _fresh("fail", m.states)
    init = _fresh("init", m.states | {fail})

    rules = list(m.rules)
    states = set(m.states) | {fail, init}
    stack_alphabet = set(m.stack_alphabet) | {bot}
    accepting = set(m.accepting)
    sigma = sorted(m.input_alphabet)

    # ε-closure of the conceptual start q0 X0 ⊥ (⊥ has no rules).
    eps = m.eps
    state = m.start_state
    stack = [bot, m.start_symbol]
    start_acc = state in m.accepting
    while len(stack) > 1:
        nxt = eps.get((state, stack[-1]))
        if nxt is None:
            break
        state = nxt
        stack.pop()
        start_acc = start_acc or state in m.accepting
    if start_acc:
        accepting.add(init)

    visible = m.visible
    stable_stack = tuple(reversed(stack))
    for a in sigma:
        hit = visible.get((state, stable_stack[0], a)) if stable_stack[0] != bot else None
        if hit is None:
            rules.append(Rule(init, bot, a, fail, (bot,)))
        else:
            to_state, push = hit
            rules.append(Rule(init, bot, a, to_state, push + stable_stack[1:]))

    # Route every remaining stuck (state, top, symbol) hole to the fail state.
    eps_keys = {(r.from_state, r.top) for r in m.rules if r.label == EPSILON}
    visible_keys = {(r.from_state, r.top, r.label) for r in m.rules if r.label != EPSILON}
    for q in sorted(states - {init}):
        for x in sorted(stack_alphabet):
            if (q, x) in eps_keys:
                continue
            for a in sigma:
                if (q, x, a) not in visible_keys:
                    rules.append(Rule(q, x, a, fail, (x,)))

    return Dpda(
        states=frozenset(states),
        input_alphabet=m.input_alphabet,
        stack_alphabet=frozenset(stack_alphabet),
        rules=tuple(rules),
        start_state=init,
        start_symbol=bot,
        accepting=frozenset(accepting),
        completed=True,
    )


def run(m: Dpda, word: Word, keep_trace: bool = False) -> RunResult:
    """Deterministically consume `word` from the start configuration.

    `visited_accepting_after_consume` is true iff some configuration reached
    by reading exactly `word` (the configuration right after the last
    visible step, or any configuration on its trailing ε-chain) has an
    accepting state.  Raises StuckError on machines that were not completed
    when no rule applies.
    """
    visible = m.visible
    eps = m.eps
    accepting = m.accepting

    state = m.start_state
    stack = [m.start_symbol]
    trace: list[tuple[str, Configuration]] = []

    acc = state in accepting
    while stack:
        nxt = eps.get((state, stack[-1]))
        if nxt is None:
            break
        state = nxt
        stack.pop()
        acc = acc or state in accepting
        if keep_trace:
            trace.append((EPSILON, Configuration(state, tuple(reversed(stack)))))

    for i, a in enumerate(word):
        hit = visible.get((state, stack[-1], a)) if stack else None
        if hit is None:
            raise StuckError(i)
        state, push = hit
        stack.pop()
        stack.extend(reversed(push))
        acc = state in accepting
        if keep_trace:
            trace.append((a, Configuration(state, tuple(reversed(stack)))))
        while stack:
            nxt = eps.get((state, stack[-1]))
            if nxt is None:
                break
            state = nxt
            stack.pop()
            acc = acc or state in accepting
            if keep_trace:
                trace.append((EPSILON, Configuration(state, tuple(reversed(stack)))))

    return RunResult(
        final=Configuration(state, tuple(reversed(stack))),
        visited_accepting_after_consume=acc,
        trace=tuple(trace),
    )


def member(m: Dpda, word: Word) -> bool:
    """Membership of `word` in the language of a completed machine.

    Traceless fast path of `run`; verification grids call this millions of
    times.
    """
    visible = m.visible
    eps = m.eps
    accepting = m.accepting

    state = m.start_state
    stack = [m.start_symbol]
    acc = state in accepting
    while stack:
        nxt = eps.get((state, stack[-1]))
        if nxt is None:
            break
        state = nxt
        stack.pop()
        acc = acc or state in accepting
    for i, a in enumerate(word):
        hit = visible.get((state, stack[-1], a)) if stack else None
        if hit is None:
            raise StuckError(i)
        state, push = hit
        stack.pop()
        stack.extend(reversed(push))
        acc = state in accepting
        while stack:
            nxt = eps.get((state, stack[-1]))
            if nxt is None:
                break
            state = nxt
            stack.pop()
            acc = acc or state in accepting
    return acc


def advance(m: Dpda, c: Configuration, word: Word) -> Optional[tuple[Configuration, bool]]:
    """Run `word` from configuration c (ε-closing first).

    Returns the stable configuration together with the accepting-seen flag
    for the last consumed symbol (for the empty word: the closure of c
    itself), or None when the run gets stuck, which on a completed machine
    can only happen from a configuration whose stack runs empty.
    """
    visible = m.visible
    eps = m.eps
    accepting = m.accepting

    state = c.state
    stack = list(reversed(c.stack))
    acc = state in accepting
    while stack:
        nxt = eps.get((state, stack[-1]))
        if nxt is None:
            break
        state = nxt
        stack.pop()
        acc = acc or state in accepting
    for a in word:
        hit = visible.get((state, stack[-1], a)) if stack else None
        if hit is None:
            return None
        state, push = hit
        stack.pop()
        stack.extend(reversed(push))
        acc = state in accepting
        while stack:
            nxt = eps.get((state, stack[-1]))
            if nxt is None:
                break
            state = nxt
            stack.pop()
            acc = acc or state in accepting
    return Configuration(state, tuple(reversed(stack))), acc


def config_member(m: Dpda, c: Configuration, word: Word) -> bool:
    """Membership of `word` in L(c), the language of configuration c.

    A run that strands (empty stack mid-word) rejects; in particular an
    empty-stack configuration accepts nothing but possibly ε.
    """
    result = advance(m, c, word)
    return result[1] if result is not None else False
