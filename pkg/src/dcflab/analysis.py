"""Structural analyses of DPDA runs.

Pop-relation saturation (which states a configuration can reach with its
stack fully consumed, and with which input words), divergent-word search
driven by quotient signatures, stair factorization of stack-increasing
runs, pump detection, and eventual periodicity of y-iterates.

Exact configuration equivalence is out of desk scope; wherever a decision
would need it, these routines use bounded search (signatures over a finite
suffix set, product-simulation distinguishers) and leave final soundness to
simulation re-checks by their callers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional

from .dpda import (
    EPSILON,
    Configuration,
    Dpda,
    StackWord,
    Word,
    advance,
    config_member,
    step_closure,
)

# Caps for the product-simulation search for a distinguishing word; beyond
# them two configurations are treated as equivalent at this scale.
DISTINGUISH_MAX_LEN = 64
DISTINGUISH_NODE_CAP = 20_000


class ExhaustedError(Exception):
    """Divergent-word search ran out of extensions within its budgets."""

    def __init__(self, best_prefix: Word):
        self.best_prefix = best_prefix
        super().__init__(
            f"no divergent extension found (best prefix {best_prefix!r}); "
            "the language looks regular at this scale or the budget is too small"
        )


class NoLevelsError(Exception):
    """Stack height does not trend upward on the given word."""


class NoPumpError(Exception):
    """No repeated level pair survived simulation re-checks."""


class NoPeriodFoundError(Exception):
    """Sampled range too short to exhibit a (threshold, period) pair."""

    def __init__(self, max_l: int):
        self.max_l = max_l
        super().__init__(f"no period found within {max_l} samples; raise max_l")


@dataclass(frozen=True)
class PopSummary:
    """Saturated pop relation of a machine.

    entries[(p, X)] maps each state q reachable from pX with X fully popped
    to one witness input word (minimal length, ties broken lexicographically).
    eps_entries holds the ε-only variant, which by determinism has at most
    one target per key.
    """

    entries: Mapping[tuple[str, str], Mapping[str, Word]]
    eps_entries: Mapping[tuple[str, str], str]

    def to_json_dict(self) -> dict:
        return {
            "entries": [
                {"from": p, "top": x, "to": q, "witness": w}
                for (p, x) in sorted(self.entries)
                for q, w in sorted(self.entries[(p, x)].items())
            ],
            "eps_entries": [
                {"from": p, "top": x, "to": q}
                for (p, x), q in sorted(self.eps_entries.items())
            ],
        }


@dataclass(frozen=True)
class StairLevel:
    state: str
    symbol: str
    pushed: StackWord
    chunk: Word


@dataclass(frozen=True)
class StairFactorization:
    """Levels of a stack-increasing run.

    Replaying chunks 0..k from the start configuration lands exactly in
    configuration (state_k, (symbol_k,) + pushed_k + ... + pushed_0); every
    chunk and every pushed segment is nonempty.
    """

    levels: tuple[StairLevel, ...]

    def to_json_dict(self) -> dict:
        return {
            "levels": [
                {
                    "state": lv.state,
                    "symbol": lv.symbol,
                    "pushed": list(lv.pushed),
                    "chunk": lv.chunk,
                }
                for lv in self.levels
            ]
        }


@dataclass(frozen=True)
class Pump:
    """A stack-increasing loop: start -v-> (p, X·delta) and
    (p, X) -x-> (p, X·gamma), with x and gamma nonempty."""

    v: Word
    x: Word
    p: str
    X: str
    gamma: StackWord
    delta: StackWord


@dataclass(frozen=True)
class PeriodicityReport:
    """Membership of y^l z from a base configuration is table[l mod period]
    for every sampled l >= k."""

    k: int
    period: int
    table: tuple[bool, ...]


@dataclass(frozen=True)
class QuotientSignature:
    bits: tuple[bool, ...]


def pop_summaries(m: Dpda) -> PopSummary:
    """Least fixpoint of the pop relation.

    A popping rule pX -a-> q contributes (p, X) -> q with witness a; a rule
    pX -a-> q Y1..Yk composes through the summaries of (q, Y1), then each
    later Yi.  Witnesses compose the currently best sub-witnesses and the
    iteration keeps the (length, lexicographic)-minimal word per target.
    """

    def better(a: Word, b: Optional[Word]) -> bool:
        return b is None or (len(a), a) < (len(b), b)

    entries: dict[tuple[str, str], dict[str, Word]] = {}
    changed = True
    while changed:
        changed = False
        for r in m.rules:
            targets = entries.setdefault((r.from_state, r.top), {})
            if not r.push:
                if better(r.label, targets.get(r.to_state)):
                    targets[r.to_state] = r.label
                    changed = True
                continue
            partial: dict[str, Word] = {r.to_state: r.label}
            for symbol in r.push:
                step: dict[str, Word] = {}
                for q, w in partial.items():
                    for q2, w2 in entries.get((q, symbol), {}).items():
                        cand = w + w2
                        if better(cand, step.get(q2)):
                            step[q2] = cand
                partial = step
                if not partial:
                    break
            for q2, w in partial.items():
                if better(w, targets.get(q2)):
                    targets[q2] = w
                    changed = True

    eps_entries = {
        (r.from_state, r.top): r.to_state for r in m.rules if r.label == EPSILON
    }
    return PopSummary(
        entries={k: dict(v) for k, v in entries.items() if v},
        eps_entries=eps_entries,
    )


def down_states(s: PopSummary, c: Configuration) -> frozenset[str]:
    """States reachable from c with the entire stack consumed."""
    current = {c.state}
    for symbol in c.stack:
        current = {
            q2 for q in current for q2 in s.entries.get((q, symbol), {})
        }
        if not current:
            break
    return frozenset(current)


def eps_down_state(s: PopSummary, c: Configuration) -> Optional[str]:
    """The unique state reached from c by ε-popping the whole stack, if any."""
    state = c.state
    for symbol in c.stack:
        nxt = s.eps_entries.get((state, symbol))
        if nxt is None:
            return None
        state = nxt
    return state


def pop_witnesses(s: PopSummary, state: str, stack: StackWord) -> dict[str, Word]:
    """Witness words for popping the whole stack word from `state`.

    One (length, lex)-minimal composite witness per reachable end state.
    """
    current: dict[str, Word] = {state: ""}
    for symbol in stack:
        step: dict[str, Word] = {}
        for q, w in current.items():
            for q2, w2 in s.entries.get((q, symbol), {}).items():
                cand = w + w2
                old = step.get(q2)
                if old is None or (len(cand), cand) < (len(old), old):
                    step[q2] = cand
        current = step
        if not current:
            break
    return current


def signature(m: Dpda, c: Configuration, suffixes: list[Word]) -> QuotientSignature:
    """Bounded approximation of the configuration's language class: one
    membership bit per test suffix."""
    return QuotientSignature(tuple(config_member(m, c, s) for s in suffixes))


def _pop_probes(s: PopSummary, c: Configuration) -> list[Word]:
    """Words that pop some prefix of the configuration's stack.

    Natural membership probes for separating configurations that differ
    somewhere down their stacks: each word drives the configuration to a
    known state with a known stack remainder.
    """
    probes: list[Word] = []
    current: dict[str, Word] = {c.state: ""}
    for symbol in c.stack:
        step: dict[str, Word] = {}
        for q, w in current.items():
            for q2, w2 in s.entries.get((q, symbol), {}).items():
                cand = w + w2
                old = step.get(q2)
                if old is None or (len(cand), cand) < (len(old), old):
                    step[q2] = cand
        current = step
        if not current:
            break
        probes.extend(current.values())
    return probes


def distinguishing_word(
    m: Dpda,
    c1: Configuration,
    c2: Configuration,
    summary: Optional[PopSummary] = None,
    max_len: int = DISTINGUISH_MAX_LEN,
    node_cap: int = DISTINGUISH_NODE_CAP,
) -> Optional[Word]:
    """A word on which exactly one of the two configurations accepts.

    Tries pop-guided probes first (words that unwind either stack reach the
    depth at which the configurations differ without any search), then
    falls back to breadth-first product simulation for the shortest
    separator; a stranded side (empty stack) rejects everything from then
    on.  None when no difference is found within the caps, which either
    means genuine equivalence (the search exhausted all reachable pairs)
    or that the budget was too small.
    """
    if summary is not None:
        candidates = sorted(
            set(_pop_probes(summary, c1)) | set(_pop_probes(summary, c2)),
            key=lambda w: (len(w), w),
        )
        for cand in candidates:
            if config_member(m, c1, cand) != config_member(m, c2, cand):
                return cand

    def probe(c: Optional[Configuration], ch: Word) -> tuple[Optional[Configuration], bool]:
        if c is None:
            return None, False
        res = advance(m, c, ch)
        if res is None:
            return None, False
        return res

    s1, a1 = probe(c1, "")
    s2, a2 = probe(c2, "")
    if a1 != a2:
        return ""
    sigma = sorted(m.input_alphabet)
    seen = {(s1, s2)}
    frontier: deque[tuple[Optional[Configuration], Optional[Configuration], Word]] = deque()
    frontier.append((s1, s2, ""))
    expanded = 0
    while frontier:
        d1, d2, word = frontier.popleft()
        if len(word) >= max_len:
            continue
        for ch in sigma:
            e1, b1 = probe(d1, ch)
            e2, b2 = probe(d2, ch)
            if b1 != b2:
                return word + ch
            if e1 is None and e2 is None:
                continue
            key = (e1, e2)
            if key in seen:
                continue
            seen.add(key)
            expanded += 1
            if expanded > node_cap:
                return None
            frontier.append((e1, e2, word + ch))
    return None


def _initial_suffixes(m: Dpda) -> list[Word]:
    sigma = sorted(m.input_alphabet)
    out: list[Word] = [""]
    out.extend(sigma)
    out.extend(a + b for a in sigma for b in sigma)
    return out


def find_divergent_word(m: Dpda, target_length: int, suffix_budget: int) -> Word:
    """Grow a word whose prefixes all lie in pairwise distinct quotients.

    Greedy extension with backtracking; extensions that grow the stack are
    tried first, which steers the word toward the stack-increasing runs the
    downstream stair analysis needs.  Signatures are taken over a suffix
    set that starts with all words of length <= 2 and grows by
    distinguishing words discovered when two prefixes collide, capped at
    `suffix_budget`.  Raises ExhaustedError when no extension survives,
    which signals regular-looking behavior at this scale (or too small a
    budget).
    """
    sigma = sorted(m.input_alphabet)
    suffixes = _initial_suffixes(m)
    summary = pop_summaries(m)

    start, _ = step_closure(m, m.start_configuration())
    configs = [start]
    sigs = [signature(m, start, suffixes).bits]
    word: list[str] = []
    best = ""

    def extensions(c: Configuration):
        ranked = []
        for symbol in sigma:
            res = advance(m, c, symbol)
            if res is not None:
                ranked.append((-len(res[0].stack), symbol, res[0]))
        ranked.sort()
        return iter([(symbol, cfg) for _, symbol, cfg in ranked])

    def resign() -> None:
        for i, c in enumerate(configs):
            sigs[i] = signature(m, c, suffixes).bits

    pending = [extensions(start)]
    while True:
        nxt = next(pending[-1], None)
        if nxt is None:
            pending.pop()
            if not pending:
                raise ExhaustedError(best)
            word.pop()
            configs.pop()
            sigs.pop()
            continue
        symbol, cand = nxt
        sig = signature(m, cand, suffixes).bits
        ok = True
        while True:
            clash = next((i for i, s in enumerate(sigs) if s == sig), None)
            if clash is None:
                break
            if len(suffixes) >= suffix_budget:
                ok = False
                break
            extra = distinguishing_word(m, cand, configs[clash], summary)
            if extra is None:
                ok = False
                break
            suffixes.append(extra)
            resign()
            sig = signature(m, cand, suffixes).bits
        if not ok:
            continue
        word.append(symbol)
        configs.append(cand)
        sigs.append(sig)
        if len(word) > len(best):
            best = "".join(word)
        if len(word) == target_length:
            return "".join(word)
        pending.append(extensions(cand))


def _micro_heights(m: Dpda, u: Word) -> tuple[list[tuple[int, Configuration]], list[int]]:
    """Stable configurations per consumed prefix plus the heights of every
    configuration visited (including unstable ones inside ε-chains)."""
    visible = m.visible
    eps = m.eps

    state = m.start_state
    stack = [m.start_symbol]
    heights: list[int] = []

    def close() -> None:
        nonlocal state
        while stack:
            nxt = eps.get((state, stack[-1]))
            if nxt is None:
                break
            state = nxt
            stack.pop()
            heights.append(len(stack))

    heights.append(len(stack))
    close()
    stables = [(len(heights) - 1, Configuration(state, tuple(reversed(stack))))]
    for ch in u:
        hit = visible.get((state, stack[-1], ch)) if stack else None
        if hit is None:
            break
        state, push = hit
        stack.pop()
        stack.extend(reversed(push))
        heights.append(len(stack))
        close()
        stables.append((len(heights) - 1, Configuration(state, tuple(reversed(stack)))))
    return stables, heights


def stair_factorize(m: Dpda, u: Word) -> StairFactorization:
    """Decompose the run on u along positions whose stack is never touched
    again within u.

    A position is a level when every configuration visited strictly after
    it (unstable ones included) keeps a strictly larger stack.  The segment
    up to the second level is merged into the first chunk so that replaying
    chunks reproduces the level configurations exactly.  Levels near the
    end of u may be artifacts of the finite run; pump verification filters
    them.
    """
    stables, heights = _micro_heights(m, u)

    suffix_min = [0] * (len(heights) + 1)
    suffix_min[len(heights)] = len(heights) + 10**9
    for i in range(len(heights) - 1, -1, -1):
        suffix_min[i] = min(heights[i], suffix_min[i + 1])

    level_positions = [
        pos
        for pos, (t, c) in enumerate(stables)
        if suffix_min[t + 1] > len(c.stack)
    ]
    if len(level_positions) < 2:
        raise NoLevelsError(f"only {len(level_positions)} level(s) on {u!r}")

    levels: list[StairLevel] = []
    prev_cfg = stables[level_positions[0]][1]
    first = True
    start_of_chunk = 0
    for pos in level_positions[1:]:
        cfg = stables[pos][1]
        if first:
            pushed = cfg.stack[1:]
            first = False
        else:
            keep = len(prev_cfg.stack) - 1
            pushed = cfg.stack[1 : len(cfg.stack) - keep]
            assert cfg.stack[len(cfg.stack) - keep :] == prev_cfg.stack[1:]
        levels.append(
            StairLevel(
                state=cfg.state,
                symbol=cfg.stack[0],
                pushed=pushed,
                chunk=u[start_of_chunk:pos],
            )
        )
        start_of_chunk = pos
        prev_cfg = cfg
    return StairFactorization(tuple(levels))


def find_pump(m: Dpda, u: Word) -> list[Pump]:
    """Stack-increasing loops extracted from repeated level pairs.

    For every pair of levels j' < j with the same (state, symbol): v is the
    input up to j', x the input from j' to j, gamma the stack pushed in
    between, delta what lies below.  Every candidate is re-verified by
    simulation (start -v-> pX·delta and pX -x-> pX·gamma) before being
    returned, which discards the spurious trailing levels of the finite
    run.
    """
    stair = stair_factorize(m, u)
    levels = stair.levels
    chunks = [lv.chunk for lv in levels]
    pumps: list[Pump] = []
    for j_lo in range(len(levels)):
        for j_hi in range(j_lo + 1, len(levels)):
            lo, hi = levels[j_lo], levels[j_hi]
            if (lo.state, lo.symbol) != (hi.state, hi.symbol):
                continue
            v = "".join(chunks[: j_lo + 1])
            x = "".join(chunks[j_lo + 1 : j_hi + 1])
            gamma: StackWord = ()
            for k in range(j_hi, j_lo, -1):
                gamma = gamma + levels[k].pushed
            delta: StackWord = ()
            for k in range(j_lo, -1, -1):
                delta = delta + levels[k].pushed
            if not x or not gamma:
                continue
            reached = advance(m, m.start_configuration(), v)
            if reached is None or reached[0] != Configuration(lo.state, (lo.symbol,) + delta):
                continue
            looped = advance(m, Configuration(lo.state, (lo.symbol,)), x)
            if looped is None or looped[0] != Configuration(lo.state, (lo.symbol,) + gamma):
                continue
            pumps.append(Pump(v=v, x=x, p=lo.state, X=lo.symbol, gamma=gamma, delta=delta))
    if not pumps:
        raise NoPumpError(f"no verified repeated level pair on {u!r}")
    return pumps


def periodicity(
    m: Dpda, base: Configuration, y: Word, z: Word, max_l: int = 200
) -> PeriodicityReport:
    """Detect the eventual periodicity of membership of y^l z in L(base).

    Membership is sampled for l = 0..max_l by extending a snapshot by y at
    each step and probing z from it.  The least (k, period) is returned,
    k-major, with period <= max_l // 3 and the periodic pattern required to
    hold over the whole sampled tail; table is indexed by l mod period.
    """
    if not y:
        raise ValueError("y must be nonempty")
    seq: list[bool] = []
    snapshot: Optional[tuple[Configuration, bool]] = advance(m, base, "")
    for _ in range(max_l + 1):
        if snapshot is None:
            seq.append(False)
            continue
        cfg, arrived_accepting = snapshot
        if z:
            seq.append(config_member(m, cfg, z))
        else:
            seq.append(arrived_accepting)
        snapshot = advance(m, cfg, y)

    for k in range(max_l + 1):
        limit = (max_l - k) // 3
        for p in range(1, min(limit, max_l // 3) + 1):
            if all(seq[l] == seq[k + ((l - k) % p)] for l in range(k, max_l + 1)):
                table = [False] * p
                for r in range(p):
                    l0 = k + ((r - k) % p)
                    table[l0 % p] = seq[l0]
                return PeriodicityReport(k=k, period=p, table=tuple(table))
    raise NoPeriodFoundError(max_l)
