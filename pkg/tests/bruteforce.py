"""Independent brute-force oracles used to cross-check the package.

Everything here recomputes results from the raw rule set by enumeration or
direct simulation, deliberately ignoring the package's own indexes and
algorithms, so that each check stays a genuine second route.
"""

from collections import deque
from itertools import product


def iter_words(alphabet, max_len):
    symbols = sorted(alphabet)
    for n in range(max_len + 1):
        for tup in product(symbols, repeat=n):
            yield "".join(tup)


def _find_rule(rules, state, top, label):
    for r in rules:
        if r.from_state == state and r.top == top and r.label == label:
            return r
    return None


def ref_member(m, word):
    """Reference run with stuck-as-reject semantics, straight off the rules."""

    def close(state, stack, acc):
        while stack:
            r = _find_rule(m.rules, state, stack[0], "")
            if r is None:
                break
            state = r.to_state
            stack = stack[1:]
            acc = acc or state in m.accepting
        return state, stack, acc

    state, stack, acc = close(m.start_state, (m.start_symbol,), m.start_state in m.accepting)
    for ch in word:
        if not stack:
            return False
        r = _find_rule(m.rules, state, stack[0], ch)
        if r is None:
            return False
        state, stack = r.to_state, r.push + stack[1:]
        state, stack, acc = close(state, stack, state in m.accepting)
    return acc


def bfs_pop_states(m, state, stack, max_word_len):
    """States reachable from (state, stack) with the whole stack consumed,
    over pop paths whose input word has length <= max_word_len."""
    has_eps = any(r.label == "" for r in m.rules)
    visible = {}
    eps = {}
    for r in m.rules:
        if r.label == "":
            eps[(r.from_state, r.top)] = (r.to_state, r.push)
        else:
            visible[(r.from_state, r.top, r.label)] = (r.to_state, r.push)
    sigma = sorted(m.input_alphabet)

    out = set()
    start = (state, tuple(stack))
    seen = {start}
    queue = deque([(state, tuple(stack), 0)])
    while queue:
        st, sk, used = queue.popleft()
        if not sk:
            out.add(st)
            continue
        hit = eps.get((st, sk[0]))
        if hit is not None:
            nxt = (hit[0], hit[1] + sk[1:])
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt[0], nxt[1], used))
            continue
        if used == max_word_len:
            continue
        if not has_eps and len(sk) > max_word_len - used:
            continue  # each pop consumes input; emptying is out of reach
        for ch in sigma:
            hit = visible.get((st, sk[0], ch))
            if hit is None:
                continue
            nxt = (hit[0], hit[1] + sk[1:])
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt[0], nxt[1], used + 1))
    return frozenset(out)


def eps_pop_end(m, state, stack):
    """Endpoint of the ε-only pop chain across the whole stack, or None."""
    stack = tuple(stack)
    while stack:
        r = _find_rule(m.rules, state, stack[0], "")
        if r is None:
            return None
        state = r.to_state
        stack = r.push + stack[1:]
    return state


def sweep_agreement(m, predicate, max_len):
    """First word of length <= max_len where machine and predicate disagree,
    else None; walks the whole prefix tree of the input alphabet.

    Requires a completed machine (every node must have a successor)."""
    visible = m.visible
    eps = m.eps
    accepting = m.accepting
    sigma = sorted(m.input_alphabet)

    def close(state, stack, acc):
        while stack:
            nxt = eps.get((state, stack[0]))
            if nxt is None:
                break
            state = nxt
            stack = stack[1:]
            acc = acc or state in accepting
        return state, stack, acc

    state0, stack0, acc0 = close(
        m.start_state, (m.start_symbol,), m.start_state in accepting
    )
    todo = [("", state0, stack0, acc0)]
    checked = 0
    while todo:
        word, state, stack, acc = todo.pop()
        if acc != predicate(word):
            return word, checked
        checked += 1
        if len(word) == max_len:
            continue
        for ch in sigma:
            hit = visible.get((state, stack[0], ch))
            if hit is None:
                raise AssertionError(f"machine not completed: stuck after {word + ch!r}")
            st, push = hit
            st, sk, ac = close(st, push + stack[1:], st in accepting)
            todo.append((word + ch, st, sk, ac))
    return None, checked


def two_way_splits(word, part_predicate):
    """Brute-force check that `word` splits into two parts both satisfying
    part_predicate."""
    return any(
        part_predicate(word[:i]) and part_predicate(word[i:])
        for i in range(len(word) + 1)
    )


# Small raw machine descriptions owned by the tests (pre-completion).

LSHARP_RAW = {
    "states": ["q0", "q1", "qf"],
    "input_alphabet": ["0", "1"],
    "stack_alphabet": ["X0", "A0", "A"],
    "rules": [
        {"from": "q0", "top": "X0", "label": "0", "to": "q0", "push": ["A0", "X0"]},
        {"from": "q0", "top": "A0", "label": "0", "to": "q0", "push": ["A", "A0"]},
        {"from": "q0", "top": "A", "label": "0", "to": "q0", "push": ["A", "A"]},
        {"from": "q0", "top": "A0", "label": "1", "to": "qf", "push": []},
        {"from": "q0", "top": "A", "label": "1", "to": "q1", "push": []},
        {"from": "q1", "top": "A", "label": "1", "to": "q1", "push": []},
        {"from": "q1", "top": "A0", "label": "1", "to": "qf", "push": []},
    ],
    "start_state": "q0",
    "start_symbol": "X0",
    "accepting": ["qf"],
}

# Accepts 0^n 1 (n >= 2) by unwinding the stack with ε-pops after the 1.
# The chain alternates pe/hit while popping, so acceptance is decided by a
# configuration strictly inside the ε-chain while the run rests in the
# non-accepting `done`.
EPS_CHAIN_RAW = {
    "states": ["p", "pe", "hit", "done"],
    "input_alphabet": ["0", "1"],
    "stack_alphabet": ["X0", "A"],
    "rules": [
        {"from": "p", "top": "X0", "label": "0", "to": "p", "push": ["A", "X0"]},
        {"from": "p", "top": "A", "label": "0", "to": "p", "push": ["A", "A"]},
        {"from": "p", "top": "A", "label": "1", "to": "pe", "push": []},
        {"from": "p", "top": "X0", "label": "1", "to": "done", "push": []},
        {"from": "pe", "top": "A", "label": "", "to": "hit", "push": []},
        {"from": "hit", "top": "A", "label": "", "to": "pe", "push": []},
        {"from": "pe", "top": "X0", "label": "", "to": "done", "push": []},
        {"from": "hit", "top": "X0", "label": "", "to": "done", "push": []},
    ],
    "start_state": "p",
    "start_symbol": "X0",
    "accepting": ["hit"],
}


def eps_chain_predicate(w):
    return len(w) >= 3 and w[-1] == "1" and set(w[:-1]) <= {"0"}

EMPTY_LANGUAGE_RAW = {
    "states": ["q0"],
    "input_alphabet": ["0", "1"],
    "stack_alphabet": ["X0"],
    "rules": [],
    "start_state": "q0",
    "start_symbol": "X0",
    "accepting": [],
}

# The 0^n 1^n language again, but acceptance happens through an ε-pop of the
# bottom marker: the visible run never enters the accepting state directly.
LSHARP_EPS_RAW = {
    "states": ["q0", "q1", "qe", "qf"],
    "input_alphabet": ["0", "1"],
    "stack_alphabet": ["X0", "A0", "A"],
    "rules": [
        {"from": "q0", "top": "X0", "label": "0", "to": "q0", "push": ["A0", "X0"]},
        {"from": "q0", "top": "A0", "label": "0", "to": "q0", "push": ["A", "A0"]},
        {"from": "q0", "top": "A", "label": "0", "to": "q0", "push": ["A", "A"]},
        {"from": "q0", "top": "A0", "label": "1", "to": "qe", "push": []},
        {"from": "q0", "top": "A", "label": "1", "to": "q1", "push": []},
        {"from": "q1", "top": "A", "label": "1", "to": "q1", "push": []},
        {"from": "q1", "top": "A0", "label": "1", "to": "qe", "push": []},
        {"from": "qe", "top": "X0", "label": "", "to": "qf", "push": []},
    ],
    "start_state": "q0",
    "start_symbol": "X0",
    "accepting": ["qf"],
}
