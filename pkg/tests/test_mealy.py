from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcflab import corpus
from dcflab.dpda import InvalidMachineError
from dcflab.mealy import (
    Dfa,
    LanguageOracle,
    OracleMealyMachine,
    TruthTable,
    complement_machine,
    compose,
    constant_table,
    evaluate,
    identity_machine,
    lift_dfa,
    mealy_to_document,
    oracle_from_dpda,
    oracle_from_machine,
    refute_simplicity_LR,
    restrict_regular,
    transduce,
    validate_mealy,
)

import bruteforce as bf


def words(alphabet, max_len):
    return list(bf.iter_words(alphabet, max_len))


def lsharp_oracle():
    return corpus.oracle_of(corpus.get_entry("lsharp"))


def l1_oracle():
    return corpus.oracle_of(corpus.get_entry("l1_le"))


IDENTITY_DOC = {
    "states": ["q"],
    "input_alphabet": ["0", "1"],
    "oracle_alphabet": ["0", "1"],
    "delta": [
        {"from": "q", "on": "0", "to": "q"},
        {"from": "q", "on": "1", "to": "q"},
    ],
    "lambda": [
        {"from": "q", "on": "0", "out": "0"},
        {"from": "q", "on": "1", "out": "1"},
    ],
    "start_state": "q",
    "queries": [{"state": "q", "suffixes": [""], "table": [0, 1]}],
}


class TestValidation:
    def test_valid_document(self):
        m = validate_mealy(IDENTITY_DOC)
        assert m.per_state["q"][0] == ("",)

    def test_arity_mismatch(self):
        doc = dict(IDENTITY_DOC)
        doc["queries"] = [{"state": "q", "suffixes": ["", "1"], "table": [0, 1]}]
        with pytest.raises(InvalidMachineError) as excinfo:
            validate_mealy(doc)
        assert any(v.kind == "ArityMismatch" for v in excinfo.value.violations)

    def test_lambda_domain_mismatch(self):
        doc = dict(IDENTITY_DOC)
        doc["lambda"] = IDENTITY_DOC["lambda"] + [{"from": "q", "on": "0", "out": "0"}]
        doc["lambda"] = [{"from": "q", "on": "0", "out": "0"}]  # missing the "1" entry
        with pytest.raises(InvalidMachineError) as excinfo:
            validate_mealy(doc)
        assert any(v.kind == "LambdaDomainMismatch" for v in excinfo.value.violations)

    def test_undeclared_output_symbol(self):
        doc = dict(IDENTITY_DOC)
        doc["lambda"] = [
            {"from": "q", "on": "0", "out": "x"},
            {"from": "q", "on": "1", "out": "1"},
        ]
        with pytest.raises(InvalidMachineError) as excinfo:
            validate_mealy(doc)
        assert any(v.kind == "UndeclaredSymbol" for v in excinfo.value.violations)

    def test_document_round_trip(self):
        m = validate_mealy(IDENTITY_DOC)
        again = validate_mealy(mealy_to_document(m))
        assert again == m

    def test_truth_table_row_count(self):
        with pytest.raises(ValueError):
            TruthTable(2, (True, False))


class TestTransduce:
    def test_empty_word(self):
        m = identity_machine("01")
        assert transduce(m, "") == ("q", "")

    def test_identity_copies(self):
        m = identity_machine("01")
        for w in words("01", 6):
            assert transduce(m, w) == ("q", w)

    def test_undefined_transition_rejects(self):
        m = validate_mealy(IDENTITY_DOC)
        partial = OracleMealyMachine(
            states=m.states,
            input_alphabet=m.input_alphabet,
            oracle_alphabet=m.oracle_alphabet,
            delta={("q", "0"): "q"},
            outputs={("q", "0"): "0"},
            start_state="q",
            per_state=m.per_state,
        )
        assert transduce(partial, "01") is None

    @given(st.text(alphabet="01", max_size=10), st.sampled_from("01"))
    @settings(max_examples=50, deadline=None)
    def test_transduction_morphism(self, w, a):
        # one step extends the fold: delta/lambda of (w + a) from the w-state
        m = identity_machine("01")
        state, out = transduce(m, w)
        assert transduce(m, w + a) == (m.delta[(state, a)], out + m.outputs[(state, a)])


class TestEvaluate:
    def test_identity_is_reflexive_reduction(self):
        m = identity_machine("01")
        oracle = lsharp_oracle()
        for w in words("01", 10):
            assert evaluate(m, oracle, w) == oracle.membership(w)

    def test_identity_reflexive_for_every_corpus_oracle(self):
        for name in corpus.names():
            entry = corpus.get_entry(name)
            alphabet = sorted(entry.machine.input_alphabet)
            m = identity_machine(alphabet)
            oracle = corpus.oracle_of(entry)
            limit = 10 if len(alphabet) == 2 else 7
            for w in words(alphabet, limit):
                assert evaluate(m, oracle, w) == oracle.membership(w), (name, w)

    def test_constant_zero_tables_reject_all(self):
        m = identity_machine("01")
        dead = OracleMealyMachine(
            states=m.states,
            input_alphabet=m.input_alphabet,
            oracle_alphabet=m.oracle_alphabet,
            delta=m.delta,
            outputs=m.outputs,
            start_state=m.start_state,
            per_state={"q": ((), constant_table(False))},
        )
        assert not any(evaluate(dead, lsharp_oracle(), w) for w in words("01", 6))

    def test_oracle_from_dpda_matches_predicate(self):
        entry = corpus.get_entry("lsharp")
        oracle = oracle_from_dpda(entry.machine)
        for w in words("01", 8):
            assert oracle.membership(w) == entry.predicate(w)


class TestCompose:
    def test_identity_with_identity(self):
        ident = identity_machine("01")
        comp = compose(ident, ident)
        oracle = lsharp_oracle()
        for w in words("01", 8):
            assert evaluate(comp, oracle, w) == evaluate(ident, oracle, w)

    def test_oracle_equivalence_identity_pair(self):
        a1 = identity_machine("01")
        a2 = identity_machine("01")
        oracle = l1_oracle()
        middle = oracle_from_machine(a2, oracle)
        comp = compose(a1, a2)
        for w in words("01", 8):
            assert evaluate(comp, oracle, w) == evaluate(a1, middle, w)

    def test_state_count_bounded_by_product(self):
        a1 = identity_machine("01")
        a2 = identity_machine("01")
        comp = compose(a1, a2)
        assert len(comp.states) <= len(a1.states) * len(a2.states)

    def test_alphabet_mismatch_rejected(self):
        with pytest.raises(ValueError):
            compose(identity_machine("01"), identity_machine("ab"))

    def test_back_end_dies_mid_output(self):
        # front machine flips bits and accepts exactly when its single query
        # fails; back machine only survives 0s
        front = OracleMealyMachine(
            states=frozenset({"p"}),
            input_alphabet=frozenset("01"),
            oracle_alphabet=frozenset("01"),
            delta={("p", "0"): "p", ("p", "1"): "p"},
            outputs={("p", "0"): "1", ("p", "1"): "0"},
            start_state="p",
            per_state={"p": (("",), TruthTable(1, (True, False)))},
        )
        back = OracleMealyMachine(
            states=frozenset({"r"}),
            input_alphabet=frozenset("01"),
            oracle_alphabet=frozenset("01"),
            delta={("r", "0"): "r"},
            outputs={("r", "0"): "0"},
            start_state="r",
            per_state={"r": (("",), TruthTable(1, (False, True)))},
        )
        oracle = lsharp_oracle()
        middle = oracle_from_machine(back, oracle)
        comp = compose(front, back)
        for w in words("01", 7):
            assert evaluate(comp, oracle, w) == evaluate(front, middle, w), w

    def test_back_end_dies_inside_suffix(self):
        front = OracleMealyMachine(
            states=frozenset({"p"}),
            input_alphabet=frozenset("01"),
            oracle_alphabet=frozenset("01"),
            delta={("p", "0"): "p"},
            outputs={("p", "0"): "0"},
            start_state="p",
            # accepts exactly when both queries come back negative
            per_state={"p": (("1", ""), TruthTable(2, (True, False, False, False)))},
        )
        back = OracleMealyMachine(
            states=frozenset({"r"}),
            input_alphabet=frozenset("01"),
            oracle_alphabet=frozenset("01"),
            delta={("r", "0"): "r"},
            outputs={("r", "0"): "0"},
            start_state="r",
            per_state={"r": (("",), TruthTable(1, (False, True)))},
        )
        oracle = lsharp_oracle()
        middle = oracle_from_machine(back, oracle)
        comp = compose(front, back)
        for w in ["", "0", "00", "000"]:
            assert evaluate(comp, oracle, w) == evaluate(front, middle, w), w


class TestComplement:
    @pytest.mark.parametrize("oracle_name", ["lsharp", "l1_le"])
    def test_pointwise_negation(self, oracle_name):
        oracle = corpus.oracle_of(corpus.get_entry(oracle_name))
        m = identity_machine("01")
        comp = complement_machine(m)
        for w in words("01", 10):
            assert evaluate(comp, oracle, w) == (not evaluate(m, oracle, w))

    def test_involution(self):
        m = identity_machine("01")
        twice = complement_machine(complement_machine(m))
        oracle = lsharp_oracle()
        for w in words("01", 10):
            assert evaluate(twice, oracle, w) == evaluate(m, oracle, w)

    def test_sink_path_accepts(self):
        # a machine with no transitions at all rejects everything, so its
        # complement accepts everything, including via the fresh sink
        m = OracleMealyMachine(
            states=frozenset({"q"}),
            input_alphabet=frozenset("01"),
            oracle_alphabet=frozenset("01"),
            delta={},
            outputs={},
            start_state="q",
            per_state={"q": ((), constant_table(False))},
        )
        comp = complement_machine(m)
        oracle = lsharp_oracle()
        assert evaluate(comp, oracle, "10")
        assert evaluate(comp, oracle, "")


def even_length_dfa():
    return Dfa(
        states=frozenset({"e", "o"}),
        alphabet=frozenset("01"),
        transitions={
            ("e", "0"): "o",
            ("e", "1"): "o",
            ("o", "0"): "e",
            ("o", "1"): "e",
        },
        start="e",
        accepting=frozenset({"e"}),
    )


def all_accepting_dfa():
    return Dfa(
        states=frozenset({"s"}),
        alphabet=frozenset("01"),
        transitions={("s", "0"): "s", ("s", "1"): "s"},
        start="s",
        accepting=frozenset({"s"}),
    )


def nothing_dfa():
    return Dfa(
        states=frozenset({"s"}),
        alphabet=frozenset("01"),
        transitions={("s", "0"): "s", ("s", "1"): "s"},
        start="s",
        accepting=frozenset(),
    )


class TestRestrictRegular:
    def test_all_accepting_changes_nothing(self):
        m = identity_machine("01")
        oracle = lsharp_oracle()
        restricted = restrict_regular(m, all_accepting_dfa())
        for w in words("01", 8):
            assert evaluate(restricted, oracle, w) == evaluate(m, oracle, w)

    def test_even_length_conjunction(self):
        m = identity_machine("01")
        oracle = lsharp_oracle()
        d = even_length_dfa()
        restricted = restrict_regular(m, d)
        for w in words("01", 10):
            assert evaluate(restricted, oracle, w) == (
                evaluate(m, oracle, w) and len(w) % 2 == 0
            )

    def test_empty_language_is_constant_false(self):
        m = identity_machine("01")
        restricted = restrict_regular(m, nothing_dfa())
        oracle = lsharp_oracle()
        assert not any(evaluate(restricted, oracle, w) for w in words("01", 6))

    def test_dfa_must_be_total(self):
        with pytest.raises(InvalidMachineError):
            Dfa(
                states=frozenset({"s"}),
                alphabet=frozenset("01"),
                transitions={("s", "0"): "s"},
                start="s",
                accepting=frozenset(),
            )


def zero_one_star_dfa():
    # words of the form (01)*
    return Dfa(
        states=frozenset({"even", "saw0", "dead"}),
        alphabet=frozenset("01"),
        transitions={
            ("even", "0"): "saw0",
            ("even", "1"): "dead",
            ("saw0", "0"): "dead",
            ("saw0", "1"): "even",
            ("dead", "0"): "dead",
            ("dead", "1"): "dead",
        },
        start="even",
        accepting=frozenset({"even"}),
    )


class TestLiftDfa:
    def test_accepts_like_the_dfa(self):
        lifted = lift_dfa(zero_one_star_dfa(), "01")
        oracle = lsharp_oracle()
        assert evaluate(lifted, oracle, "0101")
        assert not evaluate(lifted, oracle, "010")

    def test_oracle_independence(self):
        lifted = lift_dfa(zero_one_star_dfa(), "01")
        first = lsharp_oracle()
        second = l1_oracle()
        for w in words("01", 10):
            assert evaluate(lifted, first, w) == evaluate(lifted, second, w)

    def test_rejecting_start_rejects_epsilon(self):
        lifted = lift_dfa(nothing_dfa(), "01")
        assert not evaluate(lifted, lsharp_oracle(), "")


# Candidate machines for the marked-palindrome refutation, all over input
# {a, b, c}.  None of them can be a correct reduction; each gets caught by a
# prefix collision.

def copier_machine():
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


def silent_machine():
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


def length_counter_machine():
    # counts letters as 0s, then counts letters after the c as 1s: correct
    # on a^m c a^m but blind to the letters themselves
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


def wide_tree_machine(depth=6):
    # pairwise distinct states for every {a,b}-prefix up to `depth`: no
    # collisions exist within that bound, so refutation must give up
    states = {""}
    delta = {}
    outputs = {}
    for n in range(depth):
        for prefix in map("".join, product("ab", repeat=n)):
            states.add(prefix)
            for s in "ab":
                states.add(prefix + s)
                delta[(prefix, s)] = prefix + s
                outputs[(prefix, s)] = ""
    return OracleMealyMachine(
        states=frozenset(states),
        input_alphabet=frozenset("abc"),
        oracle_alphabet=frozenset("01"),
        delta=delta,
        outputs=outputs,
        start_state="",
        per_state={q: ((), constant_table(False)) for q in states},
    )


def lr_predicate(w):
    i = w.find("c")
    if i < 0 or w.find("c", i + 1) >= 0:
        return False
    return w[:i] == w[i + 1 :][::-1] and set(w[:i]) <= {"a", "b"}


class TestRefuteLR:
    @pytest.mark.parametrize(
        "build", [copier_machine, silent_machine, length_counter_machine]
    )
    def test_candidates_are_refuted(self, build):
        machine = build()
        word = refute_simplicity_LR(machine, k_max=6)
        assert word is not None
        # shape w1 c w2^R with w1, w2 over {a,b}
        i = word.index("c")
        assert set(word[:i]) <= {"a", "b"} and set(word[i + 1 :]) <= {"a", "b"}
        # confirmed misclassification against the direct predicate
        oracle = LanguageOracle(frozenset("01abc"), corpus.get_entry("lsharp").predicate)
        assert evaluate(machine, oracle, word) != lr_predicate(word)

    def test_no_collision_within_bound_gives_none(self):
        assert refute_simplicity_LR(wide_tree_machine(), k_max=5) is None
