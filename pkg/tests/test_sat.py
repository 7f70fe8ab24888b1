import random

import pytest
from hypothesis import given, strategies as st

from kbdbg.formulas import (And, Atom, FALSE, Iff, Implies, Not, Or, TRUE,
                            evaluate, parse_formula)
from kbdbg.sat import entails, is_satisfiable, solve, solve_clauses, to_cnf

from oracles import tt_entails, tt_satisfiable


def test_single_atom_is_a_single_unit_clause():
    cs = to_cnf([Atom("A")])
    assert cs.clauses == [(cs.atom_index["A"],)]


def test_top_level_conjunction_splits_without_fresh_atoms():
    cs = to_cnf([And(Atom("A"), Atom("B"))])
    a, b = cs.atom_index["A"], cs.atom_index["B"]
    assert sorted(cs.clauses) == sorted([(a,), (b,)])
    assert cs.n_vars == 2


def test_iff_conversion_preserves_satisfiability():
    # derived via truth-table oracle: A <-> B is satisfiable, and forcing
    # A=true, B=false contradicts it
    f = Iff(Atom("A"), Atom("B"))
    assert tt_satisfiable([f])
    assert not tt_satisfiable([f, Atom("A"), Not(Atom("B"))])
    cs = to_cnf([f])
    assert solve_clauses(cs.clauses) is not None
    forced = cs.clauses + [(cs.atom_index["A"],), (-cs.atom_index["B"],)]
    assert solve_clauses(forced) is None


def test_modus_ponens_clash_unsat():
    fs = [parse_formula(t) for t in ("A", "A -> B", "~B")]
    assert not is_satisfiable(fs)


def test_empty_set_is_satisfiable():
    assert is_satisfiable([])
    assert solve([]) == {}


def test_witness_satisfies_inputs():
    fs = [parse_formula(t) for t in ("A | B", "~A | C", "B -> ~C")]
    model = solve(fs)
    assert model is not None
    assert all(evaluate(f, model) for f in fs)


def test_entails_examples():
    A, B = Atom("A"), Atom("B")
    assert entails([A, Implies(A, B)], B)
    assert entails([], Or(A, Not(A)))
    assert not entails([A], B)


def test_constants():
    assert is_satisfiable([TRUE])
    assert not is_satisfiable([FALSE])
    assert not is_satisfiable([Atom("A"), Not(TRUE)])
    assert entails([FALSE], Atom("A"))


def _random_formula(rng, atom_names, depth):
    if depth == 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.05:
            return TRUE if rng.random() < 0.5 else FALSE
        return Atom(rng.choice(atom_names))
    kind = rng.randrange(5)
    if kind == 0:
        return Not(_random_formula(rng, atom_names, depth - 1))
    ctor = (And, Or, Implies, Iff)[kind - 1]
    return ctor(_random_formula(rng, atom_names, depth - 1),
                _random_formula(rng, atom_names, depth - 1))


def random_formula_set(seed, max_atoms=16, max_formulas=6, depth=3):
    rng = random.Random(seed)
    n_atoms = rng.randint(1, max_atoms)
    names = [f"P{i}" for i in range(n_atoms)]
    return [_random_formula(rng, names, depth)
            for _ in range(rng.randint(1, max_formulas))]


@pytest.mark.parametrize("seed", range(40))
def test_agrees_with_truth_table_enumeration(seed):
    fs = random_formula_set(seed, max_atoms=8)
    expected = tt_satisfiable(fs)
    model = solve(fs)
    assert (model is not None) == expected
    if model is not None:
        assert all(evaluate(f, model) for f in fs)


@pytest.mark.parametrize("seed", range(25))
def test_entailment_duality(seed):
    rng = random.Random(1000 + seed)
    premises = random_formula_set(seed, max_atoms=6, max_formulas=4)
    goal = _random_formula(rng, ["P0", "P1", "P2"], 2)
    assert entails(premises, goal) == (not is_satisfiable(list(premises) + [Not(goal)]))
    assert entails(premises, goal) == tt_entails(premises, goal)


formula_st = st.recursive(
    st.sampled_from([Atom("X"), Atom("Y"), Atom("Z"), TRUE, FALSE]),
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Implies, sub, sub),
        st.builds(Iff, sub, sub),
    ),
    max_leaves=12,
)


@given(st.lists(formula_st, min_size=1, max_size=4))
def test_sat_matches_oracle_property(fs):
    assert is_satisfiable(fs) == tt_satisfiable(fs)


def test_clause_count_stays_linear():
    # each connective contributes a constant number of definition clauses
    f = parse_formula("A1")
    for i in range(2, 40):
        f = Iff(f, Atom(f"A{i}"))
    cs = to_cnf([f])
    assert len(cs.clauses) <= 4 * 40 + 1
