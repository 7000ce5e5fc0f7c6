import random

import pytest

from src.fstruct import (
    EMPTY, Atom, Bindings, Failure, FeatureStructure, Var, overwrite, parse_value, remove, resolve,
    satisfies, subsumes, unify,
)

FEATURES = ("aspect", "cadre", "harm", "type")
VALUES = ("a", "b", "c")
VARIABLES = ("X", "Y", "Z", "W")
CASES = 1000


def random_fs(rng: random.Random, ground: bool = False) -> FeatureStructure:
    entries = {}
    for name in FEATURES:
        if rng.random() < 0.5:
            continue
        if not ground and rng.random() < 0.4:
            entries[name] = Var(rng.choice(VARIABLES))
        else:
            entries[name] = Atom(rng.choice(VALUES))
    return FeatureStructure(entries)


def random_chain(rng: random.Random) -> Bindings:
    """Bindings where some variables reach their value through other variables."""
    order = list(VARIABLES)
    rng.shuffle(order)
    table = {}
    for var, nxt in zip(order, order[1:rng.randint(1, len(order))]):
        table[Var(var)] = Var(nxt)
    if table and rng.random() < 0.5:
        last = next(var for var in reversed(order) if Var(var) not in table)
        table[Var(last)] = Atom(rng.choice(VALUES))
    return Bindings(table)


def shape(fs: FeatureStructure) -> tuple:
    """Structure with variables numbered by first occurrence, so results that differ
    only in variable names compare equal."""
    numbering = {}
    return tuple(
        (name, str(value)) if isinstance(value, Atom) else (name, f"?{numbering.setdefault(value, len(numbering))}")
        for name, value in fs.items()
    )


def test_parse_value():
    assert parse_value("plus") == Atom("plus")
    assert parse_value("A") == Var("A")


def test_constructor_keywords_and_rendering():
    fs = FeatureStructure(type="proces", harm="A")
    assert fs["type"] == Atom("proces")
    assert fs["harm"] == Var("A")
    assert str(fs) == "{harm=A, type=proces}"
    assert list(fs) == ["harm", "type"]
    assert fs.symbol("type") == "proces"
    assert fs.symbol("harm") is None
    assert fs.variables() == {Var("A")}


def test_structures_are_frozen_and_hashable():
    fs = FeatureStructure(type="proces")
    assert fs.featstruct.frozen()
    assert hash(fs) == hash(FeatureStructure({"type": Atom("proces")}))
    with pytest.raises(ValueError):
        fs.featstruct["type"] = Atom("etat")


def test_unify_merges_and_binds():
    merged, env = unify(FeatureStructure(harm="A", det="def"), FeatureStructure(harm="la"))
    assert resolve(merged, env) == FeatureStructure(harm="la", det="def")
    assert env.walk(Var("A")) == Atom("la")


def test_unify_leaves_inputs_and_bindings_untouched():
    a, b = FeatureStructure(harm="A"), FeatureStructure(harm="la")
    env = Bindings()
    unify(a, b, env)
    assert a == FeatureStructure(harm="A")
    assert len(env) == 0


def test_unify_clash_is_a_falsy_value():
    outcome = unify(FeatureStructure(aspect="zero"), FeatureStructure(aspect="imperfectif"))
    assert isinstance(outcome, Failure)
    assert not outcome
    assert outcome.feature == "aspect"
    assert "zero" in str(outcome)


def test_clash_names_first_feature_alphabetically():
    outcome = unify(FeatureStructure(type="etat", aspect="zero"), FeatureStructure(type="proces", aspect="ka"))
    assert outcome.feature == "aspect"


def test_shared_variable_propagates_clash():
    env = unify(FeatureStructure(a="X"), FeatureStructure(a="plus"))[1]
    outcome = unify(FeatureStructure(b="X"), FeatureStructure(b="minus"), env)
    assert isinstance(outcome, Failure)
    assert (outcome.left, outcome.right) == (Atom("plus"), Atom("minus"))


def test_walk_follows_chains():
    env = Bindings({Var("Y"): Var("X"), Var("X"): Atom("a")})
    assert env.walk(Var("Y")) == Atom("a")
    assert env.walk(Var("Z")) == Var("Z")
    assert env.walk(Atom("b")) == Atom("b")
    assert resolve(FeatureStructure(harm="Y", type="Z"), env) == FeatureStructure(harm="a", type="Z")


def test_unify_sees_through_chains():
    env = Bindings({Var("Y"): Var("X"), Var("X"): Atom("a")})
    assert isinstance(unify(FeatureStructure(harm="Y"), FeatureStructure(harm="b"), env), Failure)
    merged, _ = unify(FeatureStructure(harm="Y"), FeatureStructure(harm="a"), env)
    assert merged == FeatureStructure(harm="a")


def test_subsumes():
    assert subsumes(FeatureStructure(harm="A"), FeatureStructure(harm="la", det="def"))
    assert not subsumes(FeatureStructure(harm="la", det="def"), FeatureStructure(harm="la"))
    assert not subsumes(FeatureStructure(harm="a"), FeatureStructure(harm="la"))


def test_overwrite_remove_satisfies():
    fs = FeatureStructure(cadre="C")
    assert overwrite(fs, "cadre", Atom("transitif")).symbol("cadre") == "transitif"
    assert remove(fs, "cadre") == EMPTY
    assert remove(fs, "absent") is fs
    assert satisfies(fs, {"cadre"}) is None
    assert satisfies(fs, {"sature", "cadre"}) == "sature"


def test_failure_at_keeps_first_address():
    failure = Failure("harm", Atom("a"), Atom("la")).at((0, 1))
    assert failure.address == (0, 1)
    assert failure.at((2,)).address == (0, 1)


class TestUnificationLaws:
    """Randomized flat structures and variable chains, seeded for reproducibility."""

    @pytest.fixture
    def rng(self):
        return random.Random(1302)

    def test_commutativity(self, rng):
        for _ in range(CASES):
            a, b, env = random_fs(rng), random_fs(rng), random_chain(rng)
            left, right = unify(a, b, env), unify(b, a, env)
            assert isinstance(left, Failure) == isinstance(right, Failure)
            if isinstance(left, Failure):
                continue
            assert shape(resolve(*left)) == shape(resolve(*right))

    def test_commutativity_on_ground_structures(self, rng):
        for _ in range(CASES):
            a, b = random_fs(rng, ground=True), random_fs(rng, ground=True)
            left, right = unify(a, b), unify(b, a)
            if not isinstance(left, Failure):
                assert left[0] == right[0]

    def test_idempotence(self, rng):
        for _ in range(CASES):
            a, env = random_fs(rng), random_chain(rng)
            merged, after = unify(a, a, env)
            assert resolve(merged, after) == resolve(a, env)
            for name in VARIABLES:
                assert after.walk(Var(name)) == env.walk(Var(name))

    def test_result_absorbs_both_inputs(self, rng):
        for _ in range(CASES):
            a, b, env = random_fs(rng), random_fs(rng), random_chain(rng)
            outcome = unify(a, b, env)
            if isinstance(outcome, Failure):
                continue
            merged, env = outcome
            c = resolve(merged, env)
            for part in (a, b):
                again, again_env = unify(c, part, env)
                assert resolve(again, again_env) == c
                assert subsumes(part, c, env)

    def test_monotonicity(self, rng):
        for _ in range(CASES):
            a, b, env = random_fs(rng), random_fs(rng), random_chain(rng)
            outcome = unify(a, b, env)
            if isinstance(outcome, Failure):
                continue
            merged, after = outcome
            resolved = resolve(merged, after)
            assert set(merged) == set(a) | set(b)
            for part in (a, b):
                for name, value in resolve(part, env).items():
                    if isinstance(value, Atom):
                        assert resolved[name] == value

    def test_failure_symmetry(self, rng):
        for _ in range(CASES):
            a, b = random_fs(rng, ground=True), random_fs(rng, ground=True)
            left, right = unify(a, b), unify(b, a)
            assert isinstance(left, Failure) == isinstance(right, Failure)
            if isinstance(left, Failure):
                assert left.feature == right.feature
                assert (left.left, left.right) == (right.right, right.left)
