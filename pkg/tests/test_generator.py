"""Planning and realization on the shipped grammar."""

import itertools
import json

import pytest

from src.cli import read_golden
from src.errors import (
    AspectOnState, DeterminerClash, FeatureClash, MissingActant, MissingLexeme, NoCircumstantTree,
    NoResidualStrategy,
)
from src.fstruct import FeatureStructure
from src.generator import (
    Strategy, adjoin_circumstants, apply_tma, generate, plan, realize_np, realize_nuclear,
)
from src.grammar import TMASpec
from src.resource_path import resource_path
from src.semgraph import parse_graph
from src.tagcore import DerivationBuilder, NodeKind, find_addresses, first_address, iter_nodes, node_at, tree_yield
from src.use_config import get_config_value

GOLDEN = read_golden(resource_path(get_config_value("golden_path")))
GENERATED = [fixture for fixture, expected in GOLDEN if not expected.startswith("!")]


def graph(nodes, relations=(), root=None):
    return parse_graph(json.dumps({
        "nodes": [{"id": node_id, "key": key, "attrs": attrs or {}} for node_id, key, attrs in nodes],
        "relations": [{"role": role, "from": source, "to": target} for role, source, target in relations],
        "root": root,
    }))


################
### PLANNING ###
################
def test_plan_attributive_sentence(grammar, load_fixture):
    realization = plan(load_fixture("pye-ba"), grammar)
    [sp] = realization.sentences
    assert sp.frame == "attributif"
    assert sp.actant_map == {"agent": "sujet", "recipient": "destinataire", "patient": "objet"}
    assert sp.actants == (("sujet", "pierre"), ("destinataire", "robert"), ("objet", "book"))
    assert sp.circumstants == ()
    assert realization.strategies == {
        0: Strategy.ACTANT, 1: Strategy.ACTANT, 2: Strategy.ACTANT, 3: Strategy.EPITHET,
    }
    [attachment] = realization.attachments_of("book")
    assert attachment.concept == "beautiful"


def test_plan_leftover_role_becomes_circumstant(grammar, load_fixture):
    realization = plan(load_fixture("i-pote"), grammar)
    [sp] = realization.sentences
    assert sp.frame == "transitif"
    assert sp.circumstants == (("recipient", "me"),)
    assert realization.strategies[3] is Strategy.CIRCUMSTANT
    assert realization.strategies[2] is Strategy.COMPLEMENT


def test_plan_object_relative(grammar, load_fixture):
    realization = plan(load_fixture("liv-relative"), grammar)
    assert [sp.head for sp in realization.sentences] == ["book"]
    [attachment] = realization.attachments_of("book")
    assert attachment.strategy is Strategy.RELATIVE
    assert attachment.clause.gap == "objet"
    assert attachment.clause.actants == (("sujet", "pierre"), ("destinataire", "robert"))


def test_parallel_relations_with_one_role(grammar, load_fixture):
    g = load_fixture("pye-ba-liv-de-fwa")
    realization = plan(g, grammar)
    assert realization.strategies == {
        0: Strategy.ACTANT, 1: Strategy.ACTANT, 2: Strategy.ACTANT, 3: Strategy.RELATIVE,
    }
    [attachment] = realization.attachments_of("book")
    assert (attachment.relation, attachment.clause.gap) == (3, "objet")
    assert attachment.clause.repeated == {"pierre", "robert"}
    assert generate(g, grammar).text == "Pyè ba Wobè an liv i ba i"


def test_plan_juxtaposes_a_second_predicate(grammar, load_fixture):
    realization = plan(load_fixture("juxtapose"), grammar)
    first, second = realization.sentences
    assert (first.head, second.head) == ("sleep", "eat")
    assert second.frame == "intransitif"
    assert "pierre" in second.repeated
    assert realization.strategies[1] is Strategy.JUXTAPOSE


@pytest.mark.parametrize("fixture", GENERATED)
def test_every_relation_gets_a_strategy(grammar, load_fixture, fixture):
    g = load_fixture(fixture)
    assert set(plan(g, grammar).strategies) == set(range(len(g.relations)))


def test_residual_relation_is_attached(grammar):
    g = graph(
        [("house", "house", {"determination": "defini"}), ("father", "father", None), ("me", "me", None)],
        [("possessor", "house", "father"), ("possessor", "father", "me"), ("possessor", "house", "me")],
        root="house",
    )
    realization = plan(g, grammar)
    assert realization.strategies == {0: Strategy.COMPLEMENT, 1: Strategy.COMPLEMENT, 2: Strategy.COMPLEMENT}
    assert realization.attachments_of("father")[0].repeated
    assert generate(g, grammar).text == "kay papa mwen mwen an"


##############
### ERRORS ###
##############
def test_missing_actant(grammar):
    with pytest.raises(MissingActant) as excinfo:
        generate(graph([("sleep", "sleep", None)]), grammar)
    assert (excinfo.value.role, excinfo.value.frame, excinfo.value.concept) == ("agent", "intransitif", "sleep")


def test_determination_on_a_proper_noun(grammar):
    g = graph([("sleep", "sleep", None), ("pierre", "Pierre", {"determination": "defini"})],
              [("agent", "sleep", "pierre")])
    with pytest.raises(DeterminerClash) as excinfo:
        generate(g, grammar)
    assert excinfo.value.concept == "pierre"


def test_unknown_concept(grammar):
    with pytest.raises(MissingLexeme) as excinfo:
        generate(graph([("unicorn", "unicorn", None)]), grammar)
    assert excinfo.value.concept == "unicorn"


def test_aspect_on_state_names_the_predicate(grammar, load_fixture):
    with pytest.raises(AspectOnState) as excinfo:
        generate(load_fixture("ka-ni"), grammar)
    assert excinfo.value.concept == "have"


def test_relation_without_strategy(grammar):
    g = graph([("book", "book", None), ("pierre", "Pierre", None)], [("agent", "book", "pierre")])
    with pytest.raises(NoResidualStrategy) as excinfo:
        generate(g, grammar)
    assert excinfo.value.concept == "book"


def test_circumstant_without_tree(grammar):
    g = graph([("sleep", "sleep", None), ("me", "me", None), ("house", "house", None)],
              [("agent", "sleep", "me"), ("possessor", "sleep", "house")])
    with pytest.raises(NoCircumstantTree) as excinfo:
        generate(g, grammar)
    assert (excinfo.value.role, excinfo.value.concept) == ("possessor", "house")


###################
### REALIZATION ###
###################
@pytest.mark.parametrize("lemma, tense, aspect, expected", [
    ("dòmi", "passe", "imperfectif", ["té", "ka", "dòmi"]),
    ("dòmi", "unmarked", "prospectif", ["ké", "dòmi"]),
    ("ni", "passe", "zero", ["té", "ni"]),
    ("gwo", "unmarked", "zero", ["gwo"]),
])
def test_apply_tma(grammar, lemma, tense, aspect, expected):
    builder = DerivationBuilder(grammar)
    label = apply_tma(grammar.entry(lemma), TMASpec(tense, aspect), grammar, builder)
    assert tree_yield(builder.derived(label)) == expected


def test_apply_tma_rejects_aspect_on_state(grammar):
    with pytest.raises(AspectOnState):
        apply_tma(grammar.entry("ni"), TMASpec("unmarked", "imperfectif"), grammar, DerivationBuilder(grammar))


def test_only_the_planned_slot_order_derives(grammar, load_fixture):
    g = load_fixture("pye-ba")
    realization = plan(g, grammar)
    sp = realization.sentences[0]

    derivable = []
    for order in itertools.permutations(sp.actants):
        builder = DerivationBuilder(grammar)
        predicate = apply_tma(grammar.entry("ba"), TMASpec(), grammar, builder, "attributif")
        sentence = builder.instantiate("frame_attributif")
        builder.graft(sentence, predicate)
        slots = find_addresses(builder.tree(sentence).root, lambda node: node.kind is NodeKind.SUBSTITUTION)
        assert slots == [(0,), (1, 1), (1, 2)]
        try:
            for address, (function, concept) in zip(slots, order):
                gn = realize_np(concept, realization, g, grammar, builder)
                builder.substitute(sentence, address, gn, FeatureStructure(fn=function))
        except FeatureClash:
            continue
        derivable.append(order)

    assert derivable == [sp.actants]


def test_attributive_word_order(grammar, load_fixture):
    [sentence] = generate(load_fixture("pye-ba"), grammar).sentences
    assert [token.lemma for token in sentence.tokens] == ["Pyè", "ba", "Wobè", None, "bel", "liv"]
    assert sentence.text == "Pyè ba Wobè an bel liv"


def test_postposed_determiner_comes_last(grammar, load_fixture):
    [sentence] = generate(load_fixture("kay-papa"), grammar).sentences
    last = sentence.tokens[-1]
    assert last.text == "an"
    assert last.tree.startswith("det_defini#")
    assert [token.text for token in sentence.tokens[:-1]] == ["kay", "papa", "mwen"]


def test_circumstant_adjoins_above_the_saturated_predicate(grammar, load_fixture):
    [sentence] = generate(load_fixture("i-pote"), grammar).sentences
    tree = sentence.finalized
    gpred = node_at(tree, first_address(tree, "GPred"))
    assert [child.category for child in gpred.children] == ["GPred", "GPrep"]
    assert gpred.children[0].top.symbol("sature") == "plus"


def test_no_circumstants_leaves_the_sentence_alone(grammar, load_fixture):
    g = load_fixture("mwen-domi")
    realization = plan(g, grammar)
    sp = realization.sentences[0]
    builder = DerivationBuilder(grammar)
    sentence = realize_nuclear(sp, realization, g, grammar, builder)
    before, steps = builder.derived(sentence), len(builder.steps)
    assert adjoin_circumstants(sentence, sp, realization, g, grammar, builder) == sentence
    assert len(builder.steps) == steps
    assert builder.derived(sentence) == before


@pytest.mark.parametrize("fixture", GENERATED)
def test_no_aspect_particle_on_a_state(grammar, load_fixture, fixture):
    for sentence in generate(load_fixture(fixture), grammar).sentences:
        for _, node in iter_nodes(sentence.finalized):
            if node.category != "Predbar":
                continue
            particle, predicate = node.children
            assert not (particle.token in ("ka", "ké") and predicate.top.symbol("type") == "etat")


def test_generation_is_deterministic(grammar, load_fixture):
    first = generate(load_fixture("liv-relative"), grammar)
    second = generate(load_fixture("liv-relative"), grammar)
    assert first.text == second.text
    assert [d.as_dict() for d in first.derivations] == [d.as_dict() for d in second.derivations]
    assert first.sentences[0].finalized == second.sentences[0].finalized
