"""Graph to text: plan one nuclear sentence per predicate, build noun phrases and
TMA-marked predicates, adjoin circumstants, then attach or juxtapose whatever the
nuclear sentences left over.

Every tree is built through a DerivationBuilder so each sentence comes with the
derivation that replays it.
"""

from __future__ import annotations

import logging

from collections import defaultdict
from collections.abc import Iterator, Mapping
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import StrEnum

from src.constants import (
    ANAPHOR_LEMMA, ASPECT_TREES, CIRCUMSTANT, CIRCUMSTANT_TMA, COMPLEMENT, COMPLEMENT_TREE,
    DEFAULT_DEGREE, DEFAULT_PROCESS_ASPECT, DEFAULT_TENSE, EPITHET_TREE, MODIFIER,
    NAMED_DEFINITE_TREE, NBAR_TREE, PROCESS, RELATIVE_GAP_FUNCTION, RELATIVE_TREE, STATE_ASPECT,
    TENSE_TREES, THIRD_PERSON,
)
from src.errors import (
    DeterminerClash, FeatureClash, KreyolError, MissingActant, MissingLexeme, NoCircumstantTree,
    NoFrameFits, NoResidualStrategy,
)
from src.fstruct import Atom, Failure, FeatureStructure
from src.grammar import (
    DeterminationSpec, FrameSpec, Grammar, LexicalEntry, TMASpec, determiner_trees, frames_of,
    select_entries, tma_markers,
)
from src.semgraph import ConceptGraph, ConceptNode, CoverTree, cover_tree
from src.surface import SurfaceToken, join_sentences, surface
from src.tagcore import (
    Derivation, DerivationBuilder, TreeNode, finalize, first_address, linearize, node_at, slot_address,
)

logger = logging.getLogger(__name__)


class Strategy(StrEnum):
    ACTANT = "actant"
    CIRCUMSTANT = "circumstant"
    EPITHET = "epithet"
    COMPLEMENT = "complement"
    RELATIVE = "relative"
    JUXTAPOSE = "juxtapose"


@dataclass(frozen=True)
class SentencePlan:
    """One nuclear sentence. A plan without a frame is a bare noun phrase.

    `actants` lists (slot function, concept id) in the frame's slot order, the
    relativized function excluded when `gap` is set. Concepts in `repeated` were
    already realized elsewhere and come back as an anaphor or a bare GN.
    """
    head: str
    frame: str | None = None
    actant_map: Mapping[str, str] = field(default_factory=dict)
    actants: tuple[tuple[str, str], ...] = ()
    circumstants: tuple[tuple[str, str], ...] = ()
    gap: str | None = None
    repeated: frozenset[str] = frozenset()


@dataclass(frozen=True)
class NominalAttachment:
    """Material adjoined to a noun bar: an epithet or complement concept, or a
    relative clause whose plan is `clause`."""
    strategy: Strategy
    role: str
    concept: str
    relation: int
    clause: SentencePlan | None = None
    repeated: bool = False


@dataclass(frozen=True)
class RealizationPlan:
    sentences: tuple[SentencePlan, ...]
    attachments: Mapping[str, tuple[NominalAttachment, ...]]
    strategies: Mapping[int, Strategy]

    def attachments_of(self, concept: str) -> tuple[NominalAttachment, ...]:
        return self.attachments.get(concept, ())


@dataclass(frozen=True)
class RealizedSentence:
    plan: SentencePlan
    root: str
    derivation: Derivation
    derived: TreeNode
    finalized: TreeNode
    tokens: tuple[SurfaceToken, ...]
    text: str


@dataclass(frozen=True)
class GenerationResult:
    text: str
    derivations: tuple[Derivation, ...]
    sentences: tuple[RealizedSentence, ...]


@contextmanager
def at_concept(concept: str | None) -> Iterator[None]:
    """Stamp errors escaping the block with the concept being realized, unless an
    inner block already did."""
    try:
        yield
    except KreyolError as e:
        if e.concept is None:
            e.concept = concept
        raise


def _first_entry(node: ConceptNode, grammar: Grammar) -> LexicalEntry:
    entries = select_entries(node.concept_key, grammar)
    if not entries:
        raise MissingLexeme(f"no entry realizes '{node.concept_key}'", node.id)
    return entries[0]


def is_predicate(node: ConceptNode, grammar: Grammar) -> bool:
    return _first_entry(node, grammar).category == "Pred"


################
### PLANNING ###
################
class _Planner:
    def __init__(self, graph: ConceptGraph, grammar: Grammar):
        self.graph = graph
        self.grammar = grammar
        self.tree: CoverTree = cover_tree(graph, grammar)
        self.sentences: list[SentencePlan] = []
        self.attachments: dict[str, list[NominalAttachment]] = defaultdict(list)
        self.strategies: dict[int, Strategy] = {}

    def predicate(self, concept: str) -> bool:
        return is_predicate(self.graph.node(concept), self.grammar)

    def run(self) -> RealizationPlan:
        root = self.tree.root
        if self.predicate(root):
            self.visit_predicate(root)
        else:
            self.sentences.append(SentencePlan(root))
            self.visit_nominal(root)

        for index in self.tree.residual:
            self.attach_residual(index)

        return RealizationPlan(
            tuple(self.sentences),
            {concept: tuple(items) for concept, items in self.attachments.items()},
            dict(sorted(self.strategies.items())),
        )

    def forward_children(self, concept: str) -> list[tuple[str, str, int]]:
        """(role, child, relation) for tree children a predicate points to; anything
        pointing at the predicate from below the tree has no realization."""
        present = []
        for edge in self.tree.children_of(concept):
            relation = self.graph.relations[edge.relation]
            if not edge.forward:
                raise NoResidualStrategy(relation, concept)
            if self.predicate(edge.child):
                raise NoResidualStrategy(relation, edge.child)
            present.append((relation.role, edge.child, edge.relation))
        return present

    def fill(self, frame: FrameSpec, present: list[tuple[str, str, int]],
             gap: str | None) -> list[tuple[str, str, str, int]] | None:
        """Slot assignment (function, role, concept, relation) or None when a slot stays empty."""
        if gap is not None and (frame.relative is None or gap not in frame.slots):
            return None
        used = set()
        assignment = []
        for function in frame.slots:
            if function == gap:
                continue
            for position, (role, concept, index) in enumerate(present):
                if position not in used and self.grammar.function_of(role) == function:
                    used.add(position)
                    assignment.append((function, role, concept, index))
                    break
            else:
                return None
        return assignment

    def clause(self, head: str, present: list[tuple[str, str, int]], gap: str | None = None,
               repeated: frozenset[str] = frozenset()) -> tuple[SentencePlan, dict[int, Strategy]]:
        """Choose a frame for `head` and split the present roles into actants and circumstants."""
        with at_concept(head):
            entry = _first_entry(self.graph.node(head), self.grammar)
            frames = [self.grammar.frames[name] for name in frames_of(entry)]
            complete = [frame for frame in frames if frame.complete]
            if not complete:
                raise NoFrameFits(f"'{entry.lemma}' has no complete frame")

            best = None
            for frame in complete:
                assignment = self.fill(frame, present, gap)
                if assignment is not None and (best is None or len(assignment) > len(best[1])):
                    best = (frame, assignment)
            if best is None and gap is not None:
                raise NoFrameFits(f"no frame of '{entry.lemma}' relativizes its {gap}")
            if best is None:
                frame = complete[0]
                filled = {function for function, *_ in self.fill_partial(frame, present)}
                missing = next(function for function in frame.slots if function not in filled and function != gap)
                roles = self.grammar.roles_for(missing)
                raise MissingActant(roles[0] if roles else missing, frame.name)

        frame, assignment = best
        used = {index for *_, index in assignment}
        strategies = {index: Strategy.ACTANT for index in used}
        circumstants = []
        for role, concept, index in present:
            if index not in used:
                circumstants.append((role, concept))
                strategies[index] = Strategy.CIRCUMSTANT

        sp = SentencePlan(
            head=head,
            frame=frame.name,
            actant_map={role: function for function, role, _, _ in assignment},
            actants=tuple((function, concept) for function, _, concept, _ in assignment),
            circumstants=tuple(circumstants),
            gap=gap,
            repeated=repeated,
        )
        return sp, strategies

    def fill_partial(self, frame: FrameSpec, present: list[tuple[str, str, int]]) -> list[tuple[str, str]]:
        used = set()
        filled = []
        for function in frame.slots:
            for position, (role, _, _) in enumerate(present):
                if position not in used and self.grammar.function_of(role) == function:
                    used.add(position)
                    filled.append((function, role))
                    break
        return filled

    def visit_predicate(self, head: str):
        present = self.forward_children(head)
        sp, strategies = self.clause(head, present)
        self.sentences.append(sp)
        self.strategies.update(strategies)
        for _, child, _ in present:
            self.visit_nominal(child)

    def visit_nominal(self, concept: str):
        for edge in self.tree.children_of(concept):
            relation = self.graph.relations[edge.relation]
            child = edge.child
            if not edge.forward:
                if not self.predicate(child):
                    raise NoResidualStrategy(relation, concept)
                present = self.forward_children(child)
                self.embed(child, (relation.role, concept, edge.relation), present)
                for _, grandchild, _ in present:
                    self.visit_nominal(grandchild)
            elif self.modifies(relation.role, child):
                below = self.tree.children_of(child)
                if below:
                    raise NoResidualStrategy(self.graph.relations[below[0].relation], child)
                self.attach(concept, NominalAttachment(Strategy.EPITHET, relation.role, child, edge.relation))
            elif self.complements(relation.role, child):
                self.attach(concept, NominalAttachment(Strategy.COMPLEMENT, relation.role, child, edge.relation))
                self.visit_nominal(child)
            else:
                raise NoResidualStrategy(relation, concept)

    def modifies(self, role: str, concept: str) -> bool:
        if self.grammar.usage(role, MODIFIER) is None:
            return False
        entries = select_entries(self.graph.node(concept).concept_key, self.grammar)
        return any(entry.category == "Pred" and entry.epithet for entry in entries)

    def complements(self, role: str, concept: str) -> bool:
        return self.grammar.usage(role, COMPLEMENT) is not None and not self.predicate(concept)

    def attach(self, concept: str, attachment: NominalAttachment):
        self.attachments[concept].append(attachment)
        self.strategies[attachment.relation] = attachment.strategy

    def embed(self, head: str, link: tuple[str, str, int], present: list[tuple[str, str, int]],
              record: bool = True, repeated: frozenset[str] = frozenset()):
        """Realize `head`'s clause around a noun: as an object relative on it when
        the link fills the relativizable function, else as a juxtaposed sentence.

        Only the link is accounted for here unless `record` is set, in which case
        the roles in `present` are too.
        """
        role, noun, index = link
        if self.grammar.function_of(role) == RELATIVE_GAP_FUNCTION:
            try:
                clause, strategies = self.clause(head, present, RELATIVE_GAP_FUNCTION, repeated)
            except (NoFrameFits, MissingActant):
                clause = None
            if clause is not None:
                if record:
                    self.strategies.update(strategies)
                self.attach(noun, NominalAttachment(Strategy.RELATIVE, role, head, index, clause))
                return

        sp, strategies = self.clause(head, [link, *present], repeated=repeated | {noun})
        self.sentences.append(sp)
        if record:
            self.strategies.update(strategies)
        self.strategies[index] = Strategy.JUXTAPOSE

    def attach_residual(self, index: int):
        """A relation outside the cover tree, between two concepts already realized."""
        relation = self.graph.relations[index]
        source, target = relation.source, relation.target
        with at_concept(source):
            if not self.predicate(source):
                if self.modifies(relation.role, target):
                    self.attach(source, NominalAttachment(Strategy.EPITHET, relation.role, target, index))
                elif self.complements(relation.role, target):
                    self.attach(source, NominalAttachment(Strategy.COMPLEMENT, relation.role, target, index,
                                                          repeated=True))
                else:
                    raise NoResidualStrategy(relation)
                return

            if self.predicate(target):
                raise NoResidualStrategy(relation)
            function = self.grammar.function_of(relation.role)
            others = [
                (other.role, other.target, position)
                for position, other in enumerate(self.graph.relations)
                if position != index and other.source == source
                and self.grammar.function_of(other.role) not in (None, function)
            ]
            # the other relations are already realized where the cover tree put them
            repeated = frozenset(concept for _, concept, _ in others)
            self.embed(source, (relation.role, target, index), others, record=False, repeated=repeated)


def plan(graph: ConceptGraph, grammar: Grammar) -> RealizationPlan:
    """Decide, for every relation of the graph, how it will be expressed.

    Predicates in the cover tree each get a nuclear sentence whose frame is the
    complete frame filling the most slots from the roles present; leftover roles
    become circumstants. Around nouns, relations become epithets, complements,
    object relatives or juxtaposed sentences, in that order of preference.
    """
    realization = _Planner(graph, grammar).run()
    logger.info("Planned %d sentence(s) for %d relation(s)", len(realization.sentences), len(graph.relations))
    return realization


###################
### REALIZATION ###
###################
def _determination(node: ConceptNode) -> DeterminationSpec:
    return DeterminationSpec(node.get("determination", DEFAULT_DEGREE), bool(node.get("plural", False)))


def _tma(node: ConceptNode, entry: LexicalEntry) -> TMASpec:
    default_aspect = DEFAULT_PROCESS_ASPECT if entry.type == PROCESS else STATE_ASPECT
    return TMASpec(node.get("tense", DEFAULT_TENSE), node.get("aspect", default_aspect))


def _noun_entry(node: ConceptNode, grammar: Grammar, repeated: bool) -> LexicalEntry:
    entries = [entry for entry in select_entries(node.concept_key, grammar) if entry.category == "N"]
    if not entries:
        raise MissingLexeme(f"no noun realizes '{node.concept_key}'")
    entry = entries[0]
    if repeated and entry.person == THIRD_PERSON and not node.get("plural", False):
        return grammar.entry(ANAPHOR_LEMMA)
    return entry


def realize_np(concept: str, plan: RealizationPlan, graph: ConceptGraph, grammar: Grammar,
               builder: DerivationBuilder, repeated: bool = False) -> str:
    """Build the GN of a concept and return its tree label.

    The noun bar is completed first (epithets, then complements, then relatives)
    and only then substituted into its determiner tree, so a postposed determiner
    always comes after everything the noun bar holds. Repeated concepts come back
    bare, as the anaphor "i" for third-person singulars.
    """
    node = graph.node(concept)
    with at_concept(concept):
        entry = _noun_entry(node, grammar, repeated)
        if entry.definite:
            if not repeated and ("determination" in node.attributes or "plural" in node.attributes):
                raise DeterminerClash(f"'{entry.lemma}' is already definite")
            det_tree = NAMED_DEFINITE_TREE
        else:
            det_tree = determiner_trees(_determination(node), entry.harm).tree

        nbar = builder.instantiate(NBAR_TREE)
        builder.graft(nbar, entry)

        attachments = () if repeated else plan.attachments_of(concept)
        order = (Strategy.EPITHET, Strategy.COMPLEMENT, Strategy.RELATIVE)
        for strategy in order:
            for attachment in attachments:
                if attachment.strategy is strategy:
                    _adjoin_attachment(nbar, attachment, plan, graph, grammar, builder)

        det = builder.instantiate(det_tree)
        builder.substitute(det, slot_address(builder.tree(det).root, "Nbar"), nbar)
    return det


def _adjoin_attachment(nbar: str, attachment: NominalAttachment, plan: RealizationPlan,
                       graph: ConceptGraph, grammar: Grammar, builder: DerivationBuilder):
    with at_concept(attachment.concept):
        if attachment.strategy is Strategy.EPITHET:
            key = graph.node(attachment.concept).concept_key
            entry = next(e for e in select_entries(key, grammar) if e.category == "Pred" and e.epithet)
            aux = builder.instantiate(EPITHET_TREE)
            builder.graft(aux, entry)
        elif attachment.strategy is Strategy.COMPLEMENT:
            aux = builder.instantiate(COMPLEMENT_TREE)
            gn = realize_np(attachment.concept, plan, graph, grammar, builder, attachment.repeated)
            builder.substitute(aux, slot_address(builder.tree(aux).root, "GN"), gn)
        else:
            aux = builder.instantiate(RELATIVE_TREE)
            clause = realize_nuclear(attachment.clause, plan, graph, grammar, builder)
            clause = adjoin_circumstants(clause, attachment.clause, plan, graph, grammar, builder)
            builder.substitute(aux, slot_address(builder.tree(aux).root, "Ph"), clause)
    builder.adjoin(nbar, (), aux)


def apply_tma(entry: LexicalEntry, spec: TMASpec, grammar: Grammar, builder: DerivationBuilder,
              frame: str | None = None) -> str:
    """Predicate -> Predbar (aspect tree) -> Predbarbar (tense tree); returns the tense tree label.

    `frame` fixes the cadre the predicate is used with.
    """
    tma_markers(spec, entry.type)
    aspect = builder.instantiate(ASPECT_TREES[spec.aspect])
    overrides = FeatureStructure(cadre=frame) if frame is not None else None
    builder.graft(aspect, entry, overrides)

    tense = builder.instantiate(TENSE_TREES[spec.tense])
    builder.substitute(tense, slot_address(builder.tree(tense).root, "Predbar"), aspect)
    return tense


def _predicate_entry(node: ConceptNode, grammar: Grammar) -> LexicalEntry:
    for entry in select_entries(node.concept_key, grammar):
        if entry.category == "Pred":
            return entry
    raise MissingLexeme(f"no predicate realizes '{node.concept_key}'")


def _fn(function: str) -> FeatureStructure:
    return FeatureStructure({"fn": Atom(function)})


def realize_nuclear(sp: SentencePlan, plan: RealizationPlan, graph: ConceptGraph, grammar: Grammar,
                    builder: DerivationBuilder) -> str:
    """Graft the TMA-marked predicate into its frame schema (the gapped one for a
    relative) and substitute the actants; returns the sentence tree label."""
    node = graph.node(sp.head)
    with at_concept(sp.head):
        entry = _predicate_entry(node, grammar)
        frame = grammar.frames[sp.frame]
        predicate = apply_tma(entry, _tma(node, entry), grammar, builder, frame.name)
        sentence = builder.instantiate(frame.relative if sp.gap else frame.schema)
        builder.graft(sentence, predicate)

    for function, concept in sp.actants:
        gn = realize_np(concept, plan, graph, grammar, builder, concept in sp.repeated)
        with at_concept(concept):
            address = slot_address(builder.tree(sentence).root, "GN", fn=function)
            builder.substitute(sentence, address, gn, _fn(function))
    return sentence


def adjoin_circumstants(sentence: str, sp: SentencePlan, plan: RealizationPlan, graph: ConceptGraph,
                        grammar: Grammar, builder: DerivationBuilder) -> str:
    """Adjoin one auxiliary tree per circumstant at the saturated GPred, in plan order.

    A role whose circumstant usage names a restricted frame is expressed by the
    first verb with that frame (ba for prep_datif); otherwise the usage names an
    auxiliary tree with a GN slot.
    """
    for role, concept in sp.circumstants:
        with at_concept(concept):
            usage = grammar.usage(role, CIRCUMSTANT)
            if usage is None:
                raise NoCircumstantTree(role)
            frame = grammar.frames.get(usage.argument)
            if frame is not None:
                verbs = [entry for entry in grammar.lexicon if frame.name in entry.frames]
                if not verbs:
                    raise NoCircumstantTree(role)
                predicate = apply_tma(verbs[0], TMASpec(*CIRCUMSTANT_TMA), grammar, builder, frame.name)
                aux = builder.instantiate(frame.schema)
                builder.graft(aux, predicate)
                address = slot_address(builder.tree(aux).root, "GN", fn=frame.slots[0])
            else:
                aux = builder.instantiate(usage.argument)
                address = slot_address(builder.tree(aux).root, "GN")

            function = node_at(builder.tree(aux).root, address).top.symbol("fn")
            gn = realize_np(concept, plan, graph, grammar, builder, concept in sp.repeated)
            builder.substitute(aux, address, gn, _fn(function) if function else None)
            builder.adjoin(sentence, first_address(builder.tree(sentence).root, "GPred"), aux)
    return sentence


def realize_sentence(sp: SentencePlan, plan: RealizationPlan, graph: ConceptGraph,
                     grammar: Grammar) -> RealizedSentence:
    builder = DerivationBuilder(grammar)
    if sp.frame is None:
        root = realize_np(sp.head, plan, graph, grammar, builder, sp.head in sp.repeated)
    else:
        root = realize_nuclear(sp, plan, graph, grammar, builder)
        root = adjoin_circumstants(root, sp, plan, graph, grammar, builder)

    with at_concept(sp.head):
        derived = builder.derived(root)
        finalized = finalize(builder.tree(root).root, builder.env)
        if isinstance(finalized, Failure):
            raise FeatureClash(finalized)
        tokens = tuple(linearize(finalized))
        text = surface(list(tokens))
    return RealizedSentence(sp, root, builder.derivation(root), derived, finalized, tokens, text)


def generate(graph: ConceptGraph, grammar: Grammar) -> GenerationResult:
    """Full pipeline; errors carry the id of the concept being realized."""
    realization = plan(graph, grammar)
    sentences = tuple(realize_sentence(sp, realization, graph, grammar) for sp in realization.sentences)
    text = join_sentences([sentence.text for sentence in sentences])
    logger.debug("Generated: %s", text)
    return GenerationResult(text, tuple(sentence.derivation for sentence in sentences), sentences)
