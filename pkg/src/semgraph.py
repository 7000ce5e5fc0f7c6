"""Conceptual graphs: concept nodes with semantic attributes linked by role-labelled
relations, read from JSON, plus the spanning "cover tree" that drives generation."""

from __future__ import annotations

import json
import logging

from collections.abc import Mapping
from dataclasses import dataclass, field

import networkx as nx

from src.constants import ASPECTS, CIRCUMSTANT, DEGREES, MODIFIER, ROLE_PRIORITY, STATE, STATE_ASPECT, TENSES
from src.errors import DanglingEndpoint, DisconnectedGraph, DuplicateId, GraphParseError
from src.grammar import Grammar, select_entries

logger = logging.getLogger(__name__)

ATTRIBUTE_VALUES = {
    "tense": TENSES,
    "aspect": ASPECTS,
    "determination": DEGREES,
    "plural": (True, False),
}
PREDICATE_ATTRIBUTES = {"tense", "aspect"}
NOMINAL_ATTRIBUTES = {"determination", "plural"}
EPITHET = "epithet"
USED_ATTRIBUTES = {"N": NOMINAL_ATTRIBUTES, "Pred": PREDICATE_ATTRIBUTES, EPITHET: set()}


@dataclass(frozen=True)
class ConceptNode:
    id: str
    concept_key: str
    attributes: Mapping[str, str | bool] = field(default_factory=dict)

    def get(self, name: str, default=None):
        return self.attributes.get(name, default)


@dataclass(frozen=True)
class SemRelation:
    role: str
    source: str
    target: str

    def __str__(self) -> str:
        return f"{self.source} -{self.role}-> {self.target}"


@dataclass(frozen=True)
class ConceptGraph:
    nodes: tuple[ConceptNode, ...]
    relations: tuple[SemRelation, ...] = ()
    root: str | None = None

    def node(self, node_id: str) -> ConceptNode:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise DanglingEndpoint(f"no node '{node_id}'")

    def to_networkx(self) -> nx.MultiDiGraph:
        """Nodes in file order; each relation is an edge keyed by its index."""
        G = nx.MultiDiGraph()
        for node in self.nodes:
            G.add_node(node.id, key=node.concept_key)
        for index, relation in enumerate(self.relations):
            G.add_edge(relation.source, relation.target, key=index, role=relation.role)
        return G


@dataclass(frozen=True)
class TreeEdge:
    """A relation used by the cover tree. `forward` is True when the relation
    points from the parent to the child."""
    relation: int
    parent: str
    child: str
    forward: bool


@dataclass(frozen=True)
class CoverTree:
    root: str
    tree_edges: tuple[int, ...]
    residual: tuple[int, ...]
    children: Mapping[str, tuple[TreeEdge, ...]]
    order: tuple[str, ...]

    def children_of(self, node_id: str) -> tuple[TreeEdge, ...]:
        return self.children.get(node_id, ())


@dataclass(frozen=True)
class GraphIssue:
    kind: str
    subject: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.subject}: {self.detail}"


###############
### PARSING ###
###############
def _require(mapping: dict, name: str, where: str):
    if not isinstance(mapping, dict) or name not in mapping:
        raise GraphParseError(f"{where} is missing '{name}'")
    value = mapping[name]
    if not isinstance(value, str) or not value:
        raise GraphParseError(f"{where}: '{name}' must be a non-empty string")
    return value


def _parse_attributes(raw, node_id: str) -> dict:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise GraphParseError(f"attrs of node '{node_id}' must be an object")
    for name, value in raw.items():
        if name not in ATTRIBUTE_VALUES:
            raise GraphParseError(f"node '{node_id}': unknown attribute '{name}'")
        allowed = ATTRIBUTE_VALUES[name]
        if type(value) is not type(allowed[0]) or value not in allowed:
            raise GraphParseError(f"node '{node_id}': {name}={value!r} is not one of {list(allowed)}")
    return dict(raw)


def parse_graph(document: str) -> ConceptGraph:
    """Read a JSON graph document.

    Raises GraphParseError for malformed input, DuplicateId and DanglingEndpoint for
    inconsistent ids.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as e:
        raise GraphParseError(f"not valid JSON: {e}") from None
    if not isinstance(data, dict):
        raise GraphParseError("a graph document is a JSON object")

    raw_nodes = data.get("nodes")
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise GraphParseError("a graph needs a non-empty 'nodes' list")

    nodes = []
    seen = set()
    for position, raw in enumerate(raw_nodes):
        node_id = _require(raw, "id", f"node #{position}")
        key = _require(raw, "key", f"node '{node_id}'")
        if node_id in seen:
            raise DuplicateId(f"node id '{node_id}' used twice")
        seen.add(node_id)
        nodes.append(ConceptNode(node_id, key, _parse_attributes(raw.get("attrs"), node_id)))

    relations = []
    raw_relations = data.get("relations", [])
    if not isinstance(raw_relations, list):
        raise GraphParseError("'relations' must be a list")
    for position, raw in enumerate(raw_relations):
        where = f"relation #{position}"
        relation = SemRelation(_require(raw, "role", where), _require(raw, "from", where), _require(raw, "to", where))
        for endpoint in (relation.source, relation.target):
            if endpoint not in seen:
                raise DanglingEndpoint(f"{where} ({relation}) names unknown node '{endpoint}'")
        if relation.source == relation.target:
            raise GraphParseError(f"{where} loops on '{relation.source}'")
        relations.append(relation)

    root = data.get("root")
    if root is not None and root not in seen:
        raise DanglingEndpoint(f"root '{root}' is not a node")

    return ConceptGraph(tuple(nodes), tuple(relations), root)


def load_graph_file(path: str) -> ConceptGraph:
    with open(path, "r", encoding="utf-8") as f:
        return parse_graph(f.read())


def serialize_graph(graph: ConceptGraph) -> str:
    """Stable JSON rendering: sorted keys, node and relation order kept, UTF-8 text."""
    data = {
        "nodes": [{"id": n.id, "key": n.concept_key, "attrs": dict(n.attributes)} for n in graph.nodes],
        "relations": [{"role": r.role, "from": r.source, "to": r.target} for r in graph.relations],
        "root": graph.root,
    }
    return json.dumps(data, indent=4, sort_keys=True, ensure_ascii=False)


##################
### VALIDATION ###
##################
def _realization(node: ConceptNode, entries: list, graph: ConceptGraph, grammar: Grammar) -> str:
    """How a concept surfaces: as an epithet when an epithet predicate hangs off a
    noun by a modifier role, else as the category of its first entry."""
    category = entries[0].category
    if not any(entry.category == "Pred" and entry.epithet for entry in entries):
        return category
    if any(relation.source == node.id for relation in graph.relations):
        return category
    for relation in graph.relations:
        if relation.target != node.id or grammar.usage(relation.role, MODIFIER) is None:
            continue
        source = select_entries(graph.node(relation.source).concept_key, grammar)
        if source and source[0].category == "N":
            return EPITHET
    return category


def validate_graph(graph: ConceptGraph, grammar: Grammar) -> list[GraphIssue]:
    """Problems generation would hit, reported instead of raised."""
    issues = []
    for node in graph.nodes:
        entries = select_entries(node.concept_key, grammar)
        if not entries:
            issues.append(GraphIssue("MissingLexeme", node.id, f"no entry realizes '{node.concept_key}'"))
            continue

        aspect = node.get("aspect")
        predicates = [entry for entry in entries if entry.category == "Pred"]
        if aspect is not None and aspect != STATE_ASPECT and predicates and all(
                entry.type == STATE for entry in predicates):
            issues.append(GraphIssue("AspectOnState", node.id, f"aspect {aspect} on state '{node.concept_key}'"))

        realization = _realization(node, entries, graph, grammar)
        for name in sorted(set(node.attributes) - USED_ATTRIBUTES[realization]):
            detail = f"{name} has no effect on a concept realized as {realization}"
            issues.append(GraphIssue("MisplacedAttribute", node.id, detail))

    known = set(grammar.role_names)
    for relation in graph.relations:
        if relation.role not in known:
            issues.append(GraphIssue("UnknownRole", relation.role, f"{relation} uses an undeclared role"))

    return issues


###################
### COVER TREE ###
###################
def _role_rank(grammar: Grammar | None):
    circumstantial = []
    if grammar is not None:
        circumstantial = [u.role for u in grammar.roles if u.usage == CIRCUMSTANT and u.role not in ROLE_PRIORITY]

    def rank(role: str) -> tuple:
        if role in ROLE_PRIORITY:
            return (0, ROLE_PRIORITY.index(role), "")
        if role in circumstantial:
            return (1, circumstantial.index(role), "")
        return (2, 0, role)

    return rank


def _default_root(graph: ConceptGraph, grammar: Grammar | None) -> str:
    if grammar is not None:
        for node in graph.nodes:
            entries = select_entries(node.concept_key, grammar)
            if entries and entries[0].category == "Pred":
                return node.id
    return graph.nodes[0].id


def cover_tree(graph: ConceptGraph, grammar: Grammar | None = None) -> CoverTree:
    """Breadth-first spanning tree over the undirected graph.

    Root: the declared root, else the first node realized by a predicate (file
    order), else the first node. Relations of a node are visited by role priority
    (agent, patient, recipient, attribute, possessor, declared circumstantial roles,
    then alphabetical), then outgoing before incoming, then other end's id.
    """
    G = graph.to_networkx()
    root = graph.root if graph.root is not None else _default_root(graph, grammar)
    rank = _role_rank(grammar)
    best: dict[str, dict[str, tuple]] = {}

    def ordered_neighbors(node: str) -> list[str]:
        # per neighbour, the relation that ranks first: (sort key, relation index, forward)
        links = {}
        for _, target, key, role in G.out_edges(node, keys=True, data="role"):
            links.setdefault(target, []).append(((rank(role), 0, target, key), key, True))
        for source, _, key, role in G.in_edges(node, keys=True, data="role"):
            links.setdefault(source, []).append(((rank(role), 1, source, key), key, False))
        best[node] = {other: min(candidates) for other, candidates in links.items()}
        return sorted(best[node], key=lambda other: best[node][other][0])

    children: dict[str, list[TreeEdge]] = {node.id: [] for node in graph.nodes}
    order = [root]
    tree_edges = []
    for parent, child in nx.generic_bfs_edges(G, root, neighbors=ordered_neighbors):
        _, key, forward = best[parent][child]
        order.append(child)
        tree_edges.append(key)
        children[parent].append(TreeEdge(key, parent, child, forward))

    visited = set(order)
    unreachable = [node.id for node in graph.nodes if node.id not in visited]
    if unreachable:
        raise DisconnectedGraph(unreachable)

    used = set(tree_edges)
    residual = tuple(index for index in range(len(graph.relations)) if index not in used)
    logger.debug("Cover tree from %s: %d tree edges, %d residual", root, len(tree_edges), len(residual))
    return CoverTree(root, tuple(tree_edges), residual,
                     {node_id: tuple(edges) for node_id, edges in children.items()}, tuple(order))
