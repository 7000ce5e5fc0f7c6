"""Graphviz DOT text for derived trees and derivation trees."""

from __future__ import annotations

import networkx as nx

from src.constants import ANCHOR_MARK, FOOT_MARK, SUBSTITUTION_MARK
from src.tagcore import LEX_PREFIX, Derivation, NodeKind, TreeNode, iter_nodes

DIGRAPH_INI = "digraph {\n charset=\"utf-8\" \n"
DIGRAPH_END = "}"

MARKS = {
    NodeKind.SUBSTITUTION: SUBSTITUTION_MARK,
    NodeKind.FOOT: FOOT_MARK,
    NodeKind.ANCHOR: ANCHOR_MARK,
}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _node_label(node: TreeNode) -> str:
    label = node.category + MARKS.get(node.kind, "")
    features = str(node.top)
    if node.bottom:
        features += " " + str(node.bottom)
    return f"{label}\n{features}"


def derived_tree_dot(root: TreeNode) -> str:
    """One DOT node per tree node, named by Gorn address; lexical leaves get an
    extra boxed node holding their token."""
    digraph = DIGRAPH_INI
    for address, node in iter_nodes(root):
        name = "n" + ".".join(map(str, address))
        digraph += f"{_quote(name)} [label={_quote(_node_label(node))}, shape=ellipse];\n"
        if address:
            parent = "n" + ".".join(map(str, address[:-1]))
            digraph += f"{_quote(parent)} -> {_quote(name)};\n"
        if node.kind is NodeKind.LEX:
            digraph += f"{_quote(name + 'w')} [label={_quote(node.token)}, shape=box];\n"
            digraph += f"{_quote(name)} -> {_quote(name + 'w')};\n"
    return digraph + DIGRAPH_END


def derivation_graph(derivation: Derivation) -> nx.DiGraph:
    """Tree instances and lexemes as nodes, one edge per step from target to argument.
    Each lexical argument gets its own node since a lemma may be used twice."""
    G = nx.DiGraph()
    G.add_node(derivation.root, label=derivation.root, lexical=False)
    for position, step in enumerate(derivation.steps):
        G.add_node(step.target, label=step.target, lexical=False)
        argument = step.argument
        if argument.startswith(LEX_PREFIX):
            argument = f"{argument}/{position}"
            G.add_node(argument, label=step.argument[len(LEX_PREFIX):], lexical=True)
        else:
            G.add_node(argument, label=argument, lexical=False)
        G.add_edge(step.target, argument, op=str(step.op), address=step.address, position=position)
    return G


def derivation_dot(derivation: Derivation) -> str:
    G = derivation_graph(derivation)
    digraph = DIGRAPH_INI
    for name, data in G.nodes(data=True):
        shape = "box" if data["lexical"] else "ellipse"
        digraph += f"{_quote(name)} [label={_quote(data['label'])}, shape={shape}];\n"
    for target, argument, data in sorted(G.edges(data=True), key=lambda edge: edge[2]["position"]):
        address = ".".join(map(str, data["address"])) or "ε"
        digraph += f"{_quote(target)} -> {_quote(argument)} [label={_quote(data['op'] + ' @ ' + address)}];\n"
    return digraph + DIGRAPH_END
