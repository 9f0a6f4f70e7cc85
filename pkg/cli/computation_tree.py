#!/usr/bin/env python3
"""
Computation Trees

Generic AND-OR trees materialized by the evaluators (alt_tree, pafa_tree,
aqfa_tree) and their Graphviz DOT export.

Usage:
    dot -Tpng -O tree.gv
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Tuple, Union

logger = logging.getLogger(__name__)

EXISTENTIAL = "existential"
UNIVERSAL = "universal"
LEAF = "leaf"

CONNECTIVE_SYMBOLS = {EXISTENTIAL: "∨", UNIVERSAL: "∧", LEAF: ""}
CONNECTIVE_SHAPES = {EXISTENTIAL: "diamond", UNIVERSAL: "box", LEAF: "ellipse"}
VALUE_COLORS = {True: "palegreen", False: "lightpink"}


@dataclass
class TreeNode:
    """One node of an evaluated computation tree.

    Children are (edge label, node) pairs; the edge label is the move label
    or measurement outcome that produced the child.
    """

    level: int
    label: str
    connective: str
    value: bool
    children: List[Tuple[str, "TreeNode"]] = field(default_factory=list)

    def recompute(self) -> bool:
        """Re-evaluate truth values bottom-up; returns whether they all matched."""
        return all(
            combine(node.connective, node.children, node.value) == node.value
            for node in self.walk()
        )

    def path_lengths(self) -> Iterator[int]:
        """Length of every root-to-leaf path below this node."""
        stack = [(self, 0)]
        while stack:
            node, length = stack.pop()
            if not node.children:
                yield length
            for _, child in node.children:
                stack.append((child, length + 1))

    def walk(self) -> Iterator["TreeNode"]:
        """Preorder traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(child for _, child in reversed(node.children))

    def size(self) -> int:
        return sum(1 for _ in self.walk())


ComputationTree = TreeNode

# expand(node) -> a value decided without children, or (universal, children)
Expansion = Union[bool, Tuple[bool, Iterable[Any]]]
# expand(node) -> a finished leaf, or (level, label, connective, [(edge, child), ...])
TreeExpansion = Union[TreeNode, Tuple[int, str, str, Iterable[Tuple[str, Any]]]]


def combine(connective: str, children: List[Tuple[str, TreeNode]], leaf_value: bool = False) -> bool:
    """OR for existential nodes, AND for universal ones; a leaf keeps ``leaf_value``."""
    if connective == EXISTENTIAL:
        return any(child.value for _, child in children)
    if connective == UNIVERSAL:
        return all(child.value for _, child in children)
    return leaf_value


def evaluate_and_or(root: Any, expand: Callable[[Any], Expansion], memo: Dict[Hashable, bool],
                    key: Callable[[Any], Hashable] = lambda node: node) -> bool:
    """Memoized, short-circuiting AND-OR evaluation with an explicit stack.

    Trees are as deep as the tape is long, so evaluation never recurses.
    Children are visited in order and a node stops at its first deciding
    child. Only expanded nodes are stored in ``memo`` (under ``key(node)``).
    """
    def open_node(node):
        node_key = key(node)
        if node_key in memo:
            return memo[node_key]
        outcome = expand(node)
        if isinstance(outcome, bool):
            return outcome
        universal, children = outcome
        return node_key, universal, iter(children)

    top = open_node(root)
    if isinstance(top, bool):
        return top
    stack = [top]
    finished = None
    while stack:
        node_key, universal, children = stack[-1]
        decided = None
        if finished is not None:
            if finished != universal:
                decided = finished
            finished = None
        if decided is None:
            for child in children:
                opened = open_node(child)
                if not isinstance(opened, bool):
                    stack.append(opened)
                    break
                if opened != universal:
                    decided = opened
                    break
            else:
                decided = universal
        if decided is not None:
            memo[node_key] = decided
            stack.pop()
            finished = decided
    return bool(finished)


def build_tree(root: Any, expand: Callable[[Any], TreeExpansion]) -> TreeNode:
    """Materialize a full tree with an explicit stack; inner values are filled bottom-up."""
    def open_node(node):
        outcome = expand(node)
        if isinstance(outcome, TreeNode):
            return outcome, None
        level, label, connective, children = outcome
        return TreeNode(level, label, connective, False), iter(children)

    tree, pending = open_node(root)
    stack = [] if pending is None else [(tree, pending)]
    while stack:
        parent, pending = stack[-1]
        for edge, child in pending:
            node, child_pending = open_node(child)
            parent.children.append((edge, node))
            if child_pending is not None:
                stack.append((node, child_pending))
                break
        else:
            parent.value = combine(parent.connective, parent.children)
            stack.pop()
    return tree


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_tree_dot(tree: TreeNode, name: str = "computation") -> str:
    """Render ``tree`` as a DOT digraph.

    Node shape encodes the connective (diamond ∨, box ∧, ellipse leaf), fill
    color the truth value, and edges carry move labels or outcomes.
    """
    lines = [f"digraph {_quote(name)} {{", "\tnode [style=filled];"]
    edges = []
    identifiers = {}
    for node in tree.walk():
        identifier = f"n{len(identifiers)}"
        identifiers[id(node)] = identifier
        symbol = CONNECTIVE_SYMBOLS[node.connective]
        text = f"{symbol} {node.label}" if symbol else node.label
        lines.append(
            f"\t{identifier} [label={_quote(f'{text} @{node.level}')}, "
            f"shape={CONNECTIVE_SHAPES[node.connective]}, fillcolor={VALUE_COLORS[node.value]}];"
        )
        for edge_label, child in node.children:
            edges.append((node, edge_label, child))
    for parent, edge_label, child in edges:
        lines.append(f"\t{identifiers[id(parent)]} -> {identifiers[id(child)]} [label={_quote(edge_label)}];")
    lines.append("}")
    logger.debug("Exported tree with %d nodes and %d edges", len(identifiers), len(edges))
    return "\n".join(lines) + "\n"
