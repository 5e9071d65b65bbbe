"""Dependency graph estimation and the chain view of derivation trees.

Nodes are the DP rules of a problem.  An edge (d1, d2, i) says the i-th
right-hand side component of d1 may, after some non-DP rewriting, become an
instance of d2's left-hand side.  Reachability is over-approximated with
tcap: a subterm is replaced by a fresh variable whenever some non-DP rule
could rewrite it at the root.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .dependency_pairs import DerivationTree, rhs_components
from .framework import Problem
from .rewriting import Rule
from .terms import App, Term, Var, fresh_var, rename_apart, unify_terms


def tcap(t: Term, rules: Sequence[Rule]) -> Term:
    """Cap t from below: fresh variable wherever a root step is possible."""
    if isinstance(t, Var):
        return fresh_var()
    capped = App(t.sym, tuple(tcap(a, rules) for a in t.args))
    for r in rules:
        if unify_terms(capped, rename_apart(r.lhs)) is not None:
            return fresh_var()
    return capped


Edge = tuple[Rule, Rule, int]


@dataclass(frozen=True)
class DepGraph:
    nodes: tuple[Rule, ...]
    edges: frozenset[Edge]

    def successors(self, dps: Iterable[Rule]) -> frozenset[Rule]:
        sources = set(dps)
        return frozenset(dst for src, dst, _ in self.edges if src in sources)

    def predecessors(self, dps: Iterable[Rule]) -> frozenset[Rule]:
        targets = set(dps)
        return frozenset(src for src, dst, _ in self.edges if dst in targets)

    def is_forward_closed(self, dps: Iterable[Rule]) -> bool:
        members = set(dps)
        return self.successors(members) <= members

    def forward_closure(self, dps: Iterable[Rule]) -> frozenset[Rule]:
        closed = set(dps)
        frontier = list(closed)
        while frontier:
            nxt = self.successors(frontier) - closed
            closed |= nxt
            frontier = list(nxt)
        return frozenset(closed)


def estimate_dg(p: Problem) -> DepGraph:
    """Over-approximate the dependency graph of a DP problem.

    Only the non-DP rules drive tcap; the evaluation strategy is ignored,
    which keeps the estimate sound for every Q.
    """
    if not p.is_dp_problem():
        raise ValueError("dependency graph needs a DP problem")
    dps = p.dps
    base = p.strict_trs + p.weak_trs
    edges = set()
    for d1 in dps:
        for i, comp in enumerate(rhs_components(d1), start=1):
            capped = tcap(comp, base)
            for d2 in dps:
                if unify_terms(capped, rename_apart(d2.lhs)) is not None:
                    edges.add((d1, d2, i))
    return DepGraph(dps, frozenset(edges))


def sep(dps: Iterable[Rule]) -> tuple[Rule, ...]:
    """Split each DP into one rule per right-hand side component.

    The split rules over-approximate a single DP step projected to one
    component; labels get a letter suffix to stay unique.
    """
    out = []
    for d in dps:
        comps = rhs_components(d)
        for comp, letter in zip(comps, "abcdefghijklmnopqrstuvwxyz"):
            out.append(Rule(d.lhs, comp, f"{d.label}{letter}", is_dp=True))
    return tuple(out)


def chains_of(tree: DerivationTree, p: Problem) -> frozenset[tuple[str, ...]]:
    """DP-labelled edge sequences along root-to-leaf paths of a tree.

    Every maximal path contributes the sequence of DP rules applied along
    it, in order; nodes rewritten with non-DP rules are passed through.
    Paths without any DP step contribute nothing.
    """
    dp_labels = {d.label for d in p.dps}
    chains: set[tuple[str, ...]] = set()

    def walk(node: DerivationTree, acc: tuple[str, ...]) -> None:
        if node.rule is not None and node.rule.label in dp_labels:
            acc = acc + (node.rule.label,)
        if not node.children:
            if acc:
                chains.add(acc)
            return
        for child in node.children:
            walk(child, acc)

    walk(tree, ())
    return frozenset(chains)


def to_dot(g: DepGraph) -> str:
    """Render the graph in DOT format, deterministically ordered."""
    lines = ["digraph dependency_graph {"]
    for node in g.nodes:
        lines.append(f'  "{node.label}" [label="{node.label}: {node}"];')
    for src, dst, i in sorted(
        g.edges, key=lambda e: (e[0].label, e[1].label, e[2])
    ):
        lines.append(f'  "{src.label}" -> "{dst.label}" [label="{i}"];')
    lines.append("}")
    return "\n".join(lines)
