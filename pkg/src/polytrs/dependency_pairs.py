"""Dependency-pair and dependency-tuple transformations, plus the derivation
trees that justify them.

A weak dependency pair keeps only what lies below the maximal constructor
prefix of a right-hand side (variables included, so collapsing pairs happen).
A dependency tuple records every defined-rooted subterm of the right-hand
side and is only sound for innermost problems.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .framework import Problem, StartKind, StartTerms, is_innermost
from .rewriting import OracleResult, Rule, q_successors
from .terms import (
    App,
    Symbol,
    SymbolKind,
    Term,
    Var,
    com,
    mark,
    marked,
    render,
    subterms,
    symbols_of,
)


def constructor_prefix_components(t: Term) -> list[Term]:
    """Maximal subterms of t that do not sit below a non-constructor symbol:
    descend through constructor roots, stop at anything else."""
    if isinstance(t, App) and t.sym.kind is SymbolKind.CONSTRUCTOR:
        out: list[Term] = []
        for a in t.args:
            out.extend(constructor_prefix_components(a))
        return out
    return [t]


def defined_rooted_subterms(t: Term) -> list[Term]:
    """Subterms with a defined root, leftmost-outermost order."""
    return [
        s
        for s in subterms(t)
        if isinstance(s, App) and s.sym.kind is SymbolKind.DEFINED
    ]


def weak_dependency_pair(rule: Rule, label: str) -> Rule:
    comps = constructor_prefix_components(rule.rhs)
    rhs = com(tuple(mark(c) for c in comps))
    lhs = App(marked(rule.lhs.sym), rule.lhs.args)
    return Rule(lhs, rhs, label, is_dp=True)


def dependency_tuple(rule: Rule, label: str) -> Rule:
    comps = defined_rooted_subterms(rule.rhs)
    rhs = com(tuple(mark(c) for c in comps))
    lhs = App(marked(rule.lhs.sym), rule.lhs.args)
    return Rule(lhs, rhs, label, is_dp=True)


def _extended_signature(p: Problem, new_rules: Iterable[Rule]) -> frozenset[Symbol]:
    sig = set(p.signature)
    sig.update(marked(s) for s in p.signature if s.kind is SymbolKind.DEFINED)
    for r in new_rules:
        sig.update(symbols_of(r.lhs))
        sig.update(symbols_of(r.rhs))
    return frozenset(sig)


def wdp_problem(p: Problem) -> Problem:
    """Replace the start terms by their marked versions and add the weak
    dependency pairs on top of the original rules."""
    if p.start_terms.kind is not StartKind.BASIC:
        raise ValueError("weak dependency pairs need basic start terms")
    labels = iter(str(i) for i in range(1, len(p.strict) + len(p.weak) + 1))
    strict_dps = tuple(weak_dependency_pair(r, next(labels)) for r in p.strict)
    weak_dps = tuple(weak_dependency_pair(r, next(labels)) for r in p.weak)
    return Problem(
        strict_dps=strict_dps,
        strict_trs=p.strict,
        weak_dps=weak_dps,
        weak_trs=p.weak,
        q=p.q,
        start_terms=StartTerms.marked_basic(),
        signature=_extended_signature(p, strict_dps + weak_dps),
    )


def dt_problem(p: Problem) -> Problem:
    """Dependency tuples: all defined activity moves into the marked layer,
    the original rules all become weak.  Innermost problems only."""
    if p.start_terms.kind is not StartKind.BASIC:
        raise ValueError("dependency tuples need basic start terms")
    if not is_innermost(p):
        raise ValueError("dependency tuples need an innermost problem")
    labels = iter(str(i) for i in range(1, len(p.strict) + len(p.weak) + 1))
    strict_dps = tuple(dependency_tuple(r, next(labels)) for r in p.strict)
    weak_dps = tuple(dependency_tuple(r, next(labels)) for r in p.weak)
    return Problem(
        strict_dps=strict_dps,
        strict_trs=(),
        weak_dps=weak_dps,
        weak_trs=p.strict + p.weak,
        q=p.q,
        start_terms=StartTerms.marked_basic(),
        signature=_extended_signature(p, strict_dps + weak_dps),
    )


def rhs_components(rule: Rule) -> tuple[Term, ...]:
    """The grouped right-hand side parts of a DP (arguments of the compound
    root, or the whole rhs)."""
    rhs = rule.rhs
    if isinstance(rhs, App) and rhs.sym.kind is SymbolKind.COMPOUND:
        return rhs.args
    return (rhs,)


@dataclass(frozen=True)
class DerivationTree:
    """A node labeled by a term; an applied rule rewrites the label to the
    grouped children.  Leaves carry no rule."""

    label: Term
    rule: Optional[Rule]
    children: tuple["DerivationTree", ...] = ()

    def __str__(self) -> str:
        if self.rule is None:
            return render(self.label)
        inner = ", ".join(str(c) for c in self.children)
        return f"{render(self.label)} -[{self.rule.label}]-> [{inner}]"


def leaf(t: Term) -> DerivationTree:
    return DerivationTree(t, None, ())


@functools.cache
def tree_edges(tr: DerivationTree) -> int:
    """Number of rule applications in the tree (each grouped step is one)."""
    own = 0 if tr.rule is None else 1
    return own + sum(tree_edges(c) for c in tr.children)


def tree_size_restricted(tr: DerivationTree, rules: Iterable[Rule]) -> int:
    """Number of applications of the given rules in the tree."""
    wanted = frozenset(rules)

    def count(node: DerivationTree) -> int:
        own = 1 if node.rule in wanted else 0
        return own + sum(count(c) for c in node.children)

    return count(tr)


def trim(tr: DerivationTree, rules: Iterable[Rule]) -> DerivationTree:
    """Drop every subtree hanging off an edge not labeled by the given rules."""
    wanted = frozenset(rules)

    def walk(node: DerivationTree) -> DerivationTree:
        if node.rule is None or node.rule not in wanted:
            return leaf(node.label)
        return DerivationTree(node.label, node.rule, tuple(walk(c) for c in node.children))

    return walk(tr)


def _group_reduct(v: Term) -> tuple[Term, ...]:
    if isinstance(v, App) and v.sym.kind is SymbolKind.COMPOUND:
        return v.args
    return (v,)


def enumerate_derivation_trees(
    p: Problem, start: Term, budget: int
) -> Iterator[DerivationTree]:
    """All derivation trees from start with at most budget rule applications,
    structurally deduplicated, in a fixed deterministic order."""
    rules = p.all_rules
    q = p.q
    memo: dict[tuple[Term, int], tuple[DerivationTree, ...]] = {}

    def trees(u: Term, b: int) -> tuple[DerivationTree, ...]:
        key = (u, b)
        hit = memo.get(key)
        if hit is not None:
            return hit
        out: dict[DerivationTree, None] = {leaf(u): None}
        if b >= 1:
            for _, rule, v in q_successors(u, rules, q):
                parts = _group_reduct(v)
                for forest in forests(parts, b - 1):
                    out.setdefault(DerivationTree(u, rule, forest), None)
        result = tuple(out)
        memo[key] = result
        return result

    def forests(
        parts: tuple[Term, ...], b: int
    ) -> Iterator[tuple[DerivationTree, ...]]:
        if not parts:
            yield ()
            return
        for head in trees(parts[0], b):
            rest_budget = b - tree_edges(head)
            for tail in forests(parts[1:], rest_budget):
                yield (head,) + tail

    yield from trees(start, budget)


def tree_size_oracle(p: Problem, start: Term, budget: int) -> OracleResult:
    """Largest strict-rule application count over derivation trees from start.

    Exact only when no enumerated tree already uses the whole edge budget;
    otherwise larger trees may have been cut off and the value is a lower
    bound.
    """
    strict = frozenset(p.strict)
    best = 0
    widest = 0
    for tr in enumerate_derivation_trees(p, start, budget):
        best = max(best, tree_size_restricted(tr, strict))
        widest = max(widest, tree_edges(tr))
    if widest >= budget:
        return OracleResult.at_least(best)
    return OracleResult.exactly(best)
