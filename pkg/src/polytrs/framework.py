"""Complexity problems, asymptotic bounds, and judgements.

A problem is a pair of rule sets (strict rules to be counted, weak rules that
are free), a set Q restricting where rules may fire, and a class of start
terms.  The judgement "problem has bound f" says the longest derivation from
any start term of size n contains O(f(n)) strict steps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import rewriting
from .rewriting import OracleResult, Rule, check_labels, strict_step_oracle
from .terms import (
    App,
    Symbol,
    SymbolKind,
    Term,
    com,
    is_basic,
    match_term,
    render,
    size as term_size,
    symbols_of,
    unmark,
)


@dataclass(frozen=True, order=True)
class Bound:
    """Poly(degree) or Unknown; Unknown absorbs under both operations."""

    degree: Optional[int] = None

    @classmethod
    def poly(cls, degree: int) -> "Bound":
        if degree < 0:
            raise ValueError("degree must be >= 0")
        return cls(degree)

    @classmethod
    def unknown(cls) -> "Bound":
        return cls(None)

    @property
    def is_unknown(self) -> bool:
        return self.degree is None

    def __str__(self) -> str:
        if self.is_unknown:
            return "?"
        if self.degree == 0:
            return "O(1)"
        return f"O(n^{self.degree})"


def bound_add(a: Bound, b: Bound) -> Bound:
    """Bound for a sum of derivation counts: the larger degree."""
    if a.is_unknown or b.is_unknown:
        return Bound.unknown()
    return Bound.poly(max(a.degree, b.degree))


def bound_mul(a: Bound, b: Bound) -> Bound:
    """Bound for a product of derivation counts: degrees add."""
    if a.is_unknown or b.is_unknown:
        return Bound.unknown()
    return Bound.poly(a.degree + b.degree)


class StartKind(enum.Enum):
    ALL = "all"
    BASIC = "basic"
    MARKED_BASIC = "marked_basic"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class StartTerms:
    kind: StartKind
    terms: tuple[Term, ...] = ()

    @classmethod
    def all_terms(cls) -> "StartTerms":
        return cls(StartKind.ALL)

    @classmethod
    def basic(cls) -> "StartTerms":
        return cls(StartKind.BASIC)

    @classmethod
    def marked_basic(cls) -> "StartTerms":
        return cls(StartKind.MARKED_BASIC)

    @classmethod
    def explicit(cls, terms: Iterable[Term]) -> "StartTerms":
        return cls(StartKind.EXPLICIT, tuple(terms))

    def __str__(self) -> str:
        if self.kind is StartKind.EXPLICIT:
            return "{" + ", ".join(render(t) for t in self.terms) + "}"
        return self.kind.value


@dataclass(frozen=True)
class Problem:
    """<strict / weak, Q, start terms> with dependency pairs kept apart."""

    strict_dps: tuple[Rule, ...]
    strict_trs: tuple[Rule, ...]
    weak_dps: tuple[Rule, ...]
    weak_trs: tuple[Rule, ...]
    q: tuple[Rule, ...]
    start_terms: StartTerms
    signature: frozenset[Symbol]

    def __post_init__(self) -> None:
        check_labels(self.strict_dps + self.strict_trs + self.weak_dps + self.weak_trs)
        for r in self.strict_dps + self.weak_dps:
            if not r.is_dp:
                raise ValueError(f"rule {r.label} in a DP slot is not dp-flagged")
            if not is_well_formed_dp(r):
                raise ValueError(f"rule {r.label} is not a well-formed DP")
        for r in self.strict_trs + self.weak_trs:
            if r.is_dp:
                raise ValueError(f"dp-flagged rule {r.label} in a plain slot")

    @property
    def strict(self) -> tuple[Rule, ...]:
        return self.strict_dps + self.strict_trs

    @property
    def weak(self) -> tuple[Rule, ...]:
        return self.weak_dps + self.weak_trs

    @property
    def all_rules(self) -> tuple[Rule, ...]:
        return self.strict + self.weak

    @property
    def dps(self) -> tuple[Rule, ...]:
        return self.strict_dps + self.weak_dps

    def is_dp_problem(self) -> bool:
        """Start terms are marked basic terms and all DPs are well formed."""
        st = self.start_terms
        if st.kind is StartKind.MARKED_BASIC:
            return True
        if st.kind is StartKind.EXPLICIT:
            return bool(st.terms) and all(
                is_basic(t) and isinstance(t, App) and t.sym.kind is SymbolKind.MARKED
                for t in st.terms
            )
        return False

    def is_runtime(self) -> bool:
        return self.start_terms.kind in (StartKind.BASIC, StartKind.MARKED_BASIC)

    def __str__(self) -> str:
        def lbls(rs: tuple[Rule, ...]) -> str:
            return "{" + ",".join(r.label for r in rs) + "}"

        q = "Q=S+W" if set(self.q) == set(self.all_rules) else f"Q={len(self.q)} rules"
        return (
            f"<{lbls(self.strict)} / {lbls(self.weak)}, {q}, {self.start_terms}>"
        )


def is_well_formed_dp(rule: Rule) -> bool:
    """Marked left-hand side and a right-hand side whose components are free
    of compound symbols."""
    if rule.lhs.sym.kind is not SymbolKind.MARKED:
        return False
    rhs = rule.rhs
    comps = (
        rhs.args
        if isinstance(rhs, App) and rhs.sym.kind is SymbolKind.COMPOUND
        else (rhs,)
    )
    return all(
        not any(s.kind is SymbolKind.COMPOUND for s in symbols_of(c)) for c in comps
    )


def problems_equal(a: Problem, b: Problem) -> bool:
    """Component-wise equality up to rule order."""
    return (
        set(a.strict_dps) == set(b.strict_dps)
        and set(a.strict_trs) == set(b.strict_trs)
        and set(a.weak_dps) == set(b.weak_dps)
        and set(a.weak_trs) == set(b.weak_trs)
        and set(a.q) == set(b.q)
        and a.start_terms == b.start_terms
    )


@dataclass(frozen=True)
class Judgement:
    problem: Problem
    bound: Bound

    def __str__(self) -> str:
        return f"{self.problem} : {self.bound}"


def is_innermost(p: Problem) -> bool:
    """Sufficient syntactic check: every lhs of strict+weak is an instance of
    some lhs of Q.  Marked roots are compared unmarked, so the property
    survives the dependency-pair transformations."""
    if not p.q:
        return not p.all_rules
    for r in p.all_rules:
        lhs = unmark(r.lhs)
        if not any(match_term(qr.lhs, lhs) is not None for qr in p.q):
            return False
    return True


def start_terms_up_to(p: Problem, n: int, cap: int = 200_000) -> list[Term]:
    """Concrete start terms of size at most n, for the oracles."""
    st = p.start_terms
    if st.kind is StartKind.EXPLICIT:
        return [t for t in st.terms if term_size(t) <= n]
    if st.kind is StartKind.BASIC:
        return rewriting.basic_terms(p.signature, n, SymbolKind.DEFINED, cap)
    if st.kind is StartKind.MARKED_BASIC:
        return rewriting.basic_terms(p.signature, n, SymbolKind.MARKED, cap)
    return _all_ground_terms(p.signature, n, cap)


def _all_ground_terms(symbols: frozenset[Symbol], n: int, cap: int) -> list[Term]:
    syms = sorted(
        (s for s in symbols if s.kind is not SymbolKind.COMPOUND),
        key=lambda s: (s.arity, s.name),
    )
    by_size: list[list[Term]] = [[] for _ in range(n + 1)]
    total = 0
    for sz in range(1, n + 1):
        for f in syms:
            if f.arity == 0:
                if sz == 1:
                    by_size[1].append(App(f))
                    total += 1
                continue
            for split in rewriting._size_splits(sz - 1, f.arity):
                for args in rewriting._arg_products(by_size, split):
                    by_size[sz].append(App(f, args))
                    total += 1
                    if total > cap:
                        raise rewriting.TooLargeError(f"more than {cap} start terms")
    return [t for bucket in by_size for t in bucket]


def cc_oracle(p: Problem, n: int, budget: int) -> OracleResult:
    """Worst number of strict steps over all start terms of size at most n."""
    if not p.strict:
        return OracleResult.exactly(0)
    best = 0
    for t in start_terms_up_to(p, n):
        r = strict_step_oracle(t, p.strict, p.weak, p.q, budget)
        if not r.exact:
            return r
        best = max(best, r.value)
    return OracleResult.exactly(best)
