"""First-order terms over a sorted signature.

Symbols carry a kind (constructor, defined, marked, compound) because almost
every analysis downstream branches on it: marked symbols are the roots of
dependency pairs, compound symbols group the right-hand sides of dependency
pairs, and basic terms are defined roots over constructor arguments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Optional, Union


class SymbolKind(Enum):
    CONSTRUCTOR = "constructor"
    DEFINED = "defined"
    MARKED = "marked"
    COMPOUND = "compound"


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    kind: SymbolKind

    @property
    def display_name(self) -> str:
        return self.name + "#" if self.kind is SymbolKind.MARKED else self.name

    def __str__(self) -> str:
        return self.display_name


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    sym: Symbol
    args: tuple["Term", ...] = ()

    def __post_init__(self) -> None:
        if len(self.args) != self.sym.arity:
            raise ValueError(
                f"{self.sym.display_name} expects {self.sym.arity} arguments, "
                f"got {len(self.args)}"
            )

    def __str__(self) -> str:
        return render(self)


Term = Union[Var, App]

# Positions address subterms by 1-based argument indices; () is the root.
Position = tuple[int, ...]

Substitution = Mapping[str, Term]


class InvalidPositionError(ValueError):
    pass


def compound(n: int) -> Symbol:
    return Symbol(f"c_{n}", n, SymbolKind.COMPOUND)


def marked(sym: Symbol) -> Symbol:
    if sym.kind is not SymbolKind.DEFINED:
        raise ValueError(f"cannot mark {sym.kind.value} symbol {sym.name}")
    return Symbol(sym.name, sym.arity, SymbolKind.MARKED)


def unmarked(sym: Symbol) -> Symbol:
    if sym.kind is not SymbolKind.MARKED:
        raise ValueError(f"cannot unmark {sym.kind.value} symbol {sym.name}")
    return Symbol(sym.name, sym.arity, SymbolKind.DEFINED)


def mark(t: Term) -> Term:
    """Mark the root if it is a defined symbol, otherwise return t unchanged."""
    if isinstance(t, App) and t.sym.kind is SymbolKind.DEFINED:
        return App(marked(t.sym), t.args)
    return t


def unmark(t: Term) -> Term:
    if isinstance(t, App) and t.sym.kind is SymbolKind.MARKED:
        return App(unmarked(t.sym), t.args)
    return t


def com(ts: tuple[Term, ...] | list[Term]) -> Term:
    """Group a sequence of terms: singletons stay bare, otherwise wrap in c_n."""
    ts = tuple(ts)
    if len(ts) == 1:
        return ts[0]
    return App(compound(len(ts)), ts)


def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(a) for a in t.args)


def subterms(t: Term) -> Iterator[Term]:
    """All subterms in leftmost-outermost (preorder) order, t itself first."""
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def positions(t: Term) -> list[Position]:
    """All positions in leftmost-outermost (preorder) order."""
    out: list[Position] = []

    def walk(s: Term, p: Position) -> None:
        out.append(p)
        if isinstance(s, App):
            for i, a in enumerate(s.args, start=1):
                walk(a, p + (i,))

    walk(t, ())
    return out


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if not isinstance(t, App) or not 1 <= i <= len(t.args):
            raise InvalidPositionError(f"position {p} not in {render(t)}")
        t = t.args[i - 1]
    return t


def replace_at(t: Term, p: Position, s: Term) -> Term:
    if not p:
        return s
    if not isinstance(t, App) or not 1 <= p[0] <= len(t.args):
        raise InvalidPositionError(f"position {p} not in {render(t)}")
    i = p[0]
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], s)
    return App(t.sym, tuple(args))


def variables(t: Term) -> tuple[str, ...]:
    """Variable names in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(s: Term) -> None:
        if isinstance(s, Var):
            seen.setdefault(s.name, None)
        else:
            for a in s.args:
                walk(a)

    walk(t)
    return tuple(seen)


def symbols_of(t: Term) -> frozenset[Symbol]:
    return frozenset(s.sym for s in subterms(t) if isinstance(s, App))


def apply_subst(t: Term, sigma: Substitution) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    return App(t.sym, tuple(apply_subst(a, sigma) for a in t.args))


def match_term(pattern: Term, subject: Term) -> Optional[dict[str, Term]]:
    """Substitution sigma with pattern*sigma == subject, or None."""
    sigma: dict[str, Term] = {}

    def walk(p: Term, s: Term) -> bool:
        if isinstance(p, Var):
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
                return True
            return bound == s
        if isinstance(s, Var) or p.sym != s.sym:
            return False
        return all(walk(pa, sa) for pa, sa in zip(p.args, s.args))

    return sigma if walk(pattern, subject) else None


def _occurs(name: str, t: Term) -> bool:
    if isinstance(t, Var):
        return t.name == name
    return any(_occurs(name, a) for a in t.args)


def unify_terms(s: Term, t: Term) -> Optional[dict[str, Term]]:
    """Most general unifier of s and t (with occurs check), or None."""
    sigma: dict[str, Term] = {}
    work = [(s, t)]
    while work:
        a, b = work.pop()
        a = apply_subst(a, sigma)
        b = apply_subst(b, sigma)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a.name, b):
                return None
            bind = {a.name: b}
            sigma = {k: apply_subst(v, bind) for k, v in sigma.items()}
            sigma[a.name] = b
        elif isinstance(b, Var):
            work.append((b, a))
        elif a.sym == b.sym:
            work.extend(zip(a.args, b.args))
        else:
            return None
    return sigma


_fresh_counter = itertools.count(1)


def fresh_var() -> Var:
    """A variable that cannot clash with parsed input (% is not a token char)."""
    return Var(f"%{next(_fresh_counter)}")


def rename_apart(t: Term) -> Term:
    """Replace every variable of t consistently by a fresh one."""
    ren = {x: fresh_var() for x in variables(t)}
    return apply_subst(t, ren)


def is_basic(t: Term) -> bool:
    """Defined or marked root with arguments built from constructors and variables."""
    if not isinstance(t, App):
        return False
    if t.sym.kind not in (SymbolKind.DEFINED, SymbolKind.MARKED):
        return False

    def constructor_term(s: Term) -> bool:
        if isinstance(s, Var):
            return True
        return s.sym.kind is SymbolKind.CONSTRUCTOR and all(
            constructor_term(a) for a in s.args
        )

    return all(constructor_term(a) for a in t.args)


@dataclass(frozen=True)
class ReplacementMap:
    """Argument positions where rewriting (and hence monotonicity) is required."""

    entries: Mapping[Symbol, frozenset[int]] = field(default_factory=dict)
    default_all: bool = False

    def positions_for(self, sym: Symbol) -> frozenset[int]:
        got = self.entries.get(sym)
        if got is not None:
            return got
        if self.default_all:
            return frozenset(range(1, sym.arity + 1))
        return frozenset()


def full_map() -> ReplacementMap:
    return ReplacementMap({}, default_all=True)


class _CompoundEntries(dict):
    """Lazy map giving all positions to compound symbols, none to the rest."""

    def get(self, sym: Symbol, default=None):  # type: ignore[override]
        if sym.kind is SymbolKind.COMPOUND:
            return frozenset(range(1, sym.arity + 1))
        return frozenset()


def compound_only_map() -> ReplacementMap:
    """Full positions below compound symbols, nothing anywhere else."""
    return ReplacementMap(_CompoundEntries(), default_all=False)


def mu_positions(mu: ReplacementMap, t: Term) -> frozenset[Position]:
    """Positions of t reachable through mu-allowed argument slots."""
    out: set[Position] = set()

    def walk(s: Term, p: Position) -> None:
        out.add(p)
        if isinstance(s, App):
            for i in mu.positions_for(s.sym):
                if 1 <= i <= len(s.args):
                    walk(s.args[i - 1], p + (i,))

    walk(t, ())
    return frozenset(out)


def render(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.sym.display_name
    return f"{t.sym.display_name}({', '.join(render(a) for a in t.args)})"
