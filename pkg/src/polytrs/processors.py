"""Processors: side-condition-checked inference steps over complexity
problems, plus the default proof search built from them.

apply_processor is the single entry point both for the strategy and for
proof validation: given a processor id, JSON-level parameters and a problem
it either returns the generated sub-problems with a bound combinator, or
None when a side condition fails.  Parameters reference rules by label so
recorded proofs replay bit-for-bit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import reduce
from typing import Any, Optional, Sequence

from .dependency_pairs import dt_problem, wdp_problem
from .depgraph import DepGraph, estimate_dg, sep
from .framework import (
    Bound,
    Judgement,
    Problem,
    StartKind,
    bound_add,
    bound_mul,
    is_innermost,
)
from .interpretations import (
    OrderPair,
    PolyInterp,
    SymbolPoly,
    check_orientation,
    induced_bound,
    mu_monotone,
    synthesize,
    usable_replacement_map,
)
from .proofs import (
    Assumption,
    Axiom,
    Inference,
    ProofTree,
    is_closed,
    symbol_from_json,
    symbol_to_json,
)
from .rewriting import Rule

Combinator = tuple


def combine(comb: Combinator, bounds: Sequence[Bound]) -> Bound:
    kind = comb[0]
    if kind == "const":
        return comb[1]
    if kind == "identity":
        return bounds[0] if bounds else Bound.poly(0)
    if kind == "sum":
        return reduce(bound_add, bounds, Bound.poly(0))
    if kind == "product":
        return reduce(bound_mul, bounds, Bound.poly(0))
    raise ValueError(f"unknown combinator {kind!r}")


def interp_to_json(interp: PolyInterp) -> Any:
    entries = sorted(
        interp.entries.items(), key=lambda kv: (kv[0].kind.value, kv[0].name)
    )
    return [
        {
            "symbol": symbol_to_json(sym),
            "lin": list(sp.lin),
            "sq": list(sp.sq),
            "const": sp.const,
        }
        for sym, sp in entries
    ]


def interp_from_json(obj: Any) -> PolyInterp:
    return PolyInterp(
        {
            symbol_from_json(e["symbol"]): SymbolPoly(
                tuple(e["lin"]), tuple(e["sq"]), e["const"]
            )
            for e in obj
        }
    )


def _resolve(labels: Sequence[str], pool: Sequence[Rule]) -> Optional[tuple[Rule, ...]]:
    """The pool rules named by labels, in pool order; None on bad input."""
    if len(set(labels)) != len(labels):
        return None
    by_label = {r.label: r for r in pool}
    if any(lab not in by_label for lab in labels):
        return None
    wanted = set(labels)
    return tuple(r for r in pool if r.label in wanted)


def _empty(params: dict, p: Problem):
    if p.strict:
        return None
    return [], ("const", Bound.poly(0))


def _complexity_pair(params: dict, p: Problem):
    interp = interp_from_json(params["interpretation"])
    mu_strict = usable_replacement_map(p, "strict")
    mu_weak = usable_replacement_map(p, "weak")
    if not mu_monotone(interp, mu_strict):
        return None
    pair = OrderPair(interp, mu_strict, mu_weak)
    if not check_orientation(pair, p):
        return None
    return [], ("const", induced_bound(pair, p))


def _decompose(params: dict, p: Problem):
    s1 = _resolve(params["strict_part"], p.strict)
    if not s1 or len(s1) == len(p.strict):
        return None
    chosen = set(s1)
    p1 = Problem(
        strict_dps=tuple(d for d in p.strict_dps if d in chosen),
        strict_trs=tuple(r for r in p.strict_trs if r in chosen),
        weak_dps=p.weak_dps + tuple(d for d in p.strict_dps if d not in chosen),
        weak_trs=p.weak_trs + tuple(r for r in p.strict_trs if r not in chosen),
        q=p.q,
        start_terms=p.start_terms,
        signature=p.signature,
    )
    p2 = Problem(
        strict_dps=tuple(d for d in p.strict_dps if d not in chosen),
        strict_trs=tuple(r for r in p.strict_trs if r not in chosen),
        weak_dps=p.weak_dps + tuple(d for d in p.strict_dps if d in chosen),
        weak_trs=p.weak_trs + tuple(r for r in p.strict_trs if r in chosen),
        q=p.q,
        start_terms=p.start_terms,
        signature=p.signature,
    )
    return [p1, p2], ("sum",)


def _weak_dependency_pairs(params: dict, p: Problem):
    if p.dps:
        return None
    return [wdp_problem(p)], ("identity",)


def _dependency_tuples(params: dict, p: Problem):
    if p.dps:
        return None
    return [dt_problem(p)], ("identity",)


def _predecessor_estimation(params: dict, p: Problem):
    if not p.is_dp_problem():
        return None
    s1 = _resolve(params["rules"], p.strict_dps)
    if not s1:
        return None
    g = estimate_dg(p)
    pre = g.predecessors(s1)
    chosen = set(s1)
    strict_set = set(p.strict_dps)
    weak_set = set(p.weak_dps)
    new_strict = tuple(
        d
        for d in p.dps
        if (d in strict_set and d not in chosen) or d in pre
    )
    kept = set(new_strict)
    new_weak = tuple(
        d for d in p.dps if (d in weak_set or d in chosen) and d not in kept
    )
    sub = Problem(
        strict_dps=new_strict,
        strict_trs=p.strict_trs,
        weak_dps=new_weak,
        weak_trs=p.weak_trs,
        q=p.q,
        start_terms=p.start_terms,
        signature=p.signature,
    )
    return [sub], ("identity",)


def _remove_weak_suffix(params: dict, p: Problem):
    if not p.is_dp_problem():
        return None
    if not p.strict or any(not r.is_dp for r in p.strict):
        return None
    w1 = _resolve(params["rules"], p.weak_dps)
    if not w1:
        return None
    g = estimate_dg(p)
    if not g.is_forward_closed(w1):
        return None
    gone = set(w1)
    sub = Problem(
        strict_dps=p.strict_dps,
        strict_trs=p.strict_trs,
        weak_dps=tuple(d for d in p.weak_dps if d not in gone),
        weak_trs=p.weak_trs,
        q=p.q,
        start_terms=p.start_terms,
        signature=p.signature,
    )
    return [sub], ("identity",)


def _dg_decomposition(params: dict, p: Problem):
    if not p.is_dp_problem():
        return None
    s_down = _resolve(params["strict_down"], p.strict_dps)
    w_down = _resolve(params.get("weak_down", ()), p.weak_dps)
    if not s_down or w_down is None:
        return None
    if len(s_down) == len(p.strict_dps):
        return None
    down = set(s_down) | set(w_down)
    g = estimate_dg(p)
    if not g.is_forward_closed(down):
        return None
    s_up = tuple(d for d in p.strict_dps if d not in down)
    w_up = tuple(d for d in p.weak_dps if d not in down)
    if not (g.predecessors(down) - down <= set(s_up)):
        return None
    p_up = Problem(
        strict_dps=s_up,
        strict_trs=p.strict_trs,
        weak_dps=w_up,
        weak_trs=p.weak_trs,
        q=p.q,
        start_terms=p.start_terms,
        signature=p.signature,
    )
    p_down = Problem(
        strict_dps=tuple(s_down),
        strict_trs=p.strict_trs,
        weak_dps=tuple(w_down) + sep(s_up + w_up),
        weak_trs=p.weak_trs,
        q=p.q,
        start_terms=p.start_terms,
        signature=p.signature,
    )
    return [p_up, p_down], ("product",)


_PROCESSORS = {
    "empty": _empty,
    "complexity_pair": _complexity_pair,
    "decompose": _decompose,
    "weak_dependency_pairs": _weak_dependency_pairs,
    "dependency_tuples": _dependency_tuples,
    "predecessor_estimation": _predecessor_estimation,
    "remove_weak_suffix": _remove_weak_suffix,
    "dependency_graph_decomposition": _dg_decomposition,
}


def apply_processor(
    proc: str, params: dict, p: Problem
) -> Optional[tuple[list[Problem], Combinator]]:
    """Run one processor; None when its side conditions reject (p, params).

    Malformed parameters (unknown labels, missing interpretation entries,
    rule sets that break problem invariants) count as rejection, since
    params may come from an untrusted serialized proof.
    """
    fn = _PROCESSORS.get(proc)
    if fn is None:
        raise ValueError(f"unknown processor {proc!r}")
    try:
        return fn(params, p)
    except (KeyError, ValueError):
        return None


# --- default proof search ---------------------------------------------------


@dataclass
class StrategyConfig:
    degree_max: int = 3
    coeff_max: int = 3
    timeout: Optional[float] = None
    step_cap: int = 500
    synth_limit: int = 60_000
    dgd_candidates: int = 8


class _SearchState:
    def __init__(self, cfg: StrategyConfig) -> None:
        self.remaining = cfg.step_cap
        self.deadline = (
            None if cfg.timeout is None else time.monotonic() + cfg.timeout
        )

    def timed_out(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline

    def spend(self) -> Optional[str]:
        """Charge one processor application; a reason means stop searching."""
        if self.remaining <= 0:
            return "step budget exhausted"
        self.remaining -= 1
        if self.timed_out():
            return "timeout"
        return None


def default_strategy(p: Problem, config: Optional[StrategyConfig] = None) -> ProofTree:
    """Search for a closed proof; open branches become assumptions.

    Pipeline: the empty axiom; dependency tuples (innermost) or weak
    dependency pairs on plain runtime problems; on DP problems predecessor
    estimation and weak-suffix removal until stable, then complexity pairs,
    then dependency graph decomposition over forward-closed candidate
    splits; on derivational problems complexity pairs and greedy
    decomposition.
    """
    cfg = config or StrategyConfig()
    return _prove(p, cfg, _SearchState(cfg))


def _give_up(p: Problem, note: Optional[str] = None) -> Assumption:
    return Assumption(Judgement(p, Bound.unknown()), note)


def _mk_inference(
    proc: str,
    params: dict,
    p: Problem,
    premises: Sequence[ProofTree],
    comb: Combinator,
) -> Inference:
    bound = combine(comb, [pr.judgement.bound for pr in premises])
    return Inference(proc, params, Judgement(p, bound), tuple(premises))


def _chain(
    proc: str, params: dict, p: Problem, cfg: StrategyConfig, st: _SearchState
) -> Optional[Inference]:
    res = apply_processor(proc, params, p)
    if res is None:
        return None
    subs, comb = res
    premises = [_prove(sub, cfg, st) for sub in subs]
    return _mk_inference(proc, params, p, premises, comb)


def _prove(p: Problem, cfg: StrategyConfig, st: _SearchState) -> ProofTree:
    stop = st.spend()
    if stop is not None:
        return _give_up(p, stop)
    if not p.strict:
        return Axiom(Judgement(p, Bound.poly(0)))
    if p.start_terms.kind is StartKind.BASIC:
        proc = "dependency_tuples" if is_innermost(p) else "weak_dependency_pairs"
        node = _chain(proc, {}, p, cfg, st)
        return node if node is not None else _give_up(p)
    if p.is_dp_problem():
        return _prove_dp(p, cfg, st)
    if p.start_terms.kind is StartKind.ALL:
        return _prove_derivational(p, cfg, st)
    return _give_up(p)


def _prove_dp(p: Problem, cfg: StrategyConfig, st: _SearchState) -> ProofTree:
    g = estimate_dg(p)
    strict_set = set(p.strict_dps)
    weak_set = set(p.weak_dps)

    # estimate strict DPs whose successors are all weak already; keeping the
    # predecessors strict guarantees the strict component shrinks
    targets = tuple(d for d in p.strict_dps if g.successors((d,)) <= weak_set)
    if targets and g.predecessors(targets) <= strict_set:
        node = _chain(
            "predecessor_estimation",
            {"rules": [d.label for d in targets]},
            p,
            cfg,
            st,
        )
        if node is not None:
            return node

    if p.strict and all(r.is_dp for r in p.strict):
        removable = tuple(
            w for w in p.weak_dps if g.forward_closure((w,)) <= weak_set
        )
        if removable:
            node = _chain(
                "remove_weak_suffix",
                {"rules": [w.label for w in removable]},
                p,
                cfg,
                st,
            )
            if node is not None:
                return node

    node = _try_complexity_pair(p, cfg, st)
    if node is not None:
        return node

    for s_down, w_down in _dgd_candidates(p, g, cfg):
        if st.timed_out():
            return _give_up(p, "timeout")
        params = {"strict_down": s_down, "weak_down": w_down}
        res = apply_processor("dependency_graph_decomposition", params, p)
        if res is None:
            continue
        subs, comb = res
        up = _prove(subs[0], cfg, st)
        if not is_closed(up):
            continue
        down = _prove(subs[1], cfg, st)
        if not is_closed(down):
            continue
        return _mk_inference(
            "dependency_graph_decomposition", params, p, [up, down], comb
        )
    return _give_up(p)


def _dgd_candidates(
    p: Problem, g: DepGraph, cfg: StrategyConfig
) -> list[tuple[list[str], list[str]]]:
    """Forward-closed down-sets seeded from single nodes, smallest first."""
    strict_set = set(p.strict_dps)
    seen: set[frozenset[Rule]] = set()
    ranked = []
    for d in p.dps:
        down = g.forward_closure((d,))
        if down in seen:
            continue
        seen.add(down)
        s_down = [r for r in p.strict_dps if r in down]
        if not s_down or len(s_down) == len(strict_set):
            continue
        w_down = [r for r in p.weak_dps if r in down]
        ranked.append(
            (
                len(down),
                sorted(r.label for r in down),
                [r.label for r in s_down],
                [r.label for r in w_down],
            )
        )
    ranked.sort(key=lambda c: (c[0], c[1]))
    return [(s, w) for _, _, s, w in ranked[: cfg.dgd_candidates]]


def _try_complexity_pair(
    p: Problem, cfg: StrategyConfig, st: _SearchState
) -> Optional[Inference]:
    """CP attempts at increasing degree and coefficient range.

    Small coefficient caps go first: they are searched orders of magnitude
    faster and yield simpler certificates.
    """
    for degree in range(1, min(cfg.degree_max, 2) + 1):
        for coeff_max in range(1, cfg.coeff_max + 1):
            if st.timed_out():
                return None
            pair = synthesize(p, degree, coeff_max, cfg.synth_limit)
            if pair is None:
                continue
            bound = induced_bound(pair, p)
            if bound.is_unknown:
                continue
            params = {
                "degree": degree,
                "coeff_max": coeff_max,
                "interpretation": interp_to_json(pair.interp),
            }
            if apply_processor("complexity_pair", params, p) is None:
                continue
            return Inference("complexity_pair", params, Judgement(p, bound), ())
    return None


def _prove_derivational(p: Problem, cfg: StrategyConfig, st: _SearchState) -> ProofTree:
    node = _try_complexity_pair(p, cfg, st)
    if node is not None:
        return node
    if len(p.strict) >= 2:
        for r in p.strict:
            params = {"strict_part": [r.label]}
            res = apply_processor("decompose", params, p)
            if res is None:
                continue
            subs, comb = res
            first = _try_complexity_pair(subs[0], cfg, st)
            if first is None:
                continue
            rest = _prove(subs[1], cfg, st)
            if not is_closed(rest):
                continue
            return _mk_inference("decompose", params, p, [first, rest], comb)
    return _give_up(p)
