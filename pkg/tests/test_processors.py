from __future__ import annotations

import pytest

from polytrs.dependency_pairs import (
    dt_problem,
    enumerate_derivation_trees,
    rhs_components,
    tree_size_restricted,
    trim,
    wdp_problem,
)
from polytrs.framework import (
    Bound,
    Problem,
    StartKind,
    StartTerms,
    is_innermost,
    problems_equal,
)
from polytrs.interpretations import synthesize
from polytrs.processors import (
    StrategyConfig,
    apply_processor,
    combine,
    default_strategy,
    interp_from_json,
    interp_to_json,
)
from polytrs.proofs import Assumption, Axiom, render_proof
from polytrs.terms import App
from tests.conftest import constructor, marked_sym

P0 = Bound.poly(0)
P1 = Bound.poly(1)
P2 = Bound.poly(2)
UNK = Bound.unknown()


def num(p, n):
    t = App(constructor(p, "0"))
    for _ in range(n):
        t = App(constructor(p, "s"), (t,))
    return t


def strict_labels(p: Problem) -> list[str]:
    return [r.label for r in p.strict]


def weak_labels(p: Problem) -> list[str]:
    return [r.label for r in p.weak]


class TestCombine:
    def test_const(self):
        assert combine(("const", P2), []) == P2
        assert combine(("const", UNK), [P1]) == UNK

    def test_identity(self):
        assert combine(("identity",), [P2]) == P2
        assert combine(("identity",), []) == P0

    def test_sum_takes_max_degree(self):
        assert combine(("sum",), [P1, P2, P0]) == P2
        assert combine(("sum",), []) == P0
        assert combine(("sum",), [P1, UNK]) == UNK

    def test_product_adds_degrees(self):
        assert combine(("product",), [P1, P2]) == Bound.poly(3)
        assert combine(("product",), [P1]) == P1
        assert combine(("product",), [UNK, P0]) == UNK

    def test_unknown_combinator(self):
        with pytest.raises(ValueError):
            combine(("average",), [P1])


class TestInterpJson:
    def test_roundtrip(self, mult_dt):
        pair = synthesize(
            Problem(
                strict_dps=tuple(d for d in mult_dt.dps if d.label in {"1", "2"}),
                strict_trs=(),
                weak_dps=(),
                weak_trs=(),
                q=mult_dt.q,
                start_terms=mult_dt.start_terms,
                signature=mult_dt.signature,
            ),
            1,
            1,
        )
        assert pair is not None
        obj = interp_to_json(pair.interp)
        assert interp_from_json(obj).entries == dict(pair.interp.entries)

    def test_sorted_output(self, mult_dt):
        pair = synthesize(
            Problem(
                strict_dps=tuple(d for d in mult_dt.dps if d.label in {"1", "2"}),
                strict_trs=(),
                weak_dps=(),
                weak_trs=(),
                q=mult_dt.q,
                start_terms=mult_dt.start_terms,
                signature=mult_dt.signature,
            ),
            1,
            1,
        )
        obj = interp_to_json(pair.interp)
        keys = [(e["symbol"]["kind"], e["symbol"]["name"]) for e in obj]
        assert keys == sorted(keys)


class TestDispatch:
    def test_unknown_processor_raises(self, mult_problem):
        with pytest.raises(ValueError):
            apply_processor("shrink", {}, mult_problem)

    def test_malformed_params_reject(self, mult_dt):
        assert apply_processor("predecessor_estimation", {}, mult_dt) is None
        assert apply_processor("complexity_pair", {}, mult_dt) is None

    def test_input_problem_unchanged(self, mult_dt):
        snapshot = Problem(
            strict_dps=mult_dt.strict_dps,
            strict_trs=mult_dt.strict_trs,
            weak_dps=mult_dt.weak_dps,
            weak_trs=mult_dt.weak_trs,
            q=mult_dt.q,
            start_terms=mult_dt.start_terms,
            signature=mult_dt.signature,
        )
        apply_processor("predecessor_estimation", {"rules": ["1", "3"]}, mult_dt)
        assert problems_equal(mult_dt, snapshot)


class TestEmpty:
    def test_applies_to_empty_strict(self, mult_problem):
        p = Problem(
            strict_dps=(),
            strict_trs=(),
            weak_dps=(),
            weak_trs=mult_problem.strict_trs,
            q=mult_problem.q,
            start_terms=mult_problem.start_terms,
            signature=mult_problem.signature,
        )
        subs, comb = apply_processor("empty", {}, p)
        assert subs == [] and comb == ("const", P0)

    def test_rejects_remaining_strict(self, mult_problem):
        assert apply_processor("empty", {}, mult_problem) is None


class TestDecompose:
    def test_splits_relative_to_rest(self, mult_problem):
        subs, comb = apply_processor(
            "decompose", {"strict_part": ["c"]}, mult_problem
        )
        assert comb == ("sum",)
        first, second = subs
        assert strict_labels(first) == ["c"]
        assert weak_labels(first) == ["a", "b", "d"]
        assert strict_labels(second) == ["a", "b", "d"]
        assert weak_labels(second) == ["c"]
        for sub in subs:
            assert sub.q == mult_problem.q
            assert sub.start_terms == mult_problem.start_terms

    def test_rejects_improper_splits(self, mult_problem):
        for bad in ([], ["a", "b", "c", "d"], ["nope"], ["a", "a"]):
            assert (
                apply_processor("decompose", {"strict_part": bad}, mult_problem)
                is None
            )


class TestDpTransforms:
    def test_weak_dependency_pairs(self, mult_problem):
        subs, comb = apply_processor("weak_dependency_pairs", {}, mult_problem)
        assert comb == ("identity",)
        assert problems_equal(subs[0], wdp_problem(mult_problem))

    def test_dependency_tuples(self, mult_problem):
        subs, comb = apply_processor("dependency_tuples", {}, mult_problem)
        assert comb == ("identity",)
        assert problems_equal(subs[0], dt_problem(mult_problem))

    def test_rejects_existing_dps(self, mult_dt):
        assert apply_processor("weak_dependency_pairs", {}, mult_dt) is None
        assert apply_processor("dependency_tuples", {}, mult_dt) is None

    def test_dependency_tuples_need_innermost(self, mult_problem):
        full = Problem(
            strict_dps=(),
            strict_trs=mult_problem.strict_trs,
            weak_dps=(),
            weak_trs=(),
            q=(),
            start_terms=StartTerms.basic(),
            signature=mult_problem.signature,
        )
        assert apply_processor("dependency_tuples", {}, full) is None
        subs, _ = apply_processor("weak_dependency_pairs", {}, full)
        assert not is_innermost(subs[0])


class TestPredecessorEstimation:
    def test_moves_sinks_behind_their_sources(self, mult_dt):
        subs, comb = apply_processor(
            "predecessor_estimation", {"rules": ["1", "3"]}, mult_dt
        )
        assert comb == ("identity",)
        (sub,) = subs
        assert [d.label for d in sub.strict_dps] == ["2", "4"]
        assert [d.label for d in sub.weak_dps] == ["1", "3"]
        assert sub.weak_trs == mult_dt.weak_trs
        assert sub.q == mult_dt.q

    def test_self_looping_target_makes_no_progress(self, mult_dt):
        subs, _ = apply_processor(
            "predecessor_estimation", {"rules": ["4"]}, mult_dt
        )
        assert problems_equal(subs[0], mult_dt)

    def test_refusals(self, mult_dt, mult_problem):
        assert (
            apply_processor("predecessor_estimation", {"rules": []}, mult_dt) is None
        )
        assert (
            apply_processor("predecessor_estimation", {"rules": ["9"]}, mult_dt)
            is None
        )
        assert (
            apply_processor(
                "predecessor_estimation", {"rules": ["1", "1"]}, mult_dt
            )
            is None
        )
        assert (
            apply_processor("predecessor_estimation", {"rules": ["a"]}, mult_problem)
            is None
        )


def pe_then(p: Problem) -> Problem:
    subs, _ = apply_processor("predecessor_estimation", {"rules": ["1", "3"]}, p)
    return subs[0]


class TestRemoveWeakSuffix:
    def test_drops_closed_weak_set(self, mult_dt):
        p = pe_then(mult_dt)
        subs, comb = apply_processor("remove_weak_suffix", {"rules": ["1", "3"]}, p)
        assert comb == ("identity",)
        (sub,) = subs
        assert sub.weak_dps == ()
        assert sub.strict_dps == p.strict_dps
        assert sub.weak_trs == p.weak_trs

    def test_rejects_open_suffix(self, mult_dt):
        shuffled = Problem(
            strict_dps=tuple(d for d in mult_dt.dps if d.label == "2"),
            strict_trs=(),
            weak_dps=tuple(d for d in mult_dt.dps if d.label != "2"),
            weak_trs=mult_dt.weak_trs,
            q=mult_dt.q,
            start_terms=mult_dt.start_terms,
            signature=mult_dt.signature,
        )
        assert (
            apply_processor("remove_weak_suffix", {"rules": ["4"]}, shuffled) is None
        )
        subs, _ = apply_processor(
            "remove_weak_suffix", {"rules": ["1", "3"]}, shuffled
        )
        assert [d.label for d in subs[0].weak_dps] == ["4"]

    def test_needs_all_dp_strict_part(self, mult_dt, mult_problem):
        p = wdp_problem(mult_problem)  # strict part still contains TRS rules
        assert apply_processor("remove_weak_suffix", {"rules": []}, p) is None
        assert apply_processor("remove_weak_suffix", {"rules": ["1"]}, p) is None
        assert (
            apply_processor("remove_weak_suffix", {"rules": []}, mult_dt) is None
        )


def simplified(mult_dt: Problem) -> Problem:
    p = pe_then(mult_dt)
    subs, _ = apply_processor("remove_weak_suffix", {"rules": ["1", "3"]}, p)
    return subs[0]


class TestDgDecomposition:
    def test_splits_along_closed_down_set(self, mult_dt):
        p = simplified(mult_dt)
        subs, comb = apply_processor(
            "dependency_graph_decomposition",
            {"strict_down": ["2"], "weak_down": []},
            p,
        )
        assert comb == ("product",)
        up, down = subs
        assert [d.label for d in up.strict_dps] == ["4"]
        assert up.weak_dps == ()
        assert [d.label for d in down.strict_dps] == ["2"]
        assert [d.label for d in down.weak_dps] == ["4a", "4b"]
        assert {
            (d.label, len(rhs_components(d))) for d in down.weak_dps
        } == {("4a", 1), ("4b", 1)}
        assert up.weak_trs == p.weak_trs and down.weak_trs == p.weak_trs

    def test_strict_dps_are_partitioned(self, mult_dt):
        p = simplified(mult_dt)
        subs, _ = apply_processor(
            "dependency_graph_decomposition", {"strict_down": ["2"]}, p
        )
        up, down = subs
        assert set(up.strict_dps) | set(down.strict_dps) == set(p.strict_dps)
        assert not set(up.strict_dps) & set(down.strict_dps)

    def test_refusals(self, mult_dt, mult_problem):
        p = simplified(mult_dt)
        for bad in (
            {"strict_down": ["2", "4"]},  # nothing left upstairs
            {"strict_down": ["4"]},  # not forward closed
            {"strict_down": []},
            {"strict_down": ["7"]},
            {"strict_down": ["2"], "weak_down": ["9"]},
        ):
            assert (
                apply_processor("dependency_graph_decomposition", bad, p) is None
            )
        assert (
            apply_processor(
                "dependency_graph_decomposition",
                {"strict_down": ["a"]},
                mult_problem,
            )
            is None
        )

    def test_desk_scale_soundness(self, mult_dt):
        """Tree-size inequality behind the product combinator, checked on
        every derivation tree from a small start term."""
        p = simplified(mult_dt)
        down_rules = tuple(d for d in p.strict_dps if d.label == "2")
        up_rules = tuple(d for d in p.strict_dps if d.label == "4")
        keep_up = tuple(r for r in p.all_rules if r not in down_rules)
        width = max(len(rhs_components(d)) for d in p.dps)

        def topmost_down(node):
            if node.rule is not None and node.rule in down_rules:
                yield node
                return
            for child in node.children:
                yield from topmost_down(child)

        start = App(marked_sym(mult_dt, "times"), (num(mult_dt, 2), num(mult_dt, 1)))
        checked = 0
        for tr in enumerate_derivation_trees(p, start, 14):
            total = tree_size_restricted(tr, p.strict)
            up = tree_size_restricted(trim(tr, keep_up), up_rules)
            down = max(
                (tree_size_restricted(t, down_rules) for t in topmost_down(tr)),
                default=0,
            )
            assert total <= up + max(1, up * width) * down
            checked += 1
        assert checked > 1


class TestComplexityPairProcessor:
    def plus_only(self, mult_dt: Problem) -> Problem:
        return Problem(
            strict_dps=tuple(d for d in mult_dt.dps if d.label in {"1", "2"}),
            strict_trs=(),
            weak_dps=(),
            weak_trs=(),
            q=mult_dt.q,
            start_terms=mult_dt.start_terms,
            signature=mult_dt.signature,
        )

    def test_accepts_synthesized_pair(self, mult_dt):
        p = self.plus_only(mult_dt)
        pair = synthesize(p, 1, 1)
        params = {"interpretation": interp_to_json(pair.interp)}
        subs, comb = apply_processor("complexity_pair", params, p)
        assert subs == []
        assert comb == ("const", P1)

    def test_rejects_non_orienting_interp(self, mult_dt):
        p = self.plus_only(mult_dt)
        pair = synthesize(p, 1, 1)
        obj = interp_to_json(pair.interp)
        for entry in obj:
            entry["lin"] = [0] * len(entry["lin"])
            entry["const"] = 0
        assert (
            apply_processor("complexity_pair", {"interpretation": obj}, p) is None
        )

    def test_rejects_non_monotone_interp(self, mult_problem):
        # [times](x, y) = 1 orients the base case but is not monotone, and
        # the strict part here is a plain rule, so the full map is required.
        p = Problem(
            strict_dps=(),
            strict_trs=tuple(r for r in mult_problem.strict_trs if r.label == "c"),
            weak_dps=(),
            weak_trs=tuple(r for r in mult_problem.strict_trs if r.label != "c"),
            q=mult_problem.q,
            start_terms=mult_problem.start_terms,
            signature=mult_problem.signature,
        )
        zero = {"name": "0", "arity": 0, "kind": "constructor"}
        s = {"name": "s", "arity": 1, "kind": "constructor"}
        plus = {"name": "plus", "arity": 2, "kind": "defined"}
        times = {"name": "times", "arity": 2, "kind": "defined"}
        interp = [
            {"symbol": zero, "lin": [], "sq": [], "const": 0},
            {"symbol": s, "lin": [1], "sq": [0], "const": 0},
            {"symbol": plus, "lin": [0, 1], "sq": [0, 0], "const": 0},
            {"symbol": times, "lin": [0, 0], "sq": [0, 0], "const": 1},
        ]
        assert (
            apply_processor("complexity_pair", {"interpretation": interp}, p) is None
        )

    def test_missing_entry_rejects(self, mult_dt):
        p = self.plus_only(mult_dt)
        pair = synthesize(p, 1, 1)
        obj = interp_to_json(pair.interp)[:-1]
        assert (
            apply_processor("complexity_pair", {"interpretation": obj}, p) is None
        )


class TestDefaultStrategy:
    def test_empty_strict_is_an_axiom(self, mult_problem):
        p = Problem(
            strict_dps=(),
            strict_trs=(),
            weak_dps=(),
            weak_trs=mult_problem.strict_trs,
            q=mult_problem.q,
            start_terms=mult_problem.start_terms,
            signature=mult_problem.signature,
        )
        proof = default_strategy(p)
        assert isinstance(proof, Axiom)
        assert proof.judgement.bound == P0

    def test_step_cap_reports_exhaustion(self, mult_problem):
        proof = default_strategy(mult_problem, StrategyConfig(step_cap=0))
        assert isinstance(proof, Assumption)
        assert proof.note == "step budget exhausted"
        assert "[open" in render_proof(proof)

    def test_explicit_starts_stay_open(self, mult_problem):
        p = Problem(
            strict_dps=(),
            strict_trs=mult_problem.strict_trs,
            weak_dps=(),
            weak_trs=(),
            q=mult_problem.q,
            start_terms=StartTerms.explicit((num(mult_problem, 3),)),
            signature=mult_problem.signature,
        )
        proof = default_strategy(p)
        assert isinstance(proof, Assumption)
        assert proof.judgement.bound == UNK
