from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from gadgetbots.corpus import random_nets
from gadgetbots.petri import (
    NotEnabled, PetriNet, apply_rule, backward_basis, coverable, coverage_to_production, enabled,
    forward_reach, production, reachable_exact, replay_rules, semiflows,
)


def net(*rules, dishes=None):
    n = len(rules[0][0]) if rules else len(dishes)
    return PetriNet(dishes or tuple("abcdefg"[:n]), rules)


def test_apply_rule():
    assert apply_rule(net(((1, 0), (0, 2))), (1, 0), 0) == (0, 2)
    with pytest.raises(NotEnabled):
        apply_rule(net(((2,), (0,))), (1,), 0)


def test_forward_reach_examples():
    r = forward_reach(net(dishes=("a", "b")), (1, 0), 5, 100)
    assert r.markings == {(1, 0)} and r.exhausted
    r = forward_reach(net(((1, 0), (0, 1))), (1, 0), 5, 100)
    assert r.markings == {(1, 0), (0, 1)} and r.exact


def test_forward_reach_volume_cap():
    r = forward_reach(net(((1,), (2,))), (1,), 4, 100)
    assert r.markings == {(1,), (2,), (3,), (4,)} and r.volume_pruned and not r.exact


def test_coverable_examples():
    assert coverable(net(((1, 0), (1, 1))), (1, 0), (0, 1))
    assert not coverable(net(dishes=("a",)), (0,), (1,))


def test_production_examples():
    n = net(((1, 0), (1, 0)))
    assert production(n, (0, 1), "b")
    assert not production(n, (1, 0), "b")


def test_reachable_exact_examples():
    n = net(((1, 0), (0, 1)))
    assert reachable_exact(n, (1, 0), (1, 0), 5, 100) .path == ()
    r = reachable_exact(n, (1, 0), (0, 1), 5, 100)
    assert r.verdict == "yes" and r.path == (0,)
    assert reachable_exact(n, (2, 0), (2, 2), 3, 100).verdict == "no-within-bounds"
    assert reachable_exact(n, (2, 0), (3, 0), 5, 100).verdict == "no"


def test_coverage_to_production_zero_target():
    n2, s2, d = coverage_to_production(net(((1, 0), (0, 1))), (0, 0), (0, 0))
    assert production(n2, s2, d)


def test_bad_vectors():
    with pytest.raises(ValueError):
        PetriNet(("a",), [((1, 2), (0,))])
    with pytest.raises(ValueError):
        PetriNet(("a",), [((-1,), (0,))])


rules = st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.tuples(*[st.integers(0, 2)] * n), st.tuples(*[st.integers(0, 2)] * n)),
             min_size=1, max_size=3),
))
marks = lambda n: st.tuples(*[st.integers(0, 3)] * n)  # noqa: E731


@settings(max_examples=150, deadline=None)
@given(rules.flatmap(lambda x: st.tuples(st.just(x), marks(x[0]), marks(x[0]), marks(x[0]))))
def test_coverability_properties(data):
    (n, rs), start, target, bump = data
    pn = PetriNet(tuple("abc"[:n]), rs)
    for k in range(len(rs)):
        if enabled(pn, start, k):
            d1 = apply_rule(pn, start, k)
            assert sum(d1) == sum(start) - sum(rs[k][0]) + sum(rs[k][1])
    basis, history = backward_basis(pn, target)
    for b in basis:
        assert not any(c != b and all(x >= y for x, y in zip(b, c)) for c in basis)
    for older, newer in zip(history, history[1:]):
        # every old element is dominated by (still covered by) some newer element
        assert all(any(all(x >= y for x, y in zip(o, m)) for m in newer) for o in older)
    if coverable(pn, start, target):
        bigger = tuple(x + y for x, y in zip(start, bump))
        assert coverable(pn, bigger, target)
    fwd = forward_reach(pn, start, 8, 50_000)
    if fwd.exact:
        truth = any(all(x >= y for x, y in zip(m, target)) for m in fwd.markings)
        assert coverable(pn, start, target) == truth
    n2, s2, d = coverage_to_production(pn, start, target)
    assert production(n2, s2, d) == coverable(pn, start, target)
    r = reachable_exact(pn, start, target, 8, 50_000)
    if r.found:
        assert replay_rules(pn, start, r.path) == target
    elif r.complete and fwd.exhausted:
        assert target not in fwd.markings


def test_random_net_sample_agrees():
    for pn, start, target in random_nets(30, seed=7):
        fwd = forward_reach(pn, start, 8, 200_000)
        if fwd.exact:
            truth = any(all(x >= y for x, y in zip(m, target)) for m in fwd.markings)
            assert coverable(pn, start, target) == truth


def test_semiflows_of_a_cycle():
    # a -> b -> c -> a conserves the total; a -> b -> nothing conserves nothing
    assert semiflows(net(((1, 0, 0), (0, 1, 0)), ((0, 1, 0), (0, 0, 1)), ((0, 0, 1), (1, 0, 0)))) == ((1, 1, 1),)
    assert semiflows(net(((1, 0), (0, 1)), ((0, 1), (0, 0)))) == ()
    assert semiflows(net(((1, 0), (0, 2)))) == ((2, 1),)
    assert semiflows(net(((2, 0), (0, 1)))) == ((1, 2),)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_semiflows_are_minimal_invariants(seed):
    (pn, start, _), = random_nets(1, seed=seed)
    flows = semiflows(pn)
    supports = [frozenset(k for k, x in enumerate(y) if x) for y in flows]
    for y in flows:
        assert min(y) >= 0 and any(y)
        assert all(sum(a * (q - p) for a, p, q in zip(y, u, v)) == 0 for u, v in pn.rules)
    assert not any(a < b for a in supports for b in supports)
    level = [sum(a * b for a, b in zip(y, start)) for y in flows]
    for m in forward_reach(pn, start, 8, 5_000).markings:
        assert [sum(a * b for a, b in zip(y, m)) for y in flows] == level
