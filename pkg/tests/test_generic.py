"""Seeded generic approximations: growth, saturation, games."""
from __future__ import annotations

import pytest

from fraisse.amalgamation import P2Spec, graph_p2, in_rp2
from fraisse.errors import AdequacyError, InputError
from fraisse.generic import (back_and_forth, extend_one_point,
                             find_realization, graph_extension,
                             grow_random, homogeneity_probe, mix64,
                             new_generic, one_point_extensions, saturate,
                             saturate_until_stable, verify_saturation)
from fraisse.structures import undirected_graph

from _naive import naive_is_isomorphic


def fresh(seed=3, points=6):
    o = new_generic(graph_p2(), seed)
    grow_random(o, points)
    return o


def test_new_generic_requires_adequacy():
    with pytest.raises(AdequacyError):
        new_generic(P2Spec([undirected_graph(0, []),
                            undirected_graph(1, [])]), 0)


def test_growth_is_deterministic():
    a, b = fresh(11, 10), fresh(11, 10)
    assert a.current == b.current
    assert fresh(12, 10).current != a.current


def test_grown_structure_stays_permitted():
    o = fresh(5, 12)
    assert in_rp2(o.p2, o.current)


def test_mix64_spreads():
    vals = {mix64(0, i) for i in range(100)}
    assert len(vals) == 100
    assert mix64(1, 2) != mix64(2, 1)


def test_one_point_extensions_count():
    # over a k-point base in a graph: one 1-type, one link choice per
    # base point and direction pair
    p2 = graph_p2()
    o = fresh(3, 4)
    pts = [o.point_struct(v) for v in range(3)]
    assert len(one_point_extensions(p2, [], [])) == 1
    assert len(one_point_extensions(p2, pts[:1], (0,))) == 2
    assert len(one_point_extensions(p2, pts[:2], (0, 1))) == 4
    assert len(one_point_extensions(p2, pts, (0, 1, 2))) == 8


def test_extend_one_point_realizes_pattern():
    o = fresh(4, 5)
    tau = graph_extension(o.vocab, (0, 2), adjacent=(2,))
    v = extend_one_point(o, tau)
    s = o.current
    assert (2, v) in s.tables["adj"]
    assert (0, v) not in s.tables["adj"]


def test_find_realization():
    o = fresh(4, 5)
    tau = graph_extension(o.vocab, (0,), adjacent=(0,))
    v = find_realization(o.current, tau)
    if v is not None:
        assert (0, v) in o.current.tables["adj"] and v != 0


def test_saturate_until_stable_covers_universe():
    o = fresh(7, 8)
    rep = saturate_until_stable(o, 2)
    assert rep.stable
    assert rep.prefix == o.size
    assert o.saturated_prefix(2) == o.size
    ok, failures = verify_saturation(o.p2, o.current, 2)
    assert ok and failures == []


def test_single_pass_records_pre_pass_prefix():
    o = fresh(9, 6)
    pre = o.size
    rep = saturate(o, 3)
    assert not rep.exhausted
    assert rep.pre_size == pre
    assert o.saturated_prefix(3) == pre
    assert o.saturated_prefix(2) >= pre
    ok, _ = verify_saturation(o.p2, o.current, 3, prefix=pre)
    assert ok


def test_budget_exhaustion_is_flagged_and_unrecorded():
    o = fresh(9, 8)
    rep = saturate(o, 2, new_point_budget=1)
    assert rep.exhausted
    assert o.saturated_prefix(2) == 0


def test_saturation_level_zero_needs_a_point_of_each_type():
    o = new_generic(graph_p2(), 1)
    assert o.size == 0
    saturate(o, 0)
    assert o.size == 1
    assert o.saturated_prefix(0) == 0


def test_negative_level_rejected():
    with pytest.raises(InputError):
        saturate(fresh(), -1)


def test_two_stable_oracles_are_2_equivalent():
    a = fresh(21, 8)
    b = fresh(22, 9)
    saturate_until_stable(a, 2)
    saturate_until_stable(b, 2)
    rep = back_and_forth(a.current, b.current, 2)
    assert rep.equivalent, rep.reason


def test_back_and_forth_separates_easy_pairs():
    edge = undirected_graph(2, [(0, 1)])
    nonedge = undirected_graph(2, [])
    rep = back_and_forth(edge, nonedge, 2)
    assert not rep.equivalent
    assert back_and_forth(edge, edge, 2).equivalent


def test_back_and_forth_replies_need_extension_witnesses():
    # a round's reply must preserve one-point extension behaviour, so a
    # single round already separates an edge from a non-edge
    edge = undirected_graph(2, [(0, 1)])
    nonedge = undirected_graph(2, [])
    rep = back_and_forth(edge, nonedge, 1)
    assert not rep.equivalent and rep.moves
    pt = undirected_graph(1, [])
    assert back_and_forth(pt, pt, 3).equivalent


def test_homogeneity_probe_on_stable_oracle():
    o = fresh(13, 8)
    saturate_until_stable(o, 2)
    rep = homogeneity_probe(o, 2, 30)
    assert rep.successes == rep.trials


def test_log_records_operations():
    o = fresh(3, 4)
    saturate_until_stable(o, 1)
    ops = {e.op for e in o.log}
    assert "extend" in ops and "saturate" in ops


def test_snapshots_are_independent():
    o = fresh(3, 4)
    before = o.current
    saturate(o, 1)
    assert before.size == 4
    assert o.current.size >= before.size
    assert naive_is_isomorphic(before, before)
