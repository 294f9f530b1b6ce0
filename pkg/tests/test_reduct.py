"""Typed universes, partition refinement, and reduct checks."""
from __future__ import annotations

import pytest

from fraisse.errors import InputError, InvalidElementError, ParseError
from fraisse.reduct import (definable_as_union, from_quotient,
                            from_structure, is_reduct,
                            pair_family_universe, parse_typed_universe,
                            partition_refines, save_typed_universe)
from fraisse.structures import expand_with_marks, undirected_graph

P3 = undirected_graph(3, [(0, 1), (1, 2)])


# -- refinement basics --------------------------------------------------------------


def test_partition_refines_itself():
    u = from_structure(P3, 2)
    rep = partition_refines(u, u, 2)
    assert rep.verdict == "refines"
    assert rep.tuples_checked == 9
    assert rep.counterexample is None


def test_is_reduct_reflexive():
    u = from_structure(P3, 3)
    rep = is_reduct(u, u, 3)
    assert rep.holds
    assert [r.arity for r in rep.per_arity] == [1, 2, 3]


def test_marks_refine_the_plain_types():
    marked = expand_with_marks(P3, [("red", [0])])
    fine = from_structure(marked, 2)
    coarse = from_structure(P3, 2)
    assert is_reduct(fine, coarse, 2).holds
    rep = is_reduct(coarse, fine, 2)
    assert not rep.holds
    assert rep.failing_arity == 1
    prior, tup, key = rep.counterexample
    assert fine.key_of(prior) != fine.key_of(tup)
    assert coarse.key_of(prior) == coarse.key_of(tup) == key


def test_carrier_mismatch_rejected():
    a = from_structure(P3, 2)
    b = from_structure(undirected_graph(2, []), 2)
    with pytest.raises(InputError):
        partition_refines(a, b, 1)


def test_arity_out_of_range_rejected():
    u = from_structure(P3, 2)
    with pytest.raises(InputError):
        partition_refines(u, u, 3)
    with pytest.raises(InputError):
        partition_refines(u, u, 0)


def test_typed_universe_validates_tuples():
    u = from_structure(P3, 2)
    with pytest.raises(InputError):
        u.type_of(())
    with pytest.raises(InputError):
        u.type_of((0, 1, 2))
    with pytest.raises(InvalidElementError):
        u.type_of((7,))


# -- definability -----------------------------------------------------------------


def test_adjacency_is_a_union_of_pair_types():
    u = from_structure(P3, 2)
    rep = definable_as_union(u, P3.tables["adj"], 2)
    assert rep.verdict == "definable"
    assert len(rep.classes_inside) == 1


def test_directed_half_edge_is_not_definable():
    u = from_structure(P3, 2)
    rep = definable_as_union(u, {(0, 1)}, 2)
    assert rep.verdict == "undefinable"
    tuple_in, tuple_out, key = rep.witness
    assert u.key_of(tuple_in) == u.key_of(tuple_out) == key


def test_definability_rejects_bad_rows():
    u = from_structure(P3, 2)
    with pytest.raises(InvalidElementError):
        definable_as_union(u, {(0, 9)}, 2)
    with pytest.raises((InputError, InvalidElementError)):
        definable_as_union(u, {(0,)}, 2)


# -- persistence --------------------------------------------------------------------


def test_save_parse_round_trip():
    u = from_structure(P3, 2)
    back = parse_typed_universe(save_typed_universe(u, "demo"))
    assert (back.size, back.n_max, back.label) == (3, 2, "demo")
    assert is_reduct(back, u, 2).holds and is_reduct(u, back, 2).holds


def test_parse_rejects_incomplete_table():
    text = save_typed_universe(from_structure(P3, 2), "demo")
    broken = "\n".join(line for line in text.splitlines()
                       if not line.startswith("0 1 :"))
    with pytest.raises(ParseError):
        parse_typed_universe(broken)


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        parse_typed_universe("not a typed universe")


# -- the cover geometry as typed universes ---------------------------------------------


def test_pair_family_determines_pairs_but_not_triples(small_pipeline):
    q = small_pipeline.q2
    g = from_quotient(q, 3)
    g0 = pair_family_universe(q, 3)
    assert is_reduct(g0, g, 2).holds
    rep = is_reduct(g0, g, 3)
    assert not rep.holds
    assert rep.failing_arity == 3
    prior, tup, _ = rep.counterexample
    assert g0.key_of(prior) == g0.key_of(tup)
    assert g.key_of(prior) != g.key_of(tup)


def test_marked_pair_family_determines_triples(small_pipeline):
    g = from_quotient(small_pipeline.q2, 3)
    gstar0 = pair_family_universe(small_pipeline.qstar, 3)
    assert is_reduct(gstar0, g, 3).holds


def test_emitted_files_interoperate(small_pipeline, tmp_path):
    q = small_pipeline.q2
    src = tmp_path / "src.txt"
    tgt = tmp_path / "tgt.txt"
    src.write_text(save_typed_universe(pair_family_universe(q, 2), "pairs"))
    tgt.write_text(save_typed_universe(from_quotient(q, 2), "types"))
    a = parse_typed_universe(src.read_text())
    b = parse_typed_universe(tgt.read_text())
    assert is_reduct(a, b, 2).holds
