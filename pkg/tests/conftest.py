"""Shared fixtures: one seeded generic approximation and its covers."""
from __future__ import annotations

import pytest

from fraisse.amalgamation import graph_p2
from fraisse.doubled_cover import build_double, build_expansion_star, quotient
from fraisse.generic import (grow_random, new_generic, saturate,
                             saturate_until_stable)


@pytest.fixture(scope="session")
def gp2():
    return graph_p2()


class Pipeline:
    """Seed-7 random-graph approximation with 2-stable and 3-covered
    snapshots, plus the doubled covers built from them."""

    def __init__(self):
        self.p2 = graph_p2()
        o = new_generic(self.p2, 7)
        grow_random(o, 32)
        saturate_until_stable(o, 2)
        self.f2 = o.current
        self.sat2 = dict(o.saturation)
        self.d2 = build_double(self.f2, self.sat2)
        self.q2 = quotient(self.d2)
        self.mstar = build_expansion_star(self.d2)
        self.qstar = quotient(self.d2, ambient=self.mstar)
        saturate(o, 3)
        self.f3 = o.current
        self.d3 = build_double(self.f3, o.saturation)
        self.oracle = o


@pytest.fixture(scope="session")
def pipeline():
    return Pipeline()


class SmallPipeline(Pipeline):
    """Same shape at desk scale: quick enough for arity-4 type tables."""

    def __init__(self):
        self.p2 = graph_p2()
        o = new_generic(self.p2, 5)
        grow_random(o, 12)
        saturate_until_stable(o, 2)
        self.f2 = o.current
        self.sat2 = dict(o.saturation)
        self.d2 = build_double(self.f2, self.sat2)
        self.q2 = quotient(self.d2)
        self.mstar = build_expansion_star(self.d2)
        self.qstar = quotient(self.d2, ambient=self.mstar)
        self.oracle = o


@pytest.fixture(scope="session")
def small_pipeline():
    return SmallPipeline()
