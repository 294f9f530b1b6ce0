"""Reduct checking by type-partition refinement.

A typed universe assigns an opaque type to every tuple over a carrier,
up to a declared arity.  One universe refines another (on the same
carrier) when equal types in the first force equal types in the second,
arity by arity; the second is then a reduct of the first up to that
arity.  Everything here is exhaustive over labelled tuples, so verdicts
are exact for the given carrier."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

from .errors import InputError, InvalidElementError, ParseError
from .structures import FinStructure, TypeId, tuple_type


class TypedUniverse:
    """A carrier plus a type function on tuples of arity up to n_max."""

    __slots__ = ("size", "n_max", "label", "_fn", "_cache")

    def __init__(self, size: int, n_max: int, type_fn: Callable, label: str = "typed"):
        if size < 0:
            raise InputError("carrier size must be non-negative")
        if n_max < 1:
            raise InputError("typed universes need arity at least 1")
        self.size = size
        self.n_max = n_max
        self.label = label
        self._fn = type_fn
        self._cache: dict = {}

    def type_of(self, tup: Sequence[int]) -> TypeId:
        tup = tuple(int(x) for x in tup)
        if not tup or len(tup) > self.n_max:
            raise InputError(
                f"arity {len(tup)} outside this universe's range 1..{self.n_max}")
        if any(x < 0 or x >= self.size for x in tup):
            raise InvalidElementError(f"tuple {tup} leaves the carrier")
        hit = self._cache.get(tup)
        if hit is None:
            hit = self._fn(tup)
            self._cache[tup] = hit
        return hit

    def key_of(self, tup: Sequence[int]) -> str:
        return self.type_of(tup).fingerprint

    def __repr__(self) -> str:
        return f"TypedUniverse({self.label!r}, size={self.size}, n_max={self.n_max})"


def from_structure(s: FinStructure, n_max: int, label: str = "structure"
                   ) -> TypedUniverse:
    """Tuple types of a finite structure, up to n_max."""
    return TypedUniverse(s.size, n_max, lambda tup: tuple_type(s, tup), label)


def from_quotient(q, n_max: int, label: str = "quotient") -> TypedUniverse:
    """Swap-invariant class-tuple types of a quotient geometry."""
    return TypedUniverse(q.size, n_max, q.pair_type, label)


def pair_family_universe(q, n_max: int, label: str = "pair-family"
                         ) -> TypedUniverse:
    """Types that remember only the family of component 2-types.

    The type of a tuple is the grid, over all ordered index pairs
    (diagonal included), of the quotient's swap-invariant 2-types of the
    corresponding class pairs — no joint information beyond pairs."""

    def fam(tup):
        grid = tuple(q.pair_type((tup[i], tup[j])).fingerprint
                     for i in range(len(tup)) for j in range(len(tup)))
        return TypeId("pairfam", ("grid", len(tup)), grid)

    return TypedUniverse(q.size, n_max, fam, label)


# ---------------------------------------------------------------------------
# refinement and reducts


@dataclass
class RefinementReport:
    verdict: str                    # "refines" | "fails"
    arity: int
    tuples_checked: int
    classes: int
    counterexample: tuple | None = None   # (tuple_a, tuple_b, source_key)

    @property
    def refines(self) -> bool:
        return self.verdict == "refines"


def partition_refines(source: TypedUniverse, target: TypedUniverse, n: int
                      ) -> RefinementReport:
    """Exhaustively test that source-equal n-tuples are target-equal."""
    if source.size != target.size:
        raise InputError("refinement needs a shared carrier")
    if n < 1 or n > source.n_max or n > target.n_max:
        raise InputError(f"arity {n} outside both universes' declared range")
    seen: dict = {}
    checked = 0
    for tup in product(range(source.size), repeat=n):
        checked += 1
        sk = source.type_of(tup)
        tk = target.type_of(tup)
        prior = seen.get(sk)
        if prior is None:
            seen[sk] = (tk, tup)
        elif prior[0] != tk:
            return RefinementReport("fails", n, checked, len(seen),
                                    (prior[1], tup, sk.fingerprint))
    return RefinementReport("refines", n, checked, len(seen))


@dataclass
class ReductReport:
    verdict: str                    # "holds" | "fails"
    n_max: int
    per_arity: list[RefinementReport] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    @property
    def failing_arity(self) -> int | None:
        for r in self.per_arity:
            if not r.refines:
                return r.arity
        return None

    @property
    def counterexample(self) -> tuple | None:
        for r in self.per_arity:
            if not r.refines:
                return r.counterexample
        return None


def is_reduct(source: TypedUniverse, target: TypedUniverse, n_max: int
              ) -> ReductReport:
    """Whether the target is a reduct of the source up to arity n_max:
    source types must determine target types at every arity 1..n_max.
    Stops at the least failing arity."""
    if n_max < 1:
        raise InputError("reduct checks need arity at least 1")
    reports = []
    for n in range(1, n_max + 1):
        r = partition_refines(source, target, n)
        reports.append(r)
        if not r.refines:
            return ReductReport("fails", n_max, reports)
    return ReductReport("holds", n_max, reports)


@dataclass
class DefinabilityReport:
    verdict: str                    # "definable" | "undefinable"
    arity: int
    classes_inside: list[str] = field(default_factory=list)
    witness: tuple | None = None    # (tuple_in, tuple_out, source_key)

    @property
    def definable(self) -> bool:
        return self.verdict == "definable"


def definable_as_union(source: TypedUniverse, relation, n: int
                       ) -> DefinabilityReport:
    """Whether a relation is a union of the source's n-type classes."""
    if n < 1 or n > source.n_max:
        raise InputError(f"arity {n} outside the universe's declared range")
    rel = set(tuple(int(x) for x in t) for t in relation)
    for t in rel:
        if len(t) != n:
            raise InputError(f"relation row {t} does not have arity {n}")
        if any(x < 0 or x >= source.size for x in t):
            raise InvalidElementError(f"relation row {t} leaves the carrier")
    status: dict = {}
    for tup in product(range(source.size), repeat=n):
        sk = source.type_of(tup)
        inside = tup in rel
        prior = status.get(sk)
        if prior is None:
            status[sk] = (inside, tup)
        elif prior[0] != inside:
            tup_in, tup_out = (prior[1], tup) if prior[0] else (tup, prior[1])
            return DefinabilityReport("undefinable", n, [],
                                      (tup_in, tup_out, sk.fingerprint))
    inside_keys = sorted(k.fingerprint for k, (flag, _) in status.items() if flag)
    return DefinabilityReport("definable", n, inside_keys)


# ---------------------------------------------------------------------------
# text form


def save_typed_universe(u: TypedUniverse, name: str = "universe") -> str:
    """Serialize all type keys up to the universe's declared arity."""
    lines = [f"typed-universe {name}", f"carrier {u.size}"]
    for n in range(1, u.n_max + 1):
        lines.append(f"arity {n}")
        for tup in product(range(u.size), repeat=n):
            pts = " ".join(str(x) for x in tup)
            lines.append(f"{pts} : {u.key_of(tup)}")
    return "\n".join(lines) + "\n"


def parse_typed_universe(text: str) -> TypedUniverse:
    """Rebuild a typed universe from its saved key table."""
    name = None
    size = None
    arity = None
    table: dict[tuple, str] = {}
    max_arity = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "typed-universe":
            if len(parts) != 2:
                raise ParseError("typed-universe wants a name", lineno)
            name = parts[1]
        elif parts[0] == "carrier":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("carrier wants a size", lineno)
            size = int(parts[1])
        elif parts[0] == "arity":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("arity wants a number", lineno)
            arity = int(parts[1])
            max_arity = max(max_arity, arity)
        else:
            if size is None or arity is None:
                raise ParseError("type rows need carrier and arity first", lineno)
            if ":" not in line:
                raise ParseError("expected 'points : key'", lineno)
            left, _, key = line.partition(":")
            try:
                tup = tuple(int(x) for x in left.split())
            except ValueError:
                raise ParseError("bad point list in type row", lineno) from None
            if len(tup) != arity:
                raise ParseError(f"row arity {len(tup)} != declared {arity}", lineno)
            if any(x < 0 or x >= size for x in tup):
                raise ParseError(f"row {tup} leaves the carrier", lineno)
            table[tup] = key.strip()
    if name is None or size is None or max_arity == 0:
        raise ParseError("incomplete typed-universe document")
    for n in range(1, max_arity + 1):
        for tup in product(range(size), repeat=n):
            if tup not in table:
                raise ParseError(f"missing type row for {tup} at arity {n}")

    def stored(tup):
        return TypeId("stored", name, table[tuple(tup)])

    return TypedUniverse(size, max_arity, stored, label=name)
