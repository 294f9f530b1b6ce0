"""Type censuses, algebraic-closure approximation, and dependence shape.

Algebraicity is approximated by realization counting against a
duplication bound d: a point is non-algebraic over a base once its type
over that base has at least d realizations, and sources that can grow
(oracles, doubled covers over an oracle) are asked to add realizations on
demand before any verdict is settled.  Verdicts are monotone-sound:
"non-algebraic" is witnessed by exhibited realizations, "algebraic" is
issued only for equality-bound types or types the source certifies can
never gain another realization, and anything the growth budget cuts off
is flagged inconclusive rather than guessed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .errors import InputError, InvalidElementError, SaturationError
from .generic import ExtensionType, GenericOracle, extend_one_point
from .structures import FinStructure, TypeId, Vocabulary, tuple_payload, tuple_type


# ---------------------------------------------------------------------------
# censuses


@dataclass
class TypeCensus:
    n: int
    params: tuple[int, ...]
    distinct: bool
    entries: list[tuple[TypeId, int]]
    total: int

    @property
    def support(self) -> list[TypeId]:
        return [t for t, _ in self.entries]

    def count(self, t: TypeId) -> int:
        for u, c in self.entries:
            if u == t:
                return c
        return 0


def _typed_view(s) -> tuple[int, Callable[[tuple[int, ...]], TypeId]]:
    """(size, type function) for a structure or any typed carrier that
    offers `size` and `type_of`."""
    if isinstance(s, FinStructure):
        return s.size, lambda tup: tuple_type(s, tup)
    return s.size, s.type_of


def enumerate_types(s, n: int, params: Sequence[int] = (),
                    distinct: bool = False) -> TypeCensus:
    """Census of the types of params + tup over all n-tuples tup.

    Counts sum to size**n, or to the falling factorial when `distinct`
    restricts to tuples without repeated entries.
    """
    if n < 0:
        raise InputError(f"negative arity {n}")
    size, type_of = _typed_view(s)
    params = tuple(int(p) for p in params)
    if params and not isinstance(s, FinStructure):
        raise InputError("parameters are only supported over plain structures")
    if any(p < 0 or p >= size for p in params):
        raise InvalidElementError(f"parameters {params} leave the universe")
    counter: Counter[TypeId] = Counter()
    total = 0
    for tup in product(range(size), repeat=n):
        if distinct and len(set(tup)) != n:
            continue
        counter[type_of(params + tup)] += 1
        total += 1
    entries = sorted(counter.items(), key=lambda kv: kv[0].sort_key)
    return TypeCensus(n, params, distinct, entries, total)


@dataclass
class DeterminationReport:
    verdict: str                  # "determined" | "counterexample"
    n: int
    tuples_checked: int
    counterexample: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    @property
    def determined(self) -> bool:
        return self.verdict == "determined"


def types_determined_by_pairs(s, n: int,
                              independent_only: Callable[[tuple[int, ...]], bool] | None = None
                              ) -> DeterminationReport:
    """Do the pairwise 2-types of an n-tuple pin down its full n-type?

    Searches for two n-tuples whose families of (i, j)-component 2-types
    agree while the n-types differ.  The optional filter restricts the
    search to tuples the caller flags (e.g. independent ones).
    """
    if n < 3:
        raise InputError("pairwise determination is asked for arity >= 3")
    size, type_of = _typed_view(s)
    pairs = [(i, j) for i in range(n) for j in range(n)]
    seen: dict[tuple, tuple[TypeId, tuple[int, ...]]] = {}
    checked = 0
    for tup in product(range(size), repeat=n):
        if independent_only is not None and not independent_only(tup):
            continue
        checked += 1
        family = tuple(type_of((tup[i], tup[j])) for i, j in pairs)
        full = type_of(tup)
        prior = seen.get(family)
        if prior is None:
            seen[family] = (full, tup)
        elif prior[0] != full:
            return DeterminationReport("counterexample", n, checked, (prior[1], tup))
    return DeterminationReport("determined", n, checked)


# ---------------------------------------------------------------------------
# acl sources


class OracleAclSource:
    """Growth adapter over a generic oracle: a realization of the type of
    `ref` over `base` is added as a targeted one-point extension."""

    def __init__(self, oracle: GenericOracle):
        self.oracle = oracle

    def snapshot(self) -> FinStructure:
        return self.oracle.current

    @property
    def size(self) -> int:
        return self.oracle.size

    def saturated_prefix(self, level: int) -> int:
        return self.oracle.saturated_prefix(level)

    def add_realization(self, base: tuple[int, ...], ref: int) -> bool:
        o = self.oracle
        links = [link_between(o.vocab, o._tables, b, ref) for b in base]
        tau = ExtensionType(base, links, o.point_struct(ref))
        extend_one_point(o, tau)
        return True


def link_between(vocab: Vocabulary, tables, b: int, c: int) -> FinStructure:
    """The two-point structure induced on (b, c), read positionally."""
    if b == c:
        raise InvalidElementError("a link needs two distinct points")
    tbl: dict[str, set] = {}
    for name, arity in vocab.symbols:
        rows = set()
        if arity == 1:
            if (b,) in tables[name]:
                rows.add((0,))
            if (c,) in tables[name]:
                rows.add((1,))
        elif arity == 2:
            for xy, ij in (((b, b), (0, 0)), ((b, c), (0, 1)),
                           ((c, b), (1, 0)), ((c, c), (1, 1))):
                if xy in tables[name]:
                    rows.add(ij)
        else:
            for t in tables[name]:
                if set(t) <= {b, c}:
                    rows.add(tuple(0 if x == b else 1 for x in t))
        tbl[name] = rows
    return FinStructure(vocab, 2, tbl)


def as_acl_source(obj):
    if isinstance(obj, GenericOracle):
        return OracleAclSource(obj)
    for attr in ("snapshot", "saturated_prefix", "add_realization", "size"):
        if not hasattr(obj, attr):
            raise InputError(f"object cannot serve as an acl source (missing {attr})")
    return obj


# ---------------------------------------------------------------------------
# the verdict engine


class _AclEngine:
    """Shared memoised algebraicity verdicts over one growing source.

    Every issued verdict stays valid under further growth: realizations
    are never destroyed, equality-bound types never gain any, and a
    source saying "no more realizations can exist" certifies that for
    the whole class, not just the present approximation.
    """

    def __init__(self, source, d: int, budget: int | None):
        self.src = source
        self.d = d
        self.remaining = budget          # None = unlimited
        self.added = 0
        self._verdicts: dict[tuple[tuple[int, ...], tuple], str] = {}

    def require_level(self, base_size: int) -> int:
        prefix = self.src.saturated_prefix(base_size + 1)
        return prefix

    @staticmethod
    def _disc(s: FinStructure, base: tuple[int, ...], a: int):
        """Link pattern of a point over a fixed base: together with the
        base itself this determines the tuple type of base + (a,), since
        the base-internal facts are shared by every candidate."""
        last = len(base)
        facts = []
        for name, arity in s.vocab.symbols:
            table = s.tables[name]
            if arity == 1:
                facts.append((a,) in table)
            elif arity == 2:
                hits = []
                for i, b in enumerate(base):
                    if (b, a) in table:
                        hits.append((i, last))
                    if (a, b) in table:
                        hits.append((last, i))
                if (a, a) in table:
                    hits.append((last, last))
                facts.append(tuple(sorted(hits)))
            else:
                posmap = {p: i for i, p in enumerate(base)}
                posmap[a] = last
                hits = set()
                for row in table:
                    if a in row and all(x in posmap for x in row):
                        hits.add(tuple(posmap[x] for x in row))
                facts.append(tuple(sorted(hits)))
        return tuple(facts)

    def verdict(self, base: tuple[int, ...], a: int) -> str:
        """"algebraic" | "non-algebraic" | "inconclusive" for a over base."""
        if a in base:
            return "algebraic"
        s = self.src.snapshot()
        key = self._disc(s, base, a)
        memo_key = (base, key)
        got = self._verdicts.get(memo_key)
        if got is not None:
            return got
        bset = set(base)
        count = 0
        for c in range(s.size):
            if c not in bset and self._disc(s, base, c) == key:
                count += 1
                if count >= self.d:
                    break
        ref = a
        while count < self.d:
            if self.remaining is not None and self.added >= self.remaining:
                result = "inconclusive"
                break
            if not self.src.add_realization(base, ref):
                result = "algebraic"
                break
            self.added += 1
            count += 1
        else:
            result = "non-algebraic"
        self._verdicts[memo_key] = result
        return result

    def count_realizations(self, base: tuple[int, ...], a: int,
                           cap: int | None = None) -> list[int]:
        if a in base:
            return [a]
        s = self.src.snapshot()
        key = self._disc(s, base, a)
        bset = set(base)
        out = []
        for c in range(s.size):
            if c not in bset and self._disc(s, base, c) == key:
                out.append(c)
                if cap is not None and len(out) >= cap:
                    break
        return out


def _check_base(source, base: Sequence[int], engine: _AclEngine) -> tuple[int, ...]:
    base = tuple(int(b) for b in base)
    if len(set(base)) != len(base):
        raise InputError(f"base {base} repeats a point")
    if any(b < 0 or b >= source.size for b in base):
        raise InvalidElementError(f"base {base} leaves the universe")
    prefix = engine.require_level(len(base))
    need = max(base) + 1 if base else 0
    if prefix < need or (not base and prefix < 0):
        raise SaturationError(
            f"acl over a base of size {len(base)} needs saturation level "
            f"{len(base) + 1} covering the base (prefix {prefix}, need {need})")
    return base


# ---------------------------------------------------------------------------
# public operations


@dataclass
class AclEntry:
    element: int
    verdict: str                      # "algebraic" | "non-algebraic" | "inconclusive"
    count: int
    realizations: list[int] = field(default_factory=list)


@dataclass
class AclReport:
    base: tuple[int, ...]
    d: int
    entries: list[AclEntry]
    added: int
    inconclusive: int

    @property
    def algebraic(self) -> frozenset[int]:
        return frozenset(e.element for e in self.entries if e.verdict == "algebraic")

    @property
    def closure(self) -> frozenset[int]:
        return self.algebraic | frozenset(self.base)


def acl_approx(source, base: Sequence[int], d: int = 5,
               growth_budget: int | None = None) -> AclReport:
    """Per-element algebraicity verdicts over `base` with duplication
    bound d.  Requires the source saturated to level |base| + 1 over a
    prefix covering the base."""
    src = as_acl_source(source)
    engine = _AclEngine(src, d, growth_budget)
    base = _check_base(src, base, engine)
    n0 = src.size
    entries = []
    inconclusive = 0
    for a in range(n0):
        v = engine.verdict(base, a)
        reals = engine.count_realizations(base, a, cap=d)
        if v == "inconclusive":
            inconclusive += 1
        entries.append(AclEntry(a, v, len(reals), reals))
    return AclReport(base, d, entries, engine.added, inconclusive)


@dataclass
class TrivialityReport:
    verdict: str                      # "trivial" | "nontrivial" | "inconclusive"
    max_b: int
    d: int
    bases_checked: int
    inconclusive: int
    added: int
    counterexample: tuple[int, tuple[int, ...]] | None = None

    @property
    def trivial(self) -> bool:
        return self.verdict == "trivial"


def check_triviality(source, max_b: int, d: int = 5,
                     growth_budget: int | None = None) -> TrivialityReport:
    """Is every point algebraic over a base of size <= max_b already
    algebraic over one of its singletons?  Bases range over the prefix
    covered by saturation level max_b + 1."""
    src = as_acl_source(source)
    engine = _AclEngine(src, d, growth_budget)
    prefix = src.saturated_prefix(max_b + 1)
    if max_b >= 1 and prefix < 1:
        raise SaturationError(
            f"triviality at max_b={max_b} needs saturation level {max_b + 1} "
            "over a nonempty prefix")
    bases_checked = 0
    inconclusive = 0
    for bsize in range(0, max_b + 1):
        for base in combinations(range(prefix), bsize):
            bases_checked += 1
            n_now = src.size
            for a in range(n_now):
                v = engine.verdict(base, a)
                if v == "inconclusive":
                    inconclusive += 1
                    continue
                if v != "algebraic":
                    continue
                covered = any(engine.verdict((b,), a) == "algebraic" for b in base)
                if not covered:
                    return TrivialityReport("nontrivial", max_b, d, bases_checked,
                                            inconclusive, engine.added, (a, base))
    verdict = "inconclusive" if inconclusive else "trivial"
    return TrivialityReport(verdict, max_b, d, bases_checked, inconclusive, engine.added)


@dataclass
class DependenceWitness:
    element: int
    b: tuple[int, ...]
    c: tuple[int, ...]
    b0: tuple[int, ...]


@dataclass
class DegeneracyReport:
    verdict: str                      # "degenerate" | "counterexample" | "inconclusive"
    rho: int
    d: int
    pairs_checked: int
    dependencies: int
    inconclusive: int
    added: int
    witnesses: list[DependenceWitness] = field(default_factory=list)
    counterexample: tuple[int, tuple[int, ...], tuple[int, ...]] | None = None

    @property
    def degenerate(self) -> bool:
        return self.verdict == "degenerate"


def check_degenerate_dependence(source, rho: int, max_b: int = 3, max_c: int = 3,
                                d: int = 5, growth_budget: int | None = None,
                                witness_cap: int = 32) -> DegeneracyReport:
    """Is every dependence (rho - 1)-degenerate?

    A tuple depends on B over C exactly when some coordinate lands in
    acl(B + C) without being in acl(C); that reduces the check to single
    elements, and every detected dependence must then be reproduced by a
    sub-base B0 of B with at most rho - 1 points.  B and C range over the
    prefix covered by saturation level max_b + max_c + 1, since acl over
    the union base needs that level."""
    if rho < 1:
        raise InputError(f"rho must be >= 1, got {rho}")
    src = as_acl_source(source)
    engine = _AclEngine(src, d, growth_budget)
    prefix = src.saturated_prefix(max_b + max_c + 1)
    if prefix < 1:
        raise SaturationError(
            f"degeneracy at sizes ({max_b}, {max_c}) needs saturation level "
            f"{max_b + max_c + 1} over a nonempty prefix")
    report = DegeneracyReport("degenerate", rho, d, 0, 0, 0, 0)
    c_bases = [c for size in range(0, max_c + 1)
               for c in combinations(range(prefix), size)]
    b_bases = [b for size in range(1, max_b + 1)
               for b in combinations(range(prefix), size)]
    for cb in c_bases:
        cset = set(cb)
        for bb in b_bases:
            if set(bb) <= cset:
                continue
            report.pairs_checked += 1
            union = tuple(sorted(set(bb) | cset))
            n_now = src.size
            for a in range(n_now):
                vu = engine.verdict(union, a)
                if vu == "inconclusive":
                    report.inconclusive += 1
                    continue
                if vu != "algebraic":
                    continue
                vc = engine.verdict(cb, a)
                if vc == "inconclusive":
                    report.inconclusive += 1
                    continue
                if vc == "algebraic":
                    continue
                report.dependencies += 1
                found = None
                for b0_size in range(0, rho):
                    for b0 in combinations(bb, b0_size):
                        sub = tuple(sorted(set(b0) | cset))
                        if engine.verdict(sub, a) == "algebraic":
                            found = b0
                            break
                    if found is not None:
                        break
                if found is None:
                    report.verdict = "counterexample"
                    report.counterexample = (a, bb, cb)
                    report.added = engine.added
                    return report
                if len(report.witnesses) < witness_cap:
                    report.witnesses.append(DependenceWitness(a, bb, cb, found))
    report.added = engine.added
    if report.inconclusive and report.verdict == "degenerate":
        report.verdict = "inconclusive"
    return report
