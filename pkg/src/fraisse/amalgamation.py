"""Amalgamation classes: explicit lists and two-point permission sets.

A class of finite structures is described either by an explicit list of
members (closed under isomorphism, nothing else assumed) or by a set of
permitted structures of size at most two; the latter generates the class
of all finite structures whose one- and two-point induced substructures
are permitted.  This module checks the hereditary property, the
amalgamation property over explicit base triples, and the adequacy
condition that makes the two-point description well behaved: closure
under substructures including the empty structure, and a joint two-point
realisation on distinct points for every pair of one-point types.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Union

from .errors import AdequacyError, InputError, InvalidElementError, VocabularyError
from .structures import (
    Embedding,
    FinStructure,
    TypeId,
    Vocabulary,
    canonical_key,
    find_embeddings,
    graph_vocabulary,
    induced_substructure,
)


class ExplicitList:
    """A class given by an explicit list of members, up to isomorphism."""

    def __init__(self, structures: Iterable[FinStructure],
                 size_bound: int | None = None):
        members = tuple(structures)
        if not members:
            raise InputError("an explicit class needs at least one member")
        vocab = members[0].vocab
        for m in members:
            if m.vocab != vocab:
                raise VocabularyError("explicit class mixes vocabularies")
        self.members = members
        self.vocab = vocab
        self.size_bound = max(m.size for m in members) if size_bound is None else int(size_bound)
        self._keys = frozenset(canonical_key(m) for m in members)

    def contains_iso(self, s: FinStructure) -> bool:
        return s.vocab == self.vocab and canonical_key(s) in self._keys

    def representatives(self, max_size: int) -> list[FinStructure]:
        by_key: dict[TypeId, FinStructure] = {}
        for m in self.members:
            if m.size <= max_size:
                by_key.setdefault(canonical_key(m), m)
        return [by_key[k] for k in sorted(by_key)]


class P2Spec:
    """Permitted structures of size <= 2 over one vocabulary."""

    def __init__(self, members: Iterable[FinStructure],
                 vocab: Vocabulary | None = None, size_bound: int = 4):
        members = tuple(members)
        if not members and vocab is None:
            raise InputError("an empty permission set needs an explicit vocabulary")
        self.vocab = vocab if vocab is not None else members[0].vocab
        for m in members:
            if m.vocab != self.vocab:
                raise VocabularyError("permission set mixes vocabularies")
            if m.size > 2:
                raise InvalidElementError(
                    f"permission set member of size {m.size}; only sizes <= 2 belong here")
        self.members = members
        self.size_bound = int(size_bound)
        self._keys = frozenset(canonical_key(m) for m in members)
        self._one_reps: dict[TypeId, FinStructure] = {}
        for m in members:
            if m.size == 1:
                self._one_reps.setdefault(canonical_key(m), m)
        self._link_cache: dict[tuple[TypeId, TypeId], tuple[tuple, ...]] = {}
        self._sig_cache: tuple[frozenset, frozenset] | None = None

    def is_member(self, s: FinStructure) -> bool:
        """Membership of a structure of size <= 2, up to isomorphism."""
        return s.vocab == self.vocab and s.size <= 2 and canonical_key(s) in self._keys

    def one_types(self) -> list[FinStructure]:
        """One representative per permitted one-point type, sorted."""
        return [self._one_reps[k] for k in sorted(self._one_reps)]

    def two_members(self) -> list[FinStructure]:
        by_key = {}
        for m in self.members:
            if m.size == 2:
                by_key.setdefault(canonical_key(m), m)
        return [by_key[k] for k in sorted(by_key)]

    def one_rep(self, key: TypeId) -> FinStructure:
        return self._one_reps[key]

    def permitted_links(self, t0: FinStructure, t1: FinStructure) -> tuple[tuple, ...]:
        """Cross-link options for an ordered pair of one-point types.

        Each option is a tuple, aligned with the vocabulary's binary
        symbols, of (first->second, second->first) bits such that the
        assembled two-point structure is permitted.  Sorted, so option 0
        is a deterministic choice.
        """
        key = (canonical_key(t0), canonical_key(t1))
        cached = self._link_cache.get(key)
        if cached is not None:
            return cached
        options = []
        nbin = len(self.vocab.binary_symbols())
        for dirs in product(((0, 0), (0, 1), (1, 0), (1, 1)), repeat=nbin):
            if self.is_member(assemble_pair(t0, t1, dirs)):
                options.append(dirs)
        result = tuple(sorted(options))
        self._link_cache[key] = result
        return result

    # -- fast membership signatures for binary vocabularies ----------------

    def _signatures(self) -> tuple[frozenset, frozenset]:
        if self._sig_cache is None:
            if not self.vocab.binary:
                raise VocabularyError("signature fast path needs a binary vocabulary")
            ones = set()
            twos = set()
            for m in self.members:
                if m.size == 1:
                    ones.add(_point_sig(m, 0))
                elif m.size == 2:
                    twos.add(_pair_sig(m, 0, 1))
                    twos.add(_pair_sig(m, 1, 0))
            self._sig_cache = (frozenset(ones), frozenset(twos))
        return self._sig_cache


ClassSpec = Union[ExplicitList, P2Spec]


def assemble_pair(t0: FinStructure, t1: FinStructure, dirs) -> FinStructure:
    """The two-point structure with point 0 like t0, point 1 like t1,
    and cross links given per binary symbol as (0->1, 1->0) bits."""
    vocab = t0.vocab
    if t1.vocab != vocab:
        raise VocabularyError("pair halves use different vocabularies")
    if t0.size != 1 or t1.size != 1:
        raise InvalidElementError("pair halves must be one-point structures")
    tables: dict[str, set] = {}
    for name, _arity in vocab.symbols:
        rows = set(t0.tables[name])
        rows.update(tuple(1 for _ in t) for t in t1.tables[name])
        tables[name] = rows
    for sym, (b01, b10) in zip(vocab.binary_symbols(), dirs):
        if b01:
            tables[sym].add((0, 1))
        if b10:
            tables[sym].add((1, 0))
    return FinStructure(vocab, 2, tables)


def point_structure(s: FinStructure, v: int) -> FinStructure:
    """The one-point induced substructure at v."""
    return induced_substructure(s, (v,))[0]


def _point_sig(s: FinStructure, v: int):
    una = tuple((v,) in s.tables[n] for n in s.vocab.unary_symbols())
    loops = tuple((v, v) in s.tables[n] for n in s.vocab.binary_symbols())
    return (una, loops)


def _pair_sig(s: FinStructure, u: int, v: int):
    cross = tuple(((u, v) in s.tables[n], (v, u) in s.tables[n])
                  for n in s.vocab.binary_symbols())
    return (_point_sig(s, u), _point_sig(s, v), cross)


# ---------------------------------------------------------------------------
# age / membership in the generated class


def age(s: FinStructure, k: int) -> list[FinStructure]:
    """Nonempty induced substructures of size <= k, one per iso class."""
    by_key: dict[TypeId, FinStructure] = {}
    for size in range(1, min(k, s.size) + 1):
        for subset in combinations(range(s.size), size):
            sub, _ = induced_substructure(s, subset)
            by_key.setdefault(canonical_key(sub), sub)
    return [by_key[k2] for k2 in sorted(by_key)]


def in_rp2(p2: P2Spec, s: FinStructure) -> bool:
    """Does every one- and two-point induced substructure belong to p2?"""
    if s.vocab != p2.vocab:
        raise VocabularyError("structure and permission set use different vocabularies")
    if p2.vocab.binary:
        ones, twos = p2._signatures()
        for v in range(s.size):
            if _point_sig(s, v) not in ones:
                return False
        for u in range(s.size):
            for v in range(u + 1, s.size):
                if _pair_sig(s, u, v) not in twos:
                    return False
        return True
    for v in range(s.size):
        if not p2.is_member(induced_substructure(s, (v,))[0]):
            return False
    for pair in combinations(range(s.size), 2):
        if not p2.is_member(induced_substructure(s, pair)[0]):
            return False
    return True


def enumerate_rp2(p2: P2Spec, n: int) -> list[FinStructure]:
    """All structures of size exactly n in the generated class, one per
    iso class, sorted by canonical key."""
    if n < 0:
        raise InvalidElementError(f"negative size {n}")
    if not p2.vocab.binary:
        raise VocabularyError("enumeration needs a binary vocabulary")
    level = [FinStructure(p2.vocab, 0)]
    for size in range(1, n + 1):
        by_key: dict[TypeId, FinStructure] = {}
        ones = p2.one_types()
        for parent in level:
            parent_points = [point_structure(parent, v) for v in range(parent.size)]
            for newt in ones:
                option_lists = [p2.permitted_links(pt, newt) for pt in parent_points]
                if any(not opts for opts in option_lists):
                    continue
                for choice in product(*option_lists):
                    tables = {name: set(tab) for name, tab in parent.tables.items()}
                    w = parent.size
                    for name, _a in p2.vocab.symbols:
                        for t in newt.tables[name]:
                            tables[name].add(tuple(w for _ in t))
                    bsyms = p2.vocab.binary_symbols()
                    for v, dirs in enumerate(choice):
                        for sym, (bvw, bwv) in zip(bsyms, dirs):
                            if bvw:
                                tables[sym].add((v, w))
                            if bwv:
                                tables[sym].add((w, v))
                    cand = FinStructure(p2.vocab, size, tables)
                    by_key.setdefault(canonical_key(cand), cand)
        level = [by_key[k] for k in sorted(by_key)]
        if not level:
            return []
    return level


# ---------------------------------------------------------------------------
# hereditary property


@dataclass
class HPReport:
    verdict: str                      # "holds" | "fails"
    checked: int = 0
    counterexample: tuple[FinStructure, tuple[int, ...], FinStructure] | None = None
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


def check_hp(spec: ClassSpec, bound: int | None = None) -> HPReport:
    """Is the class closed under nonempty induced substructures?

    For an explicit list, every member of size <= bound is decomposed and
    each piece looked up in the list; the first violating (member,
    subset) pair is reported.  For a permission set, closure of the
    permitted structures themselves is checked.
    """
    if isinstance(spec, P2Spec):
        members = spec.members
        contains = spec.is_member
        bound = 2 if bound is None else min(bound, 2)
    else:
        members = spec.members
        contains = spec.contains_iso
        bound = spec.size_bound if bound is None else bound
    checked = 0
    for m in members:
        if m.size > bound:
            continue
        for size in range(1, m.size + 1):
            for subset in combinations(range(m.size), size):
                sub, _ = induced_substructure(m, subset)
                checked += 1
                if not contains(sub):
                    return HPReport("fails", checked, (m, subset, sub))
    return HPReport("holds", checked)


# ---------------------------------------------------------------------------
# adequacy of a permission set


@dataclass
class AdequacyReport:
    verdict: str                      # "holds" | "fails"
    has_empty: bool
    has_two_structure: bool
    hp_counterexample: tuple | None
    missing_pairs: list[tuple[FinStructure, FinStructure]]
    witnesses: dict[tuple[TypeId, TypeId], int]
    notes: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


def check_1_adequate(p2: P2Spec) -> AdequacyReport:
    """Adequacy: substructure-closed including the empty structure, at
    least one two-point member, and every unordered pair of permitted
    one-point types jointly realised on the two distinct points of some
    permitted two-point structure."""
    if not p2.vocab.binary:
        raise VocabularyError("adequacy is defined for binary vocabularies")
    notes: list[str] = []
    has_empty = any(m.size == 0 for m in p2.members)
    if not has_empty:
        notes.append("the empty structure is not permitted")
    hp_ce = None
    for m in p2.members:
        for size in range(1, m.size + 1):
            for subset in combinations(range(m.size), size):
                sub, _ = induced_substructure(m, subset)
                if not p2.is_member(sub):
                    hp_ce = (m, subset, sub)
                    notes.append("permitted structures are not substructure-closed")
                    break
            if hp_ce:
                break
        if hp_ce:
            break
    twos = p2.two_members()
    has_two = bool(twos)
    if not has_two:
        notes.append("no two-point structure is permitted")
    witnesses: dict[tuple[TypeId, TypeId], int] = {}
    member_index = {id(m): i for i, m in enumerate(p2.members)}
    for m in p2.members:
        if m.size != 2:
            continue
        k0 = canonical_key(point_structure(m, 0))
        k1 = canonical_key(point_structure(m, 1))
        pair = tuple(sorted((k0, k1)))
        witnesses.setdefault(pair, member_index[id(m)])
    ones = p2.one_types()
    missing = []
    for i, t0 in enumerate(ones):
        for t1 in ones[i:]:
            pair = tuple(sorted((canonical_key(t0), canonical_key(t1))))
            if pair not in witnesses:
                missing.append((t0, t1))
    if missing:
        notes.append(f"{len(missing)} pair(s) of one-point types have no joint "
                     "two-point realisation on distinct points")
    ok = has_empty and has_two and hp_ce is None and not missing
    return AdequacyReport("holds" if ok else "fails", has_empty, has_two,
                          hp_ce, missing, witnesses, notes)


def require_adequate(p2: P2Spec) -> AdequacyReport:
    report = check_1_adequate(p2)
    if not report.holds:
        raise AdequacyError("; ".join(report.notes) or "permission set is not adequate")
    return report


# ---------------------------------------------------------------------------
# amalgamation property


@dataclass
class AmalgamWitness:
    base: FinStructure
    left: FinStructure
    right: FinStructure
    amalgam: FinStructure
    into_left: Embedding
    into_right: Embedding
    left_into: Embedding
    right_into: Embedding


@dataclass
class APCounterexample:
    base: FinStructure
    left: FinStructure
    right: FinStructure
    into_left: Embedding
    into_right: Embedding


@dataclass
class APReport:
    verdict: str                      # "holds" | "fails" | "inconclusive"
    amalgam_bound: int
    triple_bound: int
    triples_checked: int = 0
    witness_count: int = 0
    inconclusive_count: int = 0
    counterexample: APCounterexample | None = None
    sample_witnesses: list[AmalgamWitness] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


_SAMPLE_WITNESSES = 16


def _orbit_reps(embs: list[Embedding], auts: list[Embedding]) -> list[Embedding]:
    """One embedding per orbit under post-composition with target maps."""
    seen = set()
    reps = []
    for f in embs:
        key = min(tuple(a.map[x] for x in f.map) for a in auts)
        if key not in seen:
            seen.add(key)
            reps.append(f)
    return reps

def _free_amalgam(p2: P2Spec, b: FinStructure, c: FinStructure,
                  f: Embedding, g: Embedding) -> tuple[FinStructure, Embedding, Embedding] | None:
    """Glue b and c over the common base, completing cross pairs with the
    first permitted link option.  None when some cross pair has no option."""
    base_image = {g.map[i]: f.map[i] for i in range(len(f.map))}
    extra = [v for v in range(c.size) if v not in base_image]
    idx_c = dict(base_image)
    for j, v in enumerate(extra):
        idx_c[v] = b.size + j
    size = b.size + len(extra)
    tables = {name: set(tab) for name, tab in b.tables.items()}
    for name, _a in c.vocab.symbols:
        for t in c.tables[name]:
            tables[name].add(tuple(idx_c[x] for x in t))
    bsyms = b.vocab.binary_symbols()
    b_new = [v for v in range(b.size) if v not in set(f.map)]
    for u in b_new:
        tu = point_structure(b, u)
        for v in extra:
            tv = point_structure(c, v)
            options = p2.permitted_links(tu, tv)
            if not options:
                return None
            for sym, (buv, bvu) in zip(bsyms, options[0]):
                if buv:
                    tables[sym].add((u, idx_c[v]))
                if bvu:
                    tables[sym].add((idx_c[v], u))
    d = FinStructure(b.vocab, size, tables)
    beta = Embedding(b, d, tuple(range(b.size)))
    gamma = Embedding(c, d, tuple(idx_c[v] for v in range(c.size)))
    return d, beta, gamma


def _seek_amalgam(pool: list[FinStructure], b, c, f, g
                  ) -> tuple[FinStructure, Embedding, Embedding] | None:
    """Exhaustive amalgam search over candidate structures."""
    lower = max(b.size, c.size)
    for d in pool:
        if d.size < lower:
            continue
        for beta in find_embeddings(b, d):
            partial = {g.map[i]: beta.map[f.map[i]] for i in range(len(f.map))}
            gammas = find_embeddings(c, d, limit=1, partial=partial)
            if gammas:
                return d, beta, gammas[0]
    return None


def check_ap(spec: ClassSpec, amalgam_bound: int,
             triple_bound: int | None = None) -> APReport:
    """Check the amalgamation property over all base triples in the class.

    Triples (base, left, right) range over representatives of size at
    most triple_bound (default: the class's declared size bound), with every orbit
    of embedding pairs of the base into the two sides.  A triple with no
    amalgam of size <= amalgam_bound counts as a failure when the bound
    admits the free size |left| + |right| - |base|, and as inconclusive
    otherwise.
    """
    if triple_bound is None:
        triple_bound = spec.size_bound
    if isinstance(spec, P2Spec):
        reps = []
        for size in range(0, triple_bound + 1):
            reps.extend(enumerate_rp2(spec, size))
        max_in_spec = max((m.size for m in spec.members), default=0)
    else:
        reps = [FinStructure(spec.vocab, 0)] + spec.representatives(triple_bound)
        max_in_spec = max(m.size for m in spec.members)
    if amalgam_bound < max_in_spec:
        raise InputError(
            f"amalgam bound {amalgam_bound} is below the largest size {max_in_spec} in the class")

    fallback_pool: list[FinStructure] | None = None

    def pool() -> list[FinStructure]:
        nonlocal fallback_pool
        if fallback_pool is None:
            if isinstance(spec, P2Spec):
                fallback_pool = []
                for size in range(0, amalgam_bound + 1):
                    fallback_pool.extend(enumerate_rp2(spec, size))
            else:
                fallback_pool = [m for m in spec.representatives(amalgam_bound)]
        return fallback_pool

    report = APReport("holds", amalgam_bound, triple_bound)
    auts = {id(r): find_embeddings(r, r) for r in reps}
    for b in reps:
        for c in reps:
            for a in reps:
                if a.size > min(b.size, c.size):
                    continue
                fs = _orbit_reps(find_embeddings(a, b), auts[id(b)])
                if not fs:
                    continue
                gs = _orbit_reps(find_embeddings(a, c), auts[id(c)])
                if not gs:
                    continue
                for f in fs:
                    for g in gs:
                        report.triples_checked += 1
                        found = None
                        if isinstance(spec, P2Spec):
                            free = _free_amalgam(spec, b, c, f, g)
                            if free is not None and free[0].size <= amalgam_bound \
                                    and in_rp2(spec, free[0]):
                                found = free
                        if found is None:
                            found = _seek_amalgam(pool(), b, c, f, g)
                        if found is not None:
                            report.witness_count += 1
                            if len(report.sample_witnesses) < _SAMPLE_WITNESSES:
                                d, beta, gamma = found
                                report.sample_witnesses.append(
                                    AmalgamWitness(a, b, c, d, f, g, beta, gamma))
                            continue
                        free_size = b.size + c.size - a.size
                        if amalgam_bound < free_size:
                            report.inconclusive_count += 1
                        else:
                            report.verdict = "fails"
                            report.counterexample = APCounterexample(a, b, c, f, g)
                            return report
    if report.inconclusive_count:
        report.verdict = "inconclusive"
    return report


# ---------------------------------------------------------------------------
# ready-made permission sets


def graph_p2(symbol: str = "adj", size_bound: int = 4) -> P2Spec:
    """Loop-free symmetric single-relation structures: permitted pieces are
    the empty structure, the point, and the edge/non-edge pairs."""
    vocab = graph_vocabulary(symbol)
    empty = FinStructure(vocab, 0)
    point = FinStructure(vocab, 1)
    nonedge = FinStructure(vocab, 2)
    edge = FinStructure(vocab, 2, {symbol: [(0, 1), (1, 0)]})
    return P2Spec([empty, point, nonedge, edge], size_bound=size_bound)
