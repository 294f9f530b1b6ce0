"""Brute-force reference implementations used to cross-check the library.

Everything here is written from first principles on purpose: facts are
compared by direct table lookups and searches enumerate candidates
plainly, so agreement with the fast paths is meaningful.
"""
from __future__ import annotations

from itertools import combinations, permutations

from fraisse.structures import FinStructure, graph_vocabulary


# ---------------------------------------------------------------------------
# structure generators


def graph_of_bits(n: int, bits: int, symbol: str = "adj") -> FinStructure:
    """Graph on n vertices whose edge set is encoded by `bits` over the
    pairs (0,1),(0,2),(1,2),(0,3),... in lexicographic-by-max order."""
    pairs = [(i, j) for j in range(n) for i in range(j)]
    edges = set()
    for idx, (i, j) in enumerate(pairs):
        if (bits >> idx) & 1:
            edges.add((i, j))
            edges.add((j, i))
    return FinStructure(graph_vocabulary(symbol), n, {symbol: frozenset(edges)})


def all_graphs(n: int, symbol: str = "adj"):
    """Every labelled loop-free undirected graph on n vertices."""
    m = n * (n - 1) // 2
    for bits in range(1 << m):
        yield graph_of_bits(n, bits, symbol)


def random_graph(rng, n: int, symbol: str = "adj") -> FinStructure:
    m = n * (n - 1) // 2
    return graph_of_bits(n, rng.getrandbits(m) if m else 0, symbol)


def permuted_copy(rng, s: FinStructure) -> tuple[FinStructure, list[int]]:
    """A relabelled copy of s together with the permutation used."""
    perm = list(range(s.size))
    rng.shuffle(perm)
    tables = {}
    for name, _arity in s.vocab.symbols:
        tables[name] = frozenset(tuple(perm[x] for x in row)
                                 for row in s.tables[name])
    return FinStructure(s.vocab, s.size, tables), perm


# ---------------------------------------------------------------------------
# isomorphism and embeddings


def degree_profile(s: FinStructure, v: int):
    prof = []
    for name, arity in s.vocab.symbols:
        table = s.tables[name]
        if arity == 1:
            prof.append((v,) in table)
        else:
            prof.append(sum(1 for row in table if v in row))
    return tuple(prof)


def _maps_exactly(a: FinStructure, b: FinStructure, m: dict[int, int]) -> bool:
    """Do the mapped points of a induce in b exactly the facts of a?"""
    dom = sorted(m)
    img = {m[v] for v in dom}
    for name, arity in a.vocab.symbols:
        ta, tb = a.tables[name], b.tables[name]
        for row in _rows(dom, arity):
            if (row in ta) != (tuple(m[x] for x in row) in tb):
                return False
    # nothing in b between image points may come from outside a's facts:
    # covered above since we test both directions of the same rows
    return len(img) == len(dom)


def _rows(points, arity):
    if arity == 1:
        return [(p,) for p in points]
    out = []
    for p in points:
        for q in points:
            out.append((p, q))
    return out


def iso_map(a: FinStructure, b: FinStructure) -> dict[int, int] | None:
    """Plain backtracking isomorphism search with a degree filter."""
    if a.size != b.size:
        return None
    for name, _ in a.vocab.symbols:
        if len(a.tables[name]) != len(b.tables[name]):
            return None
    prof_a = [degree_profile(a, v) for v in range(a.size)]
    prof_b = [degree_profile(b, v) for v in range(b.size)]
    if sorted(prof_a) != sorted(prof_b):
        return None

    order = sorted(range(a.size), key=lambda v: prof_a[v])
    m: dict[int, int] = {}
    used = set()

    def consistent(v: int, w: int) -> bool:
        trial = dict(m)
        trial[v] = w
        pts = sorted(trial)
        for name, arity in a.vocab.symbols:
            ta, tb = a.tables[name], b.tables[name]
            for row in _rows(pts, arity):
                if v not in row:
                    continue
                if (row in ta) != (tuple(trial[x] for x in row) in tb):
                    return False
        return True

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in range(b.size):
            if w in used or prof_b[w] != prof_a[v]:
                continue
            if not consistent(v, w):
                continue
            m[v] = w
            used.add(w)
            if rec(i + 1):
                return True
            del m[v]
            used.discard(w)
        return False

    return m if rec(0) else None


def naive_is_isomorphic(a: FinStructure, b: FinStructure) -> bool:
    return iso_map(a, b) is not None


def naive_embeddings(a: FinStructure, b: FinStructure) -> set[tuple[int, ...]]:
    """All strong injections a -> b, by checking every arrangement."""
    out = set()
    for image in permutations(range(b.size), a.size):
        m = {v: image[v] for v in range(a.size)}
        if _maps_exactly(a, b, m):
            out.add(image)
    return out


def is_valid_embedding(a: FinStructure, b: FinStructure, image) -> bool:
    image = tuple(image)
    if len(image) != a.size or len(set(image)) != a.size:
        return False
    if any(x < 0 or x >= b.size for x in image):
        return False
    return _maps_exactly(a, b, {v: image[v] for v in range(a.size)})


# ---------------------------------------------------------------------------
# tuple types


def type_desc(s: FinStructure, tup) -> tuple:
    """Canonical description of the quantifier-free type of a tuple:
    equality pattern plus the positions at which each relation holds."""
    tup = tuple(tup)
    first = {}
    eq = []
    for i, x in enumerate(tup):
        if x not in first:
            first[x] = i
        eq.append(first[x])
    facts = []
    for name, arity in s.vocab.symbols:
        table = s.tables[name]
        if arity == 1:
            hits = tuple(i for i, x in enumerate(tup) if (x,) in table)
        else:
            hits = tuple((i, j) for i in range(len(tup))
                         for j in range(len(tup))
                         if (tup[i], tup[j]) in table)
        facts.append((name, hits))
    return (len(tup), tuple(eq), tuple(facts))


# ---------------------------------------------------------------------------
# extension axioms


def _pair_matches(s: FinStructure, u: int, w: int, link: FinStructure) -> bool:
    """Does the ordered pair (u, w) of s induce exactly the 2-point
    pattern `link` (base at index 0, new point at index 1)?"""
    for name, arity in s.vocab.symbols:
        ts, tl = s.tables[name], link.tables[name]
        if arity == 1:
            if ((u,) in ts) != ((0,) in tl):
                return False
            if ((w,) in ts) != ((1,) in tl):
                return False
        else:
            for row_l, row_s in ((((0, 1)), (u, w)), ((1, 0), (w, u)),
                                 ((0, 0), (u, u)), ((1, 1), (w, w))):
                if (tuple(row_l) in tl) != (row_s in ts):
                    return False
    return True


def _point_matches(s: FinStructure, w: int, point: FinStructure) -> bool:
    for name, arity in s.vocab.symbols:
        ts, tp = s.tables[name], point.tables[name]
        if arity == 1:
            if ((w,) in ts) != ((0,) in tp):
                return False
        else:
            if ((w, w) in ts) != ((0, 0) in tp):
                return False
    return True


def naive_axiom_holds(s: FinStructure, ax) -> bool:
    """Direct evaluation of an extension axiom: every ordered tuple of
    distinct points matching the base one-types admits a fresh witness
    inducing all the link patterns."""
    k = len(ax.links)
    bases = [link for link in ax.links]
    base_points = [s_ for s_ in range(s.size)]

    def base_ok(tup) -> bool:
        for i, u in enumerate(tup):
            # index 0 of links[i] carries the i-th base point's own facts
            for name, arity in s.vocab.symbols:
                ts, tl = s.tables[name], bases[i].tables[name]
                if arity == 1:
                    if ((u,) in ts) != ((0,) in tl):
                        return False
                else:
                    if ((u, u) in ts) != ((0, 0) in tl):
                        return False
        return True

    for tup in permutations(base_points, k):
        if not base_ok(tup):
            continue
        found = False
        for w in range(s.size):
            if w in tup:
                continue
            if not _point_matches(s, w, ax.point):
                continue
            if all(_pair_matches(s, tup[i], w, ax.links[i]) for i in range(k)):
                found = True
                break
        if not found:
            return False
    return True
