"""Finite relational structures over finite relational vocabularies.

Universes are always {0, ..., n-1}.  Relation tables are sets of index
tuples; nothing is assumed about symmetry or irreflexivity unless a caller
builds it in.  Structures are value objects: `==` is literal equality of
vocabulary, size, and tables, while `canonical_key` identifies structures
up to isomorphism (colour refinement plus backtracking over a minimum
encoding, so no external graph-canonicalisation dependency is needed at
the sizes this package targets).
"""

from __future__ import annotations

import hashlib
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import InvalidElementError, VocabularyError


class Vocabulary:
    """An ordered list of relation symbols with arities."""

    __slots__ = ("symbols", "_arity", "_hash")

    def __init__(self, symbols: Iterable[tuple[str, int]]):
        syms = []
        seen = set()
        for name, arity in symbols:
            name = str(name)
            arity = int(arity)
            if not name or any(c.isspace() for c in name) or name.startswith("#"):
                raise VocabularyError(f"bad symbol name {name!r}")
            if name in seen:
                raise VocabularyError(f"duplicate symbol {name!r}")
            if arity < 1:
                raise VocabularyError(f"symbol {name!r} has arity {arity}; must be >= 1")
            seen.add(name)
            syms.append((name, arity))
        self.symbols: tuple[tuple[str, int], ...] = tuple(syms)
        self._arity = dict(self.symbols)
        self._hash = hash(self.symbols)

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    def arity(self, name: str) -> int:
        try:
            return self._arity[name]
        except KeyError:
            raise VocabularyError(f"unknown symbol {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._arity

    @property
    def rho(self) -> int:
        """Maximum arity (0 for the empty vocabulary)."""
        return max((a for _, a in self.symbols), default=0)

    @property
    def binary(self) -> bool:
        """True when every symbol has arity at most 2."""
        return self.rho <= 2

    def binary_symbols(self) -> tuple[str, ...]:
        return tuple(n for n, a in self.symbols if a == 2)

    def unary_symbols(self) -> tuple[str, ...]:
        return tuple(n for n, a in self.symbols if a == 1)

    def extended(self, extra: Iterable[tuple[str, int]]) -> "Vocabulary":
        return Vocabulary(list(self.symbols) + list(extra))

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}/{a}" for n, a in self.symbols)
        return f"Vocabulary({inner})"


class FinStructure:
    """A finite structure: a vocabulary, a size, and one table per symbol."""

    __slots__ = ("vocab", "size", "tables", "_hash", "_canon", "_bits")

    def __init__(self, vocab: Vocabulary, size: int,
                 tables: dict[str, Iterable[tuple[int, ...]]] | None = None):
        size = int(size)
        if size < 0:
            raise InvalidElementError(f"size {size} is negative")
        self.vocab = vocab
        self.size = size
        clean: dict[str, frozenset[tuple[int, ...]]] = {}
        tables = dict(tables or {})
        for name in tables:
            if name not in vocab:
                raise VocabularyError(f"table for unknown symbol {name!r}")
        for name, arity in vocab.symbols:
            rows = set()
            for t in tables.get(name, ()):
                t = tuple(int(x) for x in t)
                if len(t) != arity:
                    raise InvalidElementError(
                        f"{name!r} expects arity {arity}, got tuple {t}")
                if any(x < 0 or x >= size for x in t):
                    raise InvalidElementError(
                        f"tuple {t} for {name!r} is outside universe 0..{size - 1}")
                rows.add(t)
            clean[name] = frozenset(rows)
        self.tables = clean
        self._hash = hash((vocab, size, tuple(frozenset(clean[n]) for n in vocab.names())))
        self._canon: TypeId | None = None
        self._bits: dict[str, tuple[int, ...]] | None = None

    def table(self, name: str) -> frozenset[tuple[int, ...]]:
        self.vocab.arity(name)
        return self.tables[name]

    def points(self) -> range:
        return range(self.size)

    def out_bits(self, symbol: str) -> tuple[int, ...]:
        """Row bitmasks for a binary symbol: bit u of row v set iff (v, u) holds."""
        if self.vocab.arity(symbol) != 2:
            raise VocabularyError(f"{symbol!r} is not binary")
        if self._bits is None:
            self._bits = {}
        if symbol not in self._bits:
            rows = [0] * self.size
            for (v, u) in self.tables[symbol]:
                rows[v] |= 1 << u
            self._bits[symbol] = tuple(rows)
        return self._bits[symbol]

    def __eq__(self, other) -> bool:
        return (isinstance(other, FinStructure) and self.vocab == other.vocab
                and self.size == other.size and self.tables == other.tables)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        facts = sum(len(t) for t in self.tables.values())
        return f"FinStructure(size={self.size}, facts={facts}, vocab={self.vocab!r})"


class Embedding:
    """An injective strong map between structures over one vocabulary."""

    __slots__ = ("source", "target", "map")

    def __init__(self, source: FinStructure, target: FinStructure,
                 mapping: Sequence[int], check: bool = True):
        if source.vocab != target.vocab:
            raise VocabularyError("embedding endpoints use different vocabularies")
        m = tuple(int(x) for x in mapping)
        self.source = source
        self.target = target
        self.map = m
        if check:
            self._validate()

    def _validate(self) -> None:
        m = self.map
        if len(m) != self.source.size:
            raise InvalidElementError("embedding map has wrong length")
        if any(x < 0 or x >= self.target.size for x in m):
            raise InvalidElementError("embedding map leaves the target universe")
        if len(set(m)) != len(m):
            raise InvalidElementError("embedding map is not injective")
        image = set(m)
        for name, _arity in self.source.vocab.symbols:
            fwd = {tuple(m[x] for x in t) for t in self.source.tables[name]}
            back = {t for t in self.target.tables[name] if set(t) <= image}
            if fwd != back:
                raise InvalidElementError(
                    f"map is not strong on symbol {name!r}")

    def __call__(self, x: int) -> int:
        return self.map[x]

    def compose(self, outer: "Embedding") -> "Embedding":
        """Return outer after self (source of self into target of outer)."""
        if outer.source is not self.target and outer.source != self.target:
            raise InvalidElementError("embeddings do not compose")
        return Embedding(self.source, outer.target,
                         tuple(outer.map[x] for x in self.map), check=False)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Embedding) and self.map == other.map
                and self.source == other.source and self.target == other.target)

    def __hash__(self) -> int:
        return hash((self.map, self.source, self.target))

    def __repr__(self) -> str:
        return f"Embedding({self.map})"


class TypeId:
    """An opaque, canonical, hashable identifier for a type or iso-class.

    Two TypeIds are equal exactly when their underlying objects are
    equivalent in the sense of the producing operation.  They sort
    deterministically, so reports and censuses have a stable order.
    """

    __slots__ = ("kind", "signature", "payload", "_hash", "_sort", "_fp")

    def __init__(self, kind: str, signature, payload):
        self.kind = kind
        self.signature = signature
        self.payload = payload
        self._hash = hash((kind, signature, payload))
        self._sort: tuple[str, str, str] | None = None
        self._fp: str | None = None

    @property
    def sort_key(self) -> tuple[str, str, str]:
        if self._sort is None:
            self._sort = (self.kind, repr(self.signature), repr(self.payload))
        return self._sort

    @property
    def fingerprint(self) -> str:
        if self._fp is None:
            blob = repr((self.kind, self.signature, self.payload)).encode()
            self._fp = hashlib.sha256(blob).hexdigest()[:16]
        return self._fp

    def __eq__(self, other) -> bool:
        return (isinstance(other, TypeId) and self.kind == other.kind
                and self.signature == other.signature and self.payload == other.payload)

    def __lt__(self, other) -> bool:
        return self.sort_key < other.sort_key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"TypeId({self.kind}:{self.fingerprint})"


# ---------------------------------------------------------------------------
# basic operations


def induced_substructure(s: FinStructure, subset: Iterable[int]
                         ) -> tuple[FinStructure, tuple[int, ...]]:
    """Induced substructure on `subset`, re-indexed to 0..k-1.

    Returns (structure, points) where points[i] is the original element
    now called i; points is sorted ascending.
    """
    pts = sorted(set(int(x) for x in subset))
    if pts and (pts[0] < 0 or pts[-1] >= s.size):
        raise InvalidElementError(f"subset {pts} is not within universe 0..{s.size - 1}")
    index = {v: i for i, v in enumerate(pts)}
    keep = set(pts)
    tables = {}
    for name, _arity in s.vocab.symbols:
        tables[name] = {tuple(index[x] for x in t)
                        for t in s.tables[name] if set(t) <= keep}
    return FinStructure(s.vocab, len(pts), tables), tuple(pts)


def reduct_to(s: FinStructure, keep: Iterable[str]) -> FinStructure:
    """Forget every symbol not named in `keep` (order follows s.vocab)."""
    wanted = set(keep)
    for name in wanted:
        if name not in s.vocab:
            raise VocabularyError(f"cannot keep unknown symbol {name!r}")
    vocab = Vocabulary([(n, a) for n, a in s.vocab.symbols if n in wanted])
    return FinStructure(vocab, s.size, {n: s.tables[n] for n in vocab.names()})


def expand_with_marks(s: FinStructure, marks: Iterable[tuple[str, Iterable[int]]]
                      ) -> FinStructure:
    """Add fresh unary symbols, each holding on the given subset."""
    marks = [(str(name), sorted(set(int(v) for v in vs))) for name, vs in marks]
    for name, vs in marks:
        if name in s.vocab:
            raise VocabularyError(f"mark symbol {name!r} clashes with the vocabulary")
        if vs and (vs[0] < 0 or vs[-1] >= s.size):
            raise InvalidElementError(f"mark {name!r} covers elements outside the universe")
    vocab = s.vocab.extended((name, 1) for name, _ in marks)
    tables = dict(s.tables)
    for name, vs in marks:
        tables[name] = {(v,) for v in vs}
    return FinStructure(vocab, s.size, tables)


def tuple_payload(vocab: Vocabulary, tables, tup: tuple[int, ...]):
    """The raw payload behind `tuple_type`; `tables` is any mapping from
    symbol name to a container of tuples supporting `in`."""
    n = len(tup)
    first: dict[int, int] = {}
    eq = tuple(first.setdefault(v, i) for i, v in enumerate(tup))
    rel = []
    for name, arity in vocab.symbols:
        tab = tables[name]
        hits = tuple(pos for pos in product(range(n), repeat=arity)
                     if tuple(tup[p] for p in pos) in tab)
        rel.append(hits)
    return (n, eq, tuple(rel))


def tuple_type(s: FinStructure, tup: Sequence[int]) -> TypeId:
    """Quantifier-free type of an ordered tuple (repeats allowed).

    The payload records the equality pattern and, for each symbol, which
    position patterns are facts; the tuple's own order pins any candidate
    isomorphism, so this positional encoding is canonical without search.
    """
    tup = tuple(int(x) for x in tup)
    if any(x < 0 or x >= s.size for x in tup):
        raise InvalidElementError(f"tuple {tup} is not within universe 0..{s.size - 1}")
    return TypeId("tuple", s.vocab.symbols, tuple_payload(s.vocab, s.tables, tup))


# ---------------------------------------------------------------------------
# embeddings and isomorphism


def _degree_vectors(s: FinStructure) -> list[tuple[int, ...]]:
    degs = [[0] * len(s.vocab.symbols) for _ in range(s.size)]
    for si, (name, _arity) in enumerate(s.vocab.symbols):
        for t in s.tables[name]:
            for v in set(t):
                degs[v][si] += 1
    return [tuple(d) for d in degs]


def find_embeddings(a: FinStructure, b: FinStructure,
                    limit: int | None = None,
                    partial: dict[int, int] | None = None) -> list[Embedding]:
    """All strong injective maps a -> b, lexicographically by map tuple.

    `partial` prescribes images for some source points; only embeddings
    extending it are returned.
    """
    if a.vocab != b.vocab:
        raise VocabularyError("embedding endpoints use different vocabularies")
    if limit is not None and limit <= 0:
        return []
    if a.size == 0:
        return [Embedding(a, b, (), check=False)]
    if a.size > b.size:
        return []
    if partial:
        if any(x < 0 or x >= a.size or y < 0 or y >= b.size
               for x, y in partial.items()):
            raise InvalidElementError("partial map leaves the universes")
        if len(set(partial.values())) != len(partial):
            raise InvalidElementError("partial map is not injective")
    else:
        partial = {}
    deg_a = _degree_vectors(a)
    deg_b = _degree_vectors(b)
    symbols = a.vocab.symbols
    out: list[Embedding] = []
    mapping = [-1] * a.size
    used = [False] * b.size

    def consistent(i: int) -> bool:
        for name, arity in symbols:
            ta, tb = a.tables[name], b.tables[name]
            for pos in product(range(i + 1), repeat=arity):
                if i not in pos:
                    continue
                src = tuple(pos)
                if (src in ta) != (tuple(mapping[p] for p in pos) in tb):
                    return False
        return True

    def dfs(i: int) -> bool:
        if i == a.size:
            out.append(Embedding(a, b, tuple(mapping), check=False))
            return limit is not None and len(out) >= limit
        need = deg_a[i]
        forced = partial.get(i)
        for w in range(b.size) if forced is None else (forced,):
            if used[w]:
                continue
            dw = deg_b[w]
            if any(dw[k] < need[k] for k in range(len(need))):
                continue
            mapping[i] = w
            used[w] = True
            if consistent(i) and dfs(i + 1):
                return True
            used[w] = False
            mapping[i] = -1
        return False

    dfs(0)
    return out


def _iso_invariant(s: FinStructure):
    colors = _refine_colors(s, _initial_colors(s))
    hist = sorted(
        (colors.count(c) for c in set(colors)))
    tabs = tuple(len(s.tables[n]) for n in s.vocab.names())
    ones = sorted(tuple_type(s, (v,)).payload for v in range(s.size))
    return (s.size, tabs, hist, ones)


def is_isomorphic(a: FinStructure, b: FinStructure) -> Embedding | None:
    """An isomorphism witness if one exists, else None."""
    if a.vocab != b.vocab:
        raise VocabularyError("isomorphism endpoints use different vocabularies")
    if a.size != b.size:
        return None
    if _iso_invariant(a) != _iso_invariant(b):
        return None
    found = find_embeddings(a, b, limit=1)
    return found[0] if found else None


# ---------------------------------------------------------------------------
# canonical forms: colour refinement + backtracking minimum encoding


def _incidences(s: FinStructure) -> list[list[tuple[int, tuple[int, ...]]]]:
    inc: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(s.size)]
    for si, (name, _arity) in enumerate(s.vocab.symbols):
        for t in sorted(s.tables[name]):
            for v in set(t):
                inc[v].append((si, t))
    return inc


def _initial_colors(s: FinStructure) -> list[int]:
    sigs = [tuple_type(s, (v,)).payload for v in range(s.size)]
    ranks = {p: i for i, p in enumerate(sorted(set(sigs)))}
    return [ranks[p] for p in sigs]


def _refine_colors(s: FinStructure, colors: list[int],
                   inc: list[list[tuple[int, tuple[int, ...]]]] | None = None
                   ) -> list[int]:
    if inc is None:
        inc = _incidences(s)
    n = s.size
    while True:
        sigs = []
        for v in range(n):
            prof = sorted((si, tuple(-1 if u == v else colors[u] for u in t))
                          for si, t in inc[v])
            sigs.append((colors[v], tuple(prof)))
        ranks = {g: i for i, g in enumerate(sorted(set(sigs)))}
        new = [ranks[g] for g in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_key(s: FinStructure) -> TypeId:
    """A TypeId equal across structures exactly when they are isomorphic."""
    if s._canon is not None:
        return s._canon
    n = s.size
    if n == 0:
        key = TypeId("structure", s.vocab.symbols, (0, ()))
        s._canon = key
        return key
    inc = _incidences(s)
    base = _refine_colors(s, _initial_colors(s), inc)
    symbols = s.vocab.symbols
    tables = s.tables
    best: list | None = None

    def row_for(order: list[int], v: int):
        pos = {u: i for i, u in enumerate(order)}
        pos[v] = len(order)
        placed = set(order)
        placed.add(v)
        row = []
        for name, _arity in symbols:
            hits = [tuple(pos[x] for x in t) for t in tables[name]
                    if v in t and set(t) <= placed]
            row.append(tuple(sorted(hits)))
        return tuple(row)

    def dfs(order: list[int], rows: list, better: bool) -> None:
        nonlocal best
        i = len(order)
        if i == n:
            if better or best is None:
                best = list(rows)
            return
        colors = list(base)
        for p, u in enumerate(order):
            colors[u] = -(p + 1)
        colors = _refine_colors(s, colors, inc)
        remaining = [v for v in range(n) if v not in order]
        target = min(colors[v] for v in remaining)
        for v in remaining:
            if colors[v] != target:
                continue
            row = row_for(order, v)
            sub_better = better
            if not sub_better and best is not None:
                if row > best[i]:
                    continue
                if row < best[i]:
                    sub_better = True
            order.append(v)
            rows.append(row)
            dfs(order, rows, sub_better)
            rows.pop()
            order.pop()

    dfs([], [], False)
    assert best is not None
    key = TypeId("structure", symbols, (n, tuple(best)))
    s._canon = key
    return key


# ---------------------------------------------------------------------------
# convenience constructors


def graph_vocabulary(symbol: str = "adj") -> Vocabulary:
    return Vocabulary([(symbol, 2)])


def undirected_graph(size: int, edges: Iterable[tuple[int, int]],
                     symbol: str = "adj") -> FinStructure:
    """A loop-free symmetric binary structure from an edge list."""
    tab = set()
    for u, v in edges:
        if u == v:
            raise InvalidElementError(f"loop edge at {u}")
        tab.add((u, v))
        tab.add((v, u))
    return FinStructure(graph_vocabulary(symbol), size, {symbol: tab})


def subsets_of_size(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All k-subsets of range(n), ascending lexicographic."""
    from itertools import combinations
    return combinations(range(n), k)
