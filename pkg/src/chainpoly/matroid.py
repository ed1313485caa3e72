"""Matroids given by a ground set ``{0, ..., n-1}`` and a rank oracle.

Subsets of the ground set are Python ints used as bitsets: element ``a`` is in
``s`` iff ``s >> a & 1``.  Every matroid can also materialize its full rank
table (a numpy array indexed by bitset) which the chain enumerators consume.
Minors, duals and direct sums are lazy views over their parents.
"""

from __future__ import annotations

import random
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ContractViolation, InvalidParameters, SchemaError, SizeCapExceeded
from .graph import Graph, graph_rank

__all__ = [
    "Matroid",
    "UniformMatroid",
    "GraphicMatroid",
    "TableMatroid",
    "DualMatroid",
    "DirectSum",
    "Minor",
    "FlatLattice",
    "make_uniform",
    "make_graphic",
    "make_table",
    "dual",
    "delete",
    "contract",
    "restrict",
    "direct_sum",
    "closure",
    "join",
    "flats",
    "is_loop",
    "is_coloop",
    "is_simple",
    "check_axioms",
    "rank_agrees",
    "matroid_from_json",
    "popcounts",
    "bits",
    "mask_of",
]

MAX_GROUND = 63
TABLE_MAX_N = 24
FLATS_MAX_N = 20
EAGER_AXIOM_N = 12


def bits(s: int) -> list[int]:
    """Elements of the bitset ``s`` in increasing order."""
    out = []
    a = 0
    while s:
        if s & 1:
            out.append(a)
        s >>= 1
        a += 1
    return out


def mask_of(elements) -> int:
    m = 0
    for a in elements:
        m |= 1 << int(a)
    return m


def popcounts(n: int) -> np.ndarray:
    """``popcounts(n)[s]`` is ``|s|`` for every ``s < 2**n``."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.int64)


class Matroid(ABC):
    """Abstract matroid on ``{0, ..., n-1}``; subclasses supply ``_rank``."""

    def __init__(self, n: int):
        if not 0 <= n <= MAX_GROUND:
            raise InvalidParameters(f"ground set size {n} outside 0..{MAX_GROUND}")
        self.n = n
        self._memo: dict[int, int] = {}
        self._table: np.ndarray | None = None
        self._lock = threading.Lock()

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def rk(self) -> int:
        """Rank of the matroid, ``rank(full)``."""
        return self.rank(self.full)

    def _check(self, s: int) -> int:
        if not isinstance(s, (int, np.integer)) or s < 0 or int(s) >> self.n:
            raise ContractViolation(f"subset {s!r} is not a bitset over {self.n} elements")
        return int(s)

    def rank(self, s: int) -> int:
        s = self._check(s)
        if self._table is not None:
            return int(self._table[s])
        r = self._memo.get(s)
        if r is None:
            r = self._memo[s] = int(self._rank(s))
        return r

    @abstractmethod
    def _rank(self, s: int) -> int:
        ...

    def rank_table(self) -> np.ndarray:
        """Ranks of all ``2**n`` subsets (read-only, built once)."""
        if self._table is None:
            if self.n > TABLE_MAX_N:
                raise SizeCapExceeded(
                    f"rank table of 2**{self.n} subsets exceeds the cap 2**{TABLE_MAX_N}")
            with self._lock:
                if self._table is None:
                    t = np.asarray(self._build_table(), dtype=np.int64)
                    t.setflags(write=False)
                    self._table = t
        return self._table

    def _build_table(self) -> np.ndarray:
        return np.fromiter((self._rank(s) for s in range(1 << self.n)),
                           dtype=np.int64, count=1 << self.n)

    @abstractmethod
    def to_json(self) -> dict:
        ...

    def __repr__(self) -> str:
        return f"<{type(self).__name__} n={self.n} rk={self.rk}>"


class UniformMatroid(Matroid):
    def __init__(self, r: int, n: int):
        if not 0 <= r <= n:
            raise InvalidParameters(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
        super().__init__(n)
        self.r = r

    def _rank(self, s: int) -> int:
        return min(s.bit_count(), self.r)

    def _build_table(self) -> np.ndarray:
        return np.minimum(popcounts(self.n), self.r)

    def to_json(self) -> dict:
        return {"type": "uniform", "r": self.r, "n": self.n}


class GraphicMatroid(Matroid):
    """Cycle matroid of a graph; ground set = edge indices, rank = |V| - c(A)."""

    def __init__(self, graph: Graph):
        super().__init__(graph.n_edges)
        self.graph = graph

    def _rank(self, s: int) -> int:
        return graph_rank(self.graph, s)

    def _build_table(self) -> np.ndarray:
        # min-label propagation over all subsets at once
        g = self.graph
        size = 1 << self.n
        subsets = np.arange(size, dtype=np.int64)
        labels = np.tile(np.arange(g.n_vertices, dtype=np.int32), (size, 1))
        members = [((subsets >> i) & 1).astype(bool) for i in range(self.n)]
        changed = True
        while changed:
            changed = False
            for i, (u, v) in enumerate(g.edges):
                if u == v:
                    continue
                has = members[i]
                lu, lv = labels[has, u], labels[has, v]
                low = np.minimum(lu, lv)
                if np.any(lu != lv):
                    changed = True
                    labels[has, u] = low
                    labels[has, v] = low
        roots = (labels == np.arange(g.n_vertices, dtype=np.int32)).sum(axis=1)
        return g.n_vertices - roots

    def to_json(self) -> dict:
        return {"type": "graphic", "graph": self.graph.to_json()}


class TableMatroid(Matroid):
    """Matroid given by an explicit list of ``2**n`` ranks."""

    def __init__(self, n: int, ranks: Sequence[int], validate: bool = True):
        if n > TABLE_MAX_N:
            raise SizeCapExceeded(f"rank table for n={n} exceeds cap {TABLE_MAX_N}")
        super().__init__(n)
        ranks = np.asarray(ranks, dtype=np.int64)
        if ranks.shape != (1 << n,):
            raise InvalidParameters(f"expected {1 << n} ranks, got shape {ranks.shape}")
        ranks.setflags(write=False)
        self._table = ranks
        if validate:
            check_axioms(self)

    def _rank(self, s: int) -> int:
        return int(self._table[s])

    def to_json(self) -> dict:
        return {"type": "table", "n": self.n, "ranks": [int(r) for r in self._table]}


class DualMatroid(Matroid):
    def __init__(self, of: Matroid):
        super().__init__(of.n)
        self.of = of

    def _rank(self, s: int) -> int:
        return s.bit_count() - self.of.rk + self.of.rank(self.full ^ s)

    def _build_table(self) -> np.ndarray:
        parent = self.of.rank_table()
        return popcounts(self.n) - self.of.rk + parent[::-1]

    def to_json(self) -> dict:
        return {"type": "dual", "of": self.of.to_json()}


class DirectSum(Matroid):
    """Elements of ``right`` are relabeled to follow those of ``left``."""

    def __init__(self, left: Matroid, right: Matroid):
        super().__init__(left.n + right.n)
        self.left, self.right = left, right

    def _rank(self, s: int) -> int:
        return self.left.rank(s & self.left.full) + self.right.rank(s >> self.left.n)

    def _build_table(self) -> np.ndarray:
        a, b = self.left.rank_table(), self.right.rank_table()
        return (b[:, None] + a[None, :]).reshape(-1)

    def to_json(self) -> dict:
        return {"type": "sum", "left": self.left.to_json(), "right": self.right.to_json()}


class Minor(Matroid):
    """``(of / contracted) \\ deleted`` with the remaining elements renumbered in order."""

    def __init__(self, of: Matroid, deleted: int, contracted: int, spec: dict | None = None):
        of._check(deleted)
        of._check(contracted)
        if deleted & contracted:
            raise ContractViolation("deleted and contracted sets overlap")
        self.of = of
        self.deleted = deleted
        self.contracted = contracted
        self.kept = [a for a in range(of.n) if not (deleted | contracted) >> a & 1]
        super().__init__(len(self.kept))
        self._spec = spec

    def lift(self, s: int) -> int:
        """The parent subset corresponding to ``s``."""
        out = 0
        for i, a in enumerate(self.kept):
            if s >> i & 1:
                out |= 1 << a
        return out

    @cached_property
    def _rank_c(self) -> int:
        return self.of.rank(self.contracted)

    def _rank(self, s: int) -> int:
        return self.of.rank(self.lift(s) | self.contracted) - self._rank_c

    def _build_table(self) -> np.ndarray:
        parent = self.of.rank_table()
        subsets = np.arange(1 << self.n, dtype=np.int64)
        lifted = np.full(1 << self.n, self.contracted, dtype=np.int64)
        for i, a in enumerate(self.kept):
            lifted |= ((subsets >> i) & 1) << a
        return parent[lifted] - self._rank_c

    def to_json(self) -> dict:
        if self._spec is not None:
            return self._spec
        return {"type": "minor", "of": self.of.to_json(),
                "deleted": bits(self.deleted), "contracted": bits(self.contracted)}


# -- constructors -------------------------------------------------------------

def make_uniform(r: int, n: int) -> UniformMatroid:
    return UniformMatroid(r, n)


def make_graphic(g: Graph) -> GraphicMatroid:
    return GraphicMatroid(g)


def make_table(n: int, ranks: Sequence[int]) -> TableMatroid:
    return TableMatroid(n, ranks)


def dual(m: Matroid) -> DualMatroid:
    return DualMatroid(m)


def _element(m: Matroid, a: int) -> int:
    if not isinstance(a, (int, np.integer)) or not 0 <= a < m.n:
        raise ContractViolation(f"element {a!r} not in ground set of size {m.n}")
    return int(a)


def delete(m: Matroid, a: int) -> Minor:
    a = _element(m, a)
    return Minor(m, 1 << a, 0, {"type": "delete", "of": m.to_json(), "element": a})


def contract(m: Matroid, a: int) -> Minor:
    a = _element(m, a)
    return Minor(m, 0, 1 << a, {"type": "contract", "of": m.to_json(), "element": a})


def restrict(m: Matroid, s: int) -> Minor:
    s = m._check(s)
    return Minor(m, m.full ^ s, 0, {"type": "restrict", "of": m.to_json(), "elements": bits(s)})


def direct_sum(m1: Matroid, m2: Matroid) -> DirectSum:
    return DirectSum(m1, m2)


# -- closure and flats -------------------------------------------------------

def closure(m: Matroid, s: int) -> int:
    """``{a : rank(s + a) == rank(s)}``."""
    r = m.rank(s)
    out = s
    for a in range(m.n):
        if not s >> a & 1 and m.rank(s | 1 << a) == r:
            out |= 1 << a
    return out


join = closure


def is_loop(m: Matroid, a: int) -> bool:
    return m.rank(1 << _element(m, a)) == 0


def is_coloop(m: Matroid, a: int) -> bool:
    return m.rank(m.full ^ 1 << _element(m, a)) == m.rk - 1


def is_simple(m: Matroid) -> bool:
    """No loops and no parallel pairs."""
    if any(is_loop(m, a) for a in range(m.n)):
        return False
    return all(m.rank(1 << a | 1 << b) == 2
               for a in range(m.n) for b in range(a + 1, m.n))


@dataclass(frozen=True)
class FlatLattice:
    """Flats sorted by (cardinality, bitset value) with ranks and a closure index.

    ``closure_index[s]`` is the position in ``flats`` of the closure of the
    subset ``s``; the Möbius matrix is indexed the same way.
    """

    n: int
    flats: tuple[int, ...]
    ranks: tuple[int, ...]
    closure_index: np.ndarray = field(repr=False)

    @cached_property
    def index(self) -> dict[int, int]:
        return {f: i for i, f in enumerate(self.flats)}

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.flats) - 1

    def __len__(self) -> int:
        return len(self.flats)

    @cached_property
    def leq(self) -> np.ndarray:
        """``leq[i, j]`` iff flat ``i`` is contained in flat ``j``."""
        f = np.array(self.flats, dtype=np.int64)
        return (f[:, None] & ~f[None, :]) == 0

    @cached_property
    def mobius(self) -> np.ndarray:
        """Classic Möbius function ``mu[i, j]`` (zero unless ``i <= j``)."""
        size = len(self.flats)
        leq = self.leq.astype(np.int64)
        mu = np.zeros((size, size), dtype=np.int64)
        for y in range(size):
            mu[:, y] = -(mu[:, :y] @ leq[:y, y])
            mu[y, y] = 1
        mu.setflags(write=False)
        return mu

    def is_chain(self, chain: Sequence[int]) -> bool:
        """True when the flat bitsets in ``chain`` are all flats and nested."""
        if any(x not in self.index for x in chain):
            return False
        return all(a & ~b == 0 for a, b in zip(chain, chain[1:]))


def flats(m: Matroid, max_n: int = FLATS_MAX_N) -> FlatLattice:
    """The lattice of flats as the image of closure over all subsets."""
    if m.n > max_n:
        raise SizeCapExceeded(f"flat enumeration over 2**{m.n} subsets exceeds cap n <= {max_n}")
    table = m.rank_table()
    subsets = np.arange(1 << m.n, dtype=np.int64)
    clo = subsets.copy()
    for a in range(m.n):
        bit = np.int64(1 << a)
        clo |= np.where(table[subsets | bit] == table, bit, np.int64(0))
    uniq = np.unique(clo)
    order = sorted(int(f) for f in uniq)
    order.sort(key=lambda f: (f.bit_count(), f))
    pos_by_value = {f: i for i, f in enumerate(order)}
    remap = np.array([pos_by_value[int(f)] for f in uniq], dtype=np.int64)
    closure_index = remap[np.searchsorted(uniq, clo)]
    closure_index.setflags(write=False)
    return FlatLattice(m.n, tuple(order), tuple(int(table[f]) for f in order), closure_index)


# -- validation ----------------------------------------------------------------

def check_axioms(m: Matroid, samples: int = 1000, seed: int = 0) -> None:
    """Raise :class:`InvalidParameters` on the first violated rank axiom.

    Exhaustive for ``n <= 12``; otherwise checks ``samples`` random pairs.
    """
    n = m.n
    if m.rank(0) != 0:
        raise InvalidParameters("rank of the empty set is not 0")
    for a in range(n):
        if m.rank(1 << a) not in (0, 1):
            raise InvalidParameters(f"rank of singleton {a} is not 0 or 1")
    if n <= EAGER_AXIOM_N:
        t = m.rank_table()
        subsets = np.arange(1 << n, dtype=np.int64)
        for a in range(n):
            bit = 1 << a
            up = t[subsets | bit] - t
            if np.any((up < 0) | (up > 1)):
                s = int(np.flatnonzero((up < 0) | (up > 1))[0])
                raise InvalidParameters(f"adding {a} to {bits(s)} changes rank by {int(up[s])}")
        # unit increase + local submodularity on pairs implies submodularity
        for a in range(n):
            for b in range(a + 1, n):
                ab = 1 << a | 1 << b
                lhs = t[subsets | ab] + t
                rhs = t[subsets | 1 << a] + t[subsets | 1 << b]
                bad = lhs > rhs
                if np.any(bad):
                    s = int(np.flatnonzero(bad)[0])
                    raise InvalidParameters(f"submodularity fails at {bits(s)} with {a}, {b}")
        return
    rng = random.Random(seed)
    for _ in range(samples):
        x, y = rng.getrandbits(n), rng.getrandbits(n)
        rx, ry = m.rank(x), m.rank(y)
        if m.rank(x & y) + m.rank(x | y) > rx + ry:
            raise InvalidParameters(f"submodularity fails for {bits(x)}, {bits(y)}")
        if m.rank(x | y) < max(rx, ry):
            raise InvalidParameters(f"monotonicity fails for {bits(x)}, {bits(y)}")
        if rx > x.bit_count():
            raise InvalidParameters(f"rank exceeds cardinality at {bits(x)}")


def rank_agrees(m1: Matroid, m2: Matroid, bijection: Sequence[int] | None = None) -> bool:
    """True when ``m1.rank(S) == m2.rank(bijection[S])`` for every subset ``S``."""
    if m1.n != m2.n:
        return False
    t1, t2 = m1.rank_table(), m2.rank_table()
    if bijection is None:
        return bool(np.array_equal(t1, t2))
    subsets = np.arange(1 << m1.n, dtype=np.int64)
    image = np.zeros_like(subsets)
    for a, b in enumerate(bijection):
        image |= ((subsets >> a) & 1) << b
    return bool(np.array_equal(t1, t2[image]))


# -- JSON ------------------------------------------------------------------------

def _int_field(obj: dict, key: str, path: str, lo: int = 0) -> int:
    v = obj.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < lo:
        raise SchemaError(f"{path}.{key}", f"expected an integer >= {lo}")
    return v


def _only(obj: dict, keys: set, path: str) -> None:
    extra = set(obj) - keys
    if extra:
        raise SchemaError(path, f"unexpected keys {sorted(extra)}")


def matroid_from_json(obj, path: str = "$") -> Matroid:
    """Build a matroid from its JSON description; errors carry a field path."""
    if not isinstance(obj, dict):
        raise SchemaError(path, "matroid must be an object")
    kind = obj.get("type")
    try:
        if kind == "uniform":
            _only(obj, {"type", "r", "n"}, path)
            n = _int_field(obj, "n", path)
            r = _int_field(obj, "r", path)
            if r > n:
                raise SchemaError(f"{path}.r", f"rank {r} exceeds n={n}")
            return make_uniform(r, n)
        if kind == "graphic":
            _only(obj, {"type", "graph"}, path)
            return make_graphic(Graph.from_json(obj.get("graph"), f"{path}.graph"))
        if kind == "table":
            _only(obj, {"type", "n", "ranks"}, path)
            n = _int_field(obj, "n", path)
            ranks = obj.get("ranks")
            if not isinstance(ranks, list) or len(ranks) != 1 << n:
                raise SchemaError(f"{path}.ranks", f"expected a list of {1 << n} integers")
            return make_table(n, ranks)
        if kind == "dual":
            _only(obj, {"type", "of"}, path)
            return dual(matroid_from_json(obj.get("of"), f"{path}.of"))
        if kind == "sum":
            _only(obj, {"type", "left", "right"}, path)
            return direct_sum(matroid_from_json(obj.get("left"), f"{path}.left"),
                              matroid_from_json(obj.get("right"), f"{path}.right"))
        if kind in ("delete", "contract"):
            _only(obj, {"type", "of", "element"}, path)
            m = matroid_from_json(obj.get("of"), f"{path}.of")
            a = _int_field(obj, "element", path)
            if a >= m.n:
                raise SchemaError(f"{path}.element", f"element {a} out of range 0..{m.n - 1}")
            return delete(m, a) if kind == "delete" else contract(m, a)
        if kind == "restrict":
            _only(obj, {"type", "of", "elements"}, path)
            m = matroid_from_json(obj.get("of"), f"{path}.of")
            return restrict(m, _elements(obj, "elements", m, path))
        if kind == "minor":
            _only(obj, {"type", "of", "deleted", "contracted"}, path)
            m = matroid_from_json(obj.get("of"), f"{path}.of")
            return Minor(m, _elements(obj, "deleted", m, path),
                         _elements(obj, "contracted", m, path))
    except (InvalidParameters, ContractViolation) as exc:
        raise SchemaError(path, str(exc)) from None
    raise SchemaError(f"{path}.type", f"unknown matroid type {kind!r}")


def _elements(obj: dict, key: str, m: Matroid, path: str) -> int:
    els = obj.get(key, [])
    if not isinstance(els, list):
        raise SchemaError(f"{path}.{key}", "expected a list of element ids")
    for i, a in enumerate(els):
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < m.n:
            raise SchemaError(f"{path}.{key}[{i}]", f"element out of range 0..{m.n - 1}")
    return mask_of(els)
