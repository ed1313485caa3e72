"""Coupled multicolorings and coupled multicommodity flows on graphs.

Brute-force counters enumerate every tuple of vertex colorings (or of
group-valued flows) and apply the coupling conditions edge by edge.  The
polynomial side comes from the graphic matroid via :mod:`chainpoly.chains`.

Both counters first compress each single coloring (flow) to its *pattern*:
the bitset of edges on which the two endpoint colors agree (the flow value
is zero).  The coupling conditions only look at these patterns, so the
count is a sum over pattern tuples weighted by pattern multiplicities.  The
``naive`` methods skip that compression and exist to cross-check it.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chains import chain_characteristic, chain_tutte, t_vars
from .enumeration import default_max_visits, histogram_chains
from .errors import ChainPolyError, ContractViolation, HypothesisViolation, SchemaError, \
    SizeCapExceeded
from .graph import Graph, Orientation, check_orientation, components, default_orientation
from .matroid import make_graphic, popcounts
from .polyring import MultiPoly

__all__ = [
    "AbelianGroup",
    "parse_group",
    "parse_groups",
    "ColorAssignment",
    "FlowAssignment",
    "coloring_condition",
    "flow_condition",
    "is_coupled_coloring",
    "count_coupled_colorings",
    "coupled_chromatic_poly",
    "is_coupled_flow",
    "count_coupled_flows",
    "coupled_flow_poly",
]


# -- abelian groups --------------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    """Product of cyclic groups ``Z_q1 x Z_q2 x ...``.

    Elements are encoded as mixed-radix integers in ``range(order)`` with the
    first factor as the least significant digit; ``0`` is the identity.
    """

    factors: tuple[int, ...]

    def __post_init__(self):
        if not self.factors or any(q < 1 for q in self.factors):
            raise ContractViolation(f"bad cyclic factors {self.factors!r}")

    @property
    def order(self) -> int:
        out = 1
        for q in self.factors:
            out *= q
        return out

    def digits(self, x):
        """Per-factor components of encoded elements (works on ints and arrays)."""
        out = []
        for q in self.factors:
            out.append(x % q)
            x = x // q
        return out

    def encode(self, digits) -> int:
        x, mult = 0, 1
        for d, q in zip(digits, self.factors):
            x = x + (d % q) * mult
            mult *= q
        return x

    def add(self, x: int, y: int) -> int:
        return self.encode([a + b for a, b in zip(self.digits(x), self.digits(y))])

    def neg(self, x: int) -> int:
        return self.encode([-a for a in self.digits(x)])

    def __str__(self) -> str:
        return "x".join(f"Z{q}" for q in self.factors)


_GROUP_RE = re.compile(r"^Z(\d+)(?:xZ(\d+))*$")


def parse_group(text: str) -> AbelianGroup:
    """``"Z4"`` or ``"Z2xZ2"``."""
    text = text.strip()
    if not _GROUP_RE.match(text):
        raise SchemaError("groups", f"cannot parse group {text!r}; expected e.g. Z4 or Z2xZ2")
    factors = tuple(int(part[1:]) for part in text.split("x"))
    if any(q < 1 for q in factors):
        raise SchemaError("groups", f"cyclic factor orders must be >= 1 in {text!r}")
    return AbelianGroup(factors)


def parse_groups(text: str) -> list[AbelianGroup]:
    return [parse_group(part) for part in text.split(",") if part.strip()]


# -- coupling conditions ---------------------------------------------------------

def _all(parts, start):
    out = start
    for p in parts:
        out = out & p
    return out


def coloring_condition(eq: Sequence, k: int):
    """Coupled k-multicoloring condition on one edge, or on bitsets of edges.

    ``eq[i]`` says whether ``f_{i+1}`` agrees on the two endpoints; entries
    may be numpy bools, bool arrays, or unsigned bitsets (one bit per edge),
    and the result has the same kind.  Even ``k``: for each ``l``, agreement
    of ``f_1, f_3, ..., f_{2l-1}`` forces agreement of ``f_{2l}``.  Odd
    ``k > 1``: the same for ``l <= (k-1)/2`` and additionally agreement of
    ``f_1, f_3, ..., f_{k-2}`` forces ``f_k`` to differ.  ``k = 1`` is a proper
    coloring.
    """
    if k == 1:
        return ~eq[0]
    true = ~(eq[0] ^ eq[0])
    ok = true
    for l in range(1, k // 2 + 1):
        ante = _all(eq[0:2 * l - 1:2], true)
        ok = ok & (~ante | eq[2 * l - 1])
    if k % 2:
        ante = _all(eq[0:k - 2:2], true)
        ok = ok & (~ante | ~eq[k - 1])
    return ok


def flow_condition(zero: Sequence, k: int):
    """Coupled k-multicommodity flow condition on one directed edge (or bitsets).

    ``zero[i]`` says whether ``f_{i+1}`` vanishes on the edge.  Even ``k``: for
    each ``l``, vanishing of ``f_1, f_3, ..., f_{2l-1}`` forces ``f_{2l} = 0``.
    Odd ``k > 1``: the same lines for ``l <= (k-1)/2``, and vanishing of
    ``f_1, f_3, ..., f_{k-2}`` forces ``f_{k-1} = 0`` together with
    ``f_k != 0``.  ``k = 1`` is the nowhere-zero condition.
    """
    if k == 1:
        return ~zero[0]
    true = ~(zero[0] ^ zero[0])
    ok = true
    for l in range(1, k // 2 + 1):
        ante = _all(zero[0:2 * l - 1:2], true)
        ok = ok & (~ante | zero[2 * l - 1])
    if k % 2:
        ante = _all(zero[0:k - 2:2], true)
        ok = ok & (~ante | (zero[k - 2] & ~zero[k - 1]))
    return ok


def _combine_patterns(histograms: list[Counter], n_edges: int, condition, k: int) -> int:
    """Sum of multiplicity products over pattern tuples passing ``condition`` on every edge."""
    if n_edges > 63:
        raise SizeCapExceeded("edge patterns are limited to 63 edges")
    full = np.uint64((1 << n_edges) - 1)
    pats = [np.array(list(h), dtype=np.uint64) for h in histograms]
    cnts = [np.array([h[p] for p in h], dtype=object) for h in histograms]
    if any(len(p) == 0 for p in pats):
        return 0
    grids = np.meshgrid(*pats, indexing="ij", sparse=True)
    ok = (condition(grids, k) & full) == full
    weight = np.ones((1,) * k, dtype=object)
    for i, c in enumerate(cnts):
        shape = [1] * k
        shape[i] = len(c)
        weight = weight * c.reshape(shape)
    weight = np.broadcast_to(weight, ok.shape)
    return int(weight[ok].sum()) if ok.any() else 0


# -- colorings ---------------------------------------------------------------

@dataclass(frozen=True)
class ColorAssignment:
    """``functions[i][v]`` is the color of vertex ``v`` under ``f_{i+1}``, in ``range(palette[i])``."""

    functions: tuple[tuple[int, ...], ...]
    palette: tuple[int, ...]

    def __post_init__(self):
        if len(self.functions) != len(self.palette):
            raise ContractViolation("one palette size per coloring function")
        for f, t in zip(self.functions, self.palette):
            if t < 1 or any(not 0 <= c < t for c in f):
                raise ContractViolation(f"colors {f} outside palette of size {t}")


def _require_simple(g: Graph) -> None:
    if not g.simple:
        raise HypothesisViolation("coupled multicolorings are defined on simple graphs")


def is_coupled_coloring(g: Graph, ca) -> bool:
    """Check every edge; ``ca`` is a :class:`ColorAssignment` or a sequence of color lists."""
    _require_simple(g)
    functions = ca.functions if isinstance(ca, ColorAssignment) else tuple(map(tuple, ca))
    k = len(functions)
    if k < 1:
        raise ContractViolation("need at least one coloring function")
    for f in functions:
        if len(f) != g.n_vertices:
            raise ContractViolation("each coloring must assign a color to every vertex")
    for a, b in g.edges:
        eq = [np.bool_(f[a] == f[b]) for f in functions]
        if not coloring_condition(eq, k):
            return False
    return True


def _check_work(work: int, max_work: int | None) -> None:
    cap = default_max_visits() if max_work is None else max_work
    if work > cap:
        raise SizeCapExceeded(f"brute force needs {work} evaluations; cap is {cap}")


def _function_table(size: int, length: int) -> np.ndarray:
    """All functions ``range(length) -> range(size)`` as rows, mixed radix."""
    idx = np.arange(size ** length, dtype=np.int64)
    out = np.empty((len(idx), length), dtype=np.int64)
    for j in range(length):
        out[:, j] = idx % size
        idx //= size
    return out


def _coloring_patterns(g: Graph, t: int) -> Counter:
    f = _function_table(t, g.n_vertices)
    pat = np.zeros(len(f), dtype=np.int64)
    for e, (a, b) in enumerate(g.edges):
        pat |= (f[:, a] == f[:, b]).astype(np.int64) << e
    u, c = np.unique(pat, return_counts=True)
    return Counter(dict(zip(u.tolist(), c.tolist())))


def count_coupled_colorings(g: Graph, palette: Sequence[int], method: str = "patterns",
                            max_work: int | None = None) -> int:
    """Number of coupled k-multicolorings with palette sizes ``palette = [t_1..t_k]``."""
    _require_simple(g)
    palette = [int(t) for t in palette]
    k = len(palette)
    if k < 1 or any(t < 1 for t in palette):
        raise ContractViolation(f"palette sizes must be positive, got {palette}")
    work = 1
    for t in palette:
        work *= t ** g.n_vertices
    _check_work(work, max_work)
    if method == "patterns":
        hists = [_coloring_patterns(g, t) for t in palette]
        return _combine_patterns(hists, g.n_edges, coloring_condition, k)
    if method == "naive":
        per = [list(itertools.product(range(t), repeat=g.n_vertices)) for t in palette]
        return sum(is_coupled_coloring(g, fs) for fs in itertools.product(*per))
    raise ContractViolation(f"unknown method {method!r}")


def coupled_chromatic_poly(g: Graph, k: int, *, jobs: int = 1,
                           max_visits: int | None = None) -> MultiPoly:
    """``(t_1...t_k)**c(G) * chi^k_{M(G)}(t_k, ..., t_1)``; note the reversed variables."""
    _require_simple(g)
    tv = t_vars(k)
    chi = chain_characteristic(make_graphic(g), k, jobs=jobs, max_visits=max_visits)
    rev = chi.substitute({f"t{i}": MultiPoly.var(f"t{k + 1 - i}", tv) for i in range(1, k + 1)},
                         vars=tv)
    prod = MultiPoly.monomial(tv, [1] * k)
    return rev * prod ** components(g)


# -- flows -----------------------------------------------------------------------

@dataclass(frozen=True)
class FlowAssignment:
    """``values[i][e]`` is the encoded element of ``groups[i]`` on edge ``e``."""

    values: tuple[tuple[int, ...], ...]
    groups: tuple[AbelianGroup, ...]

    def __post_init__(self):
        if len(self.values) != len(self.groups):
            raise ContractViolation("one group per flow function")
        for f, grp in zip(self.values, self.groups):
            if any(not 0 <= x < grp.order for x in f):
                raise ContractViolation(f"values {f} outside group {grp}")


def _as_groups(groups) -> tuple[AbelianGroup, ...]:
    return tuple(parse_group(x) if isinstance(x, str) else x for x in groups)


def _kirchhoff_ok(g: Graph, orientation: Orientation, grp: AbelianGroup,
                  values: Sequence[int]) -> bool:
    net = [[0] * len(grp.factors) for _ in range(g.n_vertices)]
    for (tail, head), x in zip(orientation, values):
        for j, d in enumerate(grp.digits(x)):
            net[head][j] += d
            net[tail][j] -= d
    return all(d % q == 0 for row in net for d, q in zip(row, grp.factors))


def is_coupled_flow(g: Graph, orientation: Orientation | None, fa: FlowAssignment) -> bool:
    """Coupling conditions on every directed edge; each flow must obey Kirchhoff's law."""
    orientation = default_orientation(g) if orientation is None else \
        check_orientation(g, orientation)
    k = len(fa.values)
    if k < 1:
        raise ContractViolation("need at least one flow function")
    for i, (f, grp) in enumerate(zip(fa.values, fa.groups)):
        if len(f) != g.n_edges:
            raise ContractViolation("each flow must assign a value to every edge")
        if not _kirchhoff_ok(g, orientation, grp, f):
            raise ContractViolation(f"flow {i + 1} violates Kirchhoff's law")
    for e in range(g.n_edges):
        zero = [np.bool_(f[e] == 0) for f in fa.values]
        if not flow_condition(zero, k):
            return False
    return True


def _cycle_basis(g: Graph, orientation: Orientation) -> np.ndarray:
    """Signed fundamental cycles of a spanning forest, one row per co-tree edge."""
    parent = list(range(g.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree, cotree = [], []
    for e, (u, v) in enumerate(g.edges):
        ru, rv = find(u), find(v)
        if ru == rv:
            cotree.append(e)
        else:
            parent[ru] = rv
            tree.append(e)
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.n_vertices)}
    for e in tree:
        a, b = orientation[e]
        adj[a].append((b, e))
        adj[b].append((a, e))

    def tree_path(src: int, dst: int) -> list[tuple[int, int]]:
        """Edges with traversal signs (+1 along orientation) on the tree path src -> dst."""
        prev = {src: None}
        stack = [src]
        while stack:
            x = stack.pop()
            if x == dst:
                break
            for y, e in adj[x]:
                if y not in prev:
                    prev[y] = (x, e)
                    stack.append(y)
        out = []
        x = dst
        while prev[x] is not None:
            y, e = prev[x]
            out.append((e, 1 if orientation[e] == (y, x) else -1))
            x = y
        return out

    basis = np.zeros((len(cotree), g.n_edges), dtype=np.int64)
    for row, e in enumerate(cotree):
        tail, head = orientation[e]
        basis[row, e] = 1
        # close the cycle by walking back from head to tail inside the tree
        for f, sign in tree_path(head, tail):
            basis[row, f] += sign
    return basis


def _zero_patterns(values: np.ndarray, grp: AbelianGroup) -> Counter:
    """Histogram of zero-edge bitsets; ``values`` holds per-factor components."""
    n_edges = values.shape[-1]
    zero = np.ones(values.shape[1:], dtype=bool)
    for j, q in enumerate(grp.factors):
        zero &= values[j] % q == 0
    pat = np.zeros(zero.shape[0], dtype=np.int64)
    for e in range(n_edges):
        pat |= zero[:, e].astype(np.int64) << e
    u, c = np.unique(pat, return_counts=True)
    return Counter(dict(zip(u.tolist(), c.tolist())))


def _forest_patterns(g: Graph, orientation: Orientation, grp: AbelianGroup) -> Counter:
    basis = _cycle_basis(g, orientation)
    codes = _function_table(grp.order, len(basis))
    comps = [coeffs @ basis for coeffs in grp.digits(codes)]
    return _zero_patterns(np.stack(comps), grp)


def _naive_patterns(g: Graph, orientation: Orientation, grp: AbelianGroup) -> Counter:
    codes = _function_table(grp.order, g.n_edges)
    comps = np.stack(grp.digits(codes))
    inc = np.zeros((g.n_vertices, g.n_edges), dtype=np.int64)
    for e, (tail, head) in enumerate(orientation):
        inc[head, e] += 1
        inc[tail, e] -= 1
    keep = np.ones(len(codes), dtype=bool)
    for j, q in enumerate(grp.factors):
        keep &= np.all((comps[j] @ inc.T) % q == 0, axis=1)
    return _zero_patterns(comps[:, keep], grp)


def count_coupled_flows(g: Graph, groups, orientation: Orientation | None = None,
                        method: str = "forest", max_work: int | None = None) -> int:
    """Number of coupled k-multicommodity flows with values in ``groups``.

    ``method="forest"`` parameterizes each flow by its values on the edges
    outside a spanning forest; ``method="naive"`` filters all edge functions
    by Kirchhoff's law.
    """
    groups = _as_groups(groups)
    k = len(groups)
    if k < 1:
        raise ContractViolation("need at least one group")
    orientation = default_orientation(g) if orientation is None else \
        check_orientation(g, orientation)
    if method == "forest":
        free = g.n_edges - g.n_vertices + components(g)
        sizes = [grp.order ** free for grp in groups]
        patterns = _forest_patterns
    elif method == "naive":
        sizes = [grp.order ** g.n_edges for grp in groups]
        patterns = _naive_patterns
    else:
        raise ContractViolation(f"unknown method {method!r}")
    work = 1
    for s in sizes:
        work *= s
    _check_work(work, max_work)
    hists = [patterns(g, orientation, grp) for grp in groups]
    return _combine_patterns(hists, g.n_edges, flow_condition, k)


FLOW_ROUTES = ("chain", "tutte", "both")


def coupled_flow_poly(g: Graph, k: int, route: str = "both", *, jobs: int = 1,
                      max_visits: int | None = None) -> MultiPoly:
    """Coupled k-multicommodity flow polynomial in ``t1..tk`` (variables not reversed).

    ``"chain"`` sums ``prod (-1)**|B_i| t_i**(|B_i| - rk(B_i))`` over edge
    chains with sign ``(-1)**(k|E|)``; ``"tutte"`` evaluates the chain Tutte
    polynomial at ``x_i = 0, y_i = 1 - t_i`` with sign ``(-1)**(k(|E| + rk))``.
    ``"both"`` computes the two and raises if they differ.
    """
    if route not in FLOW_ROUTES:
        raise ContractViolation(f"unknown route {route!r}; expected one of {FLOW_ROUTES}")
    m = make_graphic(g)
    tv = t_vars(k)
    n_e, r = g.n_edges, m.rk
    out = {}
    if route in ("chain", "both"):
        nullity = popcounts(n_e) - m.rank_table()
        hist = histogram_chains(n_e, k, [nullity] * k, [n_e - r + 1] * k, signed=True,
                                jobs=jobs, max_visits=max_visits)
        out["chain"] = MultiPoly(tv, hist).scale((-1) ** (k * n_e))
    if route in ("tutte", "both"):
        tut = chain_tutte(m, k, jobs=jobs, max_visits=max_visits)
        one = MultiPoly.const(1, tv)
        bind = {}
        for i in range(1, k + 1):
            bind[f"x{i}"] = 0
            bind[f"y{i}"] = one - MultiPoly.var(f"t{i}", tv)
        out["tutte"] = tut.substitute(bind, vars=tv).scale((-1) ** (k * (n_e + r)))
    if route == "both":
        if out["chain"] != out["tutte"]:
            raise ChainPolyError(
                f"flow routes disagree: chain={out['chain']} tutte={out['tutte']}")
        return out["chain"]
    return out[route]
