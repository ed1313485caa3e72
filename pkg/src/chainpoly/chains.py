"""Chain invariants of matroids.

Chain Whitney rank and chain Tutte polynomials, chain characteristic
polynomials (three independent routes), the Möbius polynomial, the chain
Möbius function, split chain Tutte polynomials and the identity verifiers
built on top of them.

Variable conventions: ``a1..ak, b1..bk`` for the Whitney polynomial,
``x1..xk, y1..yk`` for the Tutte polynomial, ``t1..tk`` for characteristic
polynomials and ``s, t`` for the Möbius polynomial.
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .enumeration import count_work, histogram_chains
from .errors import ContractViolation, HypothesisViolation, SizeCapExceeded
from .matroid import (
    FLATS_MAX_N,
    FlatLattice,
    Matroid,
    bits,
    contract,
    delete,
    direct_sum,
    dual,
    flats,
    is_coloop,
    is_loop,
    is_simple,
    make_uniform,
    popcounts,
    restrict,
)
from .polyring import MultiPoly
from .report import Report

__all__ = [
    "t_vars",
    "xy_vars",
    "ab_vars",
    "whitney_rank_poly",
    "chain_tutte",
    "chain_characteristic",
    "chain_char_from_mobius",
    "mobius_poly",
    "chain_mobius",
    "chain_mobius_table",
    "flat_chains",
    "split_chain_tutte",
    "verify_recursion",
    "verify_identities",
    "verify_sign_alternation",
    "check_duality",
    "check_product",
    "check_lemma21",
    "check_mobius_reversal",
]

ROUTES = ("definition", "tutte_eval", "mobius")
_TENSOR_CAP = 1 << 25
_GRID_CAP = 200_000


def t_vars(k: int) -> tuple[str, ...]:
    return tuple(f"t{i}" for i in range(1, k + 1))


def xy_vars(k: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, k + 1)) + tuple(f"y{i}" for i in range(1, k + 1))


def ab_vars(k: int) -> tuple[str, ...]:
    return tuple(f"a{i}" for i in range(1, k + 1)) + tuple(f"b{i}" for i in range(1, k + 1))


def _check_k(k: int) -> int:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ContractViolation(f"chain length k must be a positive integer, got {k!r}")
    return int(k)


def _whitney_codes(m: Matroid) -> tuple[np.ndarray, int, int]:
    """Per-subset code ``corank + (rk+1) * nullity`` and its radix."""
    t = m.rank_table()
    r = m.rk
    code = (r - t) + (r + 1) * (popcounts(m.n) - t)
    return code, (r + 1) * (m.n - r + 1), r + 1


def _whitney_from_hist(hist: dict, k: int, corank_radices: Sequence[int]) -> MultiPoly:
    terms = {}
    for key, c in hist.items():
        a = tuple(code % cr for code, cr in zip(key, corank_radices))
        b = tuple(code // cr for code, cr in zip(key, corank_radices))
        terms[a + b] = c
    return MultiPoly(ab_vars(k), terms)


def _shift_to_tutte(w: MultiPoly, k: int) -> MultiPoly:
    xy = xy_vars(k)
    one = MultiPoly.const(1, xy)
    bind = {}
    for i in range(1, k + 1):
        bind[f"a{i}"] = MultiPoly.var(f"x{i}", xy) - one
        bind[f"b{i}"] = MultiPoly.var(f"y{i}", xy) - one
    return w.substitute(bind, vars=xy)


def whitney_rank_poly(m: Matroid, k: int, *, jobs: int = 1,
                      max_visits: int | None = None) -> MultiPoly:
    """Sum over chains of ``prod a_i**(rk(M)-rk(S_i)) * b_i**(|S_i|-rk(S_i))``."""
    k = _check_k(k)
    code, radix, cr = _whitney_codes(m)
    hist = histogram_chains(m.n, k, [code] * k, [radix] * k, signed=False,
                            jobs=jobs, max_visits=max_visits)
    return _whitney_from_hist(hist, k, [cr] * k)


def chain_tutte(m: Matroid, k: int, *, jobs: int = 1,
                max_visits: int | None = None) -> MultiPoly:
    """Chain Tutte polynomial: the Whitney polynomial at ``a_i = x_i - 1``, ``b_i = y_i - 1``."""
    return _shift_to_tutte(whitney_rank_poly(m, k, jobs=jobs, max_visits=max_visits), k)


def chain_characteristic(m: Matroid, k: int, route: str = "definition", *, jobs: int = 1,
                         max_visits: int | None = None) -> MultiPoly:
    """k-th chain characteristic polynomial in ``t1..tk``.

    ``route`` selects the computation: ``"definition"`` sums signed coranks
    over all subset chains, ``"tutte_eval"`` evaluates the chain Tutte
    polynomial at ``x_i = 1 - t_i, y_i = 0`` with sign ``(-1)**(k*rk)``, and
    ``"mobius"`` expands over chains of flats weighted by the chain Möbius
    function.
    """
    k = _check_k(k)
    if route == "definition":
        r = m.rk
        corank = r - m.rank_table()
        hist = histogram_chains(m.n, k, [corank] * k, [r + 1] * k, signed=True,
                                jobs=jobs, max_visits=max_visits)
        return MultiPoly(t_vars(k), hist)
    if route == "tutte_eval":
        tv = t_vars(k)
        tut = chain_tutte(m, k, jobs=jobs, max_visits=max_visits)
        one = MultiPoly.const(1, tv)
        bind = {}
        for i in range(1, k + 1):
            bind[f"x{i}"] = one - MultiPoly.var(f"t{i}", tv)
            bind[f"y{i}"] = 0
        return tut.substitute(bind, vars=tv).scale((-1) ** (k * m.rk))
    if route == "mobius":
        return chain_char_from_mobius(m, k)
    raise ContractViolation(f"unknown route {route!r}; expected one of {ROUTES}")


# -- flats and Möbius functions ---------------------------------------------------

def flat_chains(lattice: FlatLattice, k: int) -> Iterator[tuple[int, ...]]:
    """Chains of flat indices ``i_1 <= ... <= i_k`` by depth-first search."""
    k = _check_k(k)
    leq = lattice.leq
    above = [np.flatnonzero(leq[i]).tolist() for i in range(len(lattice))]

    def extend(prefix: list[int]):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for j in above[prefix[-1]]:
            prefix.append(j)
            yield from extend(prefix)
            prefix.pop()

    for i in range(len(lattice)):
        yield from extend([i])


def mobius_poly(m: Matroid, max_n: int = FLATS_MAX_N) -> MultiPoly:
    """``sum_{X <= Y} mu(X, Y) s**rk(X) t**(rk(M) - rk(Y))`` over the lattice of flats."""
    lat = flats(m, max_n)
    mu = lat.mobius
    r = m.rk
    terms = {}
    for i, j in zip(*np.nonzero(mu)):
        key = (lat.ranks[i], r - lat.ranks[j])
        terms[key] = terms.get(key, 0) + int(mu[i, j])
    return MultiPoly(("s", "t"), terms)


def _mobius_tensor(m: Matroid, lat: FlatLattice, k: int) -> np.ndarray:
    """``mu^k`` on all of ``L(M)**k`` (zero off chains) by product Möbius inversion.

    For a tuple ``Y`` of flats, the signed count of subset chains with
    ``A_i <= Y_i`` factorizes over elements: an element contained in ``Y_j``
    for exactly the last ``c`` indices ``j`` contributes ``1`` if ``c`` is
    even and ``0`` otherwise.  Inverting along every coordinate with the
    classic Möbius matrix isolates the chains whose joins equal each ``Y_i``.
    """
    size = len(lat)
    if size ** k > _TENSOR_CAP:
        raise SizeCapExceeded(f"{size}**{k} flat tuples exceed the cap {_TENSOR_CAP}")
    fl = np.array(lat.flats, dtype=np.int64)
    z = np.ones((size,) * k, dtype=np.int64)
    for a in range(m.n):
        member = ((fl >> a) & 1).astype(bool)
        suffix = np.ones((1,) * k, dtype=bool)
        count = np.zeros((1,) * k, dtype=np.int64)
        for j in reversed(range(k)):
            shape = [1] * k
            shape[j] = size
            suffix = suffix & member.reshape(shape)
            count = count + suffix
        z = z * (count % 2 == 0)
    mu = lat.mobius
    for axis in range(k):
        z = np.moveaxis(np.tensordot(z, mu, axes=([axis], [0])), -1, axis)
    return z


def _mobius_by_enumeration(m: Matroid, lat: FlatLattice, k: int, jobs: int,
                           max_visits: int | None) -> dict[tuple[int, ...], int]:
    ci = lat.closure_index
    return histogram_chains(m.n, k, [ci] * k, [len(lat)] * k, signed=True,
                            jobs=jobs, max_visits=max_visits)


def chain_mobius_table(m: Matroid, k: int, method: str = "inversion", *, jobs: int = 1,
                       max_visits: int | None = None) -> dict[tuple[int, ...], int]:
    """``mu^k`` on every chain of flats, keyed by the tuple of flat bitsets.

    ``method="enumeration"`` buckets all subset chains by their joins;
    ``method="inversion"`` uses product Möbius inversion and avoids the
    ``(k+1)**n`` enumeration.
    """
    k = _check_k(k)
    lat = flats(m)
    if method == "inversion":
        z = _mobius_tensor(m, lat, k)
        values = lambda idx: int(z[idx])  # noqa: E731
    elif method == "enumeration":
        hist = _mobius_by_enumeration(m, lat, k, jobs, max_visits)
        values = lambda idx: hist.get(idx, 0)  # noqa: E731
    else:
        raise ContractViolation(f"unknown method {method!r}")
    return {tuple(lat.flats[i] for i in ch): values(ch) for ch in flat_chains(lat, k)}


def chain_mobius(m: Matroid, fc: Sequence[int], k: int | None = None, *,
                 max_visits: int | None = None) -> int:
    """``mu^k(X_1, ..., X_k)`` from its definition as a signed count of subset chains."""
    fc = tuple(int(x) for x in fc)
    if k is not None and _check_k(k) != len(fc):
        raise ContractViolation(f"flat chain has length {len(fc)}, expected {k}")
    if not fc:
        raise ContractViolation("empty flat chain")
    lat = flats(m)
    if not lat.is_chain(fc):
        raise ContractViolation(f"{[bits(x) for x in fc]} is not a chain of flats")
    # subset chains with these joins live inside the top flat
    top = fc[-1]
    sub = restrict(m, top)
    lifted = np.full(1 << sub.n, 0, dtype=np.int64)
    idx = np.arange(1 << sub.n, dtype=np.int64)
    for i, a in enumerate(sub.kept):
        lifted |= ((idx >> i) & 1) << a
    ci = lat.closure_index[lifted]
    codes = [(ci == lat.index[x]).astype(np.int64) for x in fc]
    hist = histogram_chains(sub.n, len(fc), codes, [2] * len(fc), signed=True,
                            max_visits=max_visits)
    return hist.get((1,) * len(fc), 0)


def chain_char_from_mobius(m: Matroid, k: int) -> MultiPoly:
    """``sum over flat chains of mu^k(X) * prod t_i**(rk(M) - rk(X_i))``."""
    k = _check_k(k)
    lat = flats(m)
    z = _mobius_tensor(m, lat, k)
    r = m.rk
    terms: dict[tuple[int, ...], int] = {}
    for idx in zip(*np.nonzero(z)):
        key = tuple(r - lat.ranks[i] for i in idx)
        terms[key] = terms.get(key, 0) + int(z[idx])
    return MultiPoly(t_vars(k), terms)


# -- split chain Tutte polynomials and the recursion ---------------------------

def _check_split_element(m: Matroid, a: int) -> None:
    if not isinstance(a, (int, np.integer)) or not 0 <= a < m.n:
        raise ContractViolation(f"element {a!r} not in ground set of size {m.n}")
    if is_loop(m, a):
        raise HypothesisViolation(f"element {a} is a loop")
    if is_coloop(m, a):
        raise HypothesisViolation(f"element {a} is a coloop")


def split_chain_tutte(m: Matroid, a: int, k: int, j: int, *, jobs: int = 1,
                      max_visits: int | None = None) -> MultiPoly:
    """Split chain Tutte polynomial for the element ``a`` and split index ``j``.

    Chains live in the ground set minus ``a``; levels ``1..j`` are weighted by
    the deletion and levels ``j+1..k`` by the contraction.  ``j = 0`` and
    ``j = k`` are the chain Tutte polynomials of the contraction and the
    deletion.
    """
    k = _check_k(k)
    _check_split_element(m, a)
    if not isinstance(j, (int, np.integer)) or not 0 <= j <= k:
        raise ContractViolation(f"split index j={j!r} outside 0..{k}")
    if j == 0:
        return chain_tutte(contract(m, a), k, jobs=jobs, max_visits=max_visits)
    if j == k:
        return chain_tutte(delete(m, a), k, jobs=jobs, max_visits=max_visits)
    md, mc = delete(m, a), contract(m, a)
    cd, rd, crd = _whitney_codes(md)
    cc, rc, crc = _whitney_codes(mc)
    hist = histogram_chains(md.n, k, [cd] * j + [cc] * (k - j), [rd] * j + [rc] * (k - j),
                            signed=False, jobs=jobs, max_visits=max_visits)
    w = _whitney_from_hist(hist, k, [crd] * j + [crc] * (k - j))
    return _shift_to_tutte(w, k)


def verify_recursion(m: Matroid, a: int, k: int, *, jobs: int = 1,
                     max_visits: int | None = None) -> Report:
    """Check that the chain Tutte polynomial equals the sum of its split polynomials at ``a``."""
    k = _check_k(k)
    _check_split_element(m, a)
    report = Report()
    with count_work() as work:
        lhs = chain_tutte(m, k, jobs=jobs, max_visits=max_visits)
        rhs = MultiPoly.zero(xy_vars(k))
        for j in range(k + 1):
            rhs = rhs + split_chain_tutte(m, a, k, j, jobs=jobs, max_visits=max_visits)
    report.equal(f"recursion(a={a}, k={k})", lhs, rhs)
    report.visits = work.visits
    return report.finish()


# -- identities ----------------------------------------------------------------

def check_duality(m: Matroid, k: int, **kw) -> tuple[bool, MultiPoly, MultiPoly]:
    """Dual chain Tutte polynomial versus the reversed variable swap."""
    xy = xy_vars(k)
    lhs = chain_tutte(dual(m), k, **kw)
    t = chain_tutte(m, k, **kw)
    swap = {}
    for i in range(1, k + 1):
        swap[f"x{i}"] = MultiPoly.var(f"y{k + 1 - i}", xy)
        swap[f"y{i}"] = MultiPoly.var(f"x{k + 1 - i}", xy)
    rhs = t.substitute(swap, vars=xy)
    return lhs == rhs, lhs, rhs


def check_product(m: Matroid, other: Matroid, k: int, invariant: str = "tutte",
                  **kw) -> tuple[bool, MultiPoly, MultiPoly]:
    """Multiplicativity of ``chain_tutte`` or ``chain_characteristic`` over direct sums."""
    f = chain_tutte if invariant == "tutte" else chain_characteristic
    lhs = f(direct_sum(m, other), k, **kw)
    rhs = f(m, k, **kw) * f(other, k, **kw)
    return lhs == rhs, lhs, rhs


def check_lemma21(m: Matroid, k: int, **kw) -> tuple[bool, str]:
    """Grid certificate for ``T^{k+1}(2, 2x1-1, x2..; 2, (y1+1)/2, y2..) = 2**rk * T^k``.

    Both sides are polynomials in ``x1..xk, y1..yk`` whose degree in each
    variable is bounded by ``D_v``; agreement on a grid of ``D_v + 1`` distinct
    values per variable therefore proves the identity.
    """
    big = chain_tutte(m, k + 1, **kw)
    small = chain_tutte(m, k, **kw)
    names = xy_vars(k)
    bounds = []
    for v in names:
        axis, i = v[0], int(v[1:])
        lifted = f"{axis}{i + 1}"
        bounds.append(max(small.degree(v), big.degree(lifted), 0))
    npoints = 1
    for d in bounds:
        npoints *= d + 1
    if npoints > _GRID_CAP:
        raise SizeCapExceeded(f"certification grid of {npoints} points exceeds {_GRID_CAP}")
    # odd values keep (y1 + 1)/2 integral
    axes = [list(range(1, 2 * d + 2, 2)) if v == "y1" else list(range(d + 1))
            for v, d in zip(names, bounds)]
    # fix x1 = y1 = 2 and shift x_{i+1}, y_{i+1} down to x_i, y_i
    lifted_vars = tuple(f"{v[0]}{int(v[1:]) + 1}" for v in names)
    lhs_poly = big.substitute({"x1": 2, "y1": 2}, vars=lifted_vars)
    lhs_axes = []
    for v, values in zip(names, axes):
        if v == "x1":
            values = [2 * x - 1 for x in values]
        elif v == "y1":
            values = [(y + 1) // 2 for y in values]
        lhs_axes.append(values)
    lhs = lhs_poly.grid_evaluate(lhs_axes)
    rhs = small.grid_evaluate(axes) * (2 ** m.rk)
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        idx = tuple(bad[0])
        point = {v: axes[i][j] for i, (v, j) in enumerate(zip(names, idx))}
        return False, f"mismatch at {point}: {lhs[idx]} != {rhs[idx]}"
    return True, f"{npoints} grid points"


def check_mobius_reversal(m: Matroid, **kw) -> tuple[bool, MultiPoly, MultiPoly]:
    """Möbius polynomial versus ``s**rk * chi^2(1/s, t)``."""
    lhs = mobius_poly(m)
    chi2 = chain_characteristic(m, 2, **kw)
    rhs = chi2.reverse_in_var("t1", m.rk).rename({"t1": "s", "t2": "t"})
    return lhs == rhs, lhs, rhs


IDENTITY_CHECKS = ("duality", "product", "lemma21", "mobius")


def verify_identities(m: Matroid, k: int, other: Matroid | None = None,
                      checks: Sequence[str] = IDENTITY_CHECKS, *, jobs: int = 1,
                      max_visits: int | None = None) -> Report:
    """Run the duality, direct-sum, grid-certified lemma and Möbius reversal checks.

    ``other`` is the second summand for the product checks (default ``U(1,2)``).
    """
    k = _check_k(k)
    kw = {"jobs": jobs, "max_visits": max_visits}
    other = make_uniform(1, 2) if other is None else other
    report = Report()
    unknown = set(checks) - set(IDENTITY_CHECKS)
    if unknown:
        raise ContractViolation(f"unknown identity checks {sorted(unknown)}")
    with count_work() as work:
        if "duality" in checks:
            ok, lhs, rhs = check_duality(m, k, **kw)
            report.add(f"duality(k={k})", ok, lhs=lhs, rhs=rhs)
        if "product" in checks:
            for inv in ("tutte", "characteristic"):
                ok, lhs, rhs = check_product(m, other, k, inv, **kw)
                report.add(f"product-{inv}(k={k})", ok, lhs=lhs, rhs=rhs)
        if "lemma21" in checks:
            ok, detail = check_lemma21(m, k, **kw)
            report.add(f"lemma21(k={k})", ok, detail)
        if "mobius" in checks:
            ok, lhs, rhs = check_mobius_reversal(m, **kw)
            report.add("mobius-reversal", ok, lhs=lhs, rhs=rhs)
    report.visits = work.visits
    return report.finish()


def verify_routes(m: Matroid, k: int, *, jobs: int = 1,
                  max_visits: int | None = None) -> Report:
    """All three chain characteristic routes agree."""
    k = _check_k(k)
    report = Report()
    with count_work() as work:
        polys = {r: chain_characteristic(m, k, r, jobs=jobs, max_visits=max_visits)
                 for r in ROUTES}
    base = polys["definition"]
    for r in ROUTES[1:]:
        report.equal(f"routes definition=={r}(k={k})", base, polys[r])
    report.visits = work.visits
    return report.finish()


def verify_sign_alternation(m: Matroid, k: int, *, jobs: int = 1,
                            max_visits: int | None = None) -> Report:
    """Sign pattern of ``chi^k`` coefficients and of ``mu^k`` on a simple matroid."""
    k = _check_k(k)
    if not is_simple(m):
        raise HypothesisViolation("sign alternation needs a simple matroid")
    report = Report()
    r = m.rk
    with count_work() as work:
        chi = chain_characteristic(m, k, jobs=jobs, max_visits=max_visits)
    bad = [e for e, c in chi if (c > 0) != ((k * r - sum(e)) % 2 == 0)]
    report.add(f"chi-alternation(k={k})", not bad,
               f"{len(bad)} coefficients with the wrong sign" if bad else "")
    table = chain_mobius_table(m, k)
    wrong = []
    for chain, value in table.items():
        expected = (-1) ** sum(m.rank(x) for x in chain)
        if value == 0 or (value > 0) != (expected > 0):
            wrong.append((tuple(bits(x) for x in chain), value))
    report.add(f"mu-sign(k={k})", not wrong,
               f"{len(table)} flat chains" if not wrong else f"first failure {wrong[0]}")
    report.visits = work.visits
    return report.finish()
