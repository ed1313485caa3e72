"""Exact sparse multivariate polynomials with rational coefficients.

A :class:`MultiPoly` is an immutable map from exponent vectors to nonzero
coefficients over an ordered tuple of variable names.  Coefficients are
Python ``int`` whenever integral and :class:`fractions.Fraction` otherwise, so
all arithmetic is exact.  Terms are printed in graded lexicographic order with
respect to the variable order, which makes the text and JSON forms canonical.
"""

from __future__ import annotations

import re
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import ContractViolation, LaurentError, SchemaError

Coef = Union[int, Fraction]
Exps = tuple[int, ...]

__all__ = [
    "MultiPoly",
    "coefficients_by_total_degree",
    "is_log_concave",
    "is_unimodal",
    "parse_poly",
]


def _norm(c) -> Coef:
    if isinstance(c, bool):
        raise TypeError("bool is not a polynomial coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, str):
        return _norm(Fraction(c))
    if isinstance(c, float):
        raise TypeError("float coefficients are not exact; pass a Fraction or str")
    return _norm(Fraction(c))


def _term_key(exps: Exps):
    return (-sum(exps), tuple(-e for e in exps))


def _merge_vars(*var_lists: Sequence[str]) -> tuple[str, ...]:
    out: list[str] = []
    seen = set()
    for vs in var_lists:
        for v in vs:
            if v not in seen:
                seen.add(v)
                out.append(v)
    return tuple(out)


class MultiPoly:
    """Immutable polynomial over the variables ``vars`` (order matters for equality)."""

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exps, object] | None = None):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ContractViolation(f"duplicate variable names in {vars!r}")
        clean: dict[Exps, Coef] = {}
        if terms:
            n = len(vars)
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != n:
                    raise ContractViolation(
                        f"exponent vector {exps} does not match {n} variables")
                if any(e < 0 for e in exps):
                    raise ContractViolation(f"negative exponent in {exps}")
                c = _norm(c)
                if c:
                    clean[exps] = clean.get(exps, 0) + c
                    if not clean[exps]:
                        del clean[exps]
        self._vars = vars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict[Exps, Coef]) -> "MultiPoly":
        # trusted constructor: terms already normalized and zero-free
        p = object.__new__(cls)
        p._vars = vars
        p._terms = terms
        p._hash = None
        return p

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str] = ()) -> "MultiPoly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def const(cls, c, vars: Sequence[str] = ()) -> "MultiPoly":
        vars = tuple(vars)
        c = _norm(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, name: str, vars: Sequence[str] | None = None) -> "MultiPoly":
        vars = (name,) if vars is None else tuple(vars)
        if name not in vars:
            raise ContractViolation(f"{name!r} not among {vars!r}")
        exps = tuple(int(v == name) for v in vars)
        return cls._raw(vars, {exps: 1})

    @classmethod
    def monomial(cls, vars: Sequence[str], exps: Sequence[int], c=1) -> "MultiPoly":
        return cls(vars, {tuple(exps): c})

    # -- basic accessors --------------------------------------------------------

    @property
    def vars(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> Mapping[Exps, Coef]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self) -> Iterator[tuple[Exps, Coef]]:
        """Yield ``(exponents, coefficient)`` in canonical (graded lex) order."""
        for exps in sorted(self._terms, key=_term_key):
            yield exps, self._terms[exps]

    def coefficient(self, exps: Sequence[int]) -> Coef:
        return self._terms.get(tuple(exps), 0)

    def degree(self, v: str) -> int:
        """Degree in ``v``; ``-1`` for the zero polynomial."""
        i = self._index(v)
        return max((e[i] for e in self._terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    def _index(self, v: str) -> int:
        try:
            return self._vars.index(v)
        except ValueError:
            raise ContractViolation(f"variable {v!r} not in {self._vars!r}") from None

    # -- variable sets ----------------------------------------------------------

    def with_vars(self, vars: Sequence[str]) -> "MultiPoly":
        """Re-express over ``vars``; variables that occur in a term must be kept."""
        vars = tuple(vars)
        if vars == self._vars:
            return self
        if len(set(vars)) != len(vars):
            raise ContractViolation(f"duplicate variable names in {vars!r}")
        pos = {v: i for i, v in enumerate(vars)}
        for i, v in enumerate(self._vars):
            if v not in pos and any(e[i] for e in self._terms):
                raise ContractViolation(f"variable {v!r} occurs in the polynomial")
        src = [(pos[v], i) for i, v in enumerate(self._vars) if v in pos]
        n = len(vars)
        out = {}
        for exps, c in self._terms.items():
            new = [0] * n
            for j, i in src:
                new[j] = exps[i]
            out[tuple(new)] = c
        return MultiPoly._raw(vars, out)

    def _aligned(self, other) -> tuple["MultiPoly", "MultiPoly"]:
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other, self._vars)
        if other._vars == self._vars:
            return self, other
        vs = _merge_vars(self._vars, other._vars)
        return self.with_vars(vs), other.with_vars(vs)

    # -- ring operations --------------------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        a, b = self._aligned(other)
        out = dict(a._terms)
        for exps, c in b._terms.items():
            s = out.get(exps, 0) + c
            if s:
                out[exps] = _norm(s)
            else:
                out.pop(exps, None)
        return MultiPoly._raw(a._vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = _norm(c)
        if not c:
            return MultiPoly.zero(self._vars)
        return MultiPoly._raw(self._vars, {e: _norm(v * c) for e, v in self._terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._aligned(other)
        out: dict[Exps, Coef] = {}
        bt = list(b._terms.items())
        for ea, ca in a._terms.items():
            for eb, cb in bt:
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return MultiPoly._raw(a._vars, {e: _norm(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise ContractViolation("polynomial powers need a non-negative integer exponent")
        result = MultiPoly.const(1, self._vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self._vars == other._vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == MultiPoly.const(other, self._vars)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    # -- substitution / evaluation ---------------------------------------------

    def substitute(self, bindings: Mapping[str, object],
                   vars: Sequence[str] | None = None) -> "MultiPoly":
        """Simultaneously replace variables by polynomials (or constants).

        Unless ``vars`` is given, the result keeps this polynomial's unbound
        variables plus every variable appearing in a binding, in first-seen
        order; bound variables that no binding mentions are dropped.
        """
        for v in bindings:
            self._index(v)
        bound = {v: (b if isinstance(b, MultiPoly) else MultiPoly.const(b))
                 for v, b in bindings.items()}
        if vars is None:
            binding_vars = _merge_vars(*(b.vars for b in bound.values()))
            mentioned = set(binding_vars)
            cand = _merge_vars(self._vars, binding_vars)
            vars = tuple(v for v in cand if v not in bound or v in mentioned)
        else:
            vars = tuple(vars)
        pos = {v: i for i, v in enumerate(vars)}
        for i, v in enumerate(self._vars):
            if v not in bound and v not in pos and any(e[i] for e in self._terms):
                raise ContractViolation(f"unbound variable {v!r} missing from result vars")
        bound = {v: b.with_vars(vars) for v, b in bound.items()}
        slots = [(i, bound.get(v), pos.get(v)) for i, v in enumerate(self._vars)]
        powers: dict[tuple[str, int], dict[Exps, Coef]] = {}

        def power(v: str, e: int) -> dict[Exps, Coef]:
            key = (v, e)
            if key not in powers:
                powers[key] = (bound[v] ** e)._terms
            return powers[key]

        n = len(vars)
        out: dict[Exps, Coef] = {}
        for exps, c in self._terms.items():
            mono = [0] * n
            for i, b, j in slots:
                e = exps[i]
                if not e:
                    continue
                if b is None:
                    mono[j] += e
            acc = {tuple(mono): c}
            for i, b, _ in slots:
                e = exps[i]
                if b is None or not e:
                    continue
                factor = power(self._vars[i], e)
                nxt: dict[Exps, Coef] = {}
                for ea, ca in acc.items():
                    for eb, cb in factor.items():
                        k = tuple(x + y for x, y in zip(ea, eb))
                        nxt[k] = nxt.get(k, 0) + ca * cb
                acc = nxt
            for k, v in acc.items():
                out[k] = out.get(k, 0) + v
        return MultiPoly._raw(vars, {e: _norm(c) for e, c in out.items() if c})

    def evaluate(self, point: Mapping[str, object]) -> Coef:
        """Exact value at ``point``; every variable must be bound."""
        missing = [v for v in self._vars if v not in point]
        if missing:
            raise ContractViolation(f"unbound variables {missing!r}")
        vals = [_norm(point[v]) for v in self._vars]
        total: Coef = 0
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(vals, exps):
                if e:
                    term *= x ** e
            total += term
        return _norm(total)

    def grid_evaluate(self, axes: Sequence[Sequence]):
        """Exact values on the Cartesian grid ``axes[0] x axes[1] x ...`` (one axis per var).

        Returns an object ndarray of shape ``(len(axes[0]), ...)``.  The dense
        coefficient tensor is contracted with one Vandermonde matrix per axis,
        which is far cheaper than evaluating term by term at every point.
        """
        if len(axes) != len(self._vars):
            raise ContractViolation(f"expected {len(self._vars)} axes, got {len(axes)}")
        shape = tuple(max(self.degree(v), 0) + 1 for v in self._vars)
        dense = np.zeros(shape, dtype=object)
        dense[...] = 0
        for exps, c in self._terms.items():
            dense[exps] = c
        for axis, values in enumerate(axes):
            vals = [_norm(x) for x in values]
            vander = np.array([[x ** e for x in vals] for e in range(shape[axis])], dtype=object)
            # contract the leading axis; the new grid axis is appended last
            dense = np.tensordot(dense, vander, axes=([0], [0]))
        return dense

    def __call__(self, *args) -> Coef:
        if len(args) != len(self._vars):
            raise ContractViolation(f"expected {len(self._vars)} values, got {len(args)}")
        return self.evaluate(dict(zip(self._vars, args)))

    def reverse_in_var(self, v: str, d: int) -> "MultiPoly":
        """Return ``v**d * p(1/v)``: exponent ``e`` of ``v`` becomes ``d - e``."""
        i = self._index(v)
        if self.degree(v) > d:
            raise LaurentError(f"degree of {v!r} is {self.degree(v)} > {d}")
        out = {}
        for exps, c in self._terms.items():
            e = list(exps)
            e[i] = d - e[i]
            out[tuple(e)] = c
        return MultiPoly._raw(self._vars, out)

    def rename(self, mapping: Mapping[str, str]) -> "MultiPoly":
        vars = tuple(mapping.get(v, v) for v in self._vars)
        if len(set(vars)) != len(vars):
            raise ContractViolation(f"renaming collides: {vars!r}")
        return MultiPoly._raw(vars, dict(self._terms))

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for exps, c in self:
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self._vars, exps) if e)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"MultiPoly({list(self._vars)!r}, {self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "vars": list(self._vars),
            "terms": [{"exp": list(e), "coef": str(Fraction(c))} for e, c in self],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "MultiPoly":
        try:
            vars = obj["vars"]
            terms = {tuple(t["exp"]): Fraction(t["coef"]) for t in obj["terms"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError("$", f"bad polynomial JSON: {exc}") from None
        return cls(vars, terms)


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")


def parse_poly(text: str, vars: Sequence[str]) -> MultiPoly:
    """Parse the canonical text form produced by :meth:`MultiPoly.to_text`."""
    vars = tuple(vars)
    pos = {v: i for i, v in enumerate(vars)}
    text = text.strip()
    if text == "0":
        return MultiPoly.zero(vars)
    terms: dict[Exps, Coef] = {}
    at = 0
    while at < len(text):
        m = _TERM_RE.match(text, at)
        if not m or m.end() == at:
            raise SchemaError(f"char {at}", f"cannot parse polynomial text {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef: Coef = 1
        exps = [0] * len(vars)
        for factor in m.group(2).strip().split("*"):
            factor = factor.strip()
            fm = _FACTOR_RE.match(factor)
            if fm:
                name = fm.group(1)
                if name not in pos:
                    raise SchemaError(f"char {m.start(2)}", f"unknown variable {name!r}")
                exps[pos[name]] += int(fm.group(2) or 1)
            else:
                try:
                    coef *= _norm(Fraction(factor))
                except ValueError:
                    raise SchemaError(f"char {m.start(2)}", f"bad factor {factor!r}") from None
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + sign * coef
        at = m.end()
    return MultiPoly(vars, terms)


def coefficients_by_total_degree(p: MultiPoly) -> list[Coef]:
    """Coefficient sums grouped by total degree, from the top degree down to 0."""
    top = p.total_degree()
    sums = [0] * (top + 1)
    for exps, c in p.terms.items():
        sums[sum(exps)] += c
    return [_norm(c) for c in reversed(sums)]


def is_log_concave(seq: Iterable) -> bool:
    """``c[i]**2 >= c[i-1]*c[i+1]`` for every interior index, on absolute values."""
    c = [abs(x) for x in seq]
    return all(c[i] ** 2 >= c[i - 1] * c[i + 1] for i in range(1, len(c) - 1))


def is_unimodal(seq: Iterable) -> bool:
    """Absolute values weakly increase and then weakly decrease."""
    c = [abs(x) for x in seq]
    i = 1
    while i < len(c) and c[i] >= c[i - 1]:
        i += 1
    while i < len(c) and c[i] <= c[i - 1]:
        i += 1
    return i >= len(c)
