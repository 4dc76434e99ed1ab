"""Operator algebras.

:class:`WeylOperator` is a polynomial differential operator in
t, x1..xn and their derivations, stored in normal order (all variables
to the left of all derivations).

:class:`OreOperator` is an operator in one derivation with coefficients
in Q(t, x1..xn). The derivation is d/dt unless ``v`` says otherwise.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

import flint

from .errors import DivisionByZero, UnsupportedOperation, VariableMismatch
from .field import (
    RationalFunction,
    Scalar,
    poly_ring,
    rf_is_semisplit,
    rf_to_str,
    to_fmpq,
)
from .parsing import generator_name, name_index, parse_with

Key = tuple[int, ...]


def _falling(c: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= c - i
    return out


@lru_cache(maxsize=4096)
def _commute_table(b: int, c: int) -> tuple[tuple[int, int], ...]:
    """d^b x^c = sum over k of coeff * x^(c-k) d^(b-k); returns (k, coeff)."""
    return tuple((k, comb(b, k) * _falling(c, k)) for k in range(min(b, c) + 1))


@lru_cache(maxsize=4096)
def _left_table(a: int, b: int) -> tuple[tuple[int, int], ...]:
    """x^a d^b = sum over k of coeff * d^(b-k) x^(a-k); returns (k, coeff)."""
    return tuple(((k, (-1) ** k * comb(a, k) * _falling(b, k)) for k in range(min(a, b) + 1)))


class WeylOperator:
    """Sparse element of the Weyl algebra over Q in variables t, x1..xn.

    A key has length 2(n+1): exponents of t, x1..xn followed by the
    exponents of Dt, Dx1..Dxn. The term with key (a, b) is x^a D^b.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Key, flint.fmpq] | None = None) -> None:
        self.n = n
        self.terms: dict[Key, flint.fmpq] = {}
        if terms:
            for k, c in terms.items():
                if c != 0:
                    self.terms[k] = to_fmpq(c)

    # constructors
    @classmethod
    def zero(cls, n: int) -> "WeylOperator":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "WeylOperator":
        return cls(n, {(0,) * (2 * n + 2): flint.fmpq(1)})

    @classmethod
    def scalar(cls, n: int, c: Scalar) -> "WeylOperator":
        return cls(n, {(0,) * (2 * n + 2): to_fmpq(c)})

    @classmethod
    def monomial(cls, n: int, var_exps: Sequence[int], der_exps: Sequence[int], c: Scalar = 1) -> "WeylOperator":
        return cls(n, {tuple(var_exps) + tuple(der_exps): to_fmpq(c)})

    @classmethod
    def generator(cls, n: int, name: str, power: int = 1) -> "WeylOperator":
        kind, v = name_index(name)
        e = [0] * (2 * n + 2)
        e[v if kind == "var" else n + 1 + v] = power
        return cls(n, {tuple(e): flint.fmpq(1)})

    @classmethod
    def from_poly(cls, p: flint.fmpq_mpoly) -> "WeylOperator":
        n = p.context().nvars() - 1
        zeros = (0,) * (n + 1)
        return cls(n, {tuple(e) + zeros: c for e, c in p.terms()})

    @classmethod
    def parse(cls, text: str, n: int) -> "WeylOperator":
        return parse_with(text, _WeylAlgebra(n))

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def copy(self) -> "WeylOperator":
        out = WeylOperator(self.n)
        out.terms = dict(self.terms)
        return out

    def var_exps(self, key: Key) -> Key:
        return key[: self.n + 1]

    def der_exps(self, key: Key) -> Key:
        return key[self.n + 1 :]

    def generators(self) -> set[str]:
        used: set[str] = set()
        n1 = self.n + 1
        for k in self.terms:
            for i, e in enumerate(k):
                if e:
                    used.add(generator_name("var", i) if i < n1 else generator_name("der", i - n1))
        return used

    def lies_in(self, allowed: Iterable[str]) -> bool:
        return self.generators() <= set(allowed)

    def total_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        kind, v = name_index(name)
        i = v if kind == "var" else self.n + 1 + v
        return max((k[i] for k in self.terms), default=-1)

    def min_degree_in(self, name: str) -> int:
        kind, v = name_index(name)
        i = v if kind == "var" else self.n + 1 + v
        return min((k[i] for k in self.terms), default=-1)

    # arithmetic
    def _check(self, other: "WeylOperator") -> None:
        if other.n != self.n:
            raise VariableMismatch("Weyl operators over different variable sets")

    def __add__(self, other: "WeylOperator") -> "WeylOperator":
        if not isinstance(other, WeylOperator):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        res = WeylOperator(self.n)
        res.terms = out
        return res

    def __neg__(self) -> "WeylOperator":
        res = WeylOperator(self.n)
        res.terms = {k: -c for k, c in self.terms.items()}
        return res

    def __sub__(self, other: "WeylOperator") -> "WeylOperator":
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Scalar) -> "WeylOperator":
        c = to_fmpq(c)
        if c == 0:
            return WeylOperator(self.n)
        res = WeylOperator(self.n)
        res.terms = {k: v * c for k, v in self.terms.items()}
        return res

    def __mul__(self, other: object) -> "WeylOperator":
        if isinstance(other, WeylOperator):
            return weyl_mul(self, other)
        if isinstance(other, (int, flint.fmpq, flint.fmpz)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: object) -> "WeylOperator":
        if isinstance(other, (int, flint.fmpq, flint.fmpz)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "WeylOperator":
        out = WeylOperator.one(self.n)
        for _ in range(k):
            out = weyl_mul(out, self)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(str(self))

    def sorted_terms(self) -> list[tuple[Key, flint.fmpq]]:
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for key, c in self.sorted_terms():
            mono = _monomial_str(self.n, key)
            if not mono:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{c}*{mono}")
        return _join_signed(pieces)

    def __repr__(self) -> str:
        return f"WeylOperator({self})"

    # structural splits used by the telescoping recursion
    def collect_variable(self, v: int) -> dict[int, "WeylOperator"]:
        """self = sum_j x_v^j * C_j, with x_v absent from every C_j."""
        out: dict[int, dict[Key, flint.fmpq]] = {}
        for k, c in self.terms.items():
            j = k[v]
            kk = list(k)
            kk[v] = 0
            out.setdefault(j, {})[tuple(kk)] = c
        return {j: _from_terms(self.n, t) for j, t in out.items()}

    def collect_derivation(self, v: int) -> dict[int, "WeylOperator"]:
        """self = sum_j C_j * D_v^j, with D_v absent from every C_j."""
        i = self.n + 1 + v
        out: dict[int, dict[Key, flint.fmpq]] = {}
        for k, c in self.terms.items():
            j = k[i]
            kk = list(k)
            kk[i] = 0
            out.setdefault(j, {})[tuple(kk)] = c
        return {j: _from_terms(self.n, t) for j, t in out.items()}

    def split_right_derivation(self, v: int) -> tuple["WeylOperator", "WeylOperator"]:
        """Return (A0, A1) with self = A0 + A1 * D_v and A0 free of D_v."""
        i = self.n + 1 + v
        a0: dict[Key, flint.fmpq] = {}
        a1: dict[Key, flint.fmpq] = {}
        for k, c in self.terms.items():
            if k[i] == 0:
                a0[k] = c
            else:
                kk = list(k)
                kk[i] -= 1
                a1[tuple(kk)] = c
        return _from_terms(self.n, a0), _from_terms(self.n, a1)

    def split_left_derivation(self, v: int) -> tuple["WeylOperator", "WeylOperator"]:
        """Return (A0, A1) with self = A0 + D_v * A1 and A0 free of D_v."""
        n = self.n
        iv, idv = v, n + 1 + v
        a0: dict[Key, flint.fmpq] = {}
        a1 = WeylOperator(n)
        # group the remaining factor of each term by the powers of x_v, D_v
        pending: dict[tuple[int, int], dict[Key, flint.fmpq]] = {}
        for k, c in self.terms.items():
            a, b = k[iv], k[idv]
            kk = list(k)
            kk[iv] = 0
            kk[idv] = 0
            rest = tuple(kk)
            for j, coeff in _left_table(a, b):
                # D_v^(b-j) x_v^(a-j) * rest
                if b - j == 0:
                    key = list(rest)
                    key[iv] = a - j
                    key = tuple(key)
                    a0[key] = a0.get(key, 0) + c * coeff
                else:
                    slot = pending.setdefault((b - j - 1, a - j), {})
                    slot[rest] = slot.get(rest, 0) + c * coeff
        for (db, xa), rest_terms in pending.items():
            rest_op = _from_terms(n, rest_terms)
            if rest_op.is_zero():
                continue
            left = WeylOperator.generator(n, generator_name("der", v), db)
            right = WeylOperator.generator(n, generator_name("var", v), xa)
            a1 = a1 + weyl_mul(left, weyl_mul(right, rest_op))
        return _from_terms(n, a0), a1


def _from_terms(n: int, terms: Mapping[Key, object]) -> WeylOperator:
    return WeylOperator(n, {k: c for k, c in terms.items() if c != 0})


def _monomial_str(n: int, key: Key) -> str:
    parts = []
    n1 = n + 1
    for i, e in enumerate(key):
        if e == 0:
            continue
        name = generator_name("var", i) if i < n1 else generator_name("der", i - n1)
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _join_signed(pieces: list[str]) -> str:
    out = pieces[0]
    for p in pieces[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def weyl_mul(A: WeylOperator, B: WeylOperator) -> WeylOperator:
    """Product in normal order via D^b x^c = sum_k C(b,k) c^(k) x^(c-k) D^(b-k)."""
    A._check(B)
    n1 = A.n + 1
    out: dict[Key, flint.fmpq] = {}
    for ka, ca in A.terms.items():
        da = ka[n1:]
        for kb, cb in B.terms.items():
            xb = kb[:n1]
            c0 = ca * cb
            # per variable expansion lists
            choices = []
            for v in range(n1):
                if da[v] and xb[v]:
                    choices.append((v, _commute_table(da[v], xb[v])))
            base_x = [ka[v] + xb[v] for v in range(n1)]
            base_d = [da[v] + kb[n1 + v] for v in range(n1)]
            if not choices:
                key = tuple(base_x) + tuple(base_d)
                s = out.get(key, 0) + c0
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
                continue
            vs = [v for v, _ in choices]
            for combo in itertools.product(*[tbl for _, tbl in choices]):
                x = list(base_x)
                d = list(base_d)
                coeff = c0
                for v, (k, cf) in zip(vs, combo):
                    x[v] -= k
                    d[v] -= k
                    coeff = coeff * cf
                key = tuple(x) + tuple(d)
                s = out.get(key, 0) + coeff
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
    res = WeylOperator(A.n)
    res.terms = out
    return res


class _WeylAlgebra:
    def __init__(self, n: int) -> None:
        self.n = n

    def integer(self, k: int) -> WeylOperator:
        return WeylOperator.scalar(self.n, k)

    def name(self, name: str) -> WeylOperator:
        _, v = name_index(name)
        if v > self.n or (name[-1].isdigit() and v == 0):
            raise ValueError(f"generator {name} is outside the ring with n={self.n}")
        return WeylOperator.generator(self.n, name)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return weyl_mul(a, b)

    def div(self, a, b):
        if not b.terms or set(b.terms) != {(0,) * (2 * self.n + 2)}:
            raise ValueError("Weyl operators can only be divided by nonzero constants")
        return a.scale(1 / next(iter(b.terms.values())))

    def neg(self, a):
        return -a

    def power(self, a, k):
        return a**k


# ---------------------------------------------------------------------------
# Ore operators in one derivation


class OreOperator:
    """sum_i coeffs[i] * D_v^i with coefficients in Q(t, x1..xn)."""

    __slots__ = ("n", "v", "coeffs", "_hash")

    def __init__(self, coeffs: Sequence[RationalFunction], n: int | None = None, v: int = 0) -> None:
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        if n is None:
            if not cs:
                raise ValueError("cannot infer the ring of the zero operator")
            n = cs[0].n
        self.n = n
        self.v = v
        self.coeffs: tuple[RationalFunction, ...] = tuple(cs)
        self._hash: int | None = None

    # constructors
    @classmethod
    def zero(cls, n: int, v: int = 0) -> "OreOperator":
        return cls([], n, v)

    @classmethod
    def one(cls, n: int, v: int = 0) -> "OreOperator":
        return cls([RationalFunction.one(n)], n, v)

    @classmethod
    def derivation(cls, n: int, v: int = 0, power: int = 1) -> "OreOperator":
        zero = RationalFunction.zero(n)
        return cls([zero] * power + [RationalFunction.one(n)], n, v)

    @classmethod
    def scalar(cls, f: RationalFunction, v: int = 0) -> "OreOperator":
        return cls([f], f.n, v)

    @classmethod
    def parse(cls, text: str, n: int, v: int = 0) -> "OreOperator":
        return parse_with(text, _OreAlgebra(n, v))

    # queries
    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, i: int) -> RationalFunction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else RationalFunction.zero(self.n)

    def lc(self) -> RationalFunction:
        if not self.coeffs:
            raise DivisionByZero("leading coefficient of zero")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1].is_one()

    def monic(self) -> "OreOperator":
        if not self.coeffs:
            raise DivisionByZero("cannot make the zero operator monic")
        inv = self.coeffs[-1].inverse()
        return OreOperator([c * inv for c in self.coeffs], self.n, self.v)

    def is_free_of(self, variables: Iterable[int]) -> bool:
        vs = list(variables)
        return all(c.is_free_of(vs) for c in self.coeffs)

    def is_x_free(self) -> bool:
        return self.is_free_of(range(1, self.n + 1))

    def is_semisplit(self) -> bool:
        if not self.coeffs:
            return True
        return all(rf_is_semisplit(c) for c in self.monic().coeffs)

    def _check(self, other: "OreOperator") -> None:
        if not isinstance(other, OreOperator):
            raise TypeError("expected an OreOperator")
        if other.n != self.n or other.v != self.v:
            raise VariableMismatch("Ore operators over different rings or derivations")

    # arithmetic
    def __add__(self, other: "OreOperator") -> "OreOperator":
        self._check(other)
        m = max(len(self.coeffs), len(other.coeffs))
        return OreOperator([self.coeff(i) + other.coeff(i) for i in range(m)], self.n, self.v)

    def __neg__(self) -> "OreOperator":
        return OreOperator([-c for c in self.coeffs], self.n, self.v)

    def __sub__(self, other: "OreOperator") -> "OreOperator":
        return self + (-other)

    def scale_left(self, f: RationalFunction | Scalar) -> "OreOperator":
        if not isinstance(f, RationalFunction):
            f = RationalFunction.constant(self.n, f)
        return OreOperator([f * c for c in self.coeffs], self.n, self.v)

    def derivation_times(self) -> "OreOperator":
        """D_v * self."""
        cs = [c.derivative(self.v) for c in self.coeffs] + [RationalFunction.zero(self.n)]
        for i, c in enumerate(self.coeffs):
            cs[i + 1] = cs[i + 1] + c
        return OreOperator(cs, self.n, self.v)

    def __mul__(self, other: object) -> "OreOperator":
        if isinstance(other, RationalFunction):
            other = OreOperator.scalar(other, self.v)
        if isinstance(other, (int, flint.fmpq)):
            return self.scale_left(other)
        if not isinstance(other, OreOperator):
            return NotImplemented
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return OreOperator.zero(self.n, self.v)
        acc = [RationalFunction.zero(self.n)] * (len(self.coeffs) + len(other.coeffs) - 1)
        cur = other
        for i, a in enumerate(self.coeffs):
            if i:
                cur = cur.derivation_times()
            if a.is_zero():
                continue
            for j, b in enumerate(cur.coeffs):
                if not b.is_zero():
                    acc[j] = acc[j] + a * b
        return OreOperator(acc, self.n, self.v)

    def __rmul__(self, other: object) -> "OreOperator":
        if isinstance(other, RationalFunction):
            return self.scale_left(other)
        if isinstance(other, (int, flint.fmpq)):
            return self.scale_left(other)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OreOperator):
            return NotImplemented
        return self.n == other.n and self.v == other.v and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.v, str(self)))
        return self._hash

    def __str__(self) -> str:
        return ore_to_str(self)

    def __repr__(self) -> str:
        return f"OreOperator({self})"

    # action on rational functions
    def apply(self, f: RationalFunction) -> RationalFunction:
        out = RationalFunction.zero(self.n)
        cur = f
        for i, a in enumerate(self.coeffs):
            if i:
                cur = cur.derivative(self.v)
            if not a.is_zero():
                out = out + a * cur
        return out

    def specialize(self, point: Mapping[int, Scalar]) -> "OreOperator":
        return OreOperator([c.substitute(point) for c in self.coeffs], self.n, self.v)


def ore_to_str(A: OreOperator) -> str:
    if not A.coeffs:
        return "0"
    d = generator_name("der", A.v)
    pieces = []
    for i in range(len(A.coeffs) - 1, -1, -1):
        c = A.coeffs[i]
        if c.is_zero():
            continue
        mono = "" if i == 0 else d if i == 1 else f"{d}^{i}"
        sign = ""
        cs = rf_to_str(c)
        if cs.startswith("-") and not c.is_polynomial():
            sign, cs = "-", rf_to_str(-c)
        simple = c.is_polynomial() and len(c.num) == 1 and "/" not in cs
        if not mono:
            pieces.append(sign + (cs if simple else f"({cs})"))
        elif c.is_one():
            pieces.append(mono)
        elif simple and cs == "-1":
            pieces.append("-" + mono)
        elif simple:
            pieces.append(f"{cs}*{mono}")
        else:
            pieces.append(f"{sign}({cs})*{mono}")
    return _join_signed(pieces)


class _OreAlgebra:
    def __init__(self, n: int, v: int) -> None:
        self.n = n
        self.v = v

    def integer(self, k: int) -> OreOperator:
        return OreOperator([RationalFunction.constant(self.n, k)], self.n, self.v)

    def name(self, name: str) -> OreOperator:
        kind, v = name_index(name)
        if v > self.n or (name[-1].isdigit() and v == 0):
            raise ValueError(f"generator {name} is outside t, x1..x{self.n}")
        if kind == "der":
            if v != self.v:
                raise ValueError(f"derivation {name} does not belong to this operator")
            return OreOperator.derivation(self.n, self.v)
        return OreOperator([RationalFunction.var(self.n, v)], self.n, self.v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b.order != 0:
            raise ValueError("division is only allowed by nonzero rational functions")
        return a * OreOperator([b.coeffs[0].inverse()], self.n, self.v)

    def neg(self, a):
        return -a

    def power(self, a, k):
        out = OreOperator.one(self.n, self.v)
        for _ in range(k):
            out = out * a
        return out


# ---------------------------------------------------------------------------
# Euclidean algorithms


def ore_rdiv(A: OreOperator, B: OreOperator) -> tuple[OreOperator, OreOperator]:
    """Right division: A = Q*B + R with ord R < ord B."""
    A._check(B)
    if B.is_zero():
        raise DivisionByZero("right division by zero")
    n, v = A.n, A.v
    if A.order < B.order:
        return OreOperator.zero(n, v), A
    shifts = [B]
    for _ in range(A.order - B.order):
        shifts.append(shifts[-1].derivation_times())
    inv = B.lc().inverse()
    R = list(A.coeffs)
    q = [RationalFunction.zero(n)] * (A.order - B.order + 1)
    for k in range(A.order - B.order, -1, -1):
        top = R[k + B.order]
        if top.is_zero():
            continue
        c = top * inv
        q[k] = c
        for j, b in enumerate(shifts[k].coeffs):
            if not b.is_zero():
                R[j] = R[j] - c * b
    return OreOperator(q, n, v), OreOperator(R[: B.order], n, v)


def ore_rrem(A: OreOperator, B: OreOperator) -> OreOperator:
    return ore_rdiv(A, B)[1]


def ore_gcrd(A: OreOperator, B: OreOperator) -> OreOperator:
    A._check(B)
    if A.is_zero() and B.is_zero():
        raise DivisionByZero("gcrd of two zero operators")
    while not B.is_zero():
        A, B = B, ore_rrem(A, B)
    return A.monic()


def ore_lclm_cofactors(A: OreOperator, B: OreOperator) -> tuple[OreOperator, OreOperator, OreOperator]:
    """Return (L, U, V) with L = U*A = -V*B the monic lclm."""
    A._check(B)
    if A.is_zero() or B.is_zero():
        raise DivisionByZero("lclm with a zero operator")
    n, v = A.n, A.v
    r0, r1 = A, B
    u0, u1 = OreOperator.one(n, v), OreOperator.zero(n, v)
    w0, w1 = OreOperator.zero(n, v), OreOperator.one(n, v)
    while not r1.is_zero():
        q, r = ore_rdiv(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        w0, w1 = w1, w0 - q * w1
    # u1*A + w1*B = 0
    L = u1 * A
    inv = L.lc().inverse()
    return L.scale_left(inv), u1.scale_left(inv), w1.scale_left(inv)


def ore_lclm(A: OreOperator, B: OreOperator) -> OreOperator:
    return ore_lclm_cofactors(A, B)[0]


def ore_lclm_many(ops: Sequence[OreOperator]) -> OreOperator:
    if not ops:
        raise ValueError("lclm of an empty list")
    L = ops[0].monic()
    for op in ops[1:]:
        L = ore_lclm(L, op)
    return L


def ore_transform(P: OreOperator, Q: OreOperator) -> OreOperator:
    """Monic P~ with P~ Q = lcm(P, Q); annihilates Q(f) whenever P(f) = 0."""
    if Q.is_zero():
        raise DivisionByZero("transformation by the zero operator")
    L = ore_lclm(P, Q)
    quot, rem = ore_rdiv(L, Q)
    assert rem.is_zero()
    return quot.monic()


def ore_specialize(P: OreOperator, point: Mapping[int, Scalar]) -> OreOperator:
    return P.specialize(point)


def ore_is_semisplit(P: OreOperator) -> bool:
    return P.is_semisplit()


# ---------------------------------------------------------------------------
# conversions


def weyl_to_ore(A: WeylOperator, v: int = 0) -> OreOperator:
    """View a Weyl operator that only involves D_v as an Ore operator."""
    n = A.n
    ctx = poly_ring(n)
    buckets: dict[int, dict[tuple[int, ...], flint.fmpq]] = {}
    for k, c in A.terms.items():
        ders = k[n + 1 :]
        if any(e for i, e in enumerate(ders) if i != v):
            raise UnsupportedOperation("operator involves other derivations")
        buckets.setdefault(ders[v], {})[k[: n + 1]] = c
    if not buckets:
        return OreOperator.zero(n, v)
    order = max(buckets)
    coeffs = [RationalFunction(ctx.from_dict(buckets.get(i, {}))) for i in range(order + 1)]
    return OreOperator(coeffs, n, v)


def ore_to_weyl(P: OreOperator) -> WeylOperator:
    """Polynomial-coefficient Ore operator as a Weyl operator."""
    n = P.n
    out: dict[Key, flint.fmpq] = {}
    for i, c in enumerate(P.coeffs):
        if not c.is_polynomial():
            raise UnsupportedOperation("coefficients must be polynomials")
        scale = 1 / c.den.leading_coefficient()
        d = [0] * (n + 1)
        d[P.v] = i
        for e, cf in c.num.terms():
            out[tuple(e) + tuple(d)] = cf * scale
    return WeylOperator(n, out)


def ore_clear_denominators(P: OreOperator) -> OreOperator:
    """Multiply on the left by the lcm of the coefficient denominators."""
    from .field import common_denominator

    d = common_denominator(P.coeffs, poly_ring(P.n))
    return P.scale_left(RationalFunction(d))


def monomials_in(names: Sequence[str], degree: int) -> Iterator[tuple[int, ...]]:
    """Exponent vectors over ``names`` of total degree exactly ``degree``, lex-descending."""
    k = len(names)
    if k == 0:
        if degree == 0:
            yield ()
        return

    def rec(i: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if i == k - 1:
            yield (remaining,)
            return
        for e in range(remaining, -1, -1):
            for rest in rec(i + 1, remaining - e):
                yield (e,) + rest

    yield from rec(0, degree)
