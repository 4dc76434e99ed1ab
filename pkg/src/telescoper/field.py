"""Rational functions in t, x1, ..., xn over the rationals.

Polynomials are flint ``fmpq_mpoly`` objects. A :class:`RationalFunction`
keeps numerator and denominator coprime with a monic denominator, so
structural equality is mathematical equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

import flint

from .errors import DenominatorVanishes, DivisionByZero, VariableMismatch

Poly = flint.fmpq_mpoly
Scalar = Union[int, Fraction, flint.fmpq]


def var_names(n: int) -> tuple[str, ...]:
    return ("t",) + tuple(f"x{i}" for i in range(1, n + 1))


@lru_cache(maxsize=None)
def poly_ring(n: int) -> flint.fmpq_mpoly_ctx:
    """Polynomial ring Q[t, x1..xn]; variable 0 is t."""
    return flint.fmpq_mpoly_ctx.get(var_names(n), "deglex")


def to_fmpq(c: Scalar) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    if isinstance(c, int):
        return flint.fmpq(c)
    if isinstance(c, flint.fmpz):
        return flint.fmpq(c)
    raise TypeError(f"not a rational scalar: {c!r}")


def arity(p: Poly) -> int:
    return p.context().nvars() - 1


def poly_to_str(p: Poly) -> str:
    return "0" if p.is_zero() else str(p)


def poly_degree_in(p: Poly, v: int) -> int:
    if p.is_zero():
        return -1
    return p.degrees()[v]


def poly_coefficients_in(p: Poly, v: int) -> dict[int, Poly]:
    """Split p as sum of var_v^j * c_j with c_j free of var_v."""
    ctx = p.context()
    groups: dict[int, dict[tuple[int, ...], flint.fmpq]] = {}
    for exps, c in p.terms():
        e = list(exps)
        j = e[v]
        e[v] = 0
        groups.setdefault(j, {})[tuple(e)] = c
    return {j: ctx.from_dict(d) for j, d in groups.items()}


def poly_coefficients_over(p: Poly, keep: Iterable[int]) -> dict[tuple[int, ...], Poly]:
    """Group p by its exponents in the variables *not* in ``keep``.

    Returns monomial exponent (over the complement) -> polynomial in the
    ``keep`` variables.
    """
    keep = set(keep)
    ctx = p.context()
    nv = ctx.nvars()
    other = [i for i in range(nv) if i not in keep]
    groups: dict[tuple[int, ...], dict[tuple[int, ...], flint.fmpq]] = {}
    for exps, c in p.terms():
        key = tuple(exps[i] for i in other)
        e = tuple(exps[i] if i in keep else 0 for i in range(nv))
        groups.setdefault(key, {})[e] = c
    return {k: ctx.from_dict(d) for k, d in groups.items()}


def poly_gcd_list(polys: Iterable[Poly], ctx: flint.fmpq_mpoly_ctx) -> Poly:
    g = ctx.from_dict({})
    for q in polys:
        if g.is_constant() and not g.is_zero():
            return ctx.constant(1)
        g = q if g.is_zero() else g.gcd(q)
    return g


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        raise DivisionByZero("lcm with zero")
    g = a.gcd(b)
    out = (a / g) * b
    return out / out.leading_coefficient()


def poly_is_free_of(p: Poly, variables: Iterable[int]) -> bool:
    if p.is_zero():
        return True
    d = p.degrees()
    return all(d[v] == 0 for v in variables)


class RationalFunction:
    """Element of Q(t, x1..xn) in lowest terms with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduced: bool = False) -> None:
        ctx = num.context()
        if den is None:
            den = ctx.constant(1)
            reduced = True
        elif den.context() is not ctx:
            raise VariableMismatch("numerator and denominator in different rings")
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if not reduced:
            if num.is_zero():
                den = ctx.constant(1)
            elif not den.is_constant():
                g = num.gcd(den)
                if not g.is_constant():
                    num = num / g
                    den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num = num
        self.den = den
        self._hash: int | None = None

    # construction helpers
    @classmethod
    def zero(cls, n: int) -> "RationalFunction":
        return cls(poly_ring(n).from_dict({}))

    @classmethod
    def one(cls, n: int) -> "RationalFunction":
        return cls(poly_ring(n).constant(1))

    @classmethod
    def constant(cls, n: int, c: Scalar) -> "RationalFunction":
        return cls(poly_ring(n).constant(to_fmpq(c)))

    @classmethod
    def var(cls, n: int, v: int) -> "RationalFunction":
        return cls(poly_ring(n).gens()[v])

    @property
    def n(self) -> int:
        return self.num.context().nvars() - 1

    @property
    def ctx(self) -> flint.fmpq_mpoly_ctx:
        return self.num.context()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def constant_value(self) -> flint.fmpq:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.constant_coefficient() if not self.num.is_zero() else flint.fmpq(0)

    def _coerce(self, other: object) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.num.context() is not self.num.context():
                raise VariableMismatch("rational functions over different variable sets")
            return other
        if isinstance(other, (int, Fraction, flint.fmpq, flint.fmpz)):
            return RationalFunction(self.ctx.constant(to_fmpq(other)))
        if isinstance(other, flint.fmpq_mpoly):
            return RationalFunction(other)
        return NotImplemented  # type: ignore[return-value]

    # arithmetic
    def __add__(self, other: object) -> "RationalFunction":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            num = self.num + o.num
            if self.den.is_constant() or num.is_zero():
                return RationalFunction(num, self.den, reduced=self.den.is_constant())
            return RationalFunction(num, self.den)
        g = self.den.gcd(o.den)
        if g.is_constant():
            return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den, reduced=True)
        d1 = self.den / g
        d2 = o.den / g
        num = self.num * d2 + o.num * d1
        if num.is_zero():
            return RationalFunction(num)
        h = num.gcd(g)
        if not h.is_constant():
            num = num / h
            g = g / h
        return RationalFunction(num, d1 * d2 * g, reduced=True)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other: object) -> "RationalFunction":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "RationalFunction":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> "RationalFunction":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return RationalFunction(self.ctx.from_dict({}))
        if self.den.is_constant() and o.den.is_constant():
            return RationalFunction(self.num * o.num, reduced=True)
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        return RationalFunction(
            (self.num / g1) * (o.num / g2), (self.den / g2) * (o.den / g1), reduced=True
        )

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return RationalFunction(self.den, self.num, reduced=False)

    def __truediv__(self, other: object) -> "RationalFunction":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> "RationalFunction":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> "RationalFunction":
        if k >= 0:
            return RationalFunction(self.num**k, self.den**k, reduced=True)
        return self.inverse() ** (-k)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self.den.is_one() and self.num == self.ctx.constant(to_fmpq(other))
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((str(self.num), str(self.den)))
        return self._hash

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def derivative(self, v: int) -> "RationalFunction":
        """Partial derivative with respect to variable v (0 is t)."""
        if self.den.is_constant():
            return RationalFunction(self.num.derivative(v) / self.den.leading_coefficient(), reduced=True)
        dn = self.num.derivative(v)
        dd = self.den.derivative(v)
        if dd.is_zero():
            return RationalFunction(dn, self.den)
        # (n' d - n d') / d^2 with the partial gcd trick
        g = self.den.gcd(dd)
        d1 = self.den / g
        num = dn * d1 - self.num * (dd / g)
        return RationalFunction(num, self.den * d1)

    def is_free_of(self, variables: Iterable[int]) -> bool:
        vs = list(variables)
        return poly_is_free_of(self.num, vs) and poly_is_free_of(self.den, vs)

    def substitute(self, values: Mapping[int, Scalar]) -> "RationalFunction":
        """Replace variables by rational numbers; raises if the denominator vanishes."""
        names = var_names(self.n)
        sub = {names[v]: to_fmpq(c) for v, c in values.items()}
        den = self.den.subs(sub)
        if den.is_zero():
            raise DenominatorVanishes(f"denominator {self.den} vanishes at {sub}")
        return RationalFunction(self.num.subs(sub), den)

    def __str__(self) -> str:
        return rf_to_str(self)

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def rf_to_str(f: RationalFunction) -> str:
    """Canonical text; always parseable by the expression grammar."""
    if f.den.is_one():
        return poly_to_str(f.num)
    num = poly_to_str(f.num)
    if len(f.num) > 1 or "/" in num:
        num = f"({num})"
    den = poly_to_str(f.den)
    if len(f.den) > 1 or "*" in den:
        den = f"({den})"
    return f"{num}/{den}"


def rf_specialize(f: RationalFunction, point: Mapping[int, Scalar]) -> RationalFunction:
    return f.substitute(point)


@dataclass(frozen=True)
class SplitDecomposition:
    """p = constant * x_part * t_part * mixed.

    x_part is free of t, t_part is free of x, and mixed has no factor
    that is free of t or free of x.
    """

    constant: flint.fmpq
    x_part: Poly
    t_part: Poly
    mixed: Poly

    @property
    def is_split(self) -> bool:
        return self.mixed.is_constant()


def poly_split_decompose(p: Poly) -> SplitDecomposition:
    if p.is_zero():
        raise DivisionByZero("split decomposition of zero")
    ctx = p.context()
    # content with respect to t: gcd of the coefficients of t^j
    xp = poly_gcd_list(poly_coefficients_in(p, 0).values(), ctx)
    xp = xp / xp.leading_coefficient()
    q = p / xp
    # content with respect to x: gcd over x-monomial coefficients
    tp = poly_gcd_list(poly_coefficients_over(q, [0]).values(), ctx)
    tp = tp / tp.leading_coefficient()
    m = q / tp
    lc = m.leading_coefficient()
    m = m / lc
    return SplitDecomposition(lc, xp, tp, m)


def rf_is_semisplit(f: RationalFunction) -> bool:
    if f.is_zero():
        return True
    return poly_split_decompose(f.den).is_split


def rf_is_split(f: RationalFunction) -> bool:
    if f.is_zero():
        return True
    return poly_split_decompose(f.num).is_split and poly_split_decompose(f.den).is_split


def common_denominator(fs: Iterable[RationalFunction], ctx: flint.fmpq_mpoly_ctx) -> Poly:
    d = ctx.constant(1)
    for f in fs:
        if not f.den.is_constant():
            d = poly_lcm(d, f.den)
    return d


class _RationalAlgebra:
    def __init__(self, n: int) -> None:
        self.n = n

    def integer(self, k: int) -> RationalFunction:
        return RationalFunction.constant(self.n, k)

    def name(self, name: str) -> RationalFunction:
        from .parsing import name_index

        kind, v = name_index(name)
        if kind == "der":
            raise ValueError(f"derivation {name} is not allowed in a rational expression")
        if v < 0 or v > self.n or (name.startswith("x") and v == 0):
            raise ValueError(f"variable {name} is outside t, x1..x{self.n}")
        return RationalFunction.var(self.n, v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b.is_zero():
            raise DivisionByZero("division by zero")
        return a / b

    def neg(self, a):
        return -a

    def power(self, a, k):
        return a**k


def max_variable_index(text: str) -> int:
    """Largest k such that x<k> or Dx<k> occurs in text (0 if none)."""
    import re

    found = [int(m) for m in re.findall(r"x(\d+)", text)]
    return max(found, default=0)


def parse_expression(text: str, n: int | None = None) -> RationalFunction:
    from .parsing import parse_with

    if n is None:
        n = max_variable_index(text)
    return parse_with(text, _RationalAlgebra(n))
