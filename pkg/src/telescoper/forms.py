"""Differential forms in dx1..dxn with D-finite coefficients."""

from __future__ import annotations

from typing import Iterable, Mapping

from .dfinite import (
    DFiniteElement,
    RectangularSystem,
    common_system,
    df_apply,
    df_mul_rat,
    df_rational,
)
from .errors import UnsupportedOperation, VariableMismatch
from .field import RationalFunction
from .ore import OreOperator, WeylOperator

Index = tuple[int, ...]


class DifferentialForm:
    """sum over increasing index tuples I of f_I dx_I.

    Every coefficient lives over the same rectangular system. Degree -1 is
    allowed only for the zero form, so that d of it is the zero 0-form;
    likewise degrees above n only hold the zero form.
    """

    __slots__ = ("n", "degree", "system", "terms")

    def __init__(
        self,
        n: int,
        degree: int,
        terms: Mapping[Index, DFiniteElement] | None = None,
        system: RectangularSystem | None = None,
    ) -> None:
        terms = dict(terms or {})
        if degree < -1 or (degree > n and terms):
            raise ValueError(f"degree {degree} out of range for n={n}")
        for idx in terms:
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            if any(not 1 <= i <= n for i in idx) or any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index {idx} is not strictly increasing within 1..{n}")
        for f in terms.values():
            if f.n != n:
                raise VariableMismatch("coefficient over a different variable set")
        sysm = system
        if terms:
            found = common_system(terms.values())
            sysm = found if sysm is None else sysm.union(found)
        if sysm is None:
            sysm = RectangularSystem.trivial(n)
        self.n = n
        self.degree = degree
        self.system = sysm
        self.terms: dict[Index, DFiniteElement] = {}
        for idx in sorted(terms):
            f = terms[idx].promote(sysm)
            if not f.is_zero():
                self.terms[idx] = f
        if degree == -1 and self.terms:
            raise ValueError("only the zero form has degree -1")

    @classmethod
    def zero(cls, n: int, degree: int, system: RectangularSystem | None = None) -> "DifferentialForm":
        return cls(n, degree, {}, system)

    @classmethod
    def from_rational(cls, n: int, degree: int, coeffs: Mapping[Index, RationalFunction]) -> "DifferentialForm":
        return cls(n, degree, {idx: df_rational(c) for idx, c in coeffs.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, idx: Index) -> DFiniteElement:
        return self.terms.get(tuple(idx)) or DFiniteElement.zero(self.system)

    def promote(self, system: RectangularSystem) -> "DifferentialForm":
        return DifferentialForm(self.n, self.degree, self.terms, self.system.union(system))

    def _align(self, other: "DifferentialForm") -> tuple["DifferentialForm", "DifferentialForm"]:
        if other.n != self.n:
            raise VariableMismatch("forms over different variable sets")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch {self.degree} vs {other.degree}")
        if self.system is other.system:
            return self, other
        s = self.system.union(other.system)
        return self.promote(s), other.promote(s)

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        a, b = self._align(other)
        terms = dict(a.terms)
        for idx, f in b.terms.items():
            terms[idx] = terms[idx] + f if idx in terms else f
        return DifferentialForm(self.n, self.degree, terms, a.system)

    def __neg__(self) -> "DifferentialForm":
        return DifferentialForm(self.n, self.degree, {i: -f for i, f in self.terms.items()}, self.system)

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return self + (-other)

    def scale(self, c: RationalFunction) -> "DifferentialForm":
        return DifferentialForm(
            self.n, self.degree, {i: df_mul_rat(f, c) for i, f in self.terms.items()}, self.system
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        if self.n != other.n or self.degree != other.degree:
            return False
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash((self.n, self.degree, tuple(self.terms)))

    def __repr__(self) -> str:
        parts = []
        for idx, f in self.terms.items():
            basis = "^".join(f"dx{i}" for i in idx) or "1"
            parts.append(f"{[str(c) for c in f.coords]} {basis}")
        return f"DifferentialForm(degree={self.degree}: " + " + ".join(parts) + ")"


def _merge_sign(idx: Index, j: int) -> tuple[int, Index] | None:
    """dx_j ^ dx_idx = sign * dx_(idx with j inserted)."""
    if j in idx:
        return None
    k = sum(1 for i in idx if i < j)
    out = tuple(sorted(idx + (j,)))
    return (-1) ** k, out


def _sort_sign(seq: Iterable[int]) -> tuple[int, Index] | None:
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return None
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return (-1) ** inversions, tuple(sorted(seq))


def dx(n: int, *indices: int) -> DifferentialForm:
    """dx_i1 ^ ... ^ dx_ik with coefficient 1."""
    res = _sort_sign(indices)
    if res is None:
        return DifferentialForm.zero(n, len(indices))
    sign, idx = res
    return DifferentialForm(n, len(indices), {idx: df_rational(RationalFunction.constant(n, sign))})


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """Exterior product; one factor of each coefficient pair must be rational."""
    if a.n != b.n:
        raise VariableMismatch("forms over different variable sets")
    n = a.n
    degree = a.degree + b.degree
    if a.degree < 0 or b.degree < 0 or degree > n:
        return DifferentialForm.zero(n, max(degree, -1), a.system.union(b.system))
    sysm = a.system.union(b.system)
    terms: dict[Index, DFiniteElement] = {}
    for I, f in a.terms.items():
        for J, g in b.terms.items():
            res = _sort_sign(I + J)
            if res is None:
                continue
            sign, K = res
            if f.is_rational():
                prod = df_mul_rat(g.promote(sysm), f.rational_value() * sign)
            elif g.is_rational():
                prod = df_mul_rat(f.promote(sysm), g.rational_value() * sign)
            else:
                raise UnsupportedOperation("products of two non-rational D-finite coefficients are not supported")
            terms[K] = terms[K] + prod if K in terms else prod
    return DifferentialForm(n, degree, terms, sysm)


def wedge_dx(u: DifferentialForm, j: int) -> DifferentialForm:
    """u ^ dx_j."""
    n = u.n
    if u.degree < 0:
        return DifferentialForm.zero(n, u.degree + 1, u.system)
    terms: dict[Index, DFiniteElement] = {}
    for idx, f in u.terms.items():
        if j in idx:
            continue
        k = sum(1 for i in idx if i > j)
        new = tuple(sorted(idx + (j,)))
        terms[new] = f if k % 2 == 0 else -f
    return DifferentialForm(n, u.degree + 1, terms, u.system)


def d_s(omega: DifferentialForm, s: int) -> DifferentialForm:
    """sum over j <= s of dx_j ^ d/dx_j(omega)."""
    n = omega.n
    if not 0 <= s <= n:
        raise ValueError(f"level {s} out of range 0..{n}")
    degree = omega.degree + 1
    if degree > n:
        return DifferentialForm.zero(n, degree, omega.system)
    terms: dict[Index, DFiniteElement] = {}
    for idx, f in omega.terms.items():
        for j in range(1, s + 1):
            res = _merge_sign(idx, j)
            if res is None:
                continue
            sign, new = res
            g = f.derivative(j)
            if g.is_zero():
                continue
            if sign < 0:
                g = -g
            terms[new] = terms[new] + g if new in terms else g
    return DifferentialForm(n, degree, terms, omega.system)


def d(omega: DifferentialForm) -> DifferentialForm:
    return d_s(omega, omega.n)


def op_apply_form(op: WeylOperator | OreOperator, omega: DifferentialForm) -> DifferentialForm:
    return DifferentialForm(
        omega.n, omega.degree, {i: df_apply(op, f) for i, f in omega.terms.items()}, omega.system
    )


def split_top(omega: DifferentialForm, l: int) -> tuple[DifferentialForm, DifferentialForm]:
    """omega = u ^ dx_l + v with u, v free of dx_l."""
    n = omega.n
    u_terms: dict[Index, DFiniteElement] = {}
    v_terms: dict[Index, DFiniteElement] = {}
    for idx, f in omega.terms.items():
        if l in idx:
            k = sum(1 for i in idx if i > l)
            rest = tuple(i for i in idx if i != l)
            u_terms[rest] = f if k % 2 == 0 else -f
        else:
            v_terms[idx] = f
    u = DifferentialForm(n, omega.degree - 1, u_terms, omega.system)
    v = DifferentialForm(n, omega.degree, v_terms, omega.system)
    return u, v


def involves(omega: DifferentialForm, l: int) -> bool:
    return any(l in idx for idx in omega.terms)
