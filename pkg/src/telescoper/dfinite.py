"""D-finite elements given by rectangular annihilator systems.

A :class:`SystemBlock` describes one symbol f by a monic operator in each
derivation. Its derivative basis is {D^a f : a_v < order_v}. A
:class:`RectangularSystem` is a direct sum of blocks; elements carry one
coordinate per basis element of every block.

The trivial block (every operator equal to its derivation) stands for the
constant 1, so rational functions are simply elements of that block.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

from .errors import (
    DivisionByZero,
    InconsistentSystem,
    UnsupportedOperation,
    VariableMismatch,
)
from .field import RationalFunction, poly_ring
from .linalg import IncrementalDependency
from .ore import OreOperator, WeylOperator

TRIVIAL_LABEL = "1"


class SystemBlock:
    """One generator with a monic annihilator per derivation.

    An entry of ``ops`` may be None when the corresponding derivation is
    not modelled; such a block cannot be differentiated in that direction.
    """

    def __init__(self, ops: Sequence[OreOperator | None], label: str | None = None, check: bool = True) -> None:
        given = [op for op in ops if op is not None]
        if not given:
            raise ValueError("a block needs at least one annihilator")
        n = given[0].n
        if len(ops) != n + 1:
            raise VariableMismatch(f"expected {n + 1} operators, got {len(ops)}")
        for v, op in enumerate(ops):
            if op is None:
                continue
            if op.n != n or op.v != v:
                raise VariableMismatch(f"operator {v} is not an operator in derivation {v}")
            if op.order < 1:
                raise InconsistentSystem("annihilators must have positive order")
        self.n = n
        self.ops = tuple(None if op is None else op.monic() for op in ops)
        self.label = label
        self.orders = tuple(1 if op is None else op.order for op in self.ops)
        self.basis = list(itertools.product(*[range(d) for d in self.orders]))
        self.index = {a: i for i, a in enumerate(self.basis)}
        self.dim = len(self.basis)
        self._overflow: dict[tuple[int, tuple[int, ...]], list[RationalFunction]] = {}
        self.key = (label, tuple("" if op is None else str(op) for op in self.ops))
        if check:
            self.check_confluence()

    @property
    def is_complete(self) -> bool:
        return all(op is not None for op in self.ops)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SystemBlock) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"SystemBlock(label={self.label!r}, orders={self.orders})"

    def zero_vector(self) -> list[RationalFunction]:
        return [RationalFunction.zero(self.n)] * self.dim

    def unit(self, alpha: tuple[int, ...]) -> list[RationalFunction]:
        vec = self.zero_vector()
        vec[self.index[alpha]] = RationalFunction.one(self.n)
        return vec

    def _top_relation(self, w: int) -> list[RationalFunction]:
        """Coordinates of D_w^{d_w} f on the basis."""
        op = self.ops[w]
        vec = self.zero_vector()
        for i in range(op.order):
            c = op.coeffs[i]
            if not c.is_zero():
                alpha = [0] * (self.n + 1)
                alpha[w] = i
                vec[self.index[tuple(alpha)]] = -c
        return vec

    def _overflow_vector(self, w: int, rest: tuple[int, ...]) -> list[RationalFunction]:
        """Coordinates of D^rest D_w^{d_w} f, where rest has w-component 0."""
        key = (w, rest)
        hit = self._overflow.get(key)
        if hit is not None:
            return hit
        vec = self._top_relation(w)
        for u, k in enumerate(rest):
            for _ in range(k):
                vec = self._derive_no_overflow(vec, u)
        self._overflow[key] = vec
        return vec

    def _derive_no_overflow(self, vec: list[RationalFunction], u: int) -> list[RationalFunction]:
        # used only where the u-component cannot reach the order
        out = [c.derivative(u) for c in vec]
        for i, c in enumerate(vec):
            if c.is_zero():
                continue
            alpha = list(self.basis[i])
            alpha[u] += 1
            j = self.index.get(tuple(alpha))
            if j is None:
                return self.derive(vec, u)
            out[j] = out[j] + c
        return out

    def derive(self, vec: Sequence[RationalFunction], u: int) -> list[RationalFunction]:
        """Coordinates of D_u applied to the element with coordinates vec."""
        if self.ops[u] is None:
            if all(c.is_zero() for c in vec):
                return list(vec)
            raise UnsupportedOperation(f"block {self.label!r} has no annihilator for derivation {u}")
        out = [c.derivative(u) if not c.is_zero() else c for c in vec]
        for i, c in enumerate(vec):
            if c.is_zero():
                continue
            alpha = list(self.basis[i])
            alpha[u] += 1
            j = self.index.get(tuple(alpha))
            if j is not None:
                out[j] = out[j] + c
                continue
            rest = list(self.basis[i])
            rest[u] = 0
            over = self._overflow_vector(u, tuple(rest))
            for k, o in enumerate(over):
                if not o.is_zero():
                    out[k] = out[k] + c * o
        return out

    def check_confluence(self) -> None:
        for alpha in self.basis:
            e = self.unit(alpha)
            known = [u for u in range(self.n + 1) if self.ops[u] is not None]
            for u in known:
                du = self.derive(e, u)
                for w in (w for w in known if w > u):
                    a = self.derive(du, w)
                    b = self.derive(self.derive(e, w), u)
                    if a != b:
                        raise InconsistentSystem(
                            f"derivations {u} and {w} do not commute on basis element {alpha}"
                        )


def trivial_block(n: int) -> SystemBlock:
    return _trivial_cache(n)


_TRIVIAL: dict[int, SystemBlock] = {}


def _trivial_cache(n: int) -> SystemBlock:
    blk = _TRIVIAL.get(n)
    if blk is None:
        blk = SystemBlock([OreOperator.derivation(n, v) for v in range(n + 1)], TRIVIAL_LABEL, check=False)
        _TRIVIAL[n] = blk
    return blk


class RectangularSystem:
    """Direct sum of blocks with a concatenated basis."""

    def __init__(self, blocks: Sequence[SystemBlock]) -> None:
        if not blocks:
            raise ValueError("a system needs at least one block")
        n = blocks[0].n
        if any(b.n != n for b in blocks):
            raise VariableMismatch("blocks over different variable sets")
        seen: list[SystemBlock] = []
        for b in blocks:
            if b not in seen:
                seen.append(b)
        self.n = n
        self.blocks = tuple(seen)
        self.offsets = []
        off = 0
        for b in self.blocks:
            self.offsets.append(off)
            off += b.dim
        self.dim = off

    @classmethod
    def trivial(cls, n: int) -> "RectangularSystem":
        return _system_of((trivial_block(n),))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RectangularSystem) and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash(self.blocks)

    def __repr__(self) -> str:
        return f"RectangularSystem({list(self.blocks)})"

    def union(self, other: "RectangularSystem") -> "RectangularSystem":
        if other is self or other == self:
            return self
        extra = [b for b in other.blocks if b not in self.blocks]
        if not extra:
            return self
        return _system_of(self.blocks + tuple(extra))

    def block_slices(self) -> Iterable[tuple[SystemBlock, int]]:
        return zip(self.blocks, self.offsets)

    def derive(self, coords: Sequence[RationalFunction], u: int) -> list[RationalFunction]:
        out: list[RationalFunction] = []
        for blk, off in self.block_slices():
            out.extend(blk.derive(coords[off : off + blk.dim], u))
        return out

    def check_confluence(self) -> None:
        for blk in self.blocks:
            blk.check_confluence()


_SYSTEMS: dict[tuple[SystemBlock, ...], RectangularSystem] = {}


def _system_of(blocks: tuple[SystemBlock, ...]) -> RectangularSystem:
    sysm = _SYSTEMS.get(blocks)
    if sysm is None:
        sysm = RectangularSystem(blocks)
        _SYSTEMS[blocks] = sysm
    return sysm


def system_from_blocks(blocks: Sequence[SystemBlock]) -> RectangularSystem:
    return _system_of(tuple(blocks))


class DFiniteElement:
    """Coordinates over K in the derivative basis of a rectangular system."""

    __slots__ = ("system", "coords")

    def __init__(self, system: RectangularSystem, coords: Sequence[RationalFunction]) -> None:
        if len(coords) != system.dim:
            raise ValueError("coordinate vector does not match the system dimension")
        self.system = system
        self.coords = tuple(coords)

    @property
    def n(self) -> int:
        return self.system.n

    @classmethod
    def zero(cls, system: RectangularSystem) -> "DFiniteElement":
        return cls(system, [RationalFunction.zero(system.n)] * system.dim)

    @classmethod
    def generator(cls, system: RectangularSystem, block: int = 0) -> "DFiniteElement":
        coords = [RationalFunction.zero(system.n)] * system.dim
        coords[system.offsets[block]] = RationalFunction.one(system.n)
        return cls(system, coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def is_rational(self) -> bool:
        """True when only the trivial block carries nonzero coordinates."""
        for blk, off in self.system.block_slices():
            if blk.label == TRIVIAL_LABEL and blk == trivial_block(self.n):
                continue
            if any(not c.is_zero() for c in self.coords[off : off + blk.dim]):
                return False
        return True

    def rational_value(self) -> RationalFunction:
        if not self.is_rational():
            raise UnsupportedOperation("element is not a rational function")
        triv = trivial_block(self.n)
        for blk, off in self.system.block_slices():
            if blk == triv:
                return self.coords[off]
        return RationalFunction.zero(self.n)

    def promote(self, system: RectangularSystem) -> "DFiniteElement":
        if system is self.system or system == self.system:
            return self if system is self.system else DFiniteElement(system, self.coords)
        coords = [RationalFunction.zero(self.n)] * system.dim
        target = {b: off for b, off in system.block_slices()}
        for blk, off in self.system.block_slices():
            if blk not in target:
                raise VariableMismatch("target system does not contain this block")
            t = target[blk]
            coords[t : t + blk.dim] = self.coords[off : off + blk.dim]
        return DFiniteElement(system, coords)

    def derivative(self, u: int) -> "DFiniteElement":
        return DFiniteElement(self.system, self.system.derive(self.coords, u))

    def __add__(self, other: "DFiniteElement") -> "DFiniteElement":
        return df_add(self, other)

    def __neg__(self) -> "DFiniteElement":
        return DFiniteElement(self.system, [-c for c in self.coords])

    def __sub__(self, other: "DFiniteElement") -> "DFiniteElement":
        return df_add(self, -other)

    def scale(self, c: RationalFunction) -> "DFiniteElement":
        return df_mul_rat(self, c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DFiniteElement):
            return NotImplemented
        if self.system != other.system:
            s = self.system.union(other.system)
            return self.promote(s).coords == other.promote(s).coords
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return f"DFiniteElement({[str(c) for c in self.coords]})"


def common_system(elements: Iterable[DFiniteElement]) -> RectangularSystem:
    it = iter(elements)
    try:
        sysm = next(it).system
    except StopIteration:
        raise ValueError("no elements") from None
    for e in it:
        sysm = sysm.union(e.system)
    return sysm


def df_rational(f: RationalFunction, system: RectangularSystem | None = None) -> DFiniteElement:
    """f as a multiple of the constant generator 1."""
    base = RectangularSystem.trivial(f.n)
    sysm = base if system is None else system.union(base)
    coords = [RationalFunction.zero(f.n)] * sysm.dim
    for blk, off in sysm.block_slices():
        if blk == trivial_block(f.n):
            coords[off] = f
    return DFiniteElement(sysm, coords)


def df_from_rational(f: RationalFunction) -> DFiniteElement:
    """f as the generator of the block {D_v - D_v(f)/f}; zero maps to the zero element."""
    n = f.n
    if f.is_zero():
        return DFiniteElement.zero(RectangularSystem.trivial(n))
    ops = []
    for v in range(n + 1):
        logd = f.derivative(v) / f
        ops.append(OreOperator([-logd, RationalFunction.one(n)], n, v))
    blk = SystemBlock(ops, label=f"rational:{f}", check=False)
    return DFiniteElement.generator(system_from_blocks([blk]))


def df_add(f: DFiniteElement, g: DFiniteElement) -> DFiniteElement:
    if f.n != g.n:
        raise VariableMismatch("elements over different variable sets")
    if f.system is not g.system and f.system != g.system:
        s = f.system.union(g.system)
        f, g = f.promote(s), g.promote(s)
    return DFiniteElement(f.system, [a + b for a, b in zip(f.coords, g.coords)])


def df_mul_rat(f: DFiniteElement, c: RationalFunction) -> DFiniteElement:
    if c.n != f.n:
        raise VariableMismatch("scalar over a different variable set")
    if c.is_zero():
        return DFiniteElement.zero(f.system)
    return DFiniteElement(f.system, [c * a if not a.is_zero() else a for a in f.coords])


def _derivative_table(f: DFiniteElement, ders: Iterable[tuple[int, ...]]) -> dict[tuple[int, ...], list[RationalFunction]]:
    """Coordinates of D^b f for every requested b (and the needed prefixes)."""
    n1 = f.n + 1
    table: dict[tuple[int, ...], list[RationalFunction]] = {(0,) * n1: list(f.coords)}

    def get(b: tuple[int, ...]) -> list[RationalFunction]:
        hit = table.get(b)
        if hit is not None:
            return hit
        # peel the last nonzero derivation so that prefixes are shared
        u = max(i for i, e in enumerate(b) if e)
        prev = list(b)
        prev[u] -= 1
        vec = f.system.derive(get(tuple(prev)), u)
        table[b] = vec
        return vec

    for b in sorted(set(ders), key=lambda b: (sum(b), b)):
        get(b)
    return table


def df_apply(op: WeylOperator | OreOperator, f: DFiniteElement) -> DFiniteElement:
    """Apply a Weyl or Ore operator to a D-finite element."""
    n = f.n
    if op.n != n:
        raise VariableMismatch("operator and element over different variable sets")
    if isinstance(op, OreOperator):
        out = [RationalFunction.zero(n)] * f.system.dim
        cur = list(f.coords)
        for i, a in enumerate(op.coeffs):
            if i:
                cur = f.system.derive(cur, op.v)
            if a.is_zero():
                continue
            out = [o + a * c if not c.is_zero() else o for o, c in zip(out, cur)]
        return DFiniteElement(f.system, out)
    # group Weyl terms by derivation exponent: sum_b P_b(x) D^b
    ctx = poly_ring(n)
    groups: dict[tuple[int, ...], dict[tuple[int, ...], object]] = {}
    for key, c in op.terms.items():
        groups.setdefault(key[n + 1 :], {})[key[: n + 1]] = c
    table = _derivative_table(f, groups.keys())
    out = [RationalFunction.zero(n)] * f.system.dim
    for b, poly_terms in groups.items():
        p = RationalFunction(ctx.from_dict(poly_terms))
        vec = table[b]
        out = [o + p * c if not c.is_zero() else o for o, c in zip(out, vec)]
    return DFiniteElement(f.system, out)


def df_min_annihilator_t(f: DFiniteElement, v: int = 0) -> OreOperator:
    """Monic operator of least order in D_v annihilating f within its module."""
    if f.is_zero():
        raise DivisionByZero("the zero element has no minimal annihilator")
    n = f.n
    dep = IncrementalDependency(f.system.dim, n)
    cur = list(f.coords)
    for _ in range(f.system.dim + 1):
        combo = dep.push(cur)
        if combo is not None:
            return OreOperator(combo, n, v)
        cur = f.system.derive(cur, v)
    raise AssertionError("dependency must appear within the basis size")


def block_from_strings(ops: Mapping[str, str], n: int, label: str | None = None) -> SystemBlock:
    """Parse {'Dt': ..., 'Dx1': ...} into a checked block.

    Derivations without an entry are left unmodelled.
    """
    parsed: list[OreOperator | None] = []
    for v in range(n + 1):
        name = "Dt" if v == 0 else f"Dx{v}"
        parsed.append(OreOperator.parse(ops[name], n, v) if name in ops else None)
    unknown = set(ops) - {"Dt"} - {f"Dx{v}" for v in range(1, n + 1)}
    if unknown:
        raise ValueError(f"unknown derivations {sorted(unknown)}")
    return SystemBlock(parsed, label)
