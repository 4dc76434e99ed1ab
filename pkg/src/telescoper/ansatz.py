"""Annihilators with constant coefficients in a prescribed set of generators.

The search is a plain undetermined-coefficients ansatz: for growing total
degree D, every normal-ordered monomial in the allowed generators is
applied to the inputs, denominators are cleared and all coefficients are
equated to zero. A rank test modulo a word-size prime decides cheaply
whether a kernel can exist; only then is the kernel computed exactly.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from math import factorial, gcd, lcm
from typing import Iterable, Sequence

import flint

from .dfinite import DFiniteElement, common_system, df_apply
from .errors import AnsatzCeiling, PreconditionViolated
from .field import RationalFunction, poly_lcm, poly_ring
from .linalg import independent_rows_mod_p, integer_kernel, rank_mod_p
from .ore import Key, WeylOperator, monomials_in, weyl_mul
from .parsing import generator_name, name_index

log = logging.getLogger(__name__)

PRIME = 4611686018427387847


@dataclass
class AnsatzOptions:
    ceiling: int = 12
    max_matrix_entries: int = 15_000_000
    time_limit: float | None = None
    allow_small_generator_set: bool = False


@dataclass
class AnsatzResult:
    operator: WeylOperator
    degree: int
    unknowns: int
    equations: int
    rank: int
    seconds: float
    history: list[dict] = field(default_factory=list)


def _key_of(n: int, names: Sequence[str], exps: Sequence[int]) -> Key:
    key = [0] * (2 * n + 2)
    for name, e in zip(names, exps):
        kind, v = name_index(name)
        key[v if kind == "var" else n + 1 + v] += e
    return tuple(key)


def ansatz_monomials(n: int, names: Sequence[str], degree: int) -> list[Key]:
    """Monomials of total degree <= degree, graded, lex within a degree."""
    out = []
    for d in range(degree + 1):
        for exps in monomials_in(names, d):
            out.append(_key_of(n, names, exps))
    return out


def validate_generators(n: int, names: Iterable[str]) -> list[str]:
    seen: list[str] = []
    for name in names:
        kind, v = name_index(name)
        if v > n:
            raise PreconditionViolated(f"generator {name} is outside the ring with n={n}")
        canonical = generator_name(kind, v)
        if canonical not in seen:
            seen.append(canonical)
    return seen


class _Derivatives:
    """Cached coordinate vectors of D^b f."""

    def __init__(self, f: DFiniteElement) -> None:
        self.f = f
        self.n1 = f.n + 1
        self.table: dict[tuple[int, ...], list[RationalFunction]] = {(0,) * self.n1: list(f.coords)}

    def get(self, b: tuple[int, ...]) -> list[RationalFunction]:
        hit = self.table.get(b)
        if hit is not None:
            return hit
        u = max(i for i, e in enumerate(b) if e)
        prev = list(b)
        prev[u] -= 1
        vec = self.f.system.derive(self.get(tuple(prev)), u)
        self.table[b] = vec
        return vec


def _build_rows(
    n: int, cols: list[Key], caches: list[_Derivatives]
) -> list[dict[int, int]]:
    ctx = poly_ring(n)
    gens = ctx.gens()
    n1 = n + 1
    rows: dict[tuple, dict[int, flint.fmpq]] = {}
    for fi, cache in enumerate(caches):
        dim = cache.f.system.dim
        vecs = [cache.get(k[n1:]) for k in cols]
        for i in range(dim):
            entries = [(j, v[i]) for j, v in enumerate(vecs) if not v[i].is_zero()]
            if not entries:
                continue
            den = ctx.constant(1)
            for _, c in entries:
                if not c.den.is_constant():
                    den = poly_lcm(den, c.den)
            for j, c in entries:
                mono = ctx.constant(1)
                for v, e in enumerate(cols[j][:n1]):
                    if e:
                        mono = mono * gens[v] ** e
                poly = c.num * (den / c.den) * mono
                for exps, coeff in poly.terms():
                    rows.setdefault((fi, i, tuple(exps)), {})[j] = coeff
    out = []
    for key in sorted(rows):
        r = rows[key]
        scale = 1
        for c in r.values():
            scale = lcm(scale, int(c.q))
        out.append({j: int(c.p) * (scale // int(c.q)) for j, c in r.items()})
    return out


def _row_dot(row: dict[int, int], vec: dict[int, int]) -> int:
    return sum(c * vec.get(j, 0) for j, c in row.items())


def elimination_search(
    fs: Sequence[DFiniteElement],
    S: Sequence[str],
    options: AnsatzOptions | None = None,
) -> AnsatzResult:
    """Nonzero T in Q<S> with T(f) = 0 for every f in fs."""
    opts = options or AnsatzOptions()
    if not fs:
        raise ValueError("need at least one element")
    n = fs[0].n
    names = validate_generators(n, S)
    if len(names) <= n + 1 and not opts.allow_small_generator_set:
        raise PreconditionViolated(
            f"{len(names)} generators for n={n}; more than {n + 1} are needed for termination"
        )
    start = time.monotonic()
    sysm = common_system(fs)
    elems = [f.promote(sysm) for f in fs if not f.is_zero()]
    if not elems:
        dt = WeylOperator.generator(n, "Dt")
        return AnsatzResult(dt, 1, 0, 0, 0, 0.0)
    caches = [_Derivatives(f) for f in elems]
    history: list[dict] = []
    for D in range(1, opts.ceiling + 1):
        elapsed = time.monotonic() - start
        if opts.time_limit is not None and elapsed > opts.time_limit:
            raise AnsatzCeiling(
                f"time limit reached before degree {D}",
                {"degree": D - 1, "seconds": elapsed, "history": history},
            )
        cols = ansatz_monomials(n, names, D)
        rows = _build_rows(n, cols, caches)
        info = {"degree": D, "unknowns": len(cols), "equations": len(rows)}
        if len(rows) * len(cols) > opts.max_matrix_entries:
            info["seconds"] = time.monotonic() - start
            history.append(info)
            raise AnsatzCeiling(
                f"linear system at degree {D} has {len(rows)} x {len(cols)} entries, above the size guard",
                {"degree": D, "unknowns": len(cols), "equations": len(rows), "history": history},
            )
        rank = rank_mod_p(rows, len(cols), PRIME)
        info["rank_mod_p"] = rank
        history.append(info)
        log.debug("ansatz degree %d: %d unknowns, %d equations, rank %d", D, len(cols), len(rows), rank)
        if rank == len(cols):
            continue
        picked = independent_rows_mod_p(rows, len(cols), PRIME)
        kernel = integer_kernel([rows[i] for i in picked], len(cols))
        vec = _choose(kernel)
        if any(_row_dot(r, vec) for r in rows):
            # unlucky prime: redo exactly with every row
            kernel = integer_kernel(rows, len(cols))
            if not kernel:
                continue
            vec = _choose(kernel)
        T = WeylOperator(n, {cols[j]: flint.fmpq(c) for j, c in vec.items() if c})
        for f in elems:
            assert df_apply(T, f).is_zero(), "annihilator failed verification"
        return AnsatzResult(T, D, len(cols), len(rows), rank, time.monotonic() - start, history)
    raise AnsatzCeiling(
        f"no annihilator up to degree {opts.ceiling}",
        {"degree": opts.ceiling, "history": history},
    )


def _choose(kernel: list[dict[int, int]]) -> dict[int, int]:
    best = min(kernel, key=lambda v: sum(1 for c in v.values() if c))
    g = 0
    for c in best.values():
        g = gcd(g, c)
    return {j: c // g for j, c in best.items() if c}


def eliminating_annihilator(
    fs: Sequence[DFiniteElement], S: Sequence[str], options: AnsatzOptions | None = None
) -> WeylOperator:
    return elimination_search(fs, S, options).operator


@dataclass
class NormalForm:
    """L + sum_i Dx_i M_i + sum_j N_j Dx_j annihilating the inputs."""

    L: WeylOperator
    M: dict[int, WeylOperator]
    N: dict[int, WeylOperator]
    T: WeylOperator
    alpha: int
    beta: int
    d_bar: tuple[int, ...]
    e_bar: tuple[int, ...]
    search: AnsatzResult | None = None

    def assembled(self) -> WeylOperator:
        n = self.L.n
        out = self.L
        for i, m in self.M.items():
            out = out + weyl_mul(WeylOperator.generator(n, f"Dx{i}"), m)
        for j, nj in self.N.items():
            out = out + weyl_mul(nj, WeylOperator.generator(n, f"Dx{j}"))
        return out


def _content_normalize(op: WeylOperator) -> WeylOperator:
    """Scale to coprime integer coefficients with a positive leading term."""
    if op.is_zero():
        return op
    den = 1
    for c in op.terms.values():
        den = lcm(den, int(c.q))
    nums = [int(c.p) * (den // int(c.q)) for c in op.terms.values()]
    g = 0
    for v in nums:
        g = gcd(g, v)
    lead = op.sorted_terms()[0][1]
    scale = flint.fmpq(den, g) * (1 if lead > 0 else -1)
    return op.scale(scale)


def normal_form_annihilator(
    fs: Sequence[DFiniteElement],
    I: Sequence[int],
    J: Sequence[int],
    V: Sequence[str],
    options: AnsatzOptions | None = None,
) -> NormalForm:
    if not fs:
        raise ValueError("need at least one element")
    n = fs[0].n
    I = sorted(set(I))
    J = sorted(set(J))
    if set(I) & set(J):
        raise PreconditionViolated("index sets I and J must be disjoint")
    V = validate_generators(n, V)
    for name in V:
        _, v = name_index(name)
        if v == 0 or v in I or v in J:
            raise PreconditionViolated(f"generator {name} in V must belong to an index outside I and J")
    if all(f.is_zero() for f in fs):
        return NormalForm(WeylOperator.generator(n, "Dt"), {}, {}, WeylOperator.generator(n, "Dt"), 1, 1, (), ())
    S = ["t", "Dt"] + [f"Dx{i}" for i in I] + [f"x{j}" for j in J] + list(V)
    search = elimination_search(fs, S, options)
    T = search.operator

    # expose the I-part: T = sum_d T_d Dx_I^d; multiply by x_I^{d_bar}, d_bar lex-minimal
    def der_exp(key: Key) -> tuple[int, ...]:
        return tuple(key[n + 1 + i] for i in I)

    d_bar = min(der_exp(k) for k in T.terms) if I else ()
    alpha = 1
    for e in d_bar:
        alpha *= (-1) ** e * factorial(e)
    x_mult = WeylOperator.one(n)
    for i, e in zip(I, d_bar):
        x_mult = weyl_mul(x_mult, WeylOperator.generator(n, f"x{i}", e))
    A = weyl_mul(x_mult, T)
    M: dict[int, WeylOperator] = {}
    for i in I:
        A, Mi = A.split_left_derivation(i)
        if not Mi.is_zero():
            M[i] = Mi
    # A = alpha * T_{d_bar}, free of x_I and Dx_I
    assert not A.generators() & ({f"x{i}" for i in I} | {f"Dx{i}" for i in I})

    # expose the J-part: A = sum_e x_J^e A_e; multiply by Dx_J^{e_bar}, e_bar lex-maximal
    e_bar = max(tuple(k[j] for j in J) for k in A.terms) if J else ()
    beta = 1
    for e in e_bar:
        beta *= factorial(e)
    d_mult = WeylOperator.one(n)
    for j, e in zip(J, e_bar):
        d_mult = weyl_mul(d_mult, WeylOperator.generator(n, f"Dx{j}", e))
    B = weyl_mul(d_mult, A)
    N: dict[int, WeylOperator] = {}
    for j in J:
        B, Nj = B.split_right_derivation(j)
        if not Nj.is_zero():
            N[j] = Nj
    L = B
    if e_bar and any(e_bar):
        M = {i: weyl_mul(d_mult, m) for i, m in M.items()}
    assert not L.is_zero()
    assert L.lies_in({"t", "Dt"} | set(V)), f"unexpected support {L.generators()}"
    return NormalForm(L, M, N, T, alpha, beta, tuple(d_bar), tuple(e_bar), search)


def compatible_annihilator(
    fs: Sequence[DFiniteElement],
    J: Sequence[int],
    V: Sequence[str],
    options: AnsatzOptions | None = None,
) -> WeylOperator:
    """Nonzero L in Q<t, Dt, V> with L(f) = 0, assuming Dx_j f = 0 for j in J."""
    for f in fs:
        for j in J:
            if not f.derivative(j).is_zero():
                raise PreconditionViolated(f"an input depends on x{j}")
    nf = normal_form_annihilator(fs, [], J, V, options)
    return _content_normalize(nf.L)
