"""Deciding whether P in K<Dt> right-divides a nonzero operator free of x.

The completely reducible case goes through a specialization x = c: P is
separable exactly when it is similar to P_c by an operator with
semisplit coefficients. Similarity data come from the mixed equation
P Q = 0 mod P_c, solved by undetermined coefficients. The general case
peels irreducible right factors one at a time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import flint

from .errors import DenominatorVanishes, EmptyGrid, UnsupportedOperation
from .field import (
    Poly,
    RationalFunction,
    poly_coefficients_in,
    poly_coefficients_over,
    poly_degree_in,
    poly_lcm,
    poly_ring,
    poly_split_decompose,
    rf_is_semisplit,
)
from .linalg import rf_nullspace
from .ore import (
    OreOperator,
    ore_lclm_many,
    ore_rrem,
    ore_transform,
)

# ---------------------------------------------------------------------------
# configuration and results


@dataclass
class SeparabilityOptions:
    mixed_bound: int = 8
    riccati_bound: int = 6
    denominator_power_cap: int = 3
    grid_radius: int = 6
    accept_bound_negatives: bool = False
    hints: list[OreOperator] = field(default_factory=list)


@dataclass
class MixedSolutionBasis:
    P: OreOperator
    P_c: OreOperator
    point: tuple[int, ...]
    solutions: list[OreOperator]
    denominator: Poly
    bound: int
    complete: bool

    @property
    def dimension(self) -> int:
        return len(self.solutions)


@dataclass
class SeparabilityVerdict:
    status: str  # "separable", "not separable", "unknown"
    L: OreOperator | None = None
    similarity: OreOperator | None = None
    provenance: dict = field(default_factory=dict)

    @property
    def separable(self) -> bool | None:
        if self.status == "separable":
            return True
        if self.status == "not separable":
            return False
        return None


# ---------------------------------------------------------------------------
# helpers on polynomials in t over Q(x)


def _t_content_free(p: Poly) -> Poly:
    """Remove the factor of p that is free of t (a unit over Q(x))."""
    dec = poly_split_decompose(p)
    return dec.t_part * dec.mixed


def _squarefree_t(p: Poly) -> Poly:
    if poly_degree_in(p, 0) <= 0:
        return p.context().constant(1)
    g = p.gcd(p.derivative(0))
    out = p / g
    return out / out.leading_coefficient()


def _pseudo_remainder(p: Poly, q: Poly, steps: int) -> Poly:
    """lc(q)^steps * p mod q, division in t with coefficients in Q[x]."""
    ctx = p.context()
    dq = poly_degree_in(q, 0)
    qc = poly_coefficients_in(q, 0)
    lc = qc[dq]
    t = ctx.gens()[0]
    r = p
    for _ in range(steps):
        dr = poly_degree_in(r, 0)
        if dr < dq:
            r = r * lc
            continue
        top = poly_coefficients_in(r, 0)[dr]
        r = r * lc - top * t ** (dr - dq) * q
    return r


def _singular_denominator(ops: Sequence[OreOperator]) -> Poly:
    """Squarefree t-dependent part of the lcm of all coefficient denominators."""
    ctx = poly_ring(ops[0].n)
    den = ctx.constant(1)
    for op in ops:
        for c in op.coeffs:
            if not c.den.is_constant():
                den = poly_lcm(den, c.den)
    return _squarefree_t(_t_content_free(den))


def _monomial_t(n: int, j: int) -> RationalFunction:
    return RationalFunction.var(n, 0) ** j


# ---------------------------------------------------------------------------
# specialization


def grid_points(m: int, radius: int) -> Iterator[tuple[int, ...]]:
    """Points of {0..radius}^m ordered by max-norm, then lexicographically."""
    if m == 0:
        yield ()
        return
    for r in range(radius + 1):
        for pt in itertools.product(range(r + 1), repeat=m):
            if max(pt) == r:
                yield pt


def specialization_point(P: OreOperator, radius: int) -> tuple[dict[int, int], OreOperator]:
    n = P.n
    for pt in grid_points(n, radius):
        point = {i + 1: c for i, c in enumerate(pt)}
        try:
            return point, P.specialize(point)
        except DenominatorVanishes:
            continue
    raise EmptyGrid(f"every point of the grid of radius {radius} kills a denominator")


# ---------------------------------------------------------------------------
# mixed equation


def mixed_solve(
    P: OreOperator,
    point: dict[int, int],
    bound: int = 8,
    denominator_power_cap: int = 3,
) -> MixedSolutionBasis:
    """Solutions Q of order < ord P_c with P Q = 0 mod P_c, by ansatz.

    Coefficients are sought in the form N(t)/r^k where r is the squarefree
    t-dependent part of all denominators of P and P_c, k is the power cap
    and deg_t N <= bound + k deg_t r. Unknowns range over Q(x).
    """
    P = P.monic()
    n = P.n
    P_c = P.specialize(point).monic()
    order = P_c.order
    r = _singular_denominator([P, P_c])
    den = r**denominator_power_cap
    top = bound + poly_degree_in(den, 0)
    den_rf = RationalFunction(den)
    unknowns: list[tuple[int, int]] = [(i, j) for i in range(order) for j in range(top + 1)]
    remainders = []
    for i, j in unknowns:
        coeff = _monomial_t(n, j) / den_rf
        Q = OreOperator([RationalFunction.zero(n)] * i + [coeff], n)
        remainders.append(ore_rrem(P * Q, P_c))
    rows: list[list[RationalFunction]] = []
    ctx = poly_ring(n)
    for m in range(order):
        entries = [R.coeff(m) for R in remainders]
        if all(e.is_zero() for e in entries):
            continue
        common = ctx.constant(1)
        for e in entries:
            if not e.is_zero() and not e.den.is_constant():
                common = poly_lcm(common, e.den)
        by_power: dict[int, dict[int, Poly]] = {}
        for k, e in enumerate(entries):
            if e.is_zero():
                continue
            num = e.num * (common / e.den)
            for power, c in poly_coefficients_in(num, 0).items():
                by_power.setdefault(power, {})[k] = c
        for power in sorted(by_power):
            row = [RationalFunction.zero(n)] * len(unknowns)
            for k, c in by_power[power].items():
                row[k] = RationalFunction(c)
            rows.append(row)
    kernel = rf_nullspace(rows, len(unknowns), n)
    solutions = []
    for vec in kernel:
        vec = _clear_x_denominators(vec, ctx)
        coeffs = [RationalFunction.zero(n)] * order
        for (i, j), z in zip(unknowns, vec):
            if not z.is_zero():
                coeffs[i] = coeffs[i] + z * _monomial_t(n, j)
        Q = OreOperator([c / den_rf for c in coeffs], n)
        assert ore_rrem(P * Q, P_c).is_zero()
        solutions.append(Q)
    return MixedSolutionBasis(
        P, P_c, tuple(point[i] for i in sorted(point)), solutions, den, bound,
        complete=len(solutions) == P.order * P_c.order,
    )


def _clear_x_denominators(vec: list[RationalFunction], ctx) -> list[RationalFunction]:
    common = ctx.constant(1)
    for z in vec:
        if not z.is_zero() and not z.den.is_constant():
            common = poly_lcm(common, z.den)
    if common.is_constant():
        return vec
    scale = RationalFunction(common)
    return [z * scale for z in vec]


# ---------------------------------------------------------------------------
# semisplit solutions


def semisplit_subspace(basis: MixedSolutionBasis | Sequence[OreOperator]) -> list[OreOperator]:
    """Basis of the Q(x)-span of solutions whose coefficients are semisplit."""
    sols = list(basis.solutions if isinstance(basis, MixedSolutionBasis) else basis)
    if not sols:
        return []
    n = sols[0].n
    ctx = poly_ring(n)
    order = max(Q.order for Q in sols) + 1
    q = ctx.constant(1)
    for Q in sols:
        for c in Q.coeffs:
            if not c.is_zero() and not c.den.is_constant():
                q = poly_lcm(q, c.den)
    q1 = poly_split_decompose(q).mixed
    if q1.is_constant():
        return sols
    # numerators over the common denominator
    nums = []
    for Q in sols:
        row = []
        for i in range(order):
            c = Q.coeff(i)
            row.append(c.num * (q / c.den) if not c.is_zero() else ctx.from_dict({}))
        nums.append(row)
    dq = poly_degree_in(q1, 0)
    top = max((poly_degree_in(p, 0) for row in nums for p in row), default=0)
    steps = max(0, top - dq + 1)
    rems = [[_pseudo_remainder(p, q1, steps) if not p.is_zero() else p for p in row] for row in nums]
    rows: list[list[RationalFunction]] = []
    for i in range(order):
        by_power: dict[int, dict[int, Poly]] = {}
        for k, row in enumerate(rems):
            if row[i].is_zero():
                continue
            for power, c in poly_coefficients_in(row[i], 0).items():
                by_power.setdefault(power, {})[k] = c
        for power in sorted(by_power):
            r = [RationalFunction.zero(n)] * len(sols)
            for k, c in by_power[power].items():
                r[k] = RationalFunction(c)
            rows.append(r)
    kernel = rf_nullspace(rows, len(sols), n)
    out = []
    for vec in kernel:
        vec = _clear_x_denominators(vec, ctx)
        Q = OreOperator.zero(n)
        for z, S in zip(vec, sols):
            if not z.is_zero():
                Q = Q + S.scale_left(z)
        assert all(rf_is_semisplit(c) for c in Q.coeffs)
        out.append(Q)
    return out


# ---------------------------------------------------------------------------
# the matrix A(z)

LinearForm = tuple[RationalFunction, ...]


def _lf_add(a: LinearForm, b: LinearForm) -> LinearForm:
    return tuple(x + y for x, y in zip(a, b))


def _lf_scale(a: LinearForm, c: RationalFunction) -> LinearForm:
    return tuple(x * c for x in a)


def build_A_matrix(ops: Sequence[OreOperator], P_c: OreOperator) -> list[list[LinearForm]]:
    """Rows l = 0..n-1 of the coefficients of D^l (sum z_k ops_k)(alpha) on alpha..alpha^(n-1).

    alpha stands for a generic solution of P_c, so alpha^(n) is rewritten
    through P_c(alpha) = 0.
    """
    P_c = P_c.monic()
    n = P_c.order
    row: list[LinearForm] = []
    for i in range(n):
        row.append(tuple(op.coeff(i) for op in ops))
    for op in ops:
        if op.order >= n:
            raise UnsupportedOperation("operators must have order below ord(P_c)")
    rows = [row]
    for _ in range(1, n):
        prev = rows[-1]
        new: list[LinearForm] = []
        last = prev[n - 1]
        for i in range(n):
            entry = tuple(c.derivative(0) for c in prev[i])
            if i >= 1:
                entry = _lf_add(entry, prev[i - 1])
            p_i = P_c.coeff(i)
            if not p_i.is_zero():
                entry = _lf_add(entry, _lf_scale(last, -p_i))
            new.append(entry)
        rows.append(new)
    return rows


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            if seen[i] > seen[j]:
                sign = -sign
    return sign


def determinant_polynomial(A: list[list[LinearForm]], ell: int, n: int) -> dict[tuple[int, ...], RationalFunction]:
    """det A(z) as a map from exponent vectors in z to coefficients."""
    size = len(A)
    out: dict[tuple[int, ...], RationalFunction] = {}
    for perm in itertools.permutations(range(size)):
        sign = _perm_sign(perm)
        terms: dict[tuple[int, ...], RationalFunction] = {(0,) * ell: RationalFunction.constant(n, sign)}
        for r in range(size):
            lf = A[r][perm[r]]
            new: dict[tuple[int, ...], RationalFunction] = {}
            for exps, c in terms.items():
                for k, a in enumerate(lf):
                    if a.is_zero():
                        continue
                    e = list(exps)
                    e[k] += 1
                    e = tuple(e)
                    new[e] = new[e] + c * a if e in new else c * a
            terms = new
            if not terms:
                break
        for e, c in terms.items():
            out[e] = out[e] + c if e in out else c
    return {e: c for e, c in out.items() if not c.is_zero()}


def find_nonsingular_point(A: list[list[LinearForm]], ell: int, n: int) -> tuple[int, ...] | None:
    size = len(A)
    if size == 0:
        return ()
    det = determinant_polynomial(A, ell, n)
    if not det:
        return None
    for pt in itertools.product(range(size * ell + 1), repeat=ell):
        val = RationalFunction.zero(n)
        for exps, c in det.items():
            m = 1
            for a, e in zip(pt, exps):
                m *= a**e
            if m:
                val = val + c * m
        if not val.is_zero():
            return pt
    raise AssertionError("grid must contain a nonsingular point of a nonzero determinant")


# ---------------------------------------------------------------------------
# assembling the x-free operator


def split_terms(f: RationalFunction) -> list[tuple[RationalFunction, RationalFunction]]:
    """f = sum h(x) beta(t) for a semisplit f; returns the (h, beta) pairs."""
    if f.is_zero():
        return []
    dec = poly_split_decompose(f.den)
    if not dec.is_split:
        raise UnsupportedOperation("coefficient is not semisplit")
    xp = RationalFunction(dec.x_part) * RationalFunction.constant(f.n, dec.constant * dec.mixed.leading_coefficient())
    tp = RationalFunction(dec.t_part)
    out = []
    groups = poly_coefficients_over(f.num, [0])
    for xexp, u in sorted(groups.items()):
        mono = f.ctx.from_dict({(0,) + tuple(xexp): 1})
        out.append((RationalFunction(mono) / xp, RationalFunction(u) / tp))
    return out


def _rational_basis(betas: Sequence[RationalFunction]) -> list[RationalFunction]:
    """A Q-basis of the span of x-free rational functions."""
    if not betas:
        return []
    n = betas[0].n
    ctx = poly_ring(n)
    common = ctx.constant(1)
    for b in betas:
        if not b.den.is_constant():
            common = poly_lcm(common, b.den)
    vecs = []
    for b in betas:
        num = b.num * (common / b.den)
        vecs.append({tuple(e): c for e, c in num.terms()})
    monos = sorted({m for v in vecs for m in v}, reverse=True)
    M = flint.fmpq_mat(len(vecs), len(monos))
    for i, v in enumerate(vecs):
        for j, m in enumerate(monos):
            if m in v:
                M[i, j] = v[m]
    R, rank = M.rref()
    basis = []
    for i in range(rank):
        poly = ctx.from_dict({monos[j]: R[i, j] for j in range(len(monos)) if R[i, j] != 0})
        basis.append(RationalFunction(poly) / RationalFunction(common))
    return basis


def assemble_L(b: Sequence[RationalFunction], P_c: OreOperator) -> OreOperator:
    """lclm over i, beta of monic(L_i * (1/beta)) with L_i the i-th transformation of P_c by Dt."""
    P_c = P_c.monic()
    n = P_c.n
    betas_by_order: dict[int, list[RationalFunction]] = {}
    for i, c in enumerate(b):
        if c.is_zero():
            continue
        betas_by_order[i] = _rational_basis([beta for _, beta in split_terms(c)])
    if not betas_by_order:
        raise ValueError("the similarity operator is zero")
    Ls = [P_c]
    dt = OreOperator.derivation(n)
    for _ in range(max(betas_by_order)):
        Ls.append(ore_transform(Ls[-1], dt))
    pieces = []
    for i in sorted(betas_by_order):
        for beta in betas_by_order[i]:
            pieces.append((Ls[i] * OreOperator.scalar(beta.inverse())).monic())
    return ore_lclm_many(pieces)


# ---------------------------------------------------------------------------
# Algorithm for completely reducible operators


def separable_completely_reducible(P: OreOperator, options: SeparabilityOptions | None = None) -> SeparabilityVerdict:
    opts = options or SeparabilityOptions()
    P = P.monic()
    prov: dict = {"operator": str(P), "mixed_bound": opts.mixed_bound, "denominator_power_cap": opts.denominator_power_cap}
    if P.is_x_free():
        prov["reason"] = "operator is free of x"
        return SeparabilityVerdict("separable", P, OreOperator.one(P.n), prov)
    point, P_c = specialization_point(P, opts.grid_radius)
    prov["point"] = [point[i] for i in sorted(point)]
    basis = mixed_solve(P, point, opts.mixed_bound, opts.denominator_power_cap)
    prov["mixed_dimension"] = basis.dimension
    prov["mixed_complete"] = basis.complete
    sub = semisplit_subspace(basis)
    prov["semisplit_dimension"] = len(sub)
    negative = "not separable" if basis.complete or opts.accept_bound_negatives else "unknown"
    if not sub:
        prov["reason"] = "no semisplit solution of the mixed equation"
        return SeparabilityVerdict(negative, None, None, prov)
    A = build_A_matrix(sub, P_c)
    a = find_nonsingular_point(A, len(sub), P.n)
    if a is None:
        prov["reason"] = "det A(z) vanishes identically"
        return SeparabilityVerdict(negative, None, None, prov)
    prov["nonsingular_point"] = list(a)
    Q = OreOperator.zero(P.n)
    for ai, S in zip(a, sub):
        if ai:
            Q = Q + S.scale_left(RationalFunction.constant(P.n, ai))
    L = assemble_L(list(Q.coeffs), P_c)
    if not ore_rrem(L, P).is_zero():
        prov["reason"] = "assembled operator is not a left multiple of P"
        return SeparabilityVerdict("unknown", None, Q, prov)
    return SeparabilityVerdict("separable", L, Q, prov)


# ---------------------------------------------------------------------------
# right factors


@dataclass
class RightFactor:
    factor: OreOperator
    certified_irreducible: bool
    source: str


def _riccati_condition(P: OreOperator, a: RationalFunction) -> RationalFunction:
    """Remainder of P right-divided by Dt - a (a scalar)."""
    R = RationalFunction.one(P.n)
    total = RationalFunction.zero(P.n)
    for i, p in enumerate(P.coeffs):
        if i:
            R = R.derivative(0) + a * R
        if not p.is_zero():
            total = total + p * R
    return total


def _sympy_riccati(P: OreOperator, den: Poly, degree: int) -> list[RationalFunction]:
    """Rational a = N/den with deg_t N <= degree solving the Riccati condition."""
    import sympy

    n = P.n
    names = ["t"] + [f"x{i}" for i in range(1, n + 1)]
    syms = sympy.symbols(" ".join(names))
    syms = syms if isinstance(syms, tuple) else (syms,)
    t = syms[0]
    xs = syms[1:]
    zs = sympy.symbols(" ".join(f"z{j}" for j in range(degree + 1)))
    zs = zs if isinstance(zs, tuple) else (zs,)
    local = dict(zip(names, syms))

    def to_sym(f: RationalFunction):
        num = sympy.sympify(str(f.num).replace("^", "**") if not f.num.is_zero() else "0", locals=local)
        dd = sympy.sympify(str(f.den).replace("^", "**"), locals=local)
        return num / dd

    a = sum(z * t**j for j, z in enumerate(zs)) / sympy.sympify(str(den).replace("^", "**"), locals=local)
    R = sympy.Integer(1)
    total = sympy.Integer(0)
    for i, p in enumerate(P.coeffs):
        if i:
            R = sympy.together(sympy.diff(R, t) + a * R)
        if not p.is_zero():
            total = total + to_sym(p) * R
    num, _ = sympy.fraction(sympy.together(total))
    poly = sympy.Poly(sympy.expand(num), t)
    eqs = [c for c in poly.coeffs() if c != 0]
    if not eqs:
        return [RationalFunction.zero(n)]
    domain = sympy.QQ.frac_field(*xs) if xs else sympy.QQ
    try:
        G = sympy.groebner(eqs, *reversed(zs), order="lex", domain=domain)
    except Exception:
        return []
    if list(G.exprs) == [1]:
        return []
    out = []
    for sol in _solve_triangular(list(G.exprs), list(reversed(zs)), domain):
        value = a.subs(sol)
        value = sympy.together(value)
        text = str(value).replace("**", "^")
        from .field import parse_expression

        try:
            out.append(parse_expression(text, n))
        except Exception:
            continue
    return out


def _solve_triangular(G: list, zs: list, domain) -> Iterator[dict]:
    """Rational points of a lex Groebner basis; free variables are set to 0."""
    import sympy

    def rec(k: int, assignment: dict) -> Iterator[dict]:
        if k < 0:
            yield dict(assignment)
            return
        z = zs[k]
        later = set(zs[:k])
        polys = []
        for g in G:
            g2 = sympy.together(sympy.sympify(g).subs(assignment))
            if g2 == 0:
                continue
            free = g2.free_symbols
            if z in free and not (free & later):
                polys.append(g2)
            elif not (free & (later | {z})) and g2 != 0:
                if sympy.simplify(g2) != 0:
                    return
        if not polys:
            assignment[z] = sympy.Integer(0)
            yield from rec(k - 1, assignment)
            del assignment[z]
            return
        num = sympy.fraction(sympy.together(polys[0]))[0]
        roots = []
        try:
            for fac, _ in sympy.factor_list(sympy.Poly(num, z, domain=domain))[1]:
                if fac.degree() == 1:
                    c1, c0 = fac.all_coeffs()
                    roots.append(domain.to_sympy(-c0 / c1) if hasattr(domain, "to_sympy") else -c0 / c1)
        except Exception:
            return
        for root in roots:
            assignment[z] = root
            yield from rec(k - 1, assignment)
            del assignment[z]

    yield from rec(len(zs) - 1, {})


def irreducible_right_factor(P: OreOperator, options: SeparabilityOptions | None = None) -> RightFactor:
    """A right factor of P that the baseline cannot split further."""
    opts = options or SeparabilityOptions()
    P = P.monic()
    if P.order <= 1:
        return RightFactor(P, True, "order one")
    for H in opts.hints:
        if H.n == P.n and 1 <= H.order < P.order and ore_rrem(P, H).is_zero():
            inner = irreducible_right_factor(H, SeparabilityOptions(**{**opts.__dict__, "hints": []}))
            return RightFactor(inner.factor, inner.certified_irreducible, "hint")
    n = P.n
    dt = OreOperator.derivation(n)
    if P.coeff(0).is_zero():
        return RightFactor(dt, True, "a = 0")
    r = _singular_denominator([P])
    for k in range(0, opts.denominator_power_cap + 1):
        den = r**k
        top = opts.riccati_bound + poly_degree_in(den, 0) if k else opts.riccati_bound
        for degree in range(top + 1):
            for a in _sympy_riccati(P, den, degree):
                if _riccati_condition(P, a).is_zero():
                    return RightFactor(OreOperator([-a, RationalFunction.one(n)], n), True, "riccati")
    return RightFactor(P, False, "no order-one factor within bounds")


# ---------------------------------------------------------------------------
# Algorithm for general operators


def is_separable(P: OreOperator, options: SeparabilityOptions | None = None) -> SeparabilityVerdict:
    opts = options or SeparabilityOptions()
    P = P.monic()
    n = P.n
    steps: list[dict] = []
    prov: dict = {"operator": str(P), "steps": steps}
    if P.order == 0:
        return SeparabilityVerdict("separable", OreOperator.one(n), None, prov)
    if P.is_x_free():
        prov["reason"] = "operator is free of x"
        return SeparabilityVerdict("separable", P, None, prov)
    rest = P
    factors: list[OreOperator] = []
    complete = True
    while rest.order > 0:
        if rest.is_x_free():
            factors.append(rest)
            steps.append({"factor": str(rest), "reason": "free of x"})
            break
        rf = irreducible_right_factor(rest, opts)
        step: dict = {"right_factor": str(rf.factor), "irreducible": rf.certified_irreducible, "source": rf.source}
        steps.append(step)
        complete = complete and rf.certified_irreducible
        v = separable_completely_reducible(rf.factor, opts)
        step["verdict"] = v.status
        step["details"] = v.provenance
        if v.status != "separable":
            definite = v.status == "not separable" and rf.certified_irreducible
            if definite or (v.status == "not separable" and opts.accept_bound_negatives):
                prov["reason"] = "a right factor is not separable"
                return SeparabilityVerdict("not separable", None, None, prov)
            prov["reason"] = "a right factor could not be decided within bounds"
            return SeparabilityVerdict("unknown", None, None, prov)
        L0 = v.L
        factors.append(L0)
        rest = ore_transform(rest, L0)
        step["remaining"] = str(rest)
    L = OreOperator.one(n)
    for F in factors:
        L = F * L
    L = L.monic()
    if not ore_rrem(L, P).is_zero():
        prov["reason"] = "assembled operator failed the division check"
        return SeparabilityVerdict("unknown", None, None, prov)
    prov["factorization_certified"] = complete
    return SeparabilityVerdict("separable", L, None, prov)
