"""Telescopers for closed forms with certificates.

:func:`telescope_closed` takes a form with d_s(omega) = 0 and returns a
nonzero L in Q<t, Dt, V> together with mu such that L(omega) = d_s(mu).
The recursion splits off dx_s, handles the dx_s-free part at level s-1
with x_s adjoined, removes x_s from that operator, then handles the
corrected dx_s-coefficient with Dx_s adjoined and removes Dx_s.

Write p = deg(omega), omega = u ^ dx_s + v. Closedness gives
Dx_s(v) = (-1)^(p-1) d_{s-1}(u). With L~(v) = d_{s-1}(mu~) and
Dx_s^d L~ = a N + N~ Dx_s (a = d!), put

    pi = (Dx_s^d mu~ - (-1)^(p-1) N~(u)) / a
    u' = N(u) - (-1)^(p-1) Dx_s(pi)

so that N(omega) = u' ^ dx_s + d_s(pi) and d_{s-1}(u') = 0. With
L-(u') = d_{s-1}(mu-) and x_s^e L- = b M + Dx_s M~ (b = (-1)^e e!):

    L  = b M N
    mu = x_s^e mu- ^ dx_s + (-1)^p M~(u') + b M(pi)
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

import flint

from .ansatz import AnsatzOptions, compatible_annihilator
from .errors import PreconditionViolated
from .field import RationalFunction
from .forms import DifferentialForm, d_s, involves, op_apply_form, split_top, wedge_dx
from .ore import WeylOperator, weyl_mul
from .parsing import name_index


@dataclass
class RecursionStats:
    engine_calls: int = 0
    max_depth: int = 0
    seconds: float = 0.0
    calls: list[dict] = field(default_factory=list)


@dataclass
class Certificate:
    """L(omega) = d_s(mu) with L in Q<t, Dt, V>."""

    L: WeylOperator
    mu: DifferentialForm
    level: int
    V: tuple[str, ...] = ()
    stats: RecursionStats | None = None


def _check_V(n: int, s: int, V: Sequence[str]) -> list[str]:
    out = []
    for name in V:
        _, v = name_index(name)
        if v <= s or v > n:
            raise PreconditionViolated(f"generator {name} must belong to an index above {s}")
        out.append(name)
    if len(out) != n - s:
        raise PreconditionViolated(f"V must have exactly {n - s} generators, got {len(out)}")
    return out


def telescope_closed(
    omega: DifferentialForm,
    s: int,
    V: Sequence[str] = (),
    options: AnsatzOptions | None = None,
    check_closed: bool = True,
) -> Certificate:
    n = omega.n
    V = _check_V(n, s, V)
    if check_closed and not d_s(omega, s).is_zero():
        raise PreconditionViolated(f"the form is not closed at level {s}")
    stats = RecursionStats()
    start = time.monotonic()
    L, mu = _closed(omega, s, list(V), options, stats, 0)
    stats.seconds = time.monotonic() - start
    cert = Certificate(L, mu, s, tuple(V), stats)
    if not certificate_verify(cert, omega):
        raise AssertionError("constructed certificate does not verify")
    return cert


def _zero_witness(omega: DifferentialForm) -> DifferentialForm:
    return DifferentialForm.zero(omega.n, omega.degree - 1, omega.system)


def _closed(
    omega: DifferentialForm,
    s: int,
    V: list[str],
    options: AnsatzOptions | None,
    stats: RecursionStats,
    depth: int,
) -> tuple[WeylOperator, DifferentialForm]:
    n = omega.n
    p = omega.degree
    stats.max_depth = max(stats.max_depth, depth)
    if omega.is_zero():
        return WeylOperator.one(n), _zero_witness(omega)
    if p == 0 or s == 0:
        J = list(range(1, s + 1)) if p == 0 else []
        fs = list(omega.terms.values())
        stats.engine_calls += 1
        t0 = time.monotonic()
        L = compatible_annihilator(fs, J, V, options)
        stats.calls.append({"level": s, "degree": p, "V": list(V), "seconds": time.monotonic() - t0, "L_terms": len(L.terms)})
        return L, _zero_witness(omega)

    sign = -1 if (p - 1) % 2 else 1  # (-1)^(p-1)
    u, v = split_top(omega, s)
    xs, dxs = f"x{s}", f"Dx{s}"

    # dx_s-free part, with x_s available
    Lt, mut = _closed(v, s - 1, V + [xs], options, stats, depth + 1)
    parts = Lt.collect_variable(s)
    d = max(parts)
    N = parts[d]
    alpha = factorial(d)
    A = weyl_mul(WeylOperator.generator(n, dxs, d), Lt)
    A0, Ntil = A.split_right_derivation(s)
    assert A0 == N.scale(alpha)
    pi = op_apply_form(WeylOperator.generator(n, dxs, d), mut)
    if sign > 0:
        pi = pi - op_apply_form(Ntil, u)
    else:
        pi = pi + op_apply_form(Ntil, u)
    pi = pi.scale(RationalFunction.constant(n, flint.fmpq(1, alpha)))
    assert not involves(pi, s)

    u2 = op_apply_form(N, u)
    corr = op_apply_form(WeylOperator.generator(n, dxs), pi)
    u2 = u2 - corr if sign > 0 else u2 + corr

    # corrected dx_s-coefficient, with Dx_s available
    Lb, mub = _closed(u2, s - 1, V + [dxs], options, stats, depth + 1)
    parts = Lb.collect_derivation(s)
    e = min(parts)
    M = parts[e]
    beta = (-1) ** e * factorial(e)
    B = weyl_mul(WeylOperator.generator(n, xs, e), Lb)
    B0, Mtil = B.split_left_derivation(s)
    assert B0 == M.scale(beta)

    L = weyl_mul(M, N).scale(beta)
    mu = wedge_dx(op_apply_form(WeylOperator.generator(n, xs, e), mub), s)
    tail = op_apply_form(Mtil, u2)
    mu = mu + (tail if p % 2 == 0 else -tail)
    mu = mu + op_apply_form(M, pi).scale(RationalFunction.constant(n, beta))
    return L, mu


def certificate_verify(cert: Certificate, omega: DifferentialForm) -> bool:
    """Exact check of L != 0, support of L, and L(omega) = d_s(mu)."""
    L, mu = cert.L, cert.mu
    if L.is_zero() or L.n != omega.n:
        return False
    if not L.lies_in({"t", "Dt"} | set(cert.V)):
        return False
    if mu.degree != omega.degree - 1:
        return False
    lhs = op_apply_form(L, omega)
    rhs = d_s(mu, cert.level)
    if lhs.degree != rhs.degree:
        return lhs.is_zero() and rhs.is_zero()
    return (lhs - rhs).is_zero()
