"""End-to-end telescoper pipeline, instance/result JSON and verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .ansatz import AnsatzOptions
from .dfinite import (
    TRIVIAL_LABEL,
    DFiniteElement,
    RectangularSystem,
    block_from_strings,
    df_min_annihilator_t,
    system_from_blocks,
    trivial_block,
)
from .errors import ParseError, TelescoperError
from .field import RationalFunction, parse_expression
from .forms import DifferentialForm, d, op_apply_form
from .ore import OreOperator, ore_lclm_many, weyl_to_ore
from .poincare import Certificate, telescope_closed
from .separability import SeparabilityOptions, is_separable

SCHEMA_VERSION = 1

MINIMALITY_NOTE = (
    "annihilators are minimal within the module spanned by the declared system; "
    "a solution satisfying extra relations may admit smaller telescopers"
)


@dataclass
class ProblemInstance:
    n: int
    system: RectangularSystem
    omega: DifferentialForm
    separability: SeparabilityOptions = field(default_factory=SeparabilityOptions)
    ansatz: AnsatzOptions = field(default_factory=AnsatzOptions)

    def __post_init__(self) -> None:
        if self.omega.n != self.n:
            raise ValueError("form and instance disagree on the number of variables")
        self.omega = self.omega.promote(self.system)


@dataclass
class TelescoperResult:
    status: str  # "telescoper", "no-telescoper", "unknown"
    L: OreOperator | None = None
    mu: DifferentialForm | None = None
    provenance: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# pipeline


def _monic_with_scale(L: OreOperator) -> tuple[OreOperator, RationalFunction]:
    c = L.lc().inverse()
    return L.scale_left(c), c


def telescope_closed_form(omega: DifferentialForm, options: AnsatzOptions | None = None) -> tuple[OreOperator, DifferentialForm, Certificate]:
    """Closed form at full level: returns monic L in t, Dt and mu with L(omega) = d(mu)."""
    cert = telescope_closed(omega, omega.n, (), options)
    L = weyl_to_ore(cert.L, 0)
    L, c = _monic_with_scale(L)
    return L, cert.mu.scale(c), cert


def has_telescoper(instance: ProblemInstance) -> TelescoperResult:
    omega = instance.omega
    n = instance.n
    prov: dict[str, Any] = {"minimality": MINIMALITY_NOTE}
    domega = d(omega)
    if domega.is_zero():
        prov["path"] = "closed"
        L, mu, cert = telescope_closed_form(omega, instance.ansatz)
        prov["engine_calls"] = cert.stats.engine_calls
        prov["max_depth"] = cert.stats.max_depth
        return TelescoperResult("telescoper", L, mu, prov)

    prov["path"] = "separability"
    witnesses: list[OreOperator] = []
    verdicts = []
    statuses = []
    for idx, a in domega.terms.items():
        P = df_min_annihilator_t(a)
        v = is_separable(P, instance.separability)
        verdicts.append({"indices": list(idx), "annihilator": str(P), "verdict": v.status, "reason": v.provenance.get("reason")})
        statuses.append(v.status)
        if v.status == "separable":
            witnesses.append(v.L)
    prov["coefficients"] = verdicts
    if "not separable" in statuses:
        return TelescoperResult("no-telescoper", None, None, prov)
    if "unknown" in statuses:
        return TelescoperResult("unknown", None, None, prov)
    L0 = ore_lclm_many(witnesses)
    prov["L0"] = str(L0)
    omega1 = op_apply_form(L0, omega)
    assert d(omega1).is_zero()
    if omega1.is_zero():
        L, mu = L0.monic(), DifferentialForm.zero(n, omega.degree - 1, omega.system)
    else:
        L1, mu1, cert = telescope_closed_form(omega1, instance.ansatz)
        prov["engine_calls"] = cert.stats.engine_calls
        # both factors are monic, so the product is too
        L, mu = L1 * L0, mu1
    result = TelescoperResult("telescoper", L, mu, prov)
    if not verify(instance, result):
        raise AssertionError("pipeline produced an unverified telescoper")
    return result


def verify(instance: ProblemInstance, result: TelescoperResult) -> bool:
    if result.status != "telescoper" or result.L is None or result.mu is None:
        return False
    L, mu, omega = result.L, result.mu, instance.omega
    if L.is_zero() or L.n != instance.n or not L.is_x_free():
        return False
    if mu.n != instance.n or mu.degree != omega.degree - 1:
        return False
    try:
        lhs = op_apply_form(L, omega)
        rhs = d(mu)
    except TelescoperError:
        return False
    if lhs.degree != rhs.degree:
        return lhs.is_zero() and rhs.is_zero()
    return (lhs - rhs).is_zero()


# ---------------------------------------------------------------------------
# JSON


def _require(obj: Mapping, key: str, where: str) -> Any:
    if key not in obj:
        raise ValueError(f"{where}: missing field '{key}'")
    return obj[key]


def parse_system(raw: Mapping | None, n: int) -> RectangularSystem:
    if not raw:
        return RectangularSystem.trivial(n)
    block_entries = raw["blocks"] if "blocks" in raw else [raw]
    blocks = []
    for b in block_entries:
        ops = _require(b, "ops", "system block")
        label = b.get("label")
        if label == TRIVIAL_LABEL:
            blocks.append(trivial_block(n))
        else:
            blocks.append(block_from_strings(ops, n, label))
    return system_from_blocks(blocks)


def _parse_coefficient(value: Any, system: RectangularSystem, n: int, plain_rational: bool) -> DFiniteElement:
    if isinstance(value, str):
        f = parse_expression(value, n)
        if plain_rational:
            return DFiniteElement(system, [f])
        coords = [RationalFunction.zero(n)] * system.dim
        coords[0] = f
        return DFiniteElement(system, coords)
    if isinstance(value, list):
        if len(value) != system.dim:
            raise ValueError(f"coordinate vector has length {len(value)}, system dimension is {system.dim}")
        return DFiniteElement(system, [parse_expression(str(c), n) for c in value])
    raise ValueError(f"coefficient must be a string or a list of strings, got {type(value).__name__}")


def parse_form(raw: Mapping, system: RectangularSystem, n: int, plain_rational: bool) -> DifferentialForm:
    degree = int(_require(raw, "degree", "form"))
    terms: dict[tuple[int, ...], DFiniteElement] = {}
    for term in _require(raw, "terms", "form"):
        idx = tuple(int(i) for i in _require(term, "indices", "form term"))
        order = sorted(idx)
        if len(set(idx)) != len(idx):
            continue
        inversions = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
        sign = -1 if inversions % 2 else 1
        coeff = _parse_coefficient(_require(term, "coefficient", "form term"), system, n, plain_rational)
        if sign < 0:
            coeff = -coeff
        key = tuple(order)
        terms[key] = terms[key] + coeff if key in terms else coeff
    return DifferentialForm(n, degree, terms, system)


def options_from_json(raw: Mapping | None) -> tuple[SeparabilityOptions, AnsatzOptions]:
    raw = dict(raw or {})
    sep = SeparabilityOptions()
    ans = AnsatzOptions()
    n = raw.get("n")
    if "bound" in raw:
        sep.mixed_bound = int(raw["bound"])
        sep.riccati_bound = int(raw["bound"])
    if "denominator_power_cap" in raw:
        sep.denominator_power_cap = int(raw["denominator_power_cap"])
    if "grid_radius" in raw:
        sep.grid_radius = int(raw["grid_radius"])
    sep.accept_bound_negatives = bool(raw.get("accept_bound_negatives", False))
    if "ansatz_ceiling" in raw:
        ans.ceiling = int(raw["ansatz_ceiling"])
    if "max_matrix_entries" in raw:
        ans.max_matrix_entries = int(raw["max_matrix_entries"])
    if raw.get("time_limit") is not None:
        ans.time_limit = float(raw["time_limit"])
    if n is not None and "hints" in raw:
        sep.hints = [OreOperator.parse(h, int(n)) for h in raw["hints"]]
    return sep, ans


def instance_from_json(data: Mapping) -> ProblemInstance:
    version = data.get("version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported instance version {version}")
    n = int(_require(data, "n", "instance"))
    system_data = data.get("system")
    system = parse_system(system_data, n)
    omega = parse_form(_require(data, "form", "instance"), system, n, plain_rational=not system_data)
    opts = dict(data.get("options") or {})
    opts["n"] = n
    sep, ans = options_from_json(opts)
    return ProblemInstance(n, system, omega, sep, ans)


def load_instance(path: str) -> ProblemInstance:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return instance_from_json(data)


def _system_to_json(system: RectangularSystem) -> list[dict]:
    out = []
    for block in system.blocks:
        ops = {}
        for v, op in enumerate(block.ops):
            if op is not None:
                ops["Dt" if v == 0 else f"Dx{v}"] = str(op)
        out.append({"label": block.label, "ops": ops})
    return out


def form_to_json(omega: DifferentialForm) -> dict:
    terms = []
    plain = omega.system.dim == 1 and omega.system.blocks[0].label == TRIVIAL_LABEL
    for idx, f in omega.terms.items():
        coeff: Any = str(f.coords[0]) if plain else [str(c) for c in f.coords]
        terms.append({"indices": list(idx), "coefficient": coeff})
    return {"degree": omega.degree, "system": _system_to_json(omega.system), "terms": terms}


def result_to_json(result: TelescoperResult) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "status": result.status,
        "L": None if result.L is None else str(result.L),
        "mu": None if result.mu is None else form_to_json(result.mu),
        "provenance": result.provenance,
    }


def dumps_result(result: TelescoperResult) -> str:
    return json.dumps(result_to_json(result), indent=2, sort_keys=True)


def result_from_json(data: Mapping, instance: ProblemInstance) -> TelescoperResult:
    n = instance.n
    L = None if data.get("L") is None else OreOperator.parse(data["L"], n)
    mu = None
    if data.get("mu") is not None:
        raw = data["mu"]
        blocks = raw.get("system")
        system = parse_system({"blocks": blocks}, n) if blocks else instance.system
        plain = system.dim == 1 and system.blocks[0].label == TRIVIAL_LABEL
        mu = parse_form(raw, system, n, plain_rational=plain)
    return TelescoperResult(data.get("status", "unknown"), L, mu, dict(data.get("provenance") or {}))


def load_result(path: str, instance: ProblemInstance) -> TelescoperResult:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return result_from_json(data, instance)


__all__ = [
    "ProblemInstance",
    "TelescoperResult",
    "has_telescoper",
    "verify",
    "telescope_closed_form",
    "instance_from_json",
    "load_instance",
    "result_to_json",
    "result_from_json",
    "dumps_result",
    "load_result",
    "form_to_json",
]
