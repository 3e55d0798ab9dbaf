"""Genus reductions: transfer to a nodal pair, degeneration sums, asymptotics.

All sums here are exact integer arithmetic.  The m-sums run over classes
``D - mE`` (or ``D - 2mE``) on a nodal pair and stop at the first class the
effectiveness cascade rejects; for ``D.E = 0`` the arithmetic genus drops by
``4m^2`` per step, so only finitely many terms survive.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import CapabilityError, IncompleteRuleSetError, IntegralityError, MissingEntryError, UnsupportedError
from .invariants import InvariantDescriptor, InvariantValue, PhiTag, Provenance, descriptor
from .lattice import DivisorClass, NodalPairLattice, SurfaceLattice, intersect, is_effective, parse_class
from .real import RealComponent, RealSurfaceModel, TopoType, catalog_model
from .wnumbers import Memo, RuleSet, TangencyVector, WPhi, WState, evaluate

__all__ = [
    "TableBackend",
    "RulesetBackend",
    "normalize_to_degree2",
    "transfer_to_pair",
    "genus1_degeneration_sums",
    "combo_e14",
    "genus2_e15",
    "genus3_e16",
    "table1_pipeline",
    "asymptotic_probe",
    "AsymptoticSeries",
]

Backend = Callable[[DivisorClass], int]


class TableBackend:
    """Backend answering from a finite table ``class string -> value``.

    A class outside the table is an error, never an implicit zero.
    """

    kind = "ORACLE_TABLE"

    def __init__(self, values: Mapping[str | DivisorClass, int], name: str = "table"):
        self.values = {str(k): int(v) for k, v in values.items()}
        self.name = name

    def __call__(self, D: DivisorClass) -> int:
        try:
            return self.values[str(D)]
        except KeyError:
            raise MissingEntryError(f"backend {self.name!r} has no value for class {D}") from None

    def __contains__(self, D: DivisorClass) -> bool:
        return str(D) in self.values

    @classmethod
    def from_records(cls, records: Sequence[Mapping[str, str]], name: str = "table") -> TableBackend:
        """Ingest ``[{"class": "d;m...", "value": "<decimal>"}, ...]``."""
        values = {}
        for rec in records:
            D = parse_class(rec["class"])
            values[str(D)] = int(str(rec["value"]))
        return cls(values, name)

    def to_records(self) -> list[dict[str, str]]:
        return [{"class": k, "value": str(v)} for k, v in sorted(self.values.items())]


class RulesetBackend:
    """Genus-1 values W_1(X, D) through the w-number W(D - E, 0, 2e_1)."""

    kind = "RULESET"

    def __init__(self, rules: RuleSet, pair: NodalPairLattice | None = None, memo: Memo | None = None,
                 phi: WPhi = WPhi.COMPLEMENT_CLASS):
        self.rules = rules
        self.pair = pair or NodalPairLattice.standard()
        self.memo = memo if memo is not None else Memo()
        self.phi = phi

    def state(self, D: DivisorClass) -> WState:
        return _pair_state(self.pair, D, self.phi)

    def __call__(self, D: DivisorClass) -> int:
        return evaluate(self.state(D), self.rules, self.memo)


def _pair_state(pair: NodalPairLattice, D: DivisorClass, phi: WPhi) -> WState:
    if intersect(D, pair.E) != 0:
        raise UnsupportedError(f"class {D} is not orthogonal to E = {pair.E}; it does not come from X")
    return WState(pair, D - pair.E, TangencyVector(), TangencyVector.unit(1, 2), phi)


# -- blow-down normalization ----------------------------------------------

_BLOWUP_TOPOLOGY = {TopoType.S2: TopoType.RP2, TopoType.RP2: TopoType.KLEIN}

# component blown up at each step to reach degree 2; chosen so every
# intermediate surface stays in the catalog
_NORMALIZATION_STEPS = {
    (4, "S2+S2"): (0, 0),
    (3, "RP2+S2"): (0,),
    (3, "S2+RP2"): (1,),
}


def normalize_to_degree2(desc: InvariantDescriptor) -> tuple[InvariantDescriptor, tuple[int, ...]]:
    """Blow up real points away from the curves to land on a degree-2 surface.

    The class is pulled back (zero multiplicities at the new points), the
    selection and signs are kept, and the blown-up component changes type
    S2 -> RP2 -> RP2#RP2.  Returns the new descriptor and the list of
    components that were blown up.
    """
    model = desc.model
    if model.degree == 2:
        return desc, ()
    steps = _NORMALIZATION_STEPS.get((model.degree, model.rx))
    if steps is None:
        raise CapabilityError(f"no blow-up route to degree 2 from {model.key}")
    comps = list(model.components)
    for idx in steps:
        comps[idx] = RealComponent(_BLOWUP_TOPOLOGY[comps[idx].topo_type])
    n = len(steps)
    lattice = SurfaceLattice(model.lattice.k + n)
    bh = {(i, pattern + ",0" * n): parity for (i, pattern), parity in model.bh_table.items()}
    new_model = RealSurfaceModel(lattice, tuple(comps), bh)
    catalog_model(2, new_model.rx)
    D = DivisorClass(desc.D.coeffs + (0,) * n)
    return (
        InvariantDescriptor(new_model, D, desc.selection, desc.epsilons, desc.distribution, desc.phi),
        steps,
    )


def transfer_to_pair(desc: InvariantDescriptor, pair: NodalPairLattice | None = None) -> WState:
    """Elliptic invariant with signs (1, 1) -> w-number W(D - E, 0, 2e_1) on the pair."""
    if desc.g != 1:
        raise UnsupportedError(f"transfer needs a genus-1 descriptor, got g = {desc.g}")
    if desc.epsilons != (1, 1):
        raise UnsupportedError(f"transfer is only available for signs (1, 1), got {desc.epsilons}")
    if desc.model.degree != 2:
        raise UnsupportedError(
            f"descriptor lives in degree {desc.model.degree}; blow up real points first "
            "(normalize_to_degree2)"
        )
    if desc.phi.tag is PhiTag.CUSTOM:
        raise UnsupportedError("custom phi classes cannot be transferred")
    pair = pair or NodalPairLattice.standard(desc.model.lattice.k)
    phi = WPhi.ZERO if desc.phi.tag is PhiTag.ZERO else WPhi.COMPLEMENT_CLASS
    return _pair_state(pair, desc.D, phi.shifted())


# -- degeneration sums -----------------------------------------------------


def _m_range(D: DivisorClass, step: int, pair: NodalPairLattice | None, m_max: int | None) -> range:
    if pair is None:
        if m_max is None:
            raise ValueError("give either a nodal pair (truncation by effectiveness) or m_max")
        return range(1, m_max + 1)
    m = 1
    while is_effective(D - (step * m) * pair.E, pair):
        m += 1
        if m_max is not None and m > m_max:
            break
    return range(1, m)


def genus1_degeneration_sums(
    D: DivisorClass,
    w_oracle: Mapping[int, int],
    pair: NodalPairLattice | None = None,
    m_max: int | None = None,
) -> tuple[int, int]:
    """Signed and unsigned sums over the rational curves in |D - mE|.

    Returns ``(sum (-1)^{m-1} 2^{m-1} m W_m, sum 2^{m-1} m W_m)``: the (1,1)
    and the (1,-1) elliptic invariants of the degree-2 surface with two
    spheres.  Without a pair the sum runs to ``m_max`` (default: the largest
    key of the oracle).
    """
    if pair is None and m_max is None:
        m_max = max(w_oracle, default=0)
    plus = minus = 0
    for m in _m_range(D, 1, pair, m_max):
        if m not in w_oracle:
            raise MissingEntryError(f"no genus-0 value for m = {m} (class D - {m}E)")
        term = 2 ** (m - 1) * m * int(w_oracle[m])
        plus += term if m % 2 else -term
        minus += term
    return plus, minus


def _halve(value: int, what: str) -> int:
    if value % 2:
        raise IntegralityError(f"{what} = {value} is odd; the backend data cannot be right")
    return value // 2


def _half_plus_tail(D: DivisorClass, backend: Backend, pair: NodalPairLattice | None,
                    m_max: int | None, what: str) -> int:
    pair = pair or getattr(backend, "pair", None)
    if pair is None:
        raise ValueError("the class E is unknown: pass the nodal pair")
    total = _halve(int(backend(D)), what)
    for m in _m_range(D, 2, pair, m_max):
        total += int(backend(D - (2 * m) * pair.E))
    return total


def combo_e14(D: DivisorClass, backend: Backend, pair: NodalPairLattice | None = None,
              m_max: int | None = None) -> int:
    """W_1(.., (1,1), 0) + W_1(.., (1,-1), 0) from genus-0 invariants W(X, ., F_0, [F_1]):

    ``W(D)/2 + sum_{m >= 1} W(D - 2mE)``.
    """
    return _half_plus_tail(D, backend, pair, m_max, "W(X, D, F_0, [F_1])")


def genus2_e15(D: DivisorClass, genus1_backend: Backend, pair: NodalPairLattice | None = None,
               m_max: int | None = None) -> int:
    """W_2(X, D, F', (1,1,+-1)) = W_1(D)/2 + sum_{m >= 1} W_1(D - 2mE)."""
    return _half_plus_tail(D, genus1_backend, pair, m_max, "W_1(X, D, (F_0,F_1), (1,1), 0)")


def genus3_e16(D: DivisorClass, genus2_backend: Backend, pair: NodalPairLattice | None = None,
               m_max: int | None = None) -> int:
    """W_3(X, D, F'', (1,1,+-1,+-1)) = W_2(D)/2 + sum_{m >= 1} W_2(D - 2mE)."""
    return _half_plus_tail(D, genus2_backend, pair, m_max, "W_2(X, D, F', (1,1,+-1))")


# -- Table 1 ---------------------------------------------------------------


def table1_descriptor(model: RealSurfaceModel) -> InvariantDescriptor:
    return descriptor(model, -2 * model.lattice.K, (0, 1), (1, 1), phi="ZERO")


def table1_pipeline(
    model: RealSurfaceModel,
    *,
    rules: RuleSet | None = None,
    oracle: Callable[[InvariantDescriptor], int] | None = None,
    memo: Memo | None = None,
    pair: NodalPairLattice | None = None,
) -> InvariantValue:
    """W_1(X, -2K, (F_0, F_1), (1, 1), 0) for a catalogued surface.

    With ``rules`` the value is computed: blow up to degree 2, transfer to
    the nodal pair, evaluate the w-number.  Otherwise ``oracle`` (a lookup of
    descriptors) supplies it.
    """
    desc = table1_descriptor(model)
    if rules is not None:
        normal, _ = normalize_to_degree2(desc)
        state = transfer_to_pair(normal, pair)
        try:
            value = evaluate(state, rules, memo)
        except IncompleteRuleSetError as exc:
            raise CapabilityError(
                f"rule set {rules.version!r} cannot reduce {exc.state_key}; "
                "a transcription of the full splitting formula is required"
            ) from None
        return InvariantValue(value, Provenance.RECURSION, desc)
    if oracle is not None:
        return InvariantValue(int(oracle(desc)), Provenance.ORACLE, desc)
    raise CapabilityError("table1 needs a rule set or an oracle table")


# -- asymptotics -----------------------------------------------------------


@dataclass
class AsymptoticSeries:
    D: DivisorClass
    minus_dk: int
    values: list[tuple[int, int]] = field(default_factory=list)
    slopes: list[tuple[int, Fraction]] = field(default_factory=list)
    a_n: list[tuple[int, Fraction]] = field(default_factory=list)
    lambda_est: Fraction | None = None
    precision: int = 40
    nonpositive: list[int] = field(default_factory=list)

    def slopes_nondecreasing(self) -> bool:
        s = [v for _, v in self.slopes]
        return all(a <= b for a, b in zip(s, s[1:]))

    def slopes_positive(self) -> bool:
        return bool(self.slopes) and all(v > 0 for _, v in self.slopes)


def log_slope(value: int, k: int, precision: int = 40) -> Fraction:
    """log(value) / (k log k) rounded to ``precision`` significant digits."""
    if k < 2 or value <= 0:
        raise ValueError("slope needs k >= 2 and a positive value")
    with decimal.localcontext() as ctx:
        ctx.prec = precision + 10
        num = decimal.Decimal(value).ln()
        den = decimal.Decimal(k) * decimal.Decimal(k).ln()
        ctx.prec = precision
        return Fraction(+(num / den))


def asymptotic_probe(
    D: DivisorClass,
    k_max: int,
    evaluator: Callable[[DivisorClass], int],
    precision: int = 40,
    minus_dk: int | None = None,
) -> AsymptoticSeries:
    """Evaluate W(kD) for k = 1..k_max, with slopes, a_n and an empirical lambda.

    ``a_n = W(nD) / (-nDK)!`` and lambda is the largest constant with
    ``a_n >= lambda * sum_{i<n} a_i`` over the computed range.
    """
    if minus_dk is None:
        minus_dk = -intersect(D, DivisorClass((-3,) + (1,) * D.k))
    series = AsymptoticSeries(D, minus_dk, precision=precision)
    for k in range(1, k_max + 1):
        W = int(evaluator(k * D))
        series.values.append((k, W))
        if W <= 0:
            series.nonpositive.append(k)
            continue
        if k >= 2:
            series.slopes.append((k, log_slope(W, k, precision)))
    for k, W in series.values:
        series.a_n.append((k, Fraction(W, math.factorial(k * minus_dk))))
    ratios = []
    running = Fraction(0)
    for n, a in series.a_n:
        if n >= 2 and running > 0:
            ratios.append(a / running)
        running += a
    series.lambda_est = min(ratios) if ratios else None
    return series
