"""Invariant descriptors, hypothesis checks and the small-divisor closed forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import ConfigurationError, CapabilityError, ParseError, UnsupportedError, WrongRegimeError
from .lattice import DivisorClass, arithmetic_genus, intersect, is_big, is_nef, parse_class
from .real import (
    ComponentSelection,
    PointDistribution,
    RealSurfaceModel,
    catalog_model,
    check_f_hat_compatible,
    check_parity_congruence,
    enumerate_distributions,
    expected_dimension,
    selected_parities,
)

__all__ = [
    "PhiTag",
    "Phi",
    "Provenance",
    "InvariantDescriptor",
    "InvariantValue",
    "ValidationReport",
    "validate_hypotheses",
    "closed_form_equal_genus",
    "closed_form_pencil",
    "cubic_elliptic_example",
    "gw_bound_check",
]


class PhiTag(str, Enum):
    ZERO = "ZERO"
    COMPLEMENT_CLASS = "COMPLEMENT_CLASS"
    CUSTOM = "CUSTOM"


@dataclass(frozen=True)
class Phi:
    """The class phi; CUSTOM carries an opaque id for a user parity function."""

    tag: PhiTag = PhiTag.ZERO
    custom_id: str | None = None

    @classmethod
    def parse(cls, text: str) -> Phi:
        t = text.strip()
        up = t.upper()
        if up in ("0", "ZERO"):
            return cls(PhiTag.ZERO)
        if up in ("COMPLEMENT", "COMPLEMENT_CLASS", "C"):
            return cls(PhiTag.COMPLEMENT_CLASS)
        if up.startswith("CUSTOM"):
            _, _, ident = t.partition(":")
            return cls(PhiTag.CUSTOM, ident or None)
        raise ParseError(f"unknown phi {text!r}; use ZERO, COMPLEMENT or CUSTOM:<id>")

    def __str__(self) -> str:
        if self.tag is PhiTag.CUSTOM:
            return f"CUSTOM:{self.custom_id or ''}"
        return self.tag.value


class Provenance(str, Enum):
    CLOSED_FORM = "CLOSED_FORM"
    REDUCTION = "REDUCTION"
    RECURSION = "RECURSION"
    ORACLE = "ORACLE"


# eps entries are +1 / -1; 0 marks a sign summed over both values (the
# combined genus-2 and genus-3 invariants)
PM = 0


def _eps_text(e: int) -> str:
    return "pm" if e == PM else ("1" if e > 0 else "-1")


def parse_eps(text: str) -> tuple[int, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        if tok in ("pm", "+-", "±"):
            out.append(PM)
        elif tok in ("1", "+1", "+"):
            out.append(1)
        elif tok in ("-1", "-"):
            out.append(-1)
        else:
            raise ParseError(f"bad sign {tok!r} in eps list {text!r}")
    return tuple(out)


@dataclass(frozen=True)
class InvariantDescriptor:
    model: RealSurfaceModel
    D: DivisorClass
    selection: ComponentSelection
    epsilons: tuple[int, ...]
    distribution: PointDistribution | None = None
    phi: Phi = field(default_factory=Phi)

    def __post_init__(self):
        if len(self.epsilons) != len(self.selection.indices):
            raise ValueError(
                f"{len(self.epsilons)} signs given for {len(self.selection.indices)} components"
            )
        if any(e not in (1, -1, PM) for e in self.epsilons):
            raise ValueError(f"signs must be +1, -1 (or pm), got {self.epsilons}")
        if self.distribution is not None and len(self.distribution.r) != len(self.epsilons):
            raise ValueError("distribution length does not match the selection")

    @property
    def g(self) -> int:
        return self.selection.g

    def key(self) -> str:
        """Canonical serialization, used as ledger and cache key."""
        r = ",".join(str(x) for x in self.distribution.r) if self.distribution else ""
        m = str(self.distribution.m) if self.distribution else ""
        return (
            f"{self.model.key}|D={self.D}|g={self.g}|F={self.selection}"
            f"|r={r}|m={m}|eps={','.join(_eps_text(e) for e in self.epsilons)}|phi={self.phi}"
        )

    @classmethod
    def from_key(cls, key: str, model: RealSurfaceModel | None = None) -> InvariantDescriptor:
        try:
            fields = dict(part.split("=", 1) for part in key.split("|"))
            if model is None:
                model = catalog_model(int(fields["deg"]), fields["RX"])
            D = parse_class(fields["D"], model.lattice.k)
            sel = ComponentSelection.parse(fields["F"])
            dist = None
            if fields.get("r"):
                dist = PointDistribution(
                    tuple(int(x) for x in fields["r"].split(",")), int(fields["m"] or 0)
                )
            desc = cls(model, D, sel, parse_eps(fields["eps"]), dist, Phi.parse(fields["phi"]))
        except (KeyError, ValueError) as exc:
            raise ParseError(f"cannot parse descriptor {key!r}: {exc}") from None
        if str(desc.g) != fields["g"]:
            raise ParseError(f"descriptor {key!r}: g does not match the selection")
        return desc


@dataclass(frozen=True)
class InvariantValue:
    value: int
    provenance: Provenance
    descriptor: InvariantDescriptor | None = None

    def __int__(self) -> int:
        return self.value


@dataclass
class ValidationReport:
    structural: bool = True
    nef: bool | None = None
    big: bool | None = None
    f_hat_compatible: bool | None = None
    genus_ok: bool | None = None
    dimension_ok: bool | None = None
    parity_congruence: bool | None = None
    distribution_feasible: bool | None = None
    issues: list[str] = field(default_factory=list)
    unverified_bh: list[int] = field(default_factory=list)

    FLAGS = (
        "structural",
        "nef",
        "big",
        "f_hat_compatible",
        "genus_ok",
        "dimension_ok",
        "parity_congruence",
        "distribution_feasible",
    )

    def flags(self) -> dict[str, bool | None]:
        return {name: getattr(self, name) for name in self.FLAGS}

    @property
    def ok(self) -> bool:
        return all(v is True for v in self.flags().values())


def validate_hypotheses(desc: InvariantDescriptor) -> ValidationReport:
    """Check every hypothesis of the existence theorem; never raises on failure."""
    rep = ValidationReport()
    model, D, sel = desc.model, desc.D, desc.selection
    if not sel.fits(model):
        rep.structural = False
        rep.issues.append(
            f"selection {sel} needs g+1={sel.g + 1} components, model has {len(model.components)}"
        )
        return rep
    if D.k != model.lattice.k:
        rep.structural = False
        rep.issues.append(f"class {D} is not on the degree-{model.degree} lattice")
        return rep

    try:
        rep.nef = is_nef(D)
        if not rep.nef:
            rep.issues.append(f"{D} is not nef")
    except CapabilityError as exc:
        rep.nef = False
        rep.issues.append(str(exc))
    rep.big = is_big(D)
    if not rep.big:
        rep.issues.append(f"D^2 = {intersect(D, D)} is not positive")
    pa = arithmetic_genus(D)
    rep.genus_ok = pa >= desc.g
    if not rep.genus_ok:
        rep.issues.append(f"p_a(D) = {pa} < g = {desc.g}")

    try:
        parities = selected_parities(model, sel, D)
        rep.f_hat_compatible = check_f_hat_compatible(model, sel, D)
        rep.parity_congruence = check_parity_congruence(model, sel, D)
    except ConfigurationError as exc:
        rep.issues.append(str(exc))
        rep.f_hat_compatible = rep.f_hat_compatible or False
        rep.parity_congruence = False
        rep.dimension_ok = False
        rep.distribution_feasible = False
        return rep
    rep.unverified_bh = model.unverified_components(range(len(model.components)), D)

    minus_dk = -intersect(D, model.lattice.K)
    rep.dimension_ok = minus_dk >= desc.g + 1 - sum(parities)
    if not rep.dimension_ok:
        rep.issues.append(f"-DK = {minus_dk} < g + 1 - sum bh^2 = {desc.g + 1 - sum(parities)}")
    if desc.distribution is not None:
        rep.distribution_feasible = desc.distribution.satisfies(
            expected_dimension(D, desc.g), parities
        )
    else:
        rep.distribution_feasible = bool(enumerate_distributions(model, sel, D))
    if not rep.distribution_feasible:
        rep.issues.append("no point distribution satisfies the count and parity conditions")
    return rep


def closed_form_equal_genus(desc: InvariantDescriptor, half_curve_parity: int = 0) -> InvariantValue:
    """p_a(D) = g: the constraints cut out one smooth curve, sign (-1)^{C_1/2 . phi}."""
    pa = arithmetic_genus(desc.D)
    if pa != desc.g:
        raise WrongRegimeError(f"p_a(D) = {pa} but this formula needs p_a(D) = g = {desc.g}")
    if half_curve_parity not in (0, 1):
        raise ValueError("half-curve parity must be 0 or 1")
    if desc.phi.tag is PhiTag.ZERO:
        half_curve_parity = 0
    return InvariantValue(-1 if half_curve_parity else 1, Provenance.CLOSED_FORM, desc)


def closed_form_pencil(desc: InvariantDescriptor) -> InvariantValue:
    """p_a(D) = g + 1: sum_i eps_i (r_i + 1 - chi(F_i)), minus chi of the rest for phi = [RX \\ F]."""
    pa = arithmetic_genus(desc.D)
    if pa != desc.g + 1:
        raise WrongRegimeError(f"p_a(D) = {pa} but this formula needs p_a(D) = g + 1 = {desc.g + 1}")
    if desc.distribution is None:
        raise ValueError("the pencil formula needs a point distribution (r, m)")
    if desc.phi.tag is PhiTag.CUSTOM:
        raise UnsupportedError("only phi = 0 and phi = [RX minus F] are covered in the pencil regime")
    if PM in desc.epsilons:
        raise UnsupportedError("summed signs are not supported by the pencil formula")
    comps = desc.model.components
    value = sum(
        e * (r + 1 - comps[i].euler_char)
        for e, r, i in zip(desc.epsilons, desc.distribution.r, desc.selection.indices)
    )
    if desc.phi.tag is PhiTag.COMPLEMENT_CLASS:
        value -= sum(comps[i].euler_char for i in desc.selection.complement(desc.model))
    return InvariantValue(value, Provenance.CLOSED_FORM, desc)


def cubic_elliptic_example(r0: int, r1: int, eps0: int, eps1: int) -> InvariantValue:
    """Elliptic invariant of -2K - E_i on the two-component cubic: eps0 r0 + eps1 (r1 - 1)."""
    rest = 5 - r0 - r1
    if r0 < 0 or r1 < 0 or rest < 0 or rest % 2:
        raise ValueError(f"(r0, r1) = ({r0}, {r1}) is not completed by pairs to 5 points")
    if r0 % 2 != 0 or r1 % 2 != 1:
        raise ValueError(f"parity violation: need r0 even and r1 odd, got ({r0}, {r1})")
    if eps0 not in (1, -1) or eps1 not in (1, -1):
        raise ValueError("signs must be +1 or -1")
    return InvariantValue(eps0 * r0 + eps1 * (r1 - 1), Provenance.CLOSED_FORM)


def gw_bound_check(value: InvariantValue | int, gw: int) -> bool:
    if gw < 0:
        raise ValueError("Gromov-Witten reference values are nonnegative")
    return abs(int(value)) <= gw


def descriptor(
    model: RealSurfaceModel,
    D: DivisorClass | str,
    selection: ComponentSelection | Sequence[int] | str,
    epsilons: Sequence[int] | str | None = None,
    r: Sequence[int] | None = None,
    m: int = 0,
    phi: Phi | str = "ZERO",
) -> InvariantDescriptor:
    """Convenience constructor accepting text forms."""
    if isinstance(D, str):
        D = parse_class(D, model.lattice.k)
    if isinstance(selection, str):
        selection = ComponentSelection.parse(selection)
    elif not isinstance(selection, ComponentSelection):
        selection = ComponentSelection(tuple(selection))
    if epsilons is None:
        epsilons = (1,) * len(selection.indices)
    elif isinstance(epsilons, str):
        epsilons = parse_eps(epsilons)
    dist = PointDistribution(tuple(r), m) if r is not None else None
    if isinstance(phi, str):
        phi = Phi.parse(phi)
    return InvariantDescriptor(model, D, selection, tuple(epsilons), dist, phi)
