"""Real deformation classes with disconnected real part, bh parities, point counts.

The Borel-Haefliger parities ``bh_G(D)^2`` cannot be derived from the
lattice alone, so they are configuration data.  Sphere components always
have parity 0 and so does every class that is divisible by two (bh is a
homomorphism into a 2-torsion group); everything else is looked up in the
model's ``bh_table`` keyed by ``(component index, class mod 2)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .errors import ConfigurationError, ParseError
from .lattice import DivisorClass, SurfaceLattice, intersect, parse_class

__all__ = [
    "TopoType",
    "RealComponent",
    "RealSurfaceModel",
    "ComponentSelection",
    "PointDistribution",
    "catalog",
    "catalog_model",
    "load_model",
    "check_f_hat_compatible",
    "check_parity_congruence",
    "enumerate_distributions",
    "distributions",
    "expected_dimension",
]


class TopoType(str, Enum):
    RP2 = "RP2"
    S2 = "S2"
    KLEIN = "RP2#RP2"

    @property
    def euler_char(self) -> int:
        return {"RP2": 1, "S2": 2, "RP2#RP2": 0}[self.value]

    @classmethod
    def parse(cls, text: str) -> TopoType:
        key = text.strip().upper().replace(" ", "")
        aliases = {"RP2": cls.RP2, "S2": cls.S2, "RP2#RP2": cls.KLEIN, "K": cls.KLEIN, "KLEIN": cls.KLEIN}
        try:
            return aliases[key]
        except KeyError:
            raise ParseError(f"unknown component type {text!r}; use RP2, S2 or RP2#RP2") from None


@dataclass(frozen=True)
class RealComponent:
    topo_type: TopoType

    @property
    def euler_char(self) -> int:
        return self.topo_type.euler_char


def _rx_label(components: Sequence[RealComponent]) -> str:
    return "+".join(c.topo_type.value for c in components)


def parse_rx(text: str) -> tuple[RealComponent, ...]:
    """Parse ``"RP2+S2"``, ``"3S2"``, ``"2RP2"`` or comma separated lists."""
    parts = [p for p in text.replace(",", "+").split("+") if p.strip()]
    comps: list[RealComponent] = []
    for part in parts:
        part = part.strip()
        count = 1
        i = 0
        while i < len(part) and part[i].isdigit():
            i += 1
        # "2RP2" is two copies of RP2, but "RP2" alone starts with a letter
        if 0 < i < len(part):
            count = int(part[:i])
            part = part[i:]
        comps.extend([RealComponent(TopoType.parse(part))] * count)
    if not comps:
        raise ParseError(f"empty real part description {text!r}")
    return tuple(comps)


@dataclass(frozen=True)
class RealSurfaceModel:
    lattice: SurfaceLattice
    components: tuple[RealComponent, ...]
    bh_table: Mapping[tuple[int, str], int] = field(default_factory=dict, compare=False, hash=False)

    @property
    def degree(self) -> int:
        return self.lattice.degree

    @property
    def rx(self) -> str:
        return _rx_label(self.components)

    @property
    def key(self) -> str:
        return f"deg={self.degree}|RX={self.rx}"

    def with_bh(self, table: Mapping[tuple[int, str], int]) -> RealSurfaceModel:
        merged = dict(self.bh_table)
        merged.update(table)
        return RealSurfaceModel(self.lattice, self.components, merged)

    def bh_parity(self, index: int, D: DivisorClass) -> int:
        comp = self.components[index]
        pattern = D.mod2()
        if comp.topo_type is TopoType.S2 or not any(c % 2 for c in D.coeffs):
            return 0
        try:
            return int(self.bh_table[(index, pattern)]) % 2
        except KeyError:
            raise ConfigurationError(
                f"no bh parity for component {index} ({comp.topo_type.value}) "
                f"on class {D} (mod 2: {pattern})"
            ) from None

    def unverified_components(self, indices: Sequence[int], D: DivisorClass) -> list[int]:
        """Klein-bottle components whose parity for D came from user data."""
        odd = any(c % 2 for c in D.coeffs)
        return [i for i in indices if odd and self.components[i].topo_type is TopoType.KLEIN]

    def __str__(self) -> str:
        return self.key


@dataclass(frozen=True)
class ComponentSelection:
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if len(set(self.indices)) != len(self.indices):
            raise ValueError(f"selection has repeated components: {self.indices}")
        if len(self.indices) < 2:
            raise ValueError("a selection needs at least two components (g >= 1)")

    @property
    def g(self) -> int:
        return len(self.indices) - 1

    def fits(self, model: RealSurfaceModel) -> bool:
        return all(0 <= i < len(model.components) for i in self.indices)

    def complement(self, model: RealSurfaceModel) -> list[int]:
        return [i for i in range(len(model.components)) if i not in self.indices]

    @classmethod
    def parse(cls, text: str) -> ComponentSelection:
        try:
            return cls(tuple(int(t.strip().lstrip("Ff")) for t in text.split(",") if t.strip()))
        except ValueError as exc:
            raise ParseError(f"cannot parse component selection {text!r}: {exc}") from None

    def __str__(self) -> str:
        return ",".join(str(i) for i in self.indices)


@dataclass(frozen=True, order=True)
class PointDistribution:
    r: tuple[int, ...]
    m: int

    @property
    def total(self) -> int:
        return sum(self.r) + 2 * self.m

    def satisfies(self, total: int, parities: Sequence[int]) -> bool:
        return (
            self.m >= 0
            and all(x >= 0 for x in self.r)
            and len(self.r) == len(parities)
            and self.total == total
            and all(x % 2 == (p + 1) % 2 for x, p in zip(self.r, parities))
        )

    def as_tuple(self) -> tuple[int, ...]:
        return (*self.r, self.m)


# -- catalog ---------------------------------------------------------------

_CATALOG = [
    (4, "2S2"),
    (3, "RP2+S2"),
    (2, "2RP2"),
    (2, "RP2#RP2+S2"),
    (2, "2S2"),
    (2, "3S2"),
    (2, "4S2"),
]


def catalog() -> list[RealSurfaceModel]:
    """Degree >= 2 real del Pezzo surfaces with disconnected real part."""
    return [RealSurfaceModel(SurfaceLattice(9 - deg), parse_rx(rx)) for deg, rx in _CATALOG]


def catalog_model(degree: int, rx: str) -> RealSurfaceModel:
    wanted = parse_rx(rx)
    for model in catalog():
        if model.degree == degree and sorted(c.topo_type.value for c in model.components) == sorted(
            c.topo_type.value for c in wanted
        ):
            # keep the caller's component order, indices matter for selections
            return RealSurfaceModel(model.lattice, wanted)
    raise ConfigurationError(
        f"degree {degree} with real part {rx} is not a catalogued disconnected type"
    )


def load_model(doc: Mapping | str) -> RealSurfaceModel:
    """Build a model from ``{degree, components:[{type}], bh:{idx:{pattern:parity}}}``."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        degree = int(doc["degree"])
        comps = tuple(RealComponent(TopoType.parse(c["type"])) for c in doc["components"])
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"surface document is missing {exc}") from None
    lattice = SurfaceLattice(9 - degree)
    table: dict[tuple[int, str], int] = {}
    for idx, patterns in (doc.get("bh") or {}).items():
        i = int(idx)
        if not 0 <= i < len(comps):
            raise ConfigurationError(f"bh entry for nonexistent component {i}")
        for pattern, parity in patterns.items():
            D = parse_class(pattern, lattice.k)
            table[(i, D.mod2())] = int(parity) % 2
    return RealSurfaceModel(lattice, comps, table)


# -- hypothesis bookkeeping ------------------------------------------------


def selected_parities(model: RealSurfaceModel, selection: ComponentSelection, D: DivisorClass) -> list[int]:
    return [model.bh_parity(i, D) for i in selection.indices]


def check_f_hat_compatible(model: RealSurfaceModel, selection: ComponentSelection, D: DivisorClass) -> bool:
    return all(model.bh_parity(i, D) == 0 for i in selection.complement(model))


def check_parity_congruence(model: RealSurfaceModel, selection: ComponentSelection, D: DivisorClass) -> bool:
    DK = intersect(D, model.lattice.K)
    return (DK - sum(selected_parities(model, selection, D))) % 2 == 0


def expected_dimension(D: DivisorClass, g: int) -> int:
    K = DivisorClass((-3,) + (1,) * D.k)
    return -intersect(D, K) + g - 1


def distributions(total: int, parities: Sequence[int]) -> list[PointDistribution]:
    """All (r_0..r_g, m) with sum r + 2m = total and r_i = parities[i] + 1 mod 2."""
    want = [(p + 1) % 2 for p in parities]
    out: list[PointDistribution] = []

    def fill(i: int, left: int, acc: list[int]):
        if i == len(want):
            if left >= 0 and left % 2 == 0:
                out.append(PointDistribution(tuple(acc), left // 2))
            return
        for x in range(want[i], left + 1, 2):
            acc.append(x)
            fill(i + 1, left - x, acc)
            acc.pop()

    if total >= 0:
        fill(0, total, [])
    return sorted(out, key=PointDistribution.as_tuple)


def enumerate_distributions(
    model: RealSurfaceModel, selection: ComponentSelection, D: DivisorClass
) -> list[PointDistribution]:
    parities = selected_parities(model, selection, D)
    return distributions(expected_dimension(D, selection.g), parities)
