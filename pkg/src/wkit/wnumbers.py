"""w-numbers W(D, alpha, beta) on uninodal del Pezzo pairs.

The evaluator is driven by a declarative :class:`RuleSet`.  The only rule
built in is the exchange sum

    W(D, a, b) = sum_{j : b_j > 0} W(D, a + e_j, b - e_j) + (splitting terms)

Splitting terms, base cases and their sign conventions come from a JSON rule
file.  The engine itself enforces the structural facts every valid rule set
must respect: conservation ``I(alpha + beta) = D.E`` on every state, strict
decrease of the induction measure ``-(K+E).D + |beta| - 1`` along every rule
application, and base values in {0, 1}.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import re
import threading
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Any, Callable, Iterable, Iterator, Mapping

from .errors import ConservationError, IncompleteRuleSetError, ParseError, RuleSetError
from .expr import Expr
from .lattice import DivisorClass, NodalPairLattice, intersect, is_effective, is_nef, parse_class

__all__ = [
    "TangencyVector",
    "WPhi",
    "WState",
    "RuleSet",
    "Memo",
    "norm",
    "iweight",
    "add_unit",
    "sub_unit",
    "induction_measure",
    "first_sum_expand",
    "load_rule_spec",
    "load_bundled_rules",
    "evaluate",
    "positivity_probe",
    "probe_states",
    "vector_pairs",
]


# -- tangency vectors ------------------------------------------------------


@dataclass(frozen=True)
class TangencyVector:
    """Finitely supported vector of nonnegative integers indexed from 1."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        clean: dict[int, int] = {}
        for i, v in self.entries:
            i, v = int(i), int(v)
            if i < 1:
                raise ValueError(f"tangency indices start at 1, got {i}")
            if v < 0:
                raise ValueError(f"negative multiplicity {v} at index {i}")
            if v:
                clean[i] = clean.get(i, 0) + v
        object.__setattr__(self, "entries", tuple(sorted(clean.items())))

    @classmethod
    def of(cls, mapping: Mapping[int, int] | None = None) -> TangencyVector:
        return cls(tuple((mapping or {}).items()))

    @classmethod
    def unit(cls, j: int, times: int = 1) -> TangencyVector:
        return cls(((j, times),))

    def __getitem__(self, j: int) -> int:
        for i, v in self.entries:
            if i == j:
                return v
        return 0

    def items(self) -> tuple[tuple[int, int], ...]:
        return self.entries

    def support(self) -> list[int]:
        return [i for i, _ in self.entries]

    def norm(self) -> int:
        return sum(v for _, v in self.entries)

    def iweight(self) -> int:
        return sum(i * v for i, v in self.entries)

    def is_odd_supported(self) -> bool:
        return all(i % 2 == 1 for i, _ in self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: TangencyVector) -> TangencyVector:
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, TangencyVector):
            return NotImplemented
        return TangencyVector(self.entries + other.entries)

    __radd__ = __add__

    def __sub__(self, other: TangencyVector) -> TangencyVector:
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, TangencyVector):
            return NotImplemented
        out = dict(self.entries)
        for i, v in other.entries:
            left = out.get(i, 0) - v
            if left < 0:
                raise VectorUnderflow(f"{self} - {other} has a negative entry at index {i}")
            out[i] = left
        return TangencyVector(tuple(out.items()))

    def __mul__(self, n: int) -> TangencyVector:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            raise VectorUnderflow("negative multiple of a tangency vector")
        return TangencyVector(tuple((i, n * v) for i, v in self.entries))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.entries
        if not isinstance(other, TangencyVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def le(self, other: TangencyVector) -> bool:
        return all(v <= other[i] for i, v in self.entries)

    def sub_vectors(self) -> Iterator[TangencyVector]:
        """Every v with 0 <= v <= self, componentwise."""
        idx = [i for i, _ in self.entries]
        for counts in itertools.product(*(range(v + 1) for _, v in self.entries)):
            yield TangencyVector(tuple(zip(idx, counts)))

    def __str__(self) -> str:
        return "[" + ",".join(f"{i}:{v}" for i, v in self.entries) + "]"

    def __repr__(self) -> str:
        return f"TangencyVector({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> TangencyVector:
        """Accepts ``"[1:2,3:1]"``, ``"1:2,3:1"``, ``"2e1+e3"`` and ``"0"``."""
        t = text.strip().strip("[]").replace(" ", "")
        if t in ("", "0"):
            return cls()
        try:
            if ":" in t:
                return cls(tuple(tuple(int(x) for x in part.split(":")) for part in t.split(",")))
            out = []
            for part in t.split("+"):
                m = re.fullmatch(r"(\d*)\*?e_?(\d+)", part)
                if not m:
                    raise ValueError(part)
                out.append((int(m.group(2)), int(m.group(1) or 1)))
            return cls(tuple(out))
        except ValueError:
            raise ParseError(f"cannot parse tangency vector {text!r}") from None


class VectorUnderflow(ArithmeticError):
    """Subtracting more than a tangency vector holds."""


def norm(v: TangencyVector) -> int:
    return v.norm()


def iweight(v: TangencyVector) -> int:
    return v.iweight()


def add_unit(v: TangencyVector, j: int) -> TangencyVector:
    return v + TangencyVector.unit(j)


def sub_unit(v: TangencyVector, j: int) -> TangencyVector:
    if v[j] < 1:
        raise VectorUnderflow(f"entry {j} of {v} is zero")
    return v - TangencyVector.unit(j)


# -- states ----------------------------------------------------------------


class WPhi(str, Enum):
    ZERO = "ZERO"
    COMPLEMENT_CLASS = "COMPLEMENT_CLASS"

    def shifted(self) -> WPhi:
        """phi + [RY minus F] over Z/2."""
        return WPhi.COMPLEMENT_CLASS if self is WPhi.ZERO else WPhi.ZERO


@dataclass(frozen=True)
class WState:
    pair: NodalPairLattice
    D: DivisorClass
    alpha: TangencyVector = field(default_factory=TangencyVector)
    beta: TangencyVector = field(default_factory=TangencyVector)
    phi: WPhi = WPhi.ZERO

    def __post_init__(self):
        if self.D.k != self.pair.base.k:
            raise ValueError(f"class {self.D} is not on the pair's lattice")
        de = intersect(self.D, self.pair.E)
        weight = self.alpha.iweight() + self.beta.iweight()
        if weight != de:
            raise ConservationError(
                f"I(alpha+beta) = {weight} but D.E = {de} for D={self.D}, "
                f"alpha={self.alpha}, beta={self.beta}"
            )

    @property
    def dE(self) -> int:
        return intersect(self.D, self.pair.E)

    def key(self) -> str:
        return f"{self.pair}|D={self.D}|a={self.alpha}|b={self.beta}|phi={self.phi.value}"

    def with_(self, **changes: Any) -> WState:
        data = dict(pair=self.pair, D=self.D, alpha=self.alpha, beta=self.beta, phi=self.phi)
        data.update(changes)
        return WState(**data)

    def __str__(self) -> str:
        return self.key()


def induction_measure(state: WState) -> int:
    KE = state.pair.K + state.pair.E
    return -intersect(KE, state.D) + state.beta.norm() - 1


def first_sum_expand(state: WState) -> list[tuple[WState, int]]:
    out = []
    for j, _ in state.beta.items():
        out.append((state.with_(alpha=add_unit(state.alpha, j), beta=sub_unit(state.beta, j)), 1))
    return out


# -- rule sets -------------------------------------------------------------

RULE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["ruleset_version"],
    "additionalProperties": False,
    "properties": {
        "ruleset_version": {"type": "string"},
        "description": {"type": "string"},
        "source": {"type": "string"},
        "odd_support_preserving": {"type": "boolean"},
        "zero_if_noneffective": {"type": "boolean"},
        "strict_base_values": {"type": "boolean"},
        "constants": {"type": "object", "additionalProperties": {"type": "integer"}},
        "first_sum": {
            "type": "object",
            "properties": {"enabled": {"type": "boolean"}},
            "additionalProperties": False,
        },
        "base_cases": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["value"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "D": {"type": "string"},
                    "alpha": {"type": "string"},
                    "beta": {"type": "string"},
                    "phi": {"enum": ["ZERO", "COMPLEMENT_CLASS"]},
                    "when": {"type": "string"},
                    "value": {"type": ["string", "integer"]},
                },
            },
        },
        "splitting": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coefficient", "factors"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "vars": {
                        "type": "object",
                        "additionalProperties": {
                            "type": "array",
                            "items": {"type": ["string", "integer"]},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                    "split": {"enum": ["alpha", "beta"]},
                    "where": {"type": "string"},
                    "coefficient": {"type": ["string", "integer"]},
                    "factors": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "object",
                            "required": ["D"],
                            "additionalProperties": False,
                            "properties": {
                                "D": {"type": "string"},
                                "alpha": {"type": "string"},
                                "beta": {"type": "string"},
                                "phi": {"enum": ["same", "shifted", "ZERO", "COMPLEMENT_CLASS"]},
                            },
                        },
                    },
                },
            },
        },
    },
}

_RANGE_CAP = 10_000


@dataclass(frozen=True)
class BaseCase:
    name: str
    value: Expr
    D: Expr | None = None
    alpha: Expr | None = None
    beta: Expr | None = None
    phi: WPhi | None = None
    when: Expr | None = None


@dataclass(frozen=True)
class FactorTemplate:
    D: Expr
    alpha: Expr
    beta: Expr
    phi: str = "same"


@dataclass(frozen=True)
class SplittingRule:
    name: str
    coefficient: Expr
    factors: tuple[FactorTemplate, ...]
    variables: tuple[tuple[str, Expr, Expr], ...] = ()
    split: str | None = None
    where: Expr | None = None


@dataclass(frozen=True)
class RuleSet:
    version: str
    first_sum: bool = True
    base_cases: tuple[BaseCase, ...] = ()
    splitting: tuple[SplittingRule, ...] = ()
    odd_support_preserving: bool = False
    zero_if_noneffective: bool = True
    constants: Mapping[str, int] = field(default_factory=dict, compare=False, hash=False)
    hash: str = ""
    description: str = ""


def _state_env(state: WState, constants: Mapping[str, int]) -> dict[str, Any]:
    pair = state.pair
    S = pair.base
    env: dict[str, Any] = dict(constants)
    env.update(
        D=state.D,
        K=pair.K,
        E=pair.E,
        L=S.L,
        alpha=state.alpha,
        beta=state.beta,
        dE=state.dE,
        dK=intersect(state.D, pair.K),
        na=state.alpha.norm(),
        nb=state.beta.norm(),
        Ia=state.alpha.iweight(),
        Ib=state.beta.iweight(),
        measure=induction_measure(state),
        e=TangencyVector.unit,
        cls=lambda text: parse_class(text, S.k),
        vec=TangencyVector.parse,
        dot=intersect,
    )
    for i in range(1, S.k + 1):
        env[f"E{i}"] = S.E(i)
    return env


def _as_vector(value: Any) -> TangencyVector:
    if isinstance(value, TangencyVector):
        return value
    if isinstance(value, int) and value == 0:
        return TangencyVector()
    raise RuleSetError(f"expected a tangency vector, got {value!r}")


def _as_class(value: Any, k: int) -> DivisorClass:
    if isinstance(value, DivisorClass) and value.k == k:
        return value
    if isinstance(value, int) and value == 0:
        return DivisorClass((0,) * (k + 1))
    raise RuleSetError(f"expected a divisor class, got {value!r}")


def match_base_case(state: WState, rules: RuleSet) -> int | None:
    env = None
    for case in rules.base_cases:
        if case.phi is not None and case.phi is not state.phi:
            continue
        env = env or _state_env(state, rules.constants)
        if case.D is not None and _as_class(case.D(env), state.D.k) != state.D:
            continue
        if case.alpha is not None and _as_vector(case.alpha(env)) != state.alpha:
            continue
        if case.beta is not None and _as_vector(case.beta(env)) != state.beta:
            continue
        if case.when is not None and not case.when(env):
            continue
        return int(case.value(env))
    return None


def _phi_for(template: str, parent: WPhi) -> WPhi:
    if template == "same":
        return parent
    if template == "shifted":
        return parent.shifted()
    return WPhi(template)


def _bindings(rule: SplittingRule, env: dict[str, Any]) -> Iterator[dict[str, Any]]:
    names = [v[0] for v in rule.variables]
    ranges = []
    for name, lo, hi in rule.variables:
        a, b = lo(env), hi(env)
        if not isinstance(a, int) or not isinstance(b, int):
            raise RuleSetError(f"range of {name!r} in rule {rule.name!r} is not integral")
        if b - a > _RANGE_CAP:
            raise RuleSetError(f"range of {name!r} in rule {rule.name!r} is too large ({b - a})")
        ranges.append(range(a, b + 1))
    splits: Iterable[Any] = [None]
    if rule.split is not None:
        splits = list(env[rule.split].sub_vectors())
    for combo in itertools.product(*ranges):
        for part in splits:
            local = dict(env)
            local.update(zip(names, combo))
            if part is not None:
                whole = env[rule.split]
                local[f"{rule.split[0]}1"] = part
                local[f"{rule.split[0]}2"] = whole - part
            yield local


def expand_rule(state: WState, rule: SplittingRule, rules: RuleSet) -> Iterator[tuple[int, list[WState]]]:
    """Yield ``(coefficient, factor states)`` for every nonzero term of a rule."""
    env = _state_env(state, rules.constants)
    for local in _bindings(rule, env):
        if rule.where is not None and not rule.where(local):
            continue
        coef = rule.coefficient(local)
        if not isinstance(coef, int):
            raise RuleSetError(f"coefficient of rule {rule.name!r} is not an integer: {coef!r}")
        if coef == 0:
            continue
        try:
            factors = []
            for tpl in rule.factors:
                D = _as_class(tpl.D(local), state.D.k)
                a = _as_vector(tpl.alpha(local))
                b = _as_vector(tpl.beta(local))
                factors.append((D, a, b, _phi_for(tpl.phi, state.phi)))
        except VectorUnderflow:
            continue
        states = []
        for D, a, b, phi in factors:
            try:
                states.append(WState(state.pair, D, a, b, phi))
            except ConservationError as exc:
                raise RuleSetError(
                    f"rule {rule.name!r} breaks conservation at {state.key()}: {exc}"
                ) from None
        yield coef, states


def successors(state: WState, rules: RuleSet) -> Iterator[tuple[str, int, list[WState]]]:
    """All terms of the right-hand side: (rule name, coefficient, factor states)."""
    if rules.first_sum:
        for succ, coef in first_sum_expand(state):
            yield "first_sum", coef, [succ]
    for rule in rules.splitting:
        for coef, states in expand_rule(state, rule, rules):
            yield rule.name, coef, states


def _guard(state: WState, name: str, states: list[WState], rules: RuleSet):
    mu = induction_measure(state)
    for s in states:
        if induction_measure(s) >= mu:
            raise RuleSetError(
                f"rule {name!r} does not decrease the induction measure: "
                f"{state.key()} (measure {mu}) -> {s.key()} (measure {induction_measure(s)})"
            )
        if rules.odd_support_preserving and state.alpha.is_odd_supported() and state.beta.is_odd_supported():
            if not (s.alpha.is_odd_supported() and s.beta.is_odd_supported()):
                raise RuleSetError(f"rule {name!r} leaves the odd subsemigroup at {state.key()}")


def probe_states(pair: NodalPairLattice | None = None, max_de: int = 4) -> list[WState]:
    """Small states used to audit rule files at load time."""
    pair = pair or NodalPairLattice.standard()
    S, K, E = pair.base, pair.K, pair.E
    gens = [-K, -K - E, S.L - S.E(4), S.E(4), S.L - S.E(1)]
    classes = set()
    for coeffs in itertools.product(range(3), repeat=len(gens)):
        if 0 < sum(coeffs) <= 2:
            D = S.zero
            for c, g in zip(coeffs, gens):
                D = D + c * g
            if 0 <= intersect(D, E) <= max_de:
                classes.add(D)
    out = []
    for D in sorted(classes, key=lambda c: c.coeffs):
        for a, b in vector_pairs(intersect(D, E)):
            for phi in WPhi:
                out.append(WState(pair, D, a, b, phi))
    return out


def _partitions(n: int, largest: int | None = None) -> Iterator[list[int]]:
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield [first, *rest]


def vector_pairs(weight: int) -> list[tuple[TangencyVector, TangencyVector]]:
    """All (alpha, beta) with I(alpha + beta) = weight."""
    out = []
    for total in range(weight + 1):
        for pa in _partitions(total):
            for pb in _partitions(weight - total):
                a = TangencyVector(tuple((i, 1) for i in pa))
                b = TangencyVector(tuple((i, 1) for i in pb))
                out.append((a, b))
    return out


def _compile_rules(doc: Mapping[str, Any]) -> RuleSet:
    base = []
    for n, case in enumerate(doc.get("base_cases", [])):
        base.append(
            BaseCase(
                name=case.get("name", f"base[{n}]"),
                value=Expr(case["value"]),
                D=Expr(case["D"]) if "D" in case else None,
                alpha=Expr(case["alpha"]) if "alpha" in case else None,
                beta=Expr(case["beta"]) if "beta" in case else None,
                phi=WPhi(case["phi"]) if "phi" in case else None,
                when=Expr(case["when"]) if "when" in case else None,
            )
        )
    split = []
    for n, rule in enumerate(doc.get("splitting", [])):
        split.append(
            SplittingRule(
                name=rule.get("name", f"split[{n}]"),
                coefficient=Expr(rule["coefficient"]),
                factors=tuple(
                    FactorTemplate(
                        Expr(f["D"]), Expr(f.get("alpha", "alpha")), Expr(f.get("beta", "beta")), f.get("phi", "same")
                    )
                    for f in rule["factors"]
                ),
                variables=tuple(
                    (name, Expr(lo), Expr(hi)) for name, (lo, hi) in rule.get("vars", {}).items()
                ),
                split=rule.get("split"),
                where=Expr(rule["where"]) if "where" in rule else None,
            )
        )
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return RuleSet(
        version=doc["ruleset_version"],
        first_sum=doc.get("first_sum", {}).get("enabled", True),
        base_cases=tuple(base),
        splitting=tuple(split),
        odd_support_preserving=doc.get("odd_support_preserving", False),
        zero_if_noneffective=doc.get("zero_if_noneffective", True),
        constants=dict(doc.get("constants", {})),
        hash=hashlib.sha256(canonical.encode()).hexdigest()[:16],
        description=doc.get("description", ""),
    )


def load_rule_spec(document: Mapping[str, Any] | str, probes: Iterable[WState] | None = None) -> RuleSet:
    """Validate a rule document and audit every rule on probe states.

    Rejects documents that fail the schema, base values outside {0, 1}
    (unless ``strict_base_values`` is false), and rules that break
    conservation or fail to lower the induction measure on some probe state;
    the error names the offending state.
    """
    import jsonschema

    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise RuleSetError(f"rule file is not valid JSON: {exc}") from None
    try:
        jsonschema.validate(document, RULE_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise RuleSetError(f"rule file violates the schema at {where}: {exc.message}") from None
    rules = _compile_rules(document)

    probes = list(probes) if probes is not None else probe_states()
    strict = document.get("strict_base_values", True)
    for state in probes:
        if strict:
            value = match_base_case(state, rules)
            if value is not None and value not in (0, 1):
                raise RuleSetError(f"base case gives {value} at {state.key()}; base values must be 0 or 1")
        for rule in rules.splitting:
            for _, states in expand_rule(state, rule, rules):
                _guard(state, rule.name, states, rules)
    return rules


def load_bundled_rules(name: str = "structural") -> RuleSet:
    text = resources.files("wkit.data.rules").joinpath(f"{name}.json").read_text()
    return load_rule_spec(text)


# -- evaluation ------------------------------------------------------------


class Memo:
    """Thread-safe memo table keyed by canonical state strings.

    Inserts are idempotent: a key always maps to the same value, so a racing
    duplicate computation is harmless.  ``sink`` (if set) receives every new
    entry, e.g. to append it to a persistent cache file.
    """

    def __init__(self, initial: Mapping[str, int] | None = None, sink: Callable[[str, int], None] | None = None):
        self._data: dict[str, int] = dict(initial or {})
        self._lock = threading.Lock()
        self.sink = sink
        self.hits = 0
        self.misses = 0

    def get(self, key: str) -> int | None:
        with self._lock:
            value = self._data.get(key)
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
            return value

    def put(self, key: str, value: int):
        with self._lock:
            fresh = key not in self._data
            self._data[key] = value
        if fresh and self.sink is not None:
            self.sink(key, value)

    def clear(self):
        with self._lock:
            self._data.clear()

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key: str) -> bool:
        return key in self._data

    def items(self) -> list[tuple[str, int]]:
        with self._lock:
            return list(self._data.items())

    def stats(self) -> dict[str, int]:
        return {"entries": len(self._data), "hits": self.hits, "misses": self.misses}


def evaluate(state: WState, rules: RuleSet, memo: Memo | None = None, *, use_memo: bool = True) -> int:
    """Exact value of a w-number under ``rules``.

    Raises :class:`IncompleteRuleSetError` for a state that no base case
    covers and no rule reduces, and :class:`RuleSetError` when a rule
    application violates a structural guard.
    """
    if use_memo and memo is None:
        memo = Memo()
    return _evaluate(state, rules, memo if use_memo else None)


def _evaluate(state: WState, rules: RuleSet, memo: Memo | None) -> int:
    key = state.key()
    if memo is not None:
        cached = memo.get(key)
        if cached is not None:
            return cached
    value = match_base_case(state, rules)
    if value is None:
        if rules.zero_if_noneffective and not is_effective(state.D, state.pair):
            value = 0
        else:
            value = 0
            any_term = False
            for name, coef, states in successors(state, rules):
                any_term = True
                _guard(state, name, states, rules)
                term = coef
                for s in states:
                    if term == 0:
                        break
                    term *= _evaluate(s, rules, memo)
                value += term
            if not any_term:
                raise IncompleteRuleSetError(key)
    if memo is not None:
        memo.put(key, value)
    return value


@dataclass
class ProbeReport:
    state: str
    requirement: str
    value: int | None
    status: str
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def positivity_probe(
    pair: NodalPairLattice,
    D: DivisorClass,
    rules: RuleSet,
    alpha: TangencyVector | None = None,
    beta: TangencyVector | None = None,
    memo: Memo | None = None,
) -> ProbeReport:
    """Check the sign statements for w-numbers under a rule set.

    With ``alpha``/``beta`` omitted the strict statement W(D, 0, 2e_1) > 0
    for nef D with D.E = 2 is checked; otherwise W(D, alpha, beta) >= 0 for
    odd-supported vectors.  A failure points at a defect in the rule file.
    """
    strict = alpha is None and beta is None
    if strict:
        alpha, beta = TangencyVector(), TangencyVector.unit(1, 2)
    requirement = "> 0" if strict else ">= 0"
    if strict and (intersect(D, pair.E) != 2 or not is_nef(D, pair)):
        return ProbeReport(str(D), requirement, None, "precondition", "needs nef D with D.E = 2")
    if not strict and not (alpha.is_odd_supported() and beta.is_odd_supported()):
        return ProbeReport(str(D), requirement, None, "precondition", "vectors must be odd-supported")
    try:
        state = WState(pair, D, alpha, beta, WPhi.COMPLEMENT_CLASS)
    except ConservationError as exc:
        return ProbeReport(str(D), requirement, None, "precondition", str(exc))
    try:
        value = evaluate(state, rules, memo)
    except IncompleteRuleSetError as exc:
        return ProbeReport(state.key(), requirement, None, "incomplete", str(exc))
    good = value > 0 if strict else value >= 0
    if good:
        return ProbeReport(state.key(), requirement, value, "ok")
    return ProbeReport(
        state.key(), requirement, value, "violation",
        f"W = {value} violates W {requirement}; the rule transcription is defective",
    )
