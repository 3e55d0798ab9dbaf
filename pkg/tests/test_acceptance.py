"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import time
from concurrent.futures import ThreadPoolExecutor

import pytest

from oracles import (
    SYNTHETIC_RULES,
    brute_distributions,
    brute_minus_one_curves,
    direct_sum_half_plus_tail,
    sample_classes,
    synthetic_bh,
)
from wkit import lattice
from wkit.cli import EXIT_OK, main
from wkit.errors import CapabilityError
from wkit.invariants import closed_form_pencil, cubic_elliptic_example, descriptor, gw_bound_check
from wkit.lattice import DivisorClass, NodalPairLattice, arithmetic_genus, intersect, is_nef
from wkit.real import ComponentSelection, catalog, enumerate_distributions, expected_dimension
from wkit.reductions import TableBackend, combo_e14, genus1_degeneration_sums, genus2_e15, genus3_e16, table1_pipeline
from wkit.store import BundledData
from wkit.wnumbers import (
    Memo,
    WPhi,
    WState,
    evaluate,
    induction_measure,
    load_bundled_rules,
    load_rule_spec,
    positivity_probe,
    successors,
    vector_pairs,
)

PAIR = NodalPairLattice.standard()
TABLE1 = (112, 36, 12, 12, 4, 8, 16)


@pytest.fixture
def report(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} [{criterion}] {detail}")
        return ok

    return emit


def test_criterion_1_lattice(report):
    rng = random.Random(1)
    start = time.perf_counter()
    lattice._minus_one_curves_cached.cache_clear()
    n6, n7 = len(lattice.minus_one_curves(6)), len(lattice.minus_one_curves(7))
    cases = 0
    for _ in range(1000):
        k = rng.randint(0, 8)
        A, B, C = (DivisorClass(tuple(rng.randint(-9, 9) for _ in range(k + 1))) for _ in range(3))
        n = rng.randint(-9, 9)
        assert intersect(A + B, C) == intersect(A, C) + intersect(B, C)
        assert intersect(n * A, B) == n * intersect(A, B) and intersect(A, B) == intersect(B, A)
        assert arithmetic_genus(A + B) == arithmetic_genus(A) + arithmetic_genus(B) + intersect(A, B) - 1
        cases += 1
    elapsed = time.perf_counter() - start
    exhaustive = all(
        {c.coeffs for c in lattice.minus_one_curves(k)} == brute_minus_one_curves(k) for k in (6, 7)
    )
    ok = n6 == 27 and n7 == 56 and exhaustive and cases >= 1000 and elapsed < 5
    assert report(1, ok, f"(-1)-curves k=6: {n6}, k=7: {n7}; {cases} random bilinearity/adjunction cases; {elapsed:.2f}s")


def test_criterion_2_closed_form(report):
    cubic = BundledData.load().model(3, "RP2+S2")
    S = cubic.lattice
    D = -2 * S.K - S.E(6)
    dists = enumerate_distributions(cubic, ComponentSelection((0, 1)), D)
    equal = 0
    for dist, (e0, e1) in itertools.product(dists, itertools.product((1, -1), repeat=2)):
        general = closed_form_pencil(descriptor(cubic, D, (0, 1), (e0, e1), dist.r, dist.m)).value
        equal += general == cubic_elliptic_example(*dist.r, e0, e1).value
    assert report(2, len(dists) == 6 and equal == 24, f"{equal}/24 exact equalities over {len(dists)} distributions")


def test_criterion_3_feasibility(report):
    start = time.perf_counter()
    checked = 0
    for n, base in enumerate(catalog()):
        model = synthetic_bh(base, seed=n)
        for D in sample_classes(model.lattice, max_dk=12):
            for g in range(1, min(3, len(model.components) - 1) + 1):
                for sel in itertools.combinations(range(len(model.components)), g + 1):
                    sel = ComponentSelection(sel)
                    parities = [model.bh_parity(i, D) for i in sel.indices]
                    got = {d.as_tuple() for d in enumerate_distributions(model, sel, D)}
                    assert got == brute_distributions(expected_dimension(D, g), parities)
                    checked += 1
    elapsed = time.perf_counter() - start
    assert report(3, elapsed < 10, f"{checked} (model, class, selection) cases equal brute force; {elapsed:.2f}s")


def _random_states(n, seed):
    rng = random.Random(seed)
    S, K, E = PAIR.base, PAIR.K, PAIR.E
    gens = [-K, -K - E, S.L - S.E(4), S.E(1), S.E(2), S.L - S.E(1)]
    out = []
    while len(out) < n:
        D = S.zero
        for gen in gens:
            D = D + rng.randint(0, 2) * gen
        w = intersect(D, E)
        if 0 <= w <= 6:
            a, b = rng.choice(vector_pairs(w))
            out.append(WState(PAIR, D, a, b, rng.choice(list(WPhi))))
    return out


def test_criterion_4_structural(report):
    start = time.perf_counter()
    rules = load_rule_spec(SYNTHETIC_RULES)
    states = _random_states(500, seed=2024)
    expansions = 0
    for s in states:
        mu = induction_measure(s)
        for _, _, factors in successors(s, rules):
            for f in factors:
                assert (f.alpha + f.beta).iweight() == intersect(f.D, PAIR.E)
                assert induction_measure(f) < mu
                expansions += 1
    plain = [evaluate(s, rules, use_memo=False) for s in states]
    memo = Memo()
    order = list(range(len(states)))
    random.Random(5).shuffle(order)
    with ThreadPoolExecutor(max_workers=8) as pool:
        got = dict(zip(order, pool.map(lambda i: evaluate(states[i], rules, memo), order)))
    transparent = [got[i] for i in range(len(states))] == plain
    elapsed = time.perf_counter() - start
    ok = transparent and elapsed < 30
    assert report(4, ok, f"{len(states)} states, {expansions} factor states checked, memo transparent: {transparent}; {elapsed:.2f}s")


def test_criterion_5_reductions(report):
    rng = random.Random(55)
    checks = 0
    for formula in (combo_e14, genus2_e15, genus3_e16):
        for n in (2, 4, 5):
            D = -n * PAIR.K
            chain = [D - (2 * m) * PAIR.E for m in range(n // 2 + 1)]
            table = {str(chain[0]): 2 * rng.randint(-10**9, 10**9)}
            table.update({str(c): rng.randint(-10**9, 10**9) for c in chain[1:]})
            assert formula(D, TableBackend(table), PAIR) == direct_sum_half_plus_tail(table, [str(c) for c in chain])
            checks += 1
    for _ in range(20):
        w = {m: rng.randint(-999, 999) for m in range(1, rng.randint(1, 9) + 1)}
        plus, minus = genus1_degeneration_sums(-2 * PAIR.K, w)
        assert plus + minus == 2 * sum(2 ** (m - 1) * m * v for m, v in w.items() if m % 2)
        assert minus == sum(2 ** (m - 1) * m * v for m, v in w.items())
        checks += 1
    assert report(5, True, f"{checks} exact comparisons against direct summation and the parity identity")


def test_criterion_6_gw_bound(report):
    bundled = BundledData.load()
    pairs = [(c.w1, c.gw1) for c in bundled.table1]
    ok = len(pairs) == 7 and all(gw_bound_check(w, gw) for w, gw in pairs)
    assert report(6, ok, " ".join(f"{w}<={gw}" for w, gw in pairs))


def test_criterion_7_table1_oracle(report, capsys):
    code = main(["table1"])
    lines = capsys.readouterr().out.strip().splitlines()
    values = []
    for col in BundledData.load().table1:
        values.append(table1_pipeline(col.model, oracle=BundledData.load().table1_ledger().lookup).value)
    ok = code == EXIT_OK and len(lines) == 7 and all(l.startswith("PASS") for l in lines) and tuple(values) == TABLE1
    assert report("7 oracle mode", ok, f"table1 round-trips {tuple(values)}")


def test_criterion_7_table1_recursion(report):
    rules = load_bundled_rules()
    try:
        values = tuple(table1_pipeline(m, rules=rules).value for m in catalog())
    except CapabilityError as exc:
        report("7 recursion", False, f"not reproducible from the bundled rule set: {exc}")
        pytest.skip("conditional: needs a transcription of the companion splitting formula")
    assert report("7 recursion", values == TABLE1, f"recursion gives {values}")


def test_criterion_8_positivity_and_asymptotics(report):
    rules = load_bundled_rules()
    S = PAIR.base
    orthogonal = [-PAIR.K, S.L - S.E(1), S.L - S.E(2), S.L - S.E(3), 2 * S.L - S.E(1) - S.E(2) - S.E(4)]
    samples = []
    for c in itertools.product(range(3), repeat=len(orthogonal)):
        D = -PAIR.K - PAIR.E
        for n, gen in zip(c, orthogonal):
            D = D + n * gen
        if intersect(D, PAIR.E) == 2 and is_nef(D, PAIR):
            samples.append(D)
    samples = sorted(set(samples), key=lambda c: c.coeffs)[:30]
    reports = [positivity_probe(PAIR, D, rules) for D in samples]
    violations = [r for r in reports if r.status == "violation"]
    incomplete = [r for r in reports if r.status == "incomplete"]
    ok = len(samples) >= 20 and not violations and not incomplete
    detail = (f"{len(samples)} nef D' with D'.E = 2: {sum(r.ok for r in reports)} positive, "
              f"{len(incomplete)} beyond the bundled rule set, {len(violations)} violations")
    report(8, ok, detail)
    assert not violations
    if incomplete:
        pytest.skip("conditional: positivity and the slope sequence need the transcribed splitting formula")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
