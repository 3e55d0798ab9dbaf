"""Independent brute-force references used by several test modules.

Nothing here imports the search or enumeration code under test.
"""

from __future__ import annotations

import itertools

import numpy as np


def brute_minus_one_curves(k: int, d_max: int = 4) -> set[tuple[int, ...]]:
    """All (d; m) with d <= d_max, D^2 = -1 and K.D = -1, by scanning a box.

    Every m_i lies in [-d, 1]: unless the class is E_i it meets E_i and the
    nef class L - E_i nonnegatively, so the box [-d, 1]^k is exhaustive.
    """
    found: set[tuple[int, ...]] = set()
    if k == 0:
        return found
    for d in range(0, d_max + 1):
        values = np.arange(-d, 2)
        grid = np.array(np.meshgrid(*([values] * k), indexing="ij")).reshape(k, -1).T
        sq = (grid * grid).sum(axis=1)
        sm = grid.sum(axis=1)
        ok = (d * d - sq == -1) & (-3 * d - sm == -1)
        for row in grid[ok]:
            found.add((d, *map(int, row)))
    return found


def brute_distributions(total: int, parities: list[int]) -> set[tuple[int, ...]]:
    """Every (r_0..r_g, m) with sum r + 2m = total and r_i of parity bh_i + 1."""
    out = set()
    if total < 0:
        return out
    for r in itertools.product(range(total + 1), repeat=len(parities)):
        rest = total - sum(r)
        if rest < 0 or rest % 2:
            continue
        if all(x % 2 == (p + 1) % 2 for x, p in zip(r, parities)):
            out.add((*r, rest // 2))
    return out


def direct_sum_half_plus_tail(table: dict[str, int], chain: list[str]) -> int:
    """table[chain[0]] / 2 + sum of table[c] over the rest of the chain."""
    head = table.get(chain[0], 0)
    assert head % 2 == 0
    return head // 2 + sum(table.get(c, 0) for c in chain[1:])


def synthetic_bh(model, seed: int = 0):
    """Attach a parity to every mod-2 pattern of every non-sphere component."""
    import random

    from wkit.real import TopoType

    rng = random.Random(seed)
    k = model.lattice.k
    table = {}
    for i, comp in enumerate(model.components):
        if comp.topo_type is TopoType.S2:
            continue
        for bits in itertools.product((0, 1), repeat=k + 1):
            pattern = f"{bits[0]};" + ",".join(map(str, bits[1:]))
            table[(i, pattern)] = rng.randint(0, 1)
    return model.with_bh(table)


def sample_classes(lattice, max_dk: int = 12):
    """Classes built from -K, L and the E_i with |D.K| <= max_dk, nonzero."""
    S = lattice
    gens = [-S.K, S.L] + [-S.E(i) for i in range(1, S.k + 1)][:3]
    out = set()
    for coeffs in itertools.product(range(4), range(4), *([range(2)] * (len(gens) - 2))):
        D = S.zero
        for c, g in zip(coeffs, gens):
            D = D + c * g
        if not D.is_zero() and abs(D.dot(S.K)) <= max_dk:
            out.add(D)
    return sorted(out, key=lambda c: c.coeffs)


# A made-up rule set that respects conservation and lowers the induction
# measure.  E_1 and E_2 meet E = L - E_1 - E_2 - E_3 once and are orthogonal
# to K + E, which makes the bookkeeping easy to check by hand.
SYNTHETIC_RULES = {
    "ruleset_version": "synthetic-1",
    "description": "test fixture",
    "first_sum": {"enabled": True},
    "odd_support_preserving": False,
    "base_cases": [
        {"name": "small", "when": "nb == 0 and na <= 2", "value": 1},
        {"name": "rest", "when": "nb == 0", "value": 0},
    ],
    "splitting": [
        {
            "name": "peel",
            "coefficient": "1",
            "factors": [{"D": "D - E1", "alpha": "alpha", "beta": "beta - e(1)"}],
        },
        {
            "name": "branch",
            "vars": {"l": [1, "dE"]},
            "coefficient": "l + 1",
            "factors": [
                {"D": "l*E1", "alpha": "0", "beta": "l*e(1)", "phi": "shifted"},
                {"D": "D - l*E1 - E2", "alpha": "alpha", "beta": "beta - (l+1)*e(1)"},
            ],
        },
    ],
}
