import itertools

import pytest

from wkit.errors import ParseError, UnsupportedError, WrongRegimeError
from wkit.invariants import (
    PM,
    InvariantDescriptor,
    Phi,
    PhiTag,
    Provenance,
    closed_form_equal_genus,
    closed_form_pencil,
    cubic_elliptic_example,
    descriptor,
    gw_bound_check,
    parse_eps,
    validate_hypotheses,
)
from wkit.real import ComponentSelection, catalog_model, enumerate_distributions
from wkit.store import BundledData


@pytest.fixture(scope="module")
def cubic():
    return BundledData.load().model(3, "RP2+S2")


def test_pencil_specializes_to_cubic_example(cubic):
    S = cubic.lattice
    D = -2 * S.K - S.E(6)
    dists = enumerate_distributions(cubic, ComponentSelection((0, 1)), D)
    assert len(dists) == 6
    count = 0
    for dist, (e0, e1) in itertools.product(dists, itertools.product((1, -1), repeat=2)):
        desc = descriptor(cubic, D, (0, 1), (e0, e1), dist.r, dist.m)
        general = closed_form_pencil(desc)
        special = cubic_elliptic_example(*dist.r, e0, e1)
        assert general.value == special.value
        assert general.provenance is Provenance.CLOSED_FORM
        count += 1
    assert count == 24


def test_equal_genus(cubic):
    desc = descriptor(cubic, -cubic.lattice.K, (0, 1))
    assert closed_form_equal_genus(desc).value == 1
    assert closed_form_equal_genus(desc, half_curve_parity=1).value == 1
    twisted = descriptor(cubic, -cubic.lattice.K, (0, 1), phi="COMPLEMENT")
    assert closed_form_equal_genus(twisted, half_curve_parity=1).value == -1
    with pytest.raises(WrongRegimeError):
        closed_form_equal_genus(descriptor(cubic, -2 * cubic.lattice.K, (0, 1)))
    with pytest.raises(ValueError):
        closed_form_equal_genus(desc, half_curve_parity=2)


def test_pencil_complement_term():
    model = catalog_model(2, "3S2")
    S = model.lattice
    D = -S.K + (S.L - S.E(1))
    assert D.dot(D) + D.dot(S.K) == 2  # p_a = 2 = g + 1
    plain = descriptor(model, D, (0, 1), (1, 1), (1, 1), 1)
    twisted = descriptor(model, D, (0, 1), (1, 1), (1, 1), 1, phi="COMPLEMENT")
    assert closed_form_pencil(plain).value == 0
    assert closed_form_pencil(twisted).value == -2
    with pytest.raises(UnsupportedError):
        closed_form_pencil(descriptor(model, D, (0, 1), (1, 1), (1, 1), 1, phi="CUSTOM:x"))
    with pytest.raises(ValueError):
        closed_form_pencil(descriptor(model, D, (0, 1), (1, 1)))
    with pytest.raises(WrongRegimeError):
        closed_form_pencil(descriptor(model, -S.K, (0, 1), (1, 1), (1, 1), 0))


def test_cubic_example_parities():
    assert cubic_elliptic_example(4, 1, 1, 1).value == 4
    assert cubic_elliptic_example(0, 5, -1, -1).value == -4
    with pytest.raises(ValueError):
        cubic_elliptic_example(1, 2, 1, 1)
    with pytest.raises(ValueError):
        cubic_elliptic_example(2, 2, 1, 1)


def test_validation_flags(cubic):
    S = cubic.lattice
    good = validate_hypotheses(descriptor(cubic, -2 * S.K - S.E(6), (0, 1)))
    assert good.ok and not good.issues
    bad = validate_hypotheses(descriptor(cubic, S.E(1), (0, 1)))
    assert bad.nef is False and bad.big is False and not bad.ok
    unknown = validate_hypotheses(descriptor(cubic, S.L, (0, 1)))
    assert unknown.parity_congruence is False
    assert any("bh parity" in msg for msg in unknown.issues)
    structural = validate_hypotheses(descriptor(cubic, -S.K, (0, 1, 2), (1, 1, 1)))
    assert structural.structural is False


def test_genus_too_small(cubic):
    rep = validate_hypotheses(descriptor(cubic, -cubic.lattice.K, (0, 1)))
    assert rep.genus_ok
    deg4 = catalog_model(4, "2S2")
    line = deg4.lattice.L
    rep = validate_hypotheses(descriptor(deg4, line, (0, 1)))
    assert rep.genus_ok is False


def test_descriptor_key_round_trip(cubic):
    S = cubic.lattice
    desc = descriptor(cubic, -2 * S.K - S.E(6), (0, 1), (1, -1), (2, 1), 1, phi="COMPLEMENT")
    again = InvariantDescriptor.from_key(desc.key(), cubic)
    assert again == desc and again.key() == desc.key()
    summed = descriptor(catalog_model(2, "4S2"), "6;-2,-2,-2,-2,-2,-2,-2", (0, 1, 2), (1, 1, PM))
    assert "eps=1,1,pm" in summed.key()
    assert InvariantDescriptor.from_key(summed.key()) == summed
    with pytest.raises(ParseError):
        InvariantDescriptor.from_key("deg=3|nonsense")


def test_phi_and_eps_parsing():
    assert Phi.parse("0").tag is PhiTag.ZERO
    assert Phi.parse("C").tag is PhiTag.COMPLEMENT_CLASS
    assert str(Phi.parse("custom:abc")) == "CUSTOM:abc"
    with pytest.raises(ParseError):
        Phi.parse("sideways")
    assert parse_eps("1,-1,pm") == (1, -1, PM)
    with pytest.raises(ParseError):
        parse_eps("2")


def test_descriptor_shape_checks(cubic):
    with pytest.raises(ValueError):
        descriptor(cubic, -cubic.lattice.K, (0, 1), (1,))
    with pytest.raises(ValueError):
        descriptor(cubic, -cubic.lattice.K, (0, 1), (1, 1), (1, 1, 1), 0)


def test_gw_bound():
    assert gw_bound_check(112, 12300)
    assert gw_bound_check(-204, 204)
    assert not gw_bound_check(205, 204)
    with pytest.raises(ValueError):
        gw_bound_check(1, -1)
