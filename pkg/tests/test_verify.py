"""Tests for string C-group certification.

The counterexample used throughout is the order-8 dihedral group with the
central rotation square adjoined as a third generator: every generator is an
involution and non-adjacent generators commute, yet the standard subgroups
overlap more than their generator sets say, so only the intersection check
can reject it.
"""

import pytest

from polycert.errors import (
    HomomorphismError,
    ParameterError,
    UncertifiedInputError,
)
from polycert.families import family_a, family_g, family_h, family_k, family_m
from polycert.realize import RealizedGroup, _realize_cached, realize
from polycert.verify import (
    IntersectionEvidence,
    SggiSpec,
    certify,
    check_homomorphism,
    check_intersection_property_full,
    check_intersection_property_recursive,
    check_involutions,
    check_string_property,
    identity_generator_images,
    quotient_criterion,
    schlafli_type,
)
from polycert.words import Presentation, Word, generator, pair, power


def hidden_center_presentation():
    """Dihedral of order 8 with r2 identified with the central (r0 r1)^2."""
    return Presentation(3, (
        power(generator(0), 2),
        power(generator(1), 2),
        power(generator(2), 2),
        power(pair(0, 1), 4),
        generator(2) * power(pair(0, 1), 2),
        power(pair(0, 2), 2),
        power(pair(1, 2), 2),
    ))


def noncommuting_ends_presentation():
    """Order 12, with the outer generator pair of order 3 instead of 2."""
    return Presentation(3, (
        power(generator(0), 2),
        power(generator(1), 2),
        power(generator(2), 2),
        power(pair(0, 1), 2),
        power(pair(1, 2), 2),
        power(pair(0, 2), 3),
    ))


def test_certificate_fields_tight44(tight44):
    _, _, cert = tight44
    assert cert.passed
    assert cert.order == 32
    assert cert.rank == 3
    assert cert.schlafli_type == (4, 4)
    assert cert.declared_type == (4, 4)
    assert cert.involution_orders == (2, 2, 2)
    assert cert.involutions_ok and cert.string_ok and cert.intersection_ok
    assert cert.string_failures == ()
    assert cert.intersection_mode == "recursive"
    assert cert.tight
    assert not cert.degenerate
    assert cert.minimal
    assert cert.warnings == ()
    assert dict(cert.parabolic_orders) == {(1, 2): 8, (0, 2): 4, (0, 1): 8}


def test_hidden_center_fails_intersection_only():
    cert = certify(hidden_center_presentation())
    assert cert.order == 8
    assert cert.schlafli_type == (4, 2)
    assert cert.involutions_ok
    assert cert.string_ok
    assert not cert.intersection_ok
    assert not cert.passed
    bad = [e for e in cert.intersection_evidence if not e.ok]
    assert bad == [IntersectionEvidence((0, 1), (1, 2), 4, 2)]


def test_hidden_center_full_mode_evidence():
    cert = certify(hidden_center_presentation(), mode="full")
    assert cert.intersection_mode == "full"
    assert not cert.intersection_ok
    bad = [(e.left, e.right, e.got, e.expected)
           for e in cert.intersection_evidence if not e.ok]
    assert bad == [
        ((2,), (0, 1), 2, 1),
        ((0, 1), (0, 2), 4, 2),
        ((0, 1), (1, 2), 4, 2),
    ]


def test_modes_agree_on_verdict(tight44):
    p_good, _, _ = tight44
    samples = [
        p_good,
        family_h(10, 2, 2),
        family_a(3, 1, (2, 2)),
        hidden_center_presentation(),
    ]
    for p in samples:
        rec = certify(p, mode="recursive")
        full = certify(p, mode="full")
        assert rec.intersection_ok == full.intersection_ok


def test_pruned_and_exhaustive_sweeps_agree(tight44):
    _, rg, _ = tight44
    ok_pruned, ev_pruned = check_intersection_property_full(rg, pruned=True)
    ok_full, ev_full = check_intersection_property_full(rg, pruned=False)
    assert ok_pruned and ok_full
    assert len(ev_full) > len(ev_pruned)
    assert set(ev_pruned) <= set(ev_full)
    bad = RealizedGroup(hidden_center_presentation())
    assert check_intersection_property_full(bad, pruned=True)[0] is False
    assert check_intersection_property_full(bad, pruned=False)[0] is False


def test_recursive_evidence_layout(tight44):
    _, rg, _ = tight44
    ok, evidence = check_intersection_property_recursive(rg)
    assert ok
    assert [(e.left, e.right) for e in evidence] == [
        ((0,), (1,)),
        ((1,), (2,)),
        ((0, 1), (1, 2)),
    ]


def test_basic_checks(tight44):
    _, rg, _ = tight44
    assert check_involutions(rg) == (2, 2, 2)
    assert check_string_property(rg) == (True, ())
    assert schlafli_type(rg) == (4, 4)


def test_string_property_failure_detected():
    cert = certify(noncommuting_ends_presentation())
    assert cert.order == 12
    assert cert.involutions_ok
    assert not cert.string_ok
    assert cert.string_failures == ((0, 2),)
    assert not cert.passed
    assert cert.degenerate  # both adjacent products have order 2


def test_declared_type_mismatch_warns(tight44):
    p, _, _ = tight44
    cert = certify(SggiSpec(p, (4, 8)))
    assert cert.passed  # a wrong declaration does not fail the certificate
    assert any("declared 8" in w for w in cert.warnings)
    assert certify(SggiSpec(p, (4, 4))).warnings == ()


def test_collapsed_generator_warns():
    p = Presentation(2, (
        power(generator(0), 2),
        power(generator(1), 2),
        generator(0),
    ))
    cert = certify(p)
    assert cert.involution_orders == (1, 2)
    assert not cert.involutions_ok
    assert not cert.passed
    assert any("r0 collapsed" in w for w in cert.warnings)


def test_spec_validation():
    missing_square = Presentation(2, (power(generator(0), 2),))
    with pytest.raises(ParameterError):
        SggiSpec(missing_square)
    with pytest.raises(ParameterError):
        certify(missing_square)
    good = family_h(10, 2, 2)
    with pytest.raises(ParameterError):
        SggiSpec(good, declared_type=(4,))
    with pytest.raises(ValueError):
        certify(good, mode="sideways")


def test_homomorphism_onto_facet_quotient():
    g = family_g(4, 10, (2, 2, 2))
    k = family_k(4, (2, 2, 2))
    check_homomorphism(g, k, identity_generator_images(4))
    with pytest.raises(HomomorphismError) as exc:
        check_homomorphism(k, g, identity_generator_images(4))
    assert exc.value.relator in k.relators


def test_homomorphism_image_validation():
    g = family_h(10, 2, 2)
    with pytest.raises(ParameterError):
        check_homomorphism(g, g, identity_generator_images(2))
    with pytest.raises(ParameterError):
        check_homomorphism(g, g, [generator(0), generator(1), "r2"])
    with pytest.raises(ParameterError):
        check_homomorphism(g, g, [generator(0), generator(1), generator(7)])


def test_vertex_collapse_mapping():
    m = family_m(4, 10, (2, 2, 2))
    a = family_a(3, 1, (2, 2))
    # r0 -> identity, r_i -> r_(i-1): the vertex-collapsed group maps onto
    # the rank-3 vertex-figure scheme
    images = [Word(), generator(0), generator(1), generator(2)]
    check_homomorphism(m, a, images)


def test_quotient_criterion_facet_side():
    g = family_g(4, 10, (2, 2, 2))
    k = family_k(4, (2, 2, 2))
    res = quotient_criterion(g, k, side="facet")
    assert res.ok
    assert res.source_order == 1024
    assert res.target_order == 128
    assert res.source_section_order == res.target_section_order == 32
    assert "inherits" in res.messages[0]


def test_quotient_criterion_vertex_side_fails():
    g = family_g(4, 10, (2, 2, 2))
    k = family_k(4, (2, 2, 2))
    res = quotient_criterion(g, k, side="vertex")
    assert not res.ok
    assert res.source_section_order == 256
    assert res.target_section_order == 32
    assert "differs" in res.messages[0]


def test_quotient_criterion_validation(tight44):
    p, _, cert = tight44
    g = family_g(4, 10, (2, 2, 2))
    k = family_k(4, (2, 2, 2))
    with pytest.raises(ValueError):
        quotient_criterion(g, k, side="edge")
    with pytest.raises(ParameterError):
        quotient_criterion(g, p)
    with pytest.raises(UncertifiedInputError):
        quotient_criterion(g, k, source_certificate=cert)
    failing = certify(hidden_center_presentation())
    with pytest.raises(UncertifiedInputError):
        quotient_criterion(hidden_center_presentation(),
                           hidden_center_presentation(),
                           source_certificate=failing)


def test_certification_enumeration_budget():
    """A fresh certification runs exactly one coset enumeration; everything
    else is quotient partitions of the one table."""
    cases = [
        (family_h(11, 4, 4), 1),
        (family_g(4, 10, (2, 2, 2)), 6),
        (family_g(5, 12, (2, 2, 2, 2)), 11),
    ]
    for p, quotient_budget in cases:
        _realize_cached.cache_clear()
        cert = certify(p)
        rg = realize(p)
        assert cert.passed
        assert rg.stats["enumerations"] == 1
        assert rg.stats["quotient_actions"] <= quotient_budget
        assert rg.stats["left_arrays"] <= rg.rank
