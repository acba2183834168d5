"""Tests for face lattices and flag graphs.

The classical polyhedra pin the combinatorics to values known from outside
this package: the square has 4 vertices and 4 edges, the cube 8/12/6, the
tetrahedron 4/6/4, and the smallest self-dual torus map of square type has
f-vector (4, 8, 4).
"""

from collections import Counter

import numpy as np
import pytest

from polycert.errors import FormatError, LimitExceededError, UncertifiedInputError
from polycert.families import coxeter_string_presentation
from polycert.polytope import (
    build_lattice,
    check_diamond,
    check_flag_connectivity,
    check_flag_matchings,
    check_section_connectivity,
    export_hasse,
    flag_graph,
)
from polycert.realize import realize
from polycert.verify import certify
from polycert.words import Presentation, generator, pair, power


def realized_with_lattice(p):
    cert = certify(p)
    assert cert.passed
    rg = realize(p)
    return rg, cert, build_lattice(rg, cert)


def failing_presentation():
    """Order 8 with a hidden central generator; fails the intersection check."""
    return Presentation(3, (
        power(generator(0), 2),
        power(generator(1), 2),
        power(generator(2), 2),
        power(pair(0, 1), 4),
        generator(2) * power(pair(0, 1), 2),
        power(pair(0, 2), 2),
        power(pair(1, 2), 2),
    ))


def test_square():
    rg, cert, lat = realized_with_lattice(coxeter_string_presentation((4,)))
    assert rg.order == 8
    assert cert.tight
    assert lat.rank == 2
    assert lat.f_vector == (4, 4)
    assert lat.node_count == 10
    assert len(lat.covers) == 16
    assert lat.group_order == 8


def test_cube_and_tetrahedron():
    rg, _, lat = realized_with_lattice(coxeter_string_presentation((4, 3)))
    assert rg.order == 48
    assert lat.f_vector == (8, 12, 6)
    v, e, f = lat.f_vector
    assert v - e + f == 2

    rg, _, lat = realized_with_lattice(coxeter_string_presentation((3, 3)))
    assert rg.order == 24
    assert lat.f_vector == (4, 6, 4)


def test_tight44_lattice(tight44):
    p, rg, cert = tight44
    lat = build_lattice(rg, cert)
    assert lat.f_vector == (4, 8, 4)
    assert lat.node_count == 18
    assert len(lat.covers) == 40
    # every edge joins 2 vertices and lies on 2 squares; every vertex and
    # every square touches 4 edges
    below = Counter(b for _, b in lat.covers)
    above = Counter(a for a, _ in lat.covers)
    for idx in range(8):
        edge = lat.node_id(1, idx)
        assert below[edge] == 2
        assert above[edge] == 2
    for idx in range(4):
        assert above[lat.node_id(0, idx)] == 4
        assert below[lat.node_id(0, idx)] == 1  # only the least face sits under a vertex
        assert below[lat.node_id(2, idx)] == 4


def test_cover_ranks_are_adjacent(tight44):
    _, rg, cert = tight44
    lat = build_lattice(rg, cert)
    def rank_of(node):
        return int(lat.node_label(node).split(":")[0])
    for a, b in lat.covers:
        assert rank_of(b) - rank_of(a) == 1


def test_node_addressing(tight44):
    _, rg, cert = tight44
    lat = build_lattice(rg, cert)
    assert lat.node_id(-1, 0) == 0
    assert lat.node_id(3, 0) == lat.node_count - 1
    for r, count in enumerate(lat.f_vector):
        for i in range(count):
            assert lat.node_label(lat.node_id(r, i)) == f"{r}:{i}"
    assert lat.node_label(0) == "-1:0"
    assert lat.node_label(lat.node_count - 1) == "3:0"
    with pytest.raises(IndexError):
        lat.node_id(-1, 1)
    with pytest.raises(IndexError):
        lat.node_id(0, 4)
    with pytest.raises(IndexError):
        lat.node_id(5, 0)


def test_flag_graph_structure(tight44):
    _, rg, cert = tight44
    g = flag_graph(rg, cert)
    assert g.n_flags == 32
    ok, bad = check_flag_matchings(g)
    assert ok and bad == ()
    assert check_flag_connectivity(g)
    for i in range(3):
        assert g.adjacent(0, i) == int(rg.right[i][0])
        assert g.adjacent(g.adjacent(7, i), i) == 7


def test_section_connectivity_and_diamond(tight44):
    _, rg, cert = tight44
    assert check_section_connectivity(rg, cert)
    ok, failures = check_diamond(rg, cert)
    assert ok and failures == ()


def test_polyhedra_pass_flag_checks():
    for k in [(4,), (3, 3), (4, 3)]:
        rg, cert, _ = realized_with_lattice(coxeter_string_presentation(k))
        g = flag_graph(rg, cert)
        assert check_flag_matchings(g)[0]
        assert check_flag_connectivity(g)
        assert check_section_connectivity(rg, cert)
        assert check_diamond(rg, cert)[0]


def test_refuses_uncertified_input(tight44):
    p_good, rg_good, cert_good = tight44
    p_bad = failing_presentation()
    cert_bad = certify(p_bad)
    rg_bad = realize(p_bad)
    assert not cert_bad.passed
    with pytest.raises(UncertifiedInputError):
        build_lattice(rg_bad, cert_bad)
    with pytest.raises(UncertifiedInputError):
        flag_graph(rg_bad, cert_bad)
    with pytest.raises(UncertifiedInputError):
        build_lattice(rg_good, cert_bad)
    with pytest.raises(UncertifiedInputError):
        check_diamond(rg_bad, cert_bad)
    with pytest.raises(UncertifiedInputError):
        check_section_connectivity(rg_good, cert_bad)


def test_exhaustive_check_guards(tight44):
    _, rg, cert = tight44
    with pytest.raises(LimitExceededError):
        check_diamond(rg, cert, max_order=16)
    with pytest.raises(LimitExceededError):
        check_section_connectivity(rg, cert, max_order=16)


def test_export_edges():
    _, _, lat = realized_with_lattice(coxeter_string_presentation((4,)))
    text = export_hasse(lat, fmt="edges")
    assert text.endswith("\n")
    lines = text.strip().split("\n")
    assert len(lines) == 16
    label_to_node = {lat.node_label(n): n for n in range(lat.node_count)}
    parsed = []
    for line in lines:
        lo, hi = line.split(" ")
        parsed.append((label_to_node[lo], label_to_node[hi]))
    assert tuple(parsed) == lat.covers


def test_export_dot():
    _, _, lat = realized_with_lattice(coxeter_string_presentation((4,)))
    text = export_hasse(lat, fmt="dot")
    assert text.startswith("digraph hasse {")
    assert "rankdir=BT;" in text
    assert text.count("->") == len(lat.covers)
    assert text.count("label=") == lat.node_count
    assert text.rstrip().endswith("}")


def test_export_bad_format(tight44):
    _, rg, cert = tight44
    lat = build_lattice(rg, cert)
    with pytest.raises(FormatError):
        export_hasse(lat, fmt="json")
