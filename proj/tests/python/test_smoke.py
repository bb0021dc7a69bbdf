import math

import pytest

import flatorb


def test_catalog():
    keys = flatorb.catalog_list()
    assert "p6m" in keys and "G6" in keys and "K(7)" in keys
    entry = flatorb.catalog_entry("G6-hantzsche-wendt")
    assert entry["key"] == "G6"
    assert entry["expected"]["teich_dim"] == 3
    assert flatorb.check_entry("B2") == []


def test_teich():
    r = flatorb.teich("G3")
    assert r["summary"] == "components: (m=1,R,d=1),(m=1,C,d=1); dim 2"
    assert flatorb.teich("joyce-O2")["total_dim"] == 9
    assert flatorb.teich("K(5)")["total_dim"] == 3


def test_group_dict_round_trip():
    pg = flatorb.catalog_entry("pg")["group"]
    assert flatorb.holonomy_order(pg) == 2
    assert flatorb.is_torsion_free(pg)
    assert flatorb.classify(pg)["name"] == "K2"
    assert flatorb.normalize(pg)["dimension"] == 2


def test_torsion_and_homology():
    assert not flatorb.is_torsion_free("p2")
    assert flatorb.first_homology("G6") == "Z4+Z4"


def test_collapse():
    assert flatorb.collapse("pg", "1,0")["label"]["name"] == "interval"
    assert flatorb.collapse("G3", "1,0,0")["label"]["name"] == "S2(3,3,3;)"
    with pytest.raises(flatorb.FlatorbError):
        flatorb.collapse("G3", "1,1,1")


def test_lattices():
    assert flatorb.theta_n(2) == pytest.approx(math.pi / 4)
    sb = flatorb.special_basis([[1, 0], [0.9, 0.1]])
    assert sb["R0"] == pytest.approx(math.sqrt(0.5))
    lo, hi = flatorb.covering_radius([[1, 0], [0.5, math.sqrt(3) / 2]])
    assert lo <= 1 / math.sqrt(3) <= hi


def test_unknown_key():
    with pytest.raises(flatorb.FlatorbError):
        flatorb.teich("nope")


def test_svg():
    assert flatorb.render_svg("p4m").startswith("<?xml") or "<svg" in flatorb.render_svg("p4m")
