import pytest

from platlab import (enumerate_closed, make_mo, make_powerset_space,
                     separated_product)
from platlab.closure import EnumerationLimitError
from platlab.lattice import (PermutationGroup, analysis_report, automorphisms,
                             center, central_cover, close_group, compose,
                             covering_property, find_orthocomplementation,
                             invert, is_closed_group, is_irreducible,
                             is_transitive, orthomodularity)


def test_perm_utilities():
    p, q = (1, 2, 0), (0, 2, 1)
    assert compose(p, q) == (1, 0, 2)
    assert invert(p) == (2, 0, 1)
    assert compose(p, invert(p)) == (0, 1, 2)
    assert not is_closed_group([p], 3)
    closed = close_group([p], 3)
    assert len(closed) == 3 and is_closed_group(closed, 3)


def test_automorphism_groups():
    mo2 = make_mo(2)
    sys = enumerate_closed(mo2)
    ortho = automorphisms(mo2, sys, mode="ortho")
    assert len(ortho) == 8 and ortho.closed_flag
    assert is_transitive(ortho)
    # without the polarity constraint every atom permutation fixing the
    # family qualifies
    assert len(automorphisms(mo2, sys, mode="lattice")) == 24

    pow3 = make_powerset_space(3)
    psys = enumerate_closed(pow3)
    assert len(automorphisms(pow3, psys, mode="lattice")) == 6


def test_automorphisms_from_generators():
    mo2 = make_mo(2)
    sys = enumerate_closed(mo2)
    g = automorphisms(mo2, sys, mode="ortho", generators=[(1, 0, 2, 3),
                                                          (2, 3, 0, 1)])
    assert len(g) == 8 and g.closed_flag
    with pytest.raises(ValueError, match="not an automorphism"):
        automorphisms(mo2, sys, mode="ortho", generators=[(1, 2, 3, 0)])


def test_automorphism_search_limit():
    s = make_powerset_space(5)
    sys = enumerate_closed(s)
    with pytest.raises(EnumerationLimitError):
        automorphisms(s, sys, mode="lattice", max_atoms=4)


def test_product_lacks_covering_and_orthomodularity(mo2_product):
    prod, psys = mo2_product
    cov = covering_property(psys)
    assert cov.holds is False and cov.witness is not None
    a, p, j = cov.witness
    assert p not in a and set(a) < set(j)
    om = orthomodularity(prod, psys)
    assert om.holds is False and om.witness is not None


def test_boolean_control_has_both():
    prod, psys = separated_product(make_powerset_space(2),
                                   make_powerset_space(2))
    assert covering_property(psys).holds
    assert orthomodularity(prod, psys).holds


def test_mo_is_orthomodular():
    mo3 = make_mo(3)
    sys = enumerate_closed(mo3)
    assert covering_property(sys).holds
    assert orthomodularity(mo3, sys).holds


def test_center_and_irreducibility(mo2_product):
    prod, psys = mo2_product
    assert len(center(psys, prod)) == 2
    assert is_irreducible(psys, prod)
    assert central_cover(psys, prod, 0) == prod.full

    pw, pwsys = separated_product(make_powerset_space(2),
                                  make_powerset_space(2))
    assert len(center(pwsys, pw)) == len(pwsys) == 16
    assert not is_irreducible(pwsys, pw)
    assert central_cover(pwsys, pw, 0) == 1


def test_orthocomplementation_recovery():
    mo2 = make_mo(2)
    sys = enumerate_closed(mo2)
    oc = find_orthocomplementation(sys)
    assert oc == {0: 15, 15: 0, 1: 2, 2: 1, 4: 8, 8: 4}

    pow3 = make_powerset_space(3)
    oc = find_orthocomplementation(enumerate_closed(pow3))
    assert oc is not None
    assert all(oc[oc[m]] == m and oc[m] == 7 ^ m for m in oc)


def test_no_orthocomplementation_on_asymmetric_family():
    # 5-element lattice with 2 atoms but only 1 coatom has none
    from platlab.closure import ClosureSystem
    from platlab.orthospace import OrthoSpace
    s = OrthoSpace(["a", "b", "c"], (0, 0, 0))
    sys = ClosureSystem(s, [0, 1, 2, 3, 7], from_relation=False)
    assert find_orthocomplementation(sys) is None


def test_analysis_report_shape(mo2, mo2_sys, mo2_product):
    prod, psys = mo2_product
    rep = analysis_report(prod, psys)
    assert rep["covering"]["holds"] is False
    assert rep["orthomodular"]["holds"] is False
    assert rep["center_size"] == 2
    assert rep["irreducible"] is True
    assert rep["orthocomplementation"] == "found"
    assert rep["aut_order"] is None  # 16 atoms is past the default limit

    rep = analysis_report(mo2, mo2_sys)
    assert rep["covering"]["holds"] and rep["orthomodular"]["holds"]
    assert rep["aut_order"] == 8


def test_transitivity_negative():
    g = PermutationGroup(3, ((0, 1, 2), (0, 2, 1)), True)
    assert not is_transitive(g)
