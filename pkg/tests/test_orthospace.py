import json

import pytest

from platlab import (dump_space, load_space, make_mo, make_powerset_space,
                     make_quadratic_line_space, validate_relation)
from platlab.orthospace import OrthoSpace, SpaceFormatError


def test_mo_shape():
    s = make_mo(3)
    assert s.size == 6
    assert s.pairs() == [(0, 1), (2, 3), (4, 5)]
    assert s.labels == ("a1", "a1'", "a2", "a2'", "a3", "a3'")


def test_mo_rejects_zero():
    with pytest.raises(ValueError):
        make_mo(0)


def test_powerset_space_all_pairs():
    s = make_powerset_space(4)
    assert len(s.pairs()) == 6
    assert all(s.orth(p, q) == (p != q)
               for p in range(4) for q in range(4))


def test_validate_relation_good():
    for s in (make_mo(2), make_powerset_space(3),
              make_quadratic_line_space(3, 1)):
        rep = validate_relation(s)
        assert rep.all_ok
        assert rep.separating.witness is None


def test_validate_relation_reflexive_witness():
    s = OrthoSpace(["x", "y"], (0b01, 0b01))
    rep = validate_relation(s)
    assert rep.anti_reflexive == (False, 0)


def test_validate_relation_asymmetric_witness():
    s = OrthoSpace(["x", "y"], (0b10, 0b00))
    rep = validate_relation(s)
    assert rep.symmetric == (False, (0, 1))


def test_validate_relation_not_separating():
    # two unrelated atoms: {p}^⊥⊥ = Σ, lex-least witness is atom 0
    s = OrthoSpace(["x", "y"], (0, 0))
    rep = validate_relation(s)
    assert rep.separating == (False, 0)


def test_quadratic_space_matches_mo():
    # anisotropic line geometry over GF(q) pairs its q+1 points into
    # (q+1)/2 orthogonal couples
    for q, lam in ((3, 1), (7, 1), (5, 2)):
        s = make_quadratic_line_space(q, lam)
        assert s.size == q + 1
        pairs = s.pairs()
        assert len(pairs) == (q + 1) // 2
        touched = {i for p in pairs for i in p}
        assert touched == set(range(q + 1))
        mo = make_mo((q + 1) // 2)
        assert sorted(r.bit_count() for r in s.rows) == \
            sorted(r.bit_count() for r in mo.rows)


def test_quadratic_space_rejects_isotropic():
    with pytest.raises(ValueError, match=r"isotropic.*witness vector"):
        make_quadratic_line_space(3, 2)  # x² + 2y² has root (1,1) mod 3


def test_quadratic_space_rejects_even_q():
    with pytest.raises(ValueError, match="even q"):
        make_quadratic_line_space(4, 1)


def test_dump_load_round_trip():
    for s in (make_mo(3), make_powerset_space(2),
              make_quadratic_line_space(5, 2)):
        assert load_space(dump_space(s)) == s


def test_load_rejects_malformed_json():
    with pytest.raises(SpaceFormatError, match="line 1"):
        load_space("{not json")


def test_load_rejects_bad_entries():
    base = {"atoms": ["a", "b"], "orth": [[0, 1]]}

    def doc(**kw):
        return json.dumps({**base, **kw})

    with pytest.raises(SpaceFormatError, match="entry 0.*out of range"):
        load_space(doc(orth=[[0, 5]]))
    with pytest.raises(SpaceFormatError, match="i < j"):
        load_space(doc(orth=[[1, 0]]))
    with pytest.raises(SpaceFormatError, match="duplicated"):
        load_space(doc(orth=[[0, 1], [0, 1]]))
    with pytest.raises(SpaceFormatError, match="pair of atom indices"):
        load_space(doc(orth=[[0]]))
    with pytest.raises(SpaceFormatError, match="atoms"):
        load_space(json.dumps({"orth": []}))
