import pytest

from exctwist.cohom import make_atom
from exctwist.config import RELAXED, build_config
from exctwist.errors import PreconditionError, RelaxedConfigError
from exctwist.lattice import DivisorClass, pair
from exctwist.reducer import (TwistCertificate, certificate_for, certificate_from_json,
                              peel, peel_options, reduce_class, strict_ready,
                              verify_certificate)

from helpers import C

EX2 = build_config([3], [(1, 2)])
LOOP = build_config([3], [(1, 1), (1, 3)], mode=RELAXED)
E2 = DivisorClass(1, ((1, 2, 1),))


def cls(cfg, *chains):
    return DivisorClass(1, tuple(tuple(c) for c in chains))


def test_peel_options_case_three():
    opts = peel_options(EX2, E2)
    assert set(opts) == {(C(2),), (C(1), C(2)), (C(2), C(3))}
    assert opts[0] == (C(2),)


def test_peel_options_case_one():
    cfg = build_config([1], [(1, 1)])
    assert peel_options(cfg, cls(cfg, [1])) == [(C(1),)]


def test_peel_options_case_five():
    cfg = build_config([5], [(1, 3)])
    e = cls(cfg, [1, 2, 3, 2, 1])
    opts = peel_options(cfg, e)
    assert len(opts) == 6
    for supp in opts:
        assert pair(cfg, e, DivisorClass.from_components(cfg, supp)) == -1


def test_reduced_chain_offers_its_whole_support():
    e = cls(EX2, [1, 1, 1])
    assert set(peel_options(EX2, e)) == {(C(1),), (C(3),), (C(1), C(2), C(3))}


def test_peel_option_errors():
    with pytest.raises(PreconditionError):
        peel_options(EX2, cls(EX2, [0, 0, 0]))
    with pytest.raises(PreconditionError):
        peel_options(EX2, cls(EX2, [1, 1, 0]) + DivisorClass(0, ((0, 1, 0),)))
    with pytest.raises(RelaxedConfigError):
        peel_options(LOOP, E2)


def test_peel_examples():
    assert peel(EX2, E2, [C(2)]) == cls(EX2, [1, 1, 1])
    assert peel(EX2, cls(EX2, [1, 1, 1]), [C(1), C(2), C(3)]) == cls(EX2, [0, 0, 0])
    a1 = build_config([1], [(1, 1)])
    assert peel(a1, cls(a1, [1]), [C(1)]) == cls(a1, [0])
    with pytest.raises(PreconditionError):
        peel(EX2, E2, [C(1)])


def test_reduce_examples():
    tree = reduce_class(EX2, E2, "all")
    assert [(C(2),), (C(1), C(2), C(3))] in list(tree.branches())
    assert tree.count() == len(list(tree.branches()))
    assert reduce_class(EX2, cls(EX2, [0, 0, 0])).twists == ()
    a2 = build_config([2], [(1, 1)])
    first = reduce_class(a2, cls(a2, [1, 1]))
    assert first.supports() == [(C(2),), (C(1),)]
    with pytest.raises(ValueError):
        reduce_class(EX2, E2, "best")


def test_generated_certificates_verify():
    for branch in reduce_class(EX2, E2, "all").branches():
        rep = verify_certificate(EX2, E2, certificate_for(EX2, branch), generated=True)
        assert rep.ok
        assert any(c.ok is None and "construction" in c.detail for c in rep.checks)


def test_example_two_with_degrees():
    cert = certificate_from_json(EX2, {
        "seed": {"degree": -2},
        "twists": [{"support": ["C2"], "deg": {"C2": 0}},
                   {"support": ["C1", "C2", "C3"], "deg": {"C1": -1, "C2": 2, "C3": -1}}]})
    rep = verify_certificate(EX2, E2, cert)
    assert rep.ok and all(c.ok is True for c in rep.checks)
    assert certificate_from_json(EX2, cert.to_json(EX2)) == cert


def test_loop_certificate():
    cert = TwistCertificate((make_atom(LOOP, [C(2), C(3)], {C(2): 0, C(3): 0}),
                             make_atom(LOOP, [C(1), C(2)], {C(1): 0, C(2): 0})), -1)
    rep = verify_certificate(LOOP, E2, cert)
    assert rep.ok
    assert [c.name for c in rep.checks if c.step == "L1" and c.ok] == [
        "spherical", "chi(L,E')=-1", "class additivity", "intermediate exceptional",
        "h0(E',L)=0", "h0(L,E')=0", "h1(L,E')=1"]


def test_non_spherical_twist_fails():
    cert = TwistCertificate((make_atom(EX2, [C(1)]), make_atom(EX2, [C(3)])))
    rep = verify_certificate(EX2, cls(EX2, [1, 0, 1]), cert)
    assert not rep.ok
    bad = TwistCertificate((make_atom(EX2, [C(1), C(2)], thick=[C(2)]),))
    rep = verify_certificate(EX2, cls(EX2, [1, 2, 0]), bad)
    assert any(c.name == "spherical" and c.ok is False for c in rep.failures())


def test_wrong_degrees_are_reported():
    # E' restricts onto O_C2(2), so a twist by O_C2(3) has h0(E', L) = 2
    cert = TwistCertificate((make_atom(EX2, [C(2)], {C(2): 3}),
                             make_atom(EX2, [C(1), C(2), C(3)], {C(1): -1, C(2): 2, C(3): -1})), -2)
    rep = verify_certificate(EX2, E2, cert)
    assert ("L1", "h0(E',L)=0") in [(c.step, c.name) for c in rep.failures()]


def test_user_certificate_without_degrees_is_unchecked():
    cert = certificate_for(EX2, [(C(2),)])
    rep = verify_certificate(EX2, cls(EX2, [0, 1, 0]), cert)
    assert rep.ok
    assert any(c.ok is None and c.detail == "no sheaf data" for c in rep.checks)


def test_telescoping_failure():
    cert = certificate_for(EX2, [(C(2),)])
    assert not verify_certificate(EX2, E2, cert).ok


def test_strict_ready():
    assert strict_ready(EX2)
    assert not strict_ready(LOOP)
