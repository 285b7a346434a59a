import pytest
from hypothesis import given, settings, strategies as st

from exctwist.cohom import hom_dims, make_atom, mukai_check
from exctwist.config import build_config
from exctwist.errors import NoExtensionRuleError, PreconditionError, SymbolicDegreesError
from exctwist.factorization import (Factor, Factorization, absorb, extension_atom,
                                    factorization_from_json, hn_factorization,
                                    perfectness_check, perfectness_report, swap)

from helpers import C

A3 = build_config([3])


def atom(degs, thick=()):
    return make_atom(A3, list(degs), degs, thick)


def test_perfectness_examples():
    assert perfectness_check(A3, Factorization.of(atom({C(2): 0}), atom({C(1): 0, C(2): 0})))
    bad = Factorization.of(atom({C(1): 0, C(2): 0}), atom({C(2): 0}))
    assert not perfectness_check(A3, bad)
    assert any("h0(G1, G2)" in p for p in perfectness_report(A3, bad))
    assert perfectness_check(A3, hn_factorization(A3, C(1), {1: 1, 0: 1}))


def test_perfectness_needs_concrete_degrees():
    with pytest.raises(SymbolicDegreesError):
        perfectness_check(A3, Factorization.of(make_atom(A3, [C(1)])))


def test_hn_shapes():
    F = hn_factorization(A3, C(3), {0: 3})
    assert [(f.atom.degree(C(3)), f.mult) for f in F.factors] == [(0, 3)]
    F = hn_factorization(A3, C(1), {0: 2, 1: 1})
    assert [(f.atom.degree(C(1)), f.mult) for f in F.factors] == [(1, 1), (0, 2)]
    assert hn_factorization(A3, C(1), {}).factors == ()


def test_swap_examples():
    S, B = atom({C(2): 0}), atom({C(1): 0, C(2): 1, C(3): 0})
    out = swap(A3, Factorization.of(S, B), 1)
    assert [f.atom for f in out.factors] == [B, S]
    far = swap(A3, Factorization.of(atom({C(1): 0}), atom({C(3): 0})), 1)
    assert far.factors[0].atom.support == (C(3),)
    with pytest.raises(PreconditionError):
        swap(A3, Factorization.of(atom({C(1): 0}), atom({C(1): -2})), 1)
    with pytest.raises(PreconditionError):
        swap(A3, Factorization.of(S, B), 2)


def test_extension_examples():
    a = {C(1): 0, C(2): 0, C(3): 0}
    assert extension_atom(A3, atom({C(1): 0, C(2): 0}), atom({C(3): 0})) == atom({C(1): 0, C(2): 1, C(3): 0})
    thick = extension_atom(A3, atom({C(1): 0, C(2): 0}), atom({C(2): -1, C(3): 0}))
    assert thick == atom({C(1): 1, C(2): -1, C(3): 0}, [C(2)])
    assert extension_atom(A3, atom({C(1): 2}), atom({C(1): 0})) == atom({C(1): 0}, [C(1)])
    with pytest.raises(PreconditionError):
        extension_atom(A3, atom({C(1): 0}), atom({C(3): 0}))
    with pytest.raises(NoExtensionRuleError):
        extension_atom(A3, atom(a, [C(2)]), atom({C(2): 0}))


def test_absorb_examples():
    F = Factorization.of(atom({C(1): -1}), (atom({C(2): 0}), 2))
    out = absorb(A3, F, 2, 1)
    assert [(f.atom, f.mult) for f in out.factors] == [(atom({C(2): 0}), 1), (atom({C(1): 0, C(2): 0}), 1)]
    assert out.divisor_class(A3) == F.divisor_class(A3)

    F = Factorization.of(atom({C(1): 0, C(2): 0}), atom({C(2): -1}), atom({C(3): 0}))
    out = absorb(A3, F, 2, 2)
    assert [f.atom for f in out.factors] == [atom({C(1): 0, C(2): 0}), atom({C(2): 0, C(3): 0})]

    with pytest.raises(PreconditionError):
        absorb(A3, Factorization.of(atom({C(1): 0}), atom({C(3): 0})), 2, 1)
    with pytest.raises(PreconditionError):
        absorb(A3, Factorization.of(atom({C(1): 0}), atom({C(2): 0})), 2, 3)


def test_absorb_output_satisfies_mukai():
    G, S = atom({C(1): -1}), atom({C(2): 0})
    E = extension_atom(A3, G, S)
    dims = [hom_dims(A3, x, y) for x, y in [(S, S), (G, G), (S, G), (G, S), (E, E)]]
    assert mukai_check(*dims)
    assert hom_dims(A3, S, E).h0 == hom_dims(A3, S, G).h0


def test_direct_summands_must_commute():
    base = atom({C(1): 0, C(2): 0, C(3): 0})
    ok = Factorization((Factor(base), Factor(atom({C(3): 0}), 1, joined=True)))
    assert len(ok.positions()) == 1
    bad = Factorization((Factor(atom({C(3): 0})), Factor(atom({C(3): -2}), 1, joined=True)))
    assert any("do not split" in p for p in perfectness_report(A3, bad))


def test_json_round_trip():
    F = Factorization((Factor(atom({C(1): 0, C(2): 0, C(3): 0}, [C(2)])), Factor(atom({C(3): -1}), 2, True)))
    assert factorization_from_json(A3, F.to_json(A3)) == F


small = st.integers(-2, 2)


@settings(max_examples=80, deadline=None)
@given(small, small, small, small)
def test_rewrites_preserve_class(a1, a2, b2, b3):
    F = Factorization.of(atom({C(1): a1, C(2): a2}), atom({C(2): b2}), atom({C(3): b3}))
    for op in (lambda: swap(A3, F, 1), lambda: swap(A3, F, 2),
               lambda: absorb(A3, F, 2, 1), lambda: absorb(A3, F, 2, 2)):
        try:
            out = op()
        except (PreconditionError, NoExtensionRuleError):
            continue
        assert out.divisor_class(A3) == F.divisor_class(A3)
