import pytest
from hypothesis import given, strategies as st

from exctwist.config import (D, RELAXED, build_config, config_from_json, intersection,
                             validate)
from exctwist.errors import ConfigError, UnknownComponentError

from helpers import C, strict_configs


def rules(cfg):
    return {v.rule for v in validate(cfg)}


def test_example_two_config():
    cfg = build_config([3], [(1, 2)])
    assert cfg.components == (D, C(1), C(2), C(3))
    assert intersection(cfg, D, C(2)) == 1
    assert intersection(cfg, D, C(1)) == intersection(cfg, D, C(3)) == 0
    assert validate(cfg) == []


def test_d_alone():
    cfg = build_config([])
    assert cfg.matrix == ((-1,),)
    assert cfg.canonical_row == (-1,)
    assert validate(cfg) == []


def test_loop_is_relaxed_only():
    loop = build_config([3], [(1, 1), (1, 3)], mode=RELAXED)
    assert validate(loop) == []
    strict = build_config([3], [(1, 1), (1, 3)])
    assert {"attachment<=1-per-chain", "tree"} <= rules(strict)


def test_seven_disjoint_curves_exceed_total():
    cfg = build_config([1] * 7, [(j, 1) for j in range(1, 8)])
    assert "total<=6" in rules(cfg)


def test_long_chain_rejected():
    assert {"chain<=6", "total<=6"} <= rules(build_config([7], [(1, 1)]))


def test_surface_degree_rules():
    assert "degree>2" in rules(build_config([1], [(1, 1)], surface_degree=2))
    # at most 9 - d curves
    assert "total<=6" in rules(build_config([3, 2], [(1, 1), (2, 1)], surface_degree=5))
    assert validate(build_config([2, 2], [(1, 1), (2, 1)], surface_degree=5)) == []


def test_unattached_chain_is_allowed():
    assert validate(build_config([2, 1], [(1, 1)])) == []


@pytest.mark.parametrize("lengths, att", [([3], [(1, 4)]), ([3], [(2, 1)]), ([3], [(1, 1), (1, 1)]), ([0], [])])
def test_build_errors(lengths, att):
    with pytest.raises(ConfigError):
        build_config(lengths, att)


def test_intersection_examples():
    cfg = build_config([3], [(1, 2)])
    assert intersection(cfg, C(1), C(2)) == 1
    assert intersection(cfg, C(1), C(3)) == 0
    assert intersection(cfg, D, D) == -1
    assert intersection(cfg, C(2), C(2)) == -2
    with pytest.raises(UnknownComponentError):
        intersection(cfg, C(4), D)


def test_names_and_parse():
    one = build_config([3], [(1, 2)])
    assert one.name(C(2)) == "C2"
    assert one.parse("C2") == C(2)
    two = build_config([2, 1], [(1, 1), (2, 1)])
    assert two.name(C(1, 2)) == "C2_1"
    assert two.parse("C2_1") == C(1, 2)
    with pytest.raises(UnknownComponentError):
        two.parse("C1")
    with pytest.raises(UnknownComponentError):
        one.parse("X")


def test_malformed_json():
    with pytest.raises(ConfigError):
        config_from_json({"chains": [{"attach": [1]}]})
    with pytest.raises(ConfigError):
        config_from_json({"chains": [{"length": 2}], "mode": "loose"})


@pytest.mark.parametrize("cfg", list(strict_configs(4)), ids=lambda c: str(c.to_json()))
def test_matrix_invariants(cfg):
    m = cfg.matrix
    size = len(cfg.components)
    assert all(m[i][j] == m[j][i] for i in range(size) for j in range(size))
    for c, pos in cfg.index.items():
        assert m[pos][pos] == (-1 if c == D else -2)
        assert cfg.canonical_row[pos] == (-1 if c == D else 0)
    assert validate(cfg) == []
    assert len(cfg.edges) < size


@given(st.lists(st.integers(1, 4), max_size=4).flatmap(
    lambda ls: st.tuples(st.just(ls), st.tuples(*[st.integers(0, n) for n in ls]),
                         st.sampled_from(["strict", "relaxed"]))))
def test_json_round_trip(data):
    lengths, picks, mode = data
    cfg = build_config(lengths, [(j, k) for j, k in enumerate(picks, start=1) if k], mode)
    assert config_from_json(cfg.to_json()) == cfg
