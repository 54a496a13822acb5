import numpy as np
import pytest
from hypothesis import given, strategies as st

from pogs.exceptions import DomainError, InvalidPatternError
from pogs.pattern import (
    GroupPattern,
    contiguous_pattern,
    explicit_pattern,
    parse_bitstring,
    periodic_pattern,
    round_half_up,
)


def test_bearing_example():
    p = periodic_pattern(6400, 80, n1=4, m=4)
    assert (p.n0, p.k, p.k1, len(p)) == (76, 320, 16, 244)
    assert p.k0 == 304
    assert p.b[:5].tolist() == [1, 1, 1, 1, 0]
    assert p.b[-4:].tolist() == [1, 1, 1, 1]


def test_small_periodic_layout():
    p = periodic_pattern(100, 20, n1=2, m=3)
    assert p.bitstring == "110001100011"
    assert (p.n1, p.n0, p.m, p.k, p.k1) == (2, 3, 3, 15, 6)


def test_contiguous():
    p = contiguous_pattern(8)
    assert p.bitstring == "1" * 8
    assert (p.k, p.k1, p.m, p.n0) == (8, 8, 1, 0)


def test_explicit_trims_trailing_zeros():
    p = explicit_pattern([1, 0, 1, 0, 0])
    assert p.bitstring == "101"
    assert (p.k, p.k1) == (5, 2)
    assert not p.periodic


def test_leading_zeros_are_kept():
    assert explicit_pattern([0, 1, 1]).bitstring == "011"


def test_parse_bitstring():
    assert parse_bitstring("1100 11").bitstring == "110011"
    assert parse_bitstring("1,0,1").bitstring == "101"


@pytest.mark.parametrize("text", ["", "12", "abc", "  "])
def test_parse_bitstring_rejects(text):
    with pytest.raises(InvalidPatternError):
        parse_bitstring(text)


@pytest.mark.parametrize("bits", [[0, 0], [], [1, 2], [[1, 0]]])
def test_explicit_rejects(bits):
    with pytest.raises(InvalidPatternError):
        explicit_pattern(bits)


def test_n1_fills_period():
    with pytest.raises(InvalidPatternError):
        periodic_pattern(6400, 1600, n1=4, m=4)


@pytest.mark.parametrize("kwargs", [
    dict(fs=0, fault_freq=80),
    dict(fs=6400, fault_freq=-1),
    dict(fs=6400, fault_freq=80, n1=0),
    dict(fs=6400, fault_freq=80, m=1),
    dict(fs=6400, fault_freq=80, n1=1.5),
])
def test_periodic_domain(kwargs):
    with pytest.raises(DomainError):
        periodic_pattern(**kwargs)


def test_contiguous_domain():
    with pytest.raises(DomainError):
        contiguous_pattern(0)


def test_period_rounding_half_up():
    # 6400 / 73.2 = 87.43 -> 87 ; 100 / 40 = 2.5 -> 3
    assert periodic_pattern(6400, 73.2, 2, 2).n0 == 85
    assert periodic_pattern(100, 40, 1, 2).n0 == 2
    assert round_half_up(2.5) == 3 and round_half_up(3.5) == 4


def test_immutable_and_hashable():
    p = periodic_pattern(6400, 80)
    with pytest.raises(ValueError):
        p.b[0] = 0
    assert p == periodic_pattern(6400, 80)
    assert len({p, periodic_pattern(6400, 80)}) == 1
    assert p != contiguous_pattern(8)


def test_to_dict():
    d = periodic_pattern(6400, 80, 4, 4).to_dict()
    assert d["stored_length"] == 244 and d["k1"] == 16 and d["b"].startswith("11110")


@given(
    fs=st.integers(1000, 20000),
    f=st.floats(20, 400),
    n1=st.integers(1, 4),
    m=st.integers(2, 6),
)
def test_periodic_invariants(fs, f, n1, m):
    period = round_half_up(fs / f)
    if n1 >= period:
        return
    p = periodic_pattern(fs, f, n1, m)
    assert p.k1 == m * n1 == int(p.b.sum())
    assert p.k == m * period
    assert len(p) == (m - 1) * period + n1
    assert p.b[-1] == 1
    ac = np.correlate(p.b.astype(float), p.b.astype(float), "full")[len(p) - 1:]
    # the only nonzero lags beyond the ones run are multiples of the period
    assert ac[period] == (m - 1) * n1
    assert np.all(ac[n1:period - n1 + 1] == 0)


def test_builders_return_group_pattern():
    assert isinstance(contiguous_pattern(3), GroupPattern)
