import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tschirnhaus.bounds import (
    REFERENCE, bounds_row, bounds_table, brauer, check_lemma_dim, dim_hypersurfaces,
    dim_moduli_cubics, format_ratio, fw, lemma_dim_sides, phi, prior_bound, psi_sequence,
    rho_search, waldron_feasible,
)

FW_VALUES = [3, 4, 5, 9, 41, 121, 841, 6721, 60481, 604801, 6652801, 78485043, 320082459, 3632428801]
MINIMIZERS = [(3, 1), (3, 2), (3, 3), (3, 4), (3, 5), (3, 6), (3, 7), (3, 8), (4, 8), (4, 9), (4, 10)]


def test_psi_examples():
    assert psi_sequence(3, 1).psi == (1, 3, 7)
    assert psi_sequence(2, 1).psi == (1, 3)
    assert str(psi_sequence(3, 2)) == "2 6 13"
    with pytest.raises(ValueError):
        psi_sequence(1, 1)


def test_dimension_counts():
    assert dim_hypersurfaces(3, 3) == 19
    assert dim_hypersurfaces(2, 2) == 5
    assert dim_moduli_cubics(3) == 4
    assert dim_moduli_cubics(1) == 0
    # cubic threefolds contain lines, cubic surfaces contain lines
    assert waldron_feasible(3, 1, 3) and waldron_feasible(3, 1, 4)
    assert not waldron_feasible(3, 2, 3)
    with pytest.raises(ValueError):
        waldron_feasible(2, 1, 3)


def test_phi_examples():
    assert phi(3, 1) == 9
    assert phi(3, 2) == 41
    assert phi(2, 2) == 13
    assert phi(2, 1) == 4


@pytest.mark.parametrize("r,value", list(zip(range(2, 16), FW_VALUES)))
def test_fw_values(r, value):
    assert fw(r)[0] == value


def test_fw_minimizers():
    assert [fw(r)[1] for r in range(5, 16)] == MINIMIZERS
    assert fw(4)[1] == (2, 1)
    assert fw(3)[1] is None


def test_brauer_and_prior():
    assert [brauer(r) for r in (1, 2, 7)] == [2, 2, 721]
    assert prior_bound(6) == (44, "Sylvester")
    assert prior_bound(13) == (math.factorial(12) + 1, "Brauer")
    assert REFERENCE.sylvester_number(6) == 44


def test_table_rows():
    rows = bounds_table(15)
    assert [row.r for row in rows] == list(range(2, 16))
    assert [row.fw for row in rows] == FW_VALUES
    row = bounds_row(6)
    assert row.ratio == Fraction(44, 41) and row.ratio_display() == "1.07"
    assert row.to_json()["ratio"] == "44/41"
    with pytest.raises(ValueError):
        bounds_table(1)


def test_format_ratio():
    assert format_ratio(Fraction(2, 3)) == "0.66"
    assert format_ratio(Fraction(2, 3), rounding="half-up") == "0.67"
    assert format_ratio(Fraction(-1, 8), rounding="half-up") == "-0.13"
    assert format_ratio(Fraction(5), places=0) == "5"
    with pytest.raises(ValueError):
        format_ratio(Fraction(1), rounding="banker")


@given(st.fractions(min_value=0, max_value=1000, max_denominator=997))
def test_truncated_display_is_a_lower_bound(q):
    shown = Fraction(format_ratio(q))
    assert shown <= q < shown + Fraction(1, 100)


def test_fw_is_monotone_and_odd():
    values = [fw(r)[0] for r in range(1, 31)]
    assert values == sorted(values)
    assert all(v % 2 for v in values[3:])


@pytest.mark.parametrize("r", range(2, 31))
def test_fw_below_brauer(r):
    """The construction should never be worse than Brauer's bound."""
    assert fw(r)[0] <= brauer(r)


def test_lemma_dim_sides_example():
    s = lemma_dim_sides(3, 1)
    assert s["moduli"] == dim_moduli_cubics(3)
    assert s["second_lhs"] == 4 + 3 + 1 + 1 and s["second_rhs"] == 9


@pytest.mark.parametrize("d", range(2, 7))
def test_lemma_dim_sweep(d):
    bad = [k for k in range(1, 13) if not check_lemma_dim(d, k)]
    assert bad == []


def test_rho_search():
    assert rho_search(3, 20) == 3
    with pytest.raises(ValueError):
        rho_search(2, 5)
