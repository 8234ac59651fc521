import random
from fractions import Fraction

import pytest

from tschirnhaus.linalg import det_bareiss, discriminant_monic
from tschirnhaus.rings import GF
from tschirnhaus.smoothness import (
    BudgetExceeded, ParameterError, brute_force_smooth, orbit_certificate,
    quadric_discriminant_scaling, smooth_parameters, t12_gram, verify_certificate,
)


def test_certificate_n9_p2():
    cert = orbit_certificate(9, 2, 1)
    assert cert.case == 1 and cert.pencil == "radical" and cert.i == 3
    assert cert.orbits == ((1, 5, 7, 8, 4, 2), (3, 6))
    assert cert.nu == {j: 5 * j % 9 for j in range(1, 9)}
    assert cert.bound_N == 121
    assert cert.witness_field.p == 2 and cert.witness_field.m == 110
    cert.check()


def test_certificate_case_two():
    cert = orbit_certificate(10, 2, 1)
    assert cert.case == 2 and cert.modulus == 9 and cert.pencil == "linear"
    cert.check()
    assert orbit_certificate(4, 2, 1).case == 2


@pytest.mark.parametrize("n,p,r", [(4, 3, 1), (3, 2, 1), (9, 4, 1), (9, 2, 0)])
def test_certificate_parameter_errors(n, p, r):
    with pytest.raises(ParameterError):
        orbit_certificate(n, p, r)


def test_certificate_json_is_plain():
    obj = orbit_certificate(7, 2, 1).to_json()
    assert obj["bound_N"] == 15 and obj["witness_field"]["GF"]["m"] == 4
    assert sorted(int(k) for k in obj["nu"]) == list(range(1, 7))


def test_brute_force_quintic_pencil():
    rep = brute_force_smooth(5, (1, 2), GF(11), 1)
    assert rep.smooth and rep.verdict == "smooth"
    assert rep.points_checked == 1464 and rep.on_variety == 144
    assert rep.to_json()["verdict"] == "smooth"


def test_zero_parameter_is_singular_everywhere():
    rep = brute_force_smooth(5, (1, 2), GF(11), 0)
    assert rep.singular_count == rep.on_variety == rep.points_checked


@pytest.mark.parametrize("n,q", [(4, 3), (5, 3), (6, 5), (7, 3), (8, 3), (9, 5)])
def test_pencil_quadric_smooth_for_nonzero_parameter(n, q):
    F = GF(q)
    rng = random.Random(n)
    a = F(rng.randrange(1, q))
    assert brute_force_smooth(n, (1, 2), F, a).smooth
    # reduced linear analogue on b_1..b_{n-1}
    assert brute_force_smooth(n, (1, 2), F, a, pencil="linear", reduced=True).smooth


def test_smooth_parameters_lists_every_unit():
    F = GF(7)
    assert smooth_parameters(5, (1, 2), F) == [F(k) for k in range(1, 7)]


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        verify_certificate(orbit_certificate(9, 2, 1))
    with pytest.raises(ValueError):
        brute_force_smooth(5, (1, 2), GF(11), 1, scope="some")


def test_gram_matrix_matches_quadric():
    a = [Fraction(1), Fraction(-2), Fraction(0), Fraction(3)]
    G = t12_gram(a)
    assert all(G[i][j] == G[j][i] for i in range(3) for j in range(3))
    # determinant over discriminant is the same constant at another point
    b = [Fraction(2), Fraction(5), Fraction(-1), Fraction(1)]
    assert det_bareiss(G) / discriminant_monic(a) == det_bareiss(t12_gram(b)) / discriminant_monic(b)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_discriminant_scaling_is_constant(n):
    rep = quadric_discriminant_scaling(n, trials=6, seed=n)
    assert rep.constant
    assert rep.value == Fraction(1, n)


def test_discriminant_scaling_rejects_small_n():
    with pytest.raises(ParameterError):
        quadric_discriminant_scaling(2)


def test_repeated_root_gives_degenerate_gram():
    a = [Fraction(-3), Fraction(3), Fraction(-1)]   # (x - 1)^3
    assert discriminant_monic(a) == 0
    assert det_bareiss(t12_gram(a)) == 0


@pytest.mark.parametrize("n,p,r", [(4, 2, 1), (5, 2, 1), (6, 2, 1), (7, 2, 1)])
def test_certificate_agrees_with_brute_force(n, p, r):
    """Where the witness field is small enough, T_{1,2,i} should be smooth at the witness."""
    cert = orbit_certificate(n, p, r)
    cert.check()
    try:
        rep = verify_certificate(cert)
    except BudgetExceeded:
        pytest.skip(f"{cert.witness_field.name} is beyond the enumeration budget")
    assert rep.smooth, f"singular points at witness: {rep.singular_points[:3]}"
