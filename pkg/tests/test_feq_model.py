import math

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from weilneg.feq_model import (CoefficientBound, CoefficientData, FunctionalEquationParams,
                               c_from_a_prime, ramanujan_c_bound, von_mangoldt)

LOG2 = math.log(2)


def tau_coefficients(n_max):
    """q * prod (1 - q^n)^24 expanded to q^n_max by plain polynomial products."""
    poly = np.zeros(n_max + 1, dtype=object)
    poly[0] = 1
    for n in range(1, n_max + 1):
        for _ in range(24):
            shifted = np.zeros_like(poly)
            shifted[n:] = poly[:-n]
            poly = poly - shifted
    return [0] + list(poly[:n_max])  # multiply by q


def test_von_mangoldt_examples():
    assert von_mangoldt(2) == pytest.approx(0.6931472, abs=1e-7)
    assert von_mangoldt(6) == 0
    assert von_mangoldt(8) == pytest.approx(0.6931472, abs=1e-7)
    assert von_mangoldt(1) == 0


def test_von_mangoldt_matches_factorisation_oracle():
    for n in range(1, 10_001):
        f = sympy.factorint(n)
        want = math.log(next(iter(f))) if len(f) == 1 else 0.0
        assert von_mangoldt(n) == pytest.approx(want, abs=1e-15), n


def test_tau_oracle_gives_weight12_a2():
    tau = tau_coefficients(3)
    assert tau[1] == 1 and tau[2] == -24 and tau[3] == 252
    a2 = tau[2] / 2**5.5
    assert a2 == pytest.approx(-0.5303301, abs=1e-7)
    # 24 log 2 / 2**5.5 from the tau oracle
    assert c_from_a_prime(a2, 2) == pytest.approx(0.3675968, abs=1e-7)


def test_c_from_a_prime_examples():
    assert c_from_a_prime(0.0, 3) == 0
    assert c_from_a_prime(2.0, 2) == pytest.approx(-1.3862944, abs=1e-7)
    with pytest.raises(ValueError):
        c_from_a_prime(1.0, 4)


def test_ramanujan_bound_examples():
    assert ramanujan_c_bound(2, 2) == pytest.approx(1.3862944, abs=1e-7)
    assert ramanujan_c_bound(15, 2) == 0
    assert ramanujan_c_bound(2, 1) == pytest.approx(0.6931472, abs=1e-7)
    assert CoefficientBound.ramanujan(9, 3).bound == pytest.approx(3 * math.log(3))


@pytest.mark.parametrize("p", list(sympy.primerange(2, 101)))
@pytest.mark.parametrize("d", [1, 2, 3])
def test_bound_dominates_c_at_primes(p, d):
    for a in np.linspace(-d, d, 9):
        assert abs(c_from_a_prime(a, p)) <= ramanujan_c_bound(p, d) + 1e-12


@given(st.floats(-5, 5), st.floats(-10, 10), st.sampled_from([2, 3, 5, 7, 97]))
def test_c_is_linear_in_a(a, lam, p):
    assert c_from_a_prime(lam * a, p) == pytest.approx(lam * c_from_a_prime(a, p),
                                                       rel=1e-12, abs=1e-12)


def test_feq_validation():
    FunctionalEquationParams(2, (0.25, 0.75), 3.0, -1)
    with pytest.raises(ValueError):
        FunctionalEquationParams(2, (0.25,), 3.0)
    with pytest.raises(ValueError):
        FunctionalEquationParams(1, (-0.1,), 3.0)
    with pytest.raises(ValueError):
        FunctionalEquationParams(1, (0.0,), 0.0)
    with pytest.raises(ValueError):
        FunctionalEquationParams(1, (0.0,), 1.0, sign=0)


def test_coefficient_data_derives_c_at_primes():
    cd = CoefficientData.from_primes({2: -math.sqrt(2), 3: -1 / math.sqrt(3)})
    assert cd.c(2) == pytest.approx(math.sqrt(2) * LOG2)
    assert cd.c(3) == pytest.approx(math.log(3) / math.sqrt(3))
    assert cd.dirichlet[1] == 1.0
    assert cd.satisfies_ramanujan(2)
    assert not CoefficientData.from_primes({2: 2.5}).satisfies_ramanujan(2)
    with pytest.raises(ValueError):
        CoefficientData(dirichlet={1: 2.0})
    with pytest.raises(ValueError):
        CoefficientData(dirichlet={2: 1.0}, log_derivative={2: 1.0})
