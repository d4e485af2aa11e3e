import math

import pytest
import sympy

from schottky_zeta import (
    char_sum,
    gamma_m,
    hs_prime_sum,
    jensen_bound,
    kronecker,
    primes_between,
)
from schottky_zeta.arithmetic import SieveCapError


def _legendre_bruteforce(d, p):
    # odd prime p: 0 if p | d, else quadratic residue test by Euler's criterion
    d = d % p
    if d == 0:
        return 0
    return 1 if pow(d, (p - 1) // 2, p) == 1 else -1


def test_kronecker_against_legendre():
    for p in (3, 5, 7, 11, 13, 97):
        for d in range(-30, 31):
            if d == 0:
                continue
            assert kronecker(d, p) == _legendre_bruteforce(d, p), (d, p)


def test_kronecker_bottom_one():
    for a in range(-20, 21):
        assert kronecker(a, 1) == 1


def test_kronecker_even_bottom():
    # (a/2) is 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8
    assert kronecker(2, 2) == 0
    assert kronecker(7, 2) == 1
    assert kronecker(3, 2) == -1
    assert kronecker(5, 2) == -1
    assert kronecker(9, 2) == 1


def test_kronecker_multiplicative_bottom():
    for a in range(-15, 16):
        if a == 0:
            continue
        for m in range(1, 20):
            for n in range(1, 20):
                assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


def test_kronecker_rejects_nonpositive_bottom():
    with pytest.raises(ValueError):
        kronecker(3, 0)
    with pytest.raises(ValueError):
        kronecker(3, -5)


def test_primes_between_matches_sympy():
    for lo, hi in ((0, 30), (10, 11), (5, 50), (100, 200), (9999, 10200)):
        assert primes_between(lo, hi) == list(sympy.primerange(lo + 1, hi + 1))


def test_primes_between_half_open():
    # interval is (lo, hi]: endpoints behave asymmetrically
    assert primes_between(5, 11) == [7, 11]
    assert primes_between(4.5, 11.5) == [5, 7, 11]
    assert primes_between(20, 22) == []


def test_primes_between_cap():
    with pytest.raises(SieveCapError):
        primes_between(0, 10**9)


def test_char_sum_single_prime():
    # only prime in (5, 10] is 7 and (5/7) = -1
    rec = char_sum(5, 10.0)
    assert rec.prime_count == 1
    assert rec.total == pytest.approx(-math.log(7.0), rel=1e-15)
    assert rec.unweighted == -1.0
    assert rec.bound_ratio == pytest.approx(
        math.log(7.0) / (math.sqrt(10.0) * math.log(50.0) ** 2), rel=1e-14
    )


def test_char_sum_rejects_bad_input():
    with pytest.raises(ValueError):
        char_sum(0, 100.0)
    with pytest.raises(ValueError):
        char_sum(5, 2.0)


def test_hs_prime_sum_two_paths(g2):
    rec = hs_prime_sum(g2, 2.0**-6, 0.9, 12.0)
    assert rec.primes == (7, 11)
    assert rec.direct == pytest.approx(rec.decomposed, rel=1e-10)
    assert rec.decomposed == pytest.approx(rec.diagonal + rec.off_diagonal, rel=1e-12)


def test_hs_prime_sum_modes(g2):
    d = hs_prime_sum(g2, 2.0**-6, 0.9, 12.0, mode="direct")
    assert d.decomposed is None and d.direct is not None
    e = hs_prime_sum(g2, 2.0**-6, 0.9, 12.0, mode="decomposed")
    assert e.direct is None and e.decomposed == pytest.approx(d.direct, rel=1e-10)


def test_hs_prime_sum_rejects_nonsurjective():
    g1 = gamma_m(1)
    # gamma_m:1 reduces to a cyclic subgroup mod small primes in this range
    with pytest.raises(ValueError):
        hs_prime_sum(g1, 2.0**-6, 0.9, 4.0)


def test_jensen_bound_nonnegative(g2):
    b = jensen_bound(g2, 5, 0.2, 2.0**-5, n_basis=8, theta_samples=128, bound_tol=0.5)
    assert b >= 0.0


def test_jensen_bound_requires_sigma_below_delta(g2):
    with pytest.raises(ValueError):
        jensen_bound(g2, 5, 0.9, 2.0**-5, n_basis=8)
