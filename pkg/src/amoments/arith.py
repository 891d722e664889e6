"""Exact integer arithmetic: factorization, quadratic symbols, Hilbert symbols,
discriminants and square-free decompositions.

Everything here is a pure function of its arguments.  Symbols are returned as
integers in {-1, 0, +1}; the additive GF(2) convention (-1 -> 1, +1 -> 0) is
applied by callers at module boundaries via :func:`sym_to_gf2`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

_INT64_LIMIT = 1 << 63

# Witnesses sufficient for deterministic Miller-Rabin below 3.3 * 10^24,
# comfortably covering the 64-bit input domain.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_BOUND = 10 ** 6
_small_primes: list[int] | None = None


def _sieve_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(limit + 1) if sieve[i]]


def small_primes() -> list[int]:
    """Primes up to 10^6, sieved once on first use."""
    global _small_primes
    if _small_primes is None:
        _small_primes = _sieve_primes(_TRIAL_BOUND)
    return _small_primes


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all inputs below 2^64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """Return a nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = seed % n, (seed + 1) % n or 1, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


def _factor_into(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _brent_rho(n)
    _factor_into(d, out)
    _factor_into(n // d, out)


@dataclass(frozen=True)
class FactoredInt:
    """A nonzero signed integer with its complete prime factorization."""

    value: int
    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = self.sign
        prev = 0
        for p, e in self.factors:
            if p <= prev or e < 1:
                raise ValueError("factors must have increasing primes and exponents >= 1")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prev = p
            prod *= p ** e
        if prod != self.value:
            raise ValueError("factorization does not multiply back to value")

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def big_omega(self) -> int:
        return sum(e for _, e in self.factors)

    @property
    def mobius(self) -> int:
        if any(e > 1 for _, e in self.factors):
            return 0
        return -1 if self.omega % 2 else 1

    @property
    def squarefree_part(self) -> int:
        out = self.sign
        for p, e in self.factors:
            if e % 2:
                out *= p
        return out

    @property
    def largest_prime(self) -> int:
        # convention: 1 for +-1
        return self.factors[-1][0] if self.factors else 1

    @property
    def smallest_prime(self) -> float:
        # convention: +infinity for +-1
        return self.factors[0][0] if self.factors else math.inf

    def divisors(self) -> list[int]:
        """Positive divisors of |value|, unsorted."""
        divs = [1]
        for p, e in self.factors:
            divs = [d * p ** i for d in divs for i in range(e + 1)]
        return divs


def factor(n: int) -> FactoredInt:
    """Factor a nonzero integer with |n| < 2^63.

    Trial division by sieved primes up to 10^6, then Brent's rho with
    deterministic Miller-Rabin on the cofactor.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    if abs(n) >= _INT64_LIMIT:
        raise ValueError("input exceeds the 64-bit working range")
    sign = 1 if n > 0 else -1
    m = abs(n)
    fac: dict[int, int] = {}
    for p in small_primes():
        if p * p > m:
            break
        while m % p == 0:
            fac[p] = fac.get(p, 0) + 1
            m //= p
    if m > 1:
        if m < _TRIAL_BOUND * _TRIAL_BOUND or is_prime(m):
            fac[m] = fac.get(m, 0) + 1
        else:
            _factor_into(m, fac)
    return FactoredInt(n, sign, tuple(sorted(fac.items())))


def omega(n: int) -> int:
    return factor(n).omega


def mobius(n: int) -> int:
    return factor(n).mobius


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return factor(n).mobius != 0


def squarefree_part(n: int) -> int:
    """n divided by its largest square divisor (keeps the sign)."""
    return factor(n).squarefree_part


def divisors(n: int) -> list[int]:
    return sorted(factor(n).divisors())


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi symbol needs an odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for nonzero n, with the standard rules at 2 and -1."""
    if n == 0:
        raise ValueError("kronecker symbol needs a nonzero modulus")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    return result * jacobi(a, n)


def sym_to_gf2(s: int) -> int:
    """Map a +-1 symbol to additive GF(2): +1 -> 0, -1 -> 1."""
    if s == 1:
        return 0
    if s == -1:
        return 1
    raise ValueError("symbol is 0: ramified evaluation has no GF(2) image")


def star(n: int) -> int:
    """n* : same absolute value as odd n, normalized to 1 mod 4."""
    if n % 2 == 0:
        raise ValueError("star is defined for odd integers")
    return n if n % 4 == 1 else -n


def discriminant(n: int) -> int:
    """Discriminant of the quadratic field Q(sqrt(n)), n square-free, not 0 or 1."""
    if n in (0, 1):
        raise ValueError("no quadratic field for n in {0, 1}")
    if not is_squarefree(n):
        raise ValueError("discriminant needs a square-free argument")
    return n if n % 4 == 1 else 4 * n


def is_fundamental_discriminant(d: int) -> bool:
    if d == 0 or d == 1:
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def field_label(delta: int) -> int:
    """The square-free m with discriminant(m) == delta."""
    if not is_fundamental_discriminant(delta):
        raise ValueError(f"{delta} is not a fundamental discriminant")
    return delta if delta % 4 == 1 else delta // 4


@dataclass(frozen=True)
class PrimeDiscriminant:
    """A fundamental discriminant with exactly one prime divisor."""

    value: int
    conductor: int

    def __post_init__(self):
        ok = (self.value in (-4, 8, -8) and self.conductor == 2) or (
            self.conductor % 2 == 1
            and is_prime(self.conductor)
            and self.value == star(self.conductor)
        )
        if not ok:
            raise ValueError(f"{self.value} is not a prime discriminant")


def prime_discriminant_decompose(delta: int) -> list[PrimeDiscriminant]:
    """Split a fundamental discriminant into prime discriminants (conductor 2 first).

    The product of the returned values equals delta; the entry at 2, when
    present, lies in {-4, 8, -8}.
    """
    if not is_fundamental_discriminant(delta):
        raise ValueError(f"{delta} is not a fundamental discriminant")
    odd_parts = [
        PrimeDiscriminant(star(p), p) for p, _ in factor(delta).factors if p != 2
    ]
    residual = delta
    for pd in odd_parts:
        residual //= pd.value
    if residual == 1:
        return odd_parts
    if residual not in (-4, 8, -8):
        raise AssertionError("fundamental discriminant decomposition failed")
    return [PrimeDiscriminant(residual, 2)] + odd_parts


def _as_int_pair(x) -> tuple[int, int]:
    """Represent a nonzero rational as (numerator, denominator)."""
    if isinstance(x, Fraction):
        return x.numerator, x.denominator
    return int(x), 1


def _val_unit(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a, b, v) -> int:
    """Hilbert symbol (a, b)_v for v a prime or the string 'inf'.

    +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution over the completion
    at v.  Accepts ints or Fractions; a rational p/q is handled through the
    square-class representative p*q.
    """
    an, ad = _as_int_pair(a)
    bn, bd = _as_int_pair(b)
    if an == 0 or bn == 0:
        raise ValueError("hilbert symbol needs nonzero arguments")
    a = an * ad
    b = bn * bd
    if v == "inf" or v is math.inf:
        return -1 if (a < 0 and b < 0) else 1
    p = int(v)
    if p < 2 or not is_prime(p):
        raise ValueError(f"{v} is not a place")
    alpha, u = _val_unit(abs(a), p)
    beta, w = _val_unit(abs(b), p)
    u *= 1 if a > 0 else -1
    w *= 1 if b > 0 else -1
    if p != 2:
        e = 0
        if alpha % 2 and beta % 2 and p % 4 == 3:
            e = 1
        s = (-1) ** e
        if beta % 2:
            s *= jacobi(u % p, p)
        if alpha % 2:
            s *= jacobi(w % p, p)
        return s
    eps_u = ((u - 1) // 2) % 2
    eps_w = ((w - 1) // 2) % 2
    om_u = ((u * u - 1) // 8) % 2
    om_w = ((w * w - 1) // 8) % 2
    e = eps_u * eps_w + alpha * om_w + beta * om_u
    return -1 if e % 2 else 1


@dataclass(frozen=True)
class SqfDecomposition:
    """The unique factorization a = alpha^2 * beta * gamma with beta*gamma
    square-free, beta | alpha and gcd(alpha*beta, gamma) = 1."""

    alpha: int
    beta: int
    gamma: int

    @property
    def value(self) -> int:
        return self.alpha ** 2 * self.beta * self.gamma


def sqf_decompose(a: int) -> SqfDecomposition:
    if a < 1:
        raise ValueError("sqf_decompose needs a positive integer")
    alpha = beta = gamma = 1
    for p, e in factor(a).factors:
        if e == 1:
            gamma *= p
        elif e % 2 == 0:
            alpha *= p ** (e // 2)
        else:
            alpha *= p ** ((e - 1) // 2)
            beta *= p
    return SqfDecomposition(alpha, beta, gamma)


def squarefree_sieve(limit: int) -> bytearray:
    """Byte table t with t[n] = 1 iff 1 <= n <= limit is square-free."""
    t = bytearray([1]) * (limit + 1)
    t[0] = 0
    for q in range(2, math.isqrt(limit) + 1):
        step = q * q
        t[step::step] = bytearray(len(t[step::step]))
    return t


def fundamental_discriminants(X: int, sign: int) -> Iterator[int]:
    """Fundamental discriminants d of the given sign with |d| <= X, by |d|.

    sign is +1 or -1; the unit discriminant 1 is excluded.
    """
    if X < 3:
        raise ValueError("need X >= 3")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    sf = squarefree_sieve(X)
    for n in range(3, X + 1):
        d = sign * n
        if n % 4 == (1 if sign == 1 else 3):
            if sf[n]:
                yield d
        elif n % 4 == 0:
            m = n // 4
            mm = m % 4 if sign == 1 else (-m) % 4
            if mm in (2, 3) and sf[m]:
                yield d


_SPF_CACHE: dict[int, "array"] = {}


def spf_cached(limit: int):
    """Smallest-prime-factor table covering [0, limit], grown in powers of two."""
    from array import array

    key = 1 << max(limit, 4).bit_length()
    if key not in _SPF_CACHE:
        _SPF_CACHE.clear()
        spf = array("i", range(key + 1))
        for p in range(2, math.isqrt(key) + 1):
            if spf[p] == p:
                for m in range(p * p, key + 1, p):
                    if spf[m] == m:
                        spf[m] = p
        _SPF_CACHE[key] = spf
    return _SPF_CACHE[key]


def factor_by_spf(n: int, spf) -> list[tuple[int, int]]:
    out = []
    while n > 1:
        p = spf[n]
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """x mod m1*m2 with x = r1 (m1), x = r2 (m2); moduli must be coprime."""
    g, s, _ = ext_gcd(m1, m2)
    if g != 1:
        raise ValueError("moduli not coprime")
    return (r1 + (r2 - r1) * s % m2 * m1) % (m1 * m2)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0
