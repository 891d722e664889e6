"""Density-side inputs for the sieve: the multiplicative density driving
3-torsion averages, exact polynomial congruence densities with residue-class
refinements, and their finite-box equidistribution checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import arith

ENUM_CAP = 10 ** 6
MAX_VARS = 3


def delta(m: int) -> Fraction:
    """Multiplicative density: 1/(p+1) at primes, 1/3 at 4, 1/6 at 8,
    zero on all other higher prime powers."""
    if m < 1:
        raise ValueError("need m >= 1")
    out = Fraction(1)
    for p, e in arith.factor(m).factors if m > 1 else ():
        if e == 1:
            out *= Fraction(1, p + 1)
        elif p == 2 and e == 2:
            out *= Fraction(1, 3)
        elif p == 2 and e == 3:
            out *= Fraction(1, 6)
        else:
            return Fraction(0)
    return out


@dataclass(frozen=True)
class Poly:
    """Integer polynomial in up to three variables, kept as a sorted
    (exponent tuple -> coefficient) table."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        if not (1 <= self.nvars <= MAX_VARS):
            raise ValueError(f"need between 1 and {MAX_VARS} variables")
        for mono, c in self.terms:
            if len(mono) != self.nvars or c == 0 or any(e < 0 for e in mono):
                raise ValueError("malformed term table")

    @classmethod
    def from_terms(cls, nvars: int, table: dict[tuple[int, ...], int]) -> "Poly":
        terms = tuple(sorted((m, c) for m, c in table.items() if c))
        return cls(nvars, terms)

    @classmethod
    def univariate(cls, coeffs: list[int]) -> "Poly":
        """Coefficients in increasing degree order."""
        return cls.from_terms(1, {(i,): c for i, c in enumerate(coeffs) if c})

    def eval(self, point: tuple[int, ...]) -> int:
        return sum(c * math.prod(x ** e for x, e in zip(point, mono)) for mono, c in self.terms)

    def eval_mod(self, point: tuple[int, ...], mod: int) -> int:
        acc = 0
        for mono, c in self.terms:
            t = c % mod
            for x, e in zip(point, mono):
                if e:
                    t = t * pow(x, e, mod) % mod
            acc = (acc + t) % mod
        return acc

    def degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def _sympy(self):
        import sympy

        xs = sympy.symbols(f"t1:{self.nvars + 1}")
        expr = sum(
            c * math.prod(x ** e for x, e in zip(xs, mono)) for mono, c in self.terms
        )
        return sympy.Poly(expr, *xs)

    def is_separable(self) -> bool:
        """No repeated irreducible factor (gcd with each partial is trivial)."""
        if self.is_zero() or self.degree() == 0:
            return False
        import sympy

        _, factors = self._sympy().factor_list()
        return all(mult == 1 for _, mult in factors)

    def rational_irreducible_count(self) -> int:
        import sympy

        _, factors = self._sympy().factor_list()
        return len(factors)


def poly_from_string(text: str, nvars: int = 1) -> Poly:
    """Parse an integer polynomial in t (univariate) or t1..t3."""
    import sympy

    xs = sympy.symbols(f"t1:{nvars + 1}")
    local = {"t": xs[0]}
    local.update({f"t{i + 1}": xs[i] for i in range(nvars)})
    expr = sympy.sympify(text, locals=local, rational=True)
    poly = sympy.Poly(expr, *xs)
    table: dict[tuple[int, ...], int] = {}
    for mono, c in zip(poly.monoms(), poly.coeffs()):
        if c != int(c):
            raise ValueError("polynomial must have integer coefficients")
        table[tuple(mono)] = int(c)
    return Poly.from_terms(nvars, table)


def _symbol_mod(y: int, q: int) -> int:
    """The unique value in {1, -1, 0} congruent to y^((q-1)/2) mod q."""
    return arith.jacobi(y % q, q)


def poly_density(P: Poly, a: int, epsilon: tuple[int, ...] | None = None) -> Fraction:
    """Exact density of P = 0 mod a, refined by residue-symbol letters.

    With epsilon given (entries in {1, -1, 0} indexed by the odd primes of a),
    counts tuples mod a*q1*...*qr with P = 0 mod a and ((P/a) mod qi | qi)
    matching every letter; the full enumeration stays exact.
    """
    if a < 1:
        raise ValueError("need a >= 1")
    n = P.nvars
    if epsilon is None:
        mod = a
        if mod ** n > ENUM_CAP:
            raise ValueError("enumeration domain exceeds the configured cap")
        count = sum(
            1 for point in product(range(mod), repeat=n) if P.eval_mod(point, mod) == 0
        )
        return Fraction(count, mod ** n)
    qs = [p for p, _ in arith.factor(a).factors if p != 2] if a > 1 else []
    if len(epsilon) != len(qs):
        raise ValueError("letter vector must match the odd primes of a")
    if any(e not in (-1, 0, 1) for e in epsilon):
        raise ValueError("letters must lie in {1, -1, 0}")
    Q = math.prod(qs)
    mod = a * Q
    if mod ** n > ENUM_CAP:
        raise ValueError("enumeration domain exceeds the configured cap")
    count = 0
    for point in product(range(mod), repeat=n):
        v = P.eval_mod(point, mod)
        if v % a:
            continue
        y = v // a
        if all(_symbol_mod(y, q) == e for q, e in zip(qs, epsilon)):
            count += 1
    return Fraction(count, mod ** n)


def all_letter_vectors(a: int) -> list[tuple[int, ...]]:
    qs = [p for p, _ in arith.factor(a).factors if p != 2] if a > 1 else []
    return [tuple(v) for v in product((1, -1, 0), repeat=len(qs))]


def box_count(P: Poly, B: int, a: int, epsilon: tuple[int, ...] | None = None) -> int:
    """#{max|t_i| <= B : a | P(t), residue letters match}."""
    n = P.nvars
    if (2 * B + 1) ** n > 4 * ENUM_CAP:
        raise ValueError("box too large for exact enumeration")
    qs = [p for p, _ in arith.factor(a).factors if p != 2] if a > 1 else []
    if epsilon is not None and len(epsilon) != len(qs):
        raise ValueError("letter vector must match the odd primes of a")
    count = 0
    for point in product(range(-B, B + 1), repeat=n):
        v = P.eval(point)
        if v % a:
            continue
        if epsilon is None:
            count += 1
            continue
        y = v // a
        if all(_symbol_mod(y, q) == e for q, e in zip(qs, epsilon)):
            count += 1
    return count


def check_lemma_2_10(P: Poly, pmax: int, B: int, theta: float = 0.2) -> dict:
    """Empirical constants for the density bounds and the box count error.

    Reports max p*h(p), max p^2*h(p^2), max p^2*|h(p,eps) - h(p)/2| over odd
    primes up to pmax, and the largest box deviation |count - h(a,eps)(2B)^n|
    normalized by B^(n - theta) over a <= B^theta.
    """
    if not P.is_separable():
        raise ValueError("polynomial must be separable of degree >= 1")
    n = P.nvars
    odd_primes = [p for p in arith.small_primes() if 2 < p <= pmax]
    c1 = Fraction(0)
    c2 = Fraction(0)
    c5 = Fraction(0)
    for p in odd_primes:
        hp = poly_density(P, p)
        c1 = max(c1, p * hp)
        if (p * p) ** n <= ENUM_CAP:
            c2 = max(c2, p * p * poly_density(P, p * p))
        for e in (1, -1):
            he = poly_density(P, p, (e,))
            c5 = max(c5, p * p * abs(he - hp / 2))
    box_max = Fraction(0)
    amax = max(1, int(B ** theta))
    for a in range(1, amax + 1):
        for eps in all_letter_vectors(a):
            expected = poly_density(P, a, eps) * (2 * B + 1) ** n
            got = box_count(P, B, a, eps)
            box_max = max(box_max, abs(got - expected))
    return {
        "max_p_h": c1,
        "max_p2_h_p2": c2,
        "max_p2_letter_bias": c5,
        "max_box_deviation": box_max,
        "box_deviation_normalized": float(box_max) / B ** (n - theta),
        "pmax": pmax,
        "B": B,
        "theta": theta,
    }


# ---------------------------------------------------------------------------
# root counts over F_p and the average over primes


def _poly_mod_p(P: Poly, p: int) -> list[int]:
    if P.nvars != 1:
        raise ValueError("prime-splitting averages support univariate polynomials only")
    deg = P.degree()
    coeffs = [0] * (deg + 1)
    for (e,), c in P.terms:
        coeffs[e] = c % p
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _pm_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = a[:]
    q = [0] * max(0, len(a) - len(b) + 1)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        f = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = f
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - f * bc) % p
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _pm_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        _, r = _pm_divmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _pm_mulmod(a: list[int], b: list[int], mod_poly: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    _, r = _pm_divmod(out, mod_poly, p)
    return r


def root_count_mod_p(P: Poly, p: int) -> int:
    """Number of distinct roots of P in F_p (deg of gcd(x^p - x, squarefree part))."""
    f = _poly_mod_p(P, p)
    if not f:
        return p  # identically zero mod p: every residue is a root
    if len(f) == 1:
        return 0
    if p <= len(f):
        # small prime: squarefree reduction can drop roots whose multiplicity
        # is divisible by p, so count directly
        return sum(1 for x in range(p) if _pm_eval(f, x, p) == 0)
    fp = [(i * c) % p for i, c in enumerate(f)][1:]
    while fp and fp[-1] == 0:
        fp.pop()
    sqf = f
    g = _pm_gcd(f, fp, p)
    if len(g) > 1:
        sqf, _ = _pm_divmod(f, g, p)
    if len(sqf) == 1:
        return 0
    # x^p mod sqf by square and multiply
    xp = [0, 1]
    _, xp = _pm_divmod(xp, sqf, p)
    result = [1]
    base = xp
    e = p
    while e:
        if e & 1:
            result = _pm_mulmod(result, base, sqf, p)
        base = _pm_mulmod(base, base, sqf, p)
        e >>= 1
    # result = x^p mod sqf; subtract x
    while len(result) < 2:
        result.append(0)
    result[1] = (result[1] - 1) % p
    while result and result[-1] == 0:
        result.pop()
    g = _pm_gcd(sqf, result, p)
    return len(g) - 1 if g else len(sqf) - 1


def _pm_eval(f: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def frobenian_average(P: Poly, pmax: int) -> dict:
    """Average over p <= pmax of the number of F_p-rational components of
    P = 0 (distinct roots for univariate P), with the rational irreducible
    factor count it converges to."""
    if P.is_zero():
        raise ValueError("need a nonzero polynomial")
    primes = [p for p in arith.small_primes() if p <= pmax]
    if not primes:
        raise ValueError("no primes below the cutoff")
    total = sum(root_count_mod_p(P, p) for p in primes)
    return {
        "average": Fraction(total, len(primes)),
        "n_primes": len(primes),
        "rational_irreducible_factors": P.rational_irreducible_count(),
    }


# ---------------------------------------------------------------------------
# 3-torsion level-of-distribution experiment (oracle-backed)


def h3_level_report(
    X: int, m: int = 1, letters: dict[int, int] | None = None, sign: int = -1
) -> dict:
    """Compare sum of (h_3 - 1) over labels divisible by m against the
    density prediction.

    letters maps a subset of the odd primes of m to a required value of the
    residue symbol of (label / m); each condition halves the main term.
    """
    from . import quadforms

    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    letters = dict(letters or {})
    qs = {p for p, _ in arith.factor(m).factors if p != 2} if m > 1 else set()
    if any(q not in qs or e not in (1, -1) for q, e in letters.items()):
        raise ValueError("letters must assign +-1 to odd primes of m")

    def matches(n: int) -> bool:
        return n % m == 0 and all(
            _symbol_mod(n // m, q) == e for q, e in letters.items()
        )

    total = 0
    count = 0
    if sign == -1:
        rows = quadforms.neg_torsion_sweep(3, X - 1, (3,))
        for absd, _, _, counts in rows:
            n = -absd if absd % 4 == 3 else -(absd // 4)
            if matches(n):
                total += counts[0] - 1
                count += 1
    else:
        rows = quadforms.pos_narrow_sweep(3, X - 1, (3,))
        for d, _, _, counts in rows:
            n = d if d % 4 == 1 else d // 4
            if matches(n):
                total += counts[0] - 1
                count += 1
    main = (3 if sign == -1 else 1) * X * delta(m) / (2 ** len(letters) * math.pi ** 2)
    return {
        "X": X,
        "m": m,
        "letters": tuple(sorted(letters.items())),
        "sign": sign,
        "sum_h3_minus_1": total,
        "fields": count,
        "prediction": main,
        "ratio": total / main if main else math.inf,
    }
