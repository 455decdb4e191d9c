"""Factorization over Q into irreducible polynomials.

Route, by number of variables actually used:

  1 variable   classical Zassenhaus: reduce mod a good small prime,
               factor there (distinct-degree plus equal-degree
               splitting), Hensel-lift to a Mignotte-style coefficient
               bound, recombine subsets, certify by exact division.

  2 variables  evaluate the second variable at a good rational point,
               factor the resulting univariate polynomial, Hensel-lift
               the factorization in powers of (y - a), recombine subsets
               and certify by exact division.

  3+ variables fold all but the highest-degree variable into a single
               fresh variable by a mixed-radix exponent encoding (an
               injective monomial map on every candidate factor), factor
               the resulting bivariate polynomial, unfold subset
               products and certify by exact division.

Every returned factorization is certified: the product of the unit and
the factor powers is checked against the input, and the subset search
is exhaustive, so factors are genuinely irreducible.  All randomness
(equal-degree splitting) comes from a seedable generator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import ResourceBudgetExceeded
from .poly import Polynomial, divides, exact_divide, squarefree_part, try_exact_divide

_EVAL_POINT_BUDGET = 200
_SUBSET_POOL_LIMIT = 16


@dataclass(frozen=True)
class Factorization:
    """unit * prod(poly^mult) == the factored input, exactly."""

    unit: Fraction
    factors: tuple[tuple[Polynomial, int], ...]
    certified: bool = True

    def expand(self) -> Polynomial:
        if not self.factors:
            raise ValueError("cannot expand a factorization with no ring context")
        vars = self.factors[0][0].vars
        out = Polynomial.constant(vars, self.unit)
        for f, k in self.factors:
            out = out * f ** k
        return out

    def expand_in(self, vars: tuple[str, ...]) -> Polynomial:
        out = Polynomial.constant(vars, self.unit)
        for f, k in self.factors:
            out = out * f ** k
        return out

    def __str__(self):
        parts = [str(self.unit)] if self.unit != 1 or not self.factors else []
        for f, k in self.factors:
            parts.append(f"({f})^{k}" if k > 1 else f"({f})")
        return " * ".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# dense integer univariate helpers (index = degree, no trailing zeros)
# ---------------------------------------------------------------------------


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _deg(f: list[int]) -> int:
    return len(f) - 1


def _z_mul(f: list[int], g: list[int]) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _trim(out)


def _z_sub(f: list[int], g: list[int]) -> list[int]:
    out = [0] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] += a
    for i, b in enumerate(g):
        out[i] -= b
    return _trim(out)


def _z_content(f: list[int]) -> int:
    from math import gcd

    c = 0
    for a in f:
        c = gcd(c, a)
    return c


def _z_primitive(f: list[int]) -> list[int]:
    c = _z_content(f)
    if c == 0:
        return list(f)
    if f[-1] < 0:
        c = -c
    return [a // c for a in f]


def _z_trunc(f: list[int], m: int) -> list[int]:
    """Coefficients in the symmetric range (-m/2, m/2]."""
    out = []
    half = m // 2
    for a in f:
        r = a % m
        if r > half:
            r -= m
        out.append(r)
    return _trim(out)


def _z_divides(g: list[int], f: list[int]) -> list[int] | None:
    """Exact quotient f/g over Z, or None."""
    if not g:
        raise ZeroDivisionError
    if not f:
        return []
    if _deg(f) < _deg(g):
        return None
    rem = list(f)
    out = [0] * (_deg(f) - _deg(g) + 1)
    lg = g[-1]
    for k in range(len(out) - 1, -1, -1):
        if _deg(rem) < k + _deg(g):
            continue
        c = rem[-1]
        if c % lg:
            return None
        q = c // lg
        out[k] = q
        for i, a in enumerate(g):
            rem[k + i] -= q * a
        _trim(rem)
    return out if not rem else None


# ---------------------------------------------------------------------------
# arithmetic mod p
# ---------------------------------------------------------------------------


def _p_trim(f: list[int], p: int) -> list[int]:
    f = [a % p for a in f]
    return _trim(f)


def _p_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def _p_sub(f, g, p):
    out = [0] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] = a % p
    for i, b in enumerate(g):
        out[i] = (out[i] - b) % p
    return _trim(out)


def _p_divmod(f, g, p):
    if not g:
        raise ZeroDivisionError
    inv = pow(g[-1], -1, p)
    rem = _trim([a % p for a in f])
    if _deg(rem) < _deg(g):
        return [], rem
    quot = [0] * (_deg(rem) - _deg(g) + 1)
    for k in range(len(quot) - 1, -1, -1):
        if _deg(rem) == k + _deg(g) and rem:
            c = rem[-1] * inv % p
            quot[k] = c
            for i, a in enumerate(g):
                rem[k + i] = (rem[k + i] - c * a) % p
            _trim(rem)
    return _trim(quot), rem


def _p_mod(f, g, p):
    return _p_divmod(f, g, p)[1]


def _p_gcd(f, g, p):
    a, b = _p_trim(f, p), _p_trim(g, p)
    while b:
        a, b = b, _p_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _p_powmod(base, e, mod, p):
    result = [1]
    base = _p_mod(base, mod, p)
    while e:
        if e & 1:
            result = _p_mod(_p_mul(result, base, p), mod, p)
        base = _p_mod(_p_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _p_deriv(f, p):
    return _trim([(i * a) % p for i, a in enumerate(f)][1:])


def _p_gcdex(f, g, p):
    """(s, t, d) with s f + t g = d, d monic gcd."""
    r0, r1 = _p_trim(f, p), _p_trim(g, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _p_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _p_sub(s0, _p_mul(q, s1, p), p)
        t0, t1 = t1, _p_sub(t0, _p_mul(q, t1, p), p)
    if r0:
        inv = pow(r0[-1], -1, p)
        r0 = [x * inv % p for x in r0]
        s0 = [x * inv % p for x in s0]
        t0 = [x * inv % p for x in t0]
    return s0, t0, r0


def _modp_factor_squarefree(f: list[int], p: int, rng: random.Random) -> list[list[int]]:
    """Monic irreducible factors of a monic squarefree f mod p."""
    n = _deg(f)
    if n == 1:
        return [f]
    # distinct-degree decomposition
    blocks: list[tuple[list[int], int]] = []
    v = f
    h = [0, 1]  # x
    d = 0
    while _deg(v) >= 2 * (d + 1):
        d += 1
        h = _p_powmod(h, p, v, p)
        g = _p_gcd(_p_sub(h, [0, 1], p), v, p)
        if _deg(g) > 0:
            blocks.append((g, d))
            v, _ = _p_divmod(v, g, p)
            v = [x * pow(v[-1], -1, p) % p for x in v]
            h = _p_mod(h, v, p)
    if _deg(v) > 0:
        blocks.append((v, _deg(v)))
    # equal-degree splitting (Cantor-Zassenhaus, odd p)
    out: list[list[int]] = []

    def split(g: list[int], d: int):
        if _deg(g) == d:
            out.append(g)
            return
        while True:
            r = [rng.randrange(p) for _ in range(_deg(g))]
            r = _trim(r)
            if not r or _deg(r) < 1:
                continue
            u = _p_gcd(r, g, p)
            if 0 < _deg(u) < _deg(g):
                break
            w = _p_powmod(r, (p ** d - 1) // 2, g, p)
            u = _p_gcd(_p_sub(w, [1], p), g, p)
            if 0 < _deg(u) < _deg(g):
                break
        qg, _ = _p_divmod(g, u, p)
        qg = [x * pow(qg[-1], -1, p) % p for x in qg]
        split(u, d)
        split(qg, d)

    for g, d in blocks:
        split(g, d)
    out.sort()
    return out


# ---------------------------------------------------------------------------
# Hensel lifting over Z
# ---------------------------------------------------------------------------


def _hensel_step(m, f, g, h, s, t):
    """One quadratic lift: from mod m to mod m*m.  h stays monic."""
    M = m * m
    e = _z_trunc(_z_sub(f, _z_mul(g, h)), M)
    q, r = _zM_divmod(_z_mul(s, e), h, M)
    g1 = _z_trunc(_z_add(_z_add(g, _z_mul(t, e)), _z_mul(q, g)), M)
    h1 = _z_trunc(_z_add(h, r), M)
    b = _z_trunc(_z_sub(_z_add(_z_mul(s, g1), _z_mul(t, h1)), [1]), M)
    c, d = _zM_divmod(_z_mul(s, b), h1, M)
    s1 = _z_trunc(_z_sub(s, d), M)
    t1 = _z_trunc(_z_sub(t, _z_add(_z_mul(t, b), _z_mul(c, g1))), M)
    return g1, h1, s1, t1


def _z_add(f, g):
    out = [0] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] += a
    for i, b in enumerate(g):
        out[i] += b
    return _trim(out)


def _zM_divmod(f, g, M):
    """Division mod M by a polynomial with invertible leading coefficient."""
    inv = pow(g[-1] % M, -1, M)
    rem = _z_trunc(f, M)
    if _deg(rem) < _deg(g):
        return [], rem
    quot = [0] * (_deg(rem) - _deg(g) + 1)
    for k in range(len(quot) - 1, -1, -1):
        rem = _z_trunc(rem, M)
        if len(rem) == k + len(g) and rem[-1] % M:
            c = rem[-1] * inv % M
            quot[k] = c
            rem = _z_sub(rem, [0] * k + [c * a for a in g])
    return _z_trunc(quot, M), _z_trunc(rem, M)


def _hensel_lift(p: int, f: list[int], factors: list[list[int]], l: int) -> list[list[int]]:
    """Lift monic factors of f mod p to mod p**l with f = lc * prod (mod p**l)."""
    r = len(factors)
    lc = f[-1]
    m = p ** l
    if r == 1:
        inv = pow(lc % m, -1, m)
        return [_z_trunc([a * inv for a in f], m)]
    k = r // 2
    steps = max(1, (l - 1).bit_length())
    g = _z_trunc([lc], p)
    for fi in factors[:k]:
        g = _z_trunc(_z_mul(g, fi), p)
    h = [1]
    for fi in factors[k:]:
        h = _z_trunc(_z_mul(h, fi), p)
    s, t, d = _p_gcdex(g, h, p)
    if d != [1]:
        raise ArithmeticError("factors not coprime mod p")
    s = [x % p for x in s]
    t = [x % p for x in t]
    mod = p
    for _ in range(steps):
        g, h, s, t = _hensel_step(mod, f, g, h, s, t)
        mod = mod * mod
        if mod >= m * m:
            break
    g = _z_trunc(g, m)
    h = _z_trunc(h, m)
    return _hensel_lift(p, g, factors[:k], l) + _hensel_lift(p, h, factors[k:], l)


_SMALL_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]


def _more_primes():
    n = 101
    while True:
        for q in _SMALL_PRIMES:
            if q * q > n:
                yield n
                break
            if n % q == 0:
                break
        else:
            yield n
        n += 2


def _zassenhaus(f: list[int], rng: random.Random) -> list[list[int]]:
    """Irreducible factors of a primitive squarefree f in Z[x], deg >= 1."""
    n = _deg(f)
    if n == 1:
        return [_z_primitive(f)]
    lc = f[-1]
    fp = None
    prime = None
    candidates = list(_SMALL_PRIMES)
    gen = _more_primes()
    for _ in range(80):
        if candidates:
            p = candidates.pop(0)
        else:
            p = next(gen)
        if lc % p == 0:
            continue
        red = _p_trim(f, p)
        if _deg(red) != n:
            continue
        if _deg(_p_gcd(red, _p_deriv(red, p), p)) == 0:
            prime = p
            fp = red
            break
    if prime is None:
        raise ResourceBudgetExceeded("no good prime found for factorization")
    monic = [x * pow(fp[-1], -1, prime) % prime for x in fp]
    modular = _modp_factor_squarefree(monic, prime, rng)
    if len(modular) == 1:
        return [_z_primitive(f)]
    # coefficient bound for lc * (any factor of f)
    height = max(abs(a) for a in f)
    bound = (isqrt(n + 1) + 1) * (1 << n) * height * abs(lc)
    l = 1
    while prime ** l <= 2 * bound:
        l += 1
    lifted = _hensel_lift(prime, f, modular, l)
    modulus = prime ** l

    result: list[list[int]] = []
    pool = list(range(len(lifted)))
    f_cur = list(f)
    s = 1
    from itertools import combinations

    while 2 * s <= len(pool):
        found = False
        for S in combinations(pool, s):
            cand = [f_cur[-1]]
            for i in S:
                cand = _z_trunc(_z_mul(cand, lifted[i]), modulus)
            cand = _z_primitive(cand)
            quot = _z_divides(cand, f_cur)
            if quot is not None:
                result.append(cand)
                f_cur = _z_primitive(quot)
                pool = [i for i in pool if i not in S]
                found = True
                break
        if not found:
            s += 1
    if _deg(f_cur) >= 1:
        result.append(_z_primitive(f_cur))
    return result


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------


def _to_dense(p: Polynomial, var: str) -> list[Fraction]:
    i = p.vars.index(var)
    out = [Fraction(0)] * (p.degree_in(var) + 1)
    for e, c in p.terms.items():
        out[e[i]] += c
    return out


def _dense_to_int(coeffs: list[Fraction]) -> tuple[Fraction, list[int]]:
    """(unit, primitive integer list) with unit * primitive == input."""
    from math import gcd, lcm

    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if ints[-1] < 0:
        g = -g
    return Fraction(g, den), [a // g for a in ints]


def _from_dense(coeffs: list, vars: tuple[str, ...], var: str) -> Polynomial:
    i = vars.index(var)
    terms = {}
    for d, c in enumerate(coeffs):
        if c:
            e = [0] * len(vars)
            e[i] = d
            terms[tuple(e)] = Fraction(c)
    return Polynomial(vars, terms)


# ---------------------------------------------------------------------------
# bivariate: evaluation + series Hensel lifting
# ---------------------------------------------------------------------------


class _Series:
    """Truncated power series arithmetic: coefficient lists mod w^K over Q."""

    def __init__(self, K: int):
        self.K = K

    def trunc(self, a: list[Fraction]) -> list[Fraction]:
        a = a[: self.K]
        while a and a[-1] == 0:
            a.pop()
        return a

    def add(self, a, b):
        out = [Fraction(0)] * max(len(a), len(b))
        for i, x in enumerate(a):
            out[i] += x
        for i, x in enumerate(b):
            out[i] += x
        return self.trunc(out)

    def neg(self, a):
        return [-x for x in a]

    def mul(self, a, b):
        if not a or not b:
            return []
        out = [Fraction(0)] * min(self.K, len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x and i < self.K:
                for j, y in enumerate(b):
                    if i + j >= self.K:
                        break
                    out[i + j] += x * y
        return self.trunc(out)

    def inv(self, a):
        """Series inverse; requires a[0] != 0."""
        if not a or a[0] == 0:
            raise ZeroDivisionError("series has no inverse")
        out = [Fraction(1) / a[0]]
        for k in range(1, self.K):
            acc = Fraction(0)
            for j in range(1, min(k, len(a) - 1) + 1):
                acc += a[j] * out[k - j]
            out.append(-acc / a[0])
        return self.trunc(out)


def _bi_mul(F, G, S: _Series):
    """Product of polys in x with series coefficients."""
    if not F or not G:
        return []
    out = [[] for _ in range(len(F) + len(G) - 1)]
    for i, a in enumerate(F):
        if a:
            for j, b in enumerate(G):
                if b:
                    out[i + j] = S.add(out[i + j], S.mul(a, b))
    while out and not out[-1]:
        out.pop()
    return out


def _bi_sub(F, G, S: _Series):
    out = [list(c) for c in F] + [[] for _ in range(max(0, len(G) - len(F)))]
    for i, b in enumerate(G):
        out[i] = S.add(out[i], S.neg(b))
    while out and not out[-1]:
        out.pop()
    return out


def _bi_divmod_monic(F, G, S: _Series):
    """Divide by G monic in x (leading series coefficient [1])."""
    rem = [list(c) for c in F]
    dg = len(G) - 1
    if len(rem) - 1 < dg:
        return [], rem
    quot = [[] for _ in range(len(rem) - dg)]
    for k in range(len(quot) - 1, -1, -1):
        while rem and not rem[-1]:
            rem.pop()
        if len(rem) - 1 == k + dg and rem[-1]:
            c = rem[-1]
            quot[k] = c
            shifted = [[] for _ in range(k)] + [S.mul(c, g) for g in G]
            rem = _bi_sub(rem, shifted, S)
    while rem and not rem[-1]:
        rem.pop()
    return quot, rem


def _series_hensel_lift(F, base_factors: list[list[Fraction]], S: _Series):
    """Lift a monic coprime factorization F == prod(fi) mod w to mod w^K.

    F is monic in x with series coefficients; base_factors are monic
    univariate polynomials over Q (dense Fraction lists in x).
    """
    r = len(base_factors)
    if r == 1:
        return [F]
    k = r // 2
    g0 = [Fraction(1)]
    for fi in base_factors[:k]:
        g0 = _q_mul(g0, fi)
    h0 = [Fraction(1)]
    for fi in base_factors[k:]:
        h0 = _q_mul(h0, fi)
    s0, t0, d = _q_gcdex(g0, h0)
    if len(d) != 1:
        raise ArithmeticError("evaluation produced non-coprime factors")
    s0 = [c / d[0] for c in s0]
    t0 = [c / d[0] for c in t0]
    # lift G H = F from w^1 by quadratic steps
    G = [[c] if c else [] for c in g0]
    H = [[c] if c else [] for c in h0]
    Sv = [[c] if c else [] for c in s0]
    Tv = [[c] if c else [] for c in t0]
    prec = 1
    while prec < S.K:
        sub = _Series(min(S.K, prec * 2))
        E = _bi_sub(F, _bi_mul(G, H, sub), sub)
        Q, R = _bi_divmod_monic(_bi_mul(Sv, E, sub), H, sub)
        G = _bi_add(_bi_add(G, _bi_mul(Tv, E, sub), sub), _bi_mul(Q, G, sub), sub)
        H = _bi_add(H, R, sub)
        B = _bi_sub(_bi_add(_bi_mul(Sv, G, sub), _bi_mul(Tv, H, sub), sub), [[Fraction(1)]], sub)
        C, D = _bi_divmod_monic(_bi_mul(Sv, B, sub), H, sub)
        Sv = _bi_sub(Sv, D, sub)
        Tv = _bi_sub(Tv, _bi_add(_bi_mul(Tv, B, sub), _bi_mul(C, G, sub), sub), sub)
        prec *= 2
    Gl = _series_hensel_lift(G, base_factors[:k], S)
    Hl = _series_hensel_lift(H, base_factors[k:], S)
    return Gl + Hl


def _bi_add(F, G, S: _Series):
    out = [list(c) for c in F] + [[] for _ in range(max(0, len(G) - len(F)))]
    for i, b in enumerate(G):
        out[i] = S.add(out[i], b)
    while out and not out[-1]:
        out.pop()
    return out


def _bi_add_list(F, G, S: _Series):
    return _bi_add(F, G, S)


def _q_mul(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    while out and not out[-1]:
        out.pop()
    return out


def _q_divmod(f: list[Fraction], g: list[Fraction]):
    if not g:
        raise ZeroDivisionError
    rem = list(f)
    while rem and rem[-1] == 0:
        rem.pop()
    dg = len(g) - 1
    if len(rem) - 1 < dg:
        return [], rem
    quot = [Fraction(0)] * (len(rem) - dg)
    while rem and len(rem) - 1 >= dg:
        k = len(rem) - 1 - dg
        c = rem[-1] / g[-1]
        quot[k] = c
        for i, a in enumerate(g):
            rem[k + i] -= c * a
        while rem and rem[-1] == 0:
            rem.pop()
    return quot, rem


def _q_gcdex(f: list[Fraction], g: list[Fraction]):
    r0, r1 = list(f), list(g)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _q_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _q_sub(s0, _q_mul(q, s1))
        t0, t1 = t1, _q_sub(t0, _q_mul(q, t1))
    return s0, t0, r0


def _q_sub(f, g):
    out = [Fraction(0)] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] += a
    for i, b in enumerate(g):
        out[i] -= b
    while out and out[-1] == 0:
        out.pop()
    return out


def _factor_bivariate_squarefree(q: Polynomial, xvar: str, yvar: str, rng: random.Random) -> list[Polynomial]:
    """Irreducible factors of a squarefree q using both variables, primitive in x."""
    vars = q.vars
    deg_y = q.degree_in(yvar)
    K = 2 * deg_y + 1
    S = _Series(K)
    lc_y = _coeff_poly(q, xvar, q.degree_in(xvar))

    a = None
    q0 = None
    for trial in range(_EVAL_POINT_BUDGET):
        cand = (trial + 1) // 2 * (1 if trial % 2 else -1)  # 0, 1, -1, 2, -2...
        if lc_y.eval_partial({yvar: cand}).is_zero():
            continue
        spec = q.eval_partial({yvar: cand})
        dense = _to_dense(spec, xvar)
        dd = [c for c in dense]
        der = [i * c for i, c in enumerate(dd)][1:]
        _, _, g = _q_gcdex(dd, der)
        if len(g) == 1:
            a = Fraction(cand)
            q0 = dense
            break
    if a is None:
        raise ResourceBudgetExceeded("no good evaluation point for bivariate factorization")

    unit0, q0_int = _dense_to_int(q0)
    uni = _zassenhaus(q0_int, rng)
    if len(uni) == 1:
        return [q.primitive()]

    # shift y -> w + a and make monic over Q[[w]]
    xi = vars.index(xvar)
    yi = vars.index(yvar)
    dx = q.degree_in(xvar)
    F = [[Fraction(0)] * (deg_y + 1) for _ in range(dx + 1)]
    for e, c in q.terms.items():
        F[e[xi]][e[yi]] += c
    # substitute y = w + a: binomial expansion per coefficient
    from math import comb

    Fs = []
    for coeffs in F:
        ser = [Fraction(0)] * (deg_y + 1)
        for d, c in enumerate(coeffs):
            if c:
                for k in range(d + 1):
                    ser[k] += c * comb(d, k) * a ** (d - k)
        while ser and ser[-1] == 0:
            ser.pop()
        Fs.append(ser)
    lc_series = Fs[-1]
    inv_lc = S.inv(lc_series)
    Fmonic = [S.mul(c, inv_lc) for c in Fs]

    monic_base = []
    for g in uni:
        lg = g[-1]
        monic_base.append([Fraction(c, lg) for c in g])
    lifted = _series_hensel_lift(Fmonic, monic_base, S)

    pool = list(range(len(lifted)))
    result: list[Polynomial] = []
    q_cur = q.primitive()
    s = 1
    from itertools import combinations

    while 2 * s <= len(pool):
        found = False
        lc_cur_series = _poly_to_series(_coeff_poly(q_cur, xvar, q_cur.degree_in(xvar)), yvar, a, S)
        for Sset in combinations(pool, s):
            cand = [lc_cur_series]
            for i in Sset:
                cand = _bi_mul(cand, lifted[i], S)
            cand_poly = _series_to_poly(cand, vars, xvar, yvar, a)
            if cand_poly.is_zero():
                continue
            cand_poly = cand_poly.primitive()
            cx = _content_x(cand_poly, xvar)
            if not cx.is_constant():
                cand_poly = exact_divide(cand_poly, cx).primitive()
            quot = try_exact_divide(q_cur, cand_poly)
            if quot is not None and cand_poly.total_degree() > 0:
                result.append(cand_poly)
                q_cur = quot.primitive()
                pool = [i for i in pool if i not in Sset]
                found = True
                break
        if not found:
            s += 1
    if q_cur.total_degree() > 0:
        result.append(q_cur.primitive())
    return result


def _poly_to_series(p: Polynomial, yvar: str, a: Fraction, S: _Series) -> list[Fraction]:
    """Polynomial in y alone (or constant) as a series in w = y - a."""
    from math import comb

    if yvar in p.variables_used():
        coeffs = _to_dense(p, yvar)
    else:
        coeffs = [p.constant_value()]
    ser = [Fraction(0)] * max(1, len(coeffs))
    for d, c in enumerate(coeffs):
        if c:
            for k in range(d + 1):
                ser[k] += c * comb(d, k) * a ** (d - k)
    while ser and ser[-1] == 0:
        ser.pop()
    return S.trunc(ser)


def _series_to_poly(F, vars: tuple[str, ...], xvar: str, yvar: str, a: Fraction) -> Polynomial:
    """Back-substitute w = y - a and assemble a polynomial."""
    xi = vars.index(xvar)
    yi = vars.index(yvar)
    out = Polynomial.zero(vars)
    y = Polynomial.variable(vars, yvar)
    w = y - Polynomial.constant(vars, a)
    wp = [Polynomial.one(vars)]
    for i, ser in enumerate(F):
        for k, c in enumerate(ser):
            if c:
                while len(wp) <= k:
                    wp.append(wp[-1] * w)
                e = [0] * len(vars)
                e[xi] = i
                mono = Polynomial(vars, {tuple(e): Fraction(1)})
                out = out + mono * wp[k] * c
    return out


def _coeff_poly(p: Polynomial, var: str, d: int) -> Polynomial:
    from .poly import _coeff_in_var

    return _coeff_in_var(p, var, d)


def _content_x(p: Polynomial, xvar: str) -> Polynomial:
    from .poly import _content_in_var

    return _content_in_var(p, xvar)


# ---------------------------------------------------------------------------
# many variables: mixed-radix folding to a bivariate problem
# ---------------------------------------------------------------------------


def _factor_multivariate_squarefree(q: Polynomial, rng: random.Random) -> list[Polynomial]:
    used = list(q.variables_used())
    main = max(used, key=lambda v: q.degree_in(v))
    others = [v for v in used if v != main]
    radices = [q.degree_in(v) + 1 for v in others]
    weights = []
    w = 1
    for r in radices:
        weights.append(w)
        w *= r

    vars = q.vars
    mi = vars.index(main)
    oi = [vars.index(v) for v in others]
    fold_vars = (main, "_fold")
    folded_terms: dict[tuple[int, int], Fraction] = {}
    for e, c in q.terms.items():
        code = sum(e[i] * wt for i, wt in zip(oi, weights))
        key = (e[mi], code)
        folded_terms[key] = folded_terms.get(key, Fraction(0)) + c
    folded = Polynomial(fold_vars, folded_terms)

    sf = squarefree_part(folded)
    biv_factors: list[tuple[Polynomial, int]] = []
    for f in _factor_2var_dispatch(sf, fold_vars, rng):
        k = 0
        cur = folded
        while True:
            nxt = try_exact_divide(cur, f)
            if nxt is None:
                break
            cur = nxt
            k += 1
        biv_factors.append((f, k))

    flat: list[Polynomial] = []
    for f, k in biv_factors:
        flat.extend([f] * k)
    if len(flat) > _SUBSET_POOL_LIMIT:
        raise ResourceBudgetExceeded("too many folded factors to recombine")

    def unfold(p: Polynomial) -> Polynomial | None:
        terms: dict[tuple[int, ...], Fraction] = {}
        for (dm, code), c in p.terms.items():
            e = [0] * len(vars)
            e[mi] = dm
            rem = code
            for i, r, _wt in zip(oi, radices, weights):
                e[i] = rem % r
                rem //= r
            if rem:
                return None
            key = tuple(e)
            terms[key] = terms.get(key, Fraction(0)) + c
        return Polynomial(vars, terms)

    from itertools import combinations

    pool = list(range(len(flat)))
    q_cur = q.primitive()
    result: list[Polynomial] = []
    s = 1
    while 2 * s <= len(pool) and q_cur.total_degree() > 0:
        found = False
        seen: set[tuple] = set()
        for Sset in combinations(pool, s):
            ids = tuple(sorted(id(flat[i]) for i in Sset))
            if ids in seen:
                continue
            seen.add(ids)
            prod = Polynomial.one(fold_vars)
            for i in Sset:
                prod = prod * flat[i]
            cand = unfold(prod)
            if cand is None or cand.total_degree() < 1:
                continue
            cand = cand.primitive()
            quot = try_exact_divide(q_cur, cand)
            if quot is not None:
                result.append(cand)
                q_cur = quot.primitive()
                pool = [i for i in pool if i not in Sset]
                found = True
                break
        if not found:
            s += 1
    if q_cur.total_degree() > 0:
        result.append(q_cur.primitive())
    return result


def _factor_2var_dispatch(q: Polynomial, pair: tuple[str, str], rng: random.Random) -> list[Polynomial]:
    """Squarefree factorization driver for a two-variable ring."""
    used = q.variables_used()
    if len(used) == 0:
        return []
    if len(used) == 1:
        f = factor_univariate_core(q, used[0], rng)
        return [p for p, _ in f]
    xvar = max(used, key=lambda v: q.degree_in(v))
    yvar = [v for v in used if v != xvar][0]
    cx = _content_x(q, xvar)
    out: list[Polynomial] = []
    if not cx.is_constant():
        out.extend(p for p, _ in factor_univariate_core(cx, yvar, rng))
        q = exact_divide(q, cx)
    if q.total_degree() > 0:
        if len(q.variables_used()) == 1:
            out.extend(p for p, _ in factor_univariate_core(q, q.variables_used()[0], rng))
        else:
            out.extend(_factor_bivariate_squarefree(q, xvar, yvar, rng))
    return out


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def factor_univariate_core(p: Polynomial, var: str, rng: random.Random) -> list[tuple[Polynomial, int]]:
    """Irreducible factors with multiplicities of a univariate p; no unit."""
    dense = _to_dense(p, var)
    _, ints = _dense_to_int(dense)
    sf_int = ints
    # squarefree part over Z
    der = _trim([i * c for i, c in enumerate(ints)][1:])
    if der:
        s0, t0, g = _q_gcdex([Fraction(c) for c in ints], [Fraction(c) for c in der])
        if len(g) > 1:
            gg = [Fraction(c) for c in g]
            quot, rem = _q_divmod([Fraction(c) for c in ints], gg)
            assert not rem
            _, sf_int = _dense_to_int(quot)
    irr = _zassenhaus(sf_int, rng) if _deg(sf_int) >= 1 else []
    out = []
    cur = ints
    for f in sorted(irr):
        k = 0
        while True:
            quot = _z_divides(f, cur)
            if quot is None:
                break
            cur = _trim(quot)
            k += 1
        if k:
            out.append((_from_dense(f, p.vars, var), k))
    return out


def factor(p: Polynomial, seed: int = 0) -> Factorization:
    """Complete factorization of p over Q into irreducible polynomials.

    Factors are integer-primitive with positive leading coefficients,
    sorted deterministically; the unit absorbs the rational content.
    Intended scale is a handful of variables at modest degree; a retry
    budget guards the evaluation and recombination searches.
    """
    if seed == 0:
        return _factor_cached(p)
    return _factor_impl(p, seed)


@lru_cache(maxsize=8192)
def _factor_cached(p: Polynomial) -> Factorization:
    return _factor_impl(p, 0)


def _factor_impl(p: Polynomial, seed: int) -> Factorization:
    if p.is_zero():
        raise ZeroDivisionError("cannot factor the zero polynomial")
    rng = random.Random((seed, 0x5EED))
    vars = p.vars
    unit = p.content()
    work = p.primitive()
    factors: list[tuple[Polynomial, int]] = []

    # monomial content
    if not work.is_constant():
        mins = [min(e[i] for e in work.terms) for i in range(len(vars))]
        if any(mins):
            work = Polynomial(vars, {tuple(x - m for x, m in zip(e, mins)): c for e, c in work.terms.items()})
            for i, m in enumerate(mins):
                if m:
                    factors.append((Polynomial.variable(vars, vars[i]), m))

    used = work.variables_used()
    if len(used) == 1:
        factors.extend(factor_univariate_core(work, used[0], rng))
    elif len(used) >= 2:
        sf = squarefree_part(work)
        if len(used) == 2:
            xvar = max(used, key=lambda v: work.degree_in(v))
            yvar = [v for v in used if v != xvar][0]
            cx = _content_x(sf, xvar)
            irr: list[Polynomial] = []
            if not cx.is_constant():
                cyvar = cx.variables_used()[0]
                irr.extend(f for f, _ in factor_univariate_core(cx, cyvar, rng))
                sf = exact_divide(sf, cx)
            if sf.total_degree() > 0:
                if len(sf.variables_used()) == 1:
                    irr.extend(f for f, _ in factor_univariate_core(sf, sf.variables_used()[0], rng))
                else:
                    irr.extend(_factor_bivariate_squarefree(sf, xvar, yvar, rng))
        else:
            irr = _factor_multivariate_squarefree(sf, rng)
        for f in irr:
            f = f.primitive()
            k = 0
            while True:
                quot = try_exact_divide(work, f)
                if quot is None:
                    break
                work = quot
                k += 1
            if k:
                factors.append((f, k))
        # anything left after dividing out all certified factors is constant
        if not work.is_constant():
            raise ArithmeticError(f"incomplete factorization of {p}")

    factors.sort(key=lambda fk: (fk[0].total_degree(), str(fk[0])))
    result = Factorization(unit=unit, factors=tuple(factors), certified=True)
    check = result.expand_in(vars)
    if check != p:
        raise ArithmeticError(f"factorization certification failed for {p}")
    return result


def factor_univariate(p: Polynomial, seed: int = 0) -> Factorization:
    """Factorization of a polynomial in (at most) one variable."""
    if p.is_zero():
        raise ZeroDivisionError("cannot factor the zero polynomial")
    used = p.variables_used()
    if len(used) > 1:
        raise ValueError("factor_univariate needs a univariate polynomial")
    return factor(p, seed)


def is_irreducible(p: Polynomial, seed: int = 0) -> bool:
    """True when p is irreducible over Q (constants are rejected)."""
    if p.is_zero() or p.is_constant():
        raise ValueError("irreducibility is about nonconstant polynomials")
    f = factor(p, seed)
    return len(f.factors) == 1 and f.factors[0][1] == 1
