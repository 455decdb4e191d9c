"""Exact sparse multivariate polynomials and rational functions over Q.

A polynomial is a map from exponent vectors to nonzero rational
coefficients, tagged with an ordered tuple of variable names (the ring).
Coefficients are `fractions.Fraction`, so every operation is exact;
nothing in this module (or the package) touches floating point.

  terms: dict[tuple[int, ...], Fraction]    one entry per monomial
  vars:  tuple[str, ...]                    ring context, fixed length

The zero polynomial has an empty term map.  Equality is term-map
equality, which makes canonical forms meaningful: two polynomials are
equal exactly when they print the same.

Display and leading-term selection default to graded lexicographic
order on the declared variable tuple.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Mapping

from .errors import NotDivisibleError, RingMismatchError

Exponents = tuple[int, ...]


def grlex_key(exps: Exponents) -> tuple:
    """Sort key under graded lex; a larger key is a larger monomial."""
    return (sum(exps), exps)


def _monomial_mul(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))


def _monomial_divides(a: Exponents, b: Exponents) -> bool:
    """True if monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def _monomial_div(b: Exponents, a: Exponents) -> Exponents:
    return tuple(y - x for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial over Q."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Iterable[str], terms: Mapping[Exponents, Fraction | int]):
        vs = tuple(vars)
        clean: dict[Exponents, Fraction] = {}
        for exps, c in terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            e = tuple(int(x) for x in exps)
            if len(e) != len(vs) or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e} for ring {vs}")
            clean[e] = c
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(vars: Iterable[str]) -> "Polynomial":
        return Polynomial(vars, {})

    @staticmethod
    def constant(vars: Iterable[str], c) -> "Polynomial":
        vs = tuple(vars)
        return Polynomial(vs, {(0,) * len(vs): Fraction(c)})

    @staticmethod
    def one(vars: Iterable[str]) -> "Polynomial":
        return Polynomial.constant(vars, 1)

    @staticmethod
    def variable(vars: Iterable[str], name: str) -> "Polynomial":
        vs = tuple(vars)
        if name not in vs:
            raise ValueError(f"{name!r} is not a variable of {vs}")
        e = [0] * len(vs)
        e[vs.index(name)] = 1
        return Polynomial(vs, {tuple(e): Fraction(1)})

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str) -> int:
        if not self.terms:
            return -1
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def variables_used(self) -> tuple[str, ...]:
        used = [False] * len(self.vars)
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def leading_exponents(self) -> Exponents:
        """Leading monomial under graded lex."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_exponents()]

    def num_terms(self) -> int:
        return len(self.terms)

    # -- ring arithmetic -----------------------------------------------

    def _check_ring(self, other: "Polynomial") -> None:
        if self.vars != other.vars:
            raise RingMismatchError(f"{self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.vars, other)
        self._check_ring(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Polynomial(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return Polynomial.zero(self.vars)
            return Polynomial(self.vars, {e: k * c for e, k in self.terms.items()})
        self._check_ring(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _monomial_mul(e1, e2)
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return Polynomial(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial; use RationalFunction")
        result = Polynomial.one(self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.vars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- ring changes ----------------------------------------------------

    def extend(self, new_vars: Iterable[str]) -> "Polynomial":
        """Reinterpret in a larger ring containing all current variables."""
        nv = tuple(new_vars)
        pos = []
        for v in self.vars:
            if v not in nv:
                raise ValueError(f"variable {v} missing from target ring {nv}")
            pos.append(nv.index(v))
        out: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * len(nv)
            for i, x in enumerate(e):
                ne[pos[i]] = x
            out[tuple(ne)] = c
        return Polynomial(nv, out)

    def restrict(self, new_vars: Iterable[str]) -> "Polynomial":
        """Reinterpret in a subring; fails if a dropped variable is used."""
        nv = tuple(new_vars)
        used = self.variables_used()
        for v in used:
            if v not in nv:
                raise ValueError(f"polynomial uses {v}, not in target ring {nv}")
        idx = [self.vars.index(v) for v in nv]
        out = {tuple(e[i] for i in idx): c for e, c in self.terms.items()}
        return Polynomial(nv, out)

    def eval_partial(self, values: Mapping[str, Fraction | int]) -> "Polynomial":
        """Substitute rational numbers for some variables; ring unchanged."""
        idx = {self.vars.index(v): Fraction(c) for v, c in values.items()}
        out: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            coef = c
            ne = list(e)
            for i, val in idx.items():
                coef *= val ** e[i]
                ne[i] = 0
            if coef == 0:
                continue
            key = tuple(ne)
            s = out.get(key, Fraction(0)) + coef
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return Polynomial(self.vars, out)

    def subs_poly(self, bindings: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Substitute polynomials for variables (all in one target ring)."""
        target = None
        for b in bindings.values():
            if target is None:
                target = b.vars
            elif b.vars != target:
                raise RingMismatchError("substitution images live in different rings")
        if target is None:
            target = self.vars
        images = []
        for v in self.vars:
            if v in bindings:
                images.append(bindings[v])
            else:
                images.append(Polynomial.variable(target, v))
        out = Polynomial.zero(target)
        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, x in enumerate(e):
                if x:
                    term = term * images[i] ** x
            out = out + term
        return out

    # -- normal forms -----------------------------------------------------

    def content(self) -> Fraction:
        """Rational content: positive c with self/c integer and primitive.

        Sign convention: the returned content carries the sign of the
        graded-lex leading coefficient, so self/content() always has a
        positive leading coefficient.
        """
        if not self.terms:
            raise ValueError("zero polynomial has no content")
        num = 0
        den = 1
        for c in self.terms.values():
            num = int_gcd(num, abs(c.numerator))
            den = den * c.denominator // int_gcd(den, c.denominator)
        c = Fraction(num, den)
        if self.leading_coefficient() < 0:
            c = -c
        return c

    def primitive(self) -> "Polynomial":
        """Integer-primitive associate with positive leading coefficient."""
        if not self.terms:
            return self
        return self * (1 / self.content())

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self * (1 / self.leading_coefficient())

    # -- display ----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{v}^{x}" if x > 1 else v
                for v, x in zip(self.vars, e)
                if x
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, vars={self.vars})"


# -- module-level operations ---------------------------------------------


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def try_exact_divide(p: Polynomial, q: Polynomial) -> Polynomial | None:
    """Quotient p/q when the division is exact, else None."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    p._check_ring(q)
    if p.is_zero():
        return p
    lq = q.leading_exponents()
    cq = q.terms[lq]
    quot: dict[Exponents, Fraction] = {}
    rem = p
    while not rem.is_zero():
        lr = rem.leading_exponents()
        if not _monomial_divides(lq, lr):
            return None
        e = _monomial_div(lr, lq)
        c = rem.terms[lr] / cq
        quot[e] = c
        rem = rem - Polynomial(p.vars, {e: c}) * q
    return Polynomial(p.vars, quot)


def exact_divide(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact quotient; raises NotDivisibleError on a nonzero remainder."""
    r = try_exact_divide(p, q)
    if r is None:
        raise NotDivisibleError(f"({p}) is not divisible by ({q})")
    return r


def divides(q: Polynomial, p: Polynomial) -> bool:
    return try_exact_divide(p, q) is not None


def derivative(p: Polynomial, var: str) -> Polynomial:
    i = p.vars.index(var)
    out: dict[Exponents, Fraction] = {}
    for e, c in p.terms.items():
        if e[i] == 0:
            continue
        ne = list(e)
        ne[i] -= 1
        out[tuple(ne)] = c * e[i]
    return Polynomial(p.vars, out)


def _pseudo_rem_in_var(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    """Pseudo-remainder of p by q viewed in (ring minus var)[var]."""
    i = p.vars.index(var)
    dq = q.degree_in(var)
    lq = _coeff_in_var(q, var, dq)
    rem = p
    while not rem.is_zero() and rem.degree_in(var) >= dq:
        dr = rem.degree_in(var)
        lr = _coeff_in_var(rem, var, dr)
        shift = Polynomial(p.vars, {tuple(dr - dq if j == i else 0 for j in range(len(p.vars))): Fraction(1)})
        rem = rem * lq - q * shift * lr
    return rem


def _coeff_in_var(p: Polynomial, var: str, d: int) -> Polynomial:
    """Coefficient of var^d, as a polynomial in the same ring."""
    i = p.vars.index(var)
    out = {}
    for e, c in p.terms.items():
        if e[i] == d:
            ne = list(e)
            ne[i] = 0
            out[tuple(ne)] = c
    return Polynomial(p.vars, out)


def _gcd_univariate(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    a, b = p, q
    while not b.is_zero():
        a, b = b, _rem_univariate(a, b, var)
    return a.primitive()


def _rem_univariate(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    i = p.vars.index(var)
    dq = q.degree_in(var)
    cq = _coeff_in_var(q, var, dq).constant_value()
    rem = p
    while not rem.is_zero() and rem.degree_in(var) >= dq:
        dr = rem.degree_in(var)
        cr = _coeff_in_var(rem, var, dr).constant_value()
        shift = Polynomial(p.vars, {tuple(dr - dq if j == i else 0 for j in range(len(p.vars))): cr / cq})
        rem = rem - q * shift
    return rem


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Greatest common divisor, integer-primitive with positive leading coefficient.

    Content and primitive part are split off recursively on the last
    variable in use; primitive parts go through a subresultant remainder
    sequence, which keeps intermediate coefficients manageable without
    any modular arithmetic.
    """
    p._check_ring(q)
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if p.is_zero():
        return q.primitive()
    if q.is_zero():
        return p.primitive()
    if p.is_constant() or q.is_constant():
        return Polynomial.one(p.vars)
    used = set(p.variables_used()) | set(q.variables_used())
    active = [v for v in p.vars if v in used]
    var = active[-1]
    if len(active) == 1:
        return _gcd_univariate(p, q, var)
    return _gcd_multivariate(p, q, var)


def _content_in_var(p: Polynomial, var: str) -> Polynomial:
    """Gcd of the var-coefficients (a polynomial not involving var)."""
    d = p.degree_in(var)
    coeffs = [_coeff_in_var(p, var, k) for k in range(d + 1)]
    coeffs = [c for c in coeffs if not c.is_zero()]
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = gcd(g, c)
    if g.is_constant():
        g = Polynomial.one(p.vars)
    return g


def _gcd_multivariate(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    cp = _content_in_var(p, var)
    cq = _content_in_var(q, var)
    cg = gcd(cp, cq)
    a = exact_divide(p, cp)
    b = exact_divide(q, cq)
    if a.degree_in(var) < b.degree_in(var):
        a, b = b, a
    # subresultant remainder sequence on the primitive parts
    one = Polynomial.one(p.vars)
    g, h = one, one
    while True:
        delta = a.degree_in(var) - b.degree_in(var)
        r = _pseudo_rem_in_var(a, b, var)
        if r.is_zero():
            break
        if r.degree_in(var) == 0:
            b = one
            break
        a, b = b, exact_divide(r, g * h ** delta)
        g = _coeff_in_var(a, var, a.degree_in(var))
        if delta > 0:
            # h <- g^delta * h^(1-delta), an exact division for delta > 1
            h = g if delta == 1 else exact_divide(g ** delta, h ** (delta - 1))
    if not b.is_constant():
        b = exact_divide(b, _content_in_var(b, var))
    return (cg * b).primitive()


def squarefree_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of p, primitive form."""
    if p.is_zero():
        raise ValueError("squarefree part of 0 is undefined")
    if p.is_constant():
        return Polynomial.one(p.vars)
    g = None
    for v in p.variables_used():
        d = derivative(p, v)
        if d.is_zero():
            continue
        g = d if g is None else gcd(g, d)
        if g.is_constant():
            break
    if g is None or g.is_constant():
        return p.primitive()
    g = gcd(p, g)
    if g.is_constant():
        return p.primitive()
    return exact_divide(p, g).primitive()


class RationalFunction:
    """Quotient of polynomials in canonical form.

    Canonical form: numerator and denominator have integer coefficients
    with coprime contents, share no polynomial factor, and the
    denominator has positive leading coefficient under graded lex.
    Equality is therefore a syntactic check on the two polynomials.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        if den is None:
            den = Polynomial.one(num.vars)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        num._check_ring(den)
        if num.is_zero():
            object.__setattr__(self, "num", Polynomial.zero(num.vars))
            object.__setattr__(self, "den", Polynomial.one(num.vars))
            return
        g = gcd(num, den)
        if not g.is_constant():
            num = exact_divide(num, g)
            den = exact_divide(den, g)
        # scale so both parts are integer with coprime contents, den lc > 0
        ratio = num.content() / den.content()
        num = num.primitive() * ratio.numerator
        den = den.primitive() * ratio.denominator
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @property
    def vars(self) -> tuple[str, ...]:
        return self.num.vars

    @staticmethod
    def from_constant(vars: Iterable[str], c) -> "RationalFunction":
        return RationalFunction(Polynomial.constant(vars, c))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def __add__(self, other):
        other = _coerce_rf(other, self.vars)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_coerce_rf(other, self.vars))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_rf(other, self.vars)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_rf(other, self.vars)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce_rf(other, self.vars) / self

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        return RationalFunction(self.den, self.num)

    def __pow__(self, n: int):
        if n == 0:
            return RationalFunction.from_constant(self.vars, 1)
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = _coerce_rf(other, self.vars)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num * (1 / self.den.constant_value())

    def __str__(self):
        if self.den == Polynomial.one(self.vars):
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


def _coerce_rf(x, vars: tuple[str, ...]) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x)
    return RationalFunction.from_constant(vars, x)


def substitute(p: Polynomial, bindings: Mapping[str, RationalFunction]) -> RationalFunction:
    """Evaluate p at rational-function images of its variables.

    Variables not bound map to themselves; substitution is an exact ring
    homomorphism into the function field.
    """
    target = None
    for b in bindings.values():
        if target is None:
            target = b.vars
        elif b.vars != target:
            raise RingMismatchError("substitution images live in different rings")
    if target is None:
        target = p.vars
    images: list[RationalFunction] = []
    for v in p.vars:
        if v in bindings:
            images.append(bindings[v])
        else:
            images.append(RationalFunction(Polynomial.variable(target, v)))
    out = RationalFunction.from_constant(target, 0)
    for e, c in p.terms.items():
        term = RationalFunction.from_constant(target, c)
        for img, x in zip(images, e):
            if x:
                term = term * img ** x
        out = out + term
    return out
