"""Zero-dimensional ideals: point decomposition and local multiplicities.

The decomposition works with a separating linear form.  For a radical
zero-dimensional ideal whose quotient has dimension d, a linear form
whose minimal polynomial also has degree d makes the powers of the form
a vector-space basis; each variable is then a univariate polynomial in
the form, and the points fall out of the factorization of the minimal
polynomial.  That is the shape presentation.  Local multiplicities come
from splitting the quotient algebra along the coprime factor powers of
the minimal polynomial, which is equivalent to genuine localization for
Artinian algebras.

Plane-curve divisors reduce to the same machinery: the coefficient of a
point P in the divisor of g on the curve f = 0 is the signed sum of
local dimensions of Q[u,v]/(f, q) over the factors q of g.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ResourceBudgetExceeded
from .factor import factor, is_irreducible
from .groebner import GREVLEX, INFINITE, LEX, Ideal
from .poly import Polynomial, RationalFunction, divides, grlex_key

_RETRY_BUDGET = 24


@dataclass(frozen=True)
class ClosedPoint:
    """A maximal ideal in shape-certified presentation.

    `gens` is the reduced lex Groebner basis in the ambient ring, which
    makes equality and hashing canonical.  `coords` is set for rational
    points only, as a display convenience.
    """

    vars: tuple[str, ...]
    gens: tuple[Polynomial, ...]
    degree: int
    coords: tuple[Fraction, ...] | None = field(default=None, compare=False)

    def ideal(self) -> Ideal:
        return Ideal(self.vars, list(self.gens))

    @staticmethod
    def from_coords(vars: tuple[str, ...], coords) -> "ClosedPoint":
        cs = tuple(Fraction(c) for c in coords)
        gens = [Polynomial.variable(vars, v) - Polynomial.constant(vars, c) for v, c in zip(vars, cs)]
        canon = tuple(Ideal(vars, gens).groebner_basis(LEX))
        return ClosedPoint(vars, canon, 1, cs)

    def __str__(self):
        if self.coords is not None:
            return "(" + ", ".join(str(c) for c in self.coords) + ")"
        return "V(" + ", ".join(str(g) for g in self.gens) + ")"


class ZeroCycle:
    """Formal integer combination of closed points."""

    def __init__(self, terms: dict[ClosedPoint, int] | None = None):
        self.terms: dict[ClosedPoint, int] = {}
        for p, m in (terms or {}).items():
            if m:
                self.terms[p] = self.terms.get(p, 0) + m
        self.terms = {p: m for p, m in self.terms.items() if m}

    def __add__(self, other: "ZeroCycle") -> "ZeroCycle":
        out = dict(self.terms)
        for p, m in other.terms.items():
            out[p] = out.get(p, 0) + m
        return ZeroCycle(out)

    def __neg__(self) -> "ZeroCycle":
        return ZeroCycle({p: -m for p, m in self.terms.items()})

    def __sub__(self, other: "ZeroCycle") -> "ZeroCycle":
        return self + (-other)

    def scale(self, k: int) -> "ZeroCycle":
        return ZeroCycle({p: k * m for p, m in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def total(self) -> int:
        """Sum of coefficients weighted by point degrees."""
        return sum(m * p.degree for p, m in self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, ZeroCycle):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list[tuple[ClosedPoint, int]]:
        return sorted(self.terms.items(), key=lambda t: str(t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for p, m in self.sorted_terms():
            if m == 1:
                body = f"[{p}]"
            elif m == -1:
                body = f"-[{p}]"
            else:
                body = f"{m}*[{p}]"
            parts.append(body if not parts else (f"+ {body}" if m > 0 else f"+ {body}").replace("+ -", "- "))
        return " ".join(parts)

    def __repr__(self):
        return f"ZeroCycle({str(self)})"


# ---------------------------------------------------------------------------
# linear algebra over Q in the quotient algebra
# ---------------------------------------------------------------------------


def _standard_monomials(I: Ideal) -> list[tuple[int, ...]]:
    from .poly import _monomial_divides

    basis = I.groebner_basis(GREVLEX)
    lms = [max(g.terms, key=GREVLEX.key) for g in basis]
    n = len(I.vars)
    bounds = [None] * n
    for lm in lms:
        nz = [i for i, e in enumerate(lm) if e]
        if len(nz) == 1 and (bounds[nz[0]] is None or lm[nz[0]] < bounds[nz[0]]):
            bounds[nz[0]] = lm[nz[0]]
    if any(b is None for b in bounds):
        raise ValueError("ideal is not zero-dimensional")
    out = []

    def rec(i, exps):
        if i == n:
            e = tuple(exps)
            if not any(_monomial_divides(lm, e) for lm in lms):
                out.append(e)
            return
        for x in range(bounds[i]):
            exps[i] = x
            rec(i + 1, exps)
        exps[i] = 0

    rec(0, [0] * n)
    out.sort(key=grlex_key)
    return out


def _coords(p: Polynomial, I: Ideal, index: dict[tuple[int, ...], int]) -> list[Fraction]:
    nf = I.normal_form(p)
    v = [Fraction(0)] * len(index)
    for e, c in nf.terms.items():
        v[index[e]] = c
    return v


class _Echelon:
    """Incremental row reduction with combination tracking."""

    def __init__(self, width: int):
        self.width = width
        self.rows: list[tuple[list[Fraction], list[Fraction]]] = []
        self.pivots: list[int] = []

    def reduce(self, vec: list[Fraction], tag: list[Fraction]):
        v = list(vec)
        t = list(tag)
        for (row, combo), piv in zip(self.rows, self.pivots):
            if v[piv]:
                c = v[piv] / row[piv]
                v = [a - c * b for a, b in zip(v, row)]
                t = [a - c * b for a, b in zip(t, combo)]
        return v, t

    def insert(self, vec, tag) -> tuple[list[Fraction], list[Fraction]] | None:
        """Returns (residual, combo) when vec is dependent, else None."""
        v, t = self.reduce(vec, tag)
        piv = next((i for i, a in enumerate(v) if a), None)
        if piv is None:
            return v, t
        self.rows.append((v, t))
        self.pivots.append(piv)
        return None


def _minimal_polynomial(elem: Polynomial, I: Ideal, index) -> list[Fraction]:
    """Monic minimal polynomial of elem in ring/I, dense coefficient list."""
    dim = len(index)
    ech = _Echelon(dim)
    power = Polynomial.one(elem.vars)
    k = 0
    while True:
        vec = _coords(power, I, index)
        tag = [Fraction(0)] * (dim + 1)
        tag[k] = Fraction(1)
        dep = ech.insert(vec, tag)
        if dep is not None:
            _, combo = dep
            coeffs = combo[: k + 1]
            lead = coeffs[k]
            return [c / lead for c in coeffs]
        k += 1
        if k > dim:
            raise ArithmeticError("minimal polynomial search exceeded the quotient dimension")
        power = I.normal_form(power * elem)


def _solve_in_powers(target: list[Fraction], power_vecs: list[list[Fraction]]) -> list[Fraction]:
    """Coefficients a_j with sum a_j * power_vecs[j] = target (unique)."""
    d = len(power_vecs)
    n = len(target)
    # Gaussian elimination on the d x n system's transpose
    rows = [list(power_vecs[j]) + [Fraction(1 if i == j else 0) for i in range(d)] for j in range(d)]
    # reduce to echelon over the first n columns
    pivots = []
    r = 0
    for col in range(n):
        sel = next((i for i in range(r, d) if rows[i][col]), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pr = rows[r]
        for i in range(d):
            if i != r and rows[i][col]:
                c = rows[i][col] / pr[col]
                rows[i] = [a - c * b for a, b in zip(rows[i], pr)]
        pivots.append(col)
        r += 1
        if r == d:
            break
    t = list(target)
    coeffs = [Fraction(0)] * d
    for i, col in enumerate(pivots):
        if t[col]:
            c = t[col] / rows[i][col]
            t = [a - c * b for a, b in zip(t, rows[i][:n])]
            for j in range(d):
                coeffs[j] += c * rows[i][n + j]
    if any(t):
        raise ArithmeticError("target not in the span of the powers")
    return coeffs


def _univar_from_dense(coeffs: list[Fraction], vars=("_s",)) -> Polynomial:
    return Polynomial(vars, {(i,): c for i, c in enumerate(coeffs) if c})


def _compose(coeffs: list[Fraction], x: Polynomial) -> Polynomial:
    """Evaluate a dense univariate polynomial at the polynomial x (Horner)."""
    out = Polynomial.zero(x.vars)
    for c in reversed(coeffs):
        out = out * x + Polynomial.constant(x.vars, c)
    return out


def _univar_rem(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    from .factor import _q_divmod

    return _q_divmod(list(f), list(g))[1]


def _univar_squarefree(f: list[Fraction]) -> list[Fraction]:
    from .factor import _q_divmod, _q_gcdex, _q_mul

    der = [i * c for i, c in enumerate(f)][1:]
    while der and der[-1] == 0:
        der.pop()
    if not der:
        return f
    _, _, g = _q_gcdex(f, der)
    if len(g) <= 1:
        return f
    g = [c / g[-1] for c in g]
    q, r = _q_divmod(f, g)
    if r:
        raise ArithmeticError("squarefree division was not exact")
    return q


def decompose(I: Ideal, seed: int = 0) -> list[tuple[ClosedPoint, int]]:
    """Closed points of a zero-dimensional ideal with local multiplicities.

    The multiplicity of a point P is the length of the localized quotient
    at P, i.e. its Q-dimension divided by the residue degree of P, so
    that sum(degree * multiplicity) equals the quotient dimension.
    """
    qd = I.quotient_dimension()
    if qd is INFINITE:
        raise ValueError("decompose needs a zero-dimensional ideal")
    if qd == 0:
        return []
    vars = I.vars
    index_map = {e: i for i, e in enumerate(_standard_monomials(I))}

    # radical via squarefree parts of the per-variable minimal polynomials
    radical_gens = list(I.generators)
    is_radical = True
    for v in vars:
        mv = _minimal_polynomial(Polynomial.variable(vars, v), I, index_map)
        sf = _univar_squarefree(mv)
        if len(sf) != len(mv):
            is_radical = False
            radical_gens.append(_compose(sf, Polynomial.variable(vars, v)))
    R = I if is_radical else Ideal(vars, radical_gens)
    qd_rad = qd if is_radical else R.quotient_dimension()
    rad_index = index_map if is_radical else {e: i for i, e in enumerate(_standard_monomials(R))}

    rng = random.Random((seed, 0xD15C))
    candidates: list[list[int]] = []
    for i in range(len(vars) - 1, -1, -1):
        c = [0] * len(vars)
        c[i] = 1
        candidates.append(c)

    attempts = 0
    while True:
        if candidates:
            coeffs_l = candidates.pop(0)
        else:
            coeffs_l = [rng.randint(-5, 5) for _ in vars]
            coeffs_l[-1] = 1
        attempts += 1
        if attempts > _RETRY_BUDGET:
            raise ResourceBudgetExceeded("no separating linear form found")
        lam = Polynomial.zero(vars)
        for v, c in zip(vars, coeffs_l):
            if c:
                lam = lam + Polynomial.variable(vars, v) * c
        if lam.is_zero():
            continue
        m_rad = _minimal_polynomial(lam, R, rad_index)
        if len(m_rad) - 1 != qd_rad:
            continue

        # powers of lam in the radical quotient form a basis
        d = qd_rad
        power_vecs = []
        power = Polynomial.one(vars)
        for _ in range(d):
            power_vecs.append(_coords(power, R, rad_index))
            power = R.normal_form(power * lam)
        var_coords = {v: _solve_in_powers(_coords(Polynomial.variable(vars, v), R, rad_index), power_vecs) for v in vars}

        m_full = m_rad if is_radical else _minimal_polynomial(lam, I, index_map)
        fac = factor(_univar_from_dense(m_full), seed=seed or 1)
        pieces = []
        ok = True
        for h_poly, e in fac.factors:
            h_dense = [Fraction(0)] * (h_poly.total_degree() + 1)
            for ee, c in h_poly.terms.items():
                h_dense[ee[0]] = c
            h_dense = [c / h_dense[-1] for c in h_dense]
            pieces.append((h_dense, e))
        if sum(len(h) - 1 for h, _ in pieces) != qd_rad:
            ok = False
        if not ok:
            continue

        result: list[tuple[ClosedPoint, int]] = []
        total = 0
        for h_dense, e in pieces:
            deg = len(h_dense) - 1
            gens = [_compose(h_dense, lam)]
            coords: list[Fraction] | None = [] if deg == 1 else None
            for v in vars:
                gv = _univar_rem(var_coords[v], h_dense)
                img = _compose(gv, lam)
                gens.append(Polynomial.variable(vars, v) - img)
                if deg == 1:
                    coords.append(gv[0] if gv else Fraction(0))
            canon = tuple(Ideal(vars, gens).groebner_basis(LEX))
            point = ClosedPoint(vars, canon, deg, tuple(coords) if coords is not None else None)
            if is_radical:
                mult = 1
            else:
                local = I.with_extra(_compose(h_dense, lam) ** e)
                ldim = local.quotient_dimension()
                if ldim is INFINITE or ldim % deg:
                    ok = False
                    break
                mult = ldim // deg
            total += deg * mult
            result.append((point, mult))
        if not ok or total != qd:
            continue
        result.sort(key=lambda pm: str(pm[0]))
        return result


def intersection_multiplicity(f: Polynomial, g: Polynomial, P: ClosedPoint, seed: int = 0) -> int:
    """Length of Q[u,v]/(f,g) localized at P, per residue degree.

    Satisfies the classical axioms: symmetric, additive over products,
    unchanged by g -> g + h*f, and 1 for transverse lines.
    """
    if f.vars != g.vars or len(f.vars) != 2:
        raise ValueError("intersection multiplicities live on a two-variable ring")
    if f.is_zero() or g.is_zero():
        raise ZeroDivisionError("intersection with the zero polynomial")
    from .poly import exact_divide, gcd

    d = gcd(f, g)
    if not d.is_constant():
        if Ideal(P.vars, list(P.gens)).contains(d):
            raise ValueError("curves share a component through the point")
        f = exact_divide(f, d)
        g = exact_divide(g, d)
    if f.is_constant() or g.is_constant():
        return 0
    for point, mult in decompose(Ideal(f.vars, [f, g]), seed=seed):
        if point == P:
            return mult
    return 0


def div_on_curve(curve: Polynomial, g: RationalFunction, seed: int = 0) -> ZeroCycle:
    """Divisor of the restriction of g to the affine irreducible curve.

    Zeros of the numerator count positively, zeros of the denominator
    negatively, each with its intersection multiplicity against the
    curve; points at infinity are not tracked.
    """
    if len(curve.vars) != 2:
        raise ValueError("curve divisors are implemented on two variables")
    if curve.is_constant() or curve.is_zero():
        raise ValueError("the curve polynomial must be nonconstant")
    if not is_irreducible(curve):
        raise ValueError(f"curve {curve} is not irreducible")
    if g.is_zero():
        raise ZeroDivisionError("the zero function has no divisor")
    if divides(curve, g.num) or divides(curve, g.den):
        raise ValueError("function does not restrict to a nonzero function on the curve")

    out = ZeroCycle()
    for part, sign in ((g.num, 1), (g.den, -1)):
        if part.is_constant():
            continue
        for q, mult in factor(part).factors:
            if q.is_constant():
                continue
            pieces = decompose(Ideal(curve.vars, [curve, q]), seed=seed)
            out = out + ZeroCycle({p: sign * mult * m for p, m in pieces})
    return out
