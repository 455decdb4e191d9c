"""Buchberger-based Groebner kernel: membership, elimination, saturation.

The implementation is the classical algorithm with the two standard
pair-skipping criteria (coprime leading terms and the chain criterion).
Every reduced polynomial is renormalized to an integer-primitive form
with positive leading coefficient, which keeps coefficient growth in
check without modular arithmetic and makes reduced bases canonical.

A module-level step budget guards against runaway computations; exceed
it and `ResourceBudgetExceeded` is raised instead of hanging.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ResourceBudgetExceeded
from .poly import (
    Exponents,
    Polynomial,
    _monomial_div,
    _monomial_divides,
    _monomial_mul,
    grlex_key,
)

DEFAULT_STEP_BUDGET = 200_000
_step_budget = DEFAULT_STEP_BUDGET


def set_step_budget(n: int) -> None:
    """Set the global bound on pair reductions per basis computation."""
    global _step_budget
    _step_budget = int(n)


def get_step_budget() -> int:
    return _step_budget


class MonomialOrder:
    """A total order on monomials compatible with multiplication.

    kinds: 'lex', 'grlex', 'grevlex', and 'elim' (block order that
    eliminates a designated set of variable positions first).
    """

    def __init__(self, kind: str, elim_positions: frozenset[int] | None = None):
        if kind not in ("lex", "grlex", "grevlex", "elim"):
            raise ValueError(f"unknown order kind {kind!r}")
        if kind == "elim" and not elim_positions:
            raise ValueError("elimination order needs a nonempty block")
        self.kind = kind
        self.elim_positions = elim_positions or frozenset()

    def key(self, exps: Exponents):
        if self.kind == "lex":
            return exps
        if self.kind == "grlex":
            return (sum(exps), exps)
        if self.kind == "grevlex":
            return (sum(exps), tuple(-e for e in reversed(exps)))
        first = tuple(e for i, e in enumerate(exps) if i in self.elim_positions)
        rest = tuple(e for i, e in enumerate(exps) if i not in self.elim_positions)
        return ((sum(first), first), (sum(rest), rest))

    def cache_token(self):
        return (self.kind, tuple(sorted(self.elim_positions)))

    def __repr__(self):
        if self.kind == "elim":
            return f"MonomialOrder('elim', {sorted(self.elim_positions)})"
        return f"MonomialOrder({self.kind!r})"


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")
GREVLEX = MonomialOrder("grevlex")


def elimination_order(vars: Sequence[str], drop: Iterable[str]) -> MonomialOrder:
    positions = frozenset(vars.index(v) for v in drop)
    return MonomialOrder("elim", positions)


def _leading(p: Polynomial, order: MonomialOrder) -> Exponents:
    return max(p.terms, key=order.key)


def _reduce_full(p: Polynomial, basis: list[Polynomial], lms: list[Exponents], order: MonomialOrder) -> Polynomial:
    """Remainder of p on full division by basis; deterministic reducer choice."""
    vars = p.vars
    rem_terms: dict[Exponents, Fraction] = {}
    work = dict(p.terms)
    while work:
        e = max(work, key=order.key)
        c = work.pop(e)
        hit = -1
        for i, lm in enumerate(lms):
            if _monomial_divides(lm, e):
                hit = i
                break
        if hit < 0:
            rem_terms[e] = c
            continue
        g = basis[hit]
        lm = lms[hit]
        factor_e = _monomial_div(e, lm)
        factor_c = c / g.terms[lm]
        for ge, gc in g.terms.items():
            if ge == lm:
                continue
            key = _monomial_mul(ge, factor_e)
            s = work.get(key, Fraction(0)) - gc * factor_c
            if s == 0:
                work.pop(key, None)
            else:
                work[key] = s
    return Polynomial(vars, rem_terms)


def _s_poly(f: Polynomial, g: Polynomial, lf: Exponents, lg: Exponents) -> Polynomial:
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    mf = Polynomial(f.vars, {_monomial_div(lcm, lf): 1 / f.terms[lf]})
    mg = Polynomial(g.vars, {_monomial_div(lcm, lg): 1 / g.terms[lg]})
    return f * mf - g * mg


def buchberger(generators: Sequence[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    """The unique reduced Groebner basis, integer-primitive, positive leading coefficients."""
    G: list[Polynomial] = []
    lms: list[Exponents] = []
    for g in generators:
        if g.is_zero():
            continue
        g = g.primitive()
        G.append(g)
        lms.append(_leading(g, order))
    if not G:
        return []

    def lcm_exp(a: Exponents, b: Exponents) -> Exponents:
        return tuple(max(x, y) for x, y in zip(a, b))

    pairs: set[tuple[int, int]] = set()
    done: set[tuple[int, int]] = set()
    for i, j in combinations(range(len(G)), 2):
        pairs.add((i, j))
    steps = 0
    while pairs:
        # normal selection: smallest lcm in the order
        i, j = min(pairs, key=lambda ij: (order.key(lcm_exp(lms[ij[0]], lms[ij[1]])), ij))
        pairs.discard((i, j))
        done.add((i, j))
        li, lj = lms[i], lms[j]
        lcm = lcm_exp(li, lj)
        if lcm == _monomial_mul(li, lj):
            continue  # coprime leading terms
        chain = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if _monomial_divides(lms[k], lcm):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a in done and b in done:
                    chain = True
                    break
        if chain:
            continue
        steps += 1
        if steps > _step_budget:
            raise ResourceBudgetExceeded(f"basis computation exceeded {_step_budget} reductions")
        s = _s_poly(G[i], G[j], li, lj)
        r = _reduce_full(s, G, lms, order)
        if r.is_zero():
            continue
        r = r.primitive()
        idx = len(G)
        G.append(r)
        lms.append(_leading(r, order))
        for k in range(idx):
            pairs.add((k, idx))

    # minimalize: drop elements whose leading monomial is divisible by another's
    minimal: list[int] = []
    for i in sorted(range(len(G)), key=lambda k: order.key(lms[k])):
        if not any(_monomial_divides(lms[j], lms[i]) for j in minimal):
            minimal.append(i)
    Gm = [G[i] for i in minimal]
    lm_m = [lms[i] for i in minimal]
    # interreduce
    reduced: list[Polynomial] = []
    for i in range(len(Gm)):
        others = [Gm[j] for j in range(len(Gm)) if j != i]
        lms_o = [lm_m[j] for j in range(len(Gm)) if j != i]
        r = _reduce_full(Gm[i], others, lms_o, order) if others else Gm[i]
        if not r.is_zero():
            reduced.append(r.primitive())
    reduced.sort(key=lambda p: order.key(_leading(p, order)), reverse=True)
    return reduced


class Infinite:
    """Sentinel for an infinite-dimensional quotient."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinite"


INFINITE = Infinite()


class Ideal:
    """A polynomial ideal with cached reduced Groebner bases per order."""

    def __init__(self, vars: Iterable[str], generators: Iterable[Polynomial]):
        self.vars = tuple(vars)
        gens = []
        for g in generators:
            if g.vars != self.vars:
                raise ValueError(f"generator ring {g.vars} does not match {self.vars}")
            if not g.is_zero():
                gens.append(g)
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._cache: dict[tuple, list[Polynomial]] = {}
        self._lock = threading.Lock()

    def groebner_basis(self, order: MonomialOrder = GREVLEX) -> list[Polynomial]:
        token = order.cache_token()
        basis = self._cache.get(token)
        if basis is None:
            basis = buchberger(self.generators, order)
            with self._lock:
                self._cache.setdefault(token, basis)
            basis = self._cache[token]
        return list(basis)

    def normal_form(self, p: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
        basis = self.groebner_basis(order)
        if not basis:
            return p
        lms = [_leading(g, order) for g in basis]
        return _reduce_full(p, basis, lms, order)

    def contains(self, p: Polynomial) -> bool:
        if p.is_zero():
            return True
        return self.normal_form(p).is_zero()

    def is_unit_ideal(self) -> bool:
        basis = self.groebner_basis()
        return len(basis) == 1 and basis[0].is_constant()

    def is_zero_ideal(self) -> bool:
        return not self.groebner_basis()

    def __add__(self, other: "Ideal") -> "Ideal":
        if isinstance(other, Ideal):
            if other.vars != self.vars:
                raise ValueError("ideal sum across different rings")
            return Ideal(self.vars, self.generators + other.generators)
        return NotImplemented

    def with_extra(self, *polys: Polynomial) -> "Ideal":
        return Ideal(self.vars, self.generators + tuple(polys))

    def extend_ring(self, new_vars: Sequence[str]) -> "Ideal":
        return Ideal(new_vars, [g.extend(new_vars) for g in self.generators])

    def equals(self, other: "Ideal") -> bool:
        if self.vars != other.vars:
            return False
        return self.groebner_basis(GREVLEX) == other.groebner_basis(GREVLEX)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        return hash((self.vars, tuple(self.groebner_basis(GREVLEX))))

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"Ideal({self.vars}, [{gens}])"

    # -- derived operations ------------------------------------------------

    def eliminate(self, drop: Iterable[str]) -> "Ideal":
        """Intersection with the subring omitting the dropped variables."""
        drop = tuple(drop)
        if not drop:
            return Ideal(self.vars, self.generators)
        for v in drop:
            if v not in self.vars:
                raise ValueError(f"{v} is not a ring variable")
        order = elimination_order(self.vars, drop)
        basis = self.groebner_basis(order)
        keep = tuple(v for v in self.vars if v not in drop)
        kept = [g.restrict(keep) for g in basis if all(v not in drop for v in g.variables_used())]
        return Ideal(keep, kept)

    def saturate(self, f: Polynomial) -> "Ideal":
        """Saturation (I : f^infinity) by a single-variable trick."""
        if f.is_zero():
            raise ZeroDivisionError("saturation by zero")
        if f.is_constant():
            return Ideal(self.vars, self.generators)
        aux = _fresh_name("sat", self.vars)
        big_vars = (aux,) + self.vars
        gens = [g.extend(big_vars) for g in self.generators]
        w = Polynomial.variable(big_vars, aux)
        gens.append(Polynomial.one(big_vars) - w * f.extend(big_vars))
        sat = Ideal(big_vars, gens).eliminate((aux,))
        return Ideal(self.vars, [g for g in sat.generators])

    def colon(self, f: Polynomial) -> "Ideal":
        """Ideal quotient (I : f)."""
        if f.is_zero():
            raise ZeroDivisionError("colon by zero")
        if f.is_constant():
            return Ideal(self.vars, self.generators)
        inter = self.intersect(Ideal(self.vars, [f]))
        from .poly import exact_divide

        return Ideal(self.vars, [exact_divide(g, f) for g in inter.generators])

    def intersect(self, other: "Ideal") -> "Ideal":
        if other.vars != self.vars:
            raise ValueError("intersection across different rings")
        aux = _fresh_name("mix", self.vars)
        big_vars = (aux,) + self.vars
        t = Polynomial.variable(big_vars, aux)
        one = Polynomial.one(big_vars)
        gens = [t * g.extend(big_vars) for g in self.generators]
        gens += [(one - t) * g.extend(big_vars) for g in other.generators]
        return Ideal(self.vars, Ideal(big_vars, gens).eliminate((aux,)).generators)

    def leading_monomials(self, order: MonomialOrder = GREVLEX) -> list[Exponents]:
        return [_leading(g, order) for g in self.groebner_basis(order)]

    def quotient_dimension(self):
        """Q-dimension of ring/ideal via the standard-monomial staircase."""
        basis = self.groebner_basis(GREVLEX)
        if not basis:
            return INFINITE if self.vars else 1
        if len(basis) == 1 and basis[0].is_constant():
            return 0
        lms = [_leading(g, GREVLEX) for g in basis]
        n = len(self.vars)
        bounds = [None] * n
        for lm in lms:
            nz = [i for i, e in enumerate(lm) if e]
            if len(nz) == 1:
                i = nz[0]
                if bounds[i] is None or lm[i] < bounds[i]:
                    bounds[i] = lm[i]
        if any(b is None for b in bounds):
            return INFINITE
        count = 0
        # enumerate the box under the pure-power bounds, skip multiples of lms
        def rec(i: int, exps: list[int]):
            nonlocal count
            if i == n:
                e = tuple(exps)
                if not any(_monomial_divides(lm, e) for lm in lms):
                    count += 1
                return
            for x in range(bounds[i]):
                exps[i] = x
                rec(i + 1, exps)
            exps[i] = 0

        rec(0, [0] * n)
        return count

    def dimension(self) -> int:
        """Krull dimension of the quotient, -1 for the unit ideal."""
        basis = self.groebner_basis(GREVLEX)
        if not basis:
            return len(self.vars)
        if len(basis) == 1 and basis[0].is_constant():
            return -1
        lms = [_leading(g, GREVLEX) for g in basis]
        n = len(self.vars)
        best = 0
        # largest variable subset S with no leading monomial supported inside S
        for size in range(n, 0, -1):
            for S in combinations(range(n), size):
                sset = set(S)
                if all(any(e and i not in sset for i, e in enumerate(lm)) for lm in lms):
                    return size
        return best


def _fresh_name(stem: str, vars: Sequence[str]) -> str:
    name = f"{stem}0"
    k = 0
    while name in vars:
        k += 1
        name = f"{stem}{k}"
    return name


def groebner_basis(I: Ideal, order: MonomialOrder = GREVLEX) -> list[Polynomial]:
    return I.groebner_basis(order)


def normal_form(p: Polynomial, I: Ideal, order: MonomialOrder = GREVLEX) -> Polynomial:
    return I.normal_form(p, order)


def eliminate(I: Ideal, drop: Iterable[str]) -> Ideal:
    return I.eliminate(drop)


def saturate(I: Ideal, f: Polynomial) -> Ideal:
    return I.saturate(f)


def contains(I: Ideal, p: Polynomial) -> bool:
    return I.contains(p)


def quotient_dimension(I: Ideal):
    return I.quotient_dimension()
