"""Divisor and cycle calculus on affine space over Q.

A divisor here is principal and carried by its defining rational
function x: the components of its support are the irreducible factors
of x, weighted by the signed multiplicity ord.  On affine space the
coordinate ring is a UFD, so the order of x along a codimension-one
subvariety V(f) is just the net multiplicity of f in x, and the
associated codimension-one cycle is the familiar sum of components.

Two intersection operations are implemented.

* On cycles: a divisor D meets a cycle class [V] in the restriction of
  D to V when V is not inside the support of D, and in zero otherwise.
  For the ambient class this returns the divisor cycle itself; for a
  plane curve it returns the divisor of the defining function of D
  restricted to the curve, a cycle of points.

* On "function carried by a subvariety" data (V, y): the image picks
  up, for every support component W of D, the tame combination
  y^a / x^b restricted to W, where a = ord_W(x) and b = ord_W(y).  The
  combination has order zero along W, so it restricts to a genuine
  nonzero function on W.

The boundary operator sends (V, y) to the divisor of y on V.  The
verification helpers check, exactly and term by term, the three
identities that tie all of this together: the reciprocity sum over all
codimension-one subvarieties vanishes; the intersection operations
commute with the boundary; and the difference D.[E] - E.[D] is the
boundary of the canonical element built from tame restrictions on the
common support components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ScopeError
from .factor import factor, is_irreducible
from .groebner import GREVLEX, LEX, Ideal
from .poly import Polynomial, RationalFunction, divides, exact_divide, grlex_key, try_exact_divide
from .reports import CheckReport
from .zerodim import ClosedPoint, ZeroCycle, div_on_curve


@dataclass(frozen=True)
class Subvariety:
    """An integral closed subvariety presented by its prime ideal.

    kind:  'ambient' (the whole space), 'hypersurface' (one irreducible
    polynomial), 'point' (a shape-certified maximal ideal), or 'prime'
    (a general prime presentation from the deformation machinery).
    Equality and hashing go through the canonical generator tuple.
    """

    vars: tuple[str, ...]
    kind: str
    gens: tuple[Polynomial, ...]
    dim: int
    point: ClosedPoint | None = field(default=None, compare=False)

    @staticmethod
    def ambient(vars: tuple[str, ...]) -> "Subvariety":
        return Subvariety(vars, "ambient", (), len(vars))

    @staticmethod
    def hypersurface(poly: Polynomial) -> "Subvariety":
        p = poly.primitive()
        if p.is_constant():
            raise ValueError("a hypersurface needs a nonconstant polynomial")
        if not is_irreducible(p):
            raise ValueError(f"{p} is not irreducible")
        return Subvariety(p.vars, "hypersurface", (p,), len(p.vars) - 1)

    @staticmethod
    def of_point(point: ClosedPoint) -> "Subvariety":
        return Subvariety(point.vars, "point", point.gens, 0, point)

    @staticmethod
    def of_prime(vars: tuple[str, ...], ideal: Ideal, dim: int) -> "Subvariety":
        canon = tuple(ideal.groebner_basis(LEX))
        return Subvariety(vars, "prime", canon, dim)

    @property
    def codim(self) -> int:
        return len(self.vars) - self.dim

    def defining_poly(self) -> Polynomial:
        if self.kind != "hypersurface":
            raise ValueError("only hypersurfaces carry a single defining polynomial")
        return self.gens[0]

    def __str__(self):
        if self.kind == "ambient":
            return f"A^{len(self.vars)}"
        if self.kind == "point" and self.point is not None and self.point.coords is not None:
            return str(self.point)
        return "V(" + ", ".join(str(g) for g in self.gens) + ")"


class Cycle:
    """Formal integer combination of subvarieties of one dimension."""

    def __init__(self, terms: dict[Subvariety, int] | None = None, grade: int | None = None):
        combined: dict[Subvariety, int] = {}
        for v, m in (terms or {}).items():
            if m:
                combined[v] = combined.get(v, 0) + m
        self.terms = {v: m for v, m in combined.items() if m}
        dims = {v.dim for v in self.terms}
        if len(dims) > 1:
            raise ValueError(f"mixed-dimension cycle: {sorted(dims)}")
        self.grade = (dims.pop() if dims else grade)

    @staticmethod
    def zero(grade: int | None = None) -> "Cycle":
        return Cycle({}, grade)

    def __add__(self, other: "Cycle") -> "Cycle":
        out = dict(self.terms)
        for v, m in other.terms.items():
            out[v] = out.get(v, 0) + m
        return Cycle(out, self.grade if self.terms else other.grade)

    def __neg__(self) -> "Cycle":
        return Cycle({v: -m for v, m in self.terms.items()}, self.grade)

    def __sub__(self, other: "Cycle") -> "Cycle":
        return self + (-other)

    def scale(self, k: int) -> "Cycle":
        return Cycle({v: k * m for v, m in self.terms.items()}, self.grade)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Cycle):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list[tuple[Subvariety, int]]:
        return sorted(self.terms.items(), key=lambda t: str(t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for v, m in self.sorted_terms():
            body = f"[{v}]" if abs(m) == 1 else f"{abs(m)}*[{v}]"
            if not parts:
                parts.append(body if m > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if m > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Cycle({str(self)})"


def cycle_from_points(z: ZeroCycle) -> Cycle:
    return Cycle({Subvariety.of_point(p): m for p, m in z.terms.items()}, grade=0)


@dataclass(frozen=True)
class PDivisor:
    """A principal divisor with its defining function and factored support."""

    vars: tuple[str, ...]
    fn: RationalFunction
    components: tuple[tuple[Subvariety, int], ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.vars)

    def support(self) -> tuple[Subvariety, ...]:
        return tuple(v for v, _ in self.components)

    def is_effective(self) -> bool:
        return all(m > 0 for _, m in self.components)

    def __str__(self):
        if not self.components:
            return f"div({self.fn}) = 0"
        body = " ".join(
            ("+ " if m > 0 and i else "") + (f"{m}*[{v}]" if abs(m) != 1 else ("[" + str(v) + "]" if m > 0 else "-[" + str(v) + "]"))
            for i, (v, m) in enumerate(self.components)
        )
        return f"div({self.fn}) = {body}"


class RatEquivElement:
    """Formal sum of (carrier subvariety, nonzero function on it)."""

    def __init__(self, terms: list[tuple[Subvariety, RationalFunction]] | None = None):
        self.terms: list[tuple[Subvariety, RationalFunction]] = list(terms or [])

    def __add__(self, other: "RatEquivElement") -> "RatEquivElement":
        return RatEquivElement(self.terms + other.terms)

    def inverse(self) -> "RatEquivElement":
        return RatEquivElement([(v, fn.inverse()) for v, fn in self.terms])

    def is_empty(self) -> bool:
        return not self.terms

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({v}, {fn})" for v, fn in self.terms)

    def __repr__(self):
        return f"RatEquivElement({str(self)})"


def on_ambient(y: RationalFunction) -> RatEquivElement:
    """The element (A^n, y)."""
    if y.is_zero():
        raise ZeroDivisionError("carried functions must be nonzero")
    return RatEquivElement([(Subvariety.ambient(y.vars), y)])


# ---------------------------------------------------------------------------
# divisors from functions
# ---------------------------------------------------------------------------


def principal_divisor(x: RationalFunction, n: int | None = None) -> PDivisor:
    """The divisor of x on affine space, with factored support.

    Components are the irreducible factors of the numerator (positive
    order) and denominator (negative order).  A nonzero constant yields
    the zero divisor with empty support.
    """
    if x.is_zero():
        raise ZeroDivisionError("the zero function has no divisor")
    if n is not None and n != len(x.vars):
        raise ValueError(f"function lives on A^{len(x.vars)}, not A^{n}")
    comps: list[tuple[Subvariety, int]] = []
    for part, sign in ((x.num, 1), (x.den, -1)):
        if part.is_constant():
            continue
        for q, mult in factor(part).factors:
            if q.is_constant():
                continue
            comps.append((Subvariety(q.vars, "hypersurface", (q.primitive(),), len(q.vars) - 1), sign * mult))
    comps.sort(key=lambda cm: str(cm[0]))
    return PDivisor(x.vars, x, tuple(comps))


def weil_divisor(D: PDivisor) -> Cycle:
    """The codimension-one cycle sum(ord_W * [W]) of the divisor."""
    return Cycle({v: m for v, m in D.components}, grade=len(D.vars) - 1)


def ord_along(x: RationalFunction, W: Subvariety) -> int:
    """Valuation of x along the hypersurface W: net multiplicity of its polynomial."""
    if x.is_zero():
        raise ZeroDivisionError("ord of the zero function")
    f = W.defining_poly()
    total = 0
    for part, sign in ((x.num, 1), (x.den, -1)):
        cur = part
        while True:
            nxt = try_exact_divide(cur, f)
            if nxt is None:
                break
            cur = nxt
            total += sign
    return total


def excess(D: PDivisor, E: PDivisor) -> int:
    """Largest product of orders over common support components; 0 if none."""
    if D.vars != E.vars:
        raise ValueError("divisors on different ambient spaces")
    e_orders = dict(E.components)
    best = 0
    for v, a in D.components:
        b = e_orders.get(v)
        if b is not None:
            best = max(best, a * b)
    return best


# ---------------------------------------------------------------------------
# intersections
# ---------------------------------------------------------------------------


def intersect_cycle(D: PDivisor, Z: Cycle, seed: int = 0) -> Cycle:
    """Cycle-level intersection: restriction on transverse terms, zero on
    terms inside the support.

    Curve terms require a two-variable ambient ring; higher-dimensional
    hypersurface restriction is out of guaranteed scope.
    """
    support = {v for v, _ in D.components}
    out = Cycle.zero()
    for V, m in Z.terms.items():
        if V.vars != D.vars:
            raise ValueError("cycle and divisor live on different spaces")
        if V.kind == "ambient":
            out = out + weil_divisor(D).scale(m)
            continue
        if V in support:
            continue
        if V.kind == "hypersurface":
            if len(D.vars) != 2:
                raise ScopeError("curve restriction is guaranteed on the plane only")
            pts = div_on_curve(V.defining_poly(), D.fn, seed=seed)
            out = out + cycle_from_points(pts).scale(m)
            continue
        if V.kind == "point":
            # a divisor meets a point in the empty cycle
            continue
        raise ScopeError(f"no restriction rule for cycle term of kind {V.kind}")
    return out


def restrict_tame(x: RationalFunction, y: RationalFunction, W: Subvariety) -> RationalFunction:
    """The tame combination y^a / x^b on W, a = ord_W(x), b = ord_W(y).

    Writing x = f^a u and y = f^b v with f the polynomial of W, the
    result is v^a / u^b, which has order zero along W and so restricts
    to a well-defined nonzero function on W.  The representative is
    returned in the ambient ring, to be read modulo f.
    """
    f = W.defining_poly()
    a = ord_along(x, W)
    b = ord_along(y, W)
    frf = RationalFunction(f)
    u = x / frf ** a
    v = y / frf ** b
    return v ** a / u ** b


def intersect_rat_equiv(D: PDivisor, w: RatEquivElement) -> RatEquivElement:
    """Image of (V, y) terms under intersection with D.

    Implemented for ambient carriers: each support component W of D
    picks up the tame restriction of (x, y) along W.  Carriers of
    positive codimension would land on points, where every function is
    a unit; they are rejected rather than silently dropped.
    """
    out: list[tuple[Subvariety, RationalFunction]] = []
    for V, y in w:
        if V.kind != "ambient":
            raise ScopeError("intersection of rational equivalences needs ambient carriers")
        if V.vars != D.vars:
            raise ValueError("carrier and divisor live on different spaces")
        for W, _ in D.components:
            out.append((W, restrict_tame(D.fn, y, W)))
    return RatEquivElement(out)


def boundary(w: RatEquivElement, seed: int = 0) -> Cycle:
    """The divisor-of-the-function boundary, extended linearly.

    Ambient carriers produce codimension-one cycles; plane-curve
    carriers produce point cycles.
    """
    out = Cycle.zero()
    for V, fn in w:
        if fn.is_zero():
            raise ZeroDivisionError("carried functions must be nonzero")
        if V.kind == "ambient":
            out = out + weil_divisor(principal_divisor(fn))
        elif V.kind == "hypersurface":
            if len(V.vars) != 2:
                raise ScopeError("curve boundaries are guaranteed on the plane only")
            out = out + cycle_from_points(div_on_curve(V.defining_poly(), fn, seed=seed))
        else:
            raise ScopeError(f"no boundary rule for carrier of kind {V.kind}")
    return out


def prune(w: RatEquivElement) -> RatEquivElement:
    """Drop terms whose function is a nonzero constant on the carrier.

    Such terms have empty boundary, so boundary(prune(w)) = boundary(w).
    """
    kept: list[tuple[Subvariety, RationalFunction]] = []
    for V, fn in w:
        if _is_constant_on(fn, V):
            continue
        kept.append((V, fn))
    return RatEquivElement(kept)


def _is_constant_on(fn: RationalFunction, V: Subvariety) -> bool:
    if V.kind == "ambient":
        return fn.is_constant()
    if V.kind == "hypersurface":
        I = Ideal(V.vars, [V.defining_poly()])
        n = I.normal_form(fn.num)
        d = I.normal_form(fn.den)
        if n.is_zero() or d.is_zero():
            return False
        # constant on V exactly when the reductions are proportional
        return (n * d.leading_coefficient() - d * n.leading_coefficient()).is_zero()
    return False


def canonical_equivalence(D: PDivisor, E: PDivisor) -> RatEquivElement:
    """The canonical element with boundary D.[E] - E.[D].

    One term per common support component V: the tame restriction of
    (x, y) along V, where x and y define D and E.  Empty when the
    supports share no component.
    """
    if D.vars != E.vars:
        raise ValueError("divisors on different ambient spaces")
    e_comps = {v for v, _ in E.components}
    terms = []
    for V, _ in D.components:
        if V in e_comps:
            terms.append((V, restrict_tame(D.fn, E.fn, V)))
    return RatEquivElement(terms)


# ---------------------------------------------------------------------------
# verification of the exact identities
# ---------------------------------------------------------------------------


def verify_reciprocity(x: RationalFunction, y: RationalFunction, seed: int = 0) -> CheckReport:
    """Sum of boundaries of tame restrictions over every relevant curve.

    Components outside both supports carry unit functions and contribute
    nothing, so the sum runs over the union of the two supports.  The
    result must be the zero cycle; a nonzero total is reported as FAIL.
    """
    if len(x.vars) != 2:
        raise ScopeError("reciprocity checks run on the plane")
    report = CheckReport("verify-reciprocity", "PASS")
    report.add("x", x)
    report.add("y", y)
    Dx = principal_divisor(x)
    Dy = principal_divisor(y)
    seen: set[Subvariety] = set()
    total = Cycle.zero(grade=0)
    for V in Dx.support() + Dy.support():
        if V in seen:
            continue
        seen.add(V)
        a = ord_along(x, V)
        b = ord_along(y, V)
        tame = restrict_tame(x, y, V)
        term = boundary(RatEquivElement([(V, tame)]), seed=seed)
        report.add(f"V = {V}", f"a={a} b={b} tame={tame} boundary={term}")
        total = total + term
    report.add("total", total)
    if not total.is_zero():
        report.verdict = "FAIL"
    return report


def verify_commute(D: PDivisor, w: RatEquivElement, seed: int = 0) -> CheckReport:
    """Boundary of the intersected element against intersection of the boundary."""
    report = CheckReport("verify-commute", "PASS")
    report.add("D", D)
    report.add("w", w)
    lhs = boundary(intersect_rat_equiv(D, w), seed=seed)
    rhs = intersect_cycle(D, boundary(w, seed=seed), seed=seed)
    report.add("boundary(D.w)", lhs)
    report.add("D.boundary(w)", rhs)
    if lhs != rhs:
        report.verdict = "FAIL"
    return report


def verify_difference(D: PDivisor, E: PDivisor, seed: int = 0) -> CheckReport:
    """D.[E] - E.[D] against the boundary of the canonical element."""
    if len(D.vars) != 2:
        raise ScopeError("difference checks run on the plane")
    report = CheckReport("verify-difference", "PASS")
    report.add("D", D)
    report.add("E", E)
    report.add("excess", excess(D, E))
    d_dot_e = intersect_cycle(D, weil_divisor(E), seed=seed)
    e_dot_d = intersect_cycle(E, weil_divisor(D), seed=seed)
    omega = canonical_equivalence(D, E)
    omega_pruned = prune(omega)
    bnd = boundary(omega, seed=seed) if not omega.is_empty() else Cycle.zero(grade=0)
    report.add("D.[E]", d_dot_e)
    report.add("E.[D]", e_dot_d)
    report.add("canonical element", omega)
    report.add("canonical element (pruned)", omega_pruned)
    report.add("boundary", bnd)
    if d_dot_e - e_dot_d != bnd:
        report.verdict = "FAIL"
    return report


# ---------------------------------------------------------------------------
# pullback along coordinate projections
# ---------------------------------------------------------------------------


def pullback_function(x: RationalFunction, extra: tuple[str, ...]) -> RationalFunction:
    """Pull x back along the projection that forgets the extra variables."""
    big = x.vars + tuple(v for v in extra if v not in x.vars)
    return RationalFunction(x.num.extend(big), x.den.extend(big))


def pullback_cycle(Z: Cycle, extra: tuple[str, ...]) -> Cycle:
    """Flat pullback of hypersurface and ambient terms along the projection."""
    out: dict[Subvariety, int] = {}
    for V, m in Z.terms.items():
        big = V.vars + tuple(v for v in extra if v not in V.vars)
        if V.kind == "ambient":
            out[Subvariety.ambient(big)] = m
        elif V.kind == "hypersurface":
            out[Subvariety(big, "hypersurface", (V.defining_poly().extend(big),), len(big) - 1)] = m
        else:
            out[Subvariety(big, "prime", tuple(g.extend(big) for g in V.gens), V.dim + len(big) - len(V.vars))] = m
    return Cycle(out)


def check_pullback_compatibility(x: RationalFunction, extra: tuple[str, ...]) -> CheckReport:
    """Pulling back the divisor cycle equals the divisor of the pullback.

    This is the divisor-level instance of compatibility with smooth
    pullback: both composites applied to the fundamental class.
    """
    report = CheckReport("pullback-compatibility", "PASS")
    report.add("x", x)
    report.add("extra variables", ", ".join(extra))
    lhs = pullback_cycle(weil_divisor(principal_divisor(x)), extra)
    rhs = weil_divisor(principal_divisor(pullback_function(x, extra)))
    report.add("pullback of div(x)", lhs)
    report.add("div of pullback", rhs)
    if lhs != rhs:
        report.verdict = "FAIL"
    return report


def check_pullback_on_axis(x: RationalFunction, axis_var: str, seed: int = 0) -> CheckReport:
    """Deeper compatibility on a coordinate-axis cycle in the plane.

    The projection adds one variable.  Downstairs, D meets the axis
    u = 0 in points described by polynomials in the other coordinate;
    upstairs, the pulled-back divisor meets the pulled-back axis plane
    in the divisor of x restricted to that plane.  Both sides reduce to
    the same multiset of (irreducible polynomial, multiplicity) data in
    the residual coordinate, which is what gets compared.
    """
    if len(x.vars) != 2:
        raise ScopeError("axis checks run on the plane")
    report = CheckReport("pullback-axis-compatibility", "PASS")
    report.add("x", x)
    report.add("axis", f"{axis_var} = 0")
    other = [v for v in x.vars if v != axis_var][0]
    axis_poly = Polynomial.variable(x.vars, axis_var)
    if divides(axis_poly, x.num) or divides(axis_poly, x.den):
        report.add("note", "axis lies in the support; both sides are zero")
        return report
    D = principal_divisor(x)
    downstairs = intersect_cycle(D, Cycle({Subvariety.hypersurface(axis_poly): 1}), seed=seed)
    down_data: dict[tuple, int] = {}
    for V, m in downstairs.terms.items():
        key = tuple(str(g) for g in V.gens)
        down_data[key] = down_data.get(key, 0) + m
    # restriction of x to the axis plane: substitute axis_var = 0
    restricted = RationalFunction(x.num.eval_partial({axis_var: 0}), x.den.eval_partial({axis_var: 0}))
    up_data: dict[tuple, int] = {}
    for part, sign in ((restricted.num, 1), (restricted.den, -1)):
        if part.is_constant():
            continue
        for q, mult in factor(part).factors:
            if q.is_constant():
                continue
            pt = _axis_point_key(q, axis_var, other)
            up_data[pt] = up_data.get(pt, 0) + sign * mult
    up_data = {k: v for k, v in up_data.items() if v}
    report.add("axis points downstairs", str(sorted(down_data.items())))
    report.add("axis points upstairs", str(sorted(up_data.items())))
    if down_data != up_data:
        report.verdict = "FAIL"
    return report


def _axis_point_key(q: Polynomial, axis_var: str, other: str) -> tuple:
    """Canonical key for the point (axis = 0, q(other) = 0)."""
    vars = q.vars
    gens = [Polynomial.variable(vars, axis_var), q.primitive()]
    canon = Ideal(vars, gens).groebner_basis(LEX)
    return tuple(str(g) for g in canon)
