"""Truncated power series on the coordinate chart of a twisted unipotent
batch, with Gauss norms, torus and Lie actions, slope decompositions, the
slope projector, translation, and the no-invariant-functional check.

Coordinates: the positive batch for a Weyl twist w is the ordered list of
roots w*alpha_1 .. w*alpha_N (alpha_r the positive roots in the fixed
height-then-lex order).  A series is a finitely supported coefficient map
on multi-indices I = (i_1..i_N); the base field is Q_p and coefficients
are exact rationals with a p-adic fast path for evaluated characters.
Norms are reported as valuations: the Gauss norm of f is p^(-v) where v
is the minimum coefficient valuation.

The eigenvalue of the monomial z^I under the distinguished torus operator
is lambda_I = sum_r <w alpha_r, mu> i_r, a non-negative integer, zero only
for the constant monomial; its p-adic valuation drives the slope grading,
with v(lambda_0) = infinity by convention so constants survive every cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .groups import ChevalleyGroup, PValue, pv_combine_min
from .padic import INF, PadicScalar, padic_exp, padic_log, vp_fraction, vp_int
from .roots import WeylElement, solve_exact


class SeriesError(ValueError):
    pass


def coeff_val(c, p: int):
    """Valuation of a coefficient: Fraction/int exactly, scalar with cap."""
    if isinstance(c, PadicScalar):
        return c.val()
    return vp_fraction(c, p)


def coeff_is_zero(c) -> bool:
    if isinstance(c, PadicScalar):
        return c.is_exact_zero
    return c == 0


def coeff_eq(a, b) -> bool:
    if isinstance(a, PadicScalar) or isinstance(b, PadicScalar):
        return a == b  # PadicScalar coerces rationals at its precision
    return a == b


class SeriesContext:
    """Chart bookkeeping: group, Weyl twist, adapted cocharacter, weights."""

    def __init__(self, group: str | ChevalleyGroup, w: WeylElement | None = None,
                 p: int = 7, prec: int = 12, block_dim: int = 1):
        self.group = group if isinstance(group, ChevalleyGroup) else \
            ChevalleyGroup(group, p=p, prec=prec)
        self.datum = self.group.datum
        self.ring = self.group.ring
        self.w = w if w is not None else self.datum.identity_weyl()
        if block_dim != 1:
            raise SeriesError("only base-field block dimension 1 is implemented")
        self.block_dim = block_dim
        self.mu, self.scale = self.datum.adapted_cocharacter(self.w)
        self.batch = [self.datum.act_root(self.w, r) for r in self.datum.positive_roots]
        self.weights = [self.datum.pairing(g, self.mu) for g in self.batch]
        self.nvars = len(self.batch)

    def lambda_of(self, index) -> int:
        return sum(w * i for w, i in zip(self.weights, index))

    def slope_of(self, index):
        """v_p(lambda_I); infinity for the constant monomial."""
        return vp_int(self.lambda_of(index), self.ring.p)

    def max_weight(self) -> int:
        return max(self.weights)

    def zero_index(self):
        return (0,) * self.nvars

    def point_from_cocharacter(self, mu_vec, c: PadicScalar):
        """Coordinate values of the torus point mu(c): a_i = c^<eps_i, mu>."""
        cinv = None
        vals = []
        for e in mu_vec:
            if e >= 0:
                vals.append(c ** e)
            else:
                if cinv is None:
                    cinv = c.inv()
                vals.append(cinv ** (-e))
        return tuple(vals)

    def root_value(self, root, point):
        """Value of a root character at a torus point given by chart values."""
        out = self.ring.one()
        invs = {}
        for i, e in enumerate(root):
            if e > 0:
                out = out * point[i] ** e
            elif e < 0:
                if i not in invs:
                    invs[i] = point[i].inv()
                out = out * invs[i] ** (-e)
        return out


@dataclass(frozen=True)
class Character:
    """A rigid character of the pro-p torus, carried by its derivative on
    the chart basis: coeffs[i] is the exact rational dchi(eps_i-direction)."""

    coeffs: tuple

    @classmethod
    def from_rationals(cls, *cs) -> "Character":
        return cls(tuple(Fraction(c) for c in cs))

    def rigidity_margin(self, p: int) -> Fraction:
        """min v_p(c_i) - (1/(p-1) - 1); positive exactly when rigid."""
        bound = Fraction(1, p - 1) - 1
        worst = min((vp_fraction(c, p) for c in self.coeffs), default=INF)
        if worst is INF:
            return Fraction(1)
        return worst - bound

    def is_rigid(self, p: int) -> bool:
        return self.rigidity_margin(p) > 0

    def twisted(self, w: WeylElement) -> "Character":
        return Character(w.act(self.coeffs))

    def derivative_pairing(self, cochar) -> Fraction:
        return sum((c * e for c, e in zip(self.coeffs, cochar)), Fraction(0))

    def evaluate(self, ctx: SeriesContext, point) -> PadicScalar:
        """chi(t) = prod exp(c_i log a_i) on chart values a_i in 1 + pZ_p."""
        if not self.is_rigid(ctx.ring.p):
            raise SeriesError("character is not rigid on the unit ball")
        out = ctx.ring.one()
        for c, a in zip(self.coeffs, point):
            if c == 0:
                continue
            out = out * padic_exp(padic_log(a) * c)
        return out


def character_expand(c, r_max: int, p: int):
    """Taylor coefficients g_r = p^r c^r / r! of t -> t^c along exp(p x),
    as exact rationals, plus whether they tend to zero p-adically."""
    c = Fraction(c)
    coeffs = [Fraction(p) ** r * c ** r / math.factorial(r) for r in range(r_max + 1)]
    converges = vp_fraction(c, p) is INF or vp_fraction(c, p) > Fraction(1, p - 1) - 1
    return coeffs, converges


class TruncatedSeries:
    """Finitely supported coefficient map with an optional total-degree cap."""

    __slots__ = ("ctx", "coeffs", "degree")

    def __init__(self, ctx: SeriesContext, coeffs=None, degree=None):
        self.ctx = ctx
        self.degree = degree
        clean = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != ctx.nvars:
                raise SeriesError(f"index {idx} has wrong arity")
            if degree is not None and sum(idx) > degree:
                raise SeriesError(f"index {idx} exceeds the degree cap {degree}")
            if isinstance(c, int):
                c = Fraction(c)
            if not coeff_is_zero(c):
                clean[idx] = c
        self.coeffs = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def constant(cls, ctx, c, degree=None):
        return cls(ctx, {ctx.zero_index(): c}, degree)

    @classmethod
    def monomial(cls, ctx, index, c=1, degree=None):
        return cls(ctx, {tuple(index): c}, degree)

    def with_degree(self, degree):
        return TruncatedSeries(self.ctx, self.coeffs, degree)

    # -- structure ---------------------------------------------------------

    def support(self):
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    # alias used by the sparse matrix helpers
    @property
    def is_exact_zero(self) -> bool:
        return not self.coeffs

    def max_total_degree(self) -> int:
        return max((sum(i) for i in self.coeffs), default=0)

    def gauss_valuation(self) -> PValue:
        """Valuation form of the Gauss norm: min over coefficient valuations."""
        finite, caps = [], []
        p = self.ctx.ring.p
        for c in self.coeffs.values():
            v = coeff_val(c, p)
            if v is INF:
                continue
            if v is None:
                caps.append(c.val_cap())
            else:
                finite.append(v)
        return pv_combine_min(finite, caps)

    # -- ring operations ------------------------------------------------------

    def _merged_degree(self, other):
        if self.degree is None or other.degree is None:
            return None
        return min(self.degree, other.degree)

    def __add__(self, other):
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            if idx in out:
                s = out[idx] + c
                if coeff_is_zero(s):
                    del out[idx]
                else:
                    out[idx] = s
            else:
                out[idx] = c
        return TruncatedSeries(self.ctx, out, self._merged_degree(other))

    def __neg__(self):
        return TruncatedSeries(self.ctx, {i: -c for i, c in self.coeffs.items()},
                               self.degree)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, int):
            c = Fraction(c)
        if coeff_is_zero(c):
            return TruncatedSeries(self.ctx, {}, self.degree)
        return TruncatedSeries(self.ctx, {i: v * c for i, v in self.coeffs.items()},
                               self.degree)

    def __mul__(self, other):
        """Polynomial product; the output carries no truncation cap."""
        out = {}
        for ia, ca in self.coeffs.items():
            for ib, cb in other.coeffs.items():
                idx = tuple(a + b for a, b in zip(ia, ib))
                prod = ca * cb
                if idx in out:
                    s = out[idx] + prod
                    if coeff_is_zero(s):
                        del out[idx]
                    else:
                        out[idx] = s
                else:
                    out[idx] = prod
        return TruncatedSeries(self.ctx, out, None)

    def evaluate(self, point):
        """Value at a concrete coordinate tuple (polynomial use)."""
        total = None
        for idx, c in self.coeffs.items():
            term = c
            for val, e in zip(point, idx):
                for _ in range(e):
                    term = term * val
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        zero = Fraction(0)
        return all(coeff_eq(self.coeffs.get(k, zero), other.coeffs.get(k, zero))
                   for k in keys)

    def __repr__(self):
        terms = ", ".join(f"{idx}: {c}" for idx, c in sorted(self.coeffs.items())[:6])
        extra = "..." if len(self.coeffs) > 6 else ""
        return f"TruncatedSeries({{{terms}{extra}}}, degree={self.degree})"


# -- torus and Lie actions ---------------------------------------------------


def torus_action(f: TruncatedSeries, point, chi: Character | None = None) -> TruncatedSeries:
    """(t f)(z) = (w chi)(t) * f(alpha_1(t^-1) z_1, ..., alpha_N(t^-1) z_N)
    for the batch roots alpha_r; diagonal on monomials, degree preserved."""
    ctx = f.ctx
    for a in point:
        d = a - 1
        if not (d.is_exact_zero or d.pival() is None or d.pival() >= 1):
            raise SeriesError("torus point is not pro-p in the chart")
    if chi is not None:
        chi_w = chi.twisted(ctx.w)
        if not chi_w.is_rigid(ctx.ring.p):
            raise SeriesError("character is not rigid on the unit ball")
        chi_factor = chi_w.evaluate(ctx, point)
    else:
        chi_factor = ctx.ring.one()
    inv_point = tuple(a.inv() for a in point)
    base = [ctx.root_value(g, inv_point) for g in ctx.batch]
    powers = [{0: ctx.ring.one()} for _ in range(ctx.nvars)]

    def power(r, k):
        cache = powers[r]
        if k not in cache:
            cache[k] = power(r, k - 1) * base[r]
        return cache[k]

    out = {}
    for idx, c in f.coeffs.items():
        mult = chi_factor
        for r, e in enumerate(idx):
            if e:
                mult = mult * power(r, e)
        out[idx] = mult * c
    return TruncatedSeries(ctx, out, f.degree)


def lie_action(f: TruncatedSeries, dchi_value, droot_values) -> TruncatedSeries:
    """Derivative of the torus action along a tangent vector H, given the
    pairing data dchi(H) and the list d(alpha_r)(H): the monomial z^I is an
    eigenvector with eigenvalue dchi(H) - sum_r d(alpha_r)(H) i_r."""
    ctx = f.ctx
    out = {}
    for idx, c in f.coeffs.items():
        eig = dchi_value - sum(d * i for d, i in zip(droot_values, idx))
        if eig:
            out[idx] = c * eig
    return TruncatedSeries(ctx, out, f.degree)


def adapted_lie_data(ctx: SeriesContext, chi: Character | None = None):
    """Pairing data of H_mu for the adapted cocharacter: d(alpha_r)(H_mu)
    equals the batch weight, and d(w chi)(H_mu) = <w.dchi, mu>."""
    droots = list(ctx.weights)
    if chi is None:
        return Fraction(0), droots
    return chi.twisted(ctx.w).derivative_pairing(ctx.mu), droots


# -- slopes -------------------------------------------------------------------


def slope_split(f: TruncatedSeries, s: int):
    """(f^{<s}, f^{>=s}) by the valuation of the monomial eigenvalue."""
    if s < 0:
        raise SeriesError("slope must be a non-negative integer")
    below, atleast = {}, {}
    for idx, c in f.coeffs.items():
        sl = f.ctx.slope_of(idx)
        (atleast if sl is INF or sl >= s else below)[idx] = c
    return (TruncatedSeries(f.ctx, below, f.degree),
            TruncatedSeries(f.ctx, atleast, f.degree))


def slope_exact(f: TruncatedSeries, s: int) -> TruncatedSeries:
    out = {idx: c for idx, c in f.coeffs.items() if f.ctx.slope_of(idx) == s}
    return TruncatedSeries(f.ctx, out, f.degree)


def hida_projector(f: TruncatedSeries, s: int, iterations: int) -> TruncatedSeries:
    """Apply the slope-s idempotent approximant: the n!-th iterate of the
    operator multiplying z^I by (lambda_I / p^s)^(p-1).  Converges to the
    exact slope-s projection as n grows."""
    ctx = f.ctx
    p = ctx.ring.p
    ps = p ** s
    for idx in f.coeffs:
        sl = ctx.slope_of(idx)
        if not (sl is INF or sl >= s):
            raise SeriesError("input is not supported on slopes >= s")
    exponent = (p - 1) * math.factorial(iterations)
    cache = {}
    out = {}
    for idx, c in f.coeffs.items():
        lam = ctx.lambda_of(idx)
        if lam == 0:
            continue  # the constant monomial is annihilated
        if lam not in cache:
            cache[lam] = Fraction(lam, ps) ** exponent
        prod = c * cache[lam]
        if not coeff_is_zero(prod):
            out[idx] = prod
    return TruncatedSeries(ctx, out, f.degree)


# -- translation --------------------------------------------------------------


def coordinate_change_polys(ctx: SeriesContext, shift_coords):
    """Polynomials F_r with coords(u(z) * u0) = (F_1(z), ..., F_N(z)) where
    u0 has chart coordinates shift_coords.  Computed by symbolic untwisted
    elimination inside the unipotent batch group; exact."""
    group = ctx.group
    n = group.n
    p = ctx.ring.p

    def const(c):
        return TruncatedSeries.constant(ctx, Fraction(c))

    one, zero = const(1), const(0)
    rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
    # u(z): coordinates scale by p on the upper (negative) batch roots
    for r, root in enumerate(ctx.batch):
        scale = Fraction(group.filtration_scale(root))
        zpoly = TruncatedSeries.monomial(ctx, tuple(int(k == r) for k in range(ctx.nvars)),
                                         scale)
        group._rmul_root_inplace(rows, root, zpoly)
    # times the constant element u0
    for r, root in enumerate(ctx.batch):
        scale = Fraction(group.filtration_scale(root))
        c = shift_coords[r]
        c = Fraction(c) if isinstance(c, int) else c
        group._rmul_root_inplace(rows, root, const(scale * c))
    # symbolic strip in the fixed batch order
    out = []
    for root in ctx.batch:
        dirs = group.dirs[root]
        i0, j0, s0 = dirs[0]
        xpoly = rows[i0][j0] if s0 == 1 else -rows[i0][j0]
        for (i, j, s) in dirs[1:]:
            expect = xpoly if s == 1 else -xpoly
            if not rows[i][j] == expect:
                raise SeriesError("internal: paired symbolic entries disagree")
        scale = group.filtration_scale(root)
        if scale != 1:
            divided = {}
            for idx, c in xpoly.coeffs.items():
                q = c / scale
                if vp_fraction(q, p) is not INF and vp_fraction(q, p) < 0:
                    raise SeriesError("internal: symbolic coordinate not integral")
                divided[idx] = q
            coord = TruncatedSeries(ctx, divided)
        else:
            coord = xpoly
        out.append(coord)
        group._lmul_root_inplace(rows, root, -xpoly)
    for i in range(n):
        for j in range(n):
            target = one if i == j else zero
            if not rows[i][j] == target:
                raise SeriesError("internal: symbolic strip left a remainder")
    return out


def translate_action(f: TruncatedSeries, shift_coords) -> TruncatedSeries:
    """(u0 f)(z) = f(coords(u(z) u0)): substitution of the polynomial
    coordinate change; untruncated output, Gauss norm preserved."""
    ctx = f.ctx
    polys = coordinate_change_polys(ctx, shift_coords)
    pow_cache = [{0: TruncatedSeries.constant(ctx, Fraction(1))} for _ in polys]

    def poly_pow(r, k):
        cache = pow_cache[r]
        if k not in cache:
            cache[k] = poly_pow(r, k - 1) * polys[r]
        return cache[k]

    total = TruncatedSeries(ctx, {})
    for idx, c in f.coeffs.items():
        term = TruncatedSeries.constant(ctx, c)
        for r, e in enumerate(idx):
            if e:
                term = term * poly_pow(r, e)
        total = total + term
    return total


def batch_coordinate_product(ctx: SeriesContext, coords_a, coords_b):
    """Chart coordinates of u(a) * u(b) inside the batch group."""
    polys = coordinate_change_polys(ctx, coords_b)
    point = [Fraction(c) if isinstance(c, int) else c for c in coords_a]
    return [poly.evaluate(point) for poly in polys]


# -- convergence reports -------------------------------------------------------


def constants_limit_check(f: TruncatedSeries, s_max: int | None = None):
    """Truncated form of the constants-in-the-closure property: the tails
    f^{>=s} converge to the constant coefficient, exactly once
    p^s exceeds (total degree) * (largest batch weight)."""
    ctx = f.ctx
    c0 = f.coeffs.get(ctx.zero_index())
    if c0 is None:
        raise SeriesError("the check needs a nonzero constant coefficient")
    p = ctx.ring.p
    dmax = f.degree if f.degree is not None else f.max_total_degree()
    bound = dmax * ctx.max_weight()
    s_star = 0
    while p ** s_star <= bound:
        s_star += 1
    s_top = s_max if s_max is not None else s_star + 2
    const = TruncatedSeries.constant(ctx, c0, f.degree)
    rows = []
    prev = None
    monotone = True
    exact_from = None
    for s in range(s_top + 1):
        _, tail = slope_split(f, s)
        diff_val = (tail - const).gauss_valuation()
        rows.append({"s": s, "distance_valuation": diff_val.as_json()})
        if prev is not None and prev.kind == "finite" and diff_val.kind == "finite":
            if diff_val.value < prev.value:
                monotone = False
        prev = diff_val
        if tail == const and exact_from is None:
            exact_from = s
    ok = monotone and exact_from is not None and exact_from <= s_star
    return {
        "schema": "iwahori.constants-limit/1",
        "threshold": s_star,
        "exact_from": exact_from,
        "monotone": monotone,
        "rows": rows,
        "ok": ok,
    }


def haar_obstruction(max_degree: int):
    """Exact rational proof that no translation-invariant functional exists
    at finite level: ell(T f_k) = ell(f_k) for k <= D+1 forces
    ell(f_0) = ... = ell(f_D) = 0 via the binomial recurrence."""
    d = max_degree
    rows = []
    rhs = []
    for k in range(1, d + 2):
        row = [Fraction(math.comb(k, i)) if i < k else Fraction(0)
               for i in range(d + 1)]
        rows.append(row)
        rhs.append(Fraction(0))
    solution = solve_exact(rows, rhs)
    all_zero = all(x == 0 for x in solution)
    return {
        "schema": "iwahori.haar-obstruction/1",
        "degree": d,
        "equations": d + 1,
        "solution": [str(x) for x in solution],
        "unique": True,  # solve_exact raises on singular systems
        "zero_functional_only": all_zero,
        "ok": all_zero,
    }
