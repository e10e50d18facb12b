"""Matrix models of SL2, SL3 and Sp4 over the p-adic scalar ring.

Realization conventions
-----------------------
The pro-p Iwahori subgroup I consists of matrices over Z_p that are
congruent to a lower-unipotent matrix mod p, and the positive roots are
realized by lower-triangular root subgroups.  To keep the standard
relation t * u_r(x) * t^(-1) = u_r(r(t) x) with this choice, torus
cocharacters are realized with negated exponents: mu = (x, y) acts on Sp4
as diag(c^-x, c^-y, c^y, c^x).  Equivalently, the model here is the
textbook upper-triangular one composed with the transpose-inverse
automorphism.  The dictionary for Sp4, with e1, e2 the epsilon-labels of
the root datum (so a = e1 - e2, b = 2*e2):

    root          matrix direction        entries
    a             E21 - E43 (lower)       (2,1), -(4,3)
    b             E32 (lower)             (3,2)
    a + b         E31 + E42 (lower)       (3,1), (4,2)
    2a + b        E41 (lower)             (4,1)

and negative roots are the transposed directions with the same signs.
The antidiagonal Gram matrix has rows (0,0,0,1), (0,0,1,0), (0,-1,0,0),
(-1,0,0,0).

Factorization algorithm
-----------------------
For a Weyl twist w, the adapted cocharacter gives each matrix position a
distinct integer weight.  Sorting the basis by descending weight turns
the two unipotent batches into strict triangles, so an element of I
factors by exact LDU elimination with unit pivots (guaranteed for
elements of I; a non-unit pivot is an internal error).  Each triangular
factor is then peeled into root-group parameters in the fixed batch
order; reading parameters off matrix entries is exact because the batch
order is height-monotone, and any product of two or more batch roots has
strictly larger weight than a single one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .padic import INF, PadicError, PadicScalar, PrecisionError, ScalarRing, padic_exp, padic_log
from .roots import RootDatum, WeylElement, get_root_datum


class GateError(ValueError):
    """The parameter gate p - 1 > e*h is violated."""


class MembershipError(ValueError):
    """The element does not belong to the required subgroup."""


@dataclass(frozen=True)
class PValue:
    """An exact p-valuation value: a rational, a cap marker, or infinity."""

    kind: str  # "finite" | "at_least" | "infinite"
    value: Fraction | None = None

    @classmethod
    def finite(cls, q) -> "PValue":
        return cls("finite", Fraction(q))

    @classmethod
    def at_least(cls, q) -> "PValue":
        return cls("at_least", Fraction(q))

    @classmethod
    def infinite(cls) -> "PValue":
        return cls("infinite")

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __repr__(self):
        if self.kind == "finite":
            return f"PValue({self.value})"
        if self.kind == "at_least":
            return f"PValue(>= {self.value})"
        return "PValue(inf)"

    def as_json(self):
        if self.kind == "finite":
            return str(self.value)
        if self.kind == "at_least":
            return f">= {self.value}"
        return "inf"


def pv_combine_min(finite_vals, cap_bounds):
    """Minimum over exact values and '>= bound' markers; None entries in
    finite_vals are not allowed, INF values should be dropped by callers."""
    if finite_vals:
        lo = min(finite_vals)
        if not cap_bounds or lo <= min(cap_bounds):
            return PValue.finite(lo)
    if cap_bounds:
        return PValue.at_least(min(cap_bounds))
    return PValue.infinite()


# -- realization tables -------------------------------------------------

_SP4_GRAM = ((0, 0, 0, 1), (0, 0, 1, 0), (0, -1, 0, 0), (-1, 0, 0, 0))


def _sl_dirs(n):
    dirs = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                root = tuple(int(k == i) - int(k == j) for k in range(n))
                dirs[root] = ((j, i, 1),)
    return dirs


_SP4_DIRS = {
    (1, -1): ((1, 0, 1), (3, 2, -1)),
    (-1, 1): ((0, 1, 1), (2, 3, -1)),
    (0, 2): ((2, 1, 1),),
    (0, -2): ((1, 2, 1),),
    (1, 1): ((2, 0, 1), (3, 1, 1)),
    (-1, -1): ((0, 2, 1), (1, 3, 1)),
    (2, 0): ((3, 0, 1),),
    (-2, 0): ((0, 3, 1),),
}

# products of diagonal entries recovering torus coordinates on the
# cocharacter basis, as lists of (diagonal index, exponent)
_TORUS_RECIPES = {
    "sl2": [[(1, 1)]],
    "sl3": [[(0, -1)], [(2, 1)]],
    "sp4": [[(3, 1)], [(2, 1), (3, 1)]],
}

_MATRIX_SIZE = {"sl2": 2, "sl3": 3, "sp4": 4}


class ChevalleyGroup:
    """One of the supported matrix groups over a fixed scalar ring."""

    def __init__(self, name: str, p: int | None = None, prec: int = 12,
                 ring: ScalarRing | None = None):
        self.datum: RootDatum = get_root_datum(name)
        self.name = self.datum.name
        if ring is None:
            if p is None:
                raise ValueError("give a prime p or a scalar ring")
            ring = ScalarRing(p, 1, prec)
        self.ring = ring
        self.n = _MATRIX_SIZE[self.name]
        if self.name == "sp4":
            self.dirs = _SP4_DIRS
        else:
            self.dirs = _sl_dirs(self.n)
        self.torus_recipe = _TORUS_RECIPES[self.name]
        self._basis_cache = {}

    # -- gates ---------------------------------------------------------

    @property
    def coxeter_number(self) -> int:
        return self.datum.coxeter_number()

    def check_gate(self):
        h = self.coxeter_number
        if self.ring.p - 1 <= h:
            raise GateError(
                f"p-1 = {self.ring.p - 1} <= eh = {h} for {self.name}; "
                "the p-valuation is not defined here")

    # -- element constructors -------------------------------------------

    def identity(self) -> "GroupElement":
        one, zero = self.ring.one(), self.ring.zero()
        mat = tuple(tuple(one if i == j else zero for j in range(self.n))
                    for i in range(self.n))
        return GroupElement(self, mat)

    def element(self, rows, check: bool = True) -> "GroupElement":
        mat = tuple(tuple(self.ring.coerce(x) for x in row) for row in rows)
        g = GroupElement(self, mat)
        if check and not g.satisfies_group_relation():
            raise MembershipError(f"matrix does not satisfy the {self.name} relation")
        return g

    def root_element(self, root, x) -> "GroupElement":
        """One-parameter unipotent u_root(x)."""
        root = tuple(root)
        if root not in self.dirs:
            raise ValueError(f"{root} is not a root of {self.name}")
        x = self.ring.coerce(x)
        rows = [[self.ring.one() if i == j else self.ring.zero() for j in range(self.n)]
                for i in range(self.n)]
        for (i, j, s) in self.dirs[root]:
            rows[i][j] = x if s == 1 else -x
        return GroupElement(self, tuple(tuple(r) for r in rows))

    def exponents(self, mu) -> tuple:
        """Diagonal exponent pattern of the cocharacter mu in this model."""
        if self.name == "sp4":
            x, y = mu
            return (-x, -y, y, x)
        return tuple(-c for c in mu)

    def torus_element(self, mu, c) -> "GroupElement":
        """The point mu(c) of the torus, for a unit c."""
        c = self.ring.coerce(c)
        exps = self.exponents(mu)
        cinv = None
        diag = []
        for e in exps:
            if e >= 0:
                diag.append(c ** e)
            else:
                if cinv is None:
                    cinv = c.inv()
                diag.append(cinv ** (-e))
        zero = self.ring.zero()
        mat = tuple(tuple(diag[i] if i == j else zero for j in range(self.n))
                    for i in range(self.n))
        return GroupElement(self, mat)

    def torus_from_chart(self, *values) -> "GroupElement":
        """Diagonal torus element in the natural chart: diag(a, a^-1) for
        SL2, diag(a1..an) with product 1 for SL_n, diag(a, b, b^-1, a^-1)
        for Sp4."""
        vals = [self.ring.coerce(v) for v in values]
        if self.name == "sp4":
            a, b = vals
            diag = [a, b, b.inv(), a.inv()]
        elif self.name == "sl2":
            (a,) = vals
            diag = [a, a.inv()]
        else:
            diag = vals
            prod = diag[0]
            for d in diag[1:]:
                prod = prod * d
            if not prod == 1:
                raise MembershipError("SL torus chart needs product 1")
        zero = self.ring.zero()
        mat = tuple(tuple(diag[i] if i == j else zero for j in range(self.n))
                    for i in range(self.n))
        return GroupElement(self, mat)

    def extension_group(self, ring: ScalarRing) -> "ChevalleyGroup":
        return ChevalleyGroup(self.name, ring=ring)

    # sparse one-parameter multiplications: a root element touches at most
    # two entries, so row and column updates beat full matrix products
    def _lmul_root_inplace(self, rows, root, x):
        if x.is_exact_zero:
            return
        n = self.n
        for (i, j, s) in self.dirs[tuple(root)]:
            f = x if s == 1 else -x
            src_row = rows[j]
            dst = rows[i]
            for k in range(n):
                dst[k] = dst[k] + f * src_row[k]

    def _rmul_root_inplace(self, rows, root, x):
        if x.is_exact_zero:
            return
        n = self.n
        for (i, j, s) in self.dirs[tuple(root)]:
            f = x if s == 1 else -x
            for k in range(n):
                rows[k][j] = rows[k][j] + rows[k][i] * f

    def _rmul_diag_inplace(self, rows, diag):
        n = self.n
        for j in range(n):
            d = diag[j]
            for i in range(n):
                rows[i][j] = rows[i][j] * d

    def torus_diagonal(self, torus_coords):
        """Diagonal scalars of prod_i mu_i(s_i) over the cocharacter basis."""
        diag = [self.ring.one() for _ in range(self.n)]
        for mu_i, s in zip(self.datum.cochar_basis, torus_coords):
            s = self.ring.coerce(s)
            exps = self.exponents(mu_i)
            sinv = None
            for k, e in enumerate(exps):
                if e > 0:
                    diag[k] = diag[k] * (s if e == 1 else s ** e)
                elif e < 0:
                    if sinv is None:
                        sinv = s.inv()
                    diag[k] = diag[k] * (sinv if e == -1 else sinv ** (-e))
        return diag

    # -- batches and bases ------------------------------------------------

    def positive_batch_order(self, tie_break: str = "lex"):
        roots = list(self.datum.positive_roots)  # already height-then-lex
        if tie_break == "revlex":
            roots.sort(key=lambda r: (self.datum.height(r), tuple(-c for c in r)))
        elif tie_break != "lex":
            raise ValueError("tie_break must be 'lex' or 'revlex'")
        return roots

    def batches(self, w: WeylElement, tie_break: str = "lex"):
        """The wPhi- and wPhi+ batch root lists in the fixed order."""
        pos = self.positive_batch_order(tie_break)
        neg_batch = [self.datum.act_root(w, tuple(-c for c in r)) for r in pos]
        pos_batch = [self.datum.act_root(w, r) for r in pos]
        return neg_batch, pos_batch

    def filtration_scale(self, root) -> int:
        """Power of p scaling the integral points of I inter U_root:
        1 for positive (lower) roots, p for negative (upper) ones."""
        return self.ring.p if self.datum.height(root) < 0 else 1

    def root_omega(self, root, x_val) -> Fraction:
        """omega(u_root(x)) = val(x) + ht(root)/(e*h)."""
        return x_val + Fraction(self.datum.height(root), self.coxeter_number)

    # -- memberships -------------------------------------------------------

    def in_iwahori(self, g: "GroupElement") -> bool:
        if g.group is not self:
            raise ValueError("element of a different group")
        if not g.satisfies_group_relation():
            return False
        for i in range(self.n):
            for j in range(self.n):
                e = g.mat[i][j]
                if i == j:
                    d = e - 1
                    if not (d.is_exact_zero or d.pival() is None or d.pival() >= 1):
                        return False
                elif i < j:
                    w = e.pival()
                    if not (w is INF or w is None or w >= 1):
                        return False
        return True

    def in_full_iwahori(self, g: "GroupElement") -> bool:
        """The full Iwahori: integral, upper entries divisible by p, unit
        diagonal (not necessarily pro-p)."""
        if not g.satisfies_group_relation():
            return False
        for i in range(self.n):
            for j in range(self.n):
                e = g.mat[i][j]
                if i == j:
                    if not e.is_unit():
                        return False
                elif i < j:
                    w = e.pival()
                    if not (w is INF or w is None or w >= 1):
                        return False
        return True

    def in_torus1(self, g: "GroupElement") -> bool:
        for i in range(self.n):
            for j in range(self.n):
                e = g.mat[i][j]
                if i != j:
                    if not (e.is_exact_zero or e.pival() is None):
                        return False
                else:
                    d = e - 1
                    if not (d.is_exact_zero or d.pival() is None or d.pival() >= 1):
                        return False
        return True

    # -- factorization ------------------------------------------------------

    def iwahori_factorize(self, g: "GroupElement", w: WeylElement | None = None,
                          tie_break: str = "lex") -> "Factorization":
        self.check_gate()
        if w is None:
            w = self.datum.identity_weyl()
        if not self.in_iwahori(g):
            raise MembershipError("factorization needs an element of the pro-p Iwahori")
        mu, _a = self.datum.adapted_cocharacter(w)
        exps = self.exponents(mu)
        if len(set(exps)) != self.n:
            raise PadicError("internal: adapted cocharacter weights are not distinct")
        order = sorted(range(self.n), key=lambda i: -exps[i])
        gs = [[g.mat[order[i]][order[j]] for j in range(self.n)] for i in range(self.n)]
        lmat, diag_sorted, umat = _ldu(gs, self.n, self.ring)
        # back to the original basis
        inv_order = [0] * self.n
        for k, idx in enumerate(order):
            inv_order[idx] = k
        n1 = [[lmat[inv_order[i]][inv_order[j]] for j in range(self.n)] for i in range(self.n)]
        n2 = [[umat[inv_order[i]][inv_order[j]] for j in range(self.n)] for i in range(self.n)]
        diag = [diag_sorted[inv_order[i]] for i in range(self.n)]

        neg_batch, pos_batch = self.batches(w, tie_break)
        neg = self._strip_unipotent(n1, neg_batch, mu)
        pos = self._strip_unipotent(n2, pos_batch, mu)
        torus_coords = self._torus_coords_from_diag(diag)
        for i in range(self.n):
            d = diag[i] - 1
            if not (d.is_exact_zero or d.pival() is None or d.pival() >= 1):
                raise PadicError("internal: torus part is not pro-p")
        for root, x in neg + pos:
            if self.datum.height(root) < 0:
                wv = x.pival()
                if not (wv is INF or wv is None or wv >= 1):
                    raise PadicError("internal: upper root parameter not divisible by p")
        return Factorization(self, w, neg, torus_coords, diag, pos)

    def _strip_unipotent(self, mat, batch_roots, mu):
        last = None
        for r in batch_roots:
            wgt = abs(self.datum.pairing(r, mu))
            if last is not None and wgt < last:
                raise PadicError("internal: batch order is not weight-monotone")
            last = wgt
        params = []
        cur = [list(row) for row in mat]
        for root in batch_roots:
            dirs = self.dirs[root]
            i0, j0, s0 = dirs[0]
            x = cur[i0][j0] if s0 == 1 else -cur[i0][j0]
            for (i, j, s) in dirs[1:]:
                expect = x if s == 1 else -x
                if not cur[i][j] == expect:
                    raise PadicError(
                        f"internal: paired entries for root {root} disagree")
            params.append((root, x))
            self._lmul_root_inplace(cur, root, -x)
        for i in range(self.n):
            for j in range(self.n):
                target = 1 if i == j else 0
                if not cur[i][j] == target:
                    raise PadicError("internal: unipotent strip left a remainder")
        return params

    def _torus_coords_from_diag(self, diag):
        coords = []
        for recipe in self.torus_recipe:
            s = self.ring.one()
            for idx, e in recipe:
                s = s * (diag[idx] if e == 1 else diag[idx].inv() ** (-e))
            coords.append(s)
        # consistency: the recipe must reconstruct the whole diagonal
        rebuilt = self.identity()
        for mu_i, s in zip(self.datum.cochar_basis, coords):
            rebuilt = rebuilt * self.torus_element(mu_i, s)
        for i in range(self.n):
            if not rebuilt.mat[i][i] == diag[i]:
                raise PadicError("internal: torus diagonal is not in the cocharacter lattice")
        return coords

    def from_parameters(self, neg, torus_coords, pos, check: bool = False) -> "GroupElement":
        """Multiply out (neg batch) * (torus) * (pos batch) in the given order."""
        rows = [[self.ring.one() if i == j else self.ring.zero()
                 for j in range(self.n)] for i in range(self.n)]
        for root, x in neg:
            self._rmul_root_inplace(rows, root, self.ring.coerce(x))
        self._rmul_diag_inplace(rows, self.torus_diagonal(torus_coords))
        for root, x in pos:
            self._rmul_root_inplace(rows, root, self.ring.coerce(x))
        g = GroupElement(self, tuple(tuple(r) for r in rows))
        if check and not self.in_iwahori(g):
            raise MembershipError("parameters do not land in the pro-p Iwahori")
        return g

    # -- ordered basis and coordinates ---------------------------------------

    def ordered_basis(self, w: WeylElement | None = None) -> "OrderedBasis":
        self.check_gate()
        if w is None:
            w = self.datum.identity_weyl()
        cached = self._basis_cache.get(w.matrix)
        if cached is not None:
            return cached
        h = self.coxeter_number
        entries = []
        neg_batch, pos_batch = self.batches(w)
        for root in neg_batch:
            scale = self.filtration_scale(root)
            gen = self.root_element(root, scale)
            omega = Fraction(0 if scale == 1 else 1) + Fraction(self.datum.height(root), h)
            entries.append(BasisVector(("root", root), gen, omega))
        ep = padic_exp(self.ring.from_int(self.ring.p))
        for mu_i in self.datum.cochar_basis:
            entries.append(BasisVector(("cocharacter", tuple(mu_i)),
                                       self.torus_element(mu_i, ep), Fraction(1)))
        for root in pos_batch:
            scale = self.filtration_scale(root)
            gen = self.root_element(root, scale)
            omega = Fraction(0 if scale == 1 else 1) + Fraction(self.datum.height(root), h)
            entries.append(BasisVector(("root", root), gen, omega))
        basis = OrderedBasis(self, w, entries)
        self._basis_cache[w.matrix] = basis
        return basis

    def coordinates(self, g: "GroupElement", w: WeylElement | None = None):
        """Coordinates of g in the ordered basis for w; exact Z_p scalars."""
        fact = self.iwahori_factorize(g, w)
        coords = []
        for root, x in fact.negative:
            coords.append(x.shift(-1) if self.datum.height(root) < 0 else x)
        for s in fact.torus_coordinates:
            coords.append(padic_log(s).shift(-1))
        for root, x in fact.positive:
            coords.append(x.shift(-1) if self.datum.height(root) < 0 else x)
        return coords

    def from_coordinates(self, coords, w: WeylElement | None = None) -> "GroupElement":
        """Evaluate h_1^{x_1} ... h_d^{x_d} for the ordered basis of w."""
        if w is None:
            w = self.datum.identity_weyl()
        neg_batch, pos_batch = self.batches(w)
        rank = self.datum.rank
        d = len(neg_batch) + rank + len(pos_batch)
        if len(coords) != d:
            raise ValueError(f"need {d} coordinates, got {len(coords)}")
        coords = [self.ring.coerce(x) for x in coords]
        k = 0
        rows = [[self.ring.one() if i == j else self.ring.zero()
                 for j in range(self.n)] for i in range(self.n)]
        for root in neg_batch:
            x = coords[k]; k += 1
            if self.datum.height(root) < 0:
                x = x.shift(1)
            self._rmul_root_inplace(rows, root, x)
        torus_coords = []
        for _mu_i in self.datum.cochar_basis:
            x = coords[k]; k += 1
            torus_coords.append(padic_exp(x.shift(1)))
        self._rmul_diag_inplace(rows, self.torus_diagonal(torus_coords))
        for root in pos_batch:
            x = coords[k]; k += 1
            if self.datum.height(root) < 0:
                x = x.shift(1)
            self._rmul_root_inplace(rows, root, x)
        return GroupElement(self, tuple(tuple(r) for r in rows))

    # -- the p-valuation ------------------------------------------------------

    def p_valuation(self, g: "GroupElement") -> PValue:
        """omega via the Iwahori factorization at w = 1: the minimum of
        val(x) + ht(root)/h over root factors and of val(d_i - 1) over the
        torus diagonal."""
        fact = self.iwahori_factorize(g)
        h = self.coxeter_number
        finite, caps = [], []
        for root, x in fact.negative + fact.positive:
            off = Fraction(self.datum.height(root), h)
            v = x.val()
            if v is INF:
                continue
            if v is None:
                caps.append(x.val_cap() + off)
            else:
                finite.append(v + off)
        for d in fact.torus_diagonal:
            e = d - 1
            v = e.val()
            if v is INF:
                continue
            if v is None:
                caps.append(e.val_cap())
            else:
                finite.append(v)
        return pv_combine_min(finite, caps)

    def omega_of_factor_list(self, fact: "Factorization") -> list:
        """Per-factor omega values (PValue) in product order, torus as one factor."""
        h = self.coxeter_number
        out = []
        for root, x in fact.negative:
            out.append(_pv_of_scalar(x, Fraction(self.datum.height(root), h)))
        finite, caps = [], []
        for d in fact.torus_diagonal:
            e = d - 1
            v = e.val()
            if v is INF:
                continue
            (caps if v is None else finite).append(e.val_cap() if v is None else v)
        out.append(pv_combine_min(finite, caps))
        for root, x in fact.positive:
            out.append(_pv_of_scalar(x, Fraction(self.datum.height(root), h)))
        return out

    # -- the conjugation oracle ------------------------------------------------

    def et_data(self):
        """The extension and conjugation data: ring of E = Q_p(p^(1/(a*h))),
        the height cocharacter scale a, and the congruence level r, the
        least integer above e_E/(p-1)."""
        self.check_gate()
        mu, a = self.datum.adapted_cocharacter(self.datum.identity_weyl())
        m = a * self.coxeter_number
        ring_e = ScalarRing(self.ring.p, m, m * self.ring.prec)
        r = m // (self.ring.p - 1) + 1
        return EtData(self, ring_e, mu, a, r)

    def p_valuation_by_conjugation(self, g: "GroupElement") -> PValue:
        """omega via conjugation into the principal congruence filtration of
        the ramified extension; the stated independent oracle."""
        et = self.et_data()
        conj = et.conjugate(g)
        m = et.ring_e.m
        finite, caps = [], []
        for i in range(self.n):
            for j in range(self.n):
                e = conj[i][j] - 1 if i == j else conj[i][j]
                wv = e.pival()
                if wv is INF:
                    continue
                if wv is None:
                    caps.append(Fraction(e.prec, m))
                else:
                    finite.append(Fraction(wv, m))
        return pv_combine_min(finite, caps)


def _pv_of_scalar(x, offset: Fraction) -> PValue:
    v = x.val()
    if v is INF:
        return PValue.infinite()
    if v is None:
        return PValue.at_least(x.val_cap() + offset)
    return PValue.finite(v + offset)


@dataclass
class EtData:
    group: ChevalleyGroup
    ring_e: ScalarRing
    mu: tuple
    a: int
    r: int

    def embed_scalar(self, x: PadicScalar) -> PadicScalar:
        m = self.ring_e.m
        co = (x.co[0],) + (0,) * (m - 1)
        return self.ring_e.canonical(co, m * x.prec, x.exact)

    def conjugate(self, g: "GroupElement"):
        """Entries of t g t^(-1) over E for t = mu(pi); entry (i, j) picks up
        pi^(d_i - d_j), where d is the diagonal exponent pattern of mu."""
        exps = self.group.exponents(self.mu)
        out = []
        for i in range(self.group.n):
            row = []
            for j in range(self.group.n):
                x = self.embed_scalar(g.mat[i][j])
                row.append(x.shift(exps[i] - exps[j]))
            out.append(row)
        return out

    def conjugate_in_congruence(self, g: "GroupElement", r: int | None = None) -> bool:
        r = self.r if r is None else r
        conj = self.conjugate(g)
        for i in range(self.group.n):
            for j in range(self.group.n):
                e = conj[i][j] - 1 if i == j else conj[i][j]
                if e.prec < r:
                    raise PrecisionError("not enough digits to test the congruence level")
                wv = e.pival()
                if not (wv is INF or wv is None or wv >= r):
                    return False
        return True

    def root_values(self):
        """val(alpha(t)) = ht(alpha)/(e*h) for the positive roots, exact."""
        h = self.group.coxeter_number
        return {r: Fraction(self.group.datum.height(r), h)
                for r in self.group.datum.positive_roots}


@dataclass
class BasisVector:
    label: tuple
    generator: "GroupElement"
    omega: Fraction


@dataclass
class OrderedBasis:
    group: ChevalleyGroup
    w: WeylElement
    entries: list

    def __len__(self):
        return len(self.entries)

    def omegas(self):
        return [e.omega for e in self.entries]


@dataclass
class Factorization:
    group: ChevalleyGroup
    w: WeylElement
    negative: list          # [(root, parameter scalar)] for the wPhi- batch
    torus_coordinates: list  # scalars on the cocharacter basis
    torus_diagonal: list     # diagonal scalars of the torus part
    positive: list          # [(root, parameter scalar)] for the wPhi+ batch

    def torus_element(self) -> "GroupElement":
        g = self.group.identity()
        for mu_i, s in zip(self.group.datum.cochar_basis, self.torus_coordinates):
            g = g * self.group.torus_element(mu_i, s)
        return g

    def remultiply(self) -> "GroupElement":
        return self.group.from_parameters(self.negative, self.torus_coordinates,
                                          self.positive)


def _matmul(a, b, n):
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)),
                  start=a[i][0].ring.zero(exact=True))
              for j in range(n))
        for i in range(n))


def _det_recursive(mat, idx_rows, idx_cols, ring):
    n = len(idx_rows)
    if n == 1:
        return mat[idx_rows[0]][idx_cols[0]]
    if n == 2:
        (r0, r1), (c0, c1) = idx_rows, idx_cols
        return mat[r0][c0] * mat[r1][c1] - mat[r0][c1] * mat[r1][c0]
    acc = ring.zero(exact=True)
    r0 = idx_rows[0]
    rest = idx_rows[1:]
    for k, c in enumerate(idx_cols):
        cols = idx_cols[:k] + idx_cols[k + 1:]
        term = mat[r0][c] * _det_recursive(mat, rest, cols, ring)
        acc = acc + term if k % 2 == 0 else acc - term
    return acc


def _adjugate_det(mat, n, ring):
    """Division-free adjugate and determinant by cofactor expansion."""
    idx = tuple(range(n))
    det = _det_recursive(mat, idx, idx, ring)
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        rows = idx[:i] + idx[i + 1:]
        for j in range(n):
            cols = idx[:j] + idx[j + 1:]
            minor = _det_recursive(mat, rows, cols, ring)
            adj[j][i] = minor if (i + j) % 2 == 0 else -minor
    return adj, det


def _ldu(mat, n, ring):
    """Exact LDU of a matrix with unit leading minors; raises on a
    non-unit pivot, which cannot happen for pro-p Iwahori inputs."""
    a = [list(row) for row in mat]
    one, zero = ring.one(), ring.zero(exact=True)
    lmat = [[one if i == j else zero for j in range(n)] for i in range(n)]
    umat = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = a[k][k]
        if not piv.is_unit():
            raise PadicError(f"elimination pivot {k} is not a unit: {piv!r}")
        pivinv = piv.inv()
        for i in range(k + 1, n):
            f = a[i][k] * pivinv
            lmat[i][k] = f
            if not f.is_exact_zero:
                for j in range(k, n):
                    a[i][j] = a[i][j] - f * a[k][j]
    diag = [a[k][k] for k in range(n)]
    for k in range(n):
        pivinv = diag[k].inv()
        for j in range(k + 1, n):
            umat[k][j] = pivinv * a[k][j]
    return lmat, diag, umat


class GroupElement:
    """Square matrix over the scalar ring tagged with its group."""

    __slots__ = ("group", "mat")

    def __init__(self, group: ChevalleyGroup, mat):
        self.group = group
        self.mat = mat

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if other.group is not self.group:
            raise ValueError("elements of different groups")
        return GroupElement(self.group, _matmul(self.mat, other.mat, self.group.n))

    def __pow__(self, k: int) -> "GroupElement":
        if k < 0:
            return self.inv() ** (-k)
        result = self.group.identity()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inv(self) -> "GroupElement":
        n = self.group.n
        if self.group.name == "sp4":
            # g^-1 = -J g^T J for the antidiagonal Gram matrix
            jmat = _SP4_GRAM
            gt = [[self.mat[j][i] for j in range(n)] for i in range(n)]
            tmp = [[None] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    acc = self.group.ring.zero(exact=True)
                    for k in range(n):
                        if jmat[i][k]:
                            acc = acc + (gt[k][j] if jmat[i][k] == 1 else -gt[k][j])
                    tmp[i][j] = acc
            out = [[None] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    acc = self.group.ring.zero(exact=True)
                    for k in range(n):
                        if jmat[k][j]:
                            acc = acc + (tmp[i][k] if jmat[k][j] == 1 else -tmp[i][k])
                    out[i][j] = -acc
            return GroupElement(self.group, tuple(tuple(r) for r in out))
        adj, det = _adjugate_det(self.mat, n, self.group.ring)
        dinv = det.inv()
        return GroupElement(self.group, tuple(
            tuple(adj[i][j] * dinv for j in range(n)) for i in range(n)))

    def det(self) -> PadicScalar:
        _, d = _adjugate_det(self.mat, self.group.n, self.group.ring)
        return d

    def satisfies_group_relation(self) -> bool:
        n = self.group.n
        if self.group.name == "sp4":
            jm = _SP4_GRAM
            for i in range(n):
                for j in range(n):
                    acc = self.group.ring.zero(exact=True)
                    for k in range(n):
                        for l in range(n):
                            if jm[k][l]:
                                term = self.mat[k][i] * self.mat[l][j]
                                acc = acc + (term if jm[k][l] == 1 else -term)
                    if not acc == jm[i][j]:
                        return False
            return True
        return self.det() == 1

    def sub_identity_entry(self, i: int, j: int) -> PadicScalar:
        e = self.mat[i][j]
        return e - 1 if i == j else e

    def min_entry_prec(self) -> int:
        return min(e.prec for row in self.mat for e in row)

    def in_congruence(self, r: int) -> bool:
        """Entrywise congruence to the identity modulo pi^r."""
        if r > self.min_entry_prec():
            raise PrecisionError(f"congruence level {r} exceeds the tracked precision")
        for i in range(self.group.n):
            for j in range(self.group.n):
                e = self.sub_identity_entry(i, j)
                wv = e.pival()
                if not (wv is INF or wv is None or wv >= r):
                    return False
        return True

    def is_exact_identity(self) -> bool:
        for i in range(self.group.n):
            for j in range(self.group.n):
                e = self.sub_identity_entry(i, j)
                if not e.is_exact_zero:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, GroupElement) or other.group is not self.group:
            return NotImplemented
        return all(self.mat[i][j] == other.mat[i][j]
                   for i in range(self.group.n) for j in range(self.group.n))

    def __repr__(self):
        rows = []
        for row in self.mat:
            rows.append("[" + ", ".join(e.digit_string() for e in row) + "]")
        return f"GroupElement({self.group.name}, [" + "; ".join(rows) + "])"
