"""Property-test harness for the p-valuation and its factorizations.

Samples are drawn by filling the ordered-basis coordinate grid uniformly
at the working precision and assembling group elements from coordinates,
which guarantees membership and exercises the whole chart.  Comparisons
are exact rational comparisons; a sample whose relevant values hit the
precision cap is skipped and counted, never silently passed.  Sampling is
deterministic: the per-sample generator is seeded by (seed, counter).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from .groups import ChevalleyGroup, PValue, pv_combine_min


@dataclass
class AxiomCounts:
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    worst_margin: Fraction | None = None

    def record(self, ok: bool, margin: Fraction | None = None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
        if margin is not None:
            if self.worst_margin is None or margin < self.worst_margin:
                self.worst_margin = margin

    def skip(self):
        self.skipped += 1

    def as_json(self):
        return {
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "worst_margin": None if self.worst_margin is None else str(self.worst_margin),
        }


@dataclass
class AxiomReport:
    group: str
    p: int
    precision: int
    n_samples: int
    seed: int
    axioms: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def counts(self, name: str) -> AxiomCounts:
        return self.axioms.setdefault(name, AxiomCounts())

    @property
    def total_failures(self) -> int:
        return sum(c.failed for c in self.axioms.values())

    @property
    def total_skipped(self) -> int:
        return sum(c.skipped for c in self.axioms.values())

    def record_failure(self, axiom: str, sample_index: int, detail: str,
                       elements=None):
        # a failing sample always carries its reproduction seed and the
        # offending elements themselves
        entry = {
            "axiom": axiom,
            "sample": sample_index,
            "seed": _sample_seed(self.seed, sample_index),
            "detail": detail,
        }
        if elements:
            entry["elements"] = {
                name: [[e.digit_string() for e in row] for row in g.mat]
                for name, g in elements.items()
            }
        self.failures.append(entry)

    def as_json(self):
        return {
            "schema": "iwahori.axiom-report/1",
            "group": self.group,
            "p": self.p,
            "precision": self.precision,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "axioms": {k: v.as_json() for k, v in sorted(self.axioms.items())},
            "failures": self.failures,
            "ok": self.total_failures == 0,
        }


def _sample_seed(seed: int, k: int) -> int:
    return seed * 1_000_003 + k


def sample_iwahori(group: ChevalleyGroup, rng: Random, w=None):
    """Uniform draw from the coordinate grid at the working precision."""
    basis = group.ordered_basis(w)
    box = group.ring.ppow(group.ring.prec)
    coords = [rng.randrange(box) for _ in range(len(basis))]
    return group.from_coordinates(coords, w)


def _pv_sum(a: PValue, b: PValue) -> PValue:
    if a.kind == "infinite" or b.kind == "infinite":
        return PValue.infinite()
    kind = "finite" if a.kind == b.kind == "finite" else "at_least"
    return PValue(kind, a.value + b.value)


def _pv_min(a: PValue, b: PValue) -> PValue:
    vals = [x.value for x in (a, b) if x.kind == "finite"]
    caps = [x.value for x in (a, b) if x.kind == "at_least"]
    return pv_combine_min(vals, caps)


def _ge(lhs: PValue, rhs: PValue):
    """Decide lhs >= rhs when the data allows; None means skip (cap-bound)."""
    if rhs.kind == "infinite":
        return (True, None) if lhs.kind == "infinite" else (None, None)
    if lhs.kind == "infinite":
        return True, None
    if lhs.kind == "finite" and rhs.kind == "finite":
        return lhs.value >= rhs.value, lhs.value - rhs.value
    if lhs.kind == "at_least" and rhs.kind == "finite" and lhs.value >= rhs.value:
        return True, lhs.value - rhs.value
    return None, None


def _eq(lhs: PValue, rhs: PValue):
    if lhs.kind == "finite" and rhs.kind == "finite":
        return lhs.value == rhs.value, min(lhs.value - rhs.value, rhs.value - lhs.value)
    if lhs.kind == "infinite" and rhs.kind == "infinite":
        return True, None
    return None, None


def check_pvaluation_axioms(group_name: str, p: int, precision: int,
                            n_samples: int, seed: int = 1) -> AxiomReport:
    """The four p-valuation axioms on sampled pairs, exact comparisons."""
    group = ChevalleyGroup(group_name, p=p, prec=precision)
    group.check_gate()
    report = AxiomReport(group_name, p, precision, n_samples, seed)
    lower_gate = Fraction(1, p - 1)
    for k in range(n_samples):
        rng = Random(_sample_seed(seed, k))
        g = sample_iwahori(group, rng)
        h = sample_iwahori(group, rng)
        wg = group.p_valuation(g)
        wh = group.p_valuation(h)

        c = report.counts("lower_bound")
        if wg.kind == "finite":
            ok = wg.value > lower_gate
            c.record(ok, wg.value - lower_gate)
            if not ok:
                report.record_failure("lower_bound", k, f"omega={wg.as_json()}",
                                      {"g": g})
        elif wg.kind == "infinite":
            c.record(True)
        else:
            c.skip()

        c = report.counts("subadditive")
        ok, margin = _ge(group.p_valuation(g * h), _pv_min(wg, wh))
        if ok is None:
            c.skip()
        else:
            c.record(ok, margin)
            if not ok:
                report.record_failure("subadditive", k, "omega(gh) < min",
                                      {"g": g, "h": h})

        c = report.counts("commutator")
        comm = g.inv() * h.inv() * g * h
        ok, margin = _ge(group.p_valuation(comm), _pv_sum(wg, wh))
        if ok is None:
            c.skip()
        else:
            c.record(ok, margin)
            if not ok:
                report.record_failure("commutator", k,
                                      "omega([g,h]) < omega(g)+omega(h)",
                                      {"g": g, "h": h})

        c = report.counts("p_power")
        wp = group.p_valuation(g ** p)
        ok, margin = _eq(wp, _pv_sum(wg, PValue.finite(1)))
        if ok is None:
            c.skip()
        else:
            c.record(ok, margin)
            if not ok:
                report.record_failure(
                    "p_power", k,
                    f"omega(g^p)={wp.as_json()} omega(g)={wg.as_json()}",
                    {"g": g})
    return report


def check_compatibility_all_w(group_name: str, p: int, precision: int,
                              n_samples: int, seed: int = 1) -> AxiomReport:
    """omega(g) equals the factor minimum of the w-twisted factorization,
    for every Weyl element."""
    group = ChevalleyGroup(group_name, p=p, prec=precision)
    group.check_gate()
    report = AxiomReport(group_name, p, precision, n_samples, seed)
    weyl = group.datum.weyl_group()
    for k in range(n_samples):
        rng = Random(_sample_seed(seed, k))
        g = sample_iwahori(group, rng)
        wg = group.p_valuation(g)
        for w in weyl:
            c = report.counts(f"compatible[{w.name}]")
            fact = group.iwahori_factorize(g, w)
            factor_vals = group.omega_of_factor_list(fact)
            mins = pv_combine_min(
                [v.value for v in factor_vals if v.kind == "finite"],
                [v.value for v in factor_vals if v.kind == "at_least"])
            ok, margin = _eq(wg, mins)
            if ok is None:
                c.skip()
            else:
                c.record(ok, margin)
                if not ok:
                    report.record_failure(
                        f"compatible[{w.name}]", k,
                        f"omega={wg.as_json()} factor-min={mins.as_json()}",
                        {"g": g})
    return report


def check_oracle_agreement(group_name: str, p: int, precision: int,
                           n_samples: int, seed: int = 1) -> AxiomReport:
    """Factorization formula versus the conjugation oracle, exact below cap."""
    group = ChevalleyGroup(group_name, p=p, prec=precision)
    group.check_gate()
    report = AxiomReport(group_name, p, precision, n_samples, seed)
    for k in range(n_samples):
        rng = Random(_sample_seed(seed, k))
        g = sample_iwahori(group, rng)
        c = report.counts("oracle_agreement")
        ok, margin = _eq(group.p_valuation(g), group.p_valuation_by_conjugation(g))
        if ok is None:
            c.skip()
        else:
            c.record(ok, margin)
            if not ok:
                report.record_failure("oracle_agreement", k, "formula != oracle",
                                      {"g": g})
    return report


def check_et_embedding(group_name: str, p: int, precision: int = 12,
                       seed: int = 1) -> AxiomReport:
    """Exact interval checks for the conjugating pair and the congruence
    embedding of the ordered basis."""
    group = ChevalleyGroup(group_name, p=p, prec=precision)
    group.check_gate()  # raises GateError when p - 1 <= e*h, no false pass
    report = AxiomReport(group_name, p, precision, 1, seed)
    et = group.et_data()
    lo = Fraction(1, p - 1)
    hi = 1 - Fraction(1, p - 1)  # 1/e - 1/(p-1) with e = 1
    c = report.counts("root_value_interval")
    for root, v in et.root_values().items():
        ok = lo < v < hi
        c.record(ok, min(v - lo, hi - v))
        if not ok:
            report.record_failure("root_value_interval", 0, f"{root}: {v}")
    c = report.counts("torus_containment")
    c.record(p - 1 > 1)  # m in m_E^r for the middle factor needs p-1 > e
    c = report.counts("basis_in_congruence")
    for vec in group.ordered_basis().entries:
        ok = et.conjugate_in_congruence(vec.generator)
        c.record(ok)
        if not ok:
            report.record_failure("basis_in_congruence", 0, f"{vec.label}")
    return report
