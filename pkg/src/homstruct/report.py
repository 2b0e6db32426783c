"""Verification suites, table reproductions and report emission.

A run walks the registered suites for the configured metric cases and
collects one plain-dict record per (suite, case) or per sampled point.
Records only hold JSON-native values: rationals become ``"p/q"`` strings,
so the emitted report is byte-identical for identical configurations.
Wall-clock timings go to the log, never into the report.
"""

from __future__ import annotations

import enum
import json
import logging
import random
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import contact as ct
from . import group as gm
from .exact import MetricCase, format_rational, sample_params
from .lie import (
    SU11,
    DiagonalMetric,
    closed_form_connection,
    closed_form_curvature,
    curvature,
    levi_civita,
    space_form_curvature,
)
from .reductive import (
    LEMMA_CASES,
    build_transvection_algebra,
    check_jacobi,
    check_reductive,
    check_torsion_reconstruction,
    holonomy_algebra,
    null_swap_certificate,
    verify_decomposition_case,
)
from .structures import (
    CERTIFIED,
    SAMPLED,
    TABLE2_CASES,
    ExcludedParameterWarning,
    Family,
    build_as_system,
    catalog_family,
    catalog_violations,
    displayed_decomposition_check,
    exchange_certificate,
    excluded_parameter,
    families_for,
    family_subspace,
    hatted_basis_check,
    match_components,
    match_point,
    null_flip_certificate,
    sample_component,
    solve_structures,
    svol_curvature,
    table2_c_value,
    table2_certificate,
)

log = logging.getLogger(__name__)

REPORT_VERSION = 1
PASS = "PASS"
FAIL = "FAIL"
SAMPLED_STATUS = "SAMPLED"
ALL_CASES = "all"
TABLE_IDS = ("table1", "table2", "table3", "table4", "table5")
MIN_IDENTITY_SAMPLES = 16

CASE_CONDITIONS = {
    MetricCase.SYMMETRIC: "-lambda = mu = nu",
    MetricCase.TIMELIKE: "-lambda != mu = nu",
    MetricCase.SPACELIKE_NU: "-lambda = nu != mu",
    MetricCase.SPACELIKE_MU: "-lambda = mu != nu",
    MetricCase.GENERIC: "-lambda, mu, nu pairwise distinct",
}
TABLE1_ORDER = (
    MetricCase.SYMMETRIC,
    MetricCase.TIMELIKE,
    MetricCase.SPACELIKE_NU,
    MetricCase.SPACELIKE_MU,
    MetricCase.GENERIC,
)
HOLONOMY_DIMS = {
    Family.S0: 0,
    Family.SLAMBDA: 1,
    Family.SMU: 1,
    Family.SNU: 1,
    Family.SNULL_MINUS: 1,
    Family.SNULL_PLUS: 1,
    Family.SVOL: 3,
}
# families whose degenerate parameter value gives back S0
DEGENERATING = (Family.SLAMBDA, Family.SMU, Family.SNU)
# (family, triple label) pairs expected to be parallel; S0 carries every triple
PARALLEL_PAIRS = {
    (Family.SLAMBDA, "phi0"),
    (Family.SMU, "phitilde1"),
    (Family.SNU, "phitilde2"),  # exchange image of (Smu, phitilde1)
}
CONTACT_KINDS = (
    (ct.CONTACT, 0),
    (ct.CONTACT, 1),
    (ct.CONTACT, 2),
    (ct.PARACONTACT, 1),
    (ct.PARACONTACT, 2),
)
ROTATION_LABELS = ("cone", "exchanged-cone", "rotated", "generic")


# --------------------------------------------------------------------------
# Configuration


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    cases: tuple = tuple(TABLE1_ORDER)
    samples_per_case: int = 8
    identity_sample_count: int = 16
    seed: int = 0
    perfect_square_only: bool = False
    output_path: str | None = None
    output_format: str = "json"
    unsafe_low_samples: bool = False
    group_points: int = 16
    suites: tuple = ()  # empty means every suite
    tables: tuple = TABLE_IDS

    def __post_init__(self):
        object.__setattr__(self, "cases", tuple(MetricCase(c) for c in self.cases))
        if not self.cases:
            raise ConfigError("at least one metric case is required")
        if len(set(self.cases)) != len(self.cases):
            raise ConfigError("a metric case was selected twice")
        if self.samples_per_case < 1:
            raise ConfigError("samples_per_case must be >= 1")
        if self.identity_sample_count < 1:
            raise ConfigError("identity_sample_count must be >= 1")
        if self.identity_sample_count < MIN_IDENTITY_SAMPLES and not self.unsafe_low_samples:
            raise ConfigError(
                f"identity_sample_count below {MIN_IDENTITY_SAMPLES} needs the unsafe flag"
            )
        if self.group_points < 1:
            raise ConfigError("group_points must be >= 1")
        if self.output_format not in ("json", "markdown"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
        bad = [t for t in self.tables if t not in TABLE_IDS]
        if bad:
            raise ConfigError(f"unknown table(s): {', '.join(bad)}")

    def as_dict(self) -> dict:
        """The fields that determine report content (output path excluded)."""
        return {
            "cases": [c.value for c in self.cases],
            "samples_per_case": self.samples_per_case,
            "identity_sample_count": self.identity_sample_count,
            "seed": self.seed,
            "perfect_square_only": self.perfect_square_only,
            "unsafe_low_samples": self.unsafe_low_samples,
            "group_points": self.group_points,
            "suites": list(self.suites),
            "tables": list(self.tables),
        }


# --------------------------------------------------------------------------
# JSON-native values


def plain(x):
    """Recursively convert to JSON-native values with exact rationals as strings."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, dict):
        return {str(plain(k)): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [plain(v) for v in x]
        if isinstance(x, (set, frozenset)):
            items.sort(key=lambda v: json.dumps(v, sort_keys=True))
        return items
    return str(x)


def _params(*values) -> list:
    return [format_rational(Fraction(v)) for v in values]


def _record(suite: str, case, params: Sequence, status: str, details: dict) -> dict:
    return {
        "id": suite,
        "case": case.value if isinstance(case, MetricCase) else case,
        "params": list(params),
        "status": status,
        "details": plain(details),
    }


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


# --------------------------------------------------------------------------
# Run context


class _Run:
    def __init__(self, cfg: Config):
        self.cfg = cfg
        self._solved: dict = {}
        self.sampled: list = []

    def metrics(self, case: MetricCase, count: int | None = None, perfect: bool | None = None):
        perfect = self.cfg.perfect_square_only if perfect is None else perfect
        count = self.cfg.samples_per_case if count is None else count
        return [DiagonalMetric(*p) for p in sample_params(case, self.cfg.seed, count, perfect)]

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{tag}:{self.cfg.seed}")

    def solve(self, g: DiagonalMetric):
        key = g.diag
        if key not in self._solved:
            system = build_as_system(g)
            self._solved[key] = (solve_structures(g), system)
        return self._solved[key]


def sample_t(rng: random.Random, avoid: Sequence = ()) -> Fraction:
    """A non-zero rational family parameter avoiding the given values."""
    avoid = {Fraction(a) for a in avoid if a is not None}
    while True:
        t = Fraction(rng.randint(-60, 60), rng.randint(1, 12))
        if t != 0 and t not in avoid:
            return t


def _family_t(rng, fam: Family, g: DiagonalMetric):
    if fam is Family.S0:
        return None
    return sample_t(rng, (excluded_parameter(fam, g), g.mu))


def _structure(fam: Family, g: DiagonalMetric, t):
    return catalog_family(fam, g) if fam is Family.S0 else catalog_family(fam, g, t)


def _gparams(g: DiagonalMetric, *extra) -> list:
    return _params(*g.diag, *extra)


# --------------------------------------------------------------------------
# Suites: geometry of the metric


def suite_closed_forms(run: _Run, case: MetricCase) -> list:
    n = run.cfg.identity_sample_count
    bad, points = [], []
    for g in run.metrics(case, n):
        points.append(_gparams(g))
        if levi_civita(g).gamma != closed_form_connection(g):
            bad.append(["connection", _gparams(g)])
        if curvature(levi_civita(g), SU11).r != closed_form_curvature(g):
            bad.append(["curvature", _gparams(g)])
    return [_record("lie.closed-forms", case, [], _status(not bad),
                    {"samples": n, "points": points, "mismatches": bad})]


def suite_constant_curvature(run: _Run, case: MetricCase) -> list:
    """At -lam = mu = nu = m the curvature is that of a space form with k = -1/m."""
    metrics = [DiagonalMetric(-1, 1, 1)] + run.metrics(case)
    bad = []
    for g in metrics:
        if curvature(levi_civita(g), SU11).r != space_form_curvature(g, -1 / g.mu):
            bad.append(_gparams(g))
    return [_record("lie.constant-curvature", case, _gparams(metrics[0]), _status(not bad),
                    {"samples": len(metrics), "sectional": "-1/mu", "mismatches": bad})]


# --------------------------------------------------------------------------
# Suites: the solver against the catalog


def _component_summary(m) -> dict:
    comp = m.component
    return {
        "status": comp.status,
        "dimension": comp.dimension,
        "family": m.family.value if m.family else None,
        "description": comp.describe(),
        "point_labels": sorted({p.kind for p in m.points}),
    }


def suite_solver(run: _Run, case: MetricCase) -> list:
    out = []
    rng = run.rng(f"solver:{case.value}")
    for g in run.metrics(case):
        comps, system = run.solve(g)
        rep = match_components(comps, g, seed=run.cfg.seed, system=system)
        families = families_for(case)
        matched = [
            f for f in families
            if any(c.contains_family(family_subspace(f, g)) for c in comps)
        ]
        violations = {}
        for f in rep.missing:
            violations[f.value] = catalog_violations(f, g, _family_t(rng, f, g), comps, system)
        details = {
            "components": [_component_summary(m) for m in rep.components],
            "expected": [f.value for f in families],
            "matched": [f.value for f in matched],
            "failures": rep.failures,
            "violations": violations,
            "certified": sum(1 for c in comps if c.status == CERTIFIED),
            "sampled": sum(1 for c in comps if c.status == SAMPLED),
        }
        for comp in rep.sampled:
            run.sampled.append(
                {"case": case.value, "params": _gparams(g), "component": comp.describe()}
            )
        if not rep.ok:
            status = FAIL
        elif rep.sampled:
            status = SAMPLED_STATUS
        else:
            status = PASS
        out.append(_record("solver.catalog", case, _gparams(g), status, details))
    return out


def suite_degenerations(run: _Run, case: MetricCase) -> list:
    fams = [f for f in DEGENERATING if f in families_for(case)]
    if not fams:
        return []
    bad = []
    for g in run.metrics(case):
        s0 = catalog_family(Family.S0, g).coeffs
        for f in fams:
            t = excluded_parameter(f, g)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ExcludedParameterWarning)
                if catalog_family(f, g, t).coeffs != s0:
                    bad.append([f.value, _gparams(g, t)])
    return [_record("catalog.degenerations", case, [], _status(not bad),
                    {"families": [f.value for f in fams], "samples": run.cfg.samples_per_case,
                     "mismatches": bad})]


# --------------------------------------------------------------------------
# Suites: holonomy and transvection algebras


def suite_holonomy(run: _Run, case: MetricCase) -> list:
    rng = run.rng(f"holonomy:{case.value}")
    dims: dict = {}
    bad = []
    svol = []
    for g in run.metrics(case):
        for f in families_for(case):
            t = _family_t(rng, f, g)
            hol = holonomy_algebra(g, _structure(f, g, t))
            dims.setdefault(f.value, set()).add(hol.dimension)
            if hol.dimension != HOLONOMY_DIMS[f] or not hol.skew:
                bad.append([f.value, _gparams(g, *([t] if t is not None else [])), hol.dimension])
            if f is Family.SVOL:
                mu = g.mu
                R = svol_curvature(g, t)
                lowered = mu * R["R1_212"]  # g(R(X1, X2) X2, X1)
                expected = -(mu - t) * (mu + t) / mu
                raised_ok = all(v == expected / mu for v in R.values())
                svol.append({"params": _gparams(g, t), "lowered_1221": lowered,
                             "expected": expected, "raised_equal": raised_ok})
                if lowered != expected or not raised_ok:
                    bad.append(["Svol curvature", _gparams(g, t)])
    details = {
        "dimensions": {k: sorted(v) for k, v in sorted(dims.items())},
        "expected": {f.value: HOLONOMY_DIMS[f] for f in families_for(case)},
        "mismatches": bad,
    }
    if svol:
        details["svol_curvature"] = svol
    return [_record("reductive.holonomy", case, [], _status(not bad), details)]


def suite_transvection(run: _Run, case: MetricCase) -> list:
    rng = run.rng(f"transvection:{case.value}")
    bad, pairs = [], 0
    for g in run.metrics(case):
        for f in families_for(case):
            t = _family_t(rng, f, g)
            S = _structure(f, g, t)
            P = build_transvection_algebra(g, S)
            pairs += 1
            for sub in (check_jacobi(P), check_reductive(P), check_torsion_reconstruction(P, g, S)):
                if not sub.ok:
                    bad.append([f.value, _gparams(g), sub.name, str(sub.failures[0])])
    return [_record("reductive.transvection", case, [], _status(not bad),
                    {"pairs_checked": pairs, "failures": bad})]


def suite_hatted(run: _Run, case: MetricCase) -> list:
    fams = [f for f in (Family.SLAMBDA, Family.SMU) if f in families_for(case)]
    if not fams:
        return []
    rng = run.rng(f"hatted:{case.value}")
    bad, checked = [], 0
    for g in run.metrics(case):
        for f in fams:
            t = _family_t(rng, f, g)
            for sub in (hatted_basis_check(f, g, t), displayed_decomposition_check(f, g, t)):
                checked += 1
                if not sub.ok:
                    bad.append([sub.name, _gparams(g, t), str(sub.failures[0])])
    return [_record("reductive.hatted", case, [], _status(not bad),
                    {"families": [f.value for f in fams], "checks": checked, "failures": bad})]


C_FORMULAS = {
    Family.SVOL: "(t - mu) / (2 mu)",
    Family.SLAMBDA: "(t - mu) / (2 mu)",
    Family.SMU: "(t - mu) / (2 mu)",
    Family.SNULL_MINUS: "t / mu",
    Family.SNULL_PLUS: "-t / mu",
}


def suite_table2(run: _Run, case: MetricCase) -> list:
    out = []
    rng = run.rng("table2")
    metrics = run.metrics(case)
    for f in TABLE2_CASES:
        bad, rejected = [], 0
        for g in metrics:
            t = _family_t(rng, f, g)
            res = table2_certificate(f, g, t)
            if not res.ok:
                bad.append([_gparams(g, t), str(res.failures[0])])
            wrong = table2_c_value(f, g, t) + 1
            if table2_certificate(f, g, t, c=wrong).ok:
                bad.append([_gparams(g, t), f"c = {wrong} also accepted"])
            else:
                rejected += 1
        out.append(_record(
            "reductive.table2", case, [], _status(not bad),
            {"family": f.value, "decomposition": TABLE2_CASES[f], "c": C_FORMULAS[f],
             "holonomy_dim": HOLONOMY_DIMS[f], "samples": len(metrics),
             "wrong_c_rejected": rejected, "failures": bad},
        ))
    return out


def suite_lemma(run: _Run, case: MetricCase) -> list:
    out = []
    c = Fraction(1, 3)
    for cid in LEMMA_CASES:
        res = verify_decomposition_case(cid, c=c)
        out.append(_record("reductive.lemma", case, _params(c), _status(res.ok),
                           {"case": cid, "failures": res.failures, **res.details}))
    extra = (
        ("general", {"c0": 2, "c1": 3, "c2": 4}),
        ("timelike-gen", {"c0": 5, "c1": 3}),
        ("spacelike-gen", {"c0": 3, "c1": 5}),
        ("null-plus", {"c": c}),
        ("null-minus", {"c": c}),
        ("two-dim", {}),
    )
    for cid, params in extra:
        res = verify_decomposition_case(cid, **params)
        out.append(_record("reductive.lemma", case, _params(*params.values()), _status(res.ok),
                           {"case": cid, "failures": res.failures}))
    res = null_swap_certificate(c)
    out.append(_record("reductive.lemma", case, _params(c), _status(res.ok),
                       {"case": "null-swap", "failures": res.failures}))
    return out


# --------------------------------------------------------------------------
# Suites: isomorphism certificates


def suite_certificates(run: _Run, case: MetricCase) -> list:
    out = []
    rng = run.rng(f"certificates:{case.value}")
    metrics = run.metrics(case)
    if case in (MetricCase.SYMMETRIC, MetricCase.SPACELIKE_NU):
        bad = []
        for g in metrics:
            t = sample_t(rng, (excluded_parameter(Family.SMU, g),))
            res = exchange_certificate(g, t)
            if not res.ok:
                bad.append([_gparams(g, t), str(res.failures[0])])
        out.append(_record("structures.certificates", case, [], _status(not bad),
                           {"certificate": "exchange", "samples": len(metrics), "failures": bad}))
    if case is MetricCase.SYMMETRIC:
        bad = []
        for g in metrics:
            t = sample_t(rng)
            res = null_flip_certificate(g, t)
            if not res.ok:
                bad.append([_gparams(g, t), str(res.failures[0])])
        out.append(_record("structures.certificates", case, [], _status(not bad),
                           {"certificate": "null-flip", "samples": len(metrics), "failures": bad}))
        labels: dict = {}
        bad = []
        prng = run.rng("rotation")
        # certification over surd towers is the slow part; two metrics
        # exercise every proof-case label
        for g in metrics[:2]:
            comps, _ = run.solve(g)
            for comp in comps:
                for _ in range(4):
                    p = sample_component(comp, prng)
                    if p is None:
                        continue
                    pm = match_point(p, g)
                    labels[pm.kind] = labels.get(pm.kind, 0) + 1
                    if not pm.ok:
                        bad.append([_gparams(g), pm.kind, pm.detail])
        missing = [lab for lab in ROTATION_LABELS if lab not in labels]
        for lab in missing:
            bad.append(["no sampled point exercised", lab])
        out.append(_record("structures.certificates", case, [], _status(not bad),
                           {"certificate": "rotation", "labels": dict(sorted(labels.items())),
                            "failures": bad}))
    return out


# --------------------------------------------------------------------------
# Suites: almost (para)contact structures


def _perfect_metrics(run: _Run, case: MetricCase, count: int | None = None):
    return run.metrics(case, count, perfect=True)


def _compatible_expected(kind: str, index: int, g: DiagonalMetric) -> bool:
    if kind == ct.CONTACT:
        return index == 0 or g.lam > 0
    return g.lam < 0


def suite_compatibility(run: _Run, case: MetricCase) -> list:
    tally = {f"{k}{i}": [0, 0] for k, i in CONTACT_KINDS}
    bad = []
    for g in _perfect_metrics(run, case):
        for kind, index in CONTACT_KINDS:
            tr = ct.displayed_triple(kind, index, g)
            ok = ct.check_structure_axioms(tr, g).ok
            want = _compatible_expected(kind, index, g)
            tally[f"{kind}{index}"][0 if ok else 1] += 1
            if ok != want:
                bad.append([tr.label, _gparams(g), ok])
    return [_record("contact.compatibility", case, [], _status(not bad),
                    {"compatible_incompatible": tally, "mismatches": bad})]


def _square(rng) -> Fraction:
    r = Fraction(rng.randint(1, 12), rng.randint(1, 6))
    return r * r


def condition_metric(kind: str, index: int, rng: random.Random) -> DiagonalMetric:
    """A perfect-square metric on which the contact-metric condition holds."""
    a, b = _square(rng), _square(rng)
    if kind == ct.CONTACT:
        if index == 0:
            return DiagonalMetric(rng.choice((-1, 1)) * a * b, a, b)
        if index == 1:
            return DiagonalMetric(a, a * b, b)
        return DiagonalMetric(a, b, a * b)
    if index == 1:
        return DiagonalMetric(-a, a * b, b)
    return DiagonalMetric(-a, b, a * b)


def suite_contact_metric(run: _Run, case) -> list:
    out = []
    rng = run.rng("contact-metric")
    pool = [g for c in TABLE1_ORDER for g in _perfect_metrics(run, c)]
    for kind, index in CONTACT_KINDS:
        holds = fails = 0
        bad = []
        metrics = [condition_metric(kind, index, rng) for _ in range(run.cfg.samples_per_case)]
        for g in metrics + pool:
            if not _compatible_expected(kind, index, g):
                continue
            tr = ct.make_triple(kind, index, g)
            got = ct.check_contact_metric(tr, g)
            want = ct.contact_metric_condition(kind, index, g)
            holds += want
            fails += not want
            if got != want:
                bad.append([tr.label, _gparams(g), got])
        if not holds or not fails:
            bad.append(["both directions not exercised", holds, fails])
        details = {"triple": f"{kind}{index}", "condition_holds": holds,
                   "condition_fails": fails, "mismatches": bad}
        if (kind, index) == (ct.CONTACT, 0):
            g = DiagonalMetric(-4, 2, 2)
            tr = ct.make_triple(kind, index, g, surds=True)
            surd_ok = ct.check_contact_metric(tr, g)
            details["surd_example"] = {"params": _gparams(g), "contact_metric": surd_ok}
            if not surd_ok:
                bad.append(["surd example", _gparams(g)])
        out.append(_record("contact.metric-condition", case, [], _status(not bad), details))
    return out


def suite_sasakian(run: _Run, case: MetricCase) -> list:
    if case is MetricCase.TIMELIKE:
        kind, index, label = ct.CONTACT, 0, "alpha = sqrt|lambda| / mu"
        example = DiagonalMetric(-4, 9, 9)

        def formula(g, s):
            return s[0] / g.mu
    elif case is MetricCase.SPACELIKE_NU:
        kind, index, label = ct.PARACONTACT, 1, "beta = -sqrt(mu) / nu"
        example = DiagonalMetric(-9, 4, 9)

        def formula(g, s):
            return -s[1] / g.nu
    elif case is MetricCase.SPACELIKE_MU:
        kind, index, label = ct.PARACONTACT, 2, "beta = -sqrt(nu) / mu"
        example = DiagonalMetric(-4, 4, 9)

        def formula(g, s):
            return -s[2] / g.mu
    else:
        return []
    bad, values = [], []
    for g in [example] + _perfect_metrics(run, case):
        try:
            tr = ct.make_triple(kind, index, g)
        except ct.InadmissibleTriple:
            continue
        got = ct.sasakian_coefficient(tr, g)
        want = formula(g, ct.orthonormal_scales(g))
        values.append([_gparams(g), got])
        if got != want:
            bad.append([_gparams(g), got, want])
    return [_record("contact.sasakian", case, _gparams(example), _status(not bad),
                    {"formula": label, "example_value": values[0][1], "values": values,
                     "mismatches": bad})]


def suite_parallel(run: _Run, case: MetricCase) -> list:
    rng = run.rng(f"parallel:{case.value}")
    passing: set = set()
    bad = []
    for g in _perfect_metrics(run, case):
        triples = ct.admissible_triples(g)
        for f in families_for(case):
            t = _family_t(rng, f, g)
            S = _structure(f, g, t)
            for tr in triples:
                ok = ct.check_parallel(tr, g, S)
                want = f is Family.S0 or (f, tr.label) in PARALLEL_PAIRS
                if ok and f is not Family.S0:
                    passing.add((f.value, tr.label))
                if ok != want:
                    bad.append([f.value, tr.label, _gparams(g, *([t] if t is not None else [])), ok])
    return [_record("contact.parallel", case, [], _status(not bad),
                    {"passing": sorted(list(p) for p in passing), "mismatches": bad})]


def suite_mixed(run: _Run, case: MetricCase) -> list:
    out = []
    metrics = _perfect_metrics(run, case)
    lorentz = [g for g in metrics if g.lam < 0]
    if case is MetricCase.SYMMETRIC:
        lorentz = [DiagonalMetric(-1, 1, 1)] + lorentz
    bad, flagged = [], []
    for g in lorentz:
        res = ct.check_mixed_3(ct.mixed_family(ct.LORENTZIAN, g), g)
        is3 = res.details["three_sasakian"]
        if is3:
            flagged.append(_gparams(g))
        if not res.ok:
            bad.append([_gparams(g), str(res.failures[0])])
        if is3 != (g.diag == (-1, 1, 1)):
            bad.append([_gparams(g), f"three_sasakian = {is3}"])
    if lorentz:
        out.append(_record("contact.mixed", case, [], _status(not bad),
                           {"family": ct.LORENTZIAN, "samples": len(lorentz),
                            "three_sasakian_at": flagged, "failures": bad}))
    riem = [g for g in metrics if g.lam > 0]
    if case is MetricCase.GENERIC:
        extra = [DiagonalMetric(*p) for p in sample_params(case, run.cfg.seed + 1, 4 * len(metrics), True)]
        riem = (riem + [g for g in extra if g.lam > 0])[: len(metrics)]
    bad = []
    for g in riem:
        res = ct.check_mixed_3(ct.mixed_family(ct.RIEMANNIAN, g), g)
        if not res.ok:
            bad.append([_gparams(g), str(res.failures[0])])
        if res.details["three_sasakian"]:
            bad.append([_gparams(g), "flagged 3-Sasakian"])
    if riem:
        out.append(_record("contact.mixed", case, [], _status(not bad),
                           {"family": ct.RIEMANNIAN, "samples": len(riem), "failures": bad}))
    return out


def stabilizer_check() -> tuple[bool, dict]:
    """Whether each triple of the Lorentzian family at (-1, 1, 1) equals
    one half of the corresponding stabilizer generator."""
    g = DiagonalMetric(-1, 1, 1)
    res = ct.check_mixed_3(ct.mixed_family(ct.LORENTZIAN, g), g)
    signs = res.details["stabilizer_signs"]
    return res.details["phi_is_half_stabilizer"], {"signs": signs}


def suite_stabilizer(run: _Run, case: MetricCase) -> list:
    ok, details = stabilizer_check()
    details["claim"] = "phi_l = U_l / 2 for l = 0, 1, 2"
    details["holds_up_to_sign"] = all(s in (1, -1) for s in details["signs"])
    return [_record("contact.stabilizer", case, _params(-1, 1, 1), _status(ok), details)]


# --------------------------------------------------------------------------
# Suites: the group model


GROUP_CHECKS = ("expansion", "connection", "pi0", "pi1", "piplus", "doublecover")


def _group_metrics(run: _Run, case: MetricCase):
    rng = run.rng(f"group:{case.value}")
    out = []
    for g in run.metrics(case, min(run.cfg.samples_per_case, 2)):
        if case is MetricCase.TIMELIKE:
            t = sample_t(rng, (g.lam + 2 * g.mu,))
        else:
            t = sample_t(rng, (2 * g.nu - g.mu,))
        out.append((g, t))
    return out


_GROUP_CASE = {MetricCase.TIMELIKE: gm.TIMELIKE, MetricCase.SPACELIKE_NU: gm.SPACELIKE}


def suite_group_expansion(run: _Run, case: MetricCase) -> list:
    if case not in _GROUP_CASE:
        return []
    kind = _GROUP_CASE[case]
    points = gm.sample_points(run.cfg.seed, run.cfg.group_points)
    out = []
    for g, t in _group_metrics(run, case):
        res = gm.verify_expansion(kind, g, t, points)
        literal = gm.verify_expansion(kind, g, t, points, corrected=False)
        misprints = literal.details["mismatched"]
        ok = res.ok and misprints == sorted(gm.DISPLAY_MISPRINTS[kind])
        ok = ok and res.details["points_checked"] >= min(run.cfg.group_points, MIN_IDENTITY_SAMPLES)
        out.append(_record("group.expansion", case, _gparams(g, t), _status(ok),
                           {**res.details, "failures": res.failures,
                            "literal_display_mismatches": misprints}))
    return out


def suite_group_connection(run: _Run, case: MetricCase) -> list:
    out = []
    if case in _GROUP_CASE:
        for g, t in _group_metrics(run, case):
            res = gm.connection_from_action(_GROUP_CASE[case], g, t)
            out.append(_record("group.connection", case, _gparams(g, t), _status(res.ok),
                               {**res.details, "failures": res.failures}))
    g = run.metrics(case, 1)[0]
    res = gm.connection_from_action(gm.TRIVIAL, g)
    out.append(_record("group.connection", case, _gparams(g), _status(res.ok),
                       {**res.details, "failures": res.failures}))
    return out


def suite_group_hopf(run: _Run, case) -> list:
    points = gm.sample_points(run.cfg.seed, run.cfg.group_points)
    out = []
    for which in ("pi0", "pi1", "piplus", "doublecover"):
        res = gm.hopf_checks(which, points, run.cfg.seed)
        out.append(_record("group.hopf", case, [], _status(res.ok),
                           {"map": which, "points": len(points), **res.details,
                            "failures": res.failures}))
    return out


# --------------------------------------------------------------------------
# Registry


@dataclass(frozen=True)
class Suite:
    run: Callable
    cases: tuple  # metric cases it applies to; empty means case-independent


_EVERY = tuple(TABLE1_ORDER)

SUITES = {
    "lie.closed-forms": Suite(suite_closed_forms, _EVERY),
    "lie.constant-curvature": Suite(suite_constant_curvature, (MetricCase.SYMMETRIC,)),
    "solver.catalog": Suite(suite_solver, _EVERY),
    "catalog.degenerations": Suite(suite_degenerations, _EVERY),
    "reductive.holonomy": Suite(suite_holonomy, _EVERY),
    "reductive.transvection": Suite(suite_transvection, _EVERY),
    "reductive.hatted": Suite(suite_hatted, _EVERY),
    "reductive.table2": Suite(suite_table2, (MetricCase.SYMMETRIC,)),
    "reductive.lemma": Suite(suite_lemma, (MetricCase.SYMMETRIC,)),
    "structures.certificates": Suite(suite_certificates, (MetricCase.SYMMETRIC, MetricCase.SPACELIKE_NU)),
    "contact.compatibility": Suite(suite_compatibility, _EVERY),
    "contact.metric-condition": Suite(suite_contact_metric, ()),
    "contact.sasakian": Suite(
        suite_sasakian, (MetricCase.TIMELIKE, MetricCase.SPACELIKE_NU, MetricCase.SPACELIKE_MU)
    ),
    "contact.parallel": Suite(suite_parallel, _EVERY),
    "contact.mixed": Suite(suite_mixed, _EVERY),
    "contact.stabilizer": Suite(suite_stabilizer, (MetricCase.SYMMETRIC,)),
    "group.expansion": Suite(suite_group_expansion, (MetricCase.TIMELIKE, MetricCase.SPACELIKE_NU)),
    "group.connection": Suite(suite_group_connection, _EVERY),
    "group.hopf": Suite(suite_group_hopf, ()),
}

TABLE_SUITES = {
    "table1": ("solver.catalog", "reductive.holonomy"),
    "table2": ("reductive.table2", "reductive.holonomy"),
    "table3": ("contact.compatibility", "contact.metric-condition"),
    "table4": ("contact.compatibility", "contact.metric-condition"),
    "table5": ("contact.parallel",),
}


def suites_for_tables(tables: Sequence[str]) -> tuple:
    ids = []
    for t in tables:
        for s in TABLE_SUITES[t]:
            if s not in ids:
                ids.append(s)
    return tuple(sorted(ids))


# --------------------------------------------------------------------------
# Report


@dataclass
class Report:
    version: int
    config: dict
    suites: list
    tables: dict
    sampled: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(r["status"] == FAIL for r in self.suites)

    @property
    def status(self) -> str:
        return _status(self.ok)

    def failures(self) -> list:
        return [r for r in self.suites if r["status"] == FAIL]

    def as_dict(self) -> dict:
        return {
            "version": self.version,
            "status": self.status,
            "config": self.config,
            "suites": self.suites,
            "sampled": self.sampled,
            "tables": self.tables,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        data.pop("status", None)
        return cls(**data)


def run_suite(cfg: Config) -> Report:
    """Run every selected suite over the configured cases and build the tables."""
    run = _Run(cfg)
    selected = cfg.suites or tuple(SUITES)
    records = []
    for sid in selected:
        suite = SUITES[sid]
        cases = [c for c in cfg.cases if c in suite.cases] if suite.cases else [ALL_CASES]
        for case in cases:
            start = time.perf_counter()
            recs = suite.run(run, case)
            log.info("%s [%s]: %d record(s) in %.2f s", sid, getattr(case, "value", case),
                     len(recs), time.perf_counter() - start)
            records.extend(recs)
    records.sort(key=lambda r: (r["id"], r["case"], json.dumps(r["params"])))
    tables = build_tables(records, cfg)
    return Report(REPORT_VERSION, cfg.as_dict(), records, tables, run.sampled)


# --------------------------------------------------------------------------
# Tables


def _records(records, sid, case=None):
    key = case.value if isinstance(case, MetricCase) else case
    return [r for r in records if r["id"] == sid and (case is None or r["case"] == key)]


def _all_pass(recs) -> bool:
    return bool(recs) and all(r["status"] != FAIL for r in recs)


def table1(records, cases) -> list:
    rows = []
    for case in TABLE1_ORDER:
        if case not in cases:
            continue
        solver = _records(records, "solver.catalog", case)
        hol = _records(records, "reductive.holonomy", case)
        expected = [f.value for f in families_for(case)]
        matched = sorted({f for r in solver for f in r["details"]["matched"]},
                         key=expected.index)
        dims = hol[0]["details"]["dimensions"] if hol else {}
        sampled = sum(r["details"]["sampled"] for r in solver)
        ok = _all_pass(solver) and _all_pass(hol) and matched == expected
        rows.append({
            "metric": case.value,
            "condition": CASE_CONDITIONS[case],
            "structures": expected,
            "matched": matched,
            "holonomy_dims": dims,
            "sampled_components": sampled,
            "status": _status(ok),
        })
    return rows


def table2(records, cases) -> list:
    if MetricCase.SYMMETRIC not in cases:
        return []
    hol = _records(records, "reductive.holonomy", MetricCase.SYMMETRIC)
    dims = hol[0]["details"]["dimensions"] if hol else {}
    by_family = {r["details"]["family"]: r for r in _records(records, "reductive.table2")}
    rows = []
    groups = (
        ("Svol", (Family.SVOL,)),
        ("Slambda", (Family.SLAMBDA,)),
        ("Smu", (Family.SMU,)),
        ("Snull", (Family.SNULL_MINUS, Family.SNULL_PLUS)),
    )
    for label, fams in groups:
        recs = [by_family[f.value] for f in fams if f.value in by_family]
        rows.append({
            "structure": label,
            "decomposition": TABLE2_CASES[fams[0]],
            "c": {f.value: C_FORMULAS[f] for f in fams},
            "holonomy_dim": {f.value: dims.get(f.value) for f in fams},
            "status": _status(len(recs) == len(fams) and _all_pass(recs) and _all_pass(hol)
                              and all(dims.get(f.value) == [HOLONOMY_DIMS[f]] for f in fams)),
        })
    rows.append({
        "structure": "S0",
        "decomposition": "trivial (m = su(1,1), h = 0)",
        "c": {},
        "holonomy_dim": {"S0": dims.get("S0")},
        "status": _status(_all_pass(hol) and dims.get("S0") == [0]),
    })
    return rows


_COMPATIBLE_TEXT = {
    (ct.CONTACT, 0): "any",
    (ct.CONTACT, 1): "lambda > 0",
    (ct.CONTACT, 2): "lambda > 0",
    (ct.PARACONTACT, 1): "lambda < 0",
    (ct.PARACONTACT, 2): "lambda < 0",
}
_CONDITION_TEXT = {
    (ct.CONTACT, 0): "|lambda| = mu nu",
    (ct.CONTACT, 1): "mu = lambda nu",
    (ct.CONTACT, 2): "nu = lambda mu",
    (ct.PARACONTACT, 1): "mu = -lambda nu",
    (ct.PARACONTACT, 2): "nu = -lambda mu",
}


def _contact_rows(records, kind) -> list:
    compat = _records(records, "contact.compatibility")
    cond = {r["details"]["triple"]: r for r in _records(records, "contact.metric-condition")}
    rows = []
    for k, i in CONTACT_KINDS:
        if k != kind:
            continue
        key = f"{k}{i}"
        compat_bad = [m for r in compat for m in r["details"]["mismatches"]
                      if m[0] == ("phi" if k == ct.CONTACT else "phitilde") + str(i)]
        crec = cond.get(key)
        ok = bool(compat) and not compat_bad and crec is not None and crec["status"] == PASS
        rows.append({
            "triple": ("phi" if k == ct.CONTACT else "phitilde") + str(i),
            "compatible_when": _COMPATIBLE_TEXT[(k, i)],
            "contact_metric_when": _CONDITION_TEXT[(k, i)],
            "status": _status(ok),
        })
    return rows


def table5(records, cases) -> list:
    rows = []
    for case in (MetricCase.SYMMETRIC, MetricCase.TIMELIKE, MetricCase.SPACELIKE_NU,
                 MetricCase.SPACELIKE_MU):
        if case not in cases:
            continue
        recs = _records(records, "contact.parallel", case)
        passing = [tuple(p) for r in recs for p in r["details"]["passing"]]
        contact_pairs = sorted({p for p in passing if p[1].startswith("phi") and not p[1].startswith("phitilde")})
        para_pairs = sorted({p for p in passing if p[1].startswith("phitilde")})
        rows.append({
            "metric": case.value,
            "condition": CASE_CONDITIONS[case],
            "almost_contact": [list(p) for p in contact_pairs],
            "almost_paracontact": [list(p) for p in para_pairs],
            "status": _status(_all_pass(recs)),
        })
    return rows


def build_tables(records, cfg: Config) -> dict:
    cases = set(cfg.cases)
    builders = {
        "table1": lambda: table1(records, cases),
        "table2": lambda: table2(records, cases),
        "table3": lambda: _contact_rows(records, ct.CONTACT),
        "table4": lambda: _contact_rows(records, ct.PARACONTACT),
        "table5": lambda: table5(records, cases),
    }
    out = {}
    for tid in cfg.tables:
        needed = TABLE_SUITES[tid]
        if any(_records(records, s) for s in needed):
            out[tid] = builders[tid]()
    return out


# --------------------------------------------------------------------------
# Emission

TABLE_TITLES = {
    "table1": "Table 1: metric cases and their homogeneous structures",
    "table2": "Table 2: structures on the symmetric metric and their decompositions",
    "table3": "Table 3: almost contact structures, compatibility and contact-metric condition",
    "table4": "Table 4: almost paracontact structures and the paracontact-metric condition",
    "table5": "Table 5: homogeneous almost (para)contact metric structures",
}


def _badge(status: str) -> str:
    return f"**{status}**"


def _cell(v) -> str:
    if isinstance(v, dict):
        return ", ".join(f"{k}: {_cell(x)}" for k, x in v.items()) or "-"
    if isinstance(v, list):
        return ", ".join(_cell(x) for x in v) or "-"
    return str(v)


_SUBJECT_KEYS = ("family", "case", "map", "certificate", "triple", "formula")


def to_markdown(report: Report) -> str:
    lines = [f"# Verification report {_badge(report.status)}", ""]
    cfg = report.config
    if "mode" in cfg:
        lines.append(f"Mode {cfg['mode']} at (lambda, mu, nu) = ({', '.join(cfg['metric'])}), "
                     f"seed {cfg['seed']}.")
    else:
        lines.append(f"Seed {cfg['seed']}, {cfg['samples_per_case']} samples per case, "
                     f"{cfg['identity_sample_count']} identity samples, cases: "
                     f"{', '.join(cfg['cases'])}.")
    lines.append("")
    for tid in TABLE_IDS:
        rows = report.tables.get(tid)
        if rows is None:
            continue
        lines += [f'<a id="{tid}"></a>', f"## {TABLE_TITLES[tid]}", ""]
        if not rows:
            lines += ["(no rows for the selected cases)", ""]
            continue
        cols = [k for k in rows[0] if k != "status"] + ["status"]
        lines.append("| " + " | ".join(cols) + " |")
        lines.append("|" + "---|" * len(cols))
        for row in rows:
            cells = [_cell(row[c]) if c != "status" else _badge(row[c]) for c in cols]
            lines.append("| " + " | ".join(c.replace("|", "\\|") for c in cells) + " |")
        lines.append("")
    lines += ["## Suites", "", "| suite | case | subject | params | status |", "|---|---|---|---|---|"]
    for r in report.suites:
        d = r["details"]
        subject = next((str(d[k]) for k in _SUBJECT_KEYS if k in d), "-")
        lines.append(f"| {r['id']} | {r['case']} | {subject} | {' '.join(r['params']) or '-'} "
                     f"| {_badge(r['status'])} |")
    lines.append("")
    if report.sampled:
        lines += ["## Sampled (uncertified) components", ""]
        for s in report.sampled:
            lines.append(f"- {s['case']} at ({', '.join(s['params'])}): {s['component']}")
        lines.append("")
    fails = report.failures()
    if fails:
        lines += ["## Failures", ""]
        for r in fails:
            lines.append(f"- {r['id']} [{r['case']}]: {json.dumps(r['details'], sort_keys=True)}")
        lines.append("")
    return "\n".join(lines)


def emit(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return report.to_json()
    if fmt == "markdown":
        return to_markdown(report)
    raise ValueError(f"unknown format {fmt!r}")


def emit_tables(report: Report, fmt: str, path: str | None) -> str:
    """Render the report; write it when ``path`` is given.  Returns the text."""
    text = emit(report, fmt)
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc}") from exc
    return text


# --------------------------------------------------------------------------
# Single-point modes


def solve_point(g: DiagonalMetric, seed: int = 0) -> Report:
    """Solve the system at one metric and match the result to the catalog."""
    cfg = Config(cases=(MetricCase.classify(*g.diag),), samples_per_case=1, seed=seed,
                 suites=("solver.catalog",), tables=())
    run = _Run(cfg)
    case = cfg.cases[0]
    comps, system = run.solve(g)
    rep = match_components(comps, g, seed=seed, system=system)
    details = {
        "components": [_component_summary(m) for m in rep.components],
        "expected": [f.value for f in families_for(case)],
        "missing": [f.value for f in rep.missing],
        "failures": rep.failures,
    }
    if not rep.ok:
        status = FAIL
    elif rep.sampled:
        status = SAMPLED_STATUS
    else:
        status = PASS
    sampled = [{"case": case.value, "params": _gparams(g), "component": c.describe()}
               for c in rep.sampled]
    config = {"mode": "solve", "metric": _gparams(g), "seed": seed}
    return Report(REPORT_VERSION, config,
                  [_record("solver.point", case, _gparams(g), status, details)], {}, sampled)


def group_point(g: DiagonalMetric, t, which: Sequence[str], points: int, seed: int = 0) -> Report:
    """Group-model checks at one metric; the action model follows the metric case."""
    case = MetricCase.classify(*g.diag)
    kind = _GROUP_CASE.get(case)
    if kind is not None and t is None and {"expansion", "connection"} & set(which):
        raise ValueError("this metric case needs a family parameter t")
    pts = gm.sample_points(seed, points)
    records = []
    for w in which:
        if w == "expansion":
            if kind is None:
                raise ValueError("the expansion needs a timelike or spacelike_nu metric")
            res = gm.verify_expansion(kind, g, t, pts)
            records.append(_record("group.expansion", case, _gparams(g, t), _status(res.ok),
                                   {**res.details, "failures": res.failures}))
        elif w == "connection":
            res = gm.connection_from_action(kind or gm.TRIVIAL, g, t if kind else None)
            records.append(_record("group.connection", case, _gparams(g), _status(res.ok),
                                   {**res.details, "failures": res.failures}))
        else:
            res = gm.hopf_checks(w, pts, seed)
            records.append(_record("group.hopf", ALL_CASES, [], _status(res.ok),
                                   {"map": w, "points": len(pts), **res.details,
                                    "failures": res.failures}))
    config = {"mode": "group", "metric": _gparams(g), "t": None if t is None else format_rational(t),
              "which": list(which), "points": points, "seed": seed}
    return Report(REPORT_VERSION, config, records, {})
