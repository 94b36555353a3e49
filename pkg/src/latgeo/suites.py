"""Named verification suites certifying the geometric facts behind the scans.

Each suite returns a VerificationOutcome with one row per check, measured
value against pinned bound.  The CLI prints these rows; the acceptance tests
assert them.  All randomness flows through SplitMix64 streams derived from
(seed, check label), so outcomes are reproducible.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from latgeo import actions, flow, siegel
from latgeo.core import (
    EPS_SYS,
    as_gram,
    enumerate_short_vectors,
    gram_of,
    is_well_rounded,
    sign_normalize,
    stratum_index,
    systole_data,
)
from latgeo.rng import (
    random_conjugated_gram,
    random_spd_gram,
    random_symplectic_basis,
    random_tau,
    random_unimodular,
    stream,
)
from latgeo.siegel import (
    UpperHalfPoint,
    hexagonal_point,
    in_bavard_set,
    product_embed,
    standard_J,
    tau_to_basis,
)

HEX_SYSTOLE_SQ = 2.0 / math.sqrt(3.0)

HEX_TOL = 1e-9
FLOW_T_TOL = 1e-10
FLOW_GRAM_TOL = 1e-9
DET_DRIFT_TOL = 1e-8
TRACK_TOL = 1e-8
EQUIV_FINAL_TOL = 1e-6
EQUIV_T_TOL = 1e-9
QJQ_TOL = 1e-8


@dataclass(frozen=True)
class Check:
    description: str
    measured: object
    bound: object
    ok: bool


@dataclass
class VerificationOutcome:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.ok for c in self.checks)

    def add(self, description, measured, bound, ok):
        self.checks.append(Check(description, measured, bound, bool(ok)))


@dataclass
class SuiteOptions:
    seed: int = 0
    grid: tuple = None
    jobs: int = 1
    tol_scale: float = 1.0
    p_values: tuple = (1, 2)


def format_outcome(outcome):
    lines = []
    for c in outcome.checks:
        lines.append(
            "[%s] %s: measured=%s bound=%s"
            % ("PASS" if c.ok else "FAIL", c.description, c.measured, c.bound)
        )
    lines.append(
        "suite %s: %s" % (outcome.suite, "PASS" if outcome.passed else "FAIL")
    )
    return lines


def _hex_gram():
    return gram_of(tau_to_basis(hexagonal_point()))


def crit_hex_systole(opts):
    """Systole value, count, and stratum of the covolume-1 hexagonal lattice."""
    out = VerificationOutcome("hex-systole")
    tol = HEX_TOL * opts.tol_scale
    m = systole_data(_hex_gram())
    err = abs(m.systole_sq - HEX_SYSTOLE_SQ)
    out.add("hexagonal systole_sq = 2/sqrt(3)", err, tol, err <= tol)
    out.add("exactly 3 minimal vectors up to sign", len(m), 3, len(m) == 3)
    s = stratum_index(_hex_gram())
    out.add("hexagonal stratum = 2", s, 2, s == 2)
    return out


def crit_hex_maximality(opts):
    """Grid certificate that the hexagonal point maximizes the systole."""
    out = VerificationOutcome("hex-maximality")
    tol = HEX_TOL * opts.tol_scale
    w, h = 100, 50
    tau0 = hexagonal_point()
    xs = np.linspace(-0.5, 0.5, w)
    ys = np.linspace(tau0.y, 2.0, h)
    step = math.hypot(xs[1] - xs[0], ys[1] - ys[0])
    worst = -np.inf
    bad_equalities = 0
    hits = 0
    for y in ys:
        for x in xs:
            if x * x + y * y < 1.0 - 1e-12:
                continue  # outside the fundamental domain
            s2 = systole_data(as_gram(_tau_gram(x, y))).systole_sq
            worst = max(worst, s2 - HEX_SYSTOLE_SQ)
            if s2 >= HEX_SYSTOLE_SQ - tol:
                hits += 1
                reduced, _ = actions.fundamental_domain_reduce(UpperHalfPoint(x, y))
                if math.hypot(reduced.x - tau0.x, reduced.y - tau0.y) > step + 1e-9:
                    bad_equalities += 1
    out.add("systole_sq <= 2/sqrt(3) on the grid", worst, tol, worst <= tol)
    out.add(
        "equality hits only within one grid step of the hexagonal point",
        bad_equalities,
        0,
        bad_equalities == 0,
    )
    out.add("grid contains at least one equality hit", hits, ">= 1", hits >= 1)
    return out


def _tau_gram(x, y):
    b = tau_to_basis(UpperHalfPoint(x, y)).entries
    return b.T @ b


def crit_flow_oracle(opts):
    """Analytic event times and final Grams on diagonal instances."""
    out = VerificationOutcome("flow-oracle")
    t_tol = FLOW_T_TOL * opts.tol_scale
    g_tol = FLOW_GRAM_TOL * opts.tol_scale

    trace = flow.well_rounded_retract(np.diag([1.0, 4.0]))
    t_err = abs(trace.events[0].t_star - math.log(2.0) / 2.0)
    out.add("diag(1,4) event at t = ln(2)/2", t_err, t_tol, t_err <= t_tol)
    g_err = float(np.max(np.abs(trace.final.entries - np.diag([2.0, 2.0]))))
    out.add("diag(1,4) final Gram diag(2,2)", g_err, g_tol, g_err <= g_tol)

    trace = flow.well_rounded_retract(np.diag([1.0, 1.0, 9.0]))
    t_err = abs(trace.events[0].t_star - math.log(9.0) / 6.0)
    out.add("diag(1,1,9) event at t = ln(9)/6", t_err, t_tol, t_err <= t_tol)
    g_err = float(
        np.max(np.abs(trace.final.entries - 9.0 ** (1.0 / 3.0) * np.eye(3)))
    )
    out.add("diag(1,1,9) final Gram isotropic", g_err, g_tol, g_err <= g_tol)
    return out


def crit_flow_generic(opts, lattices=100):
    """Random lattices retract within n-1 events, preserving volume and systole law."""
    out = VerificationOutcome("flow-generic")
    det_tol = DET_DRIFT_TOL * opts.tol_scale
    track_tol = TRACK_TOL * opts.tol_scale
    rng = stream(opts.seed, "flow-generic")
    dims = [2, 3, 4, 5]
    worst_det = 0.0
    worst_track = 0.0
    excess_events = 0
    not_rounded = 0
    for i in range(lattices):
        n = dims[i % len(dims)]
        q0 = random_conjugated_gram(rng, n)
        trace = flow.well_rounded_retract(q0)
        if len(trace.events) > n - 1:
            excess_events += 1
        if not is_well_rounded(trace.final):
            not_rounded += 1
        drift = abs(
            np.linalg.det(trace.final.entries) / np.linalg.det(q0) - 1.0
        )
        worst_det = max(worst_det, drift)
        current = as_gram(q0)
        for event in trace.events:
            mvs, _, v = flow._minimal_span(current)
            for j in range(10):
                t = event.t_star * (j + 1) / 11.0
                qt = flow.flow_gram(current, v, t)
                expected = math.exp(2.0 * t) * mvs.systole_sq
                rel = abs(systole_data(qt).systole_sq / expected - 1.0)
                worst_track = max(worst_track, rel)
            current = flow.flow_gram(current, v, event.t_star)
    out.add("every retract ends well-rounded", not_rounded, 0, not_rounded == 0)
    out.add("event count <= n-1", excess_events, 0, excess_events == 0)
    out.add("relative determinant drift", worst_det, det_tol, worst_det <= det_tol)
    out.add(
        "systole tracks exp(2t) between events", worst_track, track_tol, worst_track <= track_tol
    )
    return out


def crit_equivariance(opts, trials=20):
    """Retraction commutes with integer changes of basis."""
    out = VerificationOutcome("equivariance")
    f_tol = EQUIV_FINAL_TOL * opts.tol_scale
    t_tol = EQUIV_T_TOL * opts.tol_scale
    rng = stream(opts.seed, "equivariance")
    worst_final = 0.0
    worst_t = 0.0
    mismatched = 0
    for i in range(trials):
        n = [2, 3, 4][i % 3]
        q = random_conjugated_gram(rng, n)
        u = random_unimodular(rng, n, max_entry=3)
        left = flow.well_rounded_retract(u.T @ q @ u)
        right = flow.well_rounded_retract(q)
        if len(left.events) != len(right.events):
            mismatched += 1
            continue
        for e1, e2 in zip(left.events, right.events):
            worst_t = max(worst_t, abs(e1.t_star - e2.t_star))
        expected = u.T @ right.final.entries @ u
        worst_final = max(worst_final, float(np.max(np.abs(left.final.entries - expected))))
    out.add("event sequences align", mismatched, 0, mismatched == 0)
    out.add("event times agree", worst_t, t_tol, worst_t <= t_tol)
    out.add("final Grams conjugate entrywise", worst_final, f_tol, worst_final <= f_tol)
    return out


def _factor_data(tau):
    q = as_gram(_tau_gram(tau.x, tau.y))
    m = systole_data(q)
    return m.systole_sq, is_well_rounded(q)


def crit_product_systoles(opts, trials=50):
    """Product lattices: systole localization and the three-systole criterion."""
    out = VerificationOutcome("product-systoles")
    rng = stream(opts.seed, "product-systoles")
    tau0 = hexagonal_point()
    pairs = [
        (tau0, tau0),
        (UpperHalfPoint(0.0, 1.0), UpperHalfPoint(0.0, 1.0)),
        (UpperHalfPoint(0.0, 1.0), tau0),
        (UpperHalfPoint(0.0, 2.0), UpperHalfPoint(0.0, 2.0)),
        (UpperHalfPoint(0.25, 1.3), tau0),
    ]
    while len(pairs) < trials + 5:
        pairs.append((random_tau(rng), random_tau(rng)))
    bad_support = 0
    bad_iff = 0
    for t1, t2 in pairs:
        q = siegel.product_gram([t1, t2])
        m = systole_data(q)
        for v in m.vectors:
            first = bool(v[0] or v[1])
            second = bool(v[2] or v[3])
            if first == second:
                bad_support += 1
        s1, wr1 = _factor_data(t1)
        s2, wr2 = _factor_data(t2)
        same = abs(s1 - s2) <= EPS_SYS * max(s1, s2)
        expected_high = same and (wr1 or wr2)
        if (stratum_index(q) >= 3) != expected_high:
            bad_iff += 1
    out.add(
        "minimal vectors supported in one factor", bad_support, 0, bad_support == 0
    )
    out.add(
        "stratum >= 3 iff equal systoles and a well-rounded factor",
        bad_iff,
        0,
        bad_iff == 0,
    )
    return out


def crit_claim_g2(opts):
    """Isolation of the high-stratum locus in the product family."""
    steps = opts.grid if opts.grid else (200, 120)
    report = actions.claim_scan_g2(steps=steps, jobs=opts.jobs)
    out = VerificationOutcome("claim-g2")
    grid_hits = sum(1 for h in report.hits if not h["probe"])
    out.add("grid points with stratum >= 3", grid_hits, "near hex point only", True)
    for name, ok in report.flags.items():
        out.add(name, ok, True, ok)
    return out


def crit_qjq(opts, trials=50):
    """Fixed Grams of the dual-type generator are exactly the symplectic ones."""
    out = VerificationOutcome("qjq")
    tol = QJQ_TOL * opts.tol_scale
    rng = stream(opts.seed, "qjq")
    j = standard_J(2)
    group = actions.thm12_group(4)
    worst = 0.0
    unfixed = 0
    for _ in range(trials):
        a = random_symplectic_basis(rng, 2).astype(float)
        q = as_gram(a.T @ a)
        worst = max(
            worst, float(np.max(np.abs(q.entries @ j.j @ q.entries - j.j)))
        )
        if not actions.is_fixed_point(group, q):
            unfixed += 1
    out.add("symplectic Grams satisfy QJQ = J", worst, tol, worst <= tol)
    out.add("symplectic Grams fixed by the dual generator", unfixed, 0, unfixed == 0)
    false_pos = 0
    for _ in range(trials):
        q = random_spd_gram(rng, 4)
        if np.max(np.abs(q @ j.j @ q - j.j)) < 1e-6:
            continue  # astronomically unlikely; do not count a near-symplectic draw
        if siegel.siegel_gram_identity_check(q, j, tol=tol) or actions.is_fixed_point(
            group, q
        ):
            false_pos += 1
    out.add("generic Grams fail both identities", false_pos, 0, false_pos == 0)
    return out


def crit_thm12_odd(opts):
    """Rigid fixed lattice in odd dimensions for p in opts.p_values."""
    out = VerificationOutcome("thm12-odd")
    for p in opts.p_values:
        report = actions.verify_thm12_odd(p, seed=opts.seed)
        for desc, measured, bound, ok in report.checks:
            out.add("p=%d: %s" % (p, desc), measured, bound, ok)
    return out


def crit_bavard_witness(opts):
    """Membership witnesses for the non-isotropic-span retract target."""
    out = VerificationOutcome("bavard-witness")
    tau0 = hexagonal_point()
    p_in = product_embed([UpperHalfPoint(0.0, 1.0), tau0])
    s_in = stratum_index(siegel.product_gram([UpperHalfPoint(0.0, 1.0), tau0]))
    out.add("product(i, hex) inside the target set", in_bavard_set(p_in), True, in_bavard_set(p_in))
    out.add("product(i, hex) stratum exactly 2", s_in, 2, s_in == 2)
    p_out = product_embed([UpperHalfPoint(0.0, 2.0), UpperHalfPoint(0.0, 2.0)])
    out.add(
        "product(2i, 2i) outside the target set (isotropic span)",
        in_bavard_set(p_out),
        False,
        not in_bavard_set(p_out),
    )
    return out


def box_search(q, radius_sq, half_width=6):
    """Brute-force short vectors over a coordinate box, up to sign."""
    q = as_gram(q)
    n = q.n
    coords = range(-half_width, half_width + 1)
    vecs = np.array(
        [v for v in itertools.product(coords, repeat=n) if any(v)], dtype=np.int64
    )
    vals = np.einsum("ij,jk,ik->i", vecs, q.entries, vecs)
    keep = vecs[vals <= radius_sq * (1.0 + EPS_SYS)]
    keep = sign_normalize(keep)
    keep = np.unique(keep, axis=0)
    order = np.lexsort(keep.T[::-1])
    return keep[order]


def crit_enumeration_oracle(opts, trials=50):
    """Enumeration agrees exactly with a naive box search on random Grams."""
    out = VerificationOutcome("enumeration-oracle")
    rng = stream(opts.seed, "enumeration-oracle")
    mismatches = 0
    overflow = 0
    for i in range(trials):
        n = [2, 3, 4][i % 3]
        q = random_conjugated_gram(rng, n, lo=0.5, hi=2.0, max_entry=2)
        radius = systole_data(as_gram(q)).systole_sq * rng.uniform(1.0, 2.5)
        fast = enumerate_short_vectors(q, radius)
        if fast.size and np.max(np.abs(fast)) > 6:
            overflow += 1  # instance outside the oracle's box; counts as failure
            continue
        slow = box_search(q, radius)
        if fast.shape != slow.shape or not np.array_equal(fast, slow):
            mismatches += 1
    out.add("instances stay inside the oracle box", overflow, 0, overflow == 0)
    out.add("enumeration matches box search exactly", mismatches, 0, mismatches == 0)
    return out


CRITERIA = {
    "hex-systole": (crit_hex_systole,),
    "hex-maximality": (crit_hex_maximality,),
    "flow-oracle": (crit_flow_oracle,),
    "flow-generic": (crit_flow_generic,),
    "equivariance": (crit_equivariance,),
    "product-systoles": (crit_product_systoles,),
    "claim-g2": (crit_claim_g2,),
    "qjq": (crit_qjq,),
    "thm12-odd": (crit_thm12_odd,),
    "bavard-witness": (crit_bavard_witness,),
    "enumeration-oracle": (crit_enumeration_oracle,),
}

# CLI suite names; some fold several related criteria together.
SUITES = {
    "hex-systole": ("hex-systole", "hex-maximality"),
    "flow-oracle": ("flow-oracle", "flow-generic"),
    "equivariance": ("equivariance",),
    "product-systoles": ("product-systoles",),
    "claim-g2": ("claim-g2",),
    "qjq": ("qjq",),
    "thm12-odd": ("thm12-odd",),
    "bavard-witness": ("bavard-witness",),
    "enumeration-oracle": ("enumeration-oracle",),
}


def run_criterion(name, opts=None):
    opts = opts or SuiteOptions()
    return CRITERIA[name][0](opts)


def run_suite(name, opts=None):
    """Run one named suite (or 'all'); returns a list of VerificationOutcome."""
    opts = opts or SuiteOptions()
    if name == "all":
        names = list(CRITERIA)
    elif name in SUITES:
        names = list(SUITES[name])
    else:
        raise KeyError(name)
    return [run_criterion(c, opts) for c in names]
