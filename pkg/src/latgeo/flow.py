"""Expand/contract deformation toward the well-rounded locus.

The flow fixes the subspace spanned by the current minimal vectors, dilates
the form on it by e^{2t}, and shrinks the orthogonal complement at the unique
volume-preserving rate, until an additional lattice vector reaches the moving
systole level.  Iterating raises the stratum to n in at most n-1 events.

Everything acts on Gram matrices through the intrinsic projector formula, so
the construction commutes with integer changes of basis by design.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from latgeo.core import (
    EPS_SYS,
    GramMatrix,
    _echelon_basis,
    _in_span,
    _short_with_norms,
    as_gram,
    span_rank,
    systole_data,
)
from latgeo.errors import IllConditionedProjectorError, NoEventError

# Looser band when recomputing the minimal set right after an event: the new
# vectors sit at a near-tie produced by the event-time computation.
EPS_BAND_POST = 1e-7

# Adaptive horizon for event candidates: the start is scaled so the first
# enumeration radius is 4x the systole regardless of stratum, then doubled on
# failure up to the hard cap.
T_MAX_CAP = 64.0

_TIE_TOL = 1e-12


@dataclass(frozen=True)
class FlowEvent:
    """One crossing: at time t_star the listed vectors join the minimal set."""

    t_star: float
    new_vectors: np.ndarray
    stratum_before: int
    stratum_after: int


@dataclass
class RetractionTrace:
    """Full run of the flow: start Gram, ordered events, final well-rounded Gram.

    ``checkpoints[i]`` is the Gram immediately after ``events[i]``.
    """

    start: GramMatrix
    events: list
    final: GramMatrix
    checkpoints: list = field(default_factory=list)


def _projector_form(q, v):
    """Gram Pi of the q-orthogonal projection onto the column span of v."""
    qm = q.entries
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or not 1 <= v.shape[1] < q.n:
        raise ValueError("V must be n x k with 1 <= k < n")
    qv = qm @ v
    m = v.T @ qv
    try:
        sol = np.linalg.solve(m, qv.T)
    except np.linalg.LinAlgError:
        raise IllConditionedProjectorError("V^T Q V is numerically singular")
    if not np.all(np.isfinite(sol)):
        raise IllConditionedProjectorError("V^T Q V is numerically singular")
    return qv @ sol


def flow_gram(q, v, t):
    """Deformed Gram e^{2t} Pi + e^{-2tk/(n-k)} (Q - Pi); volume preserving."""
    q = as_gram(q)
    v = np.asarray(v)
    if v.ndim == 1:
        v = v.reshape(-1, 1)
    k = v.shape[1]
    pi = _projector_form(q, v)
    rest = q.entries - pi
    qt = math.exp(2.0 * t) * pi + math.exp(-2.0 * t * k / (q.n - k)) * rest
    return GramMatrix((qt + qt.T) / 2.0)


def candidate_horizon(q, k, t_max):
    """Enumeration radius guaranteeing completeness of event detection.

    Any w that can reach the moving systole level before t_max satisfies
    w^T Q w <= e^{2 t_max n/(n-k)} * systole_sq(Q), because the flow shrinks
    no squared length faster than e^{-2tk/(n-k)}.
    """
    q = as_gram(q)
    if not 1 <= k < q.n:
        raise ValueError("k must satisfy 1 <= k < n")
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    s2 = systole_data(q).systole_sq
    return math.exp(2.0 * t_max * q.n / (q.n - k)) * s2


def _minimal_span(q, band=EPS_SYS):
    """Minimal set, its exact-span data, and an independent column basis V."""
    mvs = systole_data(q, band=band)
    picked, echelon = _echelon_basis(mvs.vectors)
    v = mvs.vectors[picked].T.astype(np.int64)
    return mvs, echelon, v


def _first_event_data(q, band=EPS_SYS):
    """Locate the earliest crossing; returns (event, V, minimal set, Gram after)."""
    q = as_gram(q)
    mvs, echelon, v = _minimal_span(q, band=band)
    k = v.shape[1]
    if k >= q.n:
        raise ValueError("lattice is already well-rounded")
    s2 = mvs.systole_sq
    pi = _projector_form(q, v)
    rate = q.n / (q.n - k)

    t_max = math.log(2.0) / rate
    while True:
        radius = math.exp(2.0 * t_max * rate) * s2
        cands, vals = _short_with_norms(q, radius, cap=1_000_000)
        outside = np.array(
            [not _in_span(echelon, w) for w in cands], dtype=bool
        )
        cands, vals = cands[outside], vals[outside]
        if cands.shape[0] > 0:
            a = np.einsum("ij,jk,ik->i", cands, pi, cands)
            b = np.maximum(vals - a, 0.0)
            # Crossing times: a vector with a >= s2 keeps ratio > 1 forever;
            # otherwise e^{2 t n/(n-k)} = b / (s2 - a) has a unique root.
            with np.errstate(divide="ignore", invalid="ignore"):
                t_cand = np.where(
                    a < s2 * (1.0 - 1e-15),
                    np.log(np.maximum(b, 1e-300) / (s2 - a)) / (2.0 * rate),
                    np.inf,
                )
            t_star = float(np.min(t_cand))
            if t_star <= 0.0:
                # impossible geometrically (candidates are strictly longer
                # than the systole); reaching here means broken numerics
                raise NoEventError("nonpositive crossing time computed")
            if t_star <= t_max + _TIE_TOL:
                hit = t_cand <= t_star + _TIE_TOL
                new = cands[hit]
                order = np.lexsort(new.T[::-1])
                event_vectors = new[order]
                q_after = flow_gram(q, v, t_star)
                after = systole_data(q_after, band=EPS_BAND_POST)
                event = FlowEvent(
                    t_star=t_star,
                    new_vectors=event_vectors,
                    stratum_before=k,
                    stratum_after=span_rank(after),
                )
                return event, v, mvs, q_after
        t_max *= 2.0
        if t_max > T_MAX_CAP:
            raise NoEventError("no systole crossing found before horizon cap")


def first_event(q):
    """Earliest time at which a vector outside the minimal span ties the systole."""
    event, _, _, _ = _first_event_data(q)
    return event


def retract_step(q, band=EPS_SYS):
    """Flow to the first event; returns (deformed Gram, event)."""
    event, _, _, q_after = _first_event_data(q, band=band)
    return q_after, event


def well_rounded_retract(q):
    """Iterate retract_step until the minimal vectors span R^n.

    Steps after the first read the minimal set with the looser post-event
    band, so the strata recorded across consecutive events stay consistent.
    """
    q = as_gram(q)
    current = q
    events = []
    checkpoints = []
    for _ in range(q.n):
        band = EPS_BAND_POST if events else EPS_SYS
        mvs = systole_data(current, band=band)
        if span_rank(mvs) == q.n:
            break
        current, event = retract_step(current, band=band)
        events.append(event)
        checkpoints.append(current)
    else:
        raise NoEventError("retraction did not reach the well-rounded locus")
    return RetractionTrace(start=q, events=events, final=current, checkpoints=checkpoints)
