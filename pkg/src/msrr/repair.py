"""Single-node repair with minimal cross-rack traffic.

Each helper rack collapses its u node vectors into one aggregate (a fixed
locator-weighted sum) and ships only the beta coordinates whose digit owned
by the host rack is zero.  The replacement node walks those coordinates in
order of increasing zero-digit count: at every coordinate the selected parity
blocks yield a power-moment system over distinct evaluation points (the host
rack point, the extra points, and the rack points of non-helper racks) whose
unknowns are the host aggregate at the coordinate's digit siblings plus the
non-helper aggregates at the coordinate itself.  Coordinates with more zero
digits additionally reference sibling values at strictly lower levels, all of
which are already known by then; this is why processing levels in ascending
order closes the recursion.  The engine only ever sees helper messages and
host-rack survivors, so reading beyond the allowed beta symbols per helper
node is structurally impossible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .codec import Codec, Stripe
from .errors import InternalError, SingularMatrixError
from .params import CodeParams


@dataclass(frozen=True)
class RepairJob:
    """A failed node (e_star, g_star) and the d_bar helper racks serving it."""

    e_star: int
    g_star: int
    helpers: tuple[int, ...]

    @classmethod
    def create(cls, params: CodeParams, e_star: int, g_star: int,
               helpers=None) -> "RepairJob":
        params.node_index(e_star, g_star)
        if helpers is None:
            # Deterministic default: the d_bar smallest racks besides the host.
            helpers = [e for e in range(params.n_bar) if e != e_star][:params.d_bar]
        helpers = tuple(sorted(int(e) for e in helpers))
        if len(set(helpers)) != params.d_bar:
            raise ValueError(
                f"need {params.d_bar} distinct helper racks, got {helpers}")
        for e in helpers:
            if not 0 <= e < params.n_bar or e == e_star:
                raise ValueError(f"invalid helper rack {e}")
        return cls(e_star=e_star, g_star=g_star, helpers=helpers)

    def digit_position(self, params: CodeParams) -> int:
        return params.rack_digit(self.e_star)


@dataclass
class RepairTranscript:
    """Everything a repair produced, with exact symbol accounting.

    Symbol counts are per stripe; stripe_count says how many stripes the
    transcript covers when messages carried a batch axis.
    """

    job: RepairJob
    messages: dict[int, np.ndarray]
    recovered: np.ndarray
    side_aggregates: dict[int, np.ndarray] = dc_field(default_factory=dict)
    cross_rack_symbols: int = 0
    intra_rack_symbols: int = 0
    accessed_symbols_per_helper_rack: int = 0
    stripe_count: int = 1


def rack_aggregate(codec: Codec, rack_vectors: np.ndarray, e: int,
                   e_star: int) -> np.ndarray:
    """Locator-weighted sum of rack e's node vectors, with the weights the
    repair of rack e_star uses (exponent = e_star's residue)."""
    params, p = codec.params, codec.p
    rack_vectors = np.asarray(rack_vectors, dtype=np.int64) % p
    if rack_vectors.shape[:2] != (params.u, params.alpha):
        raise ValueError(
            f"rack needs shape ({params.u}, {params.alpha}, ...), got {rack_vectors.shape}")
    res = params.rack_residue(e_star)
    out = np.zeros(rack_vectors.shape[1:], dtype=np.int64)
    for g in range(params.u):
        weight = pow(codec.constants.locators[e][g], res, p)
        out = (out + weight * rack_vectors[g]) % p
    return out


def helper_message(codec: Codec, rack_vectors: np.ndarray, e: int,
                   job: RepairJob) -> np.ndarray:
    """The beta symbols helper rack e ships for the job.

    Reads exactly the zero-digit coordinates of each node vector (alpha/s_bar
    symbols per node), never the rest.
    """
    params, p = codec.params, codec.p
    if e not in job.helpers:
        raise ValueError(f"rack {e} is not a helper of this job")
    rack_vectors = np.asarray(rack_vectors, dtype=np.int64) % p
    if rack_vectors.shape[:2] != (params.u, params.alpha):
        raise ValueError(
            f"rack needs shape ({params.u}, {params.alpha}, ...), got {rack_vectors.shape}")
    rows = codec.pcm.zero_rows[job.digit_position(params)]
    res = params.rack_residue(job.e_star)
    out = np.zeros((params.beta,) + rack_vectors.shape[2:], dtype=np.int64)
    for g in range(params.u):
        weight = pow(codec.constants.locators[e][g], res, p)
        out = (out + weight * rack_vectors[g][rows]) % p
    return out


def repair_node(codec: Codec, job: RepairJob, messages: dict[int, np.ndarray],
                survivors: dict[int, np.ndarray]) -> RepairTranscript:
    """Recover the failed node vector from helper messages and host survivors."""
    params, p = codec.params, codec.p
    consts = codec.constants
    alpha, s_bar, beta = params.alpha, params.s_bar, params.beta
    e_star, g_star = job.e_star, job.g_star
    tau_star = job.digit_position(params)
    res_star = params.rack_residue(e_star)
    rows = params.zero_digit_rows(tau_star)

    if set(messages) != set(job.helpers):
        absent = sorted(set(job.helpers) - set(messages))
        raise ValueError(f"missing helper messages from racks {absent}")
    msgs = {e: np.asarray(messages[e], dtype=np.int64) % p for e in job.helpers}
    tail = msgs[job.helpers[0]].shape[1:]
    for e, msg in msgs.items():
        if msg.shape != (beta,) + tail:
            raise ValueError(
                f"message from rack {e} has shape {msg.shape}, expected {(beta,) + tail}")
    if sorted(survivors) != [g for g in range(params.u) if g != g_star]:
        raise ValueError("survivors must cover every host-rack node but the failed one")
    surv = {g: np.asarray(v, dtype=np.int64) % p for g, v in survivors.items()}
    for g, v in surv.items():
        if v.shape != (alpha,) + tail:
            raise ValueError(
                f"survivor {g} has shape {v.shape}, expected {(alpha,) + tail}")

    # Aggregates known so far, keyed by (rack, coordinate); helper entries come
    # straight off the wire, non-helper entries are filled in level by level.
    known: dict[tuple[int, int], np.ndarray] = {}
    for e in job.helpers:
        for idx, a in enumerate(rows):
            known[(e, a)] = msgs[e][idx]

    others = [e for e in range(params.n_bar)
              if e != e_star and e not in job.helpers]
    points = ([consts.rack_points[e_star]]
              + list(consts.extra_points)
              + [consts.rack_points[e] for e in others])

    host_aggregate = np.zeros((alpha,) + tail, dtype=np.int64)
    order = sorted(rows, key=lambda a: (params.zero_digit_count(a), a))
    for a in order:
        digits = params.digits(a)
        correction_racks = [
            e for e in range(params.n_bar)
            if e != e_star and params.rack_residue(e) == res_star
            and digits[params.rack_digit(e)] == 0]
        moments = []
        for i in range(params.r_bar):
            acc = np.zeros(tail, dtype=np.int64)
            for e in job.helpers:
                acc = (acc + pow(consts.rack_points[e], i, p) * known[(e, a)]) % p
            for e in correction_racks:
                tau = params.rack_digit(e)
                for v in range(1, s_bar):
                    sibling = params.replace_digit(a, tau, v)
                    acc = (acc + pow(consts.extra_points[v - 1], i, p)
                           * known[(e, sibling)]) % p
            moments.append((-acc) % p)
        try:
            solved = linalg.vandermonde_solve(points, np.stack(moments), p)
        except SingularMatrixError as exc:  # points are distinct by construction
            raise InternalError("repair system singular; constants are broken") from exc
        for v in range(s_bar):
            host_aggregate[params.replace_digit(a, tau_star, v)] = solved[v]
        for slot, e in enumerate(others):
            known[(e, a)] = solved[s_bar + slot]

    # Peel the survivors out of the host aggregate.
    acc = host_aggregate
    for g, v in surv.items():
        weight = pow(consts.locators[e_star][g], res_star, p)
        acc = (acc - weight * v) % p
    scale = pow(consts.locators[e_star][g_star], res_star, p)
    recovered = acc * pow(scale, p - 2, p) % p

    side = {e: np.stack([known[(e, a)] for a in rows]) for e in others}
    return RepairTranscript(
        job=job,
        messages=msgs,
        recovered=recovered,
        side_aggregates=side,
        cross_rack_symbols=sum(m.shape[0] for m in msgs.values()),
        intra_rack_symbols=(params.u - 1) * alpha,
        accessed_symbols_per_helper_rack=params.u * beta,
        stripe_count=int(np.prod(tail)) if tail else 1,
    )


def repair_from_stripe(codec: Codec, stripe: Stripe, job: RepairJob) -> RepairTranscript:
    """Run the full protocol against one stripe: helpers compute their
    messages, survivors hand over their vectors, the engine recovers the rest."""
    params = codec.params
    for e in job.helpers:
        for g in range(params.u):
            if not stripe.present[params.node_index(e, g)]:
                raise ValueError(f"helper rack {e} is missing node {g}")
    messages = {e: helper_message(codec, stripe.rack(e), e, job)
                for e in job.helpers}
    survivors = {}
    for g in range(params.u):
        if g == job.g_star:
            continue
        if not stripe.present[params.node_index(job.e_star, g)]:
            raise ValueError(f"host-rack survivor {g} is missing")
        survivors[g] = stripe.node(job.e_star, g)
    return repair_node(codec, job, messages, survivors)
