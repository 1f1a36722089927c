"""Finite-blocklength realization of the random-binning coding schemes.

Everything here is honest finite-n: codebook sizes are exact integers
2^ceil(n R), bins partition index ranges exactly, and equivocation is
computed *exactly* (full enumeration of the output space) whenever the
configured caps allow, so H(M|Z^n) + I(M;Z^n) = H(M) holds to float
precision rather than estimator noise.  Above the caps a Monte Carlo
estimator with a normal-approximation confidence interval is available;
the exact routine refuses loudly and points there.

Typicality is robust (strong) typicality: a tuple sequence is eps-typical
when every joint-symbol count k(a) satisfies |k(a)/n - p(a)| <= eps p(a),
in particular k(a) = 0 wherever p(a) = 0.

Randomness: every public operation takes an integer seed; internal
streams derive from numpy SeedSequence(seed, spawn_key=...) with fixed
role keys (0=codebook, 1=encoding, 2=channel, 3=experiment trials), so
identical (config, seed) pairs reproduce results bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .probability import ConditionalPmf, DistributionError, FactoredDistribution

LOG2 = np.log2


class CapExceededError(RuntimeError):
    """A requested exact computation exceeds the configured caps."""


@dataclass(frozen=True)
class TypicalityParams:
    """Blocklength and robust-typicality slack, plus threshold knobs.

    delta and delta1 are the asymptotic-slack dials of the concentration
    experiment (threshold exponent shift and multiplier); they are
    experiment inputs here, not derived quantities.
    """

    n: int
    epsilon: float
    delta: float = 0.05
    delta1: float = 0.1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("blocklength n must be >= 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class Caps:
    max_codebook_entries: int = 1 << 22
    max_exact_outputs: int = 1 << 14      # |Z|^n for exact equivocation
    max_exact_work: int = 1 << 28         # |Z|^n * codewords


DEFAULT_CAPS = Caps()


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _exponent(n: int, rate: float) -> int:
    """Codeword-count exponent ceil(n * rate), robust to float dust."""
    if rate < 0:
        raise ValueError("rates must be non-negative")
    return int(np.ceil(n * rate - 1e-9))


def sample_iid(p: np.ndarray, n: int, rng: np.random.Generator, size: int = 1) -> np.ndarray:
    return rng.choice(p.size, size=(size, n), p=p).astype(np.int64)


def sample_given(chan: np.ndarray, given: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One output symbol per position, rows of chan indexed by ``given``."""
    cum = np.cumsum(chan, axis=1)
    cum[:, -1] = 1.0 + 1e-9  # guard against float dust beyond the last boundary
    u = rng.random(given.shape)
    return (u[..., None] < cum[given]).argmax(axis=-1).astype(np.int64)


def count_bounds(p: np.ndarray, n: int, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """Integer count windows [lb, ub] per cell for robust typicality."""
    p = p.ravel()
    lb = np.maximum(np.ceil(n * p * (1 - eps) - 1e-9).astype(np.int64), 0)
    ub = np.floor(n * p * (1 + eps) + 1e-9).astype(np.int64)
    lb[p <= 0] = 0
    ub[p <= 0] = 0
    return lb, ub


def joint_counts(cells: np.ndarray, n_cells: int) -> np.ndarray:
    """Count cell occurrences along the last axis: (..., n) -> (..., n_cells)."""
    lead = cells.shape[:-1]
    k = int(np.prod(lead)) if lead else 1
    flat = cells.reshape(k, cells.shape[-1])
    offs = flat + n_cells * np.arange(k, dtype=np.int64)[:, None]
    counts = np.bincount(offs.ravel(), minlength=k * n_cells)
    return counts.reshape(*lead, n_cells) if lead else counts.reshape(n_cells)


def typical_mask(counts: np.ndarray, lb: np.ndarray, ub: np.ndarray) -> np.ndarray:
    return ((counts >= lb) & (counts <= ub)).all(axis=-1)


# ---------------------------------------------------------------------------
# Codebooks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WiretapRates:
    message: float      # R
    total: float        # R-tilde, v-layer exponent
    satellite: float = 0.0  # R-tilde-1, x-layer per cloud


@dataclass(frozen=True, eq=False)
class WiretapCodebook:
    """Superposition codebook: i.i.d. v-layer with bins, x-satellites."""

    p_v: np.ndarray
    p_x_given_v: np.ndarray
    n: int
    k_msg: int
    k_total: int
    k_sat: int
    v_seqs: np.ndarray          # (2^k_total, n)
    x_seqs: np.ndarray          # (2^k_total, 2^k_sat, n)
    seed: int

    @property
    def n_messages(self) -> int:
        return 1 << self.k_msg

    @property
    def bin_size(self) -> int:
        return 1 << (self.k_total - self.k_msg)

    def bin_range(self, m: int) -> range:
        bs = self.bin_size
        return range(m * bs, (m + 1) * bs)

    def message_of(self, l0: int) -> int:
        return l0 // self.bin_size


def _wiretap_tables(dist) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(dist, FactoredDistribution):
        j = dist.realization.marginal(("V", "X")).tensor
    else:
        j = dist.marginal(("V", "X")).tensor
    p_v = j.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        p_xv = np.where(p_v[:, None] > 0, j / p_v[:, None], 1.0 / j.shape[1])
    return p_v, p_xv


def build_wiretap_codebook(
    dist,
    rates: WiretapRates,
    params: TypicalityParams,
    seed: int,
    caps: Caps = DEFAULT_CAPS,
) -> WiretapCodebook:
    """i.i.d. v-layer, conditionally i.i.d. x-satellites, exact bin split."""
    p_v, p_xv = _wiretap_tables(dist)
    n = params.n
    k_msg = _exponent(n, rates.message)
    k_total = _exponent(n, rates.total)
    k_sat = _exponent(n, rates.satellite)
    if k_total < k_msg:
        raise ValueError("total v-layer rate must be >= message rate")
    n_total, n_sat = 1 << k_total, 1 << k_sat
    entries = n_total * n * (1 + n_sat)
    if entries > caps.max_codebook_entries:
        raise CapExceededError(
            f"codebook needs {entries} stored symbols > cap {caps.max_codebook_entries}"
        )
    rng = _rng(seed, 0)
    v_seqs = sample_iid(p_v, n, rng, size=n_total)
    x_seqs = sample_given(p_xv, np.repeat(v_seqs[:, None, :], n_sat, axis=1), rng)
    return WiretapCodebook(
        p_v=p_v, p_x_given_v=p_xv, n=n,
        k_msg=k_msg, k_total=k_total, k_sat=k_sat,
        v_seqs=v_seqs, x_seqs=x_seqs, seed=seed,
    )


@dataclass(frozen=True)
class MartonRates:
    message: float   # R on the v0-layer bins
    total: float     # R-tilde, v0-layer exponent
    t1: float        # T1, v1 satellites per cloud
    t2: float        # T2
    b1: float        # R-tilde-1, v1 bins per cloud
    b2: float        # R-tilde-2


@dataclass(frozen=True, eq=False)
class MartonCodebook:
    """Cloud centers with per-cloud Marton-paired satellite layers."""

    tables: tuple[np.ndarray, ...]   # p(q), p(v0|q), p(v1,v2|v0), p(x|v0,v1,v2)
    sizes: tuple[int, int, int, int]  # |Q|, |V0|, |V1|, |V2|
    x_size: int
    n: int
    k_msg: int
    k_total: int
    k_t1: int
    k_t2: int
    k_b1: int
    k_b2: int
    q_seq: np.ndarray               # (n,)
    v0_seqs: np.ndarray             # (N0, n)
    v1_seqs: np.ndarray             # (N0, 2^k_t1, n)
    v2_seqs: np.ndarray             # (N0, 2^k_t2, n)
    pairing: np.ndarray             # (N0, 2^k_b1, 2^k_b2, 2), -1 marks failure
    seed: int

    @property
    def n_messages(self) -> int:
        return 1 << self.k_msg

    @property
    def bin_size(self) -> int:
        return 1 << (self.k_total - self.k_msg)

    @property
    def encoding_failure_rate(self) -> float:
        return float((self.pairing[..., 0] < 0).mean())


def _marton_tables(dist) -> tuple[tuple[np.ndarray, ...], tuple[int, int, int, int], int]:
    if not isinstance(dist, FactoredDistribution) or dist.pattern not in (
        "theorem1",
        "theorem2",
    ):
        raise DistributionError("Marton codebooks need a theorem1-pattern distribution")
    sizes = {a: s for a, s in dist.axis_sizes}
    tabs = tuple(f.table.matrix for f in dist.factors)
    return tabs, (sizes[dist.factors[0].targets[0]], sizes["V0"], sizes["V1"], sizes["V2"]), sizes["X"]


def build_marton_codebook(
    dist,
    rates: MartonRates,
    params: TypicalityParams,
    seed: int,
    caps: Caps = DEFAULT_CAPS,
) -> MartonCodebook:
    """Layered codebook with a jointly typical pair chosen per product bin.

    Pair selection is uniform over the typical pairs in the bin; a bin
    with no typical pair is recorded as an encoding failure.
    """
    tabs, (nq, n0, n1, n2), nx = _marton_tables(dist)
    p_q, p_v0_q, p_v12_v0, _ = tabs
    n = params.n
    k_msg = _exponent(n, rates.message)
    k_total = _exponent(n, rates.total)
    k_t1, k_t2 = _exponent(n, rates.t1), _exponent(n, rates.t2)
    k_b1, k_b2 = _exponent(n, rates.b1), _exponent(n, rates.b2)
    if k_total < k_msg or k_t1 < k_b1 or k_t2 < k_b2:
        raise ValueError("bin exponents cannot exceed their layer exponents")
    n_tot, nt1, nt2 = 1 << k_total, 1 << k_t1, 1 << k_t2
    entries = n * (1 + n_tot * (1 + nt1 + nt2))
    if entries > caps.max_codebook_entries:
        raise CapExceededError(f"codebook needs {entries} symbols > cap")
    rng = _rng(seed, 0)
    q_seq = sample_iid(p_q[0] if p_q.ndim > 1 else p_q, n, rng)[0]
    v0_seqs = sample_given(p_v0_q, np.repeat(q_seq[None, :], n_tot, axis=0), rng)
    # marginals of the joint satellite factor
    p_v12 = p_v12_v0.reshape(n0, n1, n2)
    p_v1_v0 = p_v12.sum(axis=2)
    with np.errstate(invalid="ignore", divide="ignore"):
        p_v1_v0 = np.where(p_v1_v0.sum(axis=1, keepdims=True) > 0, p_v1_v0, 1.0 / n1)
    p_v2_v0 = p_v12.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        p_v2_v0 = np.where(p_v2_v0.sum(axis=1, keepdims=True) > 0, p_v2_v0, 1.0 / n2)
    v1_seqs = sample_given(
        p_v1_v0, np.repeat(v0_seqs[:, None, :], nt1, axis=1), rng
    )
    v2_seqs = sample_given(
        p_v2_v0, np.repeat(v0_seqs[:, None, :], nt2, axis=1), rng
    )
    # pairing: jointly typical (v1, v2) per product bin wrt p(q,v0,v1,v2)
    joint = (
        (p_q[0] if p_q.ndim > 1 else p_q)[:, None, None, None]
        * p_v0_q[:, :, None, None]
        * p_v12.reshape(1, n0, n1, n2)
    )
    lb, ub = count_bounds(joint, n, params.epsilon)
    n_cells = nq * n0 * n1 * n2
    nb1, nb2 = 1 << k_b1, 1 << k_b2
    bs1, bs2 = nt1 // nb1, nt2 // nb2
    pairing = np.full((n_tot, nb1, nb2, 2), -1, dtype=np.int64)
    for l0 in range(n_tot):
        # typicality of every (t1, t2) pair at once, then slice into bins
        base = (q_seq * n0 + v0_seqs[l0]) * (n1 * n2)
        cells = (
            base[None, None, :]
            + (v1_seqs[l0] * n2)[:, None, :]
            + v2_seqs[l0][None, :, :]
        )
        ok = typical_mask(joint_counts(cells, n_cells), lb, ub)
        for b1 in range(nb1):
            for b2 in range(nb2):
                block = ok[b1 * bs1:(b1 + 1) * bs1, b2 * bs2:(b2 + 1) * bs2]
                hits = np.argwhere(block)
                if hits.size:
                    pick = hits[rng.integers(len(hits))]
                    pairing[l0, b1, b2] = (b1 * bs1 + pick[0], b2 * bs2 + pick[1])
    return MartonCodebook(
        tables=tabs, sizes=(nq, n0, n1, n2), x_size=nx, n=n,
        k_msg=k_msg, k_total=k_total, k_t1=k_t1, k_t2=k_t2, k_b1=k_b1, k_b2=k_b2,
        q_seq=q_seq, v0_seqs=v0_seqs, v1_seqs=v1_seqs, v2_seqs=v2_seqs,
        pairing=pairing, seed=seed,
    )


# ---------------------------------------------------------------------------
# Encoding and transmission
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EncodeResult:
    x_seq: Optional[np.ndarray]   # None on a Marton encoding failure
    l0: int
    satellites: tuple[int, ...]

    @property
    def erased(self) -> bool:
        return self.x_seq is None


def encode(cb, message: int, seed: int) -> EncodeResult:
    """Uniform bin-member and satellite choice; emits the input sequence."""
    if isinstance(cb, WiretapCodebook):
        if not 0 <= message < cb.n_messages:
            raise ValueError(f"message {message} out of range")
        rng = _rng(seed, 1)
        l0 = message * cb.bin_size + int(rng.integers(cb.bin_size))
        l1 = int(rng.integers(1 << cb.k_sat))
        return EncodeResult(cb.x_seqs[l0, l1].copy(), l0, (l1,))
    if isinstance(cb, MartonCodebook):
        if not 0 <= message < cb.n_messages:
            raise ValueError(f"message {message} out of range")
        rng = _rng(seed, 1)
        l0 = message * cb.bin_size + int(rng.integers(cb.bin_size))
        b1 = int(rng.integers(cb.pairing.shape[1]))
        b2 = int(rng.integers(cb.pairing.shape[2]))
        t1, t2 = cb.pairing[l0, b1, b2]
        if t1 < 0:
            return EncodeResult(None, l0, (b1, b2))
        _, n0, n1, n2 = cb.sizes
        p_x = cb.tables[3]  # rows indexed row-major by (v0, v1, v2)
        rows = (cb.v0_seqs[l0] * n1 + cb.v1_seqs[l0, t1]) * n2 + cb.v2_seqs[l0, t2]
        x = sample_given(p_x, rows, rng)
        return EncodeResult(x, l0, (int(t1), int(t2)))
    raise TypeError(f"unknown codebook type {type(cb).__name__}")


def transmit(chan: ConditionalPmf, x_seq: np.ndarray, seed: int) -> np.ndarray:
    rng = _rng(seed, 2)
    return sample_given(chan.matrix, x_seq, rng)


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecodeResult:
    message: Optional[int]
    l0: Optional[int]
    reason: str   # ok | none-typical | ambiguous

    @property
    def ok(self) -> bool:
        return self.reason == "ok"


def _channel_to(cb: WiretapCodebook, chan: ConditionalPmf) -> np.ndarray:
    if chan.rows != cb.p_x_given_v.shape[1]:
        raise DistributionError("channel input must be the X alphabet")
    return chan.matrix


def decode_direct(
    cb: WiretapCodebook,
    y_seq: np.ndarray,
    params: TypicalityParams,
    chan: ConditionalPmf,
) -> DecodeResult:
    """Unique jointly typical v-sequence against the induced p(v, y)."""
    W = _channel_to(cb, chan)
    ny = W.shape[1]
    nv = cb.p_v.size
    p_y_given_v = cb.p_x_given_v @ W
    p_vy = cb.p_v[:, None] * p_y_given_v
    lb, ub = count_bounds(p_vy, cb.n, params.epsilon)
    cells = cb.v_seqs * ny + y_seq[None, :]
    ok = typical_mask(joint_counts(cells, nv * ny), lb, ub)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return DecodeResult(None, None, "none-typical")
    if hits.size > 1:
        return DecodeResult(None, None, "ambiguous")
    l0 = int(hits[0])
    return DecodeResult(cb.message_of(l0), l0, "ok")


def decode_indirect(
    cb: WiretapCodebook,
    y_seq: np.ndarray,
    params: TypicalityParams,
    chan: ConditionalPmf,
) -> DecodeResult:
    """Unique cloud index with *some* satellite jointly typical with y."""
    if cb.x_seqs.shape[1] < 1:
        raise DistributionError("indirect decoding needs a satellite layer")
    W = _channel_to(cb, chan)
    ny = W.shape[1]
    nv = cb.p_v.size
    nx = cb.p_x_given_v.shape[1]
    p_vxy = (cb.p_v[:, None] * cb.p_x_given_v)[:, :, None] * W[None, :, :]
    lb, ub = count_bounds(p_vxy, cb.n, params.epsilon)
    vx = cb.v_seqs[:, None, :] * nx + cb.x_seqs
    cells = vx * ny + y_seq[None, None, :]
    counts = joint_counts(cells, nv * nx * ny)
    ok = typical_mask(counts, lb, ub).any(axis=1)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return DecodeResult(None, None, "none-typical")
    if hits.size > 1:
        return DecodeResult(None, None, "ambiguous")
    l0 = int(hits[0])
    return DecodeResult(cb.message_of(l0), l0, "ok")


# ---------------------------------------------------------------------------
# Exact equivocation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimReport:
    p_error: Optional[float]
    equivocation_rate: float
    leakage_rate: float
    message_rate: float            # H(M)/n
    trials: int
    encoding_failure_rate: float
    exact: bool
    ci_halfwidth: Optional[float] = None


def _zn_pmf(rows: np.ndarray) -> np.ndarray:
    """Product distribution over Z^n from per-position rows (n, |Z|)."""
    v = rows[0]
    for i in range(1, rows.shape[0]):
        v = (v[:, None] * rows[i][None, :]).ravel()
    return v


def _zn_pmf_batch(rows: np.ndarray) -> np.ndarray:
    """Product distributions for a batch: (B, n, |Z|) -> (B, |Z|^n)."""
    v = rows[:, 0]
    for i in range(1, rows.shape[1]):
        v = (v[:, :, None] * rows[:, i][:, None, :]).reshape(rows.shape[0], -1)
    return v


def _entropy_bits(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-(nz * LOG2(nz)).sum())


def _message_conditionals(cb, chan: ConditionalPmf, caps: Caps) -> tuple[np.ndarray, float]:
    """p(z^n | m) for every message, by exact marginalization.

    Returns (matrix of shape (n_messages, |Z|^n), encoding_failure_rate).
    """
    nz = chan.cols
    n = cb.n
    out_space = nz ** n
    if out_space > caps.max_exact_outputs:
        raise CapExceededError(
            f"|Z|^n = {out_space} exceeds cap {caps.max_exact_outputs}; "
            "use mc_equivocation instead"
        )
    W = chan.matrix
    if isinstance(cb, WiretapCodebook):
        if W.shape[0] != cb.p_x_given_v.shape[1]:
            raise DistributionError("channel input must be the X alphabet")
        n_cw = cb.v_seqs.shape[0] * cb.x_seqs.shape[1]
        if out_space * n_cw > caps.max_exact_work:
            raise CapExceededError("exact equivocation work above cap")
        n_sat = cb.x_seqs.shape[1]
        conds = np.zeros((cb.n_messages, out_space))
        for m in range(cb.n_messages):
            flat = cb.x_seqs[m * cb.bin_size:(m + 1) * cb.bin_size].reshape(-1, n)
            conds[m] = _zn_pmf_batch(W[flat]).mean(axis=0)
        return conds, 0.0
    if isinstance(cb, MartonCodebook):
        nq, n0, n1, n2 = cb.sizes
        p_x = cb.tables[3]
        if W.shape[0] != p_x.shape[1]:
            raise DistributionError("channel input must be the X alphabet")
        Wc = p_x @ W  # (n0*n1*n2, nz): symbol-wise input sampling folded in
        nb1, nb2 = cb.pairing.shape[1], cb.pairing.shape[2]
        n_cw = cb.v0_seqs.shape[0] * nb1 * nb2
        if out_space * n_cw > caps.max_exact_work:
            raise CapExceededError("exact equivocation work above cap")
        conds = np.zeros((cb.n_messages, out_space))
        failures = 0
        total = 0
        for m in range(cb.n_messages):
            acc = np.zeros(out_space)
            cnt = 0
            for l0 in range(m * cb.bin_size, (m + 1) * cb.bin_size):
                for b1 in range(nb1):
                    for b2 in range(nb2):
                        t1, t2 = cb.pairing[l0, b1, b2]
                        total += 1
                        if t1 < 0:
                            failures += 1
                            continue
                        rows = (
                            cb.v0_seqs[l0] * n1 + cb.v1_seqs[l0, t1]
                        ) * n2 + cb.v2_seqs[l0, t2]
                        acc += _zn_pmf(Wc[rows])
                        cnt += 1
            if cnt == 0:
                raise DistributionError(
                    f"message {m} has no successfully paired bins"
                )
            conds[m] = acc / cnt
        return conds, failures / total
    raise TypeError(f"unknown codebook type {type(cb).__name__}")


def exact_equivocation(
    cb,
    chan: ConditionalPmf,
    caps: Caps = DEFAULT_CAPS,
) -> SimReport:
    """H(M|Z^n)/n and I(M;Z^n)/n by exact enumeration, uniform messages.

    The two rates are computed by independent summations, so their sum
    reconstructing H(M)/n is a real consistency check, not an identity
    of the implementation.  Marton encoding failures are excluded from
    the conditional law (conditioning on successful encoding) and
    reported via encoding_failure_rate.
    """
    conds, fail_rate = _message_conditionals(cb, chan, caps)
    n_m = conds.shape[0]
    p_m = np.full(n_m, 1.0 / n_m)
    p_z = p_m @ conds
    # equivocation: H(M|Z^n) = -sum_z sum_m p(m, z) log2 p(m|z)
    with np.errstate(invalid="ignore", divide="ignore"):
        post = np.where(p_z[None, :] > 0, conds * p_m[:, None] / p_z[None, :], 0.0)
        joint = conds * p_m[:, None]
        hmz = float(-(joint[joint > 0] * LOG2(post[joint > 0])).sum())
        # leakage: I(M;Z^n) = sum_{m,z} p(m,z) log2( p(z|m) / p(z) )
        ratio = np.where(joint > 0, conds / np.where(p_z[None, :] > 0, p_z[None, :], 1.0), 1.0)
        leak = float((joint[joint > 0] * LOG2(ratio[joint > 0])).sum())
    n = cb.n
    return SimReport(
        p_error=None,
        equivocation_rate=hmz / n,
        leakage_rate=leak / n,
        message_rate=_entropy_bits(p_m) / n,
        trials=0,
        encoding_failure_rate=fail_rate,
        exact=True,
    )


def mc_equivocation(
    cb,
    chan: ConditionalPmf,
    trials: int,
    seed: int,
) -> SimReport:
    """Monte Carlo equivocation: sample (m, z^n), score -log2 p(m|z^n).

    p(m|z^n) is computed exactly for each sampled z^n (mixture over the
    codebook), so the estimator is an unbiased sample mean of the exact
    conditional surprisal; the reported ci_halfwidth is 1.96 sigma/sqrt(T).
    """
    if not isinstance(cb, WiretapCodebook):
        raise TypeError("mc_equivocation supports superposition codebooks")
    W = chan.matrix
    n_m = cb.n_messages
    samples = np.zeros(trials)
    n_sat = cb.x_seqs.shape[1]
    flat_x = cb.x_seqs.reshape(-1, cb.n)
    for t in range(trials):
        rng = _rng(seed, 3, t)
        m = int(rng.integers(n_m))
        l0 = m * cb.bin_size + int(rng.integers(cb.bin_size))
        l1 = int(rng.integers(n_sat))
        z = sample_given(W, cb.x_seqs[l0, l1], rng)
        # p(z | l) for every codeword, then mix per message
        pz_given_cw = W[flat_x, z[None, :]].reshape(len(flat_x), cb.n).prod(axis=1)
        per_msg = pz_given_cw.reshape(n_m, cb.bin_size * n_sat).mean(axis=1)
        tot = per_msg.mean()
        samples[t] = -LOG2(per_msg[m] / (tot * n_m)) if tot > 0 else 0.0
    mean = float(samples.mean())
    half = float(1.96 * samples.std(ddof=1) / np.sqrt(trials)) if trials > 1 else None
    n = cb.n
    hm = LOG2(n_m) / n
    return SimReport(
        p_error=None,
        equivocation_rate=mean / n,
        leakage_rate=hm - mean / n,
        message_rate=hm,
        trials=trials,
        encoding_failure_rate=0.0,
        exact=False,
        ci_halfwidth=None if half is None else half / n,
    )


def decoding_error_rate(
    cb: WiretapCodebook,
    chan: ConditionalPmf,
    params: TypicalityParams,
    trials: int,
    seed: int,
    decoder: str = "indirect",
) -> tuple[float, int]:
    """Monte Carlo block error rate of direct or indirect decoding."""
    if decoder not in ("direct", "indirect"):
        raise ValueError("decoder must be direct or indirect")
    fn = decode_direct if decoder == "direct" else decode_indirect
    errors = 0
    for t in range(trials):
        rng = _rng(seed, 3, t)
        m = int(rng.integers(cb.n_messages))
        enc = encode(cb, m, int(rng.integers(1 << 31)))
        if enc.erased:  # encoding failures count as block errors
            errors += 1
            continue
        y = sample_given(chan.matrix, enc.x_seq, rng)
        res = fn(cb, y, params, chan)
        if not res.ok or res.message != m:
            errors += 1
    return errors / trials, trials


# ---------------------------------------------------------------------------
# Typical-count concentration experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lemma1Report:
    exceedance_frequency: float
    threshold: float
    mean_count: float
    max_count: int
    info_rate: float        # I(V;Z|U) of the driving distribution
    s_rate: float           # quantized list exponent k/n actually used
    in_concentration_regime: bool
    trials: int


def lemma1_experiment(
    dist,
    s_rate: float,
    params: TypicalityParams,
    trials: int,
    seed: int,
    caps: Caps = DEFAULT_CAPS,
) -> Lemma1Report:
    """Count conditionally-i.i.d. v-sequences jointly typical with (u, z).

    Samples U^n, a list of 2^ceil(nS) sequences V^n(l) i.i.d. from
    p(v|u), and Z^n from p(z|u, v(L)) at a uniformly chosen list index L;
    reports how often the typical count exceeds the concentration
    threshold (1 + delta1) 2^{n(S - I(V;Z|U) + delta)}.
    """
    from .probability import JointPmf

    if isinstance(dist, FactoredDistribution):
        j = dist.realization
    elif isinstance(dist, JointPmf):
        j = dist
    else:
        raise DistributionError("need a joint distribution over (U, V, Z)")
    t = j.marginal(("U", "V", "Z")).tensor
    nu, nv, nz = t.shape
    p_u = t.sum(axis=(1, 2))
    with np.errstate(invalid="ignore", divide="ignore"):
        p_v_u = np.where(p_u[:, None] > 0, t.sum(axis=2) / p_u[:, None], 1.0 / nv)
        p_uv = t.sum(axis=2)
        p_z_uv = np.where(
            p_uv[:, :, None] > 0, t / p_uv[:, :, None], 1.0 / nz
        ).reshape(nu * nv, nz)
    info = JointPmf(("U", "V", "Z"), t).conditional_mutual_information(
        ("V",), ("Z",), ("U",)
    )
    n = params.n
    k = _exponent(n, s_rate)
    n_list = 1 << k
    if n_list * n * trials > caps.max_codebook_entries * 8:
        raise CapExceededError("lemma1 experiment size above cap")
    s_eff = k / n
    threshold = (1 + params.delta1) * 2 ** (n * (s_eff - info + params.delta))
    lb, ub = count_bounds(t, n, params.epsilon)
    n_cells = nu * nv * nz
    exceed = 0
    counts_sum = 0.0
    max_count = 0
    for tr in range(trials):
        rng = _rng(seed, 3, tr)
        u = sample_iid(p_u, n, rng)[0]
        vs = sample_given(p_v_u, np.repeat(u[None, :], n_list, axis=0), rng)
        ell = int(rng.integers(n_list))
        z = sample_given(p_z_uv, u * nv + vs[ell], rng)
        cells = (u[None, :] * nv + vs) * nz + z[None, :]
        mask = typical_mask(joint_counts(cells, n_cells), lb, ub)
        count = int(mask.sum())
        counts_sum += count
        max_count = max(max_count, count)
        if count >= threshold:
            exceed += 1
    return Lemma1Report(
        exceedance_frequency=exceed / trials,
        threshold=float(threshold),
        mean_count=counts_sum / trials,
        max_count=max_count,
        info_rate=float(info),
        s_rate=s_eff,
        in_concentration_regime=bool(s_eff > info + params.delta),
        trials=trials,
    )
