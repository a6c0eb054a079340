"""Real-data path: bigram statistics from token-id streams.

Counts consecutive-token pairs from a pre-tokenized stream, normalizes
them into rank-ordered unigram and sparse conditional frequencies, and
evaluates the same closed-form loss curves as the synthetic path on
those empirical statistics. Conditional tables are kept sparse
throughout; at 32k tokens a dense table would be gigabytes while almost
all pairs never occur.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FormatError
from .gd import Algorithm, RateCurve, TimeSemantics
from .powerlaw import PowerLawSpec, frequencies
from .sd import _exact_distance_array

__all__ = [
    "BOUNDARY_ID",
    "BigramCounts",
    "BigramStats",
    "count_bigrams",
    "stats_from_counts",
    "stats_from_powerlaw",
    "real_gd_curve",
    "real_sd_loss",
    "optimize_sd_step",
    "zipf_fit_check",
    "read_token_stream",
    "write_token_stream",
    "write_counts",
    "read_counts",
]

# Reserved id marking a document boundary in token streams; pairs never
# straddle it.
BOUNDARY_ID = 0xFFFFFFFF


@dataclass
class BigramCounts:
    """Raw integer counts: unigrams and sparse per-context bigram rows."""

    vocab_size: int
    unigram: dict[int, int]
    bigram_rows: dict[int, dict[int, int]]
    total_tokens: int


def count_bigrams(token_stream, vocab_size: int) -> BigramCounts:
    """Count unigrams and consecutive-pair bigrams from a token stream.

    Document boundaries (BOUNDARY_ID) break pairing: the last token of
    one document is never treated as the context of the first token of
    the next.
    """
    if vocab_size < 1:
        raise DomainError(f"vocab_size must be positive, got {vocab_size}")
    unigram: dict[int, int] = {}
    rows: dict[int, dict[int, int]] = {}
    prev = None
    total = 0
    for pos, tok in enumerate(token_stream):
        tok = int(tok)
        if tok == BOUNDARY_ID:
            prev = None
            continue
        if tok < 0 or tok >= vocab_size:
            raise FormatError(f"token id {tok} at position {pos} outside vocabulary of size {vocab_size}")
        unigram[tok] = unigram.get(tok, 0) + 1
        total += 1
        if prev is not None:
            row = rows.setdefault(prev, {})
            row[tok] = row.get(tok, 0) + 1
        prev = tok
    if total < 2:
        raise FormatError(f"token stream too short: {total} tokens, need at least 2")
    return BigramCounts(
        vocab_size=vocab_size, unigram=unigram, bigram_rows=rows, total_tokens=total
    )


@dataclass
class BigramStats:
    """Rank-ordered empirical frequencies.

    pi[k] is the frequency of the (k+1)-th most frequent token; rows[k]
    holds the nonzero conditional frequencies of that token as
    (next-token ranks, frequencies), sorted by decreasing frequency.
    row_power_sums[k] is the sum of squared conditional frequencies of
    row k, the per-row contribution to the loss at initialization.
    """

    d: int
    pi: np.ndarray
    rows: list[tuple[np.ndarray, np.ndarray]]
    row_power_sums: np.ndarray
    rank_of_token: dict[int, int]
    token_of_rank: np.ndarray
    _flat_freqs: np.ndarray | None = field(default=None, repr=False)
    _flat_weights: np.ndarray | None = field(default=None, repr=False)

    def flattened(self) -> tuple[np.ndarray, np.ndarray]:
        """All nonzero conditional frequencies and their row weights pi_j."""
        if self._flat_freqs is None:
            freqs = [f for _, f in self.rows if f.size]
            weights = [
                np.full(f.size, self.pi[j]) for j, (_, f) in enumerate(self.rows) if f.size
            ]
            self._flat_freqs = (
                np.concatenate(freqs) if freqs else np.empty(0)
            )
            self._flat_weights = (
                np.concatenate(weights) if weights else np.empty(0)
            )
        return self._flat_freqs, self._flat_weights

    def initial_loss(self) -> float:
        return float(np.dot(self.pi, self.row_power_sums))


def stats_from_counts(counts: BigramCounts) -> BigramStats:
    """Normalize counts into rank-ordered frequencies.

    Tokens are re-indexed by descending unigram count (ties by token
    id); zero-count tokens are dropped. Conditional rows are normalized
    by the number of times the context token appears with a successor,
    so nonempty rows sum to one; contexts that never precede anything
    get an empty row.
    """
    if counts.total_tokens < 1:
        raise DomainError("counts contain no tokens")
    tokens = sorted(counts.unigram, key=lambda t: (-counts.unigram[t], t))
    d = len(tokens)
    rank_of_token = {tok: r for r, tok in enumerate(tokens)}
    token_of_rank = np.array(tokens, dtype=np.int64)
    uni = np.array([counts.unigram[t] for t in tokens], dtype=np.float64)
    pi = uni / counts.total_tokens
    rows = []
    power_sums = np.zeros(d)
    for r, tok in enumerate(tokens):
        row = counts.bigram_rows.get(tok)
        if not row:
            rows.append((np.empty(0, dtype=np.int64), np.empty(0)))
            continue
        row_total = sum(row.values())
        items = sorted(row.items(), key=lambda kv: (-kv[1], rank_of_token[kv[0]]))
        ranks = np.array([rank_of_token[t] for t, _ in items], dtype=np.int64)
        freqs = np.array([c for _, c in items], dtype=np.float64) / row_total
        rows.append((ranks, freqs))
        power_sums[r] = float(np.sum(freqs**2))
    return BigramStats(
        d=d,
        pi=pi,
        rows=rows,
        row_power_sums=power_sums,
        rank_of_token=rank_of_token,
        token_of_rank=token_of_rank,
    )


def stats_from_powerlaw(spec: PowerLawSpec) -> BigramStats:
    """Exact power-law statistics: every conditional row equals the unigrams.

    The bridge between the real-data path and the synthetic closed
    forms; loss curves on these stats must match the O(d) formulas.
    """
    pi = frequencies(spec)
    ranks = np.arange(spec.d, dtype=np.int64)
    s = float(np.sum(pi**2))
    rows = [(ranks, pi) for _ in range(spec.d)]
    return BigramStats(
        d=spec.d,
        pi=pi,
        rows=rows,
        row_power_sums=np.full(spec.d, s),
        rank_of_token={k: k for k in range(spec.d)},
        token_of_rank=ranks.copy(),
    )


def real_gd_curve(stats: BigramStats, times) -> RateCurve:
    """Normalized gradient-descent loss curve on empirical statistics.

    Each context row decays as (1 - pi_i/pi_1)^(2t) with the standard
    step-size 1/pi_1, so the loss at time t is the s_i-weighted sum of
    those factors; O(d) per time point.
    """
    times = list(times)
    if not times:
        raise DomainError("times must be nonempty")
    weights = stats.pi * stats.row_power_sums
    loss0 = float(np.sum(weights))
    base = 1.0 - stats.pi / stats.pi[0]
    with np.errstate(divide="ignore"):
        log_base = np.where(base > 0.0, np.log(np.maximum(base, 1e-300)), -np.inf)
    points = []
    for t in times:
        if t < 0:
            raise DomainError(f"times must be nonnegative, got {t}")
        if t == 0:
            points.append((0.0, 1.0))
            continue
        loss_t = float(np.sum(weights * np.exp(2.0 * t * log_base)))
        points.append((float(t), loss_t / loss0))
    return RateCurve(
        algorithm=Algorithm.GD,
        d=stats.d,
        alpha=None,
        points=points,
        time_semantics=TimeSemantics.RAW_STEPS,
    )


def real_sd_loss(stats: BigramStats, eta: float, T: int) -> float:
    """Normalized exact sign-descent loss on empirical statistics.

    Evaluates the O(1) oscillation closed form on every nonzero
    conditional entry (zero entries are fixed points and stay zero);
    reported only at even T since the loss oscillates step to step.
    """
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta}")
    if T < 0 or T % 2 != 0:
        raise DomainError(f"T must be even and nonnegative, got {T}")
    freqs, weights = stats.flattened()
    loss0 = stats.initial_loss()
    if T == 0:
        return 1.0
    deltas = _exact_distance_array(freqs, eta, T)
    return float(np.sum(weights * deltas**2)) / loss0


def optimize_sd_step(stats: BigramStats, T: int) -> tuple[float, float]:
    """Best constant sign-descent step-size for an even budget of T steps.

    Golden-section search on log(eta) over [eta_min/d, d*eta_max] where
    eta_min and eta_max are the smallest and largest nonzero conditional
    frequencies divided by T. The loss is assumed unimodal in log(eta);
    a coarse-grid probe guards against bracketing landing in a spurious
    local minimum, falling back to a dense grid when it wins by more
    than 1%.
    """
    if stats.d < 2:
        raise DomainError("step-size optimization needs at least two tokens")
    if T < 2 or T % 2 != 0:
        raise DomainError(f"T must be even and >= 2, got {T}")
    freqs, _ = stats.flattened()
    if freqs.size == 0:
        raise DomainError("statistics contain no bigram entries")
    eta_min = float(np.min(freqs)) / T
    eta_max = float(np.max(freqs)) / T
    lo = math.log(eta_min / stats.d)
    hi = math.log(stats.d * eta_max)

    def f(log_eta: float) -> float:
        return real_sd_loss(stats, math.exp(log_eta), T)

    log_eta_star, loss_star = _golden_section(f, lo, hi, tol=1e-4)

    # Coarse probe of the unimodality assumption.
    coarse = np.linspace(lo, hi, 25)
    coarse_losses = [f(x) for x in coarse]
    i_best = int(np.argmin(coarse_losses))
    if coarse_losses[i_best] < loss_star * (1.0 - 0.01):
        dense = np.linspace(lo, hi, 200)
        dense_losses = [f(x) for x in dense]
        j = int(np.argmin(dense_losses))
        a = dense[max(j - 1, 0)]
        b = dense[min(j + 1, len(dense) - 1)]
        log_eta_star, loss_star = _golden_section(f, a, b, tol=1e-4)
    return math.exp(log_eta_star), loss_star


def _golden_section(f, a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section minimization of f on [a, b] to bracket width tol."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - (b - a) * inv_phi
    d = a + (b - a) * inv_phi
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * inv_phi
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * inv_phi
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def zipf_fit_check(stats: BigramStats) -> tuple[float, tuple[float, float, float]]:
    """Log-log slopes of frequency against rank.

    Returns the least-squares slope of the unigram distribution and the
    25/50/75 percent quantiles of per-row slopes over rows with at least
    10 nonzero entries.
    """
    if stats.d < 10:
        raise DomainError(f"need at least 10 tokens for a slope fit, got {stats.d}")
    ranks = np.arange(1, stats.d + 1, dtype=np.float64)
    uni_slope = float(np.polyfit(np.log(ranks), np.log(stats.pi), 1)[0])
    row_slopes = []
    for _, f in stats.rows:
        if f.size >= 10:
            r = np.arange(1, f.size + 1, dtype=np.float64)
            row_slopes.append(float(np.polyfit(np.log(r), np.log(f), 1)[0]))
    if row_slopes:
        q25, q50, q75 = (float(q) for q in np.percentile(row_slopes, [25, 50, 75]))
    else:
        q25 = q50 = q75 = math.nan
    return uni_slope, (q25, q50, q75)


# --- File formats -----------------------------------------------------------

_COUNTS_MAGIC = b"BGC1"
_SENTINEL_TRIPLE = (BOUNDARY_ID, BOUNDARY_ID, 0)


def read_token_stream(path) -> np.ndarray:
    """Read a token-id stream, boundaries included as BOUNDARY_ID.

    Files ending in .txt are newline-delimited decimal ids with blank
    lines as document boundaries; anything else is raw little-endian
    unsigned 32-bit ids.
    """
    path = str(path)
    if path.endswith(".txt"):
        ids = []
        with open(path, "r", encoding="ascii") as fh:
            for line_no, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    ids.append(BOUNDARY_ID)
                    continue
                try:
                    ids.append(int(line))
                except ValueError:
                    raise FormatError(f"{path}:{line_no}: not a decimal token id: {line!r}")
        return np.array(ids, dtype=np.uint32)
    return np.fromfile(path, dtype="<u4")


def write_token_stream(path, ids) -> None:
    """Write token ids (with BOUNDARY_ID markers) as little-endian u32."""
    np.asarray(ids, dtype="<u4").tofile(str(path))


def write_counts(path, counts: BigramCounts) -> None:
    """Persist counts: 16-byte header, bigram triples, sentinel, unigram pairs."""
    with open(str(path), "wb") as fh:
        fh.write(_COUNTS_MAGIC)
        fh.write(struct.pack("<IQ", counts.vocab_size, 0))
        for ctx in sorted(counts.bigram_rows):
            row = counts.bigram_rows[ctx]
            for nxt in sorted(row):
                fh.write(struct.pack("<IIQ", ctx, nxt, row[nxt]))
        fh.write(struct.pack("<IIQ", *_SENTINEL_TRIPLE))
        for tok in sorted(counts.unigram):
            fh.write(struct.pack("<IQ", tok, counts.unigram[tok]))


def read_counts(path) -> BigramCounts:
    """Read counts persisted by write_counts."""
    with open(str(path), "rb") as fh:
        data = fh.read()
    if len(data) < 16 or data[:4] != _COUNTS_MAGIC:
        raise FormatError(f"{path}: not a bigram counts file (bad magic or truncated)")
    vocab_size, _reserved = struct.unpack_from("<IQ", data, 4)
    offset = 16
    rows: dict[int, dict[int, int]] = {}
    while True:
        if offset + 16 > len(data):
            raise FormatError(f"{path}: truncated bigram record section")
        ctx, nxt, cnt = struct.unpack_from("<IIQ", data, offset)
        offset += 16
        if (ctx, nxt, cnt) == _SENTINEL_TRIPLE:
            break
        rows.setdefault(ctx, {})[nxt] = cnt
    unigram: dict[int, int] = {}
    while offset < len(data):
        if offset + 12 > len(data):
            raise FormatError(f"{path}: truncated unigram record section")
        tok, cnt = struct.unpack_from("<IQ", data, offset)
        offset += 12
        unigram[tok] = cnt
    total = sum(unigram.values())
    return BigramCounts(
        vocab_size=vocab_size, unigram=unigram, bigram_rows=rows, total_tokens=total
    )
