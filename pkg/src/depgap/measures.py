"""Registry of dependence measures sharing one calling convention.

Each measure maps a PairedSample to a single float. The registry covers the
classical global measures (Pearson, Spearman, Kendall tau-b, Hoeffding's D,
distance correlation, HSIC, HHG, matching ranks) next to the local-density
family (aLDG, avgCSN, mean-T), so tests and batch drivers can treat them
uniformly.
"""

import functools
import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import kendalltau, rankdata

from ._util import child_rng, child_seed, ordered_map
from .aldg import ThresholdRule, aldg, avgcsn, mean_t
from .errors import DepgapError, TooFewSamples, UnknownMeasure, ZeroVariance
from .kde import PairedSample

MEASURE_TAGS = (
    "pearson",
    "spearman",
    "kendall",
    "hoeffd",
    "dcor",
    "hsic",
    "hhg",
    "mr",
    "aldg",
    "avgcsn",
    "mean-t",
)

# Tags whose sign carries direction rather than strength; permutation tests
# compare their absolute values.
SIGNED_TAGS = ("pearson", "spearman", "kendall")

_ALLOWED_PARAMS = {
    "pearson": set(),
    "spearman": set(),
    "kendall": set(),
    "hoeffd": set(),
    "dcor": set(),
    "hsic": {"width"},
    "hhg": set(),
    "mr": {"k", "seed"},
    "aldg": {"rule"},
    "avgcsn": {"alpha"},
    "mean-t": set(),
}

# Subset-count ceiling above which the matching-ranks sum is estimated by
# seeded Monte Carlo instead of exact enumeration.
_MR_EXACT_LIMIT = 10**6


@dataclass
class MeasureKind:
    """A measure tag plus its optional parameters."""

    tag: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tag not in MEASURE_TAGS:
            raise UnknownMeasure(f"unknown measure {self.tag!r}")
        extra = set(self.params) - _ALLOWED_PARAMS[self.tag]
        if extra:
            raise UnknownMeasure(
                f"measure {self.tag!r} does not take parameters {sorted(extra)}"
            )


def _pearson(sample: PairedSample) -> float:
    dx = sample.xs - sample.xs.mean()
    dy = sample.ys - sample.ys.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("Pearson correlation needs non-constant inputs")
    return float(dx @ dy) / math.sqrt(sxx * syy)


def _spearman(sample: PairedSample) -> float:
    ranked = PairedSample(rankdata(sample.xs), rankdata(sample.ys))
    return _pearson(ranked)


def _kendall(sample: PairedSample) -> float:
    tau = kendalltau(sample.xs, sample.ys, variant="b")[0]
    if not np.isfinite(tau):
        raise ZeroVariance("Kendall tau-b is undefined when one input is constant")
    return float(tau)


def _hoeffd(sample: PairedSample) -> float:
    """Classical finite-sample Hoeffding D statistic.

    Slightly negative values are possible for nearly independent data; the
    statistic is exact integer arithmetic until the final division.
    """
    n = sample.n
    if n < 5:
        raise TooFewSamples("Hoeffding's D needs at least 5 observations")
    xs, ys = sample.xs, sample.ys
    d1 = d2 = d3 = 0.0
    block = max(1, int(4_000_000 // n))
    for start in range(0, n, block):
        stop = min(start + block, n)
        le_x = xs[None, :] <= xs[start:stop, None]
        le_y = ys[None, :] <= ys[start:stop, None]
        lt_both = (xs[None, :] < xs[start:stop, None]) & (
            ys[None, :] < ys[start:stop, None]
        )
        r = le_x.sum(axis=1).astype(float)
        s = le_y.sum(axis=1).astype(float)
        c = lt_both.sum(axis=1).astype(float)
        d1 += float(np.sum(c * (c - 1.0)))
        d2 += float(np.sum((r - 1.0) * (r - 2.0) * (s - 1.0) * (s - 2.0)))
        d3 += float(np.sum((r - 2.0) * (s - 2.0) * c))
    numerator = (n - 2) * (n - 3) * d1 + d2 - 2.0 * (n - 2) * d3
    denominator = float(n * (n - 1) * (n - 2) * (n - 3) * (n - 4))
    return 30.0 * numerator / denominator


def _dcor(sample: PairedSample) -> float:
    """Distance correlation from the V-statistic moments S1 + S2 - 2 S3."""
    xs, ys = sample.xs, sample.ys
    n = sample.n
    s1_xy = s1_xx = s1_yy = 0.0
    row_a = np.zeros(n)
    row_b = np.zeros(n)
    block = max(1, int(2_000_000 // n))
    for start in range(0, n, block):
        stop = min(start + block, n)
        a = np.abs(xs[start:stop, None] - xs[None, :])
        b = np.abs(ys[start:stop, None] - ys[None, :])
        s1_xy += float(np.sum(a * b))
        s1_xx += float(np.sum(a * a))
        s1_yy += float(np.sum(b * b))
        row_a[start:stop] = a.sum(axis=1)
        row_b[start:stop] = b.sum(axis=1)
    sum_a = float(row_a.sum())
    sum_b = float(row_b.sum())

    def v_squared(s1, total_1, total_2, rows_1, rows_2):
        s2 = total_1 * total_2 / n**4
        s3 = float(rows_1 @ rows_2) / n**3
        return max(s1 / n**2 + s2 - 2.0 * s3, 0.0)

    vxx = v_squared(s1_xx, sum_a, sum_a, row_a, row_a)
    vyy = v_squared(s1_yy, sum_b, sum_b, row_b, row_b)
    if vxx == 0.0 or vyy == 0.0:
        raise ZeroVariance("distance correlation needs non-constant inputs")
    vxy = v_squared(s1_xy, sum_a, sum_b, row_a, row_b)
    return math.sqrt(vxy / math.sqrt(vxx * vyy))


def median_pairwise_width(values: np.ndarray) -> float:
    """Median of the nonzero pairwise absolute differences (kernel width heuristic)."""
    values = np.asarray(values, dtype=float)
    n = values.size
    diffs = np.abs(values[:, None] - values[None, :])[np.triu_indices(n, k=1)]
    diffs = diffs[diffs > 0]
    if diffs.size == 0:
        raise ZeroVariance("median-heuristic width is undefined for constant input")
    return float(np.median(diffs))


def _hsic(sample: PairedSample, width: float | None = None) -> float:
    """Biased HSIC with Gaussian kernels exp(-(a-b)^2 / (2 w^2)) per axis.

    The width defaults to the per-axis median heuristic; a caller-provided
    width applies to both axes.
    """
    xs, ys = sample.xs, sample.ys
    n = sample.n
    wx = median_pairwise_width(xs) if width is None else float(width)
    wy = median_pairwise_width(ys) if width is None else float(width)
    if not (wx > 0 and wy > 0):
        raise ValueError("kernel width must be positive")
    k = np.exp(-((xs[:, None] - xs[None, :]) ** 2) / (2.0 * wx**2))
    l = np.exp(-((ys[:, None] - ys[None, :]) ** 2) / (2.0 * wy**2))

    def center(m):
        row = m.mean(axis=1, keepdims=True)
        col = m.mean(axis=0, keepdims=True)
        return m - row - col + m.mean()

    return float(np.mean(center(k) * center(l)))


def _hhg(sample: PairedSample) -> float:
    """Sum over ordered point pairs of the 2x2 ball-membership chi-square.

    For a pair (i, j), the remaining n-2 points are classified by whether
    they fall inside the closed x-ball and y-ball of radius |x_j - x_i| and
    |y_j - y_i| around point i. Terms with a degenerate margin contribute 0.
    The computation is O(n^3): one n x n membership table per center i.
    """
    n = sample.n
    if n < 4:
        raise TooFewSamples("the HHG statistic needs at least 4 observations")
    xs, ys = sample.xs, sample.ys
    total = 0.0
    for i in range(n):
        dx = np.abs(xs - xs[i])
        dy = np.abs(ys - ys[i])
        in_x = dx[None, :] <= dx[:, None]
        in_y = dy[None, :] <= dy[:, None]
        # The center (k = i) and the radius point (k = j) always satisfy the
        # closed inequalities, so dropping them is a constant correction.
        ax = in_x.sum(axis=1) - 2
        ay = in_y.sum(axis=1) - 2
        axy = (in_x & in_y).sum(axis=1) - 2
        px = ax / (n - 2)
        py = ay / (n - 2)
        pxy = axy / (n - 2)
        denom = px * (1.0 - px) * py * (1.0 - py)
        valid = denom > 0.0
        valid[i] = False
        total += float(
            np.sum((n - 2) * (pxy[valid] - px[valid] * py[valid]) ** 2 / denom[valid])
        )
    return total


@functools.lru_cache(maxsize=8)
def _combination_indices(n: int, k: int) -> np.ndarray:
    idx = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), k)),
        dtype=np.intp,
    )
    idx.setflags(write=False)
    return idx.reshape(-1, k)


def _pattern_matches(xv: np.ndarray, yv: np.ndarray) -> tuple[int, int]:
    """Count rows whose within-row rank pattern agrees with y (forward) or
    with -y (backward). Two rank vectors agree exactly when every pairwise
    order relation, including ties, agrees."""
    forward = backward = 0
    step = max(1, 2_000_000 // xv.shape[1] ** 2)
    for start in range(0, xv.shape[0], step):
        sx = np.sign(xv[start : start + step, :, None] - xv[start : start + step, None, :])
        sy = np.sign(yv[start : start + step, :, None] - yv[start : start + step, None, :])
        forward += int(np.count_nonzero(np.all(sx == sy, axis=(1, 2))))
        backward += int(np.count_nonzero(np.all(sx == -sy, axis=(1, 2))))
    return forward, backward


def _mr(sample: PairedSample, k: int = 3, seed: int = 0) -> float:
    """Matching ranks: the share of k-subsequences whose within-subsequence
    rank pattern agrees forward (with y) or backward (with -y), normalized
    by twice the subsequence count.

    Exact enumeration up to 10^6 subsequences, seeded Monte Carlo with 10^6
    draws beyond that. Note the scaling: perfectly monotone data matches
    every subsequence in exactly one direction, so the statistic tops out
    at 1/2.
    """
    n = sample.n
    if not 2 <= k <= n:
        raise TooFewSamples(f"matching ranks needs 2 <= k <= n, got k={k}, n={n}")
    xs, ys = sample.xs, sample.ys
    total = math.comb(n, k)
    if total <= _MR_EXACT_LIMIT:
        idx = _combination_indices(n, k)
        draws = total
    else:
        rng = child_rng(seed, 0)
        draws = _MR_EXACT_LIMIT
        chunks = []
        remaining = draws
        while remaining > 0:
            cand = np.sort(rng.integers(0, n, size=(remaining, k)), axis=1)
            distinct = np.all(cand[:, 1:] != cand[:, :-1], axis=1)
            kept = cand[distinct]
            chunks.append(kept)
            remaining -= kept.shape[0]
        idx = np.vstack(chunks)
    forward, backward = _pattern_matches(xs[idx], ys[idx])
    return (forward + backward) / (2.0 * draws)


def _aldg_measure(sample: PairedSample, rule: ThresholdRule | None = None) -> float:
    return aldg(sample, rule).value


def _avgcsn_measure(sample: PairedSample, alpha: float = 0.01) -> float:
    return avgcsn(sample, alpha=alpha)


def _mean_t_measure(sample: PairedSample) -> float:
    return mean_t(sample)


_IMPLS = {
    "pearson": _pearson,
    "spearman": _spearman,
    "kendall": _kendall,
    "hoeffd": _hoeffd,
    "dcor": _dcor,
    "hsic": _hsic,
    "hhg": _hhg,
    "mr": _mr,
    "aldg": _aldg_measure,
    "avgcsn": _avgcsn_measure,
    "mean-t": _mean_t_measure,
}


def measure(kind, sample: PairedSample) -> float:
    """Evaluate one dependence measure on a paired sample.

    kind may be a MeasureKind or a bare tag string.
    """
    if isinstance(kind, str):
        kind = MeasureKind(kind)
    return float(_IMPLS[kind.tag](sample, **kind.params))


def kind_with_seed(kind: MeasureKind, seed: int) -> MeasureKind:
    """Rebind the stochastic parts of a measure to a derived seed.

    Deterministic measures are returned unchanged. For aLDG the threshold
    rule's shuffle seed is replaced; for matching ranks the Monte Carlo seed.
    """
    if kind.tag == "aldg":
        rule = kind.params.get("rule") or ThresholdRule.auto()
        if rule.kind in ("uniform-error", "inflection-point", "auto"):
            return MeasureKind("aldg", {**kind.params, "rule": replace(rule, seed=seed)})
        return kind
    if kind.tag == "mr":
        return MeasureKind("mr", {**kind.params, "seed": seed})
    return kind


@dataclass
class PairwiseResult:
    """Symmetric measure matrix plus per-pair failure diagnostics."""

    matrix: np.ndarray
    diagnostics: list


def pairwise_matrix(data, kind, threads: int = 1, seed: int = 0) -> PairwiseResult:
    """Measure every unordered pair of rows of a p x n data matrix.

    Each unordered pair is computed once and mirrored. The diagonal holds the
    measure's self-dependence value: exactly 1 for the correlation-scaled
    measures (Pearson, Spearman, Kendall, dCor), and the measure of a row
    against itself otherwise. Pair failures become NaN entries plus a
    diagnostics record instead of aborting the whole matrix. Stochastic
    measures receive per-task seeds derived from (seed, task index), so the
    result does not depend on the thread count.
    """
    if isinstance(kind, str):
        kind = MeasureKind(kind)
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[0] < 2:
        raise ValueError("data must be a p x n matrix with p >= 2")
    p = data.shape[0]
    pairs = [(i, j) for i in range(p) for j in range(i + 1, p)]
    self_is_one = kind.tag in ("pearson", "spearman", "kendall", "dcor")

    def one(task):
        index, i, j = task
        try:
            task_kind = kind_with_seed(kind, child_seed(seed, index))
            return measure(task_kind, PairedSample(data[i], data[j]))
        except DepgapError as exc:
            return exc

    tasks = [(index, i, j) for index, (i, j) in enumerate(pairs)]
    if not self_is_one:
        tasks += [(len(pairs) + i, i, i) for i in range(p)]
    results = ordered_map(one, tasks, threads)

    matrix = np.empty((p, p))
    diagnostics = []
    for (index, i, j), value in zip(tasks, results):
        if isinstance(value, DepgapError):
            diagnostics.append(
                {"i": i, "j": j, "error": type(value).__name__, "message": str(value)}
            )
            value = float("nan")
        matrix[i, j] = value
        matrix[j, i] = value
    if self_is_one:
        np.fill_diagonal(matrix, 1.0)
    return PairwiseResult(matrix, diagnostics)
