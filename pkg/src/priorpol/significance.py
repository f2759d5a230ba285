"""Significance tests: paired t-test, 2x2 chi-square and approximate randomization."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .evaluation import NEG, POS, TIE, ClassReport, EvalReport

ALPHAS = (0.05, 0.01, 0.001)
CLASS_METRICS = ("f1", "precision", "recall", "accuracy")
TINY = sys.float_info.min


class SignificanceError(ValueError):
    pass


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    df: float | None
    method: str

    @property
    def stars(self) -> str:
        return stars(self.p_value)

    def __str__(self):
        df = "-" if self.df is None else f"{self.df:g}"
        return (f"{self.method}\tstatistic={self.statistic:.4g}\tdf={df}"
                f"\tp={self.p_value:.4g}\t{self.stars}").rstrip()


TestResult.__test__ = False  # keep pytest from collecting it


def stars(p: float, alphas: Sequence[float] = ALPHAS) -> str:
    return "*" * sum(p < a for a in alphas)


# -- special functions --------------------------------------------------------

def _betacf(a: float, b: float, x: float, eps: float = 1e-16, max_iter: int = 10_000) -> float:
    """Continued fraction for the incomplete beta, modified Lentz method."""
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > fpmin else fpmin)
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > fpmin else fpmin)
        c = 1.0 + aa / c
        c = c if abs(c) > fpmin else fpmin
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > fpmin else fpmin)
        c = 1.0 + aa / c
        c = c if abs(c) > fpmin else fpmin
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    # continued fraction converges fast only below the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_sf_two_tailed(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    return betainc(df / 2.0, 0.5, df / (df + t * t))


def chi2_sf_1df(x: float) -> float:
    """Survival function of chi-square with one degree of freedom."""
    return math.erfc(math.sqrt(x / 2.0))


# -- tests ----------------------------------------------------------------------

def paired_t_test(errors_a: Sequence[float], errors_b: Sequence[float]) -> TestResult:
    """Two-tailed paired t-test on per-item differences a_i - b_i."""
    if len(errors_a) != len(errors_b):
        raise SignificanceError("paired samples must have equal length")
    n = len(errors_a)
    if n < 2:
        raise SignificanceError("paired t-test needs at least two pairs")
    d = [a - b for a, b in zip(errors_a, errors_b)]
    mean = math.fsum(d) / n
    var = math.fsum((x - mean) ** 2 for x in d) / (n - 1)
    df = n - 1
    if var == 0:
        if mean == 0:
            return TestResult(0.0, 1.0, df, "paired t-test")
        raise SignificanceError("constant nonzero differences: zero variance")
    t = mean * math.sqrt(n) / math.sqrt(var)
    p = min(1.0, max(TINY, t_sf_two_tailed(t, df)))
    return TestResult(t, p, df, "paired t-test")


def chi_square_success(a_success: int, a_fail: int, b_success: int, b_fail: int) -> TestResult:
    """Pearson chi-square on the 2x2 success table, no continuity correction."""
    a, b, c, d = a_success, a_fail, b_success, b_fail
    if min(a, b, c, d) < 0:
        raise SignificanceError("counts must be non-negative")
    margins = (a + b, c + d, a + c, b + d)
    if 0 in margins:
        raise SignificanceError("degenerate table: a marginal total is zero")
    n = a + b + c + d
    chi2 = n * (a * d - b * c) ** 2 / math.prod(margins)
    p = min(1.0, max(TINY, chi2_sf_1df(chi2)))
    return TestResult(float(chi2), p, 1, "chi-square")


_LABEL_CODES = {POS: 0, NEG: 1, TIE: 2}


def _encode(labels: Sequence) -> np.ndarray:
    if len(labels) and isinstance(labels[0], (bool, np.bool_)):
        return np.asarray([_LABEL_CODES[POS] if x else _LABEL_CODES[NEG] for x in labels], dtype=np.int8)
    try:
        return np.asarray([_LABEL_CODES[x] for x in labels], dtype=np.int8)
    except KeyError as exc:
        raise SignificanceError(f"unknown label {exc.args[0]!r}") from None


def _metric_batch(pred: np.ndarray, gold: np.ndarray, metric: str) -> np.ndarray:
    """Metric for each row of a (k, n) prediction matrix against ``gold``."""
    n = gold.shape[0]
    if metric == "accuracy":
        return (pred == gold).sum(axis=1) / n
    vals = []
    for cls in (0, 1):
        is_true = gold == cls
        n_true = is_true.sum()
        if n_true == 0:
            raise SignificanceError("a gold class is empty; recall undefined")
        is_pred = pred == cls
        tp = (is_pred & is_true).sum(axis=1)
        n_pred = is_pred.sum(axis=1)
        p = np.divide(tp, n_pred, out=np.zeros(pred.shape[0]), where=n_pred > 0)
        r = tp / n_true
        s = p + r
        f = np.divide(2 * p * r, s, out=np.zeros(pred.shape[0]), where=s > 0)
        vals.append({"precision": p, "recall": r, "f1": f}[metric])
    return (vals[0] + vals[1]) / 2


def randomization_p(observed: float, null_deltas: Sequence[float]) -> float:
    """Add-one smoothed share of null deltas at least as large as observed."""
    null_deltas = np.asarray(null_deltas)
    # tolerance absorbs float noise when a shuffle reproduces the observed split
    hits = int((null_deltas >= observed - 1e-12).sum())
    return (hits + 1) / (len(null_deltas) + 1)


def approx_randomization(pred_a: Sequence, pred_b: Sequence, gold: Sequence | None = None,
                         metric: str = "f1", iterations: int = 10_000, seed: int = 42) -> TestResult:
    """Approximate randomization test on a classification metric.

    Each iteration swaps the two systems' predictions on every item
    independently with probability 1/2. Iteration ``i`` draws from its
    own generator seeded with ``(seed, i)``, so the result does not
    depend on how iterations are batched.

    Predictions are pos/neg/tie labels. Booleans are accepted as
    correct/incorrect flags when ``gold`` is omitted (only ``accuracy``
    is meaningful then).
    """
    if len(pred_a) != len(pred_b):
        raise SignificanceError("prediction lists differ in length")
    if metric not in CLASS_METRICS:
        raise SignificanceError(f"unknown metric {metric!r}")
    if iterations < 100:
        raise SignificanceError("use at least 100 iterations")
    a, b = _encode(pred_a), _encode(pred_b)
    if gold is None:
        g = np.zeros_like(a)
    else:
        if len(gold) != len(a):
            raise SignificanceError("gold and predictions differ in length")
        g = _encode(gold)
        if (g == _LABEL_CODES[TIE]).any():
            raise SignificanceError("gold labels must be pos or neg")

    both = np.stack([a, b])
    observed = float(abs(np.diff(_metric_batch(both, g, metric))[0]))

    n = len(a)
    seed &= 2**64 - 1
    deltas = np.empty(iterations)
    batch = 500
    for start in range(0, iterations, batch):
        stop = min(start + batch, iterations)
        swaps = np.stack([np.random.default_rng([seed, i]).random(n) < 0.5
                          for i in range(start, stop)])
        sa = np.where(swaps, b, a)
        sb = np.where(swaps, a, b)
        deltas[start:stop] = np.abs(_metric_batch(sa, g, metric) - _metric_batch(sb, g, metric))
    p = randomization_p(observed, deltas)
    return TestResult(observed, p, None, f"approximate randomization ({metric})")


# -- pairwise tables ------------------------------------------------------------

def compare_reports(a, b, test: str, iterations: int = 10_000, seed: int = 42) -> TestResult:
    """Run ``test`` (mae, success or a classification metric) on two reports."""
    keys_a = a.keys() if isinstance(a, EvalReport) else a.keys
    keys_b = b.keys() if isinstance(b, EvalReport) else b.keys
    if tuple(keys_a) != tuple(keys_b):
        raise SignificanceError(f"{_name(a)} and {_name(b)} were scored on different word sets")
    if test == "mae":
        return paired_t_test([r.abs_error for r in a.rows], [r.abs_error for r in b.rows])
    if test == "success":
        sa, sb = a.successes, b.successes
        return chi_square_success(sa, len(a.rows) - sa, sb, len(b.rows) - sb)
    if test in CLASS_METRICS:
        if not isinstance(a, ClassReport) or not isinstance(b, ClassReport):
            raise SignificanceError(f"{test} needs classification reports")
        gold = [actual for _, actual in a.predictions]
        return approx_randomization([p for p, _ in a.predictions], [p for p, _ in b.predictions],
                                    gold, test, iterations, seed)
    raise SignificanceError(f"unknown test {test!r}")


def _name(report) -> str:
    return getattr(report, "formula", None) or getattr(report, "name", "?")


def significance_matrix(reports: Sequence, test: str, iterations: int = 10_000,
                        seed: int = 42) -> dict[tuple[str, str], TestResult]:
    """All-pairs results keyed by (name_a, name_b), stored in both orders."""
    if len(reports) < 2:
        raise SignificanceError("need at least two reports")
    out = {}
    for a, b in combinations(reports, 2):
        res = compare_reports(a, b, test, iterations, seed)
        out[_name(a), _name(b)] = res
        out[_name(b), _name(a)] = res
    return out


def matrix_table(reports: Sequence, matrix: dict[tuple[str, str], TestResult]) -> str:
    names = [_name(r) for r in reports]
    lines = ["\t" + "\t".join(names)]
    for a in names:
        cells = ["-" if a == b else f"{matrix[a, b].p_value:.4g}{matrix[a, b].stars}" for b in names]
        lines.append(a + "\t" + "\t".join(cells))
    return "\n".join(lines) + "\n"
