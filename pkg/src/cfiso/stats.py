"""Counting formulas, recurrence times, and Monte Carlo boundary checks.

The exact layer (counts, expectations, recurrence times, pattern
probabilities, stationary densities) is pure rational arithmetic; floating
point appears only in boundary functions and simulation summaries.

The Monte Carlo layer samples in the image space of the transform: a uniform
input word maps to a uniform stream (the map is measure preserving), so the
deviation walk, jump counts, zero runs, and the 2-adic indicator series can
all be driven from i.i.d. uniform symbols instead of running the expansion.
Each symbol is reduced to its nonzero indicator, Bernoulli((q-1)/q).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import _kernels

__all__ = [
    "count_N",
    "deviation_counts",
    "expected_J",
    "recurrence_delta",
    "pattern_feasible",
    "pattern_probability",
    "StationaryReport",
    "stationary_check",
    "LevyBoundary",
    "boundary",
    "levy_eval",
    "BOUNDARY_FAMILIES",
    "MCConfig",
    "TrialStats",
    "MCResult",
    "monte_carlo",
    "FUNCTIONALS",
    "first_passage_times",
]


# ---------------------------------------------------------------------------
# exact counting


def count_N(t: int, m: int, q: int) -> int:
    """Number of words of length t whose deviation lands on m.

    1 for the all-zero word (m = -t); otherwise (q-1)*q^(t-m) above zero
    and (q-1)*q^(t+m-1) at or below.
    """
    if t < 0 or q < 2:
        raise ValueError("need t >= 0 and q >= 2")
    if abs(m) > t or (m - t) % 2:
        raise ValueError(f"deviation {m} unreachable at length {t}")
    if m == -t:
        return 1
    return (q - 1) * q ** (t - m if m > 0 else t + m - 1)


def deviation_counts(t: int, q: int) -> dict[int, int]:
    """count_N over every reachable deviation at length t."""
    return {m: count_N(t, m, q) for m in range(-t, t + 1, 2)}


def expected_J(t: int, q: int) -> Fraction:
    """Mean jump complexity at length t over all q^t words."""
    if t < 0 or q < 2:
        raise ValueError("need t >= 0 and q >= 2")
    if t == 0:
        return Fraction(0)
    base = Fraction(t, 2) * Fraction(q - 1, q)
    tail = Fraction(1, (q + 1) * q**t)
    if t % 2 == 0:
        return base + Fraction(1, q + 1) - tail
    return base + Fraction(q**2 + 1, 2 * q * (q + 1)) - tail


# ---------------------------------------------------------------------------
# recurrence times on the deviation chain
#
# The walk: from m > 0 always to m-1; from m <= 0 to m-1 with probability
# 1/q, else reflect to 1-m.  Two path facts make every (k,l) reducible to a
# handful of closed forms: the way up passes l right after a reflection at
# 1-l or deeper, and the way down passes every level one by one.


def _return_time(k: int, q: int) -> Fraction:
    e = k if k > 0 else 1 - k
    return Fraction(2 * q**e, q - 1)


def _passage(k: int, l: int, q: int) -> Fraction:
    # expected first-passage time k -> l; 0 for k == l
    if k == l:
        return Fraction(0)
    if l == 0:
        if k > 0:
            return Fraction(k)  # forced descent
        return Fraction(-k) + Fraction(2 * q, q - 1)
    if l > 0:
        if k > l:
            return Fraction(k - l)
        if k >= 0:
            # up from below the target: complete a return minus the descent
            return _return_time(l, q) - (l - k)
        if l <= -k + 1:
            # any reflection from -|k| or deeper lands at or above l
            return _passage(k, 0, q) - l
        return _passage(0, l, q) - _passage(0, k, q)
    # l < 0
    lam = -l
    down = Fraction(2 * q * (q**lam - 1), q - 1)  # 0 -> l
    if k >= 0:
        return down - lam + k
    if k > l:
        # strictly between: descend the gap
        return _passage(0, l, q) - _passage(0, k, q)
    # k < l < 0: reflect over the top and come back down through zero
    return _passage(k, 0, q) + _passage(0, l, q)


def recurrence_delta(k: int, l: int, q: int) -> Fraction:
    """Average time for the deviation walk to go from k to l (return time
    on the diagonal).  Defined for every integer pair; q >= 2."""
    if q < 2:
        raise ValueError("q >= 2 required")
    if k == l:
        return _return_time(k, q)
    return _passage(k, l, q)


def pattern_feasible(pattern: Sequence[int]) -> bool:
    for a, b in zip(pattern, pattern[1:]):
        if b not in (a - 1, 1 - a):
            return False
        if a > 0 and b != a - 1:
            return False
    return True


def pattern_probability(pattern: Sequence[int], q: int) -> Fraction:
    """Asymptotic frequency of a deviation pattern m(t), .., m(t+k);
    infeasible patterns have frequency zero."""
    if q < 2:
        raise ValueError("q >= 2 required")
    if len(pattern) == 0:
        return Fraction(0)
    if not pattern_feasible(pattern):
        return Fraction(0)
    ups = downs = 0
    for a, b in zip(pattern, pattern[1:]):
        if a <= 0:
            if b == a - 1:
                downs += 1
            else:
                ups += 1
    return Fraction((q - 1) ** ups, q ** (downs + ups)) / _return_time(pattern[0], q)


# ---------------------------------------------------------------------------
# stationary density of the deviation chain


@dataclass(frozen=True)
class StationaryReport:
    q: int
    kmax: int
    truncation: int
    closed_form: dict[int, Fraction]
    chain_density: dict[int, Fraction]
    max_abs_diff: Fraction


def _truncated_chain_stationary(q: int, K: int) -> dict[int, Fraction]:
    # states -K..K+1; the reflection from -K is forced, folding the mass
    # that would fall below -K back up, an O(q^-K) distortion
    states = list(range(-K, K + 2))
    index = {s: i for i, s in enumerate(states)}
    n = len(states)
    P = [[Fraction(0)] * n for _ in range(n)]
    for s in states:
        i = index[s]
        if s > 0:
            P[i][index[s - 1]] = Fraction(1)
        elif s == -K:
            P[i][index[1 - s]] = Fraction(1)
        else:
            P[i][index[s - 1]] = Fraction(1, q)
            P[i][index[1 - s]] = Fraction(q - 1, q)
    # solve pi (P - I) = 0 with the last equation replaced by normalization
    A = [[P[j][i] - (Fraction(1) if i == j else Fraction(0)) for j in range(n)] for i in range(n)]
    A[n - 1] = [Fraction(1)] * n
    b = [Fraction(0)] * (n - 1) + [Fraction(1)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        b[col] *= inv
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
                b[r] -= f * b[col]
    return {s: b[index[s]] for s in states}


def stationary_check(q: int, kmax: int, truncation: int = 40) -> StationaryReport:
    """Compare the chain's stationary density against the reciprocal return
    times, for |k| <= kmax.

    The density is the time average over both parities of t jointly (at any
    fixed t only one parity of m is reachable, so the chain itself has
    period two).  The truncated solve is exact rational arithmetic; the
    truncation leaves an O(q^-truncation) gap, visible in max_abs_diff.
    """
    if kmax < 1:
        raise ValueError("kmax >= 1 required")
    K = kmax + truncation
    pi = _truncated_chain_stationary(q, K)
    closed = {k: 1 / _return_time(k, q) for k in range(-kmax, kmax + 1)}
    diff = max(abs(pi[k] - closed[k]) for k in closed)
    chain = {k: pi[k] for k in closed}
    return StationaryReport(q, kmax, truncation, closed, chain, diff)


# ---------------------------------------------------------------------------
# boundary families
#
# The sqrt families are stated for the normalized symbol walk S(t)/sqrt(t);
# the run-length and degree families are integer-valued envelopes in base-2
# logarithms.  Epsilon (and the order parameters of the k-th run family)
# are baked in at construction.


@dataclass(frozen=True)
class LevyBoundary:
    name: str
    n_min: int
    fn: Callable[[float], float]

    def __call__(self, n: float) -> float:
        return self.fn(n)


def _log2(x: float) -> float:
    return math.log2(x)


def _ulog2(x: float) -> float:
    # clamped log for iterated towers
    return math.log2(x) if x >= 1.0 else 0.0


def _loglog(n: float) -> float:
    return math.log(math.log(n))


def _l3(n: float) -> float:
    return math.log(math.log(math.log(n)))


def _run_core(n: float) -> float:
    return _log2(n) - _log2(_log2(_log2(n))) + _log2(_log2(math.e))


def _make_boundaries(eps: float, k: int, r: int) -> dict[str, LevyBoundary]:
    if eps < 0:
        raise ValueError("eps >= 0 required")
    if k < 1 or r < 2:
        raise ValueError("need k >= 1 and r >= 2")

    def kth_run(n: float, top: float) -> float:
        # log2 n + (1/k)(log2^(2) n + .. + log2^(r-1) n + top * log2^(r) n)
        tower = [_log2(n)]
        for _ in range(r - 1):
            tower.append(_ulog2(tower[-1]))
        return tower[0] + (sum(tower[1:-1]) + top * tower[-1]) / k

    def named(name: str, n_min: int, fn: Callable[[float], float]) -> LevyBoundary:
        return LevyBoundary(name, n_min, fn)

    return {
        # normalized symbol walk S(t)/sqrt(t)
        "lil_uuc": named("lil_uuc", 16, lambda n: math.sqrt(2 * _loglog(n) + (3 + eps) * _l3(n))),
        "lil_ulc": named("lil_ulc", 16, lambda n: math.sqrt(2 * _loglog(n) + _l3(n))),
        "lil_luc": named("lil_luc", 16, lambda n: -math.sqrt(2 * _loglog(n) + _l3(n))),
        "lil_llc": named("lil_llc", 16, lambda n: -math.sqrt(2 * _loglog(n) + (3 + eps) * _l3(n))),
        # binary jump complexity J(t) itself
        "jump_uuc": named("jump_uuc", 16, lambda n: n / 4 + 1 + math.sqrt(n * (_loglog(n) / 4 + (0.375 + eps) * _l3(n)))),
        "jump_ulc": named("jump_ulc", 16, lambda n: n / 4 + math.sqrt(n * (_loglog(n) / 4 + 0.125 * _l3(n)))),
        "jump_luc": named("jump_luc", 16, lambda n: n / 4 + 1 - math.sqrt(n * (_loglog(n) / 4 + 0.125 * _l3(n)))),
        "jump_llc": named("jump_llc", 16, lambda n: n / 4 - math.sqrt(n * (_loglog(n) / 4 + (0.375 + eps) * _l3(n)))),
        # longest zero run; the upper pair are the summable/divergent test
        # instances (sum 2^-f converges resp. diverges), the lower pair the
        # floor envelopes
        "run_uuc": named("run_uuc", 5, lambda n: _log2(n) + (1 + eps) * _log2(_log2(n))),
        "run_ulc": named("run_ulc", 5, lambda n: _log2(n) + _log2(_log2(n))),
        "run_luc": named("run_luc", 17, lambda n: math.floor(_run_core(n) - 1 + eps)),
        "run_llc": named("run_llc", 17, lambda n: math.floor(_run_core(n) - 2 - eps)),
        # peak absolute deviation up to n: run families at half length, +1
        "mplus_uuc": named("mplus_uuc", 10, lambda n: 1 + _log2(n / 2) + (1 + eps) * _log2(_log2(n / 2))),
        "mplus_ulc": named("mplus_ulc", 10, lambda n: 1 + _log2(n / 2) + _log2(_log2(n / 2))),
        "mplus_luc": named("mplus_luc", 34, lambda n: 1 + math.floor(_run_core(n / 2) + eps)),
        "mplus_llc": named("mplus_llc", 34, lambda n: 1 + math.floor(_run_core(n / 2) - 2 - eps)),
        # k-th longest zero run, iterated-log refinement of order r
        "deheuvels_uuc": named("deheuvels_uuc", 5, lambda n: kth_run(n, 1 + eps)),
        "deheuvels_ulc": named("deheuvels_ulc", 5, lambda n: kth_run(n, 1.0)),
        "deheuvels_luc": named("deheuvels_luc", 17, lambda n: math.floor(_run_core(n) + eps)),
        "deheuvels_llc": named("deheuvels_llc", 17, lambda n: math.floor(_run_core(n) - 2 - eps)),
        # k-th largest partial-quotient degree: half length, +1
        "degree_uuc": named("degree_uuc", 10, lambda n: 1 + kth_run(n / 2, 1 + eps)),
        "degree_ulc": named("degree_ulc", 10, lambda n: 1 + kth_run(n / 2, 1.0)),
        "degree_luc": named("degree_luc", 34, lambda n: 1 + math.floor(_run_core(n / 2) + eps)),
        "degree_llc": named("degree_llc", 34, lambda n: 1 + math.floor(_run_core(n / 2) - 2 - eps)),
    }


BOUNDARY_FAMILIES = tuple(_make_boundaries(0.01, 2, 3).keys())


def boundary(family: str, eps: float = 0.01, k: int = 2, r: int = 3) -> LevyBoundary:
    """Build a boundary function; eps (and k, r for the k-th run and degree
    families) are fixed at construction.  Family names are case-insensitive."""
    fams = _make_boundaries(eps, k, r)
    key = family.lower()
    if key not in fams:
        raise ValueError(f"unknown boundary family {family!r}")
    return fams[key]


def levy_eval(b: LevyBoundary, n: int) -> float:
    if n < b.n_min:
        raise ValueError(f"{b.name} needs n >= {b.n_min}, got {n}")
    return float(b.fn(float(n)))


# ---------------------------------------------------------------------------
# Monte Carlo


FUNCTIONALS = ("J_deviation", "m_plus", "Z_runs", "adic_mA")

_SUP_BAND = (0.7, 1.3)


@dataclass(frozen=True)
class MCConfig:
    q: int
    n: int
    trials: int
    seed: int
    parallel_chunks: int = 1
    eps: float = 0.01
    sup_window_start: int = 1024
    stride: int = 0

    def __post_init__(self):
        if self.trials < 1 or self.n < 32 or self.q < 2:
            raise ValueError("need trials >= 1, n >= 32, q >= 2")

    @property
    def effective_stride(self) -> int:
        return self.stride if self.stride > 0 else max(1, self.n // 1024)


@dataclass(frozen=True)
class TrialStats:
    index: int
    final: float
    normalized_final: float
    sup_ratio: float
    peak: float


@dataclass(frozen=True)
class MCResult:
    functional: str
    cfg: MCConfig
    trials: tuple[TrialStats, ...]
    checkpoints: np.ndarray
    trajectories: np.ndarray

    def finals(self) -> np.ndarray:
        return np.array([t.final for t in self.trials])

    def normalized_finals(self) -> np.ndarray:
        return np.array([t.normalized_final for t in self.trials])

    def sup_ratios(self) -> np.ndarray:
        return np.array([t.sup_ratio for t in self.trials])

    def summary(self) -> dict:
        cfg = self.cfg
        finals = self.finals()
        sups = self.sup_ratios()
        norm = self.normalized_finals()
        moments = {
            "mean": float(finals.mean()),
            "variance": float(finals.var(ddof=1)) if len(finals) > 1 else 0.0,
            "min": float(finals.min()),
            "max": float(finals.max()),
            "normalized_mean": float(norm.mean()),
            "normalized_abs_max": float(np.abs(norm).max()),
            "normalization": _normalization_label(self.functional, cfg.q),
            "normalization_at_n": _normalization_value(self.functional, cfg.q, cfg.n),
        }
        if self.functional == "J_deviation":
            moments["theory_mean"] = float(expected_J(cfg.n, cfg.q))
        bands = _band_levels(self.functional, cfg)
        breaches = {}
        for name, level in bands.items():
            if name.endswith(("_uuc", "_ulc", "upper")):
                frac = float(np.mean(finals > level))
            else:
                frac = float(np.mean(finals < level))
            breaches[name] = frac
        lo, hi = _SUP_BAND
        return {
            "functional": self.functional,
            "q": cfg.q,
            "n": cfg.n,
            "trials": cfg.trials,
            "seed": cfg.seed,
            "bands": bands,
            "breaches": breaches,
            "moments": moments,
            "sup": {
                "window_start": cfg.sup_window_start,
                "band": [lo, hi],
                "mean": float(sups.mean()),
                "fraction_in_band": float(np.mean((sups >= lo) & (sups <= hi))),
            },
        }


def _normalization_label(functional: str, q: int) -> str:
    if functional == "J_deviation":
        return f"sqrt((q-1)/q^2 * n * loglog n), q={q}"
    if functional == "adic_mA":
        return "sqrt(2 n loglog n)"
    return "log2 n"


def _normalization_value(functional: str, q: int, n: int) -> float:
    if functional == "J_deviation":
        return math.sqrt((q - 1) / q**2 * n * math.log(math.log(n)))
    if functional == "adic_mA":
        return math.sqrt(2 * n * math.log(math.log(n)))
    return math.log2(n)


def _band_levels(functional: str, cfg: MCConfig) -> dict[str, float]:
    n, eps = cfg.n, cfg.eps
    if functional == "J_deviation":
        if cfg.q == 2:
            fams = ("jump_uuc", "jump_ulc", "jump_luc", "jump_llc")
        else:
            # bands on the centered count, scaled back to raw values
            scale = _normalization_value(functional, cfg.q, n)
            center = n / 2 * (cfg.q - 1) / cfg.q
            return {
                "normalized_upper": center + scale * (1 + eps),
                "normalized_lower": center - scale * (1 + eps),
            }
    elif functional == "m_plus":
        fams = ("mplus_uuc", "mplus_ulc", "mplus_luc", "mplus_llc")
    elif functional == "Z_runs":
        fams = ("run_uuc", "run_ulc", "run_luc", "run_llc")
    else:
        scale = math.sqrt(float(n))
        return {name: scale * levy_eval(boundary(name, eps), n) for name in ("lil_uuc", "lil_ulc", "lil_luc", "lil_llc")}
    return {name: levy_eval(boundary(name, eps), n) for name in fams}


def _trial_rng(seed: int, index: int) -> np.random.Generator:
    # substream contract: trial i draws from SeedSequence(seed, spawn_key=(i,))
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _lil_sup(dev: np.ndarray, var_step: float, lo: int) -> float:
    # sup over t >= lo of |dev(t)| / sqrt(2 var t loglog t)
    t = np.arange(lo, len(dev) + 1, dtype=np.float64)
    denom = np.sqrt(2.0 * var_step * t * np.log(np.log(t)))
    return float((np.abs(dev[lo - 1 :]) / denom).max())


def _run_trial(functional: str, cfg: MCConfig, index: int, cps: np.ndarray) -> tuple[TrialStats, np.ndarray]:
    rng = _trial_rng(cfg.seed, index)
    n, q = cfg.n, cfg.q
    p = (q - 1) / q
    lo = min(cfg.sup_window_start, n // 2)
    mask = rng.random(n) < p
    if functional == "J_deviation":
        m = _kernels.deviation_walk(mask)
        jumps = np.cumsum(m[1:] > m[:-1])
        # the criterion's normalized walk is the symbol walk, not J itself
        sym = np.cumsum(np.where(mask, 1.0 - p, -p))
        sup_ratio = _lil_sup(sym, p * (1 - p), lo)
        scale = _normalization_value(functional, q, n)
        final = float(jumps[-1])
        normalized = (final - n / 2 * p) / scale
        traj = jumps[cps - 1].astype(np.float64)
        peak = float(np.abs(m).max())
        return TrialStats(index, final, normalized, sup_ratio, peak), traj
    if functional == "m_plus":
        m = _kernels.deviation_walk(mask)
        mp = np.maximum.accumulate(np.abs(m[1:]))
        traj = mp[cps - 1].astype(np.float64)
        final = float(mp[-1])
        return TrialStats(index, final, final / math.log2(n), final / math.log2(n), final), traj
    if functional == "Z_runs":
        z = _kernels.running_longest_zero_run(mask)
        traj = z[cps - 1].astype(np.float64)
        final = float(z[-1])
        return TrialStats(index, final, final / math.log2(n), final / math.log2(n), final), traj
    if functional == "adic_mA":
        bits = rng.random(n) < 0.5
        walk = np.cumsum(np.where(bits, 1.0, -1.0))
        sup_ratio = _lil_sup(walk, 1.0, lo)
        final = float(walk[-1])
        normalized = final / _normalization_value(functional, q, n)
        traj = walk[cps - 1]
        return TrialStats(index, final, normalized, sup_ratio, float(np.abs(walk).max())), traj
    raise ValueError(f"unknown functional {functional!r}")


def monte_carlo(cfg: MCConfig, functional: str) -> MCResult:
    """Run cfg.trials independent streams of the chosen functional.

    Deterministic for a fixed seed regardless of parallel_chunks: each trial
    owns a substream derived from (seed, trial index), and trial order in
    the result is by index.
    """
    if functional not in FUNCTIONALS:
        raise ValueError(f"functional must be one of {FUNCTIONALS}")
    stride = cfg.effective_stride
    cps = np.arange(stride, cfg.n + 1, stride, dtype=np.int64)
    indices = range(cfg.trials)
    if cfg.parallel_chunks > 1:
        with ThreadPoolExecutor(max_workers=cfg.parallel_chunks) as ex:
            rows = list(ex.map(lambda i: _run_trial(functional, cfg, i, cps), indices))
    else:
        rows = [_run_trial(functional, cfg, i, cps) for i in indices]
    stats = tuple(r[0] for r in rows)
    traj = np.stack([r[1] for r in rows])
    return MCResult(functional, cfg, stats, cps, traj)


def first_passage_times(k: int, l: int, q: int, steps: int, seed: int) -> float:
    """Empirical mean first-passage (return for k = l) time from k to l on
    one long simulated walk; sampling oracle for recurrence_delta."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(k & 0xFFFF, l & 0xFFFF)))
    mask = rng.random(steps) < (q - 1) / q
    m = _kernels.deviation_walk(mask)
    here = np.flatnonzero(m == k)
    there = np.flatnonzero(m == l)
    if len(here) == 0 or len(there) == 0:
        return math.nan
    # for each visit to k, the wait until the next strictly later visit to l
    pos = np.searchsorted(there, here, side="right")
    ok = pos < len(there)
    waits = there[pos[ok]] - here[ok]
    return float(waits.mean()) if len(waits) else math.nan
