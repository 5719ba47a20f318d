"""Maximum-likelihood lifetime fitting with parametric bootstrap.

The data are binomial: at each storage time T_i the experiment runs R_i
repetitions and counts successes, giving a mean fidelity F_i.  Two decay
families are supported,

    exponential: F(T; A, tau) = (1 + A exp(-T/tau)) / 2
    gaussian:    F(T; A, tau) = (1 + A exp(-T^2/tau^2)) / 2

with A in [0, 1] absorbing state-preparation offsets.  Fitting maximizes the
exact binomial log-likelihood on a coarse (A, ln tau) grid and polishes with
a Nelder-Mead simplex; both stages run in scaled units u = tau / max(T) so
rescaling every time by a constant rescales tau_hat exactly.  Asymmetric
confidence intervals come from a parametric bootstrap with counter-derived
per-sample seeds (parallel and serial execution agree).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import gammaln
from scipy.stats import binom

from .backend import get_kernels

_FLAT_TOL = 1e-6          # profile-likelihood spread marking tau unidentifiable
_PPF_MAX_R = 10_000       # inverse-CDF binomial sampling up to this R (exact,
                          # platform-stable); larger R falls back to rng.binomial


class DecayModel(Enum):
    EXPONENTIAL = "exponential"
    GAUSSIAN = "gaussian"

    @property
    def family_code(self) -> int:
        return 0 if self is DecayModel.EXPONENTIAL else 1

    @classmethod
    def coerce(cls, value) -> "DecayModel":
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower())


def model_fidelity(model: DecayModel, T, A: float, tau: float):
    """F(T; A, tau) for either family; broadcasts over T/A/tau arrays."""
    T = np.asarray(T, dtype=float)
    z = T / tau
    decay = np.exp(-z) if model is DecayModel.EXPONENTIAL else np.exp(-z * z)
    out = 0.5 * (1.0 + np.asarray(A) * decay)
    return float(out) if out.ndim == 0 else out


class DecayDataset:
    """Records of (T_i seconds, R_i repetitions, F_i mean fidelity).

    F_i * R_i must be an integer success count (within rounding); exact
    duplicate records collapse to one."""

    def __init__(self, records):
        seen = []
        t, reps, succ = [], [], []
        for T, R, F in records:
            T = float(T)
            if T < 0:
                raise ValueError(f"negative time {T}")
            if R != int(R) or int(R) <= 0:
                raise ValueError(f"repetitions must be a positive integer, got {R}")
            R = int(R)
            F = float(F)
            if not 0.0 <= F <= 1.0:
                raise ValueError(f"fidelity {F} outside [0, 1]")
            s_real = F * R
            s = round(s_real)
            if abs(s_real - s) > 1e-9 + 1e-12 * R:
                raise ValueError(f"F*R = {s_real} is not an integer count")
            key = (T, R, s)
            if key in seen:
                continue
            seen.append(key)
            t.append(T)
            reps.append(R)
            succ.append(s)
        self.t = np.asarray(t, dtype=float)
        self.reps = np.asarray(reps, dtype=float)
        self.succ = np.asarray(succ, dtype=float)

    @classmethod
    def from_counts(cls, t, reps, successes) -> "DecayDataset":
        recs = [(T, R, (S / R if R else 0.0)) for T, R, S in zip(t, reps, successes)]
        return cls(recs)

    def __len__(self) -> int:
        return self.t.size

    @property
    def fidelities(self) -> np.ndarray:
        return self.succ / self.reps

    @property
    def t_max(self) -> float:
        return float(self.t.max()) if len(self) else 0.0


def _comb_term(data: DecayDataset) -> float:
    # ln C(R, S) summed over records; constant in (A, tau)
    r, s = data.reps, data.succ
    return float(np.sum(gammaln(r + 1) - gammaln(s + 1) - gammaln(r - s + 1)))


def log_likelihood(model: DecayModel, A: float, tau: float,
                   data: DecayDataset) -> float:
    """Exact binomial log-likelihood; -inf when a saturated fidelity
    (F = 0 or 1) conflicts with an opposing count."""
    if not 0.0 <= A <= 1.0:
        raise ValueError(f"A = {A} outside [0, 1]")
    if tau <= 0:
        raise ValueError(f"tau = {tau} must be positive")
    if len(data) == 0:
        return 0.0
    k = get_kernels()
    pt = k.loglik_point(model.family_code, data.t, data.reps, data.succ,
                        float(A), math.log(tau))
    return _comb_term(data) + pt


@dataclass
class FitResult:
    model: DecayModel
    A_hat: float
    tau_hat: float
    loglik: float
    flat: bool = False
    tau_bounds: tuple = (0.0, 0.0)
    bootstrap: list = field(default_factory=list)
    n_excluded: int = 0
    seed: int | None = None


def fit_mle(model: DecayModel, data: DecayDataset, tau_bounds=None,
            n_tau: int = 61, n_a: int = 41) -> FitResult:
    """Two-stage maximizer: log-spaced tau grid x linear A grid, then a
    Nelder-Mead polish to 1e-4 relative in both parameters.

    tau_bounds defaults to [max(T)/100, max(T)*100].  A flat profile
    likelihood over tau (spread < 1e-6) sets the `flat` flag instead of
    raising; the returned point is then the grid maximizer.
    """
    if np.unique(data.t).size < 2:
        raise ValueError("need at least two distinct storage times")
    t_max = data.t_max
    if tau_bounds is None:
        tau_bounds = (t_max / 100.0, t_max * 100.0)
    lo, hi = float(tau_bounds[0]), float(tau_bounds[1])
    if not 0 < lo < hi:
        raise ValueError(f"bad tau bounds {tau_bounds}")

    # scaled units: u = tau/t_max, x = ln u, times ts = T/t_max
    ts = data.t / t_max
    x_lo, x_hi = math.log(lo / t_max), math.log(hi / t_max)
    x_grid = np.linspace(x_lo, x_hi, n_tau)
    a_grid = np.linspace(0.0, 1.0, n_a)

    k = get_kernels()
    surf = k.loglik_grid(model.family_code, ts, data.reps, data.succ,
                         a_grid, x_grid)
    profile = surf.max(axis=0)
    flat = bool(profile.max() - profile.min() < _FLAT_TOL)
    ia, ix = np.unravel_index(int(np.argmax(surf)), surf.shape)

    a_best, x_best, ll_best = k.refine_simplex(
        model.family_code, ts, data.reps, data.succ,
        float(a_grid[ia]), float(x_grid[ix]), x_lo, x_hi,
        float(a_grid[1] - a_grid[0]), float(x_grid[1] - x_grid[0]),
        1e-4, 1e-4, 500)

    return FitResult(model=model, A_hat=float(a_best),
                     tau_hat=float(math.exp(x_best) * t_max),
                     loglik=float(ll_best) + _comb_term(data),
                     flat=flat, tau_bounds=(lo, hi))


def _sample_counts(p: np.ndarray, reps: np.ndarray,
                   gen: np.random.Generator) -> np.ndarray:
    """Binomial draws, inverse-CDF for small R so results are bit-stable."""
    u = gen.random(p.size)
    out = np.empty(p.size)
    small = reps <= _PPF_MAX_R
    if np.any(small):
        out[small] = binom.ppf(u[small], reps[small], p[small])
    if np.any(~small):
        out[~small] = gen.binomial(reps[~small].astype(np.int64), p[~small])
    return np.clip(np.rint(out), 0, reps)


def bootstrap(fit: FitResult, data: DecayDataset, n_samples: int,
              seed: int) -> tuple[list, int]:
    """Parametric bootstrap around the fitted curve.

    Each sample redraws success counts Binomial(R_i, F(T_i; A_hat, tau_hat))
    at the original times, refits, and keeps (A', tau').  Per-sample seeds
    are spawned as (seed, index) so ordering/parallelism cannot change the
    stream.  Returns (retained samples, number excluded as flat refits).
    """
    if n_samples < 0:
        raise ValueError("n_samples must be nonnegative")
    p = model_fidelity(fit.model, data.t, fit.A_hat, fit.tau_hat)
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    samples, n_excluded = [], 0
    for i in range(n_samples):
        gen = np.random.default_rng([seed, i])
        succ = _sample_counts(p, data.reps, gen)
        boot = DecayDataset.from_counts(data.t, data.reps.astype(int),
                                        succ.astype(int))
        refit = fit_mle(fit.model, boot, tau_bounds=fit.tau_bounds)
        if refit.flat:
            n_excluded += 1
            continue
        samples.append((refit.A_hat, refit.tau_hat))
    return samples, n_excluded


def fit_with_bootstrap(model: DecayModel, data: DecayDataset,
                       n_bootstrap: int, seed: int,
                       tau_bounds=None) -> FitResult:
    """fit_mle plus bootstrap, with the samples stored on the result."""
    fit = fit_mle(model, data, tau_bounds=tau_bounds)
    samples, n_excluded = bootstrap(fit, data, n_bootstrap, seed)
    fit.bootstrap = samples
    fit.n_excluded = n_excluded
    fit.seed = seed
    return fit


_MIN_SAMPLES = 100


def tau_interval(samples, level: float = 0.68) -> tuple[float, float]:
    """Central [(1-level)/2, (1+level)/2] interval of the tau marginal,
    nearest-rank convention."""
    taus = np.asarray([s[1] for s in samples], dtype=float)
    if taus.size < _MIN_SAMPLES:
        raise ValueError(f"need at least {_MIN_SAMPLES} retained samples, "
                         f"have {taus.size}")
    qs = np.quantile(taus, [(1 - level) / 2, (1 + level) / 2],
                     method="nearest")
    return float(qs[0]), float(qs[1])


def curve_band(samples, model: DecayModel, T, level: float = 0.68):
    """Pointwise bootstrap quantile band of F(T); T scalar or array."""
    arr = np.asarray(samples, dtype=float)
    if arr.shape[0] < _MIN_SAMPLES:
        raise ValueError(f"need at least {_MIN_SAMPLES} retained samples, "
                         f"have {arr.shape[0]}")
    a_s, tau_s = arr[:, 0], arr[:, 1]
    T_arr = np.atleast_1d(np.asarray(T, dtype=float))
    z = T_arr[None, :] / tau_s[:, None]
    decay = np.exp(-z) if model is DecayModel.EXPONENTIAL else np.exp(-z * z)
    curves = 0.5 * (1.0 + a_s[:, None] * decay)
    lo = np.quantile(curves, (1 - level) / 2, axis=0, method="nearest")
    hi = np.quantile(curves, (1 + level) / 2, axis=0, method="nearest")
    if np.isscalar(T) or np.asarray(T).ndim == 0:
        return float(lo[0]), float(hi[0])
    return lo, hi


# ---------------------------------------------------------------- file I/O

DATASET_HEADER = ["T_seconds", "repetitions", "successes"]
BAND_HEADER = ["T_seconds", "F_lo", "F_hi"]


def read_dataset_csv(path) -> DecayDataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if [h.strip() for h in header] != DATASET_HEADER:
            raise ValueError(f"{path}: expected header {','.join(DATASET_HEADER)}, "
                             f"got {','.join(header)}")
        t, reps, succ = [], [], []
        for row in reader:
            if not row or not "".join(row).strip():
                continue
            if len(row) != 3:
                raise ValueError(f"{path}: bad row {row}")
            t.append(float(row[0]))
            reps.append(int(row[1]))
            succ.append(int(row[2]))
    if not t:
        raise ValueError(f"{path}: no data rows")
    return DecayDataset.from_counts(t, reps, succ)


def write_dataset_csv(path, data: DecayDataset) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(DATASET_HEADER)
        for T, R, S in zip(data.t, data.reps, data.succ):
            w.writerow([f"{float(T)!r}", int(R), int(S)])


def write_band_csv(path, T, lo, hi) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BAND_HEADER)
        for Ti, lo_i, hi_i in zip(np.atleast_1d(T), np.atleast_1d(lo),
                                  np.atleast_1d(hi)):
            w.writerow([f"{float(Ti)!r}", f"{float(lo_i)!r}", f"{float(hi_i)!r}"])


def format_fit_report(fit: FitResult, tau_lo=None, tau_hi=None) -> str:
    """key-value text record of a fit (round-trip floats)."""
    if tau_lo is None and len(fit.bootstrap) >= _MIN_SAMPLES:
        tau_lo, tau_hi = tau_interval(fit.bootstrap)
    lines = [
        f"model {fit.model.value}",
        f"A_hat {fit.A_hat!r}",
        f"tau_hat {fit.tau_hat!r}",
        f"tau_lo {float('nan') if tau_lo is None else tau_lo!r}",
        f"tau_hi {float('nan') if tau_hi is None else tau_hi!r}",
        f"n_bootstrap {len(fit.bootstrap)}",
        f"n_excluded {fit.n_excluded}",
        f"seed {fit.seed if fit.seed is not None else -1}",
        f"flat {int(fit.flat)}",
    ]
    return "\n".join(lines) + "\n"


def parse_fit_report(text: str) -> dict:
    out = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        key, val = ln.split(None, 1)
        if key == "model":
            out[key] = val
        elif key in ("n_bootstrap", "n_excluded", "seed", "flat"):
            out[key] = int(val)
        else:
            out[key] = float(val)
    return out
