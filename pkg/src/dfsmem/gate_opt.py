"""Segmented spin-dependent-force pulses: displacement, phase, optimization.

A bichromatic drive detuned by delta_j from motional mode j displaces that
mode along alpha_j(T) = integral_0^T Omega(t) exp(i(delta_j t + phi(t))) dt.
The drive phase phi(t) is piecewise constant over equal-duration segments and
the amplitude carries sin^2 rise/fall ramps inside each segment.  A gate
decouples from the motion when every mode's trajectory closes
(|alpha_j(T)| = 0); the optimizer searches anti-symmetric phase sequences
(phi(T-t) = -phi(t)) for that closure.

Integrals are exact on the flat part of each segment and use fixed 32-node
Gauss-Legendre quadrature on the ramps, which is far below 1e-10 relative
error at the default segment durations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

_GL_X, _GL_W = np.polynomial.legendre.leggauss(32)

# Default drive geometry: three transverse modes, beat note above the band,
# twelve anti-symmetric segments over 150 us with 2 us amplitude ramps.
DEFAULT_MODE_FREQS = tuple(2 * math.pi * f for f in (1.298e6, 1.347e6, 1.381e6))
DEFAULT_BEAT_NOTE = 2 * math.pi * 1.396e6
DEFAULT_SEGMENTS = 12
DEFAULT_DURATION = 150e-6
DEFAULT_RAMP = 2e-6

# A known-good hand-optimized 12-segment solution for the default mode set,
# in units of pi; kept as a benchmark input for evaluation runs.
REFERENCE_PHASES_PI = (0.417, 0.398, 0.415, 0.363, 0.331, 0.271,
                       -0.271, -0.331, -0.363, -0.415, -0.398, -0.417)


@dataclass
class ModeSet:
    """Motional mode angular frequencies and the drive beat note (rad/s)."""

    mode_freqs: tuple
    mu: float

    def __post_init__(self):
        self.mode_freqs = tuple(float(w) for w in self.mode_freqs)
        if not self.mode_freqs:
            raise ValueError("need at least one mode")
        if any(w <= 0 for w in self.mode_freqs) or self.mu <= 0:
            raise ValueError("frequencies must be positive")

    @property
    def detunings(self) -> tuple:
        return tuple(self.mu - w for w in self.mode_freqs)


def default_modes() -> ModeSet:
    return ModeSet(DEFAULT_MODE_FREQS, DEFAULT_BEAT_NOTE)


@dataclass
class PhaseSequence:
    """Equal-duration phase segments with per-segment sin^2 amplitude ramps."""

    phases: tuple
    total_duration: float
    ramp_time: float = 0.0
    antisymmetric: bool = False

    def __post_init__(self):
        self.phases = tuple(float(p) for p in self.phases)
        self.total_duration = float(self.total_duration)
        self.ramp_time = float(self.ramp_time)
        if not self.phases:
            raise ValueError("need at least one segment")
        if self.total_duration <= 0:
            raise ValueError("total_duration must be positive")
        seg = self.total_duration / len(self.phases)
        if not 0 <= self.ramp_time <= seg / 2:
            raise ValueError(f"ramp_time must lie in [0, segment/2 = {seg / 2}]")
        if self.antisymmetric and not self.is_antisymmetric():
            raise ValueError("phases do not satisfy phi[k] = -phi[n-1-k]")

    @property
    def n_segments(self) -> int:
        return len(self.phases)

    @property
    def segment_duration(self) -> float:
        return self.total_duration / len(self.phases)

    def is_antisymmetric(self, tol: float = 1e-12) -> bool:
        n = len(self.phases)
        return all(abs(self.phases[k] + self.phases[n - 1 - k]) <= tol
                   for k in range(n))

    @classmethod
    def from_half(cls, half_phases, total_duration: float,
                  ramp_time: float = 0.0) -> "PhaseSequence":
        """Build the full anti-symmetric sequence from its first half."""
        half = [float(p) for p in half_phases]
        full = half + [-p for p in reversed(half)]
        return cls(tuple(full), total_duration, ramp_time, antisymmetric=True)

    def to_text(self) -> str:
        lines = [f"n_segments {self.n_segments}",
                 f"duration_s {self.total_duration!r}",
                 f"ramp_s {self.ramp_time!r}",
                 f"antisymmetric {int(self.antisymmetric)}"]
        lines += [f"phase {p!r}" for p in self.phases]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PhaseSequence":
        fields, phases = {}, []
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            key, val = ln.split(None, 1)
            if key == "phase":
                phases.append(float(val))
            else:
                fields[key] = val
        try:
            n = int(fields["n_segments"])
            dur = float(fields["duration_s"])
            ramp = float(fields["ramp_s"])
            anti = bool(int(fields.get("antisymmetric", "0")))
        except KeyError as exc:
            raise ValueError(f"missing field {exc} in sequence text") from None
        if len(phases) != n:
            raise ValueError(f"expected {n} phase lines, found {len(phases)}")
        return cls(tuple(phases), dur, ramp, antisymmetric=anti)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "PhaseSequence":
        with open(path) as fh:
            return cls.from_text(fh.read())


def reference_sequence() -> PhaseSequence:
    """The benchmark 12-segment sequence at the default duration and ramp."""
    return PhaseSequence(tuple(math.pi * x for x in REFERENCE_PHASES_PI),
                         DEFAULT_DURATION, DEFAULT_RAMP, antisymmetric=True)


@dataclass
class DriveProfile:
    """Overall drive strength; the ramp shape itself is fixed sin^2."""

    base_amplitude: float = 1.0

    def __post_init__(self):
        if self.base_amplitude < 0:
            raise ValueError("base_amplitude must be nonnegative")


def _ramp_quad(t0: float, r: float, deltas: np.ndarray,
               rising: bool) -> np.ndarray:
    """integral over [t0, t0+r] of env(t) exp(i delta t) dt for each delta,
    env = sin^2(pi (t-t0)/(2r)) rising or sin^2(pi (t0+r-t)/(2r)) falling."""
    if r == 0.0:
        return np.zeros(len(deltas), dtype=complex)
    s = 0.5 * r * (_GL_X + 1.0)                    # nodes in [0, r]
    w = 0.5 * r * _GL_W
    x = s if rising else (r - s)
    env = np.sin(0.5 * math.pi * x / r) ** 2
    ph = np.exp(1j * np.outer(deltas, t0 + s))
    return ph @ (env * w)


def _flat_core(a: float, b: float, deltas: np.ndarray) -> np.ndarray:
    """integral a..b of exp(i delta t) dt, closed form with the delta->0 limit."""
    out = np.empty(len(deltas), dtype=complex)
    for j, d in enumerate(deltas):
        if abs(d) * (b - a) < 1e-12:
            out[j] = b - a
        else:
            out[j] = (np.exp(1j * d * b) - np.exp(1j * d * a)) / (1j * d)
    return out


def displacement_all(seq: PhaseSequence, drive: DriveProfile,
                     deltas) -> np.ndarray:
    """alpha(delta) for several detunings at once."""
    deltas = np.asarray(deltas, dtype=float)
    tau = seq.segment_duration
    r = seq.ramp_time
    alpha = np.zeros(len(deltas), dtype=complex)
    for k, phi in enumerate(seq.phases):
        t0 = k * tau
        seg = _ramp_quad(t0, r, deltas, rising=True)
        seg = seg + _flat_core(t0 + r, t0 + tau - r, deltas)
        seg = seg + _ramp_quad(t0 + tau - r, r, deltas, rising=False)
        alpha += np.exp(1j * phi) * seg
    return drive.base_amplitude * alpha


def displacement(seq: PhaseSequence, drive: DriveProfile,
                 delta: float) -> complex:
    """Phase-space displacement alpha(delta) at gate end."""
    return complex(displacement_all(seq, drive, [delta])[0])


def closure_residual(seq: PhaseSequence, drive: DriveProfile,
                     modes: ModeSet) -> float:
    """sum_j |alpha(delta_j)|^2 normalized by (Omega T)^2; zero means all
    mode trajectories close."""
    if drive.base_amplitude == 0.0:
        return 0.0
    alpha = displacement_all(seq, drive, modes.detunings)
    norm = drive.base_amplitude * seq.total_duration
    return float(np.sum(np.abs(alpha) ** 2) / norm ** 2)


def _pieces(seq: PhaseSequence):
    """Smooth pieces (a, b, phi, env kind) of the drive: ramp-up, flat,
    ramp-down per segment; zero-length pieces dropped."""
    tau = seq.segment_duration
    r = seq.ramp_time
    out = []
    for k, phi in enumerate(seq.phases):
        t0 = k * tau
        if r > 0:
            out.append((t0, t0 + r, phi, "up"))
        if tau - 2 * r > 0:
            out.append((t0 + r, t0 + tau - r, phi, "flat"))
        if r > 0:
            out.append((t0 + tau - r, t0 + tau, phi, "down"))
    return out


def _g_at(t: np.ndarray, a: float, b: float, phi: float, kind: str,
          delta: float, r: float) -> np.ndarray:
    if kind == "up":
        env = np.sin(0.5 * math.pi * (t - a) / r) ** 2
    elif kind == "down":
        env = np.sin(0.5 * math.pi * (b - t) / r) ** 2
    else:
        env = np.ones_like(t)
    return env * np.exp(1j * (delta * t + phi))


def geometric_phase(seq: PhaseSequence, drive: DriveProfile, modes: ModeSet,
                    couplings=None) -> float:
    """Accumulated two-qubit phase
    Theta = sum_j c_j Im iint_{t>t'} Omega(t)Omega(t') e^{i delta_j (t-t')}
    e^{i(phi(t)-phi(t'))}, evaluated per smooth piece with Gauss-Legendre
    quadrature (the inner time integral is carried as a running prefix)."""
    if couplings is None:
        couplings = [1.0] * len(modes.mode_freqs)
    if len(couplings) != len(modes.mode_freqs):
        raise ValueError("couplings length must match number of modes")
    if drive.base_amplitude == 0.0:
        return 0.0
    r = seq.ramp_time
    pieces = _pieces(seq)
    theta = 0.0
    for c, delta in zip(couplings, modes.detunings):
        prefix = 0.0 + 0.0j
        total = 0.0 + 0.0j
        for (a, b, phi, kind) in pieces:
            h = 0.5 * (b - a)
            t_out = a + h * (_GL_X + 1.0)
            w_out = h * _GL_W
            g_out = _g_at(t_out, a, b, phi, kind, delta, r)
            piece_int = np.sum(w_out * g_out)
            # inner integral from a to each outer node, nested quadrature
            hh = 0.5 * (t_out - a)
            t_in = a + hh[:, None] * (_GL_X[None, :] + 1.0)
            w_in = hh[:, None] * _GL_W[None, :]
            g_in = _g_at(t_in.ravel(), a, b, phi, kind, delta, r).reshape(t_in.shape)
            inner = np.sum(w_in * g_in, axis=1)
            total += np.sum(w_out * g_out * np.conj(prefix + inner))
            prefix += piece_int
        theta += c * float(np.imag(total))
    return drive.base_amplitude ** 2 * theta


@dataclass
class OptimizeResult:
    sequence: PhaseSequence
    residual: float
    converged: bool
    n_restarts: int
    best_restart: int


def optimize_sequence(modes: ModeSet, n_segments: int = DEFAULT_SEGMENTS,
                      duration: float = DEFAULT_DURATION,
                      ramp: float = DEFAULT_RAMP, seed: int = 0,
                      n_restarts: int = 8, target_residual: float = 1e-6,
                      drive: DriveProfile | None = None) -> OptimizeResult:
    """Minimize closure_residual over anti-symmetric phase sequences.

    Only the first n_segments/2 phases are free; each restart draws them
    uniformly from (-pi, pi) with a counter-derived seed and refines with a
    derivative-free simplex.  The best (residual, restart index) wins, so
    results are reproducible for a fixed seed."""
    if n_segments < 2 or n_segments % 2:
        raise ValueError("n_segments must be even and >= 2")
    if drive is None:
        drive = DriveProfile()
    half_n = n_segments // 2

    def objective(half):
        seq = PhaseSequence.from_half(half, duration, ramp)
        return closure_residual(seq, drive, modes)

    best = None
    for ri in range(n_restarts):
        gen = np.random.default_rng([seed, ri])
        x0 = gen.uniform(-math.pi, math.pi, size=half_n)
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"fatol": 1e-12, "xatol": 1e-10,
                                "maxiter": 4000, "maxfev": 6000})
        val = float(res.fun)
        if best is None or val < best[0]:
            best = (val, ri, res.x.copy())
    residual, best_ri, x = best
    seq = PhaseSequence.from_half(x, duration, ramp)
    return OptimizeResult(sequence=seq, residual=residual,
                          converged=residual < target_residual,
                          n_restarts=n_restarts, best_restart=best_ri)
