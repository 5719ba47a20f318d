"""Four-stage detection-sequence interpretation and a calibrated sampler.

State readout runs four sequential bright/dark detection stages per ion.  A
bright first stage means the ion left the storage manifold entirely (decay to
S or a position exchange), so the remaining stages are meaningless and the
interpreter short-circuits.  Otherwise the bright/dark tail selects one of
the retained outcome classes; unexpected double-bright tails are discarded.

Measured misassignment probabilities for the six relevant input levels ship
as a built-in confusion matrix and drive the Monte-Carlo detection sampler.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .levels import ZeemanLevel, Manifold, ZERO_F, ONE_F

BRIGHT = "B"
DARK = "D"


class DetectionOutcome(Enum):
    LEAK_TO_S_OR_HOP = "LeakToSOrHop"
    ZERO_F = "ZeroF"
    ONE_F = "OneF"
    ZEEMAN_LEAK = "ZeemanLeak"
    DISCARD = "Discard"


# Tail table for patterns whose first stage is dark, keyed by stages 2-4.
# Kept as data (not logic) so a recalibrated readout can swap it out.
DEFAULT_TAIL_TABLE = {
    (BRIGHT, DARK, DARK): DetectionOutcome.ZERO_F,
    (DARK, BRIGHT, DARK): DetectionOutcome.ONE_F,
    (DARK, DARK, BRIGHT): DetectionOutcome.ZEEMAN_LEAK,
    (DARK, DARK, DARK): DetectionOutcome.ZEEMAN_LEAK,
}


def normalize_pattern(pattern) -> tuple:
    """Coerce 'DBDD' / ['D','B','D','D'] into a 4-tuple of 'B'/'D'."""
    stages = tuple(str(s).upper() for s in pattern)
    if len(stages) != 4 or any(s not in (BRIGHT, DARK) for s in stages):
        raise ValueError(f"pattern must be four B/D stages, got {pattern!r}")
    return stages


def interpret(pattern, tail_table=None) -> DetectionOutcome:
    """Classify a four-stage detection pattern.

    A bright first stage always wins (leak to S or ion hop); with a dark
    first stage the tail is looked up in tail_table (default above) and
    anything absent from the table is discarded.
    """
    stages = normalize_pattern(pattern)
    if stages[0] == BRIGHT:
        return DetectionOutcome.LEAK_TO_S_OR_HOP
    table = DEFAULT_TAIL_TABLE if tail_table is None else tail_table
    return table.get(stages[1:], DetectionOutcome.DISCARD)


def all_patterns():
    """The 16 possible four-stage patterns, lexicographic in (B, D)."""
    out = []
    for a in (BRIGHT, DARK):
        for b in (BRIGHT, DARK):
            for c in (BRIGHT, DARK):
                for d in (BRIGHT, DARK):
                    out.append((a, b, c, d))
    return out


# The three outcome categories a retained (non-discarded) detection can give.
RETAINED_OUTCOMES = (DetectionOutcome.ZERO_F, DetectionOutcome.ONE_F,
                     DetectionOutcome.ZEEMAN_LEAK)


class ConfusionMatrix:
    """Rows of P(ZeroF), P(OneF), P(ZeemanLeak) keyed by input-level label.

    Rows are renormalized over the three retained outcomes (the small
    discarded fraction is dropped before tabulation)."""

    def __init__(self, rows: dict):
        self.rows = {}
        for key, probs in rows.items():
            label = key.label() if isinstance(key, ZeemanLevel) else str(key)
            p = np.asarray(probs, dtype=float)
            if p.shape != (3,):
                raise ValueError(f"row {label!r} needs exactly 3 probabilities")
            if np.any(p < 0) or np.any(p > 1):
                raise ValueError(f"row {label!r} has entries outside [0, 1]")
            s = p.sum()
            if not 0.5 < s < 1.5:
                raise ValueError(f"row {label!r} sums to {s}, not near 1")
            self.rows[label] = p / s

    def row(self, key) -> np.ndarray:
        label = key.label() if isinstance(key, ZeemanLevel) else str(key)
        if label not in self.rows:
            raise KeyError(f"no confusion row for {label!r}")
        return self.rows[label]

    def row_for_level(self, level: ZeemanLevel) -> np.ndarray:
        """Row for an arbitrary storage-manifold level.  Levels beyond the
        calibrated mF = 0, ±1 set reuse the same-F row of matching mF sign
        (they are even more reliably flagged as Zeeman leakage, so this is
        a conservative stand-in)."""
        if level.label() in self.rows:
            return self.rows[level.label()]
        if level.manifold is not Manifold.F_7HALF:
            raise KeyError(f"no confusion row for level {level.label()!r}")
        proxy = ZeemanLevel(level.manifold, level.F, 1 if level.mF > 0 else -1)
        if proxy.label() not in self.rows:
            raise KeyError(f"no confusion row for level {level.label()!r}")
        return self.rows[proxy.label()]

    def to_text(self) -> str:
        lines = []
        for label, p in self.rows.items():
            lines.append(f"{label} {float(p[0])!r} {float(p[1])!r} "
                         f"{float(p[2])!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ConfusionMatrix":
        rows = {}
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            parts = ln.split()
            if len(parts) != 4:
                raise ValueError(f"bad confusion row: {ln!r}")
            rows[parts[0]] = [float(x) for x in parts[1:]]
        if not rows:
            raise ValueError("empty confusion table")
        return cls(rows)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "ConfusionMatrix":
        with open(path) as fh:
            return cls.from_text(fh.read())


def default_confusion() -> ConfusionMatrix:
    """Calibrated misassignment probabilities for the six relevant levels:
    both qubit levels and their four nearest Zeeman neighbors."""
    F = Manifold.F_7HALF
    return ConfusionMatrix({
        ZERO_F: (0.990, 0.0005, 0.0095),
        ONE_F: (0.003, 0.934, 0.063),
        ZeemanLevel(F, 3, 1): (0.002, 0.001, 0.997),
        ZeemanLevel(F, 3, -1): (0.004, 0.002, 0.994),
        ZeemanLevel(F, 4, 1): (0.002, 0.006, 0.992),
        ZeemanLevel(F, 4, -1): (0.002, 0.007, 0.991),
    })


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def simulate_detection(true_state, cm: ConfusionMatrix, rng) -> DetectionOutcome:
    """Sample one detection outcome for an ion in the given level."""
    return simulate_many([true_state], cm, rng)[0]


def simulate_many(true_states, cm: ConfusionMatrix, rng) -> list:
    """Vectorized outcome sampling: one retained outcome per input level.

    Uses inverse-CDF sampling on a single uniform draw per shot so the
    sequence is reproducible from the seed regardless of row identity.
    """
    gen = _as_rng(rng)
    u = gen.random(len(true_states))
    out = []
    for uk, lvl in zip(u, true_states):
        if isinstance(lvl, ZeemanLevel):
            p = cm.row_for_level(lvl)
        else:
            p = cm.row(lvl)
        if uk < p[0]:
            out.append(RETAINED_OUTCOMES[0])
        elif uk < p[0] + p[1]:
            out.append(RETAINED_OUTCOMES[1])
        else:
            out.append(RETAINED_OUTCOMES[2])
    return out
