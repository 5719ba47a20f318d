"""Ion level labels and Hilbert-space indexing.

The memory qubit lives in the 16-level F7/2 manifold (F=3 and F=4 Zeeman
sublevels); S1/2 and D5/2 labels are carried along for state preparation
and calibration bookkeeping.  Levels are labels only, no energies.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterable


class Manifold(enum.Enum):
    S_HALF = "S1/2"
    D_5HALF = "D5/2"
    F_7HALF = "F7/2"


_F_VALUES = {Manifold.S_HALF: (0, 1), Manifold.D_5HALF: (2, 3), Manifold.F_7HALF: (3, 4)}


@dataclass(frozen=True)
class ZeemanLevel:
    """A single hyperfine Zeeman sublevel |manifold, F, mF>."""

    manifold: Manifold
    F: int
    mF: int

    def __post_init__(self):
        if self.F not in _F_VALUES[self.manifold]:
            raise ValueError(f"F={self.F} not valid for manifold {self.manifold.value}")
        if abs(self.mF) > self.F:
            raise ValueError(f"|mF|={abs(self.mF)} exceeds F={self.F}")

    def label(self) -> str:
        return f"{self.manifold.value}:F={self.F},mF={self.mF}"

    @classmethod
    def parse(cls, text: str) -> "ZeemanLevel":
        m = re.fullmatch(r"(S1/2|D5/2|F7/2):F=(-?\d+),mF=(-?\d+)", text.strip())
        if m is None:
            raise ValueError(f"unparseable level label: {text!r}")
        return cls(Manifold(m.group(1)), int(m.group(2)), int(m.group(3)))

    def __str__(self) -> str:
        return self.label()


# Qubit and bookkeeping levels used throughout the toolkit.
ZERO_S = ZeemanLevel(Manifold.S_HALF, 0, 0)
ONE_S = ZeemanLevel(Manifold.S_HALF, 1, 0)
ZERO_D = ZeemanLevel(Manifold.D_5HALF, 2, 0)
ONE_D = ZeemanLevel(Manifold.D_5HALF, 3, 0)
ZERO_F = ZeemanLevel(Manifold.F_7HALF, 3, 0)
ONE_F = ZeemanLevel(Manifold.F_7HALF, 4, 0)
# Field-sensitive Zeeman pair used for gradient calibration.
ZERO_PRIME = ZeemanLevel(Manifold.S_HALF, 0, 0)
ONE_PRIME = ZeemanLevel(Manifold.S_HALF, 1, 1)

QUBIT_LEVELS = (ZERO_F, ONE_F)


class LevelSpace:
    """Ordered set of single-ion levels with a stable level -> index map."""

    def __init__(self, levels: Iterable[ZeemanLevel]):
        self.levels: tuple[ZeemanLevel, ...] = tuple(levels)
        self._index = {lvl: i for i, lvl in enumerate(self.levels)}
        if len(self._index) != len(self.levels):
            raise ValueError("duplicate levels in space")

    @property
    def dim(self) -> int:
        return len(self.levels)

    def index(self, level: ZeemanLevel) -> int:
        return self._index[level]

    def __contains__(self, level: ZeemanLevel) -> bool:
        return level in self._index

    def __iter__(self):
        return iter(self.levels)

    def labels(self) -> list[str]:
        return [lvl.label() for lvl in self.levels]

    def __eq__(self, other) -> bool:
        return isinstance(other, LevelSpace) and self.levels == other.levels

    def __hash__(self) -> int:
        return hash(self.levels)

    def __repr__(self) -> str:
        return f"LevelSpace(dim={self.dim})"


class CompositeSpace:
    """Tensor product of per-ion level spaces, row-major index convention."""

    def __init__(self, factors: Iterable[LevelSpace]):
        self.factors: tuple[LevelSpace, ...] = tuple(factors)
        if not self.factors:
            raise ValueError("need at least one factor")

    @property
    def dim(self) -> int:
        d = 1
        for f in self.factors:
            d *= f.dim
        return d

    @property
    def n_ions(self) -> int:
        return len(self.factors)

    def index(self, levels: tuple[ZeemanLevel, ...]) -> int:
        if len(levels) != len(self.factors):
            raise ValueError("level tuple length mismatch")
        idx = 0
        for f, lvl in zip(self.factors, levels):
            idx = idx * f.dim + f.index(lvl)
        return idx

    def level_tuple(self, idx: int) -> tuple[ZeemanLevel, ...]:
        out = []
        for f in reversed(self.factors):
            idx, r = divmod(idx, f.dim)
            out.append(f.levels[r])
        return tuple(reversed(out))

    def labels(self) -> list[str]:
        per_ion = [f.labels() for f in self.factors]
        return ["|".join(combo) for combo in itertools.product(*per_ion)]

    def __eq__(self, other) -> bool:
        return isinstance(other, CompositeSpace) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        return f"CompositeSpace(n_ions={self.n_ions}, dim={self.dim})"


def enumerate_f_manifold() -> LevelSpace:
    """All 16 F7/2 sublevels, ordered (F=3, mF=-3..3) then (F=4, mF=-4..4).

    The ordering is fixed so serialized indices stay stable: index 3 is the
    qubit |0> level (F=3, mF=0) and index 11 is |1> (F=4, mF=0).
    """
    levels = [ZeemanLevel(Manifold.F_7HALF, F, mF) for F in (3, 4) for mF in range(-F, F + 1)]
    return LevelSpace(levels)


def neighbor_pairs(cross_manifold: bool = False) -> list[tuple[ZeemanLevel, ZeemanLevel]]:
    """Undirected (level, level+1-in-mF) pairs within each F manifold.

    Returns 6 pairs on the F=3 chain and 8 on the F=4 chain; each pair feeds
    two directed jump channels.  ``cross_manifold=True`` additionally links
    equal-mF levels across F=3 and F=4 (a higher-order channel, off by
    default and not part of the calibrated error model).
    """
    pairs = []
    for F in (3, 4):
        for mF in range(-F, F):
            pairs.append((ZeemanLevel(Manifold.F_7HALF, F, mF),
                          ZeemanLevel(Manifold.F_7HALF, F, mF + 1)))
    if cross_manifold:
        for mF in range(-3, 4):
            pairs.append((ZeemanLevel(Manifold.F_7HALF, 3, mF),
                          ZeemanLevel(Manifold.F_7HALF, 4, mF)))
    return pairs
