"""Lindblad master-equation engine for one or two memory ions.

The error model has two ingredients: population leakage between neighboring
Zeeman sublevels within each F manifold (equal rate gamma on every directed
channel) and qubit dephasing at rate gamma_d acting on the |0>/|1> pair of
each ion, either independently per ion or as one collective operator.  The
generator is time independent, so the default evolution path is exact
exponential action on the vectorized density matrix; a fixed-step RK4
integrator is available as a fallback and for benchmarking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg
from scipy.optimize import brentq

from .backend import get_kernels
from .levels import (CompositeSpace, LevelSpace, ONE_F, ZERO_F,
                     enumerate_f_manifold, neighbor_pairs)

_F_MANIFOLD = enumerate_f_manifold()
_TWO_ION = CompositeSpace([_F_MANIFOLD, _F_MANIFOLD])

# Largest dimension whose superoperator is exponentiated densely.
_DENSE_SUPEROP_DIM = 1024


def single_ion_space() -> LevelSpace:
    return _F_MANIFOLD


def two_ion_space() -> CompositeSpace:
    return _TWO_ION


class EvolveError(RuntimeError):
    """Step control failed; carries the integration time reached."""

    def __init__(self, message: str, t_reached: float):
        super().__init__(message)
        self.t_reached = t_reached


@dataclass
class NoiseParams:
    """Leakage rate, dephasing rate (both 1/s) and dephasing correlation."""

    gamma_leak: float
    gamma_dephase: float
    dephasing_mode: str = "independent"

    def __post_init__(self):
        if self.gamma_leak < 0 or self.gamma_dephase < 0:
            raise ValueError("rates must be nonnegative")
        if self.dephasing_mode not in ("independent", "collective"):
            raise ValueError(f"unknown dephasing_mode {self.dephasing_mode!r}")


@dataclass(frozen=True)
class JumpOperator:
    """One Lindblad channel.  ion is 1-based; None marks the collective
    dephasing operator that acts on both ions at once."""

    ion: int | None
    kind: str  # "leak_up" | "leak_down" | "dephase"
    source: object = None
    target: object = None
    amplitude: float = 0.0


class DensityMatrix:
    """Density matrix over a declared level space (row-major conventions)."""

    def __init__(self, space, mat):
        mat = np.asarray(mat, dtype=np.complex128)
        if mat.shape != (space.dim, space.dim):
            raise ValueError(f"matrix shape {mat.shape} does not match space dim {space.dim}")
        self.space = space
        self.mat = mat

    @classmethod
    def pure(cls, space, amplitudes) -> "DensityMatrix":
        psi = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if psi.size != space.dim:
            raise ValueError("amplitude vector length mismatch")
        norm = np.linalg.norm(psi)
        if not math.isclose(norm, 1.0, rel_tol=0, abs_tol=1e-10):
            raise ValueError(f"state vector norm {norm} is not 1")
        return cls(space, np.outer(psi, psi.conj()))

    @classmethod
    def basis(cls, space, which) -> "DensityMatrix":
        idx = space.index(which) if not isinstance(which, int) else which
        m = np.zeros((space.dim, space.dim), dtype=np.complex128)
        m[idx, idx] = 1.0
        return cls(space, m)

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.space, self.mat.copy())

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def population(self, which) -> float:
        idx = self.space.index(which) if not isinstance(which, int) else which
        return float(self.mat[idx, idx].real)

    def validate(self, herm_tol=1e-12, trace_tol=1e-10, eig_floor=-1e-9) -> None:
        """Check Hermiticity, unit trace and positivity; raise on violation."""
        herm = np.max(np.abs(self.mat - self.mat.conj().T))
        if herm > herm_tol:
            raise ValueError(f"not Hermitian: max asymmetry {herm:.3e}")
        tr = np.trace(self.mat)
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace {tr} deviates from 1")
        lo = float(np.linalg.eigvalsh(self.mat)[0])
        if lo < eig_floor:
            raise ValueError(f"negative eigenvalue {lo:.3e}")


def build_jump_operators(params: NoiseParams, n_ions: int) -> list[JumpOperator]:
    """All effective Lindblad channels: 28 directed leakage channels per ion
    plus per-ion (independent) or one shared (collective) dephasing operator.
    Zero-rate channels are dropped."""
    if n_ions not in (1, 2):
        raise ValueError("n_ions must be 1 or 2")
    ops: list[JumpOperator] = []
    if params.gamma_leak > 0:
        amp = math.sqrt(params.gamma_leak)
        for ion in range(1, n_ions + 1):
            for lo, hi in neighbor_pairs():
                ops.append(JumpOperator(ion, "leak_up", source=lo, target=hi, amplitude=amp))
                ops.append(JumpOperator(ion, "leak_down", source=hi, target=lo, amplitude=amp))
    if params.gamma_dephase > 0:
        amp = math.sqrt(params.gamma_dephase)
        if params.dephasing_mode == "independent" or n_ions == 1:
            for ion in range(1, n_ions + 1):
                ops.append(JumpOperator(ion, "dephase", amplitude=amp))
        else:
            ops.append(JumpOperator(None, "dephase", amplitude=amp))
    return ops


def _single_ion_matrix(op: JumpOperator, space: LevelSpace) -> sp.csr_matrix:
    d = space.dim
    if op.kind == "dephase":
        m = sp.lil_matrix((d, d))
        m[space.index(ZERO_F), space.index(ZERO_F)] = op.amplitude
        m[space.index(ONE_F), space.index(ONE_F)] = -op.amplitude
        return m.tocsr()
    i, j = space.index(op.target), space.index(op.source)
    return sp.csr_matrix(([op.amplitude], ([i], [j])), shape=(d, d))


def operator_matrix(op: JumpOperator, space) -> sp.csr_matrix:
    """Materialize a JumpOperator in the full (possibly composite) space."""
    if isinstance(space, LevelSpace):
        if op.ion not in (1, None):
            raise ValueError("single-ion space cannot host an ion-2 operator")
        return _single_ion_matrix(op, space)
    factors = space.factors
    if op.ion is None:
        # collective dephasing: sum of the per-ion dephasing operators
        total = sp.csr_matrix((space.dim, space.dim))
        for ion in range(1, len(factors) + 1):
            total = total + operator_matrix(
                JumpOperator(ion, "dephase", amplitude=op.amplitude), space)
        return total
    blocks = []
    for k, f in enumerate(factors, start=1):
        if k == op.ion:
            blocks.append(_single_ion_matrix(JumpOperator(1, op.kind, op.source,
                                                          op.target, op.amplitude), f))
        else:
            blocks.append(sp.identity(f.dim, format="csr"))
    out = blocks[0]
    for b in blocks[1:]:
        out = sp.kron(out, b, format="csr")
    return out


def _space_key(space):
    if isinstance(space, LevelSpace):
        return ("single", space.levels)
    return ("composite", tuple(f.levels for f in space.factors))


@lru_cache(maxsize=16)
def _superoperator(ops_key, space_key, dim) -> sp.csr_matrix:
    # row-major vec: vec(A rho B) = kron(A, B.T) vec(rho)
    if space_key[0] == "single":
        space = LevelSpace(space_key[1])
    else:
        space = CompositeSpace([LevelSpace(lv) for lv in space_key[1]])
    gen = sp.csr_matrix((dim * dim, dim * dim))
    eye = sp.identity(dim, format="csr")
    for op in ops_key:
        L = operator_matrix(op, space)
        LdL = (L.conj().T @ L).tocsr()
        gen = gen + sp.kron(L, L.conj(), format="csr")
        gen = gen - 0.5 * sp.kron(LdL, eye, format="csr")
        gen = gen - 0.5 * sp.kron(eye, LdL.T, format="csr")
    return gen.tocsr()


def _generator(ops, space) -> sp.csr_matrix:
    return _superoperator(tuple(ops), _space_key(space), space.dim)


def evolve(rho0: DensityMatrix, ops, T: float, method: str = "auto",
           rk4_steps: int | None = None, trace_tol: float = 1e-8) -> DensityMatrix:
    """Propagate rho0 for T seconds under the given jump operators.

    method "auto" picks dense exponentiation for small spaces and sparse
    exponential action otherwise; "rk4" uses the fixed-step kernel (numba
    or numpy backend).  T=0 and an empty operator list return a copy.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    ops = [op for op in ops if op.amplitude != 0.0]
    if T == 0 or not ops:
        return rho0.copy()
    dim = rho0.space.dim
    gen = _generator(ops, rho0.space)
    y0 = rho0.mat.reshape(-1)

    if method == "auto":
        method = "expm" if dim * dim <= _DENSE_SUPEROP_DIM else "krylov"

    if method == "expm":
        prop = scipy.linalg.expm(gen.toarray() * T)
        y = prop @ y0
    elif method == "krylov":
        y = scipy.sparse.linalg.expm_multiply(gen * T, y0)
    elif method == "rk4":
        if rk4_steps is None:
            rate = float(np.max(np.abs(gen.diagonal()))) if gen.nnz else 0.0
            rk4_steps = int(min(max(20, math.ceil(T * rate / 0.05)), 2_000_000))
        y, status, t_reached = get_kernels().csr_rk4(
            gen.indptr, gen.indices, gen.data.astype(np.complex128),
            y0, float(T), int(rk4_steps), dim, trace_tol)
        if status != 0:
            raise EvolveError(
                f"trace drift beyond {trace_tol} at t={t_reached:.6g} s "
                f"({rk4_steps} steps); increase rk4_steps", t_reached)
    else:
        raise ValueError(f"unknown method {method!r}")

    return DensityMatrix(rho0.space, y.reshape(dim, dim))


def qubit_subspace_indices(space) -> list[int]:
    """Indices of the qubit-level basis states, ordered as binary strings
    (|0..0>, |0..1>, ...) with 0 -> |0_F> and 1 -> |1_F> per ion."""
    if isinstance(space, LevelSpace):
        return [space.index(ZERO_F), space.index(ONE_F)]
    out = []
    n = space.n_ions
    for bits in range(2 ** n):
        combo = tuple(ONE_F if (bits >> (n - 1 - k)) & 1 else ZERO_F for k in range(n))
        out.append(space.index(combo))
    return out


def leakage_probability(rho: DensityMatrix) -> float:
    """Total population outside the per-ion qubit levels, in [0, 1]."""
    kept = sum(rho.mat[i, i].real for i in qubit_subspace_indices(rho.space))
    return float(min(1.0, max(0.0, 1.0 - kept)))


def fit_gamma_to_leakage(target_leak: float, T: float) -> float:
    """Leakage rate gamma such that a single ion prepared in |0_F> shows the
    target leakage probability after T seconds, by monotone root bracketing."""
    if not 0.0 < target_leak < 1.0:
        raise ValueError("target_leak must be in (0, 1)")
    if T <= 0:
        raise ValueError("T must be positive")
    space = single_ion_space()
    rho0 = DensityMatrix.basis(space, ZERO_F)

    def leak_at(gamma: float) -> float:
        ops = build_jump_operators(NoiseParams(gamma, 0.0), n_ions=1)
        return leakage_probability(evolve(rho0, ops, T))

    # leak_at(0) = 0 < target; grow the upper bracket until it crosses.
    hi = 1.0 / T
    while leak_at(hi) < target_leak:
        hi *= 4.0
        if hi > 1e7 / T:
            raise ValueError(
                f"target leakage {target_leak} unreachable within bracket "
                "(population equilibrates below the target)")
    return float(brentq(lambda g: leak_at(g) - target_leak, 0.0, hi,
                        xtol=1e-16, rtol=8.9e-16, maxiter=200))


def save_density(rho: DensityMatrix, path) -> None:
    """Write a flat text record: dimension, level labels, then row-major
    (real, imag) pairs with round-trip-exact float formatting."""
    lines = [f"dim {rho.space.dim}"]
    lines += [f"level {lab}" for lab in rho.space.labels()]
    for v in rho.mat.reshape(-1):
        lines.append(f"{float(v.real)!r} {float(v.imag)!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _space_from_labels(labels: list[str]):
    from .levels import ZeemanLevel
    if "|" in labels[0]:
        cols = [lab.split("|") for lab in labels]
        n_ions = len(cols[0])
        factors = []
        for k in range(n_ions):
            seen = list(dict.fromkeys(row[k] for row in cols))
            factors.append(LevelSpace([ZeemanLevel.parse(s) for s in seen]))
        space = CompositeSpace(factors)
    else:
        space = LevelSpace([ZeemanLevel.parse(s) for s in labels])
    if space.labels() != labels:
        raise ValueError("level labels do not form a consistent space")
    return space


def load_density(path) -> DensityMatrix:
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("dim "):
        raise ValueError("missing dim header")
    dim = int(lines[0].split()[1])
    labels = []
    for ln in lines[1:1 + dim]:
        if not ln.startswith("level "):
            raise ValueError("missing level label lines")
        labels.append(ln[len("level "):])
    entries = lines[1 + dim:]
    if len(entries) != dim * dim:
        raise ValueError(f"expected {dim * dim} entries, found {len(entries)}")
    mat = np.empty(dim * dim, dtype=np.complex128)
    for k, ln in enumerate(entries):
        re_s, im_s = ln.split()
        mat[k] = complex(float(re_s), float(im_s))
    return DensityMatrix(_space_from_labels(labels), mat.reshape(dim, dim))
