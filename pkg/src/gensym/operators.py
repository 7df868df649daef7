"""Dense complex operators, commutators, and Hermitian eigendecomposition.

Everything downstream (symmetry detection, multiplets, stability) is built
on the small set of primitives in this module.  Operators are immutable
dense matrices; all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

# Relative Frobenius gate deciding whether a matrix counts as Hermitian.
HERMITICITY_GATE = 1e-12

# Contract bound for the eigensolver residual, relative to ||A||_F.
EIGH_RESIDUAL_BOUND = 1e-10


class NumericalError(RuntimeError):
    """A numerical routine violated its residual contract."""


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair used throughout the library."""

    atol: float = 1e-9
    rtol: float = 1e-8

    def __post_init__(self):
        if self.atol < 0 or self.rtol < 0:
            raise ValueError("tolerances must be non-negative")

    def gap(self, scale: float) -> float:
        """Gap threshold for clustering at the given scale."""
        return max(self.atol, self.rtol * scale)


DEFAULT_TOL = Tolerance()


def fro(a: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(a))


@dataclass(frozen=True, eq=False)
class Operator:
    """Immutable dense complex square matrix with a label."""

    dim: int
    entries: np.ndarray
    label: str = ""
    hermitian_hint: bool = False

    @property
    def norm(self) -> float:
        return fro(self.entries)


def is_hermitian(entries: np.ndarray, gate: float = HERMITICITY_GATE) -> bool:
    return fro(entries - entries.conj().T) <= gate * max(1.0, fro(entries))


def make_operator(dim: int, entries, label: str = "") -> Operator:
    """Validate and freeze a dense complex matrix into an Operator."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    a = np.array(entries, dtype=complex)
    if a.shape != (dim, dim):
        raise ValueError(f"entries must be {dim}x{dim}, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("entries contain non-finite values")
    a.setflags(write=False)
    return Operator(dim=dim, entries=a, label=label,
                    hermitian_hint=is_hermitian(a))


def adjoint(a: Operator) -> Operator:
    """Conjugate transpose."""
    return make_operator(a.dim, a.entries.conj().T, a.label)


def _check_dims(a: Operator, b: Operator):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def commutator(a: Operator, b: Operator) -> Operator:
    """AB - BA."""
    _check_dims(a, b)
    return make_operator(a.dim, a.entries @ b.entries - b.entries @ a.entries,
                         f"[{a.label},{b.label}]")


def iterated_commutator(h: Operator, m: Operator, n: int) -> Operator:
    """n-fold nested commutator [...[[h, m], m], ..., m]."""
    _check_dims(h, m)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    c = h.entries
    for _ in range(n):
        c = c @ m.entries - m.entries @ c
    return make_operator(h.dim, c, f"[{h.label},{m.label}]_{n}")


def frobenius_inner(a: Operator, b: Operator) -> complex:
    """trace(A^dag B)."""
    _check_dims(a, b)
    return complex(np.vdot(a.entries, b.entries))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Full Hermitian eigendecomposition with degeneracy clusters.

    eigenvalues are ascending, eigenvectors are the matching orthonormal
    columns, clusters are half-open (start, stop) index ranges grouping
    numerically degenerate eigenvalues.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    clusters: tuple

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    def cluster_value(self, k: int) -> float:
        start, stop = self.clusters[k]
        return float(np.mean(self.eigenvalues[start:stop]))

    def cluster_basis(self, k: int) -> np.ndarray:
        start, stop = self.clusters[k]
        return self.eigenvectors[:, start:stop]


def cluster_eigenvalues(values: Sequence[float], scale: float,
                        tol: Tolerance = DEFAULT_TOL) -> tuple:
    """Group ascending values into maximal runs of consecutive gaps.

    Two neighbours land in the same cluster when their gap is at most
    max(atol, rtol*scale).
    """
    values = np.asarray(values, dtype=float)
    if len(values) == 0:
        return ()
    gap = tol.gap(scale)
    clusters = []
    start = 0
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > gap:
            clusters.append((start, i))
            start = i
    clusters.append((start, len(values)))
    return tuple(clusters)


def phase_canonicalize(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive.

    Ties break to the lowest index (argmax picks the first maximum).
    """
    out = np.array(vectors, dtype=complex)
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        pivot = col[i]
        if abs(pivot) > 0:
            out[:, j] = col * (abs(pivot) / pivot)
    return out


def hermitian_eigh(a: Operator, tol: Tolerance = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian operator with canonical phases."""
    if not is_hermitian(a.entries):
        raise ValueError(f"operator {a.label!r} is not Hermitian within gate")
    sym = (a.entries + a.entries.conj().T) / 2
    w, v = np.linalg.eigh(sym)
    v = phase_canonicalize(v)
    scale = fro(a.entries)
    residual = float(np.max(np.linalg.norm(
        a.entries @ v - v * w[np.newaxis, :], axis=0)))
    if residual > EIGH_RESIDUAL_BOUND * max(1.0, scale):
        raise NumericalError(
            f"eigensolver residual {residual:.3e} exceeds contract for {a.label!r}")
    clusters = cluster_eigenvalues(w, scale, tol)
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=v, clusters=clusters)


def matrix_function(m_spec: SpectralDecomposition,
                    f: Union[Callable[[float], complex], Mapping[int, complex]],
                    label: str = "f(M)") -> Operator:
    """Apply a function to an operator through its spectral decomposition.

    ``f`` is either a callable on the cluster's representative eigenvalue or
    a mapping from cluster index to a complex value; one value is used per
    degeneracy cluster.
    """
    diag = np.empty(m_spec.dim, dtype=complex)
    for k, (start, stop) in enumerate(m_spec.clusters):
        if callable(f):
            value = f(m_spec.cluster_value(k))
        else:
            try:
                value = f[k]
            except KeyError:
                raise ValueError(f"missing value for eigenvalue cluster {k}")
        diag[start:stop] = complex(value)
    v = m_spec.eigenvectors
    return make_operator(m_spec.dim, (v * diag[np.newaxis, :]) @ v.conj().T, label)
