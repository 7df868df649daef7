"""Partition of H-eigenvectors into M-multiplets.

Two eigenvectors belong to the same M-multiplet when one is f(M) times the
other for an invertible f, i.e. f nonzero on the spectrum of M.  On a
finite space this is equivalent to equal support over the M-eigenvalue
clusters plus parallel components within each supported cluster.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .operators import (
    DEFAULT_TOL,
    Operator,
    SpectralDecomposition,
    Tolerance,
    hermitian_eigh,
    is_hermitian,
    matrix_function,
    phase_canonicalize,
)

# Relative projection norm below which a cluster counts as absent.
DEFAULT_SUPPORT_EPS = 1e-8

_SIZE_LABELS = {1: "singlet", 2: "doublet", 3: "triplet",
                4: "quartet", 5: "quintet"}


def size_label(n: int) -> str:
    return _SIZE_LABELS.get(n, f"{n}-plet")


@dataclass(frozen=True, eq=False)
class SupportSignature:
    """Which M-eigenvalue clusters an eigenvector lives on."""

    present_clusters: Tuple[int, ...]
    components: Dict[int, np.ndarray]


@dataclass(frozen=True, eq=False)
class MultipletPartition:
    """Disjoint classes of eigenvector indices sharing a support signature."""

    classes: Tuple[Tuple[int, ...], ...]
    signatures: Tuple[Tuple[int, ...], ...]
    labels: Tuple[str, ...]


def canonical_eigenbasis(h: Operator, m: Operator,
                         tol: Tolerance = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigenbasis of H that also diagonalizes M inside degenerate clusters.

    Resolves the basis ambiguity Definition-of-multiplet tests are
    sensitive to: within each degenerate H-eigenspace the compression
    P_E M P_E is diagonalized and the sub-basis ordered by its eigenvalue.
    """
    if not is_hermitian(m.entries):
        raise ValueError(f"M ({m.label!r}) is not Hermitian within gate")
    spec = hermitian_eigh(h, tol)
    vectors = np.array(spec.eigenvectors)
    for start, stop in spec.clusters:
        if stop - start < 2:
            continue
        block = vectors[:, start:stop]
        compressed = block.conj().T @ m.entries @ block
        compressed = (compressed + compressed.conj().T) / 2
        _, u = np.linalg.eigh(compressed)
        vectors[:, start:stop] = block @ u
    vectors = phase_canonicalize(vectors)
    vectors.setflags(write=False)
    return SpectralDecomposition(eigenvalues=spec.eigenvalues,
                                 eigenvectors=vectors,
                                 clusters=spec.clusters)


def support_signature(psi: np.ndarray, m_spec: SpectralDecomposition,
                      eps_supp: float = DEFAULT_SUPPORT_EPS) -> SupportSignature:
    """Project psi on each M-eigenvalue cluster and record the support."""
    psi = np.asarray(psi, dtype=complex)
    norm = float(np.linalg.norm(psi))
    present = []
    components = {}
    for k in range(m_spec.n_clusters):
        basis = m_spec.cluster_basis(k)
        projected = basis @ (basis.conj().T @ psi)
        p_norm = float(np.linalg.norm(projected))
        if p_norm > eps_supp * norm:
            present.append(k)
            components[k] = projected / p_norm
    return SupportSignature(present_clusters=tuple(present),
                            components=components)


def same_multiplet(psi: np.ndarray, phi: np.ndarray,
                   m_spec: SpectralDecomposition,
                   tol: Tolerance = DEFAULT_TOL,
                   eps_supp: float = DEFAULT_SUPPORT_EPS) -> bool:
    """True when phi = f(M) psi for some invertible f.

    Equal cluster support and, per supported cluster, components parallel
    up to a complex scalar.
    """
    sig_a = support_signature(psi, m_spec, eps_supp)
    sig_b = support_signature(phi, m_spec, eps_supp)
    if sig_a.present_clusters != sig_b.present_clusters:
        return False
    for k in sig_a.present_clusters:
        overlap = abs(np.vdot(sig_a.components[k], sig_b.components[k]))
        if overlap < 1.0 - tol.rtol:
            return False
    return True


def partition(h_spec: SpectralDecomposition, m_spec: SpectralDecomposition,
              tol: Tolerance = DEFAULT_TOL,
              eps_supp: float = DEFAULT_SUPPORT_EPS) -> MultipletPartition:
    """Group all eigenvectors into M-multiplets.

    Classes are built against the first-seen representative of each class,
    in eigenvector-index order.
    """
    classes: List[List[int]] = []
    representatives: List[np.ndarray] = []
    for i in range(h_spec.dim):
        psi = h_spec.eigenvectors[:, i]
        for c, rep in enumerate(representatives):
            if same_multiplet(rep, psi, m_spec, tol, eps_supp):
                classes[c].append(i)
                break
        else:
            classes.append([i])
            representatives.append(psi)
    signatures = tuple(
        support_signature(rep, m_spec, eps_supp).present_clusters
        for rep in representatives)
    return MultipletPartition(
        classes=tuple(tuple(c) for c in classes),
        signatures=signatures,
        labels=tuple(size_label(len(c)) for c in classes),
    )


def recover_f(psi: np.ndarray, phi: np.ndarray,
              m_spec: SpectralDecomposition,
              tol: Tolerance = DEFAULT_TOL,
              eps_supp: float = DEFAULT_SUPPORT_EPS) -> Dict[int, complex]:
    """Recover the connecting function f with phi = f(M) psi, per cluster.

    f is set to 1 on clusters outside the common support.  Raises when the
    vectors are not in the same multiplet or the reconstruction check
    fails.
    """
    if not same_multiplet(psi, phi, m_spec, tol, eps_supp):
        raise ValueError("vectors are not in the same M-multiplet")
    psi = np.asarray(psi, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    sig = support_signature(psi, m_spec, eps_supp)
    values: Dict[int, complex] = {}
    for k in range(m_spec.n_clusters):
        if k not in sig.components:
            values[k] = 1.0
            continue
        basis = m_spec.cluster_basis(k)
        p_psi = basis @ (basis.conj().T @ psi)
        p_phi = basis @ (basis.conj().T @ phi)
        values[k] = complex(np.vdot(p_psi, p_phi)
                            / np.vdot(p_psi, p_psi).real)
    rebuilt = matrix_function(m_spec, values).entries @ psi
    if np.linalg.norm(phi - rebuilt) > tol.gap(float(np.linalg.norm(phi))):
        raise ValueError("recovered f does not reproduce phi within tolerance")
    return values
