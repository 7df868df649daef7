"""Stability classification of H-eigenvectors relative to a ladder triple.

An eigenvector psi is stable when {psi, R psi, R^dag psi} are linearly
dependent.  Stable vectors fall into five cases; the generic case 5
produces a partner eigenvector chi = exp(-zM) psi at a shifted eigenvalue.
Requires real gamma.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .detection import GenSymTriple
from .operators import (
    DEFAULT_TOL,
    SpectralDecomposition,
    Tolerance,
    fro,
    matrix_function,
)

# Scale-free SVD rank cutoff sigma_3/sigma_1 and coefficient cutoff.
STABILITY_CUTOFF = 1e-8


@dataclass(frozen=True, eq=False)
class PartnerRecord:
    """Case-5 partner eigenvector data."""

    z: complex
    chi: np.ndarray
    e_second: float
    residual: float


@dataclass(frozen=True, eq=False)
class StabilityRecord:
    index: int
    eigenvalue: float
    stable: bool
    cases: Tuple[int, ...]
    primary_case: Optional[int]
    coeffs: Tuple[complex, complex, complex]
    r_annihilates: bool
    rd_annihilates: bool
    sum_annihilates: bool
    partner: Optional[PartnerRecord] = None


def linear_dependence(psi: np.ndarray, a: np.ndarray, b: np.ndarray,
                      cutoff: float = STABILITY_CUTOFF):
    """SVD rank test on the columns [a | b | psi].

    Returns (stable, (x, y, u)) where the null relation reads
    x*a + y*b = u*psi.  The coefficient triple is the right-singular
    vector of the smallest singular value, as a unit vector.
    """
    psi = np.asarray(psi, dtype=complex)
    if np.linalg.norm(psi) == 0:
        raise ValueError("psi must be nonzero")
    cols = np.column_stack([np.asarray(a, dtype=complex),
                            np.asarray(b, dtype=complex), psi])
    _, s, vh = np.linalg.svd(cols)
    # Fewer than 3 ambient dimensions forces linear dependence.
    s3 = float(s[2]) if s.size > 2 else 0.0
    stable = bool(s3 <= cutoff * s[0])
    null = vh[2].conj()
    x, y, u = complex(null[0]), complex(null[1]), complex(-null[2])
    return stable, (x, y, u)


def classify(psi: np.ndarray, eigenvalue: float, triple: GenSymTriple,
             m_spec: SpectralDecomposition, tol: Tolerance = DEFAULT_TOL,
             index: int = 0) -> StabilityRecord:
    """Assign the stability case(s) of one eigenvector.

    Coefficient screening: u ~ 0 is case 1; otherwise (normalized u = 1)
    y ~ 0 is case 2, x ~ 0 is case 3, x + y ~ 0 is case 4, and anything
    else is case 5 with an explicitly constructed partner.  All matching
    cases are recorded; the primary case is the smallest.
    """
    gamma = triple.gamma
    if abs(gamma.imag) > tol.atol * max(1.0, abs(gamma.real)):
        raise ValueError("stability classification requires real gamma")
    psi = np.asarray(psi, dtype=complex)
    r = triple.r.entries
    h = triple.h0.entries + r + r.conj().T
    h_residual = np.linalg.norm(h @ psi - eigenvalue * psi)
    if h_residual > tol.gap(fro(h)):
        raise ValueError(
            f"psi is not an eigenvector of H at E={eigenvalue} "
            f"(residual {h_residual:.3e})")

    a = r @ psi
    b = r.conj().T @ psi
    scale = max(1.0, fro(r))
    r_annihilates = bool(np.linalg.norm(a) <= STABILITY_CUTOFF * scale)
    rd_annihilates = bool(np.linalg.norm(b) <= STABILITY_CUTOFF * scale)
    sum_annihilates = bool(np.linalg.norm(a + b) <= STABILITY_CUTOFF * scale)

    stable, (x, y, u) = linear_dependence(psi, a, b)
    if not stable:
        return StabilityRecord(
            index=index, eigenvalue=float(eigenvalue), stable=False,
            cases=(), primary_case=None, coeffs=(x, y, u),
            r_annihilates=r_annihilates, rd_annihilates=rd_annihilates,
            sum_annihilates=sum_annihilates)

    mx = max(abs(x), abs(y), abs(u))
    cases = set()
    partner = None
    if abs(u) <= STABILITY_CUTOFF * mx:
        cases.add(1)
    else:
        x, y, u = x / u, y / u, 1.0
        cx = max(abs(x), abs(y), 1.0)
        if abs(y) <= STABILITY_CUTOFF * cx:
            cases.add(2)
        if abs(x) <= STABILITY_CUTOFF * cx:
            cases.add(3)
        if abs(x + y) <= STABILITY_CUTOFF * cx:
            cases.add(4)
        if not cases:
            partner = partner_eigenvector(psi, float(eigenvalue), (x, y),
                                          triple, m_spec, tol)
            cases.add(5)
    return StabilityRecord(
        index=index, eigenvalue=float(eigenvalue), stable=True,
        cases=tuple(sorted(cases)), primary_case=min(cases),
        coeffs=(complex(x), complex(y), complex(u)),
        r_annihilates=r_annihilates, rd_annihilates=rd_annihilates,
        sum_annihilates=sum_annihilates, partner=partner)


def partner_eigenvector(psi: np.ndarray, eigenvalue: float,
                        coeffs: Tuple[complex, complex],
                        triple: GenSymTriple,
                        m_spec: SpectralDecomposition,
                        tol: Tolerance = DEFAULT_TOL) -> PartnerRecord:
    """Construct the case-5 partner chi = exp(-zM) psi.

    z solves exp(z*gamma) = -y/x on the principal logarithm branch; the
    eigenvalue shift is eps = (exp(-z*gamma) - 1)/x.
    """
    x, y = complex(coeffs[0]), complex(coeffs[1])
    gamma = triple.gamma.real
    if gamma == 0.0:
        raise ValueError("partner construction requires gamma != 0")
    if x == 0 or y == 0:
        raise ValueError("partner construction requires x != 0 and y != 0")
    ratio = -y / x
    if abs(ratio - 1.0) <= STABILITY_CUTOFF:
        raise ValueError("x + y = 0 belongs to case 4, no partner exists")
    z = cmath.log(ratio) / gamma
    eps = (cmath.exp(-z * gamma) - 1.0) / x
    if abs(eps.imag) > tol.gap(abs(eps)):
        raise ValueError(f"eigenvalue shift {eps} is not real")
    e_second = float(eigenvalue + eps.real)

    psi = np.asarray(psi, dtype=complex)
    chi_raw = matrix_function(m_spec, lambda lam: cmath.exp(-z * lam)).entries @ psi
    r = triple.r.entries
    h = triple.h0.entries + r + r.conj().T
    chi_norm = float(np.linalg.norm(chi_raw))
    residual = float(np.linalg.norm(h @ chi_raw - e_second * chi_raw) / chi_norm)
    if residual > tol.gap(fro(h)):
        raise ValueError(f"partner residual {residual:.3e} exceeds tolerance")
    return PartnerRecord(z=z, chi=chi_raw / chi_norm,
                         e_second=e_second, residual=residual)


def scan_spectrum_stability(h_spec: SpectralDecomposition,
                            triple: GenSymTriple,
                            m_spec: SpectralDecomposition,
                            tol: Tolerance = DEFAULT_TOL) -> List[StabilityRecord]:
    """Classify every eigenvector of H, in index order."""
    return [
        classify(h_spec.eigenvectors[:, i], float(h_spec.eigenvalues[i]),
                 triple, m_spec, tol, index=i)
        for i in range(h_spec.dim)
    ]


def case_counts(records: List[StabilityRecord]) -> dict:
    """Summary histogram of primary cases; unstable counted under 0."""
    counts: dict = {}
    for rec in records:
        key = rec.primary_case if rec.stable else 0
        counts[key] = counts.get(key, 0) + 1
    return counts
