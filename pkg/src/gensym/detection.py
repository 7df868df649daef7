"""Detection of generalised symmetries via iterated-commutator fits.

A Hermitian M is a generalised symmetry of a Hermitian H when H splits as
H0 + R + R^dag with [H0, M] = 0 and [R, M] = gamma*R for some nonzero
complex gamma.  The split is decided by fitting the second and third
nested commutators of H with M against the first, and the triple
(H0, R, gamma) is then reconstructed in closed form.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .operators import (
    DEFAULT_TOL,
    NumericalError,
    Operator,
    SpectralDecomposition,
    Tolerance,
    fro,
    frobenius_inner,
    is_hermitian,
    make_operator,
    matrix_function,
)

GENUINE = "genuine"
CASE1 = "case1"
CASE2 = "case2"
NO_GENSYM = "no_gensym"

# Gram condition number above which the two-parameter fit is flagged.
CONDITIONING_LIMIT = 1e8

# H0 must be Hermitian within this relative bound for a verified triple.
H0_HERMITICITY_BOUND = 1e-10


@dataclass(frozen=True)
class DetectionResult:
    """Outcome of the commutator-relation fit for a pair (H, M)."""

    kind: str
    gamma1: float = 0.0
    gamma2: float = 0.0
    residual: float = 0.0
    conditioning_flag: bool = False

    @property
    def gamma(self) -> complex:
        return complex(self.gamma1, self.gamma2)

    @property
    def real_gamma(self) -> bool:
        return self.kind == CASE2 and abs(self.gamma2) <= 1e-6 * max(1.0, abs(self.gamma1))


@dataclass(frozen=True)
class GenSymTriple:
    """Reconstructed (H0, R, gamma) with verification residuals.

    Residuals are raw Frobenius norms; verify_triple compares them against
    rtol * max(1, ||H||_F).  The commutes_* flags report whether R^dag R
    and R R^dag commute with M and H0 (informational only).
    """

    h0: Operator
    r: Operator
    gamma: complex
    residual_sum: float
    residual_h0m: float
    residual_ladder: float
    commutes_rdr_m: bool
    commutes_rrd_m: bool
    commutes_rdr_h0: bool
    commutes_rrd_h0: bool
    degenerate: bool = False


def _require_hermitian_pair(h: Operator, m: Operator):
    if h.dim != m.dim:
        raise ValueError(f"dimension mismatch: {h.dim} vs {m.dim}")
    if not is_hermitian(h.entries):
        raise ValueError(f"H ({h.label!r}) is not Hermitian within gate")
    if not is_hermitian(m.entries):
        raise ValueError(f"M ({m.label!r}) is not Hermitian within gate")


def fit_case2(c1: Operator, c2: Operator, c3: Operator,
              tol: Tolerance = DEFAULT_TOL):
    """Least-squares fit of C3 = 2i*g2*C2 + (g1^2 + g2^2)*C1.

    Solves for real (alpha, beta) in C3 = i*alpha*C2 + beta*C1 using the
    real part of the Frobenius inner product, then maps to
    gamma2 = alpha/2, gamma1^2 = beta - gamma2^2.  Returns
    (gamma1, gamma2, residual, conditioning); gamma1 is NaN when the
    gamma1^2 floor fails (the fit is then rejected).
    """
    n1 = fro(c1.entries)
    if n1 == 0.0:
        raise ValueError("fit_case2 requires [H,M] != 0")
    b1 = 1j * c2.entries
    b2 = c1.entries
    gram = np.array([
        [np.vdot(b1, b1).real, np.vdot(b1, b2).real],
        [np.vdot(b2, b1).real, np.vdot(b2, b2).real],
    ])
    rhs = np.array([np.vdot(b1, c3.entries).real,
                    np.vdot(b2, c3.entries).real])
    conditioning = bool(np.linalg.cond(gram) > CONDITIONING_LIMIT)
    alpha, beta = np.linalg.lstsq(gram, rhs, rcond=None)[0]
    gamma2 = alpha / 2.0
    gamma1_sq = beta - gamma2 ** 2
    denom = max(fro(c3.entries), n1, tol.atol)
    residual = fro(c3.entries - 1j * alpha * c2.entries - beta * c1.entries) / denom
    if gamma1_sq <= max(tol.atol, 1e-10 * (gamma2 ** 2 + 1.0)):
        return float("nan"), gamma2, residual, conditioning
    return float(np.sqrt(gamma1_sq)), float(gamma2), float(residual), conditioning


def fit_case1(c1: Operator, c2: Operator, tol: Tolerance = DEFAULT_TOL):
    """Least-squares fit of C2 = i*gamma2*C1 over real gamma2."""
    n1 = fro(c1.entries)
    if n1 == 0.0:
        raise ValueError("fit_case1 requires [H,M] != 0")
    gamma2 = np.vdot(1j * c1.entries, c2.entries).real / (n1 ** 2)
    denom = max(fro(c2.entries), n1, tol.atol)
    residual = fro(c2.entries - 1j * gamma2 * c1.entries) / denom
    return float(gamma2), float(residual)


def detect(h: Operator, m: Operator, tol: Tolerance = DEFAULT_TOL) -> DetectionResult:
    """Classify M against H: genuine symmetry, case 1, case 2, or neither.

    Fit order is genuine -> case 2 -> case 1.  Case 2 is preferred because
    for Hermitian pairs in finite dimension an accepted case 1 with
    gamma2 != 0 collapses to a genuine symmetry (trace argument).
    """
    _require_hermitian_pair(h, m)
    he, me = h.entries, m.entries
    c1 = he @ me - me @ he
    genuine_scale = max(1.0, fro(he) * fro(me))
    genuine_residual = fro(c1) / genuine_scale
    if genuine_residual <= tol.rtol:
        return DetectionResult(kind=GENUINE, residual=genuine_residual)

    c2 = c1 @ me - me @ c1
    c3 = c2 @ me - me @ c2
    c1_op = make_operator(h.dim, c1)
    c2_op = make_operator(h.dim, c2)
    c3_op = make_operator(h.dim, c3)

    g1, g2, res2, conditioning = fit_case2(c1_op, c2_op, c3_op, tol)
    if not np.isnan(g1) and res2 <= tol.rtol:
        return DetectionResult(kind=CASE2, gamma1=g1, gamma2=g2,
                               residual=res2, conditioning_flag=conditioning)

    g2_only, res1 = fit_case1(c1_op, c2_op, tol)
    if abs(g2_only) > tol.atol and res1 <= tol.rtol:
        return DetectionResult(kind=CASE1, gamma2=g2_only, residual=res1,
                               conditioning_flag=conditioning)

    return DetectionResult(kind=NO_GENSYM, residual=min(res2, res1),
                           conditioning_flag=conditioning)


def _commutes(a: np.ndarray, b: np.ndarray, tol: Tolerance) -> bool:
    return fro(a @ b - b @ a) <= tol.rtol * max(1.0, fro(a) * fro(b))


def _build_triple(h: Operator, m: Operator, h0: np.ndarray, r: np.ndarray,
                  gamma: complex, tol: Tolerance,
                  degenerate: bool = False) -> GenSymTriple:
    he, me = h.entries, m.entries
    rd = r.conj().T
    residual_sum = fro(he - h0 - r - rd)
    residual_h0m = fro(h0 @ me - me @ h0)
    residual_ladder = fro((r @ me - me @ r) - gamma * r)
    rdr = rd @ r
    rrd = r @ rd
    return GenSymTriple(
        h0=make_operator(h.dim, h0, f"H0[{h.label}]"),
        r=make_operator(h.dim, r, f"R[{h.label}]"),
        gamma=complex(gamma),
        residual_sum=residual_sum,
        residual_h0m=residual_h0m,
        residual_ladder=residual_ladder,
        commutes_rdr_m=_commutes(rdr, me, tol),
        commutes_rrd_m=_commutes(rrd, me, tol),
        commutes_rdr_h0=_commutes(rdr, h0, tol),
        commutes_rrd_h0=_commutes(rrd, h0, tol),
        degenerate=degenerate,
    )


def reconstruct_case2(h: Operator, m: Operator, gamma: complex,
                      tol: Tolerance = DEFAULT_TOL) -> GenSymTriple:
    """Closed-form (H0, R) for case 2 from the first two commutators."""
    gamma = complex(gamma)
    gamma1, gamma2 = gamma.real, gamma.imag
    if gamma1 == 0.0:
        raise ValueError("reconstruct_case2 requires Re(gamma) != 0")
    he, me = h.entries, m.entries
    c1 = he @ me - me @ he
    c2 = c1 @ me - me @ c1
    mod_sq = abs(gamma) ** 2
    r = (gamma.conjugate() / (2.0 * gamma1 * mod_sq)) * (c2 + gamma.conjugate() * c1)
    h0 = (-c2 + 2j * gamma2 * c1 + mod_sq * he) / mod_sq
    return _build_triple(h, m, h0, r, gamma, tol)


def reconstruct_case1(h: Operator, m: Operator, gamma2: float,
                      tol: Tolerance = DEFAULT_TOL) -> GenSymTriple:
    """Hermitian R = R^dag reconstruction for case 1 (gamma = i*gamma2)."""
    if gamma2 == 0.0:
        raise ValueError("reconstruct_case1 requires gamma2 != 0")
    he, me = h.entries, m.entries
    c1 = he @ me - me @ he
    h0 = (1j / gamma2) * c1 + he
    r = (-1j / (2.0 * gamma2)) * c1
    degenerate = fro(c1) <= tol.rtol * max(1.0, fro(he) * fro(me))
    return _build_triple(h, m, h0, r, 1j * gamma2, tol, degenerate=degenerate)


@dataclass(frozen=True)
class TripleReport:
    """Per-condition verification of a GenSymTriple."""

    sum_ok: bool
    h0_commutes_ok: bool
    ladder_ok: bool
    h0_hermitian_ok: bool
    degenerate: bool
    residual_sum: float
    residual_h0m: float
    residual_ladder: float

    @property
    def passed(self) -> bool:
        return (self.sum_ok and self.h0_commutes_ok and self.ladder_ok
                and self.h0_hermitian_ok)


def verify_triple(h: Operator, m: Operator, triple: GenSymTriple,
                  tol: Tolerance = DEFAULT_TOL) -> TripleReport:
    """Recompute the triple residuals against (H, M) and grade each one."""
    if not (h.dim == m.dim == triple.h0.dim == triple.r.dim):
        raise ValueError("dimension mismatch between (H, M) and triple")
    he, me = h.entries, m.entries
    h0, r = triple.h0.entries, triple.r.entries
    bound = tol.rtol * max(1.0, fro(he))
    residual_sum = fro(he - h0 - r - r.conj().T)
    residual_h0m = fro(h0 @ me - me @ h0)
    residual_ladder = fro((r @ me - me @ r) - triple.gamma * r)
    h0_herm = fro(h0 - h0.conj().T) <= H0_HERMITICITY_BOUND * max(1.0, fro(h0))
    # With R ~ 0 the ladder relation holds for any gamma; flag it.
    degenerate = fro(r) <= tol.rtol * max(1.0, fro(he))
    return TripleReport(
        sum_ok=residual_sum <= bound,
        h0_commutes_ok=residual_h0m <= bound,
        ladder_ok=residual_ladder <= bound,
        h0_hermitian_ok=h0_herm,
        degenerate=degenerate,
        residual_sum=residual_sum,
        residual_h0m=residual_h0m,
        residual_ladder=residual_ladder,
    )


def canonicalize(triple: GenSymTriple) -> GenSymTriple:
    """Resolve the R <-> R^dag ambiguity: make Re(gamma) positive.

    If [R, M] = gamma*R then [R^dag, M] = -conj(gamma)*R^dag, so swapping
    (gamma, R) -> (-conj(gamma), R^dag) maps a valid triple to a valid one.
    Idempotent.
    """
    if triple.gamma.real >= 0:
        return triple
    r_dag = make_operator(triple.r.dim, triple.r.entries.conj().T, triple.r.label)
    return replace(
        triple,
        r=r_dag,
        gamma=-triple.gamma.conjugate(),
        commutes_rdr_m=triple.commutes_rrd_m,
        commutes_rrd_m=triple.commutes_rdr_m,
        commutes_rdr_h0=triple.commutes_rrd_h0,
        commutes_rrd_h0=triple.commutes_rdr_h0,
    )


def similarity_transform(triple: GenSymTriple, m_spec: SpectralDecomposition,
                         z: complex, tol: Tolerance = DEFAULT_TOL) -> Operator:
    """Spectrum-preserving conjugation exp(-zM) H exp(zM).

    Computed two ways: directly through matrix functions of M, and as
    H0 + exp(z*gamma) R + exp(-z*conj(gamma)) R^dag.  The two must agree
    within rtol; the ladder form is returned.
    """
    z = complex(z)
    gamma = triple.gamma
    h0, r = triple.h0.entries, triple.r.entries
    h = h0 + r + r.conj().T
    ladder = (h0 + cmath.exp(z * gamma) * r
              + cmath.exp(-z * gamma.conjugate()) * r.conj().T)
    e_minus = matrix_function(m_spec, lambda lam: cmath.exp(-z * lam)).entries
    e_plus = matrix_function(m_spec, lambda lam: cmath.exp(z * lam)).entries
    direct = e_minus @ h @ e_plus
    deviation = fro(direct - ladder)
    if deviation > tol.rtol * max(1.0, fro(direct), fro(ladder)):
        raise NumericalError(
            f"direct and ladder-form transforms disagree by {deviation:.3e}")
    return make_operator(triple.h0.dim, ladder, "transformed")
