#!/usr/bin/env python3
"""
Closed-form billiard data on the unit round sphere S^m.

Closed strings through A: for a unit a orthogonal to A and 1 <= k <= [(n+1)/2]
the points x_j = A cos(j psi_k) + a sin(j psi_k), psi_k = 2 pi k / (n+1),
form a billiard trajectory. Letting a range over the unit sphere of A^perp
gives the critical manifold V_p with p = [(n+1)/2] - k.

Periodic orbits (n odd): regular n-gons in central 2-planes whose consecutive
vertices make the angle alpha_p = (2 pi / n) ((n - 1) / 2 - p), 0 <= p <= (n-3)/2.

The Hessian of minus the length at these orbits splits into an in-plane block
and m - 1 identical out-of-plane blocks built from the tridiagonal (closed)
or circulant (periodic) matrix with -2 cos(angle) on the diagonal and 1 on
the off-diagonals.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from billiard_errors import BadInput
from configuration import Configuration, closed_string, cyclic
from convex_body import ConvexBody, sphere_body


ORTHONORMAL_TOL = 1e-12


@dataclass
class SphereSpectrumRecord:
    """Spectrum of the tridiagonal (or circulant) form at one critical level"""
    n: int
    k: int
    level: int
    angle: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column s-1 belongs to eigenvalue s
    index: int
    nullity: int
    critical_value: float
    periodic: bool = False

    def to_dict(self) -> dict:
        return {
            'kind': 'periodic' if self.periodic else 'closed_string',
            'n': self.n,
            'k': self.k,
            'level': self.level,
            'angle': self.angle,
            'eigenvalues': self.eigenvalues.tolist(),
            'index': self.index,
            'nullity': self.nullity,
            'critical_value': self.critical_value,
        }


@dataclass
class FullHessianRecord:
    """Closed-form Hessian in the in-plane / out-of-plane frame"""
    matrix: np.ndarray
    in_plane_eigenvalues: np.ndarray
    out_of_plane_eigenvalues: np.ndarray  # one copy; appears m - 1 times
    m: int
    index: int
    nullity: int

    def eigenvalues(self) -> np.ndarray:
        """Full spectrum as a sorted multiset"""
        values = list(self.in_plane_eigenvalues) + list(self.out_of_plane_eigenvalues) * (self.m - 1)
        return np.sort(np.array(values))

    def to_dict(self) -> dict:
        return {
            'm': self.m,
            'index': self.index,
            'nullity': self.nullity,
            'in_plane_eigenvalues': self.in_plane_eigenvalues.tolist(),
            'out_of_plane_eigenvalues': self.out_of_plane_eigenvalues.tolist(),
            'out_of_plane_multiplicity': self.m - 1,
        }


# ---------------------------------------------------------------------------
# Levels and angles
# ---------------------------------------------------------------------------

def _check_closed_range(k: int, n: int):
    if n < 1:
        raise BadInput(f"n must be at least 1, got {n}")
    if not 1 <= k <= (n + 1) // 2:
        raise BadInput(f"k must lie in 1..{(n + 1) // 2} for n = {n}, got {k}")


def closed_k_from_level(p: int, n: int) -> int:
    if not 0 <= p <= (n - 1) // 2:
        raise BadInput(f"level p must lie in 0..{(n - 1) // 2} for n = {n}, got {p}")
    return (n + 1) // 2 - p


def closed_level_from_k(k: int, n: int) -> int:
    _check_closed_range(k, n)
    return (n + 1) // 2 - k


def closed_angle(k: int, n: int) -> float:
    _check_closed_range(k, n)
    return 2.0 * math.pi * k / (n + 1)


def _check_periodic_range(n: int, p: int):
    if n < 3 or n % 2 == 0:
        raise BadInput(f"periodic families need odd n >= 3, got {n}")
    if not 0 <= p <= (n - 3) // 2:
        raise BadInput(f"level p must lie in 0..{(n - 3) // 2} for n = {n}, got {p}")


def periodic_angle(n: int, p: int) -> float:
    _check_periodic_range(n, p)
    return 2.0 * math.pi / n * ((n - 1) // 2 - p)


# ---------------------------------------------------------------------------
# Closed strings through A
# ---------------------------------------------------------------------------

def _check_orthonormal_pair(u: np.ndarray, v: np.ndarray):
    if u.shape != v.shape or u.ndim != 1 or u.shape[0] < 2:
        raise BadInput("frame vectors must be equal-length vectors in R^(m+1), m >= 1")
    if (abs(float(u @ u) - 1.0) > ORTHONORMAL_TOL or abs(float(v @ v) - 1.0) > ORTHONORMAL_TOL
            or abs(float(u @ v)) > ORTHONORMAL_TOL):
        raise BadInput("frame vectors are not orthonormal")


def closed_trajectory(A: Sequence[float], a: Sequence[float], k: int, n: int,
                      body: Optional[ConvexBody] = None) -> Configuration:
    """x_j = A cos(j psi_k) + a sin(j psi_k), j = 1..n"""
    A = np.asarray(A, dtype=float)
    a = np.asarray(a, dtype=float)
    _check_orthonormal_pair(A, a)
    psi = closed_angle(k, n)
    if body is None:
        body = sphere_body(A.shape[0] - 1)
    points = np.array([A * math.cos(j * psi) + a * math.sin(j * psi) for j in range(1, n + 1)])
    return closed_string(body, A, points)


def closed_critical_value(k: int, n: int) -> float:
    """-2 (n+1) sin(pi k / (n+1)): n+1 chords of length 2 sin(psi_k / 2)"""
    _check_closed_range(k, n)
    return -2.0 * (n + 1) * math.sin(math.pi * k / (n + 1))


def q_form_matrix(k: int, n: int) -> np.ndarray:
    """Tridiagonal matrix with -2 cos(psi_k) on the diagonal and 1 beside it"""
    psi = closed_angle(k, n)
    return -2.0 * math.cos(psi) * np.eye(n) + np.eye(n, k=1) + np.eye(n, k=-1)


def q_form_spectrum(k: int, n: int) -> SphereSpectrumRecord:
    """Eigenvalues 2[cos(pi s/(n+1)) - cos(psi_k)], eigenvectors sin(pi j s/(n+1))"""
    psi = closed_angle(k, n)
    s = np.arange(1, n + 1)
    j = np.arange(1, n + 1)
    eigenvalues = 2.0 * (np.cos(np.pi * s / (n + 1)) - math.cos(psi))
    eigenvectors = np.sin(np.pi * np.outer(j, s) / (n + 1))
    # cos is decreasing on (0, pi): negative exactly for s > 2k, zero at s = 2k
    index = sum(1 for t in range(1, n + 1) if t > 2 * k)
    nullity = 1 if 2 * k <= n else 0
    return SphereSpectrumRecord(
        n=n, k=k, level=closed_level_from_k(k, n), angle=psi,
        eigenvalues=eigenvalues, eigenvectors=eigenvectors,
        index=index, nullity=nullity, critical_value=closed_critical_value(k, n),
    )


def q_form_numeric_eigenvalues(k: int, n: int) -> np.ndarray:
    """Ascending eigenvalues of the tridiagonal form from LAPACK"""
    psi = closed_angle(k, n)
    diagonal = np.full(n, -2.0 * math.cos(psi))
    off = np.ones(n - 1)
    return eigh_tridiagonal(diagonal, off, eigvals_only=True)


def closed_tangent_frames(A: Sequence[float], a: Sequence[float], k: int, n: int) -> List[np.ndarray]:
    """Per-point bases (x_j^perp, e_3, ..., e_(m+1)) for the closed trajectory"""
    A = np.asarray(A, dtype=float)
    a = np.asarray(a, dtype=float)
    _check_orthonormal_pair(A, a)
    psi = closed_angle(k, n)
    complement = _plane_complement(A, a)
    frames = []
    for j in range(1, n + 1):
        along = -math.sin(j * psi) * A + math.cos(j * psi) * a
        frames.append(np.vstack([along[None, :], complement]))
    return frames


def _plane_complement(e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
    """Rows spanning the orthogonal complement of span(e1, e2)"""
    q, _ = np.linalg.qr(np.column_stack([e1, e2]), mode='complete')
    return q[:, 2:].T.copy()


def _in_plane_laplacian(n: int, periodic: bool) -> np.ndarray:
    lap = 2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    if periodic and n > 2:
        lap[0, n - 1] -= 1.0
        lap[n - 1, 0] -= 1.0
    return lap


def _interleave(in_plane: np.ndarray, out_of_plane: np.ndarray, m: int) -> np.ndarray:
    """Matrix in per-point ordering (in-plane, out_1, ..., out_(m-1))"""
    n = in_plane.shape[0]
    hess = np.zeros((n * m, n * m))
    for i in range(n):
        for j in range(n):
            hess[i * m, j * m] = in_plane[i, j]
            for r in range(1, m):
                hess[i * m + r, j * m + r] = out_of_plane[i, j]
    return hess


def full_hessian_closed(k: int, n: int, m: int) -> FullHessianRecord:
    """Hessian at a closed trajectory in the frames of closed_tangent_frames

    In-plane: (1/2) sin(psi/2) times the path Laplacian.
    Out-of-plane: m - 1 copies of Q_psi / (2 sin(psi/2)).
    """
    if m < 2:
        raise BadInput(f"full Hessian needs m >= 2, got {m}")
    psi = closed_angle(k, n)
    half = math.sin(psi / 2.0)
    lap = _in_plane_laplacian(n, periodic=False)
    in_plane = 0.5 * half * lap
    out_of_plane = q_form_matrix(k, n) / (2.0 * half)
    spectrum = q_form_spectrum(k, n)
    in_plane_eigs = 0.5 * half * (2.0 - 2.0 * np.cos(np.pi * np.arange(1, n + 1) / (n + 1)))
    return FullHessianRecord(
        matrix=_interleave(in_plane, out_of_plane, m),
        in_plane_eigenvalues=in_plane_eigs,
        out_of_plane_eigenvalues=spectrum.eigenvalues / (2.0 * half),
        m=m,
        index=(m - 1) * spectrum.index,
        nullity=(m - 1) * spectrum.nullity,
    )


def closed_family_distance(c: Configuration, k: int) -> float:
    """Distance from a closed string on the unit sphere to the critical manifold of turning number k"""
    if not c.is_closed_string:
        raise BadInput("closed_family_distance needs a closed-string configuration")
    n = c.n
    psi = closed_angle(k, n)
    A = c.anchor
    j = np.arange(1, n + 1)
    cos_j = np.cos(j * psi)
    sin_j = np.sin(j * psi)
    residual = c.points - np.outer(cos_j, A)
    w = sin_j @ residual
    w = w - float(w @ A) * A
    norm = float(np.linalg.norm(w))
    if norm < 1e-300:
        # sin(j psi) vanishes for every j: the family is the single alternating string
        return float(np.linalg.norm(residual))
    a = w / norm
    return float(np.linalg.norm(residual - np.outer(sin_j, a)))


# ---------------------------------------------------------------------------
# Periodic orbits
# ---------------------------------------------------------------------------

def periodic_family(n: int, p: int, frame: Tuple[Sequence[float], Sequence[float]],
                    body: Optional[ConvexBody] = None) -> Configuration:
    """Regular n-gon x_j = cos((j-1) alpha_p) e1 + sin((j-1) alpha_p) e2"""
    e1 = np.asarray(frame[0], dtype=float)
    e2 = np.asarray(frame[1], dtype=float)
    _check_orthonormal_pair(e1, e2)
    alpha = periodic_angle(n, p)
    if body is None:
        body = sphere_body(e1.shape[0] - 1)
    points = np.array([e1 * math.cos(j * alpha) + e2 * math.sin(j * alpha) for j in range(n)])
    return cyclic(body, points)


def periodic_critical_value(n: int, p: int) -> float:
    return -2.0 * n * math.sin(periodic_angle(n, p) / 2.0)


def periodic_form_matrix(n: int, p: int) -> np.ndarray:
    """Circulant matrix with -2 cos(alpha_p) on the diagonal and 1 on the cyclic neighbours"""
    alpha = periodic_angle(n, p)
    mat = -2.0 * math.cos(alpha) * np.eye(n)
    for j in range(n):
        mat[j, (j + 1) % n] += 1.0
        mat[j, (j - 1) % n] += 1.0
    return mat


def periodic_spectrum(n: int, p: int) -> SphereSpectrumRecord:
    """Eigenvalues 2[cos(2 pi s / n) - cos(alpha_p)], s = 0..n-1, with Fourier eigenvectors"""
    alpha = periodic_angle(n, p)
    q = (n - 1) // 2 - p
    s = np.arange(n)
    eigenvalues = 2.0 * (np.cos(2.0 * np.pi * s / n) - math.cos(alpha))
    j = np.arange(n)
    eigenvectors = np.cos(2.0 * np.pi * np.outer(j, s) / n)
    # cyclic distance of s from 0 above q means negative, equal to q means zero
    dist = [min(t, n - t) for t in range(n)]
    index = sum(1 for d in dist if d > q)
    nullity = sum(1 for d in dist if d == q)
    return SphereSpectrumRecord(
        n=n, k=q, level=p, angle=alpha,
        eigenvalues=eigenvalues, eigenvectors=eigenvectors,
        index=index, nullity=nullity, critical_value=periodic_critical_value(n, p),
        periodic=True,
    )


def periodic_tangent_frames(n: int, p: int, frame: Tuple[Sequence[float], Sequence[float]]) -> List[np.ndarray]:
    e1 = np.asarray(frame[0], dtype=float)
    e2 = np.asarray(frame[1], dtype=float)
    _check_orthonormal_pair(e1, e2)
    alpha = periodic_angle(n, p)
    complement = _plane_complement(e1, e2)
    frames = []
    for j in range(n):
        along = -math.sin(j * alpha) * e1 + math.cos(j * alpha) * e2
        frames.append(np.vstack([along[None, :], complement]))
    return frames


def full_hessian_periodic(n: int, p: int, m: int) -> FullHessianRecord:
    """Hessian at a regular n-gon in the frames of periodic_tangent_frames

    Index 2p(m-1), nullity 2m-1 (one rotation in the plane, 2(m-1) tilts of the plane).
    """
    if m < 2:
        raise BadInput(f"full Hessian needs m >= 2, got {m}")
    alpha = periodic_angle(n, p)
    half = math.sin(alpha / 2.0)
    lap = _in_plane_laplacian(n, periodic=True)
    spectrum = periodic_spectrum(n, p)
    in_plane_eigs = 0.5 * half * (2.0 - 2.0 * np.cos(2.0 * np.pi * np.arange(n) / n))
    return FullHessianRecord(
        matrix=_interleave(0.5 * half * lap, periodic_form_matrix(n, p) / (2.0 * half), m),
        in_plane_eigenvalues=in_plane_eigs,
        out_of_plane_eigenvalues=spectrum.eigenvalues / (2.0 * half),
        m=m,
        index=(m - 1) * spectrum.index,
        nullity=1 + (m - 1) * spectrum.nullity,
    )


def periodic_family_distance(c: Configuration, p: int) -> float:
    """Distance from a cyclic configuration on the unit sphere to the family V_p

    The best plane comes from orthogonal Procrustes on sum x_j (cos, sin)(j alpha).
    """
    if c.is_closed_string:
        raise BadInput("periodic_family_distance needs a cyclic configuration")
    n = c.n
    alpha = periodic_angle(n, p)
    j = np.arange(n)
    template = np.column_stack([np.cos(j * alpha), np.sin(j * alpha)])
    cross = c.points.T @ template
    singular = np.linalg.svd(cross, compute_uv=False)
    squared = float(np.sum(c.points * c.points)) + n - 2.0 * float(np.sum(singular))
    return math.sqrt(max(squared, 0.0))


# ---------------------------------------------------------------------------
# Negative bundles and perfectness
# ---------------------------------------------------------------------------

def negative_bundle_rank(p: int, m: int, n: int) -> int:
    """Rank of the negative bundle over the closed-string level V_p"""
    closed_k_from_level(p, n)
    if n % 2 == 0:
        return 2 * p * (m - 1)
    return max(2 * p - 1, 0) * (m - 1)


def bundle_twists(p: int, n: int) -> List[Tuple[int, str]]:
    """Negative eigen-directions s over V_p / Z_2 (n even) and the bundle each one descends to

    Even s gives the tangent bundle tau of RP^(m-1), odd s gives gamma_perp.
    """
    if n % 2:
        raise BadInput("the reflection acts freely only for even n")
    k = closed_k_from_level(p, n)
    return [(s, 'tau' if s % 2 == 0 else 'gamma_perp') for s in range(2 * k + 1, n + 1)]


def sw_class_negative_bundle(p: int, m: int) -> List[int]:
    """Coefficients of (1 + alpha)^(p(m-1)) in Z_2[alpha]/(alpha^m)"""
    if p < 0 or m < 2:
        raise BadInput("need p >= 0 and m >= 2")
    power = p * (m - 1)
    return [math.comb(power, i) % 2 for i in range(m)]


def negative_bundle_orientable(p: int, m: int) -> bool:
    return sw_class_negative_bundle(p, m)[1] == 0


def _add_shifted(total: List[int], shift: int, poly: Sequence[int]):
    needed = shift + len(poly)
    if len(total) < needed:
        total.extend([0] * (needed - len(total)))
    for i, c in enumerate(poly):
        total[shift + i] += c


def _monomial_sum(degrees: Sequence[int]) -> List[int]:
    poly: List[int] = [0]
    for d in degrees:
        _add_shifted(poly, d, [1])
    return poly


def morse_bott_poincare_closed(m: int, n: int) -> List[int]:
    """sum_p t^ind(V_p) P(V_p) with V_p = S^(m-1) (a point for odd n, p = 0)"""
    if m < 2:
        raise BadInput("needs m >= 2")
    sphere = _monomial_sum([0, m - 1])
    total: List[int] = [0]
    for p in range((n - 1) // 2 + 1):
        if n % 2 == 0:
            _add_shifted(total, 2 * p * (m - 1), sphere)
        elif p == 0:
            _add_shifted(total, 0, [1])
        else:
            _add_shifted(total, (2 * p - 1) * (m - 1), sphere)
    return total


def morse_bott_poincare_periodic(m: int, n: int) -> List[int]:
    """Rational version for V_p = unit tangent bundle of S^m, index 2p(m-1)"""
    if m < 2:
        raise BadInput("needs m >= 2")
    _check_periodic_range(n, 0)
    if m % 2:
        stiefel = _monomial_sum([0, m - 1, m, 2 * m - 1])
    else:
        stiefel = _monomial_sum([0, 2 * m - 1])
    total: List[int] = [0]
    for p in range((n - 3) // 2 + 1):
        _add_shifted(total, 2 * p * (m - 1), stiefel)
    return total
