#!/usr/bin/env python3
"""
Multi-start search for critical points of the negative length functional.

Each start is refined by a trust-region Newton iteration on the product of
tangent spaces, retracting by closest-point projection. Newton targets every
critical point, not only minima, so saddles of any index are found. Solutions
already reached from the same start are deflated away and the start is rerun
to look for more. Stalled runs on the boundary of G_eps whose gradient points
out of G_eps are boundary artifacts and are rejected. Accepted points are
classified by their Hessian spectrum and merged under the symmetry group.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh

from billiard_errors import BadInput, BilliardError, ConfigError, NotCritical
from configuration import (Configuration, ConfigurationKind, TangentVector, check_admissible,
                           closed_string, cyclic, default_epsilon, gap_product, gradient,
                           group_images, hessian, in_G_epsilon, log_gap_gradient, min_gap,
                           neg_total_length, orbit_size, reflection_law_residual, retract)
from convex_body import ConvexBody, body_scale, surface_project

logger = logging.getLogger(__name__)

MERIT_DECREASE = 1e-4
TRUST_SHRINK = 0.25
TRUST_GROW = 2.0
MIN_TRUST_REL = 1e-14
START_RESAMPLES = 20


class OrbitKind(Enum):
    """Symmetry group an orbit is counted under"""
    Z2 = "Z2"
    DN = "Dn"


class FilterVerdict(Enum):
    KEEP = "keep"
    REJECT = "reject"


class RunStatus(Enum):
    """Outcome of one Newton run"""
    CONVERGED = "converged"
    STALLED = "stalled"
    FAILED = "failed"


@dataclass
class SolverSettings:
    """Knobs of the multi-start search; None means 'derive from the problem'"""
    starts: Optional[int] = None
    seed: int = 0
    epsilon: Optional[float] = None
    grad_tol: float = 1e-9
    max_iter: int = 60
    null_threshold: float = 1e-6
    merge_grid: float = 1e-7
    merge_tol: float = 1e-6
    deflation_rounds: int = 1
    deflation_power: float = 2.0
    deflation_shift: float = 1.0
    gradient_fallback_iters: int = 10
    winding_fraction: float = 0.5
    jitter: float = 0.05
    boundary_band: float = 0.1
    workers: int = 1

    def resolved_starts(self, n: int, m: int) -> int:
        return self.starts if self.starts is not None else 200 * n * m

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(data: dict) -> 'SolverSettings':
        defaults = SolverSettings()
        known = {k: data.get(k, getattr(defaults, k)) for k in asdict(defaults)}
        unknown = set(data) - set(known)
        if unknown:
            raise ConfigError(f"unknown solver settings: {sorted(unknown)}")
        return SolverSettings(**known)


@dataclass
class Certificate:
    """Evidence that a representative is a billiard trajectory"""
    gradient_norm: float
    min_gap: float
    newton_residual_history: List[float]
    reflection_residual: float

    def to_dict(self) -> dict:
        return {
            'gradient_norm': self.gradient_norm,
            'min_gap': self.min_gap,
            'newton_residual_history': list(self.newton_residual_history),
            'reflection_residual': self.reflection_residual,
        }


@dataclass
class CriticalOrbit:
    """One symmetry orbit of critical configurations"""
    representative: Configuration
    length: float
    morse_index: int
    nullity: int
    orbit_kind: OrbitKind
    orbit_size: int
    certificate: Certificate
    start_index: int = -1

    @property
    def is_morse(self) -> bool:
        return self.nullity == 0

    def to_dict(self, body_ref: Optional[str] = None) -> dict:
        return {
            'length': self.length,
            'morse_index': self.morse_index,
            'nullity': self.nullity,
            'orbit_kind': self.orbit_kind.value,
            'orbit_size': self.orbit_size,
            'start_index': self.start_index,
            'certificate': self.certificate.to_dict(),
            'representative': self.representative.to_dict(body_ref=body_ref),
        }


@dataclass
class CriticalFamily:
    """Degenerate critical points sharing a critical value and index"""
    length: float
    morse_index: int
    nullity: int
    members: int
    representative: CriticalOrbit

    def to_dict(self) -> dict:
        return {
            'length': self.length,
            'morse_index': self.morse_index,
            'nullity': self.nullity,
            'members': self.members,
        }


@dataclass
class SolveReport:
    kind: ConfigurationKind
    n: int
    orbits: List[CriticalOrbit]
    starts_attempted: int
    converged: int
    rejected_boundary: int
    rejected_duplicate: int
    settings: SolverSettings
    epsilon: float
    diverged: int = 0
    families: List[CriticalFamily] = field(default_factory=list)
    near_boundary: int = 0
    warnings: List[str] = field(default_factory=list)
    body: Optional[ConvexBody] = None

    @property
    def isolated_orbits(self) -> List[CriticalOrbit]:
        return [o for o in self.orbits if o.is_morse]

    @property
    def all_morse(self) -> bool:
        return bool(self.orbits) and all(o.is_morse for o in self.orbits)

    @property
    def distinct_critical_orbits(self) -> int:
        """Lower count of distinct orbits: each degenerate family holds at least one"""
        return len(self.isolated_orbits) + len(self.families)

    def to_dict(self) -> dict:
        body = self.body
        if body is None and self.orbits:
            body = self.orbits[0].representative.body
        return {
            'kind': self.kind.value,
            'n': self.n,
            'body': body.to_dict() if body is not None else None,
            'epsilon': self.epsilon,
            'starts_attempted': self.starts_attempted,
            'converged': self.converged,
            'diverged': self.diverged,
            'rejected_boundary': self.rejected_boundary,
            'rejected_duplicate': self.rejected_duplicate,
            'near_boundary': self.near_boundary,
            'isolated_orbits': len(self.isolated_orbits),
            'degenerate_families': len(self.families),
            'warnings': list(self.warnings),
            'settings': self.settings.to_dict(),
            'orbits': [o.to_dict(body_ref='body') for o in self.orbits],
            'families': [f.to_dict() for f in self.families],
        }

    def summary_rows(self) -> List[dict]:
        return [{
            'orbit_id': i,
            'length': o.length,
            'index': o.morse_index,
            'nullity': o.nullity,
            'orbit_size': o.orbit_size,
        } for i, o in enumerate(self.orbits)]

    def display_summary(self):
        print("\n" + "=" * 60)
        print(f"SOLVE REPORT: {self.kind.value}, n = {self.n}")
        print("=" * 60)
        print(f"Starts: {self.starts_attempted} | converged: {self.converged} | "
              f"boundary rejects: {self.rejected_boundary} | duplicates: {self.rejected_duplicate}")
        print(f"epsilon = {self.epsilon:.3e} | orbits near the boundary: {self.near_boundary}")
        for i, o in enumerate(self.orbits):
            marker = "" if o.is_morse else "  (degenerate)"
            print(f"{i}. length {o.length:.12f} | index {o.morse_index} | nullity {o.nullity} | "
                  f"orbit size {o.orbit_size}{marker}")
        for fam in self.families:
            print(f"   family: length {fam.length:.12f}, index {fam.morse_index}, "
                  f"nullity {fam.nullity}, {fam.members} representatives")
        for warning in self.warnings:
            print(f"⚠️  {warning}")
        print("=" * 60)


@dataclass
class RefineResult:
    """Final point of one Newton run and how it ended"""
    config: Configuration
    status: RunStatus
    history: List[float]


# ---------------------------------------------------------------------------
# Classification and filtering
# ---------------------------------------------------------------------------

def classify(c: Configuration, null_threshold: float = 1e-6,
             grad_tol: float = 1e-8) -> Tuple[int, int, bool]:
    """(morse_index, nullity, is_generic) from the Hessian spectrum

    Eigenvalues within null_threshold * max|eigenvalue| of zero count as null.
    """
    g = gradient(c)
    if g.norm() > grad_tol:
        raise NotCritical(f"gradient norm {g.norm():.3e} exceeds {grad_tol:.1e}")
    eigenvalues = eigh(hessian(c), eigvals_only=True)
    scale = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    cut = null_threshold * scale if scale > 0 else null_threshold
    index = int(np.sum(eigenvalues < -cut))
    nullity = int(np.sum(np.abs(eigenvalues) <= cut))
    return index, nullity, nullity == 0


def boundary_filter(c: Configuration, epsilon: float, band: float = 0.1,
                    grad_tol: float = 1e-9) -> FilterVerdict:
    """Reject points on the boundary band of G_eps where the gradient points out of G_eps"""
    g = gradient(c)
    if g.norm() <= grad_tol:
        return FilterVerdict.KEEP
    if gap_product(c) > (1.0 + band) * epsilon:
        return FilterVerdict.KEEP
    if g.dot(log_gap_gradient(c)) < 0:
        return FilterVerdict.REJECT
    return FilterVerdict.KEEP


# ---------------------------------------------------------------------------
# Canonical forms and merging
# ---------------------------------------------------------------------------

def canonical_key(c: Configuration, grid: float) -> Tuple[int, ...]:
    """Lexicographically smallest snapped coordinate tuple over the group orbit"""
    keys = []
    for image in group_images(c):
        snapped = np.rint(image.points.reshape(-1) / grid).astype(np.int64)
        keys.append(tuple(int(v) for v in snapped))
    return min(keys)


def canonical_representative(c: Configuration, grid: float) -> Configuration:
    best = None
    best_key = None
    for image in group_images(c):
        key = tuple(int(v) for v in np.rint(image.points.reshape(-1) / grid).astype(np.int64))
        if best_key is None or key < best_key:
            best, best_key = image, key
    return best


def _orbit_distance(a: Configuration, b: Configuration) -> float:
    return min(float(np.max(np.abs(image.points - b.points))) for image in group_images(a))


def deduplicate(orbits: Sequence[CriticalOrbit], merge_grid: float,
                merge_tol: float) -> Tuple[List[CriticalOrbit], int]:
    """Keep the first orbit of every symmetry class; returns (unique, duplicates dropped)

    Two orbits merge when their canonical keys agree or when some group image
    of one is within merge_tol of the other.
    """
    unique: List[CriticalOrbit] = []
    keys: List[Tuple[int, ...]] = []
    dropped = 0
    for orbit in orbits:
        key = canonical_key(orbit.representative, merge_grid)
        duplicate = False
        for seen, seen_key in zip(unique, keys):
            if key == seen_key or _orbit_distance(orbit.representative, seen.representative) <= merge_tol:
                duplicate = True
                break
        if duplicate:
            dropped += 1
            continue
        unique.append(orbit)
        keys.append(key)
    return unique, dropped


def group_families(orbits: Sequence[CriticalOrbit], value_tol: float) -> List[CriticalFamily]:
    """Collect degenerate orbits with equal critical value and index"""
    families: List[CriticalFamily] = []
    for orbit in orbits:
        if orbit.is_morse:
            continue
        for fam in families:
            if fam.morse_index == orbit.morse_index and abs(fam.length - orbit.length) <= value_tol:
                fam.members += 1
                break
        else:
            families.append(CriticalFamily(orbit.length, orbit.morse_index, orbit.nullity, 1, orbit))
    return families


# ---------------------------------------------------------------------------
# Newton refinement
# ---------------------------------------------------------------------------

def _deflation(c: Configuration, deflated: Sequence[Configuration], power: float,
               shift: float) -> Tuple[float, TangentVector]:
    """Deflation factor M(c) and the tangential gradient of log M"""
    factor = 1.0
    grad = np.zeros((c.n, c.m))
    for other in deflated:
        best = None
        for image in group_images(other):
            diff = c.points - image.points
            dist = float(np.linalg.norm(diff))
            if best is None or dist < best[0]:
                best = (dist, diff)
        dist, diff = best
        if dist == 0.0:
            return float('inf'), TangentVector(grad)
        inv = dist ** (-power)
        factor *= inv + shift
        coeff = -power * dist ** (-power - 1) / (inv + shift) / dist
        grad += np.array([b @ d for b, d in zip(c.bases, diff)]) * coeff
    return factor, TangentVector(grad)


def _newton_direction(g: np.ndarray, hess: np.ndarray, cut_rel: float) -> np.ndarray:
    """Pseudo-inverse Newton step ignoring eigenvalues below cut_rel * max|eigenvalue|"""
    eigenvalues, eigenvectors = eigh(hess)
    scale = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    if scale == 0.0:
        return np.zeros_like(g)
    keep = np.abs(eigenvalues) > cut_rel * scale
    coeffs = eigenvectors.T @ g
    step_coeffs = np.where(keep, -coeffs / np.where(keep, eigenvalues, 1.0), 0.0)
    return eigenvectors @ step_coeffs


def _trial(c: Configuration, step: np.ndarray, epsilon: float) -> Optional[Configuration]:
    try:
        trial = retract(c, TangentVector.from_flat(step, c.n, c.m))
        check_admissible(trial)
    except BilliardError:
        return None
    if not in_G_epsilon(trial, epsilon):
        return None
    return trial


def newton_refine(c: Configuration, settings: SolverSettings, epsilon: Optional[float] = None,
                  deflated: Sequence[Configuration] = ()) -> RefineResult:
    """Trust-region Newton from c toward a critical point not among `deflated`

    The merit is M(x) |grad L(x)| with M the deflation factor. Each iteration
    tries the deflated Newton step clipped to the trust radius; during the
    first gradient_fallback_iters iterations a rejected Newton step is
    replaced by the steepest-descent direction of |grad L|^2.
    """
    if epsilon is None:
        epsilon = default_epsilon(c.body, c.kind, c.n)
    diameter = c.body.diameter
    radius = 0.2 * diameter
    max_radius = diameter
    history: List[float] = []

    def merit(x: Configuration) -> Tuple[float, np.ndarray]:
        g = gradient(x).flat()
        factor, _ = _deflation(x, deflated, settings.deflation_power, settings.deflation_shift)
        return factor * float(np.linalg.norm(g)), g

    try:
        current_merit, g = merit(c)
    except BilliardError:
        return RefineResult(c, RunStatus.FAILED, history)

    for iteration in range(settings.max_iter):
        g_norm = float(np.linalg.norm(g))
        history.append(g_norm)
        if g_norm <= settings.grad_tol:
            return RefineResult(c, RunStatus.CONVERGED, history)
        if radius < MIN_TRUST_REL * diameter:
            break

        hess = hessian(c)
        step = _newton_direction(g, hess, settings.null_threshold)
        if deflated:
            factor, log_grad = _deflation(c, deflated, settings.deflation_power, settings.deflation_shift)
            denom = 1.0 - float(log_grad.flat() @ step)
            if np.isfinite(denom) and abs(denom) > 1e-12:
                step = step / denom

        candidates = [step]
        if iteration < settings.gradient_fallback_iters:
            candidates.append(-(hess @ g))

        accepted = False
        for direction in candidates:
            length = float(np.linalg.norm(direction))
            if length == 0.0 or not np.isfinite(length):
                continue
            clipped = direction * min(1.0, radius / length)
            trial = _trial(c, clipped, epsilon)
            if trial is None:
                continue
            try:
                trial_merit, trial_g = merit(trial)
            except BilliardError:
                continue
            if trial_merit <= (1.0 - MERIT_DECREASE) * current_merit:
                if length <= radius:
                    radius = min(max_radius, TRUST_GROW * radius)
                c, current_merit, g = trial, trial_merit, trial_g
                accepted = True
                break
        if not accepted:
            radius *= TRUST_SHRINK
        logger.debug("iteration %d: |grad| = %.3e, radius = %.3e, accepted = %s",
                     iteration, g_norm, radius, accepted)

    g_norm = float(np.linalg.norm(g))
    if g_norm <= settings.grad_tol:
        history.append(g_norm)
        return RefineResult(c, RunStatus.CONVERGED, history)
    return RefineResult(c, RunStatus.STALLED, history)


# ---------------------------------------------------------------------------
# Start generation
# ---------------------------------------------------------------------------

def _random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    while True:
        v = rng.standard_normal(dim)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm


def _uniform_points(body: ConvexBody, count: int, rng: np.random.Generator) -> np.ndarray:
    scale = body_scale(body)
    return np.array([surface_project(body, _random_unit(rng, body.ambient_dim) * scale)
                     for _ in range(count)])


def _winding_points(body: ConvexBody, kind: ConfigurationKind, n: int,
                    anchor: Optional[np.ndarray], rng: np.random.Generator, jitter: float) -> np.ndarray:
    """Jittered polygon of random rotation number in a random central plane"""
    dim = body.ambient_dim
    scale = body_scale(body)
    if kind == ConfigurationKind.CLOSED_STRING:
        e1 = anchor / np.linalg.norm(anchor)
        v = rng.standard_normal(dim)
        v = v - float(v @ e1) * e1
        e2 = v / np.linalg.norm(v)
        winding = int(rng.integers(1, n + 1))
        angles = [2.0 * np.pi * winding * j / (n + 1) for j in range(1, n + 1)]
    else:
        q, _ = np.linalg.qr(rng.standard_normal((dim, 2)))
        e1, e2 = q[:, 0], q[:, 1]
        winding = int(rng.integers(1, n))
        offset = rng.uniform(0.0, 2.0 * np.pi)
        angles = [offset + 2.0 * np.pi * winding * j / n for j in range(n)]
    points = []
    for theta in angles:
        p = scale * (np.cos(theta) * e1 + np.sin(theta) * e2)
        p = p + jitter * scale * rng.standard_normal(dim)
        if np.linalg.norm(p) < 1e-9 * scale:
            p = p + 1e-3 * scale * e1
        points.append(surface_project(body, p))
    return np.array(points)


def make_start(body: ConvexBody, kind: ConfigurationKind, n: int, anchor: Optional[np.ndarray],
               settings: SolverSettings, epsilon: float, index: int) -> Optional[Configuration]:
    """Start number `index`; depends only on (seed, index)"""
    rng = np.random.default_rng([settings.seed, index])
    winding = rng.random() < settings.winding_fraction
    if kind == ConfigurationKind.CYCLIC and n < 2:
        return None
    for _ in range(START_RESAMPLES):
        if winding:
            points = _winding_points(body, kind, n, anchor, rng, settings.jitter)
        else:
            points = _uniform_points(body, n, rng)
        if kind == ConfigurationKind.CLOSED_STRING:
            c = closed_string(body, anchor, points)
        else:
            c = cyclic(body, points)
        try:
            check_admissible(c)
        except BilliardError:
            continue
        if in_G_epsilon(c, epsilon):
            return c
    return None


# ---------------------------------------------------------------------------
# Multi-start driver
# ---------------------------------------------------------------------------

@dataclass
class _StartOutcome:
    index: int
    candidates: List[Tuple[Configuration, List[float]]]
    converged: int = 0
    rejected_boundary: int = 0
    diverged: int = 0


def _run_start(job: Tuple[ConvexBody, ConfigurationKind, int, Optional[np.ndarray],
                          SolverSettings, float, int]) -> _StartOutcome:
    body, kind, n, anchor, settings, epsilon, index = job
    outcome = _StartOutcome(index=index, candidates=[])
    start = make_start(body, kind, n, anchor, settings, epsilon, index)
    if start is None:
        outcome.diverged += 1
        return outcome
    found: List[Configuration] = []
    for round_ in range(settings.deflation_rounds + 1):
        try:
            result = newton_refine(start, settings, epsilon, deflated=found)
        except BilliardError as e:
            logger.debug("start %d, round %d failed: %s", index, round_, e)
            if round_ == 0:
                outcome.diverged += 1
            break
        if result.status == RunStatus.CONVERGED:
            outcome.converged += 1
            outcome.candidates.append((result.config, result.history))
            found.append(result.config)
            continue
        # a deflated rerun that finds nothing new is not a failure of the start
        if round_ > 0:
            break
        if (result.status == RunStatus.STALLED and
                boundary_filter(result.config, epsilon, settings.boundary_band,
                                settings.grad_tol) == FilterVerdict.REJECT):
            outcome.rejected_boundary += 1
        else:
            outcome.diverged += 1
        break
    return outcome


def _build_orbit(c: Configuration, history: List[float], settings: SolverSettings,
                 orbit_kind: OrbitKind, start_index: int) -> CriticalOrbit:
    grid = settings.merge_grid * c.body.diameter
    rep = canonical_representative(c, grid)
    index, nullity, _ = classify(rep, settings.null_threshold, max(settings.grad_tol, 1e-12) * 10)
    g_norm = gradient(rep).norm()
    return CriticalOrbit(
        representative=rep,
        length=-neg_total_length(rep),
        morse_index=index,
        nullity=nullity,
        orbit_kind=orbit_kind,
        orbit_size=orbit_size(rep, settings.merge_tol * c.body.diameter),
        certificate=Certificate(
            gradient_norm=g_norm,
            min_gap=min_gap(rep),
            newton_residual_history=list(history),
            reflection_residual=reflection_law_residual(rep),
        ),
        start_index=start_index,
    )


def _solve(body: ConvexBody, kind: ConfigurationKind, n: int, anchor: Optional[np.ndarray],
           settings: SolverSettings) -> SolveReport:
    epsilon = settings.epsilon if settings.epsilon is not None else default_epsilon(body, kind, n)
    starts = settings.resolved_starts(n, body.dim_m)
    jobs = [(body, kind, n, anchor, settings, epsilon, i) for i in range(starts)]
    if settings.workers > 1:
        with ProcessPoolExecutor(max_workers=settings.workers) as pool:
            outcomes = list(pool.map(_run_start, jobs, chunksize=max(1, starts // (4 * settings.workers))))
    else:
        outcomes = [_run_start(job) for job in jobs]

    orbit_kind = OrbitKind.Z2 if kind == ConfigurationKind.CLOSED_STRING else OrbitKind.DN
    candidates: List[CriticalOrbit] = []
    converged = rejected_boundary = diverged = 0
    for outcome in outcomes:
        converged += outcome.converged
        rejected_boundary += outcome.rejected_boundary
        diverged += outcome.diverged
        built = 0
        for config, history in outcome.candidates:
            try:
                candidates.append(_build_orbit(config, history, settings, orbit_kind, outcome.index))
                built += 1
            except BilliardError as e:
                logger.debug("dropping candidate from start %d: %s", outcome.index, e)
        if outcome.candidates and not built:
            diverged += 1

    diameter = body.diameter
    orbits, duplicates = deduplicate(candidates, settings.merge_grid * diameter,
                                     settings.merge_tol * diameter)

    def order(o: CriticalOrbit):
        return -round(o.length, 9), o.morse_index, canonical_key(o.representative, settings.merge_grid * diameter)

    orbits.sort(key=order)
    families = group_families(orbits, 1e-7 * diameter * (n + 1))
    # one representative per degenerate family; the rest are recorded in members
    orbits = sorted([o for o in orbits if o.is_morse] + [f.representative for f in families], key=order)
    near = sum(1 for o in orbits if gap_product(o.representative) <= 10.0 * epsilon)

    report = SolveReport(
        kind=kind, n=n, orbits=orbits, starts_attempted=starts, converged=converged,
        rejected_boundary=rejected_boundary, rejected_duplicate=duplicates, settings=settings,
        epsilon=epsilon, diverged=diverged, families=families, near_boundary=near, body=body,
    )
    if not orbits:
        report.warnings.append("no critical configurations found; every start diverged")
        logger.warning("no solutions for %s n=%d after %d starts", kind.value, n, starts)
    if near:
        report.warnings.append(f"{near} orbit(s) have gap product within 10x of epsilon; "
                               f"results may depend on epsilon")
        logger.warning("%s n=%d: %d orbit(s) close to the epsilon boundary", kind.value, n, near)
    logger.info("%s n=%d: %d starts, %d converged, %d orbits (%d isolated, %d families)",
                kind.value, n, starts, converged, len(orbits), len(report.isolated_orbits), len(families))
    return report


def solve_closed(body: ConvexBody, A: Sequence[float], n: int,
                 settings: Optional[SolverSettings] = None) -> SolveReport:
    """Closed billiard trajectories from A back to A with n reflections, up to reversal"""
    if n < 1:
        raise BadInput(f"n must be at least 1, got {n}")
    anchor = np.asarray(A, dtype=float)
    if anchor.shape != (body.ambient_dim,):
        raise BadInput(f"anchor must be a point in R^{body.ambient_dim}")
    # closed_string validates that A is on the surface
    closed_string(body, anchor, [surface_project(body, -anchor)])
    return _solve(body, ConfigurationKind.CLOSED_STRING, n, anchor, settings or SolverSettings())


def solve_periodic(body: ConvexBody, n: int, settings: Optional[SolverSettings] = None) -> SolveReport:
    """n-periodic billiard trajectories up to the dihedral group"""
    if n < 2:
        raise BadInput(f"n must be at least 2, got {n}")
    return _solve(body, ConfigurationKind.CYCLIC, n, None, settings or SolverSettings())
