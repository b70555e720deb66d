#!/usr/bin/env python3
"""
Smooth strictly convex hypersurfaces X = boundary of T in R^(m+1).

A body is a sphere, an ellipsoid given by its semi-axes, or the zero set of
an implicit field F with F < 0 inside. Every query works with the defining
function F, its gradient and its Hessian:

    sphere      F(x) = |x|^2 / r^2 - 1
    ellipsoid   F(x) = sum x_i^2 / a_i^2 - 1
    implicit    F = f (user supplied, e.g. a polynomial)

The origin is the interior reference point and must lie inside T.
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from billiard_errors import BadInput, ConfigError, NoConvergence, NonConvexBody, OffSurface

logger = logging.getLogger(__name__)

PROJECTION_MAX_ITER = 50
PROJECTION_TOL = 1e-12
DEFAULT_TOLERANCE = 1e-9
DEFAULT_CONVEXITY_SAMPLES = 1000


class BodyKind(Enum):
    """Shapes a body can be defined by"""
    SPHERE = "sphere"
    ELLIPSOID = "ellipsoid"
    IMPLICIT = "implicit"


@dataclass(frozen=True)
class Sphere:
    """Round sphere of the given radius centred at the origin"""
    radius: float = 1.0

    def value(self, x: np.ndarray) -> float:
        return float(x @ x) / self.radius ** 2 - 1.0

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * x / self.radius ** 2

    def hessian(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * np.eye(x.shape[0]) / self.radius ** 2


@dataclass(frozen=True)
class Ellipsoid:
    """Axis-aligned ellipsoid centred at the origin"""
    semi_axes: Tuple[float, ...]

    @property
    def inv_sq(self) -> np.ndarray:
        return 1.0 / np.asarray(self.semi_axes, dtype=float) ** 2

    def value(self, x: np.ndarray) -> float:
        return float(np.sum(x * x * self.inv_sq)) - 1.0

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * x * self.inv_sq

    def hessian(self, x: np.ndarray) -> np.ndarray:
        return np.diag(2.0 * self.inv_sq)


@dataclass(frozen=True)
class PolynomialField:
    """Polynomial sum c * prod x_i^e_i, stored as (coeff, exponents) terms

    Picklable, so bodies built from it can be shipped to worker processes.
    """
    terms: Tuple[Tuple[float, Tuple[int, ...]], ...]

    def _arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        coeffs = np.array([c for c, _ in self.terms], dtype=float)
        exps = np.array([e for _, e in self.terms], dtype=int)
        return coeffs, exps

    def value(self, x: np.ndarray) -> float:
        coeffs, exps = self._arrays()
        return float(coeffs @ np.prod(x ** exps, axis=1))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        coeffs, exps = self._arrays()
        grad = np.zeros(x.shape[0])
        for i in range(x.shape[0]):
            mask = exps[:, i] > 0
            if not mask.any():
                continue
            lowered = exps[mask].copy()
            lowered[:, i] -= 1
            grad[i] = np.sum(coeffs[mask] * exps[mask, i] * np.prod(x ** lowered, axis=1))
        return grad

    def hessian(self, x: np.ndarray) -> np.ndarray:
        coeffs, exps = self._arrays()
        dim = x.shape[0]
        hess = np.zeros((dim, dim))
        for i in range(dim):
            for j in range(i, dim):
                lowered = exps.copy()
                factor = lowered[:, i].astype(float)
                lowered[:, i] -= 1
                factor = factor * lowered[:, j]
                lowered[:, j] -= 1
                mask = factor != 0
                if mask.any():
                    hess[i, j] = np.sum(coeffs[mask] * factor[mask] * np.prod(x ** lowered[mask], axis=1))
                hess[j, i] = hess[i, j]
        return hess


@dataclass(frozen=True)
class ImplicitConvex:
    """Zero set of f with f < 0 at the origin

    `terms` is kept when the field came from a polynomial so the body can be
    written back to JSON; bodies built from bare callables cannot.
    """
    f: Callable[[np.ndarray], float]
    grad_f: Callable[[np.ndarray], np.ndarray]
    hess_f: Callable[[np.ndarray], np.ndarray]
    terms: Optional[Tuple[Tuple[float, Tuple[int, ...]], ...]] = None

    @staticmethod
    def from_polynomial(terms: Sequence[Tuple[float, Sequence[int]]]) -> 'ImplicitConvex':
        frozen_terms = tuple((float(c), tuple(int(e) for e in exps)) for c, exps in terms)
        poly = PolynomialField(frozen_terms)
        return ImplicitConvex(f=poly.value, grad_f=poly.gradient, hess_f=poly.hessian, terms=frozen_terms)

    def value(self, x: np.ndarray) -> float:
        return float(self.f(x))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.grad_f(x), dtype=float)

    def hessian(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.hess_f(x), dtype=float)


Shape = Union[Sphere, Ellipsoid, ImplicitConvex]


@dataclass(frozen=True)
class ConvexBody:
    """Strictly convex hypersurface of dimension dim_m in R^(dim_m + 1)"""
    dim_m: int
    shape: Shape
    tolerance: float = DEFAULT_TOLERANCE
    convexity_samples: int = DEFAULT_CONVEXITY_SAMPLES
    _diameter: float = field(default=0.0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim_m < 1:
            raise ConfigError(f"dim_m must be at least 1, got {self.dim_m}")
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")
        if isinstance(self.shape, Sphere):
            if self.shape.radius <= 0:
                raise ConfigError("sphere radius must be positive")
        elif isinstance(self.shape, Ellipsoid):
            if len(self.shape.semi_axes) != self.dim_m + 1:
                raise ConfigError(
                    f"ellipsoid in R^{self.dim_m + 1} needs {self.dim_m + 1} semi-axes, "
                    f"got {len(self.shape.semi_axes)}")
            if any(a <= 0 for a in self.shape.semi_axes):
                raise ConfigError("every semi-axis must be strictly positive")
        elif isinstance(self.shape, ImplicitConvex):
            check_strict_convexity(self, self.convexity_samples)
        else:
            raise ConfigError(f"unknown shape {type(self.shape).__name__}")
        object.__setattr__(self, '_diameter', _compute_diameter(self))

    @property
    def ambient_dim(self) -> int:
        return self.dim_m + 1

    @property
    def kind(self) -> BodyKind:
        if isinstance(self.shape, Sphere):
            return BodyKind.SPHERE
        if isinstance(self.shape, Ellipsoid):
            return BodyKind.ELLIPSOID
        return BodyKind.IMPLICIT

    @property
    def diameter(self) -> float:
        return self._diameter

    def defining(self, x: np.ndarray) -> float:
        return self.shape.value(np.asarray(x, dtype=float))

    def defining_gradient(self, x: np.ndarray) -> np.ndarray:
        return self.shape.gradient(np.asarray(x, dtype=float))

    def defining_hessian(self, x: np.ndarray) -> np.ndarray:
        return self.shape.hessian(np.asarray(x, dtype=float))

    def residual(self, x: np.ndarray) -> float:
        """On-surface residual |F(x)|"""
        return abs(self.defining(x))

    def is_on_surface(self, x: np.ndarray) -> bool:
        return self.residual(x) <= self.tolerance

    def to_dict(self) -> dict:
        data = {
            'kind': self.kind.value,
            'dim_m': self.dim_m,
            'tolerance': self.tolerance,
            'convexity_samples': self.convexity_samples,
        }
        if isinstance(self.shape, Sphere):
            data['radius'] = self.shape.radius
        elif isinstance(self.shape, Ellipsoid):
            data['semi_axes'] = list(self.shape.semi_axes)
        else:
            if self.shape.terms is None:
                raise ConfigError("implicit body built from callables cannot be serialized")
            data['terms'] = [[c, list(e)] for c, e in self.shape.terms]
        return data

    @staticmethod
    def from_dict(data: dict) -> 'ConvexBody':
        try:
            kind = BodyKind(data['kind'])
            dim_m = int(data['dim_m'])
        except (KeyError, ValueError, TypeError) as e:
            raise ConfigError(f"bad body definition: {e}") from e
        tolerance = float(data.get('tolerance', DEFAULT_TOLERANCE))
        samples = int(data.get('convexity_samples', DEFAULT_CONVEXITY_SAMPLES))
        try:
            if kind == BodyKind.SPHERE:
                shape = Sphere(float(data.get('radius', 1.0)))
            elif kind == BodyKind.ELLIPSOID:
                shape = Ellipsoid(tuple(float(a) for a in data['semi_axes']))
            else:
                terms = data['terms']
                for term in terms:
                    if len(term[1]) != dim_m + 1:
                        raise ConfigError(f"term {term} does not have {dim_m + 1} exponents")
                shape = ImplicitConvex.from_polynomial(terms)
        except (KeyError, TypeError, IndexError) as e:
            raise ConfigError(f"bad {kind.value} definition: {e}") from e
        return ConvexBody(dim_m=dim_m, shape=shape, tolerance=tolerance, convexity_samples=samples)


def load_body(path: str) -> ConvexBody:
    """Read a body definition from a JSON file"""
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read body file {path}: {e}") from e
    return ConvexBody.from_dict(data)


def sphere_body(dim_m: int, radius: float = 1.0) -> ConvexBody:
    return ConvexBody(dim_m=dim_m, shape=Sphere(radius))


def ellipsoid_body(semi_axes: Sequence[float]) -> ConvexBody:
    return ConvexBody(dim_m=len(semi_axes) - 1, shape=Ellipsoid(tuple(float(a) for a in semi_axes)))


# ---------------------------------------------------------------------------
# Projection
# ---------------------------------------------------------------------------

def _radial_point(body: ConvexBody, x: np.ndarray) -> np.ndarray:
    """Point where the ray from the origin through x meets X"""
    def along(s: float) -> float:
        return body.defining(s * x)

    hi = 1.0
    for _ in range(200):
        if along(hi) > 0:
            break
        hi *= 2.0
    else:
        raise NoConvergence("ray from the origin never leaves the body")
    lo = 0.0
    if along(lo) >= 0:
        raise ConfigError("origin is not inside the body")
    s = brentq(along, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
    return s * x


def _newton_on_gradient_line(body: ConvexBody, p: np.ndarray) -> np.ndarray:
    """Newton iteration p <- p - F grad F / |grad F|^2 until |F| <= PROJECTION_TOL"""
    for _ in range(PROJECTION_MAX_ITER):
        value = body.defining(p)
        if abs(value) <= PROJECTION_TOL:
            return p
        grad = body.defining_gradient(p)
        norm_sq = float(grad @ grad)
        if norm_sq == 0.0:
            raise NoConvergence("defining gradient vanished during projection")
        p = p - value * grad / norm_sq
    if abs(body.defining(p)) <= body.tolerance:
        return p
    raise NoConvergence(f"gradient-line Newton did not reach the surface in {PROJECTION_MAX_ITER} steps")


def _closest_point_polish(body: ConvexBody, y: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Newton on p - y + lam grad F(p) = 0, F(p) = 0 starting from a surface point"""
    dim = y.shape[0]
    grad = body.defining_gradient(p)
    lam = -float((p - y) @ grad) / float(grad @ grad)
    start = p
    for _ in range(PROJECTION_MAX_ITER):
        grad = body.defining_gradient(p)
        res = np.concatenate([p - y + lam * grad, [body.defining(p)]])
        if np.max(np.abs(res)) <= PROJECTION_TOL * max(1.0, float(np.max(np.abs(y)))):
            return p
        jac = np.zeros((dim + 1, dim + 1))
        jac[:dim, :dim] = np.eye(dim) + lam * body.defining_hessian(p)
        jac[:dim, dim] = grad
        jac[dim, :dim] = grad
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            break
        p = p + step[:dim]
        lam = lam + step[dim]
    logger.debug("closest-point polish stalled; keeping the radial point")
    return start


def _ellipsoid_project(shape: Ellipsoid, y: np.ndarray) -> Optional[np.ndarray]:
    """Closest point via the secular equation sum a^2 y^2 / (a^2 + t)^2 = 1"""
    a_sq = np.asarray(shape.semi_axes, dtype=float) ** 2
    smallest = float(np.min(a_sq))

    def secular(t: float) -> float:
        return float(np.sum(a_sq * y * y / (a_sq + t) ** 2)) - 1.0

    lo = -smallest * (1.0 - 1e-14)
    if not secular(lo) > 0:
        return None
    hi = max(float(np.sqrt(np.max(a_sq))) * float(np.linalg.norm(y)), 1.0)
    while secular(hi) > 0:
        hi *= 2.0
    t = brentq(secular, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)
    return a_sq * y / (a_sq + t)


def surface_project(body: ConvexBody, x: Sequence[float]) -> np.ndarray:
    """Closest point of X to x (radial for spheres)"""
    y = np.asarray(x, dtype=float)
    if y.shape != (body.ambient_dim,):
        raise BadInput(f"expected a point in R^{body.ambient_dim}, got shape {y.shape}")
    norm = float(np.linalg.norm(y))
    if norm == 0.0:
        raise BadInput("cannot project the centre of the body")

    if isinstance(body.shape, Sphere):
        return y / norm * body.shape.radius

    if isinstance(body.shape, Ellipsoid):
        p = _ellipsoid_project(body.shape, y)
        if p is None:
            p = _newton_on_gradient_line(body, _radial_point(body, y))
        else:
            # Remove the rounding left by the secular solve
            p = p / np.sqrt(np.sum(p * p * body.shape.inv_sq))
    else:
        p = _radial_point(body, y)
        p = _closest_point_polish(body, y, p)
        p = _newton_on_gradient_line(body, p)

    if body.residual(p) > body.tolerance:
        raise NoConvergence(f"projection residual {body.residual(p):.3e} exceeds tolerance")
    return p


# ---------------------------------------------------------------------------
# Differential-geometric queries
# ---------------------------------------------------------------------------

def _require_on_surface(body: ConvexBody, p: np.ndarray):
    res = body.residual(p)
    if res > body.tolerance:
        raise OffSurface(f"point is off the surface (residual {res:.3e} > {body.tolerance:.1e})")


def outward_normal(body: ConvexBody, p: Sequence[float]) -> np.ndarray:
    """Unit normal pointing out of T"""
    p = np.asarray(p, dtype=float)
    _require_on_surface(body, p)
    grad = body.defining_gradient(p)
    return grad / np.linalg.norm(grad)


def tangent_basis(body: ConvexBody, p: Sequence[float]) -> np.ndarray:
    """Orthonormal basis of T_pX as the rows of an m x (m+1) matrix"""
    normal = outward_normal(body, p)
    q, _ = np.linalg.qr(normal.reshape(-1, 1), mode='complete')
    return q[:, 1:].T.copy()


def shape_operator(body: ConvexBody, p: Sequence[float]) -> np.ndarray:
    """Ambient form Hess F / |grad F|; its restriction to T_pX is the second fundamental form"""
    p = np.asarray(p, dtype=float)
    return body.defining_hessian(p) / np.linalg.norm(body.defining_gradient(p))


def sample_surface(body: ConvexBody, count: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Surface points from normalized Gaussian directions"""
    points = []
    while len(points) < count:
        g = rng.standard_normal(body.ambient_dim)
        norm = np.linalg.norm(g)
        if norm < 1e-12:
            continue
        points.append(surface_project(body, g / norm * body_scale(body)))
    return points


def body_scale(body: ConvexBody) -> float:
    """Rough linear size used to place sample directions"""
    if isinstance(body.shape, Sphere):
        return body.shape.radius
    if isinstance(body.shape, Ellipsoid):
        return float(max(body.shape.semi_axes))
    return 1.0


def _compute_diameter(body: ConvexBody) -> float:
    if isinstance(body.shape, Sphere):
        return 2.0 * body.shape.radius
    if isinstance(body.shape, Ellipsoid):
        return 2.0 * float(max(body.shape.semi_axes))
    rng = np.random.default_rng(0)
    directions = rng.standard_normal((400, body.ambient_dim))
    directions = np.vstack([directions, np.eye(body.ambient_dim), -np.eye(body.ambient_dim)])
    reach = max(float(np.linalg.norm(_radial_point(body, d))) for d in directions)
    return 2.0 * reach


def diameter(body: ConvexBody) -> float:
    return body.diameter


def check_strict_convexity(body: ConvexBody, samples: int = DEFAULT_CONVEXITY_SAMPLES, seed: int = 0):
    """Sampled check that the origin is inside, grad F != 0 and the tangential Hessian is positive definite

    Raises NonConvexBody at the first failing sample.
    """
    if body.defining(np.zeros(body.ambient_dim)) >= 0:
        raise NonConvexBody("origin is not strictly inside the body")
    rng = np.random.default_rng(seed)
    for index in range(samples):
        direction = rng.standard_normal(body.ambient_dim)
        try:
            p = _radial_point(body, direction)
        except NoConvergence as e:
            raise NonConvexBody(f"body is unbounded along a sampled direction: {e}") from e
        grad = body.defining_gradient(p)
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm <= 1e-12:
            raise NonConvexBody(f"defining gradient vanishes at sample {index}")
        if float(grad @ p) <= 0:
            raise NonConvexBody(f"gradient points inward at sample {index}")
        q, _ = np.linalg.qr((grad / grad_norm).reshape(-1, 1), mode='complete')
        basis = q[:, 1:]
        tangential = basis.T @ body.defining_hessian(p) @ basis
        if body.dim_m > 0 and float(np.min(np.linalg.eigvalsh(tangential))) <= 0:
            raise NonConvexBody(f"tangential Hessian is not positive definite at sample {index}")
    logger.debug("convexity check passed on %d samples", samples)
