#!/usr/bin/env python3
"""
Configuration spaces of billiard polygons and the negative length functional.

Two kinds of configuration live here:

    closed string   (x_1, ..., x_n) with x_1 != A, x_n != A, x_i != x_(i+1);
                    the polygon is A, x_1, ..., x_n, A
    cyclic          (x_1, ..., x_n) with x_i != x_(i+1), indices mod n

Points are stored in ambient coordinates; derivatives are expressed in the
orthonormal tangent basis returned by convex_body.tangent_basis at each point.
The Hessian is the covariant Hessian of the closest-point retraction, so
d^2/dt^2 L(R(x + t v)) at t = 0 equals v^T H v at every admissible point.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from billiard_errors import BadInput, Inadmissible, OffSurface, WrongKind
from convex_body import ConvexBody, outward_normal, shape_operator, surface_project, tangent_basis


ADMISSIBLE_REL_GAP = 1e-14
EPSILON_REL_SCALE = 1e-3


class ConfigurationKind(Enum):
    """Flavour of configuration space"""
    CLOSED_STRING = "closed_string"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class DihedralElement:
    """Element of D_n acting on cyclic index order

    new[i] = old[(s * i + rotation) mod n] with s = -1 when flipped, so a
    flip alone fixes x_1 and reverses the remaining points.
    """
    rotation: int
    flip: bool
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise BadInput("dihedral group needs n >= 1")
        object.__setattr__(self, 'rotation', self.rotation % self.n)

    @property
    def sign(self) -> int:
        return -1 if self.flip else 1

    def index_map(self) -> List[int]:
        return [(self.sign * i + self.rotation) % self.n for i in range(self.n)]

    def compose(self, other: 'DihedralElement') -> 'DihedralElement':
        """Element acting as `other` first, then `self`"""
        if other.n != self.n:
            raise BadInput("cannot compose elements of different dihedral groups")
        return DihedralElement(
            rotation=other.sign * self.rotation + other.rotation,
            flip=self.flip != other.flip,
            n=self.n,
        )

    @staticmethod
    def identity(n: int) -> 'DihedralElement':
        return DihedralElement(0, False, n)

    @staticmethod
    def all_elements(n: int) -> List['DihedralElement']:
        return [DihedralElement(r, f, n) for f in (False, True) for r in range(n)]


@dataclass
class TangentVector:
    """Per-point coefficients in the tangent bases, shape (n, m)"""
    blocks: np.ndarray

    def __post_init__(self):
        self.blocks = np.asarray(self.blocks, dtype=float)
        if self.blocks.ndim != 2:
            raise BadInput(f"tangent vector blocks must be 2-D, got shape {self.blocks.shape}")

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    @property
    def m(self) -> int:
        return self.blocks.shape[1]

    def flat(self) -> np.ndarray:
        return self.blocks.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.blocks))

    def dot(self, other: 'TangentVector') -> float:
        return float(np.sum(self.blocks * other.blocks))

    @staticmethod
    def from_flat(vector: Sequence[float], n: int, m: int) -> 'TangentVector':
        return TangentVector(np.asarray(vector, dtype=float).reshape(n, m))


@dataclass(frozen=True, eq=False)
class Configuration:
    """Ordered boundary points of one of the two configuration kinds

    Construction checks that every point is on the surface; admissibility is
    checked by the operations that need it.
    """
    body: ConvexBody
    kind: ConfigurationKind
    points: np.ndarray
    anchor: Optional[np.ndarray] = None

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.body.ambient_dim:
            raise BadInput(f"points must have shape (n, {self.body.ambient_dim}), got {points.shape}")
        minimum = 1 if self.kind == ConfigurationKind.CLOSED_STRING else 2
        if points.shape[0] < minimum:
            raise BadInput(f"{self.kind.value} configuration needs at least {minimum} points")
        for i, p in enumerate(points):
            if not self.body.is_on_surface(p):
                raise OffSurface(f"point {i + 1} has residual {self.body.residual(p):.3e}")
        points.setflags(write=False)
        object.__setattr__(self, 'points', points)

        if self.kind == ConfigurationKind.CLOSED_STRING:
            if self.anchor is None:
                raise BadInput("closed-string configuration needs an anchor")
            anchor = np.array(self.anchor, dtype=float)
            if anchor.shape != (self.body.ambient_dim,):
                raise BadInput("anchor has the wrong dimension")
            if not self.body.is_on_surface(anchor):
                raise OffSurface(f"anchor has residual {self.body.residual(anchor):.3e}")
            anchor.setflags(write=False)
            object.__setattr__(self, 'anchor', anchor)
        elif self.anchor is not None:
            raise BadInput("cyclic configurations have no anchor")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def m(self) -> int:
        return self.body.dim_m

    @property
    def is_closed_string(self) -> bool:
        return self.kind == ConfigurationKind.CLOSED_STRING

    def with_points(self, points: np.ndarray) -> 'Configuration':
        return Configuration(self.body, self.kind, points, self.anchor)

    def chain(self) -> np.ndarray:
        """Polygon vertices in order, first vertex repeated at the end"""
        if self.is_closed_string:
            return np.vstack([self.anchor, self.points, self.anchor])
        return np.vstack([self.points, self.points[:1]])

    def edges(self) -> List[Tuple[Optional[int], Optional[int]]]:
        """Index pairs of the polygon edges; None stands for the anchor"""
        n = self.n
        if self.is_closed_string:
            indices = [None] + list(range(n)) + [None]
            return [(indices[i], indices[i + 1]) for i in range(n + 1)]
        return [(i, (i + 1) % n) for i in range(n)]

    def gaps(self) -> np.ndarray:
        chain = self.chain()
        return np.linalg.norm(chain[1:] - chain[:-1], axis=1)

    @cached_property
    def bases(self) -> List[np.ndarray]:
        return [tangent_basis(self.body, p) for p in self.points]

    def to_dict(self, body_ref: Optional[str] = None) -> dict:
        data = {
            'kind': self.kind.value,
            'anchor': self.anchor.tolist() if self.anchor is not None else None,
            'points': self.points.tolist(),
        }
        if body_ref is not None:
            data['body_ref'] = body_ref
        else:
            data['body'] = self.body.to_dict()
        return data

    @staticmethod
    def from_dict(data: dict, body: Optional[ConvexBody] = None) -> 'Configuration':
        if body is None:
            if 'body' not in data:
                raise BadInput("configuration record names a body_ref; pass the body explicitly")
            body = ConvexBody.from_dict(data['body'])
        return Configuration(
            body=body,
            kind=ConfigurationKind(data['kind']),
            points=np.array(data['points'], dtype=float),
            anchor=np.array(data['anchor'], dtype=float) if data.get('anchor') is not None else None,
        )


def closed_string(body: ConvexBody, anchor: Sequence[float], points: Sequence[Sequence[float]]) -> Configuration:
    return Configuration(body, ConfigurationKind.CLOSED_STRING, np.asarray(points, dtype=float),
                         np.asarray(anchor, dtype=float))


def cyclic(body: ConvexBody, points: Sequence[Sequence[float]]) -> Configuration:
    return Configuration(body, ConfigurationKind.CYCLIC, np.asarray(points, dtype=float))


def format_coordinate(value: float) -> str:
    """Decimal text that reads back to the same double"""
    return format(float(value), '.17g')


# ---------------------------------------------------------------------------
# Admissibility and the truncation G_eps
# ---------------------------------------------------------------------------

def admissibility_threshold(body: ConvexBody) -> float:
    return ADMISSIBLE_REL_GAP * body.diameter


def min_gap(c: Configuration) -> float:
    return float(np.min(c.gaps()))


def check_admissible(c: Configuration):
    smallest = min_gap(c)
    if smallest <= admissibility_threshold(c.body):
        raise Inadmissible(f"consecutive points coincide (gap {smallest:.3e})")


def gap_count(kind: ConfigurationKind, n: int) -> int:
    return n + 1 if kind == ConfigurationKind.CLOSED_STRING else n


def default_epsilon(body: ConvexBody, kind: ConfigurationKind, n: int) -> float:
    """(1e-3 * diameter) raised to the number of gaps in the polygon"""
    return (EPSILON_REL_SCALE * body.diameter) ** gap_count(kind, n)


def gap_product(c: Configuration) -> float:
    return float(np.prod(c.gaps()))


def in_G_epsilon(c: Configuration, epsilon: float) -> bool:
    """Whether the product of consecutive gaps is at least epsilon

    Products equal to epsilon up to rounding count as inside.
    """
    return gap_product(c) >= epsilon * (1.0 - 1e-12)


def log_gap_gradient(c: Configuration) -> TangentVector:
    """Tangential gradient of sum log|x_i - x_(i+1)|; points into G_eps"""
    ambient = np.zeros_like(c.points)
    chain = c.chain()
    for e, (ia, ib) in enumerate(c.edges()):
        diff = chain[e] - chain[e + 1]
        scale = float(diff @ diff)
        if ia is not None:
            ambient[ia] += diff / scale
        if ib is not None:
            ambient[ib] -= diff / scale
    return TangentVector(np.array([b @ g for b, g in zip(c.bases, ambient)]))


# ---------------------------------------------------------------------------
# Length functional and derivatives
# ---------------------------------------------------------------------------

def neg_total_length(c: Configuration) -> float:
    """Minus the polygon length, summed exactly so symmetric images agree bit for bit"""
    check_admissible(c)
    return -math.fsum(c.gaps().tolist())


def _ambient_gradient(c: Configuration) -> np.ndarray:
    """d/dx_j of -L in R^(m+1), one row per point"""
    check_admissible(c)
    chain = c.chain()
    offset = 1 if c.is_closed_string else 0
    grad = np.zeros_like(c.points)
    n = c.n
    for j in range(n):
        here = chain[j + offset]
        if c.is_closed_string:
            before, after = chain[j], chain[j + 2]
        else:
            before, after = c.points[(j - 1) % n], c.points[(j + 1) % n]
        to_before = here - before
        to_after = here - after
        grad[j] = -(to_before / np.linalg.norm(to_before) + to_after / np.linalg.norm(to_after))
    return grad


def gradient(c: Configuration) -> TangentVector:
    """Tangential gradient of neg_total_length in the tangent bases"""
    ambient = _ambient_gradient(c)
    return TangentVector(np.array([b @ g for b, g in zip(c.bases, ambient)]))


def riemannian_gradient_ambient(c: Configuration) -> np.ndarray:
    """Tangential gradient written in ambient coordinates, shape (n, m+1)"""
    ambient = _ambient_gradient(c)
    return np.array([b.T @ (b @ g) for b, g in zip(c.bases, ambient)])


def hessian(c: Configuration, bases: Optional[List[np.ndarray]] = None) -> np.ndarray:
    """Covariant Hessian of neg_total_length, shape (nm, nm)

    Ambient second derivative of each chord plus the curvature term
    -(nu_j . g_j) S_j at every point, all restricted to the tangent spaces.
    """
    check_admissible(c)
    if bases is None:
        bases = c.bases
    n, m, d = c.n, c.m, c.body.ambient_dim
    chain = c.chain()
    blocks = np.zeros((n, n, d, d))
    for e, (ia, ib) in enumerate(c.edges()):
        diff = chain[e] - chain[e + 1]
        r = float(np.linalg.norm(diff))
        u = diff / r
        k = (np.eye(d) - np.outer(u, u)) / r
        if ia is not None:
            blocks[ia, ia] -= k
        if ib is not None:
            blocks[ib, ib] -= k
        if ia is not None and ib is not None:
            blocks[ia, ib] += k
            blocks[ib, ia] += k

    ambient = _ambient_gradient(c)
    for j in range(n):
        normal = outward_normal(c.body, c.points[j])
        blocks[j, j] -= float(normal @ ambient[j]) * shape_operator(c.body, c.points[j])

    hess = np.zeros((n * m, n * m))
    for i in range(n):
        for j in range(n):
            hess[i * m:(i + 1) * m, j * m:(j + 1) * m] = bases[i] @ blocks[i, j] @ bases[j].T
    return 0.5 * (hess + hess.T)


def retract(c: Configuration, step: TangentVector) -> Configuration:
    """Move each point along its tangent step and project back to X"""
    if step.blocks.shape != (c.n, c.m):
        raise BadInput(f"step has shape {step.blocks.shape}, expected {(c.n, c.m)}")
    moved = [surface_project(c.body, p + b.T @ mu) for p, b, mu in zip(c.points, c.bases, step.blocks)]
    return c.with_points(np.array(moved))


def reflection_law_residual(c: Configuration) -> float:
    """Largest |u_out - mirror(u_in)| over all bounce points"""
    chain = c.chain()
    offset = 1 if c.is_closed_string else 0
    worst = 0.0
    for j in range(c.n):
        here = chain[j + offset]
        if c.is_closed_string:
            before, after = chain[j], chain[j + 2]
        else:
            before, after = c.points[(j - 1) % c.n], c.points[(j + 1) % c.n]
        u_in = (here - before) / np.linalg.norm(here - before)
        u_out = (after - here) / np.linalg.norm(after - here)
        normal = outward_normal(c.body, here)
        mirrored = u_in - 2.0 * float(u_in @ normal) * normal
        worst = max(worst, float(np.linalg.norm(u_out - mirrored)))
    return worst


# ---------------------------------------------------------------------------
# Symmetries
# ---------------------------------------------------------------------------

def reflect_T(c: Configuration) -> Configuration:
    """Reverse the order of a closed string"""
    if not c.is_closed_string:
        raise WrongKind("reflect_T acts on closed-string configurations")
    return c.with_points(c.points[::-1].copy())


def dihedral_act(g: DihedralElement, c: Configuration) -> Configuration:
    if c.is_closed_string:
        raise WrongKind("the dihedral group acts on cyclic configurations")
    if g.n != c.n:
        raise BadInput(f"element of D_{g.n} cannot act on {c.n} points")
    return c.with_points(c.points[g.index_map()].copy())


def group_images(c: Configuration) -> List[Configuration]:
    """All images of c under its symmetry group (Z_2 or D_n)"""
    if c.is_closed_string:
        return [c, reflect_T(c)]
    return [dihedral_act(g, c) for g in DihedralElement.all_elements(c.n)]


def orbit_size(c: Configuration, tolerance: float) -> int:
    """Number of distinct group images, comparing points within tolerance"""
    distinct: List[np.ndarray] = []
    for image in group_images(c):
        if not any(np.max(np.abs(image.points - seen)) <= tolerance for seen in distinct):
            distinct.append(image.points)
    return len(distinct)
