#!/usr/bin/env python3
"""
Exact graded rings for the configuration spaces of the round sphere, and the
trajectory-count lower bounds they give.

Every ring is a finite truncation with an explicit additive basis. Each basis
element carries an additive order (0 for a free summand, 2 for Z/2), and the
multiplication table maps a pair of basis elements to at most one basis
element with an exact integer coefficient. All rings here are generated by
monomials, so products of basis elements never mix several terms.

Spaces:
    closed-string   G(S^m; A, A, n), sigma_i in degree i(m-1), i = 0..n-1
    quotient        G(S^m; A, A, n) / Z_2 for even n, integral coefficients
    cyclic          G(S^m, n); u in degree m (m odd) or w in degree 2m-1 (m even)
"""

import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from billiard_errors import BadClause, BadInput, Unsupported

logger = logging.getLogger(__name__)

Coefficient = Union[int, Fraction]

# Category weight of the degree-2 torsion class e of the quotient ring. It is
# the Bockstein image of a mod-2 class of degree one, which gives weight 2.
CATEGORY_WEIGHT_E = 2


class CoefficientDomain(Enum):
    Z = "Z"
    Q = "Q"
    Z2 = "Z2"


class SpaceKind(Enum):
    CLOSED_STRING = "closed-string"
    QUOTIENT = "quotient"
    CYCLIC = "cyclic"


class Clause(Enum):
    """Which lower-bound statement a value comes from"""
    I = "I"
    II = "II"
    III = "III"
    THM2 = "Thm2"


class TrajectoryKind(Enum):
    CLOSED_FROM_POINT = "closed_from_point"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class BasisElement:
    name: str
    degree: int
    order: int = 0  # 0 = free summand


@dataclass(frozen=True)
class RingElement:
    """Sparse combination of basis elements, reduced by additive orders"""
    ring: 'GradedRing'
    coeffs: Tuple[Tuple[int, Coefficient], ...]

    def is_zero(self) -> bool:
        return not self.coeffs

    def as_dict(self) -> Dict[int, Coefficient]:
        return dict(self.coeffs)

    def __add__(self, other: 'RingElement') -> 'RingElement':
        total = self.as_dict()
        for idx, c in other.coeffs:
            total[idx] = total.get(idx, 0) + c
        return self.ring.element_from(total)

    def __neg__(self) -> 'RingElement':
        return self.ring.element_from({i: -c for i, c in self.coeffs})

    def __sub__(self, other: 'RingElement') -> 'RingElement':
        return self + (-other)

    def __mul__(self, other: Union['RingElement', int]) -> 'RingElement':
        if isinstance(other, RingElement):
            return self.ring.multiply(self, other)
        return self.ring.element_from({i: c * other for i, c in self.coeffs})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __pow__(self, exponent: int) -> 'RingElement':
        result = self.ring.one()
        for _ in range(exponent):
            result = result * self
        return result

    def coefficient(self, name: str) -> Coefficient:
        return self.as_dict().get(self.ring.index_of(name), 0)

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        return " + ".join(f"{c}*{self.ring.basis[i].name}" for i, c in self.coeffs)


@dataclass(eq=False)
class GradedRing:
    """Finite graded-commutative ring with an explicit multiplication table"""
    name: str
    domain: CoefficientDomain
    basis: List[BasisElement]
    generators: List[int]
    table: Dict[Tuple[int, int], Tuple[int, int]]  # (i, j) -> (target, coefficient)
    unverified: bool = False
    params: Dict[str, int] = field(default_factory=dict)
    space: Optional[SpaceKind] = None

    def __post_init__(self):
        self._index = {b.name: i for i, b in enumerate(self.basis)}

    @staticmethod
    def from_rule(name: str, domain: CoefficientDomain, basis: List[BasisElement],
                  generator_names: Sequence[str], rule: Callable[[int, int], Optional[Tuple[int, int]]],
                  space: Optional[SpaceKind] = None, params: Optional[Dict[str, int]] = None,
                  unverified: bool = False) -> 'GradedRing':
        """Tabulate rule(i, j) -> (target, integer coefficient) or None for every basis pair"""
        ring = GradedRing(name=name, domain=domain, basis=basis, generators=[], table={},
                          unverified=unverified, params=dict(params or {}), space=space)
        ring.generators = [ring.index_of(g) for g in generator_names]
        for i in range(len(basis)):
            for j in range(len(basis)):
                result = rule(i, j)
                if result is None:
                    continue
                target, coeff = result
                coeff = ring._reduce(target, coeff)
                if coeff != 0:
                    ring.table[(i, j)] = (target, coeff)
        logger.debug("%s: %d basis elements, %d nonzero products", name, len(basis), len(ring.table))
        return ring

    # -- elements --------------------------------------------------------

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise BadInput(f"{self.name} has no basis element {name!r}") from None

    def _reduce(self, idx: int, coeff: Coefficient) -> Coefficient:
        if self.domain == CoefficientDomain.Z2:
            return int(coeff) % 2
        order = self.basis[idx].order
        if order:
            return int(coeff) % order
        if self.domain == CoefficientDomain.Q:
            return Fraction(coeff)
        return int(coeff)

    def element_from(self, coeffs: Dict[int, Coefficient]) -> RingElement:
        reduced = []
        for idx in sorted(coeffs):
            c = self._reduce(idx, coeffs[idx])
            if c != 0:
                reduced.append((idx, c))
        return RingElement(self, tuple(reduced))

    def element(self, name: str, coeff: Coefficient = 1) -> RingElement:
        return self.element_from({self.index_of(name): coeff})

    def one(self) -> RingElement:
        return self.element_from({0: 1})

    def zero(self) -> RingElement:
        return RingElement(self, ())

    def multiply(self, x: RingElement, y: RingElement) -> RingElement:
        total: Dict[int, Coefficient] = {}
        for i, a in x.coeffs:
            for j, b in y.coeffs:
                entry = self.table.get((i, j))
                if entry is None:
                    continue
                target, c = entry
                total[target] = total.get(target, 0) + a * b * c
        return self.element_from(total)

    def basis_product(self, i: int, j: int) -> RingElement:
        entry = self.table.get((i, j))
        if entry is None:
            return self.zero()
        return self.element_from({entry[0]: entry[1]})

    def product_of(self, names: Sequence[str]) -> RingElement:
        result = self.one()
        for name in names:
            result = result * self.element(name)
        return result

    # -- additive structure ----------------------------------------------

    @property
    def top_degree(self) -> int:
        return max(b.degree for b in self.basis)

    def degrees(self) -> List[int]:
        return sorted({b.degree for b in self.basis})

    def additive_groups(self) -> Dict[int, Tuple[int, int]]:
        """degree -> (free rank, number of Z/2 summands)"""
        groups: Dict[int, Tuple[int, int]] = {}
        for b in self.basis:
            free, tors = groups.get(b.degree, (0, 0))
            if b.order == 0 or self.domain != CoefficientDomain.Z:
                free += 1
            else:
                tors += 1
            groups[b.degree] = (free, tors)
        return groups

    # -- axioms ----------------------------------------------------------

    def check_graded_commutativity(self) -> List[Tuple[str, str]]:
        failures = []
        for i, bi in enumerate(self.basis):
            for j, bj in enumerate(self.basis):
                sign = -1 if (bi.degree * bj.degree) % 2 else 1
                if self.basis_product(i, j) != self.basis_product(j, i) * sign:
                    failures.append((bi.name, bj.name))
        return failures

    def check_associativity(self) -> List[Tuple[str, str, str]]:
        failures = []
        size = len(self.basis)
        for i in range(size):
            for j in range(size):
                left_ij = self.basis_product(i, j)
                for k in range(size):
                    right_jk = self.basis_product(j, k)
                    left = self.multiply(left_ij, self.element_from({k: 1}))
                    right = self.multiply(self.element_from({i: 1}), right_jk)
                    if left != right:
                        failures.append((self.basis[i].name, self.basis[j].name, self.basis[k].name))
        return failures

    def check_degrees(self) -> List[Tuple[str, str]]:
        """Products must land in the sum of the degrees"""
        return [(self.basis[i].name, self.basis[j].name) for (i, j), (t, _) in self.table.items()
                if self.basis[t].degree != self.basis[i].degree + self.basis[j].degree]

    def to_dict(self) -> dict:
        products = []
        for (i, j), (t, c) in sorted(self.table.items()):
            products.append({
                'left': self.basis[i].name,
                'right': self.basis[j].name,
                'result': {self.basis[t].name: str(c) if isinstance(c, Fraction) else c},
            })
        return {
            'name': self.name,
            'space': self.space.value if self.space else None,
            'domain': self.domain.value,
            'unverified': self.unverified,
            'params': dict(self.params),
            'basis': [{'name': b.name, 'degree': b.degree, 'order': b.order} for b in self.basis],
            'generators': [self.basis[g].name for g in self.generators],
            'products': products,
        }


def ring_dump(ring: GradedRing) -> dict:
    return ring.to_dict()


def display_ring(ring: GradedRing):
    print("\n" + "=" * 60)
    flag = "  [unverified coefficients]" if ring.unverified else ""
    print(f"{ring.name} over {ring.domain.value}{flag}")
    print("=" * 60)
    for b in ring.basis:
        order = "Z" if b.order == 0 or ring.domain != CoefficientDomain.Z else f"Z/{b.order}"
        print(f"  deg {b.degree:3d}  {b.name:28s} {order}")
    print(f"Generators: {', '.join(ring.basis[g].name for g in ring.generators)}")
    print("=" * 60)


# ---------------------------------------------------------------------------
# Closed-string configuration space of S^m
# ---------------------------------------------------------------------------

def _sigma_name(i: int) -> str:
    return "1" if i == 0 else f"sigma_{i}"


def closed_string_product_coefficient(i: int, j: int, m: int) -> int:
    """sigma_i sigma_j = coeff * sigma_(i+j), before truncation"""
    if m % 2:
        return math.comb(i + j, i)
    if i % 2 and j % 2:
        return 0
    return math.comb((i + j) // 2, i // 2)


def closed_string_ring(m: int, n: int, coeffs: CoefficientDomain = CoefficientDomain.Z) -> GradedRing:
    """H*(G(S^m; A, A, n)): one free class sigma_i in each degree i(m-1), i < n"""
    if m <= 1:
        raise BadInput("the closed-string ring needs m >= 2; for m = 1 the space is a union of contractible pieces")
    if n < 1:
        raise BadInput(f"n must be at least 1, got {n}")
    basis = [BasisElement(_sigma_name(i), i * (m - 1)) for i in range(n)]

    def rule(i: int, j: int) -> Optional[Tuple[int, int]]:
        if i + j > n - 1:
            return None
        return i + j, closed_string_product_coefficient(i, j, m)

    return GradedRing.from_rule(
        name=f"H*(G(S^{m};A,A,{n}))", domain=coeffs, basis=basis,
        generator_names=[_sigma_name(i) for i in range(1, n)], rule=rule,
        space=SpaceKind.CLOSED_STRING, params={'m': m, 'n': n},
    )


@dataclass
class ReflectionAction:
    """Action of the order-reversing involution T on the closed-string ring"""
    ring: GradedRing
    signs: List[int]

    def apply(self, x: RingElement) -> RingElement:
        return self.ring.element_from({i: c * self.signs[i] for i, c in x.coeffs})

    def check_involution(self) -> bool:
        return all(self.apply(self.apply(self.ring.element_from({i: 1}))) == self.ring.element_from({i: 1})
                   for i in range(len(self.ring.basis)))

    def check_homomorphism(self) -> List[Tuple[str, str]]:
        failures = []
        size = len(self.ring.basis)
        for i in range(size):
            for j in range(size):
                xi = self.ring.element_from({i: 1})
                xj = self.ring.element_from({j: 1})
                if self.apply(xi * xj) != self.apply(xi) * self.apply(xj):
                    failures.append((self.ring.basis[i].name, self.ring.basis[j].name))
        return failures

    def invariant_dimensions(self) -> Dict[int, int]:
        """degree -> dimension of the +1 eigenspace (rationally)"""
        dims: Dict[int, int] = {}
        for b, s in zip(self.ring.basis, self.signs):
            dims.setdefault(b.degree, 0)
            if s == 1:
                dims[b.degree] += 1
        return dims


def reflection_action(ring: GradedRing, m: int, n: int) -> ReflectionAction:
    """T*(sigma_i) = (-1)^i sigma_i for m odd, (-1)^([i/2] + n i) sigma_i for m even"""
    if ring.space != SpaceKind.CLOSED_STRING or ring.params != {'m': m, 'n': n}:
        raise BadInput("reflection_action needs the closed-string ring with the same m and n")
    signs = []
    for i in range(n):
        exponent = i if m % 2 else i // 2 + n * i
        signs.append(-1 if exponent % 2 else 1)
    return ReflectionAction(ring, signs)


# ---------------------------------------------------------------------------
# Quotient by the reflection (n even)
# ---------------------------------------------------------------------------

def _monomial_name(parts: Sequence[Tuple[str, int]]) -> str:
    pieces = []
    for symbol, power in parts:
        if power == 0:
            continue
        pieces.append(symbol if power == 1 else f"{symbol}^{power}")
    return "*".join(pieces) if pieces else "1"


def _delta(i: int) -> Tuple[str, int]:
    return (f"delta_{i}", 0 if i == 0 else 1)


def quotient_ring(m: int, n: int) -> GradedRing:
    """Integral cohomology ring of G(S^m; A, A, n) / Z_2 for even n

    m odd: delta_i (degree 2i(m-1), i < n/2), e (degree 2, 2e = 0, e^((m+1)/2) = 0).
    m even: delta_r (degree 4r(m-1), r < [(n+2)/4]), e (degree 2, e^(m/2) = 0),
    a (degree m-1), b (degree 2m-1, 2b = 0) with a^2 = ab = ae = b^2 = 0 and
    delta_k b = 0 when n = 4k + 2.
    In both cases delta_i delta_j = C(2i+2j, 2i) delta_(i+j).
    """
    if m < 2:
        raise BadInput("the quotient ring needs m >= 2")
    if n < 2 or n % 2:
        raise BadInput(f"the reflection acts freely only for even n >= 2, got {n}")
    if m % 2:
        return _quotient_ring_odd(m, n)
    return _quotient_ring_even(m, n)


def _quotient_ring_odd(m: int, n: int) -> GradedRing:
    half = n // 2
    e_cap = (m + 1) // 2
    keys = [(i, j) for i in range(half) for j in range(e_cap)]
    basis = [BasisElement(_monomial_name([_delta(i), ("e", j)]), 2 * i * (m - 1) + 2 * j, 2 if j else 0)
             for i, j in keys]
    position = {key: idx for idx, key in enumerate(keys)}

    def rule(x: int, y: int) -> Optional[Tuple[int, int]]:
        (i1, j1), (i2, j2) = keys[x], keys[y]
        target = (i1 + i2, j1 + j2)
        if target not in position:
            return None
        return position[target], math.comb(2 * i1 + 2 * i2, 2 * i1)

    generators = [_monomial_name([_delta(i)]) for i in range(1, half)]
    if e_cap > 1:
        generators.append("e")
    return GradedRing.from_rule(
        name=f"H*(G(S^{m};A,A,{n})/Z2; Z)", domain=CoefficientDomain.Z, basis=basis,
        generator_names=generators, rule=rule, space=SpaceKind.QUOTIENT, params={'m': m, 'n': n},
    )


def _quotient_ring_even(m: int, n: int) -> GradedRing:
    d_count = (n + 2) // 4
    e_cap = m // 2
    killed = (n - 2) // 4 if n % 4 == 2 else None
    keys: List[Tuple[int, str, int]] = []
    for r in range(d_count):
        keys.extend((r, '1', j) for j in range(e_cap))
        keys.append((r, 'a', 0))
        if r != killed:
            keys.extend((r, 'b', j) for j in range(e_cap))

    def describe(key: Tuple[int, str, int]) -> BasisElement:
        r, kind, j = key
        base = 4 * r * (m - 1)
        if kind == '1':
            return BasisElement(_monomial_name([_delta(r), ("e", j)]), base + 2 * j, 2 if j else 0)
        if kind == 'a':
            return BasisElement(_monomial_name([_delta(r), ("a", 1)]), base + m - 1, 0)
        return BasisElement(_monomial_name([_delta(r), ("b", 1), ("e", j)]), base + 2 * m - 1 + 2 * j, 2)

    basis = [describe(k) for k in keys]
    position = {key: idx for idx, key in enumerate(keys)}

    def rule(x: int, y: int) -> Optional[Tuple[int, int]]:
        (r1, k1, j1), (r2, k2, j2) = keys[x], keys[y]
        if k1 != '1' and k2 != '1':
            return None  # a^2 = ab = b^2 = 0
        kind = k2 if k1 == '1' else k1
        if kind == 'a' and j1 + j2 > 0:
            return None  # ae = 0
        target = (r1 + r2, kind, j1 + j2)
        if target not in position:
            return None
        return position[target], math.comb(2 * r1 + 2 * r2, 2 * r1)

    generators = [_monomial_name([_delta(r)]) for r in range(1, d_count)]
    if e_cap > 1:
        generators.append("e")
    generators.append("a")
    if (0, 'b', 0) in position:
        generators.append("b")
    return GradedRing.from_rule(
        name=f"H*(G(S^{m};A,A,{n})/Z2; Z)", domain=CoefficientDomain.Z, basis=basis,
        generator_names=generators, rule=rule, space=SpaceKind.QUOTIENT, params={'m': m, 'n': n},
    )


def quotient_integral_groups(m: int, n: int) -> Dict[int, Tuple[int, int]]:
    """degree -> (rank of Z part, number of Z/2 summands), stated degree by degree"""
    if m < 2 or n < 2 or n % 2:
        raise BadInput("needs m >= 2 and even n >= 2")
    groups: Dict[int, List[int]] = {}

    def add(degree: int, free: int, tors: int):
        entry = groups.setdefault(degree, [0, 0])
        entry[0] += free
        entry[1] += tors

    if m % 2:
        for i in range(n // 2):
            add(2 * i * (m - 1), 1, 0)
            for j in range(2 * i * (m - 1) + 1, (2 * i + 1) * (m - 1) + 1):
                if j % 2 == 0:
                    add(j, 0, 1)
    else:
        for r in range((n - 2) // 4 + 1):
            for eps in (0, 1):
                add((4 * r + eps) * (m - 1), 1, 0)
            for i in range(2, m - 1, 2):
                add(4 * r * (m - 1) + i, 0, 1)
        r_prime = 0
        while 4 * r_prime <= n - 4:
            for i in range(1, m, 2):
                add((4 * r_prime + 2) * (m - 1) + i, 0, 1)
            r_prime += 1
    return {d: (v[0], v[1]) for d, v in sorted(groups.items())}


def betti_numbers(ring: GradedRing, field_domain: CoefficientDomain) -> Dict[int, int]:
    """Betti numbers over Q or Z_2 (universal coefficients for integral rings)"""
    groups = ring.additive_groups()
    top = ring.top_degree
    betti: Dict[int, int] = {}
    for degree in range(top + 1):
        free, tors = groups.get(degree, (0, 0))
        if field_domain == CoefficientDomain.Q:
            value = free
        elif field_domain == CoefficientDomain.Z2:
            if ring.domain == CoefficientDomain.Z:
                value = free + tors + groups.get(degree + 1, (0, 0))[1]
            else:
                value = free + tors
        else:
            raise BadInput("Betti numbers need a field")
        if value:
            betti[degree] = value
    return betti


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poincare_polynomial_quotient(m: int, n: int) -> List[int]:
    """Coefficients of (t^m - 1)/(t - 1) * (t^(n(m-1)) - 1)/(t^(2(m-1)) - 1)"""
    if m < 2 or n < 2 or n % 2:
        raise BadInput("needs m >= 2 and even n >= 2")
    first = [1] * m
    second = [0] * ((n - 2) * (m - 1) + 1)
    for j in range(n // 2):
        second[2 * j * (m - 1)] = 1
    return _poly_mul(first, second)


def betti_polynomial(betti: Dict[int, int]) -> List[int]:
    top = max(betti) if betti else 0
    return [betti.get(d, 0) for d in range(top + 1)]


# ---------------------------------------------------------------------------
# Cyclic configuration space of S^m
# ---------------------------------------------------------------------------

def cyclic_ring(m: int, n: int, coeffs: CoefficientDomain = CoefficientDomain.Q) -> GradedRing:
    """Cohomology of G(S^m, n) with field coefficients

    m odd: u (degree m, u^2 = 0), sigma_i (degree i(m-1), i <= n-2) multiplying as
    in the closed-string ring; established over Q, other fields carry the
    `unverified` flag. m even, n odd: w (degree 2m-1, w^2 = 0), sigma_2i
    (degree 2i(m-1), i <= (n-3)/2) with sigma_2i sigma_2j = C(i+j, i) sigma_2(i+j),
    for fields of characteristic other than 2.
    """
    if m < 2:
        raise BadInput("the cyclic ring needs m >= 2")
    if n < 2:
        raise BadInput("cyclic configurations need n >= 2")
    if coeffs == CoefficientDomain.Z:
        raise Unsupported("the cyclic ring is available over fields only")
    if m % 2:
        unverified = coeffs != CoefficientDomain.Q
        cap = n - 2
        odd_name, odd_degree = "u", m
        step = 1
    else:
        if n % 2 == 0:
            raise Unsupported("the cyclic ring for even m is known only for odd n")
        if coeffs == CoefficientDomain.Z2:
            raise Unsupported("for even m the cyclic ring needs a field of characteristic other than 2")
        unverified = False
        cap = (n - 3) // 2
        odd_name, odd_degree = "w", 2 * m - 1
        step = 2

    keys = [(i, eps) for eps in (0, 1) for i in range(cap + 1)]

    def describe(key: Tuple[int, int]) -> BasisElement:
        i, eps = key
        parts = [] if i == 0 else [(f"sigma_{step * i}", 1)]
        if eps:
            parts.append((odd_name, 1))
        return BasisElement(_monomial_name(parts), step * i * (m - 1) + eps * odd_degree)

    basis = [describe(k) for k in keys]
    position = {key: idx for idx, key in enumerate(keys)}

    def rule(x: int, y: int) -> Optional[Tuple[int, int]]:
        (i1, e1), (i2, e2) = keys[x], keys[y]
        target = (i1 + i2, e1 + e2)
        if target not in position:
            return None
        return position[target], math.comb(i1 + i2, i1)

    generators = [describe((i, 0)).name for i in range(1, cap + 1)] + [odd_name]
    return GradedRing.from_rule(
        name=f"H*(G(S^{m},{n}); {coeffs.value})", domain=coeffs, basis=basis,
        generator_names=generators, rule=rule, space=SpaceKind.CYCLIC,
        params={'m': m, 'n': n}, unverified=unverified,
    )


def cyclic_poincare_polynomial(ring: GradedRing) -> List[int]:
    return betti_polynomial(betti_numbers(ring, CoefficientDomain.Q))


# ---------------------------------------------------------------------------
# Cup-length
# ---------------------------------------------------------------------------

def cup_length_witness(ring: GradedRing) -> Tuple[int, List[str]]:
    """Longest nonzero product of positive-degree generators and one product realising it

    Search runs over nondecreasing generator sequences. A product of basis
    monomials is c * b for one basis element b, and further products only
    depend on b and on whether c is even, so that is the memo key.
    """
    gens = ring.generators

    def parity_class(c: Coefficient) -> int:
        return int(c) % 2 if ring.domain == CoefficientDomain.Z else 1

    @lru_cache(maxsize=None)
    def best(position: int, target: int, klass: int) -> Tuple[int, Tuple[int, ...]]:
        top = (0, ())
        current = ring.element_from({target: 1 if klass else 2})
        for g_pos in range(position, len(gens)):
            prod = current * ring.element_from({gens[g_pos]: 1})
            if prod.is_zero():
                continue
            (idx, c), = prod.coeffs
            length, tail = best(g_pos, idx, parity_class(c))
            if length + 1 > top[0]:
                top = (length + 1, (gens[g_pos],) + tail)
        return top

    length, sequence = best(0, 0, 1)
    return length, [ring.basis[g].name for g in sequence]


def cup_length(ring: GradedRing) -> int:
    return cup_length_witness(ring)[0]


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

@dataclass
class BoundReport:
    m: int
    n: int
    kind: TrajectoryKind
    clause: Clause
    value: int
    witness: str = ""
    witness_verified: bool = False
    category_bound: Optional[int] = None
    requires_generic: bool = False
    conjectured_value: Optional[int] = None
    observed: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            'm': self.m,
            'n': self.n,
            'kind': self.kind.value,
            'clause': self.clause.value,
            'value': self.value,
            'witness': self.witness,
            'witness_verified': self.witness_verified,
            'category_bound': self.category_bound,
            'requires_generic': self.requires_generic,
            'conjectured_bound': self.conjectured_value,
            'conjectured': self.conjectured_value is not None,
            'observed': self.observed,
        }

    @staticmethod
    def from_dict(data: dict) -> 'BoundReport':
        return BoundReport(
            m=data['m'], n=data['n'], kind=TrajectoryKind(data['kind']), clause=Clause(data['clause']),
            value=data['value'], witness=data.get('witness', ""),
            witness_verified=data.get('witness_verified', False),
            category_bound=data.get('category_bound'),
            requires_generic=data.get('requires_generic', False),
            conjectured_value=data.get('conjectured_bound'),
            observed=data.get('observed'),
        )


def binomial_parity(i: int, j: int) -> bool:
    """True when C(2i+2j, 2i) is even, i.e. i and j share a binary digit"""
    if i < 0 or j < 0:
        raise BadInput("binomial_parity needs i, j >= 0")
    return (i & j) != 0


def binomial_parity_exact(i: int, j: int) -> bool:
    return math.comb(2 * i + 2 * j, 2 * i) % 2 == 0


def floor_log2(n: int) -> int:
    return n.bit_length() - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def _category_weight(name: str) -> int:
    return CATEGORY_WEIGHT_E if name == "e" else 1


def _witness_report(ring: GradedRing, factors: List[str]) -> Tuple[str, bool, int]:
    product = ring.product_of(factors)
    text = " * ".join(factors) if factors else "1"
    weight = sum(_category_weight(f) for f in factors)
    return text, not product.is_zero(), weight + 1


def conjectured_closed_bound(m: int, n: int) -> Optional[int]:
    """Conjectural strengthening for even n; printed, never used in a verdict"""
    if m < 2 or n < 2 or n % 2:
        return None
    return n + m - 1 if m % 2 else n // 2 + m - 1


def bound_closed(m: int, n: int, clause: Clause) -> BoundReport:
    """Lower bound on Z_2-orbits of closed trajectories through a point"""
    if n < 1:
        raise BadInput(f"n must be at least 1, got {n}")
    clause = Clause(clause)
    report = BoundReport(m=m, n=n, kind=TrajectoryKind.CLOSED_FROM_POINT, clause=clause, value=0,
                         conjectured_value=conjectured_closed_bound(m, n))
    if clause == Clause.I:
        if m < 2:
            raise BadClause("clause I needs m >= 2")
        report.value = n if m % 2 else n // 2 + 1
        ring = closed_string_ring(m, n)
        length, factors = cup_length_witness(ring)
        report.witness, report.witness_verified, _ = _witness_report(ring, factors)
        report.category_bound = length + 1
    elif clause == Clause.II:
        if m < 2:
            raise BadClause("clause II needs m >= 2")
        if n % 2:
            raise BadClause("clause II needs even n")
        _fill_clause_two(report)
    elif clause == Clause.III:
        if n % 2:
            raise BadClause("clause III needs even n")
        report.requires_generic = True
        if m == 1:
            report.value = n // 2
            report.witness = f"{n // 2} contractible components"
            report.witness_verified = True
            report.category_bound = n // 2
        elif m < 1:
            raise BadClause("m must be at least 1")
        else:
            report.value = m * n // 2
            betti = betti_numbers(quotient_ring(m, n), CoefficientDomain.Z2)
            total = sum(betti.values())
            report.witness = f"sum of Z2 Betti numbers of the quotient = {total}"
            report.witness_verified = total == sum(poincare_polynomial_quotient(m, n))
            report.category_bound = total
    else:
        raise BadClause("closed-string bounds use clauses I, II or III")
    return report


def clause_two_factors(m: int, n: int) -> Tuple[List[str], str]:
    """Factors of the nonzero category-weight product and a note on special cases"""
    if m % 2:
        s = floor_log2(n) - 2
        deltas = [f"delta_{2 ** t}" for t in range(s + 1)] if s >= 0 else []
        return deltas + ["e"] * ((m - 1) // 2), ""
    evens = ["e"] * ((m - 2) // 2)
    if n == 2:
        return evens, ("b = 0 here; G_2 / Z_2 is homotopy equivalent to RP^(m-1), and alpha^(m-1) != 0 "
                       "in its Z2 cohomology gives category m")
    if n in (4, 6):
        return ["b"] + evens, ""
    if (n + 2) & (n + 1) == 0:
        r = floor_log2(n + 2)
        s = r - 3
        return [f"delta_{2 ** t}" for t in range(s + 1)] + evens, "b dropped: delta_k b = 0 for n = 4k + 2"
    s = floor_log2((n + 2) // 4) - 1
    return [f"delta_{2 ** t}" for t in range(s + 1)] + ["b"] + evens, ""


def _fill_clause_two(report: BoundReport):
    m, n = report.m, report.n
    if m % 2:
        report.value = floor_log2(n) + m - 1
    elif n == 2:
        report.value = m
    else:
        report.value = floor_log2(n) + m - 2
    ring = quotient_ring(m, n)
    factors, note = clause_two_factors(m, n)
    report.witness, report.witness_verified, report.category_bound = _witness_report(ring, factors)
    if m % 2 == 0 and n == 2:
        # Z2 cohomology of RP^(m-1) is Z2[alpha]/(alpha^m): one class per degree 0..m-1
        z2 = betti_polynomial(betti_numbers(ring, CoefficientDomain.Z2))
        report.witness_verified = report.witness_verified and z2 == [1] * m
        report.category_bound = len(z2)
    if note:
        report.witness = f"{report.witness} ({note})"


def bound_periodic(m: int, n: int) -> BoundReport:
    """Lower bound on D_n-orbits of n-periodic trajectories, n an odd prime"""
    if m < 2:
        raise BadInput("periodic bounds need m >= 2")
    if n % 2 == 0 or not is_prime(n):
        raise BadInput(f"periodic bounds need an odd prime n, got {n}")
    ring = cyclic_ring(m, n, CoefficientDomain.Q)
    if m % 2:
        value = n
        factors = ["sigma_1"] * (n - 2) + ["u"]
    else:
        value = (n + 1) // 2
        factors = ["sigma_2"] * ((n - 3) // 2) + ["w"]
    text, verified, category = _witness_report(ring, factors)
    return BoundReport(m=m, n=n, kind=TrajectoryKind.PERIODIC, clause=Clause.THM2, value=value,
                       witness=text, witness_verified=verified, category_bound=category)


def applicable_closed_bounds(m: int, n: int) -> List[BoundReport]:
    """Every closed-string clause that applies to (m, n)"""
    reports = []
    for clause in (Clause.I, Clause.II, Clause.III):
        try:
            reports.append(bound_closed(m, n, clause))
        except BadClause:
            continue
    return reports


def best_closed_bound(m: int, n: int, generic: bool) -> Optional[BoundReport]:
    """Largest applicable closed-string bound; clause III counts only for generic data"""
    candidates = [r for r in applicable_closed_bounds(m, n) if generic or not r.requires_generic]
    if not candidates:
        return None
    return max(candidates, key=lambda r: r.value)


def display_bounds(reports: Sequence[BoundReport]):
    print("\n" + "=" * 60)
    print("LOWER BOUNDS")
    print("=" * 60)
    for r in reports:
        check = "✅" if r.witness_verified else "❌"
        generic = " (generic data only)" if r.requires_generic else ""
        print(f"m={r.m} n={r.n} {r.kind.value} clause {r.clause.value}: {r.value}{generic}")
        print(f"   {check} witness: {r.witness}")
        if r.conjectured_value is not None:
            print(f"   conjectured (not asserted): {r.conjectured_value}")
    print("=" * 60)
