"""Rational polyhedral cones, fans, Newton polyhedra and support functions.

All cones are stored in a canonical double description: primitive extreme
rays (lexicographically sorted) plus a Hermite basis of the lineality space,
together with primitive facet normals and a Hermite basis of the equations
of the linear span. Two equal cones therefore compare equal as values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .intlat import (
    integer_kernel,
    lattice_rank,
    primitive,
    rational_solve,
    saturation_basis,
)

Vector = tuple[int, ...]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(int(a) * int(b) for a, b in zip(u, v))


def _rows(M) -> tuple[Vector, ...]:
    return tuple(tuple(int(x) for x in row) for row in M)


def _project_off(v: Vector, lines: Sequence[Vector]) -> Vector:
    """Primitive representative of ``v`` orthogonal to the span of ``lines``."""
    if not lines:
        return primitive(v)
    k = len(lines)
    G = [[dot(lines[a], lines[b]) for b in range(k)] for a in range(k)]
    c = rational_solve(G, [dot(li, v) for li in lines])
    proj = [v[t] - sum(c[a] * lines[a][t] for a in range(k)) for t in range(len(v))]
    den = 1
    for x in proj:
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive([int(x * den) for x in proj])


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone in R^d.

    Attributes:
        d: Ambient rank.
        rays: Primitive extreme rays modulo the lineality space.
        lines: Lattice basis of the lineality space.
        ineqs: Primitive facet normals ``w`` with ``<w, x> >= 0``.
        eqs: Lattice basis of the equations ``<u, x> = 0`` of the span.
    """

    d: int
    rays: tuple[Vector, ...]
    lines: tuple[Vector, ...] = ()
    ineqs: tuple[Vector, ...] = field(default=(), compare=False)
    eqs: tuple[Vector, ...] = field(default=(), compare=False)

    @classmethod
    def from_rays(cls, rays: Iterable[Sequence[int]], lines: Iterable[Sequence[int]] = (), d: int | None = None) -> "Cone":
        rays = [tuple(int(x) for x in r) for r in rays]
        lines = [tuple(int(x) for x in r) for r in lines]
        if d is None:
            if not rays and not lines:
                raise ValueError("ambient rank needed for the zero cone")
            d = len((rays or lines)[0])
        given = _rows(saturation_basis(lines, d)) if lines else ()
        gens = sorted({primitive(r) for r in rays if any(r)})
        span = list(gens) + list(given)
        eqs = _rows(integer_kernel(span, d)) if span else _rows(np.eye(d, dtype=int))
        k = d - len(eqs)
        # facet normals: kernels of (k - 1) independent generators, the given lines and eqs
        facets = set()
        base = list(given) + list(eqs)
        for S in combinations(gens, max(k - len(given) - 1, 0)):
            rows = list(S) + base
            if k == 0 or lattice_rank(rows) != d - 1:
                continue
            w = tuple(int(x) for x in integer_kernel(rows, d)[0])
            vals = [dot(w, g) for g in gens]
            if all(v >= 0 for v in vals) and any(vals):
                facets.add(primitive(w))
            elif all(v <= 0 for v in vals) and any(vals):
                facets.add(primitive([-x for x in w]))
        facets = sorted(facets)
        if k == 0:
            lin: tuple[Vector, ...] = ()
        else:
            lin = _rows(integer_kernel(list(facets) + list(eqs), d))
            lin = _rows(saturation_basis(lin, d)) if lin else ()
        nl = len(lin)
        extreme = []
        for g in sorted({_project_off(g, lin) for g in gens}):
            if not any(g):
                continue
            tight = [f for f in facets if dot(f, g) == 0]
            if lattice_rank(tight + list(eqs)) == d - nl - 1:
                extreme.append(g)
        return cls(d, tuple(extreme), lin, tuple(facets), eqs)

    @classmethod
    def from_inequalities(cls, ineqs: Iterable[Sequence[int]], eqs: Iterable[Sequence[int]] = (), d: int | None = None) -> "Cone":
        return cls.from_rays(ineqs, eqs, d).dual()

    @classmethod
    def zero(cls, d: int) -> "Cone":
        return cls.from_rays([], [], d)

    @classmethod
    def orthant(cls, d: int) -> "Cone":
        return cls.from_rays(np.eye(d, dtype=int).tolist())

    def dual(self) -> "Cone":
        return Cone(self.d, self.ineqs, self.eqs, self.rays, self.lines)

    @property
    def dim(self) -> int:
        return self.d - len(self.eqs)

    @property
    def is_pointed(self) -> bool:
        return not self.lines

    def contains(self, v: Sequence[int]) -> bool:
        return all(dot(u, v) == 0 for u in self.eqs) and all(dot(w, v) >= 0 for w in self.ineqs)

    def in_relint(self, v: Sequence[int]) -> bool:
        return all(dot(u, v) == 0 for u in self.eqs) and all(dot(w, v) > 0 for w in self.ineqs)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(r) for r in other.rays) and all(
            self.contains(li) and self.contains([-x for x in li]) for li in other.lines
        )

    def intersect(self, other: "Cone") -> "Cone":
        return Cone.from_inequalities(self.ineqs + other.ineqs, self.eqs + other.eqs, self.d)

    @cached_property
    def interior_point(self) -> Vector:
        """Sum of the primitive rays; lies in the relative interior."""
        p = [0] * self.d
        for r in self.rays:
            p = [a + b for a, b in zip(p, r)]
        for li in self.lines:
            p = [a + b for a, b in zip(p, li)]
        return tuple(p)

    def faces(self) -> list["Cone"]:
        return faces_of(self)

    def __repr__(self) -> str:
        s = f"Cone(rays={list(self.rays)}"
        if self.lines:
            s += f", lines={list(self.lines)}"
        return s + ")"


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def faces_of(c: Cone) -> list[Cone]:
    """All faces of ``c``, from ``{0}`` (or the lineality space) up to ``c``."""
    seen = {}
    m = len(c.ineqs)
    for r in range(m + 1):
        for S in combinations(c.ineqs, r):
            rays = [g for g in c.rays if all(dot(w, g) == 0 for w in S)]
            key = tuple(rays)
            if key not in seen:
                seen[key] = Cone.from_rays(rays, c.lines, c.d)
    return sorted(seen.values(), key=_cone_key)


def _cone_key(c: Cone):
    return (c.dim, c.rays, c.lines)


def relative_interior_membership(c: Cone, v: Sequence[int]) -> bool:
    return c.in_relint(v)


def face_semigroup_cone(sigma: Cone, eta: Cone) -> Cone:
    """The linear subspace ``eta^perp`` of the dual space, as a cone of lines.

    Raises:
        ValueError: if ``eta`` is not a face of ``sigma``.
    """
    if eta not in faces_of(sigma):
        raise ValueError("eta is not a face of sigma")
    gens = list(eta.rays) + list(eta.lines)
    if not gens:
        return Cone.from_rays([], np.eye(sigma.d, dtype=int).tolist(), sigma.d)
    return Cone.from_rays([], _rows(integer_kernel(gens, sigma.d)), sigma.d)


@dataclass(frozen=True)
class Fan:
    """A fan stored with all of its cones; ``maximal`` lists the top cones."""

    d: int
    support: Cone
    maximal: tuple[Cone, ...]
    cones: tuple[Cone, ...]

    @classmethod
    def from_maximal(cls, support: Cone, maximal: Iterable[Cone]) -> "Fan":
        maximal = sorted(set(maximal), key=_cone_key)
        allc = set()
        for c in maximal:
            allc.update(faces_of(c))
        return cls(support.d, support, tuple(maximal), tuple(sorted(allc, key=_cone_key)))

    @cached_property
    def rays(self) -> tuple[Vector, ...]:
        return tuple(sorted(c.rays[0] for c in self.cones if c.dim == 1 and not c.lines))

    def locate(self, v: Sequence[int]) -> Cone:
        """The unique cone of the fan having ``v`` in its relative interior."""
        hits = [c for c in self.cones if c.in_relint(v)]
        if len(hits) != 1:
            raise ValueError(f"point {tuple(v)} lies in {len(hits)} relative interiors")
        return hits[0]

    def cones_of_dim(self, k: int) -> list[Cone]:
        return [c for c in self.cones if c.dim == k]


def fan_intersection(fs: Sequence[Fan]) -> Fan:
    """Coarsest common refinement of fans with a common full-dimensional support."""
    if not fs:
        raise ValueError("no fans given")
    support = fs[0].support
    for f in fs[1:]:
        if f.support != support:
            raise ValueError("fans have different supports")
    maximal = list(fs[0].maximal)
    for f in fs[1:]:
        nxt = set()
        for a in maximal:
            for b in f.maximal:
                c = a.intersect(b)
                if c.dim == support.dim:
                    nxt.add(c)
        maximal = list(nxt)
    return Fan.from_maximal(support, maximal)


@dataclass(frozen=True)
class NewtonPolyhedron:
    """``conv(I) + sigma_dual`` for a finite set ``I`` of lattice points."""

    points: tuple[Vector, ...]
    sigma_dual: Cone
    vertices: tuple[Vector, ...]

    @cached_property
    def sigma(self) -> Cone:
        return self.sigma_dual.dual()

    def normal_cone(self, v: Sequence[int]) -> Cone:
        """``{nu in sigma : <nu, w - v> >= 0 for all w in I}``."""
        rows = list(self.sigma.ineqs) + [tuple(a - b for a, b in zip(w, v)) for w in self.points if tuple(w) != tuple(v)]
        return Cone.from_inequalities([r for r in rows if any(r)], self.sigma.eqs, self.sigma.d)

    def ord(self, nu: Sequence[int]) -> int:
        return min(dot(nu, v) for v in self.vertices)

    def face_at(self, nu: Sequence[int]) -> tuple[Vector, ...]:
        """Points of ``I`` minimizing ``<nu, .>``."""
        m = min(dot(nu, v) for v in self.points)
        return tuple(p for p in self.points if dot(nu, p) == m)


def newton_polyhedron(I: Iterable[Sequence[int]], sigma_dual: Cone) -> NewtonPolyhedron:
    """Build ``N(I)`` and its vertices.

    A point is a vertex exactly when its normal cone inside ``sigma`` is
    full-dimensional; ``sigma_dual`` must be strictly convex of full dimension.
    """
    pts = tuple(sorted({tuple(int(x) for x in p) for p in I}))
    if not pts:
        raise ValueError("empty generating set")
    P = NewtonPolyhedron(pts, sigma_dual, ())
    verts = tuple(v for v in pts if P.normal_cone(v).dim == sigma_dual.d)
    return NewtonPolyhedron(pts, sigma_dual, verts)


@dataclass(frozen=True)
class PLFunction:
    """A piecewise-linear function: one linear functional per maximal cone."""

    fan: Fan
    pieces: tuple[tuple[Cone, Vector], ...]

    def __call__(self, nu: Sequence[int]) -> int:
        for c, f in self.pieces:
            if c.contains(nu):
                return dot(f, nu)
        raise ValueError(f"{tuple(nu)} is outside the support")

    def functional_on(self, c: Cone) -> Vector:
        for m, f in self.pieces:
            if m.contains_cone(c):
                return f
        raise ValueError("cone not contained in any maximal cone")


def normal_fan(P: NewtonPolyhedron) -> Fan:
    return Fan.from_maximal(P.sigma, [P.normal_cone(v) for v in P.vertices])


def support_function(P: NewtonPolyhedron) -> PLFunction:
    fan = normal_fan(P)
    pieces = []
    for v in P.vertices:
        pieces.append((P.normal_cone(v), v))
    pieces.sort(key=lambda cf: _cone_key(cf[0]))
    return PLFunction(fan, tuple(pieces))
