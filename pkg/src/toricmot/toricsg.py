"""Validated semigroup model and its combinatorial PL data.

A semigroup is given by its minimal generators ``e_1..e_n`` in ``Z^d``.
Indices are 0-based in code and 1-based in reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from . import polycone as pc
from .intlat import coordinates, lattice_index, lattice_rank, row_basis
from .polycone import Cone, Fan, NewtonPolyhedron, PLFunction, dot

Vector = tuple[int, ...]


class SemigroupError(ValueError):
    """Raised when generators do not define a valid semigroup."""


class _Infinity:
    """The value of ``phi_{n+1}`` and ``Phi_{d+1}``; compares above every integer."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITY"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("toricmot.INFINITY")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITY = _Infinity()


@dataclass(frozen=True)
class SemigroupData:
    """Semigroup generated by ``gens`` in ``Z^d``.

    Attributes:
        d: Lattice rank.
        gens: Minimal generators, in input order.
        sigma_dual: ``R_{>=0} Lambda``.
        saturated: User assertion that ``Lambda = sigma_dual ∩ Z^d``.
        basis: Rows expressing the coordinates used here in the parent lattice
            (identity unless produced by ``face_semigroup``).
    """

    d: int
    gens: tuple[Vector, ...]
    sigma_dual: Cone | None
    saturated: bool = False
    basis: tuple[Vector, ...] = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return len(self.gens)

    @property
    def is_trivial(self) -> bool:
        return self.n == 0

    @cached_property
    def sigma(self) -> Cone:
        return self.sigma_dual.dual()

    @cached_property
    def gen_matrix(self) -> np.ndarray:
        return np.array(self.gens, dtype=np.int64).reshape(self.n, self.d)

    def pairings(self, nu: Sequence[int]) -> list[int]:
        return [dot(nu, e) for e in self.gens]

    def in_int_sigma(self, nu: Sequence[int]) -> bool:
        return all(p > 0 for p in self.pairings(nu))

    @cached_property
    def positive_weight(self) -> Vector:
        """An integer vector of ``int sigma``."""
        return self.sigma.interior_point

    def contains(self, x: Sequence[int]) -> tuple[int, ...] | None:
        """A list of generator indices summing to ``x``, or ``None`` if ``x`` is not in Lambda."""
        return _membership(self.gens, self.positive_weight, tuple(int(t) for t in x))


def _membership(gens, w, x):
    @lru_cache(maxsize=None)
    def rec(y):
        if not any(y):
            return ()
        if dot(w, y) <= 0:
            return None
        for k, e in enumerate(gens):
            z = tuple(a - b for a, b in zip(y, e))
            if dot(w, z) < 0:
                continue
            r = rec(z)
            if r is not None:
                return (k,) + r
        return None

    return rec(x)


def trivial_semigroup(saturated: bool = True) -> SemigroupData:
    return SemigroupData(0, (), None, saturated)


def build_semigroup(d: int, gens: Sequence[Sequence[int]], saturated: bool = False) -> SemigroupData:
    """Validate generators and build the semigroup.

    Args:
        d: Lattice rank.
        gens: Candidate minimal generators.
        saturated: Whether the caller asserts normality.

    Returns:
        The validated ``SemigroupData``.

    Raises:
        SemigroupError: on malformed vectors, a cone that is not strictly
            convex of dimension ``d``, generators that do not generate
            ``Z^d``, or a non-minimal generating set (with a witness).
    """
    vecs = []
    for i, g in enumerate(gens):
        if isinstance(g, int):
            g = (g,)
        g = tuple(g)
        if len(g) != d or not all(isinstance(x, (int, np.integer)) and not isinstance(x, bool) for x in g):
            raise SemigroupError(f"generator {i + 1} is not an integer vector of length {d}: {list(g)}")
        vecs.append(tuple(int(x) for x in g))
    if d == 0 and not vecs:
        return trivial_semigroup(saturated)
    if d <= 0:
        raise SemigroupError("lattice rank must be positive")
    if not vecs:
        raise SemigroupError("no generators given")
    for i, g in enumerate(vecs):
        if not any(g):
            raise SemigroupError(f"generator {i + 1} is zero")
    if len(set(vecs)) != len(vecs):
        raise SemigroupError("generators are not pairwise distinct")
    if lattice_rank(vecs) != d:
        raise SemigroupError(f"generators span a space of rank {lattice_rank(vecs)} < {d}")
    idx = lattice_index(vecs)
    if idx != 1:
        raise SemigroupError(f"generators span a sublattice of index {idx}, not Z^{d}")
    sd = Cone.from_rays(vecs, d=d)
    if sd.lines:
        raise SemigroupError("the cone spanned by the generators is not strictly convex")
    S = SemigroupData(d, tuple(vecs), sd, saturated, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))
    w = S.positive_weight
    for i, e in enumerate(vecs):
        for k, f in enumerate(vecs):
            if k == i:
                continue
            rest = tuple(a - b for a, b in zip(e, f))
            if not sd.contains(rest):
                continue
            dec = _membership(S.gens, w, rest)
            if dec is not None:
                parts = " + ".join(str(list(vecs[t])) for t in (k,) + dec)
                raise SemigroupError(f"generating set is not minimal: {list(e)} = {parts}")
    return S


def combination_ideal(S: SemigroupData, j: int) -> list[Vector]:
    """Sums of ``j`` distinct generators, deduplicated and sorted."""
    if not 1 <= j <= S.n:
        raise ValueError(f"j must be in 1..{S.n}")
    return sorted({tuple(map(sum, zip(*c))) for c in combinations(S.gens, j)})


def log_jacobian_ideal(S: SemigroupData, l: int) -> list[Vector]:
    """Sums of ``l`` linearly independent generators, deduplicated and sorted."""
    if not 1 <= l <= S.d:
        raise ValueError(f"l must be in 1..{S.d}")
    return sorted({tuple(map(sum, zip(*c))) for c in combinations(S.gens, l) if lattice_rank(c) == l})


def independent_subsets(S: SemigroupData, l: int) -> list[tuple[int, ...]]:
    return [c for c in combinations(range(S.n), l) if lattice_rank([S.gens[i] for i in c]) == l]


@dataclass
class IdealFamily:
    """The ideals ``C_j``, ``J_l``, their Newton polyhedra, fans and PL functions."""

    S: SemigroupData
    C: list[NewtonPolyhedron]
    J: list[NewtonPolyhedron]
    theta: list[Fan]
    Sigma: list[Fan]
    ord_C: list[PLFunction]
    ord_J: list[PLFunction]

    @property
    def n(self) -> int:
        return self.S.n

    @property
    def d(self) -> int:
        return self.S.d

    def phi(self, j: int, nu: Sequence[int]):
        """``phi_j(nu)``: the ``j``-th smallest pairing; ``phi_0 = 0``, ``phi_{n+1} = INFINITY``."""
        if j == 0:
            return 0
        if j == self.n + 1:
            return INFINITY
        return sorted(self.S.pairings(nu))[j - 1]

    def ord_j(self, l: int, nu: Sequence[int]) -> int:
        """``ord_{J_l}(nu)`` by the greedy minimum-weight independent set."""
        return dot(nu, self.min_independent(l, nu)[1])

    def min_independent(self, l: int, nu: Sequence[int]) -> tuple[tuple[int, ...], Vector]:
        """Greedy minimizer: indices and their sum."""
        order = sorted(range(self.n), key=lambda i: (dot(nu, self.S.gens[i]), i))
        chosen: list[int] = []
        for i in order:
            if len(chosen) == l:
                break
            if lattice_rank([self.S.gens[t] for t in chosen + [i]]) == len(chosen) + 1:
                chosen.append(i)
        w = tuple(sum(self.S.gens[i][t] for i in chosen) for t in range(self.d))
        return tuple(sorted(chosen)), w

    def Phi(self, l: int, nu: Sequence[int]):
        if l == self.d + 1:
            return INFINITY
        if l == 0:
            return 0
        return self.ord_j(l, nu) - self.ord_j(l - 1, nu) if l > 1 else self.ord_j(1, nu)

    @cached_property
    def theta_cumulative(self) -> list[Fan]:
        """``[∩_{r<=j} Theta_r for j = 1..n]``."""
        out = [self.theta[0]]
        for f in self.theta[1:]:
            out.append(pc.fan_intersection([out[-1], f]))
        return out

    @cached_property
    def sigma_cumulative(self) -> list[Fan]:
        out = [self.Sigma[0]]
        for f in self.Sigma[1:]:
            out.append(pc.fan_intersection([out[-1], f]))
        return out


def phi_sequences(S: SemigroupData) -> IdealFamily:
    """Build every Newton polyhedron, fan and support function of ``S``.

    Monotonicity of ``phi`` and ``Phi`` is checked on the rays of the finest fan.
    """
    if S.is_trivial:
        raise ValueError("the trivial semigroup has no ideals")
    C = [pc.newton_polyhedron(combination_ideal(S, j), S.sigma_dual) for j in range(1, S.n + 1)]
    J = [pc.newton_polyhedron(log_jacobian_ideal(S, l), S.sigma_dual) for l in range(1, S.d + 1)]
    theta = [pc.normal_fan(P) for P in C]
    Sigma = [pc.normal_fan(P) for P in J]
    F = IdealFamily(S, C, J, theta, Sigma, [pc.support_function(P) for P in C], [pc.support_function(P) for P in J])
    total = tuple(map(sum, zip(*S.gens)))
    for rho in F.theta_cumulative[-1].rays:
        ph = [F.phi(j, rho) for j in range(S.n + 1)]
        Ph = [F.Phi(l, rho) for l in range(S.d + 1)]
        if any(a > b for a, b in zip(ph, ph[1:])) or any(a > b for a, b in zip(Ph, Ph[1:])):
            raise AssertionError(f"monotonicity fails at {rho}")
        if F.ord_C[-1](rho) != dot(rho, total):
            raise AssertionError("ord_{C_n} is not linear")
    return F


def face_semigroup(S: SemigroupData, eta: Cone) -> SemigroupData:
    """The semigroup ``Lambda ∩ eta^perp``, re-based into the lattice it generates.

    ``eta = {0}`` gives ``S`` itself and ``eta = sigma`` gives the trivial semigroup.
    """
    if eta not in pc.faces_of(S.sigma):
        raise ValueError("eta is not a face of sigma")
    keep = [e for e in S.gens if all(dot(e, r) == 0 for r in eta.rays)]
    if not keep:
        return trivial_semigroup(S.saturated)
    if len(keep) == S.n:
        return S
    B = [tuple(int(x) for x in row) for row in row_basis(keep)]
    coords = []
    for e in keep:
        c = coordinates(B, e)
        coords.append(tuple(int(x) for x in c))
    F = build_semigroup(len(B), coords, S.saturated)
    return SemigroupData(F.d, F.gens, F.sigma_dual, F.saturated, tuple(B))
