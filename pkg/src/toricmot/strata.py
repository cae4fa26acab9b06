"""Strata ``(j, theta)`` of the pairs ``(nu, s)`` and their combinatorial data.

A stratum collects the pairs with ``nu`` in the relative interior of a cone
``theta`` of the ``j``-th cumulative fan and ``phi_j(nu) <= s < phi_{j+1}(nu)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .intlat import lattice_index, lattice_rank
from .polycone import Cone, dot
from .toricsg import INFINITY, IdealFamily

Vector = tuple[int, ...]


@dataclass(frozen=True)
class Stratum:
    """One stratum ``(j, theta)``.

    ``I``, ``l``, ``q``, ``tau``, ``d_l`` and ``poles`` are ``None`` for empty strata.
    """

    j: int
    theta: Cone
    empty: bool
    nu_w: Vector | None = None
    s_w: int | None = None
    I: tuple[int, ...] | None = None
    l: int | None = None
    q: int | None = None
    tau: Cone | None = None
    d_l: bool | None = None
    poles: tuple[tuple[int, int], ...] | None = None

    @property
    def key(self):
        return (self.j, self.theta.dim, self.theta.rays)


@dataclass(frozen=True)
class ClassWitness:
    nu: Vector
    s: int
    I: tuple[int, ...]
    values: tuple[int, ...]
    l: int
    q: int
    ord_j: int

    @property
    def key(self):
        """Complete invariant of the class: ``(s, I, values on I)``."""
        return (self.s, self.I, self.values)


def small_indices(F: IdealFamily, nu: Sequence[int], s: int) -> tuple[int, ...]:
    return tuple(i for i, p in enumerate(F.S.pairings(nu)) if p <= s)


def class_witness(F: IdealFamily, nu: Sequence[int], s: int) -> ClassWitness:
    I = small_indices(F, nu, s)
    rows = [F.S.gens[i] for i in I]
    l = lattice_rank(rows) if rows else 0
    q = lattice_index(rows) if rows else 1
    return ClassWitness(tuple(nu), s, I, tuple(dot(nu, F.S.gens[i]) for i in I), l, q, F.ord_j(l, nu) if l else 0)


def stratum_indices(w: ClassWitness) -> tuple[int, int]:
    return w.l, w.q


def witness_search(F: IdealFamily, j: int, theta: Cone) -> tuple[Vector, int] | None:
    """A member ``(nu, phi_j(nu))`` of the stratum, or ``None`` if it is empty.

    ``phi_{j+1} - phi_j`` is concave and nonnegative on ``theta``, so it either
    vanishes on the whole relative interior or nowhere there; one interior
    point decides.
    """
    nu = theta.interior_point
    if not any(nu) or not F.S.in_int_sigma(nu):
        return None
    lo, hi = F.phi(j, nu), F.phi(j + 1, nu)
    if hi is not INFINITY and hi <= lo:
        return None
    return nu, lo


def associated_tau(F: IdealFamily, l: int, nu: Sequence[int]) -> Cone:
    """The cone of ``∩_{r<=l} Sigma_r`` with ``nu`` in its relative interior."""
    return F.sigma_cumulative[l - 1].locate(nu)


def d_l_membership(F: IdealFamily, l: int, nu: Sequence[int]) -> bool:
    """Whether every point of ``J_l`` minimizing ``<nu, .>`` lies in ``int sigma_dual``."""
    face = F.J[l - 1].face_at(nu)
    return all(all(dot(r, v) > 0 for r in F.S.sigma.rays) for v in face)


def pole_set(F: IdealFamily, j: int, theta: Cone, l: int) -> tuple[tuple[int, int], ...]:
    """Candidate pole pairs ``(a, b)`` of the stratum, sorted and deduplicated.

    Lower edges come from the rays of ``theta``; upper edges from every ray of
    the next cumulative fan inside ``theta``, where ``phi_{j+1} != phi_j``.
    Pairs with ``b = 0`` are dropped.
    """
    out = set()
    for rho in theta.rays:
        b = F.phi(j, rho)
        out.add((l * b - F.ord_j(l, rho), b))
    if j == F.n:
        out.add((l, 1))
    else:
        for rho in F.theta_cumulative[j].rays:
            if not theta.contains(rho):
                continue
            b0, b = F.phi(j, rho), F.phi(j + 1, rho)
            if b != b0:
                out.add((l * b - F.ord_j(l, rho), b))
    return tuple(sorted(p for p in out if p[1] > 0))


def enumerate_strata(F: IdealFamily) -> list[Stratum]:
    """Every stratum ``(j, theta)`` with relint ``theta`` inside ``int sigma``, sorted canonically."""
    out = []
    for j in range(1, F.n + 1):
        for theta in F.theta_cumulative[j - 1].cones:
            nu = theta.interior_point
            if not any(nu) or not F.S.in_int_sigma(nu):
                continue
            w = witness_search(F, j, theta)
            if w is None:
                out.append(Stratum(j, theta, True))
                continue
            nu, s = w
            pairs = F.S.pairings(nu)
            I = tuple(sorted(sorted(range(F.n), key=lambda i: (pairs[i], i))[:j]))
            rows = [F.S.gens[i] for i in I]
            l, q = lattice_rank(rows), lattice_index(rows)
            out.append(
                Stratum(
                    j, theta, False, nu, s, I, l, q,
                    associated_tau(F, l, nu), d_l_membership(F, l, nu), pole_set(F, j, theta, l),
                )
            )
    out.sort(key=lambda st: st.key)
    return out


def locate_pair(F: IdealFamily, strata: Sequence[Stratum], nu: Sequence[int], s: int) -> list[Stratum]:
    """All nonempty strata containing ``(nu, s)``; exactly one for valid input."""
    return [
        st for st in strata
        if not st.empty and st.theta.in_relint(nu) and F.phi(st.j, nu) <= s < F.phi(st.j + 1, nu)
    ]
