"""Brute-force oracle for the local series, independent of fans and strata.

Jet classes are enumerated straight from their definition: for every lattice
point ``nu`` of ``int sigma`` in a bounded region and every admissible order
``s``, the class key is ``(s, I, values on I)`` with ``I`` the generators of
order at most ``s``. Each class contributes
``(1/q) (L-1)^l L^{l s - ord_{J_l}(nu)}`` when every minimizer of ``J_l`` lies
in the interior of the dual cone.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import ceil

import numpy as np

from .intlat import coordinates, lattice_index, lattice_rank, row_basis
from .polycone import Cone, dot, faces_of
from .rational import SeriesExpansion
from .toricsg import SemigroupData


def _face_generators(S: SemigroupData, eta: Cone) -> list[tuple[int, ...]]:
    keep = [e for e in S.gens if all(dot(e, r) == 0 for r in eta.rays)]
    if not keep:
        return []
    B = [tuple(int(x) for x in row) for row in row_basis(keep)]
    return [tuple(int(x) for x in coordinates(B, e)) for e in keep]


def _binomial_row(l: int) -> list[int]:
    """Coefficients of ``(L-1)^l`` by increasing power of ``L``."""
    row = [1]
    for _ in range(l):
        row = [a - b for a, b in zip([0] + row, row + [0])]
    return row


def _local_classes(gens: list[tuple[int, ...]], s_max: int, geometric: bool) -> dict[tuple[int, int], Fraction]:
    """Sum of class weights as ``{(s, L-exponent): coefficient}``."""
    d = len(gens[0])
    n = len(gens)
    sigma = Cone.from_rays(gens).dual()

    def interior(v):
        return all(dot(r, v) > 0 for r in sigma.rays)

    subsets = {l: [c for c in combinations(range(n), l) if lattice_rank([gens[i] for i in c]) == l] for l in range(1, d + 1)}
    inner = []
    for l, subs in subsets.items():
        for c in subs:
            w = tuple(map(sum, zip(*[gens[i] for i in c])))
            if interior(w):
                inner.append((l, w))
    if not inner:
        return {}
    lo = [0] * d
    hi = [0] * d
    for l, w in inner:
        for r in sigma.rays:
            t = Fraction(l * s_max, dot(r, w))
            for k in range(d):
                lo[k] = min(lo[k], int(np.floor(t * r[k])))
                hi[k] = max(hi[k], ceil(t * r[k]))
    grids = np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(lo, hi)], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    E = np.array(gens, dtype=np.int64)
    P = pts @ E.T
    ok = np.all(P > 0, axis=1)
    W = np.array([w for _, w in inner], dtype=np.int64)
    bnd = np.array([l * s_max for l, _ in inner], dtype=np.int64)
    ok &= np.any(pts @ W.T <= bnd, axis=1)
    pts, P = pts[ok], P[ok]

    info = {}
    classes: dict[tuple, set] = {}
    for nu, p in zip(pts.tolist(), P.tolist()):
        order = sorted(range(n), key=lambda i: p[i])
        for j in range(1, n + 1):
            lo_s = p[order[j - 1]]
            hi_s = p[order[j]] - 1 if j < n else s_max
            hi_s = min(hi_s, s_max)
            if lo_s > hi_s:
                continue
            I = tuple(sorted(order[:j]))
            if I not in info:
                rows = [gens[i] for i in I]
                info[I] = (lattice_rank(rows), lattice_index(rows))
            l, q = info[I]
            weights = [sum(p[i] for i in c) for c in subsets[l]]
            m = min(weights)
            mins = [c for c, x in zip(subsets[l], weights) if x == m]
            if not all(interior(tuple(map(sum, zip(*[gens[i] for i in c])))) for c in mins):
                continue
            key = (I, tuple(p[i] for i in I), l, q, m)
            classes.setdefault(key, set()).update(range(lo_s, hi_s + 1))
    out: dict[tuple[int, int], Fraction] = {}
    for (I, vals, l, q, m), ss in classes.items():
        wt = Fraction(1) if geometric else Fraction(1, q)
        binom = _binomial_row(l)
        for s in ss:
            base = l * s - m
            for k, c in enumerate(binom):
                if c:
                    key = (s, base + k)
                    out[key] = out.get(key, Fraction(0)) + wt * c
    return out


def oracle_series(S: SemigroupData, s_max: int, geometric: bool = False) -> SeriesExpansion:
    """Expansion of the local series through ``T^s_max`` by direct class enumeration."""
    acc: dict[tuple[int, int], Fraction] = {}
    faces = faces_of(S.sigma) if not S.is_trivial else [None]
    for eta in faces:
        gens = _face_generators(S, eta) if eta is not None else []
        if not gens:
            part = {(s, 0): Fraction(1) for s in range(s_max + 1)}
        else:
            part = _local_classes(gens, s_max, geometric)
        for k, v in part.items():
            acc[k] = acc.get(k, Fraction(0)) + v
    degL = max((a for _, a in acc), default=0)
    arr = np.zeros((degL + 1, s_max + 1), dtype=object)
    arr[:] = Fraction(0)
    for (s, a), v in acc.items():
        arr[a, s] += v
    return SeriesExpansion.from_array(arr, s_max)
