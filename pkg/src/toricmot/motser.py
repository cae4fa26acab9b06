"""Series engine: class enumeration, per-stratum rational forms and their assembly.

Each stratum series is obtained by reconstruction with a known denominator:
the class generating polynomial ``G`` is computed up to ``s_max``, multiplied
by the candidate denominator ``D`` and truncated to ``deg_T D``; the product's
coefficients between ``deg_T D`` and ``s_max`` must vanish, which certifies
the result. When the guard window does not vanish the numerator degree is
raised step by step, so numerators of degree above ``deg_T D`` are handled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import ceil, floor, gcd
from typing import Sequence

import numpy as np

from . import polycone as pc
from .intlat import coordinates, lattice_index, lattice_rank, rational_inverse, saturation_basis
from .polycone import Cone, dot
from .rational import MotivicRational, Poly, SeriesExpansion, expand
from .strata import Stratum, enumerate_strata
from .toricsg import IdealFamily, SemigroupData, build_semigroup, face_semigroup, phi_sequences

DEFAULT_GUARD = 10
_SCAN_CHUNK = 1 << 20


class CertificationError(RuntimeError):
    """The guard coefficients of a reconstruction did not vanish."""


def L_minus_1() -> Poly:
    return Poly.monomial(1, 0) - Poly.const(1)


def one_over_1_minus_T() -> MotivicRational:
    return MotivicRational.geometric(0, 1)


# Class enumeration


def _scan_bound(F: IdealFamily, st: Stratum, s_max: int) -> tuple[np.ndarray, int]:
    """A functional ``c`` positive on ``theta`` and a bound ``B`` such that every
    class with ``s <= s_max`` has a representative with ``c(nu) <= B``."""
    S = F.S
    cI = [sum(S.gens[i][t] for i in st.I) for t in range(S.d)]
    if all(dot(cI, r) > 0 for r in st.theta.rays):
        return np.array(cI, dtype=np.int64), st.j * s_max
    c = [sum(e[t] for e in S.gens) for t in range(S.d)]
    rows = list(st.theta.eqs) + [tuple(-x for x in u) for u in st.theta.eqs] + list(st.theta.ineqs) + list(S.gens)
    rows = sorted(set(rows))
    M = Fraction(0)
    for sub in combinations(rows, S.d):
        inv = rational_inverse([list(r) for r in sub])
        if inv is None:
            continue
        y = [sum(c[t] * inv[t][k] for t in range(S.d)) for k in range(S.d)]
        M = max(M, sum(abs(v) for v in y))
    free = sum(dot(c, r) for r in st.theta.rays if dot(cI, r) == 0)
    return np.array(c, dtype=np.int64), ceil((s_max + 1) * M) + free


def _box_points(theta: Cone, c: np.ndarray, B: int):
    """Yield chunks of lattice points of ``span(theta)`` in a box around ``{nu in theta : c(nu) <= B}``."""
    basis = [tuple(int(x) for x in r) for r in saturation_basis(theta.rays)]
    k = len(basis)
    verts = [[Fraction(0)] * k]
    for r in theta.rays:
        y = coordinates(basis, r)
        scale = Fraction(B, int(dot(c, r)))
        verts.append([scale * v for v in y])
    lo = [floor(min(v[t] for v in verts)) for t in range(k)]
    hi = [ceil(max(v[t] for v in verts)) for t in range(k)]
    Bm = np.array(basis, dtype=np.int64).reshape(k, theta.d)
    ranges = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    if k == 1:
        yield ranges[0][:, None] @ Bm
        return
    inner = int(np.prod([len(r) for r in ranges[1:]]))
    step = max(1, _SCAN_CHUNK // max(inner, 1))
    for s0 in range(0, len(ranges[0]), step):
        grids = np.meshgrid(ranges[0][s0 : s0 + step], *ranges[1:], indexing="ij")
        Y = np.stack([g.ravel() for g in grids], axis=1)
        yield Y @ Bm


def class_monomials(F: IdealFamily, st: Stratum, s_max: int) -> dict[tuple[int, tuple[int, ...]], int]:
    """Map each class ``(s, values on I)`` of the stratum with ``s <= s_max`` to its ``L``-exponent.

    The exponent is ``l*s - ord_{J_l}(nu)``, which depends only on the class.
    """
    if st.empty or s_max < 1:
        return {}
    S = F.S
    I = list(st.I)
    rest = [i for i in range(S.n) if i not in st.I]
    E = S.gen_matrix
    chosen, w = F.min_independent(st.l, st.nu_w)
    if not set(chosen) <= set(st.I):
        raise AssertionError("minimizing independent set leaves I")
    wpos = [I.index(i) for i in chosen]
    c, B = _scan_bound(F, st, s_max)
    normals = np.array(st.theta.ineqs, dtype=np.int64).reshape(-1, S.d)
    best: dict[tuple[int, ...], list[int]] = {}
    for nu in _box_points(st.theta, c, B):
        keep = (nu @ c) <= B
        if len(normals):
            keep &= np.all(nu @ normals.T > 0, axis=1)
        P = nu[keep] @ E.T
        P = P[np.all(P > 0, axis=1)]
        if not len(P):
            continue
        z = P[:, I]
        lo = z.max(axis=1)
        if rest:
            nxt = P[:, rest].min(axis=1)
            if np.any(nxt <= lo):
                raise AssertionError("small-index set is not constant on the stratum")
            hi = np.minimum(nxt - 1, s_max)
        else:
            hi = np.full(len(P), s_max, dtype=np.int64)
        sel = lo <= s_max
        z, lo, hi = z[sel], lo[sel], hi[sel]
        if not len(z):
            continue
        uz, inv = np.unique(z, axis=0, return_inverse=True)
        inv = inv.ravel()
        hmax = np.full(len(uz), -1, dtype=np.int64)
        np.maximum.at(hmax, inv, hi)
        for row, h in zip(uz, hmax):
            key = tuple(int(x) for x in row)
            cur = best.get(key)
            if cur is None or h > cur[1]:
                best[key] = [int(row.max()), int(h)]
    out = {}
    l = st.l
    for z, (lo, hi) in best.items():
        o = sum(z[p] for p in wpos)
        for s in range(lo, hi + 1):
            out[(s, z)] = l * s - o
    return out


def class_polynomial(classes: dict, s_max: int) -> Poly:
    if not classes:
        return Poly.const(0)
    a = np.array(list(classes.values()), dtype=np.int64)
    s = np.array([k[0] for k in classes], dtype=np.int64)
    if a.min() < 0:
        raise AssertionError("negative L-exponent")
    G = np.zeros((int(a.max()) + 1, s_max + 1), dtype=np.int64)
    np.add.at(G, (a, s), 1)
    return Poly(G.astype(object))


def denominator_poly(poles: Sequence[tuple[int, int]]) -> Poly:
    D = Poly.const(1)
    for a, b in poles:
        D = D.mul_factor(a, b)
    return D


def reconstruct(G: Poly, poles: Sequence[tuple[int, int]], s_max: int, degN: int | None = None) -> Poly:
    """Numerator ``N`` of degree at most ``degN`` with ``G = N / D`` through ``T^s_max``.

    The coefficients of ``G * D`` in degrees ``degN + 1 .. s_max`` form the guard
    region and must vanish. ``degN`` defaults to ``deg_T D``.
    """
    if degN is None:
        degN = sum(b for _, b in poles)
    prod_ = G
    for a, b in poles:
        prod_ = prod_.mul_factor(a, b).truncate_T(s_max)
    if prod_.c.shape[1] > degN + 1 and np.any(prod_.c[:, degN + 1 :] != 0):
        bad = min(((j, i) for i, j, v in prod_.terms() if j > degN))
        raise CertificationError(f"guard coefficients do not vanish: first offending term L^{bad[1]} T^{bad[0]}")
    return prod_.truncate_T(degN)


def guard_width(poles: Sequence[tuple[int, int]], guard: int = DEFAULT_GUARD) -> int:
    return max([guard] + [b for _, b in poles])


def stratum_series(F: IdealFamily, st: Stratum, s_max: int | None = None, guard: int = DEFAULT_GUARD) -> MotivicRational:
    """``(L-1)^l * N / prod (1 - L^a T^b)`` for a stratum; zero for empty strata.

    The numerator degree starts at ``deg_T D`` and grows by ``max b`` until the
    guard window after it vanishes. A fixed ``s_max`` disables the search.
    """
    if st.empty:
        return MotivicRational.zero()
    degD = sum(b for _, b in st.poles)
    if s_max is not None:
        G = class_polynomial(class_monomials(F, st, s_max), s_max)
        N = reconstruct(G, st.poles, s_max, max(degD, s_max - guard_width(st.poles, guard)))
        return MotivicRational(Fraction(1), N * L_minus_1() ** st.l, st.poles)
    width = guard_width(st.poles, guard)
    step = max(b for _, b in st.poles)
    degN = degD
    cap = 4 * degD + 4 * width
    while True:
        top = degN + width
        G = class_polynomial(class_monomials(F, st, top), top)
        try:
            N = reconstruct(G, st.poles, top, degN)
            break
        except CertificationError:
            degN += step
            if degN > cap:
                raise
    return MotivicRational(Fraction(1), N * L_minus_1() ** st.l, st.poles)


# Per-semigroup cache


@dataclass
class SemigroupSeries:
    """Strata and stratum series of one semigroup, computed once."""

    S: SemigroupData
    guard: int = DEFAULT_GUARD
    F: IdealFamily | None = None
    strata: list[Stratum] = field(default_factory=list)
    series: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.S.is_trivial:
            self.F = phi_sequences(self.S)
            self.strata = enumerate_strata(self.F)

    def stratum(self, st: Stratum) -> MotivicRational:
        k = st.key
        if k not in self.series:
            self.series[k] = stratum_series(self.F, st, guard=self.guard)
        return self.series[k]

    def weighted_sum(self, weight, only_d: bool = True) -> MotivicRational:
        total = MotivicRational.zero()
        for st in self.strata:
            if st.empty or (only_d and not st.d_l):
                continue
            w = weight(st)
            if w != 0:
                total = total + self.stratum(st) * w
        return total


@lru_cache(maxsize=256)
def _engine(d: int, gens: tuple, guard: int) -> SemigroupSeries:
    S = build_semigroup(d, gens) if gens else build_semigroup(0, [])
    return SemigroupSeries(S, guard)


def engine(S: SemigroupData, guard: int = DEFAULT_GUARD) -> SemigroupSeries:
    return _engine(S.d, S.gens, guard)


def faces(S: SemigroupData) -> list[Cone]:
    return pc.faces_of(S.sigma) if not S.is_trivial else []


# Assembled series


def par_aux(S: SemigroupData, guard: int = DEFAULT_GUARD, geometric: bool = False) -> MotivicRational:
    """Sum over nonempty strata satisfying the D condition of ``P/q`` (or ``P`` when geometric)."""
    if S.is_trivial:
        return one_over_1_minus_T()
    E = engine(S, guard)
    return E.weighted_sum((lambda st: 1) if geometric else (lambda st: Fraction(1, st.q)))


def face_breakdown(S: SemigroupData, guard: int = DEFAULT_GUARD, geometric: bool = False) -> list[tuple[Cone, SemigroupData, MotivicRational]]:
    if S.is_trivial:
        return []
    return [(eta, T, par_aux(T, guard, geometric)) for eta in faces(S) for T in [face_semigroup(S, eta)]]


def par_local(S: SemigroupData, guard: int = DEFAULT_GUARD) -> MotivicRational:
    """Arithmetic local series: the sum of ``par_aux`` over the face semigroups."""
    if S.is_trivial:
        return one_over_1_minus_T()
    total = MotivicRational.zero()
    for _, _, r in face_breakdown(S, guard):
        total = total + r
    return total


def pgeom_local(S: SemigroupData, guard: int = DEFAULT_GUARD) -> MotivicRational:
    """Geometric local series: every stratum weight is 1."""
    if S.is_trivial:
        return one_over_1_minus_T()
    total = MotivicRational.zero()
    for _, _, r in face_breakdown(S, guard, geometric=True):
        total = total + r
    return total


def series_difference(S: SemigroupData, guard: int = DEFAULT_GUARD) -> MotivicRational:
    """``par_local - pgeom_local``, cross-checked against the stratum-wise sum of ``(1/q - 1) P``."""
    diff = par_local(S, guard) - pgeom_local(S, guard)
    direct = MotivicRational.zero()
    for eta in faces(S):
        T = face_semigroup(S, eta)
        if not T.is_trivial:
            direct = direct + engine(T, guard).weighted_sum(lambda st: Fraction(1, st.q) - 1)
    if diff != direct:
        raise CertificationError("difference of the series disagrees with the stratum-wise sum")
    return direct


def _require_saturated(S: SemigroupData):
    if not S.saturated:
        raise ValueError("the normal-case series needs the semigroup flagged as saturated")


def par_normal(S: SemigroupData, guard: int = DEFAULT_GUARD) -> MotivicRational:
    """Normal-case local series: all nonempty strata with weight ``1/q``, plus the zero-jet term."""
    _require_saturated(S)
    if S.is_trivial:
        return one_over_1_minus_T()
    E = engine(S, guard)
    return one_over_1_minus_T() + E.weighted_sum(lambda st: Fraction(1, st.q), only_d=False)


def hilbert_basis(cone: Cone) -> list[tuple[int, ...]]:
    """Hilbert basis of a strictly convex full-dimensional cone, by bounded search.

    Every Hilbert basis element lies in the zonotope ``sum [0, 1] r`` of the
    primitive rays, so it is enough to scan that zonotope's bounding box.
    """
    d = cone.d
    lo = [sum(min(0, r[t]) for r in cone.rays) for t in range(d)]
    hi = [sum(max(0, r[t]) for r in cone.rays) for t in range(d)]
    cand = [p for p in product(*(range(a, b + 1) for a, b in zip(lo, hi))) if any(p) and cone.contains(p)]
    cset = set(cand)
    out = []
    for x in cand:
        reducible = any(
            h != x and cone.contains(tuple(a - b for a, b in zip(x, h))) and any(a - b for a, b in zip(x, h))
            for h in cset
        )
        if not reducible:
            out.append(x)
    return sorted(out)


def saturation_defect(S: SemigroupData) -> list[tuple[int, ...]]:
    """Hilbert basis elements of ``sigma_dual`` missing from the generators; empty iff saturated."""
    if S.is_trivial:
        return []
    gens = set(S.gens)
    return [h for h in hilbert_basis(S.sigma_dual) if h not in gens]


def orbit_semigroup(S: SemigroupData, theta: Cone) -> SemigroupData:
    """``(theta^vee ∩ M_theta) x Z_{>=0}^{codim theta}`` for a face ``theta`` of ``sigma``."""
    codim = S.d - theta.dim
    k = theta.dim
    if k == S.d:
        return S
    gens = []
    if k:
        basis = [tuple(int(x) for x in r) for r in saturation_basis(theta.rays)]
        rays_k = [tuple(int(x) for x in coordinates(basis, r)) for r in theta.rays]
        for h in hilbert_basis(Cone.from_rays(rays_k).dual()):
            gens.append(tuple(h) + (0,) * codim)
    for t in range(codim):
        gens.append((0,) * k + tuple(int(t == u) for u in range(codim)))
    return build_semigroup(S.d, gens, saturated=True)


def par_global_normal(S: SemigroupData, guard: int = DEFAULT_GUARD) -> MotivicRational:
    """Global series of a normal toric variety from the local series at each orbit."""
    _require_saturated(S)
    total = MotivicRational.zero()
    for theta in faces(S):
        T = orbit_semigroup(S, theta)
        total = total + par_local(T, guard) * (L_minus_1() ** (S.d - theta.dim))
    return total


@dataclass(frozen=True)
class NicaiseVerdict:
    holds: bool
    certificate: tuple[tuple[int, tuple[int, ...], tuple[int, ...] | None], ...]

    @property
    def failing(self):
        return [c for c in self.certificate if c[2] is None]


def check_nicaise(S: SemigroupData) -> NicaiseVerdict:
    """Whether every vertex of every ``N(J_l)`` is a sum of ``l`` generators forming part of a basis."""
    if S.is_trivial:
        return NicaiseVerdict(True, ())
    F = phi_sequences(S)
    cert = []
    for l in range(1, S.d + 1):
        for v in F.J[l - 1].vertices:
            found = None
            for sub in combinations(range(S.n), l):
                rows = [S.gens[i] for i in sub]
                if tuple(map(sum, zip(*rows))) == v and lattice_rank(rows) == l and lattice_index(rows) == 1:
                    found = sub
                    break
            cert.append((l, v, found))
    return NicaiseVerdict(all(c[2] is not None for c in cert), tuple(cert))


def curve_closed_form(gens: Sequence[int]) -> MotivicRational:
    """Closed form of the local arithmetic series of a monomial curve ``<e_1 < ... < e_n>``."""
    e = [int(x[0]) if isinstance(x, (tuple, list)) else int(x) for x in gens]
    if not e or any(x <= 0 for x in e) or e != sorted(set(e)):
        raise ValueError("generators must be increasing positive integers")
    g = 0
    for x in e:
        g = gcd(g, x)
    if g != 1:
        raise ValueError("generators must have gcd 1")
    q = []
    g = 0
    for x in e:
        g = gcd(g, x)
        q.append(g)
    T = lambda b: Poly.monomial(0, b)
    inner = MotivicRational(Fraction(1, q[0]), T(e[0]), ((0, e[0]),))
    for i in range(1, len(e)):
        w = Fraction(q[i - 1] - q[i], q[i - 1] * q[i])
        if w:
            a = e[i] - e[0]
            inner = inner + MotivicRational(w, Poly.monomial(a, e[i]), ((a, e[i]),))
    return one_over_1_minus_T() + inner * MotivicRational(Fraction(1), L_minus_1(), ((1, 1),))


def q_values(S: SemigroupData, guard: int = DEFAULT_GUARD) -> tuple[int, int]:
    """``q(Lambda)`` (lcm over D-strata) and ``q_Lambda`` (lcm over faces)."""

    def lcm_q(T):
        if T.is_trivial:
            return 1
        out = 1
        for st in engine(T, guard).strata:
            if not st.empty and st.d_l:
                out = out * st.q // gcd(out, st.q)
        return out

    qL = lcm_q(S)
    total = 1
    for eta in faces(S):
        v = lcm_q(face_semigroup(S, eta))
        total = total * v // gcd(total, v)
    return qL, total


def pole_sets(S: SemigroupData, guard: int = DEFAULT_GUARD) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """``B_ar(Lambda)`` and ``B_{ar,Lambda}`` (the union over faces)."""

    def b(T):
        if T.is_trivial:
            return {(0, 1)}
        return {p for st in engine(T, guard).strata if not st.empty and st.d_l for p in st.poles}

    local = b(S)
    allb = set()
    for eta in faces(S):
        allb |= b(face_semigroup(S, eta))
    return sorted(local), sorted(allb)


def divides_product(r: MotivicRational, pairs) -> bool:
    """Whether the denominator of ``r`` divides ``prod (1 - L^a T^b)`` over ``pairs``."""
    P = denominator_poly(pairs)
    for p in r.den:
        P = P.divide_factor(*p)
        if P is None:
            return False
    return True
