"""Report documents: assembly from the library, JSON serialization and hashing."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from .motser import (
    DEFAULT_GUARD,
    check_nicaise,
    engine,
    face_breakdown,
    par_global_normal,
    par_local,
    par_normal,
    pgeom_local,
    pole_sets,
    q_values,
    series_difference,
)
from .oracle import oracle_series
from .polycone import Cone
from .rational import MotivicRational, Poly, SeriesExpansion, expand, render_monomial, render_poly
from .strata import Stratum
from .toricsg import SemigroupData

SERIES_CHOICES = ("arithmetic", "geometric", "both", "difference")
MODE_CHOICES = ("local", "global")


@dataclass(frozen=True)
class InputSpec:
    lattice_rank: int
    generators: tuple[tuple[int, ...], ...]
    normal: bool = False
    mode: str = "local"
    series: str = "arithmetic"
    expand: int | None = None
    smax_guard: int = DEFAULT_GUARD

    def to_json(self) -> dict:
        return {
            "lattice_rank": self.lattice_rank,
            "generators": [list(g) for g in self.generators],
            "normal": self.normal,
            "mode": self.mode,
            "series": self.series,
            "expand": self.expand,
            "smax_guard": self.smax_guard,
        }


def frac_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_to_json(r: MotivicRational) -> dict:
    return {
        "scalar": frac_str(r.scalar),
        "numerator": [[i, j, int(v)] for i, j, v in sorted(r.num.terms(), key=lambda t: (t[1], t[0]))],
        "denominator": [[a, b] for a, b in r.den],
        "text": render_rational(r),
    }


def rational_from_json(doc: dict) -> MotivicRational:
    num = Poly.from_terms([(i, j, v) for i, j, v in doc["numerator"]])
    return MotivicRational(Fraction(doc["scalar"]), num, tuple(tuple(p) for p in doc["denominator"]))


def render_rational(r: MotivicRational) -> str:
    if r.is_zero():
        return "0"
    den = " * ".join(f"(1 - {render_monomial(a, b)})" for a, b in r.den)
    head = "" if r.scalar == 1 else f"{frac_str(r.scalar)} * "
    body = f"({render_poly(r.num)})"
    return head + body + (f" / ({den})" if den else "")


def expansion_to_json(e: SeriesExpansion) -> list[list[str]]:
    return [[frac_str(c) for c in col] for col in e.coeffs]


def expansion_from_json(rows: list[list[str]]) -> SeriesExpansion:
    return SeriesExpansion(len(rows) - 1, tuple(tuple(Fraction(c) for c in col) for col in rows))


def cone_to_json(c: Cone) -> list[list[int]]:
    return [list(r) for r in c.rays]


def stratum_to_json(st: Stratum) -> dict:
    doc: dict[str, Any] = {"j": st.j, "theta": cone_to_json(st.theta), "dim": st.theta.dim, "empty": st.empty}
    if not st.empty:
        doc.update(
            {
                "witness": {"nu": list(st.nu_w), "s": st.s_w},
                "I": [i + 1 for i in st.I],
                "l": st.l,
                "q": st.q,
                "tau": cone_to_json(st.tau),
                "d_l": st.d_l,
                "poles": [list(p) for p in st.poles],
            }
        )
    return doc


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def content_hash(doc: dict) -> str:
    body = {k: v for k, v in doc.items() if k != "content_hash"}
    return hashlib.sha256(canonical_json(body).encode()).hexdigest()


@dataclass
class ReportDoc:
    """A JSON-serializable report; ``body`` holds every field except the hash."""

    command: str
    body: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        doc = {"command": self.command, "tool": {"name": "toricmot", "version": __version__}, **self.body}
        doc["content_hash"] = content_hash(doc)
        return doc

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ReportDoc":
        doc = json.loads(text)
        if doc.get("content_hash") != content_hash(doc):
            raise ValueError("content hash mismatch")
        body = {k: v for k, v in doc.items() if k not in ("command", "tool", "content_hash")}
        return cls(doc["command"], body)

    def __eq__(self, other) -> bool:
        return isinstance(other, ReportDoc) and self.to_json() == other.to_json()


def strata_section(S: SemigroupData, guard: int) -> list[dict]:
    if S.is_trivial:
        return []
    return [stratum_to_json(st) for st in engine(S, guard).strata]


def _series_entry(r: MotivicRational) -> dict:
    return {"raw": rational_to_json(r), "irredundant": rational_to_json(r.reduced())}


def build_compute(S: SemigroupData, spec: InputSpec) -> ReportDoc:
    g = spec.smax_guard
    body: dict[str, Any] = {"input": spec.to_json(), "strata": strata_section(S, g)}
    qL, qface = q_values(S, g)
    B_local, B_all = pole_sets(S, g)
    body["q"] = {"q_Lambda_local": qL, "q_Lambda": qface}
    body["poles"] = {"B_ar": [list(p) for p in B_local], "B_ar_faces": [list(p) for p in B_all]}
    series: dict[str, Any] = {}
    want_ar = spec.series in ("arithmetic", "both")
    want_geo = spec.series in ("geometric", "both")
    if spec.mode == "global":
        series["global"] = _series_entry(par_global_normal(S, g))
    else:
        if want_ar:
            series["arithmetic"] = _series_entry(par_local(S, g))
        if want_geo:
            series["geometric"] = _series_entry(pgeom_local(S, g))
        if spec.series == "difference":
            series["difference"] = _series_entry(series_difference(S, g))
        if spec.normal:
            series["normal"] = _series_entry(par_normal(S, g))
    body["series"] = series
    body["faces"] = [
        {
            "eta": cone_to_json(eta),
            "generators": [list(e) for e in T.gens],
            "basis": [list(b) for b in T.basis],
            "arithmetic": rational_to_json(r),
        }
        for eta, T, r in face_breakdown(S, g)
    ]
    if spec.expand is not None:
        body["expansion"] = {
            "s_max": spec.expand,
            **{k: expansion_to_json(expand(rational_from_json(v["raw"]), spec.expand)) for k, v in series.items()},
        }
    body["nicaise"] = nicaise_section(S)
    return ReportDoc("compute", body)


def nicaise_section(S: SemigroupData) -> dict:
    v = check_nicaise(S)
    return {
        "holds": v.holds,
        "certificate": [
            {"l": l, "vertex": list(vert), "subset": None if sub is None else [i + 1 for i in sub]}
            for l, vert, sub in v.certificate
        ],
    }


def build_strata(S: SemigroupData, spec: InputSpec) -> ReportDoc:
    return ReportDoc("strata", {"input": spec.to_json(), "strata": strata_section(S, spec.smax_guard)})


def build_oracle(S: SemigroupData, spec: InputSpec) -> ReportDoc:
    out = {}
    if spec.series in ("arithmetic", "both", "difference"):
        out["arithmetic"] = oracle_series(S, spec.expand)
    if spec.series in ("geometric", "both", "difference"):
        out["geometric"] = oracle_series(S, spec.expand, geometric=True)
    if spec.series == "difference":
        out["difference"] = out["arithmetic"] + _negate(out["geometric"])
        if spec.series == "difference":
            out = {"difference": out["difference"]}
    body = {"input": spec.to_json(), "expansion": {"s_max": spec.expand, **{k: expansion_to_json(v) for k, v in out.items()}}}
    return ReportDoc("oracle", body)


def _negate(e: SeriesExpansion) -> SeriesExpansion:
    return SeriesExpansion(e.s_max, tuple(tuple(-c for c in col) for col in e.coeffs))


def build_nicaise(S: SemigroupData, spec: InputSpec) -> ReportDoc:
    return ReportDoc("check-nicaise", {"input": spec.to_json(), "nicaise": nicaise_section(S)})


def render_text(doc: dict) -> str:
    """Human-readable rendering of a report."""
    lines = [f"toricmot {doc['tool']['version']}  {doc['command']}"]
    inp = doc["input"]
    lines.append(f"d = {inp['lattice_rank']}, generators = {inp['generators']}")
    if "strata" in doc:
        lines.append("")
        lines.append(render_strata_table(doc["strata"]))
    if "q" in doc:
        lines.append("")
        lines.append(f"q(Lambda) = {doc['q']['q_Lambda_local']}, q_Lambda = {doc['q']['q_Lambda']}")
        lines.append(f"B_ar = {doc['poles']['B_ar']}")
        lines.append(f"B_ar over faces = {doc['poles']['B_ar_faces']}")
    for name, entry in doc.get("series", {}).items():
        lines.append("")
        lines.append(f"{name} series:")
        lines.append(f"  raw:         {entry['raw']['text']}")
        lines.append(f"  irredundant: {entry['irredundant']['text']}")
    if "expansion" in doc:
        ex = doc["expansion"]
        for name, rows in ex.items():
            if name == "s_max":
                continue
            lines.append("")
            lines.append(f"{name} expansion through T^{ex['s_max']} (coefficients of L^0, L^1, ...):")
            for s, col in enumerate(rows):
                lines.append(f"  T^{s}: [{', '.join(col)}]")
    if "nicaise" in doc:
        n = doc["nicaise"]
        lines.append("")
        lines.append(f"Nicaise criterion: {'holds' if n['holds'] else 'fails'}")
        for c in n["certificate"]:
            lines.append(f"  l={c['l']} vertex {c['vertex']}: {c['subset'] if c['subset'] else 'no unimodular decomposition'}")
    return "\n".join(lines) + "\n"


def render_strata_table(strata: list[dict]) -> str:
    header = ("j", "theta", "I", "l", "q", "D_l", "poles")
    rows = []
    for st in strata:
        theta = " ".join(f"({','.join(map(str, r))})" for r in st["theta"])
        if st["empty"]:
            rows.append((str(st["j"]), theta, "-", "-", "-", "-", "empty"))
        else:
            rows.append(
                (
                    str(st["j"]), theta, ",".join(map(str, st["I"])), str(st["l"]), str(st["q"]),
                    "yes" if st["d_l"] else "no", " ".join(f"({a},{b})" for a, b in st["poles"]),
                )
            )
    widths = [max(len(r[k]) for r in rows + [header]) for k in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    return "\n".join(fmt.format(*r).rstrip() for r in [header] + rows)
