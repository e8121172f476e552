"""Candidate poles of the complex local zeta function of a non-degenerate f.

For a primitive u >= 0 with nu_u(f) > 0 the progression P(u) is
{-(|u| + k) / (2 nu_u) : k = 0, 1, ...}.  The candidate set is the union of
P(u) over the rays u of a simplicial fan subordinated to f (whose rays are
exactly the facet normals of NP(f)) together with -(1 + N)/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import fan as fanmod
from .errors import HypothesisError, UnsupportedError
from .newton import NewtonPolyhedron, RemotenessReport
from .nondeg import DEGENERATE, INCONCLUSIVE, NondegConfig, NondegReport, check_all
from .polycore import LaurentPolynomial

HALF_INTEGER = "half-integer"
DEFAULT_K = 20

CAVEAT = (
    "candidates hold for test functions supported in a sufficiently small "
    "neighbourhood of the origin; that neighbourhood is not computed"
)
ORDER_NOTE = (
    "order bounds read the face condition as: s0 lies in P(u) for every facet "
    "F_u containing F"
)


def _norm1(u: Sequence[int]) -> int:
    return sum(u)


def in_progression(s0: Fraction, u: Sequence[int], nu: int) -> bool:
    """Whether s0 = -(|u| + k) / (2 nu) for some integer k >= 0."""
    if nu <= 0:
        return False
    k = -2 * nu * Fraction(s0) - _norm1(u)
    return k.denominator == 1 and k >= 0


def is_half_integer_candidate(s0: Fraction) -> bool:
    k = -2 * Fraction(s0) - 1
    return k.denominator == 1 and k >= 0


@dataclass(frozen=True)
class PoleProgression:
    u: tuple[int, ...]
    nu_u: int
    values: tuple[Fraction, ...]


def progression(f: LaurentPolynomial, u: Sequence[int], K: int = DEFAULT_K) -> PoleProgression:
    u = tuple(int(x) for x in u)
    if any(x < 0 for x in u) or not any(u):
        raise UnsupportedError("u must be a nonzero nonnegative integer vector")
    nu = NewtonPolyhedron(f).omega_order(u) if not f.is_zero() else None
    return _progression(u, nu, K)


def _progression(u: tuple[int, ...], nu, K: int) -> PoleProgression:
    if nu is None or nu == 0:
        raise UnsupportedError(f"nu_u(f) = 0 for u = {u}; the progression is undefined")
    nu = int(nu)
    vals = tuple(Fraction(-(_norm1(u) + k), 2 * nu) for k in range(K + 1))
    return PoleProgression(u, nu, vals)


@dataclass(frozen=True)
class CandidateEntry:
    value: Fraction
    sources: tuple
    order_bound: int

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "sources": [s if isinstance(s, str) else list(s) for s in self.sources],
            "order_bound": self.order_bound,
        }


@dataclass(frozen=True)
class CandidatePoleSet:
    kind: str
    n: int
    K: int
    entries: tuple[CandidateEntry, ...]
    progressions: tuple[PoleProgression, ...]
    holomorphy_bound: Fraction
    remoteness: RemotenessReport
    hypothesis: str = "verified"
    warnings: tuple[str, ...] = field(default=())

    @property
    def values(self) -> list[Fraction]:
        return [e.value for e in self.entries]

    def entry(self, value) -> CandidateEntry:
        value = Fraction(value)
        for e in self.entries:
            if e.value == value:
                return e
        raise KeyError(value)

    def __contains__(self, value) -> bool:
        return Fraction(value) in set(self.values)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": self.kind,
            "K": self.K,
            "holomorphy_bound": str(self.holomorphy_bound),
            "remoteness": self.remoteness.to_json(),
            "hypothesis": self.hypothesis,
            "caveat": CAVEAT,
            "order_bound_reading": ORDER_NOTE,
            "warnings": list(self.warnings),
            "candidates": [e.to_json() for e in self.entries],
        }


def order_bound(s0: Fraction, np: NewtonPolyhedron) -> int:
    """Largest pole order the face lattice allows at s0, capped to [1, n]."""
    s0 = Fraction(s0)
    best = 0
    for F in np.faces:
        facets = np.facets_containing(F)
        if all(in_progression(s0, G.normal, G.nu) for G in facets):
            best = max(best, F.codim)
    if is_half_integer_candidate(s0):
        return max(1, min(np.n, best + 1))
    return max(1, min(np.n, best))


def order_bounds(cands: CandidatePoleSet, np: NewtonPolyhedron) -> CandidatePoleSet:
    entries = tuple(
        CandidateEntry(e.value, e.sources, order_bound(e.value, np)) for e in cands.entries
    )
    return CandidatePoleSet(
        cands.kind, cands.n, cands.K, entries, cands.progressions, cands.holomorphy_bound,
        cands.remoteness, cands.hypothesis, cands.warnings,
    )


def holomorphy_bound(f: LaurentPolynomial | NewtonPolyhedron) -> Fraction:
    np = f if isinstance(f, NewtonPolyhedron) else NewtonPolyhedron(f)
    return max(-np.remoteness().nu0, Fraction(-1, 2))


def _assemble(
    kind: str, np: NewtonPolyhedron, rays: Iterable[Sequence[int]], K: int,
    hypothesis: str, warnings: tuple[str, ...],
) -> CandidatePoleSet:
    if K < 0:
        raise ValueError("K must be nonnegative")
    progs = []
    for u in sorted(set(tuple(r) for r in rays)):
        nu = np.omega_order(u)
        if nu > 0:
            progs.append(_progression(u, nu, K))
    if not progs:
        raise UnsupportedError("no ray with nu_u > 0; is f(0) = 0?")
    floor = min(p.values[-1] for p in progs)
    sources: dict[Fraction, list] = {}
    for p in progs:
        for v in p.values:
            sources.setdefault(v, []).append(p.u)
    k = 0
    while Fraction(-(1 + k), 2) >= floor:
        sources.setdefault(Fraction(-(1 + k), 2), []).append(HALF_INTEGER)
        k += 1
    entries = tuple(
        CandidateEntry(
            v,
            tuple(sorted((s for s in srcs if s != HALF_INTEGER))) + tuple(s for s in srcs if s == HALF_INTEGER),
            order_bound(v, np),
        )
        for v, srcs in sorted(sources.items(), key=lambda t: -t[0])
    )
    return CandidatePoleSet(
        kind, np.n, K, entries, tuple(progs), holomorphy_bound(np), np.remoteness(),
        hypothesis, warnings,
    )


def _hypotheses(
    f: LaurentPolynomial, np: NewtonPolyhedron, compact_only: bool, cfg: NondegConfig,
    force: bool, report: NondegReport | None,
) -> tuple[str, tuple[str, ...]]:
    if f.constant_term():
        raise HypothesisError("f(0) != 0: the origin is not on the zero set of f")
    report = report or check_all(f, compact_only, cfg, np)
    if report.overall == DEGENERATE:
        bad = report.degenerate_faces()[0]
        if not force:
            face = np.faces[bad.face_id]
            raise HypothesisError(
                f"f is degenerate on face {bad.face_id} (vertices {list(face.vertices)})",
                face=face,
            )
        return "hypothesis-unverified", (f"degenerate on face {bad.face_id}; output forced",)
    if report.overall == INCONCLUSIVE:
        unknown = [v.face_id for v in report.verdicts if v.status != "NonDegenerate"]
        return "hypothesis-unverified", (
            f"non-degeneracy not established on faces {unknown}",
        )
    return "verified", ()


def candidate_poles(
    f: LaurentPolynomial,
    K: int = DEFAULT_K,
    compact_only_nondeg: bool = True,
    cfg: NondegConfig = NondegConfig(),
    force: bool = False,
    np: NewtonPolyhedron | None = None,
    report: NondegReport | None = None,
) -> CandidatePoleSet:
    """Refined candidate list: progressions of the facet normals plus -(1+N)/2."""
    np = np or NewtonPolyhedron(f)
    hyp, warns = _hypotheses(f, np, compact_only_nondeg, cfg, force, report)
    return _assemble("refined", np, [F.normal for F in np.facets], K, hyp, warns)


def naive_candidates(
    f: LaurentPolynomial,
    K: int = DEFAULT_K,
    compact_only_nondeg: bool = True,
    cfg: NondegConfig = NondegConfig(),
    force: bool = False,
    np: NewtonPolyhedron | None = None,
    report: NondegReport | None = None,
) -> CandidatePoleSet:
    """Same union over the rays of a regular refinement of the dual fan."""
    np = np or NewtonPolyhedron(f)
    hyp, warns = _hypotheses(f, np, compact_only_nondeg, cfg, force, report)
    reg = fanmod.regularize(fanmod.simplicialize(fanmod.dual_fan(np)))
    return _assemble("naive", np, reg.rays, K, hyp, warns)
