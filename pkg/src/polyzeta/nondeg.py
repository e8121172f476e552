"""Arnol'd non-degeneracy of a polynomial with respect to faces of NP(f).

Vertices and edges are decided exactly: a monomial never vanishes on the
torus, and an edge function is x^mu0 * p(x^d) for a univariate p, which is
degenerate exactly when p has a repeated nonzero root.  The same reduction
applies to any face whose face function has collinear support.  Other faces
get a randomized Levenberg-Marquardt search for a torus point with
f_F = grad f_F = 0; failure to find one is reported as Unknown, never as
non-degenerate.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import hull, linalg
from .errors import UnsupportedError
from .newton import Face, NewtonPolyhedron
from .polycore import GaussianRational, LaurentPolynomial

log = logging.getLogger(__name__)

NONDEGENERATE = "NonDegenerate"
DEGENERATE = "Degenerate"
UNKNOWN = "Unknown"
INCONCLUSIVE = "Inconclusive"

# Exact-refinement acceptance threshold for witnesses.
REFINED_RESIDUAL = 1e-6


@dataclass(frozen=True)
class NondegConfig:
    seed: int = 0
    attempts: int = 24
    tol: float = 1e-9
    max_iter: int = 200


@dataclass(frozen=True)
class Verdict:
    status: str
    face_id: int
    dim: int
    method: str
    witness: tuple[complex, ...] | None = None
    residual: float | None = None
    attempts: int | None = None
    tol: float | None = None

    @property
    def exact(self) -> bool:
        return self.method in ("monomial", "edge-univariate")

    def to_json(self) -> dict:
        out = {"face": self.face_id, "dim": self.dim, "status": self.status, "method": self.method}
        if self.witness is not None:
            out["witness"] = [[z.real, z.imag] for z in self.witness]
            out["residual"] = self.residual
        if self.status == UNKNOWN:
            out["attempts"] = self.attempts
            out["tol"] = self.tol
        return out


@dataclass(frozen=True)
class NondegReport:
    verdicts: tuple[Verdict, ...]
    compact_only: bool

    @property
    def overall(self) -> str:
        if any(v.status == DEGENERATE for v in self.verdicts):
            return DEGENERATE
        if all(v.status == NONDEGENERATE and v.exact for v in self.verdicts):
            return NONDEGENERATE
        return INCONCLUSIVE

    def degenerate_faces(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.status == DEGENERATE]

    def to_json(self) -> dict:
        return {
            "overall": self.overall,
            "compact_only": self.compact_only,
            "faces": [v.to_json() for v in self.verdicts],
        }


# -- univariate polynomials over Q(i), coefficient lists low -> high ---------------

UPoly = list[GaussianRational]


def _trim(p: UPoly) -> UPoly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _deriv(p: UPoly) -> UPoly:
    return _trim([c * k for k, c in enumerate(p)][1:])


def _divmod(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [GaussianRational(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / lead
        q[k] = c
        for i, bc in enumerate(b):
            a[i + k] = a[i + k] - c * bc
        a = _trim(a)
    return q, a


def poly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd."""
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def strip_origin(p: UPoly) -> UPoly:
    p = _trim(p)
    k = 0
    while k < len(p) and not p[k]:
        k += 1
    return p[k:]


@dataclass(frozen=True)
class EdgeReduction:
    """f_F = x^mu0 * p(x^d) for the edge F."""

    mu0: tuple[int, ...]
    direction: tuple[int, ...]
    coefficients: tuple[GaussianRational, ...]

    @property
    def repeated_part(self) -> UPoly:
        """gcd(p, p') with the factors of t removed."""
        p = list(self.coefficients)
        return strip_origin(poly_gcd(p, _deriv(p)))

    @property
    def degenerate(self) -> bool:
        return len(self.repeated_part) > 1


def univariate_reduction(g: LaurentPolynomial) -> EdgeReduction:
    """Write g = x^mu0 * p(x^d) when the support of g is collinear."""
    pts = sorted(g.support())
    if len(pts) < 2:
        raise UnsupportedError("a univariate reduction needs at least two terms")
    if hull.affine_dimension(pts) != 1:
        raise UnsupportedError("support is not collinear")
    mu0 = pts[0]
    d = linalg.primitive([y - x for x, y in zip(mu0, pts[-1])])
    k = next(j for j, x in enumerate(d) if x != 0)
    coefs: dict[int, GaussianRational] = {}
    for mu in pts:
        diff = [x - y for x, y in zip(mu, mu0)]
        step = Fraction(diff[k], d[k])
        assert step.denominator == 1 and step >= 0
        assert all(x == step * y for x, y in zip(diff, d))
        coefs[int(step)] = g.coefficient(mu)
    p = tuple(coefs.get(j, GaussianRational(0)) for j in range(max(coefs) + 1))
    return EdgeReduction(tuple(mu0), tuple(d), p)


def edge_univariate(f: LaurentPolynomial, F: Face, np_: NewtonPolyhedron | None = None) -> EdgeReduction:
    """Univariate form of the face function on an edge.

    f is non-degenerate on F exactly when the returned ``p`` has no repeated
    root in C minus the origin.
    """
    np_ = np_ or NewtonPolyhedron(f)
    F = np_.check_face(F)
    if F.dim != 1:
        raise UnsupportedError(f"edge_univariate needs a 1-dimensional face, got dimension {F.dim}")
    return univariate_reduction(np_.face_function(F))


# -- numerics ------------------------------------------------------------------


class _System:
    """The torus system in log coordinates z = exp(w).

    On the torus, g = grad g = 0 is equivalent to g = x_k dg/dx_k = 0 for all
    k, and these are exponential sums in w.  Residuals are divided by the
    Euclidean size of the terms, so sliding towards a coordinate hyperplane,
    where every term shrinks, does not pass for a solution.
    """

    def __init__(self, g: LaurentPolynomial):
        self.n = g.n
        exps, self.coefs = g.to_arrays()
        self.exps = exps.astype(float)
        self.weights = np.hstack([np.ones((len(self.coefs), 1)), self.exps])

    def terms(self, w: np.ndarray) -> np.ndarray:
        """Terms of g at exp(w), up to a common positive factor."""
        e = self.exps @ w
        return self.coefs * np.exp(e - np.max(e.real))

    def residual_vector(self, w: np.ndarray) -> np.ndarray:
        """Scaled residuals (g, x_1 g_1, ..., x_n g_n) at exp(w)."""
        t = self.terms(w)
        return (t @ self.weights) / np.linalg.norm(t)

    def real_system(self, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Stacked real residual and its Jacobian in (Re w, Im w)."""
        t = self.terms(w)
        sigma = np.linalg.norm(t)
        E = t @ self.weights
        JE = (self.weights * t[:, None]).T @ self.exps
        dsigma = (np.abs(t) ** 2 @ self.exps) / sigma
        Ja = JE / sigma - np.outer(E, dsigma) / sigma**2
        Jb = 1j * JE / sigma
        F = E / sigma
        J = np.hstack([Ja, Jb])
        return np.concatenate([F.real, F.imag]), np.vstack([J.real, J.imag])


def _levenberg_marquardt(sys: _System, w: np.ndarray, max_iter: int, tol: float) -> np.ndarray:
    n = sys.n
    x = np.concatenate([w.real, w.imag])

    def unpack(v):
        return v[:n] + 1j * v[n:]

    lam = 1e-3
    R, J = sys.real_system(unpack(x))
    cost = float(np.linalg.norm(R))
    for _ in range(max_iter):
        if cost < tol * 1e-3:
            break
        A = J.T @ J
        rhs = -J.T @ R
        improved = False
        for _ in range(12):
            try:
                step = np.linalg.solve(A + lam * np.eye(2 * n), rhs)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            cand = x + step
            Rc, Jc = sys.real_system(unpack(cand))
            cc = float(np.linalg.norm(Rc))
            if np.all(np.isfinite(Rc)) and cc < cost:
                x, R, J, cost = cand, Rc, Jc, cc
                lam = max(lam / 3, 1e-15)
                improved = True
                break
            lam *= 10
        if not improved:
            break
    return unpack(x)


def _max_residual(sys: _System, w: np.ndarray) -> float:
    return float(np.max(np.abs(sys.residual_vector(w))))


def _usable(w: np.ndarray, tol: float) -> bool:
    """Finite, and exp(w) safely inside the torus and away from overflow."""
    return bool(np.all(np.isfinite(w)) and np.all(np.abs(w.real) < min(40.0, -math.log(tol))))


def witness_search(
    g: LaurentPolynomial, cfg: NondegConfig = NondegConfig(), rng: np.random.Generator | None = None
) -> tuple[tuple[complex, ...], float] | None:
    """Look for a torus point where g and all its partials vanish.

    Returns ``(point, residual)`` or None after ``cfg.attempts`` starts.  The
    residual is measured relative to the size of the terms of g.
    """
    if g.is_zero():
        raise ValueError("zero polynomial")
    if g.is_monomial():
        return None
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    sys = _System(g)
    for _ in range(cfg.attempts):
        w0 = rng.normal(0.0, 0.5, g.n) + 1j * rng.uniform(0.0, 2 * np.pi, g.n)
        with np.errstate(all="ignore"):
            w = _levenberg_marquardt(sys, w0, cfg.max_iter, cfg.tol)
            if not _usable(w, cfg.tol):
                continue
            res = _max_residual(sys, w)
        if res < cfg.tol:
            return tuple(complex(x) for x in np.exp(w)), res
    return None


def _round(z: complex, den: int = 2**40) -> GaussianRational:
    return GaussianRational(
        Fraction(z.real).limit_denominator(den), Fraction(z.imag).limit_denominator(den)
    )


def _gauss_solve(A: list[list[GaussianRational]], b: list[GaussianRational]) -> list[GaussianRational]:
    n = len(A)
    m = [row[:] + [bi] for row, bi in zip(A, b)]
    for c in range(n):
        p = next(i for i in range(c, n) if m[i][c])
        m[c], m[p] = m[p], m[c]
        inv = GaussianRational(1) / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n] for row in m]


def exact_refine(g: LaurentPolynomial, witness: Sequence[complex]) -> tuple[tuple[GaussianRational, ...], float]:
    """Round to Gaussian rationals, take one exact damped Gauss-Newton step,
    and return the new point with its exactly evaluated residual."""
    z = [_round(complex(x)) for x in witness]
    eqs = [g] + g.gradient()
    F = [e.evaluate(z) for e in eqs]
    J = [[e.partial(j).evaluate(z) for j in range(g.n)] for e in eqs]
    JH = [[J[i][j].conjugate() for i in range(len(eqs))] for j in range(g.n)]
    damping = GaussianRational(Fraction(1, 10**12))
    A = [
        [sum((JH[r][i] * J[i][c] for i in range(len(eqs))), GaussianRational(0)) + (damping if r == c else 0)
         for c in range(g.n)]
        for r in range(g.n)
    ]
    rhs = [-sum((JH[r][i] * F[i] for i in range(len(eqs))), GaussianRational(0)) for r in range(g.n)]
    step = _gauss_solve(A, rhs)
    # Re-round so the exact evaluation stays small.
    z1 = tuple(_round(complex(a + s)) for a, s in zip(z, step))
    res = max(math.sqrt(float(e.evaluate(z1).norm())) for e in eqs)
    return z1, res


# -- verdicts ---------------------------------------------------------------------


def _edge_witness(red: EdgeReduction) -> np.ndarray | None:
    rep = red.repeated_part
    coeffs = [complex(c) for c in reversed(rep)]
    roots = np.roots(coeffs)
    roots = [r for r in roots if abs(r) > 1e-12]
    if not roots:
        return None
    t0 = roots[0]
    d = np.array(red.direction, dtype=float)
    a = d * cmath.log(t0) / float(d @ d)
    return np.exp(a)


def _confirm(g: LaurentPolynomial, z: np.ndarray | tuple, cfg: NondegConfig):
    """Polish a candidate witness and confirm it by exact refinement."""
    sys = _System(g)
    with np.errstate(all="ignore"):
        w = _levenberg_marquardt(sys, np.log(np.asarray(z, dtype=complex)), cfg.max_iter, cfg.tol)
        if not _usable(w, cfg.tol) or _max_residual(sys, w) >= cfg.tol:
            return None
    zq, res = exact_refine(g, np.exp(w))
    if res >= REFINED_RESIDUAL:
        return None
    return tuple(complex(x) for x in zq), res


def check_face(
    f: LaurentPolynomial,
    F: Face,
    cfg: NondegConfig = NondegConfig(),
    np_: NewtonPolyhedron | None = None,
) -> Verdict:
    np_ = np_ or NewtonPolyhedron(f)
    F = np_.check_face(F)
    g = np_.face_function(F)
    if g.is_monomial():
        return Verdict(NONDEGENERATE, F.id, F.dim, "monomial")
    rng = np.random.default_rng([cfg.seed, F.id])
    # A collinear support reduces to one variable whatever the face dimension.
    if hull.affine_dimension(sorted(g.support())) == 1:
        red = univariate_reduction(g)
        if not red.degenerate:
            return Verdict(NONDEGENERATE, F.id, F.dim, "edge-univariate")
        z0 = _edge_witness(red)
        confirmed = _confirm(g, z0, cfg) if z0 is not None else None
        if confirmed is None:
            log.warning("face %d is degenerate but no witness could be confirmed", F.id)
            return Verdict(DEGENERATE, F.id, F.dim, "edge-univariate")
        w, res = confirmed
        return Verdict(DEGENERATE, F.id, F.dim, "edge-univariate", w, res)
    found = witness_search(g, cfg, rng)
    if found is not None:
        confirmed = _confirm(g, found[0], cfg)
        if confirmed is not None:
            w, res = confirmed
            return Verdict(DEGENERATE, F.id, F.dim, "numeric-search", w, res)
    return Verdict(UNKNOWN, F.id, F.dim, "numeric-search", attempts=cfg.attempts, tol=cfg.tol)


def check_all(
    f: LaurentPolynomial,
    compact_only: bool = True,
    cfg: NondegConfig = NondegConfig(),
    np_: NewtonPolyhedron | None = None,
) -> NondegReport:
    np_ = np_ or NewtonPolyhedron(f)
    faces = [F for F in np_.faces if F.compact or not compact_only]
    verdicts = tuple(check_face(f, F, cfg, np_) for F in faces)
    return NondegReport(verdicts, compact_only)
