"""Desk-scale numerics for Z(s) = integral of phi(x) |f(x)|^(2s) over C^n, n <= 2.

phi is a product of polynomial bumps (1 - |x_i|^2 / R^2)^p on the discs
|x_i| <= R.  Each complex variable is integrated in polar coordinates with a
midpoint rule; the error estimate is the change under grid doubling.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import UnsupportedError
from .polycore import LaurentPolynomial

DEFAULT_GRID = {1: (4096, 64), 2: (48, 48)}
PROBE_GRID = {1: (512, 16), 2: (32, 32)}
PROBE_THRESHOLD = 0.10
PROBE_MARGIN = 0.02
_CHUNK = 1 << 22


@dataclass(frozen=True)
class BumpSpec:
    R: float = 1.0
    p: int = 1

    def __post_init__(self) -> None:
        if not self.R > 0:
            raise ValueError("bump radius must be positive")
        if int(self.p) != self.p or self.p < 0:
            raise ValueError("bump exponent must be a nonnegative integer")

    def weight(self, r: np.ndarray) -> np.ndarray:
        return np.where(r <= self.R, (1.0 - (r / self.R) ** 2) ** self.p, 0.0)


@dataclass(frozen=True)
class ZetaSample:
    s: complex
    value: complex
    grid: tuple[int, int]
    est_error: float

    def to_json(self) -> dict:
        return {
            "s_re": self.s.real,
            "s_im": self.s.imag,
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "est_error": self.est_error,
            "grid": list(self.grid),
        }


def monomial_reference(m: int, p: int, s: complex) -> complex:
    """Z for f = x^m, phi = (1 - |x|^2)^p, n = 1: pi p! / prod_{j=1}^{p+1} (m s + j)."""
    if m < 1 or p < 0:
        raise ValueError("need m >= 1 and p >= 0")
    s = complex(s)
    out = complex(math.pi * math.factorial(p))
    for j in range(1, p + 2):
        d = m * s + j
        if d == 0:
            raise UnsupportedError(f"s = {-Fraction(j, m)} is a pole of the reference")
        out /= d
    return out


def _check_grid(grid) -> tuple[int, int]:
    nr, nt = (int(x) for x in grid)
    if nr < 1 or nt < 1:
        raise ValueError("grid sizes must be positive")
    return nr, nt


def _polar_nodes(bump: BumpSpec, nr: int, nt: int, offset: float):
    """Points and weights of the polar midpoint rule on |x| <= R."""
    h = bump.R / nr
    r = (np.arange(nr) + 0.5) * h
    dt = 2 * math.pi / nt
    t = (np.arange(nt) + 0.5 + offset) * dt
    pts = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    w = np.repeat(bump.weight(r) * r * h * dt, nt)
    return pts, w


def _abs_power(absf2: np.ndarray, s: complex) -> np.ndarray:
    """|f|^(2s) from |f|^2."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if s.imag == 0:
            out = np.power(absf2, s.real)
        else:
            out = np.exp(s * np.log(absf2))
    if s.real > 0:
        out = np.where(absf2 == 0, 0.0, out)
    return out


def _integrate(f: LaurentPolynomial, bump: BumpSpec, s: complex, grid) -> complex:
    nr, nt = _check_grid(grid)
    exps, coeffs = f.to_arrays()
    if f.n == 1:
        x, w = _polar_nodes(bump, nr, nt, 0.0)
        vals = np.zeros_like(x)
        for e, c in zip(exps[:, 0], coeffs):
            vals += c * x ** int(e)
        return complex(np.sum(w * _abs_power(np.abs(vals) ** 2, s)))
    # Offset the second angular grid so binomial zero sets are never sampled.
    x1, w1 = _polar_nodes(bump, nr, nt, 0.0)
    x2, w2 = _polar_nodes(bump, nr, nt, 0.25)
    d1, d2 = int(exps[:, 0].max()), int(exps[:, 1].max())
    C = np.zeros((d1 + 1, d2 + 1), dtype=complex)
    for (a, b), c in zip(exps, coeffs):
        C[int(a), int(b)] += c
    A2 = C @ np.vander(x2, d2 + 1, increasing=True).T
    total = 0j
    step = max(1, _CHUNK // len(x2))
    for lo in range(0, len(x1), step):
        A1 = np.vander(x1[lo:lo + step], d1 + 1, increasing=True)
        F = A1 @ A2
        total += complex(w1[lo:lo + step] @ (_abs_power(F.real ** 2 + F.imag ** 2, s) @ w2))
    return total


def _validate(f: LaurentPolynomial) -> None:
    if f.n > 2:
        raise UnsupportedError("quadrature is implemented for n <= 2 only")
    if f.is_zero() or not f.is_polynomial():
        raise UnsupportedError("quadrature needs a nonzero polynomial")


def zeta_quadrature(
    f: LaurentPolynomial,
    bump: BumpSpec = BumpSpec(),
    s: complex = 1.0,
    grid: Sequence[int] | None = None,
    estimate: bool = True,
) -> ZetaSample:
    """Z(s) on the given (radial, angular) grid per variable.

    est_error is |Z(grid) - Z(2 * grid)| when ``estimate`` is set, else nan.
    """
    _validate(f)
    s = complex(s)
    if s.real <= 0:
        raise UnsupportedError("direct quadrature needs Re(s) > 0")
    grid = _check_grid(grid or DEFAULT_GRID[f.n])
    value = _integrate(f, bump, s, grid)
    err = float("nan")
    if estimate:
        fine = _integrate(f, bump, s, (2 * grid[0], 2 * grid[1]))
        err = abs(fine - value)
    return ZetaSample(s, value, grid, err)


@dataclass(frozen=True)
class ProbePoint:
    s: complex
    value: complex
    refined: complex
    rel_change: float
    finite: bool
    in_domain: bool

    @property
    def unstable(self) -> bool:
        return not self.finite or self.rel_change > PROBE_THRESHOLD

    def to_json(self) -> dict:
        return {
            "s_re": self.s.real,
            "s_im": self.s.imag,
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "rel_change": self.rel_change,
            "finite": self.finite,
            "in_domain": self.in_domain,
            "unstable": self.unstable,
        }


@dataclass(frozen=True)
class ProbeReport:
    bound: Fraction
    grid: tuple[int, int]
    points: tuple[ProbePoint, ...]

    @property
    def violations(self) -> list[ProbePoint]:
        return [pt for pt in self.points if pt.unstable]

    @property
    def stable(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "holomorphy_bound": str(self.bound),
            "grid": list(self.grid),
            "threshold": PROBE_THRESHOLD,
            "stable": self.stable,
            "points": [pt.to_json() for pt in self.points],
        }


def holomorphy_probe(
    f: LaurentPolynomial,
    bump: BumpSpec = BumpSpec(),
    s_line: Iterable[complex] = (),
    grid: Sequence[int] | None = None,
) -> ProbeReport:
    """Evaluate the integral at each s and flag points where doubling the
    radial grid moves the value by more than 10%, or the value is not finite.

    ``in_domain`` records whether Re(s) clears the holomorphy bound by the
    0.02 margin; points outside are still evaluated.
    """
    from .poles import holomorphy_bound

    _validate(f)
    bound = holomorphy_bound(f)
    nr, nt = _check_grid(grid or PROBE_GRID[f.n])
    pts = []
    for s in s_line:
        s = complex(s)
        a = _integrate(f, bump, s, (nr, nt))
        b = _integrate(f, bump, s, (2 * nr, nt))
        finite = bool(np.isfinite(a) and np.isfinite(b))
        rel = abs(b - a) / abs(b) if finite and b != 0 else float("inf")
        pts.append(ProbePoint(s, a, b, rel, finite, s.real >= float(bound) + PROBE_MARGIN))
    return ProbeReport(bound, (nr, nt), tuple(pts))


FIELDS = ("s_re", "s_im", "value_re", "value_im", "est_error")


def samples_to_csv(samples: Iterable[ZetaSample]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=FIELDS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for smp in samples:
        w.writerow(smp.to_json())
    return buf.getvalue()


def samples_to_json(samples: Iterable[ZetaSample]) -> str:
    return json.dumps({"schema": 1, "samples": [smp.to_json() for smp in samples]}, sort_keys=True)
