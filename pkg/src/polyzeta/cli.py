"""Command-line front end: ``polyzeta <command> POLY -n N [options]``.

Exit codes: 0 success, 1 usage or input error, 2 refusal because a theorem
hypothesis (f(0) = 0, non-degeneracy) fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import fan as fanmod
from . import poles, zetanum
from .errors import HypothesisError, PolyzetaError
from .newton import NewtonPolyhedron
from .nondeg import DEGENERATE, NondegConfig, check_all
from .parser import ParseError, parse

EXIT_OK, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2
MAX_K, MAX_N = 10_000, 6
COMMANDS = ("np", "fan", "nondeg", "poles", "zeta", "analyze")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    polynomial: str
    n: int
    max_k: int = poles.DEFAULT_K
    compact_only: bool = True
    seed: int = 0
    attempts: int = 24
    tol: float = 1e-9
    format: str = "text"
    grid: tuple[int, int] | None = None
    bump_radius: float = 1.0
    bump_p: int = 1
    force: bool = False
    naive: bool = False
    s_values: tuple[complex, ...] = (1.0,)
    probe: bool = False

    def validate(self) -> None:
        if not 1 <= self.n <= MAX_N:
            raise UsageError(f"-n must lie in [1, {MAX_N}]")
        if not 0 <= self.max_k <= MAX_K:
            raise UsageError(f"--max-k must lie in [0, {MAX_K}]")
        if not 0 < self.tol <= 1e-2:
            raise UsageError("--tol must lie in (0, 1e-2]")
        if self.attempts < 1:
            raise UsageError("--attempts must be positive")
        if self.grid is not None and min(self.grid) < 1:
            raise UsageError("--grid sizes must be positive")
        if self.bump_radius <= 0 or self.bump_p < 0:
            raise UsageError("bump radius must be positive and bump exponent nonnegative")

    @property
    def nondeg(self) -> NondegConfig:
        return NondegConfig(seed=self.seed, attempts=self.attempts, tol=self.tol)


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="polyzeta", description="Newton polyhedra and candidate poles of local zeta functions.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("polynomial")
        p.add_argument("-n", type=int, required=True, help="number of variables")
        p.add_argument("--format", choices=("text", "json", "csv") if name == "zeta" else ("text", "json"), default="text")
        if name in ("nondeg", "poles", "analyze"):
            g = p.add_mutually_exclusive_group()
            g.add_argument("--compact-only", dest="compact_only", action="store_true", default=True)
            g.add_argument("--all-faces", dest="compact_only", action="store_false")
            p.add_argument("--seed", type=int, default=None)
            p.add_argument("--attempts", type=int, default=24)
            p.add_argument("--tol", type=float, default=1e-9)
        if name in ("poles", "analyze"):
            p.add_argument("--max-k", type=int, default=poles.DEFAULT_K)
            p.add_argument("--force", action="store_true")
        if name == "poles":
            p.add_argument("--naive", action="store_true", help="use the rays of the regularized fan")
        if name == "zeta":
            p.add_argument("--s", dest="s_values", type=_complex, action="append")
            p.add_argument("--grid", type=int, nargs=2, metavar=("RADIAL", "ANGULAR"))
            p.add_argument("--bump-radius", type=float, default=1.0)
            p.add_argument("--bump-p", type=int, default=1)
            p.add_argument("--probe", action="store_true", help="run the holomorphy probe")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    seed = getattr(ns, "seed", None)
    if seed is None:
        env = os.environ.get("POLYZETA_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise UsageError("POLYZETA_SEED must be an integer") from None
    cfg = RunConfig(
        command=ns.command,
        polynomial=ns.polynomial,
        n=ns.n,
        max_k=getattr(ns, "max_k", poles.DEFAULT_K),
        compact_only=getattr(ns, "compact_only", True),
        seed=seed,
        attempts=getattr(ns, "attempts", 24),
        tol=getattr(ns, "tol", 1e-9),
        format=ns.format,
        grid=tuple(ns.grid) if getattr(ns, "grid", None) else None,
        bump_radius=getattr(ns, "bump_radius", 1.0),
        bump_p=getattr(ns, "bump_p", 1),
        force=getattr(ns, "force", False),
        naive=getattr(ns, "naive", False),
        s_values=tuple(getattr(ns, "s_values", None) or (1.0,)),
        probe=getattr(ns, "probe", False),
    )
    cfg.validate()
    return cfg


# -- reports -------------------------------------------------------------------


def np_report(np_: NewtonPolyhedron) -> dict:
    out = np_.to_json()
    out["remoteness"] = np_.remoteness().to_json() if any(F.nu > 0 for F in np_.facets) else None
    return out


def fan_report(np_: NewtonPolyhedron) -> dict:
    dual = fanmod.dual_fan(np_)
    simp = fanmod.simplicialize(dual)
    reg = fanmod.regularize(simp)
    return {"dual": dual.to_json(), "simplicial": simp.to_json(), "regular": reg.to_json()}


class _Refused(Exception):
    def __init__(self, message: str, payload: dict):
        super().__init__(message)
        self.payload = payload


def _run(cfg: RunConfig) -> dict:
    f = parse(cfg.polynomial, cfg.n)
    if cfg.command == "zeta":
        return _zeta(cfg, f)
    np_ = NewtonPolyhedron(f)
    out: dict = {"schema": 1, "command": cfg.command, "polynomial": str(f), "n": cfg.n}
    if cfg.command in ("np", "analyze"):
        out["np"] = np_report(np_)
    if cfg.command in ("fan", "analyze"):
        out["fan"] = fan_report(np_)
    if cfg.command == "np" or cfg.command == "fan":
        return out
    report = check_all(f, cfg.compact_only, cfg.nondeg, np_)
    if cfg.command in ("nondeg", "analyze"):
        out["nondeg"] = report.to_json()
    if cfg.command == "nondeg":
        if report.overall == DEGENERATE:
            bad = report.degenerate_faces()[0]
            raise _Refused(f"f is degenerate on face {bad.face_id}", out)
        return out
    pick = poles.naive_candidates if cfg.naive else poles.candidate_poles
    try:
        cands = pick(f, cfg.max_k, cfg.compact_only, cfg.nondeg, cfg.force, np_, report)
    except HypothesisError as exc:
        out["refused"] = str(exc)
        raise _Refused(str(exc), out) from None
    out["poles"] = cands.to_json()
    return out


def _zeta(cfg: RunConfig, f) -> dict:
    bump = zetanum.BumpSpec(cfg.bump_radius, cfg.bump_p)
    if cfg.probe:
        rep = zetanum.holomorphy_probe(f, bump, cfg.s_values, cfg.grid)
        return {"schema": 1, "command": "zeta", "polynomial": str(f), "n": cfg.n, "probe": rep.to_json()}
    samples = [zetanum.zeta_quadrature(f, bump, s, cfg.grid) for s in cfg.s_values]
    return {
        "schema": 1,
        "command": "zeta",
        "polynomial": str(f),
        "n": cfg.n,
        "samples": [smp.to_json() for smp in samples],
    }


# -- text rendering ------------------------------------------------------------


def _text(out: dict) -> str:
    lines = [f"f = {out['polynomial']}  (n = {out['n']})"]
    if "np" in out:
        npj = out["np"]
        lines.append("vertices: " + ", ".join(str(tuple(v)) for v in npj["vertices"]))
        for F in npj["facets"]:
            lines.append(f"facet u = {tuple(F['u'])}  nu = {F['nu']}")
        if npj["remoteness"]:
            r = npj["remoteness"]
            lines.append(f"remoteness: t0 = {r['t0']}  nu0 = {r['nu0']}")
    if "fan" in out:
        for key in ("dual", "simplicial", "regular"):
            fj = out["fan"][key]
            full = [c for c in fj["cones"] if c["dim"] == out["n"]]
            lines.append(f"{key} fan: {len(fj['rays'])} rays, {len(full)} maximal cones")
        lines.append("regular fan rays: " + ", ".join(str(tuple(r)) for r in out["fan"]["regular"]["rays"]))
    if "nondeg" in out:
        nd = out["nondeg"]
        lines.append(f"non-degeneracy ({'compact faces' if nd['compact_only'] else 'all faces'}): {nd['overall']}")
        for v in nd["faces"]:
            extra = ""
            if "witness" in v:
                w = ", ".join(f"{a:.6g}{b:+.6g}i" for a, b in v["witness"])
                extra = f"  witness ({w})  residual {v['residual']:.3g}"
            lines.append(f"  face {v['face']} (dim {v['dim']}): {v['status']} [{v['method']}]{extra}")
    if "poles" in out:
        pj = out["poles"]
        lines.append(f"holomorphy bound: Re(s) > {pj['holomorphy_bound']}")
        lines.append(f"{pj['kind']} candidates (K = {pj['K']}, {pj['hypothesis']}):")
        for e in pj["candidates"]:
            src = ", ".join(s if isinstance(s, str) else str(tuple(s)) for s in e["sources"])
            lines.append(f"  {e['value']:>8}  order <= {e['order_bound']}  from {src}")
        lines.extend(f"warning: {w}" for w in pj["warnings"])
        lines.append(f"note: {pj['caveat']}")
    if "refused" in out:
        lines.append(f"refused: {out['refused']}")
    if "samples" in out:
        for smp in out["samples"]:
            lines.append(
                f"Z({smp['s_re']:g}{smp['s_im']:+g}i) = {smp['value_re']:.10g}{smp['value_im']:+.3g}i"
                f"  est_error {smp['est_error']:.3g}"
            )
    if "probe" in out:
        pr = out["probe"]
        lines.append(f"holomorphy bound {pr['holomorphy_bound']}; probe {'stable' if pr['stable'] else 'UNSTABLE'}")
        for pt in pr["points"]:
            flag = "unstable" if pt["unstable"] else "stable"
            dom = "" if pt["in_domain"] else "  (below bound + margin)"
            lines.append(f"  s = {pt['s_re']:g}{pt['s_im']:+g}i  change {pt['rel_change']:.3g}  {flag}{dom}")
    return "\n".join(lines)


def _emit(out: dict, cfg: RunConfig, stream) -> None:
    if cfg.format == "json":
        stream.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    elif cfg.format == "csv":
        samples = [zetanum.ZetaSample(complex(s["s_re"], s["s_im"]), complex(s["value_re"], s["value_im"]), (0, 0), s["est_error"]) for s in out.get("samples", [])]
        stream.write(zetanum.samples_to_csv(samples))
    else:
        stream.write(_text(out) + "\n")


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
        if cfg.format == "csv" and cfg.probe:
            raise UsageError("csv output is for quadrature samples only")
    except UsageError as exc:
        stderr.write(f"polyzeta: usage error: {exc}\n")
        return EXIT_USAGE
    try:
        out = _run(cfg)
    except ParseError as exc:
        stderr.write(f"polyzeta: parse error: {exc}\n")
        return EXIT_USAGE
    except _Refused as exc:
        _emit(exc.payload, cfg, stdout)
        stderr.write(f"polyzeta: refused: {exc}\n")
        return EXIT_REFUSED
    except HypothesisError as exc:
        stderr.write(f"polyzeta: refused: {exc}\n")
        return EXIT_REFUSED
    except (PolyzetaError, ValueError, ZeroDivisionError) as exc:
        stderr.write(f"polyzeta: error: {exc}\n")
        return EXIT_USAGE
    _emit(out, cfg, stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
