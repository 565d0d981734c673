"""Artifact files written by a realization run and re-read by verification.

JSON is the single interchange format (rationals serialized as "num/den"
strings to keep exactness across the boundary, high-precision reals as
decimal strings); the prism additionally ships as an OBJ mesh and the
diagram as an SVG with under-strand gaps, in the style of star-polygon
projection figures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath as mp

from .billiards import build_table, mirror_room_check, verify_reflection
from .braids import QuasitoricPattern
from .errors import SpecFileError
from .heights import CrossingHeight, SawtoothHeight, SpatialTrajectory, TrajComponent, TrajEvent
from .invariants import certify, jones_string
from .perturbation import PerturbedPolygon, _try_layout
from .pipeline import REFLECTION_TOL, RealizationResult
from .stars import assign_braid_letters, build_star, star_diagram_json

MPF_DIGITS = 40


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecFileError(f"bad rational {s!r}") from exc


def _num(x) -> str:
    return mp.nstr(mp.mpf(x), MPF_DIGITS)


def _laurent_json(poly: dict[int, int]) -> dict:
    return {str(e): c for e, c in sorted(poly.items())}


def _pattern_json(pattern: QuasitoricPattern) -> dict:
    return {
        "strands": pattern.strands,
        "repetitions": pattern.repetitions,
        "signs": [list(row) for row in pattern.signs],
    }


def _pattern_from_json(data: dict) -> QuasitoricPattern:
    try:
        return QuasitoricPattern(
            int(data["strands"]),
            int(data["repetitions"]),
            tuple(tuple(int(s) for s in row) for row in data["signs"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFileError(f"malformed pattern block: {exc}") from exc


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


def _load_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from exc


def trajectory_json(result: RealizationResult) -> dict:
    return {
        "components": [
            {
                "frequency": comp.sawtooth.frequency,
                "phase": _frac_str(comp.sawtooth.phase),
                "points": [[_num(x), _num(y), _num(z)] for x, y, z in comp.points],
                "events": [
                    {"kind": ev.kind, "arc": _num(ev.arc), "mirror": ev.mirror_index}
                    for ev in comp.events
                ],
            }
            for comp in result.trajectory.components
        ],
        "crossing_heights": [
            {"crossing": ch.crossing, "z_a": _num(ch.z_a), "z_b": _num(ch.z_b)}
            for ch in result.trajectory.crossing_heights
        ],
    }


def table_json(result: RealizationResult) -> dict:
    return {
        "floor": [[_num(x), _num(y)] for x, y in result.table.floor],
        "height": [0, 1],
        "mirrors": [
            {
                "vertex": [_frac_str(m.vertex[0]), _frac_str(m.vertex[1])],
                "direction": [_num(m.direction[0]), _num(m.direction[1])],
                "component": m.component,
                "vertex_index": m.vertex_index,
            }
            for m in result.table.mirrors
        ],
    }


def prism_obj(result: RealizationResult) -> str:
    floor = [(float(x), float(y)) for x, y in result.table.floor]
    n = len(floor)
    lines = ["# convex prism (floor polygon x [0,1])"]
    for x, y in floor:
        lines.append(f"v {x:.12f} {y:.12f} 0.0")
    for x, y in floor:
        lines.append(f"v {x:.12f} {y:.12f} 1.0")
    bottom = " ".join(str(i + 1) for i in reversed(range(n)))
    top = " ".join(str(n + i + 1) for i in range(n))
    lines.append(f"f {bottom}")
    lines.append(f"f {top}")
    for i in range(n):
        j = (i + 1) % n
        lines.append(f"f {i + 1} {j + 1} {n + j + 1} {n + i + 1}")
    return "\n".join(lines) + "\n"


def diagram_svg(result: RealizationResult, gap_fraction: float = 0.035) -> str:
    """Star-polygon figure with the under strand broken at each crossing."""
    star = result.star
    over_flags = result.trajectory.over_flags()
    cuts: dict[int, list[float]] = {c: [] for c in range(star.p)}
    for cr in star.crossings:
        under_on_a = not over_flags[cr.index]
        chord = cr.chord_a if under_on_a else cr.chord_b
        va, vb = star.vertices[chord], star.vertices[(chord + star.q) % star.p]
        dx, dy = float(vb[0] - va[0]), float(vb[1] - va[1])
        px, py = float(cr.point[0]) - float(va[0]), float(cr.point[1]) - float(va[1])
        lam = (px * dx + py * dy) / (dx * dx + dy * dy)
        cuts[chord].append(lam)
    paths = []
    for comp in star.components:
        parts = []
        for chord in comp:
            va, vb = star.vertices[chord], star.vertices[(chord + star.q) % star.p]
            ax, ay = float(va[0]), float(va[1])
            bx, by = float(vb[0]), float(vb[1])
            spans = [(0.0, 1.0)]
            for lam in sorted(cuts[chord]):
                new = []
                for lo, hi in spans:
                    if lam - gap_fraction > lo:
                        new.append((lo, min(hi, lam - gap_fraction)))
                    if lam + gap_fraction < hi:
                        new.append((max(lo, lam + gap_fraction), hi))
                spans = new
            for lo, hi in spans:
                x0, y0 = ax + lo * (bx - ax), ay + lo * (by - ay)
                x1, y1 = ax + hi * (bx - ax), ay + hi * (by - ay)
                parts.append(f"M {x0:.5f} {-y0:.5f} L {x1:.5f} {-y1:.5f}")
        paths.append(" ".join(parts))
    body = "\n".join(
        f'<path d="{d}" stroke="black" stroke-width="0.02" fill="none" stroke-linecap="round"/>'
        for d in paths
    )
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.25 -1.25 2.5 2.5">\n'
        f"{body}\n</svg>\n"
    )


def report_json(result: RealizationResult, canonical: bool = False) -> dict:
    spec = result.spec
    over_flags = result.trajectory.over_flags()
    heights_by_crossing = {ch.crossing: ch for ch in result.trajectory.crossing_heights}
    passages_by_crossing: dict[int, list] = {}
    for ci, passages in enumerate(result.arcs.passages):
        for ps in passages:
            passages_by_crossing.setdefault(ps.crossing, []).append(
                {"component": ci, "arc": _num(ps.arc), "side": "a" if ps.is_a_side else "b"}
            )
    stages = {
        "pad": "ok",
        "star": "ok",
        "perturb": "ok",
        "mirror_room_check": "pass" if result.mirror_report.passed else "fail",
        "table": "ok",
        "arcs": "ok",
        "independence_check": "pass" if result.independence.passed else "fail",
        "heights": "ok",
        "emit": "ok",
        "verify_reflection": "pass" if result.reflection.passed else "fail",
        "certify": "pass" if result.certification.passed else "fail",
    }
    report = {
        "stages": stages,
        "spec": {
            "preset": spec.preset,
            "pattern": _pattern_json(spec.pattern),
            "seed": spec.seed,
            "delta": _frac_str(spec.delta),
            "f_max": spec.f_max,
            "margin": spec.margin,
            "precision_bits": spec.precision_bits,
            "arc_precision_bits": spec.arc_precision_bits,
        },
        "padded_pattern": _pattern_json(result.padded),
        "star": {"p": result.star.p, "q": result.star.q},
        "chosen_delta": _frac_str(result.poly.delta),
        "lines": [
            [[_frac_str(a), _frac_str(b)] for a, b in comp.lines]
            for comp in result.poly.components
        ],
        "mirror_check": {
            "passed": result.mirror_report.passed,
            "margin": _num(result.mirror_report.margin),
        },
        "independence": {
            "passed": result.independence.passed,
            "witness": list(result.independence.witness) if result.independence.witness else None,
            "component": result.independence.component,
        },
        "heights": [
            {
                "frequency": h.frequency,
                "phase": _frac_str(h.phase),
                "start_height": _frac_str(h.start_height()),
            }
            for h in result.heights
        ],
        "crossings": [
            {
                "index": c.index,
                "chords": [c.chord_a, c.chord_b],
                "braid_row": c.braid_row,
                "braid_col": c.braid_col,
                "sign": c.sign,
                "passages": passages_by_crossing[c.index],
                "z_a": _num(heights_by_crossing[c.index].z_a),
                "z_b": _num(heights_by_crossing[c.index].z_b),
                "over_side": "a" if over_flags[c.index] else "b",
            }
            for c in result.star.crossings
        ],
        "reflection": {"passed": result.reflection.passed, "tolerance": REFLECTION_TOL},
        "jones": {
            "constructed": _laurent_json(result.certification.jones_constructed),
            "intended": _laurent_json(result.certification.jones_intended),
            "constructed_pretty": jones_string(result.certification.jones_constructed),
            "intended_pretty": jones_string(result.certification.jones_intended),
            "exponent_denominator": 2,
        },
        "component_count": result.certification.components_constructed,
        "certified": result.certification.passed,
        "files": {
            "trajectory": "trajectory.json",
            "table": "table.json",
            "diagram": "diagram.json",
            "diagram_svg": "diagram.svg",
            "mesh": "prism.obj",
        },
    }
    if not canonical:
        report["timings"] = {k: round(v, 6) for k, v in result.stage_seconds.items()}
    return report


def write_artifacts(result: RealizationResult, outdir, canonical: bool = False) -> dict[str, Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "report": out / "report.json",
        "trajectory": out / "trajectory.json",
        "table": out / "table.json",
        "diagram": out / "diagram.json",
        "diagram_svg": out / "diagram.svg",
        "mesh": out / "prism.obj",
    }
    _write_json(files["report"], report_json(result, canonical))
    _write_json(files["trajectory"], trajectory_json(result))
    _write_json(files["table"], table_json(result))
    _write_json(files["diagram"], star_diagram_json(result.star))
    files["diagram_svg"].write_text(diagram_svg(result))
    files["mesh"].write_text(prism_obj(result))
    return files


@dataclass(frozen=True)
class VerificationOutcome:
    passed: bool
    checks: tuple[tuple[str, bool, str], ...]  # (name, passed, detail)

    def first_failure(self) -> str | None:
        for name, ok, detail in self.checks:
            if not ok:
                return f"{name}: {detail}" if detail else name
        return None


def verify_artifacts(report_path) -> VerificationOutcome:
    """Independently re-run the mirror-room, reflection, and certification
    checks on stored artifacts."""
    report_path = Path(report_path)
    report = _load_json(report_path)
    try:
        pattern = _pattern_from_json(report["padded_pattern"])
        p, q = int(report["star"]["p"]), int(report["star"]["q"])
        prec = int(report["spec"]["precision_bits"])
        lines_by_comp = report["lines"]
        delta = _parse_frac(report["chosen_delta"])
        seed = int(report["spec"]["seed"])
        traj_file = report_path.parent / report["files"]["trajectory"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFileError(f"malformed report: {exc}") from exc

    star = assign_braid_letters(build_star(p, q, prec), pattern)
    flat_lines: list[tuple[Fraction, Fraction] | None] = [None] * p
    for comp_lines, chain in zip(lines_by_comp, star.components):
        for chord, (a_s, b_s) in zip(chain, comp_lines):
            flat_lines[chord] = (_parse_frac(a_s), _parse_frac(b_s))
    if any(line is None for line in flat_lines):
        raise SpecFileError("report lines do not cover every chord")
    layout = _try_layout(star, flat_lines)
    checks = []
    if layout is None:
        checks.append(("combinatorics", False, "stored lines no longer match the star"))
        return VerificationOutcome(False, tuple(checks))
    poly = PerturbedPolygon(star, delta, seed, layout[0], layout[1])

    mirror = mirror_room_check(poly, prec_bits=prec)
    checks.append(
        ("mirror_room_check", mirror.passed, "" if mirror.passed else f"witness {mirror.witness}")
    )

    traj_data = _load_json(traj_file)
    try:
        components = []
        for comp in traj_data["components"]:
            saw = SawtoothHeight(int(comp["frequency"]), _parse_frac(comp["phase"]))
            points = tuple(
                (mp.mpf(x), mp.mpf(y), mp.mpf(z)) for x, y, z in comp["points"]
            )
            events = tuple(
                TrajEvent(ev["kind"], mp.mpf(ev["arc"]), ev.get("mirror"))
                for ev in comp["events"]
            )
            components.append(TrajComponent(points=points, events=events, sawtooth=saw))
        crossing_heights = tuple(
            CrossingHeight(int(ch["crossing"]), mp.mpf(ch["z_a"]), mp.mpf(ch["z_b"]))
            for ch in traj_data["crossing_heights"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFileError(f"malformed trajectory file: {exc}") from exc
    trajectory = SpatialTrajectory(
        components=tuple(components), crossing_heights=crossing_heights, poly=poly
    )

    if mirror.passed:
        table = build_table(poly, prec_bits=prec)
        reflection = verify_reflection(trajectory, table, REFLECTION_TOL, prec)
        detail = "" if reflection.passed else reflection.violations[0]
        checks.append(("verify_reflection", reflection.passed, detail))
    else:
        checks.append(("verify_reflection", False, "skipped: no valid table"))

    certification = certify(trajectory, pattern)
    checks.append(
        (
            "certify",
            certification.passed,
            "" if certification.passed else certification.summary(),
        )
    )
    return VerificationOutcome(all(ok for _, ok, _ in checks), tuple(checks))
