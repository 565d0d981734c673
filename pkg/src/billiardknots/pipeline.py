"""End-to-end realization: pattern -> star -> perturbed polygon -> prism trajectory.

Stages, in order: pad the pattern into the star regime, build and sign the
star, perturb to rational lines (redrawing until the mirror-room condition
holds as well), assemble the prism table, compute arcs, run the bounded
independence check, search sawtooth heights, emit the 3D trajectory, verify
the reflection law, and certify the knot type against the abstract closure.

Everything is deterministic in (spec, seed).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .billiards import (
    BilliardTable,
    MirrorRoomReport,
    ReflectionReport,
    build_table,
    mirror_room_check,
    verify_reflection,
)
from .braids import QuasitoricPattern, pad_to_min_repetitions
from .errors import DomainError, PipelineError, SpecFileError
from .heights import (
    SawtoothHeight,
    SpatialTrajectory,
    build_height_constraints,
    emit_trajectory,
    search_heights,
)
from .invariants import CertificationReport, certify
from .perturbation import PerturbedPolygon, arc_length_table, independence_check, perturb
from .presets import PRESETS
from .stars import ArcTable, StarDiagram, assign_braid_letters, build_star

REFLECTION_TOL = 1e-9
INDEPENDENCE_MAX_COEFF = 10
INDEPENDENCE_TOL = 1e-12


@dataclass(frozen=True)
class RealizationSpec:
    """Validated input for one realization run."""

    pattern: QuasitoricPattern
    preset: str | None = None
    seed: int = 42
    delta: Fraction = Fraction(1, 1000)
    f_max: int = 10_000
    margin: float = 1e-3
    precision_bits: int = 192
    arc_precision_bits: int = 256

    @classmethod
    def from_dict(cls, data: dict, overrides: dict | None = None) -> "RealizationSpec":
        if not isinstance(data, dict):
            raise SpecFileError("spec must be a JSON object")
        merged = dict(data)
        for key, value in (overrides or {}).items():
            if value is not None:
                merged[key] = value
        has_pattern = "pattern" in merged
        has_preset = "preset" in merged
        if has_pattern == has_preset:
            raise SpecFileError("exactly one of 'pattern' or 'preset' must be given")
        if has_preset:
            name = merged["preset"]
            if name not in PRESETS:
                raise SpecFileError(
                    f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
                )
            pattern = PRESETS[name]
        else:
            spec = merged["pattern"]
            try:
                strands = int(spec["strands"])
                repetitions = int(spec["repetitions"])
                signs = tuple(tuple(int(s) for s in row) for row in spec["signs"])
            except (KeyError, TypeError, ValueError) as exc:
                raise SpecFileError(f"malformed pattern: {exc}") from exc
            if strands < 2:
                raise SpecFileError("strands must be >= 2")
            if repetitions < 1:
                raise SpecFileError("repetitions must be >= 1")
            try:
                pattern = QuasitoricPattern(strands, repetitions, signs)
            except DomainError as exc:
                raise SpecFileError(str(exc)) from exc
        try:
            delta = Fraction(str(merged.get("delta", "1/1000")))
            seed = int(merged.get("seed", 42))
            f_max = int(merged.get("f_max", 10_000))
            margin = float(merged.get("margin", 1e-3))
            precision_bits = int(merged.get("precision_bits", 192))
            arc_precision_bits = int(merged.get("arc_precision_bits", max(256, precision_bits)))
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecFileError(f"malformed numeric field: {exc}") from exc
        for name, value in (
            ("delta", delta), ("f_max", f_max), ("margin", margin),
            ("precision_bits", precision_bits),
        ):
            if value <= 0:
                raise SpecFileError(f"{name} must be positive")
        if margin >= 0.5:
            raise SpecFileError("margin must be below 1/2")
        return cls(
            pattern=pattern,
            preset=merged.get("preset"),
            seed=seed,
            delta=delta,
            f_max=f_max,
            margin=margin,
            precision_bits=precision_bits,
            arc_precision_bits=arc_precision_bits,
        )


@dataclass
class RealizationResult:
    """Everything the run produced, for reporting and verification."""

    spec: RealizationSpec
    padded: QuasitoricPattern
    star: StarDiagram
    poly: PerturbedPolygon
    mirror_report: MirrorRoomReport
    table: BilliardTable
    arcs: ArcTable
    independence: object
    heights: tuple[SawtoothHeight, ...]
    trajectory: SpatialTrajectory
    reflection: ReflectionReport
    certification: CertificationReport
    stage_seconds: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (
            self.mirror_report.passed
            and self.reflection.passed
            and self.certification.passed
            and self.independence.passed
        )


MAX_MIRROR_RETRIES = 8


def realize(spec: RealizationSpec) -> RealizationResult:
    """Run the whole pipeline; raises PipelineError subclasses on hard failure."""
    stage_seconds: dict[str, float] = {}

    def timed(name, fn):
        t0 = time.perf_counter()
        out = fn()
        stage_seconds[name] = time.perf_counter() - t0
        return out

    padded = timed("pad", lambda: pad_to_min_repetitions(spec.pattern))
    star = timed(
        "star",
        lambda: assign_braid_letters(
            build_star(padded.repetitions, padded.strands, spec.precision_bits), padded
        ),
    )

    def perturb_until_mirrors():
        delta = spec.delta
        for attempt in range(MAX_MIRROR_RETRIES):
            poly = perturb(star, delta, spec.seed)
            report = mirror_room_check(poly, prec_bits=spec.precision_bits)
            if report.passed:
                return poly, report
            delta = delta / 2
        raise PipelineError("mirror-room condition kept failing at shrinking delta")

    poly, mirror_report = timed("perturb", perturb_until_mirrors)
    table = timed("table", lambda: build_table(poly, prec_bits=spec.precision_bits))
    arcs = timed("arcs", lambda: arc_length_table(poly, spec.arc_precision_bits))
    independence = timed(
        "independence",
        lambda: independence_check(arcs, INDEPENDENCE_MAX_COEFF, INDEPENDENCE_TOL),
    )
    constraints = build_height_constraints(star, arcs)
    heights = timed(
        "heights", lambda: search_heights(constraints, arcs, spec.f_max, spec.margin)
    )
    trajectory = timed(
        "emit", lambda: emit_trajectory(poly, heights, arcs, spec.precision_bits)
    )
    reflection = timed(
        "reflection",
        lambda: verify_reflection(trajectory, table, REFLECTION_TOL, spec.precision_bits),
    )
    certification = timed("certify", lambda: certify(trajectory, padded))

    return RealizationResult(
        spec=spec,
        padded=padded,
        star=star,
        poly=poly,
        mirror_report=mirror_report,
        table=table,
        arcs=arcs,
        independence=independence,
        heights=heights,
        trajectory=trajectory,
        reflection=reflection,
        certification=certification,
        stage_seconds=stage_seconds,
    )
