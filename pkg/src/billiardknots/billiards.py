"""Mirrors, mirror rooms, and the convex prism table.

At a trajectory vertex B the mirror is the line through B orthogonal to the
internal bisector of the angle at B; the mirror room is the half-plane it
bounds on the trajectory's side.  A closed polygon (or union of polygons)
is a billiard trajectory exactly when it lies in all of its mirror rooms,
and then the intersection of those half-planes is a convex table whose
boundary touches the trajectory at every vertex.  The prism is that floor
times the height interval [0, 1]; its walls are vertical, so the planar
reflection law lifts to 3D with the z-slope preserved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import DegenerateAngleError, DomainError, UnboundedTableError
from .perturbation import PerturbedPolygon

DEFAULT_MARGIN_FACTOR = 1e-12  # of the trajectory diameter


def _to_mpf(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def internal_bisector(prev, at, next_, prec_bits: int = 128):
    """Unit vector along the internal bisector of the angle prev-at-next.

    Points into the angle: u = normalize(normalize(prev-at) + normalize(next-at)).
    """
    with mp.workprec(prec_bits):
        ax = _to_mpf(prev[0]) - _to_mpf(at[0])
        ay = _to_mpf(prev[1]) - _to_mpf(at[1])
        bx = _to_mpf(next_[0]) - _to_mpf(at[0])
        by = _to_mpf(next_[1]) - _to_mpf(at[1])
        na, nb = mp.hypot(ax, ay), mp.hypot(bx, by)
        if na == 0 or nb == 0:
            raise DegenerateAngleError("coincident points give no angle")
        eps = mp.mpf(2) ** (-prec_bits // 2)
        if abs(ax * by - ay * bx) < eps * na * nb:
            raise DegenerateAngleError("collinear points give a degenerate angle")
        ux = ax / na + bx / nb
        uy = ay / na + by / nb
        norm = mp.hypot(ux, uy)
        return (ux / norm, uy / norm)


@dataclass(frozen=True)
class Mirror:
    vertex: tuple                    # exact rational trajectory vertex
    direction: tuple                 # unit internal bisector (mpf), points inward
    component: int
    vertex_index: int


@dataclass(frozen=True)
class MirrorRoomReport:
    passed: bool
    margin: object                        # min over (k, i) of u_k . (P_i - P_k)
    witness: tuple[int, int] | None = None  # flat (k, i) vertex indices on failure
    threshold: object = None

    def __bool__(self) -> bool:
        return self.passed


def polygon_mirrors(poly: PerturbedPolygon, prec_bits: int = 128) -> list[Mirror]:
    mirrors = []
    for ci, comp in enumerate(poly.components):
        m = len(comp.vertices)
        if m < 3:
            raise DomainError(f"component {ci} has fewer than 3 vertices")
        for i in range(m):
            u = internal_bisector(
                comp.vertices[(i - 1) % m], comp.vertices[i], comp.vertices[(i + 1) % m],
                prec_bits,
            )
            mirrors.append(Mirror(comp.vertices[i], u, ci, i))
    return mirrors


def mirror_room_check(
    poly: PerturbedPolygon,
    margin_factor: float = DEFAULT_MARGIN_FACTOR,
    prec_bits: int = 128,
) -> MirrorRoomReport:
    """Strict mirror-room condition: u_k . (P_i - P_k) > margin for all i != k.

    The margin is ``margin_factor`` times the trajectory diameter, guarding
    the square roots inside the bisector normalization; everything else is
    exact.  All vertices of all components count, so for links every mirror
    room must contain the whole union.
    """
    mirrors = polygon_mirrors(poly, prec_bits)
    vertices = poly.all_vertices()
    with mp.workprec(prec_bits):
        pts = [(_to_mpf(x), _to_mpf(y)) for x, y in vertices]
        diameter = max(
            mp.hypot(p[0] - q[0], p[1] - q[1]) for p in pts for q in pts if p != q
        )
        threshold = mp.mpf(margin_factor) * diameter
        margin = None
        witness = None
        for k, mirror in enumerate(mirrors):
            vx, vy = _to_mpf(mirror.vertex[0]), _to_mpf(mirror.vertex[1])
            ux, uy = mirror.direction
            for i, (px, py) in enumerate(pts):
                if i == k:
                    continue
                value = ux * (px - vx) + uy * (py - vy)
                if margin is None or value < margin:
                    margin = value
                    witness = (k, i)
        passed = margin is not None and margin > threshold
        return MirrorRoomReport(
            passed=passed,
            margin=margin,
            witness=None if passed else witness,
            threshold=threshold,
        )


@dataclass(frozen=True)
class BilliardTable:
    floor: tuple                       # convex polygon vertices, CCW (mpf pairs)
    mirrors: tuple[Mirror, ...]
    edge_of_mirror: tuple[tuple[tuple, tuple], ...]  # edge endpoints per mirror
    height: tuple[int, int] = (0, 1)

    def contains_xy(self, point, tol, prec_bits: int = 128) -> bool:
        with mp.workprec(prec_bits):
            px, py = _to_mpf(point[0]), _to_mpf(point[1])
            for mirror in self.mirrors:
                vx, vy = _to_mpf(mirror.vertex[0]), _to_mpf(mirror.vertex[1])
                ux, uy = mirror.direction
                if ux * (px - vx) + uy * (py - vy) < -tol:
                    return False
            return True


def build_table(poly: PerturbedPolygon, prec_bits: int = 128) -> BilliardTable:
    """Intersect the mirror half-planes into the convex floor polygon.

    Precondition: mirror_room_check passes.  Raises UnboundedTableError when
    the half-planes do not bound a polygon (a failed precondition in
    disguise).
    """
    mirrors = polygon_mirrors(poly, prec_bits)
    n = len(mirrors)
    with mp.workprec(prec_bits):
        # boundedness: outward normals (-u) must not fit in an open half-plane
        angles = sorted(mp.atan2(-uy, -ux) for ux, uy in (m.direction for m in mirrors))
        gaps = [angles[(i + 1) % n] - angles[i] for i in range(n - 1)]
        gaps.append(angles[0] + 2 * mp.pi - angles[-1])
        if max(gaps) >= mp.pi:
            raise UnboundedTableError("mirror normals span less than a half-turn")

        norms = []
        offs = []
        for mirror in mirrors:
            ux, uy = mirror.direction
            vx, vy = _to_mpf(mirror.vertex[0]), _to_mpf(mirror.vertex[1])
            norms.append((ux, uy))
            offs.append(ux * vx + uy * vy)  # feasible: u . x >= off

        scale = max(abs(o) for o in offs) + 1
        slack = scale * mp.mpf(2) ** (12 - prec_bits // 2)

        candidates = []
        for i in range(n):
            for j in range(i + 1, n):
                (ax, ay), (bx, by) = norms[i], norms[j]
                den = ax * by - ay * bx
                if abs(den) < mp.mpf(2) ** (-prec_bits // 2):
                    continue
                x = (offs[i] * by - offs[j] * ay) / den
                y = (ax * offs[j] - bx * offs[i]) / den
                if all(norms[k][0] * x + norms[k][1] * y >= offs[k] - slack for k in range(n)):
                    candidates.append((x, y, i, j))
        if len(candidates) < 3:
            raise UnboundedTableError("half-plane intersection degenerates")

        cx = mp.fsum(c[0] for c in candidates) / len(candidates)
        cy = mp.fsum(c[1] for c in candidates) / len(candidates)
        ordered = sorted(candidates, key=lambda c: mp.atan2(c[1] - cy, c[0] - cx))
        floor = []
        for x, y, _, _ in ordered:
            if floor and mp.hypot(x - floor[-1][0], y - floor[-1][1]) < slack:
                continue
            floor.append((x, y))
        if len(floor) > 1 and mp.hypot(floor[0][0] - floor[-1][0], floor[0][1] - floor[-1][1]) < slack:
            floor.pop()

        edge_of_mirror = []
        for k in range(n):
            on_line = [
                (x, y)
                for x, y in floor
                if abs(norms[k][0] * x + norms[k][1] * y - offs[k]) <= 2 * slack
            ]
            if len(on_line) != 2:
                raise UnboundedTableError(
                    f"mirror {k} supports {len(on_line)} polygon vertices, expected an edge"
                )
            edge_of_mirror.append((on_line[0], on_line[1]))

    return BilliardTable(
        floor=tuple(floor), mirrors=tuple(mirrors), edge_of_mirror=tuple(edge_of_mirror)
    )


@dataclass(frozen=True)
class ReflectionReport:
    passed: bool
    violations: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.passed


def verify_reflection(traj, table: BilliardTable, tol: float, prec_bits: int = 128) -> ReflectionReport:
    """Check the reflection law at every bounce and containment in the prism.

    ``traj`` provides per-component 3D points with event tags ('wall' with a
    mirror index, 'floor', 'ceiling').  Wall bounces must reflect the
    horizontal direction across the mirror line with z-slope carried
    through; floor and ceiling bounces flip the vertical component.
    """
    violations = []
    with mp.workprec(prec_bits):
        tol_m = mp.mpf(tol)
        mirror_list = table.mirrors
        for ci, comp in enumerate(traj.components):
            pts = comp.points
            n = len(pts)
            if n < 3:
                violations.append(f"component {ci}: fewer than 3 points")
                continue
            for i, (x, y, z) in enumerate(pts):
                if z < -tol_m or z > 1 + tol_m:
                    violations.append(f"component {ci} point {i}: z={mp.nstr(z, 8)} outside [0,1]")
                if not table.contains_xy((x, y), tol_m, prec_bits):
                    violations.append(f"component {ci} point {i}: leaves the floor polygon")
            for i, event in enumerate(comp.events):
                prev_pt = pts[(i - 1) % n]
                here = pts[i]
                next_pt = pts[(i + 1) % n]
                d_in = [here[j] - prev_pt[j] for j in range(3)]
                d_out = [next_pt[j] - here[j] for j in range(3)]
                nin = mp.sqrt(mp.fsum(c * c for c in d_in))
                nout = mp.sqrt(mp.fsum(c * c for c in d_out))
                if nin == 0 or nout == 0:
                    violations.append(f"component {ci} event {i}: repeated point")
                    continue
                d_in = [c / nin for c in d_in]
                d_out = [c / nout for c in d_out]
                if event.kind in ("floor", "ceiling"):
                    expect = (d_in[0], d_in[1], -d_in[2])
                    z_expect = mp.mpf(0) if event.kind == "floor" else mp.mpf(1)
                    if abs(here[2] - z_expect) > tol_m:
                        violations.append(
                            f"component {ci} event {i}: {event.kind} bounce at z={mp.nstr(here[2], 8)}"
                        )
                elif event.kind == "wall":
                    mirror = mirror_list[event.mirror_index]
                    ux, uy = mirror.direction
                    dot = d_in[0] * ux + d_in[1] * uy
                    expect = (d_in[0] - 2 * dot * ux, d_in[1] - 2 * dot * uy, d_in[2])
                else:
                    violations.append(f"component {ci} event {i}: unknown kind {event.kind}")
                    continue
                err = max(abs(d_out[j] - expect[j]) for j in range(3))
                if err > tol_m:
                    violations.append(
                        f"reflection law violated at component {ci} event {i} "
                        f"({event.kind}, vertex {getattr(event, 'mirror_index', '-')}): err={mp.nstr(err, 6)}"
                    )
    return ReflectionReport(passed=not violations, violations=tuple(violations))
