"""Constructions of separating families and moves between them."""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import GeometryError
from ..geometry import Curve, Segment, SurfaceKind, SurfaceSpec
from .family import SeparatingFamily

ROTATION_ARM = 0.3
MAX_ROTATION = math.pi / 2
MAX_RESAMPLES = 200


def _unit(angle: float) -> complex:
    return cmath.exp(1j * angle)


def radial_family(surface: SurfaceSpec, to_inner: tuple[bool, ...] | None = None, connector_angle: float = math.pi) -> SeparatingFamily:
    """Each puncture joined radially to a boundary circle.

    On the annulus the inner and outer circles are joined by a radial segment
    at ``connector_angle``; ``to_inner[j]`` sends puncture j to the inner
    circle instead of the outer one. Tangent lines are radial.
    """
    curves = []
    tangents = []
    inner = to_inner or tuple(False for _ in surface.punctures)
    r0 = surface.inner_radius if surface.kind is SurfaceKind.ANNULUS else 0.0
    for z, down in zip(surface.punctures, inner):
        if abs(z) == 0.0:
            curves.append(Curve.polyline([z, 1.0 + 0j]))
            tangents.append(0.0)
            continue
        u = z / abs(z)
        if down:
            if surface.kind is not SurfaceKind.ANNULUS:
                raise GeometryError("only the annulus has an inner circle")
            curves.append(Curve.polyline([z, r0 * u]))
        else:
            curves.append(Curve.polyline([z, u]))
        tangents.append(cmath.phase(z))
    if surface.kind is SurfaceKind.ANNULUS:
        e = _unit(connector_angle)
        curves.append(Curve.polyline([r0 * e, e]))
    return SeparatingFamily(surface, tuple(curves), tuple(tangents)).validate()


def rotate_tangent(family: SeparatingFamily, puncture: int, theta: float) -> SeparatingFamily:
    """Turn the tangent line at a puncture by ``theta``.

    Every curve ending at the puncture gets a short new first leg leaving
    along the rotated direction and rejoining its old first segment at an
    interior point, so the rest of that segment is kept.

    Raises:
        GeometryError: if ``|theta| > pi/2``, a curve at the puncture does not
            start with a segment, or the result is not a valid family.
    """
    if abs(theta) > MAX_ROTATION:
        raise GeometryError(f"tangent rotation {theta} exceeds pi/2")
    z = family.surface.punctures[puncture]
    name = f"z{puncture}"
    curves = []
    for curve, (a, b) in zip(family.curves, family.edges):
        if name not in (a, b):
            curves.append(curve)
            continue
        forward = curve if a == name else curve.reversed()
        first = forward.pieces[0]
        if not isinstance(first, Segment):
            raise GeometryError(f"the curve at puncture {puncture} must start with a straight segment")
        knee = z + ROTATION_ARM * (first.b - z) * _unit(theta)
        join = z + 2.0 * ROTATION_ARM * (first.b - z)
        rotated = Curve((Segment(z, knee), Segment(knee, join), Segment(join, first.b)) + forward.pieces[1:])
        curves.append(rotated if a == name else rotated.reversed())
    tangents = list(family.tangents)
    tangents[puncture] += theta
    return family.with_curves(tuple(curves), tuple(tangents)).validate()


def reroute_to_puncture(family: SeparatingFamily, source: int, target: int, depth: float) -> SeparatingFamily:
    """Replace the radial curve from ``source`` to the outer circle by a curve ending at ``target``.

    The new curve leaves ``source`` radially outward, turns back around it on
    the side away from ``target``, drops to radius ``depth``, follows the chord
    to the same radius below ``target`` and rises radially into it. ``target``
    keeps its own outward radial curve, which the new curve meets from the
    opposite side. Against the radial family the curvature term changes by
    2 pi m_source when ``target`` lies counterclockwise of ``source`` and by
    -2 pi m_source otherwise.
    """
    surface = family.surface
    zs, zt = surface.punctures[source], surface.punctures[target]
    if not depth < min(abs(zs), abs(zt)):
        raise GeometryError(f"reroute depth {depth} must lie below both punctures")
    us, ut = zs / abs(zs), zt / abs(zt)
    side = 1.0 if (zt * us.conjugate()).imag >= 0.0 else -1.0
    gap = (1.0 - abs(zs)) / 2.0
    offset = min(gap, abs(zs) - depth)
    outward = abs(zs) + gap
    path = [
        zs,
        outward * us,
        (outward - 1j * side * offset) * us,
        (depth - 1j * side * offset) * us,
        depth * ut,
        zt,
    ]
    replaced = False
    curves = []
    for curve, (a, b) in zip(family.curves, family.edges):
        if {a, b} == {f"z{source}", "outer"} and not replaced:
            curves.append(Curve.polyline(path))
            replaced = True
        else:
            curves.append(curve)
    if not replaced:
        raise GeometryError(f"no curve joins puncture {source} to the outer circle")
    return family.with_curves(tuple(curves)).validate()


def _wiggled(z: complex, end: complex, sector: float, rng: np.random.Generator) -> Curve:
    """A radial connection with one random knee, leaving and arriving radially."""
    u = end - z
    leave = z + rng.uniform(0.15, 0.3) * u
    arrive = z + rng.uniform(0.7, 0.85) * u
    mid_radius = abs(z + rng.uniform(0.4, 0.6) * u)
    knee = mid_radius * _unit(cmath.phase(z) + rng.uniform(-sector, sector))
    return Curve.polyline([z, leave, knee, arrive, end])


def random_family(surface: SurfaceSpec, rng: np.random.Generator, max_tries: int = MAX_RESAMPLES) -> SeparatingFamily:
    """A random valid family on the annulus with radial tangent lines.

    Each puncture goes to a randomly chosen circle along a path with a random
    knee; the inner and outer circles are joined at a random free angle.
    Candidates are resampled until they validate.

    Raises:
        GeometryError: if no valid candidate turns up in ``max_tries`` draws.
    """
    if surface.kind is not SurfaceKind.ANNULUS:
        raise GeometryError("random families are generated on the annulus")
    r0 = surface.inner_radius
    angles = [cmath.phase(z) for z in surface.punctures]
    last_error: GeometryError | None = None
    for _ in range(max_tries):
        connector = float(rng.uniform(-math.pi, math.pi))
        all_angles = sorted(angles + [connector])
        gaps = np.diff(all_angles + [all_angles[0] + 2 * math.pi])
        if np.min(gaps) < 0.1:
            continue
        half_gap = {}
        for j, a in enumerate(angles):
            idx = all_angles.index(a)
            half_gap[j] = 0.4 * min(gaps[idx], gaps[idx - 1])
        curves = []
        for j, z in enumerate(surface.punctures):
            end = (r0 if rng.random() < 0.5 else 1.0) * z / abs(z)
            if rng.random() < 0.5:
                curves.append(Curve.polyline([z, end]))
            else:
                curves.append(_wiggled(z, end, half_gap[j], rng))
        e = _unit(connector)
        curves.append(Curve.polyline([r0 * e, e]))
        candidate = SeparatingFamily(surface, tuple(curves), tuple(angles))
        try:
            return candidate.validate()
        except GeometryError as err:
            last_error = err
    raise GeometryError(f"no valid random family after {max_tries} draws: {last_error}")


def tangent_family(surface: SurfaceSpec, tangents: tuple[float, ...] | list[float]) -> SeparatingFamily:
    """Radial family with its tangent line at puncture j turned onto ``tangents[j]``.

    Tangent lines only matter modulo pi, so each rotation is at most pi/2.
    """
    family = radial_family(surface)
    for j, target in enumerate(tangents):
        turn = (target - family.tangents[j] + math.pi / 2) % math.pi - math.pi / 2
        if abs(turn) > 1e-12:
            family = rotate_tangent(family, j, turn)
    return family
