"""Separating families of curves and their incidence trees."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import GeometryError
from ..geometry import Arc, Curve, Segment, SurfaceKind, SurfaceSpec, make_surface, point_segment_distance, segments_intersect
from ..geometry.curves import segment_min_radius
from .forms import Form

ENDPOINT_TOL = 1e-9
ANGLE_TOL = 1e-8
CROSSING_TOL = 1e-10


@dataclass(frozen=True)
class SeparatingFamily:
    """Curves d_i cutting the surface into a simply connected piece.

    ``tangents[j]`` is the angle of the tangent line v_j at puncture j; curves
    ending at the puncture must leave it along +v_j or -v_j.
    """

    surface: SurfaceSpec
    curves: tuple[Curve, ...]
    tangents: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.tangents) != len(self.surface.punctures):
            raise GeometryError(
                f"{len(self.tangents)} tangent angles given for {len(self.surface.punctures)} punctures"
            )

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.surface.boundary_circles + tuple(f"z{j}" for j in range(len(self.surface.punctures)))

    def vertex_of(self, p: complex) -> str:
        for j, z in enumerate(self.surface.punctures):
            if abs(p - z) < ENDPOINT_TOL:
                return f"z{j}"
        r = abs(p)
        match self.surface.kind:
            case SurfaceKind.DISK:
                if abs(r - 1.0) < ENDPOINT_TOL:
                    return "outer"
            case SurfaceKind.ANNULUS:
                if abs(r - 1.0) < ENDPOINT_TOL:
                    return "outer"
                if abs(r - self.surface.inner_radius) < ENDPOINT_TOL:
                    return "inner"
            case SurfaceKind.HALF_DISK:
                if abs(r - 1.0) < ENDPOINT_TOL or abs(p.imag) < ENDPOINT_TOL:
                    return "outer"
        raise GeometryError(f"curve endpoint {p} is neither on the boundary nor at a puncture")

    @cached_property
    def edges(self) -> tuple[tuple[str, str], ...]:
        return tuple((self.vertex_of(c.start), self.vertex_of(c.end)) for c in self.curves)

    def validate(self) -> "SeparatingFamily":
        """Check every structural condition; returns ``self`` so calls chain.

        Raises:
            GeometryError: naming the first violated condition.
        """
        if not self.surface.is_two_dimensional:
            raise GeometryError(f"separating families need a two-dimensional surface, got {self.surface.kind.value}")
        self._check_tree()
        self._check_endpoints()
        self._check_inside()
        self._check_disjoint()
        return self

    def _check_tree(self) -> None:
        names = self.vertices
        parent = {v: v for v in names}

        def find(v: str) -> str:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        if len(self.curves) != len(names) - 1:
            raise GeometryError(f"{len(self.curves)} curves cannot form a tree on {len(names)} vertices")
        for i, (a, b) in enumerate(self.edges):
            ra, rb = find(a), find(b)
            if ra == rb:
                raise GeometryError(f"curve {i} ({a} -> {b}) closes a cycle in the incidence graph")
            parent[ra] = rb

    def _boundary_normal(self, p: complex) -> complex:
        if self.surface.kind is SurfaceKind.HALF_DISK and abs(p.imag) < ENDPOINT_TOL and abs(abs(p) - 1.0) >= ENDPOINT_TOL:
            return -1j
        if self.surface.kind is SurfaceKind.ANNULUS and abs(abs(p) - self.surface.inner_radius) < ENDPOINT_TOL:
            return -p / abs(p)
        return p / abs(p)

    def _check_endpoints(self) -> None:
        leaving: dict[int, list[complex]] = {}
        for i, curve in enumerate(self.curves):
            ends = ((curve.start, -curve.tangent_at_start()), (curve.end, curve.tangent_at_end()))
            for (p, outward), name in zip(ends, self.edges[i]):
                if name.startswith("z"):
                    leaving.setdefault(int(name[1:]), []).append(-outward)
                    continue
                if self.surface.kind is SurfaceKind.HALF_DISK and abs(abs(p) - 1.0) < ENDPOINT_TOL and abs(p.imag) < ENDPOINT_TOL:
                    raise GeometryError(f"curve {i} ends at the corner {p}")
                nu = self._boundary_normal(p)
                if abs((outward / nu).imag) > ANGLE_TOL or (outward / nu).real <= 0:
                    raise GeometryError(f"curve {i} does not meet the boundary orthogonally at {p}")
        for j, directions in leaving.items():
            v = complex(math.cos(self.tangents[j]), math.sin(self.tangents[j]))
            if len(directions) > 2:
                raise GeometryError(f"{len(directions)} curves end at puncture {j}; at most two fit the tangent line")
            signs = []
            for u in directions:
                ratio = u / v
                if abs(ratio.imag) > ANGLE_TOL:
                    raise GeometryError(f"a curve leaves puncture {j} off its tangent line")
                signs.append(ratio.real > 0)
            if len(signs) == 2 and signs[0] == signs[1]:
                raise GeometryError(f"two curves leave puncture {j} in the same direction")

    def _check_inside(self) -> None:
        r0 = self.surface.inner_radius if self.surface.kind is SurfaceKind.ANNULUS else None
        for i, poly in enumerate(self.polylines):
            for p in poly:
                if not self.surface.contains(p, tol=ENDPOINT_TOL):
                    raise GeometryError(f"curve {i} leaves the surface at {p}")
            for p in poly[1:-1]:
                if not self.surface.is_interior(p, tol=0.0):
                    raise GeometryError(f"curve {i} touches the boundary at the interior point {p}")
            if r0 is not None:
                for a, b in zip(poly, poly[1:]):
                    if segment_min_radius(a, b) < r0 - ENDPOINT_TOL:
                        raise GeometryError(f"curve {i} crosses the inner boundary between {a} and {b}")
            for j, z in enumerate(self.surface.punctures):
                if f"z{j}" in self.edges[i]:
                    continue
                if any(point_segment_distance(z, a, b) < ENDPOINT_TOL for a, b in zip(poly, poly[1:])):
                    raise GeometryError(f"curve {i} passes through puncture {j}")

    def _check_disjoint(self) -> None:
        polys = self.polylines
        for i, poly in enumerate(polys):
            segs = list(zip(poly, poly[1:]))
            for s in range(len(segs)):
                for t in range(s + 2, len(segs)):
                    if segments_intersect(*segs[s], *segs[t], tol=CROSSING_TOL):
                        raise GeometryError(f"curve {i} intersects itself")
        for i in range(len(polys)):
            for j in range(i):
                shared = set(self.edges[i]) & set(self.edges[j])
                shared_points = [
                    self.surface.punctures[int(v[1:])] for v in shared if v.startswith("z")
                ]
                for a, b in zip(polys[i], polys[i][1:]):
                    for c, d in zip(polys[j], polys[j][1:]):
                        if not segments_intersect(a, b, c, d, tol=CROSSING_TOL):
                            continue
                        if any(_has_endpoint(a, b, p) and _has_endpoint(c, d, p) for p in shared_points):
                            continue
                        raise GeometryError(f"curves {i} and {j} intersect")

    @cached_property
    def polylines(self) -> tuple[tuple[complex, ...], ...]:
        return tuple(tuple(c.vertices()) for c in self.curves)

    @cached_property
    def cut_segments(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoints of every chord of every curve, as two complex arrays."""
        a = [p for poly in self.polylines for p in poly[:-1]]
        b = [p for poly in self.polylines for p in poly[1:]]
        return np.array(a, dtype=complex), np.array(b, dtype=complex)

    def start_component(self, index: int) -> set[str]:
        """Vertices reachable from the start of curve ``index`` once it is removed."""
        adjacency: dict[str, list[str]] = {v: [] for v in self.vertices}
        for i, (a, b) in enumerate(self.edges):
            if i != index:
                adjacency[a].append(b)
                adjacency[b].append(a)
        start = self.edges[index][0]
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def with_curves(self, curves: tuple[Curve, ...], tangents: tuple[float, ...] | None = None) -> "SeparatingFamily":
        return SeparatingFamily(self.surface, tuple(curves), self.tangents if tangents is None else tuple(tangents))


def _has_endpoint(a: complex, b: complex, p: complex) -> bool:
    return abs(a - p) < ENDPOINT_TOL or abs(b - p) < ENDPOINT_TOL


def vertex_cycle(form: Form, name: str) -> float:
    """Integral of ``form`` over the dual boundary of a tree vertex.

    Boundary circles use the boundary orientation; a puncture contributes the
    clockwise loop around it.
    """
    if name.startswith("z"):
        return -form.windings[int(name[1:])]
    return form.boundary_cycles()[name]


def dual_cycle_integrals(form: Form, family: SeparatingFamily) -> list[float]:
    """Integral of ``form`` over each dual cycle e_i.

    e_i crosses d_i once, from its left side to its right side.
    """
    return [
        float(sum(vertex_cycle(form, v) for v in family.start_component(i)))
        for i in range(len(family.curves))
    ]


def describe_family(family: SeparatingFamily) -> str:
    """Plain-text form: header lines for the surface, then one curve per line."""
    s = family.surface
    lines = ["# ciltlab separating family"]
    lines.append(f"surface {s.kind.value}" + (f" {s.inner_radius!r}" if s.inner_radius is not None else ""))
    for z, t in zip(s.punctures, family.tangents):
        lines.append(f"puncture {z.real!r} {z.imag!r} {t!r}")
    for curve in family.curves:
        parts = []
        for piece in curve.pieces:
            if isinstance(piece, Segment):
                parts.append(f"S {piece.a.real!r} {piece.a.imag!r} {piece.b.real!r} {piece.b.imag!r}")
            elif isinstance(piece, Arc):
                c = complex(piece.center)
                parts.append(f"A {c.real!r} {c.imag!r} {piece.radius!r} {piece.theta0!r} {piece.sweep!r}")
            else:
                raise TypeError(f"cannot serialize piece of type {type(piece).__name__}")
        lines.append("curve " + " | ".join(parts))
    return "\n".join(lines) + "\n"


def parse_family(text: str, validate: bool = True) -> SeparatingFamily:
    """Inverse of ``describe_family``.

    Raises:
        GeometryError: on malformed lines or an invalid family.
    """
    kind, inner = None, None
    punctures: list[complex] = []
    tangents: list[float] = []
    curves: list[Curve] = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        try:
            match head:
                case "surface":
                    fields = rest.split()
                    kind = fields[0]
                    inner = float(fields[1]) if len(fields) > 1 else None
                case "puncture":
                    x, y, t = (float(v) for v in rest.split())
                    punctures.append(complex(x, y))
                    tangents.append(t)
                case "curve":
                    curves.append(Curve(tuple(_parse_piece(p) for p in rest.split("|"))))
                case _:
                    raise GeometryError(f"line {n}: unknown record {head!r}")
        except (ValueError, IndexError) as e:
            raise GeometryError(f"line {n}: malformed {head} record: {e}") from e
    if kind is None:
        raise GeometryError("family description has no surface line")
    family = SeparatingFamily(make_surface(kind, inner, punctures), tuple(curves), tuple(tangents))
    return family.validate() if validate else family


def _parse_piece(text: str):
    tag, *values = text.split()
    v = [float(x) for x in values]
    match tag:
        case "S":
            return Segment(complex(v[0], v[1]), complex(v[2], v[3]))
        case "A":
            return Arc(complex(v[0], v[1]), v[2], v[3], v[4])
    raise ValueError(f"unknown piece tag {tag!r}")
