"""Single-valued primitives of closed forms on the cut surface."""

from __future__ import annotations

from collections import deque

import numpy as np

from ..errors import PathError
from ..geometry import SurfaceKind
from ..logs import get_logger
from .family import CROSSING_TOL, SeparatingFamily
from .forms import Form

HUB_RADII = 10
HUB_ANGLES = 40
HUB_OFFSET = 0.02
INNER_CLEARANCE = 1e-9


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.real * b.imag - a.imag * b.real


def _seg_dist(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(np.abs(d) > 0, np.real((p - a) * np.conj(d)) / np.abs(d) ** 2, 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(p - (a + t * d))


class CutSurface:
    """The surface minus the curves of a family, with a base point.

    Paths are chains of straight segments through a fixed set of hub points.
    The hub graph is explored breadth first from the base point; a segment is
    usable when it meets no curve of the family and stays clear of the hole.
    """

    def __init__(self, family: SeparatingFamily, base: complex) -> None:
        self.family = family
        self.surface = family.surface
        self.base = complex(base)
        self._cut_a, self._cut_b = family.cut_segments
        if not self.surface.is_interior(self.base):
            raise PathError(f"base point {self.base} is not interior")
        if self._cut_a.size and np.min(_seg_dist(np.array([self.base]), self._cut_a, self._cut_b)) < 1e-6:
            raise PathError(f"base point {self.base} lies on a curve of the family")
        self.hubs, self.parents = self._build_hubs()

    def _candidate_hubs(self) -> np.ndarray:
        s = self.surface
        lo = s.inner_radius if s.kind is SurfaceKind.ANNULUS else 0.0
        radii = lo + (1.0 - lo) * (np.arange(HUB_RADII) + 0.5) / HUB_RADII
        if s.kind is SurfaceKind.HALF_DISK:
            angles = np.pi * (np.arange(HUB_ANGLES) + 0.5) / HUB_ANGLES
        else:
            angles = 2.0 * np.pi * np.arange(HUB_ANGLES) / HUB_ANGLES
        grid = (radii[:, None] * np.exp(1j * angles[None, :])).ravel()
        near = []
        a, b = self._cut_a, self._cut_b
        if a.size:
            mid = (a + b) / 2.0
            normal = 1j * (b - a) / np.abs(b - a)
            near.extend([mid + HUB_OFFSET * normal, mid - HUB_OFFSET * normal])
            for z in s.punctures:
                near.append(z + HUB_OFFSET * np.exp(2j * np.pi * np.arange(8) / 8 + 0.1))
        pts = np.concatenate([np.array([self.base]), grid] + near)
        keep = np.array([s.is_interior(complex(p), tol=1e-6) for p in pts])
        pts = pts[keep]
        if a.size:
            dist = np.min(_seg_dist(pts[:, None], a[None, :], b[None, :]), axis=1)
            pts = pts[dist > 1e-6]
        return pts

    def visible(self, p: complex, qs: np.ndarray) -> np.ndarray:
        """Mask of the points ``qs`` joined to ``p`` by a usable straight segment."""
        qs = np.asarray(qs, dtype=complex)
        ok = np.ones(qs.shape, dtype=bool)
        if self.surface.kind is SurfaceKind.ANNULUS:
            ok &= _seg_dist(np.zeros_like(qs), np.full(qs.shape, p), qs) > self.surface.inner_radius + INNER_CLEARANCE
        a, b = self._cut_a, self._cut_b
        if a.size == 0:
            return ok
        P = np.full(qs.shape, p)[:, None]
        Q = qs[:, None]
        A = a[None, :]
        B = b[None, :]
        d1 = _cross(Q - P, A - P)
        d2 = _cross(Q - P, B - P)
        d3 = _cross(B - A, P - A)
        d4 = _cross(B - A, Q - A)
        proper = (d1 * d2 < 0) & (d3 * d4 < 0)
        touching = (
            (_seg_dist(A, P, Q) <= CROSSING_TOL)
            | (_seg_dist(B, P, Q) <= CROSSING_TOL)
            | (_seg_dist(P, A, B) <= CROSSING_TOL)
            | (_seg_dist(Q, A, B) <= CROSSING_TOL)
        )
        return ok & ~np.any(proper | touching, axis=1)

    def _build_hubs(self) -> tuple[np.ndarray, np.ndarray]:
        pts = self._candidate_hubs()
        parents = np.full(pts.size, -2, dtype=int)
        parents[0] = -1
        order = [0]
        queue = deque([0])
        while queue:
            i = queue.popleft()
            todo = np.flatnonzero(parents == -2)
            if todo.size == 0:
                break
            seen = self.visible(complex(pts[i]), pts[todo])
            for j in todo[seen]:
                parents[j] = i
                order.append(int(j))
                queue.append(int(j))
        reached = np.array(order)
        remap = {old: new for new, old in enumerate(order)}
        hubs = pts[reached]
        new_parents = np.array([-1 if parents[o] == -1 else remap[int(parents[o])] for o in order])
        get_logger().debug(
            "Cut surface hubs", {"candidates": int(pts.size), "reached": int(hubs.size), "curves": len(self.family.curves)}
        )
        return hubs, new_parents

    def hub_values(self, form: Form) -> np.ndarray:
        values = np.zeros(self.hubs.size)
        for i in range(1, self.hubs.size):
            j = self.parents[i]
            values[i] = values[j] + form.segment_integral(complex(self.hubs[j]), complex(self.hubs[i]))
        return values

    def nearest_hub(self, point: complex) -> int:
        """Index of the closest hub that sees ``point``.

        Raises:
            PathError: if no hub sees the point.
        """
        order = np.argsort(np.abs(self.hubs - point))
        seen = self.visible(complex(point), self.hubs[order])
        if not np.any(seen):
            raise PathError(f"no path inside the cut surface reaches {point}")
        return int(order[np.argmax(seen)])

    def primitive(self, form: Form, points, hub_values: np.ndarray | None = None) -> np.ndarray:
        """I(point) = integral of ``form`` from the base point inside the cut surface."""
        values = self.hub_values(form) if hub_values is None else hub_values
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        out = np.empty(pts.size)
        for n, p in enumerate(pts):
            h = self.nearest_hub(complex(p))
            out[n] = values[h] + form.segment_integral(complex(self.hubs[h]), complex(p))
        return out

    def circle_cut_angles(self, radius: float) -> np.ndarray:
        """Angles in [0, 2 pi) where the curves meet the circle |z| = radius."""
        a, b = self._cut_a, self._cut_b
        out: list[float] = []
        for p, q in zip(a, b):
            d = q - p
            # |p + t d|^2 = radius^2
            A = abs(d) ** 2
            B = 2.0 * (p * np.conj(d)).real
            C = abs(p) ** 2 - radius**2
            disc = B * B - 4 * A * C
            if disc < 0:
                continue
            for t in ((-B - np.sqrt(disc)) / (2 * A), (-B + np.sqrt(disc)) / (2 * A)):
                if -1e-12 <= t <= 1.0 + 1e-12:
                    out.append(float(np.angle(p + t * d)) % (2.0 * np.pi))
        return np.unique(np.round(np.array(out), 13)) if out else np.zeros(0)


def primitive(form: Form, family: SeparatingFamily, base: complex, point) -> np.ndarray:
    """I^delta at one or more points."""
    return CutSurface(family, base).primitive(form, point)


def primitive_jump(form: Form, family: SeparatingFamily, base: complex, index: int, offset: float = 1e-6) -> float:
    """I on the left of curve ``index`` minus I on its right, at the curve's midpoint.

    The two sides are sampled ``offset`` away from the curve and the integral
    of the form across that short gap is removed, so only the jump remains.
    """
    cut = CutSurface(family, base)
    p, n = family.curves[index].midpoint()
    left_point, right_point = p + offset * n, p - offset * n
    left, right = cut.primitive(form, [left_point, right_point])
    return float(left - right - form.segment_integral(right_point, left_point))
