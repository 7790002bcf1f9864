"""Piecewise curves made of straight segments and circular arcs."""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import override

import numpy as np

ARC_CHORDS = 128


def wrap_angle(x: float) -> float:
    """Representative of ``x`` in (-pi, pi]."""
    y = math.fmod(x + math.pi, 2 * math.pi)
    if y <= 0:
        y += 2 * math.pi
    return y - math.pi


class Piece(ABC):
    @property
    @abstractmethod
    def start(self) -> complex: ...

    @property
    @abstractmethod
    def end(self) -> complex: ...

    @abstractmethod
    def tangent_at_start(self) -> complex:
        """Unit tangent (as a complex number) leaving ``start``."""
        ...

    @abstractmethod
    def tangent_at_end(self) -> complex: ...

    @property
    @abstractmethod
    def length(self) -> float: ...

    @property
    @abstractmethod
    def swept_angle(self) -> float:
        """Integral of the signed curvature (left turns positive)."""
        ...

    @abstractmethod
    def vertices(self) -> list[complex]:
        """Polyline approximation from ``start`` to ``end`` inclusive."""
        ...

    @abstractmethod
    def nodes(self, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Gauss-Legendre nodes, arc-length weights and left unit normals."""
        ...

    @abstractmethod
    def reversed(self) -> "Piece": ...


@dataclass(frozen=True)
class Segment(Piece):
    a: complex
    b: complex

    @property
    @override
    def start(self) -> complex:
        return self.a

    @property
    @override
    def end(self) -> complex:
        return self.b

    @override
    def tangent_at_start(self) -> complex:
        d = self.b - self.a
        return d / abs(d)

    @override
    def tangent_at_end(self) -> complex:
        return self.tangent_at_start()

    @property
    @override
    def length(self) -> float:
        return abs(self.b - self.a)

    @property
    @override
    def swept_angle(self) -> float:
        return 0.0

    @override
    def vertices(self) -> list[complex]:
        return [self.a, self.b]

    @override
    def nodes(self, n):
        x, w = np.polynomial.legendre.leggauss(n)
        t = (x + 1.0) / 2.0
        pts = self.a + t * (self.b - self.a)
        weights = w / 2.0 * self.length
        normal = 1j * self.tangent_at_start()
        return pts, weights, np.full(n, normal)

    @override
    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)


@dataclass(frozen=True)
class Arc(Piece):
    """Arc of the circle |z - center| = radius from angle ``theta0`` sweeping ``sweep``."""

    center: complex
    radius: float
    theta0: float
    sweep: float

    def point(self, theta: float | np.ndarray) -> complex | np.ndarray:
        return self.center + self.radius * np.exp(1j * np.asarray(theta))

    @property
    @override
    def start(self) -> complex:
        return complex(self.point(self.theta0))

    @property
    @override
    def end(self) -> complex:
        return complex(self.point(self.theta0 + self.sweep))

    def _tangent(self, theta: float) -> complex:
        return complex(1j * np.exp(1j * theta) * math.copysign(1.0, self.sweep))

    @override
    def tangent_at_start(self) -> complex:
        return self._tangent(self.theta0)

    @override
    def tangent_at_end(self) -> complex:
        return self._tangent(self.theta0 + self.sweep)

    @property
    @override
    def length(self) -> float:
        return abs(self.sweep) * self.radius

    @property
    @override
    def swept_angle(self) -> float:
        return self.sweep

    @override
    def vertices(self) -> list[complex]:
        thetas = self.theta0 + self.sweep * np.linspace(0.0, 1.0, ARC_CHORDS + 1)
        return [complex(p) for p in self.point(thetas)]

    @override
    def nodes(self, n):
        x, w = np.polynomial.legendre.leggauss(n)
        thetas = self.theta0 + self.sweep * (x + 1.0) / 2.0
        pts = self.point(thetas)
        weights = w / 2.0 * self.length
        tangent = 1j * np.exp(1j * thetas) * math.copysign(1.0, self.sweep)
        return pts, weights, 1j * tangent

    @override
    def reversed(self) -> "Arc":
        return Arc(self.center, self.radius, self.theta0 + self.sweep, -self.sweep)


@dataclass(frozen=True)
class Curve:
    """A connected chain of pieces."""

    pieces: tuple[Piece, ...]

    def __post_init__(self) -> None:
        if not self.pieces:
            raise ValueError("a curve needs at least one piece")
        for p, q in zip(self.pieces, self.pieces[1:]):
            if abs(p.end - q.start) > 1e-12:
                raise ValueError(f"curve pieces do not join: {p.end} != {q.start}")

    @classmethod
    def polyline(cls, points: list[complex] | tuple[complex, ...]) -> "Curve":
        pts = [complex(p) for p in points]
        if len(pts) < 2:
            raise ValueError("a polyline needs at least two points")
        return cls(tuple(Segment(a, b) for a, b in zip(pts, pts[1:])))

    @property
    def start(self) -> complex:
        return self.pieces[0].start

    @property
    def end(self) -> complex:
        return self.pieces[-1].end

    @property
    def length(self) -> float:
        return sum(p.length for p in self.pieces)

    def tangent_at_start(self) -> complex:
        return self.pieces[0].tangent_at_start()

    def tangent_at_end(self) -> complex:
        return self.pieces[-1].tangent_at_end()

    def kink_angles(self) -> list[float]:
        out = []
        for p, q in zip(self.pieces, self.pieces[1:]):
            out.append(wrap_angle(np.angle(q.tangent_at_start() / p.tangent_at_end())))
        return out

    def turning(self) -> float:
        """Total signed turning: kinks plus arc sweeps (flat geodesic curvature integral)."""
        return sum(self.kink_angles()) + sum(p.swept_angle for p in self.pieces)

    def vertices(self) -> list[complex]:
        out = [self.start]
        for p in self.pieces:
            out.extend(p.vertices()[1:])
        return out

    def nodes(self, n_per_piece: int = 32) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        parts = [p.nodes(n_per_piece) for p in self.pieces]
        return (
            np.concatenate([p[0] for p in parts]),
            np.concatenate([p[1] for p in parts]),
            np.concatenate([p[2] for p in parts]),
        )

    def midpoint(self) -> tuple[complex, complex]:
        """A point near the middle of the curve and the left normal there."""
        piece = self.pieces[len(self.pieces) // 2]
        pts, _, normals = piece.nodes(1)
        return complex(pts[0]), complex(normals[0])

    def reversed(self) -> "Curve":
        return Curve(tuple(p.reversed() for p in reversed(self.pieces)))


def segments_intersect(p1: complex, p2: complex, q1: complex, q2: complex, tol: float = 1e-10) -> bool:
    """Whether the closed segments [p1, p2] and [q1, q2] meet (within ``tol``)."""

    def cross(a: complex, b: complex) -> float:
        return a.real * b.imag - a.imag * b.real

    d1 = cross(p2 - p1, q1 - p1)
    d2 = cross(p2 - p1, q2 - p1)
    d3 = cross(q2 - q1, p1 - q1)
    d4 = cross(q2 - q1, p2 - q1)
    if ((d1 > tol and d2 < -tol) or (d1 < -tol and d2 > tol)) and ((d3 > tol and d4 < -tol) or (d3 < -tol and d4 > tol)):
        return True
    return (
        point_segment_distance(q1, p1, p2) <= tol
        or point_segment_distance(q2, p1, p2) <= tol
        or point_segment_distance(p1, q1, q2) <= tol
        or point_segment_distance(p2, q1, q2) <= tol
    )


def point_segment_distance(z: complex, a: complex, b: complex) -> float:
    d = b - a
    if abs(d) == 0.0:
        return abs(z - a)
    t = ((z - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * d))


def segment_min_radius(a: complex, b: complex) -> float:
    """Smallest |z| over the segment [a, b]."""
    return point_segment_distance(0j, a, b)
