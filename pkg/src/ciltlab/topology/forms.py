"""Closed 1-forms on flat surfaces with closed-form line integrals.

A ``PoleForm`` is omega = (1/2 pi) Im(F(w) dw) with F(w) = sum_j c_j / (w - a_j)
and real residues c_j. Its line integrals are sums of argument increments, so
paths never need numerical quadrature. The disk and annulus harmonic
representatives are pole forms whose image poles sit outside the surface.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import Callable, override

import numpy as np

from ..errors import PathError
from ..geometry import SurfaceKind, SurfaceSpec

POLE_TOL = 1e-12
IMAGE_TAIL = 1e-12
MAX_IMAGE_ORDER = 200


class Form(ABC):
    """A closed 1-form on a punctured flat surface."""

    surface: SurfaceSpec

    @abstractmethod
    def evaluate(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Components (omega_x, omega_y) at the points ``z``."""
        ...

    @abstractmethod
    def segment_integral(self, u: complex, v: complex) -> float:
        """Integral along the straight segment from ``u`` to ``v``."""
        ...

    @abstractmethod
    def circle_increments(self, radius: float, theta_ref: float, thetas: np.ndarray) -> np.ndarray:
        """Integral along |w| = radius, counterclockwise from ``theta_ref`` to each theta.

        Angles are taken literally (no reduction mod 2 pi), so the result is
        continuous in theta.
        """
        ...

    @abstractmethod
    def circle_cycle(self, radius: float) -> float:
        """Integral over the full counterclockwise circle |w| = radius."""
        ...

    @property
    @abstractmethod
    def windings(self) -> tuple[float, ...]:
        """Cycle around each puncture of ``surface``, counterclockwise."""
        ...

    def path_integral(self, points: list[complex]) -> float:
        return sum(self.segment_integral(a, b) for a, b in zip(points, points[1:]))

    def boundary_cycles(self) -> dict[str, float]:
        """Cycles of the boundary circles in the boundary orientation."""
        out = {"outer": self.circle_cycle(1.0)}
        if self.surface.kind is SurfaceKind.ANNULUS:
            out["inner"] = -self.circle_cycle(self.surface.inner_radius)
        return out

    def cycles(self) -> dict[str, float]:
        """Named homology generators mapped to the integrals of the form."""
        out = {f"z{i}": m for i, m in enumerate(self.windings)}
        out["outer"] = self.circle_cycle(1.0)
        if self.surface.kind is SurfaceKind.ANNULUS:
            out["inner"] = self.circle_cycle(self.surface.inner_radius)
        return out

    def neumann_residual(self, n: int = 256) -> float:
        """Largest normal component i_nu omega on the boundary circles."""
        t = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        radii = [1.0] + ([self.surface.inner_radius] if self.surface.kind is SurfaceKind.ANNULUS else [])
        worst = 0.0
        for s in radii:
            z = s * np.exp(1j * t)
            ox, oy = self.evaluate(z)
            normal = np.exp(1j * t)
            worst = max(worst, float(np.max(np.abs(ox * normal.real + oy * normal.imag))))
        return worst

    def __add__(self, other: "Form") -> "Form":
        return FormSum(((1.0, self), (1.0, other)))

    def __rmul__(self, c: float) -> "Form":
        return FormSum(((float(c), self),))


class PoleForm(Form):
    def __init__(
        self,
        surface: SurfaceSpec,
        poles: np.ndarray,
        residues: np.ndarray,
        windings: tuple[float, ...],
    ) -> None:
        self.surface = surface
        self.poles = np.asarray(poles, dtype=complex)
        self.residues = np.asarray(residues, dtype=float)
        self._windings = tuple(windings)

    @property
    @override
    def windings(self) -> tuple[float, ...]:
        return self._windings

    def complex_density(self, z: np.ndarray) -> np.ndarray:
        """F(z) = sum c_j / (z - a_j)."""
        z = np.asarray(z, dtype=complex)
        return np.sum(self.residues / (z[..., None] - self.poles), axis=-1)

    @override
    def evaluate(self, z):
        f = self.complex_density(z) / (2.0 * np.pi)
        return np.imag(f), np.real(f)

    @override
    def segment_integral(self, u: complex, v: complex) -> float:
        if self.poles.size == 0 or u == v:
            return 0.0
        d = v - u
        t = np.clip(np.real((self.poles - u) * np.conj(d)) / abs(d) ** 2, 0.0, 1.0)
        if np.any(np.abs(self.poles - (u + t * d)) < POLE_TOL):
            raise PathError(f"segment {u} -> {v} passes through a pole of the form")
        increments = np.angle((v - self.poles) / (u - self.poles))
        return float(np.sum(self.residues * increments) / (2.0 * np.pi))

    def _branch(self, radius: float, thetas: np.ndarray) -> np.ndarray:
        """Continuous arguments of (w - a_j) along the circle, shape (n, poles)."""
        thetas = np.asarray(thetas, dtype=float)[..., None]
        a = self.poles
        inside = np.abs(a) < radius
        if np.any(np.abs(np.abs(a) - radius) < POLE_TOL):
            raise PathError(f"the circle of radius {radius} passes through a pole of the form")
        e = np.exp(1j * thetas)
        with np.errstate(divide="ignore", invalid="ignore"):
            in_part = thetas + np.angle(1.0 - (a / radius) / e)
            out_part = np.angle(1.0 - radius * e / np.where(inside, 1.0, a))
        return np.where(inside, in_part, out_part)

    @override
    def circle_increments(self, radius, theta_ref, thetas):
        if self.poles.size == 0:
            return np.zeros(np.shape(thetas))
        ref = self._branch(radius, np.array([theta_ref]))[0]
        phi = self._branch(radius, thetas)
        return np.sum(self.residues * (phi - ref), axis=-1) / (2.0 * np.pi)

    @override
    def circle_cycle(self, radius: float) -> float:
        return float(np.sum(self.residues[np.abs(self.poles) < radius]))

    def winding_angle(self, z: np.ndarray, base: complex, at_pole: np.ndarray | None = None) -> np.ndarray:
        """2 pi times the primitive from ``base``, up to 2 pi sum n_j c_j with integers n_j.

        Exact for e^{i c 2 pi I(z)} whenever every c c_j is an integer: the
        path-dependent part drops out and no cut surface is needed. A point on
        a pole takes the argument of that pole from ``at_pole`` (the tangent
        direction it is approached along).
        """
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if self.poles.size == 0:
            return np.zeros(z.shape)
        offset = z[:, None] - self.poles[None, :]
        on_pole = np.abs(offset) < POLE_TOL
        angles = np.angle(offset)
        if np.any(on_pole):
            if at_pole is None:
                raise PathError("a point sits on a pole and no approach direction was given")
            approach = np.broadcast_to(np.asarray(at_pole, dtype=float)[:, None], offset.shape)
            angles = np.where(on_pole, approach, angles)
        ref = np.angle(complex(base) - self.poles)
        return np.sum(self.residues * (angles - ref), axis=-1)

    def potential(self, z: np.ndarray) -> np.ndarray:
        """psi with omega = *d psi: (1/2 pi) sum c_j log|w - a_j|, far poles normalized."""
        z = np.asarray(z, dtype=complex)[..., None]
        far = np.abs(self.poles) > 4.0
        safe = np.where(far, self.poles, 1.0)
        near_log = np.log(np.abs(z - self.poles))
        far_log = np.log(np.abs(1.0 - z / safe))
        return np.sum(self.residues * np.where(far, far_log, near_log), axis=-1) / (2.0 * np.pi)

    def potential_gradient(self, z: np.ndarray) -> np.ndarray:
        """Gradient of psi as a complex vector; equals conj(F)/(2 pi)."""
        return np.conj(self.complex_density(z)) / (2.0 * np.pi)

    def regular_part(self, index: int) -> float:
        """psi(z_i) with the puncture's own logarithm removed."""
        z = self.surface.punctures[index]
        keep = np.abs(self.poles - z) > POLE_TOL
        sub = PoleForm(self.surface, self.poles[keep], self.residues[keep], ())
        return float(sub.potential(np.array([z]))[0])

    def scaled(self, c: float) -> "PoleForm":
        return PoleForm(self.surface, self.poles, c * self.residues, tuple(c * m for m in self._windings))

    def plus(self, other: "PoleForm") -> "PoleForm":
        return PoleForm(
            self.surface,
            np.concatenate([self.poles, other.poles]),
            np.concatenate([self.residues, other.residues]),
            tuple(a + b for a, b in zip(self._windings, other._windings)),
        )

    @override
    def __add__(self, other: Form) -> Form:
        if isinstance(other, PoleForm):
            return self.plus(other)
        return super().__add__(other)

    @override
    def __rmul__(self, c: float) -> Form:
        return self.scaled(float(c))


class ExactForm(Form):
    """omega = df for a smooth function f with known gradient."""

    def __init__(
        self,
        surface: SurfaceSpec,
        f: Callable[[np.ndarray], np.ndarray],
        grad: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    ) -> None:
        self.surface = surface
        self.f = f
        self.grad = grad

    @property
    @override
    def windings(self) -> tuple[float, ...]:
        return tuple(0.0 for _ in self.surface.punctures)

    @override
    def evaluate(self, z):
        return self.grad(np.asarray(z, dtype=complex))

    def value(self, z: complex) -> float:
        return float(self.f(np.array([z], dtype=complex))[0])

    @override
    def segment_integral(self, u, v):
        return self.value(v) - self.value(u)

    @override
    def circle_increments(self, radius, theta_ref, thetas):
        ref = self.value(radius * complex(math.cos(theta_ref), math.sin(theta_ref)))
        return self.f(radius * np.exp(1j * np.asarray(thetas))) - ref

    @override
    def circle_cycle(self, radius):
        return 0.0


class FormSum(Form):
    def __init__(self, terms: tuple[tuple[float, Form], ...]) -> None:
        if not terms:
            raise ValueError("a form sum needs at least one term")
        self.terms = terms
        self.surface = terms[0][1].surface

    @property
    @override
    def windings(self) -> tuple[float, ...]:
        out = [0.0] * len(self.surface.punctures)
        for c, form in self.terms:
            for i, m in enumerate(form.windings):
                out[i] += c * m
        return tuple(out)

    @override
    def evaluate(self, z):
        parts = [(c, form.evaluate(z)) for c, form in self.terms]
        return sum(c * p[0] for c, p in parts), sum(c * p[1] for c, p in parts)

    @override
    def segment_integral(self, u, v):
        return sum(c * form.segment_integral(u, v) for c, form in self.terms)

    @override
    def circle_increments(self, radius, theta_ref, thetas):
        return sum(c * form.circle_increments(radius, theta_ref, thetas) for c, form in self.terms)

    @override
    def circle_cycle(self, radius):
        return sum(c * form.circle_cycle(radius) for c, form in self.terms)


def zero_form(surface: SurfaceSpec) -> PoleForm:
    return PoleForm(surface, np.zeros(0, dtype=complex), np.zeros(0), tuple(0 for _ in surface.punctures))


def image_order(inner_radius: float, tail: float = IMAGE_TAIL) -> int:
    """Number of reflection generations needed for the annulus image series."""
    n = math.ceil(math.log(tail) / (2.0 * math.log(inner_radius)))
    return max(1, min(n, MAX_IMAGE_ORDER))


def disk_form(surface: SurfaceSpec, m: list[int] | tuple[int, ...]) -> PoleForm:
    """Harmonic Neumann representative on the flat unit disk."""
    poles, residues = [], []
    for z, mi in zip(surface.punctures, m):
        if mi == 0:
            continue
        poles.append(z)
        residues.append(float(mi))
        if abs(z) > 0.0:
            poles.append(1.0 / np.conj(z))
            residues.append(-float(mi))
    return PoleForm(surface, np.array(poles, dtype=complex), np.array(residues), tuple(float(x) for x in m))


def annulus_form(surface: SurfaceSpec, m: list[int] | tuple[int, ...], k: int) -> PoleForm:
    """Harmonic Neumann representative on the annulus with inner cycle ``k``.

    Images under the two boundary reflections: r^{2n} z with the puncture's
    residue and r^{2n} / conj(z) with the opposite residue, n in [-N, N].
    """
    r0 = surface.inner_radius
    order = image_order(r0)
    poles: list[complex] = []
    residues: list[float] = []
    if k != 0:
        poles.append(0j)
        residues.append(float(k))
    for z, mi in zip(surface.punctures, m):
        if mi == 0:
            continue
        for n in range(-order, order + 1):
            scale = r0 ** (2 * n)
            poles.append(scale * z)
            residues.append(float(mi))
            poles.append(scale / np.conj(z))
            residues.append(-float(mi))
    return PoleForm(surface, np.array(poles, dtype=complex), np.array(residues), tuple(float(x) for x in m))
