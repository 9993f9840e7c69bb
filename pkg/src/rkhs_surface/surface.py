"""Real Riemann surfaces in the Jacobian chart: descriptors, involution, ovals.

Points live on the universal cover (lifted coordinates); the involution acts
as plain coordinate conjugation and lattice reduction is applied only when
classifying points or testing equivalence.
"""

from __future__ import annotations

import json

import numpy as np
from jsonschema import ValidationError
from jsonschema import validate as _js_validate

from .theta import RiemannMatrix

CLASS_TOL = 1e-9


class SurfaceFormatError(ValueError):
    """Document does not match the surface schema."""


class InvariantError(ValueError):
    """A structural invariant fails; message carries the residual."""


class SurfacePoint:
    """Point in lifted Jacobian coordinates (genus 0 uses the plane itself)."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        arr = np.atleast_1d(np.asarray(coords, dtype=complex)).copy()
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("coords must be a nonempty vector")
        arr.setflags(write=False)
        self.coords = arr

    @property
    def z(self) -> complex:
        """Scalar coordinate (genus 0 and 1)."""
        if self.coords.size != 1:
            raise ValueError("scalar access needs a 1-dimensional chart")
        return complex(self.coords[0])

    def __repr__(self):
        return f"SurfacePoint({self.coords.tolist()})"


def as_point(p) -> SurfacePoint:
    if isinstance(p, SurfacePoint):
        return p
    return SurfacePoint(p)


class OvalSample:
    """Oval point with its half-period vector and differential values."""

    __slots__ = ("oval", "point", "n_vec", "diff_values")

    def __init__(self, oval, point, n_vec, diff_values):
        self.oval = int(oval)
        self.point = as_point(point)
        self.n_vec = np.atleast_1d(np.asarray(n_vec, dtype=int)) if np.size(n_vec) else np.zeros(0, dtype=int)
        self.diff_values = (
            np.atleast_1d(np.asarray(diff_values, dtype=complex))
            if np.size(diff_values)
            else np.zeros(0, dtype=complex)
        )


class RealSurfaceDescriptor:
    """Genus, oval count, dividing flag, and the (H, Y) period data.

    The evaluation matrix omega_std equals Z = H/2 + i*inv(Y) and is used
    directly as the period matrix of every theta sum.
    """

    def __init__(self, genus, ovals, dividing, h, y, oval_samples=(), orientations=None):
        self.genus = int(genus)
        self.ovals = int(ovals)
        self.dividing = bool(dividing)
        if self.genus < 0:
            raise InvariantError("genus must be nonnegative")
        if self.ovals < 1:
            raise InvariantError("need at least one oval")
        if self.genus == 0:
            self.h = np.zeros((0, 0), dtype=int)
            self.y = np.zeros((0, 0))
            self.z_matrix = np.zeros((0, 0), dtype=complex)
            self.omega = None
        else:
            self.h = np.asarray(h, dtype=int).reshape(self.genus, self.genus)
            self.y = np.asarray(y, dtype=float).reshape(self.genus, self.genus)
            if np.max(np.abs(self.y - self.y.T)) > 1e-12:
                raise InvariantError("Y must be symmetric")
            eig = np.linalg.eigvalsh(self.y)
            if eig.min() <= 0:
                raise InvariantError(
                    f"Y not positive definite, min eigenvalue {eig.min():.3e}"
                )
            self.z_matrix = 0.5 * self.h + 1j * np.linalg.inv(self.y)
            self.omega = RiemannMatrix(self.z_matrix)
            rank = np.linalg.matrix_rank(self.h)
            want = self.genus + 1 - self.ovals
            if rank != want:
                raise InvariantError(
                    f"rank(H) = {rank}, expected genus+1-ovals = {want}"
                )
        if orientations is None:
            if self.genus == 1 and self.dividing and self.ovals == 2:
                orientations = (1, -1)
            else:
                orientations = (1,) * self.ovals
        self.orientations = tuple(int(s) for s in orientations)
        if len(self.orientations) != self.ovals or any(
            s not in (-1, 1) for s in self.orientations
        ):
            raise InvariantError("orientations must be +/-1, one per oval")
        self.oval_samples = list(oval_samples)
        for s in self.oval_samples:
            kind, idx = self.classify(s.point)
            if kind != "oval" or idx != s.oval:
                raise InvariantError(
                    f"sample marked oval {s.oval} classifies as {kind}:{idx}"
                )

    # shorthand used throughout the numerics
    @property
    def omega_std(self):
        return self.z_matrix

    @property
    def t_param(self) -> float:
        """Imaginary period of the torus builders (1/Y at genus 1)."""
        if self.genus != 1:
            raise ValueError("t parameter is a genus-1 notion")
        return 1.0 / float(self.y[0, 0])

    def involution(self, p) -> SurfacePoint:
        """Antiholomorphic involution on lifted coordinates (conjugation)."""
        return SurfacePoint(np.conj(as_point(p).coords))

    def lattice_decompose(self, d):
        """Integer (n, m) with d = n + Z m, or None if not in the lattice."""
        if self.genus == 0:
            if abs(complex(d)) < CLASS_TOL:
                return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
            return None
        d = np.atleast_1d(np.asarray(d, dtype=complex))
        m = np.linalg.solve(self.z_matrix.imag, d.imag)
        n = d.real - self.z_matrix.real @ m
        mi, ni = np.round(m), np.round(n)
        res = abs(m - mi).max() + abs(n - ni).max()
        if res > CLASS_TOL:
            return None
        return ni.astype(int), mi.astype(int)

    def lattice_equivalent(self, p, q) -> bool:
        if self.genus == 0:
            return abs(as_point(p).z - as_point(q).z) < CLASS_TOL
        return self.lattice_decompose(as_point(p).coords - as_point(q).coords) is not None

    def reduce(self, p) -> SurfacePoint:
        """Representative in the fundamental cell of the period lattice."""
        pt = as_point(p)
        if self.genus == 0:
            return pt
        m = np.floor(np.linalg.solve(self.z_matrix.imag, pt.coords.imag) + 1e-12)
        z1 = pt.coords - self.z_matrix @ m
        n = np.floor(z1.real + 1e-12)
        return SurfacePoint(z1 - n)

    def classify(self, p, tol: float = CLASS_TOL):
        """('oval', j), ('interior', +1) or ('interior', -1)."""
        pt = as_point(p)
        if self.genus == 0:
            im = pt.z.imag
            if abs(im) < tol:
                return ("oval", 0)
            return ("interior", 1 if im > 0 else -1)
        if self.genus != 1:
            # ovals are known only through the stored samples
            for s in self.oval_samples:
                if self.lattice_equivalent(pt, s.point):
                    return ("oval", s.oval)
            fixed = self.lattice_equivalent(pt, self.involution(pt))
            if fixed:
                return ("oval", -1)
            return ("interior", 1)
        t = self.t_param
        v = float(self.reduce(pt).coords[0].imag) % t
        if self.dividing:
            if min(v, t - v) < tol:
                return ("oval", 0)
            if abs(v - t / 2) < tol:
                return ("oval", 1)
            return ("interior", 1 if v < t / 2 else -1)
        if min(v, t - v) < tol:
            return ("oval", 0)
        return ("interior", 1)

    def oval_point(self, j: int, s: float) -> SurfacePoint:
        """Point of oval j at parameter s in [0, 1) (genus 1)."""
        if self.genus != 1:
            raise ValueError("oval_point is parameterized only at genus 1")
        if not 0 <= j < self.ovals:
            raise ValueError(f"oval index {j} out of range")
        base = 0.0 if j == 0 else self.z_matrix[0, 0] / 2.0
        return SurfacePoint([s + base])

    def oval_sample(self, j: int, s: float) -> OvalSample:
        pt = self.oval_point(j, s)
        n_vec = np.zeros(1, dtype=int) if j == 0 else np.ones(1, dtype=int)
        return OvalSample(j, pt, n_vec, np.ones(1, dtype=complex))

    def random_interior(self, rng, n: int, side: int = 1, margin: float = 0.08):
        """Random interior points on the requested side, as a complex array."""
        if self.genus == 0:
            x = rng.uniform(-2.0, 2.0, n)
            y = rng.uniform(margin, 2.0, n)
            return x + 1j * side * y
        t = self.t_param
        half = t / 2.0 if self.dividing else t
        u = rng.uniform(0.0, 1.0, n)
        v = rng.uniform(margin * half, (1.0 - margin) * half, n)
        if side < 0:
            if not self.dividing:
                raise ValueError("a non-dividing surface has one side")
            v = -v
        return u + 1j * v

    def to_document(self) -> dict:
        return {
            "genus": self.genus,
            "ovals": self.ovals,
            "dividing": self.dividing,
            "H": self.h.tolist(),
            "Y": self.y.tolist(),
            "Z": [[[c.real, c.imag] for c in row] for row in self.z_matrix] if self.genus else [],
            "orientations": list(self.orientations),
            "oval_samples": [
                {
                    "oval": s.oval,
                    "coords": [[c.real, c.imag] for c in s.point.coords],
                    "n_vec": s.n_vec.tolist(),
                    "diff_values": [[c.real, c.imag] for c in s.diff_values],
                }
                for s in self.oval_samples
            ],
        }


def build_genus0() -> RealSurfaceDescriptor:
    """Riemann sphere with the real line as its single oval."""
    samples = [
        OvalSample(0, SurfacePoint([x]), np.zeros(0, dtype=int), np.zeros(0, dtype=complex))
        for x in (-1.0, 0.0, 1.0, 2.0)
    ]
    return RealSurfaceDescriptor(0, 1, True, None, None, samples)


def build_genus1(t: float, dividing: bool = True) -> RealSurfaceDescriptor:
    """Real torus with imaginary period parameter t > 0.

    Dividing: Z = i t, ovals at Im z = 0 and Im z = t/2.
    Non-dividing: Z = 1/2 + i t, single oval at Im z = 0.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    y = np.array([[1.0 / t]])
    if dividing:
        h = np.zeros((1, 1), dtype=int)
        desc = RealSurfaceDescriptor(1, 2, True, h, y)
        for j in (0, 1):
            for s in (0.0, 0.25, 0.5, 0.75):
                desc.oval_samples.append(desc.oval_sample(j, s))
        return desc
    h = np.ones((1, 1), dtype=int)
    desc = RealSurfaceDescriptor(1, 1, False, h, y)
    for s in (0.0, 0.25, 0.5, 0.75):
        desc.oval_samples.append(desc.oval_sample(0, s))
    return desc


_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

SURFACE_SCHEMA = {
    "type": "object",
    "required": ["genus", "ovals", "dividing", "H", "Y", "oval_samples"],
    "properties": {
        "genus": {"type": "integer", "minimum": 0},
        "ovals": {"type": "integer", "minimum": 1},
        "dividing": {"type": "boolean"},
        "H": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "Y": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "Z": {"type": "array", "items": {"type": "array", "items": _PAIR}},
        "orientations": {"type": "array", "items": {"enum": [-1, 1]}},
        "oval_samples": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["oval", "coords", "n_vec", "diff_values"],
                "properties": {
                    "oval": {"type": "integer", "minimum": 0},
                    "coords": {"type": "array", "items": _PAIR, "minItems": 1},
                    "n_vec": {"type": "array", "items": {"type": "integer"}},
                    "diff_values": {"type": "array", "items": _PAIR},
                },
            },
        },
    },
}


def _pairs_to_complex(pairs):
    return np.array([p[0] + 1j * p[1] for p in pairs], dtype=complex)


def load_surface(source) -> RealSurfaceDescriptor:
    """Descriptor from a JSON document (dict, JSON string, or file path)."""
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
        else:
            with open(text, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
    try:
        _js_validate(doc, SURFACE_SCHEMA)
    except ValidationError as exc:
        raise SurfaceFormatError(f"surface document invalid: {exc.message}") from exc
    g = doc["genus"]
    samples = []
    for raw in doc["oval_samples"]:
        coords = _pairs_to_complex(raw["coords"])
        if g > 0 and coords.size != g:
            raise SurfaceFormatError(
                f"sample coords have length {coords.size}, expected {g}"
            )
        samples.append(
            OvalSample(raw["oval"], SurfacePoint(coords), raw["n_vec"], _pairs_to_complex(raw["diff_values"]) if raw["diff_values"] else np.zeros(0, dtype=complex))
        )
    desc = RealSurfaceDescriptor(
        g,
        doc["ovals"],
        doc["dividing"],
        doc["H"] if g else None,
        doc["Y"] if g else None,
        samples,
        doc.get("orientations"),
    )
    if g and doc.get("Z"):
        given = np.array([[p[0] + 1j * p[1] for p in row] for row in doc["Z"]])
        if given.shape != desc.z_matrix.shape:
            raise SurfaceFormatError("Z has the wrong shape for the stated genus")
        res = float(np.max(np.abs(desc.z_matrix - given)))
        if res > 1e-12:
            raise InvariantError(f"Z != H/2 + i*inv(Y), residual {res:.3e}")
    return desc
