"""Boundary measures, Green differentials, and right-half-plane functions."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from jsonschema import ValidationError
from jsonschema import validate as _js_validate
from scipy.integrate import quad

from . import theta as th
from .surface import RealSurfaceDescriptor, as_point

ATOM_TOL = 1e-8


class MeasureFormatError(ValueError):
    """Document does not match the measure schema."""


@dataclass(frozen=True)
class Quadrature:
    """Atomized measure data: lifts, weights, signs, half-period integers."""

    z: np.ndarray
    w: np.ndarray
    sg: np.ndarray
    n: np.ndarray
    oval: np.ndarray

    @property
    def v(self) -> np.ndarray:
        """Orientation-weighted masses sigma_i * w_i."""
        return self.sg * self.w

    @property
    def mu(self) -> np.ndarray:
        """Square-summability weights w_i / 2."""
        return self.w / 2.0

    def __len__(self) -> int:
        return len(self.z)


class RealMeasure:
    """Measure on the boundary ovals: point masses plus optional densities.

    Atoms are (oval, s, w) triples; s is the arc parameter on genus-1 ovals
    and the real coordinate itself at genus 0.  Densities are per-oval
    callables or sampled arrays, discretized to uniform node atoms.

    Args:
        surf: host surface.
        atoms: iterable of (oval, s, w).
        densities: optional {oval: rho} with rho a callable of s or an array.
        constant: additive imaginary offset M.
        signed_ok: allow negative masses (drops positivity checks).
        nodes: node count per oval when materializing densities.
    """

    def __init__(self, surf: RealSurfaceDescriptor, atoms=(), densities=None, constant: float = 0.0, signed_ok: bool = False, nodes: int = 512):
        self.surface = surf
        self.constant = float(constant)
        self.signed_ok = bool(signed_ok)
        self.nodes = int(nodes)
        self.atoms = [(int(j), float(s), float(w)) for (j, s, w) in atoms]
        self.densities = dict(densities) if densities else {}
        k = max(surf.ovals, 1)
        for j, s, w in self.atoms:
            if not 0 <= j < k:
                raise ValueError(f"oval index {j} out of range")
            if surf.genus >= 1 and not 0.0 <= s < 1.0:
                raise ValueError("arc parameter must lie in [0, 1)")
            if w <= 0 and not self.signed_ok:
                raise ValueError("masses must be positive (pass signed_ok to override)")
        if self.densities and surf.genus == 0:
            raise NotImplementedError("densities are supported on compact ovals only")
        for j in self.densities:
            if not 0 <= int(j) < k:
                raise ValueError(f"oval index {j} out of range")
        self._quad_cache: dict[int, Quadrature] = {}

    def is_empty(self) -> bool:
        return not self.atoms and not self.densities

    def quadrature(self, nodes: int | None = None) -> Quadrature:
        """Atoms plus density node-atoms, as flat arrays."""
        n = self.nodes if nodes is None else int(nodes)
        if n in self._quad_cache:
            return self._quad_cache[n]
        surf = self.surface
        zs, ws, sgs, nvs, ovs = [], [], [], [], []
        orient = surf.orientations if surf.genus >= 1 else (1,)
        for j, s, w in self.atoms:
            if surf.genus == 0:
                zs.append(complex(s))
                nvs.append(0.0)
            else:
                zs.append(surf.oval_point(j, s).z)
                nvs.append(float(surf.oval_sample(j, s).n_vec[0]))
            ws.append(w)
            sgs.append(float(orient[j]))
            ovs.append(j)
        grid = np.arange(n) / n
        for j, rho in sorted(self.densities.items()):
            j = int(j)
            vals = np.asarray(rho(grid), dtype=float) if callable(rho) else np.asarray(rho, dtype=float)
            if vals.shape != grid.shape:
                raise ValueError(f"density on oval {j} must produce {n} samples")
            if np.any(vals < 0) and not self.signed_ok:
                raise ValueError("densities must be nonnegative (pass signed_ok to override)")
            nv = float(surf.oval_sample(j, 0.0).n_vec[0])
            for s, val in zip(grid, vals):
                if val == 0.0:
                    continue
                zs.append(surf.oval_point(j, s).z)
                ws.append(val / n)
                sgs.append(float(orient[j]))
                nvs.append(nv)
                ovs.append(j)
        q = Quadrature(
            np.asarray(zs, dtype=complex), np.asarray(ws, dtype=float),
            np.asarray(sgs, dtype=float), np.asarray(nvs, dtype=float),
            np.asarray(ovs, dtype=int),
        )
        self._quad_cache[n] = q
        return q

    def oval_totals(self) -> np.ndarray:
        """Total mass per oval (atoms plus densities)."""
        k = max(self.surface.ovals, 1)
        tot = np.zeros(k)
        q = self.quadrature()
        for j in range(k):
            tot[j] = np.sum(q.w[q.oval == j])
        return tot

    def is_balanced(self, tol: float = 1e-12) -> bool:
        """Equal mass on every oval; forces single-valuedness."""
        tot = self.oval_totals()
        return bool(np.max(tot) - np.min(tot) <= tol * max(np.max(np.abs(tot)), 1.0))

    def to_document(self) -> dict:
        doc = {
            "atoms": [{"oval": j, "s": s, "w": w} for (j, s, w) in self.atoms],
            "constant": self.constant,
        }
        if self.signed_ok:
            doc["signed"] = True
        if self.densities:
            grid = np.arange(self.nodes) / self.nodes
            doc["densities"] = {
                str(j): (np.asarray(r(grid), dtype=float) if callable(r) else np.asarray(r, dtype=float)).tolist()
                for j, r in self.densities.items()
            }
        return doc


MEASURE_SCHEMA = {
    "type": "object",
    "required": ["atoms", "constant"],
    "additionalProperties": False,
    "properties": {
        "atoms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["oval", "s", "w"],
                "additionalProperties": False,
                "properties": {
                    "oval": {"type": "integer", "minimum": 0},
                    "s": {"type": "number"},
                    "w": {"type": "number"},
                },
            },
        },
        "constant": {"type": "number"},
        "signed": {"type": "boolean"},
        "densities": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "number"}},
        },
    },
}


def load_measure(surf: RealSurfaceDescriptor, source) -> RealMeasure:
    """Build a measure from a dict, JSON text, or file path."""
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
        else:
            with open(text) as fh:
                doc = json.load(fh)
    try:
        _js_validate(doc, MEASURE_SCHEMA)
    except ValidationError as exc:
        raise MeasureFormatError(f"measure document invalid: {exc.message}") from exc
    densities = {int(j): np.asarray(vals, dtype=float) for j, vals in doc.get("densities", {}).items()}
    nodes = max((len(v) for v in densities.values()), default=512)
    for j, vals in densities.items():
        if len(vals) != nodes:
            raise MeasureFormatError("all density arrays must share one node count")
    return RealMeasure(
        surf,
        atoms=[(a["oval"], a["s"], a["w"]) for a in doc["atoms"]],
        densities=densities or None,
        constant=doc["constant"],
        signed_ok=doc.get("signed", False),
        nodes=nodes,
    )


def green_differential(surf: RealSurfaceDescriptor, p, x, n: float = 0.0, policy: th.TruncationPolicy = th.TruncationPolicy()) -> complex:
    """Value G(p, x) of the boundary Green differential at oval point x.

    Genus 0: -(i/2)/(x - p), so (2/pi) Re G is the Poisson kernel.
    Genus 1: pi (n/2 + i Y p) - (i/2) f1(x - p) with Y = 1/t and n the
    half-period integer of the oval carrying x.
    """
    pz, xz = as_point(p).z, as_point(x).z
    if surf.genus == 0:
        return complex(-0.5j / (xz - pz))
    yy = surf.y[0, 0]
    d = th.f1(np.array([xz - pz]), surf.omega, policy)
    return complex(np.pi * (n / 2.0 + 1j * yy * pz) - 0.5j * d)


class CaratheodoryFunction:
    """phi(p) = sum_i v_i G(p, x_i) + i M for a boundary measure.

    Maps the upper region to the closed right half plane when the measure is
    positive; antisymmetric under the real involution.
    """

    def __init__(self, measure: RealMeasure, policy: th.TruncationPolicy = th.TruncationPolicy()):
        self.measure = measure
        self.surface = measure.surface
        self.policy = policy
        self.quad = measure.quadrature()

    def _guard(self, pz: complex):
        surf = self.surface
        if len(self.quad) == 0:
            return
        d = pz - self.quad.z
        if surf.genus >= 1:
            om = complex(surf.z_matrix[0, 0])
            sep = np.min([np.min(np.abs(d - nn - om * mm)) for nn in (-1, 0, 1) for mm in (-1, 0, 1)])
        else:
            sep = np.min(np.abs(d))
        if sep < ATOM_TOL:
            raise ValueError("evaluation point lies on the measure support")

    def __call__(self, p, allow_boundary: bool = True) -> complex:
        pz = as_point(p).z
        self._guard(pz)
        if not allow_boundary:
            kind, _ = self.surface.classify([pz])
            if kind == "oval":
                raise ValueError("evaluation point lies on a boundary oval")
        surf, pol, q = self.surface, self.policy, self.quad
        acc = 1j * self.measure.constant
        if len(q) == 0:
            return complex(acc)
        if surf.genus == 0:
            acc += np.sum(q.v * (-0.5j) / (q.z - pz))
            return complex(acc)
        yy = surf.y[0, 0]
        f1v = _f1_batch(q.z - pz, surf.omega, pol)
        acc += np.sum(q.v * (np.pi * (q.n / 2.0 + 1j * yy * pz) - 0.5j * f1v))
        return complex(acc)

    def periods(self, base=None) -> tuple[complex, complex]:
        """Increments over the two lattice shifts at a fixed interior point."""
        surf = self.surface
        if surf.genus == 0:
            return 0j, 0j
        if base is None:
            base = complex(0.313, 0.271 * surf.t_param)
        pz = as_point(base).z
        om = complex(surf.z_matrix[0, 0])
        v0 = self(pz)
        return self(pz + 1.0) - v0, self(pz + om) - v0

    def is_single_valued(self, tol: float = 1e-10) -> bool:
        a, b = self.periods()
        return max(abs(a), abs(b)) <= tol


def _f1_batch(zs: np.ndarray, om: th.RiemannMatrix, policy: th.TruncationPolicy) -> np.ndarray:
    """f1 over many points, guarding each against lattice hits."""
    out = np.empty(len(zs), dtype=complex)
    for i, z in enumerate(zs):
        out[i] = th.f1(np.array([z]), om, policy)
    return out


def harmonic_eval(surf: RealSurfaceDescriptor, p, psis, nodes: int = 512, policy: th.TruncationPolicy = th.TruncationPolicy()) -> float:
    """Harmonic extension of boundary data via the density (2/pi) sigma_j Re G.

    psis: one callable per oval (genus 1) or a single callable on the line
    (genus 0, integrated with the Poisson kernel).
    """
    pz = as_point(p).z
    if surf.genus == 0:
        psi = psis if callable(psis) else psis[0]
        a, b = pz.real, pz.imag
        val, _ = quad(
            lambda x: psi(x) * b / np.pi / ((x - a) ** 2 + b ** 2),
            -np.inf, np.inf, limit=400,
        )
        return float(val)
    s = np.arange(nodes) / nodes
    total = 0.0
    for j in range(surf.ovals):
        base = surf.oval_point(j, 0.0).z
        nvec = float(surf.oval_sample(j, 0.0).n_vec[0])
        gv = np.array([
            green_differential(surf, pz, base + sk, nvec, policy) for sk in s
        ])
        dens = (2.0 / np.pi) * surf.orientations[j] * gv.real
        total += float(np.mean(np.asarray(psis[j](s), dtype=float) * dens))
    return total


def harmonic_mass(surf: RealSurfaceDescriptor, p, nodes: int = 512, policy: th.TruncationPolicy = th.TruncationPolicy()) -> float:
    """Total mass of the harmonic-measure density; identically 1."""
    if surf.genus == 0:
        return harmonic_eval(surf, p, lambda x: np.ones_like(x), nodes, policy)
    return harmonic_eval(surf, p, [lambda s: np.ones_like(s)] * surf.ovals, nodes, policy)


def genus0_dictionary(surf: RealSurfaceDescriptor, offset: float, slope: float, pairs) -> RealMeasure:
    """Classical line data (A, B, {(t_j, c_j)}) as a boundary measure.

    Matches phi(p) = -i [A + sum c_j (1/(t_j - p) - t_j/(1 + t_j^2))]
    through w_j = 2 c_j and M = -A + sum c_j t_j / (1 + t_j^2).  A linear
    term B != 0 has no finite-measure counterpart here and is rejected.
    """
    if surf.genus != 0:
        raise ValueError("dictionary applies to the genus-0 chart")
    if slope != 0.0:
        raise ValueError("linear growth has no finite boundary measure")
    pairs = [(float(tj), float(cj)) for tj, cj in pairs]
    m = -float(offset) + sum(cj * tj / (1.0 + tj * tj) for tj, cj in pairs)
    atoms = [(0, tj, 2.0 * cj) for tj, cj in pairs]
    return RealMeasure(surf, atoms=atoms, constant=m, signed_ok=any(c <= 0 for _, c in pairs))


def genus0_extract_atom(phi, center: float, radius: float = 0.05, nodes: int = 128) -> complex:
    """Mass at a line pole of a genus-0 phi by a small contour: c = -i Res."""
    ang = 2.0 * np.pi * (np.arange(nodes) + 0.5) / nodes
    ring = center + radius * np.exp(1j * ang)
    vals = np.array([phi(zv) for zv in ring])
    res = np.mean(vals * (ring - center))
    return complex(-1j * res)
