"""JSON documents, CSV root clouds and SVG pictures.

Schemas (all complex numbers are ``[re, im]`` pairs):

* polynomial: ``{"coeffs": [[re, im], ...]}`` in ascending degree; exact
  entries may use ``{"num": int, "den": int}`` in place of floats.
* bivariate polynomial: ``{"monomials": [{"i": int, "j": int, "re": x, "im": y}, ...]}``
  for ``sum alpha_ij C**i z**j``.
* triple: ``{"P": poly, "Q": poly, "R": poly}`` for ``P C**2 + Q C + R``.
  A bivariate document of degree at most 2 in C is accepted as well.
* rational germ: ``{"num": poly, "den": poly}``.
* measure: ``{"atoms": [{"z": [x, y], "w": weight}], "arcs": [arc, ...]}``
  where an arc is either ``{"nodes": [[x, y], ...], "w": [...], "rate": r}``
  (canonical parameter samples with a constant rate) or
  ``{"nodes": [...], "density": [...]}`` (arclength density samples).
  Candidate documents written by ``measures`` (``poles`` with ``res``) are
  read the same way.
* graph: see :meth:`motherbody.quaddiff.TrajectoryGraph.from_json`.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import SchemaError
from .measure import Atom, SignedMeasure, arc_samples, parametrised_arc, polyline_arc
from .polyalg import BiPoly, UniPoly


def read_json(path):
    try:
        text = Path(path).read_text() if str(path) != "-" else __import__("sys").stdin.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def dumps(doc) -> str:
    return json.dumps(_plain(doc), sort_keys=True, indent=1, allow_nan=True) + "\n"


def _plain(x):
    """Make numpy scalars, complex numbers and tuples JSON friendly."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def _cplx(v) -> complex:
    try:
        if isinstance(v, (list, tuple)):
            return complex(float(v[0]), float(v[1]) if len(v) > 1 else 0.0)
        return complex(float(v))
    except (TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"bad complex number {v!r}") from exc


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def bipoly_from_doc(doc) -> BiPoly:
    if isinstance(doc, dict) and "monomials" in doc:
        return BiPoly.from_json(doc)
    P, Q, R = triple_from_doc(doc)
    return BiPoly.from_triple(P, Q, R)


def triple_from_doc(doc):
    if not isinstance(doc, dict):
        raise SchemaError("a triple must be a JSON object")
    if "monomials" in doc:
        bp = BiPoly.from_json(doc)
        if bp.c_degree > 2:
            raise SchemaError("the equation has degree > 2 in C")
        return bp.coeff_poly(2), bp.coeff_poly(1), bp.coeff_poly(0)
    try:
        return tuple(UniPoly.from_json(doc[k]) if doc.get(k) is not None else UniPoly([])
                     for k in ("P", "Q", "R"))
    except KeyError as exc:
        raise SchemaError("a triple needs keys P, Q and R") from exc


def equation_from_doc(doc):
    """Triple, bivariate polynomial or rational germ, as accepted by ``compare_branch``."""
    if isinstance(doc, dict) and "num" in doc and "den" in doc:
        return UniPoly.from_json(doc["num"]), UniPoly.from_json(doc["den"])
    if isinstance(doc, dict) and "monomials" in doc:
        return BiPoly.from_json(doc)
    return triple_from_doc(doc)


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

def measure_to_doc(mu: SignedMeasure, n_nodes: int = 201) -> dict:
    return {"atoms": [{"z": [complex(a.location).real, complex(a.location).imag], "w": a.weight}
                      for a in mu.atoms],
            "arcs": [arc_samples(arc, n_nodes) for arc in mu.arcs], "mass": mu.total_mass}


def measure_from_doc(doc) -> SignedMeasure:
    if not isinstance(doc, dict):
        raise SchemaError("a measure must be a JSON object")
    try:
        atoms = [Atom(_cplx(a["z"]), float(a["w"])) for a in doc.get("atoms", [])]
        atoms += [Atom(_cplx(p["z"]), float(p["res"])) for p in doc.get("poles", [])]
        arcs = []
        for a in doc.get("arcs", []):
            z = np.array([_cplx(p) for p in a["nodes"]])
            closed = bool(a.get("closed", False))
            if "w" in a and "rate" in a:
                arcs.append(parametrised_arc(z, a["w"], a["rate"], a.get("end_exponents", (1.0, 1.0)),
                                             closed))
            else:
                dens = np.array([np.nan if x is None else float(x) for x in a["density"]])
                ok = np.isfinite(dens)
                arcs.append(polyline_arc(z[ok], dens[ok], closed))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed measure JSON: {exc}") from exc
    return SignedMeasure(atoms=atoms, arcs=arcs)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def roots_csv(points) -> str:
    return "".join(f"{complex(z).real!r},{complex(z).imag!r}\n" for z in points)


def read_roots_csv(path) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise SchemaError(f"cannot read root cloud {path}: {exc}") from exc
    return data[:, 0] + 1j * data[:, 1]


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

class SvgCanvas:
    """Minimal SVG writer in math coordinates (y up) over a fixed box."""

    def __init__(self, box, size=600):
        x0, x1, y0, y1 = box
        self.box = box
        self.size = size
        self.k = size / max(x1 - x0, y1 - y0)
        self.parts = []

    def _xy(self, z):
        x0, _, _, y1 = self.box
        return (complex(z).real - x0) * self.k, (y1 - complex(z).imag) * self.k

    def polyline(self, pts, color="#1f4e9c", width=1.5):
        xy = " ".join("%.3f,%.3f" % self._xy(z) for z in pts)
        self.parts.append(f'<polyline points="{xy}" fill="none" stroke="{color}" stroke-width="{width}"/>')

    def dot(self, z, color="#c0392b", r=3.5):
        x, y = self._xy(z)
        self.parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{r}" fill="{color}"/>')

    def cross(self, z, color="#222222", r=4.5):
        x, y = self._xy(z)
        self.parts.append(f'<path d="M{x - r:.3f},{y - r:.3f}L{x + r:.3f},{y + r:.3f}'
                          f'M{x - r:.3f},{y + r:.3f}L{x + r:.3f},{y - r:.3f}" stroke="{color}" stroke-width="1.5"/>')

    def render(self) -> str:
        x0, x1, y0, y1 = self.box
        w = (x1 - x0) * self.k
        h = (y1 - y0) * self.k
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:.3f} {h:.3f}" '
                f'width="{w:.0f}" height="{h:.0f}">\n<rect width="100%" height="100%" fill="white"/>\n')
        return head + "\n".join(self.parts) + "\n</svg>\n"


def bounding_box(points, pad=0.35, min_half=1.0):
    pts = np.asarray(list(points), complex)
    if pts.size == 0:
        pts = np.array([0j])
    cx = 0.5 * (pts.real.min() + pts.real.max())
    cy = 0.5 * (pts.imag.min() + pts.imag.max())
    half = max(min_half, 0.5 * np.ptp(pts.real), 0.5 * np.ptp(pts.imag)) * (1 + pad)
    return (cx - half, cx + half, cy - half, cy + half)


def graph_svg(qd, graph=None, trajectories=(), measure=None) -> str:
    """Trajectories, zeros as dots, poles as crosses, support in bold."""
    canvas = SvgCanvas(bounding_box(qd.locations))
    for t in trajectories:
        canvas.polyline(t.polyline(200), color="#9aa9c4", width=1.0)
    if graph is not None:
        for e in graph.edges:
            canvas.polyline(e.points)
    if measure is not None:
        for arc in measure.arcs:
            canvas.polyline(arc.z_of(np.linspace(*arc.t_span, 200)), color="#c0392b", width=3.0)
        for a in measure.atoms:
            canvas.dot(a.location, color="#8e44ad", r=5)
    for s in qd.points:
        if s.order > 0:
            canvas.dot(s.location)
        else:
            canvas.cross(s.location)
    return canvas.render()


def roots_svg(points) -> str:
    pts = np.asarray(points, complex)
    canvas = SvgCanvas(bounding_box(pts, pad=0.15))
    for z in pts:
        canvas.dot(z, color="#1f4e9c", r=1.8)
    return canvas.render()
