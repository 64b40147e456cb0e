"""Probability measures on the unit circle and the associated inner product."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadSpec

DEFAULT_GRID = 512


@dataclass(frozen=True)
class Measure:
    """A probability measure represented by nodes on the circle and masses.

    ``kind`` is ``"discrete"`` for a finite atomic measure, where integrals are
    exact, or ``"grid"`` for a density sampled on the uniform ``M``-point grid,
    where integrals use the periodic trapezoid rule.
    """

    kind: str
    nodes: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=complex).ravel().copy()
        masses = np.asarray(self.masses, dtype=float).ravel().copy()
        if self.kind not in ("discrete", "grid"):
            raise BadSpec(f"unknown measure kind {self.kind!r}")
        if len(nodes) == 0 or len(nodes) != len(masses):
            raise BadSpec("nodes and masses must be non-empty and of equal length")
        if not np.all(np.isfinite(nodes)) or not np.all(np.isfinite(masses)):
            raise BadSpec("non-finite node or mass")
        if np.any(np.abs(np.abs(nodes) - 1.0) > 1e-12):
            raise BadSpec("measure nodes must lie on the unit circle")
        if np.any(masses < 0):
            raise BadSpec("masses/density values must be non-negative")
        total = masses.sum()
        if total <= 0:
            raise BadSpec("measure has zero total mass")
        if self.kind == "grid" and np.count_nonzero(masses > 0) < 0.9 * len(masses):
            raise BadSpec("density must be positive on at least 90% of the grid")
        masses = masses / total
        nodes.setflags(write=False)
        masses.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "masses", masses)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def support_distance(self, z) -> float:
        """Distance from ``z`` to the support (the whole circle for grids)."""
        if self.kind == "grid":
            return abs(abs(z) - 1.0)
        return float(np.min(np.abs(self.nodes - z)))


def integrate(f, mu: Measure) -> complex:
    """Integral of ``f`` against ``mu``; ``f`` is called once on the node array."""
    vals = np.asarray(f(mu.nodes), dtype=complex)
    if vals.ndim == 0:
        vals = np.full(mu.size, complex(vals))
    return complex(np.dot(mu.masses, vals))


def inner_product(f, g, mu: Measure) -> complex:
    """``<f, g> = integral of conj(f) g``."""
    fv = np.asarray(f(mu.nodes), dtype=complex)
    gv = np.asarray(g(mu.nodes), dtype=complex)
    return complex(np.dot(mu.masses, np.conj(fv) * gv))


def gram(funcs, mu: Measure) -> np.ndarray:
    """Gram matrix ``G[i, j] = <f_i, f_j>``."""
    V = np.array([np.asarray(f(mu.nodes), dtype=complex) for f in funcs])
    return (np.conj(V) * mu.masses) @ V.T


def lebesgue(M: int = DEFAULT_GRID) -> Measure:
    if M < 1:
        raise BadSpec("grid size must be positive")
    theta = 2 * np.pi * np.arange(M) / M
    return Measure("grid", np.exp(1j * theta), np.ones(M))


def poisson(r: float, theta0: float = 0.0, M: int = DEFAULT_GRID) -> Measure:
    """Poisson kernel density ``(1 - r^2)/|1 - r e^{i(theta - theta0)}|^2``."""
    if not 0 <= r < 1:
        raise BadSpec("Poisson radius must satisfy 0 <= r < 1")
    theta = 2 * np.pi * np.arange(M) / M
    w = (1 - r**2) / np.abs(1 - r * np.exp(1j * (theta - theta0))) ** 2
    return Measure("grid", np.exp(1j * theta), w)


def discrete(nodes, masses) -> Measure:
    nodes = np.asarray(nodes, dtype=complex)
    return Measure("discrete", nodes, masses)


def random_discrete(seed: int, N: int, rng: np.random.Generator | None = None) -> Measure:
    """Atoms at uniformly random angles with masses drawn from ``[0.5, 1.5]``."""
    if N < 1:
        raise BadSpec("need at least one atom")
    rng = np.random.default_rng(seed) if rng is None else rng
    theta = np.sort(rng.uniform(0, 2 * np.pi, N))
    masses = rng.uniform(0.5, 1.5, N)
    return Measure("discrete", np.exp(1j * theta), masses)


def _complex_from(obj) -> complex:
    if isinstance(obj, dict):
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    return complex(obj)


def make_measure(spec: dict) -> Measure:
    """Build a measure from a JSON-style dictionary.

    Recognised types: ``lebesgue`` (``M``), ``poisson`` (``r``, ``theta0``,
    ``M``), ``discrete`` (``nodes``, ``masses``) and ``random_discrete``
    (``seed``, ``N``).  Discrete nodes may also be given as angles via
    ``angles`` (radians).
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise BadSpec("measure spec must be an object with a 'type' field")
    t = spec["type"]
    try:
        if t == "lebesgue":
            return lebesgue(int(spec.get("M", DEFAULT_GRID)))
        if t == "poisson":
            return poisson(float(spec.get("r", 0.0)), float(spec.get("theta0", 0.0)),
                           int(spec.get("M", DEFAULT_GRID)))
        if t == "discrete":
            if "angles" in spec:
                nodes = np.exp(1j * np.asarray(spec["angles"], dtype=float))
            else:
                nodes = np.array([_complex_from(v) for v in spec["nodes"]])
                mod = np.abs(nodes)
                if np.any(np.abs(mod - 1) > 1e-6):
                    raise BadSpec("discrete nodes must lie on the unit circle")
                nodes = nodes / mod
            masses = spec.get("masses")
            if masses is None:
                masses = np.ones(len(nodes))
            return discrete(nodes, masses)
        if t == "random_discrete":
            return random_discrete(int(spec.get("seed", 0)), int(spec["N"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise BadSpec(f"malformed measure spec: {exc}") from exc
    raise BadSpec(f"unknown measure type {t!r}")


def measure_to_json(mu: Measure) -> dict:
    return {
        "type": "discrete",
        "nodes": [{"re": float(z.real), "im": float(z.imag)} for z in mu.nodes],
        "masses": [float(m) for m in mu.masses],
    }


def angle(z) -> np.ndarray:
    """Argument in ``[0, 2 pi)``; values within rounding of ``2 pi`` map to 0."""
    a = np.mod(np.angle(z), 2 * math.pi)
    return np.where(a > 2 * math.pi - 1e-14, 0.0, a)
