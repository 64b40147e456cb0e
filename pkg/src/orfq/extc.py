"""Extended complex numbers and elementary Blaschke machinery.

Points of the extended plane are either ordinary Python ``complex`` values or
the singleton :data:`INF`.  Infinity is kept as a tag, never as an IEEE
infinity, so the substitution rules ``1 - conj(inf) z -> -z`` and
``z - inf -> -1`` are applied symbolically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Union

from .errors import BadSpec, PoleHit, SequenceMismatch

TOL_CIRCLE = 1e-12
TOL_POLE = 1e-14


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

ExtComplex = Union[complex, _Infinity]


def is_inf(z) -> bool:
    return z is INF


def as_ext(z) -> ExtComplex:
    """Coerce ``z`` to an extended complex value.

    Accepts :data:`INF`, the strings ``"inf"``/``"∞"``, or any finite number.
    IEEE infinities and NaNs are rejected because they would silently bypass
    the symbolic conventions.
    """
    if z is INF:
        return INF
    if isinstance(z, str):
        if z.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        raise BadSpec(f"cannot interpret {z!r} as an extended complex number")
    if not isinstance(z, Number):
        raise BadSpec(f"cannot interpret {z!r} as an extended complex number")
    c = complex(z)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise BadSpec("IEEE infinities/NaN are not valid; use INF")
    return c


def substar(z: ExtComplex) -> ExtComplex:
    """Reflection in the unit circle, ``z -> 1/conj(z)``."""
    if z is INF:
        return 0j
    if z == 0:
        return INF
    w = 1.0 / complex(z).conjugate()
    # reciprocals of subnormal values overflow
    return w if math.isfinite(abs(w)) else INF


def in_disk(z: ExtComplex, tol: float = TOL_CIRCLE) -> bool:
    return z is not INF and abs(z) < 1.0 - tol


def on_circle(z: ExtComplex, tol: float = TOL_CIRCLE) -> bool:
    return z is not INF and abs(abs(z) - 1.0) <= tol


def in_exterior(z: ExtComplex, tol: float = TOL_CIRCLE) -> bool:
    return z is INF or abs(z) > 1.0 + tol


def one_minus_abs2(z: ExtComplex) -> float:
    """``1 - |z|^2`` with the convention that infinity gives ``-1``."""
    if z is INF:
        return -1.0
    return 1.0 - abs(z) ** 2


def u_map(z: ExtComplex) -> complex:
    """Unimodular phase ``conj(z)/|z|``; equal to 1 at 0 and at infinity."""
    if z is INF or z == 0:
        return 1.0 + 0j
    z = complex(z)
    return z.conjugate() / abs(z)


sigma = u_map


def varpi(nu: ExtComplex, z: complex, variant: str = "plain") -> complex:
    """Linear factor attached to a pole parameter.

    ``plain``: ``1 - conj(nu) z`` (``-z`` when ``nu`` is infinite).
    ``star``:  ``z - nu``          (``-1`` when ``nu`` is infinite).
    """
    if z is INF:
        raise PoleHit("varpi is not evaluated at infinity; use leading coefficients")
    if variant == "plain":
        if nu is INF:
            return -complex(z)
        return 1.0 - complex(nu).conjugate() * z
    if variant == "star":
        if nu is INF:
            return -1.0 + 0j
        return complex(z) - nu
    raise ValueError(f"unknown variant {variant!r}")


def varpi_coeffs(nu: ExtComplex, variant: str = "plain") -> list:
    """Ascending coefficients (length 2) of the linear factor ``varpi``."""
    if variant == "plain":
        return [0j, -1 + 0j] if nu is INF else [1 + 0j, -complex(nu).conjugate()]
    if variant == "star":
        return [-1 + 0j, 0j] if nu is INF else [-complex(nu), 1 + 0j]
    raise ValueError(f"unknown variant {variant!r}")


def zeta(nu: ExtComplex, z: ExtComplex) -> ExtComplex:
    """Blaschke factor ``sigma (z - nu)/(1 - conj(nu) z)``.

    Reduces to ``z`` for ``nu = 0`` and ``1/z`` for ``nu = inf``.  Both the
    parameter and the argument may be infinite.
    """
    if nu is INF:
        if z is INF:
            return 0j
        if z == 0:
            return INF
        return 1.0 / complex(z)
    nu = complex(nu)
    if nu == 0:
        return z
    s = u_map(nu)
    if z is INF:
        return -s / nu.conjugate()
    den = 1.0 - nu.conjugate() * z
    if abs(den) <= TOL_POLE * (1.0 + abs(nu.conjugate() * z)):
        return INF
    return s * (z - nu) / den


def zeta_finite(nu: ExtComplex, z: complex) -> complex:
    """Like :func:`zeta` but raises :class:`PoleHit` instead of returning INF."""
    v = zeta(nu, z)
    if v is INF:
        raise PoleHit(f"Blaschke factor with parameter {nu!r} has a pole at {z!r}")
    return v


def blaschke_product(nus: Iterable[ExtComplex], z: complex) -> complex:
    """Finite Blaschke product over the given parameters, at a finite point."""
    out = 1.0 + 0j
    for nu in nus:
        out *= zeta_finite(nu, z)
    return out


@dataclass(frozen=True)
class GammaSequence:
    """A pole sequence ``gamma_1..gamma_N`` split between disk and exterior.

    Stored through the disk representatives ``alphas`` and a side word: side
    ``A`` means ``gamma_j = alpha_j``, side ``B`` means ``gamma_j`` is the
    reflection ``1/conj(alpha_j)`` (infinity when ``alpha_j = 0``).  Index 0
    is the implicit ``gamma_0``, equal to 0 (``gamma0_side='A'``) or infinity.
    """

    alphas: tuple
    side: str
    gamma0_side: str = "A"

    def __post_init__(self):
        alphas = tuple(complex(a) for a in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        side = "".join(self.side).upper()
        object.__setattr__(self, "side", side)
        if len(side) != len(alphas):
            raise SequenceMismatch(
                f"side word has length {len(side)} but there are {len(alphas)} poles")
        if set(side) - {"A", "B"}:
            raise BadSpec(f"side word may only contain A and B, got {side!r}")
        if self.gamma0_side not in ("A", "B"):
            raise BadSpec("gamma0_side must be 'A' or 'B'")
        for a in alphas:
            if not (math.isfinite(a.real) and math.isfinite(a.imag)):
                raise BadSpec("non-finite alpha")
            if abs(a) >= 1.0 - TOL_CIRCLE:
                raise BadSpec(f"alpha {a} is not strictly inside the unit disk")

    @classmethod
    def from_gammas(cls, gammas: Iterable, gamma0: ExtComplex = 0j) -> "GammaSequence":
        alphas, side = [], []
        for g in gammas:
            g = as_ext(g)
            if on_circle(g):
                raise BadSpec(f"pole {g} lies on the unit circle")
            if g is INF or abs(g) > 1:
                alphas.append(substar(g))
                side.append("B")
            else:
                alphas.append(g)
                side.append("A")
        g0 = as_ext(gamma0)
        if g0 is INF:
            g0side = "B"
        elif g0 == 0:
            g0side = "A"
        else:
            raise BadSpec("gamma_0 must be 0 or infinity")
        return cls(tuple(alphas), "".join(side), g0side)

    @property
    def N(self) -> int:
        return len(self.alphas)

    def prefix(self, n: int) -> "GammaSequence":
        if n > self.N:
            raise SequenceMismatch(f"sequence has only {self.N} poles, {n} requested")
        return GammaSequence(self.alphas[:n], self.side[:n], self.gamma0_side)

    def side_of(self, j: int) -> str:
        return self.gamma0_side if j == 0 else self.side[j - 1]

    def alpha(self, j: int) -> complex:
        return 0j if j == 0 else self.alphas[j - 1]

    def beta(self, j: int) -> ExtComplex:
        return substar(self.alpha(j))

    def gamma(self, j: int) -> ExtComplex:
        return self.alpha(j) if self.side_of(j) == "A" else self.beta(j)

    @property
    def gammas(self) -> tuple:
        return tuple(self.gamma(j) for j in range(1, self.N + 1))

    def nu(self, kind: str, j: int) -> ExtComplex:
        """Pole parameter of index ``j`` for kind ``A`` (alpha), ``B`` (beta) or ``G``."""
        if kind == "A":
            return self.alpha(j)
        if kind == "B":
            return self.beta(j)
        if kind == "G":
            return self.gamma(j)
        raise BadSpec(f"unknown kind {kind!r}")

    def nus(self, kind: str, n: int) -> tuple:
        """Parameters ``nu_1..nu_n``."""
        return tuple(self.nu(kind, j) for j in range(1, n + 1))

    def sigma(self, j: int) -> complex:
        return u_map(self.alpha(j))

    def varsigma(self, n: int) -> complex:
        """Product of the phases ``sigma_1..sigma_n`` (1 for ``n <= 0``)."""
        out = 1.0 + 0j
        for j in range(1, n + 1):
            out *= self.sigma(j)
        return out

    def a_indices(self, n: int) -> list:
        return [j for j in range(1, n + 1) if self.side[j - 1] == "A"]

    def b_indices(self, n: int) -> list:
        return [j for j in range(1, n + 1) if self.side[j - 1] == "B"]


@dataclass(frozen=True)
class BlaschkeValues:
    Bn: complex
    dBnA: complex
    dBnB: complex
    BnAlpha: complex
    BnBeta: complex
    varsigma_n: complex
    dvarsigmaA: complex
    dvarsigmaB: complex


def blaschke_products(seq: GammaSequence, n: int, z: complex) -> BlaschkeValues:
    """All Blaschke products of level ``n`` at a finite point ``z``.

    ``dBnA``/``dBnB`` are the partial products over the disk-side and
    exterior-side indices (using the alpha and beta factors respectively);
    ``Bn`` is whichever of the two matches the side of index ``n``.
    """
    if n > seq.N:
        raise SequenceMismatch(f"level {n} exceeds sequence length {seq.N}")
    a_idx = seq.a_indices(n)
    b_idx = seq.b_indices(n)
    BA = blaschke_product([seq.alpha(j) for j in range(1, n + 1)], z)
    BB = blaschke_product([seq.beta(j) for j in range(1, n + 1)], z)
    dA = blaschke_product([seq.alpha(j) for j in a_idx], z)
    dB = blaschke_product([seq.beta(j) for j in b_idx], z)
    vs = seq.varsigma(n)
    vsA = 1.0 + 0j
    for j in a_idx:
        vsA *= seq.sigma(j)
    vsB = 1.0 + 0j
    for j in b_idx:
        vsB *= seq.sigma(j)
    Bn = 1.0 + 0j if n == 0 else (dA if seq.side_of(n) == "A" else dB)
    return BlaschkeValues(Bn, dA, dB, BA, BB, vs, vsA, vsB)


def phase(z: complex) -> complex:
    """Unit complex number with the argument of ``z`` (1 for ``z = 0``)."""
    return 1.0 + 0j if z == 0 else z / abs(z)


def turns_to_unimodular(t: float) -> complex:
    return cmath.exp(2j * math.pi * t)
