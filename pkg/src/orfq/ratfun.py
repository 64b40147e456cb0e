"""Rational functions ``p(z) / prod_j varpi(nu_j, z)`` with an explicit formal degree."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import PoleHit, SpaceMismatch
from .extc import INF, ExtComplex, as_ext, substar as ext_substar, u_map, varpi_coeffs

TOL_EVAL_POLE = 1e-13


def _as_coeffs(c) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(c, dtype=complex)).copy()
    if arr.ndim != 1:
        raise ValueError("coefficients must be one-dimensional")
    return arr


def pad(c, length: int) -> np.ndarray:
    """Pad (or trim negligible trailing entries of) ``c`` to exactly ``length`` entries."""
    c = _as_coeffs(c)
    if len(c) > length:
        tail = c[length:]
        scale = max(np.max(np.abs(c)), 1e-300)
        if np.any(np.abs(tail) > 1e-13 * scale):
            raise SpaceMismatch(
                f"polynomial of degree {len(c) - 1} does not fit formal degree {length - 1}")
        return c[:length].copy()
    out = np.zeros(length, dtype=complex)
    out[: len(c)] = c
    return out


def poly_at(p, z: ExtComplex, degree: int | None = None):
    """Evaluate a polynomial given by ascending coefficients.

    At infinity the value is the coefficient of ``z**degree`` (the formal
    degree, defaulting to ``len(p) - 1``).
    """
    p = _as_coeffs(p)
    if z is INF:
        d = len(p) - 1 if degree is None else degree
        return p[d] if d < len(p) else 0j
    return P.polyval(z, p)


def numerator_star(p, n: int) -> np.ndarray:
    """Coefficient-reversed conjugate ``z**n conj(p(1/conj(z)))`` of formal degree ``n``."""
    p = pad(p, n + 1)
    return np.conj(p[::-1]).copy()


def poles_poly(poles) -> np.ndarray:
    """Ascending coefficients of ``prod varpi(nu, z)`` over ``poles``."""
    out = np.array([1.0 + 0j])
    for nu in poles:
        out = P.polymul(out, varpi_coeffs(nu, "plain"))
    return out


def _lead(nu: ExtComplex) -> complex:
    return -1.0 + 0j if nu is INF else -complex(nu).conjugate()


@dataclass(frozen=True)
class RationalFunction:
    """``num(z) / prod_j varpi(den_poles[j], z)`` of formal degree ``n``.

    ``num`` holds ascending monomial coefficients padded to length ``n + 1``.
    """

    num: np.ndarray
    den_poles: tuple = ()
    n: int | None = None
    _den: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        poles = tuple(as_ext(v) for v in self.den_poles)
        num = _as_coeffs(self.num)
        n = self.n
        if n is None:
            n = max(len(num) - 1, len(poles))
        if len(poles) > n:
            raise SpaceMismatch("more denominator factors than the formal degree")
        num = pad(num, n + 1)
        num.setflags(write=False)
        den = poles_poly(poles)
        den.setflags(write=False)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den_poles", poles)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "_den", den)

    @property
    def den(self) -> np.ndarray:
        return self._den

    def __call__(self, z):
        return evaluate(self, z)

    def scaled(self, c: complex) -> "RationalFunction":
        return RationalFunction(self.num * c, self.den_poles, self.n)

    def __repr__(self):
        return f"RationalFunction(n={self.n}, num={np.round(self.num, 6)}, poles={self.den_poles})"


def constant(c: complex, poles=(), n: int | None = None) -> RationalFunction:
    """The constant ``c`` expressed over the given denominator."""
    poles = tuple(as_ext(v) for v in poles)
    return RationalFunction(complex(c) * poles_poly(poles), poles, len(poles) if n is None else n)


def evaluate(f: RationalFunction, z):
    """Value of ``f`` at ``z``.

    ``z`` may be a scalar, an array of finite points, or :data:`INF`.  At
    infinity the leading-coefficient convention is used: the coefficient of
    ``z**n`` of the numerator over the product of the leading coefficients of
    the denominator factors.
    """
    if z is INF:
        nonzero = [nu for nu in f.den_poles if nu is INF or nu != 0]
        lead = 1.0 + 0j
        for nu in nonzero:
            lead *= _lead(nu)
        if len(nonzero) == len(f.den_poles):
            return f.num[f.n] / lead
        # factors with parameter 0 are the constant 1 and carry no degree
        k = len(nonzero)
        scale = max(np.max(np.abs(f.num)), 1e-300)
        if np.any(np.abs(f.num[k + 1:]) > 1e-14 * scale):
            raise PoleHit("pole at infinity")
        return f.num[k] / lead
    zz = np.asarray(z, dtype=complex)
    num = P.polyval(zz, f.num)
    den = P.polyval(zz, f.den)
    scale = P.polyval(np.abs(zz), np.abs(f.den))
    if np.any(np.abs(den) <= TOL_EVAL_POLE * scale):
        raise PoleHit(f"evaluation at a pole of {f!r}")
    out = num / den
    return complex(out) if np.ndim(out) == 0 else out


def substar(f: RationalFunction) -> RationalFunction:
    """``g(z) = conj(f(1/conj(z)))`` with reflected denominator parameters."""
    n, m = f.n, len(f.den_poles)
    pstar = numerator_star(f.num, n)
    const = 1.0 + 0j
    poles = []
    for nu in f.den_poles:
        # conj(varpi(nu, 1/conj(z))) = (z - nu)/z = c * varpi(nu_*, z)/z
        const *= -1.0 if (nu is INF or nu == 0) else -complex(nu)
        poles.append(ext_substar(nu))
    # the remaining z**(n-m) is expressed through factors with parameter infinity
    const *= (-1.0) ** (n - m)
    poles.extend([INF] * (n - m))
    return RationalFunction(pstar / const, tuple(poles), n)


def _key(nu):
    if nu is INF:
        return ("inf",)
    return (round(nu.real, 13), round(nu.imag, 13))


def _pole_counter(poles) -> Counter:
    return Counter(_key(v) for v in poles)


def lift(f: RationalFunction, poles, n: int | None = None) -> RationalFunction:
    """Rewrite ``f`` over the larger denominator given by ``poles``."""
    poles = tuple(as_ext(v) for v in poles)
    n = len(poles) if n is None else n
    have = _pole_counter(f.den_poles)
    need = _pole_counter(poles)
    if have - need:
        raise SpaceMismatch("function has poles outside the target space")
    missing = []
    left = have.copy()
    for nu in poles:
        k = _key(nu)
        if left[k] > 0:
            left[k] -= 1
        else:
            missing.append(nu)
    num = P.polymul(f.num, poles_poly(missing))
    return RationalFunction(pad(num, n + 1), poles, n)


def star_in(f: RationalFunction, poles, n: int | None = None) -> RationalFunction:
    """Space-relative star conjugate in the span with denominator parameters ``poles``.

    Equals the full Blaschke product of the space times ``substar(f)``; on
    numerators this is ``prod(sigma) * numerator_star(p, n)`` over the same
    denominator.
    """
    poles = tuple(as_ext(v) for v in poles)
    n = len(poles) if n is None else n
    g = lift(f, poles, n)
    vs = 1.0 + 0j
    for nu in poles:
        vs *= u_map(nu)
    return RationalFunction(vs * numerator_star(g.num, n), poles, n)


def star(f: RationalFunction, seq, n: int, kind: str) -> RationalFunction:
    """Star conjugate in the space of level ``n`` of the given kind (A, B or G)."""
    return star_in(f, seq.nus(kind, n), n)


def derivative_at(f: RationalFunction, z):
    """Complex derivative of ``f`` at finite ``z`` by the quotient rule."""
    zz = np.asarray(z, dtype=complex)
    p = P.polyval(zz, f.num)
    dp = P.polyval(zz, P.polyder(f.num)) if f.n > 0 else 0 * zz
    d = P.polyval(zz, f.den)
    dd = P.polyval(zz, P.polyder(f.den)) if len(f.den) > 1 else 0 * zz
    if np.any(np.abs(d) <= TOL_EVAL_POLE):
        raise PoleHit("derivative at a pole")
    out = (dp * d - p * dd) / d**2
    return complex(out) if np.ndim(out) == 0 else out


def linear_combination(coeffs, funcs, poles=None, n=None) -> RationalFunction:
    """``sum c_k f_k`` expressed over a common denominator."""
    if poles is None:
        poles = max((f.den_poles for f in funcs), key=len)
    poles = tuple(poles)
    n = len(poles) if n is None else n
    num = np.zeros(n + 1, dtype=complex)
    for c, f in zip(coeffs, funcs):
        num += c * lift(f, poles, n).num
    return RationalFunction(num, poles, n)


def chebyshev_circle_points(m: int) -> np.ndarray:
    """``m`` points on the unit circle at Chebyshev-distributed angles."""
    k = np.arange(m)
    theta = math.pi * np.cos(math.pi * (k + 0.5) / m) + 0.1
    return np.exp(1j * theta)


def equal(f: RationalFunction, g: RationalFunction, tol: float = 1e-10) -> bool:
    """Equality by evaluation at ``2n + 8`` Chebyshev-spaced points of the circle."""
    m = 2 * max(f.n, g.n) + 8
    z = chebyshev_circle_points(m)
    return bool(np.max(np.abs(evaluate(f, z) - evaluate(g, z))) <= tol)
