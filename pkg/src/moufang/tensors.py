"""Tensor fields of a loop chart: translation generators and their derived tensors.

Conventions (all indices 0-based, arrays laid out with the output index
first):

  u[s, j](g) = d m^s(h, g) / dh^j  at h = e   (left-translation generator)
  v[s, j](g) = d m^s(g, h) / dh^j  at h = e   (right-translation generator)
  w = -(u + v)

  C[i, j, k] = bracket_sign * (a[i, k, j] - a[i, j, k]),
  a[i, j, k] = d^2 m^i / dg^j dh^k at (e, e)

The tangent bracket is [x, y]^i = C[i, j, k] x^j y^k.  bracket_sign = +1 is
the calibrated default: it is the unique sign for which the Maurer-Cartan
commutator relations close on nonabelian groups (see suites.calibrate_conventions).

Secondary tensors (antisymmetric in the last two indices):

  u_jk[s, j, k] = u[p, k] du[s, j, p] - u[p, j] du[s, k, p]   (same for v, w)
  y_jk = (u_jk + v_jk + w_jk) / 6
  lr[s, j, k] = u[p, j] dv[s, k, p] - v[p, k] du[s, j, p]     ([L, R] coefficients)
  rl[s, j, k] = v[p, j] du[s, k, p] - u[p, k] dv[s, j, p]     ([R, L] coefficients)

w_jk is computed from w's own antisymmetrized formula (w and dw), never by
combining u_jk and v_jk, whose relation to it is quadratic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from moufang.jets import first_derivative, pair_derivative

__all__ = [
    "AuxTensors",
    "SecondaryTensors",
    "StructureConstants",
    "ConventionLedger",
    "DEFAULT_CONVENTIONS",
    "aux_tensors",
    "aux_derivatives",
    "structure_constants",
    "secondary_tensors",
    "field_eval",
    "yamagutian_eval",
]


@dataclass(frozen=True)
class AuxTensors:
    """Generator matrices u, v, w at a point; u + v + w = 0 by construction."""

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray


@dataclass(frozen=True)
class SecondaryTensors:
    """Commutator-coefficient tensors at a point, antisymmetric in (j, k)."""

    u_jk: np.ndarray
    v_jk: np.ndarray
    w_jk: np.ndarray
    y_jk: np.ndarray
    lr_jk: np.ndarray
    rl_jk: np.ndarray


@dataclass(frozen=True)
class StructureConstants:
    """Tangent-bracket coefficients C[i, j, k], antisymmetric in (j, k)."""

    c: np.ndarray
    bracket_sign: int = 1


@dataclass(frozen=True)
class ConventionLedger:
    """The two sign conventions the identity families depend on.

    bracket_sign scales the structure constants; lemma_sign scales the
    C-terms of the LEMMA family as displayed.  The defaults are the unique
    assignment that calibration finds on nonabelian loops.
    """

    bracket_sign: int = 1
    lemma_sign: int = -1


DEFAULT_CONVENTIONS = ConventionLedger()


def aux_tensors(loop, g) -> AuxTensors:
    """Generator matrices at g (exact jet derivatives)."""
    loop.check_point(g)
    n = loop.dim
    e = loop.identity
    u = np.empty((n, n))
    v = np.empty((n, n))
    for j in range(n):
        _, u[:, j] = first_derivative(loop.multiply, (e, g), 0, j)
        _, v[:, j] = first_derivative(loop.multiply, (g, e), 1, j)
    return AuxTensors(u=u, v=v, w=-(u + v))


def aux_derivatives(loop, g):
    """du[s, j, p] = d u[s, j] / dg^p and likewise dv, via mixed second jets."""
    loop.check_point(g)
    n = loop.dim
    e = loop.identity
    du = np.empty((n, n, n))
    dv = np.empty((n, n, n))
    for j in range(n):
        for p in range(n):
            _, _, _, du[:, j, p] = pair_derivative(loop.multiply, (e, g), (0, j), (1, p))
            _, _, _, dv[:, j, p] = pair_derivative(loop.multiply, (g, e), (1, j), (0, p))
    return du, dv


def structure_constants(loop, bracket_sign: int = 1) -> StructureConstants:
    """Antisymmetrized mixed second partials of the multiplication at the identity."""
    n = loop.dim
    e = loop.identity
    a = np.empty((n, n, n))
    for j in range(n):
        for k in range(n):
            _, _, _, a[:, j, k] = pair_derivative(loop.multiply, (e, e), (0, j), (1, k))
    return StructureConstants(c=bracket_sign * (a.transpose(0, 2, 1) - a), bracket_sign=bracket_sign)


def secondary_tensors(loop, g) -> SecondaryTensors:
    """Commutator-coefficient tensors at g."""
    aux = aux_tensors(loop, g)
    du, dv = aux_derivatives(loop, g)
    dw = -(du + dv)

    def antisym(m, dm):
        a = np.einsum("sjp,pk->sjk", dm, m)
        return a - a.transpose(0, 2, 1)

    u_jk = antisym(aux.u, du)
    v_jk = antisym(aux.v, dv)
    w_jk = antisym(aux.w, dw)
    lr = np.einsum("pj,skp->sjk", aux.u, dv) - np.einsum("pk,sjp->sjk", aux.v, du)
    rl = np.einsum("pj,skp->sjk", aux.v, du) - np.einsum("pk,sjp->sjk", aux.u, dv)
    return SecondaryTensors(
        u_jk=u_jk,
        v_jk=v_jk,
        w_jk=w_jk,
        y_jk=(u_jk + v_jk + w_jk) / 6.0,
        lr_jk=lr,
        rl_jk=rl,
    )


_FIELDS = {"L": "u", "R": "v", "M": "w"}


def field_eval(loop, which: str, x, g) -> np.ndarray:
    """Value at g of the translation field L_x, R_x or M_x."""
    if which not in _FIELDS:
        raise ValueError(f"which must be one of {sorted(_FIELDS)}, got {which!r}")
    aux = aux_tensors(loop, g)
    return getattr(aux, _FIELDS[which]) @ np.asarray(x, dtype=float)


def yamagutian_eval(loop, x, y, g) -> np.ndarray:
    """Value at g of the Yamagutian Y(x; y) = -x^j y^k Y[s, j, k] d_s."""
    sec = secondary_tensors(loop, g)
    return -np.einsum("sjk,j,k->s", sec.y_jk, np.asarray(x, dtype=float), np.asarray(y, dtype=float))
