"""Forward-mode jets for chart maps: exact first and second derivatives.

A chart map is a plain Python callable taking one or more coordinate
sequences and returning a sequence of scalars (or a single scalar).  It must
be built from the smooth primitives +, -, *, /, jet_sqrt and jet_exp, which
accept floats and jet scalars alike.  Derivatives are propagated exactly
(to floating-point rounding) by evaluating the map over Dual / PairJet
scalars; second derivatives are taken one direction pair at a time.

An independent central-difference oracle (``fd_oracle``) mirrors the jet
evaluator's output shape for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from moufang._backend import BACKEND, Dual, PairJet
from moufang.errors import JetDomainError

__all__ = [
    "BACKEND",
    "DerivativeRequest",
    "Jet2Scalar",
    "DEFAULT_FD_STEP_ORDER1",
    "DEFAULT_FD_STEP_ORDER2",
    "jet_sqrt",
    "jet_exp",
    "jet_value",
    "first_derivative",
    "pair_derivative",
    "lift_map",
    "fd_oracle",
    "jacobian_g",
    "jacobian_h",
]

DEFAULT_FD_STEP_ORDER1 = 1e-5
DEFAULT_FD_STEP_ORDER2 = 1e-4

_SLOT_NAMES = {"first": 0, "second": 1}


def jet_sqrt(x):
    """Square root over floats and jet scalars; raises JetDomainError for x <= 0."""
    if isinstance(x, (int, float)):
        if x <= 0.0:
            raise JetDomainError(f"sqrt of nonpositive value {x!r}")
        return math.sqrt(x)
    return x.sqrt()


def jet_exp(x):
    """Exponential over floats and jet scalars."""
    if isinstance(x, (int, float)):
        return math.exp(x)
    return x.exp()


def jet_value(x) -> float:
    """Plain value of a float or (possibly nested) jet scalar."""
    while not isinstance(x, (int, float)):
        x = x.re
    return float(x)


@dataclass(frozen=True)
class DerivativeRequest:
    """Which derivatives to extract from a map.

    ``indices`` are the perturbed coordinates; ``which_argument`` says, per
    index, whether it belongs to the map's first or second argument (a single
    string is broadcast to all indices).  ``order`` is 1 or 2; order 2
    produces the full matrix of second derivatives over the active
    directions, one pair at a time.
    """

    which_argument: str | tuple[str, ...]
    indices: tuple[int, ...]
    order: int = 1

    def directions(self) -> list[tuple[int, int]]:
        """Normalized list of (argument slot, coordinate index) pairs."""
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")
        which = self.which_argument
        if isinstance(which, str):
            which = (which,) * len(self.indices)
        if len(which) != len(self.indices):
            raise ValueError("which_argument and indices length mismatch")
        dirs = []
        for name, idx in zip(which, self.indices):
            if name not in _SLOT_NAMES:
                raise ValueError(f"which_argument entries must be 'first' or 'second', got {name!r}")
            if idx < 0:
                raise ValueError(f"coordinate index must be nonnegative, got {idx}")
            dirs.append((_SLOT_NAMES[name], int(idx)))
        return dirs


@dataclass(frozen=True)
class Jet2Scalar:
    """One output component: value, first derivatives, optional second-derivative matrix."""

    value: float
    first: np.ndarray
    second: np.ndarray | None = None


def _components(out) -> tuple:
    if isinstance(out, (list, tuple)):
        return tuple(out)
    return (out,)


def _floats(arg: Sequence[float]) -> list[float]:
    return [float(c) for c in arg]


def _check_dirs(dirs, args):
    for slot, idx in dirs:
        if slot >= len(args):
            raise ValueError(f"map takes {len(args)} argument(s); no argument #{slot + 1}")
        if idx >= len(args[slot]):
            raise ValueError(f"coordinate index {idx} out of range for argument of length {len(args[slot])}")


def first_derivative(map_fn, args, slot: int, index: int, backend=None):
    """Value and d/d(args[slot][index]) of every output component.

    Returns (values, derivs) as float arrays.
    """
    dual = Dual if backend is None else backend.Dual
    seeded = []
    for s, arg in enumerate(args):
        vals = _floats(arg)
        if s == slot:
            vals[index] = dual(vals[index], 1.0)
        seeded.append(tuple(vals))
    try:
        out = _components(map_fn(*seeded))
    except JetDomainError as err:
        raise JetDomainError(f"{err} (map evaluated near {tuple(_floats(a) for a in args)})") from None
    n = len(out)
    values = np.empty(n)
    derivs = np.empty(n)
    for i, c in enumerate(out):
        if isinstance(c, (int, float)):
            values[i] = c
            derivs[i] = 0.0
        else:
            values[i] = c.re
            derivs[i] = c.du
    return values, derivs


def pair_derivative(map_fn, args, dir1: tuple[int, int], dir2: tuple[int, int], backend=None):
    """Second-order evaluation along an ordered pair of directions.

    ``dir1``/``dir2`` are (argument slot, coordinate index).  Returns
    (values, d1, d2, d12) arrays: the mixed second derivative of output i
    along the pair is d12[i].
    """
    pair = PairJet if backend is None else backend.PairJet
    seeded = []
    for s, arg in enumerate(args):
        vals = _floats(arg)
        for idx in range(len(vals)):
            s1 = 1.0 if (s, idx) == tuple(dir1) else 0.0
            s2 = 1.0 if (s, idx) == tuple(dir2) else 0.0
            if s1 or s2:
                vals[idx] = pair(vals[idx], s1, s2, 0.0)
        seeded.append(tuple(vals))
    try:
        out = _components(map_fn(*seeded))
    except JetDomainError as err:
        raise JetDomainError(f"{err} (map evaluated near {tuple(_floats(a) for a in args)})") from None
    n = len(out)
    values = np.empty(n)
    d1 = np.empty(n)
    d2 = np.empty(n)
    d12 = np.empty(n)
    for i, c in enumerate(out):
        if isinstance(c, (int, float)):
            values[i] = c
            d1[i] = d2[i] = d12[i] = 0.0
        else:
            values[i] = c.re
            d1[i] = c.e1
            d2[i] = c.e2
            d12[i] = c.e12
    return values, d1, d2, d12


def lift_map(map_fn: Callable, request: DerivativeRequest) -> Callable:
    """Turn a chart map into an evaluator returning one Jet2Scalar per output.

    The evaluator takes the same arguments as ``map_fn`` (coordinate
    sequences) and returns exact derivatives for the request's directions.
    With no active directions it reproduces plain evaluation.
    """
    dirs = request.directions()
    k = len(dirs)

    def evaluate(*args) -> list[Jet2Scalar]:
        _check_dirs(dirs, args)
        if k == 0:
            out = _components(map_fn(*tuple(tuple(_floats(a)) for a in args)))
            return [Jet2Scalar(float(c), np.zeros(0), None) for c in out]
        if request.order == 1:
            values = None
            firsts = []
            for d in dirs:
                values, der = first_derivative(map_fn, args, d[0], d[1])
                firsts.append(der)
            first = np.stack(firsts, axis=1)
            return [Jet2Scalar(values[i], first[i], None) for i in range(len(values))]
        # order 2: one evaluation per unordered direction pair; the diagonal
        # evaluations also supply the first derivatives.
        nout = None
        first = None
        second = None
        for a in range(k):
            for b in range(a, k):
                values, d1, _, d12 = pair_derivative(map_fn, args, dirs[a], dirs[b])
                if nout is None:
                    nout = len(values)
                    first = np.empty((nout, k))
                    second = np.empty((nout, k, k))
                if a == b:
                    first[:, a] = d1
                second[:, a, b] = d12
                second[:, b, a] = d12
        return [Jet2Scalar(values[i], first[i], second[i]) for i in range(nout)]

    return evaluate


def fd_oracle(map_fn: Callable, point, request: DerivativeRequest, step: float | None = None) -> list:
    """Central-difference estimate with the same output shape as lift_map.

    ``point`` is the argument tuple (a single sequence is accepted for
    one-argument maps).  Defaults: step 1e-5 for first derivatives, 1e-4 for
    second derivatives; an explicit ``step`` overrides both and must lie in
    (0, 1e-2].
    """
    if step is not None and not 0.0 < step <= 1e-2:
        raise ValueError(f"fd step must be in (0, 1e-2], got {step}")
    args = tuple(point) if isinstance(point, tuple) else (point,)
    args = tuple(tuple(_floats(a)) for a in args)
    dirs = request.directions()
    _check_dirs(dirs, args)
    k = len(dirs)

    def shifted(*moves):  # moves: (slot, index, delta)
        new = [list(a) for a in args]
        for slot, idx, delta in moves:
            new[slot][idx] += delta
        return np.asarray(_components(map_fn(*tuple(tuple(a) for a in new))), dtype=float)

    values = shifted()
    h1 = step if step is not None else DEFAULT_FD_STEP_ORDER1
    first = np.empty((len(values), k))
    for a, (slot, idx) in enumerate(dirs):
        first[:, a] = (shifted((slot, idx, h1)) - shifted((slot, idx, -h1))) / (2.0 * h1)
    if request.order == 1:
        return [Jet2Scalar(values[i], first[i], None) for i in range(len(values))]
    h2 = step if step is not None else DEFAULT_FD_STEP_ORDER2
    second = np.empty((len(values), k, k))
    for a in range(k):
        for b in range(a, k):
            sa, sb = dirs[a], dirs[b]
            est = (
                shifted((sa[0], sa[1], h2), (sb[0], sb[1], h2))
                - shifted((sa[0], sa[1], h2), (sb[0], sb[1], -h2))
                - shifted((sa[0], sa[1], -h2), (sb[0], sb[1], h2))
                + shifted((sa[0], sa[1], -h2), (sb[0], sb[1], -h2))
            ) / (4.0 * h2 * h2)
            second[:, a, b] = est
            second[:, b, a] = est
    return [Jet2Scalar(values[i], first[i], second[i]) for i in range(len(values))]


def jacobian_g(loop, g, h) -> np.ndarray:
    """J[i, s] = d(gh)^i / dg^s at (g, h)."""
    loop.check_point(g)
    loop.check_point(h)
    n = loop.dim
    J = np.empty((n, n))
    for s in range(n):
        _, J[:, s] = first_derivative(loop.multiply, (g, h), 0, s)
    return J


def jacobian_h(loop, g, h) -> np.ndarray:
    """J[i, s] = d(gh)^i / dh^s at (g, h)."""
    loop.check_point(g)
    loop.check_point(h)
    n = loop.dim
    J = np.empty((n, n))
    for s in range(n):
        _, J[:, s] = first_derivative(loop.multiply, (g, h), 1, s)
    return J
