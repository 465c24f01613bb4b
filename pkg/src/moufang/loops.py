"""Concrete local analytic loops in charts centered at the identity.

Points are plain float vectors (numpy arrays) of chart coordinates; the
identity is the origin.  Chart maps are generic over jet scalars so the jet
engine can differentiate them.

Built-in loops (loop-spec grammar: ``name`` or ``name:key=value``):

  abelian:n=<k>     (R^k, +)
  affine            2-dim nonabelian group (a1+a2, b1 + e^{a1} b2)
  quaternion        unit quaternions, orthographic chart on the imaginary part
  octonion          unit octonions, same chart construction
  broken:eps=<e>    octonion chart with the first output coordinate perturbed
                    by e * (g^1)^2 (h^1)^2 -- a deliberate non-Moufang control
                    that still satisfies both unit laws

The composition-algebra products come from the Cayley-Dickson doubling
(a,b)(c,d) = (ac - conj(d) b, da + b conj(c)) applied recursively from the
reals, which fixes the multiplication table (e1 e2 = e3 and so on; see the
``table`` CLI command).
"""

from __future__ import annotations

import numpy as np

from moufang.errors import ChartDomainError, ChartExitError, LoopSpecError
from moufang.jets import jet_exp, jet_sqrt, jet_value

__all__ = [
    "LoopChart",
    "cd_product",
    "cd_conjugate",
    "sphere_chart_multiply",
    "builtin",
    "moufang_residual",
    "basis_table",
    "BUILTIN_NAMES",
    "DEFAULT_SAMPLE_RADIUS",
    "SPHERE_SAMPLE_RADIUS_MAX",
]

# Sampling defaults: 0.2 keeps every product of up to four sampled factors
# well inside the sphere charts; 0.3 is the documented hard cap there.
DEFAULT_SAMPLE_RADIUS = 0.2
SPHERE_SAMPLE_RADIUS_MAX = 0.3

BUILTIN_NAMES = ("abelian", "affine", "quaternion", "octonion", "broken")


class LoopChart:
    """A smooth multiplication map on chart coordinates, identity at the origin."""

    def __init__(self, name, dim, multiply, spec=None, domain_radius=None, max_sample_radius=None):
        self.name = name
        self.dim = dim
        self.multiply = multiply  # generic over jet scalars
        self.spec = spec if spec is not None else name
        self.domain_radius = domain_radius
        self.max_sample_radius = max_sample_radius

    def __repr__(self):
        return f"LoopChart({self.spec!r}, dim={self.dim})"

    @property
    def identity(self) -> np.ndarray:
        return np.zeros(self.dim)

    def check_point(self, x):
        if len(x) != self.dim:
            raise ChartDomainError(f"point of length {len(x)} on a {self.dim}-dim chart")
        if self.domain_radius is not None:
            r = float(np.linalg.norm(np.asarray(x, dtype=float)))
            if r >= self.domain_radius:
                raise ChartDomainError(
                    f"point with norm {r:.6g} outside chart of {self.name} (radius {self.domain_radius})"
                )

    def product(self, g, h) -> np.ndarray:
        """Numeric multiplication with domain checks."""
        self.check_point(g)
        self.check_point(h)
        out = self.multiply(tuple(float(c) for c in g), tuple(float(c) for c in h))
        return np.array([float(c) for c in out])


def cd_conjugate(a):
    """Conjugation: negate every non-real component."""
    a = np.asarray(a, dtype=float)
    out = -a
    out[0] = a[0]
    return out


def _conj(a):
    return (a[0],) + tuple(-c for c in a[1:])


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _cd(a, b):
    """Cayley-Dickson product on scalar tuples, generic over jet scalars."""
    n = len(a)
    if n == 1:
        return (a[0] * b[0],)
    m = n // 2
    a1, a2 = a[:m], a[m:]
    b1, b2 = b[:m], b[m:]
    return _sub(_cd(a1, b1), _cd(_conj(b2), a2)) + _add(_cd(b2, a1), _cd(a2, _conj(b1)))


def cd_product(a, b) -> np.ndarray:
    """Product of two composition-algebra elements (dimension 4 or 8)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if a.ndim != 1 or len(a) not in (4, 8):
        raise ValueError(f"expected vectors of length 4 or 8, got shape {a.shape}")
    return np.array(_cd(tuple(a), tuple(b)))


def _embed(x):
    """Unit-sphere embedding: imaginary part x, real part sqrt(1 - |x|^2)."""
    nx = x[0] * x[0]
    for c in x[1:]:
        nx = nx + c * c
    return (jet_sqrt(1.0 - nx),) + tuple(x)


def sphere_chart_multiply(k: int, x, y):
    """Chart multiplication for unit quaternions (k=2) or octonions (k=3).

    Embeds both arguments on the unit sphere, multiplies, and projects back
    to the imaginary components.  Raises ChartExitError when the product's
    real component is not positive.
    """
    if k not in (2, 3):
        raise ValueError(f"k must be 2 (quaternions) or 3 (octonions), got {k}")
    z = _cd(_embed(x), _embed(y))
    if jet_value(z[0]) <= 0.0:
        raise ChartExitError(f"product left the chart (real component {jet_value(z[0]):.6g})")
    return z[1:]


def _abelian_multiply(g, h):
    return tuple(a + b for a, b in zip(g, h))


def _affine_multiply(g, h):
    return (g[0] + h[0], g[1] + jet_exp(g[0]) * h[1])


def _quaternion_multiply(g, h):
    return sphere_chart_multiply(2, g, h)


def _octonion_multiply(g, h):
    return sphere_chart_multiply(3, g, h)


def _broken_multiply(eps):
    def multiply(g, h):
        out = list(sphere_chart_multiply(3, g, h))
        out[0] = out[0] + eps * ((g[0] * g[0]) * (h[0] * h[0]))
        return tuple(out)

    return multiply


def _parse_spec(spec: str):
    head, sep, tail = spec.partition(":")
    if head not in BUILTIN_NAMES:
        raise LoopSpecError(f"unknown loop {head!r}; expected one of {', '.join(BUILTIN_NAMES)}")
    if not sep:
        return head, None, None
    key, eq, value = tail.partition("=")
    if not eq or not key or not value:
        raise LoopSpecError(f"malformed loop parameter {tail!r}; expected key=value")
    return head, key, value


def builtin(spec: str) -> LoopChart:
    """Construct a built-in loop from its loop-spec string."""
    name, key, value = _parse_spec(spec)
    if name == "abelian":
        if key != "n":
            raise LoopSpecError("abelian requires a dimension, e.g. abelian:n=3")
        try:
            n = int(value)
        except ValueError:
            raise LoopSpecError(f"abelian dimension must be an integer, got {value!r}") from None
        if n < 1:
            raise LoopSpecError(f"abelian dimension must be >= 1, got {n}")
        return LoopChart("abelian", n, _abelian_multiply, spec=f"abelian:n={n}")
    if name == "broken":
        if key != "eps":
            raise LoopSpecError("broken requires a perturbation, e.g. broken:eps=0.01")
        try:
            eps = float(value)
        except ValueError:
            raise LoopSpecError(f"broken eps must be a number, got {value!r}") from None
        return LoopChart(
            "broken",
            7,
            _broken_multiply(eps),
            spec=f"broken:eps={value}",
            domain_radius=1.0,
            max_sample_radius=SPHERE_SAMPLE_RADIUS_MAX,
        )
    if key is not None:
        raise LoopSpecError(f"loop {name!r} takes no parameters, got {key!r}")
    if name == "affine":
        return LoopChart("affine", 2, _affine_multiply)
    if name == "quaternion":
        return LoopChart(
            "quaternion",
            3,
            _quaternion_multiply,
            domain_radius=1.0,
            max_sample_radius=SPHERE_SAMPLE_RADIUS_MAX,
        )
    return LoopChart(
        "octonion",
        7,
        _octonion_multiply,
        domain_radius=1.0,
        max_sample_radius=SPHERE_SAMPLE_RADIUS_MAX,
    )


def moufang_residual(loop: LoopChart, g, h, k) -> np.ndarray:
    """Componentwise residual of (gh)(kg) - g((hk)g)."""
    left = loop.product(loop.product(g, h), loop.product(k, g))
    right = loop.product(g, loop.product(loop.product(h, k), g))
    return left - right


def basis_table(dim: int):
    """Basis products e_i e_j of the dimension-4 or -8 algebra.

    Returns (sign, index) integer matrices with e_i e_j = sign[i][j] * e_{index[i][j]}.
    """
    if dim not in (4, 8):
        raise ValueError(f"table dimension must be 4 or 8, got {dim}")
    sign = np.zeros((dim, dim), dtype=int)
    index = np.zeros((dim, dim), dtype=int)
    for i in range(dim):
        for j in range(dim):
            e_i = np.zeros(dim)
            e_j = np.zeros(dim)
            e_i[i] = 1.0
            e_j[j] = 1.0
            prod = cd_product(e_i, e_j)
            (nz,) = np.nonzero(prod)
            index[i, j] = nz[0]
            sign[i, j] = int(round(prod[nz[0]]))
    return sign, index
