"""Identity families as residual tensors over sampled points, plus sign calibration.

Residuals are evaluated in full coefficient (tensor) form; with chart
dimensions at most 7 this is cheap and leaves no sampling noise in the
verdicts.  All families vanish identically on Moufang loops; the two-point
families (GLE, GLE2, INTEGRABILITY) detect the broken control loop.

Families and their arities:

  GLE            (g, h)   first-order coupling of the product Jacobians to u, v, w
  CONSTRAINT     (g,)     u + v + w = 0
  MC             (g,)     Maurer-Cartan commutator relations in coefficient form
  LRY            (g,)     decomposition of the commutators into Yamagutian + bracket terms
  LEMMA          (g,)     same content with the sign convention lemma_sign on the C-terms
  GLE2           (g, h)   second-order coupling via the secondary tensors
  INTEGRABILITY  (g, h)   the Yamaguti-function transport identity
  MOUFANG        (g,h,k)  direct residual of the Moufang identity (gh)(kg) = g((hk)g)

The INTEGRABILITY residual's second term contracts the h-Jacobian (the
transport identity is the sum of the three GLE2 identities, whose h-terms
all carry d/dh); reports record this choice as integrability_h_jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from moufang.errors import CalibrationError, ChartDomainError
from moufang.jets import jacobian_g, jacobian_h
from moufang.loops import DEFAULT_SAMPLE_RADIUS, LoopChart, builtin, moufang_residual
from moufang.tensors import (
    DEFAULT_CONVENTIONS,
    ConventionLedger,
    aux_tensors,
    secondary_tensors,
    structure_constants,
)

__all__ = [
    "FAMILY_NAMES",
    "FAMILY_ARITY",
    "SamplePlan",
    "FamilyResidual",
    "TensorCache",
    "residual_gle",
    "residual_mc",
    "residual_lryam",
    "residual_lemma",
    "residual_gle2",
    "residual_integrability",
    "run_suite",
    "calibrate_conventions",
    "CalibrationResult",
    "DEFAULT_TOLERANCE",
]

DEFAULT_TOLERANCE = 1e-9

FAMILY_ARITY = {
    "GLE": 2,
    "CONSTRAINT": 1,
    "MC": 1,
    "LRY": 1,
    "LEMMA": 1,
    "GLE2": 2,
    "INTEGRABILITY": 2,
    "MOUFANG": 3,
}
FAMILY_NAMES = tuple(FAMILY_ARITY)

# Resample budget when a sampled tuple exits the chart: 10 attempts per
# sample index, i.e. at most 10x count attempts overall.
RESAMPLE_CAP = 10
_BALL_DRAW_CAP = 100_000


class TensorCache:
    """Memoized per-point tensors for one loop, shared across residual families."""

    def __init__(self, loop: LoopChart):
        self.loop = loop
        self._aux = {}
        self._sec = {}
        self._jac = {}
        self._c = {}

    def aux(self, g):
        key = g.tobytes()
        if key not in self._aux:
            self._aux[key] = aux_tensors(self.loop, g)
        return self._aux[key]

    def secondary(self, g):
        key = g.tobytes()
        if key not in self._sec:
            self._sec[key] = secondary_tensors(self.loop, g)
        return self._sec[key]

    def jacobians(self, g, h):
        key = (g.tobytes(), h.tobytes())
        if key not in self._jac:
            self._jac[key] = (jacobian_g(self.loop, g, h), jacobian_h(self.loop, g, h))
        return self._jac[key]

    def structure(self, bracket_sign: int = 1):
        if bracket_sign not in self._c:
            self._c[bracket_sign] = structure_constants(self.loop, bracket_sign).c
        return self._c[bracket_sign]


def _cache(loop, cache):
    return cache if cache is not None else TensorCache(loop)


def residual_gle(loop, g, h, cache=None):
    """First-order residual matrices (R1a, R1b, R1c); zero on Moufang loops."""
    cache = _cache(loop, cache)
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    gh = loop.product(g, h)
    jg, jh = cache.jacobians(g, h)
    a_g, a_h, a_gh = cache.aux(g), cache.aux(h), cache.aux(gh)
    r1a = np.einsum("is,sj->ij", jg, a_g.w) + np.einsum("is,sj->ij", jh, a_h.u) + a_gh.u
    r1b = np.einsum("is,sj->ij", jg, a_g.v) + np.einsum("is,sj->ij", jh, a_h.w) + a_gh.v
    r1c = np.einsum("is,sj->ij", jg, a_g.u) + np.einsum("is,sj->ij", jh, a_h.v) + a_gh.w
    return r1a, r1b, r1c


def residual_mc(loop, g, bracket_sign=None, cache=None):
    """Maurer-Cartan residual tensors (R3a, R3b, R3c) in coefficient form."""
    cache = _cache(loop, cache)
    g = np.asarray(g, dtype=float)
    sign = DEFAULT_CONVENTIONS.bracket_sign if bracket_sign is None else bracket_sign
    c = cache.structure(sign)
    sec = cache.secondary(g)
    aux = cache.aux(g)
    r3a = sec.u_jk + np.einsum("pjk,sp->sjk", c, aux.u) - 2.0 * sec.lr_jk
    r3b = sec.v_jk - np.einsum("pjk,sp->sjk", c, aux.v) - 2.0 * sec.rl_jk
    r3c = sec.lr_jk - sec.rl_jk
    return r3a, r3b, r3c


def residual_lryam(loop, g, bracket_sign=None, cache=None):
    """Residuals of the three commutator decompositions into Yamagutian + bracket terms."""
    cache = _cache(loop, cache)
    g = np.asarray(g, dtype=float)
    sign = DEFAULT_CONVENTIONS.bracket_sign if bracket_sign is None else bracket_sign
    c = cache.structure(sign)
    sec = cache.secondary(g)
    aux = cache.aux(g)
    ra = sec.u_jk - 2.0 * sec.y_jk + np.einsum("pjk,sp->sjk", c, aux.u + 2.0 * aux.v) / 3.0
    rb = sec.lr_jk - sec.y_jk - np.einsum("pjk,sp->sjk", c, aux.u - aux.v) / 3.0
    rc = sec.v_jk - 2.0 * sec.y_jk - np.einsum("pjk,sp->sjk", c, 2.0 * aux.u + aux.v) / 3.0
    return ra, rb, rc


def residual_lemma(loop, g, lemma_sign=None, bracket_sign=None, cache=None):
    """Residuals of the u/v/w decompositions with explicit sign on the C-terms.

    lemma_sign = -1 (the calibrated value) makes all three vanish on Moufang
    loops; +1 is the rejected alternative kept for calibration sweeps.
    """
    cache = _cache(loop, cache)
    g = np.asarray(g, dtype=float)
    s_l = DEFAULT_CONVENTIONS.lemma_sign if lemma_sign is None else lemma_sign
    s_c = DEFAULT_CONVENTIONS.bracket_sign if bracket_sign is None else bracket_sign
    c = cache.structure(s_c)
    sec = cache.secondary(g)
    aux = cache.aux(g)
    ru = sec.u_jk - 2.0 * sec.y_jk - s_l * np.einsum("pjk,sp->sjk", c, aux.u + 2.0 * aux.v) / 3.0
    rv = sec.v_jk - 2.0 * sec.y_jk + s_l * np.einsum("pjk,sp->sjk", c, 2.0 * aux.u + aux.v) / 3.0
    rw = sec.w_jk - 2.0 * sec.y_jk - s_l * np.einsum("pjk,sp->sjk", c, aux.u - aux.v) / 3.0
    return ru, rv, rw


def residual_gle2(loop, g, h, cache=None):
    """Second-order residual tensors (R7, R8a, R8b) via the secondary tensors."""
    cache = _cache(loop, cache)
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    gh = loop.product(g, h)
    jg, jh = cache.jacobians(g, h)
    s_g, s_h, s_gh = cache.secondary(g), cache.secondary(h), cache.secondary(gh)
    r7 = (
        np.einsum("is,sjk->ijk", jg, s_g.w_jk)
        + np.einsum("is,sjk->ijk", jh, s_h.u_jk)
        - s_gh.u_jk
    )
    r8a = (
        np.einsum("is,sjk->ijk", jg, s_g.v_jk)
        + np.einsum("is,sjk->ijk", jh, s_h.w_jk)
        - s_gh.v_jk
    )
    r8b = (
        np.einsum("is,sjk->ijk", jg, s_g.u_jk)
        + np.einsum("is,sjk->ijk", jh, s_h.v_jk)
        - s_gh.w_jk
    )
    return r7, r8a, r8b


def residual_integrability(loop, g, h, cache=None):
    """Transport residual of the Yamaguti functions (R6); zero iff GLE2 closes."""
    cache = _cache(loop, cache)
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    gh = loop.product(g, h)
    jg, jh = cache.jacobians(g, h)
    s_g, s_h, s_gh = cache.secondary(g), cache.secondary(h), cache.secondary(gh)
    return (
        np.einsum("is,sjk->ijk", jg, s_g.y_jk)
        + np.einsum("is,sjk->ijk", jh, s_h.y_jk)
        - s_gh.y_jk
    )


def _maxabs(arrays) -> float:
    if isinstance(arrays, np.ndarray):
        arrays = (arrays,)
    return max(float(np.max(np.abs(a))) for a in arrays)


def _eval_family(family, loop, cache, conventions, g, h, k) -> float:
    if family == "GLE":
        return _maxabs(residual_gle(loop, g, h, cache=cache))
    if family == "CONSTRAINT":
        aux = cache.aux(g)
        return _maxabs(aux.u + aux.v + aux.w)
    if family == "MC":
        return _maxabs(residual_mc(loop, g, bracket_sign=conventions.bracket_sign, cache=cache))
    if family == "LRY":
        return _maxabs(residual_lryam(loop, g, bracket_sign=conventions.bracket_sign, cache=cache))
    if family == "LEMMA":
        return _maxabs(
            residual_lemma(
                loop,
                g,
                lemma_sign=conventions.lemma_sign,
                bracket_sign=conventions.bracket_sign,
                cache=cache,
            )
        )
    if family == "GLE2":
        return _maxabs(residual_gle2(loop, g, h, cache=cache))
    if family == "INTEGRABILITY":
        return _maxabs(residual_integrability(loop, g, h, cache=cache))
    if family == "MOUFANG":
        return _maxabs(moufang_residual(loop, g, h, k))
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class SamplePlan:
    """Deterministic sampling plan: seeded, counter-based, radius-bounded."""

    loop_spec: str
    seed: int = 42
    count: int = 100
    radius: float = DEFAULT_SAMPLE_RADIUS

    def validate(self, loop: LoopChart):
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if self.radius <= 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if loop.max_sample_radius is not None and self.radius > loop.max_sample_radius:
            raise ValueError(
                f"radius {self.radius} exceeds {loop.max_sample_radius} allowed on {loop.name}"
            )


@dataclass
class FamilyResidual:
    """Aggregated residual statistics for one family over a sample set."""

    family: str
    per_sample_max: np.ndarray
    max: float
    mean: float
    argmax_g: np.ndarray
    argmax_h: np.ndarray | None = None
    argmax_k: np.ndarray | None = None
    passed: bool = field(default=False)


def _ball_point(stream, n: int, radius: float) -> np.ndarray:
    """Uniform draw from the n-ball by rejection from the cube."""
    for _ in range(_BALL_DRAW_CAP):
        x = stream.uniform(-radius, radius, n)
        if np.linalg.norm(x) <= radius:
            return x
    raise RuntimeError("ball sampling failed to accept a point")  # pragma: no cover


def _sample_stream(seed: int, index: int):
    # Philox keyed by (seed, sample index): per-sample streams are independent
    # of evaluation order, so reports are reproducible even under concurrency.
    return np.random.Generator(np.random.Philox(key=np.array([seed, index], dtype=np.uint64)))


def sample_tuples(plan: SamplePlan, loop: LoopChart):
    """The sample-index -> (g, h, k) candidate generator used by run_suite."""
    for i in range(plan.count):
        stream = _sample_stream(plan.seed, i)

        def draws(stream=stream):
            while True:
                yield tuple(_ball_point(stream, loop.dim, plan.radius) for _ in range(3))

        yield i, draws()


def run_suite(
    plan: SamplePlan,
    families=None,
    tolerance: float = DEFAULT_TOLERANCE,
    conventions: ConventionLedger = DEFAULT_CONVENTIONS,
) -> list[FamilyResidual]:
    """Evaluate residual families over a sampled set and aggregate.

    Samples that exit the chart while evaluating any requested family are
    redrawn from their own stream, up to RESAMPLE_CAP attempts per sample.
    Results are deterministic functions of (plan, families, tolerance,
    conventions).
    """
    loop = builtin(plan.loop_spec)
    plan.validate(loop)
    if families is None:
        families = FAMILY_NAMES
    bad = set(families) - set(FAMILY_NAMES)
    if bad:
        raise ValueError(f"unknown families: {sorted(bad)}")
    families = [f for f in FAMILY_NAMES if f in set(families)]

    cache = TensorCache(loop)
    per_family = {f: [] for f in families}
    points = []
    for i, candidates in sample_tuples(plan, loop):
        for attempt, (g, h, k) in enumerate(candidates):
            try:
                row = {f: _eval_family(f, loop, cache, conventions, g, h, k) for f in families}
            except ChartDomainError:
                if attempt + 1 >= RESAMPLE_CAP:
                    raise RuntimeError(
                        f"sample {i}: chart-exit resample cap ({RESAMPLE_CAP}) exceeded"
                    ) from None
                continue
            points.append((g, h, k))
            for f in families:
                per_family[f].append(row[f])
            break

    results = []
    for f in families:
        maxes = np.array(per_family[f])
        arg = int(np.argmax(maxes))
        g, h, k = points[arg]
        arity = FAMILY_ARITY[f]
        results.append(
            FamilyResidual(
                family=f,
                per_sample_max=maxes,
                max=float(maxes.max()),
                mean=float(maxes.mean()),
                argmax_g=g,
                argmax_h=h if arity >= 2 else None,
                argmax_k=k if arity >= 3 else None,
                passed=bool(maxes.max() <= tolerance),
            )
        )
    return results


@dataclass(frozen=True)
class CalibrationResult:
    """Outcome of the sign sweep: the unique passing ledger plus the full table."""

    ledger: ConventionLedger
    table: list  # one row per (bracket_sign, lemma_sign, loop_spec) with the max residual


_ASSIGNMENTS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
_CALIBRATION_FAMILIES = ("MC", "LRY", "LEMMA")


def calibrate_conventions(
    loop_specs,
    seed: int = 42,
    count: int = 50,
    radius: float = DEFAULT_SAMPLE_RADIUS,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CalibrationResult:
    """Sweep the four (bracket_sign, lemma_sign) assignments over the given loops.

    Returns the unique assignment under which MC, LRY and LEMMA all pass on
    every loop; raises CalibrationError (with the full residual table) when
    zero or several assignments pass, e.g. for an abelian-only loop list.
    """
    worst = {a: {} for a in _ASSIGNMENTS}
    for spec in loop_specs:
        loop = builtin(spec)
        plan = SamplePlan(loop_spec=spec, seed=seed, count=count, radius=radius)
        plan.validate(loop)
        cache = TensorCache(loop)
        maxima = {a: 0.0 for a in _ASSIGNMENTS}
        for i, candidates in sample_tuples(plan, loop):
            g = next(candidates)[0]
            for s_c, s_l in _ASSIGNMENTS:
                conv = ConventionLedger(bracket_sign=s_c, lemma_sign=s_l)
                r = max(
                    _eval_family(fam, loop, cache, conv, g, None, None)
                    for fam in _CALIBRATION_FAMILIES
                )
                maxima[(s_c, s_l)] = max(maxima[(s_c, s_l)], r)
        for a in _ASSIGNMENTS:
            worst[a][spec] = maxima[a]

    table = [
        {
            "bracket_sign": a[0],
            "lemma_sign": a[1],
            "max_residual": {spec: worst[a][spec] for spec in loop_specs},
            "passed": all(worst[a][spec] <= tolerance for spec in loop_specs),
        }
        for a in _ASSIGNMENTS
    ]
    passing = [a for a in _ASSIGNMENTS if all(worst[a][spec] <= tolerance for spec in loop_specs)]
    if len(passing) != 1:
        kind = "degenerate loop set: every assignment passes" if len(passing) > 1 else "no assignment passes"
        raise CalibrationError(f"calibration failed ({kind})", table=table)
    s_c, s_l = passing[0]
    return CalibrationResult(ledger=ConventionLedger(bracket_sign=s_c, lemma_sign=s_l), table=table)
