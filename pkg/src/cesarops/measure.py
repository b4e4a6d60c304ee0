"""Finite positive radial measures on [0, 1) and their moment sequences.

A measure is a finite mixture of three component kinds:

* ``PowerLogDensity`` -- absolutely continuous part
  ``c * (1 - t)**(gamma - 1) * log(e / (1 - t))**(-beta) dt`` with
  ``c >= 0``, ``gamma > 0``, ``beta >= 0``;
* ``PointMass`` -- an atom of weight ``w >= 0`` at ``t0 in [0, 1)``;
* ``TabulatedDensity`` -- a piecewise-linear density sampled on a grid
  ``0 = x_0 < ... < x_K < 1`` and identically zero beyond ``x_K``.

Moments ``moment(m, n) = integral of t**n dm(t)`` are computed after the
substitution ``t = 1 - exp(-u)``, which turns the boundary concentration
at ``t -> 1`` into plain exponential decay; the upper cutoff ``U`` is chosen
so the neglected weight mass is below 1e-14.  ``moment_via_tail`` evaluates
the same number through the distribution-function identity

    moment(m, n) = n * integral_0^1 tail(m, x) * x**(n-1) dx   (n >= 1)

with an independently coded integrand (closed-form tails against the
monomial) and serves as a cross-check oracle for the direct route.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union

import mpmath
import numpy as np

from cesarops.quadrature import QuadratureError, gauss_rule, integrate_adaptive

__all__ = [
    "MeasureSpecError",
    "PowerLogDensity",
    "PointMass",
    "TabulatedDensity",
    "MeasureComponent",
    "RadialMeasure",
    "MomentSequence",
    "total_mass",
    "tail",
    "moment",
    "moments",
    "moment_via_tail",
    "measure_from_dict",
    "measure_to_dict",
    "load_measure",
    "scale_measure",
]

DEFAULT_TOL = 1e-12
_MASS_CUT = 1e-14        # neglected weight mass beyond the u-space cutoff
_ATOM_FLUSH = 1e-300     # atoms below this contribute exact zero


class MeasureSpecError(ValueError):
    """Raised for malformed measure descriptions."""


@dataclass(frozen=True)
class PowerLogDensity:
    """Density ``c * (1-t)**(gamma-1) * log(e/(1-t))**(-beta)`` on [0, 1)."""

    c: float
    gamma: float
    beta: float = 0.0

    def __post_init__(self):
        if not (self.c >= 0.0 and math.isfinite(self.c)):
            raise MeasureSpecError("power_log component needs c >= 0")
        if not (self.gamma > 0.0 and math.isfinite(self.gamma)):
            raise MeasureSpecError("power_log component needs gamma > 0")
        if not (self.beta >= 0.0 and math.isfinite(self.beta)):
            raise MeasureSpecError("power_log component needs beta >= 0")


@dataclass(frozen=True)
class PointMass:
    """Atom of weight ``w`` at ``t0 in [0, 1)``."""

    w: float
    t0: float

    def __post_init__(self):
        if not (self.w >= 0.0 and math.isfinite(self.w)):
            raise MeasureSpecError("point component needs w >= 0")
        if not 0.0 <= self.t0 < 1.0:
            raise MeasureSpecError("point component needs t0 in [0, 1)")


@dataclass(frozen=True)
class TabulatedDensity:
    """Piecewise-linear density on grid ``0 = x_0 < ... < x_K < 1``."""

    x: tuple
    v: tuple

    def __post_init__(self):
        x = tuple(float(t) for t in self.x)
        v = tuple(float(t) for t in self.v)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)
        if len(x) < 2 or len(x) != len(v):
            raise MeasureSpecError("table component needs matching grids with >= 2 nodes")
        if x[0] != 0.0:
            raise MeasureSpecError("table grid must start at 0")
        if not all(a < b for a, b in zip(x[:-1], x[1:])):
            raise MeasureSpecError("table grid must be strictly increasing")
        if not x[-1] < 1.0:
            raise MeasureSpecError("table grid must end below 1")
        if any(val < 0.0 or not math.isfinite(val) for val in v):
            raise MeasureSpecError("table values must be finite and >= 0")


MeasureComponent = Union[PowerLogDensity, PointMass, TabulatedDensity]


@dataclass(frozen=True)
class RadialMeasure:
    """Finite positive measure on [0, 1): a nonempty tuple of components."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise MeasureSpecError("measure needs at least one component")
        for comp in comps:
            if not isinstance(comp, (PowerLogDensity, PointMass, TabulatedDensity)):
                raise MeasureSpecError("unknown component type %r" % (comp,))
        if not total_mass(self) > 0.0:
            raise MeasureSpecError("measure must have positive total mass")


@dataclass(frozen=True)
class MomentSequence:
    """Moments ``values[n] = moment(m, n)`` for ``n = 0..n_max``.

    ``abs_tolerance`` is the absolute accuracy the producer aimed for; the
    validity checks below allow exactly that much slack.
    """

    values: np.ndarray
    n_max: int
    abs_tolerance: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.n_max + 1,):
            raise ValueError("values must have length n_max + 1")

    def validate(self):
        """Check positivity, monotonicity and total monotonicity (k <= 4)."""
        tol = self.abs_tolerance
        if np.any(self.values < -tol):
            raise ValueError("moment sequence has negative entries")
        seq = self.values
        for k in range(1, 5):
            seq = seq[:-1] - seq[1:]          # (-1)^k * forward difference
            if seq.size and seq.min() < -tol:
                raise ValueError(
                    "moment sequence fails total monotonicity at order %d" % k)
        return self

    def __getitem__(self, n):
        return float(self.values[n])


# ---------------------------------------------------------------------------
# closed-form pieces


def _powerlog_mass(comp):
    return _powerlog_tail(comp, 0.0)


def _powerlog_tail(comp, t):
    """tail of the power-log density: closed form via the incomplete gamma.

    With v = log(e/(1-t)) the tail equals
    ``c * e**gamma * gamma**(beta-1) * Gamma(1 - beta, gamma * v)``;
    for beta = 0 this collapses to ``c * (1-t)**gamma / gamma``.
    """
    return _powerlog_tail_u(comp, -math.log1p(-t))


def _powerlog_tail_u(comp, u):
    """Same tail at ``t = 1 - exp(-u)``, taken directly in ``u``.

    Working in u avoids reconstituting t, which rounds to exactly 1 once
    ``exp(-u)`` drops below machine epsilon.
    """
    if comp.c == 0.0:
        return 0.0
    if comp.beta == 0.0:
        return comp.c * math.exp(-comp.gamma * u) / comp.gamma
    g = comp.gamma
    val = mpmath.gammainc(1.0 - comp.beta, g * (1.0 + u))
    return float(comp.c * math.exp(g) * g ** (comp.beta - 1.0) * val)


def _table_panels(comp):
    """Per-panel linear coefficients (a, b) with density a + b*x on [x_i, x_{i+1}]."""
    x = np.asarray(comp.x)
    v = np.asarray(comp.v)
    b = (v[1:] - v[:-1]) / (x[1:] - x[:-1])
    a = v[:-1] - b * x[:-1]
    return x, a, b


def _table_mass(comp):
    x = np.asarray(comp.x)
    v = np.asarray(comp.v)
    return float(np.sum(0.5 * (v[1:] + v[:-1]) * (x[1:] - x[:-1])))


def _table_tail(comp, t):
    if t >= comp.x[-1]:
        return 0.0
    x, a, b = _table_panels(comp)
    lo = np.maximum(x[:-1], t)
    hi = x[1:]
    width = np.clip(hi - lo, 0.0, None)
    # integral of a + b*x over [lo, hi] in closed form
    parts = a * width + 0.5 * b * (hi - lo) * (hi + lo)
    parts[width <= 0.0] = 0.0
    return float(parts.sum())


def _pow_diff(x0, x1, k):
    """x1**k - x0**k for integer array k, stable when both factors are tiny."""
    k = np.asarray(k, dtype=float)
    if x1 <= 0.0:
        return np.zeros_like(k)
    hi = np.exp(k * math.log(x1))
    if x0 <= 0.0:
        return hi
    return hi * (-np.expm1(k * (math.log(x0) - math.log(x1))))


def _table_moments(comp, ns):
    """Exact moments of the piecewise-linear density against t**n."""
    ns = np.asarray(ns)
    x, a, b = _table_panels(comp)
    out = np.zeros(len(ns))
    for i in range(len(a)):
        d1 = _pow_diff(x[i], x[i + 1], ns + 1)
        d2 = _pow_diff(x[i], x[i + 1], ns + 2)
        out += a[i] * d1 / (ns + 1) + b[i] * d2 / (ns + 2)
    return out


def _atom_moments(comp, ns):
    ns = np.asarray(ns, dtype=float)
    if comp.w == 0.0:
        return np.zeros(len(ns))
    if comp.t0 == 0.0:
        out = np.zeros(len(ns))
        out[ns == 0] = comp.w
        return out
    with np.errstate(under="ignore"):
        vals = comp.w * np.exp(ns * math.log(comp.t0))
    vals[vals < _ATOM_FLUSH] = 0.0
    return vals


# ---------------------------------------------------------------------------
# power-log quadrature in u-space, t = 1 - exp(-u)


def _powerlog_cutoff(comp, *, decay=None, prefactor=1.0, tol=_MASS_CUT):
    """Upper u-cutoff with tail mass prefactor*exp(-decay*U)/decay below tol."""
    g = comp.gamma if decay is None else decay
    if g <= 0.0:
        raise QuadratureError("integrand does not decay (effective exponent <= 0)")
    scale = max(prefactor * max(comp.c, 1.0) / g, 1e-30)
    u = math.log(scale / tol) / g
    return min(max(u, 4.0), 400.0)


def _powerlog_weight(comp, u):
    return comp.c * np.exp(-comp.gamma * u) * (1.0 + u) ** (-comp.beta)


def _powerlog_moment(comp, n, abs_tol):
    if comp.c == 0.0:
        return 0.0
    cut = _powerlog_cutoff(comp)

    def integrand(u):
        t = -np.expm1(-u)
        with np.errstate(under="ignore"):
            tn = np.exp(n * np.log(np.maximum(t, 1e-320))) if n else np.ones_like(u)
        return tn * _powerlog_weight(comp, u)

    return float(integrate_adaptive(integrand, 0.0, cut, abs_tol=abs_tol).value.real)


def _powerlog_moment_batch(comp, n_max, abs_tol):
    """All moments 0..n_max at once on a shared refined panel grid."""
    if comp.c == 0.0:
        return np.zeros(n_max + 1), 0.0
    cut = _powerlog_cutoff(comp)
    xs, ws = gauss_rule(24)

    def level_values(panels_per_unit):
        n_panels = max(4, int(math.ceil(cut * panels_per_unit)))
        edges = np.linspace(0.0, cut, n_panels + 1)
        lo, hi = edges[:-1], edges[1:]
        u = (lo[:, None] + (hi - lo)[:, None] * xs[None, :]).ravel()
        w = ((hi - lo)[:, None] * ws[None, :]).ravel()
        weight = w * _powerlog_weight(comp, u)
        t = -np.expm1(-u)
        out = np.empty(n_max + 1)
        out[0] = weight.sum()
        power = np.ones_like(t)
        for n in range(1, n_max + 1):
            power = power * t
            out[n] = weight @ power
        return out

    prev = level_values(2)
    for level in (4, 8, 16):
        cur = level_values(level)
        delta = float(np.max(np.abs(cur - prev)))
        prev = cur
        if delta <= 0.25 * abs_tol:
            return cur, delta
    raise QuadratureError(
        "moment batch did not converge: achieved %.3e, requested %.3e"
        % (delta, abs_tol), value=prev, error=delta)


# ---------------------------------------------------------------------------
# public operations


def total_mass(m: RadialMeasure) -> float:
    """Mass of [0, 1), i.e. the moment of order zero (closed forms only)."""
    out = 0.0
    for comp in m.components:
        if isinstance(comp, PowerLogDensity):
            out += _powerlog_mass(comp)
        elif isinstance(comp, PointMass):
            out += comp.w
        else:
            out += _table_mass(comp)
    return out


def tail(m: RadialMeasure, t: float) -> float:
    """Measure of the interval [t, 1)."""
    if not 0.0 <= t < 1.0:
        raise ValueError("tail requires t in [0, 1)")
    out = 0.0
    for comp in m.components:
        if isinstance(comp, PowerLogDensity):
            out += _powerlog_tail(comp, t)
        elif isinstance(comp, PointMass):
            out += comp.w if comp.t0 >= t else 0.0
        else:
            out += _table_tail(comp, t)
    return out


def moment(m: RadialMeasure, n: int, *, abs_tol: float = DEFAULT_TOL) -> float:
    """n-th moment, integral of t**n dm(t), to absolute tolerance abs_tol."""
    if n < 0:
        raise ValueError("moment order must be >= 0")
    out = 0.0
    share = abs_tol / len(m.components)
    for comp in m.components:
        if isinstance(comp, PowerLogDensity):
            out += _powerlog_moment(comp, n, share)
        elif isinstance(comp, PointMass):
            out += float(_atom_moments(comp, np.array([n]))[0])
        else:
            out += float(_table_moments(comp, np.array([n]))[0])
    return out


def moments(m: RadialMeasure, n_max: int, *,
            abs_tol: float = DEFAULT_TOL) -> MomentSequence:
    """Moment sequence 0..n_max as a validated :class:`MomentSequence`.

    Power-log components are integrated on one shared panel grid that is
    refined until the whole vector of moments is stable; atoms and tabulated
    densities use closed forms.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    ns = np.arange(n_max + 1)
    vals = np.zeros(n_max + 1)
    share = abs_tol / len(m.components)
    for comp in m.components:
        if isinstance(comp, PowerLogDensity):
            batch, _ = _powerlog_moment_batch(comp, n_max, share)
            vals += batch
        elif isinstance(comp, PointMass):
            vals += _atom_moments(comp, ns)
        else:
            vals += _table_moments(comp, ns)
    return MomentSequence(vals, n_max, abs_tol).validate()


def moment_via_tail(m: RadialMeasure, n: int, *,
                    abs_tol: float = 1e-11) -> float:
    """n-th moment through the distribution-function identity (n >= 1).

    Integrates ``n * x**(n-1) * tail(m, x)`` with closed-form tails, an
    integration path independent of :func:`moment`.
    """
    if n < 1:
        raise ValueError("moment_via_tail requires n >= 1")
    out = 0.0
    share = abs_tol / len(m.components)
    for comp in m.components:
        if isinstance(comp, PowerLogDensity):
            cut = _powerlog_cutoff(comp, prefactor=float(n))

            def integrand(u, comp=comp):
                x = -np.expm1(-u)
                with np.errstate(under="ignore"):
                    xn = np.exp((n - 1) * np.log(np.maximum(x, 1e-320)))
                tails = np.array([_powerlog_tail_u(comp, ui) for ui in u])
                return n * xn * tails * np.exp(-u)

            out += float(integrate_adaptive(integrand, 0.0, cut,
                                            abs_tol=share).value.real)
        elif isinstance(comp, PointMass):
            if comp.w == 0.0 or comp.t0 == 0.0:
                continue
            u0 = -math.log1p(-comp.t0)

            def integrand(u, comp=comp):
                x = -np.expm1(-u)
                with np.errstate(under="ignore"):
                    xn = np.exp((n - 1) * np.log(np.maximum(x, 1e-320)))
                return n * comp.w * xn * np.exp(-u)

            out += float(integrate_adaptive(integrand, 0.0, u0,
                                            abs_tol=share).value.real)
        else:
            x_hi = comp.x[-1]

            def integrand(x, comp=comp):
                with np.errstate(under="ignore"):
                    xn = np.exp((n - 1) * np.log(np.maximum(x, 1e-320)))
                tails = np.array([_table_tail(comp, xi) for xi in x])
                return n * xn * tails

            out += float(integrate_adaptive(integrand, 0.0, x_hi,
                                            abs_tol=share,
                                            breakpoints=comp.x).value.real)
    return out


def scale_measure(m: RadialMeasure, factor: float) -> RadialMeasure:
    """The measure factor * m (factor > 0)."""
    if not factor > 0.0:
        raise ValueError("scale factor must be positive")
    comps = []
    for comp in m.components:
        if isinstance(comp, PowerLogDensity):
            comps.append(PowerLogDensity(comp.c * factor, comp.gamma, comp.beta))
        elif isinstance(comp, PointMass):
            comps.append(PointMass(comp.w * factor, comp.t0))
        else:
            comps.append(TabulatedDensity(comp.x, tuple(v * factor for v in comp.v)))
    return RadialMeasure(tuple(comps))


# ---------------------------------------------------------------------------
# serialization


def measure_from_dict(spec) -> RadialMeasure:
    if not isinstance(spec, dict) or "components" not in spec:
        raise MeasureSpecError("measure spec must be an object with 'components'")
    raw = spec["components"]
    if not isinstance(raw, list) or not raw:
        raise MeasureSpecError("'components' must be a nonempty list")
    comps = []
    for entry in raw:
        if not isinstance(entry, dict) or "kind" not in entry:
            raise MeasureSpecError("component entries need a 'kind' field")
        kind = entry["kind"]
        try:
            if kind == "power_log":
                comps.append(PowerLogDensity(float(entry["c"]),
                                             float(entry["gamma"]),
                                             float(entry.get("beta", 0.0))))
            elif kind == "point":
                comps.append(PointMass(float(entry["w"]), float(entry["t0"])))
            elif kind == "table":
                comps.append(TabulatedDensity(tuple(entry["x"]), tuple(entry["v"])))
            else:
                raise MeasureSpecError("unknown component kind %r" % kind)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MeasureSpecError):
                raise
            raise MeasureSpecError("bad component %r: %s" % (entry, exc)) from exc
    return RadialMeasure(tuple(comps))


def measure_to_dict(m: RadialMeasure) -> dict:
    out = []
    for comp in m.components:
        if isinstance(comp, PowerLogDensity):
            out.append({"kind": "power_log", "c": comp.c,
                        "gamma": comp.gamma, "beta": comp.beta})
        elif isinstance(comp, PointMass):
            out.append({"kind": "point", "w": comp.w, "t0": comp.t0})
        else:
            out.append({"kind": "table", "x": list(comp.x), "v": list(comp.v)})
    return {"components": out}


def load_measure(path) -> RadialMeasure:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MeasureSpecError("invalid JSON in %s: %s" % (path, exc)) from exc
    return measure_from_dict(spec)
