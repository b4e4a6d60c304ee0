"""Empirical verification harness tying the operator, norms, and
classifier together.

Numerics cannot prove that an operator is bounded, but they can stress
the equivalences that the analysis predicts.  The experiments here play
three independent computations against each other for a measure ``m``
and exponent ``p`` (with conjugate ``q = p/(p-1)``):

* the ratio ``R(t) = |C_m f_t| / |f_t|`` between the mean-Lipschitz norm
  of the transformed test function and the Besov norm of the test
  function itself, along ``t -> 1`` (the test family consists of the
  extremals that witness unboundedness, so growth of R on it is the
  strongest desk-scale signal of an unbounded operator);
* the lower-bound statistic ``L_N = mu_N * N * log(N+1)**(1/q)`` on
  dyadic ``N``, whose divergence also certifies unboundedness;
* the Carleson classifier at ``(s, alpha) = (1, 1/q)``, which is the
  measure-theoretic side of the predicted equivalence.

A report is consistent when all conclusive pieces point the same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from cesarops.carleson import (
    LABEL_DIVERGING,
    LABEL_FINITE,
    LABEL_INCONCLUSIVE,
    LABEL_VANISHING,
    CarlesonParams,
    CarlesonVerdict,
    classify_measure,
    classify_moments,
    classify_tail,
    conclusive_agreement,
    dyadic_t_ladder,
    trend_label,
)
from cesarops.measure import MomentSequence, RadialMeasure, measure_to_dict
from cesarops.measure import moments as compute_moments
from cesarops.norms import besov_norm, bloch_norm, mean_lipschitz_norm
from cesarops.series import cesaro_like, test_function

__all__ = [
    "ExperimentConfig",
    "VerificationReport",
    "AgreementEntry",
    "AgreementMatrix",
    "lower_bound_statistic",
    "boundedness_experiment",
    "compactness_experiment",
    "proposition21_experiment",
]

VERDICT_BOUNDED = "bounded"
VERDICT_NOT_BOUNDED = "not bounded"
VERDICT_COMPACT = "compact-consistent"
VERDICT_NOT_COMPACT = "not compact-consistent"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ExperimentConfig:
    """Grids and truncations shared by the experiments.

    Test functions at ``t_j = 1 - 2**-j`` are truncated at degree
    ``min(degree_factor * 2**j, degree_cap)``; the coefficient decay
    ``t**k / k`` makes the dropped tail a sub-0.1% perturbation, far
    below the factor-level thresholds the trend fits use.
    """

    ladder_depth: int = 12
    degree_factor: int = 8
    degree_floor: int = 256
    degree_cap: int = 2 ** 15
    lower_depth: int = 14
    classifier_n_max: int = 2 ** 14
    include_bloch: bool = True

    def t_ladder(self):
        return tuple(1.0 - 2.0 ** -j for j in
                     range(1, self.ladder_depth + 1))

    def degree(self, j: int) -> int:
        # The floor matters for atoms: the transformed coefficients then
        # decay like t0**k regardless of t, so a short truncation at
        # small j would clip real norm mass.
        return min(max(self.degree_factor * 2 ** j, self.degree_floor),
                   self.degree_cap)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one experiment, with every raw ladder it used."""

    theorem: str
    measure: dict
    p: float
    s: float
    q: float
    t_ladder: tuple
    ratios: tuple
    bloch_ratios: tuple
    lower_ns: tuple
    lower_values: tuple
    trend_fits: dict
    classifier: CarlesonVerdict
    verdict: str
    consistent: bool

    def to_dict(self) -> dict:
        ladder = []
        for i, t in enumerate(self.t_ladder):
            entry = {"t": t, "ratio": self.ratios[i]}
            if self.bloch_ratios:
                entry["bloch_ratio"] = self.bloch_ratios[i]
            ladder.append(entry)
        cl = self.classifier
        return {
            "theorem": self.theorem,
            "measure": self.measure,
            "p": self.p,
            "s": self.s,
            "q": self.q,
            "ladder": ladder,
            "lower_bound": [{"N": n, "L_N": v} for n, v in
                            zip(self.lower_ns, self.lower_values)],
            "classifier": {
                "per_criterion": dict(cl.per_criterion),
                "agreement": cl.agreement,
                "sup_estimate": cl.sup_estimate,
                "limit_estimate": cl.limit_estimate,
                "fitted_exponent": cl.fitted_exponent,
                "fitted_log_exponent": cl.fitted_log_exponent,
            },
            "trends": {name: fit.label for name, fit in
                       self.trend_fits.items()},
            "verdict": self.verdict,
            "consistent": self.consistent,
        }


def _conjugate(p: float) -> float:
    if not (p > 1.0 and math.isfinite(p)):
        raise ValueError(
            "the exponent p must satisfy p > 1 (the boundary p -> 1, "
            "q -> infinity, is outside the theory)")
    return p / (p - 1.0)


def lower_bound_statistic(mu: MomentSequence, p: float, N: int) -> float:
    """``L_N = mu_N * N * log(N+1)**(1/q)`` with ``q = p/(p-1)``."""
    q = _conjugate(p)
    if N <= 2:
        raise ValueError("lower_bound_statistic requires N > 2")
    return mu[N] * N * math.log(N + 1.0) ** (1.0 / q)


def _classifier_label(verdict: CarlesonVerdict) -> str:
    if conclusive_agreement(verdict):
        return next(lab for lab in verdict.per_criterion.values()
                    if lab != LABEL_INCONCLUSIVE)
    return LABEL_INCONCLUSIVE


def _bounded_sense(label: str):
    """Map a trend label to True (bounded), False (unbounded), or None."""
    if label in (LABEL_FINITE, LABEL_VANISHING):
        return True
    if label == LABEL_DIVERGING:
        return False
    return None


def _norm_ladder(m: RadialMeasure, p: float, s: float,
                 config: ExperimentConfig):
    """Shared ladder sweep: Lipschitz norms, Besov norms, Bloch norms."""
    ts = config.t_ladder()
    max_degree = max(config.degree(j) for j in
                     range(1, config.ladder_depth + 1))
    mu = compute_moments(m, max(max_degree, config.classifier_n_max))
    lip, bes, blo = [], [], []
    for j, t in enumerate(ts, start=1):
        f = test_function(t, p, config.degree(j))
        cf = cesaro_like(mu, f)
        lip.append(mean_lipschitz_norm(cf, s, 1.0 / s).value)
        bes.append(besov_norm(f, p).value)
        if config.include_bloch:
            blo.append(bloch_norm(cf).value)
    return ts, mu, lip, bes, blo


def _sliced_moments(mu: MomentSequence, n_max: int) -> MomentSequence:
    if mu.n_max == n_max:
        return mu
    return MomentSequence(mu.values[:n_max + 1], n_max, mu.abs_tolerance)


def boundedness_experiment(m: RadialMeasure, p: float, s: float,
                           config: ExperimentConfig | None = None
                           ) -> VerificationReport:
    """Play the ratio ladder, the lower-bound statistic, and the
    classifier at ``(1, 1/q)`` against each other.

    Requires ``p, s > 1``.  The verdict is "not bounded" as soon as the
    ratio ladder or the lower-bound ladder diverges, "bounded" when both
    stay tame, and "inconclusive" otherwise; the consistency flag
    records whether classifier and ladders tell the same story.
    """
    config = config or ExperimentConfig()
    q = _conjugate(p)
    if not s > 1.0:
        raise ValueError("boundedness_experiment requires s > 1")
    ts, mu, lip, bes, blo = _norm_ladder(m, p, s, config)
    ratios = tuple(n / d for n, d in zip(lip, bes))
    bloch_ratios = tuple(n / d for n, d in zip(blo, bes))

    lower_ns = tuple(2 ** k for k in range(2, config.lower_depth + 1))
    mu_low = _sliced_moments(mu, config.classifier_n_max)
    lower_values = tuple(lower_bound_statistic(mu_low, p, n)
                         for n in lower_ns)

    classifier = classify_measure(m, CarlesonParams(1.0, 1.0 / q),
                                  n_max=config.classifier_n_max, mu=mu_low)

    trends = {
        "ratio": trend_label(ratios),
        "lower_bound": trend_label(lower_values),
    }
    if bloch_ratios:
        trends["bloch_ratio"] = trend_label(bloch_ratios)

    ratio_sense = _bounded_sense(trends["ratio"].label)
    lower_sense = _bounded_sense(trends["lower_bound"].label)
    if ratio_sense is False or lower_sense is False:
        verdict = VERDICT_NOT_BOUNDED
    elif ratio_sense and lower_sense:
        verdict = VERDICT_BOUNDED
    else:
        verdict = VERDICT_INCONCLUSIVE

    class_sense = _bounded_sense(_classifier_label(classifier))
    senses = (ratio_sense, lower_sense, class_sense)
    consistent = None not in senses and len(set(senses)) == 1

    return VerificationReport(
        theorem="boundedness", measure=measure_to_dict(m), p=p, s=s, q=q,
        t_ladder=ts, ratios=ratios, bloch_ratios=bloch_ratios,
        lower_ns=lower_ns, lower_values=lower_values, trend_fits=trends,
        classifier=classifier, verdict=verdict, consistent=consistent)


def compactness_experiment(m: RadialMeasure, p: float, s: float,
                           config: ExperimentConfig | None = None
                           ) -> VerificationReport:
    """Track ``|C_m f_t|`` raw (the test family tends to zero locally
    uniformly, so a compact operator must send it to zero in norm).

    The ladder carries the raw mean-Lipschitz norms; the verdict is
    "compact-consistent" when the classifier reports a vanishing
    Carleson quotient and the norm ladder has dropped below 10% of its
    peak by the end, with its final stretch nonincreasing.
    """
    config = config or ExperimentConfig(include_bloch=False)
    q = _conjugate(p)
    if not s > 1.0:
        raise ValueError("compactness_experiment requires s > 1")
    ts, mu, lip, bes, blo = _norm_ladder(m, p, s, config)
    norms = tuple(lip)
    bloch_ratios = tuple(blo)

    lower_ns = tuple(2 ** k for k in range(2, config.lower_depth + 1))
    mu_low = _sliced_moments(mu, config.classifier_n_max)
    lower_values = tuple(lower_bound_statistic(mu_low, p, n)
                         for n in lower_ns)

    classifier = classify_measure(m, CarlesonParams(1.0, 1.0 / q),
                                  n_max=config.classifier_n_max, mu=mu_low)

    trends = {
        "ratio": trend_label(norms),
        "lower_bound": trend_label(lower_values),
    }

    peak = max(norms)
    tail4 = norms[-4:]
    decayed = (peak > 0.0 and norms[-1] < 0.1 * peak
               and all(b <= a for a, b in zip(tail4, tail4[1:])))
    label = _classifier_label(classifier)
    if label == LABEL_INCONCLUSIVE:
        verdict = VERDICT_INCONCLUSIVE
        consistent = False
    else:
        says_vanishing = label == LABEL_VANISHING
        verdict = (VERDICT_COMPACT if says_vanishing and decayed
                   else VERDICT_NOT_COMPACT)
        consistent = says_vanishing == decayed

    return VerificationReport(
        theorem="compactness", measure=measure_to_dict(m), p=p, s=s, q=q,
        t_ladder=ts, ratios=norms, bloch_ratios=bloch_ratios,
        lower_ns=lower_ns, lower_values=lower_values, trend_fits=trends,
        classifier=classifier, verdict=verdict, consistent=consistent)


@dataclass(frozen=True)
class AgreementEntry:
    """Tail label vs moment label for one (measure, parameters) cell."""

    measure: str
    s: float
    alpha: float
    tail_label: str
    moments_label: str

    @property
    def conclusive(self) -> bool:
        return LABEL_INCONCLUSIVE not in (self.tail_label,
                                          self.moments_label)

    @property
    def agree(self) -> bool:
        return self.conclusive and self.tail_label == self.moments_label


@dataclass(frozen=True)
class AgreementMatrix:
    """Cross-criterion comparison over a catalog and parameter grid."""

    entries: tuple

    @property
    def n_conclusive(self) -> int:
        return sum(e.conclusive for e in self.entries)

    @property
    def n_agree(self) -> int:
        return sum(e.agree for e in self.entries)

    @property
    def agreement_rate(self) -> float:
        if self.n_conclusive == 0:
            return float("nan")
        return self.n_agree / self.n_conclusive

    def summary(self) -> str:
        return ("%d cells, %d conclusive, %d agree (rate %.3f)"
                % (len(self.entries), self.n_conclusive, self.n_agree,
                   self.agreement_rate))


def proposition21_experiment(catalog: dict, params_grid, *,
                             n_max: int = 2 ** 14,
                             tail_depth: int = 14) -> AgreementMatrix:
    """Label every catalog measure by tail and by moments on a grid of
    ``(s, alpha)`` pairs and tabulate where the two criteria agree.

    Inconclusive cells are flagged (``conclusive = False``) and left out
    of the agreement statistics rather than counted as disagreement.
    """
    if not catalog:
        raise ValueError("proposition21_experiment needs a nonempty catalog")
    entries = []
    for name, m in catalog.items():
        mu = compute_moments(m, n_max)
        for s, alpha in params_grid:
            params = CarlesonParams(s, alpha)
            t_res = classify_tail(m, params, dyadic_t_ladder(tail_depth))
            m_res = classify_moments(mu, params)
            entries.append(AgreementEntry(name, s, alpha,
                                          t_res.label, m_res.label))
    return AgreementMatrix(tuple(entries))
