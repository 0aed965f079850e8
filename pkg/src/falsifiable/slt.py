"""Falsifiability and capacity of finite theories under i.i.d. sampling.

Inputs are the indices ``0..m-1`` of a finite domain and labels are 0/1. A
theory is a set of predictors, each stored as its full label vector. All
risks, soft falsifiability and Rademacher complexities are exact Fractions;
hard falsifiability involves one base-2 logarithm and is a float.

Conventions:

* Input sequences hold distinct points. Worst-case (``*_n``) measures
  minimize over unordered n-subsets, which gives the same value as over
  ordered sequences because every measure here is permutation invariant.
* The class-form Rademacher complexity encodes predictor outputs as signs
  (0 -> -1, 1 -> +1) by default, the encoding under which it equals twice
  the loss-form complexity. ``encoding="binary"`` uses the raw 0/1 outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from . import limits
from .checks import Check
from .errors import InputError
from .info import Channel, FiniteDistribution, info_gain
from .numerics import LOG2_E, LOG_SLACK, as_fraction, log2

Labels = tuple[int, ...]

SQRT8 = math.sqrt(8.0)
# Constants of the data-dependent bounds, with log read as log2.
SOFT_BOUND_C = math.sqrt(2.0 / LOG2_E)
HARD_BOUND_D1 = math.sqrt(6.0 / LOG2_E)
HARD_BOUND_D2 = math.sqrt(1.0 / LOG2_E)


@dataclass(frozen=True)
class Domain:
    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise InputError(f"domain size must be a positive integer, got {self.size!r}")

    @property
    def points(self) -> range:
        return range(self.size)


def _as_domain(domain) -> Domain:
    return domain if isinstance(domain, Domain) else Domain(domain)


def _parse_labels(vector) -> Labels:
    if isinstance(vector, str):
        vector = [int(ch) for ch in vector]
    labels = tuple(int(v) for v in vector)
    if any(v not in (0, 1) for v in labels):
        raise InputError(f"labels must be 0/1, got {vector!r}")
    return labels


@dataclass(frozen=True)
class Theory:
    """A nonempty set of predictors; order matters only for ERM tie-breaking."""

    domain: Domain
    predictors: tuple[Labels, ...]

    def __post_init__(self):
        domain = _as_domain(self.domain)
        predictors = tuple(_parse_labels(f) for f in self.predictors)
        if not predictors:
            raise InputError("a theory needs at least one predictor")
        if any(len(f) != domain.size for f in predictors):
            raise InputError(f"every predictor needs {domain.size} labels")
        if len(set(predictors)) != len(predictors):
            raise InputError("duplicate predictors")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "predictors", predictors)

    @classmethod
    def full(cls, m: int) -> "Theory":
        """Every labelling of an m-point domain, in lexicographic order."""
        return cls(Domain(m), tuple(product((0, 1), repeat=m)))

    @classmethod
    def constants(cls, m: int) -> "Theory":
        return cls(Domain(m), ((0,) * m, (1,) * m))

    @classmethod
    def singleton_indicators(cls, m: int) -> "Theory":
        return cls(Domain(m), tuple(tuple(int(i == a) for i in range(m)) for a in range(m)))

    @classmethod
    def from_strings(cls, *vectors: str) -> "Theory":
        return cls(Domain(len(vectors[0])), tuple(vectors))

    def __len__(self) -> int:
        return len(self.predictors)

    def __iter__(self):
        return iter(self.predictors)

    def restrictions(self, points: Sequence[int]) -> tuple[Labels, ...]:
        """Label vector of every predictor on ``points`` (duplicates kept)."""
        return tuple(tuple(f[x] for x in points) for f in self.predictors)

    def subtheory(self, indices: Sequence[int]) -> "Theory":
        return Theory(self.domain, tuple(self.predictors[i] for i in indices))

    def label_strings(self) -> list[str]:
        return ["".join(map(str, f)) for f in self.predictors]


@dataclass(frozen=True)
class InputSequence:
    domain: Domain
    points: tuple[int, ...]

    def __post_init__(self):
        domain = _as_domain(self.domain)
        points = tuple(int(x) for x in self.points)
        if not points:
            raise InputError("input sequence is empty")
        if any(not 0 <= x < domain.size for x in points):
            raise InputError(f"inputs must lie in 0..{domain.size - 1}")
        if len(set(points)) != len(points):
            raise InputError(f"input sequence {points} repeats a point")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class LabeledSample:
    inputs: InputSequence
    labels: Labels

    def __post_init__(self):
        labels = _parse_labels(self.labels)
        if len(labels) != len(self.inputs):
            raise InputError("sample needs one label per input")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_pairs(cls, domain, pairs: Sequence[tuple[int, int]]) -> "LabeledSample":
        pairs = list(pairs)
        return cls(InputSequence(domain, tuple(x for x, _ in pairs)), tuple(y for _, y in pairs))

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class RiskProfile:
    """Exact risk of a theory for every effective hypothesis on fixed inputs."""

    inputs: InputSequence
    errors: dict[Labels, Fraction] = field(hash=False)

    def __post_init__(self):
        n = len(self.inputs)
        if len(self.errors) != 2**n:
            raise InputError(f"profile needs {2**n} effective hypotheses, got {len(self.errors)}")
        if any(not 0 <= e <= 1 or n % Fraction(e).denominator for e in self.errors.values()):
            raise InputError("profile errors must be multiples of 1/n in [0, 1]")


@dataclass(frozen=True)
class EventDistribution:
    """Distribution over events ``(x, y)`` of a finite domain."""

    domain: Domain
    dist: FiniteDistribution

    def __post_init__(self):
        domain = _as_domain(self.domain)
        for atom in self.dist.support:
            if not (isinstance(atom, tuple) and len(atom) == 2 and 0 <= atom[0] < domain.size and atom[1] in (0, 1)):
                raise InputError(f"event {atom!r} is not an (input, label) pair of the domain")
        object.__setattr__(self, "domain", domain)

    @classmethod
    def from_mass(cls, domain, mass: dict) -> "EventDistribution":
        pairs = [((int(x), int(y)), as_fraction(p)) for (x, y), p in mass.items()]
        return cls(_as_domain(domain), FiniteDistribution.from_pairs(pairs))

    @classmethod
    def labelled_by(cls, domain, labels: Sequence[int], noise=0, inputs: Sequence[int] | None = None) -> "EventDistribution":
        """Uniform inputs with label ``labels[x]`` flipped with probability ``noise``."""
        domain = _as_domain(domain)
        noise = as_fraction(noise)
        inputs = tuple(inputs) if inputs is not None else tuple(domain.points)
        weight = Fraction(1, len(inputs))
        mass = {}
        for x in inputs:
            y = int(labels[x])
            mass[(x, y)] = mass.get((x, y), 0) + weight * (1 - noise)
            mass[(x, 1 - y)] = mass.get((x, 1 - y), 0) + weight * noise
        return cls(domain, FiniteDistribution.from_pairs((k, v) for k, v in mass.items() if v))

    @classmethod
    def uniform_events(cls, domain, inputs: Sequence[int] | None = None) -> "EventDistribution":
        """Uniform inputs with fair-coin labels."""
        domain = _as_domain(domain)
        inputs = tuple(inputs) if inputs is not None else tuple(domain.points)
        return cls(domain, FiniteDistribution.uniform([(x, y) for x in inputs for y in (0, 1)]))

    def items(self):
        return ((atom, m) for atom, m in self.dist.items() if m > 0)


def _loss(f: Labels, x: int, y: int) -> int:
    return int(f[x] != y)


def _hamming(a: Labels, b: Labels) -> int:
    return sum(u != v for u, v in zip(a, b))


def _training_errors(theory: Theory, sample: LabeledSample) -> list[int]:
    xs, ys = sample.inputs.points, sample.labels
    return [sum(_loss(f, x, y) for x, y in zip(xs, ys)) for f in theory]


def empirical_risk(theory: Theory, sample: LabeledSample) -> Fraction:
    return Fraction(min(_training_errors(theory, sample)), len(sample))


def distributional_risk(theory: Theory, dist: EventDistribution) -> Fraction:
    return min(sum((m * _loss(f, x, y) for (x, y), m in dist.items()), Fraction(0)) for f in theory)


def erm(theory: Theory, sample: LabeledSample) -> int:
    """Index of a training-error minimizer; ties go to the lowest index."""
    errors = _training_errors(theory, sample)
    return errors.index(min(errors))


def risk_profile(theory: Theory, inputs: InputSequence) -> RiskProfile:
    n = len(inputs)
    realized = set(theory.restrictions(inputs.points))
    errors = {
        sigma: Fraction(min(_hamming(sigma, q) for q in realized), n)
        for sigma in product((0, 1), repeat=n)
    }
    return RiskProfile(inputs, errors)


def risk_induced_error_distribution(profile: RiskProfile) -> FiniteDistribution:
    counts: dict[Fraction, int] = {}
    for e in profile.errors.values():
        counts[e] = counts.get(e, 0) + 1
    total = len(profile.errors)
    return FiniteDistribution.from_pairs((e, Fraction(counts[e], total)) for e in sorted(counts))


def soft_falsifiability(theory: Theory, inputs: InputSequence) -> Fraction:
    q = risk_induced_error_distribution(risk_profile(theory, inputs))
    return 2 * q.expectation(lambda eps: eps)


def _risk_channel(profile: RiskProfile) -> Channel:
    errors = sorted(set(profile.errors.values()))
    return Channel.deterministic(profile.errors, outputs=errors)


def hard_falsifiability(theory: Theory, inputs: InputSequence) -> float:
    """(1/n) times the information gained by learning that the risk is zero."""
    profile = risk_profile(theory, inputs)
    return info_gain(_risk_channel(profile), Fraction(0)) / len(inputs)


def input_sets(theory: Theory, n: int) -> Iterator[InputSequence]:
    m = theory.domain.size
    if not 1 <= n <= m:
        raise InputError(f"n must be in 1..{m}, got {n}")
    for pts in combinations(range(m), n):
        yield InputSequence(theory.domain, pts)


def soft_falsifiability_n(theory: Theory, n: int) -> Fraction:
    return min(soft_falsifiability(theory, xs) for xs in input_sets(theory, n))


def hard_falsifiability_n(theory: Theory, n: int) -> float:
    return min(hard_falsifiability(theory, xs) for xs in input_sets(theory, n))


@dataclass(frozen=True)
class WorstCase:
    """Worst-case soft/hard falsifiability over n-subsets, with the minimizers."""

    n: int
    soft: Fraction
    hard: float
    soft_inputs: tuple[int, ...]
    hard_inputs: tuple[int, ...]


def worst_case(theory: Theory, n: int) -> WorstCase:
    soft_best = hard_best = None
    for xs in input_sets(theory, n):
        s, h = soft_falsifiability(theory, xs), hard_falsifiability(theory, xs)
        if soft_best is None or s < soft_best[0]:
            soft_best = (s, xs.points)
        if hard_best is None or h < hard_best[0]:
            hard_best = (h, xs.points)
    return WorstCase(n, soft_best[0], hard_best[0], soft_best[1], hard_best[1])


def _signs(n: int):
    limits.check("rademacher_n", n)
    return product((-1, 1), repeat=n)


def rademacher(theory: Theory, inputs: InputSequence, encoding: str = "sign") -> Fraction:
    """Exact class-form Rademacher complexity over all 2^n sign vectors."""
    if encoding not in ("sign", "binary"):
        raise InputError(f"unknown encoding {encoding!r}")
    n = len(inputs)
    rows = set(theory.restrictions(inputs.points))
    if encoding == "sign":
        rows = {tuple(2 * v - 1 for v in r) for r in rows}
    total = sum(max(sum(z * v for z, v in zip(zeta, r)) for r in rows) for zeta in _signs(n))
    return Fraction(total, n * 2**n)


def rademacher_loss(theory: Theory, inputs: InputSequence, labels: Sequence[int] | None = None) -> Fraction:
    """Exact loss-form Rademacher complexity; labels default to all zeros."""
    n = len(inputs)
    labels = (0,) * n if labels is None else _parse_labels(labels)
    if len(labels) != n:
        raise InputError("one label per input required")
    rows = {tuple(int(v != y) for v, y in zip(r, labels)) for r in theory.restrictions(inputs.points)}
    total = sum(max(sum(z * v for z, v in zip(zeta, r)) for r in rows) for zeta in _signs(n))
    return Fraction(total, n * 2**n)


def covering_number(theory: Theory, inputs: InputSequence) -> int:
    return len(set(theory.restrictions(inputs.points)))


def shatters(theory: Theory, inputs: InputSequence) -> bool:
    return covering_number(theory, inputs) == 2 ** len(inputs)


def vc_dimension(theory: Theory) -> int:
    best = 0
    for n in range(1, theory.domain.size + 1):
        # Shattering is hereditary, so the first size with no shattered subset ends the search.
        if any(shatters(theory, xs) for xs in input_sets(theory, n)):
            best = n
        else:
            break
    return best


def enumerate_theories(m: int, max_size: int) -> Iterator[Theory]:
    """Every nonempty theory with at most ``max_size`` predictors over m points.

    Ordered by size, then lexicographically by the indices of the predictors
    in the lexicographic list of all 2^m label vectors.
    """
    if not isinstance(m, int) or m < 1:
        raise InputError(f"domain size must be positive, got {m!r}")
    limits.check("sweep_domain", m)
    if not 1 <= max_size <= 2**m:
        raise InputError(f"max_size must be in 1..{2**m}")
    vectors = list(product((0, 1), repeat=m))
    domain = Domain(m)
    for k in range(1, max_size + 1):
        for combo in combinations(vectors, k):
            yield Theory(domain, combo)


# --- sample-based measures (repeated inputs allowed) -------------------------
#
# An i.i.d. sample usually repeats inputs. On a sample the effective
# hypotheses are the labellings of the n sample *positions*; with distinct
# inputs this coincides with the definitions above.


def _event_counts(events: Sequence[tuple[int, int]]) -> dict[tuple[int, int], int]:
    counts: dict[tuple[int, int], int] = {}
    for z in events:
        counts[z] = counts.get(z, 0) + 1
    return counts


def sample_rademacher_loss(theory: Theory, events: Sequence[tuple[int, int]]) -> Fraction:
    """Exact loss-form Rademacher complexity of a sample with repeats.

    Positions sharing an event contribute a binomially distributed sign sum,
    so the expectation runs over per-event sums rather than all 2^n sign
    vectors. Events on which every predictor has the same loss shift all
    predictors equally and have zero-mean contribution, so they are dropped.
    """
    n = len(events)
    if n == 0:
        raise InputError("sample is empty")
    counts = _event_counts(events)
    kept = [(z, c) for z, c in counts.items() if len({_loss(f, *z) for f in theory}) > 1]
    if not kept:
        return Fraction(0)
    states = math.prod(c + 1 for _, c in kept)
    limits.check("multiset_states", states)
    dtype = np.int64 if n <= 56 else object
    losses = np.array([[_loss(f, *z) for z, _ in kept] for f in theory], dtype=dtype)
    scores = np.zeros((len(theory), 1), dtype=dtype)
    weights = np.ones(1, dtype=dtype)
    for j, (_, c) in enumerate(kept):
        sums = np.array([2 * b - c for b in range(c + 1)], dtype=dtype)
        binom = np.array([math.comb(c, b) for b in range(c + 1)], dtype=dtype)
        scores = (scores[:, :, None] + losses[:, j][:, None, None] * sums[None, None, :]).reshape(len(theory), -1)
        weights = np.outer(weights, binom).reshape(-1)
    # Each dropped position still multiplies the number of sign vectors by two.
    dropped = n - sum(c for _, c in kept)
    total = int(np.dot(weights, scores.max(axis=0))) * 2**dropped
    return Fraction(total, n * 2**n)


def sample_soft_falsifiability(theory: Theory, events: Sequence[tuple[int, int]]) -> Fraction:
    return 1 - 2 * sample_rademacher_loss(theory, events)


def sample_covering_number(theory: Theory, points: Sequence[int]) -> int:
    return len(set(theory.restrictions(sorted(set(points)))))


def sample_hard_falsifiability(theory: Theory, points: Sequence[int]) -> float:
    return 1 - log2(sample_covering_number(theory, points)) / len(points)


# --- data-dependent bounds on the ERM generalization gap ---------------------


def soft_bound(soft: Fraction, n: int, delta: float) -> float:
    return 1 - float(soft) + SOFT_BOUND_C * math.sqrt((1 - math.log2(delta)) / n)


def hard_bound(hard: float, n: int, delta: float) -> float:
    return HARD_BOUND_D1 * math.sqrt(max(1 - hard, 0.0)) + HARD_BOUND_D2 * math.sqrt((1 - math.log2(delta)) / n)


def violation_tolerance(delta: float, trials: int) -> float:
    """Allowed violation rate: delta plus three binomial standard deviations."""
    return delta + 3 * math.sqrt(delta * (1 - delta) / trials)


class _Sampler:
    """Exact categorical sampling from rational masses via a common denominator."""

    def __init__(self, dist: EventDistribution, rng: np.random.Generator):
        self.events = [atom for atom, _ in dist.items()]
        masses = [m for _, m in dist.items()]
        denom = math.lcm(*(m.denominator for m in masses))
        if denom >= 2**62:
            raise InputError("distribution denominators too large for exact sampling")
        self.cumulative = np.cumsum([int(m * denom) for m in masses])
        self.denom = denom
        self.rng = rng

    def draw(self, n: int) -> list[tuple[int, int]]:
        u = self.rng.integers(0, self.denom, size=n)
        return [self.events[i] for i in np.searchsorted(self.cumulative, u, side="right")]


@dataclass(frozen=True)
class Trial:
    gap: Fraction
    train_risk: Fraction
    test_risk: Fraction
    soft: Fraction
    hard: float
    soft_bound: float
    hard_bound: float

    @property
    def soft_margin(self) -> float:
        return self.soft_bound - float(self.gap)

    @property
    def hard_margin(self) -> float:
        return self.hard_bound - float(self.gap)


@dataclass(frozen=True)
class GeneralizationReport:
    n: int
    delta: float
    seed: int
    trials: tuple[Trial, ...]

    @property
    def tolerance(self) -> float:
        return violation_tolerance(self.delta, len(self.trials))

    @property
    def soft_violation_rate(self) -> float:
        return sum(t.soft_margin < 0 for t in self.trials) / len(self.trials)

    @property
    def hard_violation_rate(self) -> float:
        return sum(t.hard_margin < 0 for t in self.trials) / len(self.trials)

    def margin_summary(self, which: str) -> dict[str, float]:
        margins = np.array([t.soft_margin if which == "soft" else t.hard_margin for t in self.trials])
        return {
            "min": float(margins.min()),
            "q05": float(np.quantile(margins, 0.05)),
            "median": float(np.median(margins)),
            "mean": float(margins.mean()),
            "max": float(margins.max()),
        }

    @property
    def mean_gap(self) -> float:
        return float(sum(t.gap for t in self.trials) / len(self.trials))

    def checks(self) -> list[Check]:
        return [
            Check("D''-s", "violation rate of the soft data-dependent bound <= delta + 3 sd",
                  self.soft_violation_rate, self.tolerance),
            Check("D''-h", "violation rate of the hard data-dependent bound <= delta + 3 sd",
                  self.hard_violation_rate, self.tolerance),
        ]


def generalization_experiment(
    theory: Theory,
    dist: EventDistribution,
    n: int,
    trials: int,
    delta: float,
    seed: int = 0,
) -> GeneralizationReport:
    """Monte-Carlo check of the two data-dependent bounds on the ERM gap.

    Each trial draws n i.i.d. events, runs ERM, and compares the exact
    expected test risk minus training risk of the chosen predictor against
    both bounds evaluated on the drawn sample.
    """
    if not 0 < delta < 1:
        raise InputError(f"delta must lie in (0, 1), got {delta}")
    if trials < 100:
        raise InputError(f"at least 100 trials required, got {trials}")
    if n < 1:
        raise InputError("n must be positive")
    if dist.domain != theory.domain:
        raise InputError("distribution and theory live on different domains")
    sampler = _Sampler(dist, np.random.default_rng(seed))
    test_risk = [sum((m * _loss(f, x, y) for (x, y), m in dist.items()), Fraction(0)) for f in theory]
    soft_cache: dict[tuple, Fraction] = {}
    records = []
    for _ in range(trials):
        events = sampler.draw(n)
        counts = _event_counts(events)
        errors = [sum(c * _loss(f, *z) for z, c in counts.items()) for f in theory]
        chosen = errors.index(min(errors))
        train = Fraction(errors[chosen], n)
        key = tuple(sorted(counts.items()))
        if key not in soft_cache:
            soft_cache[key] = sample_soft_falsifiability(theory, events)
        soft = soft_cache[key]
        hard = sample_hard_falsifiability(theory, [x for x, _ in events])
        records.append(Trial(
            gap=test_risk[chosen] - train,
            train_risk=train,
            test_risk=test_risk[chosen],
            soft=soft,
            hard=hard,
            soft_bound=soft_bound(soft, n, delta),
            hard_bound=hard_bound(hard, n, delta),
        ))
    return GeneralizationReport(n, delta, seed, tuple(records))


# --- learnability chain -----------------------------------------------------------


def default_distribution_family(theory: Theory) -> list[EventDistribution]:
    """Each predictor with 0 and 1/4 label noise, plus fair-coin labels."""
    family = []
    for f in theory:
        for noise in (Fraction(0), Fraction(1, 4)):
            family.append(EventDistribution.labelled_by(theory.domain, f, noise))
    family.append(EventDistribution.uniform_events(theory.domain))
    return family


@dataclass(frozen=True)
class SltChainReport:
    n: int
    worst: WorstCase
    proxy_gap: float
    proxy_slack: float
    proxy_index: int
    checks: tuple[Check, ...]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)


def _erm_excess_risk(theory: Theory, dist: EventDistribution, n: int, trials: int, rng) -> tuple[float, float]:
    """Mean and standard error of R_P(ERM) - inf_f R_P(f) over simulated samples."""
    sampler = _Sampler(dist, rng)
    risks = [sum((m * _loss(f, x, y) for (x, y), m in dist.items()), Fraction(0)) for f in theory]
    best = min(risks)
    excess = []
    for _ in range(trials):
        counts = _event_counts(sampler.draw(n))
        errors = [sum(c * _loss(f, *z) for z, c in counts.items()) for f in theory]
        excess.append(float(risks[errors.index(min(errors))] - best))
    arr = np.array(excess)
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0


def verify_chain_slt(
    theory: Theory,
    n: int,
    family: Sequence[EventDistribution] | None = None,
    trials: int = 200,
    seed: int = 0,
) -> SltChainReport:
    """Exact F_n/G_n chain plus an ERM-based empirical proxy for the game value.

    The proxy is the largest mean ERM excess risk over ``family``; it is
    compared with 1 - F_n allowing three standard errors.
    """
    worst = worst_case(theory, n)
    one_minus_f = 1 - worst.soft
    rhs = SQRT8 * math.sqrt(max(1 - worst.hard, 0.0))
    checks = [Check("D", "1 - F_n <= sqrt(8) * sqrt(1 - G_n)", one_minus_f, rhs, slack=LOG_SLACK)]
    family = list(family) if family is not None else default_distribution_family(theory)
    rng = np.random.default_rng(seed)
    proxy, slack, where = 0.0, 0.0, -1
    for i, dist in enumerate(family):
        mean, se = _erm_excess_risk(theory, dist, n, trials, rng)
        if where < 0 or mean > proxy:
            proxy, slack, where = mean, 3 * se, i
    if family:
        checks.append(Check("D", "ERM excess-risk proxy for V_n <= 1 - F_n", proxy, float(one_minus_f),
                            slack=slack + LOG_SLACK))
    return SltChainReport(n, worst, proxy, slack, where, tuple(checks))
