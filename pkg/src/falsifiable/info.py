"""Induced distributions, Bayes posteriors and information gain on finite channels.

A :class:`Channel` is a conditional distribution ``P(y|x)`` between finite
sets. Deterministic functions embed through :meth:`Channel.deterministic`.
When no prior is given the uniform prior on the inputs is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import InfiniteDivergenceError, InputError, UndefinedGainError, UndefinedPosteriorError
from .numerics import as_fraction, log2

Atom = Hashable


@dataclass(frozen=True)
class FiniteDistribution:
    """Exact probability mass function on an ordered, finite support.

    Atoms with zero mass may be listed; they are part of the support set
    (which matters for KL divergence and for output alphabets) but carry no
    probability.
    """

    support: tuple
    mass: Mapping[Atom, Fraction]

    def __post_init__(self):
        support = tuple(self.support)
        if len(set(support)) != len(support):
            raise InputError("duplicate atoms in support")
        if set(self.mass) - set(support):
            raise InputError("mass assigned to atoms outside the support")
        mass = {a: as_fraction(self.mass.get(a, 0)) for a in support}
        if any(v < 0 for v in mass.values()):
            raise InputError("negative probability mass")
        if sum(mass.values()) != 1:
            raise InputError(f"masses sum to {sum(mass.values())}, not 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "mass", mass)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Atom, object]]) -> "FiniteDistribution":
        pairs = list(pairs)
        return cls(tuple(a for a, _ in pairs), {a: m for a, m in pairs})

    @classmethod
    def uniform(cls, atoms: Iterable[Atom]) -> "FiniteDistribution":
        atoms = tuple(atoms)
        if not atoms:
            raise InputError("uniform distribution needs at least one atom")
        p = Fraction(1, len(atoms))
        return cls(atoms, {a: p for a in atoms})

    @classmethod
    def point(cls, atom: Atom, support: Iterable[Atom] | None = None) -> "FiniteDistribution":
        support = tuple(support) if support is not None else (atom,)
        return cls(support, {atom: Fraction(1)})

    def __getitem__(self, atom: Atom) -> Fraction:
        return self.mass.get(atom, Fraction(0))

    def items(self):
        return ((a, self.mass[a]) for a in self.support)

    def positive(self) -> tuple:
        return tuple(a for a in self.support if self.mass[a] > 0)

    def expectation(self, fn: Callable[[Atom], object]) -> Fraction:
        return sum((m * fn(a) for a, m in self.items() if m), Fraction(0))


@dataclass(frozen=True)
class Channel:
    """Noisy channel with ``conditional[(y, x)] = P(y | x)``."""

    inputs: tuple
    outputs: tuple
    conditional: Mapping[tuple[Atom, Atom], Fraction]

    def __post_init__(self):
        inputs, outputs = tuple(self.inputs), tuple(self.outputs)
        if not inputs or not outputs:
            raise InputError("channel needs nonempty input and output sets")
        if len(set(inputs)) != len(inputs) or len(set(outputs)) != len(outputs):
            raise InputError("duplicate channel symbols")
        table = {}
        for x in inputs:
            column = {y: as_fraction(self.conditional.get((y, x), 0)) for y in outputs}
            if any(v < 0 for v in column.values()) or sum(column.values()) != 1:
                raise InputError(f"P(.|{x!r}) is not a distribution")
            table.update({(y, x): v for y, v in column.items()})
        stray = set(self.conditional) - set(table)
        if stray:
            raise InputError(f"conditional mentions unknown symbols: {sorted(map(repr, stray))[:3]}")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)
        object.__setattr__(self, "conditional", table)

    @classmethod
    def deterministic(
        cls,
        fn: Mapping[Atom, Atom] | Callable[[Atom], Atom],
        inputs: Sequence[Atom] | None = None,
        outputs: Sequence[Atom] | None = None,
    ) -> "Channel":
        """Channel with ``P(y|x) = 1`` iff ``fn(x) == y``."""
        if isinstance(fn, Mapping):
            inputs = tuple(fn) if inputs is None else tuple(inputs)
            lookup = fn.__getitem__
        else:
            if inputs is None:
                raise InputError("inputs are required for a callable")
            inputs = tuple(inputs)
            lookup = fn
        images = [lookup(x) for x in inputs]
        if outputs is None:
            outputs = tuple(dict.fromkeys(images))
        return cls(inputs, tuple(outputs), {(y, x): Fraction(1) for x, y in zip(inputs, images)})

    def __call__(self, y: Atom, x: Atom) -> Fraction:
        return self.conditional[(y, x)]


def _prior_for(ch: Channel, prior: FiniteDistribution | None) -> FiniteDistribution:
    if prior is None:
        return FiniteDistribution.uniform(ch.inputs)
    if set(prior.support) != set(ch.inputs):
        raise InputError("prior support does not match the channel inputs")
    return prior


def induced_distribution(ch: Channel, prior: FiniteDistribution | None = None) -> FiniteDistribution:
    prior = _prior_for(ch, prior)
    mass = {y: sum((prior[x] * ch(y, x) for x in ch.inputs), Fraction(0)) for y in ch.outputs}
    return FiniteDistribution(ch.outputs, mass)


def bayes_posterior(ch: Channel, y: Atom, prior: FiniteDistribution | None = None) -> FiniteDistribution:
    prior = _prior_for(ch, prior)
    if y not in ch.outputs:
        raise UndefinedPosteriorError(f"{y!r} is not a channel output")
    evidence = induced_distribution(ch, prior)[y]
    if evidence == 0:
        raise UndefinedPosteriorError(f"output {y!r} has zero induced probability")
    return FiniteDistribution(ch.inputs, {x: ch(y, x) * prior[x] / evidence for x in ch.inputs})


def kl_divergence(p: FiniteDistribution, q: FiniteDistribution) -> float:
    """D[p || q] in bits, with the convention 0 log(0/q) = 0."""
    if set(p.support) != set(q.support):
        raise InputError("KL divergence needs distributions on the same support")
    total = 0.0
    for atom, pm in p.items():
        if pm == 0:
            continue
        qm = q[atom]
        if qm == 0:
            raise InfiniteDivergenceError(f"p({atom!r}) > 0 but q({atom!r}) = 0")
        total += float(pm) * log2(pm / qm)
    return max(total, 0.0)


def info_gain(ch: Channel, y: Atom, prior: FiniteDistribution | None = None) -> float:
    """Bayesian information gain: KL divergence of the posterior from the prior."""
    prior = _prior_for(ch, prior)
    try:
        posterior = bayes_posterior(ch, y, prior)
    except UndefinedPosteriorError as exc:
        raise UndefinedGainError(str(exc)) from exc
    return kl_divergence(posterior, prior)


def mutual_information(ch: Channel, prior: FiniteDistribution | None = None) -> float:
    """Expected information gain under the induced output distribution."""
    prior = _prior_for(ch, prior)
    induced = induced_distribution(ch, prior)
    return sum(float(m) * info_gain(ch, y, prior) for y, m in induced.items() if m > 0)
