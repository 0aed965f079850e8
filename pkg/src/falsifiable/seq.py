"""Falsifiability and capacity for sequential prediction on input trees.

A tree of depth n stores one input index per node of a complete binary tree,
in heap order: node 0 is the root and the children of node i are 2i+1 (left)
and 2i+2 (right). A path is a sign vector; sign -1 moves to the left child
and +1 to the right. Only the first n-1 signs of a path pick nodes; the last
sign matters for the Rademacher sums and the shattering condition.

Two conventions are fixed here and used throughout:

* Soft falsifiability draws effective hypotheses on a path as labellings of
  the *distinct* inputs it visits (``convention="functions"``, the
  equivalence classes of hypotheses on X). ``"positions"`` instead labels
  every path position independently.
* The sequential Rademacher complexity uses raw 0/1 predictor outputs in its
  class form, and zero labels by default in its loss form, in which case the
  two forms agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from . import limits
from .checks import Check
from .errors import InputError
from .info import Channel, info_gain
from .numerics import LOG_SLACK, MatrixGame, solve_matrix_game
from .slt import Domain, Labels, Theory, _as_domain

SQRT8 = math.sqrt(8.0)


@dataclass(frozen=True)
class Path:
    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (-1, 1) for s in signs):
            raise InputError(f"path signs must be -1 or +1, got {self.signs!r}")
        object.__setattr__(self, "signs", signs)

    def __len__(self) -> int:
        return len(self.signs)

    @classmethod
    def all(cls, depth: int) -> Iterator["Path"]:
        for signs in product((-1, 1), repeat=depth):
            yield cls(signs)


def _node_indices(signs: Sequence[int]) -> list[int]:
    idx, out = 0, []
    for s in signs:
        out.append(idx)
        idx = 2 * idx + (2 if s == 1 else 1)
    return out


@dataclass(frozen=True)
class Tree:
    """X-valued tree; rejects trees without a path of distinct inputs unless told otherwise."""

    domain: Domain
    depth: int
    nodes: tuple[int, ...]
    allow_degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        domain = _as_domain(self.domain)
        if not isinstance(self.depth, int) or self.depth < 1:
            raise InputError(f"tree depth must be a positive integer, got {self.depth!r}")
        nodes = tuple(int(v) for v in self.nodes)
        if len(nodes) != 2**self.depth - 1:
            raise InputError(f"a depth-{self.depth} tree has {2**self.depth - 1} nodes, got {len(nodes)}")
        if any(not 0 <= v < domain.size for v in nodes):
            raise InputError(f"node values must lie in 0..{domain.size - 1}")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "nodes", nodes)
        if not self.allow_degenerate and self.is_degenerate:
            raise InputError(f"tree {nodes} has no path visiting {self.depth} distinct inputs")

    @property
    def is_degenerate(self) -> bool:
        return not any(len(set(self.points(p))) == self.depth for p in Path.all(self.depth))

    def points(self, path: Path | Sequence[int]) -> tuple[int, ...]:
        signs = path.signs if isinstance(path, Path) else tuple(path)
        if len(signs) != self.depth:
            raise InputError(f"path of length {len(signs)} applied to a depth-{self.depth} tree")
        return tuple(self.nodes[i] for i in _node_indices(signs))

    def paths(self) -> Iterator[Path]:
        return Path.all(self.depth)


def all_trees(domain, depth: int, allow_degenerate: bool = False) -> Iterator[Tree]:
    """Every tree of the given depth over the domain, in lexicographic node order."""
    domain = _as_domain(domain)
    limits.check("tree_depth", depth)
    for nodes in product(range(domain.size), repeat=2**depth - 1):
        tree = Tree(domain, depth, nodes, allow_degenerate=True)
        if allow_degenerate or not tree.is_degenerate:
            yield tree


def path_apply(tree: Tree, path: Path) -> tuple[int, ...]:
    return tree.points(path)


@dataclass(frozen=True)
class LiftedTheory:
    """Predictor-path pairs (f, w); the pairs are enumerated on demand."""

    base: Theory
    depth: int

    def __post_init__(self):
        if not isinstance(self.depth, int) or self.depth < 1:
            raise InputError("lifted depth must be a positive integer")

    def sequences(self, tree: Tree) -> Iterator[tuple[Labels, Labels]]:
        """(predictor, label sequence along w) for every pair (f, w)."""
        if tree.depth != self.depth:
            raise InputError("tree depth does not match the lifted theory")
        for path in tree.paths():
            pts = tree.points(path)
            for f in self.base:
                yield f, tuple(f[x] for x in pts)


def _check_labels(labels, n: int) -> Labels:
    labels = tuple(int(v) for v in labels)
    if len(labels) != n or any(v not in (0, 1) for v in labels):
        raise InputError(f"expected {n} labels in {{0, 1}}, got {labels!r}")
    return labels


def soft_risk_seq(theory: Theory, path: Path, tree: Tree, sigma: Sequence[int]) -> Fraction:
    """Best average loss along one path against the labels ``sigma``."""
    pts = tree.points(path)
    sigma = _check_labels(sigma, len(pts))
    return Fraction(min(sum(f[x] != y for x, y in zip(pts, sigma)) for f in theory), len(pts))


def q_image(lifted: LiftedTheory, tree: Tree) -> frozenset[Labels]:
    return frozenset(seq for _, seq in lifted.sequences(tree))


def q_image_count(lifted: LiftedTheory, tree: Tree) -> int:
    return len(q_image(lifted, tree))


def hard_risk_seq(lifted: LiftedTheory, tree: Tree, sigma: Sequence[int], rho: Path | None = None) -> Fraction:
    """Best average loss over all predictor-path pairs.

    ``sigma`` is either the label sequence of the hypothesis along its path,
    or, when ``rho`` is given, a labelling of the whole domain that is read
    off along ``rho``.
    """
    if rho is not None:
        labels = _check_labels(sigma, tree.domain.size)
        sigma = tuple(labels[x] for x in tree.points(rho))
    sigma = _check_labels(sigma, tree.depth)
    best = min(sum(a != b for a, b in zip(seq, sigma)) for seq in q_image(lifted, tree))
    return Fraction(best, tree.depth)


def effective_lifted_hypotheses(tree: Tree) -> frozenset[Labels]:
    """Label sequences realized by some hypothesis on X along some path.

    On a tree with a path of distinct inputs this is all of {0,1}^n; on a
    degenerate tree it is smaller, since repeated inputs force repeated labels.
    """
    realized = set()
    for path in tree.paths():
        pts = tree.points(path)
        distinct = sorted(set(pts))
        for labels in product((0, 1), repeat=len(distinct)):
            sigma = dict(zip(distinct, labels))
            realized.add(tuple(sigma[x] for x in pts))
    return frozenset(realized)


def _path_expected_risk(theory: Theory, pts: tuple[int, ...], convention: str) -> Fraction:
    n = len(pts)
    if convention == "positions":
        columns = [tuple(f[x] for x in pts) for f in theory]
        total = sum(min(sum(a != b for a, b in zip(col, sigma)) for col in set(columns))
                    for sigma in product((0, 1), repeat=n))
        return Fraction(total, n * 2**n)
    distinct = sorted(set(pts))
    multiplicity = [pts.count(x) for x in distinct]
    rows = {tuple(f[x] for x in distinct) for f in theory}
    total = sum(min(sum(c * (a != b) for a, b, c in zip(row, sigma, multiplicity)) for row in rows)
                for sigma in product((0, 1), repeat=len(distinct)))
    return Fraction(total, n * 2 ** len(distinct))


def soft_falsifiability_seq(theory: Theory, tree: Tree, convention: str = "functions") -> Fraction:
    """Twice the expected soft risk: uniform path, then uniform effective hypothesis."""
    if convention not in ("functions", "positions"):
        raise InputError(f"unknown convention {convention!r}")
    limits.check("tree_depth", tree.depth)
    total = sum(_path_expected_risk(theory, tree.points(p), convention) for p in tree.paths())
    return 2 * total / 2**tree.depth


def hard_falsifiability_seq(theory: Theory, tree: Tree) -> float:
    """(1/n) times the information gained by learning that the hard risk is zero."""
    limits.check("tree_depth", tree.depth)
    lifted = LiftedTheory(theory, tree.depth)
    image = q_image(lifted, tree)
    n = tree.depth
    risk = {
        sigma: Fraction(min(sum(a != b for a, b in zip(seq, sigma)) for seq in image), n)
        for sigma in sorted(effective_lifted_hypotheses(tree))
    }
    channel = Channel.deterministic(risk, outputs=sorted(set(risk.values())))
    return info_gain(channel, Fraction(0)) / n


@dataclass(frozen=True)
class WorstTree:
    """Infimum of soft and hard falsifiability over a tree family, with minimizers."""

    depth: int
    soft: Fraction
    hard: float
    soft_tree: Tree
    hard_tree: Tree
    family_size: int


def worst_tree_seq(theory: Theory, depth: int, family: Sequence[Tree] | None = None,
                   convention: str = "functions") -> WorstTree:
    family = list(family) if family is not None else list(all_trees(theory.domain, depth))
    if not family:
        raise InputError(f"no admissible depth-{depth} trees over {theory.domain.size} inputs")
    soft_best = hard_best = None
    for tree in family:
        if tree.depth != depth:
            raise InputError("tree family mixes depths")
        s = soft_falsifiability_seq(theory, tree, convention)
        h = hard_falsifiability_seq(theory, tree)
        if soft_best is None or s < soft_best[0]:
            soft_best = (s, tree)
        if hard_best is None or h < hard_best[0]:
            hard_best = (h, tree)
    return WorstTree(depth, soft_best[0], hard_best[0], soft_best[1], hard_best[1], len(family))


def soft_falsifiability_seq_n(theory: Theory, depth: int, family: Sequence[Tree] | None = None) -> Fraction:
    return worst_tree_seq(theory, depth, family).soft


def hard_falsifiability_seq_n(theory: Theory, depth: int, family: Sequence[Tree] | None = None) -> float:
    return worst_tree_seq(theory, depth, family).hard


def seq_rademacher(theory: Theory, tree: Tree, form: str = "class",
                   labels: Sequence[int] | None = None) -> Fraction:
    """Exact sequential Rademacher complexity over all 2^n sign vectors.

    The sign vector doubles as the path. In the loss form ``labels`` is a
    Y-valued tree in the same heap layout (all zeros by default).
    """
    if form not in ("class", "loss"):
        raise InputError(f"unknown form {form!r}")
    n = tree.depth
    limits.check("tree_depth", n)
    if form == "loss":
        labels = (0,) * len(tree.nodes) if labels is None else tuple(int(v) for v in labels)
        if len(labels) != len(tree.nodes) or any(v not in (0, 1) for v in labels):
            raise InputError("label tree must hold one 0/1 label per node")
    elif labels is not None:
        raise InputError("labels only apply to the loss form")
    total = 0
    for zeta in product((-1, 1), repeat=n):
        idx = _node_indices(zeta)
        best = None
        for f in theory:
            values = [f[tree.nodes[i]] for i in idx]
            if form == "loss":
                values = [int(v != labels[i]) for v, i in zip(values, idx)]
            score = sum(z * v for z, v in zip(zeta, values))
            best = score if best is None else max(best, score)
        total += best
    return Fraction(total, n * 2**n)


def zero_cover_number(theory: Theory, tree: Tree) -> int:
    """Exact size of a smallest zero-cover by Y-valued trees (branch and bound)."""
    limits.check("cover_depth", tree.depth)
    limits.check("cover_theory", len(theory))
    n, size = tree.depth, len(tree.nodes)
    # Universe: one element per (f, path); each needs its labels on the path's nodes.
    needs = []
    for path in tree.paths():
        idx = _node_indices(path.signs)
        for f in theory:
            needs.append(tuple((i, f[tree.nodes[i]]) for i in idx))
    full = (1 << len(needs)) - 1
    candidates = []
    for bits in range(1 << size):
        mask = 0
        for e, need in enumerate(needs):
            if all((bits >> i) & 1 == y for i, y in need):
                mask |= 1 << e
        candidates.append(mask)
    # Drop candidates dominated by another one; they never help a minimum cover.
    unique = sorted(set(candidates), key=lambda m: -bin(m).count("1"))
    maximal = [m for k, m in enumerate(unique) if not any(o != m and o & m == m for o in unique[:k])]
    covering = [[m for m in maximal if (m >> e) & 1] for e in range(len(needs))]

    best = [q_image_count(LiftedTheory(theory, n), tree)]
    widest = max(bin(m).count("1") for m in maximal)

    def search(covered: int, used: int) -> None:
        if covered == full:
            best[0] = min(best[0], used)
            return
        remaining = bin(full & ~covered).count("1")
        if used + -(-remaining // widest) >= best[0]:
            return
        uncovered = full & ~covered
        first = (uncovered & -uncovered).bit_length() - 1
        for m in covering[first]:
            search(covered | m, used + 1)

    search(0, 0)
    return best[0]


def seq_shatters(theory: Theory, tree: Tree) -> bool:
    for path in tree.paths():
        pts = tree.points(path)
        target = tuple((s + 1) // 2 for s in path.signs)
        if not any(tuple(f[x] for x in pts) == target for f in theory):
            return False
    return True


def littlestone_dimension(theory: Theory) -> int:
    """Mistake-tree recursion: 1 + min over the two label splits, maximized over inputs."""
    return _ldim(frozenset(theory.predictors), theory.domain.size)


@lru_cache(maxsize=None)
def _ldim(predictors: frozenset, m: int) -> int:
    best = 0
    for x in range(m):
        zero = frozenset(f for f in predictors if f[x] == 0)
        one = predictors - zero
        if zero and one:
            best = max(best, 1 + min(_ldim(zero, m), _ldim(one, m)))
    return best


def littlestone_by_trees(theory: Theory, max_depth: int) -> int:
    """Largest depth <= max_depth of an explicitly enumerated SEQ-shattered tree."""
    best = 0
    for d in range(1, max_depth + 1):
        if any(seq_shatters(theory, t) for t in all_trees(theory.domain, d, allow_degenerate=True)):
            best = d
        else:
            break
    return best


def lifted_shatters(theory: Theory, tree: Tree) -> bool:
    return q_image_count(LiftedTheory(theory, tree.depth), tree) == 2**tree.depth


def vc_lifted(theory: Theory, depth_bound: int) -> int:
    """VC dimension of the lifted theory, searched over trees up to ``depth_bound``.

    The lifted theory shatters a tree of depth d when its q-image on the tree
    is all of {0,1}^d. Degenerate trees are included in the search.
    """
    limits.check("lifted_depth", depth_bound)
    best = 0
    for d in range(1, depth_bound + 1):
        if any(lifted_shatters(theory, t) for t in all_trees(theory.domain, d, allow_degenerate=True)):
            best = d
        else:
            break
    return best


@dataclass(frozen=True)
class GameSpec:
    theory: Theory
    rounds: int

    def __post_init__(self):
        if not isinstance(self.rounds, int) or self.rounds < 1:
            raise InputError("the game needs at least one round")
        limits.check("game_rounds", self.rounds)
        limits.check("game_events", len(self.events))

    @property
    def events(self) -> tuple[tuple[int, int], ...]:
        return tuple((x, y) for x in self.theory.domain.points for y in (0, 1))


def hindsight_comparator(theory: Theory, events: Sequence[tuple[int, int]]) -> int:
    """Cumulative loss of the best predictor in hindsight."""
    return min(sum(f[x] != y for x, y in events) for f in theory)


def minimax_value_seq(spec: GameSpec) -> Fraction:
    """Exact value of the n-round prediction game, normalized by 1/n.

    The state after each round is the vector of cumulative predictor losses,
    shifted so its minimum is zero (the continuation value moves by exactly
    the shift). Each state solves one matrix game whose rows are predictors
    and whose columns are Nature's events.
    """
    predictors = spec.theory.predictors
    events = spec.events
    loss = [[int(f[x] != y) for (x, y) in events] for f in predictors]

    @lru_cache(maxsize=None)
    def value(state: tuple[int, ...], remaining: int) -> Fraction:
        if remaining == 0:
            return Fraction(0)
        payoff = []
        for i in range(len(predictors)):
            row = []
            for j in range(len(events)):
                nxt = [s + loss[k][j] for k, s in enumerate(state)]
                shift = min(nxt)
                row.append(loss[i][j] + value(tuple(v - shift for v in nxt), remaining - 1) - shift)
            payoff.append(row)
        return solve_matrix_game(MatrixGame(payoff)).value

    return value((0,) * len(predictors), spec.rounds) / spec.rounds


@dataclass(frozen=True)
class SeqChainReport:
    n: int
    value: Fraction
    worst: WorstTree
    rademacher_bound: Fraction
    degenerate_trees: int
    checks: tuple[Check, ...]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)


def verify_chain_seq(theory: Theory, n: int, tree_family: Sequence[Tree] | None = None) -> SeqChainReport:
    """Exact V against F and G infimized over ``tree_family``.

    The family defaults to every non-degenerate depth-n tree over the domain.
    The report also carries twice the largest loss-form sequential Rademacher
    complexity over the family, the intermediate quantity in the chain.
    """
    family = list(tree_family) if tree_family is not None else list(all_trees(theory.domain, n))
    worst = worst_tree_seq(theory, n, family)
    value = minimax_value_seq(GameSpec(theory, n))
    radem = 2 * max(seq_rademacher(theory, t, form="loss") for t in family)
    one_minus_f = 1 - worst.soft
    checks = (
        Check("D-SEQ", "V_n <= 1 - F_n", value, one_minus_f, slack=LOG_SLACK),
        Check("D-SEQ", "1 - F_n <= sqrt(8) * sqrt(1 - G_n)", one_minus_f,
              SQRT8 * math.sqrt(max(1 - worst.hard, 0.0)), slack=LOG_SLACK),
    )
    degenerate = sum(t.is_degenerate for t in family)
    return SeqChainReport(n, value, worst, radem, degenerate, checks)
