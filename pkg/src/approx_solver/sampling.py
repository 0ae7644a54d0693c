"""
Sampling Module
Random block samplings: tau-nice and tau-independent
"""
import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import List

import numpy as np

from .errors import EnumerationCapError, SamplingError

DEFAULT_ENUMERATION_CAP = 10 ** 6


class SamplingKind(str, Enum):
    TAU_NICE = "nice"
    TAU_INDEPENDENT = "independent"


@dataclass(frozen=True)
class SamplingScheme:
    """A uniform block sampling with nominal size tau"""
    kind: SamplingKind
    tau: int

    def validate(self, n: int):
        if n < 1:
            raise SamplingError(f"number of blocks must be positive, got {n}")
        if not 1 <= self.tau <= n:
            raise SamplingError(f"tau must lie in [1, {n}], got {self.tau}")


class RngState:
    """
    Seeded random stream used for block draws.

    Two instances built from the same seed produce the same draw sequence.
    The tau-nice draw keeps a persistent index permutation and reshuffles
    only its first tau entries (partial Fisher-Yates).
    """

    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self.stream = None
        self.generator = np.random.default_rng(np.random.SeedSequence(self.seed))
        self._perm = None

    def spawn(self, count: int) -> List["RngState"]:
        """
        Independent child streams derived from the seed, one per worker.
        Child i is labelled stream i and does not depend on this stream's state.
        """
        children = []
        for index, child_seq in enumerate(np.random.SeedSequence(self.seed).spawn(count)):
            child = RngState.__new__(RngState)
            child.seed = self.seed
            child.stream = index
            child.generator = np.random.default_rng(child_seq)
            child._perm = None
            children.append(child)
        return children

    def _permutation(self, n: int) -> np.ndarray:
        if self._perm is None or len(self._perm) != n:
            self._perm = np.arange(n)
        return self._perm


def draw(scheme: SamplingScheme, n: int, rng: RngState) -> np.ndarray:
    """
    Draw one random block set

    Args:
        scheme: Sampling law and nominal tau
        n: Number of blocks
        rng: Random stream, advanced in place

    Returns:
        Sorted array of distinct block indices
    """
    scheme.validate(n)
    tau = scheme.tau
    if scheme.kind is SamplingKind.TAU_NICE:
        perm = rng._permutation(n)
        if tau == n:
            return np.arange(n)
        # partial Fisher-Yates on the first tau slots
        picks = rng.generator.integers(np.arange(tau), n)
        for slot, pick in enumerate(picks):
            perm[slot], perm[pick] = perm[pick], perm[slot]
        return np.sort(perm[:tau])
    picks = rng.generator.integers(0, n, size=tau)
    return np.unique(picks)


def enumerate_tau_nice(n: int, tau: int, cap: int = DEFAULT_ENUMERATION_CAP) -> List[tuple]:
    """All subsets of size tau, in lexicographic order"""
    SamplingScheme(SamplingKind.TAU_NICE, tau).validate(n)
    count = math.comb(n, tau)
    if count > cap:
        raise EnumerationCapError(count, cap)
    return list(itertools.combinations(range(n), tau))


def inclusion_probability(scheme: SamplingScheme, n: int) -> float:
    """P(i in S) for every block i"""
    scheme.validate(n)
    if scheme.kind is SamplingKind.TAU_NICE:
        return scheme.tau / n
    return 1.0 - (1.0 - 1.0 / n) ** scheme.tau


def expected_size(scheme: SamplingScheme, n: int) -> float:
    """E|S| = n * P(i in S)"""
    return n * inclusion_probability(scheme, n)
