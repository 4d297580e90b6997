"""
Balanced binary codes: s words of length t whose Hamming weights and
pairwise Hamming distances all lie in [(1/2 - eta) t, (1/2 + eta) t].

Two constructions are provided. Hadamard-derived codes are exactly balanced
(eta = 0) with t linear in s. Random linear codes over GF(2) reach
t = ceil(c * log2(s) / eta^2) and are resampled until balanced.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.linalg import hadamard

from robustkz.errors import CodeConstructionError

logger = logging.getLogger(__name__)

MAX_RESAMPLES = 1000
MODES = ("hadamard", "random-linear")


@dataclass(frozen=True)
class CodeBook:
    """s binary words of block length t."""

    t: int
    eta: float
    words: np.ndarray
    mode: str = "hadamard"

    @property
    def s(self) -> int:
        return int(self.words.shape[0])

    @property
    def interval(self) -> Tuple[float, float]:
        return (0.5 - self.eta) * self.t, (0.5 + self.eta) * self.t

    def complements(self) -> np.ndarray:
        return 1 - self.words

    def balance_violations(self) -> List[str]:
        """Every weight or pairwise distance outside the interval."""
        low, high = self.interval
        problems = []
        weights = self.words.sum(axis=1)
        for i, w in enumerate(weights.tolist()):
            if not low <= w <= high:
                problems.append(f"word {i} has weight {w} outside [{low}, {high}]")
        distances = hamming_matrix(self.words)
        for i in range(self.s):
            for j in range(i + 1, self.s):
                if not low <= distances[i, j] <= high:
                    problems.append(f"words {i},{j} at distance {distances[i, j]} "
                                    f"outside [{low}, {high}]")
        return problems

    def is_balanced(self) -> bool:
        return not self.balance_violations()


def hamming_matrix(words: np.ndarray) -> np.ndarray:
    """Pairwise Hamming distances between rows of a 0/1 matrix."""
    w = words.astype(np.int64)
    return w @ (1 - w).T + (1 - w) @ w.T


def _hadamard_code(s: int) -> CodeBook:
    t = 2 ** max(1, math.ceil(math.log2(s + 1)))
    rows = hadamard(t)[1:s + 1]
    return CodeBook(t=t, eta=0.0, words=(rows < 0).astype(np.uint8), mode="hadamard")


def random_linear_length(s: int, eta: float, c: float = 1.0) -> int:
    return math.ceil(c * max(1.0, math.log2(s)) / eta ** 2)


def _random_linear_code(s: int, eta: float, seed: int, c: float) -> CodeBook:
    if not 0 < eta < 0.5:
        raise ValueError(f"random-linear codes need eta in (0, 1/2), got {eta}")
    t = random_linear_length(s, eta, c)
    bits = max(1, math.ceil(math.log2(s + 1)))
    # messages 1..s, so no word is the zero word
    messages = (np.arange(1, s + 1)[:, None] >> np.arange(bits)[None, :]) & 1
    rng = np.random.default_rng(seed)
    for attempt in range(1, MAX_RESAMPLES + 1):
        generator = rng.integers(0, 2, size=(bits, t))
        book = CodeBook(t=t, eta=eta, words=((messages @ generator) % 2).astype(np.uint8),
                        mode="random-linear")
        if book.is_balanced():
            logger.debug("Random linear code balanced after %d samples (t=%d)", attempt, t)
            return book
    raise CodeConstructionError(
        f"no balanced random linear code with s={s}, eta={eta}, t={t} after "
        f"{MAX_RESAMPLES} samples; increase t via the length constant c"
    )


def build_code(s: int, eta: float = 0.0, mode: str = "hadamard", seed: int = 0,
               c: float = 1.0) -> CodeBook:
    """
    Build a balanced code.

    Args:
        s: number of words
        eta: balance parameter; Hadamard codes always achieve 0
        mode: "hadamard" or "random-linear"
        seed: seed for random-linear generator matrices
        c: length constant for random-linear codes

    Returns:
        A CodeBook that passed the exhaustive balance check.
    """
    if s < 1:
        raise ValueError(f"code needs at least one word, got s={s}")
    if eta < 0:
        raise ValueError(f"eta must be nonnegative, got {eta}")
    if mode == "hadamard":
        book = _hadamard_code(s)
    elif mode == "random-linear":
        book = _random_linear_code(s, eta, seed, c)
    else:
        raise ValueError(f"unknown code mode {mode!r}, expected one of {MODES}")
    problems = book.balance_violations()
    if problems:
        raise CodeConstructionError(f"code is not balanced: {problems[0]}")
    return book
