"""Probabilistic re-ranking of competition submissions.

Published leaderboards rank point-estimate accuracies.  With a finite test
set those accuracies carry posterior uncertainty: correct/wrong counts are
recovered from accuracy and test-set size, accuracy gets a Beta posterior,
and Monte Carlo resampling of synthetic leaderboards yields per-position
probabilities, the chance the top entry is truly best, and expected prizes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import BetaParams, ParseError, PriorSpec, RoundingInconsistentError
from .posterior import resolve_seed

__all__ = [
    "Submission",
    "RankProbabilityMatrix",
    "PrizeAllocation",
    "acc_posterior",
    "rank_distribution",
    "prob_best",
    "allocate_prizes",
    "read_submissions_csv",
]

DEFAULT_DRAWS = 10_000


def _decimal_places(text: str) -> int:
    """Decimal places carried by a plain decimal literal; 0 when none."""
    if "e" in text or "E" in text:
        # scientific notation: trust the value as exact
        return 15
    _, _, frac = text.partition(".")
    return len(frac)


@dataclass(frozen=True)
class Submission:
    """One leaderboard entry: reported accuracy resolved into counts."""

    name: str
    acc_point: float
    n: int
    correct: int
    wrong: int

    @classmethod
    def from_accuracy(
        cls, name: str, accuracy: float, n: int, decimals: int | None = None
    ) -> "Submission":
        """Build a submission from a reported accuracy and test-set size.

        ``accuracy * n`` must land on an integer within the resolution of the
        reported accuracy (half a unit in its last decimal place); a larger
        deviation means the stated ``n`` cannot have produced this accuracy
        and raises RoundingInconsistentError.
        """
        if not 0.0 <= accuracy <= 1.0:
            raise ValueError(f"accuracy {accuracy} outside [0, 1]")
        if n < 1:
            raise ValueError("test-set size must be at least 1")
        if decimals is None:
            decimals = _decimal_places(repr(float(accuracy)))
        correct_real = accuracy * n
        correct = int(round(correct_real))
        tolerance = min(0.5, 0.5 * 10.0**-decimals * n) + 1e-9
        if abs(correct_real - correct) > tolerance:
            raise RoundingInconsistentError(
                f"{name}: accuracy {accuracy} at n={n} implies {correct_real:.6g} "
                f"correct predictions, not an integer (check n)"
            )
        correct = min(max(correct, 0), n)
        return cls(name=name, acc_point=accuracy, n=n, correct=correct, wrong=n - correct)


def acc_posterior(sub: Submission, prior: PriorSpec = PriorSpec.laplace()) -> BetaParams:
    """Beta posterior of a submission's accuracy."""
    return BetaParams(sub.correct + prior.alpha, sub.wrong + prior.beta)


@dataclass(frozen=True)
class RankProbabilityMatrix:
    """Per-submission, per-position probabilities from leaderboard resampling.

    ``entries[s, p]`` is the probability that submission ``s`` finishes at
    position ``p`` (0-based, position 0 is first place).  Rows and columns
    each sum to 1 up to Monte Carlo error.
    """

    names: tuple[str, ...]
    entries: np.ndarray
    draws: int
    seed: int

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def position_probs(self, name: str) -> np.ndarray:
        return self.entries[self.names.index(name)]


def rank_distribution(
    subs: list[Submission],
    draws: int = DEFAULT_DRAWS,
    seed: int | None = None,
    prior: PriorSpec = PriorSpec.laplace(),
) -> RankProbabilityMatrix:
    """Monte Carlo distribution over leaderboard positions.

    Per draw, one accuracy is sampled from each submission's posterior and
    submissions are ranked descending; sampled ties are broken uniformly at
    random.  Position counts are accumulated and normalized.
    """
    if len(subs) < 2:
        raise ValueError("ranking needs at least two submissions")
    if draws < 1:
        raise ValueError("need at least one draw")
    seed = resolve_seed(seed)
    rng = np.random.default_rng(seed)
    posteriors = [acc_posterior(sub, prior) for sub in subs]
    alphas = np.array([p.alpha for p in posteriors])
    betas = np.array([p.beta for p in posteriors])
    scores = rng.beta(alphas, betas, size=(draws, len(subs)))
    tiebreak = rng.random(size=scores.shape)
    # per-row order: descending score, random among exact ties
    order = np.lexsort((tiebreak, -scores), axis=-1)
    counts = np.zeros((len(subs), len(subs)), dtype=np.int64)
    positions = np.tile(np.arange(len(subs)), draws)
    np.add.at(counts, (order.ravel(), positions), 1)
    return RankProbabilityMatrix(
        names=tuple(sub.name for sub in subs),
        entries=counts / draws,
        draws=draws,
        seed=seed,
    )


def prob_best(
    subs: list[Submission],
    draws: int = DEFAULT_DRAWS,
    seed: int | None = None,
    prior: PriorSpec = PriorSpec.laplace(),
    matrix: RankProbabilityMatrix | None = None,
) -> float:
    """Probability that the submission with the best point estimate is truly best."""
    if matrix is None:
        matrix = rank_distribution(subs, draws=draws, seed=seed, prior=prior)
    leader = int(np.argmax([sub.acc_point for sub in subs]))
    return float(matrix.entries[leader, 0])


@dataclass(frozen=True)
class PrizeAllocation:
    """Expected prize per submission under the rank distribution."""

    prizes: tuple[float, ...]
    names: tuple[str, ...]
    expected: np.ndarray

    def __post_init__(self):
        expected = np.asarray(self.expected, dtype=float)
        expected.setflags(write=False)
        object.__setattr__(self, "expected", expected)

    @property
    def total(self) -> float:
        return float(self.expected.sum())

    def expected_prize(self, name: str) -> float:
        return float(self.expected[self.names.index(name)])


def allocate_prizes(
    matrix: RankProbabilityMatrix, prizes: list[float] | tuple[float, ...]
) -> PrizeAllocation:
    """Weigh the prize vector by each submission's position probabilities."""
    k = len(prizes)
    if k < 1 or k > matrix.entries.shape[1]:
        raise ValueError("prize vector must cover between 1 and n positions")
    vec = np.asarray(prizes, dtype=float)
    return PrizeAllocation(
        prizes=tuple(float(p) for p in vec),
        names=matrix.names,
        expected=matrix.entries[:, :k] @ vec,
    )


def _parse_accuracy(text: str) -> tuple[float, int]:
    """Parse an accuracy cell into (value, decimal places).

    Accepts a decimal in [0, 1] or a percentage with a trailing ``%``.
    """
    text = text.strip()
    percent = text.endswith("%")
    if percent:
        text = text[:-1].strip()
    try:
        value = float(text)
    except ValueError as exc:
        raise ParseError(f"cannot parse accuracy {text!r}") from exc
    decimals = _decimal_places(text)
    if percent:
        value /= 100.0
        decimals += 2
    return value, decimals


def read_submissions_csv(path: str | Path, default_n: int | None = None) -> list[Submission]:
    """Load submissions from a CSV with header ``name,accuracy[,n]``.

    The ``n`` column is optional when ``default_n`` supplies a global
    test-set size.
    """
    path = Path(path)
    subs: list[Submission] = []
    with path.open(newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise ParseError(f"{path}: empty file")
        fields = [f.strip().lower() for f in reader.fieldnames]
        if "name" not in fields or "accuracy" not in fields:
            raise ParseError(f"{path}: header must contain name,accuracy[,n]")
        for lineno, row in enumerate(reader, start=2):
            row = {k.strip().lower(): v for k, v in row.items() if k is not None}
            try:
                accuracy, decimals = _parse_accuracy(row["accuracy"])
                raw_n = (row.get("n") or "").strip()
                n = int(raw_n) if raw_n else default_n
                if n is None:
                    raise ParseError("no n column and no global n given")
                subs.append(
                    Submission.from_accuracy(
                        row["name"].strip(), accuracy, n, decimals=decimals
                    )
                )
            except (KeyError, ValueError) as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            except ParseError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    if not subs:
        raise ParseError(f"{path}: no submissions found")
    return subs
