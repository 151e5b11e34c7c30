from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np


CONFIDENCE_SIGMAS = 3.0
"""width of the confidence interval, in standard errors"""


def ordered_map(function: Callable, items: Iterable, threads: int = 1) -> List:
    """
    Apply ``function`` to all ``items`` using ``threads`` worker threads.
    Results are returned in the order of ``items``, whatever the number of
    threads.
    """
    if threads <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(function, items))


class TrialResult:
    """
    Result of a Monte Carlo experiment: one value per trial, compared with an
    analytic upper bound on their expectation.

    The experiment passes when ``mean - 3 stderr ≤ bound`` and all the
    additional ``checks`` hold.
    """

    def __init__(
        self,
        name: str,
        values: Sequence[float],
        bound: float,
        rows: Optional[List[Dict]] = None,
        checks: Optional[Dict[str, bool]] = None,
        extra: Optional[Dict] = None,
    ):
        """
        :param name: name of the experiment
        :param values: value of the estimated quantity for every trial
        :param bound: analytic upper bound on the expectation of the values
        :param rows: per-trial details, written as CSV rows. Defaults to the
            trial index and value.
        :param checks: named boolean checks which must all hold
        :param extra: additional JSON-serializable information
        """
        self.name: str = name
        self.values: np.ndarray = np.array(values, dtype=np.float64)
        if self.values.ndim != 1 or len(self.values) == 0:
            raise ValueError("a trial result needs at least one value")

        self.bound: float = float(bound)

        if rows is None:
            rows = [{"trial": i, "value": v} for i, v in enumerate(self.values)]
        self.rows: List[Dict] = rows

        self.checks: Dict[str, bool] = {} if checks is None else dict(checks)
        self.extra: Dict = {} if extra is None else dict(extra)

    @property
    def trials(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def stderr(self) -> float:
        """standard error of the mean, zero for a single trial"""
        if self.trials < 2:
            return 0.0
        return float(np.std(self.values, ddof=1) / np.sqrt(self.trials))

    @property
    def half_width(self) -> float:
        return CONFIDENCE_SIGMAS * self.stderr

    @property
    def passed(self) -> bool:
        within = self.mean - self.half_width <= self.bound
        return bool(within and all(self.checks.values()))

    def as_dict(self) -> Dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "mean": self.mean,
            "stderr": self.stderr,
            "half_width": self.half_width,
            "bound": self.bound,
            "passed": self.passed,
            "checks": dict(self.checks),
            "extra": dict(self.extra),
        }

    def __repr__(self) -> str:
        return (
            f"TrialResult({self.name}: mean={self.mean:.6g} ± {self.half_width:.3g}, "
            f"bound={self.bound:.6g}, passed={self.passed})"
        )
