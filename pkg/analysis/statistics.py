"""
Throughput Statistics Module
Distribution summaries of per-user throughput and the offline fair optimum

Includes:
- Empirical CDF (ties merged) and its two-column table
- Decile values and decile-wise dominance of two samples
- Log utility and the offline proportional fair point of a rate region
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize

from core.model import RateVector
from models.rate_region import RateRegion

logger = logging.getLogger(__name__)

DECILE_LEVELS = np.linspace(0.1, 0.9, 9)


def empirical_cdf(values: Sequence[float]) -> List[Tuple[float, float]]:
    """
    Step function of a sample: (value, fraction of the sample <= value)

    Example:
        >>> empirical_cdf([1, 2, 3])   # [(1, 1/3), (2, 2/3), (3, 1.0)]
    """
    data = np.sort(np.asarray(values, dtype=float))
    if data.size == 0:
        raise ValueError("empirical_cdf needs at least one value")
    unique, counts = np.unique(data, return_counts=True)
    fractions = np.cumsum(counts) / data.size
    return [(float(v), float(f)) for v, f in zip(unique, fractions)]


def cdf_dataframe(values: Sequence[float]) -> pd.DataFrame:
    cdf = empirical_cdf(values)
    return pd.DataFrame(cdf, columns=['throughput', 'cdf'])


def decile_values(values: Sequence[float]) -> np.ndarray:
    """Sample values at the 10%, 20%, ..., 90% levels of the empirical CDF"""
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise ValueError("decile_values needs at least one value")
    return np.quantile(data, DECILE_LEVELS, method='inverted_cdf')


def cdf_dominates(larger: Sequence[float], smaller: Sequence[float], tolerance: float = 0.0) -> bool:
    """The CDF of `larger` lies weakly to the right of `smaller` at every decile"""
    return bool(np.all(decile_values(larger) >= decile_values(smaller) - tolerance))


def log_utility(rates) -> float:
    rates = np.asarray(rates, dtype=float)
    with np.errstate(divide='ignore'):
        return float(np.sum(np.log(rates)))


@dataclass
class FairOptimum:
    """Time-sharing weights over corner points maximising sum log rate"""
    weights: np.ndarray
    rates: RateVector
    utility: float
    active_users: Tuple[int, ...]

    def __str__(self):
        return f"FairOptimum(rates={self.rates}, utility={self.utility:.6f})"


def offline_pf_optimum(region: RateRegion) -> FairOptimum:
    """
    Maximise sum_i log d_i over convex combinations of the corner points

    Users whose best corner rate is zero are excluded from the utility.
    """
    rates = region.rate_matrix()
    k = rates.shape[0]
    active = tuple(int(i) for i in np.flatnonzero(rates.max(axis=0) > 0))
    if not active:
        return FairOptimum(np.eye(k)[0], RateVector.zeros(region.n_users), 0.0, ())

    sub = rates[:, active]

    def objective(lam):
        d = np.maximum(lam @ sub, 1e-300)
        return -np.sum(np.log(d))

    def gradient(lam):
        d = np.maximum(lam @ sub, 1e-300)
        return -(sub / d).sum(axis=1)

    start = np.full(k, 1.0 / k)
    res = minimize(objective, start, jac=gradient, method='SLSQP',
                   bounds=[(0.0, 1.0)] * k,
                   constraints=[{'type': 'eq', 'fun': lambda lam: lam.sum() - 1.0,
                                 'jac': lambda lam: np.ones_like(lam)}],
                   options={'ftol': 1e-12, 'maxiter': 500})
    if not res.success:
        logger.warning(f"Offline PF optimisation did not converge: {res.message}")

    weights = np.clip(res.x, 0.0, None)
    weights /= weights.sum()
    point = RateVector.from_array(np.clip(weights @ rates, 0.0, 1.0))
    utility = log_utility(point.as_array()[list(active)])
    return FairOptimum(weights, point, utility, active)
