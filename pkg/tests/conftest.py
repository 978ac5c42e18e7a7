import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240801)


def chi2_pvalue(observed, expected):
    """Chi-square goodness-of-fit p-value, merging cells with expectation < 5."""
    from scipy.stats import chi2

    obs, exp = [], []
    spill_o = spill_e = 0.0
    for o, e in zip(observed, expected):
        if e < 5.0:
            spill_o += o
            spill_e += e
        else:
            obs.append(o)
            exp.append(e)
    if spill_e > 0:
        obs.append(spill_o)
        exp.append(spill_e)
    obs = np.asarray(obs, dtype=float)
    exp = np.asarray(exp, dtype=float)
    stat = ((obs - exp) ** 2 / exp).sum()
    return chi2.sf(stat, df=len(obs) - 1)
