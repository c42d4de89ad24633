from collections import Counter

import pytest
from scipy.stats import chisquare

from randlambda.counting import count_cl, count_closed_lambda, enumerate_cl, enumerate_closed_lambda
from randlambda.sampling import SampleConfig, derive_rng, rng_stream, sample_cl, sample_lambda, sample_many
from randlambda.terms import parse_lambda


def _chi2_pvalue(draws, support):
    counts = Counter(draws)
    assert set(counts) <= set(support)
    observed = [counts.get(t, 0) for t in support]
    return chisquare(observed).pvalue


def test_size_one_is_identity():
    ident = parse_lambda(r"\x. x")
    assert all(sample_lambda(1, derive_rng(3, "s", i)) is ident for i in range(50))


def test_size_zero_rejected():
    with pytest.raises(ValueError):
        sample_lambda(0, derive_rng(0, "s", 0))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lambda_uniform(n):
    support = list(enumerate_closed_lambda(n))
    draws = [sample_lambda(n, derive_rng(11, ("u", n), i)) for i in range(200 * len(support))]
    assert _chi2_pvalue(draws, support) > 0.001


@pytest.mark.parametrize("n", [0, 1, 2])
def test_cl_uniform(n):
    support = list(enumerate_cl(n))
    draws = [sample_cl(n, derive_rng(12, ("c", n), i)) for i in range(200 * len(support))]
    assert _chi2_pvalue(draws, support) > 0.001


def test_samples_have_exact_size_and_are_closed():
    for n in (1, 5, 17, 60):
        for i in range(30):
            t = sample_lambda(n, derive_rng(1, n, i))
            assert t.size == n and t.free == 0
            c = sample_cl(n, derive_rng(1, n, i))
            assert c.size == n


def test_determinism_and_stream_independence():
    a = sample_many(SampleConfig(seed=5, n=30, count=20))
    b = sample_many(SampleConfig(seed=5, n=30, count=20))
    assert a == b
    c = sample_many(SampleConfig(seed=6, n=30, count=20))
    assert a[0] is not c[0]
    first = [r.random() for r, _ in zip(rng_stream(1, 0), range(1000))]
    second = [r.random() for r, _ in zip(rng_stream(1, 1), range(1000))]
    assert not set(first) & set(second)
    assert derive_rng(9, 2, 3).random() == derive_rng(9, 2, 3).random()


def test_prefix_stability():
    # draw i does not depend on how many draws are requested
    short = sample_many(SampleConfig(seed=2, n=12, count=5, model="cl"))
    long = sample_many(SampleConfig(seed=2, n=12, count=50, model="cl"))
    assert long[:5] == short


def test_config_validation():
    with pytest.raises(ValueError):
        SampleConfig(seed=-1, n=3, count=1)
    with pytest.raises(ValueError):
        SampleConfig(seed=0, n=3, count=1, model="ski")


def test_large_sizes_are_supported():
    t = sample_lambda(300, derive_rng(0, "big", 0))
    assert t.size == 300
    assert count_closed_lambda(300) > count_cl(300)
