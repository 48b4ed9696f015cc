# Apache License, Version 2.0, refer to LICENSE.txt
import math

import pytest

import skewfit


def test_special_functions():
    assert skewfit.log_gamma(5.0) == pytest.approx(math.log(24.0), abs=1e-12)
    assert skewfit.norm_cdf(0.0) == pytest.approx(0.5, abs=1e-15)
    assert skewfit.norm_ppf(0.975) == pytest.approx(1.959963984540054, abs=1e-12)


def test_densities_reduce_to_normal():
    ref = -0.5 * math.log(2 * math.pi) - 0.5 * 0.3 ** 2
    assert skewfit.gsn_logpdf(0.3, 0.0, 1.0, 1.0) == pytest.approx(ref, abs=1e-12)
    assert skewfit.asn_logpdf(0.3, 0.0, 1.0, 0.0) == pytest.approx(ref, abs=1e-12)


def test_invalid_parameters_raise():
    with pytest.raises(ValueError):
        skewfit.gsn_logpdf(0.0, 0.0, -1.0, 0.5)
    with pytest.raises(ValueError):
        skewfit.fit([1.0, 2.0, 3.0], model="nope")


def test_sampling_is_seeded():
    a = skewfit.gsn_sample(1.0, 1.0, 0.8, 50, seed=4)
    b = skewfit.gsn_sample(1.0, 1.0, 0.8, 50, seed=4)
    assert a == b and len(a) == 50
    assert skewfit.ks_distance(a, a) == 0.0


@pytest.mark.parametrize("model,method", [("gsn", "mcmc"), ("gsn", "vi"), ("asn", "mcmc")])
def test_fit_runs(model, method):
    data = skewfit.gsn_sample(1.0, 1.0, 0.8, 60, seed=11)
    res = skewfit.fit(data, model=model, method=method, iters=2000, burnin=500, thin=2, seed=3)
    assert 0.0 <= res.ksd <= 1.0
    assert len(res.map_estimates) == 3
    assert len(res.predictive) == 1000
    if method == "vi":
        trace = res.elbo_trace
        assert all(b - a >= -1e-8 for a, b in zip(trace, trace[1:]))
    again = skewfit.fit(data, model=model, method=method, iters=2000, burnin=500, thin=2, seed=3)
    assert again.report == res.report
