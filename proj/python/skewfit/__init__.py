# Apache License, Version 2.0, refer to LICENSE.txt
"""Bayesian fitting of skewed univariate data with the ASN and GSN models."""

import json

from ._skewfit import (
    ConfigError,
    DataError,
    DomainError,
    NumericalError,
    __version__,
    asn_logpdf,
    asn_sample,
    digamma,
    gsn_logpdf,
    gsn_sample,
    ks_distance,
    log_gamma,
    map_estimate,
    norm_cdf,
    norm_ppf,
)
from ._skewfit import fit as _fit


class FitResult:
    def __init__(self, report, header, draws, predictive, elbo):
        self.report = report
        self.draw_header = header
        self.draws = draws
        self.predictive = predictive
        self.elbo_trace = elbo

    @property
    def ksd(self):
        return self.report["ksd"]

    @property
    def map_estimates(self):
        return self.report["map_estimates"]


def fit(data, model="gsn", method="mcmc", latent="rw", iters=20000, burnin=5000,
        thin=5, tol=1e-6, seed=1):
    report, header, draws, predictive, elbo = _fit(
        list(map(float, data)), model, method, latent, iters, burnin, thin, tol, seed)
    return FitResult(json.loads(report), header, draws, predictive, elbo)


__all__ = [
    "ConfigError", "DataError", "DomainError", "NumericalError", "FitResult",
    "asn_logpdf", "asn_sample", "digamma", "fit", "gsn_logpdf", "gsn_sample",
    "ks_distance", "log_gamma", "map_estimate", "norm_cdf", "norm_ppf",
]
