"""
Estimation and verification of the log-normal shadow fading distribution.
If the received power is measured in dB units, shadow fading is a zero-mean
Gaussian random variable with standard deviation :math:`\\sigma` (in dB), so
that the received power is

.. math::

   P_r(d) = \\overline{P_r}(d) + \\xi \\textrm{ dBm}.
"""

import warnings

import numpy as np
from scipy import stats
from pandas import DataFrame

from .config import (DEFAULT_BIN_WIDTH, SHADOW_MIN_SAMPLES, SHADOW_WARN_SAMPLES,
                     SHADOW_SIGMA_RANGE, CSV_HEADER, RSRP_SANITY_RANGE)
from .measurements import parse_measurement_csv
from .utils import to_array, from_array, key_value_report, atomic_write, figure_bytes


class ShadowFit(object):
    """
    The estimated mean and standard deviation of a set of received power
    values in dBm.

    Args:
        mu_dbm (float): the mean received power (dBm).
        sigma_db (float): the standard deviation (dB).
        n (int): the number of samples.
    """

    __slots__ = ('_mu', '_sigma', '_n')

    def __init__(self, mu_dbm, sigma_db, n):
        if sigma_db < 0.:
            raise ValueError("Standard deviation must be non-negative")

        if n < 2:
            raise ValueError("A fit requires at least 2 samples")

        self._mu = float(mu_dbm)
        self._sigma = float(sigma_db)
        self._n = int(n)

    @property
    def mu_dbm(self):
        return self._mu

    @property
    def sigma_db(self):
        return self._sigma

    @property
    def variance(self):
        return self._sigma**2

    @property
    def n(self):
        return self._n

    def __repr__(self):
        return 'ShadowFit(mu_dbm={}, sigma_db={}, n={})'.format(self._mu, self._sigma, self._n)


class HistogramSeries(object):
    """
    A histogram of received power values with equal width bins.

    Args:
        bin_edges (array_like): the bin edges in dBm (ascending).
        counts (array_like): the number of samples in each bin.
    """

    def __init__(self, bin_edges, counts):
        self._edges = np.array(bin_edges, dtype=float)
        self._counts = np.array(counts, dtype=int)

        if len(self._edges) != len(self._counts) + 1:
            raise ValueError("There must be one more bin edge than bin count")

        if np.any(np.diff(self._edges) <= 0.):
            raise ValueError("Bin edges must be strictly increasing")

        if np.any(self._counts < 0) or self._counts.sum() == 0:
            raise ValueError("Bin counts must be non-negative and not all zero")

        self._edges.setflags(write=False)
        self._counts.setflags(write=False)

    @property
    def bin_edges(self):
        return self._edges

    @property
    def counts(self):
        return self._counts

    @property
    def widths(self):
        return np.diff(self._edges)

    @property
    def bin_centers(self):
        return 0.5 * (self._edges[1:] + self._edges[:-1])

    @property
    def n(self):
        return int(self._counts.sum())

    @property
    def densities(self):
        """
        Return the densities (per dBm), normalised so that the sum of density
        times bin width is one.
        """

        return self._counts / (self.n * self.widths)

    def __len__(self):
        return len(self._counts)


def estimate_mean(samples):
    """
    The sample mean :math:`\\hat{\\mu} = \\frac{1}{N}\\sum_{n=1}^N x_n`.

    Args:
        samples (array_like): received power values in dBm.

    Returns:
        float: the mean in dBm.
    """

    x, _ = to_array(samples, name='samples')

    if len(x) == 0:
        raise ValueError("The mean requires at least one sample")

    return float(np.mean(x))


def estimate_variance(samples):
    """
    The unbiased sample variance
    :math:`\\hat{\\sigma}^2 = \\frac{1}{N-1}\\sum_{n=1}^N (x_n - \\hat{\\mu})^2`.

    Args:
        samples (array_like): received power values in dBm.

    Returns:
        float: the variance in dB\\ :sup:`2`.
    """

    x, _ = to_array(samples, name='samples')

    if len(x) < 2:
        raise ValueError("The variance requires at least two samples")

    return float(np.var(x, ddof=1))


def gaussian_pdf(x, mu, sigma):
    """
    The Gaussian probability density function

    .. math::

       f(x) = \\frac{1}{\\sigma\\sqrt{2\\pi}} \\exp{\\left(-\\frac{(x-\\mu)^2}{2\\sigma^2}\\right)}.

    Args:
        x (float, array_like): received power values in dBm.
        mu (float): the mean in dBm.
        sigma (float): the standard deviation in dB.

    Returns:
        float: the density per dBm.
    """

    if not sigma > 0.:
        raise ValueError("Standard deviation must be positive")

    xarr, isscalar = to_array(x, name='values')

    return from_array(stats.norm.pdf(xarr, loc=mu, scale=sigma), isscalar)


def gaussian_cdf(x, mu, sigma):
    """
    The Gaussian cumulative distribution function.

    Args:
        x (float, array_like): received power values in dBm.
        mu (float): the mean in dBm.
        sigma (float): the standard deviation in dB.

    Returns:
        float: the probability.
    """

    if not sigma > 0.:
        raise ValueError("Standard deviation must be positive")

    xarr, isscalar = to_array(x, name='values')

    return from_array(stats.norm.cdf(xarr, loc=mu, scale=sigma), isscalar)


def build_histogram(samples, bin_width_db=DEFAULT_BIN_WIDTH):
    """
    Create a histogram with left-closed, right-open bins whose edges are
    integer multiples of the bin width.

    Args:
        samples (array_like): received power values in dBm.
        bin_width_db (float): the bin width in dB. Defaults to 1 dB.

    Returns:
        :class:`~rfpropy.shadowing.HistogramSeries`: the histogram.
    """

    x, _ = to_array(samples, name='samples')

    if len(x) == 0:
        raise ValueError("A histogram requires at least one sample")

    if not bin_width_db > 0.:
        raise ValueError("Bin width must be positive")

    binidx = np.floor(x / bin_width_db).astype(np.int64)

    # the division can round across an edge, so check against the edges themselves
    binidx[x < binidx * bin_width_db] -= 1
    binidx[x >= (binidx + 1) * bin_width_db] += 1

    first = binidx.min()
    counts = np.bincount(binidx - first)
    edges = (first + np.arange(len(counts) + 1)) * bin_width_db

    return HistogramSeries(edges, counts)


def ks_statistic_gaussian(samples, mu, sigma):
    """
    The Kolmogorov-Smirnov statistic, i.e. the largest distance between the
    empirical cumulative distribution of the samples and a Gaussian
    distribution.

    Args:
        samples (array_like): received power values in dBm.
        mu (float): the Gaussian mean in dBm.
        sigma (float): the Gaussian standard deviation in dB.

    Returns:
        float: the statistic, between 0 and 1.
    """

    if not sigma > 0.:
        raise ValueError("Standard deviation must be positive")

    x, _ = to_array(samples, name='samples')

    if len(x) < 2:
        raise ValueError("The KS statistic requires at least two samples")

    return float(stats.kstest(x, 'norm', args=(mu, sigma)).statistic)


class ShadowingResult(object):
    """
    The result of a shadow fading fit: the moment-matched Gaussian, the
    histogram of the samples and the goodness-of-fit statistic.

    Args:
        fit (:class:`~rfpropy.shadowing.ShadowFit`): the fitted Gaussian.
        histogram (:class:`~rfpropy.shadowing.HistogramSeries`): the
            histogram.
        ks (float): the Kolmogorov-Smirnov statistic against the fitted
            Gaussian.
    """

    def __init__(self, fit, histogram, ks):
        self._fit = fit
        self._histogram = histogram
        self._ks = float(ks)

    @property
    def fit(self):
        return self._fit

    @property
    def histogram(self):
        return self._histogram

    @property
    def ks(self):
        return self._ks

    @property
    def ks_critical(self):
        """
        Return the 99% critical value :math:`1.63/\\sqrt{n}` of the KS
        statistic.
        """

        return 1.63 / np.sqrt(self._fit.n)

    def report(self):
        """
        Returns:
            str: a flat key-value text report of the fit.
        """

        hist = self._histogram
        return key_value_report([('n', self._fit.n),
                                 ('mu_dbm', self._fit.mu_dbm),
                                 ('sigma_db', self._fit.sigma_db),
                                 ('variance_db2', self._fit.variance),
                                 ('ks', self._ks),
                                 ('ks_critical_99', self.ks_critical),
                                 ('bin_width_db', float(hist.widths[0])),
                                 ('n_bins', len(hist))])

    def series(self):
        """
        Returns:
            :class:`pandas.DataFrame`: the histogram with columns
            ``bin_center``, ``count``, ``density`` and ``model_density``.
        """

        centers = self._histogram.bin_centers
        return DataFrame({'bin_center': centers,
                          'count': self._histogram.counts,
                          'density': self._histogram.densities,
                          'model_density': gaussian_pdf(centers, self._fit.mu_dbm,
                                                        self._fit.sigma_db)},
                         columns=['bin_center', 'count', 'density', 'model_density'])

    def write_series(self):
        """
        Returns:
            str: the histogram series (see
            :meth:`~rfpropy.shadowing.ShadowingResult.series`) as CSV text.
        """

        return self.series().to_csv(index=False, lineterminator='\n')

    def plot(self, output=None):
        """
        Plot the histogram densities of the samples together with the fitted
        Gaussian probability density.

        Args:
            output (str): path to save the figure to.

        Returns:
            :class:`matplotlib.figure.Figure`: the figure object
        """

        try:
            from matplotlib import pyplot as pl
        except ImportError:
            raise ImportError('Cannot produce shadowing plot as Matplotlib is '
                              'not available')

        hist = self._histogram
        fig, ax = pl.subplots(figsize=(7, 4.5))

        ax.bar(hist.bin_edges[:-1], hist.densities, width=hist.widths, align='edge',
               color='lightsteelblue', edgecolor='k', lw=0.5, label='Measured')

        x = np.linspace(hist.bin_edges[0], hist.bin_edges[-1], 500)
        ax.plot(x, gaussian_pdf(x, self._fit.mu_dbm, self._fit.sigma_db), 'r', lw=1.5,
                label=r'Gaussian, $\hat{{\mu}}$ = {:.1f} dBm, $\hat{{\sigma}}$ = {:.1f} dB'.format(
                    self._fit.mu_dbm, self._fit.sigma_db))

        ax.set_xlabel('Received power (dBm)')
        ax.set_ylabel('Probability density')
        ax.legend(loc='best')
        fig.tight_layout()

        if output is not None:
            atomic_write(output, figure_bytes(fig, output))

        return fig


def fit_shadowing(samples, bin_width_db=DEFAULT_BIN_WIDTH):
    """
    Fit a Gaussian to received power samples (in dBm) by matching the sample
    mean and unbiased variance, and test the fit with the Kolmogorov-Smirnov
    statistic. Samples are treated as independent draws from a stationary
    distribution.

    Args:
        samples (array_like): at least 30 received power values in dBm. A
            warning is given if there are fewer than 500.
        bin_width_db (float): the histogram bin width in dB. Defaults to 1 dB.

    Returns:
        :class:`~rfpropy.shadowing.ShadowingResult`: the fit.
    """

    x, _ = to_array(samples, name='samples')
    n = len(x)

    if n < SHADOW_MIN_SAMPLES:
        raise ValueError("A shadow fading fit requires at least {} samples, but "
                         "only {} were given".format(SHADOW_MIN_SAMPLES, n))

    if n < SHADOW_WARN_SAMPLES:
        warnings.warn("Only {} samples were given, more than {} are recommended "
                      "for a shadow fading fit".format(n, SHADOW_WARN_SAMPLES), UserWarning)

    mu = estimate_mean(x)
    sigma = np.sqrt(estimate_variance(x))

    histogram = build_histogram(x, bin_width_db=bin_width_db)

    # raises for a zero variance
    gaussian_pdf(histogram.bin_centers, mu, sigma)

    if not SHADOW_SIGMA_RANGE[0] <= sigma <= SHADOW_SIGMA_RANGE[1]:
        warnings.warn("Fitted standard deviation of {:.2f} dB is outside the typical "
                      "range of {}-{} dB".format(sigma, *SHADOW_SIGMA_RANGE), UserWarning)

    ks = ks_statistic_gaussian(x, mu, sigma)

    return ShadowingResult(ShadowFit(mu, sigma, n), histogram, ks)


def simulate_shadowed_rsrp(mean_dbm, sigma_db, n, seed=None):
    """
    Draw received power samples around a mean received power with
    log-normal shadowing, :math:`P_r = \\overline{P_r} + \\xi` where
    :math:`\\xi \\sim N(0, \\sigma^2)`.

    Args:
        mean_dbm (float): the mean received power in dBm.
        sigma_db (float): the shadowing standard deviation in dB.
        n (int): the number of samples.
        seed (int): the random seed.

    Returns:
        :class:`~numpy.ndarray`: the received power values in dBm.
    """

    if sigma_db < 0.:
        raise ValueError("Standard deviation must be non-negative")

    if n < 1:
        raise ValueError("Number of samples must be positive")

    rng = np.random.default_rng(seed)

    return mean_dbm + sigma_db * rng.standard_normal(int(n))


def read_rsrp_values(text):
    """
    Read received power values from either a measurement CSV file (with a
    ``lon,lat,val`` header) or a file with one value in dBm per line.

    Args:
        text (str, bytes): the file contents.

    Returns:
        :class:`~numpy.ndarray`: the values in dBm.
    """

    if isinstance(text, bytes):
        text = text.decode('utf-8')

    # (line number, text) of the non-blank lines
    lines = [(i + 1, line.strip()) for i, line in enumerate(text.lstrip('\ufeff').splitlines())]
    lines = [(lineno, line) for lineno, line in lines if len(line) > 0]

    if len(lines) == 0:
        return np.array([], dtype=float)

    if lines[0][1].replace(' ', '').lower() == ','.join(CSV_HEADER):
        return np.array([s.val for s in parse_measurement_csv(text)], dtype=float)

    low, high = RSRP_SANITY_RANGE

    values = []
    for lineno, line in lines:
        try:
            value = float(line)
        except ValueError:
            raise ValueError("Line {}: '{}' is not a number".format(lineno, line))

        if not low <= value <= high:
            raise ValueError("Line {}: RSRP value {} dBm is outside [{}, {}] "
                             "dBm".format(lineno, line, low, high))

        values.append(value)

    x, _ = to_array(values, name='RSRP values')

    return x
