"""
Small scale fading: Doppler shifts, simulation of multipath complex
envelopes, reading IQ captures, fitting the Rayleigh envelope distribution
and finding the slot structure of bursty transmissions.

For :math:`N` multipath components the received complex envelope is

.. math::

   \\tilde{r}(t) = \\sum_{n=1}^{N} a_n e^{-j\\phi_n(t)} \\tilde{s}(t - \\tau_n),

with :math:`\\phi_n(t) = 2\\pi[(f_c + f_{D,n})\\tau_n - f_{D,n}t]`. For large
:math:`N` the in-phase and quadrature components are zero-mean Gaussian, so
the envelope :math:`|\\tilde{r}(t)|` is Rayleigh distributed.
"""

from numbers import Integral

import numpy as np
from scipy import stats
from pandas import DataFrame

from .config import (SPEED_OF_LIGHT, DEFAULT_MAX_DELAY, DEFAULT_THRESHOLD_FRACTION)
from .utils import (FormatError, DetectionError, to_array, from_array, atomic_write,
                    key_value_report, figure_bytes)


class IqStream(object):
    """
    A sequence of complex baseband samples with a sample rate. The samples
    are held in a read-only array.

    Args:
        samples (array_like): the complex samples.
        sample_rate_hz (float): the sample rate in Hz.
    """

    def __init__(self, samples, sample_rate_hz):
        if not np.isfinite(sample_rate_hz) or sample_rate_hz <= 0.:
            raise ValueError("Sample rate must be positive")

        samples = np.array(samples).flatten()
        if not np.iscomplexobj(samples):
            samples = samples.astype(complex)

        if not np.all(np.isfinite(samples)):
            raise ValueError("All IQ samples must be finite")

        samples.setflags(write=False)
        self._samples = samples
        self._rate = float(sample_rate_hz)

    @property
    def samples(self):
        return self._samples

    @property
    def sample_rate_hz(self):
        return self._rate

    @property
    def duration(self):
        """
        Return the stream duration in seconds.
        """

        return len(self._samples) / self._rate

    @property
    def times(self):
        """
        Return the sample times in seconds.
        """

        return np.arange(len(self._samples)) / self._rate

    def __len__(self):
        return len(self._samples)

    def __repr__(self):
        return 'IqStream(n={}, sample_rate_hz={})'.format(len(self), self._rate)


class MultipathConfig(object):
    """
    The configuration of a multipath channel simulation. Path amplitudes are
    equal, :math:`a_n = \\sqrt{\\Omega/N}`, and the angles of arrival and
    delays are drawn uniformly.

    Args:
        n_paths (int): the number of paths :math:`N`.
        velocity_mps (float): the receiver speed in m/s.
        fc_hz (float): the carrier frequency in Hz.
        omega (float): the total envelope power :math:`\\Omega = \\sum a_n^2`.
            Defaults to 1.
        max_delay_s (float): the largest path delay in seconds. Defaults to
            1 µs.
        seed (int): the random seed for the path angles and delays.
    """

    def __init__(self, n_paths, velocity_mps, fc_hz, omega=1., max_delay_s=DEFAULT_MAX_DELAY,
                 seed=None):
        if not isinstance(n_paths, Integral) or n_paths < 1:
            raise ValueError("Number of paths must be a positive integer")

        if not np.isfinite(velocity_mps) or velocity_mps < 0.:
            raise ValueError("Velocity must be non-negative")

        if not np.isfinite(fc_hz) or fc_hz <= 0.:
            raise ValueError("Carrier frequency must be positive")

        if not np.isfinite(omega) or omega <= 0.:
            raise ValueError("Envelope power must be positive")

        if not np.isfinite(max_delay_s) or max_delay_s < 0.:
            raise ValueError("Maximum delay must be non-negative")

        if seed is not None and not isinstance(seed, Integral):
            raise ValueError("Seed must be an integer")

        self.n_paths = int(n_paths)
        self.velocity_mps = float(velocity_mps)
        self.fc_hz = float(fc_hz)
        self.omega = float(omega)
        self.max_delay_s = float(max_delay_s)
        self.seed = seed

    @property
    def max_doppler(self):
        return max_doppler(self.velocity_mps, self.fc_hz)

    def __repr__(self):
        return ('MultipathConfig(n_paths={}, velocity_mps={}, fc_hz={}, omega={}, '
                'max_delay_s={}, seed={})'.format(self.n_paths, self.velocity_mps, self.fc_hz,
                                                  self.omega, self.max_delay_s, self.seed))


class RayleighFit(object):
    """
    A fitted Rayleigh envelope distribution. Both the canonical scale
    :math:`\\sigma_R` and the mean envelope power
    :math:`\\Omega = 2\\sigma_R^2` are available, with the density

    .. math::

       p(x) = \\frac{2x}{\\Omega} \\exp{\\left(-\\frac{x^2}{\\Omega}\\right)}.

    Args:
        sigma_scale (float): the Rayleigh scale parameter.
        n (int): the number of envelope samples.
        ks (float): the Kolmogorov-Smirnov statistic of the samples against
            the fitted distribution.
    """

    __slots__ = ('_sigma', '_n', '_ks')

    def __init__(self, sigma_scale, n, ks):
        if not sigma_scale > 0.:
            raise ValueError("Rayleigh scale must be positive")

        self._sigma = float(sigma_scale)
        self._n = int(n)
        self._ks = float(ks)

    @property
    def sigma_scale(self):
        return self._sigma

    @property
    def omega_power(self):
        return 2. * self._sigma**2

    @property
    def n(self):
        return self._n

    @property
    def ks(self):
        return self._ks

    @property
    def ks_critical(self):
        """
        Return the 99% critical value :math:`1.63/\\sqrt{n}` of the KS
        statistic.
        """

        return 1.63 / np.sqrt(self._n)

    def report(self):
        """
        Returns:
            str: a flat key-value text report of the fit.
        """

        return key_value_report([('n', self._n),
                                 ('sigma_scale', self._sigma),
                                 ('omega_power', self.omega_power),
                                 ('ks', self._ks),
                                 ('ks_critical_99', self.ks_critical)])

    def plot(self, env, n_bins=50, output=None):
        """
        Plot the measured envelope density against the fitted Rayleigh
        density.

        Args:
            env (array_like): the envelope samples.
            n_bins (int): the number of histogram bins.
            output (str): path to save the figure to.

        Returns:
            :class:`matplotlib.figure.Figure`: the figure object
        """

        try:
            from matplotlib import pyplot as pl
        except ImportError:
            raise ImportError('Cannot produce Rayleigh plot as Matplotlib is '
                              'not available')

        table = pdf_comparison(env, self, n_bins=n_bins)

        fig, ax = pl.subplots(figsize=(7, 4.5))
        ax.plot(table['x'], table['empirical_density'], 'o', ms=4, mfc='none',
                label='Measured')
        ax.plot(table['x'], table['model_density'], 'r', lw=1.5,
                label=r'Rayleigh, $\hat{{\Omega}}$ = {:.3g}'.format(self.omega_power))
        ax.set_xlabel('Envelope amplitude')
        ax.set_ylabel('Probability density')
        ax.legend(loc='best')
        fig.tight_layout()

        if output is not None:
            atomic_write(output, figure_bytes(fig, output))

        return fig

    def __repr__(self):
        return 'RayleighFit(sigma_scale={}, omega_power={}, n={}, ks={})'.format(
            self._sigma, self.omega_power, self._n, self._ks)


class SlotEstimate(object):
    """
    The slot timing found from the nulls of a bursty envelope.

    Args:
        slot_duration_s (float): the slot duration in seconds.
        null_positions (array_like): the (fractional) sample index of the
            middle of each null.
        sample_rate_hz (float): the sample rate in Hz.
    """

    def __init__(self, slot_duration_s, null_positions, sample_rate_hz):
        if not slot_duration_s > 0.:
            raise ValueError("Slot duration must be positive")

        positions = np.array(null_positions, dtype=float)
        if np.any(np.diff(positions) <= 0.):
            raise ValueError("Null positions must be strictly increasing")

        positions.setflags(write=False)
        self._duration = float(slot_duration_s)
        self._positions = positions
        self._rate = float(sample_rate_hz)

    @property
    def slot_duration_s(self):
        return self._duration

    @property
    def null_positions(self):
        return self._positions

    @property
    def null_times(self):
        """
        Return the times (s) of the middle of each null.
        """

        return self._positions / self._rate

    def report(self):
        """
        Returns:
            str: a flat key-value text report of the slot timing.
        """

        return key_value_report([('slot_duration_s', self._duration),
                                 ('slot_duration_us', self._duration * 1e6),
                                 ('n_nulls', len(self._positions)),
                                 ('sample_rate_hz', self._rate)])

    def __repr__(self):
        return 'SlotEstimate(slot_duration_s={}, n_nulls={})'.format(self._duration,
                                                                   len(self._positions))


def max_doppler(velocity_mps, fc_hz):
    """
    The maximum Doppler shift :math:`f_m = v f_c / c`.

    Args:
        velocity_mps (float, array_like): the receiver speed in m/s.
        fc_hz (float): the carrier frequency in Hz.

    Returns:
        float: the maximum Doppler shift in Hz.
    """

    v, isscalar = to_array(velocity_mps, name='velocities')

    if np.any(v < 0.):
        raise ValueError("Velocity must be non-negative")

    if not fc_hz > 0.:
        raise ValueError("Carrier frequency must be positive")

    return from_array(v * fc_hz / SPEED_OF_LIGHT, isscalar)


def doppler_shift(velocity_mps, fc_hz, theta_rad):
    """
    The Doppler shift :math:`f_D = (v/\\lambda) \\cos\\theta` of a wave
    arriving at angle :math:`\\theta` to the direction of motion. It is
    positive when moving towards the direction of arrival of the wave and
    negative when moving away from it.

    Args:
        velocity_mps (float): the receiver speed in m/s.
        fc_hz (float): the carrier frequency in Hz.
        theta_rad (float, array_like): the angles of arrival in radians.

    Returns:
        float: the Doppler shift in Hz.
    """

    theta, isscalar = to_array(theta_rad, name='angles')

    return from_array(max_doppler(velocity_mps, fc_hz) * np.cos(theta), isscalar)


def simulate_envelope(cfg, duration_s, sample_rate_hz):
    """
    Simulate the received complex envelope of a continuous wave probe
    (:math:`\\tilde{s}(t) = 1`) through a multipath channel. The output is
    fully determined by the configuration, including its seed.

    Args:
        cfg (:class:`~rfpropy.smallscale.MultipathConfig`): the channel.
        duration_s (float): the duration in seconds.
        sample_rate_hz (float): the sample rate in Hz.

    Returns:
        :class:`~rfpropy.smallscale.IqStream`: the complex envelope, with
        single precision samples as in a capture file.
    """

    if not isinstance(cfg, MultipathConfig):
        raise ValueError("A MultipathConfig is required")

    if not np.isfinite(sample_rate_hz) or sample_rate_hz <= 0.:
        raise ValueError("Sample rate must be positive")

    if not np.isfinite(duration_s) or duration_s <= 0.:
        raise ValueError("Duration must be positive")

    nsamples = int(np.rint(duration_s * sample_rate_hz))
    if nsamples < 1:
        raise ValueError("Duration and sample rate give no samples")

    rng = np.random.default_rng(cfg.seed)
    theta = rng.uniform(0., 2. * np.pi, cfg.n_paths)
    tau = rng.uniform(0., cfg.max_delay_s, cfg.n_paths)

    amp = np.sqrt(cfg.omega / cfg.n_paths)
    fd = doppler_shift(cfg.velocity_mps, cfg.fc_hz, theta)
    t = np.arange(nsamples) / sample_rate_hz

    # sum one path at a time to keep memory use down for long streams
    rtilde = np.zeros(nsamples, dtype=complex)
    for fdn, taun in zip(fd, tau):
        phi = 2. * np.pi * ((cfg.fc_hz + fdn) * taun - fdn * t)
        rtilde += amp * np.exp(-1j * phi)

    return IqStream(rtilde.astype(np.complex64), sample_rate_hz)


def envelope(stream):
    """
    The envelope :math:`|\\tilde{r}(t)| = \\sqrt{g_I^2(t) + g_Q^2(t)}`.

    Args:
        stream (:class:`~rfpropy.smallscale.IqStream`): the complex samples.

    Returns:
        :class:`~numpy.ndarray`: the envelope magnitudes.
    """

    return np.abs(stream.samples).astype(float)


def in_phase_quadrature(stream):
    """
    Return the in-phase and quadrature components of a stream.

    Args:
        stream (:class:`~rfpropy.smallscale.IqStream`): the complex samples.

    Returns:
        tuple: arrays of the in-phase and quadrature components.
    """

    return np.real(stream.samples).astype(float), np.imag(stream.samples).astype(float)


def _check_envelope(env, minsamples=1):
    env, _ = to_array(env, name='envelope values')

    if len(env) < minsamples:
        raise ValueError("At least {} envelope values are required".format(minsamples))

    if np.any(env < 0.):
        raise ValueError("Envelope values must be non-negative")

    return env


def estimate_rayleigh_scale(env):
    """
    Fit a Rayleigh distribution to envelope samples with the scale estimate

    .. math::

       \\hat{\\sigma} = \\sqrt{\\frac{1}{2N}\\sum_{i=1}^N r_i^2},

    and compute the Kolmogorov-Smirnov statistic against the fitted
    distribution.

    Args:
        env (array_like): at least two non-negative envelope values.

    Returns:
        :class:`~rfpropy.smallscale.RayleighFit`: the fit.
    """

    env = _check_envelope(env, minsamples=2)

    if not np.any(env > 0.):
        raise ValueError("Envelope values are all zero")

    sigma = np.sqrt(np.sum(env**2) / (2. * len(env)))
    ks = stats.kstest(env, 'rayleigh', args=(0., sigma)).statistic

    return RayleighFit(sigma, len(env), ks)


def rayleigh_pdf(x, omega_power):
    """
    The Rayleigh probability density function with mean power
    :math:`\\Omega`,

    .. math::

       p(x) = \\frac{2x}{\\Omega} \\exp{\\left(-\\frac{x^2}{\\Omega}\\right)}, x \\ge 0.

    Args:
        x (float, array_like): non-negative envelope values.
        omega_power (float): the mean envelope power.

    Returns:
        float: the density.
    """

    if not omega_power > 0.:
        raise ValueError("Envelope power must be positive")

    xarr, isscalar = to_array(x, name='envelope values')

    if np.any(xarr < 0.):
        raise ValueError("Envelope values must be non-negative")

    return from_array(stats.rayleigh.pdf(xarr, scale=np.sqrt(omega_power / 2.)), isscalar)


def rayleigh_cdf(x, omega_power):
    """
    The Rayleigh cumulative distribution function
    :math:`1 - \\exp(-x^2/\\Omega)`.

    Args:
        x (float, array_like): non-negative envelope values.
        omega_power (float): the mean envelope power.

    Returns:
        float: the probability.
    """

    if not omega_power > 0.:
        raise ValueError("Envelope power must be positive")

    xarr, isscalar = to_array(x, name='envelope values')

    if np.any(xarr < 0.):
        raise ValueError("Envelope values must be non-negative")

    return from_array(stats.rayleigh.cdf(xarr, scale=np.sqrt(omega_power / 2.)), isscalar)


def parse_iq_dat(data, sample_rate_hz):
    """
    Decode a raw IQ capture of interleaved little-endian 32-bit float pairs
    (I, Q). The files have no header, so the sample rate must be given.

    Args:
        data (bytes): the file contents.
        sample_rate_hz (float): the sample rate in Hz.

    Returns:
        :class:`~rfpropy.smallscale.IqStream`: the samples.
    """

    data = bytes(data)
    remainder = len(data) % 8

    if remainder != 0:
        offset = len(data) - remainder
        raise FormatError("IQ capture is truncated: {} trailing bytes at byte offset "
                          "{}".format(remainder, offset), offset=offset)

    floats = np.frombuffer(data, dtype='<f4')
    bad = np.flatnonzero(~np.isfinite(floats))
    if len(bad) > 0:
        raise FormatError("Non-finite value in IQ sample {} at byte offset "
                          "{}".format(bad[0] // 2, bad[0] * 4), offset=int(bad[0] * 4),
                          index=int(bad[0] // 2))

    samples = np.frombuffer(data, dtype='<c8').astype(np.complex64)

    return IqStream(samples, sample_rate_hz)


def write_iq_dat(stream):
    """
    Encode a stream as interleaved little-endian 32-bit float pairs (I, Q).

    Args:
        stream (:class:`~rfpropy.smallscale.IqStream`): the samples.

    Returns:
        bytes: the encoded capture.
    """

    return np.asarray(stream.samples).astype('<c8').tobytes()


def read_iq_dat(path, sample_rate_hz):
    """
    Read a raw IQ capture file (see :func:`~rfpropy.smallscale.parse_iq_dat`).

    Args:
        path (str): the file path.
        sample_rate_hz (float): the sample rate in Hz.

    Returns:
        :class:`~rfpropy.smallscale.IqStream`: the samples.
    """

    try:
        with open(path, 'rb') as fp:
            data = fp.read()
    except IOError as e:
        raise IOError("Could not read IQ capture '{}': {}".format(path, str(e)))

    return parse_iq_dat(data, sample_rate_hz)


def save_iq_dat(stream, path):
    """
    Write a stream to a raw IQ capture file.

    Args:
        stream (:class:`~rfpropy.smallscale.IqStream`): the samples.
        path (str): the file path.
    """

    atomic_write(path, write_iq_dat(stream))


def detect_slots(env, sample_rate_hz, threshold_fraction=DEFAULT_THRESHOLD_FRACTION,
                 expected_slot_s=None):
    """
    Find the slot duration of a bursty transmission from the nulls between
    bursts. Nulls are the runs of samples below ``threshold_fraction``
    times the median envelope. The position of a null is the middle of its
    run, and the slot duration is the median spacing of consecutive nulls.
    Runs touching either end of the envelope are ignored, as they may be
    cut short.

    Args:
        env (array_like): the envelope values.
        sample_rate_hz (float): the sample rate in Hz.
        threshold_fraction (float): the null threshold as a fraction of the
            median envelope, between 0 and 1. Defaults to 0.1.
        expected_slot_s (float): if given, check that the envelope covers at
            least two slots of this duration.

    Returns:
        :class:`~rfpropy.smallscale.SlotEstimate`: the slot timing.
    """

    env = _check_envelope(env)

    if not 0. < threshold_fraction < 1.:
        raise ValueError("Threshold fraction must be between 0 and 1")

    if not np.isfinite(sample_rate_hz) or sample_rate_hz <= 0.:
        raise ValueError("Sample rate must be positive")

    if expected_slot_s is not None and len(env) < 2. * expected_slot_s * sample_rate_hz:
        raise ValueError("Envelope of {} samples is shorter than two slots of {} "
                         "s".format(len(env), expected_slot_s))

    threshold = threshold_fraction * np.median(env)
    below = np.concatenate(([False], env < threshold, [False])).astype(int)
    edges = np.diff(below)
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)  # one past the end of each run

    interior = (starts > 0) & (stops < len(env))
    starts = starts[interior]
    stops = stops[interior]

    if len(starts) < 2:
        raise DetectionError("Found {} null regions, but at least 2 are needed to "
                             "estimate a slot duration".format(len(starts)))

    positions = 0.5 * (starts + stops - 1)
    duration = np.median(np.diff(positions)) / sample_rate_hz

    return SlotEstimate(duration, positions, sample_rate_hz)


def pdf_comparison(env, fit, n_bins=50):
    """
    Compare the measured envelope density (a normalised histogram) with the
    fitted Rayleigh density at the bin centres.

    Args:
        env (array_like): the envelope values.
        fit (:class:`~rfpropy.smallscale.RayleighFit`): the fitted
            distribution.
        n_bins (int): the number of histogram bins.

    Returns:
        :class:`pandas.DataFrame`: a table with columns ``x``,
        ``empirical_density`` and ``model_density``.
    """

    env = _check_envelope(env)

    density, edges = np.histogram(env, bins=n_bins, density=True)
    centers = 0.5 * (edges[1:] + edges[:-1])

    return DataFrame({'x': centers,
                      'empirical_density': density,
                      'model_density': rayleigh_pdf(centers, fit.omega_power)},
                     columns=['x', 'empirical_density', 'model_density'])


def envelope_series(stream):
    """
    Returns:
        :class:`pandas.DataFrame`: the envelope of a stream against time,
        with columns ``t_s`` and ``magnitude``.
    """

    return DataFrame({'t_s': stream.times, 'magnitude': envelope(stream)},
                     columns=['t_s', 'magnitude'])


def envelope_autocorrelation(stream, max_lag):
    """
    The normalised autocorrelation
    :math:`R(k) = \\langle \\tilde{r}(t)^* \\tilde{r}(t + k) \\rangle / \\langle |\\tilde{r}|^2 \\rangle`
    of the complex envelope for lags of 0 to ``max_lag`` samples. For the
    equal-power uniform-angle channel this follows :math:`J_0(2\\pi f_m \\tau)`.

    Args:
        stream (:class:`~rfpropy.smallscale.IqStream`): the complex samples.
        max_lag (int): the largest lag in samples.

    Returns:
        :class:`~numpy.ndarray`: the complex autocorrelation values.
    """

    r = np.asarray(stream.samples, dtype=complex)

    if not 0 <= max_lag < len(r):
        raise ValueError("Maximum lag must be less than the stream length")

    power = np.mean(np.abs(r)**2)
    if power == 0.:
        raise ValueError("Stream has zero power")

    acf = np.empty(max_lag + 1, dtype=complex)
    for k in range(max_lag + 1):
        acf[k] = np.mean(np.conj(r[:len(r) - k]) * r[k:])

    return acf / power


def plot_envelope(stream, slots=None, output=None):
    """
    Plot the envelope amplitude of a stream against time, with optional
    markers at slot nulls.

    Args:
        stream (:class:`~rfpropy.smallscale.IqStream`): the complex samples.
        slots (:class:`~rfpropy.smallscale.SlotEstimate`): slot timing to
            mark on the plot.
        output (str): path to save the figure to.

    Returns:
        :class:`matplotlib.figure.Figure`: the figure object
    """

    try:
        from matplotlib import pyplot as pl
    except ImportError:
        raise ImportError('Cannot produce envelope plot as Matplotlib is '
                          'not available')

    fig, ax = pl.subplots(figsize=(8, 3.5))
    ax.plot(stream.times * 1e3, envelope(stream), 'b', lw=0.7)

    if slots is not None:
        for tnull in slots.null_times:
            ax.axvline(tnull * 1e3, color='r', ls='--', lw=0.8)
        ax.set_title('Slot duration {:.1f} µs'.format(slots.slot_duration_s * 1e6))

    ax.set_xlabel('Time (ms)')
    ax.set_ylabel('Amplitude')
    fig.tight_layout()

    if output is not None:
        atomic_write(output, figure_bytes(fig, output))

    return fig
