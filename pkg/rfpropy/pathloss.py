"""
Large-scale pathloss models and link budgets. These are used to estimate the
distance between a receiver and a transmitter from RSRP measurements.

All functions accept either single values or array-like inputs; single
values give float outputs.
"""

import warnings

import numpy as np
from pandas import DataFrame

from .config import SPEED_OF_LIGHT, PATHLOSS_MODELS, UMI_NLOS_MIN_DIST
from .measurements import MeasurementSample
from .utils import to_array, from_array, format_value


class LogDistanceModel(object):
    """
    The log-distance pathloss model

    .. math::

       PL(d) = PL(d_0) + 10 \\alpha \\log_{10}\\left(\\frac{d}{d_0}\\right) \\textrm{ dB},

    valid for distances beyond the close-in reference distance :math:`d_0`.

    Args:
        alpha (float): the pathloss exponent (2 in free space).
        d0_m (float): the close-in reference distance in meters.
        pl_d0_db (float): the pathloss at the reference distance in dB.
            Defaults to 0.
    """

    def __init__(self, alpha, d0_m, pl_d0_db=0.):
        if not np.isfinite(alpha) or alpha <= 0.:
            raise ValueError("Pathloss exponent must be positive")

        if not np.isfinite(d0_m) or d0_m <= 0.:
            raise ValueError("Reference distance must be positive")

        if not np.isfinite(pl_d0_db) or pl_d0_db < 0.:
            raise ValueError("Reference pathloss must be non-negative")

        self._alpha = float(alpha)
        self._d0 = float(d0_m)
        self._pl_d0 = float(pl_d0_db)

    @classmethod
    def from_free_space(cls, alpha, d0_m, fc_hz):
        """
        Create a model with the reference pathloss set to the free space
        pathloss at the reference distance.

        Args:
            alpha (float): the pathloss exponent.
            d0_m (float): the reference distance in meters.
            fc_hz (float): the carrier frequency in Hz.
        """

        return cls(alpha, d0_m, free_space_pl(d0_m, fc_hz))

    @property
    def alpha(self):
        return self._alpha

    @property
    def d0_m(self):
        return self._d0

    @property
    def pl_d0_db(self):
        return self._pl_d0

    def pathloss(self, d_m):
        """
        Return the pathloss (dB) at distances ``d_m`` (m).
        """

        d, isscalar = to_array(d_m, name='distances')

        if np.any(d < self._d0):
            raise ValueError("Distances must be at least the reference "
                             "distance of {} m".format(self._d0))

        return from_array(self._pl_d0 + 10. * self._alpha * np.log10(d / self._d0), isscalar)

    def distance(self, pl_db):
        """
        Return the distances (m) at which the pathloss is ``pl_db`` (dB).
        """

        pl, isscalar = to_array(pl_db, name='pathloss values')

        if np.any(pl < self._pl_d0):
            raise ValueError("Pathloss values must be at least the reference "
                             "pathloss of {} dB".format(self._pl_d0))

        return from_array(self._d0 * 10**((pl - self._pl_d0) / (10. * self._alpha)), isscalar)

    def __repr__(self):
        return 'LogDistanceModel(alpha={}, d0_m={}, pl_d0_db={})'.format(self._alpha, self._d0,
                                                                        self._pl_d0)


class UmiNlosModel(object):
    """
    The urban micro-cell non-line-of-sight pathloss model

    .. math::

       PL(d) = 36.7 \\log_{10} d + 22.7 + 26 \\log_{10} f_c \\textrm{ dB},

    with :math:`d` in meters and :math:`f_c` in GHz.

    Args:
        fc_ghz (float): the carrier frequency in GHz.
    """

    coefficients = PATHLOSS_MODELS['UMI_NLOS']

    def __init__(self, fc_ghz):
        if not np.isfinite(fc_ghz) or fc_ghz <= 0.:
            raise ValueError("Carrier frequency must be positive")

        self._fc_ghz = float(fc_ghz)

    @property
    def fc_ghz(self):
        return self._fc_ghz

    @property
    def offset_db(self):
        """
        Return the distance-independent part of the pathloss (dB).
        """

        return (self.coefficients['intercept']
                + self.coefficients['freq'] * np.log10(self._fc_ghz))

    def pathloss(self, d_m):
        """
        Return the pathloss (dB) at distances ``d_m`` (m).
        """

        d, isscalar = to_array(d_m, name='distances')

        if np.any(d < UMI_NLOS_MIN_DIST):
            raise ValueError("Distances must be at least {} m".format(UMI_NLOS_MIN_DIST))

        if np.any(d < self.coefficients['min_dist']):
            warnings.warn("UMi-NLoS pathloss evaluated below {} m, where the "
                          "model is not validated".format(self.coefficients['min_dist']),
                          UserWarning)

        return from_array(self.coefficients['slope'] * np.log10(d) + self.offset_db, isscalar)

    def distance(self, pl_db):
        """
        Return the distances (m) at which the pathloss is ``pl_db`` (dB).
        """

        pl, isscalar = to_array(pl_db, name='pathloss values')

        return from_array(10**((pl - self.offset_db) / self.coefficients['slope']), isscalar)

    def __repr__(self):
        return 'UmiNlosModel(fc_ghz={})'.format(self._fc_ghz)


class LinkBudget(object):
    """
    A simple link budget holding the (effective) transmit power.

    Args:
        pt_dbm (float): the transmit power in dBm.
    """

    def __init__(self, pt_dbm):
        if not np.isfinite(pt_dbm):
            raise ValueError("Transmit power must be finite")

        self._pt_dbm = float(pt_dbm)

    @property
    def pt_dbm(self):
        return self._pt_dbm

    def __repr__(self):
        return 'LinkBudget(pt_dbm={})'.format(self._pt_dbm)


class AntennaGeometry(object):
    """
    The size of an antenna and its operating frequency.

    Args:
        largest_dimension_m (float): the largest physical linear dimension of
            the antenna in meters.
        fc_hz (float): the carrier frequency in Hz.
    """

    def __init__(self, largest_dimension_m, fc_hz):
        if not np.isfinite(largest_dimension_m) or largest_dimension_m <= 0.:
            raise ValueError("Antenna dimension must be positive")

        if not np.isfinite(fc_hz) or fc_hz <= 0.:
            raise ValueError("Carrier frequency must be positive")

        self._dimension = float(largest_dimension_m)
        self._fc_hz = float(fc_hz)

    @property
    def largest_dimension_m(self):
        return self._dimension

    @property
    def fc_hz(self):
        return self._fc_hz

    @property
    def wavelength(self):
        """
        Return the wavelength (m).
        """

        return SPEED_OF_LIGHT / self._fc_hz


def log_distance_pl(model, d_m):
    """
    Evaluate the log-distance pathloss model.

    Args:
        model (:class:`~rfpropy.pathloss.LogDistanceModel`): the model.
        d_m (float, array_like): distances in meters, not less than the
            reference distance.

    Returns:
        float: the pathloss in dB.
    """

    return model.pathloss(d_m)


def invert_log_distance(model, pl_db):
    """
    Invert the log-distance pathloss model, i.e.
    :math:`d = d_0 10^{(PL - PL(d_0))/(10\\alpha)}`.

    Args:
        model (:class:`~rfpropy.pathloss.LogDistanceModel`): the model.
        pl_db (float, array_like): pathloss values in dB.

    Returns:
        float: the distance in meters.
    """

    return model.distance(pl_db)


def log_distance_ratio(model, d_m):
    """
    The linear form of the log-distance law, :math:`(d/d_0)^\\alpha`, i.e.
    the pathloss relative to that at the reference distance.

    Args:
        model (:class:`~rfpropy.pathloss.LogDistanceModel`): the model.
        d_m (float, array_like): distances in meters.

    Returns:
        float: the linear pathloss ratio.
    """

    d, isscalar = to_array(d_m, name='distances')

    if np.any(d < model.d0_m):
        raise ValueError("Distances must be at least the reference "
                         "distance of {} m".format(model.d0_m))

    return from_array((d / model.d0_m)**model.alpha, isscalar)


def free_space_pl(d_m, fc_hz):
    """
    The free space pathloss :math:`20 \\log_{10}(4 \\pi d f_c / c)` in dB.

    Args:
        d_m (float, array_like): distances in meters.
        fc_hz (float): the carrier frequency in Hz.

    Returns:
        float: the pathloss in dB.
    """

    d, isscalar = to_array(d_m, name='distances')

    if np.any(d <= 0.) or fc_hz <= 0.:
        raise ValueError("Distance and frequency must be positive")

    return from_array(20. * np.log10(4. * np.pi * d * fc_hz / SPEED_OF_LIGHT), isscalar)


def fraunhofer_distance(geometry):
    """
    The far-field (Fraunhofer) distance :math:`d_f = 2D^2/\\lambda`.

    Args:
        geometry (:class:`~rfpropy.pathloss.AntennaGeometry`): the antenna.

    Returns:
        float: the Fraunhofer distance in meters.
    """

    return 2. * geometry.largest_dimension_m**2 / geometry.wavelength


def check_reference_distance(model, geometry):
    """
    Check that the reference distance of a log-distance model lies in the
    far field of an antenna, giving a warning if it does not.

    Args:
        model (:class:`~rfpropy.pathloss.LogDistanceModel`): the model.
        geometry (:class:`~rfpropy.pathloss.AntennaGeometry`): the antenna.

    Returns:
        bool: True if the reference distance is not less than the
        Fraunhofer distance.
    """

    dfar = fraunhofer_distance(geometry)

    if model.d0_m < dfar:
        warnings.warn("Reference distance {} m is inside the Fraunhofer "
                      "distance of {:.3f} m".format(model.d0_m, dfar), UserWarning)
        return False

    return True


def received_power(lb, pl_db):
    """
    The mean received power :math:`P_r = P_t - PL` in dBm.

    Args:
        lb (:class:`~rfpropy.pathloss.LinkBudget`): the link budget.
        pl_db (float, array_like): pathloss values in dB.

    Returns:
        float: the received power in dBm.
    """

    pl, isscalar = to_array(pl_db, name='pathloss values')

    return from_array(lb.pt_dbm - pl, isscalar)


def pathloss_from_rsrp(lb, rsrp_dbm):
    """
    The pathloss :math:`PL = P_t - \\textrm{RSRP}` in dB.

    Args:
        lb (:class:`~rfpropy.pathloss.LinkBudget`): the link budget.
        rsrp_dbm (float, array_like): RSRP values in dBm.

    Returns:
        float: the pathloss in dB.
    """

    rsrp, isscalar = to_array(rsrp_dbm, name='RSRP values')

    return from_array(lb.pt_dbm - rsrp, isscalar)


def mean_received_power(lb, model, d_m):
    """
    The mean received power at distance ``d_m`` for a given pathloss model.

    Args:
        lb (:class:`~rfpropy.pathloss.LinkBudget`): the link budget.
        model (:class:`~rfpropy.pathloss.LogDistanceModel`,
            :class:`~rfpropy.pathloss.UmiNlosModel`): the pathloss model.
        d_m (float, array_like): distances in meters.

    Returns:
        float: the received power in dBm.
    """

    return received_power(lb, model.pathloss(d_m))


def umi_nlos_pl(model, d_m):
    """
    Evaluate the UMi-NLoS pathloss model.

    Args:
        model (:class:`~rfpropy.pathloss.UmiNlosModel`): the model.
        d_m (float, array_like): distances in meters (at least 1 m).

    Returns:
        float: the pathloss in dB.
    """

    return model.pathloss(d_m)


def invert_umi_nlos(model, pl_db):
    """
    Estimate the distance from a pathloss value with the UMi-NLoS model,

    .. math::

       \\hat{d} = 10^{(PL - 22.7 - 26 \\log_{10} f_c)/36.7}.

    Args:
        model (:class:`~rfpropy.pathloss.UmiNlosModel`): the model.
        pl_db (float, array_like): pathloss values in dB.

    Returns:
        float: the distance in meters.
    """

    return model.distance(pl_db)


class DistanceEstimate(object):
    """
    The estimated transmitter distance for a single RSRP sample.

    Args:
        sample (:class:`~rfpropy.measurements.MeasurementSample`): the sample.
        pl_db (float): the pathloss in dB.
        d_hat_m (float): the estimated distance in meters.
    """

    __slots__ = ('_sample', '_pl_db', '_d_hat_m')

    def __init__(self, sample, pl_db, d_hat_m):
        self._sample = sample
        self._pl_db = pl_db
        self._d_hat_m = d_hat_m

    @property
    def sample(self):
        return self._sample

    @property
    def pl_db(self):
        return self._pl_db

    @property
    def d_hat_m(self):
        return self._d_hat_m

    def __repr__(self):
        return 'DistanceEstimate(rsrp={}, pl_db={}, d_hat_m={})'.format(
            self._sample.val_text, self._pl_db, self._d_hat_m)


def estimate_distances(samples, lb, model):
    """
    Estimate the distance to the transmitter for each RSRP sample by
    converting the RSRP to a pathloss and inverting the pathloss model.

    Args:
        samples (list): a list of RSRP
            :class:`~rfpropy.measurements.MeasurementSample` objects, or a
            :class:`~rfpropy.measurements.Measurements` object.
        lb (:class:`~rfpropy.pathloss.LinkBudget`): the link budget.
        model (:class:`~rfpropy.pathloss.UmiNlosModel`,
            :class:`~rfpropy.pathloss.LogDistanceModel`): the pathloss model.

    Returns:
        list: a list of :class:`~rfpropy.pathloss.DistanceEstimate` objects
        in the order of the input samples.

    Example:
        >>> from rfpropy import parse_measurement_csv
        >>> samples = parse_measurement_csv('lon,lat,val\\n80.2254647,13.0808002,-87\\n')
        >>> est = estimate_distances(samples, LinkBudget(41), UmiNlosModel(2.32))
        >>> round(est[0].d_hat_m)
        408
    """

    samples = list(samples)

    for sample in samples:
        if not isinstance(sample, MeasurementSample) or sample.kind != 'rsrp':
            raise TypeError("Distances can only be estimated from RSRP samples")

    if len(samples) == 0:
        return []

    pl = pathloss_from_rsrp(lb, [s.val for s in samples])
    dhat = model.distance(pl)

    return [DistanceEstimate(s, float(p), float(d)) for s, p, d in zip(samples, pl, dhat)]


def distance_report(estimates):
    """
    Create a table of distance estimates with columns ``lat``, ``lon``,
    ``rsrp_dbm``, ``pl_db`` and ``d_hat_m``. The distances are rounded to the
    nearest meter and the coordinates are given as stored.

    Args:
        estimates (list): a list of :class:`~rfpropy.pathloss.DistanceEstimate`
            objects.

    Returns:
        :class:`pandas.DataFrame`: the table.
    """

    columns = ['lat', 'lon', 'rsrp_dbm', 'pl_db', 'd_hat_m']

    return DataFrame({'lat': [e.sample.point.lat_text for e in estimates],
                      'lon': [e.sample.point.lon_text for e in estimates],
                      'rsrp_dbm': [e.sample.val_text for e in estimates],
                      'pl_db': [format_value(e.pl_db) for e in estimates],
                      'd_hat_m': [int(np.rint(e.d_hat_m)) for e in estimates]},
                     columns=columns)


def write_distance_report(estimates, extra=None):
    """
    Write distance estimates as CSV text (see
    :func:`~rfpropy.pathloss.distance_report`).

    Args:
        estimates (list): a list of :class:`~rfpropy.pathloss.DistanceEstimate`
            objects.
        extra (:class:`pandas.DataFrame`): optional additional columns
            appended to the right of the table (one row per estimate).

    Returns:
        str: the CSV text with ``\\n`` line endings.
    """

    table = distance_report(estimates)

    if extra is not None:
        for col in extra.columns:
            table[col] = list(extra[col])

    return table.to_csv(index=False, lineterminator='\n')
