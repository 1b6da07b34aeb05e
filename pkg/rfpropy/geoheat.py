"""
Geodesic distances and heatmap exports of geo-tagged measurements. Distances
are great-circle distances on a spherical Earth, and heatmaps are written as
point layers in either the measurement CSV format or GeoJSON.
"""

import json
import warnings

import numpy as np
from pandas import DataFrame

from .config import EARTH_RADIUS, VALUE_KINDS, HEATMAP_FORMATS, MIN_VERIFY_DISTANCE
from .measurements import GeoPoint, MeasurementSample, Measurements, write_measurement_csv
from .pathloss import DistanceEstimate
from .utils import atomic_write, figure_bytes


def haversine_m(a, b):
    """
    The great-circle distance between two positions using the haversine
    formula

    .. math::

       d = 2R \\arcsin{\\sqrt{\\sin^2\\left(\\frac{\\Delta\\phi}{2}\\right) +
       \\cos\\phi_a \\cos\\phi_b \\sin^2\\left(\\frac{\\Delta\\lambda}{2}\\right)}},

    with the Earth radius :math:`R = 6371` km.

    Args:
        a (:class:`~rfpropy.measurements.GeoPoint`): the first position.
        b (:class:`~rfpropy.measurements.GeoPoint`): the second position.

    Returns:
        float: the distance in meters.

    Example:
        >>> round(haversine_m(GeoPoint(0, 0), GeoPoint(0, 1)))
        111195
    """

    if not isinstance(a, GeoPoint) or not isinstance(b, GeoPoint):
        raise TypeError("Positions must be GeoPoint objects")

    lata, lona = np.deg2rad(a.lat), np.deg2rad(a.lon)
    latb, lonb = np.deg2rad(b.lat), np.deg2rad(b.lon)

    hav = (np.sin(0.5 * (latb - lata))**2 +
           np.cos(lata) * np.cos(latb) * np.sin(0.5 * (lonb - lona))**2)

    return float(2. * EARTH_RADIUS * np.arcsin(np.sqrt(np.clip(hav, 0., 1.))))


def verify_distances(rows, tower):
    """
    Compare estimated distances with the great-circle distances between the
    measurement positions and a known transmitter position. Rows closer than
    1 m to the transmitter have an infinite ratio and are flagged with a
    warning rather than raising an error.

    Args:
        rows (list): a list of :class:`~rfpropy.pathloss.DistanceEstimate`
            objects or of (:class:`~rfpropy.measurements.GeoPoint`, distance)
            pairs.
        tower (:class:`~rfpropy.measurements.GeoPoint`): the transmitter
            position.

    Returns:
        :class:`pandas.DataFrame`: a table, in the order of the rows, with
        columns ``d_hat_m``, ``d_geo_m``, ``ratio`` (``d_hat_m/d_geo_m``) and
        ``flagged``.
    """

    rows = list(rows)

    if len(rows) == 0:
        raise ValueError("No rows to verify")

    dhat = []
    dgeo = []
    for row in rows:
        if isinstance(row, DistanceEstimate):
            point, dist = row.sample.point, row.d_hat_m
        else:
            point, dist = row

        dhat.append(float(dist))
        dgeo.append(haversine_m(point, tower))

    dhat = np.array(dhat)
    dgeo = np.array(dgeo)

    if not np.all(np.isfinite(dhat)) or np.any(dhat < 0.):
        raise ValueError("Estimated distances must be non-negative")

    flagged = dgeo < MIN_VERIFY_DISTANCE
    ratio = np.full(len(dhat), np.inf)
    ratio[~flagged] = dhat[~flagged] / dgeo[~flagged]

    if np.any(flagged):
        warnings.warn("{} row(s) are within {} m of the transmitter, so their distance "
                      "ratio is set to infinity".format(np.sum(flagged), MIN_VERIFY_DISTANCE),
                      UserWarning)

    return DataFrame({'d_hat_m': dhat, 'd_geo_m': dgeo, 'ratio': ratio, 'flagged': flagged},
                     columns=['d_hat_m', 'd_geo_m', 'ratio', 'flagged'])


class HeatmapLayer(object):
    """
    A non-empty layer of geo-tagged measurement values of a single kind.

    Args:
        points (list): a list of
            :class:`~rfpropy.measurements.MeasurementSample` objects.
        value_kind (str): the kind of value, which must match the kind of
            all the samples.
    """

    def __init__(self, points, value_kind):
        self._points = Measurements(points, kind=value_kind)

        if len(self._points) == 0:
            raise ValueError("A heatmap layer needs at least one point")

    @classmethod
    def from_samples(cls, samples):
        """
        Create a layer from a :class:`~rfpropy.measurements.Measurements`
        object or a list of samples, taking the value kind from them.
        """

        if isinstance(samples, Measurements):
            return cls(samples.samples, samples.kind)

        samples = list(samples)
        if len(samples) == 0:
            raise ValueError("A heatmap layer needs at least one point")

        if not isinstance(samples[0], MeasurementSample):
            raise TypeError("All samples must be MeasurementSample objects")

        return cls(samples, samples[0].kind)

    @property
    def points(self):
        return self._points.samples

    @property
    def value_kind(self):
        return self._points.kind

    @property
    def bounding_box(self):
        """
        Returns:
            dict: the smallest and largest latitudes and longitudes of the
            points, with keys ``min_lat``, ``max_lat``, ``min_lon`` and
            ``max_lon``.
        """

        lats = [p.lat for p in self._points]
        lons = [p.lon for p in self._points]

        return {'min_lat': min(lats), 'max_lat': max(lats),
                'min_lon': min(lons), 'max_lon': max(lons)}

    def __len__(self):
        return len(self._points)

    def __iter__(self):
        return iter(self._points)

    def plot(self, output=None, cmap='viridis'):
        """
        Plot the points coloured by their values.

        Args:
            output (str): path to save the figure to.
            cmap (str): the Matplotlib colour map.

        Returns:
            :class:`matplotlib.figure.Figure`: the figure object
        """

        try:
            from matplotlib import pyplot as pl
        except ImportError:
            raise ImportError('Cannot produce heatmap as Matplotlib is not available')

        frame = self._points.dataframe

        fig, ax = pl.subplots(figsize=(6, 6))
        sc = ax.scatter(frame['lon'], frame['lat'], c=frame['val'], cmap=cmap, s=30,
                        edgecolors='k', linewidths=0.3)
        cbar = fig.colorbar(sc, ax=ax)
        cbar.set_label('{} ({})'.format(VALUE_KINDS[self.value_kind]['desc'],
                                        VALUE_KINDS[self.value_kind]['units']))
        ax.set_xlabel('Longitude (deg)')
        ax.set_ylabel('Latitude (deg)')
        ax.set_aspect('equal', adjustable='datalim')
        fig.tight_layout()

        if output is not None:
            atomic_write(output, figure_bytes(fig, output))

        return fig

    def __repr__(self):
        return 'HeatmapLayer(n={}, value_kind={})'.format(len(self), self.value_kind)


def export_heatmap(layer, format='geojson'):
    """
    Export a heatmap layer. The ``csv`` format is the ``lon,lat,val``
    measurement format. The ``geojson`` format is a FeatureCollection of
    Point features with ``[lon, lat]`` coordinates, a ``val`` and
    ``value_kind`` property for each feature and a ``bbox`` member for the
    collection.

    Args:
        layer (:class:`~rfpropy.geoheat.HeatmapLayer`): the layer.
        format (str): ``csv`` or ``geojson``.

    Returns:
        bytes: the UTF-8 encoded export.
    """

    if format not in HEATMAP_FORMATS:
        raise ValueError("Unknown heatmap format '{}', must be one of "
                         "{}".format(format, ', '.join(HEATMAP_FORMATS)))

    if not isinstance(layer, HeatmapLayer) or len(layer) == 0:
        raise ValueError("Cannot export an empty heatmap layer")

    if format == 'csv':
        return write_measurement_csv(layer.points).encode('utf-8')

    features = []
    for point in layer:
        features.append({'type': 'Feature',
                         'geometry': {'type': 'Point',
                                      'coordinates': [point.lon, point.lat]},
                         'properties': {'val': point.val,
                                        'value_kind': layer.value_kind}})

    bbox = layer.bounding_box
    collection = {'type': 'FeatureCollection',
                  'bbox': [bbox['min_lon'], bbox['min_lat'], bbox['max_lon'], bbox['max_lat']],
                  'features': features}

    return (json.dumps(collection, indent=1, separators=(',', ': ')) + '\n').encode('utf-8')
