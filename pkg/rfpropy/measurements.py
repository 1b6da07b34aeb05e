"""
The classes and functions defined here hold geo-tagged measurement samples
and read, write and quantize them. Measurement files are CSV files with the
three columns ``lon``, ``lat`` and ``val``, where the latitude and longitude
keep all of their decimal places.
"""

import io
from collections import namedtuple
from decimal import Decimal, InvalidOperation
from numbers import Integral

import numpy as np
from pandas import DataFrame, read_csv
from pandas.errors import EmptyDataError, ParserError
from astropy.table import Table

from .config import (CSV_HEADER, VALUE_KINDS, DEFAULT_KIND, RSRP_SANITY_RANGE,
                     RSRP_MIN_CODE, RSRP_MAX_CODE, RSRP_CODE_OFFSET, RSRP_REPORT)
from .utils import SchemaError, RowError, to_array, atomic_write


def _to_decimal(value, name):
    """
    Convert a value into a finite :class:`decimal.Decimal` without losing any
    decimal places. Floats are converted via their shortest representation.
    """

    if isinstance(value, Decimal):
        dec = value
    elif isinstance(value, str):
        try:
            dec = Decimal(value.strip())
        except InvalidOperation:
            raise ValueError("{} '{}' is not a number".format(name, value))
    elif isinstance(value, float):
        dec = Decimal(repr(value))
    elif isinstance(value, Integral) and not isinstance(value, bool):
        dec = Decimal(int(value))
    else:
        raise ValueError("{} must be a number or numeric string".format(name))

    if not dec.is_finite():
        raise ValueError("{} must be finite".format(name))

    return dec


def _check_kind(kind):
    if kind not in VALUE_KINDS:
        raise ValueError("Unknown value kind '{}', must be one of "
                         "{}".format(kind, ', '.join(VALUE_KINDS)))

    return kind


class GeoPoint(object):
    """
    A WGS-84 position in decimal degrees. The coordinates are stored exactly
    as given, so that ``str`` coordinates keep all their decimal places.

    Args:
        lat (str, float, :class:`decimal.Decimal`): the latitude in degrees,
            between -90 and 90.
        lon (str, float, :class:`decimal.Decimal`): the longitude in degrees,
            between -180 and 180.
    """

    __slots__ = ('_lat', '_lon')

    def __init__(self, lat, lon):
        lat = _to_decimal(lat, 'Latitude')
        lon = _to_decimal(lon, 'Longitude')

        if not -90 <= lat <= 90:
            raise ValueError("Latitude {} is outside [-90, 90]".format(lat))

        if not -180 <= lon <= 180:
            raise ValueError("Longitude {} is outside [-180, 180]".format(lon))

        self._lat = lat
        self._lon = lon

    @property
    def lat(self):
        """
        Return the latitude in degrees as a float.
        """

        return float(self._lat)

    @property
    def lon(self):
        """
        Return the longitude in degrees as a float.
        """

        return float(self._lon)

    @property
    def lat_text(self):
        """
        Return the latitude exactly as stored.
        """

        return str(self._lat)

    @property
    def lon_text(self):
        """
        Return the longitude exactly as stored.
        """

        return str(self._lon)

    def __eq__(self, other):
        if not isinstance(other, GeoPoint):
            return False

        return (self.lat_text, self.lon_text) == (other.lat_text, other.lon_text)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.lat_text, self.lon_text))

    def __repr__(self):
        return 'GeoPoint(lat={}, lon={})'.format(self.lat_text, self.lon_text)


class MeasurementSample(object):
    """
    An object to hold a single geo-tagged measurement.

    Args:
        point (:class:`~rfpropy.measurements.GeoPoint`): the measurement
            position.
        val (str, float, :class:`decimal.Decimal`): the measured value, in
            dBm for RSRP or Mbit/s for speeds.
        kind (str): the kind of value, one of ``rsrp``, ``downlink_speed``
            or ``uplink_speed``. Defaults to ``rsrp``.
    """

    __slots__ = ('_point', '_val', '_kind')

    def __init__(self, point, val, kind=DEFAULT_KIND):
        if not isinstance(point, GeoPoint):
            raise TypeError("point must be a GeoPoint")

        self._kind = _check_kind(kind)
        self._val = _to_decimal(val, 'Value')
        self._point = point

        if kind == 'rsrp':
            low, high = RSRP_SANITY_RANGE
            if not low <= self._val <= high:
                raise ValueError("RSRP value {} dBm is outside [{}, {}] "
                                 "dBm".format(self._val, low, high))

    @property
    def point(self):
        return self._point

    @property
    def val(self):
        """
        Return the measured value as a float.
        """

        return float(self._val)

    @property
    def val_text(self):
        """
        Return the measured value exactly as stored.
        """

        return str(self._val)

    @property
    def kind(self):
        return self._kind

    @property
    def lat(self):
        return self._point.lat

    @property
    def lon(self):
        return self._point.lon

    def __eq__(self, other):
        if not isinstance(other, MeasurementSample):
            return False

        return (self.point == other.point and self.val_text == other.val_text
                and self.kind == other.kind)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.point, self.val_text, self.kind))

    def __repr__(self):
        return 'MeasurementSample(lon={}, lat={}, val={}, kind={})'.format(
            self._point.lon_text, self._point.lat_text, self.val_text, self.kind)


class Measurements(object):
    """
    Class to contain multiple :class:`~rfpropy.measurements.MeasurementSample`
    objects of a single kind, in their original order.

    Args:
        samples (list): a list of
            :class:`~rfpropy.measurements.MeasurementSample` objects.
        kind (str): the kind of value held. If not given, the kind of the
            first sample (or ``rsrp`` if there are none) is used.
    """

    def __init__(self, samples=None, kind=None):
        self._samples = list(samples) if samples is not None else []

        if kind is None:
            kind = self._samples[0].kind if len(self._samples) > 0 else DEFAULT_KIND

        self._kind = _check_kind(kind)

        for sample in self._samples:
            if not isinstance(sample, MeasurementSample):
                raise TypeError("All samples must be MeasurementSample objects")
            if sample.kind != self._kind:
                raise TypeError("Sample kind '{}' does not match '{}'".format(sample.kind,
                                                                            self._kind))

    def __iter__(self):
        for sample in self._samples:
            yield sample

    def __getitem__(self, idx):
        return self._samples[idx]

    def __len__(self):
        return len(self._samples)

    def __eq__(self, other):
        if not isinstance(other, Measurements):
            return False

        return self.kind == other.kind and self._samples == other._samples

    def __ne__(self, other):
        return not self == other

    def __str__(self):
        return write_measurement_csv(self._samples)

    @property
    def kind(self):
        return self._kind

    @property
    def samples(self):
        """
        Return a copy of the list of samples.
        """

        return list(self._samples)

    @property
    def values(self):
        """
        Returns:
            :class:`~numpy.ndarray`: the measured values.
        """

        return np.array([s.val for s in self._samples], dtype=float)

    @property
    def dataframe(self):
        """
        Returns:
            :class:`pandas.DataFrame`: the samples with columns ``lon``,
            ``lat`` and ``val``.
        """

        return DataFrame({'lon': [s.lon for s in self._samples],
                          'lat': [s.lat for s in self._samples],
                          'val': self.values},
                         columns=list(CSV_HEADER))

    @property
    def table(self):
        """
        Returns:
            :class:`astropy.table.Table`: the samples with units attached to
            each column.
        """

        table = Table.from_pandas(self.dataframe)
        table.columns['lon'].unit = 'deg'
        table.columns['lat'].unit = 'deg'
        table.columns['val'].unit = VALUE_KINDS[self.kind]['units']
        table.meta['kind'] = self.kind

        return table


def parse_measurement_csv(text, kind=DEFAULT_KIND):
    """
    Parse measurement CSV data with the header ``lon,lat,val``. The header
    names are case insensitive, but the column order is fixed and extra
    columns are not allowed. Row order and all decimal places of the
    coordinates are preserved.

    Args:
        text (str, bytes, file-like): the CSV data (UTF-8 if bytes).
        kind (str): the kind of value in the ``val`` column. Defaults to
            ``rsrp``.

    Returns:
        list: a list of :class:`~rfpropy.measurements.MeasurementSample`
        objects.

    Example:
        >>> samples = parse_measurement_csv('lon,lat,val\\n80.2260928,13.0801679,-109\\n')
        >>> samples[0].val
        -109.0
    """

    _check_kind(kind)

    if hasattr(text, 'read'):
        text = text.read()

    if isinstance(text, bytes):
        text = text.decode('utf-8')

    text = text.lstrip('\ufeff')

    # the header is the first non-blank line, rows are the non-blank lines after it
    lines = [line for line in text.splitlines() if len(line.strip()) > 0]
    headertext = lines[0] if len(lines) > 0 else ''

    if [h.strip().lower() for h in headertext.split(',')] != list(CSV_HEADER):
        raise SchemaError("Measurement file header '{}' does not match "
                          "'{}'".format(headertext, ','.join(CSV_HEADER)),
                          header=headertext)

    for row, line in enumerate(lines[1:], start=1):
        nfields = len(line.split(','))
        if nfields != len(CSV_HEADER):
            raise RowError("Row {} has {} fields, expected "
                           "'{}'".format(row, nfields, ','.join(CSV_HEADER)), row=row)

    try:
        rows = read_csv(io.StringIO(text), header=0, index_col=False, dtype=str,
                        na_filter=False, skip_blank_lines=True)
    except (EmptyDataError, ParserError) as e:
        raise SchemaError("Measurement file could not be read: {}".format(str(e)),
                          header=headertext)

    samples = []
    for i, fields in enumerate(rows.itertuples(index=False, name=None)):
        row = i + 1
        if not all(isinstance(f, str) and len(f.strip()) > 0 for f in fields):
            raise RowError("Row {} has missing fields".format(row), row=row)

        lonstr, latstr, valstr = [f.strip() for f in fields]

        for name, fieldstr in zip(CSV_HEADER, (lonstr, latstr, valstr)):
            try:
                Decimal(fieldstr)
            except InvalidOperation:
                raise RowError("Row {}: '{}' value '{}' is not "
                               "numeric".format(row, name, fieldstr), row=row)

        try:
            sample = MeasurementSample(GeoPoint(latstr, lonstr), valstr, kind=kind)
        except ValueError as e:
            raise ValueError("Row {}: {}".format(row, str(e)))

        samples.append(sample)

    return samples


def write_measurement_csv(samples):
    """
    Write samples as measurement CSV data with the header ``lon,lat,val``
    and ``\\n`` line endings. Values are written exactly as stored, so that
    :func:`~rfpropy.measurements.parse_measurement_csv` reproduces the
    samples.

    Args:
        samples (list): a list of
            :class:`~rfpropy.measurements.MeasurementSample` objects.

    Returns:
        str: the CSV text.
    """

    lines = [','.join(CSV_HEADER)]
    for sample in samples:
        lines.append(','.join([sample.point.lon_text, sample.point.lat_text,
                               sample.val_text]))

    return '\n'.join(lines) + '\n'


def read_measurement_csv(path, kind=DEFAULT_KIND):
    """
    Read a measurement CSV file.

    Args:
        path (str): the file path.
        kind (str): the kind of value in the ``val`` column.

    Returns:
        :class:`~rfpropy.measurements.Measurements`: the samples.
    """

    try:
        with open(path, 'rb') as fp:
            content = fp.read()
    except IOError as e:
        raise IOError("Could not read measurement file '{}': {}".format(path, str(e)))

    return Measurements(parse_measurement_csv(content, kind=kind), kind=kind)


def save_measurement_csv(samples, path):
    """
    Write samples to a measurement CSV file. The file is either written
    completely or not at all.

    Args:
        samples (list, :class:`~rfpropy.measurements.Measurements`): the
            samples.
        path (str): the file path.
    """

    atomic_write(path, write_measurement_csv(samples))


class RsrpInterval(namedtuple('RsrpInterval', ['low', 'high'])):
    """
    A half-open interval ``[low, high)`` of RSRP values in dBm. The lowest
    and highest report codes have unbounded intervals.
    """

    __slots__ = ()

    def __contains__(self, rsrp):
        return self.low <= rsrp < self.high


def quantize_rsrp(rsrp_dbm):
    """
    Map RSRP values to LTE measurement report codes. Code 0 is returned for
    RSRP < -140 dBm, code 97 for RSRP >= -44 dBm, and otherwise the code
    :math:`k` for which :math:`-141 + k \\le \\textrm{RSRP} < -140 + k`.

    Args:
        rsrp_dbm (float, array_like): RSRP values in dBm.

    Returns:
        int: the report code, or a :class:`~numpy.ndarray` of codes for
        array input.
    """

    arr, isscalar = to_array(rsrp_dbm, name='RSRP values')

    codes = np.clip(np.floor(arr) - RSRP_CODE_OFFSET, RSRP_MIN_CODE,
                    RSRP_MAX_CODE).astype(int)

    if isscalar:
        return int(codes[0])

    return codes


def dequantize_rsrp(code):
    """
    Return the interval of RSRP values covered by an LTE measurement report
    code.

    Args:
        code (int): the report code, between 0 and 97.

    Returns:
        :class:`~rfpropy.measurements.RsrpInterval`: the half-open interval
        in dBm.
    """

    if not isinstance(code, Integral) or isinstance(code, bool):
        raise ValueError("RSRP report code must be an integer")

    if code not in RSRP_REPORT:
        raise ValueError("RSRP report code {} is outside [{}, {}]".format(code, RSRP_MIN_CODE,
                                                                         RSRP_MAX_CODE))

    return RsrpInterval(*RSRP_REPORT[int(code)])
