"""
A selection of useful functions and error types used by the module.
"""

import io
import os
import tempfile
from numbers import Number

import numpy as np


class SchemaError(ValueError):
    """
    Raised when a measurement file does not have the expected header.

    Args:
        message (str): the error message.
        header (str): the offending header text.
    """

    def __init__(self, message, header=None):
        super(SchemaError, self).__init__(message)
        self.header = header


class RowError(ValueError):
    """
    Raised when a data row of a measurement file cannot be converted.

    Args:
        message (str): the error message.
        row (int): the (1-based) number of the offending data row.
    """

    def __init__(self, message, row=None):
        super(RowError, self).__init__(message)
        self.row = row


class FormatError(ValueError):
    """
    Raised when a binary IQ capture is malformed.

    Args:
        message (str): the error message.
        offset (int): the byte offset at which the problem was found.
        index (int): the sample index at which the problem was found, if any.
    """

    def __init__(self, message, offset=None, index=None):
        super(FormatError, self).__init__(message)
        self.offset = offset
        self.index = index


class DetectionError(RuntimeError):
    """
    Raised when no slot structure can be found in an envelope.
    """


def to_array(values, name='values'):
    """
    Convert a scalar or array-like input into a flat float array, checking
    that all values are finite.

    Args:
        values (float, array_like): the input values.
        name (str): the name of the input used in error messages.

    Returns:
        tuple: a :class:`numpy.ndarray` of the values and a bool that is True
        if the input was a scalar.
    """

    isscalar = isinstance(values, Number) or np.ndim(values) == 0

    try:
        arr = np.array(values, dtype=float).flatten()
    except (TypeError, ValueError) as e:
        raise ValueError("Could not convert {} to an array: "
                         "{}".format(name, str(e)))

    if not np.all(np.isfinite(arr)):
        raise ValueError("All {} must be finite".format(name))

    return arr, isscalar


def from_array(arr, isscalar):
    """
    Return the first entry of an array as a float if the original input was
    a scalar, otherwise return the array.
    """

    if isscalar:
        return float(arr[0])

    return arr


def atomic_write(path, data):
    """
    Write data to a file so that the file is either complete or absent. The
    data is written to a temporary file in the destination directory, which
    is then renamed over the destination.

    Args:
        path (str): the destination file path.
        data (str, bytes): the file contents. Strings are encoded as UTF-8.
    """

    if isinstance(data, str):
        data = data.encode('utf-8')

    dirname = os.path.dirname(os.path.abspath(path))

    try:
        fd, tmppath = tempfile.mkstemp(dir=dirname, prefix='.rfpropy-')
    except OSError as e:
        raise IOError("Could not create output file in '{}': {}".format(dirname, str(e)))

    try:
        with os.fdopen(fd, 'wb') as fp:
            fp.write(data)
        os.replace(tmppath, path)
    except OSError as e:
        if os.path.exists(tmppath):
            os.remove(tmppath)
        raise IOError("Could not write output file '{}': {}".format(path, str(e)))


def format_value(value, sigfigs=10):
    """
    Format a number compactly for text reports, e.g. 142.0 becomes '142'.

    Args:
        value (float): the value to format.
        sigfigs (int): the number of significant figures.

    Returns:
        str: the formatted value.
    """

    return '{:.{}g}'.format(value, sigfigs)


def key_value_report(items):
    """
    Create a flat key-value text report with one ``key = value`` pair per
    line.

    Args:
        items (list): a list of (key, value) pairs. Float values are
            formatted with :func:`~rfpropy.utils.format_value`.

    Returns:
        str: the report text.
    """

    lines = []
    for key, value in items:
        if isinstance(value, float):
            value = format_value(value)
        lines.append('{} = {}'.format(key, value))

    return '\n'.join(lines) + '\n'


def figure_bytes(fig, path):
    """
    Render a Matplotlib figure into the image format given by the extension
    of ``path`` (PNG if there is none).

    Args:
        fig (:class:`matplotlib.figure.Figure`): the figure.
        path (str): the destination file path.

    Returns:
        bytes: the image file contents.
    """

    fmt = os.path.splitext(path)[1].lstrip('.').lower() or 'png'

    buf = io.BytesIO()
    fig.savefig(buf, format=fmt)

    return buf.getvalue()
