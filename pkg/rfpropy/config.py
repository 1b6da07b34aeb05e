"""
This submodule sets up common constants for use, such as physical constants,
the LTE RSRP reporting table and the coefficients of the built-in pathloss
models.
"""

from collections import OrderedDict

from astropy.constants import c


#: The speed of light in a vacuum (m/s).
SPEED_OF_LIGHT = c.value

#: Mean radius of a spherical Earth (m) used for great-circle distances.
EARTH_RADIUS = 6371000.

#: The measurement CSV header (column order is fixed).
CSV_HEADER = ('lon', 'lat', 'val')

# Kinds of value that can be held in the 'val' column of a measurement file.
# For each kind there is a dictionary giving:
#  - 'units': the units of the value (used when generating an astropy table)
#  - 'desc': a short description
VALUE_KINDS = OrderedDict()
VALUE_KINDS['rsrp'] =           {'units': 'dBm',    'desc': 'Reference signal received power'}
VALUE_KINDS['downlink_speed'] = {'units': 'Mbit/s', 'desc': 'Downlink data speed'}
VALUE_KINDS['uplink_speed'] =   {'units': 'Mbit/s', 'desc': 'Uplink data speed'}

#: The default kind of measurement value.
DEFAULT_KIND = 'rsrp'

#: Accepted range (dBm) of raw RSRP values, wider than the reportable range.
RSRP_SANITY_RANGE = (-160., -20.)

#: Lowest and highest LTE RSRP report codes.
RSRP_MIN_CODE = 0
RSRP_MAX_CODE = 97

#: Lower edge (dBm) of report code 1; code k covers [k - 141, k - 140).
RSRP_CODE_OFFSET = -141

# LTE RSRP measurement report mapping. Each code is keyed to the half-open
# interval [low, high) of measured values in dBm; the end codes are unbounded.
RSRP_REPORT = OrderedDict()
RSRP_REPORT[RSRP_MIN_CODE] = (float('-inf'), RSRP_CODE_OFFSET + 1.)
for _code in range(RSRP_MIN_CODE + 1, RSRP_MAX_CODE):
    RSRP_REPORT[_code] = (float(RSRP_CODE_OFFSET + _code),
                          float(RSRP_CODE_OFFSET + _code + 1))
RSRP_REPORT[RSRP_MAX_CODE] = (float(RSRP_CODE_OFFSET + RSRP_MAX_CODE), float('inf'))
del _code

# Log-linear pathloss models of the form
#   PL(d) = slope*log10(d) + intercept + freq*log10(fc)
# with d in meters and fc in GHz. For each model there is a dictionary giving:
#  - 'slope': the distance coefficient (dB/decade)
#  - 'intercept': the constant term (dB)
#  - 'freq': the frequency coefficient (dB/decade of GHz)
#  - 'min_dist': the smallest distance (m) the model is validated for
PATHLOSS_MODELS = OrderedDict()
PATHLOSS_MODELS['UMI_NLOS'] = {'slope': 36.7, 'intercept': 22.7, 'freq': 26.,
                               'min_dist': 10.}

#: Smallest distance (m) at which the UMi-NLoS model may be evaluated at all.
UMI_NLOS_MIN_DIST = 1.

#: Default histogram bin width (dB), matching the 1 dB RSRP resolution.
DEFAULT_BIN_WIDTH = 1.

#: Minimum number of samples for a shadow fading fit.
SHADOW_MIN_SAMPLES = 30

#: Number of samples below which a shadow fading fit gives a warning.
SHADOW_WARN_SAMPLES = 500

#: Typical range (dB) of the shadowing standard deviation (urban to rural).
SHADOW_SIGMA_RANGE = (4., 12.)

#: The GSM TDMA time slot duration (s).
GSM_SLOT_DURATION = 15e-3/26.

#: Default null threshold for slot detection, as a fraction of the median envelope.
DEFAULT_THRESHOLD_FRACTION = 0.1

#: Default upper bound on the multipath delays (s).
DEFAULT_MAX_DELAY = 1e-6

#: Geodesic distances (m) below which a distance ratio is flagged.
MIN_VERIFY_DISTANCE = 1.

#: Heatmap export formats.
HEATMAP_FORMATS = ('csv', 'geojson')
