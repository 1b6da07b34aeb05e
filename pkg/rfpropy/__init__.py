# coding: utf-8

""" A Python toolkit for analysing RF propagation measurements """

import warnings
from .measurements import (GeoPoint, MeasurementSample, Measurements, RsrpInterval,
                           parse_measurement_csv, write_measurement_csv,
                           read_measurement_csv, save_measurement_csv,
                           quantize_rsrp, dequantize_rsrp)
from .pathloss import (LogDistanceModel, UmiNlosModel, LinkBudget, AntennaGeometry,
                       DistanceEstimate, log_distance_pl, invert_log_distance,
                       log_distance_ratio, free_space_pl, fraunhofer_distance,
                       check_reference_distance, received_power, pathloss_from_rsrp,
                       mean_received_power, umi_nlos_pl, invert_umi_nlos,
                       estimate_distances, distance_report, write_distance_report)
from .shadowing import (ShadowFit, HistogramSeries, ShadowingResult, estimate_mean,
                        estimate_variance, gaussian_pdf, gaussian_cdf, build_histogram,
                        ks_statistic_gaussian, fit_shadowing, simulate_shadowed_rsrp,
                        read_rsrp_values)
from .smallscale import (IqStream, MultipathConfig, RayleighFit, SlotEstimate,
                         max_doppler, doppler_shift, simulate_envelope, envelope,
                         in_phase_quadrature, estimate_rayleigh_scale, rayleigh_pdf,
                         rayleigh_cdf, parse_iq_dat, write_iq_dat, read_iq_dat,
                         save_iq_dat, detect_slots, pdf_comparison, envelope_series,
                         envelope_autocorrelation, plot_envelope)
from .geoheat import HeatmapLayer, haversine_m, verify_distances, export_heatmap
from .utils import SchemaError, RowError, FormatError, DetectionError

__version__ = "0.1.0"


# set formatting of warnings to not include line number and code (see
# e.g. https://pymotw.com/3/warnings/#formatting)
def warning_format(message, category, filename, lineno, file=None, line=None):
    return '{}: {}\n'.format(category.__name__, message)


warnings.formatwarning = warning_format
