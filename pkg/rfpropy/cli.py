"""
The ``rfpropy`` command line tool. It runs the distance estimation, shadow
fading and small scale fading analyses, and the heatmap export, as batch
subcommands over files::

    rfpropy distances --input rsrp.csv --pt-dbm 41 --fc-ghz 2.32
    rfpropy shadow --input rsrp.txt --series hist.csv
    rfpropy fading --simulate --paths 64 --seed 7 --duration 1 --sample-rate-hz 100000
    rfpropy heatmap --input rsrp.csv --format geojson --output rsrp.geojson

Data are written to the given output files (or standard output) and
diagnostics to standard error. The exit status is 0 on success, 1 for a data
or model error and 2 for a usage error.
"""

import argparse
import sys
import warnings

import numpy as np

from . import __version__
from .config import (VALUE_KINDS, DEFAULT_KIND, HEATMAP_FORMATS, DEFAULT_BIN_WIDTH,
                     DEFAULT_THRESHOLD_FRACTION, DEFAULT_MAX_DELAY)
from .measurements import GeoPoint, read_measurement_csv
from .pathloss import (LinkBudget, UmiNlosModel, LogDistanceModel, estimate_distances,
                       write_distance_report)
from .shadowing import fit_shadowing, read_rsrp_values
from .smallscale import (MultipathConfig, simulate_envelope, read_iq_dat, envelope,
                         estimate_rayleigh_scale, detect_slots, pdf_comparison,
                         envelope_series, plot_envelope)
from .geoheat import HeatmapLayer, export_heatmap, verify_distances
from .utils import atomic_write, figure_bytes


def _emit(data, path):
    """
    Write output data to a file, or to standard output if no path is given.
    """

    if path is None or path == '-':
        if isinstance(data, bytes):
            sys.stdout.flush()
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            sys.stdout.write(data)
    else:
        atomic_write(path, data)


def _figure(fig, path):
    """
    Render a figure for writing with the other outputs, and close it.
    """

    from matplotlib import pyplot as pl

    data = figure_bytes(fig, path)
    pl.close(fig)

    return (data, path)


def _read_bytes(path):
    try:
        with open(path, 'rb') as fp:
            return fp.read()
    except IOError as e:
        raise IOError("Could not read '{}': {}".format(path, str(e)))


def _resolve_seed(seed):
    """
    Return the seed, or derive a new one, and report it, if none was given.
    """

    if seed is not None:
        return seed

    seed = int(np.random.SeedSequence().entropy)
    warnings.warn("No --seed given, using --seed {}".format(seed), UserWarning)

    return seed


def cmd_distances(args):
    """
    Estimate the distance to the transmitter for each RSRP sample, and
    optionally compare them with the distances to a known transmitter
    position and export a heatmap of the samples.
    """

    samples = read_measurement_csv(args.input, kind='rsrp')
    lb = LinkBudget(args.pt_dbm)

    if args.model == 'umi-nlos':
        model = UmiNlosModel(args.fc_ghz)
    else:
        if args.alpha is None:
            raise ValueError("--alpha is required for the log-distance model")
        if args.pl_d0_db is None:
            model = LogDistanceModel.from_free_space(args.alpha, args.d0_m, args.fc_ghz * 1e9)
        else:
            model = LogDistanceModel(args.alpha, args.d0_m, args.pl_d0_db)

    estimates = estimate_distances(samples, lb, model)

    extra = None
    if args.tower_lat is not None and len(estimates) > 0:
        check = verify_distances(estimates, GeoPoint(args.tower_lat, args.tower_lon))
        extra = check[['d_geo_m', 'ratio']]

    outputs = [(write_distance_report(estimates, extra=extra), args.output)]

    if args.heatmap is not None:
        if len(samples) == 0:
            warnings.warn("No samples, so no heatmap is written", UserWarning)
        else:
            layer = HeatmapLayer.from_samples(samples)
            outputs.append((export_heatmap(layer, format=args.heatmap_format), args.heatmap))

    for data, path in outputs:
        _emit(data, path)


def cmd_shadow(args):
    """
    Fit a log-normal shadowing model to RSRP samples.
    """

    values = read_rsrp_values(_read_bytes(args.input))
    result = fit_shadowing(values, bin_width_db=args.bin_width_db)

    outputs = [(result.report(), args.output)]
    if args.series is not None:
        outputs.append((result.write_series(), args.series))

    if args.plot is not None:
        outputs.append(_figure(result.plot(), args.plot))

    for data, path in outputs:
        _emit(data, path)


def cmd_fading(args):
    """
    Fit a Rayleigh distribution to the envelope of a captured or simulated
    signal, and optionally find its slot timing.
    """

    if args.simulate:
        cfg = MultipathConfig(args.paths, args.velocity_mps, args.fc_hz, omega=args.omega,
                              max_delay_s=args.max_delay_s, seed=_resolve_seed(args.seed))
        stream = simulate_envelope(cfg, args.duration, args.sample_rate_hz)
    else:
        stream = read_iq_dat(args.input, args.sample_rate_hz)

    env = envelope(stream)
    fit = estimate_rayleigh_scale(env)
    report = fit.report()

    slots = None
    if args.detect_slots:
        slots = detect_slots(env, stream.sample_rate_hz,
                             threshold_fraction=args.threshold_fraction,
                             expected_slot_s=args.expected_slot_s)
        report += slots.report()

    outputs = [(report, args.output)]
    if args.envelope is not None:
        envcsv = envelope_series(stream).to_csv(index=False, lineterminator='\n')
        outputs.append((envcsv, args.envelope))

    if args.pdf is not None:
        pdfcsv = pdf_comparison(env, fit, n_bins=args.n_bins).to_csv(index=False,
                                                                     lineterminator='\n')
        outputs.append((pdfcsv, args.pdf))

    if args.plot is not None:
        outputs.append(_figure(fit.plot(env, n_bins=args.n_bins), args.plot))

    if args.plot_envelope is not None:
        outputs.append(_figure(plot_envelope(stream, slots=slots), args.plot_envelope))

    for data, path in outputs:
        _emit(data, path)


def cmd_heatmap(args):
    """
    Export measurement samples as a heatmap layer.
    """

    layer = HeatmapLayer.from_samples(read_measurement_csv(args.input, kind=args.kind))

    outputs = [(export_heatmap(layer, format=args.format), args.output)]
    if args.plot is not None:
        outputs.append(_figure(layer.plot(), args.plot))

    for data, path in outputs:
        _emit(data, path)


def _positive(value):
    try:
        fvalue = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError("'{}' is not a number".format(value))

    if not np.isfinite(fvalue) or fvalue <= 0.:
        raise argparse.ArgumentTypeError("'{}' must be positive".format(value))

    return fvalue


def build_parser():
    """
    Returns:
        :class:`argparse.ArgumentParser`: the parser for the ``rfpropy``
        command line.
    """

    parser = argparse.ArgumentParser(prog='rfpropy',
                                     description='Analyse RF propagation measurements')
    parser.add_argument('--version', action='version',
                        version='%(prog)s {}'.format(__version__))

    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    dist = subparsers.add_parser('distances', help='Estimate transmitter distances from RSRP')
    dist.add_argument('--input', required=True, help='RSRP measurement CSV file')
    dist.add_argument('--pt-dbm', type=float, required=True, help='Transmit power (dBm)')
    dist.add_argument('--fc-ghz', type=_positive, required=True,
                      help='Carrier frequency (GHz)')
    dist.add_argument('--model', choices=['umi-nlos', 'log-distance'], default='umi-nlos',
                      help='Pathloss model (default: %(default)s)')
    dist.add_argument('--alpha', type=_positive,
                      help='Pathloss exponent of the log-distance model')
    dist.add_argument('--d0-m', type=_positive, default=1.,
                      help='Reference distance (m) of the log-distance model '
                           '(default: %(default)s)')
    dist.add_argument('--pl-d0-db', type=float,
                      help='Pathloss (dB) at the reference distance (default: free space)')
    dist.add_argument('--tower-lat', type=float, help='Transmitter latitude (deg)')
    dist.add_argument('--tower-lon', type=float, help='Transmitter longitude (deg)')
    dist.add_argument('--output', help='Distance report CSV file (default: stdout)')
    dist.add_argument('--heatmap', help='Heatmap export file')
    dist.add_argument('--heatmap-format', choices=HEATMAP_FORMATS, default='geojson',
                      help='Heatmap export format (default: %(default)s)')
    dist.set_defaults(func=cmd_distances)

    shadow = subparsers.add_parser('shadow', help='Fit a log-normal shadowing model')
    shadow.add_argument('--input', required=True,
                        help='RSRP measurement CSV file or one value (dBm) per line')
    shadow.add_argument('--bin-width-db', type=_positive, default=DEFAULT_BIN_WIDTH,
                        help='Histogram bin width (dB) (default: %(default)s)')
    shadow.add_argument('--output', help='Fit report file (default: stdout)')
    shadow.add_argument('--series', help='Histogram and model density CSV file')
    shadow.add_argument('--plot', help='Histogram figure file')
    shadow.set_defaults(func=cmd_shadow)

    fading = subparsers.add_parser('fading', help='Fit a Rayleigh fading model')
    source = fading.add_mutually_exclusive_group(required=True)
    source.add_argument('--input', help='Raw IQ capture (.dat) file')
    source.add_argument('--simulate', action='store_true',
                        help='Simulate a multipath channel instead of reading a capture')
    fading.add_argument('--sample-rate-hz', type=_positive, required=True,
                        help='Sample rate (Hz)')
    fading.add_argument('--paths', type=int, default=64,
                        help='Number of simulated paths (default: %(default)s)')
    fading.add_argument('--velocity-mps', type=float, default=30.,
                        help='Simulated receiver speed (m/s) (default: %(default)s)')
    fading.add_argument('--fc-hz', type=_positive, default=938.8e6,
                        help='Simulated carrier frequency (Hz) (default: %(default)s)')
    fading.add_argument('--omega', type=_positive, default=1.,
                        help='Simulated envelope power (default: %(default)s)')
    fading.add_argument('--max-delay-s', type=float, default=DEFAULT_MAX_DELAY,
                        help='Largest simulated path delay (s) (default: %(default)s)')
    fading.add_argument('--duration', type=_positive, default=1.,
                        help='Simulated duration (s) (default: %(default)s)')
    fading.add_argument('--seed', type=int, help='Random seed of the simulation')
    fading.add_argument('--detect-slots', action='store_true',
                        help='Find the slot duration from the envelope nulls')
    fading.add_argument('--threshold-fraction', type=float,
                        default=DEFAULT_THRESHOLD_FRACTION,
                        help='Null threshold as a fraction of the median envelope '
                             '(default: %(default)s)')
    fading.add_argument('--expected-slot-s', type=_positive,
                        help='Expected slot duration (s)')
    fading.add_argument('--n-bins', type=int, default=50,
                        help='Number of envelope histogram bins (default: %(default)s)')
    fading.add_argument('--output', help='Fit report file (default: stdout)')
    fading.add_argument('--envelope', help='Envelope time series CSV file')
    fading.add_argument('--pdf', help='Measured and model envelope density CSV file')
    fading.add_argument('--plot', help='Envelope density figure file')
    fading.add_argument('--plot-envelope', help='Envelope time series figure file')
    fading.set_defaults(func=cmd_fading)

    heat = subparsers.add_parser('heatmap', help='Export measurements as a heatmap layer')
    heat.add_argument('--input', required=True, help='Measurement CSV file')
    heat.add_argument('--kind', choices=list(VALUE_KINDS), default=DEFAULT_KIND,
                      help='Kind of measured value (default: %(default)s)')
    heat.add_argument('--format', choices=HEATMAP_FORMATS, default='geojson',
                      help='Export format (default: %(default)s)')
    heat.add_argument('--output', help='Export file (default: stdout)')
    heat.add_argument('--plot', help='Heatmap figure file')
    heat.set_defaults(func=cmd_heatmap)

    return parser


def main(argv=None):
    """
    Run the ``rfpropy`` command line tool.

    Args:
        argv (list): the command line arguments. Defaults to ``sys.argv[1:]``.

    Returns:
        int: the exit status.
    """

    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    if args.command == 'distances' and (args.tower_lat is None) != (args.tower_lon is None):
        parser.print_usage(sys.stderr)
        sys.stderr.write('rfpropy: error: --tower-lat and --tower-lon must be given '
                         'together\n')
        return 2

    try:
        args.func(args)
    except (ValueError, TypeError, RuntimeError, IOError, ImportError) as e:
        sys.stderr.write('rfpropy {}: error: {}\n'.format(args.command,
                                                          ' '.join(str(e).split())))
        return 1

    return 0


if __name__ == '__main__':
    sys.exit(main())
