"""
Test script for the command line tool. No test may use the network.
"""

import json
import os

import numpy as np
import pytest
from rfpropy import IqStream, save_iq_dat, simulate_shadowed_rsrp
from rfpropy.cli import main
from rfpropy.config import GSM_SLOT_DURATION

from .conftest import DRIVE_SURVEY_D


def read_report(text):
    """
    Convert a key-value report into a dictionary.
    """

    report = {}
    for line in text.splitlines():
        key, value = line.split(' = ')
        report[key] = value

    return report


def write_values(path, values):
    with open(path, 'w') as fp:
        fp.write('\n'.join('{:.2f}'.format(v) for v in values) + '\n')


@pytest.mark.disable_socket
def test_distances(drive_survey_path, tmp_path):
    output = os.path.join(str(tmp_path), 'distances.csv')
    heatmap = os.path.join(str(tmp_path), 'rsrp.geojson')

    status = main(['distances', '--input', drive_survey_path, '--pt-dbm', '41', '--fc-ghz', '2.32',
                   '--output', output, '--heatmap', heatmap])
    assert status == 0

    with open(output, 'r') as fp:
        lines = fp.read().splitlines()

    assert lines[0] == 'lat,lon,rsrp_dbm,pl_db,d_hat_m'
    assert len(lines) == 34
    assert lines[1] == '13.0801464,80.2260452,-101,142,981'

    dhat = [int(line.split(',')[-1]) for line in lines[1:]]
    assert np.all(np.abs(np.array(dhat) - DRIVE_SURVEY_D) <= 1)

    with open(heatmap, 'r') as fp:
        collection = json.load(fp)
    assert len(collection['features']) == 33

    # the same inputs give the same output
    again = os.path.join(str(tmp_path), 'again.csv')
    main(['distances', '--input', drive_survey_path, '--pt-dbm', '41', '--fc-ghz', '2.32',
          '--output', again])
    with open(output, 'rb') as fp1, open(again, 'rb') as fp2:
        assert fp1.read() == fp2.read()


@pytest.mark.disable_socket
def test_distances_stdout(drive_survey_path, capsys):
    status = main(['distances', '--input', drive_survey_path, '--pt-dbm', '41', '--fc-ghz', '2.32',
                   '--tower-lat', '13.0795', '--tower-lon', '80.2255'])
    assert status == 0

    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'lat,lon,rsrp_dbm,pl_db,d_hat_m,d_geo_m,ratio'
    assert len(lines) == 34
    assert lines[1].startswith('13.0801464,80.2260452,-101,142,981,')


@pytest.mark.disable_socket
def test_distances_log_distance(drive_survey_path, capsys):
    status = main(['distances', '--input', drive_survey_path, '--pt-dbm', '41', '--fc-ghz', '2.32',
                   '--model', 'log-distance', '--alpha', '3.5', '--d0-m', '1',
                   '--pl-d0-db', '40'])
    assert status == 0

    # 106 dB pathloss
    lines = capsys.readouterr().out.splitlines()
    assert lines[18] == '13.0797705,80.2260777,-65,106,{}'.format(
        int(np.rint(10.**(66. / 35.))))

    # the exponent is required
    status = main(['distances', '--input', drive_survey_path, '--pt-dbm', '41', '--fc-ghz', '2.32',
                   '--model', 'log-distance'])
    assert status == 1


@pytest.mark.disable_socket
def test_distances_usage(drive_survey_path, capsys):
    # missing transmit power
    assert main(['distances', '--input', drive_survey_path, '--fc-ghz', '2.32']) == 2

    # negative frequency
    assert main(['distances', '--input', drive_survey_path, '--pt-dbm', '41',
                 '--fc-ghz', '-2.32']) == 2

    # tower latitude without longitude
    assert main(['distances', '--input', drive_survey_path, '--pt-dbm', '41', '--fc-ghz', '2.32',
                 '--tower-lat', '13.08']) == 2

    assert main([]) == 2
    assert main(['--help']) == 0
    capsys.readouterr()


@pytest.mark.disable_socket
def test_distances_empty(tmp_path):
    """
    A file with only a header gives a report with only a header.
    """

    infile = os.path.join(str(tmp_path), 'empty.csv')
    with open(infile, 'w') as fp:
        fp.write('lon,lat,val\n')

    output = os.path.join(str(tmp_path), 'distances.csv')
    assert main(['distances', '--input', infile, '--pt-dbm', '41', '--fc-ghz', '2.32',
                 '--output', output]) == 0

    with open(output, 'r') as fp:
        assert fp.read() == 'lat,lon,rsrp_dbm,pl_db,d_hat_m\n'


@pytest.mark.disable_socket
def test_distances_bad_input(tmp_path, capsys):
    """
    Bad input files give a single line error and no output files.
    """

    infile = os.path.join(str(tmp_path), 'bad.csv')
    output = os.path.join(str(tmp_path), 'distances.csv')

    with open(infile, 'w') as fp:
        fp.write('lat,lon,val\n13,80,-90\n')

    assert main(['distances', '--input', infile, '--pt-dbm', '41', '--fc-ghz', '2.32',
                 '--output', output]) == 1

    err = capsys.readouterr().err
    assert len(err.strip().splitlines()) == 1
    assert 'error' in err
    assert not os.path.exists(output)

    with open(infile, 'w') as fp:
        fp.write('lon,lat,val\n80,13,-90\n80,13,strong\n')

    assert main(['distances', '--input', infile, '--pt-dbm', '41', '--fc-ghz', '2.32',
                 '--output', output]) == 1
    assert 'Row 2' in capsys.readouterr().err
    assert not os.path.exists(output)

    assert main(['distances', '--input', os.path.join(str(tmp_path), 'missing.csv'),
                 '--pt-dbm', '41', '--fc-ghz', '2.32']) == 1


@pytest.mark.disable_socket
def test_shadow(tmp_path):
    infile = os.path.join(str(tmp_path), 'rsrp.txt')
    write_values(infile, simulate_shadowed_rsrp(-85., 6., 2000, seed=2))

    output = os.path.join(str(tmp_path), 'shadow.txt')
    series = os.path.join(str(tmp_path), 'series.csv')

    assert main(['shadow', '--input', infile, '--output', output, '--series', series]) == 0

    with open(output, 'r') as fp:
        report = read_report(fp.read())

    assert int(report['n']) == 2000
    assert np.abs(float(report['mu_dbm']) + 85.) < 0.5
    assert np.abs(float(report['sigma_db']) - 6.) < 0.5
    assert float(report['ks']) < float(report['ks_critical_99'])

    with open(series, 'r') as fp:
        assert fp.readline() == 'bin_center,count,density,model_density\n'


@pytest.mark.disable_socket
def test_shadow_sample_size(tmp_path, capsys):
    infile = os.path.join(str(tmp_path), 'rsrp.txt')

    write_values(infile, simulate_shadowed_rsrp(-85., 6., 10, seed=2))
    assert main(['shadow', '--input', infile]) == 1
    assert 'at least 30' in capsys.readouterr().err

    write_values(infile, simulate_shadowed_rsrp(-85., 6., 400, seed=2))
    with pytest.warns(UserWarning):
        assert main(['shadow', '--input', infile]) == 0
    assert capsys.readouterr().out.startswith('n = 400\n')


@pytest.mark.disable_socket
def test_fading_simulate(tmp_path):
    """
    Test that the fitted envelope power matches the simulated power.
    """

    output = os.path.join(str(tmp_path), 'fading.txt')
    pdf = os.path.join(str(tmp_path), 'pdf.csv')
    envelope = os.path.join(str(tmp_path), 'envelope.csv')

    args = ['fading', '--simulate', '--paths', '64', '--seed', '7', '--velocity-mps', '300',
            '--fc-hz', '3e9', '--duration', '100', '--sample-rate-hz', '1000',
            '--output', output, '--pdf', pdf, '--envelope', envelope]
    assert main(args) == 0

    with open(output, 'r') as fp:
        first = fp.read()

    report = read_report(first)
    assert int(report['n']) == 100000
    assert np.abs(float(report['omega_power']) - 1.) < 0.02

    with open(pdf, 'r') as fp:
        assert fp.readline() == 'x,empirical_density,model_density\n'

    with open(envelope, 'r') as fp:
        assert fp.readline() == 't_s,magnitude\n'
        assert fp.readline().startswith('0.0,')

    # the same seed gives the same report
    assert main(args) == 0
    with open(output, 'r') as fp:
        assert fp.read() == first


@pytest.mark.disable_socket
def test_fading_unseeded(capsys):
    with pytest.warns(UserWarning, match='--seed'):
        assert main(['fading', '--simulate', '--paths', '8', '--duration', '0.1',
                     '--sample-rate-hz', '10000']) == 0

    assert capsys.readouterr().out.startswith('n = 1000\n')


@pytest.mark.disable_socket
def test_fading_capture(tmp_path, capsys):
    """
    Test finding the GSM slot duration from a bursty capture.
    """

    sample_rate = 1e6
    rng = np.random.default_rng(5)
    t = np.arange(5000) / sample_rate
    amp = rng.rayleigh(1., len(t)) + 0.5
    amp[np.remainder(t, GSM_SLOT_DURATION) < 30e-6] = 0.01
    phase = rng.uniform(0., 2. * np.pi, len(t))

    capture = os.path.join(str(tmp_path), 'capture.dat')
    save_iq_dat(IqStream(amp * np.exp(1j * phase), sample_rate), capture)

    assert main(['fading', '--input', capture, '--sample-rate-hz', '1000000',
                 '--detect-slots']) == 0

    report = read_report(capsys.readouterr().out)
    assert int(report['n']) == 5000
    assert np.abs(float(report['slot_duration_us']) - 576.9) <= 1.

    # without nulls
    save_iq_dat(IqStream(np.ones(5000, dtype=complex), sample_rate), capture)
    assert main(['fading', '--input', capture, '--sample-rate-hz', '1000000',
                 '--detect-slots']) == 1


@pytest.mark.disable_socket
def test_fading_bad_capture(tmp_path, capsys):
    capture = os.path.join(str(tmp_path), 'capture.dat')
    with open(capture, 'wb') as fp:
        fp.write(b'\x00' * 9)

    output = os.path.join(str(tmp_path), 'fading.txt')
    assert main(['fading', '--input', capture, '--sample-rate-hz', '1000000',
                 '--output', output]) == 1

    err = capsys.readouterr().err
    assert 'byte offset 8' in err
    assert not os.path.exists(output)

    # the sample rate is required for captures
    assert main(['fading', '--input', capture]) == 2

    # a capture and a simulation cannot both be used
    assert main(['fading', '--input', capture, '--simulate', '--sample-rate-hz', '1e6']) == 2


@pytest.mark.disable_socket
def test_heatmap(walk_survey_path, tmp_path):
    output = os.path.join(str(tmp_path), 'rsrp.geojson')
    assert main(['heatmap', '--input', walk_survey_path, '--output', output]) == 0

    with open(output, 'r') as fp:
        collection = json.load(fp)

    assert collection['type'] == 'FeatureCollection'
    assert len(collection['features']) == 10
    assert collection['features'][0]['geometry']['coordinates'] == [80.2260928, 13.0801679]

    output = os.path.join(str(tmp_path), 'rsrp.csv')
    assert main(['heatmap', '--input', walk_survey_path, '--format', 'csv',
                 '--output', output]) == 0

    with open(output, 'r') as fp1, open(walk_survey_path, 'r') as fp2:
        assert fp1.read() == fp2.read()

    # empty layers cannot be exported
    infile = os.path.join(str(tmp_path), 'empty.csv')
    with open(infile, 'w') as fp:
        fp.write('lon,lat,val\n')
    assert main(['heatmap', '--input', infile]) == 1

    assert main(['heatmap', '--input', walk_survey_path, '--format', 'kml']) == 2


@pytest.mark.disable_socket
def test_heatmap_speeds(tmp_path, capsys):
    infile = os.path.join(str(tmp_path), 'speeds.csv')
    with open(infile, 'w') as fp:
        fp.write('lon,lat,val\n80.2260928,13.0801679,54.2\n80.2260598,13.0801522,12.75\n')

    assert main(['heatmap', '--input', infile, '--kind', 'downlink_speed']) == 0

    collection = json.loads(capsys.readouterr().out)
    assert collection['features'][1]['properties'] == {'val': 12.75,
                                                        'value_kind': 'downlink_speed'}


@pytest.mark.disable_socket
def test_plot_outputs(walk_survey_path, tmp_path, capsys):
    """
    Test that figures are written whole alongside the other outputs and are
    closed afterwards.
    """

    mpl = pytest.importorskip('matplotlib')
    mpl.use('Agg')
    from matplotlib import pyplot as pl

    infile = os.path.join(str(tmp_path), 'rsrp.txt')
    write_values(infile, simulate_shadowed_rsrp(-85., 6., 2000, seed=2))

    shadowplot = os.path.join(str(tmp_path), 'shadow.png')
    heatplot = os.path.join(str(tmp_path), 'heatmap.pdf')
    envplot = os.path.join(str(tmp_path), 'envelope.png')

    assert main(['shadow', '--input', infile, '--plot', shadowplot]) == 0
    assert main(['heatmap', '--input', walk_survey_path, '--plot', heatplot]) == 0
    assert main(['fading', '--simulate', '--seed', '7', '--duration', '0.01',
                 '--sample-rate-hz', '1e5', '--plot-envelope', envplot]) == 0
    capsys.readouterr()

    for path in (shadowplot, envplot):
        with open(path, 'rb') as fp:
            assert fp.read(8) == b'\x89PNG\r\n\x1a\n'

    with open(heatplot, 'rb') as fp:
        assert fp.read(5) == b'%PDF-'

    assert pl.get_fignums() == []
    assert sorted(os.listdir(str(tmp_path))) == ['envelope.png', 'heatmap.pdf', 'rsrp.txt',
                                                 'shadow.png']

    # a figure that cannot be written is an error
    missing = os.path.join(str(tmp_path), 'missing', 'shadow.png')
    assert main(['shadow', '--input', infile, '--plot', missing]) == 1
    assert 'error' in capsys.readouterr().err
    assert not os.path.exists(os.path.dirname(missing))
