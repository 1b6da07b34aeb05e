"""
Test script for the pathloss models and distance estimation.
"""

import numpy as np
import pytest
from pandas import DataFrame
from rfpropy import (LogDistanceModel, UmiNlosModel, LinkBudget, AntennaGeometry,
                     GeoPoint, MeasurementSample, log_distance_pl, invert_log_distance,
                     log_distance_ratio, free_space_pl, fraunhofer_distance,
                     check_reference_distance, received_power, pathloss_from_rsrp,
                     mean_received_power, umi_nlos_pl, invert_umi_nlos, estimate_distances,
                     distance_report, write_distance_report)
from rfpropy.config import SPEED_OF_LIGHT

from .conftest import WALK_SURVEY_PL, WALK_SURVEY_D, DRIVE_SURVEY_PL, DRIVE_SURVEY_D


def test_drive_survey_regression(drive_survey, survey_link):
    """
    Test that the second drive test table is reproduced: the pathloss
    exactly and the distances to within a meter.
    """

    lb, model = survey_link
    estimates = estimate_distances(drive_survey, lb, model)

    assert len(estimates) == 33
    assert [e.pl_db for e in estimates] == [float(pl) for pl in DRIVE_SURVEY_PL]

    dhat = np.rint([e.d_hat_m for e in estimates])
    assert np.all(np.abs(dhat - DRIVE_SURVEY_D) <= 1)

    # spot values
    assert dhat[0] == 981
    assert dhat[1] == 192
    assert dhat[17] == 103


def test_walk_survey_divergence(walk_survey, survey_link):
    """
    The first drive test table has the right pathloss values, but several of
    its printed distances do not follow from them. Check that the computed
    values are kept rather than the printed ones.
    """

    lb, model = survey_link
    estimates = estimate_distances(walk_survey, lb, model)

    assert [e.pl_db for e in estimates] == [float(pl) for pl in WALK_SURVEY_PL]

    dhat = np.rint([e.d_hat_m for e in estimates])
    assert dhat[0] == 1621
    assert WALK_SURVEY_D[0] == 1581

    # rows with 130 dB pathloss agree with the other table
    assert dhat[5] == 462
    assert np.any(np.abs(dhat - WALK_SURVEY_D) > 1)


def test_umi_nlos_model():
    """
    Test the UMi-NLoS pathloss and its inverse.
    """

    model = UmiNlosModel(2.32)

    assert np.abs(model.offset_db - 32.2026876) < 1e-6
    assert model.pathloss(1.) == pytest.approx(model.offset_db)
    assert umi_nlos_pl(model, 100.) == pytest.approx(2. * 36.7 + model.offset_db)

    d = np.logspace(1, 4, 50)
    assert np.allclose(invert_umi_nlos(model, umi_nlos_pl(model, d)), d, rtol=1e-12)

    # RSRP of -101 dBm with 41 dBm transmit power
    assert invert_umi_nlos(model, 142.) == pytest.approx(981.19, abs=0.1)

    with pytest.warns(UserWarning):
        model.pathloss(5.)

    with pytest.raises(ValueError):
        model.pathloss(0.5)

    with pytest.raises(ValueError):
        UmiNlosModel(0.)

    with pytest.raises(ValueError):
        UmiNlosModel(np.inf)


def test_umi_nlos_properties():
    """
    Test the frequency dependence, inversion and monotonicity of the UMi-NLoS
    model.
    """

    # both log terms vanish at 1 GHz and 1 m
    with pytest.warns(UserWarning):
        assert umi_nlos_pl(UmiNlosModel(1.), 1.) == pytest.approx(22.7, abs=1e-12)
    assert invert_umi_nlos(UmiNlosModel(1.), 22.7) == pytest.approx(1., abs=1e-12)

    # ten times the frequency adds 26 dB at any distance
    d = np.array([10., 142., 981., 5000.])
    for fc in [0.5, 0.9388, 2.32]:
        shift = umi_nlos_pl(UmiNlosModel(10. * fc), d) - umi_nlos_pl(UmiNlosModel(fc), d)
        assert np.allclose(shift, 26., atol=1e-9)

    pl = np.linspace(60., 180., 25)
    for fc in np.linspace(0.5, 6., 12):
        model = UmiNlosModel(fc)
        assert np.allclose(umi_nlos_pl(model, invert_umi_nlos(model, pl)), pl, rtol=1e-9,
                           atol=0.)

    d = np.logspace(1, 4, 200)
    assert np.all(np.diff(umi_nlos_pl(UmiNlosModel(2.32), d)) > 0.)
    assert np.all(np.diff(log_distance_pl(LogDistanceModel(3.5, 10., 60.), d)) > 0.)
    assert np.all(np.diff(log_distance_pl(LogDistanceModel(2., 10., 60.), d)) > 0.)


def test_log_distance_model():
    """
    Test the log-distance pathloss and its inverse.
    """

    model = LogDistanceModel(2., 1., 40.)

    assert log_distance_pl(model, 1.) == 40.
    assert log_distance_pl(model, 10.) == pytest.approx(60.)
    assert invert_log_distance(model, 60.) == pytest.approx(10.)

    d = np.linspace(1., 5000., 100)
    assert np.allclose(invert_log_distance(model, log_distance_pl(model, d)), d, rtol=1e-12)

    model = LogDistanceModel(3.5, 100.)
    ratio = log_distance_ratio(model, [100., 1000.])
    assert np.allclose(ratio, [1., 10.**3.5])
    assert np.allclose(10. * np.log10(ratio), log_distance_pl(model, [100., 1000.]))

    with pytest.raises(ValueError):
        log_distance_pl(model, 99.)

    with pytest.raises(ValueError):
        invert_log_distance(LogDistanceModel(2., 1., 40.), 39.)

    with pytest.raises(ValueError):
        log_distance_ratio(model, 10.)

    for args in [(0., 1.), (2., 0.), (2., 1., -3.), (np.nan, 1.)]:
        with pytest.raises(ValueError):
            LogDistanceModel(*args)


def test_free_space():
    """
    Test the free space pathloss and a model referenced to it.
    """

    fc = 2.32e9
    expected = 20. * np.log10(4. * np.pi * fc / SPEED_OF_LIGHT)

    assert free_space_pl(1., fc) == pytest.approx(expected)
    assert free_space_pl(1., fc) == pytest.approx(39.758, abs=1e-3)

    # 6 dB per doubling of distance
    assert free_space_pl(2., fc) - free_space_pl(1., fc) == pytest.approx(6.0206, abs=1e-4)

    model = LogDistanceModel.from_free_space(2., 1., fc)
    assert model.pl_d0_db == pytest.approx(expected)
    assert np.allclose(model.pathloss([1., 10., 100.]), free_space_pl([1., 10., 100.], fc))

    with pytest.raises(ValueError):
        free_space_pl(0., fc)


def test_fraunhofer_distance():
    """
    Test the far-field distance and the reference distance check.
    """

    big = AntennaGeometry(1., 2.32e9)
    assert big.wavelength == pytest.approx(0.129221, abs=1e-6)
    assert fraunhofer_distance(big) == pytest.approx(15.477, abs=1e-3)

    small = AntennaGeometry(0.1, 938.8e6)
    assert fraunhofer_distance(small) == pytest.approx(0.06263, abs=1e-5)

    with pytest.warns(UserWarning):
        assert not check_reference_distance(LogDistanceModel(3., 1.), big)

    assert check_reference_distance(LogDistanceModel(3., 100.), big)
    assert check_reference_distance(LogDistanceModel(3., 1.), small)

    with pytest.raises(ValueError):
        AntennaGeometry(0., 1e9)


def test_link_budget():
    """
    Test received power and pathloss conversions.
    """

    lb = LinkBudget(41.)

    assert received_power(lb, 142.) == -101.
    assert pathloss_from_rsrp(lb, -101.) == 142.

    rsrp = np.arange(-140., -44.)
    assert np.array_equal(received_power(lb, pathloss_from_rsrp(lb, rsrp)), rsrp)

    model = UmiNlosModel(2.32)
    assert mean_received_power(lb, model, 981.19) == pytest.approx(-101., abs=0.01)
    assert mean_received_power(lb, LogDistanceModel(2., 1., 40.), 10.) == pytest.approx(-19.)

    with pytest.raises(ValueError):
        LinkBudget(np.nan)

    with pytest.raises(ValueError):
        received_power(lb, [140., np.inf])


def test_estimate_distances(survey_link):
    """
    Test distance estimation edge cases.
    """

    lb, model = survey_link

    assert estimate_distances([], lb, model) == []

    point = GeoPoint('13.0797705', '80.2260777')
    speed = MeasurementSample(point, 12.5, kind='downlink_speed')
    with pytest.raises(TypeError):
        estimate_distances([speed], lb, model)

    # any model with a distance method can be used
    sample = MeasurementSample(point, -65)
    est = estimate_distances([sample], lb, LogDistanceModel(2., 1., 40.))
    assert est[0].pl_db == 106.
    assert est[0].d_hat_m == pytest.approx(10.**3.3)
    assert est[0].sample is sample


def test_distance_report(drive_survey, survey_link):
    """
    Test the distance report table and its CSV text.
    """

    lb, model = survey_link
    estimates = estimate_distances(drive_survey, lb, model)

    table = distance_report(estimates)
    assert list(table.columns) == ['lat', 'lon', 'rsrp_dbm', 'pl_db', 'd_hat_m']
    assert len(table) == 33

    text = write_distance_report(estimates)
    lines = text.split('\n')
    assert lines[0] == 'lat,lon,rsrp_dbm,pl_db,d_hat_m'
    assert lines[1] == '13.0801464,80.2260452,-101,142,981'
    assert lines[18] == '13.0797705,80.2260777,-65,106,103'
    assert text.endswith('\n') and len(lines) == 35

    # the text is the same each time
    assert write_distance_report(estimates) == text

    extra = DataFrame({'d_geo_m': np.full(33, 250.5), 'ratio': np.full(33, np.inf)})
    lines = write_distance_report(estimates, extra=extra).split('\n')
    assert lines[0] == 'lat,lon,rsrp_dbm,pl_db,d_hat_m,d_geo_m,ratio'
    assert lines[1] == '13.0801464,80.2260452,-101,142,981,250.5,inf'

    assert write_distance_report([]) == 'lat,lon,rsrp_dbm,pl_db,d_hat_m\n'
