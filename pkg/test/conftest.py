import os

import pytest
from rfpropy import read_measurement_csv, LinkBudget, UmiNlosModel

TESTDIR = os.path.dirname(os.path.abspath(__file__))

# reference pathloss (dB) and distance (m) for each row of the survey files
WALK_SURVEY_PL = [150, 156, 127, 125, 127, 130, 129, 129, 129, 122]
WALK_SURVEY_D = [1581, 2332, 376, 345, 388, 462, 428, 437, 442, 277]

DRIVE_SURVEY_PL = [142, 116, 120, 128, 120, 130, 132, 128, 126, 120, 114, 136, 112, 130, 118,
             124, 110, 106, 128, 126, 136, 136, 140, 128, 120, 130, 110, 132, 130, 130,
             124, 132, 120]
DRIVE_SURVEY_D = [981, 192, 247, 408, 247, 462, 524, 408, 360, 247, 170, 673, 149, 462, 218,
            317, 132, 103, 408, 360, 673, 673, 866, 408, 247, 462, 132, 524, 462, 462,
            317, 524, 247]


@pytest.fixture(scope="session")
def walk_survey_path():
    return os.path.join(TESTDIR, 'walk_survey.csv')


@pytest.fixture(scope="session")
def drive_survey_path():
    return os.path.join(TESTDIR, 'drive_survey.csv')


@pytest.fixture(scope="session")
def walk_survey(walk_survey_path):
    return read_measurement_csv(walk_survey_path)


@pytest.fixture(scope="session")
def drive_survey(drive_survey_path):
    return read_measurement_csv(drive_survey_path)


@pytest.fixture(scope="module")
def survey_link():
    """
    Link budget and pathloss model of the surveyed cell (41 dBm at
    2.32 GHz).
    """

    return LinkBudget(41.), UmiNlosModel(2.32)
