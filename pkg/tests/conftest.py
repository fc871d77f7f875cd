import logging

import numpy as np
import pytest

import rnn_dg as rd


@pytest.fixture(autouse=True)
def _quiet_resolution_warnings(caplog):
    # the M > 2*quad_n advisory is expected in the paper-sized runs
    logging.getLogger("rnn_dg.assembly_elliptic").setLevel(logging.ERROR)
    yield


def solve_to_solution(system, partition, bases, rcond=None):
    report = rd.solve_system(system, rcond=rcond)
    return rd.Solution(
        partition=partition, bases=bases, coefficients=report.solution,
        scheme=system.scheme, report=report,
    )


def median_l2(values):
    return float(np.median(values))
