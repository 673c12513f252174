"""dB-domain helpers shared across the link budget.

All functions accept scalars or numpy arrays and broadcast elementwise.
"""

import numpy as np

BOLTZMANN = 1.380649e-23  # J/K


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(linear):
    return 10.0 * np.log10(linear)


def dbm_to_watt(dbm):
    return 10.0 ** (dbm / 10.0) / 1000.0


def watt_to_dbm(watt):
    return 10.0 * np.log10(watt * 1000.0)
