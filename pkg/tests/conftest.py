"""Shared fixtures: the reference curve y^2 = x^3 - 432 over Q(zeta3)
with full rational 3-torsion, and the auxiliary curve y^2 = x^3 - 54
over Q(zeta3, sqrt2).  Everything is session scoped because the torsion
table and the embedding are reused by most of the suite."""

import pytest

from ndescent.fields import FieldTower, tower_extend
from ndescent.curve import Curve, torsion_table
from ndescent.descent_funcs import (compute_miller_table, compute_epsilon,
                                    compute_G_basis, compute_embedding)


@pytest.fixture(scope="session")
def field():
    return tower_extend(FieldTower.rationals(), [1, 1, 1], name="zeta3")


@pytest.fixture(scope="session")
def curve(field):
    return Curve(field, 0, -432)


@pytest.fixture(scope="session")
def table(curve):
    return torsion_table(curve, 3)


@pytest.fixture(scope="session")
def millers(table):
    return compute_miller_table(table)


@pytest.fixture(scope="session")
def eps(table, millers):
    return compute_epsilon(table, millers)


@pytest.fixture(scope="session")
def gbasis(table, eps):
    return compute_G_basis(table, eps)


@pytest.fixture(scope="session")
def emb(table, eps, millers):
    return compute_embedding(table, eps, millers, seed=0)


@pytest.fixture(scope="session")
def aux_field(field):
    return tower_extend(field, [-2, 0, 1], name="sqrt2")


@pytest.fixture(scope="session")
def aux_curve(aux_field):
    return Curve(aux_field, 0, -54)


@pytest.fixture(scope="session")
def aux_table(aux_curve):
    return torsion_table(aux_curve, 3)
