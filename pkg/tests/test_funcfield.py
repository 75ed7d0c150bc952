from fractions import Fraction

import pytest

from ndescent.fields import Poly
from ndescent.curve import Point, PoleAtP
from ndescent.funcfield import (FunctionFieldElement, line_through,
                                miller_function, vertical_through)


def test_coordinate_relation(curve):
    x = FunctionFieldElement.coordinate_x(curve)
    y = FunctionFieldElement.coordinate_y(curve)
    assert y * y == x ** 3 - 432
    assert (y / x) * x == y
    assert (x / y) * (y / x) == FunctionFieldElement.const(curve, 1)


def test_laurent_orders(curve, field):
    x = FunctionFieldElement.coordinate_x(curve)
    y = FunctionFieldElement.coordinate_y(curve)
    assert x.laurent(3).leading() == (-2, field.one())
    assert y.laurent(3).leading() == (-3, field.one())
    # x^3 / y^2 = 1 + O(t) at O
    u = x ** 3 / (y * y)
    assert u.laurent(4).leading() == (0, field.one())
    # t = x/y is the local parameter itself
    assert (x / y).laurent(4).leading() == (1, field.one())


def test_evaluate(curve, field, table):
    x = FunctionFieldElement.coordinate_x(curve)
    y = FunctionFieldElement.coordinate_y(curve)
    p = table.point(2, 1)  # (12, 36)
    h = (x * x + y) / (x - 3)
    assert h.evaluate(p) == field.from_fraction(20)
    with pytest.raises(PoleAtP):
        h.evaluate(Point.at_infinity(curve))
    with pytest.raises(PoleAtP):
        (1 / (x - 12)).evaluate(p)


def test_derivative(curve):
    x = FunctionFieldElement.coordinate_x(curve)
    y = FunctionFieldElement.coordinate_y(curve)
    assert x.derivative() == FunctionFieldElement.const(curve, 1)
    # 2 y y' = rhs'(x) = 3x^2
    assert y.derivative() * y * 2 == x * x * 3
    q = x * y
    assert q.derivative() == y + x * y.derivative()


def test_line_functions(curve, table):
    t1, t2 = table.t1, table.t2
    l = line_through(t1, t2)
    assert l.evaluate(t1).is_zero()
    assert l.evaluate(t2).is_zero()
    assert l.evaluate(-(t1 + t2)).is_zero()
    assert not l.evaluate(t1 + t2).is_zero()
    v = vertical_through(t1)
    assert v.evaluate(t1).is_zero()
    assert v.evaluate(-t1).is_zero()


def test_miller_function_divisor(table, field):
    t = table.t1
    f = miller_function(t, 3)
    # normalized leading coefficient at O
    assert f.laurent(0).leading() == (-3, field.one())
    assert f.evaluate(t).is_zero()
    # no other zeros among the table points
    for p in table:
        if p.is_infinity or p == t:
            continue
        assert not f.evaluate(p).is_zero()


def test_miller_frozen_values(millers, table, field):
    z = field.gen()
    assert millers[(1, 0)].evaluate(table.point(0, 1)) == -48 - 24 * z
    assert millers[(1, 1)].evaluate(table.point(2, 1)) == -72 - 72 * z
