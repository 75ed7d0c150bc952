"""Elliptic curves y^2 = x^3 + a x + b over a field tower.

Points, chord-tangent arithmetic, division polynomials, the rational
n-torsion table, and the two-torsion-argument function r.
"""

from fractions import Fraction

from .fields import FieldElement, Poly, poly_x, roots_in_field


class TorsionNotRational(Exception):
    """The n-torsion is not fully rational over the given field.

    .count is the number of rational n-torsion points found (including O).
    """

    def __init__(self, count):
        self.count = count
        super().__init__("only %d rational n-torsion points" % count)


class PoleAtP(Exception):
    """Evaluation hit a pole (or a 0/0 the formula cannot resolve)."""


class Curve:
    """y^2 = x^3 + a*x + b with nonzero discriminant."""

    def __init__(self, field, a, b):
        self.field = field
        self.a = a if isinstance(a, FieldElement) else field.from_fraction(a)
        self.b = b if isinstance(b, FieldElement) else field.from_fraction(b)
        self.a = self.a.lift_to(field)
        self.b = self.b.lift_to(field)
        disc = -16 * (4 * self.a ** 3 + 27 * self.b ** 2)
        if disc.is_zero():
            raise ValueError("singular curve: discriminant is zero")
        self.disc = disc
        self._divpoly = {}

    def rhs(self, x):
        return x ** 3 + self.a * x + self.b

    def rhs_poly(self):
        x = poly_x(self.field)
        return x ** 3 + self.a * x + self.b

    def contains(self, x, y):
        return (y * y - self.rhs(x)).is_zero()

    def base_change(self, field):
        assert self.field.is_prefix_of(field)
        return Curve(field, self.a.lift_to(field), self.b.lift_to(field))

    def __eq__(self, other):
        if not isinstance(other, Curve):
            return NotImplemented
        return self.field == other.field and self.a == other.a and self.b == other.b

    def __repr__(self):
        return "Curve(y^2 = x^3 + (%r)x + (%r))" % (self.a, self.b)


class Point:
    """A point on a Curve: either the point at infinity or affine (x, y)."""

    __slots__ = ("curve", "x", "y", "is_infinity")

    def __init__(self, curve, x, y):
        self.curve = curve
        if isinstance(x, (int, Fraction)):
            x = curve.field.from_fraction(x)
        if isinstance(y, (int, Fraction)):
            y = curve.field.from_fraction(y)
        x = x.lift_to(curve.field)
        y = y.lift_to(curve.field)
        assert curve.contains(x, y), "point is not on the curve"
        self.x = x
        self.y = y
        self.is_infinity = False

    @staticmethod
    def at_infinity(curve):
        p = Point.__new__(Point)
        p.curve = curve
        p.x = None
        p.y = None
        p.is_infinity = True
        return p

    def key(self):
        if self.is_infinity:
            return (0,)
        return (1,) + self.x.key() + self.y.key()

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.is_infinity:
            return hash("O")
        return hash((self.x, self.y))

    def __neg__(self):
        if self.is_infinity:
            return self
        return Point(self.curve, self.x, -self.y)

    def __add__(self, other):
        assert isinstance(other, Point)
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        if self.x == other.x:
            if self.y == -other.y:
                return Point.at_infinity(self.curve)
            lam = (3 * self.x ** 2 + self.curve.a) / (2 * self.y)
        else:
            lam = (other.y - self.y) / (other.x - self.x)
        x3 = lam * lam - self.x - other.x
        y3 = lam * (self.x - x3) - self.y
        return Point(self.curve, x3, y3)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, m):
        assert isinstance(m, int)
        if m < 0:
            return (-m) * (-self)
        out = Point.at_infinity(self.curve)
        base = self
        while m:
            if m & 1:
                out = out + base
            base = base + base
            m >>= 1
        return out

    def order(self, bound=100):
        """Order of the point, if at most bound."""
        acc = self
        for k in range(1, bound + 1):
            if acc.is_infinity:
                return k
            acc = acc + self
        raise ValueError("order exceeds bound")

    def base_change(self, field):
        if self.is_infinity:
            return Point.at_infinity(self.curve.base_change(field))
        return Point(self.curve.base_change(field), self.x.lift_to(field), self.y.lift_to(field))

    def __repr__(self):
        if self.is_infinity:
            return "Point(O)"
        return "Point(%r, %r)" % (self.x, self.y)


def slope(t1, t2):
    """The slope of the line through t1 and t2 (tangent if equal).
    Both points affine, t1 + t2 != O."""
    assert not (t1.is_infinity or t2.is_infinity)
    if t1.x == t2.x:
        assert t1.y == t2.y and not t1.y.is_zero(), "vertical line has no slope"
        return (3 * t1.x ** 2 + t1.curve.a) / (2 * t1.y)
    return (t2.y - t1.y) / (t2.x - t1.x)


def r_eval(t1, t2, p):
    """The function r_{(t1,t2)} with divisor (t1)+(t2)-(O)-(t1+t2),
    normalized as: 1 if either argument is O; x - x(t1) if t1+t2 = O;
    (y + y(t1+t2))/(x - x(t1+t2)) - slope(t1,t2) otherwise.
    Raises PoleAtP when the formula cannot be evaluated at p."""
    field = t1.curve.field
    if t1.is_infinity or t2.is_infinity:
        return field.one()
    s = t1 + t2
    if s.is_infinity:
        if p.is_infinity:
            raise PoleAtP("r has a pole at O")
        return p.x - t1.x
    if p.is_infinity:
        raise PoleAtP("r has a pole at O")
    if p.x == s.x:
        raise PoleAtP("formula for r degenerates at +-(t1+t2)")
    return (p.y + s.y) / (p.x - s.x) - slope(t1, t2)


def _divpoly_pair(curve, m):
    """psi_m as (poly in x, y-parity), cached on the curve."""
    cache = curve._divpoly
    if m in cache:
        return cache[m]
    K = curve.field
    x = poly_x(K)
    a, b = curve.a, curve.b
    if m <= 4:
        seeds = {
            0: (Poly([], K), 0),
            1: (Poly([1], K), 0),
            2: (Poly([2], K), 1),
            3: (3 * x ** 4 + 6 * a * x ** 2 + 12 * b * x - a * a * Poly([1], K), 0),
            4: (4 * (x ** 6 + 5 * a * x ** 4 + 20 * b * x ** 3
                     - 5 * a * a * x ** 2 - 4 * a * b * x
                     - Poly([8 * b * b + a ** 3], K)), 1),
        }
        cache[m] = seeds[m]
        return cache[m]
    rhs = curve.rhs_poly()

    def mul(p1, p2):
        (f1, e1), (f2, e2) = p1, p2
        f = f1 * f2
        e = e1 + e2
        if e >= 2:
            f = f * rhs ** (e // 2)
            e = e % 2
        return (f, e)

    def sub(p1, p2):
        (f1, e1), (f2, e2) = p1, p2
        assert e1 == e2, "mixed y-parity in subtraction"
        return (f1 - f2, e1)

    k, r = divmod(m, 2)
    if r == 1:
        # psi_{2k+1} = psi_{k+2} psi_k^3 - psi_{k-1} psi_{k+1}^3
        t1 = mul(_divpoly_pair(curve, k + 2), mul(_divpoly_pair(curve, k),
                 mul(_divpoly_pair(curve, k), _divpoly_pair(curve, k))))
        t2 = mul(_divpoly_pair(curve, k - 1), mul(_divpoly_pair(curve, k + 1),
                 mul(_divpoly_pair(curve, k + 1), _divpoly_pair(curve, k + 1))))
        out = sub(t1, t2)
    else:
        # psi_{2k} = psi_k (psi_{k+2} psi_{k-1}^2 - psi_{k-2} psi_{k+1}^2) / (2y)
        t1 = mul(_divpoly_pair(curve, k + 2), mul(_divpoly_pair(curve, k - 1),
                 _divpoly_pair(curve, k - 1)))
        t2 = mul(_divpoly_pair(curve, k - 2), mul(_divpoly_pair(curve, k + 1),
                 _divpoly_pair(curve, k + 1)))
        f, e = mul(_divpoly_pair(curve, k), sub(t1, t2))
        # dividing an x-polynomial by 2y: pull out a factor y^2 = rhs
        assert e == 0, "unexpected y-parity in even division polynomial"
        q, rem = divmod(f, rhs)
        assert rem.is_zero(), "even division polynomial not divisible by y^2"
        out = (Fraction(1, 2) * q, 1)
    cache[m] = out
    return out


def division_polynomial(curve, m):
    """The division polynomial psi_m as a polynomial in x (odd m only)."""
    assert m % 2 == 1, "only odd division polynomials are pure x-polynomials"
    f, e = _divpoly_pair(curve, m)
    assert e == 0
    return f


class TorsionTable:
    """The rational n-torsion arranged as i*T1 + j*T2, (i, j) in lex order."""

    def __init__(self, curve, n, t1, t2):
        self.curve = curve
        self.n = n
        self.t1 = t1
        self.t2 = t2
        self.points = []
        for i in range(n):
            base = i * t1
            for j in range(n):
                self.points.append(base + j * t2)
        self._index = {}
        for k, p in enumerate(self.points):
            key = p.key()
            assert key not in self._index, "torsion basis is not independent"
            self._index[key] = divmod(k, n)

    def point(self, i, j):
        return self.points[(i % self.n) * self.n + (j % self.n)]

    def index(self, p):
        return self._index[p.key()]

    def zero(self):
        return self.points[0]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def nonzero(self):
        return self.points[1:]

    def neg_index(self, ij):
        i, j = ij
        return ((-i) % self.n, (-j) % self.n)

    def add_index(self, ij, kl):
        return ((ij[0] + kl[0]) % self.n, (ij[1] + kl[1]) % self.n)


def torsion_table(curve, n):
    """Find the full rational n-torsion and pick a deterministic basis.

    Raises TorsionNotRational(count) if fewer than n^2 points are rational
    (count includes O).  Basis: T1 is the first point of exact order n in
    the coordinate sort order, T2 the first outside the cycle of T1.
    """
    assert n >= 2
    psi = division_polynomial(curve, n)
    pts = [Point.at_infinity(curve)]
    for x0 in roots_in_field(psi, curve.field):
        ysq = curve.rhs(x0)
        x = poly_x(curve.field)
        for y0 in roots_in_field(x * x - ysq, curve.field):
            pts.append(Point(curve, x0, y0))
    # distinct roots, but a double root of psi or y^2 would duplicate
    seen = set()
    unique = []
    for p in pts:
        if p.key() not in seen:
            seen.add(p.key())
            unique.append(p)
    if len(unique) < n * n:
        raise TorsionNotRational(len(unique))
    assert len(unique) == n * n, "too many n-torsion points"
    affine = sorted(unique[1:], key=lambda p: p.key())
    t1 = None
    for p in affine:
        if p.order(bound=n) == n:
            t1 = p
            break
    assert t1 is not None, "no point of exact order n"
    cycle = set()
    acc = Point.at_infinity(curve)
    for _ in range(n):
        cycle.add(acc.key())
        acc = acc + t1
    t2 = None
    for p in affine:
        if p.key() not in cycle:
            t2 = p
            break
    assert t2 is not None and t2.order(bound=n) == n
    return TorsionTable(curve, n, t1, t2)
