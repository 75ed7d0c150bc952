"""Exact arithmetic in towers of number fields over Q.

A tower is a chain Q = K_0 < K_1 < ... < K_r where each level is a
monogenic extension K_i = K_{i-1}[t]/(m_i(t)) with m_i monic and
irreducible over the level below.  Elements are nested coefficient
lists with Fraction leaves, so every comparison is exact.
"""

from fractions import Fraction

import sympy


class ReducibleExtension(Exception):
    """Raised by tower_extend when the proposed minimal polynomial factors.

    Carries .factor, a monic irreducible factor (list of coefficients over
    the base tower, ascending) that the caller may extend by instead.
    """

    def __init__(self, factor):
        self.factor = factor
        deg = len(factor) - 1
        super().__init__("minimal polynomial is reducible; a degree-%d factor is available" % deg)


def _fr(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError("expected int or Fraction, got %r" % type(x))


# ---------------------------------------------------------------------------
# nested coefficient data
#
# A datum at level 0 is a Fraction.  A datum at level k > 0 is a list of
# exactly tower.degrees[k-1] data at level k-1.  All data are kept at full
# fixed shape, so structural equality coincides with field equality.
# ---------------------------------------------------------------------------

def _dzero(tw, lvl):
    if lvl == 0:
        return Fraction(0)
    return [_dzero(tw, lvl - 1) for _ in range(tw.degrees[lvl - 1])]


def _done(tw, lvl):
    if lvl == 0:
        return Fraction(1)
    out = _dzero(tw, lvl)
    out[0] = _done(tw, lvl - 1)
    return out


def _dfrom_fraction(tw, lvl, q):
    if lvl == 0:
        return q
    out = _dzero(tw, lvl)
    out[0] = _dfrom_fraction(tw, lvl - 1, q)
    return out


def _dis0(tw, lvl, a):
    if lvl == 0:
        return a == 0
    return all(_dis0(tw, lvl - 1, c) for c in a)


def _dadd(tw, lvl, a, b):
    if lvl == 0:
        return a + b
    return [_dadd(tw, lvl - 1, x, y) for x, y in zip(a, b)]


def _dsub(tw, lvl, a, b):
    if lvl == 0:
        return a - b
    return [_dsub(tw, lvl - 1, x, y) for x, y in zip(a, b)]


def _dneg(tw, lvl, a):
    if lvl == 0:
        return -a
    return [_dneg(tw, lvl - 1, c) for c in a]


def _dmul(tw, lvl, a, b):
    if lvl == 0:
        return a * b
    d = tw.degrees[lvl - 1]
    prod = [_dzero(tw, lvl - 1) for _ in range(2 * d - 1)]
    for i, ai in enumerate(a):
        if _dis0(tw, lvl - 1, ai):
            continue
        for j, bj in enumerate(b):
            if _dis0(tw, lvl - 1, bj):
                continue
            prod[i + j] = _dadd(tw, lvl - 1, prod[i + j], _dmul(tw, lvl - 1, ai, bj))
    # reduce modulo the monic minimal polynomial of this level
    tail = tw._mintails[lvl - 1]
    for i in range(2 * d - 2, d - 1, -1):
        c = prod[i]
        if _dis0(tw, lvl - 1, c):
            continue
        for j in range(d):
            prod[i - d + j] = _dsub(tw, lvl - 1, prod[i - d + j],
                                    _dmul(tw, lvl - 1, c, tail[j]))
    return prod[:d]


def _dinv(tw, lvl, a):
    if lvl == 0:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a
    if _dis0(tw, lvl, a):
        raise ZeroDivisionError("inverse of zero")
    # extended Euclid against the minimal polynomial, one level down
    m = list(tw.levels[lvl - 1][1])
    p = _pstrip(tw, lvl - 1, list(a))
    g, s = _pxgcd_first(tw, lvl - 1, p, m)
    assert _pdeg(g) == 0, "minimal polynomial not irreducible over its base"
    ginv = _dinv(tw, lvl - 1, g[0])
    out = [_dmul(tw, lvl - 1, ginv, c) for c in s]
    out = out[: tw.degrees[lvl - 1]]
    while len(out) < tw.degrees[lvl - 1]:
        out.append(_dzero(tw, lvl - 1))
    return out


def _dflatten(tw, lvl, a, out):
    if lvl == 0:
        out.append(a)
        return
    for c in a:
        _dflatten(tw, lvl - 1, c, out)


def _dunflatten(tw, lvl, flat, pos):
    if lvl == 0:
        return _fr(flat[pos]), pos + 1
    out = []
    for _ in range(tw.degrees[lvl - 1]):
        c, pos = _dunflatten(tw, lvl - 1, flat, pos)
        out.append(c)
    return out, pos


def _dlift(tw, from_lvl, to_lvl, a):
    """Embed a datum of a prefix level as a constant at a higher level."""
    for lvl in range(from_lvl, to_lvl):
        wrapped = [a]
        for _ in range(tw.degrees[lvl] - 1):
            wrapped.append(_dzero(tw, lvl))
        a = wrapped
    return a


def _dcopy(a):
    if isinstance(a, Fraction):
        return a
    return [_dcopy(c) for c in a]


def _dsplit(tw, lvl, base_lvl, a, out):
    if lvl == base_lvl:
        out.append(_dcopy(a))
        return
    for c in a:
        _dsplit(tw, lvl - 1, base_lvl, c, out)


# ---------------------------------------------------------------------------
# dense polynomials whose coefficients are data at a fixed level
# (ascending coefficient lists, stripped of leading zeros)
# ---------------------------------------------------------------------------

def _pstrip(tw, lvl, p):
    while p and _dis0(tw, lvl, p[-1]):
        p.pop()
    return p


def _pdeg(p):
    return len(p) - 1


def _padd(tw, lvl, p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else _dzero(tw, lvl)
        b = q[i] if i < len(q) else _dzero(tw, lvl)
        out.append(_dadd(tw, lvl, a, b))
    return _pstrip(tw, lvl, out)


def _psub(tw, lvl, p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else _dzero(tw, lvl)
        b = q[i] if i < len(q) else _dzero(tw, lvl)
        out.append(_dsub(tw, lvl, a, b))
    return _pstrip(tw, lvl, out)


def _pmul(tw, lvl, p, q):
    if not p or not q:
        return []
    out = [_dzero(tw, lvl) for _ in range(len(p) + len(q) - 1)]
    for i, a in enumerate(p):
        if _dis0(tw, lvl, a):
            continue
        for j, b in enumerate(q):
            out[i + j] = _dadd(tw, lvl, out[i + j], _dmul(tw, lvl, a, b))
    return _pstrip(tw, lvl, out)


def _pscal(tw, lvl, c, p):
    return _pstrip(tw, lvl, [_dmul(tw, lvl, c, a) for a in p])


def _pdivmod(tw, lvl, p, q):
    assert q, "polynomial division by zero"
    inv_lc = _dinv(tw, lvl, q[-1])
    rem = list(p)
    quot = [_dzero(tw, lvl) for _ in range(max(0, len(p) - len(q) + 1))]
    while len(rem) >= len(q) and rem:
        rem = _pstrip(tw, lvl, rem)
        if len(rem) < len(q):
            break
        c = _dmul(tw, lvl, rem[-1], inv_lc)
        k = len(rem) - len(q)
        quot[k] = c
        for j in range(len(q)):
            rem[k + j] = _dsub(tw, lvl, rem[k + j], _dmul(tw, lvl, c, q[j]))
        rem.pop()
    return _pstrip(tw, lvl, quot), _pstrip(tw, lvl, rem)


def _pmonic(tw, lvl, p):
    if not p:
        return p
    inv = _dinv(tw, lvl, p[-1])
    return _pscal(tw, lvl, inv, p)


def _pgcd(tw, lvl, p, q):
    p, q = list(p), list(q)
    while q:
        _, r = _pdivmod(tw, lvl, p, q)
        p, q = q, r
    return _pmonic(tw, lvl, p)


def _pxgcd_first(tw, lvl, p, q):
    """Return (g, s) with s*p = g mod q, g a gcd of p and q (not normalized)."""
    r0, r1 = list(p), list(q)
    s0, s1 = [_done(tw, lvl)], []
    while r1:
        quo, rem = _pdivmod(tw, lvl, r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _psub(tw, lvl, s0, _pmul(tw, lvl, quo, s1))
    return r0, s0


def _pderiv(tw, lvl, p):
    out = []
    for i in range(1, len(p)):
        out.append(_dmul(tw, lvl, _dfrom_fraction(tw, lvl, Fraction(i)), p[i]))
    return _pstrip(tw, lvl, out)


def _peval(tw, lvl, p, x):
    acc = _dzero(tw, lvl)
    for c in reversed(p):
        acc = _dadd(tw, lvl, _dmul(tw, lvl, acc, x), c)
    return acc


# ---------------------------------------------------------------------------
# towers and elements
# ---------------------------------------------------------------------------

class FieldTower:
    """A number field presented as a tower of monogenic extensions of Q.

    levels: tuple of (generator name, minimal polynomial) where the
    minimal polynomial is a monic coefficient list (ascending) of data
    one level down.  Irreducibility is certified at construction.
    """

    def __init__(self, levels=(), _trusted=False):
        self.levels = tuple((name, tuple(_dcopy(c) for c in mp)) for name, mp in levels)
        self.degrees = tuple(len(mp) - 1 for _, mp in self.levels)
        self.degree = 1
        for d in self.degrees:
            self.degree *= d
        # tails m_0..m_{d-1} of each monic minimal polynomial, for reduction
        self._mintails = [list(mp[:-1]) for _, mp in self.levels]
        if not _trusted:
            for i in range(len(self.levels)):
                prefix = FieldTower(self.levels[:i], _trusted=True)
                mp = [_dcopy(c) for c in self.levels[i][1]]
                if not _is_irreducible(prefix, mp):
                    raise ValueError("level %d minimal polynomial is reducible" % (i + 1))

    @staticmethod
    def rationals():
        return FieldTower(())

    @property
    def nlevels(self):
        return len(self.levels)

    def zero(self):
        return FieldElement(self, _dzero(self, self.nlevels))

    def one(self):
        return FieldElement(self, _done(self, self.nlevels))

    def from_fraction(self, q):
        return FieldElement(self, _dfrom_fraction(self, self.nlevels, _fr(q)))

    def gen(self, i=-1):
        """The generator of level i (default: the top level)."""
        if i < 0:
            i += self.nlevels
        assert 0 <= i < self.nlevels, "no such level"
        g = _dzero(self, i + 1)
        g[1] = _done(self, i)
        return FieldElement(self, _dlift(self, i + 1, self.nlevels, g))

    def element(self, flat):
        """Build an element from its flattened coordinate vector over Q."""
        assert len(flat) == self.degree, "coordinate vector has wrong length"
        data, pos = _dunflatten(self, self.nlevels, list(flat), 0)
        return FieldElement(self, data)

    def __eq__(self, other):
        if not isinstance(other, FieldTower):
            return NotImplemented
        return self.levels == other.levels

    def __hash__(self):
        return hash(self.nlevels) ^ hash(self.degrees)

    def is_prefix_of(self, other):
        return self.levels == other.levels[: self.nlevels]

    def __repr__(self):
        if not self.levels:
            return "FieldTower(Q)"
        return "FieldTower(Q(%s), degree %d)" % (", ".join(n for n, _ in self.levels), self.degree)


class FieldElement:
    """An element of a FieldTower; all arithmetic is exact."""

    __slots__ = ("tower", "_data")

    def __init__(self, tower, data):
        self.tower = tower
        self._data = data

    # -- coercion ----------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            return self, self.tower.from_fraction(other)
        if isinstance(other, FieldElement):
            if self.tower is other.tower or self.tower == other.tower:
                return self, other
            if self.tower.is_prefix_of(other.tower):
                lifted = _dlift(other.tower, self.tower.nlevels, other.tower.nlevels, self._data)
                return FieldElement(other.tower, lifted), other
            if other.tower.is_prefix_of(self.tower):
                lifted = _dlift(self.tower, other.tower.nlevels, self.tower.nlevels, other._data)
                return self, FieldElement(self.tower, lifted)
            raise ValueError("elements of incompatible towers")
        return self, None

    def lift_to(self, tower):
        """Reinterpret in a tower having this element's tower as a prefix."""
        if self.tower == tower:
            return FieldElement(tower, self._data)
        assert self.tower.is_prefix_of(tower), "not a prefix tower"
        return FieldElement(tower, _dlift(tower, self.tower.nlevels, tower.nlevels, self._data))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        tw = a.tower
        return FieldElement(tw, _dadd(tw, tw.nlevels, a._data, b._data))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        tw = a.tower
        return FieldElement(tw, _dsub(tw, tw.nlevels, a._data, b._data))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElement(self.tower, _dneg(self.tower, self.tower.nlevels, self._data))

    def __mul__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        tw = a.tower
        return FieldElement(tw, _dmul(tw, tw.nlevels, a._data, b._data))

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        tw = a.tower
        return FieldElement(tw, _dmul(tw, tw.nlevels, a._data, _dinv(tw, tw.nlevels, b._data)))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def inverse(self):
        tw = self.tower
        return FieldElement(tw, _dinv(tw, tw.nlevels, self._data))

    def __pow__(self, k):
        assert isinstance(k, int)
        if k < 0:
            return self.inverse() ** (-k)
        out = self.tower.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return _dis0(self.tower, self.tower.nlevels, self._data)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            try:
                a, b = self._pair(other)
            except ValueError:
                return False
            return a._data == b._data
        return NotImplemented

    def __hash__(self):
        flat = self.flatten()
        while flat and flat[-1] == 0:
            flat.pop()
        return hash(tuple(flat))

    def flatten(self):
        """Coordinate vector over Q, outermost generator most significant."""
        out = []
        _dflatten(self.tower, self.tower.nlevels, self._data, out)
        return out

    def coords_over(self, subtower):
        """Coordinates over a prefix tower, as a list of its elements.
        The list runs over the basis monomials in the generators above
        the subtower, innermost generator fastest."""
        assert subtower.is_prefix_of(self.tower), "not a prefix tower"
        data = []
        _dsplit(self.tower, self.tower.nlevels, subtower.nlevels, self._data, data)
        return [FieldElement(subtower, d) for d in data]

    def key(self):
        """Deterministic sort key: the flattened coordinate vector."""
        return tuple(self.flatten())

    def as_fraction(self):
        """The value as a Fraction; raises if not rational."""
        flat = self.flatten()
        assert all(c == 0 for c in flat[1:]), "element is not rational"
        return flat[0]

    def __repr__(self):
        names = [n for n, _ in self.tower.levels]
        return "FieldElement(%s)" % _data_str(self.tower, self.tower.nlevels, self._data, names)


def _data_str(tw, lvl, a, names):
    if lvl == 0:
        return str(a)
    terms = []
    for i, c in enumerate(a):
        if _dis0(tw, lvl - 1, c):
            continue
        cs = _data_str(tw, lvl - 1, c, names)
        if i == 0:
            terms.append(cs)
        else:
            mono = names[lvl - 1] if i == 1 else "%s^%d" % (names[lvl - 1], i)
            terms.append("(%s)*%s" % (cs, mono))
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# public polynomials over a tower
# ---------------------------------------------------------------------------

class Poly:
    """Dense univariate polynomial with FieldElement coefficients."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, coeffs, tower=None):
        elems = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                elems.append(c)
            else:
                elems.append(_fr(c))
        towers = [c.tower for c in elems if isinstance(c, FieldElement)]
        if tower is None:
            if not towers:
                tower = FieldTower.rationals()
            else:
                tower = towers[0]
                for t in towers[1:]:
                    if tower.is_prefix_of(t):
                        tower = t
                    else:
                        assert t.is_prefix_of(tower), "coefficients from incompatible towers"
        final = []
        for c in elems:
            if isinstance(c, FieldElement):
                final.append(c.lift_to(tower))
            else:
                final.append(tower.from_fraction(c))
        while final and final[-1].is_zero():
            final.pop()
        self.tower = tower
        self.coeffs = tuple(final)

    @staticmethod
    def _from_data(tower, data_list):
        return Poly([FieldElement(tower, d) for d in data_list], tower)

    def _data(self):
        return [c._data for c in self.coeffs]

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        assert self.coeffs, "zero polynomial has no leading coefficient"
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.lc() == 1

    def coeff(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.tower.zero()

    def _pair(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            other = Poly([other], None if isinstance(other, (int, Fraction)) else other.tower)
        if not isinstance(other, Poly):
            return None, None
        if self.tower is other.tower or self.tower == other.tower:
            return self, other
        if self.tower.is_prefix_of(other.tower):
            return self.lift_to(other.tower), other
        if other.tower.is_prefix_of(self.tower):
            return self, other.lift_to(self.tower)
        raise ValueError("polynomials over incompatible towers")

    def lift_to(self, tower):
        return Poly([c.lift_to(tower) for c in self.coeffs], tower)

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        tw = a.tower
        return Poly._from_data(tw, _padd(tw, tw.nlevels, a._data(), b._data()))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        tw = a.tower
        return Poly._from_data(tw, _psub(tw, tw.nlevels, a._data(), b._data()))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.tower)

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        tw = a.tower
        return Poly._from_data(tw, _pmul(tw, tw.nlevels, a._data(), b._data()))

    __rmul__ = __mul__

    def __divmod__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        assert not b.is_zero(), "polynomial division by zero"
        tw = a.tower
        q, r = _pdivmod(tw, tw.nlevels, a._data(), b._data())
        return Poly._from_data(tw, q), Poly._from_data(tw, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, k):
        assert isinstance(k, int) and k >= 0
        out = Poly([1], self.tower)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(tuple(c.key() for c in self.coeffs))

    def monic(self):
        if self.is_zero():
            return self
        inv = self.lc().inverse()
        return Poly([c * inv for c in self.coeffs], self.tower)

    def derivative(self):
        tw = self.tower
        return Poly._from_data(tw, _pderiv(tw, tw.nlevels, self._data()))

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            x = self.tower.from_fraction(x)
        if isinstance(x, FieldElement):
            a, xe = (self, x) if self.tower == x.tower else self._call_pair(x)
            tw = a.tower
            return FieldElement(tw, _peval(tw, tw.nlevels, a._data(), xe._data))
        # generic Horner for ring-like arguments (series, functions, polys)
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return self.tower.zero()
        return acc

    def _call_pair(self, x):
        if self.tower.is_prefix_of(x.tower):
            return self.lift_to(x.tower), x
        assert x.tower.is_prefix_of(self.tower)
        return self, x.lift_to(self.tower)

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if c.is_zero():
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else "x^%d" % i)
            parts.append("(%r)*%s" % (c, mono))
        return "Poly(%s)" % " + ".join(parts)


def poly_gcd(p, q):
    a, b = p._pair(q)
    tw = a.tower
    return Poly._from_data(tw, _pgcd(tw, tw.nlevels, a._data(), b._data()))


def poly_x(tower):
    return Poly([tower.zero(), tower.one()], tower)


# ---------------------------------------------------------------------------
# factorization: sympy over Q, Trager's norm method up each tower level
# ---------------------------------------------------------------------------

_X = sympy.Symbol("x")


def _factor_rational(p):
    """Factor a nonzero poly (list of Fractions, ascending) into monic
    irreducibles; returns a list of (coeff list, multiplicity)."""
    spoly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p)],
                       _X, domain="QQ")
    _, factors = spoly.factor_list()
    out = []
    for f, mult in factors:
        cs = [Fraction(c.numerator, c.denominator) for c in reversed(f.all_coeffs())]
        lc = cs[-1]
        cs = [c / lc for c in cs]
        out.append((cs, mult))
    return out


def _resultant(tw, lvl, a, b):
    """Resultant of two data-polys at a level, via the Euclidean recursion.
    With a monic this is the product of b over the roots of a."""
    a = _pstrip(tw, lvl, list(a))
    b = _pstrip(tw, lvl, list(b))
    res = _done(tw, lvl)
    while True:
        if not a:
            return _dzero(tw, lvl)
        if _pdeg(a) == 0:
            return _dmul(tw, lvl, res, _dpow(tw, lvl, a[0], _pdeg(b) if b else 0))
        if not b:
            return _dzero(tw, lvl)
        if _pdeg(b) == 0:
            return _dmul(tw, lvl, res, _dpow(tw, lvl, b[0], _pdeg(a)))
        _, r = _pdivmod(tw, lvl, b, a)
        # res(a,b) = lc(a)^(deg b - deg r) * (-1)^(deg a * deg r) * res(r, a)
        res = _dmul(tw, lvl, res, _dpow(tw, lvl, a[-1], _pdeg(b) - _pdeg(r)))
        if (_pdeg(a) * max(_pdeg(r), 0)) % 2 == 1:
            res = _dneg(tw, lvl, res)
        a, b = _pstrip(tw, lvl, list(r)), a


def _dpow(tw, lvl, a, k):
    out = _done(tw, lvl)
    for _ in range(k):
        out = _dmul(tw, lvl, out, a)
    return out


def _norm_poly(tw, lvl, g):
    """Norm of a monic data-poly g at level lvl down to level lvl-1,
    computed by evaluation at rational points and Lagrange interpolation."""
    d = tw.degrees[lvl - 1]
    D = _pdeg(g) * d
    xs = []
    v = 0
    while len(xs) < D + 1:
        xs.append(Fraction(v))
        v = -v if v > 0 else -v + 1
    vals = []
    m = list(tw.levels[lvl - 1][1])
    for c in xs:
        cd = _dfrom_fraction(tw, lvl, c)
        gc = _peval(tw, lvl, g, cd)
        # gc is a datum at lvl = a poly in the level generator over lvl-1
        vals.append(_resultant(tw, lvl - 1, m, _pstrip(tw, lvl - 1, list(gc))))
    # Lagrange interpolation over level lvl-1 with rational nodes
    out = []
    for i, (xi, yi) in enumerate(zip(xs, vals)):
        num = [_done(tw, lvl - 1)]
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if i == j:
                continue
            num = _pmul(tw, lvl - 1, num,
                        [_dfrom_fraction(tw, lvl - 1, -xj), _done(tw, lvl - 1)])
            den *= xi - xj
        scale = _dmul(tw, lvl - 1, yi, _dfrom_fraction(tw, lvl - 1, 1 / den))
        out = _padd(tw, lvl - 1, out, _pscal(tw, lvl - 1, scale, num))
    return out


def _sqfree_parts(tw, lvl, f):
    """Yun's squarefree decomposition of a monic data-poly: [(part, mult)]."""
    fp = _pderiv(tw, lvl, f)
    a = _pgcd(tw, lvl, f, fp)
    if _pdeg(a) == 0:
        return [(f, 1)]
    b, _ = _pdivmod(tw, lvl, f, a)
    c, _ = _pdivmod(tw, lvl, fp, a)
    d = _psub(tw, lvl, c, _pderiv(tw, lvl, b))
    out = []
    i = 1
    while _pdeg(b) > 0:
        p = _pgcd(tw, lvl, b, d)
        if _pdeg(p) > 0:
            out.append((p, i))
        b, _ = _pdivmod(tw, lvl, b, p)
        c, _ = _pdivmod(tw, lvl, d, p)
        d = _psub(tw, lvl, c, _pderiv(tw, lvl, b))
        i += 1
    return out


def _shift_by_gen(tw, lvl, f, s):
    """Substitute x -> x + s*theta into f (data-poly at level lvl >= 1)."""
    theta = _dzero(tw, lvl)
    theta[1] = _done(tw, lvl - 1)
    shift = _dmul(tw, lvl, _dfrom_fraction(tw, lvl, Fraction(s)), theta)
    lin = [shift, _done(tw, lvl)]  # x + s*theta
    acc = []
    for c in reversed(f):
        acc = _pmul(tw, lvl, acc, lin)
        acc = _padd(tw, lvl, acc, [c])
    return acc


def _factor_data(tw, lvl, f):
    """Factor a nonzero data-poly into monic irreducibles: [(poly, mult)]."""
    f = _pmonic(tw, lvl, _pstrip(tw, lvl, list(f)))
    if _pdeg(f) == 0:
        return []
    if lvl == 0:
        return [( [c for c in cs], m) for cs, m in _factor_rational(f)]
    out = []
    for part, mult in _sqfree_parts(tw, lvl, f):
        if _pdeg(part) == 1:
            out.append((part, mult))
            continue
        s = 0
        while True:
            shifted = _shift_by_gen(tw, lvl, part, -s)
            norm = _norm_poly(tw, lvl, shifted)
            dn = _pderiv(tw, lvl - 1, norm)
            if _pdeg(_pgcd(tw, lvl - 1, norm, dn)) == 0:
                break
            s = -s if s > 0 else -s + 1
        subfactors = _factor_data(tw, lvl - 1, norm)
        if len(subfactors) == 1 and subfactors[0][1] == 1:
            out.append((part, mult))
            continue
        remaining = part
        for q, _m in subfactors:
            lifted = [_dlift(tw, lvl - 1, lvl, c) for c in q]
            qshift = _shift_by_gen(tw, lvl, lifted, s)
            h = _pgcd(tw, lvl, remaining, qshift)
            if _pdeg(h) >= 1:
                out.append((h, mult))
                remaining, rem = _pdivmod(tw, lvl, remaining, h)
                assert not rem
        assert _pdeg(remaining) == 0, "norm factorization did not recombine"
    return out


def factor_poly(poly, field=None):
    """Factor a Poly over a tower into monic irreducibles.

    Returns a list of (Poly, multiplicity), sorted deterministically
    (degree first, then coefficient key).  The leading unit is dropped.
    """
    if field is not None and poly.tower != field:
        poly = poly.lift_to(field)
    tw = poly.tower
    assert not poly.is_zero(), "cannot factor the zero polynomial"
    factors = _factor_data(tw, tw.nlevels, poly._data())
    out = [(Poly._from_data(tw, f), m) for f, m in factors]
    out.sort(key=lambda fm: (fm[0].degree, [c.key() for c in fm[0].coeffs]))
    return out


def roots_in_field(poly, field=None):
    """All roots of poly lying in the field, with multiplicity, sorted."""
    roots = []
    for f, mult in factor_poly(poly, field):
        if f.degree == 1:
            roots.extend([-f.coeff(0)] * mult)
    roots.sort(key=lambda r: r.key())
    return roots


def _is_irreducible(tower, data_poly):
    factors = _factor_data(tower, tower.nlevels, list(data_poly))
    return len(factors) == 1 and factors[0][1] == 1 and \
        _pdeg(factors[0][0]) == _pdeg(_pstrip(tower, tower.nlevels, list(data_poly)))


def tower_extend(base, minpoly, name=None):
    """Extend a tower by a monic irreducible polynomial.

    minpoly: Poly over base (or list of coefficients).  Raises
    ReducibleExtension carrying an irreducible factor if it splits.
    """
    if not isinstance(minpoly, Poly):
        minpoly = Poly(minpoly, base)
    elif minpoly.tower != base:
        minpoly = minpoly.lift_to(base)
    assert minpoly.degree >= 1, "minimal polynomial must be nonconstant"
    assert minpoly.is_monic(), "minimal polynomial must be monic"
    factors = factor_poly(minpoly, base)
    if len(factors) != 1 or factors[0][1] != 1:
        raise ReducibleExtension(list(factors[0][0].coeffs))
    if name is None:
        name = "t%d" % (base.nlevels + 1)
    levels = list(base.levels) + [(name, tuple(minpoly._data()))]
    return FieldTower(levels, _trusted=True)
