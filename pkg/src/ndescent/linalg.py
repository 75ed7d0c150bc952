"""Exact linear algebra over field towers.

Matrices hold FieldElement entries, all lifted to one common tower at
construction.  Everything runs Gauss-Jordan with exact division.
"""

from fractions import Fraction

from .fields import FieldTower, FieldElement


class NoSolution(Exception):
    pass


def _common_tower(entries):
    tower = None
    for e in entries:
        if not isinstance(e, FieldElement):
            continue
        if tower is None or tower.is_prefix_of(e.tower):
            tower = e.tower
        else:
            assert e.tower.is_prefix_of(tower), "entries from incompatible towers"
    return tower if tower is not None else FieldTower.rationals()


def _lift_entry(e, tower):
    if isinstance(e, FieldElement):
        return e.lift_to(tower)
    return tower.from_fraction(Fraction(e) if isinstance(e, int) else e)


class ExactMatrix:

    __slots__ = ("tower", "nrows", "ncols", "rows")

    def __init__(self, rows, tower=None):
        rows = [list(r) for r in rows]
        assert rows and rows[0], "matrix needs at least one row and column"
        ncols = len(rows[0])
        assert all(len(r) == ncols for r in rows), "ragged rows"
        if tower is None:
            tower = _common_tower(e for r in rows for e in r)
        self.tower = tower
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = [[_lift_entry(e, tower) for e in r] for r in rows]

    @staticmethod
    def identity(n, tower):
        one, zero = tower.one(), tower.zero()
        return ExactMatrix([[one if i == j else zero for j in range(n)] for i in range(n)], tower)

    @staticmethod
    def zero(nrows, ncols, tower):
        z = tower.zero()
        return ExactMatrix([[z] * ncols for _ in range(nrows)], tower)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def col(self, j):
        return [r[j] for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.nrows != other.nrows or self.ncols != other.ncols:
            return False
        return all(self.rows[i][j] == other.rows[i][j]
                   for i in range(self.nrows) for j in range(self.ncols))

    def __add__(self, other):
        assert self.nrows == other.nrows and self.ncols == other.ncols
        return ExactMatrix([[a + b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        assert self.nrows == other.nrows and self.ncols == other.ncols
        return ExactMatrix([[a - b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return ExactMatrix([[-a for a in r] for r in self.rows], self.tower)

    def scale(self, c):
        return ExactMatrix([[c * a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            assert self.ncols == other.nrows, "dimension mismatch"
            out = []
            for i in range(self.nrows):
                row = []
                for j in range(other.ncols):
                    s = None
                    for k in range(self.ncols):
                        t = self.rows[i][k] * other.rows[k][j]
                        s = t if s is None else s + t
                    row.append(s)
                out.append(row)
            return ExactMatrix(out)
        return NotImplemented

    def mat_vec(self, v):
        assert len(v) == self.ncols
        out = []
        for i in range(self.nrows):
            s = None
            for k in range(self.ncols):
                t = self.rows[i][k] * v[k]
                s = t if s is None else s + t
            out.append(s)
        return out

    def transpose(self):
        return ExactMatrix([[self.rows[i][j] for i in range(self.nrows)]
                            for j in range(self.ncols)], self.tower)

    def trace(self):
        assert self.nrows == self.ncols
        s = self.tower.zero()
        for i in range(self.nrows):
            s = s + self.rows[i][i]
        return s

    def is_zero(self):
        return all(e.is_zero() for r in self.rows for e in r)

    def copy_rows(self):
        return [list(r) for r in self.rows]

    def _rref(self):
        """Reduced row echelon form; returns (rows, pivot column list)."""
        rows = self.copy_rows()
        pivots = []
        r = 0
        for c in range(self.ncols):
            pr = None
            for i in range(r, self.nrows):
                if not rows[i][c].is_zero():
                    pr = i
                    break
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            inv = rows[r][c].inverse()
            rows[r] = [inv * e for e in rows[r]]
            for i in range(self.nrows):
                if i == r or rows[i][c].is_zero():
                    continue
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return rows, pivots

    def rank(self):
        return len(self._rref()[1])

    def kernel_basis(self):
        """Basis of the right kernel, one vector per free column, in
        ascending free-column order."""
        rows, pivots = self._rref()
        pivot_set = set(pivots)
        zero, one = self.tower.zero(), self.tower.one()
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            v = [zero] * self.ncols
            v[free] = one
            for r, pc in enumerate(pivots):
                v[pc] = -rows[r][free]
            basis.append(v)
        return basis

    def solve(self, b):
        """One solution of A x = b (free variables zero); NoSolution if none."""
        assert len(b) == self.nrows
        b = [_lift_entry(e, self.tower) for e in b]
        aug = ExactMatrix([self.rows[i] + [b[i]] for i in range(self.nrows)], self.tower)
        rows, pivots = aug._rref()
        if pivots and pivots[-1] == self.ncols:
            raise NoSolution("inconsistent linear system")
        x = [self.tower.zero()] * self.ncols
        for r, pc in enumerate(pivots):
            x[pc] = rows[r][self.ncols]
        return x

    def inverse(self):
        assert self.nrows == self.ncols, "only square matrices invert"
        n = self.nrows
        ident = ExactMatrix.identity(n, self.tower)
        aug = ExactMatrix([self.rows[i] + ident.rows[i] for i in range(n)], self.tower)
        rows, pivots = aug._rref()
        if pivots[:n] != list(range(n)):
            raise NoSolution("matrix is singular")
        return ExactMatrix([r[n:] for r in rows[:n]], self.tower)

    def det(self):
        assert self.nrows == self.ncols
        rows = self.copy_rows()
        n = self.nrows
        det = self.tower.one()
        for c in range(n):
            pr = None
            for i in range(c, n):
                if not rows[i][c].is_zero():
                    pr = i
                    break
            if pr is None:
                return self.tower.zero()
            if pr != c:
                rows[c], rows[pr] = rows[pr], rows[c]
                det = -det
            det = det * rows[c][c]
            inv = rows[c][c].inverse()
            for i in range(c + 1, n):
                if rows[i][c].is_zero():
                    continue
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        return det

    def __repr__(self):
        return "ExactMatrix(%d x %d over %r)" % (self.nrows, self.ncols, self.tower)


def solve_linear(matrix, b):
    return matrix.solve(b)


def kernel_basis(matrix):
    return matrix.kernel_basis()
