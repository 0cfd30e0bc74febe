"""Exact linear algebra over the rationals or a prime field.

Everything here works on sparse vectors represented as dicts mapping a
hashable column key to a nonzero field element.  Coefficients are either
``fractions.Fraction`` (the default field) or ``PrimeFieldElement``; both
support the usual operators, so the elimination code is field agnostic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class RationalField:
    """The field of rational numbers, elements are ``Fraction``."""

    name = "Q"

    def from_int(self, n):
        return Fraction(n)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


@dataclass(frozen=True)
class PrimeFieldElement:
    value: int
    p: int

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise ValueError("mixed characteristic")
            return other
        if isinstance(other, int):
            return PrimeFieldElement(other % self.p, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return PrimeFieldElement((self.value + other.value) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return PrimeFieldElement((self.value - other.value) % self.p, self.p)

    def __neg__(self):
        return PrimeFieldElement(-self.value % self.p, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        return PrimeFieldElement((self.value * other.value) % self.p, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        inv = pow(other.value, -1, self.p)
        return PrimeFieldElement((self.value * inv) % self.p, self.p)

    def __bool__(self):
        return self.value % self.p != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


class PrimeField:
    def __init__(self, p):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})"

    def from_int(self, n):
        return PrimeFieldElement(n % self.p, self.p)

    @property
    def zero(self):
        return PrimeFieldElement(0, self.p)

    @property
    def one(self):
        return PrimeFieldElement(1, self.p)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()


def parse_field(spec):
    """Turn a CLI-style field spec ('q', 'rationals', or a prime) into a field."""
    if spec is None:
        return QQ
    text = str(spec).strip().lower()
    if text in ("q", "qq", "rationals", "rational", "0"):
        return QQ
    try:
        p = int(text)
    except ValueError:
        raise ValueError(f"unknown field {spec!r}") from None
    return PrimeField(p)


def vec_add_scaled(target, source, scale):
    """target += scale * source, in place, dropping zeros."""
    for key, val in source.items():
        new = target.get(key)
        new = scale * val if new is None else new + scale * val
        if new:
            target[key] = new
        elif key in target:
            del target[key]


class SparseEchelon:
    """Incremental row echelon form for sparse vectors.

    Pivots are chosen as the largest column key under ``sort_key``; rows are
    stored normalized so the pivot coefficient is one.
    """

    def __init__(self, sort_key=None):
        self.pivots = {}
        self.sort_key = sort_key or (lambda k: k)

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, vec):
        """Return vec reduced against all stored pivot rows (a fresh dict)."""
        vec = dict(vec)
        while vec:
            lead = max(vec, key=self.sort_key)
            row = self.pivots.get(lead)
            if row is None:
                return vec
            vec_add_scaled(vec, row, -vec[lead])
        return vec

    def add(self, vec):
        """Insert a vector; returns True if it enlarged the span."""
        red = self.reduce(vec)
        if not red:
            return False
        lead = max(red, key=self.sort_key)
        coeff = red[lead]
        self.pivots[lead] = {k: v / coeff for k, v in red.items()}
        return True

    def contains(self, vec):
        return not self.reduce(vec)


def rank_of(rows, sort_key=None):
    ech = SparseEchelon(sort_key)
    for row in rows:
        ech.add(row)
    return ech.rank


def nullspace(rows, nvars, field=QQ):
    """Basis of the right nullspace of the matrix given by sparse rows.

    Columns are the integers 0..nvars-1; returns a list of dense-as-dict
    solution vectors.
    """
    ech = SparseEchelon()
    for row in rows:
        ech.add(row)
    pivot_cols = set(ech.pivots)
    basis = []
    # Solve for each free column by back substitution against the
    # reduced pivot rows.
    reduced = _back_substitute(ech)
    for col in range(nvars):
        if col in pivot_cols:
            continue
        sol = {col: field.one}
        for pcol, row in reduced.items():
            val = row.get(col)
            if val:
                sol[pcol] = -val
        basis.append(sol)
    return basis


def _back_substitute(ech):
    """Fully reduce the echelon rows against each other (RREF)."""
    reduced = {}
    for pcol in sorted(ech.pivots, key=ech.sort_key):
        row = dict(ech.pivots[pcol])
        for key in [k for k in row if k != pcol]:
            sub = reduced.get(key)
            if sub is not None:
                vec_add_scaled(row, sub, -row[key])
        reduced[pcol] = row
    return reduced


def solve_dense(matrix, rhs, field=QQ):
    """Solve matrix * x = rhs for small dense systems; None if inconsistent.

    ``matrix`` is a list of rows (lists of field elements), ``rhs`` a list.
    Returns one solution as a list (free variables set to zero).
    """
    m = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    nrows = len(m)
    ncols = len(matrix[0]) if matrix else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if m[i][ncols]:
            return None
    x = [field.zero] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][ncols]
    return x


def det_int(rows):
    """Determinant of a square integer matrix, exact."""
    n = len(rows)
    m = [[Fraction(v) for v in row] for row in rows]
    det = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c]), None)
        if pr is None:
            return 0
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    assert det.denominator == 1
    return int(det)
