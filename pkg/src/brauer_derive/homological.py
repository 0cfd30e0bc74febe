"""Bounded complexes of projectives and homotopy-category computations.

Complexes are cohomological (differentials raise degree).  A homomorphism
P(i) -> P(j) is an element of the block e_i A e_j acting by right
multiplication, so composing maps concatenates the underlying paths in
application order.  Differential and chain-map matrices are stored with one
row per summand of the higher (respectively target) term and one column per
summand of the lower (source) term; entry [r][c] lives in the block from the
column vertex to the row vertex.

Homotopy Hom spaces are computed by two exact rank computations: the
solution space of the chain-map conditions and the image of the homotopy map
s -> ds + sd inside it.  ``minimize`` strips contractible two-term pieces by
Gaussian elimination on differential entries that are units of the local
endomorphism rings.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraElement, CartanMatrix, QuotientAlgebra
from .linalg import SparseEchelon, nullspace, solve_dense


class NotAComplex(Exception):
    """d following d is nonzero; the message names the degree and entry."""


@dataclass(frozen=True)
class ProjSummand:
    vertex: str
    multiplicity: int = 1


@dataclass(frozen=True)
class HomotopyHom:
    dimension: int
    _reps: tuple

    @property
    def basis(self):
        return self._reps


class ProjComplex:
    """Bounded complex of direct sums of indecomposable projectives."""

    def __init__(self, algebra, terms, diffs):
        self.algebra = algebra
        self.terms = {n: tuple(t) for n, t in sorted(terms.items()) if t}
        self.diffs = {}
        for n in sorted(diffs):
            matrix = diffs[n]
            if n not in self.terms or (n + 1) not in self.terms or matrix is None:
                continue
            if any(e is not None and not e.is_zero() for row in matrix for e in row):
                self.diffs[n] = tuple(tuple(row) for row in matrix)

    @staticmethod
    def stalk(algebra, vertex, degree=0):
        return ProjComplex(algebra, {degree: (vertex,)}, {})

    def degrees(self):
        return sorted(self.terms)

    def term(self, n):
        return self.terms.get(n, ())

    def diff(self, n):
        return self.diffs.get(n)

    def entry(self, n, r, c):
        matrix = self.diffs.get(n)
        if matrix is None:
            return None
        return matrix[r][c]

    @property
    def width(self):
        degs = self.degrees()
        return degs[-1] - degs[0] if degs else 0

    def is_zero(self):
        return not self.terms

    def summands(self, n):
        out = []
        for v in self.term(n):
            if out and out[-1].vertex == v:
                out[-1] = ProjSummand(v, out[-1].multiplicity + 1)
            else:
                out.append(ProjSummand(v))
        return tuple(out)

    def total_summands(self):
        return sum(len(t) for t in self.terms.values())

    def shift(self, k):
        """C[k] with (C[k])^n = C^(n+k) and differential scaled by (-1)^k."""
        terms = {n - k: t for n, t in self.terms.items()}
        sign = self.algebra.field.from_int((-1) ** k)
        diffs = {}
        for n, matrix in self.diffs.items():
            diffs[n - k] = tuple(
                tuple(e.scale(sign) if e is not None else None for e in row)
                for row in matrix
            )
        return ProjComplex(self.algebra, terms, diffs)

    def __eq__(self, other):
        if not isinstance(other, ProjComplex) or other.algebra is not self.algebra:
            return False
        if self.terms != other.terms:
            return False
        if set(self.diffs) != set(other.diffs):
            return False
        for n in self.diffs:
            a, b = self.diffs[n], other.diffs[n]
            for ra, rb in zip(a, b):
                for ea, eb in zip(ra, rb):
                    ea_zero = ea is None or ea.is_zero()
                    eb_zero = eb is None or eb.is_zero()
                    if ea_zero != eb_zero or (not ea_zero and ea != eb):
                        return False
        return True

    def dump(self):
        lines = []
        for n in self.degrees():
            parts = [
                f"P({s.vertex})" + (f"^{s.multiplicity}" if s.multiplicity > 1 else "")
                for s in self.summands(n)
            ]
            lines.append(f"deg {n}: " + " ⊕ ".join(parts))
            matrix = self.diffs.get(n)
            if matrix is not None:
                printed = [[str(e) if e is not None else "0" for e in row] for row in matrix]
                lines.append(f"d{n}: [" + "; ".join(", ".join(row) for row in printed) + "]")
        return "\n".join(lines) if lines else "0"

    def __repr__(self):
        return f"ProjComplex<{self.dump()}>"


def direct_sum(complexes):
    """Direct sum; summands keep their order of appearance per degree."""
    if not complexes:
        raise ValueError("empty direct sum")
    algebra = complexes[0].algebra
    terms = {}
    offsets = []
    for C in complexes:
        offs = {}
        for n, t in sorted(C.terms.items()):
            offs[n] = len(terms.get(n, ()))
            terms[n] = terms.get(n, ()) + t
        offsets.append(offs)
    diffs = {}
    for n in list(terms):
        if n + 1 not in terms:
            continue
        rows = len(terms[n + 1])
        cols = len(terms[n])
        matrix = [[None] * cols for _ in range(rows)]
        for C, offs in zip(complexes, offsets):
            sub = C.diff(n)
            if sub is None:
                continue
            ro, co = offs[n + 1], offs[n]
            for r, row in enumerate(sub):
                for c, e in enumerate(row):
                    matrix[ro + r][co + c] = e
        if any(any(e is not None for e in row) for row in matrix):
            diffs[n] = matrix
    return ProjComplex(algebra, terms, diffs)


def check_complex(C: ProjComplex) -> bool:
    A = C.algebra
    for n, matrix in C.diffs.items():
        lower, upper = C.term(n), C.term(n + 1)
        for r, row in enumerate(matrix):
            for c, e in enumerate(row):
                if e is None:
                    continue
                if e.algebra is not A or e.source != lower[c] or e.target != upper[r]:
                    raise NotAComplex(
                        f"entry ({r},{c}) of d{n} lies in the wrong block"
                    )
    for n in C.diffs:
        if n + 1 not in C.diffs:
            continue
        d0, d1 = C.diffs[n], C.diffs[n + 1]
        for r in range(len(C.term(n + 2))):
            for c in range(len(C.term(n))):
                acc = None
                for m in range(len(C.term(n + 1))):
                    a, b = d0[m][c], d1[r][m]
                    if a is None or b is None:
                        continue
                    prod = a * b
                    acc = prod if acc is None else acc + prod
                if acc is not None and not acc.is_zero():
                    raise NotAComplex(f"d² != 0 at degree {n}, entry ({r},{c})")
    return True


class ChainMap:
    """Degreewise map between complexes commuting with the differentials."""

    def __init__(self, source, target, comps, check=True):
        self.source = source
        self.target = target
        self.comps = {}
        for n, matrix in comps.items():
            if source.term(n) and target.term(n) and matrix is not None:
                self.comps[n] = tuple(tuple(row) for row in matrix)
        if check:
            self.check()

    def comp(self, n, r, c):
        matrix = self.comps.get(n)
        return None if matrix is None else matrix[r][c]

    def check(self):
        C, D = self.source, self.target
        for n, matrix in self.comps.items():
            for r, row in enumerate(matrix):
                for c, e in enumerate(row):
                    if e is not None and (
                        e.source != C.term(n)[c] or e.target != D.term(n)[r]
                    ):
                        raise ValueError(f"component ({r},{c}) at degree {n} in wrong block")
        degs = set()
        for n in list(C.diffs) + list(self.comps):
            degs.add(n)
        for n in degs:
            for c in range(len(C.term(n))):
                for r in range(len(D.term(n + 1))):
                    acc = None
                    for m in range(len(C.term(n + 1))):
                        a = C.entry(n, m, c)
                        b = self.comp(n + 1, r, m)
                        if a is None or b is None:
                            continue
                        p = a * b
                        acc = p if acc is None else acc + p
                    for m in range(len(D.term(n))):
                        a = self.comp(n, m, c)
                        b = D.entry(n, r, m)
                        if a is None or b is None:
                            continue
                        p = (a * b).scale(self.source.algebra.field.from_int(-1))
                        acc = p if acc is None else acc + p
                    if acc is not None and not acc.is_zero():
                        raise ValueError(f"square at degree {n} does not commute")
        return True

    def compose(self, other):
        """self followed by other (other.source == self.target)."""
        if other.source is not self.target and other.source != self.target:
            raise ValueError("chain maps do not compose")
        comps = {}
        C, E = self.source, other.target
        for n in self.comps:
            if n not in other.comps:
                continue
            rows, cols = len(E.term(n)), len(C.term(n))
            matrix = [[None] * cols for _ in range(rows)]
            for r in range(rows):
                for c in range(cols):
                    acc = None
                    for m in range(len(self.target.term(n))):
                        a = self.comp(n, m, c)
                        b = other.comp(n, r, m)
                        if a is None or b is None:
                            continue
                        p = a * b
                        acc = p if acc is None else acc + p
                    if acc is not None and not acc.is_zero():
                        matrix[r][c] = acc
            comps[n] = matrix
        return ChainMap(C, E, comps, check=False)

    def _combine(self, other, sign):
        if other.source != self.source or other.target != self.target:
            raise ValueError("chain maps between different complexes")
        comps = {}
        for n in set(self.comps) | set(other.comps):
            rows = len(self.target.term(n))
            cols = len(self.source.term(n))
            matrix = [[None] * cols for _ in range(rows)]
            for r in range(rows):
                for c in range(cols):
                    a, b = self.comp(n, r, c), other.comp(n, r, c)
                    if b is not None:
                        b = b.scale(self.source.algebra.field.from_int(sign))
                    if a is None:
                        val = b
                    elif b is None:
                        val = a
                    else:
                        val = a + b
                    if val is not None and not val.is_zero():
                        matrix[r][c] = val
            comps[n] = matrix
        return ChainMap(self.source, self.target, comps, check=False)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c):
        comps = {
            n: [[e.scale(c) if e is not None else None for e in row] for row in m]
            for n, m in self.comps.items()
        }
        return ChainMap(self.source, self.target, comps, check=False)

    def is_zero(self):
        return all(
            e is None or e.is_zero() for m in self.comps.values() for row in m for e in row
        )

    @staticmethod
    def identity(C):
        comps = {}
        for n, t in C.terms.items():
            matrix = [[None] * len(t) for _ in t]
            for i, v in enumerate(t):
                matrix[i][i] = C.algebra.e(v)
            comps[n] = matrix
        return ChainMap(C, C, comps, check=False)


def hom_block(A: QuotientAlgebra, i, j):
    """Basis of Hom(P(i), P(j)) as elements of the block e_i A e_j."""
    return A.block_basis(i, j)


def shift(C: ProjComplex, k: int) -> ProjComplex:
    return C.shift(k)


def mapping_cone(f: ChainMap) -> ProjComplex:
    """Standard cone: degree n is source^(n+1) + target^n."""
    C, D = f.source, f.target
    A = C.algebra
    minus = A.field.from_int(-1)
    terms = {}
    degs = set(C.degrees()) | set(D.degrees())
    lo = min((d for d in degs), default=0) - 1
    hi = max((d for d in degs), default=0)
    for n in range(lo, hi + 1):
        t = tuple(C.term(n + 1)) + tuple(D.term(n))
        if t:
            terms[n] = t
    diffs = {}
    for n in terms:
        if n + 1 not in terms:
            continue
        rows, cols = len(terms[n + 1]), len(terms[n])
        matrix = [[None] * cols for _ in range(rows)]
        c_lower, c_upper = len(C.term(n + 1)), len(C.term(n + 2))
        for r in range(len(C.term(n + 2))):
            for c in range(c_lower):
                e = C.entry(n + 1, r, c)
                if e is not None:
                    matrix[r][c] = e.scale(minus)
        for r in range(len(D.term(n + 1))):
            for c in range(c_lower):
                e = f.comp(n + 1, r, c)
                if e is not None:
                    matrix[c_upper + r][c] = e
            for c in range(len(D.term(n))):
                e = D.entry(n, r, c)
                if e is not None:
                    matrix[c_upper + r][c_lower + c] = e
        diffs[n] = matrix
    return ProjComplex(A, terms, diffs)


def _local_inverse(u: AlgebraElement):
    """Inverse of a unit of the local ring e_i A e_i."""
    A = u.algebra
    i = u.source
    basis = A.block_basis(i, i)
    n = len(basis)
    matrix = [[(b * u).coeffs[r] for b in basis] for r in range(n)]
    rhs = A.e(i).coeffs
    sol = solve_dense(matrix, list(rhs), A.field)
    if sol is None:
        raise ValueError("entry is not a unit")
    out = A.zero(i, i)
    for b, c in zip(basis, sol):
        out = out + b.scale(c)
    return out


def minimize(C: ProjComplex) -> ProjComplex:
    """Homotopy-equivalent complex with all differential entries radical.

    Repeatedly cancels a differential entry P(i) -> P(i) whose trivial-path
    coefficient is nonzero (a unit of the local ring), applying the standard
    elimination update to the rest of the matrix.
    """
    terms = {n: list(t) for n, t in C.terms.items()}
    diffs = {n: [list(row) for row in m] for n, m in C.diffs.items()}

    def find_unit():
        for n in sorted(diffs):
            matrix = diffs[n]
            for r, row in enumerate(matrix):
                for c, e in enumerate(row):
                    if e is not None and e.source == e.target and e.scalar_part():
                        return n, r, c
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        n, r, c = hit
        matrix = diffs[n]
        u = matrix[r][c]
        uinv = _local_inverse(u)
        rows = len(terms.get(n + 1, []))
        cols = len(terms.get(n, []))
        for r2 in range(rows):
            if r2 == r:
                continue
            for c2 in range(cols):
                if c2 == c:
                    continue
                down, across = matrix[r][c2], matrix[r2][c]
                if down is None or across is None:
                    continue
                corr = (down * uinv * across).scale(C.algebra.field.from_int(-1))
                cur = matrix[r2][c2]
                val = corr if cur is None else cur + corr
                matrix[r2][c2] = None if val.is_zero() else val
        # Delete the cancelled pair everywhere.
        del terms[n][c]
        del terms[n + 1][r]
        diffs[n] = [
            [e for c2, e in enumerate(row) if c2 != c]
            for r2, row in enumerate(matrix)
            if r2 != r
        ]
        if n - 1 in diffs:
            diffs[n - 1] = [row for r2, row in enumerate(diffs[n - 1]) if r2 != c]
        if n + 1 in diffs:
            diffs[n + 1] = [
                [e for c2, e in enumerate(row) if c2 != r] for row in diffs[n + 1]
            ]
        for k in (n - 1, n, n + 1):
            if k in diffs and (
                not diffs[k] or not any(diffs[k]) or not terms.get(k) or not terms.get(k + 1)
            ):
                del diffs[k]
        for k in (n, n + 1):
            if k in terms and not terms[k]:
                del terms[k]
    return ProjComplex(C.algebra, {n: tuple(t) for n, t in terms.items()}, diffs)


def is_stalk(C: ProjComplex):
    """(vertex, degree) when C is a one-summand complex with zero differential."""
    degs = [n for n in C.terms if C.term(n)]
    if len(degs) != 1 or len(C.term(degs[0])) != 1:
        return None
    if any(
        e is not None and not e.is_zero() for m in C.diffs.values() for row in m for e in row
    ):
        return None
    return C.term(degs[0])[0], degs[0]


class _HomSolver:
    """Exact solver for chain maps C -> D and null homotopies."""

    def __init__(self, C, D):
        self.C, self.D = C, D
        self.A = C.algebra
        self.field = self.A.field
        self.fvars = []
        self.findex = {}
        for n in sorted(set(C.degrees()) & set(D.degrees())):
            for r, tv in enumerate(D.term(n)):
                for c, sv in enumerate(C.term(n)):
                    dim = len(self.A.block(sv, tv))
                    for b in range(dim):
                        self.findex[(n, r, c, b)] = len(self.fvars)
                        self.fvars.append((n, r, c, b))

    def constraint_rows(self):
        """Sparse rows (over fvar columns) expressing commutation squares."""
        C, D, A = self.C, self.D, self.A
        rows = {}
        for n in sorted(set(C.degrees())):
            for c, sv in enumerate(C.term(n)):
                for r, tv in enumerate(D.term(n + 1)):
                    block = A.block(sv, tv)
                    for t in range(len(block)):
                        rows[(n, r, c, t)] = {}
        for n in sorted(set(C.degrees())):
            for c, sv in enumerate(C.term(n)):
                # d_C then f^{n+1}
                for m, mv in enumerate(C.term(n + 1)):
                    d = C.entry(n, m, c)
                    if d is None:
                        continue
                    for r, tv in enumerate(D.term(n + 1)):
                        for b, basis in enumerate(self.A.block_basis(mv, tv)):
                            var = self.findex.get((n + 1, r, m, b))
                            if var is None:
                                continue
                            prod = d * basis
                            for t, coeff in enumerate(prod.coeffs):
                                if coeff:
                                    row = rows[(n, r, c, t)]
                                    row[var] = row.get(var, self.field.zero) + coeff
                # minus f^n then d_D
                for m, mv in enumerate(D.term(n)):
                    for r, tv in enumerate(D.term(n + 1)):
                        e = D.entry(n, r, m)
                        if e is None:
                            continue
                        for b, basis in enumerate(self.A.block_basis(sv, mv)):
                            var = self.findex.get((n, m, c, b))
                            if var is None:
                                continue
                            prod = basis * e
                            for t, coeff in enumerate(prod.coeffs):
                                if coeff:
                                    row = rows[(n, r, c, t)]
                                    row[var] = row.get(var, self.field.zero) - coeff
        return [row for row in rows.values() if row]

    def svars(self):
        out = []
        for n in sorted(set(self.C.degrees())):
            for r, tv in enumerate(self.D.term(n - 1)):
                for c, sv in enumerate(self.C.term(n)):
                    dim = len(self.A.block(sv, tv))
                    for b in range(dim):
                        out.append((n, r, c, b))
        return out

    def homotopy_columns(self):
        """Image vectors of the map s -> d s + s d, one per s basis vector."""
        C, D, A = self.C, self.D, self.A
        cols = []
        for (n, r, c, b) in self.svars():
            sv, tv = C.term(n)[c], D.term(n - 1)[r]
            basis = A.block_basis(sv, tv)[b]
            col = {}
            # d_C^{n-1} then s at degree n: contributes to f^{n-1}
            for c2, sv2 in enumerate(C.term(n - 1)):
                d = C.entry(n - 1, c, c2)
                if d is None:
                    continue
                prod = d * basis
                for t, coeff in enumerate(prod.coeffs):
                    if coeff:
                        var = self.findex[(n - 1, r, c2, t)]
                        col[var] = col.get(var, self.field.zero) + coeff
            # s at degree n then d_D^{n-1}: contributes to f^n
            for r2, tv2 in enumerate(D.term(n)):
                e = D.entry(n - 1, r2, r)
                if e is None:
                    continue
                prod = basis * e
                for t, coeff in enumerate(prod.coeffs):
                    if coeff:
                        var = self.findex[(n, r2, c, t)]
                        col[var] = col.get(var, self.field.zero) + coeff
            if col:
                cols.append(col)
        return cols

    def vectorize(self, f: ChainMap):
        vec = {}
        for n, matrix in f.comps.items():
            for r, row in enumerate(matrix):
                for c, e in enumerate(row):
                    if e is None:
                        continue
                    for b, coeff in enumerate(e.coeffs):
                        if coeff:
                            vec[self.findex[(n, r, c, b)]] = coeff
        return vec

    def chain_map_from_vector(self, vec):
        comps = {}
        for var, coeff in vec.items():
            n, r, c, b = self.fvars[var]
            matrix = comps.setdefault(
                n,
                [
                    [None] * len(self.C.term(n))
                    for _ in range(len(self.D.term(n)))
                ],
            )
            sv, tv = self.C.term(n)[c], self.D.term(n)[r]
            add = self.A.block_basis(sv, tv)[b].scale(coeff)
            matrix[r][c] = add if matrix[r][c] is None else matrix[r][c] + add
        return ChainMap(self.C, self.D, comps, check=False)


def homotopy_hom(C: ProjComplex, D: ProjComplex, shift_by: int = 0, with_basis=False) -> HomotopyHom:
    """Hom in the homotopy category from C to D[shift_by]; exact dimension."""
    E = D.shift(shift_by)
    solver = _HomSolver(C, E)
    nvars = len(solver.fvars)
    if nvars == 0:
        return HomotopyHom(0, ())
    constraints = solver.constraint_rows()
    hcols = solver.homotopy_columns()
    hech = SparseEchelon()
    hrank = 0
    for col in hcols:
        if hech.add(col):
            hrank += 1
    if not with_basis:
        crank = 0
        cech = SparseEchelon()
        for row in constraints:
            if cech.add(row):
                crank += 1
        return HomotopyHom(nvars - crank - hrank, ())
    kernel = nullspace(constraints, nvars, solver.field)
    reps = []
    ech = SparseEchelon()
    for col in hcols:
        ech.add(col)
    for vec in kernel:
        if ech.add(vec):
            reps.append(solver.chain_map_from_vector(vec))
    return HomotopyHom(len(reps), tuple(reps))


def is_null_homotopic(f: ChainMap) -> bool:
    solver = _HomSolver(f.source, f.target)
    vec = solver.vectorize(f)
    if not vec:
        return True
    ech = SparseEchelon()
    for col in solver.homotopy_columns():
        ech.add(col)
    return ech.contains(vec)


def homotopy_equivalent_to_stalk(C: ProjComplex, vertex, degree) -> bool:
    """Decide C ~ P(vertex)[-degree] via the minimal form."""
    M = minimize(C)
    return is_stalk(M) == (vertex, degree)


def happel_cartan(summands, C: CartanMatrix, labels=None) -> CartanMatrix:
    """Cartan matrix of the endomorphism ring of a direct sum of complexes.

    Entry (z, z') is the alternating double sum over degrees r, s of
    (-1)^(r-s) dim Hom(Q_r, Q'_s), with the module Hom dimensions read off
    the Cartan matrix of the base algebra.
    """
    n = len(summands)
    if labels is None:
        labels = tuple(str(i) for i in range(n))
    rows = []
    for Qz in summands:
        row = []
        for Qw in summands:
            total = 0
            for r in Qz.degrees():
                for s in Qw.degrees():
                    sign = -1 if (r - s) % 2 else 1
                    for i in Qz.term(r):
                        for j in Qw.term(s):
                            total += sign * C.entry(i, j)
            row.append(total)
        rows.append(tuple(row))
    return CartanMatrix(tuple(labels), tuple(rows))
