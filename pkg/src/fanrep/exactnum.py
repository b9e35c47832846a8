"""Exact rational and integer linear algebra.

Scalars are ``fractions.Fraction`` (arbitrary precision, always reduced,
positive denominator); floats are never used, so invertibility and rank
decisions are exact.  Matrices act on column vectors: ``mat_mul(a, b)``
is the map "apply b, then a".
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "RatMatrix",
    "IntMatrix",
    "NotInvertibleError",
    "NotCompletableError",
    "parse_rational",
    "format_rational",
    "mat_mul",
    "invert",
    "solve_nullspace",
    "smith_normal_form",
    "hermite_row_transform",
    "complete_to_unimodular",
]


class NotInvertibleError(ValueError):
    """Raised when a square rational matrix has no inverse."""


class NotCompletableError(ValueError):
    """Raised when integer vectors do not extend to a basis of Z^n."""


_RATIONAL_RE = None


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a reduced Fraction with positive denominator.

    Only integer and slash forms are accepted; decimal strings are
    rejected so no value sneaks in through float notation.
    """
    global _RATIONAL_RE
    if _RATIONAL_RE is None:
        import re

        _RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")
    if not isinstance(text, str):
        raise ValueError(f"rational must be a string, got {text!r}")
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational string: {text!r}")
    return Fraction(text)


def format_rational(x: Fraction) -> str:
    """Render a rational as "p/q", or "p" when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact matrices")
    return Fraction(x)


class RatMatrix:
    """Immutable rational matrix.  0xk and kx0 shapes are legal."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(_as_fraction(x) for x in entries)
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, [x for row in rows for x in row])

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    @classmethod
    def column(cls, values: Sequence) -> "RatMatrix":
        values = list(values)
        return cls(len(values), 1, values)

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.entry(i, j) == (1 if i == j else 0)
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols,
            self.rows,
            [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    def add(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return RatMatrix(
            self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def sub(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return RatMatrix(
            self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)]
        )

    def scale(self, x) -> "RatMatrix":
        x = _as_fraction(x)
        return RatMatrix(self.rows, self.cols, [x * a for a in self.entries])

    def mul(self, other: "RatMatrix") -> "RatMatrix":
        return mat_mul(self, other)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        return self.add(other)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self.sub(other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatMatrix)
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        rows = "; ".join(
            " ".join(format_rational(x) for x in self.row(i)) for i in range(self.rows)
        )
        return f"RatMatrix({self.rows}x{self.cols}: [{rows}])"

    def invert(self) -> "RatMatrix":
        return invert(self)

    def is_invertible(self) -> bool:
        if self.rows != self.cols:
            return False
        try:
            invert(self)
        except NotInvertibleError:
            return False
        return True

    def power(self, k: int) -> "RatMatrix":
        """Exact integer power; negative exponents go through the inverse."""
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        base = self if k >= 0 else invert(self)
        k = abs(k)
        result = RatMatrix.identity(self.rows)
        while k:
            if k & 1:
                result = mat_mul(result, base)
            base = mat_mul(base, base)
            k >>= 1
        return result

    def det(self) -> Fraction:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det *= a[c][c]
            inv = 1 / a[c][c]
            for r in range(c + 1, n):
                if a[r][c] != 0:
                    f = a[r][c] * inv
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def to_json(self) -> list:
        return [[format_rational(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]], rows: int = None, cols: int = None) -> "RatMatrix":
        r = len(data)
        c = len(data[0]) if r else (cols if cols is not None else 0)
        if rows is not None and r != rows:
            raise ValueError(f"expected {rows} rows, got {r}")
        if cols is not None and c != cols:
            raise ValueError(f"expected {cols} cols, got {c}")
        return cls(r, c, [parse_rational(x) for row in data for x in row])

    @staticmethod
    def block_diag(a: "RatMatrix", b: "RatMatrix") -> "RatMatrix":
        rows = a.rows + b.rows
        cols = a.cols + b.cols
        entries = []
        for i in range(a.rows):
            entries.extend(a.row(i))
            entries.extend([Fraction(0)] * b.cols)
        for i in range(b.rows):
            entries.extend([Fraction(0)] * a.cols)
            entries.extend(b.row(i))
        return RatMatrix(rows, cols, entries)


def mat_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Exact product a.b; as column-vector maps this applies b first, then a."""
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch: {a.shape} . {b.shape}")
    out = []
    bt = b.transpose()
    for i in range(a.rows):
        arow = a.row(i)
        for j in range(b.cols):
            bcol = bt.row(j)
            out.append(sum((x * y for x, y in zip(arow, bcol)), Fraction(0)))
    return RatMatrix(a.rows, b.cols, out)


def invert(a: RatMatrix) -> RatMatrix:
    """Exact inverse by Gauss-Jordan elimination over Q.

    Raises NotInvertibleError when the rank is deficient; this signal is
    what the representation validators rely on.
    """
    if not a.is_square():
        raise NotInvertibleError(f"matrix is {a.rows}x{a.cols}, not square")
    n = a.rows
    m = [list(a.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise NotInvertibleError(f"rank < {n}")
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return RatMatrix.from_rows([row[n:] for row in m])


def _rref(a: RatMatrix) -> tuple:
    """Reduced row echelon form; returns (rows, pivot column list)."""
    m = a.to_rows()
    nrows, ncols = a.rows, a.cols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def solve_nullspace(a: RatMatrix) -> list:
    """Echelon-normalized basis of {x : a.x = 0}, as n x 1 columns.

    Basis vectors are indexed by the free columns in increasing order;
    each has entry 1 at its free coordinate and 0 at the other free
    coordinates, so the output is deterministic.
    """
    m, pivots = _rref(a)
    n = a.cols
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -m[r][f]
        basis.append(RatMatrix.column(vec))
    return basis


def rank(a: RatMatrix) -> int:
    return len(_rref(a)[1])


class IntMatrix:
    """Immutable arbitrary-precision integer matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        entries = tuple(int(x) for x in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, [x for row in rows for x in row])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int = None) -> "IntMatrix":
        k = len(columns)
        if nrows is None:
            if k == 0:
                raise ValueError("cannot infer row count from zero columns")
            nrows = len(columns[0])
        if any(len(col) != nrows for col in columns):
            raise ValueError("ragged columns")
        return cls(nrows, k, [columns[j][i] for i in range(nrows) for j in range(k)])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [int(i == j) for i in range(n) for j in range(n)])

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} . {other.shape}")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                out.append(sum(self.entry(i, k) * other.entry(k, j) for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, out)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return self.mul(other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"IntMatrix({self.rows}x{self.cols}: [{rows}])"

    def det(self) -> int:
        """Exact determinant by Bareiss fraction-free elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign = 1
        prev = 1
        for c in range(n - 1):
            piv = next((r for r in range(c, n) if a[r][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                sign = -sign
            for r in range(c + 1, n):
                for j in range(c + 1, n):
                    a[r][j] = (a[r][j] * a[c][c] - a[r][c] * a[c][j]) // prev
                a[r][c] = 0
            prev = a[c][c]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    def to_rational(self) -> RatMatrix:
        return RatMatrix(self.rows, self.cols, self.entries)

    def to_json(self) -> list:
        return self.to_rows()


def _int_inverse_of_unimodular(m: IntMatrix) -> IntMatrix:
    inv = invert(m.to_rational())
    entries = []
    for x in inv.entries:
        if x.denominator != 1:
            raise ValueError("matrix is not unimodular")
        entries.append(x.numerator)
    return IntMatrix(m.rows, m.cols, entries)


def smith_normal_form(a: IntMatrix) -> tuple:
    """Smith normal form: returns (U, D, V) with U.a.V = D exactly.

    U and V are unimodular; D is diagonal with non-negative entries and
    d_i | d_{i+1}.
    """
    nr, nc = a.rows, a.cols
    m = a.to_rows()
    u = IntMatrix.identity(nr).to_rows()
    v = IntMatrix.identity(nc).to_rows()

    def row_swap(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def row_add(i, j, q):  # row_i += q * row_j
        m[i] = [x + q * y for x, y in zip(m[i], m[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]

    def row_neg(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]

    def col_swap(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def col_add(i, j, q):  # col_i += q * col_j
        for row in m:
            row[i] += q * row[j]
        for row in v:
            row[i] += q * row[j]

    t = 0
    while t < min(nr, nc):
        piv = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = m[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        row_swap(t, piv[0])
        col_swap(t, piv[1])
        while True:
            # clear column t below the pivot
            dirty = False
            for i in range(t + 1, nr):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    row_add(i, t, -q)
                    if m[i][t] != 0:
                        row_swap(t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, nc):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    col_add(j, t, -q)
                    if m[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            # pivot must divide every remaining entry for the chain d_i | d_{i+1}
            offending = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if m[i][j] % m[t][t] != 0:
                        offending = i
                        break
                if offending is not None:
                    break
            if offending is None:
                break
            row_add(t, offending, 1)
        if m[t][t] < 0:
            row_neg(t)
        t += 1
    return IntMatrix.from_rows(u), IntMatrix.from_rows(m), IntMatrix.from_rows(v)


def hermite_row_transform(a: IntMatrix) -> tuple:
    """Row Hermite form: returns (U, Uinv, H, pivots) with U.a = H.

    H is in row echelon form with positive pivots and entries above each
    pivot reduced into [0, pivot); U is unimodular with tracked inverse.
    """
    nr, nc = a.rows, a.cols
    m = a.to_rows()
    u = IntMatrix.identity(nr).to_rows()
    uinv = IntMatrix.identity(nr).to_rows()

    def swap(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]
        for row in uinv:
            row[i], row[j] = row[j], row[i]

    def add(i, j, q):  # row_i += q * row_j ; uinv col_j -= q * col_i
        m[i] = [x + q * y for x, y in zip(m[i], m[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]
        for row in uinv:
            row[j] -= q * row[i]

    def neg(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]
        for row in uinv:
            row[i] = -row[i]

    pivots = []
    pr = 0
    for c in range(nc):
        if pr == nr:
            break
        while True:
            nz = [i for i in range(pr, nr) if m[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(m[i][c]), i))
            if i0 != pr:
                swap(pr, i0)
            done = True
            for i in range(pr + 1, nr):
                if m[i][c] != 0:
                    q = m[i][c] // m[pr][c]
                    add(i, pr, -q)
                    if m[i][c] != 0:
                        done = False
            if done:
                break
        if pr < nr and m[pr][c] != 0:
            if m[pr][c] < 0:
                neg(pr)
            for i in range(pr):
                q = m[i][c] // m[pr][c]
                if q != 0:
                    add(i, pr, -q)
            pivots.append(c)
            pr += 1
    return (
        IntMatrix.from_rows(u),
        IntMatrix.from_rows(uinv),
        IntMatrix.from_rows(m),
        pivots,
    )


def complete_to_unimodular(vectors: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Extend k <= n integer vectors to the columns of a unimodular matrix.

    The first k columns of the result are the inputs verbatim; the
    completion columns are the preimages of the standard basis vectors
    beyond the Hermite pivots, which makes the output deterministic.
    Raises NotCompletableError when the inputs do not span a saturated
    rank-k sublattice of Z^n.
    """
    vectors = [tuple(int(x) for x in vec) for vec in vectors]
    k = len(vectors)
    if k > n:
        raise NotCompletableError(f"{k} vectors cannot be independent in Z^{n}")
    for vec in vectors:
        if len(vec) != n:
            raise ValueError(f"vector {vec} is not {n}-dimensional")
    if k == 0:
        return IntMatrix.identity(n)
    a = IntMatrix.from_columns(vectors, n)
    _, uinv, h, pivots = hermite_row_transform(a)
    if len(pivots) < k:
        raise NotCompletableError("vectors are linearly dependent")
    for r in range(k):
        if h.entry(r, pivots[r]) != 1:
            raise NotCompletableError(
                "vectors span a non-saturated sublattice "
                f"(Hermite pivot {h.entry(r, pivots[r])} != 1)"
            )
    columns = list(vectors)
    for j in range(k, n):
        columns.append(uinv.col(j))
    out = IntMatrix.from_columns(columns, n)
    if abs(out.det()) != 1:
        raise AssertionError("completion is not unimodular; this is a bug")
    return out


def primitive_vector(vec: Sequence[int]) -> tuple:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    vec = tuple(int(x) for x in vec)
    g = 0
    for x in vec:
        g = gcd(g, abs(x))
    if g <= 1:
        return vec
    return tuple(x // g for x in vec)


def is_primitive(vec: Sequence[int]) -> bool:
    vec = tuple(int(x) for x in vec)
    if all(x == 0 for x in vec):
        return False
    g = 0
    for x in vec:
        g = gcd(g, abs(x))
    return g == 1
