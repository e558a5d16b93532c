"""Exact Gaussian-rational scalars and sparse linear algebra over Q(i).

Everything downstream (Clifford matrices, operator assembly, kernel
computations) runs on the two types defined here: :class:`GaussianRational`,
an element of Q(i) with reduced positive-denominator parts, and
:class:`SparseMatrix`, a row-major map of nonzero entries.  There is no
floating point anywhere in this package.

Rationals are backed by ``gmpy2.mpq`` when available (much faster) and fall
back to ``fractions.Fraction`` transparently.
"""

from __future__ import annotations

import re as _re

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _Q

__all__ = [
    "GaussianRational",
    "SparseMatrix",
    "QI_ZERO",
    "QI_ONE",
    "QI_I",
    "qi",
    "rational",
    "rational_from_string",
    "rational_to_string",
    "rref",
    "rank",
    "nullspace",
    "kernel_is_trivial_hint",
    "express_in_span",
]


def rational(num, den=1):
    """An exact rational with reduced, positive denominator."""
    return _Q(num, den)


def rational_from_string(s):
    """Parse 'a' or 'a/b' into an exact rational; floats are rejected."""
    s = s.strip()
    if not _re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        raise ValueError("not an exact rational: %r" % (s,))
    if "/" in s:
        num, den = s.split("/")
        return _Q(int(num), int(den))
    return _Q(int(s))


def rational_to_string(q):
    q = _Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


class GaussianRational:
    """An element re + im*i of Q(i); immutable, hashable, exact."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _Q(re))
        object.__setattr__(self, "im", _Q(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _mk(re, im):
        # fast path: re/im already backend rationals
        z = object.__new__(GaussianRational)
        object.__setattr__(z, "re", re)
        object.__setattr__(z, "im", im)
        return z

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return GaussianRational._mk(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return GaussianRational._mk(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other).__sub__(self)

    def __mul__(self, other):
        other = _coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational._mk(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational._mk((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        return _coerce(other).__truediv__(self)

    def __neg__(self):
        return GaussianRational._mk(-self.re, -self.im)

    def conjugate(self):
        return GaussianRational._mk(self.re, -self.im)

    def inverse(self):
        return QI_ONE / self

    # -- predicates / hashing --------------------------------------------

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, type(_Q(0)))):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def is_rational(self):
        return self.im == 0

    # -- formatting -------------------------------------------------------

    def to_string(self):
        """Canonical form: 'a/b', 'c/d*i' or 'a/b+c/d*i' / 'a/b-c/d*i'."""
        if self.im == 0:
            return rational_to_string(self.re)
        if self.re == 0:
            return rational_to_string(self.im) + "*i"
        sign = "+" if self.im > 0 else "-"
        return rational_to_string(self.re) + sign + rational_to_string(abs(self.im)) + "*i"

    @staticmethod
    def from_string(s):
        s = s.strip().replace(" ", "")
        m = _re.fullmatch(
            r"(?P<re>[+-]?\d+(?:/\d+)?)?"
            r"(?:(?P<im>[+-]?\d+(?:/\d+)?)\*?i)?",
            s,
        )
        if not m or (m.group("re") is None and m.group("im") is None) or (
            m.group("re") and m.group("im") is None and s.endswith("i")
        ):
            # bare "i"/"-i"/"+i" forms
            m2 = _re.fullmatch(r"(?P<re>[+-]?\d+(?:/\d+)?[+-])?(?P<sgn>[+-]?)i", s)
            if m2:
                re_part = m2.group("re")
                re_val = rational_from_string(re_part[:-1]) if re_part else _Q(0)
                sgn = -1 if (re_part and re_part.endswith("-")) or m2.group("sgn") == "-" else 1
                return GaussianRational(re_val, sgn)
            raise ValueError("not a Gaussian rational: %r" % (s,))
        re_val = rational_from_string(m.group("re")) if m.group("re") else _Q(0)
        im_val = rational_from_string(m.group("im")) if m.group("im") else _Q(0)
        return GaussianRational(re_val, im_val)

    def __repr__(self):
        return "GaussianRational(%s)" % self.to_string()


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(x)


QI_ZERO = GaussianRational(0)
QI_ONE = GaussianRational(1)
QI_I = GaussianRational(0, 1)


def qi(re, im=0):
    """Shorthand constructor used throughout the package and the tests."""
    return GaussianRational(re, im)


# ---------------------------------------------------------------------------
# sparse matrices
# ---------------------------------------------------------------------------


class SparseMatrix:
    """Immutable-by-convention sparse matrix over Q(i), row-major.

    ``data`` maps row -> {col -> GaussianRational}; zero entries and empty
    rows are never stored.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data=None):
        self.rows = rows
        self.cols = cols
        self.data = data if data is not None else {}

    @classmethod
    def from_entries(cls, rows, cols, entries):
        data = {}
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError("entry (%d, %d) outside %dx%d" % (r, c, rows, cols))
            v = _coerce(v)
            if v:
                row = data.setdefault(r, {})
                w = row.get(c)
                nv = v if w is None else w + v
                if nv:
                    row[c] = nv
                elif c in row:
                    del row[c]
        for r in [r for r, row in data.items() if not row]:
            del data[r]
        return cls(rows, cols, data)

    @classmethod
    def from_dense(cls, rows_list):
        rows = len(rows_list)
        cols = len(rows_list[0]) if rows else 0
        return cls.from_entries(
            rows, cols,
            ((r, c, v) for r, row in enumerate(rows_list) for c, v in enumerate(row)),
        )

    @classmethod
    def identity(cls, n, scale=QI_ONE):
        scale = _coerce(scale)
        data = {i: {i: scale} for i in range(n)} if scale else {}
        return cls(n, n, data)

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols, {})

    # -- access -----------------------------------------------------------

    def get(self, r, c):
        return self.data.get(r, _EMPTY).get(c, QI_ZERO)

    def entries(self):
        """Sorted (row, col, value) triples."""
        for r in sorted(self.data):
            row = self.data[r]
            for c in sorted(row):
                yield r, c, row[c]

    def num_entries(self):
        return sum(len(row) for row in self.data.values())

    def is_zero(self):
        return not self.data

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.data == other.data

    def __repr__(self):
        return "SparseMatrix(%dx%d, %d entries)" % (self.rows, self.cols, self.num_entries())

    # -- algebra ----------------------------------------------------------

    def __add__(self, other):
        self._check_shape(other)
        data = {r: dict(row) for r, row in self.data.items()}
        for r, row in other.data.items():
            tgt = data.setdefault(r, {})
            for c, v in row.items():
                w = tgt.get(c)
                nv = v if w is None else w + v
                if nv:
                    tgt[c] = nv
                elif c in tgt:
                    del tgt[c]
            if not tgt:
                del data[r]
        return SparseMatrix(self.rows, self.cols, data)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s):
        s = _coerce(s)
        if not s:
            return SparseMatrix.zero(self.rows, self.cols)
        return SparseMatrix(
            self.rows, self.cols,
            {r: {c: v * s for c, v in row.items()} for r, row in self.data.items()},
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch: %dx%d @ %dx%d"
                             % (self.rows, self.cols, other.rows, other.cols))
        data = {}
        odata = other.data
        for r, row in self.data.items():
            acc = {}
            for k, v in row.items():
                orow = odata.get(k)
                if not orow:
                    continue
                for c, w in orow.items():
                    x = acc.get(c)
                    nv = v * w if x is None else x + v * w
                    acc[c] = nv
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                data[r] = acc
        return SparseMatrix(self.rows, other.cols, data)

    def transpose(self):
        data = {}
        for r, row in self.data.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        return SparseMatrix(self.cols, self.rows, data)

    def columns(self):
        """col -> {row -> value} view (computed, not cached)."""
        out = {}
        for r, row in self.data.items():
            for c, v in row.items():
                out.setdefault(c, {})[r] = v
        return out

    def mul_vec(self, vec):
        """Matrix times sparse column vector (dict col -> value)."""
        out = {}
        for r, row in self.data.items():
            acc = None
            for c, v in row.items():
                w = vec.get(c)
                if w is None:
                    continue
                t = v * w
                acc = t if acc is None else acc + t
            if acc is not None and acc:
                out[r] = acc
        return out

    def stack_below(self, other):
        """Vertical stack [self; other]."""
        if self.cols != other.cols:
            raise ValueError("column mismatch in vertical stack")
        data = {r: dict(row) for r, row in self.data.items()}
        for r, row in other.data.items():
            data[r + self.rows] = dict(row)
        return SparseMatrix(self.rows + other.rows, self.cols, data)

    def _check_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[r, c, v.to_string()] for r, c, v in self.entries()],
        }

    @classmethod
    def from_json(cls, obj):
        return cls.from_entries(
            obj["rows"], obj["cols"],
            ((r, c, GaussianRational.from_string(s)) for r, c, s in obj["entries"]),
        )


_EMPTY = {}


# ---------------------------------------------------------------------------
# elimination engines
# ---------------------------------------------------------------------------


def _sub_scaled_row(target, source, factor):
    """target -= factor * source, in place on dict rows. factor nonzero."""
    fre, fim = factor.re, factor.im
    mk = GaussianRational._mk
    for c, v in source.items():
        vre, vim = v.re, v.im
        tre = fre * vre - fim * vim
        tim = fre * vim + fim * vre
        w = target.get(c)
        if w is None:
            target[c] = mk(-tre, -tim)
        else:
            nre = w.re - tre
            nim = w.im - tim
            if nre or nim:
                target[c] = mk(nre, nim)
            else:
                del target[c]


def _jordan_eliminate(rows):
    """Destructive Gauss-Jordan on a list of dict rows.

    Pivot choice favours sparse rows (Markowitz-like).  Returns a list of
    (pivot_col, row_dict) in the order pivots were chosen; afterwards each
    pivot column is nonzero only in its own pivot row.
    """
    live = {i for i, row in enumerate(rows) if row}
    pivots = []
    while live:
        r = min(live, key=lambda i: (len(rows[i]), i))
        row = rows[r]
        if not row:
            live.discard(r)
            continue
        c = min(row)
        piv = row[c]
        live.discard(r)
        # eliminate col c from every other row that has it
        for r2, row2 in enumerate(rows):
            if r2 == r or c not in row2:
                continue
            _sub_scaled_row(row2, row, row2[c] / piv)
            if not row2:
                live.discard(r2)
        pivots.append((c, row))
    return pivots


def rref(m: SparseMatrix):
    """The unique reduced row-echelon form of m and its pivot columns."""
    rows = [dict(row) for row in (m.data.get(r, {}) for r in range(m.rows))]
    pivots = []
    pivot_rows = []
    remaining = [r for r in range(m.rows)]
    used = set()
    for c in range(m.cols):
        cand = [r for r in remaining if r not in used and c in rows[r]]
        if not cand:
            continue
        r = min(cand, key=lambda i: (len(rows[i]), i))
        used.add(r)
        piv = rows[r][c]
        if piv != QI_ONE:
            inv = QI_ONE / piv
            rows[r] = {k: v * inv for k, v in rows[r].items()}
        for r2 in range(m.rows):
            if r2 != r and c in rows[r2]:
                _sub_scaled_row(rows[r2], rows[r], rows[r2][c])
        pivots.append(c)
        pivot_rows.append(r)
    data = {}
    for i, r in enumerate(pivot_rows):
        if rows[r]:
            data[i] = rows[r]
    return SparseMatrix(m.rows, m.cols, data), pivots


def rank(m: SparseMatrix) -> int:
    rows = [dict(row) for row in m.data.values()]
    return len(_jordan_eliminate(rows))


# mod-p certificate: p = 1 (mod 4) so that -1 is a square and Q(i) maps
# into F_p; rank can only drop under reduction, so full column rank mod p
# certifies an exactly trivial kernel.
_CERT_P = 2147483629
_CERT_I = None


def _cert_sqrt_minus_one():
    global _CERT_I
    if _CERT_I is None:
        p = _CERT_P
        for a in range(2, 1000):
            x = pow(a, (p - 1) // 4, p)
            if (x * x) % p == p - 1:
                _CERT_I = x
                break
    return _CERT_I


def _modp_rows(m: SparseMatrix):
    """Reduce entries mod _CERT_P; None if some denominator vanishes mod p."""
    p = _CERT_P
    s = _cert_sqrt_minus_one()
    rows = []
    for row in m.data.values():
        out = {}
        for c, v in row.items():
            bn, bd = int(v.re.numerator), int(v.re.denominator)
            cn, cd = int(v.im.numerator), int(v.im.denominator)
            if bd % p == 0 or cd % p == 0:
                return None
            val = (bn * pow(bd, -1, p) + cn * pow(cd, -1, p) * s) % p
            if val:
                out[c] = val
        if out:
            rows.append(out)
    return rows


def _modp_rank(rows):
    p = _CERT_P
    live = {i for i, row in enumerate(rows) if row}
    pivots = 0
    while live:
        r = min(live, key=lambda i: (len(rows[i]), i))
        row = rows[r]
        live.discard(r)
        if not row:
            continue
        c = min(row)
        inv = pow(row[c], -1, p)
        for r2 in list(live):
            row2 = rows[r2]
            f = row2.get(c)
            if f is None:
                continue
            f = (f * inv) % p
            for cc, v in row.items():
                t = (row2.get(cc, 0) - f * v) % p
                if t:
                    row2[cc] = t
                elif cc in row2:
                    del row2[cc]
            if not row2:
                live.discard(r2)
        pivots += 1
    return pivots


def kernel_is_trivial_hint(m: SparseMatrix):
    """True only when the kernel is provably {0} (sound, one-sided)."""
    rows = _modp_rows(m)
    if rows is None:
        return False
    return _modp_rank(rows) == m.cols


def nullspace(m: SparseMatrix, modular_shortcut=True):
    """Exact basis of {v : m v = 0}, canonical (RREF of the kernel).

    Each vector is a dict col -> GaussianRational with first nonzero entry 1;
    vectors are ordered by leading index.
    """
    if m.cols == 0:
        return []
    if not m.data:
        basis = [{c: QI_ONE} for c in range(m.cols)]
        return basis
    if modular_shortcut and kernel_is_trivial_hint(m):
        return []
    rows = [dict(row) for row in m.data.values()]
    pivots = _jordan_eliminate(rows)
    pivot_cols = {c for c, _ in pivots}
    free_cols = [c for c in range(m.cols) if c not in pivot_cols]
    raw = []
    for f in free_cols:
        v = {f: QI_ONE}
        for c, row in pivots:
            w = row.get(f)
            if w is not None:
                v[c] = -(w / row[c])
        raw.append(v)
    basis = _canonical_basis(raw, m.cols)
    if __debug__:
        npiv = len(pivots)
        assert npiv + len(basis) == m.cols, "rank-nullity violated"
        for v in basis:
            assert not m.mul_vec(v), "kernel vector not annihilated"
    return basis


def _canonical_basis(vectors, dim):
    """RREF the span of the given vectors: unique leading-one basis."""
    mat = SparseMatrix.from_entries(
        len(vectors), dim,
        ((i, c, v) for i, vec in enumerate(vectors) for c, v in vec.items()),
    )
    red, pivots = rref(mat)
    return [dict(red.data[i]) for i in range(len(pivots))]


def express_in_span(basis, targets, dim):
    """Solve sum_j x_j basis[j] = t exactly for each target t.

    basis and targets are sparse vectors (dict index -> GaussianRational) in a
    space of dimension ``dim``.  Returns a list of coefficient lists, or None
    if some target is outside the span.
    """
    k = len(basis)
    nt = len(targets)
    rows = {}
    for j, vec in enumerate(basis):
        for i, v in vec.items():
            rows.setdefault(i, {})[j] = v
    for t, vec in enumerate(targets):
        for i, v in vec.items():
            rows.setdefault(i, {})[k + t] = v
    mat = SparseMatrix(len(rows), k + nt,
                       {ri: row for ri, row in enumerate(rows.values())})
    red, pivots = rref(mat)
    if any(p >= k for p in pivots):
        return None
    piv_of_col = {c: i for i, c in enumerate(pivots)}
    out = []
    for t in range(nt):
        coeffs = [QI_ZERO] * k
        for c, i in piv_of_col.items():
            coeffs[c] = red.data.get(i, _EMPTY).get(k + t, QI_ZERO)
        out.append(coeffs)
    return out
