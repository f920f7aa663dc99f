"""Exact rational linear algebra kernels.

Scalars are arbitrary-precision rationals (``fractions.Fraction``),
dense matrices are immutable row tuples, subspaces are stored in fully
reduced row echelon form so that equality of spans is structural
equality, and tensors are sparse maps from index words to scalars.

Conventions used everywhere in the package:

* Words are tuples of 0-based letters ``(i_0, ..., i_{m-1})`` over an
  alphabet of ``nv`` letters.  The flat index of a word is
  ``sum(i_k * nv**(m-1-k))``: the leftmost tensor factor is the most
  significant digit, so flat order equals lexicographic word order.
* A matrix acting on generators stores images in rows: row ``i`` holds
  the coordinates of the image of the ``i``-th generator.

All values are immutable after construction and every operation is a
pure function, so values may be shared freely between threads.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import NoSolutionError, NotInvertibleError

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def scalar(x) -> Fraction:
    """Parse an exact rational from an int, Fraction, or string.

    Strings may be integers ("7"), ratios ("3/4") or finite decimals
    ("0.25"); all parse exactly.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {x!r}") from None
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a string or Fraction")
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def scalar_str(x: Fraction) -> str:
    """Canonical string form: "n" for integers, "n/d" otherwise."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def word_flat(word: Sequence[int], nv: int) -> int:
    f = 0
    for k in word:
        f = f * nv + k
    return f


def flat_word(flat: int, degree: int, nv: int) -> tuple[int, ...]:
    w = []
    for _ in range(degree):
        flat, r = divmod(flat, nv)
        w.append(r)
    return tuple(reversed(w))


# ---------------------------------------------------------------------------
# Dense matrices


class Matrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        rs = tuple(tuple(scalar(e) for e in row) for row in rows)
        if rs and any(len(r) != len(rs[0]) for r in rs):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rs)
        object.__setattr__(self, "nrows", len(rs))
        object.__setattr__(self, "ncols", len(rs[0]) if rs else 0)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(nrows: int, ncols: int) -> "Matrix":
        return Matrix([[ZERO] * ncols for _ in range(nrows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(" ".join(scalar_str(e) for e in row) for row in self.rows)
        return f"Matrix[{body}]"

    def __add__(self, other: "Matrix") -> "Matrix":
        self._shape_check(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._shape_check(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.rows])

    def _shape_check(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch in product")
            cols = list(zip(*other.rows)) if other.rows else []
            return Matrix(
                [[sum((a * b for a, b in zip(row, col)), ZERO) for col in cols] for row in self.rows]
            )
        return Matrix([[a * scalar(other) for a in r] for r in self.rows])

    __rmul__ = __mul__

    def mul_vec(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Matrix-times-column-vector."""
        if len(v) != self.ncols:
            raise ValueError("length mismatch")
        return tuple(sum((a * b for a, b in zip(row, v)), ZERO) for row in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.rows))) if self.rows else Matrix([])

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def det(self) -> Fraction:
        """Determinant by fraction-free-enough Gaussian elimination."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        a = [list(r) for r in self.rows]
        d = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                return ZERO
            if p != c:
                a[c], a[p] = a[p], a[c]
                d = -d
            d *= a[c][c]
            inv = ONE / a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] * inv
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return d

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise NotInvertibleError("non-square matrix")
        n = self.nrows
        a = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                raise NotInvertibleError("singular matrix")
            a[c], a[p] = a[p], a[c]
            inv = ONE / a[c][c]
            a[c] = [x * inv for x in a[c]]
            for r in range(n):
                if r != c and a[r][c]:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return Matrix([row[n:] for row in a])


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form of a dense matrix.

    Returns ``(rref_matrix, pivot_columns, rank)``; the result matrix
    keeps the shape of the input with zero rows at the bottom.
    """
    a = [list(r) for r in m.rows]
    nrows, ncols = m.nrows, m.ncols
    pivots: list[int] = []
    pr = 0
    for c in range(ncols):
        p = next((r for r in range(pr, nrows) if a[r][c] != 0), None)
        if p is None:
            continue
        a[pr], a[p] = a[p], a[pr]
        inv = ONE / a[pr][c]
        a[pr] = [x * inv for x in a[pr]]
        for r in range(nrows):
            if r != pr and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[pr])]
        pivots.append(c)
        pr += 1
        if pr == nrows:
            break
    return Matrix(a), pivots, len(pivots)


# ---------------------------------------------------------------------------
# Sparse vectors (dict coord -> nonzero Fraction)


def vec_sub_scaled(dst: dict, src: Mapping, c: Fraction) -> dict:
    """Return dst - c*src as a new sparse dict."""
    out = dict(dst)
    for k, v in src.items():
        nv = out.get(k, ZERO) - c * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def vec_scale(v: Mapping, c: Fraction) -> dict:
    return {k: c * x for k, x in v.items()} if c else {}


# ---------------------------------------------------------------------------
# Subspaces in canonical reduced row echelon form


class Subspace:
    """A subspace of k^N stored as a fully reduced RREF basis.

    The stored basis is canonical: two subspaces are equal as spans if
    and only if they compare equal structurally.  Rows are sparse dicts
    keyed by coordinate index, each normalized to 1 at its pivot, with
    pivot columns cleared from all other rows.
    """

    __slots__ = ("ambient", "_rows")

    def __init__(self, ambient: int, rows: Iterable[Mapping] = ()):
        self.ambient = ambient
        self._rows: dict[int, dict] = {}
        for row in rows:
            self._insert(dict(row))

    def _insert(self, row: dict) -> None:
        # Reduce the incoming row against every pivot in its support,
        # then back-eliminate the new pivot column from every stored
        # row; keeps full RREF at all times so reads never need a
        # finalize step.  Stored rows carry no foreign pivot columns,
        # so each subtraction strictly shrinks the pivot support.
        row = {k: scalar(v) for k, v in row.items() if v}
        while row:
            hit = next((k for k in row if k in self._rows), None)
            if hit is None:
                break
            row = vec_sub_scaled(row, self._rows[hit], row[hit])
        if not row:
            return
        if max(row) >= self.ambient or min(row) < 0:
            raise ValueError("coordinate outside ambient space")
        lead = min(row)
        inv = ONE / row[lead]
        row = {k: v * inv for k, v in row.items()}
        for p, r in list(self._rows.items()):
            if lead in r:
                self._rows[p] = vec_sub_scaled(r, row, r[lead])
        self._rows[lead] = row

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(n, ({i: ONE} for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(sorted(self._rows))

    def basis(self) -> list[dict]:
        """RREF basis rows in pivot order (copies)."""
        return [dict(self._rows[p]) for p in sorted(self._rows)]

    def row_for_pivot(self, p: int) -> dict:
        return dict(self._rows[p])

    def reduce(self, vec: Mapping) -> dict:
        """Canonical remainder of vec modulo this subspace."""
        out = dict(vec)
        while True:
            hits = [k for k in out if k in self._rows]
            if not hits:
                return out
            for k in hits:
                c = out.get(k)
                if c:
                    out = vec_sub_scaled(out, self._rows[k], c)

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def coords(self, vec: Mapping) -> list[Fraction] | None:
        """Coefficients of vec in the RREF basis, or None if outside.

        For an RREF basis the coefficient on the row with pivot p is
        just vec[p], which is what makes pivot reads cheap everywhere.
        """
        piv = sorted(self._rows)
        cs = [scalar(vec.get(p, ZERO)) for p in piv]
        recon: dict = {}
        for c, p in zip(cs, piv):
            if c:
                recon = vec_sub_scaled(recon, self._rows[p], -c)
        if recon != {k: scalar(v) for k, v in vec.items() if v}:
            return None
        return cs

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self._rows == other._rows
        )

    def __hash__(self):
        return hash((self.ambient, tuple(sorted((p, tuple(sorted(r.items()))) for p, r in self._rows.items()))))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of k^{self.ambient})"


def subspace_sum(s1: Subspace, s2: Subspace) -> Subspace:
    if s1.ambient != s2.ambient:
        raise ValueError("ambient dimension mismatch")
    return Subspace(s1.ambient, s1.basis() + s2.basis())


def subspace_intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """Intersection via the kernel of the stacked-basis system."""
    if s1.ambient != s2.ambient:
        raise ValueError("ambient dimension mismatch")
    b1, b2 = s1.basis(), s2.basis()
    if not b1 or not b2:
        return Subspace(s1.ambient)
    cols = b1 + [vec_scale(r, -ONE) for r in b2]
    _, kernel = solve_columns(cols, [])
    rows = []
    for kv in kernel:
        acc: dict = {}
        for j, c in kv.items():
            if j < len(b1):
                acc = vec_sub_scaled(acc, b1[j], -c)
        rows.append(acc)
    return Subspace(s1.ambient, rows)


# ---------------------------------------------------------------------------
# Affine solving


def solve_columns(
    cols: Sequence[Mapping], rhs_list: Sequence[Mapping]
) -> tuple[list[list[Fraction] | None], list[dict]]:
    """Gauss-Jordan solve of sum_j x_j * cols[j] = rhs, all rhs at once.

    ``cols`` are sparse dicts over arbitrary sortable row keys; sharing
    one elimination across many right-hand sides is what keeps the
    sequence-pair stage solves cheap.

    Returns ``(particulars, kernel)`` where ``particulars[t]`` is the
    canonical solution of ``rhs_list[t]`` with every free unknown set to
    zero (``None`` if that system is inconsistent) and ``kernel`` is a
    basis of the homogeneous solution space, as sparse dicts over
    unknown indices.
    """
    u = len(cols)
    nrhs = len(rhs_list)
    # Row-major view: rowkey -> (coeffs over unknowns, rhs values).
    rows: dict = {}
    for j, col in enumerate(cols):
        for rk, v in col.items():
            if v:
                rows.setdefault(rk, ({}, [ZERO] * nrhs))[0][j] = v
    for t, rhs in enumerate(rhs_list):
        for rk, v in rhs.items():
            if v:
                rows.setdefault(rk, ({}, [ZERO] * nrhs))[1][t] = v
    pivots: dict[int, tuple[dict, list]] = {}
    inconsistent = [False] * nrhs
    for rk in sorted(rows, key=repr):
        coeffs, vals = rows[rk]
        coeffs = dict(coeffs)
        vals = list(vals)
        while coeffs:
            hit = next((k for k in coeffs if k in pivots), None)
            if hit is None:
                break
            piv = pivots[hit]
            f = coeffs[hit]
            coeffs = vec_sub_scaled(coeffs, piv[0], f)
            vals = [a - f * b for a, b in zip(vals, piv[1])]
        if not coeffs:
            for t, v in enumerate(vals):
                if v:
                    inconsistent[t] = True
            continue
        lead = min(coeffs)
        inv = ONE / coeffs[lead]
        coeffs = {k: v * inv for k, v in coeffs.items()}
        vals = [v * inv for v in vals]
        for p, (pc, pv) in list(pivots.items()):
            if lead in pc:
                f = pc[lead]
                pivots[p] = (
                    vec_sub_scaled(pc, coeffs, f),
                    [a - f * b for a, b in zip(pv, vals)],
                )
        pivots[lead] = (coeffs, vals)
    free = [j for j in range(u) if j not in pivots]
    kernel = []
    for f in free:
        kv = {f: ONE}
        for p, (pc, _) in pivots.items():
            c = pc.get(f)
            if c:
                kv[p] = -c
        kernel.append(kv)
    particulars: list[list[Fraction] | None] = []
    for t in range(nrhs):
        if inconsistent[t]:
            particulars.append(None)
            continue
        x = [ZERO] * u
        for p, (_, pv) in pivots.items():
            x[p] = pv[t]
        particulars.append(x)
    return particulars, kernel


def solve_affine(a: Matrix, b: Sequence) -> tuple[list[Fraction], Subspace]:
    """Solve a x = b exactly.

    Returns the canonical particular solution (free variables zeroed)
    and the kernel of ``a`` as a Subspace of k^ncols.  Raises
    ``NoSolutionError`` when b is outside the column space.
    """
    bs = [scalar(x) for x in b]
    if len(bs) != a.nrows:
        raise ValueError("right-hand side length mismatch")
    cols = []
    for j in range(a.ncols):
        cols.append({i: a.rows[i][j] for i in range(a.nrows) if a.rows[i][j]})
    rhs = {i: v for i, v in enumerate(bs) if v}
    particulars, kernel = solve_columns(cols, [rhs])
    if particulars[0] is None:
        raise NoSolutionError("b is outside the column space")
    return particulars[0], Subspace(a.ncols, kernel)


# ---------------------------------------------------------------------------
# Sparse tensors


class Tensor:
    """Sparse element of V^(x)m over an nv-letter alphabet.

    Entries map length-m words (tuples of 0-based letters) to nonzero
    scalars; zero entries are never stored.
    """

    __slots__ = ("nv", "degree", "entries")

    def __init__(self, nv: int, degree: int, entries: Mapping | None = None):
        self.nv = nv
        self.degree = degree
        es: dict[tuple, Fraction] = {}
        if entries:
            for w, c in entries.items():
                c = scalar(c)
                if not c:
                    continue
                w = tuple(w)
                if len(w) != degree or any(not (0 <= k < nv) for k in w):
                    raise ValueError(f"bad word {w} for degree {degree} over {nv} letters")
                es[w] = c
        self.entries = es

    @staticmethod
    def word(nv: int, w: Sequence[int], coeff=ONE) -> "Tensor":
        return Tensor(nv, len(w), {tuple(w): scalar(coeff)})

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self):
        return bool(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, Tensor)
            and self.nv == other.nv
            and self.degree == other.degree
            and self.entries == other.entries
        )

    def __repr__(self):
        if not self.entries:
            return f"Tensor(0 in V^{self.degree})"
        parts = [f"{scalar_str(c)}*{w}" for w, c in sorted(self.entries.items())]
        return "Tensor(" + " + ".join(parts) + ")"

    def _like(self, entries) -> "Tensor":
        t = Tensor.__new__(Tensor)
        t.nv = self.nv
        t.degree = self.degree
        t.entries = {w: c for w, c in entries.items() if c}
        return t

    def __add__(self, other: "Tensor") -> "Tensor":
        self._compat(other)
        es = dict(self.entries)
        for w, c in other.entries.items():
            s = es.get(w, ZERO) + c
            if s:
                es[w] = s
            else:
                es.pop(w, None)
        return self._like(es)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def __neg__(self) -> "Tensor":
        return self._like({w: -c for w, c in self.entries.items()})

    def scale(self, c) -> "Tensor":
        c = scalar(c)
        return self._like({w: c * v for w, v in self.entries.items()} if c else {})

    def _compat(self, other: "Tensor"):
        if self.nv != other.nv or self.degree != other.degree:
            raise ValueError("tensor shape mismatch")

    def tensor(self, other: "Tensor") -> "Tensor":
        if self.nv != other.nv:
            raise ValueError("alphabet mismatch")
        es = {}
        for w1, c1 in self.entries.items():
            for w2, c2 in other.entries.items():
                es[w1 + w2] = c1 * c2
        t = Tensor.__new__(Tensor)
        t.nv = self.nv
        t.degree = self.degree + other.degree
        t.entries = es
        return t

    def embed(self, nv_new: int) -> "Tensor":
        """Reinterpret over a larger alphabet (V inside V-hat)."""
        if nv_new < self.nv:
            raise ValueError("alphabet can only grow")
        t = Tensor.__new__(Tensor)
        t.nv = nv_new
        t.degree = self.degree
        t.entries = dict(self.entries)
        return t

    def apply_matrix_at(self, slot: int, m: Matrix) -> "Tensor":
        """Apply an nv x nv matrix (rows are images) to one factor.

        ``slot`` is 1-based, matching the usual tensor-leg notation.
        """
        if not (1 <= slot <= self.degree):
            raise ValueError("slot out of range")
        if m.nrows != self.nv or m.ncols != self.nv:
            raise ValueError("matrix size must match the alphabet")
        k = slot - 1
        es: dict[tuple, Fraction] = {}
        for w, c in self.entries.items():
            row = m.rows[w[k]]
            for j, a in enumerate(row):
                if a:
                    w2 = w[:k] + (j,) + w[k + 1 :]
                    s = es.get(w2, ZERO) + c * a
                    if s:
                        es[w2] = s
                    else:
                        es.pop(w2, None)
        t = Tensor.__new__(Tensor)
        t.nv = self.nv
        t.degree = self.degree
        t.entries = es
        return t

    def apply_images_at(self, slot: int, images: Sequence["Tensor"]) -> "Tensor":
        """Substitute a linear map V -> V^(x)k at one factor (1-based)."""
        if not (1 <= slot <= self.degree):
            raise ValueError("slot out of range")
        if len(images) != self.nv:
            raise ValueError("one image tensor per letter required")
        kdeg = images[0].degree
        es: dict[tuple, Fraction] = {}
        k = slot - 1
        for w, c in self.entries.items():
            img = images[w[k]]
            for wi, ci in img.entries.items():
                w2 = w[:k] + wi + w[k + 1 :]
                s = es.get(w2, ZERO) + c * ci
                if s:
                    es[w2] = s
                else:
                    es.pop(w2, None)
        t = Tensor.__new__(Tensor)
        t.nv = self.nv
        t.degree = self.degree + kdeg - 1
        t.entries = es
        return t

    def tau(self, i: int) -> "Tensor":
        """The staircase rotation tau_d^i: the first factor moves to
        position i+1 while factors 2..i+1 shift left one place."""
        if not (0 <= i <= self.degree - 1):
            raise ValueError("tau index out of range")
        if i == 0:
            return self
        es = {}
        for w, c in self.entries.items():
            es[w[1 : i + 1] + (w[0],) + w[i + 1 :]] = c
        t = Tensor.__new__(Tensor)
        t.nv = self.nv
        t.degree = self.degree
        t.entries = es
        return t

    def to_vec(self) -> dict[int, Fraction]:
        nv = self.nv
        return {word_flat(w, nv): c for w, c in self.entries.items()}

    @staticmethod
    def from_vec(vec: Mapping[int, Fraction], nv: int, degree: int) -> "Tensor":
        t = Tensor.__new__(Tensor)
        t.nv = nv
        t.degree = degree
        t.entries = {flat_word(f, degree, nv): scalar(c) for f, c in vec.items() if c}
        return t

    def terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.entries.items())


def apply_at_slot(t: Tensor, f: Matrix, slot: int) -> Tensor:
    """Apply a linear endomorphism of V to tensor factor ``slot`` (1-based)."""
    return t.apply_matrix_at(slot, f)


def tau_shift(t: Tensor, i: int) -> Tensor:
    """The rotation tau_d^i; tau_shift(t, d-1) is the full left rotation."""
    return t.tau(i)


def tensor_sum(ts: Iterable[Tensor], nv: int, degree: int) -> Tensor:
    acc = Tensor(nv, degree)
    for t in ts:
        acc = acc + t
    return acc


def expand_through(
    t: Tensor, left: int, space: Subspace, space_degree: int, right: int
) -> dict[tuple[tuple, int, tuple], Fraction]:
    """Coefficients of t in V^(x)left (x) S (x) V^(x)right.

    ``space`` is a subspace of V^(x)space_degree in canonical RREF, so
    the coefficient on (J_left, basis l, J_right) can be read off at
    the pivot word of basis row l.  The expansion is verified by
    reconstruction; ValueError if t is not in the sandwich subspace.
    """
    nv = t.nv
    piv = space.pivots
    pivot_words = [flat_word(p, space_degree, nv) for p in piv]
    basis_tensors = [
        Tensor.from_vec(space.row_for_pivot(p), nv, space_degree) for p in piv
    ]
    coeffs: dict[tuple[tuple, int, tuple], Fraction] = {}
    seen_pairs = set()
    for w in t.entries:
        jl, jr = w[:left], w[left + space_degree :]
        if (jl, jr) in seen_pairs:
            continue
        seen_pairs.add((jl, jr))
        for l, pw in enumerate(pivot_words):
            c = t.entries.get(jl + pw + jr)
            if c:
                coeffs[(jl, l, jr)] = c
    recon = Tensor(nv, t.degree)
    for (jl, l, jr), c in coeffs.items():
        recon = recon + Tensor.word(nv, jl).tensor(basis_tensors[l]).tensor(
            Tensor.word(nv, jr)
        ).scale(c)
    if recon != t:
        raise ValueError("tensor does not lie in the sandwich subspace")
    return coeffs
