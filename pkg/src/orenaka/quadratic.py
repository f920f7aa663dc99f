"""Quadratic algebras A = T(V)/(R).

Provides the Koszul spaces W_i, homogeneous monomial bases and normal
forms for the A_m, the Koszul differentials, and finite certification
of Koszulity and AS-regularity.

Certification philosophy: true Koszulity is not decidable by finite
rank computations, so ``certify_koszul`` verifies exactness of the
Koszul complex in every internal degree up to a bound N and every
report carries that bound.  AS-regularity is certified by the finite
necessary conditions (dim W_d = 1, W_{d+1} = 0, the dimension symmetry
dim W_i = dim W_{d-i}) on top of a Koszul certificate reaching at
least d+2.

Homogeneous bases: A_m is presented as (A_{m-1} (x) V) / im(A_{m-2}
(x) R), eliminated degree by degree; the surviving (monomial, letter)
pairs, in lexicographic word order, are the chosen monomial basis.
This keeps every elimination matrix small while staying deterministic
under the package-wide flattening order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CertificationError, NotASRegularError, NotCertifiedError
from .linalg import (
    ONE,
    ZERO,
    Matrix,
    Subspace,
    Tensor,
    flat_word,
    subspace_intersect,
)


@dataclass
class KoszulCertificate:
    """Outcome of the finite Koszul/AS checks.

    ``ranks[(m, i)]`` is the rank of the i-th Koszul differential in
    internal degree m.  ``as_regular``, ``d`` and ``omega`` stay unset
    until ``certify_as_regular`` runs.
    """

    bound: int
    ranks: dict = field(default_factory=dict)
    euler_ok: bool = True
    as_regular: bool = False
    d: int | None = None
    omega: Tensor | None = None


class _Piece:
    """Degree-m homogeneous data: chosen basis words and the reducer."""

    __slots__ = ("words", "index", "reducer", "pair_cols", "pair_map")

    def __init__(self, words, reducer, pair_cols):
        self.words = words
        self.index = {w: k for k, w in enumerate(words)}
        self.reducer = reducer          # Subspace of the (A_{m-1} x V) pair space
        self.pair_cols = pair_cols     # non-pivot pair columns, sorted
        self.pair_map: dict[int, dict] = {}


class QuadraticAlgebra:
    """T(V)/(R) with R a subspace of V (x) V.

    Immutable once certified; all memoized data is filled eagerly by
    the certification entry points and read-only afterwards.
    """

    def __init__(self, names: Sequence[str], relations: Iterable[Tensor] | Subspace):
        self.names = tuple(str(x) for x in names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        self.nv = len(self.names)
        if self.nv == 0:
            raise ValueError("need at least one generator")
        if isinstance(relations, Subspace):
            if relations.ambient != self.nv**2:
                raise ValueError("relation subspace has wrong ambient dimension")
            self.R = relations
        else:
            rows = []
            for t in relations:
                if t.degree != 2 or t.nv != self.nv:
                    raise ValueError("relations must be degree-2 tensors over V")
                rows.append(t.to_vec())
            self.R = Subspace(self.nv**2, rows)
        self._pieces: list[_Piece] = []
        self._W: list[Subspace] = []
        self._nf_cache: dict[tuple, dict] = {}
        self._sandwich = None          # R(x)V + V(x)R, for derivation admissibility
        self.certificate: KoszulCertificate | None = None
        self._nakayama = None          # filled by morphisms.nakayama_of_A

    # -- homogeneous pieces -------------------------------------------------

    def _piece(self, m: int) -> _Piece:
        while len(self._pieces) <= m:
            k = len(self._pieces)
            if k == 0:
                self._pieces.append(_Piece([()], None, None))
            elif k == 1:
                self._pieces.append(_Piece([(j,) for j in range(self.nv)], None, None))
            else:
                self._pieces.append(self._build_piece(k))
        return self._pieces[m]

    def _build_piece(self, m: int) -> _Piece:
        nv = self.nv
        lower = self._piece(m - 1)
        lower2 = self._piece(m - 2)
        rel_rows = self.R.basis()
        rows = []
        for aw in lower2.words:
            for rel in rel_rows:
                row: dict[int, Fraction] = {}
                for pair_flat, c in rel.items():
                    u, v = divmod(pair_flat, nv)
                    for b_idx, cb in self.nf_word(aw + (u,)).items():
                        key = b_idx * nv + v
                        s = row.get(key, ZERO) + c * cb
                        if s:
                            row[key] = s
                        else:
                            row.pop(key, None)
                rows.append(row)
        reducer = Subspace(len(lower.words) * nv, rows)
        pivots = set(reducer.pivots)
        pair_cols = [p for p in range(len(lower.words) * nv) if p not in pivots]
        words = [lower.words[p // nv] + (p % nv,) for p in pair_cols]
        return _Piece(words, reducer, pair_cols)

    def dim_A(self, m: int) -> int:
        if m < 0:
            return 0
        return len(self._piece(m).words)

    def basis_words(self, m: int) -> list[tuple]:
        """Chosen monomial basis of A_m as words, in lexicographic order."""
        return list(self._piece(m).words)

    def nf_word(self, word: tuple) -> dict[int, Fraction]:
        """Normal form of a tensor word: sparse coords in the A_m basis."""
        word = tuple(word)
        m = len(word)
        if m == 0:
            return {0: ONE}
        if m == 1:
            return {word[0]: ONE}
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        prefix = self.nf_word(word[:-1])
        out: dict[int, Fraction] = {}
        for b_idx, cb in prefix.items():
            for k, c in self._pair_to_basis(m, b_idx * self.nv + word[-1]).items():
                s = out.get(k, ZERO) + cb * c
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        self._nf_cache[word] = out
        return out

    def _pair_to_basis(self, m: int, pair: int) -> dict[int, Fraction]:
        piece = self._piece(m)
        hit = piece.pair_map.get(pair)
        if hit is not None:
            return hit
        rem = piece.reducer.reduce({pair: ONE})
        col_index = {p: k for k, p in enumerate(piece.pair_cols)}
        out = {col_index[p]: c for p, c in rem.items()}
        piece.pair_map[pair] = out
        return out

    def nf_tensor(self, t: Tensor) -> dict[int, Fraction]:
        """Normal form of an arbitrary tensor of homogeneous degree."""
        out: dict[int, Fraction] = {}
        for w, c in t.entries.items():
            for k, v in self.nf_word(w).items():
                s = out.get(k, ZERO) + c * v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    # -- Koszul spaces ------------------------------------------------------

    def koszul_space(self, i: int) -> Subspace:
        """W_i, via the nested form (W_{i-1} (x) V) n (V (x) W_{i-1}).

        The nested form equals the defining intersection of all shifted
        copies of R because tensoring with V commutes with subspace
        intersection; the test suite asserts this against the direct
        definition.
        """
        if i < 0:
            raise ValueError("negative Koszul index")
        while len(self._W) <= i:
            k = len(self._W)
            if k == 0:
                self._W.append(Subspace(1, [{0: ONE}]))
            elif k == 1:
                self._W.append(Subspace.full(self.nv))
            elif k == 2:
                self._W.append(self.R)
            else:
                prev = self._W[k - 1]
                if prev.dim == 0:
                    self._W.append(Subspace(self.nv**k))
                    continue
                right = _shift_subspace(prev, self.nv, 0, 1)
                left = _shift_subspace(prev, self.nv, 1, 0)
                self._W.append(subspace_intersect(right, left))
        return self._W[i]

    def ideal_component(self, m: int) -> Subspace:
        """Degree-m piece of the two-sided ideal (R).

        Materializes the sum of all shifted copies of R inside V^(x)m;
        intended for small m (the spanning set has (m-1)*dim R*n^(m-2)
        rows).  dim A_m = n^m - dim of the result.
        """
        if m < 2:
            raise ValueError("ideal components start at degree 2")
        nv = self.nv
        rows = []
        for s in range(m - 1):
            right = m - s - 2
            for rel in self.R.basis():
                for left_flat in range(nv**s):
                    base = left_flat * nv ** (m - s)
                    for right_flat in range(nv**right):
                        rows.append(
                            {
                                base + pf * nv**right + right_flat: c
                                for pf, c in rel.items()
                            }
                        )
        return Subspace(nv**m, rows)

    def koszul_space_direct(self, i: int) -> Subspace:
        """W_i straight from the defining intersection (test oracle)."""
        nv = self.nv
        if i == 0:
            return Subspace(1, [{0: ONE}])
        if i == 1:
            return Subspace.full(nv)
        acc = None
        for s in range(i - 1):
            shifted = _embed_relation_block(self.R, nv, s, i - s - 2)
            acc = shifted if acc is None else subspace_intersect(acc, shifted)
        return acc

    def sandwich_space(self) -> Subspace:
        """R (x) V + V (x) R inside V^(x)3."""
        if self._sandwich is None:
            nv = self.nv
            rows = []
            for rel in self.R.basis():
                for j in range(nv):
                    rows.append({pf * nv + j: c for pf, c in rel.items()})
                    rows.append({j * nv * nv + pf: c for pf, c in rel.items()})
            self._sandwich = Subspace(nv**3, rows)
        return self._sandwich

    # -- Koszul complex -----------------------------------------------------

    def left_mult(self, letter: int, m: int, a_idx: int) -> dict[int, Fraction]:
        """Coordinates of x_letter * (basis monomial of A_m) in A_{m+1}."""
        return self.nf_word((letter,) + self._piece(m).words[a_idx])

    def koszul_differential(self, i: int, j: int) -> Matrix:
        """Matrix of W_i (x) A_j -> W_{i-1} (x) A_{j+1}.

        Rows are indexed by the domain basis (W_i basis vector, A_j
        monomial), columns by the codomain basis, consistent with the
        rows-are-images convention.  The map multiplies the last tensor
        factor of W_i into A on the left of the A_j part.
        """
        if i < 1:
            raise ValueError("differential index starts at 1")
        nv = self.nv
        wi = self.koszul_space(i)
        wprev = self.koszul_space(i - 1)
        dim_aj = self.dim_A(j)
        dim_anext = self.dim_A(j + 1)
        ncols = wprev.dim * dim_anext
        rows = []
        for b in wi.basis():
            t = Tensor.from_vec(b, nv, i)
            # expansion of the W_i vector in W_{i-1} (x) V; for i = 1 the
            # W_0 factor is the scalar line with single basis index 0
            if i == 1:
                pairs = [(0, w[0], c) for w, c in t.entries.items()]
            else:
                exp = _expand_right(t, wprev, i - 1)
                pairs = [(l, v, c) for (l, v), c in exp.items()]
            for a_idx in range(dim_aj):
                row = [ZERO] * ncols
                for l, v, c in pairs:
                    for k, cv in self.left_mult(v, j, a_idx).items():
                        row[l * dim_anext + k] += c * cv
                rows.append(row)
        if not rows:
            return Matrix.zero(0, ncols)
        return Matrix(rows)

    def certify_koszul(self, bound: int | None = None) -> KoszulCertificate:
        """Verify exactness of the Koszul complex of k_A through internal
        degree ``bound`` by rank computations, plus the Euler identity.

        Raises CertificationError at the first failing position.  A
        passing certificate says nothing beyond the bound; that is the
        strongest finite statement available.
        """
        n = bound if bound is not None else (self.certificate.d + 3 if self.certificate and self.certificate.d else 8)
        if n < 2:
            raise ValueError("certification bound must be at least 2")
        if self.certificate is not None and self.certificate.bound >= n:
            return self.certificate
        cert = KoszulCertificate(bound=n)
        # W spaces vanish for good once one is zero (W_i <= W_{i-1} (x) V).
        wmax = 0
        while self.koszul_space(wmax + 1).dim > 0 and wmax + 1 <= n:
            wmax += 1
        for m in range(1, n + 1):
            dims = [
                self.koszul_space(i).dim * self.dim_A(m - i)
                for i in range(0, min(m, wmax) + 1)
            ]
            ranks = []
            for i in range(1, min(m, wmax) + 1):
                mat = self.koszul_differential(i, m - i)
                rank = Subspace(
                    mat.ncols,
                    [
                        {k: v for k, v in enumerate(row) if v}
                        for row in mat.rows
                    ],
                ).dim
                ranks.append(rank)
                cert.ranks[(m, i)] = rank
            # exactness at A_m: the complex resolves k, so im d1 = A_m
            if m >= 1 and (not ranks or ranks[0] != self.dim_A(m)):
                got = ranks[0] if ranks else 0
                raise CertificationError(
                    f"complex not exact at A_{m}: rank {got} != dim {self.dim_A(m)}",
                    degree=m,
                    position=0,
                )
            for i in range(1, min(m, wmax) + 1):
                nxt = ranks[i] if i < len(ranks) else 0
                if ranks[i - 1] + nxt != dims[i]:
                    raise CertificationError(
                        f"complex not exact at W_{i} (x) A_{m - i}",
                        degree=m,
                        position=i,
                    )
            # implied by exactness; kept as an independent safety net
            euler = sum((-1) ** i * d for i, d in enumerate(dims))
            if euler != 0:
                cert.euler_ok = False
                raise CertificationError(
                    f"Euler identity fails in degree {m}", degree=m
                )
        if self.certificate is not None:
            cert.as_regular = self.certificate.as_regular
            cert.d = self.certificate.d
            cert.omega = self.certificate.omega
        self.certificate = cert
        return cert

    def certify_as_regular(self, max_search: int = 12):
        """Locate d with W_d != 0 = W_{d+1} and run the finite AS checks.

        Returns (d, omega) with omega the canonical basis tensor of W_d
        (RREF representative, leading coordinate 1).  Raises
        NotASRegularError if any check fails.
        """
        if self.certificate is not None and self.certificate.as_regular:
            return self.certificate.d, self.certificate.omega
        d = None
        for i in range(1, max_search + 2):
            if self.koszul_space(i).dim == 0:
                d = i - 1
                break
        if d is None:
            raise NotASRegularError(
                f"W_i stays nonzero through degree {max_search + 1}"
            )
        if d == 0:
            raise NotASRegularError("R is the full space V (x) V")
        wd = self.koszul_space(d)
        if wd.dim != 1:
            raise NotASRegularError(f"dim W_{d} = {wd.dim} != 1")
        for i in range(0, d + 1):
            if self.koszul_space(i).dim != self.koszul_space(d - i).dim:
                raise NotASRegularError(
                    f"dim W_{i} != dim W_{d - i}: "
                    f"{self.koszul_space(i).dim} vs {self.koszul_space(d - i).dim}"
                )
        cert = self.certify_koszul(max(d + 3, self.certificate.bound if self.certificate else 0))
        omega = Tensor.from_vec(wd.basis()[0], self.nv, d)
        cert.as_regular = True
        cert.d = d
        cert.omega = omega
        self.certificate = cert
        return d, omega

    # -- certified accessors -------------------------------------------------

    @property
    def certified(self) -> bool:
        return self.certificate is not None and self.certificate.as_regular

    @property
    def d(self) -> int:
        self.ensure_as_regular()
        return self.certificate.d

    @property
    def omega(self) -> Tensor:
        self.ensure_as_regular()
        return self.certificate.omega

    def ensure_as_regular(self):
        if not self.certified:
            self.certify_as_regular()
        return self

    def require_certified(self):
        if not self.certified:
            raise NotCertifiedError("algebra has no AS certificate")
        return self

    def __repr__(self):
        rel = self.R.dim
        return f"QuadraticAlgebra(<{', '.join(self.names)}> with {rel} relations)"


# -- helpers ----------------------------------------------------------------


def _shift_subspace(s: Subspace, nv: int, left: int, right: int) -> Subspace:
    """V^(x)left (x) S (x) V^(x)right as a subspace of the bigger power.

    Shifting an RREF basis by unit tensors keeps it an RREF basis, so
    no re-elimination happens here.
    """
    rows = []
    for b in s.basis():
        for lf in range(nv**left):
            for rf in range(nv**right):
                base = lf * s.ambient * nv**right
                rows.append({base + p * nv**right + rf: c for p, c in b.items()})
    return Subspace(s.ambient * nv ** (left + right), rows)


def _embed_relation_block(r: Subspace, nv: int, left: int, right: int) -> Subspace:
    return _shift_subspace(r, nv, left, right)


def _expand_right(t: Tensor, space: Subspace, sdeg: int) -> dict[tuple[int, int], Fraction]:
    """Coefficients of t in S (x) V, reading at pivot words of S."""
    nv = t.nv
    out: dict[tuple[int, int], Fraction] = {}
    pivot_words = {flat_word(p, sdeg, nv): l for l, p in enumerate(space.pivots)}
    for w, c in t.entries.items():
        l = pivot_words.get(w[:-1])
        if l is not None:
            out[(l, w[-1])] = c
    # verification by reconstruction
    basis = space.basis()
    recon: dict[tuple, Fraction] = {}
    for (l, v), c in out.items():
        bt = Tensor.from_vec(basis[l], nv, sdeg)
        for bw, bc in bt.entries.items():
            key = bw + (v,)
            s = recon.get(key, ZERO) + c * bc
            if s:
                recon[key] = s
            else:
                recon.pop(key, None)
    if recon != t.entries:
        raise ValueError("tensor does not lie in S (x) V")
    return out
