"""Graded Ore extensions B = A[z; sigma, delta].

The pipeline: build a sequence pair (the two towers of linear maps
delta_{i,r}: W_i -> W_i (x) V and delta_{i,l}: W_i -> V (x) W_i), read
the pair (delta_r, delta_l) off the one-dimensional top space W_d,
form the sigma-divergence delta_r + mu_A sigma^{-1}(delta_l), and
assemble the Nakayama automorphism of B:

    mu_B on V   : matrix M^{-1} P   (M = matrix of sigma, P = of mu_A)
    mu_B(z)     : hdet(sigma) z + divergence

plus the twisted superpotential omega-hat presenting B as a derivation
quotient algebra.

Right towers are built stage by stage: delta_{i,r}(w) is any element u
of W_i (x) V with (id^(i-1) (x) m)(u) matching the multiplication of
(sigma^(i-1) (x) delta + delta_{i-1,r} (x) id)(w) into A_2; the solver
takes the canonical particular solution (free variables zeroed) so
runs are reproducible, and optionally adds random kernel vectors when
exercising the choice-independence of the divergence.  Left towers
then follow from the alternating recursion and never need a solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import random

from .errors import (
    AutomorphismCheckFailedError,
    EngineInvariantError,
    FormMismatchError,
    LeftImageEscapeError,
    NoSolutionError,
    NotInHatWError,
    TwistFailureError,
)
from .linalg import (
    ONE,
    ZERO,
    Matrix,
    Subspace,
    Tensor,
    expand_through,
    flat_word,
    solve_columns,
)
from .morphisms import (
    DerivationLift,
    GradedAutomorphism,
    hdet,
    nakayama_of_A,
)
from .quadratic import QuadraticAlgebra


def _sign(i: int) -> Fraction:
    return ONE if i % 2 == 0 else -ONE


class SequencePair:
    """The two towers of maps attached to a derivation lift.

    ``right[i]`` / ``left[i]`` hold the images of the W_i basis vectors
    (pivot order) under delta_{i,r} / delta_{i,l}; index 0 holds the
    zero maps and index 1 the lift itself, so the defining recursions
    can be read literally off the stored data.
    """

    __slots__ = ("algebra", "sigma", "delta", "right", "left")

    def __init__(self, sigma, delta, right, left):
        self.algebra = sigma.algebra
        self.sigma = sigma
        self.delta = delta
        self.right = right
        self.left = left

    @property
    def d(self) -> int:
        return len(self.right) - 1

    def apply_right(self, i: int, t: Tensor, right_pad: int) -> Tensor:
        """(delta_{i,r} (x) id^(x)right_pad)(t) for t in W_i (x) V^(x)right_pad."""
        return self._apply(i, t, 0, right_pad, left_tower=False, twist_left=False)

    def apply_left(self, i: int, t: Tensor, left_pad: int, right_pad: int = 0,
                   twist_left: bool = True) -> Tensor:
        """(sigma^(x)left_pad (x) delta_{i,l} (x) id^(x)right_pad)(t)."""
        return self._apply(i, t, left_pad, right_pad, left_tower=True,
                           twist_left=twist_left)

    def _apply(self, i, t, left_pad, right_pad, left_tower, twist_left):
        alg = self.algebra
        nv = alg.nv
        images = (self.left if left_tower else self.right)[i]
        coeffs = expand_through(t, left_pad, alg.koszul_space(i), i, right_pad)
        out = Tensor(nv, t.degree + 1)
        for (jl, l, jr), c in coeffs.items():
            head = Tensor.word(nv, jl, c)
            if twist_left and left_pad:
                head = self.sigma.apply_all(head)
            out = out + head.tensor(images[l]).tensor(Tensor.word(nv, jr))
        return out

    def verify(self) -> None:
        """Re-check both tower conditions and image containments.

        Construction already guarantees these; the method exists for the
        paranoid check level and the test suite.
        """
        alg = self.algebra
        nv = alg.nv
        d = self.d
        for i in range(2, d + 1):
            wi = alg.koszul_space(i)
            wvecs = [Tensor.from_vec(b, nv, i) for b in wi.basis()]
            wiv = _tensor_with_v(wi, nv, on_right=True)
            vwi = _tensor_with_v(wi, nv, on_right=False)
            for k, w in enumerate(wvecs):
                lhs = _mult_last_two(alg, self.right[i][k])
                rhs = _mult_last_two(
                    alg,
                    _sigma_power_delta(self.sigma, self.delta, w, i)
                    + self.apply_right(i - 1, w, 1),
                )
                if lhs != rhs:
                    raise EngineInvariantError(f"right tower fails at stage {i}")
                if not wiv.contains(self.right[i][k].to_vec()):
                    raise EngineInvariantError(f"right image escapes W_{i}(x)V")
                if not vwi.contains(self.left[i][k].to_vec()):
                    raise LeftImageEscapeError(f"left image escapes V(x)W_{i}")
                recursion = (
                    _sigma_tensor_right(self.sigma, self, i - 1, w)
                    + self.apply_left(i - 1, w, 0, 1).scale(_sign(i))
                    - self.right[i][k]
                    - self.left[i][k].scale(_sign(i))
                )
                if recursion:
                    raise EngineInvariantError(f"left recursion fails at stage {i}")


def _tensor_with_v(space: Subspace, nv: int, on_right: bool) -> Subspace:
    rows = []
    for b in space.basis():
        for j in range(nv):
            if on_right:
                rows.append({p * nv + j: c for p, c in b.items()})
            else:
                rows.append({j * space.ambient + p: c for p, c in b.items()})
    return Subspace(space.ambient * nv, rows)


def _mult_last_two(alg: QuadraticAlgebra, t: Tensor):
    """(id^(x)(deg-2) (x) m)(t): multiply the last two factors into A_2.

    Returns a sparse dict keyed by (leading word, A_2 basis index).
    """
    out: dict = {}
    for w, c in t.entries.items():
        for k, v in alg.nf_word(w[-2:]).items():
            key = (w[:-2], k)
            s = out.get(key, ZERO) + c * v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out

def _sigma_power_delta(sigma, delta, w: Tensor, i: int) -> Tensor:
    """(sigma^(x)(i-1) (x) delta)(w) on W_i."""
    t = w
    for slot in range(1, i):
        t = t.apply_matrix_at(slot, sigma.matrix)
    return t.apply_images_at(i, delta.images)


def _sigma_tensor_right(sigma, sp: SequencePair, i: int, w: Tensor) -> Tensor:
    """(sigma (x) delta_{i,r})(w) for w in W_{i+1} <= V (x) W_i."""
    alg = sigma.algebra
    nv = alg.nv
    coeffs = expand_through(w, 1, alg.koszul_space(i), i, 0)
    out = Tensor(nv, w.degree + 1)
    for (jl, l, _), c in coeffs.items():
        head = sigma.apply_vector(Tensor.word(nv, jl, c))
        out = out + head.tensor(sp.right[i][l])
    return out


@dataclass
class Delta2Decomposition:
    """delta restricted to R split as an R(x)V part and a V(x)R part."""

    right_images: list[Tensor]
    left_images: list[Tensor]


def decompose_delta2(delta: DerivationLift) -> Delta2Decomposition:
    """Split delta|_R into delta_{2,r} + delta_{2,l} by a linear solve.

    Solves the membership system for each RREF basis relation and takes
    the canonical particular solution, so the split is deterministic
    even when R(x)V n V(x)R is nonzero.
    """
    alg = delta.algebra
    nv = alg.nv
    rel = [Tensor.from_vec(b, nv, 2) for b in alg.R.basis()]
    cols = []
    tags = []
    for rt in rel:
        for j in range(nv):
            cols.append(rt.tensor(Tensor.word(nv, (j,))).to_vec())
            tags.append(("r", rt, j))
    for j in range(nv):
        for rt in rel:
            cols.append(Tensor.word(nv, (j,)).tensor(rt).to_vec())
            tags.append(("l", rt, j))
    rhs = [delta.extend(rt).to_vec() for rt in rel]
    particulars, _ = solve_columns(cols, rhs)
    rights, lefts = [], []
    for t, x in enumerate(particulars):
        if x is None:
            raise NoSolutionError(
                "delta(R) not in R(x)V + V(x)R despite admissibility check"
            )
        right = Tensor(nv, 3)
        left = Tensor(nv, 3)
        for c, (side, rt, j) in zip(x, tags):
            if not c:
                continue
            if side == "r":
                right = right + rt.tensor(Tensor.word(nv, (j,))).scale(c)
            else:
                left = left + Tensor.word(nv, (j,)).tensor(rt).scale(c)
        if right + left != delta.extend(rel[t]):
            raise EngineInvariantError("degree-2 decomposition fails to re-add")
        rights.append(right)
        lefts.append(left)
    return Delta2Decomposition(rights, lefts)


def build_sequence_pair(
    sigma: GradedAutomorphism,
    delta: DerivationLift,
    rng: random.Random | None = None,
) -> SequencePair:
    """Construct a sequence pair for (sigma, delta).

    With ``rng`` given, random kernel elements are added to the
    canonical choice at every right-tower stage; any such choice is a
    valid sequence pair and must produce the same divergence.
    """
    alg = sigma.algebra.ensure_as_regular()
    if delta.sigma is not sigma:
        raise ValueError("delta was built against a different sigma")
    nv = alg.nv
    d = alg.certificate.d
    zero1 = [Tensor(nv, 1) for _ in range(1)]
    right: list[list[Tensor]] = [zero1, list(delta.images)]
    left: list[list[Tensor]] = [zero1, list(delta.images)]
    for i in range(2, d + 1):
        wi = alg.koszul_space(i)
        wvecs = [Tensor.from_vec(b, nv, i) for b in wi.basis()]
        cols = []
        tags = []
        for l, bt in enumerate([Tensor.from_vec(b, nv, i) for b in wi.basis()]):
            for j in range(nv):
                cols.append(_mult_last_two(alg, bt.tensor(Tensor.word(nv, (j,)))))
                tags.append((l, j))
        rhs = []
        for w in wvecs:
            src = _sigma_power_delta(sigma, delta, w, i) + _apply_right_images(
                alg, right[i - 1], i - 1, w
            )
            rhs.append(_mult_last_two(alg, src))
        particulars, kernel = solve_columns(cols, rhs)
        stage = []
        for k, x in enumerate(particulars):
            if x is None:
                raise NoSolutionError(
                    f"no delta_{i},r image for W_{i} basis vector {k}; "
                    "Koszulity hypotheses are violated"
                )
            if rng is not None and kernel:
                x = list(x)
                for kv in kernel:
                    c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
                    for unk, v in kv.items():
                        x[unk] += c * v
            img = Tensor(nv, i + 1)
            for c, (l, j) in zip(x, tags):
                if c:
                    img = img + Tensor.from_vec(wi.basis()[l], nv, i).tensor(
                        Tensor.word(nv, (j,))
                    ).scale(c)
            stage.append(img)
        right.append(stage)
        # left tower by the alternating recursion; no choice remains
        sp_tmp = SequencePair(sigma, delta, right, left)
        sgn = _sign(i)
        vwi = _tensor_with_v(wi, nv, on_right=False)
        lstage = []
        for k, w in enumerate(wvecs):
            term = (
                _sigma_tensor_right(sigma, sp_tmp, i - 1, w)
                - right[i][k]
            ).scale(sgn) + sp_tmp.apply_left(i - 1, w, 0, 1)
            if not vwi.contains(term.to_vec()):
                raise LeftImageEscapeError(
                    f"left tower image escapes V(x)W_{i} at stage {i}"
                )
            lstage.append(term)
        left.append(lstage)
    return SequencePair(sigma, delta, right, left)


def _apply_right_images(alg, images_prev, i_prev, w: Tensor) -> Tensor:
    """(delta_{i-1,r} (x) id)(w) for w in W_i <= W_{i-1} (x) V."""
    nv = alg.nv
    coeffs = expand_through(w, 0, alg.koszul_space(i_prev), i_prev, 1)
    out = Tensor(nv, w.degree + 1)
    for (_, l, jr), c in coeffs.items():
        out = out + images_prev[l].tensor(Tensor.word(nv, jr)).scale(c)
    return out


@dataclass
class DivergenceResult:
    """delta_r, delta_l read off W_d, and the sigma-divergence."""

    delta_r: Tensor
    delta_l: Tensor
    divergence: Tensor


def divergence(
    sigma: GradedAutomorphism,
    delta: DerivationLift,
    sp: SequencePair | None = None,
) -> DivergenceResult:
    """The sigma-divergence delta_r + mu_A sigma^{-1}(delta_l).

    delta_{d,r}(omega) = omega (x) delta_r and delta_{d,l}(omega) =
    delta_l (x) omega hold exactly because dim W_d = 1; the divergence
    does not depend on the sequence pair even though (delta_r, delta_l)
    individually do.
    """
    alg = sigma.algebra.ensure_as_regular()
    if sp is None:
        sp = build_sequence_pair(sigma, delta)
    nv = alg.nv
    d = alg.certificate.d
    omega = alg.certificate.omega
    pivot = min(omega.entries)
    img_r = sp.right[d][0]
    dr = Tensor(nv, 1, {(j,): img_r.entries.get(pivot + (j,), ZERO) for j in range(nv)})
    if omega.tensor(dr) != img_r:
        raise EngineInvariantError("delta_{d,r}(omega) is not omega (x) v")
    img_l = sp.left[d][0]
    dl = Tensor(nv, 1, {(j,): img_l.entries.get((j,) + pivot, ZERO) for j in range(nv)})
    if dl.tensor(omega) != img_l:
        raise EngineInvariantError("delta_{d,l}(omega) is not v (x) omega")
    p = nakayama_of_A(alg).matrix
    n_map = sigma.matrix.inverse() * p
    dl_coords = [dl.entries.get((j,), ZERO) for j in range(nv)]
    moved = n_map.transpose().mul_vec(dl_coords)
    div = dr + Tensor(nv, 1, {(j,): moved[j] for j in range(nv)})
    return DivergenceResult(dr, dl, div)


def ore_relations(sigma: GradedAutomorphism, delta: DerivationLift) -> Subspace:
    """R-hat = R + span{z (x) x_i - sigma(x_i) (x) z - delta(x_i)}.

    A subspace of V-hat (x) V-hat with V-hat = V + k z; z is the last
    letter of the extended alphabet.
    """
    alg = sigma.algebra
    nv = alg.nv
    nh = nv + 1
    rows = []
    for b in alg.R.basis():
        rows.append(
            {(p // nv) * nh + (p % nv): c for p, c in b.items()}
        )
    for i in range(nv):
        row: dict[int, Fraction] = {nv * nh + i: ONE}
        for j in range(nv):
            c = sigma.matrix[i, j]
            if c:
                row[j * nh + nv] = -c
        for (a, b), c in delta.images[i].entries.items():
            key = a * nh + b
            row[key] = row.get(key, ZERO) - c
        rows.append(row)
    out = Subspace(nh * nh, rows)
    if out.dim != alg.R.dim + nv:
        raise EngineInvariantError("dim R-hat != dim R + n")
    return out


@dataclass
class OreReport:
    """Everything the main theorem yields for one (sigma, delta)."""

    algebra: QuadraticAlgebra
    sigma: GradedAutomorphism
    delta: DerivationLift
    hdet: Fraction
    div: DivergenceResult
    mu_B: Matrix
    relations_hat: Subspace
    calabi_yau: bool
    omega_hat: Tensor | None
    sequence_pair: SequencePair

    @property
    def mu_B_on_V(self) -> Matrix:
        n = self.algebra.nv
        return Matrix([[self.mu_B[i, j] for j in range(n)] for i in range(n)])


def nakayama_of_B(
    sigma: GradedAutomorphism,
    delta: DerivationLift,
    sp: SequencePair | None = None,
    with_superpotential: bool = True,
) -> OreReport:
    """Nakayama automorphism of B = A[z; sigma, delta] and companions.

    The V-block of mu_B is M^{-1} P and the z-row is (divergence
    coordinates, hdet(sigma)); the assembled matrix is verified to
    preserve R-hat, and the Calabi-Yau flag is sigma = mu_A together
    with vanishing divergence.
    """
    alg = sigma.algebra.ensure_as_regular()
    if sp is None:
        sp = build_sequence_pair(sigma, delta)
    nv = alg.nv
    h = hdet(sigma)
    div = divergence(sigma, delta, sp)
    p = nakayama_of_A(alg).matrix
    v_block = sigma.matrix.inverse() * p
    rows = [[v_block[i, j] for j in range(nv)] + [ZERO] for i in range(nv)]
    rows.append([div.divergence.entries.get((j,), ZERO) for j in range(nv)] + [h])
    mu_b = Matrix(rows)
    r_hat = ore_relations(sigma, delta)
    for b in r_hat.basis():
        t = Tensor.from_vec(b, nv + 1, 2)
        image = t.apply_matrix_at(1, mu_b).apply_matrix_at(2, mu_b)
        if not r_hat.contains(image.to_vec()):
            raise AutomorphismCheckFailedError("mu_B does not preserve R-hat")
    cy = sigma.matrix == p and div.divergence.is_zero()
    omega_hat = None
    if with_superpotential:
        omega_hat = twisted_superpotential_hat(sigma, delta, sp, mu_b, r_hat)
    return OreReport(
        algebra=alg,
        sigma=sigma,
        delta=delta,
        hdet=h,
        div=div,
        mu_B=mu_b,
        relations_hat=r_hat,
        calabi_yau=cy,
        omega_hat=omega_hat,
        sequence_pair=sp,
    )


def twisted_superpotential_hat(
    sigma: GradedAutomorphism,
    delta: DerivationLift,
    sp: SequencePair | None = None,
    mu_b: Matrix | None = None,
    r_hat: Subspace | None = None,
) -> Tensor:
    """The degree-(d+1) twisted superpotential of the Ore extension.

    Computed by both closed forms (right-tower and left-tower), which
    must agree; asserted to lie in every shifted copy of R-hat (that
    is, in the top Koszul space of B) and to satisfy the twist
    condition with nu = mu_B restricted to degree one.
    """
    alg = sigma.algebra.ensure_as_regular()
    if sp is None:
        sp = build_sequence_pair(sigma, delta)
    nv = alg.nv
    nh = nv + 1
    d = alg.certificate.d
    omega = alg.certificate.omega
    z = Tensor.word(nh, (nv,))
    omega_h = omega.embed(nh)
    m_hat_rows = [list(r) + [ZERO] for r in sigma.matrix.rows]
    m_hat_rows.append([ZERO] * nv + [ONE])
    m_hat = Matrix(m_hat_rows)
    cyclic = Tensor(nh, d + 1)
    for i in range(d + 1):
        t = z.tensor(omega_h)
        for slot in range(2, 2 + i):
            t = t.apply_matrix_at(slot, m_hat)
        cyclic = cyclic + t.tau(i).scale(_sign(i))
    right_part = Tensor(nh, d + 1)
    for i in range(1, d + 1):
        right_part = right_part + sp.apply_right(i, omega, d - i).embed(nh).scale(_sign(i))
    left_part = Tensor(nh, d + 1)
    for i in range(1, d + 1):
        left_part = left_part + sp.apply_left(i, omega, d - i).embed(nh).scale(_sign(i))
    left_part = left_part.scale(_sign(d + 1))
    form1 = cyclic + right_part
    form2 = cyclic + left_part
    if form1 != form2:
        raise FormMismatchError(
            f"superpotential forms disagree; residual {form1 - form2!r}"
        )
    if r_hat is None:
        r_hat = ore_relations(sigma, delta)
    for s in range(d):
        if not _in_shifted(form1, r_hat, nh, s, d - 1 - s):
            raise NotInHatWError(
                f"omega-hat escapes V-hat^{s} (x) R-hat (x) V-hat^{d - 1 - s}"
            )
    if mu_b is None:
        mu_b = nakayama_of_B(
            sigma, delta, sp, with_superpotential=False
        ).mu_B
    twisted = form1.apply_matrix_at(1, mu_b).tau(d).scale(_sign(d))
    if twisted != form1:
        raise TwistFailureError(
            f"twist condition fails; residual {twisted - form1!r}"
        )
    return form1


def _in_shifted(t: Tensor, rel: Subspace, nh: int, left: int, right: int) -> bool:
    """Membership of t in V^(x)left (x) rel (x) V^(x)right.

    The shifted RREF rows of rel form an RREF basis of the sandwich, so
    plain reduction against pivot pairs decides membership.
    """
    entries = dict(t.entries)
    piv_rows = {flat_word(p, 2, nh): rel.row_for_pivot(p) for p in rel.pivots}
    progress = True
    while progress and entries:
        progress = False
        for w in list(entries):
            mid = w[left : left + 2]
            row = piv_rows.get(mid)
            if row is None or w not in entries:
                continue
            c = entries.get(w)
            if not c:
                continue
            for p2, v in row.items():
                w2 = w[:left] + flat_word(p2, 2, nh) + w[left + 2 :]
                s = entries.get(w2, ZERO) - c * v
                if s:
                    entries[w2] = s
                else:
                    entries.pop(w2, None)
            progress = True
    return not entries


def derivation_quotient_relations(omega: Tensor, order: int) -> Subspace:
    """Span of all order-``order`` partial derivations of omega.

    The derivations contract the last ``order`` tensor factors against
    dual functionals, leaving a subspace of V^(x)(deg - order); with
    order = deg the result is the scalar line iff omega is nonzero.
    Order 0 (contraction against scalars) is allowed so that the
    degree-(d-2) recovery of R makes sense for d = 2 as well.
    """
    if not (0 <= order <= omega.degree):
        raise ValueError("derivation order out of range")
    nv = omega.nv
    keep = omega.degree - order
    slices: dict[tuple, dict] = {}
    for w, c in omega.entries.items():
        head, tail = w[:keep], w[keep:]
        flat = 0
        for k in head:
            flat = flat * nv + k
        bucket = slices.setdefault(tail, {})
        bucket[flat] = bucket.get(flat, ZERO) + c
    return Subspace(nv**keep if keep else 1, list(slices.values()))
