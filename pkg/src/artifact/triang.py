"""The unit lower-triangular group Lo1_{n+1} and total positivity.

Jacobi one-parameter subgroups ``jacobi(j, t) = I + t E_{j+1,j}``, the
nilpotent flows ``exp(t n)`` and ``exp(s h_L)``, factorization along
reduced words (with exact verification by re-multiplication), the
orders ``<<`` (``L0 << L1`` iff ``L0^-1 L1`` is totally positive) and
``<=`` (closure), accessibility quasiproducts, and the LU / QR bridges
to the rotation-matrix picture, including ``convex_connect``.

Matrices are plain lists of rows; entries may be exact ``Fraction``s,
floats, or sympy expressions (factorization works generically, so the
closed forms of the accessibility example can be reproduced
symbolically).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import spinalg, symgrp
from .symgrp import Permutation

__all__ = [
    "UniTriMatrix",
    "Quasiproduct",
    "NotFactorizable",
    "NotTotallyPositive",
    "NotLUDecomposable",
    "NotConnectableInCell",
    "DegenerateSum",
    "identity_matrix",
    "jacobi",
    "exp_nilpotent",
    "exp_hL",
    "commute_identity",
    "mat_mul",
    "mat_inv",
    "factor_along",
    "product_along",
    "is_ll",
    "is_leq",
    "cell_of_unitriangular",
    "accessibility_quasiproduct",
    "lu_of_rotation",
    "qr_positive",
    "projective_transform_upper",
    "projective_scale",
    "bruhat_upw",
    "convex_connect",
]


class NotFactorizable(ValueError):
    """Matrix is not a positive product along the requested word."""


class NotTotallyPositive(ValueError):
    """Matrix is not totally positive (not in Pos_eta)."""


class NotLUDecomposable(ValueError):
    """A leading principal minor vanishes."""


class NotConnectableInCell(ValueError):
    """No convex arc connects the two points inside the open cell."""


class DegenerateSum(ValueError):
    """s1 + s3 = 0 in the commutation identity."""


Matrix = list  # list[list[entry]]


def _is_zero_entry(x, tol: float = 1e-12) -> bool:
    if isinstance(x, float):
        return abs(x) < tol
    if isinstance(x, (int, Fraction)):
        return x == 0
    import sympy as sp

    return sp.simplify(x) == 0


def identity_matrix(n: int, exact: bool = True) -> Matrix:
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    return [[one if i == j else zero for j in range(n + 1)] for i in range(n + 1)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    m = len(A)
    return [
        [sum(A[i][k] * B[k][j] for k in range(m)) for j in range(m)]
        for i in range(m)
    ]


def mat_inv(A: Matrix) -> Matrix:
    """Gaussian elimination inverse (generic entries, exact for Fractions)."""
    m = len(A)
    aug = []
    for i, row in enumerate(A):
        ext = list(row)
        for j in range(m):
            ext.append(1 if i == j else 0)
        aug.append(ext)
    for col in range(m):
        piv = next(
            (r for r in range(col, m) if not _is_zero_entry(aug[r][col])), None
        )
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pval = aug[col][col]
        aug[col] = [v / pval for v in aug[col]]
        for r in range(m):
            if r != col and not _is_zero_entry(aug[r][col]):
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[m:] for row in aug]


def _det(A: Matrix):
    """Laplace-expansion determinant (small matrices, generic entries)."""
    m = len(A)
    if m == 1:
        return A[0][0]
    acc = None
    for j in range(m):
        if _is_zero_entry(A[0][j]):
            continue
        minor = [row[:j] + row[j + 1 :] for row in A[1:]]
        term = A[0][j] * _det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        return A[0][0] * 0
    return acc


@dataclass(frozen=True)
class UniTriMatrix:
    """Unit lower-triangular matrix; entries stored as a full row tuple."""

    rows: tuple

    @staticmethod
    def make(rows: Sequence[Sequence]) -> "UniTriMatrix":
        m = len(rows)
        for i, row in enumerate(rows):
            if len(row) != m:
                raise ValueError("not square")
            if not _is_zero_entry(row[i] - 1):
                raise ValueError("diagonal must be 1")
            for j in range(i + 1, m):
                if not _is_zero_entry(row[j]):
                    raise ValueError("entries above the diagonal must vanish")
        return UniTriMatrix(tuple(tuple(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.rows) - 1

    def tolist(self) -> Matrix:
        return [list(r) for r in self.rows]


def jacobi(n: int, j: int, t) -> Matrix:
    """``I + t E_{j+1, j}`` in Lo1_{n+1}."""
    if not 1 <= j <= n:
        raise ValueError(f"generator index {j} out of range 1..{n}")
    M = identity_matrix(n, exact=not isinstance(t, float))
    M[j][j - 1] = M[j][j - 1] + t
    return M


def exp_nilpotent(n: int, t) -> Matrix:
    """``exp(t n)`` with entry (i, j) = t**(i-j)/(i-j)! below the diagonal."""
    M = []
    for i in range(n + 1):
        row = []
        for j in range(n + 1):
            if i < j:
                row.append(0 * t if isinstance(t, float) else Fraction(0))
            elif i == j:
                row.append(1.0 if isinstance(t, float) else Fraction(1))
            else:
                k = i - j
                row.append(t ** k / math.factorial(k)
                           if isinstance(t, float)
                           else Fraction(t) ** k / math.factorial(k))
        M.append(row)
    return M


def exp_hL(s: float, n: int) -> Matrix:
    """``exp(s h_L)`` with ``h_L = sum sqrt(j(n+1-j)) l_j`` (floats)."""
    H = [[0.0] * (n + 1) for _ in range(n + 1)]
    for j in range(1, n + 1):
        H[j][j - 1] = math.sqrt(j * (n + 1 - j))
    acc = identity_matrix(n, exact=False)
    power = identity_matrix(n, exact=False)
    fact = 1.0
    for k in range(1, n + 1):
        power = mat_mul(power, H)
        fact *= k
        for i in range(n + 1):
            for j in range(n + 1):
                acc[i][j] += (s ** k / fact) * power[i][j]
    return acc


def commute_identity(i: int, s1, s2, s3) -> tuple:
    """``l_i(s1) l_{i+1}(s2) l_i(s3) = l_{i+1}(~s1) l_i(~s2) l_{i+1}(~s3)``
    with ``~s = (s2 s3/(s1+s3), s1+s3, s1 s2/(s1+s3))``.

    >>> commute_identity(1, Fraction(1), Fraction(1), Fraction(1))
    (Fraction(1, 2), Fraction(2), Fraction(1, 2))
    """
    s = s1 + s3
    if _is_zero_entry(s):
        raise DegenerateSum("s1 + s3 = 0")
    return (s2 * s3 / s, s, s1 * s2 / s)


def product_along(n: int, word: Sequence[int], params: Sequence) -> Matrix:
    """``prod jacobi(i_l, t_l)`` for paired word letters and parameters."""
    M = identity_matrix(n, exact=not any(isinstance(t, float) for t in params))
    for i, t in zip(word, params):
        M = mat_mul(M, jacobi(n, i, t))
    return M


def cell_of_unitriangular(L: Matrix) -> Permutation:
    """Bruhat-type cell of a unit lower-triangular matrix via exact
    southwest ranks: ``rank(L[i:, :j]) = #{k >= i : k**sigma <= j}``."""
    m = len(L)

    def rank(i: int, j: int) -> int:  # rows i..m, cols 1..j (1-based)
        sub = [row[:j] for row in L[i - 1 :]]
        return _rank_generic(sub)

    images = []
    for i in range(1, m + 1):
        img = next(
            (j for j in range(1, m + 1) if rank(i, j) == rank(i + 1, j) + 1),
            None,
        )
        if img is None:
            raise ValueError("rank pattern is not a permutation")
        images.append(img)
    return Permutation(tuple(images))


def _rank_generic(rows: Matrix) -> int:
    """Row-echelon rank with exact (or tolerance) zero tests."""
    if not rows or not rows[0]:
        return 0
    M = [list(r) for r in rows]
    nr, nc = len(M), len(M[0])
    rank = 0
    row = 0
    for col in range(nc):
        piv = next(
            (r for r in range(row, nr) if not _is_zero_entry(M[r][col])), None
        )
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        pv = M[row][col]
        for r in range(row + 1, nr):
            if not _is_zero_entry(M[r][col]):
                f = M[r][col] / pv
                M[r] = [a - f * b for a, b in zip(M[r], M[row])]
        row += 1
        rank += 1
        if row == nr:
            break
    return rank


def _peel_parameter(L: Matrix, sigma: Permutation, i: int):
    """Parameter t such that ``jacobi(i, -t) L`` lies in the cell of
    ``a_i sigma`` (shorter); solved from the pivot minor, affine in t."""
    if not sigma.images[i - 1] > sigma.images[i]:
        raise NotFactorizable(f"word letter {i} is not a descent of the cell")
    w = sigma(i + 1)
    rows = [k for k in range(i + 1, sigma.n + 2) if sigma(k) <= w]
    cols = sorted(sigma(k) for k in rows)
    A = [[L[r - 1][c - 1] for c in cols] for r in rows]
    B = [
        [L[r - 1][c - 1] if r != i + 1 else L[i - 1][c - 1] for c in cols]
        for r in rows
    ]
    detA, detB = _det(A), _det(B)
    if _is_zero_entry(detB):
        raise NotFactorizable("degenerate pivot minor while peeling")
    return detA / detB


def factor_along(L, word: Sequence[int], require_positive: bool = True) -> tuple:
    """Factor ``L = prod jacobi(i_l, t_l)`` along a reduced word.

    Peels generators from the left, solving each parameter from a pivot
    minor; the result is verified by exact re-multiplication.  With
    ``require_positive`` (the default) all parameters must be > 0, i.e.
    membership in Pos_sigma is certified.

    >>> L = product_along(2, (1, 2, 1), (Fraction(2), Fraction(3), Fraction(5)))
    >>> factor_along(L, (1, 2, 1))
    (Fraction(2), Fraction(3), Fraction(5))
    """
    if isinstance(L, UniTriMatrix):
        L = L.tolist()
    n = len(L) - 1
    sigma = symgrp.from_word(n, word)
    if symgrp.inversions(sigma) != len(word):
        raise ValueError("word is not reduced")
    cur = [list(r) for r in L]
    params = []
    cell = sigma
    symbolic = not all(
        isinstance(x, (int, float, Fraction)) for row in cur for x in row
    )
    for i in word:
        t = _peel_parameter(cur, cell, i)
        params.append(t)
        cur = mat_mul(jacobi(n, i, -t), cur)
        cell = symgrp.compose(symgrp.coxeter_generator(n, i), cell)
    # cur must now be the identity
    for r in range(n + 1):
        for c in range(n + 1):
            want = 1 if r == c else 0
            if not _is_zero_entry(cur[r][c] - want, tol=1e-10):
                raise NotFactorizable("residual after peeling all letters")
    if require_positive and not symbolic:
        for t in params:
            if isinstance(t, float):
                if not t > 0:
                    raise NotFactorizable(f"nonpositive parameter {t}")
            elif not t > 0:
                raise NotFactorizable(f"nonpositive parameter {t}")
    return tuple(params)


def is_ll(L0, L1) -> bool:
    """``L0 << L1`` iff ``L0^-1 L1`` factors positively along a word of eta.

    >>> is_ll(identity_matrix(2), exp_nilpotent(2, Fraction(1)))
    True
    """
    if isinstance(L0, UniTriMatrix):
        L0 = L0.tolist()
    if isinstance(L1, UniTriMatrix):
        L1 = L1.tolist()
    n = len(L0) - 1
    D = mat_mul(mat_inv(L0), L1)
    word = symgrp.reduced_word(symgrp.longest_element(n))
    try:
        factor_along(D, word)
        return True
    except NotFactorizable:
        return False


def is_leq(L0, L1) -> bool:
    """Closure order: ``L0 <= L1`` iff ``L0^-1 L1`` lies in the closure of
    Pos_eta, i.e. factors positively along a word of its own cell."""
    if isinstance(L0, UniTriMatrix):
        L0 = L0.tolist()
    if isinstance(L1, UniTriMatrix):
        L1 = L1.tolist()
    n = len(L0) - 1
    D = mat_mul(mat_inv(L0), L1)
    sigma = cell_of_unitriangular(D)
    if sigma.is_identity():
        return True  # D = I
    try:
        factor_along(D, symgrp.reduced_word(sigma))
        return True
    except NotFactorizable:
        return False


@dataclass
class Quasiproduct:
    """Accessibility domain X_k = {t : 0 < t_j < g_j(t_1..t_{j-1})}.

    ``g(j, prefix)`` evaluates the rational bound function for the j-th
    coordinate given the previous ones (1-based j); ``c1 = g(1, ())``.
    """

    n: int
    word: tuple[int, ...]
    L_x: Matrix
    _eta_words: dict

    @property
    def c1(self):
        return self.g(1, ())

    def g(self, j: int, prefix: Sequence):
        if len(prefix) != j - 1:
            raise ValueError("prefix length must be j-1")
        i_j = self.word[j - 1]
        L_pref = product_along(self.n, self.word[: j - 1], list(prefix))
        D = mat_mul(mat_inv(L_pref), self.L_x)
        params = factor_along(D, self._eta_words[i_j], require_positive=False)
        return params[0]

    def contains(self, point: Sequence) -> bool:
        for j, t in enumerate(point, start=1):
            if not (0 < t < self.g(j, point[: j - 1])):
                return False
        return True


def accessibility_quasiproduct(L_x, word: Sequence[int]) -> Quasiproduct:
    """Quasiproduct presentation of the accessibility set for ``word``.

    ``g_j`` is the first parameter of the factorization of
    ``L_prefix^-1 L_x`` along a reduced word of eta starting with the
    j-th letter of ``word``.
    """
    if isinstance(L_x, UniTriMatrix):
        L_x = L_x.tolist()
    n = len(L_x) - 1
    eta = symgrp.longest_element(n)
    symbolic = not all(
        isinstance(x, (int, float, Fraction)) for row in L_x for x in row
    )
    if not symbolic:
        try:
            factor_along(L_x, symgrp.reduced_word(eta))
        except NotFactorizable as exc:
            raise NotTotallyPositive(str(exc)) from exc
    eta_words = {}
    for i in set(word):
        eta_words[i] = next(
            w for w in sorted(symgrp.all_reduced_words(eta)) if w[0] == i
        )
    return Quasiproduct(n=n, word=tuple(word), L_x=L_x, _eta_words=eta_words)


# ---------------------------------------------------------------------------
# Bridges to the rotation-matrix picture
# ---------------------------------------------------------------------------


def lu_of_rotation(Q: Matrix) -> tuple[Matrix, Matrix]:
    """``Q = L U`` with L unit lower-triangular and U upper (Doolittle)."""
    m = len(Q)
    exact = all(isinstance(x, (int, Fraction)) for row in Q for x in row)
    L = identity_matrix(m - 1, exact=exact)
    U = [list(map(Fraction, row)) if exact else list(map(float, row)) for row in Q]
    for col in range(m):
        if _is_zero_entry(U[col][col], tol=1e-12):
            raise NotLUDecomposable(f"leading principal minor {col + 1} vanishes")
        for r in range(col + 1, m):
            f = U[r][col] / U[col][col]
            L[r][col] = f
            U[r] = [a - f * b for a, b in zip(U[r], U[col])]
    return L, U


def qr_positive(M: Matrix) -> tuple[Matrix, Matrix]:
    """QR with orthogonal Q and upper R with strictly positive diagonal."""
    import numpy as np

    A = np.array(M, dtype=float)
    Q, R = np.linalg.qr(A)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    Q = Q * signs
    R = (R.T * signs).T
    return Q.tolist(), R.tolist()


def projective_transform_upper(points: Iterable[Matrix], U: Matrix) -> list[Matrix]:
    """Type-1 projective transform: each sample ``Q`` maps to the
    orthogonal part of ``U^-1 Q``."""
    import numpy as np

    Uinv = np.linalg.inv(np.array(U, dtype=float))
    out = []
    for Q in points:
        out.append(qr_positive((Uinv @ np.array(Q, dtype=float)).tolist())[0])
    return out


def projective_scale(L, lam) -> Matrix:
    """Type-2 transform ``E_lam^-1 L E_lam`` with ``E_lam = diag(1, lam,
    ..., lam**n)``; entry (i, j) scales by lam**(j-i)."""
    if isinstance(L, UniTriMatrix):
        L = L.tolist()
    m = len(L)
    return [
        [L[i][j] * lam ** (j - i) if i != j else L[i][j] for j in range(m)]
        for i in range(m)
    ]


def bruhat_upw(M: Matrix, tol: float = 1e-10) -> tuple:
    """Normal form ``M = U1 P U2`` for M in the open cell, with U1 unit
    upper-triangular, P a signed antidiagonal permutation matrix and U2
    upper with positive diagonal.  Via LU of J M."""
    import numpy as np

    A = np.array(M, dtype=float)
    m = A.shape[0]
    J = np.fliplr(np.eye(m))
    JA = J @ A
    # Doolittle without pivoting; failure means M is not in the open cell
    Lm = np.eye(m)
    U2 = JA.copy()
    for col in range(m):
        if abs(U2[col, col]) < tol:
            raise NotConnectableInCell("matrix not in the open Bruhat cell")
        for r in range(col + 1, m):
            f = U2[r, col] / U2[col, col]
            Lm[r, col] = f
            U2[r, :] -= f * U2[col, :]
    U1 = J @ Lm @ J  # unit upper-triangular
    signs = np.sign(np.diag(U2))
    P = J @ np.diag(signs)
    U2 = np.diag(signs) @ U2
    return U1, P, U2


def convex_connect(
    A: "spinalg.CliffordEven",
    B: "spinalg.CliffordEven",
    samples: int = 64,
    c: float = math.pi / 4,
) -> list["spinalg.CliffordEven"]:
    """A sampled convex arc in Spin from A to B.

    Requires ``A^-1 B`` to lie in the open cell ``Bru_{acute eta}`` in
    the component reachable by a convex arc.  The arc is the projective
    transform of the model arc ``exp(t c h)``: with ``W = Pi(exp(c h)) =
    U_w P U_w'`` and ``Z = Pi(A^-1 B) = U_z P U_z'``, the matrix arc is
    ``N(t) = Q((U_w U_z^-1)^-1 Pi(exp(t c h)))``, which runs from I to Z;
    the returned spin samples are ``A * lift(N(t))``.
    """
    import numpy as np

    n = A.n
    target = A.inverse() * B
    Z = np.array(
        [[float(v) for v in row] for row in spinalg.project(target.to_float())]
    )
    W = np.array(
        [[float(v) for v in row] for row in spinalg.project(spinalg.spin_exp_h(n, c))]
    )
    U1w, Pw, _ = bruhat_upw(W)
    U1z, Pz, _ = bruhat_upw(Z)
    if not np.allclose(Pw, Pz, atol=1e-9):
        raise NotConnectableInCell("endpoints lie in different components")
    U = U1w @ np.linalg.inv(U1z)
    Uinv = np.linalg.inv(U)

    mats = []
    for k in range(samples + 1):
        t = k / samples
        Pt = np.array(
            [[float(v) for v in row]
             for row in spinalg.project(spinalg.spin_exp_h(n, t * c))]
        )
        mats.append(np.array(qr_positive((Uinv @ Pt).tolist())[0]))
    if not np.allclose(mats[-1], Z, atol=1e-8):
        raise NotConnectableInCell("arc endpoint mismatch")

    # lift the matrix arc continuously to Spin, starting at A
    out = [A.to_float()]
    for prev, nxt in zip(mats, mats[1:]):
        step = _lift_rotation_step(n, prev.T @ nxt)
        out.append(out[-1] * step)
    end_err = _spin_distance(out[-1], B.to_float())
    if end_err > 1e-6:
        raise NotConnectableInCell(
            f"spin lift ends at the antipodal point (err {end_err:.2e})"
        )
    return out


def _lift_rotation_step(n: int, R) -> "spinalg.CliffordEven":
    """Spin lift of a rotation close to the identity."""
    import numpy as np
    from scipy.linalg import logm

    S = np.real(logm(np.array(R, dtype=float)))
    terms = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            if abs(S[i, j]) > 1e-15:
                terms[(i + 1, j + 1)] = 0.5 * S[i, j]
    biv = spinalg.CliffordEven.make(n, terms)
    return spinalg.clifford_exp(biv)


def _spin_distance(z: "spinalg.CliffordEven", w: "spinalg.CliffordEven") -> float:
    d = z - w
    return math.sqrt(sum(float(c) ** 2 for _, c in d.terms))
