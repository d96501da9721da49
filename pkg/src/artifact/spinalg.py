"""Even Clifford algebra arithmetic for Spin_{n+1}.

The Clifford algebra is taken positive definite (``e_i**2 = +1``).  The
one-parameter subgroups are ``alpha_j(theta) = cos(theta/2) +
sin(theta/2) e_{j+1} e_j``, so that ``alpha_j(2*pi) == -1`` and the
projection ``Pi`` sends ``alpha_j(theta)`` to the rotation by ``theta``
in the ``(e_j, e_{j+1})`` plane.

Exact elements live over the ring ``{p + q*sqrt(2) : p, q rational}``
(:class:`QSqrt2`), which is closed under products of the quarter-turn
generators ``alpha_j(+-pi/2)``.  The maps ``acute``, ``grave`` and
``hat`` (``hat(sigma) = acute(sigma) * grave(sigma)**-1``), the lifted
signed-permutation group, the word table ``B(w, j)`` and the operators
``chop`` / ``adv`` are all computed bit-exactly in this ring.  Floats
are used only for curve-side evaluation (``alpha`` at generic angles,
``clifford_exp``, ``theta_exit``).
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from . import symgrp
from .symgrp import Permutation

__all__ = [
    "QSqrt2",
    "CliffordEven",
    "SpinWordTable",
    "NotUnit",
    "NotInLiftedSignedGroup",
    "IdentityLetter",
    "NoRootInInterval",
    "alpha",
    "alpha_exact",
    "acute",
    "grave",
    "hat",
    "project",
    "is_quat",
    "signed_permutation_of",
    "decompose_signed",
    "chop",
    "adv",
    "word_table",
    "q_of_word",
    "h_bivector",
    "clifford_exp",
    "spin_exp_h",
    "theta_exit",
    "cell_of_matrix",
    "quat_elements",
    "in_positive_cell",
    "positive_chart",
]

Scalar = Union["QSqrt2", float]


class NotUnit(ValueError):
    """Element is not a unit spinor."""


class NotInLiftedSignedGroup(ValueError):
    """Element does not decompose as q * acute(sigma) with q in Quat."""


class IdentityLetter(ValueError):
    """A word letter equal to the identity permutation."""


class NoRootInInterval(ValueError):
    """theta_exit found no exit angle in (0, pi)."""


class QSqrt2:
    """Exact scalar ``p + q*sqrt(2)`` with rational p, q.

    >>> half_sqrt2 = QSqrt2(0, Fraction(1, 2))   # 1/sqrt(2)
    >>> (half_sqrt2 * half_sqrt2).p
    Fraction(1, 2)
    """

    __slots__ = ("p", "q")

    def __init__(self, p: object = 0, q: object = 0) -> None:
        object.__setattr__(self, "p", Fraction(p))
        object.__setattr__(self, "q", Fraction(q))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("QSqrt2 is immutable")

    def __add__(self, other: "QSqrt2 | int | Fraction") -> "QSqrt2":
        other = _as_qs(other)
        return QSqrt2(self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __sub__(self, other) -> "QSqrt2":
        other = _as_qs(other)
        return QSqrt2(self.p - other.p, self.q - other.q)

    def __rsub__(self, other) -> "QSqrt2":
        return _as_qs(other) - self

    def __neg__(self) -> "QSqrt2":
        return QSqrt2(-self.p, -self.q)

    def __mul__(self, other) -> "QSqrt2":
        other = _as_qs(other)
        return QSqrt2(
            self.p * other.p + 2 * self.q * other.q,
            self.p * other.q + self.q * other.p,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QSqrt2":
        other = _as_qs(other)
        den = other.p * other.p - 2 * other.q * other.q
        if den == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        return self * QSqrt2(other.p / den, -other.q / den)

    def __eq__(self, other) -> bool:
        if isinstance(other, (QSqrt2, int, Fraction)):
            other = _as_qs(other)
            return self.p == other.p and self.q == other.q
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.q))

    def __bool__(self) -> bool:
        return self.p != 0 or self.q != 0

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * math.sqrt(2.0)

    def __lt__(self, other) -> bool:
        return float(self) < float(_as_qs(other))

    def __gt__(self, other) -> bool:
        return float(self) > float(_as_qs(other))

    def __repr__(self) -> str:
        return f"QSqrt2({self.p}, {self.q})"

    def as_half_power(self) -> tuple[int, int]:
        """Write the value as ``m / sqrt(2)**k`` with integers m, k >= 0.

        Requires that one of the two components vanish.
        """
        if self.q == 0:
            m, k = self.p, 0
        elif self.p == 0:
            m, k = 2 * self.q, 1  # q*sqrt2 = 2q/sqrt2
        else:
            raise ValueError(f"{self!r} is not of the form m/sqrt(2)^k")
        while m.denominator != 1:
            m *= 2
            k += 2
        return int(m), k


def _as_qs(x) -> QSqrt2:
    if isinstance(x, QSqrt2):
        return x
    return QSqrt2(x)


_ZERO = QSqrt2(0)
_ONE = QSqrt2(1)
_INV_SQRT2 = QSqrt2(0, Fraction(1, 2))

Blade = tuple[int, ...]


def _blade_mul(I: Blade, J: Blade) -> tuple[int, Blade]:
    """Product of basis blades with e_i**2 = +1; returns (sign, blade)."""
    seq = list(I) + list(J)
    sign = 1
    # insertion sort, counting transpositions
    for k in range(1, len(seq)):
        m = k
        while m > 0 and seq[m - 1] > seq[m]:
            seq[m - 1], seq[m] = seq[m], seq[m - 1]
            sign = -sign
            m -= 1
    # cancel equal neighbours (e_i * e_i = 1)
    out: list[int] = []
    for v in seq:
        if out and out[-1] == v:
            out.pop()
        else:
            out.append(v)
    return sign, tuple(out)


def _terms_mul(A: dict, B: dict) -> dict:
    out: dict[Blade, Scalar] = {}
    for I, x in A.items():
        for J, y in B.items():
            s, K = _blade_mul(I, J)
            c = x * y if s > 0 else -(x * y)
            if K in out:
                out[K] = out[K] + c
            else:
                out[K] = c
    return {K: c for K, c in out.items() if not _is_zero(c)}


def _is_zero(c: Scalar) -> bool:
    if isinstance(c, QSqrt2):
        return not bool(c)
    return c == 0.0


@dataclass(frozen=True)
class CliffordEven:
    """Element of the even Clifford algebra Cliff0_{n+1}.

    ``terms`` maps even blades (sorted index tuples) to scalars, which
    are either :class:`QSqrt2` (exact mode) or floats.
    """

    n: int
    terms: tuple[tuple[Blade, Scalar], ...]

    @staticmethod
    def make(n: int, terms: dict) -> "CliffordEven":
        clean = {}
        for I, c in terms.items():
            if len(I) % 2 != 0:
                raise ValueError(f"odd blade {I} in even element")
            if any(not 1 <= i <= n + 1 for i in I):
                raise ValueError(f"blade index out of range in {I}")
            if not _is_zero(c):
                clean[tuple(I)] = c
        return CliffordEven(n, tuple(sorted(clean.items())))

    @staticmethod
    def one(n: int, exact: bool = True) -> "CliffordEven":
        return CliffordEven.make(n, {(): _ONE if exact else 1.0})

    def tdict(self) -> dict:
        return dict(self.terms)

    @property
    def exact(self) -> bool:
        return all(isinstance(c, QSqrt2) for _, c in self.terms)

    def __mul__(self, other: "CliffordEven") -> "CliffordEven":
        if self.n != other.n:
            raise ValueError("rank mismatch")
        return CliffordEven.make(self.n, _terms_mul(self.tdict(), other.tdict()))

    def __add__(self, other: "CliffordEven") -> "CliffordEven":
        out = self.tdict()
        for I, c in other.terms:
            out[I] = out.get(I, _ZERO if isinstance(c, QSqrt2) else 0.0) + c
        return CliffordEven.make(self.n, out)

    def __neg__(self) -> "CliffordEven":
        return CliffordEven.make(self.n, {I: -c for I, c in self.terms})

    def __sub__(self, other: "CliffordEven") -> "CliffordEven":
        return self + (-other)

    def scale(self, x) -> "CliffordEven":
        return CliffordEven.make(self.n, {I: c * x for I, c in self.terms})

    def reverse(self) -> "CliffordEven":
        """Anti-automorphism reversing each blade; inverse on unit spinors."""
        out = {}
        for I, c in self.terms:
            k = len(I)
            out[I] = -c if (k * (k - 1) // 2) % 2 else c
        return CliffordEven.make(self.n, out)

    def scalar_part(self) -> Scalar:
        for I, c in self.terms:
            if I == ():
                return c
        return _ZERO if self.exact else 0.0

    def norm_sq(self) -> Scalar:
        prod = self * self.reverse()
        return prod.scalar_part()

    def inverse(self) -> "CliffordEven":
        """Inverse of a unit spinor (equals reverse)."""
        if not self.is_unit():
            raise NotUnit(f"not a unit spinor: {self}")
        return self.reverse()

    def is_unit(self, tol: float = 1e-12) -> bool:
        prod = (self * self.reverse()).tdict()
        if self.exact:
            return prod == {(): _ONE}
        sc = prod.pop((), 0.0)
        return abs(sc - 1.0) < tol and all(abs(c) < tol for c in prod.values())

    def to_float(self) -> "CliffordEven":
        return CliffordEven.make(self.n, {I: float(c) for I, c in self.terms})

    def coefficient(self, blade: Blade) -> Scalar:
        return self.tdict().get(tuple(sorted(blade)), _ZERO if self.exact else 0.0)

    def to_json(self) -> str:
        """Serialize exact elements as blades with num/halfpow coefficients."""
        terms = []
        for I, c in self.terms:
            if not isinstance(c, QSqrt2):
                raise ValueError("to_json requires exact coefficients")
            if c.q == 0 or c.p == 0:
                m, k = c.as_half_power()
                terms.append({"blade": list(I), "num": m, "halfpow": k})
            else:
                for part in (QSqrt2(c.p, 0), QSqrt2(0, c.q)):
                    m, k = part.as_half_power()
                    terms.append({"blade": list(I), "num": m, "halfpow": k})
        return json.dumps({"n": self.n, "terms": terms})

    @staticmethod
    def from_json(text: str) -> "CliffordEven":
        data = json.loads(text)
        out: dict[Blade, Scalar] = {}
        for term in data["terms"]:
            m, k = term["num"], term["halfpow"]
            val = QSqrt2(Fraction(m, 2 ** (k // 2)))
            if k % 2:  # one leftover 1/sqrt2
                val = val * _INV_SQRT2
            I = tuple(term["blade"])
            out[I] = out.get(I, _ZERO) + val
        return CliffordEven.make(data["n"], out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for I, c in self.terms:
            blade = "".join(f"e{i}" for i in I) or "1"
            bits.append(f"({c})*{blade}")
        return " + ".join(bits)


def alpha(n: int, j: int, theta: float) -> CliffordEven:
    """``alpha_j(theta) = cos(theta/2) + sin(theta/2) e_{j+1} e_j`` (float).

    >>> z = alpha(2, 1, 2 * math.pi)
    >>> z.coefficient(())
    -1.0
    """
    if not 1 <= j <= n:
        raise ValueError(f"generator index {j} out of range 1..{n}")
    # e_{j+1} e_j = -e_j e_{j+1}: canonical blade (j, j+1) with sign -1
    return CliffordEven.make(
        n, {(): math.cos(theta / 2), (j, j + 1): -math.sin(theta / 2)}
    )


def alpha_exact(n: int, j: int, sign: int) -> CliffordEven:
    """Exact quarter turn ``alpha_j(sign * pi/2)``, sign in {+1, -1}."""
    if sign not in (1, -1):
        raise ValueError("sign must be +-1")
    return CliffordEven.make(
        n, {(): _INV_SQRT2, (j, j + 1): -_INV_SQRT2 if sign > 0 else _INV_SQRT2}
    )


@functools.lru_cache(maxsize=None)
def _acute_cached(images: tuple[int, ...], sign: int) -> CliffordEven:
    sigma = Permutation(images)
    z = CliffordEven.one(sigma.n)
    for i in symgrp.reduced_word(sigma):
        z = z * alpha_exact(sigma.n, i, sign)
    return z


def acute(sigma: Permutation) -> CliffordEven:
    """Product of ``alpha_{i}(pi/2)`` over any reduced word of sigma."""
    return _acute_cached(sigma.images, +1)


def grave(sigma: Permutation) -> CliffordEven:
    """Product of ``alpha_{i}(-pi/2)`` over any reduced word of sigma."""
    return _acute_cached(sigma.images, -1)


def hat(sigma: Permutation) -> CliffordEven:
    """``hat(sigma) = acute(sigma) * grave(sigma)**-1``, an element of Quat.

    >>> a1 = symgrp.coxeter_generator(2, 1)
    >>> hat(a1).terms
    (((1, 2), QSqrt2(-1, 0)),)
    """
    return acute(sigma) * grave(sigma).inverse()


def _basis_vector_terms(n: int, j: int, exact: bool) -> dict:
    return {(j,): _ONE if exact else 1.0}


def project(z: CliffordEven) -> list[list[Scalar]]:
    """Rotation matrix of ``Pi(z)``: column j is ``z e_j rev(z)``.

    Entries are :class:`QSqrt2` in exact mode, floats otherwise.

    >>> [[float(x) for x in row] for row in project(CliffordEven.one(2))]
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    """
    if not z.is_unit():
        raise NotUnit(f"not a unit spinor: {z}")
    n = z.n
    exact = z.exact
    zero = _ZERO if exact else 0.0
    rev = z.reverse().tdict()
    zt = z.tdict()
    cols = []
    for j in range(1, n + 2):
        col_terms = _terms_mul(_terms_mul(zt, _basis_vector_terms(n, j, exact)), rev)
        col = [zero] * (n + 1)
        for I, c in col_terms.items():
            if len(I) == 1:
                col[I[0] - 1] = c
            elif not _is_zero(c):
                # float mode: tolerate roundoff residue in higher grades
                if exact or abs(float(c)) > 1e-9:
                    raise NotUnit("conjugation did not preserve grade 1")
        cols.append(col)
    return [[cols[j][i] for j in range(n + 1)] for i in range(n + 1)]


def is_quat(z: CliffordEven) -> bool:
    """True iff z is +-(a single blade), i.e. an element of Quat_{n+1}."""
    if len(z.terms) != 1:
        return False
    _, c = z.terms[0]
    if isinstance(c, QSqrt2):
        return c == _ONE or c == -_ONE
    return abs(abs(c) - 1.0) < 1e-12


def signed_permutation_of(z: CliffordEven) -> Permutation:
    """Permutation pattern of the signed-permutation matrix ``Pi(z)``.

    ``z`` must lie in the lifted signed group, so that each row of
    ``Pi(z)`` has a single nonzero entry; row i's entry sits in column
    ``i**sigma``.
    """
    M = project(z)
    n = z.n
    images = []
    for i in range(n + 1):
        nz = [j for j in range(n + 1) if not _is_zero(M[i][j])]
        if len(nz) != 1:
            raise NotInLiftedSignedGroup(f"row {i + 1} is not signed-unit")
        images.append(nz[0] + 1)
    return Permutation(tuple(images))


def decompose_signed(z0: CliffordEven) -> tuple[CliffordEven, Permutation, CliffordEven]:
    """Write ``z0 = q_a acute(sigma0) = q_c grave(sigma0)``.

    Returns ``(q_a, sigma0, q_c)``; raises :class:`NotInLiftedSignedGroup`
    if the quotients are not Quat elements.
    """
    sigma0 = signed_permutation_of(z0)
    q_a = z0 * acute(sigma0).inverse()
    q_c = z0 * grave(sigma0).inverse()
    if not (is_quat(q_a) and is_quat(q_c)):
        raise NotInLiftedSignedGroup(f"{z0} is not q * acute(sigma)")
    return q_a, sigma0, q_c


def adv(z0: CliffordEven) -> CliffordEven:
    """``adv(z0) = q_a acute(eta)`` where ``z0 = q_a acute(sigma0)``."""
    q_a, sigma0, _ = decompose_signed(z0)
    return q_a * acute(symgrp.longest_element(z0.n))


def chop(z0: CliffordEven) -> CliffordEven:
    """``chop(z0) = q_c grave(eta)`` where ``z0 = q_c grave(sigma0)``."""
    _, sigma0, q_c = decompose_signed(z0)
    return q_c * grave(symgrp.longest_element(z0.n))


@dataclass(frozen=True)
class SpinWordTable:
    """Values ``B(w, j)`` and ``B(w, j + 1/2)`` along a word.

    ``integer[j]`` is B(w, j) for j = 0..l and ``integer[l + 1]`` the
    endpoint; ``half[j]`` is B(w, j + 1/2) for j = 0..l.
    """

    word: tuple[Permutation, ...]
    integer: tuple[CliffordEven, ...]
    half: tuple[CliffordEven, ...]

    def q(self, j: int) -> CliffordEven:
        """Quat element with ``B(w, j + 1/2) = q_j acute(eta)``."""
        n = self.word[0].n if self.word else self.integer[0].n
        qj = self.half[j] * acute(symgrp.longest_element(n)).inverse()
        assert is_quat(qj)
        return qj


def word_table(word: Sequence[Permutation], n: int | None = None) -> SpinWordTable:
    """Build the recursion B(w,0)=1, B(w,1/2)=acute(eta), B(w,j)=B(w,j-1/2)
    acute(sigma_j), B(w,j+1/2)=B(w,j-1/2) hat(sigma_j), endpoint
    B(w,l+1)=B(w,l+1/2) acute(eta).
    """
    word = tuple(word)
    if n is None:
        if not word:
            raise ValueError("need explicit n for the empty word")
        n = word[0].n
    for sigma in word:
        if sigma.is_identity():
            raise IdentityLetter("identity letter in word")
        if sigma.n != n:
            raise ValueError("rank mismatch in word")
    eta = symgrp.longest_element(n)
    integer = [CliffordEven.one(n)]
    half = [acute(eta)]
    for sigma in word:
        integer.append(half[-1] * acute(sigma))
        half.append(half[-1] * hat(sigma))
    integer.append(half[-1] * acute(eta))
    return SpinWordTable(word, tuple(integer), tuple(half))


def q_of_word(word: Sequence[Permutation], n: int | None = None) -> CliffordEven:
    """Endpoint ``acute(eta) hat(sigma_1) ... hat(sigma_l) acute(eta)``.

    >>> is_quat(q_of_word((), 2))
    True
    """
    table = word_table(word, n)
    q = table.integer[-1]
    assert is_quat(q)
    return q


def h_bivector(n: int) -> CliffordEven:
    """The bivector for ``frak h = sum sqrt(j(n+1-j)) frak a_j`` (float).

    ``frak a_j`` corresponds to ``(1/2) e_{j+1} e_j``.
    """
    terms = {}
    for j in range(1, n + 1):
        terms[(j, j + 1)] = -0.5 * math.sqrt(j * (n + 1 - j))
    return CliffordEven.make(n, terms)


def clifford_exp(x: CliffordEven, terms: int = 40) -> CliffordEven:
    """Series exponential of a float even element (scaling and squaring)."""
    xf = x.to_float()
    norm = sum(abs(c) for _, c in xf.terms)
    squarings = 0
    while norm > 0.5:
        norm /= 2
        squarings += 1
    xs = xf.scale(0.5 ** squarings)
    acc = CliffordEven.one(x.n, exact=False)
    power = CliffordEven.one(x.n, exact=False)
    fact = 1.0
    for k in range(1, terms):
        power = power * xs
        fact *= k
        term = power.scale(1.0 / fact)
        acc = acc + term
        if all(abs(c) < 1e-18 for _, c in term.terms):
            break
    for _ in range(squarings):
        acc = acc * acc
    return acc


def spin_exp_h(n: int, t: float) -> CliffordEven:
    """``exp(t * frak h)`` in Spin_{n+1} (float)."""
    return clifford_exp(h_bivector(n).scale(t))


# ---------------------------------------------------------------------------
# Cell identification and exit angles (numeric)
# ---------------------------------------------------------------------------


def _float_matrix(M: Sequence[Sequence[Scalar]]) -> list[list[float]]:
    return [[float(x) for x in row] for row in M]


def cell_of_matrix(M: Sequence[Sequence[Scalar]], tol: float = 1e-9) -> Permutation:
    """Bruhat cell of a rotation matrix via the southwest rank pattern.

    Uses ``rank(M[i:, :j]) = #{k >= i : k**sigma <= j}``:
    ``i**sigma`` is the least j at which deleting row i drops the rank.
    """
    import numpy as np

    A = np.array(_float_matrix(M), dtype=float)
    m = A.shape[0]

    def rank(i: int, j: int) -> int:  # rows i..m (1-based), cols 1..j
        if i > m or j == 0:
            return 0
        sub = A[i - 1 :, :j]
        return int(np.linalg.matrix_rank(sub, tol=tol))

    images = []
    for i in range(1, m + 1):
        img = next(
            (j for j in range(1, m + 1) if rank(i, j) == rank(i + 1, j) + 1),
            None,
        )
        if img is None:
            raise ValueError("rank pattern is not a permutation (tolerance?)")
        images.append(img)
    return Permutation(tuple(images))


def _pivot_minor_spec(rho: Permutation, i: int) -> tuple[list[int], list[int]]:
    """Rows/cols (0-based) of the minor separating Bru_rho from Bru_{rho a_i}.

    For the covering ``rho a_i <| rho`` let p1, p2 be the positions of the
    values i, i+1 in rho (p1 > p2).  The southwest rank over rows p1..n+1
    and columns 1..i drops by one exactly on the smaller cell; the pivot
    rows are ``{k >= p1 : k**rho <= i}`` with their image columns.
    """
    inv_rho = symgrp.inverse(rho)
    p1, p2 = inv_rho(i), inv_rho(i + 1)
    if p1 <= p2:
        raise ValueError(f"rho a_{i} is not below rho")
    rows = [k for k in range(p1, rho.n + 2) if rho(k) <= i]
    cols = sorted(rho(k) for k in rows)
    return [r - 1 for r in rows], [c - 1 for c in cols]


def theta_exit(y: CliffordEven, i: int, rho: Permutation) -> float:
    """Exit angle: the theta in (0, pi) with ``y alpha_i(-theta)`` in
    ``Bru_{rho a_i}``, assuming y lies in ``Bru_rho`` with
    ``rho a_i <| rho``.

    Pi is a homomorphism and Pi(alpha_i(-theta)) is a Givens rotation in
    coordinates (i, i+1); the pivot minor contains the column of value i but
    never the column of value i+1, so the minor equals
    ``a cos(theta) - b sin(theta)`` where a (resp. b) is the minor with the
    original column i (resp. column i+1 substituted for it).  The root in
    (0, pi) is unique and computed in closed form.
    """
    import numpy as np

    rows, cols = _pivot_minor_spec(rho, i)
    M0 = np.array(_float_matrix(project(y.to_float())))
    sub = M0[np.ix_(rows, cols)]
    a = float(np.linalg.det(sub))
    ki = cols.index(i - 1)
    subb = sub.copy()
    subb[:, ki] = M0[np.ix_(rows, [i])][:, 0]
    b = float(np.linalg.det(subb))
    scale = math.hypot(a, b)
    if scale < 1e-13:
        raise NoRootInInterval(f"degenerate pivot minor for generator {i}")
    theta = math.atan2(a, b)
    if theta <= 0.0:
        theta += math.pi
    if theta >= math.pi:
        theta -= math.pi
    return theta


def quat_elements(n: int) -> list[CliffordEven]:
    """All elements of Quat_{n+1}: ``+-b`` over even blades b (exact)."""
    import itertools

    out = []
    for k in range(0, n + 2, 2):
        for blade in itertools.combinations(range(1, n + 2), k):
            base = CliffordEven.make(n, {blade: QSqrt2(1)})
            out.append(base)
            out.append(-base)
    return out


def in_positive_cell(z: CliffordEven, tol: float = 1e-6) -> bool:
    """Whether z lies in the signed open cell ``Bru_{acute eta}``.

    Checks the matrix rank pattern and then peels exit angles along a
    reduced word of eta; z is in the cell iff the peeled residue is the
    spin identity (``-z`` and ``q z`` for nontrivial q in Quat all fail).
    """
    n = z.n
    eta = symgrp.longest_element(n)
    try:
        if cell_of_matrix(project(z.to_float())) != eta:
            return False
    except ValueError:
        return False
    cur = z.to_float()
    rho = eta
    for i in reversed(symgrp.reduced_word(eta)):
        try:
            th = theta_exit(cur, i, rho)
        except NoRootInInterval:
            return False
        cur = cur * alpha(n, i, -th)
        rho = symgrp.compose(rho, symgrp.coxeter_generator(n, i))
    resid = max((abs(float(c)) for b, c in cur.terms if b), default=0.0)
    return resid < tol and abs(float(cur.scalar_part()) - 1.0) < tol


def positive_chart(z: CliffordEven, tol: float = 1e-6) -> list[float]:
    """Chart coordinates of z in ``Bru_{acute eta}``: the angles theta in
    (0, pi)**l with ``z = prod alpha_{i_k}(theta_k)`` along the reduced
    word of eta.  Raises :class:`NoRootInInterval` / ValueError when z is
    not in the signed cell."""
    n = z.n
    eta = symgrp.longest_element(n)
    word = symgrp.reduced_word(eta)
    cur = z.to_float()
    rho = eta
    thetas = []
    for i in reversed(word):
        th = theta_exit(cur, i, rho)
        thetas.append(th)
        cur = cur * alpha(n, i, -th)
        rho = symgrp.compose(rho, symgrp.coxeter_generator(n, i))
    resid = max((abs(float(c)) for b, c in cur.terms if b), default=0.0)
    if resid > tol or abs(float(cur.scalar_part()) - 1.0) > tol:
        raise NotUnit("element is not in the positive open cell")
    return list(reversed(thetas))
