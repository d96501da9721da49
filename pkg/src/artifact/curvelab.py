"""Numeric engine for locally convex curves in Spin_{n+1}.

A curve is stored as a :class:`FrameCurve`: a dense sample of unit
spinors plus (when available) an exact evaluation callback.  The module
provides

* ODE integration of the frame equation ``z' = z * sum_j kappa_j(t) a_j``
  directly in spin coefficients (RK4 with renormalization),
* Frenet frames of sphere curves by positive Gram-Schmidt and a
  continuous spin lift,
* detection of the singular set and the itinerary: zeros of the
  southwest minors of ``Pi(z(t))`` are located, clustered, assigned
  multiplicity vectors by log-log slope estimation at two scales, and
  converted to letters; anything unstable raises
  :class:`UnresolvedCluster` rather than guessing,
* synthesis of a curve with a prescribed itinerary from the word table
  ``B(w, j)`` (model arcs joined by convex connectors),
* the ``u`` invariant of an ``acb`` event read off the unit-lower
  triangular chart of the curve, and
* Hausdorff distance between compact subsets of the parameter interval.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import spinalg, symgrp, triang
from .spinalg import CliffordEven
from .symgrp import Permutation

__all__ = [
    "NonPositiveCurvature",
    "DegenerateJet",
    "UnresolvedCluster",
    "PathNotAccessible",
    "NotAnAcbEvent",
    "SingularEvent",
    "FrameCurve",
    "integrate_frame",
    "frame_curve_from_matrix_path",
    "frenet_frame",
    "southwest_minors",
    "singular_events",
    "singular_set",
    "itinerary",
    "hausdorff",
    "is_convex_arc",
    "curve_with_itinerary",
    "u_invariant",
]


class NonPositiveCurvature(ValueError):
    """A curvature function is not strictly positive on the domain."""


class DegenerateJet(ValueError):
    """The jet of a sphere curve is rank deficient (no Frenet frame)."""


class UnresolvedCluster(RuntimeError):
    """A zero cluster of the minors could not be classified reliably."""


class PathNotAccessible(RuntimeError):
    """Curve synthesis for the requested itinerary failed."""


class NotAnAcbEvent(ValueError):
    """The event at the given time is not an ``acb`` crossing."""


# ---------------------------------------------------------------------------
# Coefficient-vector representation of the even algebra
# ---------------------------------------------------------------------------


def _even_blades(n: int) -> list[tuple[int, ...]]:
    out = []
    for k in range(0, n + 2, 2):
        out.extend(itertools.combinations(range(1, n + 2), k))
    return sorted(out, key=lambda b: (len(b), b))


def _to_vec(z: CliffordEven, index: dict) -> np.ndarray:
    v = np.zeros(len(index))
    for b, c in z.terms:
        v[index[b]] = float(c)
    return v


def _from_vec(n: int, v: np.ndarray, blades: list) -> CliffordEven:
    terms = {b: float(c) for b, c in zip(blades, v) if abs(c) > 1e-300}
    return CliffordEven.make(n, terms)


def _right_mult_matrix(n: int, a: CliffordEven, blades: list, index: dict) -> np.ndarray:
    """Matrix of ``x -> x * a`` on the coefficient vector."""
    m = np.zeros((len(blades), len(blades)))
    for col, b in enumerate(blades):
        prod = CliffordEven.make(n, {b: 1.0}) * a.to_float()
        for bb, c in prod.terms:
            m[index[bb], col] += float(c)
    return m


def _generator_bivector(n: int, j: int) -> CliffordEven:
    """``frak a_j = (1/2) e_{j+1} e_j`` as an even element."""
    return CliffordEven.make(n, {(j, j + 1): -0.5})


# ---------------------------------------------------------------------------
# FrameCurve
# ---------------------------------------------------------------------------


@dataclass
class FrameCurve:
    """A sampled curve in Spin_{n+1} with optional exact evaluation.

    ``ts`` is strictly increasing; ``zs[k]`` is the (float) unit spinor at
    ``ts[k]``.  If ``eval_fn`` is given it is used for off-grid
    evaluation, otherwise the curve is interpolated geodesically between
    neighbouring samples.
    """

    n: int
    ts: tuple
    zs: list
    eval_fn: Optional[Callable[[float], CliffordEven]] = None
    _seg_cache: dict = field(default_factory=dict, repr=False)

    @property
    def t0(self) -> float:
        return self.ts[0]

    @property
    def t1(self) -> float:
        return self.ts[-1]

    def __call__(self, t: float) -> CliffordEven:
        if not self.ts[0] - 1e-12 <= t <= self.ts[-1] + 1e-12:
            raise ValueError(f"t={t} outside [{self.ts[0]}, {self.ts[-1]}]")
        if self.eval_fn is not None:
            return self.eval_fn(t)
        k = bisect.bisect_right(self.ts, t) - 1
        k = max(0, min(k, len(self.ts) - 2))
        h = self.ts[k + 1] - self.ts[k]
        s = (t - self.ts[k]) / h
        if k not in self._seg_cache:
            step = self.zs[k].reverse() * self.zs[k + 1]
            self._seg_cache[k] = _spin_log(step)
        biv = self._seg_cache[k]
        return self.zs[k] * spinalg.clifford_exp(biv.scale(s))

    def matrix(self, t: float) -> np.ndarray:
        return np.array(
            [[float(x) for x in row] for row in spinalg.project(self(t))]
        )

    def minors(self, t: float) -> np.ndarray:
        return southwest_minors(self.matrix(t))


def _spin_log(z: CliffordEven) -> CliffordEven:
    """Bivector logarithm of a unit spinor close to the identity."""
    from scipy.linalg import logm

    R = np.array([[float(x) for x in row] for row in spinalg.project(z)])
    S = np.real(logm(R))
    terms = {}
    n = z.n
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            if abs(S[i, j]) > 1e-15:
                terms[(i + 1, j + 1)] = 0.5 * S[i, j]
    biv = CliffordEven.make(n, terms)
    # the matrix log determines the lift only up to sign; match z
    w = spinalg.clifford_exp(biv)
    if triang._spin_distance(w, z.to_float()) > triang._spin_distance(-w, z.to_float()):
        raise ValueError("element too far from the identity for a bivector log")
    return biv


def _lift_rotation(n: int, R: np.ndarray) -> CliffordEven:
    """A spin lift of an arbitrary rotation (sign chosen arbitrarily)."""
    from scipy.linalg import sqrtm

    R = np.array(R, dtype=float)
    try:
        z = triang._lift_rotation_step(n, R)
        M = np.array([[float(x) for x in row] for row in spinalg.project(z)])
        if np.allclose(M, R, atol=1e-8):
            return z
    except Exception:
        pass
    half = np.real(sqrtm(R))
    zh = _lift_rotation(n, half)
    z = zh * zh
    M = np.array([[float(x) for x in row] for row in spinalg.project(z)])
    if not np.allclose(M, R, atol=1e-6):
        raise ValueError("failed to lift rotation to Spin")
    return z


# ---------------------------------------------------------------------------
# Construction of FrameCurves
# ---------------------------------------------------------------------------


def integrate_frame(
    n: int,
    kappas: Sequence[Callable[[float], float]],
    t0: float = 0.0,
    t1: float = 1.0,
    steps: int = 2000,
    z0: Optional[CliffordEven] = None,
) -> FrameCurve:
    """Solve ``z' = z * sum_j kappa_j(t) a_j`` by RK4 in spin coefficients.

    All curvatures must be strictly positive on the grid
    (:class:`NonPositiveCurvature`).  The returned curve has an exact
    evaluation callback that re-integrates from the nearest stored node.
    """
    if len(kappas) != n:
        raise ValueError(f"need {n} curvature functions, got {len(kappas)}")
    blades = _even_blades(n)
    index = {b: k for k, b in enumerate(blades)}
    gens = [
        _right_mult_matrix(n, _generator_bivector(n, j + 1), blades, index)
        for j in range(n)
    ]

    def amat(t: float) -> np.ndarray:
        m = np.zeros_like(gens[0])
        for j, kap in enumerate(kappas):
            v = float(kap(t))
            if v <= 0.0:
                raise NonPositiveCurvature(f"kappa_{j + 1}({t}) = {v} <= 0")
            m += v * gens[j]
        return m

    def rk4(v: np.ndarray, t: float, h: float) -> np.ndarray:
        k1 = amat(t) @ v
        k2 = amat(t + h / 2) @ (v + h / 2 * k1)
        k3 = amat(t + h / 2) @ (v + h / 2 * k2)
        k4 = amat(t + h) @ (v + h * k3)
        out = v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        return out / np.linalg.norm(out)

    start = (z0.to_float() if z0 is not None else CliffordEven.one(n, exact=False))
    v = _to_vec(start, index)
    ts = np.linspace(t0, t1, steps + 1)
    vs = [v]
    for k in range(steps):
        v = rk4(v, ts[k], ts[k + 1] - ts[k])
        vs.append(v)
    zs = [_from_vec(n, w, blades) for w in vs]

    def eval_fn(t: float, _ts=ts, _vs=vs) -> CliffordEven:
        k = int(np.searchsorted(_ts, t, side="right")) - 1
        k = max(0, min(k, len(_ts) - 1))
        w = _vs[k]
        dt = t - _ts[k]
        if abs(dt) < 1e-15:
            return _from_vec(n, w, blades)
        sub = 16
        h = dt / sub
        tt = _ts[k]
        for _ in range(sub):
            w = rk4(w, tt, h)
            tt += h
        return _from_vec(n, w, blades)

    return FrameCurve(n, tuple(float(t) for t in ts), zs, eval_fn)


def frame_curve_from_matrix_path(
    n: int,
    mfun: Callable[[float], Sequence[Sequence[float]]],
    ts: Sequence[float],
) -> FrameCurve:
    """Curve from a matrix path with nondegenerate QR factors.

    ``mfun(t)`` need not be orthogonal: the frame is its positive
    QR ``Q`` factor (right upper-triangular factors do not change any
    southwest minor data).  The spin lift is continuous along ``ts`` and
    the evaluation callback lifts from the nearest stored node.
    """
    ts = [float(t) for t in ts]
    qs = []
    for t in ts:
        Q, R = triang.qr_positive([list(map(float, row)) for row in mfun(t)])
        qs.append(np.array(Q))
    zs = [_lift_rotation(n, qs[0])]
    for prev, nxt in zip(qs, qs[1:]):
        zs.append(zs[-1] * triang._lift_rotation_step(n, prev.T @ nxt))

    def eval_fn(t: float) -> CliffordEven:
        k = bisect.bisect_right(ts, t) - 1
        k = max(0, min(k, len(ts) - 1))
        Q, R = triang.qr_positive([list(map(float, row)) for row in mfun(t)])
        step = qs[k].T @ np.array(Q)
        return zs[k] * triang._lift_rotation_step(n, step)

    return FrameCurve(n, tuple(ts), zs, eval_fn)


def frenet_frame(
    jet: Callable[[float], Sequence[Sequence[float]]],
    ts: Sequence[float],
    n: int,
) -> FrameCurve:
    """Frenet frame curve of a sphere curve given by its jet.

    ``jet(t)`` returns the (n+1) x (n+1) matrix with columns
    ``gamma(t), gamma'(t), ..., gamma^(n)(t)``.  The frame is the
    positive Gram-Schmidt (QR) factor; a rank-deficient or
    orientation-reversing jet raises :class:`DegenerateJet`.
    """
    ts = [float(t) for t in ts]

    def qfun(t: float) -> np.ndarray:
        J = np.array(jet(t), dtype=float)
        if J.shape != (n + 1, n + 1):
            raise DegenerateJet(f"jet at t={t} has shape {J.shape}")
        det = np.linalg.det(J)
        if det <= 1e-12:
            raise DegenerateJet(f"jet at t={t} has determinant {det:.2e}")
        Q, R = triang.qr_positive(J.tolist())
        return np.array(Q)

    return frame_curve_from_matrix_path(n, qfun, ts)


# ---------------------------------------------------------------------------
# Minors, singular set, itinerary
# ---------------------------------------------------------------------------


def southwest_minors(M: Sequence[Sequence[float]]) -> np.ndarray:
    """``m_j``: determinant of the last j rows and first j columns."""
    A = np.array(M, dtype=float)
    m = A.shape[0]
    return np.array(
        [float(np.linalg.det(A[m - j :, :j])) for j in range(1, m)]
    )


def _refine_sign_change(f, lo, hi, flo, fhi):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-14:
            break
        fm = f(mid)
        if flo * fm <= 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _refine_dip(f, lo, hi):
    """Golden-section minimization of |f| on [lo, hi]."""
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - g * (b - a)
    d = a + g * (b - a)
    fc, fd = abs(f(c)), abs(f(d))
    while b - a > 1e-12:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = abs(f(c))
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = abs(f(d))
    t = 0.5 * (a + b)
    return t, abs(f(t))


def _slope_mult(f, tstar, d0, cap, span):
    """Vanishing order of f at tstar by log-log slope on both sides."""
    ds = [d0 * (0.55 ** k) for k in range(6)]
    slopes = []
    for side in (+1.0, -1.0):
        xs, ys = [], []
        for d in ds:
            t = tstar + side * d
            if not (tstar - span <= t <= tstar + span):
                continue
            val = abs(f(t))
            xs.append(math.log(d))
            ys.append(math.log(val + 1e-300))
        if len(xs) < 3:
            continue
        slopes.append(float(np.polyfit(xs, ys, 1)[0]))
    if not slopes:
        raise UnresolvedCluster("no usable one-sided samples for slope")
    k = int(round(sum(slopes) / len(slopes)))
    if k < 0 or k > cap:
        raise UnresolvedCluster(f"slope {slopes} out of range (cap {cap})")
    if any(abs(s - k) > 0.35 for s in slopes):
        raise UnresolvedCluster(f"inconsistent slopes {slopes}")
    return k


@dataclass(frozen=True)
class SingularEvent:
    """A singular time with its letter and multiplicity vector."""

    time: float
    letter: Permutation
    mult: tuple


def singular_events(
    curve: FrameCurve,
    grid: int = 1024,
    cluster_tol: float = 1e-6,
    zero_rel: float = 1e-8,
) -> list[SingularEvent]:
    """Locate and classify the singular set of ``curve`` on the open domain.

    Zeros of the southwest minors are found by sign-change bisection and
    by |m| dips, clustered within ``cluster_tol``, and each cluster is
    given a multiplicity vector by log-log slope estimation at two scales
    (:class:`UnresolvedCluster` if the scales disagree or the pattern is
    not a permutation).
    """
    n = curve.n
    t0, t1 = curve.t0, curve.t1
    span = t1 - t0
    ts = np.linspace(t0, t1, grid + 1)
    vals = np.array([curve.minors(t) for t in ts])  # (grid+1, n)
    scales = np.maximum(np.abs(vals).max(axis=0), 1e-12)

    def minor_fn(j):
        return lambda t: float(curve.minors(t)[j])

    roots = []  # (t, j, is_sign_change)
    for j in range(n):
        f = minor_fn(j)
        v = vals[:, j]
        scale = scales[j]
        k = 0
        while k < grid:
            if v[k] == 0.0:
                roots.append((float(ts[k]), j, True))
                k += 1
                continue
            if v[k] * v[k + 1] < 0:
                r = _refine_sign_change(f, ts[k], ts[k + 1], v[k], v[k + 1])
                roots.append((float(r), j, True))
                k += 1
                continue
            # dip: interior local minimum of |v| below trigger
            if (
                0 < k < grid
                and abs(v[k]) <= abs(v[k - 1])
                and abs(v[k]) <= abs(v[k + 1])
                and abs(v[k]) < 1e-4 * scale
            ):
                t, fmin = _refine_dip(f, ts[k - 1], ts[k + 1])
                if fmin < zero_rel * scale:
                    roots.append((float(t), j, False))
            k += 1

    # keep only interior roots (open domain convention)
    edge = max(1e-9, 1e-9 * span)
    roots = [r for r in roots if t0 + edge < r[0] < t1 - edge]
    if not roots:
        return []

    roots.sort()
    clusters: list[list[tuple]] = [[roots[0]]]
    for r in roots[1:]:
        if r[0] - clusters[-1][-1][0] <= max(cluster_tol, 1e-5 * span):
            clusters[-1].append(r)
        else:
            clusters.append([r])

    events = []
    for cl in clusters:
        precise = sorted(t for t, j, sc in cl if sc)
        allts = sorted(t for t, j, sc in cl)
        center = precise[len(precise) // 2] if precise else allts[len(allts) // 2]
        jset = {j for _, j, _ in cl}
        mult = []
        d0 = 0.01 * span
        for j in range(n):
            f = minor_fn(j)
            if j not in jset and abs(f(center)) > 1e-6 * scales[j]:
                mult.append(0)
                continue
            cap = (j + 1) * (n - j)  # mult_j of the top letter
            k1 = _slope_mult(f, center, d0, cap, span)
            k2 = _slope_mult(f, center, d0 / 3.0, cap, span)
            if k1 != k2:
                raise UnresolvedCluster(
                    f"multiplicity unstable for m_{j + 1} at t={center}: {k1} vs {k2}"
                )
            mult.append(k1)
        try:
            letter = symgrp.permutation_from_mult(tuple(mult), n)
        except symgrp.NotARealizableMultVector as exc:
            raise UnresolvedCluster(
                f"multiplicity pattern {tuple(mult)} at t={center} is not a letter"
            ) from exc
        if letter.is_identity():
            raise UnresolvedCluster(f"zero multiplicity cluster at t={center}")
        events.append(SingularEvent(center, letter, tuple(mult)))
    return events


def singular_set(curve: FrameCurve, **kw) -> tuple:
    """Sorted tuple of singular times (compact subset of the domain)."""
    return tuple(ev.time for ev in singular_events(curve, **kw))


def itinerary(curve: FrameCurve, **kw) -> tuple:
    """The itinerary word: letters of the singular events in time order."""
    return tuple(ev.letter for ev in singular_events(curve, **kw))


# ---------------------------------------------------------------------------
# Hausdorff distance and convexity
# ---------------------------------------------------------------------------


def hausdorff(X: Sequence[float], Y: Sequence[float]) -> float:
    """Hausdorff distance between compact subsets of the parameter line.

    Conventions: ``d(empty, empty) = 0`` and ``d(empty, X) = 1`` for
    nonempty X.
    """
    X, Y = sorted(X), sorted(Y)
    if not X and not Y:
        return 0.0
    if not X or not Y:
        return 1.0

    def directed(A, B):
        return max(min(abs(a - b) for b in B) for a in A)

    return max(directed(X, Y), directed(Y, X))


def is_convex_arc(curve: FrameCurve, samples: int = 10, tol: float = 1e-6) -> bool:
    """Check convexity: every chord ``z(s)^-1 z(t)`` (s < t) must lie in
    the signed open cell ``Bru_{acute eta}``."""
    ts = np.linspace(curve.t0, curve.t1, samples)
    zs = [curve(t) for t in ts]
    for a in range(len(ts)):
        for b in range(a + 1, len(ts)):
            d = zs[a].reverse() * zs[b]
            if not spinalg.in_positive_cell(d, tol=tol):
                return False
    return True


# ---------------------------------------------------------------------------
# Curves with prescribed itinerary
# ---------------------------------------------------------------------------


def curve_with_itinerary(
    word,
    times: Optional[Sequence[float]] = None,
    n: Optional[int] = None,
    c: float = math.pi / 4,
    samples: int = 48,
    verify: bool = True,
    verify_grid: int = 1024,
) -> FrameCurve:
    """A curve from 1 to ``q_of_word(word)`` whose itinerary is ``word``.

    Crossing points are the word-table values ``B(w, j)``; around each a
    model arc ``B(w, j) exp(s c h)`` realizes the letter.  Between
    crossings the curve stays inside a single signed open cell
    ``Bru_{q_j acute eta}``; the connectors interpolate linearly in the
    exact angle chart of that cell, which keeps them strictly inside the
    cell (no extra singular events).  With ``verify=True`` the itinerary
    is re-extracted and compared (hard postcondition); failure raises
    :class:`PathNotAccessible`.
    """
    if isinstance(word, str):
        if n is None:
            raise ValueError("need n to parse a word name")
        word = symgrp.word_from_name(n, word)
    word = tuple(word)
    if n is None:
        if not word:
            raise ValueError("need explicit n for the empty word")
        n = word[0].n
    table = spinalg.word_table(word, n)
    ell = len(word)

    if ell == 0:
        # full model convex curve 1 -> hat(eta) = exp(pi h)
        endpoint = table.integer[-1]
        model_end = spinalg.spin_exp_h(n, math.pi)
        if triang._spin_distance(model_end, endpoint.to_float()) > 1e-8:
            raise PathNotAccessible("empty-word endpoint is not exp(pi h)")
        ts = np.linspace(0.0, 1.0, 257)
        zs = [spinalg.spin_exp_h(n, math.pi * t) for t in ts]
        return FrameCurve(
            n, tuple(float(t) for t in ts), zs,
            lambda t: spinalg.spin_exp_h(n, math.pi * t),
        )

    if times is None:
        times = [(j + 1) / (ell + 1) for j in range(ell)]
    times = [float(t) for t in times]
    if len(times) != ell or any(
        not 0.0 < t < 1.0 for t in times
    ) or any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("times must be strictly increasing inside (0, 1)")

    gaps = [times[0]] + [b - a for a, b in zip(times, times[1:])] + [1.0 - times[-1]]
    d = min(gaps) / 3.0

    r = 0.5
    last_exc: Exception | None = None
    for _ in range(6):
        try:
            curve = _assemble_curve(table, times, d, r, c, samples)
            if verify:
                got = itinerary(curve, grid=verify_grid)
                if [g.images for g in got] != [w.images for w in word]:
                    raise PathNotAccessible(
                        f"re-extracted itinerary {symgrp.word_name(got)} "
                        "differs from request"
                    )
            return curve
        except (
            triang.NotConnectableInCell,
            UnresolvedCluster,
            PathNotAccessible,
            spinalg.NotUnit,
            spinalg.NoRootInInterval,
        ) as exc:
            last_exc = exc
            r *= 0.5
    raise PathNotAccessible(
        f"could not realize itinerary (last failure: {last_exc})"
    )


def _corner_for_quat(n: int, eta_word, target: CliffordEven) -> list:
    """Chart-corner angle pattern in {0, pi}**l whose alpha product is the
    Quat element ``target`` (a boundary corner of the positive cell)."""
    tf = target.to_float()
    for pat in itertools.product((0.0, math.pi), repeat=len(eta_word)):
        z = CliffordEven.one(n, exact=False)
        for i, t in zip(eta_word, pat):
            if t != 0.0:
                z = z * spinalg.alpha(n, i, t)
        if triang._spin_distance(z, tf) < 1e-9:
            return list(pat)
    raise PathNotAccessible("endpoint is not a corner of the final chart")


def _chart_product(n: int, q: CliffordEven, eta_word, thetas) -> CliffordEven:
    z = q
    for i, th in zip(eta_word, thetas):
        z = z * spinalg.alpha(n, i, float(th))
    return z


def _assemble_curve(table, times, d, r, c, samples) -> FrameCurve:
    word = table.word
    n = word[0].n
    ell = len(word)
    eta_word = symgrp.reduced_word(symgrp.longest_element(n))

    arcs = [table.integer[j + 1].to_float() for j in range(ell)]
    qs = [table.q(j).to_float() for j in range(ell + 1)]

    def arc_eval(j):
        B = arcs[j]
        tau = times[j]

        def ev(t):
            s = (t - tau) / d * r * c
            return B * spinalg.spin_exp_h(n, s)

        return ev

    start_of_arc = [arcs[j] * spinalg.spin_exp_h(n, -r * c) for j in range(ell)]
    end_of_arc = [arcs[j] * spinalg.spin_exp_h(n, r * c) for j in range(ell)]

    segments = []  # (t_lo, t_hi, eval callable)

    def add_chart_connector(q, th_from, th_to, t_lo, t_hi):
        th_from = np.array(th_from)
        th_to = np.array(th_to)

        def ev(t, q=q, a=th_from, b=th_to, lo=t_lo, hi=t_hi):
            s = (t - lo) / (hi - lo)
            return _chart_product(n, q, eta_word, (1 - s) * a + s * b)

        segments.append((t_lo, t_hi, ev))

    # initial ramp: 1 -> C_1 inside the component q_0 = 1
    th_c1 = spinalg.positive_chart(qs[0].reverse() * start_of_arc[0])
    add_chart_connector(qs[0], [0.0] * len(eta_word), th_c1, 0.0, times[0] - d)
    for j in range(ell):
        segments.append((times[j] - d, times[j] + d, arc_eval(j)))
        th_a = spinalg.positive_chart(qs[j + 1].reverse() * end_of_arc[j])
        if j + 1 < ell:
            th_c = spinalg.positive_chart(qs[j + 1].reverse() * start_of_arc[j + 1])
            add_chart_connector(qs[j + 1], th_a, th_c, times[j] + d, times[j + 1] - d)
        else:
            # endpoint B(w, l+1) is a Quat point on the boundary of the
            # last component: approach it through the matching chart corner
            th_end = _corner_for_quat(
                n, eta_word, qs[ell].reverse() * table.integer[-1].to_float()
            )
            add_chart_connector(qs[ell], th_a, th_end, times[ell - 1] + d, 1.0)

    bounds = [seg[0] for seg in segments]

    def eval_fn(t):
        k = bisect.bisect_right(bounds, t) - 1
        k = max(0, min(k, len(segments) - 1))
        lo, hi, obj = segments[k]
        return obj(min(max(t, lo), hi))

    ts_all: list[float] = []
    zs_all: list[CliffordEven] = []
    for lo, hi, obj in segments:
        for t in np.linspace(lo, hi, max(9, samples // 4 * 4 + 1)):
            if ts_all and t <= ts_all[-1] + 1e-12:
                continue
            ts_all.append(float(t))
            zs_all.append(obj(t))
    return FrameCurve(n, tuple(ts_all), zs_all, eval_fn)


# ---------------------------------------------------------------------------
# The u invariant of an acb event
# ---------------------------------------------------------------------------


_ACB = Permutation((3, 1, 4, 2))


def _doolittle(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = A.shape[0]
    U = A.astype(float).copy()
    L = np.eye(m)
    for k in range(m):
        if abs(U[k, k]) < 1e-12:
            raise triang.NotLUDecomposable(f"zero pivot at {k}")
        for i in range(k + 1, m):
            f = U[i, k] / U[k, k]
            L[i, k] = f
            U[i] -= f * U[k]
    return L, U


def u_invariant(
    curve: FrameCurve,
    t_star: float,
    h: float = 2e-3,
    window: float = 0.05,
) -> float:
    """The modulus ``u`` of an ``acb`` event at ``t_star`` (n = 3).

    The event must have multiplicity vector (2, 1, 2) (letter ``acb``),
    otherwise :class:`NotAnAcbEvent`.  The curve is written in the
    unit-lower triangular chart ``L(t)`` through the crossing and

        ``u = (b3 f1' - b1 f3') / (2 b1 b3 beta2)``

    with ``beta_i = (L^-1 L')_{i+1,i}``, ``f_i = beta_i / beta_2`` and
    ``b_i = f_i(t_star)``, all derivatives by Richardson-extrapolated
    central differences.
    """
    n = curve.n
    if n != 3:
        raise NotAnAcbEvent(f"acb events require n = 3, curve has n = {n}")
    span = curve.t1 - curve.t0
    w = min(window, 0.45 * span)

    # classify the event letter by slopes of the minors
    mult = []
    for j in range(3):
        f = lambda t, j=j: float(curve.minors(t)[j])
        cap = (j + 1) * (4 - j)
        k1 = _slope_mult(f, t_star, 0.2 * w, cap, span)
        mult.append(k1)
    letter = symgrp.permutation_from_mult(tuple(mult), 3)
    if letter != _ACB:
        raise NotAnAcbEvent(f"event at t={t_star} has letter {letter}, mult {mult}")

    # signed component of the incoming branch fixes the chart
    z_minus = curve(t_star - 0.5 * w)
    eta = symgrp.longest_element(3)
    q_found = None
    for q in spinalg.quat_elements(3):
        if spinalg.in_positive_cell(q.to_float().reverse() * z_minus):
            q_found = q
            break
    if q_found is None:
        raise NotAnAcbEvent("incoming branch is not in an open signed cell")
    z_chart = q_found * spinalg.acute(eta) * spinalg.acute(_ACB)
    A0 = np.array(
        [[float(x) for x in row] for row in spinalg.project(z_chart.to_float())]
    )
    A0inv = np.linalg.inv(A0)

    def Lfun(t: float) -> np.ndarray:
        M = curve.matrix(t)
        L, _ = _doolittle(A0inv @ M)
        return L

    def beta(t: float) -> np.ndarray:
        # Richardson central difference for L'(t)
        d1 = (Lfun(t + h) - Lfun(t - h)) / (2 * h)
        d2 = (Lfun(t + h / 2) - Lfun(t - h / 2)) / h
        dL = (4 * d2 - d1) / 3
        B = np.linalg.solve(Lfun(t), dL)
        return np.array([B[1, 0], B[2, 1], B[3, 2]])

    b = beta(t_star)
    if abs(b[1]) < 1e-9:
        raise NotAnAcbEvent("beta_2 vanishes at the event")

    H = 4 * h

    def fvec(t: float) -> np.ndarray:
        bb = beta(t)
        return np.array([bb[0] / bb[1], bb[2] / bb[1]])

    d1 = (fvec(t_star + H) - fvec(t_star - H)) / (2 * H)
    d2 = (fvec(t_star + H / 2) - fvec(t_star - H / 2)) / H
    df = (4 * d2 - d1) / 3
    b1, b3 = b[0] / b[1], b[2] / b[1]
    return float((b3 * df[0] - b1 * df[1]) / (2 * b1 * b3 * b[1]))
