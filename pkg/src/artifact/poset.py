"""The partial order on itinerary words.

A word is a tuple of letters (non-identity permutations).  The order
``w0 prec w1`` holds when curves with itinerary ``w0`` exist arbitrarily
close to a curve with itinerary ``w1``.  It is decided here by the block
criterion: ``w0 prec w1`` iff ``w0`` splits into ``len(w1)`` consecutive
nonempty blocks with the i-th block preceding the one-letter word of the
i-th letter of ``w1``.  One-letter comparisons are delegated to a letter
oracle, implemented by classifying exact transversal sections
(:mod:`artifact.polysect`) on grids of shrinking radius.  The empty word
is isolated.

Answers are three-valued certificates (yes / no / unknown): the oracle
never guesses, and unknown letter comparisons propagate to ``unknown``
rather than to a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence

from . import polysect, spinalg, symgrp
from .symgrp import Permutation

__all__ = [
    "PrecCertificate",
    "mult_of_word",
    "necessary_conditions",
    "letter_oracle_section",
    "oracle_from_sections",
    "prec",
    "hasse",
    "hasse_dot",
    "hr_splitting_report",
]

Word = tuple  # tuple[Permutation, ...]


def mult_of_word(word: Sequence[Permutation], n: int) -> tuple:
    """Componentwise sum of the letter multiplicity vectors."""
    total = [0] * n
    for sigma in word:
        for k, m in enumerate(symgrp.mult_vector(sigma)):
            total[k] += m
    return tuple(total)


def necessary_conditions(
    w0: Sequence[Permutation], w1: Sequence[Permutation], n: int
) -> tuple[bool, list]:
    """Cheap necessary conditions for ``w0 prec w1``.

    Checks the endpoint law (equal ``q_of_word``), componentwise
    monotonicity of the total multiplicity vector, block-count
    feasibility (``len(w0) >= len(w1)`` for nonempty words) and the
    isolation of the empty word.  Returns (ok, list of failed reasons).
    """
    w0, w1 = tuple(w0), tuple(w1)
    reasons = []
    if (len(w0) == 0) != (len(w1) == 0):
        reasons.append("the empty word is isolated")
    if w0 and w1 and len(w0) < len(w1):
        reasons.append(
            f"too few letters to form {len(w1)} nonempty blocks"
        )
    m0, m1 = mult_of_word(w0, n), mult_of_word(w1, n)
    if any(a > b for a, b in zip(m0, m1)):
        reasons.append(
            f"multiplicity is upper semicontinuous but {m0} exceeds {m1}"
        )
    q0 = spinalg.q_of_word(w0, n)
    q1 = spinalg.q_of_word(w1, n)
    if q0.to_float().terms != q1.to_float().terms and not _same_spinor(q0, q1):
        reasons.append("endpoint q_of_word differs")
    return (not reasons, reasons)


def _same_spinor(a, b) -> bool:
    d = a.to_float() - b.to_float()
    return all(abs(float(c)) < 1e-12 for _, c in d.terms)


# ---------------------------------------------------------------------------
# Letter oracle from exact sections
# ---------------------------------------------------------------------------


def letter_oracle_section(
    sigma: Permutation,
    radii_exponents: Sequence[int] = (4, 6),
    count: int = 9,
) -> frozenset:
    """The set of words preceding the one-letter word ``(sigma,)``.

    Classifies the exact transversal section of ``sigma`` on square
    grids of radius ``2**-k`` for each exponent k and returns the words
    whose label occurs at every radius (the stratification is conical,
    so labels of small radii persist).  The one-letter word itself (the
    origin) is always included.
    """
    section = polysect.build_section(sigma)
    weights = section.x_weights or (1,) * len(section.x_vars)
    per_radius = []
    for k in radii_exponents:
        radius = Fraction(1, 2**k)
        labels = {(sigma,)}
        for point in polysect.weighted_grid_points(radius, count, weights):
            cls = polysect.classify_point(section, point)
            labels.add(tuple(cls.word))
        per_radius.append(labels)
    stable = set.intersection(*per_radius)
    return frozenset(stable)


def oracle_from_sections(
    n: int,
    radii_exponents: Sequence[int] = (4, 6),
    count: int = 9,
) -> Callable:
    """A memoized oracle ``(block, letter) -> True | False | None``.

    ``None`` (unknown) is returned when the section classification of
    the letter fails (e.g. an unrecognized multiplicity pattern).
    """
    cache: dict = {}

    def letter_set(sigma: Permutation):
        key = sigma.images
        if key not in cache:
            try:
                cache[key] = letter_oracle_section(
                    sigma, radii_exponents=radii_exponents, count=count
                )
            except (polysect.UnrecognizedMultPattern, polysect.ZeroPolynomial):
                cache[key] = None
        return cache[key]

    def oracle(block: Word, sigma: Permutation):
        if len(block) == 1 and block[0].images == sigma.images:
            return True
        ok, _ = necessary_conditions(block, (sigma,), n)
        if not ok:
            return False
        s = letter_set(sigma)
        if s is None:
            return None
        return tuple(w.images for w in block) in {
            tuple(x.images for x in w) for w in s
        }

    return oracle


# ---------------------------------------------------------------------------
# The order
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrecCertificate:
    """Three-valued answer to ``w0 prec w1`` with evidence.

    ``status`` is ``"yes"``, ``"no"`` or ``"unknown"``; for yes,
    ``witness`` holds the block boundaries: ``w0[b_i:b_{i+1}]`` precedes
    letter i of ``w1``.
    """

    status: str
    witness: Optional[tuple] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.status == "yes"


def prec(
    w0: Sequence[Permutation],
    w1: Sequence[Permutation],
    oracle: Callable,
    n: Optional[int] = None,
) -> PrecCertificate:
    """Decide ``w0 prec w1`` by the nonempty-block criterion.

    Dynamic program over cut positions; letter comparisons go through
    ``oracle(block, letter)`` which may answer ``None`` (unknown).
    """
    w0, w1 = tuple(w0), tuple(w1)
    if n is None:
        ref = w0 or w1
        if not ref:
            return PrecCertificate("yes", witness=(), reason="both words empty")
        n = ref[0].n
    if not w0 or not w1:
        if not w0 and not w1:
            return PrecCertificate("yes", witness=(), reason="both words empty")
        return PrecCertificate("no", reason="the empty word is isolated")
    ok, reasons = necessary_conditions(w0, w1, n)
    if not ok:
        return PrecCertificate("no", reason="; ".join(reasons))

    m, k = len(w0), len(w1)
    # state[(i, j)]: can w0[:i] be split into j blocks matching w1[:j]
    # values: "yes" with witness, or "unknown", or absent (no)
    yes_wit = {(0, 0): ()}
    unknown = set()
    for j in range(1, k + 1):
        sigma = w1[j - 1]
        for i in range(j, m + 1):
            best = None
            has_unknown = False
            for cut in range(j - 1, i):
                prev_yes = (cut, j - 1) in yes_wit
                prev_unknown = (cut, j - 1) in unknown
                if not prev_yes and not prev_unknown:
                    continue
                ans = oracle(w0[cut:i], sigma)
                if ans is True and prev_yes:
                    best = yes_wit[(cut, j - 1)] + (cut,)
                    break
                if ans is None or prev_unknown:
                    if ans is not False:
                        has_unknown = True
            if best is not None:
                yes_wit[(i, j)] = best
            elif has_unknown:
                unknown.add((i, j))
    if (m, k) in yes_wit:
        wit = yes_wit[(m, k)] + (m,)
        return PrecCertificate("yes", witness=wit)
    if (m, k) in unknown:
        return PrecCertificate("unknown", reason="oracle could not decide")
    return PrecCertificate("no", reason="no valid block split")


# ---------------------------------------------------------------------------
# Hasse diagrams
# ---------------------------------------------------------------------------


def hasse(words: Iterable[Word], oracle: Callable, n: Optional[int] = None):
    """Directed Hasse diagram (transitive reduction) of ``prec`` on a set.

    Returns a networkx DiGraph whose nodes are word names.  Unknown
    comparisons are treated as absent edges but recorded in the graph
    attribute ``unknown_pairs``.
    """
    import networkx as nx

    words = [tuple(w) for w in words]
    names = {w: symgrp.word_name(w) for w in words}
    g = nx.DiGraph()
    unknown_pairs = []
    for w in words:
        g.add_node(names[w])
    for a in words:
        for b in words:
            if a == b:
                continue
            cert = prec(a, b, oracle, n=n)
            if cert.status == "yes":
                g.add_edge(names[a], names[b])
            elif cert.status == "unknown":
                unknown_pairs.append((names[a], names[b]))
    red = nx.transitive_reduction(g)
    red.graph["unknown_pairs"] = sorted(unknown_pairs)
    return red


def hasse_dot(g) -> str:
    """Deterministic DOT serialization of a Hasse diagram."""
    lines = ["digraph hasse {"]
    for node in sorted(g.nodes):
        lines.append(f'  "{node}";')
    for a, b in sorted(g.edges):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Splitting of the acb neighbourhood (failure of the naive expectation)
# ---------------------------------------------------------------------------


def hr_splitting_report(
    u: Fraction,
    radius: Fraction = Fraction(1, 5),
    count: int = 40,
) -> dict:
    """Label sets of the perturbed acb sections at ``+u``, ``-u`` and 0.

    Demonstrates that the neighbourhood of an ``acb`` crossing splits:
    the words ``acbac`` and ``cabca`` occur on opposite sides of the
    modulus ``u`` and never together for ``u != 0``.
    """
    u = Fraction(u)
    out = {}
    for key, uval in (("plus", u), ("minus", -u), ("zero", Fraction(0))):
        fam = polysect.build_perturbed_family("betaprime", uval)
        labels = set()
        for point in polysect.grid_points(radius, count):
            try:
                cls = polysect.classify_point(fam, point)
            except polysect.UnrecognizedMultPattern:
                continue
            labels.add(cls.label)
        out[key] = labels
    acbac, cabca = "acbac", "cabca"
    out["exclusive"] = not (
        (acbac in out["plus"] and cabca in out["plus"])
        or (acbac in out["minus"] and cabca in out["minus"])
    )
    return out
