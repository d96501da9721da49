from fractions import Fraction

import pytest

from artifact import poset, symgrp


def word(n, text):
    return symgrp.word_from_name(n, text)


ABA_BELOW = {
    "[aba]", "a[ba]", "[ba]a", "b[ab]", "[ab]b", "aa", "abab", "baba", "bb",
}


class TestNecessaryConditions:
    def test_empty_word_isolated(self):
        ok, reasons = poset.necessary_conditions((), word(2, "a"), 2)
        assert not ok

    def test_multiplicity_semicontinuity(self):
        # [aba] cannot degenerate to something of larger multiplicity
        ok, reasons = poset.necessary_conditions(
            word(2, "[aba][aba]"), word(2, "[aba]"), 2
        )
        assert not ok

    def test_endpoint_law(self):
        # a and [aba] reach different components of the endpoint fiber
        ok, reasons = poset.necessary_conditions(
            word(2, "a"), word(2, "[aba]"), 2
        )
        assert not ok
        assert any("q_of_word" in r for r in reasons)


class TestLetterOracle:
    def test_aba_nine_words(self):
        aba = symgrp.letter_from_name(2, "aba")
        got = {symgrp.word_name(w) for w in poset.letter_oracle_section(aba)}
        assert got == ABA_BELOW

    def test_acb_eleven_words(self):
        acb = symgrp.letter_from_name(3, "acb")
        got = {symgrp.word_name(w) for w in poset.letter_oracle_section(acb)}
        assert len(got) == 11
        assert "[acb]" in got and "[ac]b[ac]" in got


class TestPrec:
    oracle = staticmethod(poset.oracle_from_sections(2))

    def test_reflexive(self):
        w = word(2, "a[ba]")
        assert poset.prec(w, w, self.oracle, n=2)

    def test_aa_below_aba(self):
        cert = poset.prec(word(2, "aa"), word(2, "[aba]"), self.oracle, n=2)
        assert cert.status == "yes"
        assert cert.witness == (0, 2)

    def test_empty_not_below_aba(self):
        cert = poset.prec((), word(2, "[aba]"), self.oracle, n=2)
        assert cert.status == "no"

    def test_both_empty(self):
        assert poset.prec((), (), self.oracle, n=2).status == "yes"

    def test_block_witness(self):
        # abab = (ab)(ab) with each block below one letter of [ab][ab]
        cert = poset.prec(
            word(2, "abab"), word(2, "[ab][ab]"), self.oracle, n=2
        )
        if cert.status == "yes":
            assert len(cert.witness) == 3  # two blocks -> three boundaries

    def test_no_backwards(self):
        cert = poset.prec(word(2, "[aba]"), word(2, "aa"), self.oracle, n=2)
        assert cert.status == "no"


class TestHasse:
    def test_aba_diagram(self):
        aba = symgrp.letter_from_name(2, "aba")
        oracle = poset.oracle_from_sections(2)
        words = poset.letter_oracle_section(aba)
        g = poset.hasse(words, oracle, n=2)
        assert set(g.nodes) == ABA_BELOW
        assert g.graph["unknown_pairs"] == []
        expected_covers = {
            ("a[ba]", "[aba]"), ("[ba]a", "[aba]"),
            ("b[ab]", "[aba]"), ("[ab]b", "[aba]"),
            ("aa", "a[ba]"), ("aa", "[ba]a"),
            ("bb", "b[ab]"), ("bb", "[ab]b"),
            ("abab", "a[ba]"), ("abab", "[ab]b"),
            ("baba", "[ba]a"), ("baba", "b[ab]"),
        }
        assert set(g.edges) == expected_covers

    def test_dot_deterministic(self):
        aba = symgrp.letter_from_name(2, "aba")
        oracle = poset.oracle_from_sections(2)
        words = poset.letter_oracle_section(aba)
        d1 = poset.hasse_dot(poset.hasse(words, oracle, n=2))
        d2 = poset.hasse_dot(poset.hasse(sorted(words, key=repr), oracle, n=2))
        assert d1 == d2
        assert d1.startswith("digraph hasse {")


class TestSplittingReport:
    def test_exclusive_at_two_fifths(self):
        rep = poset.hr_splitting_report(Fraction(2, 5), count=24)
        assert rep["exclusive"]
        assert "acbac" in rep["plus"] and "cabca" not in rep["plus"]
        assert "cabca" in rep["minus"] and "acbac" not in rep["minus"]
        assert "acbac" not in rep["zero"] and "cabca" not in rep["zero"]
