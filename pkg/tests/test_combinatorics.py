"""Tests for singularity coding, G_n, forbidden words and extensions."""

import math
from fractions import Fraction

import pytest

from tmspectra.core.combinatorics import (
    enumerate_admissible,
    exclusion_zone,
    extension_envelope,
    extension_search,
    forbidden_automaton,
    forbidden_words,
    g_n,
    hitting_partition,
    kappa,
    kappa_max,
    kappa_ratios,
    markov_check,
    no_prefix_extension,
    singularity_coding,
    word_count,
)
from tmspectra.core.params import make_parameter
from tmspectra.errors import PrecisionError
from tmspectra.models.domain import DyadicWord


def coding(c):
    return singularity_coding(make_parameter(c))


HALF = coding(Fraction(1, 2))
THIRD = coding(Fraction(1, 3))


def words(*bits):
    return {DyadicWord.from_bits(b) for b in bits}


class TestCoding:
    def test_dyadic_detection(self):
        assert HALF.is_dyadic
        assert coding(Fraction(1, 4)).is_dyadic
        assert not THIRD.is_dyadic

    def test_prefixes(self):
        # 5/6 = 0.1101010...
        assert str(THIRD.prefix(5)) == "11010"
        assert str(HALF.prefix(3)) == "000"
        assert str(HALF.dual_prefix(3)) == "111"

    def test_inexact_ambiguity(self):
        inexact = singularity_coding(make_parameter(0.5))
        assert not inexact.exact
        with pytest.raises(PrecisionError):
            inexact.prefix(3)

    def test_inexact_generic_float(self):
        inexact = singularity_coding(make_parameter(0.3))
        # 0.8 = 0.110011...
        assert str(inexact.prefix(6)) == "110011"


class TestGn:
    def test_dyadic_split(self):
        assert g_n(HALF, 3) == words("000", "111")

    def test_neighbours(self):
        assert g_n(THIRD, 2) == words("11", "00", "10")

    def test_first_level_has_both_letters(self):
        assert g_n(THIRD, 1) == words("0", "1")

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            g_n(THIRD, 0)


class TestHitting:
    def test_partition_of_positions(self):
        hp = hitting_partition(HALF, DyadicWord.from_bits("0011"))
        assert hp.depths == (2, 2, None, None)
        assert hp.full_times == (3, 4)

    def test_kappa_matches_full_times(self):
        for bits in ("0011", "0000", "0101", "1101001"):
            word = DyadicWord.from_bits(bits)
            assert kappa(HALF, word) == hitting_partition(HALF, word).kappa
            assert kappa(THIRD, word) == hitting_partition(THIRD, word).kappa

    def test_kappa_max_at_half(self):
        assert kappa_max(HALF, 8) == 8

    def test_kappa_max_monotone(self):
        values = [kappa_max(THIRD, n) for n in range(1, 11)]
        assert values == sorted(values)

    def test_sampled_kappa(self):
        assert 1 <= kappa_max(THIRD, 40, samples=500, seed=3) <= 40

    def test_ratios(self):
        rows = kappa_ratios(HALF, [4, 9])
        assert rows[1] == (9, 9, 3.0)


class TestForbidden:
    def test_forbidden_words(self):
        assert set(forbidden_words(HALF, 2)) == words("000", "111")
        assert forbidden_words(THIRD, 2) == (DyadicWord.from_bits("110"),)

    def test_rejects_m_zero(self):
        with pytest.raises(ValueError):
            forbidden_words(THIRD, 0)

    def test_zone_removes_singularity(self):
        zone = exclusion_zone(THIRD, 2)
        assert zone.removes(Fraction(5, 6))
        assert not zone.removes(Fraction(1, 2))

    @pytest.mark.parametrize(
        ("m", "n", "expected"),
        [(1, 6, 2), (2, 4, 10), (2, 2, 4), (3, 3, 8)],
    )
    def test_counts_at_half(self, m, n, expected):
        aut = forbidden_automaton(HALF, m)
        assert word_count(aut, n) == expected
        assert enumerate_admissible(HALF, m, n).shape[0] == expected

    @pytest.mark.parametrize("c", [Fraction(1, 3), Fraction(1, 4), Fraction(2, 5)])
    def test_count_matches_enumeration(self, c):
        cod = coding(c)
        for m in range(1, 5):
            aut = forbidden_automaton(cod, m)
            for n in range(1, 11):
                assert word_count(aut, n) == enumerate_admissible(cod, m, n).shape[0]

    def test_count_length_limit(self):
        aut = forbidden_automaton(THIRD, 2)
        with pytest.raises(ValueError):
            word_count(aut, 63)


class TestMarkov:
    def test_alternating_language(self):
        report = markov_check(forbidden_automaton(HALF, 1))
        assert report.irreducible
        assert report.period == 2
        assert not report.aperiodic
        assert report.spectral_radius.contains(1.0)
        assert report.essential_count == report.state_count == 2

    def test_golden_ratio_growth(self):
        report = markov_check(forbidden_automaton(HALF, 2))
        assert report.irreducible
        assert report.aperiodic
        assert report.spectral_radius.contains((1 + math.sqrt(5)) / 2, slack=1e-9)

    def test_generic_parameter(self):
        report = markov_check(forbidden_automaton(THIRD, 6))
        assert report.irreducible
        assert report.aperiodic
        assert 1.0 < report.spectral_radius.lo <= report.spectral_radius.hi <= 2.0


class TestExtension:
    def test_closing_extension(self):
        found = extension_search(HALF, DyadicWord.from_bits("0011"))
        assert found.extension == DyadicWord(0, 1)
        assert found.length == 1

    def test_extension_leaves_g(self):
        word = DyadicWord.from_bits("1101010110")
        found = extension_search(THIRD, word)
        full = word.extend(found.extension)
        n = full.length
        for k in range(1, word.length + 1):
            assert not g_n(THIRD, n - k + 1) & {full.suffix(k - 1)}

    def test_envelope(self):
        assert extension_envelope(1) == 4.0
        assert extension_envelope(10**6) > 4.0
        assert extension_envelope(10**6, factor=5.0) > extension_envelope(10**6)

    def test_no_prefix_rejects_half(self):
        with pytest.raises(ValueError):
            no_prefix_extension(HALF, DyadicWord.from_bits("01"))

    def test_no_prefix_extension(self):
        word = DyadicWord.from_bits("0110")
        found = no_prefix_extension(THIRD, word)
        assert found.no_prefix
        full = word.extend(found.extension)
        for k in range(full.length):
            tail = full.suffix(k)
            assert tail != THIRD.prefix(tail.length)
