"""Tests for the acceptance suite runner."""

import pytest

from tmspectra.core import verify
from tmspectra.core.verify import CHECKS, VerifyContext, VerifyReport, run_checks


class TestVerifyContext:
    def test_pick(self):
        assert VerifyContext().pick(18, 14) == 18
        assert VerifyContext(quick=True).pick(18, 14) == 14

    def test_rng_is_seeded(self):
        a = VerifyContext(seed=7).rng().random(3)
        b = VerifyContext(seed=7).rng().random(3)
        assert list(a) == list(b)


class TestRunChecks:
    def test_cheap_checks_pass(self):
        report = run_checks(["lambda1_golden", "diffraction_identity"], quick=True)
        assert report.passed
        assert [r.name for r in report.results] == ["lambda1_golden", "diffraction_identity"]
        assert all(r.elapsed >= 0.0 for r in report.results)

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown check"):
            run_checks(["lambda1_golden", "nope"])

    def test_raising_check_is_collected(self, monkeypatch):
        def boom(ctx):
            raise RuntimeError("kaput")

        monkeypatch.setitem(verify.CHECKS, "boom", boom)
        report = run_checks(["boom", "lambda1_golden"])
        assert report.failures == [("boom", "RuntimeError: kaput")]
        assert [r.name for r in report.results] == ["lambda1_golden"]
        assert not report.passed

    def test_failed_outcome(self, monkeypatch):
        monkeypatch.setitem(verify.CHECKS, "never", lambda ctx: (False, "off by one"))
        report = run_checks(["never"])
        assert not report.passed
        assert report.results[0].detail == "off by one"

    def test_registry_names(self):
        assert {"c0_pressure", "fourier_triangle", "spectrum_sanity"} <= set(CHECKS)


class TestVerifyReport:
    def test_empty_report_passes(self):
        assert VerifyReport().passed


QUICK = VerifyContext(quick=True)


class TestChecks:
    def test_combinatorics_oracles(self):
        ok, detail = verify.check_combinatorics_oracles(QUICK)
        assert ok, detail
        assert detail.startswith("0 count mismatches")

    def test_recursion_oracles(self):
        ok, detail = verify.check_recursion_oracles(QUICK)
        assert ok, detail

    def test_gibbs_sandwich(self):
        ok, detail = verify.check_gibbs_sandwich(QUICK)
        assert ok, detail
        assert detail.startswith("0 violations")

    @pytest.mark.slow
    def test_c0_pressure(self):
        ok, detail = verify.check_c0_pressure(QUICK)
        assert ok, detail

    @pytest.mark.slow
    def test_d2_regression(self):
        ok, detail = verify.check_d2_regression(QUICK)
        assert ok, detail

    @pytest.mark.slow
    def test_pressure_lq_identity(self):
        ok, detail = verify.check_pressure_lq_identity(QUICK)
        assert ok, detail
        assert detail.count("measure") == 6

    @pytest.mark.slow
    def test_spectrum_sanity(self):
        ok, detail = verify.check_spectrum_sanity(QUICK)
        assert ok, detail

    @pytest.mark.slow
    def test_fourier_triangle(self):
        ok, detail = verify.check_fourier_triangle(QUICK)
        assert ok, detail
