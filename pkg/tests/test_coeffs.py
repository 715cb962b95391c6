"""Coefficient sequences, contraction, classification, truncation."""

import json
import math

import numpy as np
import pytest

from jacobispec import (
    CoefficientSequence,
    InputError,
    SFraction,
    blumenthal_limits,
    classify,
    coeffs_from_json_dict,
    coeffs_to_json_dict,
    make_family,
    FamilySpec,
    s_to_j,
    truncate,
)


class TestSFraction:
    def test_positive_real_rejects_nonpositive(self):
        with pytest.raises(InputError):
            SFraction.from_table([1.0, -0.5])
        with pytest.raises(InputError):
            SFraction.from_table([0.0])

    def test_rule_rejects_nonpositive_lazily(self):
        s = SFraction.from_rule(lambda k: 1.0 - 0.5 * k)
        assert s.term(0) == 1.0
        with pytest.raises(InputError):
            s.term(2)

    def test_complex_kind_allows_anything(self):
        s = SFraction.from_table([1 + 1j, -2.0], kind="complex")
        assert s.term(0) == 1 + 1j

    def test_table_index_out_of_range(self):
        s = SFraction.from_table([1.0, 2.0])
        with pytest.raises(InputError):
            s.term(2)


class TestCoefficientSequence:
    def test_offdiag_must_be_positive(self):
        with pytest.raises(InputError):
            CoefficientSequence.from_table([0.0, 0.0], [0.0])

    def test_rule_offdiag_checked_lazily(self):
        c = CoefficientSequence.from_rule(lambda n: 0.0, lambda n: 1.0 - 0.4 * n)
        assert c.offdiag(1) == 0.6
        with pytest.raises(InputError):
            c.offdiag(3)

    def test_declared_limits_validation(self):
        with pytest.raises(InputError):
            CoefficientSequence.from_table([0.0], [], declared_limits=(-1.0, 0.0))
        with pytest.raises(InputError):
            CoefficientSequence.from_table([0.0], [], declared_limits=(math.inf, 0.0))

    def test_arrays(self):
        c = CoefficientSequence.from_rule(lambda n: float(n), lambda n: float(n))
        assert np.array_equal(c.diag_array(3), [0.0, 1.0, 2.0])
        assert np.array_equal(c.offdiag_array(3), [1.0, 2.0, 3.0])


class TestContraction:
    def test_constant_terms(self):
        cval = 0.7
        j = s_to_j(SFraction.from_rule(lambda k: cval))
        assert j.lam0 == cval
        # first shift is b_1 alone; the two-term form starts at n = 2
        # (cross-checked against the convergent identity in test_cfrac)
        assert j.alpha(1) == pytest.approx(cval)
        for n in range(2, 8):
            assert j.alpha(n) == pytest.approx(2 * cval)
        for n in range(1, 8):
            assert j.lam(n) == pytest.approx(cval * cval)

    def test_arithmetic_terms(self):
        j = s_to_j(SFraction.from_rule(lambda k: float(k + 1)))
        # b = (1, 2, 3, 4, 5, ...)
        assert j.lam0 == 1.0
        assert j.alpha(1) == pytest.approx(2.0)
        assert j.lam(1) == pytest.approx(6.0)     # b_1 b_2
        assert j.alpha(2) == pytest.approx(7.0)   # b_2 + b_3
        assert j.lam(2) == pytest.approx(20.0)    # b_3 b_4

    def test_decaying_terms_give_compact_coefficients(self):
        j = s_to_j(SFraction.from_rule(lambda k: 1.0 / (k + 1.0)))
        assert abs(j.alpha(500)) < 3e-3
        assert j.lam(500) < 1e-5
        assert abs(j.alpha(1000)) < abs(j.alpha(100))

    def test_rejects_complex_kind(self):
        s = SFraction.from_table([1.0, 2.0], kind="complex")
        with pytest.raises(InputError):
            s_to_j(s)

    def test_recurrence_view_mapping(self):
        j = s_to_j(SFraction.from_rule(lambda k: float(k + 1)))
        for n in range(1, 6):
            assert j.coeffs.diag(n - 1) == pytest.approx(-j.alpha(n))
            assert j.coeffs.offdiag(n) == pytest.approx(math.sqrt(j.lam(n)))


class TestClassify:
    def test_declared_limits_give_exact_mab(self):
        c = CoefficientSequence.from_rule(
            lambda n: 1.0 / (n + 2.0), lambda n: 0.5 + 1.0 / (n + 1.0),
            declared_limits=(0.5, 0.0))
        rep = classify(c, (100, 1000))
        assert rep.mab == (1.0, 0.0)
        assert rep.is_compact == "no"

    def test_lommel_compact_not_trace_class(self):
        rep = classify(make_family(FamilySpec("lommel", {"nu": 1.0})), (100, 2000))
        assert rep.is_compact == "yes"
        assert rep.is_trace_class == "no"

    def test_rogers_ramanujan_trace_class(self):
        c = make_family(FamilySpec("rogers_ramanujan", {"a": 0.0, "b": 1.0, "q": 0.5}))
        rep = classify(c, (50, 400), tol=1e-12)
        assert rep.is_trace_class == "yes"
        assert rep.is_compact == "yes"

    def test_chebyshev_not_compact(self):
        rep = classify(make_family(FamilySpec("chebyshev", {"a": 1.0, "b": 0.0})),
                       (100, 500))
        assert rep.is_compact == "no"
        assert rep.mab == (1.0, 0.0)

    def test_heuristic_without_limits(self):
        # constant sequence without declared limits: limit estimate is clean
        # but nonzero, so no hard verdict is issued
        c = CoefficientSequence.from_rule(lambda n: 0.0, lambda n: 0.5)
        rep = classify(c, (10, 200), tol=1e-10)
        assert rep.mab == (1.0, 0.0)
        assert rep.is_compact == "undetermined"

    def test_heuristic_wobbling_sequence_undetermined(self):
        c = CoefficientSequence.from_rule(lambda n: math.sin(n), lambda n: 1.0 + 0.3 * math.cos(n))
        rep = classify(c, (10, 300), tol=1e-6)
        assert rep.mab is None
        assert rep.is_compact == "undetermined"

    def test_monotone_consistency_on_random_compact_sequences(self):
        # trace_class == yes implies compact == yes when mab is (0, 0)
        rng = np.random.default_rng(42)
        for _ in range(20):
            p = rng.uniform(0.5, 2.5)
            scale = rng.uniform(0.1, 2.0)
            c = CoefficientSequence.from_rule(
                lambda n, s=scale, e=p: s / (n + 2.0) ** e,
                lambda n, s=scale, e=p: s / (n + 1.0) ** e,
                declared_limits=(0.0, 0.0))
            rep = classify(c, (100, 2000), tol=1e-8)
            if rep.is_trace_class == "yes":
                assert rep.is_compact == "yes"

    def test_window_validation(self):
        c = make_family(FamilySpec("lommel", {"nu": 1.0}))
        with pytest.raises(InputError):
            classify(c, (10, 10))
        with pytest.raises(InputError):
            classify(c, (5, 10), tol=-1.0)


class TestBlumenthalLimits:
    def test_stieltjes_degenerate_case(self):
        bl = blumenthal_limits(0.0, 0.0)
        assert bl.essential_interval == (0.0, 0.0)

    def test_unit_limits(self):
        bl = blumenthal_limits(1.0, 1.0)
        assert bl.essential_interval == (-4.0, 0.0)

    def test_asymmetric_limits(self):
        bl = blumenthal_limits(1.0, 4.0)
        assert bl.a == pytest.approx(4.0)
        assert bl.b == pytest.approx(-5.0)
        assert bl.essential_interval == (-9.0, -1.0)

    def test_negative_rejected(self):
        with pytest.raises(InputError):
            blumenthal_limits(-1.0, 1.0)

    def test_interval_width_invariant(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            l, l1 = rng.uniform(0, 5, size=2)
            bl = blumenthal_limits(l, l1)
            width = bl.essential_interval[1] - bl.essential_interval[0]
            assert width == pytest.approx(4.0 * math.sqrt(l * l1), abs=1e-12)
            assert width >= 0


class TestTruncate:
    def test_chebyshev_two_by_two(self):
        t = truncate(make_family(FamilySpec("chebyshev", {"a": 1.0, "b": 0.0})), 2)
        assert np.array_equal(t.diag, [0.0, 0.0])
        assert np.array_equal(t.offdiag, [0.5])

    def test_lommel_first_entry(self):
        t = truncate(make_family(FamilySpec("lommel", {"nu": 1.0})), 2)
        assert t.offdiag[0] == pytest.approx(math.sqrt(1.0 / 8.0), rel=1e-15)

    def test_single_row(self):
        c = CoefficientSequence.from_table([3.5], [])
        t = truncate(c, 1)
        assert t.n == 1 and t.diag[0] == 3.5

    def test_zero_rejected(self):
        c = CoefficientSequence.from_table([3.5], [])
        with pytest.raises(InputError):
            truncate(c, 0)

    def test_prefix_agreement(self):
        c = make_family(FamilySpec("natvig", {"lam": 1.0, "mu": 2.0}))
        t5 = truncate(c, 5)
        t6 = truncate(c, 6)
        assert np.array_equal(t5.diag, t6.diag[:5])
        assert np.array_equal(t5.offdiag, t6.offdiag[:4])


class TestJsonDocuments:
    def test_table_round_trip(self):
        c = CoefficientSequence.from_table([0.1, 0.2, 0.3], [1.0, 2.0],
                                           declared_limits=(0.0, 0.0))
        doc = coeffs_to_json_dict(c)
        c2 = coeffs_from_json_dict(json.loads(json.dumps(doc)))
        assert coeffs_to_json_dict(c2) == doc

    def test_rule_round_trip(self):
        c = make_family(FamilySpec("lommel", {"nu": 1.5}))
        doc = coeffs_to_json_dict(c)
        c2 = coeffs_from_json_dict(doc)
        assert c2.offdiag(3) == c.offdiag(3)
        assert coeffs_to_json_dict(c2) == doc

    def test_unknown_kind_rejected(self):
        with pytest.raises(InputError):
            coeffs_from_json_dict({"kind": "mystery"})

    def test_anonymous_rule_not_serializable(self):
        c = CoefficientSequence.from_rule(lambda n: 0.0, lambda n: 1.0)
        with pytest.raises(InputError):
            coeffs_to_json_dict(c)
