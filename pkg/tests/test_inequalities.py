"""Inequality bank: evaluation, balancedness, DFZ family, point checks."""

import json

import pytest

from entropy_toolkit import (
    CrossSectionHalfspace,
    LinearInequality,
    check_point,
    cross_section_point,
    default_halfspace_bank,
    dfz_halfspace,
    dfz_linear,
    entropy_function,
    evaluate,
    exl_closed_form,
    EXL_REFERENCE,
    halfspace_from_json,
    halfspace_to_json,
    inequality_from_json,
    inequality_to_json,
    ingleton_base,
    load_inequality_file,
    matroid_rank,
    stv_functional,
    symmetrized_zy,
    symmetrized_zy_halfspace,
    tetra_vertices,
)

from helpers import rand_distribution, rand_modular


class TestEvaluate:
    def test_zero_function(self, frame):
        zero = matroid_rank(frame.ground, 0)
        assert evaluate(symmetrized_zy(frame), zero) == 0.0

    def test_symmetrized_zy_on_base(self, frame):
        # the ten conditional-information terms vanish on the base function,
        # leaving twice its stv value
        assert evaluate(symmetrized_zy(frame), ingleton_base(frame)) == -2.0

    def test_symmetrized_zy_on_alpha_vertex(self, frame):
        alpha = tetra_vertices(frame)[0]
        assert evaluate(symmetrized_zy(frame), alpha) == pytest.approx(-0.5, abs=1e-15)

    def test_symmetrized_zy_on_modular(self, frame, rng):
        for _ in range(10):
            h = rand_modular(rng, frame.ground)
            assert evaluate(symmetrized_zy(frame), h) == pytest.approx(0.0, abs=1e-12)

    def test_key_mismatch(self, frame):
        bad = LinearInequality("bad", {frozenset("z"): 1.0})
        with pytest.raises(ValueError):
            evaluate(bad, matroid_rank(frame.ground, 1))

    def test_needs_nonzero_coefficient(self):
        with pytest.raises(ValueError):
            LinearInequality("empty", {})
        with pytest.raises(ValueError):
            LinearInequality("cancels", {frozenset("i"): 1.0, ("i",): -1.0})


class TestBalanced:
    def test_stv_is_balanced(self, frame, rng):
        ineq = stv_functional(frame)
        assert len(ineq.coefficients) == 10
        assert is_balanced_and_kills_modular(ineq, frame, rng)

    def test_monotonicity_functional_not_balanced(self, frame):
        mono = LinearInequality("mono-i", {frozenset("ijkl"): 1.0,
                                           frozenset("jkl"): -1.0})
        from entropy_toolkit import is_balanced
        assert not is_balanced(mono)

    def test_symmetrized_zy_is_balanced(self, frame, rng):
        assert is_balanced_and_kills_modular(symmetrized_zy(frame), frame, rng)

    def test_dfz_linear_is_balanced(self, frame, rng):
        for s in (1, 2, 5):
            assert is_balanced_and_kills_modular(dfz_linear(s, frame), frame, rng)


def is_balanced_and_kills_modular(ineq, frame, rng) -> bool:
    from entropy_toolkit import is_balanced
    if not is_balanced(ineq):
        return False
    h = rand_modular(rng, frame.ground)
    return abs(evaluate(ineq, h)) <= 1e-12


class TestDfzFamily:
    def test_s1_equals_symmetrized_zy_halfspace(self):
        assert dfz_halfspace(1).abcd == symmetrized_zy_halfspace().abcd
        assert dfz_halfspace(1).abcd == (-0.5, 1.0, 0.0, 1.0)

    def test_s2_s3_coefficients(self):
        assert dfz_halfspace(2).abcd == (-1.5, 1.0, 0.0, 5.0)
        assert dfz_halfspace(3).abcd == (-3.5, 1.0, 0.0, 17.0)

    def test_range_guard(self):
        with pytest.raises(ValueError):
            dfz_halfspace(0)
        with pytest.raises(ValueError):
            dfz_halfspace(21)
        with pytest.raises(ValueError):
            dfz_linear(0, None)

    def test_linear_s1_is_zhang_yeung_shape(self, frame):
        # stv + delta(kl|i) + delta(ik|l) + delta(il|k) with the j-bracket
        # coefficient vanishing at s = 1
        zy = dfz_linear(1, frame)
        f = ingleton_base(frame)
        assert evaluate(zy, f) == -1.0

    def test_linear_valid_on_entropy_functions(self, frame, rng):
        for _ in range(50):
            f = entropy_function(rand_distribution(rng, frame.ground, (2, 2, 2, 2)))
            for s in (1, 2, 3):
                assert evaluate(dfz_linear(s, frame), f) >= -1e-7

    def test_symmetrized_matches_summed_pair(self, frame, rng):
        # the halfspace form is the sum of the instance and its i<->j swap,
        # rewritten in section weights; check the identity on raw functions
        from entropy_toolkit import section_weights
        for s in (1, 2, 4):
            hs = dfz_halfspace(s)
            swapped = dfz_linear(s, frame.swapped_ij())
            straight = dfz_linear(s, frame)
            for _ in range(20):
                f = entropy_function(
                    rand_distribution(rng, frame.ground, (2, 2, 2, 2)))
                lhs = evaluate(straight, f) + evaluate(swapped, f)
                rhs = hs.margin(section_weights(f, frame))
                assert lhs == pytest.approx(rhs, abs=1e-10)


class TestCheckPoint:
    def test_beta_vertex_satisfies_all(self):
        report = check_point((0.0, 1.0, 0.0, 0.0), default_halfspace_bank(10))
        assert report.all_satisfied

    def test_alpha_vertex_violates_zy(self):
        report = check_point((1.0, 0.0, 0.0, 0.0), [symmetrized_zy_halfspace()])
        assert not report.all_satisfied
        name, margin = report.violated[0]
        assert name == "symmetrized-zhang-yeung"
        assert margin == pytest.approx(-0.5, abs=1e-15)

    def test_reference_point_satisfies_zy(self, frame):
        point, _ = cross_section_point(exl_closed_form(EXL_REFERENCE), frame)
        report = check_point(point, [symmetrized_zy_halfspace()])
        assert report.all_satisfied

    def test_weight_sum_validated(self):
        with pytest.raises(ValueError):
            check_point((0.5, 0.5, 0.5, 0.5), [symmetrized_zy_halfspace()])


class TestPipelinePointsSatisfyBank:
    def test_randomized_distributions(self, frame, rng):
        bank = default_halfspace_bank(6)
        for sizes in [(2, 2, 2, 2), (3, 3, 2, 2)]:
            for _ in range(60):
                f = entropy_function(rand_distribution(rng, frame.ground, sizes))
                point, _ = cross_section_point(f, frame)
                report = check_point(point, bank, tol=1e-7)
                assert report.all_satisfied, report.violated


class TestWireFormats:
    def test_inequality_roundtrip(self, frame):
        ineq = symmetrized_zy(frame)
        doc = inequality_to_json(ineq)
        assert doc["name"] == "symmetrized-zhang-yeung"
        assert all(key == "".join(sorted(key)) for key in doc["coefficients"])
        back = inequality_from_json(json.loads(json.dumps(doc)))
        assert back.coefficients == ineq.coefficients

    def test_halfspace_roundtrip(self):
        hs = dfz_halfspace(4)
        back = halfspace_from_json(halfspace_to_json(hs))
        assert back == hs

    def test_mixed_file(self, frame, tmp_path):
        path = tmp_path / "bank.json"
        doc = [inequality_to_json(symmetrized_zy(frame)),
               halfspace_to_json(dfz_halfspace(2))]
        path.write_text(json.dumps(doc))
        items = load_inequality_file(path)
        assert isinstance(items[0], LinearInequality)
        assert isinstance(items[1], CrossSectionHalfspace)

    def test_single_object_file(self, tmp_path):
        path = tmp_path / "one.json"
        path.write_text(json.dumps(halfspace_to_json(dfz_halfspace(1))))
        items = load_inequality_file(path)
        assert len(items) == 1

    def test_malformed_entry(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps([{"name": "x"}]))
        with pytest.raises(ValueError):
            load_inequality_file(path)

    def test_all_zero_halfspace_rejected(self):
        with pytest.raises(ValueError):
            CrossSectionHalfspace("null", 0.0, 0.0, 0.0, 0.0)
