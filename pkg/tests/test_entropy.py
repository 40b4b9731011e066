"""Entropy functions, the four-atom family and the forty-configuration family."""

import math

import numpy as np
import pytest

from entropy_toolkit import (
    EXL_COLUMNS,
    EXL_REFERENCE,
    ExLParams,
    FourAtomParams,
    GroundSet,
    JointDistribution,
    check_axioms,
    distribution_from_csv,
    distribution_from_json,
    distribution_to_csv,
    distribution_to_json,
    entropy_function,
    exl_closed_form,
    exl_distribution,
    four_atom_distribution,
    four_atom_score,
    kappa,
    load_exl_table,
    modular_from,
)
from entropy_toolkit.core import TOL_ENTROPIC

from helpers import rand_distribution

LN2 = math.log(2.0)


class TestKappa:
    def test_endpoints(self):
        assert kappa(0.0) == 0.0
        assert kappa(1.0) == 0.0

    def test_half(self):
        assert kappa(0.5) == pytest.approx(LN2 / 2, abs=1e-15)

    def test_tiny_values_are_zero(self):
        assert kappa(1e-16) == 0.0

    def test_domain(self):
        with pytest.raises(ValueError):
            kappa(-0.1)
        with pytest.raises(ValueError):
            kappa(1.1)


class TestJointDistribution:
    def test_validation(self, ground):
        with pytest.raises(ValueError):
            JointDistribution(ground, (2, 2, 2, 2), {(0, 0, 0, 0): 0.5})
        with pytest.raises(ValueError):
            JointDistribution(ground, (2, 2, 2, 2), {(0, 0, 0, 2): 1.0})
        with pytest.raises(ValueError):
            JointDistribution(ground, (2, 2, 2, 2), {(0, 0, 0, 0): 1.5,
                                                     (1, 1, 1, 1): -0.5})

    def test_dense_roundtrip(self, ground, rng):
        d = rand_distribution(rng, ground, (2, 3, 2, 2))
        back = JointDistribution.from_dense(ground, d.alphabet_sizes, d.as_dense())
        assert back.atoms == d.atoms


class TestEntropyFunction:
    def test_single_fair_bit(self):
        g = GroundSet(["x"])
        d = JointDistribution(g, (2,), {(0,): 0.5, (1,): 0.5})
        f = entropy_function(d)
        assert f("x") == pytest.approx(LN2, abs=1e-15)

    def test_independent_bits_are_modular(self, ground):
        atoms = {cfg: 1 / 16 for cfg in
                 ((a, b, c, d) for a in range(2) for b in range(2)
                  for c in range(2) for d in range(2))}
        f = entropy_function(JointDistribution(ground, (2, 2, 2, 2), atoms))
        expected = modular_from(ground, [LN2] * 4)
        assert f.allclose(expected, tol=1e-12)

    def test_entropy_is_polymatroid(self, ground, rng):
        for sizes in [(2, 2, 2, 2), (3, 2, 4, 2)]:
            for _ in range(10):
                f = entropy_function(rand_distribution(rng, ground, sizes))
                assert check_axioms(f, tol=TOL_ENTROPIC).is_polymatroid


class TestFourAtomFamily:
    def test_param_validation(self):
        with pytest.raises(ValueError):
            FourAtomParams(0.6)
        with pytest.raises(ValueError):
            four_atom_distribution(-0.01)

    def test_extreme_p_half(self, ground):
        d = four_atom_distribution(0.5)
        live = {cfg for cfg, p in d.atoms.items() if p > 0}
        assert live == {(0, 0, 0, 0), (1, 1, 1, 1)}

    def test_independent_at_quarter(self, ground):
        f = entropy_function(four_atom_distribution(0.25))
        assert f("ij") == pytest.approx(f("i") + f("j"), abs=1e-12)

    def test_anti_correlated_at_zero(self):
        d = four_atom_distribution(0.0)
        live = {cfg for cfg, p in d.atoms.items() if p > 0}
        assert live == {(0, 1, 0, 1), (1, 0, 0, 1)}

    def test_min_max_are_deterministic(self, ground):
        # the last two variables add no entropy on top of the first two
        for p in (0.1, 0.3, 0.45):
            f = entropy_function(four_atom_distribution(p))
            assert f("ij") == pytest.approx(f.rank, abs=1e-13)
            assert f("ik") <= f.rank + 1e-13

    def test_score_at_zero_is_one(self):
        assert four_atom_score(0.0) == pytest.approx(1.0, abs=1e-13)

    def test_score_at_quarter_formula(self):
        expected = ((1.5 * LN2 - 2 * kappa(0.25) - 2 * kappa(0.75))
                    / (4 * kappa(0.25)))
        assert four_atom_score(0.25) == pytest.approx(expected, abs=1e-15)

    def test_known_minimum(self):
        assert four_atom_score(0.350457) == pytest.approx(-0.089373, abs=1e-5)

    def test_unimodal_on_grid(self):
        grid = np.linspace(0.0, 0.5, 10_001)
        vals = np.array([four_atom_score(p) for p in grid])
        diffs = np.sign(np.diff(vals))
        # strictly convex: decreasing then increasing, one sign change
        changes = np.count_nonzero(np.diff(diffs[diffs != 0]) != 0)
        assert changes == 1
        assert vals.argmin() not in (0, len(vals) - 1)


class TestExlFamily:
    def test_param_validation(self):
        with pytest.raises(ValueError):
            ExLParams(0.1, 0.1, 0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            ExLParams(0.13, -0.005, 0.0, 0.0, 0.0)
        assert sum(EXL_REFERENCE.as_tuple()) == pytest.approx(0.125, abs=1e-12)

    def test_forty_distinct_configurations(self):
        d = exl_distribution(EXL_REFERENCE)
        assert len(d.atoms) == 40

    def test_each_variable_takes_each_value_twice_per_column(self, ground):
        for _, cfgs in EXL_COLUMNS:
            for pos in range(4):
                counts = {}
                for cfg in cfgs:
                    counts[cfg[pos]] = counts.get(cfg[pos], 0) + 1
                assert counts == {"0": 2, "1": 2, "2": 2, "3": 2}

    def test_single_column_gives_uniform_support(self, ground):
        params = ExLParams(0.125, 0.0, 0.0, 0.0, 0.0)
        f = entropy_function(exl_distribution(params))
        assert f("i") == pytest.approx(2 * LN2, abs=1e-12)
        assert f.rank == pytest.approx(math.log(8), abs=1e-12)
        assert exl_closed_form(params).rank == pytest.approx(8 * kappa(0.125), abs=1e-15)

    def test_closed_form_matches_table_at_reference(self):
        f = exl_closed_form(EXL_REFERENCE)
        h = entropy_function(exl_distribution(EXL_REFERENCE))
        assert np.max(np.abs(f.values - h.values)) < 1e-12

    def test_closed_form_matches_table_randomized(self, rng):
        for _ in range(25):
            w = rng.dirichlet(np.ones(5)) / 8.0
            params = ExLParams(*w)
            f = exl_closed_form(params)
            h = entropy_function(exl_distribution(params))
            assert np.max(np.abs(f.values - h.values)) < 1e-12

    def test_fixed_pairs(self):
        f = exl_closed_form(EXL_REFERENCE)
        assert f("il") == pytest.approx(3 * LN2, abs=1e-15)
        assert f("jk") == pytest.approx(3 * LN2, abs=1e-15)

    def test_packaged_table_matches_source(self):
        assert load_exl_table() == EXL_COLUMNS


class TestDistributionFormats:
    def test_csv_roundtrip(self, ground, rng):
        d = rand_distribution(rng, ground, (2, 2, 3, 2))
        text = distribution_to_csv(d)
        assert text.splitlines()[0] == "x_i,x_j,x_k,x_l,prob"
        back = distribution_from_csv(text, alphabet_sizes=d.alphabet_sizes)
        assert back.atoms == d.atoms

    def test_json_roundtrip(self, ground):
        d = four_atom_distribution(0.3)
        back = distribution_from_json(distribution_to_json(d))
        assert back.atoms == d.atoms
        assert back.alphabet_sizes == d.alphabet_sizes

    def test_csv_header_rejected(self):
        with pytest.raises(ValueError):
            distribution_from_csv("a,b,prob\n0,0,1.0\n")
