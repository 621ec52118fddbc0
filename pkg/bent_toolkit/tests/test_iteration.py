import unittest

from bent_toolkit.errors import CapacityError, DimensionError, PreconditionError
from bent_toolkit.tools.boolean_function import BooleanFunction, parse_truth_table
from bent_toolkit.tools.constructions import (
    BentTriple,
    affine_shift_triple,
    inner_product_quadratic,
    random_affine_shift_triple,
    seeded_generator,
)
from bent_toolkit.tools.iteration import IterationState, next_level, run_iteration, seed_state
from bent_toolkit.tools.spectral_tool import is_bent


class TestIteration(unittest.TestCase):
    """Unit tests for the level-by-level Hodzic iteration."""

    def setUp(self):
        """A diagonal seed on two variables and an affine-shift seed on four."""
        x1x2 = parse_truth_table("0001")
        self.diagonal = BentTriple(x1x2, x1x2, x1x2)
        self.shifted = affine_shift_triple(inner_product_quadratic(4), 0b0101, 0b0011)

    def test_first_level_from_diagonal_seed(self):
        """Test that level 1 from the x1x2 seed is a bent triple on six variables."""
        state = next_level(seed_state(self.diagonal))
        self.assertEqual(state.level, 1)
        self.assertEqual(state.n, 6)
        self.assertTrue(state.triple.satisfies_quadruple())
        self.assertEqual(state.verified_through, 1)
        self.assertEqual(state.provenance, (("g", "gp", "gpp"),))

    def test_three_levels(self):
        """Test levels on 8, 12 and 16 variables from a four-variable seed."""
        states = run_iteration(self.shifted, 3)
        self.assertEqual([s.n for s in states], [8, 12, 16])
        for s in states:
            with self.subTest(level=s.level):
                self.assertTrue(all(s.triple.flags().values()))
                self.assertTrue(is_bent(s.triple.triple_sum))

    def test_four_levels_reach_twenty_variables(self):
        """Test a k = 4 run from four variables; the last triple sum is bent by the fast transform."""
        states = run_iteration(self.shifted, 4)
        self.assertEqual([s.n for s in states], [8, 12, 16, 20])
        self.assertEqual(states[-1].verified_through, 4)
        self.assertTrue(is_bent(states[-1].triple.triple_sum))

    def test_many_seeds(self):
        """Test 50 seeded affine-shift seeds on two and four variables through two and one levels."""
        rng = seeded_generator(404)
        for case in range(50):
            n = 2 if case % 2 else 4
            seed = random_affine_shift_triple(n, rng)
            with self.subTest(case=case, n=n):
                states = run_iteration(seed, 2 if n == 2 else 1)
                self.assertEqual(states[-1].n, n + 4 * len(states))
                self.assertTrue(states[-1].triple.satisfies_quadruple())

    def test_unverified_run(self):
        """Test that verify=False builds the same tables without bentness flags in the output."""
        checked = run_iteration(self.diagonal, 2)
        trusted = run_iteration(self.diagonal, 2, verify=False)
        self.assertEqual(checked[-1].triple, trusted[-1].triple)
        self.assertEqual(trusted[-1].verified_through, 0)
        self.assertNotIn("bent", trusted[-1].to_dict())
        self.assertIn("bent", checked[-1].to_dict())

    def test_to_dict(self):
        """Test digests, provenance and optional tables."""
        state = run_iteration(self.diagonal, 1)[0]
        entry = state.to_dict(include_tables=True, fmt='binary')
        self.assertEqual(entry["variables"], 6)
        self.assertEqual(entry["provenance"], ["g/gp/gpp"])
        self.assertEqual(entry["digests"], [state.triple.a.digest(), state.triple.b.digest(), state.triple.c.digest()])
        self.assertEqual(len(entry["tables"][0]), 64)

    def test_seed_rejected(self):
        """Test that a seed failing a condition is rejected by name."""
        bad = BentTriple(parse_truth_table("0110"), parse_truth_table("0001"), parse_truth_table("0001"))
        with self.assertRaises(PreconditionError) as ctx:
            run_iteration(bad, 1)
        self.assertIn("A not bent", str(ctx.exception))

    def test_hand_built_seed_is_checked(self):
        """Test that a level-0 state around a non-bent triple is refused with either verify setting."""
        bad = BentTriple(parse_truth_table("0110"), parse_truth_table("0001"), parse_truth_table("0001"))
        with self.assertRaises(PreconditionError):
            IterationState(0, bad, (), 0, 2)
        unchecked = IterationState(0, bad, (), -1, 2)
        for verify in (True, False):
            with self.subTest(verify=verify):
                with self.assertRaises(PreconditionError) as ctx:
                    next_level(unchecked, verify=verify)
                self.assertIn("A not bent", str(ctx.exception))

    def test_unverified_level_rechecked_on_verify(self):
        """Test that a level built without verification is checked before a verified step."""
        trusted = run_iteration(self.diagonal, 1, verify=False)[0]
        self.assertEqual(trusted.verified_through, 0)
        state = next_level(trusted)
        self.assertEqual(state.verified_through, 2)
        self.assertTrue(all(state.triple.flags().values()))

    def test_capacity(self):
        """Test that levels past 24 variables are refused up front."""
        with self.assertRaises(CapacityError):
            run_iteration(self.shifted, 6)
        big = BooleanFunction.zero(22)
        state = IterationState(0, BentTriple(big, big, big), (), -1, 22)
        with self.assertRaises(CapacityError):
            next_level(state)

    def test_bad_k(self):
        """Test that k must be positive."""
        with self.assertRaises(DimensionError):
            run_iteration(self.diagonal, 0)


if __name__ == '__main__':
    unittest.main()
