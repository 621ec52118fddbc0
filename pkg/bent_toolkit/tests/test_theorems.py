import json
import unittest
from unittest import mock

import numpy as np

from bent_toolkit.errors import DimensionError, RefusalError
from bent_toolkit.tools.boolean_function import BooleanFunction, direct_sum, parse_truth_table
from bent_toolkit.tools.constructions import BentTriple, affine_shift_triple, inner_product_quadratic, rothaus
from bent_toolkit.tools.spectral_tool import is_bent
from bent_toolkit.tools.sweep import SweepMode, VerificationReport, partition_ranges
from bent_toolkit.tools.theorems import (
    check_majority_identity_instance,
    check_rothaus_necessity_instance,
    first_level_sum,
    hodzic_level_sum,
    majority_spectral_route,
    quarter_spectrum_mismatches,
    rothaus_composition_check,
    second_level_obstruction,
    verify_first_level,
    verify_hodzic_level,
    verify_majority_identity,
    verify_rothaus_necessity,
    verify_second_level,
)

Q_TABLE = "0001010001110010"


class TestRothausNecessity(unittest.TestCase):
    """Unit tests for the necessity of the four bentness conditions."""

    def setUp(self):
        self.x1x2 = parse_truth_table("0001")
        self.affine = parse_truth_table("0110")

    def test_instances(self):
        """Test a bent and a non-bent instance; both sides agree in each."""
        self.assertTrue(check_rothaus_necessity_instance(self.x1x2, self.x1x2, self.x1x2))
        self.assertTrue(check_rothaus_necessity_instance(self.affine, self.x1x2, self.x1x2))

    def test_quarter_spectrum_holds_for_any_triple(self):
        """Test the quarter identity on random, non-bent triples."""
        rng = np.random.default_rng(8)
        for _ in range(10):
            t = BentTriple(*(BooleanFunction.random(4, rng) for _ in range(3)))
            self.assertEqual(quarter_spectrum_mismatches(t, rothaus(t)), [])

    def test_quarter_spectrum_reports_swaps(self):
        """Test that swapping B and C is caught in the (0,1) and (1,0) quarters."""
        t = affine_shift_triple(self.x1x2, [1, 0], [0, 1])
        swapped = BentTriple(t.a, t.c, t.b)
        problems = quarter_spectrum_mismatches(swapped, rothaus(t))
        self.assertTrue(any(p.startswith("quarter-spectrum (0,1)") for p in problems))
        self.assertTrue(any(p.startswith("quarter-spectrum (1,0)") for p in problems))

    def test_composition_route(self):
        """Test the composition formula against the direct transform."""
        rng = np.random.default_rng(13)
        for _ in range(5):
            a, b, c = (BooleanFunction.random(4, rng) for _ in range(3))
            self.assertTrue(rothaus_composition_check(a, b, c))

    def test_exhaustive_n2(self):
        """Test the full sweep over 4096 triples on two variables."""
        report = verify_rothaus_necessity(2, SweepMode.exhaustive())
        self.assertTrue(report.success, report.render_text())
        self.assertEqual(report.cases_checked, 4096)
        self.assertEqual(report.satisfying_count, 512)
        self.assertEqual(report.details["quarter_spectrum_checked"], 4096)
        self.assertEqual(report.details["quarter_spectrum_bent_instances"], 512)

    def test_exhaustive_parallel_matches_serial(self):
        """Test that a pooled sweep merges to the serial report."""
        serial = verify_rothaus_necessity(2, SweepMode.exhaustive(), jobs=1)
        pooled = verify_rothaus_necessity(2, SweepMode.exhaustive(), jobs=2)
        self.assertEqual(serial.cases_checked, pooled.cases_checked)
        self.assertEqual(serial.satisfying_count, pooled.satisfying_count)
        self.assertEqual(serial.details, pooled.details)

    def test_sampled_n4(self):
        """Test a seeded sample on four variables."""
        report = verify_rothaus_necessity(4, SweepMode.sampled(200, 42))
        self.assertTrue(report.success)
        self.assertEqual(report.cases_checked, 200)
        again = verify_rothaus_necessity(4, SweepMode.sampled(200, 42))
        self.assertEqual(report.satisfying_count, again.satisfying_count)

    def test_refusals(self):
        """Test that exhaustive sweeps beyond two variables are refused."""
        with self.assertRaises(RefusalError) as ctx:
            verify_rothaus_necessity(4, SweepMode.exhaustive())
        self.assertEqual(ctx.exception.cost, 1 << 48)
        with self.assertRaises(DimensionError):
            verify_rothaus_necessity(3, SweepMode.sampled(1, 1))


class TestRothausLevels(unittest.TestCase):
    """Unit tests for the sum and the second-level function of f, f', f''."""

    def setUp(self):
        self.x1x2 = parse_truth_table("0001")

    def test_first_level_diagonal(self):
        """Test that A = B = C gives A + x_{n+1}x_{n+2}."""
        total = first_level_sum(self.x1x2, self.x1x2, self.x1x2)
        self.assertEqual(total, direct_sum(self.x1x2, self.x1x2))

    def test_first_level_sweeps(self):
        """Test the identity on every triple over two variables and on 200 samples over four and six."""
        report = verify_first_level(2, SweepMode.exhaustive())
        self.assertTrue(report.success)
        self.assertEqual(report.cases_checked, 4096)
        for n in (4, 6):
            with self.subTest(n=n):
                report = verify_first_level(n, SweepMode.sampled(200, 3 + n))
                self.assertTrue(report.success, report.render_text())
                self.assertEqual(report.cases_checked, 200)

    def test_second_level_diagonal(self):
        """Test that A = B = C bent makes E bent."""
        result = second_level_obstruction(self.x1x2, self.x1x2, self.x1x2)
        self.assertTrue(result.decomposition_ok)
        self.assertTrue(result.is_bent)
        self.assertTrue(result.equals_condition)
        self.assertTrue(result.consistent)

    def test_second_level_affine_shift(self):
        """Test that nonzero shifts break D = A+B+C and bentness of E."""
        t = affine_shift_triple(inner_product_quadratic(4), 0b0001, 0b0010)
        result = second_level_obstruction(t.a, t.b, t.c)
        self.assertFalse(result.equals_condition)
        self.assertFalse(result.is_bent)
        self.assertTrue(result.to_dict()["consistent"])

    def test_second_level_exhaustive(self):
        """Test that exactly the eight bent diagonal triples give a bent E on four variables."""
        report = verify_second_level(2, SweepMode.exhaustive())
        self.assertTrue(report.success)
        self.assertEqual(report.satisfying_count, 8)
        self.assertEqual(report.details["equals_condition"], 16)


class TestMajorityIdentity(unittest.TestCase):
    """Unit tests for AB + AC + BC = A + B + C."""

    def test_instances(self):
        """Test the diagonal and an off-diagonal triple."""
        a = BooleanFunction.random(3, np.random.default_rng(2))
        self.assertTrue(check_majority_identity_instance(a, a, a))
        zero, one = BooleanFunction.zero(1), BooleanFunction.one(1)
        self.assertTrue(check_majority_identity_instance(zero, zero, one))

    def test_spectral_route(self):
        """Test the pair-spectrum formula on random triples."""
        rng = np.random.default_rng(6)
        for _ in range(5):
            a, b, c = (BooleanFunction.random(5, rng) for _ in range(3))
            self.assertTrue(majority_spectral_route(a, b, c))

    def test_exhaustive_counts(self):
        """Test that only the diagonal satisfies the identity."""
        for n, cases, satisfying in [(1, 64, 4), (2, 4096, 16), (3, 1 << 24, 256)]:
            with self.subTest(n=n):
                report = verify_majority_identity(n, SweepMode.exhaustive(), jobs=1)
                self.assertTrue(report.success)
                self.assertEqual(report.cases_checked, cases)
                self.assertEqual(report.satisfying_count, satisfying)
                self.assertEqual(report.details["spectral_route_checked"], satisfying)

    def test_sampled(self):
        """Test a sampled sweep, half of it on the diagonal."""
        report = verify_majority_identity(4, SweepMode.sampled(20, 9))
        self.assertTrue(report.success)
        self.assertEqual(report.satisfying_count, 10)
        self.assertEqual(report.details["spectral_route_checked"], 20)

    def test_refusal(self):
        """Test that exhaustive n = 4 is refused with its cost."""
        with self.assertRaises(RefusalError) as ctx:
            verify_majority_identity(4, SweepMode.exhaustive())
        self.assertEqual(ctx.exception.cost, 1 << 48)


class TestHodzicLevel(unittest.TestCase):
    """Unit tests for g + g' + g''."""

    def test_diagonal(self):
        """Test A = B = C = x1x2: the sum is x1x2 + Q and bent on six variables."""
        x1x2 = parse_truth_table("0001")
        result = hodzic_level_sum(x1x2, x1x2, x1x2)
        self.assertEqual(result.q.to_binary(), Q_TABLE)
        self.assertEqual(result.sum, direct_sum(x1x2, result.q))
        self.assertTrue(result.is_bent_given_quadruple)
        self.assertTrue(is_bent(result.q))

    def test_q_is_shared(self):
        """Test that 60 random affine-shift triples on four variables all extract the same Q."""
        report = verify_hodzic_level(4, SweepMode.sampled(60, 77))
        self.assertTrue(report.success, report.render_text())
        self.assertEqual(report.details["q"], Q_TABLE)
        self.assertEqual(report.satisfying_count, 60)

    def test_exhaustive_n2(self):
        """Test every triple on two variables; half have a bent A+B+C."""
        report = verify_hodzic_level(2, SweepMode.exhaustive(), jobs=1)
        self.assertTrue(report.success)
        self.assertEqual(report.satisfying_count, 2048)


class TestVerificationReport(unittest.TestCase):
    """Unit tests for report merging and rendering."""

    def test_counterexample_cap(self):
        """Test that stored counterexamples stop at sixteen but the total keeps counting."""
        report = VerificationReport("demo", 2, SweepMode.exhaustive())
        for i in range(20):
            report.add_counterexample([str(i)], "bad")
        self.assertEqual(len(report.counterexamples), 16)
        self.assertEqual(report.counterexample_total, 20)
        self.assertFalse(report.success)
        self.assertIn("verdict: FAILED (20 counterexamples)", report.render_text())

    def test_merge_and_json(self):
        """Test that merged counts add and the JSON document has stable keys."""
        left = VerificationReport("demo", 2, SweepMode.exhaustive())
        right = VerificationReport("demo", 2, SweepMode.exhaustive())
        left.cases_checked, right.cases_checked = 3, 4
        left.count("hits", 1)
        right.count("hits", 2)
        left.merge(right)
        doc = json.loads(left.to_json())
        self.assertEqual(doc["cases_checked"], 7)
        self.assertEqual(doc["details"], {"hits": 3})
        for key in ("claim", "mode", "n", "cases_checked", "satisfying_count", "counterexamples", "elapsed_ms"):
            self.assertIn(key, doc)
        self.assertTrue(doc["success"])

    def test_partition_ranges(self):
        """Test that partitions are disjoint and cover the range."""
        ranges = partition_ranges(10, 3)
        self.assertEqual(ranges, [(0, 4), (4, 8), (8, 10)])
        self.assertEqual(partition_ranges(2, 8), [(0, 1), (1, 2)])

    def test_progress_log_counts_cases(self):
        """Test that partition progress reports the running case count."""
        with mock.patch("bent_toolkit.tools.sweep.PROGRESS_INTERVAL_SECONDS", 0):
            with self.assertLogs("bent_toolkit.tools.sweep", level="INFO") as logs:
                verify_majority_identity(1, SweepMode.exhaustive(), jobs=1)
        self.assertIn("partition 1/4, 16 cases so far", logs.output[0])
        self.assertIn("4 partitions done, 64 cases", logs.output[-1])

    def test_sampled_mode_needs_seed(self):
        """Test that sampling without a seed is rejected."""
        with self.assertRaises(DimensionError):
            SweepMode("sampled", 5, None)


if __name__ == '__main__':
    unittest.main()
