import os
import shutil
import tempfile
import unittest
from unittest import mock

from bent_toolkit.errors import FormatError
from bent_toolkit.tools.boolean_function import BooleanFunction, parse_truth_table
from bent_toolkit.tools.constructions import affine_shift_triple, inner_product_quadratic
from bent_toolkit.tools.file_system_tool import (
    read_file,
    read_triple,
    read_truth_table,
    write_file,
    write_triple,
    write_truth_table,
)


class TestFileSystemTool(unittest.TestCase):
    """Unit tests for the truth-table file helpers."""

    def setUp(self):
        """Point the tool at a scratch root with one table file in it."""
        self.root = tempfile.mkdtemp()
        self.env = mock.patch.dict(os.environ, {"BENT_TOOLKIT_ROOT": self.root})
        self.env.start()
        self.test_content = "0001000100011110\n"
        self.test_file_path = "tables/f.tt"
        self.full_test_path = os.path.join(self.root, self.test_file_path)
        os.makedirs(os.path.dirname(self.full_test_path), exist_ok=True)
        with open(self.full_test_path, 'w') as f:
            f.write(self.test_content)

    def tearDown(self):
        """Clean up test fixtures after each test method."""
        self.env.stop()
        shutil.rmtree(self.root, ignore_errors=True)

    def test_read_file_success(self):
        """Test reading a file relative to the configured root."""
        self.assertEqual(read_file(self.test_file_path), self.test_content)

    def test_read_file_not_found(self):
        """Test that a missing file raises FormatError naming the path."""
        with self.assertRaises(FormatError) as ctx:
            read_file("tables/nonexistent.tt")
        self.assertIn("File not found", str(ctx.exception))
        self.assertIn("nonexistent.tt", str(ctx.exception))

    def test_read_truth_table(self):
        """Test that a table file parses to x1x2 + x3x4."""
        f = read_truth_table(self.test_file_path)
        self.assertEqual(f.n, 4)
        self.assertEqual(f, parse_truth_table("0001000100011110"))

    def test_read_truth_table_ignores_whitespace(self):
        """Test that line breaks inside a table file are ignored."""
        write_file("tables/wrapped.tt", "00010001\n00011110\n")
        self.assertEqual(read_truth_table("tables/wrapped.tt").to_binary(), "0001000100011110")

    def test_read_truth_table_empty(self):
        """Test that an empty file is rejected."""
        write_file("tables/empty.tt", "  \n")
        with self.assertRaises(FormatError):
            read_truth_table("tables/empty.tt")

    def test_write_file_create_directory(self):
        """Test writing into a new subdirectory (should create the directory)."""
        result = write_file("new_subdir/out.txt", "content")
        self.assertIn("Successfully wrote to", result)
        with open(os.path.join(self.root, "new_subdir/out.txt")) as f:
            self.assertEqual(f.read(), "content")

    def test_write_truth_table_hex(self):
        """Test that a hex table written to disk reads back unchanged."""
        f = parse_truth_table("0001000100011110")
        write_truth_table("out/f.hex", f, 'hex')
        with open(os.path.join(self.root, "out/f.hex")) as fh:
            self.assertEqual(fh.read().strip(), f.to_hex())
        self.assertEqual(read_truth_table("out/f.hex"), f)

    def test_write_truth_table_hex_falls_back_for_small_n(self):
        """Test that hex output for n < 3 is written as binary."""
        write_truth_table("out/and.tt", BooleanFunction(2, [0, 0, 0, 1]), 'hex')
        with open(os.path.join(self.root, "out/and.tt")) as fh:
            self.assertEqual(fh.read().strip(), "0001")

    def test_triple_file_round_trip(self):
        """Test that a triple written in hex reads back as the same three functions."""
        t = affine_shift_triple(inner_product_quadratic(4), 0b0110, 0b1000)
        write_triple("out/t.txt", t, 'hex')
        self.assertEqual(read_triple("out/t.txt"), t)
        write_file("out/short.txt", "0001\n0001\n")
        with self.assertRaises(FormatError):
            read_triple("out/short.txt")


if __name__ == '__main__':
    unittest.main()
