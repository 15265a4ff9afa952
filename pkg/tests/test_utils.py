"""
Unit tests for utility functions and configuration.
"""

import json
import math
import os
import tempfile
import unittest
from fractions import Fraction
from unittest.mock import patch

import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from latgap.config import Settings, get_settings, load_settings, reset_settings, resolve
from latgap.instances import load_documents, parse_instance, read_instances
from latgap.types import InstanceKind
from latgap.utils import (
    CosetLimitExceeded,
    DimensionMismatch,
    InstanceFormatError,
    LatGapError,
    NotPrimitive,
    OracleLimitExceeded,
    ResolutionTooFine,
    ResourceLimitError,
    ValidationError,
    dot,
    float_down,
    float_up,
    format_rational,
    lcm_of_denominators,
    parse_int_list_arg,
    parse_int_vector,
    parse_rational,
)


class TestRationalParsing(unittest.TestCase):
    """Test exact rational input and output."""

    def test_parse_values(self):
        """Test ints, strings and Fractions."""
        self.assertEqual(parse_rational(3), Fraction(3))
        self.assertEqual(parse_rational("4/7"), Fraction(4, 7))
        self.assertEqual(parse_rational(" -2/6 "), Fraction(-1, 3))
        self.assertEqual(parse_rational(Fraction(5, 2)), Fraction(5, 2))

    def test_reject_inexact(self):
        """Test that floats, decimals and booleans are rejected."""
        for value in (0.5, "0.5", "1e3", True, "", "1/0", "abc", None):
            with self.assertRaises(InstanceFormatError):
                parse_rational(value)

    def test_format(self):
        """Test p/q formatting."""
        self.assertEqual(format_rational(Fraction(4, 7)), "4/7")
        self.assertEqual(format_rational(Fraction(6, 3)), "2")
        self.assertEqual(format_rational(Fraction(-1, 2)), "-1/2")

    def test_int_vectors(self):
        """Test integer vector parsing."""
        self.assertEqual(parse_int_vector([1, -2, 3]), [1, -2, 3])
        with self.assertRaises(InstanceFormatError):
            parse_int_vector([1, 2.0])
        with self.assertRaises(InstanceFormatError):
            parse_int_vector([True, 1])
        with self.assertRaises(InstanceFormatError):
            parse_int_vector("1,2")
        self.assertEqual(parse_int_list_arg("3,5,7"), [3, 5, 7])
        with self.assertRaises(InstanceFormatError):
            parse_int_list_arg("3,x")

    def test_denominators_and_dot(self):
        """Test the common denominator and the exact dot product."""
        self.assertEqual(lcm_of_denominators([Fraction(1, 4), Fraction(5, 6), Fraction(2)]), 12)
        self.assertEqual(dot([Fraction(1, 2), 3], [4, 5]), 17)
        with self.assertRaises(DimensionMismatch):
            dot([1, 2], [1])


class TestDirectedRounding(unittest.TestCase):
    """Test float conversion toward -inf and +inf."""

    def test_exact_values(self):
        """Test that representable values are kept."""
        self.assertEqual(float_down(Fraction(1, 2)), 0.5)
        self.assertEqual(float_up(Fraction(1, 2)), 0.5)

    def test_inexact_values(self):
        """Test one third."""
        third = Fraction(1, 3)
        self.assertLessEqual(Fraction(float_down(third)), third)
        self.assertGreaterEqual(Fraction(float_up(third)), third)
        self.assertEqual(float_up(third), math.nextafter(float_down(third), math.inf))


class TestExceptions(unittest.TestCase):
    """Test the exception hierarchy."""

    def test_hierarchy(self):
        """Test the two exception families."""
        for cls in (NotPrimitive, DimensionMismatch, InstanceFormatError):
            self.assertTrue(issubclass(cls, ValidationError))
        for cls in (CosetLimitExceeded, ResolutionTooFine, OracleLimitExceeded):
            self.assertTrue(issubclass(cls, ResourceLimitError))
        self.assertTrue(issubclass(ValidationError, LatGapError))
        self.assertTrue(issubclass(ResourceLimitError, LatGapError))
        self.assertFalse(issubclass(ResourceLimitError, ValidationError))


class TestSettings(unittest.TestCase):
    """Test environment-driven settings."""

    def test_defaults(self):
        """Test settings without any LATGAP_ variables."""
        with patch.dict(os.environ, {}, clear=False):
            for name in [n for n in os.environ if n.startswith("LATGAP_")]:
                del os.environ[name]
            settings = load_settings(dotenv_path=os.devnull)
        self.assertEqual(settings, Settings())
        self.assertEqual(settings.max_cosets, 10_000_000)
        self.assertEqual(settings.oracle_limit, 10_000)

    def test_environment(self):
        """Test overrides from the environment."""
        env = {"LATGAP_MAX_COSETS": "500", "LATGAP_LOG_LEVEL": "debug", "LATGAP_JOBS": "4"}
        with patch.dict(os.environ, env):
            settings = load_settings(dotenv_path=os.devnull)
            reset_settings()
            self.assertEqual(resolve(None, "max_cosets"), 500)
            self.assertEqual(resolve(7, "max_cosets"), 7)
        self.assertEqual(settings.max_cosets, 500)
        self.assertEqual(settings.log_level, "DEBUG")
        self.assertEqual(settings.jobs, 4)

    def test_settings_cached(self):
        """Test that library lookups read the environment once until reset."""
        with patch("latgap.config.load_settings", return_value=Settings(max_cosets=77)) as loader:
            self.assertEqual(resolve(None, "max_cosets"), 77)
            self.assertEqual(resolve(None, "oracle_limit"), Settings().oracle_limit)
            self.assertIs(get_settings(), get_settings())
            self.assertEqual(loader.call_count, 1)
            reset_settings()
            resolve(None, "max_cosets")
            self.assertEqual(loader.call_count, 2)

    def test_invalid_values(self):
        """Test malformed and non-positive settings."""
        for env in ({"LATGAP_MAX_COSETS": "ten"}, {"LATGAP_ORACLE_LIMIT": "0"}, {"LATGAP_LOG_LEVEL": "LOUD"}):
            with patch.dict(os.environ, env):
                with self.assertRaises(ValidationError):
                    load_settings(dotenv_path=os.devnull)

    def test_dotenv_file(self):
        """Test that a .env file supplies unset variables."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, ".env")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("LATGAP_BOUND_DIGITS=25\n")
            with patch.dict(os.environ, {}):
                settings = load_settings(dotenv_path=path)
        self.assertEqual(settings.bound_digits, 25)


class TestInstanceDocuments(unittest.TestCase):
    """Test JSON instance parsing."""

    def test_single_and_batch(self):
        """Test that arrays are recognised as batches."""
        docs, batch = load_documents('{"kind": "frobenius", "a": [3, 5]}')
        self.assertFalse(batch)
        self.assertEqual(len(docs), 1)
        docs, batch = load_documents('[{"kind": "frobenius", "a": [3, 5]}]')
        self.assertTrue(batch)

    def test_floats_rejected(self):
        """Test that JSON floats never reach the parser."""
        with self.assertRaises(InstanceFormatError):
            load_documents('{"kind": "frobenius", "a": [3.0, 5]}')

    def test_malformed(self):
        """Test malformed JSON and non-object entries."""
        with self.assertRaises(InstanceFormatError):
            load_documents("{")
        with self.assertRaises(InstanceFormatError):
            load_documents("[1, 2]")

    def test_parse_kinds(self):
        """Test parsing of each instance kind."""
        group = parse_instance({"kind": "group", "basis": [[1, 0], [0, 3]], "l": ["1/2", 1], "r": [0, 1]})
        self.assertIs(group.kind, InstanceKind.GROUP)
        self.assertEqual(group.group.cost.l, (Fraction(1, 2), Fraction(1)))
        self.assertEqual(group.residue, (0, 1))
        frob = parse_instance({"kind": "frobenius", "a": [3, 5, 7]})
        self.assertEqual(frob.a, (3, 5, 7))
        ip = parse_instance({"kind": "ip", "A": [[3, 5, 7]], "b": [10], "c": ["1", 1, "1/2"]})
        self.assertEqual(ip.ip.c, (Fraction(1), Fraction(1), Fraction(1, 2)))

    def test_field_checks(self):
        """Test unknown kinds, missing and unexpected fields."""
        with self.assertRaises(InstanceFormatError):
            parse_instance({"kind": "lattice", "a": [3, 5]})
        with self.assertRaises(InstanceFormatError):
            parse_instance({"kind": "group", "basis": [[1]]})
        with self.assertRaises(InstanceFormatError):
            parse_instance({"kind": "frobenius", "a": [3, 5], "b": [1]})

    def test_read_file(self):
        """Test reading instances from disk."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "in.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump([{"kind": "frobenius", "a": [3, 5]}] * 2, fh)
            docs, batch = read_instances(path)
        self.assertTrue(batch)
        self.assertEqual(len(docs), 2)


if __name__ == '__main__':
    unittest.main()
