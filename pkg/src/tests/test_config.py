import unittest
import os
from unittest.mock import patch

from latnoether import Caps, get_caps, set_caps
from latnoether.errors import ConfigError


class TestCaps(unittest.TestCase):
    """Test cases for compute caps and their environment overrides."""

    def setUp(self):
        """Start every test from an unset process-wide configuration."""
        set_caps(None)

    def tearDown(self):
        """Drop any caps installed by the test."""
        set_caps(None)

    def test_defaults(self):
        """An empty environment gives the documented defaults."""
        caps = Caps.from_env({})
        self.assertEqual(caps.group_order, 64)
        self.assertEqual(caps.rank, 48)
        self.assertEqual(caps.height, 3)
        self.assertEqual(caps.jobs, 1)
        self.assertEqual(caps.log_level, "WARNING")

    def test_env_overrides(self):
        """Environment variables override the defaults."""
        with patch.dict(os.environ, {
            "LATNOETHER_CAP_GROUP_ORDER": "200",
            "LATNOETHER_SEARCH_HEIGHT": "5",
            "LATNOETHER_JOBS": "4",
            "LATNOETHER_LOG_LEVEL": "debug",
        }):
            caps = Caps.from_env()
        self.assertEqual(caps.group_order, 200)
        self.assertEqual(caps.height, 5)
        self.assertEqual(caps.jobs, 4)
        self.assertEqual(caps.log_level, "DEBUG")

    def test_blank_value_uses_default(self):
        """A blank variable counts as unset."""
        caps = Caps.from_env({"LATNOETHER_CAP_RANK": "  "})
        self.assertEqual(caps.rank, 48)

    def test_invalid_values(self):
        """Non-integers, non-positive caps and unknown log levels are rejected."""
        with self.assertRaises(ConfigError):
            Caps.from_env({"LATNOETHER_CAP_GROUP_ORDER": "lots"})
        with self.assertRaises(ConfigError):
            Caps.from_env({"LATNOETHER_SEARCH_BUDGET": "0"})
        with self.assertRaises(ConfigError):
            Caps.from_env({"LATNOETHER_LOG_LEVEL": "CHATTY"})

    def test_replace_ignores_none(self):
        """replace overrides given fields and skips None."""
        caps = Caps().replace(height=7, budget=None)
        self.assertEqual(caps.height, 7)
        self.assertEqual(caps.budget, 200000)

    def test_get_and_set(self):
        """get_caps reads the environment lazily and set_caps installs a value."""
        with patch.dict(os.environ, {"LATNOETHER_CAP_RANK": "12"}):
            self.assertEqual(get_caps().rank, 12)
        set_caps(Caps(rank=9))
        self.assertEqual(get_caps().rank, 9)


if __name__ == "__main__":
    unittest.main()
