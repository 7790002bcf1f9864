"""Test runner for the ciltlab test suite."""

import pytest
import sys
from pathlib import Path


def run_tests():
    """Run every test package under tests/."""
    test_dir = Path(__file__).parent
    return pytest.main([str(test_dir), "-v"])


if __name__ == "__main__":
    sys.exit(run_tests())
