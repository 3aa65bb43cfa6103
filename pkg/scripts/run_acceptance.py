"""Run the acceptance suite and print one line per criterion."""

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

if __name__ == "__main__":
    args = [os.path.join(ROOT, "tests", "test_acceptance.py"), "-q"] + sys.argv[1:]
    sys.exit(pytest.main(args))
