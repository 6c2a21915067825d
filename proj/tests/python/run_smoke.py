"""Runs the python smoke tests; exits 77 when the bindings are not importable."""

import os
import sys


def main() -> int:
    try:
        import curvemom  # noqa: F401
    except ImportError as exc:
        print(f"curvemom bindings not importable, skipping: {exc}")
        return 77
    import pytest

    return pytest.main(["-q", os.path.dirname(os.path.abspath(__file__))])


if __name__ == "__main__":
    sys.exit(main())
