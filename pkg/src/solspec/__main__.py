"""Module entry point for python -m execution.

Delegates to the CLI main function so module execution and the console
script behave the same.
"""

from __future__ import annotations

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())
