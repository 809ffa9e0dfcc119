"""
atheris harness for the scoring-service request handler.

handle_line answers every line with exactly one JSON object; it must never
raise, whatever bytes arrive.

Usage:
  python3 fuzz/fuzz_protocol.py -runs=1000000
"""

import json
import sys

import atheris

with atheris.instrument_imports():
    from src.service import ScoringDefaults, handle_line

DEFAULTS = ScoringDefaults()


def TestOneInput(input_bytes: bytes) -> None:
    response = handle_line(input_bytes, DEFAULTS)
    decoded = json.loads(response)
    if not isinstance(decoded, dict) or "version" not in decoded:
        raise AssertionError(f"Malformed response {response!r}")
    if "\n" in response:
        raise AssertionError("Response spans more than one line")


def main() -> None:
    atheris.Setup(sys.argv, TestOneInput)
    atheris.Fuzz()


if __name__ == "__main__":
    main()
