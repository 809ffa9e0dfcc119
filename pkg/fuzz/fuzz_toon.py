"""
atheris harness for the TOON parser.

parse_toon must never raise on arbitrary text, and every graph it accepts
as valid must reach a fixed point after one serialize/parse round trip
(coordinates are rounded on the first serialization).

Usage:
  pip install -e ".[fuzz]"
  python3 fuzz/fuzz_toon.py -runs=1000000
"""

import sys

import atheris

with atheris.instrument_imports():
    from src.graph import Schema
    from src.toon import extract_answer, parse_toon, serialize_toon

SCHEMAS = (Schema.OBJECT_RELATION, Schema.HUMAN_OBJECT)


def TestOneInput(input_bytes: bytes) -> None:
    fdp = atheris.FuzzedDataProvider(input_bytes)
    schema = SCHEMAS[fdp.ConsumeIntInRange(0, len(SCHEMAS) - 1)]
    text = fdp.ConsumeUnicodeNoSurrogates(sys.maxsize)

    outcome = parse_toon(text, schema)
    extract_answer(f"<answer>{text}</answer>", schema)
    if not outcome.valid:
        return

    canonical = serialize_toon(outcome.graph).raw_text
    again = parse_toon(canonical, schema)
    if not again.valid or serialize_toon(again.graph).raw_text != canonical:
        raise AssertionError(f"Canonical TOON did not round-trip for input {text!r}")


def main() -> None:
    atheris.Setup(sys.argv, TestOneInput)
    atheris.Fuzz()


if __name__ == "__main__":
    main()
