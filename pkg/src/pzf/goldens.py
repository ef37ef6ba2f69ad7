"""Reference tables shipped as package data for regression comparison.

The CSV schema is: table,key1,key2,quantity,value,tolerance.  A tolerance
of 0 demands exact rational equality (value is then "p/q" or an integer);
otherwise value is a decimal to be compared within the absolute tolerance.
Tables: "small" (ept by graph name, exact), "kn" (K_n ept by n),
"kmn" (K_{m,n} ept by m, n and start side quantity "u" or "v"),
"sun" (n-Sun ept and consecutive difference
"delta" by n).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from importlib.resources import files

from gmpy2 import mpq


@dataclass(frozen=True)
class GoldenRow:
    table: str
    key1: str
    key2: str
    quantity: str
    value: object      # exact rational (mpq)
    tolerance: object  # mpq; 0 means exact equality required


def _parse_number(text: str):
    """Exact rational from "p/q", integer, or decimal text."""
    if "/" in text:
        num, den = text.split("/")
        return mpq(int(num), int(den))
    return mpq(Fraction(text))


def load_goldens() -> dict:
    """All golden rows grouped by table id."""
    raw = files("pzf.data").joinpath("goldens.csv").read_text()
    tables: dict = {}
    for rec in csv.DictReader(raw.splitlines()):
        row = GoldenRow(
            table=rec["table"],
            key1=rec["key1"],
            key2=rec["key2"],
            quantity=rec["quantity"],
            value=_parse_number(rec["value"]),
            tolerance=_parse_number(rec["tolerance"]),
        )
        tables.setdefault(row.table, []).append(row)
    return tables


def matches(exact, row: GoldenRow) -> bool:
    """Does an exact rational agree with a golden row at its tolerance?"""
    if row.tolerance == 0:
        return exact == row.value
    return abs(exact - row.value) <= row.tolerance
