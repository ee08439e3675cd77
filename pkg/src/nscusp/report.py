"""Run reports, the reference table, and the on-disk result cache.

A report is a flat JSON object with sorted keys.  Every integer is written as
a decimal string, so nothing is ever truncated to 64 bits.
"""
from __future__ import annotations

import json
import os
import tempfile
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from . import __version__
from .arith import require_prime
from .classnumber import compute
from .padic import DEFAULT_PRECISION, classify, floor_exponent, q_parity_check, verify_langata

CODE_VERSION = __version__


@dataclass(frozen=True)
class ReferenceTableRow:
    p: int
    factors: tuple[tuple[int, int], ...]

    @property
    def order(self) -> int:
        out = 1
        for q, e in self.factors:
            out *= q**e
        return out


def _row(p, *pairs):
    return ReferenceTableRow(p, tuple(sorted(pairs)))


REFERENCE_TABLE: tuple[ReferenceTableRow, ...] = (
    _row(23, (23, 4), (37181, 1)),
    _row(37, (3, 4), (7, 2), (19, 3), (37, 8), (577, 2)),
    _row(43, (2, 2), (19, 1), (29, 1), (43, 9), (463, 1), (1051, 1), (416532733, 1)),
    _row(59, (59, 14), (9988553613691393812358794271, 1)),
    _row(67, (67, 16), (193, 1), (661, 2), (2861, 1), (8009, 1), (11287, 1),
         (9383200455691459, 1)),
    _row(73, (2, 2), (3, 4), (11, 2), (37, 1), (73, 17), (79, 2), (241, 2),
         (3341773, 2), (11596933, 2)),
    _row(89, (2, 2), (3, 1), (5, 1), (11, 2), (13, 2), (89, 21), (4027, 2),
         (262504573, 2), (15354699728897, 2)),
    _row(101, (5, 4), (17, 1), (101, 24), (52951, 2), (54371, 2),
         (58884077243434864347851, 2)),
)


def load_fixture(path: str | os.PathLike) -> tuple[ReferenceTableRow, ...]:
    """Read a table in the form [{"p": "23", "factors": [["23", "4"], ...]}, ...]."""
    with open(path) as fh:
        raw = json.load(fh)
    return tuple(
        _row(int(r["p"]), *((int(q), int(e)) for q, e in r["factors"])) for r in raw
    )


_INT = {"type": "string", "pattern": "^-?[0-9]+$"}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": [
        "p", "order", "factors", "elementary_divisors", "ord_p", "floor", "irr",
        "classification", "langata", "q_parity", "analytic", "timings_ms", "code_version",
    ],
    "properties": {
        "p": _INT,
        "order": _INT,
        "factors": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [_INT, _INT, {"type": "boolean"}],
                "minItems": 3,
                "maxItems": 3,
            },
        },
        "elementary_divisors": {"type": "array", "items": _INT},
        "ord_p": _INT,
        "floor": _INT,
        "irr": _INT,
        "classification": {
            "enum": ["ELEMENTARY_RANK_FLOOR", "HAS_ORDER_P_SQUARED", "EXCESS_WITHOUT_P_SQUARED"]
        },
        "langata": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["j", "ord_S", "ord_Bprime", "b_mod_p"],
                "properties": {
                    "j": _INT,
                    "ord_S": _INT,
                    "ord_Bprime": _INT,
                    "b_mod_p": {"anyOf": [_INT, {"type": "null"}]},
                },
            },
        },
        "q_parity": {"type": ["boolean", "null"]},
        "analytic": {"type": ["object", "null"]},
        "timings_ms": {"type": "object", "additionalProperties": {"type": "number"}},
        "code_version": {"type": "string"},
    },
}


@dataclass(frozen=True)
class RunReport:
    p: int
    order: int
    factors: tuple[tuple[int, int, bool], ...]
    elementary_divisors: tuple[int, ...]
    ord_p: int
    floor: int
    irr: int
    classification: str
    langata: tuple[tuple[int, int, int, int | None], ...]  # (j, ord_S, ord_B', b mod p)
    q_parity: bool | None
    analytic: dict | None = None
    timings_ms: dict[str, float] = field(default_factory=dict, compare=False)
    code_version: str = CODE_VERSION

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "order": str(self.order),
            "factors": [[str(q), str(e), c] for q, e, c in self.factors],
            "elementary_divisors": [str(d) for d in self.elementary_divisors],
            "ord_p": str(self.ord_p),
            "floor": str(self.floor),
            "irr": str(self.irr),
            "classification": self.classification,
            "langata": [
                {
                    "j": str(j),
                    "ord_S": str(s),
                    "ord_Bprime": str(b),
                    "b_mod_p": None if r is None else str(r),
                }
                for j, s, b, r in self.langata
            ],
            "q_parity": self.q_parity,
            "analytic": self.analytic,
            "timings_ms": dict(self.timings_ms),
            "code_version": self.code_version,
        }

    @classmethod
    def from_json(cls, d: dict) -> "RunReport":
        return cls(
            p=int(d["p"]),
            order=int(d["order"]),
            factors=tuple((int(q), int(e), bool(c)) for q, e, c in d["factors"]),
            elementary_divisors=tuple(int(x) for x in d["elementary_divisors"]),
            ord_p=int(d["ord_p"]),
            floor=int(d["floor"]),
            irr=int(d["irr"]),
            classification=d["classification"],
            langata=tuple(
                (
                    int(r["j"]),
                    int(r["ord_S"]),
                    int(r["ord_Bprime"]),
                    None if r["b_mod_p"] is None else int(r["b_mod_p"]),
                )
                for r in d["langata"]
            ),
            q_parity=d["q_parity"],
            analytic=d["analytic"],
            timings_ms=dict(d.get("timings_ms", {})),
            code_version=d["code_version"],
        )

    def dumps(self, timings: bool = True) -> str:
        d = self.to_json()
        if not timings:
            d["timings_ms"] = {}
        return json.dumps(d, sort_keys=True)

    def body(self) -> dict:
        """The JSON form without timings, for comparing runs."""
        d = self.to_json()
        del d["timings_ms"]
        return d


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000, 3)


def build_report(p: int, analytic: bool = False, precision: int = DEFAULT_PRECISION) -> RunReport:
    """Run the full pipeline for one prime."""
    require_prime(p)
    timings = {}
    t0 = time.perf_counter()
    snf = compute(p)
    timings["classnumber"] = _ms(t0)

    t0 = time.perf_counter()
    val = verify_langata(p, precision)
    cls = classify(p, val, snf)
    timings["padic"] = _ms(t0)

    fo = snf.factored_order
    q_par = q_parity_check(p, fo) if p % 4 == 1 else None

    an = None
    if analytic:
        from .analytic import growth_report

        t0 = time.perf_counter()
        an = growth_report(p, snf.order).to_json()
        timings["analytic"] = _ms(t0)

    return RunReport(
        p=p,
        order=snf.order,
        factors=tuple(fo.factors),
        elementary_divisors=snf.elementary_divisors,
        ord_p=sum(snf.p_part_exponents(p)),
        floor=floor_exponent(p),
        irr=val.irr,
        classification=cls.value,
        langata=tuple((r.j, r.ord_S, r.ord_Bprime, r.b_mod_p) for r in val.per_j),
        q_parity=q_par,
        analytic=an,
        timings_ms=timings,
    )


def default_cache_dir() -> Path:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "nscusp"


def resolve_cache_dir(flag: str | None) -> Path:
    """--cache-dir wins over $CACHE_DIR, which wins over the default."""
    if flag:
        return Path(flag)
    env = os.environ.get("CACHE_DIR")
    if env:
        return Path(env)
    return default_cache_dir()


class ResultCache:
    """One JSON file per (p, code version); writes are atomic renames."""

    def __init__(self, directory: str | os.PathLike, version: str = CODE_VERSION):
        self.directory = Path(directory)
        self.version = version

    def path(self, p: int) -> Path:
        return self.directory / f"p{p}-v{self.version}.json"

    def get(self, p: int) -> RunReport | None:
        try:
            with open(self.path(p)) as fh:
                rep = RunReport.from_json(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError):
            return None
        if rep.p != p or rep.code_version != self.version:
            return None
        return rep

    def put(self, rep: RunReport) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(rep.dumps())
            os.replace(tmp, self.path(rep.p))
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise


def cached_report(
    p: int,
    cache: ResultCache | None,
    analytic: bool = False,
    precision: int = DEFAULT_PRECISION,
) -> tuple[RunReport, bool]:
    """(report, hit).  A cached report without analytic data is upgraded on demand."""
    if cache is not None:
        rep = cache.get(p)
        if rep is not None and (rep.analytic is not None or not analytic):
            if not analytic and rep.analytic is not None:
                rep = replace(rep, analytic=None)
            return rep, True
    rep = build_report(p, analytic=analytic, precision=precision)
    if cache is not None:
        cache.put(rep)
    return rep, False
