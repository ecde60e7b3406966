"""Run configuration, the batch verification pipeline, and deterministic
serialization of its reports.

JSON payloads are rendered by a small writer of our own so that floats always
carry 17 significant digits and complex numbers become {"re": ..., "im": ...}
objects; identical configuration and seed therefore produce byte-identical
output, except for the wall-clock ``timing`` field, which is excluded from
the determinism hash.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import __version__
from .errors import NonConvergence
from .hermite import PermutationId, hermite_zeros, permuted_polynomial
from .matrices import (
    CONDITIONING_FLOOR,
    KIND_M1,
    KIND_M2,
    build_m1,
    build_m2,
    spectrum_check,
)
from .polynomials import roots

__all__ = [
    "MU_WORDS_N3",
    "RunConfig",
    "OrderingOutcome",
    "VerificationReport",
    "run_verification",
    "mu_assignment_table",
    "to_json",
    "determinism_hash",
    "report_to_dict",
    "report_to_json",
    "report_to_csv",
]

# The six mu-numbered coefficient assignments commonly quoted for n = 3,
# expressed as permutation words over the ascending zeros (-sqrt(3/2), 0,
# +sqrt(3/2)).  Lexicographic rank order and mu order disagree, hence the
# explicit table.
MU_WORDS_N3 = {
    1: (2, 3, 1),
    2: (2, 1, 3),
    3: (3, 2, 1),
    4: (3, 1, 2),
    5: (1, 3, 2),
    6: (1, 2, 3),
}

_MU5_NOTE = (
    "n=3 zero-table discrepancy: the mu=5 assignment (word (1,3,2)) has zeros "
    "{0, 0.6124+0.9219i, 0.6124-0.9219i}; the real triple {0, -1.8772, 0.6524} "
    "sometimes quoted for mu=5 duplicates the mu=4 row (word (3,1,2)). "
    "Recomputed values take precedence."
)

_FREQUENCY_NOTE = (
    "second-order modal frequencies are the positive square roots of the "
    "matrix eigenvalues (eigenvalue = frequency^2), so squared-integer "
    "eigenvalues give integer frequencies and 2*pi-periodic modes."
)

_ALL_KINDS = (KIND_M1, KIND_M2)


@dataclass
class RunConfig:
    """Configuration of one verification sweep."""

    n: int
    kinds: tuple = _ALL_KINDS
    orderings: Union[str, Sequence[int], tuple] = "all"
    root_tol: float = 1e-12
    eig_tol: float = 1e-13
    pass_tol: float = 1e-6
    ode_rel_tol: float = 1e-10
    ode_abs_tol: float = 1e-12
    output_format: str = "json"
    seed: int = 42
    jobs: int = 1
    force: bool = False

    def __post_init__(self):
        self.kinds = tuple(self.kinds)
        self.validate()

    def validate(self):
        if not 2 <= self.n <= 30:
            raise ValueError(f"n must be in 2..30, got {self.n}")
        for kind in self.kinds:
            if kind not in _ALL_KINDS:
                raise ValueError(f"unknown kind {kind!r}")
        if not self.kinds:
            raise ValueError("at least one kind required")
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.orderings == "all" and self.n > 8 and not self.force:
            raise ValueError(
                f"a full sweep of {self.n}! orderings needs force=True beyond n=8")
        for name in ("root_tol", "eig_tol", "pass_tol", "ode_rel_tol", "ode_abs_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.orderings != "all" and not self._is_sample_spec():
            total = math.factorial(self.n)
            ranks = [int(r) for r in self.orderings]
            if not ranks or min(ranks) < 1 or max(ranks) > total:
                raise ValueError(f"ordering ranks must lie in 1..{total}")

    def _is_sample_spec(self) -> bool:
        return (isinstance(self.orderings, tuple) and len(self.orderings) == 2
                and self.orderings[0] == "sample")

    def ordering_ranks(self) -> list:
        """Resolve the orderings field to an explicit list of 1-based ranks."""
        total = math.factorial(self.n)
        if self.orderings == "all":
            return list(range(1, total + 1))
        if self._is_sample_spec():
            k = int(self.orderings[1])
            if k > total:
                raise ValueError(f"cannot sample {k} from {total} orderings")
            return sorted(random.Random(self.seed).sample(range(1, total + 1), k))
        return sorted(set(int(r) for r in self.orderings))

    def _orderings_payload(self):
        if self.orderings == "all":
            return "all"
        if self._is_sample_spec():
            return {"sample": int(self.orderings[1])}
        return [int(r) for r in self.orderings]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "kinds": list(self.kinds),
            "orderings": self._orderings_payload(),
            "tolerances": {
                "root_tol": self.root_tol,
                "eig_tol": self.eig_tol,
                "pass_tol": self.pass_tol,
                "ode_rel_tol": self.ode_rel_tol,
                "ode_abs_tol": self.ode_abs_tol,
            },
            "output_format": self.output_format,
            "seed": self.seed,
            "jobs": self.jobs,
            "force": self.force,
        }


@dataclass
class OrderingOutcome:
    """Spectrum-check result of one (ordering, kind) pair."""

    rank: int
    word: tuple
    kind: str
    eigenvalues: np.ndarray
    expected: tuple
    max_deviation: float
    status: str  # pass | fail | inconclusive
    zero_separation: float
    coeff_separation: float

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "word": list(self.word),
            "kind": self.kind,
            "eigenvalues": [complex(v) for v in self.eigenvalues],
            "expected": list(self.expected),
            "max_deviation": self.max_deviation,
            "status": self.status,
            "zero_separation": self.zero_separation,
            "coeff_separation": self.coeff_separation,
        }


@dataclass
class VerificationReport:
    """Everything one verification sweep produced."""

    config: RunConfig
    results: list
    aggregate: dict
    notes: list
    version: str = __version__
    timing_seconds: float = 0.0


def verify_one_ordering(n: int, rank: int, kinds: tuple, root_tol: float,
                        pass_tol: float, eig_tol: float) -> list:
    """Full pipeline for one ordering: permute, solve for zeros, build each
    requested matrix, and check its spectrum.  Returns one OrderingOutcome
    per kind."""
    herm = hermite_zeros(n)
    perm = PermutationId.from_rank(n, rank)
    poly = permuted_polynomial(herm, perm)
    try:
        zeros = roots(poly, tol=root_tol)
    except NonConvergence:
        zeros = roots(poly, tol=root_tol, start_phase=1.9)

    coeffs = poly.coefficients
    outcomes = []
    for kind in kinds:
        builder = build_m1 if kind == KIND_M1 else build_m2
        matrix = builder(zeros, coeffs, source_perm=perm)
        report = spectrum_check(matrix, tol=pass_tol, eig_tol=eig_tol)
        if report.passed:
            status = "pass"
        elif matrix.conditioning_warning:
            status = "inconclusive"
        else:
            status = "fail"
        outcomes.append(OrderingOutcome(
            rank=rank,
            word=perm.word,
            kind=kind,
            eigenvalues=report.eigenvalues,
            expected=report.expected,
            max_deviation=report.max_deviation,
            status=status,
            zero_separation=matrix.zero_separation,
            coeff_separation=matrix.coeff_separation,
        ))
    return outcomes


def _worker(args) -> list:
    return verify_one_ordering(*args)


def run_verification(config: RunConfig) -> VerificationReport:
    """Run the sweep described by ``config`` and aggregate the outcomes.

    With jobs > 1 the orderings are mapped over a process pool; reduction is
    order-preserving, so reports are deterministic either way.
    """
    config.validate()
    ranks = config.ordering_ranks()
    started = time.perf_counter()

    tasks = [(config.n, rank, config.kinds, config.root_tol,
              config.pass_tol, config.eig_tol) for rank in ranks]
    if config.jobs > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (4 * config.jobs))
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            grouped = list(pool.map(_worker, tasks, chunksize=chunk))
    else:
        grouped = [_worker(task) for task in tasks]

    results = [outcome for group in grouped for outcome in group]
    deviations = [r.max_deviation for r in results]
    aggregate = {
        "checks": len(results),
        "pass": sum(r.status == "pass" for r in results),
        "fail": sum(r.status == "fail" for r in results),
        "inconclusive": sum(r.status == "inconclusive" for r in results),
        "max_deviation": max(deviations) if deviations else 0.0,
        "conditioning_floor": CONDITIONING_FLOOR,
    }
    notes = []
    if config.n == 3:
        notes.append(_MU5_NOTE)
    if KIND_M2 in config.kinds:
        notes.append(_FREQUENCY_NOTE)

    report = VerificationReport(
        config=config,
        results=results,
        aggregate=aggregate,
        notes=notes,
        timing_seconds=time.perf_counter() - started,
    )
    return report


def mu_assignment_table() -> dict:
    """Rank/word rows for the six commonly quoted mu assignments at n = 3."""
    from .hermite import lexicographic_rank

    rows = []
    for mu, word in sorted(MU_WORDS_N3.items()):
        rows.append({
            "mu": mu,
            "word": list(word),
            "rank": lexicographic_rank(word),
        })
    return {"n": 3, "assignments": rows, "notes": [_MU5_NOTE]}


# --- serialization -----------------------------------------------------------


def _format_float(x: float) -> str:
    if x != x or x in (math.inf, -math.inf):
        raise ValueError(f"cannot serialise non-finite float {x}")
    text = f"{x:.17g}"
    # Keep a float-typed token so the round trip preserves types.
    if not any(ch in text for ch in ".eE"):
        text += ".0"
    return text


def _write_json(obj, out: list, indent: int, level: int):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(f'{pad_in}"{key}": ')
            _write_json(value, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(seq):
            out.append(pad_in)
            _write_json(value, out, indent, level + 1)
            out.append(",\n" if i < len(seq) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_format_float(float(obj)))
    elif isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        out.append('{"re": ' + _format_float(c.real) + ', "im": ' + _format_float(c.imag) + "}")
    elif isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        out.append(f'"{escaped}"')
    elif obj is None:
        out.append("null")
    elif isinstance(obj, np.ndarray):
        _write_json(obj.tolist(), out, indent, level)
    else:
        raise TypeError(f"cannot serialise {type(obj)!r}")


def to_json(obj, indent: int = 2) -> str:
    """Deterministic JSON with 17-significant-digit floats and complex values
    rendered as {"re": ..., "im": ...}."""
    out: list = []
    _write_json(obj, out, indent, 0)
    return "".join(out) + "\n"


def determinism_hash(payload: dict) -> str:
    """SHA-256 over the JSON payload with the timing field removed."""
    filtered = {k: v for k, v in payload.items() if k != "timing"}
    return hashlib.sha256(to_json(filtered).encode()).hexdigest()


def report_to_dict(report: VerificationReport) -> dict:
    payload = {
        "version": report.version,
        "config": report.config.to_dict(),
        "results": [r.to_dict() for r in report.results],
        "aggregate": report.aggregate,
        "notes": list(report.notes),
    }
    payload["determinism_sha256"] = determinism_hash(payload)
    payload["timing"] = {"seconds": report.timing_seconds}
    return payload


def report_to_json(report: VerificationReport) -> str:
    return to_json(report_to_dict(report))


def _complex_token(value: complex) -> str:
    return f"{value.real:.17g}{value.imag:+.17g}j"


def report_to_csv(report: VerificationReport) -> str:
    """One row per (ordering, kind); eigenvalues joined with semicolons."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["n", "rank", "word", "kind", "status", "max_deviation",
                     "zero_separation", "coeff_separation", "eigenvalues", "expected"])
    for r in report.results:
        writer.writerow([
            report.config.n,
            r.rank,
            " ".join(str(w) for w in r.word),
            r.kind,
            r.status,
            f"{r.max_deviation:.17g}",
            f"{r.zero_separation:.17g}",
            f"{r.coeff_separation:.17g}",
            ";".join(_complex_token(complex(v)) for v in r.eigenvalues),
            ";".join(str(e) for e in r.expected),
        ])
    return buffer.getvalue()
