"""Bounded-height census: enumerate, reduce, bucket, and summarize.

Streams every primitive canonical model with coefficients in [-H, H] and
nonzero resultant through the reduction and moduli pipelines, persisting one
JSON line per model (resumable byte-for-byte), then counts conjugacy classes
of the bounded set over a grid of bounds B.

Membership convention: a record is in Gamma_B when its minimal-resultant norm
upper bound is <= B and its multiplicative moduli height (max |coordinate| of
the coprime integer sigma point) is <= B, i.e. log-height <= log B.  Class
counts are intervals [#sigma keys, #proven-distinct classes]; unknown pairs
never merge without a witness.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .conjugacy_twists import bucket_twists
from .errors import CensusAssertionError, InvalidArgumentError
from .exact_arithmetic import FactoredIdeal, rational_from_string, rational_to_string
from .moduli_invariants import moduli_height
from .morphism_space import MorphismModel, monomials
from .reduction_theory import LocalExponent, ReductionReport, SearchBudget, reduction_report, s_b_primes
from .resultants import macaulay_resultant

CONVENTIONS = (
    "Gamma membership: minimal-resultant norm upper bound <= B and "
    "multiplicative moduli height <= B (equivalently log-height <= log B); "
    "class counts are [distinct sigma keys, proven-distinct classes]."
)


@dataclass(frozen=True, slots=True)
class CensusConfig:
    n: int
    d: int
    coeff_bound: int
    B: int
    budget: SearchBudget
    output_prefix: str
    threads: int = 1

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise InvalidArgumentError("need n >= 1 and d >= 1")
        if self.coeff_bound < 0:
            raise InvalidArgumentError("coefficient bound must be >= 0")
        if self.B < 1:
            raise InvalidArgumentError("need B >= 1")
        if self.threads < 1:
            raise InvalidArgumentError("need threads >= 1")

    @property
    def full_pipeline(self) -> bool:
        return (self.n, self.d) == (1, 2)

    @property
    def records_path(self) -> Path:
        return Path(f"{self.output_prefix}.records.jsonl")

    @property
    def summary_path(self) -> Path:
        return Path(f"{self.output_prefix}.summary.json")

    @property
    def report_path(self) -> Path:
        return Path(f"{self.output_prefix}.report.txt")


@dataclass(frozen=True, slots=True)
class CensusRecord:
    key: str
    model: MorphismModel
    res: Fraction
    local: tuple[LocalExponent, ...]
    minimal_resultant: FactoredIdeal
    norm: int
    norm_lower_bound: int
    fully_certified: bool
    sigma: tuple[Fraction, Fraction] | None
    moduli_point: tuple[int, int, int] | None
    mult_height: int
    moduli_height: float
    in_gamma: bool

    def bad_primes(self) -> tuple[int, ...]:
        return self.minimal_resultant.primes()

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "model": self.model.to_json(),
            "res": rational_to_string(self.res),
            "local": [
                {"p": str(e.p), "e": e.e_model, "eps": e.eps_estimate, "certified": e.certified} for e in self.local
            ],
            "minimal_resultant": self.minimal_resultant.to_json(),
            "norm": str(self.norm),
            "norm_is_upper_bound": not self.fully_certified,
            "norm_lower_bound": str(self.norm_lower_bound),
            "fully_certified": self.fully_certified,
            "sigma": None if self.sigma is None else [rational_to_string(s) for s in self.sigma],
            "moduli_point": None if self.moduli_point is None else [str(x) for x in self.moduli_point],
            "mult_height": str(self.mult_height),
            "moduli_height": float(f"{self.moduli_height:.12g}"),
            "in_gamma": self.in_gamma,
            "class_id": None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CensusRecord":
        sigma = data["sigma"]
        point = data["moduli_point"]
        return cls(
            key=data["key"],
            model=MorphismModel.from_json(data["model"]),
            res=rational_from_string(data["res"]),
            local=tuple(
                LocalExponent(int(e["p"]), e["e"], e["eps"], e["certified"]) for e in data["local"]
            ),
            minimal_resultant=FactoredIdeal.from_json(data["minimal_resultant"]),
            norm=int(data["norm"]),
            norm_lower_bound=int(data["norm_lower_bound"]),
            fully_certified=data["fully_certified"],
            sigma=None if sigma is None else tuple(rational_from_string(s) for s in sigma),
            moduli_point=None if point is None else tuple(int(x) for x in point),
            mult_height=int(data["mult_height"]),
            moduli_height=data["moduli_height"],
            in_gamma=data["in_gamma"],
        )


def record_key(model: MorphismModel) -> str:
    coeffs = ",".join(str(int(c)) for f in model.forms for c in f.coeffs)
    return f"{model.n}|{model.d}|{coeffs}"


def _record_line(record: CensusRecord) -> str:
    return json.dumps(record.to_json(), sort_keys=True, separators=(",", ":")) + "\n"


def enumerate_models(n: int, d: int, coeff_bound: int):
    """Every primitive canonical model with entries in [-H, H] and Res != 0, once.

    Deterministic order: first appearance in the ascending lexicographic scan
    of raw coefficient tuples.
    """
    if coeff_bound < 0:
        raise InvalidArgumentError("coefficient bound must be >= 0")
    per_form = len(monomials(n, d))
    total = per_form * (n + 1)
    seen = set()
    for raw in itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=total):
        first = next((v for v in raw if v), None)
        if first is None:
            continue
        g = 0
        for v in raw:
            g = math.gcd(g, v)
        if first < 0:
            g = -g
        key = tuple(v // g for v in raw)
        if key in seen:
            continue
        seen.add(key)
        model = MorphismModel.from_coeff_lists(
            n, d, [key[i * per_form : (i + 1) * per_form] for i in range(n + 1)]
        )
        if macaulay_resultant(model).value != 0:
            yield model


def compute_record(config: CensusConfig, model: MorphismModel, key: str) -> CensusRecord:
    rep: ReductionReport = reduction_report(model, config.budget)
    mp = moduli_height(model)
    in_gamma = rep.norm <= config.B and mp.mult_height <= config.B
    record = CensusRecord(
        key=key,
        model=rep.morphism,
        res=rep.res,
        local=rep.local,
        minimal_resultant=rep.minimal_resultant,
        norm=rep.norm,
        norm_lower_bound=rep.certified_norm_lower_bound(),
        fully_certified=rep.fully_certified,
        sigma=mp.sigma,
        moduli_point=mp.point,
        mult_height=mp.mult_height,
        moduli_height=mp.height,
        in_gamma=in_gamma,
    )
    if in_gamma and not set(record.bad_primes()).issubset(s_b_primes(config.B)):
        raise CensusAssertionError(f"record {key} has a bad prime outside S_B", record)
    return record


def _recover_prefix(path: Path) -> list[str]:
    """Keys of the valid complete record lines; truncates any partial tail."""
    if not path.exists():
        return []
    raw = path.read_bytes()
    keys = []
    valid_end = 0
    for line in raw.splitlines(keepends=True):
        if not line.endswith(b"\n"):
            break
        try:
            obj = json.loads(line)
            keys.append(obj["key"])
        except (ValueError, KeyError, TypeError):
            break
        valid_end += len(line)
    if valid_end != len(raw):
        with open(path, "r+b") as fh:
            fh.truncate(valid_end)
    return keys


def stream_records(config: CensusConfig, limit: int | None = None) -> int:
    """Compute and append records, skipping those already on disk.

    Enumeration order is deterministic, so an existing file must be a prefix
    of the full stream; a corrupt tail (e.g. from a kill mid-write) is
    truncated before resuming.  Returns the number of records now persisted.
    ``limit`` bounds how many new records are written (test hook for
    interruption).
    """
    path = config.records_path
    path.parent.mkdir(parents=True, exist_ok=True)
    existing = _recover_prefix(path)
    new_written = 0
    enumerated = 0

    def flush_chunk(sink, chunk):
        if config.threads > 1 and len(chunk) > 1:
            with ThreadPoolExecutor(max_workers=config.threads) as pool:
                records = list(pool.map(lambda mk: compute_record(config, *mk), chunk))
        else:
            records = [compute_record(config, model, key) for model, key in chunk]
        for record in records:
            sink.write(_record_line(record))
        sink.flush()

    chunk_size = max(8 * config.threads, 8)
    with open(path, "a", encoding="utf-8") as sink:
        chunk: list[tuple[MorphismModel, str]] = []
        for idx, model in enumerate(enumerate_models(config.n, config.d, config.coeff_bound)):
            enumerated = idx + 1
            key = record_key(model)
            if idx < len(existing):
                if existing[idx] != key:
                    raise CensusAssertionError(
                        f"records file mismatches the enumeration at index {idx}: "
                        f"{existing[idx]!r} != {key!r}"
                    )
                continue
            chunk.append((model, key))
            if limit is not None and new_written + len(chunk) >= limit:
                take = limit - new_written
                flush_chunk(sink, chunk[:take])
                return len(existing) + new_written + take
            if len(chunk) >= chunk_size:
                flush_chunk(sink, chunk)
                new_written += len(chunk)
                chunk = []
        if chunk:
            flush_chunk(sink, chunk)
            new_written += len(chunk)
    if len(existing) > enumerated:
        raise CensusAssertionError(
            f"records file holds {len(existing)} records but the enumeration yields {enumerated}"
        )
    return len(existing) + new_written


def load_records(path) -> list[CensusRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(CensusRecord.from_json(json.loads(line)))
    return records


def b_grid(B: int) -> list[int]:
    grid = {B}
    b = 1
    while b <= B:
        grid.add(b)
        b *= 2
    return sorted(grid)


@dataclass(frozen=True, slots=True)
class CensusSummary:
    meta: dict
    per_b: tuple[dict, ...]
    classes: tuple[dict, ...] | None
    monic: dict | None
    total_models: int

    def to_json(self) -> dict:
        return {
            "conventions": CONVENTIONS,
            "meta": self.meta,
            "total_models": self.total_models,
            "per_b": list(self.per_b),
            "classes": None if self.classes is None else list(self.classes),
            "monic": self.monic,
        }


def _is_monic_polynomial_map(model: MorphismModel) -> bool:
    # z^d + ... as a model: last form is exactly Y^d, leading coefficient 1
    if model.n != 1:
        return False
    last = model.forms[1].coeffs
    return last[-1] == 1 and all(c == 0 for c in last[:-1]) and model.forms[0].coeffs[0] == 1


def summarize_records(records: list[CensusRecord], B: int, budget: SearchBudget, meta: dict) -> CensusSummary:
    """Class-count intervals over the B grid, plus the per-record hard checks."""
    full = all(r.sigma is not None for r in records) and bool(records)
    classes_json = None
    key_to_class: dict[str, str] = {}
    if full:
        members = [r for r in records if r.norm <= B and r.mult_height <= B]
        buckets = bucket_twists([r.model for r in members], budget)
        classes_json = []
        for bucket in buckets:
            for cls in bucket.classes:
                class_id = f"C{len(classes_json):04d}"
                member_keys = sorted(record_key(m) for m in cls)
                classes_json.append(
                    {
                        "class_id": class_id,
                        "sigma": [rational_to_string(s) for s in bucket.qbar_class_key],
                        "representative": member_keys[0],
                        "members": member_keys,
                    }
                )
                for k in member_keys:
                    key_to_class[k] = class_id

    per_b = []
    previous = None
    for b in b_grid(B):
        allowed = set(s_b_primes(b))
        members_b = [r for r in records if r.norm <= b and r.mult_height <= b]
        for r in members_b:
            if not set(r.bad_primes()).issubset(allowed):
                raise CensusAssertionError(f"record {r.key} has a bad prime outside S_{b}", r)
        possible_b = sum(
            1 for r in records if r.norm > b and r.norm_lower_bound <= b and r.mult_height <= b
        )
        entry = {
            "B": b,
            "gamma_definite": len(members_b),
            "gamma_possible_extra": possible_b,
            "sb_primes": s_b_primes(b),
            "sb_check": "pass",
        }
        if full:
            sigma_keys = {r.sigma for r in members_b}
            upper = len({key_to_class[r.key] for r in members_b})
            entry["class_count_lower"] = len(sigma_keys)
            entry["class_count_upper"] = upper
            entry["northcott_sigma_keys"] = len({r.sigma for r in records if r.mult_height <= b})
        if previous is not None:
            monotone = entry["gamma_definite"] >= previous["gamma_definite"] and (
                not full
                or (
                    entry["class_count_lower"] >= previous["class_count_lower"]
                    and entry["class_count_upper"] >= previous["class_count_upper"]
                )
            )
            if not monotone:
                raise CensusAssertionError(f"counts decreased from B={previous['B']} to B={b}")
        previous = entry
        per_b.append(entry)

    monic_json = None
    if records and records[0].model.n == 1:
        monic = [r for r in records if _is_monic_polynomial_map(r.model)]
        for r in monic:
            if r.norm != 1 or not r.fully_certified:
                raise CensusAssertionError(f"monic record {r.key} lacks unit minimal resultant", r)
        monic_json = {"count": len(monic), "all_unit_ideal": True}

    return CensusSummary(
        meta=meta,
        per_b=tuple(per_b),
        classes=None if classes_json is None else tuple(classes_json),
        monic=monic_json,
        total_models=len(records),
    )


def render_report(summary: CensusSummary) -> str:
    lines = []
    meta = summary.meta
    bound = meta.get("coeff_bound")
    lines.append(
        "census n=%s d=%s H=%s B=%s (%s models)"
        % (meta.get("n"), meta.get("d"), "?" if bound is None else bound, meta.get("B"), summary.total_models)
    )
    lines.append(summary.meta.get("conventions", CONVENTIONS))
    header = f"{'B':>6} {'gamma':>7} {'possible':>9} {'classes':>12} {'sigma-keys':>11} {'S_B':>24}"
    lines.append(header)
    lines.append("-" * len(header))
    for entry in summary.per_b:
        if "class_count_lower" in entry:
            classes = f"[{entry['class_count_lower']},{entry['class_count_upper']}]"
            keys = str(entry["class_count_lower"])
        else:
            classes = "n/a"
            keys = "n/a"
        sb = ",".join(str(p) for p in entry["sb_primes"]) or "-"
        lines.append(
            f"{entry['B']:>6} {entry['gamma_definite']:>7} {entry['gamma_possible_extra']:>9} "
            f"{classes:>12} {keys:>11} {sb:>24}"
        )
    if summary.monic:
        lines.append(
            f"monic polynomial maps: {summary.monic['count']} (all with unit minimal resultant ideal)"
        )
    return "\n".join(lines) + "\n"


def run_census(config: CensusConfig) -> CensusSummary:
    """Stream all records, then summarize, asserting the census contracts."""
    stream_records(config)
    records = load_records(config.records_path)
    meta = {
        "n": config.n,
        "d": config.d,
        "coeff_bound": config.coeff_bound,
        "B": config.B,
        "budget": {
            "a_max": config.budget.a_max,
            "translation_depth": config.budget.translation_depth,
            "matrix_bound": config.budget.matrix_bound,
        },
        "conventions": CONVENTIONS,
    }
    summary = summarize_records(records, config.B, config.budget, meta)
    config.summary_path.write_text(
        json.dumps(summary.to_json(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    config.report_path.write_text(render_report(summary), encoding="utf-8")
    return summary
