"""Per-spectrum metric computation, CoT auditing, and aggregation.

Scoring for one spectrum:

* validity: a candidate is valid iff it parses and perceives;
* formula consistency / DBE correctness: judged on the highest-ranked valid
  candidate, false when no candidate is valid;
* exact match: canonical-SMILES equality against any of the first k
  candidates (top-1 restricts to the first);
* Tanimoto: maximum over the valid candidates among the first k, 0.0 when
  none are valid;
* MCES: minimum dissimilarity over the same set, 1.0 when none are valid.

Invalid candidates are skipped inside the top-k scans, never zero-scored.
"""

from __future__ import annotations

import csv
import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .chem import ChemError, canonical_smiles, dbe, mol_from_smiles, molecular_formula
from .chem.formula import ElementCounts, canonical_formula, parse_formula
from .chem.mol import Molecule
from .dataset import WEIGHT_BIN_LABELS, SpectrumRecord, weight_bin
from .protocol import ParsedResponse, parse_response
from .similarity import mces, morgan_fingerprint, tanimoto


class EmptyInput(ValueError):
    """Aggregation over an empty metric list."""


@dataclass(frozen=True)
class PerSpectrumMetrics:
    record_id: str
    bin: str
    has_think: bool
    has_answer: bool
    n_candidates: int
    n_valid: int
    validity_top1: bool
    formula_consistent_any: bool
    dbe_correct_top1: bool
    exact_top1: bool
    exact_topk: bool
    mts_top1: float
    mts_topk: float
    mces_top1: float
    mces_topk: float
    mces_truncated: bool


@dataclass(frozen=True)
class CotAudit:
    record_id: str
    stated_dbe: float | None
    stated_formula: ElementCounts | None
    dbe_claim_correct: bool | None
    formula_claim_correct: bool | None
    contradiction: bool
    word_count: int


def _try_mol(smiles: str) -> Molecule | None:
    try:
        return mol_from_smiles(smiles)
    except ChemError:
        return None


def _candidate_mols(candidates: Sequence[str]) -> list[Molecule | None]:
    cache: dict[str, Molecule | None] = {}
    out = []
    for smiles in candidates:
        if smiles not in cache:
            cache[smiles] = _try_mol(smiles)
        out.append(cache[smiles])
    return out


def score_spectrum(
    record: SpectrumRecord,
    parsed: ParsedResponse,
    k: int = 10,
    *,
    mces_budget: float = 1.0,
    fp_radius: int = 2,
    fp_nbits: int = 2048,
) -> PerSpectrumMetrics:
    gt = mol_from_smiles(record.ground_truth)
    gt_canonical = canonical_smiles(gt)
    gt_fp = morgan_fingerprint(gt, radius=fp_radius, nbits=fp_nbits)
    gt_dbe = dbe(molecular_formula(gt))

    candidates = parsed.candidates
    mols = _candidate_mols(candidates)
    n_valid = sum(1 for m in mols if m is not None)
    first_valid = next((m for m in mols if m is not None), None)

    formula_ok = first_valid is not None and molecular_formula(first_valid) == record.formula
    dbe_ok = first_valid is not None and dbe(molecular_formula(first_valid)) == gt_dbe

    exact_top1 = False
    exact_topk = False
    mts_top1 = 0.0
    mts_topk = 0.0
    mces_top1 = 1.0
    mces_topk = 1.0
    truncated = False
    for rank, mol in enumerate(mols[:k]):
        if mol is None:
            continue
        exact = canonical_smiles(mol) == gt_canonical
        similarity = tanimoto(gt_fp, morgan_fingerprint(mol, radius=fp_radius, nbits=fp_nbits))
        if mces_topk > 0.0:
            result = mces(gt, mol, budget=mces_budget)
            truncated = truncated or not result.optimal
            distance = result.dissimilarity
        else:
            distance = 1.0  # min already at the floor; skip the search
        if rank == 0:
            exact_top1 = exact
            mts_top1 = similarity
            mces_top1 = distance
        exact_topk = exact_topk or exact
        mts_topk = max(mts_topk, similarity)
        mces_topk = min(mces_topk, distance)

    return PerSpectrumMetrics(
        record_id=record.id,
        bin=weight_bin(record),
        has_think=parsed.has_think,
        has_answer=parsed.has_answer,
        n_candidates=len(candidates),
        n_valid=n_valid,
        validity_top1=bool(mols) and mols[0] is not None,
        formula_consistent_any=formula_ok,
        dbe_correct_top1=dbe_ok,
        exact_top1=exact_top1,
        exact_topk=exact_topk,
        mts_top1=mts_top1,
        mts_topk=mts_topk,
        mces_top1=mces_top1,
        mces_topk=mces_topk,
        mces_truncated=truncated,
    )


_DBE_PHRASE = re.compile(r"double\s+bond\s+equivalents\s*\(dbe\)", re.IGNORECASE)
_FORMULA_LINE = re.compile(r"formula\s*:\s*(.*)", re.IGNORECASE)
_NUMBER = re.compile(r"[-+]?\d+(?:\.\d+)?")
_FORMULA_TOKEN = re.compile(r"(?:[A-Z][a-z]?\d*)+")


def _extract_stated_dbe(think_text: str) -> float | None:
    for line in think_text.splitlines():
        if _DBE_PHRASE.search(line):
            tail = line.rsplit("=", 1)[-1] if "=" in line else line.split(":", 1)[-1]
            numbers = _NUMBER.findall(tail)
            if numbers:
                return float(numbers[-1])
            return None
    return None


def _extract_stated_formula(think_text: str) -> ElementCounts | None:
    for line in think_text.splitlines():
        match = _FORMULA_LINE.search(line)
        if match is None:
            continue
        token = _FORMULA_TOKEN.search(match.group(1))
        if token is None:
            return None
        try:
            return parse_formula(token.group(0))
        except ChemError:
            return None
    return None


def audit_cot(parsed: ParsedResponse, record: SpectrumRecord) -> CotAudit:
    """Check the DBE and formula claims made inside the think block.

    A contradiction is recorded when a machine-checkable claim disagrees
    with the model's own highest-ranked valid candidate.
    """
    think = parsed.think_text or ""
    stated_dbe = _extract_stated_dbe(think)
    stated_formula = _extract_stated_formula(think)

    gt = mol_from_smiles(record.ground_truth)
    dbe_correct = None if stated_dbe is None else stated_dbe == dbe(molecular_formula(gt))
    formula_correct = None if stated_formula is None else stated_formula == record.formula

    first_valid = next((m for m in _candidate_mols(parsed.candidates) if m is not None), None)
    contradiction = False
    if first_valid is not None:
        counts = molecular_formula(first_valid)
        if stated_dbe is not None and stated_dbe != dbe(counts):
            contradiction = True
        if stated_formula is not None and stated_formula != counts:
            contradiction = True

    return CotAudit(
        record_id=record.id,
        stated_dbe=stated_dbe,
        stated_formula=stated_formula,
        dbe_claim_correct=dbe_correct,
        formula_claim_correct=formula_correct,
        contradiction=contradiction,
        word_count=parsed.cot_word_count,
    )


@dataclass
class AggregateReport:
    k: int
    n_records: int
    n_answered: int
    think_rate_pct: float
    answer_rate_pct: float
    smiles_validity_pct: float
    dbe_accuracy_pct: float
    formula_consistency_pct: float
    exact_top1_pct: float
    exact_topk_pct: float
    mts_top1_mean: float
    mts_topk_mean: float
    mces_top1_mean: float
    mces_topk_mean: float
    mces_truncated_pct: float
    answered: dict = field(default_factory=dict)
    cot: dict = field(default_factory=dict)
    bins: list = field(default_factory=list)

    def table_rows(self) -> list[tuple[str, str]]:
        k = self.k
        return [
            ("Records", str(self.n_records)),
            ("Answered records", str(self.n_answered)),
            ("Think Rate (%)", f"{self.think_rate_pct:.2f}"),
            ("Answer Rate (%)", f"{self.answer_rate_pct:.2f}"),
            ("SMILES Validity (%)", f"{self.smiles_validity_pct:.2f}"),
            ("DBE Accuracy (%)", f"{self.dbe_accuracy_pct:.2f}"),
            ("Formula Consistency (%)", f"{self.formula_consistency_pct:.2f}"),
            ("Accuracy Top-1 (%)", f"{self.exact_top1_pct:.2f}"),
            (f"Accuracy Top-{k} (%)", f"{self.exact_topk_pct:.2f}"),
            ("Tanimoto Top-1", f"{self.mts_top1_mean:.4f}"),
            (f"Tanimoto Top-{k}", f"{self.mts_topk_mean:.4f}"),
            ("MCES Top-1", f"{self.mces_top1_mean:.4f}"),
            (f"MCES Top-{k}", f"{self.mces_topk_mean:.4f}"),
            ("MCES truncated (%)", f"{self.mces_truncated_pct:.2f}"),
        ]

    def to_dict(self) -> dict:
        return asdict(self)


def _rates(metrics: Sequence[PerSpectrumMetrics]) -> dict:
    n = len(metrics)
    if n == 0:
        return {
            "n": 0,
            "smiles_validity_pct": 0.0,
            "dbe_accuracy_pct": 0.0,
            "formula_consistency_pct": 0.0,
            "exact_top1_pct": 0.0,
            "exact_topk_pct": 0.0,
            "mts_top1_mean": 0.0,
            "mts_topk_mean": 0.0,
            "mces_top1_mean": 1.0,
            "mces_topk_mean": 1.0,
        }
    return {
        "n": n,
        "smiles_validity_pct": 100.0 * sum(m.validity_top1 for m in metrics) / n,
        "dbe_accuracy_pct": 100.0 * sum(m.dbe_correct_top1 for m in metrics) / n,
        "formula_consistency_pct": 100.0 * sum(m.formula_consistent_any for m in metrics) / n,
        "exact_top1_pct": 100.0 * sum(m.exact_top1 for m in metrics) / n,
        "exact_topk_pct": 100.0 * sum(m.exact_topk for m in metrics) / n,
        "mts_top1_mean": sum(m.mts_top1 for m in metrics) / n,
        "mts_topk_mean": sum(m.mts_topk for m in metrics) / n,
        "mces_top1_mean": sum(m.mces_top1 for m in metrics) / n,
        "mces_topk_mean": sum(m.mces_topk for m in metrics) / n,
    }


def aggregate(
    metrics: Sequence[PerSpectrumMetrics],
    audits: Sequence[CotAudit] = (),
    k: int = 10,
) -> AggregateReport:
    """Fold per-spectrum metrics into the benchmark report.

    Structural and chemical rates use the full record count as denominator;
    the ``answered`` section repeats them over answered records only, since
    either convention is defensible.
    """
    if not metrics:
        raise EmptyInput("no per-spectrum metrics to aggregate")
    n = len(metrics)
    overall = _rates(metrics)
    answered = _rates([m for m in metrics if m.has_answer])

    with_think = [a for a in audits if a.word_count > 0]
    dbe_claims = [a for a in audits if a.dbe_claim_correct is not None]
    formula_claims = [a for a in audits if a.formula_claim_correct is not None]
    n_audits = len(audits)
    cot = {
        "n_think": len(with_think),
        "mean_cot_words": (sum(a.word_count for a in with_think) / len(with_think)) if with_think else 0.0,
        "n_dbe_claims": len(dbe_claims),
        "dbe_claim_correct_pct": (100.0 * sum(bool(a.dbe_claim_correct) for a in audits) / n_audits) if n_audits else 0.0,
        "n_formula_claims": len(formula_claims),
        "formula_claim_correct_pct": (100.0 * sum(bool(a.formula_claim_correct) for a in audits) / n_audits) if n_audits else 0.0,
        "contradiction_pct": (100.0 * sum(a.contradiction for a in audits) / n_audits) if n_audits else 0.0,
    }

    bins = []
    for label in WEIGHT_BIN_LABELS:
        in_bin = [m for m in metrics if m.bin == label]
        row = {"bin": label, "count": len(in_bin)}
        stats = _rates(in_bin)
        for key in (
            "exact_top1_pct",
            "exact_topk_pct",
            "mts_top1_mean",
            "mts_topk_mean",
            "mces_top1_mean",
            "mces_topk_mean",
        ):
            row[key] = stats[key]
        bins.append(row)

    return AggregateReport(
        k=k,
        n_records=n,
        n_answered=answered["n"],
        think_rate_pct=100.0 * sum(m.has_think for m in metrics) / n,
        answer_rate_pct=100.0 * sum(m.has_answer for m in metrics) / n,
        smiles_validity_pct=overall["smiles_validity_pct"],
        dbe_accuracy_pct=overall["dbe_accuracy_pct"],
        formula_consistency_pct=overall["formula_consistency_pct"],
        exact_top1_pct=overall["exact_top1_pct"],
        exact_topk_pct=overall["exact_topk_pct"],
        mts_top1_mean=overall["mts_top1_mean"],
        mts_topk_mean=overall["mts_topk_mean"],
        mces_top1_mean=overall["mces_top1_mean"],
        mces_topk_mean=overall["mces_topk_mean"],
        mces_truncated_pct=100.0 * sum(m.mces_truncated for m in metrics) / n,
        answered=answered,
        cot=cot,
        bins=bins,
    )


def evaluate_one(
    record: SpectrumRecord,
    transcript: str,
    k: int = 10,
    *,
    mces_budget: float = 1.0,
    fp_radius: int = 2,
    fp_nbits: int = 2048,
) -> tuple[PerSpectrumMetrics, CotAudit]:
    parsed = parse_response(transcript)
    metrics = score_spectrum(
        record, parsed, k, mces_budget=mces_budget, fp_radius=fp_radius, fp_nbits=fp_nbits
    )
    return metrics, audit_cot(parsed, record)


def _evaluate_task(args) -> tuple[PerSpectrumMetrics, CotAudit]:
    record, transcript, k, mces_budget, fp_radius, fp_nbits = args
    return evaluate_one(
        record, transcript, k, mces_budget=mces_budget, fp_radius=fp_radius, fp_nbits=fp_nbits
    )


def evaluate_records(
    records: Sequence[SpectrumRecord],
    transcripts: Mapping[str, str],
    k: int = 10,
    *,
    mces_budget: float = 1.0,
    fp_radius: int = 2,
    fp_nbits: int = 2048,
    workers: int = 1,
) -> tuple[list[PerSpectrumMetrics], list[CotAudit]]:
    """Score every record against its transcript (missing means empty)."""
    tasks = [
        (record, transcripts.get(record.id, ""), k, mces_budget, fp_radius, fp_nbits)
        for record in records
    ]
    if workers <= 1:
        results = [_evaluate_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_task, tasks, chunksize=8))
    metrics = [m for m, _ in results]
    audits = [a for _, a in results]
    return metrics, audits


_PER_SPECTRUM_COLUMNS = (
    "record_id",
    "bin",
    "has_think",
    "has_answer",
    "n_candidates",
    "n_valid",
    "validity_top1",
    "formula_consistent_any",
    "dbe_correct_top1",
    "exact_top1",
    "exact_topk",
    "mts_top1",
    "mts_topk",
    "mces_top1",
    "mces_topk",
    "mces_truncated",
)


def _cell(value) -> object:
    if isinstance(value, bool):
        return int(value)
    return value


def write_reports(
    out_dir: str | Path,
    metrics: Sequence[PerSpectrumMetrics],
    audits: Sequence[CotAudit],
    report: AggregateReport,
) -> dict[str, Path]:
    """Write the per-spectrum, aggregate, per-bin and audit files.

    Output is deterministic: same inputs, byte-identical files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "per_spectrum": out / "per_spectrum.csv",
        "aggregate_csv": out / "aggregate.csv",
        "aggregate_json": out / "aggregate.json",
        "per_bin": out / "per_bin.csv",
        "cot_audit": out / "cot_audit.csv",
    }

    with open(paths["per_spectrum"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_PER_SPECTRUM_COLUMNS)
        for m in metrics:
            row = asdict(m)
            writer.writerow([_cell(row[c]) for c in _PER_SPECTRUM_COLUMNS])

    with open(paths["aggregate_csv"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        writer.writerows(report.table_rows())

    with open(paths["aggregate_json"], "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")

    with open(paths["per_bin"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        columns = (
            "bin",
            "count",
            "exact_top1_pct",
            "exact_topk_pct",
            "mts_top1_mean",
            "mts_topk_mean",
            "mces_top1_mean",
            "mces_topk_mean",
        )
        writer.writerow(columns)
        for row in report.bins:
            writer.writerow([_cell(row[c]) for c in columns])

    with open(paths["cot_audit"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            (
                "record_id",
                "word_count",
                "stated_dbe",
                "dbe_claim_correct",
                "stated_formula",
                "formula_claim_correct",
                "contradiction",
            )
        )
        for a in audits:
            writer.writerow(
                [
                    a.record_id,
                    a.word_count,
                    "" if a.stated_dbe is None else a.stated_dbe,
                    "" if a.dbe_claim_correct is None else int(a.dbe_claim_correct),
                    "" if a.stated_formula is None else canonical_formula(a.stated_formula),
                    "" if a.formula_claim_correct is None else int(a.formula_claim_correct),
                    int(a.contradiction),
                ]
            )
    return paths
