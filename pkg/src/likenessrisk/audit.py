"""False-alarm analysis of face-recognizer outputs on synthetic portraits.

Inputs are CSVs produced by running purely synthetic images through a
pretrained recognizer: every positive match is by construction a false alarm
against a real identity. The module computes the false-alarm rate, the
rate-versus-criterion curve, a paired real-versus-synthetic discrimination
score, the fraction of samples effectively within one JND of a real identity,
and its extrapolation from a recognizer gallery to a full population.

The recognizer itself is out of scope; everything here is recorder-produced
data, which keeps the analyses reproducible without any external service.
"""

from __future__ import annotations

import csv
import io
import math
from bisect import bisect_left
from dataclasses import dataclass

__all__ = [
    "MATCH_CONFIDENCE_FLOOR",
    "AuditRecord",
    "PairedRecord",
    "FARCurvePoint",
    "AuditFormatError",
    "parse_audit_csv",
    "serialize_audit_csv",
    "parse_paired_csv",
    "false_alarm_rate",
    "far_curve",
    "default_criteria",
    "paired_discrimination",
    "jnd_fraction",
    "extrapolate_jnd_fraction",
    "curve_to_csv",
    "build_report",
]

#: Recognizers in this data model only report a match when confidence > 0.50.
MATCH_CONFIDENCE_FLOOR = 0.5

_AUDIT_HEADER = ["image_id", "matched", "identity", "confidence"]
_PAIRED_HEADER = ["identity", "synthetic_confidence", "real_confidence"]


class AuditFormatError(ValueError):
    """Malformed audit data; carries (line_number, message) diagnostics."""

    def __init__(self, problems: list[tuple[int | None, str]]):
        self.problems = problems
        lines = [f"line {ln}: {msg}" if ln is not None else msg for ln, msg in problems]
        super().__init__("; ".join(lines))


@dataclass(frozen=True)
class AuditRecord:
    """One recognizer decision for one synthetic image."""

    image_id: str
    matched: bool
    identity: str | None = None
    confidence: float | None = None

    def __post_init__(self):
        if not self.image_id:
            raise ValueError("image_id must be non-empty")
        if self.matched:
            if not self.identity:
                raise ValueError(f"{self.image_id}: matched record requires an identity")
            if self.confidence is None or not (
                MATCH_CONFIDENCE_FLOOR <= self.confidence <= 1.0
            ):
                raise ValueError(
                    f"{self.image_id}: matched confidence must lie in "
                    f"[{MATCH_CONFIDENCE_FLOOR}, 1], got {self.confidence!r}"
                )
        else:
            if self.identity is not None or self.confidence is not None:
                raise ValueError(
                    f"{self.image_id}: non-match records carry no identity or confidence"
                )


@dataclass(frozen=True)
class PairedRecord:
    """Recognizer confidences for a (synthetic false alarm, real photo) pair."""

    identity: str
    synthetic_confidence: float
    real_confidence: float

    def __post_init__(self):
        if not self.identity:
            raise ValueError("identity must be non-empty")
        for name in ("synthetic_confidence", "real_confidence"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValueError(f"{self.identity}: {name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class FARCurvePoint:
    criterion: float
    rate: float
    standard_error: float

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "rate": self.rate,
            "standard_error": self.standard_error,
        }


def _parse_rows(stream, expected_header: list[str]):
    """Yield (line_number, fields) for each data row, enforcing the header."""
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise AuditFormatError([(None, "empty file (missing header)")]) from None
    if header != expected_header:
        raise AuditFormatError(
            [(reader.line_num, f"header must be exactly {','.join(expected_header)}, "
                               f"got {','.join(header)}")]
        )
    for fields in reader:
        if not fields:
            continue  # blank line
        yield reader.line_num, fields


def parse_audit_csv(stream) -> list[AuditRecord]:
    """Parse and validate recognizer-output records.

    ``stream`` is any iterable of text lines (an open file). All invalid rows
    are collected and reported together, each with its line number.
    """
    records: list[AuditRecord] = []
    problems: list[tuple[int | None, str]] = []
    for line_num, fields in _parse_rows(stream, _AUDIT_HEADER):
        if len(fields) != 4:
            problems.append((line_num, f"expected 4 fields, got {len(fields)}"))
            continue
        image_id, matched_text, identity, confidence_text = (f.strip() for f in fields)
        matched_text = matched_text.lower()
        if matched_text not in ("true", "false"):
            problems.append((line_num, f"matched must be true or false, got {fields[1]!r}"))
            continue
        confidence = None
        if confidence_text:
            try:
                confidence = float(confidence_text)
            except ValueError:
                problems.append((line_num, f"bad confidence {confidence_text!r}"))
                continue
        try:
            records.append(
                AuditRecord(
                    image_id=image_id,
                    matched=matched_text == "true",
                    identity=identity or None,
                    confidence=confidence,
                )
            )
        except ValueError as exc:
            problems.append((line_num, str(exc)))
    if problems:
        raise AuditFormatError(problems)
    if not records:
        raise AuditFormatError([(None, "no data rows")])
    return records


def serialize_audit_csv(records: list[AuditRecord]) -> str:
    """Inverse of :func:`parse_audit_csv`; lossless for valid records."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_AUDIT_HEADER)
    for r in records:
        writer.writerow([
            r.image_id,
            "true" if r.matched else "false",
            r.identity or "",
            repr(r.confidence) if r.confidence is not None else "",
        ])
    return buf.getvalue()


def parse_paired_csv(stream) -> list[PairedRecord]:
    """Parse and validate paired real-versus-synthetic confidences."""
    pairs: list[PairedRecord] = []
    problems: list[tuple[int | None, str]] = []
    for line_num, fields in _parse_rows(stream, _PAIRED_HEADER):
        if len(fields) != 3:
            problems.append((line_num, f"expected 3 fields, got {len(fields)}"))
            continue
        identity, syn_text, real_text = (f.strip() for f in fields)
        try:
            pairs.append(
                PairedRecord(
                    identity=identity,
                    synthetic_confidence=float(syn_text),
                    real_confidence=float(real_text),
                )
            )
        except ValueError as exc:
            problems.append((line_num, str(exc)))
    if problems:
        raise AuditFormatError(problems)
    if not pairs:
        raise AuditFormatError([(None, "no data rows")])
    return pairs


def false_alarm_rate(records: list[AuditRecord]) -> dict:
    """Fraction of records positively matched, with binomial Wald SE."""
    n = len(records)
    if n < 1:
        raise ValueError("false_alarm_rate requires at least one record")
    k = sum(1 for r in records if r.matched)
    rate = k / n
    return {
        "rate": rate,
        "standard_error": math.sqrt(rate * (1.0 - rate) / n),
        "k": k,
        "n": n,
    }


def default_criteria(steps: int = 11) -> list[float]:
    """Evenly spaced criterion levels spanning [0.5, 1.0].

    Matches below 0.50 do not exist under the recognizer's match floor, so
    the curve starts there.
    """
    if steps != int(steps) or int(steps) < 2:
        raise ValueError(f"steps must be an integer >= 2, got {steps!r}")
    steps = int(steps)
    return [
        MATCH_CONFIDENCE_FLOOR + (1.0 - MATCH_CONFIDENCE_FLOOR) * i / (steps - 1)
        for i in range(steps)
    ]


def far_curve(records: list[AuditRecord], criteria: list[float]) -> list[FARCurvePoint]:
    """False-alarm rate at each criterion level: matched and confidence >= t.

    The rate is non-increasing in the criterion by construction.
    """
    if not records:
        raise ValueError("far_curve requires at least one record")
    if not criteria:
        raise ValueError("far_curve requires at least one criterion")
    previous = None
    for t in criteria:
        if not (math.isfinite(t) and 0.0 <= t <= 1.0):
            raise ValueError(f"criteria must lie in [0, 1], got {t!r}")
        if previous is not None and t < previous:
            raise ValueError(f"criteria must be ascending, got {t} after {previous}")
        previous = t
    n = len(records)
    confidences = sorted(r.confidence for r in records if r.matched)
    points = []
    for t in criteria:
        k = len(confidences) - bisect_left(confidences, t)
        rate = k / n
        points.append(
            FARCurvePoint(
                criterion=t,
                rate=rate,
                standard_error=math.sqrt(rate * (1.0 - rate) / n),
            )
        )
    return points


def paired_discrimination(pairs: list[PairedRecord]) -> dict:
    """Proportion of pairs where the real photo outscores the synthetic one.

    Ties count as one half, the usual two-alternative forced-choice
    convention. Only the ordering of the two confidences matters.
    """
    if not pairs:
        raise ValueError("paired_discrimination requires at least one pair")
    wins = 0.0
    for p in pairs:
        if p.real_confidence > p.synthetic_confidence:
            wins += 1.0
        elif p.real_confidence == p.synthetic_confidence:
            wins += 0.5
    return {"proportion_real_wins": wins / len(pairs), "n_pairs": len(pairs)}


def jnd_fraction(far: float, discrimination: float) -> float:
    """Fraction of synthetic samples both falsely matched and preferred over
    the true photo — i.e. effectively within one JND of a real identity."""
    for name, value in (("far", far), ("discrimination", discrimination)):
        if not (math.isfinite(value) and 0.0 <= value <= 1.0):
            raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return far * (1.0 - discrimination)


def extrapolate_jnd_fraction(jnd_frac: float, gallery_size: float,
                             target_population: float) -> float:
    """Scale a within-1-JND fraction from a gallery to a larger population.

    Linear (Poisson-thinning) scaling, clamped at 1; only meaningful while
    the scaled fraction stays well below 1.
    """
    if not (math.isfinite(jnd_frac) and 0.0 <= jnd_frac <= 1.0):
        raise ValueError(f"jnd_frac must lie in [0, 1], got {jnd_frac!r}")
    for name, value in (("gallery_size", gallery_size), ("target_population", target_population)):
        if not (math.isfinite(value) and value > 0.0):
            raise ValueError(f"{name} must be a finite positive real, got {value!r}")
    return min(1.0, jnd_frac * (target_population / gallery_size))


def curve_to_csv(points: list[FARCurvePoint]) -> str:
    """Plot-ready CSV export of a false-alarm curve."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["criterion", "rate", "standard_error"])
    for p in points:
        writer.writerow([repr(p.criterion), repr(p.rate), repr(p.standard_error)])
    return buf.getvalue()


def build_report(records: list[AuditRecord],
                 pairs: list[PairedRecord] | None = None,
                 criteria: list[float] | None = None,
                 gallery_size: float | None = None,
                 target_population: float | None = None,
                 target_label: str | None = None) -> dict:
    """Assemble the full audit report.

    Discrimination, jnd_fraction and the extrapolation sections appear only
    when their inputs are supplied.
    """
    if criteria is None:
        criteria = default_criteria()
    far = false_alarm_rate(records)
    report: dict = {
        "far": far,
        "curve": [p.to_dict() for p in far_curve(records, criteria)],
        "notes": [
            "standard errors are binomial Wald estimates sqrt(p*(1-p)/n)",
        ],
    }
    if pairs is not None:
        discrimination = paired_discrimination(pairs)
        report["discrimination"] = discrimination
        report["jnd_fraction"] = jnd_fraction(
            far["rate"], discrimination["proportion_real_wins"]
        )
        report["notes"].append(
            "jnd_fraction = far.rate * (1 - proportion_real_wins), "
            "computed from unrounded values"
        )
        if gallery_size is not None and target_population is not None:
            report["extrapolation"] = {
                "gallery_size": gallery_size,
                "target_population": target_population,
                "target_label": target_label,
                "fraction": extrapolate_jnd_fraction(
                    report["jnd_fraction"], gallery_size, target_population
                ),
            }
            report["notes"].append(
                "extrapolation scales jnd_fraction linearly with population; "
                "valid only while the result stays far below 1"
            )
    return report
