"""Candidate population sizes and face-dataset reference counts.

How many entities could a synthetic portrait coincidentally match? The
builtin estimates cover the currently living, everyone who has ever lived,
and a Copernican extrapolation to everyone who ever will — each vastly larger
than the identity counts of the image sets generators are trained on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "PopulationEstimate",
    "DatasetInfo",
    "builtin_estimates",
    "get_estimate",
    "builtin_datasets",
    "copernican_total",
    "fold_ratio",
    "familiarity_stats",
    "DEFAULT_KNOWN_FACES",
]

#: Average number of faces a person can recall or recognize.
DEFAULT_KNOWN_FACES = 5000.0


@dataclass(frozen=True)
class PopulationEstimate:
    label: str
    count: float
    provenance: str

    def __post_init__(self):
        if not (math.isfinite(self.count) and self.count > 0.0):
            raise ValueError(f"count must be a finite positive real, got {self.count!r}")

    def to_dict(self) -> dict:
        return {"label": self.label, "count": self.count, "provenance": self.provenance}


@dataclass(frozen=True)
class DatasetInfo:
    """A face dataset and an upper bound on the identities it contains.

    ``approximate`` flags counts only known to order of magnitude.
    """

    name: str
    image_count: int | None
    identity_count_upper_bound: int | None
    approximate: bool = False

    def __post_init__(self):
        if (
            self.image_count is not None
            and self.identity_count_upper_bound is not None
            and self.identity_count_upper_bound > self.image_count
        ):
            raise ValueError(
                f"{self.name}: identity bound {self.identity_count_upper_bound} "
                f"exceeds image count {self.image_count}"
            )

    def reference_count(self) -> int:
        """Count used in fold-ratio comparisons: images if known, else identities."""
        if self.image_count is not None:
            return self.image_count
        if self.identity_count_upper_bound is not None:
            return self.identity_count_upper_bound
        raise ValueError(f"{self.name}: no counts recorded")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "image_count": self.image_count,
            "identity_count_upper_bound": self.identity_count_upper_bound,
            "approximate": self.approximate,
        }


_ESTIMATES = (
    PopulationEstimate(
        label="living",
        count=7.8e9,
        provenance="global demographic estimate of the world population, 2020",
    ),
    PopulationEstimate(
        label="ever_lived",
        count=1.0e11,
        provenance="cumulative number of humans ever born "
        "(Population Reference Bureau estimate)",
    ),
    PopulationEstimate(
        label="ever_will_live_median",
        count=2.0e11,
        provenance="median of the Copernican self-location extrapolation "
        "applied to the ever-born count",
    ),
)

_DATASETS = (
    DatasetInfo(name="FFHQ", image_count=70_000, identity_count_upper_bound=70_000),
    DatasetInfo(name="CelebA", image_count=None, identity_count_upper_bound=10_177),
    DatasetInfo(name="LFW", image_count=None, identity_count_upper_bound=10_000, approximate=True),
)


def builtin_estimates() -> list[PopulationEstimate]:
    """The three builtin candidate values for the total entity count."""
    return list(_ESTIMATES)


def get_estimate(label: str) -> PopulationEstimate:
    for est in _ESTIMATES:
        if est.label == label:
            return est
    known = ", ".join(e.label for e in _ESTIMATES)
    raise ValueError(f"unknown population label {label!r} (known: {known})")


def builtin_datasets() -> list[DatasetInfo]:
    """Reference face datasets used to train portrait generators."""
    return list(_DATASETS)


def copernican_total(past_count: float, rank_quantile: float) -> float:
    """Total population exceeded with probability ``rank_quantile``.

    Under a uniform self-location prior — our birth rank is not privileged
    among all who will ever live — observing ``past_count`` births implies
    the eventual total exceeds past_count / q with probability q. The median
    (q = 0.5) doubles the past count.
    """
    past_count = float(past_count)
    rank_quantile = float(rank_quantile)
    if not (math.isfinite(past_count) and past_count > 0.0):
        raise ValueError(f"past_count must be a finite positive real, got {past_count!r}")
    if not (math.isfinite(rank_quantile) and 0.0 < rank_quantile <= 1.0):
        raise ValueError(f"rank_quantile must lie in (0, 1], got {rank_quantile!r}")
    return past_count / rank_quantile


def fold_ratio(population: float, dataset_count: float) -> float:
    """How many times larger a population is than a dataset."""
    population = float(population)
    dataset_count = float(dataset_count)
    if not (math.isfinite(population) and population > 0.0):
        raise ValueError(f"population must be a finite positive real, got {population!r}")
    if not (math.isfinite(dataset_count) and dataset_count > 0.0):
        raise ValueError(f"dataset_count must be a finite positive real, got {dataset_count!r}")
    return population / dataset_count


def familiarity_stats(population: float, known_faces: float = DEFAULT_KNOWN_FACES) -> dict:
    """Fraction of a population the average person is familiar with."""
    population = float(population)
    known_faces = float(known_faces)
    if not (math.isfinite(population) and population > 0.0):
        raise ValueError(f"population must be a finite positive real, got {population!r}")
    if not (math.isfinite(known_faces) and known_faces > 0.0):
        raise ValueError(f"known_faces must be a finite positive real, got {known_faces!r}")
    return {"known_count": known_faces, "familiar_fraction": known_faces / population}
