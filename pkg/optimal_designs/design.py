"""
Exact n-run designs stored as candidate indices, with their replication structure.

Design files record one row per distinct treatment combination plus a
``reps`` column. Rows keep the order in which points first appear in the
design, so loading a file and saving it again reproduces it byte for byte.
"""
import json
import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from optimal_designs.exceptions import DesignFileError
from optimal_designs.model import CandidateSet, ModelSpec, model_matrix

log = logging.getLogger(__name__)

REPS_COLUMN = "reps"


@dataclass(frozen=True)
class Design:
    """
    A multiset of ``n`` candidate indices bound to a candidate set.
    """

    candidates: CandidateSet
    runs: Tuple[int, ...]

    def __post_init__(self):
        runs = tuple(int(index) for index in self.runs)
        if not runs:
            raise ValueError("A design needs at least one run.")
        if min(runs) < 0 or max(runs) >= len(self.candidates):
            raise ValueError(f"Run indices must lie in 0..{len(self.candidates) - 1}.")
        object.__setattr__(self, "runs", runs)

    @classmethod
    def from_counts(cls, candidates, counts):
        """
        Build a design from a replicate count per candidate index.
        """
        counts = np.asarray(counts, dtype=int)
        return cls(candidates, tuple(np.repeat(np.arange(counts.size), counts)))

    @classmethod
    def from_points(cls, candidates, points, reps=None):
        """
        Build a design from coordinates, optionally with a replicate count per point.

        Raises:
            DesignFileError: naming the first point outside the candidate set.
        """
        reps = [1] * len(points) if reps is None else list(reps)
        if len(reps) != len(points):
            raise DesignFileError("points and reps have different lengths.")
        runs = []
        for row, (point, count) in enumerate(zip(points, reps), start=1):
            index = candidates.index_of(point)
            if index is None:
                raise DesignFileError(f"point {tuple(point)} is not in the candidate set", row=row)
            if int(count) != count or count < 1:
                raise DesignFileError(f"replicate count must be a positive integer, got {count}", row=row)
            runs.extend([index] * int(count))
        return cls(candidates, tuple(runs))

    @property
    def n(self):
        return len(self.runs)

    @property
    def counts(self):
        """
        Replicate count per candidate index, length ``N``.
        """
        return np.bincount(np.asarray(self.runs), minlength=len(self.candidates))

    @property
    def points(self):
        return self.candidates.array[list(self.runs)]

    def with_run(self, position, candidate_index):
        """
        Copy of the design with run ``position`` moved to ``candidate_index``.
        """
        runs = list(self.runs)
        runs[position] = candidate_index
        return Design(self.candidates, tuple(runs))

    def sorted(self):
        return Design(self.candidates, tuple(sorted(self.runs)))


def replication(design: Design) -> Dict[int, int]:
    """
    Replicate count for every distinct candidate index of the design, in first-appearance order.
    """
    return dict(Counter(design.runs))


def pure_error_df(design: Design) -> int:
    """
    Pure-error degrees of freedom ``n`` minus the number of distinct points.
    """
    return design.n - len(set(design.runs))


def design_matrix(design: Design, model: ModelSpec):
    """
    Model matrix of the design's runs, in run order.
    """
    return model_matrix(design.points, model)


def info_matrix(design: Design, model: ModelSpec):
    """
    Information matrix ``X'X`` accumulated over distinct points weighted by replication.
    """
    table = replication(design)
    indices = list(table)
    rows = model_matrix(design.candidates.array[indices], model)
    weights = np.array([table[index] for index in indices], dtype=float)
    return rows.T @ (weights[:, None] * rows)


def df_efficiency(design: Design, model: ModelSpec = None):  # pylint: disable=unused-argument
    """
    Share ``(n - d) / n`` of the runs left for estimating treatment effects.
    """
    return (design.n - pure_error_df(design)) / design.n


def design_frame(design: Design):
    """
    ``pandas.DataFrame`` with one row per distinct point and a ``reps`` column.
    """
    table = replication(design)
    columns = [f"x{position}" for position in range(1, design.candidates.factors.count + 1)]
    rows = [list(design.candidates.points[index]) + [count] for index, count in table.items()]
    frame = pd.DataFrame(rows, columns=columns + [REPS_COLUMN])
    for column in columns:
        if np.all(np.equal(np.mod(frame[column], 1), 0)):
            frame[column] = frame[column].astype(int)
    frame[REPS_COLUMN] = frame[REPS_COLUMN].astype(int)
    return frame


def save_design(design: Design, path):
    """
    Write ``design`` to ``path`` as CSV or, for a ``.json`` suffix, as JSON.
    """
    path = Path(path)
    frame = design_frame(design)
    try:
        if path.suffix.lower() == ".json":
            payload = {
                "factors": design.candidates.factors.count,
                "points": frame.drop(columns=[REPS_COLUMN]).values.tolist(),
                "reps": frame[REPS_COLUMN].tolist(),
            }
            path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf8")
        else:
            frame.to_csv(path, index=False, lineterminator="\n")
    except OSError as error:
        raise DesignFileError(f"cannot write design file {path}: {error}") from error
    log.debug("Wrote %d-run design to %s", design.n, path)
    return path


def load_design(path, candidates: CandidateSet) -> Design:
    """
    Read a CSV or JSON design file and normalize it to candidate indices.

    Raises:
        DesignFileError: on unreadable files, missing columns or unknown points.
    """
    path = Path(path)
    try:
        if path.suffix.lower() == ".json":
            payload = json.loads(path.read_text(encoding="utf8"))
            points = payload["points"]
            reps = payload.get("reps")
        else:
            frame = pd.read_csv(path)
            if REPS_COLUMN not in frame.columns:
                raise DesignFileError(f"design file {path} has no '{REPS_COLUMN}' column")
            factor_columns = [column for column in frame.columns if column != REPS_COLUMN]
            points = frame[factor_columns].values.tolist()
            reps = frame[REPS_COLUMN].tolist()
    except (OSError, ValueError, KeyError) as error:
        raise DesignFileError(f"cannot read design file {path}: {error}") from error
    if not points:
        raise DesignFileError(f"design file {path} has no runs")
    if len(points[0]) != candidates.factors.count:
        raise DesignFileError(
            f"design file {path} has {len(points[0])} factor columns, expected {candidates.factors.count}"
        )
    return Design.from_points(candidates, points, reps)
