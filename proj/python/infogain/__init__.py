"""Value-of-information analysis of decision data.

Results are plain dicts with the same layout as the JSON files written by
the ``infogain`` command-line tool.
"""

from __future__ import annotations

import json
from typing import Iterable, Optional, Sequence, Tuple, Union

from . import _infogain
from ._infogain import InfogainError, IoError, __version__

__all__ = [
    "Study",
    "InfogainError",
    "IoError",
    "render_report",
    "run_cli",
    "synth",
    "__version__",
]

Vars = Union[str, Iterable[str]]


def _names(vars: Vars) -> str:
    if isinstance(vars, str):
        return vars
    names = list(vars)
    return ",".join(names) if names else "none"


class Study:
    """A schema and the dataset it describes."""

    def __init__(self, schema_text: str, csv_text: str):
        self._impl = _infogain.Study(schema_text, csv_text)

    @classmethod
    def from_files(cls, schema_path, data_path) -> "Study":
        study = cls.__new__(cls)
        study._impl = _infogain.Study.from_files(str(schema_path), str(data_path))
        return study

    @property
    def rows(self) -> int:
        return self._impl.rows

    @property
    def signals(self) -> list:
        return self._impl.signals

    @property
    def decisions(self) -> list:
        return self._impl.decisions

    def rational_payoff(self, vars: Vars = "none", alpha: Optional[float] = None) -> float:
        return self._impl.rational_payoff(_names(vars), alpha)

    def gain(self, v1: Vars, ground: Vars = "none", *, alpha: Optional[float] = None,
             cross_fit: bool = False, seed: int = 0) -> dict:
        return json.loads(self._impl.gain(_names(v1), _names(ground), alpha, cross_fit, seed))

    def shapley(self, ground: Vars = "none", signals: Optional[Vars] = None, *, sampled: int = 0,
                seed: int = 0, alpha: Optional[float] = None, cross_fit: bool = False,
                threads: int = 0) -> dict:
        names = "" if signals is None else _names(signals)
        return json.loads(self._impl.shapley(_names(ground), names, sampled, seed, alpha, cross_fit, threads))

    def bootstrap(self, replicates: int = 1000, seed: int = 0, grounds: Sequence[Vars] = (), *,
                  alpha: Optional[float] = None, threads: int = 0) -> dict:
        return json.loads(self._impl.bootstrap(replicates, seed, [_names(g) for g in grounds], alpha, threads))


def render_report(results: Sequence[Union[dict, str]], axis: Optional[Tuple[float, float]] = None) -> str:
    """SVG figure for one or more bootstrap results."""
    docs = [r if isinstance(r, str) else json.dumps(r) for r in results]
    return _infogain.render_report(docs, axis)


def synth(preset: str, rows: int = 4000, seed: int = 0) -> Tuple[str, str]:
    """Schema JSON text and CSV text for a synthetic dataset."""
    return _infogain.synth(preset, rows, seed)


def run_cli(args: Sequence[str]) -> Tuple[int, str, str]:
    """Run the command-line tool in-process; returns (exit code, stdout, stderr)."""
    return _infogain.run_cli([str(a) for a in args])
