"""File output: delimited tables, JSON, run manifests and figures."""

from __future__ import annotations

import csv
import hashlib
import json
import platform
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import __version__  # noqa: E402


def fmt(value) -> str:
    """CSV cell text; floats carry 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text if text.endswith("\n") else text + "\n")
    return path


def sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None = None
    version: str = __version__
    duration_s: float = 0.0
    outputs: dict[str, str] = field(default_factory=dict)
    python: str = platform.python_version()

    def add(self, path: Path) -> None:
        self.outputs[Path(path).name] = sha256(path)

    def write(self, directory: Path) -> Path:
        return write_text(Path(directory) / "manifest.json", json.dumps(asdict(self), indent=1, sort_keys=True))


_STYLE = {
    "font.size": 10,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.4,
    "legend.frameon": False,
    "svg.hashsalt": "bellrand",
    "svg.fonttype": "none",
}


def plot_figure2(rows, path: Path) -> Path:
    """Single-copy and multi-copy randomness against the number of Bob settings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ns = [r.n for r in rows]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(5.5, 3.8))
        ax.plot(ns, [r.single_copy_bits for r in rows], "o-", color="tab:red", ms=4, label="a: single copy")
        ax.plot(
            ns,
            [r.multi_copy_bits for r in rows],
            "^--",
            color="tab:blue",
            ms=5,
            label=r"b: $\lfloor n/2 \rfloor$ copies",
        )
        ax.set_xlabel("Number of Bob's measurement settings $n$")
        ax.set_ylabel("Certified randomness (bits)")
        ax.set_xticks(ns if len(ns) <= 12 else ns[::2])
        ax.legend(loc="lower right")
        fig.tight_layout()
        fig.savefig(path, format=path.suffix.lstrip(".") or "svg", metadata={"Date": None})
        plt.close(fig)
    return path
