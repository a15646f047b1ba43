"""Bundled and fetched example networks.

Karate club and Les Miserables ship with the package. The other networks are
downloaded by ``scripts/fetch_datasets.py`` into a data directory given by
the ``MVBACKBONE_DATA`` environment variable (default
``~/.cache/mvbackbone``) and are picked up from there when present.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from .graph import WeightedGraph, load_edge_list

DATASETS = {
    "karate": "Zachary's Karate Club",
    "windsurfers": "Wind Surfers",
    "train_bombing": "Madrid Train Bombing",
    "lesmis": "Les Miserables",
    "wiki_science": "Wiki Science",
    "unicode_languages": "Unicode Languages",
    "cond_mat": "Scientific Collaboration",
}

BUNDLED = ("karate", "lesmis")


def data_dir() -> Path:
    return Path(os.environ.get("MVBACKBONE_DATA", Path.home() / ".cache" / "mvbackbone"))


def dataset_path(name: str) -> Path:
    if name not in DATASETS:
        raise KeyError(f"unknown dataset {name!r}; known: {', '.join(DATASETS)}")
    if name in BUNDLED:
        return Path(str(resources.files("mvbackbone") / "data" / f"{name}.edges"))
    path = data_dir() / f"{name}.edges"
    if not path.exists():
        raise FileNotFoundError(
            f"{DATASETS[name]} is not bundled; run scripts/fetch_datasets.py to place it at {path}"
        )
    return path


def available_datasets() -> list[str]:
    """Bundled datasets plus any fetched ones found in :func:`data_dir`."""
    out = []
    for name in DATASETS:
        try:
            dataset_path(name)
        except FileNotFoundError:
            continue
        out.append(name)
    return out


def load_dataset(name: str) -> WeightedGraph:
    return load_edge_list(dataset_path(name))


def load_karate() -> WeightedGraph:
    return load_dataset("karate")


def load_les_miserables() -> WeightedGraph:
    return load_dataset("lesmis")
