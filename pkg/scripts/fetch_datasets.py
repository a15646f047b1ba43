"""Download the networks that are not bundled and convert them to edge lists.

Files land in $MVBACKBONE_DATA (default ~/.cache/mvbackbone) as <name>.edges,
where mvbackbone.datasets finds them.

Sources are Netzschleuder CSV archives (https://networks.skewed.de). The
catalogue ids below were not reachable from the build machine; pass
``--id name=catalogue_id`` or ``--url name=URL`` if one has moved.

    python scripts/fetch_datasets.py windsurfers train_bombing
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from mvbackbone.datasets import BUNDLED, DATASETS, data_dir  # noqa: E402

CATALOGUE = {
    "windsurfers": "windsurfers",
    "train_bombing": "train_terrorists",
    "wiki_science": "wiki_science",
    "unicode_languages": "unicode_languages",
    "cond_mat": "cond_mat",
}
URL = "https://networks.skewed.de/net/{id}/files/{id}.csv.zip"


def convert(archive: bytes) -> list[str]:
    with zipfile.ZipFile(io.BytesIO(archive)) as zf:
        edges_name = next(n for n in zf.namelist() if n.endswith("edges.csv"))
        rows = list(csv.reader(io.TextIOWrapper(zf.open(edges_name), encoding="utf-8")))
    header = [h.strip().lstrip("#").strip() for h in rows[0]]
    weight_col = next((i for i, h in enumerate(header) if h.lower() in ("weight", "value", "count")), None)
    if weight_col is None and len(header) > 2:
        weight_col = 2
    out = []
    for row in rows[1:]:
        u, v = row[0].strip(), row[1].strip()
        w = row[weight_col].strip() if weight_col is not None else "1"
        out.append(f"{u} {v} {w}")
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("names", nargs="*", default=list(CATALOGUE))
    parser.add_argument("--id", action="append", default=[], help="name=catalogue_id override")
    parser.add_argument("--url", action="append", default=[], help="name=URL override")
    args = parser.parse_args(argv)
    ids = dict(CATALOGUE, **dict(x.split("=", 1) for x in args.id))
    urls = dict(x.split("=", 1) for x in args.url)
    target = data_dir()
    target.mkdir(parents=True, exist_ok=True)
    status = 0
    for name in args.names:
        if name in BUNDLED:
            print(f"{name}: bundled, nothing to do")
            continue
        if name not in DATASETS:
            print(f"{name}: unknown dataset", file=sys.stderr)
            status = 2
            continue
        url = urls.get(name) or URL.format(id=ids[name])
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                lines = convert(resp.read())
        except Exception as exc:  # network and format errors alike
            print(f"{name}: failed to fetch {url}: {exc}", file=sys.stderr)
            status = 1
            continue
        path = target / f"{name}.edges"
        path.write_text(f"# {DATASETS[name]} from {url}\n" + "\n".join(lines) + "\n", encoding="utf-8")
        print(f"{name}: {len(lines)} edges -> {path}")
    return status


if __name__ == "__main__":
    sys.exit(main())
