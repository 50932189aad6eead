"""Text to per-branch coordinate tables and files."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .imager import CoordinateTable, export_csv, export_svg, layout
from .nl import CAUSATION, BranchModel, Discourse, Lexicon, build_branch, parse_text

TROLLEY = (
    "A trolley is moving down a track .\n"
    "If the agent pulls a lever , the trolley will move down a side track killing one person .\n"
    "If the agent does not pull the lever , the trolley will continue down the track killing five people .\n"
)


@dataclass
class BranchImage:
    model: BranchModel
    table: CoordinateTable

    @property
    def id(self) -> str:
        return self.model.branch.id


def image_text(text: str, kappa: int, seed: int, dims=None, lexicon: Lexicon | None = None, polarity=None):
    """Compile ``text`` and lay out every branch; returns ``(discourse, [BranchImage])``."""
    discourse: Discourse = parse_text(text, lexicon)
    entities = [e.symbol for e in discourse.entities]
    out = []
    for branch in discourse.branches:
        model = build_branch(branch, kappa, seed, entities)
        branch_dims = list(dims) if dims else list(branch.dims) or [CAUSATION]
        for d in branch_dims:
            model.kb.symbol(d)
        subjects = list(branch.events) + entities
        subjects += [s.subject for s in branch.scales if s.subject not in subjects]
        out.append(BranchImage(model, layout(model.kb, branch_dims, subjects, polarity)))
    return discourse, out


def pick_axes(table: CoordinateTable, preferred=(CAUSATION, "health")) -> tuple:
    dims = table.dimensions
    x = preferred[0] if preferred[0] in dims else dims[0]
    rest = [d for d in dims if d != x]
    if not rest:
        raise ValueError("an image needs two dimensions")
    y = preferred[1] if preferred[1] in rest else rest[0]
    return x, y


def captions_for(discourse: Discourse) -> dict:
    """Counted noun phrases keep one symbol; the label carries the count."""
    return {e.symbol: f"{e.symbol} ({e.count})" for e in discourse.entities if e.count and e.count > 1}


def write_images(images, stem: str, out_dir, formats=("csv", "svg"), axes=None, captions=None) -> list:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for img in images:
        if "csv" in formats:
            p = out_dir / f"{stem}.{img.id}.csv"
            p.write_text(export_csv(img.table), encoding="utf-8")
            paths.append(p)
        if "svg" in formats:
            x, y = axes or pick_axes(img.table)
            p = out_dir / f"{stem}.{img.id}.svg"
            p.write_text(export_svg(img.table, x, y, title=f"{stem} branch {img.id}", captions=captions), encoding="utf-8")
            paths.append(p)
    return paths
