import csv
import io
import math
import xml.etree.ElementTree as ET
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from ctxlogic.bitvec import band, bnot, is_zero
from ctxlogic.imager import (
    CSV_HEADER,
    CoordinateRow,
    CoordinateTable,
    coordinate,
    export_csv,
    export_svg,
    layout,
    svg_point,
)
from ctxlogic.pipeline import TROLLEY, captions_for, image_text, pick_axes, write_images
from ctxlogic.reasoner import KnowledgeBase, assert_atom

GOLDEN = Path(__file__).parent / "data" / "golden"
SVG = "{http://www.w3.org/2000/svg}"


def chain_kb(seed=0, kappa=16384):
    kb = KnowledgeBase(kappa=kappa, seed=seed)
    assert_atom(kb, "n:[a<=b]")
    assert_atom(kb, "n:[b<=c]")
    return kb


def test_chain_coordinates_are_ordered():
    kb = chain_kb()
    assert coordinate(kb, "n", "a") <= coordinate(kb, "n", "b") <= coordinate(kb, "n", "c")


def test_emptied_support_reads_zero():
    kb = chain_kb()
    assert_atom(kb, "[x * n <= bot]")
    assert coordinate(kb, "n", "x") == 0


def test_unconstrained_symbol_sits_at_half_max():
    kb = KnowledgeBase(kappa=16384, seed=5)
    kb.symbol("n"), kb.symbol("x")
    top = layout(kb, ["n"], ["x"]).maxima["n"]
    # Binomial(top, 1/2)
    assert abs(coordinate(kb, "n", "x") - top / 2) <= 3 * math.sqrt(top / 4)


def test_unknown_symbol_rejected():
    with pytest.raises(KeyError):
        coordinate(KnowledgeBase(kappa=64), "n", "x")
    with pytest.raises(KeyError):
        layout(chain_kb(), ["nope"], ["a"])
    with pytest.raises(ValueError):
        layout(chain_kb(), [], ["a"])


def test_layout_cardinality_and_normalisation():
    kb = chain_kb()
    kb.symbol("m")
    t = layout(kb, ["n", "m"], ["a", "b", "c"])
    assert len(t.rows) == 6
    assert t.dimensions == ["n", "m"] and t.entities == ["a", "b", "c"]
    for r in t.rows:
        assert r.normalized == (Fraction(r.raw, t.maxima[r.dimension]))
        assert 0 <= r.normalized <= 1 and r.adjusted == r.normalized


def test_negative_polarity_flips():
    t = layout(chain_kb(), ["n"], ["a", "c"], polarity={"n": -1})
    for ent in ("a", "c"):
        assert t.value(ent, "n") == 1 - t.value(ent, "n", adjusted=False)
    assert t.value("a", "n") >= t.value("c", "n")


def test_empty_dimension_normalises_to_zero():
    kb = KnowledgeBase(kappa=256)
    assert_atom(kb, "[d <= bot]")
    kb.symbol("x")
    t = layout(kb, ["d"], ["x"])
    assert t.rows[0].normalized == 0


@settings(max_examples=40)
@given(st.integers(0, 2**31), st.sampled_from(["[a <= b]", "[a*n <= b]", "[a <= b+c]"]))
def test_support_inclusion_implies_coordinate_order(seed, text):
    kb = KnowledgeBase(kappa=512, seed=seed)
    assert_atom(kb, text)
    a, b, n = (kb.symbol(x) for x in "abn")
    sa, sb = band(kb.phi, band(n, a)), band(kb.phi, band(n, b))
    if is_zero(band(sa, bnot(sb))):
        assert coordinate(kb, "n", "a") <= coordinate(kb, "n", "b")


def test_empty_table_csv_is_header_only():
    assert export_csv(CoordinateTable()) == CSV_HEADER + "\n"


def test_csv_columns():
    text = export_csv(layout(chain_kb(), ["n"], ["a", "b"]))
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [r["entity"] for r in rows] == ["a", "b"]
    assert all(len(r["normalized"].split(".")[1]) == 6 for r in rows)


def test_svg_point_mapping():
    assert svg_point(Fraction(1, 2), Fraction(1, 2)) == (500.0, 500.0)
    assert svg_point(Fraction(0), Fraction(1)) == (0.0, 0.0)


def test_single_centred_entity():
    half = Fraction(1, 2)
    t = CoordinateTable(
        rows=[CoordinateRow("x", "p", 5, half, half), CoordinateRow("x", "q", 5, half, half)],
        kappa=64,
        maxima={"p": 10, "q": 10},
    )
    root = ET.fromstring(export_svg(t, "p", "q"))
    assert root.get("viewBox") == "0 0 1000 1000"
    (circle,) = root.iter(SVG + "circle")
    assert (circle.get("cx"), circle.get("cy")) == ("500.00", "500.00")
    labels = [e.text for e in root.iter(SVG + "text")]
    assert "x" in labels


def test_svg_errors():
    t = layout(chain_kb(), ["n"], ["a"])
    with pytest.raises(KeyError):
        export_svg(t, "n", "m")
    with pytest.raises(ValueError):
        export_svg(t, "n", "n")


def test_svg_escapes_and_captions():
    kb = chain_kb()
    kb.symbol("m")
    t = layout(kb, ["n", "m"], ["a"])
    root = ET.fromstring(export_svg(t, "n", "m", title="a < b & c", captions={"a": "a (5)"}))
    assert root.find(SVG + "title").text == "a < b & c"
    assert "a (5)" in [e.text for e in root.iter(SVG + "text")]


def test_trolley_images():
    discourse, images = image_text(TROLLEY, 16384, 0)
    assert [img.id for img in images] == ["a", "b"]
    for img, victim in zip(images, ("person", "people")):
        t = img.table
        assert t.raw(victim, "health") == 0
        assert pick_axes(t) == ("c", "health")
        cs = [t.raw(e, "c") for e in img.model.branch.events]
        assert cs == sorted(cs)
        # uninvolved entities sit near the centre
        assert abs(t.value("agent", "health") - Fraction(1, 2)) < Fraction(1, 10)
    assert captions_for(discourse) == {"people": "people (5)"}


def test_trolley_files_match_golden(tmp_path):
    discourse, images = image_text(TROLLEY, 16384, 0)
    paths = write_images(images, "trolley", tmp_path, captions=captions_for(discourse))
    assert sorted(p.name for p in paths) == sorted(p.name for p in GOLDEN.iterdir())
    for p in paths:
        assert p.read_bytes() == (GOLDEN / p.name).read_bytes()


def test_same_inputs_same_bytes(tmp_path):
    out = []
    for k in range(2):
        _, images = image_text(TROLLEY, 4096, 99)
        paths = write_images(images, "t", tmp_path / str(k))
        out.append([p.read_bytes() for p in paths])
    assert out[0] == out[1]
