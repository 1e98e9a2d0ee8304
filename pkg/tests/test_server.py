import asyncio

import pytest

from imagesets.map_repr import dump_lut, load_biv, load_lut
from imagesets.server import (analyze_map, build_family_table, families_resource, interpolate_map, list_families,
                              run, verify_map)
from imagesets.theorems import THEOREM_IDS


def call(tool, **kwargs):
    return asyncio.run(tool(**kwargs))


def test_analyze_map():
    result = call(analyze_map, expr="x^3", n=4)
    assert result["status"] == "success"
    report = result["report"]
    assert report["preimage"]["image_size"] == 6
    assert "timing" not in report
    assert len(report["theorems"]) == len(THEOREM_IDS)


def test_analyze_map_errors():
    assert call(analyze_map, expr="x^3", n=4, walsh="half")["status"] == "error"
    assert call(analyze_map)["status"] == "error"
    error = call(analyze_map, family="gold", n=4)
    assert error["status"] == "error"
    assert "k" in error["message"]
    assert call(analyze_map, family="gold", params={"kk": 1})["status"] == "error"


def test_analyze_lut_text(cube16):
    result = call(analyze_map, lut_text=dump_lut(cube16), walsh="none")
    assert result["status"] == "success"
    assert result["report"]["walsh"] is None
    assert result["report"]["provenance"]["source"] == "lut-text"


def test_verify_map_ab_suite():
    result = call(verify_map, expr="x^3 + x^4", n=5, suite=["ab.*"])
    assert result == {
        "status": "success",
        "failures": [],
        "theorems": {"ab.corollary": "pass", "ab.lemma-stats": "pass"},
        "image_size": 16,
        "d": 2,
    }


def test_verify_bivariate_family():
    result = call(verify_map, family="zhou_pott_g", params={"m": 2, "i": 2, "k": 1})
    assert result["status"] == "success"
    assert result["d"] == 2
    assert result["theorems"]["lb.duniform"] == "pass"
    assert result["image_size"] == 6


def test_build_family_table(cube16):
    result = call(build_family_table, family="gold", params={"n": 4, "k": 1})
    assert result["format"] == "lut"
    assert load_lut(result["text"]) == cube16
    assert result["digest"] == cube16.digest()
    biv = call(build_family_table, family="zhou_pott_g", params={"m": 2, "i": 2, "k": 1})
    assert biv["format"] == "biv"
    assert load_biv(biv["text"]).field.n == 4
    assert call(build_family_table, family="gold", params={"power": 3})["status"] == "error"
    assert call(build_family_table, family="kasami", params={"n": 4})["status"] == "error"


def test_interpolate_map(cube16):
    assert call(interpolate_map, expr="x^3", n=4)["polynomial"] == "3:1"
    assert call(interpolate_map, lut_text=dump_lut(cube16))["polynomial"] == "3:1"
    assert call(interpolate_map, expr="x^3")["status"] == "error"


def test_list_families():
    result = call(list_families)
    ids = {fam["id"] for fam in result["families"]}
    assert {"gold", "zhou_pott_f", "named"} <= ids
    assert result["theorems"] == THEOREM_IDS
    assert families_resource() == result["families"]


def test_run_rejects_unknown_transport():
    with pytest.raises(ValueError):
        run("carrier-pigeon")
