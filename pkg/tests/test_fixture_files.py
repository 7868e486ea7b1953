import json
import pathlib

import pytest

from quasicluster.surface import QuasiTriangulation, named_fixture

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
NAMES = ["mobius:1", "mobius:2", "mobius:3", "mobius:4", "polygon:5",
         "polygon:6", "annulus-crosscap", "mobius-three-arc", "three-boundary"]


@pytest.mark.parametrize("name", NAMES)
def test_shipped_fixture_matches_generator(name):
    path = FIXTURE_DIR / (name.replace(":", "-") + ".json")
    tri = QuasiTriangulation.from_json(json.loads(path.read_text()))
    assert tri.validate() == []
    want = named_fixture(name)
    assert tri.build_quiver().canonical_form() == \
        want.build_quiver().canonical_form()
    assert tri.dumps() == want.dumps()
