"""Regenerate the golden example reports: python tests/make_fixtures.py"""

import json
from pathlib import Path

from thetaconn.cli import cmd_examples
from thetaconn.report import strip_timing, to_json

GOLDEN = ("g2-subregular", "2a2n:1", "frenkel-gross:G2")
HERE = Path(__file__).parent / "fixtures"


def fixture_path(name):
    return HERE / (name.replace(":", "_") + ".json")


def main():
    HERE.mkdir(exist_ok=True)
    for name in GOLDEN:
        _, doc = cmd_examples(name)
        fixture_path(name).write_text(to_json(strip_timing(doc)))
        print("wrote", fixture_path(name))


if __name__ == "__main__":
    main()
