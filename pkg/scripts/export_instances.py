"""Write the named fixtures to instances/*.json in the CLI instance format."""

from __future__ import annotations

import argparse
from pathlib import Path

from flowframing.cli_io import dumps, instance_document
from flowframing.fixtures import FIXTURES, blowup, k33


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "instances"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    docs = {name: instance_document(make()) for name, make in FIXTURES.items()}
    dag, a = blowup()
    docs["blowup"] = instance_document(dag, a)
    docs["k33"] = instance_document(k33())
    for name, doc in sorted(docs.items()):
        (out / f"{name}.json").write_text(dumps(doc), encoding="utf-8")
        print(out / f"{name}.json")


if __name__ == "__main__":
    main()
