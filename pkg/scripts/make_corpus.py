"""Assemble a ~3 MB public-domain English prose file for the expansion-ratio runs.

The King James Bible text shipped inside the ``pythonbible-kjv`` wheel is used
because it is reachable through an ordinary package index. The wheel is
downloaded with pip unless ``--wheel`` points at a local copy.

    python scripts/make_corpus.py -o /tmp/corpus/kjv3mb.txt
"""

import argparse
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

MEMBER = "pythonbible_kjv/plain_text_readers_bible.py"


def fetch_wheel(dest: Path) -> Path:
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "pythonbible-kjv==0.0.2", "-d", str(dest)],
        check=True,
    )
    return next(dest.glob("pythonbible_kjv-*.whl"))


def extract_text(wheel: Path) -> str:
    source = zipfile.ZipFile(wheel).read(MEMBER).decode("utf-8")
    start = source.index('"""') + 3
    body = source[start:source.index('"""', start)]
    # square brackets mark words supplied by the translators; keep the words
    return body.replace("[", "").replace("]", "")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-o", "--output", required=True)
    ap.add_argument("--wheel", type=Path, default=None)
    ap.add_argument("--size", type=int, default=3_000_000, help="maximum characters to keep")
    args = ap.parse_args(argv)

    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel or fetch_wheel(Path(tmp))
        text = extract_text(wheel)
    text = text[: args.size]
    text = text[: text.rindex("\n") + 1]
    Path(args.output).parent.mkdir(parents=True, exist_ok=True)
    Path(args.output).write_text(text, encoding="utf-8")
    print(f"wrote {len(text):,} characters to {args.output}")


if __name__ == "__main__":
    main()
