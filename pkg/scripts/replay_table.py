"""Print the 32 reference encodings of the nine-state chain next to ours."""

import argparse

from markovstego.codec import encode_fixed
from markovstego.fixture import REFERENCE_ROWS, fixture_model, names


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--precision", type=int, default=None,
                    help="window width; omit for exact arithmetic")
    args = ap.parse_args(argv)

    model = fixture_model()
    matches = 0
    for bits, n, expected in REFERENCE_ROWS:
        got = names(encode_fixed(model, int(bits, 2), n, precision=args.precision))
        ok = got == expected
        matches += ok
        print(f"{bits:>5}  {' '.join(got):<36} {'' if ok else 'expected ' + ' '.join(expected)}")
    print(f"{matches}/{len(REFERENCE_ROWS)} rows match")
    return 0 if matches == len(REFERENCE_ROWS) else 1


if __name__ == "__main__":
    raise SystemExit(main())
