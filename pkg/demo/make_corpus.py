"""Materialize the synthetic demo corpus for the CLI walkthrough.

    python3 demo/make_corpus.py [out_dir]
"""

import sys

from voicerag.fixtures import write_demo_corpus


def main() -> int:
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "demo/corpus"
    write_demo_corpus(out_dir, num_docs=6, seed=7)
    print(f"wrote demo corpus to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
