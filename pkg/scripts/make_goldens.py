"""Regenerate the packaged golden outputs from the live code paths.

Run from the repository root after any change that is supposed to alter
canonical output; the diff in git then documents exactly what moved.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from leverlab import reproduce, scheme  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "leverlab" / "golden" / reproduce.GOLDEN_VERSION


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "example1_trace.txt").write_text(reproduce.example1_trace())
    trace, table = reproduce.example2_outputs(jobs=4)
    (OUT / "example2_trace.txt").write_text(trace)
    (OUT / "example2_table1.txt").write_text(table)
    pub, priv = reproduce.EXAMPLE1.build()
    (OUT / "example1_key.pub").write_text(scheme.serialize_public_key(pub))
    (OUT / "example1_key.priv").write_text(scheme.serialize_private_key(priv))
    for f in sorted(OUT.iterdir()):
        print(f"wrote {f.relative_to(OUT.parent.parent.parent.parent)}")


if __name__ == "__main__":
    main()
