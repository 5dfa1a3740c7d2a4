"""Regenerate the golden TRS files under tests/fixtures."""
from pathlib import Path

from probneed.trs import SYSTEMS, emit_trs

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name in sorted(SYSTEMS):
        (OUT / f"{name}.trs").write_text(emit_trs(name))
        print(f"wrote {name}.trs")


if __name__ == "__main__":
    main()
