"""Rewrite the json golden files from the current CLI output.

Run only after checking that a change in output is intended:
    python tests/golden/regenerate.py
"""

import contextlib
import io
import sys
from pathlib import Path

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE.parent))

from gammalim.cli import main  # noqa: E402
from test_cli import GOLDEN_CASES  # noqa: E402

for stem, argv in GOLDEN_CASES:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        main([*argv, "--format", "json"])
    (HERE / f"{stem}.json").write_text(buf.getvalue())
    print(f"wrote {stem}.json")
