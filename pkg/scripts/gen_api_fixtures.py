#!/usr/bin/env python3
"""Regenerate tests/fixtures/api_conformance.json.

Run after an intentional API change, then review the diff before committing:
the file is the golden contract the conformance suite replays.
"""

import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from api_fixture_tools import FIXTURE_NAME, run_conformance, seed_store  # noqa: E402

from stemma.config import ServerConfig  # noqa: E402
from stemma.server import serve  # noqa: E402


def main() -> int:
    out_path = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / FIXTURE_NAME
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as td:
        store_path = f"{td}/store"
        ids = seed_store(store_path)
        handle = serve(ServerConfig(storage_path=store_path, port=0))
        try:
            observations = run_conformance(f"http://127.0.0.1:{handle.port}", ids)
        finally:
            handle.shutdown()
    out_path.write_text(json.dumps(observations, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out_path} ({len(observations)} entries)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
