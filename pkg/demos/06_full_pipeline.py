"""The whole pipeline on the bundled three-language fixture.

extract -> stats -> sample -> preprocess -> learn-bpe -> apply-bpe -> tag,
driven by one JSON config. Rerunning produces a byte-identical tree.
"""

import shutil
import tempfile
from pathlib import Path

from multibridge import load_config, run_pipeline

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "pipeline_fixture"

with tempfile.TemporaryDirectory() as tmp:
    work = Path(tmp) / "run"
    shutil.copytree(FIXTURE, work)
    print("config:", (work / "config.json").read_text())

    report = run_pipeline(load_config(work / "config.json"))

    print("stage summary:")
    for stage, info in report.stages.items():
        print(f"  {stage}: {info}")

    print("\nstatistics table:")
    print((work / "out" / "mined" / "stats.tsv").read_text())

    print("manifest entries:")
    for entry in report.manifest.entries:
        print(f"  {entry.direction.label():>6}  {entry.count:>3} pairs  [{entry.strategy}]")

    final = work / "out" / "prep" / "final"
    sample_file = sorted(final.glob("*.src"))[0]
    print(f"\nfirst two lines of {sample_file.name} (tagged, BPE-segmented, Devanagari-unified):")
    for line in sample_file.read_text().splitlines()[:2]:
        print("   ", line)
