"""Run the acceptance suite and print only the per-criterion lines."""
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           str(ROOT / "tests" / "test_acceptance.py")],
                          cwd=ROOT, capture_output=True, text=True)
    # failing tests echo their captured line too; keep the first of each
    lines = list(dict.fromkeys(l for l in proc.stdout.splitlines() if l.startswith("criterion ")))
    print("\n".join(lines))
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
