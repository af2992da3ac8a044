"""Regenerate the golden CLI reports under tests/golden/.

Usage: python3 scripts/make_golden.py [--check]

With --check nothing is written; the script exits 1 if any report differs
from the committed file.
"""
import argparse
import contextlib
import io
import json
import sys
from pathlib import Path

from frolicher.cli import main
from frolicher.complex import CORPUS

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

# (file stem, CLI arguments after the model name)
RUNS = [
    ("pages", ["pages"]),
    ("check_page1", ["check", "--page", "1"]),
    ("check_page2", ["check", "--page", "2"]),
    ("bca_page1", ["bca", "--page", "1"]),
    ("essential", ["essential"]),
    ("condition11", ["condition11"]),
    ("kuranishi_full", ["kuranishi", "--mode", "full", "--order", "4"]),
    ("kuranishi_essential", ["kuranishi", "--mode", "essential", "--order", "4"]),
]


def run(model, args):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main([args[0], model, *args[1:], "--json"])
    return code, buf.getvalue()


def manifest():
    out = []
    for model in CORPUS:
        for stem, args in RUNS:
            out.append({"model": model, "args": args, "file": f"{model}/{stem}.json"})
    return out


def main_script(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true")
    opts = ap.parse_args(argv)
    entries = manifest()
    bad = 0
    for e in entries:
        code, text = run(e["model"], e["args"])
        e["exit"] = code
        path = GOLDEN / e["file"]
        if opts.check:
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                print(f"differs: {e['file']}")
                bad += 1
            continue
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        print(f"wrote {e['file']} (exit {code})")
    if not opts.check:
        (GOLDEN / "manifest.json").write_text(json.dumps(entries, indent=2, ensure_ascii=False) + "\n",
                                              encoding="utf-8")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main_script())
