"""Command-line interface: ``frolicher <command> <model> [options]``.

Exit codes: 0 success, 1 validation or page-property failure, 2 obstruction
(only with ``--fail-on-obstruction``), 64 malformed input or usage.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from . import report as rp
from .complex import ModelError, load_model, resolve_model_path, validate
from .deformation import KuranishiConfig, PreconditionError
from .field import FormatError
from .hodge import MetricContext, SolvabilityError
from .spectral import page_ddbar

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_OBSTRUCTED = 2
EXIT_USAGE = 64

CACHE_ENV = "FROLICHER_CACHE_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _directions(text: str):
    if not text:
        return None
    out = []
    for part in text.split(","):
        part = part.strip().lstrip("t")
        if not part.isdigit() or int(part) < 1:
            raise UsageError(f"bad direction {part!r}; use 1-based indices such as 1,3 or t1,t3")
        out.append(int(part) - 1)
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="frolicher", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"frolicher {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("model", help="model JSON file or corpus name (e.g. iwasawa3)")
        p.add_argument("--json", action="store_true", help="print the canonical JSON report")
        p.add_argument("--timing", action="store_true", help="append wall time (outside the payload)")
        return p

    add("validate", "check the double-complex identities")
    p = add("pages", "dimensions of the Frölicher pages")
    p.add_argument("--max-page", type=int, default=4)
    p = add("check", "decide the page-(r-1)-∂∂̄ property from page r")
    p.add_argument("--page", type=int, default=1)
    p = add("bca", "Bott-Chern and Aeppli tables at page r")
    p.add_argument("--page", type=int, default=1)
    add("essential", "ω-lift of E_2^{n-1,1} and the essential deformation space")
    p = add("condition11", "double-contraction hypothesis over spanning pairs")
    p.add_argument("--all-exact", action="store_true",
                   help="use all of Im ∂ instead of its ∂̄-closed part")
    p = add("kuranishi", "formal Kuranishi iteration with obstruction detection")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--mode", choices=("full", "essential"), default="full")
    p.add_argument("--directions", default="", help="comma-separated 1-based parameter indices")
    p.add_argument("--fail-on-obstruction", action="store_true")
    return ap


def _cache_path(k, command, params):
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    key = json.dumps([__version__, k.source_hash, command, params], sort_keys=True)
    return Path(root) / f"{hashlib.sha256(key.encode()).hexdigest()}.json"


def _compute(args, k):
    """Return ``(parameters, result, exit_code)`` for one command."""
    cmd = args.command
    if cmd == "validate":
        res = rp.validate_payload(k)
        return {}, res, EXIT_OK if res["ok"] else EXIT_FAIL
    if not validate(k).ok:
        raise ModelError("model fails validation; run the validate command for details")
    if cmd == "pages":
        if args.max_page < 1:
            raise UsageError("--max-page must be at least 1")
        return {"max_page": args.max_page}, rp.pages_payload(k, args.max_page), EXIT_OK
    if cmd in ("check", "bca"):
        if args.page < 1:
            raise UsageError("--page must be at least 1")
        if cmd == "bca":
            return {"page": args.page}, rp.bca_payload(k, args.page), EXIT_OK
        res = rp.check_payload(k, args.page)
        return {"page": args.page}, res, EXIT_OK if res["holds"] else EXIT_FAIL
    if cmd == "condition11":
        return ({"all_exact": args.all_exact},
                rp.condition11_payload(k, dbar_closed_only=not args.all_exact), EXIT_OK)
    ctx = MetricContext(k)
    if cmd == "essential":
        if not page_ddbar(k, 2).holds:
            return {}, {"error": "model is not page-1-∂∂̄; ω-lifts are not available",
                        "page1_ddbar": False}, EXIT_FAIL
        return {}, rp.essential_payload(ctx), EXIT_OK
    if cmd == "kuranishi":
        dirs = _directions(args.directions)
        try:
            cfg = KuranishiConfig(order=args.order, mode=args.mode, directions=dirs)
        except ValueError as e:
            raise UsageError(str(e)) from None
        params = {"order": args.order, "mode": args.mode,
                  "directions": [d + 1 for d in dirs] if dirs else None}
        if args.mode == "essential" and not page_ddbar(k, 2).holds:
            return params, {"error": "model is not page-1-∂∂̄; essential directions are undefined"}, EXIT_FAIL
        try:
            res, series = rp.kuranishi_payload(ctx, cfg)
        except ValueError as e:
            if "out of range" not in str(e):
                raise
            raise UsageError(str(e)) from None
        code = EXIT_OBSTRUCTED if (series.obstruction and args.fail_on_obstruction) else EXIT_OK
        return params, res, code
    raise UsageError(f"unknown command {cmd}")


_RENDER = {
    "validate": rp.render_validate,
    "pages": rp.render_pages,
    "check": rp.render_check,
    "bca": rp.render_bca,
    "essential": rp.render_essential,
    "condition11": rp.render_condition11,
    "kuranishi": rp.render_kuranishi,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # --help, --version and usage errors
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    t0 = time.perf_counter()
    try:
        path = resolve_model_path(args.model)
        k = load_model(path)
        params, result, code = None, None, None
        cache = None
        if args.command not in ("validate",):
            probe = {k_: v for k_, v in vars(args).items() if k_ not in ("json", "timing", "model")}
            cache = _cache_path(k, args.command, probe)
            if cache is not None and cache.exists():
                params, result, code = json.loads(cache.read_text(encoding="utf-8"))
        if result is None:
            params, result, code = _compute(args, k)
            if cache is not None:
                cache.parent.mkdir(parents=True, exist_ok=True)
                cache.write_text(json.dumps([params, result, code], sort_keys=True, ensure_ascii=False),
                                 encoding="utf-8")
    except FileNotFoundError as e:
        print(f"frolicher: no such model: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, ModelError, UsageError) as e:
        print(f"frolicher: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SolvabilityError, PreconditionError) as e:
        print(f"frolicher: {e}", file=sys.stderr)
        return EXIT_FAIL
    elapsed = time.perf_counter() - t0
    if args.json:
        doc = rp.run_report(k, path.name, args.command, params, result)
        sys.stdout.write(rp.canonical_json(doc))
    else:
        print(f"{k.name} ({path.name}): {args.command}")
        print(_RENDER[args.command](result) if "error" not in result else result["error"])
    if args.timing:
        print(f"wall time: {elapsed:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
