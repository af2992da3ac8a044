"""Report payloads and their human-readable rendering.

Every command produces a JSON-ready payload built only from ints, bools,
strings and lists, with rationals as ``"p/q"`` strings, so that
:func:`canonical_json` is byte-stable across runs.
"""
from __future__ import annotations

import json

from . import __version__
from .complex import DoubleComplex, validate
from .deformation import KuranishiConfig, contract_u_inverse, condition_1_1_suite, kuranishi_iterate, polyvectors
from .field import format_scalar
from .hodge import MetricContext, harmonic1, omega_lift
from .spectral import (
    Er,
    Er_quotient,
    a_table,
    bc_table,
    deRham,
    degeneration_page,
    page_ddbar,
    page_table,
)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def run_report(k: DoubleComplex, model_file: str, command: str, parameters: dict, result: dict) -> dict:
    return {
        "engine": {"name": "frolicher", "version": __version__},
        "model": {"name": k.name, "file": model_file, "sha256": k.source_hash},
        "command": command,
        "parameters": parameters,
        "result": result,
    }


def _grid(k: DoubleComplex, dims: dict) -> list:
    return [[dims[(p, q)] for q in range(k.n + 1)] for p in range(k.n + 1)]


def _entries(dims: dict) -> list:
    return [{"p": p, "q": q, "dim": d} for (p, q), d in sorted(dims.items())]


def render_grid(title: str, grid: list) -> str:
    """Rows are ``p`` (increasing downward), columns ``q``."""
    n = len(grid) - 1
    width = max(2, max(len(str(x)) for row in grid for x in row))
    head = "p\\q " + " ".join(str(q).rjust(width) for q in range(n + 1))
    lines = [title, head]
    for p, row in enumerate(grid):
        lines.append(f"{p:>3} " + " ".join(str(x).rjust(width) for x in row))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# payloads


def validate_payload(k: DoubleComplex) -> dict:
    rep = validate(k)
    return rep.to_dict()


def pages_payload(k: DoubleComplex, max_page: int) -> dict:
    dp = degeneration_page(k)
    last = max(1, min(max_page, dp + 1))
    pages = []
    for r in range(1, last + 1):
        t = page_table(k, r)
        pages.append({"page": r, "grid": _grid(k, t.dims), "entries": _entries(t.dims),
                      "totals": [t.total(d) for d in range(2 * k.n + 1)]})
    b = deRham(k).dims
    return {"pages": pages, "betti": [b[d] for d in range(2 * k.n + 1)], "degeneration_page": dp}


def check_payload(k: DoubleComplex, page: int) -> dict:
    dec = page_ddbar(k, page)
    out = dec.to_dict()
    out["bc_grid"] = _grid(k, bc_table(k, page).dims)
    out["a_grid"] = _grid(k, a_table(k, page).dims)
    return out


def bca_payload(k: DoubleComplex, page: int) -> dict:
    bc = bc_table(k, page)
    a = a_table(k, page)
    n = k.n
    return {
        "page": page,
        "bc_grid": _grid(k, bc.dims),
        "a_grid": _grid(k, a.dims),
        "bc_totals": [bc.total(d) for d in range(2 * n + 1)],
        "a_totals": [a.total(d) for d in range(2 * n + 1)],
    }


def essential_payload(ctx: MetricContext) -> dict:
    k = ctx.k
    n = k.n
    p, q = n - 1, 1
    j, lifts = omega_lift(ctx)
    q2 = Er_quotient(k, 2, p, q)
    pv = polyvectors(k)
    classes = []
    for i, (rep, lift) in enumerate(zip(q2.rep_vectors(), lifts)):
        classes.append({
            "index": i,
            "e2_representative": k.describe(p, q, rep),
            "harmonic_representative": k.describe(p, q, lift.harmonic_rep),
            "correction_xi": k.describe(p, q - 1, lift.correction),
            "correction_is_zero": lift.correction_is_zero(),
            "lifted_representative": k.describe(p, q, lift.lifted_rep),
            "lifted_e1_class": [format_scalar(c) for c in lift.lifted_class],
            "polyvector": pv.describe(contract_u_inverse(k, lift.lifted_rep)),
        })
    return {
        "bidegree": [p, q],
        "dim_E1": Er(k, 1, p, q)[0],
        "dim_E2": q2.dim,
        "dim_essential": j.rank(),
        "E1_harmonic_basis": [k.describe(p, q, v) for v in harmonic1(ctx, p, q).basis()],
        "classes": classes,
    }


def condition11_payload(k: DoubleComplex, dbar_closed_only: bool = True) -> dict:
    suite = condition_1_1_suite(k, dbar_closed_only=dbar_closed_only)
    out = suite.to_dict()
    out["exact_directions"] = "Im ∂ ∩ ker ∂̄" if dbar_closed_only else "Im ∂"
    return out


def kuranishi_payload(ctx: MetricContext, cfg: KuranishiConfig):
    series = kuranishi_iterate(ctx, cfg)
    out = series.to_dict(ctx.k)
    out["inadmissible_directions"] = [i for i, d in enumerate(series.directions) if not d.admissible]
    return out, series


# ---------------------------------------------------------------------------
# text rendering


def render_validate(res: dict) -> str:
    if res["ok"]:
        return "validation: ok"
    lines = ["validation: FAILED"]
    for v in res["violations"]:
        lines.append(f"  {v['identity']} at bidegree {tuple(v['bidegree'])}")
    return "\n".join(lines)


def render_pages(res: dict) -> str:
    parts = [render_grid(f"E_{pg['page']} dimensions", pg["grid"]) for pg in res["pages"]]
    parts.append("Betti numbers: " + " ".join(str(b) for b in res["betti"]))
    parts.append(f"degeneration page: {res['degeneration_page']}")
    return "\n\n".join(parts)


def render_check(res: dict) -> str:
    lines = [f"{res['property']}: {'true' if res['holds'] else 'false'}"]
    for name, val in res["conditions"].items():
        lines.append(f"  condition {name}: {val}")
    lines.append("  BC totals: " + " ".join(map(str, res["bc_totals"])))
    lines.append("  A  totals: " + " ".join(map(str, res["a_totals"])))
    if not res.get("conditions_agree", True):
        lines.append("  the dimension count and the injectivity test disagree (possible for complexes that do not come from a compact manifold)")
    if res["condition5_failures"]:
        lines.append("  injectivity fails at " + ", ".join(str(tuple(x)) for x in res["condition5_failures"]))
    return "\n".join(lines)


def render_bca(res: dict) -> str:
    r = res["page"]
    return "\n\n".join([
        render_grid(f"E_{r} Bott-Chern dimensions", res["bc_grid"]),
        render_grid(f"E_{r} Aeppli dimensions", res["a_grid"]),
        "BC totals: " + " ".join(map(str, res["bc_totals"])) + "\nA  totals: " + " ".join(map(str, res["a_totals"])),
    ])


def render_essential(res: dict) -> str:
    p, q = res["bidegree"]
    lines = [f"bidegree ({p},{q}): dim E_1 = {res['dim_E1']}, dim E_2 = {res['dim_E2']}, "
             f"essential dimension = {res['dim_essential']}"]
    for c in res["classes"]:
        lines.append(f"  [{c['index']}] E_2 class {c['e2_representative']}")
        lines.append(f"      harmonic rep   {c['harmonic_representative']}")
        lines.append(f"      correction ξ   {c['correction_xi']}")
        lines.append(f"      lifted rep     {c['lifted_representative']}")
        lines.append(f"      as PolyVector  {c['polyvector']}")
    return "\n".join(lines)


def render_condition11(res: dict) -> str:
    sp = res["spanning_set"]
    lines = [f"spanning set ({len(sp)} vectors; exact part taken in {res['exact_directions']}):"]
    for s in sp:
        lines.append(f"  {s['index']:>2} [{s['kind']}] {s['polyvector']}")
    lines.append("pair matrix (row ψ, column ρ; T true, F false, . outside model):")
    sym = {True: "T", False: "F", None: "."}
    for i, row in enumerate(res["matrix"]):
        lines.append(f"  {i:>2} " + "".join(sym[c] for c in row))
    if res["failures"]:
        lines.append("failures:")
        for f in res["failures"]:
            lines.append(f"  ψ={f['psi']} ρ={f['rho']}: ∂(ψ⌟(ρ⌟u)) = {f['witness']}")
    lines.append("all pairs true" if res["all_true"] else "hypothesis fails for some pair")
    return "\n".join(lines)


def render_kuranishi(res: dict) -> str:
    lines = [f"mode {res['mode']}, {res['parameters']} parameters, order {res['order']}"]
    for i, d in enumerate(res["directions"]):
        flag = "" if d["admissible"] else "  (not admissible for the scheme: no d-closed representative)"
        lines.append(f"  t{i + 1}: {d['label']}{flag}")
    for st in res["statuses"]:
        c = st["counts"]
        lines.append(f"  order {st['order']}: {st['status']} "
                     f"(scheme {c['scheme-solved']}, ∂̄ only {c['dbar-solved']}, "
                     f"obstructed {c['obstructed']}, zero {c['zero']})")
    ob = res["obstruction"]
    if ob:
        lines.append(f"OBSTRUCTED at order {ob['order']}, monomial {ob['monomial_label']}")
        lines.append(f"  right-hand side {ob['rhs']}")
        lines.append("  E_1 class coordinates " + " ".join(ob["e1_class"]))
        lines.append("  all obstructed monomials: " + ", ".join(ob["obstructed_monomials"]))
    else:
        lines.append(f"solved through order {res['order']}; replay identity: {res['replay_ok']}")
    return "\n".join(lines)
