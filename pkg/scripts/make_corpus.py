"""Regenerate the shipped model corpus under src/frolicher/models/.

The two Nakamura models are sub-complexes of the forms on the solvable group
with coordinates (z1, z2, z3), where z1 acts with characters e^{-z1} on z2 and
e^{z1} on z3.  Writing c(1) = 0, c(2) = 1, c(3) = -1 and c(I) for the sum over
a multi-index, the weighted frame is eta_I = e^{-c(I) z1} dz_I.

* class (3b): every e^{-(c(I)+c(J)) z1} dz_I ^ dz̄_J (holomorphic coefficients,
  killed by dbar) together with the conjugates e^{-(c(I)+c(J)) z̄1} dz_I ^ dz̄_J
  (antiholomorphic coefficients, killed by del);
* class (3a): eta_I ^ conj(eta_J) restricted to c(I) = 0 or c(J) = 0.

Run:  python scripts/make_corpus.py
"""
from __future__ import annotations

import json
from itertools import combinations
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "frolicher" / "models"

C = {1: 0, 2: 1, 3: -1}


def subsets(n=3):
    for k in range(n + 1):
        yield from combinations(range(1, n + 1), k)


def c(idx):
    return sum(C[i] for i in idx)


def nakamura3b():
    keys = set()
    for I in subsets():
        for J in subsets():
            a = -(c(I) + c(J))
            keys.add(((a, 0), I, J))
            keys.add(((0, a), I, J))
    return keys


def nakamura3a():
    keys = set()
    for I in subsets():
        for J in subsets():
            if c(I) == 0 or c(J) == 0:
                keys.add(((-c(I), -c(J)), I, J))
    return keys


def weighted_doc(name, keys, description):
    gens = [{"weight": list(w), "I": list(I), "J": list(J)} for (w, I, J) in sorted(keys)]
    weights = sorted({w for (w, _I, _J) in keys})
    return {
        "kind": "weighted_model",
        "name": name,
        "description": description,
        "n": 3,
        "weight_variable": 1,
        "weight_set": [list(w) for w in weights],
        "generators": gens,
        "conjugation": "swap_weights",
        "extra_rules": [],
        "frame_symbol": "dz",
        "vector_symbol": "∂/∂z",
    }


def lie_doc(name, n, brackets, description):
    return {
        "kind": "lie_algebra",
        "name": name,
        "description": description,
        "n": n,
        "frame_symbol": "φ",
        "vector_symbol": "θ",
        "brackets": [{"i": i, "j": j, "k": k, "c": cc} for (i, j, k, cc) in brackets],
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    docs = {
        "torus3": lie_doc("torus3", 3, [], "Complex 3-torus: abelian Lie algebra, all differentials vanish."),
        "iwasawa3": lie_doc(
            "iwasawa3", 3, [(1, 2, 3, "1/1")],
            "Iwasawa manifold: [θ1,θ2] = θ3, so ∂φ3 = -φ1∧φ2."),
        "iwasawa5": lie_doc(
            "iwasawa5", 5, [(1, 2, 3, "-1/1"), (1, 3, 4, "-1/1"), (2, 3, 5, "-1/1")],
            "Five-dimensional Iwasawa-type nilmanifold: [θ1,θ2] = -θ3, [θ1,θ3] = -θ4, [θ2,θ3] = -θ5, "
            "so ∂φ3 = φ1∧φ2, ∂φ4 = φ1∧φ3, ∂φ5 = φ2∧φ3."),
        "nakamura3a": weighted_doc(
            "nakamura3a", nakamura3a(),
            "Nakamura solvmanifold, class (3a): weighted frame monomials with c(I) = 0 or c(J) = 0."),
        "nakamura3b": weighted_doc(
            "nakamura3b", nakamura3b(),
            "Nakamura solvmanifold, class (3b): holomorphic-coefficient monomials plus their conjugates."),
    }
    for name, doc in docs.items():
        path = OUT / f"{name}.json"
        path.write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
        print(f"wrote {path.relative_to(OUT.parents[2])}")


if __name__ == "__main__":
    main()
