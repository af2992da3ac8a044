"""Finite double complexes: the data model, validation and builders."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Any

import jsonschema
from gmpy2 import mpq

from .field import FormatError, conj, format_scalar, parse_scalar
from .forms import FormAlgebra, ce_monomials, sort_monomials
from .linalg import Matrix

__all__ = [
    "DoubleComplex",
    "LieAlgebraSpec",
    "WeightedModelSpec",
    "ContractionData",
    "ValidationReport",
    "TotalComplex",
    "ModelError",
    "validate",
    "build_ce_complex",
    "build_weighted_complex",
    "build_explicit_complex",
    "total_complex",
    "load_model",
    "load_document",
    "corpus_path",
    "CORPUS",
]

_ZERO = mpq(0)
_ONE = mpq(1)

MODELS_DIR = Path(__file__).parent / "models"
CORPUS = ("torus3", "iwasawa3", "iwasawa5", "nakamura3a", "nakamura3b")


class ModelError(ValueError):
    """A model specification that cannot produce a valid double complex."""


# ---------------------------------------------------------------------------
# specifications


@dataclass(frozen=True)
class LieAlgebraSpec:
    """Structure constants ``[θ_i, θ_j] = Σ_k c[(i, j)][k] θ_k`` (1-based, ``i < j`` stored)."""

    n: int
    brackets: dict  # (i, j) with i < j -> {k: coeff}
    name: str = ""
    frame_symbol: str = "φ"
    vector_symbol: str = "θ"

    def c(self, i: int, j: int, k: int):
        if i == j:
            return _ZERO
        if i < j:
            return self.brackets.get((i, j), {}).get(k, _ZERO)
        return -self.brackets.get((j, i), {}).get(k, _ZERO)

    def bracket(self, x, y) -> list:
        """Bracket of two vectors given by coordinate lists of length n."""
        out = [_ZERO] * self.n
        for (i, j), terms in self.brackets.items():
            f = x[i - 1] * y[j - 1] - x[j - 1] * y[i - 1]
            if f:
                for k, c in terms.items():
                    out[k - 1] += f * c
        return out

    def jacobi_violations(self) -> list:
        bad = []
        n = self.n
        e = [[_ONE if a == b else _ZERO for a in range(n)] for b in range(n)]
        for a, b, c in combinations(range(n), 3):
            x, y, z = e[a], e[b], e[c]
            t1 = self.bracket(x, self.bracket(y, z))
            t2 = self.bracket(y, self.bracket(z, x))
            t3 = self.bracket(z, self.bracket(x, y))
            s = [u + v + w for u, v, w in zip(t1, t2, t3)]
            if any(s):
                bad.append((a + 1, b + 1, c + 1))
        return bad


@dataclass(frozen=True)
class WeightedModelSpec:
    n: int
    generators: tuple  # keys (w, I, J)
    weight_variable: int = 1
    weight_set: tuple = ()
    extra_rules: tuple = ()  # ({"key", "del": {key: c}, "dbar": {key: c}})
    name: str = ""
    frame_symbol: str = "dz"
    vector_symbol: str = "∂/∂z"


@dataclass(frozen=True)
class ContractionData:
    """Where the holomorphic volume form lives and how vectors pair with forms.

    The pairing is the Kronecker one, ``θ_i ⌟ φ_j = δ_ij``, against the frame of
    the model.
    """

    volume_key: tuple
    n: int

    def pairing(self, i: int, j: int):
        return _ONE if i == j else _ZERO


# ---------------------------------------------------------------------------
# the double complex


def _zeros_grid(n):
    return [[None] * (n + 1) for _ in range(n + 1)]


@dataclass(frozen=True, eq=False)
class DoubleComplex:
    """Bigraded spaces ``A^{p,q}`` (``0 <= p, q <= n``) with ``∂`` and ``∂̄``.

    ``dels[p][q]`` maps ``A^{p,q}`` to ``A^{p+1,q}`` and ``dbars[p][q]`` maps it
    to ``A^{p,q+1}``; maps leaving the square are zero matrices with zero rows.
    ``conjs[p][q]`` (optional) is the matrix of the antilinear conjugation
    ``A^{p,q} -> A^{q,p}`` applied after conjugating coefficients.
    """

    n: int
    dims: tuple
    dels: tuple
    dbars: tuple
    labels: tuple
    conjs: tuple | None = None
    grams: tuple | None = None
    algebra: FormAlgebra | None = None
    contraction: ContractionData | None = None
    name: str = ""
    source_hash: str = ""
    lie: LieAlgebraSpec | None = None
    _memo: dict = field(default_factory=dict, repr=False)

    def dim(self, p: int, q: int) -> int:
        if 0 <= p <= self.n and 0 <= q <= self.n:
            return self.dims[p][q]
        return 0

    def d(self, p: int, q: int) -> Matrix:
        """``∂ : A^{p,q} -> A^{p+1,q}`` (zero outside the square)."""
        if 0 <= p <= self.n and 0 <= q <= self.n:
            return self.dels[p][q]
        return Matrix.zeros(self.dim(p + 1, q), self.dim(p, q))

    def dbar(self, p: int, q: int) -> Matrix:
        if 0 <= p <= self.n and 0 <= q <= self.n:
            return self.dbars[p][q]
        return Matrix.zeros(self.dim(p, q + 1), self.dim(p, q))

    def gram(self, p: int, q: int) -> Matrix:
        if self.grams is not None and self.grams[p][q] is not None:
            return self.grams[p][q]
        return Matrix.identity(self.dim(p, q))

    def has_identity_gram(self) -> bool:
        if self.grams is None:
            return True
        return all(g is None or g == Matrix.identity(g.rows) for row in self.grams for g in row)

    def label(self, p: int, q: int, i: int) -> str:
        return self.labels[p][q][i]

    def label_index(self, p: int, q: int, label: str) -> int:
        try:
            return self.labels[p][q].index(label)
        except ValueError:
            raise KeyError(f"no basis element {label!r} in bidegree ({p},{q})") from None

    def bidegrees(self):
        for p in range(self.n + 1):
            for q in range(self.n + 1):
                yield p, q

    def memo(self, key, compute):
        """Insert-if-absent memo keyed on the computation key."""
        try:
            return self._memo[key]
        except KeyError:
            val = compute()
            return self._memo.setdefault(key, val)

    def with_grams(self, grams) -> "DoubleComplex":
        return DoubleComplex(
            n=self.n, dims=self.dims, dels=self.dels, dbars=self.dbars, labels=self.labels,
            conjs=self.conjs, grams=grams, algebra=self.algebra, contraction=self.contraction,
            name=self.name, source_hash=self.source_hash + ":gram" + _grams_hash(grams), lie=self.lie,
        )

    def with_map(self, which: str, p: int, q: int, m: Matrix) -> "DoubleComplex":
        """Copy with one differential block replaced (used to build corrupted variants)."""
        grid = [list(r) for r in (self.dels if which == "del" else self.dbars)]
        grid[p][q] = m
        grid = tuple(tuple(r) for r in grid)
        kw = dict(n=self.n, dims=self.dims, dels=self.dels, dbars=self.dbars, labels=self.labels,
                  conjs=self.conjs, grams=self.grams, algebra=None, contraction=self.contraction,
                  name=self.name + "*", source_hash=self.source_hash + f":{which}{p}{q}", lie=self.lie)
        kw["dels" if which == "del" else "dbars"] = grid
        return DoubleComplex(**kw)

    def vector(self, p: int, q: int, terms: dict) -> list:
        """Build a vector of ``A^{p,q}`` from ``{label: coeff}``."""
        v = [_ZERO] * self.dim(p, q)
        for lab, c in terms.items():
            v[self.label_index(p, q, lab)] += c
        return v

    def describe(self, p: int, q: int, v) -> str:
        """Human readable linear combination of basis labels."""
        from .field import pretty
        parts = []
        for i, c in enumerate(v):
            if not c:
                continue
            lab = self.labels[p][q][i]
            if c == 1:
                parts.append(f"+{lab}")
            elif c == -1:
                parts.append(f"-{lab}")
            else:
                s = pretty(c)
                parts.append(f"{'' if s.startswith('-') else '+'}{s}·{lab}")
        if not parts:
            return "0"
        out = " ".join(parts)
        return out[1:] if out.startswith("+") else out


def _grams_hash(grams) -> str:
    h = hashlib.sha256()
    for row in grams or ():
        for g in row:
            if g is not None:
                h.update(repr([[format_scalar(x) for x in r] for r in g.to_lists()]).encode())
    return h.hexdigest()[:12]


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    ok: bool
    violations: list

    def to_dict(self):
        return {"ok": self.ok, "violations": self.violations}


def validate(k: DoubleComplex) -> ValidationReport:
    """Check the double-complex axioms in every bidegree; list each violated identity."""
    bad = []
    n = k.n
    for p, q in k.bidegrees():
        dpq, bpq = k.d(p, q), k.dbar(p, q)
        if dpq.shape != (k.dim(p + 1, q), k.dim(p, q)):
            bad.append({"identity": "shape(∂)", "bidegree": [p, q]})
            continue
        if bpq.shape != (k.dim(p, q + 1), k.dim(p, q)):
            bad.append({"identity": "shape(∂̄)", "bidegree": [p, q]})
            continue
        if not (k.d(p + 1, q) @ dpq).is_zero():
            bad.append({"identity": "∂∂ = 0", "bidegree": [p, q]})
        if not (k.dbar(p, q + 1) @ bpq).is_zero():
            bad.append({"identity": "∂̄∂̄ = 0", "bidegree": [p, q]})
        if not ((k.d(p, q + 1) @ bpq) + (k.dbar(p + 1, q) @ dpq)).is_zero():
            bad.append({"identity": "∂∂̄ + ∂̄∂ = 0", "bidegree": [p, q]})
    if k.conjs is not None:
        for p, q in k.bidegrees():
            c = k.conjs[p][q]
            if c is None or c.shape != (k.dim(q, p), k.dim(p, q)):
                bad.append({"identity": "shape(σ)", "bidegree": [p, q]})
                continue
            back = k.conjs[q][p]
            if back is None or not (back @ c.conjugate()) == Matrix.identity(k.dim(p, q)):
                bad.append({"identity": "σσ = id", "bidegree": [p, q]})
            if q + 1 <= n and p <= n:
                lhs = k.conjs[q + 1][p] @ (k.d(q, p).conjugate() @ c.conjugate())
                if not lhs == k.dbar(p, q):
                    bad.append({"identity": "σ∂σ = ∂̄", "bidegree": [p, q]})
        for p, q in k.bidegrees():
            if k.dim(p, q) != k.dim(q, p):
                bad.append({"identity": "dim A^{p,q} = dim A^{q,p}", "bidegree": [p, q]})
    if k.grams is not None:
        for p, q in k.bidegrees():
            g = k.grams[p][q]
            if g is None:
                continue
            if g.shape != (k.dim(p, q), k.dim(p, q)) or not g.is_hermitian() or not _positive_definite(g):
                bad.append({"identity": "gram Hermitian positive-definite", "bidegree": [p, q]})
    return ValidationReport(ok=not bad, violations=bad)


def _positive_definite(g: Matrix) -> bool:
    """Exact Sylvester-style test via LDL^H elimination without pivoting."""
    n = g.rows
    a = g.to_lists()
    for i in range(n):
        piv = a[i][i]
        from .field import GaussianRational
        if isinstance(piv, GaussianRational) or piv <= 0:
            return False
        for r in range(i + 1, n):
            f = a[r][i] / piv
            if f:
                for c in range(i, n):
                    a[r][c] = a[r][c] - f * a[i][c]
    return True


# ---------------------------------------------------------------------------
# builders


def _from_algebra(alg: FormAlgebra, *, name="", source_hash="", lie=None, check_closure=True) -> DoubleComplex:
    n = alg.n
    dims = tuple(tuple(alg.dim(p, q) for q in range(n + 1)) for p in range(n + 1))
    dels = _zeros_grid(n)
    dbars = _zeros_grid(n)
    conjs = _zeros_grid(n)
    labels = _zeros_grid(n)
    for p in range(n + 1):
        for q in range(n + 1):
            keys = alg.monomials.get((p, q), [])
            labels[p][q] = tuple(alg.label(k) for k in keys)
            for which, fn, tgt, grid in (("∂", alg.del_monomial, (p + 1, q), dels),
                                           ("∂̄", alg.dbar_monomial, (p, q + 1), dbars)):
                rows = [dict() for _ in range(alg.dim(*tgt))]
                for col, key in enumerate(keys):
                    for k2, c in fn(key).items():
                        loc = alg.index.get(k2)
                        if loc is None or loc[0] != tgt:
                            if check_closure:
                                raise ModelError(
                                    f"{which} of generator {alg.label(key)} leaves the model "
                                    f"(term {alg.label(k2)} with coefficient {c})")
                            continue
                        rows[loc[1]][col] = c
                grid[p][q] = Matrix._trusted(alg.dim(*tgt), len(keys), rows)
            crow = [dict() for _ in range(alg.dim(q, p))]
            for col, key in enumerate(keys):
                s, k2 = alg.conj_monomial(key)
                loc = alg.index.get(k2)
                if loc is None:
                    raise ModelError(f"conjugate of {alg.label(key)} is not a generator")
                crow[loc[1]][col] = mpq(s)
            conjs[p][q] = Matrix._trusted(alg.dim(q, p), len(keys), crow)
    contraction = None
    if alg.volume_key() in alg.index:
        contraction = ContractionData(volume_key=alg.volume_key(), n=n)
    return DoubleComplex(
        n=n, dims=dims,
        dels=tuple(map(tuple, dels)), dbars=tuple(map(tuple, dbars)),
        labels=tuple(map(tuple, labels)), conjs=tuple(map(tuple, conjs)),
        grams=None, algebra=alg, contraction=contraction, name=name, source_hash=source_hash, lie=lie,
    )


def build_ce_complex(g: LieAlgebraSpec, *, source_hash: str = "") -> DoubleComplex:
    """Left-invariant forms of a complex parallelisable nilmanifold or solvmanifold."""
    bad = g.jacobi_violations()
    if bad:
        raise ModelError(f"Jacobi identity fails on basis triples {bad}")
    for (i, j) in g.brackets:
        if not (1 <= i < j <= g.n):
            raise ModelError(f"bracket index pair {(i, j)} must satisfy 1 <= i < j <= n")
    dphi: dict = {}
    for (i, j), terms in g.brackets.items():
        for k, c in terms.items():
            if c:
                dphi.setdefault(k, {})[(i, j)] = -c
    alg = FormAlgebra(n=g.n, dphi=dphi, monomials=ce_monomials(g.n),
                      frame_symbol=g.frame_symbol, vector_symbol=g.vector_symbol)
    return _from_algebra(alg, name=g.name, source_hash=source_hash, lie=g)


def build_weighted_complex(spec: WeightedModelSpec, *, source_hash: str = "") -> DoubleComplex:
    """Complex spanned by weighted generators ``e^{a z_v + b z̄_v} dz_I ∧ dz̄_J``."""
    if spec.weight_set:
        allowed = set(spec.weight_set)
        for key in spec.generators:
            if key[0] not in allowed:
                raise ModelError(f"generator weight {key[0]} is not in the declared weight set")
    monomials = sort_monomials(spec.generators)
    n = spec.n
    for p in range(n + 1):
        for q in range(n + 1):
            monomials.setdefault((p, q), [])
    alg = FormAlgebra(n=n, dphi={}, monomials=monomials, weight_variable=spec.weight_variable,
                      frame_symbol=spec.frame_symbol, vector_symbol=spec.vector_symbol)
    if spec.extra_rules:
        alg = _ExtraRulesAlgebra.wrap(alg, spec.extra_rules)
    k = _from_algebra(alg, name=spec.name, source_hash=source_hash)
    rep = validate(k)
    if not rep.ok:
        raise ModelError(f"weighted model fails validation: {rep.violations}")
    return k


@dataclass(frozen=True)
class _ExtraRulesAlgebra(FormAlgebra):
    extra: tuple = ()

    @classmethod
    def wrap(cls, alg: FormAlgebra, extra) -> "_ExtraRulesAlgebra":
        return cls(n=alg.n, dphi=alg.dphi, monomials=alg.monomials, weight_variable=alg.weight_variable,
                   frame_symbol=alg.frame_symbol, vector_symbol=alg.vector_symbol, extra=tuple(extra))

    def _extra(self, key, which):
        out = {}
        for rule in self.extra:
            if rule["key"] == key:
                for k2, c in rule.get(which, {}).items():
                    out[k2] = out.get(k2, _ZERO) + c
        return out

    def del_monomial(self, key):
        out = super().del_monomial(key)
        for k2, c in self._extra(key, "del").items():
            s = out.get(k2, _ZERO) + c
            out[k2] = s
        return {k: v for k, v in out.items() if v}

    def dbar_monomial(self, key):
        out = super().dbar_monomial(key)
        for k2, c in self._extra(key, "dbar").items():
            out[k2] = out.get(k2, _ZERO) + c
        return {k: v for k, v in out.items() if v}


def build_explicit_complex(doc: dict, *, source_hash: str = "") -> DoubleComplex:
    n = _int(doc, "n")
    dims_doc = doc.get("dims")
    if not isinstance(dims_doc, list) or len(dims_doc) != n + 1:
        raise FormatError("explicit model needs an (n+1)x(n+1) 'dims' table")
    dims = tuple(tuple(int(x) for x in row) for row in dims_doc)

    def grid(name, shape_fn, required=True):
        raw = doc.get(name)
        if raw is None:
            if required:
                raise FormatError(f"explicit model is missing {name!r}")
            return None
        out = _zeros_grid(n)
        for p in range(n + 1):
            for q in range(n + 1):
                r, c = shape_fn(p, q)
                m = raw[p][q]
                if m is None or m == []:
                    out[p][q] = Matrix.zeros(r, c)
                    continue
                rows = [[parse_scalar(x) for x in row] for row in m]
                if len(rows) != r or any(len(row) != c for row in rows):
                    raise FormatError(f"{name}[{p}][{q}] should be {r}x{c}")
                out[p][q] = Matrix.from_rows(rows, c)
        return tuple(map(tuple, out))

    def dm(p, q):
        return dims[p][q] if 0 <= p <= n and 0 <= q <= n else 0

    dels = grid("del", lambda p, q: (dm(p + 1, q), dm(p, q)))
    dbars = grid("dbar", lambda p, q: (dm(p, q + 1), dm(p, q)))
    conjs = grid("conj", lambda p, q: (dm(q, p), dm(p, q)), required=False)
    grams = grid("gram", lambda p, q: (dm(p, q), dm(p, q)), required=False)
    raw_labels = doc.get("labels")
    labels = _zeros_grid(n)
    for p in range(n + 1):
        for q in range(n + 1):
            if raw_labels is not None:
                labels[p][q] = tuple(raw_labels[p][q])
            else:
                labels[p][q] = tuple(f"e^{{{p},{q}}}_{i + 1}" for i in range(dims[p][q]))
    return DoubleComplex(n=n, dims=dims, dels=dels, dbars=dbars, labels=tuple(map(tuple, labels)),
                         conjs=conjs, grams=grams, name=doc.get("name", ""), source_hash=source_hash)


# ---------------------------------------------------------------------------
# total complex


@dataclass(frozen=True)
class TotalComplex:
    """Single-graded complex ``(⊕_{p+q=k} A^{p,q}, d = ∂ + ∂̄)``."""

    dims: tuple
    d: tuple  # d[k]: degree k -> k+1
    offsets: tuple  # offsets[k][(p, q)] = start index of A^{p,q} inside degree k


def total_complex(k: DoubleComplex) -> TotalComplex:
    n = k.n
    offsets = []
    dims = []
    for deg in range(2 * n + 1):
        off = {}
        pos = 0
        for p in range(n + 1):
            q = deg - p
            if 0 <= q <= n:
                off[(p, q)] = pos
                pos += k.dim(p, q)
        offsets.append(off)
        dims.append(pos)
    ds = []
    for deg in range(2 * n + 1):
        rows = [dict() for _ in range(dims[deg + 1] if deg + 1 <= 2 * n else 0)]
        if deg + 1 <= 2 * n:
            tgt = offsets[deg + 1]
            for (p, q), o in offsets[deg].items():
                for m, t in ((k.d(p, q), (p + 1, q)), (k.dbar(p, q), (p, q + 1))):
                    if t not in tgt:
                        continue
                    ot = tgt[t]
                    for i in range(m.rows):
                        for j, x in m.row_dict(i).items():
                            rows[ot + i][o + j] = rows[ot + i].get(o + j, _ZERO) + x
        ds.append(Matrix._trusted(len(rows), dims[deg], rows))
    return TotalComplex(dims=tuple(dims), d=tuple(ds), offsets=tuple(offsets))


# ---------------------------------------------------------------------------
# documents


def _int(doc, key):
    v = doc.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise FormatError(f"field {key!r} must be a nonnegative integer")
    return v


def _indices(raw, n, what):
    if not isinstance(raw, list) or not all(isinstance(x, int) and 1 <= x <= n for x in raw):
        raise FormatError(f"{what} must be a list of indices in 1..{n}")
    if len(set(raw)) != len(raw):
        raise FormatError(f"{what} has repeated indices")
    return raw


def _gen_key(g, n):
    if not isinstance(g, dict):
        raise FormatError("generator entries must be objects")
    w = g.get("weight", [0, 0])
    if not (isinstance(w, list) and len(w) == 2 and all(isinstance(x, int) for x in w)):
        raise FormatError("weight must be a pair of integers")
    I = _indices(g.get("I", []), n, "I")
    J = _indices(g.get("J", []), n, "J")
    sI, I2 = _sorted_with_sign(I)
    sJ, J2 = _sorted_with_sign(J)
    return (tuple(w), I2, J2), sI * sJ


def _sorted_with_sign(idx):
    from .forms import sort_sign
    s, w = sort_sign(tuple(idx))
    return s, w


def spec_from_document(doc: dict):
    kind = doc.get("kind")
    if kind == "lie_algebra":
        n = _int(doc, "n")
        br: dict = {}
        for e in doc.get("brackets", []):
            i, j, k = e.get("i"), e.get("j"), e.get("k")
            if not all(isinstance(x, int) and 1 <= x <= n for x in (i, j, k)):
                raise FormatError(f"bracket entry {e!r} has indices outside 1..{n}")
            if i == j:
                raise FormatError(f"bracket entry {e!r} brackets a vector with itself")
            c = parse_scalar(e.get("c", "1/1"))
            if i > j:
                i, j, c = j, i, -c
            d = br.setdefault((i, j), {})
            d[k] = d.get(k, _ZERO) + c
        return LieAlgebraSpec(n=n, brackets=br, name=doc.get("name", ""),
                              frame_symbol=doc.get("frame_symbol", "φ"),
                              vector_symbol=doc.get("vector_symbol", "θ"))
    if kind == "weighted_model":
        n = _int(doc, "n")
        gens = []
        for g in doc.get("generators", []):
            key, _s = _gen_key(g, n)
            gens.append(key)
        if len(set(gens)) != len(gens):
            raise FormatError("duplicate generators")
        conj_rule = doc.get("conjugation", "swap_weights")
        if conj_rule != "swap_weights":
            raise FormatError(f"unsupported conjugation rule {conj_rule!r}")
        extra = []
        for rule in doc.get("extra_rules", []):
            key, s = _gen_key(rule.get("generator", {}), n)
            ent = {"key": key}
            for which in ("del", "dbar"):
                terms = {}
                for t in rule.get(which, []):
                    k2, s2 = _gen_key(t, n)
                    terms[k2] = terms.get(k2, _ZERO) + s * s2 * parse_scalar(t.get("c", "1/1"))
                ent[which] = terms
            extra.append(ent)
        ws = tuple(tuple(w) for w in doc.get("weight_set", []))
        return WeightedModelSpec(n=n, generators=tuple(gens), weight_variable=doc.get("weight_variable", 1),
                                 weight_set=ws, extra_rules=tuple(extra), name=doc.get("name", ""),
                                 frame_symbol=doc.get("frame_symbol", "dz"),
                                 vector_symbol=doc.get("vector_symbol", "∂/∂z"))
    raise FormatError(f"unknown model kind {kind!r}")


def _apply_gram(k: DoubleComplex, doc: dict) -> DoubleComplex:
    raw = doc.get("gram")
    if raw is None:
        return k
    grams = _zeros_grid(k.n)
    for entry in raw:
        p, q = entry["bidegree"]
        m = [[parse_scalar(x) for x in row] for row in entry["matrix"]]
        d = k.dim(p, q)
        if len(m) != d or any(len(r) != d for r in m):
            raise FormatError(f"gram for ({p},{q}) must be {d}x{d}")
        grams[p][q] = Matrix.from_rows(m, d)
    return k.with_grams(tuple(map(tuple, grams)))


def _validator():
    global _VALIDATOR
    if _VALIDATOR is None:
        schema = json.loads((MODELS_DIR / "schema.json").read_text(encoding="utf-8"))
        _VALIDATOR = jsonschema.Draft202012Validator(schema)
    return _VALIDATOR


_VALIDATOR = None


def check_schema(doc) -> None:
    """Raise :class:`FormatError` naming the first schema violation, if any."""
    err = jsonschema.exceptions.best_match(_validator().iter_errors(doc))
    if err is not None:
        where = "/".join(str(x) for x in err.absolute_path) or "document"
        raise FormatError(f"{where}: {err.message}")


def load_document(doc: Any, *, source_hash: str = "") -> DoubleComplex:
    """Build (and validate the buildability of) a complex from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise FormatError("model document must be a JSON object")
    check_schema(doc)
    kind = doc.get("kind")
    if kind == "explicit":
        return build_explicit_complex(doc, source_hash=source_hash)
    spec = spec_from_document(doc)
    if isinstance(spec, LieAlgebraSpec):
        k = build_ce_complex(spec, source_hash=source_hash)
    else:
        k = build_weighted_complex(spec, source_hash=source_hash)
    return _apply_gram(k, doc)


def corpus_path(name: str) -> Path:
    return MODELS_DIR / f"{name}.json"


def resolve_model_path(arg: str) -> Path:
    p = Path(arg)
    if p.exists():
        return p
    if arg in CORPUS or (MODELS_DIR / f"{arg}.json").exists():
        return corpus_path(arg)
    if (MODELS_DIR / arg).exists():
        return MODELS_DIR / arg
    raise FileNotFoundError(arg)


def load_model(path_or_name) -> DoubleComplex:
    """Load a model from a path, or a corpus name such as ``"iwasawa3"``."""
    path = resolve_model_path(str(path_or_name))
    raw = path.read_bytes()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise FormatError(f"{path}: not valid UTF-8 JSON ({e})") from None
    h = hashlib.sha256(raw).hexdigest()
    k = load_document(doc, source_hash=h)
    if not k.name:
        object.__setattr__(k, "name", path.stem)
    return k


def matrix_to_json(m: Matrix) -> list:
    return [[format_scalar(x) for x in row] for row in m.to_lists()]


def conj_vector(v) -> list:
    return [conj(x) for x in v]
