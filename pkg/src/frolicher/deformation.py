"""Deformation calculus on invariant models.

Vector-valued forms ``e^{w} φ̄_λ ⊗ θ_i`` are identified with ``A^{n-1,1}``
through contraction into the holomorphic volume form ``u``.  On top of
that identification this module provides the Tian-Todorov bracket, the
hypothesis check on double contractions, the complex-parallelisable
directions of a Lie algebra and a formal Kuranishi iterator that follows
the ``∂̄∂``-potential scheme and reports genuine obstructions separately.

Vectors of ``A^{p,q}`` are dense coefficient lists in the model's basis;
PolyVectors are dense lists in the basis of :class:`PolyVectorSpace`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product

from gmpy2 import mpq

from .complex import DoubleComplex, LieAlgebraSpec, ModelError
from .field import conj, format_scalar, pretty
from .hodge import MetricContext, SolvabilityError, harmonic1, min_norm_ddbar_solve, omega_lift
from .linalg import Matrix, MinNormSolver, Subspace, kernel, vec_add, vec_scale
from .spectral import Er_quotient, InternalInconsistency, Zr, _im_d

__all__ = [
    "TT_SIGN",
    "PolyVectorSpace",
    "PreconditionError",
    "polyvectors",
    "contract_u",
    "contract_u_inverse",
    "contract_form",
    "direct_bracket_u",
    "tt_bracket_u",
    "check_condition_1_1",
    "condition_1_1_suite",
    "centre",
    "h_par",
    "check_parallelisable_direction",
    "alpha_isomorphism_check",
    "KuranishiConfig",
    "Direction",
    "DeformationSeries",
    "ObstructionReport",
    "kuranishi_iterate",
    "replay_residual",
]

_ZERO = mpq(0)
_HALF = mpq(1, 2)

# [θ₁,θ₂]⌟u = TT_SIGN · ∂(θ₁⌟(θ₂⌟u)) under the contraction convention of
# FormAlgebra.contract_monomial; fixed by comparison with the direct bracket.
TT_SIGN = 1


class PreconditionError(ValueError):
    """An argument violates the hypothesis of the operation it was passed to."""


def _add_sparse(acc: dict, key, c):
    s = acc.get(key, _ZERO) + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


# ---------------------------------------------------------------------------
# the PolyVector space


class PolyVectorSpace:
    """Basis ``{e^{w} φ̄_λ ⊗ θ_i}`` of (0,1)-forms with values in (1,0)-vectors.

    The basis is read off from ``A^{n-1,1}``: each generator
    ``e^{w} φ_{Î} ∧ φ̄_λ`` with ``i`` the missing holomorphic index gives the
    vector ``e^{w} φ̄_λ ⊗ θ_i``, so contraction into ``u`` is a signed
    permutation (in fact diagonal) and the Calabi-Yau map is an isomorphism
    by construction.
    """

    def __init__(self, k: DoubleComplex):
        alg = k.algebra
        if alg is None:
            raise ModelError("model has no form algebra, so vector-valued forms are unavailable")
        self.k = k
        self.alg = alg
        n = k.n
        self.n = n
        self.volume = alg.volume_key()
        if self.volume not in alg.index:
            raise ModelError("holomorphic volume form is not part of the model")
        keys = alg.monomials.get((n - 1, 1), [])
        self.form_keys = list(keys)
        self.keys = []
        self.signs = []
        full = set(range(1, n + 1))
        for key in keys:
            w, I, J = key
            (i,) = tuple(full - set(I))
            vec = (w, J, i)
            s, img = alg.contract_monomial(vec, self.volume)
            if img != key:
                raise ModelError(f"contraction of {alg.vector_label(vec)} into u misses its generator")
            self.keys.append(vec)
            self.signs.append(s)
        self.position = {v: a for a, v in enumerate(self.keys)}
        self.labels = [alg.vector_label(v) for v in self.keys]

    @property
    def dim(self) -> int:
        return len(self.keys)

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no PolyVector generator labelled {label!r}") from None

    def vector(self, terms: dict) -> list:
        v = [_ZERO] * self.dim
        for lab, c in terms.items():
            v[self.label_index(lab)] += mpq(c) if isinstance(c, int) else c
        return v

    def describe(self, x) -> str:
        parts = []
        for lab, c in zip(self.labels, x):
            if c == 1:
                parts.append(f"+{lab}")
            elif c == -1:
                parts.append(f"-{lab}")
            elif c:
                s = pretty(c)
                parts.append(f"{'' if s.startswith('-') else '+'}{s}·{lab}")
        out = " ".join(parts)
        return (out[1:] if out.startswith("+") else out) or "0"

    def basis_vector(self, a: int) -> list:
        v = [_ZERO] * self.dim
        v[a] = mpq(1)
        return v


def polyvectors(k: DoubleComplex) -> PolyVectorSpace:
    return k.memo(("polyvectors",), lambda: PolyVectorSpace(k))


def contract_u(k: DoubleComplex, x) -> list:
    """``θ ↦ θ⌟u`` as a vector of ``A^{n-1,1}``."""
    pv = polyvectors(k)
    return [s * c for s, c in zip(pv.signs, x)]


def contract_u_inverse(k: DoubleComplex, eta) -> list:
    """Inverse Calabi-Yau map; the contraction is diagonal with entries ±1."""
    pv = polyvectors(k)
    if len(eta) != pv.dim:
        raise ValueError("form does not live in bidegree (n-1, 1)")
    return [s * c for s, c in zip(pv.signs, eta)]


def _contract_key(k: DoubleComplex, vec, key, target):
    alg = k.algebra
    s, img = alg.contract_monomial(vec, key)
    if not s:
        return 0, None
    pos = alg.index.get(img)
    if pos is None or pos[0] != target:
        raise ModelError(f"contracting {alg.vector_label(vec)} into {alg.label(key)} leaves the model")
    return s, pos[1]


def contract_form(k: DoubleComplex, x, p: int, q: int, eta) -> list:
    """``θ⌟η`` for ``η ∈ A^{p,q}``; lands in ``A^{p-1,q+1}``."""
    if p < 1:
        raise ValueError("contraction needs a holomorphic degree of at least one")
    pv = polyvectors(k)
    alg = k.algebra
    src = alg.monomials.get((p, q), [])
    out = [_ZERO] * k.dim(p - 1, q + 1)
    for a, xa in enumerate(x):
        if not xa:
            continue
        vec = pv.keys[a]
        for j, e in enumerate(eta):
            if not e:
                continue
            s, pos = _contract_key(k, vec, src[j], (p - 1, q + 1))
            if s:
                out[pos] += s * xa * e
    return out


# ---------------------------------------------------------------------------
# brackets


def _direct_pair(k: DoubleComplex, a: int, b: int) -> dict:
    """``[θ_a, θ_b]⌟u`` for basis PolyVectors, from the vector-field formula.

    For ``X = e^{w1}θ_i`` and ``Y = e^{w2}θ_j`` the bracket of the
    vector-valued forms is ``φ̄_λ∧φ̄_μ ⊗ [X, Y]`` because the antiholomorphic
    coframe is annihilated by (1,0)-vectors and their Lie derivatives.  The
    coefficient of the weight variable gives ``θ_v(e^{w}) = a e^{w}``.
    """
    pv = polyvectors(k)
    alg = k.algebra
    (w1, (lam,), i) = pv.keys[a]
    (w2, (mu,), j) = pv.keys[b]
    s, Lam = _sort2(lam, mu)
    if not s:
        return {}
    v = alg.weight_variable
    vecs: dict = {}
    if i == v and w2[0]:
        _add_sparse(vecs, j, mpq(w2[0]))
    if j == v and w1[0]:
        _add_sparse(vecs, i, -mpq(w1[0]))
    for kk, c in alg.bracket_vectors(i, j).items():
        _add_sparse(vecs, kk, c)
    w = (w1[0] + w2[0], w1[1] + w2[1])
    out: dict = {}
    for kk, c in vecs.items():
        t, pos = _contract_key(k, (w, Lam, kk), pv.volume, (k.n - 1, 2))
        if t:
            _add_sparse(out, pos, s * t * c)
    return out


def _sort2(a, b):
    if a == b:
        return 0, None
    return (1, (a, b)) if a < b else (-1, (b, a))


def _tt_pair(k: DoubleComplex, a: int, b: int) -> dict:
    """``TT_SIGN · ∂(θ_a⌟(θ_b⌟u))`` for basis PolyVectors (no precondition)."""
    pv = polyvectors(k)
    n = k.n
    inner = contract_u(k, pv.basis_vector(b))
    dbl = contract_form(k, pv.basis_vector(a), n - 1, 1, inner)
    d = k.d(n - 2, 2).apply(dbl)
    return {i: TT_SIGN * c for i, c in enumerate(d) if c}


class _PairTable:
    """Lazily filled table of basis brackets; pairs are evaluated on first use.

    Weighted models only contain pure weights, so some products of
    generators leave the model; laziness confines the resulting error to
    pairs that actually occur with nonzero coefficients.
    """

    def __init__(self, k, fn):
        self.k = k
        self.fn = fn
        self.cache = {}

    def __call__(self, a, b) -> dict:
        v = self.cache.get((a, b))
        if v is None:
            v = self.cache[(a, b)] = self.fn(self.k, a, b)
        return v


def _table(k, which) -> _PairTable:
    fn = _direct_pair if which == "direct" else _tt_pair
    return k.memo(("bracket_table", which), lambda: _PairTable(k, fn))


def _bilinear(k, table, x, y) -> list:
    out = [_ZERO] * k.dim(k.n - 1, 2)
    xs = [(a, c) for a, c in enumerate(x) if c]
    ys = [(b, c) for b, c in enumerate(y) if c]
    for a, xa in xs:
        for b, yb in ys:
            f = xa * yb
            for i, c in table(a, b).items():
                out[i] += f * c
    return out


def direct_bracket_u(k: DoubleComplex, x, y) -> list:
    """``[x, y]⌟u`` computed from the vector-field bracket."""
    return _bilinear(k, _table(k, "direct"), x, y)


def _del_closed(k, x) -> bool:
    n = k.n
    return not any(k.d(n - 1, 1).apply(contract_u(k, x)))


def tt_bracket_u(k: DoubleComplex, x, y) -> list:
    """``[x, y]⌟u`` via the Tian-Todorov identity.

    Both arguments must satisfy ``∂(θ⌟u) = 0``; otherwise the identity does not
    hold and :class:`PreconditionError` is raised.
    """
    for name, v in (("first", x), ("second", y)):
        if not _del_closed(k, v):
            raise PreconditionError(f"{name} argument has ∂(θ⌟u) ≠ 0")
    return _bilinear(k, _table(k, "tt"), x, y)


# ---------------------------------------------------------------------------
# hypothesis on double contractions


def double_contraction(k: DoubleComplex, x, y) -> list:
    """``x⌟(y⌟u)`` in ``A^{n-2,2}``."""
    n = k.n
    return contract_form(k, x, n - 1, 1, contract_u(k, y))


def check_condition_1_1(k: DoubleComplex, x, y):
    """Whether ``x⌟(y⌟u) ∈ Z_2^{n-2,2}``; returns ``(ok, witness)``.

    On failure the witness is ``∂(x⌟(y⌟u))`` rendered with the model's labels
    (or the ``∂̄`` image when the form is not even ``∂̄``-closed).
    """
    n = k.n
    f = double_contraction(k, x, y)
    ok = Zr(k, 2, n - 2, 2).contains(f)
    if ok:
        return True, None
    db = k.dbar(n - 2, 2).apply(f)
    if any(db):
        return False, "∂̄: " + k.describe(n - 2, 3, db)
    return False, k.describe(n - 1, 2, k.d(n - 2, 2).apply(f))


@dataclass
class ConditionSuite:
    labels: list
    kinds: list  # "ker d" or "Im ∂" per spanning vector
    vectors: list
    matrix: list  # matrix[i][j] = check(vectors[i], vectors[j]); None when outside the model
    witnesses: dict  # (i, j) -> label

    @property
    def all_true(self) -> bool:
        return all(c is True for r in self.matrix for c in r)

    @property
    def outside(self) -> int:
        return sum(c is None for r in self.matrix for c in r)

    def failures(self) -> list:
        return sorted(self.witnesses)

    def to_dict(self) -> dict:
        return {
            "spanning_set": [{"index": i, "kind": kd, "polyvector": lab}
                             for i, (kd, lab) in enumerate(zip(self.kinds, self.labels))],
            "matrix": self.matrix,
            "all_true": self.all_true,
            "outside_model": self.outside,
            "failures": [{"psi": i, "rho": j, "witness": self.witnesses[(i, j)]} for i, j in self.failures()],
        }


def condition_1_1_suite(k: DoubleComplex, *, dbar_closed_only: bool = True) -> ConditionSuite:
    """Check all ordered pairs from spanning sets of ``{θ⌟u ∈ ker d}`` and ``{θ⌟u ∈ Im ∂}``.

    First-order deformation data is ``∂̄``-closed, so by default the exact
    directions are cut down to ``Im ∂ ∩ ker ∂̄``.  With
    ``dbar_closed_only=False`` all of ``Im ∂`` is used; on I⁵ some of those
    pairs are not even ``∂̄``-closed after double contraction.
    """
    n = k.n
    pv = polyvectors(k)
    ker_dbar = kernel(k.dbar(n - 1, 1))
    closed = kernel(k.d(n - 1, 1)).intersect(ker_dbar)
    exact = _im_d(k, n - 1, 1)
    if dbar_closed_only:
        exact = exact.intersect(ker_dbar)
    vecs, kinds, seen = [], [], set()
    for kind, space in (("ker d", closed), ("Im ∂", exact)):
        for b in space.basis():
            x = contract_u_inverse(k, b)
            key = tuple(x)
            if key in seen:
                continue
            seen.add(key)
            vecs.append(x)
            kinds.append(kind)
    matrix, wit = [], {}
    for i, x in enumerate(vecs):
        row = []
        for j, y in enumerate(vecs):
            try:
                ok, w = check_condition_1_1(k, x, y)
            except ModelError:
                ok, w = None, None  # double contraction is not an element of the model
            row.append(ok)
            if ok is False:
                wit[(i, j)] = w
        matrix.append(row)
    return ConditionSuite([pv.describe(v) for v in vecs], kinds, vecs, matrix, wit)


# ---------------------------------------------------------------------------
# complex-parallelisable directions


def _lie(k_or_g) -> LieAlgebraSpec:
    g = k_or_g.lie if isinstance(k_or_g, DoubleComplex) else k_or_g
    if g is None:
        raise ModelError("operation needs a Lie-algebra model")
    return g


def centre(g) -> Subspace:
    """``{z : [z, θ_i] = 0 for every i}`` as a subspace of ``ℂ^n``."""
    g = _lie(g)
    n = g.n
    rows = []
    for i in range(1, n + 1):
        for kk in range(1, n + 1):
            row = {j - 1: g.c(j, i, kk) for j in range(1, n + 1) if g.c(j, i, kk)}
            if row:
                rows.append(row)
    return kernel(Matrix(len(rows), n, rows)) if rows else Subspace.full(n)


def _mu_matrix(k: DoubleComplex, x):
    """``μ[λ][i]`` with ``x = Σ μ_{λi} φ̄_λ ⊗ θ_i`` (0-based indices)."""
    pv = polyvectors(k)
    n = k.n
    mu = [[_ZERO] * n for _ in range(n)]
    for (w, (lam,), i), c in zip(pv.keys, x):
        if c:
            if w != (0, 0):
                raise ModelError("weighted generators have no Lie-algebra meaning")
            mu[lam - 1][i - 1] += c
    return mu


def _from_mu(k: DoubleComplex, mu) -> list:
    pv = polyvectors(k)
    return [mu[lam - 1][i - 1] for (_w, (lam,), i) in pv.keys]


def h_par(k: DoubleComplex):
    """``H^{0,1} ⊗ Z(g)``: returns ``(dimension, basis)`` with PolyVector basis vectors."""
    g = _lie(k)
    n = k.n
    h01 = kernel(k.dbar(0, 1))  # no invariant (0,0)-form has nonzero ∂̄
    z = centre(g)
    alg = k.algebra
    one_forms = alg.monomials[(0, 1)]
    basis = []
    for f in h01.basis():
        for c in z.basis():
            mu = [[_ZERO] * n for _ in range(n)]
            for pos, a in enumerate(f):
                if not a:
                    continue
                (lam,) = one_forms[pos][2]
                for i, b in enumerate(c):
                    if b:
                        mu[lam - 1][i] += a * b
            basis.append(_from_mu(k, mu))
    return len(basis), basis


def _mu_dbar_closed(k, x) -> bool:
    mu = _mu_matrix(k, x)
    n = k.n
    alg = k.algebra
    one_forms = alg.monomials[(0, 1)]
    for i in range(n):
        f = [_ZERO] * len(one_forms)
        for pos, key in enumerate(one_forms):
            f[pos] = mu[key[2][0] - 1][i]
        if any(k.dbar(0, 1).apply(f)):
            return False
    return True


def check_parallelisable_direction(k: DoubleComplex, x):
    """Condition ``[X, μ Ȳ] = 0`` over basis vectors; returns ``(ok, failures)``."""
    g = _lie(k)
    n = g.n
    mu = _mu_matrix(k, x)
    bad = []
    for j in range(n):
        ej = [_ZERO] * n
        ej[j] = mpq(1)
        for lam in range(n):
            br = g.bracket(ej, mu[lam])
            if any(br):
                bad.append((j + 1, lam + 1))
    return not bad, bad


@dataclass
class AlphaReport:
    dbar_closed: bool
    condition_2: bool
    condition_2_failures: list
    homomorphism: bool
    failures: list  # (x label, y label, [αx,αy] - α[x,y] as coefficient list)

    @property
    def ok(self) -> bool:
        return self.condition_2 and self.homomorphism

    def to_dict(self):
        return {
            "dbar_closed": self.dbar_closed,
            "condition_2": self.condition_2,
            "condition_2_failures": [list(p) for p in self.condition_2_failures],
            "homomorphism": self.homomorphism,
            "failures": [{"x": a, "y": b, "defect": [format_scalar(c) for c in d]} for a, b, d in self.failures],
        }


def alpha_isomorphism_check(k: DoubleComplex, x) -> AlphaReport:
    """Test whether ``α = (Id+μ) ⊕ (Id+μ̄)`` preserves brackets on ``g_ℂ``.

    The basis of ``g_ℂ`` is ``θ_1..θ_n, θ̄_1..θ̄_n``; ``θ_i`` and ``θ̄_j``
    commute and the barred brackets carry conjugate structure constants.
    ``α(θ̄_λ) = θ̄_λ + Σ_i μ_{λi} θ_i`` and ``α(θ_λ)`` is its conjugate.
    """
    g = _lie(k)
    n = g.n
    mu = _mu_matrix(k, x)

    def br(u, v):
        hol = g.bracket(u[:n], v[:n])
        bar = [conj(c) for c in g.bracket([conj(a) for a in u[n:]], [conj(a) for a in v[n:]])]
        return hol + bar

    def alpha(v):
        out = list(v)
        for lam in range(n):
            if v[n + lam]:
                for i in range(n):
                    out[i] += v[n + lam] * mu[lam][i]
            if v[lam]:
                for i in range(n):
                    out[n + i] += v[lam] * conj(mu[lam][i])
        return out

    sym = g.vector_symbol
    names = [f"{sym}{i}" for i in range(1, n + 1)] + [f"{sym}̄{i}" for i in range(1, n + 1)]
    basis = []
    for a in range(2 * n):
        e = [_ZERO] * (2 * n)
        e[a] = mpq(1)
        basis.append(e)
    fails = []
    for a in range(2 * n):
        for b in range(a + 1, 2 * n):
            lhs = br(alpha(basis[a]), alpha(basis[b]))
            rhs = alpha(br(basis[a], basis[b]))
            diff = [p - q for p, q in zip(lhs, rhs)]
            if any(diff):
                fails.append((names[a], names[b], diff))
    ok2, bad2 = check_parallelisable_direction(k, x)
    return AlphaReport(_mu_dbar_closed(k, x), ok2, bad2, not fails, fails)


# ---------------------------------------------------------------------------
# Kuranishi iteration


@dataclass(frozen=True)
class KuranishiConfig:
    order: int = 4
    mode: str = "full"  # "full" or "essential"
    directions: tuple | None = None  # indices into the mode's direction list
    replay: bool = True

    def __post_init__(self):
        if self.mode not in ("full", "essential"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.order < 1:
            raise ValueError("order must be at least 1")


@dataclass
class Direction:
    """One first-order parameter ``t_j``."""

    label: str
    form: list  # representative in A^{n-1,1}
    admissible: bool  # ⌟u-image is d-closed
    correction: list = field(default_factory=list)

    def to_dict(self, k):
        n = k.n
        return {
            "label": self.label,
            "representative": k.describe(n - 1, 1, self.form),
            "admissible": self.admissible,
            "correction_is_zero": not any(self.correction),
        }


@dataclass
class ObstructionReport:
    order: int
    monomial: tuple
    monomial_label: str
    obstructed_monomials: list
    rhs: str
    e1_class: list
    mode: str

    def to_dict(self):
        return {
            "order": self.order,
            "monomial": list(self.monomial),
            "monomial_label": self.monomial_label,
            "obstructed_monomials": self.obstructed_monomials,
            "rhs": self.rhs,
            "e1_class": [format_scalar(c) for c in self.e1_class],
            "mode": self.mode,
        }


@dataclass
class DeformationSeries:
    m: int
    order: int
    mode: str
    directions: list
    terms: dict  # exponent tuple -> PolyVector (dense)
    statuses: list  # per order ν >= 2: dict
    obstruction: ObstructionReport | None = None
    replay_ok: bool | None = None

    @property
    def solved(self) -> bool:
        return self.obstruction is None

    def to_dict(self, k):
        pv = polyvectors(k)
        nonzero = {mono: x for mono, x in self.terms.items() if any(x)}
        return {
            "mode": self.mode,
            "order": self.order,
            "parameters": self.m,
            "directions": [d.to_dict(k) for d in self.directions],
            "statuses": self.statuses,
            "solved": self.solved,
            "obstruction": self.obstruction.to_dict() if self.obstruction else None,
            "replay_ok": self.replay_ok,
            "terms": [{"monomial": monomial_label(mono), "degree": sum(mono), "psi": pv.describe(x)}
                      for mono, x in sorted(nonzero.items(), key=lambda kv: (sum(kv[0]), [-e for e in kv[0]]))],
        }


def monomial_label(mono) -> str:
    parts = []
    for j, e in enumerate(mono):
        if e == 1:
            parts.append(f"t{j + 1}")
        elif e:
            parts.append(f"t{j + 1}^{e}")
    return "·".join(parts) or "1"


def _monomials(m: int, degree: int) -> list:
    out = []
    for combo in combinations_with_replacement(range(m), degree):
        e = [0] * m
        for j in combo:
            e[j] += 1
        out.append(tuple(e))
    return out


def _splits(mono):
    """All ``(β, γ)`` with ``β + γ = mono`` and both of positive degree."""
    total = sum(mono)
    for beta in product(*(range(e + 1) for e in mono)):
        s = sum(beta)
        if 0 < s < total:
            yield beta, tuple(e - b for e, b in zip(mono, beta))


def full_directions(ctx: MetricContext) -> list:
    """One direction per ``Δ''``-harmonic basis form of ``A^{n-1,1}``.

    Each harmonic form is corrected by the minimal ``∂̄``-exact term making it
    d-closed; forms whose class admits no d-closed representative are kept
    as is and flagged inadmissible.
    """
    k = ctx.k
    n = k.n
    pv = polyvectors(k)
    out = []
    for alpha in harmonic1(ctx, n - 1, 1).basis():
        rhs = [-c for c in k.d(n - 1, 1).apply(alpha)]
        try:
            xi = min_norm_ddbar_solve(ctx, n, 1, rhs)
        except SolvabilityError:
            out.append(Direction(pv.describe(contract_u_inverse(k, alpha)), alpha, False, []))
            continue
        form = vec_add(alpha, k.dbar(n - 1, 0).apply(xi))
        out.append(Direction(pv.describe(contract_u_inverse(k, form)), form, True, xi))
    return out


def essential_directions(ctx: MetricContext) -> list:
    k = ctx.k
    pv = polyvectors(k)
    _j, lifts = omega_lift(ctx)
    return [Direction(pv.describe(contract_u_inverse(k, l.lifted_rep)), l.lifted_rep, True, l.correction)
            for l in lifts]


def kuranishi_iterate(ctx: MetricContext, config: KuranishiConfig | None = None, first_order=None):
    """Solve the integrability equations degree by degree up to ``config.order``.

    ``first_order`` may be a list of :class:`Direction` objects or of
    ``A^{n-1,1}`` representatives; by default the directions come from the
    mode.  At every order each monomial coefficient of ``½Σ[ψ_β, ψ_γ]⌟u`` is
    first solved by the ``∂̄∂``-potential scheme, then by a plain ``∂̄``
    solve, and reported as obstructed if neither works.  Returns a
    :class:`DeformationSeries`; its ``obstruction`` field carries the
    :class:`ObstructionReport` when the iteration stopped.
    """
    cfg = config or KuranishiConfig()
    k = ctx.k
    n = k.n
    pv = polyvectors(k)
    if first_order is None:
        dirs = essential_directions(ctx) if cfg.mode == "essential" else full_directions(ctx)
    else:
        dirs = [d if isinstance(d, Direction) else Direction(pv.describe(contract_u_inverse(k, d)), list(d),
                                                             not any(k.d(n - 1, 1).apply(d)))
                for d in first_order]
    if cfg.directions is not None:
        try:
            dirs = [dirs[i] for i in cfg.directions]
        except IndexError:
            raise ValueError(f"direction index out of range (have {len(dirs)})") from None
    for d in dirs:
        if any(k.dbar(n - 1, 1).apply(d.form)):
            raise PreconditionError(f"first-order direction {d.label} is not ∂̄-closed")
    m = len(dirs)
    terms: dict = {}
    forms: dict = {}  # exponent -> ψ⌟u
    for j, d in enumerate(dirs):
        e = tuple(1 if i == j else 0 for i in range(m))
        forms[e] = list(d.form)
        terms[e] = contract_u_inverse(k, d.form)
    closed = {e: not any(k.d(n - 1, 1).apply(f)) for e, f in forms.items()}

    tt = _table(k, "tt")
    direct = _table(k, "direct")
    dbar_solver = k.memo(("dbar_solver", n - 1, 1), lambda: MinNormSolver(k.dbar(n - 1, 1), k.gram(n - 1, 1)))
    im_d = _im_d(k, n - 1, 1)
    ker_dbar_target = kernel(k.dbar(n - 1, 2))
    statuses = []
    obstruction = None
    for nu in range(2, cfg.order + 1):
        counts = {"scheme-solved": 0, "dbar-solved": 0, "obstructed": 0, "zero": 0}
        obstructed = []
        direct_used = 0
        new_forms = {}
        for mono in _monomials(m, nu):
            rhs = [_ZERO] * k.dim(n - 1, 2)
            for beta, gamma in _splits(mono):
                x, y = terms.get(beta), terms.get(gamma)
                if x is None or y is None or not any(x) or not any(y):
                    continue
                if closed[beta] and closed[gamma]:
                    br = _bilinear(k, tt, x, y)
                else:
                    br = _bilinear(k, direct, x, y)
                    direct_used += 1
                rhs = vec_add(rhs, vec_scale(_HALF, br))
            if not any(rhs):
                counts["zero"] += 1
                new_forms[mono] = [_ZERO] * k.dim(n - 1, 1)
                continue
            try:
                phi = min_norm_ddbar_solve(ctx, n - 1, 2, [-c for c in rhs])
                eta = k.d(n - 2, 1).apply(phi)
                if k.dbar(n - 1, 1).apply(eta) != rhs:
                    raise InternalInconsistency("potential scheme produced a wrong solution")
                if not im_d.contains(eta):
                    raise InternalInconsistency("ψ⌟u left Im ∂ in a scheme-solved step")
                counts["scheme-solved"] += 1
                new_forms[mono] = eta
                continue
            except SolvabilityError:
                pass
            if dbar_solver.solvable(rhs):
                counts["dbar-solved"] += 1
                new_forms[mono] = dbar_solver.solve(rhs)
                continue
            if not ker_dbar_target.contains(rhs):
                raise InternalInconsistency("right-hand side of the integrability equation is not ∂̄-closed")
            counts["obstructed"] += 1
            obstructed.append((mono, rhs))
        if counts["obstructed"]:
            status = "obstructed"
        elif counts["dbar-solved"]:
            status = "dbar-solved"
        else:
            status = "scheme-solved"
        statuses.append({"order": nu, "status": status, "counts": counts, "direct_brackets": direct_used})
        if obstructed:
            mono, rhs = obstructed[0]
            obstruction = ObstructionReport(
                order=nu,
                monomial=mono,
                monomial_label=monomial_label(mono),
                obstructed_monomials=[monomial_label(mo) for mo, _ in obstructed],
                rhs=k.describe(n - 1, 2, rhs),
                e1_class=Er_quotient(k, 1, n - 1, 2).coords(rhs),
                mode=cfg.mode,
            )
            break
        for mono, eta in new_forms.items():
            forms[mono] = eta
            terms[mono] = contract_u_inverse(k, eta)
            closed[mono] = not any(k.d(n - 1, 1).apply(eta))
    series = DeformationSeries(m, cfg.order, cfg.mode, dirs, terms, statuses, obstruction)
    if cfg.replay and obstruction is None:
        series.replay_ok = not any(any(r) for r in replay_residual(k, series).values())
    return series


def replay_residual(k: DoubleComplex, series: DeformationSeries) -> dict:
    """``∂̄(ψ⌟u) - ½[ψ, ψ]⌟u`` per monomial of degree ``2..N``, with the direct bracket."""
    n = k.n
    out = {}
    for nu in range(2, series.order + 1):
        for mono in _monomials(series.m, nu):
            lhs = k.dbar(n - 1, 1).apply(contract_u(k, series.terms.get(mono, [_ZERO] * polyvectors(k).dim)))
            for beta, gamma in _splits(mono):
                x, y = series.terms.get(beta), series.terms.get(gamma)
                if x is None or y is None:
                    continue
                lhs = vec_add(lhs, vec_scale(-_HALF, direct_bracket_u(k, x, y)))
            out[mono] = lhs
    return out
