"""Monomial bookkeeping for invariant-form models.

A basis monomial is a key ``(w, I, J)`` standing for
``e^{a z_v + b z̄_v} φ_I ∧ φ̄_J`` where ``w = (a, b)`` are small integers,
``z_v`` is the weight variable and ``I``, ``J`` are increasing tuples of
1-based frame indices.  Forms are written holomorphic-first throughout.

The frame satisfies ``∂φ_k = Σ_{i<j} D[k][(i,j)] φ_i∧φ_j`` and ``∂̄φ_k = 0``;
``∂̄φ̄_k`` is the conjugate rule and ``∂φ̄_k = 0``.  For a Lie algebra with
brackets ``[θ_i, θ_j] = Σ c_ij^k θ_k`` the Cartan formula gives
``D[k][(i,j)] = -c_ij^k``.  Weighted models use the coordinate frame
``φ_k = dz_k`` (all ``D`` zero); their only differentials come from the
exponential coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from gmpy2 import mpq

from .field import conj

_ZERO = mpq(0)
_ONE = mpq(1)

SUBSCRIPTS = str.maketrans("0123456789-", "₀₁₂₃₄₅₆₇₈₉₋")
MACRON = "̄"
MINUS = "−"


def sort_sign(word):
    """Sort a word of distinct indices; return ``(sign, sorted_tuple)``, or ``(0, None)`` on a repeat."""
    w = list(word)
    if len(set(w)) != len(w):
        return 0, None
    sign = 1
    # insertion sort counting transpositions
    for i in range(1, len(w)):
        j = i
        while j > 0 and w[j - 1] > w[j]:
            w[j - 1], w[j] = w[j], w[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(w)


def _add(acc: dict, key, c):
    s = acc.get(key, _ZERO) + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def _sub(n: int) -> str:
    return str(n).translate(SUBSCRIPTS)


def _coef_term(c: int, var: str) -> str:
    if c == 1:
        return var
    if c == -1:
        return MINUS + var
    return (str(c) if c > 0 else MINUS + str(-c)) + var


def weight_label(w, v: int) -> str:
    a, b = w
    if a == 0 and b == 0:
        return ""
    parts = []
    if a:
        parts.append(_coef_term(a, f"z{_sub(v)}"))
    if b:
        t = _coef_term(b, f"z{MACRON}{_sub(v)}")
        if parts and not t.startswith(MINUS):
            t = "+" + t
        parts.append(t)
    return "e^{" + "".join(parts) + "}"


@dataclass(frozen=True)
class FormAlgebra:
    """Exterior algebra of an invariant frame, with differentials and contractions.

    ``monomials`` is the ordered basis per bidegree; for Lie-algebra models it
    is every ``(I, J)`` with zero weight, for weighted models the declared
    generator list.
    """

    n: int
    dphi: dict  # k -> {(i, j): coeff}
    monomials: dict  # (p, q) -> list of keys
    weight_variable: int = 1
    frame_symbol: str = "φ"
    vector_symbol: str = "θ"
    index: dict = dc_field(default_factory=dict, compare=False)

    def __post_init__(self):
        idx = {}
        for pq, keys in self.monomials.items():
            for pos, k in enumerate(keys):
                idx[k] = (pq, pos)
        object.__setattr__(self, "index", idx)

    # ------------------------------------------------------------------ basics
    @property
    def weighted(self) -> bool:
        return any(k[0] != (0, 0) for k in self.index)

    def structure_constants(self) -> dict:
        """``c[(i, j)][k]`` for ``i < j``, read off from ``∂φ_k``."""
        c: dict = {}
        for k, terms in self.dphi.items():
            for (i, j), x in terms.items():
                c.setdefault((i, j), {})[k] = -x
        return c

    def bracket_vectors(self, i: int, j: int) -> dict:
        """``[θ_i, θ_j]`` as ``{k: coeff}``."""
        if i == j:
            return {}
        if i < j:
            return {k: -x for k, terms in self.dphi.items() for (a, b), x in terms.items() if (a, b) == (i, j)}
        return {k: x for k, terms in self.dphi.items() for (a, b), x in terms.items() if (a, b) == (j, i)}

    def volume_key(self):
        return ((0, 0), tuple(range(1, self.n + 1)), ())

    def dim(self, p: int, q: int) -> int:
        return len(self.monomials.get((p, q), ()))

    # ------------------------------------------------------------ differentials
    def _d_hol_word(self, I):
        """``∂φ_I`` as ``{I': coeff}`` (frame part only)."""
        out: dict = {}
        for pos, k in enumerate(I):
            terms = self.dphi.get(k)
            if not terms:
                continue
            base = -1 if pos % 2 else 1
            for (i, j), c in terms.items():
                s, w = sort_sign(I[:pos] + (i, j) + I[pos + 1:])
                if s:
                    _add(out, w, base * s * c)
        return out

    def _dbar_antihol_word(self, J):
        out: dict = {}
        for pos, k in enumerate(J):
            terms = self.dphi.get(k)
            if not terms:
                continue
            base = -1 if pos % 2 else 1
            for (i, j), c in terms.items():
                s, w = sort_sign(J[:pos] + (i, j) + J[pos + 1:])
                if s:
                    _add(out, w, base * s * conj(c))
        return out

    def del_monomial(self, key) -> dict:
        w, I, J = key
        a, _b = w
        out: dict = {}
        v = self.weight_variable
        if a:
            s, I2 = sort_sign((v,) + I)
            if s:
                _add(out, (w, I2, J), mpq(a) * s)
        for I2, c in self._d_hol_word(I).items():
            _add(out, (w, I2, J), c)
        return out

    def dbar_monomial(self, key) -> dict:
        w, I, J = key
        _a, b = w
        out: dict = {}
        sgnI = -1 if len(I) % 2 else 1
        v = self.weight_variable
        if b:
            s, J2 = sort_sign((v,) + J)
            if s:
                _add(out, (w, I, J2), mpq(b) * s * sgnI)
        for J2, c in self._dbar_antihol_word(J).items():
            _add(out, (w, I, J2), sgnI * c)
        return out

    def conj_monomial(self, key):
        """``σ(key) = sign · key'`` with σ antilinear; returns ``(sign, key')``."""
        (a, b), I, J = key
        sign = -1 if (len(I) * len(J)) % 2 else 1
        return sign, ((b, a), J, I)

    # ------------------------------------------------------------ contraction
    @staticmethod
    def interior(i: int, key):
        """Interior product ``ι_{θ_i}`` of a monomial: ``(sign, key')`` or ``(0, None)``."""
        w, I, J = key
        if i not in I:
            return 0, None
        pos = I.index(i)
        return (-1 if pos % 2 else 1), (w, I[:pos] + I[pos + 1:], J)

    def contract_monomial(self, vec, key):
        """Contract the vector-valued form ``e^{w} φ̄_Λ ⊗ θ_i`` into a form monomial.

        ``vec = (w, Λ, i)`` with ``Λ`` an increasing tuple (length 1 for
        (0,1)-vector forms, 2 for brackets).  The form is first written
        antiholomorphic-first, the vector part is contracted into the
        holomorphic factor, ``φ̄_Λ`` is wedged on the left and the result is
        brought back to holomorphic-first order.  Returns ``(sign, key')`` or
        ``(0, None)``.
        """
        wv, Lam, i = vec
        w, I, J = key
        s0, k1 = self.interior(i, key)
        if not s0:
            return 0, None
        s1, J2 = sort_sign(Lam + J)
        if not s1:
            return 0, None
        p, q = len(I), len(J)
        e = p * q + (q + len(Lam)) * (p - 1)
        sign = s0 * s1 * (-1 if e % 2 else 1)
        return sign, ((w[0] + wv[0], w[1] + wv[1]), k1[1], J2)

    # ------------------------------------------------------------ labels
    def label(self, key) -> str:
        w, I, J = key
        pre = weight_label(w, self.weight_variable)
        if not I and not J:
            return pre or "1"
        body = "".join(str(i) for i in I)
        bars = " ".join(f"{j}{MACRON}" for j in J)
        if body and bars:
            body = body + " " + bars
        else:
            body = body or bars
        if len(I) + len(J) == 1:
            sym = self.frame_symbol + (MACRON if J else "")
            return f"{pre}{sym}{_sub((I or J)[0])}"
        return f"{pre}{self.frame_symbol}_{{{body}}}"

    def vector_label(self, vec) -> str:
        wv, Lam, i = vec
        pre = weight_label(wv, self.weight_variable)
        bar = self.frame_symbol + MACRON
        if len(Lam) == 1:
            form = f"{bar}{_sub(Lam[0])}"
        else:
            form = f"{bar}_{{{' '.join(str(l) for l in Lam)}}}"
        return f"{pre}{form}⊗{self.vector_symbol}{_sub(i)}"

def ce_monomials(n: int) -> dict:
    out = {}
    idx = range(1, n + 1)
    for p in range(n + 1):
        for q in range(n + 1):
            out[(p, q)] = [((0, 0), I, J) for I in combinations(idx, p) for J in combinations(idx, q)]
    return out


def sort_monomials(keys) -> dict:
    """Group keys by bidegree in canonical order: weight first, then ``I``, then ``J``."""
    out: dict = {}
    for k in keys:
        out.setdefault((len(k[1]), len(k[2])), []).append(k)
    for pq in out:
        out[pq] = sorted(set(out[pq]))
    return out
