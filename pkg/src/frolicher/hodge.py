"""Metric layer: adjoints, Laplacians, harmonic spaces and the ω-lift.

All inner products are ``<x, y> = y^H G x`` with the per-bidegree gram
matrix ``G`` of the model (identity unless the model declares otherwise).
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .complex import DoubleComplex
from .linalg import (
    Matrix,
    MinNormSolver,
    Subspace,
    Unsolvable,
    kernel,
    vec_add,
    vec_scale,
)
from .linalg import _inverse
from .spectral import Er_quotient, Zr, Cr, dr_map, page_ddbar

__all__ = [
    "MetricContext",
    "LiftResult",
    "SolvabilityError",
    "adjoint",
    "laplacian_dbar",
    "harmonic1",
    "laplacian_tilde",
    "harmonic2",
    "bc_laplacian",
    "min_norm_ddbar_solve",
    "green_ddbar_solve",
    "E1_zero",
    "P_map",
    "P_of_class",
    "d_closed_rep",
    "omega_lift",
    "essential_space",
]

_ZERO = mpq(0)


class SolvabilityError(ArithmeticError):
    """``∂∂̄ξ = v`` has no solution although the page-1-∂∂̄ property promises one."""


def adjoint(a: Matrix, gram_dom: Matrix | None = None, gram_cod: Matrix | None = None) -> Matrix:
    """``A* = G_dom^{-1} A^H G_cod``, so that ``<Ax, y>_cod = <x, A*y>_dom``."""
    ah = a.conj_transpose()
    if gram_cod is not None:
        ah = ah @ gram_cod
    if gram_dom is not None:
        ah = _inverse(gram_dom) @ ah
    return ah


class MetricContext:
    """A double complex together with its Hermitian metric.

    Operators are cached per bidegree; the cache lives on the context, which is
    the only mutable state in this module.
    """

    def __init__(self, complex_: DoubleComplex, grams=None):
        self.k = complex_ if grams is None else complex_.with_grams(grams)
        self._cache: dict = {}
        for p, q in self.k.bidegrees():
            g = self.k.gram(p, q)
            if not g.is_hermitian():
                raise ValueError(f"gram of bidegree ({p},{q}) is not Hermitian")

    @property
    def n(self):
        return self.k.n

    def _memo(self, key, fn):
        try:
            return self._cache[key]
        except KeyError:
            return self._cache.setdefault(key, fn())

    def gram(self, p, q):
        return self.k.gram(p, q)

    def ok(self, p, q):
        return 0 <= p <= self.n and 0 <= q <= self.n

    # first-order operators between neighbouring slots ------------------------
    def d(self, p, q):
        return self.k.d(p, q)

    def dbar(self, p, q):
        return self.k.dbar(p, q)

    def d_star(self, p, q) -> Matrix:
        """``∂* : A^{p,q} -> A^{p-1,q}``."""
        def go():
            if p < 1:
                return Matrix.zeros(0, self.k.dim(p, q))
            return adjoint(self.d(p - 1, q), self.gram(p - 1, q), self.gram(p, q))
        return self._memo(("d*", p, q), go)

    def dbar_star(self, p, q) -> Matrix:
        """``∂̄* : A^{p,q} -> A^{p,q-1}``."""
        def go():
            if q < 1:
                return Matrix.zeros(0, self.k.dim(p, q))
            return adjoint(self.dbar(p, q - 1), self.gram(p, q - 1), self.gram(p, q))
        return self._memo(("dbar*", p, q), go)

    def inner(self, p, q, x, y):
        g = self.gram(p, q)
        gx = g.apply(x)
        from .field import conj
        return sum((a * conj(b) for a, b in zip(gx, y) if a and b), _ZERO)

    def projector(self, s: Subspace, p, q) -> Matrix:
        """Orthogonal projection onto ``s`` for the metric of ``A^{p,q}``."""
        if s.dim == 0:
            return Matrix.zeros(s.ambient_dim, s.ambient_dim)
        w = s.basis_matrix()
        g = self.gram(p, q)
        whg = w.conj_transpose() @ g
        return w @ (_inverse(whg @ w) @ whg)


def _zero_sq(ctx, p, q):
    d = ctx.k.dim(p, q)
    return Matrix.zeros(d, d)


def laplacian_dbar(ctx: MetricContext, p: int, q: int) -> Matrix:
    """``Δ'' = ∂̄∂̄* + ∂̄*∂̄`` on ``A^{p,q}``."""
    def go():
        lap = _zero_sq(ctx, p, q)
        if q >= 1:
            lap = lap + ctx.dbar(p, q - 1) @ ctx.dbar_star(p, q)
        if q + 1 <= ctx.n:
            lap = lap + ctx.dbar_star(p, q + 1) @ ctx.dbar(p, q)
        return lap
    return ctx._memo(("lap''", p, q), go)


def harmonic1(ctx: MetricContext, p: int, q: int) -> Subspace:
    return ctx._memo(("H1", p, q), lambda: kernel(laplacian_dbar(ctx, p, q)))


def _p2(ctx, p, q) -> Matrix:
    return ctx._memo(("p''", p, q), lambda: ctx.projector(harmonic1(ctx, p, q), p, q))


def laplacian_tilde(ctx: MetricContext, p: int, q: int) -> Matrix:
    """``Δ̃ = ∂ p'' ∂* + ∂* p'' ∂ + Δ''`` with ``p''`` the projection onto ``ker Δ''``."""
    def go():
        lap = laplacian_dbar(ctx, p, q)
        if p >= 1:
            lap = lap + ctx.d(p - 1, q) @ (_p2(ctx, p - 1, q) @ ctx.d_star(p, q))
        if p + 1 <= ctx.n:
            lap = lap + ctx.d_star(p + 1, q) @ (_p2(ctx, p + 1, q) @ ctx.d(p, q))
        return lap
    return ctx._memo(("lap~", p, q), go)


def harmonic2(ctx: MetricContext, p: int, q: int) -> Subspace:
    return ctx._memo(("H2", p, q), lambda: kernel(laplacian_tilde(ctx, p, q)))


def _compose(*ms):
    out = ms[0]
    for m in ms[1:]:
        out = out @ m
    return out


def bc_laplacian(ctx: MetricContext, p: int, q: int) -> Matrix:
    """Bott-Chern Laplacian on ``A^{p,q}`` (a fourth-order operator).

    ``Δ_BC = ∂∂̄∂̄*∂* + ∂̄*∂*∂∂̄ + ∂̄*∂∂*∂̄ + ∂*∂̄∂̄*∂ + ∂̄*∂̄ + ∂*∂``.
    Terms whose intermediate slots fall outside the square vanish.
    """
    def go():
        n = ctx.n
        k = ctx.k
        lap = _zero_sq(ctx, p, q)
        # ∂∂̄∂̄*∂*
        if p >= 1 and q >= 1:
            lap = lap + _compose(k.d(p - 1, q), k.dbar(p - 1, q - 1), ctx.dbar_star(p - 1, q), ctx.d_star(p, q))
        # ∂̄*∂*∂∂̄
        if p + 1 <= n and q + 1 <= n:
            lap = lap + _compose(ctx.dbar_star(p, q + 1), ctx.d_star(p + 1, q + 1), k.d(p, q + 1), k.dbar(p, q))
        # ∂̄*∂∂*∂̄
        if q + 1 <= n and p >= 1:
            lap = lap + _compose(ctx.dbar_star(p, q + 1), k.d(p - 1, q + 1), ctx.d_star(p, q + 1), k.dbar(p, q))
        # ∂*∂̄∂̄*∂
        if p + 1 <= n and q >= 1:
            lap = lap + _compose(ctx.d_star(p + 1, q), k.dbar(p + 1, q - 1), ctx.dbar_star(p + 1, q), k.d(p, q))
        if q + 1 <= n:
            lap = lap + ctx.dbar_star(p, q + 1) @ k.dbar(p, q)
        if p + 1 <= n:
            lap = lap + ctx.d_star(p + 1, q) @ k.d(p, q)
        return lap
    return ctx._memo(("lapBC", p, q), go)


def _ddbar_op(ctx, p, q) -> Matrix:
    """``∂∂̄ : A^{p-1,q-1} -> A^{p,q}``."""
    return ctx._memo(("ddbar_into", p, q), lambda: ctx.k.d(p - 1, q) @ ctx.k.dbar(p - 1, q - 1))


def _ddbar_solver(ctx, p, q) -> MinNormSolver:
    return ctx._memo(("ddbar_solver", p, q),
                     lambda: MinNormSolver(_ddbar_op(ctx, p, q), ctx.gram(p - 1, q - 1)))


def min_norm_ddbar_solve(ctx: MetricContext, p: int, q: int, v) -> list:
    """Minimal-norm ``u ∈ A^{p-1,q-1}`` with ``∂∂̄u = v`` for ``v ∈ A^{p,q}``."""
    if p < 1 or q < 1:
        if any(v):
            raise SolvabilityError("∂∂̄ has no source in this bidegree")
        return [_ZERO] * ctx.k.dim(max(p - 1, 0), max(q - 1, 0))
    try:
        return _ddbar_solver(ctx, p, q).solve(v)
    except Unsolvable:
        raise SolvabilityError(f"form of bidegree ({p},{q}) is not ∂∂̄-exact") from None


def green_ddbar_solve(ctx: MetricContext, p: int, q: int, v) -> list:
    """Same solution via the Bott-Chern Green operator: ``u = (∂∂̄)* Δ_BC^{-1} v``."""
    lap = bc_laplacian(ctx, p, q)
    solver = ctx._memo(("lapBC_solver", p, q), lambda: MinNormSolver(lap, ctx.gram(p, q)))
    try:
        w = solver.solve(v)
    except Unsolvable:
        raise SolvabilityError("right-hand side is not orthogonal to the Bott-Chern harmonic space") from None
    adj = ctx._memo(("ddbar*", p, q),
                    lambda: adjoint(_ddbar_op(ctx, p, q), ctx.gram(p - 1, q - 1), ctx.gram(p, q)))
    return adj.apply(w)


# ---------------------------------------------------------------------------
# E_1(X)_0, the map P and the ω-lift


def E1_zero(k: DoubleComplex, p: int, q: int) -> Subspace:
    """``E_1``-classes admitting an ``E_2``-closed representative, in ``E_1`` coordinates."""
    return kernel(dr_map(k, 1, p, q))


def P_of_class(k: DoubleComplex, p: int, q: int, e1_coords) -> list:
    """``P({α}_{E_1}) = {α'}_{E_2}`` where ``α'`` is an ``E_2``-closed representative of the class."""
    q1 = Er_quotient(k, 1, p, q)
    rep = q1.lift(e1_coords)
    z2 = Zr(k, 2, p, q)
    c1 = Cr(k, 1, p, q)
    solver, nz = k.memo(("P_solver", p, q), lambda: _split_solver(z2, c1))
    try:
        coef = solver.solve(rep)
    except Unsolvable:
        raise ValueError("class has no E_2-closed representative") from None
    zpart = [_ZERO] * k.dim(p, q)
    for c, b in zip(coef[:nz], z2.basis()):
        if c:
            zpart = vec_add(zpart, vec_scale(c, b))
    return Er_quotient(k, 2, p, q).coords(zpart)


def _split_solver(z: Subspace, c: Subspace):
    cols = z.basis() + c.basis()
    return MinNormSolver(Matrix.from_columns(cols, z.ambient_dim) if cols else Matrix.zeros(z.ambient_dim, 0)), z.dim


def P_map(k: DoubleComplex, p: int, q: int) -> Matrix:
    """Matrix of ``P : E_1(X)_0 -> E_2`` in the canonical basis of ``E1_zero``."""
    e10 = E1_zero(k, p, q)
    cols = [P_of_class(k, p, q, b) for b in e10.basis()]
    d2 = Er_quotient(k, 2, p, q).dim
    return Matrix.from_columns(cols, d2) if cols else Matrix.zeros(d2, 0)


@dataclass
class LiftResult:
    e2_class: list
    harmonic_rep: list
    correction: list
    lifted_rep: list
    lifted_class: list
    bidegree: tuple

    def correction_is_zero(self) -> bool:
        return not any(self.correction)


def _harmonic_in_class(ctx: MetricContext, p: int, q: int, e2_coords) -> list:
    h2 = harmonic2(ctx, p, q)
    q2 = Er_quotient(ctx.k, 2, p, q)
    if h2.dim != q2.dim:
        raise ArithmeticError("Hodge isomorphism failed: dim ker Δ̃ differs from dim E_2")
    basis = h2.basis()

    def build():
        m = Matrix.from_columns([q2.coords(b) for b in basis], q2.dim) if basis else Matrix.zeros(0, 0)
        return _inverse(m) if basis else m
    inv = ctx._memo(("H2_to_E2_inv", p, q), build)
    c = inv.apply(list(e2_coords)) if basis else []
    out = [_ZERO] * ctx.k.dim(p, q)
    for x, b in zip(c, basis):
        if x:
            out = vec_add(out, vec_scale(x, b))
    return out


def d_closed_rep(ctx: MetricContext, e2_coords, p: int | None = None, q: int | None = None) -> LiftResult:
    """The ω-lift of one ``E_2`` class: Δ̃-harmonic representative plus minimal ``∂̄``-correction."""
    k = ctx.k
    if p is None:
        p, q = k.n - 1, 1
    alpha = _harmonic_in_class(ctx, p, q, e2_coords)
    rhs = [-x for x in k.d(p, q).apply(alpha)]
    # ∂∂̄ξ = -∂α with ξ ∈ A^{p,q-1}; the target lives in A^{p+1,q}
    xi = min_norm_ddbar_solve(ctx, p + 1, q, rhs)
    corr = k.dbar(p, q - 1).apply(xi) if q >= 1 else [_ZERO] * k.dim(p, q)
    lifted = vec_add(alpha, corr)
    if any(k.d(p, q).apply(lifted)) or any(k.dbar(p, q).apply(lifted)):
        raise ArithmeticError("lifted representative is not d-closed")
    cls = Er_quotient(k, 1, p, q).coords(lifted)
    return LiftResult(list(e2_coords), alpha, xi, lifted, cls, (p, q))


def omega_lift(ctx: MetricContext, p: int | None = None, q: int | None = None, *, require_page1: bool = True):
    """``J : E_2^{p,q} -> E_1^{p,q}`` as a matrix, with the per-class lift data."""
    k = ctx.k
    if p is None:
        p, q = k.n - 1, 1

    def go():
        if require_page1 and not page_ddbar(k, 2).holds:
            raise SolvabilityError("the model is not page-1-∂∂̄, so ω-lifts need not exist")
        d2 = Er_quotient(k, 2, p, q).dim
        d1 = Er_quotient(k, 1, p, q).dim
        lifts = []
        for i in range(d2):
            e = [_ZERO] * d2
            e[i] = mpq(1)
            lifts.append(d_closed_rep(ctx, e, p, q))
        j = Matrix.from_columns([l.lifted_class for l in lifts], d1) if lifts else Matrix.zeros(d1, 0)
        return j, lifts
    return ctx._memo(("J", p, q, require_page1), go)


def essential_space(ctx: MetricContext, p: int | None = None, q: int | None = None) -> Subspace:
    """Image of ``J`` inside ``E_1^{p,q}`` (in ``E_1`` coordinates)."""
    j, _ = omega_lift(ctx, p, q)
    return Subspace.span(j.rows, j.columns())
