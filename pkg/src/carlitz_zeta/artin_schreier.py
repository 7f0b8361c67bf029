"""All q roots of z^q - z = xi for xi a LocalSeries with v(xi) >= 0."""
from __future__ import annotations

from .errors import NoUnramifiedSolution
from .field_tower import FieldCtx, artin_schreier_residue
from .local_series import LocalSeries


def principal_root(xi: LocalSeries) -> LocalSeries:
    """z = -sum_j xi^(q^j), the unique root with |z| = |xi| when v(xi) > 0."""
    if xi.is_zero():
        return xi
    if xi.val <= 0:
        raise ValueError("principal root needs v(xi) > 0")
    q, N = xi.level.config.q, xi.prec
    acc = -xi
    j = 1
    while xi.val * q**j < N:
        acc = acc - xi.q_power(j, cap=N)
        j += 1
    return acc


def solve(ctx: FieldCtx, xi: LocalSeries):
    """Roots of z^q - z = xi.

    Returns (ctx, roots, principal_index).  The context may be deeper than
    the one passed in when the residue equation needs a field extension.
    Roots are ordered principal first (when v(xi) > 0), then by the F_q
    offset encoding.  principal_index is None in the unit case.
    """
    q = ctx.config.q
    if not xi.is_zero() and xi.val < 0:
        raise NoUnramifiedSolution(f"v(xi) = {xi.val} < 0 has no unramified solution")
    fq = ctx.fq_level
    offsets = list(fq.elements())
    if xi.is_zero() or xi.val > 0:
        z = principal_root(xi)
        if xi.is_zero():
            z = LocalSeries.zero(xi.level, xi.prec, xi.delta)
        return ctx, [z + c for c in offsets], 0
    ctx, residue_roots = artin_schreier_residue(ctx, xi.digit(0))
    z0 = LocalSeries.constant(residue_roots[0], xi.prec, xi.delta)
    residual = xi - (z0.q_power(1, cap=xi.prec) - z0)
    z = z0 + principal_root(residual) if not residual.is_zero() else z0
    return ctx, [z + c for c in offsets], None


def defect(z: LocalSeries, xi: LocalSeries) -> LocalSeries:
    return z.q_power(1, cap=z.prec) - z - xi
