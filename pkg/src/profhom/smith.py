"""Smith normal form over the integers.

Pivot rule: the nonzero entry of minimal absolute value in the active block,
ties broken by lowest (row, col). The rule is deterministic, so every
derived object (homology generators, transition matrices) is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

from .matrix import IntMatrix


@dataclass
class SmithResult:
    """``U @ M @ V == D`` with U, V unimodular.

    ``diagonal`` lists the invariant factors d_1 | d_2 | ... | d_r (all > 0)
    followed by nothing; ``rank`` is r. The optional inverses are plain
    nested lists (row-major) because internal callers only index them.
    """

    U: list[list[int]]
    V: list[list[int]]
    diagonal: list[int]
    rows: int
    cols: int
    Uinv: list[list[int]] | None = None
    Vinv: list[list[int]] | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _eye(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def snf(a: list[list[int]], m: int, n: int, *, want_u: bool = True, want_v: bool = True,
        want_uinv: bool = False, want_vinv: bool = False) -> SmithResult:
    """Smith form of the m x n row-major matrix ``a`` (consumed in place)."""
    U = _eye(m) if want_u else None
    Ui = _eye(m) if want_uinv else None
    V = _eye(n) if want_v else None
    Vi = _eye(n) if want_vinv else None

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst: int, src: int, c: int) -> None:
        # row_dst += c * row_src
        rs, rd = a[src], a[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += c * rs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += c * us[k]
        if Ui is not None:
            for r in Ui:
                if r[dst]:
                    r[src] -= c * r[dst]

    def add_col(dst: int, src: int, c: int) -> None:
        # col_dst += c * col_src
        for r in a:
            if r[src]:
                r[dst] += c * r[src]
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] += c * r[src]
        if Vi is not None:
            vs, vd = Vi[src], Vi[dst]
            for k in range(n):
                if vd[k]:
                    vs[k] -= c * vd[k]

    def negate_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]
        if Ui is not None:
            for r in Ui:
                r[i] = -r[i]

    diagonal: list[int] = []
    t = 0
    while t < min(m, n):
        # locate pivot
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        p = a[t][t]
        dirty = False
        for i in range(t + 1, m):
            x = a[i][t]
            if x:
                add_row(i, t, -(x // p))
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            x = a[t][j]
            if x:
                add_col(j, t, -(x // p))
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        bad = None
        for i in range(t + 1, m):
            row = a[i]
            for j in range(t + 1, n):
                if row[j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            add_row(t, bad, 1)
            continue
        if p < 0:
            negate_row(t)
        diagonal.append(a[t][t])
        t += 1
    return SmithResult(U or [], V or [], diagonal, m, n, Ui, Vi)


def smith_decompose(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` in Smith normal form."""
    res = snf(M.tolist(), M.rows, M.cols)
    D = IntMatrix.diag(res.diagonal, M.rows, M.cols)
    return IntMatrix(res.U, M.rows, M.rows), D, IntMatrix(res.V, M.cols, M.cols)


def invariant_factors(M: IntMatrix) -> list[int]:
    """Nonzero diagonal of the Smith form."""
    return snf(M.tolist(), M.rows, M.cols, want_u=False, want_v=False).diagonal
