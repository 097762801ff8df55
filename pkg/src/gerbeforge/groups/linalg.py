"""Exact integer matrices, Smith normal form and integer linear systems.

Everything here works over Python's arbitrary-precision ``int``; no numeric
dtypes are involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        cols = [list(c) for c in columns]
        for c in cols:
            if len(c) != rows:
                raise ValueError("ragged columns")
        return cls(rows, len(cols), tuple(int(cols[j][i]) for i in range(rows) for j in range(len(cols))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(diag):
            out[i][i] = x
        return cls.from_rows(out, cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def tolist(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_columns(self.tolist(), self.cols) if self.rows else IntMatrix.zeros(self.cols, 0)

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} for {self.rows}x{self.cols} matrix")
        return [sum(a * b for a, b in zip(r, vec)) for r in self._rows]

    @cached_property
    def _rows(self) -> tuple[tuple[int, ...], ...]:
        c = self.cols
        return tuple(self.entries[i * c:(i + 1) * c] for i in range(self.rows))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return IntMatrix.from_rows(_matmul(self.tolist(), other.tolist(), other.cols), other.cols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal_entries(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def determinant(self) -> int:
        """Bareiss fraction-free determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


def hstack(blocks: Sequence[IntMatrix]) -> IntMatrix:
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ValueError("row count mismatch in hstack")
    out = [sum((b.row(i) for b in blocks), []) for i in range(rows)]
    return IntMatrix.from_rows(out, sum(b.cols for b in blocks))


def vstack(blocks: Sequence[IntMatrix]) -> IntMatrix:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ValueError("column count mismatch in vstack")
    return IntMatrix.from_rows([r for b in blocks for r in b.tolist()], cols)


def _matmul(a: list[list[int]], b: list[list[int]], bcols: int) -> list[list[int]]:
    bt = list(zip(*b)) if b else [()] * bcols
    return [[sum(x * y for x, y in zip(row, col) if x) for col in bt] for row in a]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


class _SNF:
    """Smith reduction that also tracks the inverse transforms.

    After ``run``: ``u @ m @ v == d`` and ``u @ uinv == v @ vinv == I``.
    """

    def __init__(self, rows: list[list[int]], nrows: int, ncols: int):
        self.m, self.n = nrows, ncols
        self.d = [list(r) for r in rows]
        self.u = _identity(nrows)
        self.uinv = _identity(nrows)
        self.v = _identity(ncols)
        self.vinv = _identity(ncols)

    # row_i += c * row_j
    def row_add(self, i, j, c):
        if not c:
            return
        self.d[i] = [a + c * b for a, b in zip(self.d[i], self.d[j])]
        self.u[i] = [a + c * b for a, b in zip(self.u[i], self.u[j])]
        for r in self.uinv:
            r[j] -= c * r[i]

    def row_swap(self, i, j):
        if i == j:
            return
        self.d[i], self.d[j] = self.d[j], self.d[i]
        self.u[i], self.u[j] = self.u[j], self.u[i]
        for r in self.uinv:
            r[i], r[j] = r[j], r[i]

    def row_neg(self, i):
        self.d[i] = [-a for a in self.d[i]]
        self.u[i] = [-a for a in self.u[i]]
        for r in self.uinv:
            r[i] = -r[i]

    # col_i += c * col_j
    def col_add(self, i, j, c):
        if not c:
            return
        for r in self.d:
            r[i] += c * r[j]
        for r in self.v:
            r[i] += c * r[j]
        self.vinv[j] = [a - c * b for a, b in zip(self.vinv[j], self.vinv[i])]

    def col_swap(self, i, j):
        if i == j:
            return
        for r in self.d:
            r[i], r[j] = r[j], r[i]
        for r in self.v:
            r[i], r[j] = r[j], r[i]
        self.vinv[i], self.vinv[j] = self.vinv[j], self.vinv[i]

    def run(self) -> "_SNF":
        d = self.d
        for t in range(min(self.m, self.n)):
            best = None
            for i in range(t, self.m):
                for j in range(t, self.n):
                    x = d[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            self.row_swap(t, best[1])
            self.col_swap(t, best[2])
            while True:
                # bring the smallest entry of row t / column t to the pivot
                cands = [(abs(d[i][t]), i, t) for i in range(t, self.m) if d[i][t]]
                cands += [(abs(d[t][j]), t, j) for j in range(t + 1, self.n) if d[t][j]]
                _, i, j = min(cands)
                self.row_swap(t, i)
                self.col_swap(t, j)
                p = d[t][t]
                for i in range(t + 1, self.m):
                    if d[i][t]:
                        self.row_add(i, t, -(d[i][t] // p))
                for j in range(t + 1, self.n):
                    if d[t][j]:
                        self.col_add(j, t, -(d[t][j] // p))
                if any(d[i][t] for i in range(t + 1, self.m)) or any(d[t][j] for j in range(t + 1, self.n)):
                    continue
                bad = next(
                    (i for i in range(t + 1, self.m) for j in range(t + 1, self.n) if d[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                self.row_add(t, bad, 1)
            if d[t][t] < 0:
                self.row_neg(t)
        return self

    @property
    def rank(self) -> int:
        return sum(1 for i in range(min(self.m, self.n)) if self.d[i][i])


def _snf(m: IntMatrix) -> _SNF:
    return _SNF(m.tolist(), m.rows, m.cols).run()


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(u, d, v)`` with ``u @ m @ v == d``.

    ``u`` and ``v`` are unimodular and ``d`` is diagonal with nonnegative
    entries forming a divisibility chain, zeros last.
    """
    s = _snf(m)
    return (
        IntMatrix.from_rows(s.u, m.rows) if m.rows else IntMatrix.zeros(0, 0),
        IntMatrix.from_rows(s.d, m.cols) if m.rows else IntMatrix.zeros(0, m.cols),
        IntMatrix.from_rows(s.v, m.cols) if m.cols else IntMatrix.zeros(0, 0),
    )


def solve(m: IntMatrix, b: Sequence[int], moduli: Sequence[int] | None = None) -> list[int] | None:
    """Find an integer ``x`` with ``m @ x == b`` row by row modulo ``moduli``.

    A modulus of 0 means equality over Z. Returns ``None`` when no integer
    solution exists.
    """
    if len(b) != m.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
    moduli = [0] * m.rows if moduli is None else list(moduli)
    if len(moduli) != m.rows:
        raise ValueError(f"{len(moduli)} moduli for {m.rows} rows")
    extra = [i for i, q in enumerate(moduli) if q]
    rows = [m.row(i) + [moduli[i] if k == i else 0 for k in extra] for i in range(m.rows)]
    ncols = m.cols + len(extra)
    if ncols == 0:
        return [] if all(x == 0 for x in b) else None
    s = _SNF(rows, m.rows, ncols).run()
    ub = [sum(x * y for x, y in zip(row, b)) for row in s.u]
    w = [0] * ncols
    for i in range(m.rows):
        di = s.d[i][i] if i < ncols else 0
        if di:
            if ub[i] % di:
                return None
            w[i] = ub[i] // di
        elif ub[i]:
            return None
    z = [sum(x * y for x, y in zip(row, w)) for row in s.v]
    return z[:m.cols]


def lattice_basis(generators: Iterable[Sequence[int]], dim: int) -> list[list[int]]:
    """A Z-basis of the lattice spanned by ``generators`` inside Z^dim."""
    gens = [list(g) for g in generators if any(g)]
    if not gens or dim == 0:
        return []
    s = _SNF([[g[i] for g in gens] for i in range(dim)], dim, len(gens)).run()
    return [[s.d[k][k] * s.uinv[i][k] for i in range(dim)] for k in range(s.rank)]


def kernel_lattice(m: IntMatrix, moduli: Sequence[int] | None = None) -> list[list[int]]:
    """A Z-basis of ``{x : m @ x == 0}``, rows taken modulo ``moduli``."""
    moduli = [0] * m.rows if moduli is None else list(moduli)
    if m.cols == 0:
        return []
    if m.rows == 0:
        return [[int(i == j) for i in range(m.cols)] for j in range(m.cols)]
    extra = [i for i, q in enumerate(moduli) if q]
    rows = [m.row(i) + [moduli[i] if k == i else 0 for k in extra] for i in range(m.rows)]
    ncols = m.cols + len(extra)
    s = _SNF(rows, m.rows, ncols).run()
    gens = [[s.v[i][j] for i in range(m.cols)] for j in range(s.rank, ncols)]
    return lattice_basis(gens, m.cols)
