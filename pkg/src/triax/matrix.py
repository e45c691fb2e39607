"""Dense exact matrices as lists of rows.

Entry ``M[i][j]`` is the coefficient of basis vector ``i`` in the image of
basis vector ``j`` (columns are images).  Every routine is exact; the field is
passed explicitly wherever an empty matrix would otherwise leave it unknown.
"""

from __future__ import annotations

from .exactfield import FieldSpec, Poly


def zeros(field: FieldSpec, m: int, n: int | None = None):
    n = m if n is None else n
    z = field.zero
    return [[z] * n for _ in range(m)]


def identity(field: FieldSpec, n: int):
    out = zeros(field, n)
    for i in range(n):
        out[i][i] = field.one
    return out


def convert(field: FieldSpec, rows):
    return [[field(c) for c in row] for row in rows]


def shape(M):
    return (len(M), len(M[0]) if M else 0)


def copy(M):
    return [list(r) for r in M]


def transpose(M, ncols: int | None = None):
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*M)]


def mat_mul(A, B, field: FieldSpec):
    m, k = len(A), len(B)
    n = len(B[0]) if B else 0
    out = zeros(field, m, n)
    for i in range(m):
        Ai, Oi = A[i], out[i]
        for t in range(k):
            a = Ai[t]
            if not a:
                continue
            Bt = B[t]
            for j in range(n):
                b = Bt[j]
                if b:
                    Oi[j] = Oi[j] + a * b
    return out


def mat_vec(A, x, field: FieldSpec):
    out = []
    for row in A:
        acc = field.zero
        for a, b in zip(row, x):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(A, c):
    return [[a * c for a in r] for r in A]


def shift(M, a):
    """``M - a*I``."""
    out = copy(M)
    for i in range(len(out)):
        out[i][i] = out[i][i] - a
    return out


def mat_pow(M, e: int, field: FieldSpec):
    out = identity(field, len(M))
    base = M
    while e:
        if e & 1:
            out = mat_mul(out, base, field)
        base = mat_mul(base, base, field)
        e >>= 1
    return out


def poly_eval(p: Poly, M, field: FieldSpec):
    """``p(M)`` by Horner's rule."""
    n = len(M)
    out = zeros(field, n)
    for c in reversed(p.coeffs):
        out = mat_mul(out, M, field)
        for i in range(n):
            out[i][i] = out[i][i] + c
    return out


def is_zero(M) -> bool:
    return not any(any(r) for r in M)


def rref(A, field: FieldSpec):
    """Reduced row echelon form; returns ``(R, pivot_columns)``."""
    R = copy(A)
    m, n = shape(R)
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        Rr = R[r]
        for i in range(m):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], Rr)]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(A, field: FieldSpec) -> int:
    return len(rref(A, field)[1])


def nullspace(A, field: FieldSpec, ncols: int | None = None):
    """Basis of ``{x : A x = 0}``, one vector per free column."""
    n = shape(A)[1] if A else (ncols or 0)
    R, pivots = rref(A, field) if A else ([], [])
    free = [c for c in range(n) if c not in set(pivots)]
    out = []
    for f in free:
        x = [field.zero] * n
        x[f] = field.one
        for row, pc in zip(R, pivots):
            x[pc] = -row[f]
        out.append(x)
    return out


def solve(A, b, field: FieldSpec):
    """One solution of ``A x = b`` or ``None``."""
    m, n = shape(A)
    if m == 0:
        return [field.zero] * n if not any(b) else None
    aug = [list(A[i]) + [b[i]] for i in range(m)]
    R, pivots = rref(aug, field)
    if n in pivots:
        return None
    x = [field.zero] * n
    for row, pc in zip(R, pivots):
        x[pc] = row[n]
    return x


def inverse(A, field: FieldSpec):
    """Inverse of a square matrix, or ``None`` when singular."""
    n = len(A)
    aug = [list(A[i]) + [field.one if j == i else field.zero for j in range(n)] for i in range(n)]
    R, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return [row[n:] for row in R]


def block_diagonal(blocks, field: FieldSpec):
    n = sum(len(b) for b in blocks)
    out = zeros(field, n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, c in enumerate(row):
                out[off + i][off + j] = c
        off += len(b)
    return out


def vectorize(M):
    return [c for row in M for c in row]


def unvectorize(v, n: int):
    return [list(v[i * n:(i + 1) * n]) for i in range(n)]


def companion(p: Poly):
    """Companion matrix: ``e_i -> e_{i+1}``, last column ``-c_0..-c_{n-1}``."""
    p = p.monic()
    n = p.degree
    f = p.field
    C = zeros(f, n)
    for i in range(n - 1):
        C[i + 1][i] = f.one
    for i in range(n):
        C[i][n - 1] = -p.coeffs[i]
    return C


def column(M, j):
    return [row[j] for row in M]


def from_columns(cols, nrows: int, field: FieldSpec):
    out = zeros(field, nrows, len(cols))
    for j, c in enumerate(cols):
        for i in range(nrows):
            out[i][j] = c[i]
    return out


class IncrementalEchelon:
    """Dense vectors added one at a time; reports the first dependency.

    ``add(v)`` returns ``None`` when ``v`` is independent of everything added
    so far, otherwise the coefficients expressing ``v`` in the added vectors.
    """

    def __init__(self, field: FieldSpec):
        self.field = field
        self.count = 0
        self._rows = []  # (pivot, row, combination as list over added vectors)

    def add(self, v):
        f = self.field
        r = list(v)
        comb = [f.zero] * self.count
        for piv, row, rc in self._rows:
            c = r[piv]
            if c:
                r = [x - c * y for x, y in zip(r, row)]
                for k, y in enumerate(rc):
                    if y:
                        comb[k] = comb[k] + c * y
        piv = next((i for i, x in enumerate(r) if x), None)
        if piv is None:
            return comb
        inv = 1 / r[piv]
        r = [x * inv for x in r]
        # row = (v - sum comb_k added_k) / r[piv]
        rc = [-c * inv for c in comb] + [inv]
        self._rows = [(p, row, rcomb + [f.zero]) for p, row, rcomb in self._rows]
        self._rows.append((piv, r, rc))
        self.count += 1
        return None
