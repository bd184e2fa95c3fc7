"""Linear algebra over GF(2) on bit-packed vectors and matrices.

Vectors are Python ints (bit i = coordinate i) and matrices are
:class:`~groupsleuth.blackbox.BitMatrix` acting on row vectors, so a matrix
``m`` sends ``v`` to ``m.apply(v)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .blackbox import BitMatrix

MAX_SWEEP_DIMENSION = 24


class DimensionError(ValueError):
    pass


class DegenerateFormError(ValueError):
    pass


def _echelon(rows: Sequence[int], n: int) -> tuple[list[int], list[int]]:
    """Reduced echelon rows and their pivot columns."""
    work = [r for r in rows if r]
    pivots: list[int] = []
    out: list[int] = []
    for col in range(n):
        bit = 1 << col
        idx = next((i for i, r in enumerate(work) if r & bit), None)
        if idx is None:
            continue
        p = work.pop(idx)
        work = [r ^ p if r & bit else r for r in work]
        out = [r ^ p if r & bit else r for r in out]
        out.append(p)
        pivots.append(col)
    return out, pivots


def rank(m: BitMatrix | Sequence[int], n: int | None = None) -> int:
    rows = m.rows if isinstance(m, BitMatrix) else list(m)
    if n is None:
        n = m.n if isinstance(m, BitMatrix) else max((r.bit_length() for r in rows), default=0)
    return len(_echelon(rows, n)[0])


def kernel_basis(m: BitMatrix) -> list[int]:
    """Basis of the left kernel ``{v : v m = 0}``."""
    n = m.n
    # reduce [m | I] and read off the rows whose left half vanished
    aug = [r | (1 << (n + i)) for i, r in enumerate(m.rows)]
    mask = (1 << n) - 1
    out = []
    work = list(aug)
    row = 0
    for col in range(n):
        bit = 1 << col
        idx = next((i for i in range(row, len(work)) if work[i] & bit), None)
        if idx is None:
            continue
        work[row], work[idx] = work[idx], work[row]
        for i in range(len(work)):
            if i != row and work[i] & bit:
                work[i] ^= work[row]
        row += 1
    for r in work[row:]:
        if not r & mask:
            out.append(r >> n)
    return out


def fixed_space_dimension(m: BitMatrix) -> int:
    """Dimension of ``{v : v m = v}``, the nullity of ``m + 1``."""
    return m.n - rank(m + BitMatrix.identity_matrix(m.n))


def fixed_space_basis(m: BitMatrix) -> list[int]:
    return kernel_basis(m + BitMatrix.identity_matrix(m.n))


def random_invertible(n: int, rng: random.Random) -> BitMatrix:
    while True:
        rows = [rng.getrandbits(n) for _ in range(n)]
        if rank(rows, n) == n:
            return BitMatrix(rows, n)


def block_diagonal(*blocks: BitMatrix) -> BitMatrix:
    rows = []
    off = 0
    for b in blocks:
        rows.extend(r << off for r in b.rows)
        off += b.n
    return BitMatrix(rows, off)


# orbits on vectors


def image_table(m: BitMatrix) -> np.ndarray:
    """``table[v] = v m`` for every vector, built by doubling over basis rows."""
    n = m.n
    if n > MAX_SWEEP_DIMENSION:
        raise DimensionError(f"dimension {n} exceeds {MAX_SWEEP_DIMENSION}")
    t = np.zeros(1 << n, dtype=np.uint32)
    for b, r in enumerate(m.rows):
        half = 1 << b
        np.bitwise_xor(t[:half], np.uint32(r), out=t[half:2 * half])
    return t


def orbits_on_vectors(gens: Sequence[BitMatrix], mode: str = "all-nonzero",
                      representatives: bool = False, method: str = "auto"):
    """Orbit sizes of ``<gens>`` on the nonzero vectors of GF(2)^n.

    Over GF(2) every 1-space holds exactly one nonzero vector, so the
    ``projective`` mode gives the same partition.  Sizes come back in
    decreasing order; with ``representatives`` the result is a list of
    ``(size, least vector of the orbit)`` pairs sorted by representative.

    ``method="sweep"`` is the plain visited-bitset breadth-first sweep;
    ``"labels"`` is a vectorized minimum-label propagation that gives the
    same partition and is what makes n = 24 affordable.
    """
    if mode not in ("all-nonzero", "projective"):
        raise ValueError(f"unknown mode {mode!r}")
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise DimensionError("generators differ in dimension")
    if n > MAX_SWEEP_DIMENSION:
        raise DimensionError(f"dimension {n} exceeds {MAX_SWEEP_DIMENSION}")
    for g in gens:
        if rank(g) != n:
            raise ValueError("generators must be invertible")
    if method == "auto":
        method = "sweep" if n <= 14 else "labels"
    if method == "sweep":
        pairs = _sweep(gens, n)
    elif method == "labels":
        pairs = _label_orbits(gens, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    if representatives:
        return sorted(((s, r) for r, s in pairs), key=lambda x: x[1])
    return sorted((s for _, s in pairs), reverse=True)


def _sweep(gens: Sequence[BitMatrix], n: int) -> list[tuple[int, int]]:
    size = 1 << n
    seen = bytearray(size // 8 + 1)
    seen[0] |= 1
    out = []
    for v in range(1, size):
        if seen[v >> 3] >> (v & 7) & 1:
            continue
        seen[v >> 3] |= 1 << (v & 7)
        stack = [v]
        count = 1
        while stack:
            w = stack.pop()
            for g in gens:
                x = g.apply(w)
                if not seen[x >> 3] >> (x & 7) & 1:
                    seen[x >> 3] |= 1 << (x & 7)
                    stack.append(x)
                    count += 1
        out.append((v, count))
    return out


def _label_orbits(gens: Sequence[BitMatrix], n: int) -> list[tuple[int, int]]:
    tables = [image_table(g) for g in gens]
    labels = np.arange(1 << n, dtype=np.uint32)
    while True:
        before = labels.copy()
        for t in tables:
            # pull the label of the image, then push our label onto the image
            np.minimum(labels, labels[t], out=labels)
            _push_min(labels, t)
        # pointer jumping: labels are vectors of the same orbit
        while True:
            jumped = labels[labels]
            if np.array_equal(jumped, labels):
                break
            labels = jumped
        if np.array_equal(before, labels):
            break
    reps, counts = np.unique(labels[1:], return_counts=True)
    return [(int(r), int(c)) for r, c in zip(reps, counts)]


def _push_min(labels: np.ndarray, t: np.ndarray) -> None:
    # labels[t[v]] = min(labels[t[v]], labels[v]); t is a permutation so the
    # scatter has no collisions
    cur = labels[t]
    np.minimum(cur, labels, out=cur)
    labels[t] = cur


# quadratic forms


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


@dataclass(frozen=True)
class QuadraticFormGF2:
    """q(v) = sum_i v_i d_i + sum_{i<j} v_i v_j b(e_i, e_j).

    ``gram`` is the symmetric, zero-diagonal matrix of the polar form and
    ``diagonal`` has bit i equal to q(e_i).
    """

    gram: BitMatrix
    diagonal: int

    def __post_init__(self):
        g = self.gram
        if g.transpose() != g:
            raise ValueError("Gram matrix is not symmetric")
        if any(g.entry(i, i) for i in range(g.n)):
            raise ValueError("Gram matrix must have zero diagonal")
        if self.diagonal >> g.n:
            raise ValueError("diagonal has bits beyond the dimension")

    @property
    def dimension(self) -> int:
        return self.gram.n

    def polar(self, u: int, v: int) -> int:
        return _parity(self.gram.apply(u) & v)

    def __call__(self, v: int) -> int:
        val = _parity(v & self.diagonal)
        rows = self.gram.rows
        i = 0
        w = v
        while w:
            if w & 1:
                # upper triangle only
                val ^= _parity(rows[i] & v & ~((1 << (i + 1)) - 1))
            w >>= 1
            i += 1
        return val

    def is_nondegenerate(self) -> bool:
        return rank(self.gram) == self.gram.n

    def transform(self, p: BitMatrix) -> "QuadraticFormGF2":
        """The form v -> q(v p) (a change of basis when p is invertible)."""
        gram = p * self.gram * p.transpose()
        diag = sum(self(r) << i for i, r in enumerate(p.rows))
        return QuadraticFormGF2(gram, diag)

    def values(self) -> np.ndarray:
        """q(v) for all 2^n vectors as a uint8 array."""
        n = self.dimension
        if n > MAX_SWEEP_DIMENSION:
            raise DimensionError(f"dimension {n} exceeds {MAX_SWEEP_DIMENSION}")
        out = np.zeros(1 << n, dtype=np.uint8)
        idx = np.arange(1 << max(n - 1, 0), dtype=np.uint32)
        for b in range(n):
            half = 1 << b
            # q(v + e_b) = q(v) + q(e_b) + b(v, e_b) for v < 2^b
            col = self.gram.rows[b] & (half - 1)
            par = _popcount_parity(idx[:half] & np.uint32(col))
            out[half:2 * half] = out[:half] ^ par ^ np.uint8((self.diagonal >> b) & 1)
        return out

    def singular_count(self) -> int:
        """Number of nonzero v with q(v) = 0."""
        return int((self.values()[1:] == 0).sum())

    def to_dict(self) -> dict:
        width = max(1, (self.dimension + 3) // 4)
        return {"gram": self.gram.to_hex(), "diagonal": format(self.diagonal, f"0{width}x")}

    @classmethod
    def from_dict(cls, obj: dict) -> "QuadraticFormGF2":
        gram = BitMatrix.from_hex(obj["gram"])
        return cls(gram, int(obj["diagonal"], 16))


def _popcount_parity(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    a ^= a >> np.uint32(16)
    a ^= a >> np.uint32(8)
    a ^= a >> np.uint32(4)
    a ^= a >> np.uint32(2)
    a ^= a >> np.uint32(1)
    return (a & np.uint32(1)).astype(np.uint8)


def plus_type_count(m: int) -> int:
    """Singular nonzero vectors of a plus-type form in dimension 2m."""
    return (2 ** (m - 1) + 1) * (2**m - 1)


def minus_type_count(m: int) -> int:
    return (2 ** (m - 1) - 1) * (2**m + 1)


def quadratic_form_type(q: QuadraticFormGF2) -> str:
    """``"plus"`` or ``"minus"``, decided by counting singular vectors."""
    n = q.dimension
    if n % 2:
        raise DegenerateFormError("odd dimension")
    if not q.is_nondegenerate():
        raise DegenerateFormError("polar form is degenerate")
    m = n // 2
    c = q.singular_count()
    if c == plus_type_count(m):
        return "plus"
    if c == minus_type_count(m):
        return "minus"
    raise DegenerateFormError(f"singular count {c} matches neither type")


def hyperbolic_form(m: int) -> QuadraticFormGF2:
    """Orthogonal sum of m hyperbolic planes: q = x1 y1 + ... + xm ym."""
    rows = [0] * (2 * m)
    for i in range(m):
        rows[2 * i] = 1 << (2 * i + 1)
        rows[2 * i + 1] = 1 << (2 * i)
    return QuadraticFormGF2(BitMatrix(rows, 2 * m), 0)


def elliptic_form(m: int) -> QuadraticFormGF2:
    """m - 1 hyperbolic planes plus the anisotropic plane x^2 + xy + y^2."""
    h = hyperbolic_form(m)
    k = 2 * (m - 1)
    return QuadraticFormGF2(h.gram, (1 << k) | (1 << (k + 1)))
