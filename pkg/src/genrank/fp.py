"""Exact arithmetic over prime fields: scalars, square matrices, and
projective canonical forms (matrices modulo the center of SL_n).

Everything here is immutable, hashable and exact; no floats appear
anywhere.  Moduli are validated by trial division at construction and
must stay below 2**15 so that entry products fit in a machine word.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache

MAX_MODULUS = 1 << 15

_known_primes: set[int] = set()


def is_prime(n: int) -> bool:
    """Trial-division primality test, cached for repeat queries."""
    if n in _known_primes:
        return True
    if not isinstance(n, int) or n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    _known_primes.add(n)
    return True


def check_modulus(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"modulus {p!r} is not prime")
    if p > MAX_MODULUS:
        raise ValueError(f"modulus {p} exceeds supported bound {MAX_MODULUS}")


@dataclass(frozen=True)
class FpScalar:
    """A residue in the prime field F_p.  Construction is strict: the
    value must already lie in [0, p)."""

    value: int
    modulus: int

    def __post_init__(self):
        check_modulus(self.modulus)
        if not isinstance(self.value, int) or not 0 <= self.value < self.modulus:
            raise ValueError(f"value {self.value!r} out of range for F_{self.modulus}")

    @classmethod
    def reduce(cls, value: int, modulus: int) -> "FpScalar":
        check_modulus(modulus)
        return cls(value % modulus, modulus)

    def _check(self, other: "FpScalar") -> None:
        if not isinstance(other, FpScalar):
            raise TypeError(f"expected FpScalar, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    def __add__(self, other):
        self._check(other)
        return FpScalar((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other):
        self._check(other)
        return FpScalar((self.value - other.value) % self.modulus, self.modulus)

    def __mul__(self, other):
        self._check(other)
        return FpScalar((self.value * other.value) % self.modulus, self.modulus)

    def __neg__(self):
        return FpScalar((-self.value) % self.modulus, self.modulus)

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def __pow__(self, k: int):
        return FpScalar(pow(self.value, k, self.modulus), self.modulus)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.modulus}")
        return FpScalar(pow(self.value, self.modulus - 2, self.modulus), self.modulus)

    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


@lru_cache(maxsize=None)
def sqrt_table(p: int) -> dict:
    """Map each quadratic residue mod p to one of its square roots."""
    check_modulus(p)
    table: dict[int, int] = {}
    for x in range(p):
        table.setdefault(x * x % p, x)
    return table


@lru_cache(maxsize=None)
def nonresidue(p: int) -> int:
    """Smallest quadratic non-residue mod an odd prime p."""
    check_modulus(p)
    if p == 2:
        raise ValueError("F_2 has no quadratic non-residue")
    squares = sqrt_table(p)
    for d in range(2, p):
        if d not in squares:
            return d
    raise AssertionError("unreachable for odd prime modulus")


@lru_cache(maxsize=None)
def nth_roots_of_unity(p: int, n: int) -> tuple[int, ...]:
    """All solutions of x**n = 1 in F_p, in increasing order."""
    check_modulus(p)
    return tuple(x for x in range(1, p) if pow(x, n, p) == 1)


@dataclass(frozen=True)
class FpMatrix:
    """An n-by-n matrix over F_p.  Entries are residues stored row-major
    in a flat tuple; the object is hashable and usable as a set key."""

    modulus: int
    dim: int
    entries: tuple[int, ...]

    def __post_init__(self):
        check_modulus(self.modulus)
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        if len(self.entries) != self.dim * self.dim:
            raise ValueError(f"expected {self.dim * self.dim} entries, got {len(self.entries)}")
        for e in self.entries:
            if not isinstance(e, int) or not 0 <= e < self.modulus:
                raise ValueError(f"entry {e!r} out of range for F_{self.modulus}")

    @classmethod
    def from_rows(cls, modulus: int, rows) -> "FpMatrix":
        rows = [list(r) for r in rows]
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise ValueError("matrix must be square")
        flat = tuple(int(e) % modulus for r in rows for e in r)
        return cls(modulus, dim, flat)

    @classmethod
    def identity(cls, modulus: int, dim: int) -> "FpMatrix":
        flat = tuple(1 if i == j else 0 for i in range(dim) for j in range(dim))
        return cls(modulus, dim, flat)

    def rows(self) -> tuple[tuple[int, ...], ...]:
        n = self.dim
        return tuple(self.entries[i * n:(i + 1) * n] for i in range(n))

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.entries[i * self.dim + j]

    def scalar(self, i: int, j: int) -> FpScalar:
        return FpScalar(self[i, j], self.modulus)

    def _check(self, other: "FpMatrix") -> None:
        if not isinstance(other, FpMatrix):
            raise TypeError(f"expected FpMatrix, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __mul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        p, n, a, b = self.modulus, self.dim, self.entries, other.entries
        if n == 2:
            a0, a1, a2, a3 = a
            b0, b1, b2, b3 = b
            flat = ((a0 * b0 + a1 * b2) % p, (a0 * b1 + a1 * b3) % p,
                    (a2 * b0 + a3 * b2) % p, (a2 * b1 + a3 * b3) % p)
            return FpMatrix(p, 2, flat)
        out = []
        for i in range(n):
            arow = a[i * n:(i + 1) * n]
            for j in range(n):
                out.append(sum(arow[k] * b[k * n + j] for k in range(n)) % p)
        return FpMatrix(p, n, tuple(out))

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        p = self.modulus
        return FpMatrix(p, self.dim, tuple((x + y) % p for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> "FpMatrix":
        p = self.modulus
        return FpMatrix(p, self.dim, tuple((-x) % p for x in self.entries))

    def scaled(self, c: int) -> "FpMatrix":
        p = self.modulus
        return FpMatrix(p, self.dim, tuple(x * c % p for x in self.entries))

    def trace(self) -> int:
        n = self.dim
        return sum(self.entries[i * n + i] for i in range(n)) % self.modulus

    def det(self) -> int:
        p, n, e = self.modulus, self.dim, self.entries
        if n == 1:
            return e[0]
        if n == 2:
            return (e[0] * e[3] - e[1] * e[2]) % p
        if n == 3:
            return (e[0] * (e[4] * e[8] - e[5] * e[7])
                    - e[1] * (e[3] * e[8] - e[5] * e[6])
                    + e[2] * (e[3] * e[7] - e[4] * e[6])) % p
        # Gaussian elimination for larger sizes.
        rows = [list(r) for r in self.rows()]
        det = 1
        for col in range(n):
            piv = next((r for r in range(col, n) if rows[r][col] % p), None)
            if piv is None:
                return 0
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                det = -det
            inv = pow(rows[col][col], p - 2, p)
            det = det * rows[col][col] % p
            for r in range(col + 1, n):
                f = rows[r][col] * inv % p
                if f:
                    rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[col])]
        return det % p

    def inverse(self) -> "FpMatrix":
        p, n, e = self.modulus, self.dim, self.entries
        if n == 2:
            d = (e[0] * e[3] - e[1] * e[2]) % p
            if d == 0:
                raise ZeroDivisionError("matrix is singular")
            di = pow(d, p - 2, p)
            flat = (e[3] * di % p, -e[1] * di % p, -e[2] * di % p, e[0] * di % p)
            return FpMatrix(p, 2, tuple(x % p for x in flat))
        # Gauss-Jordan on [A | I].
        aug = [list(r) + [1 if i == j else 0 for j in range(n)]
               for i, r in enumerate(self.rows())]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] % p), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = pow(aug[col][col], p - 2, p)
            aug[col] = [x * inv % p for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
        flat = tuple(aug[i][n + j] for i in range(n) for j in range(n))
        return FpMatrix(p, n, flat)

    def __pow__(self, k: int) -> "FpMatrix":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        acc = FpMatrix.identity(self.modulus, self.dim)
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def is_identity(self) -> bool:
        n = self.dim
        return all(self.entries[i * n + j] == (1 if i == j else 0)
                   for i in range(n) for j in range(n))

    def is_scalar(self) -> bool:
        n, e = self.dim, self.entries
        c = e[0]
        return all(e[i * n + j] == (c if i == j else 0)
                   for i in range(n) for j in range(n))

    def encode(self) -> bytes:
        return struct.pack(f"<{len(self.entries)}H", *self.entries)

    def __repr__(self):
        return f"FpMatrix(mod {self.modulus}, {list(map(list, self.rows()))})"


@dataclass(frozen=True)
class ProjectiveMatrix:
    """An element of PSL_n(F_p): a determinant-one matrix held by its
    canonical coset representative.  Among the scalings c*M with c an
    n-th root of unity, the representative is the one whose row-major
    entry tuple is lexicographically least."""

    rep: FpMatrix

    def __post_init__(self):
        if canonical_rep(self.rep) != self.rep:
            raise ValueError("representative is not canonical; use projective_canonicalize")

    @property
    def modulus(self) -> int:
        return self.rep.modulus

    @property
    def dim(self) -> int:
        return self.rep.dim

    def __mul__(self, other: "ProjectiveMatrix") -> "ProjectiveMatrix":
        if not isinstance(other, ProjectiveMatrix):
            raise TypeError(f"expected ProjectiveMatrix, got {type(other).__name__}")
        return ProjectiveMatrix(canonical_rep(self.rep * other.rep))

    def inverse(self) -> "ProjectiveMatrix":
        return ProjectiveMatrix(canonical_rep(self.rep.inverse()))

    def is_identity(self) -> bool:
        return self.rep.is_identity()

    def encode(self) -> bytes:
        return self.rep.encode()

    def __repr__(self):
        return f"Projective({list(map(list, self.rep.rows()))} mod {self.modulus})"


def canonical_rep(m: FpMatrix) -> FpMatrix:
    """Lexicographically least scaling of m by an n-th root of unity."""
    p, n = m.modulus, m.dim
    if n == 2:
        neg = -m
        return m if m.entries <= neg.entries else neg
    best = m
    for c in nth_roots_of_unity(p, n):
        if c == 1:
            continue
        cand = m.scaled(c)
        if cand.entries < best.entries:
            best = cand
    return best


def projective_canonicalize(m: FpMatrix) -> ProjectiveMatrix:
    """Quotient a determinant-one matrix to its PSL_n class."""
    if m.det() != 1:
        raise ValueError("projective canonicalization expects determinant 1")
    return ProjectiveMatrix(canonical_rep(m))


def element_order(a, order_cap: int) -> int:
    """Multiplicative order of a matrix (plain or projective) by repeated
    multiplication.  Exceeding order_cap signals an internal inconsistency
    and raises."""
    acc = a
    k = 1
    while not acc.is_identity():
        acc = acc * a
        k += 1
        if k > order_cap:
            raise RuntimeError(f"order cap {order_cap} exceeded; inconsistent input")
    return k
