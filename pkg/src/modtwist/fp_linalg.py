"""
Exact arithmetic over F_p for 2x2 matrices and the groups GL2, SL2, PGL2, PSL2.

Matrices are plain 4-tuples ``(a, b, c, d)`` read row-major, i.e. ``[[a, b], [c, d]]``,
with entries reduced into ``[0, p)``.  A projective class is stored as its
canonical representative: the matrix scaled so that the first nonzero entry in
scan order (a, b, c, d) equals 1.  Two classes are equal iff their tuples are.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Tuple

from .errors import ContractError, SingularMatrixError

Mat2 = Tuple[int, int, int, int]

MIN_PRIME = 7


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for k in range(3, math.isqrt(n) + 1, 2):
        if n % k == 0:
            return False
    return True


def check_prime(p) -> int:
    """Validate a characteristic; only primes p >= 7 are accepted."""
    if isinstance(p, bool) or not isinstance(p, int):
        raise ContractError(f"p must be an integer, got {p!r}")
    if p < MIN_PRIME:
        raise ContractError(f"p must be at least {MIN_PRIME}, got {p}")
    if not is_prime(p):
        raise ContractError(f"p = {p} is not prime")
    return p


@lru_cache(maxsize=None)
def _inverses(p: int) -> tuple:
    return (0,) + tuple(pow(a, -1, p) for a in range(1, p))


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return _inverses(p)[a]


class DetClass(enum.Enum):
    """Class of a nonzero residue in F_p^x / (F_p^x)^2."""

    SQUARE = "Square"
    NONSQUARE = "NonSquare"

    def __mul__(self, other: "DetClass") -> "DetClass":
        return DetClass.SQUARE if self is other else DetClass.NONSQUARE

    @property
    def sign(self) -> int:
        return 1 if self is DetClass.SQUARE else -1

    @classmethod
    def from_sign(cls, s: int) -> "DetClass":
        if s == 1:
            return cls.SQUARE
        if s == -1:
            return cls.NONSQUARE
        raise ContractError(f"sign must be +1 or -1, got {s}")


def legendre_class(a: int, p: int) -> DetClass:
    a %= p
    if a == 0:
        raise ContractError("0 has no square class")
    return DetClass.SQUARE if pow(a, (p - 1) // 2, p) == 1 else DetClass.NONSQUARE


def smallest_nonresidue(p: int) -> int:
    v = 2
    while legendre_class(v, p) is DetClass.SQUARE:
        v += 1
    return v


def nonresidues_below(p: int, bound: int) -> list:
    return [v for v in range(2, bound) if v % p and legendre_class(v, p) is DetClass.NONSQUARE]


def sqrt_minus_one(p: int) -> Optional[int]:
    """The smaller square root of -1 mod p, or None when p = 3 mod 4."""
    if p % 4 == 3:
        return None
    for i in range(1, (p + 1) // 2):
        if i * i % p == p - 1:
            return i
    return None


# --- plain 2x2 matrices ---------------------------------------------------------


def mat(a, b, c, d, p: int) -> Mat2:
    return (a % p, b % p, c % p, d % p)


def identity() -> Mat2:
    return (1, 0, 0, 1)


def scalar(c: int, p: int) -> Mat2:
    c %= p
    return (c, 0, 0, c)


def diag(x: int, y: int, p: int) -> Mat2:
    return (x % p, 0, 0, y % p)


def det(A: Mat2, p: int) -> int:
    return (A[0] * A[3] - A[1] * A[2]) % p


def transpose(A: Mat2) -> Mat2:
    return (A[0], A[2], A[1], A[3])


def mat_mul(A: Mat2, B: Mat2, p: int) -> Mat2:
    a, b, c, d = A
    e, f, g, h = B
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def mat_scale(c: int, A: Mat2, p: int) -> Mat2:
    return tuple(c * x % p for x in A)


def mat_inv(A: Mat2, p: int) -> Mat2:
    dt = det(A, p)
    if dt == 0:
        raise SingularMatrixError(f"matrix {A} is singular mod {p}")
    r = inv_mod(dt, p)
    a, b, c, d = A
    return (d * r % p, -b * r % p, -c * r % p, a * r % p)


def mat_pow(A: Mat2, n: int, p: int) -> Mat2:
    if n < 0:
        A, n = mat_inv(A, p), -n
    result = identity()
    while n:
        if n & 1:
            result = mat_mul(result, A, p)
        A = mat_mul(A, A, p)
        n >>= 1
    return result


def is_scalar(A: Mat2) -> bool:
    return A[1] == 0 and A[2] == 0 and A[0] == A[3]


def scalar_ratio(A: Mat2, B: Mat2, p: int) -> Optional[int]:
    """The c with A = c*B, or None when A is not a scalar multiple of B."""
    for x, y in zip(A, B):
        if y:
            c = x * inv_mod(y, p) % p
            break
    else:
        return None
    if c == 0:
        return None
    return c if all((c * y - x) % p == 0 for x, y in zip(A, B)) else None


def check_invertible(A, p: int) -> Mat2:
    A = tuple(int(x) % p for x in A)
    if len(A) != 4:
        raise ContractError(f"a 2x2 matrix needs 4 entries, got {len(A)}")
    if det(A, p) == 0:
        raise SingularMatrixError(f"matrix {A} is singular mod {p}")
    return A


def enumerate_gl2(p: int) -> Iterator[Mat2]:
    """All of GL2(F_p) in lexicographic order."""
    r = range(p)
    for a in r:
        for b in r:
            for c in r:
                for d in r:
                    if (a * d - b * c) % p:
                        yield (a, b, c, d)


def det_fiber(p: int, target: int) -> Iterator[Mat2]:
    """Matrices of GL2(F_p) with determinant ``target``, lexicographic order."""
    target %= p
    r = range(p)
    for a in r:
        for b in r:
            for c in r:
                for d in r:
                    if (a * d - b * c - target) % p == 0:
                        yield (a, b, c, d)


def gl2_order(p: int) -> int:
    return (p * p - 1) * (p * p - p)


# --- projective classes -----------------------------------------------------------


def canonical(A, p: int) -> Mat2:
    A = tuple(x % p for x in A)
    if det(A, p) == 0:
        raise SingularMatrixError(f"matrix {A} is singular mod {p}")
    for x in A:
        if x:
            r = _inverses(p)[x]
            return (A[0] * r % p, A[1] * r % p, A[2] * r % p, A[3] * r % p)
    raise AssertionError("unreachable")


def _canon(A: Mat2, p: int) -> Mat2:
    # hot path: A is already reduced and invertible
    x = A[0] or A[1]
    if x == 1:
        return A
    r = _inverses(p)[x]
    return (A[0] * r % p, A[1] * r % p, A[2] * r % p, A[3] * r % p)


def pgl_mul(x: Mat2, y: Mat2, p: int) -> Mat2:
    return _canon(mat_mul(x, y, p), p)


def pgl_inv(x: Mat2, p: int) -> Mat2:
    a, b, c, d = x
    # adjugate represents the same class as the inverse
    return _canon((d, -b % p, -c % p, a), p)


def pgl_pow(x: Mat2, n: int, p: int) -> Mat2:
    return _canon(mat_pow(x, n, p), p)


def pgl_conj(g: Mat2, x: Mat2, p: int) -> Mat2:
    """g x g^-1 as a projective class."""
    return _canon(mat_mul(mat_mul(g, x, p), pgl_inv(g, p), p), p)


def pgl_prod(xs: Iterable[Mat2], p: int) -> Mat2:
    out = identity()
    for x in xs:
        out = mat_mul(out, x, p)
    return _canon(out, p)


def pgl_order(x: Mat2, p: int) -> int:
    k, y = 1, x
    while y != (1, 0, 0, 1):
        y = pgl_mul(y, x, p)
        k += 1
    return k


def pgl_det_class(x: Mat2, p: int) -> DetClass:
    return legendre_class(det(x, p), p)


def is_psl(x: Mat2, p: int) -> bool:
    return pgl_det_class(x, p) is DetClass.SQUARE


def standard_V(p: int, v: int) -> Tuple[Mat2, Mat2]:
    """The matrix [[0, v], [-1, 0]] for a nonresidue v, and its projective class."""
    if legendre_class(v, p) is not DetClass.NONSQUARE:
        raise ContractError(f"v = {v} is a square mod {p}; a nonresidue is required")
    M = (0, v % p, p - 1, 0)
    return M, canonical(M, p)


def contragredient(x: Mat2, p: int) -> Mat2:
    """Inverse transpose, as a projective class."""
    return pgl_inv(transpose(x), p)


@lru_cache(maxsize=None)
def _projective_classes(p: int) -> tuple:
    out = []
    for c in range(1, p):
        for d in range(p):
            out.append((0, 1, c, d))
    for b in range(p):
        for c in range(p):
            for d in range(p):
                if (d - b * c) % p:
                    out.append((1, b, c, d))
    return tuple(out)


@lru_cache(maxsize=None)
def _psl_classes(p: int) -> tuple:
    return tuple(x for x in _projective_classes(p) if is_psl(x, p))


@lru_cache(maxsize=None)
def _nonsquare_classes(p: int) -> tuple:
    return tuple(x for x in _projective_classes(p) if not is_psl(x, p))


def enumerate_projective(p: int, which: str = "PGL") -> tuple:
    """
    Canonical classes of PGL2(F_p) (``which="PGL"``), PSL2(F_p) (``"PSL"``) or
    the nontrivial coset PGL2 minus PSL2 (``"PGL-PSL"``), sorted by scan order.
    """
    if which == "PGL":
        return _projective_classes(p)
    if which == "PSL":
        return _psl_classes(p)
    if which == "PGL-PSL":
        return _nonsquare_classes(p)
    raise ValueError(f"unknown projective group {which!r}")


def classes_with_det(p: int, cls: DetClass) -> tuple:
    return _psl_classes(p) if cls is DetClass.SQUARE else _nonsquare_classes(p)


def pgl_order_formula(p: int) -> int:
    return p * (p - 1) * (p + 1)


def similarity_witness(A: Mat2, B: Mat2, p: int) -> Optional[Mat2]:
    """First S in GL2(F_p) (lexicographic) with S A S^-1 = B, else None."""
    if (A[0] + A[3] - B[0] - B[3]) % p or (det(A, p) - det(B, p)) % p:
        return None
    for S in enumerate_gl2(p):
        # S A = B S avoids inverting S
        if mat_mul(S, A, p) == mat_mul(B, S, p):
            return S
    return None


def centralizer_is_trivial(S: Iterable[Mat2], p: int) -> bool:
    S = list(S)
    if not S:
        raise ContractError("centralizer of an empty set is not meaningful")
    for g in _projective_classes(p):
        if g == (1, 0, 0, 1):
            continue
        if all(pgl_mul(g, x, p) == pgl_mul(x, g, p) for x in S):
            return False
    return True


# --- involutions with determinant -1 --------------------------------------------------


@dataclass(frozen=True)
class InvolutionClass:
    kind: str
    i: Optional[int] = None

    DIAG = "DiagOneMinusOne"
    SCALAR = "ScalarI"
    IMPOSSIBLE = "Impossible"

    @classmethod
    def diag_one_minus_one(cls):
        return cls(cls.DIAG)

    @classmethod
    def scalar_i(cls, i: int):
        return cls(cls.SCALAR, i)

    @classmethod
    def impossible(cls):
        return cls(cls.IMPOSSIBLE)

    def __str__(self):
        return f"{self.kind}({self.i})" if self.kind == self.SCALAR else self.kind


def classify_involution(h: Mat2, p: int) -> InvolutionClass:
    """
    Classify h in GL2(F_p) with det(h) = -1 and h^2 = +-I.

    h^2 = I forces eigenvalues {1, -1}, so h is similar to diag(1, -1).  When
    h^2 = -I the eigenvalues are square roots of -1 with product -1, hence
    equal, and the diagonalisable h is the scalar iI.
    """
    if det(h, p) != p - 1:
        raise ContractError(f"det(h) = {det(h, p)}, expected -1 mod {p}")
    h2 = mat_mul(h, h, p)
    if h2 == (1, 0, 0, 1):
        return InvolutionClass.diag_one_minus_one()
    if h2 == (p - 1, 0, 0, p - 1):
        if p % 4 == 3:
            # a matrix with h^2 = -I and x^2 + 1 irreducible has det 1
            raise ContractError(f"h^2 = -I with det -1 cannot occur for p = {p} = 3 mod 4")
        if not is_scalar(h):
            raise ContractError(f"h^2 = -I, det -1 but h = {h} is not scalar")
        return InvolutionClass.scalar_i(h[0])
    raise ContractError(f"h^2 = {h2} is not +-I")


def involution_census(p: int) -> dict:
    """
    Scan GL2(F_p) and tally the classification of every h with det(h) = -1
    and h^2 = +-I.  For p = 3 mod 4 the scalar branch is reported as
    ``Impossible`` with count 0 once the scan confirms it is empty.
    """
    counts: dict = {}
    for h in det_fiber(p, -1):
        h2 = mat_mul(h, h, p)
        if h2 not in ((1, 0, 0, 1), (p - 1, 0, 0, p - 1)):
            continue
        tag = classify_involution(h, p)
        counts[tag] = counts.get(tag, 0) + 1
    if p % 4 == 3:
        counts[InvolutionClass.impossible()] = 0
    return counts
