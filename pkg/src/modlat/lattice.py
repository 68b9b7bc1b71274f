"""Finite lattices: subspaces of F_q^n, Boolean lattices, products and small
explicit posets, plus checkers for the lattice laws.

Throughout, ``+``/join is the least upper bound and ``*``/meet the greatest
lower bound.
"""
from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Iterator, Sequence

import numpy as np

from .gf import FieldSpec, Matrix, multiply, random_matrix, rref
from .kernels import rref_kernel
from .rng import SeededRng


class LatticeMismatchError(ValueError):
    """An element does not belong to the lattice it was used with."""


class UnsupportedBackendError(TypeError):
    """The requested construction is not available for this lattice backend."""


class Subspace:
    """A subspace of F_q^n stored by its unique RREF basis."""

    __slots__ = ("field", "n", "basis", "_key")

    def __init__(self, field: FieldSpec, n: int, basis: Matrix):
        # callers must pass a canonical basis; use Subspace.span otherwise
        if basis.cols != n:
            raise ValueError(f"basis has {basis.cols} columns, ambient dimension is {n}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_key", (field.q, n, basis.rows, basis.data.tobytes()))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def span(cls, field: FieldSpec, n: int, vectors) -> "Subspace":
        if isinstance(vectors, Matrix):
            M = vectors
        else:
            arr = np.asarray(vectors, dtype=np.int64)
            M = Matrix(field, arr.reshape(-1, n) if arr.size else np.zeros((0, n), dtype=np.int64))
        return cls(field, n, rref(M).R)

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field, n, Matrix.zeros(field, 0, n))

    @classmethod
    def full(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field, n, Matrix.identity(field, n))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(int(np.flatnonzero(row)[0]) for row in self.basis.data)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Subspace(q={self.q}, n={self.n}, basis={self.basis.tolist()})"


class Lattice(ABC):
    """A finite bounded lattice."""

    @property
    @abstractmethod
    def bottom(self): ...

    @property
    @abstractmethod
    def top(self): ...

    @abstractmethod
    def contains(self, x) -> bool: ...

    @abstractmethod
    def join(self, x, y): ...

    @abstractmethod
    def meet(self, x, y): ...

    def leq(self, x, y) -> bool:
        return self.meet(x, y) == x

    @abstractmethod
    def random_element(self, rng: SeededRng): ...

    def elements(self) -> Iterator:
        raise UnsupportedBackendError(f"{type(self).__name__} does not enumerate its elements")

    def _check(self, *xs):
        for x in xs:
            if not self.contains(x):
                raise LatticeMismatchError(f"{x!r} is not an element of {self!r}")


class SubspaceLattice(Lattice):
    """L(F_q^n): all subspaces of F_q^n ordered by inclusion."""

    def __init__(self, q: int | FieldSpec, n: int):
        self.field = q if isinstance(q, FieldSpec) else FieldSpec(q)
        if n < 0:
            raise ValueError("ambient dimension must be non-negative")
        self.n = n
        self._bottom = Subspace.zero(self.field, n)
        self._top = Subspace.full(self.field, n)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def bottom(self) -> Subspace:
        return self._bottom

    @property
    def top(self) -> Subspace:
        return self._top

    def __repr__(self):
        return f"SubspaceLattice(q={self.q}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, SubspaceLattice) and (self.q, self.n) == (other.q, other.n)

    def __hash__(self):
        return hash(("subspace", self.q, self.n))

    def contains(self, x) -> bool:
        return isinstance(x, Subspace) and x.n == self.n and x.field == self.field

    def span(self, vectors) -> Subspace:
        return Subspace.span(self.field, self.n, vectors)

    def join(self, x: Subspace, y: Subspace) -> Subspace:
        self._check(x, y)
        if x.dim == 0 or y.dim == self.n:
            return y
        if y.dim == 0 or x.dim == self.n:
            return x
        R, _, _ = rref_kernel(np.vstack([x.basis.data, y.basis.data]), self.q)
        return Subspace(self.field, self.n, Matrix(self.field, R, _trusted=True))

    def meet(self, x: Subspace, y: Subspace) -> Subspace:
        """Intersection by the Zassenhaus block reduction of [X X; Y 0]."""
        self._check(x, y)
        if x.dim == 0 or y.dim == self.n:
            return x
        if y.dim == 0 or x.dim == self.n:
            return y
        n, kx, ky = self.n, x.dim, y.dim
        Z = np.zeros((kx + ky, 2 * n), dtype=np.int64)
        Z[:kx, :n] = x.basis.data
        Z[:kx, n:] = x.basis.data
        Z[kx:, :n] = y.basis.data
        R, _, piv = rref_kernel(Z, self.q)
        inter = R[piv >= n][:, n:]
        return Subspace(self.field, n, Matrix(self.field, np.ascontiguousarray(inter), _trusted=True))

    def leq(self, x: Subspace, y: Subspace) -> bool:
        self._check(x, y)
        if x.dim > y.dim:
            return False
        if x.dim == 0 or y.dim == self.n:
            return True
        # reduce each row of x against y's pivots; x <= y iff nothing is left over
        piv = list(y.pivots)
        coeffs = Matrix(self.field, x.basis.data[:, piv], _trusted=True)
        proj = multiply(coeffs, y.basis).data
        return bool(np.array_equal(proj, x.basis.data))

    def random_element(self, rng: SeededRng) -> Subspace:
        return random_subspace(rng.randint(0, self.n), self, rng)

    def elements(self) -> Iterator[Subspace]:
        return iter_interval(self, self.bottom, self.top)


class BooleanLattice(Lattice):
    """All subsets of ``{0, ..., size-1}`` ordered by inclusion."""

    def __init__(self, size: int):
        self.size = size
        self._top = frozenset(range(size))

    def __repr__(self):
        return f"BooleanLattice({self.size})"

    def __eq__(self, other):
        return isinstance(other, BooleanLattice) and self.size == other.size

    def __hash__(self):
        return hash(("boolean", self.size))

    @property
    def bottom(self) -> frozenset:
        return frozenset()

    @property
    def top(self) -> frozenset:
        return self._top

    def contains(self, x) -> bool:
        return isinstance(x, frozenset) and x <= self._top

    def join(self, x, y):
        self._check(x, y)
        return x | y

    def meet(self, x, y):
        self._check(x, y)
        return x & y

    def leq(self, x, y) -> bool:
        self._check(x, y)
        return x <= y

    def random_element(self, rng: SeededRng) -> frozenset:
        return frozenset(i for i in range(self.size) if rng.bit())

    def elements(self) -> Iterator[frozenset]:
        for r in range(self.size + 1):
            for c in itertools.combinations(range(self.size), r):
                yield frozenset(c)


class ProductLattice(Lattice):
    """Direct product; elements are tuples, operations act componentwise."""

    def __init__(self, components: Sequence[Lattice]):
        if not components:
            raise ValueError("a product needs at least one component")
        self.components = tuple(components)

    @classmethod
    def power(cls, lattice: Lattice, k: int) -> "ProductLattice":
        return cls([lattice] * k)

    def __repr__(self):
        return f"ProductLattice({list(self.components)!r})"

    def __eq__(self, other):
        return isinstance(other, ProductLattice) and self.components == other.components

    def __hash__(self):
        return hash(("product", self.components))

    @property
    def bottom(self) -> tuple:
        return tuple(L.bottom for L in self.components)

    @property
    def top(self) -> tuple:
        return tuple(L.top for L in self.components)

    def contains(self, x) -> bool:
        return (isinstance(x, tuple) and len(x) == len(self.components)
                and all(L.contains(c) for L, c in zip(self.components, x)))

    def join(self, x, y):
        self._check(x, y)
        return tuple(L.join(a, b) for L, a, b in zip(self.components, x, y))

    def meet(self, x, y):
        self._check(x, y)
        return tuple(L.meet(a, b) for L, a, b in zip(self.components, x, y))

    def leq(self, x, y) -> bool:
        self._check(x, y)
        return all(L.leq(a, b) for L, a, b in zip(self.components, x, y))

    def random_element(self, rng: SeededRng) -> tuple:
        return tuple(L.random_element(rng) for L in self.components)

    def elements(self) -> Iterator[tuple]:
        return itertools.product(*(list(L.elements()) for L in self.components))


class FiniteLattice(Lattice):
    """A small lattice given by its elements and order relation.

    Joins and meets are tabulated at construction; a poset that is not a
    lattice is rejected.
    """

    def __init__(self, elements: Sequence[Hashable], covers: Iterable[tuple[Hashable, Hashable]], name: str = ""):
        self._elements = tuple(elements)
        self.name = name
        idx = {e: i for i, e in enumerate(self._elements)}
        k = len(idx)
        le = np.eye(k, dtype=bool)
        for a, b in covers:
            le[idx[a], idx[b]] = True
        for m in range(k):  # transitive closure
            le |= le[:, m:m + 1] & le[m:m + 1, :]
        self._le = le
        self._idx = idx
        self._join: dict[tuple, Any] = {}
        self._meet: dict[tuple, Any] = {}
        for a in self._elements:
            for b in self._elements:
                ia, ib = idx[a], idx[b]
                ups = [i for i in range(k) if le[ia, i] and le[ib, i]]
                lub = [u for u in ups if all(le[u, v] for v in ups)]
                downs = [i for i in range(k) if le[i, ia] and le[i, ib]]
                glb = [u for u in downs if all(le[v, u] for v in downs)]
                if len(lub) != 1 or len(glb) != 1:
                    raise ValueError(f"{name or 'poset'} is not a lattice: {a!r}, {b!r} lack a join or meet")
                self._join[a, b] = self._elements[lub[0]]
                self._meet[a, b] = self._elements[glb[0]]
        self._bottom = next(e for e in self._elements if le[idx[e]].all())
        self._top = next(e for e in self._elements if le[:, idx[e]].all())

    def __repr__(self):
        return f"FiniteLattice({self.name or list(self._elements)})"

    @property
    def bottom(self):
        return self._bottom

    @property
    def top(self):
        return self._top

    def contains(self, x) -> bool:
        try:
            return x in self._idx
        except TypeError:
            return False

    def join(self, x, y):
        self._check(x, y)
        return self._join[x, y]

    def meet(self, x, y):
        self._check(x, y)
        return self._meet[x, y]

    def leq(self, x, y) -> bool:
        self._check(x, y)
        return bool(self._le[self._idx[x], self._idx[y]])

    def random_element(self, rng: SeededRng):
        return rng.choice(self._elements)

    def elements(self) -> Iterator:
        return iter(self._elements)


def n5_lattice() -> FiniteLattice:
    """The pentagon: 0 < a < c < 1 and 0 < b < 1, b incomparable to a and c."""
    return FiniteLattice(["0", "a", "b", "c", "1"],
                         [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")], name="N5")


def chain_lattice(length: int) -> FiniteLattice:
    """Total order 0 < 1 < ... < length-1."""
    return FiniteLattice(list(range(length)), [(i, i + 1) for i in range(length - 1)],
                         name=f"chain{length}")


@dataclass(frozen=True)
class Interval:
    """The sublattice ``[lo, hi]`` of ``lattice``."""

    lattice: Lattice
    lo: Any
    hi: Any

    def __post_init__(self):
        if not self.lattice.leq(self.lo, self.hi):
            raise ValueError("interval bounds must satisfy lo <= hi")

    def __contains__(self, x) -> bool:
        return self.lattice.leq(self.lo, x) and self.lattice.leq(x, self.hi)


# ---------------------------------------------------------------- law checks

def check_modular_triple(L: Lattice, a, b, c) -> bool:
    """a <= c implies (a + b) * c == a + b * c; vacuously true otherwise."""
    if not L.leq(a, c):
        return True
    return L.meet(L.join(a, b), c) == L.join(a, L.meet(b, c))


def check_distributive_triple(L: Lattice, x, y, z) -> bool:
    """Both distributive laws on one triple."""
    first = L.meet(x, L.join(y, z)) == L.join(L.meet(x, y), L.meet(x, z))
    second = L.join(x, L.meet(y, z)) == L.meet(L.join(x, y), L.join(x, z))
    return first and second


def lattice_law_violations(L: Lattice, x, y, z) -> list[str]:
    """Names of the basic lattice identities that fail on (x, y, z)."""
    j, m = L.join, L.meet
    laws = {
        "join idempotent": j(x, x) == x,
        "meet idempotent": m(x, x) == x,
        "join commutative": j(x, y) == j(y, x),
        "meet commutative": m(x, y) == m(y, x),
        "join associative": j(j(x, y), z) == j(x, j(y, z)),
        "meet associative": m(m(x, y), z) == m(x, m(y, z)),
        "absorption join-meet": j(x, m(x, y)) == x,
        "absorption meet-join": m(x, j(x, y)) == x,
        "meet below": L.leq(m(x, y), x),
        "join above": L.leq(x, j(x, y)),
    }
    return [name for name, ok in laws.items() if not ok]


def is_complement(L: Lattice, a, b) -> bool:
    return L.meet(a, b) == L.bottom and L.join(a, b) == L.top


def complement_of(L: Lattice, a):
    """A complement of ``a`` by greedy extension with standard basis vectors."""
    if not isinstance(L, SubspaceLattice):
        raise UnsupportedBackendError(f"no complement construction for {type(L).__name__}")
    L._check(a)
    current = a
    added = []
    for i in range(L.n):
        if current.dim == L.n:
            break
        e = np.zeros(L.n, dtype=np.int64)
        e[i] = 1
        grown = L.join(current, L.span(e))
        if grown.dim > current.dim:
            current = grown
            added.append(e)
    return L.span(np.array(added, dtype=np.int64).reshape(-1, L.n))


# ---------------------------------------------------------------- sampling

def random_subspace(m: int, L: SubspaceLattice, rng: SeededRng, *, exact: bool = False) -> Subspace:
    """Span of ``m`` independent uniform vectors.

    With ``exact=True`` the draw is repeated until the vectors are
    independent, which gives the uniform distribution on m-dimensional
    subspaces.
    """
    if m > L.n and exact:
        raise ValueError(f"no {m}-dimensional subspace of F_q^{L.n}")
    while True:
        s = L.span(random_matrix(m, L.n, L.field, rng))
        if not exact or s.dim == m:
            return s


def random_extension(L: SubspaceLattice, base: Subspace, m: int, rng: SeededRng, *,
                     target_dim: int | None = None) -> Subspace:
    """``base`` plus the span of ``m`` uniform vectors.

    With ``target_dim`` the draw is repeated until the result has that
    dimension, giving a uniform superspace of ``base`` of that dimension.
    """
    if target_dim is not None and not base.dim <= target_dim <= L.n:
        raise ValueError(f"cannot extend a {base.dim}-space to dimension {target_dim} in F_q^{L.n}")
    while True:
        s = L.join(base, L.span(random_matrix(m, L.n, L.field, rng)))
        if target_dim is None or s.dim == target_dim:
            return s


# ---------------------------------------------------------------- enumeration

def iter_rref(q: int, k: int, dim: int) -> Iterator[np.ndarray]:
    """Every RREF ``dim x k`` matrix of full rank over F_q (one per subspace)."""
    for pivots in itertools.combinations(range(k), dim):
        pset = set(pivots)
        free = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, k) if c not in pset]
        base = np.zeros((dim, k), dtype=np.int64)
        for i, p in enumerate(pivots):
            base[i, p] = 1
        for values in itertools.product(range(q), repeat=len(free)):
            M = base.copy()
            for (i, c), v in zip(free, values):
                M[i, c] = v
            yield M


def relative_complement_basis(L: SubspaceLattice, lo: Subspace, hi: Subspace) -> np.ndarray:
    """Rows of ``hi``'s basis that extend ``lo`` to a basis of ``hi``."""
    current = lo
    picked = []
    for row in hi.basis.data:
        if current.dim == hi.dim:
            break
        grown = L.join(current, L.span(row))
        if grown.dim > current.dim:
            current = grown
            picked.append(row)
    return np.array(picked, dtype=np.int64).reshape(-1, L.n)


def iter_interval(L: SubspaceLattice, lo: Subspace, hi: Subspace,
                  dims: Iterable[int] | None = None) -> Iterator[Subspace]:
    """All subspaces x with lo <= x <= hi, optionally only those of given dimensions.

    Works in the quotient hi/lo: each subspace of the quotient is one RREF
    matrix over a fixed complement of lo inside hi.
    """
    if not L.leq(lo, hi):
        raise ValueError("empty interval: lo is not below hi")
    C = relative_complement_basis(L, lo, hi)
    c = C.shape[0]
    wanted = range(c + 1) if dims is None else sorted(d - lo.dim for d in dims if lo.dim <= d <= hi.dim)
    Cm = Matrix(L.field, C, _trusted=True)
    for j in wanted:
        for W in iter_rref(L.q, c, j):
            vecs = multiply(Matrix(L.field, W, _trusted=True), Cm).data
            yield L.span(np.vstack([lo.basis.data, vecs]))
