"""Finite bosonic Fock spaces and dense operator algebra.

Modes carry a fixed canonical order (L_up, L_down, R_up, R_down, PM_L,
PM_R).  Bases are enumerations of occupation vectors under a per-mode
cap and an optional total-particle-number sector constraint on the
system modes; operators are dense complex matrices bound to a basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Mode(Enum):
    """Bosonic mode labels in canonical order."""

    L_UP = 0
    L_DOWN = 1
    R_UP = 2
    R_DOWN = 3
    PM_L = 4
    PM_R = 5

    @property
    def is_system(self) -> bool:
        return self.value < 4


SYSTEM_MODES = (Mode.L_UP, Mode.L_DOWN, Mode.R_UP, Mode.R_DOWN)
PSEUDOMODES = (Mode.PM_L, Mode.PM_R)


class FockError(Exception):
    """Invalid basis construction or operator usage."""


class BasisMismatchError(FockError):
    """Operands bound to different bases."""


class EmptyBasisError(FockError):
    """Constraints admit no occupation vectors."""


@dataclass(frozen=True)
class FockBasis:
    """Ordered occupation-number basis.

    ``sector`` constrains the total particle number summed over the
    *system* modes present in ``modes``; pseudomodes are only limited by
    ``max_occupation``.  States are lexicographically ordered.
    """

    modes: tuple
    max_occupation: int
    sector: int | None
    states: tuple = field(repr=False)
    _index: dict = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def index_of(self, occ) -> int:
        return self._index[tuple(occ)]

    def mode_position(self, mode: Mode) -> int:
        try:
            return self.modes.index(mode)
        except ValueError:
            raise FockError(f"mode {mode} not in basis") from None

    def occupations(self, mode: Mode) -> np.ndarray:
        """Occupation of ``mode`` for every basis state, as a vector."""
        pos = self.mode_position(mode)
        return np.array([s[pos] for s in self.states])

    def ket(self, occ) -> np.ndarray:
        """Unit vector for a single occupation configuration."""
        v = np.zeros(self.dim, dtype=complex)
        v[self.index_of(occ)] = 1.0
        return v

    def without_sector(self) -> "FockBasis":
        return enumerate_basis(self.modes, self.max_occupation, sector=None)


def enumerate_basis(modes, max_occupation: int, sector: int | None = None) -> FockBasis:
    """Enumerate all occupation vectors under the cap and sector constraint."""
    modes = tuple(modes)
    if not modes:
        raise FockError("mode list must be non-empty")
    if len(set(modes)) != len(modes):
        raise FockError("duplicate modes")
    if sorted(modes, key=lambda m: m.value) != list(modes):
        raise FockError("modes must follow the canonical order")
    if max_occupation < 1:
        raise FockError("max_occupation must be >= 1")

    system_pos = [i for i, m in enumerate(modes) if m.is_system]
    states = []
    for occ in itertools.product(range(max_occupation + 1), repeat=len(modes)):
        if sector is not None and sum(occ[i] for i in system_pos) != sector:
            continue
        states.append(occ)
    if not states:
        raise EmptyBasisError(
            f"no states for sector={sector} with cap {max_occupation}"
        )
    states = tuple(sorted(states))
    index = {s: i for i, s in enumerate(states)}
    return FockBasis(modes, max_occupation, sector, states, index)


@dataclass(frozen=True)
class Operator:
    """Dense complex matrix bound to a FockBasis."""

    basis: FockBasis
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.basis.dim, self.basis.dim):
            raise FockError("matrix dimension does not match basis dimension")

    def _check(self, other: "Operator"):
        if self.basis is not other.basis and self.basis != other.basis:
            raise BasisMismatchError("operands live on different bases")

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.basis, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.basis, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.basis, self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.basis, self.matrix @ other.matrix)

    def adjoint(self) -> "Operator":
        return Operator(self.basis, self.matrix.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return np.max(np.abs(self.matrix - self.matrix.conj().T)) < tol


def identity(basis: FockBasis) -> Operator:
    return Operator(basis, np.eye(basis.dim, dtype=complex))


def zero(basis: FockBasis) -> Operator:
    return Operator(basis, np.zeros((basis.dim, basis.dim), dtype=complex))


def ladder(basis: FockBasis, mode: Mode, kind: str) -> Operator:
    """Creation/annihilation operator with <n+1|a+|n> = sqrt(n+1).

    Not defined on sector-constrained bases: raw ladder operators change
    the particle number, so they are built on the unconstrained basis
    and number-conserving products are restricted afterwards (see
    ``restrict``).
    """
    if kind not in ("create", "annihilate"):
        raise FockError(f"unknown ladder kind {kind!r}")
    if basis.sector is not None and mode.is_system:
        raise FockError(
            "raw ladder operator on a sector-constrained basis; build on "
            "basis.without_sector() and restrict the product"
        )
    pos = basis.mode_position(mode)
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    for i, occ in enumerate(basis.states):
        n = occ[pos]
        if n < basis.max_occupation:
            raised = list(occ)
            raised[pos] = n + 1
            j = basis.index_of(raised)
            mat[j, i] = np.sqrt(n + 1)
    op = Operator(basis, mat)
    return op if kind == "create" else op.adjoint()


def number(basis: FockBasis, mode: Mode) -> Operator:
    """Number operator; diagonal, valid on sector-constrained bases too."""
    return Operator(basis, np.diag(basis.occupations(mode).astype(complex)))


def hop(basis: FockBasis, dst: Mode, src: Mode) -> Operator:
    """Number-conserving product a+_dst a_src, built directly on ``basis``.

    The product conserves the total particle number, so it is well
    defined on sector-constrained bases even though the raw factors are
    not: <occ'|a+_dst a_src|occ> = sqrt((n_dst + 1) n_src).
    """
    pd = basis.mode_position(dst)
    ps = basis.mode_position(src)
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    for i, occ in enumerate(basis.states):
        n_src = occ[ps]
        if n_src == 0:
            continue
        if dst == src:
            mat[i, i] = n_src
            continue
        if occ[pd] >= basis.max_occupation:
            continue
        moved = list(occ)
        moved[ps] -= 1
        moved[pd] += 1
        j = basis.index_of(moved)
        mat[j, i] = np.sqrt((occ[pd] + 1) * n_src)
    return Operator(basis, mat)


def restrict(op: Operator, basis: FockBasis) -> Operator:
    """Restrict an operator on the unconstrained basis to a sub-basis.

    Valid only when ``op`` is block diagonal with respect to the
    sub-basis (number-conserving products); the off-block norm is
    checked.
    """
    full = op.basis
    idx = np.array([full.index_of(s) for s in basis.states])
    sub = op.matrix[np.ix_(idx, idx)]
    mask = np.zeros(full.dim, dtype=bool)
    mask[idx] = True
    leak = max(
        np.max(np.abs(op.matrix[np.ix_(~mask, idx)]), initial=0.0),
        np.max(np.abs(op.matrix[np.ix_(idx, ~mask)]), initial=0.0),
    )
    if leak > 1e-12:
        raise FockError(f"operator leaks out of the sector (|leak|={leak:.2e})")
    return Operator(basis, sub)


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a


def anticommutator(a: Operator, b: Operator) -> Operator:
    return a @ b + b @ a
