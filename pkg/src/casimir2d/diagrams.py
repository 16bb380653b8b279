"""Diagram combinatorics for the multiple-reflection expansion.

A diagram is a cyclic word [i_N ... i_1] of object indices subject to:

* Rule 1 -- no two cyclically adjacent indices are equal;
* Rule 2 -- orientation matters: a word and its reversal are distinct
  diagrams unless the reversal is a cyclic rotation of the word
  (direction-symmetric);
* Rule 3 -- a word fixed by n cyclic rotations carries a symmetry
  factor S = 1/n.

Also provides a dense-matrix ln-det oracle (BlockSystem) proving that
the diagram sum reproduces -tr ln(I - K).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ValidationError

__all__ = [
    "Diagram",
    "BlockSystem",
    "canonicalize",
    "symmetry_factor",
    "enumerate_diagrams",
    "lndet_oracle",
    "word_to_str",
    "parse_word",
]


def _rotations(word):
    n = len(word)
    return [word[k:] + word[:k] for k in range(n)]


def _canonical_rotation(word):
    return min(_rotations(word))


def _rule1_ok(word):
    n = len(word)
    return all(word[k] != word[(k + 1) % n] for k in range(n))


def word_to_str(word) -> str:
    """Serialize as the bracketed digit string used in reports, e.g. "[2131]"."""
    return "[" + "".join(str(i) for i in word) + "]"


def parse_word(s: str):
    s = s.strip()
    if s.startswith("[") and s.endswith("]"):
        s = s[1:-1]
    if not s.isdigit():
        raise ValidationError(f"cannot parse diagram word {s!r}")
    return tuple(int(c) for c in s)


@dataclass(frozen=True)
class Diagram:
    """Canonical cyclic word with its symmetry data."""

    word: tuple
    symmetry_factor: Fraction
    direction_symmetric: bool

    @property
    def order(self) -> int:
        """Reflection order N = number of T insertions."""
        return len(self.word)

    def __str__(self):
        return word_to_str(self.word)


def symmetry_factor(word) -> Fraction:
    """1/n where n counts cyclic rotations mapping the word to itself."""
    word = tuple(word)
    n = sum(1 for r in _rotations(word) if r == word)
    return Fraction(1, n)


def canonicalize(word) -> Diagram:
    """Validate Rule 1, pick the lexicographically minimal rotation,
    and attach symmetry factor and direction symmetry."""
    word = tuple(word)
    if len(word) < 2:
        raise ValidationError("diagram words need at least two insertions")
    if any(i < 1 for i in word):
        raise ValidationError("object indices start at 1")
    if not _rule1_ok(word):
        raise ValidationError(
            f"word {word_to_str(word)} has equal cyclic neighbors (Rule 1)"
        )
    canon = _canonical_rotation(word)
    reversed_canon = _canonical_rotation(canon[::-1])
    return Diagram(
        word=canon,
        symmetry_factor=symmetry_factor(canon),
        direction_symmetric=(reversed_canon == canon),
    )


def enumerate_diagrams(M: int, N_max: int):
    """All canonical diagrams over objects {1..M} with 2 <= N <= N_max.

    Mirror-pair members both appear (as distinct canonical classes);
    direction-symmetric diagrams appear once.  Single-insertion diagrams
    are excluded by construction.
    """
    if M < 2:
        raise ValidationError("need at least two objects")
    if N_max < 2:
        raise ValidationError("N_max must be >= 2")
    seen = set()
    out = []

    def grow(word, n):
        if n >= 2 and word[-1] != word[0]:
            canon = _canonical_rotation(word)
            if canon not in seen:
                seen.add(canon)
                out.append(canonicalize(canon))
        if n == N_max:
            return
        for i in range(1, M + 1):
            if i != word[-1]:
                grow(word + (i,), n + 1)

    for first in range(1, M + 1):
        grow((first,), 1)
    out.sort(key=lambda d: (d.order, d.word))
    return out


@dataclass
class BlockSystem:
    """Finite-matrix stand-in for the T and U operators.

    t_blocks[i] is object i's square T matrix; u_blocks[(i, j)] the
    translation matrix appearing in T_i U_{ij}.
    """

    M: int
    t_blocks: dict = field(default_factory=dict)
    u_blocks: dict = field(default_factory=dict)

    def coupling_matrix(self) -> np.ndarray:
        """Assembled block matrix K with K_ab = T_a U_ab, zero diagonal."""
        dims = [self.t_blocks[i].shape[0] for i in range(1, self.M + 1)]
        offs = np.concatenate([[0], np.cumsum(dims)])
        K = np.zeros((offs[-1], offs[-1]), dtype=complex)
        for a in range(1, self.M + 1):
            for b in range(1, self.M + 1):
                if a == b or (a, b) not in self.u_blocks:
                    continue
                blk = self.t_blocks[a] @ self.u_blocks[(a, b)]
                K[offs[a - 1]:offs[a], offs[b - 1]:offs[b]] = blk
        return K

    def diagram_trace(self, word) -> complex:
        """tr prod_k T_{i_k} U_{i_k, i_{k+1}} around the cycle."""
        n = len(word)
        mats = []
        for k in range(n):
            a = word[k]
            # chained closed walk: tr prod_k K_{w_k, w_{k+1}} with
            # K_ab = T_a U_ab, e.g. word (1,2,3) ->
            # tr(T1 U12 T2 U23 T3 U31)
            b = word[(k + 1) % n]
            u = self.u_blocks.get((a, b))
            if u is None:
                return 0.0 + 0.0j
            mats.append(self.t_blocks[a] @ u)
        acc = mats[0]
        for m in mats[1:]:
            acc = acc @ m
        return complex(np.trace(acc))


def lndet_oracle(sys: BlockSystem, N_max: int):
    """(diagram series sum, exact -tr ln(I-K)) for a BlockSystem.

    Refuses if the coupling matrix has spectral radius >= 1 (series
    divergent).
    """
    K = sys.coupling_matrix()
    lam = np.linalg.eigvals(K)
    rho = float(np.max(np.abs(lam))) if lam.size else 0.0
    if rho >= 1.0:
        raise ValidationError(
            f"spectral radius {rho:.3f} >= 1: reflection series divergent"
        )
    series = 0.0 + 0.0j
    for diag in enumerate_diagrams(sys.M, N_max):
        series += float(diag.symmetry_factor) * sys.diagram_trace(diag.word)
    exact = complex(-np.sum(np.log(1.0 - lam)))
    return series, exact
