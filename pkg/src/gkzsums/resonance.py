"""Character descent along face tori and the non-resonance test.

A character chi of (k^*)^n is named by its exponent vector c mod (q-1)
against a fixed generator of k^*.  chi factors through the projection p_tau
onto the face torus of tau exactly when c lies in the subgroup of
(Z/(q-1))^n generated by the rows of a saturated basis of
M_tau = Z^n ∩ span(tau); the membership test runs through an integer Smith
normal form followed by per-divisor congruences, which avoids linear algebra
over the non-PID quotient ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .lattice import (
    RationalCone,
    Sublattice,
    smith_normal_form,
    snf_diagonal,
    span_lattice,
)

__all__ = [
    "CharacterSpec",
    "FactorizationResult",
    "factor_through_face",
    "kernel_generators",
    "nonresonant",
]


@dataclass(frozen=True)
class CharacterSpec:
    """chi = chi_0^{c_1} ⊗ ... ⊗ chi_0^{c_n} for the fixed generator
    character chi_0 of k^*; entries are reduced mod q-1."""

    exponents: tuple[int, ...]
    q: int
    generator: str = ""

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("field size must be >= 2")
        object.__setattr__(
            self, "exponents", tuple(int(c) % max(1, self.q - 1) for c in self.exponents)
        )

    @property
    def n(self) -> int:
        return len(self.exponents)

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def component(self, i: int) -> int:
        return self.exponents[i]

    def to_json(self) -> dict:
        return {"chi": list(self.exponents), "q": self.q, "generator": self.generator}

    @classmethod
    def from_field(cls, field, exponents: Sequence[int]) -> "CharacterSpec":
        tag = f"F{field.q}:g={field.generator}"
        return cls(tuple(exponents), field.q, tag)


@dataclass(frozen=True)
class FactorizationResult:
    """Outcome of the descent test; when `factors` holds, `chi_tau` gives the
    exponents of the descended character in the recorded basis of M_tau, and
    pulling it back along that basis reproduces chi."""

    factors: bool
    chi_tau: CharacterSpec | None
    basis: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "factors": self.factors,
            "chi_tau": list(self.chi_tau.exponents) if self.chi_tau else None,
            "basis": [list(b) for b in self.basis],
        }


def _solve_congruence(a: int, b: int, m: int) -> int | None:
    """Least x with a*x ≡ b (mod m), or None."""
    g = gcd(a, m)
    if b % g != 0:
        return None
    mm = m // g
    x = (b // g) * pow(a // g, -1, mm) % mm if mm > 1 else 0
    return x


def factor_through_face(chi: CharacterSpec, sub: Sublattice) -> FactorizationResult:
    """Decide whether chi is a pullback along the face-torus projection with
    kernel lattice `sub`, i.e. whether c lies in the mod-(q-1) row span of
    the saturated basis of M_tau."""
    modulus = chi.q - 1
    basis = sub.basis
    n = chi.n
    if sub.ambient != n:
        raise ValueError("lattice and character live in different ranks")
    if modulus == 1:
        chi_tau = CharacterSpec((0,) * len(basis), chi.q, chi.generator)
        return FactorizationResult(True, chi_tau, basis)
    if not basis:
        if chi.is_trivial():
            return FactorizationResult(True, CharacterSpec((), chi.q, chi.generator), basis)
        return FactorizationResult(False, None, basis)

    u, d, v = smith_normal_form(basis)
    r = len(snf_diagonal(d))
    cv = [
        sum(chi.exponents[i] * v[i][j] for i in range(n)) % modulus for j in range(n)
    ]
    y = []
    for i in range(r):
        yi = _solve_congruence(d[i][i] % modulus, cv[i], modulus)
        if yi is None:
            return FactorizationResult(False, None, basis)
        y.append(yi)
    for j in range(r, n):
        if cv[j] % modulus != 0:
            return FactorizationResult(False, None, basis)
    k = len(basis)
    x = tuple(sum(y[i] * u[i][j] for i in range(min(r, k))) % modulus for j in range(k))
    # sanity: pulling chi_tau back along the basis reproduces c mod (q-1)
    for col in range(n):
        acc = sum(x[i] * basis[i][col] for i in range(k)) % modulus
        if acc != chi.exponents[col] % modulus:
            raise AssertionError("descent witness failed to pull back")
    chi_tau = CharacterSpec(x, chi.q, chi.generator)
    return FactorizationResult(True, chi_tau, basis)


def kernel_generators(sub: Sublattice, q: int) -> list[tuple[int, ...]]:
    """Generators of ker p_tau(k) = {a in (Z/(q-1))^n : a·u ≡ 0 mod q-1 for
    all u in M_tau}; used to cross-validate factor_through_face by brute
    force."""
    modulus = q - 1
    n = sub.ambient
    if modulus == 1:
        return []
    basis = sub.basis
    if not basis:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    u, d, v = smith_normal_form([list(row) for row in basis])
    r = len(snf_diagonal(d))
    gens: list[tuple[int, ...]] = []
    # solutions in z-coordinates (a = V z): z_i a multiple of (q-1)/gcd(d_i, q-1)
    # for i <= r, free beyond; generators are the scaled columns of V
    for i in range(n):
        if i < r:
            step = modulus // gcd(d[i][i], modulus)
            if step % modulus == 0:
                continue
        else:
            step = 1
        a = tuple((step * v[j][i]) % modulus for j in range(n))
        if any(a):
            gens.append(a)
    return gens


def nonresonant(chi: CharacterSpec, delta: RationalCone) -> tuple[bool, list[dict]]:
    """True iff chi factors through no proper face of delta.  It suffices to
    test the codimension-one faces, since every proper face is contained in
    one; the evidence list records every tested face and its verdict."""
    evidence = []
    verdict = True
    for face in delta.faces_of_codim(1):
        sub = span_lattice(delta, face)
        res = factor_through_face(chi, sub)
        evidence.append(
            {
                "face_id": delta.lattice.index_of(face),
                "generators": sorted(face.members),
                "dim": face.dim,
                "factors": res.factors,
                "chi_tau": list(res.chi_tau.exponents) if res.chi_tau else None,
            }
        )
        if res.factors:
            verdict = False
    return verdict, evidence


def nonresonant_all_faces(chi: CharacterSpec, delta: RationalCone) -> bool:
    """Same test over every proper face; must agree with `nonresonant`."""
    for face in delta.proper_faces():
        if factor_through_face(chi, span_lattice(delta, face)).factors:
            return False
    return True
