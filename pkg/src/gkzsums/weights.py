"""Stanley alpha/beta polynomials on face lattices, the set of
character-factoring faces, and the e/E weight predictions with expected
Frobenius spectra.

alpha and beta depend only on the combinatorial type of their input, so the
recursion runs on graded posets; the quotient cone at a face corresponds to
the regraded interval above it in the face lattice (the face-figure poset).
Recursive values are memoized per isomorphism class, with refinement-hash
buckets resolved by exact poset matching.  Memo insertion is idempotent and
runs under the interpreter lock, so concurrent use is safe (at worst a value
is recomputed).
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import (
    ExponentMatrix,
    Face,
    GradedPoset,
    RationalCone,
    Sublattice,
    hull,
    poly_of_cone,
    quotient_cone,
    span_lattice,
)
from .resonance import CharacterSpec, factor_through_face

__all__ = [
    "WeightPolynomial",
    "GkzInstance",
    "SpectrumPrediction",
    "TSetEntry",
    "alpha",
    "beta",
    "t_set",
    "e_value",
    "E_polynomial",
    "expected_spectrum",
]


class WeightPolynomial:
    """Polynomial in one variable T with exact integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cc = list(int(c) for c in coeffs)
        while cc and cc[-1] == 0:
            cc.pop()
        self.coeffs = tuple(cc)

    @staticmethod
    def zero() -> "WeightPolynomial":
        return WeightPolynomial(())

    @staticmethod
    def one() -> "WeightPolynomial":
        return WeightPolynomial((1,))

    @staticmethod
    def monomial(c: int, k: int) -> "WeightPolynomial":
        return WeightPolynomial((0,) * k + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return WeightPolynomial(
            tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return WeightPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return WeightPolynomial(out)

    def scale(self, c: int) -> "WeightPolynomial":
        return WeightPolynomial(tuple(c * x for x in self.coeffs))

    def shift(self, k: int) -> "WeightPolynomial":
        """Multiply by T^k."""
        return WeightPolynomial((0,) * k + self.coeffs)

    def truncate(self, d: int) -> "WeightPolynomial":
        """Degree <= d part."""
        return WeightPolynomial(self.coeffs[: d + 1])

    def eval(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def even_powers_only(self) -> bool:
        return all(c == 0 for i, c in enumerate(self.coeffs) if i % 2 == 1)

    def __eq__(self, other):
        return isinstance(other, WeightPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "WeightPolynomial(0)"
        terms = [f"{c}*T^{i}" for i, c in enumerate(self.coeffs) if c]
        return "WeightPolynomial(" + " + ".join(terms) + ")"

    def to_json(self) -> dict:
        return {"coeffs": {str(i): c for i, c in enumerate(self.coeffs) if c}}


_ONE_MINUS_T2 = WeightPolynomial((1, 0, -1))
_T2_MINUS_1 = WeightPolynomial((-1, 0, 1))


# ---------------------------------------------------------------------------
# alpha / beta on graded posets, memoized per isomorphism class

_alpha_memo: dict[tuple, list[tuple[GradedPoset, WeightPolynomial]]] = {}
_beta_memo: dict[tuple, list[tuple[GradedPoset, WeightPolynomial]]] = {}


def _memo_lookup(memo, poset):
    for cand, value in memo.get(poset.refinement_key(), ()):
        if cand.isomorphic(poset):
            return value
    return None


def _memo_store(memo, poset, value):
    memo.setdefault(poset.refinement_key(), []).append((poset, value))


def _cone_poset(obj) -> GradedPoset:
    if isinstance(obj, RationalCone):
        if not obj.is_pointed():
            raise ValueError("alpha is defined for pointed cones only")
        return obj.poset()
    if isinstance(obj, GradedPoset):
        if not obj.has_zero_bottom():
            raise ValueError("cone poset is not pointed")
        return obj
    raise TypeError(f"unsupported argument {type(obj).__name__}")


def alpha(cone) -> WeightPolynomial:
    """alpha({0}) = 1; alpha(C) = trunc_{<= dim C - 1}((1 - T^2) beta(poly(C)))."""
    poset = _cone_poset(cone)
    if poset.dim == 0:
        return WeightPolynomial.one()
    cached = _memo_lookup(_alpha_memo, poset)
    if cached is not None:
        return cached
    b = beta(poly_of_cone(poset))
    value = (_ONE_MINUS_T2 * b).truncate(poset.dim - 1)
    if not value.even_powers_only():
        raise AssertionError(f"alpha produced odd powers: {value}")
    _memo_store(_alpha_memo, poset, value)
    return value


def beta(polytope) -> WeightPolynomial:
    """beta(P) = (T^2-1)^dim P + sum over proper nonempty faces G of
    (T^2-1)^dim G * alpha(cone_P^o(G)); the quotient cone at G is the
    regraded interval [G, P] of the face lattice."""
    if isinstance(polytope, GradedPoset):
        poset = polytope
    elif hasattr(polytope, "poset"):
        poset = polytope.poset()
    else:
        raise TypeError(f"unsupported argument {type(polytope).__name__}")
    cached = _memo_lookup(_beta_memo, poset)
    if cached is not None:
        return cached
    value = _pow(_T2_MINUS_1, poset.dim)
    for g in poset.proper():
        value = value + _pow(_T2_MINUS_1, poset.dims[g]) * alpha(poset.interval_above(g))
    if not value.even_powers_only():
        raise AssertionError(f"beta produced odd powers: {value}")
    _memo_store(_beta_memo, poset, value)
    return value


def _pow(p: WeightPolynomial, k: int) -> WeightPolynomial:
    out = WeightPolynomial.one()
    for _ in range(k):
        out = out * p
    return out


# ---------------------------------------------------------------------------
# GKZ instances and the set T of character-factoring faces


class GkzInstance:
    """Exponent matrix together with its polytope Delta = hull{0, w_j} and
    cone delta = cone{w_j}; polytope point j+1 and cone generator j both
    name the column w_j."""

    def __init__(self, A: ExponentMatrix):
        self.A = A
        self.polytope = A.polytope()
        self.cone = A.cone()

    @property
    def n(self) -> int:
        return self.A.n

    @property
    def N(self) -> int:
        return self.A.N

    def rank_prediction(self) -> int:
        """n! vol(Delta), the predicted generic rank (up to the (-1)^N sign)."""
        return self.polytope.normalized_volume()

    def __repr__(self):
        return f"GkzInstance(n={self.n}, N={self.N}, rows={self.A.rows})"


@dataclass(frozen=True)
class TSetEntry:
    face: Face
    sublattice: Sublattice
    chi_tau: CharacterSpec
    n_tau: int  # number of columns w_j lying in the face


def t_set(instance: GkzInstance, chi: CharacterSpec) -> list[TSetEntry]:
    """All proper faces tau of delta through which chi factors, with the
    descended character (in the recorded basis of M_tau) and the count of
    columns lying in tau."""
    if chi.n != instance.n:
        raise ValueError("character rank does not match the instance")
    out = []
    for face in instance.cone.proper_faces():
        sub = span_lattice(instance.cone, face)
        res = factor_through_face(chi, sub)
        if res.factors:
            out.append(TSetEntry(face, sub, res.chi_tau, len(face.members)))
    return out


def _face_volume(instance: GkzInstance, face: Face) -> int:
    """(dim tau)! vol(Delta ∩ tau) in the lattice M_tau; Delta ∩ tau is the
    hull of the origin and the columns lying in tau, and the 0-dimensional
    convention vol = 1 falls out of normalized_volume."""
    origin = (0,) * instance.n
    pts = [origin] + [instance.A.columns[j] for j in sorted(face.members)]
    return hull(pts).normalized_volume()


def e_value(instance: GkzInstance, chi: CharacterSpec) -> int:
    """e(Delta, chi): the signed predicted rank of the top-weight piece."""
    n, N = instance.n, instance.N
    sign = -1 if N % 2 else 1
    total = sign * instance.polytope.normalized_volume()
    for entry in t_set(instance, chi):
        tau = entry.face
        a1 = alpha(quotient_cone(instance.cone, tau)).eval(1)
        s = -1 if (n - tau.dim + N) % 2 else 1
        total += s * _face_volume(instance, tau) * a1
    return total


def _sub_instance(instance: GkzInstance, entry: TSetEntry) -> "GkzInstance | None":
    """The descended instance (Delta ∩ tau, columns in tau, chi_tau) in the
    coordinates of the recorded basis of M_tau; None when dim tau = 0."""
    sub = entry.sublattice
    if sub.rank == 0:
        return None
    cols = []
    for j in sorted(entry.face.members):
        coords, rest = sub.coords(instance.A.columns[j])
        if any(rest):
            raise AssertionError("column of a face left its span lattice")
        cols.append(coords)
    rows = tuple(
        tuple(col[i] for col in cols) for i in range(sub.rank)
    )
    return GkzInstance(ExponentMatrix(rows))


def E_polynomial(instance: GkzInstance, chi: CharacterSpec) -> WeightPolynomial:
    """E(Delta, chi) = e * T^(n+N)
    - sum_{tau in T} (-1)^(n - dim tau + N - N_tau) T^(N - N_tau)
      E(Delta ∩ tau, chi_tau) alpha(cone_delta^o(tau)).

    The base instance with n = 0 has E = (-1)^N' T^N' (E = 1 for N' = 0)."""
    n, N = instance.n, instance.N
    value = WeightPolynomial.monomial(e_value(instance, chi), n + N)
    for entry in t_set(instance, chi):
        tau = entry.face
        sign = -1 if (n - tau.dim + N - entry.n_tau) % 2 else 1
        a = alpha(quotient_cone(instance.cone, tau))
        sub_inst = _sub_instance(instance, entry)
        if sub_inst is None:
            e_sub = WeightPolynomial.monomial(-1 if entry.n_tau % 2 else 1, entry.n_tau)
        else:
            e_sub = E_polynomial(sub_inst, entry.chi_tau)
        value = value - (e_sub * a).shift(N - entry.n_tau).scale(sign)
    return value


# ---------------------------------------------------------------------------
# expected Frobenius spectra


@dataclass(frozen=True)
class SpectrumPrediction:
    """Predicted stalk spectrum on the nondegenerate locus: an eigenvalue of
    weight-w origin contributes magnitude q^((w-N)/2), so the multiset maps
    v = w - N to |e_w|."""

    degree: int
    weights: tuple[tuple[int, int], ...]  # sorted (v, multiplicity) pairs
    sign: int
    sign_consistent: bool

    def as_dict(self) -> dict[int, int]:
        return dict(self.weights)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "weights": {str(v): m for v, m in self.weights},
            "sign": self.sign,
            "sign_consistent": self.sign_consistent,
        }


def expected_spectrum(E: WeightPolynomial, n: int, N: int, nvol: int) -> SpectrumPrediction:
    """Convert E(Delta, chi) into the predicted multiset of eigenvalue
    weights {v = w - N : |e_w|}; the coefficient total must equal n! vol."""
    total = sum(abs(c) for c in E.coeffs)
    if total != nvol:
        raise ValueError(
            f"coefficient sum {total} does not match n!vol = {nvol}; "
            "a hypothesis is violated or the instance is inconsistent"
        )
    sign = -1 if N % 2 else 1
    consistent = all(c == 0 or (c > 0) == (sign > 0) for c in E.coeffs)
    weights = tuple(
        sorted((w - N, abs(c)) for w, c in enumerate(E.coeffs) if c)
    )
    return SpectrumPrediction(nvol, weights, sign, consistent)
