"""Exact finite-field arithmetic with character tables, and exact cyclotomic
numbers with high-precision complex embeddings.

Fields F_{p^e} are represented as F_p[X]/(modulus); elements are encoded as
integers in [0, p^e) whose base-p digits are the polynomial coefficients
(little-endian).  Multiplication goes through full exp/dlog tables, which is
the right trade-off at desk scale (q <= ~2^16).

Values of additive and multiplicative characters live in Q(zeta_m) for
m = p*(q-1); they are represented exactly as coefficient vectors over the
power basis of Q(zeta_m), reduced modulo the m-th cyclotomic polynomial.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import mpmath
import numpy as np

__all__ = [
    "FiniteField",
    "FieldTower",
    "CycloNumber",
    "make_field",
    "discrete_log",
    "trace_and_norm",
    "cyclo",
    "cyclo_zero",
    "cyclo_one",
    "cyclo_rational",
    "embed_complex",
    "additive_char",
    "mult_char",
    "cyclotomic_polynomial",
]


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (little-endian int tuples)


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    """Product of a and b reduced modulo `mod` (monic), coefficients mod p."""
    prod = [0] * (len(a) + len(b) - 1) if a and b else [0]
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce by monic mod
    d = len(mod) - 1
    for i in range(len(prod) - 1, d - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(d):
                prod[i - d + j] = (prod[i - d + j] - c * mod[j]) % p
    return prod[:d] + [0] * max(0, d - len(prod))


def _poly_powmod(a: Sequence[int], k: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = list(a)
    while k:
        if k & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        k >>= 1
    d = len(mod) - 1
    result = result[:d] + [0] * max(0, d - len(result))
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        r = list(a)
        while r and len(r) >= len(b):
            c = (r[-1] * inv) % p
            shift = len(r) - len(b)
            for j, bj in enumerate(b):
                r[shift + j] = (r[shift + j] - c * bj) % p
            r = _poly_trim(r)
        a, b = b, r
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def poly_is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Rabin irreducibility test for a monic polynomial over F_p.

    f of degree d is irreducible iff X^(p^d) == X mod f and, for every prime
    r | d, gcd(X^(p^(d/r)) - X mod f, f) is constant.
    """
    f = _poly_trim(list(c % p for c in coeffs))
    d = len(f) - 1
    if d < 1 or f[-1] != 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    for r in _prime_factors(d):
        h = _poly_powmod(x, p ** (d // r), f, p)
        h = list(h)
        h[1] = (h[1] - 1) % p
        g = _poly_gcd(list(f), h, p)
        if len(_poly_trim(list(g))) != 1:
            return False
    h = _poly_powmod(x, p ** d, f, p)
    h = list(h)
    h[1] = (h[1] - 1) % p
    return not _poly_trim(h)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# finite fields


class FiniteField:
    """F_{p^e} with exp/dlog tables and an absolute-trace table.

    Elements are integers in [0, q); the base-p digits of the encoding are
    the coefficients of the residue polynomial.
    """

    def __init__(self, p: int, e: int, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise ValueError(f"p not prime: {p}")
        if e < 1:
            raise ValueError(f"extension degree must be >= 1, got {e}")
        self.p = p
        self.e = e
        self.q = p**e
        if modulus is None:
            modulus = self._least_irreducible(p, e)
        else:
            modulus = [c % p for c in modulus]
            if len(_poly_trim(list(modulus))) != e + 1 or modulus[e] != 1:
                raise ValueError("modulus must be monic of degree e")
            if not poly_is_irreducible(modulus, p):
                raise ValueError(f"supplied modulus is reducible over F_{p}")
        self.modulus: tuple[int, ...] = tuple(modulus)

        self._p_pows = [p**i for i in range(e)]
        # digit table: digits[x] = base-p digits of the encoding x
        dig = np.zeros((self.q, e), dtype=np.int64)
        r = np.arange(self.q, dtype=np.int64)
        for i in range(e):
            dig[:, i] = (r // self._p_pows[i]) % p
        self.digits = dig
        self._np_p_pows = np.array(self._p_pows, dtype=np.int64)

        self.generator = self._find_generator()
        self._build_log_tables()
        self._build_trace_table()

    # -- construction helpers

    @staticmethod
    def _least_irreducible(p: int, e: int) -> list[int]:
        # monic X^e + lower part, lower parts enumerated by their integer encoding
        for low in range(p**e):
            coeffs = [(low // p**i) % p for i in range(e)] + [1]
            if poly_is_irreducible(coeffs, p):
                return coeffs
        raise AssertionError("no irreducible polynomial found")  # unreachable

    def _enc(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self._p_pows[i] for i, c in enumerate(coeffs[: self.e]))

    def _dec(self, x: int) -> list[int]:
        return [(x // self._p_pows[i]) % self.p for i in range(self.e)]

    def _raw_mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        prod = _poly_mulmod(self._dec(a), self._dec(b), self.modulus, self.p)
        return self._enc(prod)

    def _raw_pow(self, a: int, k: int) -> int:
        result = 1
        while k:
            if k & 1:
                result = self._raw_mul(result, a)
            a = self._raw_mul(a, a)
            k >>= 1
        return result

    def _find_generator(self) -> int:
        n = self.q - 1
        if n == 1:
            return 1
        primes = _prime_factors(n)
        for cand in range(2, self.q):
            if all(self._raw_pow(cand, n // r) != 1 for r in primes):
                return cand
        raise AssertionError("no generator found")  # unreachable

    def _build_log_tables(self):
        n = self.q - 1
        exp = [0] * n
        dlog = [-1] * self.q
        acc = 1
        for i in range(n):
            exp[i] = acc
            dlog[acc] = i
            acc = self._raw_mul(acc, self.generator)
        if acc != 1:
            raise AssertionError("generator order check failed")
        self.exp_table = exp
        self.dlog_table = dlog
        self.exp_np = np.array(exp, dtype=np.int64)

    def _build_trace_table(self):
        # absolute trace to F_p, computed as sum of Frobenius orbits
        d = self.e
        acc = np.arange(self.q, dtype=np.int64)
        frob = np.zeros(self.q, dtype=np.int64)
        for x in range(1, self.q):
            frob[x] = self.exp_table[(self.dlog_table[x] * self.p) % (self.q - 1)]
        tot = self.digits.copy()
        cur = acc
        for _ in range(d - 1):
            cur = frob[cur]
            tot = tot + self.digits[cur]
        tr = (tot % self.p) @ self._np_p_pows
        if np.any(tr >= self.p):
            raise AssertionError("trace does not land in the prime field")
        self.trace_to_prime = tr

    # -- element arithmetic

    def add(self, a: int, b: int) -> int:
        da, db = self._dec(a), self._dec(b)
        return self._enc([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        return self._enc([(-c) % self.p for c in self._dec(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp_table[(self.dlog_table[a] + self.dlog_table[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self.exp_table[(-self.dlog_table[a]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of 0")
            return 0 if k else 1
        return self.exp_table[(self.dlog_table[a] * k) % (self.q - 1)]

    def scalar(self, c: int) -> int:
        """Image of the integer c under Z -> F_p -> F_q."""
        return c % self.p

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> Iterable[int]:
        return self.exp_table

    def dlog(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("discrete log of 0")
        return self.dlog_table[x]

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"FiniteField(p={self.p}, e={self.e}, q={self.q}, g={self.generator})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "modulus": list(self.modulus),
            "generator": self.generator,
        }

    @classmethod
    def from_json(cls, d: dict) -> "FiniteField":
        F = cls(d["p"], d["e"], d.get("modulus"))
        if "generator" in d and d["generator"] != F.generator:
            raise ValueError("serialized generator does not match the canonical one")
        return F


@functools.lru_cache(maxsize=None)
def make_field(p: int, e: int, modulus: tuple[int, ...] | None = None) -> FiniteField:
    """Construct F_{p^e}; deterministic for fixed inputs.

    When `modulus` is omitted the lexicographically least monic irreducible
    polynomial of degree e is used, and the generator is the least primitive
    element.
    """
    return FiniteField(p, e, modulus)


def discrete_log(F: FiniteField, x: int) -> int:
    """Exponent i in [0, q-2] with g^i = x; error on x = 0."""
    return F.dlog(x)


# ---------------------------------------------------------------------------
# field towers k_m / k


class FieldTower:
    """Degree-m extension k_m = F_{q^m} over k = F_q, with the ring embedding
    k -> k_m, trace/norm down to k, and norm/trace-lifted characters.

    The additive character of k_m is psi_m(x) = zeta_p^Tr_{k_m/F_p}(x); the
    multiplicative character named by exponents c against the base generator
    lifts through the norm, chi^(m) = chi o N_{k_m/k}, so that the sums over
    k_m are power sums of fixed Frobenius eigenvalues.
    """

    def __init__(self, base: FiniteField, m: int):
        if m < 1:
            raise ValueError("tower degree must be >= 1")
        self.base = base
        self.m = m
        if m == 1:
            self.ext = base
            self._embed_table = list(range(base.q))
        else:
            self.ext = make_field(base.p, base.e * m)
            self._embed_table = self._build_embedding()
        self._embed_inv = {y: x for x, y in enumerate(self._embed_table)}
        Q, q = self.ext.q, base.q
        self._norm_exp = (Q - 1) // (q - 1)
        if q > 2:
            ng = self.ext.exp_table[self._norm_exp % (Q - 1)]
            self.norm_scale = base.dlog(self._embed_inv[ng])
        else:
            self.norm_scale = 0

    def _build_embedding(self) -> list[int]:
        base, ext = self.base, self.ext
        if base.e == 1:
            return [c % base.p for c in range(base.q)]
        # embed is determined by sending the residue class of X to a root of
        # the base modulus in ext; pick the least root for determinism
        root = None
        for y in range(ext.q):
            acc = 0
            for c in reversed(base.modulus):
                acc = ext.add(ext.mul(acc, y), c % base.p)
            if acc == 0:
                root = y
                break
        if root is None:
            raise AssertionError("base modulus has no root in the extension")
        table = []
        for x in range(base.q):
            acc = 0
            for c in reversed(base._dec(x)):
                acc = ext.add(ext.mul(acc, root), c)
            table.append(acc)
        return table

    def embed(self, x: int) -> int:
        return self._embed_table[x]

    def in_base(self, y: int) -> int:
        """Preimage under embed; error if y is not in the base subfield."""
        try:
            return self._embed_inv[y]
        except KeyError:
            raise ValueError(f"{y} is not in the embedded base field") from None

    def trace(self, x: int) -> int:
        """Tr_{k_m/k}(x) as an element of the base field."""
        ext, q = self.ext, self.base.q
        acc, cur = x, x
        for _ in range(self.m - 1):
            cur = ext.pow(cur, q)
            acc = ext.add(acc, cur)
        return self.in_base(acc)

    def norm(self, x: int) -> int:
        """N_{k_m/k}(x) as an element of the base field."""
        if x == 0:
            return 0
        y = self.ext.exp_table[(self.ext.dlog(x) * self._norm_exp) % (self.ext.q - 1)]
        return self.in_base(y)

    # -- character exponents (integer avatars of psi and chi values)

    def psi_exponent(self, x: int) -> int:
        """t with psi_m(x) = zeta_p^t, i.e. the absolute trace of x."""
        return int(self.ext.trace_to_prime[x])

    def chi_exponent(self, c: Sequence[int], t: Sequence[int]) -> int:
        """a with chi^(m)(t) = zeta_{q-1}^a for the character with exponents c."""
        for ti in t:
            if ti == 0:
                raise ZeroDivisionError("multiplicative character at 0")
        q = self.base.q
        if q == 2:
            return 0
        s = self.norm_scale
        total = 0
        for ci, ti in zip(c, t):
            total += ci * s * self.ext.dlog(ti)
        return total % (q - 1)


def trace_and_norm(T: FieldTower, x: int) -> tuple[int, int]:
    """(Tr_{k_m/k}(x), N_{k_m/k}(x)), both as base-field elements."""
    return T.trace(x), T.norm(x)


# ---------------------------------------------------------------------------
# cyclotomic polynomials and exact cyclotomic numbers


def _int_poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials with monic divisor."""
    num = list(num)
    d = len(den) - 1
    out = [0] * (len(num) - d)
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i]
        out[i - d] = c
        if c:
            for j in range(d + 1):
                num[i - d + j] -= c * den[j]
    if any(num):
        raise AssertionError("division was not exact")
    return out


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients (little-endian) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("conductor must be >= 1")
    f = [0] * (m + 1)
    f[0], f[m] = -1, 1
    for d in range(1, m):
        if m % d == 0:
            f = _int_poly_divexact(f, list(cyclotomic_polynomial(d)))
    return tuple(f)


def _euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


class CycloNumber:
    """Exact element of Q(zeta_m), stored as the reduced coefficient vector
    over the basis {zeta_m^i : 0 <= i < phi(m)}.

    The representation is canonical for a fixed conductor, so structural
    equality is ring equality; binary operations first push both operands
    into the compositum Q(zeta_lcm).  Rational values normalize to
    conductor 1.
    """

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Sequence[Fraction | int]):
        phi = _euler_phi(conductor)
        cc = [Fraction(c) for c in coeffs]
        if len(cc) > phi:
            cc = _reduce_mod_cyclotomic(cc, conductor)
        cc += [Fraction(0)] * (phi - len(cc))
        if conductor > 1 and not any(cc[1:]):
            conductor, cc = 1, [cc[0]]
        self.conductor = conductor
        self.coeffs = tuple(cc)

    # -- constructors

    @staticmethod
    def zero() -> "CycloNumber":
        return CycloNumber(1, [0])

    @staticmethod
    def one() -> "CycloNumber":
        return CycloNumber(1, [1])

    @staticmethod
    def rational(x) -> "CycloNumber":
        return CycloNumber(1, [Fraction(x)])

    @staticmethod
    def root_of_unity(m: int, k: int) -> "CycloNumber":
        coeffs = [Fraction(0)] * (k % m) + [Fraction(1)]
        return CycloNumber(m, coeffs)

    @staticmethod
    def from_root_counts(m: int, counts: Sequence[int]) -> "CycloNumber":
        """Sum_k counts[k] * zeta_m^k for a length-m vector of counts."""
        if len(counts) != m:
            raise ValueError("counts must have length m")
        return CycloNumber(m, [Fraction(int(c)) for c in counts])

    # -- conductor handling

    def _lifted_coeffs(self, M: int) -> list[Fraction]:
        """Raw (unreduced) coefficient vector of this value over powers of
        zeta_M, for conductor | M."""
        if M % self.conductor != 0:
            raise ValueError("can only lift to a multiple of the conductor")
        step = M // self.conductor
        out = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return out

    def lift(self, M: int) -> "CycloNumber":
        return CycloNumber(M, self._lifted_coeffs(M))

    def _common(self, other: "CycloNumber") -> tuple[int, list[Fraction], list[Fraction]]:
        M = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
        return M, self._lifted_coeffs(M), other._lifted_coeffs(M)

    # -- ring operations

    def __add__(self, other):
        M, a, b = self._common(_coerce(other))
        if len(a) < len(b):
            a, b = b, a
        return CycloNumber(M, [x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.conductor, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.conductor, [c * other for c in self.coeffs])
        M, a, b = self._common(_coerce(other))
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return CycloNumber(M, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        raise TypeError("only division by rational scalars is supported")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.rational(other)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        if self.conductor == other.conductor:
            return self.coeffs == other.coeffs
        M = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
        return self.lift(M).coeffs == other.lift(M).coeffs

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return self.conductor == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coeffs[0]

    def __repr__(self):
        if self.conductor == 1:
            return f"CycloNumber({self.coeffs[0]})"
        terms = [f"{c}*z{self.conductor}^{i}" for i, c in enumerate(self.coeffs) if c]
        return "CycloNumber(" + (" + ".join(terms) or "0") + ")"

    def to_json(self) -> dict:
        return {
            "conductor": self.conductor,
            "coeffs": [[c.numerator, c.denominator] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, d: dict) -> "CycloNumber":
        return cls(d["conductor"], [Fraction(n, den) for n, den in d["coeffs"]])

    # -- complex embedding

    def embed(self, digits: int = 30) -> mpmath.mpc:
        return embed_complex(self, digits)


def _coerce(x) -> CycloNumber:
    if isinstance(x, CycloNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return CycloNumber.rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to CycloNumber")


def _reduce_mod_cyclotomic(coeffs: list[Fraction], m: int) -> list[Fraction]:
    phi_m = cyclotomic_polynomial(m)
    d = len(phi_m) - 1
    cc = list(coeffs)
    for i in range(len(cc) - 1, d - 1, -1):
        c = cc[i]
        if c:
            cc[i] = Fraction(0)
            for j in range(d):
                cc[i - d + j] -= c * phi_m[j]
    return cc[:d]


def cyclo(m: int, k: int) -> CycloNumber:
    """zeta_m^k in canonical reduced form."""
    return CycloNumber.root_of_unity(m, k)


def cyclo_zero() -> CycloNumber:
    return CycloNumber.zero()


def cyclo_one() -> CycloNumber:
    return CycloNumber.one()


def cyclo_rational(x) -> CycloNumber:
    return CycloNumber.rational(x)


def embed_complex(x: CycloNumber, digits: int = 30) -> mpmath.mpc:
    """Complex value of x at zeta_m = exp(2*pi*i/m), correct to >= `digits`
    decimal digits (evaluation runs with 15 guard digits)."""
    if digits < 15:
        raise ValueError("digits must be >= 15")
    with mpmath.workdps(digits + 15):
        z = mpmath.exp(2j * mpmath.pi / x.conductor)
        acc = mpmath.mpc(0)
        for c in reversed(x.coeffs):
            acc = acc * z + mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
        return +acc


# ---------------------------------------------------------------------------
# characters


def additive_char(T: FieldTower, x: int) -> CycloNumber:
    """psi_m(x) = zeta_p^Tr_{k_m/F_p}(x), a p-th root of unity."""
    return cyclo(T.base.p, T.psi_exponent(x))


def mult_char(T: FieldTower, c, t: Sequence[int]) -> CycloNumber:
    """chi^(m)(t) = zeta_{q-1}^(sum_i c_i * dlog_g N(t_i)) for the character
    named by the exponent vector c against the base generator.

    `c` may be a plain exponent sequence or any object with an `exponents`
    attribute (e.g. a CharacterSpec).
    """
    exps = getattr(c, "exponents", c)
    q = T.base.q
    if q == 2:
        for ti in t:
            if ti == 0:
                raise ZeroDivisionError("multiplicative character at 0")
        return cyclo_one()
    return cyclo(q - 1, T.chi_exponent(exps, t))
