"""Exact scalar fields: the rationals, prime fields, and finite simple
extensions ``K[x]/(m)`` with their automorphism groups.

Elements of an extension are coordinate vectors in the power basis
``1, a, ..., a^(d-1)`` of the generator ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .linalg import Matrix


class FieldError(ValueError):
    pass


class ReduciblePolynomial(FieldError):
    def __init__(self, factor):
        super().__init__(f"polynomial has the monic factor {factor}")
        self.factor = factor


class CannotCertify(FieldError):
    pass


class UnsupportedTower(FieldError):
    pass


class InvalidAutomorphism(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _exact(x):
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact or boolean scalar {x!r}")
    return x


class GFElement:
    """Residue class modulo a prime."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, GFElement):
            if other.p != self.p:
                raise FieldError(f"mixing GF({self.p}) and GF({other.p})")
            return other.v
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GFElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GFElement(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GFElement(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GFElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GFElement(-self.v, self.p)

    def inverse(self) -> "GFElement":
        if self.v == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return GFElement(pow(self.v, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * GFElement(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GFElement(o, self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return GFElement(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return str(self.v)


class BaseField:
    """Common surface of every scalar field used by the package."""

    kind: str
    characteristic: int
    degree = 1

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    def elements(self) -> Iterator:
        raise FieldError(f"{self} is infinite")

    def small_scalars(self, radius: int) -> list:
        """Deterministic list of nonzero scalars used by bounded searches."""
        if self.is_finite:
            return [x for x in self.elements() if x][: max(1, 2 * radius)]
        out = []
        for k in range(1, radius + 1):
            out.extend([self(k), self(-k)])
        return out


@dataclass(frozen=True)
class RationalField(BaseField):
    kind = "rationals"
    characteristic = 0

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(_exact(x))

    def format(self, x) -> str:
        return str(Fraction(x))

    def to_json(self):
        return "Q"

    def __repr__(self):
        return "QQ"


@dataclass(frozen=True)
class PrimeField(BaseField):
    p: int
    kind = "prime_field"

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")

    @property
    def characteristic(self):
        return self.p

    @property
    def zero(self):
        return GFElement(0, self.p)

    @property
    def one(self):
        return GFElement(1, self.p)

    def __call__(self, x) -> GFElement:
        if isinstance(x, GFElement):
            if x.p != self.p:
                raise FieldError(f"element of GF({x.p}) given to GF({self.p})")
            return x
        if isinstance(x, str):
            x = Fraction(x.strip())
        x = _exact(x)
        if isinstance(x, Fraction):
            return GFElement(x.numerator, self.p) / GFElement(x.denominator, self.p)
        return GFElement(int(x), self.p)

    def elements(self) -> Iterator[GFElement]:
        return (GFElement(v, self.p) for v in range(self.p))

    def format(self, x) -> str:
        return str(self(x).v)

    def to_json(self):
        return {"Fp": self.p}

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


# polynomials over a base field, coefficient lists low -> high


def _trim(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def poly_divmod(a: Sequence, b: Sequence, field) -> tuple[list, list]:
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [field.zero] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = a[shift + i] - c * bi
        a = _trim(a)
    return q, a


def poly_mul(a: Sequence, b: Sequence, field) -> list:
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return _trim(out)


def poly_sub(a: Sequence, b: Sequence, field) -> list:
    n = max(len(a), len(b))
    z = field.zero
    return _trim([(a[i] if i < len(a) else z) - (b[i] if i < len(b) else z) for i in range(n)])


def poly_eval(coeffs: Sequence, x, one, mul=None, add=None, scale=None):
    """Horner evaluation; ``mul``/``add``/``scale`` let callers evaluate at
    matrices or category endomorphisms."""
    mul = mul or (lambda u, v: u * v)
    add = add or (lambda u, v: u + v)
    scale = scale or (lambda c, u: c * u)
    acc = scale(coeffs[-1], one) if coeffs else scale(0, one)
    for c in reversed(coeffs[:-1]):
        acc = add(mul(acc, x), scale(c, one))
    return acc


def _format_poly(coeffs, field) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c:
            s = field.format(c)
            terms.append(s if k == 0 else f"{s}*x^{k}")
    return " + ".join(reversed(terms)) or "0"


def _monic_polys(field, deg: int):
    for low in product(list(field.elements()), repeat=deg):
        yield list(low) + [field.one]


def _irreducible_mod_p(coeffs: Sequence, field: PrimeField) -> tuple[bool, list | None]:
    d = len(coeffs) - 1
    for k in range(1, d // 2 + 1):
        for g in _monic_polys(field, k):
            _, r = poly_divmod(coeffs, g, field)
            if not r:
                return False, g
    return True, None


def _rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    from math import gcd

    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    while ints and ints[0] == 0:
        return [Fraction(0)]
    lead, const = abs(ints[-1]), abs(ints[0])

    def divisors(n):
        return [k for k in range(1, n + 1) if n % k == 0]

    roots = []
    for pn in divisors(const):
        for qd in divisors(lead):
            for cand in (Fraction(pn, qd), Fraction(-pn, qd)):
                if cand not in roots and poly_eval(list(coeffs), cand, Fraction(1)) == 0:
                    roots.append(cand)
    return roots


MODP_SEARCH_LIMIT = 101
_EXHAUSTIVE_WORK_LIMIT = 200_000


class ExtensionField(BaseField):
    """``L = K[x]/(m)`` with ``m`` monic irreducible over ``K``."""

    kind = "extension"

    def __init__(self, base: BaseField, minpoly: Sequence, certificate: str):
        self.base = base
        self.minpoly = tuple(base(c) for c in minpoly)
        self.degree = len(self.minpoly) - 1
        self.irreducibility_certificate = certificate
        d = self.degree
        # reductions of a^k for k = d .. 2d-2
        self._reduce = []
        cur = [-c for c in self.minpoly[:-1]]
        for _ in range(max(d - 1, 0)):
            self._reduce.append(tuple(cur))
            carry = cur[-1]
            cur = [base.zero] + cur[:-1]
            cur = [x - carry * c for x, c in zip(cur, self.minpoly[:-1])]
        if d >= 1:
            self._reduce.append(tuple(cur))

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and (self.base, self.minpoly) == (other.base, other.minpoly)

    def __hash__(self):
        return hash((self.base, self.minpoly))

    def __repr__(self):
        return f"{self.base!r}[x]/({_format_poly(self.minpoly, self.base)})"

    @property
    def characteristic(self):
        return self.base.characteristic

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (self.base.zero,) * self.degree)

    @property
    def one(self) -> "FieldElement":
        return self.embed(self.base.one)

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return FieldElement(self, (-self.minpoly[0],))
        return FieldElement(self, tuple(self.base.one if k == 1 else self.base.zero for k in range(self.degree)))

    def embed(self, c) -> "FieldElement":
        c = self.base(c)
        return FieldElement(self, (c,) + (self.base.zero,) * (self.degree - 1))

    def element(self, coeffs: Sequence) -> "FieldElement":
        if len(coeffs) != self.degree:
            raise FieldError(f"expected {self.degree} coordinates, got {len(coeffs)}")
        return FieldElement(self, tuple(self.base(c) for c in coeffs))

    def __call__(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.parent != self:
                raise FieldError("element of a different extension")
            return x
        if isinstance(x, (list, tuple)):
            return self.element(x)
        return self.embed(x)

    def elements(self):
        for coeffs in product(list(self.base.elements()), repeat=self.degree):
            yield FieldElement(self, tuple(coeffs))

    def format(self, x) -> str:
        return ",".join(self.base.format(c) for c in self(x).coeffs)

    def parse(self, s: str) -> "FieldElement":
        return self.element(s.split(","))

    def to_json(self):
        return {
            "base": self.base.to_json(),
            "minpoly": [self.base.format(c) for c in self.minpoly],
            "trusted": self.irreducibility_certificate == "trusted",
        }

    def _mul_coeffs(self, a: tuple, b: tuple) -> tuple:
        d = self.degree
        z = self.base.zero
        prod_ = [z] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod_[i + j] = prod_[i + j] + x * y
        out = prod_[:d]
        for k in range(d, 2 * d - 1):
            c = prod_[k]
            if c:
                red = self._reduce[k - d]
                out = [o + c * r for o, r in zip(out, red)]
        return tuple(out)

    def regular_representation(self, a) -> Matrix:
        return regular_representation(self(a))


class FieldElement:
    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: ExtensionField, coeffs: tuple):
        self.parent = parent
        self.coeffs = coeffs

    def _lift(self, other):
        if isinstance(other, FieldElement):
            if other.parent != self.parent:
                raise FieldError("mixing elements of different extensions")
            return other
        if isinstance(other, (int, Fraction, GFElement)) and not isinstance(other, bool):
            return self.parent.embed(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.parent, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.parent, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return FieldElement(self.parent, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            if other.parent != self.parent:
                raise FieldError("mixing elements of different extensions")
            return FieldElement(self.parent, self.parent._mul_coeffs(self.coeffs, other.coeffs))
        if isinstance(other, (int, Fraction, GFElement)) and not isinstance(other, bool):
            c = self.parent.base(other)
            return FieldElement(self.parent, tuple(c * a for a in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return field_invert(self)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * field_invert(o)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * field_invert(self)

    def __pow__(self, k: int):
        if k < 0:
            return field_invert(self) ** (-k)
        out = self.parent.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.parent == other.parent and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, GFElement)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                s = self.parent.base.format(c)
                terms.append(s if k == 0 else (f"{s}*a" if k == 1 else f"{s}*a^{k}"))
        return " + ".join(terms) or "0"


def make_extension(base: BaseField, minpoly: Sequence, trusted: bool = False) -> ExtensionField:
    """Build ``base[x]/(minpoly)`` after certifying irreducibility.

    ``minpoly`` lists coefficients from the constant term up; it must be monic.
    Over a prime field every factor of degree up to ``d/2`` is tried. Over the
    rationals a rational root is fatal; irreducibility is then certified by a
    prime ``p <= 101`` modulo which ``minpoly`` stays irreducible, or, for
    ``d <= 3``, by the absence of roots.
    """
    coeffs = [base(c) for c in minpoly]
    if len(coeffs) < 2:
        raise FieldError("minimal polynomial must have degree >= 1")
    if coeffs[-1] != base.one:
        raise FieldError("minimal polynomial must be monic")
    d = len(coeffs) - 1
    if d == 1:
        return ExtensionField(base, coeffs, "exhaustive")
    if isinstance(base, PrimeField):
        ok, factor = _irreducible_mod_p(coeffs, base)
        if not ok:
            raise ReduciblePolynomial(_format_poly(factor, base))
        return ExtensionField(base, coeffs, "exhaustive")
    roots = _rational_roots(coeffs)
    if roots:
        r = roots[0]
        raise ReduciblePolynomial(_format_poly([-r, Fraction(1)], base))
    for p in range(2, MODP_SEARCH_LIMIT + 1):
        if not is_prime(p) or any(c.denominator % p == 0 for c in coeffs):
            continue
        if sum(p**k for k in range(1, d // 2 + 1)) > _EXHAUSTIVE_WORK_LIMIT:
            break
        fp = GF(p)
        ok, _ = _irreducible_mod_p([fp(c) for c in coeffs], fp)
        if ok:
            return ExtensionField(base, coeffs, f"modp_witness({p})")
    if d <= 3:
        return ExtensionField(base, coeffs, "exhaustive")
    if trusted:
        return ExtensionField(base, coeffs, "trusted")
    raise CannotCertify(f"no prime <= {MODP_SEARCH_LIMIT} certifies {_format_poly(coeffs, base)}")


def trivial_extension(base: BaseField) -> ExtensionField:
    """``L = K`` presented as ``K[x]/(x - 1)``, so the generator is ``1``."""
    return make_extension(base, [-1, 1])


def field_invert(a: FieldElement) -> FieldElement:
    """Inverse via the extended Euclidean algorithm modulo the minimal polynomial."""
    L = a.parent
    K = L.base
    if not a:
        raise ZeroDivisionError("0 is not invertible")
    r0, r1 = list(L.minpoly), _trim(a.coeffs)
    s0, s1 = [], [K.one]
    while len(r1) > 1:
        q, r = poly_divmod(r0, r1, K)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, K), K)
    # r1 is a nonzero constant since m is irreducible
    c = 1 / r1[0]
    s = [c * x for x in s1]
    s += [K.zero] * (L.degree - len(s))
    _, s = poly_divmod(s, L.minpoly, K) if len(s) > L.degree else (None, s)
    s = list(s) + [K.zero] * (L.degree - len(s))
    return FieldElement(L, tuple(s))


def regular_representation(a: FieldElement) -> Matrix:
    """Matrix of ``x -> a x`` in the power basis; column ``j`` holds ``a * gen^j``."""
    L = a.parent
    cols = []
    basis_elt = L.one
    g = L.gen
    for _ in range(L.degree):
        cols.append((a * basis_elt).coeffs)
        basis_elt = basis_elt * g
    return Matrix.from_columns(L.base, cols, L.degree)


class FieldAutomorphism:
    """A ``K``-automorphism of ``L`` determined by the image of the generator."""

    __slots__ = ("parent", "image")

    def __init__(self, parent: ExtensionField, image: FieldElement):
        self.parent = parent
        self.image = parent(image)
        if poly_eval(list(parent.minpoly), self.image, parent.one) != 0:
            raise InvalidAutomorphism(f"{image!r} is not a root of the minimal polynomial")
        basis = [parent.gen**k for k in range(parent.degree)]
        imgs = [self(b) for b in basis]
        for i, bi in enumerate(basis):
            for j, bj in enumerate(basis):
                if self(bi * bj) != imgs[i] * imgs[j]:
                    raise InvalidAutomorphism("image does not define a ring homomorphism")

    def __call__(self, x) -> FieldElement:
        L = self.parent
        x = L(x)
        acc = L.zero
        for c in reversed(x.coeffs):
            acc = acc * self.image + L.embed(c)
        return acc

    def compose(self, other: "FieldAutomorphism") -> "FieldAutomorphism":
        """``self o other``."""
        return FieldAutomorphism(self.parent, self(other.image))

    def matrix(self) -> Matrix:
        L = self.parent
        return Matrix.from_columns(L.base, [(self.image**k).coeffs for k in range(L.degree)], L.degree)

    @property
    def is_identity(self) -> bool:
        return self.image == self.parent.gen

    def __eq__(self, other):
        return isinstance(other, FieldAutomorphism) and self.parent == other.parent and self.image == other.image

    def __hash__(self):
        return hash(self.image)

    def __repr__(self):
        return f"a -> {self.image!r}"


@dataclass(frozen=True)
class AutomorphismGroup:
    elements: tuple
    is_galois: bool

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def inverse(self, sigma: FieldAutomorphism) -> FieldAutomorphism:
        for tau in self.elements:
            if sigma.compose(tau).is_identity:
                return tau
        raise InvalidAutomorphism("group is not closed under inverses")


def automorphism_group(L: ExtensionField, table: Sequence | None = None) -> AutomorphismGroup:
    """All ``K``-automorphisms of ``L`` for the supported towers.

    Prime-field bases use Frobenius powers; quadratic extensions of the
    rationals use the conjugation ``a -> -c1 - a``. Larger rational towers need
    an explicit ``table`` of generator images, each of which is verified.
    """
    d = L.degree
    ident = FieldAutomorphism(L, L.gen)
    if d == 1:
        return AutomorphismGroup((ident,), True)
    if isinstance(L.base, PrimeField) and table is None:
        found = []
        img = L.gen
        for _ in range(d):
            if poly_eval(list(L.minpoly), img, L.one) == 0 and img not in [s.image for s in found]:
                found.append(FieldAutomorphism(L, img))
            img = img**L.base.p
        return AutomorphismGroup(tuple(found), len(found) == d)
    if table is None:
        if d == 2:
            c1 = L.minpoly[1]
            conj = L.embed(-c1) - L.gen
            return AutomorphismGroup((ident, FieldAutomorphism(L, conj)), True)
        raise UnsupportedTower(f"degree {d} over {L.base!r} needs an automorphism table")
    found = [ident]
    for entry in table:
        sigma = FieldAutomorphism(L, L(entry))
        if sigma not in found:
            found.append(sigma)
    return AutomorphismGroup(tuple(found), len(found) == d)
