"""The localized q-difference operator algebra in normal-ordered form.

Generators: shift operators d_{i,r} and half-power coordinates w_{i,r}^{1/2}
with d_{i,r} w_{i,r}^{1/2} = Q w_{i,r}^{1/2} d_{i,r} (Q the base unit,
Q^2 = q) and everything else commuting.  A TorusElement is a finite sum of
(Scalar coefficient) * (d-monomial), coefficient on the left.
"""

from __future__ import annotations

from .errors import LocalizationViolation
from .scalars import GR_ONE, Monomial, Poly, SCALAR_ONE, Scalar


class DMonomial:
    """A commutative monomial in the shift operators: (i,r) -> exponent."""

    __slots__ = ("exps", "_hash")

    def __init__(self, exps):
        self.exps = tuple(sorted(((i, r), e) for (i, r), e in exps if e != 0))
        self._hash = hash(self.exps)

    @classmethod
    def one(cls):
        return _D_ONE

    @classmethod
    def unit(cls, i, r, e=1):
        return cls((((i, r), e),))

    def __mul__(self, other):
        d = dict(self.exps)
        for k, e in other.exps:
            d[k] = d.get(k, 0) + e
        return DMonomial(d.items())

    def __pow__(self, n):
        return DMonomial((k, e * n) for k, e in self.exps)

    def inverse(self):
        return self ** -1

    def exp_of(self, i, r):
        for k, e in self.exps:
            if k == (i, r):
                return e
        return 0

    def is_one(self):
        return not self.exps

    def __eq__(self, other):
        return isinstance(other, DMonomial) and self.exps == other.exps

    def __lt__(self, other):
        return self.exps < other.exps

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.exps:
            return "1"
        return "*".join(f"d[{i},{r}]^{e}" if e != 1 else f"d[{i},{r}]"
                        for (i, r), e in self.exps)


_D_ONE = DMonomial(())


def conjugate_through(d, s):
    """The scalar s' with d * s = s' * d."""
    return s.conjugate(d)


class TorusElement:
    """Normal-ordered operator: map DMonomial -> Scalar coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None, _clean=True):
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = {d: c for d, c in terms.items() if not c.is_zero()}
        else:
            self.terms = terms

    @classmethod
    def zero(cls):
        return cls({}, _clean=False)

    @classmethod
    def from_scalar(cls, s):
        return cls({_D_ONE: s})

    @classmethod
    def monomial(cls, s, d):
        return cls({d: s})

    def is_zero(self):
        return all(c.is_zero() for c in self.terms.values())

    def __add__(self, other):
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out[d] + c if d in out else c
        return TorusElement(out)

    def __neg__(self):
        return TorusElement({d: -c for d, c in self.terms.items()}, _clean=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                c = c1 * conjugate_through(d1, c2)
                d = d1 * d2
                out[d] = out[d] + c if d in out else c
        return TorusElement(out)

    def scale(self, s):
        return TorusElement({d: c * s for d, c in self.terms.items()})

    def equals(self, other):
        keys = set(self.terms) | set(other.terms)
        zero = Scalar.zero()
        for d in keys:
            if not self.terms.get(d, zero).equals(other.terms.get(d, zero)):
                return False
        return True

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c!r})*{d!r}" for d, c in sorted(self.terms.items()))


def multiply_normal_order(x, y):
    return x * y


def _w_whole(var):
    return Monomial.unit(var, 2)


def _admissible_candidates(wvars, max_qhalf=12):
    """Binomial generators of the allowed denominator multiplicative set.

    Forms, for whole powers a = w_{i,r}, b = w_{j,s}:
    a - q^(h/2) b,  a - q^(h/2) b^{-1},  a - q^(h/2) a^{-1},  1 - q^(h/2) a.
    """
    shapes = []
    for va in wvars:
        a = _w_whole(va)
        shapes.append((a, a.inverse()))
        shapes.append((Monomial.one(), a))
        for vb in wvars:
            if vb == va:
                continue
            b = _w_whole(vb)
            shapes.append((a, b))
            shapes.append((a, b.inverse()))
    out = []
    for m1, m2 in shapes:
        for h in range(-max_qhalf, max_qhalf + 1):
            out.append(Poly.mono(m1) - Poly.mono(m2 * Monomial.q_half(h)))
    return out


def check_admissible(x, max_qhalf=12):
    """Verify every coefficient denominator factors over the allowed set.

    Each denominator, up to a unit monomial, must be a product of binomials
    of the catalogued shapes.  Raises LocalizationViolation with the
    irreducible remainder otherwise.
    """
    from .scalars import _divide_exact
    for c in x.terms.values():
        den = c.den
        if len(den.terms) == 1:
            continue
        wvars = sorted(v for v in den.variables() if v.startswith("w:"))
        cands = _admissible_candidates(wvars, max_qhalf)
        rem = den.mul_mono(den.content_monomial().inverse())
        progress = True
        while len(rem.terms) > 1 and progress:
            progress = False
            for b in cands:
                quo = _divide_exact(rem, b)
                if quo is not None:
                    rem = quo.mul_mono(quo.content_monomial().inverse())
                    progress = True
                    break
        if len(rem.terms) > 1 and any(v.startswith("w:")
                                      for v in rem.variables()):
            raise LocalizationViolation(f"denominator factor {rem!r} is not in "
                                        "the allowed multiplicative set")
    return True
