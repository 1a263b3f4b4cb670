"""Formal delta-function calculus over the quantum torus.

Two layers:

* FactorCurrent -- a rational function of one spectral variable kept in
  fully factored form  pref * x^power * prod (1 - c*M*x)^e,  where each c
  is a Gaussian-rational unit and each M a Laurent monomial free of x.
  Factored form gives structural access to poles, zeros, leading terms
  and residues.

* Distribution -- a finite sum of delta-supported operator terms.  Each
  term is (pins, coeff, dmon): ``pins`` maps spectral variables to their
  monomial targets (the content of the delta factors), ``coeff`` is a
  Scalar with every pinned variable substituted out, and ``dmon`` is the
  commuting shift-operator monomial standing rightmost.
"""

from __future__ import annotations

from math import comb

from .errors import (
    DenominatorVanishes, DoublePin, NonSimplePole, UnpinnedResidual,
)
from .scalars import (
    GR, GR_ONE, Monomial, POLY_ONE, Poly, SCALAR_ONE, Scalar,
    pack_mono, pack_positions, unpack_poly, w_var,
)
from .torus import DMonomial


def is_spectral(name):
    """Spectral variables are the plain names (u, v, u1, ...)."""
    return name != "q" and ":" not in name


GR_MINUS_ONE = GR(-1)


class FactorCurrent:
    """pref * x^power * prod over ((c, M), e) of (1 - c*M*x)^e."""

    __slots__ = ("var", "pref", "power", "factors")

    def __init__(self, var, pref=SCALAR_ONE, power=0, factors=None):
        self.var = var
        self.pref = pref
        self.power = power
        self.factors = {}
        if factors:
            for (c, M), e in (factors.items() if isinstance(factors, dict)
                              else factors):
                if e == 0 or not c:
                    continue
                key = (c, M)
                self.factors[key] = self.factors.get(key, 0) + e
            self.factors = {k: e for k, e in self.factors.items() if e != 0}

    @classmethod
    def one(cls, var):
        return cls(var)

    @classmethod
    def from_scalar(cls, var, s):
        return cls(var, pref=s)

    def copy_with(self, pref=None, power=None, factors=None):
        return FactorCurrent(
            self.var,
            self.pref if pref is None else pref,
            self.power if power is None else power,
            dict(self.factors) if factors is None else factors)

    # --- builders -----------------------------------------------------

    def times_linear(self, M, c=GR_ONE, e=1):
        """Multiply by (1 - c*M*x)^e."""
        f = dict(self.factors)
        key = (c, M)
        f[key] = f.get(key, 0) + e
        if f[key] == 0:
            del f[key]
        return self.copy_with(factors=f)

    def times_linear_inv_arg(self, M, c=GR_ONE, e=1):
        """Multiply by (1 - c*M/x)^e = [-c*M/x * (1 - c^{-1}M^{-1}x)]^e."""
        unit = Scalar.from_mono(M, GR_MINUS_ONE * c)
        pref = self.pref
        for _ in range(abs(e)):
            pref = pref * unit if e > 0 else pref / unit
        return self.copy_with(pref=pref, power=self.power - e) \
                   .times_linear(M.inverse(), c.inverse(), e)

    def times_power(self, k):
        return self.copy_with(power=self.power + k)

    def scale(self, s):
        return self.copy_with(pref=self.pref * s)

    def __mul__(self, other):
        assert self.var == other.var
        f = dict(self.factors)
        for key, e in other.factors.items():
            f[key] = f.get(key, 0) + e
            if f[key] == 0:
                del f[key]
        return FactorCurrent(self.var, self.pref * other.pref,
                             self.power + other.power, f)

    def inverse(self):
        return FactorCurrent(
            self.var, self.pref.inverse(), -self.power,
            {k: -e for k, e in self.factors.items()})

    def __truediv__(self, other):
        return self * other.inverse()

    # --- argument changes ---------------------------------------------

    def scale_arg(self, M, c=GR_ONE):
        """Substitute x -> c*M*x."""
        pref = self.pref * Scalar.from_mono(M ** self.power,
                                            c ** self.power)
        f = {}
        for (ct, Mt), e in self.factors.items():
            f[(ct * c, Mt * M)] = e
        return FactorCurrent(self.var, pref, self.power, f)

    def invert_arg(self):
        """Substitute x -> 1/x."""
        out = FactorCurrent(self.var, self.pref, -self.power, {})
        for (c, M), e in self.factors.items():
            out = out.times_linear_inv_arg(M, c, e)
        return out

    def rename_var(self, newvar):
        return FactorCurrent(newvar, self.pref, self.power, dict(self.factors))

    def conjugate(self, dmon):
        """Move a shift-operator monomial through from the left."""
        f = {}
        for (c, M), e in self.factors.items():
            key = (c, conjugate_pin_target(dmon, M))
            f[key] = f.get(key, 0) + e
        return FactorCurrent(self.var, self.pref.conjugate(dmon),
                             self.power, f)

    # --- evaluation ----------------------------------------------------

    def evaluate(self, a):
        """The Scalar value at x = a (a Monomial, possibly spectral)."""
        out = self.pref * Scalar.from_mono(a ** self.power)
        for (c, M), e in self.factors.items():
            lin = Scalar(POLY_ONE - Poly.mono(M * a, c))
            if lin.is_zero():
                if e < 0:
                    raise DenominatorVanishes(
                        f"evaluation at {a!r} hits the pole (1-{c!r}*{M!r}*x)")
                return Scalar.zero()
            for _ in range(abs(e)):
                out = out * lin if e > 0 else out / lin
        return out

    def to_scalar(self):
        return self.evaluate(Monomial.unit(self.var))

    def drop_factor(self, key):
        f = dict(self.factors)
        del f[key]
        return self.copy_with(factors=f)

    def poles(self):
        return [(c, M, e) for (c, M), e in self.factors.items() if e < 0]

    # --- asymptotics ----------------------------------------------------

    def degree_at_infinity(self):
        return self.power + sum(self.factors.values())

    def leading_at_infinity(self):
        """(degree, coefficient) of the top term of the expansion at x=infinity."""
        coeff = self.pref
        for (c, M), e in self.factors.items():
            unit = Scalar.from_mono(M, GR_MINUS_ONE * c)
            for _ in range(abs(e)):
                coeff = coeff * unit if e > 0 else coeff / unit
        return self.degree_at_infinity(), coeff

    def series(self, side, order):
        """Truncated Laurent expansion (x-exponent -> Scalar) on [-order, order].

        side "infinity": expand negative-exponent factors in powers of 1/x;
        side "zero": expand them in powers of x.
        """
        pref, cur = self.series_raw(side, order)
        out = {}
        for n, p in cur.items():
            if not p.is_zero():
                s = pref * Scalar(p)
                if not s.is_zero():
                    out[n] = s
        return out

    def series_raw(self, side, order):
        """Truncated expansion as (pref, {exponent: Poly}) with the scalar
        prefactor left unmultiplied.  Internally the expansion is convolved
        with denominator-free Poly coefficients.  Positive factors are
        applied first (exactly), after which every remaining geometric
        factor shifts exponents in one direction only, so exponents past
        the window on that side can be dropped soundly.
        """
        names = set()
        for (_, M) in self.factors:
            names.update(v for v, _ in M.exps)
        vorder = sorted(names)
        pos = pack_positions(vorder)

        def accumulate(nxt, k, p, shift_key, cc):
            tgt = nxt.get(k)
            if tgt is None:
                tgt = nxt[k] = {}
            get = tgt.get
            for key, coeff in p.items():
                kk = key + shift_key
                nc = coeff * cc
                s = get(kk)
                if s is None:
                    tgt[kk] = nc
                else:
                    s = s + nc
                    if s:
                        tgt[kk] = s
                    else:
                        del tgt[kk]

        cur = {self.power: {0: GR_ONE}}
        for (c, M), e in self.factors.items():
            if e <= 0:
                continue
            encM = pack_mono(M, pos)
            nxt = {}
            for j in range(e + 1):
                cc = GR((-1) ** j * comb(e, j)) * c ** j
                for n, p in cur.items():
                    accumulate(nxt, n + j, p, j * encM, cc)
            cur = nxt
        down = side == "infinity"
        for (c, M), e in self.factors.items():
            if e >= 0 or not cur:
                continue
            m = -e
            encM = pack_mono(M, pos)
            if down:
                jmax = max(cur) + order - m
                base = GR((-1) ** m)
            else:
                jmax = order - min(cur)
            nxt = {}
            for j in range(max(jmax, -1) + 1):
                if down:
                    shift = -m - j
                    cc = base * GR(comb(m - 1 + j, j)) * c ** shift
                else:
                    shift = j
                    cc = GR(comb(m - 1 + j, j)) * c ** j
                for n, p in cur.items():
                    k = n + shift
                    if (down and k < -order) or (not down and k > order):
                        continue
                    accumulate(nxt, k, p, shift * encM, cc)
            cur = nxt
        out = {}
        for n, p in cur.items():
            if -order <= n <= order and p:
                q = unpack_poly(p, vorder)
                if not q.is_zero():
                    out[n] = q
        return self.pref, out

    def equals(self, other):
        """Equality as rational functions (cross-multiplied)."""
        return self.to_scalar().equals(other.to_scalar())

    def __repr__(self):
        fs = " * ".join(f"(1-{c!r}*{M!r}*{self.var})^{e}"
                        for (c, M), e in self.factors.items())
        return f"[{self.pref!r} * {self.var}^{self.power}" + \
               (f" * {fs}]" if fs else "]")


def _spow(s, n):
    out = SCALAR_ONE
    for _ in range(n):
        out = out * s
    return out


def _neg_series_infinity(base, m, width):
    """(1 - base*x)^(-m) expanded at infinity: ((-base*x)^{-1})^m (1-(base x)^{-1})^{-m}."""
    inv = Scalar.one() / base
    out = {}
    sign = Scalar.const(GR((-1) ** m))
    for j in range(width + 1):
        out[-m - j] = sign * Scalar.const(GR(comb(m - 1 + j, j))) * _spow(inv, m + j)
    return out


def _neg_series_zero(base, m, width):
    """(1 - base*x)^(-m) expanded at zero."""
    out = {}
    for j in range(width + 1):
        out[j] = Scalar.const(GR(comb(m - 1 + j, j))) * _spow(base, j)
    return out


def _mul_series(a, b, width):
    out = {}
    for n1, c1 in a.items():
        for n2, c2 in b.items():
            n = n1 + n2
            if abs(n) > width:
                continue
            c = c1 * c2
            out[n] = out[n] + c if n in out else c
    return out


# --- distributions -----------------------------------------------------


def conjugate_pin_target(dmon, M):
    """Move a delta pin target left through a shift-operator monomial."""
    shift = 0
    for (i, r), e in dmon.exps:
        h = M.exp_of(w_var(i, r))
        if h:
            shift += 2 * e * h
    return M * Monomial.q_half(shift) if shift else M


def resolve_pins(pins):
    """Substitute pinned variables into one another's targets to a fixpoint."""
    pins = dict(pins)
    for _ in range(len(pins) + 2):
        changed = False
        for v, t in list(pins.items()):
            for u in t.vars():
                if u in pins and u != v and not pins[u].has_var(v) \
                        and not pins[u].has_var(u):
                    pins[v] = pins[v].substitute(u, pins[u])
                    changed = True
                    break
        if not changed:
            break
    return pins


def _pins_key(pins):
    return tuple(sorted((v, M.exps) for v, M in pins.items()))


class Distribution:
    """Finite sum of (pins, coeff, dmon) terms, merged on (pins, dmon)."""

    __slots__ = ("terms",)

    def __init__(self):
        self.terms = {}      # (pins_key, dmon) -> (pins dict, Scalar)

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def single(cls, pins, coeff, dmon=None):
        out = cls()
        out.add_term(pins, coeff, dmon or DMonomial.one())
        return out

    def add_term(self, pins, coeff, dmon):
        """Add one term; pins are resolved and substituted into coeff."""
        pins = resolve_pins(pins)
        for v, M in pins.items():
            if v in coeff.variables():
                coeff = coeff.substitute(v, M)
        key = (_pins_key(pins), dmon)
        if key in self.terms:
            self.terms[key] = (pins, self.terms[key][1] + coeff)
        else:
            self.terms[key] = (pins, coeff)

    def items(self):
        """Yield (pins, coeff, dmon) with zero coefficients skipped."""
        for (pkey, dmon), (pins, coeff) in self.terms.items():
            if not coeff.is_zero():
                yield pins, coeff, dmon

    def is_zero(self):
        return all(c.is_zero() for _, c in self.terms.values())

    def __add__(self, other):
        out = Distribution()
        for pins, coeff, dmon in self.items():
            out.add_term(pins, coeff, dmon)
        for pins, coeff, dmon in other.items():
            out.add_term(pins, coeff, dmon)
        return out

    def __neg__(self):
        out = Distribution()
        for pins, coeff, dmon in self.items():
            out.add_term(pins, -coeff, dmon)
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        """Left-multiply every coefficient by a pin-free scalar."""
        out = Distribution()
        for pins, coeff, dmon in self.items():
            out.add_term(pins, s * coeff, dmon)
        return out

    def map_coeff(self, fn):
        """Replace each coefficient by fn(pins, coeff) (pins substituted after)."""
        out = Distribution()
        for pins, coeff, dmon in self.items():
            out.add_term(pins, fn(pins, coeff), dmon)
        return out

    def __mul__(self, other):
        out = Distribution()
        for pins1, c1, d1 in self.items():
            for pins2, c2, d2 in other.items():
                overlap = set(pins1) & set(pins2)
                if overlap:
                    raise DoublePin(f"variables {sorted(overlap)} pinned in "
                                    "both factors")
                pins = dict(pins1)
                for v, M in pins2.items():
                    pins[v] = conjugate_pin_target(d1, M)
                out.add_term(pins, c1 * c2.conjugate(d1), d1 * d2)
        return out

    def rename_spectral(self, mapping):
        """Simultaneously rename free spectral variables (a bijection)."""
        phases = [{old: f"__tmp{k}" for k, old in enumerate(mapping)},
                  {f"__tmp{k}": mapping[old]
                   for k, old in enumerate(mapping)}]
        out = Distribution()
        for pins, coeff, dmon in self.items():
            p, c = dict(pins), coeff
            for phase in phases:
                p2 = {}
                for v, M in p.items():
                    for old, new in phase.items():
                        M = M.substitute(old, Monomial.unit(new))
                    p2[phase.get(v, v)] = M
                p = p2
                for old, new in phase.items():
                    c = c.substitute(old, Monomial.unit(new))
            out.add_term(p, c, dmon)
        return out

    def __repr__(self):
        parts = []
        for pins, coeff, dmon in self.items():
            ps = "".join(f"delta[{v}={M!r}]" for v, M in sorted(pins.items()))
            parts.append(f"{ps}({coeff!r}){dmon!r}")
        return " + ".join(parts) if parts else "0"


def multiply_dist(x, y):
    return x * y


def bracket_q(x, y, vparam):
    """[x, y]_v = x*y - v*y*x."""
    return x * y - (y * x).scale(vparam)


def symmetrize(x, var1, var2):
    return x + x.rename_spectral({var1: var2, var2: var1})


def expand_by_residues(fc):
    """Difference of the expansions at infinity and at zero as a delta sum.

    Every finite nonzero pole must be simple and located at an honest
    monomial point (factor (1 - M*x)^-1); the term pinned there carries
    minus the value of the remaining factors.
    """
    out = Distribution()
    for (c, M), e in list(fc.factors.items()):
        if e >= 0:
            continue
        if e != -1:
            raise NonSimplePole(f"factor (1-{c!r}*{M!r}*{fc.var}) has "
                                f"exponent {e}")
        if c != GR_ONE:
            raise NonSimplePole(f"pole of (1-{c!r}*{M!r}*{fc.var}) is not at "
                                "a monomial point")
        a = M.inverse()
        h = fc.drop_factor((c, M))
        out.add_term({fc.var: a}, -h.evaluate(a), DMonomial.one())
    return out


def check_fully_pinned(dist):
    """Raise if any pin target still references a spectral variable."""
    for pins, coeff, dmon in dist.items():
        for v, M in pins.items():
            for name in M.vars():
                if is_spectral(name):
                    raise UnpinnedResidual(
                        f"pin {v} -> {M!r} references spectral {name}")


def canonicalize_compare(x, y):
    """Group by (pins, dmon) and compare coefficient sums exactly.

    Returns a list of discrepancies (pins, dmon, lhs coeff, rhs coeff);
    empty list means equal.
    """
    check_fully_pinned(x)
    check_fully_pinned(y)
    xs = {(_pins_key(p), d): (p, c) for p, c, d in x.items()}
    ys = {(_pins_key(p), d): (p, c) for p, c, d in y.items()}
    bad = []
    for key in sorted(set(xs) | set(ys), key=repr):
        p = (xs.get(key) or ys.get(key))[0]
        cx = xs[key][1] if key in xs else Scalar.zero()
        cy = ys[key][1] if key in ys else Scalar.zero()
        if not cx.equals(cy):
            bad.append((p, key[1], cx, cy))
    return bad
