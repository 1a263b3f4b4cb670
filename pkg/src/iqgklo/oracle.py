"""Independent numeric cross-checks for the symbolic engine.

Two instruments:

* randomized_equal -- compares two delta-supported distributions by acting
  on random monomial test functions under random exact Gaussian-rational
  specializations of all base variables.  It shares no simplification code
  with the symbolic comparison path.

* truncated_series_check -- confirms that the residue expansion of a
  rational current reproduces the difference of its truncated Laurent
  expansions at infinity and at zero, order by order.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import BadSpecialization, DenominatorVanishes, DivisionByZero
from .scalars import (
    GR, Monomial, Scalar, pack_mono, pack_poly, pack_positions, unpack_poly,
)
from .torus import DMonomial


def act(x, f):
    """Apply a normal-ordered operator to the monomial function f.

    x may be a TorusElement or a plain (coeff, dmon) pair; each shift
    operator rescales the matching half-power coordinate, so the result
    is again a Scalar multiple of f.
    """
    items = x.terms.items() if hasattr(x, "terms") else [x[::-1]]
    out = Scalar.zero()
    base = Scalar.from_mono(f)
    for dmon, coeff in items:
        out = out + coeff * base.conjugate(dmon)
    return out


def _random_gr(rng, max_height=64):
    num = rng.randint(1, max_height) * rng.choice((1, -1))
    den = rng.randint(1, max_height)
    return GR(Fraction(num, den))


def _random_assignment(rng, variables):
    return {v: _random_gr(rng) for v in variables}


def _random_test_monomial(rng, variables):
    wvars = sorted(v for v in variables if v.startswith("w:"))
    return Monomial((v, rng.randint(-3, 3)) for v in wvars)


def _group_key(pins, dmon):
    return (tuple(sorted((v, M.exps) for v, M in pins.items())), dmon)


def _groups(dist):
    return {_group_key(p, d): c for p, c, d in dist.items()}


def randomized_equal(x, y, trials=20, seed=0, max_retries=200):
    """Numeric concordance check for two fully pinned distributions.

    For each trial the two sides are compared support group by support
    group: the coefficient-with-shift part acts on a random monomial and
    the resulting scalars are evaluated at a random exact specialization.
    Specializations that hit a denominator are retried (bounded).
    Returns (verdict, trials_run).
    """
    rng = random.Random(seed)
    gx, gy = _groups(x), _groups(y)
    keys = set(gx) | set(gy)
    if not keys:
        return True, trials
    variables = set()
    for g in (gx, gy):
        for c in g.values():
            variables |= c.variables()
    variables.add("q")
    done = 0
    attempts = 0
    while done < trials:
        if attempts > max_retries + trials:
            raise BadSpecialization(
                f"exceeded {max_retries} retries at trial {done}")
        attempts += 1
        assignment = _random_assignment(rng, sorted(variables))
        f = _random_test_monomial(rng, variables)
        try:
            for key in keys:
                dmon = key[1]
                cx = gx.get(key, Scalar.zero())
                cy = gy.get(key, Scalar.zero())
                vx = act((cx, dmon), f).eval_numeric(assignment)
                vy = act((cy, dmon), f).eval_numeric(assignment)
                if vx != vy:
                    return False, done + 1
        except (DenominatorVanishes, DivisionByZero):
            continue
        done += 1
    return True, done


def truncated_series_check(gamma, expansion=None, order=8):
    """Verify the residue expansion against truncated two-sided series.

    The difference of the expansions of gamma at infinity and at zero must
    equal, coefficient by coefficient on x^n for |n| <= order, the sum of
    the delta contributions coeff * a^(-n).

    The coefficientwise comparison is carried out in an equivalent split
    form.  With p distinct pins a_k, both sides satisfy the monic order-p
    recurrence whose characteristic roots are the a_k^(-1) (for the delta
    side identically; leading and trailing coefficients are unit
    monomials, so solutions are pinned by any p consecutive values).
    Hence equality over the whole window is equivalent to (a) the series
    side satisfying the recurrence at every offset that fits the window,
    a denominator-free polynomial identity, and (b) direct equality on p
    consecutive central coefficients, where the series polynomials are
    smallest.
    """
    from .delta import expand_by_residues
    from .scalars import Poly
    if expansion is None:
        expansion = expand_by_residues(gamma)
    pref, plus = gamma.series_raw("infinity", order)
    _, minus = gamma.series_raw("zero", order)
    L = {n: plus.get(n, Poly.zero()) - minus.get(n, Poly.zero())
         for n in range(-order, order + 1)}
    terms = [(pins[gamma.var], coeff)
             for pins, coeff, _ in expansion.items()]
    p = len(terms)

    def direct_equal(n):
        rhs = Scalar.zero()
        for a, coeff in terms:
            rhs = rhs + coeff * Scalar.from_mono(a ** (-n))
        return (pref * Scalar(L[n])).equals(rhs)

    if p == 0:
        return all(poly.is_zero() for poly in L.values())
    if 2 * order + 1 <= p:
        # window too narrow to separate the components; compare directly
        return all(direct_equal(n) for n in range(-order, order + 1))
    roots = [a.inverse() for a, _ in terms]
    # pack every exponent vector into one integer so the recurrence steps
    # below are integer-key dict operations instead of monomial merges
    names = set()
    for poly in L.values():
        for m in poly.terms:
            names.update(v for v, _ in m.exps)
    for rho in roots:
        names.update(v for v, _ in rho.exps)
    vorder = sorted(names)
    pos = pack_positions(vorder)
    PL = {n: pack_poly(poly, pos) for n, poly in L.items()}
    eroots = [pack_mono(rho, pos) for rho in roots]

    def shift_sub(acc, src, ekey, sign=1):
        # acc -= x^ekey * src (termwise), with sign flipping the roles
        get = acc.get
        for key, c in src.items():
            kk = key + ekey
            nc = c if sign < 0 else -c
            s = get(kk)
            if s is None:
                acc[kk] = nc
            else:
                s = s + nc
                if s:
                    acc[kk] = s
                else:
                    del acc[kk]

    # (a) the factored recurrence prod_k (S - a_k^{-1}), S the index shift,
    # annihilates the window: applied one linear factor at a time, each
    # step is a key shift and a subtraction
    cur, lo, hi = PL, -order, order
    for er in eroots:
        nxt = {}
        for n in range(lo, hi):
            d = dict(cur[n + 1])
            shift_sub(d, cur[n], er)
            nxt[n] = d
        cur = nxt
        hi -= 1
    if not all(not d for d in cur.values()):
        return False
    # (b) for each pin, the leave-one-out operator prod_{l != k}(S - a_l^{-1})
    # kills every other component, so its value at one central offset pins
    # the k-th delta amplitude:
    #   sum_j e_j L[n0+j] = coeff_k * a_k^{-n0} * prod_{l != k}(rho_k - rho_l)
    n0 = max(-order, min(-(p // 2), order - p + 1))
    for k, (a, coeff) in enumerate(terms):
        e = [{0: GR(1)}]
        for l, er in enumerate(eroots):
            if l == k:
                continue
            new = [dict() for _ in range(len(e) + 1)]
            for j, ej in enumerate(e):
                shift_sub(new[j + 1], ej, 0, sign=-1)
                shift_sub(new[j], ej, er)
            e = new
        val = {}
        get = val.get
        for j, ej in enumerate(e):
            lj = PL[n0 + j]
            for k1, c1 in ej.items():
                for k2, c2 in lj.items():
                    kk = k1 + k2
                    nc = c1 * c2
                    s = get(kk)
                    if s is None:
                        val[kk] = nc
                    else:
                        s = s + nc
                        if s:
                            val[kk] = s
                        else:
                            del val[kk]
        expect = coeff * Scalar.from_mono(a ** (-n0))
        for l, rho in enumerate(roots):
            if l != k:
                expect = expect * (Scalar.from_mono(roots[k]) -
                                   Scalar.from_mono(rho))
        if not (pref * Scalar(unpack_poly(val, vorder))).equals(expect):
            return False
    return True
