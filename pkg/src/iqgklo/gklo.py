"""Images of the current generators as delta-supported difference operators.

Builds, per validated instance: the factored building-block currents, the
Cartan-current image Xi_i(u) (a pure rational function), the B-current
image (a delta-supported Distribution over the quantum torus), the block
operators chi assembled from the B-image, and the degree/leading-term
extraction for the K-generators.
"""

from __future__ import annotations

from fractions import Fraction

from .delta import (
    Distribution, FactorCurrent, conjugate_pin_target,
)
from .errors import DegreeMismatch, WrongCase
from .scalars import (
    GR, GR_I, GR_ONE, Monomial, Scalar, w_var, z_var, zeta_var,
)
from .torus import DMonomial, TorusElement

GR_MINUS_ONE = GR(-1)


def zeta(inst, i):
    if inst.zeta_values is not None:
        return Scalar.const(inst.zeta_values[i - 1])
    return Scalar.var(zeta_var(i))


def w_half_pref(i, rng):
    """prod over r in rng of w_{i,r}^{-1/2} as a Scalar."""
    m = Monomial(((w_var(i, r), -1) for r in rng))
    return Scalar.from_mono(m)


def build_W(inst, i, var):
    """W_i = prod_r w_{tau i,r}^{-1/2} (1 - w_{i,r}/u)."""
    ti = inst.diagram.t(i)
    fc = FactorCurrent(var, pref=w_half_pref(ti, range(1, inst.w_count(i) + 1)))
    for r in range(1, inst.w_count(i) + 1):
        fc = fc.times_linear_inv_arg(Monomial.w(i, r))
    return fc


def build_Z(inst, i, var):
    fc = FactorCurrent.one(var)
    for s in range(1, inst.z_count(i) + 1):
        fc = fc.times_linear_inv_arg(Monomial.unit(z_var(i, s), 1))
    return fc


def build_WW(inst, i, var):
    """The involution-symmetric combination W_i(u) W_{tau i}(1/u)."""
    ti = inst.diagram.t(i)
    return build_W(inst, i, var) * build_W(inst, ti, var).invert_arg()


def build_ZZ(inst, i, var):
    ti = inst.diagram.t(i)
    return build_Z(inst, i, var) * build_Z(inst, ti, var).invert_arg()


def build_WWir(inst, i, r, var):
    """As build_WW(i) but with the r-th linear factor of W_i omitted."""
    ti = inst.diagram.t(i)
    fc = build_W(inst, ti, var).invert_arg()
    fc = fc.scale(w_half_pref(ti, range(1, inst.w_count(i) + 1)))
    for s in range(1, inst.w_count(i) + 1):
        if s != r:
            fc = fc.times_linear_inv_arg(Monomial.w(i, s))
    return fc


def build_kappa(var):
    """(1 - q u)(1 - u/q) / (1 - u)^2."""
    return (FactorCurrent.one(var)
            .times_linear(Monomial.q_int(1))
            .times_linear(Monomial.q_int(-1))
            .times_linear(Monomial.one(), e=-2))


def wp_factor(var, wp):
    """(u q^wp - (u q^wp)^{-1}) / (u - u^{-1}) in factored form."""
    fc = FactorCurrent.one(var)
    if wp == 0:
        return fc
    h = int(2 * wp)          # q^wp = Q^h with h = 2*wp an integer
    fc = fc.scale(Scalar.q_half(h))
    fc = fc.times_linear_inv_arg(Monomial.q_half(-h))
    fc = fc.times_linear_inv_arg(Monomial.q_half(-h), c=GR_MINUS_ONE)
    fc = fc.times_linear_inv_arg(Monomial.one(), e=-1)
    fc = fc.times_linear_inv_arg(Monomial.one(), c=GR_MINUS_ONE, e=-1)
    return fc


def times_x_minus_xinv(fc):
    """Multiply a FactorCurrent by (x - 1/x)."""
    return (fc.times_power(1)
            .times_linear_inv_arg(Monomial.one())
            .times_linear_inv_arg(Monomial.one(), c=GR_MINUS_ONE))


def neighbors_in(inst, i):
    """Nodes j with an oriented edge j -> i."""
    return sorted(j for (j, k) in inst.orientation if k == i)


def neighbors_out(inst, i):
    """Nodes j with an oriented edge i -> j."""
    return sorted(k for (j, k) in inst.orientation if j == i)


def build_Xi(inst, i, var="u", corrupt=None):
    """The Cartan-current image: a factored rational function of one variable."""
    d = inst.diagram
    ti = d.t(i)
    wp = inst.wp[i]
    if corrupt == "flip_wp":
        wp = -wp
    fc = FactorCurrent.one(var).scale(zeta(inst, i) * zeta(inst, ti))
    fc = fc * wp_factor(var, wp)
    if inst.th(i) and corrupt != "drop_kappa":
        fc = fc * build_kappa(var)
    fc = fc * build_ZZ(inst, i, var)
    ww = build_WW(inst, i, var)
    fc = fc / (ww.scale_arg(Monomial.q_int(1)) * ww.scale_arg(Monomial.q_int(-1)))
    for j in d.neighbors(i):
        fc = fc * build_WW(inst, j, var)
    return fc


def _eval_prod(currents, at):
    out = Scalar.one()
    for fc in currents:
        out = out * fc.evaluate(at)
    return out


def one_minus_q2():
    return Scalar.one() - Scalar.q_int(2)


def build_B_image(inst, i, var="u", corrupt=None):
    """The B-current image as a delta-supported Distribution."""
    d = inst.diagram
    ti = d.t(i)
    out = Distribution.zero()
    if ti == i:
        for r in range(1, inst.w_count(i) + 1):
            a = Monomial.w(i, r) * Monomial.q_int(-1)
            num = [build_Z(inst, i, var)]
            num += [build_WW(inst, j, var) for j in neighbors_in(inst, i)]
            num += [build_W(inst, j, var).invert_arg()
                    for j in neighbors_out(inst, i) if d.t(j) == j]
            coeff = (zeta(inst, i) / one_minus_q2()) * _eval_prod(num, a) \
                / build_WWir(inst, i, r, var).evaluate(Monomial.w(i, r))
            out.add_term({var: a}, coeff, DMonomial.unit(i, r, -1))

            b = (Monomial.w(i, r) * Monomial.q_int(1)).inverse()
            num = [build_Z(inst, i, var)]
            if inst.th(i):
                num.append(build_kappa(var))
            num += [build_WW(inst, j, var).invert_arg()
                    for j in neighbors_out(inst, i) if d.t(j) != j]
            num += [build_W(inst, j, var).invert_arg()
                    for j in neighbors_out(inst, i) if d.t(j) == j]
            coeff = (Scalar.q_int(1) * zeta(inst, i) / one_minus_q2()) \
                * _eval_prod(num, b) \
                / build_WWir(inst, i, r, var).evaluate(Monomial.w(i, r))
            out.add_term({var: b}, coeff, DMonomial.unit(i, r))
        if inst.th(i) and corrupt != "drop_const":
            num = [build_Z(inst, i, var)]
            num += [build_W(inst, j, var) for j in d.neighbors(i)]
            coeff = Scalar.const(GR_I) * zeta(inst, i) \
                * _eval_prod(num, Monomial.one()) \
                / ((Scalar.one() + Scalar.q_int(1))
                   * build_WW(inst, i, var).evaluate(Monomial.q_int(1)))
            out.add_term({var: Monomial.one()}, coeff, DMonomial.one())
    else:
        qabswp = Scalar.q_half(int(2 * abs(inst.wp[i])))  # q^{|wp_i|} = Q^{2|wp_i|}
        for r in range(1, inst.w_count(i) + 1):
            a = Monomial.w(i, r) * Monomial.q_int(-1)
            num = [build_Z(inst, i, var)]
            num += [build_WW(inst, j, var) for j in neighbors_in(inst, i)]
            coeff = (qabswp * zeta(inst, i) / one_minus_q2()) \
                * _eval_prod(num, a) \
                / build_WWir(inst, i, r, var).evaluate(Monomial.w(i, r))
            out.add_term({var: a}, coeff, DMonomial.unit(i, r, -1))
        for t in range(1, inst.w_count(ti) + 1):
            b = (Monomial.w(ti, t) * Monomial.q_int(1)).inverse()
            num = [build_Z(inst, i, var)]
            num += [build_WW(inst, d.t(j), var).invert_arg()
                    for j in neighbors_in(inst, i)]
            coeff = -(Scalar.q_int(1) * zeta(inst, i) / one_minus_q2()) \
                * _eval_prod(num, b) \
                / build_WWir(inst, ti, t, var).evaluate(Monomial.w(ti, t))
            out.add_term({var: b}, coeff, DMonomial.unit(ti, t))
    return out


def build_chi(inst, i):
    """Block operators: dict (sign, r) -> (pin target Monomial, TorusElement).

    For fixed nodes these follow the closed formulas with arguments already
    substituted; the B-image is their delta-assembly.  For moved nodes the
    blocks are read off the two sums of the B-image.
    """
    d = inst.diagram
    ti = d.t(i)
    out = {}
    if ti == i:
        if inst.th(i):
            num = [build_Z(inst, i, "u")]
            num += [build_W(inst, j, "u") for j in d.neighbors(i)]
            c0 = Scalar.const(GR_I) * zeta(inst, i) \
                * _eval_prod(num, Monomial.one()) \
                / ((Scalar.one() + Scalar.q_int(1))
                   * build_WW(inst, i, "u").evaluate(Monomial.q_int(1)))
            out[("+", 0)] = (Monomial.one(),
                             TorusElement.from_scalar(c0))
        for r in range(1, inst.w_count(i) + 1):
            wr = Monomial.w(i, r)
            a = wr * Monomial.q_int(-1)
            val = (zeta(inst, i) / one_minus_q2()) \
                * build_Z(inst, i, "u").evaluate(a) \
                / build_WWir(inst, i, r, "u").evaluate(wr)
            for j in neighbors_in(inst, i):
                val = val * build_WW(inst, j, "u").evaluate(a)
            for j in neighbors_out(inst, i):
                if d.t(j) == j:
                    val = val * build_W(inst, j, "u").evaluate(a.inverse())
            out[("+", r)] = (a, TorusElement.monomial(val, DMonomial.unit(i, r, -1)))

            b = (wr * Monomial.q_int(1)).inverse()
            val = (Scalar.q_int(1) * zeta(inst, i) / one_minus_q2()) \
                * build_Z(inst, i, "u").evaluate(b) \
                / build_WWir(inst, i, r, "u").evaluate(wr)
            if inst.th(i):
                val = val * build_kappa("u").evaluate(b.inverse())
            for j in neighbors_out(inst, i):
                if d.t(j) == j:
                    val = val * build_W(inst, j, "u").evaluate(b.inverse())
                else:
                    val = val * build_WW(inst, j, "u").evaluate(b.inverse())
            out[("-", r)] = (b, TorusElement.monomial(val, DMonomial.unit(i, r)))
    else:
        dist = build_B_image(inst, i)
        for pins, coeff, dmon in dist.items():
            (_, e), = dmon.exps
            (k, r) = dmon.exps[0][0]
            sign = "+" if e < 0 else "-"
            out[(sign, r)] = (pins["u"], TorusElement.monomial(coeff, dmon))
    return out


def extend_a2n(inst, i):
    """Index extension merging the two coordinate families across a
    c = -1 involution pair; returns (n, rprime map, resolver)."""
    d = inst.diagram
    ti = d.t(i)
    if ti == i or d.c(i, ti) != -1:
        raise WrongCase(f"node {i} is not part of a c=-1 involution pair")
    n = inst.w_count(i) + inst.w_count(ti)

    def rprime(r):
        return n + 1 - r

    def resolve(k, r):
        """(node, index, exponent sign) for the extended symbol w_{k,r}."""
        vk = inst.w_count(k)
        if 1 <= r <= vk:
            return (k, r, 1)
        if vk < r <= n:
            return (d.t(k), rprime(r), -1)
        raise WrongCase(f"index {r} out of extended range 1..{n}")

    return n, rprime, resolve


def extended_w(inst, i, r):
    """The extended coordinate w_{i,r} as a Monomial."""
    k, s, e = extend_a2n(inst, i)[2](i, r)
    return Monomial.w(k, s, e)


def extended_chi(inst, i):
    """dict r -> (pin target, TorusElement) over the merged index range."""
    n, rprime, _ = extend_a2n(inst, i)
    chi = build_chi(inst, i)
    out = {}
    for r in range(1, n + 1):
        if r <= inst.w_count(i):
            out[r] = chi[("+", r)]
        else:
            out[r] = chi[("-", rprime(r))]
    return out


def leading_coefficient_K(inst, i, corrupt=None):
    """Top coefficient of the Cartan-current image at u = infinity.

    The top degree must equal the shift pairing at the involution image
    node; raises DegreeMismatch otherwise.
    """
    xi = build_Xi(inst, i, corrupt=corrupt)
    deg, coeff = xi.leading_at_infinity()
    expected = inst.ell(inst.diagram.t(i))
    if deg != expected:
        raise DegreeMismatch(f"top degree {deg} differs from expected "
                             f"{expected} at node {i}")
    return coeff
