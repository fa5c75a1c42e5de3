"""Superelliptic curve model: y^m = F(x) with F separable.

Places, divisors, function representatives and exact local expansions.
With r = deg F and d = gcd(m, r), the smooth model has d points above
x = infinity; they are collapsed here into a single formal place of
degree d, and all valuations at infinity are per-branch integers.

Supported bases: the rationals (arithmetic via Fraction; only the
combinatorial operations are available) and finite fields with
characteristic prime to m (full local-expansion engine).

Local parameters:
  * unramified affine point (x0, y0), y0 != 0:  t = x - x0, y(t) by Hensel;
  * ramification point (alpha, 0):              t = y,      x(t) by Newton;
  * the infinite place when d = 1:              t = x^a y^b with
    a*m + b*r = -1, giving x = t^(-m) c(t), y = t^(-r) e(t) for unit
    series c, e solved order by order.

Integer coefficients passed to make_curve are interpreted as integer
literals (reduced into the prime subfield); genuinely non-prime-subfield
coefficients enter via FieldElem wrappers or base_change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import gf
from .errors import (
    BudgetExceeded,
    NotSeparable,
    PrecisionExhausted,
    RequiresD1,
    RequiresSplitRoots,
    UnsupportedBase,
    UnsupportedCollision,
)

PRECISION_CAP = 1 << 10


# ---------------------------------------------------------------------------
# places


@dataclass(frozen=True)
class RamPlace:
    """Ramification point R_i = (alpha_i, 0); 1-based index, alpha packed."""

    idx: int
    alpha: int

    @property
    def degree(self) -> int:
        return 1

    def sort_key(self):
        return (0, self.idx, 0)

    def label(self) -> str:
        return f"R{self.idx}"


@dataclass(frozen=True)
class InfPlace:
    """The formal sum of the d points above x = infinity."""

    deg: int

    @property
    def degree(self) -> int:
        return self.deg

    def sort_key(self):
        return (2, 0, 0)

    def label(self) -> str:
        return "inf"


@dataclass(frozen=True)
class ClosedPlace:
    """Frobenius orbit of an affine point, stored over its minimal field.

    base_p, base_n identify the curve's base GF(base_p^base_n); the orbit
    has b points whose packed coordinates live in GF(base_p^(base_n*b)).
    """

    base_p: int
    base_n: int
    b: int
    pts: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return self.b

    def rep(self) -> tuple[int, int]:
        return self.pts[0]

    def sort_key(self):
        return (1, self.b, self.pts)

    def label(self) -> str:
        x, y = self.pts[0]
        return f"P{self.b}({x},{y})"


def closed_place(base: gf.FieldCtx, b: int, orbit) -> ClosedPlace:
    pts = tuple(sorted(orbit))
    return ClosedPlace(base.p, base.n, b, pts)


# ---------------------------------------------------------------------------
# divisors


class Divisor:
    """Finite formal sum of places with integer coefficients."""

    __slots__ = ("data",)

    def __init__(self, items=()):
        d = {}
        src = items.items() if isinstance(items, dict) else items
        for place, c in src:
            if c:
                d[place] = d.get(place, 0) + c
                if d[place] == 0:
                    del d[place]
        self.data = d

    @staticmethod
    def single(place, c: int = 1) -> "Divisor":
        return Divisor([(place, c)])

    def items(self):
        return sorted(self.data.items(), key=lambda kv: kv[0].sort_key())

    def support(self):
        return [p for p, _ in self.items()]

    def coeff(self, place) -> int:
        return self.data.get(place, 0)

    def degree(self) -> int:
        return sum(c * p.degree for p, c in self.data.items())

    def is_effective(self) -> bool:
        return all(c > 0 for c in self.data.values())

    def is_zero(self) -> bool:
        return not self.data

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self.data)
        for p, c in other.data.items():
            out[p] = out.get(p, 0) + c
        return Divisor(out)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + other.scale(-1)

    def __neg__(self) -> "Divisor":
        return self.scale(-1)

    def scale(self, k: int) -> "Divisor":
        return Divisor({p: k * c for p, c in self.data.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self.data == other.data

    def __hash__(self):
        return hash(tuple(self.items()))

    def key(self) -> str:
        return "+".join(f"{c}*{p.label()}" for p, c in self.items()) or "0"

    def __repr__(self) -> str:
        return f"Divisor({self.key()})"


# ---------------------------------------------------------------------------
# curve spec


class CurveSpec:
    """Validated data of a curve y^m = F(x)."""

    __slots__ = ("m", "base", "coeffs", "r", "d", "genus", "lc", "roots",
                 "_exp_cache", "_ext_coeffs", "_ext_curves")

    def __init__(self, m, base, coeffs, roots):
        self.m = m
        self.base = base
        self.coeffs = tuple(coeffs)
        self.r = len(coeffs) - 1
        self.d = math.gcd(m, self.r)
        t = (m - 1) * (self.r - 1) - (self.d - 1)
        assert t % 2 == 0, "genus formula parity"
        self.genus = t // 2
        self.lc = self.coeffs[-1]
        self.roots = roots
        self._exp_cache = {}
        self._ext_coeffs = {}
        self._ext_curves = {}

    # -- basic views -------------------------------------------------------

    @property
    def splits(self) -> bool:
        return self.roots is not None and len(self.roots) == self.r

    def is_rational_base(self) -> bool:
        return self.base is None

    def ram_place(self, i: int) -> RamPlace:
        """R_i for 1-based i, ordered by packed root value."""
        assert self.splits, "roots of F are not all rational here"
        return RamPlace(i, self.roots[i - 1])

    def inf_place(self) -> InfPlace:
        return InfPlace(self.d)

    def default_prec(self) -> int:
        return max(8, 2 * self.genus + 4)

    def name(self) -> str:
        base = "Q" if self.base is None else self.base.name()
        cs = ",".join(str(c) for c in self.coeffs)
        return f"{self.m}; [{cs}]; {base}"

    def __repr__(self) -> str:
        return f"CurveSpec({self.name()})"

    def ext_coeffs(self, ctx: gf.FieldCtx) -> tuple:
        """Coefficients of F pushed into an extension context."""
        key = (ctx.p, ctx.n)
        got = self._ext_coeffs.get(key)
        if got is None:
            emb = gf.embedding(self.base, ctx)
            got = tuple(emb.apply(c) for c in self.coeffs)
            self._ext_coeffs[key] = got
        return got

    def eval_F(self, ctx: gf.FieldCtx, x: int) -> int:
        return gf.peval(ctx, list(self.ext_coeffs(ctx)), x)


def make_curve(m: int, coeffs, base: gf.FieldCtx | None = None) -> CurveSpec:
    """Validate and build a curve y^m = F(x).

    coeffs lists F from the constant term up.  Integer entries are
    literals (reduced mod p on finite bases); FieldElem entries carry
    packed extension-field values.
    """
    assert m >= 2, "m must be at least 2"
    if base is None:
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        r = len(cs) - 1
        assert r >= 2, "deg F must be at least 2"
        if _qgcd_nontrivial(cs):
            raise NotSeparable("F has a repeated root")
        roots = tuple(sorted(_rational_roots(cs)))
        return CurveSpec(m, None, cs, roots)
    if m % base.p == 0:
        raise UnsupportedBase(f"characteristic {base.p} divides m = {m}")
    cs = []
    for c in coeffs:
        if isinstance(c, gf.FieldElem):
            assert c.ctx is base
            cs.append(c.val)
        else:
            cs.append(c % base.p)
    while cs and cs[-1] == 0:
        cs.pop()
    r = len(cs) - 1
    assert r >= 2, "deg F must be at least 2"
    der = gf.pderiv(base, cs)
    if not der:
        raise NotSeparable("F'(x) vanishes identically")
    g = gf.pgcd(base, cs, der)
    if len(g) > 1:
        raise NotSeparable("F has a repeated root")
    roots = tuple(gf.proots(base, cs))
    return CurveSpec(m, base, cs, roots)


def _qgcd_nontrivial(cs: list[Fraction]) -> bool:
    der = [cs[i] * i for i in range(1, len(cs))]
    a, b = list(cs), der
    while any(b):
        while b and b[-1] == 0:
            b.pop()
        if not b:
            break
        r = list(a)
        while len(r) >= len(b) and any(r):
            c = r[-1] / b[-1]
            off = len(r) - len(b)
            for t in range(len(b)):
                r[off + t] -= c * b[t]
            r.pop()
        while r and r[-1] == 0:
            r.pop()
        a, b = b, r
    while a and a[-1] == 0:
        a.pop()
    return len(a) > 1


def _rational_roots(cs: list[Fraction]) -> list[Fraction]:
    # clear denominators to a primitive integer polynomial
    den = 1
    for c in cs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ics = [int(c * den) for c in cs]
    g = 0
    for c in ics:
        g = math.gcd(g, c)
    if g > 1:
        ics = [c // g for c in ics]
    roots = []
    lead = ics[-1]
    # strip x | F
    low = 0
    while ics[low] == 0:
        low += 1
    if low:
        roots.append(Fraction(0))
    const = ics[low]
    for pnum in _divisors_signed(abs(const)):
        for qden in _divisors_signed(abs(lead)):
            if qden <= 0:
                continue
            cand = Fraction(pnum, qden)
            if cand in roots:
                continue
            val = Fraction(0)
            for c in reversed(ics):
                val = val * cand + c
            if val == 0:
                roots.append(cand)
    return roots


def _divisors_signed(n: int) -> list[int]:
    if n == 0:
        return []
    out = []
    for k in range(1, int(math.isqrt(n)) + 1):
        if n % k == 0:
            out.extend([k, -k, n // k, -(n // k)])
    return sorted(set(out), key=abs)


def base_change(curve: CurveSpec, ctx: gf.FieldCtx) -> CurveSpec:
    """The same curve viewed over an extension of its base field.

    Memoized per extension so local-expansion caches on the extended
    curve survive across calls.
    """
    assert curve.base is not None, "base change from Q is not supported here"
    assert ctx.p == curve.base.p and ctx.n % curve.base.n == 0
    got = curve._ext_curves.get(ctx.n)
    if got is None:
        cs = curve.ext_coeffs(ctx)
        roots = tuple(gf.proots(ctx, list(cs)))
        got = CurveSpec(curve.m, ctx, cs, roots)
        curve._ext_curves[ctx.n] = got
    return got


def splitting_extension(curve: CurveSpec, max_degree: int = 12) -> CurveSpec:
    """Smallest base extension over which F splits into linear factors."""
    assert curve.base is not None
    for s in range(1, max_degree + 1):
        try:
            cand = curve if s == 1 else base_change(
                curve, gf.field(curve.base.p, curve.base.n * s))
        except BudgetExceeded:
            break
        if cand.splits:
            return cand
    raise RequiresSplitRoots(f"F does not split within degree {max_degree}")


# ---------------------------------------------------------------------------
# function representatives: (sum_j g_j(x) y^j) / u(x)


class FunctionRep:
    """Rational function on the curve, numerator reduced to y-degree < m."""

    __slots__ = ("curve", "nums", "den", "den_roots")

    def __init__(self, curve: CurveSpec, nums, den=(1,), den_roots=None):
        assert curve.base is not None, \
            "function representatives need a finite base field"
        assert len(nums) == curve.m
        self.curve = curve
        self.nums = tuple(tuple(n) for n in nums)
        self.den = tuple(den)
        self.den_roots = tuple(den_roots) if den_roots is not None else None
        assert any(any(n) for n in self.nums), "zero function representative"
        assert any(self.den), "zero denominator"

    @staticmethod
    def constant(curve: CurveSpec, c: int) -> "FunctionRep":
        nums = [() for _ in range(curve.m)]
        nums[0] = (c,)
        return FunctionRep(curve, nums, (1,), ())

    @staticmethod
    def x_minus_root(curve: CurveSpec, i: int) -> "FunctionRep":
        """x - alpha_i as a function, 1-based i; inverted via den elsewhere."""
        assert curve.splits
        ctx = curve.base
        a = curve.roots[i - 1]
        nums = [() for _ in range(curve.m)]
        nums[0] = (ctx.neg(a), 1)
        return FunctionRep(curve, nums, (1,), ())

    @staticmethod
    def y_power_over_roots(curve: CurveSpec, j: int,
                           root_indices) -> "FunctionRep":
        """y^j / prod(x - alpha_i for i in root_indices), 1-based indices."""
        assert curve.splits
        ctx = curve.base
        nums = [() for _ in range(curve.m)]
        nums[j % curve.m] = (1,)
        rts = [curve.roots[i - 1] for i in root_indices]
        den = gf.pfrom_roots(ctx, rts)
        den_roots = [(r, 1) for r in rts]
        return FunctionRep(curve, nums, den, den_roots)

    def is_single_term(self):
        """(j, coeffs) when exactly one y-power appears, else None."""
        live = [j for j, n in enumerate(self.nums) if any(n)]
        if len(live) != 1:
            return None
        return live[0], self.nums[live[0]]

    def __mul__(self, other: "FunctionRep") -> "FunctionRep":
        assert other.curve is self.curve
        ctx = self.curve.base
        assert ctx is not None, "function arithmetic needs a finite base"
        m = self.curve.m
        F = list(self.curve.coeffs)
        nums = [[] for _ in range(m)]
        for j1, g1 in enumerate(self.nums):
            if not any(g1):
                continue
            for j2, g2 in enumerate(other.nums):
                if not any(g2):
                    continue
                prod = gf.pmul(ctx, list(g1), list(g2))
                j = j1 + j2
                if j >= m:
                    prod = gf.pmul(ctx, prod, F)
                    j -= m
                nums[j] = gf.padd(ctx, nums[j], prod)
        den = gf.pmul(ctx, list(self.den), list(other.den))
        dr = None
        if self.den_roots is not None and other.den_roots is not None:
            acc: dict[int, int] = {}
            for rt, mu in list(self.den_roots) + list(other.den_roots):
                acc[rt] = acc.get(rt, 0) + mu
            dr = sorted(acc.items())
        return FunctionRep(self.curve, nums, den, dr)

    def evaluate(self, ctx: gf.FieldCtx, x0: int, y0: int) -> int:
        """Value at a point with coordinates in ctx; poles raise."""
        emb = gf.embedding(self.curve.base, ctx)
        dv = gf.peval(ctx, [emb.apply(c) for c in self.den], x0)
        if dv == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        acc = 0
        yp = 1
        for g in self.nums:
            if any(g):
                gv = gf.peval(ctx, [emb.apply(c) for c in g], x0)
                acc = ctx.add(acc, ctx.mul(gv, yp))
            yp = ctx.mul(yp, y0)
        return ctx.div(acc, dv)

    def __repr__(self) -> str:
        terms = []
        for j, g in enumerate(self.nums):
            if any(g):
                terms.append(f"({list(g)})*y^{j}")
        return f"FunctionRep(({' + '.join(terms)}) / {list(self.den)})"


# ---------------------------------------------------------------------------
# truncated power series over a field context


def s_new(prec: int) -> list[int]:
    return [0] * prec


def s_add(ctx, a, b):
    return [ctx.add(x, y) for x, y in zip(a, b)]


def s_sub(ctx, a, b):
    return [ctx.sub(x, y) for x, y in zip(a, b)]


def s_scale(ctx, a, c):
    return [ctx.mul(x, c) for x in a]


def s_mul(ctx, a, b, prec):
    out = [0] * prec
    for i, ai in enumerate(a):
        if ai and i < prec:
            top = prec - i
            for j, bj in enumerate(b[:top]):
                if bj:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj))
    return out


def s_inv(ctx, a, prec):
    assert a[0] != 0, "series inverse needs a unit"
    out = [0] * prec
    out[0] = ctx.inv(a[0])
    known = 1
    while known < prec:
        known = min(2 * known, prec)
        # Newton step b <- b(2 - ab) at doubled precision
        ab = s_mul(ctx, a[:known], out[:known], known)
        two_minus = [ctx.sub(0, v) for v in ab]
        two_minus[0] = ctx.add(two_minus[0], 2 % ctx.p)
        nb = s_mul(ctx, out[:known], two_minus, known)
        out[:known] = nb
    return out


def s_pow(ctx, a, e, prec):
    res = [0] * prec
    res[0] = 1
    base = list(a)
    assert e >= 0
    while e:
        if e & 1:
            res = s_mul(ctx, res, base, prec)
        e >>= 1
        if e:
            base = s_mul(ctx, base, base, prec)
    return res


def s_poly(ctx, coeffs, xs, prec):
    """Evaluate a polynomial (packed coefficient list) on a series."""
    acc = [0] * prec
    for c in reversed(coeffs):
        acc = s_mul(ctx, acc, xs, prec)
        acc[0] = ctx.add(acc[0], c)
    return acc


def s_first_nonzero(a):
    for i, c in enumerate(a):
        if c:
            return i
    return None


# ---------------------------------------------------------------------------
# local expansions


class LocalExpansion:
    """Laurent data of (x, y) in a local parameter t at a place.

    x = t^x_off * (x_ser as a unit-or-higher series), same for y.
    For affine places the offsets are 0; at the infinite place (d = 1)
    they are -m and -r.
    """

    __slots__ = ("curve", "place", "ctx", "prec",
                 "x_off", "x_ser", "y_off", "y_ser")

    def __init__(self, curve, place, ctx, prec, x_off, x_ser, y_off, y_ser):
        self.curve = curve
        self.place = place
        self.ctx = ctx
        self.prec = prec
        self.x_off = x_off
        self.x_ser = x_ser
        self.y_off = y_off
        self.y_ser = y_ser

    def residual_order(self) -> int | None:
        """Order of y^m - F(x) along the expansion; None when it vanishes
        to working precision (the expected outcome)."""
        ctx = self.ctx
        m, r = self.curve.m, self.curve.r
        prec = self.prec
        cs = self.curve.ext_coeffs(ctx)
        # common Laurent offset: min(m*y_off, r*x_off + lower terms) is
        # handled by aligning everything at offset m*y_off == r*x_off*...;
        # multiply the identity by t^(-m*y_off) (a unit shift) instead.
        ym = s_pow(ctx, self.y_ser, m, prec)
        # F(x) = sum c_i t^(i*x_off) x_ser^i; align at t^(m*y_off)
        base_off = m * self.y_off
        acc = [0] * prec
        xp = [0] * prec
        xp[0] = 1
        for i, c in enumerate(cs):
            if c:
                shift = i * self.x_off - base_off
                assert shift >= 0, "unexpected offset alignment"
                for k in range(prec - shift):
                    if xp[k]:
                        acc[k + shift] = ctx.add(acc[k + shift],
                                                 ctx.mul(c, xp[k]))
            if i + 1 < len(cs):
                xp = s_mul(ctx, xp, self.x_ser, prec)
        resid = s_sub(ctx, ym, acc)
        k = s_first_nonzero(resid)
        return None if k is None else base_off + k

    def check(self) -> None:
        k = self.residual_order()
        assert k is None, f"expansion residual at order {k}"


def local_expansion(curve: CurveSpec, place, prec: int | None = None) -> LocalExpansion:
    """Exact local expansion at a place, cached per (place, prec)."""
    if curve.base is None:
        raise UnsupportedBase("local expansions need a finite base field")
    if prec is None:
        prec = curve.default_prec()
    key = (place, prec)
    got = curve._exp_cache.get(key)
    if got is None:
        got = _expand(curve, place, prec)
        curve._exp_cache[key] = got
        if len(curve._exp_cache) > 4096:
            curve._exp_cache.clear()
    return got


def _place_point(curve: CurveSpec, place):
    """(ctx, x0, y0) for an affine place, with curve coefficients visible."""
    if isinstance(place, RamPlace):
        return curve.base, place.alpha, 0
    assert isinstance(place, ClosedPlace)
    assert place.base_p == curve.base.p and place.base_n == curve.base.n
    ctx = gf.field(place.base_p, place.base_n * place.b)
    x0, y0 = place.rep()
    return ctx, x0, y0


def _expand(curve: CurveSpec, place, prec: int) -> LocalExpansion:
    if isinstance(place, InfPlace):
        if curve.d != 1:
            raise UnsupportedCollision(
                "collapsed infinite places (d > 1) have no single expansion")
        return _expand_infinity(curve, prec)
    ctx, x0, y0 = _place_point(curve, place)
    cs = list(curve.ext_coeffs(ctx))
    m = curve.m
    if y0 != 0:
        # t = x - x0; Hensel for y
        xs = [0] * prec
        xs[0] = x0
        if prec > 1:
            xs[1] = 1
        ys = [0] * prec
        ys[0] = y0
        known = 1
        while known < prec:
            known = min(2 * known, prec)
            cur = ys[:known]
            ym = s_pow(ctx, cur, m, known)
            fx = s_poly(ctx, cs, xs[:known], known)
            num = s_sub(ctx, ym, fx)
            dy = s_pow(ctx, cur, m - 1, known)
            dy = s_scale(ctx, dy, m % ctx.p)
            corr = s_mul(ctx, num, s_inv(ctx, dy, known), known)
            ys[:known] = s_sub(ctx, cur, corr)
        exp = LocalExpansion(curve, place, ctx, prec, 0, xs, 0, ys)
    else:
        # ramification point: t = y, solve F(x) = t^m by Newton
        fve = gf.peval(ctx, gf.pderiv(ctx, cs), x0)
        assert fve != 0, "F' vanishes at a ramification point"
        xs = [0] * prec
        xs[0] = x0
        tm = [0] * prec
        if m < prec:
            tm[m] = 1
        known = 1
        while known < prec:
            known = min(2 * known, prec)
            cur = xs[:known]
            fx = s_poly(ctx, cs, cur, known)
            num = s_sub(ctx, fx, tm[:known])
            der = s_poly(ctx, gf.pderiv(ctx, cs), cur, known)
            corr = s_mul(ctx, num, s_inv(ctx, der, known), known)
            xs[:known] = s_sub(ctx, cur, corr)
        ys = [0] * prec
        if prec > 1:
            ys[1] = 1
        exp = LocalExpansion(curve, place, ctx, prec, 0, xs, 0, ys)
    exp.check()
    return exp


def _expand_infinity(curve: CurveSpec, prec: int) -> LocalExpansion:
    ctx = curve.base
    m, r = curve.m, curve.r
    # a*m + b*r = -1
    g, u, v = _egcd(m, r)
    assert g == 1
    a, b = -u, -v
    assert a * m + b * r == -1
    cs = list(curve.coeffs)
    lc = curve.lc
    c0 = ctx.pow(lc, b)
    e0 = ctx.pow(lc, -a)
    c_ser = [0] * prec
    c_ser[0] = c0
    e_ser = [0] * prec
    e_ser[0] = e0
    # leading 2x2 Jacobian of (G1, G2) in (c, e); det is a unit by a*m+b*r=-1
    j11 = ctx.neg(ctx.mul((r % ctx.p), ctx.mul(lc, ctx.pow(c0, r - 1))))
    j12 = ctx.mul(m % ctx.p, ctx.pow(e0, m - 1))
    j21 = ctx.mul(a % ctx.p, ctx.mul(ctx.pow(c0, a - 1), ctx.pow(e0, b)))
    j22 = ctx.mul(b % ctx.p, ctx.mul(ctx.pow(c0, a), ctx.pow(e0, b - 1)))
    det = ctx.sub(ctx.mul(j11, j22), ctx.mul(j12, j21))
    assert det != 0, "degenerate Jacobian at infinity"
    dinv = ctx.inv(det)
    while True:
        r1 = _g1_resid(ctx, cs, m, r, c_ser, e_ser, prec)
        r2 = _g2_resid(ctx, a, b, c_ser, e_ser, prec)
        ks = [k for k in (s_first_nonzero(r1), s_first_nonzero(r2))
              if k is not None]
        if not ks:
            break
        k = min(ks)
        assert k >= 1, "leading coefficients are inconsistent"
        v1 = r1[k]
        v2 = r2[k]
        # solve J * (dc, de) = -(v1, v2)
        dc = ctx.mul(dinv, ctx.sub(ctx.mul(j12, v2), ctx.mul(j22, v1)))
        de = ctx.mul(dinv, ctx.sub(ctx.mul(j21, v1), ctx.mul(j11, v2)))
        c_ser[k] = ctx.add(c_ser[k], dc)
        e_ser[k] = ctx.add(e_ser[k], de)
    exp = LocalExpansion(curve, InfPlace(1), ctx, prec, -m, c_ser, -r, e_ser)
    exp.check()
    return exp


def _g1_resid(ctx, cs, m, r, c_ser, e_ser, prec):
    em = s_pow(ctx, e_ser, m, prec)
    acc = [0] * prec
    xp = [0] * prec
    xp[0] = 1
    for i, coeff in enumerate(cs):
        if coeff:
            shift = m * (r - i)
            for k in range(max(0, prec - shift)):
                if xp[k]:
                    acc[k + shift] = ctx.add(acc[k + shift],
                                             ctx.mul(coeff, xp[k]))
        if i + 1 < len(cs):
            xp = s_mul(ctx, xp, c_ser, prec)
    return s_sub(ctx, em, acc)


def _g2_resid(ctx, a, b, c_ser, e_ser, prec):
    ca = s_pow(ctx, c_ser, a, prec) if a >= 0 \
        else s_pow(ctx, s_inv(ctx, c_ser, prec), -a, prec)
    eb = s_pow(ctx, e_ser, b, prec) if b >= 0 \
        else s_pow(ctx, s_inv(ctx, e_ser, prec), -b, prec)
    out = s_mul(ctx, ca, eb, prec)
    out[0] = ctx.sub(out[0], 1)
    return out


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, rr = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while rr:
        q = old_r // rr
        old_r, rr = rr, old_r - q * rr
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# valuations


class _NeedMorePrecision(Exception):
    pass


def valuation(curve: CurveSpec, f: FunctionRep, place) -> int:
    """Exact valuation of f at a place (per branch at infinity)."""
    if isinstance(place, InfPlace):
        return _valuation_inf(curve, f)
    fast = _fast_val_affine(curve, f, place)
    if fast is not None:
        return fast
    prec = curve.default_prec()
    while prec <= PRECISION_CAP:
        try:
            return _series_val_affine(curve, f, place, prec)
        except _NeedMorePrecision:
            prec *= 2
    raise PrecisionExhausted(f"valuation at {place.label()} beyond cap")


def _valuation_inf(curve: CurveSpec, f: FunctionRep) -> int:
    m, r, d = curve.m, curve.r, curve.d
    vals = []
    for j, g in enumerate(f.nums):
        if any(g):
            deg = len(g) - 1
            while not g[deg]:
                deg -= 1
            # d divides both m and r, so the branch valuation is integral
            vals.append(-((deg * m + j * r) // d))
    den_deg = len(f.den) - 1
    while den_deg and not f.den[den_deg]:
        den_deg -= 1
    den_val = -((den_deg * m) // d)
    if len(vals) == 1:
        return vals[0] - den_val
    lo = min(vals)
    if vals.count(lo) > 1:
        raise UnsupportedCollision(
            "leading terms collide at infinity; need branch separation")
    return lo - den_val


def _fast_val_affine(curve, f, place):
    """Closed-form valuation for single-y-power constants over factored
    denominators; works over Q and finite bases alike."""
    single = f.is_single_term()
    if single is None or f.den_roots is None:
        return None
    j, g = single
    if len(gf.pnorm(list(g))) != 1:
        # numerator must be a nonzero constant times y^j
        return None
    if isinstance(place, RamPlace):
        x0, ram = place.alpha, True
    elif isinstance(place, ClosedPlace):
        ctxp = gf.field(place.base_p, place.base_n * place.b)
        x0, y0 = place.rep()
        ram = (y0 == 0)
        if place.b > 1:
            # roots live in the base; compare through the embedding
            emb = gf.embedding(curve.base, ctxp)
            val = j * (1 if ram else 0)
            for rt, mu in f.den_roots:
                if emb.apply(rt) == x0:
                    val -= mu * (curve.m if ram else 1)
            return val
    else:
        return None
    val = j * (1 if ram else 0)
    for rt, mu in f.den_roots:
        if rt == x0:
            val -= mu * (curve.m if ram else 1)
    return val


def _series_val_affine(curve, f, place, prec: int) -> int:
    exp = local_expansion(curve, place, prec)
    ctx = exp.ctx
    emb = gf.embedding(curve.base, ctx)
    num = [0] * prec
    yp = [0] * prec
    yp[0] = 1
    for j, g in enumerate(f.nums):
        if any(g):
            gs = s_poly(ctx, [emb.apply(c) for c in g], exp.x_ser, prec)
            num = s_add(ctx, num, s_mul(ctx, gs, yp, prec))
        if j + 1 < curve.m:
            yp = s_mul(ctx, yp, exp.y_ser, prec)
    vn = s_first_nonzero(num)
    if vn is None:
        raise _NeedMorePrecision
    den = s_poly(ctx, [emb.apply(c) for c in f.den], exp.x_ser, prec)
    vd = s_first_nonzero(den)
    if vd is None:
        raise _NeedMorePrecision
    return vn - vd


# ---------------------------------------------------------------------------
# divisors of functions


def div_x_minus_root(curve: CurveSpec, i: int) -> Divisor:
    """div(x - alpha_i) = m R_i - (m/d) inf  (closed form)."""
    assert curve.splits
    return Divisor([(curve.ram_place(i), curve.m),
                    (curve.inf_place(), -(curve.m // curve.d))])


def div_y(curve: CurveSpec) -> Divisor:
    """div(y) = sum_i R_i - (r/d) inf  (closed form)."""
    assert curve.splits
    items = [(curve.ram_place(i), 1) for i in range(1, curve.r + 1)]
    items.append((curve.inf_place(), -(curve.r // curve.d)))
    return Divisor(items)


def principal_divisor(curve: CurveSpec, f: FunctionRep,
                      scan_cap: int = 1 << 22) -> Divisor:
    """Exact divisor of a nonzero function representative.

    Affine zeros are found through the y-resultant (the norm of the
    numerator down to k[x]); each x-fiber is then resolved into places
    and measured with the local expansion engine.  Requires d = 1 for
    the infinite part unless the function is y-monomial.
    """
    if curve.base is None:
        raise UnsupportedBase("principal divisors need a finite base")
    ctx = curve.base
    xcoords: dict[tuple[int, int], set[int]] = {}

    def add_xcoord(s: int, x0: int) -> None:
        xcoords.setdefault((ctx.p, ctx.n * s), set()).add(x0)

    normpoly = _numerator_norm(curve, f)
    for s, roots in _roots_by_degree(ctx, normpoly, scan_cap).items():
        for x0 in roots:
            add_xcoord(s, x0)
    den = gf.pnorm(list(f.den))
    if len(den) > 1:
        for s, roots in _roots_by_degree(ctx, den, scan_cap).items():
            for x0 in roots:
                add_xcoord(s, x0)
    seen = set()
    for (p, ns), xs in sorted(xcoords.items()):
        sctx = gf.field(p, ns)
        for x0 in sorted(xs):
            # conjugate x-coordinates resolve to the same places
            seen.update(places_above(curve, sctx, x0, scan_cap))
    out = []
    for place in sorted(seen, key=lambda pl: pl.sort_key()):
        v = valuation(curve, f, place)
        if v:
            out.append((place, v))
    div = Divisor(out)
    inf_v = _valuation_inf(curve, f)
    if inf_v:
        div = div + Divisor.single(curve.inf_place(), inf_v)
    assert div.degree() == 0, f"divisor degree {div.degree()} != 0"
    return div


def _numerator_norm(curve: CurveSpec, f: FunctionRep) -> list[int]:
    """Norm of sum_j g_j y^j from k[x][y]/(y^m - F) down to k[x]."""
    ctx = curve.base
    m = curve.m
    F = list(curve.coeffs)
    mat = [[[] for _ in range(m)] for _ in range(m)]
    for t in range(m):
        for j, g in enumerate(f.nums):
            if not any(g):
                continue
            col = (j + t) % m
            entry = list(g)
            if j + t >= m:
                entry = gf.pmul(ctx, entry, F)
            mat[t][col] = gf.padd(ctx, mat[t][col], entry)
    det = _poly_det(ctx, mat)
    assert det, "norm of a nonzero function vanished"
    return det


def _poly_det(ctx, mat) -> list[int]:
    """Fraction-free (Bareiss) determinant of a matrix of polynomials."""
    n = len(mat)
    m = [[list(c) for c in row] for row in mat]
    sign = 1
    denom = [1]
    for k in range(n - 1):
        piv = None
        for i in range(k, n):
            if m[i][k]:
                piv = i
                break
        if piv is None:
            return []
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = gf.psub(ctx, gf.pmul(ctx, m[i][j], m[k][k]),
                              gf.pmul(ctx, m[i][k], m[k][j]))
                if num:
                    q, r = gf.pdivmod(ctx, num, denom)
                    assert not r, "Bareiss division was not exact"
                    m[i][j] = q
                else:
                    m[i][j] = []
            m[i][k] = []
        denom = m[k][k]
    det = m[n - 1][n - 1]
    if sign < 0:
        det = gf.pscale(ctx, det, ctx.neg(1))
    return det


def _roots_by_degree(ctx, poly, scan_cap: int) -> dict[int, list[int]]:
    """Distinct roots of poly grouped by extension degree over ctx."""
    poly = gf.pnorm(list(poly))
    assert poly
    out: dict[int, set[int]] = {}
    stack = [poly]
    while stack:
        cur = gf.pnorm(stack.pop())
        if len(cur) <= 1:
            continue
        der = gf.pderiv(ctx, cur)
        if not der:
            # cur = U(x^p); p-th roots are Frobenius preimages, same fields
            U = [cur[i] for i in range(0, len(cur), ctx.p)]
            for s, roots in _roots_by_degree(ctx, U, scan_cap).items():
                sctx = gf.field(ctx.p, ctx.n * s)
                pr = {sctx.frob(r, sctx.n - 1) for r in roots}
                out.setdefault(s, set()).update(pr)
            continue
        g = gf.pgcd(ctx, cur, der)
        if len(g) > 1:
            stack.append(g)
            sf, rem = gf.pdivmod(ctx, cur, g)
            assert not rem
        else:
            sf = cur
        for s, roots in _ddf_roots(ctx, sf, scan_cap).items():
            out.setdefault(s, set()).update(roots)
    return {s: sorted(v) for s, v in sorted(out.items())}


def _ddf_roots(ctx, sf, scan_cap: int) -> dict[int, list[int]]:
    """Roots of a squarefree polynomial, by distinct-degree splitting."""

    def block_roots(s: int, g) -> list[int]:
        sctx = gf.field(ctx.p, ctx.n * s)
        if sctx.order > scan_cap:
            raise BudgetExceeded(
                f"root scan over {sctx.name()} exceeds the cap")
        emb = gf.embedding(ctx, sctx)
        roots = gf.proots(sctx, [emb.apply(c) for c in g])
        assert len(roots) == len(g) - 1, "missing roots in DDF block"
        return roots

    out: dict[int, list[int]] = {}
    S = gf.pscale(ctx, sf, ctx.inv(sf[-1]))
    h = [0, 1]
    s = 0
    while len(S) > 1:
        s += 1
        if 2 * s > len(S) - 1:
            # what remains is a single irreducible factor
            out[len(S) - 1] = block_roots(len(S) - 1, S)
            break
        h = gf.ppow_mod(ctx, h, ctx.order, S)
        g = gf.pgcd(ctx, S, gf.psub(ctx, h, [0, 1]))
        if len(g) > 1:
            out[s] = block_roots(s, g)
            S, rem = gf.pdivmod(ctx, S, g)
            assert not rem
            if len(S) <= 1:
                break
            _, h = gf.pdivmod(ctx, h, S)
    return out


def places_above(curve: CurveSpec, sctx: gf.FieldCtx, x0: int,
                 scan_cap: int = 1 << 22) -> list:
    """All places of the curve over a given x-coordinate in GF(p^(n*s)).

    Points are grouped into base-Frobenius orbits and each orbit is
    descended to its minimal field of definition.
    """
    base = curve.base
    z = curve.eval_F(sctx, x0)
    m = curve.m
    pts: list[tuple[gf.FieldCtx, int, int]] = []
    if z == 0:
        pts.append((sctx, x0, 0))
    else:
        w = 1
        yctx = sctx
        while True:
            t = math.gcd(m, yctx.order - 1)
            zi = gf.embedding(sctx, yctx).apply(x0)
            zz = curve.eval_F(yctx, zi)
            if t == m and zz and yctx.dlog(zz) % m == 0:
                k = yctx.dlog(zz) // m
                y0 = yctx.exp_gen(k)
                zeta = yctx.exp_gen((yctx.order - 1) // m)
                x_in = zi
                yv = y0
                for _ in range(m):
                    pts.append((yctx, x_in, yv))
                    yv = yctx.mul(yv, zeta)
                break
            w += 1
            if sctx.p ** (sctx.n * w) > scan_cap:
                raise BudgetExceeded("fiber field exceeds the cap")
            yctx = gf.field(sctx.p, sctx.n * w)
    # group into orbits of x -> x^Q for the curve's base order Q
    e = base.n
    done = set()
    places = []
    ctx_pts = pts[0][0]
    norm_pts = [(x, y) for (_, x, y) in pts]
    for pt in norm_pts:
        if pt in done:
            continue
        orbit = []
        cur = pt
        while True:
            orbit.append(cur)
            done.add(cur)
            cur = (ctx_pts.frob(cur[0], e), ctx_pts.frob(cur[1], e))
            if cur == pt:
                break
        b = len(orbit)
        mctx = gf.field(base.p, e * b)
        if mctx.n == ctx_pts.n:
            min_orbit = orbit
        else:
            emb = gf.embedding(mctx, ctx_pts)
            min_orbit = []
            for (xx, yy) in orbit:
                px, py = emb.preimage(xx), emb.preimage(yy)
                assert px is not None and py is not None, \
                    "orbit does not descend to its minimal field"
                min_orbit.append((px, py))
        if b == 1 and min_orbit[0][1] == 0:
            # base-rational ramification points keep their R_i identity
            idx = curve.roots.index(min_orbit[0][0]) + 1
            places.append(RamPlace(idx, min_orbit[0][0]))
        else:
            places.append(closed_place(base, b, min_orbit))
    return places
