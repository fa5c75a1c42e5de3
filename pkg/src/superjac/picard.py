"""Divisor class groups of curves y^m = F(x) over finite fields.

Spaces L(D) are computed as nullspaces of explicit linear systems.  A
function with divisor bounded below by -D is written as

    f = (sum_{j<m} g_j(x) y^j) / u(x)

where u collects the x-coordinates over which poles are allowed.  The
numerator is then an honest polynomial in x and y (the coordinate ring
is integrally closed for separable F with m prime to the
characteristic), so membership reduces to degree caps at infinity plus
vanishing conditions at finitely many points, read off from exact local
expansions.  All condition points are moved into one common extension K
of the base; dimensions of L(D) are invariant under constant field
extension, so solving over K decides solvability over the base.

The class group itself is enumerated through effective divisors of
degree g: every degree-zero class is E - g*inf for such an E, classes
with l(E) = 1 have a unique representative, and the few with l(E) > 1
are merged by principality tests.  The resulting class count must match
the zeta-function order before any structure is reported; the abelian
structure is then recovered from the sizes of the kernels of
multiplication by prime powers.

Everything here assumes gcd(m, r) = 1, so there is a single rational
place at infinity.
"""

import math
from collections import Counter
from dataclasses import dataclass

from . import gf, primes
from .curves import (ClosedPlace, CurveSpec, Divisor, FunctionRep, InfPlace,
                     RamPlace, base_change, closed_place, local_expansion,
                     places_above, s_mul, valuation)
from .errors import (IncompleteEnumeration, InvariantViolation, RequiresD1,
                     UnsupportedBase)
from .zeta import count_points, lpoly_from_counts


# ---------------------------------------------------------------------------
# linear algebra over a field context


def _nullspace(ctx: gf.FieldCtx, rows, ncols: int):
    """Basis of the right kernel of the matrix, as tuples of length ncols."""
    mat = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(mat)):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = ctx.inv(mat[rank][col])
        mat[rank] = [ctx.mul(inv, v) for v in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                c = mat[i][col]
                mat[i] = [ctx.sub(a, ctx.mul(c, b))
                          for a, b in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for rowi, pc in enumerate(pivots):
            vec[pc] = ctx.neg(mat[rowi][free])
        basis.append(tuple(vec))
    return basis


# ---------------------------------------------------------------------------
# L(D) as an explicit function space


def _place_mult(curve: CurveSpec, place) -> int:
    """Valuation of x - x0 at an affine place over x0."""
    if isinstance(place, RamPlace):
        return curve.m
    return curve.m if place.rep()[1] == 0 else 1


def _min_field_orbit(base: gf.FieldCtx, xctx: gf.FieldCtx, x0: int):
    """Conjugacy orbit of an x-coordinate over its minimal field."""
    e = base.n
    bx = 1
    while xctx.frob(x0, e * bx) != x0:
        bx += 1
    mctx = gf.field(base.p, e * bx)
    if mctx.n != xctx.n:
        x0 = gf.embedding(mctx, xctx).preimage(x0)
        assert x0 is not None, "x-coordinate fails to descend"
    orb = [x0]
    cur = mctx.frob(x0, e)
    while cur != orb[0]:
        orb.append(cur)
        cur = mctx.frob(cur, e)
    return mctx, tuple(sorted(orb))


def _lift_point(ext: CurveSpec, K: gf.FieldCtx, xK: int, yK: int):
    """The degree-one place of the extended curve through a K-point."""
    if yK == 0 and xK in ext.roots:
        return ext.ram_place(ext.roots.index(xK) + 1)
    return closed_place(K, 1, [(xK, yK)])


class FunctionSpace:
    """Basis of L(D), realized over a constant field extension."""

    __slots__ = ("curve", "ext", "K", "u", "u_roots",
                 "monomials", "vectors", "place_map")

    def __init__(self, curve, ext, K, u, u_roots, monomials, vectors,
                 place_map):
        self.curve = curve
        self.ext = ext
        self.K = K
        self.u = u
        self.u_roots = u_roots
        self.monomials = monomials
        self.vectors = vectors
        self.place_map = place_map

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def function(self, k: int) -> FunctionRep:
        vec = self.vectors[k]
        nums = [[] for _ in range(self.ext.m)]
        for (j, i), v in zip(self.monomials, vec):
            if v:
                g = nums[j]
                if len(g) <= i:
                    g.extend([0] * (i + 1 - len(g)))
                g[i] = v
        return FunctionRep(self.ext, nums, self.u, self.u_roots)

    def functions(self):
        return [self.function(k) for k in range(self.dim)]


def function_space(curve: CurveSpec, bound: Divisor) -> FunctionSpace:
    """L(bound) = {f : div(f) + bound >= 0} with an explicit basis."""
    base = curve.base
    if base is None:
        raise UnsupportedBase("Riemann-Roch spaces need a finite base field")
    if curve.d != 1:
        raise RequiresD1("pole bookkeeping at infinity needs gcd(m, r) = 1")
    m, r = curve.m, curve.r

    c_inf = 0
    aff: dict = {}
    for place, c in bound.items():
        if isinstance(place, InfPlace):
            c_inf = c
        else:
            aff[place] = c

    # group the affine support into x-coordinate orbits and fetch fibers
    orbits: dict = {}
    for place in aff:
        if isinstance(place, RamPlace):
            xctx, x0 = base, place.alpha
        else:
            xctx = gf.field(place.base_p, place.base_n * place.b)
            x0 = place.rep()[0]
        mctx, orb = _min_field_orbit(base, xctx, x0)
        key = (mctx.n, orb)
        ob = orbits.get(key)
        if ob is None:
            ob = {"fiber": places_above(curve, mctx, orb[0]),
                  "bx": len(orb), "supp": [], "e": 0}
            orbits[key] = ob
        assert place in ob["fiber"], "support place missing from its fiber"
        ob["supp"].append(place)

    ext_deg = 1
    for ob in orbits.values():
        e = 0
        for P in ob["fiber"]:
            c = aff.get(P, 0)
            if c > 0:
                e = max(e, -(-c // _place_mult(curve, P)))
        ob["e"] = e
        for P in ob["fiber"]:
            t = e * _place_mult(curve, P) - aff.get(P, 0)
            if t > 0:
                ext_deg = math.lcm(ext_deg, P.degree)
        for P in ob["supp"]:
            # keep every support place split so valuations stay checkable
            ext_deg = math.lcm(ext_deg, P.degree)

    if base.p ** (base.n * ext_deg) > gf.MAX_TABLE_CARD:
        raise UnsupportedBase(
            f"splitting field GF({base.p}^{base.n * ext_deg}) "
            "exceeds the table cap")
    K = gf.field(base.p, base.n * ext_deg)
    ext = curve if ext_deg == 1 else base_change(curve, K)
    emb_base = gf.embedding(base, K)

    # move every orbit into K; all coordinate transport goes through
    # base-compatible embeddings so data from different storage fields
    # lands on one consistent set of K-points
    u_roots: list[tuple[int, int]] = []
    place_map: dict = {}
    cond: list[tuple[object, int]] = []   # (place of ext, order to kill)
    for ob in orbits.values():
        affK: dict = {}
        seed = None
        for P in ob["supp"]:
            if isinstance(P, RamPlace):
                pts = [(P.alpha, 0)]
                emb = emb_base
            else:
                ctxp = gf.field(P.base_p, P.base_n * P.b)
                pts = P.pts
                emb = gf.compatible_embedding(base, ctxp, K)
            for (px, py) in pts:
                q = _lift_point(ext, K, emb.apply(px), emb.apply(py))
                assert q not in affK, "embedded support points collide"
                affK[q] = aff[P]
                place_map[P] = q
            if seed is None:
                seed = emb.apply(pts[0][0])
        xs = [seed]
        cur = K.frob(seed, base.n)
        while cur != seed:
            xs.append(cur)
            cur = K.frob(cur, base.n)
        assert len(xs) == ob["bx"], "x-orbit length changed under transport"
        e = ob["e"]
        if e > 0:
            u_roots.extend((xk, e) for xk in sorted(xs))
            fiberK = []
            for xk in xs:
                fiberK.extend(places_above(ext, K, xk))
            assert all(q.degree == 1 for q in fiberK), \
                "condition place fails to split over K"
            assert set(affK) <= set(fiberK), \
                "support points land outside their fiber"
            for q in fiberK:
                t = e * _place_mult(ext, q) - affK.get(q, 0)
                if t > 0:
                    cond.append((q, t))
        else:
            for q, c in affK.items():
                if c < 0:
                    cond.append((q, -c))

    # degree caps at the single infinite place: v_inf(x) = -m and the m
    # leading orders -(m deg g_j + r j) are pairwise distinct, so each
    # monomial must clear the bound on its own
    u = [1]
    for rt, e in u_roots:
        lin = [K.neg(rt), 1]
        for _ in range(e):
            u = gf.pmul(K, u, lin)
    deg_u = len(u) - 1
    mcap = m * deg_u + c_inf
    monomials = [(j, i) for j in range(m) if mcap - r * j >= 0
                 for i in range((mcap - r * j) // m + 1)]

    rows = []
    if monomials:
        max_i = max(i for _, i in monomials)
        for q, t in cond:
            le = local_expansion(ext, q, t)
            xs_pow = [[0] * t for _ in range(max_i + 1)]
            xs_pow[0][0] = 1
            for i in range(1, max_i + 1):
                xs_pow[i] = s_mul(K, xs_pow[i - 1], le.x_ser, t)
            ys_pow = [[0] * t for _ in range(m)]
            ys_pow[0][0] = 1
            for j in range(1, m):
                ys_pow[j] = s_mul(K, ys_pow[j - 1], le.y_ser, t)
            cols = [s_mul(K, xs_pow[i], ys_pow[j], t) for j, i in monomials]
            for o in range(t):
                rows.append([cs[o] for cs in cols])

    vectors = _nullspace(K, rows, len(monomials))

    degb = bound.degree()
    g = curve.genus
    dim = len(vectors)
    if dim < max(0, degb + 1 - g) or (degb < 0 and dim > 0) or \
            (degb > 2 * g - 2 and dim != degb + 1 - g):
        raise InvariantViolation(
            f"l(D) = {dim} for deg D = {degb}, genus {g}")
    return FunctionSpace(curve, ext, K, tuple(u), tuple(u_roots),
                         tuple(monomials), vectors, place_map)


def ell(curve: CurveSpec, bound: Divisor) -> int:
    """Dimension of L(bound) over the base field."""
    return function_space(curve, bound).dim


def is_principal(curve: CurveSpec, D: Divisor, verify: bool = True) -> bool:
    """Whether D is the divisor of a function.

    Solves for f with div(f) >= D; in degree zero that forces equality.
    The found function's valuations are re-checked on the support
    through the independent valuation engine unless verify is False.
    """
    if curve.base is None:
        raise UnsupportedBase("principality tests need a finite base field")
    if D.degree() != 0:
        return False
    if D.is_zero():
        return True
    sp = function_space(curve, -D)
    if not sp.vectors:
        return False
    if len(sp.vectors) != 1:
        raise InvariantViolation("degree-zero divisor with l > 1")
    if verify:
        f = sp.function(0)
        for place, c in D.items():
            if isinstance(place, InfPlace):
                got = valuation(sp.ext, f, sp.ext.inf_place())
            else:
                got = valuation(sp.ext, f, sp.place_map[place])
            if got != c:
                raise InvariantViolation(
                    f"witness valuation {got} != {c} at {place.label()}")
    return True


# ---------------------------------------------------------------------------
# place enumeration


def enumerate_places(curve: CurveSpec, max_deg: int, check: bool = True):
    """All places of degree <= max_deg, the infinite place included.

    Runs over x-coordinates of each exact degree, decides arithmetically
    whether the fiber carries any place small enough, and only then
    resolves it.  The resulting degree counts are checked against point
    counts over the matching extensions.
    """
    base = curve.base
    if base is None:
        raise UnsupportedBase("place enumeration needs a finite base field")
    if curve.d != 1:
        raise RequiresD1("a single infinite place needs gcd(m, r) = 1")
    assert max_deg >= 1
    m = curve.m
    out = [curve.inf_place()]
    for w in range(1, max_deg + 1):
        if base.p ** (base.n * w) > gf.MAX_TABLE_CARD:
            raise UnsupportedBase(f"degree-{w} scan exceeds the table cap")
        xctx = gf.field(base.p, base.n * w)
        for x0 in xctx.elements():
            # keep only orbit-minimal coordinates of exact degree w
            cur = xctx.frob(x0, base.n)
            size = 1
            while cur != x0:
                if cur < x0:
                    size = 0
                    break
                size += 1
                cur = xctx.frob(cur, base.n)
            if size != w:
                continue
            z = curve.eval_F(xctx, x0)
            if z:
                # smallest extension of the x-field carrying a y-solution:
                # z must be an m-th power there
                Q = xctx.order
                dl = xctx.dlog(z)
                lift = False
                for t in range(1, max_deg // w + 1):
                    qt = Q ** t - 1
                    if (dl * (qt // (Q - 1))) % math.gcd(m, qt) == 0:
                        lift = True
                        break
                if not lift:
                    continue
            for P in places_above(curve, xctx, x0):
                if P.degree <= max_deg:
                    out.append(P)
    if check:
        degs = Counter(P.degree for P in out)
        for n in range(1, max_deg + 1):
            total = sum(b * degs[b] for b in range(1, n + 1) if n % b == 0)
            expect = count_points(curve, n)
            if total != expect:
                raise IncompleteEnumeration(
                    f"{total} points from places of degree | {n}, "
                    f"expected {expect}")
    return sorted(out, key=lambda P: (P.degree, P.sort_key()))


def effective_divisors(places, deg: int):
    """Every effective divisor of exact degree supported on the places."""
    pl = sorted(places, key=lambda P: (P.degree, P.sort_key()))
    out = []
    acc: list = []

    def rec(i: int, remaining: int) -> None:
        if remaining == 0:
            out.append(Divisor(acc))
            return
        if i == len(pl):
            return
        dp = pl[i].degree
        for k in range(remaining // dp, 0, -1):
            acc.append((pl[i], k))
            rec(i + 1, remaining - k * dp)
            acc.pop()
        rec(i + 1, remaining)

    rec(0, deg)
    return out


# ---------------------------------------------------------------------------
# class group structure


@dataclass(frozen=True)
class PicardGroup:
    """Degree-zero class group over the base field."""

    order: int
    invariant_factors: tuple[int, ...]
    special_classes: int
    lpoly_coeffs: tuple[int, ...]
    class_reps: tuple

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "invariant_factors": list(self.invariant_factors),
            "special_classes": self.special_classes,
            "lpoly": list(self.lpoly_coeffs),
        }


def _prime_exponents(curve, reps, ln: int, a: int):
    """Exponent partition of the l-part from kernel sizes of l^i."""
    lpart = ln ** a
    killed = [False] * len(reps)
    kernel_logs = []
    i = 1
    while True:
        le = ln ** i
        for idx, D in enumerate(reps):
            if not killed[idx] and is_principal(curve, D.scale(le)):
                killed[idx] = True
        ki = sum(killed)
        v, t = 0, ki
        while t % ln == 0:
            t //= ln
            v += 1
        if t != 1:
            raise InvariantViolation(f"kernel of {ln}^{i} has size {ki}")
        kernel_logs.append(v)
        if ki == lpart:
            break
        i += 1
        if i > a:
            raise InvariantViolation(
                f"multiplication by {ln}^{a} fails to kill the {ln}-part")
    counts = []
    prev = 0
    for v in kernel_logs:
        counts.append(v - prev)
        prev = v
    if counts != sorted(counts, reverse=True):
        raise InvariantViolation("kernel growth is not a partition")
    exps = []
    for i0, c in enumerate(counts):
        nxt = counts[i0 + 1] if i0 + 1 < len(counts) else 0
        exps.extend([i0 + 1] * (c - nxt))
    return exps


def _merge_invariants(per_prime: dict) -> tuple[int, ...]:
    """Invariant factor chain from per-prime exponent multisets."""
    if not per_prime:
        return ()
    width = max(len(v) for v in per_prime.values())
    factors = []
    for t in range(width):
        dt = 1
        for ln, exps in per_prime.items():
            if t < len(exps):
                dt *= ln ** exps[t]
        factors.append(dt)
    factors.sort()
    for a, b in zip(factors, factors[1:]):
        assert b % a == 0, "invariant factors fail the divisibility chain"
    return tuple(factors)


def picard_group(curve: CurveSpec, budget: int | None = None) -> PicardGroup:
    """Order and abelian structure of the degree-zero class group."""
    base = curve.base
    if base is None:
        raise UnsupportedBase("class groups are computed over finite fields")
    if curve.d != 1:
        raise RequiresD1("class enumeration needs a single infinite place")
    g = curve.genus
    if budget is None:
        counts = [count_points(curve, n) for n in range(1, g + 1)]
    else:
        counts = [count_points(curve, n, budget) for n in range(1, g + 1)]
    P = lpoly_from_counts(base.order, counts, g)
    order = P.evaluate(1)

    places = enumerate_places(curve, g)
    ginf = Divisor.single(curve.inf_place(), g)
    plain = []
    special = []
    for E in effective_divisors(places, g):
        if ell(curve, E) == 1:
            plain.append(E)
        else:
            special.append(E)
    special_reps: list = []
    for E in special:
        for R in special_reps:
            if is_principal(curve, E - R):
                break
        else:
            special_reps.append(E)
    found = len(plain) + len(special_reps)
    if found != order:
        raise IncompleteEnumeration(
            f"{found} divisor classes enumerated, zeta order is {order}")

    reps = tuple(E - ginf for E in plain + special_reps)
    per_prime = {}
    for ln, a in sorted(primes.factorize(order).items()):
        exps = _prime_exponents(curve, reps, ln, a)
        per_prime[ln] = sorted(exps, reverse=True)
    inv = _merge_invariants(per_prime)
    total = 1
    for dfac in inv:
        total *= dfac
    assert total == order, "invariant factors do not multiply to the order"
    return PicardGroup(order, inv, len(special_reps), P.coeffs, reps)


# ---------------------------------------------------------------------------
# group structure across the distinguished extension


@dataclass(frozen=True)
class ConjectureReport:
    """Comparison of class groups over GF(p) and GF(p^k), k = ord_q(p)."""

    p: int
    q: int
    k: int
    base_factors: tuple[int, ...]
    ext_factors: tuple[int, ...]
    expected_factors: tuple[int, ...]
    verdict: str

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "k": self.k,
            "base_factors": list(self.base_factors),
            "ext_factors": list(self.ext_factors),
            "expected_factors": list(self.expected_factors),
            "verdict": self.verdict,
        }


def conjecture_check(curve: CurveSpec,
                     budget: int | None = None) -> ConjectureReport:
    """Compare J(GF(p^k)) with the k-th power of J(GF(p)) as groups.

    For y^q = F(x) with q prime not dividing deg F, the group orders
    already satisfy |J(GF(p^k))| = |J(GF(p))|^k; this tests the stronger
    statement that the groups are isomorphic.  The verdict is only ever
    "consistent" or "inconsistent": a finite computation cannot prove
    the general statement.
    """
    base = curve.base
    if base is None or base.n != 1:
        raise UnsupportedBase("the comparison starts from a prime field")
    q = curve.m
    if not primes.is_prime(q) or curve.r % q == 0:
        raise InvariantViolation(
            "the comparison needs y^q = F(x), q prime, q not dividing deg F")
    k = primes.multiplicative_order(base.p, q)
    g1 = picard_group(curve, budget)
    gk = picard_group(base_change(curve, gf.field(base.p, k)), budget)
    expected = tuple(sorted(d for d in g1.invariant_factors
                            for _ in range(k)))
    verdict = "consistent" if gk.invariant_factors == expected \
        else "inconsistent"
    return ConjectureReport(base.p, q, k, g1.invariant_factors,
                            gk.invariant_factors, expected, verdict)
