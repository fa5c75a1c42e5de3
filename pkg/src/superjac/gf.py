"""Finite fields with packed-integer elements and discrete-log tables.

An element of GF(p^n) = F_p[X]/(f) is stored as the integer
sum(c_i * p**i) for its coefficient vector (c_0, ..., c_{n-1}).  Constants
pack to themselves, so the prime subfield sits inside every extension as
the identity on 0..p-1.  Extension contexts carry exp/log tables for a
fixed generator g plus a Zech table (1 + g^k = g^zech[k]), making every
field operation a couple of list lookups.  Prime-field contexts skip the
tables and work directly modulo p.

Deterministic choices, fixed once per (p, n):
  * defining polynomial: first monic irreducible of degree n, ordered by
    packed value of the non-leading coefficients, lowest first;
  * generator: first nonzero packed value of full multiplicative order,
    the order being verified against the factorization of p^n - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import primes
from .errors import BudgetExceeded

# Largest extension field for which full tables are built.  Prime fields
# are exempt (they need no tables for arithmetic).
MAX_TABLE_CARD = 1 << 22


# ---------------------------------------------------------------------------
# coefficient-list arithmetic mod p, used only while building a context


def _ldeg(a: list[int]) -> int:
    d = len(a) - 1
    while d >= 0 and a[d] == 0:
        d -= 1
    return d


def _lmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    n = _ldeg(f)
    out = [0] * max(len(a) + len(b) - 1, n)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    for d in range(len(out) - 1, n - 1, -1):
        c = out[d] % p
        if c:
            for t in range(n):
                out[d - n + t] -= c * f[t]
        out[d] = 0
    res = [out[t] % p for t in range(n)]
    return res


def _lpowmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    n = _ldeg(f)
    res = [0] * n
    res[0] = 1
    base = [x % p for x in a]
    while e:
        if e & 1:
            res = _lmulmod(res, base, f, p)
        base = _lmulmod(base, base, f, p)
        e >>= 1
    return res


def _lgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[: _ldeg(a) + 1]
    b = b[: _ldeg(b) + 1]
    while b:
        # a mod b with b made monic on the fly
        inv = pow(b[-1], p - 2, p)
        bm = [(x * inv) % p for x in b]
        r = [x % p for x in a]
        while len(r) >= len(bm) and any(r):
            c = r[-1]
            if c:
                off = len(r) - len(bm)
                for t in range(len(bm)):
                    r[off + t] = (r[off + t] - c * bm[t]) % p
            r.pop()
        while r and r[-1] == 0:
            r.pop()
        a, b = b, r
    return a


def _is_irreducible(f: list[int], p: int, n: int) -> bool:
    # f monic of degree n: irreducible iff X^(p^n) = X mod f and for every
    # prime l | n, gcd(X^(p^(n/l)) - X, f) is constant.
    x = [0, 1]
    xq = x
    powers = {}
    for i in range(1, n + 1):
        xq = _lpowmod(xq, p, f, p)
        powers[i] = xq
    top = powers[n][:]
    top[1] = (top[1] - 1) % p
    if _ldeg(top) >= 0:
        return False
    for ell in primes.factorize(n):
        sub = powers[n // ell][:]
        sub[1] = (sub[1] - 1) % p
        g = _lgcd(f, sub, p)
        if _ldeg(g) > 0:
            return False
    return True


def _find_defpoly(p: int, n: int) -> tuple[int, ...]:
    for v in range(p ** n):
        coeffs = []
        w = v
        for _ in range(n):
            coeffs.append(w % p)
            w //= p
        f = coeffs + [1]
        if _is_irreducible(f, p, n):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


# ---------------------------------------------------------------------------


class FieldCtx:
    """Arithmetic context for GF(p^n) on packed-integer elements."""

    __slots__ = (
        "p", "n", "order", "defpoly", "gen",
        "_exp", "_log", "_zech", "_m1log", "_emb_cache",
    )

    def __init__(self, p: int, n: int = 1):
        assert primes.is_prime(p), f"{p} is not prime"
        assert n >= 1
        self.p = p
        self.n = n
        self.order = p ** n
        self._emb_cache: dict = {}
        if n == 1:
            self.defpoly = (0, 1)
            self.gen = primes.primitive_root(p)
            self._exp = None
            self._log = None
            self._zech = None
            self._m1log = None
            return
        if self.order > MAX_TABLE_CARD:
            raise BudgetExceeded(
                f"GF({p}^{n}) exceeds the table cap {MAX_TABLE_CARD}")
        self.defpoly = _find_defpoly(p, n)
        self.gen = self._find_generator()
        self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _find_generator(self) -> int:
        p, n, f = self.p, self.n, list(self.defpoly)
        qm1 = self.order - 1
        fac = primes.factorize(qm1)
        v = 2
        while v < self.order:
            coeffs = self.coeffs(v)
            elem = list(coeffs)
            ok = True
            for ell in fac:
                r = _lpowmod(elem, qm1 // ell, f, p)
                if _ldeg(r) == 0 and r[0] == 1:
                    ok = False
                    break
            if ok:
                return v
            v += 1
        raise AssertionError("no generator found")

    def _build_tables(self) -> None:
        p, n, Q = self.p, self.n, self.order
        if p == 2:
            exp, log = self._chain_gf2()
        else:
            exp, log = self._chain_digits()
        assert all(v >= 0 for v in log[1:]), "exp chain did not cover the units"
        self._exp = exp
        self._log = log
        # zech[k] = log(1 + g^k), -1 when 1 + g^k = 0
        zech = [-1] * (Q - 1)
        pm1 = p - 1
        for k in range(Q - 1):
            e = exp[k]
            e2 = e + 1 if e % p != pm1 else e - pm1
            if e2:
                zech[k] = log[e2]
        self._zech = zech
        self._m1log = log[p - 1] if p > 2 else 0

    def _chain_gf2(self) -> tuple[list[int], list[int]]:
        Q, n = self.order, self.n
        fmask = 0
        for i, c in enumerate(self.defpoly):
            if c:
                fmask |= 1 << i
        gbits = [i for i in range(self.gen.bit_length()) if self.gen >> i & 1]
        exp = [0] * (Q - 1)
        log = [-1] * Q
        cur = 1
        for k in range(Q - 1):
            exp[k] = cur
            log[cur] = k
            nxt = 0
            for b in gbits:
                nxt ^= cur << b
            for d in range(nxt.bit_length() - 1, n - 1, -1):
                if nxt >> d & 1:
                    nxt ^= fmask << (d - n)
            cur = nxt
        assert cur == 1, "generator order mismatch"
        return exp, log

    def _chain_digits(self) -> tuple[list[int], list[int]]:
        p, n, Q = self.p, self.n, self.order
        fneg = [(-c) % p for c in self.defpoly[:n]]
        gdig = list(self.coeffs(self.gen))
        while gdig and gdig[-1] == 0:
            gdig.pop()
        gl = len(gdig)
        width = n + gl - 1
        exp = [0] * (Q - 1)
        log = [-1] * Q
        cur = [0] * n
        cur[0] = 1
        rng_n = range(n)
        for k in range(Q - 1):
            v = 0
            for i in range(n - 1, -1, -1):
                v = v * p + cur[i]
            exp[k] = v
            log[v] = k
            out = [0] * width
            for i in rng_n:
                ci = cur[i]
                if ci:
                    for j in range(gl):
                        out[i + j] += ci * gdig[j]
            for d in range(width - 1, n - 1, -1):
                c = out[d] % p
                if c:
                    base = d - n
                    for t in rng_n:
                        ft = fneg[t]
                        if ft:
                            out[base + t] += c * ft
            cur = [out[t] % p for t in rng_n]
        assert cur[0] == 1 and not any(cur[1:]), "generator order mismatch"
        return exp, log

    def _prime_tables(self) -> None:
        # lazy exp/log for a prime field, needed only for discrete logs
        if self._exp is not None:
            return
        p = self.p
        if p > MAX_TABLE_CARD:
            raise BudgetExceeded(f"discrete-log table for GF({p}) too large")
        exp = [0] * max(p - 1, 1)
        log = [-1] * p
        cur = 1
        for k in range(p - 1):
            exp[k] = cur
            log[cur] = k
            cur = cur * self.gen % p
        self._exp = exp
        self._log = log

    # -- element views ---------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, cs) -> int:
        v = 0
        for c in reversed(list(cs)):
            v = v * self.p + c % self.p
        return v

    def elements(self) -> range:
        return range(self.order)

    def units(self) -> range:
        return range(1, self.order)

    # -- arithmetic ------------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        log = self._log
        la, lb = log[a], log[b]
        z = self._zech[(lb - la) % (self.order - 1)]
        if z < 0:
            return 0
        return self._exp[(la + z) % (self.order - 1)]

    def neg(self, a: int) -> int:
        if self.n == 1:
            return (-a) % self.p
        if a == 0 or self.p == 2:
            return a
        return self._exp[(self._log[a] + self._m1log) % (self.order - 1)]

    def sub(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("field inverse of 0")
        if self.n == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[-self._log[a] % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of 0")
            return 0
        if self.n == 1:
            if self.p == 2:
                return a
            return pow(a, e % (self.p - 1), self.p)
        return self._exp[self._log[a] * e % (self.order - 1)]

    def dlog(self, a: int) -> int:
        """Discrete log of a nonzero element w.r.t. the stored generator."""
        if a == 0:
            raise ZeroDivisionError("discrete log of 0")
        if self.n == 1:
            self._prime_tables()
        return self._log[a]

    def exp_gen(self, k: int) -> int:
        """Generator power g^k."""
        if self.order == 2:
            return 1
        if self.n == 1:
            self._prime_tables()
        return self._exp[k % (self.order - 1)]

    def frob(self, a: int, t: int = 1) -> int:
        """Frobenius x -> x^(p^t)."""
        return self.pow(a, pow(self.p, t, self.order - 1) if self.order > 2 else 1)

    def trace(self, a: int) -> int:
        """Absolute trace down to the prime field, returned as an integer."""
        if self.n == 1:
            return a
        acc = a
        t = a
        for _ in range(self.n - 1):
            t = self.frob(t)
            acc = self.add(acc, t)
        assert acc < self.p, "trace left the prime field"
        return acc

    def norm(self, a: int) -> int:
        """Absolute norm down to the prime field, returned as an integer."""
        if self.n == 1:
            return a
        if a == 0:
            return 0
        v = self._exp[self._log[a] * ((self.order - 1) // (self.p - 1))
                      % (self.order - 1)]
        assert v < self.p, "norm left the prime field"
        return v

    def rel_trace(self, a: int, sub_n: int) -> int:
        """Trace to the subfield of degree sub_n, as an element of self."""
        assert self.n % sub_n == 0
        acc = a
        t = a
        for _ in range(self.n // sub_n - 1):
            t = self.frob(t, sub_n)
            acc = self.add(acc, t)
        return acc

    def rel_norm(self, a: int, sub_n: int) -> int:
        assert self.n % sub_n == 0
        acc = a
        t = a
        for _ in range(self.n // sub_n - 1):
            t = self.frob(t, sub_n)
            acc = self.mul(acc, t)
        return acc

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"

    def name(self) -> str:
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"


_CTX_CACHE: dict[tuple[int, int], FieldCtx] = {}


def field(p: int, n: int = 1) -> FieldCtx:
    """Memoized context constructor."""
    key = (p, n)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = FieldCtx(p, n)
        _CTX_CACHE[key] = ctx
    return ctx


def field_of_order(q: int) -> FieldCtx:
    fac = primes.factorize(q)
    assert len(fac) == 1, f"{q} is not a prime power"
    [(p, n)] = fac.items()
    return field(p, n)


# ---------------------------------------------------------------------------


class Embedding:
    """Field embedding GF(p^s) -> GF(p^n) for s | n.

    The image of the source polynomial generator X is the packed-smallest
    root of the source defining polynomial in the destination, so repeated
    runs pick the same embedding.
    """

    __slots__ = ("src", "dst", "img_x", "_fwd", "_bwd")

    def __init__(self, src: FieldCtx, dst: FieldCtx, img_x: int | None = None):
        assert src.p == dst.p and dst.n % src.n == 0
        self.src = src
        self.dst = dst
        if src.n == 1:
            self.img_x = None
            self._fwd = None
            self._bwd = None
            return
        img = img_x
        if img is not None:
            acc = 0
            for c in reversed(src.defpoly):
                acc = dst.add(dst.mul(acc, img), c)
            assert acc == 0, "prescribed image is not a defpoly root"
            self._build_tables(img)
            return
        for z in dst.elements():
            acc = 0
            for c in reversed(src.defpoly):
                acc = dst.add(dst.mul(acc, z), c)
            if acc == 0:
                img = z
                break
        assert img is not None, "defining polynomial has no root downstream"
        self._build_tables(img)

    def _build_tables(self, img: int) -> None:
        src, dst = self.src, self.dst
        self.img_x = img
        fwd = [0] * src.order
        for a in src.elements():
            acc = 0
            for c in reversed(src.coeffs(a)):
                acc = dst.add(dst.mul(acc, img), c)
            fwd[a] = acc
        self._fwd = fwd
        self._bwd = {v: a for a, v in enumerate(fwd)}

    def apply(self, a: int) -> int:
        if self.src.n == 1:
            return a
        return self._fwd[a]

    def preimage(self, b: int):
        """Packed source element mapping to b, or None if b is outside."""
        if self.src.n == 1:
            return b if b < self.src.p else None
        return self._bwd.get(b)


def embedding(src: FieldCtx, dst: FieldCtx) -> Embedding:
    key = (src.p, src.n, dst.n)
    emb = dst._emb_cache.get(key)
    if emb is None:
        emb = Embedding(src, dst)
        dst._emb_cache[key] = emb
    return emb


def compatible_embedding(base: FieldCtx, src: FieldCtx,
                         dst: FieldCtx) -> Embedding:
    """Embedding src -> dst whose restriction to base is the canonical one.

    Canonical embeddings of two different sources need not agree on a
    shared subfield larger than the prime field; towers that mix sources
    over a common base must pin the restriction explicitly.
    """
    assert base.p == src.p == dst.p
    assert src.n % base.n == 0 and dst.n % src.n == 0
    if base.n == 1 or src.n == base.n or src.n == dst.n:
        # the canonical pick is already determined on base (identity when
        # src == dst: the generator X is the packed-smallest defpoly root)
        return embedding(src, dst)
    key = ("compat", base.n, src.n, dst.n)
    emb = dst._emb_cache.get(key)
    if emb is not None:
        return emb
    gen_src = embedding(base, src).apply(base.p)
    want = embedding(base, dst).apply(base.p)
    for z in dst.elements():
        acc = 0
        for c in reversed(src.defpoly):
            acc = dst.add(dst.mul(acc, z), c)
        if acc:
            continue
        acc = 0
        for c in reversed(src.coeffs(gen_src)):
            acc = dst.add(dst.mul(acc, z), c)
        if acc == want:
            emb = Embedding(src, dst, img_x=z)
            dst._emb_cache[key] = emb
            return emb
    raise AssertionError("no base-compatible embedding exists")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldElem:
    """Convenience wrapper pairing a packed value with its context."""

    ctx: FieldCtx
    val: int

    def _lift(self, other) -> int:
        if isinstance(other, FieldElem):
            assert other.ctx is self.ctx, "mixed field contexts"
            return other.val
        return other % self.ctx.p

    def __add__(self, other):
        return FieldElem(self.ctx, self.ctx.add(self.val, self._lift(other)))

    def __sub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self.val, self._lift(other)))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.val))

    def __mul__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.val, self._lift(other)))

    def __truediv__(self, other):
        return FieldElem(self.ctx, self.ctx.div(self.val, self._lift(other)))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.pow(self.val, e))

    __radd__ = __add__
    __rmul__ = __mul__

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.ctx.coeffs(self.val)

    def __repr__(self) -> str:
        return f"{self.ctx.name()}:{self.val}"


# ---------------------------------------------------------------------------
# polynomials over a context: coefficient lists of packed values, index = degree


def pnorm(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(ctx: FieldCtx, a, b) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = ctx.add(out[i], c)
    return pnorm(out)


def psub(ctx: FieldCtx, a, b) -> list[int]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = ctx.sub(out[i], c)
    return pnorm(out)


def pscale(ctx: FieldCtx, a, c: int) -> list[int]:
    return pnorm([ctx.mul(x, c) for x in a])


def pmul(ctx: FieldCtx, a, b) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj))
    return pnorm(out)


def pdivmod(ctx: FieldCtx, a, b) -> tuple[list[int], list[int]]:
    b = pnorm(list(b))
    assert b, "polynomial division by zero"
    r = list(a)
    q = [0] * max(0, len(r) - len(b) + 1)
    inv_lead = ctx.inv(b[-1])
    while len(r) >= len(b):
        c = ctx.mul(r[-1], inv_lead)
        if c:
            off = len(r) - len(b)
            q[off] = c
            for t in range(len(b)):
                r[off + t] = ctx.sub(r[off + t], ctx.mul(c, b[t]))
        r.pop()
    return pnorm(q), pnorm(r)


def pgcd(ctx: FieldCtx, a, b) -> list[int]:
    a, b = pnorm(list(a)), pnorm(list(b))
    while b:
        _, r = pdivmod(ctx, a, b)
        a, b = b, r
    if a:
        a = pscale(ctx, a, ctx.inv(a[-1]))
    return a


def peval(ctx: FieldCtx, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


def pderiv(ctx: FieldCtx, a) -> list[int]:
    out = []
    for i in range(1, len(a)):
        out.append(ctx.mul(a[i], i % ctx.p))
    return pnorm(out)


def pfrom_roots(ctx: FieldCtx, roots) -> list[int]:
    out = [1]
    for r in roots:
        out = pmul(ctx, out, [ctx.neg(r), 1])
    return out


def ppow_mod(ctx: FieldCtx, a, e: int, mod) -> list[int]:
    res = pdivmod(ctx, [1], mod)[1]
    base = pdivmod(ctx, list(a), mod)[1]
    while e:
        if e & 1:
            res = pdivmod(ctx, pmul(ctx, res, base), mod)[1]
        base = pdivmod(ctx, pmul(ctx, base, base), mod)[1]
        e >>= 1
    return res


def proots(ctx: FieldCtx, a) -> list[int]:
    """All roots in the context, by scanning; fine at desk scale."""
    a = pnorm(list(a))
    assert a, "zero polynomial has every root"
    out = [x for x in ctx.elements() if peval(ctx, a, x) == 0]
    return out


def pmap(emb: Embedding, a) -> list[int]:
    return [emb.apply(c) for c in a]
