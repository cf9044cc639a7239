"""Truncation-tracked formal Laurent series in one local variable.

A series carries a sparse exponent map, a validity window ``[lo, hi]`` and
a differential weight ``w`` so that the object represents ``f(z) * dz**w``.
``lo`` is an exact lower bound: every exponent below it has coefficient
exactly zero.  ``hi`` is the truncation ceiling (``None`` = the series is
exact, all omitted coefficients are genuinely zero).  Operations shrink
windows conservatively; asking for a coefficient above ``hi`` raises
``PrecisionError`` instead of returning a silently wrong value.
"""

from __future__ import annotations

from .errors import PrecisionError, ResidueObstructionError
from .scalars import ScalarField

FUNCTION = 0
FORM = 1


def _min_hi(*values):
    finite = [v for v in values if v is not None]
    return min(finite) if finite else None


class LaurentSeries:
    __slots__ = ("field", "coeffs", "lo", "hi", "weight")

    def __init__(self, field: ScalarField, coeffs=None, lo=None, hi=None,
                 weight: int = FUNCTION):
        self.field = field
        cs = {}
        if coeffs:
            for e, c in coeffs.items():
                c = field.coerce(c)
                if c:
                    cs[int(e)] = c
        if cs:
            # bottoms are exact throughout the package: tighten to support
            lo = min(cs)
            if hi is not None and max(cs) > hi:
                raise ValueError("stored exponent above window ceiling")
        elif lo is None:
            lo = 0
        self.coeffs = cs
        self.lo = lo
        self.hi = hi
        self.weight = weight

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, field, weight=FUNCTION, lo=0, hi=None):
        return cls(field, {}, lo=lo, hi=hi, weight=weight)

    @classmethod
    def monomial(cls, field, exponent, coeff=1, weight=FUNCTION, hi=None):
        return cls(field, {exponent: coeff}, lo=exponent, hi=hi, weight=weight)

    # -- basic access ----------------------------------------------------
    def coeff(self, exponent: int):
        """Coefficient of z**exponent; errors above the truncation ceiling."""
        if self.hi is not None and exponent > self.hi:
            raise PrecisionError(
                f"coefficient of z^{exponent} outside valid window "
                f"[{self.lo}, {self.hi}]")
        return self.coeffs.get(exponent, self.field.zero())

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    def __repr__(self):
        terms = " + ".join(f"({c})z^{e}" for e, c in sorted(self.coeffs.items()))
        dz = {0: "", 1: " dz"}.get(self.weight, f" dz^{self.weight}")
        return f"<{terms or '0'}{dz} | [{self.lo},{self.hi}]>"

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.weight == other.weight and self.coeffs == other.coeffs)

    # -- ring operations --------------------------------------------------
    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if self.weight != other.weight:
            raise ValueError("cannot add series of different form weight")
        lo = min(self.lo, other.lo)
        hi = _min_hi(self.hi, other.hi)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        out = {e: c for e, c in out.items()
               if c and (hi is None or e <= hi)}
        return LaurentSeries(self.field, out, lo=lo, hi=hi, weight=self.weight)

    def __neg__(self):
        return LaurentSeries(self.field, {e: -c for e, c in self.coeffs.items()},
                             lo=self.lo, hi=self.hi, weight=self.weight)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar) -> "LaurentSeries":
        scalar = self.field.coerce(scalar)
        if not scalar:
            return LaurentSeries.zero(self.field, self.weight, self.lo, self.hi)
        return LaurentSeries(self.field,
                             {e: scalar * c for e, c in self.coeffs.items()},
                             lo=self.lo, hi=self.hi, weight=self.weight)

    def shift(self, n: int) -> "LaurentSeries":
        """Multiply by z**n."""
        return LaurentSeries(self.field,
                             {e + n: c for e, c in self.coeffs.items()},
                             lo=self.lo + n,
                             hi=None if self.hi is None else self.hi + n,
                             weight=self.weight)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        lo = self.lo + other.lo
        hi = _min_hi(None if self.hi is None else self.hi + other.lo,
                     None if other.hi is None else other.hi + self.lo)
        # hi < lo is a legal empty window (zero through hi, unknown above);
        # errors surface only when a coefficient beyond hi is requested
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if hi is not None and e > hi:
                    continue
                p = c1 * c2
                s = out.get(e)
                out[e] = p if s is None else s + p
        out = {e: c for e, c in out.items() if c}
        return LaurentSeries(self.field, out, lo=lo, hi=hi,
                             weight=self.weight + other.weight)

    def truncate(self, hi: int | None) -> "LaurentSeries":
        """Restrict the window from above (no-op for hi=None)."""
        if hi is None:
            return self
        new_hi = hi if self.hi is None else min(hi, self.hi)
        out = {e: c for e, c in self.coeffs.items() if e <= new_hi}
        return LaurentSeries(self.field, out, lo=self.lo, hi=new_hi,
                             weight=self.weight)

    # -- calculus ---------------------------------------------------------
    def residue(self):
        """Coefficient of z**-1 dz.  Requires a 1-form."""
        if self.weight != FORM:
            raise ValueError("residue requires a 1-form")
        return self.coeff(-1)

    def primitive(self) -> "LaurentSeries":
        """The primitive vanishing at z=0 (no constant term)."""
        if self.weight != FORM:
            raise ValueError("primitive requires a 1-form")
        if self.residue():
            raise ResidueObstructionError(
                "no single-valued primitive: nonzero residue")
        out = {e + 1: c / (e + 1) for e, c in self.coeffs.items() if e != -1}
        return LaurentSeries(self.field, out, lo=self.lo + 1,
                             hi=None if self.hi is None else self.hi + 1,
                             weight=FUNCTION)

    def derivative(self) -> "LaurentSeries":
        """d of a function, as a 1-form."""
        if self.weight != FUNCTION:
            raise ValueError("derivative is implemented for functions")
        out = {e - 1: c * e for e, c in self.coeffs.items() if e != 0}
        return LaurentSeries(self.field, out, lo=self.lo - 1,
                             hi=None if self.hi is None else self.hi - 1,
                             weight=FORM)

    def rotate(self, r: int, j: int) -> "LaurentSeries":
        """Pullback under z -> rho_r**j z (forms pick up the d(rho z) factor)."""
        j %= r
        if j == 0:
            return self
        out = {}
        for e, c in self.coeffs.items():
            out[e] = c * self.field.root(r, j * (e + self.weight))
        return LaurentSeries(self.field, out, lo=self.lo, hi=self.hi,
                             weight=self.weight)

    def inverse(self, order: int) -> "LaurentSeries":
        """Multiplicative inverse, valid up to exponent ``order``.

        The result has weight ``-weight`` and window
        ``[-v, min(order, hi - 2v)]`` where v is the valuation.
        """
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero series")
        v = min(self.coeffs)
        lead = self.coeffs[v]
        hi_avail = None if self.hi is None else self.hi - 2 * v
        hi = order if hi_avail is None else min(order, hi_avail)
        if hi < -v:
            raise PrecisionError("window collapse in series inverse")
        one = self.field.one()
        inv_lead = one / lead
        # g = tail of self/(lead*z^v); then (1+g)^{-1} = sum of (-g)^k
        g = {e - v: c * inv_lead for e, c in self.coeffs.items() if e != v}
        max_rel = hi + v
        acc = {0: one}
        power = {0: one}
        while True:
            nxt = {}
            for e1, c1 in power.items():
                for e2, c2 in g.items():
                    e = e1 + e2
                    if e > max_rel:
                        continue
                    p = c1 * c2
                    s = nxt.get(e)
                    nxt[e] = p if s is None else s + p
            nxt = {e: -c for e, c in nxt.items() if c}
            if not nxt:
                break
            for e, c in nxt.items():
                s = acc.get(e)
                acc[e] = c if s is None else s + c
            power = nxt
        out = {e - v: c * inv_lead for e, c in acc.items() if c}
        return LaurentSeries(self.field, out, lo=-v, hi=hi,
                             weight=-self.weight)

    def nth_root(self, n: int, order: int) -> "LaurentSeries":
        """Principal n-th root of a series with constant term 1 (weight 0)."""
        if self.weight != FUNCTION or self.coeff(0) != self.field.one():
            raise ValueError("nth_root requires constant term 1")
        if n == 1:
            return self.truncate(order)
        hi = order if self.hi is None else min(order, self.hi)
        x = LaurentSeries(self.field, {0: self.field.one()}, lo=0, hi=hi)
        target = self.truncate(hi)
        while True:
            xn1 = LaurentSeries(self.field, {0: self.field.one()}, lo=0, hi=hi)
            for _ in range(n - 1):
                xn1 = (xn1 * x).truncate(hi)
            err = (xn1 * x).truncate(hi) - target
            if err.is_zero():
                break
            corr = err * xn1.scale(n).inverse(hi)
            x = (x - corr.truncate(hi)).truncate(hi)
        return x

    def compose(self, inner: "LaurentSeries") -> "LaurentSeries":
        """self(inner(z)) for a power series self, inner of valuation >= 1."""
        if self.weight != FUNCTION:
            raise ValueError("compose requires a function")
        if self.lo < 0:
            raise ValueError("compose requires a power series")
        if inner.weight != FUNCTION or (inner.coeffs and min(inner.coeffs) < 1):
            raise ValueError("inner series must have valuation >= 1")
        hi = _min_hi(self.hi, inner.hi)
        out = LaurentSeries.zero(self.field)
        power = LaurentSeries(self.field, {0: self.field.one()}, lo=0, hi=None)
        top = max(self.coeffs) if self.coeffs else -1
        for e in range(0, top + 1):
            c = self.coeffs.get(e)
            if c:
                out = out + power.scale(c)
            if e < top:
                power = power * inner
                if hi is not None:
                    power = power.truncate(hi)
        return LaurentSeries(self.field, out.coeffs, lo=0, hi=hi,
                             weight=FUNCTION)

    def reversion(self, order: int) -> "LaurentSeries":
        """Compositional inverse of z + O(z^2), valid up to ``order``."""
        if self.weight != FUNCTION or self.coeff(1) != self.field.one() \
                or (self.coeffs and min(self.coeffs) < 1):
            raise ValueError("reversion requires z + higher-order terms")
        hi = order if self.hi is None else min(order, self.hi)
        ident = LaurentSeries(self.field, {1: self.field.one()}, lo=1, hi=hi)
        u = ident
        for _ in range(hi + 1):
            err = (self.truncate(hi).compose(u) - ident).truncate(hi)
            if err.is_zero():
                break
            u = (u - err).truncate(hi)
        return LaurentSeries(self.field, u.coeffs, lo=1, hi=hi,
                             weight=FUNCTION)


# ---------------------------------------------------------------------------
# Spec-surface helpers (tag discipline enforced here; internals are general).

def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Product of two series; at most one factor may be a 1-form."""
    if a.weight + b.weight > FORM:
        raise ValueError("series_mul accepts form*function or "
                         "function*function only")
    out = a * b
    if out.hi is not None and out.hi < out.lo and not out.coeffs:
        raise PrecisionError("window collapse in series product")
    return out


def series_residue(w: LaurentSeries):
    return w.residue()


def series_primitive(w: LaurentSeries) -> LaurentSeries:
    return w.primitive()


def series_rotate(w: LaurentSeries, r: int, j: int) -> LaurentSeries:
    return w.rotate(r, j)
