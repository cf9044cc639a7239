"""Generalized local cycles as linear functionals on local forms.

A local form is a family of Laurent expansions, one per ramification
point.  A local cycle is a finite combination of basis functionals
Gamma[(a,k)] that extract the coefficient of zeta^(k-1) dzeta at the
point a (k any nonzero integer).  The bilinear-kernel pairing bhat sends
cycles to forms; chat_polar is its right inverse on purely polar forms.
Intersection numbers are reported as rational multiples of the formal
unit u = 1/(2*pi*i).
"""

from __future__ import annotations

from .curves import CurveData
from .errors import NotInRangeError, PairingError
from .series import FORM, LaurentSeries


class LocalForm:
    """One Laurent expansion per ramification point (all 1-forms)."""

    __slots__ = ("curve", "parts")

    def __init__(self, curve: CurveData, parts=None):
        self.curve = curve
        self.parts = {}
        for label, s in (parts or {}).items():
            if s.weight != FORM:
                raise ValueError("LocalForm parts must be 1-forms")
            self.parts[label] = s

    def at(self, label: str) -> LaurentSeries:
        s = self.parts.get(label)
        if s is None:
            return LaurentSeries.zero(self.curve.field, weight=FORM,
                                      hi=self.curve.tail_hi())
        return s

    def __add__(self, other: "LocalForm") -> "LocalForm":
        labels = set(self.parts) | set(other.parts)
        return LocalForm(self.curve,
                         {lb: self.at(lb) + other.at(lb) for lb in labels})

    def scale(self, scalar) -> "LocalForm":
        return LocalForm(self.curve,
                         {lb: s.scale(scalar) for lb, s in self.parts.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return all(s.is_zero() for s in self.parts.values())

    def __eq__(self, other):
        if not isinstance(other, LocalForm):
            return NotImplemented
        return (self - other).is_zero()


class LocalCycle:
    """Finite combination sum c[(label,k)] * Gamma[(label,k)], k != 0."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=None):
        self.field = field
        self.coeffs = {}
        for (label, k), c in (coeffs or {}).items():
            k = int(k)
            if k == 0:
                raise ValueError("Gamma indices are nonzero integers")
            c = field.coerce(c)
            if c:
                self.coeffs[(str(label), k)] = c

    def __add__(self, other: "LocalCycle") -> "LocalCycle":
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key)
            out[key] = c if s is None else s + c
        return LocalCycle(self.field, out)

    def scale(self, scalar) -> "LocalCycle":
        return LocalCycle(self.field,
                          {k: scalar * c for k, c in self.coeffs.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, LocalCycle):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        body = " + ".join(f"({c})G[{lb},{k}]"
                          for (lb, k), c in sorted(self.coeffs.items()))
        return f"LocalCycle({body or '0'})"


def gamma(curve: CurveData, label: str, k: int) -> LocalCycle:
    return LocalCycle(curve.field, {(label, k): 1})


def bcycle(curve: CurveData, label: str, k: int) -> LocalCycle:
    """B[(a,k)] = (1/k) Gamma[(a,-k)], the coefficient-extraction cycles."""
    if k < 1:
        raise ValueError("bcycle wants k >= 1")
    one = curve.field.one()
    return LocalCycle(curve.field, {(label, -k): one / k})


def pair_cycle_form(cycle: LocalCycle, form: LocalForm):
    """<Gamma, w>: sum of coefficient extractions Res zeta^-k w."""
    total = cycle.field.zero()
    for (label, k), c in cycle.coeffs.items():
        total = total + c * form.at(label).coeff(k - 1)
    return total


def bhat(cycle: LocalCycle, curve: CurveData) -> LocalForm:
    """Pair the second slot of the bilinear kernel with a cycle.

    Gamma[(a,k)], k >= 1 maps to k zeta^(-k-1) dzeta at a plus the
    analytic continuation encoded in phi at every point; Gamma[(a,-k)]
    maps to zero (the kernel is analytic against positive powers).
    """
    fld = curve.field
    parts = {lb: {} for lb in curve.labels}
    tail_hi = curve.tail_hi()
    for (label, k), c in cycle.coeffs.items():
        if label not in curve.points:
            raise ValueError(f"cycle references unknown point {label!r}")
        if k >= 1:
            d = parts[label]
            d[-k - 1] = d.get(-k - 1, fld.zero()) + c * k
            for blabel in curve.labels:
                row = curve.phi_row(blabel, (label, k))
                if row:
                    d2 = parts[blabel]
                    for j, v in row.items():
                        d2[j - 1] = d2.get(j - 1, fld.zero()) + c * v
    out = {}
    for lb, d in parts.items():
        has_tail = bool(curve.phi)
        hi = tail_hi if has_tail else None
        out[lb] = LaurentSeries(fld, d, hi=hi, weight=FORM)
    return LocalForm(curve, out)


def chat_polar(form: LocalForm, curve: CurveData) -> LocalCycle:
    """Right inverse of bhat on purely polar forms.

    Solves bhat(sum c Gamma) = form for coefficients on the polar basis
    (k >= 1), then checks the reconstruction matches, including analytic
    parts; raises NotInRangeError on mismatch.
    """
    fld = curve.field
    coeffs = {}
    for label in curve.labels:
        s = form.at(label)
        for e, c in s.coeffs.items():
            if e <= -2:
                k = -e - 1
                coeffs[(label, k)] = c / k
    candidate = LocalCycle(fld, coeffs)
    recon = bhat(candidate, curve)
    diff = form - recon
    for label in curve.labels:
        d = diff.at(label)
        if not d.is_zero():
            raise NotInRangeError(
                f"form is not in the polar image of the kernel map at point"
                f" {label!r}: residual {d!r}")
    return candidate


def intersection(c1: LocalCycle, c2: LocalCycle, curve: CurveData):
    """Intersection number as the rational multiple of u = 1/(2*pi*i)."""
    return (pair_cycle_form(c1, bhat(c2, curve))
            - pair_cycle_form(c2, bhat(c1, curve)))


def eta_pairing(form: LocalForm, curve: CurveData):
    """Pairing with the dual of the primary one-form.

    Computed two ways (residue against the primitive of omega01, and the
    times-weighted coefficient sum); both must agree.  Requires the form
    to have zero residue at every point.
    """
    fld = curve.field
    total_a = fld.zero()
    total_b = fld.zero()
    for label in curve.labels:
        w = form.at(label)
        if w.residue():
            raise PairingError(
                f"form has nonzero residue at {label!r}; the pairing would"
                " depend on the primitive's constant")
        prim = curve.omega01(label).primitive()
        total_a = total_a + (prim * w).residue()
        for k, t in curve.times(label).items():
            total_b = total_b + t * w.coeff(-k - 1) / k
    if total_a != total_b:
        raise PairingError(
            f"pairing cross-check failed: {total_a} != {total_b}")
    return total_a
