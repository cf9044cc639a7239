"""Formal wave-function assembly and the insertion-operator check.

The log of the partition function is a Laurent series in hbar whose
coefficients are polynomials in the formal times t'_{a,k} (one variable
per local-cycle label, k >= 1).  A monomial with multiplicities
m_1, m_2, ... carries the tensor entry divided by prod(m_i!): the
symmetric-tensor normalization is resolved once, here.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .curves import CurveData
from .cycles import LocalCycle, bhat, pair_cycle_form
from .errors import UnsupportedError
from .recursion import OmegaTable

# -- polynomials in the formal times ----------------------------------------
# TimesPoly: dict {monomial: scalar}; monomial = sorted tuple of
# ((label, k), multiplicity).  HPoly: dict {hbar_exponent: TimesPoly}.

ONE_MONOMIAL = ()


def tp_zero():
    return {}


def tp_const(field, c):
    c = field.coerce(c)
    return {ONE_MONOMIAL: c} if c else {}


def tp_var(field, label_k):
    return {((tuple(label_k), 1),): field.one()}


def monomial_from_multiset(indices) -> tuple:
    out = {}
    for idx in indices:
        out[tuple(idx)] = out.get(tuple(idx), 0) + 1
    return tuple(sorted(out.items()))


def monomial_degree(mon) -> int:
    return sum(m for _, m in mon)


def tp_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for mon, c in b.items():
        s = out.get(mon)
        s = c if s is None else s + c
        if s:
            out[mon] = s
        else:
            out.pop(mon, None)
    return out


def tp_scale(a: dict, c) -> dict:
    if not c:
        return {}
    return {mon: c * v for mon, v in a.items()}


def _mon_mul(m1, m2):
    out = dict(m1)
    for var, mult in m2:
        out[var] = out.get(var, 0) + mult
    return tuple(sorted(out.items()))


def tp_mul(a: dict, b: dict, deg_cap: int | None = None) -> dict:
    out = {}
    for m1, c1 in a.items():
        d1 = monomial_degree(m1)
        for m2, c2 in b.items():
            if deg_cap is not None and d1 + monomial_degree(m2) > deg_cap:
                continue
            mon = _mon_mul(m1, m2)
            p = c1 * c2
            s = out.get(mon)
            s = p if s is None else s + p
            if s:
                out[mon] = s
            else:
                out.pop(mon, None)
    return out


def tp_deriv(a: dict, var) -> dict:
    var = tuple(var)
    out = {}
    for mon, c in a.items():
        md = dict(mon)
        mult = md.get(var)
        if not mult:
            continue
        if mult == 1:
            del md[var]
        else:
            md[var] = mult - 1
        out[tuple(sorted(md.items()))] = c * mult
    return out


def tp_truncate(a: dict, deg_cap: int) -> dict:
    return {m: c for m, c in a.items() if monomial_degree(m) <= deg_cap}


def hp_zero():
    return {}


def hp_add(a: dict, b: dict) -> dict:
    out = {h: dict(p) for h, p in a.items()}
    for h, p in b.items():
        out[h] = tp_add(out.get(h, {}), p)
        if not out[h]:
            del out[h]
    return out


def hp_scale(a: dict, c) -> dict:
    if not c:
        return {}
    return {h: tp_scale(p, c) for h, p in a.items()}


def hp_shift(a: dict, dh: int) -> dict:
    return {h + dh: p for h, p in a.items()}


def hp_mul(a: dict, b: dict, hbar_cap: int | None = None,
           deg_cap: int | None = None) -> dict:
    out = {}
    for h1, p1 in a.items():
        for h2, p2 in b.items():
            h = h1 + h2
            if hbar_cap is not None and h > hbar_cap:
                continue
            prod = tp_mul(p1, p2, deg_cap)
            if prod:
                out[h] = tp_add(out.get(h, {}), prod)
                if not out[h]:
                    del out[h]
    return out


def hp_deriv(a: dict, var) -> dict:
    out = {}
    for h, p in a.items():
        d = tp_deriv(p, var)
        if d:
            out[h] = d
    return out


def hp_coefficient(a: dict, h: int, mon) -> object:
    return a.get(h, {}).get(tuple(sorted(mon)), 0)


def hp_nonzero_items(a: dict):
    for h in sorted(a):
        for mon, c in sorted(a[h].items()):
            if c:
                yield h, mon, c


# -- the wave function -------------------------------------------------------

@dataclass
class LogZ:
    """hbar-series with times-polynomial coefficients."""

    curve: CurveData
    chi_max: int
    terms: dict                  # HPoly
    prime: bool = False
    prefactor_01: dict | None = None   # HPoly of the one-form pairing term
    prefactor_02: dict | None = None   # HPoly of the bilinear pairing term

    def coefficient(self, hbar_order: int, indices):
        return hp_coefficient(self.terms, hbar_order,
                              monomial_from_multiset(indices))

    def min_hbar_order(self):
        return min(self.terms) if self.terms else 0

    def canonical_dict(self) -> dict:
        fld = self.curve.field
        out = []
        for h, mon, c in hp_nonzero_items(self.terms):
            out.append({
                "hbar": h,
                "monomial": [[[lb, k], m] for (lb, k), m in mon],
                "value": str(fld.as_fraction(c)),
            })
        return {"chi_max": self.chi_max, "prime": self.prime,
                "terms": out, "version": 1}


def assemble_logZ(table: OmegaTable, chi_max: int) -> LogZ:
    """log Z(t'): sum over stable (g,n) of hbar^(2g-2+n) F[g,n](t')/n!."""
    curve = table.curve
    terms = hp_zero()
    for (g, n), tab in table.tables.items():
        chi = 2 * g - 2 + n
        if chi <= 0 or chi > chi_max or n < 1:
            continue
        poly = {}
        for key, value in tab.items():
            mon = monomial_from_multiset(key)
            denom = 1
            for _, mult in mon:
                denom *= factorial(mult)
            coeff = value / denom
            if coeff:
                poly[mon] = coeff
        if poly:
            terms = hp_add(terms, {chi: poly})
    return LogZ(curve=curve, chi_max=chi_max, terms=terms)


def assemble_logZprime(table: OmegaTable, curve: CurveData,
                       chi_max: int) -> LogZ:
    """log Z' = the hbar^-1 one-form pairing + the half bilinear pairing
    + log Z(t').  Both prefactor pairings are computed honestly; on every
    admissible curve they vanish (the primary form is analytic at each
    point and the kernel map annihilates the negative-index cycles)."""
    base = assemble_logZ(table, chi_max)
    fld = curve.field
    pre01 = hp_zero()
    pre02 = hp_zero()
    variables = sorted({idx for (g, n), tab in table.tables.items()
                        for key in tab for idx in key})
    for (label, k) in variables:
        gm = LocalCycle(fld, {(label, -k): fld.one() / k})
        val = curve.omega01(label).coeff(-k - 1)
        if val:
            pre01 = hp_add(pre01, {-1: tp_scale(tp_var(fld, (label, k)),
                                                val / k)})
        bform = bhat(gm, curve)
        for (label2, k2) in variables:
            gm2 = LocalCycle(fld, {(label2, -k2): fld.one() / k2})
            v2 = pair_cycle_form(gm2, bform)
            if v2:
                mon = tp_mul(tp_var(fld, (label, k)),
                             tp_var(fld, (label2, k2)))
                pre02 = hp_add(pre02, {0: tp_scale(mon, v2 / 2)})
    terms = hp_add(hp_add(base.terms, pre01), pre02)
    out = LogZ(curve=curve, chi_max=chi_max, terms=terms, prime=True,
               prefactor_01=pre01, prefactor_02=pre02)
    if out.terms and min(out.terms) < -1:
        raise AssertionError("hbar * log Z' must be a power series in hbar")
    return out


# -- insertion operator check ------------------------------------------------

def hirota_insertion_check(table: OmegaTable, curve: CurveData, g: int,
                           n: int, spectators=None,
                           with_dx_weight: bool = True) -> dict:
    """Check that the one-point extraction kernel reproduces the (g, n+1)
    correlator in its first slot.

    With z a formal exterior point on the disc of a single ramification
    point and the local model x = x(a) + zeta^r, the residue at p -> z of
    w(p)/(x(p) - x(z)) is evaluated through the global residue theorem:

        dx(z) Res_{p->z} = -dx(z) [ sum_j Res_{p -> rho^j z}
                                    + Res_{p->0} + Res_{p->inf} ].

    The deck-translate residues produce Galois pullbacks of w, so the
    identity exercises the polar expansions and the covering map; it
    fails when the dx(z) weight is dropped (``with_dx_weight=False``).
    """
    if len(curve.labels) != 1 or not curve.is_purely_local:
        raise UnsupportedError(
            "the insertion check is implemented for purely local "
            "single-point curves (x offsets between points are not "
            "local data)")
    label = curve.labels[0]
    r = curve.order(label)
    fld = curve.field
    tab = table.entries(g, n + 1)
    if spectators is None:
        keys = sorted(tab)
        if not keys:
            return {"ok": True, "checked": 0, "details": "empty table"}
        spectators = keys[0][1:]
    ws = table.local_form(g, n + 1, spectators).at(label)
    if ws.is_zero():
        return {"ok": True, "checked": 0, "details": "zero slice"}

    # -dx(z) * sum_j Res_{p->rho^j z}: the pullbacks -sigma_j^* w(z)
    recon = {}

    def add(e, c):
        s = recon.get(e)
        s = c if s is None else s + c
        if s:
            recon[e] = s
        else:
            recon.pop(e, None)

    for j in range(1, r):
        for e, c in ws.coeffs.items():
            if with_dx_weight:
                add(e, -c * fld.root(r, j * (e + 1)))
            else:
                # drop dx(z)=r z^(r-1) dz: leaves 1/(r (rho^j z)^(r-1))
                add(e - (r - 1), -c * fld.root(r, j * (e - r + 1))
                    / r)
    # -dx(z) * Res_{p->0}: |p| < |z| expansion of 1/(p^r - z^r)
    depth = max(0, -min(ws.coeffs))
    for m in range(0, depth // r + 1):
        c = ws.coeffs.get(-1 - r * m)
        if c:
            if with_dx_weight:
                add(r - 1 - r * (m + 1), fld.coerce(c * r))
            else:
                add(-r * (m + 1), fld.coerce(c))
    # -dx(z) * Res_{p->inf}: |p| > |z| expansion
    top = max(max(ws.coeffs), 0)
    for m in range(0, top // r + 1):
        c = ws.coeffs.get(r * (m + 1) - 1)
        if c:
            if with_dx_weight:
                add(r - 1 + r * m, fld.coerce(c * r))
            else:
                add(r * m, fld.coerce(c))
    mismatches = {}
    for e in set(recon) | set(ws.coeffs):
        got = recon.get(e, fld.zero())
        want = ws.coeffs.get(e, fld.zero())
        if got != want:
            mismatches[e] = (got, want)
    return {"ok": not mismatches, "checked": len(ws.coeffs),
            "spectators": tuple(spectators), "mismatches": mismatches}
