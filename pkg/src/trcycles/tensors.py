"""Quantum Airy tensors, the tensor-form recursion, and order-by-order
verification that the annihilation operators kill the wave function.

Two independent routes to the same tensors meet here: A and D are read
from the correlator table, C and the B-tensor come from fresh kernel
residues.  The tensor recursion then rebuilds correlators by pure
contraction, and the verifiers expand the annihilation identities in
(hbar, times)-coefficients, which must all vanish.

Slot conventions for the stored B-tensor follow its defining residue:
B[i1, i2, i3] contracts the kernel output with i1, feeds the basis form
of i2 into the first kernel slot, and contracts the spectator leg of the
bilinear kernel with i3.  In the recursion and the times-PDE the i2 slot
therefore pairs with derivatives and the i3 slot with time variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations, combinations_with_replacement, permutations
from math import factorial

from .curves import CurveData
from .errors import UnsupportedError
from .recursion import (
    OmegaTable,
    _Engine,
    _multiset_diff,
    _multiset_splits,
    _parity_filter,
    _set_partitions,
)
from .wavefunction import (
    assemble_logZ,
    hp_add,
    hp_deriv,
    hp_mul,
    hp_scale,
    hp_shift,
    hp_zero,
    monomial_from_multiset,
    tp_mul,
    tp_scale,
    tp_var,
)


@dataclass
class AiryTensors:
    """Sparse A, B, C, D over local-cycle labels."""

    curve: CurveData
    chi_max: int
    A: dict          # sorted triple -> scalar, totally symmetric
    D: dict          # label -> scalar
    C: dict          # (i0, e, e') -> scalar (raw slot order)
    B: dict          # (i1, i2, i3) -> scalar, slots as in the module doc

    def copy_with_perturbation(self, name: str, indices, delta):
        data = {"A": dict(self.A), "D": dict(self.D),
                "C": dict(self.C), "B": dict(self.B)}
        if name not in data:
            raise ValueError(f"unknown tensor {name!r}")
        tab = data[name]
        if name == "A":
            key = tuple(sorted(tuple(i) for i in indices))
        elif name == "D":
            key = tuple(indices[0]) if not isinstance(indices[0], str) \
                else tuple(indices)
        else:
            key = tuple(tuple(i) for i in indices)
        delta = self.curve.field.coerce(delta)
        tab[key] = tab.get(key, self.curve.field.zero()) + delta
        return AiryTensors(curve=self.curve, chi_max=self.chi_max,
                           A=data["A"], D=data["D"], C=data["C"],
                           B=data["B"])

    def canonical_entries(self):
        fld = self.curve.field
        out = {"A": [], "B": [], "C": [], "D": []}
        for key in sorted(self.A):
            out["A"].append({"indices": [list(i) for i in key],
                             "value": str(fld.as_fraction(self.A[key]))})
        for key in sorted(self.D):
            out["D"].append({"indices": [list(key)],
                             "value": str(fld.as_fraction(self.D[key]))})
        for name, tab in (("B", self.B), ("C", self.C)):
            for key in sorted(tab):
                out[name].append({"indices": [list(i) for i in key],
                                  "value": str(fld.as_fraction(tab[key]))})
        return out


def _target_index_bound(chi_max: int) -> int:
    best = 2
    for chi in range(1, chi_max + 1):
        for g in range(0, (chi + 1) // 2 + 1):
            n = chi + 2 - 2 * g
            if n >= 1:
                best = max(best, 6 * g - 4 + 2 * n)
    return best


def compute_airy_tensors(curve: CurveData, table: OmegaTable,
                         chi_max: int | None = None) -> AiryTensors:
    """Tensors of the quadratic Airy structure of a simple-ramification
    curve: A and D from the correlator table, C and B from kernel
    residues."""
    for label in curve.labels:
        if curve.order(label) != 2:
            raise UnsupportedError(
                "the quadratic tensor form needs simple ramification "
                "everywhere; use the order-by-order verifier instead")
    if chi_max is None:
        chi_max = table.chi_max
    engine = _Engine(curve)
    fld = curve.field
    kmax = _target_index_bound(chi_max)
    odd_only = _parity_filter(curve)
    ks = [k for k in range(1, kmax + 1) if not odd_only or k % 2 == 1]

    A = {key: 2 * v for key, v in table.entries(0, 3).items()}
    D = {key[0]: v for key, v in table.entries(1, 1).items()}

    # basis forms at the kernel point can come from any point: when the
    # bilinear kernel has an analytic part, their tails couple the points
    slots = [(lb, k) for lb in curve.labels for k in ks]
    C = {}
    B = {}
    for label in curve.labels:
        for k0 in ks:
            for e in slots:
                base = engine.rotated_basis(label, e, 0)
                if base.is_zero():
                    continue
                for ep in slots:
                    # C[i0, e, e'] = 2 * contraction of K2(basis_e, basis_e')
                    rot = engine.rotated_basis(label, ep, 1)
                    if not rot.is_zero():
                        val = 2 * engine.kernel_contract(label, k0, (1,),
                                                         [base, rot])
                        if val:
                            C[((label, k0), e, ep)] = val
                rot_base = engine.rotated_basis(label, e, 1)
                for ep_k in ks:
                    # B[i1, i2, i3]: the basis form of i2 against the
                    # contracted bilinear-kernel leg of i3 (which only
                    # lives at the kernel point), summed over the two
                    # slot assignments.  On odd contractions the two
                    # assignments agree and this is twice the single
                    # residue; on parity-broken curves the even entries
                    # need the genuine sum.
                    valb = engine.kernel_contract(
                        label, k0, (1,),
                        [base, engine.leg(label, ep_k, 1)]) + \
                        engine.kernel_contract(
                        label, k0, (1,),
                        [engine.leg(label, ep_k, 0), rot_base])
                    if valb:
                        B[((label, k0), e, (label, ep_k))] = valb
    return AiryTensors(curve=curve, chi_max=chi_max, A=A, D=D, C=C, B=B)


def tensor_recursion(at: AiryTensors, chi_max: int) -> OmegaTable:
    """Rebuild the correlator tensors by pure contraction.

    Seeds: F[0,3] = A/2 and F[1,1] = D; then
    2 F[g,n+1][i0,S] = sum C[i0,e,e'] (F[g-1,n+2][e,e',S]
                        + sum_stable F F)
                     + 2 sum_{s in S} sum_j B[i0,j,s] F[g,n][j, S-s].
    """
    curve = at.curve
    fld = curve.field
    table = OmegaTable(curve, chi_max)
    for key, v in at.A.items():
        table.set_entry(0, 3, key, v / 2)
    for lab, v in at.D.items():
        table.set_entry(1, 1, (lab,), v)

    crows = {}
    for (i0, e, ep), v in at.C.items():
        crows.setdefault(i0, []).append((e, ep, v))
    brows = {}
    for (i0, j, s), v in at.B.items():
        brows.setdefault((i0, s), []).append((j, v))

    odd_only = _parity_filter(curve)
    for chi in range(1, chi_max + 1):
        for g in range(0, (chi + 1) // 2 + 1):
            n1 = chi + 2 - 2 * g
            if n1 < 1 or (g, n1) in ((0, 3), (1, 1)):
                continue
            _tensor_level(at, table, crows, brows, g, n1, odd_only)
    return table


def _tensor_level(at, table, crows, brows, g, n1, odd_only):
    curve = at.curve
    fld = curve.field
    per_point = []
    for label in curve.labels:
        bound = max(1, 6 * g - 4 + 2 * n1)
        ks = range(1, bound + 1)
        if odd_only:
            ks = [k for k in ks if k % 2 == 1]
        per_point.append([(label, k) for k in ks])
    groups = (per_point if curve.is_purely_local
              else [sorted(sum(per_point, []))])
    n = n1 - 1
    for cands in groups:
        for key in combinations_with_replacement(cands, n1):
            i0, spec = key[0], tuple(key[1:])
            total = fld.zero()
            for e, ep, cval in crows.get(i0, ()):
                inner = table.get(g - 1, n + 2, (e, ep) + spec) \
                    if g >= 1 else fld.zero()
                for parts, weight in _multiset_splits(spec, 2):
                    i1, i2 = parts
                    for g1 in range(0, g + 1):
                        g2 = g - g1
                        if 2 * g1 - 2 + len(i1) + 1 <= 0:
                            continue
                        if 2 * g2 - 2 + len(i2) + 1 <= 0:
                            continue
                        f1 = table.get(g1, len(i1) + 1, (e,) + i1)
                        if not f1:
                            continue
                        f2 = table.get(g2, len(i2) + 1, (ep,) + i2)
                        if f2:
                            inner = inner + weight * f1 * f2
                if inner:
                    total = total + cval * inner
            seen = set()
            for s in spec:
                if s in seen:
                    continue
                seen.add(s)
                mult = spec.count(s)
                rest = _multiset_diff(spec, (s,))
                for j, bval in brows.get((i0, s), ()):
                    fv = table.get(g, n, (j,) + rest)
                    if fv:
                        total = total + 2 * mult * bval * fv
            value = total / 2
            if value:
                table.set_entry(g, n1, key, value)


# ---------------------------------------------------------------------------
# The disc-free derivative coefficients.

@dataclass(frozen=True)
class UOperator:
    """Partition expansion of the disc-free k-th derivative coefficient:
    shapes are multisets of block sizes >= 2, with their multiplicities."""

    k: int
    terms: tuple     # of (shape tuple, count)

    def shape_dict(self):
        return {shape: count for shape, count in self.terms}


def compute_Uk(k: int) -> UOperator:
    """Sum over set partitions of k slots with every block of size >= 2."""
    if k < 1:
        raise ValueError("arity must be >= 1")
    counts = {}
    for part in _set_partitions(list(range(k))):
        if any(len(b) < 2 for b in part):
            continue
        shape = tuple(sorted(len(b) for b in part))
        counts[shape] = counts.get(shape, 0) + 1
    return UOperator(k=k, terms=tuple(sorted(counts.items())))


# ---------------------------------------------------------------------------
# Quadratic times-PDE verification.

@dataclass
class ResidualReport:
    """Nonzero coefficients of an annihilation-operator residual."""

    entries: list = dc_field(default_factory=list)
    checked_orders: tuple = ()
    term_structure: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.entries

    def first_nonzero(self):
        return self.entries[0] if self.entries else None


def _airy_index_variables(table: OmegaTable):
    out = set()
    for (_, _), tab in table.tables.items():
        for key in tab:
            out.update(key)
    return sorted(out)


def verify_quadratic_pde(curve: CurveData, at: AiryTensors,
                         table: OmegaTable, hbar_max: int, deg_max: int,
                         perturb=None) -> ResidualReport:
    """Expand the quadratic annihilation operator on Z(t') and collect all
    (hbar, monomial) residual coefficients up to the cutoffs.

    The operator, derived from the tensor recursion (the only reading
    with identically vanishing residual):

        d/dt'_i - hbar D[i] - (hbar/4) A[i,j,k] t'_j t'_k
                - hbar B[i,j,k] t'_k d/dt'_j
                - (hbar/2) C[i,j,k] (d2/dt'_j dt'_k + d/dt'_j d/dt'_k)

    applied to log Z (all sums over the full label set).
    """
    if perturb is not None:
        at = at.copy_with_perturbation(*perturb)
    fld = curve.field
    chi_needed = min(hbar_max, table.chi_max)
    logz = assemble_logZ(table, chi_needed)
    variables = _airy_index_variables(table)
    caps = (hbar_max, deg_max)

    P = {v: hp_deriv(logz.terms, v) for v in variables}
    report = ResidualReport(checked_orders=(hbar_max, deg_max))

    targets = set(variables)
    targets.update(i0 for (i0, _, _) in at.C)
    targets.update(i0 for (i0, _, _) in at.B)

    for i0 in sorted(targets):
        res = P.get(i0, hp_zero())
        dval = at.D.get(i0)
        if dval:
            res = hp_add(res, {1: {(): -dval}})
        acc_a = {}
        for key, v in at.A.items():
            rest = _multiset_diff(key, (i0,))
            if rest is None:
                continue
            j, k = rest
            npairs = 1 if j == k else 2
            mon = tp_mul(tp_var(fld, j), tp_var(fld, k))
            acc_a = hp_add(acc_a, {0: tp_scale(mon, v * npairs)})
        if acc_a:
            res = hp_add(res, hp_scale(hp_shift(acc_a, 1),
                                       fld.coerce(-1) / 4))
        acc_b = hp_zero()
        for (bi0, j, s), v in at.B.items():
            if bi0 != i0:
                continue
            pj = P.get(j)
            if not pj:
                continue
            term = hp_mul({0: tp_scale(tp_var(fld, s), v)}, pj, *caps)
            acc_b = hp_add(acc_b, term)
        if acc_b:
            res = hp_add(res, hp_scale(hp_shift(acc_b, 1), fld.coerce(-1)))
        acc_c = hp_zero()
        for (ci0, e, ep), v in at.C.items():
            if ci0 != i0:
                continue
            q = hp_deriv(P.get(e, hp_zero()), ep)
            pp = hp_mul(P.get(e, hp_zero()), P.get(ep, hp_zero()), *caps)
            both = hp_add(q, pp)
            if both:
                acc_c = hp_add(acc_c, hp_scale(both, v))
        if acc_c:
            res = hp_add(res, hp_scale(hp_shift(acc_c, 1),
                                       fld.coerce(-1) / 2))
        for h in sorted(res):
            if h > hbar_max or h > chi_needed:
                continue
            for mon, c in sorted(res[h].items()):
                if sum(m for _, m in mon) > deg_max:
                    continue
                if c:
                    report.entries.append((i0, h, mon, c))
    return report


# ---------------------------------------------------------------------------
# Order-by-order verification of the higher annihilation operator.

def _g_tensor(table: OmegaTable, m: int, e_tuple: tuple, fld,
              hbar_cap: int) -> dict:
    """Coefficient polynomial of the m-fold insertion of log Z', attached
    to basis labels e_tuple (sorted): sum over (g,n) of
    hbar^(2g-2+n)/n! F[g,n+m][e..., i...] t'_{i...}."""
    out = hp_zero()
    for (g, nm), tab in table.tables.items():
        n = nm - m
        if n < 0 or (g, n) == (0, 0):
            continue
        h = 2 * g - 2 + n
        if h > hbar_cap:
            continue
        poly = {}
        for key, value in tab.items():
            rest = _multiset_diff(key, e_tuple)
            if rest is None or len(rest) != n:
                continue
            mon = monomial_from_multiset(rest)
            denom = 1
            for _, mult in mon:
                denom *= factorial(mult)
            c = value / denom
            prev = poly.get(mon)
            poly[mon] = c if prev is None else prev + c
        poly = {mm: c for mm, c in poly.items() if c}
        if poly:
            out = hp_add(out, {h: poly})
    return out


class _HSeries:
    """Laurent coefficients in the kernel variable, valued in HPoly."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {e: p for e, p in (coeffs or {}).items() if p}

    def mul(self, other: "_HSeries", z_cap: int, hbar_cap: int,
            deg_cap: int) -> "_HSeries":
        out = {}
        for e1, p1 in self.coeffs.items():
            for e2, p2 in other.coeffs.items():
                e = e1 + e2
                if e > z_cap:
                    continue
                prod = hp_mul(p1, p2, hbar_cap, deg_cap)
                if prod:
                    out[e] = hp_add(out.get(e, hp_zero()), prod)
        return _HSeries({e: p for e, p in out.items() if p})

    @staticmethod
    def from_scalar_series(series, fld) -> "_HSeries":
        return _HSeries({e: {0: {(): c}} for e, c in series.coeffs.items()})

    def min_exp(self):
        return min(self.coeffs) if self.coeffs else None


def verify_higher_pde(curve: CurveData, table: OmegaTable, hbar_max: int,
                      drop_terms: tuple = ()) -> ResidualReport:
    """Verify, coefficient by coefficient, that the order-r annihilation
    operator kills the wave function.

    Both sides of the master identity (the single-insertion series equals
    the sum over kernel orders of all partition-labeled kernel terms) are
    expanded over basis contractions with (hbar, times)-polynomial
    coefficients.  ``drop_terms`` removes structural term classes, e.g.
    ``(3, (('U', 2), ('W', 1)))``, for negative controls.

    Term classes are keyed (k, sorted block descriptors) with descriptors
    ('W', m) for m-fold insertion blocks and ('U', m) for disc-free
    derivative blocks.
    """
    if not curve.is_purely_local:
        raise UnsupportedError(
            "order-by-order verification needs a purely local curve")
    fld = curve.field
    engine = _Engine(curve)
    hbar_cap = min(hbar_max, table.chi_max - 1)
    deg_cap = hbar_cap + 2
    variables = _airy_index_variables(table)
    report = ResidualReport(checked_orders=(hbar_cap, deg_cap))

    for label in curve.labels:
        r = curve.order(label)
        point_vars = [v for v in variables if v[0] == label]
        lhs = {}    # k0 -> HPoly
        for (lb, k0) in point_vars:
            g1 = _g_tensor(table, 1, ((lb, k0),), fld, hbar_cap)
            if g1:
                lhs[k0] = g1

        # W-block series per (m, rotation multiset): basis expansion plus,
        # for m = 1, the contracted-leg part of the one-form pairing term
        wcache = {}

        def w_series(m: int, rots: tuple) -> _HSeries:
            key = (m, tuple(sorted(rots)))
            got = wcache.get(key)
            if got is not None:
                return got
            coeffs = {}
            for e_tuple in combinations_with_replacement(point_vars, m):
                g = _g_tensor(table, m, tuple(sorted(e_tuple)), fld,
                              hbar_cap - m)
                if not g:
                    continue
                for arrangement in set(permutations(e_tuple)):
                    piece = None
                    for e, j in zip(arrangement, sorted(rots)):
                        s = engine.rotated_basis(label, e, j)
                        piece = s if piece is None else piece * s
                    for ex, c in piece.coeffs.items():
                        add = hp_scale(g, c)
                        coeffs[ex] = hp_add(coeffs.get(ex, hp_zero()), add)
            out = _HSeries({e: hp_shift(p, m) for e, p in coeffs.items()})
            if m == 1:
                # the one-form pairing term of the single insertion: its
                # hbar^-1 meets the block's hbar^1 dressing at order zero
                for (lb, kv) in point_vars:
                    leg = engine.leg(label, kv, sorted(rots)[0])
                    for ex, c in leg.coeffs.items():
                        contrib = {0: tp_scale(tp_var(fld, (lb, kv)), c)}
                        out.coeffs[ex] = hp_add(out.coeffs.get(ex, hp_zero()),
                                                contrib)
            wcache[key] = out
            return out

        def u_series(block_slots: tuple, slot_rot: tuple) -> _HSeries:
            # disc-free blocks are forms of the hbar-rescaled curve and
            # carry hbar^(m-2); the bridge (m=2) is undressed
            m = len(block_slots)
            if m == 2:
                p, q = block_slots
                br = engine.bridge(label, slot_rot[p], slot_rot[q])
                return _HSeries.from_scalar_series(br, fld)
            coeffs = {}
            tab = table.entries(0, m)
            rots = tuple(slot_rot[s] for s in block_slots)
            for key, value in tab.items():
                if any(e[0] != label for e in key):
                    continue
                for arrangement in set(permutations(key)):
                    piece = None
                    for e, j in zip(arrangement, rots):
                        s = engine.rotated_basis(label, e, j)
                        piece = s if piece is None else piece * s
                    for ex, c in piece.coeffs.items():
                        add = {m - 2: {(): c * value}}
                        coeffs[ex] = hp_add(coeffs.get(ex, hp_zero()), add)
            return _HSeries(coeffs)

        rhs = {}            # k0 -> HPoly
        structure = {}      # class -> contracted nonzero flag
        for k in range(2, r + 1):
            for js in combinations(range(1, r), k - 1):
                slot_rot = (0,) + js
                for part in _set_partitions(list(range(k))):
                    for labeling in _labelings(part):
                        desc = (k, tuple(sorted(
                            (("U", len(b)) if lab == "U" else ("W", len(b)))
                            for b, lab in zip(part, labeling))))
                        if desc in drop_terms:
                            continue
                        prod = _product_term(engine, label, part, labeling,
                                             slot_rot, w_series, u_series,
                                             k, hbar_cap, deg_cap)
                        if prod is None:
                            continue
                        nonzero = False
                        for k0, poly in prod.items():
                            # kernels of the hbar-rescaled curve: hbar^(k-2)
                            poly = hp_shift(poly, k - 2)
                            poly = {h: p for h, p in poly.items()
                                    if h <= hbar_cap}
                            if poly:
                                nonzero = True
                                rhs[k0] = hp_add(rhs.get(k0, hp_zero()), poly)
                        structure[desc] = structure.get(desc, False) or nonzero
        ks = set(lhs) | set(rhs)
        for k0 in sorted(ks):
            res = hp_add(lhs.get(k0, hp_zero()),
                         hp_scale(rhs.get(k0, hp_zero()), fld.coerce(-1)))
            for h in sorted(res):
                if h > hbar_cap:
                    continue
                for mon, c in sorted(res[h].items()):
                    if c:
                        report.entries.append(((label, k0), h, mon, c))
        for desc, flag in structure.items():
            prev = report.term_structure.get(desc, False)
            report.term_structure[desc] = prev or flag
    return report


def _labelings(part):
    """All U/W labelings of partition blocks (U needs block size >= 2)."""
    options = [("W", "U") if len(b) >= 2 else ("W",) for b in part]
    def rec(i):
        if i == len(options):
            yield ()
            return
        for tail in rec(i + 1):
            for o in options[i]:
                yield (o,) + tail
    return rec(0)


def _product_term(engine, label, part, labeling, slot_rot, w_series,
                  u_series, k, hbar_cap, deg_cap):
    """Contract one labeled partition term with every target index.

    Returns {k0: HPoly} or None when the term vanishes structurally.
    """
    curve = engine.curve
    r = curve.order(label)
    blocks = []
    for b, lab in zip(part, labeling):
        s = u_series(b, slot_rot) if lab == "U" \
            else w_series(len(b), tuple(slot_rot[x] for x in b))
        if not s.coeffs:
            return None
        blocks.append(s)
    lo_blocks = sum(s.min_exp() for s in blocks)
    # k0 range: residue needs exponent -k0-1 reachable
    k0_max = r * (k - 1) - 1 - lo_blocks
    if k0_max < 1:
        return None
    order = -2 - lo_blocks + r * (k - 2)
    denominvs = [engine.denom_inv(label, j, max(order, -r))
                 for j in slot_rot[1:]]
    # multiply with caps that leave room for the remaining factors'
    # lowest exponents (denominator inverses reach down to -r each)
    mins = [s.min_exp() for s in blocks]
    prod = None
    for idx, s in enumerate(blocks):
        if prod is None:
            prod = s
            continue
        rest = sum(mins[idx + 1:])
        cap = -2 - rest + r * (k - 1)
        prod = prod.mul(s, cap, hbar_cap, deg_cap)
    remaining = k - 1
    for dv in denominvs:
        remaining -= 1
        ds = _HSeries.from_scalar_series(dv, engine.field)
        prod = prod.mul(ds, -2 + r * remaining, hbar_cap, deg_cap)
    out = {}
    for e, poly in prod.coeffs.items():
        if e <= -2:
            k0 = -e - 1
            val = hp_scale(poly, engine.field.coerce(-1) / k0)
            if val:
                out[k0] = val
    return out
