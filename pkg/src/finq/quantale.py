"""Quantales on finite lattices: residuals, dualizing elements, Serre pairs,
Frobenius and Girard structure, the Chu construction, units and positivity.

A quantale is a complete lattice with an associative multiplication that
distributes over arbitrary joins in each argument. Finiteness reduces every
"arbitrary join" condition to the empty and binary cases, which is how all
checks below are implemented.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    BottomNotAbsorbed,
    CoincidenceFailed,
    NotADuality,
    NotAssociative,
    NotDistributive,
    NotDualizing,
    NotInjective,
    ValidationFailed,
)
from .lattice import EndoMap, FiniteLattice, LatticeMap, product


def _frozen(a):
    a.setflags(write=False)
    return a


class Quantale:
    """A lattice with a multiplication table. Use check_quantale to build a
    validated instance; this constructor only checks shapes."""

    def __init__(self, lattice, mult):
        self.lattice = lattice
        self.mult = _frozen(np.asarray(mult, dtype=np.int64))
        n = lattice.n
        if self.mult.shape != (n, n):
            raise ValidationFailed("multiplication table has wrong shape")
        if self.mult.min() < 0 or self.mult.max() >= n:
            raise ValidationFailed("multiplication table entry out of range")

    @property
    def n(self):
        return self.lattice.n

    def mult_of(self, x, y):
        return int(self.mult[x, y])

    def __eq__(self, other):
        return (isinstance(other, Quantale)
                and self.lattice == other.lattice
                and np.array_equal(self.mult, other.mult))

    def __hash__(self):
        return hash((self.lattice, self.mult.tobytes()))

    def __repr__(self):
        return f"Quantale(n={self.n})"

    @cached_property
    def left_residual_table(self):
        """table[x, z] = x\\z = join of {y | x*y <= z}."""
        n, leq, jt = self.n, self.lattice.leq, self.lattice.join_table
        out = np.empty((n, n), dtype=np.int64)
        for x in range(n):
            ok = leq[self.mult[x, :], :]
            acc = np.full(n, self.lattice.bot, dtype=np.int64)
            for y in range(n):
                acc = np.where(ok[y], jt[acc, y], acc)
            out[x] = acc
        return _frozen(out)

    @cached_property
    def right_residual_table(self):
        """table[z, y] = z/y = join of {x | x*y <= z}."""
        n, leq, jt = self.n, self.lattice.leq, self.lattice.join_table
        out = np.empty((n, n), dtype=np.int64)
        for y in range(n):
            ok = leq[self.mult[:, y], :]
            acc = np.full(n, self.lattice.bot, dtype=np.int64)
            for x in range(n):
                acc = np.where(ok[x], jt[acc, x], acc)
            out[:, y] = acc
        return out

    def _diagonal_residuals(self):
        """Arrays (x\\x)_x and (x/x)_x without building the full tables."""
        n, leq, jt = self.n, self.lattice.leq, self.lattice.join_table
        ar = np.arange(n)
        below_l = leq[self.mult, ar[:, None]]
        below_r = leq[self.mult.T, ar[:, None]]
        dl = np.full(n, self.lattice.bot, dtype=np.int64)
        dr = np.full(n, self.lattice.bot, dtype=np.int64)
        for y in range(n):
            dl = np.where(below_l[:, y], jt[dl, y], dl)
            dr = np.where(below_r[:, y], jt[dr, y], dr)
        return dl, dr


def check_quantale(lattice, mult):
    """Validate the quantale laws and return the Quantale.

    Scans are in lexicographic index order, so the first witness reported for
    a violated law is deterministic. Associativity is checked first, then
    left and right distributivity over binary joins, then bottom absorption
    (the empty join).
    """
    Q = Quantale(lattice, mult)
    mult = Q.mult
    jt = lattice.join_table
    n = lattice.n
    for x in range(n):
        left = mult[mult[x, :], :]
        right = mult[x, mult]
        if not np.array_equal(left, right):
            y, z = map(int, np.argwhere(left != right)[0])
            raise NotAssociative(x, y, z)
    for x in range(n):
        row = mult[x, :]
        lhs = mult[x, jt]
        rhs = jt[row[:, None], row[None, :]]
        if not np.array_equal(lhs, rhs):
            y, z = map(int, np.argwhere(lhs != rhs)[0])
            raise NotDistributive("left", x, y, z)
    for x in range(n):
        col = mult[:, x]
        lhs = mult[jt, x]
        rhs = jt[col[:, None], col[None, :]]
        if not np.array_equal(lhs, rhs):
            y, z = map(int, np.argwhere(lhs != rhs)[0])
            raise NotDistributive("right", x, y, z)
    bad = np.flatnonzero(mult[lattice.bot, :] != lattice.bot)
    if bad.size:
        raise BottomNotAbsorbed(int(bad[0]), "left")
    bad = np.flatnonzero(mult[:, lattice.bot] != lattice.bot)
    if bad.size:
        raise BottomNotAbsorbed(int(bad[0]), "right")
    return Q


def residual_left(Q, x, z):
    """x\\z, the largest y with x*y <= z."""
    return int(Q.left_residual_table[x, z])


def residual_right(Q, z, y):
    """z/y, the largest x with x*y <= z."""
    return int(Q.right_residual_table[z, y])


def element_flags(Q, zero):
    """Dualizing / cyclic / weak-cyclicity flags of a candidate element.

    zero is dualizing when 0/(x\\0) = (0/x)\\0 = x for every x, cyclic when
    x\\0 = 0/x, and weakly cyclic when the two double negations agree without
    being the identity.
    """
    lneg = Q.right_residual_table[zero, :]
    rneg = Q.left_residual_table[:, zero]
    ar = np.arange(Q.n)
    lr = lneg[rneg]
    rl = rneg[lneg]
    return {
        "dualizing": bool((lr == ar).all() and (rl == ar).all()),
        "cyclic": bool((lneg == rneg).all()),
        "weakly_cyclic": bool((lr == rl).all()),
    }


@dataclass(frozen=True)
class FrobeniusStructure:
    """A quantale with a pair of inverse antitone negations satisfying the
    Serre identity x\\lneg(y) = rneg(x)/y."""

    quantale: Quantale
    lneg: EndoMap
    rneg: EndoMap

    @property
    def girard(self):
        return bool(np.array_equal(self.lneg.image, self.rneg.image))

    @cached_property
    def report(self):
        return check_frobenius(self.quantale, self.lneg, self.rneg)

    def __hash__(self):
        return hash((self.quantale, self.lneg, self.rneg))


@dataclass
class SerrePairReport:
    """Diagnostics for a candidate pair (l, r) of negation maps.

    frobenius_valid is the Definition-of-structure aggregate (inverse antitone
    pair with the Serre identity); serre_gc_valid is the weaker
    Galois-connection aggregate used by the quotient machinery.
    """

    antitone: bool
    is_galois: bool
    is_inverse_pair: bool
    commutes: bool
    shift_holds: bool
    serre_identity: bool
    images_coincide: bool
    girard: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def frobenius_valid(self):
        return self.antitone and self.is_inverse_pair and self.serre_identity

    @property
    def serre_gc_valid(self):
        return self.antitone and self.is_galois and self.commutes \
            and self.shift_holds

    def to_dict(self):
        return {
            "antitone": self.antitone,
            "is_galois": self.is_galois,
            "is_inverse_pair": self.is_inverse_pair,
            "commutes": self.commutes,
            "shift_holds": self.shift_holds,
            "serre_identity": self.serre_identity,
            "images_coincide": self.images_coincide,
            "girard": self.girard,
            "frobenius_valid": self.frobenius_valid,
            "serre_gc_valid": self.serre_gc_valid,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


def _image_array(m, n):
    img = m.image if isinstance(m, LatticeMap) else np.asarray(m)
    img = np.asarray(img, dtype=np.int64)
    if img.shape != (n,) or (img.size and (img.min() < 0 or img.max() >= n)):
        raise ValidationFailed("negation map has wrong shape or range")
    return img


def check_frobenius(Q, lneg, rneg):
    """Evaluate every Serre-pair diagnostic for (lneg, rneg).

    The Galois-connection law is y <= lneg(x) iff x <= rneg(y); the shift
    relation is x*z <= lneg(y) iff z*y <= rneg(x). All scans are exhaustive
    and the first counterexample per failed flag is recorded.
    """
    n, leq = Q.n, Q.lattice.leq
    l = _image_array(lneg, n)
    r = _image_array(rneg, n)
    ar = np.arange(n)
    witnesses = {}

    def first(mask, key):
        bad = np.argwhere(mask)
        if bad.size:
            witnesses[key] = tuple(int(v) for v in bad[0])
            return True
        return False

    anti_l = leq & ~leq[np.ix_(l, l)].T
    anti_r = leq & ~leq[np.ix_(r, r)].T
    antitone = not (first(anti_l, "antitone_lneg")
                    | first(anti_r, "antitone_rneg"))

    galois = leq[:, l].T == leq[:, r]
    is_galois = not first(~galois, "is_galois")

    inv = (l[r] != ar) | (r[l] != ar)
    is_inverse_pair = not first(inv, "is_inverse_pair")

    commutes = not first(l[r] != r[l], "commutes")

    shift_ok = True
    for x in range(n):
        lhs = leq[Q.mult[x, :][:, None], l[None, :]]
        rhs = leq[Q.mult, r[x]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            z, y = map(int, bad[0])
            witnesses["shift_holds"] = (x, z, y)
            shift_ok = False
            break

    serre = Q.left_residual_table[:, l] == Q.right_residual_table[r, :]
    serre_identity = not first(~serre, "serre_identity")

    images_coincide = set(l.tolist()) == set(r.tolist())
    girard = bool(np.array_equal(l, r))

    return SerrePairReport(antitone, is_galois, is_inverse_pair, commutes,
                           shift_ok, serre_identity, images_coincide, girard,
                           witnesses)


def frobenius_from_dualizing(Q, zero):
    """The Frobenius structure induced by a dualizing element:
    lneg(x) = 0/x and rneg(x) = x\\0."""
    flags = element_flags(Q, zero)
    if not flags["dualizing"]:
        lneg = Q.right_residual_table[zero, :]
        rneg = Q.left_residual_table[:, zero]
        bad = np.flatnonzero(lneg[rneg] != np.arange(Q.n))
        wit = int(bad[0]) if bad.size else int(
            np.flatnonzero(rneg[lneg] != np.arange(Q.n))[0])
        raise NotDualizing(zero, wit)
    F = FrobeniusStructure(Q,
                           EndoMap(Q.lattice, Q.right_residual_table[zero, :]),
                           EndoMap(Q.lattice, Q.left_residual_table[:, zero]))
    assert F.report.frobenius_valid
    return F


def dual_mult(F, x, y):
    """The dual multiplication lneg(rneg(y) * rneg(x)), asserted against its
    three equivalent forms."""
    Q = F.quantale
    l, r = F.lneg.image, F.rneg.image
    e1 = int(l[Q.mult[r[y], r[x]]])
    e2 = int(r[Q.mult[l[y], l[x]]])
    e3 = int(Q.left_residual_table[l[x], y])
    e4 = int(Q.right_residual_table[x, r[y]])
    if not e1 == e2 == e3 == e4:
        raise CoincidenceFailed(x, y, (e1, e2, e3, e4))
    return e1


def dual_mult_table(F):
    Q = F.quantale
    l, r = F.lneg.image, F.rneg.image
    e1 = l[Q.mult[r[:, None], r[None, :]]].T
    e2 = r[Q.mult[l[:, None], l[None, :]]].T
    e3 = Q.left_residual_table[l, :]
    e4 = Q.right_residual_table[:, r]
    for other in (e2, e3, e4):
        bad = np.argwhere(e1 != other)
        if bad.size:
            x, y = map(int, bad[0])
            raise CoincidenceFailed(x, y, (int(e1[x, y]), int(other[x, y])))
    return _frozen(e1)


class UnitReport(NamedTuple):
    unit: Optional[int]
    candidate: int
    xu_below_x: bool
    ux_below_x: bool


def find_unit(Q):
    """Locate a two-sided unit if one exists and report the canonical
    candidate u = meet of {x\\x ^ x/x}.

    The candidate always satisfies x*u <= x and u*x <= x; when the quantale
    is unital the unit is the largest such element.
    """
    n, ar = Q.n, np.arange(Q.n)
    unit = None
    for u in range(n):
        if (Q.mult[u, :] == ar).all() and (Q.mult[:, u] == ar).all():
            unit = u
            break
    dl, dr = Q._diagonal_residuals()
    mt = Q.lattice.meet_table
    cand = Q.lattice.top
    for x in range(n):
        cand = int(mt[cand, mt[dl[x], dr[x]]])
    xu = bool(Q.lattice.leq[Q.mult[:, cand], ar].all())
    ux = bool(Q.lattice.leq[Q.mult[cand, :], ar].all())
    return UnitReport(unit, cand, xu, ux)


def is_positive_element(Q, p):
    """x <= x*p and x <= p*x for every x."""
    ar = np.arange(Q.n)
    return bool(Q.lattice.leq[ar, Q.mult[:, p]].all()
                and Q.lattice.leq[ar, Q.mult[p, :]].all())


def is_positive_quantale(Q):
    """Every element of the form x\\x or x/x is positive."""
    dl, dr = Q._diagonal_residuals()
    return all(is_positive_element(Q, int(p))
               for p in set(dl.tolist()) | set(dr.tolist()))


class ContinuityReport:
    """Outcome of a strong-continuity check; truthy iff all parts pass."""

    def __init__(self, flags, witnesses):
        self.flags = flags
        self.witnesses = witnesses

    def __bool__(self):
        return all(self.flags.values())

    def __repr__(self):
        return f"ContinuityReport({self.flags})"


def check_strongly_continuous(Q0, Q1, iota):
    """True iff the injection preserves joins, meets, multiplication and both
    residuals; all conditions are checked pairwise plus the empty cases."""
    if iota.source != Q0.lattice or iota.target != Q1.lattice:
        raise ValidationFailed("map endpoints do not match the quantales")
    img = iota.image
    if len(set(img.tolist())) != Q0.n:
        seen = {}
        for x, v in enumerate(img.tolist()):
            if v in seen:
                raise NotInjective((seen[v], x))
            seen[v] = x
    flags, wit = {}, {}

    def record(name, lhs, rhs):
        ok = np.array_equal(lhs, rhs)
        flags[name] = bool(ok)
        if not ok:
            bad = np.argwhere(np.asarray(lhs) != np.asarray(rhs))
            wit[name] = tuple(int(v) for v in bad[0])

    ix = np.ix_(img, img)
    record("joins", img[Q0.lattice.join_table], Q1.lattice.join_table[ix])
    flags["joins"] &= bool(img[Q0.lattice.bot] == Q1.lattice.bot)
    record("meets", img[Q0.lattice.meet_table], Q1.lattice.meet_table[ix])
    flags["meets"] &= bool(img[Q0.lattice.top] == Q1.lattice.top)
    record("mult", img[Q0.mult], Q1.mult[ix])
    record("left_residuals", img[Q0.left_residual_table],
           Q1.left_residual_table[ix])
    record("right_residuals", img[Q0.right_residual_table],
           Q1.right_residual_table[ix])
    return ContinuityReport(flags, wit)


def chu(Q, validate=True):
    """The Chu construction on Q x Q^op.

    (x1,x2) * (y1,y2) = (x1*y1, y1\\x2 ^ y2/x1) with the swap (x1,x2) |->
    (x2,x1) as both negations; the result is a Girard quantale, unital iff Q
    is, with unit (u, top).
    """
    L = Q.lattice
    n = L.n
    carrier = product(L, L.dual())
    lres, rres = Q.left_residual_table, Q.right_residual_table
    mt, mult = L.meet_table, Q.mult

    second = mt[lres.T[None, :, :, None], rres.T[:, None, None, :]]
    comp = (mult[:, None, :, None] * n + second).reshape(n * n, n * n)

    ar2 = np.arange(n * n)
    swap = (ar2 % n) * n + ar2 // n

    CQ = Quantale(carrier, comp)
    first_l = mt[lres[:, None, :, None], rres[None, :, None, :]]
    CQ.__dict__["left_residual_table"] = _frozen(
        (first_l * n + mult.T[:, None, None, :]).reshape(n * n, n * n))
    first_r = mt[rres[:, None, :, None], lres[None, :, None, :]]
    CQ.__dict__["right_residual_table"] = _frozen(
        (first_r * n + mult.T[None, :, :, None]).reshape(n * n, n * n))

    F = FrobeniusStructure(CQ, EndoMap(carrier, swap), EndoMap(carrier, swap))
    if validate:
        check_quantale(carrier, comp)
        assert F.report.frobenius_valid and F.report.shift_holds
    return CQ, F


def trivial_quantale(L, duality=None):
    """x*y = bot everywhere; with an inverse antitone pair attached, a
    Frobenius structure (the shift relation holds vacuously)."""
    Q = check_quantale(L, np.full((L.n, L.n), L.bot, dtype=np.int64))
    if duality is None:
        return Q
    l = _image_array(duality[0], L.n)
    r = _image_array(duality[1], L.n)
    for name, img in (("l", l), ("r", r)):
        if len(set(img.tolist())) != L.n:
            raise NotADuality(f"{name} is not a bijection")
        viol = L.leq & ~L.leq[np.ix_(img, img)].T
        if viol.any():
            raise NotADuality(f"{name} is not antitone")
    ar = np.arange(L.n)
    if not ((l[r] == ar).all() and (r[l] == ar).all()):
        raise NotADuality("maps are not mutually inverse")
    F = FrobeniusStructure(Q, EndoMap(L, l), EndoMap(L, r))
    assert F.report.frobenius_valid
    return F
