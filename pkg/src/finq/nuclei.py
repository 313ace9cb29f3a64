"""Nuclei, quotient quantales, Serre Galois connections, phase quantales.

A nucleus j on a quantale yields the quotient on its fixed points with
x *_j y = j(x * y).  Serre Galois connections induce such nuclei via
j = l o r and their restrictions equip the quotient with a Frobenius
structure.  Powerset quantales over finite semigroups, together with the
Galois maps of a binary relation, specialize this to phase quantales; the
representation theorem runs the construction backwards on principal
downsets without ever materializing a powerset.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    BudgetExceeded,
    NotANucleus,
    NotAssociativeRelation,
    NotSerreDualityOnQuotient,
    NotSerreGC,
    NotWeaklySymmetric,
    ValidationFailed,
)
from .lattice import EndoMap, FiniteLattice, boolean, join_of
from .quantale import FrobeniusStructure, Quantale, check_frobenius


@dataclass(frozen=True)
class Nucleus:
    """A closure operator j with j(x)*j(y) <= j(x*y)."""

    quantale: Quantale
    image: np.ndarray

    def __post_init__(self):
        img = np.asarray(self.image, dtype=np.int64)
        if img.shape != (self.quantale.n,):
            raise ValidationFailed("nucleus image has wrong shape")
        img.setflags(write=False)
        object.__setattr__(self, "image", img)

    def __call__(self, x):
        return int(self.image[x])

    def __eq__(self, other):
        return isinstance(other, Nucleus) and \
            self.quantale == other.quantale and \
            np.array_equal(self.image, other.image)

    def __hash__(self):
        return hash((self.quantale, self.image.tobytes()))


class NucleusReport(NamedTuple):
    ok: bool
    law: Optional[str]
    witness: Optional[tuple]

    def __bool__(self):
        return self.ok


def is_nucleus(Q, j):
    """Check the closure-operator laws and lax multiplicativity of j.

    Returns a report carrying the first violated law and a witness. When the
    laws hold, the equivalent split form x*j(y) <= j(x*y), j(x)*y <= j(x*y)
    is verified as well.
    """
    n, leq = Q.n, Q.lattice.leq
    img = j.image if isinstance(j, (Nucleus, EndoMap)) else \
        np.asarray(j, dtype=np.int64)
    if img.shape != (n,) or img.min() < 0 or img.max() >= n:
        return NucleusReport(False, "shape", None)
    ar = np.arange(n)

    bad = np.argwhere(leq & ~leq[np.ix_(img, img)])
    if bad.size:
        return NucleusReport(False, "isotone", tuple(map(int, bad[0])))
    bad = np.argwhere(~leq[ar, img])
    if bad.size:
        return NucleusReport(False, "increasing", (int(bad[0][0]),))
    bad = np.argwhere(img[img] != img)
    if bad.size:
        return NucleusReport(False, "idempotent", (int(bad[0][0]),))

    jmult = img[Q.mult]
    bad = np.argwhere(~leq[Q.mult[np.ix_(img, img)], jmult])
    if bad.size:
        return NucleusReport(False, "lax_multiplicative",
                             tuple(map(int, bad[0])))
    # split form is equivalent for closure operators
    assert leq[Q.mult[:, img], jmult].all()
    assert leq[Q.mult[img, :], jmult].all()
    return NucleusReport(True, None, None)


@dataclass(frozen=True)
class QuotientQuantale:
    """The quantale on the j-closed elements of an ambient quantale."""

    ambient: Quantale
    nucleus: Nucleus
    closed: tuple
    quantale: Quantale
    to_closed: np.ndarray

    def closed_index(self, ambient_element):
        """Index within the quotient of a closed ambient element."""
        idx = int(self.to_closed[ambient_element])
        if idx < 0:
            raise ValidationFailed(
                f"element {ambient_element} is not closed")
        return idx


def quotient_quantale(Q, j):
    """Restrict Q to the fixed points of the nucleus j.

    Joins are j of the ambient join, meets are ambient, and the induced
    multiplication is x *_j y = j(x * y). The projection j: Q -> Q_j is
    checked to be a surjective quantale homomorphism.
    """
    rep = is_nucleus(Q, j)
    if not rep:
        raise NotANucleus(rep.law, rep.witness)
    img = j.image if isinstance(j, (Nucleus, EndoMap)) else \
        np.asarray(j, dtype=np.int64)
    nuc = j if isinstance(j, Nucleus) else Nucleus(Q, img)

    ar = np.arange(Q.n)
    closed = tuple(int(x) for x in ar[img == ar])
    sub = np.asarray(closed, dtype=np.int64)
    to_closed = np.full(Q.n, -1, dtype=np.int64)
    to_closed[sub] = np.arange(len(closed))

    L = Q.lattice
    labels = None
    if L.labels is not None:
        labels = [L.labels[x] for x in closed]
    lat = FiniteLattice.from_leq(L.leq[np.ix_(sub, sub)], labels=labels)
    # the least closed upper bound is j of the ambient join
    assert np.array_equal(
        sub[lat.join_table], img[L.join_table[np.ix_(sub, sub)]])
    assert np.array_equal(sub[lat.meet_table], L.meet_table[np.ix_(sub, sub)])

    mult_j = to_closed[img[Q.mult[np.ix_(sub, sub)]]]
    quot = Quantale(lat, mult_j)

    # j is a homomorphism: j(x*y) = j(x) *_j j(y), surjective by fixpoints
    jq = to_closed[img]
    assert np.array_equal(jq[Q.mult], mult_j[np.ix_(jq, jq)])
    return QuotientQuantale(Q, nuc, closed, quot, to_closed)


_SERRE_FLAGS = ("antitone", "is_galois", "commutes", "shift_holds")


def serre_gc_quotient(Q, l, r):
    """Quotient Q by the nucleus j = l o r of a Serre Galois connection.

    (l, r) must be an antitone Galois connection whose composites commute
    and which satisfies the shift relation x*z <= l(y) iff z*y <= r(x).
    The restrictions of l and r to the closed elements form a Frobenius
    structure on the quotient.
    """
    rep = check_frobenius(Q, l, r)
    if not rep.serre_gc_valid:
        for name in _SERRE_FLAGS:
            if not getattr(rep, name):
                wit = rep.witnesses.get(name) \
                    or rep.witnesses.get("antitone_lneg") \
                    or rep.witnesses.get("antitone_rneg")
                raise NotSerreGC(name, wit)
    from .quantale import _image_array
    l_arr = _image_array(l, Q.n)
    r_arr = _image_array(r, Q.n)
    j_img = l_arr[r_arr]
    nrep = is_nucleus(Q, j_img)
    assert nrep, nrep.law
    quot = quotient_quantale(Q, Nucleus(Q, j_img))

    sub = np.asarray(quot.closed, dtype=np.int64)
    l_j = quot.to_closed[l_arr[sub]]
    r_j = quot.to_closed[r_arr[sub]]
    assert (l_j >= 0).all() and (r_j >= 0).all()
    F = FrobeniusStructure(quot.quantale,
                           EndoMap(quot.quantale.lattice, l_j),
                           EndoMap(quot.quantale.lattice, r_j))
    assert F.report.frobenius_valid and F.report.shift_holds
    return quot.nucleus, quot, F


def lift_serre(Q, j, l, r):
    """Lift a Serre duality (l, r) on Q_j to the Serre GC (l o j, r o j).

    l and r act on the closed indices of the quotient by j. The lifted pair
    is validated as a Serre Galois connection on Q and its quotient is
    checked to reproduce (Q_j, l, r).
    """
    quot = j if isinstance(j, QuotientQuantale) else \
        quotient_quantale(Q, j)
    qn = quot.quantale.n
    from .quantale import _image_array
    l_j = _image_array(l, qn)
    r_j = _image_array(r, qn)
    rep = check_frobenius(quot.quantale, l_j, r_j)
    for name in ("antitone", "is_inverse_pair", "shift_holds"):
        if not getattr(rep, name):
            wit = rep.witnesses.get(name) \
                or rep.witnesses.get("antitone_lneg") \
                or rep.witnesses.get("antitone_rneg")
            raise NotSerreDualityOnQuotient(name, wit)

    sub = np.asarray(quot.closed, dtype=np.int64)
    jc = quot.to_closed[quot.nucleus.image]
    lifted_l = sub[l_j[jc]]
    lifted_r = sub[r_j[jc]]
    lrep = check_frobenius(Q, lifted_l, lifted_r)
    assert lrep.serre_gc_valid

    # round-trip: quotienting by the lifted pair restores the input
    _, quot2, F2 = serre_gc_quotient(Q, lifted_l, lifted_r)
    assert quot2.closed == quot.closed
    assert np.array_equal(quot2.quantale.mult, quot.quantale.mult)
    assert np.array_equal(F2.lneg.image, l_j)
    assert np.array_equal(F2.rneg.image, r_j)
    return (EndoMap(Q.lattice, lifted_l), EndoMap(Q.lattice, lifted_r))


def representable_flags(Q, l, r):
    """Search for an element z with r(x) = x\\z and l(x) = z/x for all x."""
    from .quantale import _image_array
    l_arr = _image_array(l, Q.n)
    r_arr = _image_array(r, Q.n)
    lres = Q.left_residual_table
    rres = Q.right_residual_table
    found = None
    for z in range(Q.n):
        if np.array_equal(r_arr, lres[:, z]) and \
                np.array_equal(l_arr, rres[z, :]):
            found = z
            break
    if found is None:
        from .quantale import find_unit
        if find_unit(Q).unit is not None:
            # every Serre GC on a unital quantale is representable
            assert not check_frobenius(Q, l_arr, r_arr).serre_gc_valid
    return {"representable_by": found}


@dataclass(frozen=True)
class FiniteSemigroup:
    """An associative binary operation on {0, ..., n-1}."""

    n: int
    op: np.ndarray
    labels: Optional[tuple] = None

    def __post_init__(self):
        op = np.asarray(self.op, dtype=np.int64)
        if op.shape != (self.n, self.n):
            raise ValidationFailed("semigroup table has wrong shape")
        if op.size and (op.min() < 0 or op.max() >= self.n):
            raise ValidationFailed("semigroup table entry out of range")
        bad = np.argwhere(op[op] != op[:, op])
        if bad.size:
            x, y, z = map(int, bad[0])
            raise ValidationFailed(
                f"operation not associative at ({x}, {y}, {z})")
        op.setflags(write=False)
        object.__setattr__(self, "op", op)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))


def cyclic_group(k):
    ar = np.arange(k)
    return FiniteSemigroup(k, (ar[:, None] + ar[None, :]) % k)


def left_zero_semigroup(k):
    ar = np.arange(k)
    return FiniteSemigroup(k, np.broadcast_to(ar[:, None], (k, k)).copy())


@dataclass(frozen=True)
class BinaryRelation:
    """A relation on {0, ..., n-1}, stored as a boolean table."""

    n: int
    rel: np.ndarray

    def __post_init__(self):
        rel = np.asarray(self.rel, dtype=bool)
        if rel.shape != (self.n, self.n):
            raise ValidationFailed("relation table has wrong shape")
        rel.setflags(write=False)
        object.__setattr__(self, "rel", rel)


_POWERSET_TABLE_BUDGET = 2048


def powerset_quantale(S, max_elements=20):
    """The quantale of subsets of a finite semigroup, X*Y = {x.y}.

    Subsets are encoded as bitmasks indexing the boolean lattice, so the
    carrier has 2^|S| elements; refuses semigroups whose tables would not
    fit in memory. Laws hold by construction and are not re-checked here.
    """
    n = S.n
    if n > max_elements:
        raise BudgetExceeded(2 ** n, 2 ** max_elements, "powerset carrier")
    N = 1 << n
    if N > _POWERSET_TABLE_BUDGET:
        raise BudgetExceeded(N * N, _POWERSET_TABLE_BUDGET ** 2,
                             "powerset tables")
    # rows[i, Y] = bitmask {i.y | y in Y}, then OR over i in X
    rows = np.zeros((n, N), dtype=np.int64)
    bits = np.int64(1) << S.op
    for Y in range(1, N):
        lsb = Y & -Y
        rows[:, Y] = rows[:, Y ^ lsb] | bits[:, lsb.bit_length() - 1]
    mult = np.zeros((N, N), dtype=np.int64)
    for X in range(1, N):
        lsb = X & -X
        mult[X, :] = mult[X ^ lsb, :] | rows[lsb.bit_length() - 1, :]
    return Quantale(boolean(n), mult)


class RelationGaloisReport(NamedTuple):
    l: np.ndarray
    r: np.ndarray
    associative: bool
    weakly_symmetric: bool
    r_singletons_l_closed: bool
    l_singletons_r_closed: bool
    witnesses: dict


def relation_galois(S, R):
    """Galois maps of a relation on a semigroup, with the phase flags.

    r(Z) = {u | z R u for all z in Z} and l(Y) = {u | u R y for all y in Y},
    returned as arrays over subset bitmasks. The relation is associative
    when x.y R z iff x R y.z for all triples; weak symmetry is decided by
    checking that every r({x}) lies in the image of l and dually.
    """
    n = S.n
    if n > 20:
        raise BudgetExceeded(2 ** n, 2 ** 20, "relation Galois maps")
    rel = R.rel if isinstance(R, BinaryRelation) else \
        BinaryRelation(n, R).rel
    N = 1 << n
    weights = np.int64(1) << np.arange(n)
    rowbits = (rel * weights[None, :]).sum(axis=1)
    colbits = (rel * weights[:, None]).sum(axis=0)
    full = np.int64(N - 1)
    r_arr = np.empty(N, dtype=np.int64)
    l_arr = np.empty(N, dtype=np.int64)
    r_arr[0] = l_arr[0] = full
    for Z in range(1, N):
        lsb = Z & -Z
        b = lsb.bit_length() - 1
        r_arr[Z] = r_arr[Z ^ lsb] & rowbits[b]
        l_arr[Z] = l_arr[Z ^ lsb] & colbits[b]

    witnesses = {}
    assoc_lhs = rel[S.op, :]
    assoc_rhs = rel[:, S.op]
    associative = bool((assoc_lhs == assoc_rhs).all())
    if not associative:
        witnesses["associative"] = tuple(
            int(v) for v in np.argwhere(assoc_lhs != assoc_rhs)[0])

    img_l = set(int(v) for v in l_arr)
    img_r = set(int(v) for v in r_arr)
    r_ok, l_ok = True, True
    for x in range(n):
        if int(r_arr[1 << x]) not in img_l:
            r_ok = False
            witnesses.setdefault("r_singletons_l_closed", (x,))
        if int(l_arr[1 << x]) not in img_r:
            l_ok = False
            witnesses.setdefault("l_singletons_r_closed", (x,))
    return RelationGaloisReport(l_arr, r_arr, associative, r_ok and l_ok,
                                r_ok, l_ok, witnesses)


def phase_quantale(S, R, max_elements=20):
    """Quotient the powerset quantale of S by the Galois maps of R.

    Requires R associative and weakly symmetric. The closed sets are also
    enumerated independently, as the intersection closure of the r-images
    of singletons, and compared against the nucleus fixpoints.
    """
    gal = relation_galois(S, R)
    if not gal.associative:
        raise NotAssociativeRelation(gal.witnesses.get("associative"))
    if not gal.weakly_symmetric:
        raise NotWeaklySymmetric(
            gal.witnesses.get("r_singletons_l_closed")
            or gal.witnesses.get("l_singletons_r_closed"))
    PQ = powerset_quantale(S, max_elements=max_elements)
    _, quot, F = serre_gc_quotient(PQ, gal.l, gal.r)

    seeds = {int(gal.r[0])} | {int(gal.r[1 << x]) for x in range(S.n)}
    family = set(seeds)
    frontier = list(seeds)
    while frontier:
        a = frontier.pop()
        for b in list(family):
            c = a & b
            if c not in family:
                family.add(c)
                frontier.append(c)
    assert family == set(quot.closed)
    return quot, F


@dataclass
class RepresentationReport:
    """Outcome of rebuilding a Frobenius quantale from its phase relation.

    The relation x R y iff x <= lneg(y) on the carrier-as-semigroup has
    principal downsets as its closed sets; the report records whether the
    assignment x -> (downset of x) is an isomorphism onto that phase
    structure, negations included.
    """

    flags: dict
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.flags.values())

    def __bool__(self):
        return self.passed

    def to_dict(self):
        return {
            "flags": dict(self.flags),
            "passed": self.passed,
            "witnesses": {k: list(v) if isinstance(v, tuple) else v
                          for k, v in self.witnesses.items()},
        }


def represent_frobenius(Q, F):
    """Verify the principal-downset representation of a Frobenius quantale.

    Works on downset bitmasks over the carrier, never on the full powerset.
    Checks, with witnesses: the induced relation is associative and weakly
    symmetric at the level of singleton images; the intersection closure of
    the r-images is exactly the family of principal downsets; x -> downset
    is bijective and transports multiplication, joins, meets and both
    negations; and joining a downset returns its generator.
    """
    if not F.report.frobenius_valid:
        raise ValidationFailed("not a valid Frobenius structure")
    n = Q.n
    leq = Q.lattice.leq
    l_arr, r_arr = F.lneg.image, F.rneg.image
    flags, witnesses = {}, {}

    def record(name, ok, wit=None):
        flags[name] = bool(ok)
        if not ok and wit is not None:
            witnesses[name] = wit

    # relation x R y iff x <= lneg(y)
    Rbool = leq[:, l_arr]
    lhs = Rbool[Q.mult, :]
    rhs = Rbool[:, Q.mult]
    ok = bool((lhs == rhs).all())
    wit = None if ok else tuple(int(v) for v in np.argwhere(lhs != rhs)[0])
    record("associative_relation", ok, wit)

    weights = [1 << u for u in range(n)]
    down = [int(sum(w for u, w in enumerate(weights) if leq[u, x]))
            for x in range(n)]
    rrow = [int(sum(w for y, w in enumerate(weights) if Rbool[x, y]))
            for x in range(n)]
    full = (1 << n) - 1

    # r({x}) is the principal downset of rneg(x): the set-level form of the
    # Galois-connection law x <= lneg(u) iff u <= rneg(x)
    ok_r = all(rrow[x] == down[r_arr[x]] for x in range(n))
    record("r_singletons_principal", ok_r)

    family = {full} | {rrow[x] for x in range(n)}
    frontier = list(family)
    while frontier:
        a = frontier.pop()
        for b in list(family):
            c = a & b
            if c not in family:
                family.add(c)
                frontier.append(c)
    record("closed_family_is_principal_downsets",
           family == set(down) and len(set(down)) == n)

    # dual weak-symmetry condition: every l-image of a singleton lies in
    # the closure family generated by the r-images
    ok_l = all(down[l_arr[y]] in family for y in range(n))
    record("l_singletons_r_closed", ok_l)
    record("weakly_symmetric", ok_r and ok_l)

    mult_ok, mult_wit = True, None
    for x in range(n):
        dx = np.flatnonzero(leq[:, x])
        for y in range(n):
            dy = np.flatnonzero(leq[:, y])
            prod = np.unique(Q.mult[np.ix_(dx, dy)])
            if join_of(Q.lattice, prod) != int(Q.mult[x, y]):
                mult_ok, mult_wit = False, (x, y)
                break
        if not mult_ok:
            break
    record("mult_transport", mult_ok, mult_wit)

    def set_l(mask):
        out = full
        for y in range(n):
            if mask >> y & 1:
                out &= int(sum(w for u, w in enumerate(weights)
                               if Rbool[u, y]))
        return out

    def set_r(mask):
        out = full
        for z in range(n):
            if mask >> z & 1:
                out &= rrow[z]
        return out

    neg_ok = all(set_l(down[x]) == down[l_arr[x]] and
                 set_r(down[x]) == down[r_arr[x]] for x in range(n))
    record("negation_transport", neg_ok)

    jt, mt = Q.lattice.join_table, Q.lattice.meet_table
    join_ok, meet_ok = True, True
    for x in range(n):
        for y in range(n):
            union = down[x] | down[y]
            if set_l(set_r(union)) != down[jt[x, y]]:
                join_ok = False
            if down[x] & down[y] != down[mt[x, y]]:
                meet_ok = False
    record("join_transport", join_ok)
    record("meet_transport", meet_ok)

    round_ok = all(
        join_of(Q.lattice, [u for u in range(n) if down[x] >> u & 1]) == x
        for x in range(n))
    record("round_trip", round_ok)
    return RepresentationReport(flags, witnesses)
