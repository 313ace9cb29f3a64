"""Raney transforms, tight endomaps, and the two Girard quantales they form.

For an endofunction f on a complete lattice the transforms are

    rans(f)(x) = join of { f(t) | x not<= t }
    rani(f)(x) = meet of { f(t) | t not<= x }

rans always lands in sup-preserving maps, rani in meet-preserving ones, and
rans is left adjoint to rani pointwise. A map is tight when it is fixed by
rans o rani; the tight maps form a Girard quantale under composition with
the star negation star(f) = rans of the right adjoint of f. The bullet
quantale on all meet-preserving maps quotients onto its cotight part, which
rans carries isomorphically onto the tight quantale.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotMonotone, NotTight, ValidationFailed
from .lattice import (
    EndoMap,
    FiniteLattice,
    enumerate_sup_endomaps,
    left_adjoint,
    right_adjoint,
)
from .quantale import FrobeniusStructure, Quantale, check_frobenius


def _images(L, f):
    if isinstance(f, EndoMap):
        if f.lattice != L:
            raise ValidationFailed("endomap lives on a different lattice")
        return f.image
    img = np.asarray(f, dtype=np.int64)
    if img.shape != (L.n,) or img.min() < 0 or img.max() >= L.n:
        raise ValidationFailed("endomap image has wrong shape or range")
    return img


def _raney_sup_batch(L, imgs):
    """rans over the rows of an (N, n) image array."""
    N = imgs.shape[0]
    out = np.full((N, L.n), L.bot, dtype=np.int64)
    jt = L.join_table
    for t in range(L.n):
        mask = ~L.leq[:, t]
        if mask.any():
            out[:, mask] = jt[out[:, mask], imgs[:, t][:, None]]
    return out


def _raney_inf_batch(L, imgs):
    """rani over the rows of an (N, n) image array."""
    N = imgs.shape[0]
    out = np.full((N, L.n), L.top, dtype=np.int64)
    mt = L.meet_table
    for t in range(L.n):
        mask = ~L.leq[t, :]
        if mask.any():
            out[:, mask] = mt[out[:, mask], imgs[:, t][:, None]]
    return out


def raney_sup(f):
    """rans(f): always sup-preserving, and tight when f is meet-preserving."""
    L = f.lattice
    return EndoMap(L, _raney_sup_batch(L, f.image[None, :])[0])


def raney_inf(f):
    """rani(f): always meet-preserving."""
    L = f.lattice
    return EndoMap(L, _raney_inf_batch(L, f.image[None, :])[0])


def _rans_right_adjoint(L, img):
    # the pointwise adjoint of rans on arbitrary endofunctions:
    # g(y) = meet{t | f(t) not<= y}
    out = np.full(L.n, L.top, dtype=np.int64)
    mt = L.meet_table
    for t in range(L.n):
        mask = ~L.leq[img[t], :]
        out[mask] = mt[out[mask], t]
    return out


def tight_interior(f):
    """rans(rani(f)): the greatest tight map below f."""
    L = f.lattice
    return EndoMap(L, _raney_sup_batch(L, _raney_inf_batch(
        L, f.image[None, :]))[0])


def cotight_closure(f):
    """rani(rans(f)): the least cotight map above f."""
    L = f.lattice
    return EndoMap(L, _raney_inf_batch(L, _raney_sup_batch(
        L, f.image[None, :]))[0])


def is_tight(f):
    return tight_interior(f) == f


def is_cotight(f):
    return cotight_closure(f) == f


def star(f):
    """The tight negation rans(rho(f)) of a sup-preserving map."""
    g = right_adjoint(f)
    return raney_sup(g)


def c_map(L, y):
    """c_y: bot at bot, constantly y elsewhere; tight."""
    img = np.full(L.n, y, dtype=np.int64)
    img[L.bot] = L.bot
    return EndoMap(L, img)


def a_map(L, x):
    """a_x: bot on the downset of x, top elsewhere; tight."""
    img = np.where(L.leq[:, x], L.bot, L.top).astype(np.int64)
    return EndoMap(L, img)


def decompose_tight(f):
    """Write a tight map as the join of the generators c_y o a_x.

    Returns the pairs (g(t), t) for g = rani(f); the pointwise join of
    c_{g(t)} o a_t over them reproduces f, which is asserted.
    """
    L = f.lattice
    rd = tight_interior(f)
    if rd != f:
        bad = np.flatnonzero(rd.image != f.image)
        raise NotTight(int(bad[0]))
    g = raney_inf(f)
    pairs = [(int(g.image[t]), t) for t in range(L.n)]
    acc = np.full(L.n, L.bot, dtype=np.int64)
    for y, x in pairs:
        acc = L.join_table[acc, c_map(L, y).image[a_map(L, x).image]]
    assert np.array_equal(acc, f.image)
    return pairs


def meet_closure(f):
    """The least meet-preserving map above a monotone map.

    Fixpoint repair: force top |-> top, add g(x) ^ g(y) into g(x ^ y), and
    restore monotonicity, until stable. Each step is forced in any
    meet-preserving majorant, so the fixpoint is the least one.
    """
    L = f.lattice
    viol = L.leq & ~L.leq[np.ix_(f.image, f.image)]
    if viol.any():
        raise NotMonotone(tuple(int(v) for v in np.argwhere(viol)[0]))
    n, jt, mt = L.n, L.join_table, L.meet_table
    g = f.image.copy()
    g[L.top] = L.top
    while True:
        prev = g.copy()
        for x in range(n):
            for y in range(x, n):
                z = mt[x, y]
                g[z] = jt[g[z], mt[g[x], g[y]]]
        for z in range(n):
            for w in range(n):
                if L.leq[w, z]:
                    g[z] = jt[g[z], g[w]]
        if np.array_equal(g, prev):
            return EndoMap(L, g)


@dataclass(frozen=True)
class TightQuantale:
    """The Girard quantale of tight endomaps under composition."""

    lattice: FiniteLattice
    elements: tuple
    quantale: Quantale
    frobenius: FrobeniusStructure

    @property
    def n(self):
        return len(self.elements)

    def index_of(self, f):
        img = _images(self.lattice, f)
        idx = self._index.get(img.tobytes())
        if idx is None:
            raise ValidationFailed("map is not an element of the quantale")
        return idx

    def __eq__(self, other):
        return isinstance(other, TightQuantale) and \
            self.quantale == other.quantale

    def __hash__(self):
        return hash(self.quantale)


def _index_table(imgs):
    return {row.tobytes(): i for i, row in enumerate(imgs)}


def _lookup(table, imgs, what):
    flat = imgs.reshape(-1, imgs.shape[-1])
    out = np.empty(flat.shape[0], dtype=np.int64)
    for i, row in enumerate(flat):
        idx = table.get(row.tobytes())
        if idx is None:
            raise ValidationFailed(f"{what} escaped the enumerated carrier")
        out[i] = idx
    return out.reshape(imgs.shape[:-1])


def tight_quantale(L, max_candidates=10 ** 9):
    """Enumerate the tight endomaps of L and assemble their Girard quantale.

    Elements are sorted by image array. Composition is the multiplication,
    pointwise joins are the lattice joins, meets are the tight interior of
    pointwise meets, and the negation is star. Laws are not re-verified
    here; check_quantale and check_frobenius accept the result.
    """
    sup_maps = enumerate_sup_endomaps(L, max_candidates=max_candidates)
    imgs = np.asarray([m.image for m in sup_maps], dtype=np.int64)
    tight_rows = _raney_sup_batch(L, _raney_inf_batch(L, imgs))
    keep = (tight_rows == imgs).all(axis=1)
    imgs = imgs[keep]
    index = _index_table(imgs)

    leq_t = L.leq[imgs[:, None, :], imgs[None, :, :]].all(axis=2)
    lat = FiniteLattice.from_leq(leq_t)
    # pointwise joins of tight maps stay tight, so they are the lattice joins
    assert np.array_equal(
        lat.join_table,
        _lookup(index, L.join_table[imgs[:, None, :], imgs[None, :, :]],
                "pointwise join"))

    comp = _lookup(index, imgs[:, imgs], "composition")
    Q = Quantale(lat, comp)

    radj = np.asarray([right_adjoint(EndoMap(L, row)).image for row in imgs])
    star_idx = _lookup(index, _raney_sup_batch(L, radj), "star")
    F = FrobeniusStructure(Q, EndoMap(lat, star_idx), EndoMap(lat, star_idx))

    elements = tuple(EndoMap(L, row) for row in imgs)
    T = TightQuantale(L, elements, Q, F)
    object.__setattr__(T, "_index", index)
    return T


@dataclass(frozen=True, eq=False)
class IsoReport:
    """A candidate quantale isomorphism, as an index mapping plus flags."""

    mapping: np.ndarray
    flags: dict

    @property
    def passed(self):
        return all(self.flags.values())

    def __bool__(self):
        return self.passed


@dataclass(frozen=True, eq=False)
class BulletStructure:
    """The bullet quantale on meet-preserving endomaps of a lattice.

    Carries the self-adjoint Serre Galois connection perp(f) = rani of the
    left adjoint of f, whose nucleus is the cotight closure; the quotient
    onto the cotight maps; and the isomorphism that rans induces from that
    quotient onto the tight quantale.
    """

    lattice: FiniteLattice
    elements: tuple
    quantale: Quantale
    perp: EndoMap
    serre_report: object
    quotient: object
    frobenius: FrobeniusStructure
    tight: TightQuantale
    iso: IsoReport


def tensor_map(L, y, x):
    """The elementary tensor: top at top, y on the rest of the upset of x,
    bot elsewhere; rans of it is c_y o a_x."""
    img = np.where(L.leq[x, :], y, L.bot).astype(np.int64)
    img[L.top] = L.top
    return EndoMap(L, img)


def bullet_quantale(L, max_candidates=10 ** 9):
    """Assemble the bullet quantale g . f = meet_closure(rans(g) o f).

    Verifies the quantale laws, the Serre Galois connection perp, that its
    nucleus is the cotight closure, the quotient multiplication formula
    rani(rans(g) o rans(f)), and that rans is an isomorphism from the
    cotight quotient onto tight_quantale(L) transporting perp to star.
    """
    from .nuclei import serre_gc_quotient
    from .quantale import check_quantale

    dual_maps = enumerate_sup_endomaps(L.dual(),
                                       max_candidates=max_candidates)
    imgs = np.asarray([m.image for m in dual_maps], dtype=np.int64)
    N = imgs.shape[0]
    index = _index_table(imgs)
    elements = tuple(EndoMap(L, row) for row in imgs)

    leq_h = L.leq[imgs[:, None, :], imgs[None, :, :]].all(axis=2)
    lat = FiniteLattice.from_leq(leq_h)
    # meets are pointwise; joins are the meet closure of the pointwise join
    assert np.array_equal(
        lat.meet_table,
        _lookup(index, L.meet_table[imgs[:, None, :], imgs[None, :, :]],
                "pointwise meet"))

    rans_rows = _raney_sup_batch(L, imgs)
    mult = np.empty((N, N), dtype=np.int64)
    for i in range(N):
        for j in range(N):
            closed = meet_closure(EndoMap(L, rans_rows[i][imgs[j]]))
            idx = index.get(closed.image.tobytes())
            if idx is None:
                raise ValidationFailed("bullet product escaped the carrier")
            mult[i, j] = idx
    Q = check_quantale(lat, mult)

    perp_rows = _raney_inf_batch(
        L, np.asarray([left_adjoint(EndoMap(L, row)).image for row in imgs]))
    perp_idx = _lookup(index, perp_rows, "perp")
    perp = EndoMap(lat, perp_idx)
    serre_report = check_frobenius(Q, perp_idx, perp_idx)
    assert serre_report.serre_gc_valid

    nuc, quot, Fq = serre_gc_quotient(Q, perp_idx, perp_idx)
    ranD_idx = _lookup(index, _raney_inf_batch(L, rans_rows),
                       "cotight closure")
    assert np.array_equal(nuc.image, ranD_idx)

    # on cotight maps the induced product is rani(rans(g) o rans(f))
    sub = np.asarray(quot.closed, dtype=np.int64)
    for a, i in enumerate(sub):
        for b, j in enumerate(sub):
            direct = _raney_inf_batch(
                L, rans_rows[i][rans_rows[j]][None, :])[0]
            assert quot.closed[quot.quantale.mult[a, b]] == \
                index[direct.tobytes()]

    T = tight_quantale(L, max_candidates=max_candidates)
    mapping = np.asarray([T.index_of(rans_rows[i]) for i in sub])
    flags = {}
    flags["bijective"] = len(set(mapping.tolist())) == T.n == len(sub)
    qlat = quot.quantale.lattice
    flags["order_iso"] = bool(np.array_equal(
        qlat.leq, T.quantale.lattice.leq[np.ix_(mapping, mapping)]))
    flags["mult"] = bool(np.array_equal(
        mapping[quot.quantale.mult],
        T.quantale.mult[np.ix_(mapping, mapping)]))
    flags["negation"] = bool(np.array_equal(
        mapping[Fq.lneg.image], T.frobenius.lneg.image[mapping]))
    iso = IsoReport(mapping, flags)
    assert iso.passed

    return BulletStructure(L, elements, Q, perp, serre_report, quot, Fq,
                           T, iso)
