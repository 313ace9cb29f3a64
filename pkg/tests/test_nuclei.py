import numpy as np
import pytest

import oracles
from finq.errors import (
    BudgetExceeded,
    NotANucleus,
    NotAssociativeRelation,
    NotSerreDualityOnQuotient,
    NotSerreGC,
    NotWeaklySymmetric,
    ValidationFailed,
)
from finq.lattice import EndoMap, chain, m_lattice
from finq.nuclei import (
    BinaryRelation,
    FiniteSemigroup,
    Nucleus,
    cyclic_group,
    is_nucleus,
    left_zero_semigroup,
    lift_serre,
    phase_quantale,
    powerset_quantale,
    quotient_quantale,
    relation_galois,
    represent_frobenius,
    representable_flags,
    serre_gc_quotient,
)
from finq.quantale import (
    FrobeniusStructure,
    check_quantale,
    chu,
    element_flags,
    find_unit,
    frobenius_from_dualizing,
    trivial_quantale,
)
from test_quantale import (
    and_quantale,
    atom_cycle_duality,
    counterexample_3chain,
)


def test_is_nucleus_basic():
    Q = counterexample_3chain()
    assert is_nucleus(Q, np.arange(3))
    assert is_nucleus(Q, [1, 1, 2])
    top = Q.lattice.top
    assert is_nucleus(trivial_quantale(chain(3)), [top] * 3)


def test_is_nucleus_witnesses():
    Q = counterexample_3chain()
    rep = is_nucleus(Q, [0, 0, 2])
    assert (rep.law, rep.witness) == ("increasing", (1,))
    rep = is_nucleus(Q, [1, 0, 2])
    assert rep.law == "isotone"
    rep = is_nucleus(Q, [1, 2, 2])
    assert rep.law == "idempotent" and rep.witness == (0,)
    # closure operator that is not laxly multiplicative: j(1)*j(1) = 1 > j(0)
    rep = is_nucleus(Q, [0, 2, 2])
    assert (rep.law, rep.witness) == ("lax_multiplicative", (1, 1))


def test_quotient_counterexample():
    Q = counterexample_3chain()
    quot = quotient_quantale(Q, [1, 1, 2])
    assert quot.closed == (1, 2)
    assert np.array_equal(quot.quantale.mult, np.zeros((2, 2), int))
    assert quot.to_closed[0] == -1
    with pytest.raises(ValidationFailed):
        quot.closed_index(0)
    assert quot.closed_index(2) == 1


def test_quotient_identity_nucleus():
    Q = counterexample_3chain()
    quot = quotient_quantale(Q, Nucleus(Q, np.arange(3)))
    assert quot.quantale == Q


def test_quotient_rejects_non_nucleus():
    Q = counterexample_3chain()
    with pytest.raises(NotANucleus) as exc:
        quotient_quantale(Q, [0, 0, 2])
    assert exc.value.law == "increasing"


def test_serre_gc_quotient_counterexample():
    """Double negation at 0 collapses the 3-chain to the trivial 2-chain
    quantale; 0 itself is not closed."""
    Q = counterexample_3chain()
    neg = [2, 2, 1]
    nuc, quot, F = serre_gc_quotient(Q, neg, neg)
    assert list(nuc.image) == [1, 1, 2]
    assert quot.closed == (1, 2)
    assert np.array_equal(quot.quantale.mult, np.zeros((2, 2), int))
    assert list(F.lneg.image) == [1, 0]
    assert F.girard
    assert 0 not in quot.closed


def test_serre_gc_quotient_booleanization():
    """Double negation on the Heyting 3-chain yields the 2-element boolean
    quantale; here 0 is closed and the quotient is unital."""
    Q = and_quantale(chain(3))
    neg = [2, 0, 0]
    nuc, quot, F = serre_gc_quotient(Q, neg, neg)
    assert quot.closed == (0, 2)
    assert find_unit(quot.quantale).unit == 1
    assert list(F.lneg.image) == [1, 0]


def test_serre_gc_quotient_inverse_pair_is_identity_nucleus():
    L, l, r = atom_cycle_duality()
    Q = trivial_quantale(L)
    nuc, quot, F = serre_gc_quotient(Q, l, r)
    assert list(nuc.image) == list(range(5))
    assert quot.closed == tuple(range(5))
    assert not F.girard


def test_serre_gc_quotient_rejects():
    Q = trivial_quantale(chain(2))
    with pytest.raises(NotSerreGC) as exc:
        serre_gc_quotient(Q, [0, 1], [0, 1])
    assert exc.value.flag == "antitone"
    with pytest.raises(NotSerreGC) as exc:
        serre_gc_quotient(Q, [0, 0], [0, 0])
    assert exc.value.flag == "is_galois"
    assert exc.value.witness == (0, 1)


def test_lift_serre_counterexample():
    Q = counterexample_3chain()
    _, quot, _ = serre_gc_quotient(Q, [2, 2, 1], [2, 2, 1])
    L, R = lift_serre(Q, quot, [1, 0], [1, 0])
    assert list(L.image) == [2, 2, 1]
    assert list(R.image) == [2, 2, 1]


def test_lift_serre_identity_nucleus_returns_input():
    L, l, r = atom_cycle_duality()
    Q = trivial_quantale(L)
    quot = quotient_quantale(Q, np.arange(5))
    lifted_l, lifted_r = lift_serre(Q, quot, l, r)
    assert list(lifted_l.image) == l
    assert list(lifted_r.image) == r


def test_lift_serre_rejects_non_duality():
    Q = counterexample_3chain()
    quot = quotient_quantale(Q, [1, 1, 2])
    with pytest.raises(NotSerreDualityOnQuotient) as exc:
        lift_serre(Q, quot, [0, 1], [0, 1])
    assert exc.value.flag == "antitone"


def test_representable_flags():
    Q = counterexample_3chain()
    assert representable_flags(Q, [2, 2, 1], [2, 2, 1]) == \
        {"representable_by": 0}

    L, l, r = atom_cycle_duality()
    assert representable_flags(trivial_quantale(L), l, r) == \
        {"representable_by": None}

    Q = and_quantale(chain(2))
    F = frobenius_from_dualizing(Q, 0)
    flags = representable_flags(Q, F.lneg, F.rneg)
    unit = find_unit(Q).unit
    assert flags["representable_by"] == F.rneg(unit) == 0


def test_semigroup_validation():
    with pytest.raises(ValidationFailed):
        FiniteSemigroup(2, [[0, 1], [1, 2]])
    with pytest.raises(ValidationFailed):
        # x.y = max(x,y)+... a non-associative table
        FiniteSemigroup(3, [[0, 1, 2], [1, 2, 0], [2, 1, 0]])
    S = cyclic_group(3)
    assert S.op[1, 2] == 0


def test_powerset_quantale_z2():
    PQ = powerset_quantale(cyclic_group(2))
    assert PQ.n == 4
    # {1}*{1} = {0}
    assert PQ.mult[2, 2] == 1
    check_quantale(PQ.lattice, PQ.mult)
    assert find_unit(PQ).unit == 1


def test_powerset_quantale_left_zero():
    S = left_zero_semigroup(2)
    PQ = powerset_quantale(S)
    check_quantale(PQ.lattice, PQ.mult)
    for X in range(4):
        for Y in range(4):
            assert PQ.mult[X, Y] == (X if Y else 0)


def test_powerset_residuals_match_set_comprehension():
    for S in [cyclic_group(2), cyclic_group(3), left_zero_semigroup(2)]:
        PQ = powerset_quantale(S)
        for X in range(PQ.n):
            xs = {i for i in range(S.n) if X >> i & 1}
            for Y in range(PQ.n):
                ys = {i for i in range(S.n) if Y >> i & 1}
                left, right = oracles.powerset_residuals_bruteforce(
                    S.op, S.n, xs, ys)
                assert PQ.left_residual_table[X, Y] == \
                    sum(1 << s for s in left)
                assert PQ.right_residual_table[Y, X] == \
                    sum(1 << s for s in right)


def test_powerset_budget():
    with pytest.raises(BudgetExceeded):
        powerset_quantale(cyclic_group(12))
    with pytest.raises(BudgetExceeded):
        powerset_quantale(cyclic_group(4), max_elements=3)


def orthogonality_z2():
    return cyclic_group(2), BinaryRelation(2, [[True, False], [False, True]])


def test_relation_galois_orthogonality():
    S, R = orthogonality_z2()
    rep = relation_galois(S, R)
    assert rep.associative and rep.weakly_symmetric
    assert list(rep.r) == [3, 1, 2, 0]
    assert list(rep.l) == [3, 1, 2, 0]


def test_relation_galois_total_and_empty():
    S = cyclic_group(2)
    rep = relation_galois(S, BinaryRelation(2, np.ones((2, 2), bool)))
    assert rep.associative and rep.weakly_symmetric
    assert list(rep.l) == [3, 3, 3, 3] and list(rep.r) == [3, 3, 3, 3]
    rep = relation_galois(S, BinaryRelation(2, np.zeros((2, 2), bool)))
    assert rep.associative and rep.weakly_symmetric
    assert list(rep.r) == [3, 0, 0, 0]


def test_relation_galois_flags_negative():
    S = cyclic_group(2)
    rep = relation_galois(S, BinaryRelation(2, [[True, True],
                                                [False, False]]))
    assert not rep.associative
    assert rep.witnesses["associative"] == (0, 1, 0)

    # rows constant makes R associative over a left-zero semigroup, but
    # r({1}) = {} is not an l-image and l({0}) = {0} is not an r-image
    S = left_zero_semigroup(2)
    rep = relation_galois(S, BinaryRelation(2, [[True, True],
                                                [False, False]]))
    assert rep.associative
    assert not rep.weakly_symmetric
    assert not rep.r_singletons_l_closed
    assert not rep.l_singletons_r_closed
    assert rep.witnesses["r_singletons_l_closed"] == (1,)
    assert rep.witnesses["l_singletons_r_closed"] == (0,)


def test_phase_quantale_z2_orthogonality():
    S, R = orthogonality_z2()
    quot, F = phase_quantale(S, R)
    assert quot.closed == (0, 1, 2, 3)
    assert F.girard
    assert F.report.frobenius_valid and F.report.shift_holds
    assert find_unit(quot.quantale).unit == 1
    zero = F.rneg(find_unit(quot.quantale).unit)
    assert element_flags(quot.quantale, zero)["dualizing"]


def test_phase_quantale_symmetric_is_girard():
    S = cyclic_group(2)
    R = BinaryRelation(2, [[False, True], [True, False]])
    quot, F = phase_quantale(S, R)
    assert F.girard
    assert list(F.lneg.image) == [3, 2, 1, 0]


def test_phase_quantale_left_zero_degenerate():
    S = left_zero_semigroup(2)
    quot, F = phase_quantale(S, BinaryRelation(2, np.zeros((2, 2), bool)))
    assert quot.closed == (0, 3)
    assert np.array_equal(quot.quantale.mult, [[0, 0], [0, 1]])
    assert list(F.lneg.image) == [1, 0]


def test_phase_quantale_rejections():
    S = cyclic_group(2)
    with pytest.raises(NotAssociativeRelation):
        phase_quantale(S, BinaryRelation(2, [[True, True],
                                             [False, False]]))
    S = left_zero_semigroup(2)
    with pytest.raises(NotWeaklySymmetric):
        phase_quantale(S, BinaryRelation(2, [[True, True],
                                             [False, False]]))


def test_represent_trivial_2chain():
    F = trivial_quantale(chain(2), duality=([1, 0], [1, 0]))
    rep = represent_frobenius(F.quantale, F)
    assert rep.passed, rep.flags


def test_represent_chu_of_trivial_2chain():
    CQ, F = chu(trivial_quantale(chain(2)))
    rep = represent_frobenius(CQ, F)
    assert rep.passed, rep.flags


def test_represent_atom_cycle():
    L, l, r = atom_cycle_duality()
    F = trivial_quantale(L, duality=(l, r))
    rep = represent_frobenius(F.quantale, F)
    assert rep.passed, rep.flags


def test_represent_rejects_invalid():
    Q = trivial_quantale(chain(2))
    F = FrobeniusStructure(Q, EndoMap(Q.lattice, [0, 1]),
                           EndoMap(Q.lattice, [0, 1]))
    with pytest.raises(ValidationFailed):
        represent_frobenius(Q, F)


def test_commuting_images_on_valid_pairs():
    L, l, r = atom_cycle_duality()
    for F in [trivial_quantale(chain(2), duality=([1, 0], [1, 0])),
              trivial_quantale(L, duality=(l, r)),
              chu(counterexample_3chain())[1]]:
        assert F.report.commutes and F.report.images_coincide


def test_nucleus_quotient_join_rule():
    """Joins in the quotient are j applied to the ambient join."""
    Q = and_quantale(chain(3))
    quot = quotient_quantale(Q, [2, 2, 2])
    assert quot.closed == (2,)
    Q = counterexample_3chain()
    quot = quotient_quantale(Q, [1, 1, 2])
    sub = np.asarray(quot.closed)
    jt = quot.quantale.lattice.join_table
    amb = Q.lattice.join_table[np.ix_(sub, sub)]
    assert np.array_equal(sub[jt], np.asarray([1, 1, 2])[amb])
