import pytest

from catsl2.cobordism import CobMorphism, FlatTangle
from catsl2.complexes import (Complex, ObstructionError, cone, simplify,
                              tautological_complex, tensor)
from catsl2.homology import closure_complex, integer_homology
from catsl2.projectors import (braid_letter_complex, build_qn, crossing_complex,
                               khovanov_bracket, q1, q2, q3, quasi_projector,
                               symmetric_sequence, truncated_pn, turnback_check)
from catsl2.series import TruncatedSeries
from catsl2.tl import euler_characteristic, jw


def one_minus_q2n(n, prec=30):
    return TruncatedSeries.one(prec) - TruncatedSeries.monomial(2 * n, 1, prec)


def test_crossing_complex_objects():
    xp = crossing_complex(1)
    assert xp.graded_ranks() == {(-1, 2): 1, (0, 1): 1}
    xm = crossing_complex(-1)
    assert xm.graded_ranks() == {(0, -1): 1, (1, -2): 1}
    chi = euler_characteristic(xp)
    # q 1_2 - q^2 e
    from catsl2.tl import TLElement, Matching
    expect = TLElement.identity(2).scale(TruncatedSeries.monomial(1)) - \
        TLElement.generator(1, 2).scale(TruncatedSeries.monomial(2))
    assert chi == expect


def test_khovanov_bracket_single_crossing_and_r2():
    b = khovanov_bracket(2, [1])
    assert b.graded_ranks() == crossing_complex(1).graded_ranks()
    r2 = khovanov_bracket(2, [1, -1])
    assert r2.graded_ranks() == {(0, 0): 1}
    with pytest.raises(ValueError):
        khovanov_bracket(2, [("box", "missing")])


def test_khovanov_bracket_unknot_rank_two():
    c = khovanov_bracket(2, [1])
    closed = closure_complex(c)
    h = integer_homology(tautological_complex(closed))
    assert h.total_rank() == 2


def test_q2_structure():
    c = q2()
    c.check()
    assert c.graded_ranks() == {(-3, 4): 1, (-2, 3): 1, (-1, 1): 1, (0, 0): 1}
    assert turnback_check(c)["kills_turnbacks"]
    assert euler_characteristic(c) == jw(2).scale(one_minus_q2n(2))
    zero, _ = simplify(tensor(c, Complex.generator_complex(1, 2)))
    assert zero.is_zero()


def test_q3_structure():
    c = q3()
    c.check()
    assert c.graded_ranks() == {(-5, 6): 1, (-4, 5): 2, (-3, 4): 2,
                                (-2, 2): 2, (-1, 1): 2, (0, 0): 1}
    assert euler_characteristic(c) == jw(3).scale(one_minus_q2n(3))
    rep = turnback_check(c)
    assert rep["kills_turnbacks"]
    for i in (1, 2):
        zero, _ = simplify(tensor(c, Complex.generator_complex(i, 3)))
        assert zero.is_zero()
        zero, _ = simplify(tensor(Complex.generator_complex(i, 3), c))
        assert zero.is_zero()


def test_symmetric_sequence_shape():
    pieces, alphas = symmetric_sequence(Complex.identity_complex(1), 2)
    assert len(pieces) == 2 * 2 and len(alphas) == 3
    # the four columns of the 2-strand sequence: q^4 1, q^3 e, q e, 1
    shifts = [p.objects[0][0].qshift for p in pieces]
    assert shifts == [4, 3, 1, 0]
    tangles = [p.objects[0][0].tangle for p in pieces]
    assert tangles == [FlatTangle.identity(2), FlatTangle.e(1, 2),
                       FlatTangle.e(1, 2), FlatTangle.identity(2)]
    for a in alphas:
        assert a.is_cycle()
    # symmetry of shifts: the k-th and (2n-1-k)-th pieces differ only by the
    # q-shift q^{2n-k} versus q^k (same underlying complex)
    pieces3, alphas3 = symmetric_sequence(truncated_pn(2, 6).complex, 3)
    assert len(pieces3) == 6 and len(alphas3) == 5
    for k in range(3):
        left = pieces3[k].graded_ranks()       # shift q^{2n-k}
        right = pieces3[5 - k].graded_ranks()  # shift q^{2n-1-(5-k)} = q^k
        delta = (2 * 3 - k) - k
        assert {(h, q - delta): v for (h, q), v in left.items()} == right


def test_build_qn2_is_exact():
    built = build_qn(2)
    assert built.valid_h_min is None
    assert built.complex.graded_ranks() == q2().graded_ranks()
    for h, entries in q2().diff.items():
        for key, m in entries.items():
            assert built.complex.entry(h, *key) == m
    for h, entries in built.complex.diff.items():
        for key in entries:
            assert q2().entry(h, *key) is not None


def test_build_qn3_simplifies_to_q3_ranks():
    built = build_qn(3, window=8)
    s, _ = simplify(built.complex)
    window_ranks = {k: v for k, v in s.graded_ranks().items()
                    if k[0] > built.valid_h_min}
    assert window_ranks == q3().graded_ranks()


def test_build_qn_rejects_large_n():
    with pytest.raises(ValueError):
        build_qn(5)


def test_truncated_p1():
    p1 = truncated_pn(1, 6)
    assert p1.complex.graded_ranks() == {(0, 0): 1}
    assert p1.u_maps[1].then(p1.u_maps[1]).is_zero()


def test_truncated_p2_normal_form_and_unit():
    p2 = truncated_pn(2, 9)
    ranks = p2.complex.graded_ranks()
    for k in range(0, 10):
        key = (0, 0) if k == 0 else (-k, 2 * k - 1)
        assert ranks.get(key) == 1
    assert p2.unit.is_cycle()
    assert euler_characteristic(p2.complex, precision=18) == jw(2, 18)
    assert turnback_check(p2.complex, valid_h_min=-7)["kills_turnbacks"]


def test_p2_window_grows_with_request():
    deep = truncated_pn(2, 15)
    assert deep.complex.h_min() <= -15


def test_cone_of_u2_has_q2_ranks_in_window():
    p2 = truncated_pn(2, 9)
    c = cone(p2.u_maps[2])
    s, _ = simplify(c)
    in_window = {k: v for k, v in s.graded_ranks().items() if k[0] >= -5}
    assert in_window == q2().graded_ranks()


def test_truncated_p3():
    p3 = truncated_pn(3, 7)
    assert p3.complex.objects[0][0].tangle == FlatTangle.identity(3)
    assert euler_characteristic(p3.complex, precision=7) == jw(3, 7)
    assert turnback_check(p3.complex, valid_h_min=-5)["kills_turnbacks"]
    for k, u in p3.u_maps.items():
        assert u.is_cycle()


def test_quasi_projector_routes():
    # all-indices: bounded, no truncation caveat
    k2 = quasi_projector(2, (2,), 9)
    assert k2.valid_h_min is None
    assert k2.complex.graded_ranks() == q2().graded_ranks()
    k1 = quasi_projector(1, (1,), 6)
    assert k1.complex.graded_ranks() == q1().graded_ranks()
    # empty spec returns the truncated projector itself
    p = quasi_projector(2, (), 9)
    assert p.valid_h_min is not None
    assert p.complex.graded_ranks()[(0, 0)] == 1
    with pytest.raises(AssertionError):
        quasi_projector(2, (3,), 6)


def test_quasi_projector_k3_is_bounded():
    built = quasi_projector(3, (2, 3), 8)
    assert built.valid_h_min is None
    ranks = built.complex.graded_ranks()
    assert min(h for h, _ in ranks) >= -9
    rep = turnback_check(built.complex)
    assert rep["kills_turnbacks"]
    # chi(K3) = (1-q^4)(1-q^6) jw(3)
    chi = euler_characteristic(built.complex)
    assert chi == jw(3).scale(one_minus_q2n(2) * one_minus_q2n(3))


def test_quasi_idempotency_closure_homology():
    qq, _ = simplify(tensor(q2(), q2()))
    h_qq = integer_homology(tautological_complex(closure_complex(qq)))
    h_q = integer_homology(tautological_complex(closure_complex(q2())))
    assert h_qq == h_q + h_q.shifted(-3, 4)


def test_turnback_check_reports_nonzero():
    rep = turnback_check(Complex.identity_complex(2))
    assert not rep["kills_turnbacks"]
    rep2 = turnback_check(crossing_complex(1))
    assert not rep2["kills_turnbacks"]


def test_partial_trace_of_p2_has_two_dot_tower():
    # closing the truncated projector leaves a tower of single-strand objects
    # whose connecting differentials are twice the dotted identity
    from catsl2.complexes import partial_trace_complex
    t, _ = simplify(partial_trace_complex(truncated_pn(2, 7).complex))
    two_dots = [m.terms for entries in t.diff.values() for m in entries.values()]
    assert two_dots and all(terms == {1: 2} for terms in two_dots)


def test_cone_of_u3_has_q3_ranks_in_window():
    p3 = truncated_pn(3, 7)
    s, _ = simplify(cone(p3.u_maps[3]))
    in_window = {k: v for k, v in s.graded_ranks().items() if k[0] >= -5}
    assert in_window == q3().graded_ranks()
