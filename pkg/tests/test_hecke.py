import math
import random
from fractions import Fraction

import pytest

from periodpoly.exactalg import DenseMatrix, QQ, eigen_kernel
from periodpoly.cosets import (GAMMA0, GAMMA1, MAT_I, MAT_S, MAT_T, MAT_TINV,
                               Mat2, build_coset_space)
from periodpoly.polyspace import (PolyVector, build_W, build_W_extended,
                                  build_coboundary_and_D, eps_split,
                                  pair_braces)
from periodpoly.hecke import (EigenspaceError, GroupRingElement, HeckeError,
                              ONE_MINUS_S, ONE_MINUS_T, SigmaSpec, adjoint_vee,
                              common_eigen_polynomial, delta_spec,
                              delta_vee_spec, diamond_spec, gre_mul, gre_unit,
                              hecke_action, hecke_matrix, heilbronn_element,
                              ideal_membership_within_bound, merel_family,
                              resolve_sigma_coset, solve_universal_hecke,
                              theta_spec, tn_infinity, torbit_canonical,
                              universal_hecke_element, verify_hecke_property)


class TestTnInfinity:
    def test_n1(self):
        assert tn_infinity(1).support() == [MAT_I]

    def test_n2(self):
        t = tn_infinity(2)
        assert set(t.support()) == {Mat2(1, 0, 0, 2), Mat2(1, 1, 0, 2), Mat2(2, 0, 0, 1)}

    def test_sigma_count(self):
        for n in (4, 6, 12):
            sigma = sum(d for d in range(1, n + 1) if n % d == 0)
            assert len(tn_infinity(n).coeffs) == sigma


class TestAdjoint:
    def test_t_goes_to_t_inverse(self):
        assert adjoint_vee(gre_unit([(1, MAT_T)])) == gre_unit([(1, MAT_TINV)])

    def test_involution(self):
        rnd = random.Random(5)
        cands = [Mat2(1, 0, 0, 6), Mat2(2, 1, 0, 3), Mat2(1, 2, 2, 10)]
        x = GroupRingElement(6, {m: Fraction(rnd.randint(-3, 3)) for m in cands})
        assert adjoint_vee(adjoint_vee(x)) == x

    def test_tn_inf_adjoint_shape(self):
        # vee keeps triangularity: (a b; 0 d) -> (d -b; 0 a), so the support
        # stays triangular with the off-diagonal entry negated
        t = adjoint_vee(tn_infinity(4))
        assert len(t.coeffs) == len(tn_infinity(4).coeffs)
        for m in t.support():
            assert m.c == 0 and m.a > 0 and m.d > 0 and m.b <= 0
            assert m.canonical_pm() == m


class TestTorbit:
    def test_orbit_invariance(self):
        rnd = random.Random(6)
        for _ in range(50):
            while True:
                a, b, c, d = (rnd.randint(-6, 6) for _ in range(4))
                if a * d - b * c != 0:
                    break
            m = Mat2(a, b, c, d)
            rep = torbit_canonical(m)
            j = rnd.randint(-4, 4)
            shifted = (MAT_T ** j) * m
            assert torbit_canonical(shifted) == rep
            assert torbit_canonical(-m) == rep


class TestVerifyProperty:
    def test_identity_n1(self):
        ok, y = verify_hecke_property(GroupRingElement(1, {MAT_I: Fraction(1)}), 1)
        assert ok and y.is_zero()

    def test_solver_output_verifies_with_witness(self):
        for n in (2, 5):
            el = solve_universal_hecke(n, n)
            ok, y = verify_hecke_property(el, n)
            assert ok
            delta = gre_mul(tn_infinity(n), ONE_MINUS_S) - gre_mul(ONE_MINUS_S, el)
            assert gre_mul(ONE_MINUS_T, y) == delta

    def test_perturbed_candidate_fails(self):
        el = solve_universal_hecke(2, 2)
        m0 = el.support()[0]
        bad = GroupRingElement(2, {**el.coeffs, m0: el.coeffs[m0] + 1})
        ok, orbit = verify_hecke_property(bad, 2)
        assert not ok
        assert isinstance(orbit, Mat2)

    def test_y_ambiguity_invariance(self):
        # adding (1 - T) Y never disturbs the orbit sums
        rnd = random.Random(23)
        n = 3
        el = solve_universal_hecke(n, n)
        cands = [Mat2(1, 0, 0, 3), Mat2(3, 1, 0, 1), Mat2(1, 2, 1, 5)]
        for _ in range(10):
            y = GroupRingElement(n, {m: Fraction(rnd.randint(-3, 3)) for m in cands})
            delta = (gre_mul(tn_infinity(n), ONE_MINUS_S)
                     - gre_mul(ONE_MINUS_S, el) - gre_mul(ONE_MINUS_T, y))
            sums = {}
            for m, c in delta.coeffs.items():
                rep = torbit_canonical(m)
                sums[rep] = sums.get(rep, Fraction(0)) + c
            assert all(not v for v in sums.values())


class TestSolver:
    @pytest.mark.parametrize("n", list(range(2, 13)))
    def test_solve_and_verify(self, n):
        el = solve_universal_hecke(n, n)
        assert verify_hecke_property(el, n)[0]
        assert adjoint_vee(adjoint_vee(el)) == el
        assert max(max(abs(m.a), abs(m.b), abs(m.c), abs(m.d))
                   for m in el.support()) <= n

    def test_variants_differ_and_both_verify(self):
        for n in (2, 3, 5):
            a = solve_universal_hecke(n, n)
            b = solve_universal_hecke(n, n, variant=1)
            assert a != b
            assert verify_hecke_property(b, n)[0]

    def test_deterministic(self):
        assert solve_universal_hecke(7, 7) == solve_universal_hecke(7, 7)

    def test_entry_bound_guard(self):
        with pytest.raises(HeckeError):
            solve_universal_hecke(5, 3)

    def test_heilbronn_family(self):
        assert set(merel_family(2)) == {Mat2(1, 0, 0, 2), Mat2(2, 0, 0, 1),
                                        Mat2(2, 1, 0, 1), Mat2(1, 0, 1, 2)}
        for n in (2, 7, 12):
            el = heilbronn_element(n)
            assert verify_hecke_property(el, n)[0]


class TestResolve:
    def test_delta_congruence_example(self, space5):
        hit = resolve_sigma_coset(space5, space5.identity_label,
                                  Mat2(1, 0, 0, 2), delta_spec(GAMMA0, 5, 2))
        assert hit is not None
        assert space5.labels[hit[0]] == (0, 1)

    def test_delta_gcd_obstruction(self):
        sp = build_coset_space(GAMMA0, 2, 8)
        hit = resolve_sigma_coset(sp, sp.identity_label, Mat2(2, 0, 0, 1),
                                  delta_spec(GAMMA0, 2, 2))
        assert hit is None

    def test_coprime_never_none(self, space5):
        from periodpoly.hecke import _candidate_matrices
        spec = delta_spec(GAMMA0, 5, 2)
        for m in _candidate_matrices(2, 2):
            for l in range(space5.size):
                assert resolve_sigma_coset(space5, l, m, spec) is not None

    def test_det_mismatch(self, space5):
        with pytest.raises(HeckeError):
            resolve_sigma_coset(space5, 0, Mat2(1, 0, 0, 3),
                                delta_spec(GAMMA0, 5, 2))

    def test_spec_validation(self):
        with pytest.raises(HeckeError):
            SigmaSpec("theta", GAMMA0, 6, 4)       # 4 does not exactly divide 6
        with pytest.raises(HeckeError):
            SigmaSpec("delta_vee", GAMMA0, 6, 2)   # gcd(2, 6) > 1
        with pytest.raises(HeckeError):
            SigmaSpec("diamond", GAMMA0, 6, 1)     # missing unit


class TestActions:
    def test_identity_action(self, w5):
        t1 = GroupRingElement(1, {MAT_I: Fraction(1)})
        spec = delta_spec(GAMMA0, 5, 1)
        for j in range(w5.dim):
            v = w5.vector(j)
            assert hecke_action(v, t1, spec).values == v.values

    def test_stability(self, space5, w5):
        t2 = universal_hecke_element(2)
        spec = delta_spec(GAMMA0, 5, 2)
        C, _ = build_coboundary_and_D(space5, 2)
        Wt = build_W_extended(space5, 2)
        for v in w5.vectors():
            assert w5.contains(hecke_action(v, t2, spec))
        for v in C.vectors():
            assert C.contains(hecke_action(v, t2, spec))
        for v in Wt.vectors():
            assert Wt.contains(hecke_action(v, t2, spec))

    def test_adjointness_on_W(self):
        for (N, k, n) in ((5, 4, 2), (5, 4, 3), (7, 4, 2)):
            sp = build_coset_space(GAMMA0, N, k)
            W = build_W(sp, k - 2)
            t = universal_hecke_element(n)
            sd, sv = delta_spec(GAMMA0, N, n), delta_vee_spec(GAMMA0, N, n)
            for i in range(W.dim):
                for j in range(W.dim):
                    P, Q = W.vector(i), W.vector(j)
                    assert pair_braces(hecke_action(P, t, sd), Q) == \
                        pair_braces(P, hecke_action(Q, t, sv))

    def test_adjointness_on_Wtilde(self, space5):
        Wt = build_W_extended(space5, 2)
        t = universal_hecke_element(2)
        sd, sv = delta_spec(GAMMA0, 5, 2), delta_vee_spec(GAMMA0, 5, 2)
        for i in range(Wt.dim):
            for j in range(Wt.dim):
                P, Q = Wt.vector(i), Wt.vector(j)
                assert pair_braces(hecke_action(P, t, sd), Q) == \
                    pair_braces(P, hecke_action(Q, t, sv))


class TestMatrices:
    def test_level_one_trace_2001(self):
        sp = build_coset_space(GAMMA0, 1, 12)
        W = build_W(sp, 10)
        m = hecke_matrix(W, universal_hecke_element(2), delta_spec(GAMMA0, 1, 2))
        # tau(2) = -24 (expand (1-q)^24 (1-q^2)^24 by hand), sigma_11(2) = 2049
        tau2 = -24
        assert m.trace() == tau2 + (tau2 + 2049) == 2001

    def test_gamma0_6_k2_trace_18(self):
        sp = build_coset_space(GAMMA0, 6, 2)
        W = build_W(sp, 0)
        m = hecke_matrix(W, universal_hecke_element(5), delta_spec(GAMMA0, 6, 5))
        assert m.trace() == 3 * 6  # three Eisenstein eigenvalues sigma_1(5)

    def test_multiplicativity_level_one(self):
        sp = build_coset_space(GAMMA0, 1, 12)
        W = build_W(sp, 10)
        ms = {n: hecke_matrix(W, universal_hecke_element(n), delta_spec(GAMMA0, 1, n))
              for n in (2, 3, 6)}
        assert ms[2] * ms[3] == ms[6]

    def test_commutativity(self, w5):
        mats = {n: hecke_matrix(w5, universal_hecke_element(n), delta_spec(GAMMA0, 5, n))
                for n in (2, 3, 4, 5, 6)}
        for n in mats:
            for m in mats:
                if n < m and math.gcd(n, m) == 1:
                    assert mats[n] * mats[m] == mats[m] * mats[n]

    def test_atkin_lehner_square(self):
        sp = build_coset_space(GAMMA0, 2, 8)
        W = build_W(sp, 6)
        m = hecke_matrix(W, universal_hecke_element(2), theta_spec(GAMMA0, 2, 2))
        assert m * m == DenseMatrix.identity(QQ, W.dim).scaled(Fraction(2 ** 6))

    def test_atkin_lehner_gamma0_6(self):
        sp = build_coset_space(GAMMA0, 6, 4)
        W = build_W(sp, 2)
        for n in (2, 3, 6):
            m = hecke_matrix(W, universal_hecke_element(n), theta_spec(GAMMA0, 6, n))
            assert m * m == DenseMatrix.identity(QQ, W.dim).scaled(Fraction(n ** 2))

    def test_eps_blocks(self, space5, w5, w5_split):
        plus, minus = w5_split
        t2 = universal_hecke_element(2)
        spec = delta_spec(GAMMA0, 5, 2)
        mp = hecke_matrix(plus, t2, spec)
        mm = hecke_matrix(minus, t2, spec)
        assert mp.nrows + mm.nrows == w5.dim

    def test_instability_reported(self, space5):
        from periodpoly.polyspace import Subspace, PolySpaceError
        # a line not stable under T~2
        vec = PolyVector(space5, 2, [[1, 0, 0]] + [[0, 0, 0]] * 5)
        line = Subspace.from_vectors(space5, 2, False, [vec.coords()])
        with pytest.raises(PolySpaceError, match="basis vector 0"):
            hecke_matrix(line, universal_hecke_element(2), delta_spec(GAMMA0, 5, 2))

    def test_diamond_on_gamma1_5(self):
        sp = build_coset_space(GAMMA1, 5, 4)
        W = build_W(sp, 2)
        t1 = GroupRingElement(1, {MAT_I: Fraction(1)})
        m = hecke_matrix(W, t1, diamond_spec(GAMMA1, 5, 2))
        ident = DenseMatrix.identity(QQ, W.dim)
        assert m != ident and m * m == ident
        # eigenvalue multiplicities match the chi-component dimensions
        assert (eigen_kernel(m, Fraction(1)).ncols,
                eigen_kernel(m, Fraction(-1)).ncols) == (4, 2)


class TestEigenvectors:
    def test_minus_part_is_one_dimensional(self, w5_split, level5_eigenpolys):
        _, minus = w5_split
        assert minus.dim == 1
        _, Pm = level5_eigenpolys
        idl = Pm.space.identity_label
        assert Pm.values[idl] == (0, 1, 0)

    def test_paper_table(self, space5, level5_eigenpolys):
        Pp, Pm = level5_eigenpolys
        from periodpoly.cosets import p1_normalize
        expected_plus = {(0, 1): (1, 0, -5), (1, 1): (5, 0, -5),
                         (1, 3): (-8, 13, 8), (1, 2): (-8, -13, 8),
                         (1, 4): (5, 0, -5), (1, 0): (5, 0, -1)}
        expected_minus = {(0, 1): (0, 1, 0), (1, 1): (1, 2, 1),
                          (1, 3): (-2, -3, 2), (1, 2): (2, -3, -2),
                          (1, 4): (-1, 2, -1), (1, 0): (0, 1, 0)}
        for row, exp in expected_plus.items():
            lab = space5._label_pos[p1_normalize(5, *row)]
            assert Pp.values[lab] == tuple(Fraction(e) for e in exp)
        for row, exp in expected_minus.items():
            lab = space5._label_pos[p1_normalize(5, *row)]
            assert Pm.values[lab] == tuple(Fraction(e) for e in exp)

    def test_wrong_eigenvalue(self, w5_split):
        plus, _ = w5_split
        with pytest.raises(EigenspaceError, match="not an eigenvalue"):
            common_eigen_polynomial(plus, [(2, Fraction(7))], parity="+")

    def test_underdetermined(self, w5_split):
        plus, _ = w5_split
        with pytest.raises(EigenspaceError, match="more primes"):
            common_eigen_polynomial(plus, [], parity="+")

    def test_choice_independence(self, w5_split):
        plus, _ = w5_split
        a = common_eigen_polynomial(plus, [(2, Fraction(-4))], parity="+")
        b = common_eigen_polynomial(
            plus, [(2, Fraction(-4))], parity="+",
            element_for=lambda p: solve_universal_hecke(p, p, variant=1))
        c = common_eigen_polynomial(
            plus, [(2, Fraction(-4))], parity="+", element_for=heilbronn_element)
        assert a.values == b.values == c.values


class TestSerialization:
    def test_group_ring_round_trip(self):
        t = solve_universal_hecke(6, 6)
        doc = t.to_json()
        assert all(set(item) == {"matrix", "coeff"} for item in doc)
        assert GroupRingElement.from_json(6, doc) == t


class TestEigenKernelOnHecke:
    def test_minus_four_eigenspace_is_a_line(self, w5_split):
        plus, _ = w5_split
        m = hecke_matrix(plus, universal_hecke_element(2), delta_spec(GAMMA0, 5, 2))
        ker = eigen_kernel(m, Fraction(-4))
        assert ker.ncols == 1


class TestGamma1Theta:
    def test_fricke_square_on_gamma1_5(self):
        sp = build_coset_space(GAMMA1, 5, 4)
        W = build_W(sp, 2)
        m = hecke_matrix(W, universal_hecke_element(5), theta_spec(GAMMA1, 5, 5))
        t1 = GroupRingElement(1, {MAT_I: Fraction(1)})
        ident = hecke_matrix(W, t1, diamond_spec(GAMMA1, 5, 1))
        assert m * m == ident.scaled(Fraction(25))


class TestWeight2Recovery:
    def test_x0_11_eigenvalues(self):
        from periodpoly.analytic import eta_product, manin_coefficient
        f = eta_product([(1, 2), (11, 2)], 20)
        sp = build_coset_space(GAMMA0, 11, 2)
        W = build_W(sp, 0)
        plus, minus = eps_split(W)
        assert (W.dim, plus.dim, minus.dim) == (3, 2, 1)
        Pp = common_eigen_polynomial(plus, [(2, Fraction(-2))], parity="+")
        for n in range(1, 21):
            lam = manin_coefficient(Pp, universal_hecke_element(n),
                                    delta_spec(GAMMA0, 11, n), n)
            assert lam == f.coeff(n)


class TestIdealMembership:
    def test_adjointness_combination_verified(self):
        t = solve_universal_hecke(2, 2)
        x = (gre_mul(t, gre_unit([(1, MAT_T), (-1, MAT_TINV)]))
             + gre_mul(gre_unit([(1, MAT_TINV), (-1, MAT_T)]), adjoint_vee(t)))
        assert ideal_membership_within_bound(x, 3) == "verified within bound"

    def test_inconclusive_never_refutes(self):
        x = GroupRingElement(2, {Mat2(1, 0, 0, 2): Fraction(1)})
        assert ideal_membership_within_bound(x, 2) in (
            "verified within bound", "inconclusive")
