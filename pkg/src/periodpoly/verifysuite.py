"""Aggregated invariant checks, the single entry point behind `verify`.

Each check raises AssertionError (or returns quietly) and is intended to
run at desk scale; together they cover the per-module invariant lists.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .exactalg import (CyclotomicField, DenseMatrix, QQ, bernoulli,
                       kernel_basis)
from .cosets import (GAMMA0, GAMMA1, MAT_I, MAT_S, MAT_T, Mat2,
                     build_coset_space, classical_cusp_count_gamma0,
                     cusp_classes, dirichlet_characters)
from .polyspace import (PolyVector, build_W, build_W_extended,
                        build_coboundary_and_D, chi_component, cminus_trivial,
                        eps_split, pair_braces, pair_induced, pair_vw,
                        slash_poly, _tail_families)
from .hecke import (GroupRingElement, ONE_MINUS_S, ONE_MINUS_T, delta_spec,
                    delta_vee_spec, gre_mul, hecke_action, hecke_matrix,
                    solve_universal_hecke, theta_spec, tn_infinity,
                    torbit_canonical, universal_hecke_element,
                    verify_hecke_property, common_eigen_polynomial)
from .analytic import (NewformData, completed_lvalue, eisenstein_qexp,
                       eta_product, manin_coefficient, period_and_omega,
                       petersson_product, eisenstein_period_demo,
                       haberland_constant)
from . import gamma02


def _random_word(rnd, max_len=6) -> Mat2:
    g = MAT_I
    for _ in range(rnd.randint(0, max_len)):
        g = g * (MAT_S if rnd.random() < 0.5 else MAT_T)
    return g


def _random_vector(rnd, space, w) -> PolyVector:
    return PolyVector(space, w, [[Fraction(rnd.randint(-4, 4)) for _ in range(w + 1)]
                                 for _ in range(space.size)])


# ----------------------------------------------------------------------

def check_exactalg_kernels():
    rnd = random.Random(101)
    for _ in range(10):
        nr, nc = rnd.randint(1, 5), rnd.randint(1, 5)
        m = DenseMatrix(QQ, [[Fraction(rnd.randint(-3, 3)) for _ in range(nc)]
                             for _ in range(nr)])
        kb = kernel_basis(m)
        assert (m * kb).is_zero() or kb.ncols == 0
        assert m.rank() + kb.ncols == nc
        assert kernel_basis(m) == kb  # determinism


def check_exactalg_cyclotomic():
    for m in range(1, 13):
        K = CyclotomicField(m)
        z = K.zeta
        p = K.one
        total = K.zero
        for _ in range(m):
            total = total + p
            p = p * z
        assert p == K.one           # zeta^m = 1
        if m > 1:
            assert not total        # sum of all m-th roots of unity


def check_bernoulli():
    assert bernoulli(0) == 1 and bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(6) == Fraction(1, 42) and bernoulli(8) == Fraction(-1, 30)
    assert all(bernoulli(n) == 0 for n in range(3, 25, 2))


def check_coset_group_action():
    rnd = random.Random(7)
    for space in (build_coset_space(GAMMA0, 5, 4), build_coset_space(GAMMA1, 5, 3)):
        for _ in range(25):
            g, h = _random_word(rnd, 8), _random_word(rnd, 8)
            for l in range(space.size):
                l1, s1 = space.act(l, g)
                l2, s2 = space.act(l1, h)
                assert (l2, s1 * s2) == space.act(l, g * h)
        for l in range(space.size):
            e1, s1 = space.eps_conj(l)
            e2, s2 = space.eps_conj(e1)
            assert (e2, s1 * s2) == (l, 1)
            j, s = space.tables["U"][l]
            j, s2 = space.tables["U"][j]
            j, s3 = space.tables["U"][j]
            assert (j, s * s2 * s3) == space.tables["J"][l]


def check_cusp_counts():
    for N in range(1, 31):
        space = build_coset_space(GAMMA0, N, 4)
        cs = cusp_classes(space)
        assert len(cs) == classical_cusp_count_gamma0(N)
        assert sum(c.width for c in cs.classes) == space.size


def check_pairing_identities():
    rnd = random.Random(13)
    g = Mat2(3, 1, 2, 5)
    for _ in range(15):
        w = rnd.randint(0, 6)
        a = tuple(Fraction(rnd.randint(-5, 5)) for _ in range(w + 1))
        b = tuple(Fraction(rnd.randint(-5, 5)) for _ in range(w + 1))
        assert pair_vw(a, b, w) == (-1) ** w * pair_vw(b, a, w)
        assert pair_vw(slash_poly(a, g, w), b, w) == pair_vw(a, slash_poly(b, g.vee(), w), w)
    for (N, k) in ((2, 8), (5, 4), (6, 2)):
        space = build_coset_space(GAMMA0, N, k)
        w = k - 2
        for _ in range(5):
            P, Q = _random_vector(rnd, space, w), _random_vector(rnd, space, w)
            assert pair_braces(P, Q) == (-1) ** (w + 1) * pair_braces(Q, P)
            assert pair_braces(P.eps(), Q.eps()) == (-1) ** (w + 1) * pair_braces(P, Q)
            gg = _random_word(rnd)
            assert pair_induced(P.slash(gg), Q.slash(gg)) == pair_induced(P, Q)


def check_radical_and_duality():
    for (N, k) in ((2, 8), (5, 4), (6, 2)):
        space = build_coset_space(GAMMA0, N, k)
        w = k - 2
        W = build_W(space, w)
        C, D = build_coboundary_and_D(space, w)
        for i in range(C.dim):
            for j in range(W.dim):
                assert pair_braces(C.vector(i), W.vector(j)) == 0
        gram = DenseMatrix(QQ, [[pair_braces(W.vector(i), W.vector(j))
                                 for j in range(W.dim)] for i in range(W.dim)])
        assert gram.rank() == W.dim - C.dim
        Wt = build_W_extended(space, w)
        gram2 = DenseMatrix(QQ, [[pair_braces(Wt.vector(i), Wt.vector(j))
                                  for j in range(Wt.dim)] for i in range(Wt.dim)])
        assert gram2.rank() == Wt.dim
        # duality closed form against every extended basis vector
        for fam in _tail_families(space, w):
            vals = []
            for l in range(space.size):
                l1, s1 = space.act(l, MAT_S.inverse())
                c_s = fam[l1] * (-1 if (s1 == -1 and w % 2 == 1) else 1)
                poly = [0] * (w + 1)
                poly[0] += fam[l]
                poly[w] -= c_s
                vals.append(tuple(poly))
            P = PolyVector(space, w, vals)
            for j in range(Wt.dim):
                Q = Wt.vector(j)
                rhs = -Fraction(6, space.index) * sum(
                    Fraction(a) * (-1) ** w * (w + 1) * b
                    for a, b in zip(fam, Q.tails))
                assert pair_braces(P, Q) == rhs


def check_hecke_defining_identity():
    for n in range(1, 13):
        el = solve_universal_hecke(n, n)
        ok, y = verify_hecke_property(el, n)
        assert ok
        delta = gre_mul(tn_infinity(n), ONE_MINUS_S) - gre_mul(ONE_MINUS_S, el)
        assert gre_mul(ONE_MINUS_T, y) == delta


def check_orbit_criterion_soundness():
    rnd = random.Random(23)
    n = 3
    el = solve_universal_hecke(n, n)
    cands = [Mat2(1, 0, 0, 3), Mat2(3, 1, 0, 1), Mat2(1, 2, 1, 5)]
    for _ in range(5):
        y = GroupRingElement(n, {m: Fraction(rnd.randint(-3, 3)) for m in cands})
        delta = (gre_mul(tn_infinity(n), ONE_MINUS_S) - gre_mul(ONE_MINUS_S, el)
                 - gre_mul(ONE_MINUS_T, y))
        sums = {}
        for m, c in delta.coeffs.items():
            rep = torbit_canonical(m)
            sums[rep] = sums.get(rep, Fraction(0)) + c
        assert all(not v for v in sums.values())


def check_hecke_adjointness():
    for (N, k, n) in ((5, 4, 2), (5, 4, 3), (7, 4, 2)):
        space = build_coset_space(GAMMA0, N, k)
        W = build_W(space, k - 2)
        t = universal_hecke_element(n)
        sd, sv = delta_spec(GAMMA0, N, n), delta_vee_spec(GAMMA0, N, n)
        for i in range(W.dim):
            for j in range(W.dim):
                P, Q = W.vector(i), W.vector(j)
                assert pair_braces(hecke_action(P, t, sd), Q) == \
                    pair_braces(P, hecke_action(Q, t, sv))
    space = build_coset_space(GAMMA0, 5, 4)
    Wt = build_W_extended(space, 2)
    t = universal_hecke_element(2)
    sd, sv = delta_spec(GAMMA0, 5, 2), delta_vee_spec(GAMMA0, 5, 2)
    for i in range(Wt.dim):
        for j in range(Wt.dim):
            P, Q = Wt.vector(i), Wt.vector(j)
            assert pair_braces(hecke_action(P, t, sd), Q) == \
                pair_braces(P, hecke_action(Q, t, sv))


def check_hecke_stability_and_commutativity():
    space = build_coset_space(GAMMA0, 5, 4)
    W = build_W(space, 2)
    C, _ = build_coboundary_and_D(space, 2)
    Wt = build_W_extended(space, 2)
    t2 = universal_hecke_element(2)
    sd = delta_spec(GAMMA0, 5, 2)
    for v in W.vectors():
        assert W.contains(hecke_action(v, t2, sd))
    for v in C.vectors():
        assert C.contains(hecke_action(v, t2, sd))
    for v in Wt.vectors():
        assert Wt.contains(hecke_action(v, t2, sd))
    mats = {n: hecke_matrix(W, universal_hecke_element(n), delta_spec(GAMMA0, 5, n))
            for n in (2, 3, 4, 5, 6)}
    for n in mats:
        for m in mats:
            if n < m and math.gcd(n, m) == 1:
                assert mats[n] * mats[m] == mats[m] * mats[n]


def check_level_one_multiplicativity():
    space = build_coset_space(GAMMA0, 1, 12)
    W = build_W(space, 10)
    ms = {n: hecke_matrix(W, universal_hecke_element(n), delta_spec(GAMMA0, 1, n))
          for n in (2, 3, 6)}
    assert ms[2] * ms[3] == ms[6]


def check_atkin_lehner_squares():
    space = build_coset_space(GAMMA0, 2, 8)
    W = build_W(space, 6)
    m = hecke_matrix(W, universal_hecke_element(2), theta_spec(GAMMA0, 2, 2))
    assert m * m == DenseMatrix.identity(QQ, W.dim).scaled(Fraction(2 ** 6))
    space6 = build_coset_space(GAMMA0, 6, 4)
    W6 = build_W(space6, 2)
    for n in (2, 3, 6):
        m = hecke_matrix(W6, universal_hecke_element(n), theta_spec(GAMMA0, 6, n))
        assert m * m == DenseMatrix.identity(QQ, W6.dim).scaled(Fraction(n ** 2))


def check_eps_block_structure():
    space = build_coset_space(GAMMA0, 5, 4)
    W = build_W(space, 2)
    Wp, Wm = eps_split(W)
    t2 = universal_hecke_element(2)
    sd = delta_spec(GAMMA0, 5, 2)
    assert hecke_matrix(Wp, t2, sd).nrows + hecke_matrix(Wm, t2, sd).nrows == W.dim


def _level5_data():
    space = build_coset_space(GAMMA0, 5, 4)
    W = build_W(space, 2)
    Wp, Wm = eps_split(W)
    Pp = common_eigen_polynomial(Wp, [(2, Fraction(-4))], parity="+")
    Pm = common_eigen_polynomial(Wm, [], parity="-")
    f = NewformData(5, 4, eta_product([(1, 4), (5, 4)], 200), 1)
    return space, f, Pp, Pm


def check_thirteen_congruence():
    space, f, Pp, Pm = _level5_data()
    w = 2
    # interior periods of P+ have numerators divisible by 13
    for l in range(space.size):
        for n in range(1, w):
            coeff = Pp.values[l][w - n]
            ratio = coeff * Fraction((-1) ** (w - n), math.comb(w, n))
            assert ratio.numerator % 13 == 0
    eis = eisenstein_qexp(4, 1, 16)
    congruence_side = eis - eis.dilate(5)
    for n in range(1, 11):
        diff = f.qseries.coeff(n) - congruence_side.coeff(n)
        assert diff.denominator == 1 and diff.numerator % 13 == 0


def check_eigenvalue_consistency():
    space, f, Pp, Pm = _level5_data()
    for n in range(1, 31):
        lam = manin_coefficient(Pp, universal_hecke_element(n),
                                delta_spec(GAMMA0, 5, n), n)
        assert lam == f.qseries.coeff(n)


def check_lvalue_truncation():
    for f in (NewformData(5, 4, eta_product([(1, 4), (5, 4)], 400), 1),
              NewformData(2, 8, eta_product([(1, 8), (2, 8)], 400), 1)):
        for s in range(1, f.weight):
            half = completed_lvalue(f, s, 50)
            full = completed_lvalue(f, s, 100)
            assert abs(full.value - half.value) <= half.err


def check_omega_parity_and_haberland_consistency():
    space, f, Pp, Pm = _level5_data()
    op, om = period_and_omega(f)
    k = f.weight
    # real coefficients: omega+ in i^(k+1) R, omega- in i^k R
    assert abs((op.value / (1j) ** (k + 1)).imag) < 1e-9 * abs(op.value)
    assert abs((om.value / (1j) ** k).imag) < 1e-9 * abs(om.value)
    # 6 C_k (f,f) from the full pairing = 2 x refined value
    G = pair_braces(Pp, Pm)
    full = (op.value * om.value.conjugate() - om.value * op.value.conjugate()) \
        * complex(G) / (6 * haberland_constant(k))
    refined, _ = petersson_product(f, f, (Pp, Pm), (Pp, Pm))
    assert abs(full - refined) < 1e-12


def check_gamma02_suite():
    assert gamma02.fy_generator_periods(8, 1)[0] == Fraction(-8, 51)
    for k in (4, 8, 12):
        assert gamma02.principal_space(k - 2).ncols == \
            build_W(build_coset_space(GAMMA0, 2, k), k - 2).dim
    f = NewformData(2, 8, eta_product([(1, 8), (2, 8)], 200), 1)
    rep = gamma02.extra_relations_check(f)
    assert all(r["rel_residual"] < 1e-6 for r in rep["relations"])
    assert rep["petersson_residual"] < 1e-10
    # reduced pairing vs full model on opposite-parity basis pairs
    space = build_coset_space(GAMMA0, 2, 8)
    W = build_W(space, 6)
    Wp, Wm = eps_split(W)
    idl = space.identity_label
    for i in range(Wp.dim):
        for j in range(Wm.dim):
            P, Q = Wp.vector(i), Wm.vector(j)
            assert gamma02.reduced_pairing(P.values[idl], Q.values[idl], 6) == \
                pair_braces(P, Q)


def check_gamma06_demo():
    rep = eisenstein_period_demo("gamma06")
    assert rep["additivity_exact"]
    assert rep["additivity_residual"] < 1e-10
    assert rep["d1_residual"] < 1e-10
    assert rep["d9_matches_ln3_minus_ln2"]


def check_cminus_classification():
    def rule(N):
        e = 0
        while N % 2 == 0:
            N //= 2
            e += 1
        if e > 3:
            return False
        p = 3
        while p * p <= N:
            if N % (p * p) == 0:
                return False
            p += 2
        return True
    for N in range(1, 61):
        assert cminus_trivial(N) == rule(N), N


def check_chi_components():
    import warnings
    space = build_coset_space(GAMMA1, 5, 4)
    W = build_W(space, 2)
    total = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # odd characters contribute zero
        for ch in dirichlet_characters(5):
            comp = chi_component(W, ch)
            conj = chi_component(W, ch.conjugate())
            assert comp.dim == conj.dim
            total += comp.dim
            if ch.is_trivial():
                assert comp.dim == build_W(build_coset_space(GAMMA0, 5, 4), 2).dim
    assert total == W.dim


CHECKS = [
    ("exactalg.kernels", check_exactalg_kernels),
    ("exactalg.cyclotomic", check_exactalg_cyclotomic),
    ("exactalg.bernoulli", check_bernoulli),
    ("cosets.group_action", check_coset_group_action),
    ("cosets.cusp_counts", check_cusp_counts),
    ("polyspace.pairings", check_pairing_identities),
    ("polyspace.radical_duality", check_radical_and_duality),
    ("polyspace.cminus_rule", check_cminus_classification),
    ("polyspace.chi_components", check_chi_components),
    ("hecke.defining_identity", check_hecke_defining_identity),
    ("hecke.orbit_criterion", check_orbit_criterion_soundness),
    ("hecke.adjointness", check_hecke_adjointness),
    ("hecke.stability_commutativity", check_hecke_stability_and_commutativity),
    ("hecke.level_one_multiplicativity", check_level_one_multiplicativity),
    ("hecke.atkin_lehner_squares", check_atkin_lehner_squares),
    ("hecke.eps_blocks", check_eps_block_structure),
    ("analytic.thirteen_congruence", check_thirteen_congruence),
    ("analytic.eigenvalues", check_eigenvalue_consistency),
    ("analytic.lvalue_truncation", check_lvalue_truncation),
    ("analytic.omega_haberland", check_omega_parity_and_haberland_consistency),
    ("gamma02.suite", check_gamma02_suite),
    ("analytic.gamma06_demo", check_gamma06_demo),
]


def run_all(names=None, out=None) -> int:
    """Run the invariant suites; returns the number of failures."""
    import sys
    out = out or sys.stdout
    failures = 0
    for name, fn in CHECKS:
        if names and not any(s in name for s in names):
            continue
        try:
            fn()
        except Exception as exc:  # report and continue
            failures += 1
            out.write("FAIL %s: %s\n" % (name, exc))
        else:
            out.write("PASS %s\n" % name)
    return failures
