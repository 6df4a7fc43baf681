#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "mldokit/mldo.hpp"

using namespace mldokit;
using testutil::random_form;
using testutil::random_modular;

namespace {

const QuasiModularForm E2 = QuasiModularForm::E2();
const QuasiModularForm E4 = QuasiModularForm::E4();
const QuasiModularForm E6 = QuasiModularForm::E6();

// Generalized hypergeometric-type order-2 operator of weight 4 on weight k.
Mldo kz_mldo(const Rat& k) {
    return compose(serre_mldo(k + 2), serre_mldo(k)) - k * (k + 2) / 144 * (E4 * Mldo::identity(k));
}

// Monic order-3 operator of weight 6 on weight 0 arising from a weight-1/2
// hypergeometric family; full variant includes the order-0 term.
Mldo l3(bool full) {
    QuasiModularForm a0 = full ? Rat(1271, 1080) * E6 : QuasiModularForm::zero(6);
    QuasiModularForm a1 = Rat(1, 2) * derive(E2) - Rat(169, 100) * E4;
    QuasiModularForm a2 = Rat(-1, 2) * E2;
    return Mldo(Rat(0), 6, {a0, a1, a2, QuasiModularForm(Rat(1))});
}

// Monic order-5 operator of weight 10 on weight 0 (order-0 term dropped).
Mldo l5() {
    QuasiModularForm e8 = E4 * E4;
    QuasiModularForm a1 = Rat(5, 3) * derive(E2, 3) + Rat(83, 330) * derive(E4, 2) + Rat(427, 9801) * derive(E6) +
                          Rat(202, 107811) * e8;
    QuasiModularForm a2 = -(Rat(10) * derive(E2, 2) + Rat(83, 66) * derive(E4) + Rat(427, 3267) * E6);
    QuasiModularForm a3 = Rat(10) * derive(E2) + Rat(83, 99) * E4;
    QuasiModularForm a4 = Rat(-5, 3) * E2;
    return Mldo(Rat(0), 10, {QuasiModularForm::zero(10), a1, a2, a3, a4, QuasiModularForm(Rat(1))});
}

// Monic order-3 operator of weight 6 on rational weight k annihilating the
// k-th powers of the even theta constants at k = n/2.
Mldo theta_op(const Rat& k) {
    QuasiModularForm a0 = -(k * (k + 1) * (k + 2) / 24 * derive(E2, 2) + k * k / 32 * derive(E4));
    QuasiModularForm a1 = (k + 1) * (k + 2) / 4 * derive(E2) + k / 8 * E4;
    QuasiModularForm a2 = -(k + 2) / 4 * E2;
    return Mldo(k, 6, {a0, a1, a2, QuasiModularForm(Rat(1))});
}

}  // namespace

TEST_CASE("operator basics") {
    CHECK(serre_mldo(Rat(4)).apply(E4) == serre(Rat(4), E4));
    CHECK(Mldo::identity(Rat(4)).apply(E4) == E4);
    CHECK(Mldo::zero(Rat(4), 6).apply(E4).is_zero());
    CHECK_THROWS_AS(Mldo(Rat(4), 5, {}), std::invalid_argument);
    CHECK_THROWS_AS(Mldo(Rat(4), 2, {E2, QuasiModularForm(Rat(1)), QuasiModularForm(Rat(1))}), std::invalid_argument);
    CHECK_THROWS_AS(Mldo(Rat(4), 4, {E6, QuasiModularForm(Rat(1))}), std::invalid_argument);

    // series action agrees with the symbolic one
    std::mt19937 rng(47);
    for (long w = 4; w <= 8; w += 4) {
        QuasiModularForm f = random_form(rng, w);
        Mldo Lw = Mldo(Rat(w), 6, l3(true).coeffs());
        CHECK(Lw.apply(to_series(f, 25)) == to_series(Lw.apply(f), 25));
    }
}

TEST_CASE("composition") {
    CHECK(compose(serre_mldo(Rat(6)), serre_mldo(Rat(4))) == serre_iter_mldo(Rat(4), 2));
    CHECK_THROWS_AS(compose(serre_mldo(Rat(4)), serre_mldo(Rat(4))), std::invalid_argument);
    std::mt19937 rng(53);
    QuasiModularForm f = random_form(rng, 6);
    Mldo A = kz_mldo(Rat(6));
    Mldo B = theta_op(Rat(10));
    CHECK(compose(B, A).apply(f) == B.apply(A.apply(f)));
}

TEST_CASE("operator families match form-level maps") {
    std::vector<Rat> ks = {Rat(4), Rat(6), Rat(1, 2), Rat(-3, 5)};
    std::mt19937 rng(59);
    for (const Rat& k : ks)
        for (long n = 0; n <= 4; ++n) {
            QuasiModularForm f = random_form(rng, 8);
            CHECK(serre_iter_mldo(k, n).apply(f) == serre_iter(k, n, f));
            CHECK(vz_mldo(k, n).apply(f) == vz(k, n, f));
            CHECK(kk_mldo(k, n).apply(f) == kk(k, n, f));
            CHECK(rc_mldo_left(k, Rat(6), n, E6).apply(f) == rc_bracket(k, Rat(6), n, f, E6));
            CHECK(rc_mldo_right(Rat(6), k, n, E6).apply(f) == rc_bracket(Rat(6), k, n, E6, f));
        }
    for (long n = 0; n <= 3; ++n) {
        QuasiModularForm f = random_form(rng, 6);
        CHECK(ext_rc_mldo_right(Rat(6), n, E4).apply(f) == ext_bracket(Rat(4), Rat(6), n, E4, f));
    }
}

TEST_CASE("modularity criterion") {
    for (const Rat& k : {Rat(4), Rat(1, 5), Rat(0)}) {
        CHECK(is_modular(serre_mldo(k)));
        CHECK(is_modular(kz_mldo(k)));
        for (long n = 0; n <= 4; ++n) {
            CHECK(is_modular(vz_mldo(k, n)));
            CHECK(is_modular(kk_mldo(k, n)));
            // compositions of modular operators stay modular
            CHECK(is_modular(serre_iter_mldo(k, n)));
        }
    }
    CHECK(is_modular(l3(false)));
    CHECK(is_modular(l3(true)));
    CHECK(is_modular(l5()));
    for (const Rat& k : {Rat(1, 2), Rat(1), Rat(3, 2), Rat(2), Rat(5, 2), Rat(7, 2)})
        CHECK(is_modular(theta_op(k)));

    long bad = -1;
    Mldo not_mod(Rat(4), 4, {E2 * E2, QuasiModularForm::zero(2), QuasiModularForm(Rat(1))});
    CHECK_FALSE(is_modular(not_mod, &bad));
    CHECK(bad == 0);
    CHECK_THROWS_AS(symbol(not_mod), std::domain_error);
    CHECK(symbol(l3(true)) == QuasiModularForm(Rat(1)));
}

TEST_CASE("basis conversions") {
    // closed-form values for the order-2 family
    for (const Rat& k : {Rat(4), Rat(8), Rat(1, 5)}) {
        auto v = to_basis(kz_mldo(k), BasisTag::VZ);
        REQUIRE(v.size() == 3);
        CHECK(v[0] == -k * (k + 1) / 144 * E4);
        CHECK(v[1].is_zero());
        CHECK(v[2] == QuasiModularForm(Rat(1)));
    }

    auto check_lists = [](const Mldo& L, const std::vector<QuasiModularForm>& serre_want,
                          const std::vector<QuasiModularForm>& kk_want, const std::vector<QuasiModularForm>& vz_want) {
        CHECK(to_basis(L, BasisTag::Serre) == serre_want);
        CHECK(to_basis(L, BasisTag::KK) == kk_want);
        CHECK(to_basis(L, BasisTag::VZ) == vz_want);
        CHECK(from_basis(BasisTag::Serre, L.k(), L.gain(), serre_want) == L);
        CHECK(from_basis(BasisTag::KK, L.k(), L.gain(), kk_want) == L);
        CHECK(from_basis(BasisTag::VZ, L.k(), L.gain(), vz_want) == L);
    };

    QuasiModularForm one(Rat(1));
    QuasiModularForm z2 = QuasiModularForm::zero(2);
    check_lists(l3(false), {QuasiModularForm::zero(6), Rat(-1571, 900) * E4, z2, one},
                {QuasiModularForm::zero(6), Rat(-169, 100) * E4, z2, one},
                {QuasiModularForm::zero(6), Rat(-1039, 600) * E4, z2, one});
    check_lists(l3(true), {Rat(1271, 1080) * E6, Rat(-1571, 900) * E4, z2, one},
                {Rat(1271, 1080) * E6, Rat(-169, 100) * E4, z2, one},
                {Rat(1271, 1080) * E6, Rat(-1039, 600) * E4, z2, one});

    QuasiModularForm e8 = E4 * E4;
    check_lists(l5(),
                {QuasiModularForm::zero(10), Rat(-6151, 1724976) * e8, Rat(295, 8712) * E6, Rat(-53, 396) * E4, z2, one},
                {QuasiModularForm::zero(10), Rat(7181, 143748) * e8, Rat(1885, 6534) * E6, Rat(83, 99) * E4, z2, one},
                {QuasiModularForm::zero(10), Rat(-2689, 1149984) * e8, Rat(35, 3267) * E6, Rat(1, 198) * E4, z2, one});

    for (const Rat& k : {Rat(1, 2), Rat(2), Rat(7, 2)}) {
        check_lists(theta_op(k),
                    {-k * k * (k - 6) / 864 * E6, -(Rat(3) * k * k - 6 * k + 8) / 144 * E4, z2, one},
                    {k * k / 96 * E6, k / 8 * E4, z2, one},
                    {-k * (k * k - 6 * k + 2) / 864 * E6, -(k - 1) * (k - 2) / 48 * E4, z2, one});
    }

    // random round trips through every basis
    std::mt19937 rng(61);
    for (const Rat& k : {Rat(5), Rat(1, 2)})
        for (long K = 4; K <= 14; K += 4)
            for (BasisTag tag : {BasisTag::D, BasisTag::Serre, BasisTag::KK, BasisTag::VZ}) {
                std::vector<QuasiModularForm> c;
                for (long n = 0; 2 * n <= K; ++n) c.push_back(random_modular(rng, K - 2 * n));
                Mldo L = from_basis(tag, k, K, c);
                auto back = to_basis(L, tag);
                back.resize(c.size(), QuasiModularForm::zero(0));
                for (std::size_t i = 0; i < c.size(); ++i) {
                    if (back[i].is_zero() && c[i].is_zero()) continue;
                    CHECK(back[i] == c[i]);
                }
            }

    Mldo not_mod(Rat(4), 4, {E2 * E2, QuasiModularForm::zero(2), QuasiModularForm(Rat(1))});
    CHECK_THROWS_AS(to_basis(not_mod, BasisTag::Serre), std::domain_error);
}

TEST_CASE("modular data vector") {
    QuasiModularForm one(Rat(1));
    QuasiModularForm z2 = QuasiModularForm::zero(2);

    auto h3 = h_vector(l3(true));
    REQUIRE(h3.size() == 4);
    CHECK(h3[0] == Rat(1271, 1080) * E6);
    CHECK(h3[1] == Rat(-169, 100) * E4);
    CHECK(h3[2].is_zero());
    CHECK(h3[3] == one);
    CHECK(from_rc_data(Rat(0), 6, {h3[0], h3[1], h3[2]}, Rat(1)) == l3(true));
    CHECK(from_rc_data(Rat(0), 6, {QuasiModularForm::zero(6), Rat(-169, 100) * E4, z2}, Rat(1)) == l3(false));

    auto h5 = h_vector(l5());
    REQUIRE(h5.size() == 6);
    QuasiModularForm e8 = E4 * E4;
    CHECK(h5[0].is_zero());
    CHECK(h5[1] == Rat(202, 107811) * e8);
    CHECK(h5[2] == Rat(-427, 3267) * E6);
    CHECK(h5[3] == Rat(83, 99) * E4);
    CHECK(h5[4].is_zero());
    CHECK(h5[5] == one);
    CHECK(from_rc_data(Rat(0), 10, {h5[0], h5[1], h5[2], h5[3], h5[4]}, Rat(1)) == l5());

    for (const Rat& k : {Rat(1, 2), Rat(2), Rat(7, 2)}) {
        auto ht = h_vector(theta_op(k));
        REQUIRE(ht.size() == 4);
        CHECK(ht[0].is_zero());
        CHECK(ht[1] == k / 8 * E4);
        CHECK(ht[2].is_zero());
        CHECK(ht[3] == one);
        CHECK(from_rc_data(k, 6, {ht[0], ht[1], ht[2]}, Rat(1)) == theta_op(k));
    }

    // non-monic round trips: data -> operator -> data -> coefficients
    std::mt19937 rng(67);
    for (const Rat& k : {Rat(5), Rat(1, 3)}) {
        std::vector<QuasiModularForm> g;
        for (long m = 0; m <= 3; ++m) g.push_back(random_modular(rng, 10 - 2 * m));
        Mldo L = from_rc_data(k, 10, g);
        CHECK(is_modular(L));
        auto h = h_vector(L);
        h.resize(g.size(), QuasiModularForm::zero(0));
        for (std::size_t m = 0; m < g.size(); ++m)
            if (!(h[m].is_zero() && g[m].is_zero())) CHECK(h[m] == g[m]);
        CHECK(a_from_h(k, 10, h_vector(L)) == L.coeffs());
    }
}

TEST_CASE("quasimodular correspondence") {
    std::mt19937 rng(71);
    for (const Rat& k : {Rat(4), Rat(7, 3)}) {
        for (long K = 2; K <= 10; K += 2) {
            QuasiModularForm F = random_form(rng, K);
            Mldo L = l_from_qmf(F, k);
            CHECK(is_modular(L));
            CHECK(qmf_from_l(L) == F);
        }
        // monomials of the completion map to the renormalized canonical family
        QuasiModularForm me2_12 = Rat(-1, 12) * E2;
        QuasiModularForm p(Rat(1));
        for (long n = 0; n <= 4; ++n) {
            CHECK(l_from_qmf(p, k) == Rat(1) / pochhammer(k, n) * vz_mldo(k, n));
            p = p * me2_12;
        }
        CHECK(l_from_qmf(E2, k) == Rat(-12) / k * serre_mldo(k));
        // multiplicativity over modular factors
        QuasiModularForm F = random_form(rng, 6);
        CHECK(l_from_qmf(E4 * F, k) == E4 * l_from_qmf(F, k));
    }
    // renormalized variant survives non-positive integer weights
    Mldo L0 = l_from_qmf(E2, Rat(0), true);
    CHECK(L0.coeff(0).is_zero());
    CHECK(L0.coeff(1) == QuasiModularForm(Rat(-12)));
    CHECK(is_modular(L0));
    CHECK(l_from_qmf(E2, Rat(1), true) == l_from_qmf(E2, Rat(1)));
    CHECK_THROWS_AS(l_from_qmf(E2, Rat(0)), std::domain_error);
}

TEST_CASE("pairing") {
    std::mt19937 rng(73);
    for (long k = 4; k <= 10; k += 2)
        for (long K = 2; K <= 8; K += 2) {
            QuasiModularForm F = random_form(rng, K);
            for (const auto& f : basis_M(k)) {
                QuasiModularForm v = pair_braces(f, F);
                CHECK(v.depth() == 0);
                CHECK(v == l_from_qmf(F, Rat(k)).apply(f));
            }
            // modular second slot degenerates to the product
            QuasiModularForm g = random_modular(rng, 8);
            for (const auto& f : basis_M(k)) CHECK(pair_braces(f, g) == f * g);
        }
    CHECK_THROWS_AS(pair_braces(E2, E4), std::invalid_argument);
}

TEST_CASE("second correspondence") {
    std::mt19937 rng(79);
    for (long k = 4; k <= 10; k += 2)
        for (long K = 2; K <= 8; K += 2) {
            QuasiModularForm F = random_form(rng, K);
            Mldo L = lambda_from_qmf(F, Rat(k));
            CHECK(is_modular(L));
            for (const auto& f : basis_M(k)) CHECK(L.apply(f) == project(f * F));
        }
}

TEST_CASE("extended bracket decomposition") {
    std::mt19937 rng(83);
    for (const Rat& k : {Rat(5), Rat(9, 2)}) {
        // single-bracket operators decompose onto a single slot
        for (long n = 0; n <= 3; ++n) {
            QuasiModularForm G = random_modular(rng, 8 - 2 * n);
            if (G.is_zero()) continue;
            Mldo L = ext_rc_mldo_right(k, n, G);
            auto data = decompose_ext_rc(L);
            for (const auto& [m, g] : data) {
                if (m == n)
                    CHECK(g == G);
                else
                    CHECK(g.is_zero());
            }
            CHECK(from_ext_rc(k, L.gain(), data) == L);
        }
        // general modular operators round-trip
        std::vector<QuasiModularForm> g;
        for (long m = 0; m <= 3; ++m) g.push_back(random_modular(rng, 10 - 2 * m));
        Mldo L = from_rc_data(k, 10, g);
        CHECK(from_ext_rc(k, 10, decompose_ext_rc(L)) == L);
    }
}

TEST_CASE("dimension counts") {
    CHECK(dim_mldo(Rat(4), 4, 2) == 2);
    CHECK(dim_mldo(Rat(4), 10, 5) == 5);
    CHECK(dim_mldo(Rat(1, 5), 4, 2) == 2);
    CHECK(dim_mldo(Rat(4), 12, 9) == dim_mldo(Rat(4), 12, 6));
    CHECK(dim_mldo(Rat(4), 0, 0) == 1);
    CHECK_THROWS_AS(dim_mldo(Rat(4), 3, 1), std::invalid_argument);
}

TEST_CASE("determinant operator") {
    // one-dimensional span of the constant 1 gives plain differentiation
    SeriesOperator d1 = det_operator({FracPowerSeries::constant(1, 20)});
    REQUIRE(d1.coeffs.size() == 2);
    CHECK(d1.coeffs[0].is_zero());
    CHECK(d1.coeffs[1] == FracPowerSeries::constant(1, 20));
    FracPowerSeries e4 = to_series(E4, 20);
    CHECK(d1.apply(e4) == e4.derive());

    // annihilates its own basis, in both derivative chains
    std::vector<FracPowerSeries> basis = {to_series(E4, 20), to_series(E6 * E4, 20)};
    for (bool sv : {false, true}) {
        SeriesOperator op = det_operator(basis, sv, Rat(4));
        for (const auto& b : basis) CHECK(op.apply(b).is_zero());
    }

    SeriesOperator mon = det_operator(basis, false, Rat(0), true);
    CHECK(mon.coeffs.back() == FracPowerSeries::constant(1, mon.coeffs.back().order()));
    for (const auto& b : basis) CHECK(mon.apply(b).is_zero());

    CHECK_THROWS_AS(det_operator({}), std::invalid_argument);
}
