#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "mldokit/mlde.hpp"

using namespace mldokit;
using testutil::delta_form;

namespace {

const QuasiModularForm E2 = QuasiModularForm::E2();
const QuasiModularForm E4 = QuasiModularForm::E4();
const QuasiModularForm E6 = QuasiModularForm::E6();

Mldo kz_mldo(const Rat& k) {
    return compose(serre_mldo(k + 2), serre_mldo(k)) - k * (k + 2) / 144 * (E4 * Mldo::identity(k));
}

Mldo l3(bool full) {
    QuasiModularForm a0 = full ? Rat(1271, 1080) * E6 : QuasiModularForm::zero(6);
    QuasiModularForm a1 = Rat(1, 2) * derive(E2) - Rat(169, 100) * E4;
    QuasiModularForm a2 = Rat(-1, 2) * E2;
    return Mldo(Rat(0), 6, {a0, a1, a2, QuasiModularForm(Rat(1))});
}

Mldo theta_op(const Rat& k) {
    QuasiModularForm a0 = -(k * (k + 1) * (k + 2) / 24 * derive(E2, 2) + k * k / 32 * derive(E4));
    QuasiModularForm a1 = (k + 1) * (k + 2) / 4 * derive(E2) + k / 8 * E4;
    QuasiModularForm a2 = -(k + 2) / 4 * E2;
    return Mldo(k, 6, {a0, a1, a2, QuasiModularForm(Rat(1))});
}

// Sum over n >= 0 of q^{n^2 + shift n} / ((1-q)...(1-q^n)), truncated.
FracPowerSeries rr_sum(long shift, long N) {
    FracPowerSeries acc = FracPowerSeries::zero(N);
    FracPowerSeries poch = FracPowerSeries::constant(1, N);
    for (long n = 0; n * n + shift * n < N; ++n) {
        if (n > 0) {
            FracPowerSeries factor =
                FracPowerSeries::constant(1, N) - FracPowerSeries::monomial(1, Rat(n), N);
            poch = poch * factor;
        }
        acc = acc + FracPowerSeries::monomial(1, Rat(n * n + shift * n), N) * poch.inverse();
    }
    return acc;
}

}  // namespace

TEST_CASE("rational root extraction") {
    // x (x + 3) (x - 1/2)
    std::vector<Rat> p = {Rat(0), Rat(-3, 2), Rat(5, 2), Rat(1)};
    auto roots = rational_roots(p);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == -3);
    CHECK(roots[1] == 0);
    CHECK(roots[2] == Rat(1, 2));

    CHECK(rational_roots({Rat(5)}).empty());
    CHECK_THROWS_AS(rational_roots({Rat(-2), Rat(0), Rat(1)}), std::domain_error);  // x^2 - 2
    CHECK_THROWS_AS(rational_roots({Rat(0)}), std::domain_error);
}

TEST_CASE("indicial data") {
    auto r15 = indicial_roots(kz_mldo(Rat(1, 5)));
    REQUIRE(r15.size() == 2);
    CHECK(r15[0] == 0);
    CHECK(r15[1] == Rat(1, 5));

    auto r3 = indicial_roots(l3(true));
    REQUIRE(r3.size() == 3);
    CHECK(r3[0] == Rat(-41, 30));
    CHECK(r3[1] == Rat(5, 6));
    CHECK(r3[2] == Rat(31, 30));

    // dropping the order-0 term leaves an irrational quadratic factor
    CHECK_THROWS_AS(indicial_roots(l3(false)), std::domain_error);

    for (const Rat& k : {Rat(1, 2), Rat(3)}) {
        auto rt = indicial_roots(theta_op(k));
        REQUIRE(rt.size() == 3);
        std::vector<Rat> want = {Rat(0), Rat(1, 2), k / 4};
        std::sort(want.begin(), want.end());
        CHECK(rt == want);
    }
}

TEST_CASE("frobenius solutions") {
    // plain differentiation: the only normalized solution at alpha = 0 is 1
    Mldo d(Rat(0), 2, {QuasiModularForm::zero(2), QuasiModularForm(Rat(1))});
    FrobeniusSolution s = frobenius_solve(d, Rat(0), 12);
    CHECK(s.series == FracPowerSeries::constant(1, 12));
    CHECK_THROWS_AS(frobenius_solve(d, Rat(1, 3), 12), std::invalid_argument);

    // three distinct expansions for the full order-3 operator
    for (const Rat& alpha : indicial_roots(l3(true))) {
        FrobeniusSolution sol = frobenius_solve(l3(true), alpha, 20);
        CHECK(sol.series.valuation() == alpha);
        CHECK(sol.series.leading_coeff() == 1);
        CHECK(verify_annihilates(l3(true), sol.series));
    }

    // resonant exponent pair is rejected
    Mldo res(Rat(0), 4, {QuasiModularForm::zero(4), -E2, QuasiModularForm(Rat(1))});
    CHECK_THROWS_AS(frobenius_solve(res, Rat(0), 10), std::domain_error);
}

TEST_CASE("rogers-ramanujan expansions") {
    long N = 28;
    Mldo L = kz_mldo(Rat(1, 5));
    FracPowerSeries twist = series_exp(Rat(2, 5) * series_log(euler_product(N)));

    FrobeniusSolution s0 = frobenius_solve(L, Rat(0), N);
    CHECK(s0.series == twist * rr_sum(0, N));

    FrobeniusSolution s1 = frobenius_solve(L, Rat(1, 5), N);
    CHECK(s1.series == FracPowerSeries::monomial(1, Rat(1, 5), N) * (twist * rr_sum(1, N)));
}

TEST_CASE("vector-valued determinant") {
    long N = 25;
    // untwisted components with exponents n^2 - 1/60 and n^2 + n + 11/60
    FracPowerSeries g0 = FracPowerSeries::monomial(1, Rat(-1, 60), N) * rr_sum(0, N);
    FracPowerSeries g1 = FracPowerSeries::monomial(1, Rat(11, 60), N) * rr_sum(1, N);
    // weight-0 components, so the derivative chain starts at weight 0
    SeriesOperator op = det_operator({g0, g1}, true, Rat(0));
    REQUIRE(op.coeffs.size() == 3);

    FracPowerSeries eta4 = eta_power(4, N);
    Rat lambda = Rat(1, 5) * Rat(11, 5) / 144;  // 11/3600
    CHECK(op.coeffs[2] == Rat(1, 5) * eta4);
    CHECK(op.coeffs[1].is_zero());
    CHECK(op.coeffs[0] == -lambda / 5 * (eta4 * to_series(E4, N)));

    CHECK(op.apply(g0).is_zero());
    CHECK(op.apply(g1).is_zero());
}

TEST_CASE("kernels of operators on modular forms") {
    // weight-4 eigenform of the order-2 family
    Mldo L4 = kz_mldo(Rat(4));
    auto ker = kernel_in_Mk(L4, 4, 24);
    REQUIRE(ker.size() == 1);
    CHECK(ker[0].depth() == 0);
    CHECK(delta(ker[0]).is_zero());
    // one-dimensional M_4, so the kernel element is a multiple of E4
    CHECK(ker[0] == ker[0].monomials().begin()->second * E4);

    auto kd = kernel_in_Mk(serre_mldo(Rat(12)), 12, 24);
    REQUIRE(kd.size() == 1);
    Rat c = kd[0].monomials().begin()->second;  // E6^2 component comes first in key order
    CHECK(kd[0] == Rat(-1728) * c * delta_form());

    CHECK(kernel_in_Mk(serre_mldo(Rat(4)), 4, 20).empty());
}

TEST_CASE("eigenvalue lists") {
    auto s4 = kz_spectrum(4, 24);
    REQUIRE(s4.size() == 1);
    CHECK(s4[0].first == Rat(1, 6));
    CHECK(s4[0].second == 0);

    auto s12 = kz_spectrum(12, 30);
    REQUIRE(s12.size() == 2);
    CHECK(s12[0].first == Rat(7, 6));
    CHECK(s12[0].second == 0);
    CHECK(s12[1].first == Rat(0));
    CHECK(s12[1].second == 1);

    CHECK_THROWS_AS(kz_spectrum(8, 20), std::invalid_argument);
    CHECK_THROWS_AS(kz_spectrum(5, 20), std::invalid_argument);
}

TEST_CASE("theta constant solutions") {
    for (long n = 1; n <= 3; ++n) {
        Rat k(n, 2);
        Mldo L = theta_op(k);
        for (int j : {2, 3, 4}) {
            FracPowerSeries s = theta_series(j, 40).pow(n);
            FracPowerSeries residual = FracPowerSeries::zero(0);
            CHECK(verify_annihilates(L, s, &residual));
            CHECK(residual.is_zero());
        }
    }
    // a wrong power is not annihilated
    CHECK_FALSE(verify_annihilates(theta_op(Rat(1, 2)), theta_series(3, 30).pow(2)));
}
