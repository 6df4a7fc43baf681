#ifndef MLDOKIT_VERIFY_HPP
#define MLDOKIT_VERIFY_HPP

#include <functional>
#include <string>
#include <vector>

#include "io.hpp"

namespace mldokit {

// Outcome of a named verification suite: a pass/fail verdict, printable report
// lines, and the first counterexample when the verdict is negative.
struct SuiteResult {
    std::string name;
    bool ok = true;
    std::vector<std::string> lines;
    std::string counterexample;

    void note(const std::string& line) { lines.push_back(line); }

    void check(bool cond, const std::string& what) {
        if (cond) return;
        if (ok) counterexample = what;  // keep only the first counterexample
        ok = false;
    }
};

namespace verify_detail {

inline QuasiModularForm delta_form() {
    QuasiModularForm e4 = QuasiModularForm::E4(), e6 = QuasiModularForm::E6();
    return Rat(1, 1728) * (e4 * e4 * e4 - e6 * e6);
}

inline std::vector<QuasiModularForm> monomials_up_to(long max_weight) {
    std::vector<QuasiModularForm> out;
    for (long a = 0; 2 * a <= max_weight; ++a)
        for (long b = 0; 2 * a + 4 * b <= max_weight; ++b)
            for (long c = 0; 2 * a + 4 * b + 6 * c <= max_weight; ++c)
                out.push_back(QuasiModularForm::monomial(a, b, c, 1));
    return out;
}

inline Mldo kz_mldo(const Rat& k) {
    return compose(serre_mldo(k + 2), serre_mldo(k)) -
           k * (k + 2) / 144 * (QuasiModularForm::E4() * Mldo::identity(k));
}

inline Mldo l3_op() {
    QuasiModularForm E2 = QuasiModularForm::E2(), E4 = QuasiModularForm::E4(), E6 = QuasiModularForm::E6();
    QuasiModularForm a0 = Rat(1271, 1080) * E6;
    QuasiModularForm a1 = Rat(1, 2) * derive(E2) - Rat(169, 100) * E4;
    QuasiModularForm a2 = Rat(-1, 2) * E2;
    return Mldo(Rat(0), 6, {a0, a1, a2, QuasiModularForm(Rat(1))});
}

inline Mldo l5_op() {
    QuasiModularForm E2 = QuasiModularForm::E2(), E4 = QuasiModularForm::E4(), E6 = QuasiModularForm::E6();
    QuasiModularForm E8 = E4 * E4;
    QuasiModularForm a1 = Rat(5, 3) * derive(E2, 3) + Rat(83, 330) * derive(E4, 2) +
                          Rat(427, 9801) * derive(E6) + Rat(202, 107811) * E8;
    QuasiModularForm a2 = -(Rat(10) * derive(E2, 2) + Rat(83, 66) * derive(E4) + Rat(427, 3267) * E6);
    QuasiModularForm a3 = Rat(10) * derive(E2) + Rat(83, 99) * E4;
    QuasiModularForm a4 = Rat(-5, 3) * E2;
    return Mldo(Rat(0), 10,
                {QuasiModularForm::zero(10), a1, a2, a3, a4, QuasiModularForm(Rat(1))});
}

inline Mldo theta_op(const Rat& k) {
    QuasiModularForm E2 = QuasiModularForm::E2(), E4 = QuasiModularForm::E4();
    QuasiModularForm a0 = -(k * (k + 1) * (k + 2) / 24 * derive(E2, 2) + k * k / 32 * derive(E4));
    QuasiModularForm a1 = (k + 1) * (k + 2) / 4 * derive(E2) + k / 8 * E4;
    QuasiModularForm a2 = -(k + 2) / 4 * E2;
    return Mldo(k, 6, {a0, a1, a2, QuasiModularForm(Rat(1))});
}

// sum_{n >= 0} q^{n^2 + shift n} / ((1-q)...(1-q^n)), truncated at q^N.
inline FracPowerSeries rr_sum(long shift, long N) {
    FracPowerSeries acc = FracPowerSeries::zero(N);
    FracPowerSeries poch = FracPowerSeries::constant(1, N);
    for (long n = 0; n * n + shift * n < N; ++n) {
        if (n > 0)
            poch = poch * (FracPowerSeries::constant(1, N) - FracPowerSeries::monomial(1, Rat(n), N));
        acc = acc + FracPowerSeries::monomial(1, Rat(n * n + shift * n), N) * poch.inverse();
    }
    return acc;
}

}  // namespace verify_detail

inline SuiteResult verify_sl2() {
    SuiteResult r{"sl2"};
    for (const auto& f : verify_detail::monomials_up_to(20)) {
        QuasiModularForm wd = weight_op(derive(f)) - derive(weight_op(f));
        r.check(wd == Rat(2) * derive(f), "[W,D] != 2D on " + to_string(f));
        QuasiModularForm wl = weight_op(delta(f)) - delta(weight_op(f));
        r.check(wl == Rat(-2) * delta(f), "[W,delta] != -2 delta on " + to_string(f));
        QuasiModularForm ld = delta(derive(f)) - derive(delta(f));
        r.check(ld == weight_op(f), "[delta,D] != W on " + to_string(f));
    }
    r.note("commutator relations hold on all monomials of weight <= 20");
    return r;
}

inline SuiteResult verify_ramanujan() {
    SuiteResult r{"ramanujan"};
    QuasiModularForm E2 = QuasiModularForm::E2(), E4 = QuasiModularForm::E4(), E6 = QuasiModularForm::E6();
    r.check(derive(E2) == Rat(1, 12) * (E2 * E2 - E4), "D(E2) != (E2^2 - E4)/12");
    r.check(derive(E4) == Rat(1, 3) * (E2 * E4 - E6), "D(E4) != (E2 E4 - E6)/3");
    r.check(derive(E6) == Rat(1, 2) * (E2 * E6 - E4 * E4), "D(E6) != (E2 E6 - E4^2)/2");
    long N = 30;
    std::vector<QuasiModularForm> forms = {E2, E4, E6, verify_detail::delta_form(), E2 * E4, E4 * E6};
    for (const auto& f : forms)
        r.check(to_series(derive(f), N) == to_series(f, N).derive(),
                "series derivative disagrees on " + to_string(f));
    r.check(to_series(verify_detail::delta_form(), N) == delta_series(N),
            "ring Delta disagrees with the eta-product series");
    r.note("closed derivative system consistent with q-expansions to order 30");
    return r;
}

inline SuiteResult verify_omega_table() {
    SuiteResult r{"omega-table"};
    QuasiModularForm E4 = QuasiModularForm::E4(), E6 = QuasiModularForm::E6();
    std::vector<QuasiModularForm> want = {
        QuasiModularForm(Rat(1)),
        QuasiModularForm::zero(2),
        Rat(-1, 72) * E4,
        Rat(-1, 144) * E6,
        Rat(-1, 288) * E4 * E4,
        Rat(-5, 2592) * E4 * E6,
        Rat(-1, 20736) * (Rat(9) * E4 * E4 * E4 + Rat(16) * E6 * E6),
        Rat(-35, 41472) * E4 * E4 * E6,
        Rat(-1, 373248) * (Rat(117) * E4 * E4 * E4 * E4 + Rat(128) * E4 * E6 * E6),
    };
    for (long m = 0; m <= 8; ++m) {
        r.check(omega(m) == want[static_cast<std::size_t>(m)], "omega(" + std::to_string(m) + ") mismatch");
        r.note("omega(" + std::to_string(m) + ") = " + to_string(omega(m)));
    }
    return r;
}

inline SuiteResult verify_bracket_table() {
    SuiteResult r{"bracket-table"};
    QuasiModularForm one(Rat(1));
    QuasiModularForm E4 = QuasiModularForm::E4();
    QuasiModularForm dlt = verify_detail::delta_form();
    std::vector<std::pair<long, QuasiModularForm>> want = {
        {0, one},
        {2, Rat(-1, 36) * E4},
        {4, QuasiModularForm::zero(8)},
        {6, Rat(36) * dlt},
        {8, Rat(352, 3) * E4 * dlt},
        {10, Rat(260) * E4 * E4 * dlt},
        {12, Rat(480) * E4 * E4 * E4 * dlt + Rat(1259136) * dlt * dlt},
    };
    for (const auto& [n, f] : want) {
        QuasiModularForm got = factorial(n) * ext_bracket(Rat(0), Rat(0), n, one, one);
        r.check(got == f, "n! <1,1>_n mismatch at n = " + std::to_string(n));
        r.note("n = " + std::to_string(n) + ": " + to_string(got));
    }
    for (long n = 1; n <= 11; n += 2)
        r.check(ext_bracket(Rat(0), Rat(0), n, one, one).is_zero(),
                "<1,1>_n nonzero at odd n = " + std::to_string(n));
    return r;
}

inline SuiteResult verify_decompositions() {
    SuiteResult r{"decompositions"};
    QuasiModularForm E4 = QuasiModularForm::E4(), E6 = QuasiModularForm::E6();
    QuasiModularForm E8 = E4 * E4;

    Mldo L3 = verify_detail::l3_op();
    auto s3 = to_basis(L3, BasisTag::Serre);
    r.check(s3[1] == Rat(-1571, 900) * E4, "L3 iterated-Serre coefficient != -1571/900 E4");
    auto k3 = to_basis(L3, BasisTag::KK);
    r.check(k3[1] == Rat(-169, 100) * E4, "L3 Kaneko-Koike coefficient != -169/100 E4");
    auto v3 = to_basis(L3, BasisTag::VZ);
    r.check(v3[1] == Rat(-1039, 600) * E4, "L3 canonical coefficient != -1039/600 E4");
    r.note("order-3 operator: serre -1571/900, kk -169/100, canonical -1039/600 (times E4)");
    for (auto tag : {BasisTag::Serre, BasisTag::KK, BasisTag::VZ})
        r.check(from_basis(tag, Rat(0), 6, to_basis(L3, tag)) == L3, "L3 basis round trip failed");

    Mldo L5 = verify_detail::l5_op();
    auto v5 = to_basis(L5, BasisTag::VZ);
    r.check(v5[1] == Rat(-2689, 1149984) * E8 && v5[2] == Rat(35, 3267) * E6 && v5[3] == Rat(1, 198) * E4,
            "order-5 operator canonical coefficients mismatch");
    auto k5 = to_basis(L5, BasisTag::KK);
    r.check(k5[1] == Rat(7181, 143748) * E8 && k5[2] == Rat(1885, 6534) * E6 && k5[3] == Rat(83, 99) * E4,
            "order-5 operator Kaneko-Koike coefficients mismatch");
    auto s5 = to_basis(L5, BasisTag::Serre);
    r.check(s5[1] == Rat(-6151, 1724976) * E8 && s5[2] == Rat(295, 8712) * E6 && s5[3] == Rat(-53, 396) * E4,
            "order-5 operator iterated-Serre coefficients mismatch");
    auto h5 = h_vector(L5);
    r.check(h5[1] == Rat(202, 107811) * E8 && h5[2] == Rat(-427, 3267) * E6 && h5[3] == Rat(83, 99) * E4,
            "order-5 operator modular data vector mismatch");
    r.check(from_rc_data(Rat(0), 10, {h5[0], h5[1], h5[2], h5[3]}, Rat(1)) == L5,
            "order-5 operator bracket reconstruction failed");
    r.note("order-5 operator reproduced in all four expansions");

    Mldo T = verify_detail::theta_op(Rat(1));
    auto hT = h_vector(T);
    r.check(hT[1] == Rat(1, 8) * E4, "theta operator data vector != k/8 E4 at k = 1");
    r.note("theta operator data vector verified at k = 1");
    return r;
}

inline SuiteResult verify_kz_spectrum() {
    SuiteResult r{"kz-spectrum"};
    for (long k : {4L, 12L, 16L}) {
        auto spec = kz_spectrum(k, std::max(24L, k + 8));
        for (std::size_t i = 0; i < spec.size(); ++i) {
            long j = k - 12 * static_cast<long>(i);
            r.check(spec[i].first == Rat(j) * (j + 2) / 144,
                    "eigenvalue mismatch at weight " + std::to_string(k));
            r.check(spec[i].second == static_cast<long>(i),
                    "eigenform leading exponent mismatch at weight " + std::to_string(k));
            r.note("k = " + std::to_string(k) + ": eigenvalue " + rat_str(spec[i].first) +
                   ", eigenform starts at q^" + std::to_string(spec[i].second));
        }
    }
    return r;
}

inline SuiteResult verify_theta() {
    SuiteResult r{"theta"};
    for (long n = 1; n <= 3; ++n) {
        Rat k(n, 2);
        Mldo L = verify_detail::theta_op(k);
        auto roots = indicial_roots(L);
        std::vector<Rat> want = {Rat(0), Rat(1, 2), k / 4};
        std::sort(want.begin(), want.end());
        r.check(roots == want, "indicial roots mismatch at n = " + std::to_string(n));
        for (int j : {2, 3, 4})
            r.check(verify_annihilates(L, theta_series(j, 40).pow(n)),
                    "theta_" + std::to_string(j) + "^" + std::to_string(n) + " not annihilated");
        r.note("n = " + std::to_string(n) + ": theta powers annihilated to order 40");
    }
    return r;
}

inline SuiteResult verify_rogers_ramanujan() {
    SuiteResult r{"rogers-ramanujan"};
    long N = 25;
    Mldo L = verify_detail::kz_mldo(Rat(1, 5));
    auto roots = indicial_roots(L);
    r.check(roots == std::vector<Rat>{Rat(0), Rat(1, 5)}, "indicial roots != {0, 1/5}");
    FracPowerSeries twist = series_exp(Rat(2, 5) * series_log(euler_product(N)));
    FracPowerSeries s0 = frobenius_solve(L, Rat(0), N).series;
    r.check(s0 == twist * verify_detail::rr_sum(0, N), "solution at 0 != twisted first sum");
    FracPowerSeries s1 = frobenius_solve(L, Rat(1, 5), N).series;
    r.check(s1 == FracPowerSeries::monomial(1, Rat(1, 5), N) * (twist * verify_detail::rr_sum(1, N)),
            "solution at 1/5 != twisted second sum");
    r.note("Frobenius basis matches the eta^(2/5)-twisted combinatorial sums to order 25");

    FracPowerSeries g0 = FracPowerSeries::monomial(1, Rat(-1, 60), N) * verify_detail::rr_sum(0, N);
    FracPowerSeries g1 = FracPowerSeries::monomial(1, Rat(11, 60), N) * verify_detail::rr_sum(1, N);
    SeriesOperator op = det_operator({g0, g1}, true, Rat(0));
    FracPowerSeries eta4 = eta_power(4, N);
    r.check(op.coeffs[2] == Rat(1, 5) * eta4, "determinant leading coefficient != eta^4/5");
    r.check(op.coeffs[1].is_zero(), "determinant middle coefficient nonzero");
    r.check(op.coeffs[0] == Rat(-11, 18000) * (eta4 * to_series(QuasiModularForm::E4(), N)),
            "determinant constant coefficient mismatch");
    r.note("vector-valued determinant proportional to eta^4 times the order-2 operator");
    return r;
}

inline SuiteResult verify_projection() {
    SuiteResult r{"projection"};
    for (const auto& f : verify_detail::monomials_up_to(16)) {
        long k = f.weight();
        if (k < 4) continue;
        r.check(delta(project(f)).is_zero(), "projection not modular on " + to_string(f));
    }
    // pi_k annihilates image of D
    for (const auto& g : verify_detail::monomials_up_to(12)) {
        if (g.weight() + 2 < 4) continue;
        r.check(project(derive(g)).is_zero(), "projection does not kill D(" + to_string(g) + ")");
    }
    // second correspondence against the projection
    for (long k = 4; k <= 8; k += 2)
        for (const auto& f : basis_M(k))
            for (const auto& F : verify_detail::monomials_up_to(8)) {
                if (F.weight() == 0) continue;
                Mldo Lam = lambda_from_qmf(F, Rat(k));
                r.check(Lam.apply(f) == project(f * F),
                        "second correspondence disagrees with the projection");
            }
    r.note("projection identities hold on weights <= 16");
    return r;
}

inline SuiteResult verify_depth() {
    SuiteResult r{"depth"};
    for (long w = 4; w <= 12; w += 2)
        for (const auto& g : basis_M(w))
            for (long p = 0; p <= 2; ++p) {
                QuasiModularForm F = derive(g, p);
                for (long n = 0; n <= 3; ++n)
                    r.check(vz_depth(F, p, n).depth() <= p, "depth bound violated on D^" +
                                                                std::to_string(p) + "(" + to_string(g) + ")");
            }
    QuasiModularForm E2 = QuasiModularForm::E2();
    for (long n = 0; n <= 3; ++n)
        r.check(mr_bracket(E2, 1, E2, 1, n).depth() <= 2, "bracket depth bound violated");
    r.note("depth bounds hold for derivatives of modular forms of weight <= 12");
    return r;
}

inline SuiteResult verify_completion() {
    SuiteResult r{"completion"};
    for (const auto& f : verify_detail::monomials_up_to(14)) {
        r.check(completion(derive(f)) == hat_derive(completion(f)),
                "completion does not intertwine D on " + to_string(f));
        r.check(completion(delta(f)) == hat_delta(completion(f)),
                "completion does not intertwine delta on " + to_string(f));
        r.check(constant_term(completion(f)) == f, "constant term does not invert completion");
        if (f.weight() >= 4)
            r.check(hat_project(completion(f)) == completion(project(f)),
                    "hatted projection disagrees with the holomorphic one on " + to_string(f));
    }
    r.note("hatted calculus consistent with the holomorphic one on weights <= 14");
    return r;
}

inline std::vector<std::string> verify_suite_names() {
    return {"sl2",          "ramanujan",        "omega-table", "bracket-table",
            "decompositions", "kz-spectrum",    "theta",       "rogers-ramanujan",
            "projection",   "depth",            "completion"};
}

inline SuiteResult run_suite(const std::string& name) {
    if (name == "sl2") return verify_sl2();
    if (name == "ramanujan") return verify_ramanujan();
    if (name == "omega-table") return verify_omega_table();
    if (name == "bracket-table") return verify_bracket_table();
    if (name == "decompositions") return verify_decompositions();
    if (name == "kz-spectrum") return verify_kz_spectrum();
    if (name == "theta") return verify_theta();
    if (name == "rogers-ramanujan") return verify_rogers_ramanujan();
    if (name == "projection") return verify_projection();
    if (name == "depth") return verify_depth();
    if (name == "completion") return verify_completion();
    throw std::invalid_argument("unknown verification suite: " + name);
}

}  // namespace mldokit

#endif
