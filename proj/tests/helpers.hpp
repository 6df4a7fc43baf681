#ifndef MLDOKIT_TEST_HELPERS_HPP
#define MLDOKIT_TEST_HELPERS_HPP

#include <random>
#include <vector>

#include "mldokit/qmring.hpp"

namespace testutil {

using mldokit::QuasiModularForm;
using mldokit::Rat;

// Delta as a ring element, (E4^3 - E6^2)/1728.
inline QuasiModularForm delta_form() {
    using Q = QuasiModularForm;
    return Rat(1, 1728) * (Q::E4() * Q::E4() * Q::E4() - Q::E6() * Q::E6());
}

// Deterministic pseudo-random homogeneous form of the given weight.
inline QuasiModularForm random_form(std::mt19937& rng, long weight) {
    using Q = QuasiModularForm;
    Q f = Q::zero(weight);
    std::uniform_int_distribution<int> coeff(-9, 9);
    for (long a = 0; 2 * a <= weight; ++a)
        for (long b = 0; 2 * a + 4 * b <= weight; ++b) {
            long rem = weight - 2 * a - 4 * b;
            if (rem % 6 != 0) continue;
            int c = coeff(rng);
            if (c != 0) f = f + Q::monomial(a, b, rem / 6, Rat(c));
        }
    return f;
}

// Deterministic pseudo-random element of M_w (depth zero).
inline QuasiModularForm random_modular(std::mt19937& rng, long weight) {
    using Q = QuasiModularForm;
    Q f = Q::zero(weight);
    std::uniform_int_distribution<int> coeff(-9, 9);
    for (const Q& b : mldokit::basis_M(weight)) f = f + mldokit::Rat(coeff(rng)) * b;
    return f;
}

// All monomials E2^a E4^b E6^c of weight at most the bound.
inline std::vector<QuasiModularForm> monomials_up_to(long max_weight) {
    std::vector<QuasiModularForm> out;
    for (long a = 0; 2 * a <= max_weight; ++a)
        for (long b = 0; 2 * a + 4 * b <= max_weight; ++b)
            for (long c = 0; 2 * a + 4 * b + 6 * c <= max_weight; ++c)
                out.push_back(QuasiModularForm::monomial(a, b, c, 1));
    return out;
}

}  // namespace testutil

#endif
