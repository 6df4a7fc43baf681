#ifndef MLDOKIT_MLDE_HPP
#define MLDOKIT_MLDE_HPP

#include <algorithm>
#include <vector>

#include "mldo.hpp"

namespace mldokit {

// Coefficients of the indicial polynomial sum_r a_r(0) x^r; the constant term
// of a polynomial in the Eisenstein series is the sum of its monomial
// coefficients, each generator having constant term 1.
inline std::vector<Rat> indicial_polynomial(const Mldo& L) {
    std::vector<Rat> poly;
    for (long r = 0; r <= L.order(); ++r) {
        Rat c = 0;
        for (const auto& [key, v] : L.coeff(r).monomials()) c += v;
        poly.push_back(c);
    }
    while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
    return poly;
}

inline Rat poly_eval(const std::vector<Rat>& poly, const Rat& x) {
    Rat v = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * x + *it;
    return v;
}

namespace detail {

inline std::vector<mpz_class> positive_divisors(mpz_class n) {
    n = abs(n);
    std::vector<mpz_class> divs;
    for (mpz_class d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            divs.push_back(d);
            if (d * d != n) divs.push_back(n / d);
        }
    }
    return divs;
}

}  // namespace detail

// All roots of the polynomial over Q, with multiplicity, by rational-root
// search and deflation; throws if a nonconstant factor without rational roots
// remains.
inline std::vector<Rat> rational_roots(std::vector<Rat> poly) {
    while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
    if (poly.size() <= 1) {
        if (poly.empty() || poly[0] == 0) throw std::domain_error("zero polynomial has every root");
        return {};
    }
    std::vector<Rat> roots;
    for (;;) {
        while (poly.size() > 1 && poly.front() == 0) {
            roots.push_back(0);
            poly.erase(poly.begin());
        }
        if (poly.size() <= 1) break;
        // Clear denominators to apply the rational root bound.
        mpz_class lcm = 1;
        for (const auto& c : poly) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
        std::vector<mpz_class> ip;
        for (const auto& c : poly) {
            Rat s = c * Rat(lcm);
            ip.push_back(s.get_num());
        }
        bool found = false;
        for (const auto& p : detail::positive_divisors(ip.front())) {
            for (const auto& q : detail::positive_divisors(ip.back())) {
                for (int sign : {1, -1}) {
                    Rat cand(sign * p, q);
                    cand.canonicalize();
                    if (poly_eval(poly, cand) == 0) {
                        roots.push_back(cand);
                        // Deflate by (x - cand), synthetic division from the top.
                        std::vector<Rat> quot(poly.size() - 1);
                        Rat acc = 0;
                        for (std::size_t i = poly.size(); i-- > 1;) {
                            acc = poly[i] + acc * cand;
                            quot[i - 1] = acc;
                        }
                        poly = std::move(quot);
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) throw std::domain_error("indicial polynomial has no further rational roots");
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

inline std::vector<Rat> indicial_roots(const Mldo& L) { return rational_roots(indicial_polynomial(L)); }

struct FrobeniusSolution {
    Rat exponent;
    FracPowerSeries series;
    Rat residual_order;
};

// Normalized series solution q^alpha (1 + ...) attached to a non-resonant
// indicial root; the recursion solves c_m I(alpha + m) = -(lower-order terms).
inline FrobeniusSolution frobenius_solve(const Mldo& L, const Rat& alpha, long N) {
    std::vector<Rat> ind = indicial_polynomial(L);
    if (poly_eval(ind, alpha) != 0) throw std::invalid_argument("not a root of the indicial polynomial");
    for (const Rat& beta : rational_roots(ind)) {
        Rat diff = beta - alpha;
        if (diff > 0 && is_integer(diff))
            throw std::domain_error("resonant root pair: " + rat_str(alpha) + " and " + rat_str(beta));
    }
    // q-expansions of the coefficients on the integer grid.
    std::vector<std::vector<Rat>> A;
    for (long r = 0; r <= L.order(); ++r) {
        std::vector<Rat> row;
        FracPowerSeries s = to_series(L.coeff(r), N);
        for (long u = 0; u < N; ++u) row.push_back(s.is_zero() ? Rat(0) : s.coeff_at(Rat(u)));
        A.push_back(std::move(row));
    }
    auto P = [&](long u, const Rat& x) {
        Rat v = 0;
        for (std::size_t r = A.size(); r-- > 0;) v = v * x + A[r][static_cast<std::size_t>(u)];
        return v;
    };
    std::vector<Rat> c(static_cast<std::size_t>(N), Rat(0));
    c[0] = 1;
    for (long m = 1; m < N; ++m) {
        Rat rhs = 0;
        for (long j = 0; j < m; ++j)
            if (c[static_cast<std::size_t>(j)] != 0) rhs += c[static_cast<std::size_t>(j)] * P(m - j, alpha + j);
        Rat im = poly_eval(ind, alpha + m);
        if (im == 0) throw std::logic_error("unexpected resonance in recursion");
        c[static_cast<std::size_t>(m)] = -rhs / im;
    }
    long sden = alpha.get_den().fits_slong_p() ? alpha.get_den().get_si() : 0;
    if (sden == 0 || sden > kMaxStepDen) throw std::domain_error("exponent denominator exceeds step bound");
    std::vector<Rat> stretched;
    // Exponents alpha + m sit on the 1/den(alpha) grid.
    for (long m = 0; m < N; ++m) {
        stretched.push_back(c[static_cast<std::size_t>(m)]);
        for (long f = 1; f < sden && m + 1 < N; ++f) stretched.push_back(0);
    }
    FracPowerSeries sol(alpha, sden, std::move(stretched), alpha + N);
    FracPowerSeries residual = L.apply(sol);
    if (!residual.is_zero()) throw std::logic_error("Frobenius recursion left a nonzero residual");
    return FrobeniusSolution{alpha, sol, residual.order()};
}

// Basis of the nullspace of the rows-by-columns matrix A over Q.
inline std::vector<std::vector<Rat>> nullspace(std::vector<std::vector<Rat>> A, std::size_t cols) {
    std::vector<long> pivot_of_col(cols, -1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < A.size(); ++col) {
        std::size_t sel = rank;
        while (sel < A.size() && A[sel][col] == 0) ++sel;
        if (sel == A.size()) continue;
        std::swap(A[rank], A[sel]);
        Rat inv = 1 / A[rank][col];
        for (std::size_t j = col; j < cols; ++j) A[rank][j] *= inv;
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (i == rank || A[i][col] == 0) continue;
            Rat f = A[i][col];
            for (std::size_t j = col; j < cols; ++j) A[i][j] -= f * A[rank][j];
        }
        pivot_of_col[col] = static_cast<long>(rank);
        ++rank;
    }
    std::vector<std::vector<Rat>> basis;
    for (std::size_t col = 0; col < cols; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        std::vector<Rat> v(cols, Rat(0));
        v[col] = 1;
        for (std::size_t c2 = 0; c2 < cols; ++c2)
            if (pivot_of_col[c2] >= 0) v[c2] = -A[static_cast<std::size_t>(pivot_of_col[c2])][col];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Basis of { f in M_k : L(f) = 0 } via exact linear algebra on q-expansions;
// the rank must agree between truncations N-2 and N.
inline std::vector<QuasiModularForm> kernel_in_Mk(const Mldo& L, long k, long N) {
    std::vector<QuasiModularForm> basis = basis_M(k);
    if (basis.empty()) return {};
    auto solve_at = [&](long order) {
        std::vector<std::vector<Rat>> rows(static_cast<std::size_t>(order),
                                           std::vector<Rat>(basis.size(), Rat(0)));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            FracPowerSeries s = L.apply(to_series(basis[i], order));
            for (long u = 0; u < order; ++u)
                rows[static_cast<std::size_t>(u)][i] = s.is_zero() ? Rat(0) : s.coeff_at(Rat(u));
        }
        return nullspace(std::move(rows), basis.size());
    };
    auto null_lo = solve_at(N - 2);
    auto null_hi = solve_at(N);
    if (null_lo.size() != null_hi.size())
        throw std::domain_error("kernel rank did not stabilize; increase the truncation order");
    std::vector<QuasiModularForm> out;
    for (const auto& v : null_hi) {
        QuasiModularForm f = QuasiModularForm::zero(k);
        for (std::size_t i = 0; i < basis.size(); ++i) f = f + v[i] * basis[i];
        out.push_back(f);
    }
    return out;
}

// For each 0 <= n <= k/12, the operator built from the iterated Serre
// derivative minus lambda_{k-12n} E4 is singular on M_k with eigenform leading
// exponent q^n; lambda_j = j(j+2)/144.
inline std::vector<std::pair<Rat, long>> kz_spectrum(long k, long N) {
    if (k <= 0 || k % 2 != 0) throw std::invalid_argument("weight must be a positive even integer");
    if ((k + 4) % 3 == 0) throw std::invalid_argument("weight + 4 must not be divisible by 3");
    std::vector<std::pair<Rat, long>> out;
    for (long n = 0; 12 * n <= k; ++n) {
        long j = k - 12 * n;
        Rat lambda = Rat(j) * (j + 2) / 144;
        Mldo L = compose(serre_mldo(Rat(k + 2)), serre_mldo(Rat(k))) -
                 lambda * (QuasiModularForm::E4() * Mldo::identity(Rat(k)));
        std::vector<QuasiModularForm> ker = kernel_in_Mk(L, k, N);
        if (ker.size() != 1)
            throw std::domain_error("expected a one-dimensional eigenspace at weight " + std::to_string(k));
        FracPowerSeries s = to_series(ker[0], N);
        if (s.is_zero() || s.valuation() != n)
            throw std::domain_error("eigenform leading exponent mismatch at weight " + std::to_string(k));
        out.emplace_back(lambda, n);
    }
    return out;
}

// True iff L(s) vanishes through the computable order; the residual is
// returned for diagnostics.
inline bool verify_annihilates(const Mldo& L, const FracPowerSeries& s, FracPowerSeries* residual = nullptr) {
    FracPowerSeries r = L.apply(s);
    if (residual) *residual = r;
    return r.is_zero();
}

}  // namespace mldokit

#endif
