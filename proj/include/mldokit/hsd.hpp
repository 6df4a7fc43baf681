#ifndef MLDOKIT_HSD_HPP
#define MLDOKIT_HSD_HPP

#include <mutex>
#include <vector>

#include "qmring.hpp"

namespace mldokit {

// Serre derivative with explicit weight parameter.
inline QuasiModularForm serre(const Rat& kappa, const QuasiModularForm& F) {
    return derive(F) - kappa / 12 * QuasiModularForm::E2() * F;
}

// Plain iterated Serre derivative, indices kappa, kappa+2, ..., kappa+2n-2.
inline QuasiModularForm serre_iter(const Rat& kappa, long n, const QuasiModularForm& F) {
    QuasiModularForm r = F;
    for (long i = 0; i < n; ++i) r = serre(kappa + 2 * i, r);
    return r;
}

// Canonical higher Serre derivative, defined by the monic recursion
//   S_{n+1} = serre_{kappa+2n}(S_n) - n(n+kappa-1)/144 * E4 * S_{n-1}.
inline QuasiModularForm vz(const Rat& kappa, long n, const QuasiModularForm& F) {
    if (n < 0) throw std::invalid_argument("negative derivative order");
    QuasiModularForm prev = F;
    if (n == 0) return prev;
    QuasiModularForm cur = serre(kappa, F);
    for (long m = 1; m < n; ++m) {
        QuasiModularForm next =
            serre(kappa + 2 * m, cur) - Rat(m) * (m + kappa - 1) / 144 * QuasiModularForm::E4() * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// Closed D-expansion of the same operator.
inline QuasiModularForm vz_explicit(const Rat& kappa, long n, const QuasiModularForm& F) {
    if (n < 0) throw std::invalid_argument("negative derivative order");
    QuasiModularForm me2 = Rat(-1, 12) * QuasiModularForm::E2();
    QuasiModularForm r = QuasiModularForm::zero(F.weight() + 2 * n);
    for (long j = 0; j <= n; ++j) {
        QuasiModularForm p(Rat(1));
        for (long i = 0; i < n - j; ++i) p = p * me2;
        r = r + binom(n, j) * pochhammer(kappa + j, n - j) * p * derive(F, j);
    }
    return r;
}

// Rankin-Cohen bracket; binomials taken as falling-factorial quotients so the
// weight parameters may be arbitrary rationals.
inline QuasiModularForm rc_bracket(const Rat& kappa, const Rat& lambda, long n, const QuasiModularForm& F,
                                   const QuasiModularForm& G) {
    if (n < 0) throw std::invalid_argument("negative bracket index");
    QuasiModularForm r = QuasiModularForm::zero(F.weight() + G.weight() + 2 * n);
    for (long i = 0; i <= n; ++i) {
        Rat c = binom(n + kappa - 1, n - i) * binom(n + lambda - 1, i);
        if (i % 2 != 0) c = -c;
        r = r + c * derive(F, i) * derive(G, n - i);
    }
    return r;
}

// Kaneko-Koike operator.
inline QuasiModularForm kk(const Rat& kappa, long n, const QuasiModularForm& F) {
    if (n < 0) throw std::invalid_argument("negative operator order");
    if (n == 0) return F;
    return derive(F, n) - (kappa + n - 1) / 12 * rc_bracket(2, kappa, n - 1, QuasiModularForm::E2(), F);
}

// Extended Rankin-Cohen bracket.
inline QuasiModularForm ext_bracket(const Rat& kappa, const Rat& lambda, long n, const QuasiModularForm& F,
                                    const QuasiModularForm& G) {
    if (n < 0) throw std::invalid_argument("negative bracket index");
    QuasiModularForm r = QuasiModularForm::zero(F.weight() + G.weight() + 2 * n);
    for (long i = 0; i <= n; ++i) {
        Rat c = binom(n, i);
        if (i % 2 != 0) c = -c;
        r = r + c * dmod(kappa, i, F) * dmod(lambda, n - i, G);
    }
    return r;
}

// omega_m, the modular forms mediating between the Kaneko-Koike and canonical
// higher Serre families; memoized, read-through safe.
inline QuasiModularForm omega(long m) {
    if (m < 0) throw std::invalid_argument("negative index");
    static std::mutex mu;
    static std::vector<QuasiModularForm> cache;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<long>(cache.size()) <= m) {
        long n = static_cast<long>(cache.size());
        // psi_n = sum_j C(n,j) (-E2/12)^j Dmod^{n-j}(1); omega_n = (-1)^n n! psi_n.
        QuasiModularForm me2 = Rat(-1, 12) * QuasiModularForm::E2();
        QuasiModularForm psi = QuasiModularForm::zero(2 * n);
        for (long j = 0; j <= n; ++j) {
            QuasiModularForm p(Rat(1));
            for (long i = 0; i < j; ++i) p = p * me2;
            psi = psi + binom(n, j) * p * dmod_one(n - j);
        }
        Rat sign = (n % 2 == 0) ? 1 : -1;
        cache.push_back(sign * factorial(n) * psi);
    }
    return cache[static_cast<std::size_t>(m)];
}

// Renormalized canonical higher Serre derivative, the partner of dmod.
inline QuasiModularForm vzmod(const Rat& kappa, long n, const QuasiModularForm& F) {
    Rat den = pochhammer(kappa, n);
    if (den == 0) {
        if (kappa == 0 && F.is_constant()) {
            Rat sign = (n % 2 == 0) ? 1 : -1;
            return F.constant_value() * sign / factorial(n) * omega(n);
        }
        throw std::domain_error("renormalized higher Serre derivative undefined: vanishing shifted factorial");
    }
    return Rat(1) / den * vz(kappa, n, F);
}

enum class CkVariant { D, Serre, KK };

// Coefficient lists of the Cohen-Kuznetsov style generating series, normalized
// so entry n is the X^n/n! coefficient.
inline std::vector<QuasiModularForm> ck_truncated(CkVariant variant, const Rat& kappa, const QuasiModularForm& F,
                                                  long n_max) {
    std::vector<QuasiModularForm> list;
    switch (variant) {
        case CkVariant::D:
            for (long n = 0; n <= n_max; ++n) list.push_back(dmod(kappa, n, F));
            break;
        case CkVariant::Serre:
            for (long n = 0; n <= n_max; ++n) list.push_back(vzmod(kappa, n, F));
            break;
        case CkVariant::KK: {
            // K-list is the convolution of the D-list with the alternating
            // phi-list, phi_m = Dmod^m(1).
            std::vector<QuasiModularForm> d = ck_truncated(CkVariant::D, kappa, F, n_max);
            for (long n = 0; n <= n_max; ++n) {
                QuasiModularForm s = QuasiModularForm::zero(F.weight() + 2 * n);
                for (long j = 0; j <= n; ++j) {
                    Rat c = binom(n, j);
                    if ((n - j) % 2 != 0) c = -c;
                    s = s + c * d[static_cast<std::size_t>(j)] * dmod_one(n - j);
                }
                list.push_back(s);
            }
            break;
        }
    }
    return list;
}

// Depth-preserving higher Serre derivative: the operator index is shifted down
// by the depth bound p, which keeps the result at depth <= p.
inline QuasiModularForm vz_depth(const QuasiModularForm& F, long p, long n) {
    if (F.depth() > p) throw std::invalid_argument("declared depth bound below actual depth");
    if (2 * p > F.weight()) throw std::invalid_argument("depth bound exceeds weight/2");
    QuasiModularForm r = vz(Rat(F.weight() - p), n, F);
    if (r.depth() > p) throw std::logic_error("depth bound violated by higher Serre derivative");
    return r;
}

// Depth-controlled extended bracket with both indices shifted by the bounds.
inline QuasiModularForm mr_bracket(const QuasiModularForm& F, long p, const QuasiModularForm& G, long q, long n) {
    if (F.depth() > p || G.depth() > q) throw std::invalid_argument("declared depth bound below actual depth");
    QuasiModularForm r = ext_bracket(Rat(F.weight() - p), Rat(G.weight() - q), n, F, G);
    if (r.depth() > p + q) throw std::logic_error("depth bound violated by extended bracket");
    return r;
}

}  // namespace mldokit

#endif
