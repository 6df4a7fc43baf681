#ifndef MLDOKIT_MLDO_HPP
#define MLDOKIT_MLDO_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsd.hpp"
#include "qmring.hpp"

namespace mldokit {

// Differential operator sum_r a_r D^r of declared type (k, k+K) with
// quasimodular coefficients.  Modularity is a checkable predicate, not an
// invariant; weight homogeneity of the coefficients is enforced.
class Mldo {
  public:
    Mldo(Rat k, long gain, std::vector<QuasiModularForm> a) : k_(std::move(k)), gain_(gain) {
        if (gain_ < 0 || gain_ % 2 != 0) throw std::invalid_argument("operator weight must be even and non-negative");
        while (a.size() > 1 && a.back().is_zero()) a.pop_back();
        if (a.empty()) a.push_back(QuasiModularForm::zero(gain_));
        if (2 * (static_cast<long>(a.size()) - 1) > gain_ && !a.back().is_zero())
            throw std::invalid_argument("operator order exceeds half its weight");
        for (std::size_t r = 0; r < a.size(); ++r) {
            long w = gain_ - 2 * static_cast<long>(r);
            if (a[r].is_zero())
                a[r] = QuasiModularForm::zero(w);
            else if (a[r].weight() != w)
                throw std::invalid_argument("coefficient of D^" + std::to_string(r) + " has weight " +
                                            std::to_string(a[r].weight()) + ", expected " + std::to_string(w));
        }
        a_ = std::move(a);
    }

    static Mldo zero(const Rat& k, long gain) { return Mldo(k, gain, {}); }

    static Mldo identity(const Rat& k) { return Mldo(k, 0, {QuasiModularForm(Rat(1))}); }

    const Rat& k() const { return k_; }
    long gain() const { return gain_; }
    long order() const { return static_cast<long>(a_.size()) - 1; }
    const std::vector<QuasiModularForm>& coeffs() const { return a_; }

    const QuasiModularForm& coeff(long r) const {
        static const QuasiModularForm nil;
        if (r < 0 || r > order()) return nil;
        return a_[static_cast<std::size_t>(r)];
    }

    bool is_zero() const { return a_.size() == 1 && a_[0].is_zero(); }

    QuasiModularForm apply(const QuasiModularForm& F) const {
        QuasiModularForm r = QuasiModularForm::zero(F.weight() + gain_);
        QuasiModularForm d = F;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            r = r + a_[i] * d;
            d = derive(d);
        }
        return r;
    }

    FracPowerSeries apply(const FracPowerSeries& s) const {
        mpz_class ceil;
        mpz_cdiv_q(ceil.get_mpz_t(), s.order().get_num().get_mpz_t(), s.order().get_den().get_mpz_t());
        long n = ceil.fits_slong_p() ? ceil.get_si() : throw std::overflow_error("series order too large");
        FracPowerSeries r = FracPowerSeries::zero(s.order());
        FracPowerSeries d = s;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            if (!a_[i].is_zero()) r = r + to_series(a_[i], n) * d;
            d = d.derive();
        }
        return r;
    }

    Mldo operator-() const {
        std::vector<QuasiModularForm> a;
        for (const auto& f : a_) a.push_back(-f);
        return Mldo(k_, gain_, std::move(a));
    }

    friend Mldo operator+(const Mldo& x, const Mldo& y) {
        if (x.k_ != y.k_ || x.gain_ != y.gain_) throw std::invalid_argument("operator type mismatch in sum");
        std::vector<QuasiModularForm> a;
        long n = std::max(x.order(), y.order());
        for (long r = 0; r <= n; ++r) a.push_back(x.coeff(r) + y.coeff(r));
        return Mldo(x.k_, x.gain_, std::move(a));
    }

    friend Mldo operator-(const Mldo& x, const Mldo& y) { return x + (-y); }

    friend Mldo operator*(const Rat& s, const Mldo& x) {
        std::vector<QuasiModularForm> a;
        for (const auto& f : x.a_) a.push_back(s * f);
        return Mldo(x.k_, x.gain_, std::move(a));
    }

    // Left multiplication by a form; raises the operator weight.
    friend Mldo operator*(const QuasiModularForm& g, const Mldo& x) {
        std::vector<QuasiModularForm> a;
        for (const auto& f : x.a_) a.push_back(g * f);
        return Mldo(x.k_, x.gain_ + g.weight(), std::move(a));
    }

    friend bool operator==(const Mldo& x, const Mldo& y) {
        return x.k_ == y.k_ && x.gain_ == y.gain_ && x.a_ == y.a_;
    }
    friend bool operator!=(const Mldo& x, const Mldo& y) { return !(x == y); }

  private:
    Rat k_;
    long gain_;
    std::vector<QuasiModularForm> a_;
};

// L2 after L1; requires the output weight of L1 to match the input weight of L2.
inline Mldo compose(const Mldo& L2, const Mldo& L1) {
    if (L2.k() != L1.k() + L1.gain()) throw std::invalid_argument("operator types do not chain");
    Mldo r = Mldo::zero(L1.k(), L1.gain() + L2.gain());
    for (long s = 0; s <= L2.order(); ++s) {
        if (L2.coeff(s).is_zero()) continue;
        for (long t = 0; t <= L1.order(); ++t) {
            if (L1.coeff(t).is_zero()) continue;
            // D^s (a_t D^t) = sum_m C(s,m) D^m(a_t) D^{s-m+t}
            for (long m = 0; m <= s; ++m) {
                std::vector<QuasiModularForm> a(static_cast<std::size_t>(s - m + t) + 1);
                a.back() = L2.coeff(s) * binom(s, m) * derive(L1.coeff(t), m);
                r = r + Mldo(L1.k(), L1.gain() + L2.gain(), std::move(a));
            }
        }
    }
    return r;
}

// delta a_r = -(r+1)(k+r) a_{r+1} for all r, which propagates to all powers of
// delta; reports the first failing index.
inline bool is_modular(const Mldo& L, long* bad_index = nullptr) {
    for (long r = 0; r <= L.order(); ++r) {
        QuasiModularForm want = Rat(-(r + 1)) * (L.k() + r) * L.coeff(r + 1);
        if (delta(L.coeff(r)) != want) {
            if (bad_index) *bad_index = r;
            return false;
        }
    }
    return true;
}

inline void require_modular(const Mldo& L) {
    long bad = -1;
    if (!is_modular(L, &bad))
        throw std::domain_error("operator is not modular (criterion fails at coefficient " + std::to_string(bad) +
                                ")");
}

// Top D-coefficient, modular of weight K - 2n.
inline QuasiModularForm symbol(const Mldo& L) {
    require_modular(L);
    return L.coeff(L.order());
}

// The Serre derivative as an order-1 operator of type (kappa, kappa+2).
inline Mldo serre_mldo(const Rat& kappa) {
    return Mldo(kappa, 2, {Rat(-1, 12) * kappa * QuasiModularForm::E2(), QuasiModularForm(Rat(1))});
}

// Iterated Serre derivative as an operator of type (kappa, kappa+2n).
inline Mldo serre_iter_mldo(const Rat& kappa, long n) {
    Mldo r = Mldo::identity(kappa);
    for (long i = 0; i < n; ++i) r = compose(serre_mldo(kappa + 2 * i), r);
    return r;
}

// Canonical higher Serre derivative as an operator, via the defining recursion.
inline Mldo vz_mldo(const Rat& kappa, long n) {
    if (n < 0) throw std::invalid_argument("negative operator order");
    Mldo prev = Mldo::identity(kappa);
    if (n == 0) return prev;
    Mldo cur = serre_mldo(kappa);
    for (long m = 1; m < n; ++m) {
        Mldo next = compose(serre_mldo(kappa + 2 * m), cur) -
                    Rat(m) * (m + kappa - 1) / 144 * (QuasiModularForm::E4() * prev);
        prev = cur;
        cur = next;
    }
    return cur;
}

// f |-> [f, G]_n with f in the first slot of weight kappa.
inline Mldo rc_mldo_left(const Rat& kappa, const Rat& lambda, long n, const QuasiModularForm& G) {
    std::vector<QuasiModularForm> a;
    for (long i = 0; i <= n; ++i) {
        Rat c = binom(n + kappa - 1, n - i) * binom(n + lambda - 1, i);
        if (i % 2 != 0) c = -c;
        a.push_back(c * derive(G, n - i));
    }
    return Mldo(kappa, G.weight() + 2 * n, std::move(a));
}

// f |-> [H, f]_n with f in the second slot of weight lambda.
inline Mldo rc_mldo_right(const Rat& kappa, const Rat& lambda, long n, const QuasiModularForm& H) {
    std::vector<QuasiModularForm> a;
    for (long r = 0; r <= n; ++r) {
        Rat c = binom(n + kappa - 1, r) * binom(n + lambda - 1, n - r);
        if ((n - r) % 2 != 0) c = -c;
        a.push_back(c * derive(H, n - r));
    }
    return Mldo(lambda, H.weight() + 2 * n, std::move(a));
}

// The Kaneko-Koike operator as an Mldo of type (kappa, kappa+2n).
inline Mldo kk_mldo(const Rat& kappa, long n) {
    if (n == 0) return Mldo::identity(kappa);
    Mldo dn = Mldo(kappa, 2 * n, [&] {
        std::vector<QuasiModularForm> a(static_cast<std::size_t>(n) + 1);
        a.back() = QuasiModularForm(Rat(1));
        return a;
    }());
    return dn - (kappa + n - 1) / 12 * rc_mldo_right(2, kappa, n - 1, QuasiModularForm::E2());
}

// f |-> <G, f>_n, extended bracket with G in the first slot.
inline Mldo ext_rc_mldo_right(const Rat& lambda, long n, const QuasiModularForm& G) {
    Rat kappa(G.weight());
    std::vector<QuasiModularForm> a;
    for (long j = 0; j <= n; ++j) {
        Rat den = pochhammer(lambda, j);
        if (den == 0) throw std::domain_error("extended bracket operator undefined: vanishing shifted factorial");
        Rat c = binom(n, j) / den;
        if ((n - j) % 2 != 0) c = -c;
        a.push_back(c * dmod(kappa, n - j, G));
    }
    return Mldo(lambda, G.weight() + 2 * n, std::move(a));
}

enum class BasisTag { D, Serre, KK, VZ };

inline Mldo from_basis(BasisTag tag, const Rat& k, long gain, const std::vector<QuasiModularForm>& coeffs) {
    Mldo r = Mldo::zero(k, gain);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const QuasiModularForm& g = coeffs[i];
        if (g.is_zero()) continue;
        long n = static_cast<long>(i);
        if (g.weight() != gain - 2 * n)
            throw std::invalid_argument("basis coefficient " + std::to_string(n) + " has the wrong weight");
        Mldo op = Mldo::identity(k);
        switch (tag) {
            case BasisTag::D: {
                std::vector<QuasiModularForm> a(static_cast<std::size_t>(n) + 1);
                a.back() = QuasiModularForm(Rat(1));
                op = Mldo(k, 2 * n, std::move(a));
                break;
            }
            case BasisTag::Serre: op = serre_iter_mldo(k, n); break;
            case BasisTag::KK: op = kk_mldo(k, n); break;
            case BasisTag::VZ: op = vz_mldo(k, n); break;
        }
        r = r + g * op;
    }
    return r;
}

inline std::vector<QuasiModularForm> to_basis(const Mldo& L, BasisTag tag) {
    if (tag == BasisTag::D) return L.coeffs();
    if (tag != BasisTag::VZ) require_modular(L);
    long n = L.order();
    std::vector<QuasiModularForm> out(static_cast<std::size_t>(n) + 1);
    if (tag == BasisTag::VZ) {
        // Closed-form extraction d_r = sum_j C(r+j,j) (k+r+j)_j (E2/12)^j a_{r+j}.
        QuasiModularForm e2_12 = Rat(1, 12) * QuasiModularForm::E2();
        for (long r = 0; r <= n; ++r) {
            QuasiModularForm d = QuasiModularForm::zero(L.gain() - 2 * r);
            QuasiModularForm p(Rat(1));
            for (long j = 0; r + j <= n; ++j) {
                d = d + binom(r + j, j) * pochhammer(L.k() + r, j) * p * L.coeff(r + j);
                p = p * e2_12;
            }
            if (d.depth() > 0) throw std::domain_error("operator is not modular: basis coefficient has depth > 0");
            out[static_cast<std::size_t>(r)] = d;
        }
        return out;
    }
    // Monic top-down elimination for the Serre and Kaneko-Koike families.
    Mldo rem = L;
    for (long r = n; r >= 0; --r) {
        QuasiModularForm b = rem.coeff(r);
        if (b.depth() > 0) throw std::domain_error("basis extraction failed: coefficient has depth > 0");
        out[static_cast<std::size_t>(r)] = b;
        if (!b.is_zero()) {
            Mldo op = tag == BasisTag::Serre ? serre_iter_mldo(L.k(), r) : kk_mldo(L.k(), r);
            rem = rem - b * op;
        }
    }
    if (!rem.is_zero()) throw std::logic_error("basis elimination left a nonzero remainder");
    return out;
}

// Modular data vector h_0..h_n attached to a modular operator; in the monic
// case (gain = 2n) slot n-1 is forced and skipped, with its E2-multiple checked.
inline std::vector<QuasiModularForm> h_vector(const Mldo& L) {
    require_modular(L);
    long n = L.order();
    long K = L.gain();
    bool monic = (K == 2 * n);
    if (monic) {
        QuasiModularForm forced = Rat(-n) * (L.k() + n - 1) / 12 * L.coeff(n).constant_value() * QuasiModularForm::E2();
        if (L.coeff(n - 1) != forced)
            throw std::logic_error("monic operator lacks the forced E2 multiple in its subleading coefficient");
    }
    std::vector<QuasiModularForm> h(static_cast<std::size_t>(n) + 1);
    for (long m = 0; m <= n; ++m) {
        if (monic && m == n - 1) {
            h[static_cast<std::size_t>(m)] = QuasiModularForm::zero(2);
            continue;
        }
        QuasiModularForm hm = QuasiModularForm::zero(K - 2 * m);
        for (long s = 0; m + s <= n; ++s) {
            Rat den = pochhammer(Rat(K - 2 * m - s - 1), s);
            if (den == 0) {
                if (L.coeff(m + s).is_zero()) continue;
                throw std::domain_error("h-vector undefined: vanishing shifted factorial at slot " +
                                        std::to_string(m));
            }
            hm = hm + binom(m + s, s) * pochhammer(L.k() + m, s) / den * derive(L.coeff(m + s), s);
        }
        if (hm.depth() > 0) throw std::logic_error("h-vector entry has depth > 0");
        h[static_cast<std::size_t>(m)] = hm;
    }
    return h;
}

// Inversion of h_vector in the non-monic case:
//   a_r = sum_j (-1)^j C(r+j,j) (k+r)_j / (K-2r-2j)_j D^j(h_{r+j}).
inline std::vector<QuasiModularForm> a_from_h(const Rat& k, long K, const std::vector<QuasiModularForm>& h) {
    long n = static_cast<long>(h.size()) - 1;
    std::vector<QuasiModularForm> a(static_cast<std::size_t>(n) + 1);
    for (long r = 0; r <= n; ++r) {
        QuasiModularForm ar = QuasiModularForm::zero(K - 2 * r);
        for (long j = 0; r + j <= n; ++j) {
            const QuasiModularForm& hj = h[static_cast<std::size_t>(r + j)];
            Rat den = pochhammer(Rat(K - 2 * r - 2 * j), j);
            if (den == 0) {
                if (hj.is_zero()) continue;
                throw std::domain_error("h-vector inversion undefined: vanishing shifted factorial");
            }
            Rat c = binom(r + j, j) * pochhammer(k + r, j) / den;
            if (j % 2 != 0) c = -c;
            ar = ar + c * derive(hj, j);
        }
        a[static_cast<std::size_t>(r)] = ar;
    }
    return a;
}

// Operator L(f) = sum_m C(K-m-1, m)^{-1} [h_m, f]_m + kk_coeff K^{K/2}(f).
inline Mldo from_rc_data(const Rat& k, long K, const std::vector<QuasiModularForm>& h,
                         std::optional<Rat> kk_coeff = std::nullopt) {
    Mldo r = Mldo::zero(k, K);
    for (std::size_t m = 0; m < h.size(); ++m) {
        if (h[m].is_zero()) continue;
        long mm = static_cast<long>(m);
        if (h[m].weight() != K - 2 * mm)
            throw std::invalid_argument("h-vector entry " + std::to_string(mm) + " has the wrong weight");
        Rat c = binom(Rat(K - mm - 1), mm);
        if (c == 0) throw std::domain_error("vanishing binomial normalizer in bracket expansion");
        r = r + Rat(1) / c * rc_mldo_right(Rat(K - 2 * mm), k, mm, h[m]);
    }
    if (kk_coeff) {
        if (K % 2 != 0) throw std::invalid_argument("Kaneko-Koike term needs even operator weight");
        r = r + *kk_coeff * kk_mldo(k, K / 2);
    }
    return r;
}

// First correspondence between quasimodular forms of weight K and MLDOs of
// type (k, k+K): L = sum_r (-1)^r / (r! (k)_r) delta^r(F) D^r.  The
// renormalized variant divides by (k-1)!, with reciprocal factorials of
// negative integers read as 0, and so survives integer k <= 0.
inline Mldo l_from_qmf(const QuasiModularForm& F, const Rat& k, bool renormalized = false) {
    long K = F.weight();
    long p = F.is_zero() ? 0 : F.depth();
    std::vector<QuasiModularForm> a;
    QuasiModularForm dF = F;
    for (long r = 0; r <= p; ++r) {
        Rat c;
        if (renormalized) {
            // 1/((k+r-1)!) for integer argument, 0 below zero.
            if (!is_integer(k)) throw std::invalid_argument("renormalized variant needs integer k");
            long m = to_long(k) + r - 1;
            c = m < 0 ? Rat(0) : Rat(1) / factorial(m);
        } else {
            Rat den = pochhammer(k, r);
            if (den == 0) throw std::domain_error("correspondence undefined: vanishing shifted factorial");
            c = Rat(1) / den;
        }
        c /= factorial(r);
        if (r % 2 != 0) c = -c;
        a.push_back(c * dF);
        dF = delta(dF);
    }
    return Mldo(k, K, std::move(a));
}

inline QuasiModularForm qmf_from_l(const Mldo& L) { return L.coeff(0); }

// Pairing {f, F} = sum_r (-1)^r / r! delta^r(F) Dmod^r(f) for modular or
// constant f.
inline QuasiModularForm pair_braces(const QuasiModularForm& f, const QuasiModularForm& F) {
    if (f.depth() > 0) throw std::invalid_argument("first pairing slot must be modular or constant");
    long p = F.is_zero() ? 0 : F.depth();
    QuasiModularForm r = QuasiModularForm::zero(f.weight() + F.weight());
    QuasiModularForm dF = F;
    for (long m = 0; m <= p; ++m) {
        Rat c = Rat(1) / factorial(m);
        if (m % 2 != 0) c = -c;
        r = r + c * dF * dmod(Rat(f.weight()), m, f);
        dF = delta(dF);
    }
    return r;
}

// Second correspondence: Lambda_{F,k} = sum_m (-1)^m/(m! (k+K-m-1)_m) D^m (delta^m F . ),
// expanded by Leibniz into D-coefficients.
inline Mldo lambda_from_qmf(const QuasiModularForm& F, const Rat& k) {
    long K = F.weight();
    long p = F.is_zero() ? 0 : F.depth();
    std::vector<QuasiModularForm> a(static_cast<std::size_t>(p) + 1);
    for (long r = 0; r <= p; ++r) a[static_cast<std::size_t>(r)] = QuasiModularForm::zero(K - 2 * r);
    QuasiModularForm dF = F;
    for (long m = 0; m <= p; ++m) {
        Rat den = factorial(m) * pochhammer(k + K - m - 1, m);
        if (den == 0) throw std::domain_error("correspondence undefined: vanishing shifted factorial");
        Rat c = Rat(1) / den;
        if (m % 2 != 0) c = -c;
        for (long r = 0; r <= m; ++r)
            a[static_cast<std::size_t>(r)] = a[static_cast<std::size_t>(r)] + c * binom(m, r) * derive(dF, m - r);
        dF = delta(dF);
    }
    return Mldo(k, K, std::move(a));
}

// Unique expansion of a modular operator in extended brackets:
// L(f) = sum_r <g_r, f>_r.
inline std::vector<std::pair<long, QuasiModularForm>> decompose_ext_rc(const Mldo& L) {
    require_modular(L);
    QuasiModularForm F = qmf_from_l(L);
    std::vector<QuasiModularForm> h = derivative_decompose(F);
    std::vector<std::pair<long, QuasiModularForm>> out;
    for (std::size_t r = 0; r < h.size(); ++r) {
        QuasiModularForm g = (r % 2 == 0) ? h[r] : -h[r];
        out.emplace_back(static_cast<long>(r), g);
    }
    return out;
}

inline Mldo from_ext_rc(const Rat& k, long K, const std::vector<std::pair<long, QuasiModularForm>>& data) {
    Mldo r = Mldo::zero(k, K);
    for (const auto& [n, g] : data) {
        if (g.is_zero()) continue;
        r = r + ext_rc_mldo_right(k, n, g);
    }
    return r;
}

inline long dim_mldo(const Rat& /*k*/, long K, long n) {
    if (K < 0 || K % 2 != 0) throw std::invalid_argument("operator weight must be even and non-negative");
    n = std::min(n, K / 2);
    long d = 0;
    for (long r = 0; r <= n; ++r) d += dim_M(K - 2 * r);
    return d;
}

// Operator with q-series coefficients, as produced by the determinant
// construction; the variant records which derivative chain the coefficients
// multiply.
struct SeriesOperator {
    std::vector<FracPowerSeries> coeffs;  // index r
    bool serre_variant = false;
    Rat k = 0;  // weight chain start for the Serre variant

    FracPowerSeries apply(const FracPowerSeries& s) const {
        if (coeffs.empty()) throw std::domain_error("empty operator");
        long n = 0;
        {
            mpz_class c;
            mpz_cdiv_q(c.get_mpz_t(), s.order().get_num().get_mpz_t(), s.order().get_den().get_mpz_t());
            n = c.get_si();
        }
        FracPowerSeries e2 = eisenstein(2, n);
        FracPowerSeries acc = FracPowerSeries::zero(s.order());
        FracPowerSeries d = s;
        for (std::size_t r = 0; r < coeffs.size(); ++r) {
            acc = acc + coeffs[r] * d;
            if (serre_variant)
                d = d.derive() - (k + 2 * static_cast<long>(r)) / 12 * (e2 * d);
            else
                d = d.derive();
        }
        return acc;
    }
};

namespace detail {

inline FracPowerSeries series_det(const std::vector<std::vector<FracPowerSeries>>& m) {
    std::size_t n = m.size();
    if (n == 1) return m[0][0];
    FracPowerSeries acc = FracPowerSeries::zero(0);
    bool first = true;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<FracPowerSeries>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<FracPowerSeries> row;
            for (std::size_t jj = 0; jj < n; ++jj)
                if (jj != j) row.push_back(m[i][jj]);
            minor.push_back(std::move(row));
        }
        FracPowerSeries term = m[0][j] * series_det(minor);
        if (j % 2 != 0) term = -term;
        acc = first ? term : acc + term;
        first = false;
    }
    return acc;
}

}  // namespace detail

// Annihilator of the span of the given series, expanded along its first row:
// the coefficient of the r-th derivative is (-1)^{n+r} times the corresponding
// minor of the derivative matrix.
inline SeriesOperator det_operator(const std::vector<FracPowerSeries>& basis, bool serre_variant = false,
                                   const Rat& k = 0, bool normalize = false) {
    std::size_t n = basis.size();
    if (n == 0) throw std::invalid_argument("empty basis");
    Rat min_order = basis[0].order();
    for (const auto& b : basis) min_order = std::min(min_order, b.order());
    long nint = 0;
    {
        mpz_class c;
        mpz_fdiv_q(c.get_mpz_t(), min_order.get_num().get_mpz_t(), min_order.get_den().get_mpz_t());
        nint = c.get_si();
    }
    FracPowerSeries e2 = eisenstein(2, nint);
    // rows: basis elements; columns: derivative chain applications 0..n
    std::vector<std::vector<FracPowerSeries>> mat;
    for (const auto& b : basis) {
        std::vector<FracPowerSeries> row;
        FracPowerSeries d = b;
        for (std::size_t r = 0; r <= n; ++r) {
            row.push_back(d);
            if (serre_variant)
                d = d.derive() - (k + 2 * static_cast<long>(r)) / 12 * (e2 * d);
            else
                d = d.derive();
        }
        mat.push_back(std::move(row));
    }
    SeriesOperator op;
    op.serre_variant = serre_variant;
    op.k = k;
    for (std::size_t r = 0; r <= n; ++r) {
        std::vector<std::vector<FracPowerSeries>> minor;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<FracPowerSeries> row;
            for (std::size_t j = 0; j <= n; ++j)
                if (j != r) row.push_back(mat[i][j]);
            minor.push_back(std::move(row));
        }
        FracPowerSeries c = detail::series_det(minor);
        if ((n + r) % 2 != 0) c = -c;
        op.coeffs.push_back(std::move(c));
    }
    if (normalize) {
        FracPowerSeries lead = op.coeffs.back();
        if (lead.is_zero()) throw std::domain_error("degenerate basis: leading minor vanishes");
        for (auto& c : op.coeffs) c = c / lead;
    }
    return op;
}

}  // namespace mldokit

#endif
