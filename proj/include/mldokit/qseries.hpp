#ifndef MLDOKIT_QSERIES_HPP
#define MLDOKIT_QSERIES_HPP

#include <algorithm>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace mldokit {

// Largest step denominator tolerated when aligning two series on a common grid.
inline constexpr long kMaxStepDen = 120;

// Truncated power series in q with exponents alpha + j/M, j >= 0, exact rational
// coefficients.  `order` is the first exponent at which the coefficient is unknown;
// coefficients at exponents below `order` not stored are zero.
class FracPowerSeries {
  public:
    FracPowerSeries() : alpha_(0), step_den_(1), order_(0) {}

    FracPowerSeries(Rat alpha, long step_den, std::vector<Rat> coeffs, Rat order)
        : alpha_(std::move(alpha)), step_den_(step_den), coeffs_(std::move(coeffs)), order_(std::move(order)) {
        if (step_den_ <= 0) throw std::invalid_argument("step denominator must be positive");
        normalize();
    }

    static FracPowerSeries zero(Rat order) { return FracPowerSeries(0, 1, {}, std::move(order)); }

    static FracPowerSeries constant(const Rat& c, Rat order) {
        return FracPowerSeries(0, 1, {c}, std::move(order));
    }

    // c * q^e, known through the given order.
    static FracPowerSeries monomial(const Rat& c, const Rat& e, Rat order) {
        if (!e.get_den().fits_slong_p()) throw std::overflow_error("exponent denominator too large");
        return FracPowerSeries(e, e.get_den().get_si(), {c}, std::move(order));
    }

    const Rat& base_exponent() const { return alpha_; }
    long step_den() const { return step_den_; }
    Rat step() const { return rat(1, step_den_); }
    const Rat& order() const { return order_; }
    const std::vector<Rat>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    Rat exponent(std::size_t j) const { return alpha_ + Rat(static_cast<long>(j), step_den_); }

    // Coefficient at exponent e; exponents at or beyond `order` are an error.
    Rat coeff_at(const Rat& e) const {
        if (e >= order_) throw std::out_of_range("coefficient beyond known order");
        if (coeffs_.empty()) return 0;
        Rat off = (e - alpha_) * step_den_;
        if (off < 0 || !is_integer(off)) return 0;
        long j = to_long(off);
        if (j >= static_cast<long>(coeffs_.size())) return 0;
        return coeffs_[static_cast<std::size_t>(j)];
    }

    // First exponent with a nonzero coefficient.
    Rat valuation() const {
        if (coeffs_.empty()) throw std::domain_error("valuation of zero series");
        return alpha_;
    }

    Rat leading_coeff() const {
        if (coeffs_.empty()) throw std::domain_error("leading coefficient of zero series");
        return coeffs_.front();
    }

    FracPowerSeries truncated(const Rat& new_order) const {
        FracPowerSeries r = *this;
        if (new_order < r.order_) {
            r.order_ = new_order;
            r.drop_beyond_order();
            r.normalize();
        }
        return r;
    }

    FracPowerSeries operator-() const {
        FracPowerSeries r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    friend FracPowerSeries operator+(const FracPowerSeries& a, const FracPowerSeries& b) {
        Rat order = std::min(a.order_, b.order_);
        if (a.is_zero() && b.is_zero()) return zero(order);
        if (a.is_zero()) return b.truncated(order);
        if (b.is_zero()) return a.truncated(order);
        Rat base = std::min(a.alpha_, b.alpha_);
        long m = std::lcm(a.step_den_, b.step_den_);
        Rat diff = a.alpha_ - b.alpha_;
        if (!diff.get_den().fits_slong_p()) throw std::overflow_error("exponent grid too fine");
        m = std::lcm(m, diff.get_den().get_si());
        if (m > kMaxStepDen) throw std::domain_error("common exponent grid exceeds step bound");
        Rat span = (order - base) * m;
        long n = span > 0 ? to_long_ceil(span) : 0;
        std::vector<Rat> c(static_cast<std::size_t>(n), Rat(0));
        accumulate(c, base, m, a);
        accumulate(c, base, m, b);
        return FracPowerSeries(base, m, std::move(c), order);
    }

    friend FracPowerSeries operator-(const FracPowerSeries& a, const FracPowerSeries& b) { return a + (-b); }

    friend FracPowerSeries operator*(const FracPowerSeries& a, const FracPowerSeries& b) {
        if (a.is_zero() || b.is_zero()) {
            // Product known wherever either factor is known to vanish completely.
            Rat order = a.is_zero() ? (b.is_zero() ? std::max(a.order_, b.order_) : a.order_ + b.valuation_or_alpha())
                                    : b.order_ + a.valuation_or_alpha();
            return zero(order);
        }
        Rat order = std::min(a.order_ + b.alpha_, b.order_ + a.alpha_);
        long m = std::lcm(a.step_den_, b.step_den_);
        if (m > kMaxStepDen) throw std::domain_error("common exponent grid exceeds step bound");
        Rat base = a.alpha_ + b.alpha_;
        Rat span = (order - base) * m;
        long n = span > 0 ? to_long_ceil(span) : 0;
        std::vector<Rat> c(static_cast<std::size_t>(n), Rat(0));
        long sa = m / a.step_den_;
        long sb = m / b.step_den_;
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            long ji = static_cast<long>(i) * sa;
            if (ji >= n) break;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                long idx = ji + static_cast<long>(j) * sb;
                if (idx >= n) break;
                c[static_cast<std::size_t>(idx)] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return FracPowerSeries(base, m, std::move(c), order);
    }

    friend FracPowerSeries operator*(const Rat& s, const FracPowerSeries& a) {
        if (s == 0) return zero(a.order_);
        FracPowerSeries r = a;
        for (auto& c : r.coeffs_) c *= s;
        return r;
    }

    friend FracPowerSeries operator*(const FracPowerSeries& a, const Rat& s) { return s * a; }

    FracPowerSeries pow(long e) const {
        if (e < 0) throw std::invalid_argument("negative power of series");
        FracPowerSeries r = constant(1, order_ + e * valuation_or_alpha());
        FracPowerSeries b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            b = e > 1 ? b * b : b;
            e >>= 1;
        }
        return r;
    }

    // q d/dq.
    FracPowerSeries derive() const {
        FracPowerSeries r = *this;
        for (std::size_t j = 0; j < r.coeffs_.size(); ++j) r.coeffs_[j] *= r.exponent(j);
        r.normalize();
        return r;
    }

    // Multiplicative inverse of a series with unit leading term; result known to
    // order `order() - 2*valuation()` shifted appropriately.
    FracPowerSeries inverse() const {
        if (coeffs_.empty()) throw std::domain_error("inverse of zero series");
        const Rat& c0 = coeffs_.front();
        long n = static_cast<long>(coeffs_len_to_order());
        std::vector<Rat> inv(static_cast<std::size_t>(n), Rat(0));
        if (n > 0) inv[0] = 1 / c0;
        for (long mth = 1; mth < n; ++mth) {
            Rat s = 0;
            for (long u = 1; u <= mth; ++u) {
                Rat fu = u < static_cast<long>(coeffs_.size()) ? coeffs_[static_cast<std::size_t>(u)] : Rat(0);
                if (fu != 0) s += fu * inv[static_cast<std::size_t>(mth - u)];
            }
            inv[static_cast<std::size_t>(mth)] = -s / c0;
        }
        return FracPowerSeries(-alpha_, step_den_, std::move(inv), order_ - 2 * alpha_);
    }

    friend FracPowerSeries operator/(const FracPowerSeries& a, const FracPowerSeries& b) {
        return a * b.inverse();
    }

    // Equality of known coefficients up to the smaller order.
    friend bool operator==(const FracPowerSeries& a, const FracPowerSeries& b) {
        Rat upto = std::min(a.order_, b.order_);
        return a.truncated(upto).same_content(b.truncated(upto));
    }
    friend bool operator!=(const FracPowerSeries& a, const FracPowerSeries& b) { return !(a == b); }

    std::complex<double> eval(std::complex<double> tau) const;

  private:
    Rat alpha_;
    long step_den_;
    std::vector<Rat> coeffs_;
    Rat order_;

    Rat valuation_or_alpha() const { return coeffs_.empty() ? Rat(0) : alpha_; }

    static long to_long_ceil(const Rat& x) {
        mpz_class q;
        mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
        if (!q.fits_slong_p()) throw std::overflow_error("series length overflow");
        return q.get_si();
    }

    std::size_t coeffs_len_to_order() const {
        Rat span = (order_ - alpha_) * step_den_;
        long n = span > 0 ? to_long_ceil(span) : 0;
        return static_cast<std::size_t>(std::max(n, 0L));
    }

    static void accumulate(std::vector<Rat>& c, const Rat& base, long m, const FracPowerSeries& a) {
        long stride = m / a.step_den_;
        Rat off = (a.alpha_ - base) * m;
        long j0 = to_long(off);
        for (std::size_t j = 0; j < a.coeffs_.size(); ++j) {
            long idx = j0 + static_cast<long>(j) * stride;
            if (idx >= static_cast<long>(c.size())) break;
            c[static_cast<std::size_t>(idx)] += a.coeffs_[j];
        }
    }

    void drop_beyond_order() {
        std::size_t n = coeffs_len_to_order();
        if (coeffs_.size() > n) coeffs_.resize(n);
    }

    bool same_content(const FracPowerSeries& b) const {
        return alpha_ == b.alpha_ && step_den_ == b.step_den_ && coeffs_ == b.coeffs_;
    }

    void normalize() {
        drop_beyond_order();
        std::size_t lead = 0;
        while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
        if (lead == coeffs_.size()) {
            alpha_ = 0;
            step_den_ = 1;
            coeffs_.clear();
            return;
        }
        if (lead > 0) {
            alpha_ += Rat(static_cast<long>(lead), step_den_);
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
        }
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
        // Coarsen the grid when every nonzero index shares a common factor with M.
        long g = 0;
        for (std::size_t j = 1; j < coeffs_.size(); ++j)
            if (coeffs_[j] != 0) g = std::gcd(g, static_cast<long>(j));
        g = std::gcd(g == 0 ? step_den_ : g, step_den_);
        if (g > 1) {
            std::vector<Rat> c;
            for (std::size_t j = 0; j < coeffs_.size(); j += static_cast<std::size_t>(g))
                c.push_back(coeffs_[j]);
            while (!c.empty() && c.back() == 0) c.pop_back();
            coeffs_ = std::move(c);
            step_den_ /= g;
        }
    }
};

inline std::complex<double> FracPowerSeries::eval(std::complex<double> tau) const {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    if (std::exp(-kTwoPi * tau.imag()) > 0.01)
        throw std::domain_error("|q| too large for reliable truncated evaluation");
    std::complex<double> iarg(0.0, kTwoPi);
    std::complex<double> logq = iarg * tau;
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (coeffs_[j] == 0) continue;
        double e = exponent(j).get_d();
        s += coeffs_[j].get_d() * std::exp(e * logq);
    }
    return s;
}

// log f for f with integer exponents, f(0) = 1.
inline FracPowerSeries series_log(const FracPowerSeries& f) {
    if (f.step_den() != 1 || f.base_exponent() != 0 || f.is_zero() || f.leading_coeff() != 1)
        throw std::invalid_argument("series_log requires constant term 1 on the integer grid");
    long n = to_long(f.order());
    std::vector<Rat> g(static_cast<std::size_t>(n), Rat(0));
    auto fc = [&](long u) { return u < static_cast<long>(f.coeffs().size()) ? f.coeffs()[static_cast<std::size_t>(u)] : Rat(0); };
    for (long m = 1; m < n; ++m) {
        Rat s = 0;
        for (long u = 1; u < m; ++u) s += fc(u) * (m - u) * g[static_cast<std::size_t>(m - u)];
        g[static_cast<std::size_t>(m)] = fc(m) - s / m;
    }
    return FracPowerSeries(0, 1, std::move(g), f.order());
}

// exp g for g with integer exponents, g(0) = 0.
inline FracPowerSeries series_exp(const FracPowerSeries& g) {
    if (g.step_den() != 1 || (!g.is_zero() && g.base_exponent() <= 0))
        throw std::invalid_argument("series_exp requires vanishing constant term on the integer grid");
    long n = to_long(g.order());
    std::vector<Rat> h(static_cast<std::size_t>(n), Rat(0));
    auto gc = [&](long u) { return g.coeff_at(Rat(u)); };
    if (n > 0) h[0] = 1;
    for (long m = 1; m < n; ++m) {
        Rat s = 0;
        for (long u = 1; u <= m; ++u) s += u * gc(u) * h[static_cast<std::size_t>(m - u)];
        h[static_cast<std::size_t>(m)] = s / m;
    }
    return FracPowerSeries(0, 1, std::move(h), g.order());
}

// Normalized Eisenstein series E_k for k in {2,4,6,8,10}, truncated at q^n.
inline FracPowerSeries eisenstein(long k, long n) {
    if (k == 8) {
        auto e4 = eisenstein(4, n);
        return e4 * e4;
    }
    if (k == 10) return eisenstein(4, n) * eisenstein(6, n);
    long c;
    switch (k) {
        case 2: c = -24; break;
        case 4: c = 240; break;
        case 6: c = -504; break;
        default: throw std::invalid_argument("eisenstein weight must be 2, 4, 6, 8 or 10");
    }
    std::vector<Rat> coeffs(static_cast<std::size_t>(std::max(n, 0L)), Rat(0));
    if (n > 0) coeffs[0] = 1;
    for (long m = 1; m < n; ++m) {
        mpz_class sigma = 0;
        for (long d = 1; d <= m; ++d) {
            if (m % d != 0) continue;
            mpz_class p;
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k - 1));
            sigma += p;
        }
        coeffs[static_cast<std::size_t>(m)] = Rat(sigma) * c;
    }
    return FracPowerSeries(0, 1, std::move(coeffs), Rat(n));
}

// Euler product prod_{m>=1} (1-q^m), truncated at q^n.
inline FracPowerSeries euler_product(long n) {
    // Pentagonal number expansion keeps this linear in n.
    std::vector<Rat> c(static_cast<std::size_t>(std::max(n, 0L)), Rat(0));
    for (long j = 0;; ++j) {
        long e1 = j * (3 * j - 1) / 2;
        long e2 = j * (3 * j + 1) / 2;
        if (e1 >= n && e2 >= n) break;
        Rat sign = (j % 2 == 0) ? 1 : -1;
        if (e1 < n) c[static_cast<std::size_t>(e1)] += sign;
        if (j > 0 && e2 < n) c[static_cast<std::size_t>(e2)] += sign;
        if (j > 2 * n) break;
    }
    return FracPowerSeries(0, 1, std::move(c), Rat(n));
}

// q prod (1-q^m)^24, known through exponent n.
inline FracPowerSeries delta_series(long n) {
    return euler_product(n).pow(24) * FracPowerSeries::monomial(1, 1, Rat(n));
}

// eta^r = q^{r/24} prod (1-q^m)^r for rational r, known through exponent r/24 + n.
inline FracPowerSeries eta_power(const Rat& r, long n) {
    FracPowerSeries body = series_exp(r * series_log(euler_product(n)));
    return body * FracPowerSeries::monomial(1, r / 24, r / 24 + n);
}

// Jacobi null theta series theta_j, j in {2,3,4}, known through exponent n.
inline FracPowerSeries theta_series(int j, long n) {
    switch (j) {
        case 2: {
            FracPowerSeries s = FracPowerSeries::zero(Rat(n));
            for (long m = 0;; ++m) {
                Rat e = Rat((2 * m + 1) * (2 * m + 1), 8);
                if (e >= n) break;
                s = s + FracPowerSeries::monomial(2, e, Rat(n));
            }
            return s;
        }
        case 3:
        case 4: {
            FracPowerSeries s = FracPowerSeries::constant(1, Rat(n));
            for (long m = 1;; ++m) {
                Rat e = Rat(m * m, 2);
                if (e >= n) break;
                Rat c = (j == 3 || m % 2 == 0) ? 2 : -2;
                s = s + FracPowerSeries::monomial(c, e, Rat(n));
            }
            return s;
        }
        default: throw std::invalid_argument("theta index must be 2, 3 or 4");
    }
}

}  // namespace mldokit

#endif
