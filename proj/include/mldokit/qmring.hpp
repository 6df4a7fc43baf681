#ifndef MLDOKIT_QMRING_HPP
#define MLDOKIT_QMRING_HPP

#include <array>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qseries.hpp"
#include "rational.hpp"

namespace mldokit {

// Element of Q[E2, E4, E6], homogeneous of a single even weight.  The zero form
// carries a declared weight so graded arithmetic stays well typed.
class QuasiModularForm {
  public:
    using Key = std::array<long, 3>;  // exponents of E2, E4, E6
    using Map = std::map<Key, Rat>;

    QuasiModularForm() : weight_(0) {}

    explicit QuasiModularForm(const Rat& c) : weight_(0) {
        if (c != 0) monomials_[{0, 0, 0}] = c;
    }

    static QuasiModularForm zero(long weight) {
        QuasiModularForm f;
        f.weight_ = weight;
        return f;
    }

    static QuasiModularForm monomial(long a, long b, long c, const Rat& coeff) {
        if (a < 0 || b < 0 || c < 0) throw std::invalid_argument("negative exponent");
        QuasiModularForm f;
        f.weight_ = 2 * a + 4 * b + 6 * c;
        if (coeff != 0) f.monomials_[{a, b, c}] = coeff;
        return f;
    }

    static QuasiModularForm E2() { return monomial(1, 0, 0, 1); }
    static QuasiModularForm E4() { return monomial(0, 1, 0, 1); }
    static QuasiModularForm E6() { return monomial(0, 0, 1, 1); }

    long weight() const { return weight_; }
    bool is_zero() const { return monomials_.empty(); }
    const Map& monomials() const { return monomials_; }

    // Degree in E2.
    long depth() const {
        long d = 0;
        for (const auto& [key, c] : monomials_) d = std::max(d, key[0]);
        return d;
    }

    bool is_constant() const {
        return monomials_.empty() || (monomials_.size() == 1 && monomials_.begin()->first == Key{0, 0, 0});
    }

    Rat constant_value() const {
        if (!is_constant()) throw std::domain_error("form is not constant");
        return monomials_.empty() ? Rat(0) : monomials_.begin()->second;
    }

    Rat coeff(long a, long b, long c) const {
        auto it = monomials_.find({a, b, c});
        return it == monomials_.end() ? Rat(0) : it->second;
    }

    QuasiModularForm operator-() const {
        QuasiModularForm f = *this;
        for (auto& [key, c] : f.monomials_) c = -c;
        return f;
    }

    friend QuasiModularForm operator+(const QuasiModularForm& x, const QuasiModularForm& y) {
        if (x.is_zero()) return y.is_zero() ? zero(x.weight_) : y;
        if (y.is_zero()) return x;
        if (x.weight_ != y.weight_)
            throw std::invalid_argument("weight mismatch in sum: " + std::to_string(x.weight_) + " vs " +
                                        std::to_string(y.weight_));
        QuasiModularForm f = x;
        for (const auto& [key, c] : y.monomials_) {
            Rat s = f.coeff(key[0], key[1], key[2]) + c;
            if (s == 0)
                f.monomials_.erase(key);
            else
                f.monomials_[key] = s;
        }
        return f;
    }

    friend QuasiModularForm operator-(const QuasiModularForm& x, const QuasiModularForm& y) { return x + (-y); }

    friend QuasiModularForm operator*(const QuasiModularForm& x, const QuasiModularForm& y) {
        QuasiModularForm f = zero(x.weight_ + y.weight_);
        for (const auto& [ka, ca] : x.monomials_)
            for (const auto& [kb, cb] : y.monomials_) {
                Key k = {ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]};
                Rat s = f.coeff(k[0], k[1], k[2]) + ca * cb;
                if (s == 0)
                    f.monomials_.erase(k);
                else
                    f.monomials_[k] = s;
            }
        return f;
    }

    friend QuasiModularForm operator*(const Rat& s, const QuasiModularForm& x) {
        QuasiModularForm f = zero(x.weight_);
        if (s == 0) return f;
        for (const auto& [key, c] : x.monomials_) f.monomials_[key] = s * c;
        return f;
    }

    friend QuasiModularForm operator*(const QuasiModularForm& x, const Rat& s) { return s * x; }

    friend bool operator==(const QuasiModularForm& x, const QuasiModularForm& y) {
        if (x.monomials_ != y.monomials_) return false;
        return x.is_zero() || x.weight_ == y.weight_;
    }
    friend bool operator!=(const QuasiModularForm& x, const QuasiModularForm& y) { return !(x == y); }

  private:
    long weight_;
    Map monomials_;
};

// D = q d/dq via the Ramanujan closed system, extended by Leibniz.
inline QuasiModularForm derive(const QuasiModularForm& F) {
    using Q = QuasiModularForm;
    Q r = Q::zero(F.weight() + 2);
    for (const auto& [key, c] : F.monomials()) {
        auto [a, b, e] = key;
        if (a > 0) {
            r = r + Q::monomial(a + 1, b, e, c * a / 12) - Q::monomial(a - 1, b + 1, e, c * a / 12);
        }
        if (b > 0) {
            r = r + Q::monomial(a + 1, b, e, c * b / 3) - Q::monomial(a, b - 1, e + 1, c * b / 3);
        }
        if (e > 0) {
            r = r + Q::monomial(a + 1, b, e, c * e / 2) - Q::monomial(a, b + 2, e - 1, c * e / 2);
        }
    }
    return r;
}

inline QuasiModularForm derive(const QuasiModularForm& F, long n) {
    QuasiModularForm r = F;
    for (long i = 0; i < n; ++i) r = derive(r);
    return r;
}

// The lowering operator 12 d/dE2.
inline QuasiModularForm delta(const QuasiModularForm& F) {
    using Q = QuasiModularForm;
    Q r = Q::zero(F.weight() - 2);
    for (const auto& [key, c] : F.monomials())
        if (key[0] > 0) r = r + Q::monomial(key[0] - 1, key[1], key[2], 12 * key[0] * c);
    return r;
}

inline QuasiModularForm delta(const QuasiModularForm& F, long n) {
    QuasiModularForm r = F;
    for (long i = 0; i < n; ++i) r = delta(r);
    return r;
}

// Weight operator.
inline QuasiModularForm weight_op(const QuasiModularForm& F) { return Rat(F.weight()) * F; }

// Projection onto the modular (depth-0) part, equivariant for the sl2 action.
inline QuasiModularForm project(const QuasiModularForm& F) {
    long k = F.weight();
    if (F.is_zero()) return F;
    if (k == 2) return F - Rat(1, 12) * delta(F) * QuasiModularForm::E2();
    if (k < 0 || k % 2 != 0) throw std::invalid_argument("projection needs even non-negative weight");
    QuasiModularForm r = QuasiModularForm::zero(k);
    QuasiModularForm dF = F;
    for (long m = 0; m <= F.depth(); ++m) {
        Rat den = factorial(m) * pochhammer(Rat(k - m - 1), m);
        Rat sign = (m % 2 == 0) ? 1 : -1;
        r = r + sign / den * derive(dF, m);
        dF = delta(dF);
    }
    return r;
}

// F = sum_j g_j E2^j with each g_j in Q[E4, E6]; returns (g_0, ..., g_depth).
inline std::vector<QuasiModularForm> e2_decompose(const QuasiModularForm& F) {
    using Q = QuasiModularForm;
    long p = F.depth();
    std::vector<Q> g;
    for (long j = 0; j <= p; ++j) g.push_back(Q::zero(F.weight() - 2 * j));
    for (const auto& [key, c] : F.monomials()) g[static_cast<std::size_t>(key[0])] =
        g[static_cast<std::size_t>(key[0])] + Q::monomial(0, key[1], key[2], c);
    return g;
}

// Modified derivative D^n F / (kappa)_n, with the weight-0 slot reserved for
// constants where it degenerates to D^{n-1}(E2)/(12 (n-1)!).
inline QuasiModularForm dmod_one(long n) {
    if (n == 0) return QuasiModularForm(Rat(1));
    return Rat(1) / (12 * factorial(n - 1)) * derive(QuasiModularForm::E2(), n - 1);
}

inline QuasiModularForm dmod(const Rat& kappa, long n, const QuasiModularForm& F) {
    if (n < 0) throw std::invalid_argument("negative derivative order");
    Rat den = pochhammer(kappa, n);
    if (den == 0) {
        if (kappa == 0 && F.is_constant()) return F.constant_value() * dmod_one(n);
        throw std::domain_error("modified derivative undefined: vanishing shifted factorial");
    }
    return Rat(1) / den * derive(F, n);
}

// F = sum_r Dmod^r(h_r) with h_r modular of weight k-2r (constant slot at 2r = k);
// returns (h_0, ..., h_depth).
inline std::vector<QuasiModularForm> derivative_decompose(const QuasiModularForm& F) {
    using Q = QuasiModularForm;
    long k = F.weight();
    if (k < 0 || k % 2 != 0) throw std::invalid_argument("even non-negative weight required");
    long p = F.is_zero() ? 0 : F.depth();
    std::vector<Q> h(static_cast<std::size_t>(p) + 1);
    Q rest = F;
    for (long r = p; r >= 1; --r) {
        Q hr = Rat(1) / factorial(r) * delta(rest, r);
        h[static_cast<std::size_t>(r)] = hr;
        if (2 * r == k)
            rest = rest - hr.constant_value() * dmod_one(r);
        else
            rest = rest - dmod(Rat(k - 2 * r), r, hr);
    }
    if (rest.depth() > 0) throw std::logic_error("derivative decomposition failed to kill depth");
    h[0] = rest;
    return h;
}

// Polynomial in E2, E4, E6 and Y, where Y stands for 1/(2 pi i (tau - taubar)).
class AlmostHolForm {
  public:
    using Key = std::array<long, 4>;  // exponents of E2, E4, E6, Y
    using Map = std::map<Key, Rat>;

    AlmostHolForm() : weight_(0) {}

    static AlmostHolForm zero(long weight) {
        AlmostHolForm f;
        f.weight_ = weight;
        return f;
    }

    static AlmostHolForm monomial(long a, long b, long c, long d, const Rat& coeff) {
        if (a < 0 || b < 0 || c < 0 || d < 0) throw std::invalid_argument("negative exponent");
        AlmostHolForm f;
        f.weight_ = 2 * a + 4 * b + 6 * c + 2 * d;
        if (coeff != 0) f.monomials_[{a, b, c, d}] = coeff;
        return f;
    }

    long weight() const { return weight_; }
    bool is_zero() const { return monomials_.empty(); }
    const Map& monomials() const { return monomials_; }

    long y_degree() const {
        long d = 0;
        for (const auto& [key, c] : monomials_) d = std::max(d, key[3]);
        return d;
    }

    Rat coeff(const Key& k) const {
        auto it = monomials_.find(k);
        return it == monomials_.end() ? Rat(0) : it->second;
    }

    AlmostHolForm operator-() const {
        AlmostHolForm f = *this;
        for (auto& [key, c] : f.monomials_) c = -c;
        return f;
    }

    friend AlmostHolForm operator+(const AlmostHolForm& x, const AlmostHolForm& y) {
        if (x.is_zero()) return y.is_zero() ? x : y;
        if (y.is_zero()) return x;
        if (x.weight_ != y.weight_) throw std::invalid_argument("weight mismatch in sum");
        AlmostHolForm f = x;
        for (const auto& [key, c] : y.monomials_) {
            Rat s = f.coeff(key) + c;
            if (s == 0)
                f.monomials_.erase(key);
            else
                f.monomials_[key] = s;
        }
        return f;
    }

    friend AlmostHolForm operator-(const AlmostHolForm& x, const AlmostHolForm& y) { return x + (-y); }

    friend AlmostHolForm operator*(const AlmostHolForm& x, const AlmostHolForm& y) {
        AlmostHolForm f = zero(x.weight_ + y.weight_);
        for (const auto& [ka, ca] : x.monomials_)
            for (const auto& [kb, cb] : y.monomials_) {
                Key k = {ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2], ka[3] + kb[3]};
                Rat s = f.coeff(k) + ca * cb;
                if (s == 0)
                    f.monomials_.erase(k);
                else
                    f.monomials_[k] = s;
            }
        return f;
    }

    friend AlmostHolForm operator*(const Rat& s, const AlmostHolForm& x) {
        AlmostHolForm f = zero(x.weight_);
        if (s == 0) return f;
        for (const auto& [key, c] : x.monomials_) f.monomials_[key] = s * c;
        return f;
    }

    friend bool operator==(const AlmostHolForm& x, const AlmostHolForm& y) {
        if (x.monomials_ != y.monomials_) return false;
        return x.is_zero() || x.weight_ == y.weight_;
    }
    friend bool operator!=(const AlmostHolForm& x, const AlmostHolForm& y) { return !(x == y); }

  private:
    long weight_;
    Map monomials_;
};

// E2 -> E2 + 12 Y; a ring isomorphism onto almost-holomorphic forms.
inline AlmostHolForm completion(const QuasiModularForm& F) {
    AlmostHolForm r = AlmostHolForm::zero(F.weight());
    for (const auto& [key, c] : F.monomials()) {
        auto [a, b, e] = key;
        for (long j = 0; j <= a; ++j) {
            mpz_class p;
            mpz_ui_pow_ui(p.get_mpz_t(), 12, static_cast<unsigned long>(j));
            r = r + AlmostHolForm::monomial(a - j, b, e, j, c * binom(a, j) * Rat(p));
        }
    }
    return r;
}

// Sets Y = 0; inverse of completion.
inline QuasiModularForm constant_term(const AlmostHolForm& Phi) {
    QuasiModularForm r = QuasiModularForm::zero(Phi.weight());
    for (const auto& [key, c] : Phi.monomials())
        if (key[3] == 0) r = r + QuasiModularForm::monomial(key[0], key[1], key[2], c);
    return r;
}

inline AlmostHolForm hat_delta(const AlmostHolForm& Phi) {
    AlmostHolForm r = AlmostHolForm::zero(Phi.weight() - 2);
    for (const auto& [key, c] : Phi.monomials())
        if (key[3] > 0) r = r + AlmostHolForm::monomial(key[0], key[1], key[2], key[3] - 1, key[3] * c);
    return r;
}

inline AlmostHolForm hat_derive(const AlmostHolForm& Phi) {
    AlmostHolForm r = AlmostHolForm::zero(Phi.weight() + 2);
    for (const auto& [key, c] : Phi.monomials()) {
        auto [a, b, e, d] = key;
        long w = 2 * a + 4 * b + 6 * e;
        QuasiModularForm dh = derive(QuasiModularForm::monomial(a, b, e, c));
        for (const auto& [hk, hc] : dh.monomials()) r = r + AlmostHolForm::monomial(hk[0], hk[1], hk[2], d, hc);
        r = r + AlmostHolForm::monomial(a, b, e, d + 1, (w + d) * c);
    }
    return r;
}

inline AlmostHolForm hat_derive(const AlmostHolForm& Phi, long n) {
    AlmostHolForm r = Phi;
    for (long i = 0; i < n; ++i) r = hat_derive(r);
    return r;
}

inline AlmostHolForm hat_weight_op(const AlmostHolForm& Phi) { return Rat(Phi.weight()) * Phi; }

// Projection onto Y-degree 0 in the hatted calculus.  Weight 2 with positive
// Y-degree has no holomorphic target; the result is zero and *degenerate is set.
inline AlmostHolForm hat_project(const AlmostHolForm& Phi, bool* degenerate = nullptr) {
    if (degenerate) *degenerate = false;
    long k = Phi.weight();
    if (Phi.is_zero()) return Phi;
    if (k == 2 && Phi.y_degree() > 0) {
        if (degenerate) *degenerate = true;
        return AlmostHolForm::zero(2);
    }
    AlmostHolForm r = AlmostHolForm::zero(k);
    AlmostHolForm dPhi = Phi;
    for (long m = 0; m <= Phi.y_degree(); ++m) {
        Rat den = factorial(m) * pochhammer(Rat(k - m - 1), m);
        Rat sign = (m % 2 == 0) ? 1 : -1;
        r = r + sign / den * hat_derive(dPhi, m);
        dPhi = hat_delta(dPhi);
    }
    return r;
}

inline long dim_M(long k) {
    if (k < 0 || k % 2 != 0) throw std::invalid_argument("even non-negative weight required");
    long d = 0;
    for (long b = 0; 4 * b <= k; ++b)
        if ((k - 4 * b) % 6 == 0) ++d;
    return d;
}

// Monomial basis E4^b E6^c of the modular forms of weight k, b descending.
inline std::vector<QuasiModularForm> basis_M(long k) {
    if (k < 0 || k % 2 != 0) throw std::invalid_argument("even non-negative weight required");
    std::vector<QuasiModularForm> basis;
    for (long b = k / 4; b >= 0; --b) {
        long rem = k - 4 * b;
        if (rem % 6 == 0) basis.push_back(QuasiModularForm::monomial(0, b, rem / 6, 1));
    }
    return basis;
}

// q-expansion through exponent N.
inline FracPowerSeries to_series(const QuasiModularForm& F, long N) {
    FracPowerSeries e2 = eisenstein(2, N), e4 = eisenstein(4, N), e6 = eisenstein(6, N);
    FracPowerSeries r = FracPowerSeries::zero(Rat(N));
    for (const auto& [key, c] : F.monomials())
        r = r + c * (e2.pow(key[0]) * e4.pow(key[1]) * e6.pow(key[2]));
    return r;
}

// --- text grammar ---------------------------------------------------------
// expr := term (('+'|'-') term)*
// term := factor ('*' factor)*
// factor := rational | atom ['^' nat] | '(' expr ')'
// atom := 'E2' | 'E4' | 'E6' | 'Y'

namespace detail {

class FormParser {
  public:
    explicit FormParser(const std::string& s) : s_(s) {}

    AlmostHolForm parse() {
        AlmostHolForm f = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return f;
    }

  private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("parse error at column " + std::to_string(pos_ + 1) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    AlmostHolForm expr() {
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        AlmostHolForm f = term();
        if (neg) f = -f;
        for (;;) {
            if (eat('+'))
                f = f + term();
            else if (eat('-'))
                f = f - term();
            else
                break;
        }
        return f;
    }

    AlmostHolForm term() {
        AlmostHolForm f = factor();
        while (eat('*')) f = f * factor();
        return f;
    }

    long parse_nat() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected number");
        return std::stol(s_.substr(start, pos_ - start));
    }

    AlmostHolForm factor() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            AlmostHolForm f = expr();
            if (!eat(')')) fail("expected ')'");
            return maybe_pow(f);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long num = parse_nat();
            Rat r(num);
            if (eat('/')) r /= parse_nat();
            if (r.get_den() == 0) fail("zero denominator");
            r.canonicalize();
            return AlmostHolForm::monomial(0, 0, 0, 0, r);
        }
        if (c == 'E') {
            if (pos_ + 1 >= s_.size()) fail("incomplete Eisenstein symbol");
            char d = s_[pos_ + 1];
            pos_ += 2;
            AlmostHolForm a;
            if (d == '2')
                a = AlmostHolForm::monomial(1, 0, 0, 0, 1);
            else if (d == '4')
                a = AlmostHolForm::monomial(0, 1, 0, 0, 1);
            else if (d == '6')
                a = AlmostHolForm::monomial(0, 0, 1, 0, 1);
            else
                fail("unknown symbol E" + std::string(1, d));
            return maybe_pow(a);
        }
        if (c == 'Y') {
            ++pos_;
            return maybe_pow(AlmostHolForm::monomial(0, 0, 0, 1, 1));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    AlmostHolForm maybe_pow(AlmostHolForm f) {
        if (eat('^')) {
            long e = parse_nat();
            AlmostHolForm r = AlmostHolForm::monomial(0, 0, 0, 0, 1);
            for (long i = 0; i < e; ++i) r = r * f;
            return r;
        }
        return f;
    }
};

}  // namespace detail

inline AlmostHolForm parse_ah_form(const std::string& text) {
    detail::FormParser p(text);
    return p.parse();
}

inline QuasiModularForm parse_form(const std::string& text) {
    AlmostHolForm f = parse_ah_form(text);
    if (f.y_degree() > 0) throw std::invalid_argument("Y not allowed in a quasimodular form");
    return constant_term(f);
}

namespace detail {

inline void print_monomial_body(std::ostream& os, const Rat& coeff, const std::vector<std::pair<const char*, long>>& vars) {
    Rat c = coeff < 0 ? Rat(-coeff) : coeff;
    bool have_sym = false;
    for (const auto& [name, e] : vars) have_sym = have_sym || e > 0;
    bool printed = false;
    if (!have_sym || c != 1) {
        os << rat_str(c);
        printed = true;
    }
    for (const auto& [name, e] : vars) {
        if (e == 0) continue;
        if (printed) os << "*";
        os << name;
        if (e > 1) os << "^" << e;
        printed = true;
    }
}

}  // namespace detail

inline std::string to_string(const AlmostHolForm& F) {
    if (F.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : F.monomials()) {
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        detail::print_monomial_body(os, c, {{"E2", key[0]}, {"E4", key[1]}, {"E6", key[2]}, {"Y", key[3]}});
    }
    return os.str();
}

inline std::string to_string(const QuasiModularForm& F) {
    if (F.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : F.monomials()) {
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        detail::print_monomial_body(os, c, {{"E2", key[0]}, {"E4", key[1]}, {"E6", key[2]}});
    }
    return os.str();
}

}  // namespace mldokit

#endif
