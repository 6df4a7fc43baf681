#ifndef MLDOKIT_IO_HPP
#define MLDOKIT_IO_HPP

#include <json.hpp>

#include "mlde.hpp"
#include "mldo.hpp"

namespace mldokit {

using json = nlohmann::json;

inline json to_json(const FracPowerSeries& s) {
    json coeffs = json::array();
    for (const auto& c : s.coeffs()) coeffs.push_back(rat_str(c));
    return json{{"alpha", rat_str(s.base_exponent())},
                {"step", "1/" + std::to_string(s.step_den())},
                {"coeffs", coeffs},
                {"order", rat_str(s.order())}};
}

inline FracPowerSeries series_from_json(const json& j) {
    Rat alpha = parse_rat(j.at("alpha").get<std::string>());
    Rat step = parse_rat(j.at("step").get<std::string>());
    if (step <= 0 || step.get_num() != 1) throw std::invalid_argument("step must be 1/M");
    std::vector<Rat> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(parse_rat(c.get<std::string>()));
    return FracPowerSeries(alpha, to_long(Rat(step.get_den())), std::move(coeffs),
                           parse_rat(j.at("order").get<std::string>()));
}

inline json to_json(const AlmostHolForm& F) {
    json monos = json::array();
    for (const auto& [key, c] : F.monomials())
        monos.push_back(json{{"e2", key[0]}, {"e4", key[1]}, {"e6", key[2]}, {"y", key[3]}, {"coeff", rat_str(c)}});
    return json{{"weight", F.weight()}, {"monomials", monos}};
}

inline json to_json(const QuasiModularForm& F) {
    json monos = json::array();
    for (const auto& [key, c] : F.monomials())
        monos.push_back(json{{"e2", key[0]}, {"e4", key[1]}, {"e6", key[2]}, {"y", 0}, {"coeff", rat_str(c)}});
    return json{{"weight", F.weight()}, {"monomials", monos}};
}

inline AlmostHolForm ah_form_from_json(const json& j) {
    AlmostHolForm f = AlmostHolForm::zero(j.at("weight").get<long>());
    for (const auto& m : j.at("monomials"))
        f = f + AlmostHolForm::monomial(m.at("e2").get<long>(), m.at("e4").get<long>(), m.at("e6").get<long>(),
                                        m.value("y", 0L), parse_rat(m.at("coeff").get<std::string>()));
    return f;
}

inline QuasiModularForm form_from_json(const json& j) {
    AlmostHolForm f = ah_form_from_json(j);
    if (f.y_degree() > 0) throw std::invalid_argument("Y-monomial in a quasimodular form");
    QuasiModularForm r = constant_term(f);
    return r.is_zero() ? QuasiModularForm::zero(f.weight()) : r;
}

inline json to_json(const Mldo& L) {
    json coeffs = json::array();
    for (const auto& a : L.coeffs()) coeffs.push_back(to_json(a));
    return json{{"k", rat_str(L.k())}, {"K", L.gain()}, {"coeffs", coeffs}};
}

inline Mldo mldo_from_json(const json& j) {
    std::vector<QuasiModularForm> a;
    for (const auto& c : j.at("coeffs")) a.push_back(form_from_json(c));
    return Mldo(parse_rat(j.at("k").get<std::string>()), j.at("K").get<long>(), std::move(a));
}

inline json to_json(const FrobeniusSolution& s) {
    json coeffs = json::array();
    for (const auto& c : s.series.coeffs()) coeffs.push_back(rat_str(c));
    return json{{"alpha", rat_str(s.exponent)}, {"coeffs", coeffs}, {"residual_order", rat_str(s.residual_order)}};
}

namespace detail {
inline std::string exp_str(const Rat& e) {
    if (is_integer(e) && e >= 0) return rat_str(e);
    return "(" + rat_str(e) + ")";
}
}  // namespace detail

inline std::string to_string(const FracPowerSeries& s) {
    if (s.is_zero()) return "O(q^" + detail::exp_str(s.order()) + ")";
    std::ostringstream os;
    bool first = true;
    Rat e = s.base_exponent();
    Rat step(1, s.step_den());
    for (const Rat& c : s.coeffs()) {
        if (c != 0) {
            Rat ac = c < 0 ? Rat(-c) : c;
            if (first)
                os << (c < 0 ? "-" : "");
            else
                os << (c < 0 ? " - " : " + ");
            first = false;
            bool unit = (ac == 1 && e != 0);
            if (!unit) os << rat_str(ac);
            if (e != 0) {
                if (!unit) os << "*";
                os << "q";
                if (e != 1) os << "^" << detail::exp_str(e);
            }
        }
        e += step;
    }
    os << (first ? "" : " + ") << "O(q^" << detail::exp_str(s.order()) << ")";
    return os.str();
}

// --- operator grammar ------------------------------------------------------
// op   := ['+'|'-'] term (('+'|'-') term)*
// term := factor ('*' factor)*
// factor := 'D' ['^' nat] | rational | 'E2'|'E4'|'E6' ['^' nat] | '(' form ')'

namespace detail {

class OperatorParser {
  public:
    OperatorParser(const std::string& s, const Rat& k) : s_(s), k_(k) {}

    Mldo parse() {
        std::map<long, QuasiModularForm> terms;  // D power -> coefficient sum (weights may vary pre-check)
        std::vector<std::pair<long, QuasiModularForm>> raw;
        bool neg = false;
        skip_ws();
        if (eat('-'))
            neg = true;
        else
            eat('+');
        raw.push_back(term(neg));
        for (;;) {
            if (eat('+'))
                raw.push_back(term(false));
            else if (eat('-'))
                raw.push_back(term(true));
            else
                break;
        }
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        long gain = 0;
        for (const auto& [r, f] : raw)
            if (!f.is_zero()) gain = std::max(gain, f.weight() + 2 * r);
        std::vector<QuasiModularForm> a(static_cast<std::size_t>(gain / 2) + 1);
        for (long r = 0; r <= gain / 2; ++r) a[static_cast<std::size_t>(r)] = QuasiModularForm::zero(gain - 2 * r);
        for (const auto& [r, f] : raw) {
            if (f.is_zero()) continue;
            if (f.weight() + 2 * r != gain)
                fail("term with D^" + std::to_string(r) + " has inhomogeneous operator weight");
            a[static_cast<std::size_t>(r)] = a[static_cast<std::size_t>(r)] + f;
        }
        return Mldo(k_, gain, std::move(a));
    }

  private:
    const std::string& s_;
    Rat k_;
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

    long parse_nat() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected number");
        return std::stol(s_.substr(start, pos_ - start));
    }

    std::pair<long, QuasiModularForm> term(bool neg) {
        long dpow = 0;
        QuasiModularForm coeff(Rat(neg ? -1 : 1));
        bool more = true;
        while (more) {
            skip_ws();
            if (pos_ >= s_.size()) fail("unexpected end of term");
            char c = s_[pos_];
            if (c == 'D') {
                ++pos_;
                long e = 1;
                if (eat('^')) e = parse_nat();
                dpow += e;
            } else if (c == '(') {
                std::size_t depth = 0;
                std::size_t start = pos_;
                do {
                    if (pos_ >= s_.size()) fail("unbalanced parenthesis");
                    if (s_[pos_] == '(') ++depth;
                    if (s_[pos_] == ')') --depth;
                    ++pos_;
                } while (depth > 0);
                QuasiModularForm f = parse_form(s_.substr(start + 1, pos_ - start - 2));
                if (eat('^')) {
                    long e = parse_nat();
                    QuasiModularForm p(Rat(1));
                    for (long i = 0; i < e; ++i) p = p * f;
                    f = p;
                }
                coeff = coeff * f;
            } else if (c == 'E') {
                if (pos_ + 1 >= s_.size()) fail("incomplete Eisenstein symbol");
                char d = s_[pos_ + 1];
                pos_ += 2;
                QuasiModularForm f;
                if (d == '2')
                    f = QuasiModularForm::E2();
                else if (d == '4')
                    f = QuasiModularForm::E4();
                else if (d == '6')
                    f = QuasiModularForm::E6();
                else
                    fail("unknown symbol E" + std::string(1, d));
                long e = 1;
                if (eat('^')) e = parse_nat();
                QuasiModularForm p(Rat(1));
                for (long i = 0; i < e; ++i) p = p * f;
                coeff = coeff * p;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                long num = parse_nat();
                Rat r(num);
                if (eat('/')) r /= parse_nat();
                r.canonicalize();
                coeff = coeff * r;
            } else {
                fail(std::string("unexpected character '") + c + "'");
            }
            more = eat('*');
        }
        return {dpow, coeff};
    }
};

}  // namespace detail

inline Mldo parse_operator(const std::string& text, const Rat& k) {
    detail::OperatorParser p(text, k);
    return p.parse();
}

inline std::string to_string(const Mldo& L) {
    if (L.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (long r = L.order(); r >= 0; --r) {
        const QuasiModularForm& f = L.coeff(r);
        if (f.is_zero()) continue;
        std::string body;
        bool negative = false;
        if (f.monomials().size() == 1) {
            const auto& [key, c] = *f.monomials().begin();
            negative = c < 0;
            std::ostringstream b;
            Rat ac = negative ? Rat(-c) : c;
            bool have_sym = key[0] + key[1] + key[2] > 0 || r > 0;
            bool printed = false;
            if (!have_sym || ac != 1) {
                b << rat_str(ac);
                printed = true;
            }
            for (const auto& [name, e] :
                 std::vector<std::pair<const char*, long>>{{"E2", key[0]}, {"E4", key[1]}, {"E6", key[2]}}) {
                if (e == 0) continue;
                if (printed) b << "*";
                b << name;
                if (e > 1) b << "^" << e;
                printed = true;
            }
            if (r > 0) {
                if (printed) b << "*";
                b << "D";
                if (r > 1) b << "^" << r;
            }
            body = b.str();
        } else {
            std::ostringstream b;
            b << "(" << to_string(f) << ")";
            if (r > 0) {
                b << "*D";
                if (r > 1) b << "^" << r;
            }
            body = b.str();
        }
        if (first) {
            if (negative) os << "-";
            first = false;
        } else {
            os << (negative ? " - " : " + ");
        }
        os << body;
    }
    return os.str();
}

}  // namespace mldokit

#endif
