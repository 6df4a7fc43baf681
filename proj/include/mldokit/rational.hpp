#ifndef MLDOKIT_RATIONAL_HPP
#define MLDOKIT_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mldokit {

// Exact rational scalar used throughout the library.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& x) { return x.get_den() == 1; }

inline long to_long(const Rat& x) {
    if (!is_integer(x)) throw std::invalid_argument("rational is not an integer: " + x.get_str());
    if (!x.get_num().fits_slong_p()) throw std::overflow_error("rational too large for long");
    return x.get_num().get_si();
}

// "p/q" or "p", lowest terms not required on input.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    try {
        Rat r(s);
        r.canonicalize();
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
        return r;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

inline std::string rat_str(const Rat& x) { return x.get_str(); }

inline Rat factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial of negative integer");
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rat(f);
}

// Shifted factorial (x)_n = x(x+1)...(x+n-1).
inline Rat pochhammer(const Rat& x, long n) {
    if (n < 0) throw std::invalid_argument("pochhammer with negative count");
    Rat p = 1;
    for (long i = 0; i < n; ++i) p *= x + i;
    return p;
}

// Falling factorial x(x-1)...(x-n+1).
inline Rat falling(const Rat& x, long n) {
    Rat p = 1;
    for (long i = 0; i < n; ++i) p *= x - i;
    return p;
}

// Binomial with arbitrary rational top argument, C(x, n) = x(x-1)...(x-n+1)/n!.
inline Rat binom(const Rat& x, long n) {
    if (n < 0) return 0;
    return falling(x, n) / factorial(n);
}

inline Rat binom(long n, long k) {
    if (k < 0 || k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rat(b);
}

}  // namespace mldokit

#endif
