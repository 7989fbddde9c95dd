#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace linfty {

/// Exact rational scalar. All structure constants, norms and certificates
/// are computed in this type; doubles appear only in the heat-family backend.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

inline Rat rat_abs(const Rat& r) { return sgn(r) < 0 ? Rat(-r) : r; }

inline Rat rat_pow(const Rat& base, unsigned e) {
    Rat acc(1);
    for (unsigned i = 0; i < e; ++i) acc = acc * base;
    return acc;
}

inline Rat factorial(unsigned n) {
    Rat acc(1);
    for (unsigned i = 2; i <= n; ++i) acc = acc * Rat((long)i);
    return acc;
}

/// Canonical "p/q" string, q >= 1, gcd(p,q) = 1.
inline std::string rat_str(const Rat& r) {
    Rat c = r;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Parses "p/q" or a bare integer "p". Throws std::invalid_argument on junk.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            Rat r(mpz_class(s), 1);
            r.canonicalize();
            return r;
        }
        mpz_class num(s.substr(0, slash));
        mpz_class den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + s);
        Rat r(num, den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

inline double to_double(const Rat& r) { return r.get_d(); }

}  // namespace linfty
