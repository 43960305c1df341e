#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace trop {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Bad user-supplied data (violated hypotheses, malformed files). The CLI maps
// this to exit code 2; everything else that escapes is a bug.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Broken internal invariant.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw input_error(what);
}

inline Int num(const Rat& r) { return numerator(r); }
inline Int den(const Rat& r) { return denominator(r); }

inline bool is_integer(const Rat& r) { return den(r) == 1; }

inline Int floor_rat(const Rat& r) {
    Int q = num(r) / den(r);
    if (num(r) < 0 && q * den(r) != num(r)) --q;
    return q;
}

// "p/q" or "p"; cpp_rational's string ctor already canonicalizes.
inline Rat parse_rat(const std::string& s) {
    try {
        Rat r(s);
        return r;
    } catch (const std::exception&) {
        throw input_error("not a rational: '" + s + "'");
    }
}

inline std::string rat_str(const Rat& r) {
    if (is_integer(r)) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

} // namespace trop
