#include "fraclab/rational.hpp"

#include <numeric>

namespace fraclab {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

i64 narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
        throw std::overflow_error("Rational: 64-bit overflow");
    return static_cast<i64>(v);
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const i64 g = std::gcd(n < 0 ? -n : n, d);
    num_ = g ? n / g : 0;
    den_ = g ? d / g : 1;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    const i128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
    const i128 d = i128(a.den_) * b.den_;
    const i128 g = n == 0 ? d : gcd128(n, d);
    return Rational(narrow(n / g), narrow(d / g));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    const i128 n = i128(a.num_) * b.num_;
    const i128 d = i128(a.den_) * b.den_;
    const i128 g = n == 0 ? d : gcd128(n, d);
    return Rational(narrow(n / g), narrow(d / g));
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return a * Rational(b.den_, b.num_);
}

} // namespace fraclab
