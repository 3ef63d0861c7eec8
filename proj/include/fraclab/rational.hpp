/// @file rational.hpp
/// @brief Exact rational arithmetic on int64 with overflow detection, for
///        the polynomial algebra where tolerances must not enter.

#ifndef FRACLAB_RATIONAL_HPP
#define FRACLAB_RATIONAL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fraclab {

class Rational {
  public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    Rational operator-() const { return Rational(-num_, den_); }
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace fraclab

#endif
