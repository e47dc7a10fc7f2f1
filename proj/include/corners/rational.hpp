#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace corners {

// Exact rational on int64 components.  Densities and threshold ratios in this
// library stay tiny (numerators bounded by grid cell counts), so 64-bit
// components with 128-bit intermediate products are enough; overflow throws
// instead of wrapping.

struct rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    rational() = default;
    rational(std::int64_t n) : num(n), den(1) {}
    rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    static std::int64_t checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational: overflow");
        return static_cast<std::int64_t>(v);
    }

    friend rational operator+(const rational& a, const rational& b) {
        __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
        __int128 d = (__int128)a.den * b.den;
        __int128 g = gcd128(n < 0 ? -n : n, d);
        return rational(checked(n / g), checked(d / g));
    }
    friend rational operator-(const rational& a, const rational& b) {
        return a + rational(-b.num, b.den);
    }
    friend rational operator*(const rational& a, const rational& b) {
        __int128 n = (__int128)a.num * b.num;
        __int128 d = (__int128)a.den * b.den;
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g == 0) g = 1;
        return rational(checked(n / g), checked(d / g));
    }
    friend rational operator/(const rational& a, const rational& b) {
        if (b.num == 0) throw std::domain_error("rational: divide by zero");
        return a * rational(b.den, b.num);
    }
    friend bool operator==(const rational& a, const rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const rational& a, const rational& b) { return !(a == b); }
    friend bool operator<(const rational& a, const rational& b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(const rational& a, const rational& b) {
        return (__int128)a.num * b.den <= (__int128)b.num * a.den;
    }
    friend bool operator>(const rational& a, const rational& b) { return b < a; }
    friend bool operator>=(const rational& a, const rational& b) { return b <= a; }

    friend std::ostream& operator<<(std::ostream& os, const rational& r) {
        os << r.num;
        if (r.den != 1) os << '/' << r.den;
        return os;
    }

    std::string str() const {
        std::string s = std::to_string(num);
        if (den != 1) s += "/" + std::to_string(den);
        return s;
    }

private:
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a < 0 ? -a : a;
    }
};

} // namespace corners
