#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include "ckord/bignat.hpp"

namespace ckord {

/// Exact rational number: sign * num/den with gcd(num, den) = 1, den >= 1.
class Rational {
public:
    Rational() : sign_(0), num_(0), den_(1) {}

    Rational(std::int64_t v) // NOLINT: implicit, integers embed
        : sign_(v > 0 ? 1 : v < 0 ? -1 : 0),
          num_(static_cast<std::uint64_t>(v < 0 ? -v : v)),
          den_(1) {}

    Rational(std::int64_t n, std::int64_t d) : Rational(Rational{n} / Rational{d}) {}

    static Rational make(int sign, BigNat num, BigNat den) {
        Rational r;
        if (den.is_zero()) throw Error("Rational: zero denominator");
        if (num.is_zero()) return r;
        BigNat g = BigNat::gcd(num, den);
        r.sign_ = sign >= 0 ? 1 : -1;
        r.num_ = num / g;
        r.den_ = den / g;
        return r;
    }

    static Rational parse(const std::string& text) {
        std::size_t i = 0;
        int sign = 1;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
            if (text[i] == '-') sign = -1;
            ++i;
        }
        std::size_t slash = text.find('/', i);
        if (slash == std::string::npos)
            return make(sign, BigNat::from_decimal(text.substr(i)), BigNat{1});
        return make(sign,
                    BigNat::from_decimal(text.substr(i, slash - i)),
                    BigNat::from_decimal(text.substr(slash + 1)));
    }

    int sign() const { return sign_; }
    bool is_zero() const { return sign_ == 0; }
    const BigNat& num() const { return num_; }
    const BigNat& den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        BigNat l = a.num_ * b.den_, r = b.num_ * a.den_, den = a.den_ * b.den_;
        if (a.sign_ == b.sign_) return make(a.sign_, l + r, den);
        if (l == r) return Rational{};
        return l > r ? make(a.sign_, l - r, den) : make(b.sign_, r - l, den);
    }

    friend Rational operator-(const Rational& a) {
        Rational r = a;
        r.sign_ = -r.sign_;
        return r;
    }

    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

    friend Rational operator*(const Rational& a, const Rational& b) {
        if (a.sign_ == 0 || b.sign_ == 0) return Rational{};
        return make(a.sign_ * b.sign_, a.num_ * b.num_, a.den_ * b.den_);
    }

    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.sign_ == 0) throw Error("Rational: division by zero");
        if (a.sign_ == 0) return Rational{};
        return make(a.sign_ * b.sign_, a.num_ * b.den_, a.den_ * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.sign_ == b.sign_ && a.num_ == b.num_ && a.den_ == b.den_;
    }

    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
        if (a.sign_ == 0) return std::strong_ordering::equal;
        std::strong_ordering mag = (a.num_ * b.den_) <=> (b.num_ * a.den_);
        return a.sign_ > 0 ? mag : 0 <=> mag;
    }

    Rational abs() const {
        Rational r = *this;
        if (r.sign_ < 0) r.sign_ = 1;
        return r;
    }

    double to_double() const {
        if (sign_ == 0) return 0.0;
        return sign_ * num_.to_double() / den_.to_double();
    }

    std::string to_string() const {
        if (sign_ == 0) return "0";
        std::string s = (sign_ < 0 ? "-" : "") + num_.to_string();
        if (!(den_ == BigNat{1})) s += "/" + den_.to_string();
        return s;
    }

private:
    int sign_;
    BigNat num_;
    BigNat den_;
};

} // namespace ckord
