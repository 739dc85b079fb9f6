#pragma once

#include <algorithm>
#include <cstdint>
#include <compare>
#include <string>
#include <vector>

#include "ckord/errors.hpp"

namespace ckord {

/// Arbitrary-precision natural number, base 10^9, little-endian digits.
/// Zero is the empty digit vector.
class BigNat {
public:
    static constexpr std::uint32_t kBase = 1000000000u;

    BigNat() = default;

    BigNat(std::uint64_t v) { // NOLINT: implicit by design, naturals embed
        while (v > 0) {
            digits_.push_back(static_cast<std::uint32_t>(v % kBase));
            v /= kBase;
        }
    }

    static BigNat from_decimal(const std::string& s) {
        if (s.empty()) throw Error("BigNat: empty decimal string");
        BigNat r;
        for (std::size_t i = s.size(); i > 0; ) {
            std::size_t lo = i >= 9 ? i - 9 : 0;
            std::uint32_t chunk = 0;
            for (std::size_t j = lo; j < i; ++j) {
                char c = s[j];
                if (c < '0' || c > '9') throw Error("BigNat: bad digit in decimal string");
                chunk = chunk * 10 + static_cast<std::uint32_t>(c - '0');
            }
            r.digits_.push_back(chunk);
            i = lo;
        }
        r.trim();
        return r;
    }

    bool is_zero() const { return digits_.empty(); }

    bool fits_u64() const {
        if (digits_.size() > 3) return false;
        // 3 digits max value is < 10^27; compare against 2^64 via accumulation check
        unsigned __int128 v = 0;
        for (std::size_t i = digits_.size(); i > 0; --i) v = v * kBase + digits_[i - 1];
        return v <= static_cast<unsigned __int128>(UINT64_MAX);
    }

    std::uint64_t to_u64() const {
        if (!fits_u64()) throw Error("BigNat: value does not fit in 64 bits");
        std::uint64_t v = 0;
        for (std::size_t i = digits_.size(); i > 0; --i)
            v = v * kBase + digits_[i - 1];
        return v;
    }

    double to_double() const {
        double v = 0;
        for (std::size_t i = digits_.size(); i > 0; --i)
            v = v * static_cast<double>(kBase) + static_cast<double>(digits_[i - 1]);
        return v;
    }

    friend std::strong_ordering operator<=>(const BigNat& a, const BigNat& b) {
        if (a.digits_.size() != b.digits_.size())
            return a.digits_.size() <=> b.digits_.size();
        for (std::size_t i = a.digits_.size(); i > 0; --i)
            if (a.digits_[i - 1] != b.digits_[i - 1])
                return a.digits_[i - 1] <=> b.digits_[i - 1];
        return std::strong_ordering::equal;
    }
    friend bool operator==(const BigNat& a, const BigNat& b) { return a.digits_ == b.digits_; }

    friend BigNat operator+(const BigNat& a, const BigNat& b) {
        BigNat r;
        const std::size_t n = std::max(a.digits_.size(), b.digits_.size());
        r.digits_.resize(n, 0);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t s = carry;
            if (i < a.digits_.size()) s += a.digits_[i];
            if (i < b.digits_.size()) s += b.digits_[i];
            r.digits_[i] = static_cast<std::uint32_t>(s % kBase);
            carry = s / kBase;
        }
        if (carry) r.digits_.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    /// a - b; requires a >= b.
    friend BigNat operator-(const BigNat& a, const BigNat& b) {
        if (a < b) throw SubtractUnderflow("BigNat subtraction underflow");
        BigNat r;
        r.digits_.resize(a.digits_.size(), 0);
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < a.digits_.size(); ++i) {
            std::int64_t s = static_cast<std::int64_t>(a.digits_[i]) - borrow
                           - (i < b.digits_.size() ? static_cast<std::int64_t>(b.digits_[i]) : 0);
            if (s < 0) { s += kBase; borrow = 1; } else { borrow = 0; }
            r.digits_[i] = static_cast<std::uint32_t>(s);
        }
        r.trim();
        return r;
    }

    friend BigNat operator*(const BigNat& a, const BigNat& b) {
        if (a.is_zero() || b.is_zero()) return BigNat{};
        BigNat r;
        r.digits_.assign(a.digits_.size() + b.digits_.size(), 0);
        for (std::size_t i = 0; i < a.digits_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.digits_.size(); ++j) {
                std::uint64_t cur = r.digits_[i + j]
                    + static_cast<std::uint64_t>(a.digits_[i]) * b.digits_[j] + carry;
                r.digits_[i + j] = static_cast<std::uint32_t>(cur % kBase);
                carry = cur / kBase;
            }
            std::size_t k = i + b.digits_.size();
            while (carry) {
                std::uint64_t cur = r.digits_[k] + carry;
                r.digits_[k] = static_cast<std::uint32_t>(cur % kBase);
                carry = cur / kBase;
                ++k;
            }
        }
        r.trim();
        return r;
    }

    /// Long division: returns (quotient, remainder). Divisor must be nonzero.
    static std::pair<BigNat, BigNat> divmod(const BigNat& a, const BigNat& d) {
        if (d.is_zero()) throw Error("BigNat: division by zero");
        if (a < d) return {BigNat{}, a};
        if (d.digits_.size() <= 2) {
            // divisor fits u64: fast path
            const std::uint64_t dv = d.to_u64();
            BigNat q;
            q.digits_.resize(a.digits_.size(), 0);
            std::uint64_t rem = 0;
            for (std::size_t i = a.digits_.size(); i > 0; --i) {
                unsigned __int128 cur = static_cast<unsigned __int128>(rem) * kBase + a.digits_[i - 1];
                q.digits_[i - 1] = static_cast<std::uint32_t>(cur / dv % kBase);
                // quotient digit < base because rem < dv
                rem = static_cast<std::uint64_t>(cur % dv);
            }
            q.trim();
            return {q, BigNat{rem}};
        }
        // schoolbook with per-digit binary search on the trial digit
        BigNat q, rem;
        q.digits_.resize(a.digits_.size(), 0);
        for (std::size_t i = a.digits_.size(); i > 0; --i) {
            rem.digits_.insert(rem.digits_.begin(), a.digits_[i - 1]);
            rem.trim();
            std::uint32_t lo = 0, hi = kBase - 1, digit = 0;
            while (lo <= hi) {
                std::uint32_t mid = lo + (hi - lo) / 2;
                if (d * BigNat{mid} <= rem) { digit = mid; lo = mid + 1; }
                else { if (mid == 0) break; hi = mid - 1; }
            }
            q.digits_[i - 1] = digit;
            rem = rem - d * BigNat{digit};
        }
        q.trim();
        return {q, rem};
    }

    friend BigNat operator/(const BigNat& a, const BigNat& b) { return divmod(a, b).first; }
    friend BigNat operator%(const BigNat& a, const BigNat& b) { return divmod(a, b).second; }

    static BigNat gcd(BigNat a, BigNat b) {
        while (!b.is_zero()) {
            BigNat r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s = std::to_string(digits_.back());
        for (std::size_t i = digits_.size() - 1; i > 0; --i) {
            std::string part = std::to_string(digits_[i - 1]);
            s += std::string(9 - part.size(), '0') + part;
        }
        return s;
    }

private:
    void trim() {
        while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
    }

    std::vector<std::uint32_t> digits_;
};

inline BigNat operator+(const BigNat& a, std::uint64_t b) { return a + BigNat{b}; }
inline BigNat operator-(const BigNat& a, std::uint64_t b) { return a - BigNat{b}; }
inline BigNat operator*(const BigNat& a, std::uint64_t b) { return a * BigNat{b}; }

} // namespace ckord
