#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "ckord/ordinal.hpp"

namespace ckord {

// Ordinal text grammar (ASCII):
//   ord    := term ('+' term)*
//   term   := 'w' ('^' factor)? ('*' nat)? | nat
//   factor := nat | 'w' | '(' ord ')'
//   nat    := decimal digits, no leading zeros except "0"
//
// parse evaluates with ordinal addition, so any well-formed input lands in
// canonical CNF ("w+w" becomes w*2). format emits the canonical spelling:
// strictly decreasing exponents, "^1" and "*1" omitted, zero prints "0".

namespace detail {

class OrdinalParser {
public:
    explicit OrdinalParser(std::string_view text) : text_(text) {}

    Ordinal parse() {
        skip_ws();
        Ordinal r = parse_ord();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError("unexpected trailing input", pos_);
        return r;
    }

private:
    Ordinal parse_ord() {
        Ordinal r = parse_term();
        skip_ws();
        while (pos_ < text_.size() && text_[pos_] == '+') {
            ++pos_;
            skip_ws();
            r = r + parse_term();
            skip_ws();
        }
        return r;
    }

    Ordinal parse_term() {
        skip_ws();
        if (pos_ >= text_.size())
            throw SyntaxError("expected term", pos_);
        if (text_[pos_] == 'w') {
            ++pos_;
            Ordinal exp{1};
            if (pos_ < text_.size() && text_[pos_] == '^') {
                ++pos_;
                exp = parse_factor();
            }
            BigNat coeff{1};
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '*') {
                ++pos_;
                coeff = parse_nat();
            }
            return Ordinal::make_term(exp, coeff, Ordinal{});
        }
        if (std::isdigit(static_cast<unsigned char>(text_[pos_])))
            return Ordinal{parse_nat()};
        throw SyntaxError("expected 'w' or a number", pos_);
    }

    Ordinal parse_factor() {
        skip_ws();
        if (pos_ >= text_.size())
            throw SyntaxError("expected exponent factor", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Ordinal r = parse_ord();
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != ')')
                throw SyntaxError("expected ')'", pos_);
            ++pos_;
            return r;
        }
        if (c == 'w') {
            ++pos_;
            return Ordinal::omega();
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return Ordinal{parse_nat()};
        throw SyntaxError("expected number, 'w' or '(' in exponent", pos_);
    }

    BigNat parse_nat() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_)
            throw SyntaxError("expected number", pos_);
        std::string digits{text_.substr(start, pos_ - start)};
        if (digits.size() > 1 && digits[0] == '0')
            throw SyntaxError("leading zeros are not allowed", start);
        return BigNat::from_decimal(digits);
    }

    void skip_ws() {
        while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Ordinal parse_ordinal(std::string_view text) {
    return detail::OrdinalParser{text}.parse();
}

inline std::string format_ordinal(const Ordinal& a) {
    if (a.is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < a.term_count(); ++i) {
        if (i > 0) out += "+";
        const Ordinal& e = a.exponent_at(i);
        const BigNat& c = a.coefficient_at(i);
        if (e.is_zero()) {
            out += c.to_string();
            continue;
        }
        out += "w";
        if (!(e == Ordinal{1})) {
            out += "^";
            if (e.is_finite()) {
                out += e.finite_value().to_string();
            } else if (e == Ordinal::omega()) {
                out += "w";
            } else {
                out += "(" + format_ordinal(e) + ")";
            }
        }
        if (!(c == BigNat{1})) out += "*" + c.to_string();
    }
    return out;
}

} // namespace ckord
