#pragma once

// Exact decimal-scaled quantities. Every $S amount and every asset amount the
// ledger stores is an integer count of 1e-12 units, so conservation checks are
// equalities rather than tolerances.

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dfmm {

using int128 = __int128;

template <typename Tag>
class Fixed {
public:
    static constexpr int kDecimals = 12;
    static constexpr std::int64_t kScale = 1'000'000'000'000;

    constexpr Fixed() = default;

    static constexpr Fixed from_raw(int128 raw) {
        Fixed f;
        f.raw_ = raw;
        return f;
    }

    // Round half to even at the 1e-12 boundary.
    static Fixed from_double(double x) {
        if (!std::isfinite(x)) {
            throw std::domain_error("Fixed::from_double: non-finite value");
        }
        long double scaled = static_cast<long double>(x) * static_cast<long double>(kScale);
        long double r = std::nearbyint(scaled);
        long double diff = scaled - std::floor(scaled);
        if (diff == 0.5L) {
            long double fl = std::floor(scaled);
            r = (std::fmod(fl, 2.0L) == 0.0L) ? fl : fl + 1.0L;
        }
        return from_raw(static_cast<int128>(r));
    }

    static constexpr Fixed from_int(std::int64_t whole) {
        return from_raw(static_cast<int128>(whole) * kScale);
    }

    static constexpr Fixed zero() { return Fixed{}; }

    constexpr int128 raw() const { return raw_; }

    double to_double() const {
        int128 whole = raw_ / kScale;
        int128 frac = raw_ % kScale;
        return static_cast<double>(static_cast<long double>(whole) +
                                   static_cast<long double>(frac) / static_cast<long double>(kScale));
    }

    std::string to_string() const {
        int128 v = raw_;
        bool neg = v < 0;
        // magnitudes are far below the int128 limit, negation is safe
        if (neg) v = -v;
        int128 whole = v / kScale;
        auto frac = static_cast<std::int64_t>(v % kScale);
        std::string digits;
        if (whole == 0) {
            digits = "0";
        } else {
            while (whole > 0) {
                digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
                whole /= 10;
            }
        }
        std::string out = neg ? "-" + digits : digits;
        if (frac != 0) {
            std::string f = std::to_string(frac);
            f.insert(f.begin(), static_cast<std::size_t>(kDecimals) - f.size(), '0');
            while (!f.empty() && f.back() == '0') f.pop_back();
            out += "." + f;
        }
        return out;
    }

    // Exact parse of a plain decimal literal ("-12.5", "3", "0.000000000001").
    static std::optional<Fixed> parse(std::string_view s) {
        if (s.empty()) return std::nullopt;
        bool neg = false;
        std::size_t i = 0;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            i = 1;
        }
        int128 whole = 0;
        std::size_t digits = 0;
        for (; i < s.size() && s[i] != '.'; ++i) {
            if (s[i] < '0' || s[i] > '9') return std::nullopt;
            whole = whole * 10 + (s[i] - '0');
            ++digits;
        }
        int128 frac = 0;
        int frac_digits = 0;
        if (i < s.size()) {
            ++i;
            for (; i < s.size(); ++i) {
                if (s[i] < '0' || s[i] > '9') return std::nullopt;
                if (frac_digits == kDecimals) return std::nullopt;
                frac = frac * 10 + (s[i] - '0');
                ++frac_digits;
                ++digits;
            }
        }
        if (digits == 0) return std::nullopt;
        for (int k = frac_digits; k < kDecimals; ++k) frac *= 10;
        int128 raw = whole * kScale + frac;
        return from_raw(neg ? -raw : raw);
    }

    constexpr auto operator<=>(const Fixed&) const = default;

    constexpr Fixed operator-() const { return from_raw(-raw_); }
    constexpr Fixed& operator+=(Fixed o) { raw_ += o.raw_; return *this; }
    constexpr Fixed& operator-=(Fixed o) { raw_ -= o.raw_; return *this; }
    friend constexpr Fixed operator+(Fixed a, Fixed b) { return from_raw(a.raw_ + b.raw_); }
    friend constexpr Fixed operator-(Fixed a, Fixed b) { return from_raw(a.raw_ - b.raw_); }

    // Non-exact scaling, rounded half-even.
    Fixed scaled(double factor) const { return from_double(to_double() * factor); }

    constexpr bool is_zero() const { return raw_ == 0; }
    constexpr bool is_negative() const { return raw_ < 0; }
    constexpr bool is_positive() const { return raw_ > 0; }
    constexpr Fixed abs() const { return raw_ < 0 ? from_raw(-raw_) : *this; }

private:
    int128 raw_ = 0;
};

struct MoneyTag {};
struct UnitsTag {};

/// Accounting-asset ($S) amount.
using Money = Fixed<MoneyTag>;
/// Asset inventory amount.
using Units = Fixed<UnitsTag>;

template <typename Tag>
constexpr Fixed<Tag> min(Fixed<Tag> a, Fixed<Tag> b) { return b < a ? b : a; }
template <typename Tag>
constexpr Fixed<Tag> max(Fixed<Tag> a, Fixed<Tag> b) { return a < b ? b : a; }

} // namespace dfmm
