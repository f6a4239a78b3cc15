// Exact money arithmetic in cents. Payoff grids and experiment parameters
// are monetary amounts; keeping them integral avoids drift in equality
// checks and report formatting.
#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace regret {

class Money {
public:
    constexpr Money() = default;

    static constexpr Money from_cents(std::int64_t cents) {
        Money m;
        m.cents_ = cents;
        return m;
    }

    /// Converts an amount in currency units (e.g. 12.5) to cents, rejecting
    /// values that are not representable on the cent grid.
    static Money from_units(double units) {
        const double scaled = units * 100.0;
        const double rounded = std::nearbyint(scaled);
        if (std::abs(scaled - rounded) > 1e-6 || !std::isfinite(scaled)) {
            throw std::invalid_argument("money value is not a whole number of cents: " +
                                        std::to_string(units));
        }
        return from_cents(static_cast<std::int64_t>(rounded));
    }

    constexpr std::int64_t cents() const { return cents_; }
    constexpr double units() const { return static_cast<double>(cents_) / 100.0; }

    friend constexpr auto operator<=>(Money, Money) = default;

    friend constexpr Money operator+(Money a, Money b) { return from_cents(a.cents_ + b.cents_); }
    friend constexpr Money operator-(Money a, Money b) { return from_cents(a.cents_ - b.cents_); }

    /// Formats as a decimal string with two fraction digits ("12.50").
    std::string str() const {
        char buf[32];
        const std::int64_t c = cents_ < 0 ? -cents_ : cents_;
        std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", cents_ < 0 ? "-" : "",
                      static_cast<long long>(c / 100), static_cast<long long>(c % 100));
        return buf;
    }

private:
    std::int64_t cents_ = 0;
};

/// Midpoint of two amounts; exact because cent sums of grid values are even
/// in the supported grids (whole-unit grids).
inline Money midpoint(Money a, Money b) {
    const std::int64_t sum = a.cents() + b.cents();
    if (sum % 2 != 0) {
        throw std::invalid_argument("money midpoint is not representable in cents");
    }
    return Money::from_cents(sum / 2);
}

}  // namespace regret
