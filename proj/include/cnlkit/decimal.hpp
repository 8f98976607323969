#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cnl {

// Exact rational number with a display scale. 1.50 keeps two digits when printed.
class Decimal {
public:
    Decimal() = default;
    Decimal(std::int64_t v) : num_(v) {}

    static std::optional<Decimal> parse(std::string_view text);

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }
    int scale() const { return scale_; }
    bool is_integer() const { return den_ == 1; }

    std::string str() const;

    friend Decimal operator+(const Decimal& a, const Decimal& b);
    friend Decimal operator-(const Decimal& a, const Decimal& b);
    friend Decimal operator*(const Decimal& a, const Decimal& b);
    friend Decimal operator/(const Decimal& a, const Decimal& b);
    Decimal operator-() const;

    friend bool operator==(const Decimal& a, const Decimal& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

private:
    static Decimal make(__int128 n, __int128 d, int scale);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    int scale_ = 0;
};

} // namespace cnl
