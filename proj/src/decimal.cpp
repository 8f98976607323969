#include "cnlkit/decimal.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace cnl {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool only_2_and_5(std::int64_t d, int& digits) {
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    digits = std::max(twos, fives);
    return d == 1;
}

} // namespace

Decimal Decimal::make(__int128 n, __int128 d, int scale) {
    if (d == 0) throw Error(Errc::arithmetic, "division by zero");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n, d);
    if (g > 1) { n /= g; d /= g; }
    constexpr auto lim = std::numeric_limits<std::int64_t>::max();
    if (n > lim || n < -lim || d > lim) throw Error(Errc::arithmetic, "decimal overflow");
    Decimal r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    r.scale_ = std::min(scale, 18);
    return r;
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool neg = false;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
        neg = text[0] == '-';
        ++i;
    }
    __int128 n = 0, d = 1;
    int scale = 0;
    bool digits = false, dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.' && !dot) {
            dot = true;
            continue;
        }
        if (c < '0' || c > '9') return std::nullopt;
        digits = true;
        n = n * 10 + (c - '0');
        if (dot) {
            d *= 10;
            ++scale;
        }
        if (n > (__int128)std::numeric_limits<std::int64_t>::max() * 10) return std::nullopt;
    }
    if (!digits || (dot && scale == 0)) return std::nullopt;
    return make(neg ? -n : n, d, scale);
}

std::string Decimal::str() const {
    int needed = 0;
    int scale = scale_;
    if (!only_2_and_5(den_, needed)) scale = std::max(scale, 6);
    else scale = std::max(scale, needed);
    if (scale == 0) return std::to_string(num_);
    __int128 pow = 1;
    for (int k = 0; k < scale; ++k) pow *= 10;
    // round half away from zero when the value is not exactly representable
    __int128 scaled = (__int128)num_ * pow;
    __int128 q = scaled / den_;
    __int128 rem = scaled % den_;
    if (rem != 0 && 2 * (rem < 0 ? -rem : rem) >= den_) q += (scaled < 0 ? -1 : 1);
    bool neg = q < 0;
    if (neg) q = -q;
    std::string digits;
    if (q == 0) digits = "0";
    while (q > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(q % 10)));
        q /= 10;
    }
    while ((int)digits.size() <= scale) digits.push_back('0');
    std::reverse(digits.begin(), digits.end());
    digits.insert(digits.size() - scale, ".");
    return neg ? "-" + digits : digits;
}

Decimal operator+(const Decimal& a, const Decimal& b) {
    return Decimal::make((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_, (__int128)a.den_ * b.den_,
                         std::max(a.scale_, b.scale_));
}

Decimal operator-(const Decimal& a, const Decimal& b) { return a + (-b); }

Decimal operator*(const Decimal& a, const Decimal& b) {
    return Decimal::make((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_, a.scale_ + b.scale_);
}

Decimal operator/(const Decimal& a, const Decimal& b) {
    if (b.num_ == 0) throw Error(Errc::arithmetic, "division by zero");
    return Decimal::make((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_, std::max(a.scale_, b.scale_));
}

Decimal Decimal::operator-() const {
    Decimal r = *this;
    r.num_ = -r.num_;
    return r;
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
    __int128 l = (__int128)a.num_ * b.den_;
    __int128 r = (__int128)b.num_ * a.den_;
    return l <=> r;
}

} // namespace cnl
