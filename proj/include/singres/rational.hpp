#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <ostream>
#include <string>

#include "singres/errors.hpp"

namespace singres {

/// Arbitrary-precision integer backing every exact computation.
using Int = boost::multiprecision::cpp_int;

using boost::multiprecision::gcd;
using boost::multiprecision::lcm;
using boost::multiprecision::abs;

inline int sgn(const Int& a) { return a.sign(); }

/// Floor division (rounds toward -inf; cpp_int's / truncates toward zero).
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
    return -floor_div(-a, b);
}

/// Nonnegative representative of a mod n, n > 0.
inline Int mod_pos(const Int& a, const Int& n) {
    Int r = a % n;
    if (r < 0) r += n;
    return r;
}

inline Int pow(const Int& base, unsigned long e) {
    return boost::multiprecision::pow(base, e);
}

/// Exact n-th root: returns r with r^n == a if one exists.
/// a must be >= 0 for even n.
inline std::optional<Int> exact_root(const Int& a, unsigned n) {
    if (n == 0) return std::nullopt;
    if (n == 1) return a;
    if (a < 0) {
        if (n % 2 == 0) return std::nullopt;
        auto r = exact_root(-a, n);
        if (!r) return std::nullopt;
        return -*r;
    }
    if (a == 0 || a == 1) return a;
    // binary search on [1, a]
    Int lo = 1, hi = a;
    while (lo <= hi) {
        Int mid = (lo + hi) / 2;
        Int p = boost::multiprecision::pow(mid, n);
        if (p == a) return mid;
        if (p < a) lo = mid + 1; else hi = mid - 1;
    }
    return std::nullopt;
}

/// Exact rational number, always in lowest terms with positive denominator.
class Rat {
    Int num_;
    Int den_; // > 0

    void normalize() {
        if (den_ == 0) throw range_error("Rat: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        if (num_ == 0) { den_ = 1; return; }
        Int g = gcd(abs(num_), den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

public:
    Rat() : num_(0), den_(1) {}
    Rat(int v) : num_(v), den_(1) {}
    Rat(long v) : num_(v), den_(1) {}
    Rat(long long v) : num_(v), den_(1) {}
    Rat(Int v) : num_(std::move(v)), den_(1) {}
    Rat(Int num, Int den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    const Int& num() const { return num_; }
    const Int& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_.sign(); }

    friend Rat operator-(const Rat& a) {
        Rat r;
        r.num_ = -a.num_;
        r.den_ = a.den_;
        return r;
    }
    friend Rat operator+(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw range_error("Rat: division by zero");
        return Rat(a.num_ * b.den_, a.den_ * b.num_);
    }

    Rat& operator+=(const Rat& b) { return *this = *this + b; }
    Rat& operator-=(const Rat& b) { return *this = *this - b; }
    Rat& operator*=(const Rat& b) { return *this = *this * b; }
    Rat& operator/=(const Rat& b) { return *this = *this / b; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    /// "a" for integers, "a/b" otherwise.
    std::string str() const {
        std::string s = num_.str();
        if (den_ != 1) s += "/" + den_.str();
        return s;
    }

    /// Parses "a" or "a/b" (optional leading minus). Throws range_error on junk.
    static Rat parse(const std::string& text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return Rat(Int(text));
            return Rat(Int(text.substr(0, slash)), Int(text.substr(slash + 1)));
        } catch (const std::exception&) {
            throw range_error("Rat: cannot parse '" + text + "'");
        }
    }

    friend std::ostream& operator<<(std::ostream& os, const Rat& q) { return os << q.str(); }
};

inline Rat abs(const Rat& q) { return q.sign() < 0 ? -q : q; }

inline Rat pow(const Rat& base, unsigned long e) {
    return Rat(pow(base.num(), e), pow(base.den(), e));
}

/// Exact n-th root of a rational, if it is one.
inline std::optional<Rat> exact_root(const Rat& a, unsigned n) {
    auto rn = exact_root(a.num(), n);
    if (!rn) return std::nullopt;
    auto rd = exact_root(a.den(), n);
    if (!rd) return std::nullopt;
    return Rat(*rn, *rd);
}

inline Int floor(const Rat& q) { return floor_div(q.num(), q.den()); }
inline Int ceil(const Rat& q) { return ceil_div(q.num(), q.den()); }

} // namespace singres
