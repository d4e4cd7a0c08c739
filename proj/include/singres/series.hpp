#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "singres/poly.hpp"
#include "singres/rational.hpp"

namespace singres {

/// Truncated power series in one parameter t over the rationals, carrying
/// how many coefficients are certified. An exact series is a polynomial:
/// every coefficient beyond the stored support is zero.
class Series {
public:
    static constexpr long long kExact = std::numeric_limits<long long>::max();

private:
    std::vector<Rat> c_;  // c_[k] = coefficient of t^k
    long long cert_ = 0;  // indices < cert_ are certified; kExact means all

    void trim() {
        if (cert_ == kExact) {
            while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
        } else {
            if (static_cast<long long>(c_.size()) > cert_) c_.resize(cert_);
        }
    }

public:
    Series() = default;

    static Series exact_zero() {
        Series s;
        s.cert_ = kExact;
        return s;
    }
    static Series zero_to(long long cert) {
        Series s;
        s.cert_ = cert;
        return s;
    }
    static Series from_coeffs(std::vector<Rat> coeffs, long long cert = kExact) {
        Series s;
        s.c_ = std::move(coeffs);
        s.cert_ = cert;
        s.trim();
        return s;
    }
    static Series constant(const Rat& v) { return from_coeffs({v}); }
    /// t^k
    static Series power(long long k) {
        Series s;
        s.c_.assign(static_cast<size_t>(k) + 1, Rat(0));
        s.c_.back() = Rat(1);
        s.cert_ = kExact;
        return s;
    }

    bool exact() const { return cert_ == kExact; }
    long long certified() const { return cert_; }
    const std::vector<Rat>& coeffs() const { return c_; }

    Rat coeff(long long k) const {
        if (k < 0) return Rat(0);
        if (k < static_cast<long long>(c_.size())) return c_[static_cast<size_t>(k)];
        return Rat(0); // beyond the window: zero when exact, unknown otherwise
    }

    bool is_exactly_zero() const { return exact() && c_.empty(); }

    /// Order of vanishing. nullopt means identically zero (exact). A
    /// truncated series with no certified nonzero coefficient cannot be
    /// distinguished from zero, which the caller must treat by expanding
    /// further.
    std::optional<long long> ord() const {
        for (size_t k = 0; k < c_.size(); ++k)
            if (!c_[k].is_zero()) return static_cast<long long>(k);
        if (exact()) return std::nullopt;
        throw truncation_insufficient_error(
            "series vanishes to certified order " + std::to_string(cert_));
    }

    /// Lower bound for ord used in certification bookkeeping.
    long long ord_floor() const {
        for (size_t k = 0; k < c_.size(); ++k)
            if (!c_[k].is_zero()) return static_cast<long long>(k);
        return exact() ? kExact : cert_;
    }

    friend Series operator+(const Series& a, const Series& b) {
        Series r;
        r.cert_ = std::min(a.cert_, b.cert_);
        r.c_.assign(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.coeff(k) + b.coeff(k);
        r.trim();
        return r;
    }
    friend Series operator-(const Series& a, const Series& b) {
        Series r;
        r.cert_ = std::min(a.cert_, b.cert_);
        r.c_.assign(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.coeff(k) - b.coeff(k);
        r.trim();
        return r;
    }
    friend Series operator-(const Series& a) { return Series::exact_zero() - a; }

    friend Series operator*(const Series& a, const Series& b) {
        Series r;
        long long alow = a.ord_floor(), blow = b.ord_floor();
        if (alow == kExact || blow == kExact) return exact_zero();
        long long cert = kExact;
        if (a.cert_ != kExact) cert = std::min(cert, a.cert_ + blow);
        if (b.cert_ != kExact) cert = std::min(cert, b.cert_ + alow);
        r.cert_ = cert;
        size_t n = a.c_.size(), m = b.c_.size();
        if (n && m) {
            size_t len = n + m - 1;
            if (cert != kExact) len = std::min(len, static_cast<size_t>(std::max<long long>(cert, 0)));
            r.c_.assign(len, Rat(0));
            for (size_t i = 0; i < n; ++i) {
                if (a.c_[i].is_zero()) continue;
                for (size_t j = 0; j < m && i + j < len; ++j)
                    if (!b.c_[j].is_zero()) r.c_[i + j] += a.c_[i] * b.c_[j];
            }
        }
        r.trim();
        return r;
    }

    Series scaled(const Rat& v) const {
        Series r = *this;
        if (v.is_zero()) return exact() ? exact_zero() : zero_to(cert_);
        for (auto& x : r.c_) x *= v;
        return r;
    }

    /// Multiplies by t^k.
    Series shifted_up(long long k) const {
        Series r;
        r.cert_ = exact() ? kExact : cert_ + k;
        r.c_.assign(c_.size() + static_cast<size_t>(k), Rat(0));
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i + static_cast<size_t>(k)] = c_[i];
        return r;
    }

    /// Divides by t^k; the first k coefficients must be certified zero.
    Series shifted_down(long long k) const {
        if (!exact() && cert_ < k)
            throw truncation_insufficient_error("cannot divide by t^" + std::to_string(k));
        for (long long i = 0; i < k && i < static_cast<long long>(c_.size()); ++i)
            if (!c_[static_cast<size_t>(i)].is_zero())
                throw internal_inconsistency_error("series not divisible by t^" +
                                                   std::to_string(k));
        Series r;
        r.cert_ = exact() ? kExact : cert_ - k;
        if (static_cast<long long>(c_.size()) > k)
            r.c_.assign(c_.begin() + static_cast<size_t>(k), c_.end());
        return r;
    }

    /// Substitutes t -> s*t (rational reparametrization).
    Series reparametrized(const Rat& s) const {
        Series r = *this;
        Rat p(1);
        for (size_t k = 0; k < r.c_.size(); ++k) {
            r.c_[k] *= p;
            p *= s;
        }
        return r;
    }

    Series truncated(long long n) const {
        Series r = *this;
        bool cut_nonzero = false;
        for (size_t k = static_cast<size_t>(std::max<long long>(n, 0)); k < r.c_.size(); ++k)
            if (!r.c_[k].is_zero()) cut_nonzero = true;
        if (static_cast<long long>(r.c_.size()) > n)
            r.c_.resize(static_cast<size_t>(std::max<long long>(n, 0)));
        if (!(r.exact() && !cut_nonzero)) r.cert_ = std::min(exact() ? n : cert_, n);
        r.trim();
        return r;
    }

    /// Multiplicative inverse to order n; the constant term must be nonzero.
    Series inverse(long long n) const {
        if (c_.empty() || c_[0].is_zero())
            throw internal_inconsistency_error("inverting a non-unit series");
        if (exact() && c_.size() == 1) return constant(Rat(1) / c_[0]);
        long long cert = std::min<long long>(n, exact() ? n : cert_);
        Series r;
        r.cert_ = cert;
        r.c_.assign(static_cast<size_t>(std::max<long long>(cert, 0)), Rat(0));
        if (r.c_.empty()) return r;
        Rat inv0 = Rat(1) / c_[0];
        r.c_[0] = inv0;
        for (size_t k = 1; k < r.c_.size(); ++k) {
            Rat acc;
            for (size_t i = 1; i <= k; ++i) {
                if (coeff(i).is_zero()) continue;
                acc += coeff(i) * r.c_[k - i];
            }
            r.c_[k] = -acc * inv0;
        }
        return r;
    }

    friend bool operator==(const Series& a, const Series& b) {
        return a.exact() && b.exact() && a.c_ == b.c_;
    }
};

/// Evaluates a bivariate polynomial at a pair of series, truncated to
/// order n: Horner in y with the x-coefficients Horner-evaluated at sx.
inline Series eval_poly_at(const Poly& f, const Series& sx, const Series& sy, long long n) {
    if (f.uses(2))
        throw internal_inconsistency_error("eval_poly_at: polynomial uses z");
    Series r = Series::exact_zero();
    int dy = std::max(f.degree(1), 0);
    for (int j = dy; j >= 0; --j) {
        Series cj = Series::exact_zero();
        int dx = std::max(f.coeff_of(1, j).degree(0), 0);
        for (int i = dx; i >= 0; --i) {
            cj = (cj * sx).truncated(n);
            Rat a = f.coefficient({i, j, 0});
            if (!a.is_zero()) cj = cj + Series::constant(a);
        }
        r = (r * sy).truncated(n) + cj;
    }
    return r.truncated(n);
}

} // namespace singres
