// Test-only oracles, deliberately independent of the library code paths
// they cross-check.
#pragma once

#include <vector>

#include "singres/dual_graph.hpp"
#include "singres/rational.hpp"

namespace oracles {

using singres::Int;
using singres::Rat;

/// Exact characteristic polynomial q(t) = det(t*I - M) by the
/// Faddeev-LeVerrier recurrence. Coefficients returned low-to-high.
inline std::vector<Rat> char_poly(const std::vector<std::vector<Int>>& m) {
    size_t n = m.size();
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n)), id(n, std::vector<Rat>(n));
    for (size_t i = 0; i < n; ++i) {
        id[i][i] = Rat(1);
        for (size_t j = 0; j < n; ++j) a[i][j] = Rat(m[i][j]);
    }
    auto mul = [&](const std::vector<std::vector<Rat>>& x, const std::vector<std::vector<Rat>>& y) {
        std::vector<std::vector<Rat>> r(n, std::vector<Rat>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k)
                for (size_t j = 0; j < n; ++j) r[i][j] += x[i][k] * y[k][j];
        return r;
    };
    std::vector<Rat> coeff(n + 1);
    coeff[n] = Rat(1);
    std::vector<std::vector<Rat>> mk = id;
    for (size_t k = 1; k <= n; ++k) {
        mk = mul(a, mk);
        Rat tr;
        for (size_t i = 0; i < n; ++i) tr += mk[i][i];
        Rat c = -tr / Rat((long long)k);
        coeff[n - k] = c;
        for (size_t i = 0; i < n; ++i) mk[i][i] += c;
    }
    return coeff;
}

inline Rat eval_poly(const std::vector<Rat>& p, const Rat& x) {
    Rat v;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v;
}

inline std::vector<Rat> derivative(const std::vector<Rat>& p) {
    std::vector<Rat> d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rat((long long)i));
    return d;
}

/// Sturm-chain count of real roots in the half-open interval (a, b].
inline int sturm_roots_in(const std::vector<Rat>& poly, const Rat& a, const Rat& b) {
    auto trim = [](std::vector<Rat> p) {
        while (!p.empty() && p.back().is_zero()) p.pop_back();
        return p;
    };
    auto rem = [&](std::vector<Rat> num, const std::vector<Rat>& den) {
        while (num.size() >= den.size() && !num.empty()) {
            Rat f = num.back() / den.back();
            size_t off = num.size() - den.size();
            for (size_t i = 0; i < den.size(); ++i) num[off + i] -= f * den[i];
            num = trim(std::move(num));
        }
        return num;
    };
    std::vector<std::vector<Rat>> chain;
    chain.push_back(trim(poly));
    chain.push_back(trim(derivative(poly)));
    while (!chain.back().empty()) {
        auto r = rem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        chain.push_back(trim(std::move(r)));
    }
    chain.pop_back();
    auto signs_at = [&](const Rat& x) {
        int changes = 0, last = 0;
        for (const auto& p : chain) {
            Rat v = eval_poly(p, x);
            int s = v.sign();
            if (s == 0) continue;
            if (last != 0 && s != last) ++changes;
            last = s;
        }
        return changes;
    };
    return signs_at(a) - signs_at(b);
}

/// Independent negative-definiteness decision: exact characteristic
/// polynomial, then root counting by sign changes over (0, bound] plus a
/// nonzero check at 0. A symmetric integer matrix is negative definite
/// iff it is nonsingular, has no positive eigenvalue, and (to exclude the
/// zero matrix corner) no zero eigenvalue; all three read off the chain.
inline bool negdef_by_eigen_bound(const std::vector<std::vector<Int>>& m) {
    if (m.empty()) return true;
    auto q = char_poly(m);
    if (eval_poly(q, Rat(0)).is_zero()) return false; // 0 is an eigenvalue
    Rat bound(1);
    for (const auto& c : q) {
        Rat a = singres::abs(c);
        if (a > bound) bound = a;
    }
    bound += Rat(1);
    return sturm_roots_in(q, Rat(0), bound) == 0;
}

/// Gap count of the numerical semigroup <a,b>, gcd(a,b) = 1: the classical
/// delta invariant of the monomial branch (t^a, t^b).
inline Int semigroup_gaps(long long a, long long b) {
    long long conductor = (a - 1) * (b - 1);
    std::vector<char> member(static_cast<size_t>(conductor) + 1, 0);
    member[0] = 1;
    for (long long v = 1; v <= conductor; ++v) {
        bool in = (v >= a && member[v - a]) || (v >= b && member[v - b]);
        member[v] = in ? 1 : 0;
    }
    Int gaps = 0;
    for (long long v = 1; v <= conductor; ++v)
        if (!member[v]) ++gaps;
    return gaps;
}

} // namespace oracles
