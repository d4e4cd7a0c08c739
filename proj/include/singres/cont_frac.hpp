#pragma once

#include <optional>
#include <vector>

#include "singres/rational.hpp"

namespace singres {

/// Hirzebruch-Jung continued fraction q/k = b1 - 1/(b2 - 1/(... - 1/br)),
/// every term >= 2. The empty chain stands for the smooth case q = 1.
struct HJChain {
    std::vector<Int> terms;

    bool empty() const { return terms.empty(); }
    size_t size() const { return terms.size(); }

    friend bool operator==(const HJChain& a, const HJChain& b) { return a.terms == b.terms; }
};

/// Expands q/k into a Hirzebruch-Jung continued fraction via the ceiling
/// division recurrence b = ceil(q/k), (q,k) <- (k, b*k - q). Requires
/// gcd(q,k) = 1 and 1 <= k < q; the smooth case is q = 1 with k = 0.
inline HJChain hj_expand(Int q, Int k) {
    if (q == 1 && k == 0) return {};
    if (q <= 0) throw range_error("hj_expand: q must be positive");
    if (k <= 0 || k >= q) throw range_error("hj_expand: need 1 <= k < q");
    if (gcd(q, k) != 1) throw non_coprime_error("hj_expand: gcd(q,k) != 1");
    HJChain chain;
    while (k > 0) {
        Int b = ceil_div(q, k);
        chain.terms.push_back(b);
        Int next = b * k - q;
        q = k;
        k = next;
    }
    return chain;
}

/// Evaluates a chain back to the rational q/k it expands. The empty chain
/// has no finite value (smooth case), reported as nullopt.
inline std::optional<Rat> hj_evaluate(const HJChain& chain) {
    if (chain.empty()) return std::nullopt;
    Rat value(chain.terms.back());
    for (auto it = std::next(chain.terms.rbegin()); it != chain.terms.rend(); ++it)
        value = Rat(*it) - Rat(1) / value; // tails stay > 1, never zero
    return value;
}

/// |det| of the tridiagonal matrix with -b_i on the diagonal and 1 off it;
/// equals the numerator of hj_evaluate. Continuant recurrence
/// p_i = b_i p_{i-1} - p_{i-2}, p_0 = 1.
inline Int chain_determinant(const HJChain& chain) {
    Int prev = 0, cur = 1;
    for (const Int& b : chain.terms) {
        Int next = b * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Extended gcd: returns g = gcd(a,b) and x,y with a*x + b*y = g.
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) { x = (a < 0) ? -1 : 1; y = 0; return abs(a); }
    Int x1, y1;
    Int g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

/// The unique k in [0,n) with k*a + c == 0 (mod n). Requires gcd(a,n) = 1.
inline Int solve_congruence(const Int& a, const Int& c, const Int& n) {
    if (n <= 0) throw range_error("solve_congruence: modulus must be positive");
    Int x, y;
    Int g = ext_gcd(mod_pos(a, n), n, x, y);
    if (g != 1) throw not_invertible_error("solve_congruence: gcd(a,n) != 1");
    return mod_pos(x * (-c), n);
}

} // namespace singres
