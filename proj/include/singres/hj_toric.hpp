#pragma once

#include <string>
#include <tuple>

#include "singres/cont_frac.hpp"
#include "singres/dual_graph.hpp"
#include "singres/rational.hpp"

namespace singres {

/// Cyclic quotient singularity of order n with parameter k, gcd(n,k) = 1.
/// (1,0) is the smooth germ. Normal quasi-ordinary surface germs are of
/// this type in canonical reduced form, so the pair doubles as the
/// lattice-cone data of the corresponding affine toric surface.
struct CyclicQuotient {
    Int n = 1;
    Int k = 0;

    CyclicQuotient() = default;
    CyclicQuotient(Int n_, Int k_) : n(std::move(n_)), k(std::move(k_)) {
        if (n <= 0) throw range_error("CyclicQuotient: order must be positive");
        if (n == 1) {
            if (k != 0) throw range_error("CyclicQuotient: smooth germ is (1,0)");
        } else {
            if (k <= 0 || k >= n) throw range_error("CyclicQuotient: need 0 < k < n");
            if (gcd(n, k) != 1) throw non_coprime_error("CyclicQuotient: gcd(n,k) != 1");
        }
    }

    bool smooth() const { return n == 1; }
    friend bool operator==(const CyclicQuotient& a, const CyclicQuotient& b) {
        return a.n == b.n && a.k == b.k;
    }
};

/// Quasi-ordinary monomial germ: the surface traced by
/// y = x1^(p1/q1) * x2^(p2/q2), exponents positive and in lowest terms.
struct MonomialGerm {
    Rat e1, e2;

    MonomialGerm(Rat a, Rat b) : e1(std::move(a)), e2(std::move(b)) {
        if (e1.sign() <= 0 || e2.sign() <= 0)
            throw range_error("MonomialGerm: exponents must be positive");
    }
};

struct LemmaReduction {
    Int q1_prime;
    Int k1_prime;
    CyclicQuotient quotient;
    MonomialGerm reduced; // x1^(1/q1') * x2^((q1'-k1')/q1')

    // intermediate data, kept for inspection
    Int d, j1, k1;
};

/// The monomial normalization reduction: from exponents (p1/q1, p2/q2)
/// computes d = gcd(q1,q2), j1 = q1/d, the congruence solution
/// k1*p1 + j1*p2 == 0 (mod q1), and the reduced pair
/// q1' = q1/gcd(q1,k1), k1' = k1/gcd(q1,k1). The germ has the same
/// normalization as x1^(1/q1') * x2^((q1'-k1')/q1'); q1' = 1 is smooth.
inline LemmaReduction lemma_reduce(const MonomialGerm& g) {
    const Int& p1 = g.e1.num();
    const Int& q1 = g.e1.den();
    const Int& p2 = g.e2.num();
    const Int& q2 = g.e2.den();
    Int d = gcd(q1, q2);
    Int j1 = q1 / d;
    Int k1 = solve_congruence(p1, j1 * p2, q1); // gcd(p1,q1)=1 by lowest terms
    Int e = gcd(q1, k1); // k1 = 0 gives e = q1, hence the smooth reduction
    Int q1p = q1 / e;
    Int k1p = k1 / e;
    MonomialGerm reduced(Rat(1, q1p), q1p == 1 ? Rat(1) : Rat(q1p - k1p, q1p));
    return LemmaReduction{q1p, k1p, CyclicQuotient(q1p, k1p), reduced, d, j1, k1};
}

/// Minimal resolution of a cyclic quotient: a segment of rational curves
/// with self-intersections -b_i, the b_i the HJ expansion of n/k.
/// Vertices are named prefix1..prefixr in chain order.
inline DualGraph cyclic_quotient_resolution(const CyclicQuotient& c,
                                            const std::string& prefix = "C") {
    DualGraph g;
    if (c.smooth()) return g;
    HJChain chain = hj_expand(c.n, c.k);
    for (size_t i = 0; i < chain.size(); ++i)
        g.add_vertex(prefix + std::to_string(i + 1), -chain.terms[i]);
    for (size_t i = 0; i + 1 < chain.size(); ++i)
        g.add_edge(prefix + std::to_string(i + 1), prefix + std::to_string(i + 2));
    return g;
}

/// Dual graph of the total transform of x1*x2 = 0 under the minimal
/// resolution of the monomial germ: the chain of the reduced quotient
/// with the strict transform of {x1=0} attached at the first vertex and
/// of {x2=0} at the last. The orientation is fixed by the reduction; the
/// two ends are not interchangeable. Smooth germs give two free arrows.
inline DualGraph figure7_graph(const MonomialGerm& g, const std::string& prefix = "C") {
    LemmaReduction red = lemma_reduce(g);
    DualGraph graph = cyclic_quotient_resolution(red.quotient, prefix);
    if (graph.vertices.empty()) {
        graph.add_arrow(std::nullopt, "x1");
        graph.add_arrow(std::nullopt, "x2");
        return graph;
    }
    graph.add_arrow(graph.vertices.front().id, "x1");
    graph.add_arrow(graph.vertices.back().id, "x2");
    return graph;
}

} // namespace singres
