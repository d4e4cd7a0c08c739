#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "singres/poly.hpp"
#include "singres/rational.hpp"
#include "singres/series.hpp"

namespace singres {

/// Puiseux parametrization of one local branch: x = t^m, y = sum a_k t^k,
/// primitive (gcd of m and the exponents is 1). The y-axis branch x = 0,
/// which no such normal form reaches, is carried with the vertical flag
/// (m, coeffs then describe y = t).
struct PuiseuxBranch {
    bool vertical = false;
    long long m = 1;
    std::map<long long, Rat> coeffs;
    bool exact = false;     // the series terminates: all later coefficients vanish
    long long trunc = 0;    // certified exponent bound when not exact

    Series x_series() const {
        if (vertical) return Series::exact_zero();
        return Series::power(m);
    }
    Series y_series() const {
        if (vertical) return Series::power(1);
        std::vector<Rat> c;
        for (const auto& [k, a] : coeffs) {
            if (static_cast<long long>(c.size()) <= k) c.resize(static_cast<size_t>(k) + 1);
            c[static_cast<size_t>(k)] = a;
        }
        return Series::from_coeffs(std::move(c), exact ? Series::kExact : trunc + 1);
    }

    /// min(m, ord y): the multiplicity of the branch germ at the origin.
    long long multiplicity() const {
        if (vertical) return 1;
        if (coeffs.empty()) return m; // the x-axis
        return std::min(m, coeffs.begin()->first);
    }

    bool passes_through_origin() const {
        return vertical || (m >= 1 && (coeffs.empty() || coeffs.begin()->first >= 1));
    }

    bool primitive() const {
        if (vertical) return true;
        Int g = m;
        for (const auto& [k, a] : coeffs) g = gcd(g, Int(k));
        return g == 1;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        if (vertical) {
            j["vertical"] = true;
            return j;
        }
        j["m"] = m;
        j["coeffs"] = nlohmann::json::object();
        for (const auto& [k, a] : coeffs) j["coeffs"][std::to_string(k)] = a.str();
        j["trunc"] = exact ? -1 : trunc;
        return j;
    }
    static PuiseuxBranch from_json(const nlohmann::json& j) {
        PuiseuxBranch b;
        if (j.value("vertical", false)) {
            b.vertical = true;
            return b;
        }
        b.m = j.at("m").get<long long>();
        for (auto it = j.at("coeffs").begin(); it != j.at("coeffs").end(); ++it)
            b.coeffs[std::stoll(it.key())] = Rat::parse(it.value().get<std::string>());
        long long tr = j.at("trunc").get<long long>();
        b.exact = (tr < 0);
        b.trunc = b.exact ? 0 : tr;
        return b;
    }

    friend bool operator==(const PuiseuxBranch& a, const PuiseuxBranch& b) {
        return a.vertical == b.vertical && a.m == b.m && a.coeffs == b.coeffs &&
               a.exact == b.exact && (a.exact || a.trunc == b.trunc);
    }
};

namespace detail {

/// Renders a univariate polynomial (stored in the x slot) with the letter
/// conventionally used for characteristic roots.
inline std::string char_poly_str(const Poly& p) {
    std::string s = p.str();
    std::string out;
    for (char ch : s) out += (ch == 'x') ? 'c' : ch;
    return out;
}

/// Rational roots of a univariate polynomial (x slot) with multiplicities;
/// returns the root-free cofactor.
inline std::vector<std::pair<Rat, int>> rational_roots(Poly& p) {
    std::vector<std::pair<Rat, int>> roots;
    if (p.degree(0) < 1) return roots;
    // clear denominators
    Int den = 1;
    for (const auto& [e, c] : p.terms()) den = lcm(den, c.den());
    Poly ip = p * Rat(den);
    // trailing and leading integer coefficients
    int low = ip.order(0), high = ip.degree(0);
    if (low > 0) throw internal_inconsistency_error("rational_roots: zero root present");
    Int a0 = abs(ip.coefficient({low, 0, 0}).num());
    Int al = abs(ip.coefficient({high, 0, 0}).num());
    auto divisors = [](const Int& v) {
        std::vector<Int> ds;
        if (v > 1000000000000LL)
            throw computation_error("characteristic coefficient too large to factor");
        long long n = v.convert_to<long long>();
        for (long long d = 1; d * d <= n; ++d)
            if (n % d == 0) {
                ds.push_back(d);
                if (d != n / d) ds.push_back(n / d);
            }
        return ds;
    };
    for (const Int& pn : divisors(a0)) {
        for (const Int& qn : divisors(al)) {
            if (gcd(pn, qn) != 1) continue;
            for (int s : {1, -1}) {
                Rat cand(s * pn, qn);
                if (!p.eval(cand, Rat(0)).is_zero()) continue;
                int mult = 0;
                Poly lin = Poly::variable(0) - Poly(cand);
                for (;;) {
                    auto q = p.divide_exact(lin);
                    if (!q) break;
                    p = *q;
                    ++mult;
                }
                if (mult > 0) roots.push_back({cand, mult});
            }
        }
    }
    return roots;
}

/// F(x^q, x^p (c0 + y)) divided by the minimal x power.
inline Poly np_transform(const Poly& F, long long q, long long p, const Rat& c0) {
    int dy = F.degree(1);
    std::vector<Poly> cpow(static_cast<size_t>(dy) + 1);
    cpow[0] = Poly(1);
    Poly base = Poly(c0) + Poly::variable(1);
    for (int j = 1; j <= dy; ++j) cpow[static_cast<size_t>(j)] = cpow[static_cast<size_t>(j - 1)] * base;
    long long minexp = -1;
    for (const auto& [e, c] : F.terms()) {
        long long ex = q * e[0] + p * e[1];
        if (minexp < 0 || ex < minexp) minexp = ex;
    }
    Poly out;
    for (const auto& [e, c] : F.terms()) {
        long long ex = q * e[0] + p * e[1] - minexp;
        if (ex > (1 << 20)) throw internal_inconsistency_error("np_transform: exponent blow-up");
        out += Poly::monomial({static_cast<int>(ex), 0, 0}, c) * cpow[static_cast<size_t>(e[1])];
    }
    return out;
}

/// Solves F(x, s(x)) = 0 with s(0) = 0 by Newton iteration; requires a
/// simple root: F(0,0) = 0, dF/dy(0,0) != 0. Returns s certified to
/// `window` coefficients.
inline Series newton_tail(const Poly& F, long long window) {
    if (!F.coefficient({0, 0, 0}).is_zero() || F.coefficient({0, 1, 0}).is_zero())
        throw internal_inconsistency_error("newton_tail: not a simple-root configuration");
    Poly Fy = F.derivative(1);
    Series t = Series::power(1);
    Series s = Series::exact_zero(); // correct mod t^1
    long long prec = 1;
    while (prec < window) {
        prec = std::min(2 * prec, window);
        Series fs = eval_poly_at(F, t, s, prec);
        Series ds = eval_poly_at(Fy, t, s, prec);
        Series upd = (fs * ds.inverse(prec)).truncated(prec);
        // s is used as an exact polynomial approximant at each step
        s = Series::from_coeffs((s - upd).truncated(prec).coeffs(), Series::kExact);
    }
    Series check = eval_poly_at(F, t, s, window);
    for (const Rat& c : check.coeffs())
        if (!c.is_zero()) throw internal_inconsistency_error("newton_tail: residual nonzero");
    bool poly_root = eval_poly_at(F, t, s, 4 * window + 8).coeffs().empty();
    return Series::from_coeffs(s.coeffs(), poly_root ? Series::kExact : window);
}

struct RawBranch {
    long long m;
    Series y;
};

/// A cluster of `count` conjugate smooth branches y = prefix(x) + c x^mu (1+...)
/// where c runs over the roots of the squarefree rational-root-free psi.
/// Their tails are never needed: each separates alone, smooth and
/// transverse, at a point that is not a center.
struct RawPacket {
    Series prefix;  // exact, exponents < mu
    long long mu;
    Poly psi;       // univariate in the x slot
    int count;
};

struct RawExpansion {
    std::vector<RawBranch> branches;
    std::vector<RawPacket> packets;
};

inline RawExpansion np_expand(const Poly& Fin, long long window, bool ram_above, int depth) {
    if (depth > 512) throw internal_inconsistency_error("newton-puiseux recursion too deep");
    RawExpansion out;
    Poly F = Fin;
    if (F.coeff_of(1, 0).is_zero()) { // y divides F: the branch y = 0 ends here
        out.branches.push_back({1, Series::exact_zero()});
        F = *F.divide_exact(Poly::variable(1));
        if (F.coeff_of(1, 0).is_zero())
            throw internal_inconsistency_error("np_expand: repeated y factor");
    }
    if (F.is_constant()) return out;
    // local y-multiplicity
    long long d = -1;
    for (const auto& [e, c] : F.terms())
        if (e[0] == 0) d = (d < 0) ? e[1] : std::min<long long>(d, e[1]);
    if (d < 0) throw internal_inconsistency_error("np_expand: x divides the transform");
    if (d == 0) return out; // unit: nothing through the origin

    auto polygon = newton_polygon(F);
    for (const auto& edge : polygon.edges) {
        if (!edge.inclination) continue;
        long long p = edge.inclination->num().convert_to<long long>();
        long long q = edge.inclination->den().convert_to<long long>();
        auto [i0, j0] = edge.from;
        auto [i1, j1] = edge.to;
        long long ell = (j0 - j1) / q;
        Poly psi;
        for (long long nu = 0; nu <= ell; ++nu) {
            Rat a = F.coefficient({static_cast<int>(i0 + nu * p),
                                   static_cast<int>(j0 - nu * q), 0});
            if (!a.is_zero())
                psi.add_term({static_cast<int>(ell - nu), 0, 0}, a);
        }
        Poly rest = psi;
        auto roots = rational_roots(rest);
        for (const auto& [u0, r] : roots) {
            std::optional<Rat> c0;
            if (q == 1)
                c0 = u0;
            else
                c0 = exact_root(u0, static_cast<unsigned>(q));
            if (!c0)
                throw irrational_coefficient_error(
                    "branch coefficient is a degree-" + std::to_string(q) +
                    " root outside the rationals", char_poly_str(psi));
            Poly F1 = np_transform(F, q, p, *c0);
            if (r == 1) {
                Series s = newton_tail(F1, window);
                Series ys = (Series::constant(*c0) + s).shifted_up(p);
                out.branches.push_back({q, ys});
            } else {
                RawExpansion sub = np_expand(F1, window, ram_above || q > 1, depth + 1);
                for (const auto& rb : sub.branches) {
                    Series ys = (Series::constant(*c0) + rb.y).shifted_up(p * rb.m);
                    out.branches.push_back({q * rb.m, ys});
                }
                for (const auto& pk : sub.packets) {
                    if (q > 1)
                        throw irrational_coefficient_error(
                            "conjugate cluster under ramification", char_poly_str(pk.psi));
                    out.packets.push_back({(Series::constant(*c0) + pk.prefix).shifted_up(p),
                                           pk.mu + p, pk.psi, pk.count});
                }
            }
        }
        if (rest.degree(0) >= 1) {
            Poly der = rest.derivative(0);
            bool squarefree = gcd_univariate(rest, der, 0).is_constant();
            if (q == 1 && !ram_above && squarefree) {
                out.packets.push_back(
                    {Series::exact_zero(), p, rest.primitive_normalized(),
                     rest.degree(0)});
            } else {
                throw irrational_coefficient_error(
                    squarefree ? "branch coefficients outside the rationals"
                               : "conjugate branches separate at an irrational coefficient",
                    char_poly_str(rest));
            }
        }
    }
    return out;
}

struct GermExpansion {
    bool vertical = false;              // f had the component x = 0
    std::vector<RawBranch> branches;    // x = t^m, y as series
    std::vector<RawPacket> packets;
    long long window = 0;
};

inline GermExpansion expand_poly_germ(const Poly& f, long long window) {
    if (f.is_zero()) throw zero_polynomial_error("expand: zero polynomial");
    if (!f.eval(Rat(0), Rat(0)).is_zero())
        throw inconsistent_input_error("germ does not pass through the origin");
    GermExpansion out;
    out.window = window;
    Poly F = f;
    int a = F.order(0);
    if (a > 1) throw not_reduced_error("repeated factor x in the defining polynomial");
    if (a == 1) {
        out.vertical = true;
        F = *F.divide_exact(Poly::variable(0));
    }
    auto raw = np_expand(F, window, false, 0);
    out.branches = std::move(raw.branches);
    out.packets = std::move(raw.packets);
    return out;
}

inline PuiseuxBranch to_branch(const RawBranch& rb) {
    PuiseuxBranch b;
    b.m = rb.m;
    const auto& cs = rb.y.coeffs();
    for (size_t k = 0; k < cs.size(); ++k)
        if (!cs[k].is_zero()) b.coeffs[static_cast<long long>(k)] = cs[k];
    b.exact = rb.y.exact();
    b.trunc = b.exact ? 0 : rb.y.certified() - 1;
    return b;
}

} // namespace detail

/// Newton-Puiseux expansion of a squarefree germ: one branch per local
/// analytic component, rational coefficients, truncated at or beyond the
/// requested order. The iteration works over the rationals only; a
/// required irrational root raises irrational_coefficient_error carrying
/// the offending characteristic polynomial.
inline std::vector<PuiseuxBranch> puiseux_branches(const Poly& f, long long order = 32) {
    if (f.is_zero()) throw zero_polynomial_error("puiseux_branches: zero polynomial");
    if (!is_squarefree(f)) throw not_squarefree_error("puiseux_branches: not squarefree");
    auto exp = detail::expand_poly_germ(f, order + 1);
    if (!exp.packets.empty())
        throw irrational_coefficient_error("branch coefficients outside the rationals",
                                           detail::char_poly_str(exp.packets[0].psi));
    std::vector<PuiseuxBranch> out;
    if (exp.vertical) {
        PuiseuxBranch v;
        v.vertical = true;
        out.push_back(v);
    }
    for (const auto& rb : exp.branches) out.push_back(detail::to_branch(rb));
    for (const auto& b : out)
        if (!b.primitive())
            throw internal_inconsistency_error("non-primitive branch produced");
    return out;
}

/// A plane curve germ at the origin, defined either by a squarefree
/// polynomial (branches computed on demand, cached at the widest window
/// seen) or directly by a list of branches.
class CurveGerm {
    std::optional<Poly> f_;
    mutable std::optional<detail::GermExpansion> cache_;
    std::vector<PuiseuxBranch> given_;

public:
    explicit CurveGerm(Poly f) : f_(std::move(f)) {
        if (f_->is_zero()) throw zero_polynomial_error("CurveGerm: zero polynomial");
        if (f_->uses(2)) throw range_error("CurveGerm: expected a polynomial in x,y");
        if (!f_->eval(Rat(0), Rat(0)).is_zero())
            throw inconsistent_input_error("CurveGerm: germ does not pass through the origin");
        if (!is_squarefree(*f_)) throw not_reduced_error("CurveGerm: not reduced");
    }
    explicit CurveGerm(std::vector<PuiseuxBranch> branches) : given_(std::move(branches)) {
        if (given_.empty()) throw inconsistent_input_error("CurveGerm: no branches");
        for (const auto& b : given_) {
            if (!b.passes_through_origin())
                throw inconsistent_input_error("CurveGerm: branch misses the origin");
            if (!b.primitive())
                throw inconsistent_input_error("CurveGerm: branch not primitive");
        }
    }

    bool polynomial_backed() const { return f_.has_value(); }
    const Poly& poly() const {
        if (!f_) throw inconsistent_input_error("CurveGerm: no defining polynomial");
        return *f_;
    }

    /// Expansion with at least the requested certified window; cached.
    const detail::GermExpansion& expansion(long long window) const {
        if (!f_) throw internal_inconsistency_error("expansion of a branch-backed germ");
        if (!cache_ || cache_->window < window)
            cache_ = detail::expand_poly_germ(*f_, window);
        return *cache_;
    }

    /// User-facing branches, truncated at >= order. Branch-backed germs
    /// return their branches as given.
    std::vector<PuiseuxBranch> branches(long long order = 32) const {
        if (!f_) return given_;
        const auto& exp = expansion(order + 1);
        if (!exp.packets.empty())
            throw irrational_coefficient_error("branch coefficients outside the rationals",
                                               detail::char_poly_str(exp.packets[0].psi));
        std::vector<PuiseuxBranch> out;
        if (exp.vertical) {
            PuiseuxBranch v;
            v.vertical = true;
            out.push_back(v);
        }
        for (const auto& rb : exp.branches) out.push_back(detail::to_branch(rb));
        return out;
    }
};

// ---- intersection multiplicities ----

namespace detail {

/// Minimal polynomial (truncated) of a branch: the product of y - psi(zeta u)
/// over the conjugates, computed as a resultant so everything stays
/// rational. u occupies the z slot during the computation.
inline Poly branch_poly(const PuiseuxBranch& b) {
    if (b.vertical) return Poly::variable(0); // x = 0
    Poly psi_mod; // y - sum a_k x^(k/m rounded) u^(k mod m)
    for (const auto& [k, a] : b.coeffs) {
        long long quo = k / b.m, rem = k % b.m;
        psi_mod += Poly::monomial({static_cast<int>(quo), 0, static_cast<int>(rem)}, a);
    }
    Poly g = Poly::variable(1) - psi_mod;
    Poly um = Poly::variable(2, static_cast<int>(b.m)) - Poly::variable(0);
    return resultant(um, g, 2);
}

} // namespace detail

constexpr long long kInfinity = -1; // sentinel used in the optional-free helpers

/// Intersection multiplicity of a branch with a polynomial germ:
/// ord_t g(x(t), y(t)). nullopt encodes infinity (the branch lies in g).
inline std::optional<Int> intersection_multiplicity(const PuiseuxBranch& a, const Poly& g) {
    if (g.is_zero()) return std::nullopt;
    long long w = a.vertical ? g.degree(1) + 2
                             : (a.exact ? 0 : a.trunc + 1);
    if (!a.vertical && a.exact) {
        // exact parametrization: the composite is a polynomial, bound its degree
        long long ymax = a.coeffs.empty() ? 0 : a.coeffs.rbegin()->first;
        w = g.degree(0) * a.m + g.degree(1) * std::max(ymax, a.m) + 2;
    }
    Series val = eval_poly_at(g, a.x_series(), a.y_series(), w);
    auto o = val.ord();
    if (!o) return std::nullopt;
    return Int(*o);
}

/// Intersection multiplicity of two branches. The defining function of b
/// is reconstructed from its parametrization (exactly when b is exact, to
/// certified order otherwise), then composed with a.
inline std::optional<Int> intersection_multiplicity(const PuiseuxBranch& a,
                                                    const PuiseuxBranch& b) {
    if (a.vertical && b.vertical) return std::nullopt;
    if (a.vertical || b.vertical) {
        const PuiseuxBranch& n = a.vertical ? b : a;
        return Int(n.m); // ord of x = t^m along the axis x = 0
    }
    if (a.exact && b.exact && a.m == b.m && a.coeffs == b.coeffs) return std::nullopt;
    Poly fb = detail::branch_poly(b);
    auto res = intersection_multiplicity(a, fb);
    if (!res) {
        if (b.exact) return std::nullopt;
        throw truncation_insufficient_error("branches agree to the certified order");
    }
    if (!b.exact) {
        // the reconstructed polynomial is only trusted below this order
        Rat bound = Rat((b.trunc + 1) * a.m, b.m);
        if (Rat(*res) >= bound)
            throw truncation_insufficient_error("intersection exceeds certified order");
    }
    return res;
}

/// Intersection multiplicity of two germs: sum over pairs of branches.
/// Polynomial-backed germs share a component iff their gcd vanishes at the
/// origin, which reports infinity.
inline std::optional<Int> intersection_multiplicity(const CurveGerm& a, const CurveGerm& b,
                                                    long long order = 32) {
    if (a.polynomial_backed() && b.polynomial_backed()) {
        Poly g = gcd_bivariate(a.poly(), b.poly());
        if (!g.is_constant() && g.eval(Rat(0), Rat(0)).is_zero()) return std::nullopt;
        Int total = 0;
        for (const auto& br : a.branches(order)) {
            auto v = intersection_multiplicity(br, b.poly());
            if (!v) return std::nullopt;
            total += *v;
        }
        return total;
    }
    const CurveGerm& germ_a = a;
    Int total = 0;
    for (const auto& ba : germ_a.branches(order)) {
        if (b.polynomial_backed()) {
            auto v = intersection_multiplicity(ba, b.poly());
            if (!v) return std::nullopt;
            total += *v;
        } else {
            for (const auto& bb : b.branches(order)) {
                auto v = intersection_multiplicity(ba, bb);
                if (!v) return std::nullopt;
                total += *v;
            }
        }
    }
    return total;
}

// ---- single-branch blow-up calculus ----

/// A branch germ at the current center of a blow-up process, in local
/// coordinates: a parametrized pair of series. The axis x = 0 is the exact
/// zero x series.
struct Fragment {
    Series x, y;

    std::optional<long long> ord_x() const { return x.ord(); }
    std::optional<long long> ord_y() const { return y.ord(); }

    long long multiplicity() const {
        auto a = ord_x(), b = ord_y();
        if (!a && !b) throw internal_inconsistency_error("zero fragment");
        if (!a) return *b;
        if (!b) return *a;
        return std::min(*a, *b);
    }
};

namespace detail {

/// y / x as series, exact window bookkeeping included.
inline Series series_quotient(const Series& num, const Series& den, long long window) {
    long long k = den.ord_floor();
    if (k == Series::kExact) throw internal_inconsistency_error("division by zero series");
    Series unit = den.shifted_down(k);
    return (num * unit.inverse(window)).truncated(window + k).shifted_down(k);
}

enum class Chart { XChart, YChart, Translated };

/// One blow-up step on a fragment. Returns the chart the strict transform
/// lands in; for the translated chart the direction c is reported.
inline Chart blow_up_fragment(Fragment& fr, long long window, Rat* c_out = nullptr) {
    auto a = fr.ord_x(), b = fr.ord_y();
    if (!a && !b) throw internal_inconsistency_error("blow_up_fragment: zero fragment");
    if (a && b && *a == *b) {
        Rat c = fr.y.coeff(*b) / fr.x.coeff(*a);
        Series yq = series_quotient(fr.y, fr.x, window);
        fr.y = yq - Series::constant(c);
        if (c_out) *c_out = c;
        return Chart::Translated;
    }
    if (!b || (a && *a < *b)) { // tangent to y = 0: chart (x, y/x)
        fr.y = series_quotient(fr.y, fr.x, window);
        return Chart::XChart;
    }
    fr.x = series_quotient(fr.x, fr.y, window);
    return Chart::YChart;
}

} // namespace detail

/// Multiplicities of the successive strict transforms of one branch at the
/// centers it passes through, up to the stage where it is smooth and
/// transverse to the exceptional locus.
inline std::vector<Int> multiplicity_sequence(const PuiseuxBranch& branch) {
    if (!branch.primitive())
        throw inconsistent_input_error("multiplicity_sequence: branch not primitive");
    long long window = branch.vertical || branch.exact ? 64 : branch.trunc + 1;
    Fragment fr{branch.x_series(), branch.y_series()};
    bool excA = false, excB = false; // local {x=0} and {y=0} exceptional components
    std::vector<Int> seq;
    for (int guard = 0;; ++guard) {
        if (guard > 4096) throw internal_inconsistency_error("multiplicity sequence runaway");
        long long m = fr.multiplicity();
        auto a = fr.ord_x(), b = fr.ord_y();
        bool tangent = (excA && (!a || *a >= 2)) || (excB && (!b || *b >= 2));
        bool center = m >= 2 || (excA && excB) || tangent;
        if (seq.empty() || center) seq.push_back(Int(m));
        if (!center) break;
        auto chart = detail::blow_up_fragment(fr, window);
        switch (chart) {
            case detail::Chart::XChart: excA = true; /* excB persists */ break;
            case detail::Chart::YChart: excB = true; /* excA persists */ break;
            case detail::Chart::Translated: excA = true; excB = false; break;
        }
    }
    return seq;
}

/// Retries fn with doubled expansion order on truncation shortfalls.
template <typename Fn>
auto with_reexpansion(long long order, long long max_order, Fn&& fn) {
    for (;;) {
        try {
            return fn(order);
        } catch (const truncation_insufficient_error&) {
            if (order >= max_order) throw;
            order = std::min(order * 2, max_order);
        }
    }
}

} // namespace singres
