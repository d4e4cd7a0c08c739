#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "singres/rational.hpp"

namespace singres {

/// Sparse exact polynomial in up to three variables x, y, z over the
/// rationals. Terms map exponent triples to nonzero coefficients; zero
/// coefficients are never stored. The map is keyed lexicographically,
/// printing uses total degree then lex so "y^2 - x^3" reads naturally.
class Poly {
public:
    using Exps = std::array<int, 3>;

    static constexpr const char* var_names[3] = {"x", "y", "z"};

private:
    std::map<Exps, Rat> terms_;

public:
    Poly() = default;
    Poly(const Rat& c) {
        if (!c.is_zero()) terms_[{0, 0, 0}] = c;
    }
    Poly(long long c) : Poly(Rat(c)) {}

    static Poly variable(int v, int e = 1) {
        Poly p;
        Exps ex{0, 0, 0};
        ex[v] = e;
        p.terms_[ex] = Rat(1);
        return p;
    }
    static Poly monomial(const Exps& e, const Rat& c) {
        Poly p;
        if (!c.is_zero()) p.terms_[e] = c;
        return p;
    }

    const std::map<Exps, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && terms_.begin()->first == Exps{0, 0, 0});
    }
    Rat constant_value() const {
        auto it = terms_.find({0, 0, 0});
        return it == terms_.end() ? Rat(0) : it->second;
    }

    Rat coefficient(const Exps& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    int degree(int v) const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, e[v]);
        return d; // -1 for the zero polynomial
    }
    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
        return d;
    }
    /// Order of vanishing in variable v (minimal exponent), -1 if zero.
    int order(int v) const {
        int d = -1;
        for (const auto& [e, c] : terms_)
            d = (d < 0) ? e[v] : std::min(d, e[v]);
        return d;
    }
    bool uses(int v) const { return degree(v) > 0; }

    void add_term(const Exps& e, const Rat& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_[e] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        Poly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }
    friend Poly operator-(const Poly& a) { return Poly() - a; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_)
                r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
        return r;
    }
    friend Poly operator*(const Poly& a, const Rat& c) { return a * Poly(c); }
    Poly& operator+=(const Poly& b) { return *this = *this + b; }
    Poly& operator-=(const Poly& b) { return *this = *this - b; }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(int e) const {
        Poly r(1), base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    Poly derivative(int v) const {
        Poly r;
        for (const auto& [e, c] : terms_) {
            if (e[v] == 0) continue;
            Exps ne = e;
            ne[v] -= 1;
            r.add_term(ne, c * Rat(e[v]));
        }
        return r;
    }

    /// Coefficient of var^k, a polynomial in the remaining variables.
    Poly coeff_of(int v, int k) const {
        Poly r;
        for (const auto& [e, c] : terms_) {
            if (e[v] != k) continue;
            Exps ne = e;
            ne[v] = 0;
            r.add_term(ne, c);
        }
        return r;
    }

    Poly leading_coeff(int v) const { return coeff_of(v, degree(v)); }

    /// Substitutes a polynomial for variable v.
    Poly substitute(int v, const Poly& value) const {
        int d = degree(v);
        if (d <= 0 && !uses(v)) return *this;
        // Horner on the coefficients in v
        Poly r;
        for (int k = d; k >= 0; --k) r = r * value + coeff_of(v, k);
        return r;
    }

    Rat eval(const Rat& x, const Rat& y, const Rat& z = Rat(0)) const {
        Rat r;
        for (const auto& [e, c] : terms_)
            r += c * singres::pow(x, e[0]) * singres::pow(y, e[1]) * singres::pow(z, e[2]);
        return r;
    }

    /// Lex-leading term (the division order).
    std::pair<Exps, Rat> lead() const {
        auto it = terms_.rbegin();
        return {it->first, it->second};
    }

    /// Exact division: quotient q with *this == q*g, if it exists.
    std::optional<Poly> divide_exact(const Poly& g) const {
        if (g.is_zero()) return std::nullopt;
        Poly rem = *this, q;
        auto [ge, gc] = g.lead();
        while (!rem.is_zero()) {
            auto [re, rc] = rem.lead();
            Exps t;
            for (int i = 0; i < 3; ++i) {
                t[i] = re[i] - ge[i];
                if (t[i] < 0) return std::nullopt;
            }
            Poly m = monomial(t, rc / gc);
            q += m;
            rem -= m * g;
        }
        return q;
    }

    /// Scales to coprime integer coefficients with positive lex-leading
    /// coefficient; the canonical representative up to units.
    Poly primitive_normalized() const {
        if (is_zero()) return *this;
        Int den = 1, num = 0;
        for (const auto& [e, c] : terms_) {
            den = lcm(den, c.den());
            num = gcd(num, abs(c.num()));
        }
        Rat scale(den, num);
        if (lead().second.sign() < 0) scale = -scale;
        Poly r;
        for (const auto& [e, c] : terms_) r.terms_[e] = c * scale;
        return r;
    }

    std::string str() const;
};

// ---- canonical printing ----

inline std::string Poly::str() const {
    if (terms_.empty()) return "0";
    // total degree ascending, lex descending inside a degree
    std::vector<std::pair<Exps, Rat>> ordered(terms_.begin(), terms_.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        int da = a.first[0] + a.first[1] + a.first[2];
        int db = b.first[0] + b.first[1] + b.first[2];
        if (da != db) return da < db;
        return a.first > b.first;
    });
    std::string out;
    bool first = true;
    for (const auto& [e, c] : ordered) {
        Rat coeff = c;
        if (first) {
            if (coeff.sign() < 0) {
                out += "-";
                coeff = -coeff;
            }
            first = false;
        } else {
            out += coeff.sign() < 0 ? " - " : " + ";
            if (coeff.sign() < 0) coeff = -coeff;
        }
        std::string mon;
        for (int v = 0; v < 3; ++v) {
            if (e[v] == 0) continue;
            if (!mon.empty()) mon += "*";
            mon += var_names[v];
            if (e[v] > 1) mon += "^" + std::to_string(e[v]);
        }
        if (mon.empty()) {
            out += coeff.str();
        } else if (coeff == Rat(1)) {
            out += mon;
        } else {
            out += coeff.str() + "*" + mon;
        }
    }
    return out;
}

// ---- parser ----

namespace detail {

class PolyParser {
    const std::string& text_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Int read_uint() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw syntax_error("expected a number", pos_);
        return Int(text_.substr(start, pos_ - start));
    }

    Poly base() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Poly inner = expr();
            if (!eat(')')) throw syntax_error("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Int num = read_uint();
            size_t save = pos_;
            if (eat('/')) {
                if (std::isdigit(static_cast<unsigned char>(peek()))) {
                    Int den = read_uint();
                    if (den == 0) throw syntax_error("zero denominator", save);
                    return Poly(Rat(num, den));
                }
                pos_ = save; // '/' was not a rational literal
            }
            return Poly(Rat(num));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            for (int v = 0; v < 3; ++v)
                if (name == Poly::var_names[v]) return Poly::variable(v);
            throw unknown_variable_error("unknown variable '" + name + "'");
        }
        throw syntax_error("unexpected character", pos_);
    }

    Poly factor() {
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        Poly b = base();
        if (eat('^')) {
            size_t at = pos_;
            Int e = read_uint();
            if (e > 512) throw syntax_error("exponent too large", at);
            return b.pow(e.convert_to<int>());
        }
        return b;
    }

    Poly term() {
        Poly p = factor();
        while (eat('*')) p *= factor();
        return p;
    }

    Poly expr() {
        Poly p = term();
        for (;;) {
            if (eat('+'))
                p += term();
            else if (eat('-'))
                p -= term();
            else
                return p;
        }
    }

public:
    explicit PolyParser(const std::string& t) : text_(t) {}

    Poly parse() {
        Poly p = expr();
        skip_ws();
        if (pos_ != text_.size()) throw syntax_error("trailing input", pos_);
        return p;
    }
};

} // namespace detail

/// Parses the polynomial grammar: integers, rationals "a/b", variables
/// x,y,z, ^, *, +, -, parentheses. Total on the grammar; positions in
/// errors refer to byte offsets in the input.
inline Poly parse_poly(const std::string& text) {
    return detail::PolyParser(text).parse();
}

// ---- resultants and discriminants ----

/// Resultant of f and g with respect to var: determinant of the Sylvester
/// matrix, computed by fraction-free elimination so polynomial entries
/// stay exact.
inline Poly resultant(const Poly& f, const Poly& g, int var) {
    int df = f.degree(var), dg = g.degree(var);
    if (f.is_zero() || g.is_zero()) return Poly(0);
    if (df <= 0 && dg <= 0) return Poly(1); // both constant in var
    if (df < 0 || dg < 0) return Poly(0);
    if (df == 0) return f.pow(dg);
    if (dg == 0) return g.pow(df);
    size_t n = static_cast<size_t>(df + dg);
    std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n, Poly(0)));
    for (int r = 0; r < dg; ++r)
        for (int k = 0; k <= df; ++k) m[r][r + df - k] = f.coeff_of(var, k);
    for (int r = 0; r < df; ++r)
        for (int k = 0; k <= dg; ++k) m[dg + r][r + dg - k] = g.coeff_of(var, k);

    // Bareiss over the polynomial ring
    Poly sign(1), prev(1);
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            size_t p = k + 1;
            while (p < n && m[p][k].is_zero()) ++p;
            if (p == n) return Poly(0);
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                Poly num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                auto q = num.divide_exact(prev);
                if (!q)
                    throw internal_inconsistency_error("bareiss: inexact division");
                m[i][j] = std::move(*q);
            }
            m[i][k] = Poly(0);
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

/// Discriminant with respect to var, normalized to the canonical primitive
/// representative (discriminants of the paper live up to units). Requires
/// a constant leading coefficient in var: the finiteness condition for the
/// projection forgetting var.
inline Poly discriminant_wrt(const Poly& f, int var) {
    int d = f.degree(var);
    if (d <= 0) throw not_unitary_error("discriminant: no positive degree in variable");
    if (!f.leading_coeff(var).is_constant())
        throw not_unitary_error("discriminant: leading coefficient is not constant");
    Poly res = resultant(f, f.derivative(var), var);
    return res.primitive_normalized();
}

// ---- gcd ----

/// Gcd of univariate polynomials in variable v (inputs must not use the
/// other variables). Result is primitive with positive leading coefficient.
inline Poly gcd_univariate(Poly a, Poly b, int v) {
    while (!b.is_zero()) {
        // plain remainder over Q, renormalized each step
        int da = a.degree(v), db = b.degree(v);
        if (da < db) {
            std::swap(a, b);
            continue;
        }
        Poly r = a;
        while (!r.is_zero() && r.degree(v) >= b.degree(v)) {
            int dr = r.degree(v), dbb = b.degree(v);
            Rat fac = r.leading_coeff(v).constant_value() / b.leading_coeff(v).constant_value();
            r -= Poly::variable(v, dr - dbb) * b * fac;
        }
        a = b;
        b = r.primitive_normalized();
    }
    return a.primitive_normalized();
}

namespace detail {

/// Content of f viewed in Q[other][v]: gcd of the coefficients of v-powers.
inline Poly content_wrt(const Poly& f, int v, int other) {
    Poly c;
    for (int k = 0; k <= f.degree(v); ++k) {
        Poly ck = f.coeff_of(v, k);
        if (ck.is_zero()) continue;
        c = c.is_zero() ? ck.primitive_normalized() : gcd_univariate(c, ck, other);
        if (c.is_constant()) return Poly(1);
    }
    return c.is_zero() ? Poly(0) : c;
}

} // namespace detail

/// Gcd of polynomials in at most the two variables vx, vy, computed with a
/// primitive pseudo-remainder sequence. Canonical primitive output.
inline Poly gcd_bivariate(const Poly& a, const Poly& b, int vx = 0, int vy = 1) {
    if (a.is_zero()) return b.primitive_normalized();
    if (b.is_zero()) return a.primitive_normalized();
    if (!a.uses(vy) && !b.uses(vy)) return gcd_univariate(a, b, vx);
    if (!a.uses(vy)) return gcd_univariate(a, detail::content_wrt(b, vy, vx), vx);
    if (!b.uses(vy)) return gcd_univariate(b, detail::content_wrt(a, vy, vx), vx);

    Poly ca = detail::content_wrt(a, vy, vx);
    Poly cb = detail::content_wrt(b, vy, vx);
    Poly cont = gcd_univariate(ca, cb, vx);
    Poly f = *a.divide_exact(ca);
    Poly g = *b.divide_exact(cb);
    if (f.degree(vy) < g.degree(vy)) std::swap(f, g);
    while (!g.is_zero()) {
        // pseudo-remainder of f by g in vy
        Poly r = f;
        Poly glc = g.leading_coeff(vy);
        int dg = g.degree(vy);
        while (!r.is_zero() && r.degree(vy) >= dg) {
            int dr = r.degree(vy);
            Poly rlc = r.leading_coeff(vy);
            r = r * glc - g * rlc * Poly::variable(vy, dr - dg);
        }
        f = g;
        if (!r.is_zero()) {
            Poly cr = detail::content_wrt(r, vy, vx);
            r = *r.divide_exact(cr);
        }
        g = r.primitive_normalized();
    }
    return (cont * f).primitive_normalized();
}

/// True iff the bivariate polynomial has no repeated factor:
/// gcd(f, df/dx, df/dy) is constant.
inline bool is_squarefree(const Poly& f) {
    if (f.is_zero()) throw zero_polynomial_error("is_squarefree: zero polynomial");
    if (f.uses(2)) throw range_error("is_squarefree: expected a polynomial in x,y");
    Poly g = gcd_bivariate(f, f.derivative(0));
    g = gcd_bivariate(g, f.derivative(1));
    return g.is_constant();
}

/// Squarefree part f / gcd(f, fx, fy) of a bivariate polynomial.
inline Poly squarefree_part(const Poly& f) {
    if (f.is_zero()) throw zero_polynomial_error("squarefree_part: zero polynomial");
    Poly g = gcd_bivariate(f, f.derivative(0));
    g = gcd_bivariate(g, f.derivative(1));
    if (g.is_constant()) return f.primitive_normalized();
    return (*f.divide_exact(g)).primitive_normalized();
}

// ---- Newton polygon ----

/// Lower-left boundary of the support of a bivariate polynomial: the
/// strictly convex chain from the minimal-x support point to the
/// maximal-x point on the lowest row, edges carried with their
/// inclination dx/|dy| (nullopt for a horizontal edge on the axis row).
struct NewtonPolygon {
    struct Edge {
        std::pair<int, int> from, to;
        std::optional<Rat> inclination;
    };
    std::vector<std::pair<int, int>> vertices;
    std::vector<Edge> edges;
};

inline NewtonPolygon newton_polygon(const Poly& f) {
    if (f.is_zero()) throw zero_polynomial_error("newton_polygon: zero polynomial");
    if (f.uses(2)) throw range_error("newton_polygon: expected a polynomial in x,y");
    // minimal j for each i
    std::map<int, int> low;
    for (const auto& [e, c] : f.terms()) {
        auto it = low.find(e[0]);
        if (it == low.end() || e[1] < it->second) low[e[0]] = e[1];
    }
    int jmin = low.begin()->second;
    for (const auto& [i, j] : low) jmin = std::min(jmin, j);
    std::vector<std::pair<int, int>> pts;
    for (const auto& [i, j] : low) pts.push_back({i, j});
    // drop points to the right of the last minimal-row point
    int iend = 0;
    for (const auto& [i, j] : pts)
        if (j == jmin) iend = std::max(iend, i);
    std::erase_if(pts, [&](const auto& p) { return p.first > iend; });

    // monotone lower hull with strictly increasing slopes
    std::vector<std::pair<int, int>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            // slope(a->b) >= slope(b->p) means b is not a strict corner
            long long lhs = static_cast<long long>(b.second - a.second) *
                            (p.first - b.first);
            long long rhs = static_cast<long long>(p.second - b.second) *
                            (b.first - a.first);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    NewtonPolygon np;
    np.vertices = hull;
    for (size_t i = 0; i + 1 < hull.size(); ++i) {
        NewtonPolygon::Edge e;
        e.from = hull[i];
        e.to = hull[i + 1];
        int dj = hull[i].second - hull[i + 1].second;
        if (dj > 0) e.inclination = Rat(hull[i + 1].first - hull[i].first, dj);
        np.edges.push_back(e);
    }
    return np;
}

} // namespace singres
