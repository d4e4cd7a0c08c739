#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "singres/rational.hpp"

namespace singres {

/// Decorated dual graph of a curve configuration: vertices are compact
/// components carrying self-intersection, genus and named integer
/// decorations; edges are intersection points (with multiplicity to allow
/// several between one pair); arrows are non-compact strict transforms
/// attached at a vertex. Arrows of a smooth germ may be free (no vertex).
struct DualGraph {
    struct Vertex {
        std::string id;
        Int self_int = 0;
        Int genus = 0;
        std::map<std::string, Int> dec;
    };
    struct Edge {
        std::string a, b;
        int count = 1;
    };
    struct Arrow {
        std::optional<std::string> at;
        std::string label;
        Int mult = 1;
    };

    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<Arrow> arrows;

    bool has_vertex(const std::string& id) const {
        return std::any_of(vertices.begin(), vertices.end(),
                           [&](const Vertex& v) { return v.id == id; });
    }
    Vertex& vertex(const std::string& id) {
        for (auto& v : vertices)
            if (v.id == id) return v;
        throw unknown_vertex_error("no vertex '" + id + "'");
    }
    const Vertex& vertex(const std::string& id) const {
        return const_cast<DualGraph*>(this)->vertex(id);
    }
    void add_vertex(std::string id, Int self_int, Int genus = 0) {
        vertices.push_back({std::move(id), std::move(self_int), std::move(genus), {}});
    }
    void add_edge(const std::string& a, const std::string& b, int count = 1) {
        if (!has_vertex(a) || !has_vertex(b))
            throw unknown_vertex_error("edge endpoint missing: " + a + "," + b);
        for (auto& e : edges)
            if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) {
                e.count += count;
                return;
            }
        edges.push_back({a, b, count});
    }
    void add_arrow(std::optional<std::string> at, std::string label, Int mult = 1) {
        if (at && !has_vertex(*at)) throw unknown_vertex_error("arrow at missing vertex " + *at);
        arrows.push_back({std::move(at), std::move(label), std::move(mult)});
    }

    std::vector<std::string> vertex_ids() const {
        std::vector<std::string> ids;
        ids.reserve(vertices.size());
        for (const auto& v : vertices) ids.push_back(v.id);
        return ids;
    }

    /// Sum of edge multiplicities between a and b (0 if none).
    int edge_count(const std::string& a, const std::string& b) const {
        int n = 0;
        for (const auto& e : edges)
            if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) n += e.count;
        return n;
    }

    /// Degree of v counting edge multiplicities (loops twice).
    int degree(const std::string& v) const {
        int d = 0;
        for (const auto& e : edges) {
            if (e.a == v) d += e.count;
            if (e.b == v) d += e.count;
        }
        return d;
    }

    int arrow_count_at(const std::string& v) const {
        int n = 0;
        for (const auto& ar : arrows)
            if (ar.at && *ar.at == v) ++n;
        return n;
    }
};

/// Symmetric integer intersection matrix in a chosen vertex order.
struct IntersectionMatrix {
    std::vector<std::string> order;
    std::vector<std::vector<Int>> m;

    size_t size() const { return m.size(); }
    bool symmetric() const {
        for (size_t i = 0; i < m.size(); ++i)
            for (size_t j = i + 1; j < m.size(); ++j)
                if (m[i][j] != m[j][i]) return false;
        return true;
    }
};

inline IntersectionMatrix intersection_matrix(const DualGraph& g,
                                              const std::vector<std::string>& order) {
    IntersectionMatrix im;
    im.order = order;
    size_t n = order.size();
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < n; ++i) {
        if (!g.has_vertex(order[i])) throw unknown_vertex_error("order mentions " + order[i]);
        if (!index.emplace(order[i], i).second)
            throw unknown_vertex_error("order repeats " + order[i]);
    }
    if (n != g.vertices.size())
        throw unknown_vertex_error("order is not a permutation of the vertex set");
    im.m.assign(n, std::vector<Int>(n, Int(0)));
    for (size_t i = 0; i < n; ++i) im.m[i][i] = g.vertex(order[i]).self_int;
    for (const auto& e : g.edges) {
        size_t i = index.at(e.a), j = index.at(e.b);
        im.m[i][j] += e.count;
        if (i != j) im.m[j][i] += e.count;
    }
    return im;
}

inline IntersectionMatrix intersection_matrix(const DualGraph& g) {
    return intersection_matrix(g, g.vertex_ids());
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Int exact_determinant(std::vector<std::vector<Int>> a) {
    size_t n = a.size();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

inline Int graph_determinant(const IntersectionMatrix& im) {
    if (!im.symmetric()) throw not_symmetric_error("graph_determinant: matrix not symmetric");
    return exact_determinant(im.m);
}

/// Sylvester criterion on -M: negative definite iff every leading
/// principal minor of -M is positive, i.e. (-1)^k det(M_k) > 0.
inline bool is_negative_definite(const IntersectionMatrix& im) {
    if (!im.symmetric()) throw not_symmetric_error("is_negative_definite: matrix not symmetric");
    size_t n = im.size();
    for (size_t k = 1; k <= n; ++k) {
        std::vector<std::vector<Int>> sub(k, std::vector<Int>(k));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) sub[i][j] = im.m[i][j];
        Int d = exact_determinant(std::move(sub));
        if (k % 2 == 1) d = -d;
        if (d <= 0) return false;
    }
    return true;
}

/// For every vertex v with multiplicity decoration mu:
/// mu(v)*self_int(v) + sum over edges mu(neighbor) + sum over arrows at v
/// of the arrow multiplicity must vanish (the decorated divisor is the
/// total transform of a function). Free arrows are ignored.
inline bool check_balance(const DualGraph& g, const std::string& mult_name) {
    auto mult_of = [&](const DualGraph::Vertex& v) -> const Int& {
        auto it = v.dec.find(mult_name);
        if (it == v.dec.end())
            throw missing_decoration_error("vertex " + v.id + " lacks '" + mult_name + "'");
        return it->second;
    };
    for (const auto& v : g.vertices) {
        Int total = mult_of(v) * v.self_int;
        for (const auto& e : g.edges) {
            if (e.a == v.id && e.b == v.id)
                total += 2 * e.count * mult_of(v);
            else if (e.a == v.id)
                total += e.count * mult_of(g.vertex(e.b));
            else if (e.b == v.id)
                total += e.count * mult_of(g.vertex(e.a));
        }
        for (const auto& ar : g.arrows)
            if (ar.at && *ar.at == v.id) total += ar.mult;
        if (total != 0) return false;
    }
    return true;
}

struct BlowDownResult {
    DualGraph graph;
    /// Set when contraction left a nonempty graph that is no longer
    /// negative definite (the configuration escaped the exceptional regime).
    bool non_negative_remainder = false;
};

/// Repeatedly contracts genus-0 self-intersection -1 vertices
/// (Castelnuovo). Contracting v adds 1 to each neighbor per edge to v and
/// joins former neighbors pairwise, one new edge per pair of edges at v.
/// An arrow at v passes through the contracted point, so it re-attaches to
/// every former neighbor (and is dropped when there is none); this keeps
/// the balance relation of every multiplicity decoration intact.
/// Configurations that would create a loop are rejected.
inline BlowDownResult blow_down_minimize(DualGraph g) {
    for (;;) {
        size_t pick = g.vertices.size();
        for (size_t i = 0; i < g.vertices.size(); ++i) {
            const auto& v = g.vertices[i];
            if (v.self_int == -1 && v.genus == 0) {
                if (g.edge_count(v.id, v.id) > 0)
                    throw unsupported_contraction_error("vertex " + v.id + " has a loop");
                pick = i;
                break;
            }
        }
        if (pick == g.vertices.size()) break;
        std::string vid = g.vertices[pick].id;

        // endpoints of the edges at v, one entry per edge
        std::vector<std::string> ends;
        for (const auto& e : g.edges) {
            if (e.a == vid && e.b != vid)
                for (int c = 0; c < e.count; ++c) ends.push_back(e.b);
            else if (e.b == vid && e.a != vid)
                for (int c = 0; c < e.count; ++c) ends.push_back(e.a);
        }
        for (size_t i = 0; i < ends.size(); ++i)
            for (size_t j = i + 1; j < ends.size(); ++j)
                if (ends[i] == ends[j])
                    throw unsupported_contraction_error(
                        "contracting " + vid + " would create a loop at " + ends[i]);

        DualGraph next;
        for (const auto& v : g.vertices)
            if (v.id != vid) next.vertices.push_back(v);
        for (const auto& w : ends) next.vertex(w).self_int += 1;
        for (const auto& e : g.edges)
            if (e.a != vid && e.b != vid) next.edges.push_back(e);
        for (size_t i = 0; i < ends.size(); ++i)
            for (size_t j = i + 1; j < ends.size(); ++j) next.add_edge(ends[i], ends[j]);
        for (const auto& a : g.arrows) {
            if (!a.at || *a.at != vid) {
                next.arrows.push_back(a);
                continue;
            }
            for (const auto& w : ends) next.arrows.push_back({w, a.label, a.mult});
        }
        g = std::move(next);
    }
    BlowDownResult r;
    r.non_negative_remainder =
        !g.vertices.empty() && !is_negative_definite(intersection_matrix(g));
    r.graph = std::move(g);
    return r;
}

// ---- serialization ----

inline long long to_ll(const Int& v) {
    if (v < std::numeric_limits<long long>::min() || v > std::numeric_limits<long long>::max())
        throw range_error("integer too large for JSON: " + v.str());
    return v.convert_to<long long>();
}

inline nlohmann::json to_json(const DualGraph& g) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : g.vertices) {
        nlohmann::json jv;
        jv["id"] = v.id;
        jv["self_int"] = to_ll(v.self_int);
        jv["genus"] = to_ll(v.genus);
        jv["dec"] = nlohmann::json::object();
        for (const auto& [k, val] : v.dec) jv["dec"][k] = to_ll(val);
        j["vertices"].push_back(jv);
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges) j["edges"].push_back({e.a, e.b, e.count});
    j["arrows"] = nlohmann::json::array();
    for (const auto& a : g.arrows) {
        nlohmann::json ja;
        if (a.at) ja["at"] = *a.at; else ja["at"] = nullptr;
        ja["label"] = a.label;
        ja["mult"] = to_ll(a.mult);
        j["arrows"].push_back(ja);
    }
    return j;
}

inline DualGraph graph_from_json(const nlohmann::json& j) {
    DualGraph g;
    for (const auto& jv : j.at("vertices")) {
        DualGraph::Vertex v;
        v.id = jv.at("id").get<std::string>();
        v.self_int = Int(jv.at("self_int").get<long long>());
        v.genus = Int(jv.value("genus", 0LL));
        if (jv.contains("dec"))
            for (auto it = jv["dec"].begin(); it != jv["dec"].end(); ++it)
                v.dec[it.key()] = Int(it.value().get<long long>());
        g.vertices.push_back(std::move(v));
    }
    if (j.contains("edges"))
        for (const auto& je : j["edges"]) {
            int count = je.size() > 2 ? je.at(2).get<int>() : 1;
            g.add_edge(je.at(0).get<std::string>(), je.at(1).get<std::string>(), count);
        }
    if (j.contains("arrows"))
        for (const auto& ja : j["arrows"]) {
            std::optional<std::string> at;
            if (ja.contains("at") && !ja["at"].is_null()) at = ja["at"].get<std::string>();
            g.add_arrow(at, ja.value("label", std::string()),
                        Int(ja.value("mult", 1LL)));
        }
    return g;
}

inline std::string to_dot(const DualGraph& g) {
    std::string out = "graph dual {\n  node [shape=circle];\n";
    for (const auto& v : g.vertices) {
        std::string label = v.id + "\\n" + v.self_int.str();
        if (v.genus != 0) label += " g" + v.genus.str();
        for (const auto& [k, val] : v.dec) label += "\\n" + k + "=" + val.str();
        out += "  \"" + v.id + "\" [label=\"" + label + "\"];\n";
    }
    for (const auto& e : g.edges)
        for (int c = 0; c < e.count; ++c)
            out += "  \"" + e.a + "\" -- \"" + e.b + "\";\n";
    int k = 0;
    for (const auto& a : g.arrows) {
        std::string aid = "arrow" + std::to_string(k++);
        std::string label = a.label.empty() ? aid : a.label;
        out += "  \"" + aid + "\" [shape=rarrow, label=\"" + label + " (" + a.mult.str() +
               ")\"];\n";
        if (a.at) out += "  \"" + *a.at + "\" -- \"" + aid + "\";\n";
    }
    out += "}\n";
    return out;
}

/// Decorated-graph isomorphism (exact backtracking with degree/decoration
/// pruning). Intended for the small graphs this library produces.
inline bool graphs_isomorphic(const DualGraph& a, const DualGraph& b,
                              bool compare_dec = true) {
    size_t n = a.vertices.size();
    if (n != b.vertices.size() || a.edges.size() > 64 || n > 64) return false;
    auto sig = [&](const DualGraph& g, const DualGraph::Vertex& v) {
        std::string s = v.self_int.str() + "|" + v.genus.str() + "|" +
                        std::to_string(g.degree(v.id)) + "|" +
                        std::to_string(g.arrow_count_at(v.id));
        if (compare_dec)
            for (const auto& [k, val] : v.dec) s += "|" + k + "=" + val.str();
        return s;
    };
    // multiset of signatures must agree
    std::vector<std::string> sa, sb;
    for (const auto& v : a.vertices) sa.push_back(sig(a, v));
    for (const auto& v : b.vertices) sb.push_back(sig(b, v));
    {
        auto ca = sa, cb = sb;
        std::sort(ca.begin(), ca.end());
        std::sort(cb.begin(), cb.end());
        if (ca != cb) return false;
    }
    std::vector<int> map_ab(n, -1), used(n, 0);
    std::function<bool(size_t)> place = [&](size_t i) -> bool {
        if (i == n) return true;
        for (size_t j = 0; j < n; ++j) {
            if (used[j] || sa[i] != sb[j]) continue;
            bool ok = true;
            for (size_t prev = 0; prev < i && ok; ++prev) {
                int ec_a = a.edge_count(a.vertices[i].id, a.vertices[prev].id);
                int ec_b = b.edge_count(b.vertices[j].id, b.vertices[map_ab[prev]].id);
                if (ec_a != ec_b) ok = false;
            }
            if (!ok) continue;
            used[j] = 1;
            map_ab[i] = static_cast<int>(j);
            if (place(i + 1)) return true;
            used[j] = 0;
            map_ab[i] = -1;
        }
        return false;
    };
    return place(0);
}

} // namespace singres
