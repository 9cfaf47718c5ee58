#pragma once

// JSON forms of grids, point instances and transcripts, plus run reports and
// their CSV rows. Coordinates are written 1-based.
//
//   {"shape":[m,n],"values":[[...],...]}
//   {"shape":[m,n],"edges":[{"a":[i,j],"b":[i,j],"dir":"ab"|"ba"},...]}
//   {"dims":[n1,...,nd],"edges":[{"a":[...],"b":[...],"dir":"ab"|"ba"},...]}
//
// "ab" means the edge is directed from a to b.

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gridsink/generate.hpp"
#include "gridsink/grid.hpp"
#include "gridsink/oracles.hpp"

namespace gridsink {

using json = nlohmann::json;

namespace detail {

inline json vertex_json(Vertex v) { return json::array({v.row + 1, v.col + 1}); }

inline Vertex vertex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw StructuralError("vertex must be [row, col]");
    return {j.at(0).get<int>() - 1, j.at(1).get<int>() - 1};
}

inline json coords_json(const Coords& x) {
    json out = json::array();
    for (int c : x) out.push_back(c + 1);
    return out;
}

inline Coords coords_from_json(const json& j) {
    if (!j.is_array()) throw StructuralError("coordinates must be an array");
    Coords x;
    for (const auto& c : j) x.push_back(c.get<int>() - 1);
    return x;
}

inline bool dir_forward(const json& j) {
    const std::string d = j.get<std::string>();
    if (d == "ab") return true;
    if (d == "ba") return false;
    throw StructuralError("edge dir must be \"ab\" or \"ba\"");
}

}  // namespace detail

inline json to_json(const ValueMatrix& vm) {
    json rows = json::array();
    for (int i = 0; i < vm.shape().rows; ++i) {
        json row = json::array();
        for (int j = 0; j < vm.shape().cols; ++j) row.push_back(vm.at({i, j}));
        rows.push_back(std::move(row));
    }
    return {{"shape", {vm.shape().rows, vm.shape().cols}}, {"values", std::move(rows)}};
}

inline json to_json(const OrientedGrid& grid) {
    json edges = json::array();
    for (const Edge& e : all_edges(grid.shape())) {
        edges.push_back({{"a", detail::vertex_json(e.a)},
                         {"b", detail::vertex_json(e.b)},
                         {"dir", grid.points_to(e.a, e.b) ? "ab" : "ba"}});
    }
    return {{"shape", {grid.shape().rows, grid.shape().cols}}, {"edges", std::move(edges)}};
}

inline json to_json(const DOrientedGrid& grid) {
    const DGridShape& s = grid.shape();
    json edges = json::array();
    for (auto [a, b] : all_edges(s)) {
        edges.push_back({{"a", detail::coords_json(s.coords(a))},
                         {"b", detail::coords_json(s.coords(b))},
                         {"dir", grid.points_to(a, b) ? "ab" : "ba"}});
    }
    return {{"dims", s.dims}, {"edges", std::move(edges)}};
}

using GridDocument = std::variant<ValueMatrix, OrientedGrid, DOrientedGrid>;

/// Parses any of the three grid forms. Edge lists must orient every edge
/// exactly once.
inline GridDocument grid_from_json(const json& doc) {
    if (!doc.is_object()) throw StructuralError("grid document must be a JSON object");
    if (doc.contains("dims")) {
        DOrientedGrid grid(DGridShape(doc.at("dims").get<std::vector<int>>()));
        const DGridShape& s = grid.shape();
        if (!doc.contains("edges") || doc.contains("values")) {
            throw StructuralError("d-dimensional grid needs an \"edges\" list");
        }
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& e : doc.at("edges")) {
            Coords a = detail::coords_from_json(e.at("a"));
            Coords b = detail::coords_from_json(e.at("b"));
            if (!s.contains(a) || !s.contains(b) || differing_dimension(a, b) < 0) {
                throw StructuralError("invalid d-dimensional edge");
            }
            const std::size_t ia = s.index(a);
            const std::size_t ib = s.index(b);
            if (!seen.insert({std::min(ia, ib), std::max(ia, ib)}).second) throw StructuralError("edge listed twice");
            if (detail::dir_forward(e.at("dir"))) grid.orient(a, b);
            else grid.orient(b, a);
        }
        if (seen.size() != all_edges(s).size()) throw StructuralError("edge list is not total");
        return grid;
    }
    const auto shape_arr = doc.at("shape").get<std::vector<int>>();
    if (shape_arr.size() != 2) throw StructuralError("shape must be [m, n]");
    GridShape shape(shape_arr[0], shape_arr[1]);
    const bool has_values = doc.contains("values");
    const bool has_edges = doc.contains("edges");
    if (has_values == has_edges) throw StructuralError("exactly one of \"values\" or \"edges\" is required");
    if (has_values) {
        ValueMatrix vm = ValueMatrix::from_rows(doc.at("values").get<std::vector<std::vector<double>>>());
        if (!(vm.shape() == shape)) throw StructuralError("values do not match shape");
        return vm;
    }
    OrientedGrid grid(shape);
    std::set<Edge> seen;
    for (const auto& e : doc.at("edges")) {
        Edge edge = Edge::between(detail::vertex_from_json(e.at("a")), detail::vertex_from_json(e.at("b")));
        check_edge(shape, edge);
        if (!seen.insert(edge).second) throw StructuralError("edge listed twice");
        Vertex a = detail::vertex_from_json(e.at("a"));
        Vertex b = detail::vertex_from_json(e.at("b"));
        if (detail::dir_forward(e.at("dir"))) grid.orient(a, b);
        else grid.orient(b, a);
    }
    if (seen.size() != shape.edge_count()) throw StructuralError("edge list is not total");
    return grid;
}

inline json to_json(const PointInstance& points) {
    json left = json::array();
    json right = json::array();
    for (const Point& p : points.left) left.push_back({p[0], p[1]});
    for (const Point& p : points.right) right.push_back({p[0], p[1]});
    return {{"left", std::move(left)}, {"right", std::move(right)}};
}

inline PointInstance points_from_json(const json& doc) {
    PointInstance points;
    for (const auto& p : doc.at("left")) points.left.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    for (const auto& p : doc.at("right")) points.right.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return points;
}

// ---------------------------------------------------------------------------
// Transcripts: one JSON object per line
// ---------------------------------------------------------------------------

inline json to_json(const TranscriptEntry& entry) {
    if (const auto* v = std::get_if<VertexAnswer>(&entry)) {
        json in = json::array();
        json out = json::array();
        for (Vertex w : v->incoming) in.push_back(detail::vertex_json(w));
        for (Vertex w : v->outgoing) out.push_back(detail::vertex_json(w));
        return {{"q", {{"kind", "vertex"}, {"v", detail::vertex_json(v->vertex)}}},
                {"a", {{"in", std::move(in)}, {"out", std::move(out)}}}};
    }
    const auto& e = std::get<EdgeAnswer>(entry);
    return {{"q", {{"kind", "edge"}, {"a", detail::vertex_json(e.edge.a)}, {"b", detail::vertex_json(e.edge.b)}}},
            {"a", {{"dir", e.direction == Direction::TowardSecond ? "ab" : "ba"}}}};
}

inline TranscriptEntry transcript_entry_from_json(const json& line) {
    const json& q = line.at("q");
    const json& a = line.at("a");
    const std::string kind = q.at("kind").get<std::string>();
    if (kind == "vertex") {
        VertexAnswer ans{detail::vertex_from_json(q.at("v")), {}, {}};
        for (const auto& w : a.at("in")) ans.incoming.push_back(detail::vertex_from_json(w));
        for (const auto& w : a.at("out")) ans.outgoing.push_back(detail::vertex_from_json(w));
        return ans;
    }
    if (kind == "edge") {
        Edge e = Edge::between(detail::vertex_from_json(q.at("a")), detail::vertex_from_json(q.at("b")));
        return EdgeAnswer{e, detail::dir_forward(a.at("dir")) ? Direction::TowardSecond : Direction::TowardFirst};
    }
    throw StructuralError("unknown transcript query kind: " + kind);
}

inline void write_transcript(std::ostream& out, const Transcript& transcript) {
    for (const auto& entry : transcript) out << to_json(entry).dump() << '\n';
}

inline Transcript read_transcript(std::istream& in) {
    Transcript transcript;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        transcript.push_back(transcript_entry_from_json(json::parse(line)));
    }
    return transcript;
}

// ---------------------------------------------------------------------------
// Run reports
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal form; integral values print without a fraction.
inline std::string format_number(double x) {
    if (std::nearbyint(x) == x && std::fabs(x) < 1e15) {
        return std::to_string(static_cast<long long>(x));
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

struct RunReport {
    std::string algorithm;
    std::vector<int> shape;
    std::optional<Seed> seed;
    QueryCounter queries;
    double bound = 0;
    bool bound_ok = false;
    Coords sink;  // 0-based
    std::string verdict = "unverified";  // verified | unverified | mismatch
    std::optional<double> wall_time_ms;

    [[nodiscard]] std::uint64_t counted_queries() const noexcept {
        return queries.vertex_queries + queries.edge_queries;
    }
};

inline bool within_bound(const QueryCounter& q, double bound) {
    return static_cast<double>(q.vertex_queries + q.edge_queries) <= bound;
}

inline json to_json(const RunReport& r) {
    json doc;
    doc["algorithm"] = r.algorithm;
    doc["shape"] = r.shape;
    doc["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    doc["queries"] = {{"vertex", r.queries.vertex_queries}, {"edge", r.queries.edge_queries}};
    if (std::nearbyint(r.bound) == r.bound) doc["bound"] = static_cast<long long>(r.bound);
    else doc["bound"] = r.bound;
    doc["bound_ok"] = r.bound_ok;
    doc["sink"] = detail::coords_json(r.sink);
    doc["verdict"] = r.verdict;
    if (r.wall_time_ms) doc["wall_time_ms"] = *r.wall_time_ms;
    return doc;
}

inline constexpr const char* csv_header = "alg,m,n,seed,queries_vertex,queries_edge,bound,bound_ok";

inline std::string csv_row(const RunReport& r) {
    std::ostringstream row;
    row << r.algorithm << ',' << r.shape.at(0) << ',' << r.shape.at(1) << ','
        << (r.seed ? std::to_string(*r.seed) : std::string{}) << ',' << r.queries.vertex_queries << ','
        << r.queries.edge_queries << ',' << format_number(r.bound) << ',' << (r.bound_ok ? "true" : "false");
    return row.str();
}

}  // namespace gridsink
