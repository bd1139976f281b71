#pragma once

// JSON readers for functions, graphs, distributions, rate vectors and tree
// lists. Every error names the offending field.

#include "infunc/core.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace infunc::io {

using Json = nlohmann::ordered_json;

inline Json load_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                    e.what() + ")");
    }
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_json_text(ss.str(), path);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) throw Error(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw Error(where + ": missing field '" + key + "'");
    return *it;
}

inline std::uint64_t as_uint(const Json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
        throw Error(where + ": expected a non-negative integer");
    return j.get<std::uint64_t>();
}

inline std::int64_t as_int(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) throw Error(where + ": expected an integer");
    return j.get<std::int64_t>();
}

inline std::vector<std::size_t> as_sizes(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw Error(where + ": expected a non-empty array of sizes");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto v = as_uint(j[i], where + "[" + std::to_string(i) + "]");
        if (v == 0) throw Error(where + "[" + std::to_string(i) + "]: alphabet size must be positive");
        out.push_back(v);
    }
    return out;
}

/// A rational from a JSON number or a "p/q" / decimal string.
inline Rational as_rational(const Json& j, const std::string& where) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
        if (j.is_number()) return exact_rational(j.get<double>());
    } catch (const Error& e) {
        throw Error(where + ": " + e.what());
    }
    throw Error(where + ": expected a number or a rational string");
}

/// Accepts numbers, "p/q", "log2(k)" and "log2(k)/m".
inline Rational as_rate(const Json& j, const std::string& where) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s.rfind("log2(", 0) == 0) {
            const auto close = s.find(')');
            if (close == std::string::npos) throw Error(where + ": malformed log2 expression '" + s + "'");
            std::uint64_t k = 0;
            try {
                k = std::stoull(s.substr(5, close - 5));
            } catch (const std::exception&) {
                throw Error(where + ": malformed log2 argument in '" + s + "'");
            }
            if (k == 0) throw Error(where + ": log2 argument must be positive");
            Rational value = exact_rational(std::log2(static_cast<double>(k)));
            const auto rest = s.substr(close + 1);
            if (!rest.empty()) {
                if (rest[0] != '/') throw Error(where + ": unexpected text after log2(...) in '" + s + "'");
                Rational d;
                try {
                    d = parse_rational(rest.substr(1));
                } catch (const Error& e) {
                    throw Error(where + ": " + e.what());
                }
                if (d == 0) throw Error(where + ": division by zero");
                value /= d;
            }
            return value;
        }
    }
    return as_rational(j, where);
}

inline std::vector<std::size_t> builtin_sizes(const Json& params, const std::string& where) {
    if (params.contains("alphabet_sizes")) return as_sizes(params["alphabet_sizes"], where + ".alphabet_sizes");
    const auto n = as_uint(field(params, "n", where), where + ".n");
    const auto q = params.contains("alphabet_size") ? as_uint(params["alphabet_size"], where + ".alphabet_size") : 2;
    if (n == 0 || q == 0) throw Error(where + ": n and alphabet_size must be positive");
    return std::vector<std::size_t>(n, q);
}

inline FunctionTable parse_function(const Json& j, const std::string& where = "function") {
    try {
        if (j.is_object() && j.contains("builtin")) {
            const auto name = field(j, "builtin", where).get<std::string>();
            const Json params = j.contains("params") ? j["params"] : Json::object();
            const std::string pw = where + ".params";
            const auto sizes = builtin_sizes(params, pw);
            if (name == "and") return builtin::logical_and(sizes);
            if (name == "parity") return builtin::parity(sizes, as_uint(field(params, "modulus", pw), pw + ".modulus"));
            if (name == "max") return builtin::maximum(sizes);
            if (name == "min") return builtin::minimum(sizes);
            if (name == "sum") return builtin::arithmetic_sum(sizes);
            if (name == "sum_threshold")
                return builtin::sum_threshold(sizes, as_int(field(params, "theta", pw), pw + ".theta"));
            if (name == "sum_interval")
                return builtin::sum_interval(sizes, as_int(field(params, "a", pw), pw + ".a"),
                                             as_int(field(params, "b", pw), pw + ".b"));
            if (name == "identity") return builtin::identity(sizes);
            if (name == "constant") {
                const auto v = params.contains("value") ? as_uint(params["value"], pw + ".value") : 0;
                return builtin::constant(sizes, static_cast<Letter>(v));
            }
            throw Error(where + ".builtin: unknown builtin '" + name + "'");
        }
        const auto arity = as_uint(field(j, "arity", where), where + ".arity");
        const auto sizes = as_sizes(field(j, "alphabet_sizes", where), where + ".alphabet_sizes");
        if (sizes.size() != arity) throw Error(where + ": alphabet_sizes length must equal arity");
        const auto range = as_uint(field(j, "range_size", where), where + ".range_size");
        const auto& vals = field(j, "values", where);
        if (!vals.is_array()) throw Error(where + ".values: expected an array");
        std::vector<Letter> values;
        for (std::size_t i = 0; i < vals.size(); ++i)
            values.push_back(static_cast<Letter>(as_uint(vals[i], where + ".values[" + std::to_string(i) + "]")));
        return FunctionTable(sizes, range, values);
    } catch (const nlohmann::json::exception& e) {
        throw Error(where + ": " + e.what());
    }
}

inline NetworkGraph parse_graph(const Json& j, const std::string& where = "graph") {
    try {
        const auto kind = parse_graph_kind(field(j, "kind", where).get<std::string>());
        const auto n = as_uint(field(j, "n", where), where + ".n");
        const auto& ej = field(j, "edges", where);
        if (!ej.is_array()) throw Error(where + ".edges: expected an array");
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < ej.size(); ++i) {
            const std::string ew = where + ".edges[" + std::to_string(i) + "]";
            if (!ej[i].is_array() || ej[i].size() != 2) throw Error(ew + ": expected a pair [from, to]");
            edges.push_back({as_uint(ej[i][0], ew + "[0]"), as_uint(ej[i][1], ew + "[1]")});
        }
        std::vector<std::size_t> sizes;
        if (j.contains("alphabet_sizes")) sizes = as_sizes(j["alphabet_sizes"], where + ".alphabet_sizes");
        const NodeId collector = j.contains("collector") ? as_uint(j["collector"], where + ".collector") : 1;
        return NetworkGraph(kind, n, std::move(edges), std::move(sizes), collector);
    } catch (const nlohmann::json::exception& e) {
        throw Error(where + ": " + e.what());
    }
}

/// {"uniform": true} | {"independent": [[...], ...]} | {"probabilities": [...]} (row-major).
inline JointDistribution parse_distribution(const Json& j, const std::vector<std::size_t>& sizes,
                                            const std::string& where = "distribution") {
    if (!j.is_object()) throw Error(where + ": expected an object");
    if (j.contains("alphabet_sizes") && as_sizes(j["alphabet_sizes"], where + ".alphabet_sizes") != sizes)
        throw Error(where + ".alphabet_sizes: does not match the function");
    if (j.contains("uniform")) return JointDistribution::uniform(sizes);
    if (j.contains("independent")) {
        const auto& m = j["independent"];
        if (!m.is_array() || m.size() != sizes.size())
            throw Error(where + ".independent: expected one marginal per node");
        std::vector<std::vector<Rational>> marg;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const std::string mw = where + ".independent[" + std::to_string(i) + "]";
            if (!m[i].is_array() || m[i].size() != sizes[i]) throw Error(mw + ": length must equal the alphabet size");
            std::vector<Rational> row;
            for (std::size_t k = 0; k < m[i].size(); ++k)
                row.push_back(as_rational(m[i][k], mw + "[" + std::to_string(k) + "]"));
            marg.push_back(std::move(row));
        }
        return JointDistribution::independent(marg);
    }
    const auto& pj = field(j, "probabilities", where);
    if (!pj.is_array()) throw Error(where + ".probabilities: expected an array");
    std::vector<Rational> probs;
    for (std::size_t i = 0; i < pj.size(); ++i)
        probs.push_back(as_rational(pj[i], where + ".probabilities[" + std::to_string(i) + "]"));
    return JointDistribution(sizes, probs);
}

/// {"rates": [...]} or a bare array.
inline std::vector<Rational> parse_rates(const Json& j, const std::string& where = "rates") {
    const Json& arr = j.is_object() ? field(j, "rates", where) : j;
    if (!arr.is_array()) throw Error(where + ": expected an array of rates");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(as_rate(arr[i], where + "[" + std::to_string(i) + "]"));
        if (out.back() < 0) throw Error(where + "[" + std::to_string(i) + "]: rate must be non-negative");
    }
    return out;
}

/// {"trees": [[[i,j], ...], ...]}: each tree as endpoint pairs or as edge indices.
inline std::vector<std::vector<std::size_t>> parse_trees(const Json& j, const NetworkGraph& g,
                                                         const std::string& where = "trees") {
    const Json& arr = j.is_object() ? field(j, "trees", where) : j;
    if (!arr.is_array() || arr.empty()) throw Error(where + ": expected a non-empty array of trees");
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t t = 0; t < arr.size(); ++t) {
        const std::string tw = where + "[" + std::to_string(t) + "]";
        if (!arr[t].is_array()) throw Error(tw + ": expected an array of edges");
        std::vector<std::size_t> edges;
        for (std::size_t k = 0; k < arr[t].size(); ++k) {
            const auto& e = arr[t][k];
            const std::string ew = tw + "[" + std::to_string(k) + "]";
            if (e.is_array()) {
                if (e.size() != 2) throw Error(ew + ": expected a pair [from, to]");
                const auto idx = g.edge_index(as_uint(e[0], ew + "[0]"), as_uint(e[1], ew + "[1]"));
                if (!idx) throw Error(ew + ": edge is not in the graph");
                edges.push_back(*idx);
            } else {
                const auto idx = as_uint(e, ew);
                if (idx >= g.edges().size()) throw Error(ew + ": edge index out of range");
                edges.push_back(idx);
            }
        }
        out.push_back(std::move(edges));
    }
    return out;
}

}  // namespace infunc::io
