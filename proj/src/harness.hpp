#pragma once

// Experiment runners behind the command-line tool. Every runner returns a
// Report whose verdicts decide the process exit code.

#include "json_io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace infunc::harness {

using io::Json;

inline constexpr const char* kSchema = "infunc-report/1";

/// Seed from the flag, else INFUNC_SEED, else 1.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

struct Common {
    std::optional<std::uint64_t> seed;
    std::size_t cut_cap = kDefaultCutCap;
    std::uint64_t enum_cap = kDefaultEnumerationCap;
    std::string format = "json";  // json | csv
};

struct Report {
    std::string command;
    Json config = Json::object();
    Json results = Json::object();
    std::vector<std::pair<std::string, bool>> verdicts;

    void verdict(const std::string& name, bool ok) { verdicts.emplace_back(name, ok); }
    bool passed() const;
    std::optional<std::string> first_failure() const;
    Json to_json() const;
    /// json: pretty JSON; csv: one "path,value" row per flattened field.
    std::string render(const std::string& format) const;
};

struct PartitionOptions {
    std::string function;
    std::size_t side = 0;
    std::string dist;
    std::size_t block = 0;
};

struct TreeRatesOptions {
    std::string function;
    std::string graph;
    std::string dist;
};

struct TreeSimOptions {
    std::string function;
    std::string graph;
    std::size_t block = 64;
    std::size_t sim = 10;
};

struct DagBoundsOptions {
    std::string function;
    std::string graph;
    std::string dist;
    std::string rates;
};

struct DagTreesOptions {
    std::string function;
    std::string graph;
    std::string rates;
    std::uint64_t tree_cap = 100000;
};

struct DagSimOptions {
    std::string builtin = "parity";
    std::uint64_t modulus = 4;
    std::string graph;  // default: the three-node example DAG
    std::size_t block = 100;
    std::size_t sim = 1;
};

struct TwoNodeOptions {
    std::string kind = "threshold";  // threshold | interval | general
    std::uint64_t m1 = 1, m2 = 1;
    std::int64_t theta = 1;
    std::int64_t a = 0, b = 0;
    std::string function;
    std::size_t speaker = 1;  // 1 or 2
    std::size_t block = 100;
    std::size_t sim = 10;
};

struct TreeProtoOptions {
    std::string graph;
    std::optional<std::int64_t> theta;
    std::optional<std::pair<std::int64_t, std::int64_t>> interval;
    std::size_t block = 100;
    std::size_t sim = 10;
    std::optional<NodeId> root;
};

struct GraphBoundsOptions {
    std::string graph;
    std::int64_t theta = 1;
};

struct GraphStarsOptions {
    std::size_t n = 3;
    std::vector<std::uint64_t> l{1};
    std::int64_t theta = 2;
};

struct LpOptions {
    std::string graph;
    std::string rates;
    std::string trees;
    std::int64_t theta = 1;
};

struct PaperSuiteOptions {
    bool inject_theta_fault = false;
};

Report run_partition(const PartitionOptions& o, const Common& c);
Report run_tree_rates(const TreeRatesOptions& o, const Common& c);
Report run_tree_sim(const TreeSimOptions& o, const Common& c);
Report run_dag_bounds(const DagBoundsOptions& o, const Common& c);
Report run_dag_trees(const DagTreesOptions& o, const Common& c);
Report run_dag_sim(const DagSimOptions& o, const Common& c);
Report run_two_node(const TwoNodeOptions& o, const Common& c);
Report run_tree_proto(const TreeProtoOptions& o, const Common& c);
Report run_graph_bounds(const GraphBoundsOptions& o, const Common& c);
Report run_graph_stars(const GraphStarsOptions& o, const Common& c);
Report run_lp(const LpOptions& o, const Common& c);

struct SuiteCheck {
    std::string id;
    std::string claim;
    bool passed = false;
    std::string detail;
};

std::vector<SuiteCheck> paper_suite_checks(const PaperSuiteOptions& o);
Report emit_paper_suite(const PaperSuiteOptions& o, const Common& c);

}  // namespace infunc::harness
