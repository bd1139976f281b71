// infunc: command-line front end for the function-computation toolkit.

#include "harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace infunc;
using namespace infunc::harness;

int main(int argc, char** argv) {
    CLI::App app{"Zero-error function computation over networks"};
    app.require_subcommand(1);

    Common common;
    std::string output;
    std::uint64_t seed = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "random seed (default: $INFUNC_SEED, else 1)");
        sub->add_option("--cut-cap", common.cut_cap, "largest node count for cut enumeration")
            ->check(CLI::PositiveNumber);
        sub->add_option("--enum-cap", common.enum_cap, "largest tuple space to enumerate")->check(CLI::PositiveNumber);
        sub->add_option("--format", common.format, "report format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("-o,--output", output, "write the report here instead of stdout");
    };

    PartitionOptions partition;
    auto* s_partition = app.add_subcommand("partition", "optimal partition and block/Huffman rates of one node");
    s_partition->add_option("--function", partition.function)->required();
    s_partition->add_option("--side", partition.side, "argument index (0-based)");
    s_partition->add_option("--dist", partition.dist);
    s_partition->add_option("--block", partition.block);

    TreeRatesOptions tree_rates;
    auto* s_tree_rates = app.add_subcommand("tree-rates", "normal-form edge alphabets on a directed tree");
    s_tree_rates->add_option("--function", tree_rates.function)->required();
    s_tree_rates->add_option("--graph", tree_rates.graph)->required();
    s_tree_rates->add_option("--dist", tree_rates.dist);

    TreeSimOptions tree_sim;
    auto* s_tree_sim = app.add_subcommand("tree-sim", "simulate block coding on a directed tree");
    s_tree_sim->add_option("--function", tree_sim.function)->required();
    s_tree_sim->add_option("--graph", tree_sim.graph)->required();
    s_tree_sim->add_option("--block", tree_sim.block);
    s_tree_sim->add_option("--sim", tree_sim.sim);

    DagBoundsOptions dag_bounds;
    auto* s_dag_bounds = app.add_subcommand("dag-bounds", "cut outer bounds on a DAG");
    s_dag_bounds->add_option("--function", dag_bounds.function)->required();
    s_dag_bounds->add_option("--graph", dag_bounds.graph)->required();
    s_dag_bounds->add_option("--dist", dag_bounds.dist);
    s_dag_bounds->add_option("--rates", dag_bounds.rates);

    DagTreesOptions dag_trees;
    auto* s_dag_trees = app.add_subcommand("dag-trees", "rate points of embedded directed trees");
    s_dag_trees->add_option("--function", dag_trees.function)->required();
    s_dag_trees->add_option("--graph", dag_trees.graph)->required();
    s_dag_trees->add_option("--rates", dag_trees.rates);
    s_dag_trees->add_option("--tree-cap", dag_trees.tree_cap);

    DagSimOptions dag_sim;
    auto* s_dag_sim = app.add_subcommand("dag-sim", "split aggregation of parity/max/min on a DAG");
    s_dag_sim->add_option("--builtin", dag_sim.builtin)->check(CLI::IsMember({"parity", "max", "min"}));
    s_dag_sim->add_option("--modulus", dag_sim.modulus)->check(CLI::Range(2u, 1u << 16));
    s_dag_sim->add_option("--graph", dag_sim.graph);
    s_dag_sim->add_option("--block", dag_sim.block);
    s_dag_sim->add_option("--sim", dag_sim.sim);

    TwoNodeOptions two_node;
    auto* s_two_node = app.add_subcommand("two-node", "interactive two-node protocols");
    s_two_node->add_option("--kind", two_node.kind)->check(CLI::IsMember({"threshold", "interval", "general"}));
    s_two_node->add_option("--m1", two_node.m1);
    s_two_node->add_option("--m2", two_node.m2);
    s_two_node->add_option("--theta", two_node.theta);
    s_two_node->add_option("--a", two_node.a);
    s_two_node->add_option("--b", two_node.b);
    s_two_node->add_option("--function", two_node.function);
    s_two_node->add_option("--speaker", two_node.speaker)->check(CLI::IsMember({1, 2}));
    s_two_node->add_option("--block", two_node.block);
    s_two_node->add_option("--sim", two_node.sim);

    TreeProtoOptions tree_proto;
    std::int64_t tp_theta = 0;
    std::vector<std::int64_t> tp_interval;
    NodeId tp_root = 0;
    auto* s_tree_proto = app.add_subcommand("tree-proto", "interactive sum-threshold/interval protocol on a tree");
    s_tree_proto->add_option("--graph", tree_proto.graph)->required();
    auto* o_theta = s_tree_proto->add_option("--theta", tp_theta);
    auto* o_interval = s_tree_proto->add_option("--interval", tp_interval, "a b")->expected(2);
    o_theta->excludes(o_interval);
    auto* o_root = s_tree_proto->add_option("--root", tp_root, "default: weighted centroid");
    s_tree_proto->add_option("--block", tree_proto.block);
    s_tree_proto->add_option("--sim", tree_proto.sim);

    GraphBoundsOptions graph_bounds;
    auto* s_graph_bounds = app.add_subcommand("graph-bounds", "cut bounds on an undirected graph");
    s_graph_bounds->add_option("--graph", graph_bounds.graph)->required();
    s_graph_bounds->add_option("--theta", graph_bounds.theta)->required();

    GraphStarsOptions graph_stars;
    auto* s_graph_stars = app.add_subcommand("graph-stars", "star aggregation on a complete graph");
    s_graph_stars->add_option("--n", graph_stars.n)->required();
    s_graph_stars->add_option("--l", graph_stars.l, "one value, or one per node")->required();
    s_graph_stars->add_option("--theta", graph_stars.theta)->required();

    LpOptions lp;
    auto* s_lp = app.add_subcommand("lp", "tree time-sharing scale factor");
    s_lp->add_option("--graph", lp.graph)->required();
    s_lp->add_option("--rates", lp.rates)->required();
    s_lp->add_option("--trees", lp.trees, "default: the star trees");
    s_lp->add_option("--theta", lp.theta)->required();

    PaperSuiteOptions suite;
    auto* s_suite = app.add_subcommand("paper-suite", "run the built-in reproduction checks");
    s_suite->add_flag("--inject-theta-fault", suite.inject_theta_fault, "shift one threshold by one");

    for (auto* sub : app.get_subcommands({})) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (sub->count("--seed")) common.seed = seed;
        if (sub->count("--cut-cap") && common.cut_cap != kDefaultCutCap)
            std::cerr << "warning: cut cap raised/lowered to " << common.cut_cap << "\n";
        if (sub->count("--enum-cap") && common.enum_cap != kDefaultEnumerationCap)
            std::cerr << "warning: enumeration cap changed to " << common.enum_cap << "\n";
        if (*o_theta) tree_proto.theta = tp_theta;
        if (*o_interval) tree_proto.interval = std::pair{tp_interval[0], tp_interval[1]};
        if (*o_root) tree_proto.root = tp_root;

        Report report;
        const std::string name = sub->get_name();
        if (name == "partition") report = run_partition(partition, common);
        else if (name == "tree-rates") report = run_tree_rates(tree_rates, common);
        else if (name == "tree-sim") report = run_tree_sim(tree_sim, common);
        else if (name == "dag-bounds") report = run_dag_bounds(dag_bounds, common);
        else if (name == "dag-trees") report = run_dag_trees(dag_trees, common);
        else if (name == "dag-sim") report = run_dag_sim(dag_sim, common);
        else if (name == "two-node") report = run_two_node(two_node, common);
        else if (name == "tree-proto") report = run_tree_proto(tree_proto, common);
        else if (name == "graph-bounds") report = run_graph_bounds(graph_bounds, common);
        else if (name == "graph-stars") report = run_graph_stars(graph_stars, common);
        else if (name == "lp") report = run_lp(lp, common);
        else report = emit_paper_suite(suite, common);

        const auto text = report.render(common.format);
        if (output.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(output);
            if (!out) throw Error(output + ": cannot open for writing");
            out << text;
        }
        if (name == "paper-suite") {
            for (const auto& [id, ok] : report.verdicts) std::cerr << (ok ? "PASS  " : "FAIL  ") << id << "\n";
        }
        if (const auto failed = report.first_failure()) {
            std::cerr << "infunc: verdict failed: " << *failed << "\n";
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "infunc: error: " << e.what() << "\n";
        return 2;
    }
}
