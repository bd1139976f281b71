#include "harness.hpp"

#include "infunc/infunc.hpp"

#include <cstdlib>
#include <random>
#include <sstream>

namespace infunc::harness {

namespace {

Json rate_json(const Log2Rate& r) {
    Json j;
    j["exact"] = r.expression();
    j["value"] = round6(r.value());
    return j;
}

Json rational_json(const Rational& r) {
    Json j;
    j["exact"] = to_string(r);
    j["value"] = round6(to_double(r));
    return j;
}

Json edge_json(const Edge& e) { return Json::array({e.from, e.to}); }

Json nodes_json(const std::vector<NodeId>& v) {
    Json j = Json::array();
    for (auto x : v) j.push_back(x);
    return j;
}

Json common_json(const Common& c, std::optional<std::uint64_t> seed) {
    Json j;
    if (seed) j["seed"] = *seed;
    j["cut_cap"] = c.cut_cap;
    j["enum_cap"] = c.enum_cap;
    return j;
}

std::vector<Letter> random_letters(std::size_t len, std::size_t alphabet, std::mt19937_64& rng) {
    std::vector<Letter> x(len);
    for (auto& v : x) v = static_cast<Letter>(rng() % alphabet);
    return x;
}

NetworkGraph example2_dag(std::size_t alphabet) {
    return NetworkGraph(GraphKind::Dag, 3, {{2, 1}, {3, 1}, {3, 2}}, {alphabet, alphabet, alphabet});
}

NetworkGraph example3_dag() { return NetworkGraph(GraphKind::Dag, 3, {{2, 1}, {3, 1}, {3, 2}}, {1, 2, 2}); }

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("INFUNC_SEED")) {
        try {
            std::size_t pos = 0;
            const auto v = std::stoull(env, &pos);
            if (pos == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw Error("INFUNC_SEED must be a non-negative integer");
    }
    return 1;
}

bool Report::passed() const { return !first_failure(); }

std::optional<std::string> Report::first_failure() const {
    for (const auto& [name, ok] : verdicts)
        if (!ok) return name;
    return std::nullopt;
}

Json Report::to_json() const {
    Json j;
    j["schema"] = kSchema;
    j["command"] = command;
    j["config"] = config;
    j["results"] = results;
    Json v = Json::object();
    for (const auto& [name, ok] : verdicts) v[name] = ok;
    j["verdicts"] = v;
    j["passed"] = passed();
    return j;
}

std::string Report::render(const std::string& format) const {
    const Json j = to_json();
    if (format == "json") return j.dump(2) + "\n";
    if (format != "csv") throw Error("unknown output format '" + format + "' (expected json or csv)");
    std::ostringstream out;
    out << "key,value\n";
    const Json flat = j.flatten();
    for (const auto& [key, value] : flat.items()) {
        std::string v = value.is_string() ? value.get<std::string>() : value.dump();
        if (v.find_first_of(",\"\n") != std::string::npos) {
            std::string q = "\"";
            for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            v = q + "\"";
        }
        out << key << "," << v << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------

Report run_partition(const PartitionOptions& o, const Common& c) {
    Report r;
    r.command = "partition";
    r.config = common_json(c, std::nullopt);
    r.config["function"] = o.function;
    r.config["side"] = o.side;
    if (!o.dist.empty()) r.config["dist"] = o.dist;
    if (o.block > 0) r.config["block"] = o.block;

    const auto f = io::parse_function(io::load_json_file(o.function));
    if (o.side >= f.arity()) throw Error("--side must be below the function arity");
    const auto part = optimal_partition(f, o.side);
    Json classes = Json::array();
    for (const auto& cls : part.classes()) {
        Json cj = Json::array();
        for (auto x : cls) cj.push_back(x);
        classes.push_back(cj);
    }
    r.results["classes"] = classes;
    r.results["k"] = part.size();
    r.results["worst_case_bits"] = ceil_log2(BigInt(part.size()));
    r.results["rate"] = rate_json({part.size()});

    // Decoding from one representative per class reproduces f everywhere.
    bool exact = true;
    Tuple t(f.arity(), 0);
    do {
        Tuple rep = t;
        rep[o.side] = part.classes()[part.class_of(t[o.side])].front();
        exact = exact && f(rep) == f(t);
    } while (f.space().next(t));
    r.verdict("decoder_exact", exact);

    if (o.block > 0) {
        const auto bp = block_partition(f, o.side, o.block);
        Json bj;
        bj["block_length"] = bp.block_length;
        bj["classes"] = bp.block_classes.str();
        bj["bits"] = bp.block_bits;
        bj["rate"] = round6(bp.rate);
        r.results["block"] = bj;
    }

    if (!o.dist.empty()) {
        const auto p = io::parse_distribution(io::load_json_file(o.dist), f.alphabet_sizes());
        Partition used = part;
        if (f.arity() == 2) {
            const auto rel = optimal_partition_supported(f, o.side, p);
            r.results["supported_relation_transitive"] = rel.transitive;
            if (rel.partition) {
                used = *rel.partition;
                r.results["supported_k"] = used.size();
            }
        }
        const auto q = induced_distribution(used, o.side, p);
        const auto code = huffman_code(q);
        const double h = entropy_bits(q);
        const auto el = code.expected_length(q);
        Json qj = Json::array(), lj = Json::array();
        for (const auto& x : q) qj.push_back(to_string(x));
        for (auto l : code.lengths) lj.push_back(l);
        r.results["distribution"] = qj;
        r.results["huffman_lengths"] = lj;
        r.results["entropy"] = round6(h);
        r.results["expected_length"] = rational_json(el);
        r.verdict("kraft", code.kraft_sum() <= 1 && code.prefix_free());
        const double e = to_double(el);
        r.verdict("entropy_sandwich", h <= e + kRateTolerance && e <= h + 1 + kRateTolerance);
    }
    return r;
}

Report run_tree_rates(const TreeRatesOptions& o, const Common& c) {
    Report r;
    r.command = "tree-rates";
    r.config = common_json(c, std::nullopt);
    r.config["function"] = o.function;
    r.config["graph"] = o.graph;
    if (!o.dist.empty()) r.config["dist"] = o.dist;

    const auto f = io::parse_function(io::load_json_file(o.function));
    const auto g = io::parse_graph(io::load_json_file(o.graph));
    const TreeCode code(f, g, c.enum_cap);
    std::optional<JointDistribution> p;
    if (!o.dist.empty()) p = io::parse_distribution(io::load_json_file(o.dist), f.alphabet_sizes());

    std::vector<TreeAverageEdge> avg;
    if (p) avg = tree_average_rates(code, *p);
    Json edges = Json::array();
    for (NodeId v = 1; v <= g.node_count(); ++v) {
        if (v == g.collector()) continue;
        const auto& a = code.alphabet(v);
        const auto e = g.out_edges(v).front();
        Json ej;
        ej["edge"] = edge_json(g.edges()[e]);
        ej["alphabet_size"] = a.size();
        ej["wc_rate"] = rate_json({a.size()});
        ej["single_shot_bits"] = a.single_shot_bits();
        for (const auto& x : avg) {
            if (x.node != v) continue;
            ej["avg_rate"] = round6(x.entropy);
            ej["huffman_expected_length"] = rational_json(x.expected_length);
        }
        edges.push_back(ej);
    }
    r.results["edges"] = edges;
    const auto dist = p ? *p : JointDistribution::uniform(f.alphabet_sizes());
    const auto violations = tree_cut_feasibility_check(f, g, code.encoders(), dist, c.cut_cap);
    r.results["violated_cuts"] = violations.size();
    r.verdict("cut_feasible", violations.empty());
    return r;
}

Report run_tree_sim(const TreeSimOptions& o, const Common& c) {
    const auto seed = resolve_seed(c.seed);
    Report r;
    r.command = "tree-sim";
    r.config = common_json(c, seed);
    r.config["function"] = o.function;
    r.config["graph"] = o.graph;
    r.config["block"] = o.block;
    r.config["sim"] = o.sim;
    if (o.block == 0) throw Error("--block must be positive");

    const auto f = io::parse_function(io::load_json_file(o.function));
    const auto g = io::parse_graph(io::load_json_file(o.graph));
    const TreeCode code(f, g, c.enum_cap);
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> max_bits(g.edges().size(), 0);
    bool zero_error = true;
    for (std::size_t s = 0; s < o.sim; ++s) {
        const auto run = run_tree_computation(code, random_block(g.alphabet_sizes(), o.block, rng));
        zero_error = zero_error && run.zero_error;
        const auto bits = run.transcript.per_edge_bits();
        for (std::size_t e = 0; e < bits.size(); ++e) max_bits[e] = std::max(max_bits[e], bits[e]);
    }
    bool within = true;
    Json edges = Json::array();
    for (NodeId v = 1; v <= g.node_count(); ++v) {
        if (v == g.collector()) continue;
        const auto e = g.out_edges(v).front();
        const auto ceiling = ceil_block_log2(code.alphabet(v).size(), o.block);
        Json ej;
        ej["edge"] = edge_json(g.edges()[e]);
        ej["alphabet_size"] = code.alphabet(v).size();
        ej["measured_max_bits"] = max_bits[e];
        ej["bound_ceiling"] = ceiling;
        edges.push_back(ej);
        within = within && max_bits[e] <= ceiling;
    }
    r.results["edges"] = edges;
    r.results["zero_error"] = zero_error;
    r.verdict("zero_error", zero_error);
    r.verdict("within_ceiling", within);
    return r;
}

namespace {

Json bounds_json(const NetworkGraph& g, const OuterBound& ob) {
    Json arr = Json::array();
    for (const auto& b : ob.cuts) {
        Json j;
        j["cut"] = nodes_json(b.cut.source_side);
        Json ej = Json::array();
        for (auto e : b.edges) ej.push_back(edge_json(g.edges()[e]));
        j["edges"] = ej;
        if (b.classes) {
            j["classes"] = *b.classes;
            j["bound"] = rate_json({*b.classes});
        } else {
            j["bound"] = {{"value", round6(b.bound)}};
        }
        j["conditioning"] = nodes_json(b.conditioning);
        arr.push_back(j);
    }
    return arr;
}

RateVector to_doubles(const std::vector<Rational>& r) {
    RateVector out;
    for (const auto& x : r) out.push_back(to_double(x));
    return out;
}

}  // namespace

Report run_dag_bounds(const DagBoundsOptions& o, const Common& c) {
    Report r;
    r.command = "dag-bounds";
    r.config = common_json(c, std::nullopt);
    r.config["function"] = o.function;
    r.config["graph"] = o.graph;
    if (!o.dist.empty()) r.config["dist"] = o.dist;
    if (!o.rates.empty()) r.config["rates"] = o.rates;

    const auto f = io::parse_function(io::load_json_file(o.function));
    const auto g = io::parse_graph(io::load_json_file(o.graph));
    const auto worst = dag_outer_bound(f, g, c.cut_cap, c.enum_cap);
    r.results["worst_case"] = bounds_json(g, worst);
    bool nonneg = true;
    for (const auto& b : worst.cuts) nonneg = nonneg && b.bound >= 0 && b.classes.value_or(1) >= 1;
    if (!o.dist.empty()) {
        const auto p = io::parse_distribution(io::load_json_file(o.dist), f.alphabet_sizes());
        const auto avg = dag_outer_bound_average(f, g, p, c.cut_cap, c.enum_cap);
        r.results["average_case"] = bounds_json(g, avg);
        for (const auto& b : avg.cuts) nonneg = nonneg && b.bound >= -kRateTolerance;
    }
    r.verdict("bounds_nonnegative", nonneg);
    if (!o.rates.empty()) {
        const auto rates = to_doubles(io::parse_rates(io::load_json_file(o.rates)));
        const auto check = check_rate_point(worst, rates);
        Json vj = Json::array();
        for (auto i : check.violated) vj.push_back(nodes_json(worst.cuts[i].cut.source_side));
        r.results["rate_point"] = {{"satisfied", check.satisfied}, {"violated_cuts", vj}};
        r.verdict("rate_point_feasible", check.satisfied);
    }
    return r;
}

Report run_dag_trees(const DagTreesOptions& o, const Common& c) {
    Report r;
    r.command = "dag-trees";
    r.config = common_json(c, std::nullopt);
    r.config["function"] = o.function;
    r.config["graph"] = o.graph;
    r.config["tree_cap"] = o.tree_cap;
    if (!o.rates.empty()) r.config["rates"] = o.rates;

    const auto f = io::parse_function(io::load_json_file(o.function));
    const auto g = io::parse_graph(io::load_json_file(o.graph));
    const auto bounds = dag_outer_bound(f, g, c.cut_cap, c.enum_cap);
    const auto points = tree_achievable_points(f, g, o.tree_cap, c.enum_cap);
    Json arr = Json::array();
    bool within = true;
    std::vector<RateVector> pts;
    for (const auto& p : points) {
        Json j;
        Json te = Json::array();
        for (auto e : p.tree_edges) te.push_back(edge_json(g.edges()[e]));
        j["tree"] = te;
        Json rates = Json::array();
        for (auto k : p.alphabet_sizes) rates.push_back(rate_json({k}));
        j["rates"] = rates;
        arr.push_back(j);
        within = within && check_rate_point(bounds, p.rates).satisfied;
        pts.push_back(p.rates);
    }
    r.results["points"] = arr;
    r.verdict("points_within_bounds", within);
    if (!o.rates.empty()) {
        const auto rates = to_doubles(io::parse_rates(io::load_json_file(o.rates)));
        if (rates.size() != g.edges().size()) throw Error("rates: expected one entry per graph edge");
        Json q;
        q["satisfies_bounds"] = check_rate_point(bounds, rates).satisfied;
        q["in_hull"] = hull_membership(pts, rates).member;
        q["dominates_hull_point"] = hull_membership(pts, rates, kRateTolerance, true).member;
        r.results["query"] = q;
    }
    return r;
}

Report run_dag_sim(const DagSimOptions& o, const Common& c) {
    const auto seed = resolve_seed(c.seed);
    Report r;
    r.command = "dag-sim";
    r.config = common_json(c, seed);
    r.config["builtin"] = o.builtin;
    if (o.builtin == "parity") r.config["modulus"] = o.modulus;
    r.config["graph"] = o.graph.empty() ? std::string("example-2") : o.graph;
    r.config["block"] = o.block;
    r.config["sim"] = o.sim;
    if (o.block == 0) throw Error("--block must be positive");

    SplitAggregation agg{parse_aggregate(o.builtin), o.modulus};
    const auto g = o.graph.empty() ? example2_dag(agg.kind == Aggregate::Parity ? o.modulus : 4)
                                   : io::parse_graph(io::load_json_file(o.graph));
    const auto f = agg.function(g);
    const auto bounds = dag_outer_bound(f, g, c.cut_cap, c.enum_cap);
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> max_bits(g.edges().size(), 0);
    bool zero_error = true;
    for (std::size_t s = 0; s < std::max<std::size_t>(o.sim, 1); ++s) {
        const auto run = simulate_split_aggregation(agg, g, random_block(g.alphabet_sizes(), o.block, rng));
        zero_error = zero_error && run.zero_error;
        const auto bits = run.transcript.per_edge_bits();
        for (std::size_t e = 0; e < bits.size(); ++e) max_bits[e] = std::max(max_bits[e], bits[e]);
    }
    RateVector rates;
    Json ej = Json::array();
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        rates.push_back(static_cast<double>(max_bits[e]) / static_cast<double>(o.block));
        ej.push_back({{"edge", edge_json(g.edges()[e])}, {"bits", max_bits[e]}, {"rate", round6(rates.back())}});
    }
    r.results["edges"] = ej;
    r.results["bounds"] = bounds_json(g, bounds);
    const auto check = check_rate_point(bounds, rates);
    bool tight = true;
    const double range_bits = std::log2(static_cast<double>(agg.range(g)));
    for (const auto& b : bounds.cuts) {
        if (b.cut.source_side.size() != 1 || std::abs(b.bound - range_bits) > kRateTolerance) continue;
        double s = 0.0;
        for (auto e : b.edges) s += rates[e];
        tight = tight && s - b.bound <= static_cast<double>(b.edges.size()) / static_cast<double>(o.block) +
                                           kRateTolerance;
    }
    r.results["zero_error"] = zero_error;
    r.verdict("zero_error", zero_error);
    r.verdict("bounds_met", check.satisfied);
    r.verdict("binding_cuts_tight", tight);
    return r;
}

Report run_two_node(const TwoNodeOptions& o, const Common& c) {
    const auto seed = resolve_seed(c.seed);
    Report r;
    r.command = "two-node";
    r.config = common_json(c, seed);
    r.config["kind"] = o.kind;
    r.config["block"] = o.block;
    r.config["sim"] = o.sim;
    if (o.block == 0) throw Error("--block must be positive");
    if (o.speaker != 1 && o.speaker != 2) throw Error("--speaker must be 1 or 2");

    std::optional<TwoNodeScheme> scheme;
    Log2Rate claimed;
    if (o.kind == "threshold") {
        r.config["m1"] = o.m1;
        r.config["m2"] = o.m2;
        r.config["theta"] = o.theta;
        r.config["speaker"] = o.speaker;
        const ThresholdSpec spec(o.m1, o.m2, o.theta);
        scheme.emplace(threshold_scheme(spec, o.speaker - 1));
        claimed = threshold_complexity(spec);
        const auto z = fooling_bound_threshold(spec);
        r.results["rate"] = rate_json(claimed);
        r.results["fooling_size"] = z.size();
        r.verdict("fooling_verified", z.verified);
        r.verdict("fooling_matches_rate", z.size() == claimed.argument);
    } else if (o.kind == "interval") {
        r.config["m1"] = o.m1;
        r.config["m2"] = o.m2;
        r.config["a"] = o.a;
        r.config["b"] = o.b;
        const IntervalSpec spec(o.m1, o.m2, o.a, o.b);
        const auto bounds = interval_bounds(spec);
        scheme.emplace(interval_scheme(spec));
        claimed = bounds.upper;
        r.results["rate"] = rate_json(bounds.upper);
        r.results["lower"] = rate_json(bounds.lower);
        r.results["gap"] = round6(bounds.gap());
        r.results["fooling_size"] = bounds.fooling.size();
        r.verdict("fooling_verified", bounds.fooling.verified);
        r.verdict("gap_within_one_bit", bounds.gap() <= 1.0 + kRateTolerance);
    } else if (o.kind == "general") {
        r.config["function"] = o.function;
        const auto f = io::parse_function(io::load_json_file(o.function));
        scheme.emplace(general_separation_coding(f));
        claimed = scheme->rate();
        r.results["rate"] = rate_json(claimed);
        r.results["reduced_size"] = scheme->reduced_size();
        r.results["always_zero"] = scheme->always_zero();
        r.results["always_one"] = scheme->always_one();
    } else {
        throw Error("--kind must be threshold, interval or general");
    }

    const auto book = scheme->codebook(o.block);
    const auto& sizes = scheme->function().alphabet_sizes();
    r.results["scheme_rate"] = rate_json(scheme->rate());
    r.results["L"] = book.worst_case_total();
    std::mt19937_64 rng(seed);
    std::size_t sim_max = 0;
    bool zero_error = true;
    for (std::size_t s = 0; s < o.sim; ++s) {
        const auto x1 = random_letters(o.block, sizes[0], rng);
        const auto x2 = random_letters(o.block, sizes[1], rng);
        const auto run = run_two_node(*scheme, book, x1, x2);
        zero_error = zero_error && run.zero_error;
        sim_max = std::max(sim_max, run.total_bits());
    }
    r.results["sim_max_bits"] = sim_max;
    r.results["bound_ceiling"] = claimed.block_bits(o.block);
    r.results["zero_error"] = zero_error;
    r.verdict("kraft", book.kraft_identity());
    r.verdict("zero_error", zero_error);
    r.verdict("within_ceiling", sim_max <= claimed.block_bits(o.block));
    return r;
}

Report run_tree_proto(const TreeProtoOptions& o, const Common& c) {
    const auto seed = resolve_seed(c.seed);
    Report r;
    r.command = "tree-proto";
    r.config = common_json(c, seed);
    r.config["graph"] = o.graph;
    r.config["block"] = o.block;
    r.config["sim"] = o.sim;
    if (o.block == 0) throw Error("--block must be positive");
    if (o.theta.has_value() == o.interval.has_value()) throw Error("give exactly one of --theta and --interval");

    const auto g = io::parse_graph(io::load_json_file(o.graph));
    const NodeId root = o.root ? *o.root : weighted_centroid(g);
    r.config["root"] = root;
    std::vector<EdgeCutProfile> profiles;
    if (o.theta) {
        r.config["theta"] = *o.theta;
        profiles = edge_complexities(g, *o.theta);
    } else {
        r.config["interval"] = Json::array({o.interval->first, o.interval->second});
        profiles = interval_edge_complexities(g, o.interval->first, o.interval->second);
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> max_bits(g.edges().size(), 0);
    bool zero_error = true;
    for (std::size_t s = 0; s < o.sim; ++s) {
        const auto block = random_block(g.alphabet_sizes(), o.block, rng);
        const auto run = o.theta ? run_tree_protocol(g, *o.theta, root, block)
                                 : run_tree_interval_protocol(g, o.interval->first, o.interval->second, root, block);
        zero_error = zero_error && run.zero_error;
        const auto bits = run.transcript.per_edge_bits();
        for (std::size_t e = 0; e < bits.size(); ++e) max_bits[e] = std::max(max_bits[e], bits[e]);
    }
    bool within = true;
    Json edges = Json::array();
    for (const auto& p : profiles) {
        Json j;
        j["edge"] = edge_json(g.edges()[p.edge]);
        j["l_side"] = p.l_side;
        j["l_rest"] = p.l_rest;
        j["complexity"] = rate_json(p.complexity);
        if (p.lower) j["lower"] = rate_json(*p.lower);
        j["measured_max_bits"] = max_bits[p.edge];
        j["bound_ceiling"] = p.complexity.block_bits(o.block);
        within = within && max_bits[p.edge] <= p.complexity.block_bits(o.block);
        edges.push_back(j);
    }
    r.results["edges"] = edges;
    r.results["zero_error"] = zero_error;
    r.verdict("zero_error", zero_error);
    r.verdict("within_ceiling", within);
    return r;
}

Report run_graph_bounds(const GraphBoundsOptions& o, const Common& c) {
    Report r;
    r.command = "graph-bounds";
    r.config = common_json(c, std::nullopt);
    r.config["graph"] = o.graph;
    r.config["theta"] = o.theta;
    const auto g = io::parse_graph(io::load_json_file(o.graph));
    const auto cuts = graph_cut_bounds(g, o.theta, c.cut_cap);
    Json arr = Json::array();
    for (const auto& b : cuts) {
        Json j;
        j["side"] = nodes_json(b.cut.source_side);
        Json fj = Json::array();
        for (auto e : b.cut.crossing) fj.push_back(edge_json(g.edges()[e]));
        j["crossing"] = fj;
        j["l_side"] = b.l_side;
        j["m"] = b.m;
        j["bound"] = rate_json(b.bound);
        arr.push_back(j);
    }
    r.results["cuts"] = arr;
    r.results["R_cut"] = round6(symmetric_cut_rate(cuts));
    r.verdict("all_bipartitions", cuts.size() == (std::size_t{1} << (g.node_count() - 1)) - 1);
    return r;
}

Report run_graph_stars(const GraphStarsOptions& o, const Common& c) {
    Report r;
    r.command = "graph-stars";
    r.config = common_json(c, std::nullopt);
    r.config["n"] = o.n;
    r.config["l"] = o.l;
    r.config["theta"] = o.theta;
    if (o.n < 2) throw Error("--n must be at least 2");
    std::vector<std::size_t> sizes;
    if (o.l.size() == 1) sizes.assign(o.n, o.l.front() + 1);
    else if (o.l.size() == o.n)
        for (auto x : o.l) sizes.push_back(x + 1);
    else throw Error("--l must list one value or exactly n values");
    const auto g = complete_graph(o.n, sizes);
    const auto stars = star_aggregation_rates(g, o.theta);
    const auto ratio = ratio_check(g, o.theta, c.cut_cap);
    Json ej = Json::array();
    for (std::size_t e = 0; e < g.edges().size(); ++e)
        ej.push_back({{"edge", edge_json(g.edges()[e])}, {"rate", round6(stars.per_edge[e])}});
    r.results["edges"] = ej;
    r.results["R_ach"] = round6(ratio.r_ach);
    r.results["R_cut"] = round6(ratio.r_cut);
    r.results["ratio"] = round6(ratio.ratio);
    r.results["limit"] = round6(ratio.limit);
    r.verdict("ratio_within_limit", ratio.within);
    return r;
}

Report run_lp(const LpOptions& o, const Common& c) {
    Report r;
    r.command = "lp";
    r.config = common_json(c, std::nullopt);
    r.config["graph"] = o.graph;
    r.config["rates"] = o.rates;
    if (!o.trees.empty()) r.config["trees"] = o.trees;
    r.config["theta"] = o.theta;
    const auto g = io::parse_graph(io::load_json_file(o.graph));
    const auto rates = io::parse_rates(io::load_json_file(o.rates));
    if (rates.size() != g.edges().size()) throw Error("rates: expected one entry per graph edge");
    std::vector<TreeScheme> schemes;
    if (o.trees.empty()) {
        schemes = star_schemes(g, o.theta);
    } else {
        for (auto& t : io::parse_trees(io::load_json_file(o.trees), g))
            schemes.push_back(make_tree_scheme(g, std::move(t), o.theta));
    }
    const auto res = tradeoff_lp(schemes, rates);
    r.results["status"] = to_string(res.status);
    if (res.status == LpStatus::Optimal) {
        r.results["t_star"] = rational_json(res.t_star);
        Json lj = Json::array();
        for (const auto& x : res.lambda) lj.push_back(rational_json(x));
        r.results["lambda_star"] = lj;
        r.results["lambda_sum"] = rational_json(res.lambda_sum);
    }
    r.verdict("optimal", res.status == LpStatus::Optimal);
    r.verdict("certificate", res.certificate);
    return r;
}

// ---------------------------------------------------------------------------
// Built-in reproduction checks

std::vector<SuiteCheck> paper_suite_checks(const PaperSuiteOptions& o) {
    std::vector<SuiteCheck> out;
    auto add = [&](std::string id, std::string claim, auto&& body) {
        SuiteCheck c;
        c.id = std::move(id);
        c.claim = std::move(claim);
        try {
            std::tie(c.passed, c.detail) = body();
        } catch (const std::exception& e) {
            c.passed = false;
            c.detail = std::string("exception: ") + e.what();
        }
        out.push_back(std::move(c));
    };

    add("example-1-cut", "constant leaf encoders violate the cut ({v2,v3},{v1})", [] {
        const NetworkGraph g(GraphKind::DirectedTree, 3, {{2, 1}, {3, 1}}, {1, 2, 2});
        const auto f = builtin::identity({1, 2, 2});
        std::vector<Rational> probs(4, Rational(0));
        probs[0] = make_rational(1, 2);  // (a,a,a)
        probs[3] = make_rational(1, 2);  // (a,b,b)
        const JointDistribution p({1, 2, 2}, probs);
        TreeEncoderSet enc;
        enc.encoders.resize(3);
        for (NodeId v : {2, 3})
            enc.encoders[v - 1] = NodeEncoder{1, [](Letter, std::span<const std::size_t>) { return std::size_t{0}; }};
        const auto viol = tree_cut_feasibility_check(f, g, enc, p);
        const bool ok = viol.size() == 1 && viol[0].cut.source_side == std::vector<NodeId>{2, 3};
        return std::pair{ok, std::to_string(viol.size()) + " violated cut(s)"};
    });

    add("example-3-worst-case", "R21>=1, R21+R31>=log2(3), R32+R31>=1", [] {
        const auto g = example3_dag();
        const auto ob = dag_outer_bound(builtin::arithmetic_sum({1, 2, 2}), g);
        std::map<std::vector<NodeId>, std::uint64_t> got;
        for (const auto& b : ob.cuts) got[b.cut.source_side] = *b.classes;
        const bool ok = got.size() == 3 && got[{2}] == 2 && got[{2, 3}] == 3 && got[{3}] == 2;
        return std::pair{ok, "classes {v2}:" + std::to_string(got[{2}]) + " {v2,v3}:" + std::to_string(got[{2, 3}]) +
                                 " {v3}:" + std::to_string(got[{3}])};
    });

    add("example-3-average-case", "uniform i.i.d.: R21>=1, R21+R31>=3/2, R32+R31>=1", [] {
        const auto g = example3_dag();
        const auto p = JointDistribution::uniform({1, 2, 2});
        const auto ob = dag_outer_bound_average(builtin::arithmetic_sum({1, 2, 2}), g, p);
        std::map<std::vector<NodeId>, double> got;
        for (const auto& b : ob.cuts) got[b.cut.source_side] = b.bound;
        const bool ok = std::abs(got[{2}] - 1.0) < kRateTolerance && std::abs(got[{2, 3}] - 1.5) < kRateTolerance &&
                        std::abs(got[{3}] - 1.0) < kRateTolerance;
        return std::pair{ok, "H values " + std::to_string(got[{2}]) + ", " + std::to_string(got[{2, 3}]) + ", " +
                                 std::to_string(got[{3}])};
    });

    add("parity-single-node-cuts", "parity mod D: every single-node cut gives sum R >= log2 D", [] {
        bool ok = true;
        for (std::uint64_t d : {2u, 3u, 4u}) {
            const auto g = example2_dag(d);
            const auto ob = dag_outer_bound(builtin::parity(g.alphabet_sizes(), d), g);
            for (const auto& b : ob.cuts)
                if (b.cut.source_side.size() == 1) ok = ok && *b.classes == d;
        }
        return std::pair{ok, std::string("D in {2,3,4} on the three-node DAG")};
    });

    add("example-2-tree-points", "mod-4 DAG trees give (2,2,0) and (2,0,2)", [] {
        const auto g = example2_dag(4);
        const auto pts = tree_achievable_points(builtin::parity(g.alphabet_sizes(), 4), g);
        std::set<std::vector<std::uint64_t>> got;
        for (const auto& p : pts) got.insert(p.alphabet_sizes);
        const std::set<std::vector<std::uint64_t>> want{{4, 4, 1}, {4, 1, 4}};
        return std::pair{got == want, std::to_string(pts.size()) + " tree point(s)"};
    });

    add("example-3-lambda-family", "mixtures (lambda+(1-lambda)log2 3, lambda, 1-lambda) are achievable", [] {
        const auto g = example3_dag();
        const auto f = builtin::arithmetic_sum({1, 2, 2});
        const auto pts = tree_achievable_points(f, g);
        const auto ob = dag_outer_bound(f, g);
        std::vector<RateVector> hull;
        for (const auto& p : pts) hull.push_back(p.rates);
        bool ok = pts.size() == 2;
        for (int k = 0; k <= 4; ++k) {
            const double lam = k / 4.0;
            const RateVector r{lam + (1 - lam) * std::log2(3.0), lam, 1 - lam};
            ok = ok && hull_membership(hull, r).member && check_rate_point(ob, r).satisfied;
        }
        return std::pair{ok, std::string("lambda in {0,1/4,1/2,3/4,1}")};
    });

    add("and-single-instance", "AND with N=1 needs ceil(log2 3) = 2 bits in the worst case", [] {
        const auto scheme = and_scheme();
        const auto book = scheme.codebook(1);
        std::size_t worst = 0;
        bool zero = true;
        for (Letter a = 0; a < 2; ++a)
            for (Letter b = 0; b < 2; ++b) {
                const std::vector<Letter> x1{a}, x2{b};
                const auto run = run_two_node(scheme, book, x1, x2);
                worst = std::max(worst, run.total_bits());
                zero = zero && run.zero_error;
            }
        return std::pair{zero && worst == 2, "worst case " + std::to_string(worst) + " bits"};
    });

    add("threshold-recovers-and", "m1=m2=1, theta=2 gives log2 3", [&o] {
        const std::int64_t theta = o.inject_theta_fault ? 3 : 2;
        const ThresholdSpec spec(1, 1, theta);
        const auto rate = threshold_complexity(spec);
        const auto weight = threshold_scheme(spec, 0).rate();
        return std::pair{rate.argument == 3 && weight.argument == 3,
                         "theta=" + std::to_string(theta) + " rate " + rate.expression()};
    });

    add("and-fooling-set", "AND fooling set has 3 columns and 3^N block matrices", [] {
        const auto z = fooling_bound_threshold(ThresholdSpec(1, 1, 2));
        const bool block_ok = verify_block_fooling_set(builtin::sum_threshold({2, 2}, 2), z.columns, 3);
        return std::pair{z.size() == 3 && z.verified && block_ok, "|Z|=" + std::to_string(z.size()) + ", N=3 checked"};
    });

    const auto tight_sweep = [](auto&& pred) {
        bool ok = true;
        for (std::size_t n = 3; n <= 6; ++n)
            for (std::uint64_t l = 1; l <= 2; ++l) {
                const std::int64_t theta = static_cast<std::int64_t>(l) + 1;
                const auto g = complete_graph(n, std::vector<std::size_t>(n, l + 1));
                const double c = std::min(std::log2(2.0 * theta + 1), std::log2(2.0 * l + 2));
                ok = ok && pred(g, theta, c, static_cast<double>(n));
            }
        return ok;
    };

    add("tight-R-cut", "uniform l, theta>l: R_cut = min(log2(2theta+1), log2(2l+2)) / (n-1)", [&] {
        const bool ok = tight_sweep([](const NetworkGraph& g, std::int64_t theta, double c, double n) {
            return std::abs(symmetric_cut_rate(graph_cut_bounds(g, theta)) - c / (n - 1)) < 1e-12;
        });
        return std::pair{ok, std::string("n in 3..6, l in 1..2")};
    });

    add("tight-R-ach", "uniform l, theta>l: R_ach = 2 min(log2(2theta+1), log2(2l+2)) / n", [&] {
        const bool ok = tight_sweep([](const NetworkGraph& g, std::int64_t theta, double c, double n) {
            return std::abs(star_aggregation_rates(g, theta).r_ach - 2 * c / n) < 1e-12;
        });
        return std::pair{ok, std::string("n in 3..6, l in 1..2")};
    });

    add("tight-ratio", "uniform l, theta>l: R_ach / R_cut = 2(1-1/n)", [&] {
        const bool ok = tight_sweep([](const NetworkGraph& g, std::int64_t theta, double, double n) {
            return std::abs(ratio_check(g, theta).ratio - 2 * (1 - 1 / n)) < 1e-12;
        });
        return std::pair{ok, std::string("n in 3..6, l in 1..2")};
    });

    add("threshold-theorem", "scheme weight and fooling set match min(2theta+1, 2m1+2, 2(n-theta+1)+1)", [] {
        bool ok = true;
        for (std::uint64_t m1 = 1; m1 <= 3; ++m1)
            for (std::uint64_t m2 = 1; m2 <= 3; ++m2)
                for (std::int64_t t = 0; t <= static_cast<std::int64_t>(m1 + m2) + 1; ++t) {
                    const ThresholdSpec s(m1, m2, t);
                    const auto want = threshold_complexity(s).argument;
                    const auto z = fooling_bound_threshold(s);
                    ok = ok && z.verified && z.size() == want && threshold_scheme(s, 0).rate().argument == want &&
                         threshold_scheme(s, 1).rate().argument == want;
                }
        return std::pair{ok, std::string("m1, m2 <= 3, all theta")};
    });

    add("interval-theorem", "verified fooling bound <= scheme rate <= upper bound, gap <= 1 bit", [] {
        bool ok = true;
        for (std::uint64_t m1 = 1; m1 <= 3; ++m1)
            for (std::uint64_t m2 = 1; m2 <= 3; ++m2)
                for (std::int64_t b = 0; 2 * b <= static_cast<std::int64_t>(m1 + m2); ++b)
                    for (std::int64_t a = 0; a <= b; ++a) {
                        const IntervalSpec s(m1, m2, a, b);
                        const auto bounds = interval_bounds(s);
                        const auto w = interval_scheme(s).rate();
                        ok = ok && bounds.fooling.verified && bounds.lower <= w && w <= bounds.upper &&
                             bounds.gap() <= 1.0 + kRateTolerance;
                    }
        return std::pair{ok, std::string("m1, m2 <= 3, b <= n/2")};
    });

    add("tree-theorem", "every node decodes; edge bits match the cut formula", [] {
        bool ok = true;
        const NetworkGraph path(GraphKind::UndirectedTree, 3, {{1, 2}, {2, 3}});
        const NetworkGraph star(GraphKind::UndirectedTree, 4, {{1, 2}, {1, 3}, {1, 4}});
        for (const auto* g : {&path, &star}) {
            for (std::int64_t t = 0; t <= static_cast<std::int64_t>(g->node_count()) + 1; ++t) {
                const auto profiles = edge_complexities(*g, t);
                for (NodeId root = 1; root <= g->node_count(); ++root) {
                    ProductSpace space(g->alphabet_sizes());
                    Tuple x(g->node_count(), 0);
                    do {
                        std::vector<std::vector<Letter>> seqs;
                        for (auto v : x) seqs.push_back({v});
                        const auto run = run_tree_protocol(*g, t, root, Block(seqs));
                        ok = ok && run.zero_error;
                        for (const auto& p : profiles)
                            ok = ok && run.edge_budget[p.edge] == p.complexity.block_bits(1);
                    } while (space.next(x));
                }
            }
        }
        return std::pair{ok, std::string("3-node path and 4-node star, all theta and roots, N=1")};
    });

    add("lp-tight-case", "complete n=4, r = R_cut: t* = 2(1-1/n) = 3/2", [] {
        const auto g = complete_graph(4);
        const std::int64_t theta = 2;
        const auto stars = star_schemes(g, theta);
        const Rational c = exact_rational(std::log2(4.0));
        const std::vector<Rational> r(g.edges().size(), c / 3);
        const auto res = tradeoff_lp(stars, r);
        const bool ok = res.status == LpStatus::Optimal && res.certificate && res.t_star == make_rational(3, 2);
        return std::pair{ok, "t* = " + to_string(res.t_star)};
    });

    return out;
}

Report emit_paper_suite(const PaperSuiteOptions& o, const Common& c) {
    Report r;
    r.command = "paper-suite";
    r.config = common_json(c, std::nullopt);
    r.config["inject_theta_fault"] = o.inject_theta_fault;
    Json arr = Json::array();
    for (const auto& check : paper_suite_checks(o)) {
        arr.push_back({{"id", check.id}, {"claim", check.claim}, {"passed", check.passed}, {"detail", check.detail}});
        r.verdict(check.id, check.passed);
    }
    r.results["checks"] = arr;
    return r;
}

}  // namespace infunc::harness
