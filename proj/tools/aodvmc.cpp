#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "aodv/json_io.hpp"

using namespace aodv;

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCeiling = 3;

std::vector<std::string> split_edges(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

NodeId require_node(const std::string& s, int n, const std::string& flag) {
    auto id = parse_node_name(s);
    if (!id || *id >= n)
        throw CLI::ValidationError(flag, "bad node name '" + s + "'");
    return *id;
}

struct CheckOpts {
    std::string policy;
    int nodes = 4;
    std::string origin, dest;
    std::string topology;
    bool all_topologies = false;
    std::string constraint;
    int retries = 1, flips = 2, confirms = 2;
    int capacity = -1;  // -1: default to node count
    int queue_cap = 4;
    uint64_t max_states = 10'000'000;
    int workers = 1;
    bool diag_unconfirmed = false;
    bool progress = false;
    bool sol2_figure_order = false;
    bool fig3_literal = false;
    std::string json_path, dot_path;
};

void add_common_flags(CLI::App* cmd, CheckOpts& o, bool with_policy) {
    if (with_policy)
        cmd->add_option("--policy", o.policy, "v11|v13|v16|sol1|sol2")
            ->required();
    cmd->add_option("--nodes", o.nodes, "network size (2..8)")->required();
    cmd->add_option("--origin", o.origin, "originator, e.g. n1")->required();
    cmd->add_option("--dest", o.dest, "destination, e.g. n3")->required();
    auto* topo = cmd->add_option("--topology", o.topology,
                                 "initial edges, e.g. n1-n2,n2-n3");
    cmd->add_flag("--all-topologies", o.all_topologies,
                  "explore from every constraint-satisfying topology")
        ->excludes(topo);
    cmd->add_option("--constraint", o.constraint,
                    "e.g. and(con(n1,n2),!con(n3,n4))");
    cmd->add_option("--retries", o.retries, "rreq resend budget (default 1)");
    cmd->add_option("--flips", o.flips, "topology change budget (default 2)");
    cmd->add_option("--confirms", o.confirms,
                    "link confirmation budget (default 2)");
    cmd->add_option("--capacity", o.capacity,
                    "routes kept per destination (default: node count)");
    cmd->add_option("--queue-cap", o.queue_cap,
                    "per-link in-flight message cap (default 4)");
    cmd->add_option("--max-states", o.max_states, "state ceiling");
    cmd->add_option("--workers", o.workers, "parallel exploration workers");
    cmd->add_flag("--sol2-figure-order", o.sol2_figure_order,
                  "sol2: use the published listing's branch order (hop-count "
                  "test before the fresher-sequence test; admits loops)");
    cmd->add_flag("--fig3-literal", o.fig3_literal,
                  "sol1: keep the literal acceptance scan variant");
    cmd->add_flag("--diag-unconfirmed", o.diag_unconfirmed,
                  "also flag cycles over unconfirmed routes");
    cmd->add_flag("--progress", o.progress, "per-level search stats on stderr");
    cmd->add_option("--json", o.json_path, "write the verdict as JSON");
    cmd->add_option("--dot", o.dot_path, "write the flagged topology as DOT");
}

ExplorationConfig build_cfg(const CheckOpts& o, PolicyId policy) {
    if (o.nodes < 2 || o.nodes > 8)
        throw CLI::ValidationError("--nodes", "must be in 2..8");
    ExplorationConfig cfg;
    cfg.n = o.nodes;
    cfg.exec.engine.policy = PolicyConfig{policy};
    cfg.exec.engine.policy.sol2_seq_priority = !o.sol2_figure_order;
    cfg.exec.engine.policy.fig3_literal = o.fig3_literal;
    cfg.exec.engine.retry_budget = o.retries;
    cfg.exec.queue_cap = o.queue_cap;
    cfg.exec.capacity = o.capacity < 0 ? o.nodes : o.capacity;
    if (!o.constraint.empty()) {
        try {
            cfg.exec.constraint = parse_constraints(o.constraint, o.nodes);
        } catch (const ConstraintParseError& e) {
            throw CLI::ValidationError("--constraint", e.what());
        }
    }
    cfg.origin = require_node(o.origin, o.nodes, "--origin");
    cfg.dest = require_node(o.dest, o.nodes, "--dest");
    if (cfg.origin == cfg.dest)
        throw CLI::ValidationError("--dest", "origin and dest must differ");
    if (o.all_topologies) {
        cfg.initial_topo.reset();
    } else {
        if (o.topology.empty())
            throw CLI::ValidationError(
                "--topology", "required unless --all-topologies is given");
        cfg.initial_topo =
            topology_from_edges(o.nodes, split_edges(o.topology));
        if (!satisfies(*cfg.initial_topo, cfg.exec.constraint))
            throw CLI::ValidationError("--topology",
                                       "violates the constraint");
    }
    cfg.retry_budget = o.retries;
    cfg.topo_change_budget = o.flips;
    cfg.confirm_budget = o.confirms;
    cfg.max_states = o.max_states;
    cfg.workers = o.workers;
    cfg.diag_unconfirmed = o.diag_unconfirmed;
    cfg.progress = o.progress;
    return cfg;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

int report_verdict(const Verdict& v, const ExplorationConfig& cfg,
                   const CheckOpts& o) {
    switch (v.kind) {
        case Verdict::LoopFree:
            std::cout << "loop-free: frontier exhausted, " << v.states
                      << " states, " << v.transitions << " transitions";
            if (v.overflows)
                std::cout << " (" << v.overflows << " queue overflows pruned)";
            std::cout << "\n";
            break;
        case Verdict::Counterexample: {
            std::cout << "LOOP for dest " << node_name(v.cycle_dest)
                      << " via cycle [";
            for (size_t i = 0; i < v.cycle.size(); ++i)
                std::cout << (i ? ", " : "") << node_name(v.cycle[i]);
            std::cout << "] after " << v.trace.size() << " steps ("
                      << v.states << " states explored)\n";
            std::cout << "initial topology:";
            for (const auto& e : edges_to_strings(v.initial_topology))
                std::cout << " " << e;
            std::cout << "\ntrace:\n"
                      << trace_to_json(v.trace).dump(2) << "\n";
            break;
        }
        case Verdict::Inconclusive:
            std::cout << "inconclusive: ceiling hit after " << v.states
                      << " states (" << v.overflows << " queue overflows)\n";
            break;
    }
    if (!o.json_path.empty())
        write_file(o.json_path, verdict_to_json(v, cfg).dump(2) + "\n");
    if (!o.dot_path.empty()) {
        Topology t = v.kind == Verdict::Counterexample ? v.initial_topology
                     : cfg.initial_topo ? *cfg.initial_topo
                                        : Topology{cfg.n, 0};
        write_file(o.dot_path, topology_to_dot(t));
    }
    switch (v.kind) {
        case Verdict::LoopFree: return kExitHolds;
        case Verdict::Counterexample: return kExitViolation;
        default: return kExitCeiling;
    }
}

int cmd_check(const CheckOpts& o) {
    auto pol = parse_policy(o.policy);
    if (!pol) throw CLI::ValidationError("--policy", "unknown policy");
    ExplorationConfig cfg = build_cfg(o, *pol);
    Verdict v = explore(cfg);
    return report_verdict(v, cfg, o);
}

int cmd_compare(const CheckOpts& o) {
    static const PolicyId all[] = {PolicyId::V11, PolicyId::V13, PolicyId::V16,
                                   PolicyId::Solution1, PolicyId::Solution2};
    std::cout << "policy  verdict         states      cycle\n";
    for (PolicyId p : all) {
        ExplorationConfig cfg = build_cfg(o, p);
        Verdict v = explore(cfg);
        const char* verdict = v.kind == Verdict::LoopFree ? "LOOP-FREE"
                              : v.kind == Verdict::Counterexample
                                  ? "LOOP"
                                  : "INCONCLUSIVE";
        std::string cyc = "-";
        if (v.kind == Verdict::Counterexample) {
            cyc = "[";
            for (size_t i = 0; i < v.cycle.size(); ++i)
                cyc += (i ? ", " : "") + node_name(v.cycle[i]);
            cyc += "] dest " + node_name(v.cycle_dest);
        }
        std::printf("%-7s %-15s %-11llu %s\n", policy_name(p), verdict,
                    static_cast<unsigned long long>(v.states), cyc.c_str());
    }
    return kExitHolds;
}

struct ReplayOpts {
    std::string builtin_name, file, policy, trace_path, dump_path;
    bool quiet = false;
};

int cmd_replay(const ReplayOpts& o) {
    Scenario s;
    try {
        s = o.file.empty() ? builtin(o.builtin_name) : load_scenario(o.file);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    std::optional<PolicyConfig> override_pol;
    if (!o.policy.empty()) {
        auto p = parse_policy(o.policy);
        if (!p) {
            std::cerr << "error: unknown policy '" << o.policy << "'\n";
            return kExitUsage;
        }
        override_pol = PolicyConfig{*p};
    }
    if (!o.dump_path.empty()) save_scenario(s, o.dump_path);

    ScenarioRun run;
    try {
        run = run_scenario(s, override_pol);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (!o.quiet) {
        std::cout << "scenario " << s.name << " (policy "
                  << policy_name(override_pol ? override_pol->policy
                                              : s.policy)
                  << ", " << s.n << " nodes)\n";
        for (size_t i = 0; i < run.trace.size(); ++i) {
            const TraceStep& st = run.trace[i];
            std::cout << "  " << (i + 1) << ". "
                      << transition_to_string(st.t);
            for (const auto& out : st.outcomes)
                std::cout << " [" << node_name(out.at) << "->"
                          << node_name(out.nb)
                          << (out.delivered ? " ok" : " lost") << "]";
            std::cout << "\n";
        }
        for (const auto& r : run.results) {
            std::cout << (r.passed ? "  PASS " : "  FAIL ") << "after "
                      << r.after << ": " << assertion_to_string(r.check);
            if (!r.passed) std::cout << " — " << r.detail;
            std::cout << "\n";
        }
        for (int node = 0; node < s.n; ++node) {
            std::cout << "  " << node_name(node) << ":";
            for (const auto& e : run.final_state.nodes[node].table.entries)
                std::cout << " " << render_entry(e);
            std::cout << "\n";
        }
    }
    if (!o.trace_path.empty())
        write_file(o.trace_path, run_to_json(s, run).dump(2) + "\n");

    return run.all_passed() ? kExitHolds : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AODV route-discovery engine and bounded loop checker"};
    app.require_subcommand(1);

    CheckOpts check_opts, compare_opts;
    ReplayOpts replay_opts;

    auto* check = app.add_subcommand(
        "check", "search for a routing loop under bounded events");
    add_common_flags(check, check_opts, true);

    auto* replay = app.add_subcommand(
        "replay", "run a scripted scenario with step assertions");
    auto* bopt = replay->add_option("--builtin", replay_opts.builtin_name,
                                    "one of: v11_loop v13_loop v16_loop "
                                    "seven_node seven_node_sol");
    replay->add_option("--file", replay_opts.file, "scenario JSON file")
        ->excludes(bopt);
    replay->add_option("--policy", replay_opts.policy,
                       "override the scenario's policy");
    replay->add_option("--trace", replay_opts.trace_path,
                       "write the run log as JSON");
    replay->add_option("--dump", replay_opts.dump_path,
                       "write the scenario itself as JSON");
    replay->add_flag("--quiet", replay_opts.quiet, "suppress the step log");

    auto* compare = app.add_subcommand(
        "compare", "run the check under all five policies");
    add_common_flags(compare, compare_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_check(check_opts);
        if (compare->parsed()) return cmd_compare(compare_opts);
        if (replay->parsed()) {
            if (replay_opts.builtin_name.empty() && replay_opts.file.empty()) {
                std::cerr << "error: replay needs --builtin or --file\n";
                return kExitUsage;
            }
            return cmd_replay(replay_opts);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
