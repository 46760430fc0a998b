// Times the bounded search single-threaded against the parallel frontier
// walk and cross-checks that both classify the run identically.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>

#include "aodv/checker.hpp"

using namespace aodv;
using Clock = std::chrono::steady_clock;

namespace {

double run_once(ExplorationConfig cfg, int workers, Verdict& out) {
    cfg.workers = workers;
    auto t0 = Clock::now();
    out = explore(cfg);
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* kind_name(Verdict::Kind k) {
    switch (k) {
        case Verdict::LoopFree: return "loop-free";
        case Verdict::Counterexample: return "counterexample";
        default: return "inconclusive";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exploration benchmark: serial vs parallel frontier"};
    std::string policy = "sol1";
    int nodes = 4, workers = 4, flips = 2, confirms = 2, retries = 1;
    bool all_topologies = true;
    app.add_option("--policy", policy);
    app.add_option("--nodes", nodes);
    app.add_option("--workers", workers);
    app.add_option("--flips", flips);
    app.add_option("--confirms", confirms);
    app.add_option("--retries", retries);
    app.add_flag("--all-topologies,!--single-topology", all_topologies);
    CLI11_PARSE(app, argc, argv);

    auto pol = parse_policy(policy);
    if (!pol) {
        std::fprintf(stderr, "unknown policy %s\n", policy.c_str());
        return 2;
    }

    ExplorationConfig cfg;
    cfg.n = nodes;
    cfg.exec.engine.policy = PolicyConfig{*pol};
    cfg.exec.engine.retry_budget = retries;
    cfg.exec.capacity = nodes;
    cfg.origin = 0;
    cfg.dest = nodes - 1;
    cfg.retry_budget = retries;
    cfg.topo_change_budget = flips;
    cfg.confirm_budget = confirms;
    if (!all_topologies) {
        Topology full{nodes, 0};
        for (int a = 0; a < nodes; ++a)
            for (int b = a + 1; b < nodes; ++b) full.set_link(a, b, true);
        cfg.initial_topo = full;
    }

    Verdict serial, parallel;
    double ts = run_once(cfg, 1, serial);
    double tp = run_once(cfg, workers, parallel);

    std::printf("policy %s, %d nodes, %s\n", policy.c_str(), nodes,
                all_topologies ? "all topologies" : "full mesh");
    std::printf("serial:   %8.3f s  %llu states  %s\n", ts,
                (unsigned long long)serial.states, kind_name(serial.kind));
    std::printf("parallel: %8.3f s  %llu states  %s  (%d workers, %.2fx)\n",
                tp, (unsigned long long)parallel.states,
                kind_name(parallel.kind), workers, ts / tp);

    if (serial.kind != parallel.kind || serial.states != parallel.states) {
        std::fprintf(stderr, "MISMATCH between serial and parallel runs\n");
        return 1;
    }
    return 0;
}
