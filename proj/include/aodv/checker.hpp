#ifndef AODV_CHECKER_HPP
#define AODV_CHECKER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aodv/engine.hpp"
#include "aodv/network.hpp"

namespace aodv {

// One unit of exploration: all node states, in-flight queues, the current
// topology and the remaining event budgets.
struct GlobalState {
    std::vector<NodeState> nodes;
    LinkQueues queues;
    Topology topo;
    int topo_changes_left = 0;
    int confirms_left = 0;
    bool overflow = false;  // a queue exceeded its cap; path is terminated

    bool operator==(const GlobalState&) const = default;
};

struct Transition {
    enum Kind : uint8_t { Inject, Deliver, Flip, Resend, Confirm } kind = Inject;
    NodeId a = 0;  // Inject/Resend: node; Deliver: receiver; Flip/Confirm: endpoint
    NodeId b = 0;  // Inject/Resend: dest; Deliver: sender; Flip/Confirm: endpoint
    bool mutual = true;  // Confirm only: both endpoints vs. a confirming b

    bool operator==(const Transition&) const = default;
};

// One executed transition plus the unicast outcomes it produced, enough to
// replay and to render a human-readable trace.
struct TraceStep {
    Transition t;
    struct Outcome {
        NodeId at;
        NodeId nb;
        bool delivered;
    };
    std::vector<Outcome> outcomes;
};

struct ExecConfig {
    EngineConfig engine;
    ConstraintSet constraint;
    int queue_cap = 4;
    int capacity = 8;  // per-destination route bound (v16 runs clamp to 2)
};

struct ExecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

GlobalState make_initial_state(int n, const Topology& topo, const ExecConfig& cfg,
                               int retry_budget, int flip_budget,
                               int confirm_budget);

// Run-to-completion application of one transition; annotates unicast trial
// outcomes into the returned step. Throws ExecError on ill-formed input
// (empty queue, constraint-violating flip, confirm over a down link).
TraceStep apply_transition(GlobalState& state, const Transition& t,
                           const ExecConfig& cfg);

// Directed graph over valid next-hop edges for dest; returns the cycle
// rotated to its smallest node, scanning start nodes in ascending order.
// include_unconfirmed widens the edge set for the diagnostic mode.
std::optional<std::vector<NodeId>> detect_route_loop(const GlobalState& state,
                                                     NodeId dest,
                                                     bool include_unconfirmed = false);

std::vector<std::pair<Transition, GlobalState>> successors(const GlobalState& state,
                                                           const ExecConfig& cfg);

struct StateKey {
    uint64_t h1 = 0, h2 = 0;
    bool operator==(const StateKey&) const = default;
};
struct StateKeyHash {
    size_t operator()(const StateKey& k) const { return k.h1; }
};

// canonical_bytes is an invertible serialization: the checker's frontier
// stores these strings instead of live states to keep memory flat
std::string canonical_bytes(const GlobalState& state);
GlobalState state_from_bytes(const std::string& bytes, const ExecConfig& cfg);
StateKey key_from_bytes(const std::string& bytes);
StateKey canonical_key(const GlobalState& state);

struct ExplorationConfig {
    ExecConfig exec;
    int n = 4;
    std::optional<Topology> initial_topo;  // nullopt = all topologies
    NodeId origin = 0;
    NodeId dest = 1;
    int retry_budget = 1;
    int topo_change_budget = 2;
    int confirm_budget = 2;
    uint64_t max_states = 10'000'000;
    int workers = 1;
    bool diag_unconfirmed = false;  // loop predicate also over unconfirmed entries
    bool progress = false;          // per-level stats on stderr
};

struct Verdict {
    enum Kind { LoopFree, Counterexample, Inconclusive } kind = LoopFree;
    uint64_t states = 0;
    uint64_t transitions = 0;
    uint64_t overflows = 0;
    // Counterexample payload:
    std::vector<NodeId> cycle;
    NodeId cycle_dest = 0;
    std::vector<TraceStep> trace;
    Topology initial_topology;
};

Verdict explore(const ExplorationConfig& cfg);

}  // namespace aodv

#endif
