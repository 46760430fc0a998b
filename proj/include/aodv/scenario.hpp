#ifndef AODV_SCENARIO_HPP
#define AODV_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "aodv/checker.hpp"

namespace aodv {

struct ScenarioEvent {
    Transition t;
    int data = 0;  // inject payload
};

struct Assertion {
    enum Kind {
        TableContains,   // node's table holds exactly this tuple
        TableLacks,      // node has no (dest, next_hop) entry in any state
        LoopExists,      // valid next-hop graph for dest contains this cycle
        NoLoop,          // no valid cycle for any destination
        Delivered,       // node (as originator) completed discovery of dest
        DeliveryFailed,  // node exhausted all forwarding candidates for dest
    } kind = NoLoop;
    NodeId node = 0;
    RouteEntry entry;           // TableContains
    NodeId dest = 0;            // TableLacks / LoopExists / Delivered / DeliveryFailed
    NodeId next_hop = 0;        // TableLacks
    std::vector<NodeId> cycle;  // LoopExists

    bool operator==(const Assertion&) const = default;
};

struct Scenario {
    std::string name;
    int n = 0;
    PolicyId policy = PolicyId::V11;
    std::vector<std::string> topology;  // edge list, "n1-n2" form
    std::string constraint;             // optional, network grammar
    std::vector<ScenarioEvent> events;
    struct Check {
        int after = 0;  // 1-based event index; 0 = initial state
        Assertion check;
    };
    std::vector<Check> assertions;
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssertionResult {
    int after = 0;
    Assertion check;
    bool passed = false;
    std::string detail;  // what was actually observed, on failure
};

struct ScenarioRun {
    GlobalState final_state;
    std::vector<AssertionResult> results;
    std::vector<TraceStep> trace;

    bool all_passed() const {
        for (const auto& r : results)
            if (!r.passed) return false;
        return true;
    }
};

std::string transition_to_string(const Transition& t);
std::string assertion_to_string(const Assertion& a);

// Evaluate one assertion against a state (exposed for the checker
// cross-validation tests).
bool eval_assertion(const GlobalState& state, const Assertion& a,
                    std::string* detail = nullptr);

// Strictly sequential replay; assertions are recorded, not fatal. Throws
// ScenarioError naming the step on an ill-formed event (empty queue,
// constraint-violating flip).
ScenarioRun run_scenario(const Scenario& s,
                         std::optional<PolicyConfig> policy_override = {});

Scenario builtin(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace aodv

#endif
