#include "aodv/scenario.hpp"

#include <algorithm>
#include <sstream>

namespace aodv {

namespace {

std::string render_table(const RoutingTable& t) {
    std::string out = "{";
    for (size_t i = 0; i < t.entries.size(); ++i) {
        if (i) out += ", ";
        out += render_entry(t.entries[i]);
    }
    return out + "}";
}

bool cycles_equal(const std::vector<NodeId>& found,
                  const std::vector<NodeId>& want) {
    // detect_route_loop rotates to the smallest node; normalize the
    // expectation the same way before comparing
    if (found.size() != want.size()) return false;
    std::vector<NodeId> w = want;
    auto sm = std::min_element(w.begin(), w.end());
    std::rotate(w.begin(), sm, w.end());
    return found == w;
}

}  // namespace

std::string transition_to_string(const Transition& t) {
    switch (t.kind) {
        case Transition::Inject:
            return "inject " + node_name(t.a) + " -> " + node_name(t.b);
        case Transition::Deliver:
            return "deliver at " + node_name(t.a) + " from " + node_name(t.b);
        case Transition::Flip:
            return "flip " + node_name(t.a) + "-" + node_name(t.b);
        case Transition::Resend:
            return "resend at " + node_name(t.a) + " for " + node_name(t.b);
        case Transition::Confirm:
            return std::string("confirm ") + node_name(t.a) + "-" +
                   node_name(t.b) + (t.mutual ? "" : " (one-way)");
    }
    return "?";
}

std::string assertion_to_string(const Assertion& a) {
    switch (a.kind) {
        case Assertion::TableContains:
            return node_name(a.node) + " has " + render_entry(a.entry);
        case Assertion::TableLacks:
            return node_name(a.node) + " lacks (" + node_name(a.dest) +
                   " via " + node_name(a.next_hop) + ")";
        case Assertion::LoopExists: {
            std::string s = "loop for " + node_name(a.dest) + " over [";
            for (size_t i = 0; i < a.cycle.size(); ++i)
                s += (i ? ", " : "") + node_name(a.cycle[i]);
            return s + "]";
        }
        case Assertion::NoLoop:
            return "no loop";
        case Assertion::Delivered:
            return node_name(a.node) + " discovered " + node_name(a.dest);
        case Assertion::DeliveryFailed:
            return node_name(a.node) + " delivery failed for " +
                   node_name(a.dest);
    }
    return "?";
}

bool eval_assertion(const GlobalState& state, const Assertion& a,
                    std::string* detail) {
    auto fail = [&](const std::string& d) {
        if (detail) *detail = d;
        return false;
    };
    switch (a.kind) {
        case Assertion::TableContains: {
            const RoutingTable& t = state.nodes[a.node].table;
            for (const auto& e : t.entries)
                if (e == a.entry) return true;
            return fail(node_name(a.node) + " table is " + render_table(t));
        }
        case Assertion::TableLacks: {
            const RoutingTable& t = state.nodes[a.node].table;
            if (const RouteEntry* e = t.find(a.dest, a.next_hop))
                return fail(node_name(a.node) + " holds " + render_entry(*e));
            return true;
        }
        case Assertion::LoopExists: {
            auto cyc = detect_route_loop(state, a.dest);
            if (!cyc) return fail("no valid cycle for " + node_name(a.dest));
            if (!cycles_equal(*cyc, a.cycle)) {
                std::string d = "cycle is [";
                for (size_t i = 0; i < cyc->size(); ++i)
                    d += (i ? ", " : "") + node_name((*cyc)[i]);
                return fail(d + "]");
            }
            return true;
        }
        case Assertion::NoLoop: {
            for (NodeId d = 0; d < (NodeId)state.nodes.size(); ++d)
                if (auto cyc = detect_route_loop(state, d))
                    return fail("valid cycle exists for " + node_name(d));
            return true;
        }
        case Assertion::Delivered:
            if (state.nodes[a.node].discovered.count(a.dest)) return true;
            return fail(node_name(a.node) + " has not discovered " +
                        node_name(a.dest));
        case Assertion::DeliveryFailed:
            if (state.nodes[a.node].failed.count(a.dest)) return true;
            return fail(node_name(a.node) + " has no failed mark for " +
                        node_name(a.dest));
    }
    return false;
}

ScenarioRun run_scenario(const Scenario& s,
                         std::optional<PolicyConfig> policy_override) {
    if (s.n < 1 || s.n > 8) throw ScenarioError("node count out of range");

    ExecConfig exec;
    exec.engine.policy =
        policy_override ? *policy_override : PolicyConfig{s.policy};
    exec.engine.retry_budget = 1;
    exec.queue_cap = 8;
    exec.capacity = s.n;
    if (!s.constraint.empty())
        exec.constraint = parse_constraints(s.constraint, s.n);

    Topology topo = topology_from_edges(s.n, s.topology);
    if (!satisfies(topo, exec.constraint))
        throw ScenarioError("initial topology violates the constraint");

    // replay does not ration flips/confirms; budgets only bound the search
    GlobalState state =
        make_initial_state(s.n, topo, exec, 1, 1'000'000, 1'000'000);

    ScenarioRun run;
    auto check_after = [&](int step) {
        for (const auto& c : s.assertions)
            if (c.after == step) {
                AssertionResult r{c.after, c.check, false, ""};
                r.passed = eval_assertion(state, c.check, &r.detail);
                run.results.push_back(std::move(r));
            }
    };

    check_after(0);
    for (size_t i = 0; i < s.events.size(); ++i) {
        const ScenarioEvent& ev = s.events[i];
        try {
            run.trace.push_back(apply_transition(state, ev.t, exec));
        } catch (const ExecError& e) {
            std::ostringstream os;
            os << s.name << " step " << (i + 1) << ": " << e.what();
            throw ScenarioError(os.str());
        }
        if (state.overflow) {
            std::ostringstream os;
            os << s.name << " step " << (i + 1) << ": link queue overflow";
            throw ScenarioError(os.str());
        }
        check_after(static_cast<int>(i + 1));
    }
    run.final_state = std::move(state);
    return run;
}

}  // namespace aodv
