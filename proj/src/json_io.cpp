#include "aodv/json_io.hpp"

#include <fstream>

namespace aodv {

namespace {

NodeId node_from_json(const json& j, const std::string& path, int n) {
    if (!j.is_string())
        throw ScenarioError(path + ": expected a node name string");
    auto id = parse_node_name(j.get<std::string>());
    if (!id || *id >= n)
        throw ScenarioError(path + ": bad node name '" +
                            j.get<std::string>() + "'");
    return *id;
}

json transition_to_json(const Transition& t, int data) {
    json j;
    switch (t.kind) {
        case Transition::Inject:
            j["kind"] = "inject";
            j["node"] = node_name(t.a);
            j["dest"] = node_name(t.b);
            j["data"] = data;
            break;
        case Transition::Deliver:
            j["kind"] = "deliver_next";
            j["to"] = node_name(t.a);
            j["from"] = node_name(t.b);
            break;
        case Transition::Flip:
            j["kind"] = "flip";
            j["a"] = node_name(t.a);
            j["b"] = node_name(t.b);
            break;
        case Transition::Resend:
            j["kind"] = "resend";
            j["node"] = node_name(t.a);
            j["dest"] = node_name(t.b);
            break;
        case Transition::Confirm:
            j["kind"] = "confirm_link";
            j["a"] = node_name(t.a);
            j["b"] = node_name(t.b);
            j["mutual"] = t.mutual;
            break;
    }
    return j;
}

ScenarioEvent event_from_json(const json& j, const std::string& path, int n) {
    if (!j.is_object() || !j.contains("kind"))
        throw ScenarioError(path + ".kind: missing");
    std::string kind = j.at("kind").get<std::string>();
    ScenarioEvent ev;
    if (kind == "inject") {
        ev.t.kind = Transition::Inject;
        ev.t.a = node_from_json(j.at("node"), path + ".node", n);
        ev.t.b = node_from_json(j.at("dest"), path + ".dest", n);
        ev.data = j.value("data", 0);
    } else if (kind == "deliver_next") {
        ev.t.kind = Transition::Deliver;
        ev.t.a = node_from_json(j.at("to"), path + ".to", n);
        ev.t.b = node_from_json(j.at("from"), path + ".from", n);
    } else if (kind == "flip") {
        ev.t.kind = Transition::Flip;
        ev.t.a = node_from_json(j.at("a"), path + ".a", n);
        ev.t.b = node_from_json(j.at("b"), path + ".b", n);
    } else if (kind == "resend") {
        ev.t.kind = Transition::Resend;
        ev.t.a = node_from_json(j.at("node"), path + ".node", n);
        ev.t.b = node_from_json(j.at("dest"), path + ".dest", n);
    } else if (kind == "confirm_link") {
        ev.t.kind = Transition::Confirm;
        ev.t.a = node_from_json(j.at("a"), path + ".a", n);
        ev.t.b = node_from_json(j.at("b"), path + ".b", n);
        ev.t.mutual = j.value("mutual", true);
    } else {
        throw ScenarioError(path + ".kind: unknown event kind '" + kind + "'");
    }
    return ev;
}

json assertion_to_json(const Assertion& a) {
    json j;
    switch (a.kind) {
        case Assertion::TableContains:
            j["kind"] = "table_contains";
            j["node"] = node_name(a.node);
            j["entry"] = render_entry(a.entry);
            break;
        case Assertion::TableLacks:
            j["kind"] = "table_lacks";
            j["node"] = node_name(a.node);
            j["dest"] = node_name(a.dest);
            j["next_hop"] = node_name(a.next_hop);
            break;
        case Assertion::LoopExists: {
            j["kind"] = "loop_exists";
            j["dest"] = node_name(a.dest);
            json cyc = json::array();
            for (NodeId c : a.cycle) cyc.push_back(node_name(c));
            j["cycle"] = cyc;
            break;
        }
        case Assertion::NoLoop:
            j["kind"] = "no_loop";
            break;
        case Assertion::Delivered:
            j["kind"] = "delivered";
            j["node"] = node_name(a.node);
            j["dest"] = node_name(a.dest);
            break;
        case Assertion::DeliveryFailed:
            j["kind"] = "delivery_failed";
            j["node"] = node_name(a.node);
            j["dest"] = node_name(a.dest);
            break;
    }
    return j;
}

Assertion assertion_from_json(const json& j, const std::string& path, int n) {
    if (!j.is_object() || !j.contains("kind"))
        throw ScenarioError(path + ".kind: missing");
    std::string kind = j.at("kind").get<std::string>();
    Assertion a;
    if (kind == "table_contains") {
        a.kind = Assertion::TableContains;
        a.node = node_from_json(j.at("node"), path + ".node", n);
        auto e = parse_entry(j.at("entry").get<std::string>());
        if (!e) throw ScenarioError(path + ".entry: bad route tuple");
        a.entry = *e;
    } else if (kind == "table_lacks") {
        a.kind = Assertion::TableLacks;
        a.node = node_from_json(j.at("node"), path + ".node", n);
        a.dest = node_from_json(j.at("dest"), path + ".dest", n);
        a.next_hop = node_from_json(j.at("next_hop"), path + ".next_hop", n);
    } else if (kind == "loop_exists") {
        a.kind = Assertion::LoopExists;
        a.dest = node_from_json(j.at("dest"), path + ".dest", n);
        const json& cyc = j.at("cycle");
        for (size_t i = 0; i < cyc.size(); ++i)
            a.cycle.push_back(node_from_json(
                cyc[i], path + ".cycle[" + std::to_string(i) + "]", n));
    } else if (kind == "no_loop") {
        a.kind = Assertion::NoLoop;
    } else if (kind == "delivered" || kind == "delivery_failed") {
        a.kind = kind == "delivered" ? Assertion::Delivered
                                     : Assertion::DeliveryFailed;
        a.node = node_from_json(j.at("node"), path + ".node", n);
        a.dest = node_from_json(j.at("dest"), path + ".dest", n);
    } else {
        throw ScenarioError(path + ".kind: unknown assertion kind '" + kind +
                            "'");
    }
    return a;
}

}  // namespace

json scenario_to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["n"] = s.n;
    j["policy"] = policy_name(s.policy);
    j["topology"] = s.topology;
    if (!s.constraint.empty()) j["constraint"] = s.constraint;
    json evs = json::array();
    for (const auto& ev : s.events) evs.push_back(transition_to_json(ev.t, ev.data));
    j["events"] = evs;
    json asserts = json::array();
    for (const auto& c : s.assertions) {
        json cj;
        cj["after"] = c.after;
        cj["check"] = assertion_to_json(c.check);
        asserts.push_back(cj);
    }
    j["assertions"] = asserts;
    return j;
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    try {
        s.name = j.at("name").get<std::string>();
        s.n = j.at("n").get<int>();
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("name/n: ") + e.what());
    }
    if (s.n < 1 || s.n > 8) throw ScenarioError("n: out of range 1..8");
    auto pol = parse_policy(j.value("policy", std::string("v11")));
    if (!pol) throw ScenarioError("policy: unknown policy string");
    s.policy = *pol;
    for (const auto& edge : j.value("topology", json::array()))
        s.topology.push_back(edge.get<std::string>());
    s.constraint = j.value("constraint", std::string());
    const json& evs = j.value("events", json::array());
    for (size_t i = 0; i < evs.size(); ++i)
        s.events.push_back(
            event_from_json(evs[i], "events[" + std::to_string(i) + "]", s.n));
    const json& asserts = j.value("assertions", json::array());
    for (size_t i = 0; i < asserts.size(); ++i) {
        std::string path = "assertions[" + std::to_string(i) + "]";
        Scenario::Check c;
        c.after = asserts[i].value("after", -1);
        if (c.after < 0 || c.after > static_cast<int>(s.events.size()))
            throw ScenarioError(path + ".after: out of range");
        c.check = assertion_from_json(asserts[i].at("check"), path + ".check", s.n);
        s.assertions.push_back(std::move(c));
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot read scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ScenarioError(path + ": " + e.what());
    }
    return scenario_from_json(j);
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ScenarioError("cannot write scenario file: " + path);
    out << scenario_to_json(s).dump(2) << "\n";
}

json trace_to_json(const std::vector<TraceStep>& steps) {
    json arr = json::array();
    for (const auto& st : steps) {
        json j = transition_to_json(st.t, 0);
        if (!st.outcomes.empty()) {
            json outs = json::array();
            for (const auto& o : st.outcomes) {
                json oj;
                oj["at"] = node_name(o.at);
                oj["nb"] = node_name(o.nb);
                oj["delivered"] = o.delivered;
                outs.push_back(oj);
            }
            j["outcomes"] = outs;
        }
        arr.push_back(j);
    }
    return arr;
}

json run_to_json(const Scenario& s, const ScenarioRun& run) {
    json j;
    j["scenario"] = s.name;
    j["policy"] = policy_name(s.policy);
    j["passed"] = run.all_passed();
    json results = json::array();
    for (const auto& r : run.results) {
        json rj;
        rj["after"] = r.after;
        rj["check"] = assertion_to_json(r.check);
        rj["passed"] = r.passed;
        if (!r.passed) rj["detail"] = r.detail;
        results.push_back(rj);
    }
    j["assertions"] = results;
    j["trace"] = trace_to_json(run.trace);
    return j;
}

json verdict_to_json(const Verdict& v, const ExplorationConfig& cfg) {
    json j;
    switch (v.kind) {
        case Verdict::LoopFree: j["verdict"] = "loop_free"; break;
        case Verdict::Counterexample: j["verdict"] = "counterexample"; break;
        case Verdict::Inconclusive: j["verdict"] = "inconclusive"; break;
    }
    j["policy"] = policy_name(cfg.exec.engine.policy.policy);
    json bounds;
    bounds["retries"] = cfg.retry_budget;
    bounds["flips"] = cfg.topo_change_budget;
    bounds["confirms"] = cfg.confirm_budget;
    bounds["capacity"] = cfg.exec.capacity;
    bounds["queue_cap"] = cfg.exec.queue_cap;
    bounds["max_states"] = cfg.max_states;
    j["bounds"] = bounds;
    j["origin"] = node_name(cfg.origin);
    j["dest"] = node_name(cfg.dest);
    j["states"] = v.states;
    j["transitions"] = v.transitions;
    j["overflows"] = v.overflows;
    if (v.kind == Verdict::Counterexample) {
        json cyc = json::array();
        for (NodeId c : v.cycle) cyc.push_back(node_name(c));
        j["cycle"] = cyc;
        j["cycle_dest"] = node_name(v.cycle_dest);
        j["initial_topology"] = edges_to_strings(v.initial_topology);
        j["trace"] = trace_to_json(v.trace);
    }
    return j;
}

}  // namespace aodv
