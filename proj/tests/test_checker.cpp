#include <doctest.h>

#include "aodv/checker.hpp"
#include "aodv/json_io.hpp"

using namespace aodv;

namespace {

ExecConfig exec_for(PolicyId p, int capacity = 4) {
    ExecConfig cfg;
    cfg.engine.policy = PolicyConfig{p};
    cfg.capacity = capacity;
    return cfg;
}

GlobalState fresh(int n, const std::vector<std::string>& edges, PolicyId p,
                  int flips = 2, int confirms = 2) {
    return make_initial_state(n, topology_from_edges(n, edges), exec_for(p), 1,
                              flips, confirms);
}

RouteEntry entry(const char* text) { return *parse_entry(text); }

const std::vector<std::string> kDiamond{"n1-n2", "n1-n4", "n2-n3", "n2-n4",
                                        "n3-n4"};

}  // namespace

TEST_CASE("canonical_key equals for deep copies and separates table edits") {
    GlobalState a = fresh(4, kDiamond, PolicyId::V11);
    a.nodes[1].table.entries.push_back(entry("(n1, n1, 1, 2, unc)"));
    a.queues.at(0, 1).push_back(Message::rreq(0, 2, SeqNum::unknown(), 0,
                                              SeqNum::known(2), 0, 5));
    GlobalState b = a;  // deep copy
    CHECK(canonical_key(a) == canonical_key(b));

    b.nodes[1].table.entries[0].hops += 1;
    CHECK(!(canonical_key(a) == canonical_key(b)));

    GlobalState c = a;
    c.nodes[2].own_seq = SeqNum::known(3);
    CHECK(!(canonical_key(a) == canonical_key(c)));
}

TEST_CASE("canonical_key ignores the order a topology was reached in") {
    ExecConfig cfg = exec_for(PolicyId::Solution1);
    GlobalState a = fresh(4, kDiamond, PolicyId::Solution1);
    GlobalState b = a;
    // flip an unused link up and back down, then pretend the budget was
    // never spent: only the budget counter distinguished the two states
    apply_transition(b, {Transition::Flip, 0, 2}, cfg);
    apply_transition(b, {Transition::Flip, 0, 2}, cfg);
    CHECK(!(canonical_key(a) == canonical_key(b)));  // budgets differ
    b.topo_changes_left = a.topo_changes_left;
    CHECK(canonical_key(a) == canonical_key(b));
}

TEST_CASE("canonical_bytes round-trips through state_from_bytes") {
    ExecConfig cfg = exec_for(PolicyId::Solution2);
    GlobalState st = fresh(4, kDiamond, PolicyId::Solution2);
    st.nodes[0].own_seq = SeqNum::known(3);
    st.nodes[0].pending_rreqs[2] = 1;
    st.nodes[1].table.entries.push_back(entry("(n1, n1, 1, 2, unc)"));
    st.nodes[1].table.entries.push_back(entry("(n1, n4, 2, 2, val)"));
    st.nodes[1].table.confirmed = 1u << 3;
    st.nodes[2].discovered.insert(0);
    st.nodes[3].failed.insert(0);
    st.nodes[2].delivered_data.insert(7);
    st.queues.at(1, 2).push_back(Message::rreq(1, 2, SeqNum::unknown(), 0,
                                               SeqNum::known(2), 1, 5));
    st.queues.at(1, 2).push_back(
        Message::rrep(0, 2, SeqNum::known(4), 0, 2));
    st.queues.at(3, 0).push_back(
        Message::rerr(3, 3, {{0, SeqNum::known(2)}}));
    st.topo_changes_left = 1;

    GlobalState back = state_from_bytes(canonical_bytes(st), cfg);
    CHECK(back == st);
    CHECK(canonical_bytes(back) == canonical_bytes(st));
}

TEST_CASE("detect_route_loop flags valid cycles only") {
    GlobalState st = fresh(4, kDiamond, PolicyId::V11);

    SUBCASE("empty tables have no loop") {
        CHECK(!detect_route_loop(st, 0, false).has_value());
    }

    SUBCASE("mutual valid next hops form the reported cycle") {
        st.nodes[1].table.entries.push_back(entry("(n1, n4, 2, 2, val)"));
        st.nodes[3].table.entries.push_back(entry("(n1, n2, 2, 2, val)"));
        auto cyc = detect_route_loop(st, 0, false);
        REQUIRE(cyc.has_value());
        CHECK(*cyc == std::vector<NodeId>{1, 3});
    }

    SUBCASE("a chain toward the destination is not a loop") {
        st.nodes[2].table.entries.push_back(entry("(n1, n2, 2, 2, val)"));
        st.nodes[1].table.entries.push_back(entry("(n1, n1, 1, 2, val)"));
        CHECK(!detect_route_loop(st, 0, false).has_value());
    }

    SUBCASE("unconfirmed cycles only count in diagnostic mode") {
        st.nodes[1].table.entries.push_back(entry("(n1, n4, 2, 2, unc)"));
        st.nodes[3].table.entries.push_back(entry("(n1, n2, 2, 2, unc)"));
        CHECK(!detect_route_loop(st, 0, false).has_value());
        auto cyc = detect_route_loop(st, 0, true);
        REQUIRE(cyc.has_value());
        CHECK(*cyc == std::vector<NodeId>{1, 3});
    }

    SUBCASE("entries at the destination itself are ignored") {
        st.nodes[0].table.entries.push_back(entry("(n1, n2, 1, 2, val)"));
        CHECK(!detect_route_loop(st, 0, false).has_value());
    }
}

TEST_CASE("make_initial_state seeds nodes, queues and budgets") {
    GlobalState st = fresh(4, kDiamond, PolicyId::Solution1, 2, 1);
    CHECK(st.nodes.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(st.nodes[i].id == i);
        CHECK(st.nodes[i].own_seq == SeqNum::known(1));
        CHECK(st.nodes[i].table.entries.empty());
        CHECK(st.nodes[i].table.capacity == 4);
    }
    CHECK(st.topo_changes_left == 2);
    CHECK(st.confirms_left == 1);
    CHECK(st.queues.at(0, 1).empty());

    // v16 keeps at most one settled and one unconfirmed route per dest
    GlobalState v16 = fresh(4, kDiamond, PolicyId::V16);
    CHECK(v16.nodes[0].table.capacity == 2);
}

TEST_CASE("apply_transition rejects ill-formed events") {
    ExecConfig cfg = exec_for(PolicyId::V11);
    GlobalState st = fresh(4, kDiamond, PolicyId::V11);

    CHECK_THROWS_AS(apply_transition(st, {Transition::Deliver, 1, 0}, cfg),
                    ExecError);  // empty queue
    CHECK_THROWS_AS(apply_transition(st, {Transition::Resend, 0, 2}, cfg),
                    ExecError);  // no pending discovery
    CHECK_THROWS_AS(apply_transition(st, {Transition::Confirm, 0, 2}, cfg),
                    ExecError);  // n1-n3 link is down

    ExecConfig pinned = cfg;
    pinned.constraint = parse_constraints("con(n1,n2)", 4);
    CHECK_THROWS_AS(apply_transition(st, {Transition::Flip, 0, 1}, pinned),
                    ExecError);  // flip would violate the constraint
}

TEST_CASE("successors offer the simultaneous deliveries after inject") {
    ExecConfig cfg = exec_for(PolicyId::V11);
    GlobalState st = fresh(4, kDiamond, PolicyId::V11);
    apply_transition(st, {Transition::Inject, 0, 2}, cfg);  // n1 seeks n3

    auto succ = successors(st, cfg);
    int delivers = 0;
    bool to_n2 = false, to_n4 = false;
    for (const auto& [t, s2] : succ) {
        if (t.kind != Transition::Deliver) continue;
        ++delivers;
        if (t.a == 1 && t.b == 0) to_n2 = true;
        if (t.a == 3 && t.b == 0) to_n4 = true;
    }
    CHECK(delivers == 2);
    CHECK(to_n2);
    CHECK(to_n4);

    // budgets make flips and confirms available too
    bool flip = false, confirm = false;
    for (const auto& [t, s2] : succ) {
        flip = flip || t.kind == Transition::Flip;
        confirm = confirm || t.kind == Transition::Confirm;
    }
    CHECK(flip);
    CHECK(confirm);
}

TEST_CASE("successors of a terminal state are empty") {
    ExecConfig cfg = exec_for(PolicyId::V11);
    GlobalState st = fresh(4, kDiamond, PolicyId::V11, 0, 0);
    CHECK(successors(st, cfg).empty());
}

namespace {

ExplorationConfig check_cfg(PolicyId p, int n, NodeId origin, NodeId dest,
                            const std::vector<std::string>& edges) {
    ExplorationConfig cfg;
    cfg.exec = exec_for(p, n);
    cfg.n = n;
    cfg.initial_topo = topology_from_edges(n, edges);
    cfg.origin = origin;
    cfg.dest = dest;
    return cfg;
}

}  // namespace

TEST_CASE("explore finds the published v11 cycle on the diamond") {
    ExplorationConfig cfg = check_cfg(PolicyId::V11, 4, 0, 2, kDiamond);
    Verdict v = explore(cfg);
    REQUIRE(v.kind == Verdict::Counterexample);
    CHECK(v.cycle == std::vector<NodeId>{1, 3});
    CHECK(v.cycle_dest == 0);
    CHECK(v.states <= 1'000'000);
}

TEST_CASE("explore verdicts are deterministic across runs") {
    ExplorationConfig cfg = check_cfg(PolicyId::V13, 4, 0, 3,
                                      {"n1-n3", "n2-n3", "n2-n4", "n3-n4"});
    Verdict a = explore(cfg);
    Verdict b = explore(cfg);
    CHECK(verdict_to_json(a, cfg).dump() == verdict_to_json(b, cfg).dump());
    REQUIRE(a.kind == Verdict::Counterexample);
    CHECK(a.cycle == std::vector<NodeId>{1, 2});
}

TEST_CASE("two nodes cannot form a valid-route loop under any policy") {
    for (PolicyId p : {PolicyId::V11, PolicyId::V13, PolicyId::V16,
                       PolicyId::Solution1, PolicyId::Solution2}) {
        ExplorationConfig cfg = check_cfg(p, 2, 0, 1, {"n1-n2"});
        Verdict v = explore(cfg);
        CHECK(v.kind == Verdict::LoopFree);
        CHECK(v.states > 0);
    }
}

TEST_CASE("explore over all topologies equals the per-topology union") {
    // 3 nodes, tight budgets: all 8 topologies checked in one sweep
    ExplorationConfig sweep = check_cfg(PolicyId::Solution1, 3, 0, 2, {});
    sweep.initial_topo.reset();
    sweep.retry_budget = 1;
    sweep.topo_change_budget = 1;
    sweep.confirm_budget = 1;
    Verdict v = explore(sweep);
    CHECK(v.kind == Verdict::LoopFree);

    // the shared visited set may only ever shrink the union, never grow it
    uint64_t individual = 0;
    for (const Topology& t : enumerate_topologies(3, {})) {
        ExplorationConfig one = sweep;
        one.initial_topo = t;
        individual += explore(one).states;
    }
    CHECK(v.states <= individual);
    CHECK(v.states > 0);
}

TEST_CASE("state ceiling reports inconclusive, not loop-free") {
    ExplorationConfig cfg = check_cfg(PolicyId::Solution1, 4, 0, 2, kDiamond);
    cfg.max_states = 100;
    Verdict v = explore(cfg);
    CHECK(v.kind == Verdict::Inconclusive);
    CHECK(v.states >= 100);
}
