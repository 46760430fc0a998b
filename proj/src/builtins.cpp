#include "aodv/scenario.hpp"

namespace aodv {

namespace {

// builders; node arguments use 1-based names to match the rendered form
ScenarioEvent inject(int node, int dest) {
    return {{Transition::Inject, node - 1, dest - 1}, 0};
}
ScenarioEvent deliver(int to, int from) {
    return {{Transition::Deliver, to - 1, from - 1}, 0};
}
ScenarioEvent flip(int a, int b) {
    return {{Transition::Flip, a - 1, b - 1}, 0};
}
ScenarioEvent resend(int node, int dest) {
    return {{Transition::Resend, node - 1, dest - 1}, 0};
}
ScenarioEvent confirm(int a, int b, bool mutual) {
    return {{Transition::Confirm, a - 1, b - 1, mutual}, 0};
}

Assertion has(int node, int dest, int nhop, int hops, int seq, RouteState st) {
    Assertion a;
    a.kind = Assertion::TableContains;
    a.node = node - 1;
    a.entry = RouteEntry{dest - 1, nhop - 1, hops, SeqNum::known(seq), st};
    return a;
}
Assertion lacks(int node, int dest, int nhop) {
    Assertion a;
    a.kind = Assertion::TableLacks;
    a.node = node - 1;
    a.dest = dest - 1;
    a.next_hop = nhop - 1;
    return a;
}
Assertion loop(int dest, std::vector<int> cycle) {
    Assertion a;
    a.kind = Assertion::LoopExists;
    a.dest = dest - 1;
    for (int c : cycle) a.cycle.push_back(c - 1);
    return a;
}
Assertion delivered(int node, int dest) {
    Assertion a;
    a.kind = Assertion::Delivered;
    a.node = node - 1;
    a.dest = dest - 1;
    return a;
}
Assertion failed(int node, int dest) {
    Assertion a;
    a.kind = Assertion::DeliveryFailed;
    a.node = node - 1;
    a.dest = dest - 1;
    return a;
}

constexpr auto Unc = RouteState::Unconfirmed;
constexpr auto Val = RouteState::Valid;

Scenario make_v11_loop() {
    Scenario s;
    s.name = "v11_loop";
    s.n = 4;
    s.policy = PolicyId::V11;
    s.topology = {"n1-n2", "n1-n4", "n2-n3", "n2-n4", "n3-n4"};
    s.events = {
        inject(1, 3),    // n1 starts discovery of n3
        deliver(2, 1),   // n2 takes the rreq
        deliver(4, 1),   // n4 takes the rreq
        deliver(2, 4),   // forwarded copy crosses to n2
        deliver(4, 2),   // and to n4
        deliver(3, 2),   // the destination hears the request
        flip(1, 2),      // n1 moves away
        flip(1, 4),
        deliver(2, 3),   // rrep: n2's try toward n1 fails, falls back to n4
        deliver(4, 2),   // stale forwarded rreq refreshes n4's entry
        deliver(4, 2),   // rrep: n4 falls back to n2 — the cycle closes
    };
    s.assertions = {
        {2, has(2, 1, 1, 1, 2, Unc)},
        {3, has(4, 1, 1, 1, 2, Unc)},
        {4, has(2, 1, 4, 2, 2, Unc)},
        {5, has(4, 1, 2, 2, 2, Unc)},
        {6, has(3, 1, 2, 2, 2, Val)},  // the ack from n2 validated it
        {9, has(2, 1, 4, 2, 2, Val)},
        {9, lacks(2, 1, 1)},
        {11, lacks(4, 1, 1)},
        {11, loop(1, {2, 4})},
    };
    return s;
}

Scenario make_v13_loop() {
    Scenario s;
    s.name = "v13_loop";
    s.n = 4;
    s.policy = PolicyId::V13;
    s.topology = {"n1-n3", "n2-n3", "n3-n4", "n2-n4"};
    s.events = {
        inject(1, 4),
        deliver(3, 1),
        deliver(2, 3),
        flip(1, 2),            // n1 moves next to n2
        flip(1, 3),            // and out of n3's range
        resend(1, 4),          // retry with a fresh seqnum
        deliver(2, 1),
        deliver(3, 2),         // stale first-round copy, rejected
        deliver(3, 2),         // retry copy lands: n3 now routes via n2
        confirm(2, 3, true),   // link turns bidirectional; both sides validate
    };
    s.assertions = {
        {2, has(3, 1, 1, 1, 2, Unc)},
        {3, has(2, 1, 3, 2, 2, Unc)},
        {7, has(2, 1, 1, 1, 3, Unc)},
        {7, has(2, 1, 3, 2, 2, Unc)},
        {9, has(3, 1, 2, 2, 3, Unc)},
        {9, has(3, 1, 1, 1, 2, Unc)},
        {10, loop(1, {2, 3})},
    };
    return s;
}

Scenario make_v16_loop() {
    Scenario s;
    s.name = "v16_loop";
    s.n = 4;
    s.policy = PolicyId::V16;
    s.topology = {"n1-n3", "n3-n4", "n2-n3"};
    s.events = {
        inject(1, 4),
        deliver(3, 1),
        deliver(2, 3),
        confirm(2, 3, false),  // n2 learns its link to n3 is bidirectional
        flip(1, 3),            // n1 moves toward n2
        flip(1, 2),
        resend(1, 4),
        deliver(2, 1),
        flip(1, 3),            // n1 drifts back into n3's range
        confirm(3, 1, false),
        deliver(3, 2),         // stale first-round copy, rejected
        deliver(3, 2),         // retry copy: second slot at n3 points at n2
        flip(1, 2),            // n1 leaves again
        flip(1, 3),
        deliver(4, 3),         // the destination finally answers
        deliver(3, 4),         // rrep: n3's n1 hop fails, falls back to n2
        deliver(2, 3),         // forwarded rreq bumps n2's route through n3
        deliver(2, 3),         // rrep: n2's n1 hop fails, falls back to n3
    };
    s.assertions = {
        {2, has(3, 1, 1, 1, 2, Unc)},
        {3, has(2, 1, 3, 2, 2, Unc)},
        {4, has(2, 1, 3, 2, 2, Val)},
        {8, has(2, 1, 3, 2, 2, Val)},
        {8, has(2, 1, 1, 1, 3, Unc)},
        {10, has(3, 1, 1, 1, 2, Val)},
        {12, has(3, 1, 1, 1, 2, Val)},
        {12, has(3, 1, 2, 2, 3, Unc)},
        {17, has(2, 1, 3, 3, 3, Val)},
        {18, loop(1, {2, 3})},
    };
    return s;
}

std::vector<ScenarioEvent> seven_node_events() {
    return {
        inject(1, 7),
        deliver(2, 1),
        deliver(3, 1),
        deliver(4, 1),
        deliver(5, 2),
        deliver(6, 5),         // first copy reaches n6, via the long path
        confirm(6, 5, false),
        deliver(6, 3),         // shorter route via n3 arrives
        deliver(6, 4),         // equally short route via n4
        flip(5, 6),            // both of n6's learned hops go away
        flip(3, 6),
        deliver(7, 6),         // destination answers
        deliver(6, 7),         // n6 must now forward the reply
    };
}

Scenario make_seven_node() {
    Scenario s;
    s.name = "seven_node";
    s.n = 7;
    s.policy = PolicyId::V16;
    s.topology = {"n1-n2", "n1-n3", "n1-n4", "n2-n5",
                  "n5-n6", "n3-n6", "n4-n6", "n6-n7"};
    s.events = seven_node_events();
    s.assertions = {
        {6, has(6, 1, 5, 3, 2, Unc)},
        {7, has(6, 1, 5, 3, 2, Val)},
        {8, has(6, 1, 3, 2, 2, Unc)},
        {9, lacks(6, 1, 4)},   // the two-slot bound already holds n5 and n3
        {13, failed(6, 1)},    // both stored hops are gone; the reply dies
    };
    return s;
}

Scenario make_seven_node_sol() {
    Scenario s = make_seven_node();
    s.name = "seven_node_sol";
    s.policy = PolicyId::Solution1;
    // the wider table kept the n4 hop; the reply detours and still arrives
    s.events.push_back(deliver(4, 6));  // stale rreq, rejected
    s.events.push_back(deliver(4, 6));  // stale rreq, rejected
    s.events.push_back(deliver(4, 6));  // stale rreq, rejected
    s.events.push_back(deliver(4, 6));  // the rrep detoured through n4
    s.events.push_back(deliver(1, 4));  // rrep completes the discovery
    s.assertions = {
        {18, delivered(1, 7)},
    };
    return s;
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"v11_loop", "v13_loop", "v16_loop", "seven_node", "seven_node_sol"};
}

Scenario builtin(const std::string& name) {
    if (name == "v11_loop") return make_v11_loop();
    if (name == "v13_loop") return make_v13_loop();
    if (name == "v16_loop") return make_v16_loop();
    if (name == "seven_node") return make_seven_node();
    if (name == "seven_node_sol") return make_seven_node_sol();
    throw ScenarioError("unknown builtin scenario: " + name);
}

}  // namespace aodv
