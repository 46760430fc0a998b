#ifndef AODV_TESTS_PROPERTY_SUITE_HPP
#define AODV_TESTS_PROPERTY_SUITE_HPP

#include <random>

#include "aodv/policies.hpp"

// Random op-sequence driver checking the structural table invariants that
// every update procedure must preserve.
namespace propsuite {

using namespace aodv;

bool one_valid_per_dest(const RoutingTable& t) {
    for (size_t i = 0; i < t.entries.size(); ++i)
        for (size_t j = i + 1; j < t.entries.size(); ++j) {
            const auto &a = t.entries[i], &b = t.entries[j];
            if (a.dest == b.dest && a.state == RouteState::Valid &&
                b.state == RouteState::Valid)
                return false;
        }
    return true;
}

bool within_capacity(const RoutingTable& t) {
    for (const auto& e : t.entries)
        if (t.count_to(e.dest) > t.capacity) return false;
    return true;
}

bool unique_next_hops(const RoutingTable& t) {
    for (size_t i = 0; i < t.entries.size(); ++i)
        for (size_t j = i + 1; j < t.entries.size(); ++j)
            if (t.entries[i].dest == t.entries[j].dest &&
                t.entries[i].next_hop == t.entries[j].next_hop)
                return false;
    return true;
}

// a fresher stored route never costs more hops than a staler one
bool sol1_freshness_cost_order(const RoutingTable& t) {
    for (const auto& a : t.entries)
        for (const auto& b : t.entries)
            if (a.dest == b.dest && a.seq < b.seq && a.hops < b.hops)
                return false;
    return true;
}

// every route to a destination shares one (seq, hops) pair
bool sol2_uniform_group(const RoutingTable& t) {
    for (const auto& a : t.entries)
        for (const auto& b : t.entries)
            if (a.dest == b.dest && (a.seq != b.seq || a.hops != b.hops))
                return false;
    return true;
}

struct Violations {
    long valid = 0, capacity = 0, dup = 0, shape = 0, stale_process = 0,
         purity = 0;
    long total() const {
        return valid + capacity + dup + shape + stale_process + purity;
    }
};

void run_sequences(PolicyId policy, Violations& v) {
    std::mt19937_64 rng(0x5eed0000 + static_cast<int>(policy));
    PolicyConfig cfg;
    cfg.policy = policy;
    const int sequences = 100000;
    const int ops = 16;

    for (int s = 0; s < sequences; ++s) {
        RoutingTable t;
        t.capacity = policy == PolicyId::V16 ? 2 : 3;
        for (int k = 0; k < ops; ++k) {
            int kind = static_cast<int>(rng() % 10);
            if (kind < 7) {
                IncomingRoute in;
                in.dest = static_cast<NodeId>(rng() % 3);
                in.sender = static_cast<NodeId>(3 + rng() % 3);
                in.seq = SeqNum::known(static_cast<int64_t>(rng() % 4));
                in.hops = static_cast<int>(1 + rng() % 4);
                in.wire_dsn = in.seq;
                UpdateOutcome out = apply_update(t, in, cfg);
                if (!out.process && !(out.table == t)) v.stale_process += 1;
                if (s % 997 == 0) {
                    UpdateOutcome again = apply_update(t, in, cfg);
                    if (!(again.table == out.table) ||
                        again.process != out.process)
                        v.purity += 1;
                }
                t = out.table;
            } else if (kind == 7) {
                t = confirm_neighbor(t, static_cast<NodeId>(3 + rng() % 3));
            } else if (!t.entries.empty()) {
                // engine discipline: failed unconfirmed hops are removed,
                // failed valid hops invalidated
                const RouteEntry& e = t.entries[rng() % t.entries.size()];
                if (kind == 8 && e.state == RouteState::Unconfirmed)
                    t = remove_next_hop(t, e.dest, e.next_hop);
                else if (kind == 9 && e.state == RouteState::Valid)
                    t = invalidate_route(t, e.dest, e.next_hop);
            }
            if (!one_valid_per_dest(t)) v.valid += 1;
            if (!within_capacity(t)) v.capacity += 1;
            if (!unique_next_hops(t)) v.dup += 1;
            if (policy == PolicyId::V16 || policy == PolicyId::Solution1 ||
                policy == PolicyId::Solution2) {
                bool ok = true;
                if (policy == PolicyId::V16)
                    ok = within_capacity(t);  // capacity 2 above
                else if (policy == PolicyId::Solution1)
                    ok = sol1_freshness_cost_order(t);
                else
                    ok = sol2_uniform_group(t);
                if (!ok) v.shape += 1;
            }
        }
    }
}


}  // namespace propsuite

#endif
