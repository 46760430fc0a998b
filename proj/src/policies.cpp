#include "aodv/policies.hpp"

#include <algorithm>

namespace aodv {

std::optional<PolicyId> parse_policy(const std::string& s) {
    if (s == "v11") return PolicyId::V11;
    if (s == "v13") return PolicyId::V13;
    if (s == "v16") return PolicyId::V16;
    if (s == "sol1") return PolicyId::Solution1;
    if (s == "sol2") return PolicyId::Solution2;
    return std::nullopt;
}

const char* policy_name(PolicyId p) {
    switch (p) {
        case PolicyId::V11: return "v11";
        case PolicyId::V13: return "v13";
        case PolicyId::V16: return "v16";
        case PolicyId::Solution1: return "sol1";
        case PolicyId::Solution2: return "sol2";
    }
    return "?";
}

namespace {

RouteState state_for_sender(const RoutingTable& t, NodeId sender) {
    return t.neighbor_state(sender) == NeighborState::Confirmed
               ? RouteState::Valid
               : RouteState::Unconfirmed;
}

RouteEntry make_entry(const IncomingRoute& in, RouteState st) {
    return RouteEntry{in.dest, in.sender, in.hops, in.seq, st};
}

void erase_others(RoutingTable& t, NodeId dest, NodeId keep_next_hop) {
    std::erase_if(t.entries, [&](const RouteEntry& e) {
        return e.dest == dest && e.next_hop != keep_next_hop;
    });
}

// Writes into the same-sender slot if one exists, otherwise appends if the
// per-destination bound allows. Returns false when the route is dropped.
bool write_slot(RoutingTable& t, const RouteEntry& entry) {
    if (RouteEntry* slot = t.find(entry.dest, entry.next_hop)) {
        *slot = entry;
        return true;
    }
    if (t.count_to(entry.dest) >= t.capacity) return false;
    t.entries.push_back(entry);
    return true;
}

// Overwrites one specific entry; any other entry for the destination with
// the incoming next hop is removed so (dest, next_hop) stays unique.
void overwrite(RoutingTable& t, const RouteEntry& victim, const RouteEntry& entry) {
    for (auto& e : t.entries) {
        if (e == victim) {
            e = entry;
            break;
        }
    }
    bool seen = false;
    std::erase_if(t.entries, [&](const RouteEntry& e) {
        if (e.dest != entry.dest || e.next_hop != entry.next_hop) return false;
        if (!seen) { seen = true; return false; }
        return true;
    });
}

// A write that produced a Valid entry leaves it as the destination's only
// route (v11/v13 discipline).
void purge_if_valid(RoutingTable& t, const RouteEntry& entry) {
    if (entry.state == RouteState::Valid) erase_others(t, entry.dest, entry.next_hop);
}

UpdateOutcome update_v11_v13(const RoutingTable& table, const IncomingRoute& in,
                             bool require_better_when_all_unconfirmed) {
    RoutingTable t = table;
    auto group = t.routes_to(in.dest);
    RouteEntry entry = make_entry(in, state_for_sender(t, in.sender));

    if (group.empty()) {
        if (write_slot(t, entry)) purge_if_valid(t, entry);
    } else if (std::all_of(group.begin(), group.end(), [](const RouteEntry* e) {
                   return e->state == RouteState::Unconfirmed;
               })) {
        bool ok = !require_better_when_all_unconfirmed ||
                  std::all_of(group.begin(), group.end(),
                              [&](const RouteEntry* e) { return is_better(in, *e); });
        if (ok && write_slot(t, entry)) purge_if_valid(t, entry);
    } else {
        const RouteEntry* valid = nullptr;
        const RouteEntry* invalid = nullptr;
        for (const RouteEntry* e : group) {
            if (e->state == RouteState::Valid && !valid) valid = e;
            if (e->state == RouteState::Invalid && !invalid && is_better(in, *e))
                invalid = e;
        }
        if (valid && is_better(in, *valid)) {
            if (entry.state == RouteState::Valid) {
                overwrite(t, *valid, entry);
                purge_if_valid(t, entry);
            } else {
                write_slot(t, entry);
            }
        } else if (invalid) {
            overwrite(t, *invalid, entry);
            purge_if_valid(t, entry);
        }
    }
    bool changed = !(t == table);
    return UpdateOutcome{changed ? std::move(t) : table, changed};
}

}  // namespace

UpdateOutcome update_v11(const RoutingTable& table, const IncomingRoute& in) {
    return update_v11_v13(table, in, false);
}

UpdateOutcome update_v13(const RoutingTable& table, const IncomingRoute& in) {
    return update_v11_v13(table, in, true);
}

UpdateOutcome update_v16(const RoutingTable& table, const IncomingRoute& in) {
    RoutingTable t = table;
    auto group = t.routes_to(in.dest);
    RouteEntry entry = make_entry(in, state_for_sender(t, in.sender));

    if (group.empty()) {
        t.entries.push_back(entry);
    } else if (group.size() == 1) {
        const RouteEntry& e = *group[0];
        if (e.state == RouteState::Invalid) {
            overwrite(t, e, entry);
        } else if (e.state == entry.state) {
            if (is_better(in, e)) overwrite(t, e, entry);
        } else if (is_better(in, e)) {
            // differing states: the incoming route becomes the second entry
            write_slot(t, entry);
        }
    } else {
        // invariant: one (in)valid entry and one unconfirmed entry
        const RouteEntry* statuslike = nullptr;  // the slot the incoming matches
        const RouteEntry* other_unc = nullptr;
        for (const RouteEntry* e : group) {
            if (e->state == RouteState::Unconfirmed) other_unc = e;
            else statuslike = e;
        }
        if (entry.state == RouteState::Valid) {
            if (statuslike) {
                if (statuslike->state == RouteState::Invalid || is_better(in, *statuslike))
                    overwrite(t, *statuslike, entry);
            }
        } else if (other_unc && is_better(in, *other_unc)) {
            overwrite(t, *other_unc, entry);
        }
    }
    bool changed = !(t == table);
    return UpdateOutcome{changed ? std::move(t) : table, changed};
}

// Accepted writes that leave the table bit-identical are reported as
// process=false; re-forwarding an unchanged route only amplifies traffic.
UpdateOutcome accepted(RoutingTable t, const RoutingTable& orig) {
    bool changed = !(t == orig);
    return UpdateOutcome{changed ? std::move(t) : orig, changed};
}

UpdateOutcome update_solution1(const RoutingTable& table, const IncomingRoute& in,
                               const PolicyConfig& cfg) {
    RoutingTable t = table;
    auto group = t.routes_to(in.dest);
    bool confirmed = t.neighbor_state(in.sender) == NeighborState::Confirmed;

    if (group.empty()) {
        t.entries.push_back(make_entry(
            in, confirmed ? RouteState::Valid : RouteState::Unconfirmed));
        return accepted(std::move(t), table);
    }
    bool loop_free =
        std::none_of(group.begin(), group.end(), [&](const RouteEntry* e) {
            return e->seq > in.seq || e->hops < in.hops;
        });
    if (!loop_free) return UpdateOutcome{table, false};

    RouteEntry entry = make_entry(
        in, confirmed ? RouteState::Valid : RouteState::Unconfirmed);
    if (cfg.fig3_literal) entry.seq = in.wire_dsn;
    if (!write_slot(t, entry)) return UpdateOutcome{table, false};
    if (confirmed) erase_others(t, in.dest, in.sender);
    return accepted(std::move(t), table);
}

UpdateOutcome update_solution2(const RoutingTable& table, const IncomingRoute& in,
                               const PolicyConfig& cfg) {
    RoutingTable t = table;
    auto group = t.routes_to(in.dest);
    bool confirmed = t.neighbor_state(in.sender) == NeighborState::Confirmed;

    if (group.empty()) {
        t.entries.push_back(make_entry(
            in, confirmed ? RouteState::Valid : RouteState::Unconfirmed));
        return accepted(std::move(t), table);
    }
    // all entries for a destination share one seq/hops pair
    SeqNum stored_seq = group[0]->seq;
    int stored_hops = group[0]->hops;
    bool accept = (stored_seq == in.seq && stored_hops >= in.hops) ||
                  stored_seq < in.seq;
    if (!accept) return UpdateOutcome{table, false};

    if (confirmed) {
        std::erase_if(t.entries, [&](const RouteEntry& e) { return e.dest == in.dest; });
        t.entries.push_back(make_entry(in, RouteState::Valid));
        return accepted(std::move(t), table);
    }

    auto hops_branch = [&]() -> std::optional<UpdateOutcome> {
        if (stored_hops < in.hops) return std::nullopt;
        // new next hop joins the group, keeping the stored seq/hops
        RouteEntry entry{in.dest, in.sender, stored_hops, stored_seq,
                         RouteState::Unconfirmed};
        if (!write_slot(t, entry)) return UpdateOutcome{table, false};
        return accepted(std::move(t), table);
    };
    auto seq_branch = [&]() -> std::optional<UpdateOutcome> {
        if (stored_seq >= in.seq) return std::nullopt;
        bool has_valid = std::any_of(group.begin(), group.end(), [](const RouteEntry* e) {
            return e->state == RouteState::Valid;
        });
        if (has_valid) return UpdateOutcome{table, false};
        std::erase_if(t.entries, [&](const RouteEntry& e) { return e.dest == in.dest; });
        t.entries.push_back(make_entry(in, RouteState::Unconfirmed));
        return accepted(std::move(t), table);
    };

    std::optional<UpdateOutcome> out =
        cfg.sol2_seq_priority ? seq_branch() : hops_branch();
    if (!out) out = cfg.sol2_seq_priority ? hops_branch() : seq_branch();
    return out ? std::move(*out) : UpdateOutcome{table, false};
}

UpdateOutcome apply_update(const RoutingTable& table, const IncomingRoute& in,
                           const PolicyConfig& cfg) {
    switch (cfg.policy) {
        case PolicyId::V11: return update_v11(table, in);
        case PolicyId::V13: return update_v13(table, in);
        case PolicyId::V16: return update_v16(table, in);
        case PolicyId::Solution1: return update_solution1(table, in, cfg);
        case PolicyId::Solution2: return update_solution2(table, in, cfg);
    }
    return UpdateOutcome{table, false};
}

RoutingTable confirm_neighbor(const RoutingTable& table, NodeId nb) {
    RoutingTable t = table;
    t.set_confirmed(nb);
    std::vector<NodeId> validated;
    for (auto& e : t.entries) {
        if (e.next_hop == nb && e.state == RouteState::Unconfirmed) {
            e.state = RouteState::Valid;
            validated.push_back(e.dest);
        }
    }
    for (NodeId dest : validated) erase_others(t, dest, nb);
    return t;
}

RoutingTable remove_next_hop(const RoutingTable& table, NodeId dest, NodeId nb) {
    RoutingTable t = table;
    std::erase_if(t.entries, [&](const RouteEntry& e) {
        return e.dest == dest && e.next_hop == nb;
    });
    return t;
}

RoutingTable invalidate_route(const RoutingTable& table, NodeId dest, NodeId nb) {
    RoutingTable t = table;
    if (RouteEntry* e = t.find(dest, nb)) e->state = RouteState::Invalid;
    return t;
}

}  // namespace aodv
