#ifndef AODV_TESTS_DIFFERENTIAL_SUITE_HPP
#define AODV_TESTS_DIFFERENTIAL_SUITE_HPP

#include <array>
#include <sstream>

#include "aodv/policies.hpp"

// Naive reference implementations, written straight from the prose case
// lists with plain index loops. They share nothing with the library
// versions except the value types; the exhaustive comparison is the oracle
// for all five update procedures.
namespace diffsuite {

using namespace aodv;
using Entries = std::vector<RouteEntry>;

bool ref_better(SeqNum cs, int ch, SeqNum es, int eh) {
    if (cs.v != es.v) return cs.v > es.v;
    return ch < eh;
}

std::vector<int> ref_group(const Entries& es, NodeId dest) {
    std::vector<int> idx;
    for (int i = 0; i < (int)es.size(); ++i)
        if (es[i].dest == dest) idx.push_back(i);
    return idx;
}

// same-sender slot first, then append below capacity; true when written
bool ref_put(Entries& es, const RouteEntry& ne, int capacity) {
    for (auto& e : es)
        if (e.dest == ne.dest && e.next_hop == ne.next_hop) {
            e = ne;
            return true;
        }
    if ((int)ref_group(es, ne.dest).size() >= capacity) return false;
    es.push_back(ne);
    return true;
}

void ref_keep_only(Entries& es, NodeId dest, NodeId next_hop) {
    Entries out;
    for (const auto& e : es)
        if (e.dest != dest || e.next_hop == next_hop) out.push_back(e);
    es = out;
}

// replace one entry in place, then drop any later duplicate (dest, next_hop)
void ref_replace(Entries& es, int victim, const RouteEntry& ne) {
    es[victim] = ne;
    bool seen = false;
    Entries out;
    for (const auto& e : es) {
        if (e.dest == ne.dest && e.next_hop == ne.next_hop) {
            if (seen) continue;
            seen = true;
        }
        out.push_back(e);
    }
    es = out;
}

RouteEntry ref_entry(const RoutingTable& t, const IncomingRoute& in) {
    bool conf = t.neighbor_state(in.sender) == NeighborState::Confirmed;
    return RouteEntry{in.dest, in.sender, in.hops, in.seq,
                      conf ? RouteState::Valid : RouteState::Unconfirmed};
}

Entries ref_v11_v13(const RoutingTable& t, const IncomingRoute& in, bool strict) {
    Entries es = t.entries;
    RouteEntry ne = ref_entry(t, in);
    auto grp = ref_group(es, in.dest);

    if (grp.empty()) {
        if (ref_put(es, ne, t.capacity) && ne.state == RouteState::Valid)
            ref_keep_only(es, in.dest, ne.next_hop);
        return es;
    }
    bool all_unc = true;
    for (int i : grp)
        if (es[i].state != RouteState::Unconfirmed) all_unc = false;
    if (all_unc) {
        bool ok = true;
        if (strict)
            for (int i : grp)
                if (!ref_better(ne.seq, ne.hops, es[i].seq, es[i].hops)) ok = false;
        if (ok && ref_put(es, ne, t.capacity) && ne.state == RouteState::Valid)
            ref_keep_only(es, in.dest, ne.next_hop);
        return es;
    }
    int valid = -1, invalid = -1;
    for (int i : grp) {
        if (es[i].state == RouteState::Valid && valid < 0) valid = i;
        if (es[i].state == RouteState::Invalid && invalid < 0 &&
            ref_better(ne.seq, ne.hops, es[i].seq, es[i].hops))
            invalid = i;
    }
    if (valid >= 0 && ref_better(ne.seq, ne.hops, es[valid].seq, es[valid].hops)) {
        if (ne.state == RouteState::Valid) {
            ref_replace(es, valid, ne);
            ref_keep_only(es, in.dest, ne.next_hop);
        } else {
            ref_put(es, ne, t.capacity);
        }
    } else if (invalid >= 0) {
        ref_replace(es, invalid, ne);
        if (ne.state == RouteState::Valid) ref_keep_only(es, in.dest, ne.next_hop);
    }
    return es;
}

Entries ref_v16(const RoutingTable& t, const IncomingRoute& in) {
    Entries es = t.entries;
    RouteEntry ne = ref_entry(t, in);
    auto grp = ref_group(es, in.dest);

    if (grp.empty()) {
        es.push_back(ne);
    } else if (grp.size() == 1) {
        int i = grp[0];
        bool btr = ref_better(ne.seq, ne.hops, es[i].seq, es[i].hops);
        if (es[i].state == RouteState::Invalid) ref_replace(es, i, ne);
        else if (es[i].state == ne.state) {
            if (btr) ref_replace(es, i, ne);
        } else if (btr) {
            ref_put(es, ne, t.capacity);
        }
    } else {
        int statuslike = -1, unc = -1;
        for (int i : grp) {
            if (es[i].state == RouteState::Unconfirmed) unc = i;
            else statuslike = i;
        }
        if (ne.state == RouteState::Valid) {
            if (statuslike >= 0 &&
                (es[statuslike].state == RouteState::Invalid ||
                 ref_better(ne.seq, ne.hops, es[statuslike].seq, es[statuslike].hops)))
                ref_replace(es, statuslike, ne);
        } else if (unc >= 0 &&
                   ref_better(ne.seq, ne.hops, es[unc].seq, es[unc].hops)) {
            ref_replace(es, unc, ne);
        }
    }
    return es;
}

Entries ref_sol1(const RoutingTable& t, const IncomingRoute& in) {
    Entries es = t.entries;
    RouteEntry ne = ref_entry(t, in);
    auto grp = ref_group(es, in.dest);

    if (grp.empty()) {
        es.push_back(ne);
        return es;
    }
    for (int i : grp)
        if (es[i].seq.v > ne.seq.v || es[i].hops < ne.hops) return es;
    if (!ref_put(es, ne, t.capacity)) return es;
    if (ne.state == RouteState::Valid) ref_keep_only(es, in.dest, ne.next_hop);
    return es;
}

// seq_priority selects which of the two unconfirmed-sender branches is
// tried first (the default) versus the published listing's order
Entries ref_sol2(const RoutingTable& t, const IncomingRoute& in,
                 bool seq_priority) {
    Entries es = t.entries;
    RouteEntry ne = ref_entry(t, in);
    auto grp = ref_group(es, in.dest);

    if (grp.empty()) {
        es.push_back(ne);
        return es;
    }
    SeqNum ssq = es[grp[0]].seq;
    int shp = es[grp[0]].hops;
    bool accept = (ssq.v == ne.seq.v && shp >= ne.hops) || ssq.v < ne.seq.v;
    if (!accept) return es;

    if (ne.state == RouteState::Valid) {
        Entries out;
        for (const auto& e : es)
            if (e.dest != in.dest) out.push_back(e);
        out.push_back(ne);
        return out;
    }
    auto hops_branch = [&]() -> std::optional<Entries> {
        if (shp < ne.hops) return std::nullopt;
        // join the group, inheriting the stored seq/hops pair
        Entries r = es;
        RouteEntry joined{in.dest, in.sender, shp, ssq, RouteState::Unconfirmed};
        ref_put(r, joined, t.capacity);
        return r;
    };
    auto seq_branch = [&]() -> std::optional<Entries> {
        if (ssq.v >= ne.seq.v) return std::nullopt;
        for (int i : grp)
            if (es[i].state == RouteState::Valid) return es;  // drop
        Entries r;
        for (const auto& e : es)
            if (e.dest != in.dest) r.push_back(e);
        r.push_back(ne);
        return r;
    };
    auto out = seq_priority ? seq_branch() : hops_branch();
    if (!out) out = seq_priority ? hops_branch() : seq_branch();
    return out ? *out : es;
}

struct Tally {
    long cases = 0;
    long mismatches = 0;
    std::string first;
};

void compare_one(const PolicyConfig& cfg, const RoutingTable& t,
                 const IncomingRoute& in, const Entries& want, Tally& tally) {
    UpdateOutcome got = apply_update(t, in, cfg);
    bool want_process = want != t.entries;

    tally.cases += 1;
    if (got.table.entries == want && got.process == want_process) return;
    tally.mismatches += 1;
    if (tally.first.empty()) {
        std::ostringstream os;
        os << policy_name(cfg.policy)
           << " in=" << render_entry(ref_entry(t, in)) << " table:";
        for (const auto& e : t.entries) os << " " << render_entry(e);
        os << " got:";
        for (const auto& e : got.table.entries) os << " " << render_entry(e);
        os << " want:";
        for (const auto& e : want) os << " " << render_entry(e);
        tally.first = os.str();
    }
}

void compare(PolicyId policy, const RoutingTable& t, const IncomingRoute& in,
             Tally& tally) {
    PolicyConfig cfg;
    cfg.policy = policy;
    Entries want;
    switch (policy) {
        case PolicyId::V11: want = ref_v11_v13(t, in, false); break;
        case PolicyId::V13: want = ref_v11_v13(t, in, true); break;
        case PolicyId::V16: want = ref_v16(t, in); break;
        case PolicyId::Solution1: want = ref_sol1(t, in); break;
        case PolicyId::Solution2: want = ref_sol2(t, in, true); break;
    }
    compare_one(cfg, t, in, want, tally);
    if (policy == PolicyId::Solution2) {
        // the branch-order variant gets the same exhaustive sweep
        cfg.sol2_seq_priority = false;
        compare_one(cfg, t, in, ref_sol2(t, in, false), tally);
    }
}

bool one_valid_per_dest(const Entries& es) {
    for (const auto& a : es)
        for (const auto& b : es)
            if (&a != &b && a.dest == b.dest &&
                a.state == RouteState::Valid && b.state == RouteState::Valid)
                return false;
    return true;
}

bool v16_shape(const Entries& es) {
    int settled = 0, unc = 0;
    for (const auto& e : es)
        (e.state == RouteState::Unconfirmed ? unc : settled) += 1;
    return settled <= 1 && unc <= 1;
}

bool sol2_shape(const Entries& es) {
    for (const auto& a : es)
        for (const auto& b : es)
            if (a.dest == b.dest && (a.seq != b.seq || a.hops != b.hops))
                return false;
    return true;
}


inline std::array<Tally, 5> run_differential_suite() {
    // pool, an optional second-destination bystander entry, both sender
    // confirmation states, and every incoming route from the same ranges
    std::vector<RouteEntry> pool;
    for (NodeId nh : {1, 2, 3})
        for (int hops = 1; hops <= 3; ++hops)
            for (int64_t seq = 1; seq <= 3; ++seq)
                for (RouteState st : {RouteState::Unconfirmed, RouteState::Valid,
                                      RouteState::Invalid})
                    pool.push_back({0, nh, hops, SeqNum::known(seq), st});
    RouteEntry bystander{1, 2, 2, SeqNum::known(1), RouteState::Valid};

    std::vector<Entries> tables;
    tables.push_back({});
    for (const auto& a : pool) tables.push_back({a});
    for (const auto& a : pool)
        for (const auto& b : pool) {
            if (a.next_hop == b.next_hop) continue;  // (dest, next_hop) unique
            tables.push_back({a, b});
        }

    Tally tally[5];
    for (const auto& entries : tables) {
        if (!one_valid_per_dest(entries)) continue;
        for (bool with_bystander : {false, true})
            for (bool sender_confirmed : {false, true})
                for (NodeId sender : {1, 2, 3})
                    for (int hops = 1; hops <= 3; ++hops)
                        for (int64_t seq = 1; seq <= 3; ++seq) {
                            RoutingTable t;
                            t.capacity = 2;
                            t.entries = entries;
                            if (with_bystander) t.entries.push_back(bystander);
                            if (sender_confirmed) t.set_confirmed(sender);
                            IncomingRoute in{0, SeqNum::known(seq), hops, sender,
                                             SeqNum::known(seq)};
                            for (PolicyId p : {PolicyId::V11, PolicyId::V13,
                                               PolicyId::Solution1}) {
                                compare(p, t, in, tally[(int)p]);
                            }
                            if (v16_shape(entries))
                                compare(PolicyId::V16, t, in,
                                        tally[(int)PolicyId::V16]);
                            if (sol2_shape(entries))
                                compare(PolicyId::Solution2, t, in,
                                        tally[(int)PolicyId::Solution2]);
                        }
    }
    return {tally[0], tally[1], tally[2], tally[3], tally[4]};
}

}  // namespace diffsuite

#endif
