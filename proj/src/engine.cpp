#include "aodv/engine.hpp"

#include <algorithm>

namespace aodv {

namespace {

// Last known seqnum for dip carried in a fresh rreq (opaque to every policy).
SeqNum best_known_seq(const RoutingTable& t, NodeId dip) {
    SeqNum best = SeqNum::unknown();
    for (const auto& e : t.entries)
        if (e.dest == dip && e.seq > best) best = e.seq;
    return best;
}

}  // namespace

std::vector<NodeId> next_hop_candidates(const RoutingTable& table, NodeId dest) {
    std::vector<const RouteEntry*> usable;
    for (const auto& e : table.entries)
        if (e.dest == dest && e.state != RouteState::Invalid) usable.push_back(&e);
    std::sort(usable.begin(), usable.end(), [](const RouteEntry* a, const RouteEntry* b) {
        if (a->hops != b->hops) return a->hops < b->hops;
        if (a->seq != b->seq) return a->seq > b->seq;
        return a->next_hop < b->next_hop;
    });
    std::vector<NodeId> out;
    for (const RouteEntry* e : usable) out.push_back(e->next_hop);
    return out;
}

Effect handle_newpkt(NodeState& node, const Message& msg, const EngineConfig& cfg) {
    if (msg.dip == node.id) {
        node.delivered_data.insert(msg.data);
        return EffectDeliverLocal{};
    }
    if (const RouteEntry* r = node.table.valid_route(msg.dip))
        return EffectUnicastSeq{msg.dip, {r->next_hop}, msg};
    node.own_seq = SeqNum::known(node.own_seq.v + 1);
    node.pending_rreqs[msg.dip] = cfg.retry_budget;
    return EffectBroadcast{Message::rreq(0, msg.dip, best_known_seq(node.table, msg.dip),
                                         node.id, node.own_seq, node.id, cfg.max_hop)};
}

Effect handle_rreq(NodeState& node, const Message& msg, const EngineConfig& cfg) {
    if (msg.oip == node.id) return EffectNoop{};  // echo of our own request
    UpdateOutcome out = apply_update(node.table, incoming_from_message(msg), cfg.policy);
    if (!out.process) return EffectNoop{};
    node.table = std::move(out.table);
    if (msg.dip == node.id) {
        node.own_seq = SeqNum::known(node.own_seq.v + 1);
        auto candidates = next_hop_candidates(node.table, msg.oip);
        if (candidates.empty()) return EffectNoop{};
        return EffectUnicastSeq{
            msg.oip, std::move(candidates),
            Message::rrep(0, node.id, node.own_seq, msg.oip, node.id)};
    }
    if (msg.hops + 1 < msg.max_hop) {
        Message fwd = msg;
        fwd.hops += 1;
        fwd.sip = node.id;
        return EffectBroadcast{std::move(fwd)};
    }
    return EffectNoop{};
}

Effect handle_rrep(NodeState& node, const Message& msg, const EngineConfig& cfg) {
    if (msg.dip == node.id) return EffectNoop{};
    UpdateOutcome out = apply_update(node.table, incoming_from_message(msg), cfg.policy);
    if (!out.process) return EffectNoop{};
    node.table = std::move(out.table);
    if (msg.oip == node.id) {
        node.discovered.insert(msg.dip);
        node.pending_rreqs.erase(msg.dip);
        return EffectDeliverLocal{};
    }
    auto candidates = next_hop_candidates(node.table, msg.oip);
    if (candidates.empty()) return EffectNoop{};  // route back was purged
    Message fwd = msg;
    fwd.hops += 1;
    fwd.sip = node.id;
    return EffectUnicastSeq{msg.oip, std::move(candidates), std::move(fwd)};
}

Effect handle_rerr(NodeState& node, const Message& msg, const EngineConfig&) {
    std::vector<std::pair<NodeId, SeqNum>> matched;
    for (auto [dest, seq] : msg.broken) {
        const RouteEntry* e = node.table.find(dest, msg.sip);
        if (e && e->state == RouteState::Valid && e->seq <= seq) {
            node.table = invalidate_route(node.table, dest, msg.sip);
            matched.emplace_back(dest, seq);
        }
    }
    if (matched.empty()) return EffectNoop{};
    return EffectBroadcast{Message::rerr(msg.source, node.id, std::move(matched))};
}

Effect handle_message(NodeState& node, const Message& msg, const EngineConfig& cfg) {
    switch (msg.type) {
        case MsgType::Newpkt: return handle_newpkt(node, msg, cfg);
        case MsgType::Rreq: return handle_rreq(node, msg, cfg);
        case MsgType::Rrep: return handle_rrep(node, msg, cfg);
        case MsgType::Rerr: return handle_rerr(node, msg, cfg);
    }
    return EffectNoop{};
}

bool can_resend(const NodeState& node, NodeId dest) {
    auto it = node.pending_rreqs.find(dest);
    if (it == node.pending_rreqs.end() || it->second <= 0) return false;
    if (node.table.valid_route(dest)) return false;
    return !node.discovered.contains(dest);
}

Effect resend_rreq(NodeState& node, NodeId dest, const EngineConfig& cfg) {
    node.pending_rreqs[dest] -= 1;
    node.own_seq = SeqNum::known(node.own_seq.v + 1);
    return EffectBroadcast{Message::rreq(0, dest, best_known_seq(node.table, dest),
                                         node.id, node.own_seq, node.id, cfg.max_hop)};
}

bool apply_unicast_result(NodeState& node, NodeId dest, NodeId nb, bool delivered,
                          const EngineConfig& cfg) {
    const RouteEntry* e = node.table.find(dest, nb);
    if (!e) return false;
    if (delivered) {
        if (e->state == RouteState::Unconfirmed)
            node.table = confirm_neighbor(node.table, nb);
        return false;
    }
    if (e->state == RouteState::Unconfirmed) {
        // v11..v16 drop a failed unconfirmed next hop outright. The two
        // multi-route procedures keep it as an invalid placeholder instead:
        // their acceptance scan consults stored seq/hops history, and
        // erasing it would let a stale advertisement point back through us.
        PolicyId p = cfg.policy.policy;
        if (p == PolicyId::Solution1 || p == PolicyId::Solution2) {
            RouteEntry inv = *e;
            inv.state = RouteState::Invalid;
            *node.table.find(dest, nb) = inv;
        } else {
            node.table = remove_next_hop(node.table, dest, nb);
        }
        return false;
    }
    if (e->state == RouteState::Valid) {
        node.table = invalidate_route(node.table, dest, nb);
        return true;
    }
    return false;
}

}  // namespace aodv
