#ifndef AODV_ENGINE_HPP
#define AODV_ENGINE_HPP

#include <map>
#include <set>
#include <variant>
#include <vector>

#include "aodv/domain.hpp"
#include "aodv/policies.hpp"

namespace aodv {

struct NodeState {
    NodeId id = 0;
    SeqNum own_seq = SeqNum::known(1);
    RoutingTable table;
    std::map<NodeId, int> pending_rreqs;  // dest -> remaining resend budget
    std::set<NodeId> discovered;          // dests whose rrep reached us as origin
    std::set<NodeId> failed;              // dests all forward candidates failed for
    std::set<int> delivered_data;         // data payloads received as final dest

    bool operator==(const NodeState&) const = default;
};

struct EngineConfig {
    PolicyConfig policy;
    int max_hop = 5;
    int retry_budget = 1;
};

// Network-facing results of one run-to-completion handler. Local
// bookkeeping (tables, seqnums, delivered sets) happens on the NodeState
// in place; effects are what the surrounding executor must perform.
struct EffectBroadcast {
    Message msg;
};
struct EffectUnicastSeq {
    NodeId dest;                    // destination the candidates route toward
    std::vector<NodeId> candidates; // next hops in trial order, duplicate-free
    Message msg;
};
struct EffectDeliverLocal {};
struct EffectNoop {};
using Effect = std::variant<EffectNoop, EffectBroadcast, EffectUnicastSeq,
                            EffectDeliverLocal>;

// Route candidates toward dest: Valid and Unconfirmed entries ordered by
// (hops asc, seq desc, next-hop id asc).
std::vector<NodeId> next_hop_candidates(const RoutingTable& table, NodeId dest);

Effect handle_newpkt(NodeState& node, const Message& msg, const EngineConfig& cfg);
Effect handle_rreq(NodeState& node, const Message& msg, const EngineConfig& cfg);
Effect handle_rrep(NodeState& node, const Message& msg, const EngineConfig& cfg);
Effect handle_rerr(NodeState& node, const Message& msg, const EngineConfig& cfg);
Effect handle_message(NodeState& node, const Message& msg, const EngineConfig& cfg);

// Guard for the budgeted resend action; the transition exists only if true.
bool can_resend(const NodeState& node, NodeId dest);
Effect resend_rreq(NodeState& node, NodeId dest, const EngineConfig& cfg);

// Outcome of one unicast attempt toward (dest, nb). Returns true when the
// failed entry was Valid, i.e. a route error must be emitted. A failed
// unconfirmed hop is removed under v11/v13/v16 but only invalidated under
// the two solutions, whose update procedures rely on the kept history.
bool apply_unicast_result(NodeState& node, NodeId dest, NodeId nb, bool delivered,
                          const EngineConfig& cfg);

}  // namespace aodv

#endif
