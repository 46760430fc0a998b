#ifndef AODV_DOMAIN_HPP
#define AODV_DOMAIN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace aodv {

// Nodes are indexed from 0 internally and rendered "n1".."nN".
using NodeId = int;

std::string node_name(NodeId id);
std::optional<NodeId> parse_node_name(const std::string& s);

// Destination sequence number. Unknown (wire sentinel -1) compares less
// than every known value, so plain integer comparison is the total order.
struct SeqNum {
    int64_t v = -1;

    static constexpr SeqNum unknown() { return SeqNum{-1}; }
    static constexpr SeqNum known(int64_t x) { return SeqNum{x}; }
    bool is_known() const { return v >= 0; }
    auto operator<=>(const SeqNum&) const = default;
};

enum class RouteState : uint8_t { Unconfirmed = 0, Valid = 1, Invalid = 2 };
enum class NeighborState : uint8_t { NotConfirmed = 0, Confirmed = 1 };

const char* route_state_name(RouteState st);  // "unc" | "val" | "inv"

struct RouteEntry {
    NodeId dest = 0;
    NodeId next_hop = 0;
    int hops = 1;        // >= 1; next_hop == dest for one-hop routes
    SeqNum seq;          // always known for stored entries
    RouteState state = RouteState::Unconfirmed;

    bool operator==(const RouteEntry&) const = default;
};

// Canonical tuple rendering: "(n1, n4, 2, 2, unc)".
std::string render_entry(const RouteEntry& e);
std::optional<RouteEntry> parse_entry(const std::string& s);

// Per-node routing table. Entries keep insertion order, which doubles as
// the slot order for same-sender-else-first-empty writes.
struct RoutingTable {
    std::vector<RouteEntry> entries;
    uint32_t confirmed = 0;  // bit i set <=> neighbor i Confirmed
    int capacity = 8;        // max entries per destination

    bool operator==(const RoutingTable&) const = default;

    NeighborState neighbor_state(NodeId nb) const {
        return (confirmed >> nb) & 1u ? NeighborState::Confirmed
                                      : NeighborState::NotConfirmed;
    }
    void set_confirmed(NodeId nb) { confirmed |= 1u << nb; }

    std::vector<const RouteEntry*> routes_to(NodeId dest) const;
    int count_to(NodeId dest) const;
    const RouteEntry* find(NodeId dest, NodeId next_hop) const;
    RouteEntry* find(NodeId dest, NodeId next_hop);
    const RouteEntry* valid_route(NodeId dest) const;
};

enum class MsgType : uint8_t { Newpkt, Rreq, Rrep, Rerr };

// One struct covers all four packet kinds; unused fields stay zeroed so
// messages compare and serialize uniformly.
struct Message {
    MsgType type = MsgType::Newpkt;
    int data = 0;          // Newpkt
    int hops = 0;          // Rreq/Rrep: hop count accumulated so far
    NodeId dip = 0;        // Newpkt/Rreq/Rrep
    SeqNum dsn;            // Rreq (carried opaquely) / Rrep
    NodeId oip = 0;        // Rreq/Rrep
    SeqNum osn;            // Rreq
    NodeId sip = 0;        // last-hop sender, rewritten on every forward
    int max_hop = 0;       // Rreq
    NodeId source = 0;     // Rerr
    std::vector<std::pair<NodeId, SeqNum>> broken;  // Rerr

    bool operator==(const Message&) const = default;

    static Message newpkt(int data, NodeId dip);
    static Message rreq(int hops, NodeId dip, SeqNum dsn, NodeId oip,
                        SeqNum osn, NodeId sip, int max_hop);
    static Message rrep(int hops, NodeId dip, SeqNum dsn, NodeId oip,
                        NodeId sip);
    static Message rerr(NodeId source, NodeId sip,
                        std::vector<std::pair<NodeId, SeqNum>> broken);
};

std::string msg_type_name(MsgType t);

// The route a control message advertises: an RREQ carries a route to its
// originator, an RREP a route to its destination. hop_count is the
// message's accumulated count plus one for the receiving link.
struct IncomingRoute {
    NodeId dest = 0;
    SeqNum seq;
    int hops = 1;
    NodeId sender = 0;
    SeqNum wire_dsn;  // raw dsn_ field, only consulted in fig3-literal mode
};

// candidate/existing compared as (seq, hops): strictly greater seq wins,
// equal seq with strictly fewer hops wins.
bool is_better(SeqNum cand_seq, int cand_hops, SeqNum ex_seq, int ex_hops);
inline bool is_better(const IncomingRoute& in, const RouteEntry& e) {
    return is_better(in.seq, in.hops, e.seq, e.hops);
}

IncomingRoute incoming_from_message(const Message& msg);

}  // namespace aodv

#endif
