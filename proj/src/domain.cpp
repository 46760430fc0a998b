#include "aodv/domain.hpp"

#include <cassert>
#include <cstdio>
#include <stdexcept>

namespace aodv {

std::string node_name(NodeId id) { return "n" + std::to_string(id + 1); }

std::optional<NodeId> parse_node_name(const std::string& s) {
    if (s.size() < 2 || s[0] != 'n') return std::nullopt;
    for (size_t i = 1; i < s.size(); ++i)
        if (!isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    int v = std::stoi(s.substr(1));
    if (v < 1) return std::nullopt;
    return v - 1;
}

const char* route_state_name(RouteState st) {
    switch (st) {
        case RouteState::Unconfirmed: return "unc";
        case RouteState::Valid: return "val";
        case RouteState::Invalid: return "inv";
    }
    return "?";
}

std::string render_entry(const RouteEntry& e) {
    return "(" + node_name(e.dest) + ", " + node_name(e.next_hop) + ", " +
           std::to_string(e.hops) + ", " + std::to_string(e.seq.v) + ", " +
           route_state_name(e.state) + ")";
}

std::optional<RouteEntry> parse_entry(const std::string& s) {
    // "(n1, n4, 2, 2, unc)" — whitespace around fields is tolerated.
    std::vector<std::string> fields;
    std::string cur;
    bool open = false;
    for (char c : s) {
        if (c == '(') { open = true; continue; }
        if (!open) continue;
        if (c == ',' || c == ')') {
            fields.push_back(cur);
            cur.clear();
            if (c == ')') break;
            continue;
        }
        if (!isspace(static_cast<unsigned char>(c))) cur += c;
    }
    if (fields.size() != 5) return std::nullopt;
    auto dest = parse_node_name(fields[0]);
    auto nh = parse_node_name(fields[1]);
    if (!dest || !nh) return std::nullopt;
    RouteEntry e;
    e.dest = *dest;
    e.next_hop = *nh;
    try {
        e.hops = std::stoi(fields[2]);
        e.seq = SeqNum::known(std::stoll(fields[3]));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (fields[4] == "unc") e.state = RouteState::Unconfirmed;
    else if (fields[4] == "val") e.state = RouteState::Valid;
    else if (fields[4] == "inv") e.state = RouteState::Invalid;
    else return std::nullopt;
    return e;
}

std::vector<const RouteEntry*> RoutingTable::routes_to(NodeId dest) const {
    std::vector<const RouteEntry*> out;
    for (const auto& e : entries)
        if (e.dest == dest) out.push_back(&e);
    return out;
}

int RoutingTable::count_to(NodeId dest) const {
    int n = 0;
    for (const auto& e : entries) n += e.dest == dest;
    return n;
}

const RouteEntry* RoutingTable::find(NodeId dest, NodeId next_hop) const {
    for (const auto& e : entries)
        if (e.dest == dest && e.next_hop == next_hop) return &e;
    return nullptr;
}

RouteEntry* RoutingTable::find(NodeId dest, NodeId next_hop) {
    for (auto& e : entries)
        if (e.dest == dest && e.next_hop == next_hop) return &e;
    return nullptr;
}

const RouteEntry* RoutingTable::valid_route(NodeId dest) const {
    for (const auto& e : entries)
        if (e.dest == dest && e.state == RouteState::Valid) return &e;
    return nullptr;
}

Message Message::newpkt(int data, NodeId dip) {
    Message m;
    m.type = MsgType::Newpkt;
    m.data = data;
    m.dip = dip;
    return m;
}

Message Message::rreq(int hops, NodeId dip, SeqNum dsn, NodeId oip, SeqNum osn,
                      NodeId sip, int max_hop) {
    Message m;
    m.type = MsgType::Rreq;
    m.hops = hops;
    m.dip = dip;
    m.dsn = dsn;
    m.oip = oip;
    m.osn = osn;
    m.sip = sip;
    m.max_hop = max_hop;
    return m;
}

Message Message::rrep(int hops, NodeId dip, SeqNum dsn, NodeId oip,
                      NodeId sip) {
    Message m;
    m.type = MsgType::Rrep;
    m.hops = hops;
    m.dip = dip;
    m.dsn = dsn;
    m.oip = oip;
    m.sip = sip;
    return m;
}

Message Message::rerr(NodeId source, NodeId sip,
                      std::vector<std::pair<NodeId, SeqNum>> broken) {
    Message m;
    m.type = MsgType::Rerr;
    m.source = source;
    m.sip = sip;
    m.broken = std::move(broken);
    return m;
}

std::string msg_type_name(MsgType t) {
    switch (t) {
        case MsgType::Newpkt: return "newpkt";
        case MsgType::Rreq: return "rreq";
        case MsgType::Rrep: return "rrep";
        case MsgType::Rerr: return "rerr";
    }
    return "?";
}

bool is_better(SeqNum cand_seq, int cand_hops, SeqNum ex_seq, int ex_hops) {
    if (cand_seq > ex_seq) return true;
    return cand_seq == ex_seq && cand_hops < ex_hops;
}

IncomingRoute incoming_from_message(const Message& msg) {
    IncomingRoute in;
    in.sender = msg.sip;
    in.hops = msg.hops + 1;  // one more for the link the message arrived on
    if (msg.type == MsgType::Rreq) {
        in.dest = msg.oip;
        in.seq = msg.osn;
        in.wire_dsn = msg.dsn;
    } else if (msg.type == MsgType::Rrep) {
        in.dest = msg.dip;
        in.seq = msg.dsn;
        in.wire_dsn = msg.dsn;
    } else {
        throw std::invalid_argument("incoming_from_message: not rreq/rrep");
    }
    return in;
}

}  // namespace aodv
