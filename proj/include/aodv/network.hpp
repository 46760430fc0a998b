#ifndef AODV_NETWORK_HPP
#define AODV_NETWORK_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "aodv/domain.hpp"

namespace aodv {

// Symmetric irreflexive link relation over at most 8 nodes, packed into a
// bitmask over unordered pairs.
struct Topology {
    int n = 0;
    uint32_t mask = 0;

    static int pair_bit(NodeId a, NodeId b);
    static int num_pairs(int n) { return n * (n - 1) / 2; }

    bool linked(NodeId a, NodeId b) const;
    void set_link(NodeId a, NodeId b, bool up);
    void toggle(NodeId a, NodeId b);
    std::vector<NodeId> neighbors(NodeId a) const;
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    bool operator==(const Topology&) const = default;
};

Topology topology_from_edges(int n, const std::vector<std::string>& edges);
std::vector<std::string> edges_to_strings(const Topology& t);
std::string topology_to_dot(const Topology& t);

struct ConstraintAtom {
    NodeId a = 0;
    NodeId b = 0;
    bool connected = true;  // con(a,b) vs !con(a,b)
    bool operator==(const ConstraintAtom&) const = default;
};

struct ConstraintSet {
    std::vector<ConstraintAtom> atoms;
    bool empty() const { return atoms.empty(); }
};

struct ConstraintParseError : std::runtime_error {
    size_t position;
    ConstraintParseError(const std::string& what, size_t pos)
        : std::runtime_error(what), position(pos) {}
};

// Grammar: `and(atom(,atom)*)` | atom, atom := `con(ni,nj)` | `!con(ni,nj)`.
// Rejects contradictory pairs and node names outside 1..n.
ConstraintSet parse_constraints(const std::string& text, int n);

bool satisfies(const Topology& topo, const ConstraintSet& cs);

// Every symmetric irreflexive relation over n nodes satisfying cs, in
// ascending mask order.
std::vector<Topology> enumerate_topologies(int n, const ConstraintSet& cs);

// FIFO over a flat vector: a queue holds at most a handful of messages, so
// shifting one slot on pop beats deque's chunked bookkeeping (and a copied
// empty queue costs nothing).
struct MsgQueue {
    std::vector<Message> v;

    bool empty() const { return v.empty(); }
    size_t size() const { return v.size(); }
    const Message& front() const { return v.front(); }
    void push_back(const Message& m) { v.push_back(m); }
    void pop_front() { v.erase(v.begin()); }
    void clear() { v.clear(); }
    auto begin() const { return v.begin(); }
    auto end() const { return v.end(); }
    bool operator==(const MsgQueue&) const = default;
};

// Per ordered (sender, receiver) pair, a FIFO of in-flight messages.
struct LinkQueues {
    int n = 0;
    std::vector<MsgQueue> q;  // index sender * n + receiver

    explicit LinkQueues(int n_ = 0) : n(n_), q(n_ * n_) {}
    MsgQueue& at(NodeId from, NodeId to) { return q[from * n + to]; }
    const MsgQueue& at(NodeId from, NodeId to) const {
        return q[from * n + to];
    }
    void clear_pair(NodeId a, NodeId b) {
        at(a, b).clear();
        at(b, a).clear();
    }
    bool operator==(const LinkQueues&) const = default;
};

}  // namespace aodv

#endif
