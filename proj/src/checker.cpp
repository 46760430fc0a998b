#include "aodv/checker.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <array>
#include <string_view>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aodv {

namespace {

void enqueue(GlobalState& st, NodeId from, NodeId to, const Message& m,
             const ExecConfig& cfg) {
    auto& q = st.queues.at(from, to);
    if (static_cast<int>(q.size()) >= cfg.queue_cap) {
        st.overflow = true;
        return;
    }
    q.push_back(m);
}

void do_broadcast(GlobalState& st, NodeId sender, const Message& m,
                  const ExecConfig& cfg) {
    for (NodeId nb : st.topo.neighbors(sender)) {
        // the handlers unconditionally drop a route message that reaches
        // the node it advertises, so queueing those copies only multiplies
        // interleavings of guaranteed no-ops
        if (m.type == MsgType::Rreq && nb == m.oip) continue;
        if (m.type == MsgType::Rrep && nb == m.dip) continue;
        enqueue(st, sender, nb, m, cfg);
    }
}

void apply_effect(GlobalState& st, NodeId at, const Effect& eff,
                  const ExecConfig& cfg, TraceStep& step) {
    if (const auto* bc = std::get_if<EffectBroadcast>(&eff)) {
        do_broadcast(st, at, bc->msg, cfg);
        return;
    }
    const auto* uc = std::get_if<EffectUnicastSeq>(&eff);
    if (!uc) return;  // Noop / DeliverLocal: bookkeeping already done

    NodeState& node = st.nodes[at];
    bool success = false;
    std::vector<std::pair<NodeId, SeqNum>> broken;
    for (NodeId nb : uc->candidates) {
        bool up = st.topo.linked(at, nb);
        step.outcomes.push_back({at, nb, up});
        const RouteEntry* e = node.table.find(uc->dest, nb);
        SeqNum seq = e ? e->seq : SeqNum::unknown();
        if (up) {
            enqueue(st, at, nb, uc->msg, cfg);
            apply_unicast_result(node, uc->dest, nb, true, cfg.engine);
            success = true;
            break;
        }
        if (apply_unicast_result(node, uc->dest, nb, false, cfg.engine))
            broken.emplace_back(uc->dest, seq);
    }
    if (!success) node.failed.insert(uc->dest);
    if (!broken.empty())
        do_broadcast(st, at, Message::rerr(at, at, std::move(broken)), cfg);
}

}  // namespace

GlobalState make_initial_state(int n, const Topology& topo, const ExecConfig& cfg,
                               int retry_budget, int flip_budget,
                               int confirm_budget) {
    (void)retry_budget;  // consumed when a discovery starts
    GlobalState st;
    st.nodes.resize(n);
    int cap = cfg.engine.policy.policy == PolicyId::V16 ? 2 : cfg.capacity;
    for (int i = 0; i < n; ++i) {
        st.nodes[i].id = i;
        st.nodes[i].own_seq = SeqNum::known(1);
        st.nodes[i].table.capacity = cap;
    }
    st.queues = LinkQueues(n);
    st.topo = topo;
    st.topo_changes_left = flip_budget;
    st.confirms_left = confirm_budget;
    return st;
}

TraceStep apply_transition(GlobalState& state, const Transition& t,
                           const ExecConfig& cfg) {
    TraceStep step{t, {}};
    switch (t.kind) {
        case Transition::Inject: {
            NodeState& node = state.nodes[t.a];
            Effect eff = handle_newpkt(node, Message::newpkt(0, t.b), cfg.engine);
            apply_effect(state, t.a, eff, cfg, step);
            break;
        }
        case Transition::Deliver: {
            auto& q = state.queues.at(t.b, t.a);
            if (q.empty())
                throw ExecError("deliver " + node_name(t.a) + " from " +
                                node_name(t.b) + ": empty queue");
            Message msg = q.front();
            q.pop_front();
            NodeState& node = state.nodes[t.a];
            Effect eff = handle_message(node, msg, cfg.engine);
            apply_effect(state, t.a, eff, cfg, step);
            break;
        }
        case Transition::Flip: {
            Topology t2 = state.topo;
            t2.toggle(t.a, t.b);
            if (!satisfies(t2, cfg.constraint))
                throw ExecError("flip " + node_name(t.a) + "-" + node_name(t.b) +
                                " violates the network constraint");
            state.topo = t2;
            if (!state.topo.linked(t.a, t.b)) state.queues.clear_pair(t.a, t.b);
            state.topo_changes_left -= 1;
            break;
        }
        case Transition::Resend: {
            NodeState& node = state.nodes[t.a];
            if (!can_resend(node, t.b))
                throw ExecError("resend at " + node_name(t.a) + " for " +
                                node_name(t.b) + ": guard not satisfied");
            Effect eff = resend_rreq(node, t.b, cfg.engine);
            apply_effect(state, t.a, eff, cfg, step);
            break;
        }
        case Transition::Confirm: {
            if (!state.topo.linked(t.a, t.b))
                throw ExecError("confirm " + node_name(t.a) + "-" + node_name(t.b) +
                                ": link is down");
            state.nodes[t.a].table = confirm_neighbor(state.nodes[t.a].table, t.b);
            if (t.mutual)
                state.nodes[t.b].table = confirm_neighbor(state.nodes[t.b].table, t.a);
            state.confirms_left -= 1;
            break;
        }
    }
    return step;
}

std::optional<std::vector<NodeId>> detect_route_loop(const GlobalState& state,
                                                     NodeId dest,
                                                     bool include_unconfirmed) {
    int n = static_cast<int>(state.nodes.size());
    // fixed-size adjacency (n <= 8): the detector runs once per destination
    // per explored state, so it must not allocate until a cycle is found
    std::array<std::array<NodeId, 8>, 8> adj{};
    std::array<int, 8> deg{};
    for (int u = 0; u < n; ++u) {
        if (u == dest) continue;
        for (const auto& e : state.nodes[u].table.entries) {
            if (e.dest != dest) continue;
            if (e.state == RouteState::Valid ||
                (include_unconfirmed && e.state == RouteState::Unconfirmed))
                adj[u][deg[u]++] = e.next_hop;
        }
        std::sort(adj[u].begin(), adj[u].begin() + deg[u]);
    }
    // iterative DFS, white/gray/black
    std::array<int, 8> color{};
    struct Frame { NodeId u; int next; };
    std::array<Frame, 9> stack;
    std::array<NodeId, 9> path;
    for (int start = 0; start < n; ++start) {
        if (color[start] != 0) continue;
        int top = 0;
        stack[top] = {static_cast<NodeId>(start), 0};
        path[top] = start;
        color[start] = 1;
        while (top >= 0) {
            Frame& f = stack[top];
            if (f.next < deg[f.u]) {
                NodeId v = adj[f.u][f.next++];
                if (color[v] == 1) {
                    int at = 0;
                    while (path[at] != v) ++at;
                    std::vector<NodeId> cycle(path.begin() + at,
                                              path.begin() + top + 1);
                    auto sm = std::min_element(cycle.begin(), cycle.end());
                    std::rotate(cycle.begin(), sm, cycle.end());
                    return cycle;
                }
                if (color[v] == 0) {
                    color[v] = 1;
                    ++top;
                    stack[top] = {v, 0};
                    path[top] = v;
                }
            } else {
                color[f.u] = 2;
                --top;
            }
        }
    }
    return std::nullopt;
}

std::vector<std::pair<Transition, GlobalState>> successors(const GlobalState& state,
                                                           const ExecConfig& cfg) {
    std::vector<std::pair<Transition, GlobalState>> out;
    if (state.overflow) return out;
    int n = static_cast<int>(state.nodes.size());

    size_t in_flight = 0;
    for (const auto& q : state.queues.q) in_flight += q.size();

    for (NodeId to = 0; to < n; ++to)
        for (NodeId from = 0; from < n; ++from)
            if (!state.queues.at(from, to).empty()) {
                Transition t{Transition::Deliver, to, from};
                GlobalState s2 = state;
                apply_transition(s2, t, cfg);
                // A delivery that only consumed its message — every node
                // state untouched, nothing new sent — commutes with every
                // other enabled transition: it frees queue space, clears
                // with the link like a flip would, and changes no table the
                // loop predicate reads. Exploring it as the sole successor
                // removes the interleavings of inert redeliveries without
                // losing any reachable table configuration.
                if (!s2.overflow && s2.nodes == state.nodes) {
                    size_t left = 0;
                    for (const auto& q : s2.queues.q) left += q.size();
                    if (left == in_flight - 1) {
                        out.clear();
                        out.emplace_back(t, std::move(s2));
                        return out;
                    }
                }
                out.emplace_back(t, std::move(s2));
            }

    if (state.topo_changes_left > 0)
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = a + 1; b < n; ++b) {
                Topology t2 = state.topo;
                t2.toggle(a, b);
                if (!satisfies(t2, cfg.constraint)) continue;
                Transition t{Transition::Flip, a, b};
                GlobalState s2 = state;
                apply_transition(s2, t, cfg);
                out.emplace_back(t, std::move(s2));
            }

    for (NodeId a = 0; a < n; ++a)
        for (const auto& [dest, budget] : state.nodes[a].pending_rreqs)
            if (can_resend(state.nodes[a], dest)) {
                Transition t{Transition::Resend, a, dest};
                GlobalState s2 = state;
                apply_transition(s2, t, cfg);
                out.emplace_back(t, std::move(s2));
            }

    if (state.confirms_left > 0)
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = a + 1; b < n; ++b)
                if (state.topo.linked(a, b)) {
                    const RoutingTable& ta = state.nodes[a].table;
                    const RoutingTable& tb = state.nodes[b].table;
                    // both endpoints already confirmed: burning budget changes nothing
                    if (confirm_neighbor(ta, b) == ta && confirm_neighbor(tb, a) == tb)
                        continue;
                    Transition t{Transition::Confirm, a, b, true};
                    GlobalState s2 = state;
                    apply_transition(s2, t, cfg);
                    out.emplace_back(t, std::move(s2));
                }
    return out;
}

namespace {

// Field widths are trimmed to what bounded runs can produce (seqnums grow
// only by the retry budget, hop counts are capped by max_hop); the
// serialization stays invertible, just compact, because the frontier holds
// millions of these strings at once.
struct ByteSink {
    std::string buf;
    ByteSink() { buf.reserve(256); }
    void u8(uint8_t v) { buf.push_back(static_cast<char>(v)); }
    void i16(int64_t v) {
        auto u = static_cast<uint16_t>(v);
        u8(static_cast<uint8_t>(u));
        u8(static_cast<uint8_t>(u >> 8));
    }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<uint8_t>(v >> (8 * i)));
    }
};

void serialize_message(ByteSink& s, const Message& m) {
    s.u8(static_cast<uint8_t>(static_cast<uint8_t>(m.type) |
                              static_cast<uint8_t>(m.hops) << 2));
    s.u8(static_cast<uint8_t>(m.dip | m.oip << 3));
    s.u8(static_cast<uint8_t>(m.sip | m.source << 3));
    s.u8(static_cast<uint8_t>(m.max_hop));
    s.u8(static_cast<uint8_t>(m.data));
    s.u8(static_cast<uint8_t>(m.dsn.v));
    s.u8(static_cast<uint8_t>(m.osn.v));
    s.u8(static_cast<uint8_t>(m.broken.size()));
    for (auto [d, q] : m.broken) {
        s.u8(d);
        s.u8(static_cast<uint8_t>(q.v));
    }
}

constexpr uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

}  // namespace

namespace {

struct ByteReader {
    std::string_view buf;
    size_t i = 0;
    uint8_t u8() { return static_cast<uint8_t>(buf[i++]); }
    uint32_t u32() {
        uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= static_cast<uint32_t>(u8()) << (8 * k);
        return v;
    }
    int64_t i16() {
        uint16_t v = static_cast<uint16_t>(u8());
        v = static_cast<uint16_t>(v | static_cast<uint16_t>(u8()) << 8);
        return static_cast<int16_t>(v);
    }
    int64_t i8() { return static_cast<int8_t>(u8()); }
};

Message deserialize_message(ByteReader& r) {
    Message m;
    uint8_t b0 = r.u8();
    m.type = static_cast<MsgType>(b0 & 3);
    m.hops = b0 >> 2;
    uint8_t b1 = r.u8();
    m.dip = b1 & 7;
    m.oip = b1 >> 3;
    uint8_t b2 = r.u8();
    m.sip = b2 & 7;
    m.source = b2 >> 3;
    m.max_hop = static_cast<int>(r.u8());
    m.data = static_cast<int>(r.u8());
    m.dsn = SeqNum{r.i8()};
    m.osn = SeqNum{r.i8()};
    uint32_t nb = r.u8();
    for (uint32_t k = 0; k < nb; ++k) {
        NodeId d = r.u8();
        m.broken.emplace_back(d, SeqNum{r.i8()});
    }
    return m;
}

}  // namespace

// Layout: a leading section holding everything a handler can read (tables,
// seqnums, discovered sets, queues, topology) followed by the remaining
// budgets and bookkeeping records. The dominance projection hashes just the
// leading span, so one serialization pass serves both keys.
std::string canonical_bytes(const GlobalState& state, size_t* prefix_len) {
    ByteSink s;
    s.u8(static_cast<uint8_t>(state.nodes.size()));
    for (const auto& node : state.nodes) {
        s.u8(static_cast<uint8_t>(node.own_seq.v));
        s.u8(static_cast<uint8_t>(node.table.confirmed));
        s.u8(static_cast<uint8_t>(node.table.entries.size()));
        for (const auto& e : node.table.entries) {
            s.u8(static_cast<uint8_t>(e.dest | e.next_hop << 3 |
                                      static_cast<uint8_t>(e.state) << 6));
            s.u8(static_cast<uint8_t>(e.hops));
            s.u8(static_cast<uint8_t>(e.seq.v));
        }
        s.u8(static_cast<uint8_t>(node.discovered.size()));
        for (NodeId d : node.discovered) s.u8(d);
    }
    // presence bitmask first, then only the non-empty queues
    {
        uint64_t qmask = 0;
        for (size_t i = 0; i < state.queues.q.size(); ++i)
            if (!state.queues.q[i].empty()) qmask |= uint64_t{1} << i;
        for (size_t i = 0; i < state.queues.q.size(); i += 8)
            s.u8(static_cast<uint8_t>(qmask >> i));
        for (const auto& q : state.queues.q) {
            if (q.empty()) continue;
            s.u8(static_cast<uint8_t>(q.size()));
            for (const auto& m : q) serialize_message(s, m);
        }
    }
    s.u32(state.topo.mask);
    if (prefix_len) *prefix_len = s.buf.size();
    for (const auto& node : state.nodes) {
        s.u8(static_cast<uint8_t>(node.pending_rreqs.size()));
        for (auto [d, budget] : node.pending_rreqs) {
            s.u8(d);
            s.u8(static_cast<uint8_t>(budget));
        }
        s.u8(static_cast<uint8_t>(node.failed.size()));
        for (NodeId d : node.failed) s.u8(d);
        s.u8(static_cast<uint8_t>(node.delivered_data.size()));
        for (int d : node.delivered_data) s.u8(static_cast<uint8_t>(d));
    }
    s.u8(static_cast<uint8_t>(state.topo_changes_left));
    s.u8(static_cast<uint8_t>(state.confirms_left));
    return s.buf;
}

std::string canonical_bytes(const GlobalState& state) {
    return canonical_bytes(state, nullptr);
}

namespace {

GlobalState state_from_span(std::string_view bytes, const ExecConfig& cfg) {
    ByteReader r{bytes};
    GlobalState st;
    int n = static_cast<int>(r.u8());
    st.nodes.resize(n);
    int cap = cfg.engine.policy.policy == PolicyId::V16 ? 2 : cfg.capacity;
    for (int i = 0; i < n; ++i) {
        NodeState& node = st.nodes[i];
        node.id = i;
        node.own_seq = SeqNum{r.i8()};
        node.table.confirmed = r.u8();
        node.table.capacity = cap;
        uint32_t ne = r.u8();
        for (uint32_t k = 0; k < ne; ++k) {
            RouteEntry e;
            uint8_t b0 = r.u8();
            e.dest = b0 & 7;
            e.next_hop = b0 >> 3 & 7;
            e.state = static_cast<RouteState>(b0 >> 6);
            e.hops = static_cast<int>(r.u8());
            e.seq = SeqNum{r.i8()};
            node.table.entries.push_back(e);
        }
        for (uint32_t k = 0, c = r.u8(); k < c; ++k)
            node.discovered.insert(r.u8());
    }
    st.queues = LinkQueues(n);
    {
        uint64_t qmask = 0;
        for (size_t i = 0; i < st.queues.q.size(); i += 8)
            qmask |= static_cast<uint64_t>(r.u8()) << i;
        for (size_t i = 0; i < st.queues.q.size(); ++i) {
            if (!(qmask >> i & 1)) continue;
            for (uint32_t k = 0, c = r.u8(); k < c; ++k)
                st.queues.q[i].push_back(deserialize_message(r));
        }
    }
    st.topo.n = n;
    st.topo.mask = r.u32();
    for (int i = 0; i < n; ++i) {
        NodeState& node = st.nodes[i];
        uint32_t np = r.u8();
        for (uint32_t k = 0; k < np; ++k) {
            NodeId d = r.u8();
            node.pending_rreqs[d] = static_cast<int>(r.u8());
        }
        for (uint32_t k = 0, c = r.u8(); k < c; ++k)
            node.failed.insert(r.u8());
        for (uint32_t k = 0, c = r.u8(); k < c; ++k)
            node.delivered_data.insert(static_cast<int>(r.u8()));
    }
    st.topo_changes_left = static_cast<int>(r.u8());
    st.confirms_left = static_cast<int>(r.u8());
    return st;
}

}  // namespace

GlobalState state_from_bytes(const std::string& bytes, const ExecConfig& cfg) {
    return state_from_span(bytes, cfg);
}

namespace {

StateKey key_from_span(const char* p, size_t len) {
    uint64_t h1 = 0x9e3779b97f4a7c15ULL, h2 = 0xc2b2ae3d27d4eb4fULL;
    size_t i = 0;
    while (i < len) {
        uint64_t chunk = 0;
        for (int k = 0; k < 8 && i < len; ++k, ++i)
            chunk |= static_cast<uint64_t>(static_cast<uint8_t>(p[i])) << (8 * k);
        h1 = mix64(h1 ^ chunk);
        h2 = mix64(h2 + chunk * 0x2545f4914f6cdd1dULL);
    }
    h1 = mix64(h1 ^ len);
    h2 = mix64(h2 ^ (len << 1));
    return StateKey{h1, h2};
}

}  // namespace

StateKey key_from_bytes(const std::string& bytes) {
    return key_from_span(bytes.data(), bytes.size());
}

StateKey canonical_key(const GlobalState& state) {
    return key_from_bytes(canonical_bytes(state));
}

namespace {

struct Meta {
    int32_t parent;
    Transition t;
};

// The leading span of canonical_bytes covers the fields a handler can read
// (tables, seqnums, discovered sets, queues, topology); the trailing part
// holds the remaining budgets and write-only records. A state whose budgets
// all dominate another's can replay every behavior of the other (enlarging
// a bound never hides a loop), so the visited set keys on the leading span
// and tracks explored budget vectors per key.

// Remaining-budget vector (flips, confirms, retries) packed into a small
// index so a u64 bitmask can record which vectors reached a projection.
struct BudgetDims {
    int f, c, r;
    int size() const { return (f + 1) * (c + 1) * (r + 1); }
    int index(const GlobalState& st) const {
        int pending = 0;
        for (const auto& node : st.nodes)
            for (auto [d, b] : node.pending_rreqs) pending += b;
        // only Inject opens a pending slot, so at most one exists and the
        // sum is that slot's value; per-dimension dominance stays exact
        if (pending > r) pending = r;
        return (st.topo_changes_left * (c + 1) + st.confirms_left) * (r + 1) +
               pending;
    }
    // dom[i] = bitmask of vectors that dominate vector i pointwise
    std::vector<uint64_t> dominators() const {
        int sz = size();
        std::vector<uint64_t> dom(sz, 0);
        auto unpack = [&](int i, int& fi, int& ci, int& ri) {
            ri = i % (r + 1);
            ci = (i / (r + 1)) % (c + 1);
            fi = i / ((r + 1) * (c + 1));
        };
        for (int i = 0; i < sz; ++i) {
            int fi, ci, ri;
            unpack(i, fi, ci, ri);
            for (int j = 0; j < sz; ++j) {
                int fj, cj, rj;
                unpack(j, fj, cj, rj);
                if (fj >= fi && cj >= ci && rj >= ri)
                    dom[i] |= uint64_t{1} << j;
            }
        }
        return dom;
    }
};

std::optional<NodeId> find_any_loop(const GlobalState& st, bool diag,
                                    std::vector<NodeId>& cycle_out) {
    int n = static_cast<int>(st.nodes.size());
    for (NodeId d = 0; d < n; ++d) {
        if (auto cyc = detect_route_loop(st, d, diag)) {
            cycle_out = *cyc;
            return d;
        }
    }
    return std::nullopt;
}

std::vector<TraceStep> rebuild_trace(const std::vector<Meta>& meta, int32_t idx,
                                     const GlobalState& initial,
                                     const ExecConfig& cfg) {
    std::vector<Transition> chain;
    for (int32_t i = idx; i >= 0; i = meta[i].parent) chain.push_back(meta[i].t);
    std::reverse(chain.begin(), chain.end());
    GlobalState st = initial;
    std::vector<TraceStep> steps;
    steps.reserve(chain.size());
    for (const Transition& t : chain) steps.push_back(apply_transition(st, t, cfg));
    return steps;
}

// one successor, pre-digested for the merge step
struct Expansion {
    Transition t;
    std::string bytes;  // empty when the path overflowed a queue
    StateKey key{};
    uint8_t budget = 0;  // packed remaining-budget vector
    NodeId loop_dest = -1;
    std::vector<NodeId> cycle;
};

// dims == nullptr disables the dominance projection (budget space too big
// for the bitmask); the key then covers the full state.
std::vector<Expansion> expand_one(std::string_view bytes,
                                  const ExecConfig& exec, bool diag,
                                  const BudgetDims* dims) {
    GlobalState st = state_from_span(bytes, exec);
    std::vector<Expansion> out;
    for (auto& [t, s2] : successors(st, exec)) {
        Expansion e;
        e.t = t;
        if (s2.overflow) {
            out.push_back(std::move(e));
            continue;
        }
        size_t prefix = 0;
        e.bytes = canonical_bytes(s2, &prefix);
        if (dims) {
            e.key = key_from_span(e.bytes.data(), prefix);
            e.budget = static_cast<uint8_t>(dims->index(s2));
        } else {
            e.key = key_from_bytes(e.bytes);
        }
        if (auto d = find_any_loop(s2, diag, e.cycle)) e.loop_dest = *d;
        out.push_back(std::move(e));
    }
    return out;
}

// Per-projection bitmask of budget vectors already explored, kept in a
// fixed-capacity open-addressing table. When the budget space needs at
// most 20 bits — the case under default bounds (18 vectors) — a slot is a
// single u64: 44-bit fingerprint plus the bitmask (hash compaction; the
// probe start consumes the other hash half). Wider budget spaces fall back
// to a full 64-bit fingerprint with the mask in a parallel array. Shared
// across the topologies of an --all-topologies sweep: a state reached from
// one initial topology has the same future wherever it is reached from.
// Capacity is set from the state ceiling up front, so the table never
// rehashes and memory use is flat for the whole run.
class Visited {
public:
    Visited(uint64_t max_entries, int mask_bits) {
        cap_ = 1ULL << 12;
        while (cap_ * 11 < max_entries * 12 && cap_ < (1ULL << 29)) cap_ <<= 1;
        packed_ = mask_bits <= 20;
        if (packed_) {
            slots_.assign(cap_, 0);
        } else {
            fps_.assign(cap_, 0);
            masks_.assign(cap_, 0);
        }
    }
    // Records `bit` for the key and returns true, unless a vector from
    // `dom` (the bitmask of dominating budget vectors) already reached it.
    // Probing is bounded: when every slot in the window is held by other
    // keys, one occupant is evicted and the table degrades into a cache.
    // That stays sound — a forgotten state is re-explored, never skipped —
    // and the search still terminates, because in a loop-free system every
    // transition strictly shrinks the remaining budgets or in-flight
    // message potential, so there are no infinite paths to rediscover.
    bool try_visit(StateKey k, uint64_t bit, uint64_t dom) {
        size_t i = k.h1 & (cap_ - 1);
        if (packed_) {
            const uint64_t fp = k.h2 >> 20 << 20;
            for (int probe = 0; probe < kWindow; ++probe) {
                uint64_t s = slots_[i];
                uint64_t mask = s & 0xFFFFF;
                if (mask == 0) {  // zero marks empty; real entries set a bit
                    slots_[i] = fp | bit;
                    ++count_;
                    return true;
                }
                if ((s & ~uint64_t{0xFFFFF}) == fp) {
                    if (mask & dom) return false;
                    slots_[i] = s | bit;
                    return true;
                }
                i = (i + 1) & (cap_ - 1);
            }
            slots_[victim(k)] = fp | bit;
            ++evictions_;
            return true;
        }
        for (int probe = 0; probe < kWindow; ++probe) {
            uint64_t mask = masks_[i];
            if (mask == 0) {
                fps_[i] = k.h2;
                masks_[i] = bit;
                ++count_;
                return true;
            }
            if (fps_[i] == k.h2) {
                if (mask & dom) return false;
                masks_[i] = mask | bit;
                return true;
            }
            i = (i + 1) & (cap_ - 1);
        }
        size_t v = victim(k);
        fps_[v] = k.h2;
        masks_[v] = bit;
        ++evictions_;
        return true;
    }
    uint64_t evictions() const { return evictions_; }

private:
    static constexpr int kWindow = 64;

    // a pseudo-random slot inside the full probe window
    size_t victim(StateKey k) const {
        return (k.h1 + (k.h2 & (kWindow - 1))) & (cap_ - 1);
    }

    bool packed_;
    std::vector<uint64_t> slots_;   // packed: fp<<20 | mask
    std::vector<uint64_t> fps_;     // wide fallback
    std::vector<uint64_t> masks_;
    uint64_t cap_ = 0;
    uint64_t count_ = 0;
    uint64_t evictions_ = 0;
};

// One BFS level as packed byte runs: [u16 len][state bytes]([i32 parent]
// when tracing), stored in fixed-size chunks. Keeps millions of frontier
// entries out of per-string heap allocations, and chunks already consumed
// by the expansion loop are freed mid-level, so at most one level plus the
// unread remainder of the previous one is resident.
struct FrontierBuf {
    static constexpr size_t kChunk = 4u << 20;
    // chunks sealed past this point spill to a temp file; BFS consumes the
    // frontier strictly in order, so reloads are sequential reads
    static constexpr size_t kSpillAfter = 16;
    struct Chunk {
        std::unique_ptr<std::string> mem;
        uint64_t off = 0;
        uint32_t len = 0;
    };
    std::vector<Chunk> chunks;
    size_t count = 0;

    void add(std::string_view bytes, int32_t parent, bool record) {
        size_t need = 2 + bytes.size() + (record ? 4 : 0);
        if (chunks.empty() || chunks.back().len + need > kChunk) {
            if (chunks.size() > kSpillAfter) spill(chunks.back());
            chunks.push_back({std::make_unique<std::string>(), 0, 0});
            chunks.back().mem->reserve(kChunk);
        }
        Chunk& ch = chunks.back();
        auto len = static_cast<uint16_t>(bytes.size());
        ch.mem->append(reinterpret_cast<const char*>(&len), 2);
        ch.mem->append(bytes.data(), bytes.size());
        if (record) ch.mem->append(reinterpret_cast<const char*>(&parent), 4);
        ch.len = static_cast<uint32_t>(ch.mem->size());
        ++count;
    }

    struct Cursor {
        size_t chunk = 0, pos = 0;
    };
    bool done(const Cursor& c) const {
        return c.chunk >= chunks.size() ||
               (c.chunk + 1 == chunks.size() && c.pos >= chunks.back().len);
    }
    // reads the record at the cursor and advances it; the returned view
    // stays valid until the cursor's chunk is released
    std::pair<std::string_view, int32_t> read(Cursor& c, bool record) {
        const std::string& buf = loaded(c.chunk);
        uint16_t len;
        std::memcpy(&len, buf.data() + c.pos, 2);
        std::string_view bytes{buf.data() + c.pos + 2, len};
        c.pos += 2 + len;
        int32_t parent = -1;
        if (record) {
            std::memcpy(&parent, buf.data() + c.pos, 4);
            c.pos += 4;
        }
        if (c.pos >= buf.size()) {
            ++c.chunk;
            c.pos = 0;
        }
        return {bytes, parent};
    }
    // frees every fully consumed chunk strictly before the cursor's
    void release_before(const Cursor& c) {
        for (size_t i = 0; i < c.chunk && i < chunks.size(); ++i)
            chunks[i].mem.reset();
    }

private:
    struct FileCloser {
        void operator()(std::FILE* f) const { std::fclose(f); }
    };
    std::unique_ptr<std::FILE, FileCloser> file_;

    void spill(Chunk& ch) {
        if (!file_) file_.reset(std::tmpfile());
        if (!file_) return;  // no temp storage; keep the chunk in memory
        std::fseek(file_.get(), 0, SEEK_END);
        ch.off = static_cast<uint64_t>(std::ftell(file_.get()));
        if (std::fwrite(ch.mem->data(), 1, ch.len, file_.get()) == ch.len)
            ch.mem.reset();
    }

    const std::string& loaded(size_t i) {
        Chunk& ch = chunks[i];
        if (!ch.mem) {
            ch.mem = std::make_unique<std::string>();
            ch.mem->resize(ch.len);
            std::fseek(file_.get(), static_cast<long>(ch.off), SEEK_SET);
            if (std::fread(ch.mem->data(), 1, ch.len, file_.get()) != ch.len)
                std::abort();  // lost part of the frontier; cannot continue
        }
        return *ch.mem;
    }
};

// BFS over one initial topology; the frontier and visited set hold compact
// canonical serializations, never live states. With record=false no parent
// links are kept, so a counterexample verdict carries the cycle but no
// trace; explore() reruns the losing topology with record=true to get one.
// Returns true when the search ended with a verdict (counterexample or
// ceiling); false on exhaustion.
bool bfs_one(const ExplorationConfig& cfg, const Topology& topo, Verdict& v,
             Visited& visited, const BudgetDims* dims,
             const std::vector<uint64_t>& dom, bool record) {
    GlobalState initial =
        make_initial_state(cfg.n, topo, cfg.exec, cfg.retry_budget,
                           cfg.topo_change_budget, cfg.confirm_budget);
    // fix retry budget into the engine config used throughout this run
    ExecConfig exec = cfg.exec;
    exec.engine.retry_budget = cfg.retry_budget;

    Transition root{Transition::Inject, cfg.origin, cfg.dest};
    GlobalState s0 = initial;
    apply_transition(s0, root, exec);

    std::vector<Meta> meta;
    if (record) meta.push_back({-1, root});
    size_t prefix0 = 0;
    std::string bytes0 = canonical_bytes(s0, &prefix0);
    StateKey key0 = dims ? key_from_span(bytes0.data(), prefix0)
                         : key_from_bytes(bytes0);
    uint8_t budget0 = dims ? static_cast<uint8_t>(dims->index(s0)) : 0;
    if (!visited.try_visit(key0, uint64_t{1} << budget0, dom[budget0]))
        return false;  // covered by an earlier sweep
    v.states += 1;

    std::vector<NodeId> cycle;
    if (auto d = find_any_loop(s0, cfg.diag_unconfirmed, cycle)) {
        v.kind = Verdict::Counterexample;
        v.cycle = cycle;
        v.cycle_dest = *d;
        if (record) v.trace = rebuild_trace(meta, 0, initial, exec);
        v.initial_topology = topo;
        return true;
    }

    FrontierBuf frontier;
    frontier.add(bytes0, 0, record);
    int level = 0;
    while (frontier.count > 0) {
        if (cfg.progress)
            std::fprintf(stderr, "depth %d: frontier %zu, states %llu, evictions %llu\n",
                         level++, frontier.count,
                         static_cast<unsigned long long>(v.states),
                         static_cast<unsigned long long>(visited.evictions()));
        FrontierBuf next;
        // merge one item's successors into visited/meta/next; returns true
        // when the search is over
        auto merge = [&](int32_t parent, std::vector<Expansion>& exp) -> bool {
            for (Expansion& e : exp) {
                v.transitions += 1;
                if (e.bytes.empty()) {
                    v.overflows += 1;
                    continue;
                }
                if (!visited.try_visit(e.key, uint64_t{1} << e.budget,
                                       dom[e.budget]))
                    continue;
                v.states += 1;
                int32_t idx = parent;
                if (record) {
                    meta.push_back({parent, e.t});
                    idx = static_cast<int32_t>(meta.size()) - 1;
                }
                if (e.loop_dest >= 0) {
                    v.kind = Verdict::Counterexample;
                    v.cycle = e.cycle;
                    v.cycle_dest = e.loop_dest;
                    if (record) v.trace = rebuild_trace(meta, idx, initial, exec);
                    v.initial_topology = topo;
                    return true;
                }
                if (v.states >= cfg.max_states) {
                    v.kind = Verdict::Inconclusive;
                    return true;
                }
                next.add(e.bytes, idx, record);
            }
            return false;
        };

        FrontierBuf::Cursor cur;
#ifdef _OPENMP
        if (cfg.workers > 1) {
            // level-synchronous: workers expand in parallel, the merge runs
            // serially in frontier order, so dedupe and classification match
            // the single-threaded walk
            const size_t batch = 1024;
            std::vector<std::pair<std::string_view, int32_t>> items;
            while (!frontier.done(cur)) {
                items.clear();
                while (!frontier.done(cur) && items.size() < batch)
                    items.push_back(frontier.read(cur, record));
                std::vector<std::vector<Expansion>> exp(items.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(cfg.workers)
                for (size_t i = 0; i < items.size(); ++i)
                    exp[i] = expand_one(items[i].first, exec,
                                        cfg.diag_unconfirmed, dims);
                for (size_t i = 0; i < items.size(); ++i)
                    if (merge(items[i].second, exp[i])) return true;
                frontier.release_before(cur);
            }
        } else
#endif
        {
            while (!frontier.done(cur)) {
                auto [bytes, parent] = frontier.read(cur, record);
                auto exp = expand_one(bytes, exec, cfg.diag_unconfirmed, dims);
                if (merge(parent, exp)) return true;
                frontier.release_before(cur);
            }
        }
        frontier = std::move(next);
    }
    return false;
}

}  // namespace

Verdict explore(const ExplorationConfig& cfg) {
    Verdict v;
    std::vector<Topology> topos;
    if (cfg.initial_topo) topos.push_back(*cfg.initial_topo);
    else topos = enumerate_topologies(cfg.n, cfg.exec.constraint);

    BudgetDims dims{cfg.topo_change_budget, cfg.confirm_budget,
                    cfg.retry_budget};
    bool dominate = dims.size() <= 64;
    std::vector<uint64_t> dom =
        dominate ? dims.dominators() : std::vector<uint64_t>{1};
    const BudgetDims* dp = dominate ? &dims : nullptr;
    int mask_bits = dominate ? dims.size() : 1;
    Visited visited(cfg.max_states, mask_bits);
    for (const Topology& topo : topos) {
        if (!bfs_one(cfg, topo, v, visited, dp, dom, false)) continue;
        if (v.kind == Verdict::Counterexample) {
            // second pass on the losing topology with parent links kept;
            // it revisits a superset of the first pass's states for this
            // topology in the same order, so it reaches a loop no deeper
            // than the one just found and yields a concrete trace
            visited = Visited(0, 1);
            Visited fresh(cfg.max_states, mask_bits);
            Verdict v2;
            bfs_one(cfg, topo, v2, fresh, dp, dom, true);
            if (v2.kind == Verdict::Counterexample) {
                v.cycle = v2.cycle;
                v.cycle_dest = v2.cycle_dest;
                v.trace = std::move(v2.trace);
                v.initial_topology = v2.initial_topology;
            }
        }
        return v;
    }

    // queue overflow drops a message along that path; the truncation is part
    // of the bound, so exhausting the frontier still certifies it loop-free
    v.kind = Verdict::LoopFree;
    return v;
}

}  // namespace aodv
