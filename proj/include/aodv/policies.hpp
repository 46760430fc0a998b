#ifndef AODV_POLICIES_HPP
#define AODV_POLICIES_HPP

#include <optional>
#include <string>

#include "aodv/domain.hpp"

namespace aodv {

enum class PolicyId : uint8_t { V11, V13, V16, Solution1, Solution2 };

std::optional<PolicyId> parse_policy(const std::string& s);  // v11|v13|v16|sol1|sol2
const char* policy_name(PolicyId p);

struct PolicyConfig {
    PolicyId policy = PolicyId::V11;
    bool fig3_literal = false;       // store the carried dsn field instead of
                                     // the advertised seq in solution 1
    bool sol2_seq_priority = true;   // test the greater-seq branch before the
                                     // hop-count branch in solution 2; the
                                     // published listing's order (off) lets an
                                     // unconfirmed fresher-but-longer route
                                     // ride the hop-count branch and admits a
                                     // routing loop on a 4-node diamond
};

struct UpdateOutcome {
    RoutingTable table;
    bool process = false;  // engine continues (reply/forward) iff true
};

// The five routing-table update procedures. All are pure; process=false
// implies the returned table equals the input bit for bit.
UpdateOutcome update_v11(const RoutingTable& table, const IncomingRoute& in);
UpdateOutcome update_v13(const RoutingTable& table, const IncomingRoute& in);
UpdateOutcome update_v16(const RoutingTable& table, const IncomingRoute& in);
UpdateOutcome update_solution1(const RoutingTable& table, const IncomingRoute& in,
                               const PolicyConfig& cfg = {});
UpdateOutcome update_solution2(const RoutingTable& table, const IncomingRoute& in,
                               const PolicyConfig& cfg = {});

UpdateOutcome apply_update(const RoutingTable& table, const IncomingRoute& in,
                           const PolicyConfig& cfg);

// Neighbor nb becomes Confirmed; its Unconfirmed entries turn Valid, and any
// destination that gained a Valid entry drops its other entries (at most one
// valid route per destination, under every policy).
RoutingTable confirm_neighbor(const RoutingTable& table, NodeId nb);

RoutingTable remove_next_hop(const RoutingTable& table, NodeId dest, NodeId nb);

// Flips the (dest, nb) entry to Invalid; no-op if absent.
RoutingTable invalidate_route(const RoutingTable& table, NodeId dest, NodeId nb);

}  // namespace aodv

#endif
