#include "aodv/network.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>

namespace aodv {

int Topology::pair_bit(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    // pairs (0,1),(0,2),...,(0,n-1),(1,2),... — triangular numbering
    return b * (b - 1) / 2 + a;
}

bool Topology::linked(NodeId a, NodeId b) const {
    if (a == b) return false;
    return (mask >> pair_bit(a, b)) & 1u;
}

void Topology::set_link(NodeId a, NodeId b, bool up) {
    uint32_t bit = 1u << pair_bit(a, b);
    if (up) mask |= bit;
    else mask &= ~bit;
}

void Topology::toggle(NodeId a, NodeId b) { mask ^= 1u << pair_bit(a, b); }

std::vector<NodeId> Topology::neighbors(NodeId a) const {
    std::vector<NodeId> out;
    for (NodeId b = 0; b < n; ++b)
        if (linked(a, b)) out.push_back(b);
    return out;
}

std::vector<std::pair<NodeId, NodeId>> Topology::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b)
            if (linked(a, b)) out.emplace_back(a, b);
    return out;
}

Topology topology_from_edges(int n, const std::vector<std::string>& edges) {
    Topology t;
    t.n = n;
    for (const auto& s : edges) {
        auto dash = s.find('-');
        if (dash == std::string::npos)
            throw std::runtime_error("bad edge '" + s + "': expected na-nb");
        auto a = parse_node_name(s.substr(0, dash));
        auto b = parse_node_name(s.substr(dash + 1));
        if (!a || !b || *a >= n || *b >= n || *a == *b)
            throw std::runtime_error("bad edge '" + s + "'");
        t.set_link(*a, *b, true);
    }
    return t;
}

std::vector<std::string> edges_to_strings(const Topology& t) {
    std::vector<std::string> out;
    for (auto [a, b] : t.edges())
        out.push_back(node_name(a) + "-" + node_name(b));
    return out;
}

std::string topology_to_dot(const Topology& t) {
    std::ostringstream os;
    os << "graph topology {\n";
    for (NodeId a = 0; a < t.n; ++a)
        os << "  " << node_name(a) << ";\n";
    for (auto [a, b] : t.edges())
        os << "  " << node_name(a) << " -- " << node_name(b) << ";\n";
    os << "}\n";
    return os.str();
}

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    int n;

    void skip_ws() {
        while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    void expect(char c) {
        if (!eat(c))
            throw ConstraintParseError(std::string("expected '") + c + "'", pos);
    }
    bool peek_word(const char* w) {
        skip_ws();
        return s.compare(pos, strlen(w), w) == 0;
    }
    void expect_word(const char* w) {
        if (!peek_word(w))
            throw ConstraintParseError(std::string("expected '") + w + "'", pos);
        pos += strlen(w);
    }

    NodeId node() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && (isalnum(static_cast<unsigned char>(s[pos]))))
            ++pos;
        auto id = parse_node_name(s.substr(start, pos - start));
        if (!id) throw ConstraintParseError("expected node name", start);
        if (*id >= n)
            throw ConstraintParseError("unknown node " + s.substr(start, pos - start),
                                       start);
        return *id;
    }

    ConstraintAtom atom() {
        skip_ws();
        ConstraintAtom at;
        if (eat('!')) at.connected = false;
        expect_word("con");
        expect('(');
        at.a = node();
        expect(',');
        at.b = node();
        expect(')');
        if (at.a == at.b)
            throw ConstraintParseError("self-link constraint", pos);
        if (at.a > at.b) std::swap(at.a, at.b);
        return at;
    }
};

}  // namespace

ConstraintSet parse_constraints(const std::string& text, int n) {
    ConstraintSet cs;
    Parser p{text, 0, n};
    p.skip_ws();
    if (p.pos == text.size()) return cs;
    if (p.peek_word("and")) {
        p.expect_word("and");
        p.expect('(');
        cs.atoms.push_back(p.atom());
        while (p.eat(',')) cs.atoms.push_back(p.atom());
        p.expect(')');
    } else {
        cs.atoms.push_back(p.atom());
    }
    p.skip_ws();
    if (p.pos != text.size())
        throw ConstraintParseError("trailing input", p.pos);
    for (size_t i = 0; i < cs.atoms.size(); ++i)
        for (size_t j = i + 1; j < cs.atoms.size(); ++j)
            if (cs.atoms[i].a == cs.atoms[j].a && cs.atoms[i].b == cs.atoms[j].b &&
                cs.atoms[i].connected != cs.atoms[j].connected)
                throw ConstraintParseError("contradictory atoms", 0);
    return cs;
}

bool satisfies(const Topology& topo, const ConstraintSet& cs) {
    return std::all_of(cs.atoms.begin(), cs.atoms.end(), [&](const ConstraintAtom& at) {
        return topo.linked(at.a, at.b) == at.connected;
    });
}

std::vector<Topology> enumerate_topologies(int n, const ConstraintSet& cs) {
    std::vector<Topology> out;
    uint32_t limit = 1u << Topology::num_pairs(n);
    for (uint32_t m = 0; m < limit; ++m) {
        Topology t{n, m};
        if (satisfies(t, cs)) out.push_back(t);
    }
    return out;
}

}  // namespace aodv
