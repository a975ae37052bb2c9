#include "vcsim/gametheory/efg.hpp"

#include <algorithm>
#include <sstream>

namespace vcsim::gametheory {

std::vector<efg::node_id> efg::add_decision(node_id at, player_id p,
                                            const std::vector<std::string>& actions) {
    if (!nodes_[at].children.empty()) throw std::logic_error("node already expanded");
    if (actions.empty()) throw std::invalid_argument("decision node needs actions");
    nodes_[at].player = p;
    nodes_[at].actions = actions;
    nodes_[at].iset = at;  // singleton by default
    std::vector<node_id> kids;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        node child;
        child.parent = at;
        nodes_.push_back(child);
        kids.push_back(nodes_.size() - 1);
    }
    nodes_[at].children = kids;
    return kids;
}

void efg::set_payoff(node_id leaf, std::vector<rat> payoff) {
    if (!nodes_[leaf].children.empty()) throw std::logic_error("payoff on inner node");
    if (payoff.size() != players_.size()) throw std::invalid_argument("payoff arity");
    nodes_[leaf].payoff = std::move(payoff);
}

void efg::merge_information_sets(const std::vector<node_id>& nodes) {
    if (nodes.empty()) return;
    const iset_id target = nodes_[nodes.front()].iset;
    for (node_id n : nodes) nodes_[n].iset = target;
}

std::map<efg::iset_id, std::vector<efg::node_id>> efg::information_sets() const {
    std::map<iset_id, std::vector<node_id>> out;
    for (node_id n = 0; n < nodes_.size(); ++n)
        if (!nodes_[n].children.empty()) out[nodes_[n].iset].push_back(n);
    return out;
}

bool efg::perfect_information() const {
    for (const auto& [_, members] : information_sets())
        if (members.size() > 1) return false;
    return true;
}

bool efg::well_formed(std::string* why) const {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    for (node_id n = 0; n < nodes_.size(); ++n) {
        const auto& nd = nodes_[n];
        if (nd.children.empty()) {
            if (nd.payoff.size() != players_.size())
                return fail("leaf " + std::to_string(n) + " lacks a payoff vector");
        } else {
            if (nd.actions.size() != nd.children.size())
                return fail("action/children arity mismatch");
            if (nd.player >= players_.size()) return fail("bad player index");
        }
    }
    for (const auto& [_, members] : information_sets()) {
        for (node_id n : members) {
            if (nodes_[n].player != nodes_[members.front()].player)
                return fail("information set spans players");
            if (nodes_[n].actions != nodes_[members.front()].actions)
                return fail("information set members have different action sets");
        }
    }
    return true;
}

void efg::collect_subtree(node_id n, std::set<node_id>& out) const {
    out.insert(n);
    for (node_id c : nodes_[n].children) collect_subtree(c, out);
}

bool efg::is_subgame_root(node_id n) const {
    std::set<node_id> inside;
    collect_subtree(n, inside);
    const auto sets = information_sets();
    for (const auto& [_, members] : sets) {
        std::size_t in = 0;
        for (node_id m : members)
            if (inside.count(m)) ++in;
        if (in != 0 && in != members.size()) return false;
    }
    return true;
}

std::vector<efg::node_id> efg::subgame_roots() const {
    std::vector<node_id> out;
    for (node_id n = 0; n < nodes_.size(); ++n)
        if (!nodes_[n].children.empty() && is_subgame_root(n)) out.push_back(n);
    return out;
}

bool strategy_complete(const efg& g, const joint_strategy& s) {
    for (const auto& [iset, members] : g.information_sets()) {
        auto it = s.find(iset);
        if (it == s.end()) return false;
        if (it->second >= g.actions_at(members.front()).size()) return false;
    }
    return true;
}

std::vector<rat> play(const efg& g, const joint_strategy& s) {
    efg::node_id n = g.root();
    while (!g.is_terminal(n)) n = g.children(n)[s.at(g.info_set(n))];
    return g.payoff(n);
}

std::string strategy_str(const efg& g, const joint_strategy& s) {
    std::ostringstream os;
    for (const auto& [iset, members] : g.information_sets()) {
        const auto n = members.front();
        os << g.player_name(g.player_at(n)) << "@" << iset << "="
           << g.actions_at(n)[s.at(iset)] << " ";
    }
    return os.str();
}

std::string efg::dump() const {
    std::ostringstream os;
    struct frame {
        node_id n;
        int depth;
        std::string via;
    };
    std::vector<frame> stack{{0, 0, ""}};
    while (!stack.empty()) {
        auto [n, depth, via] = stack.back();
        stack.pop_back();
        for (int i = 0; i < depth; ++i) os << "  ";
        if (!via.empty()) os << via << " -> ";
        if (is_terminal(n)) {
            os << "(";
            for (std::size_t i = 0; i < nodes_[n].payoff.size(); ++i)
                os << (i ? ", " : "") << nodes_[n].payoff[i].str();
            os << ")\n";
        } else {
            os << players_[nodes_[n].player] << " [iset " << nodes_[n].iset << "]\n";
            for (std::size_t i = nodes_[n].children.size(); i-- > 0;)
                stack.push_back(
                    {nodes_[n].children[i], depth + 1, nodes_[n].actions[i]});
        }
    }
    return os.str();
}

}  // namespace vcsim::gametheory
