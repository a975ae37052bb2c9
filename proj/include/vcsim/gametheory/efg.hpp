#pragma once

#include "vcsim/gametheory/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vcsim::gametheory {

// Extensive-form game over an explicit history tree. Histories are
// prefix-closed by construction; information sets partition one player's
// decision nodes, with identical action sets inside a set.
class efg {
  public:
    using node_id = std::size_t;
    using player_id = std::size_t;
    using iset_id = std::size_t;

    explicit efg(std::vector<std::string> players) : players_(std::move(players)) {
        nodes_.push_back(node{});  // root
    }

    // Turns a node into a decision node. Returns the new children in action
    // order. Nodes sharing an information set must be declared via
    // merge_information_sets afterwards; by default each node is its own set.
    std::vector<node_id> add_decision(node_id at, player_id p,
                                      const std::vector<std::string>& actions);
    void set_payoff(node_id leaf, std::vector<rat> payoff);
    // Joins the information sets of the given same-player nodes.
    void merge_information_sets(const std::vector<node_id>& nodes);

    std::size_t num_players() const { return players_.size(); }
    const std::string& player_name(player_id p) const { return players_[p]; }
    node_id root() const { return 0; }
    bool is_terminal(node_id n) const { return nodes_[n].children.empty(); }
    player_id player_at(node_id n) const { return nodes_[n].player; }
    const std::vector<std::string>& actions_at(node_id n) const { return nodes_[n].actions; }
    const std::vector<node_id>& children(node_id n) const { return nodes_[n].children; }
    const std::vector<rat>& payoff(node_id n) const { return nodes_[n].payoff; }
    iset_id info_set(node_id n) const { return nodes_[n].iset; }
    std::size_t node_count() const { return nodes_.size(); }

    // All

    // decision nodes grouped by information set.
    std::map<iset_id, std::vector<node_id>> information_sets() const;
    bool perfect_information() const;

    // Structural sanity: prefix closure is inherent to the arena; checks that
    // every non-terminal node has actions, payoff vectors sit on leaves with
    // the right arity, and info-set members agree on player and actions.
    bool well_formed(std::string* why = nullptr) const;

    // A subgame root's subtree must contain every information set it touches.
    bool is_subgame_root(node_id n) const;
    std::vector<node_id> subgame_roots() const;

    std::string dump() const;

  private:
    struct node {
        player_id player = 0;
        std::vector<std::string> actions;
        std::vector<node_id> children;
        std::vector<rat> payoff;
        iset_id iset = 0;
        node_id parent = 0;
    };

    void collect_subtree(node_id n, std::set<node_id>& out) const;

    std::vector<std::string> players_;
    std::vector<node> nodes_;
};

// A pure joint strategy: one action index per information set.
using joint_strategy = std::map<efg::iset_id, std::size_t>;

// Measurability holds by construction (strategies are keyed by information
// set); this re-checks a strategy covers every set with a legal action.
bool strategy_complete(const efg& g, const joint_strategy& s);

std::vector<rat> play(const efg& g, const joint_strategy& s);

std::string strategy_str(const efg& g, const joint_strategy& s);

}  // namespace vcsim::gametheory
