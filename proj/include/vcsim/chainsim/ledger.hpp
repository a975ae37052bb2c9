#pragma once

#include "vcsim/chainsim/contract.hpp"

namespace vcsim::chainsim {

struct applied_tx {
    tx transaction;
    apply_status status = apply_status::applied;
    std::string detail;
};

struct block {
    std::uint64_t height = 0;
    std::vector<applied_tx> txs;
};

// Events the chain surfaces to observers after each block.
struct settle_event {
    contract_id contract = 0;
    bool penalty = false;
    bool fraud_overflow = false;
    std::optional<core::update_announcement> applied_ws;
};

struct block_result {
    block mined;
    std::vector<cross_check_body> emissions;   // routed back through the network
    std::vector<settle_event> settlements;
};

// The blockchain: persistence is assumed, so blocks are final and heights
// consecutive. Censorship is modeled upstream as delivery delay of the
// transaction to the chain, never as a drop.
class ledger {
  public:
    void credit_external(const actor_id& who, coins amount);
    coins external_balance(const actor_id& who) const;
    const std::map<actor_id, coins>& external_balances() const { return external_; }

    // Applies all pending transactions in order as one block.
    block_result mine_block(std::vector<tx> txs);

    const std::vector<block>& blocks() const { return blocks_; }
    const std::map<contract_id, contract>& contracts() const { return contracts_; }
    contract* find_contract(contract_id id);
    const contract* find_contract(contract_id id) const;

    // Exact global conservation: external coins plus contract escrows.
    coins total_coins() const;

    void set_disable_crosscheck(bool v) { disable_crosscheck_ = v; }

    std::string dump() const;

  private:
    applied_tx apply(tx t, block_result& out);
    bool debit_external(const actor_id& who, coins amount);

    std::map<actor_id, coins> external_;
    std::map<contract_id, contract> contracts_;
    std::vector<block> blocks_;
    bool disable_crosscheck_ = false;
};

}  // namespace vcsim::chainsim
