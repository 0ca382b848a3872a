#pragma once

#include "tsilab/errors.hpp"

#include <cstdint>
#include <cstdlib>
#include <string>

namespace tsilab {

/// Work budgets shared by the recursive engines. Env overrides:
/// TSILAB_BUDGET_NODES, TSILAB_BUDGET_INDEX.
struct Budget {
    std::uint64_t node_cap = 200'000'000;
    std::int64_t index_bound = 1'000'000;

    static Budget from_env() {
        Budget b;
        if (const char* s = std::getenv("TSILAB_BUDGET_NODES")) b.node_cap = std::strtoull(s, nullptr, 10);
        if (const char* s = std::getenv("TSILAB_BUDGET_INDEX")) b.index_bound = std::strtoll(s, nullptr, 10);
        return b;
    }
};

/// Per-run counter against a Budget.
class BudgetGauge {
public:
    explicit BudgetGauge(Budget b = Budget::from_env()) : budget_(b) {}

    void tick(std::uint64_t n = 1) {
        used_ += n;
        if (used_ > budget_.node_cap)
            throw resource_error("nodes", used_, "node budget exhausted (" + std::to_string(budget_.node_cap) +
                                                     "); raise TSILAB_BUDGET_NODES or --budget-nodes");
    }

    void need_index(std::int64_t idx) const {
        if (idx > budget_.index_bound)
            throw resource_error("index", static_cast<std::uint64_t>(idx),
                                 "construction needs basis index " + std::to_string(idx) + " beyond the index bound " +
                                     std::to_string(budget_.index_bound));
    }

    std::uint64_t used() const { return used_; }
    const Budget& limits() const { return budget_; }

private:
    Budget budget_;
    std::uint64_t used_ = 0;
};

} // namespace tsilab
