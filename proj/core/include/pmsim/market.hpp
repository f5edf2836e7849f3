#pragma once

#include <optional>
#include <vector>

#include "pmsim/agents.hpp"
#include "pmsim/rng.hpp"

namespace pmsim {

// Prices are clipped to [kPriceMargin, 1 - kPriceMargin] so divisions by
// m(1-m) stay well conditioned.
inline constexpr double kPriceMargin = 1e-4;

// One submitted order; positive volume buys, negative sells. Zero-volume
// orders are never appended.
struct Order {
    int agent_id = -1;
    double volume = 0.0;
};

// All orders submitted in one step, plus the demand aggregates computed over
// the submitted (not matched) volumes.
struct OrderBook {
    std::vector<Order> orders;
    double net_demand = 0.0;    // signed sum of volumes
    double gross_volume = 0.0;  // sum of absolute volumes
};

// A matched trade; every fill in a step executes at the same price.
struct Fill {
    int buyer_id = -1;
    int seller_id = -1;
    double quantity = 0.0;  // positive contracts
    double price = 0.0;
};

struct MarketState {
    double price = 0.5;    // in (0, 1)
    double lambda = 0.05;  // maximum per-step price move
};

// One order per agent whose optimal volume is nonzero, with volumes clamped
// to max_order_volume when a cap is configured.
OrderBook collect_orders(const Population& agents, const MarketState& market,
                         std::optional<double> max_order_volume = std::nullopt);

// Shuffles the book once, then matches each arriving order against queued
// opposite interest with partial fills. Unmatched remainder expires. Every
// fill is stamped with the single execution price.
std::vector<Fill> match_orders(const OrderBook& book, double price, RandomStream& rng);

// Transfers cash and contracts per fill. Total cash and total holdings are
// invariant. Throws std::logic_error if any budget would go negative.
void settle_fills(Population& agents, const std::vector<Fill>& fills, double price);

// m' = clip(m + lambda * D / K); price frozen when the book is empty.
MarketState update_price(const MarketState& market, double net_demand, double gross_volume);

}  // namespace pmsim
