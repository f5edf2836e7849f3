#include "pmsim/market.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace pmsim {

OrderBook collect_orders(const Population& agents, const MarketState& market,
                         std::optional<double> max_order_volume) {
    OrderBook book;
    book.orders.reserve(agents.traits.size());
    for (int i = 0; i < agents.size(); ++i) {
        const AgentState& state = agents.states[static_cast<std::size_t>(i)];
        const AgentTraits& traits = agents.traits[static_cast<std::size_t>(i)];
        double x = optimal_order(state.budget, state.holdings, state.valuation, market.price,
                                 traits.risk_aversion);
        if (max_order_volume)
            x = std::clamp(x, -*max_order_volume, *max_order_volume);
        if (x != 0.0) {
            book.orders.push_back(Order{i, x});
            book.net_demand += x;
            book.gross_volume += std::abs(x);
        }
    }
    return book;
}

std::vector<Fill> match_orders(const OrderBook& book, double price, RandomStream& rng) {
    std::vector<Order> shuffled = book.orders;
    rng.shuffle(shuffled);

    std::vector<Fill> fills;
    std::deque<Order> waiting_buys;
    std::deque<Order> waiting_sells;
    for (const Order& order : shuffled) {
        if (order.volume > 0.0) {
            double remaining = order.volume;
            while (remaining > 0.0 && !waiting_sells.empty()) {
                Order& ask = waiting_sells.front();
                const double q = std::min(remaining, -ask.volume);
                fills.push_back(Fill{order.agent_id, ask.agent_id, q, price});
                remaining -= q;
                ask.volume += q;
                if (ask.volume == 0.0) waiting_sells.pop_front();
            }
            if (remaining > 0.0) waiting_buys.push_back(Order{order.agent_id, remaining});
        } else {
            double remaining = -order.volume;
            while (remaining > 0.0 && !waiting_buys.empty()) {
                Order& bid = waiting_buys.front();
                const double q = std::min(remaining, bid.volume);
                fills.push_back(Fill{bid.agent_id, order.agent_id, q, price});
                remaining -= q;
                bid.volume -= q;
                if (bid.volume == 0.0) waiting_buys.pop_front();
            }
            if (remaining > 0.0) waiting_sells.push_back(Order{order.agent_id, -remaining});
        }
    }
    return fills;
}

void settle_fills(Population& agents, const std::vector<Fill>& fills, double price) {
    for (const Fill& fill : fills) {
        AgentState& buyer = agents.states[static_cast<std::size_t>(fill.buyer_id)];
        AgentState& seller = agents.states[static_cast<std::size_t>(fill.seller_id)];
        const double cash = fill.quantity * price;
        buyer.budget -= cash;
        buyer.holdings += fill.quantity;
        seller.budget += cash;
        seller.holdings -= fill.quantity;
        if (buyer.budget < -1e-9)
            throw std::logic_error("settle_fills: buyer budget went negative (agent " +
                                   std::to_string(fill.buyer_id) + ")");
    }
}

MarketState update_price(const MarketState& market, double net_demand, double gross_volume) {
    MarketState next = market;
    if (gross_volume > 0.0) {
        const double moved = market.price + market.lambda * net_demand / gross_volume;
        next.price = std::clamp(moved, kPriceMargin, 1.0 - kPriceMargin);
    }
    return next;
}

}  // namespace pmsim
