#pragma once

#include <cstddef>

#include "delaybs/estimator.hpp"
#include "delaybs/model.hpp"
#include "delaybs/pricing.hpp"

namespace dbs {

// Holdings of the replicating portfolio: pi_s shares and pi_xi units of the bond
// xi(t) = exp(int_0^t lambda).
//
// Before t* the strategy would need the martingale-representation integrand of the
// discounted claim, which has no closed form; only the final-block hedge is built.
struct HedgeWeights {
    double pi_s = 0.0;
    double pi_xi = 0.0;
    double t = 0.0;
};

// Final-block hedge, t* <= t < T. Puts use the parity-shifted weights.
HedgeWeights hedge_weights(const VariableDelayMarket& market, const OptionSpec& option, const MarketState& state);

// Bond numeraire xi(t).
double bond_value(const VariableDelayMarket& market, double t);

struct ReplicationReport {
    std::size_t n_rebalance = 0;
    double mean_error = 0.0;
    double rmse = 0.0;
    std::size_t n_paths = 0;
    // Largest |pi_xi xi + pi_s S - V| seen at any rebalance time on any path.
    double max_identity_error = 0.0;
};

// Discrete self-financing replication over n_rebalance equal steps of [t*, T].
// Paths follow the real-world dynamics (P) from (0, s0).
ReplicationReport replicate(const VariableDelayMarket& market, const OptionSpec& option, std::size_t n_rebalance,
                            const McControls& controls);

}  // namespace dbs
