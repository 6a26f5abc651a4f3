#pragma once

#include <cstdint>
#include <vector>

#include "delaybs/estimator.hpp"
#include "delaybs/model.hpp"
#include "delaybs/rng.hpp"

namespace dbs {

// theta(u) = (f(u, s_block) - lambda(u)) / g(u, s_block), frozen at the block-start price.
double market_price_of_risk(const VariableDelayMarket& market, double u, double s_block);

// Per-interval record of the Gaussian pair (I1, I2) = (int g dW, int theta dW).
struct BlockRecord {
    double v = 0.0;         // Var I1 = int g^2
    double c = 0.0;         // Cov(I1, I2) = int g theta = int (f - lambda)
    double theta_sq = 0.0;  // Var I2 = int theta^2
    double i2 = 0.0;        // sampled I2
};

struct JointIncrement {
    double log_price = 0.0;    // int f - v/2 + I1
    double log_density = 0.0;  // -I2 - theta_sq/2
    BlockRecord record;
};

// Samples the price and density log-increments over [a, b] inside one block under P.
// Draw `index` of `spec` supplies both normals (lanes 0 and 1).
JointIncrement joint_block_step(const VariableDelayMarket& market, double s_k, double a, double b,
                                const BrownianSpec& spec, std::uint32_t index);

// Running log rho_t of one P-path together with the records that produced it.
class GirsanovAccumulator {
public:
    void add(const JointIncrement& inc);

    double log_rho() const noexcept { return log_rho_; }
    double rho() const;
    const std::vector<BlockRecord>& records() const noexcept { return records_; }

    // -sum I2 - sum theta_sq / 2, summed in two separate passes over the records.
    double recompute_log_rho() const;

private:
    double log_rho_ = 0.0;
    std::vector<BlockRecord> records_;
};

// Terminal price and density of one full P-path from (0, s0).
struct WeightedTerminal {
    double s_T = 0.0;
    double log_rho = 0.0;
};

WeightedTerminal simulate_weighted(const VariableDelayMarket& market, const BrownianSpec& spec,
                                   GirsanovAccumulator* accumulator = nullptr);

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

// Sample mean of rho_T over P-paths; 1 up to Monte Carlo error.
MeanEstimate density_mean_check(const VariableDelayMarket& market, const McControls& controls);

// Sample mean of the discounted terminal price over exact Q-paths; s0 up to Monte Carlo error.
MeanEstimate martingale_mean_check(const VariableDelayMarket& market, const McControls& controls);

// discount(0, T) * E_P[rho_T X] from P-paths with the density carried alongside.
PricingResult importance_price(const VariableDelayMarket& market, const OptionSpec& option,
                               const McControls& controls);

}  // namespace dbs
