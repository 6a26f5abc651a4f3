#pragma once

#include "delaybs/estimator.hpp"
#include "delaybs/model.hpp"

namespace dbs {

// Standard normal distribution function.
double norm_cdf(double x);

// F_t-measurable data consumed by the pricers: valuation time, current price and
// the price at the start of the current delay block.
struct MarketState {
    double t = 0.0;
    double s_t = 1.0;
    double s_block = 1.0;

    static MarketState initial(const VariableDelayMarket& market) { return {0.0, market.s0, market.s0}; }
};

struct Betas {
    double plus = 0.0;
    double minus = 0.0;
    double sqrt_v = 0.0;  // sqrt(int_t^T g^2); plus - minus == sqrt_v
};

// Requires t* <= t < T, where t* = market.t_star().
Betas beta_pm(const VariableDelayMarket& market, const OptionSpec& option, const MarketState& state);

// Delayed Black-Scholes value in the final block. Puts are priced through parity.
PricingResult price_closed(const VariableDelayMarket& market, const OptionSpec& option, const MarketState& state);

// H(x, m, v) = x e^{m + v/2} Phi(alpha1) - K Phi(alpha2) e^{-R}, with R = int_0^T lambda.
double h_value(double x, double m, double v, double K, double R);

// Conditional-expectation pricer for t <= t*: simulates S(t*) under Q and averages H.
PricingResult price_semi(const VariableDelayMarket& market, const OptionSpec& option, const MarketState& state,
                         const McControls& controls);

// Direct payoff average over Q-paths from the state to T.
PricingResult price_mc(const VariableDelayMarket& market, const OptionSpec& option, const MarketState& state,
                       const McControls& controls);

// Textbook Black-Scholes call with aggregate discount e^{-R} and total variance v.
double price_classical(double s, double K, double R, double v);

// put = call - s_t + K * discount(t, T)
double put_price(double call_value, const VariableDelayMarket& market, const MarketState& state,
                 const OptionSpec& option);

}  // namespace dbs
