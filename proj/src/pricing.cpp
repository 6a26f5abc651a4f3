#include "delaybs/pricing.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "delaybs/errors.hpp"
#include "delaybs/paths.hpp"
#include "delaybs/quadrature.hpp"

namespace dbs {

std::string_view method_name(Method m) noexcept {
    switch (m) {
        case Method::Closed: return "closed";
        case Method::Semi: return "semi";
        case Method::Mc: return "mc";
        case Method::Classical: return "classical";
        case Method::Importance: return "importance";
    }
    return "?";
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

void check_state(const VariableDelayMarket& market, const MarketState& state) {
    if (!(state.s_t > 0.0) || !(state.s_block > 0.0)) throw ContractError("market state prices must be positive");
    if (!(state.t >= 0.0) || state.t > market.T * (1.0 + kBoundarySnap)) {
        throw ContractError("valuation time must lie in [0, T]");
    }
}

// At a block boundary the frozen price is the current price.
double frozen_price(const VariableDelayMarket& market, const MarketState& state) {
    return on_block_boundary(state.t, market.h) ? state.s_t : state.s_block;
}

bool at_expiry(const VariableDelayMarket& market, double t) { return t >= market.T * (1.0 - kBoundarySnap); }

PricingResult call_to_put(PricingResult call, const VariableDelayMarket& market, const MarketState& state,
                          const OptionSpec& option) {
    call.value = put_price(call.value, market, state, option);
    return call;
}

OptionSpec as_call(OptionSpec option) {
    option.kind = OptionKind::Call;
    return option;
}

}  // namespace

Betas beta_pm(const VariableDelayMarket& market, const OptionSpec& option, const MarketState& state) {
    check_state(market, state);
    const double t_star = market.t_star();
    if (state.t < t_star * (1.0 - kBoundarySnap)) {
        throw ContractError("closed form needs t >= t* = " + std::to_string(t_star) + "; use the semi-analytic pricer");
    }
    if (at_expiry(market, state.t)) throw DomainError("beta_pm: zero remaining variance at expiry");

    const double s_block = frozen_price(market, state);
    const double v = variance_integral(market, s_block, state.t, market.T);
    const double r = market.rate_integral(state.t, market.T);
    const double sd = std::sqrt(v);
    const double log_moneyness = std::log(state.s_t / option.K);
    return {(log_moneyness + r + 0.5 * v) / sd, (log_moneyness + r - 0.5 * v) / sd, sd};
}

PricingResult price_closed(const VariableDelayMarket& market, const OptionSpec& option, const MarketState& state) {
    PricingResult out;
    out.method = Method::Closed;
    check_state(market, state);
    if (at_expiry(market, state.t)) {
        out.value = option.payoff(state.s_t);
        return out;
    }
    if (option.kind == OptionKind::Put) {
        return call_to_put(price_closed(market, as_call(option), state), market, state, option);
    }
    const auto beta = beta_pm(market, option, state);
    const double disc = market.discount(state.t, market.T);
    out.value = state.s_t * norm_cdf(beta.plus) - option.K * norm_cdf(beta.minus) * disc;
    return out;
}

double h_value(double x, double m, double v, double K, double R) {
    if (!(v > 0.0)) throw DomainError("h_value: variance must be positive");
    if (!(x > 0.0)) throw DomainError("h_value: x must be positive");
    const double sd = std::sqrt(v);
    const double base = std::log(x / K) + R + m;
    const double alpha1 = (base + v) / sd;
    const double alpha2 = base / sd;
    return x * std::exp(m + 0.5 * v) * norm_cdf(alpha1) - K * norm_cdf(alpha2) * std::exp(-R);
}

PricingResult price_semi(const VariableDelayMarket& market, const OptionSpec& option, const MarketState& state,
                         const McControls& controls) {
    check_state(market, state);
    if (option.kind == OptionKind::Put) {
        return call_to_put(price_semi(market, as_call(option), state, controls), market, state, option);
    }
    const double t_star = market.t_star();
    if (state.t > t_star * (1.0 + kBoundarySnap)) {
        throw ContractError("semi-analytic pricer needs t <= t* = " + std::to_string(t_star) +
                            "; use the closed form");
    }
    const double r_total = market.rate_integral(0.0, market.T);
    const double r_star = market.rate_integral(0.0, t_star);
    const double growth = std::exp(market.rate_integral(0.0, state.t));

    auto kernel = [&](double s_star) {
        const double v = variance_integral(market, s_star, t_star, market.T);
        return h_value(s_star * std::exp(-r_star), -0.5 * v, v, option.K, r_total);
    };

    PricingResult out;
    out.method = Method::Semi;
    if (state.t >= t_star * (1.0 - kBoundarySnap)) {
        out.value = growth * kernel(state.s_t);
        return out;
    }

    const ExactState start{state.t, state.s_t, frozen_price(market, state), 0};
    const auto stats = reduce_paths<1>(controls.n_paths, controls.workers, [&](std::uint64_t id) {
        const BrownianSpec spec{controls.seed, id};
        ExactState st = start;
        advance_exact(market, Measure::Q, spec, st, t_star);
        return std::array<double, 1>{kernel(st.s)};
    });
    out.value = growth * stats[0].mean;
    out.std_error = growth * stats[0].std_error();
    out.n_paths = stats[0].n;
    return out;
}

PricingResult price_mc(const VariableDelayMarket& market, const OptionSpec& option, const MarketState& state,
                       const McControls& controls) {
    check_state(market, state);
    PricingResult out;
    out.method = Method::Mc;
    if (at_expiry(market, state.t)) {
        out.value = option.payoff(state.s_t);
        return out;
    }
    const double disc = market.discount(state.t, market.T);
    const ExactState start{state.t, state.s_t, frozen_price(market, state), 0};
    const auto stats = reduce_paths<1>(controls.n_paths, controls.workers, [&](std::uint64_t id) {
        const BrownianSpec spec{controls.seed, id};
        ExactState st = start;
        advance_exact(market, Measure::Q, spec, st, market.T);
        return std::array<double, 1>{option.payoff(st.s)};
    });
    out.value = disc * stats[0].mean;
    out.std_error = disc * stats[0].std_error();
    out.n_paths = stats[0].n;
    return out;
}

double price_classical(double s, double K, double R, double v) {
    if (!(v > 0.0)) throw DomainError("price_classical: total variance must be positive");
    const double stddev = std::sqrt(v);
    const double df = std::exp(-R);
    const double d1 = (std::log(s / K) + R) / stddev + 0.5 * stddev;
    const double d2 = d1 - stddev;
    return s * norm_cdf(d1) - K * df * norm_cdf(d2);
}

double put_price(double call_value, const VariableDelayMarket& market, const MarketState& state,
                 const OptionSpec& option) {
    return call_value - state.s_t + option.K * market.discount(state.t, market.T);
}

}  // namespace dbs
