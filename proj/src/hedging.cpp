#include "delaybs/hedging.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "delaybs/errors.hpp"
#include "delaybs/paths.hpp"

namespace dbs {

double bond_value(const VariableDelayMarket& market, double t) { return std::exp(market.rate_integral(0.0, t)); }

HedgeWeights hedge_weights(const VariableDelayMarket& market, const OptionSpec& option, const MarketState& state) {
    if (state.t < market.t_star() * (1.0 - kBoundarySnap)) {
        throw ContractError("hedge_weights: explicit hedge only exists for t >= t*");
    }
    const auto beta = beta_pm(market, option, state);
    const double bond_at_T = std::exp(-market.rate_integral(0.0, market.T));
    HedgeWeights w;
    w.t = state.t;
    w.pi_s = norm_cdf(beta.plus);
    w.pi_xi = -option.K * norm_cdf(beta.minus) * bond_at_T;
    if (option.kind == OptionKind::Put) {
        w.pi_s -= 1.0;
        w.pi_xi += option.K * bond_at_T;
    }
    return w;
}

ReplicationReport replicate(const VariableDelayMarket& market, const OptionSpec& option, std::size_t n_rebalance,
                            const McControls& controls) {
    if (n_rebalance == 0) throw ContractError("replicate: need at least one rebalance step");
    const double t_star = market.t_star();
    const double span = market.T - t_star;

    std::vector<double> grid(n_rebalance + 1);
    std::vector<double> bond(n_rebalance + 1);
    std::vector<double> accrual(n_rebalance);  // xi(t_{j+1}) / xi(t_j)
    for (std::size_t j = 0; j <= n_rebalance; ++j) {
        grid[j] = j == n_rebalance ? market.T : t_star + span * static_cast<double>(j) / static_cast<double>(n_rebalance);
        bond[j] = bond_value(market, grid[j]);
    }
    for (std::size_t j = 0; j < n_rebalance; ++j) accrual[j] = 1.0 / market.discount(grid[j], grid[j + 1]);

    const auto stats = reduce_paths<2>(controls.n_paths, controls.workers, [&](std::uint64_t id) {
        const BrownianSpec spec{controls.seed, id};
        ExactState st{0.0, market.s0, market.s0, 0};
        advance_exact(market, Measure::P, spec, st, t_star);
        const double s_star = st.s;

        MarketState state{t_star, s_star, s_star};
        double wealth = price_closed(market, option, state).value;
        double identity_gap = 0.0;
        for (std::size_t j = 0; j < n_rebalance; ++j) {
            state = {grid[j], st.s, s_star};
            const auto w = hedge_weights(market, option, state);
            const double v = price_closed(market, option, state).value;
            identity_gap = std::max(identity_gap, std::abs(w.pi_xi * bond[j] + w.pi_s * st.s - v));

            const double cash = wealth - w.pi_s * st.s;
            advance_exact(market, Measure::P, spec, st, grid[j + 1]);
            wealth = w.pi_s * st.s + cash * accrual[j];
        }
        return std::array<double, 2>{wealth - option.payoff(st.s), identity_gap};
    });

    ReplicationReport r;
    r.n_rebalance = n_rebalance;
    r.n_paths = stats[0].n;
    r.mean_error = stats[0].mean;
    r.rmse = stats[0].rms();
    r.max_identity_error = stats[1].max;
    return r;
}

}  // namespace dbs
