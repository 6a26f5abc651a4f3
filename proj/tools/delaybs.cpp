// delaybs: price, simulate and hedge European options on the variable-delay market.
//
// Exit codes: 0 success, 1 a statistical check failed, 2 usage or configuration
// error, 3 numerical failure.

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "delaybs/checks.hpp"
#include "delaybs/config.hpp"
#include "delaybs/errors.hpp"
#include "delaybs/hedging.hpp"
#include "delaybs/measure.hpp"
#include "delaybs/paths.hpp"
#include "delaybs/pricing.hpp"
#include "delaybs/quadrature.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct RunConfig {
    std::string config_path;
    std::uint64_t seed = dbs::kDefaultSeed;
    std::size_t paths = 100000;
    unsigned workers = 1;
    int quad_n = dbs::kDefaultQuadN;
};

std::string num(double x) { return fmt::format("{:.17g}", x); }

dbs::McControls controls(const RunConfig& rc) { return {rc.paths, rc.seed, rc.workers}; }

dbs::VariableDelayMarket load_market(const RunConfig& rc, bool validate = true) {
    auto market = dbs::market_from_json(dbs::load_json_file(rc.config_path));
    market.quad_n = rc.quad_n;
    if (validate) dbs::require_valid(market);
    return market;
}

dbs::FixedDelaySfde load_fixed(const RunConfig& rc) {
    const auto doc = dbs::load_json_file(rc.config_path);
    if (!dbs::has_fixed_delay_keys(doc)) throw dbs::ConfigError("config has no fixed-delay model (L, b, drift)");
    auto sfde = dbs::fixed_delay_from_json(doc);
    dbs::require_valid(sfde);
    return sfde;
}

// ---------------------------------------------------------------------------

struct PriceArgs {
    std::string method = "closed";
    std::string kind = "call";
    double strike = 0.0;
    double t = 0.0;
    std::optional<double> spot;
    std::optional<double> block_spot;
};

int cmd_price(const RunConfig& rc, const PriceArgs& args) {
    const auto market = load_market(rc);
    const dbs::OptionSpec option{args.strike > 0.0 ? args.strike : market.s0,
                                 args.kind == "put" ? dbs::OptionKind::Put : dbs::OptionKind::Call, args.t};
    dbs::require_valid(option, market.T);
    const double spot = args.spot.value_or(market.s0);
    const dbs::MarketState state{args.t, spot, args.block_spot.value_or(spot)};

    dbs::PricingResult r;
    if (args.method == "closed") {
        r = dbs::price_closed(market, option, state);
    } else if (args.method == "semi") {
        r = dbs::price_semi(market, option, state, controls(rc));
    } else if (args.method == "mc") {
        r = dbs::price_mc(market, option, state, controls(rc));
    } else if (args.method == "importance") {
        r = dbs::importance_price(market, option, controls(rc));
    } else {
        // Volatility frozen at the block price over the remaining horizon.
        const double v = dbs::variance_integral(market, state.s_block, state.t, market.T);
        const double call = dbs::price_classical(state.s_t, option.K, market.rate_integral(state.t, market.T), v);
        r.method = dbs::Method::Classical;
        r.value = option.kind == dbs::OptionKind::Put ? dbs::put_price(call, market, state, option) : call;
    }
    std::cout << "method,value,std_error,n_paths\n"
              << dbs::method_name(r.method) << ',' << num(r.value) << ',' << num(r.std_error) << ',' << r.n_paths
              << '\n';
    return kExitOk;
}

struct SimulateArgs {
    std::string scheme = "exact";
    std::string measure = "Q";
    double dt = 1.0 / 512.0;
    std::size_t grid = 0;
};

void write_path(std::ostream& out, const dbs::Path& p, std::uint64_t stream) {
    for (std::size_t i = 0; i < p.times.size(); ++i) out << num(p.times[i]) << ',' << num(p.values[i]) << ',' << stream << '\n';
}

int cmd_simulate(const RunConfig& rc, const SimulateArgs& args) {
    std::ostringstream out;
    out << "time,value,stream_id\n";
    if (args.scheme == "exact") {
        const auto market = load_market(rc);
        std::vector<double> times;
        if (args.grid > 0) {
            for (std::size_t i = 1; i <= args.grid; ++i) {
                times.push_back(market.T * static_cast<double>(i) / static_cast<double>(args.grid));
            }
        } else {
            times = dbs::block_schedule(market.T, market.h);
            times.erase(times.begin());
        }
        const auto measure = args.measure == "P" ? dbs::Measure::P : dbs::Measure::Q;
        for (std::uint64_t id = 0; id < rc.paths; ++id) {
            write_path(out, dbs::simulate_exact(market, measure, {rc.seed, id}, 0.0, market.s0, market.s0, times), id);
        }
    } else {
        const auto sfde = load_fixed(rc);
        for (std::uint64_t id = 0; id < rc.paths; ++id) {
            const dbs::BrownianSpec spec{rc.seed, id};
            write_path(out,
                       args.scheme == "em" ? dbs::simulate_em_fixed(sfde, args.dt, spec)
                                           : dbs::simulate_split_fixed(sfde, args.dt, spec),
                       id);
        }
    }
    std::cout << out.str();
    return kExitOk;
}

struct HedgeArgs {
    std::vector<std::size_t> ladder{4, 16, 64};
    double strike = 0.0;
    std::string kind = "call";
};

int cmd_hedge(const RunConfig& rc, const HedgeArgs& args) {
    const auto market = load_market(rc);
    const dbs::OptionSpec option{args.strike > 0.0 ? args.strike : market.s0,
                                 args.kind == "put" ? dbs::OptionKind::Put : dbs::OptionKind::Call, 0.0};
    std::cout << "n_rebalance,mean_error,rmse,n_paths\n";
    for (const auto n : args.ladder) {
        const auto r = dbs::replicate(market, option, n, controls(rc));
        std::cout << r.n_rebalance << ',' << num(r.mean_error) << ',' << num(r.rmse) << ',' << r.n_paths << '\n';
    }
    return kExitOk;
}

struct CheckArgs {
    double strike = 0.0;
    bool no_validate = false;
};

int cmd_check(const RunConfig& rc, const CheckArgs& args) {
    const auto market = load_market(rc, !args.no_validate);
    const auto rows = dbs::run_check_suite(market, {args.strike, controls(rc), args.no_validate});
    bool all = true;
    std::cout << fmt::format("{:<18} {:>22} {:>22} {:>12}  {}\n", "check", "estimate", "target", "std_error", "result");
    for (const auto& r : rows) {
        all = all && r.pass;
        std::cout << fmt::format("{:<18} {:>22.15g} {:>22.15g} {:>12.4g}  {}\n", r.name, r.estimate, r.target,
                                 r.std_error, r.pass ? "pass" : "FAIL");
    }
    return all ? kExitOk : kExitCheckFailed;
}

struct ConvergenceArgs {
    std::vector<std::size_t> steps{256, 512};
};

int cmd_convergence(const RunConfig& rc, const ConvergenceArgs& args) {
    const auto sfde = load_fixed(rc);
    std::cout << "dt,rms_gap,mean_em,se_em,mean_split,se_split,em_nonpositive_paths\n";
    for (const auto n : args.steps) {
        const double dt = 1.0 / static_cast<double>(n);
        const auto stats = dbs::reduce_paths<4>(rc.paths, rc.workers, [&](std::uint64_t id) {
            const dbs::BrownianSpec spec{rc.seed, id};
            const auto em = dbs::simulate_em_fixed(sfde, dt, spec);
            const auto split = dbs::simulate_split_fixed(sfde, dt, spec);
            const double gap = em.values.back() - split.values.back();
            return std::array<double, 4>{gap, em.values.back(), split.values.back(), em.first_nonpositive ? 1.0 : 0.0};
        });
        std::cout << num(dt) << ',' << num(stats[0].rms()) << ',' << num(stats[1].mean) << ','
                  << num(stats[1].std_error()) << ',' << num(stats[2].mean) << ',' << num(stats[2].std_error()) << ','
                  << static_cast<std::size_t>(std::llround(stats[3].mean * static_cast<double>(stats[3].n))) << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Option pricing and hedging on a market with delay-block volatility"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig rc;
    app.add_option("--config", rc.config_path, "Market / model JSON file");
    app.add_option("--seed", rc.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--paths", rc.paths, "Number of Monte Carlo paths")->capture_default_str();
    app.add_option("--workers", rc.workers, "Worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    app.add_option("--quad-n", rc.quad_n, "Simpson subintervals per block (even)")->capture_default_str();

    PriceArgs price;
    auto* price_cmd = app.add_subcommand("price", "Value a European option");
    price_cmd->add_option("--method", price.method)
        ->check(CLI::IsMember({"closed", "semi", "mc", "classical", "importance"}))
        ->capture_default_str();
    price_cmd->add_option("--kind", price.kind)->check(CLI::IsMember({"call", "put"}))->capture_default_str();
    price_cmd->add_option("--strike", price.strike, "Strike (default s0)");
    price_cmd->add_option("--t", price.t, "Valuation time")->capture_default_str();
    price_cmd->add_option("--spot", price.spot, "Price at the valuation time (default s0)");
    price_cmd->add_option("--block-spot", price.block_spot, "Price at the start of the current block (default spot)");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Write sample paths as CSV");
    sim_cmd->add_option("--scheme", sim.scheme)->check(CLI::IsMember({"exact", "em", "split"}))->capture_default_str();
    sim_cmd->add_option("--measure", sim.measure, "Exact scheme only")
        ->check(CLI::IsMember({"P", "Q"}))
        ->capture_default_str();
    sim_cmd->add_option("--dt", sim.dt, "Step for the fixed-delay schemes")->capture_default_str();
    sim_cmd->add_option("--grid", sim.grid, "Exact scheme: equispaced sample count (default: block boundaries)");

    HedgeArgs hedge;
    auto* hedge_cmd = app.add_subcommand("hedge", "Discrete replication errors in the final block");
    hedge_cmd->add_option("--ladder", hedge.ladder, "Rebalance counts")->delimiter(',')->capture_default_str();
    hedge_cmd->add_option("--strike", hedge.strike, "Strike (default s0)");
    hedge_cmd->add_option("--kind", hedge.kind)->check(CLI::IsMember({"call", "put"}))->capture_default_str();

    CheckArgs check;
    auto* check_cmd = app.add_subcommand("check", "Statistical self-checks at 3 standard errors");
    check_cmd->add_option("--strike", check.strike, "Strike (default s0)");
    check_cmd->add_flag("--no-validate", check.no_validate, "Skip market validation and report it as a check");

    ConvergenceArgs conv;
    auto* conv_cmd = app.add_subcommand("convergence", "Euler-Maruyama vs splitting scheme on the fixed-delay model");
    conv_cmd->add_option("--steps", conv.steps, "Steps per unit time, e.g. 256,512")
        ->delimiter(',')
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (rc.config_path.empty()) throw dbs::ConfigError("--config is required");
        if (price_cmd->parsed()) return cmd_price(rc, price);
        if (sim_cmd->parsed()) return cmd_simulate(rc, sim);
        if (hedge_cmd->parsed()) return cmd_hedge(rc, hedge);
        if (check_cmd->parsed()) return cmd_check(rc, check);
        if (conv_cmd->parsed()) return cmd_convergence(rc, conv);
    } catch (const dbs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const dbs::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const dbs::ContractError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const dbs::DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitConfig;
}
