#include "delaybs/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "delaybs/errors.hpp"
#include "delaybs/quadrature.hpp"

namespace dbs {

RateCurve RateCurve::constant(double rate) {
    RateCurve c;
    c.kind_ = Kind::Constant;
    c.values_ = {rate};
    return c;
}

RateCurve RateCurve::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
    if (values.size() != breakpoints.size() + 1) {
        throw ConfigError("piecewise rate: need exactly one more value than breakpoints");
    }
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i] > breakpoints[i - 1])) {
            throw ConfigError("piecewise rate: breakpoints must be strictly increasing");
        }
    }
    RateCurve c;
    c.kind_ = Kind::Piecewise;
    c.knots_ = std::move(breakpoints);
    c.values_ = std::move(values);
    return c;
}

RateCurve RateCurve::samples(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2) {
        throw ConfigError("sampled rate: need at least two (time, value) samples of equal length");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw ConfigError("sampled rate: sample times must be strictly increasing");
    }
    RateCurve c;
    c.kind_ = Kind::Samples;
    c.knots_ = std::move(times);
    c.values_ = std::move(values);
    return c;
}

std::size_t RateCurve::piece_count() const noexcept {
    switch (kind_) {
        case Kind::Constant: return 1;
        case Kind::Piecewise: return values_.size();
        case Kind::Samples: return knots_.size() - 1;
    }
    return 1;
}

std::size_t RateCurve::piece_index(double t) const {
    switch (kind_) {
        case Kind::Constant: return 0;
        case Kind::Piecewise:
            return static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin());
        case Kind::Samples: {
            const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
            const auto idx = static_cast<std::size_t>(it - knots_.begin());
            // Clamp to the first/last segment; outside the sample range the end segments extrapolate.
            return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, knots_.size() - 2);
        }
    }
    return 0;
}

double RateCurve::piece_rate(std::size_t piece, double t) const {
    switch (kind_) {
        case Kind::Constant: return values_[0];
        case Kind::Piecewise: return values_[piece];
        case Kind::Samples: {
            const double t0 = knots_[piece];
            const double t1 = knots_[piece + 1];
            const double w = (t - t0) / (t1 - t0);
            return values_[piece] + w * (values_[piece + 1] - values_[piece]);
        }
    }
    return 0.0;
}

double RateCurve::piece_end(std::size_t piece) const {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    switch (kind_) {
        case Kind::Constant: return kInf;
        case Kind::Piecewise: return piece < knots_.size() ? knots_[piece] : kInf;
        case Kind::Samples: return piece + 1 < piece_count() ? knots_[piece + 1] : kInf;
    }
    return kInf;
}

double RateCurve::rate(double t) const { return piece_rate(piece_index(t), t); }

double RateCurve::integral(double t1, double t2, int n) const {
    if (t1 > t2) throw DomainError("rate integral: t1 > t2");
    if (t1 == t2) return 0.0;
    if (kind_ == Kind::Constant) {
        const double r = values_[0];
        return integrate([r](double) { return r; }, t1, t2, n);
    }
    // Pieces are closed on the left, so each one is integrated with its own formula up to its end knot.
    double total = 0.0;
    double a = t1;
    for (std::size_t piece = piece_index(t1); a < t2; ++piece) {
        const double b = std::min(t2, piece_end(piece));
        if (b > a) total += integrate([this, piece](double u) { return piece_rate(piece, u); }, a, b, n);
        a = b;
    }
    return total;
}

std::vector<std::string> RateCurve::check(double horizon) const {
    std::vector<std::string> out;
    for (double v : values_) {
        if (!std::isfinite(v)) out.emplace_back("rate value is not finite");
    }
    if (kind_ == Kind::Samples && (knots_.front() > 0.0 || knots_.back() < horizon)) {
        std::ostringstream os;
        os << "sampled rate covers [" << knots_.front() << ", " << knots_.back() << "] but must cover [0, " << horizon
           << "]";
        out.push_back(os.str());
    }
    for (double k : knots_) {
        if (!std::isfinite(k)) out.emplace_back("rate knot is not finite");
    }
    return out;
}

double floor_block(double t, double h) {
    if (!(h > 0.0)) throw DomainError("floor_block: block length must be positive");
    if (!(t >= 0.0)) throw DomainError("floor_block: time must be non-negative");
    const double k = std::floor(t / h * (1.0 + kBoundarySnap));
    return k * h;
}

double final_block_start(double T, double h) {
    const double fb = floor_block(T, h);
    if (fb > 0.0 && std::abs(T - fb) <= kBoundarySnap * std::max(T, h)) {
        return std::round(fb / h - 1.0) * h;
    }
    return fb;
}

std::vector<double> block_schedule(double T, double h) {
    if (!(T > 0.0)) throw DomainError("block_schedule: horizon must be positive");
    return block_segments(0.0, T, h);
}

std::vector<double> block_segments(double t_start, double t_end, double h) {
    if (!(t_end >= t_start)) throw DomainError("block_segments: t_end < t_start");
    std::vector<double> out{t_start};
    if (t_end == t_start) return out;
    const double k0 = std::floor(t_start / h * (1.0 + kBoundarySnap)) + 1.0;
    for (double k = k0;; k += 1.0) {
        const double boundary = k * h;
        if (boundary >= t_end * (1.0 - kBoundarySnap)) break;
        out.push_back(boundary);
    }
    out.push_back(t_end);
    return out;
}

double discount_factor(const RateCurve& rate, double t1, double t2, int n) {
    if (t1 < 0.0) throw DomainError("discount_factor: negative time");
    if (t1 > t2) throw DomainError("discount_factor: t1 > t2");
    if (t1 == t2) return 1.0;
    return std::exp(-rate.integral(t1, t2, n));
}

std::string Violation::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << what << " at t=" << t << ", s=" << s << " (value " << value << ")";
    return os.str();
}

std::vector<Violation> validate_market(const VariableDelayMarket& m) {
    std::vector<Violation> out;
    auto scalar = [&](bool ok, const char* what, double value) {
        if (!ok) out.push_back({what, 0.0, 0.0, value});
    };
    scalar(std::isfinite(m.s0) && m.s0 > 0.0, "s0 must be positive", m.s0);
    scalar(std::isfinite(m.h) && m.h > 0.0, "h must be positive", m.h);
    scalar(std::isfinite(m.T) && m.T > 0.0, "T must be positive", m.T);
    scalar(std::isfinite(m.g_min) && m.g_min > 0.0, "g_min must be positive", m.g_min);
    scalar(m.quad_n >= 2 && m.quad_n % 2 == 0, "quadrature subinterval count must be even and >= 2",
           static_cast<double>(m.quad_n));
    if (!out.empty()) return out;

    for (const auto& problem : m.rate.check(m.T)) out.push_back({problem, 0.0, 0.0, 0.0});

    const double log_lo = std::log(m.s0 / 100.0);
    const double log_hi = std::log(m.s0 * 100.0);
    for (std::size_t i = 0; i < kGridTimes; ++i) {
        const double t = m.T * static_cast<double>(i) / static_cast<double>(kGridTimes - 1);
        if (!std::isfinite(m.rate.rate(t))) out.push_back({"rate is not finite", t, 0.0, m.rate.rate(t)});
        for (std::size_t j = 0; j < kGridPrices; ++j) {
            const double s =
                std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(j) / static_cast<double>(kGridPrices - 1));
            try {
                (void)m.f.eval(t, s);
            } catch (const EvalError& e) {
                out.push_back({std::string("f evaluation failed: ") + e.what(), t, s, 0.0});
            }
            try {
                const double gv = m.g.eval(t, s);
                if (std::abs(gv) < m.g_min) out.push_back({"|g| below g_min", t, s, gv});
            } catch (const EvalError& e) {
                out.push_back({std::string("g evaluation failed: ") + e.what(), t, s, 0.0});
            }
        }
    }
    return out;
}

void require_valid(const VariableDelayMarket& market) {
    const auto problems = validate_market(market);
    if (problems.empty()) return;
    std::string msg = "invalid market (" + std::to_string(problems.size()) + " violation" +
                      (problems.size() == 1 ? "" : "s") + "):";
    constexpr std::size_t kShown = 8;
    for (std::size_t i = 0; i < problems.size() && i < kShown; ++i) msg += "\n  " + problems[i].describe();
    if (problems.size() > kShown) msg += "\n  ...";
    throw ConfigError(msg);
}

double FixedDelaySfde::phi(double u) const {
    if (phi_samples.size() == 1) return phi_samples.front();
    const double step = L / static_cast<double>(phi_samples.size() - 1);
    const double x = std::clamp((u + L) / step, 0.0, static_cast<double>(phi_samples.size() - 1));
    const auto i = std::min(static_cast<std::size_t>(x), phi_samples.size() - 2);
    const double w = x - static_cast<double>(i);
    return phi_samples[i] + w * (phi_samples[i + 1] - phi_samples[i]);
}

std::vector<std::string> validate_fixed_delay(const FixedDelaySfde& sfde) {
    std::vector<std::string> out;
    if (!(sfde.b > 0.0)) out.emplace_back("b must be positive");
    if (!(sfde.L >= sfde.b)) out.emplace_back("L must be at least b");
    if (!(sfde.a > 0.0 && sfde.a <= sfde.L)) out.emplace_back("a must lie in (0, L]");
    if (!(sfde.T > 0.0)) out.emplace_back("T must be positive");
    if (sfde.phi_samples.empty()) out.emplace_back("phi_samples must not be empty");
    for (double v : sfde.phi_samples) {
        if (!(v > 0.0 && std::isfinite(v))) {
            out.emplace_back("phi_samples must be strictly positive");
            break;
        }
    }
    if (sfde.g.depends_on_t()) out.emplace_back("fixed-delay g must depend on s only");
    const auto& d = sfde.drift;
    if (d.kind == DriftFunctional::Kind::SegmentPoint) {
        if (!(d.c > 0.0)) out.emplace_back("segment-point drift requires c > 0");
        if (!(d.eps >= 0.0)) out.emplace_back("segment-point drift requires eps >= 0");
    } else if (!(d.c >= 0.0)) {
        out.emplace_back("proportional drift requires c >= 0");
    }
    return out;
}

void require_valid(const FixedDelaySfde& sfde) {
    const auto problems = validate_fixed_delay(sfde);
    if (problems.empty()) return;
    std::string msg = "invalid fixed-delay model:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
}

double OptionSpec::payoff(double s_T) const {
    return kind == OptionKind::Call ? std::max(s_T - K, 0.0) : std::max(K - s_T, 0.0);
}

void require_valid(const OptionSpec& option, double horizon) {
    if (!(option.K >= 0.0) || !std::isfinite(option.K)) throw ConfigError("strike must be non-negative");
    if (!(option.t_valuation >= 0.0 && option.t_valuation <= horizon)) {
        throw ConfigError("valuation time must lie in [0, T]");
    }
}

}  // namespace dbs
