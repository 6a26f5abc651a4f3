#include "delaybs/paths.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "delaybs/errors.hpp"
#include "delaybs/quadrature.hpp"

namespace dbs {

double sample_block_exact(const VariableDelayMarket& market, double s_k, double a, double b, Measure measure,
                          double z) {
    const auto mom = block_moments(market, s_k, a, b, measure);
    return s_k * std::exp(mom.m + std::sqrt(mom.v) * z);
}

bool on_block_boundary(double t, double h) {
    const double kb = floor_block(t, h);
    return std::abs(t - kb) <= 4.0 * kBoundarySnap * std::max(t, h);
}

void advance_exact(const VariableDelayMarket& market, Measure measure, const BrownianSpec& spec, ExactState& state,
                   double t_to) {
    const double h = market.h;
    while (state.t < t_to) {
        double seg_end = t_to;
        const double next = (std::floor(state.t / h * (1.0 + kBoundarySnap)) + 1.0) * h;
        if (next < t_to * (1.0 - kBoundarySnap)) seg_end = next;

        const auto mom = block_moments(market, state.s_block, state.t, seg_end, measure);
        const double z = spec.normal(state.draw++);
        state.s *= std::exp(mom.m + std::sqrt(mom.v) * z);
        state.t = seg_end;
        if (on_block_boundary(seg_end, h)) state.s_block = state.s;
    }
}

Path simulate_exact(const VariableDelayMarket& market, Measure measure, const BrownianSpec& spec, double t_start,
                    double s_start, double s_blockstart, const std::vector<double>& sample_times) {
    if (!(s_start > 0.0) || !(s_blockstart > 0.0)) throw ContractError("simulate_exact: prices must be positive");
    double prev = t_start;
    for (double t : sample_times) {
        if (!(t > prev)) throw ContractError("simulate_exact: sample times must be strictly increasing after t_start");
        prev = t;
    }
    if (!sample_times.empty() && sample_times.back() > market.T * (1.0 + kBoundarySnap)) {
        throw ContractError("simulate_exact: sample time beyond the horizon");
    }

    Path path;
    path.measure = measure;
    path.spec = spec;
    path.times.reserve(sample_times.size() + 1);
    path.values.reserve(sample_times.size() + 1);
    path.times.push_back(t_start);
    path.values.push_back(s_start);

    ExactState state{t_start, s_start, on_block_boundary(t_start, market.h) ? s_start : s_blockstart, 0};
    for (double t : sample_times) {
        advance_exact(market, measure, spec, state, t);
        path.times.push_back(t);
        path.values.push_back(state.s);
    }
    return path;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t grid_steps(double span, double dt, const char* what) {
    const double ratio = span / dt;
    const double k = std::round(ratio);
    if (k < 1.0 || std::abs(ratio - k) > 1e-9 * std::max(1.0, ratio)) {
        throw ContractError(std::string("dt must divide ") + what);
    }
    return static_cast<std::size_t>(k);
}

struct FixedGrid {
    std::size_t lag_b = 0;
    std::size_t lag_a = 0;
    std::size_t steps = 0;
};

FixedGrid fixed_grid(const FixedDelaySfde& sfde, double dt) {
    require_valid(sfde);
    if (!(dt > 0.0) || dt > sfde.b) throw ContractError("need 0 < dt <= b");
    FixedGrid g;
    g.lag_b = grid_steps(sfde.b, dt, "b");
    g.lag_a = sfde.drift.uses_drift_lag() ? grid_steps(sfde.a, dt, "a") : 0;
    g.steps = static_cast<std::size_t>(std::ceil(sfde.T / dt - 1e-9));
    return g;
}

void check_finite(double v, std::size_t step) {
    if (!std::isfinite(v)) throw NumericalError("integration failure: non-finite state at step " + std::to_string(step));
}

}  // namespace

SegmentBuffer::SegmentBuffer(const FixedDelaySfde& sfde, double dt, std::size_t avg_steps)
    : dt_(dt), avg_steps_(avg_steps) {
    const auto hist = static_cast<std::size_t>(std::ceil(sfde.L / dt - 1e-9));
    cap_ = std::max(hist, avg_steps) + 1;
    ring_.assign(cap_, 0.0);
    // Oldest first so that head_ ends on u = 0.
    for (std::size_t k = cap_; k-- > 0;) {
        const double u = -static_cast<double>(k) * dt;
        ring_[cap_ - 1 - k] = sfde.phi(std::max(u, -sfde.L));
    }
    head_ = cap_ - 1;
    for (std::size_t j = 0; j <= avg_steps_ && avg_steps_ > 0; ++j) window_sum_ += lagged(j);
}

double SegmentBuffer::window_average() const noexcept {
    if (avg_steps_ == 0) return current();
    const double trap = window_sum_ - 0.5 * (current() + lagged(avg_steps_));
    return trap / static_cast<double>(avg_steps_);
}

void SegmentBuffer::push(double value) noexcept {
    if (avg_steps_ > 0) window_sum_ -= lagged(avg_steps_);
    head_ = (head_ + 1) % cap_;
    ring_[head_] = value;
    if (avg_steps_ > 0) window_sum_ += value;
}

double drift_value(const DriftFunctional& drift, const SegmentBuffer& segment, std::size_t lag_a_steps,
                   std::size_t lag_b_steps) {
    switch (drift.kind) {
        case DriftFunctional::Kind::SegmentPoint: return drift.c * segment.lagged(lag_b_steps) + drift.eps;
        case DriftFunctional::Kind::ProportionalLagged: {
            const double x = segment.lagged(lag_a_steps);
            return drift.c * x / (1.0 + x) * segment.current();
        }
        case DriftFunctional::Kind::MovingAverage:
            return drift.c * segment.window_average() * segment.current();
    }
    return 0.0;
}

Path simulate_em_fixed(const FixedDelaySfde& sfde, double dt, const BrownianSpec& spec) {
    const auto grid = fixed_grid(sfde, dt);
    const std::size_t avg = sfde.drift.kind == DriftFunctional::Kind::MovingAverage ? grid.lag_a : 0;
    SegmentBuffer seg(sfde, dt, avg);

    Path path;
    path.measure = Measure::P;
    path.spec = spec;
    path.times.reserve(grid.steps + 1);
    path.values.reserve(grid.steps + 1);
    path.times.push_back(0.0);
    path.values.push_back(seg.current());

    for (std::size_t n = 0; n < grid.steps; ++n) {
        const double t = static_cast<double>(n) * dt;
        const double t_next = n + 1 == grid.steps ? sfde.T : static_cast<double>(n + 1) * dt;
        const double step = t_next - t;
        const double s = seg.current();
        const double vol = sfde.g.eval(t, seg.lagged(grid.lag_b));
        const double dw = std::sqrt(step) * spec.normal(static_cast<std::uint32_t>(n));
        const double next = s + drift_value(sfde.drift, seg, grid.lag_a, grid.lag_b) * step + vol * s * dw;
        check_finite(next, n);
        if (next <= 0.0 && !path.first_nonpositive) path.first_nonpositive = n + 1;
        seg.push(next);
        path.times.push_back(t_next);
        path.values.push_back(next);
    }
    return path;
}

Path simulate_split_fixed(const FixedDelaySfde& sfde, double dt, const BrownianSpec& spec,
                          std::vector<SplitState>* trace) {
    const auto grid = fixed_grid(sfde, dt);
    const std::size_t avg = sfde.drift.kind == DriftFunctional::Kind::MovingAverage ? grid.lag_a : 0;
    SegmentBuffer seg(sfde, dt, avg);

    Path path;
    path.measure = Measure::P;
    path.spec = spec;
    path.times.reserve(grid.steps + 1);
    path.values.reserve(grid.steps + 1);
    path.times.push_back(0.0);
    path.values.push_back(seg.current());
    if (trace != nullptr) trace->clear();

    SplitState st;
    for (std::size_t n = 0; n < grid.steps; ++n) {
        // Each block of length b restarts psi at 1 with y equal to the current price; the
        // lagged volatilities inside the block come from the previous block.
        if (n % grid.lag_b == 0) st = SplitState{1.0, seg.current(), 0.0, 0.0};

        const double t = static_cast<double>(n) * dt;
        const double t_next = n + 1 == grid.steps ? sfde.T : static_cast<double>(n + 1) * dt;
        const double step = t_next - t;
        const double vol = sfde.g.eval(t, seg.lagged(grid.lag_b));
        const double dw = std::sqrt(step) * spec.normal(static_cast<std::uint32_t>(n));

        st.y += step * drift_value(sfde.drift, seg, grid.lag_a, grid.lag_b) / st.psi;
        st.m_acc += vol * dw;
        st.qv += vol * vol * step;
        st.psi = std::exp(st.m_acc - 0.5 * st.qv);
        const double next = st.psi * st.y;
        check_finite(next, n);
        if (next <= 0.0 && !path.first_nonpositive) path.first_nonpositive = n + 1;
        seg.push(next);
        path.times.push_back(t_next);
        path.values.push_back(next);
        if (trace != nullptr) trace->push_back(st);
    }
    return path;
}

}  // namespace dbs
