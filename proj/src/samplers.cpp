#include "limloc/samplers.hpp"

#include "limloc/path_engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace limloc {

namespace {

std::size_t grid_index(double t, double dt) {
    return static_cast<std::size_t>(std::floor(t / dt + 1e-9));
}

Seed derived_seed(Seed s, std::uint64_t tag) {
    return Seed{s.root, detail::mix64(s.stream + tag)};
}

void validate_grid(double horizon, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("dt must be positive and finite");
    if (!(horizon >= dt) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be >= dt and finite");
}

} // namespace

PathDiagnostics compute_diagnostics(const Path& path, const LocalTimeProfile& profile) {
    PathDiagnostics d;
    d.local_time = profile.final_value();
    const auto a = negative_occupation(path);
    d.negative_time = a.empty() ? 0.0 : a.back();
    d.final_value = path.values.empty() ? 0.0 : path.values.back();
    d.last_zero = last_zero(path);
    return d;
}

// ---------------------------------------------------------------------------
// Rejection against local-time constraint events.
//
// All three events are monotone in the running occupation estimate, so an
// attempt can be abandoned at the first grid step that already decides it.
// ---------------------------------------------------------------------------

namespace {

struct EventPlan {
    ConditionEvent event;
    std::size_t n = 0;         // grid steps to the conditioning time
    double f_at_t = 0.0;       // E: the only bound that matters
    std::vector<double> f_grid; // K / Kprime: bound per grid time
    std::vector<std::size_t> block_starts; // Kprime: index of each 2^{j-1}
};

EventPlan make_plan(const ConstraintSpec& f, ConditionEvent event, double t, double dt) {
    EventPlan plan;
    plan.event = event;
    plan.n = grid_steps(t, dt);
    plan.f_at_t = f(t);
    if (event == ConditionEvent::K || event == ConditionEvent::Kprime) {
        plan.f_grid.resize(plan.n + 1);
        for (std::size_t k = 0; k <= plan.n; ++k)
            plan.f_grid[k] = f(dt * static_cast<double>(k));
    }
    if (event == ConditionEvent::Kprime) {
        const double n_blocks = std::log2(t);
        const int nb = static_cast<int>(std::lround(n_blocks));
        if (std::fabs(n_blocks - nb) > 1e-9 || nb < 1)
            throw std::invalid_argument("reject_condition: Kprime needs t = 2^n");
        for (int j = 1; j <= nb; ++j)
            plan.block_starts.push_back(grid_index(std::ldexp(1.0, j - 1), dt));
    }
    return plan;
}

// One Brownian attempt; returns true if the event held to the end.
// When `values` is non-null the path is stored into it.
bool run_attempt(CounterRng& rng, const EventPlan& plan, double dt, double eps,
                 std::vector<double>* values) {
    const double sd = std::sqrt(dt);
    const double inc = dt / (2.0 * eps);
    double x = 0.0, L = 0.0;
    if (values) {
        values->assign(plan.n + 1, 0.0);
    }
    std::size_t next_block = 0;
    double block_base = 0.0;
    for (std::size_t k = 1; k <= plan.n; ++k) {
        x += sd * rng.gauss();
        if (std::fabs(x) <= eps) L += inc;
        if (values) (*values)[k] = x;

        switch (plan.event) {
        case ConditionEvent::E:
            if (L > plan.f_at_t) return false;
            break;
        case ConditionEvent::K:
            if (L > plan.f_grid[k]) return false;
            break;
        case ConditionEvent::Kprime:
            while (next_block < plan.block_starts.size() &&
                   k >= plan.block_starts[next_block]) {
                block_base = L;
                ++next_block;
            }
            // the final grid point is the end of the last block, exclusive
            if (next_block > 0 && k < plan.n && L - block_base > plan.f_grid[k])
                return false;
            break;
        }
    }
    return true;
}

} // namespace

ConditionedDraw reject_condition(Seed seed, const ConstraintSpec& f,
                                 ConditionEvent event, double t, double dt,
                                 std::uint64_t max_attempts, double epsilon) {
    validate_grid(t, dt);
    if (max_attempts < 1)
        throw std::invalid_argument("reject_condition: max_attempts must be >= 1");
    const double eps = epsilon > 0.0 ? epsilon : default_bandwidth(dt);
    const EventPlan plan = make_plan(f, event, t, dt);

    CounterRng rng(seed);
    std::vector<double> values;
    for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
        if (!run_attempt(rng, plan, dt, eps, &values)) continue;

        ConditionedDraw draw;
        draw.path.dt = dt;
        draw.path.origin = 0.0;
        draw.path.values = std::move(values);
        draw.profile = occupation_estimate(draw.path, eps);
        draw.attempts = attempt;
        draw.bandwidth = eps;
        draw.seed = seed;
        switch (event) {
        case ConditionEvent::E:
            draw.event = check_E(draw.profile, f, t);
            break;
        case ConditionEvent::K:
            draw.event = check_K(draw.profile, f, t);
            break;
        case ConditionEvent::Kprime:
            draw.event = check_Kprime(draw.profile, f,
                                      static_cast<int>(std::lround(std::log2(t))));
            break;
        }
        draw.diagnostics = compute_diagnostics(draw.path, draw.profile);
        return draw;
    }
    throw RejectionBudgetError("reject_condition: no acceptance within budget",
                               max_attempts, 0.0);
}

RejectionStats reject_condition_stats(Seed seed, const ConstraintSpec& f,
                                      ConditionEvent event, double t, double dt,
                                      std::uint64_t max_attempts, double epsilon) {
    validate_grid(t, dt);
    if (max_attempts < 1)
        throw std::invalid_argument("reject_condition_stats: max_attempts must be >= 1");
    const double eps = epsilon > 0.0 ? epsilon : default_bandwidth(dt);
    const EventPlan plan = make_plan(f, event, t, dt);

    CounterRng rng(seed);
    RejectionStats stats;
    for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
        stats.attempts = attempt;
        if (run_attempt(rng, plan, dt, eps, nullptr)) {
            stats.accepted = true;
            return stats;
        }
    }
    return stats;
}

// ---------------------------------------------------------------------------
// Limit construction for a unit local-time allowance.
// ---------------------------------------------------------------------------

namespace {

LimitDraw bounded_core(Seed seed, double horizon, double dt, double epsilon,
                       double search_horizon, bool keep_path) {
    validate_grid(horizon, dt);
    const double eps = epsilon > 0.0 ? epsilon : default_bandwidth(dt);
    const double search = search_horizon > 0.0 ? std::max(search_horizon, horizon)
                                               : horizon;
    const std::size_t n = grid_steps(horizon, dt);
    const std::size_t n_search = grid_steps(search, dt);
    const double sd = std::sqrt(dt);
    const double inc = dt / (2.0 * eps);

    CounterRng rng(seed);
    const double u = rng.uniform_open();
    const int sign = rng.coin_sign();

    LimitDraw draw;
    draw.u = u;
    draw.terminal_sign = sign;
    if (keep_path) {
        draw.path.dt = dt;
        draw.path.origin = 0.0;
        draw.path.values.assign(n + 1, 0.0);
    }

    double x = 0.0, L = 0.0;
    std::size_t switch_idx = 0;
    bool switched = false;
    for (std::size_t k = 1; k <= n_search; ++k) {
        x += sd * rng.gauss();
        if (std::fabs(x) <= eps) L += inc;
        if (keep_path && k <= n) draw.path.values[k] = x;
        if (L > u) {
            switch_idx = k;
            switched = true;
            break;
        }
    }

    // The running estimate moves in exact steps of `inc`, so the level it
    // holds when it first exceeds u is inc*(floor(u/inc)+1) no matter where
    // the crossing happens. The walk crosses with probability one, so for a
    // crossing beyond the simulated window that level is recorded directly
    // rather than simulated to.
    draw.terminal_quantity =
        switched ? L : inc * (std::floor(u / inc) + 1.0);
    draw.truncated = !switched || switch_idx > n;
    draw.switch_time = switched ? std::min(dt * static_cast<double>(switch_idx), horizon)
                                : horizon;

    if (keep_path && switched && switch_idx < n) {
        CounterRng leg(derived_seed(seed, 0x6c6567ULL));
        double w1 = 0.0, w2 = 0.0, w3 = 0.0;
        for (std::size_t k = switch_idx + 1; k <= n; ++k) {
            w1 += sd * leg.gauss();
            w2 += sd * leg.gauss();
            w3 += sd * leg.gauss();
            draw.path.values[k] =
                sign * std::sqrt(w1 * w1 + w2 * w2 + w3 * w3);
        }
    }
    return draw;
}

} // namespace

LimitDraw limit_bounded_allowance(Seed seed, double horizon, double dt,
                                  double epsilon, double search_horizon) {
    return bounded_core(seed, horizon, dt, epsilon, search_horizon, true);
}

LimitDraw limit_bounded_allowance_diag(Seed seed, double horizon, double dt,
                                       double epsilon, double search_horizon) {
    return bounded_core(seed, horizon, dt, epsilon, search_horizon, false);
}

// ---------------------------------------------------------------------------
// Limit construction for a unit negative-time allowance.
//
// The bridge segment must carry at most one unit of time below 0. Naive
// rejection needs ~g attempts of ~g/dt steps each and the duration g is
// heavy-tailed, so it is not usable. Instead the conditioning is done
// exactly through cyclic exchangeability: for a discrete bridge B with N
// exchangeable increments, the path shifted cyclically at index m is again a
// bridge, and its time below 0 equals step * (rank of B_m among B_1..B_N - 1).
// Shifting at a uniformly chosen index of rank <= K therefore samples the
// bridge conditioned on spending at most step*K below zero, exactly, in one
// pass. The recorded negative time is the same quantity the grid occupation
// rule assigns to the shifted path.
// ---------------------------------------------------------------------------

double g_from_uniform(double v) {
    if (!(v > 0.0 && v < 1.0))
        throw std::invalid_argument("g_from_uniform: v must be in (0,1)");
    if (v < 0.5) {
        const double s = 2.0 * v;
        return s * s;
    }
    const double s = 2.0 * (1.0 - v);
    return 1.0 / (s * s);
}

double sample_g(Seed seed) {
    CounterRng rng(seed);
    return g_from_uniform(rng.uniform_open());
}

namespace {

constexpr double kGCap = 2.5e5;      // duration tail cut; see implementation notes
constexpr std::size_t kBridgeMin = 2048;
constexpr std::size_t kBridgeMax = 4000000;

struct BridgePlan {
    std::size_t n = 0;  // number of increments
    double step = 0.0;  // internal resolution; multiple of dt when coarse
};

BridgePlan plan_bridge(double g, double dt) {
    BridgePlan plan;
    if (g < static_cast<double>(kBridgeMin) * dt) {
        plan.n = kBridgeMin;
        plan.step = g / static_cast<double>(kBridgeMin);
    } else if (g <= static_cast<double>(kBridgeMax) * dt) {
        plan.n = static_cast<std::size_t>(std::llround(g / dt));
        plan.step = dt;
    } else {
        const double m = std::ceil(g / (static_cast<double>(kBridgeMax) * dt));
        plan.step = m * dt;
        plan.n = static_cast<std::size_t>(std::llround(g / plan.step));
        if (plan.n < 2) plan.n = 2;
    }
    return plan;
}

LimitDraw negpart_core(Seed seed, double horizon, double dt,
                       std::uint64_t bridge_budget, bool keep_path) {
    validate_grid(horizon, dt);
    if (bridge_budget < 1)
        throw std::invalid_argument("limit_negative_part: bridge_budget must be >= 1");

    CounterRng rng(seed);
    double v = rng.uniform_open();
    double g = g_from_uniform(v);
    while (g > kGCap) {
        v = rng.uniform_open();
        g = g_from_uniform(v);
    }

    const BridgePlan plan = plan_bridge(g, dt);
    const std::size_t nb = plan.n;
    const double sd = std::sqrt(plan.step);

    // unconditioned discrete bridge: Gaussian walk, linear pin to 0
    std::vector<double> b(nb + 1, 0.0);
    {
        CounterRng brownian(derived_seed(seed, 0x6272ULL));
        for (std::size_t k = 1; k <= nb; ++k)
            b[k] = b[k - 1] + sd * brownian.gauss();
        const double wn = b[nb];
        for (std::size_t k = 1; k < nb; ++k)
            b[k] -= wn * (static_cast<double>(k) / static_cast<double>(nb));
        b[nb] = 0.0;
    }

    // allowed shift ranks: negative time = step * (rank - 1) <= 1
    const auto max_rank = static_cast<std::size_t>(std::floor(1.0 / plan.step)) + 1;
    const std::size_t k_allowed = std::min<std::size_t>(nb, max_rank);
    const std::size_t r = 1 + static_cast<std::size_t>(rng.uniform_index(k_allowed));

    std::vector<std::uint32_t> order(nb);
    std::iota(order.begin(), order.end(), 1u); // candidate shift indices 1..nb
    const auto cmp = [&b](std::uint32_t i, std::uint32_t j) { return b[i] < b[j]; };
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(r - 1),
                     order.end(), cmp);
    const std::size_t m = order[r - 1];
    const double pivot = b[m];

    LimitDraw draw;
    draw.u = v;
    draw.terminal_sign = +1;
    draw.terminal_quantity = plan.step * static_cast<double>(r - 1);
    draw.truncated = g > horizon;
    draw.switch_time = std::min(g, horizon);

    if (!keep_path) return draw;

    const std::size_t n_out = grid_steps(horizon, dt);
    draw.path.dt = dt;
    draw.path.origin = 0.0;
    draw.path.values.assign(n_out + 1, 0.0);

    // shifted bridge value at internal index i, i = 0..nb
    const auto shifted = [&](std::size_t i) -> double {
        if (i == 0 || i == nb) return 0.0;
        const std::size_t j = (m + i <= nb) ? m + i : m + i - nb;
        return b[j] - pivot;
    };

    const double g_span = plan.step * static_cast<double>(nb);
    const std::size_t k_bridge_end =
        std::min(n_out, static_cast<std::size_t>(std::floor(g_span / dt + 1e-9)));

    if (plan.step <= dt * (1.0 + 1e-12)) {
        // internal grid at least as fine as the output grid: subsample
        for (std::size_t k = 1; k <= k_bridge_end; ++k) {
            auto i = static_cast<std::size_t>(std::llround(
                static_cast<double>(k) * dt / plan.step));
            if (i > nb) i = nb;
            draw.path.values[k] = shifted(i);
        }
    } else {
        // coarse internal grid: exact conditional infill of each visible span
        CounterRng fill(derived_seed(seed, 0x66696cULL));
        const auto mfac = static_cast<std::size_t>(std::llround(plan.step / dt));
        for (std::size_t i = 0; plan.step * static_cast<double>(i) < dt * static_cast<double>(k_bridge_end); ++i) {
            const double a_val = shifted(i);
            const double b_val = shifted(i + 1);
            double x = a_val;
            for (std::size_t j = 1; j < mfac; ++j) {
                const std::size_t k = i * mfac + j;
                if (k > k_bridge_end) break;
                const double remain = plan.step - dt * static_cast<double>(j - 1);
                const double mu = x + (b_val - x) * (dt / remain);
                const double var = dt * (remain - dt) / remain;
                x = mu + std::sqrt(std::max(var, 0.0)) * fill.gauss();
                draw.path.values[k] = x;
            }
            const std::size_t kend = (i + 1) * mfac;
            if (kend <= k_bridge_end) draw.path.values[kend] = b_val;
        }
    }

    // nonnegative transient leg after the bridge
    if (k_bridge_end < n_out) {
        CounterRng leg(derived_seed(seed, 0x6c6567ULL));
        const double sdo = std::sqrt(dt);
        double w1 = 0.0, w2 = 0.0, w3 = 0.0;
        for (std::size_t k = k_bridge_end + 1; k <= n_out; ++k) {
            w1 += sdo * leg.gauss();
            w2 += sdo * leg.gauss();
            w3 += sdo * leg.gauss();
            draw.path.values[k] = std::sqrt(w1 * w1 + w2 * w2 + w3 * w3);
        }
    }
    return draw;
}

} // namespace

LimitDraw limit_negative_part(Seed seed, double horizon, double dt,
                              std::uint64_t bridge_budget) {
    return negpart_core(seed, horizon, dt, bridge_budget, true);
}

LimitDraw limit_negative_part_diag(Seed seed, double horizon, double dt,
                                   std::uint64_t bridge_budget) {
    return negpart_core(seed, horizon, dt, bridge_budget, false);
}

// ---------------------------------------------------------------------------
// Reflection coupling.
// ---------------------------------------------------------------------------

// ---------------------------------------------------------------------------
// Batch serialization: one summary per line, diagnostics only.
// ---------------------------------------------------------------------------

std::string conditioned_draw_jsonl(const ConditionedDraw& draw) {
    nlohmann::json j;
    j["attempts"] = draw.attempts;
    j["bandwidth"] = draw.bandwidth;
    j["event_holds"] = draw.event.holds;
    j["local_time"] = draw.diagnostics.local_time;
    j["negative_time"] = draw.diagnostics.negative_time;
    j["final_value"] = draw.diagnostics.final_value;
    j["last_zero"] = draw.diagnostics.last_zero;
    j["seed_root"] = draw.seed.root;
    j["seed_stream"] = draw.seed.stream;
    return j.dump();
}

std::string limit_draw_jsonl(const LimitDraw& draw) {
    nlohmann::json j;
    j["u"] = draw.u;
    j["switch_time"] = draw.switch_time;
    j["terminal_quantity"] = draw.terminal_quantity;
    j["terminal_sign"] = draw.terminal_sign;
    j["truncated"] = draw.truncated;
    return j.dump();
}

std::string write_draw_path_csv(const ConditionedDraw& draw, const std::string& dir) {
    char name[96];
    std::snprintf(name, sizeof(name), "/draw_%llu_%llu_path.csv",
                  static_cast<unsigned long long>(draw.seed.root),
                  static_cast<unsigned long long>(draw.seed.stream));
    const std::string file = dir + name;
    write_path_csv(draw.path, file);
    return file;
}

ReflectionCouple couple_reflect(Seed seed, double x0, double y0, double horizon,
                                double dt) {
    validate_grid(horizon, dt);
    if (!(x0 >= 0.0) || !(y0 >= x0))
        throw std::invalid_argument("couple_reflect: need 0 <= x0 <= y0");

    const std::size_t n = grid_steps(horizon, dt);
    const double sd = std::sqrt(dt);
    CounterRng rng_x(derived_seed(seed, 0x78ULL));
    CounterRng rng_z(derived_seed(seed, 0x7aULL));

    ReflectionCouple rc;
    rc.x.dt = dt;
    rc.x.origin = x0;
    rc.x.values.assign(n + 1, 0.0);
    rc.x.values[0] = x0;
    rc.z = rc.x;
    rc.z.origin = y0;
    rc.z.values[0] = y0;
    rc.tau_couple = horizon;

    bool met = y0 <= std::fabs(x0);
    int glue_sign = 0;
    if (met) {
        rc.tau_couple = 0.0;
        glue_sign = x0 >= 0.0 ? +1 : -1;
        rc.z.values[0] = glue_sign * x0;
    }
    for (std::size_t k = 1; k <= n; ++k) {
        rc.x.values[k] = rc.x.values[k - 1] + sd * rng_x.gauss();
        const double zf = rc.z.values[k - 1] + sd * rng_z.gauss();
        if (!met) {
            if (zf <= std::fabs(rc.x.values[k])) {
                met = true;
                rc.tau_couple = dt * static_cast<double>(k);
                glue_sign = rc.x.values[k] >= 0.0 ? +1 : -1;
                rc.z.values[k] = glue_sign * rc.x.values[k];
            } else {
                rc.z.values[k] = zf;
            }
        } else {
            rc.z.values[k] = glue_sign * rc.x.values[k];
        }
    }
    return rc;
}

} // namespace limloc
