#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

#include "synckit/connectivity.hpp"
#include "synckit/network.hpp"
#include "synckit/partition.hpp"
#include "synckit/synchrony.hpp"

namespace synckit {

using State = std::vector<double>;

/// f_c(x) = a_{t(c)}(x_c) + sum_d m_cd * h_{t(c) t(d)}(x_c, x_d). Sampled maps
/// have |gain| < 1 and bounded h, so discrete orbits stay bounded. With `exo`
/// set, h(x, y) = g(x, y) - g(x, x) and inputs in the receiver's own state
/// have no effect.
struct AdmissibleFunctionSpec {
    struct SelfMap {
        double offset = 0, amp = 0, freq = 1, phase = 0, slope = 0, gain = 0;
        double operator()(double x) const
        {
            return gain * x + offset + amp * std::sin(freq * x + phase) + slope * std::tanh(x);
        }
    };
    struct Coupling {
        double poly[3][3] = {}; // coefficient of tanh(x)^p tanh(y)^q
        double amp = 0, fx = 0, fy = 0, phase = 0;

        double raw(double x, double y) const
        {
            const double tx = std::tanh(x), ty = std::tanh(y);
            const double px[3] = {1.0, tx, tx * tx};
            const double py[3] = {1.0, ty, ty * ty};
            double s = 0;
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q)
                    s += poly[p][q] * px[p] * py[q];
            return s + amp * std::sin(fx * x + fy * y + phase);
        }
    };

    int type_count = 0;
    bool exo = false;
    std::uint64_t seed = 0;
    std::vector<SelfMap> self;       // per type
    std::vector<Coupling> couplings; // (receiver-1)*T + (sender-1)

    double self_map(CellType t, double x) const { return self[t - 1](x); }

    double coupling(CellType receiver, CellType sender, double x, double y) const
    {
        const Coupling& h = couplings[static_cast<std::size_t>(receiver - 1) * type_count + (sender - 1)];
        return exo ? h.raw(x, y) - h.raw(x, x) : h.raw(x, y);
    }
};

inline AdmissibleFunctionSpec sample_admissible(int type_count, std::uint64_t seed, bool exo)
{
    AdmissibleFunctionSpec spec;
    spec.type_count = type_count;
    spec.exo = exo;
    spec.seed = seed;
    std::mt19937_64 rng(seed);
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    for (int t = 0; t < type_count; ++t)
        spec.self.push_back({u(-1, 1), u(-2, 2), u(0.5, 3), u(0, 2 * std::numbers::pi), u(-1, 1), u(-0.5, 0.5)});
    for (int p = 0; p < type_count * type_count; ++p) {
        AdmissibleFunctionSpec::Coupling h;
        for (auto& row : h.poly)
            for (double& v : row)
                v = u(-0.5, 0.5);
        h.amp = u(-1, 1);
        h.fx = u(-2, 2);
        h.fy = u(-2, 2);
        h.phase = u(0, 2 * std::numbers::pi);
        spec.couplings.push_back(h);
    }
    return spec;
}

inline AdmissibleFunctionSpec sample_admissible(const Network& net, std::uint64_t seed, bool exo)
{
    for (const auto& m : net.monoids())
        if (m.kind != MonoidKind::IntegerAdd)
            throw Error(ErrorKind::UnsupportedMonoid, "admissible functions need int-add weights");
    return sample_admissible(net.type_count(), seed, exo);
}

/// The same spec seen through an order-preserving type renumbering
/// (new type t is original type_map[t-1]).
inline AdmissibleFunctionSpec restrict_spec(const AdmissibleFunctionSpec& spec, const std::vector<CellType>& type_map)
{
    AdmissibleFunctionSpec out;
    out.type_count = static_cast<int>(type_map.size());
    out.exo = spec.exo;
    out.seed = spec.seed;
    for (CellType t : type_map)
        out.self.push_back(spec.self[t - 1]);
    for (CellType r : type_map)
        for (CellType s : type_map)
            out.couplings.push_back(spec.couplings[static_cast<std::size_t>(r - 1) * spec.type_count + (s - 1)]);
    return out;
}

/// Evaluates f at x. Inputs are merged by (sender type, exact state) with
/// summed weights, zero groups dropped and the rest accumulated in sorted
/// order, so the result depends only on the merged input multiset.
inline State evaluate(const Network& net, const AdmissibleFunctionSpec& spec, const State& x)
{
    if (spec.type_count != net.type_count())
        throw Error(ErrorKind::DomainMismatch, "function spec and network disagree on cell types");
    const int n = static_cast<int>(net.size());
    State out(n);
    std::vector<std::tuple<CellType, double, std::int64_t>> inputs;
    for (int c = 0; c < n; ++c) {
        inputs.clear();
        for (int d = 0; d < n; ++d) {
            if (!net.has_edge(c, d))
                continue;
            if (spec.exo && x[d] == x[c])
                continue;
            inputs.emplace_back(net.type(d), x[d], net.value(c, d));
        }
        std::sort(inputs.begin(), inputs.end(), [](const auto& a, const auto& b) {
            return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
        });
        double acc = spec.self_map(net.type(c), x[c]);
        for (std::size_t i = 0; i < inputs.size();) {
            const auto [t, s, w0] = inputs[i];
            std::int64_t w = w0;
            std::size_t j = i + 1;
            for (; j < inputs.size() && std::get<0>(inputs[j]) == t && std::get<1>(inputs[j]) == s; ++j)
                w += std::get<2>(inputs[j]);
            if (w != 0)
                acc += static_cast<double>(w) * spec.coupling(net.type(c), t, x[c], s);
            i = j;
        }
        out[c] = acc;
    }
    return out;
}

enum class Integrator { Discrete, RK4 };

struct EvolveOptions {
    Integrator mode = Integrator::Discrete;
    int steps = 100;
    double dt = 1e-3; // RK4 only
    double guard = 1e12;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    Integrator mode = Integrator::Discrete;
    double dt = 1.0;
};

/// x+ = f(x), or dx/dt = f(x) by classical RK4 with a fixed step.
inline Trajectory evolve(const Network& net, const AdmissibleFunctionSpec& spec, const State& x0,
                         const EvolveOptions& opts = {})
{
    if (x0.size() != net.size())
        throw Error(ErrorKind::DomainMismatch, "initial state has the wrong length");
    auto check = [&](const State& x) {
        for (double v : x)
            if (!std::isfinite(v) || std::abs(v) > opts.guard)
                throw Error(ErrorKind::NumericalBlowup, "state left the overflow guard");
    };
    check(x0);
    Trajectory traj;
    traj.mode = opts.mode;
    traj.dt = opts.mode == Integrator::Discrete ? 1.0 : opts.dt;
    traj.times.push_back(0.0);
    traj.states.push_back(x0);
    State x = x0, tmp(x0.size());
    for (int step = 1; step <= opts.steps; ++step) {
        if (opts.mode == Integrator::Discrete) {
            x = evaluate(net, spec, x);
        } else {
            const double h = opts.dt;
            const State k1 = evaluate(net, spec, x);
            for (std::size_t i = 0; i < x.size(); ++i)
                tmp[i] = x[i] + 0.5 * h * k1[i];
            const State k2 = evaluate(net, spec, tmp);
            for (std::size_t i = 0; i < x.size(); ++i)
                tmp[i] = x[i] + 0.5 * h * k2[i];
            const State k3 = evaluate(net, spec, tmp);
            for (std::size_t i = 0; i < x.size(); ++i)
                tmp[i] = x[i] + h * k3[i];
            const State k4 = evaluate(net, spec, tmp);
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        check(x);
        traj.times.push_back(step * traj.dt);
        traj.states.push_back(x);
    }
    return traj;
}

/// x = P xbar.
inline State lift(const State& xbar, const Partition& a)
{
    State x(a.size());
    for (std::size_t c = 0; c < a.size(); ++c)
        x[c] = xbar.at(a[c]);
    return x;
}

inline bool in_polydiagonal(const State& x, const Partition& a, double tol = 0.0)
{
    std::vector<double> first(a.rank());
    std::vector<bool> seen(a.rank(), false);
    for (std::size_t c = 0; c < a.size(); ++c) {
        const int k = a[c];
        if (!seen[k]) {
            first[k] = x[c];
            seen[k] = true;
        } else if (std::abs(x[c] - first[k]) > tol) {
            return false;
        }
    }
    return true;
}

/// Largest max-minus-min within any color.
inline double color_spread(const State& x, const Partition& a)
{
    std::vector<double> lo(a.rank(), INFINITY), hi(a.rank(), -INFINITY);
    for (std::size_t c = 0; c < a.size(); ++c) {
        lo[a[c]] = std::min(lo[a[c]], x[c]);
        hi[a[c]] = std::max(hi[a[c]], x[c]);
    }
    double s = 0;
    for (int k = 0; k < a.rank(); ++k)
        s = std::max(s, hi[k] - lo[k]);
    return s;
}

namespace detail {

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t salt, int trial)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(trial)};
    return std::mt19937_64(seq);
}

inline State random_state(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    State x(n);
    for (double& v : x)
        v = u(rng);
    return x;
}

} // namespace detail

struct CheckOptions {
    int trials = 10;
    EvolveOptions evolve{};
    double tol = 1e-9;
};

struct InvarianceReport {
    int trials = 0;
    int aborted = 0;          ///< trials stopped by the overflow guard
    double max_spread = 0.0;  ///< over all completed trials and time points
    bool invariant = true;    ///< max_spread <= tol
};

/// Starts on the polydiagonal of `a` and measures how far trajectories leave it.
inline InvarianceReport check_invariance(const Network& net, const AdmissibleFunctionSpec& spec, const Partition& a,
                                         const CheckOptions& opts = {})
{
    require_domain(net, a);
    InvarianceReport report;
    for (int t = 0; t < opts.trials; ++t) {
        auto rng = detail::trial_rng(spec.seed, 1, t);
        const State x0 = lift(detail::random_state(rng, a.rank()), a);
        ++report.trials;
        try {
            for (const State& x : evolve(net, spec, x0, opts.evolve).states)
                report.max_spread = std::max(report.max_spread, color_spread(x, a));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NumericalBlowup)
                throw;
            ++report.aborted;
        }
    }
    report.invariant = report.max_spread <= opts.tol;
    return report;
}

enum class LocalityProbe {
    Outside,  ///< perturb cells outside V_k-(c); x_c[0..k] must not change
    Boundary, ///< perturb cells at distance exactly k; x_c[k] should change
};

struct LocalityReport {
    int trials = 0;
    int perturbed_cells = 0;
    int mismatches = 0; ///< trials where x_c[0..k] differed
};

inline LocalityReport check_locality(const Network& net, const AdmissibleFunctionSpec& spec, int c, int k,
                                     int trials = 10, LocalityProbe probe = LocalityProbe::Outside)
{
    const CellSet inside = cumulative_in_k(net, c, k);
    std::vector<int> targets;
    if (probe == LocalityProbe::Outside) {
        for (int d = 0; d < static_cast<int>(net.size()); ++d)
            if (!std::binary_search(inside.begin(), inside.end(), d))
                targets.push_back(d);
    } else {
        const CellSet closer = k > 0 ? cumulative_in_k(net, c, k - 1) : CellSet{};
        std::set_difference(inside.begin(), inside.end(), closer.begin(), closer.end(), std::back_inserter(targets));
    }
    LocalityReport report;
    report.perturbed_cells = static_cast<int>(targets.size());
    EvolveOptions opts;
    opts.steps = k;
    for (int t = 0; t < trials; ++t) {
        auto rng = detail::trial_rng(spec.seed, 2, t);
        const State x0 = detail::random_state(rng, net.size());
        State y0 = x0;
        std::uniform_real_distribution<double> bump(0.25, 1.0);
        for (int d : targets)
            y0[d] += bump(rng);
        const auto a = evolve(net, spec, x0, opts);
        const auto b = evolve(net, spec, y0, opts);
        ++report.trials;
        for (int s = 0; s <= k; ++s)
            if (a.states[s][c] != b.states[s][c]) {
                ++report.mismatches;
                break;
            }
    }
    return report;
}

struct ConsistencyReport {
    int trials = 0;
    double max_deviation = 0.0;
    bool bitwise = true; ///< every compared value identical
    bool passed = true;  ///< bitwise in discrete mode, within tol otherwise
};

namespace detail {

inline void finish(ConsistencyReport& r, const CheckOptions& opts)
{
    r.passed = opts.evolve.mode == Integrator::Discrete ? r.bitwise : r.max_deviation <= opts.tol;
}

} // namespace detail

/// The induced subnetwork on R-(c) reproduces the full system restricted to it.
inline ConsistencyReport check_subsystem(const Network& net, const AdmissibleFunctionSpec& spec, int c,
                                         const CheckOptions& opts = {})
{
    const Subnetwork sub = induced_subnetwork(net, in_reachability(net, c));
    const AdmissibleFunctionSpec sub_spec = restrict_spec(spec, sub.type_map);
    ConsistencyReport report;
    for (int t = 0; t < opts.trials; ++t) {
        auto rng = detail::trial_rng(spec.seed, 3, t);
        const State x0 = detail::random_state(rng, net.size());
        State y0;
        for (int d : sub.cells)
            y0.push_back(x0[d]);
        const auto full = evolve(net, spec, x0, opts.evolve);
        const auto part = evolve(sub.network, sub_spec, y0, opts.evolve);
        ++report.trials;
        for (std::size_t s = 0; s < full.states.size(); ++s)
            for (std::size_t i = 0; i < sub.cells.size(); ++i) {
                const double a = full.states[s][sub.cells[i]], b = part.states[s][i];
                report.bitwise = report.bitwise && a == b;
                report.max_deviation = std::max(report.max_deviation, std::abs(a - b));
            }
    }
    detail::finish(report, opts);
    return report;
}

/// f on G from P xbar equals P applied to the quotient trajectory from xbar.
inline ConsistencyReport check_quotient_consistency(const Network& net, const AdmissibleFunctionSpec& spec,
                                                    const BalancedCertificate& bp, const CheckOptions& opts = {})
{
    const Network q = quotient_network(net, bp);
    ConsistencyReport report;
    for (int t = 0; t < opts.trials; ++t) {
        auto rng = detail::trial_rng(spec.seed, 4, t);
        const State xbar = detail::random_state(rng, q.size());
        const auto full = evolve(net, spec, lift(xbar, bp.partition), opts.evolve);
        const auto small = evolve(q, spec, xbar, opts.evolve);
        ++report.trials;
        for (std::size_t s = 0; s < full.states.size(); ++s)
            for (std::size_t c = 0; c < net.size(); ++c) {
                const double a = full.states[s][c], b = small.states[s][bp.partition[c]];
                report.bitwise = report.bitwise && a == b;
                report.max_deviation = std::max(report.max_deviation, std::abs(a - b));
            }
    }
    detail::finish(report, opts);
    return report;
}

} // namespace synckit
