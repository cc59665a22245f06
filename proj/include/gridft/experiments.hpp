#pragma once

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "circuits.hpp"
#include "stats.hpp"

namespace gridft {

// ---- configuration and result plumbing -------------------------------------

struct MonteCarloConfig {
    std::size_t trials = 1000;
    std::vector<double> p_grid{0.0};
    std::vector<double> sigma_grid{0.0};
    std::vector<std::size_t> M_list{10};
    std::size_t R = 1;
    std::uint64_t seed = 1;
    double confidence = 0.95;
    unsigned threads = 0;  // 0 = all cores

    void validate() const {
        if (trials < 100) throw std::domain_error("MonteCarloConfig: trials < 100");
        if (p_grid.empty() || sigma_grid.empty() || M_list.empty())
            throw std::domain_error("MonteCarloConfig: empty grid");
        for (double p : p_grid)
            if (p < 0.0 || p > 1.0) throw std::domain_error("MonteCarloConfig: p outside [0,1]");
        for (double s : sigma_grid)
            if (s < 0.0) throw std::domain_error("MonteCarloConfig: negative sigma");
        if (confidence <= 0.0 || confidence >= 1.0)
            throw std::domain_error("MonteCarloConfig: confidence outside (0,1)");
    }
};

struct SweepPoint {
    double p = 0.0, sigma = 0.0;
    std::size_t M = 0, R = 1, trials = 0;
    double error = 0.0, ci_lo = 0.0, ci_hi = 1.0;
    std::size_t neurons = 0;
    bool censored = false;
};

namespace detail {

inline void append_number(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

}  // namespace detail

inline std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::string out = "p,sigma,M,R,trials,error,ci_lo,ci_hi,neurons,censored\n";
    for (const SweepPoint& pt : points) {
        detail::append_number(out, pt.p);
        out += ',';
        detail::append_number(out, pt.sigma);
        out += ',';
        out += std::to_string(pt.M) + ',' + std::to_string(pt.R) + ',' + std::to_string(pt.trials);
        out += ',';
        detail::append_number(out, pt.error);
        out += ',';
        detail::append_number(out, pt.ci_lo);
        out += ',';
        detail::append_number(out, pt.ci_hi);
        out += ',';
        out += std::to_string(pt.neurons) + ',' + (pt.censored ? "1" : "0") + '\n';
    }
    return out;
}

// Ordered key=value sidecar describing a run.
struct Metadata {
    std::vector<std::pair<std::string, std::string>> kv;
    void add(std::string k, std::string v) { kv.emplace_back(std::move(k), std::move(v)); }
    void add(std::string k, double v) {
        std::string s;
        detail::append_number(s, v);
        add(std::move(k), std::move(s));
    }
    void add(std::string k, std::size_t v) { add(std::move(k), std::to_string(v)); }
    std::string text() const {
        std::string out;
        for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
        return out;
    }
};

struct SweepResult {
    std::vector<SweepPoint> points;
    Metadata metadata;
};

// ---- deterministic parallel scheduling --------------------------------------

// Runs fn(0..n-1) on up to `threads` workers. Work items must write only
// into their own slots; reductions over the slots are then independent of
// scheduling order.
inline void run_parallel(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    if (threads > n) threads = unsigned(n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mtx;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mtx);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---- per-trial code realizations --------------------------------------------

// Each trial draws a fresh representation scale from the seeded stream, so
// results average over the code ensemble rather than one lucky residue
// pattern. Scales stay below 2^58 so small integer multiples remain exact.
inline std::uint64_t draw_scale(RngStream& rng) {
    return 1 + rng.bounded((std::uint64_t(1) << 58) - 1);
}

// Scale redrawn until no wrong candidate pair of {0, s, 2s} has a positive
// noiseless score: with the geometric step threshold this makes wrong
// activations sit at or below zero by construction.
inline std::uint64_t draw_scale_capped(RngStream& rng, const std::vector<std::uint64_t>& moduli) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::uint64_t s = draw_scale(rng);
        if (max_wrong_pair_score(moduli, {0, s, 2 * s}) <= 0.0) return s;
    }
    throw std::runtime_error("draw_scale_capped: no admissible scale found");
}

// ---- logical error estimation ------------------------------------------------

enum class Target { NandGate, Multiplier, DecodeRoundtrip };

inline const char* target_name(Target t) {
    switch (t) {
        case Target::NandGate: return "nand";
        case Target::Multiplier: return "multiplier";
        case Target::DecodeRoundtrip: return "roundtrip";
    }
    return "?";
}

constexpr std::size_t kRoundtripCandidates = 8;

struct EstimateOptions {
    Target target = Target::NandGate;
    NoiseModel noise;
    std::size_t M = 10;
    std::size_t R = 1;
    std::size_t trials = 1000;  // total, split evenly over input assignments
    std::uint64_t seed = 1;
    unsigned threads = 0;
    double confidence = 0.95;
};

struct EstimateResult {
    SweepPoint point;  // worst-case assignment estimate; trials = per-assignment count
    std::vector<double> per_assignment;
    std::size_t worst_assignment = 0;
    std::size_t step_errors = 0;    // total across assignments
    std::size_t oracle_errors = 0;  // roundtrip only: exact-MLE errors on the same phases
};

namespace detail {

inline std::size_t assignment_count(Target t) {
    switch (t) {
        case Target::NandGate: return 4;
        case Target::Multiplier: return 16;
        case Target::DecodeRoundtrip: return kRoundtripCandidates;
    }
    return 1;
}

inline std::size_t target_neurons(Target t, std::size_t M, std::size_t R,
                                  const LogicalNetwork* net) {
    const std::size_t D = std::min<std::size_t>(kScoreReaderReplicas, R);
    switch (t) {
        case Target::NandGate:
            // two input banks, gate readers + steps + encoder bank
            return 2 * M * R + 2 * M * D + 3 * R + M * R;
        case Target::DecodeRoundtrip:
            return M * R + 2 * M * D + kRoundtripCandidates * R;
        case Target::Multiplier:
            return net ? net->physical_neurons : 0;
    }
    return 0;
}

// One NAND-gate trial: clean bits -> noisy encoder banks -> logical NAND,
// judged by the step decisions of replica 0 against the exact truth.
inline bool trial_nand(bool a, bool b, const std::vector<std::uint64_t>& moduli, std::size_t R,
                       const NoiseModel& noise, std::uint64_t trial_key) {
    RngStream scale_rng(trial_key, 0, 0);
    const std::uint64_t s = draw_scale_capped(scale_rng, moduli);
    LogicalNeuronSpec bit_spec = make_identity_spec(moduli, {0, s}, R);
    OneHotState one_a = clean_onehot(2, a ? 1 : 0, R);
    OneHotState one_b = clean_onehot(2, b ? 1 : 0, R);
    PhaseBundle in_a = neural_encode_bundle(one_a, bit_spec, noise, derive_stream(trial_key, 1));
    PhaseBundle in_b = neural_encode_bundle(one_b, bit_spec, noise, derive_stream(trial_key, 2));
    LogicalNeuronSpec gate = make_gate_spec(Gate::Nand, moduli, s, R);
    OneHotState oh =
        neural_decode_weighted({&in_a, &in_b}, gate, noise, derive_stream(trial_key, 3), 1);
    const std::size_t truth = (a ? 1u : 0u) + (b ? 1u : 0u);
    return !oh.exact_onehot(truth, 0);
}

// One encode -> decode roundtrip over the K-candidate ladder; also decodes
// the carried codeword with the exact MLE oracle for the relaxation check.
inline void trial_roundtrip(std::size_t k_true, const std::vector<std::uint64_t>& moduli,
                            std::size_t R, const NoiseModel& noise, std::uint64_t trial_key,
                            bool& step_err, bool& oracle_err) {
    RngStream scale_rng(trial_key, 0, 0);
    const std::uint64_t s = draw_scale(scale_rng);
    std::vector<std::uint64_t> candidates(kRoundtripCandidates);
    for (std::size_t k = 0; k < kRoundtripCandidates; ++k) candidates[k] = k * s;
    LogicalNeuronSpec spec = make_identity_spec(moduli, candidates, R);
    spec.geometric_threshold = false;  // ensemble policy: wrong scores average to zero
    spec.threshold_s_ref = 0.0;
    OneHotState one = clean_onehot(kRoundtripCandidates, k_true, R);
    PhaseBundle cw = neural_encode_bundle(one, spec, noise, derive_stream(trial_key, 1));
    OneHotState oh = neural_decode(cw, spec, noise, derive_stream(trial_key, 2), 1);
    step_err = !oh.exact_onehot(k_true, 0);
    oracle_err = mle_decode_values(cw.to_codeword(), moduli, candidates) != k_true;
}

inline bool trial_multiplier(const LogicalNetwork& net, const std::vector<bool>& bits,
                             const NoiseModel& noise, std::uint64_t trial_key) {
    RngStream scale_rng(trial_key, 0, 0);
    ScalePolicy policy{draw_scale(scale_rng), false, 0.0};
    NetworkEval ev = evaluate(net, bits, noise, trial_key, policy);
    return !ev.all_exact();
}

}  // namespace detail

// Worst-case logical error over all admissible input assignments, split
// evenly: each assignment runs trials/n_assignments independent trials and
// the worst assignment's Wilson interval is reported.
inline EstimateResult estimate_logical_error(const EstimateOptions& opt) {
    if (opt.trials < 100) throw std::domain_error("estimate_logical_error: trials < 100");
    if (opt.M < 1) throw std::domain_error("estimate_logical_error: M < 1");
    const std::vector<std::uint64_t> moduli = odd_prime_moduli(opt.M);
    const std::size_t n_assign = detail::assignment_count(opt.target);
    const std::size_t per = std::max<std::size_t>(1, opt.trials / n_assign);

    LogicalNetwork net;
    if (opt.target == Target::Multiplier) net = compile(build_multiplier(), moduli, opt.R);

    // chunked over (assignment, trial range); counts land in per-item slots
    unsigned threads = opt.threads ? opt.threads : std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    std::size_t chunks = std::max<std::size_t>(1, (4 * threads) / n_assign);
    chunks = std::min(chunks, per);
    struct Item {
        std::size_t assignment, t0, t1;
    };
    std::vector<Item> items;
    for (std::size_t a = 0; a < n_assign; ++a)
        for (std::size_t ch = 0; ch < chunks; ++ch) {
            std::size_t t0 = per * ch / chunks, t1 = per * (ch + 1) / chunks;
            if (t0 < t1) items.push_back({a, t0, t1});
        }
    std::vector<std::size_t> errs(items.size(), 0), oracle_errs(items.size(), 0);

    run_parallel(items.size(), threads, [&](std::size_t it) {
        const Item& item = items[it];
        const std::uint64_t assign_key = derive_stream(opt.seed, item.assignment);
        std::size_t e = 0, oe = 0;
        for (std::size_t t = item.t0; t < item.t1; ++t) {
            const std::uint64_t trial_key = derive_stream(assign_key, t);
            switch (opt.target) {
                case Target::NandGate: {
                    bool a = item.assignment & 1, b = item.assignment & 2;
                    e += detail::trial_nand(a, b, moduli, opt.R, opt.noise, trial_key);
                    break;
                }
                case Target::DecodeRoundtrip: {
                    bool se = false, oerr = false;
                    detail::trial_roundtrip(item.assignment, moduli, opt.R, opt.noise, trial_key,
                                            se, oerr);
                    e += se;
                    oe += oerr;
                    break;
                }
                case Target::Multiplier: {
                    std::vector<bool> bits(4);
                    for (std::size_t i = 0; i < 4; ++i) bits[i] = (item.assignment >> i) & 1;
                    e += detail::trial_multiplier(net, bits, opt.noise, trial_key);
                    break;
                }
            }
        }
        errs[it] = e;
        oracle_errs[it] = oe;
    });

    std::vector<std::size_t> err_by_assign(n_assign, 0);
    std::size_t step_total = 0, oracle_total = 0;
    for (std::size_t it = 0; it < items.size(); ++it) {
        err_by_assign[items[it].assignment] += errs[it];
        step_total += errs[it];
        oracle_total += oracle_errs[it];
    }

    EstimateResult res;
    res.per_assignment.resize(n_assign);
    std::size_t worst = 0;
    for (std::size_t a = 0; a < n_assign; ++a) {
        res.per_assignment[a] = double(err_by_assign[a]) / double(per);
        if (err_by_assign[a] > err_by_assign[worst]) worst = a;
    }
    res.worst_assignment = worst;
    res.step_errors = step_total;
    res.oracle_errors = oracle_total;

    Interval ci = binomial_interval(err_by_assign[worst], per, opt.confidence);
    res.point.p = opt.noise.p_fail;
    res.point.sigma = opt.noise.sigma;
    res.point.M = opt.M;
    res.point.R = opt.R;
    res.point.trials = per;
    res.point.error = res.per_assignment[worst];
    res.point.ci_lo = ci.lo;
    res.point.ci_hi = ci.hi;
    res.point.neurons = detail::target_neurons(opt.target, opt.M, opt.R,
                                               opt.target == Target::Multiplier ? &net : nullptr);
    return res;
}

// ---- minimal-M fitting -------------------------------------------------------

struct FitOptions {
    Target target = Target::DecodeRoundtrip;
    std::vector<double> sigmas{0.0, 0.05, 0.1, 0.15};
    std::vector<double> epsilons{0.1, 0.03, 0.01};
    double p_fail = 0.0;
    std::size_t R = 1;
    std::size_t trials = 10000;
    std::size_t M_budget = 64;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    double confidence = 0.95;
};

struct MOfEpsCell {
    double sigma = 0.0, eps = 0.0;
    std::size_t M_min = 0;
    bool censored = false;
    double error = 0.0;
    Interval ci;
    std::size_t trials = 0;
    std::size_t neurons = 0;
};

struct MOfEpsResult {
    std::vector<MOfEpsCell> cells;   // per (sigma, eps)
    std::vector<SweepPoint> probes;  // every (sigma, M) point actually measured
    // global least squares of ln M - ln((1+2s^2) ln(1/eps)) = a*s^2 + b
    double fitted_a = 0.0, intercept = 0.0, r2 = 0.0;
    // slope of mean ln M between pairs of positive sigmas (the structural
    // consistency check for the exponential factor)
    std::vector<double> pairwise_a;
    double pairwise_spread = 0.0;
    LinearFit sigma0_fit;  // M_min vs ln(1/eps) at sigma = 0
    bool has_sigma0 = false;
};

// For each (sigma, eps): bisect the minimal M in [1, M_budget] whose
// worst-case logical error is <= eps; probe results are cached per sigma and
// keyed by (seed, sigma index, M) so the outcome is independent of probe
// order. Unreachable targets are reported censored at the budget.
inline MOfEpsResult fit_M_of_eps(const FitOptions& opt) {
    if (opt.sigmas.size() < 3 || opt.epsilons.size() < 3)
        throw std::domain_error("fit_M_of_eps: need at least 3 sigmas and 3 epsilons");
    if (opt.M_budget < 2 || opt.M_budget > 256)
        throw std::domain_error("fit_M_of_eps: M budget outside [2,256]");

    MOfEpsResult res;
    for (std::size_t si = 0; si < opt.sigmas.size(); ++si) {
        const double sigma = opt.sigmas[si];
        std::map<std::size_t, EstimateResult> cache;
        auto probe = [&](std::size_t M) -> const EstimateResult& {
            auto it = cache.find(M);
            if (it != cache.end()) return it->second;
            EstimateOptions eo;
            eo.target = opt.target;
            eo.noise = NoiseModel{sigma, opt.p_fail};
            eo.M = M;
            eo.R = opt.R;
            eo.trials = opt.trials;
            eo.seed = derive_stream(opt.seed, si, M);
            eo.threads = opt.threads;
            eo.confidence = opt.confidence;
            return cache.emplace(M, estimate_logical_error(eo)).first->second;
        };

        for (double eps : opt.epsilons) {
            MOfEpsCell cell;
            cell.sigma = sigma;
            cell.eps = eps;
            const EstimateResult& top = probe(opt.M_budget);
            if (top.point.error > eps) {
                cell.M_min = opt.M_budget;
                cell.censored = true;
                cell.error = top.point.error;
                cell.ci = Interval{top.point.ci_lo, top.point.ci_hi};
                cell.trials = top.point.trials;
                cell.neurons = top.point.neurons;
                res.cells.push_back(cell);
                continue;
            }
            std::size_t lo = 1, hi = opt.M_budget;  // err(hi) <= eps
            if (probe(1).point.error <= eps) {
                hi = 1;
            } else {
                while (hi - lo > 1) {
                    std::size_t mid = lo + (hi - lo) / 2;
                    if (probe(mid).point.error <= eps)
                        hi = mid;
                    else
                        lo = mid;
                }
            }
            const EstimateResult& at = probe(hi);
            cell.M_min = hi;
            cell.error = at.point.error;
            cell.ci = Interval{at.point.ci_lo, at.point.ci_hi};
            cell.trials = at.point.trials;
            cell.neurons = at.point.neurons;
            res.cells.push_back(cell);
        }
        for (const auto& [M, er] : cache) res.probes.push_back(er.point);
    }

    // global structural fit over non-censored cells
    std::vector<double> xs, ys;
    for (const MOfEpsCell& c : res.cells) {
        if (c.censored) continue;
        xs.push_back(c.sigma * c.sigma);
        ys.push_back(std::log(double(c.M_min)) -
                     std::log((1.0 + 2.0 * c.sigma * c.sigma) * std::log(1.0 / c.eps)));
    }
    if (xs.size() >= 2) {
        bool varies = false;
        for (double x : xs)
            if (std::abs(x - xs.front()) > 1e-15) varies = true;
        if (varies) {
            LinearFit f = linear_fit(xs, ys);
            res.fitted_a = f.slope;
            res.intercept = f.intercept;
            res.r2 = f.r2;
        }
    }

    // pairwise slopes between positive sigmas with complete columns
    std::vector<std::pair<double, double>> col;  // (sigma, mean ln M adjusted)
    for (std::size_t si = 0; si < opt.sigmas.size(); ++si) {
        const double sigma = opt.sigmas[si];
        if (sigma <= 0.0) continue;
        double acc = 0.0;
        std::size_t n = 0;
        bool complete = true;
        for (const MOfEpsCell& c : res.cells)
            if (c.sigma == sigma) {
                if (c.censored) complete = false;
                acc += std::log(double(c.M_min)) - std::log(std::log(1.0 / c.eps));
                ++n;
            }
        if (complete && n > 0)
            col.emplace_back(sigma, acc / double(n) - std::log(1.0 + 2.0 * sigma * sigma));
    }
    for (std::size_t i = 0; i < col.size(); ++i)
        for (std::size_t j = i + 1; j < col.size(); ++j) {
            double dx = col[j].first * col[j].first - col[i].first * col[i].first;
            if (std::abs(dx) > 1e-15)
                res.pairwise_a.push_back((col[j].second - col[i].second) / dx);
        }
    if (res.pairwise_a.size() >= 2) {
        double lo = res.pairwise_a[0], hi = lo, mean_a = 0.0;
        for (double a : res.pairwise_a) {
            lo = std::min(lo, a);
            hi = std::max(hi, a);
            mean_a += a;
        }
        mean_a /= double(res.pairwise_a.size());
        res.pairwise_spread = mean_a != 0.0 ? (hi - lo) / std::abs(mean_a) : 0.0;
    }

    // sigma = 0 column: minimal M against ln(1/eps)
    std::vector<double> x0, y0;
    for (const MOfEpsCell& c : res.cells)
        if (c.sigma == 0.0 && !c.censored) {
            x0.push_back(std::log(1.0 / c.eps));
            y0.push_back(double(c.M_min));
        }
    if (x0.size() >= 2) {
        res.sigma0_fit = linear_fit(x0, y0);
        res.has_sigma0 = true;
    }
    return res;
}

// Multiplier neuron-count scaling: minimal-M bisection on the compiled
// multiplier, then structural fits of the physical neuron count.
struct ScalingResult {
    MOfEpsResult base;
    struct EpsFit {
        double eps = 0.0;
        LinearFit fit;  // ln(neurons) vs sigma^2
        std::size_t n_points = 0;
    };
    std::vector<EpsFit> log_neuron_fits;
    LinearFit sigma0_neurons_fit;  // neurons vs ln(1/eps) at sigma = 0
    bool has_sigma0 = false;
};

inline ScalingResult neurons_vs_error_scaling(FitOptions opt) {
    opt.target = Target::Multiplier;
    ScalingResult res;
    res.base = fit_M_of_eps(opt);
    for (double eps : opt.epsilons) {
        std::vector<double> xs, ys;
        for (const MOfEpsCell& c : res.base.cells)
            if (c.eps == eps && !c.censored) {
                xs.push_back(c.sigma * c.sigma);
                ys.push_back(std::log(double(c.neurons)));
            }
        if (xs.size() >= 2) {
            bool varies = false;
            for (double x : xs)
                if (std::abs(x - xs.front()) > 1e-15) varies = true;
            if (varies)
                res.log_neuron_fits.push_back({eps, linear_fit(xs, ys), xs.size()});
        }
    }
    std::vector<double> x0, y0;
    for (const MOfEpsCell& c : res.base.cells)
        if (c.sigma == 0.0 && !c.censored) {
            x0.push_back(std::log(1.0 / c.eps));
            y0.push_back(double(c.neurons));
        }
    if (x0.size() >= 2) {
        res.sigma0_neurons_fit = linear_fit(x0, y0);
        res.has_sigma0 = true;
    }
    return res;
}

// ---- phase diagram -----------------------------------------------------------

struct PhaseDiagramOptions {
    std::vector<double> p_grid{0.0};
    std::vector<double> sigma_grid{0.0};
    std::size_t M = 10;
    std::size_t R = 3000;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    double confidence = 0.95;
};

struct PhaseDiagramResult {
    std::vector<SweepPoint> points;  // sigma-major: for each sigma, all p
    std::vector<std::pair<double, double>> boundary;  // interpolated (p, sigma) crossings
    double threshold = 0.0;
};

// Classifies each (p, sigma) grid point by the worst-case logical NAND error
// against the reliable-computation threshold, and interpolates the crossing
// along each row and column.
inline PhaseDiagramResult phase_diagram(const PhaseDiagramOptions& opt,
                                        const std::function<void(std::size_t, std::size_t)>&
                                            progress = {}) {
    if (opt.p_grid.empty() || opt.sigma_grid.empty())
        throw std::domain_error("phase_diagram: empty grid");
    for (double p : opt.p_grid)
        if (p < 0.0 || p > 1.0) throw std::domain_error("phase_diagram: p outside [0,1]");
    for (double s : opt.sigma_grid)
        if (s < 0.0) throw std::domain_error("phase_diagram: negative sigma");

    PhaseDiagramResult res;
    res.threshold = ep_threshold();
    const std::size_t np = opt.p_grid.size(), ns = opt.sigma_grid.size();
    res.points.resize(np * ns);
    std::size_t done = 0;
    for (std::size_t si = 0; si < ns; ++si) {
        for (std::size_t pi = 0; pi < np; ++pi) {
            EstimateOptions eo;
            eo.target = Target::NandGate;
            eo.noise = NoiseModel{opt.sigma_grid[si], opt.p_grid[pi]};
            eo.M = opt.M;
            eo.R = opt.R;
            eo.trials = opt.trials;
            eo.seed = derive_stream(opt.seed, si * np + pi);
            eo.threads = opt.threads;
            eo.confidence = opt.confidence;
            res.points[si * np + pi] = estimate_logical_error(eo).point;
            if (progress) progress(++done, np * ns);
        }
    }

    auto lerp_cross = [&](double x0, double e0, double x1, double e1) {
        if (e1 == e0) return x0;
        return x0 + (res.threshold - e0) * (x1 - x0) / (e1 - e0);
    };
    for (std::size_t si = 0; si < ns; ++si)
        for (std::size_t pi = 0; pi + 1 < np; ++pi) {
            double e0 = res.points[si * np + pi].error, e1 = res.points[si * np + pi + 1].error;
            if (e0 <= res.threshold && e1 > res.threshold)
                res.boundary.emplace_back(
                    lerp_cross(opt.p_grid[pi], e0, opt.p_grid[pi + 1], e1), opt.sigma_grid[si]);
        }
    for (std::size_t pi = 0; pi < np; ++pi)
        for (std::size_t si = 0; si + 1 < ns; ++si) {
            double e0 = res.points[si * np + pi].error, e1 = res.points[(si + 1) * np + pi].error;
            if (e0 <= res.threshold && e1 > res.threshold)
                res.boundary.emplace_back(
                    opt.p_grid[pi],
                    lerp_cross(opt.sigma_grid[si], e0, opt.sigma_grid[si + 1], e1));
        }
    return res;
}

}  // namespace gridft
