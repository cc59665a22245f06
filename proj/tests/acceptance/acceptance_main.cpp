// Acceptance gate: eight end-to-end criteria, each printing one
// "[PASS] criterion N" or "[FAIL] criterion N" line. Run all by default or
// a single one with --criterion N. Exit status 0 iff everything passed.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "gridft/experiments.hpp"

using namespace gridft;
using Clock = std::chrono::steady_clock;

namespace {

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void note(const char* fmt, ...) {
    std::va_list args;
    va_start(args, fmt);
    std::printf("  note: ");
    std::vfprintf(stdout, fmt, args);
    std::printf("\n");
    va_end(args);
    std::fflush(stdout);
}

// ---- 1: noiseless exactness --------------------------------------------------

bool criterion1() {
    auto t0 = Clock::now();
    const std::vector<std::uint64_t> mods{3, 5, 7};
    NoiseModel quiet;

    std::vector<std::uint64_t> all(105);
    for (std::size_t x = 0; x < all.size(); ++x) all[x] = x;
    GridCode code(mods, 105, all);
    const EncoderFn id = EncoderFn::make_identity();
    for (std::uint64_t x = 0; x < 105; ++x)
        if (mle_decode_oracle(encode(x, id, code), code) != x) return false;

    for (Gate g : {Gate::And, Gate::Or, Gate::Xor, Gate::Nand}) {
        LogicalNeuronSpec spec = make_gate_spec(g, mods, 1, 1);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                Codeword out = logical_neuron_forward(
                    {encode(std::uint64_t(a), id, code), encode(std::uint64_t(b), id, code)},
                    spec, quiet, derive_stream(1, std::uint64_t(4 * a + b)));
                Codeword want = encode(gate_truth(g, a, b) ? 1 : 0, id, code);
                for (std::size_t j = 0; j < mods.size(); ++j)
                    if (circular_distance(out[j], want[j]) > 1e-9) return false;
            }
    }

    LogicalNetwork net = compile(build_multiplier(), mods, 1);
    ScalePolicy unit{1, true, 0.0};
    for (unsigned a = 0; a < 4; ++a)
        for (unsigned b = 0; b < 4; ++b) {
            std::vector<bool> bits{bool(a & 1), bool(a & 2), bool(b & 1), bool(b & 2)};
            NetworkEval ev = evaluate(net, bits, quiet, derive_stream(2, a * 4 + b), unit);
            if (!ev.all_exact()) return false;
            unsigned p = a * b;
            for (unsigned k = 0; k < 4; ++k)
                if (ev.bits[k] != bool(p & (1u << k))) return false;
        }

    double dt = elapsed(t0);
    note("noiseless sweep took %.3f s", dt);
    return dt < 1.0;
}

// ---- 2: minimal modulus count against the error target ------------------------

bool criterion2() {
    FitOptions fo;  // sigmas {0,0.05,0.1,0.15}, epsilons {0.1,0.03,0.01}, 1e4 trials
    fo.seed = 1;
    MOfEpsResult res = fit_M_of_eps(fo);
    note("sigma0 fit: slope=%.3f r2=%.4f", res.sigma0_fit.slope, res.sigma0_fit.r2);
    note("pairwise a spread=%.3f over %zu pairs (global a=%.3f r2=%.3f)", res.pairwise_spread,
         res.pairwise_a.size(), res.fitted_a, res.r2);
    for (const MOfEpsCell& c : res.cells)
        if (c.censored) note("censored cell at sigma=%.2f eps=%.2f", c.sigma, c.eps);
    return res.has_sigma0 && res.sigma0_fit.r2 > 0.95 && res.pairwise_a.size() >= 3 &&
           res.pairwise_spread <= 0.20;
}

// ---- 3: physical neuron count scaling on the compiled multiplier --------------

bool criterion3() {
    FitOptions fo;
    fo.R = 6;
    fo.trials = 20000;
    fo.seed = 1;
    ScalingResult res = neurons_vs_error_scaling(fo);
    if (res.log_neuron_fits.size() != fo.epsilons.size()) {
        note("only %zu of %zu eps rows fitted (censoring)", res.log_neuron_fits.size(),
             fo.epsilons.size());
        return false;
    }
    bool ok = res.has_sigma0;
    for (const auto& ef : res.log_neuron_fits) {
        note("eps=%.2f: ln(neurons) vs sigma^2 slope=%.2f r2=%.4f (%zu pts)", ef.eps,
             ef.fit.slope, ef.fit.r2, ef.n_points);
        ok = ok && ef.fit.r2 > 0.9;
    }
    note("sigma0: neurons vs ln(1/eps) slope=%.1f r2=%.4f", res.sigma0_neurons_fit.slope,
         res.sigma0_neurons_fit.r2);
    return ok && res.sigma0_neurons_fit.r2 > 0.9;
}

// ---- 4: phase-boundary anchors at high redundancy ------------------------------

double nand_error(double sigma, double p, std::size_t trials, std::uint64_t seed,
                  Interval* ci = nullptr, double confidence = 0.95) {
    EstimateOptions eo;
    eo.target = Target::NandGate;
    eo.noise = NoiseModel{sigma, p};
    eo.M = 10;
    eo.R = 3000;
    eo.trials = trials;
    eo.seed = seed;
    eo.confidence = confidence;
    EstimateResult r = estimate_logical_error(eo);
    if (ci) *ci = Interval{r.point.ci_lo, r.point.ci_hi};
    return r.point.error;
}

bool criterion4() {
    Interval ci;
    double anchor = nand_error(0.5, 0.5, 2000, 1, &ci, 0.99);
    note("error at (sigma,p)=(0.5,0.5): %.4f, 99%% CI [%.4f,%.4f]", anchor, ci.lo, ci.hi);
    bool ok = ci.hi < 0.09;

    const double thr = ep_threshold();
    auto bisect = [&](auto err_at, double lo, double hi, const char* label,
                      double* out) -> bool {
        double e_lo = err_at(lo, 100), e_hi = err_at(hi, 101);
        note("%s bracket: err(%.3f)=%.4f err(%.3f)=%.4f thr=%.4f", label, lo, e_lo, hi, e_hi,
             thr);
        if (!(e_lo <= thr && e_hi > thr)) return false;
        for (int it = 0; it < 6; ++it) {
            double mid = 0.5 * (lo + hi);
            if (err_at(mid, 102 + it) > thr)
                hi = mid;
            else
                lo = mid;
        }
        *out = 0.5 * (lo + hi);
        note("%s crossing at %.3f", label, *out);
        return true;
    };

    double sig_cross = 0.0, p_cross = 0.0;
    bool oks = bisect([&](double s, std::uint64_t k) { return nand_error(s, 0.0, 800, k); }, 0.8,
                      2.0, "sigma axis", &sig_cross);
    ok = ok && oks && sig_cross >= 1.1 && sig_cross <= 1.7;
    bool okp = bisect([&](double p, std::uint64_t k) { return nand_error(0.0, p, 800, 200 + k); },
                      0.4, 0.95, "p axis", &p_cross);
    return ok && okp && p_cross >= 0.55 && p_cross <= 0.85;
}

// ---- 5: sharp error transition without redundancy ------------------------------

bool criterion5() {
    const std::vector<double> grid{0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
    std::vector<double> errs;
    std::vector<Interval> cis;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EstimateOptions eo;
        eo.target = Target::NandGate;
        eo.noise = NoiseModel{grid[i], 0.0};
        eo.M = 10;
        eo.R = 1;
        eo.trials = 4000;
        eo.seed = derive_stream(5000, i);
        EstimateResult r = estimate_logical_error(eo);
        errs.push_back(r.point.error);
        cis.push_back(Interval{r.point.ci_lo, r.point.ci_hi});
        note("sigma=%.2f error=%.4f [%.4f,%.4f]", grid[i], errs[i], cis[i].lo, cis[i].hi);
    }

    double last_low = -1.0, first_high = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (errs[i] < 0.01) last_low = grid[i];
        if (first_high < 0.0 && errs[i] > 0.5) first_high = grid[i];
    }
    if (last_low < 0.0 || first_high < 0.0) {
        note("transition not bracketed by the grid");
        return false;
    }
    note("window: %.2f (quiet through %.2f, failed from %.2f)", first_high - last_low, last_low,
         first_high);
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i)
        if (errs[i + 1] < errs[i] && cis[i + 1].hi < cis[i].lo) monotone = false;
    return monotone && (first_high - last_low) < 1.0;
}

// ---- 6: digital multiplexing dichotomy -----------------------------------------

bool criterion6() {
    if (std::abs(ep_threshold() - (3.0 - std::sqrt(7.0)) / 4.0) >= 1e-12) return false;

    // a chain deep enough that supercritical gate noise drives the bundles
    // to the polarity-forgetting fixed point
    BooleanFormula base = parse_formula("(NAND (NAND (NAND (NAND a b) c) d) e)");
    const int n_assign = 32;
    auto worst_error = [&](int level, double eps, Interval* ci) {
        BooleanFormula net = ep_nand_concatenate(base, level, 0xD1);
        const std::size_t trials = 100000;
        std::size_t worst = 0;
        for (int assign = 0; assign < n_assign; ++assign) {
            std::vector<bool> in(5);
            for (int i = 0; i < 5; ++i) in[std::size_t(i)] = (assign >> i) & 1;
            bool truth = eval_formula_exact(base, in);
            RngStream rng(derive_stream(0xC6, std::uint64_t(level),
                                        std::uint64_t(assign + (eps < 0.1 ? 0 : n_assign))));
            std::size_t bad = 0;
            for (std::size_t t = 0; t < trials; ++t)
                bad += simulate_formula(net, in, eps, rng) != truth;
            worst = std::max(worst, bad);
        }
        *ci = binomial_interval(worst, trials, 0.99);
        return double(worst) / double(trials);
    };

    bool ok = true;
    std::vector<Interval> low(4), high(4);
    for (int level = 1; level <= 3; ++level) {
        double e_low = worst_error(level, 0.04, &low[std::size_t(level)]);
        double e_high = worst_error(level, 0.2, &high[std::size_t(level)]);
        note("level %d: err(0.04)=%.5f [%.5f,%.5f]  err(0.2)=%.4f [%.4f,%.4f]", level, e_low,
             low[std::size_t(level)].lo, low[std::size_t(level)].hi, e_high,
             high[std::size_t(level)].lo, high[std::size_t(level)].hi);
    }
    for (int level = 1; level < 3; ++level) {
        // below threshold: strictly decreasing, 99% CIs disjoint
        ok = ok && low[std::size_t(level + 1)].hi < low[std::size_t(level)].lo;
        // above threshold: non-decreasing up to CI overlap
        ok = ok && high[std::size_t(level + 1)].hi >= high[std::size_t(level)].lo;
    }
    return ok;
}

// ---- 7: averaging only suppresses analog noise as 1/sqrt(R) --------------------

bool criterion7() {
    NoiseModel nm(1.0, 0.0);
    const std::size_t D = 64;
    const std::vector<std::size_t> Rs{10, 100, 1000};
    const std::vector<std::size_t> ns{10000, 10000, 70000};
    const double v = 0.3;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < Rs.size(); ++i) {
        double acc = 0.0;
        for (std::size_t t = 0; t < ns[i]; ++t) {
            std::uint64_t tk = derive_stream(11, t * 3 + i);
            PhaseBundle b = repetition_expand(Codeword{v}, Rs[i], nm, derive_stream(tk, 0));
            double S = 0.0, Q = 0.0;
            for (std::size_t d = 0; d < D; ++d) {
                double delta = repetition_average_raw(b, 0, nm, derive_stream(tk, 1 + d)) - v;
                S += delta;
                Q += delta * delta;
            }
            acc += (S * S - Q) / double(D * (D - 1));
        }
        double cov = acc / double(ns[i]);
        if (cov <= 0.0) return false;
        lx.push_back(std::log(double(Rs[i])));
        ly.push_back(0.5 * std::log(cov));
    }
    LinearFit f = linear_fit(lx, ly);
    note("post-averaging noise slope=%.4f r2=%.4f", f.slope, f.r2);
    return std::abs(f.slope + 0.5) < 0.05 && f.r2 > 0.99;
}

// ---- 8: byte-identical reruns across thread counts ------------------------------

bool criterion8() {
    auto csv_of = [](Target target, std::size_t R, std::size_t trials, unsigned threads) {
        EstimateOptions eo;
        eo.target = target;
        eo.noise = NoiseModel{0.3, 0.1};
        eo.M = 4;
        eo.R = R;
        eo.trials = trials;
        eo.seed = 7;
        eo.threads = threads;
        return sweep_csv({estimate_logical_error(eo).point});
    };
    bool ok = true;
    for (Target target : {Target::NandGate, Target::Multiplier, Target::DecodeRoundtrip}) {
        std::size_t trials = target == Target::Multiplier ? 320 : 400;
        std::string one = csv_of(target, 2, trials, 1);
        for (unsigned threads : {2u, 4u, 8u})
            ok = ok && csv_of(target, 2, trials, threads) == one;
        note("%s rerun stable across 1/2/4/8 threads: %s", target_name(target),
             ok ? "yes" : "no");
        if (!ok) break;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }

    bool (*checks[])() = {criterion1, criterion2, criterion3, criterion4,
                          criterion5, criterion6, criterion7, criterion8};
    int failures = 0;
    for (int n = 1; n <= 8; ++n) {
        if (only != 0 && n != only) continue;
        auto t0 = Clock::now();
        bool pass = false;
        try {
            pass = checks[n - 1]();
        } catch (const std::exception& e) {
            note("criterion %d threw: %s", n, e.what());
        }
        std::printf("[%s] criterion %d\n", pass ? "PASS" : "FAIL", n);
        std::fflush(stdout);
        note("criterion %d took %.1f s", n, elapsed(t0));
        failures += !pass;
    }
    return failures == 0 ? 0 : 1;
}
