// Command-line front end: each experiment is a subcommand that writes a CSV
// plus a metadata sidecar from which the run can be reproduced exactly.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridft/experiments.hpp"

#ifndef GRIDFT_GIT_REV
#define GRIDFT_GIT_REV "unknown"
#endif

namespace {

using namespace gridft;
namespace fs = std::filesystem;

// configuration / usage problems exit with status 2
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = strip(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw UsageError("not a number: '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw UsageError("not a non-negative integer: '" + s + "'");
    }
    if (pos != s.size() || (!s.empty() && s[0] == '-'))
        throw UsageError("not a non-negative integer: '" + s + "'");
    return v;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    for (const std::string& item : split_commas(s)) out.push_back(parse_double(item));
    if (out.empty()) throw UsageError("empty list: '" + s + "'");
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    for (const std::string& item : split_commas(s)) out.push_back(parse_u64(item));
    if (out.empty()) throw UsageError("empty list: '" + s + "'");
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        detail::append_number(s, v[i]);
    }
    return s;
}

// Flat key=value settings from --config files and --set flags. A CLI flag
// that was given explicitly still wins; keys nobody consumed are errors.
class ConfigPool {
  public:
    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read config file: " + path);
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line)) {
            ++n;
            std::string s = strip(line);
            if (s.empty() || s[0] == '#') continue;
            std::size_t eq = s.find('=');
            if (eq == std::string::npos)
                throw UsageError("config line " + std::to_string(n) + " is not key=value: " + s);
            kv_[strip(s.substr(0, eq))] = strip(s.substr(eq + 1));
        }
    }

    void add_set(const std::string& s) {
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got: " + s);
        std::string k = strip(s.substr(0, eq));
        if (k.empty()) throw UsageError("--set expects key=value, got: " + s);
        kv_[k] = strip(s.substr(eq + 1));
    }

    const std::string* lookup(const std::string& key) const {
        used_.insert(key);
        auto it = kv_.find(key);
        return it == kv_.end() ? nullptr : &it->second;
    }

    // flag wins if present on the command line, config fills in otherwise
    void apply(const CLI::Option* flag, const std::string& key, std::string& value) const {
        const std::string* v = lookup(key);
        if (v && (!flag || flag->count() == 0)) value = *v;
    }
    void apply(const CLI::Option* flag, const std::string& key, double& value) const {
        const std::string* v = lookup(key);
        if (v && (!flag || flag->count() == 0)) value = parse_double(*v);
    }
    void apply(const CLI::Option* flag, const std::string& key, std::uint64_t& value) const {
        const std::string* v = lookup(key);
        if (v && (!flag || flag->count() == 0)) value = parse_u64(*v);
    }
    void apply(const CLI::Option* flag, const std::string& key, unsigned& value) const {
        const std::string* v = lookup(key);
        if (v && (!flag || flag->count() == 0)) value = unsigned(parse_u64(*v));
    }
    void apply(const CLI::Option* flag, const std::string& key, bool& value) const {
        const std::string* v = lookup(key);
        if (v && (!flag || flag->count() == 0)) {
            if (*v == "1" || *v == "true")
                value = true;
            else if (*v == "0" || *v == "false")
                value = false;
            else
                throw UsageError("config value for '" + key + "' must be 0/1/true/false");
        }
    }

    void finish() const {
        for (const auto& [k, v] : kv_)
            if (!used_.count(k)) throw UsageError("unknown config key '" + k + "'");
    }

  private:
    std::map<std::string, std::string> kv_;
    mutable std::set<std::string> used_;
};

// Options shared by every experiment subcommand.
struct CommonArgs {
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = all cores
    std::size_t trials = 1000;
    std::string out_dir;
    std::string config_path;
    std::vector<std::string> sets;

    CLI::Option *o_seed = nullptr, *o_threads = nullptr, *o_trials = nullptr, *o_out = nullptr;

    void attach(CLI::App* cmd) {
        o_seed = cmd->add_option("--seed", seed, "master RNG seed")->capture_default_str();
        o_threads = cmd->add_option("--threads", threads, "worker threads (0 = all cores)")
                        ->capture_default_str();
        o_trials = cmd->add_option("--trials", trials, "Monte Carlo trials per grid point")
                       ->capture_default_str();
        o_out = cmd->add_option("--out-dir", out_dir,
                                "output directory (default: $GRIDFT_OUT or current dir)");
        cmd->add_option("--config", config_path, "flat key=value config file; flags override");
        cmd->add_option("--set", sets, "inline config entry key=value (repeatable)");
    }

    ConfigPool pool() const {
        ConfigPool pool;
        if (!config_path.empty()) pool.load_file(config_path);
        for (const std::string& s : sets) pool.add_set(s);
        return pool;
    }

    // precedence: --out-dir flag, then GRIDFT_OUT, then config, then "."
    void resolve(const ConfigPool& pool) {
        pool.apply(o_seed, "seed", seed);
        pool.apply(o_threads, "threads", threads);
        pool.apply(o_trials, "trials", trials);
        std::string cfg_out;
        pool.apply(nullptr, "out_dir", cfg_out);
        if (o_out && o_out->count() > 0) {
            // keep the flag value
        } else if (const char* env = std::getenv("GRIDFT_OUT"); env && *env) {
            out_dir = env;
        } else if (!cfg_out.empty()) {
            out_dir = cfg_out;
        }
        if (out_dir.empty()) out_dir = ".";
        if (trials == 0) throw UsageError("trials must be positive");
    }

    void echo(Metadata& meta) const {
        meta.add("seed", std::to_string(seed));
        meta.add("threads", std::to_string(threads));
        meta.add("trials", trials);
        meta.add("out_dir", out_dir);
    }
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec && !fs::is_directory(p))
        throw std::runtime_error("cannot create output directory: " + dir);
    return p;
}

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void finish_run(const fs::path& dir, const std::string& name, const std::string& csv,
                Metadata& meta, const Stopwatch& watch) {
    meta.add("git_revision", std::string(GRIDFT_GIT_REV));
    meta.add("wall_seconds", watch.seconds());
    write_file(dir / (name + ".csv"), csv);
    write_file(dir / (name + ".meta.txt"), meta.text());
    std::cerr << "wrote " << (dir / (name + ".csv")).string() << "\n";
}

// ---- roundtrip ---------------------------------------------------------------

struct RoundtripArgs {
    std::string moduli = "3,5,7";
    std::uint64_t x = 7;
    double sigma = 0.0;
    double p = 0.0;
    std::size_t R = 1;
    std::uint64_t seed = 1;
};

int cmd_roundtrip(const RoundtripArgs& a) {
    std::vector<std::uint64_t> moduli = parse_u64_list(a.moduli);
    const std::uint64_t X = clamped_moduli_product(moduli);
    if (X > (std::uint64_t(1) << 20))
        throw UsageError("moduli product too large for the demo; use a smaller code");
    GridCode code(moduli, X);
    if (a.x >= X)
        throw UsageError("x = " + std::to_string(a.x) + " outside the code domain [0, " +
                         std::to_string(X) + ")");
    NoiseModel noise(a.sigma, a.p);

    Codeword clean = encode(a.x, EncoderFn{}, code);
    std::cout << "moduli:";
    for (std::uint64_t m : moduli) std::cout << ' ' << m;
    std::cout << "  (domain [0, " << X << "))\n";
    std::cout << "x = " << a.x << "\nclean phases: ";
    for (double f : clean) std::cout << ' ' << f;
    std::cout << '\n';

    RngStream rng(a.seed);
    Codeword noisy = clean;
    for (double& f : noisy) f = wrap01(f + noise.sigma * rng.gaussian());
    std::cout << "noisy phases: ";
    for (double f : noisy) std::cout << ' ' << f;
    std::cout << '\n';

    // exact scores of the top candidates
    std::vector<std::pair<double, std::uint64_t>> ranked;
    ranked.reserve(code.candidate_values.size());
    for (std::uint64_t c : code.candidate_values)
        ranked.push_back(std::make_pair(score(c, noisy, code), c));
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& l, const auto& r) { return l.first > r.first; });
    std::cout << "top scores:\n";
    for (std::size_t i = 0; i < ranked.size() && i < 5; ++i)
        std::cout << "  x = " << ranked[i].second << "  score = " << ranked[i].first << '\n';

    std::uint64_t oracle = mle_decode_oracle(noisy, code);
    std::cout << "oracle decode: " << oracle << (oracle == a.x ? "" : "  (wrong)") << '\n';

    LogicalNeuronSpec spec = make_identity_spec(moduli, code.candidate_values, a.R);
    std::cout << "step threshold: " << step_threshold(spec, noise) << "\n";
    OneHotState oh = neural_decode(noisy, spec, noise, derive_stream(a.seed, 1));
    auto fired = oh.fired_index(0);
    if (fired) {
        std::uint64_t v = code.candidate_values[*fired];
        std::cout << "neural decode: " << v << (v == a.x ? "" : "  (wrong)") << '\n';
    } else {
        std::uint64_t v = code.candidate_values[oh.argmax_sum(0)];
        std::cout << "neural decode: anomalous one-hot, best activation at " << v << '\n';
    }
    return 0;
}

// ---- nand-sweep --------------------------------------------------------------

struct NandSweepArgs {
    std::string p = "0", sigma = "0";
    std::size_t M = 10;
    std::size_t R = 3000;
    double confidence = 0.95;
};

int cmd_nand_sweep(CommonArgs& common, NandSweepArgs& a, const CLI::Option* o_p,
                   const CLI::Option* o_sigma, const CLI::Option* o_M, const CLI::Option* o_R,
                   const CLI::Option* o_conf) {
    ConfigPool pool = common.pool();
    pool.apply(o_p, "p", a.p);
    pool.apply(o_sigma, "sigma", a.sigma);
    pool.apply(o_M, "M", a.M);
    pool.apply(o_R, "R", a.R);
    pool.apply(o_conf, "confidence", a.confidence);
    common.resolve(pool);
    pool.finish();

    std::vector<double> ps = parse_double_list(a.p);
    std::vector<double> sigmas = parse_double_list(a.sigma);
    Stopwatch watch;
    fs::path dir = prepare_out_dir(common.out_dir);

    std::vector<SweepPoint> points;
    const std::size_t total = ps.size() * sigmas.size();
    std::size_t idx = 0;
    for (double s : sigmas) {
        for (double p : ps) {
            EstimateOptions eo;
            eo.target = Target::NandGate;
            eo.noise = NoiseModel(s, p);
            eo.M = a.M;
            eo.R = a.R;
            eo.trials = common.trials;
            eo.seed = derive_stream(common.seed, idx);
            eo.threads = common.threads;
            eo.confidence = a.confidence;
            SweepPoint pt = estimate_logical_error(eo).point;
            points.push_back(pt);
            ++idx;
            std::cerr << "point " << idx << "/" << total << ": p=" << p << " sigma=" << s
                      << " error=" << pt.error << "\n";
        }
    }

    Metadata meta;
    meta.add("subcommand", "nand-sweep");
    common.echo(meta);
    meta.add("p", a.p);
    meta.add("sigma", a.sigma);
    meta.add("M", a.M);
    meta.add("R", a.R);
    meta.add("confidence", a.confidence);
    finish_run(dir, "nand_sweep", sweep_csv(points), meta, watch);
    return 0;
}

// ---- multiplier / m-of-eps ---------------------------------------------------

struct FitArgs {
    std::string sigma = "0,0.05,0.1,0.15";
    std::string eps = "0.1,0.03,0.01";
    double p = 0.0;
    std::size_t R = 0;  // filled per subcommand
    std::size_t m_budget = 64;
    double confidence = 0.95;

    CLI::Option *o_sigma = nullptr, *o_eps = nullptr, *o_p = nullptr, *o_R = nullptr,
                *o_budget = nullptr, *o_conf = nullptr;

    void attach(CLI::App* cmd, std::size_t default_R) {
        R = default_R;
        o_sigma = cmd->add_option("--sigma", sigma, "comma-separated noise std grid")
                      ->capture_default_str();
        o_eps = cmd->add_option("--eps", eps, "comma-separated error targets")
                    ->capture_default_str();
        o_p = cmd->add_option("--p", p, "synaptic failure probability")->capture_default_str();
        o_R = cmd->add_option("--R", R, "repetition replicas per phase")->capture_default_str();
        o_budget = cmd->add_option("--m-budget", m_budget, "largest M the bisection may use")
                       ->capture_default_str();
        o_conf = cmd->add_option("--confidence", confidence, "CI confidence level")
                     ->capture_default_str();
    }

    FitOptions resolve(CommonArgs& common) {
        ConfigPool pool = common.pool();
        pool.apply(o_sigma, "sigma", sigma);
        pool.apply(o_eps, "eps", eps);
        pool.apply(o_p, "p", p);
        pool.apply(o_R, "R", R);
        pool.apply(o_budget, "m_budget", m_budget);
        pool.apply(o_conf, "confidence", confidence);
        common.resolve(pool);
        pool.finish();

        FitOptions fo;
        fo.sigmas = parse_double_list(sigma);
        fo.epsilons = parse_double_list(eps);
        fo.p_fail = p;
        fo.R = R;
        fo.trials = common.trials;
        fo.M_budget = m_budget;
        fo.seed = common.seed;
        fo.threads = common.threads;
        fo.confidence = confidence;
        return fo;
    }

    void echo(Metadata& meta) const {
        meta.add("sigma", sigma);
        meta.add("eps", eps);
        meta.add("p", p);
        meta.add("R", R);
        meta.add("m_budget", m_budget);
        meta.add("confidence", confidence);
    }
};

void echo_cells(Metadata& meta, const MOfEpsResult& r) {
    for (const MOfEpsCell& c : r.cells) {
        std::string line = "sigma=";
        detail::append_number(line, c.sigma);
        line += " eps=";
        detail::append_number(line, c.eps);
        line += c.censored ? " M_min=censored" : " M_min=" + std::to_string(c.M_min);
        line += " neurons=" + std::to_string(c.neurons);
        line += " error=";
        detail::append_number(line, c.error);
        meta.add("cell", line);
    }
}

int cmd_m_of_eps(CommonArgs& common, FitArgs& args) {
    FitOptions fo = args.resolve(common);
    Stopwatch watch;
    fs::path dir = prepare_out_dir(common.out_dir);
    std::cerr << "fitting minimal M over " << fo.sigmas.size() << " x " << fo.epsilons.size()
              << " grid (roundtrip target)\n";
    MOfEpsResult r = fit_M_of_eps(fo);

    Metadata meta;
    meta.add("subcommand", "m-of-eps");
    common.echo(meta);
    args.echo(meta);
    meta.add("target", "decode-roundtrip");
    echo_cells(meta, r);
    meta.add("fitted_a", r.fitted_a);
    meta.add("fit_intercept", r.intercept);
    meta.add("fit_r2", r.r2);
    meta.add("pairwise_a", join_doubles(r.pairwise_a));
    meta.add("pairwise_spread", r.pairwise_spread);
    if (r.has_sigma0) {
        meta.add("sigma0_M_slope", r.sigma0_fit.slope);
        meta.add("sigma0_M_r2", r.sigma0_fit.r2);
    }
    finish_run(dir, "m_of_eps", sweep_csv(r.probes), meta, watch);
    return 0;
}

int cmd_multiplier(CommonArgs& common, FitArgs& args) {
    FitOptions fo = args.resolve(common);
    Stopwatch watch;
    fs::path dir = prepare_out_dir(common.out_dir);
    std::cerr << "scaling multiplier network over " << fo.sigmas.size() << " x "
              << fo.epsilons.size() << " grid\n";
    ScalingResult r = neurons_vs_error_scaling(fo);

    Metadata meta;
    meta.add("subcommand", "multiplier");
    common.echo(meta);
    args.echo(meta);
    meta.add("target", "two-bit-multiplier");
    echo_cells(meta, r.base);
    for (const auto& f : r.log_neuron_fits) {
        std::string line = "eps=";
        detail::append_number(line, f.eps);
        line += " slope=";
        detail::append_number(line, f.fit.slope);
        line += " r2=";
        detail::append_number(line, f.fit.r2);
        line += " points=" + std::to_string(f.n_points);
        meta.add("log_neurons_vs_sigma2", line);
    }
    if (r.has_sigma0) {
        meta.add("sigma0_neurons_slope", r.sigma0_neurons_fit.slope);
        meta.add("sigma0_neurons_r2", r.sigma0_neurons_fit.r2);
    }
    finish_run(dir, "multiplier", sweep_csv(r.base.probes), meta, watch);
    return 0;
}

// ---- phase-diagram -----------------------------------------------------------

struct PhaseDiagramArgs {
    std::string p = "0,0.15,0.3,0.45,0.6,0.75,0.9";
    std::string sigma = "0,0.25,0.5,0.75,1,1.25,1.5,1.75";
    std::size_t M = 10;
    std::size_t R = 3000;
    double confidence = 0.95;
    bool svg = false;
};

std::string render_svg(const PhaseDiagramResult& r, const std::vector<double>& ps,
                       const std::vector<double>& sigmas) {
    const int cell = 40, margin = 60;
    const int w = margin + cell * int(ps.size()) + 20;
    const int h = margin + cell * int(sigmas.size()) + 20;
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    for (std::size_t si = 0; si < sigmas.size(); ++si) {
        for (std::size_t pi = 0; pi < ps.size(); ++pi) {
            const SweepPoint& pt = r.points[si * ps.size() + pi];
            // blue below threshold, red above; intensity tracks the estimate
            bool ok = pt.error < r.threshold;
            double t = ok ? pt.error / r.threshold : std::min(1.0, pt.error);
            int shade = int(200 - 120 * t);
            std::string fill = ok ? "rgb(" + std::to_string(shade - 60) + "," +
                                        std::to_string(shade) + ",255)"
                                  : "rgb(255," + std::to_string(shade - 60) + "," +
                                        std::to_string(shade - 60) + ")";
            int x = margin + cell * int(pi);
            int y = margin + cell * int(sigmas.size() - 1 - si);
            svg << "<rect x='" << x << "' y='" << y << "' width='" << cell << "' height='" << cell
                << "' fill='" << fill << "' stroke='black' stroke-width='0.5'>"
                << "<title>p=" << pt.p << " sigma=" << pt.sigma << " err=" << pt.error
                << "</title></rect>\n";
        }
    }
    for (std::size_t pi = 0; pi < ps.size(); ++pi)
        svg << "<text x='" << margin + cell * int(pi) + cell / 2 << "' y='" << h - 4
            << "' font-size='10' text-anchor='middle'>" << ps[pi] << "</text>\n";
    for (std::size_t si = 0; si < sigmas.size(); ++si)
        svg << "<text x='" << margin - 6 << "' y='"
            << margin + cell * int(sigmas.size() - 1 - si) + cell / 2 + 4
            << "' font-size='10' text-anchor='end'>" << sigmas[si] << "</text>\n";
    svg << "<text x='" << margin + cell * int(ps.size()) / 2 << "' y='" << h - 20
        << "' font-size='12' text-anchor='middle'>synaptic failure p</text>\n";
    svg << "<text x='14' y='" << margin + cell * int(sigmas.size()) / 2
        << "' font-size='12' text-anchor='middle' transform='rotate(-90 14 "
        << margin + cell * int(sigmas.size()) / 2 << ")'>output noise sigma</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

int cmd_phase_diagram(CommonArgs& common, PhaseDiagramArgs& a, const CLI::Option* o_p,
                      const CLI::Option* o_sigma, const CLI::Option* o_M, const CLI::Option* o_R,
                      const CLI::Option* o_conf, const CLI::Option* o_svg) {
    ConfigPool pool = common.pool();
    pool.apply(o_p, "p", a.p);
    pool.apply(o_sigma, "sigma", a.sigma);
    pool.apply(o_M, "M", a.M);
    pool.apply(o_R, "R", a.R);
    pool.apply(o_conf, "confidence", a.confidence);
    pool.apply(o_svg, "svg", a.svg);
    common.resolve(pool);
    pool.finish();

    PhaseDiagramOptions po;
    po.p_grid = parse_double_list(a.p);
    po.sigma_grid = parse_double_list(a.sigma);
    po.M = a.M;
    po.R = a.R;
    po.trials = common.trials;
    po.seed = common.seed;
    po.threads = common.threads;
    po.confidence = a.confidence;

    Stopwatch watch;
    fs::path dir = prepare_out_dir(common.out_dir);
    PhaseDiagramResult r = phase_diagram(po, [](std::size_t done, std::size_t total) {
        std::cerr << "point " << done << "/" << total << "\n";
    });

    Metadata meta;
    meta.add("subcommand", "phase-diagram");
    common.echo(meta);
    meta.add("p", a.p);
    meta.add("sigma", a.sigma);
    meta.add("M", a.M);
    meta.add("R", a.R);
    meta.add("confidence", a.confidence);
    meta.add("threshold", r.threshold);
    for (const auto& [bp, bs] : r.boundary) {
        std::string line = "p=";
        detail::append_number(line, bp);
        line += " sigma=";
        detail::append_number(line, bs);
        meta.add("boundary", line);
    }
    if (a.svg) {
        write_file(dir / "phase_diagram.svg", render_svg(r, po.p_grid, po.sigma_grid));
        meta.add("svg", "phase_diagram.svg");
    }
    finish_run(dir, "phase_diagram", sweep_csv(r.points), meta, watch);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid-code fault-tolerant neural computation experiments"};
    app.require_subcommand(1);

    // roundtrip: encode, perturb, decode one value and show the scores
    auto* rt = app.add_subcommand("roundtrip", "encode a value, add noise, decode it");
    RoundtripArgs rt_args;
    rt->add_option("--moduli", rt_args.moduli, "comma-separated pairwise-coprime moduli")
        ->capture_default_str();
    rt->add_option("--x", rt_args.x, "value to encode")->capture_default_str();
    rt->add_option("--sigma", rt_args.sigma, "phase noise std")->capture_default_str();
    rt->add_option("--p", rt_args.p, "synaptic failure probability")->capture_default_str();
    rt->add_option("--R", rt_args.R, "repetition replicas")->capture_default_str();
    rt->add_option("--seed", rt_args.seed, "RNG seed")->capture_default_str();

    auto* ns = app.add_subcommand("nand-sweep", "logical NAND error over a (p, sigma) grid");
    CommonArgs ns_common;
    ns_common.attach(ns);
    NandSweepArgs ns_args;
    auto* ns_p = ns->add_option("--p", ns_args.p, "comma-separated synapse failure grid")
                     ->capture_default_str();
    auto* ns_sigma = ns->add_option("--sigma", ns_args.sigma, "comma-separated noise std grid")
                         ->capture_default_str();
    auto* ns_M = ns->add_option("--M", ns_args.M, "moduli count")->capture_default_str();
    auto* ns_R = ns->add_option("--R", ns_args.R, "repetition replicas")->capture_default_str();
    auto* ns_conf = ns->add_option("--confidence", ns_args.confidence, "CI confidence level")
                        ->capture_default_str();

    auto* mul = app.add_subcommand(
        "multiplier", "minimal neurons for the two-bit multiplier vs sigma and error target");
    CommonArgs mul_common;
    mul_common.attach(mul);
    FitArgs mul_args;
    mul_args.attach(mul, 6);

    auto* moe = app.add_subcommand(
        "m-of-eps", "minimal moduli count for the decode roundtrip vs sigma and error target");
    CommonArgs moe_common;
    moe_common.attach(moe);
    FitArgs moe_args;
    moe_args.attach(moe, 1);

    auto* pd = app.add_subcommand("phase-diagram",
                                  "logical NAND error over (p, sigma) with boundary extraction");
    CommonArgs pd_common;
    pd_common.attach(pd);
    PhaseDiagramArgs pd_args;
    auto* pd_p = pd->add_option("--p", pd_args.p, "comma-separated synapse failure grid")
                     ->capture_default_str();
    auto* pd_sigma = pd->add_option("--sigma", pd_args.sigma, "comma-separated noise std grid")
                         ->capture_default_str();
    auto* pd_M = pd->add_option("--M", pd_args.M, "moduli count")->capture_default_str();
    auto* pd_R = pd->add_option("--R", pd_args.R, "repetition replicas")->capture_default_str();
    auto* pd_conf = pd->add_option("--confidence", pd_args.confidence, "CI confidence level")
                        ->capture_default_str();
    auto* pd_svg = pd->add_flag("--svg", pd_args.svg, "also write an SVG heatmap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (rt->parsed()) return cmd_roundtrip(rt_args);
        if (ns->parsed())
            return cmd_nand_sweep(ns_common, ns_args, ns_p, ns_sigma, ns_M, ns_R, ns_conf);
        if (mul->parsed()) return cmd_multiplier(mul_common, mul_args);
        if (moe->parsed()) return cmd_m_of_eps(moe_common, moe_args);
        if (pd->parsed())
            return cmd_phase_diagram(pd_common, pd_args, pd_p, pd_sigma, pd_M, pd_R, pd_conf,
                                     pd_svg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
