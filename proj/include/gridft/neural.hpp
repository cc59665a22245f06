#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "grid_code.hpp"
#include "noise.hpp"

namespace gridft {

// Phases travel between logical stages as bundles of R replicas per modulus.
// Replica carriers are raw reals, not reduced mod 1: every consumer is
// 1-periodic in the properly weighted sums, and leaving the carriers
// unwrapped is what makes replica averaging a linear statistic (a wrapped
// noisy replica cannot be averaged without wrap-around bias). Public
// Codeword surfaces wrap.
struct PhaseBundle {
    std::size_t M = 0;
    std::size_t R = 1;
    std::vector<double> v;  // v[j*R + r]

    PhaseBundle() = default;
    PhaseBundle(std::size_t M_, std::size_t R_) : M(M_), R(R_), v(M_ * R_, 0.0) {}

    static PhaseBundle from_codeword(const Codeword& cw) {
        PhaseBundle b(cw.size(), 1);
        b.v = cw;
        return b;
    }

    double replica(std::size_t j, std::size_t r) const { return v[j * R + r]; }
    double& replica(std::size_t j, std::size_t r) { return v[j * R + r]; }

    // Per-modulus replica mean, wrapped: the codeword this bundle carries.
    Codeword to_codeword() const {
        Codeword cw(M);
        for (std::size_t j = 0; j < M; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < R; ++r) s += v[j * R + r];
            cw[j] = wrap01(s / double(R));
        }
        return cw;
    }
};

// Decoded layer: per candidate, R step neurons. `fired` holds the threshold
// decisions; `values` the transmitted activations (decision plus the step
// neuron's own output noise); `sums` the pre-activation inputs, kept for
// readout diagnostics. In the noiseless case exactly one candidate fires.
struct OneHotState {
    std::size_t K = 0;
    std::size_t R = 1;  // replicas actually evaluated
    std::vector<double> values;
    std::vector<std::uint8_t> fired;
    std::vector<double> sums;

    OneHotState() = default;
    OneHotState(std::size_t K_, std::size_t R_)
        : K(K_), R(R_), values(K_ * R_, 0.0), fired(K_ * R_, 0), sums(K_ * R_, 0.0) {}

    // Activations of one replica (the one-hot vector that replica sees).
    std::vector<double> activations(std::size_t r = 0) const {
        std::vector<double> a(K);
        for (std::size_t k = 0; k < K; ++k) a[k] = values[k * R + r];
        return a;
    }

    bool exact_onehot(std::size_t k_true, std::size_t r = 0) const {
        for (std::size_t k = 0; k < K; ++k)
            if (bool(fired[k * R + r]) != (k == k_true)) return false;
        return true;
    }

    // Index of the unique firing candidate, or nullopt on zero/multi fire.
    std::optional<std::size_t> fired_index(std::size_t r = 0) const {
        std::optional<std::size_t> idx;
        for (std::size_t k = 0; k < K; ++k)
            if (fired[k * R + r]) {
                if (idx) return std::nullopt;
                idx = k;
            }
        return idx;
    }

    // Highest pre-activation sum: fallback readout when firing is anomalous.
    std::size_t argmax_sum(std::size_t r = 0) const {
        std::size_t best = 0;
        for (std::size_t k = 1; k < K; ++k)
            if (sums[k * R + r] > sums[best * R + r]) best = k;
        return best;
    }
};

// Architecture constants. R=1 collapses all of them to 1, recovering the
// bare grid code with a single cosine/sine reader pair per modulus.
constexpr std::size_t kScoreReaderReplicas = 2;  // D
constexpr std::size_t kPhaseFanIn = 2048;        // F, synapses per bundle read
constexpr std::size_t kOneHotFanIn = 16;         // K_w, synapses per one-hot read

// One logical neuron: integer weights applied in the codespace at the
// decoder's first synaptic layer, a decode to a one-hot layer, and a
// re-encode through the encoder activation values.
struct LogicalNeuronSpec {
    std::vector<std::uint64_t> moduli;
    std::vector<std::uint64_t> decoder_candidates;
    // e(x_k) for each decoder candidate, as exact integers (identity: the
    // candidates themselves). Kept integral so phases stay exact.
    std::vector<std::uint64_t> encoder_values;
    std::vector<long long> weights;  // a_i, one per input codeword
    // Relative phase-noise variance carried by each input bundle (1 = one
    // bare noise layer, the clean-source case). Bundles produced by a noisy
    // one-hot layer carry extra transmitted-value noise; the compiler knows
    // the producing stage and calibrates the consumer accordingly.
    // Empty means all ones.
    std::vector<double> input_noise_scale;
    std::size_t R = 1;

    std::size_t score_reader_replicas = 0;  // 0 -> default
    std::size_t phase_fan_in = 0;
    std::size_t onehot_fan_in = 0;

    // Step threshold reference: the geometric default clears the actual
    // worst wrong-candidate score of the code, which is what makes
    // noiseless decoding exact. Random-code ensembles override with an
    // explicit reference (0 = the ensemble mean of wrong scores).
    bool geometric_threshold = true;
    double threshold_s_ref = 0.0;

    std::size_t M() const { return moduli.size(); }
    std::size_t K() const { return decoder_candidates.size(); }
    std::size_t D() const {
        std::size_t d = score_reader_replicas ? score_reader_replicas : kScoreReaderReplicas;
        return std::min(d, R);
    }
    std::size_t F() const {
        std::size_t f = phase_fan_in ? phase_fan_in : kPhaseFanIn;
        return std::min(f, R);
    }
    std::size_t Kw() const {
        std::size_t k = onehot_fan_in ? onehot_fan_in : kOneHotFanIn;
        return std::min(k, R);
    }

    double sum_sq_weights() const {
        double s = 0.0;
        for (long long a : weights) s += double(a) * double(a);
        return s;
    }

    double s_ref() const {
        return geometric_threshold ? max_wrong_pair_score(moduli, decoder_candidates)
                                   : threshold_s_ref;
    }

    void validate() const {
        if (moduli.empty()) throw std::domain_error("LogicalNeuronSpec: no moduli");
        if (decoder_candidates.empty()) throw std::domain_error("LogicalNeuronSpec: no candidates");
        if (encoder_values.size() != decoder_candidates.size())
            throw std::domain_error("LogicalNeuronSpec: encoder values misaligned");
        if (!input_noise_scale.empty() && input_noise_scale.size() != weights.size())
            throw std::domain_error("LogicalNeuronSpec: noise scales misaligned");
        if (R < 1) throw std::domain_error("LogicalNeuronSpec: R < 1");
    }
};

inline LogicalNeuronSpec make_identity_spec(std::vector<std::uint64_t> moduli,
                                            std::vector<std::uint64_t> candidates,
                                            std::size_t R = 1) {
    LogicalNeuronSpec s;
    s.moduli = std::move(moduli);
    s.decoder_candidates = candidates;
    s.encoder_values = std::move(candidates);
    s.weights = {1};
    s.R = R;
    return s;
}

// Phase-noise variance, relative to sigma^2, carried by a bundle this spec
// produces from a noisy one-hot layer: the encoder's own output noise plus
// the transmitted one-hot values' noise pushed through the phase table.
// Each nonzero encoder value contributes E[((e mod lam)/lam)^2] ~ 1/3 under
// the random-scale ensemble, averaged down by the K_w sampled reads. Bundles
// encoded from clean one-hot sources carry exactly 1.
inline double carried_noise_scale(const LogicalNeuronSpec& spec) {
    std::size_t nz = 0;
    for (std::uint64_t v : spec.encoder_values)
        if (v != 0) ++nz;
    return 1.0 + double(nz) / (3.0 * double(spec.Kw()));
}

// Residual phase noise seen through a compensated bundle read: each of the
// F sampled replicas carries an independent N(0, sigma) from its producing
// neuron (scaled by the carried-noise factor of that input, if set), and
// integer weights a_i scale the contributions.
inline double effective_phase_sigma(const LogicalNeuronSpec& spec, const NoiseModel& noise) {
    double s = 0.0;
    for (std::size_t i = 0; i < spec.weights.size(); ++i) {
        double c = spec.input_noise_scale.empty() ? 1.0 : spec.input_noise_scale[i];
        double a = double(spec.weights[i]);
        s += a * a * c;
    }
    return noise.sigma * std::sqrt(s / double(spec.F()));
}

// Tuned step threshold: midpoint between the attenuated true-candidate
// activation (M * attenuation) and the worst wrong-candidate reference,
// both scaled by the same attenuation. Synaptic failures do not appear
// here because every masked read is compensated by 1/(1-p), which holds
// expected activations at their p=0 design points.
inline double step_threshold(const LogicalNeuronSpec& spec, const NoiseModel& noise) {
    double att = attenuation_factor(effective_phase_sigma(spec, noise));
    return att * (double(spec.M()) + spec.s_ref()) / 2.0;
}

namespace detail {

constexpr std::uint64_t kTagReader = 1;   // cosine/sine reader neurons
constexpr std::uint64_t kTagStep = 2;     // step neurons
constexpr std::uint64_t kTagEncoder = 3;  // encoder phase neurons
constexpr std::uint64_t kTagExpand = 4;   // repetition replicas
constexpr std::uint64_t kTagAverage = 5;  // averaging neurons

// Compensated masked mean of F sampled replicas of one modulus row.
// F == R reads every replica once; F < R samples with replacement.
inline double masked_mean_read(const PhaseBundle& b, std::size_t j, std::size_t F,
                               const NoiseModel& noise, RngStream& rng, double comp) {
    const double* row = b.v.data() + j * b.R;
    double acc = 0.0;
    if (F == b.R) {
        for (std::size_t t = 0; t < F; ++t)
            if (sample_synapse(rng, noise)) acc += row[t];
    } else {
        for (std::size_t t = 0; t < F; ++t) {
            std::size_t idx = std::size_t(rng.bounded(b.R));
            if (sample_synapse(rng, noise)) acc += row[idx];
        }
    }
    return acc * comp / double(F);
}

}  // namespace detail

// The decoder with logical weights fused into its first synaptic layer.
//
// Per modulus j, D replica pairs of reader neurons measure the weighted sum
// u_j = sum_i a_i * <bundle_i phases> through compensated sampled synapses
// and output cos(2*pi*u_j) and sin(2*pi*u_j) plus their own noise. K*R step
// neurons then correlate the readers against each candidate's exact phases
// (cos(A - B) expanded through one cosine and one sine synapse per reader
// pair) and fire on clearing the tuned threshold. A step neuron's own
// Gaussian noise rides its transmitted 0/1 activation, downstream of the
// decision.
//
// eval_replicas limits how many step replicas are materialized (0 = all).
// Per-neuron derived substreams make the result of the evaluated replicas
// independent of how many others are computed; only harnesses with no
// downstream consumer may truncate.
inline OneHotState neural_decode_weighted(const std::vector<const PhaseBundle*>& inputs,
                                          const LogicalNeuronSpec& spec, const NoiseModel& noise,
                                          std::uint64_t stream_key, std::size_t eval_replicas = 0) {
    spec.validate();
    if (inputs.size() != spec.weights.size())
        throw std::domain_error("neural_decode_weighted: input count != weight count");
    const std::size_t M = spec.M(), K = spec.K(), D = spec.D(), F = spec.F(), R = spec.R;
    for (const PhaseBundle* b : inputs) {
        if (b->M != M) throw std::domain_error("neural_decode_weighted: modulus count mismatch");
        if (b->R != R) throw std::domain_error("neural_decode_weighted: replica count mismatch");
    }
    const std::size_t R_eval = eval_replicas == 0 ? R : std::min(eval_replicas, R);
    const double comp = failure_compensation(noise.p_fail);
    const double theta = step_threshold(spec, noise);
    constexpr double tau = 2.0 * std::numbers::pi;

    std::vector<double> C(M * D), S(M * D);
    for (std::size_t j = 0; j < M; ++j) {
        for (std::size_t d = 0; d < D; ++d) {
            RngStream rs(stream_key, detail::kTagReader, j * D + d);
            double u = 0.0;
            for (std::size_t i = 0; i < inputs.size(); ++i)
                u += double(spec.weights[i]) *
                     detail::masked_mean_read(*inputs[i], j, F, noise, rs, comp);
            C[j * D + d] = std::cos(tau * u) + sample_output_noise(rs, noise);
            S[j * D + d] = std::sin(tau * u) + sample_output_noise(rs, noise);
        }
    }

    std::vector<double> ck(K * M), sk(K * M);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j < M; ++j) {
            double ph = tau * integer_phase(spec.decoder_candidates[k], spec.moduli[j]);
            ck[k * M + j] = std::cos(ph);
            sk[k * M + j] = std::sin(ph);
        }

    OneHotState out(K, R_eval);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t r = 0; r < R_eval; ++r) {
            RngStream rs(stream_key, detail::kTagStep, k * R + r);
            double sum = 0.0;
            for (std::size_t j = 0; j < M; ++j) {
                const double c = ck[k * M + j], s = sk[k * M + j];
                for (std::size_t d = 0; d < D; ++d) {
                    if (sample_synapse(rs, noise)) sum += c * C[j * D + d];
                    if (sample_synapse(rs, noise)) sum += s * S[j * D + d];
                }
            }
            sum *= comp / double(D);
            const bool fire = sum > theta;
            const std::size_t idx = k * R_eval + r;
            out.sums[idx] = sum;
            out.fired[idx] = fire ? 1 : 0;
            out.values[idx] = (fire ? 1.0 : 0.0) + sample_output_noise(rs, noise);
        }
    }
    return out;
}

// Spec-level decode of a single (already weighted-summed) codeword bundle.
inline OneHotState neural_decode(const PhaseBundle& phi, const LogicalNeuronSpec& spec,
                                 const NoiseModel& noise, std::uint64_t stream_key,
                                 std::size_t eval_replicas = 0) {
    LogicalNeuronSpec unit = spec;
    unit.weights = {1};
    return neural_decode_weighted({&phi}, unit, noise, stream_key, eval_replicas);
}

inline OneHotState neural_decode(const Codeword& phi, const LogicalNeuronSpec& spec,
                                 const NoiseModel& noise, std::uint64_t stream_key) {
    return neural_decode(PhaseBundle::from_codeword(phi), spec, noise, stream_key);
}

// Encoder bank: M*R phase neurons. Neuron (j, r) estimates each candidate's
// one-hot activation through K_w compensated sampled synapses and emits the
// weighted phase sum(k) est_k * (e(x_k) mod lam_j)/lam_j plus its own noise,
// as a raw carrier.
inline PhaseBundle neural_encode_bundle(const OneHotState& state, const LogicalNeuronSpec& spec,
                                        const NoiseModel& noise, std::uint64_t stream_key) {
    spec.validate();
    if (state.K != spec.K()) throw std::domain_error("neural_encode_bundle: one-hot size mismatch");
    const std::size_t M = spec.M(), K = spec.K(), R = spec.R;
    const std::size_t Kw = std::min(spec.Kw(), state.R);
    const double comp = failure_compensation(noise.p_fail);

    // exact phases of the encoder values
    std::vector<double> pe(K * M);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j < M; ++j)
            pe[k * M + j] = integer_phase(spec.encoder_values[k], spec.moduli[j]);

    // Replica-constant rows (clean one-hot inputs) need no index sampling:
    // only the synapse mask count matters, and all-zero rows contribute
    // nothing at all. Value-identical to the general path, and deterministic
    // because the shortcut is a function of the state being read.
    std::vector<std::uint8_t> row_const(K, 0);
    std::vector<double> row_value(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        const double* row = state.values.data() + k * state.R;
        bool uniform = true;
        for (std::size_t r = 1; r < state.R && uniform; ++r) uniform = row[r] == row[0];
        row_const[k] = uniform ? 1 : 0;
        row_value[k] = row[0];
    }

    PhaseBundle out(M, R);
    for (std::size_t j = 0; j < M; ++j) {
        for (std::size_t r = 0; r < R; ++r) {
            RngStream rs(stream_key, detail::kTagEncoder, j * R + r);
            double phase = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                double acc = 0.0;
                if (row_const[k]) {
                    if (row_value[k] != 0.0) {
                        std::size_t alive = 0;
                        for (std::size_t t = 0; t < Kw; ++t) alive += sample_synapse(rs, noise);
                        acc = double(alive) * row_value[k];
                    }
                } else {
                    const double* row = state.values.data() + k * state.R;
                    if (Kw == state.R) {
                        for (std::size_t t = 0; t < Kw; ++t)
                            if (sample_synapse(rs, noise)) acc += row[t];
                    } else {
                        for (std::size_t t = 0; t < Kw; ++t) {
                            std::size_t idx = std::size_t(rs.bounded(state.R));
                            if (sample_synapse(rs, noise)) acc += row[idx];
                        }
                    }
                }
                phase += pe[k * M + j] * acc * comp / double(Kw);
            }
            out.replica(j, r) = phase + sample_output_noise(rs, noise);
        }
    }
    return out;
}

// Spec-level encode: one-hot state to a (wrapped) codeword through an
// encoder activation given as an EncoderFn over the candidate list.
inline Codeword neural_encode(const OneHotState& state, const EncoderFn& e, const GridCode& code,
                              const NoiseModel& noise, std::uint64_t stream_key) {
    if (state.K != code.candidate_values.size())
        throw std::domain_error("neural_encode: one-hot size != candidate count");
    const std::size_t M = code.M();
    Codeword out(M);
    for (std::size_t j = 0; j < M; ++j) {
        RngStream rs(stream_key, detail::kTagEncoder, j);
        double phase = 0.0;
        for (std::size_t k = 0; k < state.K; ++k) {
            double contrib = 0.0;
            if (sample_synapse(rs, noise)) contrib = state.values[k * state.R];
            phase += contrib * failure_compensation(noise.p_fail) *
                     wrap01(e(code.candidate_values[k]) / double(code.moduli[j]));
        }
        out[j] = wrap01(phase + sample_output_noise(rs, noise));
    }
    return out;
}

// Full logical neuron: weighted decode, then re-encode through the spec's
// encoder values. The repetition average lives inside the decoder's bundle
// reads (averaging happens before the cosine nonlinearity).
inline PhaseBundle logical_neuron_forward(const std::vector<const PhaseBundle*>& inputs,
                                          const LogicalNeuronSpec& spec, const NoiseModel& noise,
                                          std::uint64_t stream_key) {
    OneHotState oh = neural_decode_weighted(inputs, spec, noise, derive_stream(stream_key, 0));
    return neural_encode_bundle(oh, spec, noise, derive_stream(stream_key, 1));
}

inline Codeword logical_neuron_forward(const std::vector<Codeword>& inputs,
                                       const LogicalNeuronSpec& spec, const NoiseModel& noise,
                                       std::uint64_t stream_key) {
    std::vector<PhaseBundle> bundles;
    bundles.reserve(inputs.size());
    for (const Codeword& cw : inputs) bundles.push_back(PhaseBundle::from_codeword(cw));
    std::vector<const PhaseBundle*> ptrs;
    for (const PhaseBundle& b : bundles) ptrs.push_back(&b);
    return logical_neuron_forward(ptrs, spec, noise, stream_key).to_codeword();
}

// Error-corrected fan-out: one decode, then n independent encoder banks.
inline std::vector<PhaseBundle> copy_codeword(const PhaseBundle& phi, std::size_t n_copies,
                                              const LogicalNeuronSpec& spec,
                                              const NoiseModel& noise, std::uint64_t stream_key) {
    if (n_copies < 1) throw std::domain_error("copy_codeword: n_copies < 1");
    OneHotState oh = neural_decode(phi, spec, noise, derive_stream(stream_key, 0));
    std::vector<PhaseBundle> copies;
    copies.reserve(n_copies);
    for (std::size_t c = 0; c < n_copies; ++c)
        copies.push_back(neural_encode_bundle(oh, spec, noise, derive_stream(stream_key, 1 + c)));
    return copies;
}

// Repetition expansion: R physical replicas of each phase neuron, each a
// single compensated masked synapse plus fresh output noise, on raw carriers.
inline PhaseBundle repetition_expand(const Codeword& phi, std::size_t R, const NoiseModel& noise,
                                     std::uint64_t stream_key) {
    if (R < 1) throw std::domain_error("repetition_expand: R < 1");
    PhaseBundle out(phi.size(), R);
    const double comp = failure_compensation(noise.p_fail);
    for (std::size_t j = 0; j < phi.size(); ++j)
        for (std::size_t r = 0; r < R; ++r) {
            RngStream rs(stream_key, detail::kTagExpand, j * R + r);
            double v = sample_synapse(rs, noise) ? comp * phi[j] : 0.0;
            out.replica(j, r) = v + sample_output_noise(rs, noise);
        }
    return out;
}

// Repetition averaging: per modulus, one neuron computes the compensated
// masked mean of the R replica carriers (a linear statistic; carriers are
// raw, so no wrap bias) plus its own output noise, and wraps the result for
// the public codeword surface.
inline Codeword repetition_average(const PhaseBundle& expanded, const NoiseModel& noise,
                                   std::uint64_t stream_key) {
    Codeword out(expanded.M);
    const double comp = failure_compensation(noise.p_fail);
    for (std::size_t j = 0; j < expanded.M; ++j) {
        RngStream rs(stream_key, detail::kTagAverage, j);
        double acc = 0.0;
        for (std::size_t r = 0; r < expanded.R; ++r)
            if (sample_synapse(rs, noise)) acc += expanded.replica(j, r);
        acc = acc * comp / double(expanded.R);
        out[j] = wrap01(acc + sample_output_noise(rs, noise));
    }
    return out;
}

// Same, but returning the raw (unwrapped) average: used by the noise
// scaling experiments, where the quantity of interest is the residual
// deviation of the linear mean itself.
inline double repetition_average_raw(const PhaseBundle& expanded, std::size_t j,
                                     const NoiseModel& noise, std::uint64_t stream_key) {
    RngStream rs(stream_key, detail::kTagAverage, j);
    const double comp = failure_compensation(noise.p_fail);
    double acc = 0.0;
    for (std::size_t r = 0; r < expanded.R; ++r)
        if (sample_synapse(rs, noise)) acc += expanded.replica(j, r);
    return acc * comp / double(expanded.R) + sample_output_noise(rs, noise);
}

// Boolean gates realized as encoder activations over decoder candidates
// {0, s, 2s} (the sum of two unit-weighted bits at representation scale s).
enum class Gate { And, Or, Xor, Nand };

inline const char* gate_name(Gate g) {
    switch (g) {
        case Gate::And: return "AND";
        case Gate::Or: return "OR";
        case Gate::Xor: return "XOR";
        case Gate::Nand: return "NAND";
    }
    return "?";
}

inline std::array<std::uint64_t, 3> gate_unit_values(Gate g) {
    switch (g) {
        case Gate::And: return {0, 0, 1};
        case Gate::Or: return {0, 1, 1};
        case Gate::Xor: return {0, 1, 0};
        case Gate::Nand: return {1, 1, 0};
    }
    throw std::domain_error("gate_unit_values: unknown gate");
}

inline bool gate_truth(Gate g, bool a, bool b) {
    switch (g) {
        case Gate::And: return a && b;
        case Gate::Or: return a || b;
        case Gate::Xor: return a != b;
        case Gate::Nand: return !(a && b);
    }
    throw std::domain_error("gate_truth: unknown gate");
}

// Spec-level encoder function for a gate at unit scale: e over inputs
// (0,1,2) counting how many of the two unit-weighted input bits are set.
inline EncoderFn gate_encoder_fn(Gate g) {
    auto vals = gate_unit_values(g);
    return EncoderFn::from_table(
        {{0, double(vals[0])}, {1, double(vals[1])}, {2, double(vals[2])}});
}

// Gate logical neuron at representation scale `scale` (bit b is carried as
// the codeword of scale*b).
inline LogicalNeuronSpec make_gate_spec(Gate g, std::vector<std::uint64_t> moduli,
                                        std::uint64_t scale, std::size_t R = 1) {
    if (scale == 0) throw std::domain_error("make_gate_spec: zero scale");
    LogicalNeuronSpec s;
    s.moduli = std::move(moduli);
    s.decoder_candidates = {0, scale, 2 * scale};
    auto units = gate_unit_values(g);
    s.encoder_values = {units[0] * scale, units[1] * scale, units[2] * scale};
    s.weights = {1, 1};
    s.R = R;
    return s;
}

// Clean one-hot input (the given, noise-free network input layer).
inline OneHotState clean_onehot(std::size_t K, std::size_t k_true, std::size_t R = 1) {
    OneHotState s(K, R);
    for (std::size_t r = 0; r < R; ++r) {
        s.values[k_true * R + r] = 1.0;
        s.fired[k_true * R + r] = 1;
        s.sums[k_true * R + r] = 1.0;
    }
    return s;
}

}  // namespace gridft
