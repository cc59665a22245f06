#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "digital_ft.hpp"
#include "neural.hpp"

namespace gridft {

// Gate-level circuit over boolean wires. Wire ids: [0, n_inputs) are input
// bits, wire n_inputs + i is the output of node i. Nodes are stored in
// topological order.
struct Circuit {
    struct Node {
        Gate g;
        int a, b;  // input wire ids
    };
    std::size_t n_inputs = 0;
    std::vector<Node> nodes;
    std::vector<int> outputs;  // wire ids

    std::size_t n_wires() const { return n_inputs + nodes.size(); }

    void validate() const {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].a < 0 || std::size_t(nodes[i].a) >= n_inputs + i ||
                nodes[i].b < 0 || std::size_t(nodes[i].b) >= n_inputs + i)
                throw std::domain_error("Circuit: node reads an undefined wire");
        }
        if (outputs.empty()) throw std::domain_error("Circuit: no outputs");
        for (int o : outputs)
            if (o < 0 || std::size_t(o) >= n_wires())
                throw std::domain_error("Circuit: output wire out of range");
    }

    std::vector<bool> wire_values(const std::vector<bool>& bits) const {
        if (bits.size() != n_inputs) throw std::domain_error("Circuit: input arity mismatch");
        std::vector<bool> v(n_wires());
        for (std::size_t i = 0; i < n_inputs; ++i) v[i] = bits[i];
        for (std::size_t i = 0; i < nodes.size(); ++i)
            v[n_inputs + i] = gate_truth(nodes[i].g, v[std::size_t(nodes[i].a)],
                                         v[std::size_t(nodes[i].b)]);
        return v;
    }

    std::vector<bool> eval(const std::vector<bool>& bits) const {
        std::vector<bool> v = wire_values(bits);
        std::vector<bool> out;
        out.reserve(outputs.size());
        for (int o : outputs) out.push_back(v[std::size_t(o)]);
        return out;
    }
};

// Two-bit multiplier (a1 a0) * (b1 b0) = c3 c2 c1 c0: four partial-product
// ANDs, then an XOR/AND half-adder pair for the middle bits and the carry.
inline Circuit build_multiplier() {
    Circuit c;
    c.n_inputs = 4;  // a0, a1, b0, b1
    const int a0 = 0, a1 = 1, b0 = 2, b1 = 3;
    auto add = [&](Gate g, int x, int y) {
        c.nodes.push_back({g, x, y});
        return int(c.n_inputs + c.nodes.size() - 1);
    };
    int p00 = add(Gate::And, a0, b0);  // c0
    int p01 = add(Gate::And, a0, b1);
    int p10 = add(Gate::And, a1, b0);
    int p11 = add(Gate::And, a1, b1);
    int c1 = add(Gate::Xor, p01, p10);
    int carry = add(Gate::And, p01, p10);
    int c2 = add(Gate::Xor, p11, carry);
    int c3 = add(Gate::And, p11, carry);
    c.outputs = {p00, c1, c2, c3};
    return c;
}

inline Circuit circuit_from_formula(const BooleanFormula& f) {
    f.validate();
    Circuit c;
    c.n_inputs = f.input_names.size();
    if (c.n_inputs == 0) throw std::domain_error("circuit_from_formula: formula has no inputs");
    std::vector<int> wire(f.nodes.size());
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
        const auto& nd = f.nodes[i];
        if (nd.is_gate()) {
            c.nodes.push_back({Gate::Nand, wire[std::size_t(nd.a)], wire[std::size_t(nd.b)]});
            wire[i] = int(c.n_inputs + c.nodes.size() - 1);
        } else {
            wire[i] = nd.literal;
        }
    }
    for (int o : f.outputs) c.outputs.push_back(wire[std::size_t(o)]);
    return c;
}

// Per-trial code realization for a compiled network: one representation
// scale shared by every gate (a bit b travels as the codeword of scale*b),
// plus the step threshold policy.
struct ScalePolicy {
    std::uint64_t scale = 1;
    bool geometric_threshold = true;
    double s_ref = 0.0;  // used when !geometric_threshold
};

// A circuit compiled onto logical neurons: every gate becomes decode +
// re-encode, every wire with fan-out >= 2 feeds a copy gadget (one decode,
// one encoder bank per consumer), and each input bit gets one encoder bank
// per consumer (the given bits are error-free, so their fan-out is free at
// the one-hot layer).
struct LogicalNetwork {
    Circuit circuit;
    std::vector<std::uint64_t> moduli;
    std::size_t R = 1;
    std::size_t physical_neurons = 0;

    std::vector<std::size_t> consumers;             // per wire
    std::vector<std::array<std::size_t, 2>> slot;   // per gate: consumer slot of each input read
    std::vector<std::uint8_t> is_output;            // per wire

    // deterministic stream ids, assigned at compile time
    std::vector<std::uint64_t> input_bank_id;       // flattened; offset via input_bank_off
    std::vector<std::size_t> input_bank_off;        // per input wire
    std::vector<std::uint64_t> gate_decode_id, gate_encode_id, copy_decode_id;
    std::vector<std::uint64_t> copy_bank_id;        // flattened; offset via copy_bank_off
    std::vector<std::size_t> copy_bank_off;         // per gate
};

inline LogicalNetwork compile(const Circuit& circuit, std::vector<std::uint64_t> moduli,
                              std::size_t R) {
    circuit.validate();
    if (R < 1) throw std::domain_error("compile: R < 1");
    // moduli validated by grid-code rules (coprimality etc.)
    GridCode probe(moduli, 2, std::vector<std::uint64_t>{0, 1});

    LogicalNetwork net;
    net.circuit = circuit;
    net.moduli = std::move(moduli);
    net.R = R;

    const std::size_t W = circuit.n_wires();
    net.consumers.assign(W, 0);
    net.slot.resize(circuit.nodes.size());
    for (std::size_t i = 0; i < circuit.nodes.size(); ++i) {
        net.slot[i][0] = net.consumers[std::size_t(circuit.nodes[i].a)]++;
        net.slot[i][1] = net.consumers[std::size_t(circuit.nodes[i].b)]++;
    }
    net.is_output.assign(W, 0);
    for (int o : circuit.outputs) {
        if (std::size_t(o) < circuit.n_inputs)
            throw std::domain_error("compile: output must be a gate wire");
        net.is_output[std::size_t(o)] = 1;
    }

    const std::size_t M = net.moduli.size();
    const std::size_t D = std::min<std::size_t>(kScoreReaderReplicas, R);
    std::uint64_t next_id = 1;
    std::size_t neurons = 0;

    net.input_bank_off.assign(circuit.n_inputs + 1, 0);
    for (std::size_t w = 0; w < circuit.n_inputs; ++w) {
        net.input_bank_off[w] = net.input_bank_id.size();
        for (std::size_t s = 0; s < net.consumers[w]; ++s) {
            net.input_bank_id.push_back(next_id++);
            neurons += M * R;
        }
    }
    net.input_bank_off[circuit.n_inputs] = net.input_bank_id.size();

    net.gate_decode_id.resize(circuit.nodes.size());
    net.gate_encode_id.resize(circuit.nodes.size());
    net.copy_decode_id.assign(circuit.nodes.size(), 0);
    net.copy_bank_off.assign(circuit.nodes.size() + 1, 0);
    for (std::size_t i = 0; i < circuit.nodes.size(); ++i) {
        net.copy_bank_off[i] = net.copy_bank_id.size();
        net.gate_decode_id[i] = next_id++;
        net.gate_encode_id[i] = next_id++;
        neurons += 2 * M * D;  // cosine/sine readers
        neurons += 3 * R;      // step neurons over candidates {0, s, 2s}
        neurons += M * R;      // encoder bank
        const std::size_t fan = net.consumers[circuit.n_inputs + i];
        if (fan >= 2) {
            net.copy_decode_id[i] = next_id++;
            neurons += 2 * M * D + 2 * R;  // copy decoder (candidates {0, s})
            for (std::size_t s = 0; s < fan; ++s) {
                net.copy_bank_id.push_back(next_id++);
                neurons += M * R;
            }
        }
    }
    net.copy_bank_off[circuit.nodes.size()] = net.copy_bank_id.size();
    net.physical_neurons = neurons;
    return net;
}

struct NetworkEval {
    std::vector<bool> bits;               // read-out output bits
    std::vector<std::uint8_t> anomalous;  // zero/multi-fire at the readout
    std::vector<std::uint8_t> exact;      // one-hot decisions match noiseless truth
    bool all_exact() const {
        for (std::uint8_t e : exact)
            if (!e) return false;
        return true;
    }
};

// Full noisy forward pass. Output bits are read at each output gate's step
// layer (replica 0 decisions): `exact` requires the one-hot to match the
// noiseless truth index; anomalies fall back to the highest pre-activation
// for the reported bit and are flagged.
inline NetworkEval evaluate(const LogicalNetwork& net, const std::vector<bool>& bits,
                            const NoiseModel& noise, std::uint64_t trial_key,
                            const ScalePolicy& policy) {
    const Circuit& c = net.circuit;
    if (bits.size() != c.n_inputs) throw std::domain_error("evaluate: input arity mismatch");
    const std::uint64_t s = policy.scale;
    if (s == 0) throw std::domain_error("evaluate: zero scale");

    auto apply_policy = [&](LogicalNeuronSpec& sp) {
        sp.geometric_threshold = policy.geometric_threshold;
        sp.threshold_s_ref = policy.s_ref;
    };
    LogicalNeuronSpec bit_spec = make_identity_spec(net.moduli, {0, s}, net.R);
    apply_policy(bit_spec);

    std::vector<std::vector<PhaseBundle>> feed(c.n_wires());
    // carried-noise factor of each feed bundle; input banks encode clean
    // one-hots, so their bundles carry exactly one noise layer
    std::vector<std::vector<double>> carry(c.n_wires());
    for (std::size_t w = 0; w < c.n_wires(); ++w) {
        feed[w].resize(net.consumers[w]);
        carry[w].assign(net.consumers[w], 1.0);
    }

    for (std::size_t w = 0; w < c.n_inputs; ++w) {
        if (net.consumers[w] == 0) continue;
        OneHotState onehot = clean_onehot(2, bits[w] ? 1 : 0, net.R);
        for (std::size_t slot = 0; slot < net.consumers[w]; ++slot) {
            std::uint64_t id = net.input_bank_id[net.input_bank_off[w] + slot];
            feed[w][slot] =
                neural_encode_bundle(onehot, bit_spec, noise, derive_stream(trial_key, id));
        }
    }

    std::vector<bool> truth = c.wire_values(bits);
    NetworkEval ev;
    ev.bits.resize(c.outputs.size());
    ev.anomalous.assign(c.outputs.size(), 0);
    ev.exact.assign(c.outputs.size(), 0);

    std::vector<OneHotState> out_state(c.outputs.size());
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
        const auto& nd = c.nodes[i];
        const std::size_t w_out = c.n_inputs + i;
        const std::size_t fan = net.consumers[w_out];
        if (fan == 0 && !net.is_output[w_out]) continue;  // dead gate

        LogicalNeuronSpec spec = make_gate_spec(nd.g, net.moduli, s, net.R);
        apply_policy(spec);
        spec.input_noise_scale = {carry[std::size_t(nd.a)][net.slot[i][0]],
                                  carry[std::size_t(nd.b)][net.slot[i][1]]};
        const PhaseBundle& in_a = feed[std::size_t(nd.a)][net.slot[i][0]];
        const PhaseBundle& in_b = feed[std::size_t(nd.b)][net.slot[i][1]];
        // gates feeding nothing downstream only need their first step replica
        const std::size_t eval_replicas = fan == 0 ? 1 : 0;
        OneHotState oh =
            neural_decode_weighted({&in_a, &in_b}, spec, noise,
                                   derive_stream(trial_key, net.gate_decode_id[i]), eval_replicas);

        if (net.is_output[w_out]) {
            for (std::size_t k = 0; k < c.outputs.size(); ++k)
                if (std::size_t(c.outputs[k]) == w_out) out_state[k] = oh;
        }
        if (fan >= 1) {
            PhaseBundle enc = neural_encode_bundle(
                oh, spec, noise, derive_stream(trial_key, net.gate_encode_id[i]));
            const double enc_carry = carried_noise_scale(spec);
            if (fan == 1) {
                feed[w_out][0] = std::move(enc);
                carry[w_out][0] = enc_carry;
            } else {
                LogicalNeuronSpec copy_spec = bit_spec;
                copy_spec.input_noise_scale = {enc_carry};
                OneHotState oh2 = neural_decode(
                    enc, copy_spec, noise, derive_stream(trial_key, net.copy_decode_id[i]));
                const double bank_carry = carried_noise_scale(bit_spec);
                for (std::size_t slot = 0; slot < fan; ++slot) {
                    std::uint64_t id = net.copy_bank_id[net.copy_bank_off[i] + slot];
                    feed[w_out][slot] = neural_encode_bundle(oh2, bit_spec, noise,
                                                             derive_stream(trial_key, id));
                    carry[w_out][slot] = bank_carry;
                }
            }
        }
    }

    for (std::size_t k = 0; k < c.outputs.size(); ++k) {
        const std::size_t w = std::size_t(c.outputs[k]);
        const std::size_t i = w - c.n_inputs;
        const auto& nd = c.nodes[i];
        const std::size_t truth_idx =
            (truth[std::size_t(nd.a)] ? 1u : 0u) + (truth[std::size_t(nd.b)] ? 1u : 0u);
        const OneHotState& oh = out_state[k];
        ev.exact[k] = oh.exact_onehot(truth_idx, 0) ? 1 : 0;
        auto idx = oh.fired_index(0);
        std::size_t read = idx ? *idx : oh.argmax_sum(0);
        ev.anomalous[k] = idx ? 0 : 1;
        ev.bits[k] = gate_unit_values(nd.g)[read] != 0;
    }
    return ev;
}

// Structured statistics dump for a compiled network.
inline std::string network_stats(const LogicalNetwork& net) {
    std::size_t copies = 0, edges = 0;
    for (std::size_t i = 0; i < net.circuit.nodes.size(); ++i)
        if (net.consumers[net.circuit.n_inputs + i] >= 2) ++copies;
    for (std::size_t w = 0; w < net.circuit.n_wires(); ++w) edges += net.consumers[w];
    std::string s;
    s += "inputs=" + std::to_string(net.circuit.n_inputs) + "\n";
    s += "gates=" + std::to_string(net.circuit.nodes.size()) + "\n";
    s += "copy_gadgets=" + std::to_string(copies) + "\n";
    s += "edges=" + std::to_string(edges) + "\n";
    s += "outputs=" + std::to_string(net.circuit.outputs.size()) + "\n";
    s += "moduli=" + std::to_string(net.moduli.size()) + "\n";
    s += "replicas=" + std::to_string(net.R) + "\n";
    s += "physical_neurons=" + std::to_string(net.physical_neurons) + "\n";
    return s;
}

}  // namespace gridft
