#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace gridft {

// A codeword is the vector of per-modulus phases in [0,1).
using Codeword = std::vector<double>;

inline double wrap01(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;  // guard against floor rounding at the seam
    return r;
}

inline double circular_distance(double a, double b) {
    double d = std::fabs(wrap01(a) - wrap01(b));
    return std::min(d, 1.0 - d);
}

// Exact phase of an integer under modulus lam: (x mod lam)/lam.
inline double integer_phase(std::uint64_t x, std::uint64_t lam) {
    return double(x % lam) / double(lam);
}

// Product of moduli, clamped; the clamp keeps the domain bound usable when
// the true product overflows 64 bits.
constexpr std::uint64_t kDomainClamp = std::uint64_t(1) << 62;

inline std::uint64_t clamped_moduli_product(const std::vector<std::uint64_t>& moduli) {
    std::uint64_t prod = 1;
    for (std::uint64_t lam : moduli) {
        if (lam == 0) throw std::domain_error("modulus 0");
        if (prod > kDomainClamp / lam) return kDomainClamp;
        prod *= lam;
    }
    return std::min(prod, kDomainClamp);
}

// Encoder activation: identity for the plain code, or a finite table that
// realizes a logical activation during re-encoding.
struct EncoderFn {
    bool identity = true;
    std::unordered_map<std::uint64_t, double> table;

    static EncoderFn make_identity() { return EncoderFn{}; }

    static EncoderFn from_table(std::unordered_map<std::uint64_t, double> t) {
        EncoderFn e;
        e.identity = false;
        e.table = std::move(t);
        return e;
    }

    double operator()(std::uint64_t x) const {
        if (identity) return double(x);
        auto it = table.find(x);
        if (it == table.end()) throw std::domain_error("encoder function: x outside table domain");
        return it->second;
    }

    bool defined_at(std::uint64_t x) const { return identity || table.count(x) != 0; }
};

// The code itself: pairwise-coprime moduli, an unambiguous domain [0, X),
// and the ordered candidate set the decoder scores against.
struct GridCode {
    std::vector<std::uint64_t> moduli;
    std::uint64_t domain_size = 0;
    std::vector<std::uint64_t> candidate_values;

    GridCode() = default;

    // Default candidate set: all of 0..X-1 (only sensible for small X).
    GridCode(std::vector<std::uint64_t> mods, std::uint64_t X) : GridCode(std::move(mods), X, {}) {
        if (X > (std::uint64_t(1) << 22))
            throw std::domain_error("GridCode: refusing to materialize a huge default candidate set");
        candidate_values.resize(X);
        std::iota(candidate_values.begin(), candidate_values.end(), std::uint64_t(0));
    }

    GridCode(std::vector<std::uint64_t> mods, std::uint64_t X, std::vector<std::uint64_t> candidates)
        : moduli(std::move(mods)), domain_size(X), candidate_values(std::move(candidates)) {
        if (moduli.empty()) throw std::domain_error("GridCode: no moduli");
        for (std::uint64_t lam : moduli)
            if (lam < 2) throw std::domain_error("GridCode: modulus < 2");
        for (std::size_t i = 0; i < moduli.size(); ++i)
            for (std::size_t j = i + 1; j < moduli.size(); ++j)
                if (std::gcd(moduli[i], moduli[j]) != 1)
                    throw std::domain_error("GridCode: moduli not pairwise coprime");
        if (domain_size == 0 || domain_size > clamped_moduli_product(moduli))
            throw std::domain_error("GridCode: domain size exceeds moduli product");
        for (std::size_t k = 0; k < candidate_values.size(); ++k) {
            if (candidate_values[k] >= domain_size)
                throw std::domain_error("GridCode: candidate outside [0, X)");
            if (k > 0 && candidate_values[k] <= candidate_values[k - 1])
                throw std::domain_error("GridCode: candidates not strictly ascending");
        }
    }

    std::size_t M() const { return moduli.size(); }

    bool has_candidate(std::uint64_t x) const {
        return std::binary_search(candidate_values.begin(), candidate_values.end(), x);
    }
};

// First M primes >= 3: the default moduli family used throughout the
// experiments (2 is skipped so every modulus has nontrivial phase geometry).
inline std::vector<std::uint64_t> odd_prime_moduli(std::size_t M) {
    std::vector<std::uint64_t> out;
    std::uint64_t n = 3;
    while (out.size() < M) {
        bool prime = true;
        for (std::uint64_t d = 3; d * d <= n; d += 2)
            if (n % d == 0) {
                prime = false;
                break;
            }
        if (prime) out.push_back(n);
        n += 2;
    }
    return out;
}

inline Codeword encode(std::uint64_t x, const EncoderFn& e, const GridCode& code) {
    if (!code.has_candidate(x)) throw std::domain_error("encode: x outside candidate set");
    Codeword phi(code.M());
    for (std::size_t j = 0; j < code.M(); ++j) {
        if (e.identity) {
            phi[j] = integer_phase(x, code.moduli[j]);
        } else {
            double v = e(x);
            phi[j] = wrap01(v / double(code.moduli[j]));
        }
    }
    return phi;
}

// The decoder's matched filter: sum of cosine agreements between the
// candidate's ideal phases and the observed ones. Equals M at a perfect
// match.
inline double score(std::uint64_t x, const Codeword& phi, const GridCode& code) {
    if (!code.has_candidate(x)) throw std::domain_error("score: x outside candidate set");
    if (phi.size() != code.M()) throw std::domain_error("score: codeword length mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < code.M(); ++j)
        s += std::cos(2.0 * std::numbers::pi * (integer_phase(x, code.moduli[j]) - phi[j]));
    return s;
}

// Exact maximum-likelihood decode: argmax of score over the candidate list,
// ties broken toward the lowest index.
inline std::uint64_t mle_decode_oracle(const Codeword& phi, const GridCode& code) {
    if (code.candidate_values.empty()) throw std::domain_error("mle_decode_oracle: no candidates");
    if (phi.size() != code.M()) throw std::domain_error("mle_decode_oracle: codeword length mismatch");
    std::uint64_t best = code.candidate_values.front();
    double best_s = -std::numeric_limits<double>::infinity();
    for (std::uint64_t x : code.candidate_values) {
        double s = score(x, phi, code);
        if (s > best_s) {
            best_s = s;
            best = x;
        }
    }
    return best;
}

// Score against explicit moduli, for candidate sets that live outside a
// validated GridCode domain (random-scale code ensembles).
inline double score_phases(const Codeword& phi, std::uint64_t x,
                           const std::vector<std::uint64_t>& moduli) {
    if (phi.size() != moduli.size()) throw std::domain_error("score_phases: length mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < moduli.size(); ++j)
        s += std::cos(2.0 * std::numbers::pi * (integer_phase(x, moduli[j]) - phi[j]));
    return s;
}

// MLE over an explicit candidate list; returns the index of the best
// candidate, ties broken toward the lowest index.
inline std::size_t mle_decode_values(const Codeword& phi, const std::vector<std::uint64_t>& moduli,
                                     const std::vector<std::uint64_t>& candidates) {
    if (candidates.empty()) throw std::domain_error("mle_decode_values: no candidates");
    std::size_t best = 0;
    double best_s = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        double s = score_phases(phi, candidates[k], moduli);
        if (s > best_s) {
            best_s = s;
            best = k;
        }
    }
    return best;
}

// Apply integer logical weights in the codespace: phases add modulo 1.
// For identity-encoded inputs this equals encode() of the integer weighted
// sum whenever that sum stays inside the domain.
inline Codeword codespace_weighted_sum(const std::vector<Codeword>& codewords,
                                       const std::vector<long long>& weights,
                                       const GridCode& code) {
    if (codewords.size() != weights.size())
        throw std::domain_error("codespace_weighted_sum: length mismatch");
    Codeword out(code.M(), 0.0);
    for (std::size_t i = 0; i < codewords.size(); ++i) {
        if (codewords[i].size() != code.M())
            throw std::domain_error("codespace_weighted_sum: codeword length mismatch");
        for (std::size_t j = 0; j < code.M(); ++j) out[j] += double(weights[i]) * codewords[i][j];
    }
    for (double& v : out) v = wrap01(v);
    return out;
}

// Worst noiseless score a wrong candidate can reach against a true one,
// i.e. the largest pairwise difference score. This is the geometric floor
// the step threshold must clear for exact noiseless decoding.
inline double max_wrong_pair_score(const std::vector<std::uint64_t>& moduli,
                                   const std::vector<std::uint64_t>& candidates) {
    if (candidates.size() < 2) return -double(moduli.size());
    double worst = -double(moduli.size());
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        for (std::size_t l = 0; l < candidates.size(); ++l) {
            if (k == l) continue;
            double s = 0.0;
            bool distinct = false;
            for (std::uint64_t lam : moduli) {
                std::uint64_t rk = candidates[k] % lam, rl = candidates[l] % lam;
                std::uint64_t d = rk >= rl ? rk - rl : rk + lam - rl;
                if (d != 0) distinct = true;
                s += std::cos(2.0 * std::numbers::pi * double(d) / double(lam));
            }
            if (!distinct) continue;  // identical residues: not a resolvable wrong candidate
            worst = std::max(worst, s);
        }
    }
    return worst;
}

}  // namespace gridft
