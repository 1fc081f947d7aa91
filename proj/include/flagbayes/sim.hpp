// Copyright 2026 The flagbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLAGBAYES_SIM_HPP
#define FLAGBAYES_SIM_HPP

#include <algorithm>
#include <optional>
#include <thread>
#include <variant>
#include <vector>

#include "flagbayes/channel.hpp"
#include "flagbayes/gadget.hpp"
#include "flagbayes/rng.hpp"

namespace flagbayes {

/// Gadget noise. p_prep and p_meas are Z-flip probabilities on the ancilla
/// after |+> preparation and before the X measurement; p_cx is the strength of
/// the two-qubit depolarizing channel after every controlled single-qubit Pauli.
struct NoiseModel {
    double p_prep = 0.0;
    double p_meas = 0.0;
    double p_cx = 0.0;

    static NoiseModel uniform(double p) { return NoiseModel{p, p, p}; }

    bool noiseless() const { return p_prep == 0.0 && p_meas == 0.0 && p_cx == 0.0; }

    void validate() const {
        for (double v : {p_prep, p_meas, p_cx}) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument("noise probabilities must lie in [0, 1]");
            }
        }
    }
};

/// Pauli frame carried on the data qubits between repetitions.
struct FrameState {
    PauliOperator data;

    static FrameState clean(std::size_t n_q) { return FrameState{PauliOperator(n_q)}; }
};

struct ShotRecord {
    std::size_t step = 0;
    std::vector<int> outcomes;
    std::vector<PauliOperator> layers;  // right unitaries used at this step
    std::optional<PauliIndex> truth;    // sampled gate error, simulation only

    friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

namespace frame {

/// Pauli on the data+ancilla register; data qubit s is bit s, ancilla q is
/// bit n_q + q. Phases are irrelevant to outcomes and not tracked.
struct RegisterFrame {
    std::uint32_t x = 0;
    std::uint32_t z = 0;

    friend bool operator==(const RegisterFrame&, const RegisterFrame&) = default;
};

enum class OpKind { PrepNoise, CtrlPauli, Depolarize, Gate, Channel, MeasNoise };

struct Op {
    OpKind kind;
    std::size_t ancilla = 0;
    std::size_t data = 0;
    char letter = 'I';
};

inline bool is_noise(OpKind k) {
    return k == OpKind::PrepNoise || k == OpKind::Depolarize || k == OpKind::Channel || k == OpKind::MeasNoise;
}

/// Flattened circuit of one repetition: prep noise, controlled L's from the
/// outermost layer inwards, the gate and its error channel, controlled R's
/// from the innermost layer outwards, measurement noise. Multi-qubit
/// controlled Paulis are split into controlled single-qubit Paulis in
/// ascending data-qubit order, each followed by its own depolarizing channel.
inline std::vector<Op> compile(const std::vector<GadgetLayer>& layers) {
    std::vector<Op> ops;
    std::size_t l = layers.size();
    for (std::size_t q = 0; q < l; ++q) {
        ops.push_back({OpKind::PrepNoise, q});
    }
    auto controlled = [&](std::size_t q, const PauliOperator& p) {
        for (std::size_t s = 0; s < p.num_qubits(); ++s) {
            char c = p.letter(s);
            if (c != 'I') {
                ops.push_back({OpKind::CtrlPauli, q, s, c});
                ops.push_back({OpKind::Depolarize, q, s});
            }
        }
    };
    for (std::size_t k = l; k-- > 0;) {
        controlled(k, layers[k].l);
    }
    ops.push_back({OpKind::Gate});
    ops.push_back({OpKind::Channel});
    for (std::size_t k = 0; k < l; ++k) {
        controlled(k, layers[k].r);
    }
    for (std::size_t q = 0; q < l; ++q) {
        ops.push_back({OpKind::MeasNoise, q});
    }
    return ops;
}

inline void apply_gate_op(const Op& op, const CliffordGate& gate, RegisterFrame& f) {
    std::size_t n_q = gate.num_qubits();
    if (op.kind == OpKind::Gate) {
        std::uint32_t mask = (1u << n_q) - 1u;
        PauliOperator d(n_q, f.x & mask, f.z & mask);
        PauliOperator img = gate.conjugate(d);
        f.x = (f.x & ~mask) | img.x_bits();
        f.z = (f.z & ~mask) | img.z_bits();
    } else if (op.kind == OpKind::CtrlPauli) {
        std::uint32_t a = 1u << (n_q + op.ancilla);
        std::uint32_t s = 1u << op.data;
        bool px = op.letter == 'X' || op.letter == 'Y';
        bool pz = op.letter == 'Z' || op.letter == 'Y';
        bool anti = ((f.x & s) && pz) != ((f.z & s) && px);
        if (f.x & a) {
            if (px) f.x ^= s;
            if (pz) f.z ^= s;
        }
        if (anti) {
            f.z ^= a;
        }
    }
}

inline void xor_data_pauli(RegisterFrame& f, const PauliOperator& p) {
    f.x ^= p.x_bits();
    f.z ^= p.z_bits();
}

/// Two-qubit Pauli number k in 1..15 on (ancilla, data), ancilla digit first.
inline void xor_two_qubit(RegisterFrame& f, std::size_t n_q, const Op& op, std::size_t k) {
    std::uint32_t a = 1u << (n_q + op.ancilla);
    std::uint32_t s = 1u << op.data;
    std::size_t da = k >> 2;
    std::size_t ds = k & 3u;
    if (da == 1 || da == 2) f.x ^= a;
    if (da == 2 || da == 3) f.z ^= a;
    if (ds == 1 || ds == 2) f.x ^= s;
    if (ds == 2 || ds == 3) f.z ^= s;
}

inline std::vector<int> read_outcomes(const RegisterFrame& f, std::size_t n_q, std::size_t l) {
    std::vector<int> out(l);
    for (std::size_t q = 0; q < l; ++q) {
        out[q] = (f.z >> (n_q + q)) & 1u ? -1 : +1;
    }
    return out;
}

}  // namespace frame

/// One repetition: samples gate and gadget errors, propagates them through the
/// Clifford circuit as a Pauli frame, and reads each ancilla's X outcome.
/// Ancillas start fresh; the data part of the frame carries over.
template <class RngT>
std::pair<ShotRecord, FrameState> run_shot(const PauliChannel& phys, const std::vector<GadgetLayer>& layers,
                                           const CliffordGate& gate, const NoiseModel& noise, const FrameState& in,
                                           RngT& rng, std::size_t step = 0,
                                           const ChannelSampler* sampler = nullptr) {
    std::size_t n_q = gate.num_qubits();
    if (phys.num_qubits() != n_q || in.data.num_qubits() != n_q) {
        throw DimensionError("channel, gate and frame qubit counts differ");
    }
    std::optional<ChannelSampler> own;
    if (sampler == nullptr) {
        own.emplace(phys);
        sampler = &*own;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> fifteen(1, 15);
    frame::RegisterFrame f{in.data.x_bits(), in.data.z_bits()};
    PauliIndex truth{0};
    for (const auto& op : frame::compile(layers)) {
        switch (op.kind) {
            case frame::OpKind::PrepNoise:
                if (noise.p_prep > 0.0 && unit(rng) < noise.p_prep) f.z ^= 1u << (n_q + op.ancilla);
                break;
            case frame::OpKind::MeasNoise:
                if (noise.p_meas > 0.0 && unit(rng) < noise.p_meas) f.z ^= 1u << (n_q + op.ancilla);
                break;
            case frame::OpKind::Depolarize:
                if (noise.p_cx > 0.0 && unit(rng) < noise.p_cx) frame::xor_two_qubit(f, n_q, op, fifteen(rng));
                break;
            case frame::OpKind::Channel:
                truth = (*sampler)(rng);
                frame::xor_data_pauli(f, PauliOperator::from_index(n_q, truth));
                break;
            default:
                frame::apply_gate_op(op, gate, f);
        }
    }
    ShotRecord rec;
    rec.step = step;
    rec.outcomes = frame::read_outcomes(f, n_q, layers.size());
    for (const auto& layer : layers) {
        rec.layers.push_back(layer.r);
    }
    rec.truth = truth;
    std::uint32_t mask = (1u << n_q) - 1u;
    return {std::move(rec), FrameState{PauliOperator(n_q, f.x & mask, f.z & mask)}};
}

/// Exact outcome distribution of the Pauli-frame model, indexed by
/// pattern_number. Frame propagation is linear over GF(2), so the outcome
/// flips are the XOR of independent per-location contributions and the
/// distribution is their XOR-convolution.
inline std::vector<double> frame_outcome_distribution(const PauliChannel& phys, const std::vector<GadgetLayer>& layers,
                                                      const CliffordGate& gate, const NoiseModel& noise) {
    std::size_t n_q = gate.num_qubits();
    std::size_t l = layers.size();
    std::size_t patterns = std::size_t{1} << l;
    auto ops = frame::compile(layers);
    auto flips_of = [&](std::size_t from, frame::RegisterFrame f) {
        for (std::size_t k = from; k < ops.size(); ++k) {
            if (!frame::is_noise(ops[k].kind)) {
                frame::apply_gate_op(ops[k], gate, f);
            }
        }
        return pattern_number(frame::read_outcomes(f, n_q, l));
    };
    std::vector<double> dist(patterns, 0.0);
    dist[0] = 1.0;
    auto convolve = [&](const std::vector<double>& local) {
        std::vector<double> next(patterns, 0.0);
        for (std::size_t a = 0; a < patterns; ++a) {
            if (dist[a] == 0.0) continue;
            for (std::size_t b = 0; b < patterns; ++b) {
                next[a ^ b] += dist[a] * local[b];
            }
        }
        dist = std::move(next);
    };
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const auto& op = ops[k];
        std::vector<double> local(patterns, 0.0);
        switch (op.kind) {
            case frame::OpKind::PrepNoise:
            case frame::OpKind::MeasNoise: {
                double p = op.kind == frame::OpKind::PrepNoise ? noise.p_prep : noise.p_meas;
                frame::RegisterFrame f{0, 1u << (n_q + op.ancilla)};
                local[0] += 1.0 - p;
                local[flips_of(k + 1, f)] += p;
                break;
            }
            case frame::OpKind::Depolarize:
                local[0] += 1.0 - noise.p_cx;
                for (std::size_t e = 1; e < 16; ++e) {
                    frame::RegisterFrame f;
                    frame::xor_two_qubit(f, n_q, op, e);
                    local[flips_of(k + 1, f)] += noise.p_cx / 15.0;
                }
                break;
            case frame::OpKind::Channel:
                for (std::size_t i = 0; i < phys.size(); ++i) {
                    frame::RegisterFrame f;
                    frame::xor_data_pauli(f, PauliOperator::from_index(n_q, PauliIndex{i}));
                    local[flips_of(k + 1, f)] += phys.rates()[i];
                }
                break;
            default:
                continue;
        }
        convolve(local);
    }
    return dist;
}

/// Gadgets for each step: one fixed stack, or a fresh uniformly random
/// single layer per step.
struct FixedStack {
    GadgetStack stack;
};
struct RandomSingleLayer {
    CliffordGate gate;
};
using StackSource = std::variant<FixedStack, RandomSingleLayer>;

enum class ExecutionMode { Sequential, Parallel };

struct ExperimentResult {
    std::vector<ShotRecord> records;
    ExecutionMode mode = ExecutionMode::Sequential;
    std::optional<FrameState> final_frame;  // sequential runs only
};

namespace detail {

inline const CliffordGate& source_gate(const StackSource& src) {
    return std::visit(
        [](const auto& s) -> const CliffordGate& {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, FixedStack>) {
                return s.stack.gate();
            } else {
                return s.gate;
            }
        },
        src);
}

template <class RngT>
std::vector<GadgetLayer> layers_for_step(const StackSource& src, RngT& rng) {
    if (const auto* fixed = std::get_if<FixedStack>(&src)) {
        return fixed->stack.layers();
    }
    return {random_single_layer(std::get<RandomSingleLayer>(src).gate, rng)};
}

}  // namespace detail

/// n repetitions of the gadget-decorated gate. Shot k draws all of its
/// randomness (layer choice included) from substream(seed, Shot, k), so the
/// records are identical in both execution modes. Parallel mode is only
/// accepted for noiseless gadgets, where shots are exchangeable.
inline ExperimentResult run_experiment(const PauliChannel& phys, const StackSource& source, const NoiseModel& noise,
                                       std::size_t n, std::uint64_t seed,
                                       ExecutionMode mode = ExecutionMode::Sequential, unsigned threads = 0) {
    noise.validate();
    const CliffordGate& gate = detail::source_gate(source);
    if (gate.num_qubits() != phys.num_qubits()) {
        throw DimensionError("gate and physical channel qubit counts differ");
    }
    if (mode == ExecutionMode::Parallel && !noise.noiseless()) {
        throw std::invalid_argument("parallel execution requires noiseless gadgets");
    }
    ChannelSampler sampler(phys);
    ExperimentResult result;
    result.mode = mode;
    result.records.resize(n);
    auto one = [&](std::size_t k, const FrameState& frame) {
        Rng rng = substream(seed, StreamTag::Shot, k);
        auto layers = detail::layers_for_step(source, rng);
        return run_shot(phys, layers, gate, noise, frame, rng, k, &sampler);
    };
    if (mode == ExecutionMode::Sequential) {
        FrameState frame = FrameState::clean(gate.num_qubits());
        for (std::size_t k = 0; k < n; ++k) {
            auto [rec, next] = one(k, frame);
            result.records[k] = std::move(rec);
            frame = std::move(next);
        }
        result.final_frame = frame;
        return result;
    }
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            FrameState clean = FrameState::clean(gate.num_qubits());
            for (std::size_t k = w; k < n; k += workers) {
                result.records[k] = one(k, clean).first;
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    return result;
}

/// Drift model: each rate shifted by an independent uniform[-delta, delta]
/// draw, clamped at 0, then renormalized.
template <class RngT>
PauliChannel perturb_channel(std::size_t n_q, const std::vector<double>& prior_means, double delta, RngT& rng) {
    if (!(delta >= 0.0)) {
        throw std::invalid_argument("perturbation half-width must be nonnegative");
    }
    if (prior_means.size() != pauli_count(n_q)) {
        throw DimensionError("prior mean vector has the wrong length");
    }
    std::vector<double> out(prior_means.size());
    std::uniform_real_distribution<double> chi(-delta, delta);
    double sum = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        double shift = delta > 0.0 ? chi(rng) : 0.0;
        out[i] = std::max(0.0, prior_means[i] + shift);
        sum += out[i];
    }
    if (!(sum > 0.0)) {
        throw DegeneratePerturbationError("all rates vanished after clamping");
    }
    if (delta > 0.0) {
        for (double& v : out) {
            v /= sum;
        }
    }
    return PauliChannel(n_q, std::move(out));
}

/// Uniform draw from the (K-1)-simplex: flat Dirichlet via normalized
/// unit exponentials.
template <class RngT>
std::vector<double> sample_prior_means(std::size_t k, RngT& rng) {
    if (k < 2) {
        throw std::invalid_argument("need at least two components");
    }
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> out(k);
    double sum = 0.0;
    for (double& v : out) {
        v = expo(rng);
        sum += v;
    }
    for (double& v : out) {
        v /= sum;
    }
    return out;
}

}  // namespace flagbayes

#endif
