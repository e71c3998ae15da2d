#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spotcast::ann {

enum class Activation { sigmoid, linear };

[[nodiscard]] std::string to_string(Activation a);
[[nodiscard]] Activation activation_from_string(const std::string& name);

struct Topology {
    /// Input dimension, hidden sizes, output dimension.
    std::vector<std::size_t> layer_sizes;
    /// One tag per weight layer (layer_sizes.size() - 1 entries).
    std::vector<Activation> activations;

    /// Sigmoid hidden layers of the given sizes and a linear output.
    [[nodiscard]] static Topology feed_forward(std::size_t inputs,
                                               const std::vector<std::size_t>& hidden,
                                               std::size_t outputs = 1);
    /// (inputs, 150, 20, 1).
    [[nodiscard]] static Topology forecaster_default(std::size_t inputs);

    [[nodiscard]] std::size_t layer_count() const noexcept {
        return layer_sizes.empty() ? 0 : layer_sizes.size() - 1;
    }
    [[nodiscard]] std::size_t hidden_count() const noexcept {
        return layer_count() == 0 ? 0 : layer_count() - 1;
    }
    /// Positive sizes, one activation per layer, linear output. Throws std::invalid_argument.
    void validate() const;

    friend bool operator==(const Topology&, const Topology&) = default;
};

struct Layer {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;  ///< outputs x inputs, row-major
    std::vector<double> bias;
    Activation activation = Activation::linear;

    friend bool operator==(const Layer&, const Layer&) = default;
};

struct Network {
    Topology topology;
    std::vector<Layer> layers;

    [[nodiscard]] std::size_t input_dim() const { return topology.layer_sizes.front(); }
    [[nodiscard]] std::size_t output_dim() const { return topology.layer_sizes.back(); }
    [[nodiscard]] std::size_t parameter_count() const;
    /// Per layer: weights row-major, then bias.
    [[nodiscard]] std::vector<double> flatten() const;
    void assign(std::span<const double> flat);

    friend bool operator==(const Network&, const Network&) = default;
};

/// Zero weights for the topology.
[[nodiscard]] Network make_network(const Topology& topology);
/// Weights and biases uniform on +-1/sqrt(fan_in), drawn from seed.
[[nodiscard]] Network init_network(const Topology& topology, std::uint64_t seed);

/// Row-major inputs and targets.
struct Dataset {
    std::size_t input_dim = 0;
    std::size_t output_dim = 1;
    std::vector<double> x;
    std::vector<double> y;

    [[nodiscard]] std::size_t rows() const noexcept {
        return input_dim == 0 ? 0 : x.size() / input_dim;
    }
    [[nodiscard]] std::span<const double> input(std::size_t r) const {
        return {x.data() + r * input_dim, input_dim};
    }
    [[nodiscard]] std::span<const double> target(std::size_t r) const {
        return {y.data() + r * output_dim, output_dim};
    }
    void push_back(std::span<const double> in, std::span<const double> out);
    /// Rows [first, last).
    [[nodiscard]] Dataset slice(std::size_t first, std::size_t last) const;
    /// Checks shapes and finiteness. Throws std::invalid_argument.
    void validate() const;
};

/// Post-activation outputs of every layer, input first.
struct ForwardCache {
    std::vector<std::vector<double>> activations;
};

[[nodiscard]] std::vector<double> forward(const Network& net, std::span<const double> x);
/// As forward, keeping every layer's output for backpropagation.
[[nodiscard]] std::vector<double> forward(const Network& net, std::span<const double> x,
                                          ForwardCache& cache);

/// (1 / 2N) sum_n ||f(x_n) - y_n||^2.
[[nodiscard]] double loss(const Network& net, const Dataset& data);

struct LossGradient {
    double loss = 0.0;
    std::vector<double> gradient;  ///< flatten() order
};

/// Reverse-mode gradient of loss() with respect to every weight and bias.
[[nodiscard]] LossGradient loss_gradient(const Network& net, const Dataset& data);

struct TrainConfig {
    std::size_t max_epochs = 300;
    double learning_rate = 0.05;
    double momentum = 0.9;
    /// Conjugate directions with Powell-Beale restarts and a backtracking line search.
    bool conjugate_gradient = false;
    std::uint64_t seed = 1;
    /// Tail share of rows held out for early stopping, in [0, 0.5].
    double validation_fraction = 0.0;
    std::size_t patience = 25;
    /// Stop once the training loss falls below this value.
    double loss_tolerance = 0.0;

    void validate() const;
};

struct TrainTrace {
    std::vector<double> train_loss;
    std::vector<double> validation_loss;
    std::size_t best_epoch = 0;
    std::size_t restarts = 0;
    bool diverged = false;
    bool early_stopped = false;
};

struct TrainResult {
    Network network;
    TrainTrace trace;
};

/**
 * Full-batch training from a seeded initialization.
 *
 * Momentum descent by default. With conjugate_gradient set, directions are
 * Polak-Ribiere composites reset to steepest descent when
 * |g_k . g_{k-1}| >= 0.2 ||g_k||^2. Returns the weights with the best
 * validation loss, or the final weights when no rows are held out. A
 * non-finite loss stops training and returns the last finite state.
 */
[[nodiscard]] TrainResult train(const Dataset& data, const Topology& topology,
                                const TrainConfig& config);
/// Continues from given weights.
[[nodiscard]] TrainResult train(const Dataset& data, Network start, const TrainConfig& config);

/// Product over layers of the maximum absolute row sum of the weight matrix.
[[nodiscard]] double lipschitz_bound(const Network& net);

}  // namespace spotcast::ann
