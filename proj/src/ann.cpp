#include "spotcast/ann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spotcast/kernels.hpp"
#include "spotcast/random.hpp"

namespace spotcast::ann {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void activate(Activation a, std::span<double> v) {
    if (a == Activation::sigmoid) {
        for (double& z : v) z = sigmoid(z);
    }
}

double dot(std::span<const double> a, std::span<const double> b) { return kernels::dot(a, b); }

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::string to_string(Activation a) { return a == Activation::sigmoid ? "sigmoid" : "linear"; }

Activation activation_from_string(const std::string& name) {
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "linear") return Activation::linear;
    throw std::invalid_argument("unknown activation '" + name + "'");
}

Topology Topology::feed_forward(std::size_t inputs, const std::vector<std::size_t>& hidden,
                                std::size_t outputs) {
    Topology t;
    t.layer_sizes.push_back(inputs);
    for (std::size_t h : hidden) {
        t.layer_sizes.push_back(h);
        t.activations.push_back(Activation::sigmoid);
    }
    t.layer_sizes.push_back(outputs);
    t.activations.push_back(Activation::linear);
    t.validate();
    return t;
}

Topology Topology::forecaster_default(std::size_t inputs) { return feed_forward(inputs, {150, 20}); }

void Topology::validate() const {
    if (layer_sizes.size() < 2) throw std::invalid_argument("topology: need input and output sizes");
    if (activations.size() != layer_sizes.size() - 1) {
        throw std::invalid_argument("topology: need one activation per layer");
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) throw std::invalid_argument("topology: layer sizes must be positive");
    }
    if (activations.back() != Activation::linear) {
        throw std::invalid_argument("topology: output layer must be linear");
    }
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.bias.size();
    return n;
}

std::vector<double> Network::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const auto& l : layers) {
        flat.insert(flat.end(), l.weights.begin(), l.weights.end());
        flat.insert(flat.end(), l.bias.begin(), l.bias.end());
    }
    return flat;
}

void Network::assign(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw std::invalid_argument("Network::assign: expected " +
                                    std::to_string(parameter_count()) + " parameters, got " +
                                    std::to_string(flat.size()));
    }
    std::size_t pos = 0;
    for (auto& l : layers) {
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), l.weights.size(),
                    l.weights.begin());
        pos += l.weights.size();
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), l.bias.size(), l.bias.begin());
        pos += l.bias.size();
    }
}

Network make_network(const Topology& topology) {
    topology.validate();
    Network net;
    net.topology = topology;
    for (std::size_t i = 0; i < topology.layer_count(); ++i) {
        Layer l;
        l.inputs = topology.layer_sizes[i];
        l.outputs = topology.layer_sizes[i + 1];
        l.weights.assign(l.inputs * l.outputs, 0.0);
        l.bias.assign(l.outputs, 0.0);
        l.activation = topology.activations[i];
        net.layers.push_back(std::move(l));
    }
    return net;
}

Network init_network(const Topology& topology, std::uint64_t seed) {
    Network net = make_network(topology);
    rng::Stream stream(seed);
    for (auto& l : net.layers) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(l.inputs));
        for (double& w : l.weights) w = bound * (2.0 * stream.uniform() - 1.0);
        for (double& b : l.bias) b = bound * (2.0 * stream.uniform() - 1.0);
    }
    return net;
}

void Dataset::push_back(std::span<const double> in, std::span<const double> out) {
    if (in.size() != input_dim || out.size() != output_dim) {
        throw std::invalid_argument("Dataset::push_back: row shape mismatch");
    }
    x.insert(x.end(), in.begin(), in.end());
    y.insert(y.end(), out.begin(), out.end());
}

Dataset Dataset::slice(std::size_t first, std::size_t last) const {
    if (first > last || last > rows()) throw std::out_of_range("Dataset::slice: bad range");
    Dataset d;
    d.input_dim = input_dim;
    d.output_dim = output_dim;
    d.x.assign(x.begin() + static_cast<std::ptrdiff_t>(first * input_dim),
               x.begin() + static_cast<std::ptrdiff_t>(last * input_dim));
    d.y.assign(y.begin() + static_cast<std::ptrdiff_t>(first * output_dim),
               y.begin() + static_cast<std::ptrdiff_t>(last * output_dim));
    return d;
}

void Dataset::validate() const {
    if (input_dim == 0 || output_dim == 0) throw std::invalid_argument("dataset: zero dimension");
    if (x.size() % input_dim != 0 || y.size() != rows() * output_dim) {
        throw std::invalid_argument("dataset: inputs and targets disagree in row count");
    }
    if (!all_finite(x) || !all_finite(y)) throw std::invalid_argument("dataset: non-finite value");
}

std::vector<double> forward(const Network& net, std::span<const double> x, ForwardCache& cache) {
    if (x.size() != net.input_dim()) {
        throw std::invalid_argument("forward: input has " + std::to_string(x.size()) +
                                    " entries, network expects " +
                                    std::to_string(net.input_dim()));
    }
    cache.activations.resize(net.layers.size() + 1);
    cache.activations[0].assign(x.begin(), x.end());
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const Layer& l = net.layers[i];
        auto& out = cache.activations[i + 1];
        out.resize(l.outputs);
        kernels::gemv(l.weights, cache.activations[i], l.bias, out);
        activate(l.activation, out);
    }
    return cache.activations.back();
}

std::vector<double> forward(const Network& net, std::span<const double> x) {
    ForwardCache cache;
    return forward(net, x, cache);
}

double loss(const Network& net, const Dataset& data) {
    if (data.rows() == 0) throw std::invalid_argument("loss: empty dataset");
    ForwardCache cache;
    double total = 0.0;
    for (std::size_t r = 0; r < data.rows(); ++r) {
        const auto out = forward(net, data.input(r), cache);
        total += kernels::sum_sq_diff(out, data.target(r));
    }
    return total / (2.0 * static_cast<double>(data.rows()));
}

LossGradient loss_gradient(const Network& net, const Dataset& data) {
    if (data.rows() == 0) throw std::invalid_argument("loss_gradient: empty dataset");
    if (data.output_dim != net.output_dim()) {
        throw std::invalid_argument("loss_gradient: target dimension mismatch");
    }
    const double inv_n = 1.0 / static_cast<double>(data.rows());
    const std::size_t layers = net.layers.size();

    // Offsets of each layer's weight and bias blocks in the flat gradient.
    std::vector<std::size_t> w_off(layers), b_off(layers);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < layers; ++i) {
        w_off[i] = pos;
        pos += net.layers[i].weights.size();
        b_off[i] = pos;
        pos += net.layers[i].bias.size();
    }

    LossGradient lg;
    lg.gradient.assign(pos, 0.0);
    ForwardCache cache;
    std::vector<double> delta, prev_delta;
    double total = 0.0;
    for (std::size_t r = 0; r < data.rows(); ++r) {
        const auto out = forward(net, data.input(r), cache);
        const auto target = data.target(r);
        delta.resize(out.size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double e = out[k] - target[k];
            total += e * e;
            delta[k] = e * inv_n;
        }
        for (std::size_t i = layers; i-- > 0;) {
            const Layer& l = net.layers[i];
            // delta is dLoss/dz for layer i's pre-activation once the derivative is folded in.
            if (l.activation == Activation::sigmoid) {
                const auto& a = cache.activations[i + 1];
                for (std::size_t k = 0; k < delta.size(); ++k) delta[k] *= a[k] * (1.0 - a[k]);
            }
            std::span<double> gw(lg.gradient.data() + w_off[i], l.weights.size());
            kernels::ger(1.0, delta, cache.activations[i], gw);
            std::span<double> gb(lg.gradient.data() + b_off[i], l.bias.size());
            kernels::axpy(1.0, delta, gb);
            if (i > 0) {
                prev_delta.resize(l.inputs);
                kernels::gemv_t(l.weights, delta, prev_delta);
                std::swap(delta, prev_delta);
            }
        }
    }
    lg.loss = total * 0.5 * inv_n;
    return lg;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train: learning rate must be > 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw std::invalid_argument("train: momentum must lie in [0, 1)");
    }
    if (!(validation_fraction >= 0.0 && validation_fraction <= 0.5)) {
        throw std::invalid_argument("train: validation fraction must lie in [0, 0.5]");
    }
    if (max_epochs == 0) throw std::invalid_argument("train: max_epochs must be >= 1");
}

TrainResult train(const Dataset& data, const Topology& topology, const TrainConfig& config) {
    return train(data, init_network(topology, config.seed), config);
}

TrainResult train(const Dataset& data, Network start, const TrainConfig& config) {
    config.validate();
    data.validate();
    if (data.rows() < 10) {
        throw std::invalid_argument("train: need at least 10 rows, got " +
                                    std::to_string(data.rows()));
    }
    if (data.input_dim != start.input_dim() || data.output_dim != start.output_dim()) {
        throw std::invalid_argument("train: dataset shape does not match the network");
    }

    auto held_out = static_cast<std::size_t>(
        std::floor(config.validation_fraction * static_cast<double>(data.rows())));
    if (held_out > 0 && data.rows() - held_out < 10) held_out = 0;
    const Dataset fit_rows = held_out > 0 ? data.slice(0, data.rows() - held_out) : data;
    const Dataset val_rows = held_out > 0 ? data.slice(data.rows() - held_out, data.rows()) : Dataset{};

    TrainResult result;
    TrainTrace& trace = result.trace;
    Network net = std::move(start);
    std::vector<double> w = net.flatten();
    Network best = net;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    std::vector<double> velocity(w.size(), 0.0);
    std::vector<double> direction, prev_grad;
    double step = config.learning_rate;

    LossGradient lg = loss_gradient(net, fit_rows);
    for (std::size_t epoch = 0;; ++epoch) {
        if (!std::isfinite(lg.loss) || !all_finite(lg.gradient)) {
            trace.diverged = true;
            break;
        }
        trace.train_loss.push_back(lg.loss);
        if (held_out > 0) {
            const double v = loss(net, val_rows);
            trace.validation_loss.push_back(v);
            if (v < best_val) {
                best_val = v;
                best = net;
                trace.best_epoch = epoch;
                since_best = 0;
            } else if (++since_best >= config.patience) {
                trace.early_stopped = true;
                break;
            }
        } else {
            best = net;
            trace.best_epoch = epoch;
        }
        if (epoch == config.max_epochs || lg.loss < config.loss_tolerance) break;

        const std::vector<double>& g = lg.gradient;
        if (!config.conjugate_gradient) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                velocity[i] = config.momentum * velocity[i] - config.learning_rate * g[i];
                w[i] += velocity[i];
            }
            net.assign(w);
            lg = loss_gradient(net, fit_rows);
            continue;
        }

        // Conjugate direction update.
        if (direction.empty()) {
            direction.resize(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) direction[i] = -g[i];
        } else {
            const double gg = dot(g, g);
            const double g_prev = dot(g, prev_grad);
            if (std::abs(g_prev) >= 0.2 * gg) {
                for (std::size_t i = 0; i < g.size(); ++i) direction[i] = -g[i];
                ++trace.restarts;
            } else {
                const double denom = dot(prev_grad, prev_grad);
                const double beta = denom > 0.0 ? std::max(0.0, (gg - g_prev) / denom) : 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) direction[i] = -g[i] + beta * direction[i];
            }
            if (dot(g, direction) >= 0.0) {
                for (std::size_t i = 0; i < g.size(); ++i) direction[i] = -g[i];
                ++trace.restarts;
            }
        }
        const double slope = dot(g, direction);
        std::vector<double> trial(w.size());
        double alpha = std::min(2.0 * step, 1e3);
        bool accepted = false;
        Network candidate = net;
        for (int k = 0; k < 40; ++k) {
            for (std::size_t i = 0; i < w.size(); ++i) trial[i] = w[i] + alpha * direction[i];
            candidate.assign(trial);
            const double f = loss(candidate, fit_rows);
            if (std::isfinite(f) && f <= lg.loss + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;  // no step gives sufficient decrease: treat as converged
        step = alpha;
        prev_grad = g;
        w = trial;
        net = std::move(candidate);
        lg = loss_gradient(net, fit_rows);
    }
    result.network = std::move(best);
    return result;
}

double lipschitz_bound(const Network& net) {
    double bound = 1.0;
    for (const auto& l : net.layers) {
        double max_row = 0.0;
        for (std::size_t r = 0; r < l.outputs; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < l.inputs; ++c) s += std::abs(l.weights[r * l.inputs + c]);
            max_row = std::max(max_row, s);
        }
        bound *= max_row;
    }
    return bound;
}

}  // namespace spotcast::ann
