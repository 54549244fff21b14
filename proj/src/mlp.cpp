#include "pddm/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace pddm {

namespace {

std::vector<LayerTensors> ZerosLike(const MlpParams& params) {
  std::vector<LayerTensors> out;
  out.reserve(params.layers.size());
  for (const LayerTensors& layer : params.layers) {
    out.push_back({Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()),
                   Eigen::VectorXd::Zero(layer.bias.size())});
  }
  return out;
}

// forward pass keeping every post-activation (activations[0] is the input)
void ForwardActivations(const MlpParams& params, const Eigen::MatrixXd& inputs,
                        std::vector<Eigen::MatrixXd>& activations) {
  activations.clear();
  activations.reserve(params.layers.size() + 1);
  activations.push_back(inputs);
  for (size_t l = 0; l < params.layers.size(); ++l) {
    const LayerTensors& layer = params.layers[l];
    Eigen::MatrixXd z =
        (activations.back() * layer.weight.transpose()).rowwise() + layer.bias.transpose();
    if (l + 1 < params.layers.size()) {
      z = z.cwiseMax(0.0);  // relu on hidden layers
    }
    activations.push_back(std::move(z));
  }
}

}  // namespace

MlpParams MlpParams::Init(int input_dim, int output_dim, const std::vector<int>& hidden,
                          Rng& rng) {
  if (input_dim < 1 || output_dim < 1) {
    throw std::invalid_argument("MlpParams::Init: dimensions must be positive");
  }
  for (int width : hidden) {
    if (width < 1) {
      throw std::invalid_argument("MlpParams::Init: hidden widths must be positive");
    }
  }
  std::vector<int> widths;
  widths.push_back(input_dim);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(output_dim);

  MlpParams params;
  params.layers.resize(widths.size() - 1);
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    int in = widths[l];
    int out = widths[l + 1];
    double scale = 1.0 / std::sqrt(static_cast<double>(in));
    Eigen::MatrixXd w(out, in);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) {
        w(r, c) = rng.Uniform(-scale, scale);
      }
    }
    params.layers[l].weight = std::move(w);
    params.layers[l].bias = Eigen::VectorXd::Zero(out);
  }
  return params;
}

std::vector<int> MlpParams::HiddenWidths() const {
  std::vector<int> widths;
  for (size_t l = 0; l + 1 < layers.size(); ++l) {
    widths.push_back(static_cast<int>(layers[l].weight.rows()));
  }
  return widths;
}

int64_t MlpParams::ParameterCount() const {
  int64_t count = 0;
  for (const LayerTensors& layer : layers) {
    count += layer.weight.size() + layer.bias.size();
  }
  return count;
}

bool MlpParams::AllFinite() const {
  for (const LayerTensors& layer : layers) {
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
  }
  return true;
}

Eigen::MatrixXd MlpParams::Forward(const Eigen::MatrixXd& inputs) const {
  if (inputs.cols() != InputDim()) {
    throw std::invalid_argument("MlpParams::Forward: input dimension mismatch");
  }
  Eigen::MatrixXd a = inputs;
  for (size_t l = 0; l < layers.size(); ++l) {
    a = (a * layers[l].weight.transpose()).rowwise() + layers[l].bias.transpose();
    if (l + 1 < layers.size()) {
      a = a.cwiseMax(0.0);
    }
  }
  return a;
}

MlpGradients BackwardMse(const MlpParams& params, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& targets) {
  if (inputs.rows() != targets.rows()) {
    throw std::invalid_argument("BackwardMse: batch size mismatch");
  }
  if (inputs.rows() == 0) {
    throw std::invalid_argument("BackwardMse: empty batch");
  }
  if (targets.cols() != params.layers.back().weight.rows()) {
    throw std::invalid_argument("BackwardMse: target dimension mismatch");
  }

  std::vector<Eigen::MatrixXd> activations;
  ForwardActivations(params, inputs, activations);

  const Eigen::MatrixXd& prediction = activations.back();
  Eigen::MatrixXd residual = prediction - targets;
  const double denom = static_cast<double>(residual.size());

  MlpGradients grads;
  grads.loss = residual.squaredNorm() / denom;
  grads.layers.resize(params.layers.size());

  // d(loss)/d(prediction), then walk the layers backwards
  Eigen::MatrixXd delta = (2.0 / denom) * residual;
  for (int l = static_cast<int>(params.layers.size()) - 1; l >= 0; --l) {
    grads.layers[l].weight = delta.transpose() * activations[l];
    grads.layers[l].bias = delta.colwise().sum().transpose();
    if (l > 0) {
      delta = delta * params.layers[l].weight;
      // relu subgradient: zero where the hidden activation was clamped
      delta = ((activations[l].array() > 0.0).cast<double>() * delta.array()).matrix();
    }
  }
  return grads;
}

double MseLoss(const MlpParams& params, const Eigen::MatrixXd& inputs,
               const Eigen::MatrixXd& targets) {
  Eigen::MatrixXd residual = params.Forward(inputs) - targets;
  return residual.squaredNorm() / static_cast<double>(residual.size());
}

AdamState AdamState::For(const MlpParams& params, double learning_rate) {
  AdamState state;
  state.learning_rate = learning_rate;
  state.m = ZerosLike(params);
  state.v = ZerosLike(params);
  return state;
}

void AdamState::Apply(MlpParams& params, const MlpGradients& grads) {
  if (grads.layers.size() != params.layers.size()) {
    throw std::invalid_argument("AdamState::Apply: gradient/parameter shape mismatch");
  }
  ++step;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
  for (size_t l = 0; l < params.layers.size(); ++l) {
    auto update = [&](auto& p, auto& mm, auto& vv, const auto& g) {
      mm = beta1 * mm + (1.0 - beta1) * g;
      vv = (beta2 * vv.array() + (1.0 - beta2) * g.array().square()).matrix();
      p.array() -= learning_rate * (mm.array() / c1) / ((vv.array() / c2).sqrt() + epsilon);
    };
    update(params.layers[l].weight, m[l].weight, v[l].weight, grads.layers[l].weight);
    update(params.layers[l].bias, m[l].bias, v[l].bias, grads.layers[l].bias);
  }
}

}  // namespace pddm
