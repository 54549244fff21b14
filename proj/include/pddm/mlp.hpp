#ifndef PDDM_MLP_H_
#define PDDM_MLP_H_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "pddm/rng.hpp"

namespace pddm {

// one dense layer; also reused as the shape for gradients and Adam moments
struct LayerTensors {
  Eigen::MatrixXd weight;  // (out x in)
  Eigen::VectorXd bias;    // (out)
};

// fully connected network, relu on hidden layers, linear output
struct MlpParams {
  std::vector<LayerTensors> layers;

  // weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero
  static MlpParams Init(int input_dim, int output_dim, const std::vector<int>& hidden, Rng& rng);

  int InputDim() const { return static_cast<int>(layers.front().weight.cols()); }
  int OutputDim() const { return static_cast<int>(layers.back().weight.rows()); }
  std::vector<int> HiddenWidths() const;
  int64_t ParameterCount() const;
  bool AllFinite() const;

  // batch forward: inputs (n x input_dim) -> (n x output_dim)
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& inputs) const;
};

struct MlpGradients {
  std::vector<LayerTensors> layers;
  double loss = 0.0;  // the MSE the gradients differentiate
};

// mean-squared-error loss averaged over batch rows and output dimensions, with
// exact reverse-mode gradients for every weight and bias.
MlpGradients BackwardMse(const MlpParams& params, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& targets);

// forward-only counterpart of BackwardMse's loss value
double MseLoss(const MlpParams& params, const Eigen::MatrixXd& inputs,
               const Eigen::MatrixXd& targets);

struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int64_t step = 0;
  std::vector<LayerTensors> m;
  std::vector<LayerTensors> v;

  static AdamState For(const MlpParams& params, double learning_rate);

  // one bias-corrected update in place
  void Apply(MlpParams& params, const MlpGradients& grads);
};

}  // namespace pddm

#endif  // PDDM_MLP_H_
