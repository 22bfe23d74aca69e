#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace simlr {

struct UrgencyFeatures {
  double c = 0.0;  // weekly new infections per 100K inhabitants
  double v = 0.0;  // change of c from the previous week
};

struct SoftLabelRow {
  double c = 0.0;
  double v = 0.0;
  std::array<double, 3> p{};  // over U = -1, 0, +1
};

using SoftLabelDataset = std::vector<SoftLabelRow>;

// CSV with columns c, v, p_minus1, p_0, p_plus1; '#' lines are comments.
SoftLabelDataset read_soft_labels(std::istream& in);
SoftLabelDataset load_soft_labels(const std::filesystem::path& path);

// One-hidden-layer network producing a softmax distribution over U from
// standardized (c, v). w1 is input-major (2 x 64), w2 output-major (3 x 64).
struct NnCpd {
  static constexpr int kInputs = 2;
  static constexpr int kHidden = 64;
  static constexpr int kOutputs = 3;

  std::array<double, 2> feature_mean{0.0, 0.0};
  std::array<double, 2> feature_scale{1.0, 1.0};
  std::vector<double> w1 = std::vector<double>(kInputs * kHidden, 0.0);
  std::vector<double> b1 = std::vector<double>(kHidden, 0.0);
  std::vector<double> w2 = std::vector<double>(kOutputs * kHidden, 0.0);
  std::vector<double> b2 = std::vector<double>(kOutputs, 0.0);

  std::array<double, 3> predict(const UrgencyFeatures& x) const;

  // Flat view for optimizers and gradient checks: w1, b1, w2, b2.
  std::size_t parameter_count() const;
  double& parameter(std::size_t k);
  double parameter(std::size_t k) const;

  friend bool operator==(const NnCpd&, const NnCpd&) = default;
};

// Standardization from the dataset plus Glorot-uniform weights drawn from a
// seeded mt19937_64; biases start at zero.
NnCpd init_nn_cpd(const SoftLabelDataset& data, std::uint64_t seed);

// Mean cross-entropy against the soft labels. When grad is non-null it
// receives dLoss/dparam with the same layout as the network.
double nn_loss(const NnCpd& net, const SoftLabelDataset& data, NnCpd* grad = nullptr);

// Loss of the predictor that always answers (1/3, 1/3, 1/3).
double uniform_loss(const SoftLabelDataset& data);

struct TrainOptions {
  double step_size = 0.05;
  int epochs = 5000;
  std::uint64_t seed = 42;
};

struct TrainLog {
  double step_size = 0.0;
  int epochs = 0;
  std::uint64_t seed = 0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

// Full-batch gradient descent with a fixed step. Throws DataError on an
// empty dataset and Error(internal) if the loss becomes non-finite.
NnCpd train_nn_cpd(const SoftLabelDataset& data, const TrainOptions& options,
                   TrainLog* log = nullptr);

// Text dump with a version line and shape header. Values are written as
// hexadecimal floating point, so a load reproduces the exact bits.
void write_nn_cpd(std::ostream& out, const NnCpd& net);
NnCpd read_nn_cpd(std::istream& in);
void save_nn_cpd(const std::filesystem::path& path, const NnCpd& net);
NnCpd load_nn_cpd(const std::filesystem::path& path);

}  // namespace simlr
