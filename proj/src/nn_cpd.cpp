#include "simlr/nn_cpd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "simlr/csv.hpp"
#include "simlr/error.hpp"
#include "simlr/kernels.hpp"

namespace simlr {
namespace {

constexpr int H = NnCpd::kHidden;
constexpr int K = NnCpd::kOutputs;

double parse_number(const std::string& field, const char* what) {
  const std::string t = csv::trim(field);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw DataError(std::string("soft labels: bad ") + what + " value '" + field + "'");
  }
  return v;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Forward pass for one standardized input. Fills hidden activations and
// returns log-probabilities.
std::array<double, 3> forward(const NnCpd& net, double x0, double x1, double* hidden) {
  std::copy(net.b1.begin(), net.b1.end(), hidden);
  kernels::axpy(x0, std::span(net.w1.data(), H), std::span(hidden, H));
  kernels::axpy(x1, std::span(net.w1.data() + H, H), std::span(hidden, H));
  for (int j = 0; j < H; ++j) hidden[j] = sigmoid(hidden[j]);
  std::array<double, 3> z{};
  for (int k = 0; k < K; ++k) {
    z[k] = net.b2[k] + kernels::dot(std::span<const double>(hidden, H),
                                    std::span(net.w2.data() + k * H, H));
  }
  const double zmax = std::max({z[0], z[1], z[2]});
  const double lse = zmax + std::log(std::exp(z[0] - zmax) + std::exp(z[1] - zmax) +
                                     std::exp(z[2] - zmax));
  return {z[0] - lse, z[1] - lse, z[2] - lse};
}

void standardize(const NnCpd& net, double c, double v, double& x0, double& x1) {
  x0 = (c - net.feature_mean[0]) / net.feature_scale[0];
  x1 = (v - net.feature_mean[1]) / net.feature_scale[1];
}

void write_block(std::ostream& out, const char* name, const std::vector<double>& values,
                 int rows, int cols) {
  out << name << ' ' << rows << ' ' << cols << '\n';
  char buf[64];
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      std::snprintf(buf, sizeof buf, "%a", values[r * cols + c]);
      out << (c ? " " : "") << buf;
    }
    out << '\n';
  }
}

double read_hex(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) throw ConfigError("nn-cpd weights: truncated file");
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) throw ConfigError("nn-cpd weights: bad number '" + tok + "'");
  return v;
}

void read_block(std::istream& in, const char* name, std::vector<double>& values, int rows,
                int cols) {
  std::string tag;
  int r = 0, c = 0;
  if (!(in >> tag >> r >> c) || tag != name || r != rows || c != cols) {
    throw ConfigError(std::string("nn-cpd weights: expected block '") + name + " " +
                      std::to_string(rows) + " " + std::to_string(cols) + "'");
  }
  values.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  for (auto& v : values) v = read_hex(in);
}

}  // namespace

SoftLabelDataset read_soft_labels(std::istream& in) {
  const auto records = csv::read_records(in);
  if (records.empty()) throw DataError("soft labels: empty file");
  const std::vector<std::string> expected{"c", "v", "p_minus1", "p_0", "p_plus1"};
  std::vector<std::string> header;
  for (const auto& f : records.front()) header.push_back(csv::trim(f));
  if (header != expected) throw DataError("soft labels: header must be c,v,p_minus1,p_0,p_plus1");
  SoftLabelDataset data;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != 5) throw DataError("soft labels: row " + std::to_string(r) + " needs 5 fields");
    SoftLabelRow row;
    row.c = parse_number(rec[0], "c");
    row.v = parse_number(rec[1], "v");
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      row.p[k] = parse_number(rec[2 + k], "probability");
      if (row.p[k] < 0.0 || row.p[k] > 1.0) throw DataError("soft labels: probability outside [0, 1]");
      sum += row.p[k];
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw DataError("soft labels: row " + std::to_string(r) + " does not sum to 1");
    }
    for (auto& p : row.p) p /= sum;
    if (row.c < 0.0) throw DataError("soft labels: negative c");
    data.push_back(row);
  }
  return data;
}

SoftLabelDataset load_soft_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open soft-label dataset: " + path.string());
  return read_soft_labels(in);
}

std::array<double, 3> NnCpd::predict(const UrgencyFeatures& x) const {
  if (!std::isfinite(x.c) || !std::isfinite(x.v)) {
    throw std::invalid_argument("urgency features must be finite");
  }
  double x0, x1;
  standardize(*this, x.c, x.v, x0, x1);
  std::array<double, kHidden> hidden;
  const auto logp = forward(*this, x0, x1, hidden.data());
  std::array<double, 3> p{std::exp(logp[0]), std::exp(logp[1]), std::exp(logp[2])};
  const double s = p[0] + p[1] + p[2];
  for (auto& v : p) v /= s;
  return p;
}

std::size_t NnCpd::parameter_count() const { return w1.size() + b1.size() + w2.size() + b2.size(); }

double& NnCpd::parameter(std::size_t k) {
  if (k < w1.size()) return w1[k];
  k -= w1.size();
  if (k < b1.size()) return b1[k];
  k -= b1.size();
  if (k < w2.size()) return w2[k];
  k -= w2.size();
  return b2.at(k);
}

double NnCpd::parameter(std::size_t k) const { return const_cast<NnCpd*>(this)->parameter(k); }

NnCpd init_nn_cpd(const SoftLabelDataset& data, std::uint64_t seed) {
  if (data.empty()) throw DataError("nn-cpd: empty training set");
  NnCpd net;
  const double n = static_cast<double>(data.size());
  double mc = 0.0, mv = 0.0;
  for (const auto& r : data) {
    mc += r.c;
    mv += r.v;
  }
  mc /= n;
  mv /= n;
  double sc = 0.0, sv = 0.0;
  for (const auto& r : data) {
    sc += (r.c - mc) * (r.c - mc);
    sv += (r.v - mv) * (r.v - mv);
  }
  sc = std::sqrt(sc / n);
  sv = std::sqrt(sv / n);
  net.feature_mean = {mc, mv};
  net.feature_scale = {sc > 0.0 ? sc : 1.0, sv > 0.0 ? sv : 1.0};

  // Uniform doubles from the raw 64-bit stream so the draw does not depend
  // on the standard library's distribution implementation.
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double limit) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return (2.0 * u - 1.0) * limit;
  };
  const double l1 = std::sqrt(6.0 / (NnCpd::kInputs + H));
  const double l2 = std::sqrt(6.0 / (H + K));
  for (auto& w : net.w1) w = uniform(l1);
  for (auto& w : net.w2) w = uniform(l2);
  return net;
}

double nn_loss(const NnCpd& net, const SoftLabelDataset& data, NnCpd* grad) {
  if (data.empty()) throw DataError("nn-cpd: empty training set");
  const double inv_n = 1.0 / static_cast<double>(data.size());
  if (grad) {
    *grad = net;
    for (std::size_t k = 0; k < grad->parameter_count(); ++k) grad->parameter(k) = 0.0;
  }
  std::array<double, H> hidden, dh, dpre;
  double loss = 0.0;
  for (const auto& row : data) {
    double x0, x1;
    standardize(net, row.c, row.v, x0, x1);
    const auto logp = forward(net, x0, x1, hidden.data());
    for (int k = 0; k < K; ++k) {
      if (row.p[k] > 0.0) loss -= row.p[k] * logp[k];
    }
    if (!grad) continue;
    // Softmax with cross-entropy: dL/dz = p - y (labels sum to one).
    dh.fill(0.0);
    for (int k = 0; k < K; ++k) {
      const double dz = (std::exp(logp[k]) - row.p[k]) * inv_n;
      grad->b2[k] += dz;
      kernels::axpy(dz, hidden, std::span(grad->w2.data() + k * H, H));
      kernels::axpy(dz, std::span(net.w2.data() + k * H, H), dh);
    }
    kernels::sigmoid_backprop(hidden, dh, dpre);
    kernels::axpy(1.0, dpre, grad->b1);
    kernels::axpy(x0, dpre, std::span(grad->w1.data(), H));
    kernels::axpy(x1, dpre, std::span(grad->w1.data() + H, H));
  }
  if (grad) {
    grad->feature_mean = net.feature_mean;
    grad->feature_scale = net.feature_scale;
  }
  return loss * inv_n;
}

double uniform_loss(const SoftLabelDataset& data) {
  if (data.empty()) throw DataError("nn-cpd: empty training set");
  double loss = 0.0;
  for (const auto& row : data) {
    for (double p : row.p) loss += p * std::log(3.0);
  }
  return loss / static_cast<double>(data.size());
}

NnCpd train_nn_cpd(const SoftLabelDataset& data, const TrainOptions& options, TrainLog* log) {
  NnCpd net = init_nn_cpd(data, options.seed);
  NnCpd grad;
  const std::size_t count = net.parameter_count();
  double loss = 0.0;
  double initial = 0.0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    loss = nn_loss(net, data, &grad);
    if (epoch == 0) initial = loss;
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "nn-cpd training diverged at epoch " << epoch << " (loss " << loss
          << ", step " << options.step_size << ", rows " << data.size() << ")";
      throw Error(ErrorKind::internal, msg.str());
    }
    for (std::size_t k = 0; k < count; ++k) net.parameter(k) -= options.step_size * grad.parameter(k);
  }
  const double final_loss = nn_loss(net, data);
  if (!std::isfinite(final_loss)) throw Error(ErrorKind::internal, "nn-cpd training produced a non-finite loss");
  if (log) {
    *log = TrainLog{options.step_size, options.epochs, options.seed,
                    options.epochs > 0 ? initial : final_loss, final_loss};
  }
  return net;
}

void write_nn_cpd(std::ostream& out, const NnCpd& net) {
  out << "simlr-nncpd 1\n";
  out << "shape " << NnCpd::kInputs << ' ' << H << ' ' << K << '\n';
  write_block(out, "feature_mean", {net.feature_mean[0], net.feature_mean[1]}, 1, 2);
  write_block(out, "feature_scale", {net.feature_scale[0], net.feature_scale[1]}, 1, 2);
  write_block(out, "w1", net.w1, NnCpd::kInputs, H);
  write_block(out, "b1", net.b1, 1, H);
  write_block(out, "w2", net.w2, K, H);
  write_block(out, "b2", net.b2, 1, K);
  out << "end\n";
}

NnCpd read_nn_cpd(std::istream& in) {
  std::string magic, tag;
  int version = 0, ni = 0, nh = 0, no = 0;
  if (!(in >> magic >> version) || magic != "simlr-nncpd") throw ConfigError("nn-cpd weights: bad magic");
  if (version != 1) throw ConfigError("nn-cpd weights: unsupported version " + std::to_string(version));
  if (!(in >> tag >> ni >> nh >> no) || tag != "shape" || ni != NnCpd::kInputs || nh != H || no != K) {
    throw ConfigError("nn-cpd weights: shape must be 2 64 3");
  }
  NnCpd net;
  std::vector<double> tmp;
  read_block(in, "feature_mean", tmp, 1, 2);
  net.feature_mean = {tmp[0], tmp[1]};
  read_block(in, "feature_scale", tmp, 1, 2);
  net.feature_scale = {tmp[0], tmp[1]};
  read_block(in, "w1", net.w1, NnCpd::kInputs, H);
  read_block(in, "b1", net.b1, 1, H);
  read_block(in, "w2", net.w2, K, H);
  read_block(in, "b2", net.b2, 1, K);
  if (!(in >> tag) || tag != "end") throw ConfigError("nn-cpd weights: missing end marker");
  return net;
}

void save_nn_cpd(const std::filesystem::path& path, const NnCpd& net) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write nn-cpd weights: " + path.string());
  write_nn_cpd(out, net);
}

NnCpd load_nn_cpd(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open nn-cpd weights: " + path.string());
  return read_nn_cpd(in);
}

}  // namespace simlr
