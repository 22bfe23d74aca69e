#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simlr/nn_cpd.hpp"

namespace simlr {

// Probability vectors over the ternary nodes (CT, CP, U) are indexed by
// value + 1, i.e. {-1, 0, +1}. O is binary and indexed by value.
using Dist3 = std::array<double, 3>;
using Dist2 = std::array<double, 2>;

inline int ternary_index(int value) { return value + 1; }

struct CptParent {
  std::string name;
  std::vector<std::string> states;
};

// Conditional probability table over discrete parents. Rows are stored in
// row-major order of the parent state tuple (first parent slowest).
class Cpt {
 public:
  Cpt() = default;
  // Validates shape, totality and normalization (1e-9); throws ConfigError.
  Cpt(std::string node, std::vector<CptParent> parents, std::vector<std::string> child_states,
      std::vector<std::vector<double>> rows);

  const std::string& node() const { return node_; }
  const std::vector<CptParent>& parents() const { return parents_; }
  const std::vector<std::string>& child_states() const { return child_states_; }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  const std::vector<double>& row(std::span<const int> parent_state_indices) const;
  // Parent state lookup by label; throws ConfigError naming the tuple.
  const std::vector<double>& row_by_labels(std::span<const std::string> labels) const;
  int parent_state_index(std::size_t parent, const std::string& label) const;

 private:
  std::string node_;
  std::vector<CptParent> parents_;
  std::vector<std::string> child_states_;
  std::vector<std::vector<double>> rows_;
};

// The three discrete nodes: CT | (CP lag 1, lag 2, lag 3), O | W bin, CP | (O, U).
struct CptSet {
  Cpt ct;
  Cpt o;
  Cpt cp;
  std::string checksum;
};

struct PgmConfig {
  CptSet cpts;
  NnCpd urgency;
};

// Reads the JSON CPT file. When the file carries a "checksum" field it must
// match the checksum recomputed over the "nodes" content.
CptSet load_cpts(const std::filesystem::path& path);
CptSet parse_cpts(const std::string& json_text);
std::string cpt_checksum(const std::string& json_text);

// The table the repository ships as config/cpt_default.json.
CptSet default_cpts();
// Serializes with notes and a checksum, in the shipped file layout.
std::string cpts_to_json(const CptSet& set);

// Lags are CP values 2, 3 and 4 weeks before the target week (most recent first).
Dist3 ct_distribution(int cp_lag1, int cp_lag2, int cp_lag3, const Cpt& cpt);
Dist2 willingness_distribution(int weeks_since_change, const Cpt& cpt);
Dist3 cp_distribution(int o, int u, const Cpt& cpt);
Dist3 urgency_distribution(const UrgencyFeatures& features, const NnCpd& net);

// Bin label for weeks since the last change: labels are "k" (exact) or "k+"
// (k or more). Throws ConfigError when no bin matches.
std::size_t willingness_bin(int weeks_since_change, const CptParent& w_parent);

// Joint distribution over future CP paths (CP_{t+1} .. CP_{t+H}) given the
// weeks since the last change at week t and the urgency distributions of
// U_t .. U_{t+H-1}. Weeks since change is propagated along each path.
struct PolicyPathDistribution {
  std::vector<std::pair<std::vector<int>, double>> paths;
  std::vector<Dist3> marginals;
};

PolicyPathDistribution policy_chain(const CptSet& cpts, int weeks_since_change,
                                    std::span<const Dist3> urgency);

// Urgency features for week k from weekly new infections.
UrgencyFeatures urgency_features(double cases, double previous_cases, double population);

// weekly_cases covers observed weeks through the origin week t followed by
// projected weeks t+1 .. t+H-1. Returns CP marginals for t+1 .. t+H.
std::vector<Dist3> forecast_policy_chain(int weeks_since_change,
                                         std::span<const double> weekly_cases,
                                         std::size_t observed_weeks, double population,
                                         const PgmConfig& pgm, int horizon);

}  // namespace simlr
