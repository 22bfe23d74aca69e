#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "simlr/checksum.hpp"
#include "simlr/error.hpp"
#include "simlr/pgm.hpp"

namespace simlr {
namespace {

using nlohmann::json;

std::string normalize_label(std::string label) {
  if (label.size() > 1 && label[0] == '+') label.erase(0, 1);
  return label;
}

std::string tuple_text(std::span<const std::string> labels) {
  std::string out = "(";
  for (std::size_t k = 0; k < labels.size(); ++k) out += (k ? ", " : "") + labels[k];
  return out + ")";
}

void require_shape(const Cpt& cpt, std::size_t parents, std::size_t child_states,
                   const char* op) {
  if (cpt.parents().size() != parents || cpt.child_states().size() != child_states) {
    throw ConfigError(std::string(op) + ": CPT '" + cpt.node() + "' has the wrong shape");
  }
}

Cpt parse_node(const json& node) {
  try {
    std::vector<CptParent> parents;
    for (const auto& p : node.at("parents")) {
      CptParent parent{p.at("name").get<std::string>(), {}};
      for (const auto& s : p.at("states")) parent.states.push_back(normalize_label(s.get<std::string>()));
      parents.push_back(std::move(parent));
    }
    std::vector<std::string> states;
    for (const auto& s : node.at("states")) states.push_back(normalize_label(s.get<std::string>()));

    std::size_t total = 1;
    for (const auto& p : parents) total *= p.states.size();
    std::vector<std::vector<double>> rows(total);
    std::vector<bool> seen(total, false);
    for (const auto& r : node.at("rows")) {
      std::vector<std::string> given;
      for (const auto& g : r.at("given")) given.push_back(normalize_label(g.get<std::string>()));
      if (given.size() != parents.size()) {
        throw ConfigError("CPT '" + node.at("node").get<std::string>() + "': row " +
                          tuple_text(given) + " has wrong arity");
      }
      std::size_t index = 0;
      for (std::size_t k = 0; k < parents.size(); ++k) {
        const auto& st = parents[k].states;
        const auto it = std::find(st.begin(), st.end(), given[k]);
        if (it == st.end()) {
          throw ConfigError("CPT '" + node.at("node").get<std::string>() + "': unknown state '" +
                            given[k] + "' for parent " + parents[k].name);
        }
        index = index * st.size() + static_cast<std::size_t>(it - st.begin());
      }
      if (seen[index]) {
        throw ConfigError("CPT '" + node.at("node").get<std::string>() + "': duplicate row " +
                          tuple_text(given));
      }
      seen[index] = true;
      rows[index] = r.at("p").get<std::vector<double>>();
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
      if (seen[idx]) continue;
      std::vector<std::string> labels(parents.size());
      std::size_t rem = idx;
      for (std::size_t k = parents.size(); k-- > 0;) {
        labels[k] = parents[k].states[rem % parents[k].states.size()];
        rem /= parents[k].states.size();
      }
      throw ConfigError("CPT '" + node.at("node").get<std::string>() + "': missing row " +
                        tuple_text(labels));
    }
    return Cpt(node.at("node").get<std::string>(), std::move(parents), std::move(states),
               std::move(rows));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("CPT file: ") + e.what());
  }
}

json node_json(const Cpt& cpt, const std::string& note) {
  json node;
  node["node"] = cpt.node();
  node["note"] = note;
  json parents = json::array();
  for (const auto& p : cpt.parents()) parents.push_back({{"name", p.name}, {"states", p.states}});
  node["parents"] = parents;
  node["states"] = cpt.child_states();
  json rows = json::array();
  const auto& ps = cpt.parents();
  for (std::size_t idx = 0; idx < cpt.row_count(); ++idx) {
    std::vector<std::string> labels(ps.size());
    std::size_t rem = idx;
    for (std::size_t k = ps.size(); k-- > 0;) {
      labels[k] = ps[k].states[rem % ps[k].states.size()];
      rem /= ps[k].states.size();
    }
    rows.push_back({{"given", labels}, {"p", cpt.rows()[idx]}});
  }
  node["rows"] = rows;
  return node;
}

}  // namespace

Cpt::Cpt(std::string node, std::vector<CptParent> parents, std::vector<std::string> child_states,
         std::vector<std::vector<double>> rows)
    : node_(std::move(node)),
      parents_(std::move(parents)),
      child_states_(std::move(child_states)),
      rows_(std::move(rows)) {
  if (child_states_.empty()) throw ConfigError("CPT '" + node_ + "': no child states");
  std::size_t total = 1;
  for (const auto& p : parents_) {
    if (p.states.empty()) throw ConfigError("CPT '" + node_ + "': parent " + p.name + " has no states");
    total *= p.states.size();
  }
  if (rows_.size() != total) {
    throw ConfigError("CPT '" + node_ + "': expected " + std::to_string(total) + " rows, got " +
                      std::to_string(rows_.size()));
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != child_states_.size()) {
      throw ConfigError("CPT '" + node_ + "': row " + std::to_string(r) + " has wrong width");
    }
    double sum = 0.0;
    for (double p : rows_[r]) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("CPT '" + node_ + "': entry outside [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("CPT '" + node_ + "': row " + std::to_string(r) + " sums to " +
                        std::to_string(sum));
    }
  }
}

const std::vector<double>& Cpt::row(std::span<const int> idx) const {
  if (idx.size() != parents_.size()) throw ConfigError("CPT '" + node_ + "': wrong parent arity");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || static_cast<std::size_t>(idx[k]) >= parents_[k].states.size()) {
      throw ConfigError("CPT '" + node_ + "': parent state out of range");
    }
    flat = flat * parents_[k].states.size() + static_cast<std::size_t>(idx[k]);
  }
  return rows_[flat];
}

int Cpt::parent_state_index(std::size_t parent, const std::string& label) const {
  const auto& st = parents_.at(parent).states;
  const auto it = std::find(st.begin(), st.end(), normalize_label(label));
  return it == st.end() ? -1 : static_cast<int>(it - st.begin());
}

const std::vector<double>& Cpt::row_by_labels(std::span<const std::string> labels) const {
  if (labels.size() != parents_.size()) throw ConfigError("CPT '" + node_ + "': wrong parent arity");
  std::vector<int> idx(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    idx[k] = parent_state_index(k, labels[k]);
    if (idx[k] < 0) {
      throw ConfigError("CPT '" + node_ + "': missing row " +
                        tuple_text(std::vector<std::string>(labels.begin(), labels.end())));
    }
  }
  return row(idx);
}

std::string cpt_checksum(const std::string& json_text) {
  try {
    const json doc = json::parse(json_text);
    return hex64(fnv1a64(doc.at("nodes").dump()));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("CPT file: ") + e.what());
  }
}

CptSet parse_cpts(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("CPT file is not valid JSON: ") + e.what());
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw ConfigError("CPT file: missing 'nodes' array");
  const std::string sum = hex64(fnv1a64(doc["nodes"].dump()));
  if (doc.contains("checksum") && doc["checksum"].get<std::string>() != sum) {
    throw ConfigError("CPT file: checksum mismatch (file says " + doc["checksum"].get<std::string>() +
                      ", content hashes to " + sum + ")");
  }
  CptSet set;
  bool have_ct = false, have_o = false, have_cp = false;
  for (const auto& node : doc["nodes"]) {
    Cpt cpt = parse_node(node);
    if (cpt.node() == "CT") { set.ct = std::move(cpt); have_ct = true; }
    else if (cpt.node() == "O") { set.o = std::move(cpt); have_o = true; }
    else if (cpt.node() == "CP") { set.cp = std::move(cpt); have_cp = true; }
    else throw ConfigError("CPT file: unknown node '" + cpt.node() + "'");
  }
  if (!have_ct || !have_o || !have_cp) throw ConfigError("CPT file: nodes CT, O and CP are all required");
  require_shape(set.ct, 3, 3, "CPT file");
  require_shape(set.o, 1, 2, "CPT file");
  require_shape(set.cp, 2, 3, "CPT file");
  set.checksum = sum;
  return set;
}

CptSet load_cpts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CPT file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_cpts(buf.str());
}

std::string cpts_to_json(const CptSet& set) {
  const std::string placeholder = "hand-set placeholder, not estimated from data";
  json doc;
  doc["format"] = "simlr-cpt/1";
  doc["nodes"] = json::array({
      node_json(set.ct, placeholder + ": no change in the three lags keeps the trend; otherwise the "
                                     "most recent non-zero lag sets the direction with 0.8/0.2 mass"),
      node_json(set.o, placeholder + ": willingness grows with weeks since the last change"),
      node_json(set.cp, placeholder + ": no willingness means no change; with willingness the "
                                     "change follows the urgency"),
  });
  doc["checksum"] = hex64(fnv1a64(doc["nodes"].dump()));
  return doc.dump(2) + "\n";
}

CptSet default_cpts() {
  const std::vector<std::string> tern{"-1", "0", "1"};
  CptSet set;

  std::vector<std::vector<double>> ct_rows;
  for (int l1 = -1; l1 <= 1; ++l1) {
    for (int l2 = -1; l2 <= 1; ++l2) {
      for (int l3 = -1; l3 <= 1; ++l3) {
        const int recent = l1 != 0 ? l1 : (l2 != 0 ? l2 : l3);
        if (recent == 0) ct_rows.push_back({0.0, 1.0, 0.0});
        else if (recent > 0) ct_rows.push_back({0.8, 0.2, 0.0});  // stricter: expect a downturn
        else ct_rows.push_back({0.0, 0.2, 0.8});                   // relaxed: expect an upturn
      }
    }
  }
  set.ct = Cpt("CT", {{"cp_lag1", tern}, {"cp_lag2", tern}, {"cp_lag3", tern}}, tern, ct_rows);

  set.o = Cpt("O", {{"W", {"0", "1", "2", "3", "4+"}}}, {"0", "1"},
              {{0.95, 0.05}, {0.8, 0.2}, {0.6, 0.4}, {0.4, 0.6}, {0.2, 0.8}});

  set.cp = Cpt("CP", {{"O", {"0", "1"}}, {"U", tern}}, tern,
               {{0.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 1.0, 0.0},
                {0.8, 0.2, 0.0}, {0.1, 0.8, 0.1}, {0.0, 0.2, 0.8}});
  set.checksum = cpt_checksum(cpts_to_json(set));
  return set;
}

Dist3 ct_distribution(int cp_lag1, int cp_lag2, int cp_lag3, const Cpt& cpt) {
  require_shape(cpt, 3, 3, "ct_distribution");
  const std::array<std::string, 3> labels{std::to_string(cp_lag1), std::to_string(cp_lag2),
                                          std::to_string(cp_lag3)};
  const auto& row = cpt.row_by_labels(labels);
  return {row[0], row[1], row[2]};
}

std::size_t willingness_bin(int weeks_since_change, const CptParent& w_parent) {
  if (weeks_since_change < 0) throw std::invalid_argument("weeks since change must be >= 0");
  for (std::size_t k = 0; k < w_parent.states.size(); ++k) {
    const std::string& label = w_parent.states[k];
    const bool open = !label.empty() && label.back() == '+';
    const int lo = std::stoi(open ? label.substr(0, label.size() - 1) : label);
    if (open ? weeks_since_change >= lo : weeks_since_change == lo) return k;
  }
  throw ConfigError("willingness CPT: no bin for " + std::to_string(weeks_since_change) +
                    " weeks since change");
}

Dist2 willingness_distribution(int weeks_since_change, const Cpt& cpt) {
  require_shape(cpt, 1, 2, "willingness_distribution");
  const int bin = static_cast<int>(willingness_bin(weeks_since_change, cpt.parents()[0]));
  const auto& row = cpt.row(std::span(&bin, 1));
  return {row[0], row[1]};
}

Dist3 cp_distribution(int o, int u, const Cpt& cpt) {
  require_shape(cpt, 2, 3, "cp_distribution");
  const std::array<std::string, 2> labels{std::to_string(o), std::to_string(u)};
  const auto& row = cpt.row_by_labels(labels);
  return {row[0], row[1], row[2]};
}

Dist3 urgency_distribution(const UrgencyFeatures& features, const NnCpd& net) {
  return net.predict(features);
}

}  // namespace simlr
