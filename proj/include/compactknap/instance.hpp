#ifndef COMPACTKNAP_INSTANCE_HPP
#define COMPACTKNAP_INSTANCE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace compactknap {

using Weight = std::int64_t;

/**
 * @brief A min-knapsack instance with a compactness parameter.
 *
 * Items are ordered; item indices are 0-based in memory and 1-based in every
 * file format and report. Weights are raw integer counts. Instances are
 * immutable once constructed, so they can be shared freely across threads.
 *
 * Construction does not enforce the feasibility invariants; an instance whose
 * total weight is below the capacity can be stored and is reported by
 * validate_instance().
 */
class Instance {
public:
  Instance() = default;
  Instance(std::vector<Weight> weights, std::vector<double> costs,
           double capacity, int delta,
           nlohmann::json meta = nlohmann::json::object());

  int n() const { return static_cast<int>(weights_.size()); }
  const std::vector<Weight> &weights() const { return weights_; }
  const std::vector<double> &costs() const { return costs_; }
  double capacity() const { return capacity_; }
  int delta() const { return delta_; }
  const nlohmann::json &meta() const { return meta_; }

  Weight totalWeight() const;
  double totalCost() const;

  bool operator==(const Instance &other) const;

private:
  std::vector<Weight> weights_;
  std::vector<double> costs_;
  double capacity_ = 0.0;
  int delta_ = 1;
  nlohmann::json meta_ = nlohmann::json::object();
};

/// A set of chosen items, stored sorted and without duplicates.
class Selection {
public:
  Selection() = default;
  /// Throws std::invalid_argument on out-of-range or duplicate indices.
  Selection(std::vector<int> items, int n);

  static Selection fromMask(const std::vector<bool> &mask);
  /// Builds a selection from 1-based indices as they appear in files.
  static Selection fromOneBased(const std::vector<int> &items, int n);

  const std::vector<int> &items() const { return items_; }
  std::vector<int> oneBased() const;
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool contains(int item) const;
  std::vector<bool> mask(int n) const;

  bool operator==(const Selection &other) const = default;

private:
  std::vector<int> items_;
};

/// A compactness pair (i, j) with j - i > delta and its multiplicity
/// kappa = floor((j - i - 1) / delta).
struct PairCoefficient {
  int i = 0;
  int j = 0;
  int kappa = 0;

  bool operator==(const PairCoefficient &) const = default;
};

/// Every pair i < j with j - i > delta, in lexicographic order.
std::vector<PairCoefficient> compactness_pairs(int n, int delta);

/// Human-readable list of violated instance invariants; empty when valid.
std::vector<std::string> validate_instance(const Instance &inst);

struct FeasibilityReport {
  bool knapsack_ok = false;
  bool compactness_ok = false;
  double weight = 0.0;
  std::vector<PairCoefficient> violated_pairs;

  bool feasible() const { return knapsack_ok && compactness_ok; }
};

FeasibilityReport check_selection(const Instance &inst, const Selection &sel);

/// The classical max-knapsack obtained through z = 1 - x.
struct MaxKnapsack {
  std::vector<Weight> weights;
  std::vector<double> profits;
  double capacity = 0.0;
};

MaxKnapsack complement_instance(const Instance &inst);

/// Complement of a selection within [0, n).
Selection complement_selection(const Selection &sel, int n);

// JSON file format: {"n", "weights", "costs", "q", "delta", "meta"}.
nlohmann::json to_json(const Instance &inst);
Instance instance_from_json(const nlohmann::json &doc);
std::string serialize(const Instance &inst);
Instance parse_instance(const std::string &text);
Instance read_instance(const std::filesystem::path &path);
void write_instance(const Instance &inst, const std::filesystem::path &path);

} // namespace compactknap

#endif
