#include "compactknap/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace compactknap {

Instance::Instance(std::vector<Weight> weights, std::vector<double> costs,
                   double capacity, int delta, nlohmann::json meta)
    : weights_(std::move(weights)), costs_(std::move(costs)),
      capacity_(capacity), delta_(delta), meta_(std::move(meta)) {
  if (weights_.size() != costs_.size()) {
    throw std::invalid_argument("weights and costs must have the same length");
  }
  if (!meta_.is_object()) {
    throw std::invalid_argument("instance meta must be a JSON object");
  }
}

Weight Instance::totalWeight() const {
  return std::accumulate(weights_.begin(), weights_.end(), Weight{0});
}

double Instance::totalCost() const {
  return std::accumulate(costs_.begin(), costs_.end(), 0.0);
}

bool Instance::operator==(const Instance &other) const {
  return weights_ == other.weights_ && costs_ == other.costs_ &&
         capacity_ == other.capacity_ && delta_ == other.delta_ &&
         meta_ == other.meta_;
}

Selection::Selection(std::vector<int> items, int n) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  for (std::size_t k = 0; k < items_.size(); ++k) {
    if (items_[k] < 0 || items_[k] >= n) {
      throw std::invalid_argument("selection index " +
                                  std::to_string(items_[k] + 1) +
                                  " outside [1, " + std::to_string(n) + "]");
    }
    if (k > 0 && items_[k] == items_[k - 1]) {
      throw std::invalid_argument("duplicate selection index " +
                                  std::to_string(items_[k] + 1));
    }
  }
}

Selection Selection::fromMask(const std::vector<bool> &mask) {
  std::vector<int> items;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      items.push_back(static_cast<int>(i));
    }
  }
  return Selection(std::move(items), static_cast<int>(mask.size()));
}

Selection Selection::fromOneBased(const std::vector<int> &items, int n) {
  std::vector<int> zero;
  zero.reserve(items.size());
  for (int i : items) {
    zero.push_back(i - 1);
  }
  return Selection(std::move(zero), n);
}

std::vector<int> Selection::oneBased() const {
  std::vector<int> out(items_);
  for (int &i : out) {
    ++i;
  }
  return out;
}

bool Selection::contains(int item) const {
  return std::binary_search(items_.begin(), items_.end(), item);
}

std::vector<bool> Selection::mask(int n) const {
  std::vector<bool> m(static_cast<std::size_t>(n), false);
  for (int i : items_) {
    m[static_cast<std::size_t>(i)] = true;
  }
  return m;
}

std::vector<PairCoefficient> compactness_pairs(int n, int delta) {
  if (n < 1 || delta < 1) {
    throw std::invalid_argument("compactness_pairs requires n >= 1, delta >= 1");
  }
  std::vector<PairCoefficient> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + delta + 1; j < n; ++j) {
      pairs.push_back({i, j, (j - i - 1) / delta});
    }
  }
  return pairs;
}

std::vector<std::string> validate_instance(const Instance &inst) {
  std::vector<std::string> issues;
  if (inst.n() < 1) {
    issues.emplace_back("instance has no items (n must be >= 1)");
  }
  if (inst.weights().size() != inst.costs().size()) {
    issues.emplace_back("weights and costs lengths differ");
  }
  for (int i = 0; i < inst.n(); ++i) {
    if (inst.weights()[i] < 0) {
      issues.push_back("weight of item " + std::to_string(i + 1) +
                       " is negative");
    }
    const double c = inst.costs()[i];
    if (!std::isfinite(c) || c < 0.0) {
      issues.push_back("cost of item " + std::to_string(i + 1) +
                       " is negative or not finite");
    }
  }
  if (!std::isfinite(inst.capacity()) || inst.capacity() <= 0.0) {
    issues.emplace_back("capacity q must be a finite value > 0");
  }
  if (inst.delta() < 1) {
    issues.emplace_back("delta must be >= 1");
  }
  if (static_cast<double>(inst.totalWeight()) < inst.capacity()) {
    issues.emplace_back("total weight < q: no selection can meet the capacity");
  }
  return issues;
}

FeasibilityReport check_selection(const Instance &inst, const Selection &sel) {
  FeasibilityReport report;
  const int n = inst.n();
  for (int i : sel.items()) {
    if (i >= n) {
      throw std::invalid_argument("selection does not fit the instance");
    }
    report.weight += static_cast<double>(inst.weights()[i]);
  }
  report.knapsack_ok = report.weight >= inst.capacity();

  // prefix[k] = number of selected items among [0, k)
  std::vector<int> prefix(static_cast<std::size_t>(n) + 1, 0);
  const std::vector<bool> chosen = sel.mask(n);
  for (int k = 0; k < n; ++k) {
    prefix[k + 1] = prefix[k] + (chosen[k] ? 1 : 0);
  }
  for (std::size_t a = 0; a < sel.items().size(); ++a) {
    for (std::size_t b = a + 1; b < sel.items().size(); ++b) {
      const int i = sel.items()[a];
      const int j = sel.items()[b];
      if (j - i <= inst.delta()) {
        continue;
      }
      const int kappa = (j - i - 1) / inst.delta();
      const int between = prefix[j] - prefix[i + 1];
      if (kappa > between) {
        report.violated_pairs.push_back({i, j, kappa});
      }
    }
  }
  report.compactness_ok = report.violated_pairs.empty();
  return report;
}

MaxKnapsack complement_instance(const Instance &inst) {
  MaxKnapsack mk;
  mk.weights = inst.weights();
  mk.profits = inst.costs();
  mk.capacity = static_cast<double>(inst.totalWeight()) - inst.capacity();
  return mk;
}

Selection complement_selection(const Selection &sel, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (!sel.contains(i)) {
      out.push_back(i);
    }
  }
  return Selection(std::move(out), n);
}

nlohmann::json to_json(const Instance &inst) {
  nlohmann::json doc;
  doc["n"] = inst.n();
  doc["weights"] = inst.weights();
  doc["costs"] = inst.costs();
  doc["q"] = inst.capacity();
  doc["delta"] = inst.delta();
  doc["meta"] = inst.meta();
  return doc;
}

Instance instance_from_json(const nlohmann::json &doc) {
  if (!doc.is_object()) {
    throw std::invalid_argument("instance document must be a JSON object");
  }
  for (const char *key : {"n", "weights", "costs", "q", "delta"}) {
    if (!doc.contains(key)) {
      throw std::invalid_argument(std::string("instance is missing field '") +
                                  key + "'");
    }
  }
  auto weights = doc.at("weights").get<std::vector<Weight>>();
  auto costs = doc.at("costs").get<std::vector<double>>();
  const int n = doc.at("n").get<int>();
  if (static_cast<std::size_t>(n) != weights.size()) {
    throw std::invalid_argument("field n does not match the weights length");
  }
  nlohmann::json meta = doc.value("meta", nlohmann::json::object());
  return Instance(std::move(weights), std::move(costs),
                  doc.at("q").get<double>(), doc.at("delta").get<int>(),
                  std::move(meta));
}

std::string serialize(const Instance &inst) { return to_json(inst).dump(2); }

Instance parse_instance(const std::string &text) {
  return instance_from_json(nlohmann::json::parse(text));
}

Instance read_instance(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open instance file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

void write_instance(const Instance &inst, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write instance file " + path.string());
  }
  out << serialize(inst) << '\n';
}

} // namespace compactknap
