#pragma once

// Algorithm selection: instance features, a C4.5-style decision tree over
// numeric features (gain ratio, binary threshold splits, no pruning), and a
// cross-validation harness.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "microasp/syntax.hpp"

namespace microasp {

class PortfolioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;
  double at(const std::string& name) const;
};

/// "marriage" (persons, pref_pct, read from %@meta) or "generic" (facts,
/// constants, predicates). "auto" picks marriage when the metadata says so.
FeatureVector extract_features(const Program& p, const std::string& family);
std::string resolve_family(const Program& p, const std::string& family);

using LabelCounts = std::map<std::string, std::size_t>;

double entropy(const LabelCounts& counts);
/// Information gain (bits) of splitting `parent` into `left` and `right`.
double information_gain(const LabelCounts& parent, const LabelCounts& left,
                        const LabelCounts& right);

struct TrainOptions {
  std::size_t min_split = 4;  // nodes with fewer examples become leaves
};

class DecisionTree {
 public:
  static DecisionTree train(const std::vector<std::string>& feature_names,
                            const std::vector<std::vector<double>>& x,
                            const std::vector<std::string>& labels,
                            const TrainOptions& options = {});

  /// Descends with value <= threshold going left.
  std::string predict(const std::vector<double>& x) const;

  const std::vector<std::string>& feature_names() const { return features_; }
  std::size_t depth() const;
  std::size_t leaves() const;

  nlohmann::ordered_json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

  struct Node {
    bool leaf = true;
    std::string label;
    LabelCounts counts;
    int feature = -1;
    double threshold = 0;
    int left = -1;
    int right = -1;
    double gain_ratio = 0;
  };
  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  std::vector<std::string> features_;
  std::vector<Node> nodes_;  // nodes_[0] is the root
};

inline constexpr const char* kStrategyLabels[] = {"full", "lazy", "eager", "post"};

struct DatasetRow {
  std::string instance;
  std::vector<double> features;
  std::string label;
  std::array<double, 4> runtimes{};  // full, lazy, eager, post
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<DatasetRow> rows;
};

Dataset read_dataset_csv(std::istream& in);
void write_dataset_csv(std::ostream& out, const Dataset& d);

/// Fastest strategy by runtime among those that did not time out; ties go
/// to the earlier of full, lazy, eager, post. "none" if all timed out.
std::string best_label(const std::array<double, 4>& runtimes, const std::array<bool, 4>& timed_out);

/// Fold assignment: indices grouped by label, shuffled by seed, dealt
/// round-robin. Every index appears in exactly one fold.
std::vector<std::vector<std::size_t>> make_folds(const std::vector<std::string>& labels,
                                                 std::size_t folds, std::uint64_t seed);

struct Metrics {
  double precision = 0;
  double recall = 0;
  double f_measure = 0;
};

/// Support-weighted averages over the classes present in `truth`.
Metrics weighted_metrics(const std::vector<std::string>& truth,
                         const std::vector<std::string>& predicted);

struct CvReport {
  Metrics metrics;
  std::vector<std::string> predictions;  // per row, from the fold that held it out
  double portfolio_total = 0;
  std::string best_single;
  double best_single_total = 0;
  double gain_pct = 0;  // (best single - portfolio) / best single * 100
  std::size_t examples = 0;
};

/// Rows labelled "none" are left out.
CvReport cross_validate(const Dataset& d, std::size_t folds, std::uint64_t seed,
                        const TrainOptions& options = {});

DecisionTree train_on(const Dataset& d, const TrainOptions& options = {});

}  // namespace microasp
