#include "microasp/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "microasp/benchgen.hpp"

namespace microasp {

double FeatureVector::at(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw PortfolioError("no feature named " + name);
}

std::string resolve_family(const Program& p, const std::string& family) {
  if (family != "auto") return family;
  auto it = p.meta.find("family");
  return it != p.meta.end() && it->second == "marriage" ? "marriage" : "generic";
}

FeatureVector extract_features(const Program& p, const std::string& requested) {
  std::string family = resolve_family(p, requested);
  FeatureVector fv;
  if (family == "marriage") {
    auto num = [&](const char* key) {
      auto it = p.meta.find(key);
      if (it == p.meta.end()) throw PortfolioError(std::string("marriage instance lacks meta ") + key);
      return std::stod(it->second);
    };
    fv.names = {"persons", "pref_pct"};
    fv.values = p.rules.empty() ? std::vector<double>{0, 0} : std::vector<double>{num("n"), num("k")};
    return fv;
  }
  if (family != "generic") throw PortfolioError("unknown feature family: " + family);
  std::size_t facts = 0;
  std::set<std::string> constants, predicates;
  auto term = [&](const Term& t) {
    if (t.is_constant()) constants.insert(to_string(t));
  };
  auto atom = [&](const Atom& a) {
    predicates.insert(predicate_key(a.predicate, a.arity()));
    for (const auto& t : a.args) term(t);
  };
  for (const auto& r : p.rules) {
    if (r.is_fact()) ++facts;
    if (r.head) atom(*r.head);
    for (const auto& el : r.body) {
      if (auto* l = std::get_if<Literal>(&el)) {
        atom(l->atom);
      } else {
        const auto& c = std::get<Comparison>(el);
        for (const auto& t : c.lhs.terms) term(t);
        for (const auto& t : c.rhs.terms) term(t);
      }
    }
  }
  fv.names = {"facts", "constants", "predicates"};
  fv.values = {double(facts), double(constants.size()), double(predicates.size())};
  return fv;
}

double entropy(const LabelCounts& counts) {
  double n = 0;
  for (const auto& [_, c] : counts) n += double(c);
  if (n == 0) return 0;
  double h = 0;
  for (const auto& [_, c] : counts) {
    if (c == 0) continue;
    double p = double(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

namespace {

std::size_t total(const LabelCounts& c) {
  std::size_t n = 0;
  for (const auto& [_, v] : c) n += v;
  return n;
}

constexpr double kEps = 1e-12;

}  // namespace

double information_gain(const LabelCounts& parent, const LabelCounts& left,
                        const LabelCounts& right) {
  double n = double(total(parent));
  if (n == 0) return 0;
  double nl = double(total(left)), nr = double(total(right));
  return entropy(parent) - nl / n * entropy(left) - nr / n * entropy(right);
}

namespace {

struct Candidate {
  int feature;
  double threshold;
  double gain;
  double ratio;
};

class Builder {
 public:
  Builder(const std::vector<std::vector<double>>& x, const std::vector<std::string>& y,
          const TrainOptions& opts, std::vector<DecisionTree::Node>& nodes)
      : x_(x), y_(y), opts_(opts), nodes_(nodes) {
    for (const auto& l : y) ++global_[l];
  }

  int build(std::vector<std::size_t> idx) {
    LabelCounts counts;
    for (auto i : idx) ++counts[y_[i]];
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].counts = counts;
    nodes_[id].label = majority(counts);
    if (counts.size() <= 1 || idx.size() < opts_.min_split) return id;
    auto split = best(idx, counts);
    if (!split) return id;
    std::vector<std::size_t> left, right;
    for (auto i : idx) (x_[i][split->feature] <= split->threshold ? left : right).push_back(i);
    int l = build(std::move(left));
    int r = build(std::move(right));
    auto& node = nodes_[id];
    node.leaf = false;
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.gain_ratio = split->ratio;
    node.left = l;
    node.right = r;
    return id;
  }

 private:
  std::string majority(const LabelCounts& counts) const {
    std::string best;
    std::size_t best_n = 0;
    for (const auto& [label, n] : counts) {
      if (best.empty() || n > best_n ||
          (n == best_n && global_.at(label) > global_.at(best))) {
        best = label;
        best_n = n;
      }
    }
    return best;  // map order makes remaining ties lexicographic
  }

  std::optional<Candidate> best(const std::vector<std::size_t>& idx, const LabelCounts& parent) const {
    std::vector<Candidate> cands;
    std::size_t features = x_.empty() ? 0 : x_[idx[0]].size();
    for (std::size_t f = 0; f < features; ++f) {
      std::vector<std::size_t> order = idx;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return x_[a][f] < x_[b][f]; });
      LabelCounts left, right = parent;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const auto& l = y_[order[k]];
        ++left[l];
        if (--right[l] == 0) right.erase(l);
        double v = x_[order[k]][f], next = x_[order[k + 1]][f];
        if (v == next) continue;
        double gain = information_gain(parent, left, right);
        if (gain <= kEps) continue;
        double n = double(order.size()), nl = double(k + 1);
        double p = nl / n;
        double split_info = -p * std::log2(p) - (1 - p) * std::log2(1 - p);
        cands.push_back({static_cast<int>(f), (v + next) / 2, gain, gain / split_info});
      }
    }
    if (cands.empty()) return std::nullopt;
    double mean_gain = 0;
    for (const auto& c : cands) mean_gain += c.gain;
    mean_gain /= double(cands.size());
    std::optional<Candidate> best;
    for (const auto& c : cands) {
      if (c.gain + kEps < mean_gain) continue;
      if (!best || c.ratio > best->ratio + kEps) best = c;
    }
    return best;
  }

  const std::vector<std::vector<double>>& x_;
  const std::vector<std::string>& y_;
  TrainOptions opts_;
  std::vector<DecisionTree::Node>& nodes_;
  LabelCounts global_;
};

}  // namespace

DecisionTree DecisionTree::train(const std::vector<std::string>& feature_names,
                                 const std::vector<std::vector<double>>& x,
                                 const std::vector<std::string>& labels,
                                 const TrainOptions& options) {
  if (x.empty()) throw PortfolioError("cannot train on an empty dataset");
  if (x.size() != labels.size()) throw PortfolioError("feature/label count mismatch");
  for (const auto& row : x) {
    if (row.size() != feature_names.size()) throw PortfolioError("feature vector has wrong size");
  }
  DecisionTree t;
  t.features_ = feature_names;
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  Builder(x, labels, options, t.nodes_).build(std::move(idx));
  return t;
}

std::string DecisionTree::predict(const std::vector<double>& x) const {
  if (x.size() != features_.size()) {
    throw PortfolioError("expected " + std::to_string(features_.size()) + " features, got " +
                         std::to_string(x.size()));
  }
  int n = 0;
  while (!nodes_[n].leaf) n = x[nodes_[n].feature] <= nodes_[n].threshold ? nodes_[n].left : nodes_[n].right;
  return nodes_[n].label;
}

std::size_t DecisionTree::depth() const {
  std::function<std::size_t(int)> d = [&](int n) -> std::size_t {
    if (nodes_[n].leaf) return 0;
    return 1 + std::max(d(nodes_[n].left), d(nodes_[n].right));
  };
  return d(0);
}

std::size_t DecisionTree::leaves() const {
  return std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf; });
}

nlohmann::ordered_json DecisionTree::to_json() const {
  std::function<nlohmann::ordered_json(int)> node = [&](int i) {
    const Node& n = nodes_[i];
    nlohmann::ordered_json j;
    if (n.leaf) {
      j["label"] = n.label;
      j["counts"] = n.counts;
      return j;
    }
    j["feature"] = features_[n.feature];
    j["threshold"] = n.threshold;
    j["gain_ratio"] = n.gain_ratio;
    j["left"] = node(n.left);
    j["right"] = node(n.right);
    return j;
  };
  nlohmann::ordered_json j;
  j["features"] = features_;
  j["root"] = node(0);
  return j;
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  DecisionTree t;
  t.features_ = j.at("features").get<std::vector<std::string>>();
  std::function<int(const nlohmann::json&)> node = [&](const nlohmann::json& jn) {
    int id = static_cast<int>(t.nodes_.size());
    t.nodes_.push_back({});
    if (jn.contains("label")) {
      t.nodes_[id].label = jn.at("label").get<std::string>();
      if (jn.contains("counts")) t.nodes_[id].counts = jn.at("counts").get<LabelCounts>();
      return id;
    }
    auto name = jn.at("feature").get<std::string>();
    auto it = std::find(t.features_.begin(), t.features_.end(), name);
    if (it == t.features_.end()) throw PortfolioError("tree refers to unknown feature " + name);
    int l = node(jn.at("left"));
    int r = node(jn.at("right"));
    auto& n = t.nodes_[id];
    n.leaf = false;
    n.feature = static_cast<int>(it - t.features_.begin());
    n.threshold = jn.at("threshold").get<double>();
    n.gain_ratio = jn.value("gain_ratio", 0.0);
    n.left = l;
    n.right = r;
    return id;
  };
  node(j.at("root"));
  return t;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  Dataset d;
  std::string line;
  if (!std::getline(in, line)) throw PortfolioError("dataset: missing header");
  auto header = split_csv(line);
  if (header.size() < 6 || header.front() != "instance" || header[header.size() - 5] != "label") {
    throw PortfolioError("dataset: unexpected header");
  }
  std::size_t nf = header.size() - 6;
  d.feature_names.assign(header.begin() + 1, header.begin() + 1 + static_cast<long>(nf));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != header.size()) throw PortfolioError("dataset: bad row: " + line);
    DatasetRow row;
    row.instance = cells[0];
    for (std::size_t i = 0; i < nf; ++i) row.features.push_back(std::stod(cells[1 + i]));
    row.label = cells[1 + nf];
    for (std::size_t s = 0; s < 4; ++s) row.runtimes[s] = std::stod(cells[2 + nf + s]);
    d.rows.push_back(std::move(row));
  }
  return d;
}

void write_dataset_csv(std::ostream& out, const Dataset& d) {
  out << "instance";
  for (const auto& f : d.feature_names) out << ',' << f;
  out << ",label,runtime_full,runtime_lazy,runtime_eager,runtime_post\n";
  for (const auto& r : d.rows) {
    out << r.instance;
    for (double v : r.features) out << ',' << v;
    out << ',' << r.label;
    for (double v : r.runtimes) out << ',' << v;
    out << '\n';
  }
}

std::string best_label(const std::array<double, 4>& runtimes, const std::array<bool, 4>& timed_out) {
  int best = -1;
  for (int s = 0; s < 4; ++s) {
    if (timed_out[s]) continue;
    if (best < 0 || runtimes[s] < runtimes[best]) best = s;
  }
  return best < 0 ? "none" : kStrategyLabels[best];
}

std::vector<std::vector<std::size_t>> make_folds(const std::vector<std::string>& labels,
                                                 std::size_t folds, std::uint64_t seed) {
  if (folds == 0) throw PortfolioError("need at least one fold");
  if (folds > labels.size()) throw PortfolioError("more folds than examples");
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t next = 0;
  for (auto& [_, g] : groups) {
    for (std::size_t i = g.size(); i > 1; --i) std::swap(g[i - 1], g[uniform_below(rng, i)]);
    for (auto idx : g) out[next++ % folds].push_back(idx);
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

Metrics weighted_metrics(const std::vector<std::string>& truth,
                         const std::vector<std::string>& predicted) {
  Metrics m;
  if (truth.empty()) return m;
  LabelCounts support, predicted_n, hits;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++support[truth[i]];
    ++predicted_n[predicted[i]];
    if (truth[i] == predicted[i]) ++hits[truth[i]];
  }
  double n = double(truth.size());
  for (const auto& [label, s] : support) {
    double tp = double(hits[label]);
    double p = predicted_n[label] ? tp / double(predicted_n[label]) : 0;
    double r = tp / double(s);
    double f = p + r > 0 ? 2 * p * r / (p + r) : 0;
    double w = double(s) / n;
    m.precision += w * p;
    m.recall += w * r;
    m.f_measure += w * f;
  }
  return m;
}

DecisionTree train_on(const Dataset& d, const TrainOptions& options) {
  std::vector<std::vector<double>> x;
  std::vector<std::string> y;
  for (const auto& r : d.rows) {
    if (r.label == "none") continue;
    x.push_back(r.features);
    y.push_back(r.label);
  }
  return DecisionTree::train(d.feature_names, x, y, options);
}

CvReport cross_validate(const Dataset& d, std::size_t folds, std::uint64_t seed,
                        const TrainOptions& options) {
  std::vector<const DatasetRow*> rows;
  for (const auto& r : d.rows) {
    if (r.label != "none") rows.push_back(&r);
  }
  std::vector<std::string> labels;
  for (const auto* r : rows) labels.push_back(r->label);
  auto parts = make_folds(labels, folds, seed);
  CvReport rep;
  rep.examples = rows.size();
  rep.predictions.assign(rows.size(), {});
  for (std::size_t f = 0; f < parts.size(); ++f) {
    std::vector<char> held(rows.size(), 0);
    for (auto i : parts[f]) held[i] = 1;
    std::vector<std::vector<double>> x;
    std::vector<std::string> y;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (held[i]) continue;
      x.push_back(rows[i]->features);
      y.push_back(rows[i]->label);
    }
    if (x.empty()) {  // single fold: train on everything
      for (const auto* r : rows) {
        x.push_back(r->features);
        y.push_back(r->label);
      }
    }
    auto tree = DecisionTree::train(d.feature_names, x, y, options);
    for (auto i : parts[f]) rep.predictions[i] = tree.predict(rows[i]->features);
  }
  rep.metrics = weighted_metrics(labels, rep.predictions);
  std::array<double, 4> totals{};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t s = 0; s < 4; ++s) totals[s] += rows[i]->runtimes[s];
    auto it = std::find(std::begin(kStrategyLabels), std::end(kStrategyLabels), rep.predictions[i]);
    std::size_t s = static_cast<std::size_t>(it - std::begin(kStrategyLabels));
    rep.portfolio_total += s < 4 ? rows[i]->runtimes[s] : 0;
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < 4; ++s) {
    if (totals[s] < totals[best]) best = s;
  }
  rep.best_single = kStrategyLabels[best];
  rep.best_single_total = totals[best];
  rep.gain_pct = rep.best_single_total > 0
                     ? (rep.best_single_total - rep.portfolio_total) / rep.best_single_total * 100
                     : 0;
  return rep;
}

}  // namespace microasp
