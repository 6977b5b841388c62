#include "census/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "census/csv.hpp"
#include "census/errors.hpp"
#include "census/html.hpp"
#include "census/patterns.hpp"
#include "census/text.hpp"

namespace census {

using json = nlohmann::json;

PageFeatures PageFeatures::from_counts(int tokens, int names, int emails, int phones, int titles) {
  PageFeatures f;
  f.token_count = tokens;
  f.name_count = names;
  f.email_count = emails;
  f.phone_count = phones;
  f.title_kw_count = titles;
  if (tokens > 0) {
    const double t = tokens;
    f.name_frac = names / t;
    f.email_frac = emails / t;
    f.phone_frac = phones / t;
    f.title_kw_frac = titles / t;
  }
  return f;
}

FeatureVector PageFeatures::vector() const {
  return {double(token_count), double(name_count),  double(email_count),
          double(phone_count), double(title_kw_count), name_frac,
          email_frac,          phone_frac,           title_kw_frac};
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = {
      "token_count", "name_count", "email_count", "phone_count", "title_kw_count",
      "name_frac",   "email_frac", "phone_frac",  "title_kw_frac"};
  return names;
}

PageFeatures extract_text_features(std::string_view visible, const Lexicons& lex) {
  const auto tokens = text::split_whitespace(visible);
  int names = 0;
  for (const auto& t : tokens)
    if (is_capitalized(t) && lex.names.contains(t)) ++names;
  return PageFeatures::from_counts(static_cast<int>(tokens.size()), names,
                                   static_cast<int>(find_emails(visible).size()),
                                   static_cast<int>(find_phones(visible).size()),
                                   count_title_terms(visible, lex.titles));
}

PageFeatures extract_features(const Page& page, const Lexicons& lex) {
  if (page.status != PageStatus::Ok) return {};
  const auto doc = html::Document::parse(page.html);
  return extract_text_features(html::visible_text(doc.root()), lex);
}

// ---- dataset ----

std::size_t LabeledDataset::positives() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const LabeledRow& r) { return r.is_directory; }));
}

LabeledDataset LabeledDataset::load_csv(const std::string& path) {
  const auto t = csv::read(path);
  const auto c_url = t.column("url");
  const auto c_label = t.require_column("label");
  const std::size_t c_tok = t.require_column("token_count"), c_name = t.require_column("name_count"),
                    c_mail = t.require_column("email_count"), c_ph = t.require_column("phone_count"),
                    c_title = t.require_column("title_kw_count");
  LabeledDataset d;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    try {
      LabeledRow row;
      const auto& label = r.at(c_label);
      if (label == "directory" || label == "1") {
        row.is_directory = true;
      } else if (label == "non-directory" || label == "0") {
        row.is_directory = false;
      } else {
        throw FormatError("unknown label '" + label + "'", t.lines[i]);
      }
      auto num = [&](std::size_t c) {
        const int v = std::stoi(r.at(c));
        if (v < 0) throw std::invalid_argument("negative count");
        return v;
      };
      row.features = PageFeatures::from_counts(num(c_tok), num(c_name), num(c_mail), num(c_ph), num(c_title));
      if (c_url) row.url = r.at(*c_url);
      d.rows.push_back(std::move(row));
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FormatError(std::string("bad feature row: ") + e.what(), t.lines[i]);
    }
  }
  return d;
}

std::string LabeledDataset::to_csv() const {
  std::string out = csv::format_row({"url", "label", "token_count", "name_count", "email_count",
                                     "phone_count", "title_kw_count"});
  for (const auto& r : rows) {
    const auto& f = r.features;
    out += csv::format_row({r.url, r.is_directory ? "directory" : "non-directory",
                            std::to_string(f.token_count), std::to_string(f.name_count),
                            std::to_string(f.email_count), std::to_string(f.phone_count),
                            std::to_string(f.title_kw_count)});
  }
  return out;
}

// ---- trees ----

int DecisionTree::leaf_for(std::span<const double> x) const {
  int i = 0;
  while (nodes[i].feature >= 0) i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
  return i;
}

double DecisionTree::predict(std::span<const double> x) const { return nodes[leaf_for(x)].value; }

int DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  // children are always appended after their parent
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes[i].feature >= 0) {
      d[nodes[i].left] = d[i] + 1;
      d[nodes[i].right] = d[i] + 1;
    }
  }
  return best;
}

std::vector<std::size_t> bootstrap_sample(std::size_t n, Rng& rng) {
  std::vector<std::size_t> s(n);
  for (auto& i : s) i = static_cast<std::size_t>(rng.below(n));
  return s;
}

namespace {

double gini(double pos, double total) {
  if (total <= 0) return 0.0;
  const double p = pos / total;
  return 2.0 * p * (1.0 - p);
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child impurity
};

struct Grower {
  std::span<const FeatureVector> x;
  std::span<const std::uint8_t> y;
  int max_depth;
  Rng& rng;
  DecisionTree tree;

  // Best split on feature f, or nullopt when f is constant over the sample.
  std::optional<Split> best_on(int f, std::vector<std::size_t>& idx) const {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a][f] < x[b][f]; });
    if (x[idx.front()][f] == x[idx.back()][f]) return std::nullopt;
    double total_pos = 0;
    for (auto i : idx) total_pos += y[i] ? 1 : 0;
    const double n = static_cast<double>(idx.size());
    double left_pos = 0;
    std::optional<Split> best;
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
      left_pos += y[idx[k]] ? 1 : 0;
      const double a = x[idx[k]][f], b = x[idx[k + 1]][f];
      if (a == b) continue;
      const double nl = static_cast<double>(k + 1), nr = n - nl;
      const double imp = (nl * gini(left_pos, nl) + nr * gini(total_pos - left_pos, nr)) / n;
      if (!best || imp < best->impurity) best = Split{f, a + (b - a) / 2.0, imp};
    }
    return best;
  }

  int grow(std::vector<std::size_t> idx, int depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double pos = 0;
    for (auto i : idx) pos += y[i] ? 1 : 0;
    const double n = static_cast<double>(idx.size());
    tree.nodes[id].value = n > 0 ? pos / n : 0.0;

    // The feature draw happens at every node, leaf or not, so the stream
    // consumed depends only on tree shape.
    std::vector<int> order(kFeatureCount);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t m = static_cast<std::size_t>(std::ceil(std::sqrt(double(kFeatureCount))));
    for (std::size_t i = 0; i < m; ++i) std::swap(order[i], order[i + rng.below(kFeatureCount - i)]);

    if (depth >= max_depth || pos == 0 || pos == n || idx.size() < 2) return id;

    std::optional<Split> best;
    auto scan = [&](std::size_t from, std::size_t to) {
      for (std::size_t i = from; i < to; ++i) {
        auto s = best_on(order[i], idx);
        if (s && (!best || s->impurity < best->impurity)) best = s;
      }
    };
    scan(0, m);
    if (!best) scan(m, kFeatureCount);
    if (!best) return id;

    std::vector<std::size_t> l, r;
    for (auto i : idx) (x[i][best->feature] <= best->threshold ? l : r).push_back(i);
    tree.nodes[id].feature = best->feature;
    tree.nodes[id].threshold = best->threshold;
    const int li = grow(std::move(l), depth + 1);
    tree.nodes[id].left = li;
    const int ri = grow(std::move(r), depth + 1);
    tree.nodes[id].right = ri;
    return id;
  }
};

void check_trainable(const LabeledDataset& data, const ForestParams& p) {
  if (p.n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
  if (p.max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (data.positives() == 0 || data.negatives() == 0)
    throw TrainingError("training set needs both directory and non-directory pages");
}

struct Prepared {
  std::vector<FeatureVector> x;
  std::vector<std::uint8_t> y;
  std::size_t n = 0;
};

Prepared prepare(const LabeledDataset& data) {
  Prepared p;
  p.n = data.rows.size();
  p.y.resize(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    p.x.push_back(data.rows[i].features.vector());
    p.y[i] = data.rows[i].is_directory;
  }
  return p;
}

DecisionTree train_tree(const Prepared& p, const ForestParams& params, int t) {
  Rng rng(mix_seed(params.seed, static_cast<std::uint64_t>(t)));
  const auto sample = bootstrap_sample(p.n, rng);
  return grow_tree(p.x, p.y, sample, params.max_depth, rng);
}

ForestModel empty_model(const ForestParams& params) {
  ForestModel m;
  m.n_trees = params.n_trees;
  m.max_depth = params.max_depth;
  m.seed = params.seed;
  m.feature_names = feature_names();
  m.trees.resize(static_cast<std::size_t>(params.n_trees));
  return m;
}

}  // namespace

DecisionTree grow_tree(std::span<const FeatureVector> x, std::span<const std::uint8_t> y,
                       std::span<const std::size_t> sample, int max_depth, Rng& rng) {
  if (sample.empty()) throw TrainingError("empty sample");
  Grower g{x, y, max_depth, rng, {}};
  g.grow(std::vector<std::size_t>(sample.begin(), sample.end()), 0);
  return std::move(g.tree);
}

ForestModel train_forest_serial(const LabeledDataset& data, const ForestParams& params) {
  check_trainable(data, params);
  const auto p = prepare(data);
  auto m = empty_model(params);
  for (int t = 0; t < params.n_trees; ++t) m.trees[t] = train_tree(p, params, t);
  return m;
}

ForestModel train_forest(const LabeledDataset& data, const ForestParams& params) {
  check_trainable(data, params);
  const auto p = prepare(data);
  auto m = empty_model(params);
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < params.n_trees; ++t) m.trees[t] = train_tree(p, params, t);
  return m;
}

double predict_proba(const ForestModel& model, const PageFeatures& f) {
  if (model.trees.empty()) throw std::invalid_argument("empty forest");
  const auto v = f.vector();
  double s = 0.0;
  for (const auto& t : model.trees) s += t.predict(v);
  return s / static_cast<double>(model.trees.size());
}

std::vector<double> predict_batch_serial(const ForestModel& model, std::span<const PageFeatures> rows) {
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = predict_proba(model, rows[i]);
  return out;
}

std::vector<double> predict_batch(const ForestModel& model, std::span<const PageFeatures> rows) {
  std::vector<double> out(rows.size());
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = predict_proba(model, rows[i]);
  return out;
}

// ---- serialization ----

std::string ForestModel::to_json() const {
  json j;
  j["format"] = "census-forest/1";
  j["n_trees"] = n_trees;
  j["max_depth"] = max_depth;
  j["seed"] = seed;
  j["feature_names"] = feature_names;
  json ts = json::array();
  for (const auto& t : trees) {
    json ns = json::array();
    for (const auto& n : t.nodes) ns.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
    ts.push_back(std::move(ns));
  }
  j["trees"] = std::move(ts);
  return j.dump();
}

ForestModel ForestModel::from_json(std::string_view s) {
  try {
    const auto j = json::parse(s);
    ForestModel m;
    m.n_trees = j.at("n_trees").get<int>();
    m.max_depth = j.at("max_depth").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    if (m.feature_names != census::feature_names()) throw ValidationError("model feature set does not match");
    for (const auto& tj : j.at("trees")) {
      DecisionTree t;
      for (const auto& nj : tj) {
        TreeNode n{nj.at(0).get<int>(), nj.at(1).get<double>(), nj.at(2).get<int>(), nj.at(3).get<int>(),
                   nj.at(4).get<double>()};
        t.nodes.push_back(n);
      }
      const int size = static_cast<int>(t.nodes.size());
      if (size == 0) throw ValidationError("empty tree in model");
      for (const auto& n : t.nodes)
        if (n.feature >= static_cast<int>(kFeatureCount) ||
            (n.feature >= 0 && (n.left <= 0 || n.right <= 0 || n.left >= size || n.right >= size)))
          throw ValidationError("corrupt tree node in model");
      m.trees.push_back(std::move(t));
    }
    if (static_cast<int>(m.trees.size()) != m.n_trees) throw ValidationError("tree count mismatch in model");
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid model json: ") + e.what());
  }
}

void ForestModel::save(const std::string& path) const { text::write_file(path, to_json()); }

ForestModel ForestModel::load(const std::string& path) { return from_json(text::read_file(path)); }

// ---- evaluation ----

double auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: size mismatch");
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos = 0, rank_sum = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
    const double mid = (static_cast<double>(i) + 1.0 + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (labels[idx[k]]) {
        rank_sum += mid;
        pos += 1;
      }
    i = j;
  }
  const double neg = static_cast<double>(scores.size()) - pos;
  if (pos == 0 || neg == 0) throw std::invalid_argument("auc needs both classes");
  return (rank_sum - pos * (pos + 1) / 2.0) / (pos * neg);
}

std::vector<int> stratified_folds(std::span<const std::uint8_t> labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("need at least 2 folds");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] ? pos : neg).push_back(i);
  Rng rng(mix_seed(seed, 0xf01d));
  rng.shuffle(pos);
  rng.shuffle(neg);
  std::vector<int> out(labels.size(), 0);
  std::size_t k = 0;
  for (auto i : pos) out[i] = static_cast<int>(k++ % folds);
  for (auto i : neg) out[i] = static_cast<int>(k++ % folds);
  return out;
}

CvReport cross_validate(const LabeledDataset& data, int folds, const ForestParams& params) {
  std::vector<std::uint8_t> labels(data.rows.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = data.rows[i].is_directory;
  if (data.positives() < static_cast<std::size_t>(folds) || data.negatives() < static_cast<std::size_t>(folds))
    throw TrainingError("each fold needs both labels: have " + std::to_string(data.positives()) +
                        " directory and " + std::to_string(data.negatives()) + " other pages for " +
                        std::to_string(folds) + " folds");
  const auto assign = stratified_folds(labels, folds, params.seed);
  CvReport rep;
  rep.fold_of = assign;
  rep.scores.assign(data.rows.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    LabeledDataset train, test;
    for (std::size_t i = 0; i < data.rows.size(); ++i) (assign[i] == f ? test : train).rows.push_back(data.rows[i]);
    ForestParams p = params;
    p.seed = mix_seed(params.seed, 1000 + static_cast<std::uint64_t>(f));
    const auto model = train_forest(train, p);
    std::vector<PageFeatures> feats;
    std::vector<std::uint8_t> truth;
    for (const auto& r : test.rows) {
      feats.push_back(r.features);
      truth.push_back(r.is_directory);
    }
    const auto scores = predict_batch(model, feats);
    for (std::size_t i = 0, k = 0; i < data.rows.size(); ++i)
      if (assign[i] == f) rep.scores[i] = scores[k++];
    FoldMetrics m;
    double tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool pred = is_directory_candidate(scores[i]);
      if (truth[i]) (pred ? tp : fn) += 1;
      else (pred ? fp : tn) += 1;
    }
    m.positives = static_cast<std::size_t>(tp + fn);
    m.negatives = static_cast<std::size_t>(fp + tn);
    m.accuracy = (tp + tn) / static_cast<double>(scores.size());
    m.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    m.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    m.auc = auc(scores, truth);
    rep.folds.push_back(m);
  }
  const double k = folds;
  for (const auto& m : rep.folds) {
    rep.mean.accuracy += m.accuracy / k;
    rep.mean.precision += m.precision / k;
    rep.mean.recall += m.recall / k;
    rep.mean.auc += m.auc / k;
    rep.mean.positives += m.positives;
    rep.mean.negatives += m.negatives;
  }
  return rep;
}

}  // namespace census
