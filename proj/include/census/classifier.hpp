#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "census/fetcher.hpp"
#include "census/lexicon.hpp"
#include "census/rng.hpp"

namespace census {

inline constexpr std::size_t kFeatureCount = 9;
using FeatureVector = std::array<double, kFeatureCount>;

/// Motif counts of a page and their share of all visible tokens.
struct PageFeatures {
  int token_count = 0;
  int name_count = 0;
  int email_count = 0;
  int phone_count = 0;
  int title_kw_count = 0;
  double name_frac = 0.0;
  double email_frac = 0.0;
  double phone_frac = 0.0;
  double title_kw_frac = 0.0;

  static PageFeatures from_counts(int tokens, int names, int emails, int phones, int titles);
  FeatureVector vector() const;
  bool operator==(const PageFeatures&) const = default;
};

const std::vector<std::string>& feature_names();

PageFeatures extract_features(const Page& page, const Lexicons& lex);
PageFeatures extract_text_features(std::string_view visible_text, const Lexicons& lex);

struct LabeledRow {
  PageFeatures features;
  bool is_directory = false;
  std::string url;
};

/// CSV columns: url,label,token_count,name_count,email_count,phone_count,title_kw_count
/// with label "directory" or "non-directory".
struct LabeledDataset {
  std::vector<LabeledRow> rows;

  std::size_t positives() const;
  std::size_t negatives() const { return rows.size() - positives(); }

  static LabeledDataset load_csv(const std::string& path);
  std::string to_csv() const;
};

/// Leaf when feature < 0; `value` is the positive fraction of the training
/// samples that reached the node.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> x) const;
  /// Index of the leaf reached by x.
  int leaf_for(std::span<const double> x) const;
  int depth() const;
  bool operator==(const DecisionTree&) const = default;
};

struct ForestParams {
  int n_trees = 100;
  int max_depth = 8;
  std::uint64_t seed = 0;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  int n_trees = 0;
  int max_depth = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names;

  std::string to_json() const;
  static ForestModel from_json(std::string_view json);
  void save(const std::string& path) const;
  static ForestModel load(const std::string& path);
  bool operator==(const ForestModel&) const = default;
};

/// Bootstrap of size n drawn with replacement.
std::vector<std::size_t> bootstrap_sample(std::size_t n, Rng& rng);

/// Grows one CART tree (Gini) on the given sample of rows; ceil(sqrt(d))
/// features are drawn per split, the rest are tried only if none of those
/// can split. Result depends only on the multiset of sampled rows and rng.
DecisionTree grow_tree(std::span<const FeatureVector> x, std::span<const std::uint8_t> y,
                       std::span<const std::size_t> sample, int max_depth, Rng& rng);

/// Trees are grown in parallel; each tree seeds its own generator from
/// (seed, tree index), so the model equals train_forest_serial exactly.
ForestModel train_forest(const LabeledDataset& data, const ForestParams& params);
ForestModel train_forest_serial(const LabeledDataset& data, const ForestParams& params);

double predict_proba(const ForestModel& model, const PageFeatures& f);
std::vector<double> predict_batch(const ForestModel& model, std::span<const PageFeatures> rows);
std::vector<double> predict_batch_serial(const ForestModel& model, std::span<const PageFeatures> rows);

/// Recall-first rule: any nonzero likelihood is worth parsing.
inline bool is_directory_candidate(double p) { return p > 0.0; }

/// Mann-Whitney AUC with ties counted one half. Throws std::invalid_argument
/// unless both labels are present.
double auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct FoldMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double auc = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

struct CvReport {
  std::vector<FoldMetrics> folds;
  FoldMetrics mean;
  std::vector<int> fold_of;     // per input row
  std::vector<double> scores;   // out-of-fold probability per input row
};

/// Fold assignment stratified by label, deterministic in seed.
std::vector<int> stratified_folds(std::span<const std::uint8_t> labels, int folds, std::uint64_t seed);

CvReport cross_validate(const LabeledDataset& data, int folds, const ForestParams& params);

}  // namespace census
