#include "census/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "census/census_store.hpp"
#include "census/classifier.hpp"
#include "census/csv.hpp"
#include "census/diff_stats.hpp"
#include "census/errors.hpp"
#include "census/fetcher.hpp"
#include "census/filter.hpp"
#include "census/lexicon.hpp"
#include "census/navigator.hpp"
#include "census/sitegen.hpp"
#include "census/text.hpp"

namespace census {

namespace {

using ojson = nlohmann::ordered_json;

struct Common {
  std::string data_dir;

  const Lexicons& lexicons() {
    if (data_dir.empty()) return Lexicons::bundled();
    if (!loaded) loaded = Lexicons::load_dir(data_dir);
    return *loaded;
  }
  NamePools pools() const { return load_name_pools(data_dir.empty() ? default_data_dir() : data_dir); }

  std::optional<Lexicons> loaded;
};

void require_file(const std::string& path, const std::string& what) {
  if (!std::filesystem::is_regular_file(path)) throw std::invalid_argument(what + " not found: " + path);
}

ErrorRateMatrix load_errors(const std::string& spec) {
  if (spec == "identity") return ErrorRateMatrix::identity();
  require_file(spec, "error-rate matrix");
  return ErrorRateMatrix::load(spec);
}

// ---- commands ----

struct GenCorpusArgs {
  int n = 41;
  std::uint64_t seed = 7;
  std::string out;
  bool churn = false;
};

int gen_corpus(Common& c, const GenCorpusArgs& a) {
  CorpusOptions opts;
  opts.n_departments = a.n;
  opts.seed = a.seed;
  const auto pools = c.pools();
  if (a.churn) {
    const auto pair = generate_churn_pair(opts, a.out, c.lexicons(), pools);
    std::cout << fmt::format("wrote churn pair of {} departments to {}\n", pair.old_corpus.sites.size(), a.out);
  } else {
    const auto corpus = generate_corpus(opts, a.out, c.lexicons(), pools);
    std::size_t pages = 0;
    for (const auto& s : corpus.sites) pages += s.pages.size();
    std::cout << fmt::format("wrote {} departments ({} pages) to {}\n", corpus.sites.size(), pages, a.out);
  }
  return 0;
}

struct TrainArgs {
  std::string data;
  std::string out;
  ForestParams params;
};

int train_classifier(const TrainArgs& a) {
  require_file(a.data, "feature file");
  const auto data = LabeledDataset::load_csv(a.data);
  const auto model = train_forest(data, a.params);
  model.save(a.out);
  std::cout << fmt::format("trained {} trees on {} pages ({} directories); model in {}\n", model.trees.size(),
                           data.rows.size(), data.positives(), a.out);
  return 0;
}

struct EvalArgs {
  std::string data;
  int folds = 5;
  ForestParams params;
  std::string out;
  std::string predictions;
};

ojson metrics_json(const FoldMetrics& m) {
  return ojson{{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
               {"auc", m.auc},           {"positives", m.positives}, {"negatives", m.negatives}};
}

int eval_classifier(const EvalArgs& a) {
  require_file(a.data, "feature file");
  const auto data = LabeledDataset::load_csv(a.data);
  const auto rep = cross_validate(data, a.folds, a.params);
  ojson j;
  j["folds"] = ojson::array();
  for (const auto& f : rep.folds) j["folds"].push_back(metrics_json(f));
  j["mean"] = metrics_json(rep.mean);
  if (!a.out.empty()) text::write_file(a.out, j.dump(2) + "\n");
  if (!a.predictions.empty()) {
    std::string p = csv::format_row({"url", "label", "fold", "score"});
    for (std::size_t i = 0; i < data.rows.size(); ++i)
      p += csv::format_row({data.rows[i].url, data.rows[i].is_directory ? "directory" : "non-directory",
                            std::to_string(rep.fold_of[i] + 1), fmt::format("{:.6f}", rep.scores[i])});
    text::write_file(a.predictions, p);
  }
  std::cout << fmt::format("{:>5} {:>9} {:>9} {:>9} {:>7}\n", "fold", "accuracy", "precision", "recall", "auc");
  for (std::size_t i = 0; i < rep.folds.size(); ++i) {
    const auto& f = rep.folds[i];
    std::cout << fmt::format("{:>5} {:>9.4f} {:>9.4f} {:>9.4f} {:>7.4f}\n", i + 1, f.accuracy, f.precision, f.recall,
                             f.auc);
  }
  const auto& m = rep.mean;
  std::cout << fmt::format("{:>5} {:>9.4f} {:>9.4f} {:>9.4f} {:>7.4f}\n", "mean", m.accuracy, m.precision, m.recall,
                           m.auc);
  return 0;
}

struct CrawlArgs {
  std::string homepages;
  std::string source;
  std::string model;
  std::string out;
  std::string log;
  std::string rejected;
  std::string date;
  int jobs = 1;
  int min_records = 3;
  int max_pages = 100;
  int delay_ms = 1000;
  int timeout_ms = 10000;
};

std::string rejected_csv(const std::vector<std::pair<std::string, Rejected>>& rows) {
  std::string out = csv::format_row({"institution", "full_name", "title_raw", "reason", "source_url"});
  for (const auto& [inst, r] : rows)
    out += csv::format_row({inst, r.record.full_name, r.record.title_raw.value_or(""),
                            std::string(to_string(r.reason)), r.record.source_url});
  return out;
}

int crawl(Common& c, const CrawlArgs& a) {
  require_file(a.homepages, "homepage list");
  require_file(a.model, "model");
  if (!a.date.empty() && !is_iso_date(a.date)) throw std::invalid_argument("--date must be YYYY-MM-DD");
  const auto depts = read_homepages(a.homepages);
  CrawlOptions opts;
  opts.min_records = a.min_records;
  opts.policy.max_pages_per_department = a.max_pages;
  opts.policy.min_delay_between_requests_per_host = std::chrono::milliseconds(a.delay_ms);
  opts.policy.timeout = std::chrono::milliseconds(a.timeout_ms);
  opts.policy.validate();
  auto source = make_source(a.source, opts.policy);
  const auto model = ForestModel::load(a.model);
  const auto results = a.jobs == 1 ? crawl_corpus_serial(depts, *source, opts, c.lexicons(), model)
                                   : crawl_corpus(depts, *source, opts, c.lexicons(), model, a.jobs);

  CensusSnapshot snap;
  snap.snapshot_date = a.date;
  snap.tool_version = CENSUS_VERSION;
  snap.source_mode = a.source == "live" ? SourceMode::Live : SourceMode::Corpus;
  std::vector<std::pair<std::string, Rejected>> rejected;
  std::string log;
  std::size_t found = 0;
  for (const auto& r : results) {
    snap.institutions.push_back(r.institution);
    snap.records.insert(snap.records.end(), r.records.begin(), r.records.end());
    for (const auto& x : r.rejected) rejected.emplace_back(r.institution, x);
    for (std::size_t i = 0; i < r.fetch_log.size(); ++i)
      log += ojson{{"institution", r.institution}, {"seq", i}, {"url", r.fetch_log[i]}}.dump() + "\n";
    ojson summary{{"institution", r.institution},
                  {"homepage", r.homepage},
                  {"stop_reason", to_string(r.stop_reason)},
                  {"fetches", r.fetch_log.size()},
                  {"records", r.records.size()}};
    summary["directory_fetch_index"] =
        r.directory_fetch_index ? ojson(*r.directory_fetch_index) : ojson(nullptr);
    log += summary.dump() + "\n";
    if (r.stop_reason == StopReason::Found) ++found;
    else std::cerr << fmt::format("warning: no directory found for {} ({})\n", r.institution, to_string(r.stop_reason));
  }
  std::sort(snap.institutions.begin(), snap.institutions.end());
  snap.institutions.erase(std::unique(snap.institutions.begin(), snap.institutions.end()), snap.institutions.end());
  sort_canonical(snap.records);
  write_snapshot(snap, a.out);
  if (!a.log.empty()) text::write_file(a.log, log);
  if (!a.rejected.empty()) {
    std::stable_sort(rejected.begin(), rejected.end(), [](const auto& x, const auto& y) {
      return std::tie(x.first, x.second.record.full_name) < std::tie(y.first, y.second.record.full_name);
    });
    text::write_file(a.rejected, rejected_csv(rejected));
  }
  std::cout << fmt::format("{} records from {}/{} departments; census in {}\n", snap.records.size(), found,
                           results.size(), a.out);
  return 0;
}

struct FilterArgs {
  std::string in;
  std::string out;
  std::string rejected;
};

int filter_cmd(Common& c, const FilterArgs& a) {
  require_file(a.in, "census");
  auto snap = read_snapshot(a.in);
  const auto res = filter_census(snap.records, c.lexicons());
  snap.records = res.kept;
  sort_canonical(snap.records);
  write_snapshot(snap, a.out);
  if (!a.rejected.empty()) {
    std::vector<std::pair<std::string, Rejected>> rows;
    for (const auto& r : res.rejected) rows.emplace_back(r.record.institution, r);
    text::write_file(a.rejected, rejected_csv(rows));
  }
  std::cout << fmt::format("kept {}, rejected {}\n", res.kept.size(), res.rejected.size());
  return 0;
}

struct PatchArgs {
  std::string in;
  std::string patches;
  std::string out;
};

int patch_cmd(const PatchArgs& a) {
  require_file(a.in, "census");
  require_file(a.patches, "patch file");
  auto snap = read_snapshot(a.in);
  const auto res = apply_patches(snap.records, read_patches(a.patches));
  write_snapshot(snap, a.out);
  for (const auto& p : res.unmatched)
    std::cerr << fmt::format("warning: patch line {} matches nobody: {} / {}\n", p.line, p.institution, p.full_name);
  std::cout << fmt::format("applied {} patches, {} unmatched\n", res.applied, res.unmatched.size());
  return 0;
}

struct DiffArgs {
  std::string old_path;
  std::string new_path;
  std::string errors = "identity";
  std::string gender_labels;
  std::string report;
  std::string transitions;
};

int diff_cmd(const DiffArgs& a) {
  require_file(a.old_path, "old census");
  require_file(a.new_path, "new census");
  const auto old_snap = read_snapshot(a.old_path);
  const auto new_snap = read_snapshot(a.new_path);
  const auto err = load_errors(a.errors);
  GenderLabels labels;
  ReportOptions ro;
  if (!a.gender_labels.empty()) {
    require_file(a.gender_labels, "gender labels");
    labels = read_gender_labels(a.gender_labels);
    ro.gender_labels = &labels;
  }
  const auto report = retention_report(old_snap, new_snap, err, ro);
  if (!a.report.empty()) text::write_file(a.report, report);
  if (!a.transitions.empty()) {
    const auto d = diff(old_snap, new_snap);
    text::write_file(a.transitions, transitions_csv(correct_counts(d.transitions, err)));
  }
  std::cout << render_report(report);
  return 0;
}

struct ReportArgs {
  std::string report;
  std::string census;
  std::string gender_table;
};

int report_cmd(Common& c, const ReportArgs& a) {
  (void)c;
  if (a.report.empty() && a.census.empty() && a.gender_table.empty())
    throw std::invalid_argument("report needs --report, --census or --gender-table");
  if (!a.report.empty()) {
    require_file(a.report, "report");
    std::cout << render_report(text::read_file(a.report));
  }
  if (!a.census.empty()) {
    require_file(a.census, "census");
    const auto snap = read_snapshot(a.census);
    const auto s = composition_summary(snap);
    std::cout << fmt::format("census {} ({} institutions, {} people, {} ranked)\n",
                             snap.snapshot_date.empty() ? "undated" : snap.snapshot_date, snap.institutions.size(),
                             s.total, s.ranked);
    for (Rank r : {Rank::Asst, Rank::Assoc, Rank::Full})
      std::cout << fmt::format("  {:<6} {:>6} {:>7.1f}%\n", to_string(r), s.count(r),
                               100.0 * s.fractions[static_cast<std::size_t>(r)]);
  }
  if (!a.gender_table.empty()) {
    require_file(a.gender_table, "gender table");
    std::vector<std::string> warnings;
    const auto g = GenderTable::load(a.gender_table, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    for (Gender gd : {Gender::Women, Gender::Men})
      std::cout << fmt::format("attrition {:<6} {:.4f}\n", to_string(gd), attrition(g, gd));
  }
  return 0;
}

struct NavArgs {
  std::string navtruth;
  std::string source;
  std::string model;
  std::string out;
  int min_records = 3;
  int max_pages = 100;
};

int eval_navigation(Common& c, const NavArgs& a) {
  require_file(a.navtruth, "navigation truth");
  require_file(a.model, "model");
  const auto truth = csv::read(a.navtruth);
  const auto ci = truth.require_column("institution"), ch = truth.require_column("homepage"),
             cp = truth.require_column("shortest_path");
  std::vector<Department> depts;
  std::vector<int> oracle;
  for (const auto& row : truth.rows) {
    depts.push_back({row.at(ci), row.at(ch)});
    oracle.push_back(std::stoi(row.at(cp)));
  }
  CrawlOptions opts;
  opts.min_records = a.min_records;
  opts.policy.max_pages_per_department = a.max_pages;
  opts.policy.min_delay_between_requests_per_host = std::chrono::milliseconds(0);
  auto source = make_source(a.source, opts.policy);
  const auto model = ForestModel::load(a.model);
  const auto results = crawl_corpus_serial(depts, *source, opts, c.lexicons(), model);
  ojson j;
  j["departments"] = ojson::array();
  double sum = 0.0;
  std::size_t zero = 0, found = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    ojson d{{"institution", depts[i].institution}, {"oracle", oracle[i]}};
    if (results[i].stop_reason == StopReason::Found) {
      const int e = excess_steps(results[i], oracle[i]);
      d["excess_steps"] = e;
      sum += e;
      zero += e == 0;
      ++found;
    } else {
      d["excess_steps"] = nullptr;
    }
    d["stop_reason"] = to_string(results[i].stop_reason);
    j["departments"].push_back(d);
  }
  j["found"] = found;
  j["mean_excess_steps"] = found ? sum / static_cast<double>(found) : 0.0;
  j["fraction_zero_excess"] = found ? static_cast<double>(zero) / static_cast<double>(found) : 0.0;
  if (!a.out.empty()) text::write_file(a.out, j.dump(2) + "\n");
  std::cout << fmt::format("found {}/{}; mean excess {:.3f}; zero excess {:.3f}\n", found, results.size(),
                           j["mean_excess_steps"].get<double>(), j["fraction_zero_excess"].get<double>());
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Faculty directory census: crawl, extract, compare."};
  app.name("census");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CENSUS_VERSION));
  app.set_config("--config", "", "INI/TOML file with default flag values");
  Common common;
  app.add_option("--data-dir", common.data_dir, "Directory with the lexicon files")->check(CLI::ExistingDirectory);

  GenCorpusArgs g;
  auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic corpus of department sites");
  gen->add_option("--n", g.n, "Number of departments")->check(CLI::PositiveNumber);
  gen->add_option("--seed", g.seed, "Generator seed");
  gen->add_option("--out", g.out, "Output directory")->required();
  gen->add_flag("--churn", g.churn, "Generate an old/new snapshot pair");

  TrainArgs t;
  t.params.seed = 1;
  auto* train = app.add_subcommand("train-classifier", "Train the directory classifier");
  train->add_option("--data", t.data, "Labeled feature CSV")->required();
  train->add_option("--out", t.out, "Model JSON")->required();
  train->add_option("--seed", t.params.seed, "Training seed");
  train->add_option("--trees", t.params.n_trees, "Number of trees")->check(CLI::PositiveNumber);
  train->add_option("--max-depth", t.params.max_depth, "Maximum tree depth")->check(CLI::PositiveNumber);

  EvalArgs e;
  e.params.seed = 1;
  auto* eval = app.add_subcommand("eval-classifier", "Stratified k-fold cross-validation");
  eval->add_option("--data", e.data, "Labeled feature CSV")->required();
  eval->add_option("--folds", e.folds, "Number of folds")->check(CLI::Range(2, 100));
  eval->add_option("--seed", e.params.seed, "Fold and training seed");
  eval->add_option("--trees", e.params.n_trees, "Number of trees")->check(CLI::PositiveNumber);
  eval->add_option("--max-depth", e.params.max_depth, "Maximum tree depth")->check(CLI::PositiveNumber);
  eval->add_option("--out", e.out, "Metrics JSON");
  eval->add_option("--predictions", e.predictions, "Out-of-fold scores CSV");

  CrawlArgs cr;
  auto* crawl_cmd = app.add_subcommand("crawl", "Find and parse each department's faculty directory");
  crawl_cmd->add_option("--homepages", cr.homepages, "institution<TAB>homepage per line")->required();
  crawl_cmd->add_option("--source", cr.source, "corpus:<manifest.json> or live")->required();
  crawl_cmd->add_option("--model", cr.model, "Classifier model JSON")->required();
  crawl_cmd->add_option("--out", cr.out, "Census file (.csv or .json)")->required();
  crawl_cmd->add_option("--log", cr.log, "Fetch log (JSON lines)");
  crawl_cmd->add_option("--rejected", cr.rejected, "Filtered-out records CSV");
  crawl_cmd->add_option("--date", cr.date, "Snapshot date YYYY-MM-DD");
  crawl_cmd->add_option("--jobs", cr.jobs, "Departments crawled concurrently (0 = all cores)")->check(CLI::NonNegativeNumber);
  crawl_cmd->add_option("--min-records", cr.min_records, "Records needed to accept a directory")->check(CLI::PositiveNumber);
  crawl_cmd->add_option("--max-pages", cr.max_pages, "Fetch budget per department")->check(CLI::PositiveNumber);
  crawl_cmd->add_option("--delay-ms", cr.delay_ms, "Live mode: minimum delay per host")->check(CLI::NonNegativeNumber);
  crawl_cmd->add_option("--timeout-ms", cr.timeout_ms, "Live mode: request timeout")->check(CLI::PositiveNumber);

  FilterArgs f;
  auto* filt = app.add_subcommand("filter", "Apply the TTT and in-field filters to a census");
  filt->add_option("--in", f.in, "Census file")->required();
  filt->add_option("--out", f.out, "Filtered census")->required();
  filt->add_option("--rejected", f.rejected, "Rejected records CSV");

  PatchArgs p;
  auto* patch = app.add_subcommand("patch", "Set ranks from a manual patch file");
  patch->add_option("--in", p.in, "Census file")->required();
  patch->add_option("--patches", p.patches, "institution,full_name,rank,note CSV")->required();
  patch->add_option("--out", p.out, "Patched census")->required();

  DiffArgs d;
  auto* diff_sub = app.add_subcommand("diff", "Compare two census snapshots");
  diff_sub->add_option("--old", d.old_path, "Earlier census")->required();
  diff_sub->add_option("--new", d.new_path, "Later census")->required();
  diff_sub->add_option("--errors", d.errors, "Error-rate matrix CSV or 'identity'");
  diff_sub->add_option("--gender-labels", d.gender_labels, "CSV with institution,full_name,gender");
  diff_sub->add_option("--report", d.report, "Report JSON");
  diff_sub->add_option("--transitions", d.transitions, "Corrected transition counts CSV");

  ReportArgs r;
  auto* rep = app.add_subcommand("report", "Print a report, census composition or gender-table attrition");
  rep->add_option("--report", r.report, "Report JSON written by diff");
  rep->add_option("--census", r.census, "Census file");
  rep->add_option("--gender-table", r.gender_table, "Gender transition table CSV");

  NavArgs n;
  auto* nav = app.add_subcommand("eval-navigation", "Excess fetches against the shortest path to each directory");
  nav->add_option("--navtruth", n.navtruth, "navtruth.csv from gen-corpus")->required();
  nav->add_option("--source", n.source, "corpus:<manifest.json>")->required();
  nav->add_option("--model", n.model, "Classifier model JSON")->required();
  nav->add_option("--out", n.out, "Results JSON");
  nav->add_option("--min-records", n.min_records)->check(CLI::PositiveNumber);
  nav->add_option("--max-pages", n.max_pages)->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex);
  }
  try {
    if (*gen) return gen_corpus(common, g);
    if (*train) return train_classifier(t);
    if (*eval) return eval_classifier(e);
    if (*crawl_cmd) return crawl(common, cr);
    if (*filt) return filter_cmd(common, f);
    if (*patch) return patch_cmd(p);
    if (*diff_sub) return diff_cmd(d);
    if (*rep) return report_cmd(common, r);
    if (*nav) return eval_navigation(common, n);
  } catch (const std::exception& ex) {
    std::cerr << "census: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace census
