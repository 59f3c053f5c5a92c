#include "topicbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "json_codec.hpp"
#include "topicbench/error.hpp"
#include "topicbench/generator.hpp"
#include "topicbench/rng.hpp"

namespace topicbench {

namespace {

constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);

// Runs fn(i) for i in [0, n) on up to `workers` threads; rethrows the first
// exception after all workers stop.
template <typename F>
void parallel_for(std::size_t n, std::size_t workers, F&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (!stop) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            stop = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::string value_text(const SweepValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return format_real(std::get<double>(v));
}

bool is_whole(double x) { return std::isfinite(x) && x >= 1.0 && std::floor(x) == x; }

std::string file_id(const std::string& id) {
  std::string out = id;
  std::replace(out.begin(), out.end(), '/', '_');
  return out;
}

std::size_t doc_length_column(const CorpusSpec& spec) {
  if (spec.doc_lengths.empty()) return spec.doc_length;
  return static_cast<std::size_t>(std::llround(static_cast<double>(spec.total_tokens()) /
                                               static_cast<double>(spec.num_documents)));
}

using RunKey = std::pair<std::string, std::string>;

// Keeps the last row per (run id, tag), preferring successful rows.
std::map<RunKey, ScoreRow> latest_rows(std::span<const ScoreRow> rows) {
  std::map<RunKey, ScoreRow> latest;
  for (const auto& row : rows) {
    auto [it, inserted] = latest.try_emplace({row.experiment_id, row.algorithm_tag}, row);
    if (!inserted && (!row.failed() || it->second.failed())) it->second = row;
  }
  return latest;
}

class ScoreAppender {
 public:
  explicit ScoreAppender(const std::filesystem::path& path) : path_(path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    out_.open(path, std::ios::binary | std::ios::app);
    if (!out_) throw IoError("cannot open '" + path.string() + "' for appending");
    if (fresh) out_ << score_csv_header() << '\n' << std::flush;
  }

  void append(const ScoreRow& row) {
    std::lock_guard lock(mutex_);
    out_ << to_csv_line(row) << '\n' << std::flush;
    if (!out_) throw IoError("write to '" + path_.string() + "' failed");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mutex_;
};

ScoreRow failed_row() {
  ScoreRow row;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.mutual_information = row.entropy_planted = row.entropy_inferred = nan;
  row.nmi = row.voi = row.doc_nmi = row.wall_ms = nan;
  return row;
}

}  // namespace

MeanSd mean_sd(std::span<const double> values) {
  MeanSd out;
  out.count = values.size();
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

std::string_view parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::structure: return "c";
    case SweepParameter::assumed_topics: return "K_a";
    case SweepParameter::stopword_fraction: return "P_s";
    case SweepParameter::doc_length: return "m_d";
    case SweepParameter::preset: return "preset";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "c") return SweepParameter::structure;
  if (name == "K_a") return SweepParameter::assumed_topics;
  if (name == "P_s") return SweepParameter::stopword_fraction;
  if (name == "m_d") return SweepParameter::doc_length;
  if (name == "preset") return SweepParameter::preset;
  throw InvalidArgument("unknown sweep parameter '" + std::string(name) + "' (expected c, K_a, P_s, m_d or preset)");
}

GibbsConfig AlgorithmSpec::gibbs_config(std::size_t k_a, const std::string& preset_name, std::uint64_t seed) const {
  const Hyperparams h = hyperparam_preset(preset_name, k_a);
  GibbsConfig cfg;
  cfg.assumed_topics = k_a;
  cfg.alpha = alpha.value_or(h.alpha);
  cfg.beta = beta.value_or(h.beta);
  cfg.sweeps = sweeps;
  cfg.seed = seed;
  return cfg;
}

void ExperimentPlan::validate() const {
  if (name.empty() || name.find_first_of(",/ \n") != std::string::npos) {
    throw InvalidArgument("plan name must be nonempty without ',', '/', or whitespace");
  }
  if (realizations < 1) throw InvalidArgument("realizations must be >= 1");
  if (algorithms.empty()) throw InvalidArgument("plan lists no algorithms");
  if (output.empty()) throw InvalidArgument("plan has no output path");
  std::set<SweepParameter> seen_axes;
  for (const auto& axis : axes) {
    const std::string pname(parameter_name(axis.parameter));
    if (!seen_axes.insert(axis.parameter).second) throw InvalidArgument("parameter " + pname + " swept twice");
    if (axis.values.empty()) throw InvalidArgument("sweep over " + pname + " has an empty value list");
    for (const auto& v : axis.values) {
      if (axis.parameter == SweepParameter::preset) {
        const auto* s = std::get_if<std::string>(&v);
        if (!s) throw InvalidArgument("preset values must be names");
        hyperparam_preset(*s, 1);
        continue;
      }
      const auto* x = std::get_if<double>(&v);
      if (!x) throw InvalidArgument(pname + " values must be numbers");
      switch (axis.parameter) {
        case SweepParameter::structure:
        case SweepParameter::stopword_fraction:
          if (!(*x >= 0.0 && *x <= 1.0)) throw InvalidArgument(pname + " value " + format_real(*x) + " outside [0, 1]");
          break;
        case SweepParameter::assumed_topics:
        case SweepParameter::doc_length:
          if (!is_whole(*x)) throw InvalidArgument(pname + " value " + format_real(*x) + " is not a positive integer");
          break;
        case SweepParameter::preset: break;
      }
    }
  }
  std::set<std::string> tags;
  for (const auto& a : algorithms) {
    if (a.tag.empty() || a.tag.find_first_of(",/ \n") != std::string::npos) {
      throw InvalidArgument("algorithm tag '" + a.tag + "' must be nonempty without ',', '/', or whitespace");
    }
    if (!tags.insert(a.tag).second) throw InvalidArgument("duplicate algorithm tag '" + a.tag + "'");
    if (a.kind == AlgorithmSpec::Kind::gibbs) a.gibbs_config(a.assumed_topics, a.preset, 0).validate();
  }
  for (const auto& point : expand_points(*this)) {
    try {
      point.spec.validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("sweep point " + std::to_string(point.index) + ": " + e.what());
    }
  }
}

std::vector<SweepPoint> expand_points(const ExperimentPlan& plan) {
  std::size_t total = 1;
  for (const auto& axis : plan.axes) total *= axis.values.size();
  std::vector<SweepPoint> points;
  points.reserve(total);
  for (std::size_t index = 0; index < total; ++index) {
    SweepPoint p;
    p.index = index;
    p.spec = plan.base;
    std::size_t rest = index;
    p.values.resize(plan.axes.size());
    for (std::size_t a = plan.axes.size(); a-- > 0;) {
      const auto& axis = plan.axes[a];
      p.values[a] = axis.values[rest % axis.values.size()];
      rest /= axis.values.size();
    }
    for (std::size_t a = 0; a < plan.axes.size(); ++a) {
      const SweepValue& v = p.values[a];
      switch (plan.axes[a].parameter) {
        case SweepParameter::structure: p.spec.set_structure(std::get<double>(v)); break;
        case SweepParameter::stopword_fraction: p.spec.stopword_fraction = std::get<double>(v); break;
        case SweepParameter::doc_length:
          p.spec.doc_length = static_cast<std::size_t>(std::get<double>(v));
          p.spec.doc_lengths.clear();
          break;
        case SweepParameter::assumed_topics: p.assumed_topics = static_cast<std::size_t>(std::get<double>(v)); break;
        case SweepParameter::preset: p.preset = std::get<std::string>(v); break;
      }
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::uint64_t realization_seed(std::uint64_t base_seed, std::size_t point, std::size_t realization) {
  return derive_seed(base_seed, point, realization);
}

std::string run_id(const ExperimentPlan& plan, std::size_t point, std::size_t realization) {
  return plan.name + "/p" + std::to_string(point) + "/r" + std::to_string(realization);
}

ScoreRow evaluate(const SyntheticCorpus& corpus, const TopicModelResult& result, const ScoreOptions& options) {
  if (result.topic_doc.rows() != corpus.documents.num_documents()) {
    throw InvalidArgument("result covers " + std::to_string(result.topic_doc.rows()) + " documents, corpus has " +
                          std::to_string(corpus.documents.num_documents()));
  }
  const OverlapScore token = nmi(token_confusion(corpus, result.token_labels, options));
  const auto predicted = doc_classification_labels(result);
  const OverlapScore doc = doc_classification_nmi(predicted, corpus.truth.doc_topic);

  ScoreRow row;
  row.structure = corpus.spec.structure_word;
  row.stopword_fraction = corpus.spec.stopword_fraction;
  row.doc_length = doc_length_column(corpus.spec);
  row.seed = corpus.spec.seed;
  row.mutual_information = token.mutual_information;
  row.entropy_planted = token.entropy_planted;
  row.entropy_inferred = token.entropy_inferred;
  row.nmi = token.nmi;
  row.voi = token.voi;
  row.inferred_topics = result.token_labels.num_labels_used();
  row.doc_nmi = doc.nmi;
  row.algorithm_tag = result.algorithm_tag;
  return row;
}

// ---------------------------------------------------------------------------
// Plan files

namespace {

SweepValue sweep_value_from_json(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.get<double>();
  throw InvalidArgument("sweep values must be numbers or preset names");
}

Json sweep_value_to_json(const SweepValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<double>(v);
}

AlgorithmSpec algorithm_from_json(const Json& j) {
  AlgorithmSpec a;
  for (const auto& [key, value] : j.items()) {
    if (key == "type") {
      const auto type = value.get<std::string>();
      if (type == "gibbs") a.kind = AlgorithmSpec::Kind::gibbs;
      else if (type == "external") a.kind = AlgorithmSpec::Kind::external;
      else throw InvalidArgument("unknown algorithm type '" + type + "'");
    } else if (key == "tag") a.tag = value.get<std::string>();
    else if (key == "K_a") a.assumed_topics = value.get<std::size_t>();
    else if (key == "preset") a.preset = value.get<std::string>();
    else if (key == "alpha") a.alpha = value.get<double>();
    else if (key == "beta") a.beta = value.get<double>();
    else if (key == "sweeps") a.sweeps = value.get<std::size_t>();
    else throw InvalidArgument("unknown algorithm key '" + key + "'");
  }
  if (a.kind == AlgorithmSpec::Kind::external && !j.contains("tag")) {
    throw InvalidArgument("external algorithms need a tag naming their result files");
  }
  return a;
}

Json algorithm_to_json(const AlgorithmSpec& a) {
  Json j;
  j["type"] = a.kind == AlgorithmSpec::Kind::gibbs ? "gibbs" : "external";
  j["tag"] = a.tag;
  if (a.kind == AlgorithmSpec::Kind::gibbs) {
    j["K_a"] = a.assumed_topics;
    j["preset"] = a.preset;
    if (a.alpha) j["alpha"] = *a.alpha;
    if (a.beta) j["beta"] = *a.beta;
    j["sweeps"] = a.sweeps;
  }
  return j;
}

}  // namespace

ExperimentPlan plan_from_json_text(std::string_view json_text) {
  ExperimentPlan plan;
  try {
    const Json j = Json::parse(json_text);
    if (!j.is_object()) throw InvalidArgument("plan must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "name") plan.name = value.get<std::string>();
      else if (key == "base") update_spec_from_json(value, plan.base);
      else if (key == "sweep") {
        for (const auto& axis_json : value) {
          SweepAxis axis;
          axis.parameter = parse_sweep_parameter(axis_json.at("parameter").get<std::string>());
          for (const auto& v : axis_json.at("values")) axis.values.push_back(sweep_value_from_json(v));
          plan.axes.push_back(std::move(axis));
        }
      } else if (key == "realizations") plan.realizations = value.get<std::size_t>();
      else if (key == "algorithms") {
        plan.algorithms.clear();
        for (const auto& a : value) plan.algorithms.push_back(algorithm_from_json(a));
      } else if (key == "output") plan.output = value.get<std::string>();
      else if (key == "work_dir") plan.work_dir = value.get<std::string>();
      else if (key == "workers") plan.workers = value.get<std::size_t>();
      else if (key == "exclude_stopword_tokens") plan.score.exclude_stopword_tokens = value.get<bool>();
      else throw InvalidArgument("unknown plan key '" + key + "'");
    }
  } catch (const Json::exception& e) {
    throw FormatError(std::string("plan: ") + e.what());
  }
  return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open plan '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return plan_from_json_text(buffer.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string plan_to_json_text(const ExperimentPlan& plan) {
  Json j;
  j["name"] = plan.name;
  j["base"] = spec_to_json(plan.base);
  j["sweep"] = Json::array();
  for (const auto& axis : plan.axes) {
    Json a;
    a["parameter"] = std::string(parameter_name(axis.parameter));
    a["values"] = Json::array();
    for (const auto& v : axis.values) a["values"].push_back(sweep_value_to_json(v));
    j["sweep"].push_back(a);
  }
  j["realizations"] = plan.realizations;
  j["algorithms"] = Json::array();
  for (const auto& a : plan.algorithms) j["algorithms"].push_back(algorithm_to_json(a));
  j["output"] = plan.output.string();
  j["work_dir"] = plan.work_dir.string();
  j["workers"] = plan.workers;
  j["exclude_stopword_tokens"] = plan.score.exclude_stopword_tokens;
  return j.dump(2);
}

std::vector<std::string_view> builtin_recipes() {
  return {"structure-sweep", "assumed-topics-sweep", "preset-swap", "stopword-sweep", "doc-length-sweep"};
}

ExperimentPlan builtin_plan(std::string_view recipe, bool paper_scale) {
  ExperimentPlan plan;
  plan.name = std::string(recipe);
  plan.base.num_topics = 10;
  plan.base.num_documents = paper_scale ? 10000 : 2000;
  plan.base.doc_length = 100;
  plan.base.vocabulary_size = 1000;
  plan.base.seed = 1;
  plan.realizations = paper_scale ? 10 : 5;
  plan.output = plan.name + ".csv";
  plan.work_dir = plan.name + "-work";

  std::vector<SweepValue> c_grid;
  for (int i = 0; i <= 10; ++i) c_grid.emplace_back(i / 10.0);

  AlgorithmSpec gibbs;
  gibbs.assumed_topics = 10;
  if (recipe == "structure-sweep") {
    plan.axes = {{SweepParameter::structure, c_grid}};
  } else if (recipe == "assumed-topics-sweep") {
    plan.axes = {{SweepParameter::assumed_topics, {5.0, 10.0, 20.0, 50.0, 100.0}},
                 {SweepParameter::structure, c_grid}};
  } else if (recipe == "preset-swap") {
    plan.base.set_structure(0.7);
    plan.axes = {{SweepParameter::preset, {std::string("ldags_default"), std::string("ldavb_default")}}};
  } else if (recipe == "stopword-sweep") {
    plan.base.set_structure(0.7);
    if (paper_scale) {
      plan.base.num_topics = 40;
      gibbs.assumed_topics = 100;
    }
    plan.axes = {{SweepParameter::stopword_fraction, {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.65}}};
  } else if (recipe == "doc-length-sweep") {
    plan.base.set_structure(0.7);
    plan.axes = {{SweepParameter::doc_length, {10.0, 20.0, 30.0, 50.0, 100.0, 200.0}}};
  } else {
    throw InvalidArgument("unknown recipe '" + std::string(recipe) + "'");
  }
  plan.algorithms = {gibbs};
  return plan;
}

// ---------------------------------------------------------------------------
// Sweeps

SweepReport run_sweep(const ExperimentPlan& plan, const ProgressFn& progress) {
  plan.validate();
  const auto points = expand_points(plan);
  const auto existing = read_scores(plan.output);
  std::set<RunKey> done;
  for (const auto& row : existing) {
    if (!row.failed()) done.emplace(row.experiment_id, row.algorithm_tag);
  }

  struct Cell {
    std::size_t point;
    std::size_t realization;
  };
  std::vector<Cell> pending;
  SweepReport report;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t r = 0; r < plan.realizations; ++r) {
      const std::string id = run_id(plan, p, r);
      const bool complete = std::all_of(plan.algorithms.begin(), plan.algorithms.end(),
                                        [&](const AlgorithmSpec& a) { return done.count({id, a.tag}) > 0; });
      if (complete) report.runs_skipped += plan.algorithms.size();
      else pending.push_back({p, r});
    }
  }

  ScoreAppender appender(plan.output);
  std::atomic<std::size_t> finished{0};
  std::atomic<std::size_t> executed{0};
  std::mutex log_mutex;

  parallel_for(pending.size(), plan.workers, [&](std::size_t i) {
    const Cell cell = pending[i];
    const SweepPoint& point = points[cell.point];
    const std::string id = run_id(plan, cell.point, cell.realization);
    CorpusSpec spec = point.spec;
    spec.seed = realization_seed(plan.base.seed, cell.point, cell.realization);
    const SyntheticCorpus corpus = generate_corpus(spec, {.threads = 1});

    for (std::size_t a = 0; a < plan.algorithms.size(); ++a) {
      const AlgorithmSpec& algo = plan.algorithms[a];
      if (done.count({id, algo.tag})) continue;
      ScoreRow row;
      if (algo.kind == AlgorithmSpec::Kind::gibbs) {
        const std::size_t k_a = point.assumed_topics.value_or(algo.assumed_topics);
        const GibbsConfig cfg =
            algo.gibbs_config(k_a, point.preset.value_or(algo.preset), derive_seed(spec.seed, stream::kInference, a));
        const auto start = std::chrono::steady_clock::now();
        const TopicModelResult result = run_gibbs(corpus.documents, cfg);
        const auto stop = std::chrono::steady_clock::now();
        row = evaluate(corpus, result, plan.score);
        row.assumed_topics = k_a;
        row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      } else {
        const auto corpus_path = plan.work_dir / "corpora" / file_id(id);
        if (!std::filesystem::exists(CorpusPaths::from_prefix(corpus_path).corpus)) {
          export_corpus(corpus, corpus_path, /*with_truth=*/false);
        }
        const auto result_path = plan.work_dir / "results" / (file_id(id) + "." + algo.tag + ".result");
        try {
          if (!std::filesystem::exists(result_path)) throw IoError("missing result file '" + result_path.string() + "'");
          const TopicModelResult result = import_result(result_path, &corpus.documents);
          row = evaluate(corpus, result, plan.score);
          const auto k = result.hyperparams.find("K_a");
          row.assumed_topics = k == result.hyperparams.end() ? 0 : std::stoul(k->second);
          const auto ms = result.hyperparams.find("wall_ms");
          row.wall_ms = ms == result.hyperparams.end() ? 0.0 : std::stod(ms->second);
        } catch (const Error& e) {
          {
            std::lock_guard lock(log_mutex);
            std::cerr << "[sweep] " << id << " " << algo.tag << ": marked failed: " << e.what() << '\n';
          }
          row = failed_row();
          row.structure = spec.structure_word;
          row.stopword_fraction = spec.stopword_fraction;
          row.doc_length = doc_length_column(spec);
          row.seed = spec.seed;
        }
      }
      row.experiment_id = id;
      row.algorithm_tag = algo.tag;
      appender.append(row);
      ++executed;
    }
    const std::size_t n = ++finished;
    if (progress) {
      std::lock_guard lock(log_mutex);
      progress(n, pending.size());
    }
  });

  const auto all_rows = read_scores(plan.output);
  for (auto& [key, row] : latest_rows(all_rows)) report.rows.push_back(row);
  report.runs_executed = executed;
  report.summary = summarize(plan, all_rows);
  report.summary_path = plan.output.parent_path() / (plan.output.stem().string() + ".summary.csv");
  write_summary_csv(plan, report.summary, report.summary_path);
  return report;
}

std::vector<PointSummary> summarize(const ExperimentPlan& plan, std::span<const ScoreRow> rows) {
  const auto latest = latest_rows(rows);
  const auto points = expand_points(plan);
  std::vector<PointSummary> out;
  for (const auto& point : points) {
    for (const auto& algo : plan.algorithms) {
      PointSummary s;
      s.point = point.index;
      s.values = point.values;
      s.algorithm_tag = algo.tag;
      std::vector<double> nmi_v, doc_v, k_v, mi_v;
      for (std::size_t r = 0; r < plan.realizations; ++r) {
        const auto it = latest.find({run_id(plan, point.index, r), algo.tag});
        if (it == latest.end()) continue;
        if (it->second.failed()) {
          ++s.failed;
          continue;
        }
        nmi_v.push_back(it->second.nmi);
        doc_v.push_back(it->second.doc_nmi);
        k_v.push_back(static_cast<double>(it->second.inferred_topics));
        mi_v.push_back(it->second.mutual_information);
      }
      s.nmi = mean_sd(nmi_v);
      s.doc_nmi = mean_sd(doc_v);
      s.inferred_topics = mean_sd(k_v);
      s.mutual_information = mean_sd(mi_v);
      out.push_back(std::move(s));
    }
  }
  return out;
}

void write_summary_csv(const ExperimentPlan& plan, std::span<const PointSummary> summary,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "point";
  for (const auto& axis : plan.axes) out << ',' << parameter_name(axis.parameter);
  out << ",algorithm_tag,runs,failed,nmi_mean,nmi_sd,doc_nmi_mean,doc_nmi_sd,K_inferred_mean,K_inferred_sd,"
         "I_bits_mean,I_bits_sd\n";
  for (const auto& s : summary) {
    out << s.point;
    for (const auto& v : s.values) out << ',' << value_text(v);
    out << ',' << s.algorithm_tag << ',' << s.nmi.count << ',' << s.failed << ',' << format_real(s.nmi.mean) << ','
        << format_real(s.nmi.sd) << ',' << format_real(s.doc_nmi.mean) << ',' << format_real(s.doc_nmi.sd) << ','
        << format_real(s.inferred_topics.mean) << ',' << format_real(s.inferred_topics.sd) << ','
        << format_real(s.mutual_information.mean) << ',' << format_real(s.mutual_information.sd) << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

// ---------------------------------------------------------------------------
// Distribution comparison

DistributionComparison compare_distributions(const TruthSidecar& sidecar, const TopicModelResult& result,
                                             const TokenLabeling* planted_labels) {
  const GroundTruth& truth = sidecar.truth;
  const std::size_t num_docs = truth.num_documents();
  const std::size_t vocab = truth.vocabulary_size();
  const std::size_t k = truth.num_topics();
  const std::size_t kp = result.num_topics();
  if (result.topic_doc.rows() != num_docs || result.topic_doc.cols() != kp) {
    throw InvalidArgument("inferred P(t|d) is " + std::to_string(result.topic_doc.rows()) + " x " +
                          std::to_string(result.topic_doc.cols()) + ", expected " + std::to_string(num_docs) +
                          " documents");
  }
  if (result.word_topic.cols() != vocab) {
    throw InvalidArgument("inferred P(w|t) covers " + std::to_string(result.word_topic.cols()) +
                          " words, planted vocabulary has " + std::to_string(vocab));
  }

  DistributionComparison cmp;
  cmp.planted_topic_doc = topic_doc_matrix(truth, sidecar.spec.structure_doc);
  cmp.planted_word_topic = word_topic_matrix(truth, sidecar.spec.structure_word);

  Matrix mass(k, kp);
  if (planted_labels && !planted_labels->empty() && planted_labels->size() == result.token_labels.size()) {
    const ConfusionMatrix cm = confusion(*planted_labels, result.token_labels);
    for (std::size_t t = 0; t < std::min(k, cm.planted_labels()); ++t) {
      for (std::size_t tp = 0; tp < std::min(kp, cm.inferred_labels()); ++tp) {
        mass(t, tp) = static_cast<double>(cm.count(t, tp));
      }
    }
  } else {
    for (std::size_t d = 0; d < num_docs; ++d) {
      for (std::size_t t = 0; t < k; ++t) {
        const double p = cmp.planted_topic_doc(d, t);
        if (p == 0.0) continue;
        for (std::size_t tp = 0; tp < kp; ++tp) mass(t, tp) += p * result.topic_doc(d, tp);
      }
    }
  }

  // Greedy matching: largest remaining mass first, ties to lower (t, t').
  struct Entry {
    double mass;
    std::size_t t, tp;
  };
  std::vector<Entry> entries;
  entries.reserve(k * kp);
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t tp = 0; tp < kp; ++tp) entries.push_back({mass(t, tp), t, tp});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.mass > b.mass; });
  const std::size_t width = std::max(k, kp);
  cmp.order.assign(width, kUnmatched);
  std::vector<bool> used(kp, false);
  std::vector<bool> placed(k, false);
  for (const auto& e : entries) {
    if (placed[e.t] || used[e.tp]) continue;
    placed[e.t] = true;
    used[e.tp] = true;
    cmp.order[e.t] = e.tp;
  }
  std::vector<std::size_t> leftovers;
  for (std::size_t tp = 0; tp < kp; ++tp) {
    if (!used[tp]) leftovers.push_back(tp);
  }
  std::vector<double> column_mass(kp, 0.0);
  for (std::size_t tp = 0; tp < kp; ++tp) {
    for (std::size_t t = 0; t < k; ++t) column_mass[tp] += mass(t, tp);
  }
  std::stable_sort(leftovers.begin(), leftovers.end(),
                   [&](std::size_t a, std::size_t b) { return column_mass[a] > column_mass[b]; });
  for (std::size_t i = 0; i < leftovers.size(); ++i) cmp.order[k + i] = leftovers[i];

  cmp.inferred_topic_doc = Matrix(num_docs, width);
  cmp.inferred_word_topic = Matrix(width, vocab);
  cmp.matching_mass = Matrix(k, width);
  for (std::size_t pos = 0; pos < width; ++pos) {
    const std::size_t tp = cmp.order[pos];
    if (tp == kUnmatched) continue;
    for (std::size_t d = 0; d < num_docs; ++d) cmp.inferred_topic_doc(d, pos) = result.topic_doc(d, tp);
    for (std::size_t w = 0; w < vocab; ++w) cmp.inferred_word_topic(pos, w) = result.word_topic(tp, w);
    for (std::size_t t = 0; t < k; ++t) cmp.matching_mass(t, pos) = mass(t, tp);
  }

  cmp.word_topic_tv.resize(k);
  for (std::size_t t = 0; t < k; ++t) {
    cmp.word_topic_tv[t] = cmp.order[t] == kUnmatched
                               ? 1.0
                               : total_variation(cmp.planted_word_topic.row(t), cmp.inferred_word_topic.row(t));
  }
  cmp.topic_doc_tv.resize(num_docs);
  for (std::size_t d = 0; d < num_docs; ++d) {
    cmp.topic_doc_tv[d] = total_variation(cmp.planted_topic_doc.row(d), cmp.inferred_topic_doc.row(d));
  }
  cmp.mean_word_topic_tv = mean_sd(cmp.word_topic_tv).mean;
  cmp.mean_topic_doc_tv = mean_sd(cmp.topic_doc_tv).mean;
  cmp.planted_word_topic_entropy = mean_row_entropy(cmp.planted_word_topic);
  cmp.inferred_word_topic_entropy = mean_row_entropy(result.word_topic);
  cmp.planted_topic_doc_entropy = mean_row_entropy(cmp.planted_topic_doc);
  cmp.inferred_topic_doc_entropy = mean_row_entropy(result.topic_doc);
  return cmp;
}

void write_comparison(const DistributionComparison& cmp, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write_grid = [&](const char* name, const Matrix& m) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    std::string line;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      line.clear();
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (c > 0) line.push_back(',');
        line += format_real(m(r, c));
      }
      line.push_back('\n');
      out << line;
    }
    if (!out) throw IoError("write to '" + path.string() + "' failed");
  };
  write_grid("planted_topic_doc.csv", cmp.planted_topic_doc);
  write_grid("inferred_topic_doc.csv", cmp.inferred_topic_doc);
  write_grid("planted_word_topic.csv", cmp.planted_word_topic);
  write_grid("inferred_word_topic.csv", cmp.inferred_word_topic);

  {
    std::ofstream out(dir / "matching.csv", std::ios::binary);
    out << "position,inferred_topic,planted_tv\n";
    for (std::size_t pos = 0; pos < cmp.order.size(); ++pos) {
      out << pos << ',';
      if (cmp.order[pos] == kUnmatched) out << "none";
      else out << cmp.order[pos];
      out << ',';
      if (pos < cmp.word_topic_tv.size()) out << format_real(cmp.word_topic_tv[pos]);
      out << '\n';
    }
  }
  std::ofstream out(dir / "summary.csv", std::ios::binary);
  out << "metric,value\n"
      << "mean_word_topic_tv," << format_real(cmp.mean_word_topic_tv) << '\n'
      << "mean_topic_doc_tv," << format_real(cmp.mean_topic_doc_tv) << '\n'
      << "planted_word_topic_entropy_bits," << format_real(cmp.planted_word_topic_entropy) << '\n'
      << "inferred_word_topic_entropy_bits," << format_real(cmp.inferred_word_topic_entropy) << '\n'
      << "planted_topic_doc_entropy_bits," << format_real(cmp.planted_topic_doc_entropy) << '\n'
      << "inferred_topic_doc_entropy_bits," << format_real(cmp.inferred_topic_doc_entropy) << '\n';
  if (!out) throw IoError("write to '" + (dir / "summary.csv").string() + "' failed");
}

// ---------------------------------------------------------------------------
// Reproducibility

ReproducibilityReport run_reproducibility(const CorpusSpec& spec, const AlgorithmSpec& algorithm,
                                          std::size_t realizations, bool same_seed, std::size_t workers) {
  if (realizations < 1) throw InvalidArgument("realizations must be >= 1");
  if (algorithm.kind != AlgorithmSpec::Kind::gibbs) {
    throw InvalidArgument("reproducibility runs need an in-process algorithm");
  }
  spec.validate();
  algorithm.gibbs_config(algorithm.assumed_topics, algorithm.preset, 0).validate();

  ReproducibilityReport report;
  report.rows.resize(realizations);
  parallel_for(realizations, workers, [&](std::size_t r) {
    CorpusSpec s = spec;
    s.seed = realization_seed(spec.seed, 0, r);
    const SyntheticCorpus corpus = generate_corpus(s, {.threads = 1});
    ReproducibilityRow& row = report.rows[r];
    row.realization = r;
    row.corpus_seed = s.seed;
    row.seed_a = derive_seed(s.seed, stream::kInference, 0);
    row.seed_b = same_seed ? row.seed_a : derive_seed(s.seed, stream::kInference, 1);
    const auto a = run_gibbs(corpus.documents, algorithm.gibbs_config(algorithm.assumed_topics, algorithm.preset, row.seed_a));
    const auto b = run_gibbs(corpus.documents, algorithm.gibbs_config(algorithm.assumed_topics, algorithm.preset, row.seed_b));
    row.overlap = reproducibility(a.token_labels, b.token_labels);
    row.nmi_a = nmi(confusion(corpus.planted_labels, a.token_labels)).nmi;
    row.nmi_b = nmi(confusion(corpus.planted_labels, b.token_labels)).nmi;
  });
  std::vector<double> values;
  for (const auto& row : report.rows) values.push_back(row.overlap.nmi);
  report.nmi = mean_sd(values);
  return report;
}

void write_reproducibility_csv(const ReproducibilityReport& report, std::ostream& out) {
  out << "realization,corpus_seed,seed_a,seed_b,nmi,I_bits,voi_bits,nmi_a_planted,nmi_b_planted\n";
  for (const auto& row : report.rows) {
    out << row.realization << ',' << row.corpus_seed << ',' << row.seed_a << ',' << row.seed_b << ','
        << format_real(row.overlap.nmi) << ',' << format_real(row.overlap.mutual_information) << ','
        << format_real(row.overlap.voi) << ',' << format_real(row.nmi_a) << ',' << format_real(row.nmi_b) << '\n';
  }
}

}  // namespace topicbench
