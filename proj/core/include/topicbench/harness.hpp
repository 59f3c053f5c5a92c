#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "topicbench/corpus.hpp"
#include "topicbench/interchange.hpp"
#include "topicbench/lda_gibbs.hpp"
#include "topicbench/metrics.hpp"

namespace topicbench {

// Sample mean and (n-1) standard deviation; sd is 0 for fewer than two values.
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t count = 0;
};
MeanSd mean_sd(std::span<const double> values);

enum class SweepParameter { structure, assumed_topics, stopword_fraction, doc_length, preset };

// "c", "K_a", "P_s", "m_d", "preset"
std::string_view parameter_name(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);

using SweepValue = std::variant<double, std::string>;

struct SweepAxis {
  SweepParameter parameter = SweepParameter::structure;
  std::vector<SweepValue> values;
};

// One inference backend in a plan. In-repo Gibbs runs in process; an
// external backend is read from <work_dir>/results/<run>.<tag>.result, which
// an adapter produces from <work_dir>/corpora/<run>.corpus.
struct AlgorithmSpec {
  enum class Kind { gibbs, external };

  Kind kind = Kind::gibbs;
  std::string tag = "lda-gibbs";
  std::size_t assumed_topics = 10;
  std::string preset = "ldags_default";
  // Explicit priors override the preset.
  std::optional<double> alpha;
  std::optional<double> beta;
  std::size_t sweeps = 1000;

  // Gibbs configuration with K_a, preset and seed applied.
  GibbsConfig gibbs_config(std::size_t assumed_topics, const std::string& preset, std::uint64_t seed) const;
};

struct ExperimentPlan {
  std::string name = "sweep";
  CorpusSpec base;  // base.seed is the base seed of every realization
  // Points are the cartesian product of the axes, first axis slowest.
  std::vector<SweepAxis> axes;
  std::size_t realizations = 1;
  std::vector<AlgorithmSpec> algorithms{AlgorithmSpec{}};
  std::filesystem::path output = "scores.csv";
  std::filesystem::path work_dir = "work";
  // Concurrent (point, realization) cells; 0 picks hardware concurrency.
  std::size_t workers = 0;
  ScoreOptions score;

  // Throws InvalidArgument before anything is generated.
  void validate() const;
};

ExperimentPlan plan_from_json_text(std::string_view json_text);
ExperimentPlan load_plan(const std::filesystem::path& path);
std::string plan_to_json_text(const ExperimentPlan& plan);

// Built-in recipes: "structure-sweep", "assumed-topics-sweep", "preset-swap",
// "stopword-sweep", "doc-length-sweep". Desk scale uses D = 2000 documents;
// paper scale restores D = 10^4 and 10 realizations.
ExperimentPlan builtin_plan(std::string_view recipe, bool paper_scale = false);
std::vector<std::string_view> builtin_recipes();

struct SweepPoint {
  std::size_t index = 0;
  std::vector<SweepValue> values;  // one per axis
  CorpusSpec spec;                 // seed not yet derived
  std::optional<std::size_t> assumed_topics;
  std::optional<std::string> preset;
};
std::vector<SweepPoint> expand_points(const ExperimentPlan& plan);

// seed = derive_seed(base_seed, point, realization)
std::uint64_t realization_seed(std::uint64_t base_seed, std::size_t point, std::size_t realization);
// "<plan>/p<point>/r<realization>"
std::string run_id(const ExperimentPlan& plan, std::size_t point, std::size_t realization);

// Scores one result against its corpus: token NMI, document-classification
// NMI against t_d, and the number of inferred topics in use.
ScoreRow evaluate(const SyntheticCorpus& corpus, const TopicModelResult& result, const ScoreOptions& options = {});

struct PointSummary {
  std::size_t point = 0;
  std::vector<SweepValue> values;
  std::string algorithm_tag;
  std::size_t failed = 0;
  MeanSd nmi;
  MeanSd doc_nmi;
  MeanSd inferred_topics;
  MeanSd mutual_information;
};

struct SweepReport {
  std::vector<ScoreRow> rows;  // latest successful (or failed) row per run
  std::vector<PointSummary> summary;
  std::size_t runs_executed = 0;
  std::size_t runs_skipped = 0;
  std::filesystem::path summary_path;
};

// Progress callback: (finished cells, total cells).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

// Runs every (point, realization) cell not already present in plan.output,
// appending one row per algorithm, then writes <output>.summary.csv.
SweepReport run_sweep(const ExperimentPlan& plan, const ProgressFn& progress = {});

// Aggregates the rows of a plan's output file without running anything.
std::vector<PointSummary> summarize(const ExperimentPlan& plan, std::span<const ScoreRow> rows);
void write_summary_csv(const ExperimentPlan& plan, std::span<const PointSummary> summary,
                       const std::filesystem::path& path);

// Planted vs inferred distributions with inferred topics reordered so that
// inferred topic order[i] sits next to planted topic i. Matching is greedy on
// the confusion mass: token counts when planted and inferred labels are
// available, otherwise sum_d P(t|d) P_hat(t'|d).
// Reordered grids are max(K, K') wide; a planted topic with no partner gets a
// zero column (row) and order entry SIZE_MAX.
struct DistributionComparison {
  Matrix planted_topic_doc;    // D x K
  Matrix inferred_topic_doc;   // D x max(K, K'), columns reordered
  Matrix planted_word_topic;   // K x V
  Matrix inferred_word_topic;  // max(K, K') x V, rows reordered
  Matrix matching_mass;        // K x max(K, K') confusion mass, columns reordered
  std::vector<std::size_t> order;
  // Total variation per planted topic against its matched inferred row;
  // 1 for planted topics left without a partner (K' < K).
  std::vector<double> word_topic_tv;
  // Total variation per document between planted and reordered inferred rows.
  std::vector<double> topic_doc_tv;
  double mean_word_topic_tv = 0.0;
  double mean_topic_doc_tv = 0.0;
  double planted_word_topic_entropy = 0.0;
  double inferred_word_topic_entropy = 0.0;
  double planted_topic_doc_entropy = 0.0;
  double inferred_topic_doc_entropy = 0.0;
};

DistributionComparison compare_distributions(const TruthSidecar& truth, const TopicModelResult& result,
                                             const TokenLabeling* planted_labels = nullptr);

// Writes planted_topic_doc.csv, inferred_topic_doc.csv, planted_word_topic.csv,
// inferred_word_topic.csv, matching.csv and summary.csv into `dir`.
void write_comparison(const DistributionComparison& cmp, const std::filesystem::path& dir);

struct ReproducibilityRow {
  std::size_t realization = 0;
  std::uint64_t corpus_seed = 0;
  std::uint64_t seed_a = 0;
  std::uint64_t seed_b = 0;
  OverlapScore overlap;  // run a vs run b
  double nmi_a = 0.0;    // run a vs planted
  double nmi_b = 0.0;    // run b vs planted
};

struct ReproducibilityReport {
  std::vector<ReproducibilityRow> rows;
  MeanSd nmi;
};

// Per realization: one corpus, two inference runs, NMI between their token
// labels. With `same_seed` both runs share one seed.
ReproducibilityReport run_reproducibility(const CorpusSpec& spec, const AlgorithmSpec& algorithm,
                                          std::size_t realizations, bool same_seed = false,
                                          std::size_t workers = 0);
void write_reproducibility_csv(const ReproducibilityReport& report, std::ostream& out);

}  // namespace topicbench
