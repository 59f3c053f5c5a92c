#pragma once

// Plain-text interchange formats. All files are UTF-8 with LF line endings.
//
// Corpus file (*.corpus): one header line, then one line per document of
// space-separated decimal word ids:
//
//   topicbench-corpus 1 K=<int> D=<int> V=<int> P_s=<real> c_w=<real> c_d=<real> seed=<u64>
//   3 17 17 4
//   ...
//
// Label file (*.labels): same body shape, topic ids instead of word ids:
//
//   topicbench-labels 1 D=<int> labels=<int>
//
// Truth sidecar (*.truth.json): JSON object with "format":"topicbench-truth",
// "version":1, the generating "spec", and the ground-truth arrays
// word_marginal, topic_marginal, word_topic (-1 for stopwords), doc_topic,
// stopwords, topical_words, topic_sizes.
//
// Result file (*.result): line-oriented sections,
//
//   topicbench-result 1
//   algorithm_tag <rest of line>
//   hyperparam <key> <rest of line>      (zero or more)
//   topics <K'>
//   documents <D>
//   vocabulary <V>
//   topic_doc                            (D rows of K' values)
//   word_topic                           (K' rows of V values)
//   labels                               (D rows, one topic id per token)
//   end
//
// Matrix entries are written with 17 significant digits so doubles survive
// the round trip exactly.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "topicbench/corpus.hpp"

namespace topicbench {

inline constexpr int kFormatVersion = 1;

struct CorpusHeader {
  int version = kFormatVersion;
  std::size_t num_topics = 0;
  std::size_t num_documents = 0;
  std::size_t vocabulary_size = 0;
  double stopword_fraction = 0.0;
  double structure_word = 0.0;
  double structure_doc = 0.0;
  std::uint64_t seed = 0;

  static CorpusHeader from_spec(const CorpusSpec& spec);
  friend bool operator==(const CorpusHeader&, const CorpusHeader&) = default;
};

struct CorpusFile {
  CorpusHeader header;
  DocumentSet documents;
};

struct TruthSidecar {
  CorpusSpec spec;
  GroundTruth truth;
};

void write_corpus_file(std::ostream& out, const CorpusHeader& header, const DocumentSet& docs);
CorpusFile read_corpus_file(std::istream& in);

void write_label_file(std::ostream& out, const TokenLabeling& labels, const DocumentSet& shape);
// Lines must match the document lengths of `shape`.
TokenLabeling read_label_file(std::istream& in, const DocumentSet& shape);

void write_truth_sidecar(std::ostream& out, const CorpusSpec& spec, const GroundTruth& truth);
TruthSidecar read_truth_sidecar(std::istream& in);

void write_result_file(std::ostream& out, const TopicModelResult& result, const DocumentSet& shape);
// Validates structure, row sums (within `tolerance`) and label ranges. When
// `shape` is given, the document count, vocabulary size and per-document
// token counts must match it. Errors carry the first offending line.
TopicModelResult read_result_file(std::istream& in, const DocumentSet* shape = nullptr,
                                  double tolerance = 1e-9);

struct CorpusPaths {
  std::filesystem::path corpus;
  std::filesystem::path labels;
  std::filesystem::path truth;

  // <prefix>.corpus, <prefix>.labels, <prefix>.truth.json
  static CorpusPaths from_prefix(const std::filesystem::path& prefix);
};

// Writes the corpus file, plus labels and truth sidecar when `with_truth`.
// Blind mode (with_truth = false) writes neither.
CorpusPaths export_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& prefix,
                          bool with_truth = true);
// Reads all three files of an exported corpus back.
SyntheticCorpus import_corpus(const std::filesystem::path& prefix);

CorpusFile import_corpus_file(const std::filesystem::path& path);
TokenLabeling import_labels(const std::filesystem::path& path, const DocumentSet& shape);
TruthSidecar import_truth(const std::filesystem::path& path);

void export_result(const TopicModelResult& result, const DocumentSet& shape,
                   const std::filesystem::path& path);
TopicModelResult import_result(const std::filesystem::path& path, const DocumentSet* shape = nullptr,
                               double tolerance = 1e-9);

// One evaluation in the scores CSV. Failed evaluations carry NaN metrics.
struct ScoreRow {
  std::string experiment_id;
  std::string algorithm_tag;
  std::size_t assumed_topics = 0;  // K_a, 0 for non-parametric backends
  double structure = 0.0;          // c
  double stopword_fraction = 0.0;  // P_s
  std::size_t doc_length = 0;      // m_d
  std::uint64_t seed = 0;
  double mutual_information = 0.0;  // I_bits
  double entropy_planted = 0.0;     // H_bits
  double entropy_inferred = 0.0;    // Hp_bits
  double nmi = 0.0;
  double voi = 0.0;  // voi_bits
  std::size_t inferred_topics = 0;  // K_inferred
  double doc_nmi = 0.0;
  double wall_ms = 0.0;

  bool failed() const;
};

// experiment_id,algorithm_tag,K_a,c,P_s,m_d,seed,I_bits,H_bits,Hp_bits,nmi,voi_bits,K_inferred,doc_nmi,wall_ms
std::string_view score_csv_header();
std::string to_csv_line(const ScoreRow& row);
ScoreRow parse_score_line(std::string_view line);
// Reads every data row of a scores CSV; a missing file yields no rows.
std::vector<ScoreRow> read_scores(const std::filesystem::path& path);

// Shortest text that parses back to exactly `x`.
std::string format_real(double x);
// Always 17 significant digits.
std::string format_real17(double x);

}  // namespace topicbench
