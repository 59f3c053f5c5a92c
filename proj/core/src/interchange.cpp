#include "topicbench/interchange.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "json_codec.hpp"
#include "topicbench/error.hpp"

namespace topicbench {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // False at end of input.
  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (!line.empty() && line.back() == '\r') {
      throw FormatError("CR line endings are not accepted", number_);
    }
    return true;
  }

  std::string expect(const char* what) {
    std::string line;
    if (!next(line)) throw FormatError(std::string("unexpected end of file, expected ") + what, number_ + 1);
    return line;
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, const char* what) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw FormatError(std::string("invalid ") + what + " '" + std::string(text) + "'", line);
  }
  return value;
}

double parse_real(std::string_view text, std::size_t line, const char* what) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  return parse_number<double>(text, line, what);
}

// Parses "<magic> <version> key=value ..." into a map after checking magic and version.
std::map<std::string, std::string, std::less<>> parse_header(const std::string& line, std::string_view magic,
                                                             std::size_t line_no) {
  const auto fields = split(line);
  if (fields.empty() || fields[0] != magic) {
    throw FormatError("expected '" + std::string(magic) + "' header", line_no);
  }
  if (fields.size() < 2) throw FormatError("header lacks a format version", line_no);
  const int version = parse_number<int>(fields[1], line_no, "format version");
  if (version != kFormatVersion) {
    throw FormatError("unsupported " + std::string(magic) + " version " + std::to_string(version), line_no);
  }
  std::map<std::string, std::string, std::less<>> kv;
  for (std::size_t i = 2; i < fields.size(); ++i) {
    const auto eq = fields[i].find('=');
    if (eq == std::string_view::npos) throw FormatError("malformed header field '" + std::string(fields[i]) + "'", line_no);
    kv.emplace(std::string(fields[i].substr(0, eq)), std::string(fields[i].substr(eq + 1)));
  }
  return kv;
}

const std::string& require(const std::map<std::string, std::string, std::less<>>& kv, std::string_view key,
                           std::size_t line_no) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw FormatError("header lacks field '" + std::string(key) + "'", line_no);
  return it->second;
}

void write_ids(std::ostream& out, std::span<const std::uint32_t> ids) {
  char buf[16];
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out.put(' ');
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, ids[i]);
    out.write(buf, ptr - buf);
  }
  out.put('\n');
}

std::vector<std::uint32_t> parse_ids(std::string_view line, std::size_t line_no, std::size_t limit,
                                     const char* what) {
  std::vector<std::uint32_t> ids;
  for (auto field : split(line)) {
    const auto id = parse_number<std::uint32_t>(field, line_no, what);
    if (id >= limit) {
      throw FormatError(std::string(what) + " " + std::to_string(id) + " outside [0, " + std::to_string(limit) + ")",
                        line_no);
    }
    ids.push_back(id);
  }
  return ids;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

// Re-throws format errors with the file path in front.
template <typename F>
auto with_path(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string format_real17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

CorpusHeader CorpusHeader::from_spec(const CorpusSpec& spec) {
  CorpusHeader h;
  h.num_topics = spec.num_topics;
  h.num_documents = spec.num_documents;
  h.vocabulary_size = spec.vocabulary_size;
  h.stopword_fraction = spec.stopword_fraction;
  h.structure_word = spec.structure_word;
  h.structure_doc = spec.structure_doc;
  h.seed = spec.seed;
  return h;
}

void write_corpus_file(std::ostream& out, const CorpusHeader& h, const DocumentSet& docs) {
  if (h.num_documents != docs.num_documents() || h.vocabulary_size != docs.vocabulary_size()) {
    throw InvalidArgument("corpus header does not match the documents");
  }
  out << "topicbench-corpus " << kFormatVersion << " K=" << h.num_topics << " D=" << h.num_documents
      << " V=" << h.vocabulary_size << " P_s=" << format_real(h.stopword_fraction)
      << " c_w=" << format_real(h.structure_word) << " c_d=" << format_real(h.structure_doc) << " seed=" << h.seed
      << '\n';
  for (std::size_t d = 0; d < docs.num_documents(); ++d) write_ids(out, docs.doc(d));
}

CorpusFile read_corpus_file(std::istream& in) {
  LineReader reader(in);
  const std::string first = reader.expect("corpus header");
  const auto kv = parse_header(first, "topicbench-corpus", 1);
  CorpusFile file;
  CorpusHeader& h = file.header;
  h.num_topics = parse_number<std::size_t>(require(kv, "K", 1), 1, "K");
  h.num_documents = parse_number<std::size_t>(require(kv, "D", 1), 1, "D");
  h.vocabulary_size = parse_number<std::size_t>(require(kv, "V", 1), 1, "V");
  h.stopword_fraction = parse_real(require(kv, "P_s", 1), 1, "P_s");
  h.structure_word = parse_real(require(kv, "c_w", 1), 1, "c_w");
  h.structure_doc = parse_real(require(kv, "c_d", 1), 1, "c_d");
  h.seed = parse_number<std::uint64_t>(require(kv, "seed", 1), 1, "seed");

  std::vector<std::uint32_t> tokens;
  std::vector<std::size_t> offsets{0};
  std::string line;
  for (std::size_t d = 0; d < h.num_documents; ++d) {
    if (!reader.next(line)) {
      throw FormatError("expected " + std::to_string(h.num_documents) + " document lines, found " + std::to_string(d),
                        reader.number() + 1);
    }
    const auto ids = parse_ids(line, reader.number(), h.vocabulary_size, "word id");
    tokens.insert(tokens.end(), ids.begin(), ids.end());
    offsets.push_back(tokens.size());
  }
  if (reader.next(line)) throw FormatError("trailing content after the last document", reader.number());
  file.documents = DocumentSet(std::move(tokens), std::move(offsets), h.vocabulary_size);
  return file;
}

void write_label_file(std::ostream& out, const TokenLabeling& labels, const DocumentSet& shape) {
  if (labels.size() != shape.num_tokens()) throw InvalidArgument("labeling does not match the corpus token count");
  out << "topicbench-labels " << kFormatVersion << " D=" << shape.num_documents() << " labels=" << labels.num_labels()
      << '\n';
  for (std::size_t d = 0; d < shape.num_documents(); ++d) {
    write_ids(out, labels.labels().subspan(shape.offsets()[d], shape.doc_length(d)));
  }
}

TokenLabeling read_label_file(std::istream& in, const DocumentSet& shape) {
  LineReader reader(in);
  const auto kv = parse_header(reader.expect("label header"), "topicbench-labels", 1);
  const auto num_docs = parse_number<std::size_t>(require(kv, "D", 1), 1, "D");
  const auto num_labels = parse_number<std::size_t>(require(kv, "labels", 1), 1, "labels");
  if (num_docs != shape.num_documents()) {
    throw FormatError("label file has D=" + std::to_string(num_docs) + " but the corpus has " +
                          std::to_string(shape.num_documents()) + " documents",
                      1);
  }
  std::vector<std::uint32_t> labels;
  labels.reserve(shape.num_tokens());
  std::string line;
  for (std::size_t d = 0; d < num_docs; ++d) {
    if (!reader.next(line)) throw FormatError("missing label line for document " + std::to_string(d), reader.number() + 1);
    const auto ids = parse_ids(line, reader.number(), num_labels, "label");
    if (ids.size() != shape.doc_length(d)) {
      throw FormatError("document " + std::to_string(d) + " has " + std::to_string(shape.doc_length(d)) +
                            " tokens but " + std::to_string(ids.size()) + " labels",
                        reader.number());
    }
    labels.insert(labels.end(), ids.begin(), ids.end());
  }
  if (reader.next(line)) throw FormatError("trailing content after the last document", reader.number());
  return TokenLabeling(std::move(labels), num_labels);
}

void write_truth_sidecar(std::ostream& out, const CorpusSpec& spec, const GroundTruth& truth) {
  Json j;
  j["format"] = "topicbench-truth";
  j["version"] = kFormatVersion;
  j["spec"] = spec_to_json(spec);
  j["word_marginal"] = truth.word_marginal;
  j["topic_marginal"] = truth.topic_marginal;
  j["word_topic"] = truth.word_topic;
  j["doc_topic"] = truth.doc_topic;
  j["stopwords"] = truth.stopwords;
  j["topical_words"] = truth.topical_words;
  j["topic_sizes"] = truth.topic_sizes;
  out << j.dump() << '\n';
}

TruthSidecar read_truth_sidecar(std::istream& in) {
  TruthSidecar s;
  try {
    const Json j = Json::parse(in);
    if (j.value("format", "") != "topicbench-truth") throw FormatError("not a topicbench truth sidecar");
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion) throw FormatError("unsupported truth sidecar version " + std::to_string(version));
    s.spec = spec_from_json(j.at("spec"));
    s.truth.word_marginal = j.at("word_marginal").get<std::vector<double>>();
    s.truth.topic_marginal = j.at("topic_marginal").get<std::vector<double>>();
    s.truth.word_topic = j.at("word_topic").get<std::vector<std::int32_t>>();
    s.truth.doc_topic = j.at("doc_topic").get<std::vector<std::uint32_t>>();
    s.truth.stopwords = j.at("stopwords").get<std::vector<std::uint32_t>>();
    s.truth.topical_words = j.at("topical_words").get<std::vector<std::uint32_t>>();
    s.truth.topic_sizes = j.at("topic_sizes").get<std::vector<std::size_t>>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("truth sidecar: ") + e.what());
  }
  const GroundTruth& t = s.truth;
  if (t.word_marginal.size() != s.spec.vocabulary_size || t.word_topic.size() != s.spec.vocabulary_size ||
      t.topic_marginal.size() != s.spec.num_topics || t.doc_topic.size() != s.spec.num_documents ||
      t.topic_sizes.size() != s.spec.num_topics) {
    throw FormatError("truth sidecar arrays do not match the spec dimensions");
  }
  for (std::int32_t tw : t.word_topic) {
    if (tw != kNoTopic && (tw < 0 || static_cast<std::size_t>(tw) >= s.spec.num_topics)) {
      throw FormatError("truth sidecar maps a word to an unknown topic");
    }
  }
  for (std::uint32_t td : t.doc_topic) {
    if (td >= s.spec.num_topics) throw FormatError("truth sidecar assigns a document to an unknown topic");
  }
  return s;
}

void write_result_file(std::ostream& out, const TopicModelResult& r, const DocumentSet& shape) {
  if (r.topic_doc.rows() != shape.num_documents() || r.word_topic.cols() != shape.vocabulary_size() ||
      r.token_labels.size() != shape.num_tokens()) {
    throw InvalidArgument("result does not match the corpus shape");
  }
  auto single_line = [](const std::string& s) {
    if (s.find('\n') != std::string::npos) throw InvalidArgument("result metadata must not contain newlines");
    return s;
  };
  out << "topicbench-result " << kFormatVersion << '\n';
  out << "algorithm_tag " << single_line(r.algorithm_tag) << '\n';
  for (const auto& [key, value] : r.hyperparams) {
    if (key.empty() || key.find(' ') != std::string::npos) {
      throw InvalidArgument("hyperparameter keys must be nonempty and contain no spaces");
    }
    out << "hyperparam " << key << ' ' << single_line(value) << '\n';
  }
  out << "topics " << r.num_topics() << '\n';
  out << "documents " << shape.num_documents() << '\n';
  out << "vocabulary " << shape.vocabulary_size() << '\n';
  auto write_matrix = [&](const char* name, const Matrix& m) {
    out << name << '\n';
    std::string line;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      line.clear();
      const auto row = m.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j > 0) line.push_back(' ');
        line += format_real17(row[j]);
      }
      line.push_back('\n');
      out << line;
    }
  };
  write_matrix("topic_doc", r.topic_doc);
  write_matrix("word_topic", r.word_topic);
  out << "labels\n";
  for (std::size_t d = 0; d < shape.num_documents(); ++d) {
    write_ids(out, r.token_labels.labels().subspan(shape.offsets()[d], shape.doc_length(d)));
  }
  out << "end\n";
}

TopicModelResult read_result_file(std::istream& in, const DocumentSet* shape, double tolerance) {
  LineReader reader(in);
  parse_header(reader.expect("result header"), "topicbench-result", 1);

  TopicModelResult r;
  std::string line;
  auto keyword = [&](const char* expected) {
    line = reader.expect(expected);
    const auto sp = line.find(' ');
    const std::string_view key = std::string_view(line).substr(0, sp);
    if (key != expected) throw FormatError("expected '" + std::string(expected) + "'", reader.number());
    return sp == std::string::npos ? std::string() : line.substr(sp + 1);
  };

  r.algorithm_tag = keyword("algorithm_tag");
  line = reader.expect("topics");
  while (line.rfind("hyperparam ", 0) == 0) {
    const std::string rest = line.substr(11);
    const auto sp = rest.find(' ');
    if (sp == std::string::npos || sp == 0) throw FormatError("malformed hyperparam line", reader.number());
    r.hyperparams[rest.substr(0, sp)] = rest.substr(sp + 1);
    line = reader.expect("topics");
  }
  auto counted = [&](const std::string& text, const char* name) {
    const auto fields = split(text);
    if (fields.size() != 2 || fields[0] != name) {
      throw FormatError("expected '" + std::string(name) + " <count>'", reader.number());
    }
    return parse_number<std::size_t>(fields[1], reader.number(), name);
  };
  const std::size_t topics = counted(line, "topics");
  const std::size_t documents = counted(reader.expect("documents"), "documents");
  const std::size_t vocabulary = counted(reader.expect("vocabulary"), "vocabulary");
  if (topics == 0) throw FormatError("result declares zero topics", reader.number() - 2);
  if (shape && documents != shape->num_documents()) {
    throw FormatError("result has " + std::to_string(documents) + " documents but the corpus has " +
                          std::to_string(shape->num_documents()),
                      reader.number() - 1);
  }
  if (shape && vocabulary != shape->vocabulary_size()) {
    throw FormatError("result vocabulary " + std::to_string(vocabulary) + " differs from corpus vocabulary " +
                          std::to_string(shape->vocabulary_size()),
                      reader.number());
  }

  auto read_matrix = [&](const char* name, std::size_t rows, std::size_t cols) {
    keyword(name);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      line = reader.expect(name);
      const auto fields = split(line);
      if (fields.size() != cols) {
        throw FormatError(std::string(name) + " row " + std::to_string(i) + " has " + std::to_string(fields.size()) +
                              " entries, expected " + std::to_string(cols),
                          reader.number());
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        const double x = parse_real(fields[j], reader.number(), "probability");
        if (!(x >= 0.0) || !std::isfinite(x)) {
          throw FormatError(std::string(name) + " row " + std::to_string(i) + " has an invalid entry", reader.number());
        }
        m(i, j) = x;
        sum += x;
      }
      if (std::abs(sum - 1.0) > tolerance) {
        throw FormatError(std::string(name) + " row " + std::to_string(i) + " sums to " + format_real(sum) +
                              " (tolerance " + format_real(tolerance) + ")",
                          reader.number());
      }
    }
    return m;
  };
  r.topic_doc = read_matrix("topic_doc", documents, topics);
  r.word_topic = read_matrix("word_topic", topics, vocabulary);

  keyword("labels");
  std::vector<std::uint32_t> labels;
  for (std::size_t d = 0; d < documents; ++d) {
    line = reader.expect("label line");
    if (line == "end") throw FormatError("label block ends after " + std::to_string(d) + " documents", reader.number());
    const auto ids = parse_ids(line, reader.number(), topics, "label");
    if (shape && ids.size() != shape->doc_length(d)) {
      throw FormatError("document " + std::to_string(d) + " has " + std::to_string(shape->doc_length(d)) +
                            " tokens but " + std::to_string(ids.size()) + " labels",
                        reader.number());
    }
    labels.insert(labels.end(), ids.begin(), ids.end());
  }
  keyword("end");
  if (reader.next(line)) throw FormatError("trailing content after 'end'", reader.number());
  r.token_labels = TokenLabeling(std::move(labels), topics);
  return r;
}

CorpusPaths CorpusPaths::from_prefix(const std::filesystem::path& prefix) {
  const std::string p = prefix.string();
  return {p + ".corpus", p + ".labels", p + ".truth.json"};
}

CorpusPaths export_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& prefix, bool with_truth) {
  CorpusPaths paths = CorpusPaths::from_prefix(prefix);
  {
    auto out = open_for_write(paths.corpus);
    write_corpus_file(out, CorpusHeader::from_spec(corpus.spec), corpus.documents);
    finish_write(out, paths.corpus);
  }
  if (!with_truth) {
    paths.labels.clear();
    paths.truth.clear();
    return paths;
  }
  {
    auto out = open_for_write(paths.labels);
    write_label_file(out, corpus.planted_labels, corpus.documents);
    finish_write(out, paths.labels);
  }
  {
    auto out = open_for_write(paths.truth);
    write_truth_sidecar(out, corpus.spec, corpus.truth);
    finish_write(out, paths.truth);
  }
  return paths;
}

CorpusFile import_corpus_file(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return with_path(path, [&] { return read_corpus_file(in); });
}

TokenLabeling import_labels(const std::filesystem::path& path, const DocumentSet& shape) {
  auto in = open_for_read(path);
  return with_path(path, [&] { return read_label_file(in, shape); });
}

TruthSidecar import_truth(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return with_path(path, [&] { return read_truth_sidecar(in); });
}

SyntheticCorpus import_corpus(const std::filesystem::path& prefix) {
  const CorpusPaths paths = CorpusPaths::from_prefix(prefix);
  CorpusFile file = import_corpus_file(paths.corpus);
  TruthSidecar sidecar = import_truth(paths.truth);
  if (CorpusHeader::from_spec(sidecar.spec) != file.header) {
    throw FormatError(paths.truth.string() + ": spec does not match the corpus header");
  }
  SyntheticCorpus corpus;
  corpus.planted_labels = import_labels(paths.labels, file.documents);
  corpus.spec = std::move(sidecar.spec);
  corpus.truth = std::move(sidecar.truth);
  corpus.documents = std::move(file.documents);
  return corpus;
}

void export_result(const TopicModelResult& result, const DocumentSet& shape, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_result_file(out, result, shape);
  finish_write(out, path);
}

TopicModelResult import_result(const std::filesystem::path& path, const DocumentSet* shape, double tolerance) {
  auto in = open_for_read(path);
  return with_path(path, [&] { return read_result_file(in, shape, tolerance); });
}

bool ScoreRow::failed() const { return std::isnan(nmi); }

std::string_view score_csv_header() {
  return "experiment_id,algorithm_tag,K_a,c,P_s,m_d,seed,I_bits,H_bits,Hp_bits,nmi,voi_bits,K_inferred,doc_nmi,"
         "wall_ms";
}

namespace {

std::string csv_safe(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') c = '_';
  }
  return out;
}

}  // namespace

std::string to_csv_line(const ScoreRow& r) {
  std::ostringstream os;
  os << csv_safe(r.experiment_id) << ',' << csv_safe(r.algorithm_tag) << ',' << r.assumed_topics << ','
     << format_real(r.structure) << ',' << format_real(r.stopword_fraction) << ',' << r.doc_length << ',' << r.seed
     << ',' << format_real(r.mutual_information) << ',' << format_real(r.entropy_planted) << ','
     << format_real(r.entropy_inferred) << ',' << format_real(r.nmi) << ',' << format_real(r.voi) << ','
     << r.inferred_topics << ',' << format_real(r.doc_nmi) << ',' << format_real(r.wall_ms);
  return os.str();
}

ScoreRow parse_score_line(std::string_view line) {
  std::vector<std::string_view> f;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    f.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (f.size() != 15) throw FormatError("score row has " + std::to_string(f.size()) + " columns, expected 15");
  ScoreRow r;
  r.experiment_id = std::string(f[0]);
  r.algorithm_tag = std::string(f[1]);
  r.assumed_topics = parse_number<std::size_t>(f[2], 0, "K_a");
  r.structure = parse_real(f[3], 0, "c");
  r.stopword_fraction = parse_real(f[4], 0, "P_s");
  r.doc_length = parse_number<std::size_t>(f[5], 0, "m_d");
  r.seed = parse_number<std::uint64_t>(f[6], 0, "seed");
  r.mutual_information = parse_real(f[7], 0, "I_bits");
  r.entropy_planted = parse_real(f[8], 0, "H_bits");
  r.entropy_inferred = parse_real(f[9], 0, "Hp_bits");
  r.nmi = parse_real(f[10], 0, "nmi");
  r.voi = parse_real(f[11], 0, "voi_bits");
  r.inferred_topics = parse_number<std::size_t>(f[12], 0, "K_inferred");
  r.doc_nmi = parse_real(f[13], 0, "doc_nmi");
  r.wall_ms = parse_real(f[14], 0, "wall_ms");
  return r;
}

std::vector<ScoreRow> read_scores(const std::filesystem::path& path) {
  std::vector<ScoreRow> rows;
  std::ifstream in(path, std::ios::binary);
  if (!in) return rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    if (number == 1) {
      if (line != score_csv_header()) throw FormatError(path.string() + ": unexpected scores header", 1);
      continue;
    }
    try {
      rows.push_back(parse_score_line(line));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ": " + e.what(), number);
    }
  }
  return rows;
}

}  // namespace topicbench
