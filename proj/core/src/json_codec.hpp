#pragma once

// nlohmann/json bindings for the structured text files (truth sidecar,
// spec configs, experiment plans). Internal to the core library.

#include <json.hpp>

#include "topicbench/corpus.hpp"
#include "topicbench/error.hpp"

namespace topicbench {

using Json = nlohmann::json;

inline Json distribution_to_json(const Distribution& d) {
  if (d.shape == Distribution::Shape::uniform) return "uniform";
  return Json{{"power_law", d.exponent}};
}

inline Distribution distribution_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "uniform") return Distribution::uniform();
    throw InvalidArgument("unknown distribution '" + j.get<std::string>() + "'");
  }
  if (j.is_object() && j.contains("power_law")) return Distribution::power_law(j.at("power_law").get<double>());
  throw InvalidArgument("distribution must be \"uniform\" or {\"power_law\": exponent}");
}

inline Json spec_to_json(const CorpusSpec& s) {
  Json j;
  j["num_topics"] = s.num_topics;
  j["num_documents"] = s.num_documents;
  j["doc_length"] = s.doc_length;
  if (!s.doc_lengths.empty()) j["doc_lengths"] = s.doc_lengths;
  j["vocabulary_size"] = s.vocabulary_size;
  j["stopword_fraction"] = s.stopword_fraction;
  j["structure_word"] = s.structure_word;
  j["structure_doc"] = s.structure_doc;
  j["word_dist"] = distribution_to_json(s.word_dist);
  j["topic_size_dist"] = distribution_to_json(s.topic_size_dist);
  j["burstiness"] = s.burstiness ? Json(*s.burstiness) : Json("off");
  j["stopwords_by_rank"] = s.stopwords_by_rank;
  j["seed"] = s.seed;
  return j;
}

// Missing keys keep the values already in `s`. "structure" sets c_w and c_d.
inline void update_spec_from_json(const Json& j, CorpusSpec& s) {
  if (!j.is_object()) throw InvalidArgument("corpus spec must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "num_topics") s.num_topics = value.get<std::size_t>();
    else if (key == "num_documents") s.num_documents = value.get<std::size_t>();
    else if (key == "doc_length") s.doc_length = value.get<std::size_t>();
    else if (key == "doc_lengths") s.doc_lengths = value.get<std::vector<std::size_t>>();
    else if (key == "vocabulary_size") s.vocabulary_size = value.get<std::size_t>();
    else if (key == "stopword_fraction") s.stopword_fraction = value.get<double>();
    else if (key == "structure") s.set_structure(value.get<double>());
    else if (key == "structure_word") s.structure_word = value.get<double>();
    else if (key == "structure_doc") s.structure_doc = value.get<double>();
    else if (key == "word_dist") s.word_dist = distribution_from_json(value);
    else if (key == "topic_size_dist") s.topic_size_dist = distribution_from_json(value);
    else if (key == "burstiness") {
      if (value.is_string() && value.get<std::string>() == "off") s.burstiness.reset();
      else if (value.is_null()) s.burstiness.reset();
      else s.burstiness = value.get<double>();
    } else if (key == "stopwords_by_rank") s.stopwords_by_rank = value.get<bool>();
    else if (key == "seed") s.seed = value.get<std::uint64_t>();
    else throw InvalidArgument("unknown corpus spec key '" + key + "'");
  }
}

inline CorpusSpec spec_from_json(const Json& j) {
  CorpusSpec s;
  update_spec_from_json(j, s);
  return s;
}

}  // namespace topicbench
