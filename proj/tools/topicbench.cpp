// topicbench command line: generate, infer, score, sweep, repro, compare-dist.
//
// Every option can also come from a TOML/INI file given with --config; keys
// of a subcommand live in a section named after it, e.g.
//
//   [generate]
//   topics = 10
//   structure = 0.7

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "topicbench/error.hpp"
#include "topicbench/generator.hpp"
#include "topicbench/harness.hpp"
#include "topicbench/interchange.hpp"
#include "topicbench/lda_gibbs.hpp"
#include "topicbench/metrics.hpp"
#include "topicbench/rng.hpp"

namespace fs = std::filesystem;
using namespace topicbench;

namespace {

struct SpecOptions {
  CorpusSpec spec;
  std::optional<double> structure;
  double word_exponent = 0.0;
  double topic_size_exponent = 0.0;
  std::optional<double> burstiness;

  void add_to(CLI::App& app) {
    app.add_option("-K,--topics", spec.num_topics, "planted topics K")->capture_default_str();
    app.add_option("-D,--documents", spec.num_documents, "documents D")->capture_default_str();
    app.add_option("-m,--doc-length", spec.doc_length, "tokens per document m_d")->capture_default_str();
    app.add_option("-V,--vocabulary", spec.vocabulary_size, "vocabulary size V")->capture_default_str();
    app.add_option("--stopword-fraction", spec.stopword_fraction, "fraction of stopwords P_s")
        ->capture_default_str();
    app.add_option("-c,--structure", structure, "sets c_w and c_d together");
    app.add_option("--structure-word", spec.structure_word, "c_w")->capture_default_str();
    app.add_option("--structure-doc", spec.structure_doc, "c_d")->capture_default_str();
    app.add_option("--word-exponent", word_exponent, "Zipf exponent of P(w); 0 is uniform")
        ->capture_default_str();
    app.add_option("--topic-size-exponent", topic_size_exponent, "power-law exponent of topic sizes; 0 is uniform")
        ->capture_default_str();
    app.add_option("--burstiness", burstiness, "Dirichlet concentration a_c (off when absent)");
    app.add_flag("--stopwords-by-rank", spec.stopwords_by_rank, "use the most frequent words as stopwords");
    app.add_option("--seed", spec.seed, "corpus seed")->capture_default_str();
  }

  CorpusSpec build() const {
    CorpusSpec s = spec;
    if (structure) s.set_structure(*structure);
    if (word_exponent != 0.0) s.word_dist = Distribution::power_law(word_exponent);
    if (topic_size_exponent != 0.0) s.topic_size_dist = Distribution::power_law(topic_size_exponent);
    s.burstiness = burstiness;
    s.validate();
    return s;
  }
};

struct GibbsOptions {
  std::size_t assumed_topics = 10;
  std::string preset = "ldags_default";
  std::optional<double> alpha;
  std::optional<double> beta;
  std::size_t sweeps = 1000;

  void add_to(CLI::App& app) {
    app.add_option("--assumed-topics", assumed_topics, "K_a")->capture_default_str();
    app.add_option("--preset", preset, "ldags_default or ldavb_default")->capture_default_str();
    app.add_option("--alpha", alpha, "document-topic prior (overrides preset)");
    app.add_option("--beta", beta, "topic-word prior (overrides preset)");
    app.add_option("--sweeps", sweeps, "Gibbs sweeps")->capture_default_str();
  }

  AlgorithmSpec algorithm() const {
    AlgorithmSpec a;
    a.assumed_topics = assumed_topics;
    a.preset = preset;
    a.alpha = alpha;
    a.beta = beta;
    a.sweeps = sweeps;
    return a;
  }
};

// Accepts either a prefix or the .corpus file itself.
fs::path corpus_prefix(fs::path p) {
  if (p.extension() == ".corpus") p.replace_extension();
  return p;
}

void print_score(const ScoreRow& row, bool header) {
  if (header) std::cout << score_csv_header() << '\n';
  std::cout << to_csv_line(row) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic-corpus benchmark for topic models"};
  app.set_config("--config", "", "read options from a TOML/INI file");
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for generation and scoring")->capture_default_str();

  // generate
  auto* gen = app.add_subcommand("generate", "generate a corpus with planted topics");
  SpecOptions gen_spec;
  gen_spec.add_to(*gen);
  fs::path gen_out;
  bool blind = false;
  bool print_spec = false;
  gen->add_option("-o,--out", gen_out, "output prefix (<prefix>.corpus, .labels, .truth.json)")->required();
  gen->add_flag("--blind", blind, "write only the corpus file, no labels or truth");
  gen->add_flag("--print-summary", print_spec, "print token and vocabulary counts");

  // infer
  auto* inf = app.add_subcommand("infer", "run collapsed Gibbs LDA on a corpus file");
  GibbsOptions inf_gibbs;
  inf_gibbs.add_to(*inf);
  fs::path inf_corpus, inf_out;
  std::uint64_t inf_seed = 0;
  inf->add_option("--corpus", inf_corpus, "corpus file")->required()->check(CLI::ExistingFile);
  inf->add_option("-o,--out", inf_out, "result file")->required();
  inf->add_option("--seed", inf_seed, "inference seed")->capture_default_str();

  // score
  auto* sc = app.add_subcommand("score", "score a result against an exported corpus");
  fs::path sc_corpus, sc_result;
  std::string sc_id = "cli";
  bool sc_header = false;
  bool sc_exclude = false;
  std::optional<std::uint64_t> sc_seed;
  sc->add_option("--corpus", sc_corpus, "corpus prefix or .corpus file (labels and truth must sit next to it)")
      ->required();
  sc->add_option("--result", sc_result, "result file")->required()->check(CLI::ExistingFile);
  sc->add_option("--id", sc_id, "experiment id column")->capture_default_str();
  sc->add_flag("--header", sc_header, "print the CSV header first");
  sc->add_flag("--exclude-stopwords", sc_exclude, "drop stopword tokens before scoring");
  sc->add_option("--seed", sc_seed, "seed column (defaults to the corpus seed)");

  // sweep
  auto* sw = app.add_subcommand("sweep", "run an experiment plan and write scores CSV");
  fs::path sw_plan;
  std::string sw_recipe;
  bool sw_paper = false, sw_dump = false, sw_list = false, sw_quiet = false;
  std::optional<fs::path> sw_output, sw_work;
  std::optional<std::size_t> sw_workers, sw_realizations;
  std::optional<std::uint64_t> sw_seed;
  sw->add_option("--plan", sw_plan, "JSON plan file")->check(CLI::ExistingFile);
  sw->add_option("--recipe", sw_recipe, "built-in recipe name");
  sw->add_flag("--paper-scale", sw_paper, "full-size recipe (D=10000, 10 realizations)");
  sw->add_option("--output", sw_output, "scores CSV (overrides the plan)");
  sw->add_option("--work-dir", sw_work, "directory for external corpora and results");
  sw->add_option("--workers", sw_workers, "concurrent cells; 0 uses every core");
  sw->add_option("--realizations", sw_realizations, "realizations per point");
  sw->add_option("--seed", sw_seed, "base seed (overrides the plan)");
  sw->add_flag("--dump-plan", sw_dump, "print the resolved plan as JSON and exit");
  sw->add_flag("--list-recipes", sw_list, "list built-in recipes and exit");
  sw->add_flag("-q,--quiet", sw_quiet, "no progress output");

  // repro
  auto* rp = app.add_subcommand("repro", "run inference twice per corpus and compare the runs");
  SpecOptions rp_spec;
  rp_spec.add_to(*rp);
  GibbsOptions rp_gibbs;
  rp_gibbs.add_to(*rp);
  std::size_t rp_realizations = 5, rp_workers = 0;
  bool rp_same = false;
  fs::path rp_out;
  rp->add_option("-R,--realizations", rp_realizations, "corpora")->capture_default_str();
  rp->add_option("--workers", rp_workers, "concurrent realizations; 0 uses every core")->capture_default_str();
  rp->add_flag("--same-seed", rp_same, "give both runs the same inference seed");
  rp->add_option("-o,--out", rp_out, "CSV file (stdout when absent)");

  // compare-dist
  auto* cd = app.add_subcommand("compare-dist", "planted vs inferred distributions as CSV grids");
  fs::path cd_truth, cd_result, cd_labels, cd_out;
  cd->add_option("--truth", cd_truth, "truth sidecar (.truth.json)")->required()->check(CLI::ExistingFile);
  cd->add_option("--result", cd_result, "result file")->required()->check(CLI::ExistingFile);
  cd->add_option("--labels", cd_labels, "planted label file; enables token-count matching")
      ->check(CLI::ExistingFile);
  cd->add_option("-o,--out", cd_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const CorpusSpec spec = gen_spec.build();
      GenerateOptions opt;
      opt.threads = static_cast<std::size_t>(std::max(threads, 1));
      const auto corpus = generate_corpus(spec, opt);
      if (!gen_out.parent_path().empty()) fs::create_directories(gen_out.parent_path());
      const auto paths = export_corpus(corpus, gen_out, !blind);
      if (print_spec) {
        std::cout << "tokens " << corpus.documents.num_tokens() << "\nstopwords " << spec.num_stopwords()
                  << "\ntopical_words " << spec.num_topical_words() << '\n';
      }
      std::cerr << "wrote " << paths.corpus.string() << '\n';
    } else if (*inf) {
      const auto file = import_corpus_file(inf_corpus);
      const auto algo = inf_gibbs.algorithm();
      const auto cfg = algo.gibbs_config(algo.assumed_topics, algo.preset, inf_seed);
      const auto result = run_gibbs(file.documents, cfg);
      if (!inf_out.parent_path().empty()) fs::create_directories(inf_out.parent_path());
      export_result(result, file.documents, inf_out);
      std::cerr << "wrote " << inf_out.string() << '\n';
    } else if (*sc) {
      const auto corpus = import_corpus(corpus_prefix(sc_corpus));
      const auto result = import_result(sc_result, &corpus.documents);
      ScoreOptions opt;
      opt.exclude_stopword_tokens = sc_exclude;
      opt.threads = static_cast<std::size_t>(std::max(threads, 1));
      ScoreRow row = evaluate(corpus, result, opt);
      row.experiment_id = sc_id;
      if (auto it = result.hyperparams.find("K_a"); it != result.hyperparams.end()) {
        row.assumed_topics = std::stoul(it->second);
      } else {
        row.assumed_topics = result.num_topics();
      }
      if (sc_seed) row.seed = *sc_seed;
      print_score(row, sc_header);
    } else if (*sw) {
      if (sw_list) {
        for (auto r : builtin_recipes()) std::cout << r << '\n';
        return 0;
      }
      if (sw_plan.empty() == sw_recipe.empty()) throw InvalidArgument("give exactly one of --plan and --recipe");
      ExperimentPlan plan = sw_plan.empty() ? builtin_plan(sw_recipe, sw_paper) : load_plan(sw_plan);
      if (sw_output) plan.output = *sw_output;
      if (sw_work) plan.work_dir = *sw_work;
      if (sw_workers) plan.workers = *sw_workers;
      if (sw_realizations) plan.realizations = *sw_realizations;
      if (sw_seed) plan.base.seed = *sw_seed;
      plan.validate();
      if (sw_dump) {
        std::cout << plan_to_json_text(plan) << '\n';
        return 0;
      }
      ProgressFn progress;
      if (!sw_quiet) {
        progress = [](std::size_t done, std::size_t total) {
          std::cerr << "\r[sweep] " << done << "/" << total << std::flush;
          if (done == total) std::cerr << '\n';
        };
      }
      const auto report = run_sweep(plan, progress);
      std::cerr << "[sweep] executed " << report.runs_executed << ", skipped " << report.runs_skipped
                << "; scores in " << plan.output.string() << ", summary in " << report.summary_path.string()
                << '\n';
    } else if (*rp) {
      const CorpusSpec spec = rp_spec.build();
      const auto report = run_reproducibility(spec, rp_gibbs.algorithm(), rp_realizations, rp_same, rp_workers);
      if (rp_out.empty()) {
        write_reproducibility_csv(report, std::cout);
      } else {
        if (!rp_out.parent_path().empty()) fs::create_directories(rp_out.parent_path());
        std::ofstream out(rp_out);
        if (!out) throw IoError("cannot write " + rp_out.string());
        write_reproducibility_csv(report, out);
      }
      std::cerr << "nmi mean " << report.nmi.mean << " sd " << report.nmi.sd << '\n';
    } else if (*cd) {
      const auto truth = import_truth(cd_truth);
      const auto result = import_result(cd_result);
      std::optional<TokenLabeling> planted;
      if (!cd_labels.empty()) {
        const auto corpus = import_corpus_file(fs::path(cd_labels).replace_extension(".corpus"));
        planted = import_labels(cd_labels, corpus.documents);
      }
      const auto cmp = compare_distributions(truth, result, planted ? &*planted : nullptr);
      write_comparison(cmp, cd_out);
      std::cout << "mean_word_topic_tv " << format_real(cmp.mean_word_topic_tv) << "\nmean_topic_doc_tv "
                << format_real(cmp.mean_topic_doc_tv) << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
