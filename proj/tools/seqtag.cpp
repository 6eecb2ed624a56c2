// seqtag: train, apply and compare dictionary-constrained taggers.
//
// Exit status: 0 on success, 1 on usage errors, 2 on data or model errors.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seqtag/seqtag.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct RunConfig {
  std::string in;
  std::string out;
  std::string model;
  std::string method = "svm";
  int window = 3;
  bool no_pos = false;
  bool no_pos_order = false;
  bool no_word = false;
  double c = 1.0;
  int degree = 2;
  double kkt_tol = 1e-3;
  std::size_t max_passes = 1000;
  std::size_t gis_iters = 500;
  double gis_tol = 1e-3;
  std::size_t min_count = 1;
  std::uint64_t seed = 42;

  // Subcommand-specific.
  std::string test;
  std::string records;
  std::string lexicon;
  std::string format = "tab-words";
  bool timing = false;
  bool ablation = false;
  std::size_t sentences = 0;
  double ambiguity = 0.0;
  double signal = 0.0;
  std::size_t ambiguous_words = 0;
  std::size_t cue_words = 0;
  double test_fraction = 0.0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StringDeleter {
  void operator()(char* p) const { seqtag_string_free(p); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct BundleDeleter {
  void operator()(seqtag_bundle* b) const { seqtag_bundle_free(b); }
};
using OwnedBundle = std::unique_ptr<seqtag_bundle, BundleDeleter>;

void check(seqtag_status status) {
  if (status == SEQTAG_OK) return;
  std::string message = std::string(seqtag_status_name(status)) + ": " + seqtag_last_error();
  if (status == SEQTAG_ERR_INVALID_ARGUMENT || status == SEQTAG_ERR_UNKNOWN_METHOD ||
      status == SEQTAG_ERR_INVALID_SPEC)
    throw UsageError(message);
  throw DataError(message);
}

void add_shared(CLI::App* app, RunConfig& cfg) {
  app->add_option("--in", cfg.in, "Input corpus");
  app->add_option("--out", cfg.out, "Output path");
  app->add_option("--model", cfg.model, "Model bundle path");
  app->add_option("--method", cfg.method, "baseline | dlist | maxent | svm");
  app->add_option("--window", cfg.window, "Context words on each side")
      ->check(CLI::Range(0, 3));
  app->add_flag("--no-pos", cfg.no_pos, "Drop candidate-tag features");
  app->add_flag("--no-pos-order", cfg.no_pos_order, "Drop (tag, rank) features");
  app->add_flag("--no-word", cfg.no_word, "Drop word identity features");
  app->add_option("--C", cfg.c, "SVM soft-margin constant")
      ->check(CLI::PositiveNumber);
  app->add_option("--degree", cfg.degree, "Polynomial kernel degree")
      ->check(CLI::Range(1, 16));
  app->add_option("--kkt-tol", cfg.kkt_tol, "SMO stopping tolerance")
      ->check(CLI::PositiveNumber);
  app->add_option("--max-passes", cfg.max_passes, "SMO iteration cap, in multiples of the problem size")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  app->add_option("--gis-iters", cfg.gis_iters, "GIS iteration cap");
  app->add_option("--gis-tol", cfg.gis_tol, "GIS constraint tolerance")
      ->check(CLI::PositiveNumber);
  app->add_option("--min-count", cfg.min_count, "Decision-list feature count threshold")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  app->add_option("--seed", cfg.seed, "Synthetic corpus seed");
}

void require_flag(const std::string& value, const char* flag, const char* command) {
  if (value.empty())
    throw UsageError(std::string(command) + ": " + flag + " is required");
}

unsigned threads_from_env() {
  const char* text = std::getenv("SEQTAG_THREADS");
  if (text == nullptr || *text == '\0') return 0;
  char* end = nullptr;
  unsigned long n = std::strtoul(text, &end, 10);
  if (*end != '\0' || n == 0 || n > 4096)
    throw UsageError("SEQTAG_THREADS must be a positive integer, got '" + std::string(text) + "'");
  return static_cast<unsigned>(n);
}

seqtag_options learner_options(const RunConfig& cfg) {
  seqtag_options o;
  seqtag_options_init(&o);
  int method = 0;
  if (seqtag_method_parse(cfg.method.c_str(), &method) != SEQTAG_OK)
    throw UsageError("--method: unknown method '" + cfg.method +
                     "' (expected baseline, dlist, maxent or svm)");
  o.method = method;
  o.window = cfg.window;
  o.use_pos = !cfg.no_pos;
  o.use_pos_order = !cfg.no_pos_order;
  o.use_word = !cfg.no_word;
  if (!o.use_pos && !o.use_pos_order && !o.use_word)
    throw UsageError("--no-pos, --no-pos-order and --no-word together leave no features");
  o.svm_c = cfg.c;
  o.svm_degree = cfg.degree;
  o.svm_kkt_tolerance = cfg.kkt_tol;
  o.svm_max_passes = cfg.max_passes;
  o.gis_max_iterations = cfg.gis_iters;
  o.gis_tolerance = cfg.gis_tol;
  o.dlist_min_count = cfg.min_count;
  o.threads = threads_from_env();
  check(seqtag_options_validate(&o));
  return o;
}

// Shortest text that reads back as the same double.
std::string exact(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void print_config(const std::string& command, const RunConfig& cfg, const seqtag_options& o) {
  std::ostringstream s;
  s << "# seqtag " << seqtag_version() << ' ' << command << " method=" << cfg.method
    << " window=" << o.window << " pos=" << o.use_pos << " pos_order=" << o.use_pos_order
    << " word=" << o.use_word << " C=" << exact(o.svm_c) << " degree=" << o.svm_degree
    << " kkt_tol=" << exact(o.svm_kkt_tolerance) << " max_passes=" << o.svm_max_passes
    << " gis_iters=" << o.gis_max_iterations << " gis_tol=" << exact(o.gis_tolerance)
    << " min_count=" << o.dlist_min_count << " seed=" << cfg.seed
    << " threads=" << o.threads;
  if (!cfg.in.empty()) s << " in=" << cfg.in;
  if (!cfg.test.empty()) s << " test=" << cfg.test;
  if (!cfg.out.empty()) s << " out=" << cfg.out;
  if (!cfg.model.empty()) s << " model=" << cfg.model;
  if (!cfg.lexicon.empty()) s << " lexicon=" << cfg.lexicon;
  std::cerr << s.str() << '\n';
}

void print_synth(const seqtag_synth_options& s) {
  std::ostringstream o;
  o << "# synthetic seed=" << s.seed << " sentences=" << s.sentences
    << " ambiguity=" << exact(s.ambiguity_rate) << " signal=" << exact(s.signal_strength)
    << " ambiguous_words=" << s.ambiguous_words << " candidates=" << s.min_candidates
    << ".." << s.max_candidates << " cue_words=" << s.cue_words
    << " test_fraction=" << exact(s.test_fraction);
  std::cerr << o.str() << '\n';
}

void write_output(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw DataError("Io: cannot write '" + path + "'");
}

seqtag_synth_options synth_options(const RunConfig& cfg, const CLI::App* app) {
  seqtag_synth_options s;
  seqtag_synth_options_init(&s);
  s.seed = cfg.seed;
  if (app->count("--sentences")) s.sentences = cfg.sentences;
  if (app->count("--ambiguity")) s.ambiguity_rate = cfg.ambiguity;
  if (app->count("--signal")) s.signal_strength = cfg.signal;
  if (app->count("--ambiguous-words")) s.ambiguous_words = cfg.ambiguous_words;
  if (app->count("--cue-words")) s.cue_words = cfg.cue_words;
  if (app->count("--test-fraction")) s.test_fraction = cfg.test_fraction;
  return s;
}

void add_synth(CLI::App* app, RunConfig& cfg) {
  app->add_option("--sentences", cfg.sentences, "Random sentences to generate")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  app->add_option("--ambiguity", cfg.ambiguity, "Chance a slot holds an ambiguous word")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--signal", cfg.signal, "Chance the cue matches the true tag")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--ambiguous-words", cfg.ambiguous_words, "Distinct ambiguous words");
  app->add_option("--cue-words", cfg.cue_words, "Distinct cue words");
  app->add_option("--test-fraction", cfg.test_fraction, "Share of sentences held out")
      ->check(CLI::Range(0.0, 0.999999));
}

int run_train(const RunConfig& cfg) {
  require_flag(cfg.in, "--in", "train");
  require_flag(cfg.model, "--model", "train");
  auto o = learner_options(cfg);
  print_config("train", cfg, o);
  seqtag_bundle* raw = nullptr;
  char* report = nullptr;
  check(seqtag_train_file(cfg.in.c_str(), cfg.lexicon.empty() ? nullptr : cfg.lexicon.c_str(),
                          &o, &raw, &report));
  OwnedBundle bundle(raw);
  OwnedString summary(report);
  std::cerr << summary.get();
  check(seqtag_bundle_save(bundle.get(), cfg.model.c_str()));
  return 0;
}

OwnedBundle load_model(const RunConfig& cfg, const char* command) {
  require_flag(cfg.model, "--model", command);
  seqtag_bundle* raw = nullptr;
  check(seqtag_bundle_load(cfg.model.c_str(), &raw));
  OwnedBundle bundle(raw);
  char* text = nullptr;
  check(seqtag_bundle_describe(bundle.get(), &text));
  OwnedString description(text);
  std::string line = description.get();
  for (auto& ch : line)
    if (ch == '\n') ch = ' ';
  std::cerr << "# model " << line << '\n';
  return bundle;
}

int run_tag(const RunConfig& cfg) {
  require_flag(cfg.in, "--in", "tag");
  auto o = learner_options(cfg);
  print_config("tag", cfg, o);
  auto bundle = load_model(cfg, "tag");
  char* text = nullptr;
  check(seqtag_tag_file(bundle.get(), cfg.in.c_str(), cfg.format.c_str(), &text));
  OwnedString output(text);
  write_output(cfg.out, output.get());
  return 0;
}

std::string percent(int has, double value) {
  if (!has) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * value);
  return buf;
}

int run_eval(const RunConfig& cfg) {
  require_flag(cfg.in, "--in", "eval");
  auto o = learner_options(cfg);
  print_config("eval", cfg, o);
  auto bundle = load_model(cfg, "eval");
  seqtag_metrics m;
  check(seqtag_evaluate_file(bundle.get(), cfg.in.c_str(), &m));
  std::ostringstream s;
  s << "ambiguous_precision\t" << percent(m.has_ambiguous_precision, m.ambiguous_precision)
    << '\t' << m.ambiguous_correct << '/' << m.ambiguous_total << '\n'
    << "all_words_precision\t" << percent(m.has_all_words_precision, m.all_words_precision)
    << '\t' << m.all_correct << '/' << m.all_total << '\n'
    << "unambiguous\t" << m.unambiguous_correct << '/' << m.unambiguous_total << '\n'
    << "unknown\t" << m.unknown_correct << '/' << m.unknown_total << '\n';
  write_output(cfg.out, s.str().c_str());
  return 0;
}

std::vector<int> compare_methods(const CLI::App* app, const std::string& spec) {
  std::vector<int> methods;
  if (!app->count("--method")) {
    for (int m : {SEQTAG_METHOD_BASELINE, SEQTAG_METHOD_DLIST, SEQTAG_METHOD_MAXENT,
                  SEQTAG_METHOD_SVM})
      methods.push_back(m);
    return methods;
  }
  std::stringstream list(spec);
  std::string name;
  while (std::getline(list, name, ',')) {
    int m = 0;
    if (seqtag_method_parse(name.c_str(), &m) != SEQTAG_OK)
      throw UsageError("--method: unknown method '" + name + "'");
    methods.push_back(m);
  }
  if (methods.empty()) throw UsageError("--method: empty method list");
  return methods;
}

int run_compare(const RunConfig& cfg, const CLI::App* app) {
  auto methods = compare_methods(app, cfg.method);
  RunConfig resolved = cfg;
  if (!app->count("--method")) resolved.method = "baseline,dlist,maxent,svm";
  RunConfig learner = cfg;
  learner.method = "svm";  // the method list is passed separately
  seqtag_options o = learner_options(learner);
  print_config("compare", resolved, o);
  char* table = nullptr;
  char* records = nullptr;
  const bool want_records = !cfg.records.empty();
  if (cfg.in.empty()) {
    if (!cfg.test.empty()) throw UsageError("compare: --test needs --in");
    auto synth = synth_options(cfg, app);
    print_synth(synth);
    check(seqtag_compare_synthetic(&synth, methods.data(), methods.size(), &o,
                                   cfg.ablation, cfg.timing, &table,
                                   want_records ? &records : nullptr));
  } else {
    check(seqtag_compare_files(cfg.in.c_str(), cfg.test.empty() ? nullptr : cfg.test.c_str(),
                               methods.data(), methods.size(), &o, cfg.ablation, cfg.timing,
                               &table, want_records ? &records : nullptr));
  }
  OwnedString owned_table(table);
  OwnedString owned_records(records);
  write_output(cfg.out, owned_table.get());
  if (want_records) write_output(cfg.records, owned_records.get());
  return 0;
}

int run_generate(const RunConfig& cfg, const CLI::App* app) {
  require_flag(cfg.out, "--out", "generate");
  auto synth = synth_options(cfg, app);
  print_synth(synth);
  const std::string train = cfg.out + ".train.tt";
  const std::string test = cfg.out + ".test.tt";
  check(seqtag_generate_files(&synth, train.c_str(), test.c_str()));
  std::cerr << "wrote " << train << " and " << test << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dictionary-constrained part-of-speech tagging with decision lists, "
               "maximum entropy and pairwise SVMs"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* train = app.add_subcommand("train", "Train a tagger bundle from a tab-tagged corpus");
  add_shared(train, cfg);
  train->add_option("--lexicon", cfg.lexicon, "Override file: word<TAB>tag1,tag2,...");

  auto* tag = app.add_subcommand("tag", "Tag a corpus with a trained bundle");
  add_shared(tag, cfg);
  tag->add_option("--format", cfg.format, "Input format")
      ->check(CLI::IsMember({"tab-words", "tab-tagged"}));

  auto* eval = app.add_subcommand("eval", "Score a bundle on a tab-tagged test corpus");
  add_shared(eval, cfg);

  auto* compare = app.add_subcommand(
      "compare", "Train and score several methods; without --in uses a generated corpus");
  add_shared(compare, cfg);
  add_synth(compare, cfg);
  compare->add_option("--test", cfg.test, "Test corpus (default: split --in)");
  compare->add_option("--records", cfg.records, "Write JSON-lines records here");
  compare->add_flag("--timing", cfg.timing, "Include wall-clock seconds in the report");
  compare->add_flag("--ablation", cfg.ablation, "Also run every method without word features");

  auto* generate = app.add_subcommand("generate", "Write a synthetic corpus to PREFIX.{train,test}.tt");
  add_shared(generate, cfg);
  add_synth(generate, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*train) return run_train(cfg);
    if (*tag) return run_tag(cfg);
    if (*eval) return run_eval(cfg);
    if (*compare) return run_compare(cfg, compare);
    if (*generate) return run_generate(cfg, generate);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
