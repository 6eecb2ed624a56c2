#include "seqtag/seqtag.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "seqtag/bundle.hpp"
#include "seqtag/error.hpp"
#include "seqtag/eval.hpp"
#include "seqtag/tagger.hpp"

struct seqtag_bundle {
  seqtag::TaggerBundle bundle;
};

namespace {

using seqtag::ErrorCode;

thread_local std::string last_error;

seqtag_status to_status(ErrorCode code) {
  return static_cast<seqtag_status>(static_cast<int>(code));
}

seqtag_status fail(seqtag_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
seqtag_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return SEQTAG_OK;
  } catch (const seqtag::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SEQTAG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SEQTAG_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw seqtag::Error(ErrorCode::kInvalidArgument, message);
}

char* duplicate(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.data(), text.size() + 1);
  return out;
}

seqtag::Method to_method(int method) {
  switch (method) {
    case SEQTAG_METHOD_BASELINE: return seqtag::Method::kBaseline;
    case SEQTAG_METHOD_DLIST: return seqtag::Method::kDecisionList;
    case SEQTAG_METHOD_MAXENT: return seqtag::Method::kMaxEnt;
    case SEQTAG_METHOD_SVM: return seqtag::Method::kSvm;
  }
  throw seqtag::Error(ErrorCode::kUnknownMethod,
                      "unknown method id " + std::to_string(method));
}

seqtag::FeatureConfig feature_config(const seqtag_options& o) {
  seqtag::FeatureConfig f;
  f.window = o.window;
  f.use_pos = o.use_pos != 0;
  f.use_pos_order = o.use_pos_order != 0;
  f.use_word = o.use_word != 0;
  f.validate();
  return f;
}

seqtag::LearnerConfig learner_config(const seqtag_options& o) {
  seqtag::LearnerConfig l;
  l.dlist.min_count = o.dlist_min_count;
  l.gis.max_iterations = o.gis_max_iterations;
  l.gis.constraint_tolerance = o.gis_tolerance;
  l.svm.C = o.svm_c;
  l.svm.degree = o.svm_degree;
  l.svm.kkt_tolerance = o.svm_kkt_tolerance;
  l.svm.max_passes = o.svm_max_passes;
  l.threads = o.threads;
  require(o.dlist_min_count >= 1, "min_count must be at least 1");
  l.gis.validate();
  l.svm.validate();
  return l;
}

seqtag::SyntheticCorpusSpec synth_spec(const seqtag_synth_options& o) {
  seqtag::SyntheticCorpusSpec s;
  s.seed = o.seed;
  s.sentences = o.sentences;
  s.ambiguity_rate = o.ambiguity_rate;
  s.signal_strength = o.signal_strength;
  s.ambiguous_words = o.ambiguous_words;
  s.min_candidates = o.min_candidates;
  s.max_candidates = o.max_candidates;
  s.cue_words = o.cue_words;
  s.test_fraction = o.test_fraction;
  s.validate();
  return s;
}

std::string training_summary(const seqtag::TrainingReport& r) {
  std::ostringstream s;
  s << "sentences=" << r.sentences << '\n'
    << "tokens=" << r.tokens << '\n'
    << "examples=" << r.examples << '\n'
    << "features=" << r.features << '\n';
  if (r.gis) {
    s << "gis_iterations=" << r.gis->iterations << '\n'
      << "gis_residual=" << r.gis->residual << '\n'
      << "gis_converged=" << (r.gis->converged ? 1 : 0) << '\n';
  }
  if (r.svm_pairs + r.svm_omitted_pairs > 0) {
    s << "svm_pairs=" << r.svm_pairs << '\n'
      << "svm_omitted_pairs=" << r.svm_omitted_pairs << '\n'
      << "svm_unconverged_pairs=" << r.svm_unconverged_pairs << '\n'
      << "support_vectors=" << r.support_vectors << '\n';
  }
  return s.str();
}

void fill_metrics(const seqtag::Metrics& m, seqtag_metrics& out) {
  out = seqtag_metrics{};
  out.ambiguous_total = m.ambiguous.total;
  out.ambiguous_correct = m.ambiguous.correct;
  out.unambiguous_total = m.unambiguous.total;
  out.unambiguous_correct = m.unambiguous.correct;
  out.unknown_total = m.unknown.total;
  out.unknown_correct = m.unknown.correct;
  out.all_total = m.all.total;
  out.all_correct = m.all.correct;
  if (auto p = m.ambiguous_precision()) {
    out.has_ambiguous_precision = 1;
    out.ambiguous_precision = *p;
  }
  if (auto p = m.all_words_precision()) {
    out.has_all_words_precision = 1;
    out.all_words_precision = *p;
  }
}

void compare(const seqtag::Corpus& training, const seqtag::Corpus& test,
             const int* methods, size_t method_count, const seqtag_options& options,
             int ablation, int with_timing, char** table, char** records) {
  require(methods != nullptr && method_count > 0, "no methods given");
  std::vector<seqtag::Method> list;
  for (size_t k = 0; k < method_count; ++k) list.push_back(to_method(methods[k]));
  std::vector<seqtag::FeatureConfig> configs{feature_config(options)};
  if (ablation != 0 && configs.front().use_word) {
    auto no_word = configs.front();
    no_word.use_word = false;
    no_word.validate();
    configs.push_back(no_word);
  }
  auto report = seqtag::run_comparison(training, test, list, configs,
                                       learner_config(options));
  std::unique_ptr<char, decltype(&std::free)> t(nullptr, &std::free);
  if (table != nullptr) t.reset(duplicate(seqtag::render_table(report, with_timing != 0)));
  if (records != nullptr) *records = duplicate(seqtag::render_records(report, with_timing != 0));
  if (table != nullptr) *table = t.release();
}

}  // namespace

extern "C" {

const char* seqtag_version(void) { return "1.0.0"; }

const char* seqtag_status_name(seqtag_status status) {
  if (status == SEQTAG_OK) return "Ok";
  if (status == SEQTAG_ERR_INTERNAL) return "Internal";
  if (status >= SEQTAG_ERR_INVALID_ARGUMENT && status <= SEQTAG_ERR_CORRUPT_MODEL)
    return seqtag::error_code_name(static_cast<ErrorCode>(status));
  return "Unknown";
}

const char* seqtag_last_error(void) { return last_error.c_str(); }

void seqtag_string_free(char* text) { std::free(text); }

void seqtag_options_init(seqtag_options* options) {
  if (options == nullptr) return;
  const seqtag::FeatureConfig f;
  const seqtag::LearnerConfig l;
  *options = seqtag_options{};
  options->method = SEQTAG_METHOD_SVM;
  options->window = f.window;
  options->use_pos = f.use_pos;
  options->use_pos_order = f.use_pos_order;
  options->use_word = f.use_word;
  options->svm_c = l.svm.C;
  options->svm_degree = l.svm.degree;
  options->svm_kkt_tolerance = l.svm.kkt_tolerance;
  options->svm_max_passes = l.svm.max_passes;
  options->gis_max_iterations = l.gis.max_iterations;
  options->gis_tolerance = l.gis.constraint_tolerance;
  options->dlist_min_count = l.dlist.min_count;
  options->threads = l.threads;
}

seqtag_status seqtag_options_validate(const seqtag_options* options) {
  return guarded([&] {
    require(options != nullptr, "options is NULL");
    to_method(options->method);
    feature_config(*options);
    learner_config(*options);
  });
}

seqtag_status seqtag_method_parse(const char* name, int* method) {
  return guarded([&] {
    require(name != nullptr && method != nullptr, "NULL argument");
    *method = static_cast<int>(seqtag::parse_method(name));
  });
}

const char* seqtag_method_name(int method) {
  try {
    return seqtag::method_name(to_method(method));
  } catch (const seqtag::Error&) {
    return nullptr;
  }
}

void seqtag_synth_options_init(seqtag_synth_options* options) {
  if (options == nullptr) return;
  const seqtag::SyntheticCorpusSpec s;
  options->seed = s.seed;
  options->sentences = s.sentences;
  options->ambiguity_rate = s.ambiguity_rate;
  options->signal_strength = s.signal_strength;
  options->ambiguous_words = s.ambiguous_words;
  options->min_candidates = s.min_candidates;
  options->max_candidates = s.max_candidates;
  options->cue_words = s.cue_words;
  options->test_fraction = s.test_fraction;
}

seqtag_status seqtag_train_file(const char* corpus_path, const char* lexicon_path,
                                const seqtag_options* options, seqtag_bundle** bundle,
                                char** report) {
  return guarded([&] {
    require(corpus_path != nullptr && options != nullptr && bundle != nullptr,
            "NULL argument");
    *bundle = nullptr;
    const auto method = to_method(options->method);
    const auto features = feature_config(*options);
    const auto learner = learner_config(*options);
    auto corpus = seqtag::load_corpus_file(corpus_path, seqtag::CorpusFormat::kTabTagged);
    std::ifstream override_in;
    if (lexicon_path != nullptr) {
      override_in.open(lexicon_path, std::ios::binary);
      if (!override_in)
        throw seqtag::Error(ErrorCode::kIo,
                            "cannot open '" + std::string(lexicon_path) + "'");
    }
    auto trained = seqtag::train_tagger(corpus, method, features, learner,
                                        lexicon_path != nullptr ? &override_in : nullptr);
    auto handle = std::make_unique<seqtag_bundle>(seqtag_bundle{std::move(trained.bundle)});
    if (report != nullptr) *report = duplicate(training_summary(trained.report));
    *bundle = handle.release();
  });
}

void seqtag_bundle_free(seqtag_bundle* bundle) { delete bundle; }

seqtag_status seqtag_bundle_save(const seqtag_bundle* bundle, const char* path) {
  return guarded([&] {
    require(bundle != nullptr && path != nullptr, "NULL argument");
    seqtag::save_bundle_file(path, bundle->bundle);
  });
}

seqtag_status seqtag_bundle_load(const char* path, seqtag_bundle** bundle) {
  return guarded([&] {
    require(path != nullptr && bundle != nullptr, "NULL argument");
    *bundle = nullptr;
    auto handle = std::make_unique<seqtag_bundle>(
        seqtag_bundle{seqtag::load_bundle_file(path)});
    *bundle = handle.release();
  });
}

seqtag_status seqtag_bundle_describe(const seqtag_bundle* bundle, char** text) {
  return guarded([&] {
    require(bundle != nullptr && text != nullptr, "NULL argument");
    const auto& b = bundle->bundle;
    std::ostringstream s;
    s << "method=" << seqtag::method_name(b.method()) << '\n'
      << "tags=" << b.tags.size() << '\n'
      << "words=" << b.lexicon.size() << '\n'
      << "features=" << b.vocabulary.size() << '\n'
      << "feature_groups=" << seqtag::feature_config_label(b.features) << '\n';
    *text = duplicate(s.str());
  });
}

seqtag_status seqtag_tag_text(const seqtag_bundle* bundle, const char* input,
                              const char* format, char** output) {
  return guarded([&] {
    require(bundle != nullptr && input != nullptr && output != nullptr, "NULL argument");
    const auto fmt = seqtag::parse_corpus_format(format != nullptr ? format : "tab-words");
    std::istringstream in(input);
    auto corpus = seqtag::load_corpus(in, fmt);
    std::ostringstream out;
    for (const auto& sentence : corpus)
      seqtag::write_tagged(out, sentence, seqtag::tag_sentence(bundle->bundle, sentence),
                           bundle->bundle.tags);
    *output = duplicate(out.str());
  });
}

seqtag_status seqtag_tag_file(const seqtag_bundle* bundle, const char* path,
                              const char* format, char** output) {
  return guarded([&] {
    require(bundle != nullptr && path != nullptr && output != nullptr, "NULL argument");
    const auto fmt = seqtag::parse_corpus_format(format != nullptr ? format : "tab-words");
    auto corpus = seqtag::load_corpus_file(path, fmt);
    std::ostringstream out;
    for (const auto& sentence : corpus)
      seqtag::write_tagged(out, sentence, seqtag::tag_sentence(bundle->bundle, sentence),
                           bundle->bundle.tags);
    *output = duplicate(out.str());
  });
}

seqtag_status seqtag_evaluate_file(const seqtag_bundle* bundle, const char* test_path,
                                   seqtag_metrics* metrics) {
  return guarded([&] {
    require(bundle != nullptr && test_path != nullptr && metrics != nullptr,
            "NULL argument");
    auto test = seqtag::load_corpus_file(test_path, seqtag::CorpusFormat::kTabTagged);
    fill_metrics(seqtag::evaluate(bundle->bundle, test), *metrics);
  });
}

seqtag_status seqtag_compare_files(const char* train_path, const char* test_path,
                                   const int* methods, size_t method_count,
                                   const seqtag_options* options, int ablation,
                                   int with_timing, char** table, char** records) {
  return guarded([&] {
    require(train_path != nullptr && options != nullptr, "NULL argument");
    auto training = seqtag::load_corpus_file(train_path, seqtag::CorpusFormat::kTabTagged);
    seqtag::Corpus test;
    if (test_path != nullptr) {
      test = seqtag::load_corpus_file(test_path, seqtag::CorpusFormat::kTabTagged);
    } else {
      auto parts = seqtag::split_corpus(training, seqtag::SyntheticCorpusSpec{}.test_fraction);
      training = std::move(parts.first);
      test = std::move(parts.second);
    }
    compare(training, test, methods, method_count, *options, ablation, with_timing, table,
            records);
  });
}

seqtag_status seqtag_compare_synthetic(const seqtag_synth_options* synth, const int* methods,
                                       size_t method_count, const seqtag_options* options,
                                       int ablation, int with_timing, char** table,
                                       char** records) {
  return guarded([&] {
    require(synth != nullptr && options != nullptr, "NULL argument");
    const auto spec = synth_spec(*synth);
    auto [training, test] =
        seqtag::split_corpus(seqtag::generate_synthetic_corpus(spec), spec.test_fraction);
    compare(training, test, methods, method_count, *options, ablation, with_timing, table,
            records);
  });
}

seqtag_status seqtag_generate_files(const seqtag_synth_options* synth,
                                    const char* train_path, const char* test_path) {
  return guarded([&] {
    require(synth != nullptr && train_path != nullptr && test_path != nullptr,
            "NULL argument");
    const auto spec = synth_spec(*synth);
    auto [training, test] =
        seqtag::split_corpus(seqtag::generate_synthetic_corpus(spec), spec.test_fraction);
    auto write = [](const char* path, const seqtag::Corpus& corpus) {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw seqtag::Error(ErrorCode::kIo, "cannot write '" + std::string(path) + "'");
      seqtag::write_corpus(out, corpus);
      out.flush();
      if (!out) throw seqtag::Error(ErrorCode::kIo, "write failed for '" + std::string(path) + "'");
    };
    write(train_path, training);
    write(test_path, test);
  });
}

}  // extern "C"
