#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqtag/corpus.hpp"
#include "seqtag/tagger.hpp"

namespace seqtag {

struct Counts {
  std::size_t total = 0;
  std::size_t correct = 0;

  // Absent when there is nothing to count.
  std::optional<double> precision() const;
  bool operator==(const Counts&) const = default;
};

struct Metrics {
  Counts ambiguous;    // ambiguous per the training lexicon
  Counts unambiguous;
  Counts unknown;      // absent from the training lexicon
  Counts all;
  // (gold tag, predicted tag) -> count
  std::map<std::pair<std::string, std::string>, std::size_t> confusion;

  std::optional<double> ambiguous_precision() const { return ambiguous.precision(); }
  std::optional<double> all_words_precision() const { return all.precision(); }
  bool operator==(const Metrics&) const = default;
};

Metrics evaluate(const TaggerBundle& bundle, const Corpus& test);

// Stand-in for a hand-tagged corpus. Content words are unambiguous and drawn
// Zipf-style from per-tag vocabularies. Each ambiguous word is always followed
// by a cue word; with probability signal_strength the cue is the one
// designated for the word's true tag, otherwise a cue designated for none of
// its candidates. Cue designations differ between ambiguous words, so the
// cue identifies the tag only in conjunction with the ambiguous word.
struct SyntheticCorpusSpec {
  std::uint64_t seed = 42;
  std::size_t sentences = 4000;
  // Unambiguous vocabulary size of each content tag; the tag count follows.
  std::vector<std::size_t> vocabulary_sizes = {600, 400, 250, 150, 80, 40};
  double ambiguity_rate = 0.2;   // chance that a slot starts an ambiguous word
  double signal_strength = 0.9;
  std::size_t ambiguous_words = 60;
  std::size_t min_candidates = 2;
  std::size_t max_candidates = 3;
  std::size_t cue_words = 12;
  std::size_t min_length = 6;
  std::size_t max_length = 16;
  // Candidate priors: 0 is uniform, larger values favor the first candidate.
  double prior_skew = 1.0;
  // Share of sentences split off as the test set.
  double test_fraction = 2130.0 / 10452.0;

  void validate() const;
};

struct SyntheticCorpus {
  // Coverage sentences first (every word with every tag it can take), then
  // the random sentences.
  Corpus sentences;
  std::size_t coverage_sentences = 0;
  // Ambiguous word -> (tag, designated cue word) per candidate, in prior order.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> cues;
};

SyntheticCorpus generate_synthetic(const SyntheticCorpusSpec& spec);
Corpus generate_synthetic_corpus(const SyntheticCorpusSpec& spec);

// Training part first; the coverage sentences always land in training.
std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double test_fraction);

// Fraction of ambiguous tokens (words listed in `cues`) whose right neighbor
// is the cue designated for their gold tag; absent if there are none.
std::optional<double> measured_signal(const SyntheticCorpus& corpus,
                                      std::span<const Sentence> sentences);

struct ComparisonRow {
  Method method;
  std::string features;  // feature_config_label()
  Metrics metrics;
  double seconds = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
};

std::string feature_config_label(const FeatureConfig& config);

// One row per (method, feature config), in the given order.
ComparisonReport run_comparison(const Corpus& training, const Corpus& test,
                                std::span<const Method> methods,
                                std::span<const FeatureConfig> feature_configs,
                                const LearnerConfig& learner);

// Aligned text table, precisions as percentages with one decimal.
std::string render_table(const ComparisonReport& report, bool with_timing);
// One JSON object per line with full-precision values.
std::string render_records(const ComparisonReport& report, bool with_timing);

}  // namespace seqtag
