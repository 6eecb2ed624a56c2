#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "seqtag/corpus.hpp"
#include "seqtag/decision.hpp"
#include "seqtag/decision_list.hpp"
#include "seqtag/features.hpp"
#include "seqtag/maxent.hpp"
#include "seqtag/svm.hpp"

namespace seqtag {

enum class Method { kBaseline, kDecisionList, kMaxEnt, kSvm };

Method parse_method(std::string_view id);  // baseline | dlist | maxent | svm
const char* method_name(Method method);

struct LearnerConfig {
  DecisionListConfig dlist;
  GisConfig gis;
  SvmConfig svm;
  unsigned threads = 0;  // concurrent pairwise trainings, 0 = hardware
};

// The most-frequent-tag learner needs nothing beyond the lexicon.
struct BaselineLearner {
  bool operator==(const BaselineLearner&) const = default;
};

using Learner = std::variant<BaselineLearner, DecisionListModel, MaxEntModel, PairwiseModel>;

struct TaggerBundle {
  TagSet tags;
  Lexicon lexicon;
  FeatureConfig features;
  FeatureVocabulary vocabulary;  // empty for the baseline
  Learner learner;

  Method method() const;
};

struct TrainingReport {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t examples = 0;  // ambiguous training positions
  std::size_t features = 0;  // vocabulary size
  std::optional<GisReport> gis;
  std::size_t svm_pairs = 0;
  std::size_t svm_omitted_pairs = 0;
  std::size_t svm_unconverged_pairs = 0;
  std::size_t support_vectors = 0;
};

struct TaggerTraining {
  TaggerBundle bundle;
  TrainingReport report;
};

// Learners see only the ambiguous training positions. An optional override
// file (`word<TAB>tag1,tag2,...`) reshapes the lexicon before anything else.
TaggerTraining train_tagger(const Corpus& training, Method method,
                            const FeatureConfig& features,
                            const LearnerConfig& learner,
                            std::istream* lexicon_override = nullptr);

// Unambiguous words take their only candidate, unknown words the corpus
// majority tag, ambiguous words the learner's choice among their candidates.
std::vector<TagDecision> tag_sentence(const TaggerBundle& bundle,
                                      const Sentence& sentence);

TagDecision baseline_predict(const Lexicon& lexicon, std::string_view word);

// `word<TAB>tag<TAB>provenance` lines, blank line after each sentence.
void write_tagged(std::ostream& out, const Sentence& sentence,
                  const std::vector<TagDecision>& decisions, const TagSet& tags);

}  // namespace seqtag
