#include "seqtag/tagger.hpp"

#include <ostream>
#include <type_traits>
#include <utility>

#include "seqtag/error.hpp"

namespace seqtag {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kDictionary:
      return "dictionary";
    case Provenance::kLearner:
      return "learner";
    case Provenance::kFallback:
      return "fallback";
  }
  return "?";
}

Method parse_method(std::string_view id) {
  if (id == "baseline") return Method::kBaseline;
  if (id == "dlist") return Method::kDecisionList;
  if (id == "maxent") return Method::kMaxEnt;
  if (id == "svm") return Method::kSvm;
  throw Error(ErrorCode::kUnknownMethod, "unknown method '" + std::string(id) +
                                             "' (expected baseline, dlist, maxent or svm)");
}

const char* method_name(Method method) {
  switch (method) {
    case Method::kBaseline:
      return "baseline";
    case Method::kDecisionList:
      return "dlist";
    case Method::kMaxEnt:
      return "maxent";
    case Method::kSvm:
      return "svm";
  }
  return "?";
}

Method TaggerBundle::method() const {
  return static_cast<Method>(learner.index());
}

TaggerTraining train_tagger(const Corpus& training, Method method,
                            const FeatureConfig& features,
                            const LearnerConfig& learner,
                            std::istream* lexicon_override) {
  if (token_count(training) == 0)
    throw Error(ErrorCode::kEmptyCorpus, "training corpus is empty");
  features.validate();
  auto [lexicon, tags] = build_lexicon(training);
  if (lexicon_override != nullptr)
    lexicon = apply_lexicon_override(lexicon, tags, *lexicon_override);

  TaggerTraining out;
  auto& report = out.report;
  report.sentences = training.size();
  report.tokens = token_count(training);
  auto& bundle = out.bundle;
  bundle.features = features;

  if (method == Method::kBaseline) {
    bundle.learner = BaselineLearner{};
    bundle.vocabulary.freeze();
    report.examples = partition_tokens(training, lexicon).ambiguous.size();
  } else {
    bundle.vocabulary = build_vocabulary(training, lexicon, features);
    std::vector<LabeledExample> examples;
    for (const auto& pos : partition_tokens(training, lexicon).ambiguous) {
      const auto& sentence = training[pos.sentence];
      examples.push_back({extract(sentence, pos.token, lexicon,
                                  std::as_const(bundle.vocabulary), features),
                          *tags.find(*sentence.tokens[pos.token].tag)});
    }
    report.examples = examples.size();
    report.features = bundle.vocabulary.size();
    switch (method) {
      case Method::kDecisionList:
        bundle.learner = train_decision_list(examples, tags, learner.dlist);
        break;
      case Method::kMaxEnt: {
        auto trained = train_gis(examples, tags, learner.gis);
        report.gis = trained.report;
        bundle.learner = std::move(trained.model);
        break;
      }
      case Method::kSvm: {
        auto trained = train_pairwise(examples, tags, learner.svm, learner.threads);
        report.svm_pairs = trained.model.models().size();
        report.svm_omitted_pairs = trained.model.omitted().size();
        for (const auto& [pair, r] : trained.reports)
          if (!r.converged) ++report.svm_unconverged_pairs;
        for (const auto& [pair, m] : trained.model.models())
          report.support_vectors += m.support_vectors().size();
        bundle.learner = std::move(trained.model);
        break;
      }
      case Method::kBaseline:
        break;
    }
  }
  bundle.lexicon = std::move(lexicon);
  bundle.tags = std::move(tags);
  return out;
}

TagDecision baseline_predict(const Lexicon& lexicon, std::string_view word) {
  TagDecision d;
  if (const auto* candidates = lexicon.find(word)) {
    d.tag = candidates->front().tag;
    d.provenance = candidates->size() == 1 ? Provenance::kDictionary
                                           : Provenance::kLearner;
  } else {
    d.tag = lexicon.majority_tag();
    d.provenance = Provenance::kFallback;
  }
  return d;
}

std::vector<TagDecision> tag_sentence(const TaggerBundle& bundle,
                                      const Sentence& sentence) {
  std::vector<TagDecision> decisions;
  decisions.reserve(sentence.size());
  std::vector<TagId> allowed;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const auto& word = sentence.tokens[i].word;
    const auto* candidates = bundle.lexicon.find(word);
    if (candidates == nullptr || candidates->size() == 1 ||
        bundle.method() == Method::kBaseline) {
      decisions.push_back(baseline_predict(bundle.lexicon, word));
      continue;
    }
    allowed.clear();
    for (const auto& c : *candidates) allowed.push_back(c.tag);
    const auto x = extract(sentence, i, bundle.lexicon, bundle.vocabulary, bundle.features);
    TagDecision d = std::visit(
        [&](const auto& model) -> TagDecision {
          using T = std::decay_t<decltype(model)>;
          if constexpr (std::is_same_v<T, DecisionListModel>)
            return predict_decision_list(model, x, allowed);
          else if constexpr (std::is_same_v<T, MaxEntModel>)
            return predict_maxent(model, x, allowed);
          else if constexpr (std::is_same_v<T, PairwiseModel>)
            return predict_pairwise(model, x, allowed);
          else
            return baseline_predict(bundle.lexicon, word);
        },
        bundle.learner);
    // The learner answered for an ambiguous word even when it fell back to a
    // default inside its own model.
    if (d.provenance == Provenance::kFallback) d.provenance = Provenance::kLearner;
    decisions.push_back(std::move(d));
  }
  return decisions;
}

void write_tagged(std::ostream& out, const Sentence& sentence,
                  const std::vector<TagDecision>& decisions, const TagSet& tags) {
  for (std::size_t i = 0; i < sentence.size(); ++i)
    out << sentence.tokens[i].word << '\t' << tags.name(decisions[i].tag) << '\t'
        << provenance_name(decisions[i].provenance) << '\n';
  out << '\n';
}

}  // namespace seqtag
