#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "seqtag/decision.hpp"

namespace seqtag {

struct GisConfig {
  std::size_t max_iterations = 500;  // 0 leaves the model at its uniform start
  double constraint_tolerance = 1e-3;

  void validate() const;
};

struct MaxEntWeight {
  FeatureId feature;
  TagId tag;
  double weight;

  bool operator==(const MaxEntWeight&) const = default;
};

// Conditional exponential model p(a | x) proportional to
// exp(sum over active f of w(f, a)). Pairs without a stored weight have
// weight 0.
class MaxEntModel {
 public:
  MaxEntModel() = default;
  MaxEntModel(std::size_t num_tags, std::size_t correction_constant,
              std::vector<MaxEntWeight> weights);

  std::size_t num_tags() const noexcept { return num_tags_; }
  std::size_t correction_constant() const noexcept { return correction_; }
  double weight(FeatureId feature, TagId tag) const;
  // All stored weights in (feature, tag) order.
  std::vector<MaxEntWeight> weights() const;

  // Unnormalized log scores, one per tag.
  std::vector<double> log_scores(const FeatureVector& context) const;
  std::vector<double> distribution(const FeatureVector& context) const;

  // Header `tags<TAB>N`, `correction<TAB>C`, then `feature<TAB>tag<TAB>weight`.
  void save(std::ostream& out) const;
  static MaxEntModel load(std::istream& in);

  bool operator==(const MaxEntModel& o) const {
    return num_tags_ == o.num_tags_ && correction_ == o.correction_ &&
           weights() == o.weights();
  }

 private:
  struct Entry {
    TagId tag;
    double weight;
  };
  std::size_t num_tags_ = 0;
  std::size_t correction_ = 1;
  std::vector<std::vector<Entry>> by_feature_;  // sorted by tag
};

struct GisReport {
  std::size_t iterations = 0;  // weight updates performed
  double residual = 0.0;       // constraint residual of the returned model
  bool converged = false;
  // Mean conditional log-likelihood of the training data, one value per
  // evaluated weight vector (iterations + 1 values).
  std::vector<double> log_likelihood;
};

struct MaxEntTraining {
  MaxEntModel model;
  GisReport report;
};

// Generalized iterative scaling on the conditional model. Only (feature, tag)
// pairs observed in training carry weights. Every context is padded to the
// correction constant C = max active features by a slack feature whose weight
// stays 0, so each update w += ln(empirical / model) / C cannot lower the
// likelihood.
MaxEntTraining train_gis(std::span<const LabeledExample> examples,
                         const TagSet& tags, const GisConfig& config = {});

// Max over every (feature seen in `examples`, tag) pair of
// |empirical expectation - model expectation|, both averaged over examples.
double check_constraints(const MaxEntModel& model,
                         std::span<const LabeledExample> examples);

double conditional_log_likelihood(const MaxEntModel& model,
                                  std::span<const LabeledExample> examples);

// Argmax over the allowed tags, ties to the lower tag id; the full
// distribution is attached. An empty context yields the uniform
// distribution with fallback provenance.
TagDecision predict_maxent(const MaxEntModel& model, const FeatureVector& context,
                           AllowedTags allowed = {});

}  // namespace seqtag
