#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "seqtag/decision.hpp"

namespace seqtag {

struct SvmConfig {
  double C = 1.0;
  int degree = 2;
  double kkt_tolerance = 1e-3;
  // Iteration cap in units of the problem size: at most max_passes * l pair
  // updates for l training points.
  std::size_t max_passes = 1000;

  void validate() const;
  bool operator==(const SvmConfig&) const = default;
};

// Polynomial kernel (<x, y> + 1)^degree on binary vectors.
double kernel(const FeatureVector& x, const FeatureVector& y, int degree);

struct BinaryProblem {
  std::vector<FeatureVector> contexts;
  std::vector<int> labels;  // +1 / -1

  // Throws kDegenerateProblem unless both labels occur.
  void validate() const;
  std::size_t size() const noexcept { return contexts.size(); }
};

// L(alpha) = sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j).
double dual_objective(const BinaryProblem& problem, std::span<const double> alphas,
                      int degree);

// b = -(max_{y_i=-1} b_i + min_{y_i=+1} b_i) / 2 with
// b_i = sum_j alpha_j y_j K(x_j, x_i), taken over every training point.
double compute_bias(const BinaryProblem& problem, std::span<const double> alphas,
                    const SvmConfig& config);

struct SupportVector {
  FeatureVector context;
  double alpha;
  int label;

  bool operator==(const SupportVector&) const = default;
};

struct BinaryPrediction {
  int label;      // +1 iff margin >= 0
  double margin;  // sum alpha_i y_i K(x_i, x) + b
};

class SvmBinaryModel {
 public:
  SvmBinaryModel() = default;
  SvmBinaryModel(std::vector<SupportVector> support, double bias, SvmConfig config);

  std::span<const SupportVector> support_vectors() const noexcept { return support_; }
  double bias() const noexcept { return bias_; }
  const SvmConfig& config() const noexcept { return config_; }
  double margin(const FeatureVector& x) const;

  bool operator==(const SvmBinaryModel&) const = default;

 private:
  std::vector<SupportVector> support_;
  double bias_ = 0.0;
  SvmConfig config_;
};

BinaryPrediction predict_binary(const SvmBinaryModel& model, const FeatureVector& x);

struct SmoReport {
  std::size_t iterations = 0;
  bool converged = false;
  double kkt_gap = 0.0;  // max violating-pair gap at exit
  double objective = 0.0;
};

struct SmoResult {
  SvmBinaryModel model;
  std::vector<double> alphas;  // one per training point, including zeros
  SmoReport report;
};

// Sequential minimal optimization of the dual. Working pair: the maximal KKT
// violator, then the partner giving the largest objective gain. Stops when
// the violating-pair gap is within kkt_tolerance; exhausting the iteration
// cap is reported, not thrown.
SmoResult train_smo(const BinaryProblem& problem, const SvmConfig& config);

struct TagPair {
  TagId positive;  // lower tag id, label +1
  TagId negative;  // higher tag id, label -1

  auto operator<=>(const TagPair&) const = default;
};

class PairwiseModel {
 public:
  PairwiseModel() = default;
  PairwiseModel(std::size_t num_tags, std::map<TagPair, SvmBinaryModel> models,
                std::vector<TagPair> omitted);

  std::size_t num_tags() const noexcept { return num_tags_; }
  const std::map<TagPair, SvmBinaryModel>& models() const noexcept { return models_; }
  // Pairs without a classifier because one of the tags had no examples.
  const std::vector<TagPair>& omitted() const noexcept { return omitted_; }

  // `tags<TAB>N`, `pairs<TAB>P`, `omitted<TAB>a,b a,b ...`, then per pair a
  // `pair` line (tags, C, degree, kkt tolerance, max passes, bias, support
  // vector count) followed by `alpha<TAB>label<TAB>id,id,...` lines.
  void save(std::ostream& out) const;
  static PairwiseModel load(std::istream& in);

  bool operator==(const PairwiseModel&) const = default;

 private:
  std::size_t num_tags_ = 0;
  std::map<TagPair, SvmBinaryModel> models_;
  std::vector<TagPair> omitted_;
};

struct PairwiseTraining {
  PairwiseModel model;
  std::map<TagPair, SmoReport> reports;
};

// One binary SVM per unordered pair of tags present in `examples`; pairs are
// trained on up to `threads` workers (0 = hardware concurrency).
PairwiseTraining train_pairwise(std::span<const LabeledExample> examples,
                                const TagSet& tags, const SvmConfig& config,
                                unsigned threads = 0);

// Each classifier whose two tags are allowed votes for its winner. Most votes
// wins; ties go to the larger sum of |margin| over the contests each tied tag
// won, then to the lower tag id. Scores are the vote counts.
TagDecision predict_pairwise(const PairwiseModel& model, const FeatureVector& x,
                             AllowedTags allowed = {});

}  // namespace seqtag
