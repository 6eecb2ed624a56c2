#include "seqtag/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "seqtag/error.hpp"
#include "text_util.hpp"

namespace seqtag {

namespace {

// In-place softmax of log scores.
void normalize(std::vector<double>& scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    z += s;
  }
  for (double& s : scores) s /= z;
}

std::size_t max_feature_id_plus_one(std::span<const LabeledExample> examples) {
  std::size_t n = 0;
  for (const auto& ex : examples)
    if (!ex.features.empty())
      n = std::max<std::size_t>(n, ex.features.ids().back() + 1);
  return n;
}

struct Expectations {
  std::vector<double> model;  // [feature * tags + tag], summed over examples
  double log_likelihood = 0.0;
};

// Sums model expectations of every (feature, tag) over the examples.
Expectations expectations(const MaxEntModel& model,
                          std::span<const LabeledExample> examples,
                          std::size_t num_features) {
  const std::size_t tags = model.num_tags();
  Expectations e;
  e.model.assign(num_features * tags, 0.0);
  std::vector<double> p;
  for (const auto& ex : examples) {
    p = model.log_scores(ex.features);
    normalize(p);
    if (ex.tag < tags) e.log_likelihood += std::log(p[ex.tag]);
    for (FeatureId f : ex.features) {
      double* row = &e.model[static_cast<std::size_t>(f) * tags];
      for (std::size_t a = 0; a < tags; ++a) row[a] += p[a];
    }
  }
  e.log_likelihood /= static_cast<double>(examples.size());
  return e;
}

std::vector<double> empirical(std::span<const LabeledExample> examples,
                              std::size_t tags, std::size_t num_features) {
  std::vector<double> counts(num_features * tags, 0.0);
  for (const auto& ex : examples)
    for (FeatureId f : ex.features)
      if (ex.tag < tags) counts[static_cast<std::size_t>(f) * tags + ex.tag] += 1.0;
  return counts;
}

double residual(const std::vector<double>& emp, const std::vector<double>& model,
                std::size_t n) {
  double worst = 0.0;
  for (std::size_t i = 0; i < emp.size(); ++i)
    worst = std::max(worst, std::abs(emp[i] - model[i]));
  return worst / static_cast<double>(n);
}

}  // namespace

void GisConfig::validate() const {
  if (!(constraint_tolerance > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "GIS tolerance must be positive");
}

MaxEntModel::MaxEntModel(std::size_t num_tags, std::size_t correction_constant,
                         std::vector<MaxEntWeight> weights)
    : num_tags_(num_tags), correction_(correction_constant) {
  for (const auto& w : weights) {
    if (w.tag >= num_tags_)
      throw Error(ErrorCode::kInvalidArgument, "maxent weight for unknown tag");
    if (!std::isfinite(w.weight))
      throw Error(ErrorCode::kInvalidArgument, "maxent weight is not finite");
    if (w.feature >= by_feature_.size()) by_feature_.resize(w.feature + 1);
    by_feature_[w.feature].push_back({w.tag, w.weight});
  }
  for (auto& entries : by_feature_) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.tag < b.tag; });
    auto dup = std::adjacent_find(entries.begin(), entries.end(),
                                  [](const Entry& a, const Entry& b) {
                                    return a.tag == b.tag;
                                  });
    if (dup != entries.end())
      throw Error(ErrorCode::kInvalidArgument, "duplicate maxent weight");
  }
}

double MaxEntModel::weight(FeatureId feature, TagId tag) const {
  if (feature >= by_feature_.size()) return 0.0;
  for (const auto& e : by_feature_[feature])
    if (e.tag == tag) return e.weight;
  return 0.0;
}

std::vector<MaxEntWeight> MaxEntModel::weights() const {
  std::vector<MaxEntWeight> out;
  for (std::size_t f = 0; f < by_feature_.size(); ++f)
    for (const auto& e : by_feature_[f])
      out.push_back({static_cast<FeatureId>(f), e.tag, e.weight});
  return out;
}

std::vector<double> MaxEntModel::log_scores(const FeatureVector& context) const {
  std::vector<double> scores(num_tags_, 0.0);
  for (FeatureId f : context) {
    if (f >= by_feature_.size()) continue;
    for (const auto& e : by_feature_[f]) scores[e.tag] += e.weight;
  }
  return scores;
}

std::vector<double> MaxEntModel::distribution(const FeatureVector& context) const {
  auto p = log_scores(context);
  if (!p.empty()) normalize(p);
  return p;
}

void MaxEntModel::save(std::ostream& out) const {
  out << "tags\t" << num_tags_ << '\n' << "correction\t" << correction_ << '\n';
  for (const auto& w : weights())
    out << w.feature << '\t' << w.tag << '\t' << detail::format_double(w.weight)
        << '\n';
}

MaxEntModel MaxEntModel::load(std::istream& in) {
  std::string line;
  auto header = [&](std::string_view name) {
    if (!std::getline(in, line))
      throw CorruptModel("maxent", "missing header '" + std::string(name) + "'");
    auto cols = detail::split_view(line, '\t');
    std::optional<std::size_t> v;
    if (cols.size() == 2 && cols[0] == name) v = detail::parse_number<std::size_t>(cols[1]);
    if (!v) throw CorruptModel("maxent", "bad header '" + line + "'");
    return *v;
  };
  const auto tags = header("tags");
  const auto correction = header("correction");
  std::vector<MaxEntWeight> weights;
  while (std::getline(in, line)) {
    auto cols = detail::split_view(line, '\t');
    if (cols.size() != 3) throw CorruptModel("maxent", "expected 3 columns");
    auto f = detail::parse_number<FeatureId>(cols[0]);
    auto t = detail::parse_number<TagId>(cols[1]);
    auto w = detail::parse_number<double>(cols[2]);
    if (!f || !t || !w || *t >= tags || !std::isfinite(*w))
      throw CorruptModel("maxent", "bad weight line '" + line + "'");
    weights.push_back({*f, *t, *w});
  }
  try {
    return MaxEntModel(tags, correction, std::move(weights));
  } catch (const Error& e) {
    throw CorruptModel("maxent", e.what());
  }
}

MaxEntTraining train_gis(std::span<const LabeledExample> examples,
                         const TagSet& tags, const GisConfig& config) {
  config.validate();
  if (examples.empty())
    throw Error(ErrorCode::kNoExamples, "maxent: no training examples");
  if (tags.empty()) throw Error(ErrorCode::kInvalidArgument, "maxent: empty tag set");
  const std::size_t num_tags = tags.size();
  std::size_t correction = 0;
  for (const auto& ex : examples) {
    if (ex.features.empty())
      throw Error(ErrorCode::kInvalidArgument,
                  "maxent: every training example needs at least one feature");
    if (ex.tag >= num_tags)
      throw Error(ErrorCode::kInvalidArgument, "maxent: example tag outside tag set");
    correction = std::max(correction, ex.features.size());
  }
  const std::size_t num_features = max_feature_id_plus_one(examples);
  const auto emp = empirical(examples, num_tags, num_features);

  // Weighted pairs are exactly those with a positive empirical count.
  std::vector<MaxEntWeight> weights;
  for (std::size_t f = 0; f < num_features; ++f)
    for (std::size_t a = 0; a < num_tags; ++a)
      if (emp[f * num_tags + a] > 0.0)
        weights.push_back({static_cast<FeatureId>(f), static_cast<TagId>(a), 0.0});

  MaxEntTraining result;
  auto& report = result.report;
  const double step = 1.0 / static_cast<double>(correction);
  for (std::size_t iter = 0;; ++iter) {
    result.model = MaxEntModel(num_tags, correction, weights);
    auto e = expectations(result.model, examples, num_features);
    report.log_likelihood.push_back(e.log_likelihood);
    report.residual = residual(emp, e.model, examples.size());
    report.iterations = iter;
    if (report.residual <= config.constraint_tolerance) {
      report.converged = true;
      break;
    }
    if (iter == config.max_iterations) break;
    for (auto& w : weights) {
      const std::size_t k = static_cast<std::size_t>(w.feature) * num_tags + w.tag;
      if (e.model[k] > 0.0) w.weight += step * std::log(emp[k] / e.model[k]);
    }
  }
  return result;
}

double check_constraints(const MaxEntModel& model,
                         std::span<const LabeledExample> examples) {
  if (examples.empty()) return 0.0;
  const std::size_t num_features = max_feature_id_plus_one(examples);
  const auto emp = empirical(examples, model.num_tags(), num_features);
  const auto e = expectations(model, examples, num_features);
  return residual(emp, e.model, examples.size());
}

double conditional_log_likelihood(const MaxEntModel& model,
                                  std::span<const LabeledExample> examples) {
  if (examples.empty()) return 0.0;
  return expectations(model, examples, max_feature_id_plus_one(examples))
      .log_likelihood;
}

TagDecision predict_maxent(const MaxEntModel& model, const FeatureVector& context,
                           AllowedTags allowed) {
  TagDecision d;
  d.scores = model.distribution(context);
  d.provenance = context.empty() ? Provenance::kFallback : Provenance::kLearner;
  bool found = false;
  for (std::size_t a = 0; a < d.scores.size(); ++a) {
    if (!is_allowed(allowed, static_cast<TagId>(a))) continue;
    if (!found || d.scores[a] > d.scores[d.tag]) {
      d.tag = static_cast<TagId>(a);
      found = true;
    }
  }
  if (!found && !allowed.empty()) {
    d.tag = allowed.front();
    d.provenance = Provenance::kFallback;
  }
  return d;
}

}  // namespace seqtag
