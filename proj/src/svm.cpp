#include "seqtag/svm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <list>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "seqtag/error.hpp"
#include "text_util.hpp"

namespace seqtag {

namespace {

// Problems up to this size keep every computed kernel row.
constexpr std::size_t kFullCacheLimit = 5000;
// Row budget (in doubles) for the LRU cache used beyond that size.
constexpr std::size_t kCacheDoubles = std::size_t{32} << 20;

class KernelCache {
 public:
  KernelCache(const BinaryProblem& problem, int degree)
      : problem_(problem), degree_(degree), rows_(problem.size()) {
    const std::size_t l = problem.size();
    capacity_ = l <= kFullCacheLimit ? l : std::max<std::size_t>(2, kCacheDoubles / l);
    diagonal_.resize(l);
    for (std::size_t i = 0; i < l; ++i)
      diagonal_[i] = kernel(problem.contexts[i], problem.contexts[i], degree);
  }

  double diagonal(std::size_t i) const { return diagonal_[i]; }

  // The returned span stays valid until the next call to row().
  std::span<const double> row(std::size_t i) {
    auto& slot = rows_[i];
    if (slot.data) {
      lru_.splice(lru_.begin(), lru_, slot.position);
      return *slot.data;
    }
    if (lru_.size() >= capacity_) {
      std::size_t victim = lru_.back();
      lru_.pop_back();
      rows_[victim].data.reset();
    }
    const std::size_t l = problem_.size();
    std::vector<double> values(l);
    for (std::size_t t = 0; t < l; ++t)
      values[t] = kernel(problem_.contexts[i], problem_.contexts[t], degree_);
    slot.data = std::move(values);
    lru_.push_front(i);
    slot.position = lru_.begin();
    return *slot.data;
  }

 private:
  struct Slot {
    std::optional<std::vector<double>> data;
    std::list<std::size_t>::iterator position;
  };
  const BinaryProblem& problem_;
  int degree_;
  std::vector<Slot> rows_;
  std::list<std::size_t> lru_;
  std::size_t capacity_;
  std::vector<double> diagonal_;
};

std::string join_ids(const FeatureVector& x) {
  std::string s;
  for (FeatureId f : x) {
    if (!s.empty()) s += ',';
    s += std::to_string(f);
  }
  return s;
}

}  // namespace

void SvmConfig::validate() const {
  if (!(C > 0.0) || !std::isfinite(C))
    throw Error(ErrorCode::kInvalidArgument, "SVM C must be positive");
  if (degree < 1) throw Error(ErrorCode::kInvalidArgument, "SVM degree must be >= 1");
  if (!(kkt_tolerance > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "SVM KKT tolerance must be positive");
  if (max_passes < 1)
    throw Error(ErrorCode::kInvalidArgument, "SVM max passes must be >= 1");
}

double kernel(const FeatureVector& x, const FeatureVector& y, int degree) {
  const double base = static_cast<double>(overlap(x, y)) + 1.0;
  double value = base;
  for (int k = 1; k < degree; ++k) value *= base;
  return value;
}

void BinaryProblem::validate() const {
  if (contexts.size() != labels.size())
    throw Error(ErrorCode::kInvalidArgument, "contexts and labels differ in length");
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y == 1)
      pos = true;
    else if (y == -1)
      neg = true;
    else
      throw Error(ErrorCode::kInvalidArgument, "labels must be +1 or -1");
  }
  if (!pos || !neg)
    throw Error(ErrorCode::kDegenerateProblem,
                "binary problem needs both a positive and a negative example");
}

double dual_objective(const BinaryProblem& problem, std::span<const double> alphas,
                      int degree) {
  if (alphas.size() != problem.size())
    throw Error(ErrorCode::kInvalidArgument, "alpha count does not match problem");
  double linear = 0.0, quadratic = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    linear += alphas[i];
    if (alphas[i] == 0.0) continue;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      if (alphas[j] == 0.0) continue;
      quadratic += alphas[i] * alphas[j] * problem.labels[i] * problem.labels[j] *
                   kernel(problem.contexts[i], problem.contexts[j], degree);
    }
  }
  return linear - 0.5 * quadratic;
}

double compute_bias(const BinaryProblem& problem, std::span<const double> alphas,
                    const SvmConfig& config) {
  if (alphas.size() != problem.size())
    throw Error(ErrorCode::kInvalidArgument, "alpha count does not match problem");
  double max_negative = -std::numeric_limits<double>::infinity();
  double min_positive = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < problem.size(); ++i) {
    double b_i = 0.0;
    for (std::size_t j = 0; j < problem.size(); ++j) {
      if (alphas[j] == 0.0) continue;
      b_i += alphas[j] * problem.labels[j] *
             kernel(problem.contexts[j], problem.contexts[i], config.degree);
    }
    if (problem.labels[i] == -1)
      max_negative = std::max(max_negative, b_i);
    else
      min_positive = std::min(min_positive, b_i);
  }
  return -(max_negative + min_positive) / 2.0;
}

SvmBinaryModel::SvmBinaryModel(std::vector<SupportVector> support, double bias,
                               SvmConfig config)
    : support_(std::move(support)), bias_(bias), config_(config) {}

double SvmBinaryModel::margin(const FeatureVector& x) const {
  double sum = bias_;
  for (const auto& sv : support_)
    sum += sv.alpha * sv.label * kernel(sv.context, x, config_.degree);
  return sum;
}

BinaryPrediction predict_binary(const SvmBinaryModel& model, const FeatureVector& x) {
  const double m = model.margin(x);
  return {m >= 0.0 ? 1 : -1, m};
}

SmoResult train_smo(const BinaryProblem& problem, const SvmConfig& config) {
  config.validate();
  problem.validate();
  const std::size_t l = problem.size();
  const double C = config.C;
  const auto& y = problem.labels;
  KernelCache cache(problem, config.degree);

  // Minimizes f(a) = 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij, i.e. -L(a).
  std::vector<double> alpha(l, 0.0);
  std::vector<double> grad(l, -1.0);
  auto in_up = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] < C) || (y[t] == -1 && alpha[t] > 0.0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] == -1 && alpha[t] < C) || (y[t] == 1 && alpha[t] > 0.0);
  };

  SmoReport report;
  const std::size_t max_iterations = config.max_passes * l;
  constexpr double kTau = 1e-12;
  while (true) {
    // Maximal violator i over the "up" set.
    double m = -std::numeric_limits<double>::infinity();
    std::size_t i = l;
    for (std::size_t t = 0; t < l; ++t) {
      if (!in_up(t)) continue;
      const double v = -y[t] * grad[t];
      if (v > m) {
        m = v;
        i = t;
      }
    }
    double big_m = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < l; ++t)
      if (in_low(t)) big_m = std::min(big_m, -y[t] * grad[t]);
    report.kkt_gap = (i == l) ? 0.0 : m - big_m;
    if (i == l || report.kkt_gap <= config.kkt_tolerance) {
      report.converged = true;
      break;
    }
    if (report.iterations >= max_iterations) break;

    // Partner j over the "low" set maximizing the second-order gain b^2 / a.
    auto row_i = cache.row(i);
    std::vector<double> k_i(row_i.begin(), row_i.end());
    std::size_t j = l;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < l; ++t) {
      if (!in_low(t)) continue;
      const double b = m + y[t] * grad[t];
      if (b <= 0.0) continue;
      double a = cache.diagonal(i) + cache.diagonal(t) - 2.0 * k_i[t];
      if (a <= 0.0) a = kTau;
      const double gain = b * b / a;
      if (gain > best_gain) {
        best_gain = gain;
        j = t;
      }
    }
    if (j == l) {
      report.converged = true;
      break;
    }
    auto k_j = cache.row(j);
    ++report.iterations;

    const double old_i = alpha[i], old_j = alpha[j];
    double quad = cache.diagonal(i) + cache.diagonal(j) - 2.0 * k_i[j];
    if (quad <= 0.0) quad = kTau;
    if (y[i] != y[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double d_i = alpha[i] - old_i, d_j = alpha[j] - old_j;
    for (std::size_t t = 0; t < l; ++t)
      grad[t] += y[t] * (y[i] * d_i * k_i[t] + y[j] * d_j * k_j[t]);
  }

  SmoResult result;
  result.alphas = alpha;
  double objective = 0.0;
  for (std::size_t t = 0; t < l; ++t) objective += alpha[t] * (grad[t] - 1.0) / 2.0;
  // f(a) = 1/2 a'(Qa - e) - 1/2 e'a = sum a_t (G_t - 1) / 2, and L = -f.
  report.objective = -objective;
  result.report = report;

  std::vector<SupportVector> support;
  for (std::size_t t = 0; t < l; ++t)
    if (alpha[t] > 0.0) support.push_back({problem.contexts[t], alpha[t], y[t]});
  result.model =
      SvmBinaryModel(std::move(support), compute_bias(problem, alpha, config), config);
  return result;
}

PairwiseModel::PairwiseModel(std::size_t num_tags,
                             std::map<TagPair, SvmBinaryModel> models,
                             std::vector<TagPair> omitted)
    : num_tags_(num_tags), models_(std::move(models)), omitted_(std::move(omitted)) {}

void PairwiseModel::save(std::ostream& out) const {
  out << "tags\t" << num_tags_ << '\n' << "pairs\t" << models_.size() << '\n';
  out << "omitted\t";
  for (std::size_t k = 0; k < omitted_.size(); ++k)
    out << (k ? " " : "") << omitted_[k].positive << ',' << omitted_[k].negative;
  out << '\n';
  for (const auto& [pair, m] : models_) {
    const auto& c = m.config();
    out << "pair\t" << pair.positive << '\t' << pair.negative << '\t'
        << detail::format_double(c.C) << '\t' << c.degree << '\t'
        << detail::format_double(c.kkt_tolerance) << '\t' << c.max_passes << '\t'
        << detail::format_double(m.bias()) << '\t' << m.support_vectors().size()
        << '\n';
    for (const auto& sv : m.support_vectors())
      out << detail::format_double(sv.alpha) << '\t' << sv.label << '\t'
          << join_ids(sv.context) << '\n';
  }
}

PairwiseModel PairwiseModel::load(std::istream& in) {
  std::string line;
  auto fail = [](const std::string& what) { return CorruptModel("svm", what); };
  auto next = [&](const char* what) -> std::vector<std::string_view> {
    if (!std::getline(in, line)) throw fail(std::string("truncated before ") + what);
    return detail::split_view(line, '\t');
  };
  auto cols = next("tags");
  std::optional<std::size_t> tags, pairs;
  if (cols.size() == 2 && cols[0] == "tags") tags = detail::parse_number<std::size_t>(cols[1]);
  if (!tags) throw fail("bad tags header");
  cols = next("pairs");
  if (cols.size() == 2 && cols[0] == "pairs")
    pairs = detail::parse_number<std::size_t>(cols[1]);
  if (!pairs) throw fail("bad pairs header");
  cols = next("omitted");
  if (cols.size() != 2 || cols[0] != "omitted") throw fail("bad omitted header");
  std::vector<TagPair> omitted;
  if (!cols[1].empty()) {
    for (auto item : detail::split_view(cols[1], ' ')) {
      auto ab = detail::split_view(item, ',');
      if (ab.size() != 2) throw fail("bad omitted pair");
      auto a = detail::parse_number<TagId>(ab[0]), b = detail::parse_number<TagId>(ab[1]);
      if (!a || !b) throw fail("bad omitted pair");
      omitted.push_back({*a, *b});
    }
  }
  std::map<TagPair, SvmBinaryModel> models;
  for (std::size_t p = 0; p < *pairs; ++p) {
    // Copy: `cols` views into `line`, which the support-vector reads reuse.
    auto header = next("pair block");
    std::vector<std::string> h(header.begin(), header.end());
    if (h.size() != 9 || h[0] != "pair") throw fail("bad pair header");
    auto a = detail::parse_number<TagId>(h[1]);
    auto b = detail::parse_number<TagId>(h[2]);
    auto C = detail::parse_number<double>(h[3]);
    auto d = detail::parse_number<int>(h[4]);
    auto tol = detail::parse_number<double>(h[5]);
    auto passes = detail::parse_number<std::size_t>(h[6]);
    auto bias = detail::parse_number<double>(h[7]);
    auto nsv = detail::parse_number<std::size_t>(h[8]);
    if (!a || !b || !C || !d || !tol || !passes || !bias || !nsv || *a >= *b ||
        *b >= *tags)
      throw fail("bad pair header '" + line + "'");
    SvmConfig config{*C, *d, *tol, *passes};
    std::vector<SupportVector> support;
    for (std::size_t k = 0; k < *nsv; ++k) {
      auto sv = next("support vector");
      if (sv.size() != 3) throw fail("bad support vector line");
      auto alpha = detail::parse_number<double>(sv[0]);
      auto label = detail::parse_number<int>(sv[1]);
      if (!alpha || !label || (*label != 1 && *label != -1) || !(*alpha > 0.0))
        throw fail("bad support vector line '" + line + "'");
      std::vector<FeatureId> ids;
      if (!sv[2].empty()) {
        for (auto id : detail::split_view(sv[2], ',')) {
          auto f = detail::parse_number<FeatureId>(id);
          if (!f) throw fail("bad feature id");
          ids.push_back(*f);
        }
      }
      support.push_back({FeatureVector(std::move(ids)), *alpha, *label});
    }
    models.emplace(TagPair{*a, *b}, SvmBinaryModel(std::move(support), *bias, config));
  }
  if (std::getline(in, line)) throw fail("trailing data after last pair");
  return PairwiseModel(*tags, std::move(models), std::move(omitted));
}

PairwiseTraining train_pairwise(std::span<const LabeledExample> examples,
                                const TagSet& tags, const SvmConfig& config,
                                unsigned threads) {
  config.validate();
  std::vector<std::size_t> per_tag(tags.size(), 0);
  for (const auto& ex : examples) {
    if (ex.tag >= tags.size())
      throw Error(ErrorCode::kInvalidArgument, "svm: example tag outside tag set");
    ++per_tag[ex.tag];
  }
  const auto present = std::count_if(per_tag.begin(), per_tag.end(),
                                     [](std::size_t n) { return n > 0; });
  if (present < 2)
    throw Error(ErrorCode::kSingleCategory,
                "svm: need examples of at least two tags, found " +
                    std::to_string(present));

  std::vector<TagPair> trainable, omitted;
  for (TagId a = 0; a < tags.size(); ++a)
    for (TagId b = a + 1; b < tags.size(); ++b)
      (per_tag[a] > 0 && per_tag[b] > 0 ? trainable : omitted).push_back({a, b});

  std::vector<std::optional<SmoResult>> results(trainable.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < trainable.size(); k = next++) {
      const auto pair = trainable[k];
      BinaryProblem problem;
      for (const auto& ex : examples) {
        if (ex.tag == pair.positive || ex.tag == pair.negative) {
          problem.contexts.push_back(ex.features);
          problem.labels.push_back(ex.tag == pair.positive ? 1 : -1);
        }
      }
      results[k] = train_smo(problem, config);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(1, trainable.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  PairwiseTraining out;
  std::map<TagPair, SvmBinaryModel> models;
  for (std::size_t k = 0; k < trainable.size(); ++k) {
    out.reports[trainable[k]] = results[k]->report;
    models.emplace(trainable[k], std::move(results[k]->model));
  }
  out.model = PairwiseModel(tags.size(), std::move(models), std::move(omitted));
  return out;
}

TagDecision predict_pairwise(const PairwiseModel& model, const FeatureVector& x,
                             AllowedTags allowed) {
  const std::size_t n = model.num_tags();
  std::vector<double> votes(n, 0.0), margin_sum(n, 0.0);
  bool any = false;
  for (const auto& [pair, binary] : model.models()) {
    if (!is_allowed(allowed, pair.positive) || !is_allowed(allowed, pair.negative))
      continue;
    const auto p = predict_binary(binary, x);
    const TagId winner = p.label == 1 ? pair.positive : pair.negative;
    votes[winner] += 1.0;
    margin_sum[winner] += std::abs(p.margin);
    any = true;
  }
  TagDecision d;
  if (!any) {
    d.provenance = Provenance::kFallback;
    d.tag = allowed.empty() ? 0 : allowed.front();
    return d;
  }
  d.provenance = Provenance::kLearner;
  std::optional<TagId> best;
  for (TagId t = 0; t < n; ++t) {
    if (!is_allowed(allowed, t)) continue;
    if (!best || votes[t] > votes[*best] ||
        (votes[t] == votes[*best] && margin_sum[t] > margin_sum[*best]))
      best = t;
  }
  d.tag = *best;
  d.scores = std::move(votes);
  return d;
}

}  // namespace seqtag
