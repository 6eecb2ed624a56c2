#pragma once

// Reference implementations used only by tests. They share no code with the
// library beyond the plain data types.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "seqtag/decision.hpp"
#include "seqtag/features.hpp"
#include "seqtag/svm.hpp"

namespace oracle {

using seqtag::FeatureId;
using seqtag::FeatureVector;
using seqtag::TagId;

inline double dot(const FeatureVector& a, const FeatureVector& b) {
  std::set<FeatureId> left(a.begin(), a.end());
  double n = 0.0;
  for (FeatureId f : b) n += static_cast<double>(left.count(f));
  return n;
}

inline double kernel(const FeatureVector& a, const FeatureVector& b, int degree) {
  return std::pow(oracle::dot(a, b) + 1.0, degree);
}

inline Eigen::MatrixXd gram(const std::vector<FeatureVector>& xs, int degree) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = oracle::kernel(xs[i], xs[j], degree);
  return k;
}

// Q_ij = y_i y_j K(x_i, x_j).
inline Eigen::MatrixXd signed_gram(const seqtag::BinaryProblem& p, int degree) {
  Eigen::MatrixXd q = gram(p.contexts, degree);
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    for (Eigen::Index j = 0; j < q.cols(); ++j) q(i, j) *= p.labels[i] * p.labels[j];
  return q;
}

inline double dual(const seqtag::BinaryProblem& p, const std::vector<double>& alpha,
                   int degree) {
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(alpha.data(),
                                                        static_cast<Eigen::Index>(alpha.size()));
  return a.sum() - 0.5 * a.dot(signed_gram(p, degree) * a);
}

struct QpOptimum {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> alpha;
};

// Exact maximum of the dual over {0 <= a <= C, y.a = 0}. The maximizer lies
// in the relative interior of some face (each a_i at 0, at C, or free), where
// it is a stationary point of the face's equality-constrained problem. Every
// face is solved and the best feasible stationary point kept.
inline QpOptimum exact_dual_max(const seqtag::BinaryProblem& p, double C, int degree) {
  const std::size_t l = p.size();
  const Eigen::MatrixXd q = signed_gram(p, degree);
  Eigen::VectorXd y(static_cast<Eigen::Index>(l));
  for (std::size_t i = 0; i < l; ++i) y(static_cast<Eigen::Index>(i)) = p.labels[i];

  QpOptimum best;
  std::size_t faces = 1;
  for (std::size_t i = 0; i < l; ++i) faces *= 3;
  for (std::size_t code = 0; code < faces; ++code) {
    std::vector<int> state(l);  // 0: at 0, 1: at C, 2: free
    std::size_t c = code;
    for (std::size_t i = 0; i < l; ++i, c /= 3) state[i] = static_cast<int>(c % 3);

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(l));
    std::vector<Eigen::Index> free;
    for (std::size_t i = 0; i < l; ++i) {
      if (state[i] == 1) alpha(static_cast<Eigen::Index>(i)) = C;
      if (state[i] == 2) free.push_back(static_cast<Eigen::Index>(i));
    }
    if (!free.empty()) {
      const auto m = static_cast<Eigen::Index>(free.size());
      // [Q_FF  y_F] [a_F]   [1 - Q_F,fixed a_fixed]
      // [y_F'   0 ] [nu ] = [   - y_fixed' a_fixed ]
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
      Eigen::VectorXd rhs(m + 1);
      const Eigen::VectorXd q_alpha = q * alpha;
      for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index s = 0; s < m; ++s) kkt(r, s) = q(free[r], free[s]);
        kkt(r, m) = y(free[r]);
        kkt(m, r) = y(free[r]);
        rhs(r) = 1.0 - q_alpha(free[r]);
      }
      rhs(m) = -y.dot(alpha);
      Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      if ((kkt * sol - rhs).norm() > 1e-8) continue;  // inconsistent face
      for (Eigen::Index r = 0; r < m; ++r) alpha(free[r]) = sol(r);
    }
    bool feasible = std::abs(y.dot(alpha)) <= 1e-9;
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
      if (alpha(i) < -1e-12 || alpha(i) > C + 1e-12) feasible = false;
    if (!feasible) continue;
    const double value = alpha.sum() - 0.5 * alpha.dot(q * alpha);
    if (value > best.value) {
      best.value = value;
      best.alpha.assign(alpha.data(), alpha.data() + alpha.size());
    }
  }
  return best;
}

// Grid cells per coordinate for a literal grid search; the search visits
// cells^(l-1) points, the last coordinate being fixed by y.a = 0.
inline std::size_t grid_points(std::size_t l, double C, double step) {
  const double cells = std::round(C / step) + 1.0;
  return static_cast<std::size_t>(std::pow(cells, static_cast<double>(l - 1)));
}

// Maximum of the dual over grid points a_i = k_i * step inside the feasible
// region. Integer grid coordinates keep the equality constraint exact.
inline double grid_dual_max(const seqtag::BinaryProblem& p, double C, int degree,
                            double step = 0.01) {
  const std::size_t l = p.size();
  const auto k_max = static_cast<long>(std::llround(C / step));
  const Eigen::MatrixXd q = signed_gram(p, degree);
  std::vector<long> k(l, 0);
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd alpha(static_cast<Eigen::Index>(l));
  while (true) {
    long signed_sum = 0;
    for (std::size_t i = 0; i + 1 < l; ++i) signed_sum += p.labels[i] * k[i];
    const long last = -p.labels[l - 1] * signed_sum;
    if (last >= 0 && last <= k_max) {
      k[l - 1] = last;
      for (std::size_t i = 0; i < l; ++i)
        alpha(static_cast<Eigen::Index>(i)) = static_cast<double>(k[i]) * step;
      best = std::max(best, alpha.sum() - 0.5 * alpha.dot(q * alpha));
    }
    std::size_t i = 0;
    while (i + 1 < l && ++k[i] > k_max) k[i++] = 0;
    if (i + 1 == l) break;
  }
  return best;
}

// Literal argmax over (present feature, tag) of count(f, a) / count(f),
// ties by larger count(f), then smaller feature id, then smaller tag id.
class DecisionListOracle {
 public:
  DecisionListOracle(const std::vector<seqtag::LabeledExample>& examples,
                     std::size_t min_count)
      : min_count_(min_count) {
    std::map<TagId, std::size_t> tag_counts;
    for (const auto& ex : examples) {
      ++tag_counts[ex.tag];
      for (FeatureId f : ex.features) {
        ++feature_counts_[f];
        ++pair_counts_[{f, ex.tag}];
      }
    }
    std::size_t best = 0;
    for (auto [tag, n] : tag_counts)
      if (n > best) {
        best = n;
        majority_ = tag;
      }
  }

  // nullopt when no rule fires.
  std::optional<TagId> rule(const FeatureVector& context,
                            seqtag::AllowedTags allowed) const {
    std::optional<TagId> winner;
    double best_score = -1.0;
    std::size_t best_count = 0;
    FeatureId best_feature = 0;
    for (FeatureId f : context) {
      auto fc = feature_counts_.find(f);
      if (fc == feature_counts_.end()) continue;
      for (const auto& [key, n] : pair_counts_) {
        if (key.first != f || n < min_count_ || !seqtag::is_allowed(allowed, key.second))
          continue;
        const double score = static_cast<double>(n) / static_cast<double>(fc->second);
        bool better = !winner;
        if (!better) {
          if (score != best_score)
            better = score > best_score;
          else if (fc->second != best_count)
            better = fc->second > best_count;
          else if (f != best_feature)
            better = f < best_feature;
          else
            better = key.second < *winner;
        }
        if (better) {
          winner = key.second;
          best_score = score;
          best_count = fc->second;
          best_feature = f;
        }
      }
    }
    return winner;
  }

  TagId predict(const FeatureVector& context, seqtag::AllowedTags allowed) const {
    if (auto r = rule(context, allowed)) return *r;
    if (seqtag::is_allowed(allowed, majority_)) return majority_;
    return allowed.front();
  }

  TagId majority() const { return majority_; }

 private:
  std::size_t min_count_;
  std::map<FeatureId, std::size_t> feature_counts_;
  std::map<std::pair<FeatureId, TagId>, std::size_t> pair_counts_;
  TagId majority_ = 0;
};

// p(a | x) from the stored weights, computed without the model's own scoring.
template <typename Model>
std::vector<double> maxent_conditional(const Model& model, const FeatureVector& x) {
  std::vector<double> s(model.num_tags(), 0.0);
  for (TagId a = 0; a < s.size(); ++a)
    for (FeatureId f : x) s[a] += model.weight(f, a);
  const double top = *std::max_element(s.begin(), s.end());
  double z = 0.0;
  for (auto& v : s) z += (v = std::exp(v - top));
  for (auto& v : s) v /= z;
  return s;
}

// Max over (feature seen in examples, tag) of |empirical - model| expectation.
template <typename Model>
double maxent_residual(const Model& model, const std::vector<seqtag::LabeledExample>& examples) {
  std::map<std::pair<FeatureId, TagId>, double> empirical, expected;
  std::set<FeatureId> seen;
  for (const auto& ex : examples) {
    const auto p = maxent_conditional(model, ex.features);
    for (FeatureId f : ex.features) {
      seen.insert(f);
      empirical[{f, ex.tag}] += 1.0;
      for (TagId a = 0; a < p.size(); ++a) expected[{f, a}] += p[a];
    }
  }
  double worst = 0.0;
  const double n = static_cast<double>(examples.size());
  for (FeatureId f : seen)
    for (TagId a = 0; a < model.num_tags(); ++a)
      worst = std::max(worst, std::abs(empirical[{f, a}] - expected[{f, a}]) / n);
  return worst;
}

// Random sparse binary vector over [0, universe).
inline FeatureVector random_vector(std::mt19937_64& rng, FeatureId universe, double density) {
  std::bernoulli_distribution on(density);
  std::vector<FeatureId> ids;
  for (FeatureId f = 0; f < universe; ++f)
    if (on(rng)) ids.push_back(f);
  return FeatureVector(std::move(ids));
}

}  // namespace oracle
