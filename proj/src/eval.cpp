#include "seqtag/eval.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "seqtag/error.hpp"

namespace seqtag {

std::optional<double> Counts::precision() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(total);
}

Metrics evaluate(const TaggerBundle& bundle, const Corpus& test) {
  Metrics m;
  for (const auto& sentence : test) {
    for (const auto& token : sentence.tokens)
      if (!token.tag)
        throw Error(ErrorCode::kMissingGoldTags,
                    "evaluation token '" + token.word + "' has no gold tag");
    const auto decisions = tag_sentence(bundle, sentence);
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      const auto& token = sentence.tokens[i];
      const auto& predicted = bundle.tags.name(decisions[i].tag);
      const bool ok = predicted == *token.tag;
      const auto* candidates = bundle.lexicon.find(token.word);
      Counts& scope = candidates == nullptr      ? m.unknown
                      : candidates->size() > 1 ? m.ambiguous
                                               : m.unambiguous;
      ++scope.total;
      ++m.all.total;
      if (ok) {
        ++scope.correct;
        ++m.all.correct;
      }
      ++m.confusion[{*token.tag, predicted}];
    }
  }
  return m;
}

std::string feature_config_label(const FeatureConfig& config) {
  std::string label = "w" + std::to_string(config.window) + ":";
  std::string groups;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!groups.empty()) groups += '+';
    groups += name;
  };
  add(config.use_pos, "pos");
  add(config.use_pos_order, "order");
  add(config.use_word, "word");
  return label + groups;
}

ComparisonReport run_comparison(const Corpus& training, const Corpus& test,
                                std::span<const Method> methods,
                                std::span<const FeatureConfig> feature_configs,
                                const LearnerConfig& learner) {
  ComparisonReport report;
  for (const auto& features : feature_configs) {
    for (Method method : methods) {
      const auto start = std::chrono::steady_clock::now();
      auto trained = train_tagger(training, method, features, learner);
      ComparisonRow row;
      row.method = method;
      row.features = feature_config_label(features);
      row.metrics = evaluate(trained.bundle, test);
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

namespace {

std::string percent(const std::optional<double>& p) {
  if (!p) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", *p * 100.0);
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool right) {
  if (s.size() >= width) return s;
  return right ? std::string(width - s.size(), ' ') + s
               : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string render_table(const ComparisonReport& report, bool with_timing) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"Method", "Features", "Ambiguous", "All words", "Ambiguous (n)"});
  if (with_timing) cells.front().push_back("Seconds");
  for (const auto& row : report.rows) {
    const auto& m = row.metrics;
    std::vector<std::string> r = {
        method_name(row.method), row.features, percent(m.ambiguous_precision()),
        percent(m.all_words_precision()),
        std::to_string(m.ambiguous.correct) + "/" + std::to_string(m.ambiguous.total)};
    if (with_timing) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.2f", row.seconds);
      r.push_back(buf);
    }
    cells.push_back(std::move(r));
  }
  std::vector<std::size_t> widths(cells.front().size(), 0);
  for (const auto& r : cells)
    for (std::size_t c = 0; c < r.size(); ++c) widths[c] = std::max(widths[c], r[c].size());
  std::ostringstream out;
  auto rule = [&] {
    for (std::size_t c = 0; c < widths.size(); ++c)
      out << (c ? "-+-" : "") << std::string(widths[c], '-');
    out << '\n';
  };
  for (std::size_t k = 0; k < cells.size(); ++k) {
    for (std::size_t c = 0; c < cells[k].size(); ++c)
      out << (c ? " | " : "") << pad(cells[k][c], widths[c], c >= 2);
    out << '\n';
    if (k == 0) rule();
  }
  return out.str();
}

std::string render_records(const ComparisonReport& report, bool with_timing) {
  std::ostringstream out;
  auto precision = [](const std::optional<double>& p) -> nlohmann::ordered_json {
    if (!p) return nullptr;
    return *p;
  };
  for (const auto& row : report.rows) {
    const auto& m = row.metrics;
    nlohmann::ordered_json j;
    j["method"] = method_name(row.method);
    j["features"] = row.features;
    j["ambiguous_precision"] = precision(m.ambiguous_precision());
    j["all_words_precision"] = precision(m.all_words_precision());
    j["ambiguous_correct"] = m.ambiguous.correct;
    j["ambiguous_total"] = m.ambiguous.total;
    j["unambiguous_correct"] = m.unambiguous.correct;
    j["unambiguous_total"] = m.unambiguous.total;
    j["unknown_correct"] = m.unknown.correct;
    j["unknown_total"] = m.unknown.total;
    j["all_correct"] = m.all.correct;
    j["all_total"] = m.all.total;
    if (with_timing) j["seconds"] = row.seconds;
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace seqtag
