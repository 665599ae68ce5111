#include "profiler/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>

namespace profiler {
namespace {

int distance(const EstimateEntry& e, ExpertiseLevel self) {
  return std::abs(ordinal(e.estimate) - ordinal(self));
}

std::string pad(const std::string& s, std::size_t width, bool right = false) {
  if (s.size() >= width) return s;
  return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

std::string_view metric_name(ConvergenceMetric m) {
  switch (m) {
    case ConvergenceMetric::Stability: return "stable_match";
    case ConvergenceMetric::WithinOne: return "first_within_one";
    case ConvergenceMetric::Exact: return "first_exact";
  }
  return "";
}

std::string_view metric_title(ConvergenceMetric m) {
  switch (m) {
    case ConvergenceMetric::Stability:
      return "Question at which the estimate matched the self-evaluation and never changed (%)";
    case ConvergenceMetric::WithinOne:
      return "Question at which the estimate first came within one level of the self-evaluation (%)";
    case ConvergenceMetric::Exact:
      return "Question at which the estimate first matched the self-evaluation (%)";
  }
  return "";
}

}  // namespace

std::size_t agreement_bucket(int diff) {
  if (diff < -3 || diff > 3) throw ValidationError("level difference out of range");
  if (diff == 0) return 0;
  return diff > 0 ? static_cast<std::size_t>(diff) : static_cast<std::size_t>(3 - diff);
}

double AgreementRow::fraction(std::size_t bucket) const {
  return compared == 0 ? 0.0 : static_cast<double>(counts[bucket]) / static_cast<double>(compared);
}

std::array<int, 7> integer_percentages(const std::array<std::size_t, 7>& counts) {
  std::array<int, 7> pct{};
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) return pct;
  std::array<std::size_t, 7> remainder{};
  int assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    pct[i] = static_cast<int>(counts[i] * 100 / total);
    remainder[i] = counts[i] * 100 % total;
    assigned += pct[i];
  }
  std::array<std::size_t, 7> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < 100; ++k) {
    ++pct[order[k]];
    ++assigned;
  }
  return pct;
}

std::vector<AgreementRow> agreement_table(std::span<const ProfileResult> results) {
  std::map<std::string, AgreementRow> rows;
  for (const auto& r : results) {
    AgreementRow& row = rows[r.domain];
    row.domain = r.domain;
    if (!r.level || !r.self_evaluation) {
      ++row.excluded;
      continue;
    }
    ++row.compared;
    ++row.counts[agreement_bucket(ordinal(*r.level) - ordinal(*r.self_evaluation))];
  }
  std::vector<AgreementRow> out;
  for (auto& [_, row] : rows) {
    row.percent = integer_percentages(row.counts);
    out.push_back(row);
  }
  return out;
}

std::optional<int> stability_question(const SessionState& s) {
  if (s.status != SessionStatus::Finished || s.estimate_history.empty()) return std::nullopt;
  if (s.estimate_history.back().estimate != s.self_evaluation) return std::nullopt;
  std::size_t k = s.estimate_history.size();
  while (k > 0 && s.estimate_history[k - 1].estimate == s.self_evaluation) --k;
  return static_cast<int>(k) + 1;
}

std::optional<int> first_within_one(const SessionState& s) {
  for (std::size_t i = 0; i < s.estimate_history.size(); ++i) {
    if (distance(s.estimate_history[i], s.self_evaluation) <= 1) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

std::optional<int> first_exact(const SessionState& s) {
  for (std::size_t i = 0; i < s.estimate_history.size(); ++i) {
    if (s.estimate_history[i].estimate == s.self_evaluation) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

bool no_widening_check(const SessionState& s) {
  const auto entered = first_within_one(s);
  if (!entered) return true;
  for (std::size_t i = static_cast<std::size_t>(*entered) - 1; i < s.estimate_history.size(); ++i) {
    if (distance(s.estimate_history[i], s.self_evaluation) > 1) return false;
  }
  return true;
}

ConvergenceTable convergence_table(std::span<const SessionState> sessions, ConvergenceMetric metric) {
  ConvergenceTable t;
  t.metric = metric;
  std::map<std::string, std::vector<int>> values;
  for (const auto& s : sessions) {
    if (s.status != SessionStatus::Finished) continue;
    t.max_question = std::max(t.max_question, static_cast<int>(s.estimate_history.size()));
    auto& v = values[s.domain];
    std::optional<int> q;
    switch (metric) {
      case ConvergenceMetric::Stability: q = stability_question(s); break;
      case ConvergenceMetric::WithinOne: q = first_within_one(s); break;
      case ConvergenceMetric::Exact: q = first_exact(s); break;
    }
    if (q) v.push_back(*q);
  }
  for (const auto& [domain, v] : values) {
    t.domains.push_back(domain);
    t.population.push_back(v.size());
  }
  for (int q = 1; q <= t.max_question; ++q) {
    std::vector<double> row;
    for (const auto& domain : t.domains) {
      const auto& v = values[domain];
      const auto reached = std::count_if(v.begin(), v.end(), [q](int x) { return x <= q; });
      row.push_back(v.empty() ? 0.0 : 100.0 * static_cast<double>(reached) / static_cast<double>(v.size()));
    }
    t.cumulative_percent.push_back(std::move(row));
  }
  return t;
}

std::string render_agreement(const std::vector<AgreementRow>& rows) {
  std::ostringstream out;
  out << "Profiler vs. self-evaluation (%)\n";
  out << pad("Domain", 16);
  for (const char* c : kAgreementColumns) out << pad(c, 6, true);
  out << pad("n", 6, true) << pad("excl", 6, true) << "\n";
  for (const auto& r : rows) {
    out << pad(r.domain, 16);
    for (int p : r.percent) out << pad(std::to_string(p), 6, true);
    out << pad(std::to_string(r.compared), 6, true) << pad(std::to_string(r.excluded), 6, true) << "\n";
  }
  return out.str();
}

std::string render_convergence(const ConvergenceTable& t) {
  std::ostringstream out;
  out << metric_title(t.metric) << "\n";
  out << pad("Question", 10);
  for (const auto& d : t.domains) out << pad(d, std::max<std::size_t>(d.size() + 2, 10), true);
  out << "\n";
  for (int q = 1; q <= t.max_question; ++q) {
    out << pad("Q" + std::to_string(q), 10);
    for (std::size_t d = 0; d < t.domains.size(); ++d) {
      const double pct = t.cumulative_percent[static_cast<std::size_t>(q - 1)][d];
      const bool done_before = q > 1 && t.cumulative_percent[static_cast<std::size_t>(q - 2)][d] >= 100.0;
      std::string cell = done_before ? "-" : std::to_string(static_cast<int>(std::lround(pct)));
      out << pad(cell, std::max<std::size_t>(t.domains[d].size() + 2, 10), true);
    }
    out << "\n";
  }
  out << pad("n", 10);
  for (std::size_t d = 0; d < t.domains.size(); ++d) {
    out << pad(std::to_string(t.population[d]), std::max<std::size_t>(t.domains[d].size() + 2, 10), true);
  }
  out << "\n";
  return out.str();
}

nlohmann::ordered_json agreement_to_json(const std::vector<AgreementRow>& rows) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["domain"] = r.domain;
    row["compared"] = r.compared;
    row["excluded"] = r.excluded;
    for (std::size_t i = 0; i < kAgreementColumns.size(); ++i) {
      row["percent"][kAgreementColumns[i]] = r.percent[i];
    }
    for (std::size_t i = 0; i < kAgreementColumns.size(); ++i) {
      row["counts"][kAgreementColumns[i]] = r.counts[i];
    }
    for (std::size_t i = 0; i < kAgreementColumns.size(); ++i) {
      row["fraction"][kAgreementColumns[i]] = r.fraction(i);
    }
    out.push_back(std::move(row));
  }
  return out;
}

nlohmann::ordered_json convergence_to_json(const ConvergenceTable& t) {
  nlohmann::ordered_json out;
  out["metric"] = metric_name(t.metric);
  out["domains"] = t.domains;
  out["population"] = t.population;
  out["cumulative_percent"] = nlohmann::ordered_json::array();
  for (int q = 1; q <= t.max_question; ++q) {
    nlohmann::ordered_json row;
    row["question"] = q;
    for (std::size_t d = 0; d < t.domains.size(); ++d) {
      row[t.domains[d]] = t.cumulative_percent[static_cast<std::size_t>(q - 1)][d];
    }
    out["cumulative_percent"].push_back(std::move(row));
  }
  return out;
}

}  // namespace profiler
