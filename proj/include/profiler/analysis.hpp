#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "profiler/core_model.hpp"

namespace profiler {

/// Buckets in display order: Same, H1, H2, H3, L1, L2, L3.
inline constexpr std::array<const char*, 7> kAgreementColumns = {"Same", "H1", "H2", "H3", "L1", "L2", "L3"};

/// Bucket index for profiler.ordinal - self.ordinal.
std::size_t agreement_bucket(int level_difference);

struct AgreementRow {
  std::string domain;
  std::size_t compared = 0;
  std::size_t excluded = 0;  // insufficient evidence or no self-evaluation
  std::array<std::size_t, 7> counts{};
  /// Integer percentages by largest remainder: each cell is the floor or
  /// ceiling of its exact share and the row sums to 100.
  std::array<int, 7> percent{};

  double fraction(std::size_t bucket) const;
};

/// One row per domain in name order; domains with nothing comparable get a
/// row with zero counts. Empty input gives an empty table.
std::vector<AgreementRow> agreement_table(std::span<const ProfileResult> results);

/// Largest-remainder integer percentages of `counts`; all zeros if total is 0.
std::array<int, 7> integer_percentages(const std::array<std::size_t, 7>& counts);

// Convergence analyzers. Question numbers are 1-based.

/// Smallest k with estimate_history[j] == self for every j >= k; nullopt unless
/// the session is finished and its last estimate equals the self-evaluation.
std::optional<int> stability_question(const SessionState& s);
/// Smallest k with |estimate_k - self| <= 1.
std::optional<int> first_within_one(const SessionState& s);
/// Smallest k with estimate_k == self.
std::optional<int> first_exact(const SessionState& s);
/// After first entering the +/-1 band the estimate never leaves it (vacuously true).
bool no_widening_check(const SessionState& s);

enum class ConvergenceMetric { Stability, WithinOne, Exact };

struct ConvergenceTable {
  ConvergenceMetric metric = ConvergenceMetric::Stability;
  std::vector<std::string> domains;
  int max_question = 0;
  std::vector<std::size_t> population;  // per domain: sessions for which the metric is defined
  /// cumulative_percent[q-1][d]: share of the domain's population whose value is <= q.
  std::vector<std::vector<double>> cumulative_percent;
};

/// Cumulative share of sessions reaching the metric by each question. Only
/// finished sessions count, and each domain's population is the sessions for
/// which the metric is defined.
ConvergenceTable convergence_table(std::span<const SessionState> sessions, ConvergenceMetric metric);

std::string render_agreement(const std::vector<AgreementRow>& rows);
/// Cells after a column has reached 100 print as "-".
std::string render_convergence(const ConvergenceTable& table);

nlohmann::ordered_json agreement_to_json(const std::vector<AgreementRow>& rows);
nlohmann::ordered_json convergence_to_json(const ConvergenceTable& table);

}  // namespace profiler
