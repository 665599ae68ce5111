#include <doctest.h>

#include <numeric>
#include <random>

#include "profiler/analysis.hpp"

using namespace profiler;

namespace {

constexpr auto N = ExpertiseLevel::Novice;
constexpr auto B = ExpertiseLevel::Basic;
constexpr auto A = ExpertiseLevel::Advanced;
constexpr auto E = ExpertiseLevel::Expert;

SessionState session(const std::string& domain, ExpertiseLevel self, std::vector<ExpertiseLevel> history,
                     SessionStatus status = SessionStatus::Finished) {
  SessionState s;
  s.session_id = "s";
  s.domain = domain;
  s.self_evaluation = self;
  s.status = status;
  for (std::size_t i = 0; i < history.size(); ++i) {
    s.estimate_history.push_back(EstimateEntry{static_cast<int>(i) + 1, "q" + std::to_string(i), B, history[i]});
  }
  return s;
}

ProfileResult result(const std::string& domain, std::optional<ExpertiseLevel> level,
                     std::optional<ExpertiseLevel> self) {
  ProfileResult r;
  r.domain = domain;
  r.level = level;
  if (!level) r.evidence_gate = EvidenceGate::TooFewResponses;
  r.self_evaluation = self;
  return r;
}

// Hand-computed fixture: sessions 1-5 in security, 6-10 in privacy.
struct Expected {
  SessionState s;
  std::optional<int> stability, within_one, exact;
  bool no_widening;
};

std::vector<Expected> fixture() {
  return {
      {session("security", A, {B, A, A, A, A}), 2, 1, 2, true},
      {session("security", A, {A, A, A, A, A}), 1, 1, 1, true},
      {session("security", E, {N, B, A, E, E}), 4, 3, 4, true},
      {session("security", B, {N, N, B, A, B}), 5, 1, 3, true},
      {session("security", E, {B, E, A, E, A}), std::nullopt, 2, 2, true},
      {session("privacy", N, {B, N, A, E, E}), std::nullopt, 1, 2, false},
      {session("privacy", E, {N, N, N, N, N}), std::nullopt, std::nullopt, std::nullopt, true},
      {session("privacy", B, {B, B, B, B, A}), std::nullopt, 1, 1, true},
      {session("privacy", N, {N, B, N, B, N}), 5, 1, 1, true},
      {session("privacy", A, {E, A, E, A, A}), 4, 1, 2, true},
  };
}

std::vector<SessionState> fixture_sessions() {
  std::vector<SessionState> out;
  for (const auto& e : fixture()) out.push_back(e.s);
  return out;
}

}  // namespace

TEST_CASE("agreement buckets") {
  CHECK(agreement_bucket(0) == 0);
  CHECK(agreement_bucket(1) == 1);
  CHECK(agreement_bucket(3) == 3);
  CHECK(agreement_bucket(-1) == 4);
  CHECK(agreement_bucket(-3) == 6);
  CHECK_THROWS(agreement_bucket(4));
}

TEST_CASE("agreement table: 17 same, 2 higher by one, 1 lower by one") {
  std::vector<ProfileResult> rs;
  for (int i = 0; i < 17; ++i) rs.push_back(result("security", A, A));
  rs.push_back(result("security", E, A));
  rs.push_back(result("security", B, N));
  rs.push_back(result("security", N, B));
  rs.push_back(result("security", std::nullopt, A));  // insufficient evidence
  rs.push_back(result("security", A, std::nullopt));  // no self-evaluation
  const auto table = agreement_table(rs);
  REQUIRE(table.size() == 1);
  const auto& row = table[0];
  CHECK(row.compared == 20);
  CHECK(row.excluded == 2);
  CHECK(row.percent == std::array<int, 7>{85, 10, 0, 0, 5, 0, 0});
  CHECK(row.counts == std::array<std::size_t, 7>{17, 2, 0, 0, 1, 0, 0});
  CHECK(row.fraction(0) == doctest::Approx(0.85));
}

TEST_CASE("agreement table edge cases") {
  std::vector<ProfileResult> same(5, result("privacy", B, B));
  CHECK(agreement_table(same)[0].percent == std::array<int, 7>{100, 0, 0, 0, 0, 0, 0});

  const std::vector<ProfileResult> h3 = {result("privacy", E, N)};
  CHECK(agreement_table(h3)[0].counts[3] == 1);

  CHECK(agreement_table(std::vector<ProfileResult>{}).empty());

  const std::vector<ProfileResult> two = {result("b", A, A), result("a", A, B)};
  const auto t = agreement_table(two);
  REQUIRE(t.size() == 2);
  CHECK(t[0].domain == "a");
}

TEST_CASE("integer percentages sum to 100 and stay within one of the exact share") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> c(0, 40);
  for (int trial = 0; trial < 2000; ++trial) {
    std::array<std::size_t, 7> counts{};
    for (auto& x : counts) x = trial % 3 == 0 && c(rng) < 20 ? 0 : c(rng);
    const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    const auto pct = integer_percentages(counts);
    if (total == 0) {
      CHECK(pct == std::array<int, 7>{});
      continue;
    }
    CHECK(std::accumulate(pct.begin(), pct.end(), 0) == 100);
    for (std::size_t i = 0; i < 7; ++i) {
      const double exact = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total);
      CHECK(static_cast<double>(pct[i]) > exact - 1.0);
      CHECK(static_cast<double>(pct[i]) < exact + 1.0);
    }
  }
  // three equal thirds: 33/33/34 in some order
  const auto thirds = integer_percentages({1, 1, 1, 0, 0, 0, 0});
  CHECK(thirds[0] + thirds[1] + thirds[2] == 100);
}

TEST_CASE("analyzer examples") {
  CHECK(stability_question(session("x", A, {B, A, A, A, A})) == 2);
  CHECK(stability_question(session("x", B, {B, B, B})) == 1);
  CHECK_FALSE(stability_question(session("x", B, {B, B, A})).has_value());
  CHECK_FALSE(stability_question(session("x", B, {B, B}, SessionStatus::Active)).has_value());

  CHECK(first_within_one(session("x", E, {N, B, A, E})) == 3);
  CHECK(first_within_one(session("x", B, {N})) == 1);
  CHECK_FALSE(first_within_one(session("x", E, {N, B, N})).has_value());

  CHECK(first_exact(session("x", E, {B, E, A, E})) == 2);
  CHECK(first_exact(session("x", A, {A, B})) == 1);
  CHECK_FALSE(first_exact(session("x", A, {N, B, E})).has_value());

  CHECK(no_widening_check(session("x", A, {N, B, A, E, A})));
  CHECK_FALSE(no_widening_check(session("x", A, {N, B, A, N, A})));
  CHECK(no_widening_check(session("x", E, {N, N, B})));
}

TEST_CASE("ten-session fixture") {
  for (const auto& e : fixture()) {
    CHECK(stability_question(e.s) == e.stability);
    CHECK(first_within_one(e.s) == e.within_one);
    CHECK(first_exact(e.s) == e.exact);
    CHECK(no_widening_check(e.s) == e.no_widening);
  }
}

TEST_CASE("convergence tables on the fixture") {
  const auto sessions = fixture_sessions();
  using Col = std::vector<double>;
  auto column = [](const ConvergenceTable& t, const std::string& domain) {
    const auto d = static_cast<std::size_t>(std::find(t.domains.begin(), t.domains.end(), domain) - t.domains.begin());
    Col out;
    for (const auto& row : t.cumulative_percent) out.push_back(row.at(d));
    return out;
  };

  const auto stab = convergence_table(sessions, ConvergenceMetric::Stability);
  CHECK(stab.domains == std::vector<std::string>{"privacy", "security"});
  CHECK(stab.max_question == 5);
  CHECK(stab.population == std::vector<std::size_t>{2, 4});
  CHECK(column(stab, "security") == Col{25, 50, 50, 75, 100});
  CHECK(column(stab, "privacy") == Col{0, 0, 0, 50, 100});

  const auto w1 = convergence_table(sessions, ConvergenceMetric::WithinOne);
  CHECK(w1.population == std::vector<std::size_t>{4, 5});
  CHECK(column(w1, "security") == Col{60, 80, 100, 100, 100});
  CHECK(column(w1, "privacy") == Col{100, 100, 100, 100, 100});

  const auto ex = convergence_table(sessions, ConvergenceMetric::Exact);
  CHECK(column(ex, "security") == Col{20, 60, 80, 100, 100});
  CHECK(column(ex, "privacy") == Col{50, 100, 100, 100, 100});

  for (const auto* t : {&stab, &w1, &ex}) {
    for (std::size_t d = 0; d < t->domains.size(); ++d) {
      for (std::size_t q = 1; q < t->cumulative_percent.size(); ++q) {
        CHECK(t->cumulative_percent[q][d] >= t->cumulative_percent[q - 1][d]);
      }
    }
  }

  const std::string text = render_convergence(w1);
  CHECK(text.find("first came within one level") != std::string::npos);
  // privacy reached 100 at Q1, so Q2 onwards print "-"
  const auto q2 = text.substr(text.find("\nQ2"), text.find("\nQ3") - text.find("\nQ2"));
  CHECK(q2.find('-') != std::string::npos);
  CHECK(q2.find("80") != std::string::npos);

  // active sessions are ignored
  auto with_active = sessions;
  with_active.push_back(session("security", A, {A}, SessionStatus::Active));
  CHECK(convergence_table(with_active, ConvergenceMetric::Exact).population ==
        convergence_table(sessions, ConvergenceMetric::Exact).population);
}

TEST_CASE("json renderings") {
  const std::vector<ProfileResult> rs = {result("security", A, A), result("security", B, A)};
  const auto j = agreement_to_json(agreement_table(rs));
  CHECK(j[0]["percent"]["Same"] == 50);
  CHECK(j[0]["percent"]["L1"] == 50);
  const auto c = convergence_to_json(convergence_table(fixture_sessions(), ConvergenceMetric::Exact));
  CHECK(c["metric"] == "first_exact");
  CHECK(render_agreement(agreement_table(rs)).find("security") != std::string::npos);
}
