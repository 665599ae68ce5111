#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "profiler/core_model.hpp"

namespace profiler {

enum class EntryKind : std::uint8_t { Term, GoldFact, KnownError };

std::string_view to_string(EntryKind k);
EntryKind entry_kind_from_string(std::string_view s);

struct LexiconEntry {
  std::string canonical;
  std::vector<std::string> aliases;
  EntryKind kind = EntryKind::Term;
  std::string note;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

/// Per-domain vocabulary: terms for terminology matching, gold facts that
/// justify a boost, and known errors that justify a penalty.
///
/// Canonical terms and aliases are stored in normalized form. Construction
/// validates that canonicals are non-empty and unique, that no alias maps to
/// two different canonicals, and that no rewriting alias occurs inside a
/// canonical term (which would make normalization non-idempotent).
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::string domain, std::vector<LexiconEntry> entries);

  const std::string& domain() const { return domain_; }
  const std::vector<LexiconEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  struct Rewrite {
    std::string pattern;
    std::string canonical;
  };
  /// Alias and canonical patterns, longest first.
  const std::vector<Rewrite>& rewrites() const { return rewrites_; }

 private:
  std::string domain_;
  std::vector<LexiconEntry> entries_;
  std::vector<Rewrite> rewrites_;
};

/// Reads a lexicon document: {"domain", "entries": [{"canonical", "aliases", "kind", "note"}]}.
Lexicon load_lexicon(const std::filesystem::path& path);
Lexicon parse_lexicon(std::string_view json_text, const std::string& source_name);

/// Unicode compatibility normalization with case folding, then whitespace collapse.
std::string fold_text(std::string_view raw);

/// fold_text plus alias substitution (longest match first, word-boundary anchored).
std::string normalize(std::string_view raw, const Lexicon& lexicon);

struct FactHit {
  std::string canonical;
  EntryKind kind = EntryKind::GoldFact;

  friend bool operator==(const FactHit&, const FactHit&) = default;
  friend auto operator<=>(const FactHit&, const FactHit&) = default;
};

struct Segment {
  std::string text;
  std::size_t index = 0;
  std::vector<std::string> term_hits;
  std::vector<FactHit> fact_hits;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct SegmenterConfig {
  std::vector<std::string> abbreviations = {"e.g.", "i.e.", "etc.", "vs.", "cf.", "approx.",
                                            "mr.", "mrs.", "ms.", "dr.", "prof.", "no.",
                                            "fig.", "u.s."};
};

/// Splits normalized text on sentence-final punctuation followed by a space
/// or end of text; a single '.' ending a listed abbreviation is not a boundary.
std::vector<Segment> segment(std::string_view normalized, const SegmenterConfig& config = {});

/// Fills term_hits / fact_hits with all whole-word canonical matches, sorted.
std::vector<Segment> annotate(std::vector<Segment> segments, const Lexicon& lexicon);

/// True if `pattern` occurs in `text` at `pos` with word boundaries on both sides.
bool matches_at(std::string_view text, std::size_t pos, std::string_view pattern);
/// Whole-word occurrence count of `pattern` in `text` (non-overlapping).
std::size_t count_occurrences(std::string_view text, std::string_view pattern);

}  // namespace profiler
