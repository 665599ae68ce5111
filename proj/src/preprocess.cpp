#include "profiler/preprocess.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace profiler {
namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c == '_' || c >= 0x80;
}

bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_space_byte(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += ch;
  }
  return out;
}

const icu::Normalizer2& nfkc_casefold() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFKCCasefoldInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error(std::string("ICU NFKC_Casefold unavailable: ") + u_errorName(status));
  }
  return *n;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

}  // namespace

std::string_view to_string(EntryKind k) {
  switch (k) {
    case EntryKind::Term: return "term";
    case EntryKind::GoldFact: return "gold_fact";
    case EntryKind::KnownError: return "known_error";
  }
  return "term";
}

EntryKind entry_kind_from_string(std::string_view s) {
  if (s == "term") return EntryKind::Term;
  if (s == "gold_fact") return EntryKind::GoldFact;
  if (s == "known_error") return EntryKind::KnownError;
  throw ValidationError("unknown lexicon entry kind '" + std::string(s) + "'");
}

std::string fold_text(std::string_view raw) {
  if (raw.empty()) return {};
  const icu::UnicodeString input =
      icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString folded = nfkc_casefold().normalize(input, status);
  if (U_FAILURE(status)) {
    throw Error(std::string("unicode normalization failed: ") + u_errorName(status));
  }
  std::string utf8;
  folded.toUTF8String(utf8);
  return collapse_whitespace(utf8);
}

bool matches_at(std::string_view text, std::size_t pos, std::string_view pattern) {
  if (pattern.empty() || pos + pattern.size() > text.size()) return false;
  if (text.compare(pos, pattern.size(), pattern) != 0) return false;
  const auto first = static_cast<unsigned char>(pattern.front());
  const auto last = static_cast<unsigned char>(pattern.back());
  if (is_word_byte(first) && pos > 0 && is_word_byte(static_cast<unsigned char>(text[pos - 1]))) {
    return false;
  }
  const std::size_t end = pos + pattern.size();
  if (is_word_byte(last) && end < text.size() && is_word_byte(static_cast<unsigned char>(text[end]))) {
    return false;
  }
  return true;
}

std::size_t count_occurrences(std::string_view text, std::string_view pattern) {
  if (pattern.empty()) return 0;
  std::size_t count = 0;
  std::size_t pos = text.find(pattern);
  while (pos != std::string_view::npos) {
    if (matches_at(text, pos, pattern)) {
      ++count;
      pos = text.find(pattern, pos + pattern.size());
    } else {
      pos = text.find(pattern, pos + 1);
    }
  }
  return count;
}

Lexicon::Lexicon(std::string domain, std::vector<LexiconEntry> entries)
    : domain_(std::move(domain)) {
  std::map<std::string, std::string> pattern_to_canonical;
  std::set<std::string> canonicals;
  for (auto& e : entries) {
    LexiconEntry n;
    n.canonical = fold_text(e.canonical);
    n.kind = e.kind;
    n.note = e.note;
    if (n.canonical.empty()) throw ValidationError("lexicon '" + domain_ + "': empty canonical term");
    if (!canonicals.insert(n.canonical).second) {
      throw ValidationError("lexicon '" + domain_ + "': duplicate canonical '" + n.canonical + "'");
    }
    for (const auto& alias : e.aliases) {
      std::string a = fold_text(alias);
      if (a.empty()) throw ValidationError("lexicon '" + domain_ + "': empty alias for '" + n.canonical + "'");
      if (std::find(n.aliases.begin(), n.aliases.end(), a) != n.aliases.end()) {
        throw ValidationError("lexicon '" + domain_ + "': duplicate alias '" + a + "'");
      }
      n.aliases.push_back(std::move(a));
    }
    entries_.push_back(std::move(n));
  }
  for (const auto& e : entries_) {
    auto add = [&](const std::string& pattern) {
      auto [it, inserted] = pattern_to_canonical.emplace(pattern, e.canonical);
      if (!inserted && it->second != e.canonical) {
        throw ValidationError("lexicon '" + domain_ + "': alias '" + pattern + "' maps to both '" +
                              it->second + "' and '" + e.canonical + "'");
      }
    };
    add(e.canonical);
    for (const auto& a : e.aliases) add(a);
  }
  for (const auto& [pattern, canonical] : pattern_to_canonical) {
    if (pattern == canonical) continue;
    for (const auto& c : canonicals) {
      if (count_occurrences(c, pattern) > 0) {
        throw ValidationError("lexicon '" + domain_ + "': alias '" + pattern +
                              "' occurs inside canonical term '" + c + "'");
      }
    }
  }
  for (auto& [pattern, canonical] : pattern_to_canonical) {
    rewrites_.push_back({pattern, canonical});
  }
  std::stable_sort(rewrites_.begin(), rewrites_.end(), [](const Rewrite& a, const Rewrite& b) {
    return a.pattern.size() > b.pattern.size();
  });
}

Lexicon parse_lexicon(std::string_view json_text, const std::string& source_name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source_name, line_of_offset(json_text, e.byte), e.what());
  }
  try {
    std::vector<LexiconEntry> entries;
    for (const auto& item : doc.at("entries")) {
      LexiconEntry e;
      e.canonical = item.at("canonical").get<std::string>();
      if (item.contains("aliases")) e.aliases = item.at("aliases").get<std::vector<std::string>>();
      e.kind = entry_kind_from_string(item.value("kind", std::string("term")));
      e.note = item.value("note", std::string());
      entries.push_back(std::move(e));
    }
    return Lexicon(doc.at("domain").get<std::string>(), std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source_name, 0, e.what());
  } catch (const ValidationError& e) {
    throw ParseError(source_name, 0, e.what());
  }
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read lexicon file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_lexicon(buf.str(), path.string());
}

std::string normalize(std::string_view raw, const Lexicon& lexicon) {
  const std::string folded = fold_text(raw);
  const auto& rewrites = lexicon.rewrites();
  if (rewrites.empty()) return folded;
  std::string out;
  out.reserve(folded.size());
  std::size_t i = 0;
  while (i < folded.size()) {
    bool matched = false;
    for (const auto& rw : rewrites) {
      if (matches_at(folded, i, rw.pattern)) {
        out += rw.canonical;
        i += rw.pattern.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    // Copy through to the next position where a pattern could start.
    out += folded[i++];
    while (i < folded.size() && is_word_byte(static_cast<unsigned char>(folded[i])) &&
           is_word_byte(static_cast<unsigned char>(folded[i - 1]))) {
      out += folded[i++];
    }
  }
  return collapse_whitespace(out);
}

std::vector<Segment> segment(std::string_view text, const SegmenterConfig& config) {
  std::vector<Segment> out;
  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && is_space_byte(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && is_space_byte(static_cast<unsigned char>(text[end - 1]))) --end;
    if (end > begin) {
      Segment s;
      s.text = std::string(text.substr(begin, end - begin));
      s.index = out.size();
      out.push_back(std::move(s));
    }
  };
  auto is_terminal = [](char c) { return c == '.' || c == '!' || c == '?'; };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < text.size() && is_terminal(text[run_end])) ++run_end;
    const bool at_boundary =
        run_end == text.size() || is_space_byte(static_cast<unsigned char>(text[run_end]));
    if (!at_boundary) {
      i = run_end;
      continue;
    }
    bool abbreviation = false;
    if (run_end - i == 1 && text[i] == '.') {
      std::size_t word_begin = i;
      while (word_begin > start && !is_space_byte(static_cast<unsigned char>(text[word_begin - 1]))) {
        --word_begin;
      }
      const std::string_view token = text.substr(word_begin, run_end - word_begin);
      abbreviation = std::find(config.abbreviations.begin(), config.abbreviations.end(), token) !=
                     config.abbreviations.end();
    }
    if (!abbreviation) {
      emit(start, run_end);
      start = run_end;
    }
    i = run_end;
  }
  emit(start, text.size());
  return out;
}

std::vector<Segment> annotate(std::vector<Segment> segments, const Lexicon& lexicon) {
  for (auto& seg : segments) {
    std::set<std::string> terms;
    std::set<FactHit> facts;
    for (const auto& e : lexicon.entries()) {
      if (count_occurrences(seg.text, e.canonical) == 0) continue;
      if (e.kind == EntryKind::Term) {
        terms.insert(e.canonical);
      } else {
        facts.insert(FactHit{e.canonical, e.kind});
      }
    }
    seg.term_hits.assign(terms.begin(), terms.end());
    seg.fact_hits.assign(facts.begin(), facts.end());
  }
  return segments;
}

}  // namespace profiler
