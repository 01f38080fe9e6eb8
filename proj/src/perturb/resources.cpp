#include "perturbench/perturb/resources.hpp"

#include <algorithm>
#include <cctype>

#include "../bundled_data.hpp"
#include "perturbench/error.hpp"

namespace perturbench {
namespace {

template <typename Fn>
void for_each_data_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos < text.size();) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    fn(line, line_no);
  }
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto at = s.find(sep, start);
    out.push_back(s.substr(start, at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

bool is_alpha_word(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalpha(c) != 0;
  });
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool ends_with_consonant_y(std::string_view w) {
  return w.size() >= 2 && w.back() == 'y' && !is_vowel(w[w.size() - 2]);
}

// Single-syllable consonant-vowel-consonant endings double the final
// consonant before a vowel suffix (stop -> stopped).
bool doubles_final_consonant(std::string_view w) {
  if (w.size() < 3) return false;
  const char last = w.back();
  if (is_vowel(last) || last == 'w' || last == 'x' || last == 'y') return false;
  if (!is_vowel(w[w.size() - 2]) || is_vowel(w[w.size() - 3])) return false;
  int groups = 0;
  bool in_group = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  return groups == 1;
}

}  // namespace

namespace inflect {

std::string third_person(std::string_view base) {
  std::string w(base);
  if (w.ends_with("s") || w.ends_with("x") || w.ends_with("z") ||
      w.ends_with("ch") || w.ends_with("sh") || w.ends_with("o")) {
    return w + "es";
  }
  if (ends_with_consonant_y(w)) return w.substr(0, w.size() - 1) + "ies";
  return w + "s";
}

std::string past(std::string_view base) {
  std::string w(base);
  if (w.ends_with("e")) return w + "d";
  if (ends_with_consonant_y(w)) return w.substr(0, w.size() - 1) + "ied";
  if (doubles_final_consonant(w)) return w + w.back() + "ed";
  return w + "ed";
}

std::string gerund(std::string_view base) {
  std::string w(base);
  if (w.ends_with("ie")) return w.substr(0, w.size() - 2) + "ying";
  if (w.size() > 2 && w.ends_with("e") && !w.ends_with("ee") &&
      !w.ends_with("ye") && !w.ends_with("oe")) {
    return w.substr(0, w.size() - 1) + "ing";
  }
  if (doubles_final_consonant(w)) return w + w.back() + "ing";
  return w + "ing";
}

}  // namespace inflect

// ---------------------------------------------------------------------------
// KeyboardLayout

KeyboardLayout KeyboardLayout::parse(std::string_view text) {
  KeyboardLayout layout;
  for_each_data_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split(line, '\t');
    if (fields.size() != 2 || fields[0].size() != 1 ||
        !is_alpha_word(fields[0]) || !is_alpha_word(fields[1])) {
      throw ParseError("keyboard entry must be <key>\\t<neighbors>", line_no);
    }
    layout.table_[static_cast<char>(std::tolower(fields[0][0]))] =
        lower(fields[1]);
  });
  return layout;
}

const KeyboardLayout& KeyboardLayout::bundled() {
  static const KeyboardLayout layout = parse(bundled::keyboard_qwerty());
  return layout;
}

std::string_view KeyboardLayout::neighbors(char letter) const {
  const auto it =
      table_.find(static_cast<char>(std::tolower(static_cast<unsigned char>(letter))));
  return it == table_.end() ? std::string_view{} : std::string_view(it->second);
}

bool KeyboardLayout::contains(char letter) const {
  return !neighbors(letter).empty();
}

bool KeyboardLayout::is_symmetric() const {
  for (const auto& [key, around] : table_) {
    for (char n : around) {
      if (neighbors(n).find(key) == std::string_view::npos) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// SynonymLexicon

SynonymLexicon::SynonymLexicon(
    std::map<std::string, std::vector<std::string>> entries) {
  for (auto& [word, synonyms] : entries) {
    auto key = lower(word);
    for (const auto& s : synonyms) {
      if (lower(s) == key) throw ParseError("\"" + key + "\" maps to itself");
    }
    entries_.emplace(std::move(key), std::move(synonyms));
  }
}

SynonymLexicon SynonymLexicon::parse(std::string_view text) {
  std::map<std::string, std::vector<std::string>> entries;
  for_each_data_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split(line, '\t');
    if (fields.size() != 2 || !is_alpha_word(fields[0])) {
      throw ParseError("lexicon entry must be <word>\\t<syn>,<syn>,...",
                       line_no);
    }
    const auto word = lower(fields[0]);
    auto& synonyms = entries[word];
    for (auto s : split(fields[1], ',')) {
      if (s.empty()) continue;
      if (!std::all_of(s.begin(), s.end(), [](unsigned char c) {
            return std::isalnum(c) != 0 || c == '_';
          })) {
        throw ParseError("synonym \"" + std::string(s) + "\" is not a single word",
                         line_no);
      }
      if (lower(s) == word) {
        throw ParseError("\"" + word + "\" maps to itself", line_no);
      }
      synonyms.emplace_back(s);
    }
    if (synonyms.empty()) {
      throw ParseError("\"" + word + "\" has no synonyms", line_no);
    }
  });
  return SynonymLexicon(std::move(entries));
}

const SynonymLexicon& SynonymLexicon::bundled() {
  static const SynonymLexicon lexicon = parse(bundled::synonyms());
  return lexicon;
}

const std::vector<std::string>* SynonymLexicon::find(std::string_view word) const {
  const auto it = entries_.find(lower(word));
  return it == entries_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// VerbTable

VerbTable VerbTable::parse(std::string_view text) {
  VerbTable table;
  for_each_data_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split(line, '\t');
    for (auto f : fields) {
      if (f != "-" && !is_alpha_word(f) && !(f.starts_with('=') && is_alpha_word(f.substr(1)))) {
        throw ParseError("verb entry holds a non-alphabetic field", line_no);
      }
    }
    if (fields[0].starts_with('=')) {
      if (fields.size() != 3) {
        throw ParseError("extra form entry must be =<form>\\t<base>\\t<past>",
                         line_no);
      }
      const auto form = lower(fields[0].substr(1));
      table.extra_present_[form] = {lower(fields[1]), lower(fields[2])};
      table.form_to_base_[form] = lower(fields[1]);
      return;
    }
    const auto base = lower(fields[0]);
    if (fields.size() == 1) {
      table.regular_[base] = base;
      return;
    }
    if (fields.size() != 5) {
      throw ParseError("verb entry must have 1 or 5 fields", line_no);
    }
    auto pick = [&](std::size_t i, std::string rule) {
      return fields[i] == "-" ? rule : lower(fields[i]);
    };
    VerbForms forms{base, pick(1, inflect::past(base)),
                    pick(2, inflect::third_person(base)),
                    pick(3, inflect::past(base)), pick(4, inflect::gerund(base))};
    for (const auto* f : {&forms.past, &forms.third_person, &forms.participle,
                          &forms.gerund}) {
      table.form_to_base_.emplace(*f, base);
    }
    table.irregular_[base] = std::move(forms);
  });
  return table;
}

const VerbTable& VerbTable::bundled() {
  static const VerbTable table = parse(bundled::verbs());
  return table;
}

VerbForms VerbTable::conjugate(std::string_view base) const {
  const auto key = lower(base);
  if (const auto it = irregular_.find(key); it != irregular_.end()) {
    return it->second;
  }
  return {key, inflect::past(key), inflect::third_person(key),
          inflect::past(key), inflect::gerund(key)};
}

bool VerbTable::is_known_base(std::string_view base) const {
  return irregular_.contains(base) || regular_.contains(base);
}

namespace {

std::string strip_unlisted(const std::string& w) {
  const auto n = w.size();
  if (n > 4 && w.ends_with("ies")) return w.substr(0, n - 3) + "y";
  if (n > 4 && (w.ends_with("sses") || w.ends_with("ches") ||
                w.ends_with("shes") || w.ends_with("xes") || w.ends_with("zes"))) {
    return w.substr(0, n - 2);
  }
  if (n > 3 && w.ends_with("s") && !w.ends_with("ss") && !w.ends_with("us") &&
      !w.ends_with("is")) {
    return w.substr(0, n - 1);
  }
  if (n > 4 && w.ends_with("ied")) return w.substr(0, n - 3) + "y";
  if (n > 4 && w.ends_with("ed")) {
    auto stem = w.substr(0, n - 2);
    if (stem.size() >= 2 && stem.back() == stem[stem.size() - 2] &&
        !is_vowel(stem.back()) && stem.back() != 'l' && stem.back() != 's') {
      stem.pop_back();
    }
    return stem;
  }
  if (n > 5 && w.ends_with("ing")) {
    auto stem = w.substr(0, n - 3);
    if (stem.size() >= 2 && stem.back() == stem[stem.size() - 2] &&
        !is_vowel(stem.back()) && stem.back() != 'l' && stem.back() != 's') {
      stem.pop_back();
    }
    return stem;
  }
  return w;
}

}  // namespace

std::string VerbTable::base_of(std::string_view word) const {
  const std::string w = lower(word);
  if (is_known_base(w)) return w;
  if (const auto it = form_to_base_.find(w); it != form_to_base_.end()) {
    return it->second;
  }

  // Candidates in rule order; the first listed verb whose forms reproduce
  // `w` wins.
  std::vector<std::string> candidates;
  auto strip = [&](std::string_view suffix, std::string_view add = {}) {
    if (w.size() > suffix.size() + 1 && w.ends_with(suffix)) {
      candidates.push_back(w.substr(0, w.size() - suffix.size()) + std::string(add));
    }
  };
  auto undouble = [&](std::string_view suffix) {
    const auto n = w.size();
    if (n > suffix.size() + 2 && w.ends_with(suffix) &&
        w[n - suffix.size() - 1] == w[n - suffix.size() - 2]) {
      candidates.push_back(w.substr(0, n - suffix.size() - 1));
    }
  };
  strip("ies", "y");
  strip("es");
  strip("s");
  strip("ied", "y");
  undouble("ed");
  strip("ed");
  strip("d");
  strip("ying", "ie");
  undouble("ing");
  strip("ing");
  strip("ing", "e");
  for (const auto& c : candidates) {
    if (!is_known_base(c)) continue;
    const auto f = conjugate(c);
    if (f.third_person == w || f.past == w || f.participle == w || f.gerund == w) {
      return c;
    }
  }

  // Unlisted word: undo the most specific suffix rule that applies, unless
  // that leaves no vowel ("string" is not "str" + "ing").
  const auto stem = strip_unlisted(w);
  return std::any_of(stem.begin(), stem.end(), [](char c) { return is_vowel(c) || c == 'y'; })
             ? stem
             : w;
}

std::optional<VerbTable::PresentForm> VerbTable::present_form(
    std::string_view word) const {
  const std::string w = lower(word);
  if (const auto it = extra_present_.find(w); it != extra_present_.end()) {
    return it->second;
  }
  if (w != "be" && is_known_base(w)) return PresentForm{w, conjugate(w).past};
  const auto base = base_of(w);
  if (base != w && is_known_base(base)) {
    const auto forms = conjugate(base);
    if (forms.third_person == w) return PresentForm{base, forms.past};
  }
  return std::nullopt;
}

}  // namespace perturbench
