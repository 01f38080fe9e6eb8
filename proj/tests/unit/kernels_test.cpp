#include "perturbench/perturb/kernels.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "perturbench/error.hpp"
#include "perturbench/perturb/translate.hpp"
#include "test_util.hpp"

namespace perturbench {
namespace {

const SynonymLexicon& toy_lexicon() {
  static const SynonymLexicon lex(std::map<std::string, std::vector<std::string>>{{"list", {"array", "sequence"}}, {"sort", {"order"}}, {"a", {"x"}}});
  return lex;
}

TEST(CaseFlip, Examples) {
  EXPECT_EQ(apply_case_flip("Hello", {0}), "hello");
  EXPECT_EQ(apply_case_flip("abc", {}), "abc");
  EXPECT_EQ(apply_case_flip("a1B", {0, 2}), "A1b");
}

TEST(CaseFlip, RejectsIneligiblePositions) {
  EXPECT_THROW(apply_case_flip("a1B", {1}), PerturbError);
  EXPECT_THROW(apply_case_flip("abc", {3}), PerturbError);
  try {
    apply_case_flip("a b", {1});
    FAIL();
  } catch (const PerturbError& e) {
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
  }
}

TEST(CaseFlip, IsAnInvolution) {
  testing::Gen gen(1);
  for (int i = 0; i < 200; ++i) {
    const auto text = gen.sentence();
    std::set<std::size_t> positions;
    for (std::size_t p = 0; p < text.size(); ++p) {
      if (is_cased_letter(text[p]) && gen.coin()) positions.insert(p);
    }
    EXPECT_EQ(apply_case_flip(apply_case_flip(text, positions), positions), text);
  }
}

TEST(AdjacentSwap, Examples) {
  EXPECT_EQ(apply_adjacent_swap("world", 2), "wolrd");
  EXPECT_EQ(apply_adjacent_swap("ab", 0), "ba");
  EXPECT_EQ(apply_adjacent_swap(apply_adjacent_swap("world", 1), 1), "world");
  EXPECT_THROW(apply_adjacent_swap("ab cd", 1), PerturbError);
  EXPECT_THROW(apply_adjacent_swap("ab", 1), PerturbError);
  EXPECT_THROW(apply_adjacent_swap("ab", 7), PerturbError);
}

TEST(Typo, SubstituteAndInsertUseTableOrder) {
  // 'a' neighbors are listed q, w, s, z, x in the bundled table.
  EXPECT_EQ(apply_typo("cat", 1, TypoMode::kSubstitute, 0), "cqt");
  EXPECT_EQ(apply_typo("cat", 1, TypoMode::kInsert, 0), "caqt");
  EXPECT_EQ(apply_typo("cAt", 1, TypoMode::kSubstitute, 1), "cWt");
  const auto& kb = KeyboardLayout::bundled();
  for (std::size_t rank = 0; rank < kb.neighbors('a').size(); ++rank) {
    const auto out = apply_typo("cat", 1, TypoMode::kSubstitute, rank);
    EXPECT_NE(kb.neighbors('a').find(out[1]), std::string_view::npos);
  }
}

TEST(Typo, SubstituteBackViaReverseEntry) {
  const auto& kb = KeyboardLayout::bundled();
  const auto typo = apply_typo("cat", 1, TypoMode::kSubstitute, 2);  // 'a' -> 's'
  const auto back_rank = kb.neighbors(typo[1]).find('a');
  ASSERT_NE(back_rank, std::string_view::npos);
  EXPECT_EQ(apply_typo(typo, 1, TypoMode::kSubstitute, back_rank), "cat");
}

TEST(Typo, Errors) {
  EXPECT_THROW(apply_typo("c1t", 1, TypoMode::kSubstitute, 0), PerturbError);
  EXPECT_THROW(apply_typo("cat", 1, TypoMode::kSubstitute, 5), PerturbError);
  EXPECT_THROW(apply_typo("cat", 9, TypoMode::kInsert, 0), PerturbError);
}

TEST(SynonymSubstitute, Examples) {
  EXPECT_EQ(apply_synonym_substitute("sort the list", 2, toy_lexicon(), 0), "sort the array");
  EXPECT_EQ(apply_synonym_substitute("Sort the list", 0, toy_lexicon(), 0), "Order the list");
  EXPECT_EQ(apply_synonym_substitute("LIST it", 0, toy_lexicon(), 1), "SEQUENCE it");
  try {
    apply_synonym_substitute("sort the list", 1, toy_lexicon(), 0);
    FAIL();
  } catch (const PerturbError& e) {
    EXPECT_NE(std::string(e.what()).find("not substitutable"), std::string::npos);
  }
  EXPECT_THROW(apply_synonym_substitute("sort the list", 2, toy_lexicon(), 2), PerturbError);
}

TEST(SynonymInsert, Examples) {
  EXPECT_EQ(apply_synonym_insert("sort the list", 2, toy_lexicon(), 0), "sort the list array");
  EXPECT_EQ(apply_synonym_insert("a b", 0, toy_lexicon(), 0), "a x b");
  const std::string text = "sort the list, then return it";
  const auto out = apply_synonym_insert(text, 2, toy_lexicon(), 1);
  EXPECT_EQ(out, "sort the list sequence, then return it");
  // Deleting the inserted token restores the original.
  std::string restored = out;
  restored.erase(out.find(" sequence"), std::string(" sequence").size());
  EXPECT_EQ(restored, text);
}

TEST(Inflection, Examples) {
  EXPECT_EQ(apply_inflection("return the value", 0, Inflection::kThirdPersonOrPlural),
            "returns the value");
  EXPECT_EQ(apply_inflection("check", 0, Inflection::kEd), "checked");
  EXPECT_EQ(apply_inflection("is", 0, Inflection::kEd), "was");
  EXPECT_EQ(apply_inflection("Sorting keys", 0, Inflection::kStrip), "Sort keys");
  EXPECT_EQ(apply_inflection("checked", 0, Inflection::kEd), "checked");
  EXPECT_THROW(apply_inflection("x2 y", 0, Inflection::kEd), PerturbError);
}

TEST(TenseTransform, Examples) {
  EXPECT_EQ(apply_tense_transform("Check if the list contains duplicates", Tense::kPast),
            "Checked if the list contained duplicates");
  EXPECT_EQ(apply_tense_transform("returns x", Tense::kFuture), "will return x");
  EXPECT_EQ(apply_tense_transform("the blue sky", Tense::kPast), "the blue sky");
  EXPECT_EQ(apply_tense_transform("It is sorted", Tense::kPast), "It was sorted");
  EXPECT_EQ(apply_tense_transform("Write a function to check it", Tense::kFuture),
            "Will write a function to check it");
}

class FailingTranslator final : public TranslationProvider {
 public:
  TranslationResult round_trip(std::string_view) override {
    throw ProviderError("translation backend unreachable", "connect-failed");
  }
};

TEST(BackTranslate, Providers) {
  IdentityTranslator identity;
  EXPECT_EQ(back_translate("Sort the list", identity).text, "Sort the list");

  // Dictionary pivot equals chained substitution on every entry-bearing word.
  DictionaryPivotTranslator pivot(toy_lexicon());
  std::string expected = "Sort the list";
  expected = apply_synonym_substitute(expected, 0, toy_lexicon(), 0);
  expected = apply_synonym_substitute(expected, 2, toy_lexicon(), 0);
  const auto result = back_translate("Sort the list", pivot);
  EXPECT_EQ(result.text, expected);
  EXPECT_FALSE(result.metadata.empty());

  FailingTranslator failing;
  try {
    back_translate("Sort the list", failing);
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.status(), "connect-failed");
  }
}

}  // namespace
}  // namespace perturbench
