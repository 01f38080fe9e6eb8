#include "perturbench/perturb/resources.hpp"

#include <gtest/gtest.h>

#include "perturbench/error.hpp"

namespace perturbench {
namespace {

TEST(KeyboardLayout, BundledTableIsSymmetricAndCoversLetters) {
  const auto& kb = KeyboardLayout::bundled();
  EXPECT_TRUE(kb.is_symmetric());
  for (char c = 'a'; c <= 'z'; ++c) EXPECT_TRUE(kb.contains(c)) << c;
  EXPECT_TRUE(kb.contains('A'));
  EXPECT_FALSE(kb.contains('1'));
  EXPECT_EQ(kb.neighbors('a'), "qwszx");
  EXPECT_EQ(kb.neighbors('Q'), "was");
}

TEST(KeyboardLayout, RejectsMalformedLines) {
  EXPECT_THROW(KeyboardLayout::parse("ab\tcd\n"), ParseError);
  EXPECT_THROW(KeyboardLayout::parse("a\n"), ParseError);
  EXPECT_NO_THROW(KeyboardLayout::parse("# comment\na\tb\nb\ta\n"));
}

TEST(SynonymLexicon, BundledLexiconInvariants) {
  const auto& lex = SynonymLexicon::bundled();
  EXPECT_GE(lex.size(), 300u);
  for (const auto& [word, synonyms] : lex.entries()) {
    ASSERT_FALSE(synonyms.empty()) << word;
    for (const auto& s : synonyms) EXPECT_NE(s, word);
  }
  ASSERT_NE(lex.find("List"), nullptr);
  EXPECT_EQ(lex.find("list")->front(), "array");
}

TEST(SynonymLexicon, RejectsSelfMapsAndPhrases) {
  EXPECT_THROW(SynonymLexicon::parse("list\tarray,list\n"), ParseError);
  EXPECT_THROW(SynonymLexicon::parse("list\tan array\n"), ParseError);
  EXPECT_THROW(SynonymLexicon(std::map<std::string, std::vector<std::string>>{{"Sort", {"sort"}}}), ParseError);
}

// Hand-checked list of at least twenty regular and irregular verbs.
TEST(VerbTable, ConjugationOracle) {
  struct Case {
    const char* base;
    const char* third;
    const char* past;
    const char* gerund;
  };
  const Case cases[] = {
      {"return", "returns", "returned", "returning"},
      {"check", "checks", "checked", "checking"},
      {"contain", "contains", "contained", "containing"},
      {"sort", "sorts", "sorted", "sorting"},
      {"compute", "computes", "computed", "computing"},
      {"stop", "stops", "stopped", "stopping"},
      {"try", "tries", "tried", "trying"},
      {"pass", "passes", "passed", "passing"},
      {"fix", "fixes", "fixed", "fixing"},
      {"reach", "reaches", "reached", "reaching"},
      {"push", "pushes", "pushed", "pushing"},
      {"die", "dies", "died", "dying"},
      {"see", "sees", "saw", "seeing"},
      {"play", "plays", "played", "playing"},
      {"go", "goes", "went", "going"},
      {"do", "does", "did", "doing"},
      {"have", "has", "had", "having"},
      {"find", "finds", "found", "finding"},
      {"write", "writes", "wrote", "writing"},
      {"split", "splits", "split", "splitting"},
      {"occur", "occurs", "occurred", "occurring"},
      {"make", "makes", "made", "making"},
      {"get", "gets", "got", "getting"},
      {"take", "takes", "took", "taking"},
  };
  const auto& verbs = VerbTable::bundled();
  for (const auto& c : cases) {
    const auto f = verbs.conjugate(c.base);
    EXPECT_EQ(f.third_person, c.third) << c.base;
    EXPECT_EQ(f.past, c.past) << c.base;
    EXPECT_EQ(f.gerund, c.gerund) << c.base;
  }
  EXPECT_EQ(verbs.conjugate("be").past, "was");
}

TEST(VerbTable, BaseOfInvertsConjugation) {
  const auto& verbs = VerbTable::bundled();
  for (const char* base : {"return", "check", "stop", "try", "compute", "go", "write", "have"}) {
    const auto f = verbs.conjugate(base);
    EXPECT_EQ(verbs.base_of(f.third_person), base);
    EXPECT_EQ(verbs.base_of(f.past), base);
    EXPECT_EQ(verbs.base_of(f.gerund), base);
  }
  EXPECT_EQ(verbs.base_of("is"), "be");
  EXPECT_EQ(verbs.base_of("string"), "string");
}

TEST(VerbTable, PresentForms) {
  const auto& verbs = VerbTable::bundled();
  ASSERT_TRUE(verbs.present_form("contains"));
  EXPECT_EQ(verbs.present_form("contains")->past, "contained");
  ASSERT_TRUE(verbs.present_form("is"));
  EXPECT_EQ(verbs.present_form("is")->past, "was");
  ASSERT_TRUE(verbs.present_form("are"));
  EXPECT_EQ(verbs.present_form("are")->past, "were");
  EXPECT_FALSE(verbs.present_form("list"));
  EXPECT_FALSE(verbs.present_form("returned"));
}

TEST(Inflect, SuffixRules) {
  EXPECT_EQ(inflect::third_person("box"), "boxes");
  EXPECT_EQ(inflect::third_person("carry"), "carries");
  EXPECT_EQ(inflect::third_person("stay"), "stays");
  EXPECT_EQ(inflect::past("bake"), "baked");
  EXPECT_EQ(inflect::past("plan"), "planned");
  EXPECT_EQ(inflect::past("open"), "opened");
  EXPECT_EQ(inflect::gerund("lie"), "lying");
  EXPECT_EQ(inflect::gerund("agree"), "agreeing");
  EXPECT_EQ(inflect::gerund("run"), "running");
}

}  // namespace
}  // namespace perturbench
