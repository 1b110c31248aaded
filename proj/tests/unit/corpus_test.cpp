#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "viewshift/corpus.hpp"
#include "viewshift/evaluator.hpp"
#include "viewshift/resolver.hpp"
#include "viewshift/script.hpp"
#include "viewshift/terms.hpp"

using namespace viewshift;
using namespace viewshift::testing;

namespace {

std::vector<std::string> module_names(const Project& p) {
  std::vector<std::string> out;
  for (const auto& [name, m] : p.modules) out.push_back(name);
  return out;
}

}  // namespace

TEST(Fixtures, Pfun) {
  const Fixture f = load_fixture("pfun");
  EXPECT_EQ(module_names(f.project("pfun")), (std::vector<std::string>{"Client", "EvalMod", "Expr", "ToStringMod"}));
}

TEST(Fixtures, Pdata) {
  const Fixture f = load_fixture("pdata");
  EXPECT_EQ(module_names(f.project("pdata")), (std::vector<std::string>{"AddMod", "Client", "ConstMod", "Expr"}));
  EXPECT_TRUE(f.project("pdata").modules.at("Expr").find_fun("fold1"));
}

TEST(Fixtures, StepStatesHasElevenProjects) {
  const Fixture f = load_fixture("step-states");
  EXPECT_EQ(f.projects.size(), 11u);
  EXPECT_EQ(step_boundaries().size(), 11u);
}

TEST(Fixtures, EveryFixtureLoads) {
  for (const auto& name : fixture_names()) {
    const Fixture f = load_fixture(name);
    EXPECT_FALSE(f.files.empty()) << name;
    for (const auto& [label, p] : f.projects) EXPECT_NO_THROW(resolve_project(p)) << name << "/" << label;
  }
  EXPECT_THROW(load_fixture("nope"), std::invalid_argument);
}

TEST(Fixtures, ScriptsParse) {
  EXPECT_FALSE(load_fixture("forward-script").script("forward").steps.empty());
  EXPECT_FALSE(load_fixture("reverse-script").script("reverse").steps.empty());
  EXPECT_FALSE(load_fixture("scenario-mult").script("to-function").steps.empty());
}

TEST(Fixtures, ObservationsMatchExpectations) {
  for (const auto& name : {"pfun", "pdata"}) {
    const Fixture f = load_fixture(name);
    std::vector<std::string> entries;
    for (const auto& [e, text] : f.observations) entries.push_back(e);
    EXPECT_EQ(observe_entries(f.project(name), entries), f.observations) << name;
  }
  for (const auto& name : {"scenario-mult", "scenario-derive"}) {
    const Fixture f = load_fixture(name);
    std::vector<std::string> entries;
    for (const auto& [e, text] : f.observations) entries.push_back(e);
    EXPECT_EQ(observe_entries(f.project("start"), entries), f.observations) << name;
    EXPECT_EQ(observe_entries(f.project("expected"), entries), f.observations) << name;
  }
}

TEST(Fixtures, PfunAndPdataAgree) {
  EXPECT_TRUE(observational_eq(load_fixture("pfun").project("pfun"), load_fixture("pdata").project("pdata"),
                               standard_entries())
                  .equivalent);
}

TEST(Fixtures, StepStatesMatchForwardPrefix) {
  const Project pfun = load_fixture("pfun").project("pfun");
  const Script forward = load_fixture("forward-script").script("forward");
  const Fixture states = load_fixture("step-states");
  for (const auto& [label, steps] : step_boundaries()) {
    Script prefix{forward.name, {forward.steps.begin(), forward.steps.begin() + static_cast<std::ptrdiff_t>(steps)}};
    const RunResult r = run_script(pfun, prefix);
    ASSERT_TRUE(r.log.ok()) << r.log.summary();
    EXPECT_TRUE(alpha_eq_project(r.project, states.project(label)))
        << label << ": " << alpha_diff_project(r.project, states.project(label));
  }
}
