#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "viewshift/corpus.hpp"
#include "viewshift/evaluator.hpp"
#include "viewshift/refactor.hpp"
#include "viewshift/resolver.hpp"
#include "viewshift/syntax.hpp"
#include "viewshift/terms.hpp"

using namespace viewshift;
using namespace viewshift::testing;

namespace {

const Fixture& states() {
  static const Fixture f = load_fixture("step-states");
  return f;
}
const Project& state(const std::string& label) { return states().project(label); }
const Project& pfun() {
  static const Project p = load_fixture("pfun").project("pfun");
  return p;
}
const Project& pdata() {
  static const Project p = load_fixture("pdata").project("pdata");
  return p;
}

void expect_same_behaviour(const Project& before, const Project& after) {
  EXPECT_EQ(observe_entries(before, standard_entries()), observe_entries(after, standard_entries()));
}

}  // namespace

TEST(ExhibitFunction, BothEquations) {
  const Project once = exhibit_function(pfun(), "eval", "Const", "evalConst", "EvalMod");
  EXPECT_EQ(decl_text(once, "EvalMod", "eval"),
            "eval (Const i) = evalConst\n    where\n        evalConst = i\neval (Add (e1, e2)) = eval e1 + eval e2");
  const Project twice = exhibit_function(once, "eval", "Add", "evalAdd", "EvalMod");
  EXPECT_TRUE(alpha_eq_project(twice, state("01"))) << alpha_diff_project(twice, state("01"));
  expect_same_behaviour(pfun(), twice);
}

TEST(NewDefFunApp, IntroducesLocalEval) {
  const Project out = new_def_fun_app(state("05"), "fold1", 3, "eval", "Client");
  EXPECT_EQ(decl_text(out, "Client", "r2"),
            "r2 = print (show eval)\n    where\n        eval = fold1 eval_gen_1 eval_gen e1");
  expect_same_behaviour(pfun(), out);
}

TEST(NewDefFunApp, OnlyTheFirstApplication) {
  const Project p = project_of({"module M where\n\nf x = x\n\na = f 1 + f 2\n"});
  const Project out = new_def_fun_app(p, "f", 1, "g", "M");
  EXPECT_EQ(decl_text(out, "M", "a"), "a = g + f 2\n    where\n        g = f 1");
}

TEST(Generalise, OtherTypeOnConst) {
  const Project out =
      generalise(state("01"), "eval", "Const", "evalConst", "EvalMod", 1, "x", ArgShape::Curried, GeneraliseMode::OtherType);
  EXPECT_EQ(decl_text(out, "EvalMod", "eval").substr(0, 72),
            "eval (Const i) = evalConst i\n    where\n        evalConst x = x\neval (Add");
}

TEST(Generalise, RecTypeTwiceOnAdd) {
  Project p = generalise(state("01"), "eval", "Add", "evalAdd", "EvalMod", 2, "y", ArgShape::Tupled,
                         GeneraliseMode::RecType);
  p = generalise(p, "eval", "Add", "evalAdd", "EvalMod", 1, "x", ArgShape::Tupled, GeneraliseMode::RecType);
  const std::string text = decl_text(p, "EvalMod", "eval");
  EXPECT_NE(text.find("eval (Add (e1, e2)) = evalAdd (eval e1) (eval e2)\n    where\n        evalAdd x y = x + y"),
            std::string::npos)
      << text;
  expect_same_behaviour(pfun(), p);
}

TEST(GeneraliseIdent, PaperParameterOrder) {
  Project p = generalise_ident(state("03"), "eval", "EvalMod", "evalConst", "c");
  p = generalise_ident(p, "eval", "EvalMod", "evalAdd", "a");
  EXPECT_EQ(p.modules.at("EvalMod").find_fun("eval")->equations[0].patterns.size(), 3u);
  EXPECT_EQ(render_equation("eval", p.modules.at("EvalMod").find_fun("eval")->equations[0]), "eval a c (Const i) = c i");
  EXPECT_EQ(decl_text(p, "EvalMod", "eval_gen"), "eval_gen = evalConst");
  EXPECT_EQ(decl_text(p, "EvalMod", "eval_gen_1"), "eval_gen_1 = evalAdd");
  EXPECT_EQ(decl_text(p, "Client", "r2"), "r2 = print (show (eval eval_gen_1 eval_gen e1))");
  EXPECT_TRUE(alpha_eq_project(p, state("04"))) << alpha_diff_project(p, state("04"));
}

TEST(GeneraliseIdent, NoAliasWithoutExternalCallers) {
  const Project p = project_of({"module M where\n\ng = 1\n\nf x = g + x\n\nh = f 2\n"});
  const Project out = generalise_ident(p, "f", "M", "g", "v");
  EXPECT_EQ(decl_text(out, "M", "f"), "f v x = v + x");
  EXPECT_EQ(decl_text(out, "M", "h"), "h = f g 2");
  EXPECT_FALSE(out.modules.at("M").index_of("f_gen"));
}

TEST(LiftToTop, Step3) {
  Project p = lift_to_top(state("02"), "eval", "evalConst", "EvalMod");
  p = lift_to_top(p, "eval", "evalAdd", "EvalMod");
  EXPECT_TRUE(alpha_eq_project(p, state("03"))) << alpha_diff_project(p, state("03"));
  EXPECT_EQ(decl_text(p, "EvalMod", "evalAdd"), "evalAdd x y = x + y");
}

TEST(LiftToTop, CapturedVariablesBecomeParameters) {
  const Project p = project_of({"module M where\n\nf x = g 1\n    where\n        g y = x + y\n"});
  const Project out = lift_to_top(p, "f", "g", "M");
  EXPECT_EQ(decl_text(out, "M", "f"), "f x = g x 1");
  EXPECT_EQ(decl_text(out, "M", "g"), "g x y = x + y");
}

TEST(Rename, EvalToFold1) {
  const Project out = rename_top_level(state("04"), "eval", "EvalMod", "fold1");
  EXPECT_TRUE(alpha_eq_project(out, state("05"))) << alpha_diff_project(out, state("05"));
  EXPECT_EQ(decl_text(out, "Client", "r2"), "r2 = print (show (fold1 eval_gen_1 eval_gen e1))");
}

TEST(Rename, IdentityLeavesProjectUnchanged) {
  EXPECT_EQ(rename_top_level(pfun(), "eval", "EvalMod", "eval"), pfun());
}

TEST(Rename, ClashInImportingModuleIsRefused) {
  const Project p = project_of({"module Lib where\n\nf x = x\n", "module Use where\n\nimport Lib\n\nh y = f y\n"});
  EXPECT_EQ(refusal([&] { return rename_top_level(p, "f", "Lib", "y"); }), RefactorErrorKind::NameClash);
}

TEST(Rename, TopLevelNameOfImporterIsQualified) {
  const Project p = project_of({"module Lib where\n\nf x = x\n", "module Use where\n\nimport Lib\n\ng = 2\n\nh y = f y\n"});
  const Project out = rename_top_level(p, "f", "Lib", "g");
  EXPECT_EQ(decl_text(out, "Use", "h"), "h y = Lib.g y");
  EXPECT_EQ(decl_text(out, "Use", "g"), "g = 2");
}

TEST(MoveDef, Step9And10) {
  Project p = state("08");
  p = move_def(p, "evalConst", "EvalMod", "ConstMod");
  p = rename_top_level(p, "evalConst", "ConstMod", "eval");
  p = move_def(p, "evalAdd", "EvalMod", "AddMod");
  p = rename_top_level(p, "evalAdd", "AddMod", "eval");
  EXPECT_TRUE(alpha_eq_project(p, state("09"))) << alpha_diff_project(p, state("09"));
  EXPECT_EQ(decl_text(p, "Client", "eval"), "eval x = fold1 AddMod.eval ConstMod.eval x");
  p = move_def(p, "fold1", "EvalMod", "Expr");
  EXPECT_TRUE(p.modules.at("EvalMod").decls.empty());
  EXPECT_TRUE(alpha_eq_project(p, state("10"))) << alpha_diff_project(p, state("10"));
}

TEST(MoveDef, ThereAndBackAgain) {
  const Project there = move_def(pfun(), "eval", "EvalMod", "ToStringMod");
  const Project back = clean_imports(move_def(there, "eval", "ToStringMod", "EvalMod"), "Client");
  EXPECT_TRUE(alpha_eq_project(back, pfun())) << alpha_diff_project(back, pfun());
}

TEST(UnfoldInstance, AliasIsReplaced) {
  const Project out = unfold_instance(state("07"), "eval_gen", "eval", "Client");
  EXPECT_EQ(decl_text(out, "Client", "eval"), "eval x = fold1 eval_gen_1 evalConst x");
}

TEST(UnfoldInstance, BetaReduction) {
  const Project p = project_of({"module M where\n\nid x = x\n\nf i = id i\n"});
  EXPECT_EQ(decl_text(unfold_instance(p, "id", "f", "M"), "M", "f"), "f i = i");
}

TEST(UnfoldInstance, MultiEquationBecomesTupleCase) {
  const Project p = project_of({"module M where\n\ndata T = A | B\n\ng a t = case t of { A -> a; B -> 0 }\n\n"
                                "h A = 1\nh B = 2\n\nk t = h t\n"});
  const Project out = unfold_instance(p, "h", "k", "M");
  EXPECT_EQ(decl_text(out, "M", "k"), "k t = case t of { A -> 1; B -> 2 }");
}

TEST(FoldTopLevel, Step7) {
  const Project out = fold_top_level(state("06"), "eval", "Client");
  EXPECT_EQ(decl_text(out, "Client", "r4"), "r4 = print (show (eval e2))");
  EXPECT_EQ(decl_text(out, "Client", "eval"), "eval x = fold1 eval_gen_1 eval_gen x");
  EXPECT_TRUE(alpha_eq_project(out, state("07")));
}

TEST(FoldUnfold, UnfoldAfterFoldRestores) {
  const Project folded = fold_top_level(state("06"), "eval", "Client");
  const Project unfolded = unfold_instance(folded, "eval", "r4", "Client");
  EXPECT_TRUE(alpha_eq_project(unfolded, state("06"))) << alpha_diff_project(unfolded, state("06"));
}

TEST(GenerativeFold, ProducesRecursiveCase) {
  Project p = move_def(pdata(), "eval", "Client", "EvalMod");
  p = duplicate_into_comment(p, "eval", "EvalMod");
  p = generative_fold(p, "fold1", 3, "EvalMod");
  const std::string text = decl_text(p, "EvalMod", "eval");
  // The recursive calls are qualified: ConstMod and AddMod also export an eval.
  EXPECT_EQ(text,
            "eval x = case (AddMod.eval, ConstMod.eval, x) of { (a, c, Const i) -> c i; (a, c, Add (e1, e2)) -> a "
            "(EvalMod.eval e1) (EvalMod.eval e2) }");
  expect_same_behaviour(pfun(), p);
}

TEST(RemoveDef, AfterUnfold) {
  Project p = unfold_instance(state("07"), "eval_gen", "eval", "Client");
  p = unfold_instance(p, "eval_gen_1", "eval", "Client");
  p = remove_def(p, "eval_gen", "EvalMod");
  p = remove_def(p, "eval_gen_1", "EvalMod");
  EXPECT_FALSE(p.modules.at("EvalMod").index_of("eval_gen"));
  EXPECT_TRUE(alpha_eq_project(p, state("08"))) << alpha_diff_project(p, state("08"));
}

TEST(RemoveLocalDef, ExhibitUnfoldRemoveRestores) {
  Project p = exhibit_function(pfun(), "eval", "Const", "evalConst", "EvalMod");
  p = unfold_instance(p, "evalConst", "eval", "EvalMod");
  p = remove_local_def(p, "evalConst", "eval", "EvalMod");
  EXPECT_TRUE(alpha_eq_project(p, pfun())) << alpha_diff_project(p, pfun());
}

TEST(CleanImports, Step11) {
  const Project out = clean_imports(state("10"), "Client");
  EXPECT_TRUE(alpha_eq_project(out, state("11")));
  EXPECT_EQ(clean_imports(pfun(), "Client"), pfun());
}

TEST(RmFromExports, UnusedExport) {
  const Project p = project_of({"module Lib (f, g) where\n\nf x = x\n\ng = 1\n", "module Use where\n\nimport Lib\n\nh y = f y\n"});
  const Project out = rm_from_exports(p, "g", "Lib");
  EXPECT_EQ(*out.modules.at("Lib").exports, std::vector<std::string>{"f"});
}

TEST(SimplifyCasePattern, CommonFirstPosition) {
  const Project p = project_of(
      {"module M where\n\nf e1 e2 e3 = case (e1, e2, e3) of { (y, 1, z) -> y + z; (y, _, w) -> w }\n"});
  const Project out = simplify_case_pattern(p, "f", "M");
  EXPECT_EQ(decl_text(out, "M", "f"), "f e1 e2 e3 = let y = e1 in case (e2, e3) of { (1, z) -> y + z; (_, w) -> w }");
}

TEST(SimplifyCasePattern, TwoApplicationsLeaveSingleScrutinee) {
  const Project p = project_of(
      {"module M where\n\nf p q x = case (p, q, x) of { (a, c, 0) -> c; (a, c, _) -> a }\n"});
  Project out = simplify_case_pattern(p, "f", "M");
  out = simplify_case_pattern(out, "f", "M");
  EXPECT_EQ(decl_text(out, "M", "f"), "f p q x = let a = p in let c = q in case x of { 0 -> c; _ -> a }");
  EXPECT_EQ(refusal([&] { return simplify_case_pattern(out, "f", "M"); }), RefactorErrorKind::NotApplicable);
}

TEST(SimplifyCasePattern, HoistingWouldCaptureIsRefused) {
  // let a = a would be recursive, so a scrutinee mentioning the variable is not hoisted.
  const Project p = project_of({"module M where\n\nf a x = case (a, x) of { (a, 0) -> a; (a, _) -> 1 }\n"});
  EXPECT_EQ(refusal([&] { return simplify_case_pattern(p, "f", "M"); }), RefactorErrorKind::NotApplicable);
}

TEST(CaseToEq, OneAndTwoParameters) {
  const Project p = project_of({"module M where\n\nf x = case x of { 0 -> 1; _ -> 2 }\n\n"
                                "g x y = case (x, y) of { (0, b) -> b; (a, _) -> a }\n"});
  EXPECT_EQ(decl_text(case_to_eq(p, "f", "M", 1), "M", "f"), "f 0 = 1\nf _ = 2");
  EXPECT_EQ(decl_text(case_to_eq(p, "g", "M", 2), "M", "g"), "g 0 b = b\ng a _ = a");
}

TEST(Comments, DuplicateParsesBackAndRemoveRestores) {
  const Project dup = duplicate_into_comment(pfun(), "eval", "EvalMod");
  const TopDecl& d = dup.modules.at("EvalMod").decls[0];
  std::string text;
  for (const auto& l : d.comment) text += l + "\n";
  EXPECT_TRUE(alpha_eq(parse_decl(text), d));
  EXPECT_EQ(rm_comment_before(dup, "eval", "EvalMod"), pfun());
}

TEST(UnifyAlpha, FoldCombinators) {
  const Project q = project_of({"module Expr where\n\ndata Expr = Const Int | Add (Expr, Expr)\n\n"
                                "fold1 a c (Const i) = c i\nfold1 a c (Add (e1, e2)) = a (fold1 a c e1) (fold1 a c e2)\n\n"
                                "fold2 f g (Const j) = g j\nfold2 f g (Add (x, y)) = f (fold2 f g x) (fold2 f g y)\n",
                                "module T where\n\nimport Expr\n\nk x = x\n\nt = fold2 k k (Const 1)\n"});
  const Project out = unify_alpha(q, "fold1", "fold2", "Expr");
  EXPECT_FALSE(out.modules.at("Expr").index_of("fold2"));
  EXPECT_EQ(decl_text(out, "T", "t"), "t = fold1 k k (Const 1)");
}

TEST(Operations, OutputsAlwaysResolve) {
  EXPECT_NO_THROW(resolve_project(exhibit_function(pfun(), "eval", "Const", "evalConst", "EvalMod")));
  EXPECT_NO_THROW(resolve_project(move_def(pfun(), "e1", "Client", "Data")));
}
