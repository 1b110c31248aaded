#include "precondition_cases.hpp"

#include "fixtures.hpp"
#include "viewshift/corpus.hpp"

namespace viewshift::testing {

namespace {

using K = RefactorErrorKind;

}  // namespace

std::vector<RefusalCase> refusal_cases() {
  const Project kLibUse = project_of({
      "module Lib (f) where\n\nf x = x\n",
      "module Use where\n\nimport Lib\n\nh y = f y\n",
  });

  const Project kShadow = project_of({"module M where\n\nf x = g\n    where\n        g = x\n\ng = 1\n"});

  const Project kPartial = project_of({"module M where\n\nf x y = x + y\n\ng = f 1\n"});

  const Project kNoFold = project_of({
      "module M where\n\ndata T = A | B\n\nh t = case t of { A -> 1; B -> 2 }\n\n-- g x = h x\ng x = h x\n",
  });

  const Project kStaleComment = project_of({
      "module M where\n\ndata T = A | B\n\nh t = case t of { A -> 1; B -> 2 }\n\n-- g x = h x + 1\ng x = h x\n",
  });

  const Project kCaseOnSum = project_of({"module M where\n\nf x = case x + 1 of { 1 -> 0; _ -> 1 }\n"});

  const Project kTwoFolds = project_of({
      "module M where\n\nf a b = a + b\n\ng a b = a * b\n",
  });

  const Project kUnresolved = project_of({"module M where\n\nf = g\n"});
  const auto pfun = load_fixture("pfun").project("pfun");
  const auto pdata = load_fixture("pdata").project("pdata");
  const auto states = load_fixture("step-states");
  const auto& s01 = states.project("01");
  const auto& s03 = states.project("03");
  const auto& s05 = states.project("05");
  const auto& s07 = states.project("07");
  const auto& s10 = states.project("10");

  return {
      {"exhibit-function on a constructor without equation", K::NotFound, pfun,
       [](const Project& p) { return exhibit_function(p, "eval", "Mult", "x", "EvalMod"); }},
      {"exhibit-function onto a pattern variable", K::NameClash, pfun,
       [](const Project& p) { return exhibit_function(p, "eval", "Add", "e1", "EvalMod"); }},
      {"new-def-fun-app with zero arguments", K::NotApplicable, s05,
       [](const Project& p) { return new_def_fun_app(p, "fold1", 0, "eval", "Client"); }},
      {"new-def-fun-app without such application", K::NoSuchApplication, s05,
       [](const Project& p) { return new_def_fun_app(p, "fold1", 99, "eval", "Client"); }},
      {"new-def-fun-app onto a name used in the declaration", K::NameClash, s05,
       [](const Project& p) { return new_def_fun_app(p, "fold1", 3, "eval_gen", "Client"); }},
      {"generalise a missing local", K::NotFound, s01,
       [](const Project& p) {
         return generalise(p, "eval", "Const", "nope", "EvalMod", 1, "x", ArgShape::Curried,
                           GeneraliseMode::OtherType);
       }},
      {"generalise a recursive call that is absent", K::NotApplicable, s01,
       [](const Project& p) {
         return generalise(p, "eval", "Const", "evalConst", "EvalMod", 1, "x", ArgShape::Curried,
                           GeneraliseMode::RecType);
       }},
      {"generalise onto a used parameter name", K::NameClash, s01,
       [](const Project& p) {
         return generalise(p, "eval", "Add", "evalAdd", "EvalMod", 1, "e2", ArgShape::Tupled, GeneraliseMode::RecType);
       }},
      {"generalise-ident of a name that does not occur", K::NotFound, s03,
       [](const Project& p) { return generalise_ident(p, "evalConst", "EvalMod", "evalAdd", "z"); }},
      {"generalise-ident onto a used name", K::NameClash, s03,
       [](const Project& p) { return generalise_ident(p, "eval", "EvalMod", "evalConst", "i"); }},
      {"lift a missing local", K::NotFound, s01, [](const Project& p) { return lift_to_top(p, "eval", "nope", "EvalMod"); }},
      {"lift onto an existing top-level name", K::NameClash, kShadow,
       [](const Project& p) { return lift_to_top(p, "f", "g", "M"); }},
      {"rename a missing definition", K::NotFound, pfun,
       [](const Project& p) { return rename_top_level(p, "nope", "EvalMod", "x"); }},
      {"rename onto a top-level name of the module", K::NameClash, s03,
       [](const Project& p) { return rename_top_level(p, "evalAdd", "EvalMod", "evalConst"); }},
      {"rename onto a name bound in an importing module", K::NameClash, kLibUse,
       [](const Project& p) { return rename_top_level(p, "f", "Lib", "y"); }},
      {"move onto a module defining the name", K::NameClash, pdata,
       [](const Project& p) { return move_def(p, "eval", "ConstMod", "AddMod"); }},
      {"move a missing definition", K::NotFound, pfun, [](const Project& p) { return move_def(p, "nope", "EvalMod", "X"); }},
      {"move creating an import cycle", K::ImportCycle, pfun,
       [](const Project& p) { return move_def(p, "r2", "Client", "EvalMod"); }},
      {"unfold a name that does not occur", K::NotFound, pfun,
       [](const Project& p) { return unfold_instance(p, "e2", "r2", "Client"); }},
      {"unfold a partial application", K::NotApplicable, kPartial,
       [](const Project& p) { return unfold_instance(p, "f", "g", "M"); }},
      {"fold without any instance", K::NotApplicable, s07, [](const Project& p) { return fold_top_level(p, "eval", "Client"); }},
      {"fold a missing definition", K::NotFound, pfun, [](const Project& p) { return fold_top_level(p, "nope", "Client"); }},
      {"generative fold without comment", K::NotFound, pdata,
       [](const Project& p) { return generative_fold(p, "fold1", 3, "Client"); }},
      {"generative fold with nothing to fold", K::NotApplicable, kNoFold,
       [](const Project& p) { return generative_fold(p, "h", 1, "M"); }},
      {"generative fold against a stale comment", K::PreconditionFailed, kStaleComment,
       [](const Project& p) { return generative_fold(p, "h", 1, "M"); }},
      {"remove a used definition", K::StillUsed, pfun, [](const Project& p) { return remove_def(p, "eval", "EvalMod"); }},
      {"remove a missing definition", K::NotFound, pfun, [](const Project& p) { return remove_def(p, "nope", "EvalMod"); }},
      {"remove a used local", K::StillUsed, s01,
       [](const Project& p) { return remove_local_def(p, "evalConst", "eval", "EvalMod"); }},
      {"remove a missing local", K::NotFound, s01,
       [](const Project& p) { return remove_local_def(p, "nope", "eval", "EvalMod"); }},
      {"clean imports of a missing module", K::NotFound, pfun, [](const Project& p) { return clean_imports(p, "Nope"); }},
      {"unexport a name used elsewhere", K::StillUsed, kLibUse, [](const Project& p) { return rm_from_exports(p, "f", "Lib"); }},
      {"unexport without export list", K::NotFound, pfun,
       [](const Project& p) { return rm_from_exports(p, "eval", "EvalMod"); }},
      {"simplify a declaration without case", K::NotApplicable, pfun,
       [](const Project& p) { return simplify_case_pattern(p, "eval", "EvalMod"); }},
      {"case-to-eq on a computed scrutinee", K::NotApplicable, kCaseOnSum,
       [](const Project& p) { return case_to_eq(p, "f", "M", 1); }},
      {"duplicate a missing declaration", K::NotFound, pfun,
       [](const Project& p) { return duplicate_into_comment(p, "nope", "EvalMod"); }},
      {"remove a missing comment", K::NotFound, pfun,
       [](const Project& p) { return rm_comment_before(p, "eval", "EvalMod"); }},
      {"unify a definition with itself", K::NotFound, pdata,
       [](const Project& p) { return unify_alpha(p, "fold1", "fold1", "Expr"); }},
      {"unify different definitions", K::PreconditionFailed, kTwoFolds,
       [](const Project& p) { return unify_alpha(p, "f", "g", "M"); }},
      {"remove a module that still declares", K::NotApplicable, pfun,
       [](const Project& p) { return remove_module(p, "EvalMod"); }},
      {"remove an imported module", K::StillUsed, s10, [](const Project& p) { return remove_module(p, "EvalMod"); }},
      {"remove a missing module", K::NotFound, pfun, [](const Project& p) { return remove_module(p, "Nope"); }},
      {"operate on an unresolved project", K::PreconditionFailed, kUnresolved,
       [](const Project& p) { return duplicate_into_comment(p, "f", "M"); }},
  };
}

}  // namespace viewshift::testing
