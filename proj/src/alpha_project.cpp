#include <algorithm>
#include <set>

#include "viewshift/errors.hpp"
#include "viewshift/resolver.hpp"
#include "viewshift/terms.hpp"

namespace viewshift {
namespace {

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::set<std::string> export_set(const Module& m) {
  if (m.exports) return as_set(*m.exports);
  std::set<std::string> all;
  for (const auto& d : m.decls) all.insert(d.name());
  return all;
}

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : ", ") + x;
  return "{" + out + "}";
}

std::string diff_pinned(const Project& a, const Project& b) {
  std::set<std::string> names_a;
  std::set<std::string> names_b;
  for (const auto& [n, m] : a.modules) names_a.insert(n);
  for (const auto& [n, m] : b.modules) names_b.insert(n);
  if (names_a != names_b) return "module sets differ: " + join(names_a) + " vs " + join(names_b);

  for (const auto& [name, ma] : a.modules) {
    const Module& mb = b.modules.at(name);
    if (export_set(ma) != export_set(mb))
      return name + ": exports differ: " + join(export_set(ma)) + " vs " + join(export_set(mb));
    if (as_set(ma.imports) != as_set(mb.imports))
      return name + ": imports differ: " + join(as_set(ma.imports)) + " vs " + join(as_set(mb.imports));
    if (ma.decls.size() != mb.decls.size()) return name + ": declaration counts differ";
    for (const auto& da : ma.decls) {
      const TopDecl* db = nullptr;
      for (const auto& d : mb.decls)
        if (d.is_fun() == da.is_fun() && d.name() == da.name()) db = &d;
      if (!db) return name + ": " + da.name() + " missing from second project";
      if (da.is_data()) {
        if (da.data() != db->data()) return name + ": data " + da.name() + " differs";
      } else if (!alpha_eq(da.fun(), db->fun())) {
        return name + ": " + da.name() + " differs";
      }
    }
  }
  return {};
}

}  // namespace

std::string alpha_diff_project(const Project& a, const Project& b) {
  Project pa;
  Project pb;
  try {
    pa = pin(a);
    resolve_project(a);
  } catch (const ResolveError& e) {
    return std::string("first project does not resolve: ") + e.what();
  }
  try {
    pb = pin(b);
    resolve_project(b);
  } catch (const ResolveError& e) {
    return std::string("second project does not resolve: ") + e.what();
  }
  return diff_pinned(pa, pb);
}

bool alpha_eq_project(const Project& a, const Project& b) { return alpha_diff_project(a, b).empty(); }

}  // namespace viewshift
