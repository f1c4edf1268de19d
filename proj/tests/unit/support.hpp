#pragma once

#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "proofminer/library.hpp"
#include "proofminer/recurrent.hpp"
#include "proofminer/term.hpp"

namespace testing {

namespace pm = proofminer;

inline std::string fixture_path(const std::string& name) { return std::string(PROOFMINER_FIXTURES) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture_text(const std::string& name) { return read_text(fixture_path(name)); }

inline pm::TypedLibrary load_fixture(const std::string& name) {
  return pm::resolve_types(pm::parse_library(fixture_text(name)));
}

inline const char* const kAllFixtures[] = {"running_example.json", "assoc.json", "clusters.json", "premiss.json"};

// Pre-order walk over every subterm and binder type. Name/Var annotations
// are entered only when `annotations` is set.
inline void visit(const pm::Term& t, const std::function<void(const pm::Term&)>& fn, bool annotations = false) {
  fn(t);
  auto go = [&](const pm::TermPtr& p) {
    if (p) visit(*p, fn, annotations);
  };
  if (const auto* n = t.as<pm::Name>()) {
    if (annotations) go(n->type);
  } else if (const auto* v = t.as<pm::Var>()) {
    if (annotations) go(v->type);
  } else if (const auto* f = t.as<pm::Forall>()) {
    for (const auto& b : f->binders) go(b.type);
    go(f->body);
  } else if (const auto* f = t.as<pm::Fun>()) {
    for (const auto& b : f->binders) go(b.type);
    go(f->body);
  } else if (const auto* a = t.as<pm::Arrow>()) {
    go(a->from);
    go(a->to);
  } else if (const auto* a = t.as<pm::App>()) {
    go(a->head);
    for (const auto& x : a->args) go(x);
  } else if (const auto* l = t.as<pm::Let>()) {
    go(l->type);
    go(l->value);
    go(l->body);
  } else if (const auto* f = t.as<pm::Fix>()) {
    go(f->type);
    for (const auto& b : f->binders) go(b.type);
    go(f->body);
  } else if (const auto* m = t.as<pm::Match>()) {
    for (const auto& s : m->scrutinees) go(s);
    for (const auto& br : m->branches) {
      for (const auto& p : br.patterns) go(p);
      go(br.rhs);
    }
  }
}

// forall (n : nat) (H : even n), odd (+ n 1), typed by hand.
inline pm::TermPtr running_lemma() {
  using namespace pm;
  auto set = make_sort(Sort::kSet);
  auto prop = make_sort(Sort::kProp);
  auto nat = make_name("nat", set);
  auto nat_prop = make_arrow(nat, prop);
  auto n = make_var("n", nat);
  auto even = make_name("even", nat_prop);
  auto odd = make_name("odd", nat_prop);
  auto plus = make_name("+", make_arrow(nat, make_arrow(nat, nat)));
  auto one = make_name("1", nat);
  return make_forall({{"n", nat}, {"H", make_app(even, {n})}}, make_app(odd, {make_app(plus, {n, one})}));
}

}  // namespace testing
