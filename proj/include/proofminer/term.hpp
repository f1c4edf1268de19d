#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace proofminer {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Sort ordinals are 1-based positions in {Set, Prop, Type(0), Type(1), ...}.
struct Sort {
  int ordinal;

  static constexpr int kSet = 1;
  static constexpr int kProp = 2;
  static constexpr int type(int level) { return 3 + level; }
};

// Global name. After type resolution `type` holds the (typed) statement of
// the named object and `recursive` marks references to the object being
// defined.
struct Name {
  std::string id;
  TermPtr type;
  bool recursive = false;
};

// Bound variable. `type` is filled by type resolution, or given inline for
// binding occurrences inside match patterns.
struct Var {
  std::string id;
  TermPtr type;
};

struct Binder {
  std::string var;
  TermPtr type;
};

struct Forall {
  std::vector<Binder> binders;
  TermPtr body;
};

struct Fun {
  std::vector<Binder> binders;
  TermPtr body;
};

struct Arrow {
  TermPtr from;
  TermPtr to;
};

struct App {
  TermPtr head;
  std::vector<TermPtr> args;
};

// `type` may be omitted when the value is atomic; resolution fills it in.
struct Let {
  std::string var;
  TermPtr type;
  TermPtr value;
  TermPtr body;
};

// `type` is the type of the recursive name. It defaults to the owning
// object's statement when the fix name equals the object name.
struct Fix {
  std::string name;
  TermPtr type;
  std::vector<Binder> binders;
  TermPtr body;
};

// One pattern per scrutinee.
struct Branch {
  std::vector<TermPtr> patterns;
  TermPtr rhs;
};

struct Match {
  std::vector<TermPtr> scrutinees;
  std::vector<Branch> branches;
};

struct Term {
  std::variant<Sort, Name, Var, Forall, Fun, Arrow, App, Let, Fix, Match> node;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }

  // Sorts, names and variables: the things that label term:type nodes.
  bool atomic() const { return is<Sort>() || is<Name>() || is<Var>(); }
};

TermPtr make_sort(int ordinal);
TermPtr make_name(std::string id, TermPtr type = nullptr, bool recursive = false);
TermPtr make_var(std::string id, TermPtr type = nullptr);
TermPtr make_arrow(TermPtr from, TermPtr to);

// These flatten: a Forall whose body is a Forall merges binder lists, and an
// App whose head is an App merges argument lists. Empty binder/argument lists
// throw ArityError.
TermPtr make_forall(std::vector<Binder> binders, TermPtr body);
TermPtr make_fun(std::vector<Binder> binders, TermPtr body);
TermPtr make_app(TermPtr head, std::vector<TermPtr> args);

TermPtr make_let(std::string var, TermPtr type, TermPtr value, TermPtr body);
TermPtr make_fix(std::string name, TermPtr type, std::vector<Binder> binders, TermPtr body);
TermPtr make_match(std::vector<TermPtr> scrutinees, std::vector<Branch> branches);

// Re-applies binder/application flattening everywhere in the term.
TermPtr flatten(const TermPtr& t);

// Deep structural equality. Type annotations on names/variables take part in
// the comparison.
bool equal(const Term& a, const Term& b);
bool equal(const TermPtr& a, const TermPtr& b);

// "Set", "Prop", "Type(i)".
std::string sort_name(int ordinal);
std::optional<int> parse_sort_name(const std::string& s);

// The type of a sort: Set and Prop live in Type(0), Type(i) in Type(i+1).
int sort_of_sort(int ordinal);

// Coq-like rendering, e.g. "forall (n : nat) (H : even n), odd (+ n 1)" or
// "nat -> Prop". Annotations are not printed.
std::string to_string(const Term& t);
std::string to_string(const TermPtr& t);

// Like to_string, but variables carry their type annotation and recursive
// names are marked. Used as a cache key for typed fragments.
std::string annotated_key(const Term& t);

// Free variables in first-occurrence (pre-order) order.
std::vector<std::string> free_vars(const Term& t);

}  // namespace proofminer
