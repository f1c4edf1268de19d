#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "proofminer/term.hpp"

namespace proofminer {

enum class ObjectKind { kDefinition, kFixpoint, kLemma, kTheorem };

std::string to_string(ObjectKind kind);
std::optional<ObjectKind> parse_object_kind(std::string_view s);

enum class ArgKind { kLemma, kHypothesis, kLiteral };

std::string to_string(ArgKind kind);
std::optional<ArgKind> parse_arg_kind(std::string_view s);

struct TacticArg {
  ArgKind kind;
  std::string value;

  bool operator==(const TacticArg&) const = default;
};

struct TacticStep {
  std::string tactic;
  std::vector<TacticArg> args;

  bool operator==(const TacticStep&) const = default;
};

struct TacticScript {
  std::vector<TacticStep> steps;

  bool operator==(const TacticScript&) const = default;
};

// "move=> m n p q; rewrite -! addnA addnCA n"
std::string to_string(const TacticScript& script);

struct LibraryObject {
  std::string name;
  ObjectKind kind = ObjectKind::kDefinition;
  TermPtr statement;
  TermPtr body;
  std::optional<TacticScript> proof_script;
};

// Ordered library; the order is the processing order of recurrent
// clustering.
class Library {
 public:
  Library() = default;
  explicit Library(std::vector<LibraryObject> objects);

  const std::vector<LibraryObject>& objects() const { return objects_; }
  std::size_t size() const { return objects_.size(); }
  bool empty() const { return objects_.empty(); }
  const LibraryObject& operator[](std::size_t i) const { return objects_[i]; }

  std::optional<std::size_t> index_of(const std::string& name) const;
  const LibraryObject* find(const std::string& name) const;

 private:
  std::vector<LibraryObject> objects_;
  std::map<std::string, std::size_t> index_;
};

Library parse_library(std::string_view text);
TermPtr parse_term(const nlohmann::json& node);
TacticScript parse_tactic_script(const nlohmann::json& node);

nlohmann::json term_to_json(const Term& t);
nlohmann::json tactic_script_to_json(const TacticScript& script);
nlohmann::json library_to_json(const Library& lib);
std::string serialize_library(const Library& lib);

// Structural equality over whole libraries (names, kinds, terms, scripts).
bool equal(const Library& a, const Library& b);

// A library whose every Name occurrence carries the typed statement of the
// object it names and every Var occurrence carries its binder's type.
struct TypedObject {
  std::string name;
  ObjectKind kind;
  TermPtr statement;
  TermPtr body;
  std::optional<TacticScript> proof_script;

  // The term whose tree represents this object for clustering: the statement
  // of lemmas/theorems, and the body of definitions/fixpoints when present.
  const TermPtr& mined_term() const;
};

class TypedLibrary {
 public:
  TypedLibrary() = default;
  TypedLibrary(Library source, std::vector<TypedObject> objects);

  const Library& source() const { return source_; }
  const std::vector<TypedObject>& objects() const { return objects_; }
  std::size_t size() const { return objects_.size(); }
  const TypedObject& operator[](std::size_t i) const { return objects_[i]; }
  std::optional<std::size_t> index_of(const std::string& name) const {
    return source_.index_of(name);
  }

 private:
  Library source_;
  std::vector<TypedObject> objects_;
};

TypedLibrary resolve_types(const Library& lib);

// Names of the top-level forall binders of a statement.
std::vector<std::string> top_level_binders(const Term& statement);

}  // namespace proofminer
