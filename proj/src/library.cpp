#include "proofminer/library.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "proofminer/error.hpp"

namespace proofminer {

using json = nlohmann::json;

std::string to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::kDefinition: return "definition";
    case ObjectKind::kFixpoint: return "fixpoint";
    case ObjectKind::kLemma: return "lemma";
    case ObjectKind::kTheorem: return "theorem";
  }
  return "definition";
}

std::optional<ObjectKind> parse_object_kind(std::string_view s) {
  if (s == "definition") return ObjectKind::kDefinition;
  if (s == "fixpoint") return ObjectKind::kFixpoint;
  if (s == "lemma") return ObjectKind::kLemma;
  if (s == "theorem") return ObjectKind::kTheorem;
  return std::nullopt;
}

std::string to_string(ArgKind kind) {
  switch (kind) {
    case ArgKind::kLemma: return "lemma";
    case ArgKind::kHypothesis: return "hypothesis";
    case ArgKind::kLiteral: return "literal";
  }
  return "literal";
}

std::optional<ArgKind> parse_arg_kind(std::string_view s) {
  if (s == "lemma") return ArgKind::kLemma;
  if (s == "hypothesis") return ArgKind::kHypothesis;
  if (s == "literal") return ArgKind::kLiteral;
  return std::nullopt;
}

std::string to_string(const TacticScript& script) {
  std::string out;
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    if (i) out += "; ";
    out += script.steps[i].tactic;
    for (const auto& a : script.steps[i].args) out += " " + a.value;
  }
  return out;
}

Library::Library(std::vector<LibraryObject> objects) : objects_(std::move(objects)) {
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (!index_.emplace(objects_[i].name, i).second)
      throw DuplicateName("duplicate object name '" + objects_[i].name + "'");
  }
}

std::optional<std::size_t> Library::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const LibraryObject* Library::find(const std::string& name) const {
  auto i = index_of(name);
  return i ? &objects_[*i] : nullptr;
}

// ---------------------------------------------------------------------------
// JSON -> terms

namespace {

const json& field(const json& node, const char* key, const std::string& path) {
  auto it = node.find(key);
  if (it == node.end()) throw ParseError(path + ": missing field '" + key + "'");
  return *it;
}

std::string string_field(const json& node, const char* key, const std::string& path) {
  const json& v = field(node, key, path);
  if (!v.is_string()) throw ParseError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

const json& array_field(const json& node, const char* key, const std::string& path) {
  const json& v = field(node, key, path);
  if (!v.is_array()) throw ParseError(path + "." + key + ": expected an array");
  return v;
}

TermPtr term_at(const json& node, const std::string& path);

TermPtr optional_term(const json& node, const char* key, const std::string& path) {
  auto it = node.find(key);
  if (it == node.end() || it->is_null()) return nullptr;
  return term_at(*it, path + "." + key);
}

std::vector<Binder> binders_at(const json& node, const std::string& path) {
  const json& arr = array_field(node, "binders", path);
  if (arr.empty()) throw ArityError(path + ".binders: empty binder list");
  std::vector<Binder> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + ".binders[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) throw ParseError(p + ": expected an object");
    out.push_back({string_field(arr[i], "name", p), term_at(field(arr[i], "type", p), p + ".type")});
  }
  return out;
}

std::vector<TermPtr> terms_at(const json& arr, const std::string& path) {
  std::vector<TermPtr> out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(term_at(arr[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

TermPtr term_at(const json& node, const std::string& path) {
  if (!node.is_object()) throw ParseError(path + ": expected a term node object");
  const std::string tag = string_field(node, "tag", path);
  if (tag == "sort") {
    const std::string s = string_field(node, "sort", path);
    auto ordinal = parse_sort_name(s);
    if (!ordinal) throw ParseError(path + ": unknown sort '" + s + "'");
    return make_sort(*ordinal);
  }
  if (tag == "name") return make_name(string_field(node, "name", path));
  if (tag == "var") return make_var(string_field(node, "name", path), optional_term(node, "type", path));
  if (tag == "forall" || tag == "fun") {
    auto binders = binders_at(node, path);
    auto body = term_at(field(node, "body", path), path + ".body");
    return tag == "forall" ? make_forall(std::move(binders), std::move(body))
                           : make_fun(std::move(binders), std::move(body));
  }
  if (tag == "arrow")
    return make_arrow(term_at(field(node, "from", path), path + ".from"),
                      term_at(field(node, "to", path), path + ".to"));
  if (tag == "app") {
    const json& args = array_field(node, "args", path);
    if (args.empty()) throw ArityError(path + ".args: empty argument list");
    return make_app(term_at(field(node, "head", path), path + ".head"), terms_at(args, path + ".args"));
  }
  if (tag == "let")
    return make_let(string_field(node, "name", path), optional_term(node, "type", path),
                    term_at(field(node, "value", path), path + ".value"),
                    term_at(field(node, "body", path), path + ".body"));
  if (tag == "fix")
    return make_fix(string_field(node, "name", path), optional_term(node, "type", path),
                    binders_at(node, path), term_at(field(node, "body", path), path + ".body"));
  if (tag == "match") {
    const json& scr = array_field(node, "scrutinees", path);
    if (scr.empty()) throw ArityError(path + ".scrutinees: empty scrutinee list");
    const json& brs = array_field(node, "branches", path);
    std::vector<Branch> branches;
    for (std::size_t i = 0; i < brs.size(); ++i) {
      const std::string p = path + ".branches[" + std::to_string(i) + "]";
      if (!brs[i].is_object()) throw ParseError(p + ": expected an object");
      Branch b;
      if (auto it = brs[i].find("patterns"); it != brs[i].end()) {
        if (!it->is_array()) throw ParseError(p + ".patterns: expected an array");
        b.patterns = terms_at(*it, p + ".patterns");
      } else {
        b.patterns.push_back(term_at(field(brs[i], "pattern", p), p + ".pattern"));
      }
      b.rhs = term_at(field(brs[i], "rhs", p), p + ".rhs");
      if (b.patterns.size() != scr.size())
        throw ArityError(p + ": " + std::to_string(b.patterns.size()) + " patterns for " +
                         std::to_string(scr.size()) + " scrutinees");
      branches.push_back(std::move(b));
    }
    return make_match(terms_at(scr, path + ".scrutinees"), std::move(branches));
  }
  throw ParseError(path + ": unknown term tag '" + tag + "'");
}

TacticScript script_at(const json& node, const std::string& path) {
  if (!node.is_array()) throw ParseError(path + ": expected an array of tactic steps");
  TacticScript script;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!node[i].is_object()) throw ParseError(p + ": expected an object");
    TacticStep step{string_field(node[i], "tactic", p), {}};
    if (auto it = node[i].find("args"); it != node[i].end()) {
      if (!it->is_array()) throw ParseError(p + ".args: expected an array");
      for (std::size_t j = 0; j < it->size(); ++j) {
        const std::string q = p + ".args[" + std::to_string(j) + "]";
        const std::string kind = string_field((*it)[j], "kind", q);
        auto k = parse_arg_kind(kind);
        if (!k) throw ParseError(q + ": unknown argument kind '" + kind + "'");
        step.args.push_back({*k, string_field((*it)[j], "value", q)});
      }
    }
    script.steps.push_back(std::move(step));
  }
  return script;
}

// Global names used by a term, skipping occurrences of fix-bound names.
void collect_names(const Term& t, std::vector<std::string>& fix_scope, std::vector<std::string>& out) {
  auto recurse = [&](const TermPtr& x) {
    if (x) collect_names(*x, fix_scope, out);
  };
  if (const auto* n = t.as<Name>()) {
    if (std::find(fix_scope.begin(), fix_scope.end(), n->id) == fix_scope.end()) out.push_back(n->id);
  } else if (const auto* v = t.as<Var>()) {
    recurse(v->type);
  } else if (const auto* f = t.as<Forall>()) {
    for (const auto& b : f->binders) recurse(b.type);
    recurse(f->body);
  } else if (const auto* f = t.as<Fun>()) {
    for (const auto& b : f->binders) recurse(b.type);
    recurse(f->body);
  } else if (const auto* a = t.as<Arrow>()) {
    recurse(a->from);
    recurse(a->to);
  } else if (const auto* a = t.as<App>()) {
    recurse(a->head);
    for (const auto& x : a->args) recurse(x);
  } else if (const auto* l = t.as<Let>()) {
    recurse(l->type);
    recurse(l->value);
    recurse(l->body);
  } else if (const auto* f = t.as<Fix>()) {
    recurse(f->type);
    fix_scope.push_back(f->name);
    for (const auto& b : f->binders) recurse(b.type);
    recurse(f->body);
    fix_scope.pop_back();
  } else if (const auto* m = t.as<Match>()) {
    for (const auto& s : m->scrutinees) recurse(s);
    for (const auto& b : m->branches) {
      for (const auto& p : b.patterns) recurse(p);
      recurse(b.rhs);
    }
  }
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  // `byte` is 1-based and may point one past the end on truncated input.
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

TermPtr parse_term(const json& node) { return term_at(node, "$"); }

TacticScript parse_tactic_script(const json& node) { return script_at(node, "$"); }

Library parse_library(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte);
    throw ParseError(std::string("malformed JSON: ") + e.what(), line, col);
  }
  if (!doc.is_object()) throw ParseError("$: expected a top-level object");
  const json& arr = array_field(doc, "objects", "$");

  std::vector<LibraryObject> objects;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "$.objects[" + std::to_string(i) + "]";
    const json& o = arr[i];
    if (!o.is_object()) throw ParseError(path + ": expected an object");
    LibraryObject obj;
    obj.name = string_field(o, "name", path);
    const std::string kind = string_field(o, "kind", path);
    auto k = parse_object_kind(kind);
    if (!k) throw ParseError(path + ": unknown object kind '" + kind + "'");
    obj.kind = *k;
    obj.statement = term_at(field(o, "statement", path), path + ".statement");
    obj.body = optional_term(o, "body", path);
    if (auto it = o.find("proof_script"); it != o.end() && !it->is_null())
      obj.proof_script = script_at(*it, path + ".proof_script");
    objects.push_back(std::move(obj));
  }

  Library lib(std::move(objects));

  for (std::size_t i = 0; i < lib.size(); ++i) {
    const auto& obj = lib[i];
    std::vector<std::string> scope, names;
    collect_names(*obj.statement, scope, names);
    if (obj.body) collect_names(*obj.body, scope, names);
    for (const auto& n : names) {
      auto j = lib.index_of(n);
      if (j && *j > i)
        throw ForwardReference("object '" + obj.name + "' references '" + n +
                               "' which is defined later (object " + std::to_string(*j + 1) + ")");
    }
    if (obj.proof_script) {
      const auto hyps = top_level_binders(*obj.statement);
      for (const auto& step : obj.proof_script->steps) {
        for (const auto& arg : step.args) {
          if (arg.kind == ArgKind::kLemma && !lib.index_of(arg.value))
            throw ParseError("proof script of '" + obj.name + "' uses unknown lemma '" + arg.value + "'");
          if (arg.kind == ArgKind::kHypothesis &&
              std::find(hyps.begin(), hyps.end(), arg.value) == hyps.end())
            throw ParseError("proof script of '" + obj.name + "' uses '" + arg.value +
                             "' which is not a binder of its statement");
        }
      }
    }
  }
  return lib;
}

// ---------------------------------------------------------------------------
// terms -> JSON

namespace {

json binders_json(const std::vector<Binder>& bs) {
  json arr = json::array();
  for (const auto& b : bs) arr.push_back({{"name", b.var}, {"type", term_to_json(*b.type)}});
  return arr;
}

json terms_json(const std::vector<TermPtr>& ts) {
  json arr = json::array();
  for (const auto& t : ts) arr.push_back(term_to_json(*t));
  return arr;
}

}  // namespace

json term_to_json(const Term& t) {
  if (const auto* s = t.as<Sort>()) return {{"tag", "sort"}, {"sort", sort_name(s->ordinal)}};
  if (const auto* n = t.as<Name>()) return {{"tag", "name"}, {"name", n->id}};
  if (const auto* v = t.as<Var>()) {
    json j = {{"tag", "var"}, {"name", v->id}};
    if (v->type) j["type"] = term_to_json(*v->type);
    return j;
  }
  if (const auto* f = t.as<Forall>())
    return {{"tag", "forall"}, {"binders", binders_json(f->binders)}, {"body", term_to_json(*f->body)}};
  if (const auto* f = t.as<Fun>())
    return {{"tag", "fun"}, {"binders", binders_json(f->binders)}, {"body", term_to_json(*f->body)}};
  if (const auto* a = t.as<Arrow>())
    return {{"tag", "arrow"}, {"from", term_to_json(*a->from)}, {"to", term_to_json(*a->to)}};
  if (const auto* a = t.as<App>())
    return {{"tag", "app"}, {"head", term_to_json(*a->head)}, {"args", terms_json(a->args)}};
  if (const auto* l = t.as<Let>()) {
    json j = {{"tag", "let"}, {"name", l->var}, {"value", term_to_json(*l->value)},
              {"body", term_to_json(*l->body)}};
    if (l->type) j["type"] = term_to_json(*l->type);
    return j;
  }
  if (const auto* f = t.as<Fix>()) {
    json j = {{"tag", "fix"}, {"name", f->name}, {"binders", binders_json(f->binders)},
              {"body", term_to_json(*f->body)}};
    if (f->type) j["type"] = term_to_json(*f->type);
    return j;
  }
  const auto& m = *t.as<Match>();
  json branches = json::array();
  for (const auto& b : m.branches)
    branches.push_back({{"patterns", terms_json(b.patterns)}, {"rhs", term_to_json(*b.rhs)}});
  return {{"tag", "match"}, {"scrutinees", terms_json(m.scrutinees)}, {"branches", branches}};
}

json tactic_script_to_json(const TacticScript& script) {
  json steps = json::array();
  for (const auto& s : script.steps) {
    json args = json::array();
    for (const auto& a : s.args) args.push_back({{"kind", to_string(a.kind)}, {"value", a.value}});
    steps.push_back({{"tactic", s.tactic}, {"args", args}});
  }
  return steps;
}

json library_to_json(const Library& lib) {
  json objects = json::array();
  for (const auto& o : lib.objects()) {
    objects.push_back({
        {"name", o.name},
        {"kind", to_string(o.kind)},
        {"statement", term_to_json(*o.statement)},
        {"body", o.body ? term_to_json(*o.body) : json(nullptr)},
        {"proof_script", o.proof_script ? tactic_script_to_json(*o.proof_script) : json(nullptr)},
    });
  }
  return {{"objects", objects}};
}

std::string serialize_library(const Library& lib) { return library_to_json(lib).dump(2) + "\n"; }

bool equal(const Library& a, const Library& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (x.name != y.name || x.kind != y.kind || !equal(x.statement, y.statement) ||
        !equal(x.body, y.body) || x.proof_script != y.proof_script)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// type resolution

const TermPtr& TypedObject::mined_term() const {
  if ((kind == ObjectKind::kDefinition || kind == ObjectKind::kFixpoint) && body) return body;
  return statement;
}

TypedLibrary::TypedLibrary(Library source, std::vector<TypedObject> objects)
    : source_(std::move(source)), objects_(std::move(objects)) {}

std::vector<std::string> top_level_binders(const Term& statement) {
  std::vector<std::string> out;
  if (const auto* f = statement.as<Forall>())
    for (const auto& b : f->binders) out.push_back(b.var);
  return out;
}

namespace {

class Resolver {
 public:
  explicit Resolver(const Library& lib) : lib_(lib) {}

  TypedLibrary run() {
    std::vector<TypedObject> out;
    for (current_ = 0; current_ < lib_.size(); ++current_) {
      const auto& obj = lib_[current_];
      self_type_ = nullptr;
      TermPtr statement = resolve(obj.statement);
      statements_.push_back(statement);
      self_type_ = statement;
      TermPtr body = obj.body ? resolve(obj.body) : nullptr;
      out.push_back({obj.name, obj.kind, statement, body, obj.proof_script});
    }
    return TypedLibrary(lib_, std::move(out));
  }

 private:
  struct Binding {
    std::string id;
    TermPtr type;
    bool recursive;
  };

  const std::string& current_name() const { return lib_[current_].name; }

  const Binding* lookup(const std::string& id) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->id == id) return &*it;
    return nullptr;
  }

  // While the statement itself is being resolved, a self-reference has no
  // typed statement yet; its type is the object itself.
  TermPtr self_reference(const std::string& id) const {
    return make_name(id, self_type_ ? self_type_ : make_name(id, nullptr, true), true);
  }

  TermPtr resolve_name(const std::string& id) {
    if (const auto* b = lookup(id); b && b->recursive) return make_name(id, b->type, true);
    if (id == current_name()) return self_reference(id);
    auto m = lib_.index_of(id);
    if (!m) throw UnknownName("object '" + current_name() + "': unknown name '" + id + "'");
    if (*m > current_)
      throw ForwardReference("object '" + current_name() + "' references later object '" + id + "'");
    return make_name(id, statements_[*m]);
  }

  std::vector<Binder> push_binders(const std::vector<Binder>& bs) {
    std::vector<Binder> typed;
    for (const auto& b : bs) {
      TermPtr t = resolve(b.type);
      typed.push_back({b.var, t});
      scope_.push_back({b.var, t, false});
    }
    return typed;
  }

  static TermPtr type_of_atomic(const Term& t) {
    if (const auto* s = t.as<Sort>()) return make_sort(sort_of_sort(s->ordinal));
    if (const auto* n = t.as<Name>()) return n->type;
    if (const auto* v = t.as<Var>()) return v->type;
    return nullptr;
  }

  TermPtr resolve_pattern(const TermPtr& p) {
    if (const auto* v = p->as<Var>()) {
      if (v->type) {
        TermPtr t = resolve(v->type);
        scope_.push_back({v->id, t, false});
        return make_var(v->id, t);
      }
      if (lookup(v->id)) return resolve(p);
      throw UnboundVariable("object '" + current_name() + "': pattern variable '" + v->id +
                            "' needs a type annotation");
    }
    if (const auto* a = p->as<App>()) {
      TermPtr head = resolve(a->head);
      std::vector<TermPtr> args;
      for (const auto& x : a->args) args.push_back(resolve_pattern(x));
      return make_app(head, std::move(args));
    }
    return resolve(p);
  }

  TermPtr resolve(const TermPtr& t) {
    if (t->is<Sort>()) return t;
    if (const auto* n = t->as<Name>()) return resolve_name(n->id);
    if (const auto* v = t->as<Var>()) {
      if (const auto* b = lookup(v->id)) {
        if (b->recursive) return make_name(v->id, b->type, true);
        return make_var(v->id, b->type);
      }
      if (v->id == current_name()) return self_reference(v->id);
      throw UnboundVariable("object '" + current_name() + "': unbound variable '" + v->id + "'");
    }
    if (const auto* f = t->as<Forall>()) {
      const auto mark = scope_.size();
      auto binders = push_binders(f->binders);
      TermPtr body = resolve(f->body);
      scope_.resize(mark);
      return make_forall(std::move(binders), body);
    }
    if (const auto* f = t->as<Fun>()) {
      const auto mark = scope_.size();
      auto binders = push_binders(f->binders);
      TermPtr body = resolve(f->body);
      scope_.resize(mark);
      return make_fun(std::move(binders), body);
    }
    if (const auto* a = t->as<Arrow>()) return make_arrow(resolve(a->from), resolve(a->to));
    if (const auto* a = t->as<App>()) {
      TermPtr head = resolve(a->head);
      std::vector<TermPtr> args;
      for (const auto& x : a->args) args.push_back(resolve(x));
      return make_app(head, std::move(args));
    }
    if (const auto* l = t->as<Let>()) {
      TermPtr value = resolve(l->value);
      TermPtr type = l->type ? resolve(l->type) : type_of_atomic(*value);
      if (!type)
        throw TypeResolutionError("object '" + current_name() + "': let-bound '" + l->var +
                                  "' needs a type annotation");
      scope_.push_back({l->var, type, false});
      TermPtr body = resolve(l->body);
      scope_.pop_back();
      return make_let(l->var, type, value, body);
    }
    if (const auto* f = t->as<Fix>()) {
      TermPtr type;
      if (f->type)
        type = resolve(f->type);
      else if (f->name == current_name() && self_type_)
        type = self_type_;
      else
        throw TypeResolutionError("object '" + current_name() + "': fix '" + f->name +
                                  "' needs a type annotation");
      const auto mark = scope_.size();
      scope_.push_back({f->name, type, true});
      auto binders = push_binders(f->binders);
      TermPtr body = resolve(f->body);
      scope_.resize(mark);
      return make_fix(f->name, type, std::move(binders), body);
    }
    const auto& m = *t->as<Match>();
    std::vector<TermPtr> scr;
    for (const auto& s : m.scrutinees) scr.push_back(resolve(s));
    std::vector<Branch> branches;
    for (const auto& b : m.branches) {
      const auto mark = scope_.size();
      Branch nb;
      for (const auto& p : b.patterns) nb.patterns.push_back(resolve_pattern(p));
      nb.rhs = resolve(b.rhs);
      scope_.resize(mark);
      branches.push_back(std::move(nb));
    }
    return make_match(std::move(scr), std::move(branches));
  }

  const Library& lib_;
  std::size_t current_ = 0;
  TermPtr self_type_;
  std::vector<TermPtr> statements_;
  std::vector<Binding> scope_;
};

}  // namespace

TypedLibrary resolve_types(const Library& lib) { return Resolver(lib).run(); }

}  // namespace proofminer
