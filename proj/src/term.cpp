#include "proofminer/term.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "proofminer/error.hpp"

namespace proofminer {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

TermPtr wrap(auto node) { return std::make_shared<const Term>(Term{std::move(node)}); }

}  // namespace

TermPtr make_sort(int ordinal) { return wrap(Sort{ordinal}); }

TermPtr make_name(std::string id, TermPtr type, bool recursive) {
  return wrap(Name{std::move(id), std::move(type), recursive});
}

TermPtr make_var(std::string id, TermPtr type) { return wrap(Var{std::move(id), std::move(type)}); }

TermPtr make_arrow(TermPtr from, TermPtr to) { return wrap(Arrow{std::move(from), std::move(to)}); }

TermPtr make_forall(std::vector<Binder> binders, TermPtr body) {
  if (binders.empty()) throw ArityError("forall with no binders");
  if (const auto* inner = body->as<Forall>()) {
    binders.insert(binders.end(), inner->binders.begin(), inner->binders.end());
    body = inner->body;
  }
  return wrap(Forall{std::move(binders), std::move(body)});
}

TermPtr make_fun(std::vector<Binder> binders, TermPtr body) {
  if (binders.empty()) throw ArityError("fun with no binders");
  if (const auto* inner = body->as<Fun>()) {
    binders.insert(binders.end(), inner->binders.begin(), inner->binders.end());
    body = inner->body;
  }
  return wrap(Fun{std::move(binders), std::move(body)});
}

TermPtr make_app(TermPtr head, std::vector<TermPtr> args) {
  if (args.empty()) throw ArityError("application with no arguments");
  if (const auto* inner = head->as<App>()) {
    std::vector<TermPtr> merged = inner->args;
    merged.insert(merged.end(), args.begin(), args.end());
    return wrap(App{inner->head, std::move(merged)});
  }
  return wrap(App{std::move(head), std::move(args)});
}

TermPtr make_let(std::string var, TermPtr type, TermPtr value, TermPtr body) {
  return wrap(Let{std::move(var), std::move(type), std::move(value), std::move(body)});
}

TermPtr make_fix(std::string name, TermPtr type, std::vector<Binder> binders, TermPtr body) {
  if (binders.empty()) throw ArityError("fix with no binders");
  return wrap(Fix{std::move(name), std::move(type), std::move(binders), std::move(body)});
}

TermPtr make_match(std::vector<TermPtr> scrutinees, std::vector<Branch> branches) {
  if (scrutinees.empty()) throw ArityError("match with no scrutinees");
  for (const auto& b : branches) {
    if (b.patterns.size() != scrutinees.size())
      throw ArityError("match branch has " + std::to_string(b.patterns.size()) +
                       " patterns for " + std::to_string(scrutinees.size()) + " scrutinees");
  }
  return wrap(Match{std::move(scrutinees), std::move(branches)});
}

namespace {

TermPtr flatten_opt(const TermPtr& t) { return t ? flatten(t) : nullptr; }

std::vector<Binder> flatten_binders(const std::vector<Binder>& bs) {
  std::vector<Binder> out;
  out.reserve(bs.size());
  for (const auto& b : bs) out.push_back({b.var, flatten_opt(b.type)});
  return out;
}

}  // namespace

TermPtr flatten(const TermPtr& t) {
  return std::visit(
      overloaded{
          [&](const Sort&) { return t; },
          [&](const Name& n) { return make_name(n.id, flatten_opt(n.type), n.recursive); },
          [&](const Var& v) { return make_var(v.id, flatten_opt(v.type)); },
          [&](const Forall& f) { return make_forall(flatten_binders(f.binders), flatten(f.body)); },
          [&](const Fun& f) { return make_fun(flatten_binders(f.binders), flatten(f.body)); },
          [&](const Arrow& a) { return make_arrow(flatten(a.from), flatten(a.to)); },
          [&](const App& a) {
            std::vector<TermPtr> args;
            for (const auto& x : a.args) args.push_back(flatten(x));
            return make_app(flatten(a.head), std::move(args));
          },
          [&](const Let& l) {
            return make_let(l.var, flatten_opt(l.type), flatten(l.value), flatten(l.body));
          },
          [&](const Fix& f) {
            return make_fix(f.name, flatten_opt(f.type), flatten_binders(f.binders), flatten(f.body));
          },
          [&](const Match& m) {
            std::vector<TermPtr> scr;
            for (const auto& s : m.scrutinees) scr.push_back(flatten(s));
            std::vector<Branch> brs;
            for (const auto& b : m.branches) {
              Branch nb;
              for (const auto& p : b.patterns) nb.patterns.push_back(flatten(p));
              nb.rhs = flatten(b.rhs);
              brs.push_back(std::move(nb));
            }
            return make_match(std::move(scr), std::move(brs));
          },
      },
      t->node);
}

namespace {

bool equal_binders(const std::vector<Binder>& a, const std::vector<Binder>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].var != b[i].var || !equal(a[i].type, b[i].type)) return false;
  return true;
}

bool equal_lists(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool equal(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return !a && !b;
  return a == b || equal(*a, *b);
}

bool equal(const Term& a, const Term& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Sort& x) { return x.ordinal == b.as<Sort>()->ordinal; },
          [&](const Name& x) {
            const auto& y = *b.as<Name>();
            return x.id == y.id && x.recursive == y.recursive && equal(x.type, y.type);
          },
          [&](const Var& x) {
            const auto& y = *b.as<Var>();
            return x.id == y.id && equal(x.type, y.type);
          },
          [&](const Forall& x) {
            const auto& y = *b.as<Forall>();
            return equal_binders(x.binders, y.binders) && equal(x.body, y.body);
          },
          [&](const Fun& x) {
            const auto& y = *b.as<Fun>();
            return equal_binders(x.binders, y.binders) && equal(x.body, y.body);
          },
          [&](const Arrow& x) {
            const auto& y = *b.as<Arrow>();
            return equal(x.from, y.from) && equal(x.to, y.to);
          },
          [&](const App& x) {
            const auto& y = *b.as<App>();
            return equal(x.head, y.head) && equal_lists(x.args, y.args);
          },
          [&](const Let& x) {
            const auto& y = *b.as<Let>();
            return x.var == y.var && equal(x.type, y.type) && equal(x.value, y.value) &&
                   equal(x.body, y.body);
          },
          [&](const Fix& x) {
            const auto& y = *b.as<Fix>();
            return x.name == y.name && equal(x.type, y.type) && equal_binders(x.binders, y.binders) &&
                   equal(x.body, y.body);
          },
          [&](const Match& x) {
            const auto& y = *b.as<Match>();
            if (!equal_lists(x.scrutinees, y.scrutinees) || x.branches.size() != y.branches.size())
              return false;
            for (std::size_t i = 0; i < x.branches.size(); ++i) {
              if (!equal_lists(x.branches[i].patterns, y.branches[i].patterns) ||
                  !equal(x.branches[i].rhs, y.branches[i].rhs))
                return false;
            }
            return true;
          },
      },
      a.node);
}

std::string sort_name(int ordinal) {
  if (ordinal == Sort::kSet) return "Set";
  if (ordinal == Sort::kProp) return "Prop";
  return "Type(" + std::to_string(ordinal - 3) + ")";
}

std::optional<int> parse_sort_name(const std::string& s) {
  if (s == "Set") return Sort::kSet;
  if (s == "Prop") return Sort::kProp;
  if (s == "Type") return Sort::type(0);
  if (s.size() > 6 && s.starts_with("Type(") && s.back() == ')') {
    const std::string digits = s.substr(5, s.size() - 6);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) return std::nullopt;
    return Sort::type(std::stoi(digits));
  }
  return std::nullopt;
}

int sort_of_sort(int ordinal) { return ordinal <= Sort::kProp ? Sort::type(0) : ordinal + 1; }

namespace {

class Printer {
 public:
  explicit Printer(bool annotate) : annotate_(annotate) {}

  void print(const Term& t) {
    std::visit(overloaded{
                   [&](const Sort& s) { out_ << sort_name(s.ordinal); },
                   [&](const Name& n) {
                     out_ << n.id;
                     if (annotate_ && n.recursive) out_ << '!';
                   },
                   [&](const Var& v) {
                     out_ << v.id;
                     if (annotate_ && v.type) {
                       out_ << ":{";
                       print(*v.type);
                       out_ << '}';
                     }
                   },
                   [&](const Forall& f) {
                     out_ << "forall";
                     binders(f.binders);
                     out_ << ", ";
                     print(*f.body);
                   },
                   [&](const Fun& f) {
                     out_ << "fun";
                     binders(f.binders);
                     out_ << " => ";
                     print(*f.body);
                   },
                   [&](const Arrow& a) {
                     operand(*a.from, a.from->is<Arrow>());
                     out_ << " -> ";
                     print(*a.to);
                   },
                   [&](const App& a) {
                     operand(*a.head, false);
                     for (const auto& x : a.args) {
                       out_ << ' ';
                       operand(*x, false);
                     }
                   },
                   [&](const Let& l) {
                     out_ << "let " << l.var;
                     if (l.type) {
                       out_ << " : ";
                       print(*l.type);
                     }
                     out_ << " := ";
                     print(*l.value);
                     out_ << " in ";
                     print(*l.body);
                   },
                   [&](const Fix& f) {
                     out_ << "fix " << f.name;
                     binders(f.binders);
                     out_ << " := ";
                     print(*f.body);
                   },
                   [&](const Match& m) {
                     out_ << "match ";
                     list(m.scrutinees);
                     out_ << " with";
                     for (const auto& b : m.branches) {
                       out_ << " | ";
                       list(b.patterns);
                       out_ << " => ";
                       print(*b.rhs);
                     }
                     out_ << " end";
                   },
               },
               t.node);
  }

  std::string str() const { return out_.str(); }

 private:
  void operand(const Term& t, bool force_parens) {
    const bool parens = force_parens || !t.atomic();
    if (parens) out_ << '(';
    print(t);
    if (parens) out_ << ')';
  }

  void binders(const std::vector<Binder>& bs) {
    for (const auto& b : bs) {
      out_ << " (" << b.var << " : ";
      print(*b.type);
      out_ << ')';
    }
  }

  void list(const std::vector<TermPtr>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out_ << ", ";
      print(*xs[i]);
    }
  }

  bool annotate_;
  std::ostringstream out_;
};

}  // namespace

std::string to_string(const Term& t) {
  Printer p(false);
  p.print(t);
  return p.str();
}

std::string to_string(const TermPtr& t) { return t ? to_string(*t) : std::string("<null>"); }

std::string annotated_key(const Term& t) {
  Printer p(true);
  p.print(t);
  return p.str();
}

std::vector<std::string> free_vars(const Term& root) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::vector<std::string> bound;
  auto is_bound = [&](const std::string& id) {
    return std::find(bound.begin(), bound.end(), id) != bound.end();
  };
  std::function<void(const Term&)> walk = [&](const Term& t) {
    std::visit(overloaded{
                   [&](const Sort&) {},
                   [&](const Name&) {},
                   [&](const Var& v) {
                     if (!is_bound(v.id) && seen.insert(v.id).second) out.push_back(v.id);
                   },
                   [&](const Forall& f) {
                     const auto mark = bound.size();
                     for (const auto& b : f.binders) {
                       walk(*b.type);
                       bound.push_back(b.var);
                     }
                     walk(*f.body);
                     bound.resize(mark);
                   },
                   [&](const Fun& f) {
                     const auto mark = bound.size();
                     for (const auto& b : f.binders) {
                       walk(*b.type);
                       bound.push_back(b.var);
                     }
                     walk(*f.body);
                     bound.resize(mark);
                   },
                   [&](const Arrow& a) {
                     walk(*a.from);
                     walk(*a.to);
                   },
                   [&](const App& a) {
                     walk(*a.head);
                     for (const auto& x : a.args) walk(*x);
                   },
                   [&](const Let& l) {
                     if (l.type) walk(*l.type);
                     walk(*l.value);
                     bound.push_back(l.var);
                     walk(*l.body);
                     bound.pop_back();
                   },
                   [&](const Fix& f) {
                     const auto mark = bound.size();
                     if (f.type) walk(*f.type);
                     bound.push_back(f.name);
                     for (const auto& b : f.binders) {
                       walk(*b.type);
                       bound.push_back(b.var);
                     }
                     walk(*f.body);
                     bound.resize(mark);
                   },
                   [&](const Match& m) {
                     for (const auto& s : m.scrutinees) walk(*s);
                     for (const auto& br : m.branches) {
                       const auto mark = bound.size();
                       // Annotated pattern variables are binding occurrences.
                       std::function<void(const Term&)> bind = [&](const Term& p) {
                         if (const auto* v = p.as<Var>(); v && v->type) {
                           walk(*v->type);
                           bound.push_back(v->id);
                         } else if (const auto* a = p.as<App>()) {
                           for (const auto& x : a->args) bind(*x);
                         } else {
                           walk(p);
                         }
                       };
                       for (const auto& p : br.patterns) bind(*p);
                       walk(*br.rhs);
                       bound.resize(mark);
                     }
                   },
               },
               t.node);
  };
  walk(root);
  return out;
}

}  // namespace proofminer
