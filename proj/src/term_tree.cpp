#include "proofminer/term_tree.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace proofminer {

std::string to_string(GallinaToken tok) {
  switch (tok) {
    case GallinaToken::kForall: return "forall";
    case GallinaToken::kFun: return "fun";
    case GallinaToken::kArrow: return "->";
    case GallinaToken::kLet: return "let";
    case GallinaToken::kFix: return "fix";
    case GallinaToken::kMatch: return "match";
    case GallinaToken::kAt: return "@";
  }
  return "?";
}

std::string TreeNode::label_string() const {
  if (const auto* tok = std::get_if<GallinaToken>(&label)) return to_string(*tok);
  const auto& tt = std::get<TermTypeLabel>(label);
  return to_string(tt.term) + " : " + (tt.type ? to_string(tt.type) : std::string("?"));
}

namespace {

// Pre-order scratch tree; relabelled into level order afterwards.
struct Scratch {
  std::variant<GallinaToken, TermTypeLabel> label;
  std::vector<std::size_t> children;
};

class Builder {
 public:
  std::size_t build(const Term& t) {
    if (const auto* s = t.as<Sort>()) return leaf(make_sort(s->ordinal), make_sort(sort_of_sort(s->ordinal)));
    if (const auto* n = t.as<Name>()) return leaf(make_name(n->id, n->type, n->recursive), n->type);
    if (const auto* v = t.as<Var>()) return leaf(make_var(v->id, v->type), v->type);
    if (const auto* f = t.as<Forall>()) return binder_node(GallinaToken::kForall, f->binders, *f->body);
    if (const auto* f = t.as<Fun>()) return binder_node(GallinaToken::kFun, f->binders, *f->body);
    if (const auto* a = t.as<Arrow>()) {
      const auto id = gallina(GallinaToken::kArrow);
      add(id, build(*a->from));
      add(id, build(*a->to));
      return id;
    }
    if (const auto* a = t.as<App>()) {
      std::size_t id;
      if (const auto* head = a->head->as<Name>()) {
        id = leaf(make_name(head->id, head->type, head->recursive), head->type);
      } else {
        id = gallina(GallinaToken::kAt);
        add(id, build(*a->head));
      }
      for (const auto& x : a->args) add(id, build(*x));
      return id;
    }
    if (const auto* l = t.as<Let>()) {
      const auto id = gallina(GallinaToken::kLet);
      add(id, leaf(make_var(l->var, l->type), l->type));
      add(id, build(*l->value));
      add(id, build(*l->body));
      return id;
    }
    if (const auto* f = t.as<Fix>()) {
      const auto id = gallina(GallinaToken::kFix);
      add(id, leaf(make_name(f->name, f->type, true), f->type));
      for (const auto& b : f->binders) add(id, leaf(make_var(b.var, b.type), b.type));
      add(id, build(*f->body));
      return id;
    }
    const auto& m = *t.as<Match>();
    const auto id = gallina(GallinaToken::kMatch);
    for (const auto& s : m.scrutinees) add(id, build(*s));
    for (const auto& br : m.branches) {
      const auto b = gallina(GallinaToken::kArrow);
      for (const auto& p : br.patterns) add(b, build(*p));
      add(b, build(*br.rhs));
      add(id, b);
    }
    return id;
  }

  std::vector<Scratch> nodes;

 private:
  std::size_t leaf(TermPtr term, TermPtr type) {
    nodes.push_back({TermTypeLabel{std::move(term), std::move(type)}, {}});
    return nodes.size() - 1;
  }
  std::size_t gallina(GallinaToken tok) {
    nodes.push_back({tok, {}});
    return nodes.size() - 1;
  }
  void add(std::size_t parent, std::size_t child) { nodes[parent].children.push_back(child); }

  std::size_t binder_node(GallinaToken tok, const std::vector<Binder>& binders, const Term& body) {
    const auto id = gallina(tok);
    for (const auto& b : binders) add(id, leaf(make_var(b.var, b.type), b.type));
    add(id, build(body));
    return id;
  }
};

}  // namespace

TermTree build_term_tree(const Term& t) {
  Builder b;
  const std::size_t root = b.build(t);

  TermTree tree;
  std::vector<int> new_id(b.nodes.size(), -1);
  std::deque<std::pair<std::size_t, int>> queue{{root, -1}};
  while (!queue.empty()) {
    auto [old, parent] = queue.front();
    queue.pop_front();
    const int id = static_cast<int>(tree.nodes_.size());
    new_id[old] = id;
    TreeNode n;
    n.label = b.nodes[old].label;
    n.parent = parent;
    n.depth = parent < 0 ? 0 : tree.nodes_[static_cast<std::size_t>(parent)].depth + 1;
    if (tree.levels_.size() <= n.depth) tree.levels_.emplace_back();
    n.level_index = tree.levels_[n.depth].size();
    tree.levels_[n.depth].push_back(id);
    if (parent >= 0) tree.nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
    tree.nodes_.push_back(std::move(n));
    for (auto c : b.nodes[old].children) queue.emplace_back(c, id);
  }
  return tree;
}

std::size_t TermTree::width() const {
  std::size_t w = 0;
  for (const auto& l : levels_) w = std::max(w, l.size());
  return w;
}

const TreeNode* TermTree::node_at(std::size_t depth, std::size_t level_index) const {
  if (depth >= levels_.size() || level_index >= levels_[depth].size()) return nullptr;
  return &nodes_[static_cast<std::size_t>(levels_[depth][level_index])];
}

int TermTree::parent_level_index(const TreeNode& n) const {
  return n.parent < 0 ? -1 : static_cast<int>(node(n.parent).level_index);
}

std::string TermTree::dump() const {
  std::ostringstream out;
  for (const auto& n : nodes_)
    out << "d=" << n.depth << " j=" << n.level_index << " p=" << parent_level_index(n) << ' '
        << n.label_string() << '\n';
  return out.str();
}

TreeDims tree_dims(const TermTree& tree) { return {tree.depth(), tree.width()}; }

const TreeNode* node_at(const TermTree& tree, std::size_t depth, std::size_t level_index) {
  return tree.node_at(depth, level_index);
}

}  // namespace proofminer
