#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "proofminer/term.hpp"

namespace proofminer {

// The closed set of keyword nodes. `kAt` heads applications whose function
// is not a global name.
enum class GallinaToken { kForall, kFun, kArrow, kLet, kFix, kMatch, kAt };

inline constexpr GallinaToken kAllGallinaTokens[] = {
    GallinaToken::kForall, GallinaToken::kFun, GallinaToken::kArrow, GallinaToken::kLet,
    GallinaToken::kFix,    GallinaToken::kMatch, GallinaToken::kAt,
};

std::string to_string(GallinaToken tok);

// A "t1 : t2" node: t1 is a sort, name or variable; t2 is its type.
struct TermTypeLabel {
  TermPtr term;
  TermPtr type;
};

struct TreeNode {
  std::variant<GallinaToken, TermTypeLabel> label;
  int parent = -1;  // node id; -1 for the root
  std::vector<int> children;
  std::size_t depth = 0;
  std::size_t level_index = 0;

  bool gallina() const { return std::holds_alternative<GallinaToken>(label); }
  std::string label_string() const;
};

// Nodes are stored in level order: node 0 is the root, and the nodes of each
// depth are contiguous and left to right.
class TermTree {
 public:
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  const TreeNode& root() const { return nodes_.front(); }
  const TreeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

  // Number of levels.
  std::size_t depth() const { return levels_.size(); }
  // Largest level size.
  std::size_t width() const;
  const std::vector<std::vector<int>>& levels() const { return levels_; }

  // T(depth, level_index), if such a node exists.
  const TreeNode* node_at(std::size_t depth, std::size_t level_index) const;

  // Level index of a node's parent, -1 for the root.
  int parent_level_index(const TreeNode& n) const;

  // "d=<depth> j=<index> p=<parent index> <label>" per node, level order.
  std::string dump() const;

 private:
  friend TermTree build_term_tree(const Term& t);

  std::vector<TreeNode> nodes_;
  std::vector<std::vector<int>> levels_;
};

struct TreeDims {
  std::size_t depth;
  std::size_t width;

  bool operator==(const TreeDims&) const = default;
};

TermTree build_term_tree(const Term& t);
TreeDims tree_dims(const TermTree& tree);
const TreeNode* node_at(const TermTree& tree, std::size_t depth, std::size_t level_index);

}  // namespace proofminer
