#include "osaplan/policy.hpp"

#include <set>
#include <utility>

#include "osaplan/errors.hpp"

namespace osaplan {

PolicyTreePtr make_leaf(int action) {
  auto node = std::make_shared<PolicyTree>();
  node->action = action;
  node->depth = 1;
  return node;
}

PolicyTreePtr make_node(int action, std::vector<PolicyTreePtr> children) {
  if (children.empty()) {
    throw StructureError("make_node: internal node needs at least one child");
  }
  for (const PolicyTreePtr& child : children) {
    if (!child) throw StructureError("make_node: null child");
    if (child->depth != children.front()->depth) {
      throw StructureError("make_node: children of unequal depth");
    }
  }
  auto node = std::make_shared<PolicyTree>();
  node->action = action;
  node->depth = children.front()->depth + 1;
  node->children = std::move(children);
  return node;
}

void validate_tree(const PolicyTree& tree, int num_observations) {
  if (num_observations < 1) {
    throw StructureError("validate_tree: need at least one observation");
  }
  if (tree.depth < 1) throw StructureError("validate_tree: non-positive depth");
  if (tree.depth == 1) {
    if (!tree.children.empty()) {
      throw StructureError("validate_tree: leaf with children");
    }
    return;
  }
  if (static_cast<int>(tree.children.size()) != num_observations) {
    throw StructureError("validate_tree: internal node must branch once per observation");
  }
  for (const PolicyTreePtr& child : tree.children) {
    if (!child) throw StructureError("validate_tree: null child");
    if (child->depth != tree.depth - 1) {
      throw StructureError("validate_tree: child depth mismatch");
    }
    validate_tree(*child, num_observations);
  }
}

namespace {

bool trees_equal_impl(const PolicyTree& a, const PolicyTree& b,
                      std::set<std::pair<const PolicyTree*, const PolicyTree*>>& seen) {
  if (&a == &b) return true;
  if (!seen.insert({&a, &b}).second) return true;  // already being compared
  if (a.action != b.action || a.depth != b.depth ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!a.children[i] || !b.children[i]) return false;
    if (!trees_equal_impl(*a.children[i], *b.children[i], seen)) return false;
  }
  return true;
}

}  // namespace

bool trees_equal(const PolicyTree& a, const PolicyTree& b) {
  std::set<std::pair<const PolicyTree*, const PolicyTree*>> seen;
  return trees_equal_impl(a, b, seen);
}

int JointPolicy::depth() const {
  if (trees.empty()) throw StructureError("joint policy: no agent trees");
  for (const PolicyTreePtr& tree : trees) {
    if (!tree) throw StructureError("joint policy: null agent tree");
    if (tree->depth != trees.front()->depth) {
      throw StructureError("joint policy: agent trees of unequal depth");
    }
  }
  return trees.front()->depth;
}

bool joint_policies_equal(const JointPolicy& a, const JointPolicy& b) {
  if (a.trees.size() != b.trees.size()) return false;
  for (std::size_t i = 0; i < a.trees.size(); ++i) {
    if (!a.trees[i] || !b.trees[i]) return false;
    if (!trees_equal(*a.trees[i], *b.trees[i])) return false;
  }
  return true;
}

int TreeInterner::intern(const PolicyTreePtr& tree) {
  if (!tree) throw StructureError("intern: null tree");
  auto hit = by_node_.find(tree.get());
  if (hit != by_node_.end()) return hit->second;

  std::vector<int> key;
  key.reserve(tree->children.size() + 1);
  key.push_back(tree->action);
  for (const PolicyTreePtr& child : tree->children) key.push_back(intern(child));

  auto [it, inserted] = table_.try_emplace(key, static_cast<int>(table_.size()));
  (void)inserted;
  by_node_.emplace(tree.get(), it->second);
  return it->second;
}

}  // namespace osaplan
