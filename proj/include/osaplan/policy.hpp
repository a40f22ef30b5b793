#pragma once

#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

namespace osaplan {

struct PolicyTree;
using PolicyTreePtr = std::shared_ptr<const PolicyTree>;

/// Node of a single agent's depth-t policy tree: an action to execute now
/// and one child per private observation (children indexed by observation).
/// Leaves (depth 1) have no children. Nodes are immutable and shared; the
/// solver aliases subtrees freely, so a "tree" is really a DAG.
struct PolicyTree {
  int action = 0;
  std::vector<PolicyTreePtr> children;
  int depth = 1;
};

/// Depth-1 tree: execute `action`, then stop.
PolicyTreePtr make_leaf(int action);

/// Internal node over the given children, one per observation in order.
/// Depth is derived from the children; throws StructureError when the
/// children are empty, null, or of unequal depth.
PolicyTreePtr make_node(int action, std::vector<PolicyTreePtr> children);

/// Full recursive well-formedness check against an agent's observation
/// count: every internal node has exactly num_observations non-null
/// children of uniform depth. Throws StructureError.
void validate_tree(const PolicyTree& tree, int num_observations);

/// Structural equality (actions and shape), independent of sharing.
bool trees_equal(const PolicyTree& a, const PolicyTree& b);

/// One policy tree per agent, all of equal depth.
struct JointPolicy {
  std::vector<PolicyTreePtr> trees;

  /// Common depth of the agent trees; throws StructureError when trees are
  /// missing, null, or of unequal depth.
  int depth() const;
};

bool joint_policies_equal(const JointPolicy& a, const JointPolicy& b);

/// Assigns small integer ids to structurally distinct subtrees, so that two
/// trees are structurally equal iff they intern to the same id. Used to
/// deduplicate candidate pools and to serialize trees with sharing intact.
class TreeInterner {
 public:
  int intern(const PolicyTreePtr& tree);

 private:
  // Canonical key of a node: [action, child id per observation...].
  std::map<std::vector<int>, int> table_;
  std::unordered_map<const PolicyTree*, int> by_node_;
};

}  // namespace osaplan
