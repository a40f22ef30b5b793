#include <doctest.h>

#include <random>

#include "osaplan/errors.hpp"
#include "osaplan/policy.hpp"
#include "testutil.hpp"

using namespace osaplan;

TEST_CASE("make_node derives depth and rejects malformed children") {
  const PolicyTreePtr leaf0 = make_leaf(0);
  const PolicyTreePtr leaf1 = make_leaf(1);
  const PolicyTreePtr node = make_node(1, {leaf0, leaf1, leaf0});
  CHECK(node->depth == 2);
  CHECK(node->children.size() == 3);

  CHECK_THROWS_AS(make_node(0, {}), StructureError);
  CHECK_THROWS_AS(make_node(0, {leaf0, nullptr}), StructureError);
  CHECK_THROWS_AS(make_node(0, {leaf0, node}), StructureError);  // ragged depth
}

TEST_CASE("validate_tree checks branching factor recursively") {
  const PolicyTreePtr leaf = make_leaf(0);
  CHECK_NOTHROW(validate_tree(*leaf, 3));

  const PolicyTreePtr two_way = make_node(0, {make_leaf(0), make_leaf(1)});
  CHECK_NOTHROW(validate_tree(*two_way, 2));
  CHECK_THROWS_AS(validate_tree(*two_way, 3), StructureError);

  PolicyTree manual;
  manual.action = 0;
  manual.depth = 2;
  manual.children = {make_leaf(0), nullptr, make_leaf(1)};
  CHECK_THROWS_AS(validate_tree(manual, 3), StructureError);
}

TEST_CASE("structural equality is independent of sharing") {
  std::mt19937_64 rng(3);
  const PolicyTreePtr shared = test::random_tree(rng, 2, 2, 2);
  const PolicyTreePtr a = make_node(0, {shared, shared});

  // Same shape built without sharing.
  std::mt19937_64 rng2(3);
  const PolicyTreePtr copy1 = test::random_tree(rng2, 2, 2, 2);
  std::mt19937_64 rng3(3);
  const PolicyTreePtr copy2 = test::random_tree(rng3, 2, 2, 2);
  const PolicyTreePtr b = make_node(0, {copy1, copy2});

  CHECK(trees_equal(*a, *b));
  const PolicyTreePtr c = make_node(1, {shared, shared});
  CHECK_FALSE(trees_equal(*a, *c));
}

TEST_CASE("joint policy depth agreement") {
  JointPolicy delta{{make_leaf(0), make_leaf(1)}};
  CHECK(delta.depth() == 1);

  JointPolicy ragged{{make_leaf(0), make_node(0, {make_leaf(0), make_leaf(1)})}};
  CHECK_THROWS_AS(ragged.depth(), StructureError);
  CHECK_THROWS_AS(JointPolicy{}.depth(), StructureError);
}

TEST_CASE("interner assigns equal ids exactly to structurally equal trees" *
          doctest::description("property, 1000 cases")) {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 1000; ++rep) {
    const PolicyTreePtr a = test::random_tree(rng, 2, 2, 3);
    const PolicyTreePtr b = test::random_tree(rng, 2, 2, 3);
    TreeInterner interner;
    const int id_a = interner.intern(a);
    const int id_b = interner.intern(b);
    CHECK((id_a == id_b) == trees_equal(*a, *b));
    // Interning again (now via the pointer memo) is stable.
    CHECK(interner.intern(a) == id_a);
  }
}
