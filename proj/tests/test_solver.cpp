#include <doctest.h>

#include <random>
#include <set>
#include <utility>

#include "osaplan/errors.hpp"
#include "osaplan/oracle.hpp"
#include "osaplan/radio.hpp"
#include "osaplan/solver.hpp"
#include "testutil.hpp"

using namespace osaplan;

namespace {

DecPomdpModel demo_model() { return build_scenario(test::two_channel_scenario()); }

Belief demo_b0() { return test::two_channel_scenario().initial_belief; }

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.horizon = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.max_trees = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.belief_jitter = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.max_backup_trees = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("exhaustive backup: counts and enumeration order") {
  const DecPomdpModel model = demo_model();  // 2 actions, 3 observations
  const PolicyTreePtr l0 = make_leaf(0);
  const PolicyTreePtr l1 = make_leaf(1);

  const auto single = exhaustive_backup({l0}, 0, model);
  REQUIRE(single.size() == 2);  // 2 * 1^3
  CHECK(single[0]->action == 0);
  CHECK(single[1]->action == 1);
  for (const auto& tree : single) {
    for (const auto& child : tree->children) CHECK(child == l0);
  }

  const auto full = exhaustive_backup({l0, l1}, 0, model);
  REQUIRE(full.size() == 16);  // 2 * 2^3
  // Action-major; observation 0 is the most significant assignment digit,
  // so the entry after (l0,l0,l0) is (l0,l0,l1).
  CHECK(full[0]->action == 0);
  CHECK(full[0]->children == std::vector<PolicyTreePtr>{l0, l0, l0});
  CHECK(full[1]->children == std::vector<PolicyTreePtr>{l0, l0, l1});
  CHECK(full[2]->children == std::vector<PolicyTreePtr>{l0, l1, l0});
  CHECK(full[7]->children == std::vector<PolicyTreePtr>{l1, l1, l1});
  CHECK(full[8]->action == 1);
  CHECK(full[8]->children == std::vector<PolicyTreePtr>{l0, l0, l0});

  for (std::size_t a = 0; a < full.size(); ++a) {
    CHECK(full[a]->depth == 2);
    for (std::size_t b = a + 1; b < full.size(); ++b) {
      CHECK_FALSE(trees_equal(*full[a], *full[b]));
    }
  }

  // Duplicated inputs still enumerate every assignment: 2 * 3^3.
  CHECK(exhaustive_backup({l0, l1, l0}, 0, model).size() == 54);
}

TEST_CASE("exhaustive backup: rejections") {
  const DecPomdpModel model = demo_model();
  const PolicyTreePtr l0 = make_leaf(0);
  CHECK_THROWS_AS(exhaustive_backup({}, 0, model), ValidationError);
  CHECK_THROWS_AS(exhaustive_backup({l0}, 2, model), ValidationError);
  CHECK_THROWS_AS(exhaustive_backup({l0, nullptr}, 0, model), StructureError);

  const PolicyTreePtr deep = make_node(0, {l0, l0, l0});
  CHECK_THROWS_AS(exhaustive_backup({l0, deep}, 0, model), StructureError);
}

TEST_CASE("belief heuristic: propagation schedule") {
  const DecPomdpModel model = demo_model();
  const Belief b0 = demo_b0();
  std::mt19937_64 rng(7);

  const auto one = precompute_beliefs(b0, model, 1, 0.0, rng);
  REQUIRE(one.size() == 1);
  CHECK((one[0].probs - b0.probs).cwiseAbs().maxCoeff() == 0.0);

  const auto two = precompute_beliefs(b0, model, 2, 0.0, rng);
  REQUIRE(two.size() == 2);
  // Depth-2 subtrees start at slot 1 (prior belief); depth-1 subtrees run at
  // slot 2, one propagation step later. State index packs channel 1 into the
  // high bit: idx 2 = (idle, busy).
  CHECK((two[1].probs - b0.probs).cwiseAbs().maxCoeff() == 0.0);
  CHECK(two[0].probs[3] == doctest::Approx(0.0475).epsilon(1e-12));
  CHECK(two[0].probs[2] == doctest::Approx(0.0025).epsilon(1e-12));
  CHECK(two[0].probs[1] == doctest::Approx(0.9025).epsilon(1e-12));
  CHECK(two[0].probs[0] == doctest::Approx(0.0475).epsilon(1e-12));

  // A stationary prior is a fixed point of the whole schedule.
  const Belief pi = steady_state_belief(test::two_channel_scenario().channels);
  const auto stat = precompute_beliefs(pi, model, 5, 0.0, rng);
  for (const Belief& b : stat) {
    CHECK((b.probs - pi.probs).cwiseAbs().maxCoeff() < 1e-12);
  }

  CHECK_THROWS_AS(precompute_beliefs(b0, model, 0, 0.0, rng), ValidationError);
  CHECK_THROWS_AS(precompute_beliefs(b0, model, 2, 1.0, rng), ValidationError);
}

TEST_CASE("belief heuristic: jitter touches the rng only when nonzero") {
  const DecPomdpModel model = demo_model();
  const Belief b0 = demo_b0();

  std::mt19937_64 used(123), untouched(123);
  precompute_beliefs(b0, model, 4, 0.0, used);
  CHECK(used == untouched);

  const auto noisy = precompute_beliefs(b0, model, 4, 0.2, used);
  CHECK(used != untouched);
  for (const Belief& b : noisy) {
    CHECK(b.probs.minCoeff() >= 0.0);
    CHECK(b.probs.sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("select_best keeps a singleton pair unchanged") {
  const DecPomdpModel model = demo_model();
  const PolicyTreePtr l0 = make_leaf(0);
  const PolicyTreePtr l1 = make_leaf(1);
  const auto [sel_i, sel_j] = select_best({l0}, {l1}, {demo_b0()}, 3, model);
  REQUIRE(sel_i.size() == 1);
  REQUIRE(sel_j.size() == 1);
  CHECK(sel_i[0] == l0);
  CHECK(sel_j[0] == l1);
}

TEST_CASE("select_best splits the users across channels when both are idle") {
  const DecPomdpModel model = demo_model();
  const Belief both_idle = point_mass_belief(2, {1, 1});
  const std::vector<PolicyTreePtr> leaves{make_leaf(0), make_leaf(1)};

  const auto [sel_i, sel_j] = select_best(leaves, leaves, {both_idle}, 2, model);
  REQUIRE(sel_i.size() == 2);
  // The tied optimal pairs are (0,1) and (1,0); the lexicographic rule takes
  // (0,1) first, after which only (1,0) remains.
  CHECK(sel_i[0]->action == 0);
  CHECK(sel_j[0]->action == 1);
  CHECK(sel_i[1]->action == 1);
  CHECK(sel_j[1]->action == 0);
}

TEST_CASE("select_best breaks value ties uniformly when given an rng") {
  const DecPomdpModel model = demo_model();
  const Belief both_idle = point_mass_belief(2, {1, 1});
  const std::vector<PolicyTreePtr> leaves{make_leaf(0), make_leaf(1)};

  std::set<int> first_actions;
  for (unsigned seed = 0; seed < 64; ++seed) {
    std::mt19937_64 rng(seed);
    const auto [sel_i, sel_j] =
        select_best(leaves, leaves, {both_idle}, 1, model, &rng);
    CHECK(sel_i[0]->action != sel_j[0]->action);  // never the same channel
    first_actions.insert(sel_i[0]->action);
  }
  CHECK(first_actions == std::set<int>{0, 1});
}

TEST_CASE("select_best rejections") {
  const DecPomdpModel model = demo_model();
  const std::vector<PolicyTreePtr> leaves{make_leaf(0)};
  CHECK_THROWS_AS(select_best({}, leaves, {demo_b0()}, 1, model), ValidationError);
  CHECK_THROWS_AS(select_best(leaves, leaves, {}, 1, model), ValidationError);
  CHECK_THROWS_AS(select_best(leaves, leaves, {demo_b0()}, 0, model),
                  ValidationError);

  std::mt19937_64 rng(1);
  const DecPomdpModel solo = test::random_model(rng, 1);
  CHECK_THROWS_AS(
      select_best(leaves, leaves, {test::random_belief(rng, solo.num_states)}, 1,
                  solo),
      UnsupportedModelError);
}

TEST_CASE("candidate pool: dedup, identities, lookups") {
  CandidatePool pool;
  const PolicyTreePtr l0 = make_leaf(0);
  const PolicyTreePtr l1 = make_leaf(1);
  VectorX v(2);
  v << 1.0, 2.0;
  const ValueVector value{v, 1};

  CHECK(pool.insert(JointPolicy{{l0, l1}}, value, {value, value}));
  // Structurally equal trees from fresh allocations are still duplicates.
  CHECK_FALSE(pool.insert(JointPolicy{{make_leaf(0), make_leaf(1)}}, value,
                          {value, value}));
  CHECK(pool.insert(JointPolicy{{l1, l0}}, value, {value, value}));
  REQUIRE(pool.entries().size() == 2);
  CHECK(pool.entries()[0].identity == 1);
  CHECK(pool.entries()[1].identity == 2);
  CHECK(pool.by_identity(2).policy.trees[0]->action == 1);
  CHECK_THROWS_AS(pool.by_identity(5), ValidationError);

  // Equal values at the probe belief: the tie goes to the smaller identity.
  Belief b;
  b.probs.resize(2);
  b.probs << 0.5, 0.5;
  CHECK(pool.best_at(b).identity == 1);

  CHECK(pool.throughput_optimal_identity() == 0);
  pool.set_throughput_optimal(2);
  CHECK(pool.throughput_optimal_identity() == 2);
  CHECK_THROWS_AS(pool.set_throughput_optimal(9), ValidationError);

  CHECK_THROWS_AS(CandidatePool{}.best_at(b), ValidationError);
}

TEST_CASE("mbdp: horizon 1 on the demo scenario") {
  SolverConfig cfg;
  cfg.horizon = 1;
  const CandidatePool pool = mbdp_solve(demo_model(), demo_b0(), cfg);
  REQUIRE(pool.entries().size() == 4);  // 2x2 depth-1 pairs
  const CandidateEntry& best = pool.best_at(demo_b0());
  CHECK(evaluate_at_belief(best.joint_value, demo_b0()) == doctest::Approx(1.0));
  // (sense 1, sense 2) is inserted before (sense 2, sense 1).
  CHECK(best.identity == 2);
  CHECK(pool.throughput_optimal_identity() == 2);
}

TEST_CASE("mbdp matches brute force at horizon 2" *
          doctest::description("property, 100 cases")) {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 100; ++rep) {
    const DecPomdpModel model = test::random_markov_model(rng);
    const Belief b0 = test::random_belief(rng, model.num_states);

    Scalar brute = -1e30;
    for (const PolicyTreePtr& t0 :
         enumerate_trees(model.num_actions[0], model.num_observations[0], 2)) {
      for (const PolicyTreePtr& t1 :
           enumerate_trees(model.num_actions[1], model.num_observations[1], 2)) {
        brute = std::max(brute,
                         test::trajectory_value(model, JointPolicy{{t0, t1}}, b0).joint);
      }
    }

    SolverConfig cfg;
    cfg.horizon = 2;
    cfg.max_trees = 1;  // the final selection still sees the full backup
    cfg.seed = rep;
    const CandidatePool pool = mbdp_solve(model, b0, cfg);
    CHECK(evaluate_at_belief(pool.best_at(b0).joint_value, b0) ==
          doctest::Approx(brute).epsilon(1e-9));
  }
}

TEST_CASE("mbdp with lossless width matches the exhaustive optimum at horizon 3" *
          doctest::description("property, 20 cases")) {
  std::mt19937_64 rng(53);
  for (int rep = 0; rep < 20; ++rep) {
    const DecPomdpModel model = test::random_markov_model(rng);
    const Belief b0 = test::random_belief(rng, model.num_states);
    const Scalar optimum = exhaustive_optimum(model, b0, 3);

    SolverConfig cfg;
    cfg.horizon = 3;
    // Wide enough that no mid-horizon selection ever drops a tree.
    cfg.max_trees = model.num_actions[0] * model.num_actions[0] *
                    model.num_actions[1] * model.num_actions[1] * 4;
    cfg.seed = rep;
    const CandidatePool pool = mbdp_solve(model, b0, cfg);
    CHECK(evaluate_at_belief(pool.best_at(b0).joint_value, b0) ==
          doctest::Approx(optimum).epsilon(1e-9));
  }
}

TEST_CASE("mbdp: demo value equals the horizon, per strict recursion") {
  SolverConfig cfg;
  cfg.max_trees = 3;
  Scalar prev = 0.0;
  for (int t = 1; t <= 6; ++t) {
    cfg.horizon = t;
    const CandidatePool pool = mbdp_solve(demo_model(), demo_b0(), cfg);
    const Scalar v = evaluate_at_belief(pool.best_at(demo_b0()).joint_value, demo_b0());
    CHECK(v == doctest::Approx(static_cast<Scalar>(t)).epsilon(1e-9));
    CHECK(v >= prev - 1e-9);
    CHECK(v <= genie_rmax(test::two_channel_scenario(), t) + 1e-9);
    prev = v;
  }
}

TEST_CASE("mbdp: jittered trials still reach the cap") {
  SolverConfig cfg;
  cfg.horizon = 4;
  cfg.max_trees = 3;
  cfg.trials = 5;
  cfg.seed = 99;
  cfg.belief_jitter = 0.15;
  const CandidatePool pool = mbdp_solve(demo_model(), demo_b0(), cfg);
  CHECK(pool.entries().size() <= 5 * 9);
  CHECK(evaluate_at_belief(pool.best_at(demo_b0()).joint_value, demo_b0()) ==
        doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("mbdp: identical seeds reproduce the pool exactly") {
  SolverConfig cfg;
  cfg.horizon = 4;
  cfg.trials = 3;
  cfg.seed = 2024;
  cfg.belief_jitter = 0.1;
  const CandidatePool a = mbdp_solve(demo_model(), demo_b0(), cfg);
  const CandidatePool b = mbdp_solve(demo_model(), demo_b0(), cfg);
  REQUIRE(a.entries().size() == b.entries().size());
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    CHECK(a.entries()[k].identity == b.entries()[k].identity);
    CHECK((a.entries()[k].joint_value.values - b.entries()[k].joint_value.values)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    for (int i = 0; i < 2; ++i) {
      CHECK(trees_equal(*a.entries()[k].policy.trees[i],
                        *b.entries()[k].policy.trees[i]));
    }
  }
  CHECK(a.throughput_optimal_identity() == b.throughput_optimal_identity());
}

TEST_CASE("mbdp: guard rails") {
  SolverConfig cfg;
  cfg.horizon = 2;
  cfg.max_backup_trees = 3;  // level-2 backup needs 2 * 2^3 = 16
  CHECK_THROWS_AS(mbdp_solve(demo_model(), demo_b0(), cfg), ResourceLimitError);

  std::mt19937_64 rng(11);
  const DecPomdpModel solo = test::random_model(rng, 1);
  SolverConfig ok;
  CHECK_THROWS_AS(mbdp_solve(solo, test::random_belief(rng, solo.num_states), ok),
                  UnsupportedModelError);

  Belief wrong;
  wrong.probs.resize(2);
  wrong.probs << 0.5, 0.5;
  CHECK_THROWS_AS(mbdp_solve(demo_model(), wrong, ok), DimensionError);
}
