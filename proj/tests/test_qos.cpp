#include <doctest.h>

#include <random>

#include "osaplan/errors.hpp"
#include "osaplan/qos.hpp"

using namespace osaplan;

namespace {

QosSpec make_spec(std::initializer_list<Scalar> weights, Scalar zeta, Scalar r_max) {
  QosSpec spec;
  spec.weights.resize(static_cast<Eigen::Index>(weights.size()));
  Eigen::Index i = 0;
  for (Scalar w : weights) spec.weights[i++] = w;
  spec.zeta = zeta;
  spec.r_max = r_max;
  return spec;
}

VectorX rewards2(Scalar a, Scalar b) {
  VectorX r(2);
  r << a, b;
  return r;
}

}  // namespace

TEST_CASE("spec validation") {
  QosSpec spec = make_spec({1.5, 1.0}, 0.25, 5.0);
  CHECK_NOTHROW(spec.validate(2));
  CHECK_THROWS_AS(spec.validate(3), DimensionError);
  CHECK_THROWS_AS(make_spec({1.5, 0.0}, 0.25, 5.0).validate(2), ValidationError);
  CHECK_THROWS_AS(make_spec({1.5, 1.0}, -0.1, 5.0).validate(2), ValidationError);
  CHECK_THROWS_AS(make_spec({1.5, 1.0}, 0.25, -1.0).validate(2), ValidationError);
}

TEST_CASE("fairness window for a 3:2 split under 1.5:1 weights") {
  const QosDecision d =
      qos_satisfied(rewards2(3.0, 2.0), make_spec({1.5, 1.0}, 0.25, 5.0));
  CHECK(d.satisfied);
  CHECK(d.lower == doctest::Approx(2.75 / 1.5).epsilon(1e-12));
  CHECK(d.upper == doctest::Approx(3.25 / 1.5).epsilon(1e-12));
  CHECK(d.witness_t == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(d.gap == 0.0);
}

TEST_CASE("zero slack accepts only exact ray points") {
  const QosSpec spec = make_spec({1.5, 1.0}, 0.0, 2.5);
  const QosDecision on = qos_satisfied(rewards2(1.5, 1.0), spec);
  CHECK(on.satisfied);
  CHECK(on.witness_t == doctest::Approx(1.0).epsilon(1e-12));

  const QosDecision off = qos_satisfied(rewards2(1.6, 1.0), spec);
  CHECK_FALSE(off.satisfied);
  CHECK(off.gap > 0.0);
}

TEST_CASE("a starved user breaks the window") {
  const QosDecision d =
      qos_satisfied(rewards2(4.0, 0.0), make_spec({1.5, 1.0}, 0.25, 5.0));
  CHECK_FALSE(d.satisfied);
  CHECK(d.lower == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(d.upper == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(d.gap == doctest::Approx(2.25).epsilon(1e-12));
}

TEST_CASE("all-zero rewards with slack admit a small positive t") {
  const QosDecision d =
      qos_satisfied(rewards2(0.0, 0.0), make_spec({1.5, 1.0}, 0.25, 5.0));
  CHECK(d.satisfied);
  CHECK(d.witness_t > 0.0);
  CHECK(d.witness_t == doctest::Approx(0.125 / 1.5).epsilon(1e-9));
}

TEST_CASE("decision agrees with a dense scan over t" *
          doctest::description("property, 1000 cases")) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<Scalar> weight_die(0.5, 3.0);
  std::uniform_real_distribution<Scalar> zeta_die(0.0, 0.5);
  std::uniform_real_distribution<Scalar> rmax_die(0.0, 6.0);
  std::uniform_real_distribution<Scalar> reward_die(-1.0, 6.0);

  int checked = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const QosSpec spec =
        make_spec({weight_die(rng), weight_die(rng)}, zeta_die(rng), rmax_die(rng));
    const VectorX rewards = rewards2(reward_die(rng), reward_die(rng));
    const QosDecision d = qos_satisfied(rewards, spec);

    if (d.satisfied) {
      // The witness itself must honor every constraint.
      CHECK(d.witness_t > 0.0);
      const Scalar cap = (spec.r_max + 2 * spec.zeta) / spec.weights.sum();
      CHECK(d.witness_t <= cap + 1e-9);
      for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(rewards[i] - spec.weights[i] * d.witness_t) <=
              spec.zeta + 1e-9);
      }
    }

    // Skip knife-edge windows where the grid and the closed form may
    // legitimately disagree.
    if (std::abs(std::max(d.lower, 0.0) - d.upper) < 2e-4) continue;
    ++checked;

    const Scalar cap = (spec.r_max + 2 * spec.zeta) / spec.weights.sum();
    bool grid_hit = false;
    for (Scalar t = 1e-4; t <= cap && !grid_hit; t += 1e-4) {
      bool ok = true;
      for (int i = 0; i < 2 && ok; ++i) {
        ok = std::abs(rewards[i] - spec.weights[i] * t) <= spec.zeta;
      }
      grid_hit = ok;
    }
    CHECK(grid_hit == d.satisfied);
  }
  CHECK(checked > 800);  // the skip rule must stay the exception
}

TEST_CASE("scaling all weights rescales the witness but not the verdict" *
          doctest::description("property, 1000 cases")) {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<Scalar> weight_die(0.2, 3.0);
  std::uniform_real_distribution<Scalar> zeta_die(0.0, 0.5);
  std::uniform_real_distribution<Scalar> reward_die(-1.0, 6.0);
  std::uniform_real_distribution<Scalar> scale_die(0.1, 10.0);

  for (int rep = 0; rep < 1000; ++rep) {
    QosSpec spec =
        make_spec({weight_die(rng), weight_die(rng)}, zeta_die(rng), 8.0);
    const VectorX rewards = rewards2(reward_die(rng), reward_die(rng));
    const Scalar c = scale_die(rng);
    QosSpec scaled = spec;
    scaled.weights *= c;

    const QosDecision a = qos_satisfied(rewards, spec);
    const QosDecision b = qos_satisfied(rewards, scaled);
    CHECK(a.satisfied == b.satisfied);
    if (a.satisfied) {
      CHECK(b.witness_t == doctest::Approx(a.witness_t / c).epsilon(1e-9));
    }
  }
}

namespace {

/// Pool of hand-built single-state candidates; values are read off at the
/// point-mass belief directly.
CandidatePool toy_pool() {
  CandidatePool pool;
  const auto add = [&pool](int action_tag, Scalar joint, Scalar r1, Scalar r2) {
    VectorX vj(1), v1(1), v2(1);
    vj << joint;
    v1 << r1;
    v2 << r2;
    pool.insert(JointPolicy{{make_leaf(action_tag % 2), make_leaf(action_tag / 2)}},
                ValueVector{vj, 1}, {ValueVector{v1, 1}, ValueVector{v2, 1}});
  };
  add(0, 4.0, 2.0, 2.0);   // identity 1
  add(1, 3.9, 2.4, 1.5);   // identity 2
  add(2, 4.0, 2.5, 1.5);   // identity 3
  add(3, 4.0, 2.4, 1.6);   // identity 4
  return pool;
}

Belief unit_belief() {
  Belief b;
  b.probs.resize(1);
  b.probs << 1.0;
  return b;
}

}  // namespace

TEST_CASE("select_policy picks the best feasible candidate") {
  const CandidatePool pool = toy_pool();
  const Belief b0 = unit_belief();

  SUBCASE("1.5:1 weights exclude the even split") {
    const SelectionReport r =
        select_policy(pool, make_spec({1.5, 1.0}, 0.25, 4.0), b0);
    REQUIRE(r.selected_identity.has_value());
    CHECK(*r.selected_identity == 3);  // value tie with 4 resolves to earlier id
    CHECK(r.selected_value == doctest::Approx(4.0));
    CHECK(r.selected_rewards[0] == doctest::Approx(2.5));
    CHECK(r.selected_rewards[1] == doctest::Approx(1.5));
  }

  SUBCASE("1:1 weights keep only the even split among the top candidates") {
    const SelectionReport r =
        select_policy(pool, make_spec({1.0, 1.0}, 0.25, 4.0), b0);
    REQUIRE(r.selected_identity.has_value());
    CHECK(*r.selected_identity == 1);
  }

  SUBCASE("an unreachable ratio reports the closest miss") {
    const SelectionReport r =
        select_policy(pool, make_spec({5.0, 1.0}, 0.25, 4.0), b0);
    CHECK_FALSE(r.selected_identity.has_value());
    CHECK(r.closest_identity == 3);
    CHECK(r.closest_gap == doctest::Approx(0.7).epsilon(1e-9));
  }

  SUBCASE("a huge slack makes the constraint vacuous") {
    const SelectionReport r =
        select_policy(pool, make_spec({5.0, 1.0}, 100.0, 4.0), b0);
    REQUIRE(r.selected_identity.has_value());
    CHECK(*r.selected_identity == 1);  // best joint value, smallest identity
  }
}

TEST_CASE("select_policy rejections") {
  CHECK_THROWS_AS(select_policy(CandidatePool{}, make_spec({1.0, 1.0}, 0.25, 4.0),
                                unit_belief()),
                  ValidationError);
  CHECK_THROWS_AS(select_policy(toy_pool(), make_spec({1.0, 1.0, 1.0}, 0.25, 4.0),
                                unit_belief()),
                  DimensionError);
}
