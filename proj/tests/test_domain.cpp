#include <cmath>
#include <vector>

#include "coil/domain.hpp"
#include "doctest.h"

using namespace coil;

namespace {

TaskFeatures task_of(int32_t variety) {
  TaskFeatures t;
  t.variety = variety;
  return t;
}

PreferenceSpace goals(int32_t k) {
  PreferenceSpace p;
  for (int32_t i = 0; i < k; ++i) p.params.push_back("goal-" + std::to_string(i));
  return p;
}

CostProfile med() {
  return {10.0, 80.0, 20.0, 100.0, 100.0, 100.0};
}

Belief uniform(int32_t k) {
  Belief b;
  b.probs.assign(static_cast<size_t>(k), 1.0 / k);
  return b;
}

Belief delta(int32_t k, int32_t at) {
  Belief b;
  b.probs.assign(static_cast<size_t>(k), 0.0);
  b.probs[static_cast<size_t>(at)] = 1.0;
  return b;
}

}  // namespace

TEST_SUITE("domain") {
  TEST_CASE("rho_safe is an exact variety and preference indicator") {
    Skill s{4, 1};
    CHECK(rho_safe(s, task_of(4), 1) == doctest::Approx(1.0));
    CHECK(rho_safe(s, task_of(4), 0) == doctest::Approx(0.0));
    CHECK(rho_safe(s, task_of(7), 1) == doctest::Approx(0.0));
  }

  TEST_CASE("teach mean follows the Beta closed form") {
    CHECK(teach_mean({1.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(teach_mean({3.0, 2.0}) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(teach_mean({1.0, 3.0}) == doctest::Approx(0.25).epsilon(1e-12));
  }

  TEST_CASE("teach update increments the matching count") {
    TeachModel m{1.0, 1.0};
    TeachModel up = teach_update(m, true);
    CHECK(up.alpha == doctest::Approx(2.0));
    CHECK(up.beta == doctest::Approx(1.0));

    TeachModel down = teach_update(m, false);
    CHECK(down.alpha == doctest::Approx(1.0));
    CHECK(down.beta == doctest::Approx(2.0));
    CHECK(teach_mean(down) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    TeachModel mixed = teach_update({2.0, 1.0}, false);
    CHECK(teach_mean(mixed) == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("teach mean moves strictly with each observation") {
    for (double a : {0.5, 1.0, 3.0, 10.0}) {
      for (double b : {0.5, 1.0, 2.0, 7.0}) {
        TeachModel m{a, b};
        CHECK(teach_mean(teach_update(m, true)) > teach_mean(m));
        CHECK(teach_mean(teach_update(m, false)) < teach_mean(m));
      }
    }
  }

  TEST_CASE("teach book keys posteriors per variety under a shared prior") {
    TeachBook book;
    book.prior = {1.0, 1.0};
    CHECK(book.mean_for(3) == doctest::Approx(0.5));
    book.update(3, false);
    CHECK(book.mean_for(3) == doctest::Approx(1.0 / 3.0));
    CHECK(book.mean_for(4) == doctest::Approx(0.5));  // untouched variety
    book.update(3, false);
    CHECK(book.mean_for(3) == doctest::Approx(0.25));
  }

  TEST_CASE("expected return evaluates the penalty formula") {
    auto p = med();
    auto t = task_of(0);
    Skill s{0, 0};
    CHECK(expected_return(s, t, 0, delta(3, 0), 1.0, p) == doctest::Approx(0.0));
    CHECK(std::fabs(expected_return(s, t, 0, delta(3, 0), 0.5, p) - (-50.0)) < 1e-9);
    CHECK(std::fabs(expected_return(s, t, 0, uniform(3), 1.0, p) - (-200.0 / 3.0)) < 1e-9);
  }

  TEST_CASE("expected return stays within its penalty range") {
    auto p = med();
    for (int32_t variety : {0, 1}) {
      for (int32_t theta = 0; theta < 3; ++theta) {
        for (double lam : {0.0, 0.3, 1.0}) {
          Belief b = uniform(3);
          b.probs = {0.2, 0.5, 0.3};
          double r = expected_return(Skill{variety, 1}, task_of(0), theta, b, lam, p);
          CHECK(r <= 0.0 + 1e-12);
          CHECK(r >= -(p.c_skill_fail + p.c_pref_fail) - 1e-12);
        }
      }
    }
  }

  TEST_CASE("best theta maximizes the return with stable ties") {
    auto p = med();
    auto prefs = goals(2);
    auto t = task_of(0);

    Belief skewed;
    skewed.probs = {0.7, 0.3};
    auto a = best_theta(Skill{0, 0}, t, skewed, 1.0, p, prefs);
    CHECK(a.theta == 0);  // both terms favor theta 0

    auto b = best_theta(Skill{0, 1}, t, uniform(2), 1.0, p, prefs);
    CHECK(b.theta == 1);  // preference term ties, safety term breaks it

    Belief sure;
    sure.probs = {1.0, 0.0};
    auto c = best_theta(Skill{9, 0}, t, sure, 1.0, p, prefs);  // rho = 0 everywhere
    CHECK(c.theta == 0);
    CHECK(c.value == doctest::Approx(-p.c_skill_fail));

    // Exact tie: rho = 0 for every theta and a uniform belief; earliest wins.
    auto d = best_theta(Skill{9, 0}, t, uniform(2), 1.0, p, prefs);
    CHECK(d.theta == 0);
  }

  TEST_CASE("belief update collapses the queried and future same-variety tasks") {
    std::vector<TaskFeatures> tasks = {task_of(1), task_of(2), task_of(5),
                                       task_of(3), task_of(9), task_of(5),
                                       task_of(7)};
    std::vector<Belief> beliefs(tasks.size(), uniform(3));
    beliefs[0].probs = {0.2, 0.3, 0.5};  // past tasks must stay untouched
    beliefs[1].probs = {0.9, 0.05, 0.05};

    auto updated = belief_update(beliefs, tasks, 2, 0);
    CHECK(updated[0].probs == beliefs[0].probs);
    CHECK(updated[1].probs == beliefs[1].probs);
    CHECK(updated[2].probs == std::vector<double>{1.0, 0.0, 0.0});
    CHECK(updated[3].probs == beliefs[3].probs);  // different variety
    CHECK(updated[4].probs == beliefs[4].probs);
    CHECK(updated[5].probs == std::vector<double>{1.0, 0.0, 0.0});  // same variety, future
    CHECK(updated[6].probs == beliefs[6].probs);

    for (const Belief& b : updated) CHECK_NOTHROW(b.validate(3));
  }

  TEST_CASE("belief update on the last task touches only that task") {
    std::vector<TaskFeatures> tasks = {task_of(5), task_of(5), task_of(5)};
    std::vector<Belief> beliefs(tasks.size(), uniform(3));
    auto updated = belief_update(beliefs, tasks, 2, 1);
    CHECK(updated[0].probs == beliefs[0].probs);
    CHECK(updated[1].probs == beliefs[1].probs);
    CHECK(updated[2].probs == std::vector<double>{0.0, 1.0, 0.0});
  }

  TEST_CASE("belief update rejects zero-mass responses") {
    std::vector<TaskFeatures> tasks = {task_of(1)};
    std::vector<Belief> beliefs = {delta(3, 0)};
    CHECK_THROWS_AS(belief_update(beliefs, tasks, 0, 2), DegenerateBeliefError);
  }

  TEST_CASE("map preference uses argmax with earliest-index ties") {
    Belief b1;
    b1.probs = {0.1, 0.9};
    CHECK(map_pref(b1) == 1);
    CHECK(map_pref(uniform(3)) == 0);
    CHECK(map_pref(delta(3, 2)) == 2);
  }

  TEST_CASE("belief validation and entropy") {
    CHECK_THROWS_AS(uniform(3).validate(2), DomainError);  // size mismatch
    Belief neg;
    neg.probs = {1.2, -0.2};
    CHECK_THROWS_AS(neg.validate(2), DomainError);
    Belief off;
    off.probs = {0.6, 0.6};
    CHECK_THROWS_AS(off.validate(2), DomainError);

    CHECK(uniform(3).entropy() == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(delta(3, 1).entropy() == doctest::Approx(0.0));
  }

  TEST_CASE("profile and preference space validation") {
    CHECK_NOTHROW(med().validate());
    CostProfile bad = med();
    bad.c_skill = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    PreferenceSpace empty;
    CHECK_THROWS_AS(empty.validate(), DomainError);
    PreferenceSpace dup;
    dup.params = {"a", "a"};
    CHECK_THROWS_AS(dup.validate(), DomainError);
  }
}
