#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "pmk/family.hpp"
#include "pmk/lift.hpp"

using namespace pmk;

namespace {
Rational rat(long n, long d = 1) { return Rational(Integer(n), Integer(d)); }
CirclePoint cp(long n, long d = 1) { return CirclePoint(rat(n, d)); }
}  // namespace

TEST_CASE("circle points reduce modulo one") {
  CHECK(cp(5, 4) == cp(1, 4));
  CHECK(cp(-1, 4) == cp(3, 4));
  CHECK(cp(0) == CirclePoint(Rational(2)));
  CHECK(cp(1, 4) < cp(1, 2));
  CHECK(cp(1, 3).str() == "1/3");
}

TEST_CASE("circle intervals, including wrapping and the punctured circle") {
  CircleInterval arc(cp(1, 2), cp(1, 4));
  CHECK(arc.length() == rat(3, 4));
  CHECK(arc.contains(cp(3, 4)));
  CHECK(arc.contains(cp(0)));
  CHECK_FALSE(arc.contains(cp(1, 2)));
  CHECK_FALSE(arc.contains(cp(1, 4)));
  CHECK_FALSE(arc.contains(cp(1, 3)));
  CHECK_THROWS_AS(CircleInterval(cp(1, 3), cp(1, 3)), Error);

  CircleInterval full = CircleInterval::punctured(cp(0));
  CHECK(full.is_punctured_circle());
  CHECK(full.length() == rat(1));
  CHECK(full.contains(cp(1, 7)));
  CHECK_FALSE(full.contains(cp(0)));
}

TEST_CASE("lift validation") {
  CHECK_THROWS_AS(PLLift({rat(0), rat(1)}, {rat(1, 2), rat(1, 2)}), InvalidLift);
  CHECK_THROWS_AS(PLLift({rat(0), rat(1, 2), rat(1)}, {rat(0), rat(0), rat(1)}),
                  InvalidLift);
  CHECK_THROWS_AS(PLLift({rat(0), rat(1)}, {rat(1, 2), rat(7, 4)}), InvalidLift);
  CHECK_THROWS_AS(PLLift({rat(0), rat(1)}, {rat(1), rat(2)}), InvalidLift);
  CHECK_THROWS_AS(PLLift({rat(0), rat(1, 2)}, {rat(0), rat(1)}), InvalidLift);
  PLLift ok({rat(0), rat(1, 2), rat(1)}, {rat(0), rat(2), rat(0)});
  CHECK(ok.degree() == 0);
  CHECK(ok.slope(0) == rat(4));
  CHECK(ok.slope(1) == rat(-4));
}

TEST_CASE("pointwise evaluation and periodic extension") {
  PLCircleMap m = make_family(2, 2);
  CHECK(m.evaluate(cp(1, 8)) == cp(1, 2));
  CHECK(m.evaluate(cp(3, 4)) == cp(0));
  CHECK(m.evaluate(cp(0)) == cp(0));
  CHECK(m.lift().eval_ext(rat(9, 8)) == rat(1, 2));
  CHECK(m.lift().eval_ext(rat(-7, 8)) == rat(1, 2));
  CHECK(make_family(3, 2).lift().eval_ext(rat(5, 4)) == rat(5, 2));
}

TEST_CASE("valency at folds, regular points and joints") {
  PLCircleMap m = make_family(2, 2);
  CHECK(m.valency(cp(1, 2)) == Valency::PM);
  CHECK(m.valency(cp(0)) == Valency::MP);
  CHECK(m.valency(cp(1, 8)) == Valency::PP);
  CHECK(m.valency(cp(2, 3)) == Valency::MM);
  REQUIRE(m.critical_points().size() == 2);
  CHECK(m.critical_points()[0].first == cp(0));
  CHECK(m.critical_points()[0].second == Valency::MP);
  CHECK(m.critical_points()[1].first == cp(1, 2));
  CHECK(m.critical_points()[1].second == Valency::PM);

  // a breakpoint without a direction change is not critical
  PLCircleMap bent(PLLift({rat(0), rat(1, 2), rat(1)}, {rat(0), rat(2), rat(3)}));
  CHECK(bent.valency(cp(1, 2)) == Valency::PP);
  CHECK(bent.locally_injective());
}

TEST_CASE("expanding and surjective predicates") {
  CHECK(make_family(2, 2).expanding());
  PLCircleMap slow(PLLift({rat(0), rat(1, 2), rat(1)}, {rat(0), rat(3, 2), rat(1)}));
  CHECK_FALSE(slow.expanding());
  CHECK(slow.surjective());
  PLCircleMap narrow(
      PLLift({rat(0), rat(1, 2), rat(1)}, {rat(1, 4), rat(3, 4), rat(1, 4)}));
  CHECK_FALSE(narrow.surjective());
}

TEST_CASE("preimages with valencies, sorted") {
  PLCircleMap m22 = make_family(2, 2);
  auto pre = m22.preimages(cp(0));
  REQUIRE(pre.size() == 4);
  CHECK(pre[0].first == cp(0));
  CHECK(pre[0].second == Valency::MP);
  CHECK(pre[1].first == cp(1, 4));
  CHECK(pre[1].second == Valency::PP);
  CHECK(pre[2].first == cp(1, 2));
  CHECK(pre[2].second == Valency::PM);
  CHECK(pre[3].first == cp(3, 4));
  CHECK(pre[3].second == Valency::MM);

  auto pre32 = make_family(3, 2).preimages(cp(0));
  REQUIRE(pre32.size() == 5);
  CirclePoint want[5] = {cp(0), cp(1, 6), cp(1, 3), cp(1, 2), cp(3, 4)};
  Valency wantv[5] = {Valency::MP, Valency::PP, Valency::PP, Valency::PM,
                      Valency::MM};
  for (int i = 0; i < 5; ++i) {
    CHECK(pre32[i].first == want[i]);
    CHECK(pre32[i].second == wantv[i]);
  }

  // generic point of a degree two map has two branches
  auto pre2 = make_family(3, 2).preimages(cp(1, 5));
  size_t total = 0;
  for (auto& [x, v] : pre2) {
    CHECK(make_family(3, 2).evaluate(x) == cp(1, 5));
    ++total;
  }
  CHECK(total == 5);
}

TEST_CASE("fixed points") {
  auto fixed = make_family(2, 2).fixed_points();
  REQUIRE(fixed.size() == 4);
  CHECK(fixed[0].first == cp(0));
  CHECK(fixed[0].second == Valency::MP);
  CHECK(fixed[1].first == cp(1, 3));
  CHECK(fixed[1].second == Valency::PP);
  CHECK(fixed[2].first == cp(3, 5));
  CHECK(fixed[2].second == Valency::MM);
  CHECK(fixed[3].first == cp(4, 5));
  CHECK(fixed[3].second == Valency::MM);

  // rigid rotation by 1/2 glued from slope-one pieces is rejected
  PLCircleMap ident(PLLift({rat(0), rat(1)}, {rat(0), rat(1)}));
  CHECK_THROWS_AS(ident.fixed_points(), DegeneratePiece);
}

TEST_CASE("composition and iteration of lifts") {
  PLCircleMap m = make_family(2, 2);
  PLLift sq = iterate_lift(m, 2);
  CHECK(sq.pieces() == 8);
  for (size_t i = 0; i < sq.pieces(); ++i)
    CHECK(sq.slope(i).abs() == rat(16));
  CHECK(sq.degree() == 0);

  PLCircleMap m32 = make_family(3, 2);
  PLLift comp = compose_lift(m32.lift(), m.lift());
  CHECK(comp.degree() == m32.degree() * m.degree());
  PLCircleMap cm(comp);
  for (long i = 0; i < 16; ++i) {
    CirclePoint x(rat(i, 16));
    CHECK(cm.evaluate(x) == m32.evaluate(m.evaluate(x)));
  }

  PLCircleMap sq_map(sq);
  for (long i = 0; i < 24; ++i) {
    CirclePoint x(rat(i, 24));
    CHECK(sq_map.evaluate(x) == m.evaluate(m.evaluate(x)));
    CHECK(m.valency_iterate(2, x) == sq_map.valency(x));
  }

  CHECK_THROWS_AS(iterate_lift(m, 6, 20), ResourceLimit);
}

TEST_CASE("extremes over an interval, with attainment flags") {
  PLCircleMap m = make_family(2, 2);
  auto ex = m.lift().extremes(rat(1), rat(2));
  CHECK(ex.min == rat(0));
  CHECK(ex.max == rat(2));
  CHECK(ex.min_at_left);
  CHECK(ex.min_at_right);
  CHECK_FALSE(ex.min_interior);
  CHECK(ex.max_interior);
  CHECK_FALSE(ex.max_at_right);

  auto ex32 = make_family(3, 2).lift().extremes(rat(1), rat(2));
  CHECK(ex32.min == rat(1));
  CHECK(ex32.max == rat(4));
  CHECK(ex32.min_at_left);
  CHECK(ex32.max_interior);

  auto ex2 = m.lift().extremes(rat(1, 4), rat(3, 4));
  CHECK(ex2.min == rat(1));
  CHECK(ex2.max == rat(2));
  CHECK(ex2.min_at_left);
  CHECK(ex2.min_at_right);
  CHECK_FALSE(ex2.min_interior);
  CHECK(ex2.max_interior);
}

namespace {

// random lift with at most three pieces over a coarse rational grid
PLLift random_lift(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pieces_d(1, 3), cut_d(1, 11), val_d(-8, 8),
      start_d(0, 5), deg_d(-2, 2);
  for (;;) {
    int p = pieces_d(rng);
    std::vector<Rational> bp{rat(0)};
    std::vector<int> cuts;
    for (int i = 0; i + 1 < p; ++i) cuts.push_back(cut_d(rng));
    std::sort(cuts.begin(), cuts.end());
    bool dup = false;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
      if (cuts[i] == cuts[i + 1]) dup = true;
    if (dup) continue;
    for (int c : cuts) bp.push_back(rat(c, 12));
    bp.push_back(rat(1));
    std::vector<Rational> vals{rat(start_d(rng), 6)};
    for (int i = 0; i + 1 < p; ++i) vals.push_back(rat(val_d(rng), 6));
    vals.push_back(vals.front() + rat(deg_d(rng)));
    bool flat = false;
    for (size_t i = 0; i + 1 < vals.size(); ++i)
      if (vals[i] == vals[i + 1]) flat = true;
    if (flat) continue;
    return PLLift(bp, vals);
  }
}

}  // namespace

TEST_CASE("one-sided behavior of a composition factors through the orbit") {
  std::mt19937_64 rng(20260817);
  std::uniform_int_distribution<int> num_d(0, 47);
  int checked = 0;
  while (checked < 260) {
    PLCircleMap outer(random_lift(rng));
    PLCircleMap inner(random_lift(rng));
    PLLift composed_lift = compose_lift(outer.lift(), inner.lift());
    PLCircleMap composed(composed_lift);
    std::vector<CirclePoint> samples;
    for (int i = 0; i < 3; ++i) samples.emplace_back(rat(num_d(rng), 48));
    for (const Rational& b : inner.lift().breakpoints())
      if (b < rat(1)) samples.emplace_back(b);
    for (const CirclePoint& x : samples) {
      Valency lhs = composed.valency(x);
      Valency rhs = compose_valency(outer.valency(inner.evaluate(x)), inner.valency(x));
      REQUIRE(lhs == rhs);
      ++checked;
    }
  }
  CHECK(checked >= 260);
}

TEST_CASE("iterated one-sided behavior matches the iterated lift") {
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> num_d(0, 23);
  int checked = 0;
  while (checked < 120) {
    PLCircleMap m(random_lift(rng));
    for (size_t n = 1; n <= 3; ++n) {
      PLCircleMap it(iterate_lift(m, n));
      for (int i = 0; i < 2; ++i) {
        CirclePoint x(rat(num_d(rng), 24));
        REQUIRE(m.valency_iterate(n, x) == it.valency(x));
        REQUIRE(it.evaluate(x) ==
                [&] {
                  CirclePoint y = x;
                  for (size_t j = 0; j < n; ++j) y = m.evaluate(y);
                  return y;
                }());
        ++checked;
      }
    }
  }
  CHECK(checked >= 120);
}
