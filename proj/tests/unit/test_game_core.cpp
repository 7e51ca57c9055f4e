#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "polyrep/game.hpp"

using namespace polyrep;

TEST_SUITE("game_core") {
  TEST_CASE("game type invariants") {
    CHECK_THROWS_AS(GameType(std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS(GameType({2, 0}), std::invalid_argument);
    const GameType t({3, 2});
    CHECK(t.n() == 5);
    CHECK(t.p() == 2);
    CHECK(t.group_of(2) == 0);
    CHECK(t.group_of(3) == 1);
    CHECK(t.group_begin(1) == 3);
    CHECK(t.label() == "(3,2)");
  }

  TEST_CASE("validate_game") {
    CHECK(validate_game(fixtures::example_game()).empty());
    CHECK_FALSE(validate_game(PolymatrixGame{GameType({2}), Matrix::Zero(3, 3)}).empty());
    CHECK(validate_game(PolymatrixGame{GameType({1}), Matrix::Zero(1, 1)}).empty());
    CHECK_THROWS_AS(make_game(GameType({2}), Matrix::Zero(3, 3)), std::invalid_argument);
  }

  TEST_CASE("diagonal scaling rejects non-positive entries") {
    CHECK_THROWS_AS(DiagonalScaling(Vector::Zero(2)), std::invalid_argument);
    Vector d(2);
    d << 1, -1;
    CHECK_THROWS_AS(DiagonalScaling{d}, std::invalid_argument);
    d << 2, 5;
    const Vector e = DiagonalScaling(d).expand(GameType({3, 2}));
    CHECK(e(0) == 2);
    CHECK(e(2) == 2);
    CHECK(e(3) == 5);
  }

  TEST_CASE("games_equivalent") {
    const PolymatrixGame reduced{GameType({2, 2}), fixtures::example_reduced_payoff()};
    CHECK(games_equivalent(reduced, zero_game(GameType({2, 2}))));
    CHECK(games_equivalent(fixtures::example_game(), fixtures::example_game()));
    std::mt19937_64 rng(11);
    const GameType t({2, 2});
    const PolymatrixGame g = fixtures::random_game(rng, t);
    CHECK(games_equivalent(g, PolymatrixGame{t, g.payoff + fixtures::random_equal_row_blocks(rng, t)}));
    Matrix bumped = g.payoff;
    bumped(0, 0) += 1e-6;
    CHECK_FALSE(games_equivalent(g, PolymatrixGame{t, bumped}));
    CHECK_THROWS_AS(games_equivalent(g, zero_game(GameType({4}))), std::invalid_argument);
  }

  TEST_CASE("zero_row_representative") {
    const PolymatrixGame g = fixtures::example_game();
    const PolymatrixGame z = zero_row_representative(g, 2);
    CHECK(z.payoff.row(2).isZero(0));
    CHECK(games_equivalent(g, z));
    CHECK(z.payoff.row(0) == g.payoff.row(0) - g.payoff.row(2));
    CHECK(z.payoff.row(3) == g.payoff.row(3));

    const PolymatrixGame zero = zero_game(GameType({2, 3}));
    CHECK(zero_row_representative(zero, 3).payoff.isZero(0));

    const PolymatrixGame r = fixtures::rps();
    const PolymatrixGame r0 = zero_row_representative(r, 0);
    CHECK(r0.payoff.row(0).isZero(0));
    std::mt19937_64 rng(5);
    for (int k = 0; k < 5; ++k) {
      const Vector x = fixtures::random_state(rng, r.type);
      CHECK((vector_field(r, x) - vector_field(r0, x)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("vector field examples") {
    const PolymatrixGame g = fixtures::example_game();
    CHECK(vector_field(g, fixtures::example_q()).cwiseAbs().maxCoeff() <= 1e-14);

    Vector vertex(5);
    vertex << 0, 1, 0, 1, 0;
    const Vector v = vector_field(g, vertex);
    CHECK(v.cwiseAbs().maxCoeff() == 0.0);
    CHECK(vector_field(zero_game(g.type), fixtures::example_q()).isZero(0));
  }

  TEST_CASE("vector field matches the term-by-term oracle and is tangent") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 200; ++k) {
      const GameType t = fixtures::random_type(rng);
      const PolymatrixGame g = fixtures::random_game(rng, t);
      const Vector x = fixtures::random_state(rng, t);
      const Vector v = vector_field(g, x);
      CHECK((v - oracles::replicator_loops(g, x)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(in_tangent_space(t, v, 1e-10));
    }
  }

  TEST_CASE("face invariance is exact") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
      const GameType t = fixtures::random_type(rng);
      if (t.group_size(0) < 2) continue;
      const PolymatrixGame g = fixtures::random_game(rng, t);
      Vector x = fixtures::random_state(rng, t);
      x(0) = 0.0;
      x.segment(0, t.group_size(0)) /= x.segment(0, t.group_size(0)).sum();
      CHECK(vector_field(g, x)(0) == 0.0);
    }
  }

  TEST_CASE("equivalent games have equal vector fields") {
    std::mt19937_64 rng(8);
    const GameType t({3, 2});
    const PolymatrixGame g = fixtures::random_game(rng, t);
    const PolymatrixGame h{t, g.payoff + fixtures::random_equal_row_blocks(rng, t)};
    REQUIRE(games_equivalent(g, h));
    for (int k = 0; k < 100; ++k) {
      const Vector x = fixtures::random_state(rng, t);
      CHECK((vector_field(g, x) - vector_field(h, x)).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  TEST_CASE("equal-row blocks iff C e_k is orthogonal to H for every k") {
    std::mt19937_64 rng(13);
    const GameType t({2, 3});
    auto perp_to_h = [&](const Matrix& c) {
      for (int k = 0; k < t.n(); ++k) {
        const Vector col = c.col(k);
        for (int a = 0; a < t.p(); ++a) {
          const auto seg = col.segment(t.group_begin(a), t.group_size(a));
          if ((seg.array() - seg(0)).abs().maxCoeff() > 1e-12) return false;
        }
      }
      return true;
    };
    for (int k = 0; k < 20; ++k) {
      const Matrix c = fixtures::random_equal_row_blocks(rng, t);
      CHECK(has_equal_row_blocks(t, c));
      CHECK(perp_to_h(c));
      const Matrix d = fixtures::random_matrix(rng, t.n(), t.n());
      CHECK(has_equal_row_blocks(t, d) == perp_to_h(d));
      CHECK_FALSE(has_equal_row_blocks(t, d));
    }
  }

  TEST_CASE("formal equilibria") {
    const EquilibriumSet eq = formal_equilibria(fixtures::example_game());
    REQUIRE(eq.consistent);
    const Vector diff = fixtures::example_q() - eq.particular;
    const Vector residual = diff - eq.basis * (eq.basis.transpose() * diff);
    CHECK(residual.norm() <= 1e-9);

    const EquilibriumSet z = formal_equilibria(zero_game(GameType({2, 2})));
    REQUIRE(z.consistent);
    CHECK((z.particular - barycenter(GameType({2, 2}))).norm() <= 1e-12);
    CHECK(z.dimension() == 2);

    Matrix skew(2, 2);
    skew << 0, 1, -1, 0;
    CHECK_FALSE(formal_equilibria(PolymatrixGame{GameType({2}), skew}).consistent);
  }

  TEST_CASE("members of the equilibrium set satisfy the defining equations") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 30; ++k) {
      const GameType t = fixtures::random_type(rng);
      const PolymatrixGame g = fixtures::random_game(rng, t);
      const EquilibriumSet eq = formal_equilibria(g);
      if (!eq.consistent) continue;
      Vector c(eq.dimension());
      for (int j = 0; j < c.size(); ++j) c(j) = std::normal_distribution<double>(0, 1)(rng);
      const Vector q = eq.particular + eq.basis * c;
      const Vector aq = g.payoff * q;
      for (int a = 0; a < t.p(); ++a) {
        CHECK(std::abs(q.segment(t.group_begin(a), t.group_size(a)).sum() - 1.0) <= 1e-9);
        for (int i = t.group_begin(a); i < t.group_end(a); ++i) {
          CHECK(std::abs(aq(i) - aq(t.group_begin(a))) <= 1e-9 * std::max(1.0, q.norm()));
        }
      }
    }
  }

  TEST_CASE("interior equilibria") {
    const EquilibriumSet eq = interior_equilibria(fixtures::example_game());
    CHECK(eq.interior);
    CHECK(max_speed(fixtures::example_game(), eq.particular) <= 1e-12);

    const EquilibriumSet r = interior_equilibria(fixtures::rps());
    REQUIRE(r.interior);
    CHECK((r.particular - Vector::Constant(3, 1.0 / 3)).norm() <= 1e-12);

    // (Aq)_1 = (Aq)_2 and q_1 + q_2 = 1 force q = (3/2, -1/2).
    Matrix a(2, 2);
    a << 1, 3, 0, 0;
    const EquilibriumSet neg = interior_equilibria(PolymatrixGame{GameType({2}), a});
    REQUIRE(neg.consistent);
    CHECK(neg.particular(1) == doctest::Approx(-0.5));
    CHECK_FALSE(neg.interior);
  }

  TEST_CASE("interior point found along the direction space") {
    // Zero game: the min-norm solution is already interior; a game whose
    // equilibrium set is a segment reaching outside the prism still has an
    // interior member.
    const EquilibriumSet z = interior_equilibria(zero_game(GameType({3})));
    CHECK(z.interior);
    CHECK(z.particular.minCoeff() > 0);
  }
}
