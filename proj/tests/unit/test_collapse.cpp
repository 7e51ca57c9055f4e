#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "polyrep/collapse.hpp"
#include "polyrep/dissipativity.hpp"

using namespace polyrep;

namespace {

Matrix delete_index(const Matrix& m, int idx) {
  Matrix out(m.rows() - 1, m.cols() - 1);
  for (int r = 0, rr = 0; r < m.rows(); ++r) {
    if (r == idx) continue;
    for (int c = 0, cc = 0; c < m.cols(); ++c) {
      if (c != idx) out(rr, cc++) = m(r, c);
    }
    ++rr;
  }
  return out;
}

/// A point of the slice {x_3 = 1/3} of the worked example where the third
/// velocity vanishes, found by bisection along a random segment in the slice.
std::optional<Vector> tangency_point(std::mt19937_64& rng, const PolymatrixGame& g) {
  std::uniform_real_distribution<double> u(0.02, 0.98);
  auto slice_point = [&] {
    Vector x(5);
    const double a = u(rng), b = u(rng);
    x << a * 2.0 / 3, (1 - a) * 2.0 / 3, 1.0 / 3, b, 1 - b;
    return x;
  };
  const Vector xa = slice_point(), xb = slice_point();
  auto f = [&](double s) { return vector_field(g, xa + s * (xb - xa))(2); };
  const double s = oracles::bisect(f, 0.0, 1.0, 1e-15);
  if (std::isnan(s)) return std::nullopt;
  return Vector(xa + s * (xb - xa));
}

PolymatrixGame damped_single_group(std::mt19937_64& rng, const Vector& q) {
  Matrix a = fixtures::random_skew(rng, 3);
  a(2, 2) -= 1.0;
  return fixtures::with_equilibrium(PolymatrixGame{GameType({3}), a}, q);
}

}  // namespace

TEST_SUITE("collapse") {
  TEST_CASE("worked example (q,3)-reduction") {
    const PolymatrixGame r = q_ell_reduction(fixtures::example_game(), fixtures::example_q(), 2);
    CHECK(r.type == GameType({2, 2}));
    CHECK((r.payoff - fixtures::example_reduced_payoff()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(games_equivalent(r, zero_game(GameType({2, 2}))));

    const Vector qr = reduce_equilibrium(fixtures::example_game().type, fixtures::example_q(), 2);
    CHECK((qr - Vector::Constant(4, 0.5)).cwiseAbs().maxCoeff() <= 1e-15);
  }

  TEST_CASE("zero game reduces to the zero game") {
    std::mt19937_64 rng(131);
    const GameType t({3, 2, 2});
    for (int ell = 0; ell < t.n(); ++ell) {
      const PolymatrixGame r = q_ell_reduction(zero_game(t), fixtures::random_state(rng, t), ell);
      CHECK(r.payoff.isZero(0));
      CHECK(r.type.n() == t.n() - 1);
    }
  }

  TEST_CASE("direct formula agrees with the zero-row path") {
    std::mt19937_64 rng(137);
    const GameType t({3, 2});
    for (int k = 0; k < 100; ++k) {
      const PolymatrixGame g = fixtures::random_game(rng, t);
      const Vector q = fixtures::random_state(rng, t);
      for (int ell = 0; ell < t.n(); ++ell) {
        const PolymatrixGame a = q_ell_reduction(g, q, ell);
        const PolymatrixGame b = oracles::reduction_via_zero_row(g, q, ell);
        REQUIRE(a.type == b.type);
        CHECK(games_equivalent(a, b));
      }
    }
  }

  TEST_CASE("rejected inputs") {
    const PolymatrixGame g = fixtures::example_game();
    Vector q = fixtures::example_q();
    q(2) = 1.0;
    CHECK_THROWS_AS(q_ell_reduction(g, q, 2), std::invalid_argument);
    q(2) = 0.0;
    CHECK_THROWS_AS(q_ell_reduction(g, q, 2), std::invalid_argument);
    const PolymatrixGame single{GameType({1, 2}), Matrix::Zero(3, 3)};
    Vector qs(3);
    qs << 1, 0.5, 0.5;
    CHECK_THROWS_AS(q_ell_reduction(single, qs, 0), std::invalid_argument);
    CHECK_THROWS_AS(cardinal2_cleanup(g, fixtures::example_q(), 0), std::invalid_argument);
    CHECK_THROWS_AS(drop_singleton_group(g, 0), std::invalid_argument);
    CHECK_THROWS_AS(drop_singleton_group(PolymatrixGame{GameType({1}), Matrix::Zero(1, 1)}, 0),
                    std::invalid_argument);
  }

  TEST_CASE("cardinal-2 cleanup") {
    const GameType t22({2, 2});
    const Vector half = Vector::Constant(4, 0.5);
    const PolymatrixGame z = cardinal2_cleanup(zero_game(t22), half, 1);
    CHECK(z.type == GameType({2}));
    CHECK(z.payoff.isZero(0));

    const PolymatrixGame red{t22, fixtures::example_reduced_payoff()};
    for (int ell = 0; ell < 4; ++ell) {
      const PolymatrixGame c = cardinal2_cleanup(red, half, ell);
      CHECK(c.type == GameType({2}));
      CHECK(games_equivalent(c, zero_game(GameType({2}))));
    }
  }

  TEST_CASE("dropping a pinned group preserves the flow of the others") {
    std::mt19937_64 rng(139);
    for (int k = 0; k < 30; ++k) {
      const GameType t({2, 1, 3});
      const PolymatrixGame g = fixtures::random_game(rng, t);
      const PolymatrixGame d = drop_singleton_group(g, 1);
      CHECK(d.type == GameType({2, 3}));
      const Vector x = fixtures::random_state(rng, t);
      Vector y(5);
      y << x(0), x(1), x(3), x(4), x(5);
      const Vector vx = vector_field(g, x);
      Vector vx_kept(5);
      vx_kept << vx(0), vx(1), vx(3), vx(4), vx(5);
      CHECK((vector_field(d, y) - vx_kept).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("reduce_by_set") {
    const SetReduction r = reduce_by_set(fixtures::example_game(), fixtures::example_q(), {2});
    CHECK((r.game.payoff - fixtures::example_reduced_payoff()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(r.psi.kept == std::vector<int>{0, 1, 3, 4});
    CHECK((r.psi.scale - (Vector(4) << 1.5, 1.5, 1, 1).finished()).cwiseAbs().maxCoeff() <= 1e-15);
    REQUIRE(r.steps.size() == 1);
    CHECK(r.steps[0].scaling_factor == doctest::Approx(1.5));
    const Vector y = r.psi.apply(fixtures::example_q());
    CHECK((r.psi.lift(y, fixtures::example_q()) - fixtures::example_q()).norm() <= 1e-15);

    const SetReduction id = reduce_by_set(fixtures::example_game(), fixtures::example_q(), {});
    CHECK(id.game.payoff == fixtures::example_game().payoff);
    CHECK(id.steps.empty());
    CHECK(id.psi.kept == std::vector<int>{0, 1, 2, 3, 4});

    CHECK_THROWS_AS(reduce_by_set(fixtures::example_game(), fixtures::example_q(), {7}), std::invalid_argument);
  }

  TEST_CASE("reduce_by_set drops groups that shrink to one strategy") {
    const SetReduction r =
        reduce_by_set(PolymatrixGame{GameType({2, 2}), fixtures::example_reduced_payoff()}, Vector::Constant(4, 0.5), {3});
    CHECK(r.game.type == GameType({2}));
    CHECK(r.steps[0].group_dropped);
    CHECK(r.psi.kept == std::vector<int>{0, 1});
  }

  TEST_CASE("removal order across groups does not matter") {
    std::mt19937_64 rng(149);
    const GameType t({3, 3});
    for (int k = 0; k < 50; ++k) {
      const PolymatrixGame g = fixtures::random_game(rng, t);
      const Vector q = fixtures::random_state(rng, t);
      const int a = static_cast<int>(rng() % 3), b = 3 + static_cast<int>(rng() % 3);
      // a first, then b (index b shifts down by one).
      const PolymatrixGame ga = q_ell_reduction(g, q, a);
      const PolymatrixGame gab = q_ell_reduction(ga, reduce_equilibrium(t, q, a), b - 1);
      const PolymatrixGame gb = q_ell_reduction(g, q, b);
      const PolymatrixGame gba = q_ell_reduction(gb, reduce_equilibrium(t, q, b), a);
      CHECK(games_equivalent(gab, gba));
      CHECK(games_equivalent(gab, reduce_by_set(g, q, {a, b}).game));
      CHECK(games_equivalent(gab, reduce_by_set(g, q, {b, a}).game));
    }
  }

  TEST_CASE("diag transport: (A(l) D')_v' is (A D)_v without l") {
    std::mt19937_64 rng(151);
    for (int k = 0; k < 200; ++k) {
      const GameType t = fixtures::random_type(rng, 3, 4);
      const PolymatrixGame g = fixtures::random_game(rng, t, true);
      const DiagonalScaling d = fixtures::random_scaling(rng, t.p(), true);
      const auto verts = enumerate_vertices(t);
      const VertexLabel v = verts[rng() % verts.size()];
      std::vector<int> candidates;
      for (int i = 0; i < t.n(); ++i)
        if (v.chosen[t.group_of(i)] != i && t.group_size(t.group_of(i)) >= 3) candidates.push_back(i);
      if (candidates.empty()) continue;
      const int ell = candidates[rng() % candidates.size()];
      const int alpha = t.group_of(ell);
      Vector q = fixtures::random_state(rng, t);
      // q_l = 1/2 keeps every factor a power of two, so the check is exact.
      q.segment(t.group_begin(alpha), t.group_size(alpha)) *= 0.5 / (1.0 - q(ell));
      q(ell) = 0.5;
      const PolymatrixGame red = q_ell_reduction(g, q, ell);
      Vector dd = d.per_group();
      dd(alpha) *= 2.0;
      VertexLabel vr = v;
      for (int& c : vr.chosen)
        if (c > ell) --c;
      const VertexMatrix full = vertex_matrix(times_diagonal(g, d), v);
      const Matrix expect = delete_index(full.entries, full.position(ell));
      CHECK(vertex_matrix(times_diagonal(red, DiagonalScaling(dd)), vr).entries == expect);
    }
  }

  TEST_CASE("hamiltonian collapse of the worked example") {
    const CollapseResult c = hamiltonian_collapse(fixtures::example_game());
    REQUIRE(c.steps.size() == 1);
    CHECK(c.steps[0].removed == 2);
    CHECK(c.steps[0].after == GameType({2, 2}));
    CHECK(c.steps[0].scaling_factor == doctest::Approx(1.5));
    CHECK((c.final_game.payoff - fixtures::example_reduced_payoff()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(c.certificate.per_group().isApprox((Vector(2) << 1.5, 1).finished()));
    CHECK(check_with_scaling(c.final_game, c.certificate).kind == GameKind::conservative);
    CHECK(c.vertex.label() == "(1,3)");
    CHECK(max_speed(c.final_game, c.final_equilibrium) <= 1e-10);
    CHECK(games_equivalent(c.final_game, zero_game(GameType({2, 2}))));
  }

  TEST_CASE("conservative input collapses in zero steps") {
    const CollapseResult c = hamiltonian_collapse(fixtures::rps());
    CHECK(c.steps.empty());
    CHECK(c.final_game.payoff == fixtures::rps().payoff);
    CHECK(check_with_scaling(c.final_game, c.certificate).kind == GameKind::conservative);
  }

  TEST_CASE("single-group game with one damped strategy") {
    std::mt19937_64 rng(157);
    for (int k = 0; k < 10; ++k) {
      const Vector q = fixtures::random_state(rng, GameType({3}));
      const PolymatrixGame g = damped_single_group(rng, q);
      const CollapseResult c = hamiltonian_collapse(g, q);
      REQUIRE(c.steps.size() == 1);
      CHECK(c.steps[0].removed == 2);
      CHECK(c.final_game.type == GameType({2}));
      CHECK(check_with_scaling(c.final_game, c.certificate).kind == GameKind::conservative);
      CHECK(max_speed(c.final_game, c.final_equilibrium) <= 1e-10);
    }
  }

  TEST_CASE("random admissible games collapse to certified conservative games") {
    std::mt19937_64 rng(163);
    int done = 0;
    while (done < 30) {
      const GameType t = fixtures::random_type(rng, 3, 3);
      const Vector q = fixtures::random_state(rng, t);
      const PolymatrixGame g = fixtures::random_dissipative(rng, t, q);
      if (!admissible(g).admissible) continue;
      ++done;
      CollapseResult c;
      CHECK_NOTHROW(c = hamiltonian_collapse(g, q));
      CHECK(check_with_scaling(c.final_game, c.certificate).kind == GameKind::conservative);
      CHECK(max_speed(c.final_game, c.final_equilibrium) <= 1e-10);
      CHECK((c.psi.apply(q) - c.final_equilibrium).cwiseAbs().maxCoeff() <= 1e-12);
      const VertexMatrix vm = vertex_matrix(times_diagonal(c.final_game, c.certificate), c.vertex);
      for (int i = 0; i < vm.entries.rows(); ++i) CHECK(std::abs(vm.entries(i, i)) <= 1e-9);
    }
  }

  TEST_CASE("collapse rejects bad inputs") {
    std::mt19937_64 rng(167);
    const Vector uniform = Vector::Constant(4, 0.25);
    const PolymatrixGame skew =
        fixtures::with_equilibrium(PolymatrixGame{GameType({4}), fixtures::random_skew(rng, 4)}, uniform);
    CHECK_THROWS_AS(hamiltonian_collapse(skew, uniform),
                    std::invalid_argument);
    Vector off = fixtures::example_q();
    off(0) += 0.1;
    off(1) -= 0.1;
    CHECK_THROWS_AS(hamiltonian_collapse(fixtures::example_game(), off), std::invalid_argument);
    Vector boundary = fixtures::example_q();
    boundary(0) = 0;
    boundary(1) = 2.0 / 3;
    CHECK_THROWS_AS(hamiltonian_collapse(fixtures::example_game(), boundary), std::invalid_argument);
  }

  TEST_CASE("slice consistency at tangency points") {
    const PolymatrixGame g = fixtures::example_game();
    const SetReduction r = reduce_by_set(g, fixtures::example_q(), {2});
    std::mt19937_64 rng(173);
    int found = 0;
    for (int attempt = 0; attempt < 2000 && found < 20; ++attempt) {
      const auto x = tangency_point(rng, g);
      if (!x) continue;
      ++found;
      const Vector vx = vector_field(g, *x);
      CHECK(std::abs(vx(2)) <= 1e-12);
      const Vector pushed = r.psi.apply(vx);
      const Vector vr = vector_field(r.game, r.psi.apply(*x));
      CHECK((pushed - vr).cwiseAbs().maxCoeff() <= 1e-8);
    }
    CHECK(found == 20);
  }
}
