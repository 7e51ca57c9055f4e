#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "polyrep/game_io.hpp"

using namespace polyrep;

TEST_SUITE("io") {
  TEST_CASE("numbers") {
    CHECK(parse_number("42") == 42);
    CHECK(parse_number("-3.5") == -3.5);
    CHECK(std::abs(parse_number("1/3") - 1.0 / 3.0) <= 1e-15);
    CHECK(parse_number("-2/4") == -0.5);
    CHECK_THROWS(parse_number("abc"));
    CHECK_THROWS(parse_number("1/0"));
    const Vector v = parse_number_list("0.5, 0.3,0.2");
    REQUIRE(v.size() == 3);
    CHECK(v(1) == 0.3);
  }

  TEST_CASE("reads the worked example") {
    std::istringstream in(
        "# worked example\n"
        "type: 3 2\n"
        "-1 8 -7 3 -3\n"
        "-10 -1 11 3 -3\n"
        "\n"
        "11 -7 -4 -6 6\n"
        "-3 -3 6 0 0\n"
        "3 3 -6 0 0\n");
    const PolymatrixGame g = read_game(in);
    CHECK(g.type == GameType({3, 2}));
    CHECK(g.payoff == fixtures::example_game().payoff);
  }

  TEST_CASE("row count error carries a line number") {
    std::istringstream in("type: 2\n1 2\n3 4\n5 6\n");
    try {
      read_game(in, "bad.game");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() > 0);
      CHECK(std::string(e.what()).find("bad.game") != std::string::npos);
    }
  }

  TEST_CASE("non-numeric token reports line and column") {
    std::istringstream in("type: 2\n1 2\n3 x\n");
    try {
      read_game(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("column 2") != std::string::npos);
    }
  }

  TEST_CASE("fractions in game files") {
    std::istringstream in("type: 2\n1/3 0\n0 2/3\n");
    const PolymatrixGame g = read_game(in);
    CHECK(std::abs(g.payoff(0, 0) - 1.0 / 3.0) <= 1e-15);
  }

  TEST_CASE("round trip") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 20; ++k) {
      const GameType t = fixtures::random_type(rng);
      const PolymatrixGame g = fixtures::random_game(rng, t, k % 2 == 0);
      std::stringstream buf;
      write_game(buf, g);
      const PolymatrixGame back = read_game(buf);
      CHECK(back.type == g.type);
      if (k % 2 == 0) {
        CHECK(back.payoff == g.payoff);
      } else {
        CHECK((back.payoff - g.payoff).cwiseAbs().maxCoeff() <= 1e-15);
      }
    }
  }

  TEST_CASE("format_number") {
    CHECK(format_number(27) == "27");
    CHECK(format_number(-0.0) == "0");
    CHECK(parse_number(format_number(0.1)) == 0.1);
  }
}
