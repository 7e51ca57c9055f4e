#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "polyrep/game.hpp"

namespace polyrep {

/// Malformed input. line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Integer, decimal, or simple fraction "p/q".
double parse_number(std::string_view token);

/// Comma and/or whitespace separated numbers ("0.5,0.3,0.2").
Vector parse_number_list(std::string_view text);

// Game file format:
//
//   # comment lines start with '#'
//   type: 3 2
//   -1 8 -7 3 -3
//   ... (n rows of n numbers)
PolymatrixGame read_game(std::istream& in, const std::string& source = "<input>");
PolymatrixGame read_game_file(const std::string& path);

/// Square matrix, one row per line, comments allowed.
Matrix read_matrix(std::istream& in, const std::string& source = "<input>");
Matrix read_matrix_file(const std::string& path);

/// Integers print as integers; other values print in shortest round-trip form.
std::string format_number(double value);

void write_game(std::ostream& out, const PolymatrixGame& game);
void write_game_file(const std::string& path, const PolymatrixGame& game);

}  // namespace polyrep
