#include "polyrep/game_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace polyrep {

ParseError::ParseError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + what
                                  : source + ": " + what),
      line_(line) {}

namespace {

double parse_decimal(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
    throw std::invalid_argument("not a number: '" + std::string(token) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Line {
  int number;
  std::string text;
};

// Non-blank, non-comment lines with their 1-based line numbers.
std::vector<Line> content_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  int number = 0;
  while (std::getline(in, text)) {
    ++number;
    const auto t = trim(text);
    if (t.empty() || t.front() == '#') continue;
    lines.push_back({number, std::string(t)});
  }
  return lines;
}

Eigen::RowVectorXd parse_row(const Line& line, const std::string& source) {
  const auto tokens = split_ws(line.text);
  Eigen::RowVectorXd row(static_cast<Eigen::Index>(tokens.size()));
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    try {
      row(static_cast<Eigen::Index>(k)) = parse_number(tokens[k]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line.number, "column " + std::to_string(k + 1) + ": " + e.what());
    }
  }
  return row;
}

}  // namespace

double parse_number(std::string_view token) {
  token = trim(token);
  const auto slash = token.find('/');
  if (slash == std::string_view::npos) return parse_decimal(token);
  const double num = parse_decimal(token.substr(0, slash));
  const double den = parse_decimal(token.substr(slash + 1));
  if (den == 0.0) throw std::invalid_argument("zero denominator in '" + std::string(token) + "'");
  return num / den;
}

Vector parse_number_list(std::string_view text) {
  std::string normalized(text);
  for (char& c : normalized) {
    if (c == ',' || c == ';') c = ' ';
  }
  const auto tokens = split_ws(normalized);
  Vector out(static_cast<Eigen::Index>(tokens.size()));
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = parse_number(tokens[k]);
  }
  return out;
}

PolymatrixGame read_game(std::istream& in, const std::string& source) {
  const auto lines = content_lines(in);
  if (lines.empty()) throw ParseError(source, 0, "empty game file");

  const Line& header = lines.front();
  constexpr std::string_view key = "type:";
  if (header.text.rfind(key, 0) != 0) {
    throw ParseError(source, header.number, "expected 'type: n_1 ... n_p'");
  }
  std::vector<int> groups;
  for (auto tok : split_ws(std::string_view(header.text).substr(key.size()))) {
    int value = 0;
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || end != tok.data() + tok.size() || value < 1) {
      throw ParseError(source, header.number, "bad group size '" + std::string(tok) + "'");
    }
    groups.push_back(value);
  }
  if (groups.empty()) throw ParseError(source, header.number, "type lists no groups");
  GameType type(groups);
  const int n = type.n();

  const int rows = static_cast<int>(lines.size()) - 1;
  if (rows != n) {
    const int at = rows > n ? lines[n + 1].number : lines.back().number;
    throw ParseError(source, at,
                     "type " + type.label() + " needs " + std::to_string(n) + " payoff rows, found " +
                         std::to_string(rows));
  }
  Matrix payoff(n, n);
  for (int i = 0; i < n; ++i) {
    const auto row = parse_row(lines[i + 1], source);
    if (row.size() != n) {
      throw ParseError(source, lines[i + 1].number,
                       "expected " + std::to_string(n) + " numbers, found " + std::to_string(row.size()));
    }
    payoff.row(i) = row;
  }
  return PolymatrixGame{std::move(type), std::move(payoff)};
}

PolymatrixGame read_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return read_game(in, path);
}

Matrix read_matrix(std::istream& in, const std::string& source) {
  const auto lines = content_lines(in);
  if (lines.empty()) throw ParseError(source, 0, "empty matrix file");
  const int n = static_cast<int>(lines.size());
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto row = parse_row(lines[i], source);
    if (row.size() != n) {
      throw ParseError(source, lines[i].number,
                       "expected " + std::to_string(n) + " numbers (square matrix), found " +
                           std::to_string(row.size()));
    }
    m.row(i) = row;
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return read_matrix(in, path);
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  if (std::isfinite(value) && value == std::round(value) && std::abs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ec == std::errc() ? end : buf);
}

void write_game(std::ostream& out, const PolymatrixGame& game) {
  out << "type:";
  for (int g : game.type.groups()) out << ' ' << g;
  out << '\n';
  for (Eigen::Index i = 0; i < game.payoff.rows(); ++i) {
    for (Eigen::Index j = 0; j < game.payoff.cols(); ++j) {
      out << (j ? " " : "") << format_number(game.payoff(i, j));
    }
    out << '\n';
  }
}

void write_game_file(const std::string& path, const PolymatrixGame& game) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, 0, "cannot write file");
  write_game(out, game);
}

}  // namespace polyrep
