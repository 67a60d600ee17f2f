#include "conal/matrix_parse.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace conal {

namespace {

// Tiny recursive-descent parser over a character cursor.
class ScalarParser {
 public:
  explicit ScalarParser(const std::string& text) : text_(text) {}

  double parse() {
    const double v = expression();
    skip_space();
    if (pos_ != text_.size()) {
      throw ValidationError("scalar: trailing characters after expression: '" +
                            text_.substr(pos_) + "'");
    }
    return v;
  }

 private:
  double expression() {
    double v = term();
    for (;;) {
      skip_space();
      if (consume('+')) {
        v += term();
      } else if (consume('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = factor();
    for (;;) {
      skip_space();
      if (consume('*')) {
        v *= factor();
      } else if (consume('/')) {
        v /= factor();
      } else {
        return v;
      }
    }
  }

  double factor() {
    double v = unary();
    skip_space();
    if (consume('^')) {
      return std::pow(v, factor());  // right associative
    }
    return v;
  }

  double unary() {
    skip_space();
    if (consume('-')) return -unary();
    if (consume('+')) return unary();
    return primary();
  }

  double primary() {
    skip_space();
    if (consume('(')) {
      const double v = expression();
      skip_space();
      if (!consume(')')) throw ValidationError("scalar: missing closing parenthesis");
      return v;
    }
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])))) {
      std::string word;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        word += text_[pos_++];
      }
      if (word == "e") return std::numbers::e;
      if (word == "pi") return std::numbers::pi;
      throw ValidationError("scalar: unknown constant '" + word + "'");
    }
    std::size_t consumed = 0;
    double v;
    try {
      v = std::stod(text_.substr(pos_), &consumed);
    } catch (const std::exception&) {
      throw ValidationError("scalar: expected a number at '" + text_.substr(pos_) + "'");
    }
    pos_ += consumed;
    return v;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Split on commas at depth zero of () and [].
std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string current;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

}  // namespace

double parse_scalar(const std::string& text) { return ScalarParser(strip(text)).parse(); }

Matrix parse_matrix(const std::string& text) {
  const std::string s = strip(text);
  if (s.empty()) throw ValidationError("matrix: empty specification");

  if (s[0] == 'I' || s[0] == 'i') {
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(s.substr(1), &used);
      if (used != s.size() - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("matrix: malformed identity token '" + s + "', expected I<k>");
    }
    if (n < 1) throw ValidationError("matrix: identity dimension must be >= 1");
    return Matrix::Identity(n, n);
  }

  if (s.rfind("diag(", 0) == 0 && s.back() == ')') {
    const auto entries = split_top_level(s.substr(5, s.size() - 6));
    if (entries.empty() || (entries.size() == 1 && strip(entries[0]).empty())) {
      throw ValidationError("matrix: diag() needs at least one entry");
    }
    Matrix m = Matrix::Zero(static_cast<int>(entries.size()), static_cast<int>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) {
      m(static_cast<int>(i), static_cast<int>(i)) = parse_scalar(entries[i]);
    }
    return m;
  }

  if (s.front() == '[' && s.back() == ']') {
    const auto rows = split_top_level(s.substr(1, s.size() - 2));
    std::vector<std::vector<double>> values;
    for (const std::string& row_text : rows) {
      const std::string row = strip(row_text);
      if (row.size() < 2 || row.front() != '[' || row.back() != ']') {
        throw ValidationError("matrix: expected nested rows like [[a,b],[c,d]]");
      }
      std::vector<double> entries;
      for (const std::string& cell : split_top_level(row.substr(1, row.size() - 2))) {
        entries.push_back(parse_scalar(cell));
      }
      if (!values.empty() && entries.size() != values.front().size()) {
        throw ValidationError("matrix: ragged rows");
      }
      values.push_back(std::move(entries));
    }
    if (values.empty() || values.front().empty()) {
      throw ValidationError("matrix: empty array");
    }
    Matrix m(static_cast<int>(values.size()), static_cast<int>(values.front().size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = 0; j < values[i].size(); ++j) {
        m(static_cast<int>(i), static_cast<int>(j)) = values[i][j];
      }
    }
    return m;
  }

  throw ValidationError("matrix: unrecognized specification '" + s +
                        "', expected I<k>, diag(...), or [[...],[...]]");
}

}  // namespace conal
