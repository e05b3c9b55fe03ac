#include "rzlmi/poly_io.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>

namespace rzlmi {

namespace {

class TextParser {
 public:
  TextParser(const std::string& text, int first_index) : s_(text), first_index_(first_index) {}

  PolyDocument run(int num_vars) {
    std::vector<std::pair<std::map<int, int>, Exact>> terms;
    int declared_vars = -1;
    PolyDocument doc;
    bool any = false;
    int last_line = 0;
    while (true) {
      skip_space();
      if (eof()) break;
      if (peek() == '#') {
        directive(&declared_vars, &doc.mode);
        continue;
      }
      Exact sign(1);
      if (peek() == '+' || peek() == '-') {
        if (get() == '-') sign = Exact(-1);
        skip_space();
      } else if (any && line_ == last_line) {
        fail("expected '+' or '-' between terms");
      }
      auto term = parse_term();
      last_line = line_;
      term.second *= sign;
      terms.push_back(std::move(term));
      any = true;
    }
    if (!any) fail("no terms");
    int top = -1;
    for (const auto& [e, c] : terms)
      if (!e.empty()) top = std::max(top, e.rbegin()->first);
    int n = num_vars >= 0 ? num_vars : declared_vars;
    if (n < 0) n = top + 1;
    if (top >= n)
      throw ParseError("variable x" + std::to_string(top + first_index_) + " exceeds the declared count of " +
                       std::to_string(n));
    doc.poly = Polynomial<Exact>(n);
    for (const auto& [e, c] : terms) {
      Exponent ex(n, 0);
      for (const auto& [v, k] : e) ex[v] = k;
      doc.poly.add_term(ex, c);
    }
    return doc;
  }

 private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    const char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_space() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) get();
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(std::to_string(line_) + ":" + std::to_string(col_) + ": " + what);
  }

  void directive(int* vars, CoeffMode* mode) {
    std::string line;
    while (!eof() && peek() != '\n') line.push_back(get());
    std::istringstream is(line.substr(1));
    std::string key, value;
    is >> key >> value;
    if (key == "vars") {
      try {
        *vars = std::stoi(value);
      } catch (const std::exception&) {
        fail("bad '# vars' directive");
      }
    } else if (key == "mode") {
      try {
        *mode = coeff_mode_from_string(value);
      } catch (const std::exception&) {
        fail("bad '# mode' directive");
      }
    }
  }

  std::string number_token() {
    std::string tok;
    while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '/')) tok.push_back(get());
    if (!eof() && (peek() == 'e' || peek() == 'E')) {
      tok.push_back(get());
      if (peek() == '+' || peek() == '-') tok.push_back(get());
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) tok.push_back(get());
    }
    return tok;
  }

  Rational number() {
    const int l = line_, c = col_;
    const std::string tok = number_token();
    try {
      return parse_rational(tok);
    } catch (const std::exception& e) {
      throw ParseError(std::to_string(l) + ":" + std::to_string(c) + ": " + e.what());
    }
  }

  Exact paren_scalar() {
    get();  // '('
    Exact acc(0);
    bool first = true;
    while (true) {
      skip_space();
      if (peek() == ')') {
        get();
        break;
      }
      Rational sign(1);
      if (peek() == '+' || peek() == '-') {
        if (get() == '-') sign = -1;
        skip_space();
      } else if (!first) {
        fail("expected '+' or '-' inside complex literal");
      }
      Rational mag(1);
      bool have_num = false;
      if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
        mag = number();
        have_num = true;
      }
      skip_space();
      if (peek() == '*') {
        get();
        skip_space();
      }
      if (peek() == 'i') {
        get();
        acc += Exact(Rational(0), sign * mag);
      } else if (have_num) {
        acc += Exact(sign * mag);
      } else {
        fail("expected a number or 'i'");
      }
      first = false;
      if (eof()) fail("unterminated complex literal");
    }
    return acc;
  }

  bool at_factor() const {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == 'x' || c == 'X' || c == 'i';
  }

  std::pair<std::map<int, int>, Exact> parse_term() {
    std::map<int, int> mono;
    Exact coeff(1);
    bool any = false;
    while (true) {
      if (any) {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
        if (peek() == '*') {
          get();
          skip_space();
        } else if (!at_factor()) {
          break;
        }
      }
      if (!at_factor()) fail(eof() ? std::string("unexpected end of input") : std::string("unexpected '") + peek() + "'");
      const char c = peek();
      if (c == '(') {
        coeff *= paren_scalar();
      } else if (c == 'i') {
        get();
        coeff *= Exact(Rational(0), Rational(1));
      } else if (c == 'x' || c == 'X') {
        get();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("variable name needs an index");
        int idx = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) idx = idx * 10 + (get() - '0');
        const int v = idx - first_index_;
        if (v < 0) fail("variable index below " + std::to_string(first_index_));
        int power = 1;
        if (peek() == '^') {
          get();
          if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("exponent must be a nonnegative integer");
          power = 0;
          while (std::isdigit(static_cast<unsigned char>(peek()))) power = power * 10 + (get() - '0');
        }
        mono[v] += power;
      } else {
        coeff *= Exact(number());
      }
      any = true;
    }
    for (auto it = mono.begin(); it != mono.end();) it = it->second == 0 ? mono.erase(it) : std::next(it);
    return {std::move(mono), coeff};
  }

  const std::string& s_;
  int first_index_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

PolyDocument parse_polynomial_text(const std::string& text, int num_vars, int first_index) {
  return TextParser(text, first_index).run(num_vars);
}

Rational rational_from_json(const nlohmann::json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_unsigned()) return Rational(std::to_string(v.get<unsigned long long>()));
    if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
    if (v.is_number_float()) return rational_from_double(v.get<double>());
  } catch (const std::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a number or rational string");
}

PolyDocument polynomial_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("$: polynomial must be a JSON object");
  if (!j.contains("vars") || !j["vars"].is_number_integer()) throw ParseError("$.vars: missing or not an integer");
  const int n = j["vars"].get<int>();
  if (n < 0) throw ParseError("$.vars: negative");
  PolyDocument doc;
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw ParseError("$.mode: expected a string");
    try {
      doc.mode = coeff_mode_from_string(j["mode"].get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(std::string("$.mode: ") + e.what());
    }
  }
  if (!j.contains("terms") || !j["terms"].is_array()) throw ParseError("$.terms: missing or not an array");
  doc.poly = Polynomial<Exact>(n);
  std::set<Exponent> seen;
  for (std::size_t k = 0; k < j["terms"].size(); ++k) {
    const auto& t = j["terms"][k];
    const std::string where = "$.terms[" + std::to_string(k) + "]";
    if (!t.is_object() || !t.contains("exp") || !t["exp"].is_array()) throw ParseError(where + ".exp: missing exponent");
    Exponent e;
    for (const auto& v : t["exp"]) {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ParseError(where + ".exp: entries must be nonnegative integers");
      e.push_back(v.get<int>());
    }
    if (static_cast<int>(e.size()) != n) throw ParseError(where + ".exp: length differs from vars");
    if (!seen.insert(e).second) throw ParseError(where + ".exp: duplicate exponent vector");
    const Rational re = t.contains("re") ? rational_from_json(t["re"], where + ".re") : Rational(0);
    const Rational im = t.contains("im") ? rational_from_json(t["im"], where + ".im") : Rational(0);
    doc.poly.add_term(e, Exact(re, im));
  }
  return doc;
}

PolyDocument parse_polynomial(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("JSON: ") + e.what());
    }
    return polynomial_from_json(j);
  }
  return parse_polynomial_text(text);
}

nlohmann::json scalar_to_json_re(const Exact& c) { return c.re().get_str(); }
nlohmann::json scalar_to_json_im(const Exact& c) { return c.im().get_str(); }

template <class K>
nlohmann::json polynomial_to_json(const Polynomial<K>& p) {
  nlohmann::json j;
  j["vars"] = p.num_vars();
  j["mode"] = kIsExact<K> ? "rational" : "float";
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) {
    nlohmann::json t;
    t["exp"] = e;
    if constexpr (kIsExact<K>) {
      t["re"] = scalar_to_json_re(c);
      if (!c.is_real()) t["im"] = scalar_to_json_im(c);
    } else {
      t["re"] = c.real();
      if (c.imag() != 0.0) t["im"] = c.imag();
    }
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

template nlohmann::json polynomial_to_json(const Polynomial<Exact>&);
template nlohmann::json polynomial_to_json(const Polynomial<Complex>&);

std::string read_text_file(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace rzlmi
