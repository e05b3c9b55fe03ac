#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "rzlmi/polynomial.hpp"

namespace rzlmi {

// Malformed input; the message carries a line:column or JSON path annotation.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coefficients are held exactly. A float-mode document stores the binary value
// of each double, so casting back to Complex is lossless.
struct PolyDocument {
  Polynomial<Exact> poly;
  CoeffMode mode = CoeffMode::kExact;
};

// Text form: a sum of terms `coeff * x1^e1 * ... * xd^ed`, one or more per
// line; coefficients are rationals, decimals or `(a+bi)`. Variables are named
// x<k> (or X<k>) with k counted from first_index. num_vars < 0 infers the
// count from the largest index used. Lines starting with '#' are comments,
// except `# vars N` and `# mode exact|float`.
PolyDocument parse_polynomial_text(const std::string& text, int num_vars = -1, int first_index = 1);

// JSON form: {"vars": d, "mode": "rational"|"float", "terms": [{"exp": [...], "re": .., "im": ..}]}.
// Duplicate exponent vectors are rejected.
PolyDocument polynomial_from_json(const nlohmann::json& j);

// Dispatches on the first non-blank character: '{' selects JSON.
PolyDocument parse_polynomial(const std::string& text);

template <class K>
nlohmann::json polynomial_to_json(const Polynomial<K>& p);

// Rational strings for exact coefficients, numbers for float ones.
nlohmann::json scalar_to_json_re(const Exact& c);
nlohmann::json scalar_to_json_im(const Exact& c);
Rational rational_from_json(const nlohmann::json& v, const std::string& where);

std::string read_text_file(const std::string& path);  // "-" reads stdin

}  // namespace rzlmi
