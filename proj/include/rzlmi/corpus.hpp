#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rzlmi/pencil.hpp"

namespace rzlmi {

struct Instance {
  std::string name;
  Polynomial<Exact> p;  // float instances hold the binary values of their doubles
  CoeffMode mode = CoeffMode::kExact;
  std::vector<Exact> x0;
  bool expected_rz = true;
  std::string note;
  std::optional<MatrixPencil<Exact>> pencil;  // generating pencil, when known

  // Polynomial JSON plus name, base point, expectation, note and pencil.
  nlohmann::json to_json() const;
};

Instance circle();      // 1 - x1^2 - x2^2 with its 2x2 pencil
Instance tv_screen();   // 1 - x1^4 - x2^4
Instance bad_quadratic(int d);  // (x1 + 1)^2 - x2^2 - ... - xd^2, d >= 2
Instance vamos();       // 8 variables, 65 bases

// Vamos labels in variable order a, b, c, d, a', b', c', d'.
const std::vector<std::array<int, 4>>& vamos_excluded();

// p = det(I + x1 B1 + x2 B2) for random hermitian B1, B2 of size m; Gaussian
// integer entries in exact mode. Retries until the curve is smooth (so p is irreducible).
Instance random_rz(int m, std::uint64_t seed, CoeffMode mode = CoeffMode::kExact);

// A representation det U = P of the curve of random_rz(m, seed, float) whose
// first cofactor is a non-interlacing Q (a small circle around x0, times a
// line missing the curve when m = 4), so U(x0) is indefinite. m in {3, 4}.
struct EngineeredPencil {
  MatrixPencil<Complex> pencil;
  Polynomial<Complex> p;
  HomogeneousPolynomial<Complex> Q;
};
EngineeredPencil indefinite_pencil(int m, std::uint64_t seed);

// Names accepted by corpus_instance: circle, tv_screen, vamos,
// bad_quadratic:<d>, random_rz:<m>:<seed>[:float].
std::vector<std::string> corpus_names();
Instance corpus_instance(const std::string& name);

}  // namespace rzlmi
