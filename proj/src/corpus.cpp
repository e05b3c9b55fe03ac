#include "rzlmi/corpus.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "rzlmi/construct.hpp"
#include "rzlmi/poly_io.hpp"
#include "rzlmi/realroots.hpp"
#include "rzlmi/sampling.hpp"

namespace rzlmi {

namespace {

DenseMatrix<Exact> mat2(long a, long b, long c, long d) {
  DenseMatrix<Exact> m(2, 2);
  m(0, 0) = Exact(a);
  m(0, 1) = Exact(b);
  m(1, 0) = Exact(c);
  m(1, 1) = Exact(d);
  return m;
}

Polynomial<Exact> var(int n, int i) { return Polynomial<Exact>::variable(n, i); }
Polynomial<Exact> cst(int n, long v) { return Polynomial<Exact>::constant(n, Exact(v)); }

}  // namespace

nlohmann::json Instance::to_json() const {
  nlohmann::json j = polynomial_to_json(p);
  if (mode == CoeffMode::kFloat) j["mode"] = "float";
  j["name"] = name;
  nlohmann::json pt = nlohmann::json::array();
  for (const auto& v : x0) pt.push_back(scalar_to_json_re(v));
  j["x0"] = pt;
  j["expected_rz"] = expected_rz;
  j["note"] = note;
  if (pencil) j["pencil"] = pencil_to_json(*pencil);
  return j;
}

Instance circle() {
  Instance in;
  in.name = "circle";
  in.p = cst(2, 1) - var(2, 0).pow(2) - var(2, 1).pow(2);
  in.x0 = {Exact(0), Exact(0)};
  in.note = "unit disc; rigidly convex";
  in.pencil = MatrixPencil<Exact>({mat2(1, 0, 0, 1), mat2(1, 0, 0, -1), mat2(0, 1, 1, 0)},
                                  SymmetryClass::kRealSymmetric);
  return in;
}

Instance tv_screen() {
  Instance in;
  in.name = "tv_screen";
  in.p = cst(2, 1) - var(2, 0).pow(4) - var(2, 1).pow(4);
  in.x0 = {Exact(0), Exact(0)};
  in.expected_rz = false;
  in.note = "convex but not rigidly convex: lines through 0 meet the quartic in nonreal points";
  return in;
}

Instance bad_quadratic(int d) {
  if (d < 2) throw std::invalid_argument("bad_quadratic needs d >= 2");
  Instance in;
  in.name = "bad_quadratic:" + std::to_string(d);
  in.p = (var(d, 0) + cst(d, 1)).pow(2);
  for (int i = 1; i < d; ++i) in.p -= var(d, i).pow(2);
  in.x0.assign(d, Exact(0));
  in.note =
      "RZ quadratic; claimed to have no self-adjoint representation of size matching the degree for d >= 5 and no "
      "real-symmetric one for d = 4 (not checked here)";
  return in;
}

const std::vector<std::array<int, 4>>& vamos_excluded() {
  // a=0 b=1 c=2 d=3 a'=4 b'=5 c'=6 d'=7
  static const std::vector<std::array<int, 4>> ex{
      {0, 4, 1, 5}, {1, 5, 2, 6}, {2, 6, 3, 7}, {3, 7, 0, 4}, {0, 4, 2, 6}};
  return ex;
}

Instance vamos() {
  Instance in;
  in.name = "vamos";
  in.p = Polynomial<Exact>(8);
  std::vector<std::vector<int>> excluded;
  for (auto e : vamos_excluded()) {
    std::sort(e.begin(), e.end());
    excluded.emplace_back(e.begin(), e.end());
  }
  std::vector<Polynomial<Exact>> shifted;
  for (int i = 0; i < 8; ++i) shifted.push_back(var(8, i) + cst(8, 1));
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b)
      for (int c = b + 1; c < 8; ++c)
        for (int d = c + 1; d < 8; ++d) {
          if (std::find(excluded.begin(), excluded.end(), std::vector<int>{a, b, c, d}) != excluded.end()) continue;
          in.p += shifted[a] * shifted[b] * shifted[c] * shifted[d];
        }
  in.x0.assign(8, Exact(0));
  in.note = "bases polynomial of the Vamos matroid; RZ at 0 but no power has a determinantal representation";
  return in;
}

Instance random_rz(int m, std::uint64_t seed, CoeffMode mode) {
  if (m < 1) throw std::invalid_argument("random_rz needs m >= 1");
  for (int attempt = 0; attempt < 20; ++attempt) {
    Rng rng = stream_rng(seed, 0x77 + static_cast<std::uint64_t>(attempt));
    std::uniform_int_distribution<int> small(-3, 3);
    std::normal_distribution<double> g;
    std::vector<DenseMatrix<Exact>> mats{identity_matrix(m, Exact(0), Exact(1))};
    for (int k = 0; k < 2; ++k) {
      DenseMatrix<Exact> B(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
          Exact v;
          if (mode == CoeffMode::kExact) {
            v = i == j ? Exact(small(rng)) : Exact(Rational(small(rng)), Rational(small(rng)));
          } else {
            v = i == j ? ScalarTraits<Exact>::from_complex({g(rng), 0.0})
                       : ScalarTraits<Exact>::from_complex({g(rng) / std::sqrt(2.0), g(rng) / std::sqrt(2.0)});
          }
          B(i, j) = v;
          B(j, i) = v.conj();
        }
      mats.push_back(std::move(B));
    }
    MatrixPencil<Exact> pencil = MatrixPencil<Exact>::from_matrices(std::move(mats));
    Polynomial<Exact> p;
    if (mode == CoeffMode::kExact) {
      p = det_poly(pencil);
    } else {
      const auto pf = det_poly(pencil.cast<Complex>());
      p = pf.real_part().cast<Exact>();
    }
    if (p.degree() != m) continue;
    if (m >= 2 && !is_smooth(homogenize(p, m), seed)) continue;
    Instance in;
    in.name = "random_rz:" + std::to_string(m) + ":" + std::to_string(seed) +
              (mode == CoeffMode::kFloat ? ":float" : "");
    in.p = std::move(p);
    in.mode = mode;
    in.x0 = {Exact(0), Exact(0)};
    in.note = "determinant of a random pencil that is the identity at 0";
    in.pencil = std::move(pencil);
    return in;
  }
  throw std::runtime_error("random_rz: no smooth instance after 20 draws");
}

EngineeredPencil indefinite_pencil(int m, std::uint64_t seed) {
  if (m != 3 && m != 4) throw std::invalid_argument("indefinite_pencil needs m = 3 or 4");
  const auto inst = random_rz(m, seed, CoeffMode::kFloat);
  const auto p = inst.p.cast<Complex>();
  const auto P = homogenize(p, m);
  // Distance from 0 to the curve, over a fan of directions.
  double r = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 180; ++k) {
    const double th = std::numbers::pi * k / 180;
    const auto f = restrict_to_line(p, std::vector<Complex>{0.0, 0.0}, std::vector<Complex>{std::cos(th), std::sin(th)});
    for (const auto& root : real_roots(f).roots) r = std::min(r, std::abs(root.value));
  }
  const double rad = 0.5 * r;
  Polynomial<Complex> C(3);
  C.add_term({0, 2, 0}, 1.0);
  C.add_term({0, 0, 2}, 1.0);
  C.add_term({2, 0, 0}, -rad * rad);
  Polynomial<Complex> Q = C;
  if (m == 4) {
    Rng rng = stream_rng(seed, 0x11e);
    std::normal_distribution<double> g;
    bool found = false;
    for (int tries = 0; tries < 500 && !found; ++tries) {
      // The line a . X = 0, parameterized by two points on it.
      const Eigen::Vector3d a(g(rng), g(rng), g(rng));
      Eigen::JacobiSVD<Eigen::Matrix<double, 1, 3>> svd(a.transpose(), Eigen::ComputeFullV);
      const Eigen::Vector3d u = svd.matrixV().col(1), v = svd.matrixV().col(2);
      const std::vector<Complex> base{u(0), u(1), u(2)}, dir{v(0), v(1), v(2)};
      const auto hits = real_roots(restrict_to_line(P.poly(), base, dir));
      if (!hits.roots.empty() || hits.ambiguous) continue;
      Polynomial<Complex> L(3);
      for (int i = 0; i < 3; ++i) {
        Exponent e(3, 0);
        e[i] = 1;
        L.add_term(e, a(i));
      }
      Q = C * L;
      found = true;
    }
    if (!found) throw std::runtime_error("indefinite_pencil: no line misses the curve");
  }
  EngineeredPencil out;
  out.p = p;
  out.Q = HomogeneousPolynomial<Complex>(Q, m - 1);
  out.pencil = representation_from_interlacer(P, out.Q, seed, 8).U;
  return out;
}

std::vector<std::string> corpus_names() {
  return {"circle", "tv_screen", "vamos", "bad_quadratic:<d>", "random_rz:<m>:<seed>[:float]"};
}

Instance corpus_instance(const std::string& name) {
  std::vector<std::string> parts;
  std::stringstream ss(name);
  for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
  if (parts.empty()) throw std::invalid_argument("empty corpus name");
  auto num = [&](std::size_t i) -> long long {
    if (i >= parts.size()) throw std::invalid_argument("corpus name '" + name + "' is missing a parameter");
    try {
      std::size_t used = 0;
      const long long v = std::stoll(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("corpus name '" + name + "': bad number '" + parts[i] + "'");
    }
  };
  const std::string& k = parts[0];
  if (k == "circle" && parts.size() == 1) return circle();
  if (k == "tv_screen" && parts.size() == 1) return tv_screen();
  if (k == "vamos" && parts.size() == 1) return vamos();
  if (k == "bad_quadratic" && parts.size() == 2) return bad_quadratic(static_cast<int>(num(1)));
  if (k == "random_rz" && (parts.size() == 3 || parts.size() == 4)) {
    CoeffMode mode = CoeffMode::kExact;
    if (parts.size() == 4) {
      if (parts[3] != "float" && parts[3] != "exact") throw std::invalid_argument("random_rz mode must be float or exact");
      mode = coeff_mode_from_string(parts[3]);
    }
    return random_rz(static_cast<int>(num(1)), static_cast<std::uint64_t>(num(2)), mode);
  }
  throw std::invalid_argument("unknown corpus instance '" + name + "'");
}

}  // namespace rzlmi
