#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "rzlmi/construct.hpp"
#include "rzlmi/corpus.hpp"
#include "rzlmi/interlace.hpp"
#include "rzlmi/pencil.hpp"
#include "rzlmi/poly_io.hpp"
#include "rzlmi/rz.hpp"

namespace py = pybind11;
using namespace rzlmi;
using nlohmann::json;

namespace {

// Polynomials and pencils cross the boundary as JSON (or polynomial text).
PolyDocument poly_in(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const json j = json::parse(text);
    return polynomial_from_json(j.contains("poly") ? j["poly"] : j);
  }
  return parse_polynomial_text(text);
}

bool use_exact(const std::string& mode, std::initializer_list<CoeffMode> inputs) {
  if (!mode.empty()) return coeff_mode_from_string(mode) == CoeffMode::kExact;
  for (CoeffMode m : inputs)
    if (m == CoeffMode::kFloat) return false;
  return true;
}

template <class K>
std::vector<K> point(const std::vector<std::string>& x, int d) {
  std::vector<K> out;
  for (const auto& v : x) out.push_back(convert_scalar<K>(Exact(parse_rational(v))));
  if (x.empty()) out.assign(d, K{});
  if (static_cast<int>(out.size()) != d) throw DimensionError("point has the wrong number of coordinates");
  return out;
}

template <class K>
std::string rz_check(const PolyDocument& doc, const std::vector<std::string>& x0, int lines, double tol,
                     std::uint64_t seed) {
  const auto p = doc.poly.cast<K>();
  return is_rz_sampled(p, point<K>(x0, p.num_vars()), lines, tol, seed).to_json().dump();
}

template <class K>
std::string hermite(const PolyDocument& doc, const std::vector<std::string>& x0, int samples, double tol,
                    std::uint64_t seed) {
  const auto p = doc.poly.cast<K>();
  return hermite_psd_check(hermite_matrix(p, point<K>(x0, p.num_vars())), samples, tol, seed).to_json().dump();
}

template <class K>
std::vector<bool> member(const PolyDocument& doc, const std::vector<std::string>& x0, const std::vector<std::string>& x,
                         double tol) {
  const auto p = doc.poly.cast<K>();
  const MembershipOracle<K> oracle(p, point<K>(x0, p.num_vars()));
  return oracle.levels(point<K>(x, p.num_vars()), tol);
}

template <class K>
std::string interlace(const PolyDocument& doc, const std::optional<std::string>& q, const std::vector<std::string>& x0,
                      int lines, double tol, std::uint64_t seed) {
  const auto p = doc.poly.cast<K>();
  const int d = p.num_vars(), m = p.degree();
  const auto x = point<K>(x0, d);
  const auto P = homogenize(p, m);
  HomogeneousPolynomial<K> Q;
  if (q) {
    const auto qp = poly_in(*q).poly.cast<K>();
    Q = homogenize(qp, std::max(m - 1, qp.degree()));
  } else {
    std::vector<K> X0{ScalarTraits<K>::from_int(1)};
    X0.insert(X0.end(), x.begin(), x.end());
    Q = directional_derivative(P, X0);
  }
  const auto a = interlaces_sampled(P, Q, x, lines, tol, seed);
  const auto b = psd_interlacing_check(P, Q, x, lines, tol, seed);
  return json{{"alternation", a.to_json()}, {"bezoutiant", b.to_json()}, {"agree", a.status == b.status}}.dump();
}

template <class K>
std::string construct_rep(const PolyDocument& doc, const std::vector<std::string>& x0, std::uint64_t seed) {
  const auto p = doc.poly.cast<K>();
  const auto res = construct(p, point<K>(x0, p.num_vars()), InterlacerSpec<K>{}, seed);
  return json{{"pencil", pencil_to_json(res.pencil)}, {"poly", polynomial_to_json(res.p)}, {"trace", res.trace}}.dump();
}

template <class K>
std::string verify(const PencilDocument& pen, const PolyDocument& doc, const std::vector<std::string>& x0, double tol,
                   int samples, std::uint64_t seed) {
  const auto A = pen.pencil.cast<K>();
  return verify_lmi(A, doc.poly.cast<K>(), point<K>(x0, A.d()), tol, samples, seed).to_json().dump();
}

template <class K>
std::string cross_check(const PencilDocument& pen, const std::vector<std::string>& x0, int lines, double tol,
                        std::uint64_t seed) {
  const auto A = pen.pencil.cast<K>();
  const auto x = point<K>(x0, A.d());
  std::vector<K> X0{ScalarTraits<K>::from_int(1)};
  X0.insert(X0.end(), x.begin(), x.end());
  return json{{"cofactors", cauchy_cross_check(A, x, lines, tol, seed).to_json()},
              {"eigenspaces", eigenspace_orthogonality_check(A, X0, tol, seed).to_json()},
              {"pairing", pairing_check(A, X0, 50, tol, seed).to_json()},
              {"trace_identity", derdet_check(A, 50, 1e-9, seed).to_json()}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Real-zero polynomials, interlacers and determinantal representations (JSON in, JSON out)";
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_RuntimeError);

  m.def("parse_polynomial", [](const std::string& text) {
    const auto doc = poly_in(text);
    auto j = polynomial_to_json(doc.poly);
    if (doc.mode == CoeffMode::kFloat) j["mode"] = "float";
    return j.dump();
  });

  m.def(
      "rz_check",
      [](const std::string& poly, const std::vector<std::string>& x0, int lines, double tol, std::uint64_t seed,
         const std::string& mode) {
        const auto doc = poly_in(poly);
        py::gil_scoped_release release;
        return use_exact(mode, {doc.mode}) ? rz_check<Exact>(doc, x0, lines, tol, seed)
                                           : rz_check<Complex>(doc, x0, lines, tol, seed);
      },
      py::arg("poly"), py::arg("x0") = std::vector<std::string>{}, py::arg("lines") = 200, py::arg("tol") = 1e-8,
      py::arg("seed") = 0, py::arg("mode") = "");

  m.def(
      "hermite_check",
      [](const std::string& poly, const std::vector<std::string>& x0, int samples, double tol, std::uint64_t seed,
         const std::string& mode) {
        const auto doc = poly_in(poly);
        py::gil_scoped_release release;
        return use_exact(mode, {doc.mode}) ? hermite<Exact>(doc, x0, samples, tol, seed)
                                           : hermite<Complex>(doc, x0, samples, tol, seed);
      },
      py::arg("poly"), py::arg("x0") = std::vector<std::string>{}, py::arg("samples") = 200, py::arg("tol") = 1e-8,
      py::arg("seed") = 0, py::arg("mode") = "");

  m.def(
      "membership_levels",
      [](const std::string& poly, const std::vector<std::string>& x, const std::vector<std::string>& x0, double tol,
         const std::string& mode) {
        const auto doc = poly_in(poly);
        return use_exact(mode, {doc.mode}) ? member<Exact>(doc, x0, x, tol) : member<Complex>(doc, x0, x, tol);
      },
      py::arg("poly"), py::arg("x"), py::arg("x0") = std::vector<std::string>{}, py::arg("tol") = 1e-9,
      py::arg("mode") = "");

  m.def(
      "interlace",
      [](const std::string& poly, const std::optional<std::string>& q, const std::vector<std::string>& x0, int lines,
         double tol, std::uint64_t seed, const std::string& mode) {
        const auto doc = poly_in(poly);
        py::gil_scoped_release release;
        return use_exact(mode, {doc.mode}) ? interlace<Exact>(doc, q, x0, lines, tol, seed)
                                           : interlace<Complex>(doc, q, x0, lines, tol, seed);
      },
      py::arg("poly"), py::arg("q") = py::none(), py::arg("x0") = std::vector<std::string>{}, py::arg("lines") = 200,
      py::arg("tol") = 1e-8, py::arg("seed") = 0, py::arg("mode") = "");

  m.def(
      "construct",
      [](const std::string& poly, const std::vector<std::string>& x0, std::uint64_t seed, const std::string& mode) {
        const auto doc = poly_in(poly);
        py::gil_scoped_release release;
        return use_exact(mode, {doc.mode}) ? construct_rep<Exact>(doc, x0, seed) : construct_rep<Complex>(doc, x0, seed);
      },
      py::arg("poly"), py::arg("x0") = std::vector<std::string>{}, py::arg("seed") = 0, py::arg("mode") = "");

  m.def(
      "verify",
      [](const std::string& pencil, const std::string& poly, const std::vector<std::string>& x0, double tol,
         int samples, std::uint64_t seed, const std::string& mode) {
        const auto pen = parse_pencil(pencil);
        const auto doc = poly_in(poly);
        py::gil_scoped_release release;
        return use_exact(mode, {pen.mode, doc.mode}) ? verify<Exact>(pen, doc, x0, tol, samples, seed)
                                                     : verify<Complex>(pen, doc, x0, tol, samples, seed);
      },
      py::arg("pencil"), py::arg("poly"), py::arg("x0") = std::vector<std::string>{}, py::arg("tol") = 1e-6,
      py::arg("samples") = 200, py::arg("seed") = 0, py::arg("mode") = "");

  m.def(
      "cross_check",
      [](const std::string& pencil, const std::vector<std::string>& x0, int lines, double tol, std::uint64_t seed,
         const std::string& mode) {
        const auto pen = parse_pencil(pencil);
        py::gil_scoped_release release;
        return use_exact(mode, {pen.mode}) ? cross_check<Exact>(pen, x0, lines, tol, seed)
                                           : cross_check<Complex>(pen, x0, lines, tol, seed);
      },
      py::arg("pencil"), py::arg("x0") = std::vector<std::string>{}, py::arg("lines") = 100, py::arg("tol") = 1e-8,
      py::arg("seed") = 0, py::arg("mode") = "");

  m.def("realify", [](const std::string& pencil) {
    const auto pen = parse_pencil(pencil);
    return pen.mode == CoeffMode::kExact ? pencil_to_json(realify(pen.pencil)).dump()
                                         : pencil_to_json(realify(pen.pencil.cast<Complex>())).dump();
  });

  m.def("det_poly", [](const std::string& pencil) {
    const auto pen = parse_pencil(pencil);
    return pen.mode == CoeffMode::kExact ? polynomial_to_json(det_poly(pen.pencil)).dump()
                                         : polynomial_to_json(det_poly(pen.pencil.cast<Complex>())).dump();
  });

  m.def(
      "pencil_at",
      [](const std::string& pencil, const std::vector<double>& x) -> Eigen::MatrixXcd {
        return parse_pencil(pencil).pencil.cast<Complex>().eval(x);
      },
      py::arg("pencil"), py::arg("x"));

  m.def("corpus_names", &corpus_names);
  m.def("corpus_instance", [](const std::string& name) { return corpus_instance(name).to_json().dump(); });
}
