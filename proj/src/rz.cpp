#include "rzlmi/rz.hpp"

#include "rzlmi/linalg.hpp"
#include "rzlmi/sampling.hpp"

namespace rzlmi {

std::string to_string(RzStatus s) {
  switch (s) {
    case RzStatus::kConfirmedSampled:
      return "rz-confirmed-sampled";
    case RzStatus::kNotRz:
      return "not-rz";
    case RzStatus::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

Status to_status(RzStatus s) {
  switch (s) {
    case RzStatus::kConfirmedSampled:
      return Status::kPass;
    case RzStatus::kNotRz:
      return Status::kFail;
    case RzStatus::kInconclusive:
      return Status::kInconclusive;
  }
  return Status::kInconclusive;
}

nlohmann::json RzVerdict::to_json() const {
  nlohmann::json j;
  j["status"] = to_string(status);
  j["lines_tested"] = lines_tested;
  j["inconclusive_lines"] = inconclusive_lines;
  j["tol"] = tol;
  j["sampled"] = true;
  if (witness) j["witness"] = witness->to_json();
  return j;
}

template <class K>
std::vector<K> direction_as(const std::vector<double>& dir) {
  std::vector<K> out;
  out.reserve(dir.size());
  for (double v : dir) {
    if constexpr (kIsExact<K>) {
      out.emplace_back(rationalize(v, 1L << 20));
    } else {
      out.emplace_back(v, 0.0);
    }
  }
  return out;
}

template <class K>
std::vector<double> to_doubles(const std::vector<K>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_complex(x).real());
  return out;
}

template <class K>
RzVerdict is_rz_sampled(const Polynomial<K>& p, const std::vector<K>& x0, int num_lines, double tol,
                        std::uint64_t seed, int threads) {
  if (static_cast<int>(x0.size()) != p.num_vars()) throw DimensionError("base point has wrong dimension");
  if (is_zero(p(x0))) throw std::invalid_argument("p vanishes at the base point");
  const int d = p.num_vars();
  std::vector<Tristate> verdicts(num_lines, Tristate::kTrue);
  std::vector<std::vector<double>> dirs(num_lines);
  std::vector<std::vector<Complex>> nonreal(num_lines);
  parallel_for(num_lines, threads, [&](int i) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    dirs[i] = sphere_direction(rng, d);
    const auto f = restrict_to_line(p, x0, direction_as<K>(dirs[i]));
    const RootList r = real_roots(f, tol);
    if (r.complex_count > 0) {
      verdicts[i] = Tristate::kFalse;
      nonreal[i] = r.nonreal;
    } else if (r.ambiguous) {
      verdicts[i] = Tristate::kInconclusive;
    }
  });
  RzVerdict v;
  v.lines_tested = num_lines;
  v.tol = tol;
  int first_fail = -1, first_ambiguous = -1;
  for (int i = 0; i < num_lines; ++i) {
    if (verdicts[i] == Tristate::kFalse && first_fail < 0) first_fail = i;
    if (verdicts[i] == Tristate::kInconclusive) {
      ++v.inconclusive_lines;
      if (first_ambiguous < 0) first_ambiguous = i;
    }
  }
  const int w = first_fail >= 0 ? first_fail : first_ambiguous;
  if (w >= 0) {
    Witness wit;
    wit.x0 = to_doubles(x0);
    wit.dir = dirs[w];
    if (first_fail >= 0) {
      wit.detail = "restriction has non-real roots";
      double worst = 0;
      for (const auto& z : nonreal[w]) worst = std::max(worst, std::abs(z.imag()));
      wit.value = worst;
    } else {
      wit.detail = "near-multiple root not resolvable at this tolerance";
    }
    v.witness = wit;
  }
  v.status = first_fail >= 0 ? RzStatus::kNotRz : first_ambiguous >= 0 ? RzStatus::kInconclusive : RzStatus::kConfirmedSampled;
  return v;
}

template <class K>
HermiteMatrix<K> hermite_matrix(const Polynomial<K>& p, const std::vector<K>& x0) {
  if (static_cast<int>(x0.size()) != p.num_vars()) throw DimensionError("base point has wrong dimension");
  const K c0 = p(x0);
  if (is_zero(c0)) throw std::invalid_argument("p vanishes at the base point");
  const int n = p.num_vars();
  const int m = std::max(p.degree(), 0);
  HermiteMatrix<K> out;
  out.x0 = x0;
  out.m = m;
  out.source = p;
  out.H = PolyMatrix<K>(m, m, n);
  if (m == 0) return out;
  const auto c = symbolic_line_coefficients(p, x0);
  const K inv = ScalarTraits<K>::from_int(1) / c0;
  // Monic reversed restriction: coefficient of t^(m-k) is c_k(x) / c_0.
  std::vector<Polynomial<K>> a(m + 1, Polynomial<K>(n));
  for (int k = 0; k <= m; ++k) a[k] = c[k].scaled(inv);
  const auto sums = newton_power_sums(a, 2 * m - 2, [n](long v) {
    return Polynomial<K>::constant(n, ScalarTraits<K>::from_int(v));
  });
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out.H.set(i, j, sums[i + j]);
  return out;
}

template <class K>
VerdictReport hermite_psd_check(const HermiteMatrix<K>& H, int num_samples, double tol, std::uint64_t seed,
                                int threads) {
  VerdictReport rep;
  rep.check = "hermite-psd";
  rep.tol = tol;
  rep.tested = num_samples;
  if (H.m == 0) return rep;
  const int d = H.H.num_vars();
  std::vector<double> lmin(num_samples, 0.0), scale(num_samples, 0.0);
  std::vector<std::vector<double>> pts(num_samples);
  parallel_for(num_samples, threads, [&](int i) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    pts[i] = sphere_direction(rng, d);
    std::vector<Complex> x(pts[i].begin(), pts[i].end());
    const auto ev = hermitian_eigenvalues(to_eigen(H.H.evaluate_complex(x)));
    lmin[i] = ev.front();
    for (double v : ev) scale[i] = std::max(scale[i], std::abs(v));
  });
  int first = -1;
  for (int i = 0; i < num_samples; ++i) {
    const double rel = scale[i] > 0 ? -lmin[i] / scale[i] : 0.0;
    rep.max_residual = std::max(rep.max_residual, std::max(rel, 0.0));
    if (rel > tol && first < 0) first = i;
  }
  if (first >= 0) {
    rep.status = Status::kFail;
    Witness w;
    w.x0 = to_doubles(H.x0);
    w.point = pts[first];
    w.detail = "Hermite matrix has a negative eigenvalue";
    w.value = lmin[first];
    rep.witness = w;
  }
  return rep;
}

template <class K>
Polynomial<K> renegar_derivative(const Polynomial<K>& p, const std::vector<K>& x0, int k) {
  if (k < 0) throw std::invalid_argument("negative derivative order");
  if (static_cast<int>(x0.size()) != p.num_vars()) throw DimensionError("base point has wrong dimension");
  const int m = std::max(p.degree(), 0);
  if (k > m) return Polynomial<K>(p.num_vars());
  if (k == 0) return p;
  std::vector<K> X0{ScalarTraits<K>::from_int(1)};
  X0.insert(X0.end(), x0.begin(), x0.end());
  HomogeneousPolynomial<K> P = homogenize(p, m);
  for (int j = 0; j < k; ++j) P = directional_derivative(P, X0);
  return dehomogenize(P);
}

template <class K>
MembershipOracle<K>::MembershipOracle(const Polynomial<K>& p, const std::vector<K>& x0) {
  const K v = p(x0);
  if (to_complex(v).real() <= 0.0) throw std::invalid_argument("membership needs p(x0) > 0");
  const int m = std::max(p.degree(), 0);
  levels_.push_back(p);
  for (int k = 1; k < m; ++k) levels_.push_back(renegar_derivative(p, x0, k));
}

template <class K>
std::vector<double> MembershipOracle<K>::values(const std::vector<K>& x) const {
  std::vector<double> out;
  for (const auto& q : levels_) out.push_back(to_complex(q(x)).real());
  return out;
}

template <class K>
std::vector<bool> MembershipOracle<K>::levels(const std::vector<K>& x, double tol) const {
  std::vector<bool> out;
  for (const auto& q : levels_) {
    if constexpr (kIsExact<K>) {
      out.push_back(q(x).re() >= -rational_from_double(tol));
    } else {
      out.push_back(q(x).real() >= -tol);
    }
  }
  return out;
}

template <class K>
bool MembershipOracle<K>::contains(const std::vector<K>& x, double tol) const {
  const auto l = levels(x, tol);
  return std::all_of(l.begin(), l.end(), [](bool b) { return b; });
}

template <class K>
bool membership(const Polynomial<K>& p, const std::vector<K>& x0, const std::vector<K>& x, double tol) {
  return MembershipOracle<K>(p, x0).contains(x, tol);
}

#define RZLMI_INSTANTIATE(K)                                                                                      \
  template std::vector<K> direction_as<K>(const std::vector<double>&);                                            \
  template std::vector<double> to_doubles(const std::vector<K>&);                                                 \
  template RzVerdict is_rz_sampled(const Polynomial<K>&, const std::vector<K>&, int, double, std::uint64_t, int); \
  template HermiteMatrix<K> hermite_matrix(const Polynomial<K>&, const std::vector<K>&);                          \
  template VerdictReport hermite_psd_check(const HermiteMatrix<K>&, int, double, std::uint64_t, int);             \
  template Polynomial<K> renegar_derivative(const Polynomial<K>&, const std::vector<K>&, int);                    \
  template class MembershipOracle<K>;                                                                             \
  template bool membership(const Polynomial<K>&, const std::vector<K>&, const std::vector<K>&, double);

RZLMI_INSTANTIATE(Exact)
RZLMI_INSTANTIATE(Complex)
#undef RZLMI_INSTANTIATE

}  // namespace rzlmi
