#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qgs/interval_bethe.hpp"
#include "qgs/secular.hpp"
#include "qgs/weyl.hpp"

namespace qgs {

struct RootFlags {
  bool repeated_entries = false;
  bool zero_entry = false;
  bool near_pole = false;
  bool vanishing_wavefunction = false;
  // Eigenfunctions exist but none is symmetric under particle exchange.
  bool non_bosonic = false;

  std::string str() const {
    std::string out;
    auto add = [&out](bool on, const char* name) {
      if (!on) return;
      if (!out.empty()) out += '|';
      out += name;
    };
    add(repeated_entries, "repeated-entries");
    add(zero_entry, "zero-entry");
    add(near_pole, "near-pole");
    add(vanishing_wavefunction, "vanishing-wavefunction");
    add(non_bosonic, "non-bosonic");
    return out;
  }
};

struct SpectralRoot {
  WaveTuple k;
  double energy = 0;
  // Worst defect of the reconstructed plane-wave coefficient family.
  double residual_max = 0;
  // Worst smallest singular value over the n cyclic shifts of the secular matrix.
  double smallest_singular_value = 0;
  // Rank of the reconstructed wavefunction space (a proxy, see README).
  int multiplicity_proxy = 0;
  // Rank of the exchange-symmetric part of that space.
  int bosonic_multiplicity = 0;
  RootFlags flags;
  double tolerance = 0;

  // A genuine eigenvalue: the Bethe wavefunction built from the root does not vanish.
  bool physical() const { return !flags.vanishing_wavefunction; }
  bool bosonic() const { return bosonic_multiplicity > 0; }
};

struct CertifyOptions {
  double tol = 1e-8;
  double flag_tol = 1e-6;
  double pole_rcond = 1e-8;
  // Relative joining defect below which a coefficient direction counts as consistent.
  double consistency_tol = 1e-6;
  double wavefunction_tol = 1e-6;
  int samples_per_domain = 4;
};

// Plane-wave coefficients A^P for every P in W_n, as linear maps of the null space of M(k).
struct CoefficientFamily {
  std::vector<WeylElement> elements;
  std::unordered_map<std::uint64_t, int> index;
  std::vector<CMatrix> coefficients;
  // Worst mismatch between two generator words that reach the same element.
  double word_defect = 0;
  std::string worst_words;

  const CMatrix& at(const WeylElement& p) const { return coefficients[index.at(p.key())]; }
};

namespace detail {

inline std::string word_string(const std::vector<std::string>& w) {
  if (w.empty()) return "I";
  std::string out;
  for (const auto& g : w) out += g;
  return out;
}

}  // namespace detail

// Propagates seed = A^{R_n} over W_n with A^{P T_i} = Y_i(k_{P(i)} - k_{P(i+1)}) A^P and
// A^{P R_1} = S(-k_{P(1)}) A^P (breadth first from R_n, right multiplication by generators).
inline CoefficientFamily reconstruct_family(const SecularSystem& sys, const WaveTuple& k, const CMatrix& seed) {
  const SystemAssembly& s = sys.assembly;
  const int n = s.n();
  std::vector<WeylElement> gens;
  std::vector<std::string> names;
  for (int i = 1; i < n; ++i) {
    gens.push_back(generator_t(i, n));
    names.push_back("T" + std::to_string(i));
  }
  gens.push_back(generator_r1(n));
  names.push_back("R1");

  CoefficientFamily fam;
  std::vector<std::vector<std::string>> words;
  const WeylElement start = element_r(n, n);
  fam.elements.push_back(start);
  fam.index[start.key()] = 0;
  fam.coefficients.push_back(seed);
  words.push_back({"R" + std::to_string(n)});
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int p = queue.front();
    queue.pop_front();
    const WeylElement pe = fam.elements[p];
    const WaveTuple kp = act(pe, k);
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const WeylElement next = compose(pe, gens[g]);
      CMatrix x;
      if (g + 1 < gens.size()) {
        const int i = static_cast<int>(g) + 1;
        x = y_matrix(s, i, kp[i - 1] - kp[i]) * fam.coefficients[p];
      } else {
        x = lifted_vertex_matrix(s, -kp[0]) * fam.coefficients[p];
      }
      auto it = fam.index.find(next.key());
      if (it == fam.index.end()) {
        fam.index[next.key()] = static_cast<int>(fam.elements.size());
        fam.elements.push_back(next);
        fam.coefficients.push_back(std::move(x));
        auto w = words[p];
        w.push_back(names[g]);
        words.push_back(std::move(w));
        queue.push_back(static_cast<int>(fam.elements.size()) - 1);
      } else {
        const CMatrix& known = fam.coefficients[it->second];
        const double defect = (known - x).norm() / std::max(1e-300, known.norm());
        if (defect > fam.word_defect) {
          fam.word_defect = defect;
          auto w = words[p];
          w.push_back(names[g]);
          fam.worst_words = detail::word_string(words[it->second]) + " vs " + detail::word_string(w);
        }
      }
    }
  }
  return fam;
}

// Stacked joining defects A^P - E(-k_{P(n)}) A^{P R_n} over all P.
inline CMatrix joining_defects(const SecularSystem& sys, const WaveTuple& k, const CoefficientFamily& fam) {
  const SystemAssembly& s = sys.assembly;
  const int n = s.n();
  const WeylElement rn = element_r(n, n);
  const long d = s.dim();
  const long cols = fam.coefficients.front().cols();
  CMatrix out(d * static_cast<long>(fam.elements.size()), cols);
  for (std::size_t p = 0; p < fam.elements.size(); ++p) {
    const WaveTuple kp = act(fam.elements[p], k);
    out.middleRows(static_cast<long>(p) * d, d) =
        fam.coefficients[p] - e_matrix(s, -kp[n - 1]) * fam.at(compose(fam.elements[p], rn));
  }
  return out;
}

// Evaluates the Bethe wavefunction
//   psi_J(x) = sum_P [R(Q) block_Q(A^{P Q})]_J exp(i act(P,k).x),  x in x_{Q(1)} < ... < x_{Q(n)},
// for a set of coefficient vectors (columns of `basis`). Returns |E|^n x basis.cols().
class WavefunctionEvaluator {
 public:
  WavefunctionEvaluator(const SecularSystem& sys, const WaveTuple& k, const CoefficientFamily& fam, const CMatrix& basis)
      : s_(sys.assembly), cols_(basis.cols()) {
    const int n = s_.n();
    const long d = s_.block_size();
    for (const auto& p : fam.elements) momenta_.push_back(act(p, k));
    blocks_.resize(s_.perm_count());
    for (int q = 0; q < s_.perm_count(); ++q) {
      const auto& perm = s_.perms()[q];
      const WeylElement qe(perm, std::vector<int>(n, 1));
      const SMatrix rq = perm_rep(perm, s_.edge_count(), n);
      for (const auto& p : fam.elements)
        blocks_[q].push_back(rq * (fam.at(compose(p, qe)).middleRows(q * d, d) * basis));
    }
  }

  CMatrix operator()(const std::vector<double>& x) const {
    const int n = s_.n();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&x](int a, int b) { return x[a] < x[b]; });
    const int q = s_.perm_index(order);
    CMatrix acc = CMatrix::Zero(s_.block_size(), cols_);
    for (std::size_t p = 0; p < momenta_.size(); ++p) {
      double phase = 0;
      for (int m = 0; m < n; ++m) phase += momenta_[p][m] * x[m];
      acc += std::exp(cplx(0, phase)) * blocks_[q][p];
    }
    return acc;
  }

 private:
  const SystemAssembly& s_;
  long cols_;
  std::vector<WaveTuple> momenta_;
  std::vector<std::vector<CMatrix>> blocks_;
};

// Deterministic sample points, `per_domain` in each ordering domain, inside (0, min edge length).
inline std::vector<std::vector<double>> wavefunction_sample_points(const SystemAssembly& s, int per_domain) {
  const int n = s.n();
  const double lmin = s.star().min_length();
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> unif(0.02 * lmin, 0.98 * lmin);
  std::vector<std::vector<double>> out;
  for (const auto& perm : s.perms())
    for (int smp = 0; smp < per_domain; ++smp) {
      std::vector<double> xs(n);
      for (double& v : xs) v = unif(rng);
      std::sort(xs.begin(), xs.end());
      std::vector<double> x(n);
      for (int m = 0; m < n; ++m) x[perm[m]] = xs[m];
      out.push_back(std::move(x));
    }
  return out;
}

inline int numerical_rank(const CMatrix& m, double tol) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(m).singularValues();
  int r = 0;
  for (long i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++r;
  return r;
}

// Checks that k is a joint root of all n shifted secular equations, rebuilds the coefficient
// family from the null space of M(k), and tests it against every joining condition.
// Throws CertificationError when any step fails.
inline SpectralRoot certify_root(const SecularSystem& sys, const WaveTuple& k, const CertifyOptions& opt = {}) {
  check_tuple(sys, k);
  const SystemAssembly& s = sys.assembly;
  const int n = s.n();
  SpectralRoot root;
  root.k = k;
  root.energy = energy(k);
  root.tolerance = opt.tol;
  if (!(root.energy > 0)) throw CertificationError("certify_root: the zero tuple is excluded (E = 0)");

  const auto sig = shift_sigma_min(sys, k);
  root.smallest_singular_value = *std::max_element(sig.begin(), sig.end());
  for (int d = 0; d < n; ++d)
    if (!(sig[d] < opt.tol)) {
      std::ostringstream msg;
      msg << "certify_root: sigma_min of cyclic shift " << d << " is " << sig[d] << " (tol " << opt.tol << ")";
      throw CertificationError(msg.str());
    }

  // Null space of M(k); its vectors are the blocks A^{R_n}.
  const CMatrix m0 = secular_matrix(sys, k);
  CMatrix v;
  Eigen::VectorXd sv;
  if (m0.rows() <= 64) {
    Eigen::JacobiSVD<CMatrix> svd(m0, Eigen::ComputeFullV);
    v = svd.matrixV();
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<CMatrix> svd(m0, Eigen::ComputeFullV);
    v = svd.matrixV();
    sv = svd.singularValues();
  }
  const double null_tol = std::max(1e-6, 100.0 * sig[0]);
  long nullity = 0;
  while (nullity < sv.size() && sv(sv.size() - 1 - nullity) <= null_tol) ++nullity;
  nullity = std::max(nullity, 1L);
  const CMatrix seed = v.rightCols(nullity);

  const CoefficientFamily fam = reconstruct_family(sys, k, seed);
  if (fam.word_defect > opt.tol)
    throw CertificationError("certify_root: inconsistent reconstruction, words " + fam.worst_words +
                             " disagree by " + std::to_string(fam.word_defect));

  const CMatrix defects = joining_defects(sys, k, fam);
  Eigen::JacobiSVD<CMatrix> jsvd(defects, Eigen::ComputeFullV);
  const double scale = std::sqrt(static_cast<double>(fam.elements.size()));
  const Eigen::VectorXd js = jsvd.singularValues() / scale;
  long consistent = 0;
  while (consistent < js.size() && js(js.size() - 1 - consistent) < opt.consistency_tol) ++consistent;
  const double best = js(js.size() - 1);
  if (consistent == 0 || !(best < opt.tol)) {
    std::ostringstream msg;
    msg << "certify_root: inconsistent reconstruction, joining conditions A^P = E(-k_P(n)) A^{P R" << n
        << "} fail with relative defect " << best;
    throw CertificationError(msg.str());
  }
  root.residual_max = std::max(best, fam.word_defect);

  const CMatrix basis = jsvd.matrixV().rightCols(consistent);
  const WavefunctionEvaluator psi(sys, k, fam, basis);
  const auto points = wavefunction_sample_points(s, opt.samples_per_domain);
  const long d = s.block_size();
  // Coefficient norms grow like sqrt(|W_n|); samples are normalised accordingly.
  const double norm = std::sqrt(static_cast<double>(points.size() * fam.elements.size()));
  CMatrix samples(static_cast<long>(points.size()) * d, basis.cols());
  for (std::size_t i = 0; i < points.size(); ++i) samples.middleRows(static_cast<long>(i) * d, d) = psi(points[i]);
  samples /= norm;
  root.multiplicity_proxy = numerical_rank(samples, opt.wavefunction_tol);

  // Exchange symmetry: psi_J(x) = psi_{J o T_i}(x o T_i) for every adjacent transposition.
  if (n == 1) {
    root.bosonic_multiplicity = root.multiplicity_proxy;
  } else {
    CMatrix exchange(static_cast<long>(points.size()) * d * (n - 1), basis.cols());
    long row = 0;
    for (const auto& x : points)
      for (int i = 1; i < n; ++i, row += d) {
        std::vector<int> t(n);
        std::iota(t.begin(), t.end(), 0);
        std::swap(t[i - 1], t[i]);
        std::vector<double> xt(n);
        for (int m = 0; m < n; ++m) xt[m] = x[t[m]];
        exchange.middleRows(row, d) = psi(x) - perm_rep(t, s.edge_count(), n) * psi(xt);
      }
    exchange /= norm;
    Eigen::JacobiSVD<CMatrix> esvd(exchange, Eigen::ComputeFullV);
    const Eigen::VectorXd es = esvd.singularValues();
    long symmetric = 0;
    while (symmetric < es.size() && es(es.size() - 1 - symmetric) < opt.wavefunction_tol) ++symmetric;
    root.bosonic_multiplicity = symmetric == 0 ? 0 : numerical_rank(samples * esvd.matrixV().rightCols(symmetric), opt.wavefunction_tol);
  }

  const double scale_k = std::max(1.0, std::abs(k.back()));
  for (int j = 0; j + 1 < n; ++j)
    if (std::abs(k[j + 1] - k[j]) < opt.flag_tol * scale_k) root.flags.repeated_entries = true;
  for (double x : k)
    if (std::abs(x) < opt.flag_tol) root.flags.zero_entry = true;
  for (double x : k)
    if (x != 0.0 && condition_rcond(s.bc(), x) < opt.pole_rcond) root.flags.near_pole = true;
  root.flags.vanishing_wavefunction = root.multiplicity_proxy == 0;
  root.flags.non_bosonic = root.multiplicity_proxy > 0 && root.bosonic_multiplicity == 0;
  return root;
}

inline SpectralRoot certify_root(const SecularSystem& sys, const WaveTuple& k, double tol) {
  CertifyOptions opt;
  opt.tol = tol;
  return certify_root(sys, k, opt);
}

// Signed eigenphases used by the refinement: for each cyclic shift, the phase of the
// eigenvalue of U(C^d k) closest to `ref[d]` (closest to 1 when no reference is given).
struct PhaseEval {
  std::vector<cplx> lambda;
  Eigen::VectorXd theta;
  double merit = 0;  // sum_d |1 - lambda_d|^2
};

inline PhaseEval phase_residuals(const SecularSystem& sys, const WaveTuple& k, const std::vector<cplx>* ref = nullptr,
                                 Sector sector = Sector::all) {
  const int n = sys.n();
  PhaseEval out;
  out.theta.resize(n);
  for (int d = 0; d < n; ++d) {
    const CMatrix u = sector_unitary(sys, cyclic_shift(k, d), sector);
    Eigen::ComplexEigenSolver<CMatrix> es(u, false);
    const cplx target = ref ? (*ref)[d] : cplx(1.0);
    cplx best = es.eigenvalues()(0);
    for (long i = 1; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()(i) - target) < std::abs(best - target)) best = es.eigenvalues()(i);
    out.lambda.push_back(best);
    out.theta(d) = std::arg(best);
    out.merit += std::norm(1.0 - best);
  }
  return out;
}

struct RefineResult {
  WaveTuple k;
  double residual = 0;  // max over shifts of |1 - lambda_d|
  int iterations = 0;
  bool converged = false;
};

// Damped Gauss-Newton (falling back to Levenberg-Marquardt) on the signed eigenphases.
// Every accepted step strictly decreases the merit function.
inline RefineResult refine_root(const SecularSystem& sys, WaveTuple k, double tol, int max_iterations = 60,
                                Sector sector = Sector::all) {
  const int n = sys.n();
  PhaseEval cur = phase_residuals(sys, k, nullptr, sector);
  RefineResult res;
  auto worst = [](const PhaseEval& e) {
    double w = 0;
    for (const cplx& l : e.lambda) w = std::max(w, std::abs(1.0 - l));
    return w;
  };
  const double target = std::min(tol * 1e-2, 1e-12);
  int it = 0;
  for (; it < max_iterations && worst(cur) > target; ++it) {
    Eigen::MatrixXd jac(n, n);
    const double h = 1e-7 * std::max(1.0, std::abs(k.back()));
    for (int j = 0; j < n; ++j) {
      WaveTuple kh = k;
      kh[j] += h;
      const PhaseEval e = phase_residuals(sys, kh, &cur.lambda, sector);
      for (int d = 0; d < n; ++d) jac(d, j) = std::remainder(e.theta(d) - cur.theta(d), 2 * std::numbers::pi) / h;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * cur.theta;
    const double damp0 = jtj.diagonal().maxCoeff();
    bool accepted = false;
    for (double mu : {0.0, 1e-6, 1e-3, 1e-1, 10.0}) {
      Eigen::MatrixXd a = jtj;
      a.diagonal().array() += mu * damp0 + (mu > 0 ? 1e-300 : 0.0);
      const Eigen::VectorXd step = -a.completeOrthogonalDecomposition().solve(jtr);
      if (!step.allFinite()) continue;
      double s = 1.0;
      for (int bt = 0; bt < 8 && !accepted; ++bt, s *= 0.5) {
        WaveTuple trial = k;
        for (int j = 0; j < n; ++j) trial[j] += s * step(j);
        PhaseEval e;
        try {
          e = phase_residuals(sys, trial, nullptr, sector);
        } catch (const SingularityError&) {
          continue;
        }
        if (e.merit < cur.merit) {
          k = trial;
          cur = e;
          accepted = true;
        }
      }
      if (accepted) break;
    }
    if (!accepted) break;
  }
  res.k = k;
  res.iterations = it;
  res.residual = worst(cur);
  res.converged = res.residual < tol;
  return res;
}

struct ScanOptions {
  double k_max = 0;
  double grid_step = 0;
  double refine_tol = 1e-10;
  double cert_tol = 1e-8;
  // Restrict the grid to tuples with sum k_j^2 <= energy_max (<= 0: no restriction).
  double energy_max = 0;
  unsigned threads = 1;
  int max_iterations = 60;
  // Sector::bosonic scans only the exchange-symmetric block of U(k); roots are still certified
  // against the full secular system.
  Sector sector = Sector::all;
};

struct RejectedCandidate {
  WaveTuple start;
  WaveTuple last;
  double residual = 0;
  std::string reason;
};

struct ScanResult {
  std::vector<SpectralRoot> roots;
  std::vector<RejectedCandidate> rejected;
  std::size_t grid_points = 0;
  std::size_t candidates = 0;
};

namespace detail {

// Runs body(i) for i in [0, count) on `threads` workers; results must be written by index.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline std::uint64_t pack(const std::vector<int>& a) {
  std::uint64_t key = 0;
  for (int x : a) key = (key << 16) | static_cast<std::uint64_t>(x);
  return key;
}

inline bool lex_less(const WaveTuple& a, const WaveTuple& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

inline WaveTuple canonical_tuple(WaveTuple k) {
  for (double& x : k) x = std::abs(x);
  std::sort(k.begin(), k.end());
  return k;
}

inline void sort_roots(std::vector<SpectralRoot>& roots) {
  std::sort(roots.begin(), roots.end(), [](const SpectralRoot& a, const SpectralRoot& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return detail::lex_less(a.k, b.k);
  });
}

// Grid scan over the ordered simplex 0 <= k_1 <= ... <= k_n <= k_max: local minima of
// sum_d sigma_min(M(C^d k))^2 are refined, canonicalised, certified and deduplicated.
inline ScanResult scan_roots(const SecularSystem& sys, const ScanOptions& opt) {
  if (!(opt.k_max > 0)) throw ValidationError("scan_roots: k_max must be positive");
  if (!(opt.grid_step > 0) || !(opt.grid_step < opt.k_max)) throw ValidationError("scan_roots: need 0 < grid_step < k_max");
  if (!(opt.refine_tol > 0)) throw ValidationError("scan_roots: refine_tol must be positive");
  const int n = sys.n();
  const double step = opt.grid_step;
  const int top = static_cast<int>(std::floor(opt.k_max / step + 1e-9));
  if (top >= 65535) throw ValidationError("scan_roots: grid too fine");
  const double radius = opt.energy_max > 0 ? std::sqrt(opt.energy_max) + step * std::sqrt(double(n)) : 0;

  std::vector<std::vector<int>> points;
  {
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start, double r2) -> void {
      if (static_cast<int>(cur.size()) == n) {
        points.push_back(cur);
        return;
      }
      for (int a = start; a <= top; ++a) {
        const double x = a * step;
        const double rem = n - static_cast<int>(cur.size());
        // All later entries are >= x.
        if (radius > 0 && r2 + rem * x * x > radius * radius) break;
        cur.push_back(a);
        self(self, a, r2 + x * x);
        cur.pop_back();
      }
    };
    rec(rec, 0, 0.0);
  }

  ScanResult out;
  out.grid_points = points.size();
  std::vector<double> f(points.size());
  detail::parallel_for(points.size(), opt.threads, [&](std::size_t i) {
    WaveTuple k(n);
    for (int m = 0; m < n; ++m) k[m] = points[i][m] * step;
    double v = 0;
    try {
      for (int d = 0; d < n; ++d) v += fast_sigma_min_sq(sector_unitary(sys, cyclic_shift(k, d), opt.sector));
    } catch (const SingularityError&) {
      v = std::numeric_limits<double>::infinity();
    }
    f[i] = v;
  });

  std::unordered_map<std::uint64_t, std::size_t> where;
  where.reserve(points.size() * 2);
  for (std::size_t i = 0; i < points.size(); ++i) where[detail::pack(points[i])] = i;

  std::vector<std::vector<int>> offsets;
  for (int code = 0; code < static_cast<int>(std::pow(3, n)); ++code) {
    std::vector<int> o(n);
    int c = code;
    bool zero = true;
    for (int m = 0; m < n; ++m, c /= 3) {
      o[m] = c % 3 - 1;
      zero = zero && o[m] == 0;
    }
    if (!zero) offsets.push_back(o);
  }

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(f[i])) continue;
    if (points[i].back() == 0) continue;
    bool is_min = true;
    std::vector<int> nb(n);
    for (const auto& o : offsets) {
      for (int m = 0; m < n; ++m) nb[m] = points[i][m] + o[m];
      auto it = where.find(detail::pack(nb));
      if (nb.front() < 0 || it == where.end()) continue;
      if (f[it->second] < f[i]) {
        is_min = false;
        break;
      }
    }
    if (is_min) candidates.push_back(i);
  }
  out.candidates = candidates.size();

  struct Outcome {
    std::optional<SpectralRoot> root;
    std::optional<RejectedCandidate> rejected;
  };
  std::vector<Outcome> outcomes(candidates.size());
  CertifyOptions copt;
  copt.tol = opt.cert_tol;
  detail::parallel_for(candidates.size(), opt.threads, [&](std::size_t c) {
    WaveTuple start(n);
    for (int m = 0; m < n; ++m) start[m] = points[candidates[c]][m] * step;
    RefineResult r;
    try {
      r = refine_root(sys, start, opt.refine_tol, opt.max_iterations, opt.sector);
    } catch (const std::exception& e) {
      outcomes[c].rejected = RejectedCandidate{start, start, std::numeric_limits<double>::infinity(), e.what()};
      return;
    }
    if (!r.converged) {
      outcomes[c].rejected = RejectedCandidate{start, r.k, r.residual, "no convergence"};
      return;
    }
    const WaveTuple k = canonical_tuple(r.k);
    if (k.back() > opt.k_max + 1e-9 || (opt.energy_max > 0 && energy(k) > opt.energy_max)) {
      outcomes[c].rejected = RejectedCandidate{start, k, r.residual, "outside scan region"};
      return;
    }
    if (energy(k) < 1e-12) {
      outcomes[c].rejected = RejectedCandidate{start, k, r.residual, "zero tuple excluded"};
      return;
    }
    try {
      outcomes[c].root = certify_root(sys, k, copt);
    } catch (const std::exception& e) {
      outcomes[c].rejected = RejectedCandidate{start, k, r.residual, e.what()};
    }
  });

  std::vector<SpectralRoot> found;
  for (auto& o : outcomes) {
    if (o.root) found.push_back(*o.root);
    if (o.rejected) out.rejected.push_back(*o.rejected);
  }
  sort_roots(found);
  const double dedupe = step / 10;
  for (const auto& r : found) {
    bool dup = false;
    for (auto& kept : out.roots) {
      double dist = 0;
      for (int m = 0; m < n; ++m) dist = std::max(dist, std::abs(kept.k[m] - r.k[m]));
      if (dist < dedupe) {
        if (r.smallest_singular_value < kept.smallest_singular_value) kept = r;
        dup = true;
        break;
      }
    }
    if (!dup) out.roots.push_back(r);
  }
  sort_roots(out.roots);
  return out;
}

inline std::vector<SpectralRoot> scan_roots(const SecularSystem& sys, double k_max, double grid_step, double refine_tol) {
  ScanOptions opt;
  opt.k_max = k_max;
  opt.grid_step = grid_step;
  opt.refine_tol = refine_tol;
  return scan_roots(sys, opt).roots;
}

}  // namespace qgs
