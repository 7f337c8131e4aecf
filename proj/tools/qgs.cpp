#include <cstdio>
#include <fstream>
#include <iostream>
#include <locale>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qgs/qgs.hpp"

namespace {

using namespace qgs;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x, int precision = 17) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(precision);
  s << x;
  return s.str();
}

std::string brief(double x) { return num(x, 10); }

// Data goes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) throw UsageError(std::string("--") + name + " must be positive");
}

struct GraphOptions {
  std::string graph;
  int n = 1;
  double alpha = 0;
  bool non_interacting = false;
};

SecularSystem load_system(const GraphOptions& g) {
  const GraphDefinition def = load_graph(g.graph);
  const StarRepresentation star(def.graph);
  BoundaryMatrices bc = make_conditions(def, star);
  if (g.n < 1 || g.n > 4) throw UsageError("--n must be in 1..4");
  if (!std::isfinite(g.alpha)) throw UsageError("--alpha must be finite");
  return SecularSystem(SystemAssembly(star, std::move(bc), g.n, g.alpha, !g.non_interacting));
}

struct SpectrumOptions {
  GraphOptions g;
  double kmax = 0;
  double step = 0;
  double tol = 1e-8;
  double refine_tol = 1e-10;
  double emax = 0;
  bool bosonic = false;
  bool all_roots = false;
  unsigned threads = 1;
  std::string out;
};

int cmd_spectrum(const SpectrumOptions& o) {
  require_positive(o.kmax, "kmax");
  require_positive(o.tol, "tol");
  require_positive(o.refine_tol, "refine-tol");
  const SecularSystem sys = load_system(o.g);
  ScanOptions opt;
  opt.k_max = o.kmax;
  opt.grid_step = o.step > 0 ? o.step : 0.05 / sys.assembly.star().max_length();
  opt.refine_tol = o.refine_tol;
  opt.cert_tol = o.tol;
  opt.energy_max = o.emax;
  opt.threads = std::max(1u, o.threads);
  opt.sector = o.bosonic ? Sector::bosonic : Sector::all;
  std::cerr << "spectrum: n=" << o.g.n << " alpha=" << brief(o.g.alpha) << " kmax=" << brief(opt.k_max)
            << " step=" << brief(opt.grid_step) << " refine_tol=" << brief(opt.refine_tol) << " tol=" << brief(opt.cert_tol)
            << " sector=" << (o.bosonic ? "bosonic" : "all") << (o.g.non_interacting ? " non-interacting" : "") << "\n";
  const ScanResult res = scan_roots(sys, opt);
  std::cerr << "spectrum: " << res.grid_points << " grid points, " << res.candidates << " candidates, "
            << res.roots.size() << " roots, " << res.rejected.size() << " rejected\n";
  for (const auto& r : res.rejected) {
    std::cerr << "  rejected near";
    for (double x : r.last) std::cerr << ' ' << brief(x);
    std::cerr << ": " << r.reason << "\n";
  }

  Output out(o.out);
  std::ostream& os = out.stream();
  for (int j = 1; j <= o.g.n; ++j) os << "k_" << j << ',';
  os << "energy,residual_max,sigma_min,multiplicity_proxy,flags\n";
  std::size_t hidden = 0;
  for (const auto& r : res.roots) {
    if (!r.physical() && !o.all_roots) {
      ++hidden;
      continue;
    }
    for (double x : r.k) os << num(x) << ',';
    os << num(r.energy) << ',' << num(r.residual_max) << ',' << num(r.smallest_singular_value) << ','
       << r.multiplicity_proxy << ',' << r.flags.str() << '\n';
  }
  if (hidden > 0)
    std::cerr << "spectrum: " << hidden << " roots with a vanishing wavefunction not listed (use --all-roots)\n";
  return kOk;
}

struct VerifyOptions {
  GraphOptions g;
  std::uint64_t seed = 42;
  int samples = 50;
  double tol = 1e-10;
  std::string out;
};

int cmd_verify(const VerifyOptions& o) {
  if (o.samples < 1) throw UsageError("--samples must be positive");
  const SecularSystem sys = load_system(o.g);
  std::cerr << "verify: seed=" << o.seed << " samples=" << o.samples << " n=" << o.g.n << " alpha=" << brief(o.g.alpha)
            << "\n";
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  std::array<double, 6> worst{};
  std::array<bool, 6> used{};
  std::array<std::pair<double, double>, 6> where{};
  for (int s = 0; s < o.samples; ++s) {
    double u, v;
    do {
      u = unif(rng);
      v = unif(rng);
    } while (std::min({std::abs(u), std::abs(v), std::abs(u + v), std::abs(u - v)}) < 1e-3);
    const RelationResiduals res = check_relations(sys.assembly, u, v);
    for (int r = 0; r < 6; ++r)
      if (res[r]) {
        used[r] = true;
        if (!(*res[r] <= worst[r])) {
          worst[r] = *res[r];
          where[r] = {u, v};
        }
      }
  }
  Output out(o.out);
  std::ostream& os = out.stream();
  os << "relation,max_residual,status\n";
  bool ok = true;
  for (int r = 0; r < 6; ++r) {
    if (!used[r]) {
      os << r + 1 << ",,n/a\n";
      continue;
    }
    const bool pass = worst[r] < o.tol;
    os << r + 1 << ',' << num(worst[r]) << ',' << (pass ? "PASS" : "FAIL") << '\n';
    if (!pass) {
      ok = false;
      std::cerr << "verify: relation " << r + 1 << " (" << relation_description(r + 1) << ") fails with residual "
                << num(worst[r]) << " at u=" << num(where[r].first) << " v=" << num(where[r].second) << "\n";
    }
  }
  return ok ? kOk : kFailure;
}

std::vector<int> parse_labels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  ss.imbue(std::locale::classic());
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw UsageError("bad quantum number list '" + text + "'");
    }
    if (pos != item.size()) throw UsageError("bad quantum number list '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty quantum number list");
  return out;
}

double interval_length(const std::string& graph, double length) {
  if (graph.empty()) return length;
  const GraphDefinition def = load_graph(graph);
  if (def.graph.edges.size() != 1 || def.graph.edges[0].a == def.graph.edges[0].b)
    throw UsageError("this command needs an interval graph (a single non-loop edge)");
  return def.graph.edges[0].length;
}

struct BetheOptions {
  std::string graph;
  double length = 1.0;
  double alpha = 0;
  std::vector<std::string> labels;
  bool free_labels = false;
  double tol = 1e-13;
  std::string out;
};

int cmd_bethe(const BetheOptions& o) {
  const double l = interval_length(o.graph, o.length);
  require_positive(l, "length");
  if (!(o.alpha >= 0) || !std::isfinite(o.alpha)) throw UsageError("--alpha must be finite and >= 0");
  if (o.labels.empty()) throw UsageError("at least one --m tuple is required");
  std::vector<QuantumNumbers> tuples;
  for (const auto& t : o.labels) tuples.push_back(parse_labels(t));
  const std::size_t n = tuples.front().size();
  for (const auto& t : tuples)
    if (t.size() != n) throw UsageError("all --m tuples must have the same length");

  Output out(o.out);
  std::ostream& os = out.stream();
  for (std::size_t j = 1; j <= n; ++j) os << "m_" << j << ',';
  for (std::size_t j = 1; j <= n; ++j) os << "k_" << j << ',';
  os << "energy,status\n";
  bool ok = true;
  for (const auto& m : tuples) {
    for (int x : m) os << x << ',';
    try {
      const QuantumNumbers labels = o.free_labels && o.alpha > 0 ? quantum_numbers_from_free_limit(m) : m;
      const WaveTuple k = solve_interval_bethe(o.alpha, l, labels, o.tol);
      for (double x : k) os << num(x) << ',';
      os << num(energy(k)) << ",OK\n";
    } catch (const std::exception& e) {
      ok = false;
      for (std::size_t j = 0; j < n; ++j) os << ',';
      os << ",FAILED\n";
      std::cerr << "bethe: m=(";
      for (std::size_t j = 0; j < m.size(); ++j) std::cerr << (j ? "," : "") << m[j];
      std::cerr << "): " << e.what() << "\n";
    }
  }
  return ok ? kOk : kFailure;
}

struct OracleOptions {
  std::string graph;
  double length = 1.0;
  double alpha = 0;
  int n = 2;
  int levels = 3;
  int grid = 63;
  double tol = 1e-3;
  std::string out;
};

// The lowest `levels` energies of the interval Bethe spectrum for n <= 2.
std::vector<double> bethe_levels(int n, double alpha, double l, int levels) {
  using std::numbers::pi;
  for (int max_label = levels + n + 1;; max_label += levels) {
    std::vector<double> e;
    const auto tuples = alpha > 0 ? increasing_labels(n, max_label) : nondecreasing_labels(n, max_label);
    for (const auto& m : tuples) e.push_back(energy(solve_interval_bethe(alpha, l, m)));
    std::sort(e.begin(), e.end());
    if (static_cast<int>(e.size()) < levels) continue;
    // Any tuple with a larger label has k_n >= (max_label + 2 - n) pi / l.
    const double bound = std::pow((max_label + 2 - n) * pi / l, 2);
    if (e[levels - 1] < bound) return std::vector<double>(e.begin(), e.begin() + levels);
  }
}

int cmd_oracle(const OracleOptions& o) {
  if (o.n < 1 || o.n > 2) throw UsageError("oracle: unsupported particle number (only n = 1 or 2)");
  if (o.levels < 1) throw UsageError("--levels must be positive");
  const double l = interval_length(o.graph, o.length);
  require_positive(l, "length");
  if (!(o.alpha >= 0) || !std::isfinite(o.alpha)) throw UsageError("--alpha must be finite and >= 0");
  std::cerr << "oracle: n=" << o.n << " alpha=" << brief(o.alpha) << " l=" << brief(l) << " N=" << o.grid
            << " 2N=" << 2 * o.grid << "\n";
  const auto bethe = bethe_levels(o.n, o.alpha, l, o.levels);
  const auto fd = fd_extrapolated(o.n, l, o.alpha, o.grid, o.levels);
  Output out(o.out);
  std::ostream& os = out.stream();
  os << "level,E_bethe,E_fd_N,E_fd_2N,extrapolated,rel_diff\n";
  bool ok = true;
  for (int i = 0; i < o.levels; ++i) {
    const double rel = std::abs(fd[i].extrapolated - bethe[i]) / std::abs(bethe[i]);
    ok = ok && rel < o.tol;
    os << i + 1 << ',' << num(bethe[i]) << ',' << num(fd[i].e_coarse) << ',' << num(fd[i].e_fine) << ','
       << num(fd[i].extrapolated) << ',' << num(rel) << '\n';
  }
  if (!ok) std::cerr << "oracle: relative difference above " << num(o.tol) << "\n";
  return ok ? kOk : kFailure;
}

void add_graph_options(CLI::App* cmd, GraphOptions& g) {
  cmd->add_option("--graph", g.graph, "graph definition (JSON)")->required();
  cmd->add_option("--n", g.n, "number of particles")->required();
  cmd->add_option("--alpha", g.alpha, "contact interaction strength");
  cmd->add_flag("--non-interacting", g.non_interacting, "set every interaction tensor c_i to zero");
}

}  // namespace

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());
  CLI::App app{"Spectra of n particles with contact interactions on quantum graphs"};
  app.require_subcommand(1);

  SpectrumOptions spectrum;
  auto* sp = app.add_subcommand("spectrum", "scan the secular equations for spectral roots (CSV)");
  add_graph_options(sp, spectrum.g);
  sp->add_option("--kmax", spectrum.kmax, "upper end of the wave-number box")->required();
  sp->add_option("--step", spectrum.step, "grid step (default 0.05 / longest edge)");
  sp->add_option("--tol", spectrum.tol, "certification tolerance");
  sp->add_option("--refine-tol", spectrum.refine_tol, "refinement tolerance on sigma_min");
  sp->add_option("--emax", spectrum.emax, "only scan tuples with energy below this value");
  sp->add_flag("--bosonic", spectrum.bosonic, "scan only the exchange-symmetric sector");
  sp->add_flag("--all-roots", spectrum.all_roots, "also list joint zeros whose wavefunction vanishes");
  sp->add_option("--threads", spectrum.threads, "worker threads");
  sp->add_option("--out", spectrum.out, "output CSV (default stdout)");

  VerifyOptions verify;
  auto* vf = app.add_subcommand("verify", "check the operator consistency relations on random samples");
  add_graph_options(vf, verify.g);
  vf->add_option("--seed", verify.seed, "random seed");
  vf->add_option("--samples", verify.samples, "number of (u, v) samples");
  vf->add_option("--tol", verify.tol, "pass threshold");
  vf->add_option("--out", verify.out, "output CSV (default stdout)");

  BetheOptions bethe;
  auto* bt = app.add_subcommand("bethe", "solve the interval Bethe equations for given quantum numbers");
  bt->add_option("--graph", bethe.graph, "interval graph (JSON); overrides --length");
  bt->add_option("--length", bethe.length, "interval length");
  bt->add_option("--alpha", bethe.alpha, "contact interaction strength")->required();
  bt->add_option("--m", bethe.labels, "comma separated quantum numbers, repeatable")->required();
  bt->add_flag("--free-labels", bethe.free_labels, "interpret --m as non-interacting labels");
  bt->add_option("--tol", bethe.tol, "solver tolerance");
  bt->add_option("--out", bethe.out, "output CSV (default stdout)");

  OracleOptions oracle;
  auto* orc = app.add_subcommand("oracle", "compare Bethe energies with a finite-difference oracle");
  orc->add_option("--graph", oracle.graph, "interval graph (JSON); overrides --length");
  orc->add_option("--length", oracle.length, "interval length");
  orc->add_option("--alpha", oracle.alpha, "contact interaction strength");
  orc->add_option("--n", oracle.n, "number of particles (1 or 2)");
  orc->add_option("--levels", oracle.levels, "number of levels");
  orc->add_option("--N", oracle.grid, "coarse grid size N (the fine grid is 2N)");
  orc->add_option("--tol", oracle.tol, "relative agreement threshold");
  orc->add_option("--out", oracle.out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sp) return cmd_spectrum(spectrum);
    if (*vf) return cmd_verify(verify);
    if (*bt) return cmd_bethe(bethe);
    if (*orc) return cmd_oracle(oracle);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const GraphFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
