// fuplab: experiment runner. Each subcommand reads an optional config file,
// writes one CSV (or PGM masks) into --out, and prints a short summary.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>

#include "fuplab/config.hpp"
#include "fuplab/counting.hpp"
#include "fuplab/fup.hpp"
#include "fuplab/lagrangian.hpp"
#include "fuplab/output.hpp"
#include "fuplab/porosity.hpp"
#include "fuplab/quantum.hpp"

using namespace fuplab;
namespace fs = std::filesystem;

namespace {

struct Run {
  Config cfg;
  std::string kind;
  fs::path out;
  unsigned seed = 1;

  fs::path file(const std::string& name) const { return out / name; }
  CsvWriter csv(const std::string& name, const std::vector<std::string>& cols) const {
    return CsvWriter(file(name).string(), cols, cfg.hash_hex(), kind);
  }
};

AnosovMapSpec map_spec(const Config& c) {
  AnosovMapSpec s = AnosovMapSpec::cat(c.get_double("map.epsilon", 0.0, -0.5, 0.5));
  const auto m = c.get_ints("map.matrix", {2, 1, 1, 1});
  if (m.size() != 4) throw InputError("field 'map.matrix': expected 4 integers a b c d");
  s.linear << m[0], m[1], m[2], m[3];
  if (s.linear.determinant() != 1) throw InputError("field 'map.matrix': determinant must be 1");
  return s;
}

Partition partition(const Config& c) {
  Partition::Options o;
  const auto centre = c.get_doubles("partition.hole_center", {0.5, 0.5}, 0.0, 1.0);
  if (centre.size() != 2) throw InputError("field 'partition.hole_center': expected two numbers");
  o.hole_center = {centre[0], centre[1]};
  o.hole_radius = c.get_double("partition.hole_radius", 0.2, 1e-3, 0.45);
  o.transition = c.get_double("partition.transition", 0.1, 0.0, 0.5);
  o.eps0 = c.get_double("partition.eps0", 0.2, 0.01, 1.0);
  return Partition(o);
}

std::vector<double> dyadic(int lo, int hi) {
  std::vector<double> hs;
  for (int k = lo; k <= hi; ++k) hs.push_back(std::ldexp(1.0, -k));
  return hs;
}

std::string fmt(double v) { return format_number(v); }

// ------------------------------------------------------------------ commands

int dynamics_report(const Run& r) {
  const AnosovMapSpec spec = map_spec(r.cfg);
  const auto hs = r.cfg.get_doubles("experiment.h", dyadic(6, 14), 1e-12, 0.999);
  const int res = r.cfg.get_int("experiment.grid", 256, 16, 4096);
  r.cfg.check_unused();
  const AnosovVerdict v = verify_anosov(spec);
  if (!v.accepted) {
    std::cerr << "map rejected: " << v.reason << "\n";
    return 2;
  }
  const ExpansionRates rates = estimate_expansion_rates(spec, res);
  auto csv = r.csv("dynamics.csv", {"h", "N0", "N", "lambda0", "lambda1", "Lambda", "epsilon_max", "margin"});
  for (const double h : hs) {
    const PropagationTimes t = propagation_times(h, rates);
    csv.row({h, (long long)t.short_time, (long long)t.long_time, rates.lambda0, rates.lambda1,
             (long long)rates.big_lambda, v.epsilon_max, v.margin});
  }
  std::cout << "anosov: accepted, epsilon_max=" << fmt(v.epsilon_max) << " margin=" << fmt(v.margin)
            << "\nrates: lambda0=" << fmt(rates.lambda0) << " lambda1=" << fmt(rates.lambda1)
            << " Lambda=" << rates.big_lambda << "\n";
  return 0;
}

int porosity_cmd(const Run& r) {
  const std::string set_kind = r.cfg.get_string("porosity.set", "cantor", {"cantor", "dynamical"});
  const auto scales = r.cfg.get_doubles("porosity.scales", {}, 1e-12, 1e6);
  IntervalSet set;
  double lo = 0, hi = 1;
  if (set_kind == "cantor") {
    const int base = r.cfg.get_int("porosity.base", 3, 2, 64);
    const auto digits = r.cfg.get_ints("porosity.digits", {0, 2}, 0, 63);
    const int k = r.cfg.get_int("porosity.k", 8, 0, 20);
    set = IntervalSet::cantor(base, digits, k);
    lo = r.cfg.get_double("porosity.alpha0", std::pow(double(base), -k), 1e-12, 1e6);
    hi = r.cfg.get_double("porosity.alpha1", 1.0, 1e-12, 1e6);
  } else {
    const AnosovMapSpec spec = map_spec(r.cfg);
    const Partition part = partition(r.cfg);
    const int n = r.cfg.get_int("porosity.word_length", 8, 1, 30);
    const int res = r.cfg.get_int("porosity.resolution", 20000, 100, 10000000);
    const Word w{Alphabet::Coarse, std::vector<int>(n, kStar), Orientation::Future};
    TorusLine line;
    const auto base = r.cfg.get_doubles("porosity.line_base", {0.05, 0.1}, 0.0, 1.0);
    line.base = {base.at(0), base.at(1)};
    line.direction = unstable_direction(spec, line.base).direction;
    set = dynamical_trace(spec, part, w, line, res);
    const double lambda = std::exp(estimate_expansion_rates(spec).raw_lambda0);
    lo = r.cfg.get_double("porosity.alpha0", std::pow(lambda, -n), 1e-12, 1e6);
    hi = r.cfg.get_double("porosity.alpha1", 1.0, 1e-12, 1e6);
  }
  r.cfg.check_unused();
  if (set.empty()) throw InputError("porosity: the set is empty");
  const PorosityReport rep = porosity_report(set, {lo, hi});
  std::vector<double> ss = scales;
  if (ss.empty())
    for (double s = hi; s >= lo * 0.999; s /= 2) ss.push_back(s);
  auto csv = r.csv("porosity.csv", {"scale", "nu_star"});
  for (const auto& row : porosity_profile(set, ss)) csv.row({row.scale, row.nu_star});
  csv.comment("nu_star=" + fmt(rep.nu_star) + " alpha0=" + fmt(lo) + " alpha1=" + fmt(hi) +
              " pieces=" + std::to_string(set.size()));
  std::cout << "nu_star=" << fmt(rep.nu_star) << " on scales [" << fmt(lo) << ", " << fmt(hi) << "]\n";
  return 0;
}

int fup_scan(const Run& r) {
  const int base = r.cfg.get_int("fup.base", 3, 2, 64);
  const auto digits = r.cfg.get_ints("fup.digits", {0, 2}, 0, 63);
  const auto ks = r.cfg.get_ints("fup.k", {5, 6, 7, 8, 9}, 1, 20);
  const std::string method = r.cfg.get_string("fup.method", "gauss", {"gauss", "grid"});
  const bool smooth = r.cfg.get_bool("fup.smoothed", false);
  r.cfg.check_unused();
  FupOptions opt;
  opt.method = method == "gauss" ? FupMethod::Gauss : FupMethod::Grid;
  auto csv = r.csv("fup.csv", {"k", "h", "norm", "volume_bound", "rows", "cols", "delta", "converged"});
  std::vector<double> hs, norms;
  for (const int k : ks) {
    const double h = std::pow(double(base), -k);
    const IntervalSet omega = IntervalSet::cantor(base, digits, k);
    const FupResult res = smooth ? fup_norm_smoothed(h, smooth_cutoff(omega, h), smooth_cutoff(omega, h), opt)
                                 : fup_norm(h, omega, omega, opt);
    csv.row({(long long)k, h, res.norm, res.volume_bound, (long long)res.rows, (long long)res.cols, res.delta,
             (long long)res.converged});
    hs.push_back(h);
    norms.push_back(res.norm);
  }
  if (hs.size() >= 4) {
    const BetaFit f = fit_beta(hs, norms);
    csv.comment("beta_fit=" + fmt(f.beta) + " r2=" + fmt(f.r2));
    std::cout << "beta_fit=" << fmt(f.beta) << " r2=" << fmt(f.r2) << "\n";
  }
  return 0;
}

Symbol named_symbol(const std::string& name) {
  if (name == "cos-xi") return [](double, double xi) { return std::cos(kTwoPi * xi); };
  if (name == "cos-x") return [](double x, double) { return std::cos(kTwoPi * x); };
  return [](double x, double xi) { return std::cos(kTwoPi * (x + xi)); };  // "cos-sum"
}

int egorov_scan(const Run& r) {
  AnosovMapSpec spec = map_spec(r.cfg);
  if (!r.cfg.has("map.epsilon")) spec.epsilon = 0.05;
  const auto Ns = r.cfg.get_ints("experiment.N", {64, 128, 256, 512, 1024}, 2, 4096);
  const int t = r.cfg.get_int("egorov.t", 1, -20, 20);
  const std::string sym = r.cfg.get_string("egorov.symbol", "cos-xi", {"cos-xi", "cos-x", "cos-sum"});
  r.cfg.check_unused();
  auto csv = r.csv("egorov.csv", {"N", "h", "discrepancy", "tail_fraction"});
  std::vector<double> xs, ys;
  for (const int N : Ns) {
    const HilbertSpace space = HilbertSpace::make(N);
    const EgorovResult e = egorov_discrepancy(spec, named_symbol(sym), space, t);
    csv.row({(long long)N, space.h(), e.discrepancy, e.tail_fraction});
    if (e.discrepancy > 0) xs.push_back(std::log(space.h())), ys.push_back(std::log(e.discrepancy));
  }
  if (xs.size() >= 2) {
    const LinearFit f = least_squares(xs, ys);
    csv.comment("slope=" + fmt(f.slope) + " r2=" + fmt(f.r2));
    std::cout << "slope(log discrepancy vs log h)=" << fmt(f.slope) << "\n";
  }
  return 0;
}

int key_estimate(const Run& r) {
  const AnosovMapSpec spec = map_spec(r.cfg);
  const Partition part = partition(r.cfg);
  const auto Ns = r.cfg.get_ints("experiment.N", {128, 256, 512, 1024}, 2, 4096);
  KeyEstimateOptions opt;
  opt.policy = r.cfg.get_string("key.policy", "all-star", {"all-star", "worst-of-sample"}) == "all-star"
                   ? WordPolicy::AllStar
                   : WordPolicy::WorstOfSample;
  opt.samples = r.cfg.get_int("key.samples", 64, 1, 100000);
  opt.length_factor = r.cfg.get_double("key.length_factor", 7.0 / 6.0, 0.1, 10.0);
  opt.seed = r.seed;
  r.cfg.check_unused();
  const ExpansionRates rates = estimate_expansion_rates(spec);
  const KeyEstimateScan scan = key_estimate_scan(spec, part, Ns, rates, opt);
  auto csv = r.csv("key.csv", {"N", "h", "n", "norm", "beta_fit_partial", "word"});
  for (const auto& row : scan.rows)
    csv.row({(long long)row.N, row.h, (long long)row.word_length, row.norm, row.beta_fit_partial, row.word});
  csv.comment("beta_fit=" + fmt(scan.beta_fit) + " r2=" + fmt(scan.r2));
  std::cout << "beta_fit=" << fmt(scan.beta_fit) << " r2=" << fmt(scan.r2) << "\n";
  return 0;
}

DampedSpec damping(const Config& c) {
  BallBump b;
  const auto centre = c.get_doubles("damping.center", {0.5, 0.5}, 0.0, 1.0);
  b.center = {centre.at(0), centre.at(1)};
  b.radius = c.get_double("damping.radius", 0.3, 1e-3, 0.5);
  b.width = c.get_double("damping.width", 0.2, 0.0, 1.0);
  b.amplitude = c.get_double("damping.amplitude", 1.0, 0.0, 50.0);
  DampedSpec d;
  d.b = b.symbol();
  d.left = c.get_bool("damping.left", false);
  return d;
}

int damped_scan(const Run& r) {
  const AnosovMapSpec spec = map_spec(r.cfg);
  const Partition part = partition(r.cfg);
  const DampedSpec d = damping(r.cfg);
  const auto Ns = r.cfg.get_ints("experiment.N", {128, 256, 512}, 2, 2048);
  const double beta = r.cfg.get_double("damping.beta", 0.1, 1e-9, 1.0);
  const ExpansionRates rates = estimate_expansion_rates(spec);
  const double alpha = r.cfg.get_double("damping.alpha", choose_alpha(beta, rates.lambda0), 1e-9, 0.5);
  r.cfg.check_unused();
  const DampedScan scan = damped_decay_scan(spec, d, part, Ns, rates, alpha, beta);
  auto csv = r.csv("damped.csv", {"N", "h", "steps", "damped_norm", "spectral_radius", "max_singular", "alpha1"});
  for (const auto& row : scan.rows)
    csv.row({(long long)row.N, row.h, (long long)row.steps, row.damped_norm, row.spectral_radius,
             row.max_singular, row.alpha1});
  csv.comment("eta=" + fmt(scan.eta) + " alpha=" + fmt(alpha) + " alpha1=" + fmt(scan.alpha1) +
              " beta1=" + fmt(scan.beta1) + " decay_fit=" + fmt(scan.decay_fit) + " r2=" + fmt(scan.r2));
  std::cout << "eta=" << fmt(scan.eta) << " alpha1=" << fmt(scan.alpha1) << " beta1=" << fmt(scan.beta1)
            << " decay_fit=" << fmt(scan.decay_fit) << "\n";
  return 0;
}

int mass_scan_cmd(const Run& r) {
  AnosovMapSpec spec = map_spec(r.cfg);
  if (!r.cfg.has("map.epsilon")) spec.epsilon = 0.05;
  std::vector<int> def;
  for (int N = 100; N <= 400; N += 50) def.push_back(N);
  const auto Ns = r.cfg.get_ints("experiment.N", def, 2, 2048);
  BallBump ball;
  const auto centre = r.cfg.get_doubles("mass.center", {0.5, 0.5}, 0.0, 1.0);
  ball.center = {centre.at(0), centre.at(1)};
  ball.radius = r.cfg.get_double("mass.radius", 0.25, 1e-3, 0.5);
  ball.width = r.cfg.get_double("mass.width", 0.1, 0.0, 1.0);
  const bool aw = r.cfg.get_string("mass.flavor", "weyl", {"weyl", "anti-wick"}) == "anti-wick";
  r.cfg.check_unused();
  const auto rows = mass_scan(spec, ball.symbol(), Ns, aw ? Quantization::AntiWick : Quantization::Weyl);
  auto csv = r.csv("mass.csv", {"N", "min_mass", "argmin_phase", "eigencount"});
  double worst = 1.0;
  for (const auto& row : rows) {
    csv.row({(long long)row.N, row.min_mass, row.argmin_phase, (long long)row.eigencount});
    worst = std::min(worst, row.min_mass);
  }
  std::cout << "smallest eigenvector mass=" << fmt(worst) << "\n";
  return 0;
}

int lagrangian_check(const Run& r) {
  LagrangianFamily fam = default_family(r.cfg.get_double("lagrangian.tau", 0.8, 0.0, 0.999));
  fam.hprime_coef = r.cfg.get_double("lagrangian.hprime_coef", 1.0, 1e-6, 1e6);
  fam.amplitude.scale = r.cfg.get_double("lagrangian.scale", fam.amplitude.scale, 1e-3, 100.0);
  fam.phase.length = (fam.amplitude.cutoff * fam.amplitude.scale + fam.domain_margin) / (0.5 * kPi);
  const auto hs = r.cfg.get_doubles("experiment.h", dyadic(8, 14), 1e-9, 0.5);
  r.cfg.check_unused();
  const LagrangianScan scan = lagrangian_scan(fam, hs);
  auto csv = r.csv("lagrangian.csv", {"h", "hprime", "outside_mass", "slope_partial"});
  for (const auto& row : scan.rows) csv.row({row.h, row.hprime, row.outside_mass, row.slope_partial});
  csv.comment("slope=" + fmt(scan.slope) + " r2=" + fmt(scan.r2) + " c0=" + fmt(scan.rows.front().c0));
  std::cout << "slope=" << fmt(scan.slope) << " r2=" << fmt(scan.r2) << "\n";
  return 0;
}

int render_sets(const Run& r) {
  const AnosovMapSpec spec = map_spec(r.cfg);
  const Partition part = partition(r.cfg);
  const int n_max = r.cfg.get_int("render.max_n", 4, 1, 12);
  const int grid = r.cfg.get_int("render.grid", 256, 8, 2048);
  r.cfg.check_unused();
  for (int n = 1; n <= n_max; ++n) {
    // past word star^n: the intersection of phi_j(V_star), j = 1..n
    const Word w{Alphabet::Coarse, std::vector<int>(n, kStar), Orientation::Past};
    const Mask m = word_set(spec, part, w, Grid2{grid});
    const fs::path p = r.file("set_n" + std::to_string(n) + ".pgm");
    render_set_mask(m, p.string());
    std::cout << p.string() << " area=" << fmt(m.area()) << "\n";
  }
  return 0;
}

int counting_cmd(const Run& r) {
  const AnosovMapSpec spec = map_spec(r.cfg);
  const double beta = r.cfg.get_double("counting.beta", 0.1, 1e-9, 1.0);
  const auto hs = r.cfg.get_doubles("experiment.h", dyadic(6, 14), 1e-12, 0.5);
  const ExpansionRates rates = estimate_expansion_rates(spec);
  const double alpha = r.cfg.get_double("counting.alpha", choose_alpha(beta, rates.lambda0), 1e-9, 0.5);
  r.cfg.check_unused();
  const CountingBound b = counting_bound(alpha, rates, hs);
  auto csv = r.csv("counting.csv", {"h", "N0", "N", "log_count", "log_bound"});
  for (const auto& row : b.rows) csv.row({row.h, (long long)row.n0, (long long)row.n, row.log_count, row.log_bound});
  csv.comment("alpha=" + fmt(alpha) + " exponent=" + fmt(b.exponent) + " C=" + fmt(b.constant));
  std::cout << "alpha=" << fmt(alpha) << " exponent=" << fmt(b.exponent) << " C=" << fmt(b.constant) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuplab: porosity, fractal uncertainty and quantum cat map experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  int threads = 0;
  long long seed = -1;
  app.add_option("--config", config_path, "Configuration file ([section] key = value)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Random seed for sampled word policies")->check(CLI::NonNegativeNumber);

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const Run&);
  };
  const std::vector<Command> commands = {
      {"dynamics-report", "Expansion rates, propagation times and Anosov margin", dynamics_report},
      {"porosity", "Porosity profile of a Cantor set or a dynamical trace", porosity_cmd},
      {"fup-scan", "Restricted Fourier norms of Cantor sets against h", fup_scan},
      {"egorov-scan", "Egorov discrepancy against N", egorov_scan},
      {"key-estimate", "Word-operator norm decay over N", key_estimate},
      {"damped-scan", "Damped propagator norms and spectral radii", damped_scan},
      {"mass-scan", "Minimum eigenvector mass on a smoothed ball", mass_scan_cmd},
      {"lagrangian-check", "Frequency localization of Lagrangian states", lagrangian_check},
      {"render-sets", "PGM images of word sets", render_sets},
      {"counting", "Word counting bound and alpha selection", counting_cmd},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    Run run;
    run.cfg = config_path.empty() ? Config() : Config::load(config_path);
    if (seed >= 0) run.cfg.set("run.seed", std::to_string(seed));
    run.seed = static_cast<unsigned>(run.cfg.get_int("run.seed", 1, 0, std::numeric_limits<int>::max()));
    set_threads(threads);
    run.out = out_dir;
    fs::create_directories(run.out);
    for (const auto& c : commands)
      if (app.got_subcommand(c.name)) {
        run.kind = c.name;
        return c.fn(run);
      }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
