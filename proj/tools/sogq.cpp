// Command-line driver: gen, params, solve, sweep, bench, oracle.
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include <sogq/sogq.hpp>

namespace {

using namespace sogq;

constexpr const char* kThreadsEnv = "SOGQ_THREADS";

struct Output {
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw std::runtime_error("cannot open output file '" + path + "'");
    }
    out().precision(17);
  }
  std::ostream& out() { return file ? *file : std::cout; }
  std::unique_ptr<std::ofstream> file;
};

void set_threads(int n) {
  if (n <= 0) {
    if (const char* env = std::getenv(kThreadsEnv)) n = std::atoi(env);
  }
  if (n > 0) omp_set_num_threads(n);
}

Box box_from(const std::vector<double>& v) {
  if (v.size() != 3) throw std::invalid_argument("--box needs three lengths");
  return Box{v[0], v[1], v[2]};
}

void apply_overrides(SolverPlan& plan, const std::vector<std::string>& sets) {
  std::ostringstream os;
  for (const auto& s : sets) os << s << '\n';
  std::istringstream is(os.str());
  apply_config(is, plan);
}

SolverPlan load_plan(const std::string& config, double eps, const ParticleSystem* sys, const std::vector<double>& box,
                     std::size_t n, const std::vector<std::string>& sets) {
  SolverPlan plan;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw std::runtime_error("cannot open config file '" + config + "'");
    plan = read_plan(in);
  } else {
    const Box b = sys ? sys->box() : box_from(box);
    plan = select_parameters(sys ? sys->size() : n, b, eps);
  }
  apply_overrides(plan, sets);
  return plan;
}

void print_plan_metadata(std::ostream& out, const SolverPlan& plan) {
  for (const auto& [k, v] : plan_to_map(plan)) out << "# " << k << " = " << v << '\n';
}

std::vector<double> expand_values(const std::vector<double>& list, double from, double to, double step) {
  if (!list.empty()) return list;
  if (!(step > 0.0)) throw std::invalid_argument("sweep needs --values or --from/--to/--step");
  std::vector<double> v;
  for (int i = 0;; ++i) {
    const double x = from + i * step;
    if (x > to * (1.0 + 1e-12) + 1e-12) break;
    v.push_back(x);
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral sum-of-Gaussians electrostatics for quasi-2D periodic systems"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, std::string("Thread count (default: $") + kThreadsEnv + " or all cores)");

  // gen
  auto* gen = app.add_subcommand("gen", "Random neutral system with alternating unit charges");
  std::size_t gen_n = 1000;
  std::vector<double> gen_box{20, 20, 20};
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("-n,--particles", gen_n, "Particle count (even)");
  gen->add_option("--box", gen_box, "Box lengths Lx Ly Lz")->expected(3);
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("-o,--out", gen_out, "Output file (default stdout)");

  // params
  auto* params = app.add_subcommand("params", "Select solver parameters and print them in config format");
  std::size_t par_n = 1000;
  std::vector<double> par_box{20, 20, 20};
  double par_eps = 1e-6, par_crat = 50.0;
  bool par_presets = false;
  std::string par_window = "kaiser-bessel", par_long;
  std::vector<std::string> par_sets;
  std::string par_out;
  params->add_option("-n,--particles", par_n, "Particle count");
  params->add_option("--box", par_box, "Box lengths Lx Ly Lz")->expected(3);
  params->add_option("--eps", par_eps, "Target relative tolerance");
  params->add_option("--c-rat", par_crat, "Direct/FFT cost ratio");
  params->add_option("--window", par_window, "Window kind: gaussian, kaiser-bessel, es");
  params->add_option("--long-mode", par_long, "Force the long-range mode: direct or fft");
  params->add_option("--set", par_sets, "Override key=value after selection");
  params->add_flag("--preset", par_presets, "List the tabulated decompositions");
  params->add_option("-o,--out", par_out, "Output file");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Potentials for a particle file");
  std::string sol_file, sol_config, sol_out;
  double sol_eps = 1e-6;
  std::vector<std::string> sol_sets;
  bool sol_validate = false, sol_det = false;
  solve_cmd->add_option("particles", sol_file, "Particle file: 'N Lx Ly Lz' then 'x y z q' lines")->required();
  solve_cmd->add_option("-c,--config", sol_config, "Plan config file (default: select for --eps)");
  solve_cmd->add_option("--eps", sol_eps, "Target relative tolerance");
  solve_cmd->add_option("--set", sol_sets, "Override key=value");
  solve_cmd->add_flag("--validate", sol_validate, "Append the Ewald2D reference and the relative error");
  solve_cmd->add_flag("--deterministic", sol_det, "Single thread, bit-identical reruns");
  solve_cmd->add_option("-o,--out", sol_out, "Output CSV");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Error against one parameter");
  std::string sw_kind, sw_config, sw_file, sw_out;
  std::vector<double> sw_values, sw_box{20, 20, 20};
  double sw_from = 0, sw_to = 0, sw_step = 0, sw_eps = 1e-6;
  std::size_t sw_n = 100;
  std::uint64_t sw_seed = 1;
  std::vector<std::string> sw_sets;
  sweep->add_option("--kind", sw_kind, "M, P_window, I, lambda_z, eta, I_long, P_cheb or Q")->required();
  sweep->add_option("--values", sw_values, "Explicit parameter values");
  sweep->add_option("--from", sw_from);
  sweep->add_option("--to", sw_to);
  sweep->add_option("--step", sw_step);
  sweep->add_option("-c,--config", sw_config, "Base plan config");
  sweep->add_option("--eps", sw_eps, "Tolerance for the base plan when no config is given");
  sweep->add_option("--particles-file", sw_file, "Particle file (default: random system)");
  sweep->add_option("-n,--particles", sw_n, "Random system size");
  sweep->add_option("--box", sw_box, "Random system box")->expected(3);
  sweep->add_option("--seed", sw_seed);
  sweep->add_option("--set", sw_sets, "Override key=value on the base plan");
  sweep->add_option("-o,--out", sw_out);

  // bench
  auto* bench = app.add_subcommand("bench", "Stage timings against N at fixed density");
  std::vector<std::size_t> be_n{1000, 10000, 100000};
  double be_rho = 0.125, be_eps = 1e-6, be_gamma = 1.0;
  std::uint64_t be_seed = 1;
  std::string be_out;
  bench->add_option("--n", be_n, "Particle counts");
  bench->add_option("--density", be_rho, "Number density N/V");
  bench->add_option("--gamma", be_gamma, "Aspect ratio sqrt(Lx Ly)/Lz");
  bench->add_option("--eps", be_eps);
  bench->add_option("--seed", be_seed);
  bench->add_option("-o,--out", be_out);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Reference potentials");
  std::string or_file, or_method = "ewald", or_out;
  bool or_large = false;
  oracle->add_option("particles", or_file)->required();
  oracle->add_option("--method", or_method, "ewald, ewald-ld or shell");
  oracle->add_flag("--allow-large", or_large, "Lift the particle-count limit of the shell sum");
  oracle->add_option("-o,--out", or_out);

  CLI11_PARSE(app, argc, argv);

  try {
    set_threads(threads);
    if (*gen) {
      Output o(gen_out);
      write_particles(o.out(), random_system(gen_n, box_from(gen_box), gen_seed));
    } else if (*params) {
      Output o(par_out);
      if (par_presets) {
        o.out() << "b,r0,omega,energy_error,M_energy,force_error,M_force\n";
        for (const auto& p : kSogPresets)
          o.out() << p.b << ',' << p.r0 << ',' << p.omega << ',' << p.energy_error << ',' << p.M_energy << ','
                  << p.force_error << ',' << p.M_force << '\n';
        return 0;
      }
      PlanOptions opt;
      opt.C_rat = par_crat;
      opt.mid_window = opt.long_window = window_kind_from_string(par_window);
      if (!par_long.empty()) opt.long_mode = long_mode_from_string(par_long);
      SolverPlan plan = select_parameters(par_n, box_from(par_box), par_eps, opt);
      apply_overrides(plan, par_sets);
      const auto c = predict_cost(plan, plan.N);
      const auto e = predict_error(plan);
      o.out() << "# cost near = " << c.near << "\n# cost gridding = " << c.gridding << "\n# cost mid_fft = " << c.mid_fft
              << "\n# cost long_direct = " << c.long_direct << "\n# cost long_gridding = " << c.long_gridding
              << "\n# cost long_fft = " << c.long_fft << "\n# cost total = " << c.total() << '\n';
      o.out() << "# error decomposition = " << e.decomposition << "\n# error mid_grid = " << e.mid_grid
              << "\n# error mid_window = " << e.mid_window << "\n# error mid_padding = " << e.mid_padding
              << "\n# error long_fourier = " << e.long_fourier << "\n# error long_chebyshev = " << e.long_chebyshev
              << "\n# error long_taylor = " << e.long_taylor << '\n';
      o.out() << "# split m = " << plan.split_index() << '\n';
      write_plan(o.out(), plan);
    } else if (*solve_cmd) {
      if (sol_det) omp_set_num_threads(1);
      const auto sys = read_particles(sol_file);
      const SolverPlan plan = load_plan(sol_config, sol_eps, &sys, {}, 0, sol_sets);
      const auto r = solve(sys, plan);
      std::vector<double> ref;
      if (sol_validate) ref = ewald2d_potentials<double>(sys);
      Output o(sol_out);
      auto& out = o.out();
      print_plan_metadata(out, plan);
      out << "# energy = " << r.energy << '\n';
      out << "# t_near = " << r.seconds.near << "\n# t_mid = " << r.seconds.mid << "\n# t_long = " << r.seconds.lng
          << "\n# t_total = " << r.seconds.total << '\n';
      if (sol_validate) {
        out << "# reference_energy = " << reference_energy(ref, sys) << '\n';
        out << "# eps_r = " << relative_max_error(r.potential, ref) << '\n';
        out << "index,potential,reference\n";
        for (std::size_t i = 0; i < sys.size(); ++i) out << i << ',' << r.potential[i] << ',' << ref[i] << '\n';
      } else {
        out << "index,potential\n";
        for (std::size_t i = 0; i < sys.size(); ++i) out << i << ',' << r.potential[i] << '\n';
      }
    } else if (*sweep) {
      std::unique_ptr<ParticleSystem> sys;
      if (!sw_file.empty()) sys = std::make_unique<ParticleSystem>(read_particles(sw_file));
      else sys = std::make_unique<ParticleSystem>(random_system(sw_n, box_from(sw_box), sw_seed));
      const SolverPlan plan = load_plan(sw_config, sw_eps, sys.get(), {}, 0, sw_sets);
      const auto kind = sweep_kind_from_string(sw_kind);
      const auto values = expand_values(sw_values, sw_from, sw_to, sw_step);
      SweepContext ctx(*sys, plan);
      Output o(sw_out);
      auto& out = o.out();
      out << "# kind = " << sw_kind << '\n';
      print_plan_metadata(out, plan);
      out << "param,error,estimate,status\n";
      bool ok = true;
      for (double v : values) {
        const auto pt = sweep_point(kind, v, ctx);
        out << pt.param << ',' << pt.error << ',' << pt.estimate << ',' << (pt.failure.empty() ? "ok" : pt.failure) << '\n';
        ok = ok && pt.failure.empty();
      }
      return ok ? 0 : 1;
    } else if (*bench) {
      Output o(be_out);
      auto& out = o.out();
      out << "# density = " << be_rho << "\n# gamma = " << be_gamma << "\n# eps = " << be_eps << '\n';
      out << "N,t_near,t_mid,t_long,t_total,zeta\n";
      std::vector<double> lx, ly;
      for (std::size_t n : be_n) {
        const double Lz = std::cbrt(n / (be_rho * be_gamma * be_gamma));
        const Box box{be_gamma * Lz, be_gamma * Lz, Lz};
        const auto sys = random_system(n, box, be_seed);
        const auto plan = select_parameters(n, box, be_eps);
        Solver solver(plan);
        const auto r = solver.evaluate(sys);
        const auto& t = r.seconds;
        out << n << ',' << t.near << ',' << t.mid << ',' << t.lng << ',' << t.total << ',' << t.lng / t.total << '\n';
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(t.total));
      }
      if (lx.size() >= 2) out << "# exponent = " << linear_fit(lx, ly).first << '\n';
    } else if (*oracle) {
      const auto sys = read_particles(or_file);
      std::vector<double> phi;
      if (or_method == "ewald") phi = ewald2d_potentials<double>(sys);
      else if (or_method == "ewald-ld") phi = ewald2d_potentials<long double>(sys);
      else if (or_method == "shell") {
        ShellSumOptions opt;
        opt.allow_large = or_large;
        const auto r = direct_shell_sum(sys, opt);
        phi = r.potentials;
        std::cerr << "shells = " << r.shells << ", converged = " << r.converged << '\n';
      } else {
        throw std::invalid_argument("unknown oracle method '" + or_method + "'");
      }
      Output o(or_out);
      o.out() << "# method = " << or_method << "\n# energy = " << reference_energy(phi, sys) << '\n';
      o.out() << "index,potential\n";
      for (std::size_t i = 0; i < sys.size(); ++i) o.out() << i << ',' << phi[i] << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
