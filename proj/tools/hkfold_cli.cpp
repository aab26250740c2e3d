// hkfold: batch verification of folded hyperkahler structures.
//
//   hkfold <suite> [--samples N] [--seed S] [--tol T] [--format json|csv] [--output FILE]
//
// Exit status is 0 when every check passes, 1 when a check fails and 2 on
// usage or input errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hkfold/suites.hpp"

namespace {

using hkfold::report::fmt17;

constexpr const char* kFooter = R"(CSV report columns: suite,name,n,max_residual,tol,bound,pass
--grid CSV columns:
  higgs-radial     c_re,c_im,m,r,k        radial solutions on their grid
  toda-uniqueness  y,t,f                  relaxed reduced field
  foldlab-gh       s,x3,V,omega1_sq       dipole along x1=0.5, x2=0.2, x3 in [-1,1]
Config files hold flat key=value lines naming the long options.)";

void write_grid(const hkfold::suites::RunConfig& cfg, std::ostream& os) {
  using namespace hkfold;
  if (cfg.command == "higgs-radial") {
    os << "c_re,c_im,m,r,k\n";
    for (std::complex<double> c : {std::complex<double>(0.0), {0.3, 0.0}, {0.0, 0.5}})
      for (int m : {0, 1}) {
        const auto s = higgs2d::solve_radial(c, m, 0.8, suites::detail::disc_k(0.8), 400);
        for (std::size_t i = 0; i < s.r.size(); ++i)
          os << fmt17(c.real()) << ',' << fmt17(c.imag()) << ',' << m << ',' << fmt17(s.r[i]) << ',' << fmt17(s.k[i])
             << '\n';
      }
  } else if (cfg.command == "toda-uniqueness") {
    toda::BvpOptions o;
    o.ny = cfg.ny;
    o.nt = cfg.nt;
    const auto s = toda::solve_reduced_bvp(o, toda::bump_guess(o, cfg.amp));
    os << "y,t,f\n";
    for (int j = 0; j < s.ny(); ++j)
      for (int i = 0; i < s.nt(); ++i) os << fmt17(s.y[j]) << ',' << fmt17(s.t[i]) << ',' << fmt17(s.at(j, i)) << '\n';
  } else if (cfg.command == "foldlab-gh") {
    const foldlab::GibbonsHawkingData dipole({-0.8, 0.8}, {-1.0, 1.0});
    os << "s,x3,V,omega1_sq\n";
    for (const auto& p : foldlab::gh_line(dipole, {0.5, 0.2, -1.0, 0.0}, {0.5, 0.2, 1.0, 0.0}, 201))
      os << fmt17(p.s) << ',' << fmt17(-1.0 + 2.0 * p.s) << ',' << fmt17(p.V) << ',' << fmt17(p.omega1_sq) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for folded hyperkahler structures"};
  app.footer(kFooter);
  app.set_config("--config", "", "Read flat key=value options from a file");
  app.require_subcommand(1, 1);

  hkfold::suites::RunConfig cfg;
  std::string format = "json", output, grid;
  std::vector<std::string> check_tols;
  bool timing = false;

  app.add_option("--samples", cfg.samples, "Random sample count (0: suite default)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "Seed for all random sampling");
  app.add_option("--tol", cfg.tol, "Override every upper tolerance")->check(CLI::PositiveNumber);
  app.add_option("--check-tol", check_tols, "Per-check tolerance, name=value (repeatable)");
  app.add_option("--ell", cfg.ell, "Values of l for the alpha_2l comparison")->expected(1, -1);
  app.add_option("--ny", cfg.ny, "Reduced Toda grid size in y")->check(CLI::Range(32, 4096));
  app.add_option("--nt", cfg.nt, "Reduced Toda grid size in t")->check(CLI::Range(33, 4096));
  app.add_option("--amp", cfg.amp, "Initial perturbation amplitude for toda-uniqueness");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", output, "Report file (default: standard output)");
  app.add_option("--grid", grid, "Also write a plot-ready CSV grid to this file");
  app.add_flag("--timing", timing, "Record wall time in the report (breaks byte-for-byte reproducibility)");

  for (const auto& [name, fn] : hkfold::suites::registry()) app.add_subcommand(name, "Run the " + name + " suite")->fallthrough();
  app.add_subcommand("all", "Run every suite; fails if any check fails")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  for (const auto& kv : check_tols) {
    const auto eq = kv.find('=');
    try {
      if (eq == std::string::npos) throw std::invalid_argument(kv);
      cfg.tols[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      std::cerr << "hkfold: --check-tol expects name=value, got '" << kv << "'\n";
      return 2;
    }
  }

  if (!grid.empty() && cfg.command != "higgs-radial" && cfg.command != "toda-uniqueness" && cfg.command != "foldlab-gh") {
    std::cerr << "hkfold: --grid is available for higgs-radial, toda-uniqueness and foldlab-gh\n";
    return 2;
  }

  hkfold::report::Report r;
  try {
    r = hkfold::suites::run(cfg, timing);
    if (!grid.empty()) {
      std::ofstream g(grid);
      if (!g) throw std::runtime_error("cannot open " + grid);
      write_grid(cfg, g);
    }
  } catch (const std::exception& e) {
    std::cerr << "hkfold: " << e.what() << '\n';
    return 2;
  }

  std::ostringstream text;
  if (format == "json")
    text << hkfold::report::to_json(r).dump(2) << '\n';
  else
    hkfold::report::write_csv(text, r);

  if (output.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "hkfold: cannot open " << output << '\n';
      return 2;
    }
    out << text.str();
  }
  for (const auto& d : r.diagnostics) std::cerr << "hkfold: " << d << '\n';
  for (const auto& c : r.checks)
    if (!c.pass) std::cerr << "hkfold: FAIL " << r.suite << '/' << c.name << '\n';
  return r.pass() ? 0 : 1;
}
