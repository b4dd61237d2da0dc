#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "hcross/hcross.hpp"

using namespace hcross;

namespace {

// Experiment keys shared by the config file and the command line. Values are
// kept as text and applied through apply_setting so both paths validate alike.
struct Settings {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    options[key] = app->add_option("--" + key, values[key], help);
  }

  void apply(ExperimentConfig& cfg) const {
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) apply_setting(cfg, key, values.at(key));
  }
};

struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;

  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw std::runtime_error("cannot open output file '" + path + "'");
    os = file.get();
  }
};

ClassSpec class_from(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "HQ" || name == "hq") return ClassHQ{cfg.q};
  if (name == "H" || name == "h") return ClassH{cfg.r, cfg.q};
  if (name == "W" || name == "w") return ClassW{cfg.r, cfg.q};
  if (name == "HA" || name == "ha") return ClassHA{cfg.a, cfg.b, cfg.beta};
  if (name == "WA" || name == "wa") return ClassWA{cfg.a, cfg.b, cfg.beta};
  throw std::invalid_argument("unknown class '" + name + "' (HQ, H, W, HA, WA)");
}

std::string fits_path(const std::string& out) {
  const auto dot = out.rfind('.');
  const auto slash = out.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out + ".fits.csv";
  return out.substr(0, dot) + ".fits.csv";
}

int emit(const ExperimentResult& res, const ExperimentConfig& cfg) {
  Output out(cfg.out);
  write_csv(*out.os, res.rows, cfg.timestamp);
  if (!res.fits.empty()) {
    if (cfg.out.empty() || cfg.out == "-") {
      write_fits(std::cerr, res.fits);
    } else {
      std::ofstream fits(fits_path(cfg.out));
      write_fits(fits, res.fits);
      write_fits(std::cout, res.fits);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hcross: hyperbolic cross spectral toolkit and fooling-function witnesses", "hcross"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings global;
  std::string config_path;
  bool no_timestamp = false;
  app.add_option("--config", config_path, "flat key = value experiment configuration")->check(CLI::ExistingFile);
  global.add(&app, "seed", "seed for every random choice (default 0)");
  global.add(&app, "oversample", "grid oversampling for L_p norms (default 2)");
  global.add(&app, "out", "output file (default stdout)");
  global.add(&app, "threads", "worker threads (0 = all cores)");
  app.add_flag("--no-timestamp", no_timestamp, "omit the '# generated' line from CSV output");

  // kernel
  auto* kernel = app.add_subcommand("kernel", "emit or evaluate a Fejer, de la Vallee Poussin or A_s kernel");
  std::string kernel_type = "fejer";
  int kernel_j = 1;
  std::size_t kernel_d = 1;
  std::string kernel_at;
  kernel->add_option("--type", kernel_type, "fejer | vdp | a")->check(CLI::IsMember({"fejer", "vdp", "a"}));
  kernel->add_option("--j", kernel_j, "order j (fejer, vdp) or level s (a)")->check(CLI::NonNegativeNumber);
  kernel->add_option("--d", kernel_d, "dimension")->check(CLI::Range(1, 4));
  kernel->add_option("--at", kernel_at, "comma-separated point; prints the value instead of coefficients");

  // witness
  auto* witness = app.add_subcommand("witness", "build one fooling function and print its witness report");
  Settings wset;
  for (const char* key : {"d", "n", "m", "q", "p", "r", "a", "b", "beta", "points"}) wset.add(witness, key, "");
  std::string witness_class = "HQ", construction = "multi-block";
  witness->add_option("--class", witness_class, "HQ | H | W | HA | WA (default HQ)");
  witness->add_option("--construction", construction, "multi-block | box")
      ->check(CLI::IsMember({"multi-block", "box"}));

  // rates
  auto* rates = app.add_subcommand("rates", "run a rate experiment and write CSV plus exponent fits");
  Settings rset;
  rset.add(rates, "experiment", "qpT1 | q1P2 | ST1 | qpL1");
  for (const char* key : {"d", "n", "m", "q", "p", "r", "a", "b", "beta", "points"}) rset.add(rates, key, "");

  // audit
  auto* audit = app.add_subcommand("audit", "random-instance inequality audits");
  Settings aset;
  aset.add(audit, "family", "comma list of sp1, holder, homogeneity, abeta-box, cross-wiener, embedding (default all)");
  aset.add(audit, "trials", "trials per family (default 1000)");
  aset.add(audit, "q", "exponent for the cross-wiener table (default 1)");

  // norms
  auto* norms = app.add_subcommand("norms", "norms of a coefficient file");
  std::string coef_file;
  double norm_p = 2.0, norm_beta = 0.5;
  norms->add_option("--file", coef_file, "coefficient file: 'd=<d>' then 'k_1 ... k_d re im' lines")
      ->required()
      ->check(CLI::ExistingFile);
  norms->add_option("--p", norm_p, "L_p exponent (inf allowed)");
  norms->add_option("--beta", norm_beta, "A_beta exponent");

  if (argc < 2) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help();
    return 2;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    global.apply(cfg);
    if (no_timestamp) cfg.timestamp = false;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << (config_path.empty() ? "" : config_path + ": ") << e.what() << "\n";
    return 2;
  }

  try {
    if (kernel->parsed()) {
      TrigPoly K(kernel_d);
      if (kernel_type == "fejer") {
        K = kernels::fejer(kernel_j, kernel_d);
      } else if (kernel_type == "vdp") {
        K = kernels::vdp(kernel_j, kernel_d);
      } else {
        K = kernels::a_kernel(MultiIndex::filled(kernel_d, kernel_j));
      }
      Output out(cfg.out);
      if (kernel_at.empty()) {
        write_coefficients(*out.os, K);
      } else {
        std::vector<double> x;
        for (const auto& s : detail::split(kernel_at, ',')) x.push_back(detail::to_double(s));
        if (x.size() != kernel_d) throw std::invalid_argument("--at needs " + std::to_string(kernel_d) + " coordinates");
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", evaluate(K, std::span<const double>(x)).real());
        *out.os << buf << "\n";
      }
      return 0;
    }

    if (witness->parsed()) {
      try {
        wset.apply(cfg);
      } catch (const std::exception& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
      }
      if (!cfg.n || cfg.n->size() != 1) {
        std::cerr << "witness needs a single --n\n";
        return 2;
      }
      const int n = cfg.n->front();
      Output out(cfg.out);
      WitnessOptions wo;
      wo.norm_oversample = cfg.oversample;
      if (construction == "box") {
        const MultiIndex N = MultiIndex::filled(cfg.d, n);
        const std::size_t m = cfg.m ? *cfg.m : static_cast<std::size_t>(box_cardinality(N)) / 2;
        const PointSet xi = make_points(cfg.points, cfg.d, m, cfg.seed, n);
        VanishingOptions vo;
        vo.seed = cfg.seed;
        auto bw = box_witness(xi, N, cfg.q, cfg.p, vo, std::max(cfg.oversample, 4.0));
        bw.report.n = n;
        *out.os << bw.report.to_text();
        return 0;
      }
      const std::size_t m = cfg.m ? *cfg.m : (std::size_t{1} << n) / 2;
      const PointSet xi = make_points(cfg.points, cfg.d, m, cfg.seed, n);
      FoolingOptions fo;
      fo.vanishing.seed = cfg.seed;
      fo.threads = cfg.threads;
      const FoolingResult fr = fooling_function(xi, n, fo);
      const WitnessReport rep = fooling_witness(fr, class_from(witness_class, cfg), cfg.p, wo);
      *out.os << rep.to_text();
      *out.os << "support_in_cross: " << (fr.support_in_cross ? "yes" : "no") << "\n"
              << "blocks_unique: " << (fr.blocks_unique ? "yes" : "no") << "\n";
      return 0;
    }

    if (rates->parsed()) {
      try {
        rset.apply(cfg);
        if (cfg.kind == ExperimentKind::inequalities) throw std::invalid_argument("use the audit subcommand");
        validate(cfg);
      } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
      }
      return emit(run_experiment(cfg), cfg);
    }

    if (audit->parsed()) {
      cfg.kind = ExperimentKind::inequalities;
      try {
        aset.apply(cfg);
        validate(cfg);
      } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
      }
      const auto res = run_inequalities(cfg);
      emit(res, cfg);
      std::cerr << "violations: " << res.violations << "\n";
      return res.violations ? 1 : 0;
    }

    if (norms->parsed()) {
      std::ifstream in(coef_file);
      const TrigPoly f = read_coefficients(in);
      Output out(cfg.out);
      auto& os = *out.os;
      os.precision(12);
      const double os_factor = std::max(cfg.oversample, 4.0);
      os << "terms: " << f.size() << "\n";
      if (std::isinf(norm_p)) {
        os << "L_inf: " << sup_norm(f, os_factor).refined << "\n";
      } else {
        const auto est = lp_norm(f, norm_p, os_factor);
        os << "L_" << norm_p << ": " << est.value << (est.exact ? " (exact)" : "") << "\n";
      }
      const auto sup = sup_norm(f, os_factor);
      os << "sup: " << sup.refined << " (grid " << sup.grid_max << ")\n"
         << "wiener: " << wiener_norm(f) << "\n"
         << "A_" << norm_beta << ": " << abeta_norm(f, norm_beta) << "\n";
      for (const auto& [s, part] : delta_decomposition(f))
        os << "  delta" << s.str() << " L_" << norm_p << ": "
           << (std::isinf(norm_p) ? sup_norm(part, os_factor).refined : lp_norm(part, norm_p, os_factor).value)
           << "\n";
      return 0;
    }
  } catch (const config_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
