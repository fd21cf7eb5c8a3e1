// Command-line harness: seeded, reproducible runs of the density and
// counting pipelines with JSON (canonical) or CSV output.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "critpt/harness.hpp"

namespace {

critpt::cplx parse_complex(const std::string& text) {
  // accepts "a", "bi", "a+bi", "a-bi"
  std::string s = text;
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw critpt::ConfigError("empty complex literal");
  if (s.back() == 'i' || s.back() == 'I' || s.back() == 'j') {
    s.pop_back();
    // split at the last +/- that is not an exponent sign or leading
    for (int k = static_cast<int>(s.size()) - 1; k > 0; --k) {
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
        double re = std::stod(s.substr(0, k));
        std::string imtxt = s.substr(k);
        double im = (imtxt == "+" || imtxt == "-") ? std::stod(imtxt + "1")
                                                   : std::stod(imtxt);
        return {re, im};
      }
    }
    if (s.empty() || s == "+" || s == "-") s += "1";
    return {0.0, std::stod(s)};
  }
  return {std::stod(s), 0.0};
}

std::vector<critpt::cplx> parse_point(const std::string& text) {
  std::vector<critpt::cplx> out;
  std::string cur;
  for (char c : text) {
    if (c == ';' || c == ',') {
      out.push_back(parse_complex(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(parse_complex(cur));
  if (out.empty()) throw critpt::ConfigError("empty point");
  return out;
}

critpt::Poly parse_poly(const std::string& text) {
  critpt::Poly p;
  std::string cur;
  auto flush = [&]() {
    if (!cur.empty()) {
      p.push_back(parse_complex(cur));
      cur.clear();
    }
  };
  for (char c : text) {
    if (c == ',' || c == ' ') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  if (p.empty()) throw critpt::ConfigError("empty polynomial");
  return p;
}

void write_report(const critpt::Report& rep, const critpt::RunConfig& cfg) {
  std::string payload =
      cfg.output == "csv" ? rep.to_csv() : rep.to_json();
  if (cfg.output_path.empty()) {
    std::cout << payload;
    return;
  }
  std::filesystem::path path = cfg.output_path;
  if (path.is_relative()) {
    if (const char* dir = std::getenv("CRITPT_OUTPUT_DIR"))
      path = std::filesystem::path(dir) / path;
  }
  std::ofstream out(path);
  if (!out)
    throw critpt::ConfigError("cannot write output file " + path.string());
  out << payload;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "critical-point statistics of Gaussian random holomorphic sections"};
  app.require_subcommand(1);

  critpt::RunConfig cfg;
  std::string point_text = "0";
  std::string poly_text = "0,1";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--workers", cfg.workers, "worker threads (0 = auto)");
    sub->add_option("--output", cfg.output, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.output_path,
                    "output file (CRITPT_OUTPUT_DIR resolves relative paths)");
    sub->add_option("--residual-tol", cfg.tolerances.residual);
    sub->add_option("--dedupe-tol", cfg.tolerances.dedupe);
    sub->add_option("--singular-tol", cfg.tolerances.singular);
    sub->add_option("--degeneracy-tol", cfg.tolerances.degeneracy);
  };

  CLI::App* density = app.add_subcommand("density", "expected density");
  density->add_option("--ensemble", cfg.ensemble, "su2|fs2|basis-file")
      ->check(CLI::IsMember({"su2", "fs2", "basis-file"}));
  density->add_option("--basis", cfg.basis_file, "basis JSON for basis-file");
  density->add_option("--degree", cfg.degree, "degree N")->required();
  density->add_option("--point", point_text, "chart point, e.g. 0.5+0.2i");
  density->add_option("--method", cfg.method, "exact|mc|mc-theta|morse")
      ->check(CLI::IsMember({"exact", "mc", "mc-theta", "morse"}));
  density->add_option("--morse-q", cfg.morse_q, "Morse index for --method morse");
  density->add_option("--samples", cfg.samples, "Monte Carlo samples");
  add_common(density);

  CLI::App* count = app.add_subcommand("count", "empirical CP^1 counts");
  count->add_option("--degree", cfg.degree, "degree N")->required();
  count->add_option("--trials", cfg.trials, "accepted trials");
  count->add_option("--dump-points", cfg.dump_points, "per-point CSV path");
  add_common(count);

  CLI::App* abc = app.add_subcommand("abc", "dump A, B, C, Lambda");
  abc->add_option("--ensemble", cfg.ensemble, "su2|fs2|basis-file")
      ->check(CLI::IsMember({"su2", "fs2", "basis-file"}));
  abc->add_option("--basis", cfg.basis_file, "basis JSON for basis-file");
  abc->add_option("--degree", cfg.degree, "degree N")->required();
  abc->add_option("--point", point_text, "chart point");
  abc->add_option("--mode", cfg.abc_mode, "adapted|general")
      ->check(CLI::IsMember({"adapted", "general"}));
  add_common(abc);

  CLI::App* cp2 = app.add_subcommand("cp2-number", "exact CP^2 count");
  cp2->add_option("--degree", cfg.degree, "degree N")->required();
  add_common(cp2);

  CLI::App* demo =
      app.add_subcommand("demo-metric", "perturbed-metric critical points");
  demo->add_option("--poly", poly_text, "coefficients c0,c1,... of p(z)");
  demo->add_option("--epsilon", cfg.epsilon, "interpolation weight in (0,1)");
  add_common(demo);

  CLI::App* compare =
      app.add_subcommand("compare", "exact vs Monte Carlo method table");
  compare->add_option("--ensemble", cfg.ensemble, "su2|basis-file");
  compare->add_option("--basis", cfg.basis_file, "basis JSON");
  compare->add_option("--degree", cfg.degree, "degree N")->required();
  compare->add_option("--point", point_text, "chart point");
  compare->add_option("--samples", cfg.samples, "Monte Carlo samples");
  add_common(compare);

  CLI::App* self = app.add_subcommand("selftest", "run the invariant suite");
  add_common(self);

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.point = parse_point(point_text);
    cfg.metric_poly = parse_poly(poly_text);
    if (density->parsed()) cfg.command = "density";
    if (count->parsed()) cfg.command = "count";
    if (abc->parsed()) cfg.command = "abc";
    if (cp2->parsed()) cfg.command = "cp2-number";
    if (demo->parsed()) cfg.command = "demo-metric";
    if (compare->parsed()) cfg.command = "compare";
    if (self->parsed()) cfg.command = "selftest";

    critpt::Report rep = critpt::run_command(cfg);
    write_report(rep, cfg);
    return rep.pass ? 0 : 1;
  } catch (const critpt::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
