#include "g2cal/errors.hpp"
#include "g2cal/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

g2cal::Vec7 parseVec7(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> values;
  while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
  if (values.size() != 7) throw g2cal::Error(g2cal::ErrorKind::ConfigError, "--e needs 7 comma-separated numbers");
  g2cal::Vec7 v;
  for (int i = 0; i < 7; ++i) v(i) = values[i];
  return v;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"g2cal: numerical checks for associative submanifolds of flat G2 models"};
  app.require_subcommand(1);

  g2cal::RunConfig cfg;
  std::string eText;
  double absTol = 0.0;
  bool quiet = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.outPath, "Report path (JSON)");
    sub->add_option("--seed", cfg.seed, "Seed for randomized suites");
    sub->add_flag("--timing", cfg.timing, "Record wall time in the report");
    sub->add_flag("--quiet", quiet, "Only print the verdict line");
  };
  auto domainOptions = [&](CLI::App* sub) {
    sub->add_option("--mesh", cfg.meshPath, "Mesh JSON")->check(CLI::ExistingFile);
    sub->add_option("--kind", cfg.kind, "Built-in domain when no mesh is given")
        ->check(CLI::IsMember({"torus", "ball", "sphere3", "simplex"}));
    sub->add_option("--n", cfg.n, "Torus grid size");
    sub->add_option("--refine", cfg.refine, "Ball refinement level");
    sub->add_option("--shape", cfg.shape, "Ball shape")->check(CLI::IsMember({"round", "round2", "ellipsoid", "dented"}));
    sub->add_option("--m", cfg.m, "Fixture resolution (sphere3, cubical CY fixtures)");
  };
  auto kernelOptions = [&](CLI::App* sub) {
    sub->add_option("--abs-tol", absTol, "Kernel threshold (default 1e-6 * operator norm)");
    sub->add_option("--gap-ratio", cfg.gapRatio, "Required spectral gap ratio");
  };

  auto* algebra = app.add_subcommand("algebra-check", "Identity suites of the cross product and associator");
  common(algebra);
  algebra->add_option("--trials", cfg.trials, "Random triples");
  algebra->add_option("--identity-tol", cfg.identityTol, "Tolerance of the identity suites");

  auto* mesh = app.add_subcommand("mesh", "Build a domain and write it as JSON");
  common(mesh);
  domainOptions(mesh);

  auto* simons = app.add_subcommand("simons", "Second fundamental form and Simons operators");
  common(simons);
  domainOptions(simons);

  auto* dirac = app.add_subcommand("dirac", "Spectra, kernels and identities of D");
  common(dirac);
  domainOptions(dirac);
  kernelOptions(dirac);
  dirac->add_option("--bc", cfg.bc, "Boundary condition")->check(CLI::IsMember({"none", "nu_x", "mu_x"}));
  dirac->add_option("--task", cfg.task, "Task")
      ->check(CLI::IsMember({"spectrum", "kernel", "weitzenboeck", "adjointness", "linearize"}));
  dirac->add_option("--csv", cfg.csvPath, "Spectrum CSV path");
  dirac->add_option("--count", cfg.count, "Number of singular values");
  dirac->add_option("--trials", cfg.trials, "Random fields");
  dirac->add_option("--e", eText, "Constant normal direction e (7 comma-separated numbers)");

  auto* boundary = app.add_subcommand("boundary", "Boundary bundles, D_L, Chern numbers, index, rigidity");
  common(boundary);
  domainOptions(boundary);
  boundary->add_option("--task", cfg.task, "Task")->check(CLI::IsMember({"dl", "chern", "index", "rigidity"}));
  boundary->add_option("--e", eText, "Constant normal direction e (7 comma-separated numbers)");

  auto* cy = app.add_subcommand("cy", "Discrete exterior calculus checks of the form operator");
  common(cy);
  kernelOptions(cy);
  cy->add_option("--mesh", cfg.meshPath, "Closed mesh JSON")->check(CLI::ExistingFile);
  cy->add_option("--fixture", cfg.fixture, "Built-in complex")->check(CLI::IsMember({"t3", "s3", "s1xs2", "simplex", "all"}));
  cy->add_option("--m", cfg.m, "Cubical fixture resolution");
  cy->add_option("--task", cfg.task, "Task")->check(CLI::IsMember({"dvee-check", "betti", "kernel"}));
  cy->add_option("--trials", cfg.trials, "Random inputs for the operator identity");

  auto* ball = app.add_subcommand("certify-ball", "Full certification of the flat ball");
  common(ball);
  kernelOptions(ball);
  ball->add_option("--refine", cfg.refine, "Ball refinement level");
  ball->add_option("--shape", cfg.shape, "Ball shape")->check(CLI::IsMember({"round", "round2", "ellipsoid", "dented"}));
  ball->add_option("--e", eText, "Constant normal direction e (7 comma-separated numbers)");

  auto* torus = app.add_subcommand("certify-torus", "Full certification of the flat torus");
  common(torus);
  kernelOptions(torus);
  torus->add_option("--n", cfg.n, "Grid size");
  torus->add_option("--csv", cfg.csvPath, "Spectrum CSV path");

  auto* certCy = app.add_subcommand("certify-cy", "All form-operator checks on the closed fixtures");
  common(certCy);
  kernelOptions(certCy);
  certCy->add_option("--m", cfg.m, "Cubical fixture resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!eText.empty()) cfg.e = parseVec7(eText);
    if (absTol != 0.0) cfg.absTol = absTol;
    g2cal::configureThreads();
    const g2cal::Report report = g2cal::run(cfg);
    if (!quiet) std::cout << report.summary();
    if (!cfg.outPath.empty() && cfg.command != "mesh") g2cal::writeReport(report, cfg.outPath);
    const bool ok = report.passed();
    std::cout << (ok ? "PASS" : "FAIL") << ' ' << cfg.command << " (" << report.checks().size() << " checks)\n";
    return ok ? 0 : 1;
  } catch (const g2cal::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool usage = e.kind() == g2cal::ErrorKind::ConfigError || e.kind() == g2cal::ErrorKind::IoError ||
                       e.kind() == g2cal::ErrorKind::InvalidResolution;
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
