#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "quasipolar/cli.hpp"

using namespace quasipolar;

namespace {

struct Flags {
  std::string spec;
  std::string out;
  std::optional<long> nmax;
  std::optional<std::string> notion;
  std::optional<int> n;
  std::optional<double> z0_arg;
  std::optional<double> t;
  std::optional<double> r;
  std::optional<double> a;
  bool compare_fd = false;
  std::optional<int> dim;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Flags& f) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("spec", f.spec, "JSON function spec / run config")->check(CLI::ExistingFile);
  sub->add_option("-o,--out", f.out, "output directory");
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasipolar: pluripolarity evidence for graphs of circle functions"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Flags f;

  add_command(app, "analyze", "coefficient tails, derivative norms, approximation numbers", f);
  add_command(app, "scales", "scale table t_n, theta_n and the divergence diagnostic", f)
      ->add_option("--nmax", f.nmax, "largest n of the quarter-decade grid");
  add_command(app, "quasitest", "Bernstein, Denjoy-Carleman or Gevrey evidence", f)
      ->add_option("--notion", f.notion, "bernstein | denjoy | gevrey")
      ->check(CLI::IsMember({"bernstein", "denjoy", "gevrey"}));
  CLI::App* interp = add_command(app, "interp", "interpolant at n-th roots of unity plus z0", f);
  interp->add_option("--n", f.n, "degree");
  interp->add_option("--z0-arg", f.z0_arg, "argument of the extra node");
  interp->add_option("--t", f.t, "annulus parameter");
  CLI::App* green = add_command(app, "green", "Green function of the annulus 1/r < |w| < r", f);
  green->add_option("--r", f.r, "outer radius");
  green->add_option("--a", f.a, "bound parameter a, 1 < a <= r");
  green->add_flag("--compare-fd", f.compare_fd, "check against the finite-difference solve");
  add_command(app, "certify", "pluripolarity certificate", f)->add_option("--dim", f.dim, "number of components N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig c;
  try {
    if (!f.spec.empty()) c = parse_config(f.spec);
  } catch (const std::exception& e) {
    std::cerr << "quasipolar: " << e.what() << "\n";
    return kExitError;
  }
  c.command = sub->get_name();
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.nmax) c.nmax = *f.nmax;
  if (f.notion) c.notion = *f.notion;
  if (f.n) c.n = *f.n;
  if (f.z0_arg) c.z0_arg = *f.z0_arg;
  if (f.t) c.t = *f.t;
  if (f.r) {
    c.r = *f.r;
    if (!f.a && c.a > c.r) c.a = c.r;
  }
  if (f.a) c.a = *f.a;
  if (f.compare_fd) c.compare_fd = true;
  if (f.dim) c.dim = *f.dim;
  return run(c);
}
