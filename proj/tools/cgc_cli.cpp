#include <CLI11.hpp>
#include <iostream>

#include <cgc/cli.hpp>

int main(int argc, char** argv) {
  CLI::App app{"complex metrics, immersion data and monodromy toolkit"};
  cgc::cli::Options o;
  int refine = 0;
  uint64_t seed = 0;
  app.add_option("command", o.command, "check-gc | develop | monodromy | sweep | gauss-bonnet | geodesic | models")
      ->required()
      ->check(CLI::IsMember(cgc::cli::commands()));
  app.add_option("--config", o.config, "experiment config (JSON)");
  app.add_option("--out", o.out, "output directory")->capture_default_str();
  auto* r = app.add_option("--refine", refine, "number of grid refinements");
  auto* s = app.add_option("--seed", seed, "seed for randomized checks");
  app.add_flag("--wall-time", o.wall_time, "record wall time in the report (breaks byte-identical output)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : cgc::cli::kUsage;
  }
  if (r->count()) o.refine = refine;
  if (s->count()) o.seed = seed;
  return cgc::cli::run(o, std::cout);
}
