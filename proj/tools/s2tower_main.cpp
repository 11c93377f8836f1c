#include <string>

#include "CLI11.hpp"
#include "s2t/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sharply 2-transitive tower toolchain: exact embeddings into SL_n(Q)"};
  app.require_subcommand(1);

  s2t::CliOptions opt;
  std::uint64_t seed_flag = 0;

  auto add_common = [&](CLI::App* sub, bool wants_config) {
    auto* c = sub->add_option("--config", opt.config, "run configuration (JSON)");
    if (wants_config) c->check(CLI::ExistingFile);
    sub->add_option("--state", opt.state, "tower state file (default <out>/tower.json)");
    sub->add_option("--out", opt.out, "output directory override");
    sub->add_option("--radius", opt.radius, "ball radius override for scans and checks");
    sub->add_option("--seed", seed_flag, "seed override")->each([&](const std::string&) {
      opt.seed = seed_flag;
    });
  };

  CLI::App* boot = app.add_subcommand("bootstrap", "build the first stage from a config");
  add_common(boot, true);

  CLI::App* tower = app.add_subcommand("tower", "extend an existing state to a stage budget");
  add_common(tower, true);
  tower->add_option("--stages", opt.stages, "absolute stage target (overrides config)");
  tower->add_flag("--resume", opt.resume,
                  "continue from the saved state (the default behaviour; kept for scripts)");

  CLI::App* verify = app.add_subcommand("verify", "run the finite-ball check battery");
  add_common(verify, false);

  CLI::App* cert = app.add_subcommand("cert", "inspect or replay an embedding certificate");
  cert->add_option("mode", opt.cert_mode, "'show' or 'replay'")->required();
  cert->add_option("path", opt.cert_path, "certificate file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : s2t::kExitInputError;
  }

  return s2t::run_cli(app.get_subcommands().front()->get_name(), opt);
}
