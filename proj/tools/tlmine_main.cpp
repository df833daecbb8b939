#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tlmine/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "tlmine: temporal-logic robustness evaluation and "
      "falsification-domain mining"};
  app.require_subcommand(1);

  std::string config_path;
  std::string trace_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  std::size_t budget_override = 0;
  int jobs_override = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_option("--budget", budget_override,
                    "override the optimizer budget");
    sub->add_option("--jobs", jobs_override, "override the worker count");
    sub->add_option("--out", out_override, "override the output directory");
    return sub;
  };

  CLI::App* c_rob = add_common(app.add_subcommand(
      "robustness", "evaluate the formula on a recorded trace"));
  c_rob->add_option("--trace", trace_path,
                    "trace CSV, overrides config.robustness.trace");
  CLI::App* c_mine = add_common(app.add_subcommand(
      "mine", "search for one falsifying parameter valuation"));
  CLI::App* c_rgda = add_common(app.add_subcommand(
      "rgda", "random-weight falsification-domain exploration"));
  CLI::App* c_sda = add_common(app.add_subcommand(
      "sda", "structured ray-search falsification-domain exploration"));
  CLI::App* c_sweep = add_common(
      app.add_subcommand("sweep", "grid-evaluate robustness over theta"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    tlmine::RunConfig config = tlmine::load_run_config(config_path);
    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed")) config.seed = seed_override;
    if (sub->count("--budget")) config.optimizer.budget = budget_override;
    if (sub->count("--jobs")) config.jobs = jobs_override;
    if (sub->count("--out")) config.out = out_override;

    if (sub == c_rob) return tlmine::cmd_robustness(config, trace_path);
    if (sub == c_mine) return tlmine::cmd_mine(config);
    if (sub == c_rgda) return tlmine::cmd_rgda(config);
    if (sub == c_sda) return tlmine::cmd_sda(config);
    if (sub == c_sweep) return tlmine::cmd_sweep(config);
    std::cerr << "error: no command selected\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
