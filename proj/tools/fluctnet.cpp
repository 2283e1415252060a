#include <CLI11.hpp>

#include <cstdlib>
#include <optional>
#include <string>

#include <fluctnet/cli.hpp>

int main(int argc, char** argv) {
  CLI::App app{"fluctnet: steady states, cumulant generating functions and fluctuation relations of harmonic networks"};
  app.require_subcommand(1);
  std::string config, out, format;
  int threads = 0;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed");
  };
  for (const char* name : {"steady", "cgf", "rate", "simulate", "scan"}) add_common(app.add_subcommand(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : fluctnet::cli::config_error;
  }
  if (threads == 0) {
    const char* env = std::getenv("FLUCTNET_THREADS");
    threads = env ? std::max(1, std::atoi(env)) : 1;
  }
  std::optional<std::uint64_t> s;
  for (auto* sub : app.get_subcommands())
    if (sub->count("--seed")) s = seed;
  const std::string cmd = app.get_subcommands().front()->get_name();
  return fluctnet::cli::run_file(cmd, config, out, format, threads, s);
}
