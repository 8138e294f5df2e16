// dnls command-line front end. Links only the C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dnls/dnls.h"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

void print_line(const char* line, void*) {
  std::puts(line);
  std::fflush(stdout);
}

int fail(dnls_status status) {
  std::fprintf(stderr, "error: %s: %s\n", dnls_status_string(status), dnls_last_error());
  return status == DNLS_INVALID_ARGUMENT || status == DNLS_CONFIG_ERROR ? kValidation : kRuntime;
}

struct ConfigHandle {
  dnls_config* ptr = nullptr;
  ~ConfigHandle() { dnls_config_free(ptr); }
};

// Loads a config file; any failure here is the caller's input, so it maps to exit 1.
int load(const std::string& path, const std::string& out_dir, ConfigHandle& config) {
  dnls_status st = dnls_config_load(path.c_str(), &config.ptr);
  if (st == DNLS_OK && !out_dir.empty()) st = dnls_config_set_output_dir(config.ptr, out_dir.c_str());
  if (st != DNLS_OK) {
    std::fprintf(stderr, "error: %s: %s\n", dnls_status_string(st), dnls_last_error());
    return kValidation;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-step solver for a dissipatively coupled pair of cubic Schroedinger equations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dnls_version()));

  std::string config_path;
  std::string out_dir;
  unsigned workers = 0;

  auto* evolve = app.add_subcommand("evolve", "Integrate each configured case; write trajectory and observer tables");
  auto* mprofile = app.add_subcommand("mprofile", "Compute the m profiles and the survival classification");
  auto* sweep = app.add_subcommand("sweep", "Run the epsilon sweep; write sweep.tsv and orderfit.tsv");
  for (auto* sub : {evolve, mprofile, sweep}) {
    sub->add_option("config", config_path, "Configuration file")->required();
    sub->add_option("-o,--out", out_dir, "Output directory (overrides outputs.directory)");
  }
  sweep->add_option("-j,--workers", workers, "Concurrent cases (0 = hardware threads)");

  auto* verify = app.add_subcommand("verify", "Run the acceptance property suite on the built-in configurations");
  std::vector<int> only;
  verify->add_option("--only", only, "Criterion ids to run (default: all)")->check(CLI::Range(1, 12));
  verify->add_option("-j,--workers", workers, "Concurrent sweep cases (0 = hardware threads)");

  auto* scenario = app.add_subcommand("scenario", "Corollary scenario report");
  std::string scenario_name;
  scenario->add_option("name", scenario_name, "A, B or symmetric")
      ->required()
      ->check(CLI::IsMember({"A", "B", "symmetric"}));
  scenario->add_option("-o,--out", out_dir, "Output directory")->default_val(".");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) std::fputs(app.help().c_str(), stderr);
    return code == 0 ? kOk : kValidation;
  }

  if (verify->parsed()) {
    int failures = 0;
    const dnls_status st = dnls_run_verify(only.data(), only.size(), workers, print_line, nullptr, &failures);
    if (st != DNLS_OK) return fail(st);
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? kOk : kValidation;
  }
  if (scenario->parsed()) {
    const dnls_status st = dnls_run_scenario(scenario_name.c_str(), out_dir.c_str(), print_line, nullptr);
    return st == DNLS_OK ? kOk : fail(st);
  }

  ConfigHandle config;
  if (const int rc = load(config_path, out_dir, config); rc != kOk) return rc;
  dnls_status st = DNLS_OK;
  if (evolve->parsed()) {
    st = dnls_run_evolve(config.ptr, print_line, nullptr);
  } else if (mprofile->parsed()) {
    st = dnls_run_mprofile(config.ptr, print_line, nullptr);
  } else {
    st = dnls_run_sweep(config.ptr, workers, print_line, nullptr);
  }
  return st == DNLS_OK ? kOk : fail(st);
}
