#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "rete/cli/commands.hpp"
#include "rete/error.hpp"

namespace {

rete::RunConfig build_config(const std::string& path, const std::vector<std::string>& overrides) {
  rete::RunConfig cfg = path.empty() ? rete::RunConfig{} : rete::RunConfig::load(path);
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw rete::Error(rete::ErrorCode::kConfig, "--set expects key=value, got '" + item + "'");
    }
    cfg.set(item.substr(0, eq), item.substr(eq + 1));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rete: temporal event forecasting over evolving knowledge graphs"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_config_flags = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "key = value config file");
    cmd->add_option("--set", overrides, "override a config key (key=value)")->take_all();
  };

  auto* ingest = app.add_subcommand("ingest", "build the snapshot store from raw logs");
  auto* sample = app.add_subcommand("sample", "sample per-user subgraphs for every step");
  auto* train = app.add_subcommand("train", "pretrain and train the model");
  auto* eval = app.add_subcommand("eval", "evaluate on the validation or test window");
  auto* export_attention = app.add_subcommand("export-attention", "dump temporal attention for a user");
  for (CLI::App* cmd : {ingest, sample, train, eval, export_attention}) add_config_flags(cmd);

  std::string user;
  export_attention->add_option("--user", user, "user name")->required();

  auto* selftest = app.add_subcommand("selftest", "run built-in oracle checks");

  auto* synth = app.add_subcommand("synth", "write a planted synthetic dataset");
  std::string synth_out;
  bool drift = false;
  std::uint64_t synth_seed = 0;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_flag("--drift", drift, "preferences drift and flip during the test window");
  synth->add_option("--seed", synth_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*selftest) return rete::cmd_selftest(std::cout) ? 0 : 1;
    if (*synth) {
      rete::cmd_synth(synth_out, drift, synth_seed, std::cout);
      return 0;
    }
    const rete::RunConfig cfg = build_config(config_path, overrides);
    if (*ingest) rete::cmd_ingest(cfg, std::cout);
    else if (*sample) rete::cmd_sample(cfg, std::cout);
    else if (*train) rete::cmd_train(cfg, std::cout);
    else if (*eval) rete::cmd_eval(cfg, std::cout);
    else if (*export_attention) rete::cmd_export_attention(cfg, user, std::cout);
  } catch (const rete::Error& e) {
    std::cerr << "ERROR " << rete::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ERROR internal: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
