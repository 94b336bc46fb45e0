// hnls_lab: command-line driver for the verification and simulation runs.
//
//   hnls_lab verify --suite traces,identities --out results
//   hnls_lab simulate --config run.json --out results --threads 4
//
// Each run writes <out>/<command>.csv and <out>/<command>.manifest.json.
// Exit codes: 0 all rows pass, 1 a property failed, 2 usage or config
// error, 3 numerical abort.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "hnls/experiments.hpp"
#include "hnls/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2, kAbort = 3;

struct CommonOptions {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::optional<double> tolerance_scale;
  std::optional<std::string> suite;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) parts.push_back(item);
  return parts;
}

hnls::lab::ExperimentConfig load(const CommonOptions& o, bool is_verify) {
  json doc = json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw hnls::InvalidParameterError("cannot read config " + o.config);
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw hnls::InvalidParameterError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  if (o.seed) doc["seed"] = *o.seed;
  if (o.tolerance_scale) doc["tolerance_scale"] = *o.tolerance_scale;
  if (is_verify && o.suite) doc["suites"] = split(*o.suite);
  if (is_verify && doc.contains("suites") && doc["suites"].empty())
    throw hnls::InvalidParameterError("empty suite list");
  return hnls::lab::config_from_json(doc);
}

int run(const std::string& command, const CommonOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  hnls::lab::ExperimentConfig config;
  try {
    config = load(o, command == "verify");
  } catch (const hnls::Error& e) {
    std::cerr << "hnls_lab: " << e.what() << '\n';
    return kUsage;
  }
  hnls::set_thread_count(o.threads);

  hnls::lab::RunOutput result;
  int code = kPass;
  try {
    if (command == "verify") result = hnls::lab::run_verify(config);
    if (command == "simulate") result = hnls::lab::run_simulate(config);
    if (command == "alpha-scan") result = hnls::lab::run_alpha_scan(config);
    if (command == "apriori") result = hnls::lab::run_apriori(config);
    if (command == "norms") result = hnls::lab::run_norms(config);
    code = result.aborted ? kAbort : result.all_pass() ? kPass : kFail;
  } catch (const hnls::NumericalError& e) {
    result.message = e.what();
    code = kAbort;
  } catch (const hnls::Error& e) {
    std::cerr << "hnls_lab: " << e.what() << '\n';
    return kUsage;
  }

  std::error_code ec;
  fs::create_directories(o.out, ec);
  const fs::path stem = fs::path(o.out) / command;
  {
    std::ofstream csv(stem.string() + ".csv", std::ios::binary);
    csv << hnls::lab::to_csv(result.rows);
    if (!csv) {
      std::cerr << "hnls_lab: cannot write " << stem.string() << ".csv\n";
      return kUsage;
    }
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::size_t failed = 0;
  for (const auto& r : result.rows) failed += !r.pass;
  json manifest = {
      {"command", command},
      {"config", hnls::lab::config_to_json(config)},
      {"seed", config.seed},
      {"threads", o.threads},
      {"versions",
       {{"hnls", "0.1.0"},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"compiler", __VERSION__}}},
      {"wall_time_seconds", wall},
      {"rows", result.rows.size()},
      {"failed_rows", failed},
      {"aborted", code == kAbort},
      {"message", result.message},
      {"exit_code", code},
  };
  std::ofstream(stem.string() + ".manifest.json") << manifest.dump(2) << '\n';

  std::cout << command << ": " << result.rows.size() << " rows, " << failed
            << " failed";
  if (!result.message.empty()) std::cout << " (" << result.message << ")";
  std::cout << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbation-determinant experiments for the third-order NLS"};
  app.require_subcommand(1);
  CommonOptions opts;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"verify", "Run the property suites"},
      {"simulate", "Integrate one trajectory and record the monitors"},
      {"alpha-scan", "Boost family alpha(u_n(t), k) with the inequality chain"},
      {"apriori", "Small-data bound on the modulation norm"},
      {"norms", "Norms of the configured field"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config, "JSON config file");
    sub->add_option("--out", opts.out, "Output directory");
    sub->add_option("--seed", opts.seed, "Random seed");
    sub->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--tolerance-scale", opts.tolerance_scale, "Multiplies every tolerance");
    if (name == "verify")
      sub->add_option("--suite", opts.suite,
                      "Comma-separated suites: traces, identities, lemmas, norms");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kUsage;
  }
  for (const auto& [name, help] : commands)
    if (app.got_subcommand(name)) return run(name, opts);
  return kUsage;
}
