#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fpplab.h"

namespace {

int exit_code_for(fpp_status st) {
  std::fprintf(stderr, "error: %s\n", fpp_last_error());
  if (st == FPP_ERR_CONFIG) return 2;
  if (st == FPP_ERR_RESOURCE) return 3;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-passage-percolation laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::uint64_t seed = 0;
  int workers = 1;
  std::int64_t d_flag = 2, m_flag = 0;

  const std::vector<std::pair<const char*, const char*>> subs = {
      {"scaling", "maximal geodesic weight against the order function"},
      {"ldp-iid", "tail frequencies of iid sums"},
      {"ldp-restricted", "tail frequencies of box-restricted passage times"},
      {"event-prob", "good-edge / black-box / A-condition frequencies"},
      {"concentration", "variance of the point-to-point passage time"},
      {"xi-verify", "hierarchical edge-family condition report"},
      {"simulate", "single passage-time query"},
  };
  for (const auto& [name, desc] : subs) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON config path");
    sub->add_option("--seed", seed, "master seed override");
    sub->add_option("--workers", workers, "worker thread count override");
    sub->add_option("--out", out_path, "output stem; writes <out>.csv and <out>.json");
    if (std::string(name) == "xi-verify") {
      sub->add_option("-d,--dim", d_flag, "dimension (shortcut, no config needed)");
      sub->add_option("-m,--span", m_flag, "family span m (shortcut, no config needed)");
    }
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  nlohmann::json cfg = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::fprintf(stderr, "error: cannot read config %s\n", config_path.c_str());
      return 2;
    }
    try {
      in >> cfg;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
    if (!cfg.is_object()) {
      std::fprintf(stderr, "error: config must be a JSON object\n");
      return 2;
    }
  } else if (name != "xi-verify") {
    std::fprintf(stderr, "error: %s requires --config\n", name.c_str());
    return 2;
  }

  if (cfg.contains("experiment") && cfg["experiment"] != name) {
    std::fprintf(stderr, "error: config experiment does not match subcommand %s\n", name.c_str());
    return 2;
  }
  cfg["experiment"] = name;
  if (sub->count("--seed")) cfg["seed"] = seed;
  if (sub->count("--workers")) cfg["workers"] = workers;
  if (name == "xi-verify") {
    if (sub->count("--dim") || !cfg.contains("d")) cfg["d"] = d_flag;
    if (sub->count("--span")) cfg["m"] = m_flag;
  }

  std::string stem = out_path;
  if (stem.empty() && cfg.contains("out") && cfg["out"].is_string())
    stem = cfg["out"].get<std::string>();

  fpp_report* rep = nullptr;
  const fpp_status st = fpp_run_experiment(cfg.dump().c_str(), &rep);
  if (st != FPP_OK) return exit_code_for(st);

  int rc = 0;
  if (stem.empty()) {
    std::fputs(fpp_report_json(rep), stdout);
  } else {
    std::ofstream csv(stem + ".csv", std::ios::binary);
    std::ofstream js(stem + ".json", std::ios::binary);
    if (!csv || !js) {
      std::fprintf(stderr, "error: cannot write outputs at %s\n", stem.c_str());
      rc = 1;
    } else {
      csv << fpp_report_csv(rep);
      js << fpp_report_json(rep);
    }
  }
  fpp_report_destroy(rep);
  return rc;
}
