#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "latus/experiment.hpp"

namespace {

int fail(const std::string &kind, const std::string &message, const std::vector<std::string> &violations = {}) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j["violations"] = violations;
  std::cout << j.dump() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Slotted simulator for multi-tier UAV edge computing"};
  std::string config_path;
  std::vector<std::string> policies;
  std::vector<std::uint64_t> seeds;
  int n_seeds = 0;
  int slots = 0;
  std::vector<std::string> sweep;
  std::string out_dir = "out";
  app.add_option("--config", config_path, "YAML config file; omitted means defaults");
  app.add_option("--policy", policies, "LATUS, FT_LATUS, DELAY_ONLY, PER_SLOT_CAP or ENERGY_CENTRIC (repeatable)");
  auto *seed_opt = app.add_option("--seed", seeds, "seed (repeatable)");
  app.add_option("--seeds", n_seeds, "use seeds 1..N")->excludes(seed_opt)->check(CLI::PositiveNumber);
  app.add_option("--slots", slots, "override the number of slots")->check(CLI::PositiveNumber);
  app.add_option("--sweep", sweep, "sweep axis followed by its values, e.g. --sweep K 0.1 1 10")->expected(2, -1);
  app.add_option("--out", out_dir, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return fail("usage", e.what());
  }

  latus::ExperimentSpec spec;
  spec.out_dir = out_dir;
  try {
    spec.config = config_path.empty() ? latus::parse_config("") : latus::load_config(config_path);
    if (slots > 0) spec.config.params.n_slots = slots;
    if (policies.empty()) policies.push_back("LATUS");
    std::vector<std::string> errors;
    for (const auto &p : policies) {
      if (auto k = latus::parse_policy(p)) spec.policies.push_back(*k);
      else errors.push_back("unknown policy " + p);
    }
    if (n_seeds > 0)
      for (int s = 1; s <= n_seeds; ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
    else spec.seeds = seeds.empty() ? std::vector<std::uint64_t>{1} : seeds;
    if (!sweep.empty()) {
      if (auto a = latus::parse_axis(sweep.front())) spec.axis = *a;
      else errors.push_back("unknown sweep axis " + sweep.front());
      for (std::size_t i = 1; i < sweep.size(); ++i) {
        try {
          std::size_t used = 0;
          spec.values.push_back(std::stod(sweep[i], &used));
          if (used != sweep[i].size()) throw std::invalid_argument(sweep[i]);
        } catch (const std::exception &) {
          errors.push_back("sweep value " + sweep[i] + " is not a number");
        }
      }
    }
    for (auto &e : latus::validate_experiment(spec)) errors.push_back(std::move(e));
    for (auto &e : latus::validate(spec.config.params, spec.config.fleet)) errors.push_back(std::move(e));
    if (!errors.empty()) throw latus::ConfigError(std::move(errors));
  } catch (const latus::ConfigError &e) {
    return fail("config", e.what(), e.violations());
  }

  try {
    latus::ensure_output_dir(spec.out_dir);
    const auto runs = latus::run_experiment(spec);
    latus::write_outputs(runs, spec.out_dir);
    nlohmann::ordered_json j;
    j["runs"] = runs.size();
    j["out"] = spec.out_dir;
    std::cout << j.dump() << '\n';
  } catch (const latus::ConfigError &e) {
    return fail("config", e.what(), e.violations());
  } catch (const std::exception &e) {
    return fail("runtime", e.what());
  }
  return EXIT_SUCCESS;
}
