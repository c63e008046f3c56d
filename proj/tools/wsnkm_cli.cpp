// wsnkm: runs one experiment recipe and writes its CSV.
//
// Exit codes:
//   0  success
//   1  unexpected runtime failure
//   2  parse error (bad flags, unreadable or malformed scenario, unknown recipe)
//   3  validation error (scenario parsed but violates an invariant, e.g. no seed)
//   4  could not write the output file

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "wsnkm/experiments.hpp"

namespace {

enum Exit { ok = 0, failure = 1, parse_error = 2, validation_error = 3, io_error = 4 };

bool known_recipe(const std::string& name) {
  for (const char* r : wsnkm::kRecipes) {
    if (name == r) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-management experiments for sensor networks"};
  std::string scenario_path;
  std::string recipe;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicas;

  std::string recipe_list;
  for (const char* r : wsnkm::kRecipes) recipe_list += std::string(recipe_list.empty() ? "" : ", ") + r;

  app.add_option("--scenario", scenario_path, "Scenario file (key = value); built-in defaults when omitted");
  app.add_option("--recipe", recipe, "One of: " + recipe_list)->required();
  app.add_option("--out", out_dir, "Output directory (overrides out_dir)");
  app.add_option("--seed", seed, "Base seed (overrides seed)");
  app.add_option("--replicas", replicas, "Replicas per sweep point (overrides replicas)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return parse_error;
  }

  try {
    if (!known_recipe(recipe)) {
      std::cerr << "unknown recipe '" << recipe << "' (expected one of: " << recipe_list << ")\n";
      return parse_error;
    }
    wsnkm::Scenario s;
    if (!scenario_path.empty()) {
      s = wsnkm::load_scenario(scenario_path);
    } else {
      s = wsnkm::parse_scenario(wsnkm::KeyValueFile{});
    }
    if (seed) s.seed = *seed;
    if (replicas) s.replicas = *replicas;
    if (!out_dir.empty()) s.out_dir = out_dir;
    s.validate();

    auto result = wsnkm::run_recipe(recipe, s);

    std::error_code ec;
    std::filesystem::create_directories(s.out_dir, ec);
    auto path = s.out_dir / result.file_name;
    std::ofstream out(path, std::ios::binary);
    if (ec || !out) {
      std::cerr << "cannot write " << path.string() << "\n";
      return io_error;
    }
    out << result.csv;
    if (!out.flush()) {
      std::cerr << "cannot write " << path.string() << "\n";
      return io_error;
    }
    std::cout << path.string() << "\n";
    return ok;
  } catch (const wsnkm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case wsnkm::ErrorKind::parse:
      case wsnkm::ErrorKind::io:
        return parse_error;
      case wsnkm::ErrorKind::validation:
      case wsnkm::ErrorKind::invalid_params:
      case wsnkm::ErrorKind::invalid_schedule:
        return validation_error;
      default:
        return failure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failure;
  }
}
