#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "logcave/common.hpp"
#include "logcave/experiments.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw logcave::ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct SubState {
  CLI::App* sub = nullptr;
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool serial = false;
  bool emit_svg = false;
  bool timestamp = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logcave: level-set density approximation laboratory"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> names = {
      {"polytope-rate", "inscribed-polytope volume deficit against direction count"},
      {"approx", "ladder approximation of a log-concave density: L1 gap, tail, sandwich"},
      {"estimate", "minimum-distance selection trials against a known truth"},
      {"vc", "shattering, growth counting, and empirical-process decay"},
      {"rate", "learning curve of the selector over growing samples"},
  };
  std::vector<SubState> subs(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    SubState& st = subs[i];
    st.sub = app.add_subcommand(names[i].first, names[i].second);
    st.sub->add_option("-c,--config", st.config_path, "JSON config file");
    st.sub->add_option("-o,--out", st.out_dir, "output directory")->capture_default_str();
    st.sub->add_option("-s,--seed", st.seed, "seed override");
    st.sub->add_flag("--serial", st.serial, "single-threaded execution");
    st.sub->add_flag("--svg", st.emit_svg, "also write SVG charts");
    st.sub->add_flag("--timestamp", st.timestamp, "stamp the result JSON (never the CSVs)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < names.size(); ++i) {
      const SubState& st = subs[i];
      if (!st.sub->parsed()) continue;

      logcave::ExperimentConfig cfg;
      if (!st.config_path.empty()) cfg = logcave::config_from_json(read_file(st.config_path));
      cfg.subcommand = names[i].first;
      if (st.sub->count("--seed")) cfg.seed = st.seed;
      if (st.serial) cfg.serial = true;

      logcave::ResultRecord rec = logcave::run_experiment(cfg);

      fs::create_directories(st.out_dir);
      const fs::path base(st.out_dir);
      const std::string stem = rec.subcommand;

      const fs::path result = base / (stem + "_result.json");
      write_file(result, logcave::record_to_json(rec, st.timestamp));
      std::cout << "wrote " << result.string() << "\n";
      for (const auto& [tname, csv] : rec.tables) {
        const fs::path p = base / (stem + "_" + tname + ".csv");
        write_file(p, csv);
        std::cout << "wrote " << p.string() << "\n";
      }
      if (st.emit_svg) {
        for (const auto& [cname, svg] : rec.charts) {
          const fs::path p = base / (stem + "_" + cname + ".svg");
          write_file(p, svg);
          std::cout << "wrote " << p.string() << "\n";
        }
      }
      for (const auto& [k, v] : rec.metrics) std::printf("  %s = %.12g\n", k.c_str(), v);
      return 0;
    }
  } catch (const logcave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const logcave::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
